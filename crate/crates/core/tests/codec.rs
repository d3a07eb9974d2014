use pwpolar::channel::{awgn_add, qpsk_llr, qpsk_modulate, ChannelParams};
use pwpolar::codec::{
    ca_scl_decode, decode, encode, encode_message, polar_transform, scl_decode, CrcSpec,
    DecoderKind,
};
use pwpolar::construction::Method;
use pwpolar::reliability::{select_code, CodeSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn code(len: usize, k: usize) -> CodeSpec {
    let seq = Method::pw_default().sequence(len.trailing_zeros()).unwrap();
    select_code(&seq, len, k).unwrap()
}

fn random_bits(rng: &mut ChaCha8Rng, len: usize) -> Vec<u8> {
    (0..len).map(|_| rng.random_range(0..2u8)).collect()
}

fn noisy_llr(x: &[u8], esn0_db: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let channel = ChannelParams::from_esn0_db(esn0_db).unwrap();
    let mut s = qpsk_modulate(x).unwrap();
    awgn_add(&mut s, &channel, rng);
    qpsk_llr(&s, &channel).unwrap()
}

#[test]
fn encoder_is_linear() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let c = code(128, 70);
    for _ in 0..200 {
        let (a, b) = (random_bits(&mut rng, 70), random_bits(&mut rng, 70));
        let ab: Vec<u8> = a.iter().zip(&b).map(|(x, y)| x ^ y).collect();
        let (xa, xb) = (encode(&c, &a).unwrap(), encode(&c, &b).unwrap());
        let xab: Vec<u8> = xa.iter().zip(&xb).map(|(x, y)| x ^ y).collect();
        assert_eq!(encode(&c, &ab).unwrap(), xab);
    }
}

#[test]
fn transform_round_trips_source_word() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let c = code(64, 40);
    let u = random_bits(&mut rng, 40);
    let mut d = encode(&c, &u).unwrap();
    polar_transform(&mut d);
    for (pos, dv) in d.iter().enumerate() {
        if c.is_frozen(pos) {
            assert_eq!(*dv, 0);
        }
    }
    let info: Vec<u8> = c.info_set().iter().map(|&p| d[p]).collect();
    assert_eq!(info, u);
}

#[test]
fn noiseless_decoding_recovers_message() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (len, k) in [(8, 4), (64, 32), (256, 200), (1024, 512)] {
        let c = code(len, k);
        let u = random_bits(&mut rng, k);
        let x = encode(&c, &u).unwrap();
        let llr: Vec<f64> = x.iter().map(|&b| if b == 0 { 4.0 } else { -4.0 }).collect();
        for kind in [DecoderKind::Sc, DecoderKind::Scl { list: 8 }] {
            let r = decode(&llr, &c, kind).unwrap();
            assert_eq!(r.selected.info_bits, u, "{kind} at N={len}");
            assert_eq!(r.selected.path_metric, 0.0);
        }
    }
}

#[test]
fn list_candidates_sorted_and_distinct() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let c = code(64, 32);
    for _ in 0..50 {
        let x = encode(&c, &random_bits(&mut rng, 32)).unwrap();
        let llr = noisy_llr(&x, 1.0, &mut rng);
        let r = scl_decode(&llr, &c, 8).unwrap();
        assert_eq!(r.candidates.len(), 8);
        assert!(r
            .candidates
            .windows(2)
            .all(|w| w[0].path_metric <= w[1].path_metric));
        for (a, i) in r.candidates.iter().zip(0..) {
            for b in &r.candidates[i + 1..] {
                assert_ne!(a.source_word, b.source_word);
            }
        }
    }
}

fn crc_oracle_check(payload: &[u8]) -> bool {
    let mut generator = vec![1u8];
    generator.extend("1010001010110111001".bytes().map(|c| c - b'0'));
    let mut work = payload.to_vec();
    for i in 0..payload.len() - 19 {
        if work[i] == 1 {
            for (j, &g) in generator.iter().enumerate() {
                work[i + j] ^= g;
            }
        }
    }
    work.iter().all(|&b| b == 0)
}

/// The selected word must be the first CRC-passing one among the `check`
/// best list candidates, or the best candidate marked as failing.
#[test]
fn ca_scl_selection_rule() {
    let (len, k, list, check) = (64, 30, 16, 8);
    let crc = CrcSpec::table_i();
    let c = code(len, k + crc.width()).with_crc(crc).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut passes, mut fails) = (0, 0);
    for _ in 0..400 {
        let msg = random_bits(&mut rng, k);
        let x = encode_message(&c, &msg).unwrap();
        let llr = noisy_llr(&x, rng.random_range(-1.0..3.0), &mut rng);
        let list_out = scl_decode(&llr, &c, list).unwrap();
        let got = ca_scl_decode(&llr, &c, list, check).unwrap();
        match list_out
            .candidates
            .iter()
            .take(check)
            .find(|cand| crc_oracle_check(&cand.info_bits))
        {
            Some(first) => {
                passes += 1;
                assert_eq!(got.selected.source_word, first.source_word);
                assert_eq!(got.selected.crc_pass, Some(true));
            }
            None => {
                fails += 1;
                assert_eq!(got.selected.source_word, list_out.candidates[0].source_word);
                assert_eq!(got.selected.crc_pass, Some(false));
            }
        }
    }
    assert!(
        passes > 0 && fails > 0,
        "both branches exercised: {passes}/{fails}"
    );
}

#[test]
fn ca_scl_requires_crc_and_valid_depth() {
    let plain = code(64, 40);
    let llr = vec![1.0; 64];
    assert!(ca_scl_decode(&llr, &plain, 8, 4).is_err());
    let with = code(64, 40).with_crc(CrcSpec::table_i()).unwrap();
    assert!(ca_scl_decode(&llr, &with, 8, 9).is_err());
    assert!(ca_scl_decode(&llr, &with, 8, 0).is_err());
    assert!(scl_decode(&llr, &plain, 0).is_err());
    assert!(decode(&[1.0; 63], &plain, DecoderKind::Sc).is_err());
    assert!(decode(&[f64::NAN; 64], &plain, DecoderKind::Sc).is_err());
}

#[test]
fn crc_detects_short_bursts() {
    let crc = CrcSpec::table_i();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..2000 {
        let len = rng.random_range(1..120);
        let msg = random_bits(&mut rng, len);
        let mut word = crc.attach(&msg);
        // Error pattern spanning at most 19 bits, first and last bits set.
        let burst = rng.random_range(1..=19usize);
        let start = rng.random_range(0..=word.len() - burst);
        word[start] ^= 1;
        if burst > 1 {
            for b in &mut word[start + 1..start + burst - 1] {
                *b ^= rng.random_range(0..2u8);
            }
            word[start + burst - 1] ^= 1;
        }
        assert!(!crc.check(&word).unwrap());
    }
}

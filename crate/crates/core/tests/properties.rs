use proptest::prelude::*;

use pwpolar::codec::{encode, polar_transform, sc_decode, scl_decode, CrcSpec};
use pwpolar::construction::{HpwParams, Method, PwParams};
use pwpolar::reliability::{extract_nested, select_code, CodeSpec};

fn method_strategy() -> impl Strategy<Value = Method> {
    prop_oneof![
        (1.01f64..1.6).prop_map(|b| Method::Pw(PwParams::new(b).unwrap())),
        (1.01f64..1.6, 0.0f64..1.0).prop_map(|(b, w)| {
            Method::Hpw(HpwParams::new(b, vec![0, 1], vec![1.0, w]).unwrap())
        }),
        Just(Method::epw_default()),
        (-2.0f64..8.0).prop_map(|s| Method::ga(s).unwrap()),
        (0.05f64..0.95).prop_map(|e| format!("bec:eps={e}").parse().unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sequence_is_permutation(m in method_strategy(), n in 0u32..9) {
        let seq = m.sequence(n).unwrap();
        let mut order = seq.order().to_vec();
        order.sort_unstable();
        prop_assert_eq!(order, (0..1usize << n).collect::<Vec<_>>());
    }

    #[test]
    fn pw_family_sequences_nest(m in method_strategy(), n in 1u32..10) {
        prop_assume!(m.is_pw_family());
        let full = m.sequence(n).unwrap();
        for s in 0..=n {
            prop_assert_eq!(extract_nested(&full, 1 << s).unwrap(), m.sequence(s).unwrap());
        }
    }

    #[test]
    fn select_code_partitions(n in 1u32..9, frac in 0.0f64..=1.0) {
        let len = 1usize << n;
        let k = ((len as f64) * frac).round() as usize;
        let seq = Method::hpw_default().sequence(n).unwrap();
        let code = select_code(&seq, len, k).unwrap();
        prop_assert_eq!(code.info_length(), k);
        let mut all: Vec<usize> = code.info_set().iter().chain(code.frozen_set()).copied().collect();
        all.sort_unstable();
        prop_assert_eq!(all, (0..len).collect::<Vec<_>>());
        let mut tail = seq.order()[len - k..].to_vec();
        tail.sort_unstable();
        prop_assert_eq!(tail.as_slice(), code.info_set());
        prop_assert_eq!(CodeSpec::new(len, code.info_set().to_vec()).unwrap(), code);
    }

    #[test]
    fn transform_involution(bits in prop::collection::vec(0u8..2, 1..=8usize)
        .prop_flat_map(|seed| prop::collection::vec(0u8..2, 1usize << seed.len())))
    {
        let mut x = bits.clone();
        polar_transform(&mut x);
        polar_transform(&mut x);
        prop_assert_eq!(x, bits);
    }

    #[test]
    fn crc_round_trip(msg in prop::collection::vec(0u8..2, 1..300), flip in any::<prop::sample::Index>()) {
        let crc = CrcSpec::table_i();
        let mut word = crc.attach(&msg);
        prop_assert!(crc.check(&word).unwrap());
        let at = flip.index(word.len());
        word[at] ^= 1;
        prop_assert!(!crc.check(&word).unwrap());
    }

    #[test]
    fn list_of_one_is_sc(llr in prop::collection::vec(-6.0f64..6.0, 32), k in 0usize..=32) {
        let seq = Method::pw_default().sequence(5).unwrap();
        let code = select_code(&seq, 32, k).unwrap();
        let a = sc_decode(&llr, &code).unwrap().selected;
        let b = scl_decode(&llr, &code, 1).unwrap().selected;
        prop_assert_eq!(a, b);
    }

    #[test]
    fn decoding_clean_codeword(u in prop::collection::vec(0u8..2, 20), list in 1usize..6) {
        let seq = Method::epw_default().sequence(6).unwrap();
        let code = select_code(&seq, 64, 20).unwrap();
        let x = encode(&code, &u).unwrap();
        let llr: Vec<f64> = x.iter().map(|&b| if b == 0 { 2.5 } else { -2.5 }).collect();
        prop_assert_eq!(scl_decode(&llr, &code, list).unwrap().selected.info_bits, u);
    }
}

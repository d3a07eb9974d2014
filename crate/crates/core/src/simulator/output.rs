//! Fixed-format text output and the flat key-value config format.

use std::fmt::Write as _;

use super::{Comparison, DecoderSpec, EarlyExit, SimConfig, SweepResult};
use crate::error::{invalid, Result};

/// Six significant digits in the style of C's `%g`.
pub fn format_sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..6).contains(&exp) {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{m}e{sign}{:02}", exp.abs());
    }
    let decimals = (5 - exp) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Four decimals, the fixed format for every dB value.
pub fn format_db(x: f64) -> String {
    let s = format!("{x:.4}");
    if s == "-0.0000" {
        "0.0000".into()
    } else {
        s
    }
}

fn config_header(c: &SimConfig) -> String {
    let mut h = String::new();
    let _ = writeln!(h, "# n={}", c.n);
    let _ = writeln!(h, "# k={}", c.k);
    let _ = writeln!(h, "# method={}", c.method);
    let _ = writeln!(h, "# crc={}", c.crc);
    let _ = writeln!(h, "# decoder={}", c.decoder);
    let _ = writeln!(h, "# seed={}", c.seed);
    let _ = writeln!(h, "# min_errors={}", c.min_errors);
    let _ = writeln!(h, "# max_blocks={}", c.max_blocks);
    let _ = writeln!(h, "# target_bler={}", format_sig6(c.target_bler));
    let _ = writeln!(h, "# early_exit={}", c.early_exit);
    h
}

/// `snr_db,blocks,block_errors,bler` rows behind a `# key=value` header.
pub fn sweep_csv(result: &SweepResult) -> String {
    let mut out = config_header(&result.config);
    out.push_str("snr_db,blocks,block_errors,bler\n");
    for p in &result.points {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            format_db(p.snr_db),
            p.blocks,
            p.block_errors,
            format_sig6(p.bler)
        );
    }
    out
}

/// One row per K, one column per method; unbracketed cells are `NA`.
pub fn comparison_csv(table: &Comparison) -> String {
    let mut out = format!("# n={}\nk", table.n);
    for m in &table.methods {
        out.push(',');
        if m.contains(',') || m.contains('"') {
            let _ = write!(out, "\"{}\"", m.replace('"', "\"\""));
        } else {
            out.push_str(m);
        }
    }
    out.push('\n');
    for (k, row) in table.ks.iter().zip(&table.required) {
        out.push_str(&k.to_string());
        for cell in row {
            out.push(',');
            match cell {
                Some(v) => out.push_str(&format_db(*v)),
                None => out.push_str("NA"),
            }
        }
        out.push('\n');
    }
    out
}

/// Applies `key = value` lines (blank lines and `#` comments ignored) on
/// top of `base`.
///
/// Keys mirror [`SimConfig`]: `n`, `k`, `method`, `crc`, `decoder`,
/// `snr_start`, `snr_stop`, `snr_step`, `min_errors`, `max_blocks`, `seed`,
/// `target_bler`, `early_exit`.
pub fn parse_config(text: &str, base: SimConfig) -> Result<SimConfig> {
    let mut c = base;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| invalid(format!("config line {}: expected key = value", lineno + 1)))?;
        let (key, value) = (key.trim(), value.trim());
        let bad = |what: &str| invalid(format!("config line {}: bad {what} `{value}`", lineno + 1));
        match key {
            "n" => c.n = value.parse().map_err(|_| bad("n"))?,
            "k" => c.k = value.parse().map_err(|_| bad("k"))?,
            "method" => c.method = value.to_string(),
            "crc" => c.crc = parse_bool(value).ok_or_else(|| bad("crc"))?,
            "decoder" => c.decoder = value.parse::<DecoderSpec>()?,
            "snr_start" => c.snr.start = value.parse().map_err(|_| bad("snr_start"))?,
            "snr_stop" => c.snr.stop = value.parse().map_err(|_| bad("snr_stop"))?,
            "snr_step" => c.snr.step = value.parse().map_err(|_| bad("snr_step"))?,
            "min_errors" => c.min_errors = value.parse().map_err(|_| bad("min_errors"))?,
            "max_blocks" => c.max_blocks = value.parse().map_err(|_| bad("max_blocks"))?,
            "seed" => c.seed = value.parse().map_err(|_| bad("seed"))?,
            "target_bler" => c.target_bler = value.parse().map_err(|_| bad("target_bler"))?,
            "early_exit" => c.early_exit = value.parse::<EarlyExit>()?,
            other => {
                return Err(invalid(format!(
                    "config line {}: unknown key `{other}`",
                    lineno + 1
                )))
            }
        }
    }
    Ok(c)
}

fn parse_bool(s: &str) -> Option<bool> {
    match s.to_ascii_lowercase().as_str() {
        "true" | "yes" | "on" | "1" => Some(true),
        "false" | "no" | "off" | "0" => Some(false),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulator::BlerPoint;

    #[test]
    fn sig6() {
        assert_eq!(format_sig6(0.0), "0");
        assert_eq!(format_sig6(2.189207115), "2.18921");
        assert_eq!(format_sig6(1.0), "1");
        assert_eq!(format_sig6(0.0123456789), "0.0123457");
        assert_eq!(format_sig6(1e-3), "0.001");
        assert_eq!(format_sig6(1.5e-7), "1.5e-07");
        assert_eq!(format_sig6(-3.25), "-3.25");
        assert_eq!(format_sig6(1234567.0), "1.23457e+06");
        assert_eq!(format_sig6(999999.5), "1e+06");
    }

    #[test]
    fn db_format() {
        assert_eq!(format_db(3.0), "3.0000");
        assert_eq!(format_db(-0.00001), "0.0000");
        assert_eq!(format_db(2.34567), "2.3457");
    }

    #[test]
    fn csv_shape() {
        let r = SweepResult {
            config: SimConfig::default(),
            points: vec![
                BlerPoint::new(1.0, 1000, 200),
                BlerPoint::new(1.1, 4000, 200),
            ],
            required_snr_db: None,
            note: None,
        };
        let csv = sweep_csv(&r);
        let rows: Vec<&str> = csv.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(rows[0], "snr_db,blocks,block_errors,bler");
        assert_eq!(rows[1], "1.0000,1000,200,0.2");
        assert_eq!(rows[2], "1.1000,4000,200,0.05");
    }

    #[test]
    fn comparison_shape() {
        let t = Comparison {
            n: 128,
            methods: vec!["pw".into(), "hpw".into()],
            ks: vec![32, 64],
            required: vec![vec![Some(2.0), None], vec![Some(3.25), Some(3.3)]],
        };
        assert_eq!(
            comparison_csv(&t),
            "# n=128\nk,pw,hpw\n32,2.0000,NA\n64,3.2500,3.3000\n"
        );
    }

    #[test]
    fn config_file() {
        let text = "# desk run\nn = 128\nk=64\nmethod = hpw\ncrc = yes\ndecoder = ca-scl16/8\nsnr_step=0.2\nseed=9\n";
        let c = parse_config(text, SimConfig::default()).unwrap();
        assert_eq!((c.n, c.k, c.seed), (128, 64, 9));
        assert!(c.crc);
        assert_eq!(c.decoder, DecoderSpec::CaScl { list: 16, check: 8 });
        assert_eq!(c.snr.step, 0.2);
        assert!(parse_config("bogus = 1", SimConfig::default()).is_err());
        assert!(parse_config("n", SimConfig::default()).is_err());
        assert!(parse_config("n = x", SimConfig::default()).is_err());
    }
}

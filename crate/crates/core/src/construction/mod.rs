//! Sub-channel reliability estimation.
//!
//! Every method produces a [`WeightTable`] (larger = more reliable) that
//! [`rank_by_weight`] turns into a [`ReliabilitySequence`]. Methods are
//! usually named through a textual descriptor:
//!
//! | descriptor | meaning |
//! |---|---|
//! | `pw`, `pw:beta=<f>` | polarization weight, default β = 2^(1/4) |
//! | `hpw`, `hpw:beta=<f>,orders=<list>,weights=<list>` | higher-order PW, default orders {0, 1} weighted {1, 1/4} |
//! | `epw`, `epw:terms=<factor,base[,bit]>;...` | extended PW, default is the two-breaking-point instance |
//! | `ga`, `ga:snr=<f>` | Gaussian approximation at design Es/N0 (dB) |
//! | `bec`, `bec:eps=<f>` | Bhattacharyya bound on an erasure channel |

mod bec;
mod ga;
mod pw;

use std::fmt;
use std::str::FromStr;

pub use bec::{bec_table, bhattacharyya, BecParams};
pub use ga::{ga_phi, ga_phi_inv, ga_table, GaParams, GaTable};
pub use pw::{
    epw_table, epw_weight, hpw_table, hpw_weight, pw_table, pw_weight, EpwTerm, EpwTermList,
    HpwParams, PwParams, DEFAULT_BETA,
};

use crate::error::{Error, Result};
use crate::reliability::{rank_by_weight, ReliabilitySequence, WeightTable};

/// Design Es/N0 used by a bare `ga` descriptor.
pub const DEFAULT_GA_SNR_DB: f64 = 0.0;

/// Lower end, upper end and step of the GA design-SNR scan, in dB.
pub const GA_SCAN_DB: (f64, f64, f64) = (-2.0, 8.0, 0.25);

/// A construction method with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum Method {
    Pw(PwParams),
    Hpw(HpwParams),
    Epw(EpwTermList),
    Ga(GaParams),
    Bec(BecParams),
}

impl Method {
    pub fn pw_default() -> Self {
        Method::Pw(PwParams::default())
    }

    pub fn hpw_default() -> Self {
        Method::Hpw(HpwParams::default())
    }

    pub fn epw_default() -> Self {
        Method::Epw(EpwTermList::reference())
    }

    pub fn ga(design_snr_db: f64) -> Result<Self> {
        Ok(Method::Ga(GaParams::new(design_snr_db)?))
    }

    /// Short family name, e.g. `"hpw"`.
    pub fn family(&self) -> &'static str {
        match self {
            Method::Pw(_) => "pw",
            Method::Hpw(_) => "hpw",
            Method::Epw(_) => "epw",
            Method::Ga(_) => "ga",
            Method::Bec(_) => "bec",
        }
    }

    /// True for the index-only methods, whose sequences are nested.
    pub fn is_pw_family(&self) -> bool {
        matches!(self, Method::Pw(_) | Method::Hpw(_) | Method::Epw(_))
    }

    pub fn weight_table(&self, n: u32) -> Result<WeightTable> {
        match self {
            Method::Pw(p) => pw_table(n, p),
            Method::Hpw(p) => hpw_table(n, p),
            Method::Epw(t) => epw_table(n, t),
            Method::Ga(p) => Ok(ga_table(n, p)?.table),
            Method::Bec(p) => bec_table(n, p),
        }
    }

    /// Reliability sequence for a length `2^n` code.
    pub fn sequence(&self, n: u32) -> Result<ReliabilitySequence> {
        rank_by_weight(&self.weight_table(n)?)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Pw(p) => write!(f, "pw:beta={}", p.beta),
            Method::Hpw(p) => {
                write!(f, "hpw:beta={},orders=", p.beta)?;
                write_list(f, &p.orders)?;
                f.write_str(",weights=")?;
                write_list(f, &p.order_weights)
            }
            Method::Epw(t) => {
                f.write_str("epw:terms=")?;
                for (k, term) in t.terms().iter().enumerate() {
                    if k > 0 {
                        f.write_str(";")?;
                    }
                    write!(f, "{},{}", term.factor, term.base)?;
                    if let Some(c) = term.breaking_bit {
                        write!(f, ",{c}")?;
                    }
                }
                Ok(())
            }
            Method::Ga(p) => write!(f, "ga:snr={}", p.design_snr_db),
            Method::Bec(p) => write!(f, "bec:eps={}", p.epsilon),
        }
    }
}

fn write_list<T: fmt::Display>(f: &mut fmt::Formatter<'_>, items: &[T]) -> fmt::Result {
    for (k, x) in items.iter().enumerate() {
        if k > 0 {
            f.write_str(",")?;
        }
        write!(f, "{x}")?;
    }
    Ok(())
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let err = |reason: String| Error::Descriptor {
            descriptor: s.to_string(),
            reason,
        };
        let s_trim = s.trim();
        let (name, rest) = match s_trim.split_once(':') {
            Some((n, r)) => (n.trim(), r.trim()),
            None => (s_trim, ""),
        };
        let name = name.to_ascii_lowercase();
        if name == "epw" {
            return parse_epw(rest).map(Method::Epw).map_err(err);
        }
        let args = parse_args(rest).map_err(&err)?;
        let mut args = Args { args, used: vec![] };
        let method = match name.as_str() {
            "pw" => {
                let beta = args.scalar("beta")?.unwrap_or(DEFAULT_BETA);
                Method::Pw(PwParams::new(beta).map_err(|e| err(e.to_string()))?)
            }
            "hpw" => {
                let d = HpwParams::default();
                let beta = args.scalar("beta")?.unwrap_or(d.beta);
                let orders = args.list::<i32>("orders")?.unwrap_or(d.orders);
                let weights = match args.list::<f64>("weights")? {
                    Some(w) => w,
                    None if orders == [0, 1] => d.order_weights,
                    None => vec![1.0; orders.len()],
                };
                Method::Hpw(HpwParams::new(beta, orders, weights).map_err(|e| err(e.to_string()))?)
            }
            "ga" => {
                let snr = args.scalar("snr")?.unwrap_or(DEFAULT_GA_SNR_DB);
                Method::Ga(GaParams::new(snr).map_err(|e| err(e.to_string()))?)
            }
            "bec" => {
                let eps = args.scalar("eps")?.unwrap_or(BecParams::default().epsilon);
                Method::Bec(BecParams::new(eps).map_err(|e| err(e.to_string()))?)
            }
            other => return Err(err(format!("unknown method `{other}`"))),
        };
        args.finish().map_err(err)?;
        Ok(method)
    }
}

/// `key=v1,v2,key2=v3` with bare tokens continuing the previous key.
fn parse_args(rest: &str) -> std::result::Result<Vec<(String, Vec<String>)>, String> {
    let mut out: Vec<(String, Vec<String>)> = Vec::new();
    for tok in rest.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        match tok.split_once('=') {
            Some((k, v)) => {
                let key = k.trim().to_ascii_lowercase();
                if out.iter().any(|(existing, _)| *existing == key) {
                    return Err(format!("parameter `{key}` given twice"));
                }
                out.push((key, vec![v.trim().to_string()]));
            }
            None => match out.last_mut() {
                Some((_, values)) => values.push(tok.to_string()),
                None => return Err(format!("expected key=value, found `{tok}`")),
            },
        }
    }
    Ok(out)
}

struct Args {
    args: Vec<(String, Vec<String>)>,
    used: Vec<String>,
}

impl Args {
    fn take(&mut self, key: &str) -> Option<Vec<String>> {
        self.used.push(key.to_string());
        self.args
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.clone())
    }

    fn list<T: FromStr>(&mut self, key: &str) -> Result<Option<Vec<T>>> {
        let Some(values) = self.take(key) else {
            return Ok(None);
        };
        values
            .iter()
            .map(|v| {
                v.parse::<T>().map_err(|_| Error::Descriptor {
                    descriptor: format!("{key}={}", values.join(",")),
                    reason: format!("cannot parse `{v}`"),
                })
            })
            .collect::<Result<Vec<_>>>()
            .map(Some)
    }

    fn scalar(&mut self, key: &str) -> Result<Option<f64>> {
        match self.list::<f64>(key)? {
            None => Ok(None),
            Some(v) if v.len() == 1 => Ok(Some(v[0])),
            Some(v) => Err(Error::Descriptor {
                descriptor: key.to_string(),
                reason: format!("expected one value, got {}", v.len()),
            }),
        }
    }

    fn finish(self) -> std::result::Result<(), String> {
        match self.args.iter().find(|(k, _)| !self.used.contains(k)) {
            Some((k, _)) => Err(format!("unknown parameter `{k}`")),
            None => Ok(()),
        }
    }
}

fn parse_epw(rest: &str) -> std::result::Result<EpwTermList, String> {
    if rest.is_empty() {
        return Ok(EpwTermList::reference());
    }
    let body = rest
        .strip_prefix("terms=")
        .ok_or_else(|| "expected `terms=`".to_string())?;
    let mut terms = Vec::new();
    for group in body.split(';').map(str::trim).filter(|g| !g.is_empty()) {
        let parts: Vec<&str> = group.split(',').map(str::trim).collect();
        let num = |s: &str| s.parse::<f64>().map_err(|_| format!("cannot parse `{s}`"));
        let term = match parts.as_slice() {
            [f, b] => EpwTerm::new(num(f)?, num(b)?),
            [f, b, c] => EpwTerm::gated(
                num(f)?,
                num(b)?,
                c.parse().map_err(|_| format!("bad breaking bit `{c}`"))?,
            ),
            _ => return Err(format!("term `{group}` needs factor,base[,bit]")),
        };
        terms.push(term);
    }
    EpwTermList::new(terms).map_err(|e| e.to_string())
}

/// Frozen set (sorted) of the GA code at each point of the design-SNR scan.
pub fn ga_scan(len: usize, k: usize) -> Result<Vec<(f64, Vec<usize>)>> {
    let (start, stop, step) = GA_SCAN_DB;
    let n = crate::reliability::log2_exact(len)?;
    let steps = ((stop - start) / step).round() as usize;
    (0..=steps)
        .map(|s| {
            let snr = start + step * s as f64;
            let seq = Method::ga(snr)?.sequence(n)?;
            let code = crate::reliability::select_code(&seq, len, k)?;
            Ok((snr, code.frozen_set().to_vec()))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        assert_eq!("pw".parse::<Method>().unwrap(), Method::pw_default());
        assert_eq!("hpw".parse::<Method>().unwrap(), Method::hpw_default());
        assert_eq!("epw".parse::<Method>().unwrap(), Method::epw_default());
        assert_eq!(
            "ga".parse::<Method>().unwrap(),
            Method::ga(DEFAULT_GA_SNR_DB).unwrap()
        );
        assert_eq!(
            "bec".parse::<Method>().unwrap(),
            Method::Bec(BecParams::default())
        );
    }

    #[test]
    fn explicit_parameters() {
        assert_eq!(
            "pw:beta=1.2".parse::<Method>().unwrap(),
            Method::Pw(PwParams::new(1.2).unwrap())
        );
        let hpw: Method = "hpw:beta=1.19,orders=0,1,2,weights=1,0.25,0.0625"
            .parse()
            .unwrap();
        assert_eq!(
            hpw,
            Method::Hpw(HpwParams::new(1.19, vec![0, 1, 2], vec![1.0, 0.25, 0.0625]).unwrap())
        );
        let epw: Method = "epw:terms=1,1.1892;0.2210,0.9889;-0.0371,0.5759,8;-0.0470,0.4433,7"
            .parse()
            .unwrap();
        assert_eq!(epw, Method::epw_default());
        assert_eq!(
            "ga:snr=2.0".parse::<Method>().unwrap(),
            Method::ga(2.0).unwrap()
        );
        assert_eq!(
            "bec:eps=0.3".parse::<Method>().unwrap(),
            Method::Bec(BecParams::new(0.3).unwrap())
        );
    }

    #[test]
    fn bad_descriptors() {
        for bad in [
            "",
            "xyz",
            "pw:beta=0.5",
            "pw:beta=abc",
            "pw:gamma=1.2",
            "pw:beta=1.2,beta=1.3",
            "hpw:orders=0,1,weights=1",
            "epw:terms=1",
            "epw:foo",
            "ga:snr=nan",
            "bec:eps=2",
        ] {
            assert!(bad.parse::<Method>().is_err(), "{bad} should fail");
        }
    }

    #[test]
    fn display_round_trips() {
        for m in [
            Method::pw_default(),
            Method::hpw_default(),
            Method::epw_default(),
            Method::ga(-1.25).unwrap(),
            Method::Bec(BecParams::new(0.3).unwrap()),
        ] {
            let text = m.to_string();
            assert_eq!(text.parse::<Method>().unwrap(), m, "{text}");
        }
    }
}

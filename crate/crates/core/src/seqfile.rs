//! Reliability sequence files.
//!
//! Text form, one index per line in ascending reliability:
//!
//! ```text
//! # N_max=8
//! # method=pw
//! 0
//! 1
//! ...
//! ```
//!
//! JSON form: `{"metadata": {"n_max": 8, "method": "pw"}, "sequence": [0, 1, ...]}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::reliability::ReliabilitySequence;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceMetadata {
    pub n_max: usize,
    pub method: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceFile {
    pub method: String,
    pub sequence: ReliabilitySequence,
}

#[derive(Serialize, Deserialize)]
struct JsonForm {
    metadata: SequenceMetadata,
    sequence: Vec<usize>,
}

impl SequenceFile {
    pub fn new(method: impl Into<String>, sequence: ReliabilitySequence) -> Self {
        Self {
            method: method.into(),
            sequence,
        }
    }

    pub fn n_max(&self) -> usize {
        self.sequence.len()
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("# N_max={}\n# method={}\n", self.n_max(), self.method);
        for i in self.sequence.order() {
            out.push_str(&i.to_string());
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let form = JsonForm {
            metadata: SequenceMetadata {
                n_max: self.n_max(),
                method: self.method.clone(),
            },
            sequence: self.sequence.order().to_vec(),
        };
        let mut s = serde_json::to_string_pretty(&form).expect("plain data serializes");
        s.push('\n');
        s
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let n_max = header(lines.next(), "N_max")?
            .parse::<usize>()
            .map_err(|e| Error::SequenceFormat(format!("bad N_max: {e}")))?;
        let method = header(lines.next(), "method")?.to_string();
        let order = lines
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(|l| {
                l.parse::<usize>()
                    .map_err(|e| Error::SequenceFormat(format!("bad index `{l}`: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if order.len() != n_max {
            return Err(Error::SequenceFormat(format!(
                "header declares N_max={n_max} but {} indices follow",
                order.len()
            )));
        }
        Ok(Self {
            method,
            sequence: ReliabilitySequence::from_order(order)?,
        })
    }

    pub fn parse_json(text: &str) -> Result<Self> {
        let form: JsonForm = serde_json::from_str(text)?;
        if form.sequence.len() != form.metadata.n_max {
            return Err(Error::SequenceFormat(format!(
                "metadata declares n_max={} but {} indices follow",
                form.metadata.n_max,
                form.sequence.len()
            )));
        }
        Ok(Self {
            method: form.metadata.method,
            sequence: ReliabilitySequence::from_order(form.sequence)?,
        })
    }

    /// Accepts either form, deciding on the first non-blank character.
    pub fn parse(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            Self::parse_json(text)
        } else {
            Self::parse_text(text)
        }
    }
}

fn header<'a>(line: Option<&'a str>, key: &str) -> Result<&'a str> {
    line.and_then(|l| l.trim().strip_prefix('#'))
        .and_then(|l| l.trim().strip_prefix(key))
        .and_then(|l| l.strip_prefix('='))
        .ok_or_else(|| Error::SequenceFormat(format!("missing `# {key}=` header")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> SequenceFile {
        let seq = ReliabilitySequence::new(3, vec![0, 1, 2, 4, 3, 5, 6, 7]).unwrap();
        SequenceFile::new("pw", seq)
    }

    #[test]
    fn text_layout() {
        let text = sample().to_text();
        assert!(text.starts_with("# N_max=8\n# method=pw\n0\n1\n2\n4\n"));
        assert_eq!(text.lines().count(), 10);
        assert_eq!(SequenceFile::parse(&text).unwrap(), sample());
    }

    #[test]
    fn json_layout() {
        let json = sample().to_json();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["metadata"]["n_max"], 8);
        assert_eq!(v["metadata"]["method"], "pw");
        assert_eq!(v["sequence"][3], 4);
        assert_eq!(SequenceFile::parse(&json).unwrap(), sample());
    }

    #[test]
    fn rejects_inconsistent_files() {
        assert!(SequenceFile::parse("# N_max=4\n# method=pw\n0\n1\n2\n").is_err());
        assert!(SequenceFile::parse("0\n1\n").is_err());
        assert!(SequenceFile::parse("# N_max=2\n# method=pw\n0\n0\n").is_err());
    }
}

//! Input vectors: file format and seeded generation.
//!
//! ```text
//! # comment
//! nets: A[0] A[1] C0
//! 010
//! 1 1 0
//! ```

use std::collections::HashSet;
use std::fmt::Write as _;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StimulusError {
    #[error("line {line}: expected 'nets:' header")]
    MissingHeader { line: usize },
    #[error("line {line}: net '{net}' listed twice")]
    DuplicateNet { line: usize, net: String },
    #[error("line {line}: expected {expected} bits, got {got}")]
    RowLength {
        line: usize,
        expected: usize,
        got: usize,
    },
    #[error("line {line}: invalid bit character '{ch}'")]
    BadBit { line: usize, ch: char },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stimulus {
    pub input_nets: Vec<String>,
    pub vectors: Vec<Vec<bool>>,
    /// Seed the vectors were drawn with, if generated.
    pub seed: Option<u64>,
}

impl Stimulus {
    pub fn new(input_nets: Vec<String>, vectors: Vec<Vec<bool>>) -> Result<Self, StimulusError> {
        let mut seen = HashSet::new();
        for net in &input_nets {
            if !seen.insert(net) {
                return Err(StimulusError::DuplicateNet {
                    line: 0,
                    net: net.clone(),
                });
            }
        }
        for (i, row) in vectors.iter().enumerate() {
            if row.len() != input_nets.len() {
                return Err(StimulusError::RowLength {
                    line: i + 1,
                    expected: input_nets.len(),
                    got: row.len(),
                });
            }
        }
        Ok(Stimulus {
            input_nets,
            vectors,
            seed: None,
        })
    }

    /// `count` uniformly random rows from a ChaCha8 stream seeded with `seed`.
    pub fn random(input_nets: Vec<String>, count: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let width = input_nets.len();
        let vectors = (0..count)
            .map(|_| {
                let mut row = Vec::with_capacity(width);
                while row.len() < width {
                    let word = rng.next_u64();
                    let take = (width - row.len()).min(64);
                    row.extend((0..take).map(|k| word >> k & 1 == 1));
                }
                row
            })
            .collect();
        Stimulus {
            input_nets,
            vectors,
            seed: Some(seed),
        }
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn parse(text: &str) -> Result<Self, StimulusError> {
        let mut nets: Option<(usize, Vec<String>)> = None;
        let mut vectors = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let Some((_, ref names)) = nets else {
                let rest = content
                    .strip_prefix("nets:")
                    .ok_or(StimulusError::MissingHeader { line })?;
                let names: Vec<String> = rest.split_whitespace().map(String::from).collect();
                let mut seen = HashSet::new();
                for n in &names {
                    if !seen.insert(n) {
                        return Err(StimulusError::DuplicateNet {
                            line,
                            net: n.clone(),
                        });
                    }
                }
                nets = Some((line, names));
                continue;
            };
            let mut row = Vec::with_capacity(names.len());
            for ch in content.chars().filter(|c| !c.is_whitespace()) {
                match ch {
                    '0' => row.push(false),
                    '1' => row.push(true),
                    other => return Err(StimulusError::BadBit { line, ch: other }),
                }
            }
            if row.len() != names.len() {
                return Err(StimulusError::RowLength {
                    line,
                    expected: names.len(),
                    got: row.len(),
                });
            }
            vectors.push(row);
        }
        let (_, input_nets) = nets.ok_or(StimulusError::MissingHeader {
            line: text.lines().count().max(1),
        })?;
        Ok(Stimulus {
            input_nets,
            vectors,
            seed: None,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some(seed) = self.seed {
            writeln!(out, "# seed {seed}").unwrap();
        }
        writeln!(out, "nets: {}", self.input_nets.join(" ")).unwrap();
        for row in &self.vectors {
            out.extend(row.iter().map(|&b| if b { '1' } else { '0' }));
            out.push('\n');
        }
        out
    }

    /// Splits into at most `parts` chunks where each chunk after the first
    /// starts with the last row of its predecessor, so per-chunk toggle
    /// counts add up to the whole-run count.
    pub fn partitions(&self, parts: usize) -> Vec<Stimulus> {
        let n = self.vectors.len();
        let parts = parts.clamp(1, n.max(1));
        let chunk = n.div_ceil(parts).max(1);
        let mut out = Vec::new();
        let mut start = 0;
        while start < n || out.is_empty() {
            let end = (start + chunk).min(n);
            let from = start.saturating_sub(1);
            out.push(Stimulus {
                input_nets: self.input_nets.clone(),
                vectors: self.vectors[from..end].to_vec(),
                seed: self.seed,
            });
            start = end;
            if n == 0 {
                break;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_with_spaces_and_comments() {
        let s = Stimulus::parse("# vectors\nnets: a b c\n010\n1 1 0 # tail\n\n").unwrap();
        assert_eq!(s.input_nets, ["a", "b", "c"]);
        assert_eq!(s.vectors, vec![vec![false, true, false], vec![true, true, false]]);
    }

    #[test]
    fn parse_errors() {
        assert_eq!(
            Stimulus::parse("010\n"),
            Err(StimulusError::MissingHeader { line: 1 })
        );
        assert!(matches!(
            Stimulus::parse("nets: a b\n011\n"),
            Err(StimulusError::RowLength { line: 2, expected: 2, got: 3 })
        ));
        assert!(matches!(
            Stimulus::parse("nets: a b\n0x\n"),
            Err(StimulusError::BadBit { ch: 'x', .. })
        ));
        assert!(matches!(
            Stimulus::parse("nets: a a\n"),
            Err(StimulusError::DuplicateNet { .. })
        ));
    }

    #[test]
    fn random_is_seeded() {
        let nets: Vec<String> = (0..70).map(|i| format!("n{i}")).collect();
        let a = Stimulus::random(nets.clone(), 50, 9);
        let b = Stimulus::random(nets.clone(), 50, 9);
        let c = Stimulus::random(nets, 50, 10);
        assert_eq!(a, b);
        assert_ne!(a.vectors, c.vectors);
        assert!(a.vectors.iter().all(|r| r.len() == 70));
    }

    #[test]
    fn text_round_trip() {
        let s = Stimulus::random(vec!["x".into(), "y".into()], 10, 3);
        let back = Stimulus::parse(&s.to_text()).unwrap();
        assert_eq!(back.vectors, s.vectors);
        assert_eq!(back.input_nets, s.input_nets);
    }

    #[test]
    fn partitions_overlap_by_one() {
        let s = Stimulus::random(vec!["x".into()], 10, 1);
        let parts = s.partitions(3);
        assert_eq!(parts.len(), 3);
        assert_eq!(parts[0].len(), 4);
        assert_eq!(parts[1].vectors[0], s.vectors[3]);
        let total: usize = parts.iter().map(|p| p.len()).sum();
        assert_eq!(total, 10 + 2);
        assert_eq!(s.partitions(50).len(), 10);
    }
}

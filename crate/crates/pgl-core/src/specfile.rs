//! The line-based spec grammar shared by the CLI and tests.
//!
//! ```text
//! p: <prime>
//! divisible_rank: <int>|omega      # default 0; doubles as the number of
//!                                  # infinite classes for equivalence plans
//! cyclic: <exp>:<mult>[,...]       # mult is an integer or "inf"
//! cyclic_infinite: <exp>[,...]     # shorthand for <exp>:inf entries
//! sfunction: <i>:<v0>,<v1>,...     # one line per row i, nondecreasing;
//!                                  # the final value repeated means settled
//! sfunction_tail: <start>:<step>   # closed-form staircase tail m_i
//! inf_mode: computable|sigma1      # default computable
//! ```
//!
//! Lines starting with `#` and blank lines are ignored. The canonical
//! printed form folds `cyclic_infinite` and settled `sfunction` rows into
//! `cyclic:` multiplicities, so parse ∘ print is the identity on canonical
//! specs.

use crate::limitwise::SFunction;
use crate::presentation::{
    Character, Count, EquivalenceStructure, EquivalenceError, InfMode, IsoTypeSpec, Mult,
    UnboundedTail,
};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum SpecFileError {
    #[error("line {line}: unknown key {key:?}")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: duplicate key {key:?}")]
    DuplicateKey { line: usize, key: String },
    #[error("line {line}: expected {expected}, got {got:?}")]
    Malformed {
        line: usize,
        expected: &'static str,
        got: String,
    },
    #[error("line {line}: {0} is not prime", .value)]
    NotPrime { line: usize, value: u64 },
    #[error("line {line}: exponent {exp} listed twice in cyclic entries")]
    DuplicateExponent { line: usize, exp: u32 },
    #[error("line {line}: sfunction row {row} is not monotone at position {pos}")]
    NonMonotoneRow { line: usize, row: u64, pos: usize },
    #[error("line {line}: sfunction rows must be numbered consecutively from 0, got {got}")]
    RowOutOfOrder { line: usize, got: u64 },
    #[error("missing required key p:")]
    MissingPrime,
    #[error("line {line}: {msg}")]
    Invalid { line: usize, msg: String },
}

/// The parsed value: enough to build an isomorphism type, a character, or
/// an equivalence-structure plan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedSpec {
    pub p: u64,
    pub divisible_rank: Count,
    pub character: Character,
    pub inf_mode: InfMode,
}

impl ParsedSpec {
    pub fn iso_type(&self) -> IsoTypeSpec {
        IsoTypeSpec {
            p: self.p,
            divisible_rank: self.divisible_rank,
            cyclic: self.character.clone(),
        }
    }

    pub fn equivalence_plan(&self) -> Result<EquivalenceStructure, EquivalenceError> {
        EquivalenceStructure::build(self.character.clone(), self.divisible_rank, self.inf_mode)
    }

    /// Canonical printed form; parsing it back gives an equal value.
    pub fn print(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("p: {}\n", self.p));
        out.push_str(&format!("divisible_rank: {}\n", self.divisible_rank));
        out.push_str(&format!(
            "inf_mode: {}\n",
            match self.inf_mode {
                InfMode::Computable => "computable",
                InfMode::Sigma1 => "sigma1",
            }
        ));
        if !self.character.explicit_mults().is_empty() {
            let entries: Vec<String> = self
                .character
                .explicit_mults()
                .iter()
                .map(|(n, m)| format!("{n}:{m}"))
                .collect();
            out.push_str(&format!("cyclic: {}\n", entries.join(",")));
        }
        if let Some(t) = self.character.tail() {
            out.push_str(&format!("sfunction_tail: {}:{}\n", t.start, t.step));
        }
        out
    }
}

impl fmt::Display for ParsedSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.print())
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Parse the grammar; every violation is reported with its line number.
pub fn parse_spec(text: &str) -> Result<ParsedSpec, SpecFileError> {
    let mut p: Option<(usize, u64)> = None;
    let mut rank: Option<Count> = None;
    let mut inf_mode: Option<InfMode> = None;
    let mut mults: BTreeMap<u32, Mult> = BTreeMap::new();
    let mut tail: Option<UnboundedTail> = None;
    let mut rows: Vec<Vec<u32>> = Vec::new();
    let mut seen_keys: Vec<&'static str> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once(':').ok_or(SpecFileError::Malformed {
            line: line_no,
            expected: "key: value",
            got: line.to_string(),
        })?;
        let key = key.trim();
        let value = value.trim();
        match key {
            "p" => {
                if p.is_some() {
                    return Err(SpecFileError::DuplicateKey {
                        line: line_no,
                        key: "p".into(),
                    });
                }
                let v: u64 = value.parse().map_err(|_| SpecFileError::Malformed {
                    line: line_no,
                    expected: "a prime number",
                    got: value.to_string(),
                })?;
                if !is_prime(v) {
                    return Err(SpecFileError::NotPrime {
                        line: line_no,
                        value: v,
                    });
                }
                p = Some((line_no, v));
            }
            "divisible_rank" => {
                if rank.is_some() {
                    return Err(SpecFileError::DuplicateKey {
                        line: line_no,
                        key: "divisible_rank".into(),
                    });
                }
                rank = Some(parse_count(value, line_no)?);
            }
            "inf_mode" => {
                if inf_mode.is_some() {
                    return Err(SpecFileError::DuplicateKey {
                        line: line_no,
                        key: "inf_mode".into(),
                    });
                }
                inf_mode = Some(match value {
                    "computable" => InfMode::Computable,
                    "sigma1" => InfMode::Sigma1,
                    _ => {
                        return Err(SpecFileError::Malformed {
                            line: line_no,
                            expected: "computable or sigma1",
                            got: value.to_string(),
                        })
                    }
                });
            }
            "cyclic" => {
                if seen_keys.contains(&"cyclic") {
                    return Err(SpecFileError::DuplicateKey {
                        line: line_no,
                        key: "cyclic".into(),
                    });
                }
                seen_keys.push("cyclic");
                for part in value.split(',') {
                    let (e, m) = part.trim().split_once(':').ok_or(SpecFileError::Malformed {
                        line: line_no,
                        expected: "exp:mult",
                        got: part.to_string(),
                    })?;
                    let exp: u32 = e.trim().parse().map_err(|_| SpecFileError::Malformed {
                        line: line_no,
                        expected: "an exponent",
                        got: e.to_string(),
                    })?;
                    let mult = if m.trim() == "inf" {
                        Mult::Infinite
                    } else {
                        let k: u32 = m.trim().parse().map_err(|_| SpecFileError::Malformed {
                            line: line_no,
                            expected: "a multiplicity or inf",
                            got: m.to_string(),
                        })?;
                        Mult::Finite(k)
                    };
                    if mults.insert(exp, mult).is_some() {
                        return Err(SpecFileError::DuplicateExponent {
                            line: line_no,
                            exp,
                        });
                    }
                }
            }
            "cyclic_infinite" => {
                for part in value.split(',') {
                    let exp: u32 =
                        part.trim().parse().map_err(|_| SpecFileError::Malformed {
                            line: line_no,
                            expected: "an exponent",
                            got: part.to_string(),
                        })?;
                    if mults.insert(exp, Mult::Infinite).is_some() {
                        return Err(SpecFileError::DuplicateExponent {
                            line: line_no,
                            exp,
                        });
                    }
                }
            }
            "sfunction" => {
                let (i, vals) = value.split_once(':').ok_or(SpecFileError::Malformed {
                    line: line_no,
                    expected: "i:v0,v1,...",
                    got: value.to_string(),
                })?;
                let row_idx: u64 = i.trim().parse().map_err(|_| SpecFileError::Malformed {
                    line: line_no,
                    expected: "a row index",
                    got: i.to_string(),
                })?;
                if row_idx != rows.len() as u64 {
                    return Err(SpecFileError::RowOutOfOrder {
                        line: line_no,
                        got: row_idx,
                    });
                }
                let mut row: Vec<u32> = Vec::new();
                for v in vals.split(',') {
                    row.push(v.trim().parse().map_err(|_| SpecFileError::Malformed {
                        line: line_no,
                        expected: "a value",
                        got: v.to_string(),
                    })?);
                }
                for pos in 0..row.len().saturating_sub(1) {
                    if row[pos] > row[pos + 1] {
                        return Err(SpecFileError::NonMonotoneRow {
                            line: line_no,
                            row: row_idx,
                            pos,
                        });
                    }
                }
                rows.push(row);
            }
            "sfunction_tail" => {
                if tail.is_some() {
                    return Err(SpecFileError::DuplicateKey {
                        line: line_no,
                        key: "sfunction_tail".into(),
                    });
                }
                let (s, st) = value.split_once(':').ok_or(SpecFileError::Malformed {
                    line: line_no,
                    expected: "start:step",
                    got: value.to_string(),
                })?;
                let start: u32 = s.trim().parse().map_err(|_| SpecFileError::Malformed {
                    line: line_no,
                    expected: "a start value",
                    got: s.to_string(),
                })?;
                let step: u32 = st.trim().parse().map_err(|_| SpecFileError::Malformed {
                    line: line_no,
                    expected: "a step value",
                    got: st.to_string(),
                })?;
                tail = Some(UnboundedTail { start, step });
            }
            other => {
                return Err(SpecFileError::UnknownKey {
                    line: line_no,
                    key: other.to_string(),
                })
            }
        }
    }

    let (_, p) = p.ok_or(SpecFileError::MissingPrime)?;

    // fold s-function rows into the character via their limits
    if !rows.is_empty() || tail.is_some() {
        let f = SFunction::new(rows, tail).map_err(|e| SpecFileError::Invalid {
            line: 0,
            msg: e.to_string(),
        })?;
        let from_f = f.character().map_err(|e| SpecFileError::Invalid {
            line: 0,
            msg: e.to_string(),
        })?;
        for (&n, &m) in from_f.explicit_mults() {
            let entry = mults.entry(n).or_insert(Mult::Finite(0));
            *entry = match (*entry, m) {
                (Mult::Finite(a), Mult::Finite(b)) => Mult::Finite(a + b),
                _ => Mult::Infinite,
            };
        }
        tail = from_f.tail();
    }

    let character = Character::new(mults, tail).map_err(|e| SpecFileError::Invalid {
        line: 0,
        msg: e.to_string(),
    })?;

    Ok(ParsedSpec {
        p,
        divisible_rank: rank.unwrap_or(Count::Finite(0)),
        character,
        inf_mode: inf_mode.unwrap_or(InfMode::Computable),
    })
}

fn parse_count(value: &str, line: usize) -> Result<Count, SpecFileError> {
    if value == "omega" {
        return Ok(Count::Omega);
    }
    value
        .parse::<u32>()
        .map(Count::Finite)
        .map_err(|_| SpecFileError::Malformed {
            line,
            expected: "an integer or omega",
            got: value.to_string(),
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_spec_parses_to_z2() {
        let s = parse_spec("p: 2\ncyclic: 1:1\n").unwrap();
        assert_eq!(s.p, 2);
        assert_eq!(s.divisible_rank, Count::Finite(0));
        assert_eq!(s.character.multiplicity(1), Mult::Finite(1));
    }

    #[test]
    fn non_monotone_sfunction_row_is_rejected_with_its_row() {
        let err = parse_spec("p: 2\nsfunction: 0:2,1\n").unwrap_err();
        assert_eq!(
            err,
            SpecFileError::NonMonotoneRow {
                line: 2,
                row: 0,
                pos: 0
            }
        );
    }

    #[test]
    fn omega_rank_with_infinite_summands_parses() {
        let s = parse_spec("p: 2\ndivisible_rank: omega\ncyclic_infinite: 3\n").unwrap();
        assert_eq!(s.divisible_rank, Count::Omega);
        assert_eq!(s.character.multiplicity(3), Mult::Infinite);
        // round trip through the canonical form
        let printed = s.print();
        let reparsed = parse_spec(&printed).unwrap();
        assert_eq!(s, reparsed);
    }

    #[test]
    fn print_parse_roundtrip_with_tail() {
        let text = "p: 3\ndivisible_rank: 2\ncyclic: 1:2\nsfunction_tail: 4:2\n";
        let s = parse_spec(text).unwrap();
        assert_eq!(parse_spec(&s.print()).unwrap(), s);
        assert!(!s.character.is_bounded());
    }

    #[test]
    fn sfunction_rows_fold_into_the_character() {
        let text = "p: 2\nsfunction: 0:1\nsfunction: 1:1,2,2\nsfunction: 2:0,2\n";
        let s = parse_spec(text).unwrap();
        assert_eq!(s.character.multiplicity(1), Mult::Finite(1));
        assert_eq!(s.character.multiplicity(2), Mult::Finite(2));
        let roundtrip = parse_spec(&s.print()).unwrap();
        assert_eq!(s, roundtrip);
    }

    #[test]
    fn errors_name_their_lines() {
        assert_eq!(
            parse_spec("p: 4\n").unwrap_err(),
            SpecFileError::NotPrime { line: 1, value: 4 }
        );
        assert!(matches!(
            parse_spec("p: 2\nwhat: 3\n").unwrap_err(),
            SpecFileError::UnknownKey { line: 2, .. }
        ));
        assert!(matches!(
            parse_spec("p: 2\ncyclic: 2:1,2:3\n").unwrap_err(),
            SpecFileError::DuplicateExponent { line: 2, exp: 2 }
        ));
        assert_eq!(parse_spec("").unwrap_err(), SpecFileError::MissingPrime);
    }

    #[test]
    fn staircase_shape_is_expressible() {
        let s = parse_spec("p: 2\ndivisible_rank: 1\nsfunction_tail: 1:1\n").unwrap();
        assert!(!s.character.is_bounded());
        for n in 1..10 {
            assert!(s.character.contains(n, 1));
            assert!(!s.character.contains(n, 2));
        }
    }
}

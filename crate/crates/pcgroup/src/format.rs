//! The `pcgroup v1` text format.
//!
//! ```text
//! pcgroup v1
//! # heis(3)
//! p 3
//! n 3
//! comm 2 1 : 3^1
//! ```
//!
//! Generators are numbered from 1. `pow i : w` sets `g_i^p = w` and
//! `comm j i : w` sets `[g_j, g_i] = w` for `i < j`; tokens are `k^e` with
//! strictly increasing `k` beyond the defining index(es) and `1 <= e < p`.
//! Relations that are not listed are trivial. `#` starts a comment.

use std::collections::BTreeSet;

use pcgroup_core::{PcError, PcGroup, PcPresentation, RelWord};
use thiserror::Error;

pub const HEADER: &str = "pcgroup v1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct FormatError {
    /// 1-based; 0 when the problem is not tied to one line.
    pub line: usize,
    pub kind: FormatErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatErrorKind {
    #[error("expected header `{HEADER}`")]
    Header,
    #[error("bad prime `{0}`")]
    BadPrime(String),
    #[error("bad generator count `{0}`")]
    BadCount(String),
    #[error("`{0}` given twice")]
    Repeated(&'static str),
    #[error("`p` and `n` must come before relations")]
    MissingSize,
    #[error("unknown directive `{0}`")]
    Directive(String),
    #[error("malformed relation: {0}")]
    Malformed(String),
    #[error("token index must exceed {letter}")]
    TokenIndex { letter: char },
    #[error("exponent {exp} not in [1,{p})")]
    Exponent { exp: u32, p: u32 },
    #[error("duplicate relation `{0}`")]
    Duplicate(String),
    #[error("{0}")]
    Presentation(PcError),
    #[error("inconsistent presentation: {0}")]
    Inconsistent(String),
}

fn err(line: usize, kind: FormatErrorKind) -> FormatError {
    FormatError { line, kind }
}

fn parse_word(text: &str, p: u32, bound: usize, letter: char, line: usize) -> Result<RelWord, FormatError> {
    let mut word = RelWord::new();
    for tok in text.split_whitespace() {
        let (k, e) = tok
            .split_once('^')
            .ok_or_else(|| err(line, FormatErrorKind::Malformed(format!("token `{tok}` is not k^e"))))?;
        let bad = || err(line, FormatErrorKind::Malformed(format!("token `{tok}`")));
        let k: usize = k.parse().map_err(|_| bad())?;
        let e: u32 = e.parse().map_err(|_| bad())?;
        if k <= bound {
            return Err(err(line, FormatErrorKind::TokenIndex { letter }));
        }
        if e == 0 || e >= p {
            return Err(err(line, FormatErrorKind::Exponent { exp: e, p }));
        }
        if word.last().is_some_and(|&(last, _)| last >= k - 1) {
            return Err(err(line, FormatErrorKind::Malformed("token indices must increase".into())));
        }
        word.push((k - 1, e));
    }
    Ok(word)
}

fn parse_index(s: &str, n: usize, line: usize) -> Result<usize, FormatError> {
    match s.parse::<usize>() {
        Ok(i) if (1..=n).contains(&i) => Ok(i),
        _ => Err(err(line, FormatErrorKind::Malformed(format!("generator `{s}` not in 1..={n}")))),
    }
}

/// Parses without checking consistency. The id is taken from the first
/// comment line, if any.
pub fn parse_pcp_unchecked(text: &str) -> Result<PcPresentation, FormatError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let mut id = String::new();
    let header = loop {
        match lines.next() {
            Some((_, "")) => continue,
            Some((no, l)) => break Some((no, l)),
            None => break None,
        }
    };
    match header {
        Some((_, l)) if l == HEADER => {}
        Some((no, _)) => return Err(err(no, FormatErrorKind::Header)),
        None => return Err(err(0, FormatErrorKind::Header)),
    }
    let mut p: Option<u32> = None;
    let mut n: Option<usize> = None;
    let mut pres: Option<PcPresentation> = None;
    let mut seen = BTreeSet::new();
    for (no, raw) in lines {
        let content = match raw.split_once('#') {
            Some((before, comment)) => {
                if id.is_empty() && before.trim().is_empty() && pres.is_none() {
                    id = comment.trim().to_string();
                }
                before.trim()
            }
            None => raw,
        };
        if content.is_empty() {
            continue;
        }
        let mut parts = content.splitn(2, char::is_whitespace);
        let head = parts.next().unwrap();
        let rest = parts.next().unwrap_or("").trim();
        match head {
            "p" => {
                if p.is_some() {
                    return Err(err(no, FormatErrorKind::Repeated("p")));
                }
                match rest.parse::<u32>() {
                    Ok(v) if pcgroup_core::pc::is_prime(v as u64) => p = Some(v),
                    _ => return Err(err(no, FormatErrorKind::BadPrime(rest.into()))),
                }
            }
            "n" => {
                if n.is_some() {
                    return Err(err(no, FormatErrorKind::Repeated("n")));
                }
                n = Some(rest.parse().map_err(|_| err(no, FormatErrorKind::BadCount(rest.into())))?);
            }
            "pow" | "comm" => {
                if pres.is_none() {
                    let (Some(p), Some(n)) = (p, n) else {
                        return Err(err(no, FormatErrorKind::MissingSize));
                    };
                    pres = Some(
                        PcPresentation::new(id.clone(), p, n)
                            .map_err(|e| err(no, FormatErrorKind::Presentation(e)))?,
                    );
                }
                let pr = pres.as_mut().unwrap();
                let (lhs, rhs) = rest
                    .split_once(':')
                    .ok_or_else(|| err(no, FormatErrorKind::Malformed("missing `:`".into())))?;
                let idx: Vec<&str> = lhs.split_whitespace().collect();
                let key = format!("{head} {}", idx.join(" "));
                let (pp, nn) = (pr.p(), pr.n());
                let res = if head == "pow" {
                    let [i] = idx[..] else {
                        return Err(err(no, FormatErrorKind::Malformed("pow takes one index".into())));
                    };
                    let i = parse_index(i, nn, no)?;
                    let w = parse_word(rhs, pp, i, 'i', no)?;
                    if !seen.insert(key.clone()) {
                        return Err(err(no, FormatErrorKind::Duplicate(key)));
                    }
                    pr.set_power(i - 1, w)
                } else {
                    let [j, i] = idx[..] else {
                        return Err(err(no, FormatErrorKind::Malformed("comm takes two indices".into())));
                    };
                    let (j, i) = (parse_index(j, nn, no)?, parse_index(i, nn, no)?);
                    if i >= j {
                        return Err(err(no, FormatErrorKind::Malformed(format!("comm {j} {i} needs i < j"))));
                    }
                    let w = parse_word(rhs, pp, j, 'j', no)?;
                    if !seen.insert(key.clone()) {
                        return Err(err(no, FormatErrorKind::Duplicate(key)));
                    }
                    pr.set_commutator(j - 1, i - 1, w)
                };
                res.map_err(|e| err(no, FormatErrorKind::Presentation(e)))?;
            }
            other => return Err(err(no, FormatErrorKind::Directive(other.into()))),
        }
    }
    match pres {
        Some(pr) => Ok(pr),
        None => {
            let (Some(p), Some(n)) = (p, n) else {
                return Err(err(0, FormatErrorKind::MissingSize));
            };
            PcPresentation::new(id, p, n).map_err(|e| err(0, FormatErrorKind::Presentation(e)))
        }
    }
}

/// Parses and checks consistency.
pub fn parse_pcp(text: &str) -> Result<PcPresentation, FormatError> {
    let pres = parse_pcp_unchecked(text)?;
    let report = PcGroup::validate_consistency(&pres);
    if !report.consistent {
        let first = report.failures.first().cloned().unwrap_or_default();
        return Err(err(0, FormatErrorKind::Inconsistent(first)));
    }
    Ok(pres)
}

/// Parses, checks consistency and builds the group.
pub fn load_group(text: &str) -> Result<PcGroup, FormatError> {
    let pres = parse_pcp_unchecked(text)?;
    PcGroup::new(pres).map_err(|e| match e {
        PcError::Inconsistent(m) => err(0, FormatErrorKind::Inconsistent(m)),
        other => err(0, FormatErrorKind::Presentation(other)),
    })
}

fn write_word(out: &mut String, word: &[(usize, u32)]) {
    for &(k, e) in word {
        out.push_str(&format!(" {}^{}", k + 1, e));
    }
}

/// Canonical text: nontrivial `pow` lines by ascending `i`, then nontrivial
/// `comm` lines by ascending `(j, i)`.
pub fn serialize_pcp(pres: &PcPresentation) -> String {
    let mut out = String::from(HEADER);
    out.push('\n');
    if !pres.id().is_empty() {
        out.push_str(&format!("# {}\n", pres.id()));
    }
    out.push_str(&format!("p {}\nn {}\n", pres.p(), pres.n()));
    for i in 0..pres.n() {
        let w = pres.power(i);
        if !w.is_empty() {
            out.push_str(&format!("pow {} :", i + 1));
            write_word(&mut out, w);
            out.push('\n');
        }
    }
    for j in 0..pres.n() {
        for i in 0..j {
            let w = pres.commutator(j, i);
            if !w.is_empty() {
                out.push_str(&format!("comm {} {} :", j + 1, i + 1));
                write_word(&mut out, w);
                out.push('\n');
            }
        }
    }
    out
}

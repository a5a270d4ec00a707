//! Builtin presentations.
//!
//! All constructions produce refined presentations (relative orders `p`) with
//! generator 1 on top. Names follow `family(params)`, e.g. `wreath(3)`,
//! `dihedral(16)`, `freenilp(3,3)`; a direct product is written by joining
//! factors with `x`, as in `dihedral(8)xdihedral(8)`.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::pc::{PcError, PcPresentation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("unknown family `{0}`")]
    Unknown(String),
    #[error("bad parameters for {family}: {reason}")]
    Parameter { family: &'static str, reason: String },
    #[error("cannot parse group name `{0}`")]
    Syntax(String),
    #[error(transparent)]
    Presentation(#[from] PcError),
}

/// The group names making up the builtin corpus.
pub const BUILTIN_CORPUS: &[&str] = &[
    "elab(2,3)",
    "elab(3,2)",
    "heis(3)",
    "heis(5)",
    "espm(3)",
    "espm(5)",
    "dihedral(8)",
    "dihedral(16)",
    "dihedral(32)",
    "dihedral(64)",
    "quaternion(8)",
    "quaternion(16)",
    "quaternion(32)",
    "semidihedral(16)",
    "semidihedral(32)",
    "semidihedral(64)",
    "wreath(3)",
    "freenilp(3,2)",
    "freenilp(3,3)",
    "freenilp(5,3)",
    "espm(3)xelab(3,1)",
    "heis(3)xheis(3)",
    "espm(5)xheis(5)",
    "dihedral(8)xdihedral(8)",
    "dihedral(8)xquaternion(8)",
];

fn param_err(family: &'static str, reason: impl Into<String>) -> FamilyError {
    FamilyError::Parameter { family, reason: reason.into() }
}

fn log2_exact(order: u32, family: &'static str, min_exp: u32) -> Result<u32, FamilyError> {
    if !order.is_power_of_two() || order.trailing_zeros() < min_exp {
        return Err(param_err(family, format!("order must be 2^m with m >= {min_exp}, got {order}")));
    }
    Ok(order.trailing_zeros())
}

fn odd_prime(p: u32, family: &'static str) -> Result<(), FamilyError> {
    if p == 2 || !crate::pc::is_prime(p as u64) {
        return Err(param_err(family, format!("needs an odd prime, got {p}")));
    }
    Ok(())
}

/// `C_p^k`.
pub fn elab(p: u32, k: usize) -> Result<PcPresentation, FamilyError> {
    Ok(PcPresentation::new(format!("elab({p},{k})"), p, k)?)
}

/// Heisenberg group mod `p`: `[g2, g1] = g3`, all generators of order `p`
/// (for `p = 2` this is the dihedral group of order 8).
pub fn heis(p: u32) -> Result<PcPresentation, FamilyError> {
    let mut pres = PcPresentation::new(format!("heis({p})"), p, 3)?;
    pres.set_commutator(1, 0, vec![(2, 1)])?;
    Ok(pres)
}

/// Extraspecial group of order `p^3` and exponent `p^2`, `p` odd:
/// `g1 = b`, `g2 = a`, `g3 = a^p` with `a^b = a^(1+p)`.
pub fn espm(p: u32) -> Result<PcPresentation, FamilyError> {
    odd_prime(p, "espm")?;
    let mut pres = PcPresentation::new(format!("espm({p})"), p, 3)?;
    pres.set_power(1, vec![(2, 1)])?;
    pres.set_commutator(1, 0, vec![(2, 1)])?;
    Ok(pres)
}

// g1 = s, g_i = r^(2^(i-2)) for i >= 2; r has order 2^(m-1).
fn rotation_chain(id: String, m: u32) -> Result<PcPresentation, FamilyError> {
    let n = m as usize;
    let mut pres = PcPresentation::new(id, 2, n)?;
    for i in 1..n - 1 {
        pres.set_power(i, vec![(i + 1, 1)])?;
    }
    Ok(pres)
}

/// Dihedral group of order `2^m`, `m >= 3`: `r^s = r^-1`.
pub fn dihedral(order: u32) -> Result<PcPresentation, FamilyError> {
    let m = log2_exact(order, "dihedral", 3)?;
    let mut pres = rotation_chain(format!("dihedral({order})"), m)?;
    let n = m as usize;
    // [r^(2^(i-2)), s] = r^(-2^(i-1)) = g_(i+1) ... g_m
    for i in 1..n {
        pres.set_commutator(i, 0, (i + 1..n).map(|k| (k, 1)).collect())?;
    }
    Ok(pres)
}

/// Generalized quaternion group of order `2^m`, `m >= 3`: `r^s = r^-1`,
/// `s^2 = r^(2^(m-2))`.
pub fn quaternion(order: u32) -> Result<PcPresentation, FamilyError> {
    let m = log2_exact(order, "quaternion", 3)?;
    let mut pres = rotation_chain(format!("quaternion({order})"), m)?;
    let n = m as usize;
    pres.set_power(0, vec![(n - 1, 1)])?;
    for i in 1..n {
        pres.set_commutator(i, 0, (i + 1..n).map(|k| (k, 1)).collect())?;
    }
    Ok(pres)
}

/// Semidihedral group of order `2^m`, `m >= 4`: `r^s = r^(2^(m-2) - 1)`.
pub fn semidihedral(order: u32) -> Result<PcPresentation, FamilyError> {
    let m = log2_exact(order, "semidihedral", 4)?;
    let mut pres = rotation_chain(format!("semidihedral({order})"), m)?;
    let n = m as usize;
    // [r, s] = r^(2^(m-2) - 2) = g3 ... g_(m-1); higher generators are inverted.
    pres.set_commutator(1, 0, (2..n - 1).map(|k| (k, 1)).collect())?;
    for i in 2..n {
        pres.set_commutator(i, 0, (i + 1..n).map(|k| (k, 1)).collect())?;
    }
    Ok(pres)
}

/// `C_p wr C_p`, of order `p^(p+1)`: the top generator acts on the base
/// `F_p[t]/(t^p)` as multiplication by `1 + t`, so `[t^k, a] = t^(k+1)`.
pub fn wreath(p: u32) -> Result<PcPresentation, FamilyError> {
    if !crate::pc::is_prime(p as u64) {
        return Err(param_err("wreath", format!("{p} is not a prime")));
    }
    let n = p as usize + 1;
    let mut pres = PcPresentation::new(format!("wreath({p})"), p, n)
        .map_err(|_| param_err("wreath", format!("order {p}^{n} exceeds 2^20")))?;
    for k in 1..n - 1 {
        pres.set_commutator(k, 0, vec![(k + 1, 1)])?;
    }
    Ok(pres)
}

/// Two-generator group of class `c` whose pc generators are the basic
/// commutators of weight at most `c`, each of order `p`, with the commutator
/// relations of the free nilpotent group. Only consistent for odd `p`, or
/// `p = 2` with `c <= 2`.
pub fn freenilp(p: u32, c: u32) -> Result<PcPresentation, FamilyError> {
    if !crate::pc::is_prime(p as u64) {
        return Err(param_err("freenilp", format!("{p} is not a prime")));
    }
    if !(1..=3).contains(&c) {
        return Err(param_err("freenilp", format!("class must be in 1..=3, got {c}")));
    }
    if p == 2 && c == 3 {
        return Err(param_err("freenilp", "p = 2 needs class at most 2"));
    }
    let n = match c {
        1 => 2,
        2 => 3,
        _ => 5,
    };
    let mut pres = PcPresentation::new(format!("freenilp({p},{c})"), p, n)?;
    if c >= 2 {
        pres.set_commutator(1, 0, vec![(2, 1)])?;
    }
    if c >= 3 {
        pres.set_commutator(2, 0, vec![(3, 1)])?;
        pres.set_commutator(2, 1, vec![(4, 1)])?;
    }
    Ok(pres)
}

fn parse_args(s: &str) -> Result<Vec<u32>, FamilyError> {
    s.split(',')
        .map(|a| a.trim().parse::<u32>().map_err(|_| FamilyError::Syntax(s.to_string())))
        .collect()
}

fn single(name: &str) -> Result<PcPresentation, FamilyError> {
    let name = name.trim();
    let open = name.find('(').ok_or_else(|| FamilyError::Syntax(name.to_string()))?;
    if !name.ends_with(')') {
        return Err(FamilyError::Syntax(name.to_string()));
    }
    let family = &name[..open];
    let args = parse_args(&name[open + 1..name.len() - 1])?;
    let want = |k: usize, fam: &'static str| {
        if args.len() == k {
            Ok(())
        } else {
            Err(param_err(fam, format!("expected {k} parameter(s), got {}", args.len())))
        }
    };
    match family {
        "elab" => {
            want(2, "elab")?;
            elab(args[0], args[1] as usize)
        }
        "heis" => {
            want(1, "heis")?;
            heis(args[0])
        }
        "espm" => {
            want(1, "espm")?;
            espm(args[0])
        }
        "dihedral" => {
            want(1, "dihedral")?;
            dihedral(args[0])
        }
        "quaternion" => {
            want(1, "quaternion")?;
            quaternion(args[0])
        }
        "semidihedral" => {
            want(1, "semidihedral")?;
            semidihedral(args[0])
        }
        "wreath" => {
            want(1, "wreath")?;
            wreath(args[0])
        }
        "freenilp" => {
            want(2, "freenilp")?;
            freenilp(args[0], args[1])
        }
        other => Err(FamilyError::Unknown(other.to_string())),
    }
}

/// Presentation for a builtin name such as `wreath(3)` or
/// `dihedral(8)xdihedral(8)`.
pub fn from_name(name: &str) -> Result<PcPresentation, FamilyError> {
    let mut factors = Vec::new();
    let mut start = 0;
    let bytes = name.as_bytes();
    for (i, &b) in bytes.iter().enumerate() {
        if b == b'x' && i > 0 && bytes[i - 1] == b')' {
            factors.push(&name[start..i]);
            start = i + 1;
        }
    }
    factors.push(&name[start..]);
    let mut acc = single(factors[0])?;
    for f in &factors[1..] {
        acc = acc.direct_product(&single(f)?)?;
    }
    acc.set_id(name.trim());
    Ok(acc)
}

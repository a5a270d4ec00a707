//! Weighted polycyclic presentations and group arithmetic.
//!
//! A presentation has generators `g_1, ..., g_n` (indexed from 0 in this
//! API), each of relative order `p`, with power relations `g_i^p = w_i` and
//! commutator relations `[g_j, g_i] = w_ji` for `i < j`. Every relation word
//! only mentions generators of larger index than the one(s) it defines, so
//! the presentation is adapted to a central series and collection always
//! terminates.
//!
//! Elements are kept in normal form `g_1^e_1 ... g_n^e_n` with
//! `0 <= e_k < p`, packed into a single mixed-radix integer whose numeric
//! order is the lexicographic order of exponent vectors.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use bitvec::vec::BitVec;
use thiserror::Error;

/// Largest group order accepted.
pub const MAX_ORDER: u64 = 1 << 20;

/// Upper bound on the generator count implied by [`MAX_ORDER`].
pub const MAX_GENS: usize = 20;

/// Groups up to this order get full multiplication and inverse tables.
const TABLE_LIMIT: u32 = 1024;

/// Groups up to this order are checked for associativity on every triple.
const EXHAUSTIVE_CONSISTENCY_LIMIT: u32 = 243;

/// A relation word: `(generator, exponent)` tokens with strictly increasing
/// generator indices and exponents in `1..p`.
pub type RelWord = Vec<(usize, u32)>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PcError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("group order {p}^{n} exceeds 2^20")]
    TooLarge { p: u64, n: usize },
    #[error("generator {index} out of range 1..={n}")]
    GeneratorOutOfRange { index: usize, n: usize },
    #[error("commutator relation needs i < j, got j = {j}, i = {i}")]
    BadCommutatorPair { j: usize, i: usize },
    #[error("token index must exceed {letter} ({bound}), found {index}")]
    TokenIndex { letter: char, bound: usize, index: usize },
    #[error("token indices must be strictly increasing")]
    NotIncreasing,
    #[error("exponent {exp} outside 1..{p}")]
    ExponentRange { exp: u32, p: u32 },
    #[error("exponent vector has length {len}, expected {n}")]
    VectorLength { len: usize, n: usize },
    #[error("exponent {exp} at position {pos} outside 0..{p}")]
    VectorEntry { exp: u32, pos: usize, p: u32 },
    #[error("direct product needs equal primes, got {0} and {1}")]
    PrimeMismatch(u32, u32),
    #[error("inconsistent presentation: {0}")]
    Inconsistent(String),
}

/// Generator numbers inside errors and `Display` output are 1-based, as in
/// written presentations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PcPresentation {
    id: String,
    p: u32,
    n: usize,
    powers: Vec<RelWord>,
    comms: Vec<Vec<RelWord>>,
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl PcPresentation {
    /// An elementary abelian presentation on `n` generators; relations are
    /// added with [`set_power`](Self::set_power) and
    /// [`set_commutator`](Self::set_commutator).
    pub fn new(id: impl Into<String>, p: u32, n: usize) -> Result<Self, PcError> {
        if !is_prime(p as u64) {
            return Err(PcError::NotPrime(p as u64));
        }
        let mut order: u64 = 1;
        for _ in 0..n {
            order *= p as u64;
            if order > MAX_ORDER {
                return Err(PcError::TooLarge { p: p as u64, n });
            }
        }
        Ok(Self {
            id: id.into(),
            p,
            n,
            powers: vec![Vec::new(); n],
            comms: (0..n).map(|j| vec![Vec::new(); j]).collect(),
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn set_id(&mut self, id: impl Into<String>) {
        self.id = id.into();
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `p^n`.
    pub fn order(&self) -> u32 {
        self.p.pow(self.n as u32)
    }

    fn check_word(&self, word: &[(usize, u32)], letter: char, bound: usize) -> Result<(), PcError> {
        let mut last: Option<usize> = None;
        for &(k, e) in word {
            if k >= self.n {
                return Err(PcError::GeneratorOutOfRange { index: k + 1, n: self.n });
            }
            if k <= bound {
                return Err(PcError::TokenIndex { letter, bound: bound + 1, index: k + 1 });
            }
            if let Some(l) = last {
                if k <= l {
                    return Err(PcError::NotIncreasing);
                }
            }
            if e == 0 || e >= self.p {
                return Err(PcError::ExponentRange { exp: e, p: self.p });
            }
            last = Some(k);
        }
        Ok(())
    }

    /// Sets `g_i^p = word`.
    pub fn set_power(&mut self, i: usize, word: RelWord) -> Result<(), PcError> {
        if i >= self.n {
            return Err(PcError::GeneratorOutOfRange { index: i + 1, n: self.n });
        }
        self.check_word(&word, 'i', i)?;
        self.powers[i] = word;
        Ok(())
    }

    /// Sets `[g_j, g_i] = word` for `i < j`.
    pub fn set_commutator(&mut self, j: usize, i: usize, word: RelWord) -> Result<(), PcError> {
        if j >= self.n {
            return Err(PcError::GeneratorOutOfRange { index: j + 1, n: self.n });
        }
        if i >= j {
            return Err(PcError::BadCommutatorPair { j: j + 1, i: i + 1 });
        }
        self.check_word(&word, 'j', j)?;
        self.comms[j][i] = word;
        Ok(())
    }

    pub fn power(&self, i: usize) -> &[(usize, u32)] {
        &self.powers[i]
    }

    pub fn commutator(&self, j: usize, i: usize) -> &[(usize, u32)] {
        &self.comms[j][i]
    }

    /// The direct product `self x other`; generators of `other` follow those
    /// of `self`.
    pub fn direct_product(&self, other: &PcPresentation) -> Result<PcPresentation, PcError> {
        if self.p != other.p {
            return Err(PcError::PrimeMismatch(self.p, other.p));
        }
        let shift = self.n;
        let mut out = PcPresentation::new(format!("{}x{}", self.id, other.id), self.p, self.n + other.n)?;
        let shifted = |w: &[(usize, u32)]| w.iter().map(|&(k, e)| (k + shift, e)).collect::<RelWord>();
        for i in 0..self.n {
            out.powers[i] = self.powers[i].clone();
            for h in 0..i {
                out.comms[i][h] = self.comms[i][h].clone();
            }
        }
        for i in 0..other.n {
            out.powers[i + shift] = shifted(&other.powers[i]);
            for h in 0..i {
                out.comms[i + shift][h + shift] = shifted(&other.comms[i][h]);
            }
        }
        Ok(out)
    }
}

impl fmt::Display for PcPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (p = {}, n = {})", self.id, self.p, self.n)
    }
}

/// An element of a [`PcGroup`], stored as the mixed-radix code of its
/// normal-form exponent vector. Ordering is lexicographic on exponents.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Element(u32);

impl Element {
    pub const IDENTITY: Element = Element(0);

    pub fn code(self) -> u32 {
        self.0
    }

    pub(crate) fn from_code(code: u32) -> Self {
        Element(code)
    }

    pub fn is_identity(self) -> bool {
        self.0 == 0
    }

    pub(crate) fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConsistencyMethod {
    /// `(xy)z = x(yz)` on every triple.
    AllTriples,
    /// The standard overlap test words.
    OverlapWords,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConsistencyReport {
    pub consistent: bool,
    /// Size of the closure of the generators under multiplication.
    pub element_count: u32,
    pub method: ConsistencyMethod,
    pub failures: Vec<String>,
}

#[derive(Clone, Copy)]
enum Src {
    Power(usize),
    Conj(usize, usize),
}

enum Pending {
    Word { src: Src, pos: usize, reps: u32 },
    Gen { g: usize, e: u32 },
}

type Exps = [u32; MAX_GENS];

struct Tables {
    mul: Vec<u32>,
    inv: Vec<u32>,
}

/// A consistent presentation together with the machinery to multiply in it.
///
/// Immutable after construction; share it freely across threads.
pub struct PcGroup {
    pres: PcPresentation,
    p: u32,
    n: usize,
    order: u32,
    place: Vec<u32>,
    // conj[j][i] = g_j^(g_i) = g_j [g_j, g_i], as a word; None when trivial
    // commutator makes it just g_j.
    conj: Vec<Vec<Option<RelWord>>>,
    tables: Option<Tables>,
}

impl fmt::Debug for PcGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PcGroup").field("pres", &self.pres).field("order", &self.order).finish()
    }
}

impl PcGroup {
    /// Builds the group and rejects inconsistent presentations.
    pub fn new(pres: PcPresentation) -> Result<Self, PcError> {
        let group = Self::build(pres);
        let report = group.consistency();
        if !report.consistent {
            let first = report.failures.first().cloned().unwrap_or_default();
            return Err(PcError::Inconsistent(first));
        }
        Ok(group)
    }

    /// Consistency report for a presentation that may be inconsistent.
    pub fn validate_consistency(pres: &PcPresentation) -> ConsistencyReport {
        Self::build(pres.clone()).consistency()
    }

    fn build(pres: PcPresentation) -> Self {
        let p = pres.p;
        let n = pres.n;
        let order = pres.order();
        let place = (0..n).map(|k| p.pow((n - 1 - k) as u32)).collect();
        let conj = (0..n)
            .map(|j| {
                (0..j)
                    .map(|i| {
                        let c = &pres.comms[j][i];
                        if c.is_empty() {
                            None
                        } else {
                            let mut w = Vec::with_capacity(c.len() + 1);
                            w.push((j, 1));
                            w.extend_from_slice(c);
                            Some(w)
                        }
                    })
                    .collect()
            })
            .collect();
        let mut group = PcGroup { pres, p, n, order, place, conj, tables: None };
        if order <= TABLE_LIMIT {
            group.tables = Some(group.build_tables());
        }
        group
    }

    fn build_tables(&self) -> Tables {
        let ord = self.order as usize;
        let mut mul = vec![0u32; ord * ord];
        let mut stack = Vec::new();
        for x in 0..ord {
            let row = x * ord;
            mul[row] = x as u32;
            for y in 1..ord {
                // y = y' * g_k with k the last non-zero exponent of y, and y'
                // earlier in the row.
                let ye = self.decode(Element(y as u32));
                let k = (0..self.n).rev().find(|&k| ye[k] != 0).unwrap();
                let prev = y - self.place[k] as usize;
                let mut e = self.decode(Element(mul[row + prev]));
                self.collect_gen(&mut e, k, 1, &mut stack);
                mul[row + y] = self.encode(&e).0;
            }
        }
        let inv = (0..ord)
            .map(|x| {
                let row = &mul[x * ord..(x + 1) * ord];
                row.iter().position(|&v| v == 0).unwrap() as u32
            })
            .collect();
        Tables { mul, inv }
    }

    pub fn presentation(&self) -> &PcPresentation {
        &self.pres
    }

    pub fn id(&self) -> &str {
        &self.pres.id
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn identity(&self) -> Element {
        Element::IDENTITY
    }

    /// The generator `g_{k+1}` (0-based `k`).
    pub fn generator(&self, k: usize) -> Element {
        Element(self.place[k])
    }

    pub fn generators(&self) -> Vec<Element> {
        (0..self.n).map(|k| self.generator(k)).collect()
    }

    /// Element from an exponent vector.
    pub fn element(&self, exps: &[u32]) -> Result<Element, PcError> {
        if exps.len() != self.n {
            return Err(PcError::VectorLength { len: exps.len(), n: self.n });
        }
        let mut code = 0u32;
        for (pos, &e) in exps.iter().enumerate() {
            if e >= self.p {
                return Err(PcError::VectorEntry { exp: e, pos: pos + 1, p: self.p });
            }
            code = code * self.p + e;
        }
        Ok(Element(code))
    }

    /// Element with the given code (its index in [`elements`](Self::elements)).
    pub fn element_at(&self, index: u32) -> Option<Element> {
        (index < self.order).then_some(Element(index))
    }

    pub fn exponents(&self, x: Element) -> Vec<u32> {
        self.decode(x)[..self.n].to_vec()
    }

    /// All elements in lexicographic order of exponent vectors.
    pub fn elements(&self) -> impl ExactSizeIterator<Item = Element> + '_ {
        (0..self.order).map(Element)
    }

    /// `[e1,e2,...,en]`.
    pub fn format_element(&self, x: Element) -> String {
        let e = self.decode(x);
        let parts: Vec<String> = e[..self.n].iter().map(|v| format!("{v}")).collect();
        format!("[{}]", parts.join(","))
    }

    fn decode(&self, x: Element) -> Exps {
        let mut e = [0u32; MAX_GENS];
        let mut c = x.0;
        for k in (0..self.n).rev() {
            e[k] = c % self.p;
            c /= self.p;
        }
        e
    }

    fn encode(&self, e: &Exps) -> Element {
        let mut code = 0u32;
        for &v in &e[..self.n] {
            code = code * self.p + v;
        }
        Element(code)
    }

    fn word(&self, src: Src) -> &[(usize, u32)] {
        match src {
            Src::Power(i) => &self.pres.powers[i],
            Src::Conj(j, i) => self.conj[j][i].as_deref().unwrap_or(&[]),
        }
    }

    /// Multiplies the normal form `exps` on the right by `g^e`, `0 < e < p`.
    fn collect_gen(&self, exps: &mut Exps, g: usize, e: u32, stack: &mut Vec<Pending>) {
        debug_assert!(stack.is_empty());
        stack.push(Pending::Gen { g, e });
        while let Some(item) = stack.pop() {
            match item {
                Pending::Gen { g, e } => self.step(exps, g, e, stack),
                Pending::Word { src, pos, reps } => {
                    let w = self.word(src);
                    let (k, ek) = w[pos];
                    if pos + 1 < w.len() {
                        stack.push(Pending::Word { src, pos: pos + 1, reps });
                    } else if reps > 1 {
                        stack.push(Pending::Word { src, pos: 0, reps: reps - 1 });
                    }
                    self.step(exps, k, ek, stack);
                }
            }
        }
    }

    fn step(&self, exps: &mut Exps, g: usize, e: u32, stack: &mut Vec<Pending>) {
        let n = self.n;
        let p = self.p;
        if exps[g + 1..n].iter().all(|&v| v == 0) {
            let s = exps[g] + e;
            if s >= p {
                exps[g] = s - p;
                if !self.pres.powers[g].is_empty() {
                    stack.push(Pending::Word { src: Src::Power(g), pos: 0, reps: 1 });
                }
            } else {
                exps[g] = s;
            }
            return;
        }
        // exps = A g^a B with B over generators above g; A g^a B g = A g^(a+1) B^g.
        if e > 1 {
            stack.push(Pending::Gen { g, e: e - 1 });
        }
        for l in (g + 1..n).rev() {
            let b = exps[l];
            if b == 0 {
                continue;
            }
            exps[l] = 0;
            if self.conj[l][g].is_some() {
                stack.push(Pending::Word { src: Src::Conj(l, g), pos: 0, reps: b });
            } else {
                stack.push(Pending::Gen { g: l, e: b });
            }
        }
        let s = exps[g] + 1;
        if s == p {
            exps[g] = 0;
            if !self.pres.powers[g].is_empty() {
                stack.push(Pending::Word { src: Src::Power(g), pos: 0, reps: 1 });
            }
        } else {
            exps[g] = s;
        }
    }

    fn mul_collect(&self, x: Element, y: Element) -> Element {
        let mut e = self.decode(x);
        let ye = self.decode(y);
        let mut stack = Vec::with_capacity(32);
        for (k, &yk) in ye[..self.n].iter().enumerate() {
            if yk != 0 {
                self.collect_gen(&mut e, k, yk, &mut stack);
            }
        }
        self.encode(&e)
    }

    /// Normal form of a word of `(generator, exponent)` tokens, exponents of
    /// any sign.
    pub fn collect(&self, word: &[(usize, i64)]) -> Result<Element, PcError> {
        let mut acc = self.identity();
        for &(k, e) in word {
            if k >= self.n {
                return Err(PcError::GeneratorOutOfRange { index: k + 1, n: self.n });
            }
            let g = self.power(self.generator(k), e);
            acc = self.multiply(acc, g);
        }
        Ok(acc)
    }

    pub fn multiply(&self, x: Element, y: Element) -> Element {
        match &self.tables {
            Some(t) => Element(t.mul[x.index() * self.order as usize + y.index()]),
            None => self.mul_collect(x, y),
        }
    }

    /// `a^-1 b`, solved one generator at a time.
    pub fn left_quotient(&self, a: Element, b: Element) -> Element {
        if let Some(t) = &self.tables {
            let ord = self.order as usize;
            return Element(t.mul[t.inv[a.index()] as usize * ord + b.index()]);
        }
        let target = self.decode(b);
        let mut z = self.decode(a);
        let mut c = [0u32; MAX_GENS];
        let mut stack = Vec::with_capacity(32);
        for k in 0..self.n {
            let e = (target[k] + self.p - z[k]) % self.p;
            if e != 0 {
                self.collect_gen(&mut z, k, e, &mut stack);
                c[k] = e;
            }
        }
        self.encode(&c)
    }

    pub fn inverse(&self, x: Element) -> Element {
        match &self.tables {
            Some(t) => Element(t.inv[x.index()]),
            None => self.left_quotient(x, Element::IDENTITY),
        }
    }

    /// `x^m` for any integer `m`.
    pub fn power(&self, x: Element, m: i64) -> Element {
        let mut base = if m < 0 { self.inverse(x) } else { x };
        let mut m = m.unsigned_abs();
        let mut acc = Element::IDENTITY;
        while m > 0 {
            if m & 1 == 1 {
                acc = self.multiply(acc, base);
            }
            m >>= 1;
            if m > 0 {
                base = self.multiply(base, base);
            }
        }
        acc
    }

    /// `[x, y] = x^-1 y^-1 x y`.
    pub fn commutator(&self, x: Element, y: Element) -> Element {
        match &self.tables {
            Some(t) => {
                let ord = self.order as usize;
                let xi = t.inv[x.index()] as usize;
                let yi = t.inv[y.index()] as usize;
                let a = t.mul[xi * ord + yi] as usize;
                let b = t.mul[a * ord + x.index()] as usize;
                Element(t.mul[b * ord + y.index()])
            }
            None => self.left_quotient(self.mul_collect(y, x), self.mul_collect(x, y)),
        }
    }

    /// Left-normed `[x_1, ..., x_k]`; a single entry is returned unchanged and
    /// the empty bracket is the identity.
    pub fn commutator_of(&self, xs: &[Element]) -> Element {
        let mut it = xs.iter();
        let Some(&first) = it.next() else {
            return Element::IDENTITY;
        };
        it.fold(first, |acc, &x| self.commutator(acc, x))
    }

    /// `x^y = y^-1 x y`.
    pub fn conjugate(&self, x: Element, y: Element) -> Element {
        match &self.tables {
            Some(t) => {
                let ord = self.order as usize;
                let yi = t.inv[y.index()] as usize;
                let a = t.mul[yi * ord + x.index()] as usize;
                Element(t.mul[a * ord + y.index()])
            }
            None => self.left_quotient(y, self.mul_collect(x, y)),
        }
    }

    pub fn element_order(&self, x: Element) -> u64 {
        let mut ord = 1u64;
        let mut y = x;
        while !y.is_identity() {
            y = self.power(y, self.p as i64);
            ord *= self.p as u64;
        }
        ord
    }

    fn consistency(&self) -> ConsistencyReport {
        let mut failures = Vec::new();
        let ord = self.order as usize;

        let mut seen: BitVec = BitVec::repeat(false, ord);
        seen.set(0, true);
        let mut queue = vec![Element::IDENTITY];
        let gens = self.generators();
        let mut count = 1u32;
        while let Some(x) = queue.pop() {
            for &g in &gens {
                let y = self.multiply(x, g);
                if !seen[y.index()] {
                    seen.set(y.index(), true);
                    count += 1;
                    queue.push(y);
                }
            }
        }
        if count != self.order {
            failures.push(format!("generators close to {} elements, expected {}", count, self.order));
        }

        let method = if self.order <= EXHAUSTIVE_CONSISTENCY_LIMIT {
            'outer: for x in self.elements() {
                for y in self.elements() {
                    let xy = self.multiply(x, y);
                    for z in self.elements() {
                        let l = self.multiply(xy, z);
                        let r = self.multiply(x, self.multiply(y, z));
                        if l != r {
                            failures.push(format!(
                                "({}{}){} != {}({}{})",
                                self.format_element(x),
                                self.format_element(y),
                                self.format_element(z),
                                self.format_element(x),
                                self.format_element(y),
                                self.format_element(z)
                            ));
                            break 'outer;
                        }
                    }
                }
            }
            ConsistencyMethod::AllTriples
        } else {
            self.overlap_tests(&mut failures);
            ConsistencyMethod::OverlapWords
        };
        ConsistencyReport { consistent: failures.is_empty(), element_count: count, method, failures }
    }

    fn overlap_tests(&self, failures: &mut Vec<String>) {
        let pm1 = self.p as i64 - 1;
        let mut check = |a: Element, b: Element, c: Element, what: String| {
            let l = self.multiply(self.multiply(a, b), c);
            let r = self.multiply(a, self.multiply(b, c));
            if l != r {
                failures.push(what);
            }
        };
        for i in 0..self.n {
            let gi = self.generator(i);
            let gi_p = self.power(gi, pm1);
            check(gi, gi_p, gi, format!("g{0} g{0}^p != g{0}^p g{0}", i + 1));
            for j in i + 1..self.n {
                let gj = self.generator(j);
                let gj_p = self.power(gj, pm1);
                check(gj_p, gj, gi, format!("g{0}^p g{1} overlap fails", j + 1, i + 1));
                check(gj, gi, gi_p, format!("g{0} g{1}^p overlap fails", j + 1, i + 1));
                for k in j + 1..self.n {
                    let gk = self.generator(k);
                    check(gk, gj, gi, format!("g{} g{} g{} overlap fails", k + 1, j + 1, i + 1));
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;

    fn heis3() -> PcGroup {
        PcGroup::new(families::heis(3).unwrap()).unwrap()
    }

    #[test]
    fn collect_examples() {
        let g = heis3();
        assert_eq!(g.exponents(g.collect(&[(0, 1), (1, 1)]).unwrap()), [1, 1, 0]);
        assert_eq!(g.exponents(g.collect(&[(1, 1), (0, 1)]).unwrap()), [1, 1, 1]);
        assert_eq!(g.collect(&[]).unwrap(), g.identity());
        assert_eq!(
            g.collect(&[(3, 1)]),
            Err(PcError::GeneratorOutOfRange { index: 4, n: 3 })
        );
        // negative exponents
        let x = g.collect(&[(0, -1), (1, 4)]).unwrap();
        assert_eq!(g.multiply(g.generator(0), x), g.generator(1));
    }

    #[test]
    fn multiply_inverse_power() {
        let g = heis3();
        let e = |v: &[u32]| g.element(v).unwrap();
        assert_eq!(g.multiply(e(&[1, 0, 0]), e(&[0, 1, 0])), e(&[1, 1, 0]));
        assert_eq!(g.multiply(e(&[0, 1, 0]), e(&[1, 0, 0])), e(&[1, 1, 1]));
        assert_eq!(g.inverse(e(&[1, 0, 0])), e(&[2, 0, 0]));
        assert_eq!(g.power(e(&[1, 1, 0]), 3), g.identity());
        assert_eq!(g.power(e(&[1, 1, 0]), -1), g.inverse(e(&[1, 1, 0])));
        let el = PcGroup::new(families::elab(3, 2).unwrap()).unwrap();
        assert_eq!(el.multiply(el.element(&[1, 0]).unwrap(), el.element(&[2, 0]).unwrap()), el.identity());
    }

    #[test]
    fn commutator_and_conjugate() {
        let g = heis3();
        let e = |v: &[u32]| g.element(v).unwrap();
        let (a, b) = (e(&[1, 0, 0]), e(&[0, 1, 0]));
        assert_eq!(g.commutator(b, a), e(&[0, 0, 1]));
        assert_eq!(g.commutator(a, b), e(&[0, 0, 2]));
        assert_eq!(g.commutator(a, a), g.identity());
        assert_eq!(g.conjugate(a, b), e(&[1, 0, 2]));
        assert_eq!(g.conjugate(a, g.identity()), a);
        let el = PcGroup::new(families::elab(3, 2).unwrap()).unwrap();
        let (x, y) = (el.generator(0), el.generator(1));
        assert_eq!(el.conjugate(x, y), x);
    }

    #[test]
    fn table_and_collection_paths_agree() {
        // wreath(3) is tabled; compare with direct collection.
        let g = PcGroup::new(families::wreath(3).unwrap()).unwrap();
        assert!(g.tables.is_some());
        for x in g.elements().step_by(5) {
            for y in g.elements().step_by(7) {
                assert_eq!(g.multiply(x, y), g.mul_collect(x, y));
                let lq = g.left_quotient(g.mul_collect(y, x), g.mul_collect(x, y));
                assert_eq!(g.commutator(x, y), lq);
            }
        }
    }

    #[test]
    fn untabled_group_arithmetic() {
        // freenilp(5, 3) has order 3125 and runs on pure collection.
        let g = PcGroup::new(families::freenilp(5, 3).unwrap()).unwrap();
        assert!(g.tables.is_none());
        let (a, b) = (g.generator(0), g.generator(1));
        assert_eq!(g.commutator(b, a), g.generator(2));
        assert_eq!(g.commutator(g.generator(2), a), g.generator(3));
        let x = g.multiply(a, g.multiply(b, g.generator(2)));
        assert_eq!(g.multiply(x, g.inverse(x)), g.identity());
        assert_eq!(g.power(x, 125), g.identity());
        assert_eq!(g.element_order(a), 5);
    }

    #[test]
    fn consistency_reports() {
        let r = PcGroup::validate_consistency(&families::heis(3).unwrap());
        assert!(r.consistent);
        assert_eq!(r.element_count, 27);
        assert_eq!(r.method, ConsistencyMethod::AllTriples);
        let r = PcGroup::validate_consistency(&families::elab(3, 2).unwrap());
        assert!(r.consistent);
        assert_eq!(r.element_count, 9);

        // a^2 = 1 but conjugation by a has order 4 on <b,c,d>: inconsistent.
        let mut bad = PcPresentation::new("bad", 2, 4).unwrap();
        bad.set_commutator(1, 0, vec![(2, 1)]).unwrap();
        bad.set_commutator(2, 0, vec![(3, 1)]).unwrap();
        bad.set_commutator(2, 1, vec![(3, 1)]).unwrap();
        let r = PcGroup::validate_consistency(&bad);
        assert!(!r.consistent);
        assert!(matches!(PcGroup::new(bad), Err(PcError::Inconsistent(_))));
    }

    #[test]
    fn overlap_tests_detect_inconsistency() {
        // order 3^6 > 243 forces the overlap-word method
        let mut bad = PcPresentation::new("bad", 3, 6).unwrap();
        bad.set_power(0, vec![(1, 1)]).unwrap();
        bad.set_commutator(1, 0, vec![(2, 1)]).unwrap();
        let r = PcGroup::validate_consistency(&bad);
        assert_eq!(r.method, ConsistencyMethod::OverlapWords);
        assert!(!r.consistent);
        let good = families::freenilp(3, 3).unwrap().direct_product(&families::elab(3, 1).unwrap()).unwrap();
        let r = PcGroup::validate_consistency(&good);
        assert_eq!(r.method, ConsistencyMethod::OverlapWords);
        assert!(r.consistent, "{:?}", r.failures);
    }

    #[test]
    fn presentation_validation() {
        let mut p = PcPresentation::new("x", 3, 3).unwrap();
        assert_eq!(
            p.set_commutator(1, 0, vec![(1, 1)]),
            Err(PcError::TokenIndex { letter: 'j', bound: 2, index: 2 })
        );
        assert_eq!(p.set_power(0, vec![(2, 1), (1, 1)]), Err(PcError::NotIncreasing));
        assert_eq!(p.set_power(0, vec![(1, 3)]), Err(PcError::ExponentRange { exp: 3, p: 3 }));
        assert_eq!(PcPresentation::new("x", 4, 1).unwrap_err(), PcError::NotPrime(4));
        assert!(matches!(PcPresentation::new("x", 2, 21), Err(PcError::TooLarge { .. })));
        assert!(PcPresentation::new("x", 2, 20).is_ok());
    }

    #[test]
    fn enumerate_elements_lexicographic() {
        let g = PcGroup::new(families::elab(3, 1).unwrap()).unwrap();
        let v: Vec<_> = g.elements().map(|x| g.exponents(x)).collect();
        assert_eq!(v, vec![vec![0], vec![1], vec![2]]);
        let h = heis3();
        let all: Vec<_> = h.elements().map(|x| h.exponents(x)).collect();
        assert_eq!(all.len(), 27);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        let w = PcGroup::new(families::wreath(3).unwrap()).unwrap();
        assert_eq!(w.elements().len(), 81);
    }
}

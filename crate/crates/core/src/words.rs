//! Outer commutator words and their values.

use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use bitvec::vec::BitVec;
use thiserror::Error;

use crate::pc::{Element, PcGroup};
use crate::subgroup::{ElementSet, Subgroup};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("variable indices start at 1")]
    ZeroVariable,
    #[error("variable {0} occurs more than once")]
    RepeatedVariable(usize),
    #[error("variables must be exactly 1..{arity}")]
    Incomplete { arity: usize },
    #[error("the lower central word needs r >= 1")]
    ZeroLength,
    #[error("expected {expected} arguments, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("slot {slot} out of range 1..={r}")]
    Slot { slot: usize, r: usize },
    #[error("witness has {got} fixed entries, expected {expected}")]
    WitnessLength { expected: usize, got: usize },
    #[error("element code {0} outside the group")]
    Foreign(u32),
    #[error("cannot parse word `{0}`")]
    Syntax(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Node {
    Var(usize),
    Comm(Box<Node>, Box<Node>),
}

/// An outer (multilinear) commutator word: every variable occurs once and the
/// variables are `1..=arity`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OuterWord {
    root: Node,
    arity: usize,
}

impl Node {
    fn collect_vars(&self, out: &mut Vec<usize>) {
        match self {
            Node::Var(k) => out.push(*k),
            Node::Comm(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    fn eval(&self, group: &PcGroup, args: &[Element]) -> Element {
        match self {
            Node::Var(k) => args[k - 1],
            Node::Comm(a, b) => group.commutator(a.eval(group, args), b.eval(group, args)),
        }
    }

    // value set of the subtree; operands are taken modulo the center since
    // [az, bz'] = [a, b] for central z, z'
    fn values(&self, group: &PcGroup, center: &Subgroup) -> ElementSet {
        match self {
            Node::Var(_) => group.whole_group().as_set().clone(),
            Node::Comm(a, b) => {
                let left = reduce_mod(group, &a.values(group, center), center);
                let right = reduce_mod(group, &b.values(group, center), center);
                let mut mask: BitVec = BitVec::repeat(false, group.order() as usize);
                for &x in &left {
                    for &y in &right {
                        mask.set(group.commutator(x, y).index(), true);
                    }
                }
                ElementSet::from_mask(mask)
            }
        }
    }
}

// one representative per coset xZ meeting the set
fn reduce_mod(group: &PcGroup, set: &ElementSet, z: &Subgroup) -> Vec<Element> {
    let mut covered: BitVec = BitVec::repeat(false, group.order() as usize);
    let mut reps = Vec::new();
    for x in set.iter() {
        if covered[x.index()] {
            continue;
        }
        reps.push(x);
        for &c in z.elements() {
            covered.set(group.multiply(x, c).index(), true);
        }
    }
    reps
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Var(k) => write!(f, "{k}"),
            Node::Comm(a, b) => write!(f, "[{a},{b}]"),
        }
    }
}

impl fmt::Display for OuterWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.root.fmt(f)
    }
}

impl OuterWord {
    /// The one-variable word `x_k`. Only `var(1)` is complete on its own.
    pub fn var(k: usize) -> Result<OuterWord, WordError> {
        if k == 0 {
            return Err(WordError::ZeroVariable);
        }
        Ok(OuterWord { root: Node::Var(k), arity: 1 })
    }

    /// `[a, b]`; the two sides must use different variables.
    pub fn comm(a: OuterWord, b: OuterWord) -> Result<OuterWord, WordError> {
        let mut vars = a.variables();
        vars.extend(b.variables());
        vars.sort_unstable();
        if let Some(w) = vars.windows(2).find(|w| w[0] == w[1]) {
            return Err(WordError::RepeatedVariable(w[0]));
        }
        Ok(OuterWord { arity: a.arity + b.arity, root: Node::Comm(Box::new(a.root), Box::new(b.root)) })
    }

    /// `gamma_r = [x_1, ..., x_r]`, left-normed.
    pub fn gamma(r: usize) -> Result<OuterWord, WordError> {
        if r == 0 {
            return Err(WordError::ZeroLength);
        }
        let mut w = OuterWord::var(1)?;
        for k in 2..=r {
            w = OuterWord::comm(w, OuterWord::var(k)?)?;
        }
        Ok(w)
    }

    /// Parses `gammaN`, `γN`, or a bracket string such as `[[1,2],[3,4]]`.
    pub fn parse(text: &str) -> Result<OuterWord, WordError> {
        let t = text.trim();
        let syntax = || WordError::Syntax(t.to_string());
        if let Some(rest) = t.strip_prefix("gamma").or_else(|| t.strip_prefix('γ')) {
            let r: usize = rest.parse().map_err(|_| syntax())?;
            return OuterWord::gamma(r);
        }
        let chars: Vec<char> = t.chars().filter(|c| !c.is_whitespace()).collect();
        let mut pos = 0;
        let w = parse_node(&chars, &mut pos).ok_or_else(syntax)??;
        if pos != chars.len() {
            return Err(syntax());
        }
        w.check()?;
        Ok(w)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Variable indices in left-to-right order.
    pub fn variables(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.root.collect_vars(&mut out);
        out
    }

    /// Whether the variables are exactly `1..=arity`.
    pub fn check(&self) -> Result<(), WordError> {
        let mut vars = self.variables();
        vars.sort_unstable();
        if vars.iter().enumerate().all(|(i, &k)| k == i + 1) {
            Ok(())
        } else {
            Err(WordError::Incomplete { arity: self.arity })
        }
    }

    /// `(alpha, beta)` when the word is `[alpha, beta]`, each renumbered
    /// from 1 in order of first occurrence.
    pub fn split(&self) -> Option<(OuterWord, OuterWord)> {
        match &self.root {
            Node::Var(_) => None,
            Node::Comm(a, b) => Some((renumber(a), renumber(b))),
        }
    }

    pub fn evaluate(&self, group: &PcGroup, args: &[Element]) -> Result<Element, WordError> {
        self.check()?;
        if args.len() != self.arity {
            return Err(WordError::Arity { expected: self.arity, got: args.len() });
        }
        for &x in args {
            check_member(group, x)?;
        }
        Ok(self.root.eval(group, args))
    }

    // no arity or membership checks
    pub(crate) fn eval_raw(&self, group: &PcGroup, args: &[Element]) -> Element {
        self.root.eval(group, args)
    }

    /// Conjugators `h_1, ..., h_r` in the normal closure of `h = args[j-1]`
    /// such that for every `g`
    ///
    /// `w(.., g h, ..) = w(y_1^h_1, .., g^h_j, .., y_r^h_r) w(.., h, ..)`,
    ///
    /// built by recursion on `w = [a, b]`: with `t` the value of the side
    /// holding slot `j` (conjugated by the other side when that is `b`), every
    /// variable of `w` gets its conjugator multiplied by `t`.
    pub fn separation_conjugators(&self, group: &PcGroup, args: &[Element], j: usize) -> Vec<Element> {
        let mut hs = vec![Element::IDENTITY; self.arity];
        separation(&self.root, group, args, j, &mut hs);
        hs
    }

    /// The set `G_w` of all values of the word.
    ///
    /// Computed as `G_[a,b] = {[x, y] : x in G_a, y in G_b}` with each side
    /// taken modulo the center.
    pub fn value_set(&self, group: &PcGroup) -> Result<ElementSet, WordError> {
        self.check()?;
        Ok(self.root.values(group, &group.center()))
    }

    /// `G_w` by running over every argument tuple, for small groups.
    pub fn value_set_by_tuples(&self, group: &PcGroup) -> Result<ElementSet, WordError> {
        self.check()?;
        let order = group.order();
        let mut mask: BitVec = BitVec::repeat(false, order as usize);
        let mut codes = vec![0u32; self.arity];
        let mut args = vec![Element::IDENTITY; self.arity];
        loop {
            for (a, &c) in args.iter_mut().zip(&codes) {
                *a = Element::from_code(c);
            }
            mask.set(self.root.eval(group, &args).index(), true);
            let mut i = self.arity;
            loop {
                if i == 0 {
                    return Ok(ElementSet::from_mask(mask));
                }
                i -= 1;
                codes[i] += 1;
                if codes[i] < order {
                    break;
                }
                codes[i] = 0;
            }
        }
    }

    /// `w(G) = <G_w>`.
    pub fn verbal_subgroup(&self, group: &PcGroup) -> Result<Subgroup, WordError> {
        Ok(group.closure_of_set(&self.value_set(group)?))
    }
}

// returns the value at `args` and whether the subtree holds slot `j`
fn separation(node: &Node, group: &PcGroup, args: &[Element], j: usize, hs: &mut [Element]) -> (Element, bool) {
    match node {
        Node::Var(k) => (args[k - 1], *k == j),
        Node::Comm(a, b) => {
            let (va, in_a) = separation(a, group, args, j, hs);
            let (vb, in_b) = separation(b, group, args, j, hs);
            if in_a || in_b {
                let t = if in_b { group.conjugate(vb, va) } else { va };
                let mut vars = Vec::new();
                node.collect_vars(&mut vars);
                for k in vars {
                    hs[k - 1] = group.multiply(hs[k - 1], t);
                }
            }
            (group.commutator(va, vb), in_a || in_b)
        }
    }
}

fn renumber(node: &Node) -> OuterWord {
    fn go(node: &Node, next: &mut usize) -> Node {
        match node {
            Node::Var(_) => {
                *next += 1;
                Node::Var(*next)
            }
            Node::Comm(a, b) => {
                let a = go(a, next);
                let b = go(b, next);
                Node::Comm(Box::new(a), Box::new(b))
            }
        }
    }
    let mut next = 0;
    let root = go(node, &mut next);
    OuterWord { root, arity: next }
}

fn parse_node(chars: &[char], pos: &mut usize) -> Option<Result<OuterWord, WordError>> {
    match chars.get(*pos)? {
        '[' => {
            *pos += 1;
            let a = parse_node(chars, pos)?;
            if chars.get(*pos) != Some(&',') {
                return None;
            }
            *pos += 1;
            let b = parse_node(chars, pos)?;
            if chars.get(*pos) != Some(&']') {
                return None;
            }
            *pos += 1;
            Some(a.and_then(|a| b.and_then(|b| OuterWord::comm(a, b))))
        }
        c if c.is_ascii_digit() => {
            let start = *pos;
            while chars.get(*pos).is_some_and(char::is_ascii_digit) {
                *pos += 1;
            }
            let s: String = chars[start..*pos].iter().collect();
            Some(OuterWord::var(s.parse().ok()?))
        }
        _ => None,
    }
}

fn check_member(group: &PcGroup, x: Element) -> Result<(), WordError> {
    if x.code() < group.order() {
        Ok(())
    } else {
        Err(WordError::Foreign(x.code()))
    }
}

/// A slot `j` (1-based) and the `r - 1` fixed entries of the other slots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessTuple {
    slot: usize,
    fixed: Vec<Element>,
}

impl WitnessTuple {
    pub fn new(slot: usize, fixed: Vec<Element>) -> Result<Self, WordError> {
        let r = fixed.len() + 1;
        if slot == 0 || slot > r {
            return Err(WordError::Slot { slot, r });
        }
        Ok(WitnessTuple { slot, fixed })
    }

    pub fn slot(&self) -> usize {
        self.slot
    }

    /// Entries `x_1, ..., x_{j-1}, x_{j+1}, ..., x_r`.
    pub fn fixed(&self) -> &[Element] {
        &self.fixed
    }

    pub fn r(&self) -> usize {
        self.fixed.len() + 1
    }

    /// The full tuple with `g` placed in the slot.
    pub fn with_slot(&self, g: Element) -> Vec<Element> {
        let mut out = Vec::with_capacity(self.r());
        out.extend_from_slice(&self.fixed[..self.slot - 1]);
        out.push(g);
        out.extend_from_slice(&self.fixed[self.slot - 1..]);
        out
    }

    fn check(&self, group: &PcGroup, r: usize) -> Result<(), WordError> {
        if self.r() != r {
            return Err(WordError::WitnessLength { expected: r.saturating_sub(1), got: self.fixed.len() });
        }
        self.fixed.iter().try_for_each(|&x| check_member(group, x))
    }
}

/// Evaluates `[x_1, ..., x_{j-1}, g, x_{j+1}, ..., x_r]` for many `g` with the
/// prefix commutator computed once.
pub(crate) struct SlotMap<'a> {
    group: &'a PcGroup,
    prefix: Option<Element>,
    suffix: &'a [Element],
}

impl<'a> SlotMap<'a> {
    pub(crate) fn new(group: &'a PcGroup, witness: &'a WitnessTuple) -> Self {
        let head = &witness.fixed[..witness.slot - 1];
        let prefix = (!head.is_empty()).then(|| group.commutator_of(head));
        SlotMap { group, prefix, suffix: &witness.fixed[witness.slot - 1..] }
    }

    pub(crate) fn eval(&self, g: Element) -> Element {
        let mut v = match self.prefix {
            Some(c) => self.group.commutator(c, g),
            None => g,
        };
        for &x in self.suffix {
            v = self.group.commutator(v, x);
        }
        v
    }
}

/// `{[x_1, ..., x_{j-1}, g, x_{j+1}, ..., x_r] : g in G}`.
pub fn slot_value_set(group: &PcGroup, r: usize, witness: &WitnessTuple) -> Result<ElementSet, WordError> {
    slot_value_set_restricted(group, r, witness, &group.whole_group())
}

/// As [`slot_value_set`] with `g` running over `range` only.
pub fn slot_value_set_restricted(
    group: &PcGroup,
    r: usize,
    witness: &WitnessTuple,
    range: &Subgroup,
) -> Result<ElementSet, WordError> {
    if r < 2 {
        return Err(WordError::Slot { slot: witness.slot, r });
    }
    witness.check(group, r)?;
    let map = SlotMap::new(group, witness);
    let mut mask: BitVec = BitVec::repeat(false, group.order() as usize);
    for &g in range.elements() {
        mask.set(map.eval(g).index(), true);
    }
    Ok(ElementSet::from_mask(mask))
}

//! Coset enumeration over the trivial subgroup (HLT with coincidences).
//! Gives the regular action of the group presented by the pc relations read
//! as plain relators, without any collection.

use pcgroup_core::PcPresentation;

const NONE: usize = usize::MAX;

pub struct CosetTable {
    cols: usize,
    table: Vec<usize>,
    parent: Vec<usize>,
    queue: Vec<usize>,
}

/// Column `2k` is `g_k`, column `2k + 1` is its inverse.
fn inv(x: usize) -> usize {
    x ^ 1
}

impl CosetTable {
    fn new(cols: usize) -> Self {
        CosetTable { cols, table: vec![NONE; cols], parent: vec![0], queue: Vec::new() }
    }

    fn len(&self) -> usize {
        self.parent.len()
    }

    fn get(&self, c: usize, x: usize) -> usize {
        self.table[c * self.cols + x]
    }

    fn set(&mut self, c: usize, x: usize, d: usize) {
        self.table[c * self.cols + x] = d;
    }

    fn live(&self, c: usize) -> bool {
        self.parent[c] == c
    }

    fn define(&mut self, c: usize, x: usize) {
        let d = self.len();
        self.parent.push(d);
        self.table.extend(std::iter::repeat_n(NONE, self.cols));
        self.set(c, x, d);
        self.set(d, inv(x), c);
    }

    fn rep(&mut self, c: usize) -> usize {
        let mut r = c;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut c = c;
        while self.parent[c] != r {
            let next = self.parent[c];
            self.parent[c] = r;
            c = next;
        }
        r
    }

    fn merge(&mut self, a: usize, b: usize) {
        let (a, b) = (self.rep(a), self.rep(b));
        if a == b {
            return;
        }
        let (keep, drop) = if a < b { (a, b) } else { (b, a) };
        self.parent[drop] = keep;
        self.queue.push(drop);
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        self.queue.clear();
        self.merge(a, b);
        let mut i = 0;
        while i < self.queue.len() {
            let e = self.queue[i];
            i += 1;
            for x in 0..self.cols {
                let f = self.get(e, x);
                if f == NONE {
                    continue;
                }
                self.set(f, inv(x), NONE);
                let (e1, f1) = (self.rep(e), self.rep(f));
                if self.get(e1, x) != NONE {
                    let t = self.get(e1, x);
                    self.merge(f1, t);
                } else if self.get(f1, inv(x)) != NONE {
                    let t = self.get(f1, inv(x));
                    self.merge(e1, t);
                } else {
                    self.set(e1, x, f1);
                    self.set(f1, inv(x), e1);
                }
            }
        }
    }

    fn scan_and_fill(&mut self, c: usize, rel: &[usize]) {
        let (mut f, mut b) = (c, c);
        let (mut i, mut j) = (0usize, rel.len() as isize - 1);
        loop {
            while (i as isize) <= j && self.get(f, rel[i]) != NONE {
                f = self.get(f, rel[i]);
                i += 1;
            }
            if (i as isize) > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return;
            }
            while j >= i as isize && self.get(b, inv(rel[j as usize])) != NONE {
                b = self.get(b, inv(rel[j as usize]));
                j -= 1;
            }
            if j < i as isize {
                self.coincidence(f, b);
                return;
            }
            if j == i as isize {
                self.set(f, rel[i], b);
                self.set(b, inv(rel[i]), f);
                return;
            }
            self.define(f, rel[i]);
        }
    }
}

/// The regular permutation action: `act[c][x]` for live cosets numbered
/// `0..order`, coset 0 being the identity.
pub struct Action {
    pub order: usize,
    act: Vec<Vec<usize>>,
}

impl Action {
    /// Image of coset `c` under `g_1^e_1 ... g_n^e_n`.
    pub fn trace(&self, mut c: usize, exps: &[u32]) -> usize {
        for (k, &e) in exps.iter().enumerate() {
            for _ in 0..e {
                c = self.act[c][2 * k];
            }
        }
        c
    }
}

fn letter(k: usize, e: u32, inverse: bool, out: &mut Vec<usize>) {
    for _ in 0..e {
        out.push(2 * k + inverse as usize);
    }
}

fn relators(pres: &PcPresentation) -> Vec<Vec<usize>> {
    let n = pres.n();
    let p = pres.p();
    let push_inverse = |w: &[(usize, u32)], out: &mut Vec<usize>| {
        for &(k, e) in w.iter().rev() {
            letter(k, e, true, out);
        }
    };
    let mut rels = Vec::new();
    for i in 0..n {
        let mut r = Vec::new();
        letter(i, p, false, &mut r);
        push_inverse(pres.power(i), &mut r);
        rels.push(r);
    }
    for j in 0..n {
        for i in 0..j {
            let mut r = vec![2 * j + 1, 2 * i + 1, 2 * j, 2 * i];
            push_inverse(pres.commutator(j, i), &mut r);
            rels.push(r);
        }
    }
    rels
}

pub fn enumerate(pres: &PcPresentation, max_cosets: usize) -> Option<Action> {
    let cols = 2 * pres.n();
    let rels = relators(pres);
    let mut t = CosetTable::new(cols);
    let mut c = 0;
    while c < t.len() {
        if t.len() > max_cosets {
            return None;
        }
        if t.live(c) {
            for r in &rels {
                t.scan_and_fill(c, r);
                if !t.live(c) {
                    break;
                }
            }
            if t.live(c) {
                for x in 0..cols {
                    if t.get(c, x) == NONE {
                        t.define(c, x);
                    }
                }
            }
        }
        c += 1;
    }
    let live: Vec<usize> = (0..t.len()).filter(|&c| t.live(c)).collect();
    let mut index = vec![NONE; t.len()];
    for (i, &c) in live.iter().enumerate() {
        index[c] = i;
    }
    let mut act = Vec::with_capacity(live.len());
    for &c in &live {
        let mut row = Vec::with_capacity(cols);
        for x in 0..cols {
            let d = t.get(c, x);
            let d = t.rep(d);
            row.push(index[d]);
        }
        act.push(row);
    }
    Some(Action { order: live.len(), act })
}

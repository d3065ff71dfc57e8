//! The map algebra `g ⊗ B` and PBW straightening in `U(g ⊗ B)`.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::commalg::QuotientAlgebra;
use crate::linalg::normalize;
use crate::{Eta, Q};

use super::chevalley::{ChevalleyBasis, Elem};

/// A generator `x ⊗ b_j`, encoded as `x·dim B + j`.
pub type Gen = u32;

/// A homogeneous combination of generators.
pub type Element = Vec<(Gen, Q)>;

/// Sorted letter word `y_1 ≤ y_2 ≤ …` standing for `y_1 y_2 ⋯ v`.
pub type Mono = Vec<u16>;

#[derive(Debug, Clone)]
pub struct MapAlgebra {
    pub g: Arc<ChevalleyBasis>,
    pub b: Arc<QuotientAlgebra>,
    brackets: Vec<Vec<Element>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenKind {
    Raising(usize),
    Cartan(usize),
    Lowering(usize),
}

impl MapAlgebra {
    pub fn new(g: Arc<ChevalleyBasis>, b: Arc<QuotientAlgebra>) -> Self {
        let d = b.dim();
        let n = g.dim() * d;
        let mut brackets = vec![vec![Vec::new(); n]; n];
        for x in 0..g.dim() {
            for y in 0..g.dim() {
                let xy = g.bracket_basis(x, y);
                if xy.is_empty() {
                    continue;
                }
                for i in 0..d {
                    for j in 0..d {
                        let prod = b.mul_basis(i, j);
                        let mut acc = Vec::new();
                        for (z, c) in xy {
                            for (k, m) in prod {
                                acc.push((z * d + k, c * m));
                            }
                        }
                        brackets[x * d + i][y * d + j] =
                            normalize(acc).into_iter().map(|(k, c)| (k as Gen, c)).collect();
                    }
                }
            }
        }
        MapAlgebra { g, b, brackets }
    }

    pub fn dim_b(&self) -> usize {
        self.b.dim()
    }

    pub fn num_gens(&self) -> usize {
        self.g.dim() * self.b.dim()
    }

    pub fn gen(&self, x: usize, j: usize) -> Gen {
        (x * self.b.dim() + j) as Gen
    }

    pub fn split(&self, g: Gen) -> (usize, usize) {
        let d = self.b.dim();
        (g as usize / d, g as usize % d)
    }

    pub fn kind(&self, g: Gen) -> GenKind {
        match self.g.kind(self.split(g).0) {
            Elem::Pos(r) => GenKind::Raising(r),
            Elem::Cartan(i) => GenKind::Cartan(i),
            Elem::Neg(r) => GenKind::Lowering(r),
        }
    }

    /// Weight of `g` in simple-root coordinates (lowering generators are negative).
    pub fn weight(&self, g: Gen) -> &[i64] {
        self.g.weight(self.split(g).0)
    }

    pub fn bracket(&self, a: Gen, b: Gen) -> &Element {
        &self.brackets[a as usize][b as usize]
    }

    /// `x ⊗ c` for `c` given in coordinates of `B`.
    pub fn element(&self, x: usize, c: &[(usize, Q)]) -> Element {
        c.iter().map(|(j, q)| (self.gen(x, *j), q.clone())).collect()
    }

    /// `x ⊗ 1`.
    pub fn with_unit(&self, x: usize) -> Element {
        self.element(x, self.b.unit())
    }

    pub fn bracket_elements(&self, u: &Element, v: &Element) -> Element {
        let mut acc = Vec::new();
        for (a, x) in u {
            for (b, y) in v {
                let s = x * y;
                for (c, z) in self.bracket(*a, *b) {
                    acc.push((*c as usize, &s * z));
                }
            }
        }
        normalize(acc).into_iter().map(|(k, c)| (k as Gen, c)).collect()
    }

    /// Shift `η ↦ η'` induced by a generator (`η` measures depth below the highest weight).
    pub fn shift(&self, g: Gen, eta: &[u32]) -> Option<Eta> {
        let w = self.weight(g);
        eta.iter()
            .zip(w)
            .map(|(&e, &c)| {
                let v = e as i64 - c;
                (v >= 0).then_some(v as u32)
            })
            .collect()
    }

    /// Whether two algebras share the same `g` (coefficients may differ).
    pub fn same_lie_algebra(&self, other: &MapAlgebra) -> bool {
        self.g.gcm() == other.g.gcm()
    }
}

/// Total order on PBW letters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum PbwOrder {
    /// (root height ascending, root table order, B index).
    #[default]
    HeightAscending,
    /// (root height descending, root table order, B index).
    HeightDescending,
}

/// Straightening of `g · (y_1 ⋯ y_k v)` in the induced module `M(ψ)`, memoized.
#[derive(Debug)]
pub struct PbwEngine {
    pub alg: Arc<MapAlgebra>,
    pub order: PbwOrder,
    letter_gen: Vec<Gen>,
    gen_letter: Vec<Option<u16>>,
    letter_weight: Vec<Eta>,
    psi: Vec<Q>,
    memo: HashMap<(Gen, Mono), Arc<Vec<(Mono, Q)>>>,
}

impl PbwEngine {
    /// `psi[g]` is `ψ(g)` for Cartan generators and ignored otherwise.
    pub fn new(alg: Arc<MapAlgebra>, psi: Vec<Q>, order: PbwOrder) -> Self {
        let table = alg.g.table.clone();
        let d = alg.dim_b();
        let mut roots: Vec<usize> = (0..table.len()).collect();
        if order == PbwOrder::HeightDescending {
            roots.sort_by_key(|&r| std::cmp::Reverse(table.roots[r].height));
        }
        let mut letter_gen = Vec::new();
        let mut letter_weight = Vec::new();
        let mut gen_letter = vec![None; alg.num_gens()];
        for r in roots {
            for j in 0..d {
                let g = alg.gen(alg.g.neg(r), j);
                gen_letter[g as usize] = Some(letter_gen.len() as u16);
                letter_gen.push(g);
                letter_weight.push(table.roots[r].coords.clone());
            }
        }
        PbwEngine { alg, order, letter_gen, gen_letter, letter_weight, psi, memo: HashMap::new() }
    }

    pub fn num_letters(&self) -> usize {
        self.letter_gen.len()
    }

    pub fn letter_weight(&self, l: u16) -> &Eta {
        &self.letter_weight[l as usize]
    }

    pub fn letter_gen(&self, l: u16) -> Gen {
        self.letter_gen[l as usize]
    }

    pub fn gen_letter(&self, g: Gen) -> Option<u16> {
        self.gen_letter[g as usize]
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    /// All sorted words of total weight `eta`, in lexicographic order.
    pub fn monomials(&self, eta: &[u32]) -> Vec<Mono> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        let mut rest = eta.to_vec();
        self.fill(&mut out, &mut cur, &mut rest, 0);
        out
    }

    fn fill(&self, out: &mut Vec<Mono>, cur: &mut Mono, rest: &mut Eta, from: u16) {
        if rest.iter().all(|&x| x == 0) {
            out.push(cur.clone());
            return;
        }
        for l in from..self.letter_gen.len() as u16 {
            let w = &self.letter_weight[l as usize];
            if w.iter().zip(rest.iter()).all(|(a, b)| a <= b) {
                for (r, a) in rest.iter_mut().zip(w) {
                    *r -= a;
                }
                cur.push(l);
                self.fill(out, cur, rest, l);
                cur.pop();
                for (r, a) in rest.iter_mut().zip(w) {
                    *r += a;
                }
            }
        }
    }

    /// `g · m` as a combination of sorted words.
    pub fn act_mono(&mut self, g: Gen, m: &[u16]) -> Arc<Vec<(Mono, Q)>> {
        if let Some(hit) = self.memo.get(&(g, m.to_vec())) {
            return hit.clone();
        }
        let res = Arc::new(self.straighten(g, m));
        self.memo.insert((g, m.to_vec()), res.clone());
        res
    }

    fn straighten(&mut self, g: Gen, m: &[u16]) -> Vec<(Mono, Q)> {
        let kind = self.alg.kind(g);
        if m.is_empty() {
            return match kind {
                GenKind::Lowering(_) => vec![(vec![self.gen_letter[g as usize].unwrap()], Q::one())],
                GenKind::Cartan(_) if !self.psi[g as usize].is_zero() => vec![(Vec::new(), self.psi[g as usize].clone())],
                _ => Vec::new(),
            };
        }
        if let GenKind::Lowering(_) = kind {
            let l = self.gen_letter[g as usize].unwrap();
            if l <= m[0] {
                let mut w = Vec::with_capacity(m.len() + 1);
                w.push(l);
                w.extend_from_slice(m);
                return vec![(w, Q::one())];
            }
        }
        // g·y₁·rest = y₁·(g·rest) + [g, y₁]·rest
        let y1 = self.letter_gen[m[0] as usize];
        let rest = &m[1..];
        let mut acc: HashMap<Mono, Q> = HashMap::new();
        let inner = self.act_mono(g, rest);
        for (w, c) in inner.iter() {
            let outer = self.act_mono(y1, w);
            for (w2, c2) in outer.iter() {
                *acc.entry(w2.clone()).or_default() += c * c2;
            }
        }
        let br = self.alg.bracket(g, y1).clone();
        for (z, c) in &br {
            let part = self.act_mono(*z, rest);
            for (w2, c2) in part.iter() {
                *acc.entry(w2.clone()).or_default() += c * c2;
            }
        }
        let mut out: Vec<(Mono, Q)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }
}

//! Chevalley bases of finite-type Lie algebras from explicit matrix realizations.
//!
//! Basis layout: `X_β` for positive roots in table order, then `h_i = α_i^∨`,
//! then `X_{−β}` in table order. Structure constants are read off from matrix
//! commutators and then checked (antisymmetry, Jacobi, Cartan action, Serre).

use std::collections::HashMap;
use std::sync::Arc;

use crate::linalg::{normalize, rank, solve_columns, SparseVec};
use crate::rootsys::{positive_roots, CartanType, Gcm, RootSystemTable};
use crate::Q;

use super::ModError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Elem {
    Pos(usize),
    Cartan(usize),
    Neg(usize),
}

#[derive(Clone, PartialEq, Eq, Debug)]
struct Mat {
    n: usize,
    a: Vec<Q>,
}

impl Mat {
    fn zero(n: usize) -> Self {
        Mat { n, a: vec![Q::zero(); n * n] }
    }

    fn unit(n: usize, entries: &[(usize, usize, i64)]) -> Self {
        let mut m = Mat::zero(n);
        for &(i, j, c) in entries {
            m.a[i * n + j] += Q::from_int(c);
        }
        m
    }

    fn transpose(&self) -> Self {
        let mut m = Mat::zero(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                m.a[j * self.n + i] = self.a[i * self.n + j].clone();
            }
        }
        m
    }

    fn mul(&self, o: &Mat) -> Mat {
        let n = self.n;
        let mut m = Mat::zero(n);
        for i in 0..n {
            for k in 0..n {
                let x = &self.a[i * n + k];
                if x.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let y = &o.a[k * n + j];
                    if !y.is_zero() {
                        m.a[i * n + j] += x * y;
                    }
                }
            }
        }
        m
    }

    fn bracket(&self, o: &Mat) -> Mat {
        let ab = self.mul(o);
        let ba = o.mul(self);
        Mat { n: self.n, a: ab.a.iter().zip(&ba.a).map(|(x, y)| x - y).collect() }
    }

    fn scale(&self, s: &Q) -> Mat {
        Mat { n: self.n, a: self.a.iter().map(|x| x * s).collect() }
    }

    fn is_zero(&self) -> bool {
        self.a.iter().all(|x| x.is_zero())
    }

    fn first_nonzero(&self) -> Option<usize> {
        self.a.iter().position(|x| !x.is_zero())
    }

    fn sparse(&self) -> SparseVec {
        normalize(self.a.iter().cloned().enumerate().collect())
    }
}

type Realization = (&'static str, Vec<Mat>, Vec<Mat>);

fn realizations(rank: usize) -> Vec<Realization> {
    let mut out = Vec::new();
    let type_a = |n: usize| -> (Vec<Mat>, Vec<Mat>) {
        let e: Vec<Mat> = (0..n).map(|i| Mat::unit(n + 1, &[(i, i + 1, 1)])).collect();
        let f = e.iter().map(Mat::transpose).collect();
        (e, f)
    };
    let type_b = |n: usize| -> (Vec<Mat>, Vec<Mat>) {
        let dim = 2 * n + 1;
        let e: Vec<Mat> =
            (0..n).map(|i| Mat::unit(dim, &[(i, i + 1, 1), (dim - 2 - i, dim - 1 - i, -1)])).collect();
        let f = e.iter().map(Mat::transpose).collect();
        (e, f)
    };
    let type_c = |n: usize| -> (Vec<Mat>, Vec<Mat>) {
        let dim = 2 * n;
        let mut e: Vec<Mat> =
            (0..n - 1).map(|i| Mat::unit(dim, &[(i, i + 1, 1), (dim - 2 - i, dim - 1 - i, -1)])).collect();
        e.push(Mat::unit(dim, &[(n - 1, n, 1)]));
        let f = e.iter().map(Mat::transpose).collect();
        (e, f)
    };
    match rank {
        1 => {
            let (e, f) = type_a(1);
            out.push(("A1", e, f));
        }
        2 => {
            let (e, f) = type_a(2);
            out.push(("A2", e, f));
            let (e, f) = type_b(2);
            out.push(("B2", e, f));
            let (e, f) = type_c(2);
            out.push(("C2", e, f));
            let e1 = Mat::unit(7, &[(0, 1, 1), (2, 3, 1), (3, 4, 1), (5, 6, 1)]);
            let f1 = Mat::unit(7, &[(1, 0, 1), (3, 2, 2), (4, 3, 2), (6, 5, 1)]);
            let e2 = Mat::unit(7, &[(1, 2, 1), (4, 5, 1)]);
            let f2 = Mat::unit(7, &[(2, 1, 1), (5, 4, 1)]);
            out.push(("G2", vec![e1, e2], vec![f1, f2]));
        }
        3 => {
            let (e, f) = type_a(3);
            out.push(("A3", e, f));
            let (e, f) = type_b(3);
            out.push(("B3", e, f));
            let (e, f) = type_c(3);
            out.push(("C3", e, f));
        }
        _ => {}
    }
    out
}

/// Coefficient `c` with `m = c·x`, if `m` is a multiple of `x`.
fn ratio(m: &Mat, x: &Mat) -> Option<Q> {
    let k = x.first_nonzero()?;
    let c = &m.a[k] / &x.a[k];
    (x.scale(&c) == *m).then_some(c)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

#[derive(Debug, Clone)]
pub struct ChevalleyBasis {
    pub table: Arc<RootSystemTable>,
    type_name: &'static str,
    kinds: Vec<Elem>,
    weights: Vec<Vec<i64>>,
    bracket: Vec<Vec<SparseVec>>,
}

impl ChevalleyBasis {
    pub fn new(gcm: &Gcm) -> Result<ChevalleyBasis, ModError> {
        if gcm.kind() != CartanType::Finite || gcm.rank() > 3 {
            return Err(ModError::UnsupportedType("module construction needs finite type of rank ≤ 3".into()));
        }
        let l = gcm.rank();
        for (name, e0, f0) in realizations(l) {
            // normalise f_i so that [h_i, e_i] = 2 e_i
            let mut f0 = f0;
            for i in 0..l {
                let h = e0[i].bracket(&f0[i]);
                let c = ratio(&h.bracket(&e0[i]), &e0[i]).expect("h_i acts diagonally on e_i");
                f0[i] = f0[i].scale(&(Q::from_int(2) / c));
            }
            let h0: Vec<Mat> = (0..l).map(|i| e0[i].bracket(&f0[i])).collect();
            let cartan: Vec<Vec<i64>> = (0..l)
                .map(|i| {
                    (0..l)
                        .map(|j| ratio(&h0[i].bracket(&e0[j]), &e0[j]).and_then(|c| c.to_i64()).unwrap_or(i64::MIN))
                        .collect()
                })
                .collect();
            for sigma in permutations(l) {
                if (0..l).all(|i| (0..l).all(|j| cartan[sigma[i]][sigma[j]] == gcm.entry(i, j))) {
                    let e: Vec<Mat> = sigma.iter().map(|&s| e0[s].clone()).collect();
                    let f: Vec<Mat> = sigma.iter().map(|&s| f0[s].clone()).collect();
                    return Self::from_generators(gcm, name, e, f);
                }
            }
        }
        Err(ModError::UnsupportedType(format!("no realization matches the Cartan matrix {:?}", gcm.entries())))
    }

    fn from_generators(gcm: &Gcm, name: &'static str, e: Vec<Mat>, f: Vec<Mat>) -> Result<ChevalleyBasis, ModError> {
        let l = gcm.rank();
        let table = Arc::new(positive_roots(gcm, 64)?);
        let p = table.len();
        let mut xs: Vec<Mat> = Vec::with_capacity(p);
        let mut ys: Vec<Mat> = Vec::with_capacity(p);
        for r in &table.roots {
            if let Some(i) = r.is_simple() {
                xs.push(e[i].clone());
                ys.push(f[i].clone());
                continue;
            }
            let (i, prev) = (0..l)
                .find_map(|i| {
                    if r.coords[i] == 0 {
                        return None;
                    }
                    let mut c = r.coords.clone();
                    c[i] -= 1;
                    table.index_of(&c).map(|k| (i, k))
                })
                .expect("every non-simple positive root is a root plus a simple root");
            let x = e[i].bracket(&xs[prev]);
            let mut y = f[i].bracket(&ys[prev]);
            let hb = x.bracket(&y);
            let c = ratio(&hb.bracket(&x), &x)
                .ok_or_else(|| ModError::UnsupportedType("root vector is not a weight vector".into()))?;
            y = y.scale(&(Q::from_int(2) / c));
            xs.push(x);
            ys.push(y);
        }
        let hs: Vec<Mat> = (0..l).map(|i| e[i].bracket(&f[i])).collect();

        let mut mats = Vec::new();
        let mut kinds = Vec::new();
        let mut weights = Vec::new();
        for (k, x) in xs.iter().enumerate() {
            mats.push(x.clone());
            kinds.push(Elem::Pos(k));
            weights.push(table.roots[k].coords.iter().map(|&c| c as i64).collect::<Vec<_>>());
        }
        for (i, h) in hs.iter().enumerate() {
            mats.push(h.clone());
            kinds.push(Elem::Cartan(i));
            weights.push(vec![0; l]);
        }
        for (k, y) in ys.iter().enumerate() {
            mats.push(y.clone());
            kinds.push(Elem::Neg(k));
            weights.push(table.roots[k].coords.iter().map(|&c| -(c as i64)).collect());
        }
        let dim = mats.len();
        let n2 = mats[0].a.len();
        if rank(&mats.iter().map(Mat::sparse).collect::<Vec<_>>(), n2) != dim {
            return Err(ModError::UnsupportedType("realization matrices are linearly dependent".into()));
        }
        let by_weight: HashMap<Vec<i64>, usize> =
            weights.iter().enumerate().filter(|(_, w)| w.iter().any(|&c| c != 0)).map(|(k, w)| (w.clone(), k)).collect();
        let cartan_cols: Vec<SparseVec> = hs.iter().map(Mat::sparse).collect();
        let mut bracket = vec![vec![Vec::new(); dim]; dim];
        for a in 0..dim {
            for b in 0..dim {
                let m = mats[a].bracket(&mats[b]);
                if m.is_zero() {
                    continue;
                }
                let w: Vec<i64> = weights[a].iter().zip(&weights[b]).map(|(x, y)| x + y).collect();
                let fail = || ModError::UnsupportedType(format!("commutator of basis elements {a},{b} leaves the basis"));
                bracket[a][b] = if w.iter().all(|&c| c == 0) {
                    let x = solve_columns(&cartan_cols, n2, &m.sparse()).ok_or_else(fail)?;
                    normalize(x.into_iter().enumerate().map(|(i, c)| (p + i, c)).collect())
                } else {
                    let k = *by_weight.get(&w).ok_or_else(fail)?;
                    vec![(k, ratio(&m, &mats[k]).ok_or_else(fail)?)]
                };
            }
        }
        let cb = ChevalleyBasis { table, type_name: name, kinds, weights, bracket };
        cb.verify().map_err(ModError::UnsupportedType)?;
        Ok(cb)
    }

    pub fn type_name(&self) -> &'static str {
        self.type_name
    }

    pub fn gcm(&self) -> &Gcm {
        &self.table.gcm
    }

    pub fn rank(&self) -> usize {
        self.table.rank()
    }

    pub fn dim(&self) -> usize {
        self.kinds.len()
    }

    pub fn num_pos(&self) -> usize {
        self.table.len()
    }

    pub fn kind(&self, x: usize) -> Elem {
        self.kinds[x]
    }

    pub fn weight(&self, x: usize) -> &[i64] {
        &self.weights[x]
    }

    pub fn pos(&self, root: usize) -> usize {
        root
    }

    pub fn cartan(&self, i: usize) -> usize {
        self.num_pos() + i
    }

    pub fn neg(&self, root: usize) -> usize {
        self.num_pos() + self.rank() + root
    }

    /// `e_i`, `f_i` as basis indices.
    pub fn e(&self, i: usize) -> usize {
        self.pos(self.table.simple(i))
    }

    pub fn f(&self, i: usize) -> usize {
        self.neg(self.table.simple(i))
    }

    /// `[x_a, x_b]` in basis coordinates.
    pub fn bracket_basis(&self, a: usize, b: usize) -> &SparseVec {
        &self.bracket[a][b]
    }

    pub fn bracket(&self, u: &SparseVec, v: &SparseVec) -> SparseVec {
        let mut acc = Vec::new();
        for (a, x) in u {
            for (b, y) in v {
                let s = x * y;
                for (c, z) in &self.bracket[*a][*b] {
                    acc.push((*c, &s * z));
                }
            }
        }
        normalize(acc)
    }

    pub fn verify(&self) -> Result<(), String> {
        self.verify_antisymmetry()?;
        self.verify_jacobi()?;
        self.verify_cartan_action()?;
        self.verify_serre()
    }

    pub fn verify_antisymmetry(&self) -> Result<(), String> {
        let dim = self.dim();
        for a in 0..dim {
            for b in 0..dim {
                let neg: SparseVec = self.bracket[b][a].iter().map(|(c, x)| (*c, -x)).collect();
                if self.bracket[a][b] != neg {
                    return Err(format!("antisymmetry fails at ({a},{b})"));
                }
            }
        }
        Ok(())
    }

    pub fn verify_jacobi(&self) -> Result<(), String> {
        let dim = self.dim();
        let unit = |k: usize| vec![(k, Q::one())];
        for a in 0..dim {
            for b in 0..dim {
                let ab = &self.bracket[a][b];
                for c in 0..dim {
                    let t1 = self.bracket(ab, &unit(c));
                    let t2 = self.bracket(&self.bracket[b][c], &unit(a));
                    let t3 = self.bracket(&self.bracket[c][a], &unit(b));
                    let sum = normalize(t1.into_iter().chain(t2).chain(t3).collect());
                    if !sum.is_empty() {
                        return Err(format!("Jacobi identity fails at ({a},{b},{c})"));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn verify_cartan_action(&self) -> Result<(), String> {
        let gcm = self.gcm();
        for i in 0..self.rank() {
            let h = self.cartan(i);
            for x in 0..self.dim() {
                let w = &self.weights[x];
                let c = gcm.pair_coroot(w, i);
                let want = if c == 0 { Vec::new() } else { vec![(x, Q::from_int(c))] };
                if self.bracket[h][x] != want {
                    return Err(format!("[h_{i}, x_{x}] is not {c}·x_{x}"));
                }
            }
        }
        for k in 0..self.num_pos() {
            let br = &self.bracket[self.pos(k)][self.neg(k)];
            if br.iter().any(|(c, _)| !matches!(self.kinds[*c], Elem::Cartan(_))) {
                return Err(format!("[X_β, X_-β] leaves the Cartan subalgebra for root {k}"));
            }
        }
        Ok(())
    }

    pub fn verify_serre(&self) -> Result<(), String> {
        let l = self.rank();
        for i in 0..l {
            for j in 0..l {
                if i == j {
                    continue;
                }
                let n = 1 - self.gcm().entry(i, j);
                for (gi, gj) in [(self.e(i), self.e(j)), (self.f(i), self.f(j))] {
                    let mut v = vec![(gj, Q::one())];
                    for _ in 0..n {
                        v = self.bracket(&vec![(gi, Q::one())], &v);
                    }
                    if !v.is_empty() {
                        return Err(format!("Serre relation fails for ({i},{j})"));
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sl2_relations() {
        let cb = ChevalleyBasis::new(&Gcm::named("A1").unwrap()).unwrap();
        let (e, h, f) = (cb.e(0), cb.cartan(0), cb.f(0));
        assert_eq!(cb.bracket_basis(e, f), &vec![(h, Q::one())]);
        assert_eq!(cb.bracket_basis(h, e), &vec![(e, Q::from_int(2))]);
        assert_eq!(cb.bracket_basis(h, f), &vec![(f, Q::from_int(-2))]);
    }

    #[test]
    fn supported_types() {
        for (name, dim) in [("A1", 3), ("A2", 8), ("B2", 10), ("C2", 10), ("G2", 14), ("A3", 15), ("B3", 21), ("C3", 21)] {
            let cb = ChevalleyBasis::new(&Gcm::named(name).unwrap()).unwrap();
            assert_eq!(cb.dim(), dim, "{name}");
        }
        assert!(ChevalleyBasis::new(&Gcm::named("D4").unwrap()).is_err());
        assert!(ChevalleyBasis::new(&Gcm::named("A1^(1)").unwrap()).is_err());
    }

    #[test]
    fn a2_sign_is_recorded() {
        let cb = ChevalleyBasis::new(&Gcm::named("A2").unwrap()).unwrap();
        let top = cb.table.index_of(&[1, 1]).unwrap();
        // realization: X_{α1+α2} = [e_1, e_2]
        assert_eq!(cb.bracket_basis(cb.e(0), cb.e(1)), &vec![(cb.pos(top), Q::one())]);
        assert_eq!(cb.bracket_basis(cb.e(1), cb.e(0)), &vec![(cb.pos(top), Q::from_int(-1))]);
    }

    #[test]
    fn transposed_cartan_matrices_are_matched() {
        let g = crate::rootsys::validate_gcm(vec![vec![2, -1], vec![-3, 2]], CartanType::Finite).unwrap();
        let cb = ChevalleyBasis::new(&g).unwrap();
        assert_eq!(cb.type_name(), "G2");
        assert_eq!(cb.num_pos(), 6);
    }
}

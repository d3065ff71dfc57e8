//! The coefficient algebra `A = ℚ[x₁..xₙ]`, its cofinite ideals and their quotients.
//!
//! Ideals are mostly point supported, `I = ∩_p 𝔪_p^{k_p}`, which makes every
//! operation an exponent computation. Generator-presented ideals are kept for
//! certifying codimension by degree-bounded row reduction.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::linalg::{normalize, solve_columns, SparseVec, Subspace};
use crate::poly::{binomial, monomials_below, q_from_u128, Exps, Poly};
use crate::Q;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CommError {
    #[error("NotCofinite: {0}")]
    NotCofinite(String),
    #[error("UnsupportedPresentation: {0}")]
    UnsupportedPresentation(String),
    #[error("NotCoprime: ideals share the support point {0}")]
    NotCoprime(String),
    #[error("invalid ideal: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PolyAlgebra {
    pub num_vars: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Presentation {
    /// `∩_p 𝔪_p^{k_p}`, keyed by point; all exponents ≥ 1. Empty means the unit ideal.
    PointSupported(BTreeMap<Vec<Q>, u32>),
    Generated { generators: Vec<Poly>, truncation_degree: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CofiniteIdeal {
    algebra: PolyAlgebra,
    pres: Presentation,
}

fn fmt_point(p: &[Q]) -> String {
    let parts: Vec<String> = p.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

impl CofiniteIdeal {
    pub fn unit(nvars: usize) -> Self {
        CofiniteIdeal { algebra: PolyAlgebra { num_vars: nvars }, pres: Presentation::PointSupported(BTreeMap::new()) }
    }

    /// `𝔪_p^k`; `k = 0` gives the unit ideal.
    pub fn point_power(point: Vec<Q>, k: u32) -> Self {
        let n = point.len();
        let mut m = BTreeMap::new();
        if k > 0 {
            m.insert(point, k);
        }
        CofiniteIdeal { algebra: PolyAlgebra { num_vars: n }, pres: Presentation::PointSupported(m) }
    }

    /// `(t − c)^k` in one variable.
    pub fn at(c: i64, k: u32) -> Self {
        CofiniteIdeal::point_power(vec![Q::from_int(c)], k)
    }

    pub fn from_points(nvars: usize, points: Vec<(Vec<Q>, u32)>) -> Result<Self, CommError> {
        let mut m = BTreeMap::new();
        for (p, k) in points {
            if p.len() != nvars {
                return Err(CommError::Invalid(format!("point {} has wrong arity", fmt_point(&p))));
            }
            if k == 0 {
                continue;
            }
            if m.insert(p.clone(), k).is_some() {
                return Err(CommError::Invalid(format!("support point {} listed twice", fmt_point(&p))));
            }
        }
        Ok(CofiniteIdeal { algebra: PolyAlgebra { num_vars: nvars }, pres: Presentation::PointSupported(m) })
    }

    pub fn generated(nvars: usize, generators: Vec<Poly>, truncation_degree: u32) -> Result<Self, CommError> {
        if generators.iter().any(|g| g.nvars() != nvars) {
            return Err(CommError::Invalid("generator arity mismatch".into()));
        }
        if truncation_degree == 0 {
            return Err(CommError::Invalid("truncation degree must be positive".into()));
        }
        Ok(CofiniteIdeal {
            algebra: PolyAlgebra { num_vars: nvars },
            pres: Presentation::Generated { generators, truncation_degree },
        })
    }

    pub fn algebra(&self) -> PolyAlgebra {
        self.algebra
    }

    pub fn nvars(&self) -> usize {
        self.algebra.num_vars
    }

    pub fn presentation(&self) -> &Presentation {
        &self.pres
    }

    pub fn points(&self) -> Result<&BTreeMap<Vec<Q>, u32>, CommError> {
        match &self.pres {
            Presentation::PointSupported(m) => Ok(m),
            Presentation::Generated { .. } => {
                Err(CommError::UnsupportedPresentation("operation needs a point-supported ideal".into()))
            }
        }
    }

    pub fn is_unit(&self) -> bool {
        matches!(&self.pres, Presentation::PointSupported(m) if m.is_empty())
    }

    /// Exponent of the primary component at `p` (0 when `p` is off the support).
    pub fn exponent_at(&self, p: &[Q]) -> Result<u32, CommError> {
        Ok(self.points()?.get(p).copied().unwrap_or(0))
    }

    fn same_algebra(&self, other: &CofiniteIdeal) -> Result<(), CommError> {
        if self.algebra != other.algebra {
            return Err(CommError::Invalid("ideals live in different algebras".into()));
        }
        Ok(())
    }

    pub fn codim(&self) -> Result<u64, CommError> {
        match &self.pres {
            Presentation::PointSupported(m) => {
                let n = self.nvars() as u64;
                Ok(m.values().map(|&k| binomial(n + k as u64 - 1, n) as u64).sum())
            }
            Presentation::Generated { generators, truncation_degree } => {
                let d = *truncation_degree;
                let lo = macaulay_corank(self.nvars(), generators, d - 1);
                let hi = macaulay_corank(self.nvars(), generators, d);
                if lo != hi {
                    return Err(CommError::NotCofinite(format!(
                        "quotient dimension {lo} at degree {} differs from {hi} at degree {d}",
                        d - 1
                    )));
                }
                Ok(hi as u64)
            }
        }
    }

    pub fn power(&self, n: u32) -> Result<CofiniteIdeal, CommError> {
        let m = self.points()?;
        let mut out = BTreeMap::new();
        if n > 0 {
            for (p, k) in m {
                out.insert(p.clone(), k * n);
            }
        }
        Ok(CofiniteIdeal { algebra: self.algebra, pres: Presentation::PointSupported(out) })
    }

    pub fn intersect(&self, other: &CofiniteIdeal) -> Result<CofiniteIdeal, CommError> {
        self.same_algebra(other)?;
        let mut out = self.points()?.clone();
        for (p, &k) in other.points()? {
            let e = out.entry(p.clone()).or_insert(0);
            *e = (*e).max(k);
        }
        Ok(CofiniteIdeal { algebra: self.algebra, pres: Presentation::PointSupported(out) })
    }

    pub fn product(&self, other: &CofiniteIdeal) -> Result<CofiniteIdeal, CommError> {
        self.same_algebra(other)?;
        let mut out = self.points()?.clone();
        for (p, &k) in other.points()? {
            *out.entry(p.clone()).or_insert(0) += k;
        }
        Ok(CofiniteIdeal { algebra: self.algebra, pres: Presentation::PointSupported(out) })
    }

    pub fn coprime(&self, other: &CofiniteIdeal) -> Result<bool, CommError> {
        self.same_algebra(other)?;
        let a = self.points()?;
        Ok(other.points()?.keys().all(|p| !a.contains_key(p)))
    }

    /// `self ⊆ other`.
    pub fn contained_in(&self, other: &CofiniteIdeal) -> Result<bool, CommError> {
        self.same_algebra(other)?;
        let a = self.points()?;
        Ok(other.points()?.iter().all(|(p, &k)| a.get(p).copied().unwrap_or(0) >= k))
    }

    /// Primary components `𝔪_p^{k_p}`.
    pub fn crt_split(&self) -> Result<Vec<CofiniteIdeal>, CommError> {
        Ok(self.points()?.iter().map(|(p, &k)| CofiniteIdeal::point_power(p.clone(), k)).collect())
    }

    /// Membership `f ∈ I` for a point-supported ideal: Taylor vanishing at each point.
    pub fn contains_poly(&self, f: &Poly) -> Result<bool, CommError> {
        Ok(self.points()?.iter().all(|(p, &k)| f.vanishes_to_order(p, k)))
    }
}

impl std::fmt::Display for CofiniteIdeal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.pres {
            Presentation::PointSupported(m) if m.is_empty() => write!(f, "A"),
            Presentation::PointSupported(m) => {
                let parts: Vec<String> = m.iter().map(|(p, k)| format!("m{}^{}", fmt_point(p), k)).collect();
                write!(f, "{}", parts.join(" ∩ "))
            }
            Presentation::Generated { generators, .. } => {
                let parts: Vec<String> = generators.iter().map(|g| g.to_string()).collect();
                write!(f, "({})", parts.join(", "))
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
struct PointJson {
    coords: Vec<Q>,
    exp: u32,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum IdealJson {
    Points {
        points: Vec<PointJson>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        num_vars: Option<usize>,
    },
    Generators {
        generators: Vec<String>,
        truncation_degree: u32,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        num_vars: Option<usize>,
    },
}

impl Serialize for CofiniteIdeal {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let j = match &self.pres {
            Presentation::PointSupported(m) => IdealJson::Points {
                points: m.iter().map(|(p, &k)| PointJson { coords: p.clone(), exp: k }).collect(),
                num_vars: Some(self.nvars()),
            },
            Presentation::Generated { generators, truncation_degree } => IdealJson::Generators {
                generators: generators.iter().map(|g| g.to_string()).collect(),
                truncation_degree: *truncation_degree,
                num_vars: Some(self.nvars()),
            },
        };
        j.serialize(s)
    }
}

impl<'de> Deserialize<'de> for CofiniteIdeal {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        match IdealJson::deserialize(d)? {
            IdealJson::Points { points, num_vars } => {
                let n = num_vars.or_else(|| points.first().map(|p| p.coords.len())).unwrap_or(1);
                CofiniteIdeal::from_points(n, points.into_iter().map(|p| (p.coords, p.exp)).collect())
                    .map_err(D::Error::custom)
            }
            IdealJson::Generators { generators, truncation_degree, num_vars } => {
                let n = num_vars.unwrap_or(1);
                let gens: Result<Vec<Poly>, _> = generators.iter().map(|g| Poly::parse(g, n)).collect();
                CofiniteIdeal::generated(n, gens.map_err(D::Error::custom)?, truncation_degree)
                    .map_err(D::Error::custom)
            }
        }
    }
}

/// Rows `g·m` with `deg ≤ d`, over columns ordered by descending degree.
fn macaulay_space(nvars: usize, gens: &[Poly], d: u32) -> (Vec<Exps>, HashMap<Exps, usize>, Subspace) {
    let mut cols = monomials_below(nvars, d + 1);
    cols.reverse();
    let index: HashMap<Exps, usize> = cols.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
    let mut space = Subspace::new(cols.len());
    for g in gens {
        let Some(gd) = g.degree() else { continue };
        if gd > d {
            continue;
        }
        for m in monomials_below(nvars, d - gd + 1) {
            let row = normalize(
                g.terms()
                    .map(|(e, c)| {
                        let ex: Exps = e.iter().zip(&m).map(|(a, b)| a + b).collect();
                        (index[&ex], c.clone())
                    })
                    .collect(),
            );
            space.insert(&row);
        }
    }
    (cols, index, space)
}

fn macaulay_corank(nvars: usize, gens: &[Poly], d: u32) -> usize {
    let (cols, _, space) = macaulay_space(nvars, gens, d);
    cols.len() - space.rank()
}

/// Taylor coefficient of `x^e` at `p` for the shifted monomial `(x−p)^a`.
fn taylor_entry(e: &[u32], a: &[u32], p: &[Q]) -> Q {
    let mut acc = Q::one();
    for ((&ei, &ai), pi) in e.iter().zip(a).zip(p) {
        if ai > ei {
            return Q::zero();
        }
        acc *= &q_from_u128(binomial(ei as u64, ai as u64));
        if ei > ai {
            acc *= &pi.pow(ei - ai);
        }
    }
    acc
}

/// Lowest-degree polynomial with prescribed Taylor data: for each `(p, k, target)`,
/// the coefficients of `(x−p)^a`, `|a| < k`, equal `target[a]` (default 0).
pub fn hermite_interpolate(nvars: usize, conditions: &[(Vec<Q>, u32, BTreeMap<Exps, Q>)]) -> Poly {
    let total: u32 = conditions.iter().map(|(_, k, _)| *k).sum();
    let mut eqs: Vec<(usize, Exps, Q)> = Vec::new();
    for (pi, (_, k, target)) in conditions.iter().enumerate() {
        for a in monomials_below(nvars, *k) {
            let t = target.get(&a).cloned().unwrap_or_default();
            eqs.push((pi, a, t));
        }
    }
    for d in 0..=total.max(1) {
        let monos = monomials_below(nvars, d + 1);
        let columns: Vec<SparseVec> = monos
            .iter()
            .map(|e| {
                normalize(
                    eqs.iter()
                        .enumerate()
                        .map(|(r, (pi, a, _))| (r, taylor_entry(e, a, &conditions[*pi].0)))
                        .collect(),
                )
            })
            .collect();
        let rhs = normalize(eqs.iter().enumerate().map(|(r, (_, _, t))| (r, t.clone())).collect());
        if let Some(x) = solve_columns(&columns, eqs.len(), &rhs) {
            return Poly::from_terms(nvars, monos.into_iter().zip(x));
        }
    }
    unreachable!("Hermite interpolation at distinct points is always solvable in degree < Σk")
}

/// `f ∈ I^N`, `g ∈ J^N` with `f + g = 1`, checked before returning.
pub fn bezout_witness(i: &CofiniteIdeal, j: &CofiniteIdeal, n: u32) -> Result<(Poly, Poly), CommError> {
    assert!(n >= 1, "exponent must be positive");
    i.same_algebra(j)?;
    let (pi, pj) = (i.points()?, j.points()?);
    if let Some(p) = pj.keys().find(|p| pi.contains_key(*p)) {
        return Err(CommError::NotCoprime(fmt_point(p)));
    }
    let nv = i.nvars();
    let one_at_zero: BTreeMap<Exps, Q> = [(vec![0; nv], Q::one())].into_iter().collect();
    let mut conds = Vec::new();
    for (p, &k) in pi {
        conds.push((p.clone(), k, BTreeMap::new()));
    }
    for (p, &k) in pj {
        conds.push((p.clone(), k, one_at_zero.clone()));
    }
    let f0 = hermite_interpolate(nv, &conds);
    let g0 = &Poly::one(nv) - &f0;
    let m = 2 * n - 1;
    let mut f = Poly::zero(nv);
    let mut g = Poly::zero(nv);
    for k in 0..=m {
        let c = q_from_u128(binomial(m as u64, k as u64));
        let term = (&f0.pow(k) * &g0.pow(m - k)).scale(&c);
        if k >= n {
            f = &f + &term;
        } else {
            g = &g + &term;
        }
    }
    let ok = (&f + &g) == Poly::one(nv) && i.power(n)?.contains_poly(&f)? && j.power(n)?.contains_poly(&g)?;
    assert!(ok, "Bezout witness failed its own verification");
    Ok((f, g))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub enum BasisLabel {
    /// `e_p·(x−p)^a` for the `point`-th support point.
    Local { point: usize, exps: Exps },
    /// A standard monomial modulo a generator-presented ideal.
    Monomial(Exps),
}

#[derive(Debug, Clone)]
enum Reducer {
    Local { points: Vec<(Vec<Q>, u32)>, offsets: Vec<usize> },
    Macaulay { index: HashMap<Exps, usize>, space: Subspace, free_pos: HashMap<usize, usize>, degree: u32 },
}

/// `A/I` with an explicit basis and exact structure constants.
#[derive(Debug, Clone)]
pub struct QuotientAlgebra {
    ideal: CofiniteIdeal,
    basis: Vec<Poly>,
    labels: Vec<BasisLabel>,
    mult: Vec<Vec<SparseVec>>,
    unit: SparseVec,
    reducer: Reducer,
}

impl QuotientAlgebra {
    pub fn new(ideal: &CofiniteIdeal) -> Result<QuotientAlgebra, CommError> {
        let qa = match &ideal.pres {
            Presentation::PointSupported(m) => Self::local(ideal, m),
            Presentation::Generated { generators, truncation_degree } => {
                ideal.codim()?;
                Self::macaulay(ideal, generators, *truncation_degree)?
            }
        };
        qa.verify()?;
        Ok(qa)
    }

    fn local(ideal: &CofiniteIdeal, m: &BTreeMap<Vec<Q>, u32>) -> QuotientAlgebra {
        let nv = ideal.nvars();
        let points: Vec<(Vec<Q>, u32)> = m.iter().map(|(p, &k)| (p.clone(), k)).collect();
        let one_at_zero: BTreeMap<Exps, Q> = [(vec![0; nv], Q::one())].into_iter().collect();
        let mut basis = Vec::new();
        let mut labels = Vec::new();
        let mut offsets = Vec::new();
        let mut local_monos = Vec::new();
        for (pi, (p, k)) in points.iter().enumerate() {
            let conds: Vec<_> = points
                .iter()
                .enumerate()
                .map(|(qi, (q, kq))| (q.clone(), *kq, if qi == pi { one_at_zero.clone() } else { BTreeMap::new() }))
                .collect();
            let e = hermite_interpolate(nv, &conds);
            offsets.push(basis.len());
            let monos = monomials_below(nv, *k);
            for a in &monos {
                basis.push(&e * &Poly::shifted_monomial(p, a));
                labels.push(BasisLabel::Local { point: pi, exps: a.clone() });
            }
            local_monos.push(monos);
        }
        let dim = basis.len();
        let mut mult = vec![vec![Vec::new(); dim]; dim];
        for (pi, monos) in local_monos.iter().enumerate() {
            let k = points[pi].1;
            let pos: HashMap<&Exps, usize> = monos.iter().enumerate().map(|(i, a)| (a, i)).collect();
            for (ia, a) in monos.iter().enumerate() {
                for (ib, b) in monos.iter().enumerate() {
                    let c: Exps = a.iter().zip(b).map(|(x, y)| x + y).collect();
                    if c.iter().sum::<u32>() < k {
                        mult[offsets[pi] + ia][offsets[pi] + ib] = vec![(offsets[pi] + pos[&c], Q::one())];
                    }
                }
            }
        }
        let unit = offsets.iter().map(|&o| (o, Q::one())).collect();
        QuotientAlgebra {
            ideal: ideal.clone(),
            basis,
            labels,
            mult,
            unit,
            reducer: Reducer::Local { points, offsets },
        }
    }

    fn macaulay(ideal: &CofiniteIdeal, gens: &[Poly], d: u32) -> Result<QuotientAlgebra, CommError> {
        let nv = ideal.nvars();
        let (cols, index, space) = macaulay_space(nv, gens, d);
        let free = space.free_columns();
        let free_pos: HashMap<usize, usize> = free.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let basis: Vec<Poly> = free.iter().map(|&c| Poly::monomial(cols[c].clone(), Q::one())).collect();
        let labels = free.iter().map(|&c| BasisLabel::Monomial(cols[c].clone())).collect();
        let mut qa = QuotientAlgebra {
            ideal: ideal.clone(),
            basis,
            labels,
            mult: Vec::new(),
            unit: Vec::new(),
            reducer: Reducer::Macaulay { index, space, free_pos, degree: d },
        };
        qa.unit = qa.coords(&Poly::one(nv))?;
        let dim = qa.basis.len();
        let mut mult = vec![vec![Vec::new(); dim]; dim];
        for i in 0..dim {
            for j in 0..dim {
                mult[i][j] = qa.coords(&(&qa.basis[i] * &qa.basis[j]))?;
            }
        }
        qa.mult = mult;
        Ok(qa)
    }

    pub fn ideal(&self) -> &CofiniteIdeal {
        &self.ideal
    }

    pub fn nvars(&self) -> usize {
        self.ideal.nvars()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Poly] {
        &self.basis
    }

    pub fn labels(&self) -> &[BasisLabel] {
        &self.labels
    }

    pub fn unit(&self) -> &SparseVec {
        &self.unit
    }

    /// Structure constants: `b_i · b_j = Σ_k c_k b_k`.
    pub fn mul_basis(&self, i: usize, j: usize) -> &SparseVec {
        &self.mult[i][j]
    }

    pub fn mul(&self, a: &SparseVec, b: &SparseVec) -> SparseVec {
        let mut acc = Vec::new();
        for (i, x) in a {
            for (j, y) in b {
                let s = x * y;
                for (k, c) in &self.mult[*i][*j] {
                    acc.push((*k, &s * c));
                }
            }
        }
        normalize(acc)
    }

    /// Coordinates of the class of `f`.
    pub fn coords(&self, f: &Poly) -> Result<SparseVec, CommError> {
        match &self.reducer {
            Reducer::Local { points, offsets } => {
                let mut out = Vec::new();
                for ((p, k), &off) in points.iter().zip(offsets) {
                    let t = f.taylor(p, *k);
                    for (i, a) in monomials_below(self.nvars(), *k).iter().enumerate() {
                        if let Some(c) = t.get(a) {
                            out.push((off + i, c.clone()));
                        }
                    }
                }
                Ok(normalize(out))
            }
            Reducer::Macaulay { index, space, free_pos, degree } => {
                if f.degree().unwrap_or(0) > *degree {
                    return Err(CommError::NotCofinite(format!(
                        "product of degree {} exceeds truncation degree {degree}",
                        f.degree().unwrap_or(0)
                    )));
                }
                let v = normalize(f.terms().map(|(e, c)| (index[e], c.clone())).collect());
                Ok(space.reduce(&v).into_iter().map(|(c, x)| (free_pos[&c], x)).collect())
            }
        }
    }

    /// A basis of the image of `J` in `A/I` (point-supported presentations only).
    pub fn ideal_image(&self, j: &CofiniteIdeal) -> Result<Vec<SparseVec>, CommError> {
        let Reducer::Local { points, .. } = &self.reducer else {
            return Err(CommError::UnsupportedPresentation("ideal images need a point-supported quotient".into()));
        };
        let mut out = Vec::new();
        for (idx, label) in self.labels.iter().enumerate() {
            let BasisLabel::Local { point, exps } = label else { unreachable!() };
            let need = j.exponent_at(&points[*point].0)?;
            if exps.iter().sum::<u32>() >= need {
                out.push(vec![(idx, Q::one())]);
            }
        }
        Ok(out)
    }

    /// Value at a point of `A` of the representative of `b_i`.
    pub fn eval_basis(&self, i: usize, point: &[Q]) -> Q {
        if let (Reducer::Local { points, .. }, BasisLabel::Local { point: pi, exps }) = (&self.reducer, &self.labels[i]) {
            // e_p(x−p)^a evaluates to δ_{p,q}·[a = 0] at support points
            if let Some(qi) = points.iter().position(|(p, _)| p.as_slice() == point) {
                return if qi == *pi && exps.iter().all(|&e| e == 0) { Q::one() } else { Q::zero() };
            }
        }
        self.basis[i].eval(point)
    }

    /// Exhaustive commutativity, associativity and unit checks on the table.
    pub fn verify(&self) -> Result<(), CommError> {
        let dim = self.dim();
        let e = |i: usize| -> SparseVec { vec![(i, Q::one())] };
        for i in 0..dim {
            if self.mul(&self.unit, &e(i)) != e(i) {
                return Err(CommError::Invalid(format!("unit law fails on basis element {i}")));
            }
            for j in 0..dim {
                if self.mult[i][j] != self.mult[j][i] {
                    return Err(CommError::Invalid(format!("table not commutative at ({i},{j})")));
                }
                for k in 0..dim {
                    let l = self.mul(&self.mult[i][j], &e(k));
                    let r = self.mul(&e(i), &self.mult[j][k]);
                    if l != r {
                        return Err(CommError::Invalid(format!("table not associative at ({i},{j},{k})")));
                    }
                }
            }
        }
        Ok(())
    }
}

pub fn quotient_algebra(i: &CofiniteIdeal) -> Result<QuotientAlgebra, CommError> {
    QuotientAlgebra::new(i)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> Poly {
        Poly::parse(s, 1).unwrap()
    }

    #[test]
    fn codim_examples() {
        assert_eq!(CofiniteIdeal::at(0, 2).codim(), Ok(2));
        let m0 = CofiniteIdeal::point_power(vec![Q::zero(), Q::zero()], 2);
        assert_eq!(m0.codim(), Ok(3));
        let both = CofiniteIdeal::at(0, 1).intersect(&CofiniteIdeal::at(1, 1)).unwrap();
        assert_eq!(both.codim(), Ok(2));
        assert_eq!(both.power(2).unwrap().codim(), Ok(4));
        assert_eq!(both.power(0).unwrap().codim(), Ok(0));
        let i = CofiniteIdeal::at(0, 2).intersect(&CofiniteIdeal::at(1, 3)).unwrap();
        assert_eq!(i.codim(), Ok(5));
    }

    #[test]
    fn generated_matches_points() {
        // (t)·(t−1) = (t² − t)
        let g = CofiniteIdeal::generated(1, vec![t("t^2 - t")], 6).unwrap();
        let p = CofiniteIdeal::at(0, 1).product(&CofiniteIdeal::at(1, 1)).unwrap();
        assert_eq!(g.codim(), p.codim());
        // (x², xy, y²) = 𝔪₀² in two variables
        let gens = ["x^2", "x*y", "y^2"].iter().map(|s| Poly::parse(s, 2).unwrap()).collect();
        let g2 = CofiniteIdeal::generated(2, gens, 4).unwrap();
        assert_eq!(g2.codim(), Ok(3));
        let not = CofiniteIdeal::generated(2, vec![Poly::parse("x", 2).unwrap()], 5).unwrap();
        assert!(matches!(not.codim(), Err(CommError::NotCofinite(_))));
        let qa = QuotientAlgebra::new(&g).unwrap();
        assert_eq!(qa.dim(), 2);
    }

    #[test]
    fn lattice_ops() {
        let m = |k| CofiniteIdeal::at(0, k);
        assert_eq!(m(2).product(&m(1)).unwrap(), m(3));
        assert_eq!(m(2).intersect(&m(3)).unwrap(), m(3));
        assert_eq!(m(2).intersect(&m(2)).unwrap(), m(2));
        assert_eq!(m(2).product(&CofiniteIdeal::unit(1)).unwrap(), m(2));
        assert!(m(2).coprime(&CofiniteIdeal::at(1, 1)).unwrap());
        assert!(!m(2).coprime(&m(1)).unwrap());
        let a = CofiniteIdeal::point_power(vec![Q::zero(), Q::zero()], 1);
        let b = CofiniteIdeal::point_power(vec![Q::zero(), Q::one()], 1);
        assert!(a.coprime(&b).unwrap());
        assert!(m(3).contained_in(&m(2)).unwrap());
        assert!(!m(2).contained_in(&m(3)).unwrap());
        let split = m(2).intersect(&CofiniteIdeal::at(1, 1)).unwrap().crt_split().unwrap();
        assert_eq!(split, vec![m(2), CofiniteIdeal::at(1, 1)]);
        let g = CofiniteIdeal::generated(1, vec![t("t")], 3).unwrap();
        assert!(matches!(g.intersect(&m(1)), Err(CommError::UnsupportedPresentation(_))));
    }

    #[test]
    fn bezout_examples() {
        let (f, g) = bezout_witness(&CofiniteIdeal::at(0, 1), &CofiniteIdeal::at(1, 1), 2).unwrap();
        assert_eq!(f, t("t^2*(3-2t)"));
        assert_eq!(g, t("(t-1)^2*(2t+1)"));
        let (f, g) = bezout_witness(&CofiniteIdeal::at(0, 1), &CofiniteIdeal::at(1, 1), 1).unwrap();
        assert_eq!(f, t("t"));
        assert_eq!(g, t("1-t"));
        assert!(matches!(
            bezout_witness(&CofiniteIdeal::at(0, 1), &CofiniteIdeal::at(0, 2), 1),
            Err(CommError::NotCoprime(_))
        ));
    }

    #[test]
    fn quotient_examples() {
        let q = QuotientAlgebra::new(&CofiniteIdeal::at(0, 2)).unwrap();
        assert_eq!(q.dim(), 2);
        assert!(q.mul_basis(1, 1).is_empty());
        let q3 = QuotientAlgebra::new(&CofiniteIdeal::at(0, 3)).unwrap();
        assert_eq!(q3.mul_basis(1, 1), &vec![(2, Q::one())]);
        assert!(q3.mul_basis(1, 2).is_empty());
        let two = CofiniteIdeal::at(0, 1).intersect(&CofiniteIdeal::at(1, 1)).unwrap();
        let q2 = QuotientAlgebra::new(&two).unwrap();
        // idempotents 1−t and t
        assert_eq!(q2.basis()[0], t("1 - t"));
        assert_eq!(q2.basis()[1], t("t"));
        assert_eq!(q2.mul_basis(0, 0), &vec![(0, Q::one())]);
        assert!(q2.mul_basis(0, 1).is_empty());
    }

    #[test]
    fn table_agrees_with_polynomial_products() {
        let i = CofiniteIdeal::at(0, 2).intersect(&CofiniteIdeal::at(2, 2)).unwrap();
        let qa = QuotientAlgebra::new(&i).unwrap();
        for a in 0..qa.dim() {
            assert_eq!(qa.coords(&qa.basis()[a]).unwrap(), vec![(a, Q::one())]);
            for b in 0..qa.dim() {
                let prod = &qa.basis()[a] * &qa.basis()[b];
                assert_eq!(&qa.coords(&prod).unwrap(), qa.mul_basis(a, b));
            }
        }
        let two_var = CofiniteIdeal::from_points(
            2,
            vec![(vec![Q::zero(), Q::zero()], 2), (vec![Q::one(), Q::from_int(-1)], 1)],
        )
        .unwrap();
        let qa = QuotientAlgebra::new(&two_var).unwrap();
        assert_eq!(qa.dim(), 4);
        for a in 0..qa.dim() {
            for b in 0..qa.dim() {
                let prod = &qa.basis()[a] * &qa.basis()[b];
                assert_eq!(&qa.coords(&prod).unwrap(), qa.mul_basis(a, b));
            }
        }
    }

    #[test]
    fn image_of_ideals() {
        let qa = QuotientAlgebra::new(&CofiniteIdeal::at(0, 4)).unwrap();
        assert_eq!(qa.ideal_image(&CofiniteIdeal::at(0, 2)).unwrap().len(), 2);
        assert_eq!(qa.ideal_image(&CofiniteIdeal::unit(1)).unwrap().len(), 4);
        assert_eq!(qa.ideal_image(&CofiniteIdeal::at(5, 1)).unwrap().len(), 4);
    }

    #[test]
    fn json_formats() {
        let i: CofiniteIdeal = serde_json::from_str(r#"{"points":[{"coords":[0],"exp":2}]}"#).unwrap();
        assert_eq!(i, CofiniteIdeal::at(0, 2));
        let g: CofiniteIdeal = serde_json::from_str(r#"{"generators":["t^2-t"],"truncation_degree":6}"#).unwrap();
        assert_eq!(g.codim(), Ok(2));
        let back: CofiniteIdeal = serde_json::from_str(&serde_json::to_string(&i).unwrap()).unwrap();
        assert_eq!(back, i);
        assert!(serde_json::from_str::<CofiniteIdeal>(
            r#"{"points":[{"coords":[0],"exp":2},{"coords":[0],"exp":1}]}"#
        )
        .is_err());
    }
}

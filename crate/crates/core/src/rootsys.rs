//! Generalized Cartan matrices and positive roots with multiplicities.
//!
//! Convention: `a_ij = α_j(α_i^∨)`, so the pairing of `β = Σ n_j α_j` with the
//! coroot `α_i^∨` is `Σ_j n_j a_ij`.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::{height, Eta, Q};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RootError {
    #[error("NonCartan: {0}")]
    NonCartan(String),
    #[error("TypeMismatch: {0}")]
    TypeMismatch(String),
    #[error("UnsupportedType: {0}")]
    UnsupportedType(String),
    #[error("IndexOutOfRange: simple index {index} for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CartanType {
    #[serde(rename = "finite")]
    Finite,
    #[serde(rename = "affine-untwisted", alias = "affine")]
    AffineUntwisted,
    #[serde(rename = "indefinite")]
    Indefinite,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Gcm {
    #[serde(rename = "cartan_matrix")]
    entries: Vec<Vec<i64>>,
    #[serde(rename = "type")]
    kind: CartanType,
}

#[derive(Deserialize)]
struct RawGcm {
    cartan_matrix: Vec<Vec<i64>>,
    #[serde(rename = "type")]
    kind: CartanType,
}

impl<'de> Deserialize<'de> for Gcm {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = RawGcm::deserialize(d)?;
        validate_gcm(raw.cartan_matrix, raw.kind).map_err(serde::de::Error::custom)
    }
}

fn det(m: &[Vec<i64>]) -> i128 {
    // Bareiss fraction-free elimination.
    let n = m.len();
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            let Some(swap) = (k + 1..n).find(|&r| a[r][k] != 0) else {
                return 0;
            };
            a.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

fn submatrix(m: &[Vec<i64>], idx: &[usize]) -> Vec<Vec<i64>> {
    idx.iter().map(|&i| idx.iter().map(|&j| m[i][j]).collect()).collect()
}

/// Classifies an indecomposable GCM by its principal minors.
fn classify(m: &[Vec<i64>]) -> CartanType {
    let l = m.len();
    let mut proper_positive = true;
    for mask in 1u32..(1 << l) - 1 {
        let idx: Vec<usize> = (0..l).filter(|i| mask >> i & 1 == 1).collect();
        if det(&submatrix(m, &idx)) <= 0 {
            proper_positive = false;
            break;
        }
    }
    let full = det(m);
    match (proper_positive, full) {
        (true, d) if d > 0 => CartanType::Finite,
        (true, 0) => CartanType::AffineUntwisted,
        _ => CartanType::Indefinite,
    }
}

pub fn validate_gcm(entries: Vec<Vec<i64>>, declared: CartanType) -> Result<Gcm, RootError> {
    let l = entries.len();
    if l == 0 {
        return Err(RootError::NonCartan("empty matrix".into()));
    }
    for (i, row) in entries.iter().enumerate() {
        if row.len() != l {
            return Err(RootError::NonCartan(format!("row {i} has length {}, expected {l}", row.len())));
        }
        if row[i] != 2 {
            return Err(RootError::NonCartan(format!("diagonal entry ({i},{i}) is {}", row[i])));
        }
    }
    for i in 0..l {
        for j in 0..l {
            if i == j {
                continue;
            }
            if entries[i][j] > 0 {
                return Err(RootError::NonCartan(format!("positive off-diagonal entry at ({i},{j})")));
            }
            if (entries[i][j] == 0) != (entries[j][i] == 0) {
                return Err(RootError::NonCartan(format!("zero pattern not symmetric at ({i},{j})")));
            }
        }
    }
    if l <= 8 {
        let found = classify(&entries);
        if found != declared {
            return Err(RootError::TypeMismatch(format!("declared {declared:?}, principal minors give {found:?}")));
        }
    }
    Ok(Gcm { entries, kind: declared })
}

impl Gcm {
    /// Standard matrices by name: `A1..A8`, `B2..B8`, `C2..C8`, `D4..D8`, `G2`,
    /// and untwisted affine `A1^(1)`, `A2^(1)`.
    pub fn named(name: &str) -> Result<Gcm, RootError> {
        let bad = || RootError::UnsupportedType(format!("unknown type name {name}"));
        if let Some(base) = name.strip_suffix("^(1)") {
            let fin = Gcm::named(base)?;
            if !name.starts_with('A') {
                return Err(bad());
            }
            let n = fin.rank();
            let mut m = vec![vec![0i64; n + 1]; n + 1];
            for i in 0..n {
                for j in 0..n {
                    m[i + 1][j + 1] = fin.entries[i][j];
                }
            }
            m[0][0] = 2;
            if n == 1 {
                m[0][1] = -2;
                m[1][0] = -2;
            } else {
                m[0][1] = -1;
                m[1][0] = -1;
                m[0][n] = -1;
                m[n][0] = -1;
            }
            return validate_gcm(m, CartanType::AffineUntwisted);
        }
        let (letter, n) = name.split_at(1);
        let n: usize = n.parse().map_err(|_| bad())?;
        if n == 0 || n > 8 {
            return Err(bad());
        }
        let mut m = vec![vec![0i64; n]; n];
        for i in 0..n {
            m[i][i] = 2;
            if i + 1 < n {
                m[i][i + 1] = -1;
                m[i + 1][i] = -1;
            }
        }
        match letter {
            "A" => {}
            "B" if n >= 2 => m[n - 1][n - 2] = -2,
            "C" if n >= 2 => m[n - 2][n - 1] = -2,
            "D" if n >= 4 => {
                m[n - 2][n - 1] = 0;
                m[n - 1][n - 2] = 0;
                m[n - 3][n - 1] = -1;
                m[n - 1][n - 3] = -1;
            }
            "G" if n == 2 => m[0][1] = -3,
            _ => return Err(bad()),
        }
        validate_gcm(m, CartanType::Finite)
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    pub fn kind(&self) -> CartanType {
        self.kind
    }

    pub fn entries(&self) -> &[Vec<i64>] {
        &self.entries
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.entries[i][j]
    }

    /// `β(α_i^∨)` for `β` in simple-root coordinates (negative coordinates allowed).
    pub fn pair_coroot(&self, beta: &[i64], i: usize) -> i64 {
        beta.iter().enumerate().map(|(j, &n)| n * self.entries[i][j]).sum()
    }

    /// Simple reflection `s_i(β) = β − β(α_i^∨) α_i`.
    pub fn reflect(&self, beta: &[i64], i: usize) -> Vec<i64> {
        let c = self.pair_coroot(beta, i);
        let mut out = beta.to_vec();
        out[i] -= c;
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RootVector {
    pub coords: Eta,
    pub height: u32,
    pub mult: u32,
}

impl RootVector {
    pub fn new(coords: Eta, mult: u32) -> Self {
        let height = height(&coords);
        RootVector { coords, height, mult }
    }

    pub fn is_simple(&self) -> Option<usize> {
        if self.height == 1 {
            self.coords.iter().position(|&c| c == 1)
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RootSystemTable {
    pub gcm: Gcm,
    pub height_bound: u32,
    pub roots: Vec<RootVector>,
    #[serde(skip)]
    index: HashMap<Eta, usize>,
}

impl RootSystemTable {
    fn from_roots(gcm: Gcm, h: u32, mut roots: Vec<RootVector>) -> Self {
        roots.retain(|r| r.height <= h);
        roots.sort_by(|a, b| a.height.cmp(&b.height).then_with(|| b.coords.cmp(&a.coords)));
        let index = roots.iter().enumerate().map(|(k, r)| (r.coords.clone(), k)).collect();
        RootSystemTable { gcm, height_bound: h, roots, index }
    }

    pub fn rank(&self) -> usize {
        self.gcm.rank()
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn index_of(&self, coords: &[u32]) -> Option<usize> {
        self.index.get(coords).copied()
    }

    pub fn get(&self, coords: &[u32]) -> Option<&RootVector> {
        self.index_of(coords).map(|k| &self.roots[k])
    }

    /// Index of the simple root `α_i`.
    pub fn simple(&self, i: usize) -> usize {
        let mut e = vec![0; self.rank()];
        e[i] = 1;
        self.index_of(&e).expect("simple roots are always listed")
    }

    /// Same table cut down to height `h ≤ H`.
    pub fn truncate(&self, h: u32) -> RootSystemTable {
        RootSystemTable::from_roots(self.gcm.clone(), h.min(self.height_bound), self.roots.clone())
    }
}

fn finite_cache() -> &'static Mutex<HashMap<Gcm, Arc<Vec<RootVector>>>> {
    static CACHE: OnceLock<Mutex<HashMap<Gcm, Arc<Vec<RootVector>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// All positive roots of a finite-type (or, when `cap` is set, any) GCM with
/// multiplicity-one real roots, built height by height with root strings.
fn real_roots_by_strings(gcm: &Gcm, cap: Option<u32>) -> Vec<Eta> {
    let l = gcm.rank();
    let mut known: BTreeSet<Eta> = BTreeSet::new();
    let mut layer: Vec<Eta> = (0..l)
        .map(|i| {
            let mut e = vec![0; l];
            e[i] = 1;
            e
        })
        .collect();
    let mut h = 1;
    while !layer.is_empty() && cap.is_none_or(|c| h <= c) {
        known.extend(layer.iter().cloned());
        let mut next = BTreeSet::new();
        for beta in &layer {
            let signed: Vec<i64> = beta.iter().map(|&x| x as i64).collect();
            for i in 0..l {
                // p = largest k with β − kα_i a root
                let mut p = 0i64;
                let mut probe = beta.clone();
                while probe[i] > 0 {
                    probe[i] -= 1;
                    if known.contains(&probe) {
                        p += 1;
                    } else {
                        break;
                    }
                }
                let q = p - gcm.pair_coroot(&signed, i);
                if q > 0 {
                    let mut up = beta.clone();
                    up[i] += 1;
                    next.insert(up);
                }
            }
        }
        layer = next.into_iter().collect();
        h += 1;
    }
    known.into_iter().collect()
}

/// The null vector `δ` of an affine GCM, primitive with positive integer entries.
pub fn affine_delta(gcm: &Gcm) -> Option<Eta> {
    let l = gcm.rank();
    let cols: Vec<crate::linalg::SparseVec> = (0..l)
        .map(|j| crate::linalg::normalize((0..l).map(|i| (i, Q::from_int(gcm.entry(i, j)))).collect()))
        .collect();
    let ker = crate::linalg::kernel_of_columns(&cols, l);
    if ker.len() != 1 {
        return None;
    }
    let mut dense = vec![Q::zero(); l];
    for (c, x) in &ker[0] {
        dense[*c] = x.clone();
    }
    // clear denominators, then divide by the gcd of numerators
    let mut lcm = num_bigint::BigInt::from(1);
    for x in &dense {
        let d = x.denom();
        lcm = num_integer::Integer::lcm(&lcm, &d);
    }
    let ints: Vec<num_bigint::BigInt> = dense.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let g = ints.iter().fold(num_bigint::BigInt::from(0), |g, x| num_integer::Integer::gcd(&g, x));
    let sign = if ints.iter().any(|x| x < &num_bigint::BigInt::from(0)) { -1 } else { 1 };
    let mut out = Vec::with_capacity(l);
    for x in ints {
        let v: i64 = num_traits::ToPrimitive::to_i64(&(x / &g)).unwrap() * sign;
        if v <= 0 {
            return None;
        }
        out.push(v as u32);
    }
    Some(out)
}

/// Affine data: `δ`, the node `i₀` whose removal leaves the underlying finite
/// algebra with `δ − α_{i₀} = θ`, and the finite roots embedded with `0` at `i₀`.
pub struct AffineData {
    pub delta: Eta,
    pub node: usize,
    pub finite: Gcm,
    pub finite_roots: Vec<Eta>,
}

pub fn affine_data(gcm: &Gcm) -> Result<AffineData, RootError> {
    let unsupported = || RootError::UnsupportedType("affine GCM is not of untwisted type".into());
    let delta = affine_delta(gcm).ok_or_else(unsupported)?;
    let l = gcm.rank();
    for node in 0..l {
        if delta[node] != 1 {
            continue;
        }
        let keep: Vec<usize> = (0..l).filter(|&j| j != node).collect();
        let sub = submatrix(gcm.entries(), &keep);
        if classify(&sub) != CartanType::Finite {
            continue;
        }
        let finite = Gcm { entries: sub, kind: CartanType::Finite };
        let fin = finite_positive_roots(&finite);
        let theta: Eta = keep.iter().map(|&j| delta[j]).collect();
        // θ must be the unique root of maximal height
        let top = fin.iter().map(|r| height(r)).max().unwrap_or(0);
        if !fin.contains(&theta) || height(&theta) != top {
            continue;
        }
        let finite_roots = fin
            .iter()
            .map(|r| {
                let mut e = vec![0; l];
                for (k, &j) in keep.iter().enumerate() {
                    e[j] = r[k];
                }
                e
            })
            .collect();
        return Ok(AffineData { delta, node, finite, finite_roots });
    }
    Err(unsupported())
}

fn finite_positive_roots(gcm: &Gcm) -> Arc<Vec<Eta>> {
    let cache = finite_cache();
    if let Some(hit) = cache.lock().unwrap().get(gcm) {
        return Arc::new(hit.iter().map(|r| r.coords.clone()).collect());
    }
    let roots = real_roots_by_strings(gcm, None);
    let listed: Vec<RootVector> = roots.iter().map(|r| RootVector::new(r.clone(), 1)).collect();
    cache.lock().unwrap().insert(gcm.clone(), Arc::new(listed));
    Arc::new(roots)
}

pub fn positive_roots(gcm: &Gcm, h: u32) -> Result<RootSystemTable, RootError> {
    assert!(h >= 1, "height bound must be positive");
    match gcm.kind() {
        CartanType::Finite => {
            let roots = finite_positive_roots(gcm);
            let rv = roots.iter().map(|r| RootVector::new(r.clone(), 1)).collect();
            Ok(RootSystemTable::from_roots(gcm.clone(), h, rv))
        }
        CartanType::AffineUntwisted => {
            let data = affine_data(gcm)?;
            let l = gcm.rank();
            let dh = height(&data.delta);
            let mut out = Vec::new();
            let shift = |base: &[i64], k: u32| -> Eta {
                base.iter().zip(&data.delta).map(|(&b, &d)| (b + (k * d) as i64) as u32).collect()
            };
            let fin_rank = data.finite.rank() as u32;
            let mut k = 0;
            while k * dh <= h + dh {
                for r in &data.finite_roots {
                    let pos: Vec<i64> = r.iter().map(|&x| x as i64).collect();
                    out.push(RootVector::new(shift(&pos, k), 1));
                    if k >= 1 {
                        let neg: Vec<i64> = r.iter().map(|&x| -(x as i64)).collect();
                        out.push(RootVector::new(shift(&neg, k), 1));
                    }
                }
                if k >= 1 {
                    out.push(RootVector::new(shift(&vec![0; l], k), fin_rank));
                }
                k += 1;
            }
            Ok(RootSystemTable::from_roots(gcm.clone(), h, out))
        }
        CartanType::Indefinite => Err(RootError::UnsupportedType("indefinite GCMs are not supported".into())),
    }
}

/// `α ≤ β` iff `β − α ∈ Q₊`.
pub fn root_leq(a: &RootVector, b: &RootVector) -> bool {
    eta_leq(&a.coords, &b.coords)
}

pub fn eta_leq(a: &[u32], b: &[u32]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x <= y)
}

/// `λ(α_i^∨)` with a 0-based simple index.
pub fn coroot_pairing(lambda: &[i64], i: usize) -> Result<i64, RootError> {
    lambda.get(i).copied().ok_or(RootError::IndexOutOfRange { index: i, rank: lambda.len() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reflection_orbit(gcm: &Gcm) -> BTreeSet<Eta> {
        let l = gcm.rank();
        let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
        let mut todo: Vec<Vec<i64>> = (0..l)
            .map(|i| {
                let mut e = vec![0; l];
                e[i] = 1;
                e
            })
            .collect();
        while let Some(b) = todo.pop() {
            if !seen.insert(b.clone()) {
                continue;
            }
            for i in 0..l {
                todo.push(gcm.reflect(&b, i));
            }
        }
        seen.into_iter()
            .filter(|b| b.iter().all(|&x| x >= 0))
            .map(|b| b.into_iter().map(|x| x as u32).collect())
            .collect()
    }

    #[test]
    fn validate_examples() {
        assert!(validate_gcm(vec![vec![2, -1], vec![-1, 2]], CartanType::Finite).is_ok());
        assert!(validate_gcm(vec![vec![2, -2], vec![-2, 2]], CartanType::AffineUntwisted).is_ok());
        assert!(matches!(
            validate_gcm(vec![vec![2, 1], vec![1, 2]], CartanType::Finite),
            Err(RootError::NonCartan(_))
        ));
        assert!(matches!(
            validate_gcm(vec![vec![2, -2], vec![-2, 2]], CartanType::Finite),
            Err(RootError::TypeMismatch(_))
        ));
        assert!(matches!(
            validate_gcm(vec![vec![2, 0], vec![-1, 2]], CartanType::Finite),
            Err(RootError::NonCartan(_))
        ));
        let hyper = validate_gcm(vec![vec![2, -3], vec![-3, 2]], CartanType::Indefinite).unwrap();
        assert!(matches!(positive_roots(&hyper, 3), Err(RootError::UnsupportedType(_))));
    }

    #[test]
    fn finite_counts_match_orbit() {
        for (name, n) in [("A1", 1), ("A2", 3), ("B2", 4), ("G2", 6), ("A3", 6), ("B3", 9), ("C3", 9), ("D4", 12)] {
            let g = Gcm::named(name).unwrap();
            let t = positive_roots(&g, 100).unwrap();
            assert_eq!(t.len(), n, "{name}");
            let listed: BTreeSet<Eta> = t.roots.iter().map(|r| r.coords.clone()).collect();
            assert_eq!(listed, reflection_orbit(&g), "{name}");
        }
    }

    #[test]
    fn a2_and_a1_examples() {
        let t = positive_roots(&Gcm::named("A2").unwrap(), 3).unwrap();
        let c: Vec<Eta> = t.roots.iter().map(|r| r.coords.clone()).collect();
        assert_eq!(c, vec![vec![1, 0], vec![0, 1], vec![1, 1]]);
        assert_eq!(positive_roots(&Gcm::named("A1").unwrap(), 5).unwrap().len(), 1);
    }

    #[test]
    fn affine_a1() {
        let g = Gcm::named("A1^(1)").unwrap();
        let t = positive_roots(&g, 3).unwrap();
        let c: BTreeSet<(Eta, u32)> = t.roots.iter().map(|r| (r.coords.clone(), r.mult)).collect();
        let want: BTreeSet<(Eta, u32)> =
            [(vec![1, 0], 1), (vec![0, 1], 1), (vec![1, 1], 1), (vec![1, 2], 1), (vec![2, 1], 1)].into_iter().collect();
        assert_eq!(c, want);
    }

    #[test]
    fn affine_simply_laced_oracle() {
        // real roots of simply-laced affine type have (β,β)=2; imaginary ones are kδ
        for name in ["A1^(1)", "A2^(1)"] {
            let g = Gcm::named(name).unwrap();
            let h = 7;
            let t = positive_roots(&g, h).unwrap();
            let delta = affine_delta(&g).unwrap();
            let l = g.rank();
            let mut want = BTreeSet::new();
            let mut cur = vec![0u32; l];
            enumerate_box(&mut cur, 0, h, &mut |eta| {
                if height(eta) == 0 {
                    return;
                }
                let s: Vec<i64> = eta.iter().map(|&x| x as i64).collect();
                let norm: i64 = (0..l).map(|i| s[i] * g.pair_coroot(&s, i)).sum();
                let is_delta_mult = {
                    let k = eta[0] / delta[0];
                    eta.iter().zip(&delta).all(|(e, d)| *e == k * d)
                };
                if norm == 2 {
                    want.insert((eta.to_vec(), 1));
                } else if is_delta_mult {
                    want.insert((eta.to_vec(), (l - 1) as u32));
                }
            });
            let got: BTreeSet<(Eta, u32)> = t.roots.iter().map(|r| (r.coords.clone(), r.mult)).collect();
            assert_eq!(got, want, "{name}");
        }
    }

    fn enumerate_box(cur: &mut Eta, pos: usize, h: u32, f: &mut dyn FnMut(&Eta)) {
        if pos == cur.len() {
            if height(cur) <= h {
                f(cur);
            }
            return;
        }
        for v in 0..=h {
            cur[pos] = v;
            enumerate_box(cur, pos + 1, h, f);
        }
        cur[pos] = 0;
    }

    #[test]
    fn affine_restricts_to_finite() {
        let g = Gcm::named("A2^(1)").unwrap();
        let t = positive_roots(&g, 6).unwrap();
        let fin: BTreeSet<Eta> =
            t.roots.iter().filter(|r| r.coords[0] == 0).map(|r| r.coords[1..].to_vec()).collect();
        let want: BTreeSet<Eta> =
            positive_roots(&Gcm::named("A2").unwrap(), 6).unwrap().roots.iter().map(|r| r.coords.clone()).collect();
        assert_eq!(fin, want);
    }

    #[test]
    fn order_is_partial_order() {
        for name in ["A2", "B2", "G2", "A1^(1)"] {
            let t = positive_roots(&Gcm::named(name).unwrap(), 6).unwrap();
            for a in &t.roots {
                assert!(root_leq(a, a));
                for b in &t.roots {
                    if root_leq(a, b) && root_leq(b, a) {
                        assert_eq!(a, b);
                    }
                    for c in &t.roots {
                        if root_leq(a, b) && root_leq(b, c) {
                            assert!(root_leq(a, c));
                        }
                    }
                }
            }
            assert!(t.roots.iter().all(|r| r.height == height(&r.coords)));
        }
    }

    #[test]
    fn pairing_and_json() {
        assert_eq!(coroot_pairing(&[1, 1], 0), Ok(1));
        assert_eq!(coroot_pairing(&[0, 3], 0), Ok(0));
        assert!(coroot_pairing(&[2], 1).is_err());
        let g: Gcm = serde_json::from_str(r#"{"cartan_matrix":[[2,-1],[-1,2]],"type":"finite"}"#).unwrap();
        assert_eq!(g.rank(), 2);
        assert!(serde_json::from_str::<Gcm>(r#"{"cartan_matrix":[[2,1],[1,2]],"type":"finite"}"#).is_err());
        let t = positive_roots(&g, 2).unwrap();
        let s = serde_json::to_string(&t.roots).unwrap();
        assert_eq!(s, r#"[{"coords":[1,0],"height":1,"mult":1},{"coords":[0,1],"height":1,"mult":1},{"coords":[1,1],"height":2,"mult":1}]"#);
    }
}

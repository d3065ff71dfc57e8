//! Truncated formal characters `Σ_η K_η e^{−η}` over `Q₊`.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::commalg::{CofiniteIdeal, CommError};
use crate::hwdata::{k_sequence, standard_sequence, HwError, IdealSequence, Psi, Weight};
use crate::poly::binomial;
use crate::rootsys::{RootSystemTable, RootVector};
use crate::{height, Eta};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CharError {
    #[error("TableMismatch: {0}")]
    TableMismatch(String),
    #[error(transparent)]
    Hw(#[from] HwError),
    #[error(transparent)]
    Comm(#[from] CommError),
}

#[derive(Debug, Clone)]
pub struct FormalCharacter {
    pub table: Arc<RootSystemTable>,
    pub height_bound: u32,
    pub base_weight: Weight,
    coeffs: BTreeMap<Eta, i128>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CharRow {
    pub eta: Eta,
    pub height: u32,
    pub value: i128,
}

impl FormalCharacter {
    /// `e^0`, the multiplicative identity.
    pub fn unit(table: Arc<RootSystemTable>, h: u32) -> Self {
        let rank = table.rank();
        let mut coeffs = BTreeMap::new();
        coeffs.insert(vec![0; rank], 1);
        FormalCharacter { table, height_bound: h, base_weight: Weight::zero(rank), coeffs }
    }

    pub fn coeff(&self, eta: &[u32]) -> i128 {
        self.coeffs.get(eta).copied().unwrap_or(0)
    }

    pub fn support(&self) -> impl Iterator<Item = (&Eta, &i128)> {
        self.coeffs.iter()
    }

    /// Rows sorted by height, then lexicographically.
    pub fn rows(&self) -> Vec<CharRow> {
        let mut rows: Vec<CharRow> = self
            .coeffs
            .iter()
            .map(|(e, &v)| CharRow { eta: e.clone(), height: height(e), value: v })
            .collect();
        rows.sort_by(|a, b| a.height.cmp(&b.height).then_with(|| a.eta.cmp(&b.eta)));
        rows
    }

    /// Coefficients summed by height.
    pub fn height_totals(&self) -> Vec<i128> {
        let mut out = vec![0; self.height_bound as usize + 1];
        for (e, v) in &self.coeffs {
            out[height(e) as usize] += v;
        }
        out
    }

    /// Same character truncated further to `h`.
    pub fn truncate(&self, h: u32) -> FormalCharacter {
        let mut out = self.clone();
        out.height_bound = h.min(self.height_bound);
        out.coeffs.retain(|e, _| height(e) <= out.height_bound);
        out
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("eta_coords,height,value\n");
        for r in self.rows() {
            let coords: Vec<String> = r.eta.iter().map(|x| x.to_string()).collect();
            s.push_str(&format!("{},{},{}\n", coords.join(";"), r.height, r.value));
        }
        s
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "base_weight": self.base_weight,
            "height_bound": self.height_bound,
            "rows": self.rows().iter().map(|r| serde_json::json!({
                "eta": r.eta, "height": r.height, "value": r.value.to_string().parse::<serde_json::Number>().ok()
            })).collect::<Vec<_>>(),
        })
    }
}

impl PartialEq for FormalCharacter {
    fn eq(&self, other: &Self) -> bool {
        self.height_bound == other.height_bound && self.coeffs == other.coeffs
    }
}

/// `(1 − e^{−α})^{−c}` truncated at height `H`.
pub fn geometric_factor(table: Arc<RootSystemTable>, alpha: &RootVector, c: u32, h: u32) -> FormalCharacter {
    assert!(c >= 1, "exponent must be positive");
    let mut out = FormalCharacter::unit(table, h);
    let mut j = 1u32;
    while j * alpha.height <= h {
        let eta: Eta = alpha.coords.iter().map(|x| x * j).collect();
        out.coeffs.insert(eta, binomial((j + c - 1) as u64, (c - 1) as u64) as i128);
        j += 1;
    }
    out
}

pub fn multiply(a: &FormalCharacter, b: &FormalCharacter) -> Result<FormalCharacter, CharError> {
    if a.table.gcm != b.table.gcm {
        return Err(CharError::TableMismatch("characters over different root systems".into()));
    }
    if a.height_bound != b.height_bound {
        return Err(CharError::TableMismatch(format!(
            "height bounds {} and {} differ",
            a.height_bound, b.height_bound
        )));
    }
    let h = a.height_bound;
    let mut coeffs: BTreeMap<Eta, i128> = BTreeMap::new();
    for (ea, va) in &a.coeffs {
        let ha = height(ea);
        for (eb, vb) in &b.coeffs {
            if ha + height(eb) > h {
                continue;
            }
            let e: Eta = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            *coeffs.entry(e).or_insert(0) += va * vb;
        }
    }
    coeffs.retain(|_, v| *v != 0);
    Ok(FormalCharacter { table: a.table.clone(), height_bound: h, base_weight: a.base_weight.add(&b.base_weight), coeffs })
}

/// `∏_α (1 − e^{−α})^{−codim(I_α)·l_α}`, factors taken in increasing root height.
#[allow(non_snake_case)]
pub fn character_of_M(psi: &Psi, seq: &IdealSequence, h: u32) -> Result<FormalCharacter, CharError> {
    let table = seq.table.clone();
    let mut acc = FormalCharacter::unit(table.clone(), h);
    acc.base_weight = psi.weight.clone();
    for (r, ideal) in table.roots.iter().zip(&seq.entries) {
        if r.height > h {
            continue;
        }
        let c = ideal.codim()? as u32 * r.mult;
        if c == 0 {
            continue;
        }
        let f = geometric_factor(table.clone(), r, c, h);
        let w = acc.base_weight.clone();
        acc = multiply(&acc, &f)?;
        acc.base_weight = w;
    }
    Ok(acc)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CodimRow {
    pub alpha: Eta,
    pub m: u64,
    pub n: u64,
    pub k: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DimDiscrepancy {
    pub eta: Eta,
    pub lhs: i128,
    pub rhs: i128,
}

#[derive(Debug, Clone, Serialize)]
pub struct T1DimReport {
    pub pass: bool,
    pub codims: Vec<CodimRow>,
    pub codim_failure: Option<Eta>,
    pub lhs: Vec<CharRow>,
    pub rhs: Vec<CharRow>,
    pub first_discrepancy: Option<DimDiscrepancy>,
}

/// First `η` (by height, then lex) where two characters differ.
pub fn first_difference(a: &FormalCharacter, b: &FormalCharacter) -> Option<DimDiscrepancy> {
    let mut keys: Vec<&Eta> = a.coeffs.keys().chain(b.coeffs.keys()).collect();
    keys.sort_by(|x, y| height(x).cmp(&height(y)).then_with(|| x.cmp(y)));
    keys.dedup();
    keys.into_iter()
        .find(|e| a.coeff(e) != b.coeff(e))
        .map(|e| DimDiscrepancy { eta: e.clone(), lhs: a.coeff(e), rhs: b.coeff(e) })
}

#[allow(non_snake_case)]
pub fn verify_T1_dimensions(
    lambda: &Weight,
    i: &CofiniteIdeal,
    mu: &Weight,
    j: &CofiniteIdeal,
    table: Arc<RootSystemTable>,
    h: u32,
) -> Result<T1DimReport, CharError> {
    let k = k_sequence(lambda, i, mu, j, table.clone())?;
    let s1 = standard_sequence(lambda, i, table.clone())?;
    let s2 = standard_sequence(mu, j, table.clone())?;
    compare_T1(lambda, &s1, mu, &s2, &k, h)
}

/// Codimension and character comparison for explicitly given sequences; `k` may
/// be any sequence over the same table (used for negative controls).
#[allow(non_snake_case)]
pub fn compare_T1(
    lambda: &Weight,
    s1: &IdealSequence,
    mu: &Weight,
    s2: &IdealSequence,
    k: &IdealSequence,
    h: u32,
) -> Result<T1DimReport, CharError> {
    let table = k.table.clone();
    let mut codims = Vec::new();
    let mut codim_failure = None;
    for (idx, r) in table.roots.iter().enumerate() {
        let row = CodimRow {
            alpha: r.coords.clone(),
            m: s1.entries[idx].codim()?,
            n: s2.entries[idx].codim()?,
            k: k.entries[idx].codim()?,
        };
        if row.m + row.n != row.k && codim_failure.is_none() {
            codim_failure = Some(r.coords.clone());
        }
        codims.push(row);
    }
    let nv = k.envelope.nvars();
    let rank = table.rank();
    let psi_stub = |w: &Weight| Psi { weight: w.clone(), ..Psi::zero(rank, nv) };
    let lhs = character_of_M(&psi_stub(&lambda.add(mu)), k, h)?;
    let rhs = multiply(&character_of_M(&psi_stub(lambda), s1, h)?, &character_of_M(&psi_stub(mu), s2, h)?)?;
    let first_discrepancy = first_difference(&lhs, &rhs);
    Ok(T1DimReport {
        pass: codim_failure.is_none() && first_discrepancy.is_none(),
        codims,
        codim_failure,
        lhs: lhs.rows(),
        rhs: rhs.rows(),
        first_discrepancy,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::{positive_roots, Gcm};

    fn table(name: &str, h: u32) -> Arc<RootSystemTable> {
        Arc::new(positive_roots(&Gcm::named(name).unwrap(), h).unwrap())
    }

    /// Coin-change count of multisets of coloured roots summing to each η.
    fn partition_oracle(table: &RootSystemTable, colours: &[u32], h: u32) -> BTreeMap<Eta, i128> {
        let mut dp: BTreeMap<Eta, i128> = BTreeMap::new();
        dp.insert(vec![0; table.rank()], 1);
        for (r, &c) in table.roots.iter().zip(colours) {
            for _ in 0..c {
                let keys: Vec<Eta> = {
                    let mut all = Vec::new();
                    enumerate(table.rank(), h, &mut vec![0; table.rank()], 0, &mut all);
                    all
                };
                for e in keys {
                    if e.iter().zip(&r.coords).all(|(x, y)| x >= y) {
                        let prev: Eta = e.iter().zip(&r.coords).map(|(x, y)| x - y).collect();
                        let add = dp.get(&prev).copied().unwrap_or(0);
                        if add != 0 {
                            *dp.entry(e).or_insert(0) += add;
                        }
                    }
                }
            }
        }
        dp
    }

    fn enumerate(rank: usize, h: u32, cur: &mut Eta, pos: usize, out: &mut Vec<Eta>) {
        if pos == rank {
            out.push(cur.clone());
            return;
        }
        for v in 0..=h - height(&cur[..pos]) {
            cur[pos] = v;
            enumerate(rank, h, cur, pos + 1, out);
        }
        cur[pos] = 0;
    }

    #[test]
    fn geometric_examples() {
        let t = table("A1", 1);
        let a = &t.roots[0];
        let g1 = geometric_factor(t.clone(), a, 1, 6);
        assert!((0..=6).all(|j| g1.coeff(&[j]) == 1));
        assert_eq!(geometric_factor(t.clone(), a, 2, 6).coeff(&[3]), 4);
        assert_eq!(geometric_factor(t.clone(), a, 3, 6).coeff(&[2]), 6);
        let sq = multiply(&g1, &g1).unwrap();
        assert_eq!(sq, geometric_factor(t.clone(), a, 2, 6));
        assert_eq!(multiply(&g1, &FormalCharacter::unit(t.clone(), 6)).unwrap(), g1);
        let other = FormalCharacter::unit(table("A2", 2), 6);
        assert!(matches!(multiply(&g1, &other), Err(CharError::TableMismatch(_))));
    }

    #[test]
    fn a2_splittings() {
        let t = table("A2", 3);
        let mut acc = FormalCharacter::unit(t.clone(), 4);
        for r in &t.roots {
            acc = multiply(&acc, &geometric_factor(t.clone(), r, 1, 4)).unwrap();
        }
        assert_eq!(acc.coeff(&[1, 1]), 2);
        let oracle = partition_oracle(&t, &[1, 1, 1], 4);
        for (e, v) in acc.support() {
            assert_eq!(oracle.get(e).copied().unwrap_or(0), *v, "{e:?}");
        }
    }

    #[test]
    fn character_examples() {
        let t = table("A1", 6);
        let p = |l: i64| Psi::single(vec![crate::Q::zero()], Weight::new(vec![l]), CofiniteIdeal::at(0, 1));
        let s1 = standard_sequence(&Weight::new(vec![1]), &CofiniteIdeal::at(0, 1), t.clone()).unwrap();
        let c1 = character_of_M(&p(1), &s1, 5).unwrap();
        assert!((0..=5).all(|k| c1.coeff(&[k]) == 1));
        let s2 = standard_sequence(&Weight::new(vec![2]), &CofiniteIdeal::at(0, 1), t.clone()).unwrap();
        let c2 = character_of_M(&p(2), &s2, 5).unwrap();
        assert!((0..=5).all(|k| c2.coeff(&[k]) == k as i128 + 1));

        let aff = table("A1^(1)", 6);
        let seq = IdealSequence {
            table: aff.clone(),
            entries: vec![CofiniteIdeal::at(0, 1); aff.len()],
            envelope: CofiniteIdeal::at(0, 1),
        };
        let c = character_of_M(&Psi::zero(2, 1), &seq, 6).unwrap();
        assert_eq!(c.coeff(&[1, 1]), 2);
        let colours: Vec<u32> = aff.roots.iter().map(|r| r.mult).collect();
        let oracle = partition_oracle(&aff, &colours, 6);
        for (e, v) in &oracle {
            assert_eq!(c.coeff(e), *v, "{e:?}");
        }
    }

    #[test]
    fn t1_dimension_examples() {
        let a1 = table("A1", 6);
        let one = Weight::new(vec![1]);
        let r = verify_T1_dimensions(&one, &CofiniteIdeal::at(0, 1), &one, &CofiniteIdeal::at(1, 1), a1.clone(), 5)
            .unwrap();
        assert!(r.pass);
        assert!(r.lhs.iter().all(|row| row.value == row.height as i128 + 1));
        let a2 = table("A2", 4);
        let w = Weight::new(vec![1, 1]);
        let r = verify_T1_dimensions(&w, &CofiniteIdeal::at(0, 1), &w, &CofiniteIdeal::at(1, 1), a2, 4).unwrap();
        assert!(r.pass);
        assert!(matches!(
            verify_T1_dimensions(&one, &CofiniteIdeal::at(0, 1), &one, &CofiniteIdeal::at(0, 1), a1, 5),
            Err(CharError::Hw(_))
        ));
    }

    #[test]
    fn csv_layout() {
        let t = table("A2", 3);
        let c = geometric_factor(t.clone(), &t.roots[2], 2, 4);
        assert_eq!(c.to_csv(), "eta_coords,height,value\n0;0,0,1\n1;1,2,2\n2;2,4,3\n");
    }
}

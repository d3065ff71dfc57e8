//! Weights, evaluation functionals ψ and ideal sequences `{I_α}`.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::commalg::{CofiniteIdeal, CommError, Presentation};
use crate::rootsys::{eta_leq, RootSystemTable, RootVector};
use crate::{Eta, Q};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HwError {
    #[error("NotDominant: weight {0:?} has a negative coroot value")]
    NotDominant(Vec<i64>),
    #[error("SharedPoint: evaluation point {0} occurs in both summands")]
    SharedPoint(String),
    #[error("rank mismatch: weight of length {got}, algebra of rank {want}")]
    RankMismatch { got: usize, want: usize },
    #[error(transparent)]
    Comm(#[from] CommError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "WeightJson", into = "WeightJson")]
pub struct Weight {
    pub coroot_values: Vec<i64>,
    /// Values on a basis of `h″`; empty for finite type.
    pub hpp_values: Vec<Q>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum WeightJson {
    Plain(Vec<i64>),
    Full {
        coroot_values: Vec<i64>,
        #[serde(default)]
        hpp_values: Vec<Q>,
    },
}

impl From<WeightJson> for Weight {
    fn from(w: WeightJson) -> Self {
        match w {
            WeightJson::Plain(v) => Weight::new(v),
            WeightJson::Full { coroot_values, hpp_values } => Weight { coroot_values, hpp_values },
        }
    }
}

impl From<Weight> for WeightJson {
    fn from(w: Weight) -> Self {
        if w.hpp_values.is_empty() {
            WeightJson::Plain(w.coroot_values)
        } else {
            WeightJson::Full { coroot_values: w.coroot_values, hpp_values: w.hpp_values }
        }
    }
}

impl Weight {
    pub fn new(coroot_values: Vec<i64>) -> Self {
        Weight { coroot_values, hpp_values: Vec::new() }
    }

    pub fn zero(rank: usize) -> Self {
        Weight::new(vec![0; rank])
    }

    pub fn rank(&self) -> usize {
        self.coroot_values.len()
    }

    pub fn is_dominant(&self) -> bool {
        self.coroot_values.iter().all(|&x| x >= 0)
    }

    pub fn ensure_dominant(&self) -> Result<(), HwError> {
        if self.is_dominant() {
            Ok(())
        } else {
            Err(HwError::NotDominant(self.coroot_values.clone()))
        }
    }

    pub fn add(&self, other: &Weight) -> Weight {
        assert_eq!(self.rank(), other.rank(), "weights of different rank");
        let n = self.hpp_values.len().max(other.hpp_values.len());
        let hpp = (0..n)
            .map(|k| {
                self.hpp_values.get(k).cloned().unwrap_or_default() + other.hpp_values.get(k).cloned().unwrap_or_default()
            })
            .collect();
        Weight {
            coroot_values: self.coroot_values.iter().zip(&other.coroot_values).map(|(a, b)| a + b).collect(),
            hpp_values: hpp,
        }
    }
}

pub fn n_lambda_alpha(lambda: &Weight, alpha: &RootVector) -> Result<u32, HwError> {
    lambda.ensure_dominant()?;
    if lambda.rank() != alpha.coords.len() {
        return Err(HwError::RankMismatch { got: lambda.rank(), want: alpha.coords.len() });
    }
    Ok(alpha.coords.iter().zip(&lambda.coroot_values).map(|(&m, &l)| m as i64 * l).sum::<i64>() as u32)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalPoint {
    pub point: Vec<Q>,
    pub weight: Weight,
}

/// A highest-weight functional in evaluation form: `ψ(h⊗a) = Σ_k λ_k(h)·a(p_k)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Psi {
    pub weight: Weight,
    pub evaluation_data: Vec<EvalPoint>,
    pub annihilating_ideal: CofiniteIdeal,
}

impl Psi {
    pub fn new(evaluation_data: Vec<EvalPoint>, annihilating_ideal: CofiniteIdeal, rank: usize) -> Self {
        let weight = evaluation_data.iter().fold(Weight::zero(rank), |acc, e| acc.add(&e.weight));
        Psi { weight, evaluation_data, annihilating_ideal }
    }

    /// ψ concentrated at one point.
    pub fn single(point: Vec<Q>, lambda: Weight, ideal: CofiniteIdeal) -> Self {
        let rank = lambda.rank();
        Psi::new(vec![EvalPoint { point, weight: lambda }], ideal, rank)
    }

    pub fn zero(rank: usize, nvars: usize) -> Self {
        Psi { weight: Weight::zero(rank), evaluation_data: Vec::new(), annihilating_ideal: CofiniteIdeal::unit(nvars) }
    }

    pub fn rank(&self) -> usize {
        self.weight.rank()
    }
}

pub fn psi_consistency(psi: &Psi) -> bool {
    let ideal = &psi.annihilating_ideal;
    psi.evaluation_data.iter().all(|e| match ideal.presentation() {
        Presentation::PointSupported(m) => m.contains_key(&e.point),
        Presentation::Generated { generators, .. } => generators.iter().all(|g| g.eval(&e.point).is_zero()),
    })
}

pub fn psi_add(a: &Psi, b: &Psi) -> Result<Psi, HwError> {
    if let Some(p) = a.evaluation_data.iter().find(|e| b.evaluation_data.iter().any(|f| f.point == e.point)) {
        let parts: Vec<String> = p.point.iter().map(|x| x.to_string()).collect();
        return Err(HwError::SharedPoint(format!("({})", parts.join(","))));
    }
    let mut data = a.evaluation_data.clone();
    data.extend(b.evaluation_data.iter().cloned());
    data.sort_by(|x, y| x.point.cmp(&y.point));
    Ok(Psi {
        weight: a.weight.add(&b.weight),
        evaluation_data: data,
        annihilating_ideal: a.annihilating_ideal.intersect(&b.annihilating_ideal)?,
    })
}

/// A map `Δ⁺ → cofinite ideals`, indexed like the roots of `table`.
#[derive(Debug, Clone)]
pub struct IdealSequence {
    pub table: Arc<RootSystemTable>,
    pub entries: Vec<CofiniteIdeal>,
    pub envelope: CofiniteIdeal,
}

impl IdealSequence {
    pub fn entry(&self, coords: &[u32]) -> Option<&CofiniteIdeal> {
        self.table.index_of(coords).map(|k| &self.entries[k])
    }

    pub fn codims(&self) -> Result<Vec<u64>, CommError> {
        self.entries.iter().map(|i| i.codim()).collect()
    }
}

pub fn standard_sequence(
    lambda: &Weight,
    ideal: &CofiniteIdeal,
    table: Arc<RootSystemTable>,
) -> Result<IdealSequence, HwError> {
    let entries: Result<Vec<_>, HwError> =
        table.roots.iter().map(|r| Ok(ideal.power(n_lambda_alpha(lambda, r)?)?)).collect();
    Ok(IdealSequence { entries: entries?, envelope: ideal.clone(), table })
}

pub fn k_sequence(
    lambda: &Weight,
    i: &CofiniteIdeal,
    mu: &Weight,
    j: &CofiniteIdeal,
    table: Arc<RootSystemTable>,
) -> Result<IdealSequence, HwError> {
    if !i.coprime(j)? {
        let shared = i.points()?.keys().find(|p| j.points().map(|m| m.contains_key(*p)).unwrap_or(false));
        let label = shared.map(|p| format!("{p:?}")).unwrap_or_default();
        return Err(CommError::NotCoprime(label).into());
    }
    let mut entries = Vec::with_capacity(table.len());
    for r in &table.roots {
        let a = i.power(n_lambda_alpha(lambda, r)?)?;
        let b = j.power(n_lambda_alpha(mu, r)?)?;
        entries.push(a.intersect(&b)?);
    }
    Ok(IdealSequence { entries, envelope: i.intersect(j)?, table })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub condition: &'static str,
    pub alpha: Eta,
    pub beta: Option<Eta>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SequenceReport {
    pub pass: bool,
    pub violations: Vec<Violation>,
}

/// Checks monotonicity `α ≤ β ⇒ I_β ⊆ I_α`, multiplicativity `I_α I_β ⊆ I_{α+β}`
/// and containment in the envelope. Unit entries (`N = 0`) are exempt from the
/// envelope check.
pub fn validate_sequence(seq: &IdealSequence) -> Result<SequenceReport, CommError> {
    let roots = &seq.table.roots;
    let mut violations = Vec::new();
    for (a, ra) in roots.iter().enumerate() {
        let ia = &seq.entries[a];
        if !ia.is_unit() && !ia.contained_in(&seq.envelope)? {
            violations.push(Violation { condition: "envelope", alpha: ra.coords.clone(), beta: None });
        }
        for (b, rb) in roots.iter().enumerate() {
            let ib = &seq.entries[b];
            if a != b && eta_leq(&ra.coords, &rb.coords) && !ib.contained_in(ia)? {
                violations.push(Violation {
                    condition: "monotone",
                    alpha: ra.coords.clone(),
                    beta: Some(rb.coords.clone()),
                });
            }
            if a <= b {
                let sum: Eta = ra.coords.iter().zip(&rb.coords).map(|(x, y)| x + y).collect();
                if let Some(s) = seq.table.index_of(&sum) {
                    if !ia.product(ib)?.contained_in(&seq.entries[s])? {
                        violations.push(Violation {
                            condition: "multiplicative",
                            alpha: ra.coords.clone(),
                            beta: Some(rb.coords.clone()),
                        });
                    }
                }
            }
        }
    }
    Ok(SequenceReport { pass: violations.is_empty(), violations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::{positive_roots, Gcm};

    fn table(name: &str, h: u32) -> Arc<RootSystemTable> {
        Arc::new(positive_roots(&Gcm::named(name).unwrap(), h).unwrap())
    }

    #[test]
    fn n_lambda_examples() {
        let t = table("A2", 3);
        let top = t.get(&[1, 1]).unwrap();
        assert_eq!(n_lambda_alpha(&Weight::new(vec![1, 1]), top), Ok(2));
        assert_eq!(n_lambda_alpha(&Weight::new(vec![0, 2]), t.get(&[1, 0]).unwrap()), Ok(0));
        let a1 = table("A1", 1);
        assert_eq!(n_lambda_alpha(&Weight::new(vec![3]), &a1.roots[0]), Ok(3));
        assert!(matches!(n_lambda_alpha(&Weight::new(vec![-1, 0]), top), Err(HwError::NotDominant(_))));
    }

    #[test]
    fn standard_and_k_sequences() {
        let a1 = table("A1", 1);
        let s = standard_sequence(&Weight::new(vec![2]), &CofiniteIdeal::at(0, 1), a1.clone()).unwrap();
        assert_eq!(s.entries[0], CofiniteIdeal::at(0, 2));
        assert_eq!(s.codims().unwrap(), vec![2]);
        let z = standard_sequence(&Weight::new(vec![0]), &CofiniteIdeal::at(0, 1), a1.clone()).unwrap();
        assert!(z.entries[0].is_unit());

        let a2 = table("A2", 3);
        let s = standard_sequence(&Weight::new(vec![1, 1]), &CofiniteIdeal::at(0, 1), a2.clone()).unwrap();
        assert_eq!(s.entry(&[1, 0]).unwrap().codim(), Ok(1));
        assert_eq!(s.entry(&[1, 1]).unwrap().codim(), Ok(2));
        assert!(validate_sequence(&s).unwrap().pass);

        let k = k_sequence(
            &Weight::new(vec![1]),
            &CofiniteIdeal::at(0, 1),
            &Weight::new(vec![1]),
            &CofiniteIdeal::at(1, 1),
            a1.clone(),
        )
        .unwrap();
        assert_eq!(k.entries[0].codim(), Ok(2));
        let k0 = k_sequence(
            &Weight::new(vec![2]),
            &CofiniteIdeal::at(0, 1),
            &Weight::new(vec![0]),
            &CofiniteIdeal::at(1, 1),
            a1.clone(),
        )
        .unwrap();
        assert_eq!(k0.entries[0], CofiniteIdeal::at(0, 2));
        let k2 = k_sequence(
            &Weight::new(vec![1, 1]),
            &CofiniteIdeal::at(0, 1),
            &Weight::new(vec![1, 1]),
            &CofiniteIdeal::at(1, 1),
            a2,
        )
        .unwrap();
        assert_eq!(k2.entry(&[1, 1]).unwrap().codim(), Ok(4));
        assert!(validate_sequence(&k2).unwrap().pass);
        assert!(k_sequence(
            &Weight::new(vec![1]),
            &CofiniteIdeal::at(0, 1),
            &Weight::new(vec![1]),
            &CofiniteIdeal::at(0, 1),
            a1
        )
        .is_err());
    }

    #[test]
    fn reversed_sequence_fails() {
        let a2 = table("A2", 3);
        let mut s = standard_sequence(&Weight::new(vec![1, 1]), &CofiniteIdeal::at(0, 1), a2).unwrap();
        let top = s.table.index_of(&[1, 1]).unwrap();
        let low = s.table.index_of(&[1, 0]).unwrap();
        s.entries.swap(top, low);
        let rep = validate_sequence(&s).unwrap();
        assert!(!rep.pass);
        assert!(rep.violations.iter().any(|v| v.condition == "monotone" && v.alpha == vec![1, 0]));
    }

    #[test]
    fn psi_examples() {
        let p0 = Psi::single(vec![Q::zero()], Weight::new(vec![1]), CofiniteIdeal::at(0, 2));
        assert!(psi_consistency(&p0));
        let bad = Psi::single(vec![Q::one()], Weight::new(vec![1]), CofiniteIdeal::at(0, 1));
        assert!(!psi_consistency(&bad));
        let a = Psi::single(vec![Q::zero()], Weight::new(vec![1]), CofiniteIdeal::at(0, 1));
        let b = Psi::single(vec![Q::one()], Weight::new(vec![1]), CofiniteIdeal::at(1, 1));
        let s = psi_add(&a, &b).unwrap();
        assert_eq!(s.weight, Weight::new(vec![2]));
        assert_eq!(s.annihilating_ideal.codim(), Ok(2));
        assert!(psi_consistency(&s));
        assert_eq!(psi_add(&a, &Psi::zero(1, 1)).unwrap(), a);
        assert!(matches!(psi_add(&a, &a), Err(HwError::SharedPoint(_))));
        let c = Psi::single(vec![Q::from_int(2)], Weight::new(vec![1]), CofiniteIdeal::at(2, 1));
        let three = psi_add(&s, &c).unwrap();
        assert_eq!(three.weight, Weight::new(vec![3]));
        assert_eq!(three.annihilating_ideal.codim(), Ok(3));
        assert_eq!(psi_add(&b, &a).unwrap(), s);
    }
}

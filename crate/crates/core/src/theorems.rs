//! End-to-end checks of the tensor product decompositions on concrete instances.
//!
//! Isomorphisms are checked as equality of graded dimensions together with the
//! relation checks on the highest-weight vectors; no intertwiner is built.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::charcalc::{compare_T1, CharError, T1DimReport};
use crate::commalg::{bezout_witness, CofiniteIdeal, CommError};
use crate::hwdata::{k_sequence, n_lambda_alpha, psi_add, standard_sequence, EvalPoint, HwError, IdealSequence, Psi, Weight};
use crate::linalg::SparseVec;
use crate::modeng::{
    act_element, build_M, build_M_with_entries, build_W, cyclic_span, evaluation_module, map_algebra,
    tensor_module, verify_lemma_l1, weyl_relation_audit, ActResult, BuildOptions, DimRow, GradedModule, ModError,
    ModuleState, TensorModule,
};
use crate::rootsys::{positive_roots, CartanType, Gcm, RootError, RootSystemTable};
use crate::{height, Eta, Q};

#[derive(Debug, thiserror::Error)]
pub enum CheckError {
    #[error(transparent)]
    Mod(#[from] ModError),
    #[error(transparent)]
    Char(#[from] CharError),
    #[error(transparent)]
    Hw(#[from] HwError),
    #[error(transparent)]
    Comm(#[from] CommError),
    #[error(transparent)]
    Root(#[from] RootError),
    #[error("invalid instance: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub eta: Eta,
    pub height: u32,
    pub value: i128,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Table {
    pub label: String,
    pub rows: Vec<TableRow>,
}

impl Table {
    fn from_dims(label: &str, dims: &[DimRow]) -> Table {
        Table {
            label: label.into(),
            rows: dims.iter().map(|r| TableRow { eta: r.eta.clone(), height: r.height, value: r.dim as i128 }).collect(),
        }
    }

    fn from_chars(label: &str, rows: &[crate::charcalc::CharRow]) -> Table {
        Table {
            label: label.into(),
            rows: rows.iter().map(|r| TableRow { eta: r.eta.clone(), height: r.height, value: r.value }).collect(),
        }
    }

    pub fn total(&self) -> i128 {
        self.rows.iter().map(|r| r.value).sum()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub tables: Vec<Table>,
    pub discrepancy: Option<Value>,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub details: Value,
}

impl Check {
    fn new(name: &str, pass: bool) -> Check {
        Check {
            name: name.into(),
            status: if pass { Status::Pass } else { Status::Fail },
            tables: Vec::new(),
            discrepancy: None,
            details: Value::Null,
        }
    }

    fn skipped(name: &str, why: &str) -> Check {
        Check { status: Status::Skipped, details: json!({ "reason": why }), ..Check::new(name, true) }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub instance: Value,
    pub checks: Vec<Check>,
    /// Wall-clock time; excluded from the serialized report.
    #[serde(skip)]
    pub elapsed_ms: u128,
}

impl VerificationReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    /// Stable JSON (no timing).
    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

/// Wall clock where available; `wasm32-unknown-unknown` has none.
struct Instant(#[cfg(not(target_arch = "wasm32"))] std::time::Instant);

impl Instant {
    fn now() -> Instant {
        #[cfg(not(target_arch = "wasm32"))]
        return Instant(std::time::Instant::now());
        #[cfg(target_arch = "wasm32")]
        return Instant();
    }

    fn elapsed_ms(&self) -> u128 {
        #[cfg(not(target_arch = "wasm32"))]
        return self.0.elapsed().as_millis();
        #[cfg(target_arch = "wasm32")]
        return 0;
    }
}

/// Caps for brute-force module construction.
pub const BRUTE_MAX_RANK: usize = 2;
pub const BRUTE_MAX_DIM_B: usize = 6;
pub const BRUTE_MAX_HEIGHT: u32 = 6;

fn point_of(i: &CofiniteIdeal) -> Result<Vec<Q>, CheckError> {
    let pts = i.points()?;
    if pts.len() != 1 {
        return Err(CheckError::Invalid(format!("{i} is not supported at a single point")));
    }
    Ok(pts.keys().next().unwrap().clone())
}

/// `max(1, max_α N_{λ,α})` over a finite-type root system.
fn max_n(lambda: &Weight, gcm: &Gcm) -> Result<u32, CheckError> {
    max_n_table(lambda, &positive_roots(gcm, 64)?)
}

fn max_n_table(lambda: &Weight, table: &RootSystemTable) -> Result<u32, CheckError> {
    let mut n = 1;
    for r in &table.roots {
        n = n.max(n_lambda_alpha(lambda, r)?);
    }
    Ok(n)
}

fn first_dim_difference(a: &[DimRow], b: &[DimRow]) -> Option<Value> {
    a.iter()
        .zip(b)
        .find(|(x, y)| x.dim != y.dim)
        .map(|(x, y)| json!({ "eta": x.eta, "height": x.height, "lhs": x.dim, "rhs": y.dim }))
}

fn psi_single(i: &CofiniteIdeal, lambda: &Weight) -> Result<Psi, CheckError> {
    Ok(Psi::single(point_of(i)?, lambda.clone(), i.clone()))
}

fn ideal_desc(i: &CofiniteIdeal) -> Value {
    serde_json::to_value(i).unwrap_or(Value::Null)
}

fn brute_ok(gcm: &Gcm, h: u32, dim_b: usize) -> Result<(), String> {
    if gcm.kind() != CartanType::Finite || gcm.rank() > BRUTE_MAX_RANK {
        return Err(format!("brute force is limited to finite type of rank ≤ {BRUTE_MAX_RANK}"));
    }
    if h > BRUTE_MAX_HEIGHT {
        return Err(format!("brute force is limited to height ≤ {BRUTE_MAX_HEIGHT}"));
    }
    if dim_b > BRUTE_MAX_DIM_B {
        return Err(format!("coefficient algebra of dimension {dim_b} exceeds {BRUTE_MAX_DIM_B}"));
    }
    Ok(())
}

#[derive(Debug, Clone, Default)]
pub struct T1Options {
    pub brute_force: bool,
    /// Replace the `K_α` entry of this root by a strictly smaller ideal.
    pub seeded_violation: Option<usize>,
}

/// `M(ψ₁+ψ₂, {K_α}) ≅ M(ψ₁, I) ⊗ M(ψ₂, J)`.
#[allow(non_snake_case)]
pub fn check_T1(
    gcm: &Gcm,
    lambda: &Weight,
    i: &CofiniteIdeal,
    mu: &Weight,
    j: &CofiniteIdeal,
    h: u32,
    opts: &T1Options,
) -> Result<VerificationReport, CheckError> {
    let start = Instant::now();
    let table = Arc::new(positive_roots(gcm, h)?);
    let s1 = standard_sequence(lambda, i, table.clone())?;
    let s2 = standard_sequence(mu, j, table.clone())?;
    let mut k = k_sequence(lambda, i, mu, j, table.clone())?;
    let (nl, nm) = if gcm.kind() == CartanType::Finite {
        (max_n(lambda, gcm)?, max_n(mu, gcm)?)
    } else {
        (max_n_table(lambda, &table)?, max_n_table(mu, &table)?)
    };
    let big1 = i.power(nl)?;
    let big2 = j.power(nm)?;
    let mut coeff_k = big1.intersect(&big2)?;
    if let Some(r) = opts.seeded_violation {
        if r >= k.entries.len() {
            return Err(CheckError::Invalid(format!("no root with index {r}")));
        }
        coeff_k = i.power(nl + 1)?.intersect(&j.power(nm + 1)?)?;
        k.entries[r] = coeff_k.clone();
    }
    let mut instance = json!({
        "gcm": gcm,
        "lambda": lambda,
        "I": ideal_desc(i),
        "mu": mu,
        "J": ideal_desc(j),
        "height": h,
    });
    if let Some(r) = opts.seeded_violation {
        instance["seeded_violation"] = json!(table.roots[r].coords);
    }
    let mut checks = Vec::new();

    let formula: T1DimReport = compare_T1(lambda, &s1, mu, &s2, &k, h)?;
    let mut c = Check::new("formula", formula.pass);
    c.tables = vec![Table::from_chars("lhs", &formula.lhs), Table::from_chars("rhs", &formula.rhs)];
    c.discrepancy = match (&formula.codim_failure, &formula.first_discrepancy) {
        (Some(a), _) => Some(json!({ "codim_alpha": a })),
        (None, Some(d)) => Some(json!({ "eta": d.eta, "height": height(&d.eta), "lhs": d.lhs, "rhs": d.rhs })),
        _ => None,
    };
    c.details = json!({ "codims": formula.codims });
    checks.push(c);

    if opts.brute_force {
        let dim_b = coeff_k.codim()? as usize;
        match brute_ok(gcm, h, dim_b) {
            Err(why) => checks.push(Check::skipped("brute_force", &why)),
            Ok(()) => {
                let psi1 = psi_single(i, lambda)?;
                let psi2 = psi_single(j, mu)?;
                let psi = psi_add(&psi1, &psi2)?;
                let alg_k = map_algebra(gcm, &coeff_k)?;
                let full = alg_k.g.table.clone();
                let mut kf = k_sequence(lambda, i, mu, j, full.clone())?;
                if let Some(r) = opts.seeded_violation {
                    kf.entries[full.index_of(&table.roots[r].coords).unwrap()] = coeff_k.clone();
                }
                let s1f = standard_sequence(lambda, i, full.clone())?;
                let s2f = standard_sequence(mu, j, full.clone())?;
                let opts_b = BuildOptions::default();
                let lhs = build_M_with_entries(alg_k.clone(), &psi, kf.entries, h, &opts_b)?;
                let m1 = build_M(map_algebra(gcm, &big1)?, &psi1, Some(&s1f), h, &opts_b)?;
                let m2 = build_M(map_algebra(gcm, &big2)?, &psi2, Some(&s2f), h, &opts_b)?;
                let t = tensor_module(Arc::new(m1), Arc::new(m2))?;
                let (dl, dr) = (lhs.dims(), t.dims());
                let disc = first_dim_difference(&dl, &dr);
                let mut c = Check::new("brute_force", disc.is_none());
                c.tables = vec![Table::from_dims("M(psi1+psi2, K)", &dl), Table::from_dims("M(psi1, I) x M(psi2, J)", &dr)];
                c.discrepancy = disc;
                checks.push(c);

                let k_true = k_sequence(lambda, i, mu, j, full)?;
                let (ok, n) = surjection_relations(&t, &k_true)?;
                let mut c = Check::new("surjection_relations", ok);
                c.details = json!({ "vectors_checked": n });
                checks.push(c);
            }
        }
    }
    Ok(VerificationReport { instance, checks, elapsed_ms: start.elapsed_ms() })
}

/// `(X_{−α} ⊗ K_α)(v₁⊗v₂) = 0` for every root within the height bound.
fn surjection_relations(t: &TensorModule, k: &IdealSequence) -> Result<(bool, usize), CheckError> {
    let alg = t.algebra().clone();
    let zero = vec![0; alg.g.rank()];
    let v: SparseVec = vec![(0, Q::one())];
    let mut n = 0;
    for (r, root) in alg.g.table.roots.iter().enumerate() {
        if root.height > t.height_bound() {
            continue;
        }
        let ideal = k.entry(&root.coords).ok_or_else(|| CheckError::Invalid("K sequence misses a root".into()))?;
        for c in alg.b.ideal_image(ideal)? {
            n += 1;
            if act_element(t, &alg.element(alg.g.neg(r), &c), &zero, &v)? != ActResult::Zero {
                return Ok((false, n));
            }
        }
    }
    Ok((true, n))
}

fn weyl_at(gcm: &Gcm, psi: &Psi, lambda: &Weight, ideal: &CofiniteIdeal, h: u32) -> Result<ModuleState, CheckError> {
    let n = max_n(lambda, gcm)?;
    let b = ideal.power(n)?;
    Ok(build_W(map_algebra(gcm, &b)?, psi, ideal, h, &BuildOptions::default())?)
}

fn mono_apply(st: &mut ModuleState, word: &[crate::modeng::Element]) -> Result<Option<(Eta, SparseVec)>, ModError> {
    let v = st.vacuum();
    st.apply_word(word, v)
}

/// `W(ψ₁+ψ₂, I∩J) ≅ W(ψ₁, I) ⊗ W(ψ₂, J)` with the ladder of the proof replayed.
pub fn check_tw(
    gcm: &Gcm,
    lambda: &Weight,
    i: &CofiniteIdeal,
    mu: &Weight,
    j: &CofiniteIdeal,
    h: u32,
) -> Result<VerificationReport, CheckError> {
    let start = Instant::now();
    lambda.ensure_dominant()?;
    mu.ensure_dominant()?;
    if !i.coprime(j)? {
        return Err(CommError::NotCoprime(format!("{i} and {j}")).into());
    }
    let instance = json!({ "gcm": gcm, "lambda": lambda, "I": ideal_desc(i), "mu": mu, "J": ideal_desc(j), "height": h });
    let psi1 = psi_single(i, lambda)?;
    let psi2 = psi_single(j, mu)?;
    let psi = psi_add(&psi1, &psi2)?;
    let ij = i.intersect(j)?;
    let lm = lambda.add(mu);
    let mut checks = Vec::new();

    let mut wl = weyl_at(gcm, &psi, &lm, &ij, h)?;
    // the tensor holds shared copies; the ladder extends its own copies lazily
    let w1 = weyl_at(gcm, &psi1, lambda, i, h)?;
    let w2 = weyl_at(gcm, &psi2, mu, j, h)?;
    let (dims1, dims2) = (w1.dims(), w2.dims());
    let t = tensor_module(Arc::new(w1), Arc::new(w2))?;
    let mut w1_ladder = weyl_at(gcm, &psi1, lambda, i, h)?;
    let mut w2 = weyl_at(gcm, &psi2, mu, j, h)?;

    let (dl, dr) = (wl.dims(), t.dims());
    let disc = first_dim_difference(&dl, &dr);
    let mut c = Check::new("graded_dimensions", disc.is_none());
    c.tables = vec![
        Table::from_dims("W(psi1+psi2, I∩J)", &dl),
        Table::from_dims("W(psi1, I) x W(psi2, J)", &dr),
        Table::from_dims("W(psi1, I)", &dims1),
        Table::from_dims("W(psi2, J)", &dims2),
    ];
    c.discrepancy = disc;
    c.details = json!({ "total_lhs": wl.total_dim(), "total_rhs": t.total_dim() });
    checks.push(c);

    let cyc = cyclic_span(&t)?;
    let mut c = Check::new("tensor_cyclic", cyc.pass);
    c.details = serde_json::to_value(&cyc).unwrap();
    checks.push(c);

    // Bezout pair f ∈ I^N, g ∈ J^N with f + g = 1.
    let n = max_n(&lm, gcm)?;
    let (f, g) = bezout_witness(i, j, n)?;
    let l = gcm.rank();
    let mut ladder = Vec::new();
    let mut ladder_ok = true;
    for a in 0..l {
        let lam_i = lambda.coroot_values[a];
        let mu_i = mu.coroot_values[a];
        // (a) (X_{−α_i} ⊗ f)^{(λ+μ)_i+1} v = 0 in W(ψ₁+ψ₂, I∩J)
        let alg = wl.algebra().clone();
        let xf = alg.element(alg.g.f(a), &alg.b.coords(&f)?);
        let m = (lam_i + mu_i + 1) as usize;
        let a_ok = match mono_apply(&mut wl, &vec![xf; m])? {
            Some((e, w)) => wl.in_closure(&e, &w)?,
            None => true,
        };
        // (b) f kills v₁, g kills v₂
        let a1 = w1_ladder.algebra().clone();
        let a2 = w2.algebra().clone();
        let b1 = match mono_apply(&mut w1_ladder, &[a1.element(a1.g.f(a), &a1.b.coords(&f)?)])? {
            Some((e, w)) => w1_ladder.in_closure(&e, &w)?,
            None => true,
        };
        let b2 = match mono_apply(&mut w2, &[a2.element(a2.g.f(a), &a2.b.coords(&g)?)])? {
            Some((e, w)) => w2.in_closure(&e, &w)?,
            None => true,
        };
        // (c) n₀ = γ_i + 1 is the least power killing the highest vector on each side
        let (c2, n2) = ladder_side(&mut w2, a, mu_i)?;
        let (c1, n1) = ladder_side(&mut w1_ladder, a, lam_i)?;
        ladder_ok &= a_ok && b1 && b2 && c1 && c2;
        ladder.push(json!({
            "i": a + 1,
            "power_relation_in_lhs": a_ok,
            "f_kills_v1": b1,
            "g_kills_v2": b2,
            "n0_lambda": n1,
            "n0_mu": n2,
            "n0_minimal": c1 && c2,
        }));
    }
    let mut c = Check::new("ladder", ladder_ok);
    c.details = json!({ "N": n, "f": f.to_string(), "g": g.to_string(), "steps": ladder });
    checks.push(c);

    Ok(VerificationReport { instance, checks, elapsed_ms: start.elapsed_ms() })
}

/// Checks that `(X_{−α_i}⊗1)^{γ+1} v` vanishes, `(X_{−α_i}⊗1)^γ v` does not, and that
/// `e f^{n₀} v = n₀(γ − n₀ + 1) f^{n₀−1} v` holds in the induced module.
fn ladder_side(st: &mut ModuleState, a: usize, gamma: i64) -> Result<(bool, i64), CheckError> {
    let alg = st.algebra().clone();
    let f1 = alg.with_unit(alg.g.f(a));
    let e1 = alg.with_unit(alg.g.e(a));
    let n0 = gamma + 1;
    let kills = match mono_apply(st, &vec![f1.clone(); n0 as usize])? {
        Some((e, w)) => st.in_closure(&e, &w)?,
        None => true,
    };
    let below = match mono_apply(st, &vec![f1.clone(); (n0 - 1) as usize])? {
        Some((e, w)) => !st.in_closure(&e, &w)?,
        None => false,
    };
    let mut word = vec![e1];
    word.extend(vec![f1.clone(); n0 as usize]);
    let lhs = mono_apply(st, &word)?;
    let rhs = mono_apply(st, &vec![f1; (n0 - 1) as usize])?;
    let coeff = Q::from_int(n0 * (gamma - n0 + 1));
    let identity = match (lhs, rhs) {
        (Some((_, l)), Some((_, r))) => l == crate::linalg::scale(&r, &coeff),
        (None, _) => coeff.is_zero(),
        _ => false,
    };
    Ok((kills && below && identity, n0))
}

/// `W(ψ, ∩𝔪_i) ≅ ⊗ W(ψ_i, 𝔪_i)` for distinct points; evaluation module dims recorded.
pub fn check_max(gcm: &Gcm, points: &[(Vec<Q>, Weight)], h: u32) -> Result<VerificationReport, CheckError> {
    let start = Instant::now();
    if points.is_empty() {
        return Err(CheckError::Invalid("at least one point is required".into()));
    }
    let nv = points[0].0.len();
    let instance = json!({
        "gcm": gcm,
        "points": points.iter().map(|(p, w)| json!({ "point": p, "lambda": w })).collect::<Vec<_>>(),
        "height": h,
    });
    let mut ideal = CofiniteIdeal::unit(nv);
    let mut data = Vec::new();
    for (p, w) in points {
        w.ensure_dominant()?;
        if data.iter().any(|e: &EvalPoint| &e.point == p) {
            return Err(ModError::DuplicatePoint(format!("{p:?}")).into());
        }
        ideal = ideal.intersect(&CofiniteIdeal::point_power(p.clone(), 1))?;
        data.push(EvalPoint { point: p.clone(), weight: w.clone() });
    }
    let psi = Psi::new(data, ideal.clone(), gcm.rank());
    let mut checks = Vec::new();

    let w = weyl_at(gcm, &psi, &psi.weight, &ideal, h)?;
    let mut acc: Option<Arc<dyn GradedModule>> = None;
    for (p, lam) in points {
        let m = CofiniteIdeal::point_power(p.clone(), 1);
        let wi: Arc<dyn GradedModule> = Arc::new(weyl_at(gcm, &Psi::single(p.clone(), lam.clone(), m.clone()), lam, &m, h)?);
        acc = Some(match acc {
            None => wi,
            Some(a) => Arc::new(tensor_module(a, wi)?),
        });
    }
    let t = acc.unwrap();
    let (dl, dr) = (w.dims(), t.dims());
    let disc = first_dim_difference(&dl, &dr);
    let mut c = Check::new("graded_dimensions", disc.is_none());
    c.tables = vec![Table::from_dims("W(psi, I)", &dl), Table::from_dims("tensor of local Weyl modules", &dr)];
    c.discrepancy = disc;
    c.details = json!({ "total_lhs": w.total_dim(), "total_rhs": t.total_dim() });
    checks.push(c);

    let ev = evaluation_module(gcm, &psi, h)?;
    let audit = weyl_relation_audit(ev.as_ref(), &psi, &ideal)?;
    let mut c = Check::new("evaluation_module_relations", audit.pass);
    c.tables = vec![Table::from_dims("evaluation module", &ev.dims())];
    c.details = json!({
        "relations": audit.checks,
        "total_evaluation": ev.total_dim(),
        "total_weyl": w.total_dim(),
        "equal_totals": ev.total_dim() == w.total_dim(),
    });
    checks.push(c);
    Ok(VerificationReport { instance, checks, elapsed_ms: start.elapsed_ms() })
}

/// `(X_{−α_i} ⊗ f)^{λ(α_i^∨)+1} v` lies in the relation closure of a Weyl module.
pub fn check_remark_nilpotency(st: &mut ModuleState, i: usize, f: &SparseVec) -> Result<bool, CheckError> {
    let alg = st.algebra().clone();
    let p = st.psi().weight.coroot_values[i] as usize + 1;
    let x = alg.element(alg.g.f(i), f);
    Ok(match mono_apply(st, &vec![x; p])? {
        Some((e, w)) => st.in_closure(&e, &w)?,
        None => true,
    })
}

/// A randomized formula-level instance for [`check_T1`].
#[derive(Debug, Clone, Serialize)]
pub struct T1Instance {
    pub gcm: Gcm,
    pub lambda: Weight,
    pub i: CofiniteIdeal,
    pub mu: Weight,
    pub j: CofiniteIdeal,
}

/// Random coprime single-variable point ideals and small dominant weights.
pub fn random_t1_instances(gcm: &Gcm, count: usize, seed: u64) -> Vec<T1Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let l = gcm.rank();
    (0..count)
        .map(|_| {
            let p = rng.gen_range(-3i64..=3);
            let mut q = rng.gen_range(-3i64..=3);
            if q == p {
                q = p + 1 + rng.gen_range(0..3);
            }
            let lambda = Weight::new((0..l).map(|_| rng.gen_range(0..=2)).collect());
            let mu = Weight::new((0..l).map(|_| rng.gen_range(0..=2)).collect());
            T1Instance {
                gcm: gcm.clone(),
                lambda,
                i: CofiniteIdeal::at(p, rng.gen_range(1..=2)),
                mu,
                j: CofiniteIdeal::at(q, rng.gen_range(1..=2)),
            }
        })
        .collect()
}

/// A generated instance of the vanishing lemma in `M(ψ, I)`.
#[derive(Debug, Clone, Serialize)]
pub struct L1Instance {
    pub gcm: String,
    pub lambda: Vec<i64>,
    pub ideal_exp: u32,
    pub beta: Eta,
    pub gammas: Vec<Eta>,
    pub coeffs: Vec<SparseVec>,
}

/// Generates instances over A1 and A2 with `I = (t)^a`, including `n = 0`.
pub fn random_l1_instances(count: usize, seed: u64) -> Vec<L1Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for k in 0..count {
        let (name, lambda): (&str, Vec<i64>) = if k % 2 == 0 {
            ("A1", vec![rng.gen_range(1..=2)])
        } else {
            ("A2", vec![rng.gen_range(0..=1), rng.gen_range(1..=1)])
        };
        let gcm = Gcm::named(name).unwrap();
        let table = positive_roots(&gcm, 3).unwrap();
        let beta = table.roots[rng.gen_range(0..table.len())].coords.clone();
        let below: Vec<Eta> =
            table.roots.iter().filter(|r| crate::rootsys::eta_leq(&r.coords, &beta)).map(|r| r.coords.clone()).collect();
        let n = if k < 4 { 0 } else { rng.gen_range(0..=2) };
        let ideal_exp = 1;
        let bdim = {
            let lam = Weight::new(lambda.clone());
            let mx = table.roots.iter().map(|r| n_lambda_alpha(&lam, r).unwrap()).max().unwrap().max(1);
            mx * ideal_exp
        } as usize;
        let gammas: Vec<Eta> = (0..n).map(|_| below[rng.gen_range(0..below.len())].clone()).collect();
        let coeffs: Vec<SparseVec> = (0..n)
            .map(|_| {
                let mut v: SparseVec = Vec::new();
                for c in 0..bdim {
                    let x = rng.gen_range(-2i64..=2);
                    if x != 0 {
                        v.push((c, Q::from_int(x)));
                    }
                }
                if v.is_empty() {
                    v.push((0, Q::one()));
                }
                v
            })
            .collect();
        out.push(L1Instance { gcm: name.into(), lambda, ideal_exp, beta, gammas, coeffs });
    }
    out
}

/// Runs [`verify_lemma_l1`] on each instance inside `M(ψ, I^{N_{λ,α}})` over `A/I^{max N}`.
pub fn check_l1(instances: &[L1Instance], h: u32) -> Result<VerificationReport, CheckError> {
    let start = Instant::now();
    let mut checks = Vec::new();
    for (k, inst) in instances.iter().enumerate() {
        let gcm = Gcm::named(&inst.gcm)?;
        let lam = Weight::new(inst.lambda.clone());
        let ideal = CofiniteIdeal::at(0, inst.ideal_exp);
        let n = max_n(&lam, &gcm)?;
        let b = ideal.power(n)?;
        let alg = map_algebra(&gcm, &b)?;
        let seq = standard_sequence(&lam, &ideal, alg.g.table.clone())?;
        let psi = Psi::single(vec![Q::zero()], lam, b);
        let hh = h.max(height(&inst.beta) + inst.gammas.iter().map(|g| height(g)).sum::<u32>());
        let mut st = build_M(alg, &psi, Some(&seq), hh, &BuildOptions::default())?;
        let ok = verify_lemma_l1(&mut st, &inst.beta, &inst.gammas, &inst.coeffs)?;
        let mut c = Check::new(&format!("instance_{k}"), ok);
        c.details = serde_json::to_value(inst).unwrap();
        checks.push(c);
    }
    Ok(VerificationReport {
        instance: json!({ "count": instances.len() }),
        checks,
        elapsed_ms: start.elapsed_ms(),
    })
}

/// `(X_{−α_i} ⊗ f)^{λ_i+1} v = 0` in `W(ψ, I)` for every simple root and every basis element `f` of `B`.
pub fn check_remark(gcm: &Gcm, lambda: &Weight, ideal: &CofiniteIdeal, h: u32) -> Result<VerificationReport, CheckError> {
    let start = Instant::now();
    let psi = psi_single(ideal, lambda)?;
    let mut st = weyl_at(gcm, &psi, lambda, ideal, h)?;
    let dim_b = st.algebra().dim_b();
    let mut checks = Vec::new();
    for i in 0..gcm.rank() {
        for b in 0..dim_b {
            let ok = check_remark_nilpotency(&mut st, i, &vec![(b, Q::one())])?;
            checks.push(Check::new(&format!("alpha_{}_basis_{b}", i + 1), ok));
        }
    }
    Ok(VerificationReport {
        instance: json!({ "gcm": gcm, "lambda": lambda, "I": ideal_desc(ideal), "height": h }),
        checks,
        elapsed_ms: start.elapsed_ms(),
    })
}

/// `f + g = 1`, `f ∈ I^N`, `g ∈ J^N` and `codim(I ∩ J) = codim I + codim J` on
/// random coprime point-ideal pairs in one or two variables.
pub fn bezout_suite(count: usize, max_n: u32, seed: u64) -> Result<Check, CheckError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for k in 0..count {
        let nv = 1 + k % 2;
        let pt = |rng: &mut ChaCha8Rng| -> Vec<Q> { (0..nv).map(|_| Q::from_int(rng.gen_range(-3..=3))).collect() };
        let p = pt(&mut rng);
        let mut q = pt(&mut rng);
        while q == p {
            q = pt(&mut rng);
        }
        let i = CofiniteIdeal::point_power(p, rng.gen_range(1..=2));
        let j = CofiniteIdeal::point_power(q, rng.gen_range(1..=2));
        let n = rng.gen_range(1..=max_n);
        let (f, g) = bezout_witness(&i, &j, n)?;
        let sum = &f + &g;
        let ok = sum == crate::poly::Poly::one(nv)
            && i.power(n)?.contains_poly(&f)?
            && j.power(n)?.contains_poly(&g)?
            && i.intersect(&j)?.codim()? == i.codim()? + j.codim()?;
        if !ok {
            failures.push(json!({ "I": ideal_desc(&i), "J": ideal_desc(&j), "N": n }));
        }
    }
    let mut c = Check::new("bezout_and_crt", failures.is_empty());
    c.details = json!({ "pairs": count });
    c.discrepancy = failures.into_iter().next();
    Ok(c)
}

/// Fixed module instances for the algebraic property checks.
pub fn property_modules() -> Result<Vec<(String, Arc<dyn GradedModule>)>, CheckError> {
    let mut out: Vec<(String, Arc<dyn GradedModule>)> = Vec::new();
    for (name, lam, a, h) in [("A1", vec![2], 1, 4), ("A2", vec![1, 1], 1, 3), ("B2", vec![0, 1], 1, 3), ("G2", vec![1, 0], 1, 2)] {
        let gcm = Gcm::named(name)?;
        let lam = Weight::new(lam);
        let ideal = CofiniteIdeal::at(0, a);
        let b = ideal.power(max_n(&lam, &gcm)?)?;
        let alg = map_algebra(&gcm, &b)?;
        let seq = standard_sequence(&lam, &ideal, alg.g.table.clone())?;
        let psi = Psi::single(vec![Q::zero()], lam.clone(), b);
        let st = build_M(alg, &psi, Some(&seq), h, &BuildOptions::default())?;
        out.push((format!("M({name}, {:?})", lam.coroot_values), Arc::new(st)));
    }
    let gcm = Gcm::named("A1")?;
    let (i, j) = (CofiniteIdeal::at(0, 1), CofiniteIdeal::at(1, 1));
    let w1 = weyl_at(&gcm, &psi_single(&i, &Weight::new(vec![2]))?, &Weight::new(vec![2]), &i, 4)?;
    let w2 = weyl_at(&gcm, &psi_single(&j, &Weight::new(vec![1]))?, &Weight::new(vec![1]), &j, 4)?;
    out.push(("W(A1, 2) x W(A1, 1)".into(), Arc::new(tensor_module(Arc::new(w1), Arc::new(w2))?)));
    Ok(out)
}

/// `[g₁, g₂]w = g₁(g₂w) − g₂(g₁w)` on random generator pairs and random vectors.
/// Triples whose intermediate weights leave the height bound are redrawn.
pub fn action_axiom_suite(modules: &[(String, Arc<dyn GradedModule>)], count: usize, seed: u64) -> Result<Check, CheckError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut done = 0;
    let mut draws = 0;
    let mut failure = None;
    while done < count && draws < count * 50 {
        draws += 1;
        let (name, m) = &modules[rng.gen_range(0..modules.len())];
        let alg = m.algebra().clone();
        let ng = alg.num_gens() as u32;
        let (g1, g2) = (rng.gen_range(0..ng), rng.gen_range(0..ng));
        let rows: Vec<DimRow> = m.dims().into_iter().filter(|r| r.dim > 0).collect();
        let row = &rows[rng.gen_range(0..rows.len())];
        let w: SparseVec = crate::linalg::normalize(
            (0..row.dim).map(|k| (k, Q::from_int(rng.gen_range(-3..=3)))).collect(),
        );
        if w.is_empty() {
            continue;
        }
        let eta = &row.eta;
        let twice = |a: u32, b: u32| -> Result<Option<ActResult>, ModError> {
            Ok(match m.act(b, eta, &w)? {
                ActResult::Vector(t, v) => match m.act(a, &t, &v)? {
                    ActResult::Beyond => None,
                    r => Some(r),
                },
                ActResult::Beyond => None,
                ActResult::Zero => Some(ActResult::Zero),
            })
        };
        let lhs = act_element(m.as_ref(), alg.bracket(g1, g2), eta, &w)?;
        let (Some(ab), Some(ba)) = (twice(g1, g2)?, twice(g2, g1)?) else { continue };
        if lhs == ActResult::Beyond {
            continue;
        }
        done += 1;
        let vec_of = |r: ActResult| match r {
            ActResult::Vector(_, v) => v,
            _ => Vec::new(),
        };
        let rhs = crate::linalg::axpy(&vec_of(ab), &Q::from_int(-1), &vec_of(ba));
        if vec_of(lhs) != rhs && failure.is_none() {
            failure = Some(json!({ "module": name, "g1": g1, "g2": g2, "eta": eta }));
        }
    }
    let mut c = Check::new("action_axiom", failure.is_none() && done == count);
    c.details = json!({ "triples": done, "draws": draws });
    c.discrepancy = failure;
    Ok(c)
}

/// Quotient dimensions agree under both PBW letter orders.
pub fn pbw_order_suite() -> Result<Check, CheckError> {
    let cases: [(&str, Vec<i64>, u32, u32); 10] = [
        ("A1", vec![1], 1, 4),
        ("A1", vec![2], 1, 5),
        ("A1", vec![3], 1, 4),
        ("A1", vec![2], 2, 3),
        ("A2", vec![1, 0], 1, 3),
        ("A2", vec![0, 1], 1, 3),
        ("A2", vec![1, 1], 1, 3),
        ("B2", vec![1, 0], 1, 3),
        ("B2", vec![0, 1], 1, 3),
        ("G2", vec![1, 0], 1, 2),
    ];
    let mut failure = None;
    for (name, lam, a, h) in cases.iter() {
        let gcm = Gcm::named(name)?;
        let lam = Weight::new(lam.clone());
        let ideal = CofiniteIdeal::at(0, *a);
        let b = ideal.power(max_n(&lam, &gcm)?)?;
        let mut dims = Vec::new();
        for order in [crate::modeng::PbwOrder::HeightAscending, crate::modeng::PbwOrder::HeightDescending] {
            let alg = map_algebra(&gcm, &b)?;
            let seq = standard_sequence(&lam, &ideal, alg.g.table.clone())?;
            let psi = Psi::single(vec![Q::zero()], lam.clone(), b.clone());
            let st = build_M(alg, &psi, Some(&seq), *h, &BuildOptions { order, ..BuildOptions::default() })?;
            dims.push(st.dims());
        }
        if dims[0] != dims[1] && failure.is_none() {
            failure = Some(json!({ "gcm": name, "lambda": lam, "a": a }));
        }
    }
    let mut c = Check::new("pbw_order_independence", failure.is_none());
    c.details = json!({ "instances": cases.len() });
    c.discrepancy = failure;
    Ok(c)
}

/// Randomized checks driven by one seed: Bezout/CRT identities, the action axiom
/// and formula-level product decompositions.
pub fn property_suite(seed: u64) -> Result<VerificationReport, CheckError> {
    let start = Instant::now();
    let mut checks = vec![bezout_suite(100, 4, seed)?];
    checks.push(action_axiom_suite(&property_modules()?, 1000, seed)?);
    let mut t1_fail = None;
    let mut n = 0;
    for name in ["A1", "A2", "B2"] {
        let g = Gcm::named(name)?;
        for inst in random_t1_instances(&g, 20, seed) {
            n += 1;
            let r = check_T1(&inst.gcm, &inst.lambda, &inst.i, &inst.mu, &inst.j, 4, &T1Options::default())?;
            if !r.pass() && t1_fail.is_none() {
                t1_fail = Some(serde_json::to_value(&inst).unwrap());
            }
        }
    }
    let mut c = Check::new("product_formula", t1_fail.is_none());
    c.details = json!({ "instances": n });
    c.discrepancy = t1_fail;
    checks.push(c);
    Ok(VerificationReport { instance: json!({ "seed": seed }), checks, elapsed_ms: start.elapsed_ms() })
}

//! Instance files and job dispatch shared by the command line and the browser demo.
//!
//! An instance is a JSON object. Which keys are read depends on the command:
//!
//! ```json
//! {
//!   "gcm": "A1",
//!   "lambda": [1],
//!   "ideal": {"points": [{"coords": [0], "exp": 1}]},
//!   "mu": [1],
//!   "J": {"points": [{"coords": [1], "exp": 1}]},
//!   "height": 4
//! }
//! ```
//!
//! `gcm` is either a type name (`"A2"`, `"B2"`, `"A1^(1)"`) or an object
//! `{"cartan_matrix": [[2,-1],[-1,2]], "type": "finite"}`.

use std::sync::Arc;

use serde::Deserialize;
use serde_json::{json, Value};

use crate::charcalc::{character_of_M, CharError};
use crate::commalg::{quotient_algebra, CofiniteIdeal, CommError};
use crate::hwdata::{standard_sequence, EvalPoint, HwError, Psi, Weight};
use crate::modeng::{build_M, build_W, map_algebra, BuildOptions, DimRow, ModError, PbwOrder};
use crate::rootsys::{positive_roots, Gcm, RootError};
use crate::theorems::{self, CheckError, T1Options, VerificationReport};
use crate::Q;

/// Largest height bound accepted for formula-level commands.
pub const HARD_MAX_HEIGHT: u32 = 60;
/// Largest height bound accepted for explicit module construction.
pub const HARD_MAX_MODULE_HEIGHT: u32 = 8;

#[derive(Debug, thiserror::Error)]
pub enum JobError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("resource cap: {0}")]
    Cap(String),
}

impl JobError {
    /// Process exit code for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            JobError::Invalid(_) => 2,
            JobError::Cap(_) => 3,
        }
    }
}

macro_rules! invalid_from {
    ($($t:ty),*) => {$(
        impl From<$t> for JobError {
            fn from(e: $t) -> Self {
                JobError::Invalid(e.to_string())
            }
        }
    )*};
}
invalid_from!(RootError, CommError, HwError, CharError, serde_json::Error);

impl From<ModError> for JobError {
    fn from(e: ModError) -> Self {
        match e {
            ModError::ResourceCap(_) => JobError::Cap(e.to_string()),
            other => JobError::Invalid(other.to_string()),
        }
    }
}

impl From<CheckError> for JobError {
    fn from(e: CheckError) -> Self {
        match e {
            CheckError::Mod(m) => m.into(),
            other => JobError::Invalid(other.to_string()),
        }
    }
}

#[derive(Debug, Clone)]
pub enum GcmSpec {
    Named(String),
    Matrix(Gcm),
}

impl<'de> Deserialize<'de> for GcmSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        match Value::deserialize(d)? {
            Value::String(s) => Ok(GcmSpec::Named(s)),
            v => Gcm::deserialize(v).map(GcmSpec::Matrix).map_err(D::Error::custom),
        }
    }
}

impl GcmSpec {
    pub fn resolve(&self) -> Result<Gcm, JobError> {
        match self {
            GcmSpec::Named(n) => Ok(Gcm::named(n)?),
            GcmSpec::Matrix(g) => Ok(g.clone()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
pub enum ModuleChoice {
    /// `M(ψ)` over `g ⊗ B`, no ideal sequence.
    #[serde(rename = "induced")]
    Induced,
    /// `M(ψ, I)` with the standard sequence.
    #[default]
    #[serde(rename = "M")]
    Truncated,
    /// `W(ψ, I)`.
    #[serde(rename = "W")]
    Weyl,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Instance {
    pub gcm: GcmSpec,
    #[serde(default)]
    pub lambda: Option<Weight>,
    /// Evaluation point for `lambda`; the support point of `ideal` by default.
    #[serde(default)]
    pub point: Option<Vec<Q>>,
    /// Explicit evaluation data, for `max` and multi-point modules.
    #[serde(default)]
    pub psi: Option<Vec<EvalPoint>>,
    #[serde(default)]
    pub ideal: Option<CofiniteIdeal>,
    #[serde(default)]
    pub mu: Option<Weight>,
    #[serde(default, rename = "J")]
    pub j: Option<CofiniteIdeal>,
    /// Ideal `I₀` defining the coefficient algebra `B = A/I₀`.
    #[serde(default, rename = "B")]
    pub b: Option<CofiniteIdeal>,
    #[serde(default)]
    pub height: Option<u32>,
    #[serde(default)]
    pub module: ModuleChoice,
    #[serde(default)]
    pub order: PbwOrder,
    #[serde(default)]
    pub brute_force: Option<bool>,
    /// Root whose `K_α` entry is perturbed in a T1 check (negative control).
    #[serde(default)]
    pub seeded_violation: Option<Vec<u32>>,
    #[serde(default)]
    pub count: Option<usize>,
    #[serde(default)]
    pub seed: Option<u64>,
    /// Accepted for compatibility with job files; ignored.
    #[serde(default)]
    pub tasks: Option<Vec<String>>,
}

pub fn parse_instance(text: &str) -> Result<Instance, JobError> {
    Ok(serde_json::from_str(text)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckKind {
    T1,
    Tw,
    Max,
    L1,
    Remark,
}

impl std::str::FromStr for CheckKind {
    type Err = JobError;
    fn from_str(s: &str) -> Result<Self, JobError> {
        match s {
            "T1" | "t1" => Ok(CheckKind::T1),
            "tw" => Ok(CheckKind::Tw),
            "max" => Ok(CheckKind::Max),
            "l1" => Ok(CheckKind::L1),
            "remark" => Ok(CheckKind::Remark),
            _ => Err(JobError::Invalid(format!("unknown check {s}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Roots,
    Ideal,
    Char,
    Module,
    Verify(CheckKind),
}

/// Result of a job: the rendered output and whether every check passed.
#[derive(Debug, Clone)]
pub struct JobOutput {
    pub text: String,
    pub pass: bool,
}

fn csv_rows<I: IntoIterator<Item = (Vec<u32>, u32, String)>>(rows: I) -> String {
    let mut s = String::from("eta_coords,height,value\n");
    for (eta, h, v) in rows {
        let coords: Vec<String> = eta.iter().map(|x| x.to_string()).collect();
        s.push_str(&format!("{},{},{}\n", coords.join(";"), h, v));
    }
    s
}

fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json renders");
    s.push('\n');
    s
}

impl Instance {
    fn height_or(&self, override_h: Option<u32>, default: u32) -> u32 {
        override_h.or(self.height).unwrap_or(default)
    }

    fn lambda(&self) -> Result<Weight, JobError> {
        if let Some(l) = &self.lambda {
            return Ok(l.clone());
        }
        if let Some(p) = &self.psi {
            let rank = p.first().map(|e| e.weight.rank()).unwrap_or(0);
            return Ok(p.iter().fold(Weight::zero(rank), |acc, e| acc.add(&e.weight)));
        }
        Err(JobError::Invalid("instance needs \"lambda\" or \"psi\"".into()))
    }

    fn ideal(&self) -> Result<&CofiniteIdeal, JobError> {
        self.ideal.as_ref().ok_or_else(|| JobError::Invalid("instance needs \"ideal\"".into()))
    }

    fn psi(&self, annihilator: &CofiniteIdeal) -> Result<Psi, JobError> {
        if let Some(data) = &self.psi {
            let rank = self.lambda()?.rank();
            return Ok(Psi::new(data.clone(), annihilator.clone(), rank));
        }
        let point = match &self.point {
            Some(p) => p.clone(),
            None => {
                let pts = self.ideal()?.points()?;
                pts.keys().next().cloned().ok_or_else(|| JobError::Invalid("ideal has no support point".into()))?
            }
        };
        Ok(Psi::single(point, self.lambda()?, annihilator.clone()))
    }
}

fn check_rank(gcm: &Gcm, w: &Weight) -> Result<(), JobError> {
    if w.rank() != gcm.rank() {
        return Err(HwError::RankMismatch { got: w.rank(), want: gcm.rank() }.into());
    }
    Ok(())
}

fn cap_height(h: u32, cap: u32) -> Result<u32, JobError> {
    if h == 0 {
        return Err(JobError::Invalid("height bound must be positive".into()));
    }
    if h > cap {
        return Err(JobError::Cap(format!("height {h} exceeds the hard cap {cap}")));
    }
    Ok(h)
}

fn dims_value(dims: &[DimRow]) -> Value {
    json!(dims.iter().map(|r| json!({ "eta": r.eta, "height": r.height, "dim": r.dim, "ambient": r.ambient })).collect::<Vec<_>>())
}

/// Runs one command on an instance. `height` overrides the instance's bound.
pub fn run_job(cmd: Command, inst: &Instance, height: Option<u32>, format: Format) -> Result<JobOutput, JobError> {
    let gcm = inst.gcm.resolve()?;
    match cmd {
        Command::Roots => {
            let h = cap_height(inst.height_or(height, 5), HARD_MAX_HEIGHT)?;
            let table = positive_roots(&gcm, h)?;
            let text = match format {
                Format::Csv => csv_rows(table.roots.iter().map(|r| (r.coords.clone(), r.height, r.mult.to_string()))),
                Format::Json => render(&json!({
                    "gcm": gcm,
                    "height_bound": h,
                    "roots": table.roots.iter().map(|r| json!({ "eta": r.coords, "height": r.height, "mult": r.mult })).collect::<Vec<_>>(),
                })),
            };
            Ok(JobOutput { text, pass: true })
        }
        Command::Ideal => {
            let ideal = inst.ideal()?;
            let codim = ideal.codim()?;
            let mut rows = vec![("codim".to_string(), codim.to_string())];
            let mut v = json!({ "ideal": ideal, "display": ideal.to_string(), "codim": codim });
            if let Some(j) = &inst.j {
                let meet = ideal.intersect(j)?;
                let coprime = ideal.coprime(j)?;
                v["J"] = json!(j);
                v["coprime"] = json!(coprime);
                v["intersection"] = json!(meet);
                v["intersection_codim"] = json!(meet.codim()?);
                rows.push(("coprime".into(), coprime.to_string()));
                rows.push(("intersection_codim".into(), meet.codim()?.to_string()));
            }
            if codim <= 64 {
                let b = quotient_algebra(ideal)?;
                let basis: Vec<String> = b.basis().iter().map(|p| p.to_string()).collect();
                v["quotient_basis"] = json!(basis);
            }
            let text = match format {
                Format::Json => render(&v),
                Format::Csv => {
                    let mut s = String::from("quantity,value\n");
                    for (k, x) in rows {
                        s.push_str(&format!("{k},{x}\n"));
                    }
                    s
                }
            };
            Ok(JobOutput { text, pass: true })
        }
        Command::Char => {
            let h = cap_height(inst.height_or(height, 5), HARD_MAX_HEIGHT)?;
            let lambda = inst.lambda()?;
            check_rank(&gcm, &lambda)?;
            let ideal = inst.ideal()?;
            let table = Arc::new(positive_roots(&gcm, h)?);
            let seq = standard_sequence(&lambda, ideal, table)?;
            let psi = inst.psi(ideal)?;
            let ch = character_of_M(&psi, &seq, h)?;
            let text = match format {
                Format::Csv => ch.to_csv(),
                Format::Json => render(&ch.to_json()),
            };
            Ok(JobOutput { text, pass: true })
        }
        Command::Module => run_module(&gcm, inst, height, format),
        Command::Verify(kind) => {
            let report = run_check(&gcm, kind, inst, height)?;
            let pass = report.pass();
            let text = match format {
                Format::Json => render(&report.to_json()),
                Format::Csv => {
                    let mut s = String::from("check,status\n");
                    for c in &report.checks {
                        s.push_str(&format!("{},{}\n", c.name, serde_json::to_value(c.status).unwrap().as_str().unwrap()));
                    }
                    s
                }
            };
            Ok(JobOutput { text, pass })
        }
    }
}

fn run_module(gcm: &Gcm, inst: &Instance, height: Option<u32>, format: Format) -> Result<JobOutput, JobError> {
    let h = cap_height(inst.height_or(height, 3), HARD_MAX_MODULE_HEIGHT)?;
    let lambda = inst.lambda()?;
    check_rank(gcm, &lambda)?;
    let opts = BuildOptions { order: inst.order, ..BuildOptions::default() };
    let probe = map_algebra(gcm, &CofiniteIdeal::at(0, 1))?;
    let ideal = match (&inst.ideal, inst.module) {
        (Some(i), _) => i.clone(),
        (None, ModuleChoice::Induced) => CofiniteIdeal::at(0, 1),
        (None, _) => return Err(JobError::Invalid("instance needs \"ideal\"".into())),
    };
    let seq = standard_sequence(&lambda, &ideal, probe.g.table.clone())?;
    let b = match &inst.b {
        Some(b) => b.clone(),
        None => {
            let n = seq.entries.iter().map(|e| e.codim()).collect::<Result<Vec<_>, _>>()?;
            let mut b = ideal.clone();
            for (e, c) in seq.entries.iter().zip(n) {
                if c > b.codim()? {
                    b = e.clone();
                }
            }
            b
        }
    };
    let alg = crate::modeng::with_coefficients(&probe, &b)?;
    let psi = inst.psi(&b)?;
    let st = match inst.module {
        ModuleChoice::Induced => build_M(alg, &psi, None, h, &opts)?,
        ModuleChoice::Truncated => build_M(alg, &psi, Some(&seq), h, &opts)?,
        ModuleChoice::Weyl => match build_W(alg, &psi, &ideal, h, &opts) {
            Err(ModError::IntegrabilityAuditFailed(msg)) => {
                let v = json!({ "module": "W", "audit": { "pass": false, "failure": msg } });
                return Ok(JobOutput { text: render(&v), pass: false });
            }
            r => r?,
        },
    };
    let dims = st.dims();
    let text = match format {
        Format::Csv => csv_rows(dims.iter().map(|r| (r.eta.clone(), r.height, r.dim.to_string()))),
        Format::Json => render(&json!({
            "module": match inst.module { ModuleChoice::Induced => "induced", ModuleChoice::Truncated => "M", ModuleChoice::Weyl => "W" },
            "lie_type": st.algebra().g.type_name(),
            "coefficient_ideal": b,
            "dim_B": st.algebra().dim_b(),
            "pbw_order": inst.order,
            "height_bound": h,
            "relation_count": st.relation_count(),
            "total_dim": st.total_dim(),
            "dims": dims_value(&dims),
            "audit": st.audit(),
        })),
    };
    Ok(JobOutput { text, pass: st.audit().map(|a| a.pass).unwrap_or(true) })
}

fn run_check(gcm: &Gcm, kind: CheckKind, inst: &Instance, height: Option<u32>) -> Result<VerificationReport, JobError> {
    let need = |w: &Option<Weight>, key: &str| -> Result<Weight, JobError> {
        let w = w.clone().ok_or_else(|| JobError::Invalid(format!("instance needs \"{key}\"")))?;
        check_rank(gcm, &w)?;
        Ok(w)
    };
    let need_ideal = |i: &Option<CofiniteIdeal>, key: &str| -> Result<CofiniteIdeal, JobError> {
        i.clone().ok_or_else(|| JobError::Invalid(format!("instance needs \"{key}\"")))
    };
    Ok(match kind {
        CheckKind::T1 => {
            let h = cap_height(inst.height_or(height, 4), HARD_MAX_HEIGHT)?;
            let seeded_violation = match &inst.seeded_violation {
                None => None,
                Some(r) => Some(
                    positive_roots(gcm, h)?
                        .index_of(r)
                        .ok_or_else(|| JobError::Invalid(format!("{r:?} is not a positive root of height ≤ {h}")))?,
                ),
            };
            let opts = T1Options { brute_force: inst.brute_force.unwrap_or(true), seeded_violation };
            theorems::check_T1(gcm, &need(&inst.lambda, "lambda")?, inst.ideal()?, &need(&inst.mu, "mu")?, &need_ideal(&inst.j, "J")?, h, &opts)?
        }
        CheckKind::Tw => {
            let h = cap_height(inst.height_or(height, 4), HARD_MAX_MODULE_HEIGHT)?;
            theorems::check_tw(gcm, &need(&inst.lambda, "lambda")?, inst.ideal()?, &need(&inst.mu, "mu")?, &need_ideal(&inst.j, "J")?, h)?
        }
        CheckKind::Max => {
            let h = cap_height(inst.height_or(height, 4), HARD_MAX_MODULE_HEIGHT)?;
            let data = inst.psi.clone().ok_or_else(|| JobError::Invalid("instance needs \"psi\"".into()))?;
            let pts: Vec<(Vec<Q>, Weight)> = data.into_iter().map(|e| (e.point, e.weight)).collect();
            for (_, w) in &pts {
                check_rank(gcm, w)?;
            }
            theorems::check_max(gcm, &pts, h)?
        }
        CheckKind::L1 => {
            let h = cap_height(inst.height_or(height, 3), HARD_MAX_MODULE_HEIGHT)?;
            let inst_list = theorems::random_l1_instances(inst.count.unwrap_or(20), inst.seed.unwrap_or(0));
            theorems::check_l1(&inst_list, h)?
        }
        CheckKind::Remark => {
            let h = cap_height(inst.height_or(height, 4), HARD_MAX_MODULE_HEIGHT)?;
            let lambda = need(&inst.lambda, "lambda")?;
            theorems::check_remark(gcm, &lambda, inst.ideal()?, h)?
        }
    })
}

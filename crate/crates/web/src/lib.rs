//! wasm-bindgen entry points for the static demo page in `www/`.
//!
//! Every function takes an instance in the same JSON format as the command
//! line tool and returns rendered text, or an error message.

use wasm_bindgen::prelude::*;
use weylforge_core::io::{parse_instance, run_job, CheckKind, Command, Format, JobError};

fn job(cmd: Command, instance: &str, height: u32, format: Format) -> Result<String, String> {
    let run = || -> Result<String, JobError> {
        let inst = parse_instance(instance)?;
        let h = (height > 0).then_some(height);
        Ok(run_job(cmd, &inst, h, format)?.text)
    };
    run().map_err(|e| e.to_string())
}

/// Truncated character of `M(ψ, I)` as CSV (`eta_coords,height,value`).
#[wasm_bindgen]
pub fn character_csv(instance: &str, height: u32) -> Result<String, String> {
    job(Command::Char, instance, height, Format::Csv)
}

/// Weight-space dimensions of the module selected by the instance's `module` key.
#[wasm_bindgen]
pub fn module_json(instance: &str, height: u32) -> Result<String, String> {
    job(Command::Module, instance, height, Format::Json)
}

/// Runs a verification (`T1`, `tw`, `max`, `l1` or `remark`) and returns the report.
#[wasm_bindgen]
pub fn verify_json(check: &str, instance: &str, height: u32) -> Result<String, String> {
    let kind: CheckKind = check.parse().map_err(|e: JobError| e.to_string())?;
    job(Command::Verify(kind), instance, height, Format::Json)
}

/// Positive roots up to a height, as JSON.
#[wasm_bindgen]
pub fn roots_json(instance: &str, height: u32) -> Result<String, String> {
    job(Command::Roots, instance, height, Format::Json)
}

//! Verification reports and their renderings.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Generator,
    Solution,
    Resolver,
    TransformationIdentity,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Pass,
    Fail,
    Inconclusive,
    OutOfScope,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Pass => "pass",
            Outcome::Fail => "fail",
            Outcome::Inconclusive => "inconclusive",
            Outcome::OutOfScope => "out-of-scope",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessPoint {
    pub point: BTreeMap<String, f64>,
    /// Residual value at the point.
    pub value: f64,
    /// Magnitude the residual is measured against.
    pub scale: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Record {
    pub id: String,
    pub kind: Kind,
    pub verdict: Outcome,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub worst_residual: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessPoint>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Record {
    pub fn new(id: impl Into<String>, kind: Kind, verdict: Outcome) -> Record {
        Record {
            id: id.into(),
            kind,
            verdict,
            worst_residual: None,
            witness: None,
            detail: None,
        }
    }

    pub fn with_residual(mut self, r: f64) -> Record {
        self.worst_residual = Some(r);
        self
    }

    pub fn with_witness(mut self, w: WitnessPoint) -> Record {
        self.witness = Some(w);
        self
    }

    pub fn with_detail(mut self, d: impl Into<String>) -> Record {
        self.detail = Some(d.into());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Jet points per parameter sample.
    pub trials: usize,
    pub param_samples: usize,
    /// Relative residual below which a generator passes.
    pub rtol: f64,
    /// Relative residual above which a generator fails.
    pub fail_tol: f64,
    pub solution_pass: f64,
    pub solution_fail: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Summary {
    pub total: usize,
    pub pass: usize,
    pub fail: usize,
    pub inconclusive: usize,
    pub out_of_scope: usize,
}

impl Summary {
    pub fn of(records: &[Record]) -> Summary {
        let mut s = Summary {
            total: records.len(),
            ..Summary::default()
        };
        for r in records {
            match r.verdict {
                Outcome::Pass => s.pass += 1,
                Outcome::Fail => s.fail += 1,
                Outcome::Inconclusive => s.inconclusive += 1,
                Outcome::OutOfScope => s.out_of_scope += 1,
            }
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerificationReport {
    pub schema_version: u32,
    pub command: String,
    pub seed: u64,
    pub config: RunConfig,
    pub summary: Summary,
    pub records: Vec<Record>,
}

impl VerificationReport {
    pub fn new(
        command: impl Into<String>,
        seed: u64,
        config: RunConfig,
        records: Vec<Record>,
    ) -> VerificationReport {
        VerificationReport {
            schema_version: SCHEMA_VERSION,
            command: command.into(),
            seed,
            config,
            summary: Summary::of(&records),
            records,
        }
    }

    /// 0 when nothing failed, 1 on any fail, 3 when the only problems are
    /// inconclusive verdicts.
    pub fn exit_code(&self) -> i32 {
        if self.summary.fail > 0 {
            1
        } else if self.summary.inconclusive > 0 {
            3
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command: {}", self.command);
        let _ = writeln!(out, "seed: {}", self.seed);
        let _ = writeln!(
            out,
            "config: trials={} param_samples={} rtol={:e} fail_tol={:e}",
            self.config.trials, self.config.param_samples, self.config.rtol, self.config.fail_tol
        );
        let width = self
            .records
            .iter()
            .map(|r| r.id.len())
            .max()
            .unwrap_or(2)
            .max(2);
        let _ = writeln!(out);
        let _ = writeln!(
            out,
            "{:<width$}  {:<23}  {:<12}  {:>10}",
            "id", "kind", "verdict", "residual"
        );
        for r in &self.records {
            let kind = serde_json::to_value(r.kind).ok();
            let kind = kind.as_ref().and_then(|k| k.as_str()).unwrap_or("");
            let res = r
                .worst_residual
                .map(|v| format!("{:.3e}", v))
                .unwrap_or_else(|| "-".into());
            let _ = writeln!(
                out,
                "{:<width$}  {:<23}  {:<12}  {:>10}",
                r.id,
                kind,
                r.verdict.as_str(),
                res
            );
            if r.verdict != Outcome::Pass {
                if let Some(w) = &r.witness {
                    let pts: Vec<String> = w
                        .point
                        .iter()
                        .map(|(k, v)| format!("{}={:.6}", k, v))
                        .collect();
                    let _ = writeln!(
                        out,
                        "{:<width$}    witness: {} (value {:.3e})",
                        "",
                        pts.join(" "),
                        w.value
                    );
                }
                if let Some(d) = &r.detail {
                    let _ = writeln!(out, "{:<width$}    {}", "", d);
                }
            }
        }
        let s = &self.summary;
        let _ = writeln!(out);
        let _ = writeln!(
            out,
            "{} pass / {} fail / {} inconclusive / {} out-of-scope ({} total)",
            s.pass, s.fail, s.inconclusive, s.out_of_scope, s.total
        );
        out
    }
}

/// Per-item seed: the first eight bytes of SHA-256 over the run seed and
/// the item id.
pub fn derive_seed(seed: u64, id: &str) -> u64 {
    use sha2::{Digest, Sha256};
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    h.update(id.as_bytes());
    let d = h.finalize();
    u64::from_le_bytes(d[..8].try_into().expect("digest length"))
}

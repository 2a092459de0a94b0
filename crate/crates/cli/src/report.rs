//! Run reports: the structured output of every subcommand, JSON on stdout.
//! Reports are deterministic except for the timing field.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

use nervecheck_core::interleave::VerificationReport;
use nervecheck_core::metrics::BoundReport;
use nervecheck_core::persistence::{GoodnessReport, PersistenceDiagram};

use crate::document::{Decimal, FamilyInfo};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BarJson {
    pub dim: usize,
    pub birth: Decimal,
    pub death: Decimal,
}

pub fn diagram_json(d: &PersistenceDiagram) -> Vec<BarJson> {
    d.bars
        .iter()
        .map(|b| BarJson {
            dim: b.dim,
            birth: Decimal(b.birth.value()),
            death: Decimal(b.death.value()),
        })
        .collect()
}

pub fn diagram_csv(d: &PersistenceDiagram) -> String {
    let mut out = String::from("dim,birth,death\n");
    for b in &d.bars {
        out.push_str(&format!(
            "{},{},{}\n",
            b.dim,
            Decimal::render(b.birth.value()),
            Decimal::render(b.death.value())
        ));
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessJson {
    pub v: Vec<u32>,
    pub dim: usize,
    pub birth: Decimal,
    pub death: Decimal,
}

#[derive(Clone, Debug, Serialize)]
pub struct GoodnessJson {
    #[serde(rename = "epsilonStar")]
    pub epsilon_star: Decimal,
    pub witnesses: Vec<WitnessJson>,
    #[serde(rename = "perV")]
    pub per_v: BTreeMap<String, Decimal>,
}

pub fn goodness_json(g: &GoodnessReport) -> GoodnessJson {
    GoodnessJson {
        epsilon_star: Decimal(g.epsilon_star.value()),
        witnesses: g
            .witnesses
            .iter()
            .map(|w| WitnessJson {
                v: w.v.indices().to_vec(),
                dim: w.dim,
                birth: Decimal(w.birth.value()),
                death: Decimal(w.death.value()),
            })
            .collect(),
        per_v: g
            .per_v
            .iter()
            .map(|(v, &len)| (v.to_string(), Decimal(len.value())))
            .collect(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundJson {
    pub k: usize,
    #[serde(rename = "epsilonStar")]
    pub epsilon_star: Decimal,
    pub bound: Decimal,
    #[serde(rename = "dB")]
    pub d_b: Decimal,
    pub verdict: bool,
    #[serde(rename = "shiftedBound")]
    pub shifted_bound: Decimal,
    #[serde(rename = "shiftedDB")]
    pub shifted_d_b: Decimal,
    #[serde(rename = "shiftedVerdict")]
    pub shifted_verdict: bool,
    #[serde(rename = "blowupAgrees")]
    pub blowup_agrees: bool,
    pub space: Vec<BarJson>,
    pub nerve: Vec<BarJson>,
    pub blowup: Vec<BarJson>,
    #[serde(rename = "shiftedNerve")]
    pub shifted_nerve: Vec<BarJson>,
}

pub fn bound_json(r: &BoundReport) -> BoundJson {
    BoundJson {
        k: r.k,
        epsilon_star: Decimal(r.epsilon_star().value()),
        bound: Decimal(r.bound.value()),
        d_b: Decimal(r.d_b.value()),
        verdict: r.verdict,
        shifted_bound: Decimal(r.shifted_bound.value()),
        shifted_d_b: Decimal(r.shifted_d_b.value()),
        shifted_verdict: r.shifted_verdict,
        blowup_agrees: r.dgm_blowup == r.dgm_space,
        space: diagram_json(&r.dgm_space),
        nerve: diagram_json(&r.dgm_nerve),
        blowup: diagram_json(&r.dgm_blowup),
        shifted_nerve: diagram_json(&r.dgm_shifted_nerve),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckJson {
    pub name: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScaleChecksJson {
    pub alpha: Decimal,
    pub checks: Vec<CheckJson>,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentitiesJson {
    #[serde(rename = "kMax")]
    pub k_max: usize,
    pub epsilon: Decimal,
    pub shift: Decimal,
    #[serde(rename = "allPass")]
    pub all_pass: bool,
    pub scales: Vec<ScaleChecksJson>,
}

pub fn identities_json(r: &VerificationReport) -> IdentitiesJson {
    IdentitiesJson {
        k_max: r.k_max,
        epsilon: Decimal(r.epsilon.value()),
        shift: Decimal(r.shift.value()),
        all_pass: r.all_pass(),
        scales: r
            .scales
            .iter()
            .map(|s| ScaleChecksJson {
                alpha: Decimal(s.alpha.value()),
                checks: s
                    .checks
                    .iter()
                    .map(|c| CheckJson {
                        name: c.name.to_string(),
                        pass: c.pass,
                        detail: c.detail.clone(),
                    })
                    .collect(),
            })
            .collect(),
    }
}

/// Construction summary for the interleave command.
#[derive(Clone, Debug, Serialize)]
pub struct InterleaveSummaryJson {
    #[serde(rename = "kMax")]
    pub k_max: usize,
    pub epsilon: Decimal,
    pub shift: Decimal,
    pub grid: Vec<Decimal>,
    pub basepoints: BTreeMap<String, u32>,
    #[serde(rename = "localHomotopies")]
    pub local_homotopies: usize,
}

/// A structured failure surfaced as part of a report (exit code 2).
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "type")]
pub enum ErrorJson {
    NotEpsGood {
        v: Vec<u32>,
        alpha: Decimal,
        dim: usize,
    },
    TheoremViolation {
        k: usize,
        #[serde(rename = "dB")]
        d_b: Decimal,
        bound: Decimal,
    },
    BlowupDiagramMismatch {
        dim: usize,
    },
    IdentityFailure,
}

/// The self-contained run report: input digest plus parameters make the run
/// reproducible, and each command fills the sections it computes.
#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    #[serde(rename = "inputDigest", skip_serializing_if = "Option::is_none")]
    pub input_digest: Option<String>,
    pub parameters: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilyInfo>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub goodness: Option<GoodnessJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagrams: Option<BTreeMap<String, Vec<BarJson>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bounds: Option<Vec<BoundJson>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub interleaving: Option<InterleaveSummaryJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub identities: Option<IdentitiesJson>,
    #[serde(rename = "bottleneck", skip_serializing_if = "Option::is_none")]
    pub bottleneck: Option<Decimal>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorJson>,
    #[serde(rename = "timingMs")]
    pub timing_ms: u128,
}

impl RunReport {
    pub fn new(command: &str) -> RunReport {
        RunReport {
            command: command.to_string(),
            input_digest: None,
            parameters: serde_json::Value::Null,
            family: None,
            goodness: None,
            diagrams: None,
            bounds: None,
            interleaving: None,
            identities: None,
            bottleneck: None,
            error: None,
            timing_ms: 0,
        }
    }

    pub fn render(&self) -> String {
        let mut out =
            serde_json::to_string_pretty(self).expect("report serialization is infallible");
        out.push('\n');
        out
    }
}

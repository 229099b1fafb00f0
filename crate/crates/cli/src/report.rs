//! Serializable views of core results.

use std::collections::BTreeMap;
use std::io::Write;

use maslov_core::iteration::verify::VerdictReport;
use maslov_core::maslov::{IndexReport, Trace};
use serde::Serialize;

use crate::config::ToleranceSpec;
use crate::json::JsonMatrix;

#[derive(Debug, Clone, Serialize)]
pub struct SignatureJson {
    pub positive: usize,
    pub zero: usize,
    pub negative: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct CrossingJson {
    pub time: f64,
    pub nullity: usize,
    pub signature: SignatureJson,
    pub contribution: i64,
    pub form: JsonMatrix,
}

#[derive(Debug, Clone, Serialize)]
pub struct FlowJson {
    pub start: f64,
    pub end: f64,
    pub flow: i64,
}

#[derive(Debug, Clone, Serialize)]
pub struct IndexJson {
    pub index: i64,
    pub method: &'static str,
    pub depth: u32,
    pub steps: usize,
    pub epsilon: f64,
    pub convention: String,
    pub crossings: Vec<CrossingJson>,
    pub flow_events: Vec<FlowJson>,
}

impl From<&IndexReport> for IndexJson {
    fn from(r: &IndexReport) -> Self {
        IndexJson {
            index: r.index,
            method: r.method.as_str(),
            depth: r.depth,
            steps: r.steps,
            epsilon: r.epsilon,
            convention: r.convention.clone(),
            crossings: r
                .crossings
                .iter()
                .map(|c| CrossingJson {
                    time: c.time,
                    nullity: c.intersection.ncols(),
                    signature: SignatureJson {
                        positive: c.signature.positive,
                        zero: c.signature.zero,
                        negative: c.signature.negative,
                    },
                    contribution: c.contribution,
                    form: JsonMatrix::from_matrix(&c.form),
                })
                .collect(),
            flow_events: r
                .events
                .iter()
                .map(|e| FlowJson {
                    start: e.start,
                    end: e.end,
                    flow: e.flow,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerdictJson {
    pub identity: String,
    pub lhs: i64,
    pub rhs_terms: Vec<i64>,
    pub rhs: i64,
    #[serde(rename = "match")]
    pub matched: bool,
    pub seed: Option<u64>,
    pub dims: usize,
    pub k: Option<usize>,
    pub details: BTreeMap<String, f64>,
    pub tolerances: ToleranceSpec,
}

impl VerdictJson {
    pub fn new(v: &VerdictReport, tolerances: ToleranceSpec) -> Self {
        VerdictJson {
            identity: v.identity.clone(),
            lhs: v.lhs,
            rhs_terms: v.rhs_terms.clone(),
            rhs: v.rhs(),
            matched: v.matched,
            seed: v.seed,
            dims: v.dims,
            k: v.k,
            details: v.details.iter().cloned().collect(),
            tolerances,
        }
    }
}

/// Eigenangle traces as CSV: `t,angle_0,angle_1,...`.
pub fn write_traces(out: &mut dyn Write, traces: &[Trace]) -> std::io::Result<()> {
    let width = traces.iter().map(|t| t.angles.len()).max().unwrap_or(0);
    write!(out, "t")?;
    for j in 0..width {
        write!(out, ",angle_{j}")?;
    }
    writeln!(out)?;
    for tr in traces {
        write!(out, "{}", tr.t)?;
        for a in &tr.angles {
            write!(out, ",{a}")?;
        }
        writeln!(out)?;
    }
    Ok(())
}

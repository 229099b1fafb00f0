//! The `index` and `decompose` subcommands.

use std::fs::File;
use std::io::{BufWriter, Write};

use maslov_core::crossing::maslov_pairs_crossingform;
use maslov_core::linalg::relative_distance;
use maslov_core::maslov::{graph_index, nullities, ConstantFrame, GraphPath, IndexReport, ProductSpace};
use maslov_core::path::SymplecticPath;
use maslov_core::polar::polar_decompose;
use maslov_core::positivity::winding_pair;
use maslov_core::space::inverse_formula_residual;
use maslov_core::{Error, NormalizedSpace};
use serde::Serialize;

use crate::config::{MethodChoice, RunConfig, SCHEMA_VERSION};
use crate::exit;
use crate::json::{JsonMatrix, LagrangianSpec, SpaceSpec};
use crate::report::IndexJson;

/// A failure carrying the process exit code it maps to.
#[derive(Debug)]
pub struct CommandError {
    pub code: i32,
    pub message: String,
}

impl CommandError {
    pub fn usage(message: impl Into<String>) -> Self {
        CommandError {
            code: exit::USAGE,
            message: message.into(),
        }
    }
}

/// Numerical failures exit 3, disagreeing computations 1, bad input 2.
impl From<Error> for CommandError {
    fn from(e: Error) -> Self {
        let code = if e.is_numerical() {
            exit::NUMERICAL
        } else if matches!(e, Error::IdentityMismatch(_) | Error::IdentityViolated(_)) {
            exit::VIOLATION
        } else {
            exit::USAGE
        };
        CommandError {
            code,
            message: e.to_string(),
        }
    }
}

pub type CommandResult<T> = Result<T, CommandError>;

/// Writes `value` as pretty JSON to `path`, or to stdout.
pub fn emit<T: Serialize>(value: &T, path: Option<&str>) -> CommandResult<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| CommandError::usage(format!("serialize: {e}")))?;
    match path {
        Some(p) => std::fs::write(p, text + "\n").map_err(|e| CommandError::usage(format!("{p}: {e}"))),
        None => match writeln!(std::io::stdout().lock(), "{text}") {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CommandError::usage(format!("stdout: {e}"))),
            _ => Ok(()),
        },
    }
}

#[derive(Debug, Serialize)]
pub struct IndexOutput {
    pub schema_version: u32,
    pub index: i64,
    pub start_nullity: [usize; 2],
    pub end_nullity: [usize; 2],
    pub domain: [f64; 2],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub winding: Option<IndexJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub crossing_form: Option<IndexJson>,
}

pub fn cmd_index(cfg: &RunConfig, csv_traces: Option<&str>) -> CommandResult<IndexOutput> {
    let tol = cfg.tolerances();
    let space = cfg
        .space
        .clone()
        .unwrap_or_else(|| SpaceSpec::Named("canonical:1".into()))
        .build(tol)
        .map_err(CommandError::usage)?;
    let path = cfg
        .path
        .as_ref()
        .ok_or_else(|| CommandError::usage("index needs a 'path'"))?
        .build()
        .map_err(CommandError::usage)?;
    if path.dim() != space.dim() {
        return Err(CommandError::usage(format!(
            "path has dimension {}, space has dimension {}",
            path.dim(),
            space.dim()
        )));
    }
    let ps = ProductSpace::new(&space);
    let v = cfg
        .lagrangian
        .clone()
        .unwrap_or(LagrangianSpec::Identity)
        .build(&ps)
        .map_err(CommandError::usage)?;
    let mut opts = cfg.index_options();
    opts.record_traces = csv_traces.is_some();
    let domain = path.domain();

    let winding = match cfg.method {
        MethodChoice::Winding | MethodChoice::Both => Some(graph_index(&ps, &path, &v, &opts)?),
        MethodChoice::CrossingForm => None,
    };
    let crossing = match cfg.method {
        MethodChoice::CrossingForm | MethodChoice::Both => {
            let total = ps.total().with_tolerances(tol);
            let lambda = GraphPath(path.clone());
            let mu = ConstantFrame { frame: v.clone(), domain };
            Some(maslov_pairs_crossingform(&total, &lambda, &mu, domain, &opts)?)
        }
        MethodChoice::Winding => None,
    };
    if let (Some(w), Some(x)) = (&winding, &crossing) {
        if w.index != x.index {
            return Err(Error::IdentityMismatch(format!("winding {} vs crossing form {}", w.index, x.index)).into());
        }
    }
    if let (Some(p), Some(r)) = (csv_traces, winding.as_ref().or(crossing.as_ref())) {
        write_csv(p, r)?;
    }
    let index = winding.as_ref().or(crossing.as_ref()).map_or(0, |r| r.index);
    let (s0, s1) = nullities(&ps, &path.start(), &v, &tol)?;
    let (e0, e1) = nullities(&ps, &path.end(), &v, &tol)?;
    Ok(IndexOutput {
        schema_version: SCHEMA_VERSION,
        index,
        start_nullity: [s0, s1],
        end_nullity: [e0, e1],
        domain: [domain.start, domain.end],
        winding: winding.as_ref().map(IndexJson::from),
        crossing_form: crossing.as_ref().map(IndexJson::from),
    })
}

fn write_csv(path: &str, report: &IndexReport) -> CommandResult<()> {
    let io = |e: std::io::Error| CommandError::usage(format!("{path}: {e}"));
    let mut out = BufWriter::new(File::create(path).map_err(io)?);
    crate::report::write_traces(&mut out, &report.traces).map_err(io)?;
    out.flush().map_err(io)
}

#[derive(Debug, Serialize)]
pub struct DecomposeOutput {
    pub schema_version: u32,
    /// Whether the input was first carried to `J² = −I` by the transfer map.
    pub normalized: bool,
    pub positive: JsonMatrix,
    pub unitary: JsonMatrix,
    pub log_positive: JsonMatrix,
    pub s12: JsonMatrix,
    pub u11: JsonMatrix,
    pub u22: JsonMatrix,
    pub symplectic_residual: f64,
    pub product_residual: f64,
    pub inverse_formula_residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub winding_pair: Option<[i64; 2]>,
}

pub fn cmd_decompose(cfg: &RunConfig) -> CommandResult<DecomposeOutput> {
    let tol = cfg.tolerances();
    let space = match &cfg.space {
        Some(s) => s.build(tol).map_err(CommandError::usage)?,
        None => {
            let dim = match (&cfg.matrix, &cfg.path) {
                (Some(m), _) => m.to_matrix().map_err(CommandError::usage)?.nrows(),
                (None, Some(p)) => p.build().map_err(CommandError::usage)?.dim(),
                (None, None) => return Err(CommandError::usage("decompose needs a 'matrix' or a loop 'path'")),
            };
            if dim % 2 != 0 {
                return Err(CommandError::usage(format!("matrix has odd dimension {dim}")));
            }
            SpaceSpec::Named(format!("canonical:{}", dim / 2))
                .build(tol)
                .map_err(CommandError::usage)?
        }
    };
    let norm = space.normalize()?;
    let ns: &NormalizedSpace = &norm.normalized;
    let path = cfg.path.as_ref().map(|p| p.build()).transpose().map_err(CommandError::usage)?;
    let m = match (&cfg.matrix, &path) {
        (Some(m), _) => m.to_matrix().map_err(CommandError::usage)?,
        (None, Some(p)) => p.end(),
        (None, None) => return Err(CommandError::usage("decompose needs a 'matrix' or a loop 'path'")),
    };
    if m.nrows() != space.dim() || m.ncols() != space.dim() {
        return Err(CommandError::usage(format!(
            "matrix is {}x{}, space has dimension {}",
            m.nrows(),
            m.ncols(),
            space.dim()
        )));
    }
    let residual = space.symplectic_residual(&m);
    if !space.is_symplectic(&m) {
        return Err(CommandError {
            code: exit::NUMERICAL,
            message: Error::NotSymplectic(residual).to_string(),
        });
    }
    let mn = norm.conjugate(&m);
    let p = polar_decompose(ns, &mn)?;
    let winding = match &path {
        Some(p) => {
            let inner = SymplecticPath::right_mul(p.clone(), norm.transfer_inv.clone())?;
            let lp = SymplecticPath::left_mul(norm.transfer.clone(), inner)?;
            let (a, b) = winding_pair(ns, &lp)?;
            Some([a, b])
        }
        None => None,
    };
    Ok(DecomposeOutput {
        schema_version: SCHEMA_VERSION,
        normalized: !norm.is_trivial(),
        positive: JsonMatrix::from_matrix(&p.positive),
        unitary: JsonMatrix::from_matrix(&p.unitary),
        log_positive: JsonMatrix::from_matrix(&p.log_positive),
        s12: JsonMatrix::from_matrix(&p.s12),
        u11: JsonMatrix::from_matrix(&p.u11),
        u22: JsonMatrix::from_matrix(&p.u22),
        symplectic_residual: residual,
        product_residual: relative_distance(&(&p.positive * &p.unitary), &mn),
        inverse_formula_residual: inverse_formula_residual(&space, &m),
        winding_pair: winding,
    })
}

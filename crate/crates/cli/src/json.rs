//! JSON forms of matrices, spaces, Lagrangians and path expression trees.
//!
//! Matrices are row-major arrays of rows, each entry a `[re, im]` pair.
//! Paths are tagged by `"type"` and nest through their children.

use maslov_core::linalg::{c, identity, unit, CMat};
use maslov_core::maslov::ProductSpace;
use maslov_core::path::{Chart, Domain, SymplecticPath};
use maslov_core::{Error as CoreError, SymplecticSpace, Tolerances};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct JsonMatrix(pub Vec<Vec<[f64; 2]>>);

impl JsonMatrix {
    pub fn from_matrix(m: &CMat) -> Self {
        JsonMatrix(
            (0..m.nrows())
                .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
                .collect(),
        )
    }

    pub fn to_matrix(&self) -> Result<CMat, String> {
        let rows = self.0.len();
        let cols = self.0.first().map_or(0, |r| r.len());
        if rows == 0 || cols == 0 {
            return Err("matrix is empty".into());
        }
        if let Some(bad) = self.0.iter().position(|r| r.len() != cols) {
            return Err(format!("row {bad} has {} entries, expected {cols}", self.0[bad].len()));
        }
        if self.0.iter().flatten().flatten().any(|x| !x.is_finite()) {
            return Err("matrix has non-finite entries".into());
        }
        Ok(CMat::from_fn(rows, cols, |i, j| c(self.0[i][j][0], self.0[i][j][1])))
    }
}

/// `"canonical:n"` (`J = iI ⊕ −iI`), `"standard:n"` (`J = [[0, −I], [I, 0]]`)
/// or an explicit structure map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SpaceSpec {
    Named(String),
    Matrix { j: JsonMatrix },
}

impl SpaceSpec {
    pub fn build(&self, tol: Tolerances) -> Result<SymplecticSpace, String> {
        match self {
            SpaceSpec::Named(name) => {
                let (kind, n) = name
                    .split_once(':')
                    .ok_or_else(|| format!("space '{name}' is not of the form kind:n"))?;
                let n: usize = n.trim().parse().map_err(|_| format!("bad half-dimension in '{name}'"))?;
                if n == 0 {
                    return Err("half-dimension must be positive".into());
                }
                let space = match kind {
                    "canonical" => SymplecticSpace::canonical(n),
                    "standard" => SymplecticSpace::standard(n),
                    _ => return Err(format!("unknown space kind '{kind}'")),
                };
                Ok(space.with_tolerances(tol))
            }
            SpaceSpec::Matrix { j } => {
                SymplecticSpace::new(j.to_matrix()?, tol).map_err(|e| format!("structure map: {e}"))
            }
        }
    }
}

/// Lagrangian subspace of `X = H × H`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum LagrangianSpec {
    /// `Gr(I)`.
    Identity,
    /// `Gr(M)`.
    Graph { matrix: JsonMatrix },
    /// `Gr(e^{iθ} I)`.
    Circle { angle: f64 },
    /// `first × second` for Lagrangian frames of `H`.
    Product { first: JsonMatrix, second: JsonMatrix },
    /// A raw `4n × 2n` frame.
    Frame { matrix: JsonMatrix },
}

impl LagrangianSpec {
    pub fn build(&self, ps: &ProductSpace) -> Result<CMat, String> {
        let dim = ps.base().dim();
        let frame = match self {
            LagrangianSpec::Identity => ps.graph(&identity(dim)),
            LagrangianSpec::Graph { matrix } => ps.graph(&matrix.to_matrix()?),
            LagrangianSpec::Circle { angle } => Ok(ps.circle_graph(unit(*angle))),
            LagrangianSpec::Product { first, second } => ps.product(&first.to_matrix()?, &second.to_matrix()?),
            LagrangianSpec::Frame { matrix } => {
                let f = matrix.to_matrix()?;
                if f.nrows() != 2 * dim {
                    return Err(format!("frame has {} rows, expected {}", f.nrows(), 2 * dim));
                }
                maslov_core::lagrangian::check_lagrangian(ps.total(), &f).map(|_| f)
            }
        };
        frame.map_err(|e| format!("lagrangian: {e}"))
    }
}

fn default_slope() -> f64 {
    1.0
}

fn default_chart() -> String {
    "cayley".into()
}

/// Path expression tree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum PathSpec {
    Constant {
        matrix: JsonMatrix,
        domain: [f64; 2],
    },
    /// `exp((slope·t + offset)·generator)`.
    Exp {
        generator: JsonMatrix,
        #[serde(default = "default_slope")]
        slope: f64,
        #[serde(default)]
        offset: f64,
        domain: [f64; 2],
    },
    Product {
        left: Box<PathSpec>,
        right: Box<PathSpec>,
    },
    Concat {
        first: Box<PathSpec>,
        second: Box<PathSpec>,
    },
    Reverse {
        path: Box<PathSpec>,
    },
    /// `t ↦ N γ(t)⁻¹ N`.
    Conjugation {
        n: JsonMatrix,
        path: Box<PathSpec>,
    },
    /// `t ↦ γ(t)^k`.
    Power {
        path: Box<PathSpec>,
        k: usize,
    },
    Reparam {
        path: Box<PathSpec>,
        domain: [f64; 2],
    },
    AIterate {
        path: Box<PathSpec>,
        a: JsonMatrix,
        k: usize,
    },
    BrakeIterate {
        path: Box<PathSpec>,
        n: JsonMatrix,
        k: usize,
    },
    Sampled {
        times: Vec<f64>,
        matrices: Vec<JsonMatrix>,
        #[serde(default = "default_chart")]
        chart: String,
    },
}

fn domain(d: [f64; 2]) -> Result<Domain, String> {
    Domain::new(d[0], d[1]).map_err(|e| e.to_string())
}

fn core(e: CoreError) -> String {
    e.to_string()
}

impl PathSpec {
    pub fn build(&self) -> Result<SymplecticPath, String> {
        Ok(match self {
            PathSpec::Constant { matrix, domain: d } => SymplecticPath::constant(matrix.to_matrix()?, domain(*d)?),
            PathSpec::Exp {
                generator,
                slope,
                offset,
                domain: d,
            } => SymplecticPath::exp_affine(generator.to_matrix()?, *slope, *offset, domain(*d)?),
            PathSpec::Product { left, right } => SymplecticPath::product(left.build()?, right.build()?).map_err(core)?,
            PathSpec::Concat { first, second } => SymplecticPath::concat(first.build()?, second.build()?).map_err(core)?,
            PathSpec::Reverse { path } => SymplecticPath::reverse(path.build()?),
            PathSpec::Conjugation { n, path } => SymplecticPath::conjugation(n.to_matrix()?, path.build()?),
            PathSpec::Power { path, k } => SymplecticPath::power(path.build()?, *k),
            PathSpec::Reparam { path, domain: d } => SymplecticPath::reparam(path.build()?, domain(*d)?),
            PathSpec::AIterate { path, a, k } => {
                SymplecticPath::a_iterate(path.build()?, a.to_matrix()?, *k).map_err(core)?
            }
            PathSpec::BrakeIterate { path, n, k } => {
                SymplecticPath::brake_iterate(path.build()?, n.to_matrix()?, *k).map_err(core)?
            }
            PathSpec::Sampled { times, matrices, chart } => {
                if chart != "cayley" {
                    return Err(format!("unknown chart '{chart}' (only 'cayley' is supported)"));
                }
                let ms = matrices.iter().map(|m| m.to_matrix()).collect::<Result<Vec<_>, _>>()?;
                SymplecticPath::sampled(times.clone(), ms, Chart::Cayley).map_err(core)?
            }
        })
    }

    pub fn from_path(path: &SymplecticPath) -> Self {
        let m = JsonMatrix::from_matrix;
        let d = |x: Domain| [x.start, x.end];
        let boxed = |p: &SymplecticPath| Box::new(PathSpec::from_path(p));
        match path {
            SymplecticPath::Constant { matrix, domain } => PathSpec::Constant {
                matrix: m(matrix),
                domain: d(*domain),
            },
            SymplecticPath::Exp {
                generator,
                slope,
                offset,
                domain,
            } => PathSpec::Exp {
                generator: m(generator),
                slope: *slope,
                offset: *offset,
                domain: d(*domain),
            },
            SymplecticPath::Product(l, r) => PathSpec::Product {
                left: boxed(l),
                right: boxed(r),
            },
            SymplecticPath::Concat(f, s) => PathSpec::Concat {
                first: boxed(f),
                second: boxed(s),
            },
            SymplecticPath::Reverse(p) => PathSpec::Reverse { path: boxed(p) },
            SymplecticPath::Conjugation { n, inner } => PathSpec::Conjugation {
                n: m(n),
                path: boxed(inner),
            },
            SymplecticPath::Power { inner, k } => PathSpec::Power {
                path: boxed(inner),
                k: *k,
            },
            SymplecticPath::Reparam { inner, domain } => PathSpec::Reparam {
                path: boxed(inner),
                domain: d(*domain),
            },
            SymplecticPath::AIterate(it) => PathSpec::AIterate {
                path: boxed(it.base()),
                a: m(it.a()),
                k: it.k(),
            },
            SymplecticPath::BrakeIterate(it) => PathSpec::BrakeIterate {
                path: boxed(it.base()),
                n: m(it.n()),
                k: it.k(),
            },
            SymplecticPath::Sampled(s) => PathSpec::Sampled {
                times: s.times().to_vec(),
                matrices: s.matrices().iter().map(m).collect(),
                chart: "cayley".into(),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_round_trip() {
        let a = CMat::from_fn(2, 3, |i, j| c(i as f64 - 0.5, j as f64 * 0.25));
        let text = serde_json::to_string(&JsonMatrix::from_matrix(&a)).unwrap();
        let back: JsonMatrix = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_matrix().unwrap(), a);
    }

    #[test]
    fn ragged_matrix_rejected() {
        let m = JsonMatrix(vec![vec![[1.0, 0.0]], vec![[1.0, 0.0], [0.0, 0.0]]]);
        assert!(m.to_matrix().is_err());
    }

    #[test]
    fn named_spaces() {
        let s = SpaceSpec::Named("canonical:2".into()).build(Tolerances::default()).unwrap();
        assert_eq!(s.dim(), 4);
        assert!(SpaceSpec::Named("canonical:0".into()).build(Tolerances::default()).is_err());
        assert!(SpaceSpec::Named("weird:1".into()).build(Tolerances::default()).is_err());
    }

    #[test]
    fn path_tree_round_trip() {
        let space = SymplecticSpace::canonical(1);
        let e = SymplecticPath::exp(space.j().clone(), Domain::new(0.0, 2.0).unwrap());
        let p = SymplecticPath::power(SymplecticPath::reverse(e), 2);
        let spec = PathSpec::from_path(&p);
        let text = serde_json::to_string(&spec).unwrap();
        let back: PathSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back, spec);
        let rebuilt = back.build().unwrap();
        for t in [0.0, 0.3, 1.7, 2.0] {
            assert!((rebuilt.eval(t) - p.eval(t)).norm() < 1e-14);
        }
    }
}

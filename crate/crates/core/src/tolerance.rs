/// Numerical thresholds shared by every module.
///
/// Structural checks (`structure`, `symplectic`, `lagrangian`) are relative
/// to the norms of the matrices involved. `rank` is the relative singular
/// value threshold used for every integer-valued dimension count; a singular
/// value within a factor `ambiguity` of the threshold (on either side) is
/// reported as ambiguous instead of being classified.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub structure: f64,
    pub symplectic: f64,
    pub lagrangian: f64,
    pub rank: f64,
    pub ambiguity: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            structure: 1e-9,
            symplectic: 1e-9,
            lagrangian: 1e-9,
            rank: 1e-8,
            ambiguity: 10.0,
        }
    }
}

impl Tolerances {
    /// Default thresholds with a different rank threshold.
    pub fn with_rank(rank: f64) -> Self {
        Tolerances {
            rank,
            ..Tolerances::default()
        }
    }
}

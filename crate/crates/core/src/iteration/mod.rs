//! Iteration formulae: Bott-type splittings, brake symmetry and the
//! Chebyshev block calculus behind them.

pub mod brake;
pub mod chebyshev;
pub mod nullity;
pub mod sampling;
pub mod verify;

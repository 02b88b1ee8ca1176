//! Transfer-matrix solver for `y'' + f(x) y = 0` with complex `f = g + i h`.
//!
//! The solution over an interval is carried by a 4×4 real matrix acting on
//! `(Re y, Im y, Re y', Im y')`, built from commuting 2×2 blocks. Long ranges
//! are covered by chaining sections, an optional first-order correction
//! improves each section, and periodic coefficients yield Bloch wavenumbers.
//! A brute-force RK4 integrator serves as the reference.

pub mod basis;
pub mod bloch;
pub mod error;
pub mod oracle;
pub mod planar;
pub mod profiles;
pub mod propagate;
pub mod transfer;

pub use basis::{psi, wkb, BasisEval, WkbEval};
pub use bloch::{band_scan, bloch_wavenumbers, kappa_x_independence, monodromy, BandPoint, BlochResult};
pub use error::{Error, Result};
pub use oracle::{oracle_monodromy, rk_solve, OracleConfig};
pub use planar::PlanarMatrix;
pub use profiles::{parse_expression, CoefficientProfile, Expression, QuadratureConfig};
pub use propagate::{chained_transfer, make_partition, solve_ivp, Partition, SolutionTrace};
pub use transfer::{build_q, ComplexMatrix2, Interval, State, TransferMatrix};

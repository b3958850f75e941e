//! p-adic numbers with tracked precision, plus the linear algebra and power
//! series machinery built on top of them.

pub mod matrix;
pub mod number;
pub mod poly;
pub mod series;
pub mod solve;

pub use matrix::PadicMatrix;
pub use number::{Padic, PadicError, PrecisionPolicy, INF};
pub use series::{PadicPowerSeries, ZpSeries};
pub use solve::{solve_separated, solve_single, strassmann_bound, Root, RootReport, SeparatedSystem, SolverConfig};

//! Even-degree hyperelliptic curves y^2 = f(x) with square leading
//! coefficient, over Q or a real quadratic field, and their p-adic local
//! structure at a good prime.

pub mod count;
pub mod field;
pub mod local;
pub mod model;
pub mod search;

pub use field::{qpoly, BaseField, QPoly, QuadElem};
pub use local::{CurvePoint, DiscKind, LocalCurve, LocalExpansion, ResidueDisc};
pub use model::{integral_sqrt, CurveError, CurveModel, IntPoint, PointMap};
pub use search::point_search;

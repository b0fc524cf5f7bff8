//! Exact-arithmetic checks of Kac-Schwarz operators, boson-fermion
//! correspondence and Plucker coordinates for KP tau-functions.

pub mod boson;
pub mod coeff;
pub mod fermion;
pub mod grassmann;
pub mod kacschwarz;
pub mod laurent;
pub mod models;
pub mod oracle;
pub mod qtorus;
pub mod suite;

pub use boson::{PPoly, Partition};
pub use coeff::{parse_scalar, CoeffError, Scalar};
pub use grassmann::{AdmissibleBasis, MinorConvention, MiwaSign};
pub use kacschwarz::{CheckReport, ModelInstance, Status, WBounds};
pub use laurent::{SeriesComparison, ZSeries};
pub use models::{BasisSign, ModelId};
pub use qtorus::{DPoly, TorusOp};

//! Certified computational workbench for level-1 algebraic cusp forms.
//!
//! The crate has three layers:
//!
//! * rigorous numerics — dyadic big-floats with directed rounding, real
//!   intervals and complex boxes, special functions (digamma, trigamma),
//!   rapidly converging kernel series and certified adaptive quadrature;
//! * the Archimedean bookkeeping — the ring spanned by `1`, `eps` and the
//!   induced characters `I_w`, epsilon factors, a registry of the known
//!   cuspidal parameters, and the explicit-formula functionals `J_F`,
//!   `F^(0)`, `F^(i/4pi)` for the Odlyzko test-function families;
//! * the applications — negativity certificates for the explicit-formula
//!   quadratic form, short-vector enumeration of effective parameters,
//!   conjugacy classes and exact character traces of split classical groups,
//!   exact mass solving for the elliptic term of the trace formula, and
//!   Arthur-parameter enumeration behind the Siegel dimension tables.

pub mod bigfloat;
pub mod boxc;
pub mod interval;
pub mod jet;
pub mod kernels;
pub mod kinf;
pub mod catalog;
pub mod explicit;
pub mod fincke;
pub mod jacobi;
pub mod quad;
pub mod special;
pub mod testfn;
pub mod transcend;

pub use bigfloat::{BigFloat, Dir};
pub use boxc::BoxC;
pub use interval::{Interval, Truth};

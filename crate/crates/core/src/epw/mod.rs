//! The EPW locus `Y_A`: corank strata, the sextic equation, the map `psi`,
//! tangent spaces, projective duality and local models at `W_A`.

mod geometry;
mod psi;
mod report;
mod sextic;

pub use geometry::{
    dual_point_check, gradient_at, local_model, tangent_space, DualityCheck, LocalModel, LocalModelJson, TangentSpace,
};
pub use psi::{dpsi_check, dpsi_compare, psi_at, tangent_direction, DpsiComparison, PsiValue};
pub use report::{normalize_point, points_on_sextic, verify, VerificationReport, VerifyOptions};
pub use sextic::{
    chart_matrix, chart_vars, corank_at, intersection, minors_ideal, point_scalars, sextic_cross_check_20x20,
    sextic_equation, strata_scan, ChartMatrix, SexticEquation, StrataScan, StratumPoint,
};

//! Contact geometry of the boundary `M = ρ⁻¹(ε)` of a Milnor fillable
//! germ, with `ρ = |Φ|²` pulled back from an embedding.

pub mod forms;
pub mod ops;
pub mod poly;
pub mod variety;

pub use forms::{eval_forms, real_basis, FormsAtPoint, Frame, TangentVector};
pub use ops::{
    check_spsh, check_xi_projection, find_adaptation_constant, holomorphic_gradient,
    lambda_cone_check, openbook_criterion_check, reeb_field, rescaled_reeb_identity, xi_projection,
    AdaptationReport, ConeReport, CriterionReport, GradientCheck, IdentityResidual,
    ProjectionCheck, ReebCheck, SpshReport,
};
pub use poly::{Polynomial, C64};
pub use variety::{sample_points, PointSample, VarietyModel};

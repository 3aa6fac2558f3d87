//! Masses of piecewise-linear Lipschitz chains, Jacobians of seminorms,
//! Hausdorff measures and filling-radius bounds of PL metrics, and
//! comparison angles.

pub mod angle;
pub mod error;
pub mod geometry;
pub mod mass;
pub mod metric;
pub mod plmap;
pub mod seminorm;

pub use angle::{comparison_angle, quadruple_condition, Quadruple, QuadrupleCheck};
pub use error::{MassError, Result};
pub use mass::{chain_mass, current_mass, mass_lip_check, tilde_mass, CurrentMass, MassLipReport};
pub use metric::{filling_radius_bounds, fundamental_mass_check, hausdorff_measure, FillingRadiusBounds};
pub use plmap::{metric_derivative, metric_derivative_seminorm, PLChain, PLMap};
pub use seminorm::{seminorm_jacobian, JacobianMethod, Quadrature, Seminorm};

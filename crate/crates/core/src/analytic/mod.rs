//! Closed-form outage analysis.

pub mod kernel;
pub mod laplace;
pub mod outage;
pub mod thresholds;

pub use kernel::{lambda_kernel, lambda_kernel_exact, lambda_kernel_paper, InterferenceEnv, Kernel, LinkBudget};
pub use laplace::{laplace_closed, laplace_quadrature, laplace_taylor};
pub use outage::{outage_o1, outage_o2, outage_oma, success_o1, success_o2, success_oma};
pub use thresholds::{psi_values, threshold, PsiValues, Scheme, SirThresholds};

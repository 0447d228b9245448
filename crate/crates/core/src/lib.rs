//! Numerical toolkit for dynamic equations on time scales.
//!
//! Time scales are finite unions of closed intervals and isolated points.
//! Functions live on grids that keep every scattered point and sample dense
//! segments at a chosen step.

pub mod calculus;
pub mod error;
pub mod grid;
pub mod hull;
pub mod kamke;
pub mod mnc;
pub mod parabolic;
pub mod rdcont;
pub mod solver;
pub mod timescale;

pub use calculus::{antiderivative, delta_derivative, delta_integral, integral_from, mvt_hull_check, norm_bound_check};
pub use error::{Error, Result};
pub use grid::{Grid, GridFunction, Norm};
pub use kamke::{axiom_check, delta_diff_at_a_check, gronwall_uniqueness_probe, KamkeReport, KamkeSpec};
pub use mnc::{
    hausdorff_c0, mnc_continuity_bound, mnc_integral_inequality, mnc_on_function_space, set_distance, C0Layout,
    DiameterMnc, HausdorffC0, Mnc, TailShape, TailTerm, TailedSequence,
};
pub use parabolic::{
    convergence_study, semi_discretize, solve_parabolic, ball_bound, verify_hypotheses, DecayMode,
    ParabolicSpec,
};
pub use rdcont::{check_rd_continuity, check_rd_continuity_with, equicontinuity_partition, RdCheck, RdPartition, Violation};
pub use solver::{
    local_window, picard_iterate, step_solve, volterra_residual, xk_diagnostics, IvpSpec, PicardDiagnostics,
    PicardStatus, Rhs, SolutionTrace, Window, WindowPolicy,
};
pub use timescale::{PointClass, Segment, Side, TimeScale, TsInterval};

/// Library version recorded in run metadata.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

//! Envelopes, bound checks, convexity tests, the direction-pair search, the
//! Herglotz representation, covering radii and the rigidity probe.

pub mod bounds;
pub mod coefficients;
pub mod convexity;
pub mod covering;
pub mod css2;
pub mod envelopes;
pub mod herglotz;
pub mod rigidity;
pub mod sharpness;

pub use bounds::{
    check_f_growth, check_h_bounds, check_sum_bound, refined_distortion_check, BoundReport,
    BoundSample, HBoundsReport, RefinedDistortionReport,
};
pub use coefficients::{bieberbach_check, coefficient_check, koebe_distance, CoefficientReport};
pub use convexity::{
    chord_convexity, convex_curve_check, direction_convexity_check, ChordReport, CurveConvexity,
    DirectionConvexity,
};
pub use covering::{covering_radius, growth_order_l, CoveringReport, GrowthRow};
pub use css2::{css2_residual, css2_search, DirectionPair};
pub use envelopes::{envelopes, Envelope, Envelopes};
pub use herglotz::{css2_q, herglotz_delta, HerglotzResult};
pub use rigidity::{rigidity_probe, RigidityReport, RigidityVerdict};
pub use sharpness::{sharpness_table, Quantity, SharpnessRow};

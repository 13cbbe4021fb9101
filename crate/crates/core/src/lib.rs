//! Weighted Gaussian curvature of grayscale images.
//!
//! Two estimators of `Kw = (Ixx*Iyy - Ixy^2) / (1 + Ix^2 + Iy^2)`:
//!
//! - the classical finite-difference composition ([`curvature::classical`]),
//! - the angle deficit `2*pi - sum(theta_i)` over the four triangles around
//!   each pixel ([`curvature::discrete`]), optionally served from a
//!   precomputed angle table ([`lut`]).
//!
//! Supporting modules generate developable test surfaces ([`synth`]), read
//! and write images and fields ([`imgio`]), and time the schemes against
//! each other ([`bench`]).

pub mod bench;
pub mod cli;
pub mod curvature;
pub mod error;
pub mod image;
pub mod imgio;
pub mod lut;
pub mod synth;

pub use curvature::{
    corner_angle, gaussian_curvature_classical, gradient_x, gradient_y, neighbor_diffs, second_xx,
    second_xy, second_yy, weighted_curvature_classical, weighted_curvature_discrete,
    weighted_curvature_discrete_real, BoundaryPolicy, NeighborDiffs, SchemeConfig, StencilMode,
};
pub use error::{CurvatureError, IoError};
pub use image::{GrayImage, Raster, ScalarField};
pub use lut::{AngleLut, LimitOrientation, LutVariant};

//! Propagation of monochromatic scalar beams by the angular-spectrum and
//! Dirac-form methods, with every conserved functional of the underlying
//! field theory available as an executable diagnostic.
//!
//! Conventions used throughout:
//!
//! * fields are synthesized as `psi(x) = (1/2pi) int dp a(p) e^{+ip.x}`;
//! * `zeta_p = +(k0^2 - p^2)^{1/2}`, real and non-negative for propagating
//!   modes and `i|zeta_p|` for evanescent ones;
//! * transverse coordinates are measured from the geometric grid centre and
//!   the axes `(x, y, z)` are right-handed.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod beams;
pub mod diagnostics;
pub mod dirac;
pub mod error;
mod fft;
pub mod field;
pub mod flow;
pub mod grid;
pub mod io;
pub mod modes;
pub mod propagate;
pub mod window;

pub use error::{Error, Result};
pub use field::{
    forward_transform, gradient_xy, integrate_plane, integrate_plane_complex, inverse_transform, laplacian,
    CauchyPlane, Field2D, Spectrum2D,
};
pub use grid::Grid2D;

//! Special functions and quadrature shared by every matrix-element formula:
//! spherical harmonics, spherical Bessel functions, Gaunt coefficients,
//! Gauss-Legendre rules and the radial basis families.

pub mod bessel;
pub mod gaunt;
pub mod harmonics;
pub mod legendre;
pub mod radial;

pub use bessel::{sph_bessel, sph_bessel_upto, sph_bessel_upto_with_deriv};
pub use gaunt::{gaunt, wigner_3j, GauntTable};
pub use harmonics::{
    dir_to_angles, lm_count, lm_index, sph_harm, sph_harm_dtheta, sph_harm_row,
    sph_harm_row_dir, AngularGrid, HarmonicsError,
};
pub use legendre::{gauss_legendre, legendre_upto, legendre_with_derivative};
pub use radial::{RadialError, RadialFamily, RadialKind};

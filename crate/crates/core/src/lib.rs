//! Rational points of bounded height on the del Pezzo surface of degree six
//! with a single A2 singularity, cut out in P^6 by nine quadrics.
//!
//! The crate counts points on the open subset `U = S \ {x5 = 0}` in two
//! independent ways (through the plane parametrization and through the
//! universal torsor), and computes the analytic ingredients of the leading
//! constant: the arithmetic functions behind the height zeta function, the
//! local densities and the real density.
//!
//! Module map:
//!
//! * [`surface`]: the surface, its height, the parametrization from the
//!   plane, the ground-truth enumerator and point counts over `F_p`.
//! * [`torsor`]: the torsor map, the canonical integral section, the torsor
//!   count `T(B)` and the points lying on the coordinate curves.
//! * [`arithmetic`]: Möbius-type sums, `Δ(n)`, real zeta values, Euler
//!   factors and the predicted leading constant.
//! * [`density`]: the real density by two unrelated quadrature routes.

pub mod arithmetic;
pub mod density;
mod error;
pub mod intmath;
pub mod surface;
pub mod torsor;

pub use error::{Error, Result};
pub use surface::{PlanePoint, SurfacePoint};
pub use torsor::{CanonicalTorsorPoint, TorsorPoint};

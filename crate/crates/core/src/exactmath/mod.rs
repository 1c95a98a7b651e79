//! Exact scalar and polynomial arithmetic.

pub mod bivariate;
pub mod elimination;
pub mod rational;
pub mod ring;
pub mod roots;
pub mod surd;
pub mod univariate;

pub use bivariate::BiPoly;
pub use elimination::{cross_resultant, gcd_bivariate, resultant_in_second_var};
pub use rational::{format_rational, int, parse_rational, rat, Rational};
pub use roots::{default_tolerance, isolate_all_real_roots, isolate_real_roots, RootInterval};
pub use univariate::UniPoly;

//! Exact-arithmetic laboratory for the number of distinct distances between
//! three anchor points and a finite point set.
//!
//! The crate is organised bottom-up:
//!
//! * [`exactmath`]: rationals, univariate/bivariate polynomials, resultants,
//!   subresultant GCDs and Sturm root isolation.
//! * [`frame`]: anchor normalisation and squared-distance triples.
//! * [`census`]: the distinct-distance set, fibers around the third anchor
//!   and the equal-distance pair count.
//! * [`curvefam`]: the quartic curves `gamma_{X,V}` in the `(Y, U)` plane,
//!   witnesses, duality, overlap analysis and parameter recovery.
//! * [`incidence`]: brute-force incidence counting over `D^4` and the
//!   instance-level inequality chain.
//! * [`zfcore`]: zeros of a trivariate polynomial on a Cartesian product.
//! * [`lab`]: generators, scaling scans, annealing search, self-test.

pub mod error;
pub mod exactmath;
pub mod frame;
pub mod census;
pub mod curvefam;
pub mod incidence;
pub mod zfcore;
pub mod lab;

pub use error::{Error, Result};

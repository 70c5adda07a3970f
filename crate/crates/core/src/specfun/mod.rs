//! Real-argument special functions: gamma, terminating hypergeometric
//! series, integer- and real-order associated Legendre functions.
//!
//! Legendre functions here never carry the Condon-Shortley phase. The
//! `(-1)^m` factor is applied once, by the spherical-harmonic constructors
//! in [`crate::model`].

mod gamma;
mod hyper;
mod legendre;

pub use gamma::{factorial, gamma, gamma_ratio, ln_gamma};
pub use hyper::{hyp1f1_terminating, hyp2f1_terminating};
pub use legendre::{
    legendre_int, legendre_negative_order, legendre_real_order, sin_power, LegendreRealOrder,
    RealOrderLegendreParams,
};

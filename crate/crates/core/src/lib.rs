//! Witten's psi-class intersection numbers in exact arithmetic: the DVV
//! recursion, closed n-point formulas, the Painleve I bridge and the
//! large-genus expansions built on top of them.

pub mod arith;
pub mod asymptotics;
pub mod closed_form;
pub mod decimal;
pub mod dvv;
pub mod error;
pub mod harness;
pub mod painleve;
pub mod par;

pub use arith::Rational;
pub use dvv::{c_value, DVec};
pub use error::{Error, Result};

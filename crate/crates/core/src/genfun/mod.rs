//! Conversions between recurrences and equations for their generating
//! functions.

mod ode;
mod rational;

pub use ode::{
    c2_homogenize, c2_to_diff, diff_to_c2, diff_to_holonomic, holonomic_to_diff, homogenize,
    DerivedRecurrence, DiffEquation,
};
pub use rational::{cfinite_from_rational, genfun_cfinite, genfun_polynomial, RationalGF};

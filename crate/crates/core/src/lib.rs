//! Exact algorithms for guessing recurrences, converting them to and from
//! generating functions, computing closure properties and closed forms, and
//! estimating asymptotics, for polynomial, C-finite, holonomic and C^2-finite
//! sequences.

pub mod asymptotics;
pub mod c2;
pub mod closedform;
pub mod closure;
pub mod error;
pub mod exact;
pub mod format;
pub mod genfun;
pub mod guess;
pub mod seq;

pub use error::{Error, Result};
pub use exact::{ExpPoly, Matrix, Nf, NumberField, Poly, RatFunc, Rational};
pub use seq::{CoeffRingKind, RecurrenceSystem, Sequence, ShiftOperator};

//! Exact arithmetic: rationals, polynomials, rational functions, number
//! fields, exponential polynomials and linear algebra.

pub mod exppoly;
pub mod frac;
pub mod matrix;
pub mod numfield;
pub mod poly;
pub mod ratfunc;
pub mod rational;
pub mod ring;
pub mod roots;

pub use exppoly::ExpPoly;
pub use frac::{CoeffRing, Frac};
pub use matrix::Matrix;
pub use numfield::{Nf, NumberField};
pub use poly::{qpoly, Poly};
pub use ratfunc::RatFunc;
pub use rational::{clear_denominators, q, qq, Rational};
pub use ring::{Field, Ring};
pub use roots::{quadratic_factor, rational_roots, squarefree_decomposition};

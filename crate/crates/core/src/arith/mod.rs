//! Exact arithmetic: rationals, factoring, square classes, Hilbert symbols and
//! polynomials over Q.

pub mod factor;
pub mod hilbert;
pub mod poly;
pub mod rational;
pub mod square_class;

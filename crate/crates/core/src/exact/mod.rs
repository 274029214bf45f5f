//! Exact arithmetic shared by every engine: big rationals, multi-indices over
//! `N^∞`, double factorials and coefficient-family inversion.

mod combinat;
mod inverse;
mod multiindex;
mod rational;

pub use combinat::{binomial, double_factorial, factorial, multinomial};
pub(crate) use combinat::dfact;
pub use inverse::{invert_coefficient_family, CoefficientInverse};
pub use multiindex::{enumerate_sub_multiindices, multiindex_binomial, multiindex_norms, MultiIndex};
pub use rational::{format_fraction, format_rational, int, is_reduced, parse_rational, rat, sign, Rational};

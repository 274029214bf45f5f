//! Exact intersection numbers of ψ and κ classes on the moduli spaces of
//! stable curves `M̄_{g,n}`.
//!
//! Pure ψ numbers `⟨τ_{d_1}…τ_{d_n}⟩_g` come from two independent engines:
//! the n-point function recursion in [`npoint`] and the τ/κ recursion in
//! [`volume`]. Mixed numbers `⟨∏τ_{d_j} κ(b)⟩_g` (higher Weil–Petersson
//! volumes) come from [`volume`]. The remaining modules verify identities,
//! Virasoro constraints and denominator properties on top of those engines.

pub mod denom;
pub mod error;
pub mod exact;
pub mod identities;
pub mod moduli;
pub mod npoint;
pub mod poly;
pub mod virasoro;
pub mod volume;

pub mod cli;

pub use error::{Error, Result};
pub use exact::{MultiIndex, Rational};

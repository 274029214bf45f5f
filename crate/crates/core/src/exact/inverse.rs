//! Inversion of coefficient families indexed by multi-indices.
//!
//! Two families `α, β : N^∞ → Q` are mutually inverse when
//! `α(0)β(0) = 1` and `Σ_{L+L'=b} α(L)β(L') = 0` for every `b ≠ 0`. Under
//! that relation a transform `G(b) = Σ α(L) F(L', ·)` is undone by the same
//! transform with `β`.

use std::collections::{BTreeMap, HashMap};
use std::sync::RwLock;

use num_traits::Zero;

use super::{MultiIndex, Rational};
use crate::error::{Error, Result};

/// Lazily computed, memoized inverse of a coefficient family.
pub struct CoefficientInverse<F> {
    beta: F,
    beta0_inv: Rational,
    memo: RwLock<HashMap<MultiIndex, Rational>>,
}

impl<F> CoefficientInverse<F>
where
    F: Fn(&MultiIndex) -> Rational,
{
    pub fn new(beta: F) -> Result<Self> {
        let b0 = beta(&MultiIndex::empty());
        if b0.is_zero() {
            return Err(Error::NotInvertible);
        }
        Ok(CoefficientInverse {
            beta,
            beta0_inv: b0.recip(),
            memo: RwLock::new(HashMap::new()),
        })
    }

    /// `α(b) = −β(0)⁻¹ Σ_{L+L'=b, L'≠0} α(L) β(L')`
    pub fn get(&self, b: &MultiIndex) -> Rational {
        if b.is_empty() {
            return self.beta0_inv.clone();
        }
        if let Some(v) = self.memo.read().unwrap().get(b) {
            return v.clone();
        }
        let mut acc = Rational::zero();
        for (l, rest) in b.splits() {
            if rest.is_empty() {
                continue;
            }
            acc += self.get(&l) * (self.beta)(&rest);
        }
        let value = -acc * &self.beta0_inv;
        self.memo.write().unwrap().insert(b.clone(), value.clone());
        value
    }

    /// The inverse family on every multi-index of weight at most `max_weight`.
    pub fn table(&self, max_weight: u32) -> BTreeMap<MultiIndex, Rational> {
        MultiIndex::all_up_to_weight(max_weight)
            .into_iter()
            .map(|b| {
                let v = self.get(&b);
                (b, v)
            })
            .collect()
    }
}

/// Inverts `beta` on all multi-indices up to `max_weight`.
pub fn invert_coefficient_family<F>(beta: F, max_weight: u32) -> Result<BTreeMap<MultiIndex, Rational>>
where
    F: Fn(&MultiIndex) -> Rational,
{
    Ok(CoefficientInverse::new(beta)?.table(max_weight))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{dfact, rat, sign};
    use num_traits::One;

    fn gamma(l: &MultiIndex) -> Rational {
        let (w, s) = l.norms();
        sign(s) / Rational::from_integer(l.factorial() * dfact(2 * w as i64 + 1))
    }

    #[test]
    fn identity_family_inverts_to_itself() {
        let delta = |l: &MultiIndex| {
            if l.is_empty() {
                Rational::one()
            } else {
                Rational::zero()
            }
        };
        for (l, v) in invert_coefficient_family(delta, 5).unwrap() {
            assert_eq!(v, delta(&l), "at {l:?}");
        }
    }

    #[test]
    fn inverse_of_gamma() {
        let inv = CoefficientInverse::new(gamma).unwrap();
        assert_eq!(inv.get(&MultiIndex::empty()), rat(1, 1));
        assert_eq!(inv.get(&MultiIndex::single(1, 1)), rat(1, 3));
        assert_eq!(inv.get(&MultiIndex::single(2, 1)), rat(1, 15));
    }

    #[test]
    fn zero_constant_term_rejected() {
        let r = CoefficientInverse::new(|l: &MultiIndex| if l.is_empty() { rat(0, 1) } else { rat(1, 1) });
        assert!(matches!(r, Err(Error::NotInvertible)));
    }

    #[test]
    fn double_inversion_round_trips() {
        let alpha = invert_coefficient_family(gamma, 6).unwrap();
        let back = invert_coefficient_family(|l| alpha[l].clone(), 6).unwrap();
        for (l, v) in back {
            assert_eq!(v, gamma(&l), "at {l:?}");
        }
    }
}

//! Mixed ψ/κ correlators `⟨∏τ_{d_j} κ(b)⟩_g` (higher Weil–Petersson volumes).
//!
//! [`VolumeEngine`] evaluates them by the τ/κ recursion on the largest ψ
//! exponent, with base cases `⟨τ_0³⟩_0 = 1`, `⟨τ_1⟩_1 = 1/24` and
//! `⟨κ_1τ_0⟩_1 = 1/24`. With `b = 0` the same recursion is the DVV recursion
//! for pure ψ numbers. An independent κ→ψ reduction is kept as an oracle.

mod table;

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use num_traits::{One, Zero};
use rayon::prelude::*;

pub use table::{parse_exponents, CorrelatorKey, CorrelatorTable, Provenance};

use crate::error::{Error, Result};
use crate::exact::{dfact, int, rat, sign, MultiIndex, Rational};
use crate::moduli::is_stable;

pub struct VolumeEngine {
    table: Arc<CorrelatorTable>,
    alpha: RwLock<HashMap<MultiIndex, Rational>>,
    oracle: RwLock<HashMap<CorrelatorKey, Rational>>,
}

impl Default for VolumeEngine {
    fn default() -> Self {
        Self::new()
    }
}

impl VolumeEngine {
    pub fn new() -> Self {
        Self::with_table(Arc::new(CorrelatorTable::new()))
    }

    pub fn with_table(table: Arc<CorrelatorTable>) -> Self {
        VolumeEngine {
            table,
            alpha: RwLock::new(HashMap::new()),
            oracle: RwLock::new(HashMap::new()),
        }
    }

    pub fn table(&self) -> &Arc<CorrelatorTable> {
        &self.table
    }

    /// `α_b = b! Σ_{L+L'=b, L'≠0} (−1)^{‖L'‖−1} α_L / (L! L'! (2|L'|+1)!!)`,
    /// `α_0 = 1`.
    pub fn alpha_constant(&self, b: &MultiIndex) -> Rational {
        if b.is_empty() {
            return Rational::one();
        }
        if let Some(v) = self.alpha.read().unwrap().get(b) {
            return v.clone();
        }
        let mut acc = Rational::zero();
        for (l, rest) in b.splits() {
            if rest.is_empty() {
                continue;
            }
            let (w, s) = rest.norms();
            let denom = l.factorial() * rest.factorial() * dfact(2 * w as i64 + 1);
            acc += sign(s - 1) * self.alpha_constant(&l) / int(denom);
        }
        let value = acc * int(b.factorial());
        self.alpha.write().unwrap().insert(b.clone(), value.clone());
        value
    }

    /// Pure ψ correlator through the `b = 0` recursion.
    pub fn psi_correlator_wk(&self, g: u32, d: &[u32]) -> Result<Rational> {
        if d.is_empty() {
            return Err(Error::invalid("at least one ψ insertion is required"));
        }
        self.eval(&CorrelatorKey::psi_only(g, d))
    }

    /// `⟨κ(b) ∏τ_{d_j}⟩_g` with at least one τ insertion.
    pub fn mixed_correlator(&self, g: u32, d: &[u32], b: &MultiIndex) -> Result<Rational> {
        if d.is_empty() {
            return Err(Error::invalid(
                "at least one ψ insertion is required; use pure_kappa_volume for n = 0",
            ));
        }
        self.eval(&CorrelatorKey::new(g, d, b.clone()))
    }

    /// `⟨κ(b)⟩_g` on `M̄_g`, `g ≥ 2`, via the dilaton-type identity
    /// `(2g−2)⟨κ(b)⟩_g = Σ_{L+L'=b} (−1)^{‖L‖} C(b,L) ⟨τ_{|L|+1} κ(L')⟩_g`.
    pub fn pure_kappa_volume(&self, g: u32, b: &MultiIndex) -> Result<Rational> {
        if g <= 1 {
            return Err(Error::Unstable { genus: g, points: 0 });
        }
        self.eval(&CorrelatorKey::new(g, &[], b.clone()))
    }

    /// Any correlator; zero off the dimension constraint or when unstable.
    pub fn correlator(&self, g: u32, d: &[u32], b: &MultiIndex) -> Result<Rational> {
        self.eval(&CorrelatorKey::new(g, d, b.clone()))
    }

    pub fn correlator_by_key(&self, key: &CorrelatorKey) -> Result<Rational> {
        self.eval(key)
    }

    /// Evaluates many keys in parallel on the current rayon pool, returning
    /// values in input order.
    pub fn correlators(&self, keys: &[CorrelatorKey]) -> Result<Vec<Rational>> {
        keys.par_iter().map(|k| self.eval(k)).collect()
    }

    fn eval(&self, key: &CorrelatorKey) -> Result<Rational> {
        if !key.is_admissible() {
            return Ok(Rational::zero());
        }
        if let Some(v) = self.table.get(key) {
            return Ok(v);
        }
        let value = match base_case(key) {
            Some(v) => v,
            None if key.points() == 0 => self.pure_kappa_from_dilaton(key)?,
            None => self.recursion(key)?,
        };
        self.table.record(key, &value, Provenance::Recursion)?;
        Ok(value)
    }

    fn pure_kappa_from_dilaton(&self, key: &CorrelatorKey) -> Result<Rational> {
        let g = key.genus();
        let b = key.kappa();
        let mut acc = Rational::zero();
        for (l, rest) in b.splits() {
            let (w, s) = l.norms();
            let v = self.eval(&CorrelatorKey::new(g, &[w + 1], rest))?;
            acc += sign(s) * int(b.binomial(&l)) * v;
        }
        Ok(acc / int(2 * g as i64 - 2))
    }

    /// One step of the recursion on `d_1 = max d`.
    fn recursion(&self, key: &CorrelatorKey) -> Result<Rational> {
        let g = key.genus();
        let b = key.kappa();
        let d1 = key.psi()[0];
        let rest = &key.psi()[1..];
        let mut total = Rational::zero();
        for (l, l_rest) in b.splits() {
            let coef = self.alpha_constant(&l) * int(b.binomial(&l));
            let w = l.weight();

            // τ_{d_1} merges with τ_{d_j}
            for j in 0..rest.len() {
                if j > 0 && rest[j] == rest[j - 1] {
                    continue;
                }
                let mult = rest.iter().filter(|&&x| x == rest[j]).count();
                let dj = rest[j];
                let merged = w + d1 + dj;
                if merged == 0 {
                    continue;
                }
                let mut psi: Vec<u32> = rest.to_vec();
                psi.remove(j);
                psi.push(merged - 1);
                let v = self.eval(&CorrelatorKey::new(g, &psi, l_rest.clone()))?;
                if v.is_zero() {
                    continue;
                }
                let ratio = Rational::new(dfact(2 * merged as i64 - 1), dfact(2 * dj as i64 - 1));
                total += &coef * ratio * v * int(mult);
            }

            let Some(m) = (w + d1).checked_sub(2) else {
                continue;
            };

            // genus reduction
            if g >= 1 {
                let mut acc = Rational::zero();
                for r in 0..=m {
                    let s = m - r;
                    let mut psi = rest.to_vec();
                    psi.push(r);
                    psi.push(s);
                    let v = self.eval(&CorrelatorKey::new(g - 1, &psi, l_rest.clone()))?;
                    if !v.is_zero() {
                        acc += v * int(dfact(2 * r as i64 + 1) * dfact(2 * s as i64 + 1));
                    }
                }
                total += &coef * acc / int(2);
            }

            // splitting into two components
            let mut acc = Rational::zero();
            for (e, f) in l_rest.splits() {
                let c_ef = int(l_rest.binomial(&e));
                let e_w = e.weight() as i64;
                for mask in 0..(1u32 << rest.len()) {
                    let (left, right): (Vec<_>, Vec<_>) =
                        rest.iter().copied().enumerate().partition(|(i, _)| mask & (1 << i) != 0);
                    let left: Vec<u32> = left.into_iter().map(|(_, x)| x).collect();
                    let right: Vec<u32> = right.into_iter().map(|(_, x)| x).collect();
                    let left_sum: i64 = left.iter().map(|&x| x as i64).sum();
                    for g1 in 0..=g {
                        // dimension of the left factor fixes r
                        let r = 3 * g1 as i64 - 2 + left.len() as i64 - left_sum - e_w;
                        if r < 0 || r > m as i64 {
                            continue;
                        }
                        let r = r as u32;
                        let s = m - r;
                        let mut lp = left.clone();
                        lp.push(r);
                        let lv = self.eval(&CorrelatorKey::new(g1, &lp, e.clone()))?;
                        if lv.is_zero() {
                            continue;
                        }
                        let mut rp = right.clone();
                        rp.push(s);
                        let rv = self.eval(&CorrelatorKey::new(g - g1, &rp, f.clone()))?;
                        if rv.is_zero() {
                            continue;
                        }
                        acc += &c_ef
                            * lv
                            * rv
                            * int(dfact(2 * r as i64 + 1) * dfact(2 * s as i64 + 1));
                    }
                }
            }
            total += coef * acc / int(2);
        }
        Ok(total / int(dfact(2 * d1 as i64 + 1)))
    }

    /// Reduces κ classes to ψ classes one at a time through
    /// `⟨κ_a κ(b') ∏τ⟩_{g,n} = Σ_{S≤b'} (−1)^{‖S‖} C(b',S) ⟨τ_{a+1+|S|} κ(b'−S) ∏τ⟩_{g,n+1}`,
    /// then evaluates the pure ψ numbers by the `b = 0` recursion. Kept
    /// separate from the main recursion for cross-checking.
    pub fn kappa_reduction_oracle(&self, g: u32, d: &[u32], b: &MultiIndex) -> Result<Rational> {
        let key = CorrelatorKey::new(g, d, b.clone());
        if b.is_empty() {
            return if d.is_empty() { Ok(Rational::zero()) } else { self.eval(&key) };
        }
        if let Some(v) = self.oracle.read().unwrap().get(&key) {
            return Ok(v.clone());
        }
        let a = b.entries()[0].0;
        let rest = b.checked_sub(&MultiIndex::single(a, 1)).expect("a is in b");
        let mut acc = Rational::zero();
        for (s_idx, remaining) in rest.splits() {
            let (w, size) = s_idx.norms();
            let mut psi = d.to_vec();
            psi.push(a + 1 + w);
            let v = self.kappa_reduction_oracle(g, &psi, &remaining)?;
            acc += sign(size) * int(rest.binomial(&s_idx)) * v;
        }
        self.oracle.write().unwrap().insert(key, acc.clone());
        Ok(acc)
    }

    /// LHS − RHS of
    /// `Σ (−1)^{‖L‖} C(b,L) ⟨τ_{|L|} ∏τ_{d_j} κ(L')⟩_g = Σ_j ⟨τ_{d_j−1} ∏_{i≠j} τ_{d_i} κ(b)⟩_g`.
    pub fn string_identity_residual(&self, g: u32, d: &[u32], b: &MultiIndex) -> Result<Rational> {
        if !is_stable(g, d.len()) {
            return Err(Error::Unstable { genus: g, points: d.len() });
        }
        let mut lhs = Rational::zero();
        for (l, rest) in b.splits() {
            let (w, s) = l.norms();
            let mut psi = d.to_vec();
            psi.push(w);
            lhs += sign(s) * int(b.binomial(&l)) * self.correlator(g, &psi, &rest)?;
        }
        let mut rhs = Rational::zero();
        for j in 0..d.len() {
            if d[j] == 0 {
                continue;
            }
            let mut psi = d.to_vec();
            psi[j] -= 1;
            rhs += self.correlator(g, &psi, b)?;
        }
        Ok(lhs - rhs)
    }

    /// LHS − RHS of
    /// `Σ (−1)^{‖L‖} C(b,L) ⟨τ_{|L|+1} ∏τ_{d_j} κ(L')⟩_g = (2g−2+n) ⟨∏τ_{d_j} κ(b)⟩_g`.
    pub fn dilaton_identity_residual(&self, g: u32, d: &[u32], b: &MultiIndex) -> Result<Rational> {
        if !is_stable(g, d.len()) {
            return Err(Error::Unstable { genus: g, points: d.len() });
        }
        let mut lhs = Rational::zero();
        for (l, rest) in b.splits() {
            let (w, s) = l.norms();
            let mut psi = d.to_vec();
            psi.push(w + 1);
            lhs += sign(s) * int(b.binomial(&l)) * self.correlator(g, &psi, &rest)?;
        }
        let euler = 2 * g as i64 - 2 + d.len() as i64;
        let rhs = int(euler) * self.correlator(g, d, b)?;
        Ok(lhs - rhs)
    }
}

fn base_case(key: &CorrelatorKey) -> Option<Rational> {
    let b = key.kappa();
    match (key.genus(), key.psi()) {
        (0, [0, 0, 0]) if b.is_empty() => Some(Rational::one()),
        (1, [1]) if b.is_empty() => Some(rat(1, 24)),
        (1, [0]) if *b == MultiIndex::single(1, 1) => Some(rat(1, 24)),
        _ => None,
    }
}

/// `⟨τ_{d_1}…τ_{d_n}⟩_0 = (n−3)! / ∏ d_j!` on the dimension constraint.
pub fn genus_zero_closed_form(d: &[u32]) -> Rational {
    let n = d.len();
    if n < 3 || d.iter().sum::<u32>() as usize != n - 3 {
        return Rational::zero();
    }
    let denom = d.iter().fold(num_bigint::BigInt::one(), |acc, &x| acc * crate::exact::factorial(x as u64));
    Rational::new(crate::exact::factorial(n as u64 - 3), denom)
}

pub fn alpha_constant(engine: &VolumeEngine, l: &MultiIndex) -> Rational {
    engine.alpha_constant(l)
}

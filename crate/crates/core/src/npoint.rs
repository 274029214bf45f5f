//! n-point functions of ψ classes.
//!
//! The n-point function is `F(x_1..x_n) = Σ ⟨τ_{d_1}…τ_{d_n}⟩_g ∏ x_j^{d_j}`
//! and its normalized form is `G = exp(−Σx_j³/24)·F`. Starting from
//! `G(x) = x⁻²`, every `G` with `n ≥ 2` is assembled from the symmetric
//! polynomials `Δ` and `P_r`:
//!
//! ```text
//! G  = Σ_{r,s} (2r+n−3)!! / (4^s (2r+2s+n−1)!!) · P_r Δ^s
//! Δ  = ((Σx)³ − Σx³) / 3
//! P_r = 1/(2Σx) · Σ_{I⊔J=[n]} (Σ_I x)² (Σ_J x)² Σ_{r'} G_{r'}(x_I) G_{r−r'}(x_J)
//! ```
//!
//! Two realizations live here. [`NPointPolynomials`] materializes each
//! polynomial and certifies the exact division by `Σx`; it is used for small
//! `n`. [`NPointEngine`] evaluates single coefficients lazily, exploiting
//! symmetry, and is what correlator queries go through.

use std::collections::HashMap;
use std::hash::Hash;
use std::sync::{Arc, RwLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{dfact, factorial, int, multinomial, rat, sign, Rational};
use crate::moduli::{dimension, is_stable};
use crate::poly::HomogeneousPolynomial;

/// One homogeneous piece of a normalized n-point function.
///
/// The genus-0 one- and two-point functions are not polynomials; they are
/// kept as symbolic atoms with the product rules `(Σx)²·x⁻² = 1` and
/// `(Σx)²·(x+y)⁻¹ = x+y`.
#[derive(Clone, Debug, PartialEq)]
pub enum Component {
    Polynomial(HomogeneousPolynomial),
    /// `x⁻²`
    InverseSquare,
    /// `(x_1 + x_2)⁻¹`
    InverseSum,
}

impl Component {
    pub fn as_polynomial(&self) -> Option<&HomogeneousPolynomial> {
        match self {
            Component::Polynomial(p) => Some(p),
            _ => None,
        }
    }

    /// `(Σx)² · self`, always a polynomial.
    pub fn times_sum_squared(&self, nvars: usize) -> HomogeneousPolynomial {
        match self {
            Component::InverseSquare => HomogeneousPolynomial::one(1),
            Component::InverseSum => HomogeneousPolynomial::linear_sum(2, &[0, 1]),
            Component::Polynomial(p) => {
                let all: Vec<usize> = (0..nvars).collect();
                HomogeneousPolynomial::linear_sum(nvars, &all)
                    .pow(2)
                    .mul(p)
                    .expect("same variable count")
            }
        }
    }

    /// `(Σx) · self` for the two-point atom, which is the certified identity
    /// `(x+y)·(x+y)⁻¹ = 1`.
    pub fn times_sum(&self, nvars: usize) -> Option<HomogeneousPolynomial> {
        match self {
            Component::InverseSum => Some(HomogeneousPolynomial::one(2)),
            Component::InverseSquare => None,
            Component::Polynomial(p) => {
                let all: Vec<usize> = (0..nvars).collect();
                Some(HomogeneousPolynomial::linear_sum(nvars, &all).mul(p).expect("same variable count"))
            }
        }
    }
}

/// `(|I|, g)` naming the genus-`g` piece of the normalized `|I|`-point
/// function. Variables are always renamed to `x_1..x_{|I|}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct NormalizedComponentKey {
    points: usize,
    genus: u32,
}

impl NormalizedComponentKey {
    pub fn new(points: usize, genus: u32) -> Result<Self> {
        if points == 0 {
            return Err(Error::Unstable { genus, points });
        }
        Ok(NormalizedComponentKey { points, genus })
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    /// The two Laurent atoms `(0,1)` and `(0,2)`.
    pub fn is_special(&self) -> bool {
        self.genus == 0 && self.points <= 2
    }

    pub fn degree(&self) -> i64 {
        dimension(self.genus, self.points)
    }
}

/// `Δ(x_1..x_n) = ((Σx)³ − Σx³)/3`
pub fn delta_polynomial(n: usize) -> HomogeneousPolynomial {
    assert!(n >= 1, "Δ needs at least one variable");
    let all: Vec<usize> = (0..n).collect();
    let cube = HomogeneousPolynomial::linear_sum(n, &all).pow(3);
    let cubes = (0..n).fold(HomogeneousPolynomial::zero(n, 3), |acc, i| {
        acc.add(&HomogeneousPolynomial::linear_sum(n, &[i]).pow(3)).unwrap()
    });
    cube.sub(&cubes).unwrap().scale(&rat(1, 3))
}

/// `(2r+n−3)!! / (4^s (2r+2s+n−1)!!)`
fn theorem2_weight(r: u32, s: u32, n: usize) -> Rational {
    let n = n as i64;
    let (r, s) = (r as i64, s as i64);
    Rational::new(dfact(2 * r + n - 3), BigInt::from(4).pow(s as u32) * dfact(2 * r + 2 * s + n - 1))
}

/// `(−1)^s / (8^s (2r+2s+n−1) s!)`
fn theorem3_weight(r: u32, s: u32, n: usize) -> Rational {
    let denom = BigInt::from(8).pow(s) * (2 * r as i64 + 2 * s as i64 + n as i64 - 1) * factorial(s as u64);
    sign(s) / int(denom)
}

/// `1 / (24^k k!)`
fn exp_cube_weight(k: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::from(24).pow(k) * factorial(k as u64))
}

fn read<K: Eq + Hash, V: Clone>(memo: &RwLock<HashMap<K, V>>, key: &K) -> Option<V> {
    memo.read().unwrap().get(key).cloned()
}

fn write<K: Eq + Hash, V>(memo: &RwLock<HashMap<K, V>>, key: K, value: V) {
    memo.write().unwrap().insert(key, value);
}

/// Materialized polynomials `P_r`, `G_g` and `F_g`, memoized by `(n, index)`.
#[derive(Default)]
pub struct NPointPolynomials {
    components: RwLock<HashMap<(usize, u32), Arc<Component>>>,
    p_r: RwLock<HashMap<(usize, u32), Arc<Component>>>,
    full: RwLock<HashMap<(usize, u32), Arc<HomogeneousPolynomial>>>,
}

impl NPointPolynomials {
    pub fn new() -> Self {
        Self::default()
    }

    /// `P_r(x_1..x_n)`. For `n = 2, r = 0` this is the atom `(x+y)⁻¹`; for
    /// `n ≥ 3` the numerator is divided exactly by `Σx`, and a remainder is
    /// reported as [`Error::NotDivisible`].
    pub fn p_r_polynomial(&self, n: usize, r: u32) -> Result<Arc<Component>> {
        if n < 2 {
            return Err(Error::invalid(format!("P_r needs at least two variables, got {n}")));
        }
        if let Some(p) = read(&self.p_r, &(n, r)) {
            return Ok(p);
        }
        let numerator = self.p_r_numerator(n, r)?;
        let half = numerator.scale(&rat(1, 2));
        let all: Vec<usize> = (0..n).collect();
        let value = if half.degree() == 0 {
            // only n = 2, r = 0: the numerator must be exactly the constant 2
            if half != HomogeneousPolynomial::one(n) {
                return Err(Error::Inconsistent(format!("P_0 numerator in {n} variables is {half}")));
            }
            Component::InverseSum
        } else {
            Component::Polynomial(half.div_exact_by_sum(&all)?)
        };
        let value = Arc::new(value);
        write(&self.p_r, (n, r), value.clone());
        Ok(value)
    }

    /// `Σ_{I⊔J} (Σ_I x)²(Σ_J x)² Σ_{r'} G_{r'}(x_I) G_{r−r'}(x_J)` over ordered
    /// splits with both parts nonempty.
    pub fn p_r_numerator(&self, n: usize, r: u32) -> Result<HomogeneousPolynomial> {
        let mut acc = HomogeneousPolynomial::zero(n, 3 * r + n as u32 - 2);
        for mask in 1..(1u32 << n) - 1 {
            let left: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
            let right: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) == 0).collect();
            for r1 in 0..=r {
                let a = self.sum_squared_component(left.len(), r1)?.embed(n, &left);
                let b = self.sum_squared_component(right.len(), r - r1)?.embed(n, &right);
                if a.is_zero() || b.is_zero() {
                    continue;
                }
                acc = acc.add(&a.mul(&b)?)?;
            }
        }
        Ok(acc)
    }

    /// `(Σx)² G_g(x_1..x_m)`
    fn sum_squared_component(&self, m: usize, g: u32) -> Result<HomogeneousPolynomial> {
        let key = NormalizedComponentKey::new(m, g)?;
        Ok(self.normalized_component(key)?.times_sum_squared(m))
    }

    /// `G_g(x_1..x_n)`, the degree `3g+n−3` part of the normalized function.
    pub fn normalized_component(&self, key: NormalizedComponentKey) -> Result<Arc<Component>> {
        let (n, g) = (key.points, key.genus);
        if let Some(c) = read(&self.components, &(n, g)) {
            return Ok(c);
        }
        let value = match (n, g) {
            (1, 0) => Component::InverseSquare,
            (2, 0) => Component::InverseSum,
            (1, _) => Component::Polynomial(HomogeneousPolynomial::zero(1, 3 * g - 2)),
            _ => {
                let delta = delta_polynomial(n);
                let mut acc = HomogeneousPolynomial::zero(n, 3 * g + n as u32 - 3);
                for r in 0..=g {
                    let s = g - r;
                    let weight = theorem2_weight(r, s, n);
                    let term = match &*self.p_r_polynomial(n, r)? {
                        Component::Polynomial(p) => p.mul(&delta.pow(s))?,
                        // s = g ≥ 1 here, and Δ(x,y) = xy(x+y)
                        Component::InverseSum => delta.pow(s).div_exact_by_sum(&[0, 1])?,
                        Component::InverseSquare => unreachable!("P_r has n ≥ 2"),
                    };
                    acc = acc.add(&term.scale(&weight))?;
                }
                Component::Polynomial(acc)
            }
        };
        let value = Arc::new(value);
        write(&self.components, (n, g), value.clone());
        Ok(value)
    }

    /// `F_g(x_1..x_n)` for stable `(g, n)`, i.e. the degree `3g−3+n` part of
    /// `exp(Σx³/24)·G`.
    pub fn full_npoint(&self, n: usize, g: u32) -> Result<Arc<HomogeneousPolynomial>> {
        if n == 0 || !is_stable(g, n) {
            return Err(Error::Unstable { genus: g, points: n });
        }
        if let Some(f) = read(&self.full, &(n, g)) {
            return Ok(f);
        }
        let cubes = (0..n).fold(HomogeneousPolynomial::zero(n, 3), |acc, i| {
            acc.add(&HomogeneousPolynomial::linear_sum(n, &[i]).pow(3)).unwrap()
        });
        let mut acc = HomogeneousPolynomial::zero(n, dimension(g, n) as u32);
        for k in 0..=g {
            let e = cubes.pow(k).scale(&exp_cube_weight(k));
            let term = match &*self.normalized_component(NormalizedComponentKey::new(n, g - k)?)? {
                Component::Polynomial(p) => e.mul(p)?,
                // k = g ≥ 1 in both atom cases because (g, n) is stable
                Component::InverseSum => e.div_exact_by_sum(&[0, 1])?,
                Component::InverseSquare => divide_by_square(&e)?,
            };
            acc = acc.add(&term)?;
        }
        let acc = Arc::new(acc);
        write(&self.full, (n, g), acc.clone());
        Ok(acc)
    }

    /// `F_g` for `n = 2` through the `exp((Σx)³/24)` expansion.
    fn full_two_point_theorem3(&self, g: u32) -> Result<HomogeneousPolynomial> {
        let sum = HomogeneousPolynomial::linear_sum(2, &[0, 1]);
        let delta = delta_polynomial(2);
        let mut numerator = HomogeneousPolynomial::zero(2, 3 * g);
        for k in 0..=g {
            let s = g - k;
            let term = sum
                .pow(3 * k)
                .mul(&delta.pow(s))?
                .scale(&(exp_cube_weight(k) * theorem3_weight(0, s, 2)));
            numerator = numerator.add(&term)?;
        }
        numerator.div_exact_by_sum(&[0, 1])
    }
}

/// Quotient of a one-variable polynomial by `x²`.
fn divide_by_square(p: &HomogeneousPolynomial) -> Result<HomogeneousPolynomial> {
    if p.degree() < 2 {
        return Err(Error::NotDivisible("x^2".into()));
    }
    let mut out = HomogeneousPolynomial::zero(1, p.degree() - 2);
    for (_, c) in p.terms() {
        out = out.add(&HomogeneousPolynomial::monomial(vec![p.degree() - 2], c.clone()))?;
    }
    Ok(out)
}

type CoeffKey = (usize, u32, Vec<u32>);
type PdKey = (usize, u32, u32, Vec<u32>);

/// Sorted in decreasing order; every function memoized here is symmetric.
fn canon(a: &[u32]) -> Vec<u32> {
    let mut v = a.to_vec();
    v.sort_unstable_by(|x, y| y.cmp(x));
    v
}

/// Calls `f(b)` for every `b ≤ a` componentwise with `Σb = total`.
fn for_each_subvector(a: &[u32], total: u32, f: &mut impl FnMut(&[u32])) {
    fn rec(a: &[u32], pos: usize, remaining: u32, tail_cap: &[u32], acc: &mut Vec<u32>, f: &mut impl FnMut(&[u32])) {
        if pos == a.len() {
            if remaining == 0 {
                f(acc);
            }
            return;
        }
        if remaining > tail_cap[pos] {
            return;
        }
        for v in 0..=a[pos].min(remaining) {
            acc.push(v);
            rec(a, pos + 1, remaining - v, tail_cap, acc, f);
            acc.pop();
        }
    }
    let mut tail_cap = vec![0u32; a.len() + 1];
    for i in (0..a.len()).rev() {
        tail_cap[i] = tail_cap[i + 1] + a[i];
    }
    rec(a, 0, total, &tail_cap, &mut Vec::with_capacity(a.len()), f);
}

/// Coefficient-level evaluation of the n-point functions.
#[derive(Default)]
pub struct NPointEngine {
    explicit: NPointPolynomials,
    p_memo: RwLock<HashMap<CoeffKey, Rational>>,
    numerator_memo: RwLock<HashMap<CoeffKey, Rational>>,
    g_memo: RwLock<HashMap<CoeffKey, Rational>>,
    h_memo: RwLock<HashMap<CoeffKey, Rational>>,
    delta_memo: RwLock<HashMap<(u32, Vec<u32>), Rational>>,
    pd_memo: RwLock<HashMap<PdKey, Rational>>,
}

impl NPointEngine {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn polynomials(&self) -> &NPointPolynomials {
        &self.explicit
    }

    /// `⟨τ_{d_1}…τ_{d_n}⟩_g` as the coefficient of `∏x^d` in
    /// `exp(Σx³/24)·G`. Zero off the dimension constraint and for unstable
    /// `(g, n)`.
    pub fn psi_correlator(&self, g: u32, d: &[u32]) -> Rational {
        let n = d.len();
        if n == 0 || !is_stable(g, n) || d.iter().sum::<u32>() as i64 != dimension(g, n) {
            return Rational::zero();
        }
        if n <= 2 {
            return self.explicit.full_npoint(n, g).expect("stable").coefficient(d);
        }
        let d = canon(d);
        let mut acc = Rational::zero();
        // exp(Σx³/24) = ∏_j Σ_c x_j^{3c} / (24^c c!)
        let caps: Vec<u32> = d.iter().map(|&x| (x / 3).min(g)).collect();
        let mut c = vec![0u32; n];
        loop {
            let used: u32 = c.iter().sum();
            if used <= g {
                let rest: Vec<u32> = d.iter().zip(&c).map(|(x, k)| x - 3 * k).collect();
                let coeff = self.g_coefficient(n, g - used, &rest);
                if !coeff.is_zero() {
                    let w = c.iter().fold(Rational::one(), |w, &k| w * exp_cube_weight(k));
                    acc += w * coeff;
                }
            }
            // odometer over 0 ≤ c_j ≤ caps_j
            let mut i = 0;
            while i < n {
                if c[i] < caps[i] {
                    c[i] += 1;
                    break;
                }
                c[i] = 0;
                i += 1;
            }
            if i == n {
                break;
            }
        }
        acc
    }

    /// The same correlator through `F = exp((Σx)³/24) Σ (−1)^s P_r Δ^s /
    /// (8^s (2r+2s+n−1) s!)`. Requires `n ≥ 2`.
    pub fn psi_correlator_theorem3(&self, g: u32, d: &[u32]) -> Result<Rational> {
        let n = d.len();
        if n < 2 {
            return Err(Error::invalid("the exp((Σx)³/24) expansion needs at least two points"));
        }
        if !is_stable(g, n) || d.iter().sum::<u32>() as i64 != dimension(g, n) {
            return Ok(Rational::zero());
        }
        if n == 2 {
            return Ok(self.explicit.full_two_point_theorem3(g)?.coefficient(d));
        }
        let d = canon(d);
        let mut acc = Rational::zero();
        for k in 0..=g {
            for r in 0..=(g - k) {
                let s = g - k - r;
                let w = exp_cube_weight(k) * theorem3_weight(r, s, n);
                // [x^d] (Σx)^{3k} · (P_r Δ^s)
                let mut inner = Rational::zero();
                for_each_subvector(&d, 3 * k, &mut |e| {
                    let rest: Vec<u32> = d.iter().zip(e).map(|(x, y)| x - y).collect();
                    let q = self.p_delta_coefficient(n, r, s, &rest);
                    if !q.is_zero() {
                        let m = multinomial(&e.iter().map(|&x| x as u64).collect::<Vec<_>>());
                        inner += int(m) * q;
                    }
                });
                acc += w * inner;
            }
        }
        Ok(acc)
    }

    /// `[x^a] G_g(x_1..x_n)` for the polynomial components.
    pub fn component_coefficient(&self, n: usize, g: u32, a: &[u32]) -> Result<Rational> {
        let key = NormalizedComponentKey::new(n, g)?;
        if key.is_special() {
            return Err(Error::invalid("the genus-0 one- and two-point functions are not polynomials"));
        }
        if a.len() != n {
            return Err(Error::invalid("exponent vector length differs from the point count"));
        }
        Ok(self.g_coefficient(n, g, a))
    }

    /// `[x^a] P_r(x_1..x_n)` for `n ≥ 3`.
    pub fn p_coefficient(&self, n: usize, r: u32, a: &[u32]) -> Result<Rational> {
        if n < 3 || a.len() != n {
            return Err(Error::invalid("coefficient-level P_r needs n ≥ 3 and a length-n exponent"));
        }
        Ok(self.p(n, r, &canon(a)))
    }

    fn g_coefficient(&self, n: usize, g: u32, a: &[u32]) -> Rational {
        if a.iter().sum::<u32>() as i64 != dimension(g, n) {
            return Rational::zero();
        }
        if n == 1 {
            return Rational::zero();
        }
        if n == 2 {
            let comp = self
                .explicit
                .normalized_component(NormalizedComponentKey::new(2, g).expect("n = 2"))
                .expect("two-point component");
            return comp.as_polynomial().map_or_else(Rational::zero, |p| p.coefficient(a));
        }
        let key = (n, g, canon(a));
        if let Some(v) = read(&self.g_memo, &key) {
            return v;
        }
        let a = &key.2;
        let mut acc = Rational::zero();
        for r in 0..=g {
            let s = g - r;
            let v = self.p_delta_coefficient(n, r, s, a);
            if !v.is_zero() {
                acc += theorem2_weight(r, s, n) * v;
            }
        }
        write(&self.g_memo, key, acc.clone());
        acc
    }

    /// `[x^a] P_r Δ^s`
    fn p_delta_coefficient(&self, n: usize, r: u32, s: u32, a: &[u32]) -> Rational {
        let key = (n, r, s, canon(a));
        if let Some(v) = read(&self.pd_memo, &key) {
            return v;
        }
        let a = &key.3;
        let p_degree = 3 * r + n as u32 - 3;
        let mut acc = Rational::zero();
        if a.iter().sum::<u32>() == p_degree + 3 * s {
            for_each_subvector(a, p_degree, &mut |b| {
                let rest: Vec<u32> = a.iter().zip(b).map(|(x, y)| x - y).collect();
                let dv = self.delta_power(s, &rest);
                if !dv.is_zero() {
                    acc += self.p(n, r, &canon(b)) * dv;
                }
            });
        }
        write(&self.pd_memo, key, acc.clone());
        acc
    }

    /// `[x^b] P_r` with `b` sorted decreasingly, recovered from the numerator
    /// `N = 2(Σx)P_r` by `[x^{b+e_0}]N = 2 Σ_i [x^{b+e_0−e_i}] P_r`. Every
    /// other term on the right has a strictly larger leading exponent.
    fn p(&self, n: usize, r: u32, b: &[u32]) -> Rational {
        debug_assert_eq!(b, canon(b).as_slice());
        if b.iter().sum::<u32>() != 3 * r + n as u32 - 3 {
            return Rational::zero();
        }
        let key = (n, r, b.to_vec());
        if let Some(v) = read(&self.p_memo, &key) {
            return v;
        }
        let mut raised = b.to_vec();
        raised[0] += 1;
        let mut acc = self.numerator(n, r, &raised) / int(2);
        for i in 1..n {
            if b[i] == 0 {
                continue;
            }
            let mut shifted = raised.clone();
            shifted[i] -= 1;
            acc -= self.p(n, r, &canon(&shifted));
        }
        write(&self.p_memo, key, acc.clone());
        acc
    }

    /// `[x^a]` of the `P_r` numerator.
    fn numerator(&self, n: usize, r: u32, a: &[u32]) -> Rational {
        let key = (n, r, canon(a));
        if let Some(v) = read(&self.numerator_memo, &key) {
            return v;
        }
        let a = &key.2;
        let mut acc = Rational::zero();
        let mut left = Vec::with_capacity(n);
        let mut right = Vec::with_capacity(n);
        for mask in 1..(1u32 << n) - 1 {
            left.clear();
            right.clear();
            for (i, &x) in a.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    left.push(x);
                } else {
                    right.push(x);
                }
            }
            // (Σ_I x)² G_{r'}(x_I) has degree 3r' + |I| − 1
            let deg: u32 = left.iter().sum();
            let shifted = deg as i64 + 1 - left.len() as i64;
            if shifted < 0 || shifted % 3 != 0 || shifted / 3 > r as i64 {
                continue;
            }
            let r1 = (shifted / 3) as u32;
            let hl = self.h(left.len(), r1, &left);
            if hl.is_zero() {
                continue;
            }
            acc += hl * self.h(right.len(), r - r1, &right);
        }
        write(&self.numerator_memo, key, acc.clone());
        acc
    }

    /// `[x^a] (Σx)² G_g(x_1..x_m)`
    fn h(&self, m: usize, g: u32, a: &[u32]) -> Rational {
        if a.iter().sum::<u32>() as i64 != 3 * g as i64 + m as i64 - 1 {
            return Rational::zero();
        }
        match (m, g) {
            (1, 0) => return Rational::one(),
            (1, _) => return Rational::zero(),
            (2, 0) => return Rational::one(), // x + y, and |a| = 1
            _ => {}
        }
        let key = (m, g, canon(a));
        if let Some(v) = read(&self.h_memo, &key) {
            return v;
        }
        let a = &key.2;
        let mut acc = Rational::zero();
        let mut b = a.clone();
        for i in 0..m {
            if a[i] >= 2 {
                b[i] -= 2;
                acc += self.g_coefficient(m, g, &b);
                b[i] += 2;
            }
            for j in (i + 1)..m {
                if a[i] >= 1 && a[j] >= 1 {
                    b[i] -= 1;
                    b[j] -= 1;
                    acc += self.g_coefficient(m, g, &b) * int(2);
                    b[i] += 1;
                    b[j] += 1;
                }
            }
        }
        write(&self.h_memo, key, acc.clone());
        acc
    }

    /// `[x^a] Δ^s`; only the nonzero entries of `a` matter.
    fn delta_power(&self, s: u32, a: &[u32]) -> Rational {
        let mut support: Vec<u32> = a.iter().copied().filter(|&x| x > 0).collect();
        support.sort_unstable_by(|x, y| y.cmp(x));
        if support.iter().sum::<u32>() != 3 * s {
            return Rational::zero();
        }
        if s == 0 {
            return Rational::one();
        }
        let key = (s, support);
        if let Some(v) = read(&self.delta_memo, &key) {
            return v;
        }
        let a = &key.1;
        let k = a.len();
        let mut acc = Rational::zero();
        let mut b = a.clone();
        // Δ = Σ_{i≠j} x_i² x_j + 2 Σ_{i<j<l} x_i x_j x_l
        for i in 0..k {
            for j in 0..k {
                if i != j && a[i] >= 2 && a[j] >= 1 {
                    b[i] -= 2;
                    b[j] -= 1;
                    acc += self.delta_power(s - 1, &b);
                    b[i] += 2;
                    b[j] += 1;
                }
            }
        }
        for i in 0..k {
            for j in (i + 1)..k {
                for l in (j + 1)..k {
                    b[i] -= 1;
                    b[j] -= 1;
                    b[l] -= 1;
                    acc += self.delta_power(s - 1, &b) * int(2);
                    b[i] += 1;
                    b[j] += 1;
                    b[l] += 1;
                }
            }
        }
        write(&self.delta_memo, key, acc.clone());
        acc
    }
}

/// `P_r(x_1..x_n)` through the materialized construction.
pub fn p_r_polynomial(polys: &NPointPolynomials, n: usize, r: u32) -> Result<Arc<Component>> {
    polys.p_r_polynomial(n, r)
}

pub fn normalized_component(polys: &NPointPolynomials, key: NormalizedComponentKey) -> Result<Arc<Component>> {
    polys.normalized_component(key)
}

pub fn psi_correlator_npoint(engine: &NPointEngine, g: u32, d: &[u32]) -> Rational {
    engine.psi_correlator(g, d)
}

pub fn npoint_crosscheck_theorem3(engine: &NPointEngine, g: u32, d: &[u32]) -> Result<Rational> {
    engine.psi_correlator_theorem3(g, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &Component) -> &HomogeneousPolynomial {
        c.as_polynomial().expect("polynomial component")
    }

    #[test]
    fn delta_small_cases() {
        assert!(delta_polynomial(1).is_zero());
        let d2 = delta_polynomial(2);
        assert_eq!(d2.len(), 2);
        assert_eq!(d2.coefficient(&[2, 1]), rat(1, 1));
        assert_eq!(d2.coefficient(&[1, 2]), rat(1, 1));
        let d3 = delta_polynomial(3);
        assert_eq!(d3.coefficient(&[1, 1, 1]), rat(2, 1));
        assert_eq!(d3.coefficient(&[1, 2, 0]), rat(1, 1));
        assert_eq!(d3.coefficient(&[3, 0, 0]), rat(0, 1));
        assert!(d3.is_symmetric());
    }

    #[test]
    fn two_point_p_r() {
        let polys = NPointPolynomials::new();
        let p0 = polys.p_r_polynomial(2, 0).unwrap();
        assert_eq!(*p0, Component::InverseSum);
        assert_eq!(p0.times_sum(2).unwrap(), HomogeneousPolynomial::one(2));
        for r in 1..4 {
            assert!(poly(&polys.p_r_polynomial(2, r).unwrap()).is_zero());
        }
    }

    #[test]
    fn three_point_p_0_is_two() {
        let polys = NPointPolynomials::new();
        let p0 = polys.p_r_polynomial(3, 0).unwrap();
        assert_eq!(*poly(&p0), HomogeneousPolynomial::constant(3, rat(2, 1)));
    }

    #[test]
    fn low_components() {
        let polys = NPointPolynomials::new();
        let g03 = polys.normalized_component(NormalizedComponentKey::new(3, 0).unwrap()).unwrap();
        assert_eq!(*poly(&g03), HomogeneousPolynomial::one(3));
        let g12 = polys.normalized_component(NormalizedComponentKey::new(2, 1).unwrap()).unwrap();
        assert_eq!(poly(&g12).coefficient(&[1, 1]), rat(1, 12));
        let g11 = polys.normalized_component(NormalizedComponentKey::new(1, 1).unwrap()).unwrap();
        assert!(poly(&g11).is_zero());
        assert!(NormalizedComponentKey::new(0, 2).is_err());
    }

    #[test]
    fn correlator_examples() {
        let e = NPointEngine::new();
        assert_eq!(e.psi_correlator(1, &[1]), rat(1, 24));
        assert_eq!(e.psi_correlator(2, &[4]), rat(1, 1152));
        assert_eq!(e.psi_correlator(1, &[1, 1]), rat(1, 24));
        assert_eq!(e.psi_correlator(0, &[0, 0, 0]), rat(1, 1));
        assert_eq!(e.psi_correlator(0, &[0, 0]), rat(0, 1));
        assert_eq!(e.psi_correlator(1, &[2]), rat(0, 1));
    }

    #[test]
    fn theorem3_examples() {
        let e = NPointEngine::new();
        assert_eq!(e.psi_correlator_theorem3(0, &[0, 0, 0]).unwrap(), rat(1, 1));
        assert_eq!(e.psi_correlator_theorem3(1, &[0, 2]).unwrap(), rat(1, 24));
        assert_eq!(e.psi_correlator_theorem3(2, &[2, 3]).unwrap(), rat(29, 5760));
        assert!(e.psi_correlator_theorem3(1, &[1]).is_err());
    }

    #[test]
    fn lazy_matches_materialized() {
        let e = NPointEngine::new();
        let polys = NPointPolynomials::new();
        for n in 3..=5usize {
            for g in 0..=2u32 {
                let comp = polys.normalized_component(NormalizedComponentKey::new(n, g).unwrap()).unwrap();
                let p = poly(&comp);
                for (exps, c) in p.terms() {
                    assert_eq!(&e.component_coefficient(n, g, exps).unwrap(), c, "G_{g} n={n} at {exps:?}");
                }
                for r in 0..=g {
                    let pr = polys.p_r_polynomial(n, r).unwrap();
                    for (exps, c) in poly(&pr).terms() {
                        assert_eq!(&e.p_coefficient(n, r, exps).unwrap(), c);
                    }
                }
                if is_stable(g, n) {
                    let full = polys.full_npoint(n, g).unwrap();
                    for (exps, c) in full.terms() {
                        assert_eq!(&e.psi_correlator(g, exps), c);
                    }
                }
            }
        }
    }

    #[test]
    fn subvectors() {
        let mut seen = Vec::new();
        for_each_subvector(&[2, 1, 0], 2, &mut |b| seen.push(b.to_vec()));
        assert_eq!(seen, vec![vec![1, 1, 0], vec![2, 0, 0]]);
    }
}

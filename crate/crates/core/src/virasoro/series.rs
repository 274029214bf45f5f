use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::exact::{format_fraction, int, MultiIndex, Rational};
use crate::moduli::is_stable;

/// A monomial `∏ t_i^{a_i} ∏ s_j^{b_j}` with `j ≥ 1`. Exponent vectors carry
/// no trailing zeros, so equal monomials compare equal.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    t: Vec<u32>,
    /// `s[0]` is the exponent of `s_1`.
    s: Vec<u32>,
}

fn trim(v: &mut Vec<u32>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn new(mut t: Vec<u32>, mut s: Vec<u32>) -> Self {
        trim(&mut t);
        trim(&mut s);
        Monomial { t, s }
    }

    pub fn t(i: usize) -> Self {
        Self::one().with_t(i, 1)
    }

    pub fn s(i: usize) -> Self {
        Self::one().with_s(i, 1)
    }

    /// The monomial `∏ t_{d_j}` of a ψ exponent list times `s^b`.
    pub fn from_correlator(d: &[u32], b: &MultiIndex) -> Self {
        let mut m = Self::one();
        for &x in d {
            m = m.with_t(x as usize, 1);
        }
        for &(i, mult) in b.entries() {
            m = m.with_s(i as usize, mult);
        }
        m
    }

    pub fn with_t(mut self, i: usize, extra: u32) -> Self {
        if self.t.len() <= i {
            self.t.resize(i + 1, 0);
        }
        self.t[i] += extra;
        trim(&mut self.t);
        self
    }

    pub fn with_s(mut self, i: usize, extra: u32) -> Self {
        assert!(i >= 1, "s variables are indexed from 1");
        if self.s.len() < i {
            self.s.resize(i, 0);
        }
        self.s[i - 1] += extra;
        trim(&mut self.s);
        self
    }

    pub fn t_exp(&self, i: usize) -> u32 {
        self.t.get(i).copied().unwrap_or(0)
    }

    pub fn s_exp(&self, i: usize) -> u32 {
        if i == 0 {
            return 0;
        }
        self.s.get(i - 1).copied().unwrap_or(0)
    }

    pub fn t_exponents(&self) -> &[u32] {
        &self.t
    }

    pub fn t_degree(&self) -> u32 {
        self.t.iter().sum()
    }

    /// `Σ j·b_j`, the κ degree.
    pub fn s_weight(&self) -> u32 {
        self.s.iter().enumerate().map(|(j, &e)| (j as u32 + 1) * e).sum()
    }

    pub fn is_one(&self) -> bool {
        self.t.is_empty() && self.s.is_empty()
    }

    pub fn s_part(&self) -> MultiIndex {
        MultiIndex::from_pairs(self.s.iter().enumerate().map(|(j, &e)| (j as u32 + 1, e))).expect("indices ≥ 1")
    }

    pub fn t_part(&self) -> Monomial {
        Monomial { t: self.t.clone(), s: Vec::new() }
    }

    /// The ψ exponent list `[0,0,1,...]` of the t part.
    pub fn psi_exponents(&self) -> Vec<u32> {
        self.t
            .iter()
            .enumerate()
            .flat_map(|(i, &e)| std::iter::repeat_n(i as u32, e as usize))
            .collect()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let add = |a: &[u32], b: &[u32]| {
            let mut v = vec![0; a.len().max(b.len())];
            for (i, x) in a.iter().enumerate() {
                v[i] += x;
            }
            for (i, x) in b.iter().enumerate() {
                v[i] += x;
            }
            v
        };
        Monomial::new(add(&self.t, &other.t), add(&self.s, &other.s))
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.t.iter().enumerate().all(|(i, &e)| other.t_exp(i) >= e)
            && self.s.iter().enumerate().all(|(j, &e)| other.s_exp(j + 1) >= e)
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if !other.divides(self) {
            return None;
        }
        let t = self.t.iter().enumerate().map(|(i, &e)| e - other.t_exp(i)).collect();
        let s = self.s.iter().enumerate().map(|(j, &e)| e - other.s_exp(j + 1)).collect();
        Some(Monomial::new(t, s))
    }

    /// Lowers the exponent of `t_i` by one.
    pub fn div_t(&self, i: usize) -> Option<Monomial> {
        if self.t_exp(i) == 0 {
            return None;
        }
        let mut t = self.t.clone();
        t[i] -= 1;
        Some(Monomial::new(t, self.s.clone()))
    }

    /// Every divisor, including `1` and `self`.
    pub fn divisors(&self) -> Vec<Monomial> {
        let mut out = vec![Monomial::one()];
        let exps: Vec<(bool, usize, u32)> = self
            .t
            .iter()
            .enumerate()
            .map(|(i, &e)| (true, i, e))
            .chain(self.s.iter().enumerate().map(|(j, &e)| (false, j + 1, e)))
            .filter(|&(_, _, e)| e > 0)
            .collect();
        for (is_t, i, e) in exps {
            let mut next = Vec::with_capacity(out.len() * (e as usize + 1));
            for m in &out {
                for a in 0..=e {
                    next.push(if is_t { m.clone().with_t(i, a) } else { m.clone().with_s(i, a) });
                }
            }
            out = next;
        }
        out
    }

    /// `∏ a_i! ∏ b_j!`
    pub fn factorial(&self) -> num_bigint::BigInt {
        self.t
            .iter()
            .chain(self.s.iter())
            .fold(num_bigint::BigInt::one(), |acc, &e| acc * crate::exact::factorial(e as u64))
    }

    /// The genus `g` of the correlator this monomial indexes in a generating
    /// function, from `3g − 3 = Σ(i−1)a_i + Σ j·b_j`. `None` when no integer
    /// genus fits.
    pub fn genus(&self) -> Option<u32> {
        let shifted: i64 = self.t.iter().enumerate().map(|(i, &e)| (i as i64 - 1) * e as i64).sum::<i64>()
            + self.s_weight() as i64
            + 3;
        (shifted >= 0 && shifted % 3 == 0).then_some((shifted / 3) as u32)
    }
}

impl fmt::Display for Monomial {
    /// `t0^2*s1`, or `1` for the empty monomial.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, &e) in self.t.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(format!("t{i}")),
                _ => parts.push(format!("t{i}^{e}")),
            }
        }
        for (j, &e) in self.s.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(format!("s{}", j + 1)),
                _ => parts.push(format!("s{}^{e}", j + 1)),
            }
        }
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join("*"))
        }
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl std::str::FromStr for Monomial {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let text = text.trim();
        let mut m = Monomial::one();
        if text == "1" {
            return Ok(m);
        }
        for factor in text.split('*') {
            let (var, exp) = match factor.split_once('^') {
                Some((v, e)) => (v, e.parse::<u32>().map_err(|_| Error::invalid(format!("bad exponent in {factor:?}")))?),
                None => (factor, 1),
            };
            let bad = || Error::invalid(format!("bad variable {var:?}"));
            let (kind, index) = var.split_at(1);
            let index: usize = index.parse().map_err(|_| bad())?;
            m = match kind {
                "t" => m.with_t(index, exp),
                "s" if index >= 1 => m.with_s(index, exp),
                _ => return Err(bad()),
            };
        }
        Ok(m)
    }
}

/// Which coefficients of a series are trustworthy.
#[derive(Clone, Debug)]
pub enum Admission {
    /// Every coefficient is known; absent monomials are exactly zero.
    Exact,
    /// Only the listed monomials carry correct coefficients.
    Within(Arc<HashSet<Monomial>>),
}

impl Admission {
    pub fn admits(&self, m: &Monomial) -> bool {
        match self {
            Admission::Exact => true,
            Admission::Within(set) => set.contains(m),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Admission::Exact)
    }

    fn intersect(&self, other: &Admission) -> Admission {
        match (self, other) {
            (Admission::Exact, x) | (x, Admission::Exact) => x.clone(),
            (Admission::Within(a), Admission::Within(b)) => {
                let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
                Admission::Within(Arc::new(small.iter().filter(|m| large.contains(*m)).cloned().collect()))
            }
        }
    }
}

/// Polynomial in `t_0, t_1, …` and `s_1, s_2, …` together with the region
/// of monomials whose coefficients are fully determined.
#[derive(Clone, Debug)]
pub struct TruncatedSeries {
    terms: HashMap<Monomial, Rational>,
    admission: Admission,
}

impl TruncatedSeries {
    pub fn zero() -> Self {
        TruncatedSeries { terms: HashMap::new(), admission: Admission::Exact }
    }

    pub fn one() -> Self {
        Self::monomial(Monomial::one(), Rational::one())
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        Self::exact([(m, c)])
    }

    pub fn exact(terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut s = Self::zero();
        for (m, c) in terms {
            s.add_term(m, c);
        }
        s
    }

    /// Terms outside `admitted` are dropped.
    pub fn within(terms: impl IntoIterator<Item = (Monomial, Rational)>, admitted: HashSet<Monomial>) -> Self {
        let mut s = TruncatedSeries { terms: HashMap::new(), admission: Admission::Within(Arc::new(admitted)) };
        for (m, c) in terms {
            if s.admission.admits(&m) {
                s.add_term(m, c);
            }
        }
        s
    }

    fn with_admission(admission: Admission) -> Self {
        TruncatedSeries { terms: HashMap::new(), admission }
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::hash_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn admission(&self) -> &Admission {
        &self.admission
    }

    pub fn admits(&self, m: &Monomial) -> bool {
        self.admission.admits(m)
    }

    /// Admitted monomials, sorted. `None` for exact series.
    pub fn admitted(&self) -> Option<Vec<Monomial>> {
        match &self.admission {
            Admission::Exact => None,
            Admission::Within(set) => {
                let mut v: Vec<Monomial> = set.iter().cloned().collect();
                v.sort();
                Some(v)
            }
        }
    }

    /// Coefficient of an admitted monomial, `None` outside the admission.
    pub fn get(&self, m: &Monomial) -> Option<Rational> {
        self.admits(m).then(|| self.coefficient(m))
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Nonzero terms in monomial order.
    pub fn sorted_terms(&self) -> Vec<(Monomial, Rational)> {
        let mut v: Vec<_> = self.terms.iter().map(|(m, c)| (m.clone(), c.clone())).collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        v
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &TruncatedSeries) -> TruncatedSeries {
        let admission = self.admission.intersect(&other.admission);
        let mut out = TruncatedSeries::with_admission(admission);
        for (m, c) in self.terms.iter().chain(other.terms.iter()) {
            if out.admission.admits(m) {
                out.add_term(m.clone(), c.clone());
            }
        }
        out
    }

    pub fn sub(&self, other: &TruncatedSeries) -> TruncatedSeries {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, factor: &Rational) -> TruncatedSeries {
        let mut out = TruncatedSeries::with_admission(self.admission.clone());
        if !factor.is_zero() {
            for (m, c) in &self.terms {
                out.terms.insert(m.clone(), c * factor);
            }
        }
        out
    }

    /// Product. For truncated factors a monomial is kept only when every
    /// factorization of it lies in both admission regions.
    pub fn mul(&self, other: &TruncatedSeries) -> TruncatedSeries {
        match (&self.admission, &other.admission) {
            (Admission::Exact, Admission::Exact) => {
                let mut out = TruncatedSeries::zero();
                for (a, x) in &self.terms {
                    for (b, y) in &other.terms {
                        out.add_term(a.mul(b), x * y);
                    }
                }
                out
            }
            (sa, sb) => {
                let candidates: Vec<Monomial> = match (sa, sb) {
                    (Admission::Within(a), Admission::Within(b)) => a.iter().filter(|m| b.contains(*m)).cloned().collect(),
                    (Admission::Within(a), _) | (_, Admission::Within(a)) => a.iter().cloned().collect(),
                    _ => unreachable!(),
                };
                let admitted: HashSet<Monomial> = candidates
                    .into_iter()
                    .filter(|m| {
                        m.divisors()
                            .iter()
                            .all(|d| sa.admits(d) && sb.admits(&m.div(d).expect("divisor")))
                    })
                    .collect();
                Self::product_on(admitted, self, other)
            }
        }
    }

    /// Coefficients of `x·y` on `set`, which the caller has checked.
    fn product_on(set: HashSet<Monomial>, x: &TruncatedSeries, y: &TruncatedSeries) -> TruncatedSeries {
        let mut out = TruncatedSeries::with_admission(Admission::Within(Arc::new(HashSet::new())));
        for m in &set {
            let mut acc = Rational::zero();
            for d in m.divisors() {
                if let Some(a) = x.terms.get(&d) {
                    if let Some(b) = y.terms.get(&m.div(&d).expect("divisor")) {
                        acc += a * b;
                    }
                }
            }
            out.add_term(m.clone(), acc);
        }
        out.admission = Admission::Within(Arc::new(set));
        out
    }

    /// `∂/∂t_i`
    pub fn derivative_t(&self, i: usize) -> TruncatedSeries {
        let mut out = match &self.admission {
            Admission::Exact => TruncatedSeries::zero(),
            Admission::Within(set) => {
                let admitted: HashSet<Monomial> = set.iter().filter_map(|m| m.div_t(i)).collect();
                TruncatedSeries::with_admission(Admission::Within(Arc::new(admitted)))
            }
        };
        for (m, c) in &self.terms {
            let e = m.t_exp(i);
            if e == 0 {
                continue;
            }
            let lowered = m.div_t(i).expect("t_i divides");
            if out.admission.admits(&lowered) {
                out.add_term(lowered, c * int(e));
            }
        }
        out
    }

    /// `exp(self)` for a truncated series with zero constant term, on the
    /// largest divisor-closed part of the admission region.
    pub fn exp(&self) -> Result<TruncatedSeries> {
        let Admission::Within(set) = &self.admission else {
            return Err(Error::invalid("exp of an exact series does not terminate"));
        };
        if !self.coefficient(&Monomial::one()).is_zero() {
            return Err(Error::invalid("exp needs a zero constant term"));
        }
        let closed: HashSet<Monomial> =
            set.iter().filter(|m| m.divisors().iter().all(|d| set.contains(d))).cloned().collect();
        let base = TruncatedSeries::within(self.terms.iter().map(|(m, c)| (m.clone(), c.clone())), closed.clone());
        let mut result = TruncatedSeries::within([(Monomial::one(), Rational::one())], closed.clone());
        let mut power = result.clone();
        let mut k = 0u64;
        loop {
            k += 1;
            power = Self::product_on(closed.clone(), &power, &base).scale(&Rational::new(1.into(), k.into()));
            if power.is_zero() {
                break;
            }
            result = result.add(&power);
        }
        Ok(result)
    }

    /// JSON object from monomial strings to `num/den`, keys sorted.
    pub fn to_json(&self) -> Value {
        let map: BTreeMap<String, Value> = self
            .terms
            .iter()
            .map(|(m, c)| (m.to_string(), Value::String(format_fraction(c))))
            .collect();
        Value::Object(map.into_iter().collect())
    }
}

/// Monomials with t-index ≤ `t_max_index`, t-degree ≤ `t_max_degree` and
/// s-weight ≤ `s_max_weight`.
pub fn box_monomials(t_max_index: usize, t_max_degree: u32, s_max_weight: u32) -> Vec<Monomial> {
    let mut t_parts = Vec::new();
    fn rec(idx: usize, max: usize, budget: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if idx > max {
            out.push(cur.clone());
            return;
        }
        for e in 0..=budget {
            cur.push(e);
            rec(idx + 1, max, budget - e, cur, out);
            cur.pop();
        }
    }
    rec(0, t_max_index, t_max_degree, &mut Vec::new(), &mut t_parts);
    let s_parts = MultiIndex::all_up_to_weight(s_max_weight);
    let mut out = Vec::with_capacity(t_parts.len() * s_parts.len());
    for t in &t_parts {
        for b in &s_parts {
            let mut m = Monomial::new(t.clone(), Vec::new());
            for &(i, e) in b.entries() {
                m = m.with_s(i as usize, e);
            }
            out.push(m);
        }
    }
    out
}

/// Whether the generating-function coefficient of `m` is fixed by
/// correlators of genus ≤ `gmax`. Monomials with no integral genus, or on an
/// unstable moduli space, have coefficient exactly zero.
pub fn determined_by_genus(m: &Monomial, gmax: u32) -> bool {
    match m.genus() {
        None => true,
        Some(g) if !is_stable(g, m.t_degree() as usize) => true,
        Some(g) => g <= gmax,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn m(s: &str) -> Monomial {
        s.parse().unwrap()
    }

    #[test]
    fn monomial_basics() {
        let a = m("t0^2*s1");
        assert_eq!(a.to_string(), "t0^2*s1");
        assert_eq!(Monomial::one().to_string(), "1");
        assert_eq!(a.mul(&m("t0*t3")), m("t0^3*t3*s1"));
        assert_eq!(m("t0^3*t3*s1").div(&m("t0*t3")), Some(a.clone()));
        assert_eq!(a.divisors().len(), 6);
        assert_eq!(m("t1").genus(), Some(1));
        assert_eq!(m("t0^3").genus(), Some(0));
        assert_eq!(m("s1").genus(), None);
        assert_eq!(m("s1^3").genus(), Some(2));
        assert_eq!(m("t0*s1").genus(), Some(1));
        assert_eq!(m("t0*t0").with_t(5, 0), m("t0^2"));
    }

    #[test]
    fn exact_arithmetic() {
        let x = TruncatedSeries::exact([(m("t0"), rat(1, 1)), (m("t1"), rat(2, 1))]);
        let sq = x.mul(&x);
        assert_eq!(sq.coefficient(&m("t0*t1")), rat(4, 1));
        assert_eq!(sq.derivative_t(1).coefficient(&m("t1")), rat(8, 1));
        assert!(x.sub(&x).is_zero());
    }

    #[test]
    fn truncated_exp() {
        // exp(t0) on monomials of degree ≤ 3
        let admitted: HashSet<Monomial> = box_monomials(0, 3, 0).into_iter().collect();
        let x = TruncatedSeries::within([(m("t0"), rat(1, 1))], admitted);
        let e = x.exp().unwrap();
        assert_eq!(e.get(&m("t0^3")), Some(rat(1, 6)));
        assert_eq!(e.get(&m("t0^4")), None);
        // the product loses monomials whose factorizations leave the region
        let sq = e.mul(&e);
        assert_eq!(sq.get(&m("t0^2")), Some(rat(2, 1)));
    }

    #[test]
    fn json_dump_sorted() {
        let x = TruncatedSeries::exact([(m("t0^2*s1"), rat(1, 2)), (Monomial::one(), rat(3, 1))]);
        assert_eq!(x.to_json().to_string(), r#"{"1":"3/1","t0^2*s1":"1/2"}"#);
    }
}

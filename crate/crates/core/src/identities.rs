//! Residual checks of identities among ψ and κ intersection numbers.
//!
//! Split sums `Σ_{I⊔J}` run over ordered pairs of subsets of the marked
//! points, empty parts included, and every split correlator without an
//! explicit genus is summed over `g' + g'' = g`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exact::{dfact, factorial, format_fraction, int, sign, MultiIndex, Rational};
use crate::moduli::{exponent_multisets, is_stable};
use crate::volume::VolumeEngine;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Identity {
    /// `Σ_{I⊔J} Σ_j (−1)^j ⟨τ_jτ_0²∏_I⟩⟨τ_{k−j}τ_0²∏_J⟩ = 0` for `k > 2g`.
    Theorem7Vanishing,
    /// The same sum at `k = 2g` equals `(2g+n+1)!/(4^g(2g+1)!∏(2d_j−1)!!)`.
    Theorem7ClosedForm,
    /// `Σ_j (−1)^j ⟨τ_{k−j}τ_j∏τ_{d_i}⟩_g = 0` for `k > 2g`.
    Theorem8Vanishing,
    /// The same sum at `k = 2g` equals `(2g+n−1)!/(4^g(2g+1)!∏(2d_j−1)!!)`.
    Theorem8ClosedForm,
    Proposition9,
    Theorem10,
    Proposition11,
    Theorem12,
    Conjecture13,
}

impl Identity {
    pub const ALL: [Identity; 9] = [
        Identity::Theorem7Vanishing,
        Identity::Theorem7ClosedForm,
        Identity::Theorem8Vanishing,
        Identity::Theorem8ClosedForm,
        Identity::Proposition9,
        Identity::Theorem10,
        Identity::Proposition11,
        Identity::Theorem12,
        Identity::Conjecture13,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Identity::Theorem7Vanishing => "thm7.1",
            Identity::Theorem7ClosedForm => "thm7.2",
            Identity::Theorem8Vanishing => "thm8.1",
            Identity::Theorem8ClosedForm => "thm8.2",
            Identity::Proposition9 => "prop9",
            Identity::Theorem10 => "thm10",
            Identity::Proposition11 => "prop11",
            Identity::Theorem12 => "thm12",
            Identity::Conjecture13 => "conj13",
        }
    }

    /// Conjectures are reported but never count as failures.
    pub fn is_proven(self) -> bool {
        self != Identity::Conjecture13
    }

    /// Accepts `thm7`, `thm7.1`, `prop9`, `conj13` and so on. A bare theorem
    /// name selects both of its parts.
    pub fn parse_family(name: &str) -> Option<Vec<Identity>> {
        let all: Vec<Identity> = match name {
            "thm7" => vec![Identity::Theorem7Vanishing, Identity::Theorem7ClosedForm],
            "thm8" => vec![Identity::Theorem8Vanishing, Identity::Theorem8ClosedForm],
            "all" => Identity::ALL.to_vec(),
            _ => Identity::ALL.iter().copied().filter(|i| i.name() == name).collect(),
        };
        (!all.is_empty()).then_some(all)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Holds,
    Fails,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IdentityReport {
    pub identity: Identity,
    pub genus: u32,
    pub d: Vec<u32>,
    pub b: MultiIndex,
    /// `k` for thm7, thm8, thm10 and `M` for thm12.
    pub k: Option<u32>,
    pub lhs: Rational,
    pub rhs: Rational,
    pub residual: Rational,
    pub status: Status,
}

impl IdentityReport {
    fn new(identity: Identity, genus: u32, d: &[u32], b: &MultiIndex, k: Option<u32>, lhs: Rational, rhs: Rational) -> Self {
        let residual = &lhs - &rhs;
        let status = if residual.is_zero() { Status::Holds } else { Status::Fails };
        IdentityReport {
            identity,
            genus,
            d: d.to_vec(),
            b: b.clone(),
            k,
            lhs,
            rhs,
            residual,
            status,
        }
    }

    pub fn holds(&self) -> bool {
        self.status == Status::Holds
    }

    pub fn to_json(&self) -> Value {
        let mut params = json!({ "g": self.genus, "n": self.d.len(), "d": self.d, "b": self.b.to_string() });
        if let Some(k) = self.k {
            let field = if self.identity == Identity::Theorem12 { "M" } else { "k" };
            params[field] = json!(k);
        }
        json!({
            "identity": self.identity.name(),
            "params": params,
            "lhs": format_fraction(&self.lhs),
            "rhs": format_fraction(&self.rhs),
            "residual": format_fraction(&self.residual),
            "status": if self.holds() { "holds" } else { "fails" },
            "proven": self.identity.is_proven(),
        })
    }
}

fn reject(identity: Identity, why: impl std::fmt::Display) -> Error {
    Error::invalid(format!("{}: {why}", identity.name()))
}

fn sum(d: &[u32]) -> i64 {
    d.iter().map(|&x| x as i64).sum()
}

/// `∏ (2d_j − 1)!!`
fn odd_factorial_product(d: &[u32]) -> BigInt {
    d.iter().fold(BigInt::one(), |acc, &x| acc * dfact(2 * x as i64 - 1))
}

fn with(d: &[u32], extra: &[u32]) -> Vec<u32> {
    let mut v = d.to_vec();
    v.extend_from_slice(extra);
    v
}

/// Calls `f(I, J)` for every ordered split of `d` by position.
fn for_each_split(d: &[u32], mut f: impl FnMut(&[u32], &[u32]) -> Result<()>) -> Result<()> {
    for mask in 0..(1u32 << d.len()) {
        let (mut left, mut right) = (Vec::new(), Vec::new());
        for (i, &x) in d.iter().enumerate() {
            if mask & (1 << i) != 0 {
                left.push(x);
            } else {
                right.push(x);
            }
        }
        f(&left, &right)?;
    }
    Ok(())
}

/// `Σ_{g'=0}^{g} ⟨left⟩_{g'} ⟨right⟩_{g−g'}`
fn genus_split(
    eng: &VolumeEngine,
    g: u32,
    left: (&[u32], &MultiIndex),
    right: (&[u32], &MultiIndex),
) -> Result<Rational> {
    let mut acc = Rational::zero();
    for g1 in 0..=g {
        let a = eng.correlator(g1, left.0, left.1)?;
        if a.is_zero() {
            continue;
        }
        acc += a * eng.correlator(g - g1, right.0, right.1)?;
    }
    Ok(acc)
}

/// `Σ_{I⊔J} Σ_{j=0}^{k} (−1)^j ⟨τ_jτ_0²∏_I⟩⟨τ_{k−j}τ_0²∏_J⟩`
fn theorem7_sum(eng: &VolumeEngine, g: u32, d: &[u32], k: u32) -> Result<Rational> {
    let empty = MultiIndex::empty();
    let mut acc = Rational::zero();
    for_each_split(d, |i, j| {
        for t in 0..=k {
            let v = genus_split(eng, g, (&with(i, &[t, 0, 0]), &empty), (&with(j, &[k - t, 0, 0]), &empty))?;
            acc += sign(t) * v;
        }
        Ok(())
    })?;
    Ok(acc)
}

pub fn check_theorem7(eng: &VolumeEngine, g: u32, d: &[u32], k: u32) -> Result<IdentityReport> {
    let n = d.len() as i64;
    let empty = MultiIndex::empty();
    if k > 2 * g {
        let id = Identity::Theorem7Vanishing;
        if sum(d) != 3 * g as i64 + n - k as i64 {
            return Err(reject(id, "requires Σd = 3g+n−k"));
        }
        let lhs = theorem7_sum(eng, g, d, k)?;
        Ok(IdentityReport::new(id, g, d, &empty, Some(k), lhs, Rational::zero()))
    } else if k == 2 * g {
        let id = Identity::Theorem7ClosedForm;
        if d.contains(&0) || sum(d) != g as i64 + n {
            return Err(reject(id, "requires d_j ≥ 1 and Σd = g+n"));
        }
        let lhs = theorem7_sum(eng, g, d, k)?;
        let rhs = Rational::new(
            factorial(2 * g as u64 + d.len() as u64 + 1),
            BigInt::from(4).pow(g) * factorial(2 * g as u64 + 1) * odd_factorial_product(d),
        );
        Ok(IdentityReport::new(id, g, d, &empty, Some(k), lhs, rhs))
    } else {
        Err(reject(Identity::Theorem7Vanishing, "requires k ≥ 2g"))
    }
}

/// `Σ_{j=0}^{k} (−1)^j ⟨τ_{k−j}τ_j∏τ_{d_i}⟩_g`
fn theorem8_sum(eng: &VolumeEngine, g: u32, d: &[u32], k: u32, b: &MultiIndex) -> Result<Rational> {
    let mut acc = Rational::zero();
    for t in 0..=k {
        acc += sign(t) * eng.correlator(g, &with(d, &[k - t, t]), b)?;
    }
    Ok(acc)
}

pub fn check_theorem8(eng: &VolumeEngine, g: u32, d: &[u32], k: u32) -> Result<IdentityReport> {
    let n = d.len() as i64;
    let empty = MultiIndex::empty();
    if k > 2 * g {
        let id = Identity::Theorem8Vanishing;
        if sum(d) != 3 * g as i64 + n - k as i64 - 1 {
            return Err(reject(id, "requires Σd = 3g+n−k−1"));
        }
        let lhs = theorem8_sum(eng, g, d, k, &empty)?;
        Ok(IdentityReport::new(id, g, d, &empty, Some(k), lhs, Rational::zero()))
    } else if k == 2 * g {
        let id = Identity::Theorem8ClosedForm;
        if d.contains(&0) || sum(d) - n != g as i64 - 1 {
            return Err(reject(id, "requires d_j ≥ 1 and Σ(d_j−1) = g−1"));
        }
        let lhs = theorem8_sum(eng, g, d, k, &empty)?;
        let top = 2 * g as i64 + n - 1;
        if top < 0 {
            return Err(reject(id, "(2g+n−1)! is undefined"));
        }
        let rhs = Rational::new(
            factorial(top as u64),
            BigInt::from(4).pow(g) * factorial(2 * g as u64 + 1) * odd_factorial_product(d),
        );
        Ok(IdentityReport::new(id, g, d, &empty, Some(k), lhs, rhs))
    } else {
        Err(reject(Identity::Theorem8Vanishing, "requires k ≥ 2g"))
    }
}

/// The two-term split sum shared by Propositions 9 and 11.
fn two_term_split_sum(eng: &VolumeEngine, g: u32, d: &[u32], b: &MultiIndex) -> Result<Rational> {
    let mut acc = Rational::zero();
    for (l, rest) in b.splits() {
        let c = int(b.binomial(&l));
        let mut part = Rational::zero();
        for_each_split(d, |i, j| {
            for t in 0..=2 * g {
                let first = genus_split(eng, g, (&with(i, &[t, 0, 0]), &l), (&with(j, &[2 * g - t, 0, 0]), &rest))?;
                let second = genus_split(eng, g, (&with(i, &[t, 2 * g - t, 0, 0]), &l), (&with(j, &[0, 0]), &rest))?;
                part += sign(t) * (first + second);
            }
            Ok(())
        })?;
        acc += c * part;
    }
    Ok(acc)
}

pub fn check_proposition9(eng: &VolumeEngine, g: u32, d: &[u32]) -> Result<IdentityReport> {
    let id = Identity::Proposition9;
    let n = d.len() as i64;
    if sum(d) != g as i64 + n {
        return Err(reject(id, "requires Σd = g+n"));
    }
    let empty = MultiIndex::empty();
    let lhs = two_term_split_sum(eng, g, d, &empty)?;
    let rhs = int(2 * g as i64 + n + 1) * theorem8_sum(eng, g, &with(d, &[0]), 2 * g, &empty)?;
    Ok(IdentityReport::new(id, g, d, &empty, None, lhs, rhs))
}

/// `Σ_j ⟨τ_{d_j+k−1}∏_{i≠j}τ_{d_i}κ(b)⟩_g − ½ Σ_{L,I⊔J} Σ_{j=0}^{k−2} (−1)^j C(b,L) ⟨τ_j∏_Iκ(L)⟩⟨τ_{k−2−j}∏_Jκ(L')⟩`
fn theorem10_rhs(eng: &VolumeEngine, g: u32, d: &[u32], b: &MultiIndex, k: u32) -> Result<Rational> {
    let mut acc = Rational::zero();
    for j in 0..d.len() {
        let shifted = d[j] + k;
        if shifted == 0 {
            continue;
        }
        let mut psi = d.to_vec();
        psi[j] = shifted - 1;
        acc += eng.correlator(g, &psi, b)?;
    }
    if k >= 2 {
        let mut split = Rational::zero();
        for (l, rest) in b.splits() {
            let c = int(b.binomial(&l));
            let mut part = Rational::zero();
            for_each_split(d, |i, jj| {
                for t in 0..=k - 2 {
                    part += sign(t) * genus_split(eng, g, (&with(i, &[t]), &l), (&with(jj, &[k - 2 - t]), &rest))?;
                }
                Ok(())
            })?;
            split += c * part;
        }
        acc -= split / int(2);
    }
    Ok(acc)
}

pub fn check_theorem10(eng: &VolumeEngine, g: u32, d: &[u32], k: u32) -> Result<IdentityReport> {
    let id = Identity::Theorem10;
    let n = d.len() as i64;
    if !k.is_multiple_of(2) || k < 2 * g {
        return Err(reject(id, "requires k even and k ≥ 2g"));
    }
    if sum(d) != 3 * g as i64 + n - k as i64 - 2 {
        return Err(reject(id, "requires Σd = 3g+n−k−2"));
    }
    if !is_stable(g, d.len()) {
        return Err(Error::Unstable { genus: g, points: d.len() });
    }
    let empty = MultiIndex::empty();
    let lhs = eng.correlator(g, &with(d, &[k]), &empty)?;
    let rhs = theorem10_rhs(eng, g, d, &empty, k)?;
    Ok(IdentityReport::new(id, g, d, &empty, Some(k), lhs, rhs))
}

pub fn check_proposition11(eng: &VolumeEngine, g: u32, d: &[u32], b: &MultiIndex) -> Result<IdentityReport> {
    let id = Identity::Proposition11;
    let n = d.len() as i64;
    if sum(d) + b.weight() as i64 != g as i64 + n {
        return Err(reject(id, "requires Σd + |b| = g+n"));
    }
    let mut lhs = Rational::zero();
    for t in 0..=2 * g {
        lhs += sign(t) * eng.correlator(g, &with(d, &[0, 1, t, 2 * g - t]), b)?;
    }
    let rhs = two_term_split_sum(eng, g, d, b)?;
    Ok(IdentityReport::new(id, g, d, b, None, lhs, rhs))
}

pub fn check_theorem12(eng: &VolumeEngine, g: u32, d: &[u32], b: &MultiIndex, m: u32) -> Result<IdentityReport> {
    let id = Identity::Theorem12;
    let n = d.len() as i64;
    if !m.is_multiple_of(2) || m < 2 * g {
        return Err(reject(id, "requires M even and M ≥ 2g"));
    }
    if sum(d) + b.weight() as i64 != 3 * g as i64 + n - m as i64 - 2 {
        return Err(reject(id, "requires Σd + |b| = 3g+n−M−2"));
    }
    if !is_stable(g, d.len()) {
        return Err(Error::Unstable { genus: g, points: d.len() });
    }
    let mut lhs = Rational::zero();
    for (l, rest) in b.splits() {
        let (w, s) = l.norms();
        lhs += sign(s) * int(b.binomial(&l)) * eng.correlator(g, &with(d, &[w + m]), &rest)?;
    }
    let rhs = theorem10_rhs(eng, g, d, b, m)?;
    Ok(IdentityReport::new(id, g, d, b, Some(m), lhs, rhs))
}

pub fn check_conjecture13(eng: &VolumeEngine, g: u32, d: &[u32]) -> Result<IdentityReport> {
    let id = Identity::Conjecture13;
    let n = d.len() as i64;
    if g < 2 {
        return Err(reject(id, "requires g ≥ 2"));
    }
    if d.contains(&0) || sum(d) - n != g as i64 {
        return Err(reject(id, "requires d_j ≥ 1 and Σ(d_j−1) = g"));
    }
    let empty = MultiIndex::empty();
    let k = 2 * g - 2;
    let lhs = eng.correlator(g, &with(d, &[k]), &empty)? - theorem10_rhs(eng, g, d, &empty, k)?;
    let rhs = Rational::new(
        factorial((2 * g as i64 - 3 + n) as u64),
        BigInt::from(2).pow(2 * g + 1) * factorial(2 * g as u64 - 3) * odd_factorial_product(d),
    );
    Ok(IdentityReport::new(id, g, d, &empty, None, lhs, rhs))
}

/// One admissible parameter tuple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridPoint {
    pub identity: Identity,
    pub genus: u32,
    pub d: Vec<u32>,
    pub b: MultiIndex,
    pub k: Option<u32>,
}

/// Every admissible tuple with `g ≤ gmax`, `n ≤ nmax`, `|b| ≤ bmax` on a
/// stable `M̄_{g,n}`, in a fixed order.
pub fn grid(identity: Identity, gmax: u32, nmax: usize, bmax: u32) -> Vec<GridPoint> {
    let mut out = Vec::new();
    let mut push = |g: u32, d: Vec<u32>, b: MultiIndex, k: Option<u32>| {
        out.push(GridPoint { identity, genus: g, d, b, k });
    };
    let empty = MultiIndex::empty();
    for g in 0..=gmax {
        for n in 0..=nmax {
            if !is_stable(g, n) {
                continue;
            }
            let (gi, ni) = (g as i64, n as i64);
            let with_total = |total: i64| if total < 0 { Vec::new() } else { exponent_multisets(total as u32, n) };
            match identity {
                Identity::Theorem7Vanishing => {
                    for k in (2 * g + 1)..=(3 * g + n as u32) {
                        for d in with_total(3 * gi + ni - k as i64) {
                            push(g, d, empty.clone(), Some(k));
                        }
                    }
                }
                Identity::Theorem7ClosedForm => {
                    for d in with_total(gi + ni) {
                        if d.iter().all(|&x| x >= 1) {
                            push(g, d, empty.clone(), Some(2 * g));
                        }
                    }
                }
                Identity::Theorem8Vanishing => {
                    for k in (2 * g + 1)..=(3 * g + n as u32) {
                        for d in with_total(3 * gi + ni - k as i64 - 1) {
                            push(g, d, empty.clone(), Some(k));
                        }
                    }
                }
                Identity::Theorem8ClosedForm => {
                    for d in with_total(gi - 1 + ni) {
                        if d.iter().all(|&x| x >= 1) && 2 * gi + ni > 0 {
                            push(g, d, empty.clone(), Some(2 * g));
                        }
                    }
                }
                Identity::Proposition9 => {
                    for d in with_total(gi + ni) {
                        push(g, d, empty.clone(), None);
                    }
                }
                Identity::Theorem10 => {
                    for k in (2 * g..=3 * g + n as u32).step_by(2) {
                        for d in with_total(3 * gi + ni - k as i64 - 2) {
                            push(g, d, empty.clone(), Some(k));
                        }
                    }
                }
                Identity::Proposition11 => {
                    for b in MultiIndex::all_up_to_weight(bmax) {
                        for d in with_total(gi + ni - b.weight() as i64) {
                            push(g, d, b.clone(), None);
                        }
                    }
                }
                Identity::Theorem12 => {
                    for b in MultiIndex::all_up_to_weight(bmax) {
                        for m in (2 * g..=3 * g + n as u32).step_by(2) {
                            for d in with_total(3 * gi + ni - m as i64 - 2 - b.weight() as i64) {
                                push(g, d, b.clone(), Some(m));
                            }
                        }
                    }
                }
                Identity::Conjecture13 => {
                    if g >= 2 {
                        for d in with_total(gi + ni) {
                            if d.iter().all(|&x| x >= 1) {
                                push(g, d, empty.clone(), None);
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

pub fn check(eng: &VolumeEngine, p: &GridPoint) -> Result<IdentityReport> {
    let k = || p.k.ok_or_else(|| reject(p.identity, "missing k"));
    match p.identity {
        Identity::Theorem7Vanishing | Identity::Theorem7ClosedForm => check_theorem7(eng, p.genus, &p.d, k()?),
        Identity::Theorem8Vanishing | Identity::Theorem8ClosedForm => check_theorem8(eng, p.genus, &p.d, k()?),
        Identity::Proposition9 => check_proposition9(eng, p.genus, &p.d),
        Identity::Theorem10 => check_theorem10(eng, p.genus, &p.d, k()?),
        Identity::Proposition11 => check_proposition11(eng, p.genus, &p.d, &p.b),
        Identity::Theorem12 => check_theorem12(eng, p.genus, &p.d, &p.b, k()?),
        Identity::Conjecture13 => check_conjecture13(eng, p.genus, &p.d),
    }
}

/// Checks every grid point of the given identities in parallel; reports come
/// back in grid order.
pub fn run_suite(
    eng: &VolumeEngine,
    identities: &[Identity],
    gmax: u32,
    nmax: usize,
    bmax: u32,
) -> Result<Vec<IdentityReport>> {
    let points: Vec<GridPoint> = identities.iter().flat_map(|&i| grid(i, gmax, nmax, bmax)).collect();
    points.par_iter().map(|p| check(eng, p)).collect()
}

//! Denominator invariants `D_{g,n}` (lcm of denominators of pure ψ numbers
//! on `M̄_{g,n}`) and `𝒟_g` (lcm over pure κ numbers on `M̄_g`).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exact::{MultiIndex, Rational};
use crate::moduli::{is_stable, psi_exponent_multisets};
use crate::npoint::NPointEngine;
use crate::volume::VolumeEngine;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DenominatorKind {
    /// `D_{g,n}`
    Psi { points: usize },
    /// `𝒟_g`
    Kappa,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenominatorReport {
    pub genus: u32,
    pub kind: DenominatorKind,
    pub value: BigInt,
    /// Number of correlators folded into the lcm.
    pub correlators: usize,
    /// `(p, e)` with `p` increasing.
    pub factorization: Vec<(BigInt, u32)>,
    /// For `𝒟_g`: whether the κ definition agreed with `D_{g,3g−3}`.
    pub cross_check: Option<bool>,
}

impl DenominatorReport {
    fn new(genus: u32, kind: DenominatorKind, value: BigInt, correlators: usize) -> Self {
        let factorization = factorize(&value);
        DenominatorReport { genus, kind, value, correlators, factorization, cross_check: None }
    }

    pub fn order(&self, p: u64) -> u32 {
        prime_order(&self.value, p)
    }

    pub fn to_json(&self) -> Value {
        let (n, label) = match self.kind {
            DenominatorKind::Psi { points } => (Value::from(points), "D"),
            DenominatorKind::Kappa => (Value::Null, "script-D"),
        };
        json!({
            "invariant": label,
            "g": self.genus,
            "n": n,
            "value": self.value.to_string(),
            "correlators": self.correlators,
            "factorization": self.factorization.iter().map(|(p, e)| json!([p.to_string(), e])).collect::<Vec<_>>(),
            "cross_check": self.cross_check,
        })
    }

    /// `2^7 * 3^2 * 5`
    pub fn factorization_string(&self) -> String {
        if self.factorization.is_empty() {
            return "1".into();
        }
        self.factorization
            .iter()
            .map(|(p, e)| if *e == 1 { p.to_string() } else { format!("{p}^{e}") })
            .collect::<Vec<_>>()
            .join(" * ")
    }
}

/// Prime factorization by trial division. Denominators here only carry
/// small primes, so this stays fast.
pub fn factorize(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut rest = num_traits::Signed::abs(n);
    let mut out = Vec::new();
    if rest.is_zero() {
        return out;
    }
    let mut p = BigInt::from(2u32);
    while &p * &p <= rest {
        let mut e = 0;
        while (&rest % &p).is_zero() {
            rest /= &p;
            e += 1;
        }
        if e > 0 {
            out.push((p.clone(), e));
        }
        p += if p == BigInt::from(2u32) { 1u32 } else { 2u32 };
    }
    if rest > BigInt::one() {
        out.push((rest, 1));
    }
    out
}

/// Exponent of `p` in `n`.
pub fn prime_order(n: &BigInt, p: u64) -> u32 {
    let p = BigInt::from(p);
    let mut rest = n.clone();
    let mut e = 0;
    while !rest.is_zero() && (&rest % &p).is_zero() {
        rest /= &p;
        e += 1;
    }
    e
}

fn primes_up_to(n: u64) -> Vec<u64> {
    (2..=n).filter(|&k| (2..k).take_while(|d| d * d <= k).all(|d| k % d != 0)).collect()
}

fn lcm_of_denominators(values: impl ParallelIterator<Item = Rational>) -> BigInt {
    values.map(|v| v.denom().clone()).reduce(BigInt::one, |a, b| a.lcm(&b))
}

/// `D_{g,n}` over all `d` with `Σd = 3g − 3 + n`, via the n-point engine.
pub fn compute_d(engine: &NPointEngine, genus: u32, points: usize) -> Result<DenominatorReport> {
    if !is_stable(genus, points) {
        return Err(Error::Unstable { genus, points });
    }
    let tuples = if points == 0 { Vec::new() } else { psi_exponent_multisets(genus, points) };
    let value = lcm_of_denominators(tuples.par_iter().map(|d| engine.psi_correlator(genus, d)));
    Ok(DenominatorReport::new(genus, DenominatorKind::Psi { points }, value, tuples.len()))
}

/// `𝒟_g` from the κ definition, cross-checked against `D_{g,3g−3}`.
/// Disagreement is an error.
pub fn compute_script_d(volume: &VolumeEngine, npoint: &NPointEngine, genus: u32) -> Result<DenominatorReport> {
    if genus < 2 {
        return Err(Error::invalid(format!("𝒟_g needs g >= 2, got {genus}")));
    }
    let kappas = MultiIndex::all_of_weight(3 * genus - 3);
    let values = kappas
        .par_iter()
        .map(|b| volume.pure_kappa_volume(genus, b))
        .collect::<Result<Vec<_>>>()?;
    let value = lcm_of_denominators(values.into_par_iter());
    let psi = compute_d(npoint, genus, 3 * genus as usize - 3)?;
    if psi.value != value {
        return Err(Error::Inconsistent(format!(
            "𝒟_{genus} = {value} from κ classes but D_{{{genus},{}}} = {}",
            3 * genus - 3,
            psi.value
        )));
    }
    let mut report = DenominatorReport::new(genus, DenominatorKind::Kappa, value, kappas.len());
    report.cross_check = Some(true);
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisibilityVerdict {
    /// e.g. `D_{1,2} | D_{1,3}`
    pub statement: String,
    pub divisor: BigInt,
    pub multiple: BigInt,
    pub holds: bool,
}

fn verdict(statement: String, divisor: &BigInt, multiple: &BigInt) -> DivisibilityVerdict {
    DivisibilityVerdict {
        statement,
        divisor: divisor.clone(),
        multiple: multiple.clone(),
        holds: (multiple % divisor).is_zero(),
    }
}

/// `D_{g,n} | D_{g,n+1}` for stable `n < nmax`, and `D_{g,n} | 𝒟_g` for
/// `g ≥ 2`.
pub fn check_proposition17(volume: &VolumeEngine, npoint: &NPointEngine, genus: u32, nmax: usize) -> Result<Vec<DivisibilityVerdict>> {
    let reports: Vec<DenominatorReport> = (1..=nmax)
        .filter(|&n| is_stable(genus, n))
        .map(|n| compute_d(npoint, genus, n))
        .collect::<Result<_>>()?;
    let mut out = Vec::new();
    for pair in reports.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        let (DenominatorKind::Psi { points: n }, DenominatorKind::Psi { points: m }) = (a.kind, b.kind) else { unreachable!() };
        out.push(verdict(format!("D_{{{genus},{n}}} | D_{{{genus},{m}}}"), &a.value, &b.value));
    }
    if genus >= 2 {
        let script = compute_script_d(volume, npoint, genus)?;
        for r in &reports {
            let DenominatorKind::Psi { points: n } = r.kind else { unreachable!() };
            out.push(verdict(format!("D_{{{genus},{n}}} | 𝒟_{genus}"), &r.value, &script.value));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeOrderVerdict {
    pub prime: u64,
    pub order: u32,
    pub holds: bool,
}

/// `ord_p(D_{g,3}) ≥ 2` for every prime `p ≤ g + 1`.
pub fn check_lemma20(npoint: &NPointEngine, genus: u32) -> Result<Vec<PrimeOrderVerdict>> {
    if genus < 2 {
        return Err(Error::invalid(format!("the prime-order check needs g >= 2, got {genus}")));
    }
    let d = compute_d(npoint, genus, 3)?;
    Ok(primes_up_to(genus as u64 + 1)
        .into_iter()
        .map(|p| {
            let order = d.order(p);
            PrimeOrderVerdict { prime: p, order, holds: order >= 2 }
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixtureVerdict {
    pub order: u64,
    pub divides: bool,
}

/// Whether each supplied automorphism group order divides `𝒟_g`. The
/// orders are external data; this is a partial check only.
pub fn check_iz_fixture(volume: &VolumeEngine, npoint: &NPointEngine, genus: u32, orders: &[u64]) -> Result<Vec<FixtureVerdict>> {
    let script = compute_script_d(volume, npoint, genus)?;
    Ok(orders
        .iter()
        .map(|&order| FixtureVerdict { order, divides: order != 0 && (&script.value % BigInt::from(order)).is_zero() })
        .collect())
}

/// One order per line; `#` starts a comment, blank lines are skipped.
pub fn parse_fixture(text: &str) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let order = body
            .parse::<u64>()
            .ok()
            .filter(|&o| o > 0)
            .ok_or_else(|| Error::Parse { line: i + 1, message: format!("expected a positive integer, got {body:?}") })?;
        out.push(order);
    }
    Ok(out)
}

/// Bundled automorphism group orders for genus 2 and 3 curves.
pub fn bundled_fixture(genus: u32) -> Option<Vec<u64>> {
    let text = match genus {
        2 => include_str!("../fixtures/iz_genus2.txt"),
        3 => include_str!("../fixtures/iz_genus3.txt"),
        _ => return None,
    };
    Some(parse_fixture(text).expect("bundled fixture parses"))
}

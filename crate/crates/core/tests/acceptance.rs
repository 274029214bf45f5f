//! Acceptance criteria, one line per criterion. Run with
//! `cargo test --test acceptance`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_traits::Zero;

use num_bigint::BigInt;

use mgn_core::denom::{bundled_fixture, check_iz_fixture, check_lemma20, check_proposition17, compute_d, compute_script_d};
use mgn_core::exact::{double_factorial, factorial, int, invert_coefficient_family, rat, sign, MultiIndex, Rational};
use mgn_core::identities::{check_theorem8, run_suite, Identity};
use mgn_core::moduli::{exponent_multisets, is_stable, psi_exponent_multisets};
use mgn_core::npoint::{Component, NPointEngine, NPointPolynomials};
use mgn_core::poly::HomogeneousPolynomial;
use mgn_core::virasoro::{commutator_residual, p_polynomial, random_probe, substitution_check, virasoro_residuals, Monomial};
use mgn_core::volume::VolumeEngine;

type Check = fn() -> Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn one_point_closed_form() -> Result<(), String> {
    let np = NPointEngine::new();
    let mut expected = rat(1, 1);
    for g in 1..=10u32 {
        expected /= rat(24 * g as i64, 1);
        let got = np.psi_correlator(g, &[3 * g - 2]);
        ensure(got == expected, || format!("g={g}: got {got}, expected {expected}"))?;
    }
    Ok(())
}

fn triple_engine_agreement() -> Result<(), String> {
    let np = NPointEngine::new();
    let vol = VolumeEngine::new();
    let mut count = 0;
    for g in 0..=4u32 {
        for n in 1..=12usize {
            if !is_stable(g, n) || 3 * g as i64 - 3 + n as i64 > 9 {
                continue;
            }
            for d in psi_exponent_multisets(g, n) {
                let a = np.psi_correlator(g, &d);
                let c = vol.psi_correlator_wk(g, &d).map_err(|e| e.to_string())?;
                ensure(a == c, || format!("g={g} d={d:?}: n-point {a}, recursion {c}"))?;
                if n >= 2 {
                    let b = np.psi_correlator_theorem3(g, &d).map_err(|e| e.to_string())?;
                    ensure(a == b, || format!("g={g} d={d:?}: n-point {a}, exp((Σx)³/24) form {b}"))?;
                }
                count += 1;
            }
        }
    }
    ensure(count > 0, || "empty grid".into())
}

fn alpha_gamma() -> Result<(), String> {
    let vol = VolumeEngine::new();
    ensure(vol.alpha_constant(&MultiIndex::empty()) == rat(1, 1), || "α_∅ ≠ 1".into())?;
    ensure(vol.alpha_constant(&MultiIndex::single(1, 1)) == rat(1, 3), || "α_(1) ≠ 1/3".into())?;
    ensure(vol.alpha_constant(&MultiIndex::single(2, 1)) == rat(1, 15), || "α_(0,1) ≠ 1/15".into())?;
    for b in MultiIndex::all_up_to_weight(8) {
        if b.is_empty() {
            continue;
        }
        let mut acc = Rational::zero();
        for (l, rest) in b.splits() {
            let denom = l.factorial() * rest.factorial() * double_factorial(2 * rest.weight() as i64 + 1).unwrap();
            acc += sign(l.size()) * vol.alpha_constant(&l) / int(denom);
        }
        ensure(acc.is_zero(), || format!("orthogonality fails at {b}: {acc}"))?;
    }
    // γ closed form, and α_L / L! as the inverse family of γ
    let gamma = |l: &MultiIndex| sign(l.size()) / int(l.factorial() * double_factorial(2 * l.weight() as i64 + 1).unwrap());
    ensure(gamma(&MultiIndex::single(1, 1)) == rat(-1, 3), || "γ_(1)".into())?;
    ensure(gamma(&MultiIndex::single(1, 2)) == rat(1, 30), || "γ_(2)".into())?;
    let inv = invert_coefficient_family(gamma, 8).map_err(|e| e.to_string())?;
    for (l, v) in inv {
        let a = vol.alpha_constant(&l) / int(l.factorial());
        ensure(a == v, || format!("α/L! differs from inverse of γ at {l}"))?;
    }
    Ok(())
}

fn kappa_cross_validation() -> Result<(), String> {
    let vol = VolumeEngine::new();
    let k11 = vol.mixed_correlator(1, &[0], &MultiIndex::single(1, 1)).map_err(|e| e.to_string())?;
    ensure(k11 == rat(1, 24), || format!("⟨κ1⟩_1 = {k11}"))?;
    let k13 = vol.pure_kappa_volume(2, &MultiIndex::single(1, 3)).map_err(|e| e.to_string())?;
    ensure(k13 == rat(43, 2880), || format!("⟨κ1³⟩_2 = {k13}"))?;
    for g in 0..=3u32 {
        for n in 0..=3usize {
            if !is_stable(g, n) {
                continue;
            }
            for b in MultiIndex::all_up_to_weight(4) {
                let total = 3 * g as i64 - 3 + n as i64 - b.weight() as i64;
                if total < 0 {
                    continue;
                }
                for d in exponent_multisets(total as u32, n) {
                    let fast = vol.correlator(g, &d, &b).map_err(|e| e.to_string())?;
                    let slow = vol.kappa_reduction_oracle(g, &d, &b).map_err(|e| e.to_string())?;
                    ensure(fast == slow, || format!("g={g} d={d:?} b={b}: {fast} vs {slow}"))?;
                }
            }
        }
    }
    Ok(())
}

fn err(e: mgn_core::Error) -> String {
    e.to_string()
}

fn low_point_closed_forms() -> Result<(), String> {
    let polys = NPointPolynomials::new();
    let p0 = polys.p_r_polynomial(2, 0).map_err(err)?;
    ensure(*p0 == Component::InverseSum, || "P_0(x,y) is not 1/(x+y)".into())?;
    for r in 1..=6 {
        let p = polys.p_r_polynomial(2, r).map_err(err)?;
        ensure(p.as_polynomial().is_some_and(|q| q.is_zero()), || format!("P_{r}(x,y) ≠ 0"))?;
    }
    // P_r(x,y,z)·(x+y+z) = r!/(2^r (2r+1)!) Σ_cyc (xy)^r (x+y)^{r+1}
    for r in 0..=3u32 {
        let mut numer = HomogeneousPolynomial::zero(3, 3 * r + 1);
        for (a, b) in [(0, 1), (1, 2), (2, 0)] {
            let mut e = vec![0; 3];
            e[a] = r;
            e[b] = r;
            let xy = HomogeneousPolynomial::monomial(e, rat(1, 1));
            let sum = HomogeneousPolynomial::linear_sum(3, &[a, b]).pow(r + 1);
            numer = numer.add(&xy.mul(&sum).map_err(err)?).map_err(err)?;
        }
        let c = Rational::new(factorial(r as u64), BigInt::from(2).pow(r) * factorial(2 * r as u64 + 1));
        let printed = numer.scale(&c);
        let computed = polys.p_r_polynomial(3, r).map_err(err)?.times_sum(3).ok_or("P_r(x,y,z) has the wrong shape")?;
        ensure(computed == printed, || format!("P_{r}(x,y,z) differs from the printed form"))?;
    }
    Ok(())
}

fn identity_suite() -> Result<(), String> {
    let vol = VolumeEngine::new();
    let r = check_theorem8(&vol, 1, &[1], 2).map_err(err)?;
    ensure(r.lhs == rat(1, 12) && r.rhs == rat(1, 12), || format!("closed form at g=1, d=(1), k=2: {}", r.to_json()))?;
    let proven: Vec<Identity> = Identity::ALL.iter().copied().filter(|i| i.is_proven()).collect();
    let reports = run_suite(&vol, &proven, 3, 4, 2).map_err(err)?;
    for id in &proven {
        ensure(reports.iter().any(|r| r.identity == *id), || format!("no grid points for {}", id.name()))?;
    }
    match reports.iter().find(|r| !r.holds()) {
        Some(r) => Err(format!("{} of {} fail, first: {}", reports.iter().filter(|r| !r.holds()).count(), reports.len(), r.to_json())),
        None => Ok(()),
    }
}

fn virasoro() -> Result<(), String> {
    let vol = VolumeEngine::new();
    let reports = virasoro_residuals(&vol, &[-1, 0, 1, 2, 3], 3, 4, 2).map_err(err)?;
    for r in &reports {
        ensure(r.admitted() > 0, || format!("V_{} has no admitted coefficients", r.k))?;
        ensure(r.holds(), || format!("V_{}: {} nonzero, first {:?}", r.k, r.nonzero().len(), r.nonzero().first()))?;
    }
    for seed in 0..4u64 {
        let probe = random_probe(1000 + seed, 6, 6, 12, seed % 2 == 1);
        for n in -1..=3 {
            for m in -1..n {
                let res = commutator_residual(n, m, &probe).map_err(err)?;
                ensure(res.is_zero(), || format!("[V_{n}, V_{m}] on probe {seed}: {:?}", res.sorted_terms().first()))?;
            }
        }
    }
    Ok(())
}

fn substitution() -> Result<(), String> {
    let s = |t: &str| t.parse::<Monomial>().unwrap();
    let p2 = p_polynomial(2).map_err(err)?;
    ensure(p2.sorted_terms() == vec![(s("s1"), rat(1, 1))], || "p_2 ≠ s1".into())?;
    let p3 = p_polynomial(3).map_err(err)?;
    ensure(p3.len() == 2 && p3.coefficient(&s("s2")) == rat(1, 1) && p3.coefficient(&s("s1^2")) == rat(-1, 2), || "p_3 ≠ s2 − s1²/2".into())?;
    let r = substitution_check(&VolumeEngine::new(), &NPointEngine::new(), 3, 3, 3).map_err(err)?;
    ensure(r.compared() > 0, || "empty comparison region".into())?;
    ensure(r.holds(), || format!("{} coefficients differ, first {:?}", r.residual.len(), r.residual.sorted_terms().first()))
}

fn denominators() -> Result<(), String> {
    let vol = VolumeEngine::new();
    let np = NPointEngine::new();
    let d11 = compute_d(&np, 1, 1).map_err(err)?;
    ensure(d11.value == BigInt::from(24), || format!("D_{{1,1}} = {}", d11.value))?;
    let s2 = compute_script_d(&vol, &np, 2).map_err(err)?;
    ensure(s2.cross_check == Some(true), || "𝒟_2 cross-check".into())?;
    for g in 0..=2 {
        for v in check_proposition17(&vol, &np, g, 4).map_err(err)? {
            ensure(v.holds, || format!("{} fails: {} ∤ {}", v.statement, v.divisor, v.multiple))?;
        }
    }
    for g in 2..=5 {
        for v in check_lemma20(&np, g).map_err(err)? {
            ensure(v.holds, || format!("g={g}: ord_{}(D_{{{g},3}}) = {}", v.prime, v.order))?;
        }
    }
    for (g, key) in [(2, 48u64), (3, 168)] {
        let orders = bundled_fixture(g).ok_or("missing fixture")?;
        ensure(orders.contains(&key), || format!("fixture for genus {g} lacks {key}"))?;
        for v in check_iz_fixture(&vol, &np, g, &orders).map_err(err)? {
            ensure(v.divides, || format!("{} ∤ 𝒟_{g}", v.order))?;
        }
    }
    Ok(())
}

fn conjecture13() -> Result<(), String> {
    let vol = VolumeEngine::new();
    let reports = run_suite(&vol, &[Identity::Conjecture13], 3, 4, 0).map_err(err)?;
    let nonzero = reports.iter().filter(|r| !r.holds()).count();
    println!("     conj13: {} points at g = 2, 3; {} nonzero residuals (informational)", reports.len(), nonzero);
    ensure(reports.iter().any(|r| r.genus == 2) && reports.iter().any(|r| r.genus == 3), || "no points at g = 2, 3".into())
}

fn main() -> ExitCode {
    let criteria: &[(u32, &str, u64, Check)] = &[
        (1, "one-point closed form <tau_{3g-2}>_g = 1/(24^g g!), g <= 10", 10, one_point_closed_form),
        (2, "n-point, exp-sum and tau/kappa recursion agree for 3g-3+n <= 9", 120, triple_engine_agreement),
        (3, "P_0(x,y) = 1/(x+y), P_r(x,y) = 0, printed P_r(x,y,z) for r <= 3", 10, low_point_closed_forms),
        (4, "proven identities on g <= 3, n <= 4, |b| <= 2", 300, identity_suite),
        (5, "alpha constants, orthogonality for |b| <= 8, gamma closed form", 5, alpha_gamma),
        (6, "kappa recursion equals kappa->psi reduction, g <= 3, |b| <= 4, n <= 3", 180, kappa_cross_validation),
        (7, "V_k exp(G) = 0 for k = -1..3 at (3,4,2); [V_n,V_m] = (n-m)V_{n+m} on probes", 300, virasoro),
        (8, "G(s,t) = F(t0,t1,t2+p2,...) at (3,3,3)", 300, substitution),
        (9, "denominators: D_{1,1}, script-D_2, monotonicity, prime orders, fixture orders", 600, denominators),
        (10, "conj13 residuals at g = 2, 3 (reported, never gates)", 300, conjecture13),
    ];
    let mut failed = 0;
    for &(id, name, limit, check) in criteria {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let outcome = match result {
            Ok(()) if elapsed <= Duration::from_secs(limit) => Ok(()),
            Ok(()) => Err(format!("took {:.1}s, limit {limit}s", elapsed.as_secs_f64())),
            Err(e) => Err(e),
        };
        match outcome {
            Ok(()) => println!("PASS {id:>2}  {name}  ({:.2}s)", elapsed.as_secs_f64()),
            Err(e) => {
                failed += 1;
                println!("FAIL {id:>2}  {name}  ({:.2}s): {e}", elapsed.as_secs_f64());
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

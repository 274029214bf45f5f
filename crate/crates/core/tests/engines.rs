use mgn_core::exact::{is_reduced, rat};
use mgn_core::moduli::{is_stable, psi_exponent_multisets, exponent_multisets};
use mgn_core::npoint::NPointEngine;
use mgn_core::volume::{genus_zero_closed_form, VolumeEngine};
use mgn_core::MultiIndex;

#[test]
fn three_engines_agree_up_to_dimension_six() {
    let np = NPointEngine::new();
    let vol = VolumeEngine::new();
    for g in 0..=3u32 {
        for n in 1..=9usize {
            if !is_stable(g, n) || 3 * g as i64 - 3 + n as i64 > 6 {
                continue;
            }
            for d in psi_exponent_multisets(g, n) {
                let a = np.psi_correlator(g, &d);
                let b = vol.psi_correlator_wk(g, &d).unwrap();
                assert_eq!(a, b, "g={g} d={d:?}");
                if n >= 2 {
                    assert_eq!(np.psi_correlator_theorem3(g, &d).unwrap(), a, "g={g} d={d:?}");
                }
                if g == 0 {
                    assert_eq!(a, genus_zero_closed_form(&d));
                }
                assert!(is_reduced(&a));
            }
        }
    }
}

#[test]
fn one_point_closed_form() {
    let np = NPointEngine::new();
    let vol = VolumeEngine::new();
    let mut expected = rat(1, 1);
    for g in 1..=6u32 {
        expected /= rat(24 * g as i64, 1);
        assert_eq!(np.psi_correlator(g, &[3 * g - 2]), expected);
        assert_eq!(vol.psi_correlator_wk(g, &[3 * g - 2]).unwrap(), expected);
    }
}

#[test]
fn kappa_recursion_matches_oracle() {
    let vol = VolumeEngine::new();
    for g in 0..=2u32 {
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
                    let fast = vol.correlator(g, &d, &b).unwrap();
                    let oracle = vol.kappa_reduction_oracle(g, &d, &b).unwrap();
                    assert_eq!(fast, oracle, "g={g} d={d:?} b={b}");
                }
            }
        }
    }
}

#[test]
fn mirzakhani_volumes() {
    // ⟨κ_1^{3g−3}⟩_g for g = 2, 3 against the oracle
    let vol = VolumeEngine::new();
    for g in 2..=3u32 {
        let b = MultiIndex::single(1, 3 * g - 3);
        assert_eq!(
            vol.pure_kappa_volume(g, &b).unwrap(),
            vol.kappa_reduction_oracle(g, &[], &b).unwrap()
        );
    }
}

use std::collections::HashSet;

use mgn_core::identities::{grid, run_suite, Identity};
use mgn_core::volume::VolumeEngine;

#[test]
fn proven_identities_hold_on_grid() {
    let eng = VolumeEngine::new();
    let proven: Vec<Identity> = Identity::ALL.iter().copied().filter(|i| i.is_proven()).collect();
    let reports = run_suite(&eng, &proven, 3, 4, 2).unwrap();
    let failures: Vec<_> = reports.iter().filter(|r| !r.holds()).map(|r| r.to_json().to_string()).collect();
    assert!(failures.is_empty(), "{} failures:\n{}", failures.len(), failures.join("\n"));
    for id in proven {
        assert!(reports.iter().any(|r| r.identity == id), "no grid points for {}", id.name());
    }
}

#[test]
fn conjecture13_at_genus_two_and_three() {
    let eng = VolumeEngine::new();
    let reports = run_suite(&eng, &[Identity::Conjecture13], 3, 4, 0).unwrap();
    assert!(!reports.is_empty());
    for r in reports {
        assert!(r.holds(), "{}", r.to_json());
    }
}

#[test]
fn thm8_closed_form_matches_thm7_closed_form() {
    // With the string equation, thm7.2 at d is carried by thm8.2 at the
    // tuples d − e_i. Compare pass sets.
    let eng = VolumeEngine::new();
    let t7 = run_suite(&eng, &[Identity::Theorem7ClosedForm], 3, 4, 0).unwrap();
    let t8 = run_suite(&eng, &[Identity::Theorem8ClosedForm], 3, 5, 0).unwrap();
    let pass8: HashSet<(u32, Vec<u32>)> = t8.iter().filter(|r| r.holds()).map(|r| (r.genus, sorted(&r.d))).collect();
    assert_eq!(pass8.len(), t8.len());
    let mut linked = 0;
    for r in &t7 {
        assert!(r.holds(), "{}", r.to_json());
        for i in 0..r.d.len() {
            if r.d[i] >= 2 {
                let mut d = r.d.clone();
                d[i] -= 1;
                assert!(pass8.contains(&(r.genus, sorted(&d))), "g={} d={d:?}", r.genus);
                linked += 1;
            }
        }
    }
    assert!(linked > 0);
    assert_eq!(grid(Identity::Theorem7ClosedForm, 3, 4, 0).len(), t7.len());
}

fn sorted(d: &[u32]) -> Vec<u32> {
    let mut v = d.to_vec();
    v.sort_unstable();
    v
}

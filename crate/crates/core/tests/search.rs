//! Search against brute-force enumeration, and invariance of verdicts under
//! a global character twist.

use isogenous::exceptional::{
    search_sequences, standard_quadruple, verify_exceptional_sequence, CharacterRange,
    SearchWindow, Verdict,
};
use isogenous::surface::{Preset, ProductQuotientSurface};

fn z3() -> ProductQuotientSurface {
    Preset::Z3Squared.surface().unwrap()
}

#[test]
fn search_matches_brute_force_on_a_small_window() {
    let s = z3();
    let window = SearchWindow {
        bounds: [(-2, 0), (0, 1), (-2, 0), (0, 1)],
        characters: CharacterRange::Trivial,
        length: None,
    };
    let out = search_sequences(&window, &s).unwrap();
    let cands = window.candidates(&s).unwrap();
    assert_eq!(cands.len(), 36);
    let o = s.structure_sheaf();
    let mut valid = Vec::new();
    let mut undetermined = Vec::new();
    for a in &cands {
        for b in &cands {
            for c in &cands {
                let coll = vec![o.clone(), a.clone(), b.clone(), c.clone()];
                match verify_exceptional_sequence(&coll, &s).unwrap().verdict {
                    Verdict::Valid => valid.push(coll),
                    Verdict::Undetermined => undetermined.push(coll),
                    Verdict::Invalid => {}
                }
            }
        }
    }
    let found: Vec<_> = out.valid.iter().map(|c| c.collection.clone()).collect();
    let open: Vec<_> = out
        .undetermined
        .iter()
        .map(|u| u.collection.clone())
        .collect();
    assert_eq!(found, valid);
    assert_eq!(open, undetermined);
    assert!(!valid.is_empty());
    let q = standard_quadruple(&s, [&[0, 0], &[0, 0], &[0, 0], &[0, 0]]).unwrap();
    assert!(found.contains(&q));
}

#[test]
fn window_one_matches_brute_force() {
    let s = z3();
    let window = SearchWindow::symmetric(1, CharacterRange::Trivial);
    let out = search_sequences(&window, &s).unwrap();
    let cands = window.candidates(&s).unwrap();
    let o = s.structure_sheaf();
    let (mut valid, mut open) = (0, 0);
    for a in &cands {
        for b in &cands {
            for c in &cands {
                let coll = [o.clone(), a.clone(), b.clone(), c.clone()];
                match verify_exceptional_sequence(&coll, &s).unwrap().verdict {
                    Verdict::Valid => valid += 1,
                    Verdict::Undetermined => open += 1,
                    Verdict::Invalid => {}
                }
            }
        }
    }
    assert_eq!((out.valid.len(), out.undetermined.len()), (valid, open));
}

fn twist_all(
    s: &ProductQuotientSurface,
    coll: &[isogenous::cohomology::EquivariantLineBundle],
    w: &[i64],
) -> Vec<isogenous::cohomology::EquivariantLineBundle> {
    let t = s.bundle(&[], &[], w).unwrap();
    coll.iter().map(|b| s.tensor(b, &t)).collect()
}

#[test]
fn verdicts_are_twist_invariant_over_the_window() {
    let s = z3();
    let chars = s.group().characters().unwrap();
    let valid = search_sequences(&SearchWindow::symmetric(2, CharacterRange::Trivial), &s).unwrap();
    let open = search_sequences(&SearchWindow::symmetric(1, CharacterRange::Trivial), &s).unwrap();
    let mut checked = 0;
    let colls = valid
        .valid
        .iter()
        .map(|c| c.collection.clone())
        .chain(open.undetermined.iter().map(|u| u.collection.clone()));
    for coll in colls {
        let base = verify_exceptional_sequence(&coll, &s).unwrap();
        for chi in &chars {
            let t = verify_exceptional_sequence(&twist_all(&s, &coll, chi.weights()), &s).unwrap();
            assert_eq!(t.verdict, base.verdict);
            let a: Vec<_> = base
                .pairs
                .iter()
                .map(|p| (p.profile.invariant, p.outcome))
                .collect();
            let b: Vec<_> = t
                .pairs
                .iter()
                .map(|p| (p.profile.invariant, p.outcome))
                .collect();
            assert_eq!(a, b);
            checked += 1;
        }
    }
    assert!(checked > 9 * 62);
    // Single-bundle window members as well: all 625 × 9 twists of (O, L).
    let cands = SearchWindow::symmetric(2, CharacterRange::Trivial)
        .candidates(&s)
        .unwrap();
    for l in &cands {
        let base = verify_exceptional_sequence(&[s.structure_sheaf(), l.clone()], &s).unwrap();
        for chi in &chars {
            let coll = twist_all(&s, &[s.structure_sheaf(), l.clone()], chi.weights());
            assert_eq!(
                verify_exceptional_sequence(&coll, &s).unwrap().verdict,
                base.verdict
            );
        }
    }
}

#[test]
fn window_two_contains_the_quadruple_and_its_swap() {
    let s = z3();
    let out = search_sequences(&SearchWindow::symmetric(2, CharacterRange::Trivial), &s).unwrap();
    let found: Vec<_> = out.valid.iter().map(|c| c.collection.clone()).collect();
    let q = standard_quadruple(&s, [&[0, 0], &[0, 0], &[0, 0], &[0, 0]]).unwrap();
    let swapped = vec![q[0].clone(), q[2].clone(), q[1].clone(), q[3].clone()];
    assert!(found.contains(&q));
    assert!(found.contains(&swapped));
    for c in &out.valid {
        assert_eq!(
            verify_exceptional_sequence(&c.collection, &s)
                .unwrap()
                .verdict,
            Verdict::Valid
        );
        assert!(c.maximal_length);
    }
}

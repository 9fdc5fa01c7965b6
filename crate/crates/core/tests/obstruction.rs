//! The closed-form obstruction against Riemann–Roch on `S`, and the residue
//! engine against brute force.

use isogenous::obstruction::{
    chi_obstruction, no_go_z2_cubed_with_bound, no_go_z2_fourth_with_bound, obstruction_formula,
    residue_proof, LinearForm, ProductCondition, ProofVerdict, ResidueProblem,
};
use isogenous::surface::{rr_surface_chi, Bidegree, Preset};
use num_rational::Ratio;
use proptest::prelude::*;

#[test]
fn specializes_to_riemann_roch_on_every_preset() {
    for preset in Preset::ALL {
        let s = preset.surface().unwrap();
        let (gc, gd, n) = (s.c().genus(), s.d().genus(), s.group_order());
        let k = s.canonical_bidegree();
        let step_c = s
            .c()
            .orbits()
            .iter()
            .map(|o| o.degree as i64)
            .min()
            .unwrap();
        let step_d = s
            .d()
            .orbits()
            .iter()
            .map(|o| o.degree as i64)
            .min()
            .unwrap();
        for i in -10..=10 {
            for j in -10..=10 {
                let (e, f) = (i * step_c, j * step_d);
                let rr = rr_surface_chi(Bidegree::new(e, f), k, n).unwrap();
                assert_eq!(
                    chi_obstruction(gc, gd, n, e, f),
                    Ratio::from_integer(rr),
                    "{preset} ({e}, {f})"
                );
                assert_eq!(
                    obstruction_formula(gc, gd, n).evaluate(e, f),
                    Ratio::from_integer(rr)
                );
            }
        }
    }
}

#[test]
fn factored_forms() {
    let f = obstruction_formula(3, 5, 8);
    assert_eq!(f.factored_shifts, Some((2, 4)));
    assert_eq!(f.evaluate(8, 8), Ratio::new(6 * 4, 8));
    let g = obstruction_formula(5, 5, 16);
    assert_eq!(g.factored_shifts, Some((4, 4)));
    assert_eq!(g.evaluate(8, 8), Ratio::from_integer(1));
}

proptest! {
    #[test]
    fn symmetric_under_swapping_factors(gc in 2u64..10, gd in 2u64..10, n in 1u64..20, e in -60i64..60, f in -60i64..60) {
        prop_assert_eq!(chi_obstruction(gc, gd, n, e, f), chi_obstruction(gd, gc, n, f, e));
    }

    #[test]
    fn invariant_under_the_serre_involution(gc in 2u64..10, gd in 2u64..10, n in 1u64..20, e in -60i64..60, f in -60i64..60) {
        let (kc, kd) = (2 * gc as i64 - 2, 2 * gd as i64 - 2);
        prop_assert_eq!(chi_obstruction(gc, gd, n, e, f), chi_obstruction(gc, gd, n, kc - e, kd - f));
    }

    /// A single product condition over small lattices: the engine may only
    /// claim UNSAT when no point in a box solves it.
    #[test]
    fn residue_verdicts_are_sound(
        m in proptest::collection::vec(1i64..=4, 2),
        a in proptest::collection::vec(-3i64..=3, 2),
        b in proptest::collection::vec(-3i64..=3, 2),
        ca in -6i64..=6,
        cb in -6i64..=6,
    ) {
        let problem = ResidueProblem {
            variables: vec!["x".into(), "y".into()],
            moduli: m.clone(),
            conditions: vec![ProductCondition {
                label: "c".into(),
                factors: vec![LinearForm::new(a.clone(), ca), LinearForm::new(b.clone(), cb)],
            }],
        };
        let proof = residue_proof(&problem);
        if proof.verdict == ProofVerdict::Unsatisfiable {
            for i in -12..=12 {
                for j in -12..=12 {
                    let v = [i * m[0], j * m[1]];
                    let prod = problem.conditions[0].factors.iter().map(|f| f.evaluate(&v)).product::<i64>();
                    prop_assert!(prod != 0, "{:?} solves {:?}", v, problem);
                }
            }
        }
    }
}

#[test]
fn small_bounds_agree_with_proofs() {
    for bound in [0, 8, 24, 40] {
        let r = no_go_z2_cubed_with_bound(bound).unwrap();
        assert!(r.unsatisfiable && r.proofs_and_scans_agree);
        assert!(r.scans.iter().all(|s| s.solutions.is_empty()));
        let r = no_go_z2_fourth_with_bound(bound).unwrap();
        assert!(r.unsatisfiable && r.proofs_and_scans_agree);
    }
    assert!(no_go_z2_cubed_with_bound(-1).is_err());
}

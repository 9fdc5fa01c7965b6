//! Consistency sweeps: Riemann–Roch and Serre duality on the curves and on
//! `X`, Künneth against the Euler characteristic on `S`, and monotonicity.

use isogenous::cohomology::invariant_profile;
use isogenous::curve::{curve_cohomology, is_effective_class, CohStatus, DivisorClassGroup};
use isogenous::surface::{Preset, ProductQuotientSurface};
use proptest::prelude::*;

fn boxes(len: usize, r: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|v| {
                (-r..=r).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

fn intervals_meet(a: CohStatus, b: CohStatus) -> bool {
    a.lo() <= b.hi() && b.lo() <= a.hi()
}

fn check_curve(classes: &DivisorClassGroup, r: i64) -> usize {
    let g = classes.genus() as i64;
    let k = classes.canonical_class().clone();
    let mut checked = 0;
    for coeffs in boxes(classes.generator_count(), r) {
        let d = classes.class(&coeffs).unwrap();
        let h = curve_cohomology(classes, &d);
        let chi = d.degree + 1 - g;
        // Riemann–Roch: some pair in the ranges has h⁰ − h¹ = χ
        assert!(
            h.h0.lo() as i64 - h.h1.hi() as i64 <= chi
                && chi <= h.h0.hi() as i64 - h.h1.lo() as i64,
            "RR fails for {coeffs:?}: {h:?}"
        );
        if let (Some(a), Some(b)) = (h.h0.exact_value(), h.h1.exact_value()) {
            assert_eq!(a as i64 - b as i64, chi, "{coeffs:?}");
        }
        // Serre duality: h¹(D) = h⁰(K − D)
        let dual = curve_cohomology(classes, &classes.sub(&k, &d));
        assert!(
            intervals_meet(h.h1, dual.h0),
            "Serre fails for {coeffs:?}: {h:?} vs {dual:?}"
        );
        assert!(
            intervals_meet(h.h0, dual.h1),
            "Serre fails for {coeffs:?}: {h:?} vs {dual:?}"
        );
        // h⁰ > 0 exactly on effective classes
        let effective = is_effective_class(classes, &d).is_some();
        if effective {
            assert!(h.h0.lo() > 0, "{coeffs:?} effective but h0 = {}", h.h0);
        } else {
            assert_eq!(h.h0.hi(), 0, "{coeffs:?} not effective but h0 = {}", h.h0);
        }
        checked += 1;
    }
    checked
}

#[test]
fn curve_riemann_roch_and_serre_duality_z3_squared() {
    let s = Preset::Z3Squared.surface().unwrap();
    assert_eq!(check_curve(s.c_classes(), 3), 7usize.pow(5));
    assert_eq!(check_curve(s.d_classes(), 3), 7usize.pow(5));
}

#[test]
fn curve_riemann_roch_and_serre_duality_other_presets() {
    for p in [Preset::Z2Cubed, Preset::Z2Fourth, Preset::Z5Squared] {
        let s = p.surface().unwrap();
        let r = if s.c_classes().generator_count() > 5 {
            2
        } else {
            3
        };
        assert!(check_curve(s.c_classes(), r) > 0);
        assert!(check_curve(s.d_classes(), r) > 0);
    }
}

/// `|G|·χ(S, L) = χ(X, L) = χ(C, L_C)·χ(D, L_D)`, the right side computed
/// from degrees alone.
#[test]
fn euler_characteristic_on_s_matches_kunneth() {
    let s = Preset::Z3Squared.surface().unwrap();
    let order = s.group_order() as i64;
    let (gc, gd) = (s.c().genus() as i64, s.d().genus() as i64);
    let mut exact_totals = 0;
    for a in -12..=12 {
        for b in -12..=12 {
            for (c, d) in [
                (vec![a], vec![b]),
                (vec![a, -1], vec![b, 1]),
                (vec![-a, 0, 1], vec![1, b]),
            ] {
                let bundle = s.bundle(&c, &d, &[0, 0]).unwrap();
                let p = invariant_profile(&bundle, &s).unwrap();
                let deg = bundle.bidegree();
                let product = (deg.c + 1 - gc) * (deg.d + 1 - gd);
                assert_eq!(order * p.chi_s, product, "{c:?} {d:?}");
                if let Some(total) = p.total_euler() {
                    assert_eq!(total, product);
                    exact_totals += 1;
                }
                if let Some(inv) = p.invariant_euler() {
                    assert_eq!(inv, p.chi_s);
                }
                let (lo, hi) = (0..3).fold((0i64, 0i64), |(lo, hi), k| {
                    let sign = if k % 2 == 0 { 1 } else { -1 };
                    let (x, y) = (p.total[k].lo() as i64, p.total[k].hi() as i64);
                    if sign > 0 {
                        (lo + x, hi + y)
                    } else {
                        (lo - y, hi - x)
                    }
                });
                assert!(lo <= product && product <= hi);
            }
        }
    }
    assert!(exact_totals > 1000);
    // the sum bundle of the quadruple: 9·4 = 36
    let sum = s.bundle(&[-2, 1], &[-2, 1], &[0, 0]).unwrap();
    let p = invariant_profile(&sum, &s).unwrap();
    assert_eq!((p.chi_s, p.total_euler()), (4, Some(36)));
}

#[test]
fn serre_duality_on_x_and_s() {
    for preset in Preset::ALL {
        let s = preset.surface().unwrap();
        let k = s.canonical_bundle();
        let chars = s.group().characters().unwrap();
        for c in boxes(2, 2) {
            for d in boxes(2, 2) {
                for chi in chars.iter().take(4) {
                    let l = s.bundle(&c, &d, chi.weights()).unwrap();
                    let dual = s.tensor(&k, &s.dual(&l));
                    let p = invariant_profile(&l, &s).unwrap();
                    let q = invariant_profile(&dual, &s).unwrap();
                    assert_eq!(p.chi_s, q.chi_s, "{preset} {c:?} {d:?}");
                    for i in 0..3 {
                        assert!(
                            intervals_meet(p.total[i], q.total[2 - i]),
                            "{preset} {c:?} {d:?} H^{i}"
                        );
                        let (a, b) = (p.invariant[i], q.invariant[2 - i]);
                        assert!(
                            a.lo() <= b.hi() && b.lo() <= a.hi(),
                            "{preset} {c:?} {d:?} {chi} H^{i}: {a} vs {b}"
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn adding_an_orbit_never_loses_sections() {
    let s = Preset::Z3Squared.surface().unwrap();
    let classes = s.c_classes();
    for coeffs in boxes(classes.generator_count(), 2) {
        let d = classes.class(&coeffs).unwrap();
        let h = curve_cohomology(classes, &d).h0;
        for i in 0..classes.orbit_count() {
            let bigger = classes.add(&d, &classes.orbit_class(i));
            let h2 = curve_cohomology(classes, &bigger).h0;
            assert!(h2.hi() >= h.lo(), "{coeffs:?} + E{}", i + 1);
            assert!(h2.hi() <= h.hi() + classes.orbit_class(i).degree as u64);
        }
    }
}

fn z3() -> ProductQuotientSurface {
    Preset::Z3Squared.surface().unwrap()
}

proptest! {
    #[test]
    fn kunneth_totals_multiply(
        c in proptest::collection::vec(-4i64..=4, 2),
        d in proptest::collection::vec(-4i64..=4, 2),
    ) {
        let s = z3();
        let l = s.bundle(&c, &d, &[0, 0]).unwrap();
        let p = invariant_profile(&l, &s).unwrap();
        let (hc, hd) = (p.curve_c, p.curve_d);
        prop_assert_eq!(p.total[0].lo(), hc.h0.lo() * hd.h0.lo());
        prop_assert_eq!(p.total[2].hi(), hc.h1.hi() * hd.h1.hi());
        prop_assert_eq!(p.total[1].hi(), hc.h0.hi() * hd.h1.hi() + hc.h1.hi() * hd.h0.hi());
        for k in 0..3 {
            prop_assert!(p.invariant[k].hi() <= p.total[k].hi());
        }
    }

    #[test]
    fn invariant_parts_sum_to_totals(
        c in proptest::collection::vec(-3i64..=3, 2),
        d in proptest::collection::vec(-3i64..=3, 2),
    ) {
        // Summed over all characters, the invariant parts of the twists
        // add up to the total cohomology on X.
        let s = z3();
        for k in 0..3 {
            let mut lo = 0;
            let mut hi = 0;
            let mut total = None;
            for chi in s.group().characters().unwrap() {
                let p = invariant_profile(&s.bundle(&c, &d, chi.weights()).unwrap(), &s).unwrap();
                lo += p.invariant[k].lo();
                hi += p.invariant[k].hi();
                total = Some(p.total[k]);
            }
            let total = total.unwrap();
            prop_assert!(lo <= total.hi() && total.lo() <= hi, "H^{}: [{}, {}] vs {}", k, lo, hi, total);
        }
    }
}

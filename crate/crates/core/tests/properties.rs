use dcover_core::arrangements::{ch_passes, cynk_hulek_report};
use dcover_core::quotients::{named_involutions, twisted_count_brute, twisted_count_h90, ProjDeckMap};
use dcover_core::{bundled, count_double_cover, DoubleCoverSpec, FieldCtx};
use num_rational::Ratio;
use proptest::prelude::*;

fn ctx(p: u32) -> FieldCtx {
    FieldCtx::new(p as u64).unwrap()
}

/// Forms of a random arrangement of `n` hyperplanes in `P^dim`.
fn forms(dim: usize, n: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-2i64..=2, dim + 1), n)
}

/// Elementary unimodular matrix `I + k E_{ij}`, applied to every form.
fn shear(forms: &[Vec<i64>], i: usize, j: usize, k: i64) -> Vec<Vec<i64>> {
    forms
        .iter()
        .map(|f| {
            let mut g = f.clone();
            g[j] += k * f[i];
            g
        })
        .collect()
}

fn ch_signature(spec: &DoubleCoverSpec) -> (bool, Vec<(usize, usize)>) {
    let reports = cynk_hulek_report(spec).unwrap();
    let mut bad: Vec<(usize, usize)> = reports
        .iter()
        .filter(|r| !r.ch_ok)
        .map(|r| (r.subset.len(), r.intersection_dim))
        .collect();
    bad.sort();
    (ch_passes(&reports), bad)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn ch_verdict_ignores_form_order(f in forms(3, 8), rot in 0usize..8) {
        let Ok(a) = DoubleCoverSpec::new("a", 3, f.clone(), Ratio::from_integer(1), None) else {
            return Ok(());
        };
        let mut g = f;
        g.rotate_left(rot);
        g.swap(0, 7);
        let b = DoubleCoverSpec::new("b", 3, g, Ratio::from_integer(1), None).unwrap();
        prop_assert_eq!(ch_signature(&a), ch_signature(&b));
    }

    #[test]
    fn ch_verdict_ignores_coordinates(f in forms(3, 8), i in 0usize..4, j in 0usize..4, k in -3i64..=3) {
        prop_assume!(i != j);
        let Ok(a) = DoubleCoverSpec::new("a", 3, f.clone(), Ratio::from_integer(1), None) else {
            return Ok(());
        };
        let b = DoubleCoverSpec::new("b", 3, shear(&f, i, j, k), Ratio::from_integer(1), None).unwrap();
        prop_assert_eq!(ch_signature(&a), ch_signature(&b));
    }

    #[test]
    fn count_ignores_coordinates(f in forms(2, 6), i in 0usize..3, j in 0usize..3, k in -3i64..=3, p in prop::sample::select(vec![5u32, 7, 11])) {
        prop_assume!(i != j);
        let c = ctx(p);
        let Ok(a) = DoubleCoverSpec::new("a", 2, f.clone(), Ratio::from_integer(1), None) else {
            return Ok(());
        };
        let b = DoubleCoverSpec::new("b", 2, shear(&f, i, j, k), Ratio::from_integer(1), None).unwrap();
        // a shear is invertible over every F_p; forms may scale, which the reduction rejects
        if let (Ok(x), Ok(y)) = (count_double_cover(&c, &a), count_double_cover(&c, &b)) {
            prop_assert_eq!(x.count, y.count);
        }
    }

    #[test]
    fn square_twist_is_invisible(f in forms(2, 4), s in 1i64..6, p in prop::sample::select(vec![7u32, 11, 13])) {
        prop_assume!(s % p as i64 != 0);
        let c = ctx(p);
        let Ok(a) = DoubleCoverSpec::new("a", 2, f, Ratio::from_integer(1), None) else {
            return Ok(());
        };
        let b = a.twisted_by(Ratio::from_integer(s * s)).unwrap();
        if let Ok(x) = count_double_cover(&c, &a) {
            prop_assert_eq!(x.count, count_double_cover(&c, &b).unwrap().count);
        }
    }

    #[test]
    fn h90_seed_independence(which in 0usize..6, s1 in any::<u64>(), s2 in any::<u64>()) {
        let (_, spec, g) = named_involutions().unwrap().swap_remove(which);
        let c = ctx(5);
        prop_assert_eq!(
            twisted_count_h90(&c, &spec, &g, s1).unwrap().t,
            twisted_count_h90(&c, &spec, &g, s2).unwrap().t
        );
    }
}

/// `h g h⁻¹` as a lift, with `h⁻¹ = h` or `h` times the deck map.
fn conjugate(h: &ProjDeckMap, g: &ProjDeckMap) -> ProjDeckMap {
    let hh = h.compose(h).unwrap();
    let hinv = if hh.is_identity() { h.clone() } else { h.other_lift() };
    assert!(h.compose(&hinv).unwrap().is_identity());
    h.compose(g).unwrap().compose(&hinv).unwrap()
}

#[test]
fn twisted_count_is_a_class_function() {
    let all = named_involutions().unwrap();
    for (gname, spec, g) in &all {
        for (hname, hspec, h) in &all {
            if hspec.forms() != spec.forms() || gname == hname {
                continue;
            }
            let k = conjugate(h, g);
            let c = ctx(3);
            assert_eq!(
                twisted_count_brute(&c, spec, g).unwrap().t,
                twisted_count_brute(&c, spec, &k).unwrap().t,
                "{hname} {gname} {hname}^-1 at 3"
            );
            let c = ctx(7);
            assert_eq!(
                twisted_count_h90(&c, spec, g, 1).unwrap().t,
                twisted_count_h90(&c, spec, &k, 1).unwrap().t,
                "{hname} {gname} {hname}^-1 at 7"
            );
        }
    }
}

#[test]
fn deck_lift_twists_to_the_quadratic_twist() {
    // T for the deck map counts the cover twisted by a nonsquare
    for (spec, p) in [(bundled::k32(), 7u32), (bundled::k32(), 11)] {
        let c = ctx(p);
        let deck = ProjDeckMap::deck(&spec);
        let nr = c.nonresidue() as i64;
        let twisted = spec.twisted_by(Ratio::from_integer(nr)).unwrap();
        assert_eq!(
            twisted_count_brute(&c, &spec, &deck).unwrap().t,
            count_double_cover(&c, &twisted).unwrap().count
        );
    }
}

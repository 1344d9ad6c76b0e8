use boundary_core::adjacency::{adjacent_to, set_shadow, test_projective_adjacency, Side};
use boundary_core::geometry::{
    chord2, chord_bounds, point_shadow, stolz_contains, tau, tent_of, Arc, ArcUnion, BoundaryPoint, DiscPoint, TWO_PI,
};
use boundary_core::harmonic::{harmonic_measure_arc, harmonic_measure_union, poisson_eval, BoundaryIndicator};
use boundary_core::regions::{
    classify, default_ladder, make_interleaved_region, make_prop2b_region, make_stolz_region, union_regions,
    RegionKind, SequenceRule,
};
use proptest::prelude::*;

fn disc_point() -> impl Strategy<Value = DiscPoint> {
    (0.0..TWO_PI, -12.0f64..0.0).prop_map(|(t, l)| DiscPoint::from_coords(t, 10f64.powf(l)).unwrap())
}

fn arc() -> impl Strategy<Value = Arc> {
    (0.0..TWO_PI, 1e-6..TWO_PI).prop_map(|(s, l)| Arc::new(s, l).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn tau_in_unit_interval(w in 0.0..TWO_PI, z in disc_point()) {
        let t = tau(&BoundaryPoint::new(w), &z);
        prop_assert!(t > 0.0 && t <= 1.0);
    }

    #[test]
    fn shadow_membership_duality(b in 1u32..=10, z in disc_point(), u in 0.0..TWO_PI) {
        let sh = point_shadow(b, &z).unwrap();
        let w = BoundaryPoint::new(u);
        // keep away from the boundary of the shadow where rounding decides
        let edge = (w.distance(&z) - (1.0 + b as f64) * z.delta()).abs();
        prop_assume!(edge > 1e-12 * w.distance(&z));
        prop_assert_eq!(sh.contains(u), stolz_contains(b, &w, &z));
    }

    #[test]
    fn chord_sandwich(t1 in -0.2499..0.2499f64, d1 in 0.0..0.2499f64, t2 in -0.2499..0.2499f64, d2 in 0.0..0.2499f64) {
        let c = chord_bounds((t1, d1), (t2, d2)).unwrap();
        let slack = 1e-12 * c.chord2.max(f64::MIN_POSITIVE);
        prop_assert!(c.lower <= c.chord2 + slack);
        prop_assert!(c.chord2 <= c.upper + slack);
    }

    #[test]
    fn normalize_is_idempotent_and_order_free(arcs in prop::collection::vec(arc(), 1..12), seed in any::<u64>()) {
        let u = ArcUnion::normalize(&arcs);
        let again = ArcUnion::normalize(&u.components());
        prop_assert_eq!(u.component_count(), again.component_count());
        prop_assert!((u.measure() - again.measure()).abs() < 1e-12);
        let mut shuffled = arcs.clone();
        let n = shuffled.len();
        for i in 0..n {
            shuffled.swap(i, (seed as usize).wrapping_mul(i + 7) % n);
        }
        let v = ArcUnion::normalize(&shuffled);
        prop_assert!((u.measure() - v.measure()).abs() < 1e-12);
    }

    #[test]
    fn union_is_subadditive(a in prop::collection::vec(arc(), 1..6), b in prop::collection::vec(arc(), 1..6)) {
        let (ua, ub) = (ArcUnion::normalize(&a), ArcUnion::normalize(&b));
        let u = ua.union(&ub);
        prop_assert!(u.measure() <= ua.measure() + ub.measure() + 1e-12);
        prop_assert!(u.measure() + 1e-12 >= ua.measure().max(ub.measure()));
    }

    #[test]
    fn tent_radius_is_the_chord(y in 0.0..TWO_PI, th in 1e-6..TWO_PI) {
        let t = tent_of(&Arc::centered(y, th).unwrap());
        let chord = chord2(y, 0.0, y + 0.5 * th, 0.0).sqrt();
        prop_assert!((t.radius - chord).abs() < 1e-14);
    }

    #[test]
    fn shadows_grow_with_aperture(pts in prop::collection::vec(disc_point(), 1..20), b in 1u32..8) {
        let s1 = set_shadow(b, &pts).unwrap();
        let s2 = set_shadow(b + 1, &pts).unwrap();
        prop_assert!(s1.is_subset_of(&s2, 1e-12));
    }

    #[test]
    fn harmonic_measure_is_additive(z in disc_point(), arcs in prop::collection::vec(arc(), 1..6)) {
        let u = ArcUnion::normalize(&arcs);
        let whole = harmonic_measure_union(&z, &u);
        let parts: f64 = u.components().iter().map(|c| harmonic_measure_arc(&z, c)).sum();
        prop_assert!((whole - parts).abs() < 1e-13);
        prop_assert!((-1e-15..=1.0 + 1e-13).contains(&whole));
    }

    #[test]
    fn harmonic_measure_is_monotone(z in disc_point(), big in arc(), a in 0.0..1.0f64, l in 0.0..1.0f64) {
        let inner = Arc::new(big.start() + a * big.len(), (l * (1.0 - a) * big.len()).max(1e-9)).unwrap();
        prop_assert!(harmonic_measure_arc(&z, &inner) <= harmonic_measure_arc(&z, &big) + 1e-13);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn adjacency_witness_is_inside_shadow(k in 3i32..10, b in 1u32..5, w in 0.0..TWO_PI) {
        let region = make_prop2b_region(BoundaryPoint::new(w));
        let r = 2f64.powi(-k);
        let rep = test_projective_adjacency(&region, b, &[r], 32).unwrap();
        let j = rep.rows[0].witness.unwrap();
        // recompute the shadow from scratch: sampled tail plus the analytic chain
        let pts = region.sample_tail(r, 32).unwrap();
        let RegionKind::Sequence { rule, .. } = region.kind() else { unreachable!() };
        let n0 = rule.tail_start(r, 1).unwrap();
        let chain = rule.shadow_chain(b, n0).unwrap();
        let shadow = set_shadow(b, &pts)
            .unwrap()
            .union(&ArcUnion::from_arc(&Arc::new(chain.start() + w, chain.len()).unwrap()));
        for i in 1..=100 {
            prop_assert!(shadow.contains(j.start() + j.len() * i as f64 / 101.0));
        }
        prop_assert!(adjacent_to(&shadow, BoundaryPoint::new(w), Side::Either).is_some());
    }

    #[test]
    fn classification_is_rotation_equivariant(alpha in 0.0..TWO_PI) {
        let ladder = default_ladder();
        for reg in [make_prop2b_region(BoundaryPoint::new(0.0)), make_stolz_region(2, BoundaryPoint::new(0.0)), make_interleaved_region(BoundaryPoint::new(0.0))] {
            let a = classify(&reg, &ladder, 64).unwrap();
            let b = classify(&reg.rotate(alpha), &ladder, 64).unwrap();
            prop_assert_eq!(a.verdict, b.verdict);
        }
    }

    #[test]
    fn sampled_tails_are_sound(w in 0.0..TWO_PI, k in 1i32..24) {
        let r = 2f64.powi(-k);
        let base = BoundaryPoint::new(w);
        for reg in [make_prop2b_region(base), make_stolz_region(3, base), make_interleaved_region(base)] {
            for z in reg.sample_tail(r, 16).unwrap() {
                prop_assert!(base.distance(&z) < r + 1e-15);
            }
        }
    }

    #[test]
    fn poisson_is_bounded_by_coefficients(z in disc_point(), arcs in prop::collection::vec(arc(), 1..4), c in 0.0..3.0f64) {
        let mut f = BoundaryIndicator::new();
        f.add(c, ArcUnion::normalize(&arcs));
        let u = poisson_eval(&f, &z);
        prop_assert!(u >= -1e-13 && u <= c + 1e-12);
    }
}

#[test]
fn sampled_gauges_are_monotone_on_nested_tails() {
    let ladder = default_ladder();
    for reg in [make_prop2b_region(BoundaryPoint::new(1.0)), make_interleaved_region(BoundaryPoint::new(2.0))] {
        let rep = classify(&reg, &ladder, 64).unwrap();
        for w in rep.lower_tau.windows(2) {
            assert!(w[1] >= w[0]);
        }
        for w in rep.upper_tau.windows(2) {
            assert!(w[1] <= w[0]);
        }
    }
}

#[test]
fn classification_depends_only_on_the_germ() {
    let w = BoundaryPoint::new(0.0);
    let a = make_prop2b_region(w);
    let rule = SequenceRule::Prop2b;
    // move the first points far from w
    let moved: Vec<DiscPoint> = (1..=5).map(|n| rule.point(n).unwrap().rotate(3.0)).collect();
    let b = union_regions(w, vec![RegionKind::Explicit(moved), RegionKind::Sequence { rule, start: 6 }]);
    let ladder: Vec<f64> = default_ladder().into_iter().filter(|&r| r < 0.1).collect();
    let ra = classify(&a, &ladder, 64).unwrap();
    let rb = classify(&b, &ladder, 64).unwrap();
    assert_eq!(ra.verdict, rb.verdict);
    assert_eq!(ra.lower_tau, rb.lower_tau);
    assert_eq!(ra.upper_tau, rb.upper_tau);
}

#[test]
fn shadow_grows_with_radius() {
    let reg = make_prop2b_region(BoundaryPoint::new(0.5));
    let s = reg.sampler(64).unwrap();
    let mut prev: Option<ArcUnion> = None;
    for r in default_ladder() {
        let sh = set_shadow(2, &s.tail(r)).unwrap();
        if let Some(p) = &prev {
            assert!(sh.is_subset_of(p, 1e-12));
        }
        prev = Some(sh);
    }
}

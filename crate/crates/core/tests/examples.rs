use boundary_core::counterexample::{
    build_o, build_v, phi_threshold, select_phi, tangency_gauge, v_sequence, zygmund_check, zygmund_member, GaugeSource,
    DEFAULT_C,
};
use boundary_core::geometry::{Arc, ArcUnion, BoundaryPoint, TWO_PI};
use boundary_core::harmonic::{harmonic_measure_union, oscillation, poisson_eval, tent_minimum, BoundaryIndicator};
use boundary_core::regions::{make_prop2b_region, make_radial_region, RegionFamily};

fn prop2b_family() -> RegionFamily {
    RegionFamily::rotation_invariant(make_prop2b_region(BoundaryPoint::new(0.0)), 2)
}

#[test]
fn v_sequence_prefix_and_blocks() {
    let head: Vec<u32> = (1..=6).map(v_sequence).collect();
    assert_eq!(head, [2, 3, 2, 3, 4, 2]);
    let seen: Vec<u32> = (1..=25).map(v_sequence).collect();
    for b in 2..=6 {
        assert!(seen.contains(&b), "{b} missing");
    }
    assert!((1..10_000).all(|j| v_sequence(j) >= 2));
}

#[test]
fn first_phi_meets_the_threshold() {
    let fam = prop2b_family();
    let src = GaugeSource::new(&fam, 64).unwrap();
    let phi1 = select_phi(&src, 1, DEFAULT_C, 0, 1 << 40).unwrap();
    assert!(src.sup(phi1) < DEFAULT_C * (10.0 / 22.0) * 0.5 / 2.0);
    assert!((phi_threshold(1, DEFAULT_C) - DEFAULT_C * (10.0 / 22.0) * 0.5 / 2.0).abs() < 1e-16);
    assert!(phi1 > 1);
    let phi2 = select_phi(&src, 2, DEFAULT_C, phi1, 1 << 40).unwrap();
    assert!(phi2 > phi1);
}

#[test]
fn prop2b_gauge_decays() {
    let fam = prop2b_family();
    let g = tangency_gauge(&fam, BoundaryPoint::new(0.0), 1000, 64).unwrap();
    assert!(g < 0.05, "{g}");
    let g10 = tangency_gauge(&fam, BoundaryPoint::new(0.0), 10, 64).unwrap();
    assert!(g <= g10);
}

#[test]
fn v_measure_is_bounded() {
    let phi = [5u64, 17, 40, 90, 200];
    for j in 1..=5u32 {
        let v = build_v(j, &phi, 5);
        assert!(v.measure() <= 2f64.powi(1 - j as i32) * TWO_PI + 1e-12);
        assert!((build_o(j, phi[j as usize - 1]).measure() - 2f64.powi(-(j as i32)) * TWO_PI).abs() < 1e-12);
    }
}

#[test]
fn zygmund_trivial_cases() {
    let fam = prop2b_family();
    let v = ArcUnion::from_arc(&Arc::new(1.0, 0.5).unwrap());
    let ladder = [0.1, 0.05, 0.01];
    assert!(!zygmund_member(&fam, &v, BoundaryPoint::new(1.2), &ladder));
    // nothing of V within 0.1 of w = 3
    assert!(!zygmund_member(&fam, &v, BoundaryPoint::new(3.0), &ladder));
    assert!(!zygmund_member(&fam, &ArcUnion::empty(), BoundaryPoint::new(3.0), &ladder));
}

#[test]
fn constant_has_no_oscillation() {
    let reg = make_prop2b_region(BoundaryPoint::new(2.0));
    let est = oscillation(|_| 0.7, &reg, &[0.1, 0.01, 0.001], 64).unwrap();
    assert_eq!(est.osc, 0.0);
}

#[test]
fn radial_limit_inside_an_arc() {
    let f = BoundaryIndicator::indicator(ArcUnion::from_arc(&Arc::new(0.5, 1.0).unwrap()));
    let reg = make_radial_region(BoundaryPoint::new(1.0));
    let ladder = [1e-2, 1e-4, 1e-6];
    let est = oscillation(|z| poisson_eval(&f, z), &reg, &ladder, 64).unwrap();
    assert!(est.osc < 1e-5, "{}", est.osc);
    assert!(est.inf[2] > 1.0 - 1e-5);
    assert!(est.sup[0] - est.inf[0] > est.osc);
}

#[test]
fn zygmund_points_see_the_tent_constant() {
    // short arcs accumulating at w from the side the sequence approaches
    let w = BoundaryPoint::new(2.0);
    let arcs: Vec<Arc> = (1..=40).map(|k| {
        let d = 2f64.powi(-(k as i32) / 2 - 2);
        Arc::new(2.0 + 2.0 * d, d).unwrap()
    }).collect();
    let v = ArcUnion::normalize(&arcs);
    let region = make_prop2b_region(BoundaryPoint::new(0.0));
    let ladder: Vec<f64> = (3..=12).map(|k| 2f64.powi(-k)).collect();
    let check = zygmund_check(&region, &v, w, &ladder);
    assert!(check.member);
    let c0 = tent_minimum(1e-3, 256).min;
    let sup = check.hits.iter().map(|z| harmonic_measure_union(z, &v)).fold(0.0, f64::max);
    assert!(sup >= 0.9 * c0, "sup {sup} c0 {c0}");
}

#[test]
fn tent_constant_positive_and_refines_downward() {
    for theta in [1e-3, 1e-2, 1e-1, 1.0] {
        let (a, b) = (tent_minimum(theta, 64), tent_minimum(theta, 128));
        assert!(a.min > 0.0 && b.min > 0.0);
        assert!(b.min <= a.min);
    }
}

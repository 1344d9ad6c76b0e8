use boundary_core::geometry::{Arc, ArcUnion, DiscPoint, TWO_PI};
use boundary_core::harmonic::{conjugate_eval, harmonic_measure_arc, holo_eval, poisson_eval, BoundaryIndicator};
use boundary_core::multipole::FastPoisson;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn kernel(z: &DiscPoint, t: f64) -> f64 {
    let (x, y) = (z.re(), z.im());
    let r2 = x * x + y * y;
    let (c, s) = (t.cos(), t.sin());
    (1.0 - r2) / ((c - x).powi(2) + (s - y).powi(2)) / TWO_PI
}

fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
        return left + right + (left + right - whole) / 15.0;
    }
    simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) + simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Adaptive Simpson, tolerance relative to the size of the integral.
fn quad<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    // split at a few points so peaks are not missed by the first samples
    let n = 64;
    let mut total = 0.0;
    for i in 0..n {
        let (x0, x1) = (a + (b - a) * i as f64 / n as f64, a + (b - a) * (i + 1) as f64 / n as f64);
        let (f0, f1, fm) = (f(x0), f(x1), f(0.5 * (x0 + x1)));
        let whole = (x1 - x0) / 6.0 * (f0 + 4.0 * fm + f1);
        total += simpson(&f, x0, x1, f0, fm, f1, whole, tol / n as f64, 50);
    }
    total
}

#[test]
fn closed_form_matches_quadrature() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let rho: f64 = rng.gen_range(0.0..0.95);
        let th: f64 = rng.gen_range(0.0..TWO_PI);
        let z = DiscPoint::new(rho * th.cos(), rho * th.sin()).unwrap();
        let arc = Arc::new(rng.gen_range(0.0..TWO_PI), rng.gen_range(0.01..TWO_PI)).unwrap();
        let exact = harmonic_measure_arc(&z, &arc);
        let q = quad(|t| kernel(&z, t), arc.start(), arc.end(), 1e-11 * exact.max(1e-3));
        worst = worst.max(((exact - q) / q).abs());
    }
    assert!(worst < 1e-8, "worst relative error {worst}");
}

#[test]
fn reference_value_against_quadrature() {
    let z = DiscPoint::new(0.9, 0.0).unwrap();
    let arc = Arc::centered(0.0, std::f64::consts::PI / 8.0).unwrap();
    let q = quad(|t| kernel(&z, t), arc.start(), arc.end(), 1e-13);
    assert!((harmonic_measure_arc(&z, &arc) - q).abs() / q < 1e-8);
}

#[test]
fn poisson_is_linear() {
    let a = ArcUnion::from_arc(&Arc::new(0.3, 1.1).unwrap());
    let b = ArcUnion::normalize(&[Arc::new(5.0, 2.0).unwrap(), Arc::new(2.0, 0.4).unwrap()]);
    let mut f = BoundaryIndicator::new();
    f.add(0.7, a.clone());
    f.add(-1.3, b.clone());
    let z = DiscPoint::new(0.2, -0.6).unwrap();
    let sep = 0.7 * poisson_eval(&BoundaryIndicator::indicator(a), &z) - 1.3 * poisson_eval(&BoundaryIndicator::indicator(b), &z);
    assert!((poisson_eval(&f, &z) - sep).abs() < 1e-14);
    let arc = Arc::new(1.0, 2.0).unwrap();
    let o = DiscPoint::new(0.0, 0.0).unwrap();
    assert!((poisson_eval(&BoundaryIndicator::indicator(ArcUnion::from_arc(&arc)), &o) - 2.0 / TWO_PI).abs() < 1e-15);
}

#[test]
fn cauchy_riemann() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut f = BoundaryIndicator::new();
    f.add(1.0, ArcUnion::from_arc(&Arc::new(0.5, 1.5).unwrap()));
    f.add(0.25, ArcUnion::from_arc(&Arc::new(4.0, 2.5).unwrap()));
    let h = 1e-4;
    for _ in 0..100 {
        let rho: f64 = rng.gen_range(0.0..0.8);
        let th: f64 = rng.gen_range(0.0..TWO_PI);
        let (x, y) = (rho * th.cos(), rho * th.sin());
        let at = |dx: f64, dy: f64| DiscPoint::new(x + dx, y + dy).unwrap();
        let ux = (poisson_eval(&f, &at(h, 0.0)) - poisson_eval(&f, &at(-h, 0.0))) / (2.0 * h);
        let uy = (poisson_eval(&f, &at(0.0, h)) - poisson_eval(&f, &at(0.0, -h))) / (2.0 * h);
        let vx = (conjugate_eval(&f, &at(h, 0.0)) - conjugate_eval(&f, &at(-h, 0.0))) / (2.0 * h);
        let vy = (conjugate_eval(&f, &at(0.0, h)) - conjugate_eval(&f, &at(0.0, -h))) / (2.0 * h);
        assert!((ux - vy).abs() < 1e-6, "u_x={ux} v_y={vy}");
        assert!((uy + vx).abs() < 1e-6, "u_y={uy} v_x={vx}");
        let hz = holo_eval(&f, &at(0.0, 0.0));
        assert!((hz.norm() - (-poisson_eval(&f, &at(0.0, 0.0))).exp()).abs() < 1e-14);
    }
}

#[test]
fn tree_matches_direct_on_dense_data() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let arcs: Vec<Arc> = (0..20000).map(|_| Arc::new(rng.gen_range(0.0..TWO_PI), rng.gen_range(1e-8..1e-4)).unwrap()).collect();
    let mut f = BoundaryIndicator::new();
    f.add(0.3, ArcUnion::normalize(&arcs[..12000]));
    f.add(0.05, ArcUnion::normalize(&arcs[8000..]));
    let fast = FastPoisson::new(&f);
    for _ in 0..300 {
        let z = DiscPoint::from_coords(rng.gen_range(0.0..TWO_PI), 10f64.powf(rng.gen_range(-12.0..0.0))).unwrap();
        let (a, b) = (fast.eval(&z), poisson_eval(&f, &z));
        // one ulp of theta moves the value by about ulp/delta near a jump
        let tol = 1e-10 + 1e-15 / z.delta().max(fast.distance_to_edge(z.theta()));
        assert!((a - b).abs() < tol, "{a} vs {b}");
    }
}

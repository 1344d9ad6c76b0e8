//! Poisson integrals of arc-indicator data.
//!
//! With `z = (1-d)e^{i theta}` and `x = t - theta`, an antiderivative of the
//! Poisson kernel is `G(x) = 2 atan(((2-d)/d) tan(x/2))`, continued across the
//! branch points; the conjugate kernel integrates to `-(1/pi) ln|e^{it} - z|`.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::geometry::{chord2, wrap_signed, Arc, ArcUnion, BoundaryPoint, DiscPoint, TWO_PI};
use crate::regions::{cone_point, Sample};

/// Distances to the circle below this are clamped before evaluation.
pub const DELTA_CLAMP: f64 = 1e-12;

fn g(x: f64, d: f64) -> f64 {
    let h = 0.5 * x;
    let mut ang = ((2.0 - d) * h.sin()).atan2(d * h.cos());
    if h > FRAC_PI_2 && ang < 0.0 {
        ang += TWO_PI;
    }
    2.0 * ang
}

/// Harmonic measure of the arc `(start, start+len)` at the point with boundary
/// coordinates `(theta, d)`; `d` is used as given.
#[inline]
pub fn arc_measure_raw(theta: f64, d: f64, start: f64, len: f64) -> f64 {
    if len >= TWO_PI {
        return 1.0;
    }
    let xa = wrap_signed(start - theta);
    let v = (g(xa + len, d) - g(xa, d)) / TWO_PI;
    v.clamp(0.0, 1.0)
}

#[inline]
fn conj_raw(theta: f64, d: f64, start: f64, len: f64) -> f64 {
    if len >= TWO_PI {
        return 0.0;
    }
    let ca = chord2(start, 0.0, theta, d);
    let cb = chord2(start + len, 0.0, theta, d);
    (ca.ln() - cb.ln()) / TWO_PI
}

fn clamped(z: &DiscPoint) -> (f64, bool) {
    let d = z.delta();
    if d < DELTA_CLAMP {
        (DELTA_CLAMP, true)
    } else {
        (d, false)
    }
}

/// `P(1_J)(z)`.
pub fn harmonic_measure_arc(z: &DiscPoint, arc: &Arc) -> f64 {
    let (d, _) = clamped(z);
    arc_measure_raw(z.theta(), d, arc.start(), arc.len())
}

pub fn harmonic_measure_union(z: &DiscPoint, s: &ArcUnion) -> f64 {
    if s.is_full() {
        return 1.0;
    }
    let (d, _) = clamped(z);
    let t = z.theta();
    s.pieces().iter().map(|p| arc_measure_raw(t, d, p.start, p.len)).sum()
}

/// Weighted sum of arc-union indicators.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct BoundaryIndicator {
    pub terms: Vec<(f64, ArcUnion)>,
}

impl BoundaryIndicator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn indicator(s: ArcUnion) -> Self {
        Self { terms: vec![(1.0, s)] }
    }

    pub fn add(&mut self, coeff: f64, s: ArcUnion) {
        assert!(coeff.is_finite(), "coefficients must be finite");
        self.terms.push((coeff, s));
    }

    pub fn value_at(&self, u: &BoundaryPoint) -> f64 {
        self.terms.iter().filter(|(_, s)| s.contains(u.angle())).map(|(c, _)| c).sum()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub value: f64,
    /// the point was closer to the circle than `DELTA_CLAMP`
    pub clamped: bool,
}

pub fn poisson_eval_checked(f: &BoundaryIndicator, z: &DiscPoint) -> Evaluation {
    let (d, flag) = clamped(z);
    let t = z.theta();
    let value = f
        .terms
        .iter()
        .map(|(c, s)| {
            if s.is_full() {
                *c
            } else {
                c * s.pieces().iter().map(|p| arc_measure_raw(t, d, p.start, p.len)).sum::<f64>()
            }
        })
        .sum();
    Evaluation { value, clamped: flag }
}

pub fn poisson_eval(f: &BoundaryIndicator, z: &DiscPoint) -> f64 {
    poisson_eval_checked(f, z).value
}

/// Harmonic conjugate of `P(f)` normalized by `v(0) = 0`.
pub fn conjugate_eval(f: &BoundaryIndicator, z: &DiscPoint) -> f64 {
    let (d, _) = clamped(z);
    let t = z.theta();
    f.terms
        .iter()
        .filter(|(_, s)| !s.is_full())
        .map(|(c, s)| {
            // pieces meeting at the seam share an endpoint whose logs cancel
            c * s.pieces().iter().map(|p| conj_raw(t, d, p.start, p.len)).sum::<f64>()
        })
        .sum()
}

/// `h = exp(-u - i v)`.
pub fn holo_eval(f: &BoundaryIndicator, z: &DiscPoint) -> Complex64 {
    let u = poisson_eval(f, z);
    let v = conjugate_eval(f, z);
    Complex64::new(-u, -v).exp()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TentRow {
    pub theta: f64,
    pub min: f64,
    pub argmin_theta: f64,
    pub argmin_delta: f64,
    pub points: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TentConstantReport {
    pub density: usize,
    pub rows: Vec<TentRow>,
    /// minimum over the ladder
    pub c0: f64,
    /// `(max - min) / max` of the per-arc minima
    pub spread: f64,
}

/// Minimum of `P(1_J)` over a polar grid in the tent above `J = A(1, theta)`.
///
/// The grid `z = 1 - rho e^{i psi}`, `rho = R i/n`, `psi = pi (k/(2n) - 1/2)`
/// is nested under doubling of `n`.
pub fn tent_minimum(theta: f64, density: usize) -> TentRow {
    let n = density.max(2);
    let radius = 2.0 * (0.25 * theta).sin();
    let arc = Arc::centered(0.0, theta).expect("theta in (0, 2pi]");
    let mut best = TentRow { theta, min: f64::INFINITY, argmin_theta: 0.0, argmin_delta: 1.0, points: 0 };
    for i in 1..n {
        let rho = radius * i as f64 / n as f64;
        for k in 1..2 * n {
            let psi = PI * (k as f64 / (2 * n) as f64 - 0.5);
            let Some(z) = cone_point(rho, psi) else { continue };
            let v = harmonic_measure_arc(&z, &arc);
            best.points += 1;
            if v < best.min {
                best.min = v;
                best.argmin_theta = z.theta();
                best.argmin_delta = z.delta();
            }
        }
    }
    best
}

pub fn estimate_tent_constant(theta_ladder: &[f64], density: usize) -> TentConstantReport {
    let rows: Vec<TentRow> = theta_ladder.iter().map(|&t| tent_minimum(t, density)).collect();
    let c0 = rows.iter().map(|r| r.min).fold(f64::INFINITY, f64::min);
    let hi = rows.iter().map(|r| r.min).fold(f64::NEG_INFINITY, f64::max);
    TentConstantReport { density, rows, c0, spread: (hi - c0) / hi }
}

pub fn default_tent_ladder() -> Vec<f64> {
    vec![1e-3, 1e-2, 1e-1, 1.0]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OscillationEstimate {
    pub radii: Vec<f64>,
    pub sup: Vec<f64>,
    pub inf: Vec<f64>,
    pub osc: f64,
    pub clamped: usize,
}

/// Sup and inf of `u` over nested tails of `samples` (base-1 frame points of a
/// region based at `w`).
pub fn oscillation_over<F: Fn(&DiscPoint) -> f64>(
    u: F,
    w: BoundaryPoint,
    samples: &[Sample],
    ladder: &[f64],
) -> OscillationEstimate {
    let mut vals: Vec<(f64, f64)> = Vec::with_capacity(samples.len());
    let mut clamp_count = 0;
    for s in samples {
        let z = s.z.rotate(w.angle());
        if z.delta() < DELTA_CLAMP {
            clamp_count += 1;
        }
        vals.push((s.dist, u(&z)));
    }
    let mut sup = Vec::with_capacity(ladder.len());
    let mut inf = Vec::with_capacity(ladder.len());
    for &r in ladder {
        let (mut hi, mut lo) = (f64::NEG_INFINITY, f64::INFINITY);
        for &(d, v) in &vals {
            if d < r {
                hi = hi.max(v);
                lo = lo.min(v);
            }
        }
        sup.push(hi);
        inf.push(lo);
    }
    let osc = match (sup.last(), inf.last()) {
        (Some(&h), Some(&l)) if h >= l => h - l,
        _ => 0.0,
    };
    OscillationEstimate { radii: ladder.to_vec(), sup, inf, osc, clamped: clamp_count }
}

/// Oscillation of `u` along the sampled tails of `region`.
pub fn oscillation<F: Fn(&DiscPoint) -> f64>(
    u: F,
    region: &crate::regions::ApproachRegion,
    ladder: &[f64],
    budget: usize,
) -> Result<OscillationEstimate, crate::error::RegionError> {
    crate::regions::check_ladder(ladder, region.r_max())?;
    let sampler = region.sampler(budget)?;
    if sampler.tail_rel(ladder[ladder.len() - 1]).next().is_none() {
        return Err(crate::error::RegionError::EmptyTail(ladder[ladder.len() - 1]));
    }
    Ok(oscillation_over(u, region.base(), sampler.pool(), ladder))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(re: f64, im: f64) -> DiscPoint {
        DiscPoint::new(re, im).unwrap()
    }

    #[test]
    fn mean_value_and_normalization() {
        let o = z(0.0, 0.0);
        for &(a, l) in &[(0.0, 1.0), (5.0, 2.5), (3.0, 0.001)] {
            let arc = Arc::new(a, l).unwrap();
            assert!((harmonic_measure_arc(&o, &arc) - l / TWO_PI).abs() < 1e-15);
        }
        let full = BoundaryIndicator::indicator(ArcUnion::full());
        let p = z(0.3, -0.7);
        assert_eq!(poisson_eval(&full, &p), 1.0);
        assert_eq!(conjugate_eval(&full, &p), 0.0);
        assert!((holo_eval(&full, &p) - Complex64::new((-1f64).exp(), 0.0)).norm() < 1e-16);
    }

    #[test]
    fn reference_value() {
        let arc = Arc::centered(0.0, PI / 8.0).unwrap();
        let v = harmonic_measure_arc(&z(0.9, 0.0), &arc);
        assert!((v - 0.687_566_229_025_951_95).abs() < 1e-14);
    }

    #[test]
    fn conjugate_vanishes_at_origin() {
        let mut f = BoundaryIndicator::new();
        f.add(0.7, ArcUnion::from_arc(&Arc::new(1.0, 2.0).unwrap()));
        f.add(0.2, ArcUnion::from_arc(&Arc::new(6.0, 1.0).unwrap()));
        assert!(conjugate_eval(&f, &z(0.0, 0.0)).abs() < 1e-16);
    }

    #[test]
    fn proximity_flag() {
        let f = BoundaryIndicator::indicator(ArcUnion::from_arc(&Arc::new(0.0, 1.0).unwrap()));
        let p = DiscPoint::from_coords(0.5, 1e-14).unwrap();
        let e = poisson_eval_checked(&f, &p);
        assert!(e.clamped);
        assert!((e.value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn tent_grid_is_nested() {
        let a = tent_minimum(0.5, 16);
        let b = tent_minimum(0.5, 32);
        assert!(b.min <= a.min);
        assert!(a.min > 0.0);
    }
}

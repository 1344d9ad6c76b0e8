//! Points, arcs and arc unions on the closed unit disc.
//!
//! Disc points keep their boundary coordinates `(theta, delta)` with
//! `z = (1 - delta) e^{i theta}`, so points very close to the circle keep
//! full relative precision in `delta`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::GeometryError;

pub const TWO_PI: f64 = std::f64::consts::TAU;

/// Gaps between arc-union components narrower than this are closed.
pub const MERGE_TOL: f64 = 1e-12;

/// Reduce an angle to `[0, 2pi)`.
pub fn wrap_angle(a: f64) -> f64 {
    let r = a.rem_euclid(TWO_PI);
    if r >= TWO_PI {
        0.0
    } else {
        r
    }
}

/// Reduce an angle to `(-pi, pi]`.
pub fn wrap_signed(a: f64) -> f64 {
    let r = wrap_angle(a);
    if r > PI {
        r - TWO_PI
    } else {
        r
    }
}

/// Squared distance between `(1-d1)e^{i t1}` and `(1-d2)e^{i t2}`.
#[inline]
pub fn chord2(t1: f64, d1: f64, t2: f64, d2: f64) -> f64 {
    let s = (0.5 * (t1 - t2)).sin();
    let dd = d1 - d2;
    dd * dd + 4.0 * (1.0 - d1) * (1.0 - d2) * s * s
}

/// Neumaier-compensated sum.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    let mut sum = 0.0f64;
    let mut c = 0.0f64;
    for x in it {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            c += (sum - t) + x;
        } else {
            c += (x - t) + sum;
        }
        sum = t;
    }
    sum + c
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryPoint {
    angle: f64,
}

impl BoundaryPoint {
    pub fn new(angle: f64) -> Self {
        Self { angle: wrap_angle(angle) }
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(self.angle.cos(), self.angle.sin())
    }

    pub fn rotate(&self, alpha: f64) -> Self {
        Self::new(self.angle + alpha)
    }

    /// Euclidean distance to a disc point.
    pub fn distance(&self, z: &DiscPoint) -> f64 {
        chord2(self.angle, 0.0, z.theta, z.delta).sqrt()
    }
}

/// A point of the open unit disc.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscPoint {
    re: f64,
    im: f64,
    theta: f64,
    delta: f64,
}

impl DiscPoint {
    /// `z = (1 - delta) e^{i theta}` with `delta` in `(0, 1]`.
    pub fn from_coords(theta: f64, delta: f64) -> Result<Self, GeometryError> {
        if !(theta.is_finite() && delta > 0.0 && delta <= 1.0) {
            return Err(GeometryError::BadCoords { theta, delta });
        }
        let theta = if delta == 1.0 { 0.0 } else { wrap_signed(theta) };
        let rho = 1.0 - delta;
        Ok(Self { re: rho * theta.cos(), im: rho * theta.sin(), theta, delta })
    }

    pub fn new(re: f64, im: f64) -> Result<Self, GeometryError> {
        let rho = re.hypot(im);
        if !(rho < 1.0) {
            return Err(GeometryError::OutsideDisc { re, im });
        }
        let theta = if rho == 0.0 { 0.0 } else { im.atan2(re) };
        Ok(Self { re, im, theta, delta: 1.0 - rho })
    }

    pub fn from_complex(z: Complex64) -> Result<Self, GeometryError> {
        Self::new(z.re, z.im)
    }

    pub fn re(&self) -> f64 {
        self.re
    }

    pub fn im(&self) -> f64 {
        self.im
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn modulus(&self) -> f64 {
        1.0 - self.delta
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    pub fn rotate(&self, alpha: f64) -> Self {
        Self::from_coords(self.theta + alpha, self.delta).expect("rotation keeps delta")
    }

    pub fn distance(&self, other: &DiscPoint) -> f64 {
        chord2(self.theta, self.delta, other.theta, other.delta).sqrt()
    }
}

/// Boundary coordinates `(theta, delta)` of `z`, with theta in `(-pi, pi]`.
pub fn boundary_coords(z: &DiscPoint) -> (f64, f64) {
    (z.theta, z.delta)
}

/// Normalized distance `(1 - |z|) / |w - z|`, always in `(0, 1]`.
pub fn tau(w: &BoundaryPoint, z: &DiscPoint) -> f64 {
    let d2 = chord2(w.angle, 0.0, z.theta, z.delta);
    z.delta / d2.sqrt()
}

/// Membership in the Stolz region `Gamma_b(w)`. For `b = 0` this is the
/// open radius ending at `w`.
pub fn stolz_contains(b: u32, w: &BoundaryPoint, z: &DiscPoint) -> bool {
    if b == 0 {
        return z.delta == 1.0 || wrap_signed(z.theta - w.angle) == 0.0;
    }
    let k = 1.0 + b as f64;
    let r = k * z.delta;
    chord2(w.angle, 0.0, z.theta, z.delta) < r * r
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChordBounds {
    pub lower: f64,
    pub chord2: f64,
    pub upper: f64,
}

/// Sandwich `(3/64) d^2 <= |p1 - p2|^2 <= (125/64) d^2` for boundary
/// coordinates in `(-1/4, 1/4)^2`.
pub fn chord_bounds(p1: (f64, f64), p2: (f64, f64)) -> Result<ChordBounds, GeometryError> {
    for &(theta, delta) in &[p1, p2] {
        if !(theta.abs() < 0.25 && delta.abs() < 0.25) {
            return Err(GeometryError::OutsideChordSquare { theta, delta });
        }
    }
    let dt = p1.0 - p2.0;
    let dd = p1.1 - p2.1;
    let d2 = dt * dt + dd * dd;
    Ok(ChordBounds {
        lower: 3.0 / 64.0 * d2,
        chord2: chord2(p1.0, p1.1, p2.0, p2.1),
        upper: 125.0 / 64.0 * d2,
    })
}

/// Open counterclockwise arc `{e^{i(start + t)} : 0 < t < len}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Arc {
    start: f64,
    len: f64,
}

impl Arc {
    pub fn new(start: f64, len: f64) -> Result<Self, GeometryError> {
        if !(len > 0.0 && len <= TWO_PI) {
            return Err(GeometryError::BadArcLength(len));
        }
        Ok(Self { start: wrap_angle(start), len })
    }

    pub fn centered(center: f64, len: f64) -> Result<Self, GeometryError> {
        Self::new(center - 0.5 * len, len)
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn len(&self) -> f64 {
        self.len
    }

    pub fn end(&self) -> f64 {
        self.start + self.len
    }

    pub fn center(&self) -> f64 {
        wrap_angle(self.start + 0.5 * self.len)
    }

    pub fn contains(&self, angle: f64) -> bool {
        let t = wrap_angle(angle - self.start);
        t > 0.0 && t < self.len
    }
}

/// Shadow of a single point: an arc, or the whole circle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum PointShadow {
    FullCircle,
    Arc(Arc),
}

impl PointShadow {
    pub fn contains(&self, angle: f64) -> bool {
        match self {
            PointShadow::FullCircle => true,
            PointShadow::Arc(a) => a.contains(angle),
        }
    }

    /// Half-width of the shadow around `arg z`; `pi` or more for the full circle.
    pub fn half_width(&self) -> f64 {
        match self {
            PointShadow::FullCircle => PI,
            PointShadow::Arc(a) => 0.5 * a.len(),
        }
    }
}

/// Half-width of `dD ∩ B(z, (1+b)(1-|z|))` around `arg z`, or `None` when the
/// ball swallows the circle.
pub fn shadow_half_width(b: u32, delta: f64) -> Option<f64> {
    if delta >= 1.0 {
        return None;
    }
    let bb = b as f64;
    let q = bb * (bb + 2.0) * delta * delta / (4.0 * (1.0 - delta));
    if q > 1.0 {
        None
    } else {
        Some(2.0 * q.sqrt().asin())
    }
}

/// Boundary points `u` whose Stolz region `Gamma_b(u)` contains `z`.
pub fn point_shadow(b: u32, z: &DiscPoint) -> Result<PointShadow, GeometryError> {
    if b == 0 {
        return Err(GeometryError::ZeroAperture);
    }
    Ok(match shadow_half_width(b, z.delta) {
        None => PointShadow::FullCircle,
        Some(h) => PointShadow::Arc(Arc::centered(z.theta, 2.0 * h)?),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tent {
    pub base: Arc,
    pub center: BoundaryPoint,
    pub radius: f64,
}

/// Carleson tent above a centered arc: the disc part of `B(y, |y - y e^{i theta/2}|)`.
pub fn tent_of(arc: &Arc) -> Tent {
    Tent {
        base: *arc,
        center: BoundaryPoint::new(arc.center()),
        radius: 2.0 * (0.25 * arc.len()).sin(),
    }
}

pub fn tent_contains(t: &Tent, z: &DiscPoint) -> bool {
    chord2(t.center.angle(), 0.0, z.theta, z.delta) < t.radius * t.radius
}

/// A maximal run inside an arc union, stored without crossing the seam.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Piece {
    pub start: f64,
    pub len: f64,
}

impl Piece {
    #[inline]
    pub fn end(&self) -> f64 {
        self.start + self.len
    }
}

/// Normalized finite union of open arcs.
///
/// Components crossing angle 0 are stored as two pieces `[.., 2pi)` and
/// `[0, ..)` with `wraps` set; [`ArcUnion::components`] rejoins them.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ArcUnion {
    pieces: Vec<Piece>,
    wraps: bool,
    full: bool,
}

fn push_arc_pieces(arc: &Arc, out: &mut Vec<Piece>) {
    let end = arc.start + arc.len;
    if end <= TWO_PI {
        out.push(Piece { start: arc.start, len: arc.len });
    } else {
        let first = TWO_PI - arc.start;
        out.push(Piece { start: arc.start, len: first });
        let rest = arc.len - first;
        if rest > 0.0 {
            out.push(Piece { start: 0.0, len: rest.min(TWO_PI) });
        }
    }
}

impl ArcUnion {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn full() -> Self {
        Self { pieces: Vec::new(), wraps: false, full: true }
    }

    pub fn from_arc(arc: &Arc) -> Self {
        Self::normalize(std::slice::from_ref(arc))
    }

    pub fn normalize(arcs: &[Arc]) -> Self {
        let mut pieces = Vec::with_capacity(arcs.len() + 1);
        for a in arcs {
            push_arc_pieces(a, &mut pieces);
        }
        pieces.sort_unstable_by(|a, b| a.start.total_cmp(&b.start));
        Self::from_sorted_pieces(pieces)
    }

    /// Build from pieces already sorted by start and lying in `[0, 2pi]`.
    pub fn from_sorted_pieces(pieces: Vec<Piece>) -> Self {
        let mut out: Vec<Piece> = Vec::with_capacity(pieces.len());
        for p in pieces {
            if !(p.len > 0.0) {
                continue;
            }
            if let Some(last) = out.last_mut() {
                let le = last.end();
                if p.start <= le + MERGE_TOL {
                    if p.end() > le {
                        last.len = p.end() - last.start;
                    }
                    continue;
                }
            }
            out.push(p);
        }
        let mut u = Self { pieces: out, wraps: false, full: false };
        u.fix_seam();
        u
    }

    fn fix_seam(&mut self) {
        let n = self.pieces.len();
        if n == 0 {
            return;
        }
        if let Some(last) = self.pieces.last_mut() {
            if last.end() > TWO_PI {
                last.len = TWO_PI - last.start;
            }
        }
        let touches_zero = self.pieces[0].start <= MERGE_TOL;
        let touches_two_pi = self.pieces[n - 1].end() >= TWO_PI - MERGE_TOL;
        if touches_zero && touches_two_pi {
            if n == 1 {
                *self = Self::full();
                return;
            }
            let f = &mut self.pieces[0];
            f.len += f.start;
            f.start = 0.0;
            let l = &mut self.pieces[n - 1];
            l.len = TWO_PI - l.start;
            self.wraps = true;
        }
    }

    pub fn is_full(&self) -> bool {
        self.full
    }

    pub fn is_empty(&self) -> bool {
        !self.full && self.pieces.is_empty()
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn wraps(&self) -> bool {
        self.wraps
    }

    pub fn measure(&self) -> f64 {
        if self.full {
            TWO_PI
        } else {
            compensated_sum(self.pieces.iter().map(|p| p.len))
        }
    }

    /// Index of the last piece starting strictly before `a` (which is in `[0, 2pi)`).
    pub fn piece_before(&self, a: f64) -> Option<usize> {
        let idx = self.pieces.partition_point(|p| p.start < a);
        idx.checked_sub(1)
    }

    pub fn contains(&self, angle: f64) -> bool {
        if self.full {
            return true;
        }
        let a = wrap_angle(angle);
        if self.wraps && a == 0.0 {
            return true;
        }
        match self.piece_before(a) {
            Some(i) => a < self.pieces[i].end(),
            None => false,
        }
    }

    /// Components with seam-crossing pieces rejoined. The full circle is
    /// reported as a single arc of length `2pi` starting at 0.
    pub fn components(&self) -> Vec<Arc> {
        if self.full {
            return vec![Arc { start: 0.0, len: TWO_PI }];
        }
        let n = self.pieces.len();
        let mut out = Vec::with_capacity(n);
        if self.wraps && n >= 2 {
            for p in &self.pieces[1..n - 1] {
                out.push(Arc { start: p.start, len: p.len });
            }
            let last = self.pieces[n - 1];
            out.push(Arc { start: last.start, len: last.len + self.pieces[0].len });
        } else {
            for p in &self.pieces {
                out.push(Arc { start: p.start, len: p.len });
            }
        }
        out
    }

    pub fn component_count(&self) -> usize {
        if self.full {
            1
        } else if self.wraps {
            self.pieces.len() - 1
        } else {
            self.pieces.len()
        }
    }

    pub fn union(&self, other: &ArcUnion) -> ArcUnion {
        if self.full || other.full {
            return Self::full();
        }
        let (a, b) = (&self.pieces, &other.pieces);
        let mut merged = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            if a[i].start <= b[j].start {
                merged.push(a[i]);
                i += 1;
            } else {
                merged.push(b[j]);
                j += 1;
            }
        }
        merged.extend_from_slice(&a[i..]);
        merged.extend_from_slice(&b[j..]);
        Self::from_sorted_pieces(merged)
    }

    pub fn intersect(&self, other: &ArcUnion) -> ArcUnion {
        if self.full {
            return other.clone();
        }
        if other.full {
            return self.clone();
        }
        let (a, b) = (&self.pieces, &other.pieces);
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            let lo = a[i].start.max(b[j].start);
            let (ea, eb) = (a[i].end(), b[j].end());
            let hi = ea.min(eb);
            if hi > lo {
                out.push(Piece { start: lo, len: hi - lo });
            }
            if ea < eb {
                i += 1;
            } else {
                j += 1;
            }
        }
        Self::from_sorted_pieces(out)
    }

    pub fn complement(&self) -> ArcUnion {
        if self.full {
            return Self::empty();
        }
        if self.pieces.is_empty() {
            return Self::full();
        }
        let p = &self.pieces;
        let mut out = Vec::with_capacity(p.len() + 1);
        if p[0].start > 0.0 {
            out.push(Piece { start: 0.0, len: p[0].start });
        }
        for w in p.windows(2) {
            let gap = w[1].start - w[0].end();
            if gap > 0.0 {
                out.push(Piece { start: w[0].end(), len: gap });
            }
        }
        let last_end = p[p.len() - 1].end();
        if last_end < TWO_PI {
            out.push(Piece { start: last_end, len: TWO_PI - last_end });
        }
        Self::from_sorted_pieces(out)
    }

    /// Every piece of `self` lies inside `other`, up to `tol` at the ends.
    pub fn is_subset_of(&self, other: &ArcUnion, tol: f64) -> bool {
        if other.full {
            return true;
        }
        if self.full {
            return false;
        }
        self.pieces.iter().all(|p| {
            let idx = other.pieces.partition_point(|q| q.start <= p.start + tol);
            idx > 0 && other.pieces[idx - 1].end() >= p.end() - tol
        })
    }
}

impl From<PointShadow> for ArcUnion {
    fn from(s: PointShadow) -> Self {
        match s {
            PointShadow::FullCircle => ArcUnion::full(),
            PointShadow::Arc(a) => ArcUnion::from_arc(&a),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tau_examples() {
        let one = BoundaryPoint::new(0.0);
        assert_eq!(tau(&one, &DiscPoint::new(0.5, 0.0).unwrap()), 1.0);
        assert_eq!(tau(&one, &DiscPoint::new(0.0, 0.0).unwrap()), 1.0);
        let z = DiscPoint::from_coords(0.1, 1e-2).unwrap();
        let t = tau(&one, &z);
        // high-precision reference
        assert!((t - 0.100_041_261_776_425_32).abs() < 1e-15);
        assert!(t > 0.0 && t < 0.2);
    }

    #[test]
    fn boundary_coords_examples() {
        let (t, d) = boundary_coords(&DiscPoint::new(0.75, 0.0).unwrap());
        assert_eq!((t, d), (0.0, 0.25));
        let (t, d) = boundary_coords(&DiscPoint::new(0.0, 0.9).unwrap());
        assert!((t - PI / 2.0).abs() < 1e-15 && (d - 0.1).abs() < 1e-15);
        let z = DiscPoint::from_coords(0.1, 0.01).unwrap();
        assert_eq!(boundary_coords(&z), (0.1, 0.01));
        let back = DiscPoint::new(z.re(), z.im()).unwrap();
        assert!((back.theta() - 0.1).abs() < 1e-14 && (back.delta() - 0.01).abs() < 1e-14);
    }

    #[test]
    fn chord_examples() {
        let c = chord_bounds((0.1, 0.2), (0.1, 0.2)).unwrap();
        assert_eq!((c.lower, c.chord2, c.upper), (0.0, 0.0, 0.0));
        let c = chord_bounds((0.0, 0.0), (0.0, 0.1)).unwrap();
        assert!((c.chord2 - 0.01).abs() < 1e-17);
        assert!((c.lower - 3.0 / 6400.0).abs() < 1e-18);
        assert!((c.upper - 125.0 / 6400.0).abs() < 1e-17);
        let c = chord_bounds((0.2, 0.2), (-0.2, -0.2)).unwrap();
        assert!((c.chord2 - 0.311_562_891_514_460_64).abs() < 1e-15);
        assert!(c.lower <= c.chord2 && c.chord2 <= c.upper);
        assert!(chord_bounds((0.3, 0.0), (0.0, 0.0)).is_err());
    }

    #[test]
    fn stolz_examples() {
        let one = BoundaryPoint::new(0.0);
        assert!(stolz_contains(1, &one, &DiscPoint::new(0.5, 0.0).unwrap()));
        assert!(!stolz_contains(0, &one, &DiscPoint::new(0.0, 0.5).unwrap()));
        assert!(stolz_contains(0, &one, &DiscPoint::new(0.5, 0.0).unwrap()));
        // n_theta = 10 for theta = 1/10
        let w = BoundaryPoint::new(0.1);
        let z = DiscPoint::from_coords(0.1, 0.01).unwrap();
        assert!(tau(&w, &z) > 1.0 / 3.0);
        assert!(stolz_contains(2, &w, &z));
    }

    #[test]
    fn shadow_examples() {
        let z0 = DiscPoint::new(0.0, 0.0).unwrap();
        assert_eq!(point_shadow(3, &z0).unwrap(), PointShadow::FullCircle);
        let s = point_shadow(1, &DiscPoint::new(0.5, 0.0).unwrap()).unwrap();
        assert!((s.half_width() - 1.318_116_071_652_818).abs() < 1e-14);
        assert_eq!(point_shadow(0, &z0), Err(GeometryError::ZeroAperture));
    }

    #[test]
    fn tent_examples() {
        let t = tent_of(&Arc::centered(0.0, TWO_PI).unwrap());
        assert!((t.radius - 2.0).abs() < 1e-15);
        let t = tent_of(&Arc::centered(0.0, PI).unwrap());
        assert!((t.radius - 2f64.sqrt()).abs() < 1e-15);
        assert!(tent_contains(&t, &DiscPoint::new(0.9, 0.0).unwrap()));
        let t = tent_of(&Arc::centered(0.0, 0.2).unwrap());
        assert!((t.radius - 0.099_958_338_541_356_66).abs() < 1e-16);
        assert!(!tent_contains(&t, &DiscPoint::from_coords(0.3, 0.001).unwrap()));
    }

    #[test]
    fn arc_union_examples() {
        let u = ArcUnion::normalize(&[Arc::new(0.0, PI).unwrap(), Arc::new(PI / 2.0, PI).unwrap()]);
        assert_eq!(u.component_count(), 1);
        assert!((u.measure() - 1.5 * PI).abs() < 1e-15);

        let n = 37;
        let l = 0.01;
        let arcs: Vec<Arc> = (0..n).map(|k| Arc::centered(TWO_PI * k as f64 / n as f64, l).unwrap()).collect();
        let u = ArcUnion::normalize(&arcs);
        assert_eq!(u.component_count(), n);
        assert!(u.wraps());
        assert!((u.measure() - n as f64 * l).abs() < 1e-14);
        assert!(u.contains(0.0) && u.contains(-0.004) && !u.contains(0.006));

        let a = ArcUnion::from_arc(&Arc::new(1.0, 2.0).unwrap());
        let c = a.complement();
        assert_eq!(c.component_count(), 1);
        assert!((c.measure() - (TWO_PI - 2.0)).abs() < 1e-14);
        assert!(c.contains(0.0) && c.contains(5.0) && !c.contains(2.0));
    }

    #[test]
    fn seam_crossing_arc() {
        let u = ArcUnion::from_arc(&Arc::new(6.0, 1.0).unwrap());
        assert!(u.wraps());
        assert_eq!(u.component_count(), 1);
        let comps = u.components();
        assert!((comps[0].start() - 6.0).abs() < 1e-15 && (comps[0].len() - 1.0).abs() < 1e-14);
        assert!(u.contains(0.0) && u.contains(6.2) && u.contains(0.5) && !u.contains(0.8));
    }

    #[test]
    fn full_minus_point_collapses_to_full() {
        let u = ArcUnion::from_arc(&Arc::new(1.0, TWO_PI).unwrap());
        assert!(u.is_full());
    }
}

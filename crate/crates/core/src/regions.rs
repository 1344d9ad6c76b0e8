//! Approach regions and their tail samplers.
//!
//! Every region is described at base point 1 and rotated to its base `w`.
//! Since `|z - w| = |z conj(w) - 1|`, all tau values and tail distances are
//! computed in the base-1 frame and are exactly rotation invariant.
//!
//! Tails are sampled from a fixed pool: the pool holds, for each dyadic shell
//! `2^-(k+1) <= |z - w| < 2^-k` (k = 0..=SHELL_FLOOR), at most `budget`
//! points, and `sample_tail(r)` is the pool restricted to `B(w, r)`. Samples
//! at nested radii are therefore nested.

use std::fmt;
use std::sync::Arc as Shared;

use serde::{Deserialize, Serialize};

use crate::error::RegionError;
use crate::ext::ExtFloat;
use crate::geometry::{chord2, shadow_half_width, tau, Arc, BoundaryPoint, DiscPoint, TWO_PI};

pub const SHELL_FLOOR: u32 = 48;
pub const DEFAULT_BUDGET: usize = 256;
pub const EPS_CLASS: f64 = 0.02;
/// Extra factor over `EPS_CLASS` that `A^` must clear for a very oscillatory verdict.
pub const VO_MARGIN: f64 = 2.0;
pub const PROP2C_CUTOFF: u64 = 6;
const GERM_TOL: f64 = 1e-14;
const MAX_INDEX: u64 = 1 << 60;

pub fn default_ladder() -> Vec<f64> {
    (3..=20).map(|k| 2f64.powi(-k)).collect()
}

fn origin() -> BoundaryPoint {
    BoundaryPoint::new(0.0)
}

/// Indexed point sequences converging to 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SequenceRule {
    /// `z_n = (1 - n^-2) e^{i/n}`
    Prop2b,
    /// `z_n = (1 - 4^{-2^n}) exp(i 4^{-2^{n-1}})`
    Prop2c,
    /// `z_n = 1 - 1/n`
    RadialHarmonic,
}

impl SequenceRule {
    pub fn name(&self) -> &'static str {
        match self {
            SequenceRule::Prop2b => "prop2b",
            SequenceRule::Prop2c => "prop2c",
            SequenceRule::RadialHarmonic => "radial-harmonic",
        }
    }

    /// Largest index representable in double precision.
    pub fn cutoff(&self) -> u64 {
        match self {
            SequenceRule::Prop2c => PROP2C_CUTOFF,
            _ => MAX_INDEX,
        }
    }

    /// Boundary coordinates `(theta_n, delta_n)` in the base-1 frame.
    pub fn coords(&self, n: u64) -> Result<(f64, f64), RegionError> {
        if n == 0 {
            return Err(RegionError::IndexCutoff { index: 0, cutoff: self.cutoff() });
        }
        if n > self.cutoff() {
            return Err(RegionError::IndexCutoff { index: n, cutoff: self.cutoff() });
        }
        let x = n as f64;
        Ok(match self {
            SequenceRule::Prop2b => (1.0 / x, 1.0 / (x * x)),
            SequenceRule::Prop2c => {
                let d = 1i32 << n;
                (2f64.powi(-d), 2f64.powi(-2 * d))
            }
            SequenceRule::RadialHarmonic => (0.0, 1.0 / x),
        })
    }

    pub fn point(&self, n: u64) -> Result<DiscPoint, RegionError> {
        let (t, d) = self.coords(n)?;
        Ok(DiscPoint::from_coords(t, d)?)
    }

    pub fn distance(&self, n: u64) -> f64 {
        let (t, d) = self.coords(n).expect("index within cutoff");
        chord2(0.0, 0.0, t, d).sqrt()
    }

    /// Extended-range coordinates, for the doubly exponential rule past its cutoff.
    pub fn ext_coords(&self, n: u64) -> Option<(ExtFloat, ExtFloat)> {
        match self {
            SequenceRule::Prop2c if (1..=61).contains(&n) => {
                let d = 1i64 << n;
                Some((ExtFloat::pow2(-d), ExtFloat::pow2(-2 * d)))
            }
            _ => {
                let (t, d) = self.coords(n).ok()?;
                Some((ExtFloat::from_f64(t), ExtFloat::from_f64(d)))
            }
        }
    }

    /// First index `n >= start` with `|z_n - 1| < r`; distances decrease in n.
    pub fn tail_start(&self, r: f64, start: u64) -> Option<u64> {
        let cut = self.cutoff();
        let start = start.max(1);
        if start > cut {
            return None;
        }
        if self.distance(start) < r {
            return Some(start);
        }
        let mut lo = start;
        let mut step = 1u64;
        let hi = loop {
            let cand = lo.saturating_add(step).min(cut);
            if self.distance(cand) < r {
                break cand;
            }
            if cand == cut {
                return None;
            }
            lo = cand;
            step = step.saturating_mul(2);
        };
        let (mut a, mut b) = (lo, hi);
        while b - a > 1 {
            let m = a + (b - a) / 2;
            if self.distance(m) < r {
                b = m;
            } else {
                a = m;
            }
        }
        Some(b)
    }

    /// Index whose angle is closest to `beta` (base-1 frame), if the rule has points there.
    pub fn index_near_angle(&self, beta: f64) -> Option<u64> {
        if !(beta > 0.0) {
            return None;
        }
        match self {
            SequenceRule::Prop2b => Some((1.0 / beta).round().clamp(1.0, MAX_INDEX as f64) as u64),
            SequenceRule::Prop2c => {
                let n = (-beta.log2()).log2().round();
                Some(n.clamp(1.0, PROP2C_CUTOFF as f64) as u64)
            }
            SequenceRule::RadialHarmonic => None,
        }
    }

    /// An arc (base-1 frame) certified to lie in the union of the `b`-shadows of
    /// `z_n`, `n >= n0`.
    pub fn shadow_chain(&self, b: u32, n0: u64) -> Option<Arc> {
        if b == 0 {
            return None;
        }
        match self {
            SequenceRule::Prop2b => {
                // h_n >= sqrt(b(b+2))/n^2 >= sqrt(3)/n^2 exceeds the gap
                // theta_n - theta_{n+1} = 1/(n(n+1)), so consecutive shadows
                // overlap; theta_n + h_n decreases and theta_n -> 0, hence the
                // union contains (0, theta_n0 + h_n0).
                let n0 = n0.max(2);
                let (t, d) = self.coords(n0).ok()?;
                let h = shadow_half_width(b, d)?;
                if t + h >= std::f64::consts::PI {
                    return None;
                }
                Arc::new(0.0, t + h).ok()
            }
            SequenceRule::RadialHarmonic => {
                // nested shadows centred at 1
                let (_, d) = self.coords(n0.max(2)).ok()?;
                let h = shadow_half_width(b, d)?;
                Arc::centered(0.0, 2.0 * h).ok()
            }
            SequenceRule::Prop2c => None,
        }
    }
}

/// Curve `s -> phi(s)`, `s in [0, 1)`, given in the base-1 frame.
#[derive(Clone)]
pub struct CurveRule {
    f: Shared<dyn Fn(f64) -> DiscPoint + Send + Sync>,
    name: String,
}

impl CurveRule {
    pub fn new(name: impl Into<String>, f: impl Fn(f64) -> DiscPoint + Send + Sync + 'static) -> Self {
        Self { f: Shared::new(f), name: name.into() }
    }

    pub fn eval(&self, s: f64) -> DiscPoint {
        (self.f)(s)
    }
}

impl fmt::Debug for CurveRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CurveRule({})", self.name)
    }
}

#[derive(Clone, Debug)]
pub enum RegionKind {
    Sequence { rule: SequenceRule, start: u64 },
    Curve { rule: CurveRule, density: usize },
    Stolz { b: u32 },
    Radial,
    AttachedExample,
    Explicit(Vec<DiscPoint>),
    Union(Vec<RegionKind>),
}

impl RegionKind {
    fn name(&self) -> &'static str {
        match self {
            RegionKind::Sequence { .. } => "sequence",
            RegionKind::Curve { .. } => "curve",
            RegionKind::Stolz { .. } => "stolz",
            RegionKind::Radial => "radial",
            RegionKind::AttachedExample => "attached",
            RegionKind::Explicit(_) => "explicit",
            RegionKind::Union(_) => "union",
        }
    }

    fn is_exact(&self) -> bool {
        match self {
            RegionKind::Sequence { .. } | RegionKind::Explicit(_) => true,
            RegionKind::Union(v) => v.iter().all(|k| k.is_exact()),
            _ => false,
        }
    }
}

/// A tail sample point in the base-1 frame with its distance to 1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sample {
    pub z: DiscPoint,
    pub dist: f64,
}

impl Sample {
    pub fn new(z: DiscPoint) -> Self {
        Self { z, dist: chord2(0.0, 0.0, z.theta(), z.delta()).sqrt() }
    }

    pub fn tau(&self) -> f64 {
        tau(&origin(), &self.z)
    }
}

#[derive(Clone, Debug)]
pub struct ApproachRegion {
    base: BoundaryPoint,
    kind: RegionKind,
}

pub fn make_prop2b_region(w: BoundaryPoint) -> ApproachRegion {
    ApproachRegion::new(w, RegionKind::Sequence { rule: SequenceRule::Prop2b, start: 1 })
}

pub fn make_prop2c_region(w: BoundaryPoint) -> ApproachRegion {
    ApproachRegion::new(w, RegionKind::Sequence { rule: SequenceRule::Prop2c, start: 1 })
}

/// Nontangential region `Gamma_b(w)`; `b = 0` is the radius.
pub fn make_stolz_region(b: u32, w: BoundaryPoint) -> ApproachRegion {
    if b == 0 {
        return make_radial_region(w);
    }
    ApproachRegion::new(w, RegionKind::Stolz { b })
}

pub fn make_radial_region(w: BoundaryPoint) -> ApproachRegion {
    ApproachRegion::new(w, RegionKind::Radial)
}

pub fn make_curve_region(rule: CurveRule, density: usize, w: BoundaryPoint) -> ApproachRegion {
    ApproachRegion::new(w, RegionKind::Curve { rule, density: density.max(1) })
}

/// The radius `(0,1)` with circular spurs `(1-1/n)e^{i theta}`, `0 <= theta < 1/n`.
pub fn make_attached_example(w: BoundaryPoint) -> ApproachRegion {
    ApproachRegion::new(w, RegionKind::AttachedExample)
}

/// Finite point set given in the base-1 frame.
pub fn make_explicit(points: Vec<DiscPoint>, w: BoundaryPoint) -> ApproachRegion {
    ApproachRegion::new(w, RegionKind::Explicit(points))
}

pub fn union_regions(w: BoundaryPoint, parts: Vec<RegionKind>) -> ApproachRegion {
    ApproachRegion::new(w, RegionKind::Union(parts))
}

/// Radial points `1 - 1/n` interleaved with the tangential sequence.
pub fn make_interleaved_region(w: BoundaryPoint) -> ApproachRegion {
    union_regions(
        w,
        vec![
            RegionKind::Sequence { rule: SequenceRule::RadialHarmonic, start: 1 },
            RegionKind::Sequence { rule: SequenceRule::Prop2b, start: 1 },
        ],
    )
}

fn shell_params(k: u32, m: usize) -> impl Iterator<Item = f64> {
    let top = 2f64.powi(-(k as i32));
    (0..m).map(move |i| top * (1.0 - 0.5 * i as f64 / m as f64))
}

const STOLZ_FRACS: [f64; 8] = [0.0, 0.5, 0.8, 0.95, 0.99, 0.999, 0.99999, 0.9999999];

/// Point `1 - t e^{i psi}` in boundary coordinates.
pub fn cone_point(t: f64, psi: f64) -> Option<DiscPoint> {
    let q = 2.0 * t * psi.cos() - t * t;
    if !(q > 0.0) {
        return None;
    }
    let delta = q / (1.0 + (1.0 - q).sqrt());
    let theta = (-t * psi.sin()).atan2(1.0 - t * psi.cos());
    DiscPoint::from_coords(theta, delta).ok()
}

/// Largest `psi` keeping `1 - t e^{i psi}` inside `Gamma_b(1)`.
fn stolz_edge(b: u32, t: f64) -> f64 {
    let thr = 1.0 / (1.0 + b as f64);
    let inside = |psi: f64| cone_point(t, psi).map_or(false, |z| tau(&origin(), &z) > thr);
    let (mut lo, mut hi) = (0.0, std::f64::consts::FRAC_PI_2);
    for _ in 0..60 {
        let m = 0.5 * (lo + hi);
        if inside(m) {
            lo = m;
        } else {
            hi = m;
        }
    }
    lo
}

fn sequence_pool(rule: SequenceRule, start: u64, budget: usize, out: &mut Vec<Sample>) {
    let start = start.max(1);
    let mut lo = rule.tail_start(1.0, start);
    for k in 0..=SHELL_FLOOR {
        let Some(l) = lo else { return };
        let next = rule.tail_start(2f64.powi(-(k as i32) - 1), l);
        let hi = next.unwrap_or(rule.cutoff().saturating_add(1));
        let count = hi - l;
        let m = (budget as u64).min(count);
        for i in 0..m {
            let n = l + i * count / m;
            out.push(Sample::new(rule.point(n).expect("index below cutoff")));
        }
        lo = next;
    }
    // a few indices past the deepest shell keep deep tails nonempty
    if let Some(l) = lo {
        let hi = l.saturating_add(budget as u64).min(rule.cutoff().saturating_add(1));
        for n in l..hi {
            out.push(Sample::new(rule.point(n).expect("index below cutoff")));
        }
    }
}

fn kind_pool(kind: &RegionKind, budget: usize, out: &mut Vec<Sample>) {
    match kind {
        RegionKind::Sequence { rule, start } => sequence_pool(*rule, *start, budget, out),
        RegionKind::Radial => {
            for k in 0..=SHELL_FLOOR {
                for t in shell_params(k, budget) {
                    out.push(Sample::new(DiscPoint::from_coords(0.0, t).unwrap()));
                }
            }
        }
        RegionKind::Stolz { b } => {
            let thr = 1.0 / (1.0 + *b as f64);
            for k in 0..=SHELL_FLOOR {
                for (i, t) in shell_params(k, budget).enumerate() {
                    let frac = STOLZ_FRACS[i % STOLZ_FRACS.len()];
                    let sign = if (i / STOLZ_FRACS.len()) % 2 == 0 { 1.0 } else { -1.0 };
                    let psi = sign * frac * stolz_edge(*b, t);
                    if let Some(z) = cone_point(t, psi) {
                        if tau(&origin(), &z) > thr {
                            out.push(Sample::new(z));
                        }
                    }
                }
            }
        }
        RegionKind::AttachedExample => {
            let half = budget.div_ceil(2);
            for k in 0..=SHELL_FLOOR {
                for t in shell_params(k, half) {
                    out.push(Sample::new(DiscPoint::from_coords(0.0, t).unwrap()));
                }
                // spurs at radius 1 - 1/n reach distances in [1/n, ~1.42/n)
                let n_lo = (2f64.powi(k as i32)).max(2.0);
                let n_hi = 1.5 * 2f64.powi(k as i32 + 1);
                for i in 0..half {
                    let n = (n_lo + (n_hi - n_lo) * i as f64 / half as f64).floor().max(2.0);
                    let frac = [0.25, 0.5, 0.75, 0.95][i % 4];
                    let z = DiscPoint::from_coords(frac / n, 1.0 / n).unwrap();
                    out.push(Sample::new(z));
                }
            }
        }
        RegionKind::Curve { rule, density } => {
            let m = budget.min(*density);
            for k in 0..=SHELL_FLOOR {
                for u in shell_params(k, m) {
                    let z = rule.eval(1.0 - u);
                    out.push(Sample::new(z));
                }
            }
        }
        RegionKind::Explicit(pts) => out.extend(pts.iter().map(|z| Sample::new(*z))),
        RegionKind::Union(parts) => {
            for p in parts {
                kind_pool(p, budget, out);
            }
        }
    }
}

/// Precomputed sample pool of a region, in the base-1 frame.
#[derive(Clone, Debug)]
pub struct TailSampler {
    base: BoundaryPoint,
    pool: Vec<Sample>,
}

impl TailSampler {
    pub fn base(&self) -> BoundaryPoint {
        self.base
    }

    pub fn pool(&self) -> &[Sample] {
        &self.pool
    }

    /// Pool points inside `B(1, r)` (base-1 frame).
    pub fn tail_rel(&self, r: f64) -> impl Iterator<Item = &Sample> + '_ {
        self.pool.iter().filter(move |s| s.dist < r)
    }

    /// Pool points inside `B(w, r)`, rotated to the base point.
    pub fn tail(&self, r: f64) -> Vec<DiscPoint> {
        let a = self.base.angle();
        self.tail_rel(r).map(|s| s.z.rotate(a)).collect()
    }
}

impl ApproachRegion {
    pub fn new(base: BoundaryPoint, kind: RegionKind) -> Self {
        Self { base, kind }
    }

    pub fn base(&self) -> BoundaryPoint {
        self.base
    }

    pub fn kind(&self) -> &RegionKind {
        &self.kind
    }

    pub fn r_max(&self) -> f64 {
        1.0
    }

    pub fn is_exact(&self) -> bool {
        self.kind.is_exact()
    }

    /// Same region rotated by `alpha`.
    pub fn rotate(&self, alpha: f64) -> Self {
        Self { base: self.base.rotate(alpha), kind: self.kind.clone() }
    }

    /// Same region moved to base `w`.
    pub fn at(&self, w: BoundaryPoint) -> Self {
        Self { base: w, kind: self.kind.clone() }
    }

    fn check_radius(&self, r: f64) -> Result<(), RegionError> {
        if !(r > 0.0 && r <= self.r_max()) {
            return Err(RegionError::RadiusOutOfRange { r, r_max: self.r_max() });
        }
        Ok(())
    }

    pub fn sampler(&self, budget: usize) -> Result<TailSampler, RegionError> {
        if budget == 0 {
            return Err(RegionError::ZeroBudget);
        }
        let mut pool = Vec::new();
        kind_pool(&self.kind, budget, &mut pool);
        pool.retain(|s| s.dist < self.r_max());
        Ok(TailSampler { base: self.base, pool })
    }

    /// Finite sample of `A ∩ B(w, r)`.
    pub fn sample_tail(&self, r: f64, budget: usize) -> Result<Vec<DiscPoint>, RegionError> {
        self.check_radius(r)?;
        let pts = self.sampler(budget)?.tail(r);
        if pts.is_empty() {
            return Err(RegionError::EmptyTail(r));
        }
        Ok(pts)
    }

    /// First `count` tail points for sequences; the `count` farthest pool
    /// points otherwise. Base-1 frame.
    pub fn tail_head_rel(&self, r: f64, count: usize) -> Vec<Sample> {
        let mut out = Vec::new();
        head_of(&self.kind, r, count, &mut out);
        out
    }

    /// Region points whose angle is near `beta` (base-1 frame, signed).
    pub fn probe_toward_rel(&self, beta: f64, count: usize) -> Vec<Sample> {
        let mut out = Vec::new();
        probe_of(&self.kind, beta, count, &mut out);
        out
    }

    /// Membership of a base-1 frame point, up to `tol` for discrete kinds.
    pub fn contains_rel(&self, z: &DiscPoint, tol: f64) -> bool {
        kind_contains(&self.kind, z, tol)
    }
}

fn head_of(kind: &RegionKind, r: f64, count: usize, out: &mut Vec<Sample>) {
    match kind {
        RegionKind::Sequence { rule, start } => {
            if let Some(n0) = rule.tail_start(r, *start) {
                let hi = n0.saturating_add(count as u64).min(rule.cutoff().saturating_add(1));
                out.extend((n0..hi).map(|n| Sample::new(rule.point(n).unwrap())));
            }
        }
        RegionKind::Union(parts) => {
            for p in parts {
                head_of(p, r, count, out);
            }
        }
        other => {
            let mut pool = Vec::new();
            kind_pool(other, DEFAULT_BUDGET, &mut pool);
            pool.retain(|s| s.dist < r);
            pool.sort_by(|a, b| b.dist.total_cmp(&a.dist));
            pool.truncate(count);
            out.extend(pool);
        }
    }
}

fn probe_of(kind: &RegionKind, beta: f64, count: usize, out: &mut Vec<Sample>) {
    match kind {
        RegionKind::Sequence { rule, start } => {
            if let Some(n) = rule.index_near_angle(beta) {
                let half = (count / 2) as u64;
                let lo = n.saturating_sub(half).max(*start).max(1);
                let hi = (n + half + 1).min(rule.cutoff().saturating_add(1));
                out.extend((lo..hi).map(|i| Sample::new(rule.point(i).unwrap())));
            }
        }
        RegionKind::Union(parts) => {
            for p in parts {
                probe_of(p, beta, count, out);
            }
        }
        other => {
            let mut pool = Vec::new();
            kind_pool(other, 64, &mut pool);
            pool.sort_by(|a, b| (a.z.theta() - beta).abs().total_cmp(&(b.z.theta() - beta).abs()));
            pool.truncate(count);
            out.extend(pool);
        }
    }
}

fn kind_contains(kind: &RegionKind, z: &DiscPoint, tol: f64) -> bool {
    match kind {
        RegionKind::Stolz { b } => tau(&origin(), z) > 1.0 / (1.0 + *b as f64),
        RegionKind::Radial => z.theta().abs() <= tol,
        RegionKind::AttachedExample => {
            if z.theta().abs() <= tol {
                return true;
            }
            let n = (1.0 / z.delta()).round();
            n >= 2.0 && (z.delta() - 1.0 / n).abs() <= tol && z.theta() >= -tol && z.theta() < 1.0 / n
        }
        RegionKind::Sequence { rule, start } => {
            let d = chord2(0.0, 0.0, z.theta(), z.delta()).sqrt();
            let Some(n) = rule.tail_start(d + tol, *start) else { return false };
            (n..n.saturating_add(3).min(rule.cutoff().saturating_add(1)))
                .any(|i| rule.point(i).map_or(false, |p| p.distance(z) <= tol))
        }
        RegionKind::Explicit(pts) => pts.iter().any(|p| p.distance(z) <= tol),
        RegionKind::Curve { rule, density } => {
            let mut pool = Vec::new();
            kind_pool(kind, (*density).max(1), &mut pool);
            let _ = rule;
            pool.iter().any(|s| s.z.distance(z) <= tol)
        }
        RegionKind::Union(parts) => parts.iter().any(|p| kind_contains(p, z, tol)),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Nontangential,
    Tangential,
    /// Evidence only: a finite sample cannot certify `A_ = 0`.
    VeryOscillatory,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub base: f64,
    pub radii: Vec<f64>,
    /// sampled inf of tau over the tail at each radius (an upper estimate of the true inf)
    pub lower_tau: Vec<f64>,
    /// sampled sup of tau over the tail at each radius (a lower estimate of the true sup)
    pub upper_tau: Vec<f64>,
    pub sample_counts: Vec<usize>,
    pub a_lower: f64,
    pub a_upper: f64,
    pub epsilon: f64,
    pub verdict: Verdict,
    pub note: String,
}

pub fn check_ladder(ladder: &[f64], r_max: f64) -> Result<(), RegionError> {
    if ladder.is_empty() {
        return Err(RegionError::LadderNotDecreasing);
    }
    for w in ladder.windows(2) {
        if !(w[1] < w[0]) {
            return Err(RegionError::LadderNotDecreasing);
        }
    }
    for &r in ladder {
        if !(r > 0.0 && r <= r_max) {
            return Err(RegionError::RadiusOutOfRange { r, r_max });
        }
    }
    Ok(())
}

pub fn classify(region: &ApproachRegion, ladder: &[f64], budget: usize) -> Result<ClassificationReport, RegionError> {
    check_ladder(ladder, region.r_max())?;
    let sampler = region.sampler(budget)?;
    classify_with(region.base(), &sampler, ladder)
}

pub fn classify_with(base: BoundaryPoint, sampler: &TailSampler, ladder: &[f64]) -> Result<ClassificationReport, RegionError> {
    let mut lower = Vec::with_capacity(ladder.len());
    let mut upper = Vec::with_capacity(ladder.len());
    let mut counts = Vec::with_capacity(ladder.len());
    for &r in ladder {
        let (mut lo, mut hi, mut n) = (f64::INFINITY, f64::NEG_INFINITY, 0usize);
        for s in sampler.tail_rel(r) {
            let t = s.tau();
            lo = lo.min(t);
            hi = hi.max(t);
            n += 1;
        }
        if n == 0 {
            return Err(RegionError::EmptyTail(r));
        }
        lower.push(lo);
        upper.push(hi);
        counts.push(n);
    }
    let a_lower = *lower.last().unwrap();
    let a_upper = *upper.last().unwrap();
    let eps = EPS_CLASS;
    let verdict = if a_lower > eps {
        Verdict::Nontangential
    } else if a_upper < eps {
        Verdict::Tangential
    } else if a_upper > VO_MARGIN * eps {
        Verdict::VeryOscillatory
    } else {
        Verdict::Inconclusive
    };
    Ok(ClassificationReport {
        base: base.angle(),
        radii: ladder.to_vec(),
        lower_tau: lower,
        upper_tau: upper,
        sample_counts: counts,
        a_lower,
        a_upper,
        epsilon: eps,
        verdict,
        note: "one-sided: lower_tau over-estimates the true inf and upper_tau under-estimates the true sup; \
               a very oscillatory verdict is evidence, not proof"
            .to_string(),
    })
}

/// Radius below which at most `budget` points of the tail below `r` are enumerated,
/// placed halfway between two consecutive points so equal sets agree on it.
fn enumeration_floor(kind: &RegionKind, r: f64, budget: u64) -> f64 {
    match kind {
        RegionKind::Sequence { rule, start } => match rule.tail_start(r, *start) {
            None => 0.0,
            Some(n0) => {
                let n1 = n0 + budget;
                if n1 > rule.cutoff() {
                    0.0
                } else {
                    0.5 * (rule.distance(n1 - 1) + rule.distance(n1))
                }
            }
        },
        RegionKind::Union(parts) => parts.iter().map(|p| enumeration_floor(p, r, budget)).fold(0.0, f64::max),
        _ => 0.0,
    }
}

fn enumerate_exact(kind: &RegionKind, lo: f64, hi: f64, out: &mut Vec<DiscPoint>) {
    match kind {
        RegionKind::Sequence { rule, start } => {
            let Some(a) = rule.tail_start(hi, *start) else { return };
            let b = if lo > 0.0 { rule.tail_start(lo, a) } else { None }.unwrap_or(rule.cutoff().saturating_add(1));
            out.extend((a..b).map(|n| rule.point(n).unwrap()));
        }
        RegionKind::Explicit(pts) => {
            out.extend(pts.iter().filter(|z| {
                let d = Sample::new(**z).dist;
                d >= lo && d < hi
            }));
        }
        RegionKind::Union(parts) => {
            for p in parts {
                enumerate_exact(p, lo, hi, out);
            }
        }
        _ => {}
    }
}

fn sorted_dedup(mut v: Vec<DiscPoint>) -> Vec<DiscPoint> {
    v.sort_by(|a, b| a.theta().total_cmp(&b.theta()).then(a.delta().total_cmp(&b.delta())));
    v.dedup_by(|a, b| a.distance(b) <= GERM_TOL);
    v
}

/// Whether `A ∩ B(w, r)` and `B ∩ B(w, r)` agree as point sets (up to 1e-14),
/// checked on the enumerable part of the tails.
pub fn germ_equal_upto(a: &ApproachRegion, b: &ApproachRegion, r: f64, budget: usize) -> Result<bool, RegionError> {
    if a.base != b.base {
        return Err(RegionError::BaseMismatch);
    }
    for reg in [a, b] {
        if !reg.is_exact() {
            return Err(RegionError::Unsupported(reg.kind.name()));
        }
    }
    let budget = budget.max(1) as u64;
    let lo = enumeration_floor(&a.kind, r, budget).max(enumeration_floor(&b.kind, r, budget));
    let mut pa = Vec::new();
    let mut pb = Vec::new();
    enumerate_exact(&a.kind, lo, r, &mut pa);
    enumerate_exact(&b.kind, lo, r, &mut pb);
    let (pa, pb) = (sorted_dedup(pa), sorted_dedup(pb));
    Ok(pa.len() == pb.len() && pa.iter().zip(&pb).all(|(x, y)| x.distance(y) <= GERM_TOL))
}

/// How the approach region varies with its base point.
#[derive(Clone, Debug)]
pub enum FamilyKind {
    /// `lambda(w)` is the base region rotated to `w`.
    RotationInvariant(ApproachRegion),
    /// Finite table `w -> lambda(w)` with per-entry aperture.
    Tabulated(Vec<(ApproachRegion, u32)>),
}

#[derive(Clone, Debug)]
pub struct RegionFamily {
    pub kind: FamilyKind,
    /// aperture used for projective adjacency of rotation-invariant families
    pub b: u32,
}

impl RegionFamily {
    pub fn rotation_invariant(base: ApproachRegion, b: u32) -> Self {
        let base = base.at(BoundaryPoint::new(0.0));
        Self { kind: FamilyKind::RotationInvariant(base), b }
    }

    pub fn is_rotation_invariant(&self) -> bool {
        matches!(self.kind, FamilyKind::RotationInvariant(_))
    }

    pub fn region_at(&self, w: BoundaryPoint) -> Option<ApproachRegion> {
        match &self.kind {
            FamilyKind::RotationInvariant(r) => Some(r.at(w)),
            FamilyKind::Tabulated(t) => t
                .iter()
                .find(|(r, _)| crate::geometry::wrap_signed(r.base().angle() - w.angle()).abs() < 1e-12)
                .map(|(r, _)| r.clone()),
        }
    }

    pub fn b_at(&self, w: BoundaryPoint) -> u32 {
        match &self.kind {
            FamilyKind::RotationInvariant(_) => self.b,
            FamilyKind::Tabulated(t) => t
                .iter()
                .find(|(r, _)| crate::geometry::wrap_signed(r.base().angle() - w.angle()).abs() < 1e-12)
                .map_or(self.b, |(_, b)| *b),
        }
    }
}

/// Grid `w_i = 2pi (i + 1/2) / n`.
pub fn boundary_grid(n: usize) -> Vec<BoundaryPoint> {
    (0..n).map(|i| BoundaryPoint::new(TWO_PI * (i as f64 + 0.5) / n as f64)).collect()
}

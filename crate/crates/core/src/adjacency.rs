//! Shadows of point sets and projective adjacency.
//!
//! Positive results come from exact arc arithmetic on shadows of sampled (or
//! analytically chained) tail points, so a witness arc is always inside the
//! true shadow. Refutation needs the whole tail and is only offered for
//! sequences, using extended-range arithmetic past the double cutoff.

use serde::{Deserialize, Serialize};

use crate::error::{AdjacencyError, GeometryError};
use crate::ext::ExtFloat;
use crate::geometry::{point_shadow, tent_contains, wrap_angle, Arc, ArcUnion, BoundaryPoint, DiscPoint, Tent, TWO_PI};
use crate::regions::{check_ladder, ApproachRegion, FamilyKind, RegionFamily, RegionKind, SequenceRule};

/// Shortest arc accepted as an adjacency witness.
pub const LEN_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    /// `w` is the right (clockwise) endpoint: `J = (w - l, w)`
    Left,
    /// `w` is the left endpoint: `J = (w, w + l)`
    Right,
    Either,
}

/// Union of the `b`-shadows of `points`.
pub fn set_shadow(b: u32, points: &[DiscPoint]) -> Result<ArcUnion, GeometryError> {
    let mut arcs = Vec::with_capacity(points.len());
    for z in points {
        match point_shadow(b, z)? {
            crate::geometry::PointShadow::FullCircle => return Ok(ArcUnion::full()),
            crate::geometry::PointShadow::Arc(a) => arcs.push(a),
        }
    }
    Ok(ArcUnion::normalize(&arcs))
}

fn right_witness(s: &ArcUnion, w: f64) -> Option<Arc> {
    if s.is_full() {
        return Arc::new(w, TWO_PI - LEN_TOL).ok();
    }
    s.components().into_iter().find_map(|c| {
        let o = wrap_angle(w - c.start());
        let l = c.len() - o;
        (o < c.len() && l > LEN_TOL).then(|| Arc::new(w, l).ok()).flatten()
    })
}

fn left_witness(s: &ArcUnion, w: f64) -> Option<Arc> {
    if s.is_full() {
        return Arc::new(w + LEN_TOL, TWO_PI - LEN_TOL).ok();
    }
    s.components().into_iter().find_map(|c| {
        let o = wrap_angle(c.end() - w);
        let l = c.len() - o;
        (o < c.len() && l > LEN_TOL).then(|| Arc::new(w - l, l).ok()).flatten()
    })
}

/// Maximal arc `J ⊂ S` having `w` as an endpoint on the requested side.
pub fn adjacent_to(s: &ArcUnion, w: BoundaryPoint, side: Side) -> Option<Arc> {
    adjacent_side(s, w, side).map(|(a, _)| a)
}

fn adjacent_side(s: &ArcUnion, w: BoundaryPoint, side: Side) -> Option<(Arc, Side)> {
    let a = w.angle();
    match side {
        Side::Right => right_witness(s, a).map(|j| (j, Side::Right)),
        Side::Left => left_witness(s, a).map(|j| (j, Side::Left)),
        Side::Either => adjacent_side(s, w, Side::Right).or_else(|| adjacent_side(s, w, Side::Left)),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum AdjacencyVerdict {
    WitnessFound,
    RefutedAtProbes,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadiusRow {
    pub r: f64,
    pub samples: usize,
    pub witness: Option<Arc>,
    pub side: Option<Side>,
    /// the shadow included an analytic chain over the whole sequence tail
    pub chained: bool,
    /// a grid probe near `w` outside the shadow, when no witness exists
    pub probe_outside: Option<f64>,
}

/// Extended-range record of a sequence refutation, all in the base-1 frame.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RefutationDetail {
    pub n_b: u64,
    /// `min |1 - z_n|` over `n < n_b + 10`
    pub r_b: ExtFloat,
    /// tail indices checked one by one, `[lo, hi)`
    pub tested: (u64, u64),
    /// right probes `c_k = (theta_k + theta_{k+1})/2`, `k in [lo, hi)`
    pub right_probes: (u64, u64),
    /// left probes `-1/k`, `k in [lo, hi]`
    pub left_probes: (u64, u64),
    pub max_tau: ExtFloat,
    pub threshold: f64,
    pub failures: usize,
    /// shadows past `tested.1` lie in `(0, c_{tested.1 - 1})`
    pub envelope_ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdjacencyWitness {
    pub base: f64,
    pub b: u32,
    pub ladder: Vec<f64>,
    pub rows: Vec<RadiusRow>,
    pub verdict: AdjacencyVerdict,
    pub refutation: Option<RefutationDetail>,
}

/// Chain arcs certified for the full tail of sequence parts inside `B(1, r)`.
fn chain_arcs(kind: &RegionKind, b: u32, r: f64, out: &mut Vec<Arc>) {
    match kind {
        RegionKind::Sequence { rule, start } => {
            if let Some(n0) = rule.tail_start(r, *start) {
                if let Some(a) = rule.shadow_chain(b, n0) {
                    out.push(a);
                }
            }
        }
        RegionKind::Union(parts) => parts.iter().for_each(|p| chain_arcs(p, b, r, out)),
        _ => {}
    }
}

/// Looks for an arc adjacent to `w` inside the `b`-shadow of every tail on the ladder.
pub fn test_projective_adjacency(
    region: &ApproachRegion,
    b: u32,
    ladder: &[f64],
    budget: usize,
) -> Result<AdjacencyWitness, AdjacencyError> {
    if b == 0 {
        return Err(GeometryError::ZeroAperture.into());
    }
    check_ladder(ladder, region.r_max())?;
    let sampler = region.sampler(budget)?;
    let one = BoundaryPoint::new(0.0);
    let mut rows = Vec::with_capacity(ladder.len());
    for &r in ladder {
        let pts: Vec<DiscPoint> = sampler.tail_rel(r).map(|s| s.z).collect();
        let mut shadow = set_shadow(b, &pts)?;
        let mut chain = Vec::new();
        chain_arcs(region.kind(), b, r, &mut chain);
        let chained = !chain.is_empty();
        if chained {
            shadow = shadow.union(&ArcUnion::normalize(&chain));
        }
        let found = adjacent_side(&shadow, one, Side::Either);
        let probe_outside = if found.is_none() {
            (1..=64).map(|i| 1e-3 * i as f64).flat_map(|a| [a, -a]).find(|&a| !shadow.contains(a))
        } else {
            None
        };
        let rot = region.base().angle();
        rows.push(RadiusRow {
            r,
            samples: pts.len(),
            witness: found.map(|(a, _)| Arc::new(a.start() + rot, a.len()).expect("length unchanged")),
            side: found.map(|(_, s)| s),
            chained,
            probe_outside: probe_outside.map(|a| wrap_angle(a + rot)),
        });
    }
    let verdict = if rows.iter().all(|r| r.witness.is_some()) {
        AdjacencyVerdict::WitnessFound
    } else {
        AdjacencyVerdict::Inconclusive
    };
    Ok(AdjacencyWitness { base: region.base().angle(), b, ladder: ladder.to_vec(), rows, verdict, refutation: None })
}

/// `tau(e^{ip}, z)` for `z` with boundary coordinates `(theta, delta)`.
fn tau_ext(p: ExtFloat, theta: ExtFloat, delta: ExtFloat) -> ExtFloat {
    let half = p.sub(theta).scale(0.5).sin();
    let den = delta.mul(delta).add(ExtFloat::ONE.sub(delta).scale(4.0).mul(half).mul(half));
    delta.div(den.sqrt())
}

/// `|1 - z|` for `z` with boundary coordinates `(theta, delta)`.
fn dist_ext(theta: ExtFloat, delta: ExtFloat) -> ExtFloat {
    let half = theta.scale(0.5).sin();
    delta.mul(delta).add(ExtFloat::ONE.sub(delta).scale(4.0).mul(half).mul(half)).sqrt()
}

const TESTED_SPAN: u64 = 40;
const LEFT_PROBE_MAX: u64 = 1000;

/// Shows that no arc with endpoint `w` lies in the `b`-shadow of `A ∩ B(w, r_b)`
/// at the standard probes. Sequence regions only.
pub fn refute_projective_adjacency(region: &ApproachRegion, b: u32) -> Result<AdjacencyWitness, AdjacencyError> {
    if b == 0 {
        return Err(GeometryError::ZeroAperture.into());
    }
    let RegionKind::Sequence { rule, start } = region.kind() else {
        return Err(AdjacencyError::NotEnumerable(format!("{:?} is not a sequence", region.kind())));
    };
    let rule: SequenceRule = *rule;
    let coords = |n: u64| rule.ext_coords(n);
    let thr = 1.0 / (1.0 + b as f64);
    let bound = ExtFloat::from_f64(thr * thr);
    // every n >= n_b has (128/3) delta_n < 1/(1+b)^2; delta_n decreases
    let n_b = (10u64.max(*start)..=61)
        .find(|&n| coords(n).map_or(false, |(_, d)| d.scale(128.0 / 3.0) < bound))
        .ok_or_else(|| AdjacencyError::NotEnumerable(format!("{}: no n_b in range", rule.name())))?;
    let lo = n_b + 10;
    let hi = (lo + TESTED_SPAN).min(if rule == SequenceRule::Prop2c { 61 } else { u64::MAX });
    let missing = || AdjacencyError::NotEnumerable(format!("{}: index past extended range", rule.name()));
    let (t_last, d_last) = coords(lo - 1).ok_or_else(missing)?;
    let r_b = dist_ext(t_last, d_last);

    let mut tail = Vec::with_capacity((hi - lo) as usize);
    for n in lo..hi {
        let (t, d) = coords(n).ok_or_else(missing)?;
        if !(dist_ext(t, d) < r_b) {
            return Err(AdjacencyError::NotEnumerable(format!("{}: tail distances not decreasing at {n}", rule.name())));
        }
        tail.push((t, d));
    }

    let thr_ext = ExtFloat::from_f64(thr);
    let mut max_tau = ExtFloat::ZERO;
    let mut failures = 0;
    let mut check = |p: ExtFloat| {
        for &(t, d) in &tail {
            let v = tau_ext(p, t, d);
            if v > max_tau {
                max_tau = v;
            }
            if !(v < thr_ext) {
                failures += 1;
            }
        }
    };
    for k in lo..hi {
        let (tk, _) = coords(k).ok_or_else(missing)?;
        let (tk1, _) = coords(k + 1).ok_or_else(missing)?;
        check(tk.add(tk1).scale(0.5));
    }
    for k in 10..=LEFT_PROBE_MAX {
        check(ExtFloat::from_f64(-1.0 / k as f64));
    }

    // the remaining shadows sit in (theta_N - h_N, theta_N + h_N) with N = hi,
    // strictly right of 0 and left of the smallest right probe
    let (t_n, d_n) = coords(hi).ok_or_else(missing)?;
    let bb = b as f64;
    let s = d_n.mul(d_n).scale(bb * (bb + 2.0) / 4.0).div(ExtFloat::ONE.sub(d_n)).sqrt();
    let sf = s.to_f64();
    let h_n = s.scale(2.0 / (1.0 - sf * sf).max(0.0).sqrt().max(1e-300));
    let (tp, _) = coords(hi - 1).ok_or_else(missing)?;
    let c_min = tp.add(t_n).scale(0.5);
    let envelope_ok = sf < 0.5 && t_n.sub(h_n) > ExtFloat::ZERO && c_min > t_n.add(h_n);

    let verdict = if failures == 0 && envelope_ok {
        AdjacencyVerdict::RefutedAtProbes
    } else {
        AdjacencyVerdict::Inconclusive
    };
    Ok(AdjacencyWitness {
        base: region.base().angle(),
        b,
        ladder: Vec::new(),
        rows: Vec::new(),
        verdict,
        refutation: Some(RefutationDetail {
            n_b,
            r_b,
            tested: (lo, hi),
            right_probes: (lo, hi),
            left_probes: (10, LEFT_PROBE_MAX),
            max_tau,
            threshold: thr,
            failures,
            envelope_ok,
        }),
    })
}

/// Open set `U` whose shadow under a family is sampled.
#[derive(Clone, Debug)]
pub enum SetSpec {
    Points(Vec<DiscPoint>),
    Tent(Tent),
}

fn meets(region: &ApproachRegion, pool: &[crate::regions::Sample], u: &SetSpec, w: BoundaryPoint) -> bool {
    let a = w.angle();
    match u {
        SetSpec::Points(pts) => pts.iter().any(|z| region.contains_rel(&z.rotate(-a), 1e-12)),
        SetSpec::Tent(t) => {
            // only pool points at distance within |w - y| +- radius can hit
            let c = 2.0 * (0.5 * crate::geometry::wrap_signed(a - t.center.angle())).sin().abs();
            pool.iter()
                .filter(|s| s.dist > c - t.radius && s.dist < c + t.radius)
                .any(|s| tent_contains(t, &s.z.rotate(a)))
        }
    }
}

/// Grid points `w` with `lambda(w) ∩ U` nonempty at sample resolution.
pub fn family_shadow(family: &RegionFamily, u: &SetSpec, grid: &[BoundaryPoint], budget: usize) -> Vec<BoundaryPoint> {
    match &family.kind {
        FamilyKind::RotationInvariant(base) => {
            let pool = base.sampler(budget).map(|s| s.pool().to_vec()).unwrap_or_default();
            grid.iter().copied().filter(|&w| meets(base, &pool, u, w)).collect()
        }
        FamilyKind::Tabulated(_) => grid
            .iter()
            .copied()
            .filter(|&w| {
                family.region_at(w).map_or(false, |reg| {
                    let pool = reg.sampler(budget).map(|s| s.pool().to_vec()).unwrap_or_default();
                    meets(&reg, &pool, u, w)
                })
            })
            .collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegularityReport {
    pub grid: usize,
    pub hits: usize,
    /// `hits * 2pi / grid`
    pub measure: f64,
    pub base_length: f64,
}

/// Sampled measure of `lambda*(Delta(J))` for a tent.
pub fn regularity_probe(family: &RegionFamily, tent: &Tent, grid: usize, budget: usize) -> RegularityReport {
    let g = crate::regions::boundary_grid(grid);
    let hits = family_shadow(family, &SetSpec::Tent(*tent), &g, budget).len();
    RegularityReport { grid, hits, measure: hits as f64 * TWO_PI / grid as f64, base_length: tent.base.len() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regions::{make_prop2b_region, make_prop2c_region, make_stolz_region};

    fn one() -> BoundaryPoint {
        BoundaryPoint::new(0.0)
    }

    #[test]
    fn shadows_of_simple_sets() {
        let o = DiscPoint::new(0.0, 0.0).unwrap();
        assert!(set_shadow(1, &[o]).unwrap().is_full());
        assert!(set_shadow(1, &[]).unwrap().is_empty());
        let z1 = DiscPoint::from_coords(0.0, 0.1).unwrap();
        let z2 = DiscPoint::from_coords(0.2, 0.1).unwrap();
        let s = set_shadow(2, &[z1, z2]).unwrap();
        assert_eq!(s.component_count(), 1);
        // half-width 2 asin(sqrt(8 * 0.01 / 3.6))
        let h = 0.299_257_818_719_034_9;
        assert!((s.measure() - (0.2 + 2.0 * h)).abs() < 1e-12);
    }

    #[test]
    fn adjacency_cases() {
        let full = ArcUnion::full();
        let w = BoundaryPoint::new(1.0);
        assert!((adjacent_to(&full, w, Side::Right).unwrap().len() - (TWO_PI - LEN_TOL)).abs() < 1e-15);
        assert!(adjacent_to(&full, w, Side::Left).is_some());
        let s = ArcUnion::from_arc(&Arc::new(1.0, 0.5).unwrap());
        let j = adjacent_to(&s, w, Side::Right).unwrap();
        assert_eq!((j.start(), j.len()), (1.0, 0.5));
        assert!(adjacent_to(&s, w, Side::Left).is_none());
        let left = ArcUnion::from_arc(&Arc::new(0.2, 0.5).unwrap());
        assert!(adjacent_to(&left, w, Side::Right).is_none());
        assert!(adjacent_to(&left, w, Side::Either).is_none());
        // interior point gives both sides, across the seam too
        let seam = ArcUnion::from_arc(&Arc::new(6.0, 1.0).unwrap());
        let r = adjacent_to(&seam, one(), Side::Right).unwrap();
        let l = adjacent_to(&seam, one(), Side::Left).unwrap();
        assert!((r.len() - (7.0 - TWO_PI)).abs() < 1e-12);
        assert!((l.len() - (TWO_PI - 6.0)).abs() < 1e-12);
    }

    #[test]
    fn prop2b_witnesses() {
        let ladder: Vec<f64> = (3..=10).map(|k| 2f64.powi(-k)).collect();
        let rep = test_projective_adjacency(&make_prop2b_region(one()), 2, &ladder, 64).unwrap();
        assert_eq!(rep.verdict, AdjacencyVerdict::WitnessFound);
        for row in &rep.rows {
            let j = row.witness.unwrap();
            assert_eq!(row.side, Some(Side::Right));
            assert!(j.len() >= 4.0 * row.r / 25.0);
        }
    }

    #[test]
    fn stolz_is_projectively_adjacent() {
        let rep = test_projective_adjacency(&make_stolz_region(1, BoundaryPoint::new(2.0)), 2, &[0.1, 0.01], 16).unwrap();
        assert_eq!(rep.verdict, AdjacencyVerdict::WitnessFound);
    }

    #[test]
    fn prop2c_refuted() {
        let rep = refute_projective_adjacency(&make_prop2c_region(one()), 10).unwrap();
        assert_eq!(rep.verdict, AdjacencyVerdict::RefutedAtProbes);
        let d = rep.refutation.unwrap();
        assert_eq!(d.n_b, 10);
        assert_eq!(d.tested.0, 20);
        assert!(d.max_tau < ExtFloat::from_f64(1.0 / 11.0));
        assert!(d.envelope_ok);
    }

    #[test]
    fn prop2b_not_refuted() {
        let rep = refute_projective_adjacency(&make_prop2b_region(one()), 2).unwrap();
        assert_eq!(rep.verdict, AdjacencyVerdict::Inconclusive);
        assert!(matches!(
            refute_projective_adjacency(&make_stolz_region(1, one()), 2),
            Err(AdjacencyError::NotEnumerable(_))
        ));
    }

    #[test]
    fn family_shadow_of_a_point() {
        let fam = RegionFamily::rotation_invariant(make_stolz_region(2, one()), 2);
        let z = DiscPoint::from_coords(1.0, 0.05).unwrap();
        let grid = crate::regions::boundary_grid(512);
        let got = family_shadow(&fam, &SetSpec::Points(vec![z]), &grid, 8);
        let sh = point_shadow(2, &z).unwrap();
        let want: Vec<_> = grid.iter().copied().filter(|w| sh.contains(w.angle())).collect();
        assert_eq!(got, want);
    }
}

//! Divergent bounded harmonic function for a tangential family, at desk scale.
//!
//! Levels `j = 1..=J` get a frequency `phi_j` from the tangency gauge, the
//! sets `O_n` are arcs of length `2^-n 2pi/phi_n` around the `phi_n`-th roots
//! of unity, `V_j = O_j ∪ ... ∪ O_K`, and `f = sum_j s^-j 1_{V_j}`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::adjacency::{test_projective_adjacency, AdjacencyVerdict};
use crate::error::{BuildError, Hypothesis};
use crate::geometry::{tent_contains, tent_of, wrap_signed, Arc, ArcUnion, BoundaryPoint, DiscPoint, Piece, TWO_PI};
use crate::harmonic::{default_tent_ladder, estimate_tent_constant, BoundaryIndicator, TentConstantReport};
use crate::multipole::FastPoisson;
use crate::regions::{
    boundary_grid, classify, default_ladder, make_prop2b_region, make_stolz_region, ApproachRegion, FamilyKind,
    RegionFamily, Sample, Verdict,
};

pub const DEFAULT_C: f64 = 0.216_506_350_946_109_66; // sqrt(3/64)
pub const OSC_SLACK: f64 = 0.2;
pub const FATOU_LIMIT: f64 = 0.05;
const PROBE_COUNT: usize = 16;
const NEAR_COMPONENTS: usize = 64;

/// `2, 3, 2, 3, 4, 2, 3, 4, 5, ...`: block `m` lists `2..=m+2`.
pub fn v_sequence(j: u64) -> u32 {
    assert!(j >= 1, "levels start at 1");
    let mut rest = j - 1;
    let mut m = 1u64;
    while rest >= m + 1 {
        rest -= m + 1;
        m += 1;
    }
    (rest + 2) as u32
}

/// Sampled regions of a family with their base angles, in the base-1 frame.
#[derive(Clone, Debug)]
pub struct GaugeSource {
    entries: Vec<(ApproachRegion, Vec<Sample>)>,
}

impl GaugeSource {
    pub fn new(family: &RegionFamily, budget: usize) -> Result<Self, BuildError> {
        let regions: Vec<ApproachRegion> = match &family.kind {
            FamilyKind::RotationInvariant(r) => vec![r.clone()],
            FamilyKind::Tabulated(t) => t.iter().map(|(r, _)| r.clone()).collect(),
        };
        let mut entries = Vec::with_capacity(regions.len());
        for r in regions {
            let pool = r.sampler(budget)?.pool().to_vec();
            entries.push((r, pool));
        }
        Ok(Self { entries })
    }

    fn gauge_of(region: &ApproachRegion, pool: &[Sample], m: u64) -> f64 {
        let radius = 1.1 * TWO_PI / m as f64;
        let head = region.tail_head_rel(radius, 64);
        pool.iter()
            .filter(|s| s.dist < radius)
            .chain(head.iter())
            .map(|s| s.tau())
            .fold(0.0, f64::max)
    }

    /// Sup of the gauge `f_m` over all tabulated base points.
    pub fn sup(&self, m: u64) -> f64 {
        self.entries.iter().map(|(r, p)| Self::gauge_of(r, p, m)).fold(0.0, f64::max)
    }
}

/// `f_j(w)`: sampled sup of `tau(w, .)` over `lambda(w) ∩ B(w, (11/10) 2pi/j)`.
pub fn tangency_gauge(family: &RegionFamily, w: BoundaryPoint, j: u64, budget: usize) -> Option<f64> {
    let region = family.region_at(w)?;
    let pool = region.sampler(budget).ok()?.pool().to_vec();
    Some(GaugeSource::gauge_of(&region, &pool, j))
}

pub fn phi_threshold(j: u64, c: f64) -> f64 {
    c * (10.0 / 22.0) * 2f64.powi(-(j as i32)) / v_sequence(j) as f64
}

/// Smallest `m > max(j, prior)` with `sup f_m < c (10/22) 2^-j / v_j`.
pub fn select_phi(gauge: &GaugeSource, j: u64, c: f64, prior: u64, bound: u64) -> Result<u64, BuildError> {
    let thr = phi_threshold(j, c);
    let ok = |m: u64| gauge.sup(m) < thr;
    let lo = j.max(prior) + 1;
    if ok(lo) {
        return Ok(lo);
    }
    let err = BuildError::PhiSearch { level: j as usize, threshold: thr, bound };
    // the gauge is nonincreasing in m, so bracket and bisect
    let (mut a, mut step) = (lo, 1u64);
    let mut b = loop {
        let cand = a.saturating_add(step);
        if cand > bound {
            break bound;
        }
        if ok(cand) {
            break cand;
        }
        a = cand;
        step = step.saturating_mul(2);
    };
    if !ok(b) {
        return Err(err);
    }
    while b - a > 1 {
        let m = a + (b - a) / 2;
        if ok(m) {
            b = m;
        } else {
            a = m;
        }
    }
    Ok(b)
}

/// `n`-th roots of unity.
pub fn build_lattice(n: u64) -> Vec<BoundaryPoint> {
    (0..n).map(|p| BoundaryPoint::new(TWO_PI * p as f64 / n as f64)).collect()
}

/// Arcs of length `2^-n 2pi/phi` centred at the `phi`-th roots of unity.
pub fn build_o(n: u32, phi: u64) -> ArcUnion {
    let len = 2f64.powi(-(n as i32)) * TWO_PI / phi as f64;
    let half = 0.5 * len;
    let mut pieces = Vec::with_capacity(phi as usize + 1);
    pieces.push(Piece { start: 0.0, len: half });
    for p in 1..phi {
        let c = TWO_PI * p as f64 / phi as f64;
        pieces.push(Piece { start: c - half, len });
    }
    pieces.push(Piece { start: TWO_PI - half, len: half });
    ArcUnion::from_sorted_pieces(pieces)
}

/// `V_j = O_j ∪ ... ∪ O_K`; `phi[k-1]` is `phi_k`.
pub fn build_v(j: u32, phi: &[u64], k_max: u32) -> ArcUnion {
    let mut v = ArcUnion::empty();
    for k in (j..=k_max).rev() {
        v = build_o(k, phi[k as usize - 1]).union(&v);
    }
    v
}

/// Default radii for the Zygmund test: `2^-3` down to a floor resolving `O_K`.
pub fn default_eps_ladder(phi_k: u64) -> Vec<f64> {
    let floor = 4.0 * TWO_PI / phi_k as f64;
    (3..=15).map(|k| 2f64.powi(-k)).filter(|&e| e >= floor).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct ZygmundCheck {
    pub member: bool,
    /// radii of the ladder at which a tent was met
    pub met: usize,
    /// region points found inside the tents (absolute frame)
    pub hits: Vec<DiscPoint>,
}

/// Condition (ii) of the Zygmund map on a finite ladder: for every `eps` some
/// arc `J ⊂ V ∩ B(w, eps)` has a tent met by the sampled `lambda(w)`.
pub fn zygmund_check(region: &ApproachRegion, v: &ArcUnion, w: BoundaryPoint, eps_ladder: &[f64]) -> ZygmundCheck {
    let a = w.angle();
    let miss = ZygmundCheck { member: false, met: 0, hits: Vec::new() };
    if v.contains(a) || v.is_full() {
        return miss;
    }
    let pieces = v.pieces();
    if pieces.is_empty() {
        return miss;
    }
    let n = pieces.len();
    let idx = pieces.partition_point(|p| p.start < a);
    let span = NEAR_COMPONENTS.min(n);
    // nearest pieces first, alternating sides
    let mut cand: Vec<(f64, f64)> = Vec::with_capacity(2 * span);
    for i in 0..span {
        for j in [(idx + i) % n, (idx + n - 1 - i) % n] {
            let p = pieces[j];
            let off = wrap_signed(p.start - a);
            cand.push((off, off + p.len));
        }
    }
    cand.sort_by(|x, y| x.0.abs().min(x.1.abs()).total_cmp(&y.0.abs().min(y.1.abs())));
    cand.dedup();
    let mut hits = Vec::new();
    let mut met = 0;
    for &eps in eps_ladder {
        let alpha = 2.0 * (0.5 * eps).min(1.0).asin();
        let mut found = false;
        for &(lo, hi) in &cand {
            let (l, h) = (lo.max(-alpha), hi.min(alpha));
            if !(h > l) {
                continue;
            }
            let Ok(j) = Arc::new(a + l, h - l) else { continue };
            let tent = tent_of(&j);
            let beta = 0.5 * (l + h);
            for s in region.probe_toward_rel(beta, PROBE_COUNT) {
                let z = s.z.rotate(a);
                if tent_contains(&tent, &z) {
                    hits.push(z);
                    found = true;
                }
            }
            if found {
                break;
            }
        }
        if !found {
            return ZygmundCheck { member: false, met, hits };
        }
        met += 1;
    }
    ZygmundCheck { member: true, met, hits }
}

pub fn zygmund_member(family: &RegionFamily, v: &ArcUnion, w: BoundaryPoint, eps_ladder: &[f64]) -> bool {
    family.region_at(w).map_or(false, |r| zygmund_check(&r.at(BoundaryPoint::new(0.0)), v, w, eps_ladder).member)
}

#[derive(Clone, Debug)]
pub struct CounterexampleConfig {
    pub family: RegionFamily,
    pub levels: u32,
    pub truncation: u32,
    pub grid: usize,
    pub c: f64,
    pub budget: usize,
    pub phi_bound: u64,
    pub tent_density: usize,
    /// grid points checked by the hypothesis gate
    pub gate_points: usize,
    /// per-shell budget for region samples during verification
    pub verify_budget: usize,
}

impl Default for CounterexampleConfig {
    fn default() -> Self {
        Self {
            family: RegionFamily::rotation_invariant(make_prop2b_region(BoundaryPoint::new(0.0)), 10),
            levels: 5,
            truncation: 12,
            grid: 4096,
            c: DEFAULT_C,
            budget: 64,
            phi_bound: 1 << 40,
            tent_density: 512,
            gate_points: 4,
            verify_budget: 8,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GateReport {
    pub points: Vec<f64>,
    pub tangential: Vec<Verdict>,
    pub adjacency: Vec<AdjacencyVerdict>,
    pub regular: bool,
}

#[derive(Clone, Debug)]
pub struct CounterexampleArtifact {
    pub levels: u32,
    pub truncation: u32,
    pub grid: usize,
    pub c: f64,
    /// `phi_1..phi_K`
    pub phi: Vec<u64>,
    pub v: Vec<u32>,
    pub gauges: Vec<f64>,
    pub thresholds: Vec<f64>,
    pub c0: f64,
    pub s: f64,
    pub tent: TentConstantReport,
    pub o_measures: Vec<f64>,
    /// `V_1..V_J`, truncated at `K`
    pub sets: Vec<ArcUnion>,
    pub f: BoundaryIndicator,
    pub gate: GateReport,
}

fn gate(config: &CounterexampleConfig) -> Result<GateReport, BuildError> {
    let grid = boundary_grid(config.grid);
    let stride = (grid.len() / config.gate_points.max(1)).max(1);
    let points: Vec<BoundaryPoint> = if config.family.is_rotation_invariant() {
        vec![grid[0]]
    } else {
        grid.iter().step_by(stride).copied().collect()
    };
    let ladder = default_ladder();
    let adj_ladder: Vec<f64> = (3..=10).map(|k| 2f64.powi(-k)).collect();
    let mut rep = GateReport { points: Vec::new(), tangential: Vec::new(), adjacency: Vec::new(), regular: true };
    for w in points {
        let region = config
            .family
            .region_at(w)
            .ok_or_else(|| BuildError::Config(format!("family has no region at {}", w.angle())))?;
        let cls = classify(&region, &ladder, config.budget)?;
        if cls.verdict != Verdict::Tangential {
            return Err(BuildError::Hypothesis {
                hypothesis: Hypothesis::Tangential,
                angle: w.angle(),
                detail: format!("verdict {:?}, sampled sup tau {:.4}", cls.verdict, cls.a_upper),
            });
        }
        let b = config.family.b_at(w).max(1);
        let adj = test_projective_adjacency(&region, b, &adj_ladder, config.budget)?;
        if adj.verdict != AdjacencyVerdict::WitnessFound {
            return Err(BuildError::Hypothesis {
                hypothesis: Hypothesis::Adjacent,
                angle: w.angle(),
                detail: format!("no adjacent arc in the {b}-shadow of some tail"),
            });
        }
        rep.points.push(w.angle());
        rep.tangential.push(cls.verdict);
        rep.adjacency.push(adj.verdict);
    }
    // rotation-invariant families are regular; finite tables are measurable trivially
    Ok(rep)
}

fn check_config(config: &CounterexampleConfig) -> Result<(), BuildError> {
    if config.levels == 0 || config.truncation < config.levels {
        return Err(BuildError::Config(format!(
            "need 1 <= levels <= truncation, got levels={} truncation={}",
            config.levels, config.truncation
        )));
    }
    if config.truncation > 40 {
        return Err(BuildError::Config("truncation above 40 is out of reach".into()));
    }
    if config.grid == 0 || config.budget == 0 || config.tent_density < 2 || config.verify_budget == 0 {
        return Err(BuildError::Config("grid, budget, tent_density and verify_budget must be positive".into()));
    }
    if !(config.c > 0.0 && config.c.is_finite()) {
        return Err(BuildError::Config(format!("c must be positive, got {}", config.c)));
    }
    Ok(())
}

pub fn build_counterexample(config: &CounterexampleConfig) -> Result<CounterexampleArtifact, BuildError> {
    check_config(config)?;
    let gate = gate(config)?;
    let gauge = GaugeSource::new(&config.family, config.budget)?;
    let mut phi = Vec::with_capacity(config.truncation as usize);
    let mut gauges = Vec::new();
    let mut thresholds = Vec::new();
    let mut prior = 0;
    for j in 1..=config.truncation as u64 {
        let p = select_phi(&gauge, j, config.c, prior, config.phi_bound)?;
        log::debug!("phi_{j} = {p}");
        gauges.push(gauge.sup(p));
        thresholds.push(phi_threshold(j, config.c));
        phi.push(p);
        prior = p;
    }
    let tent = estimate_tent_constant(&default_tent_ladder(), config.tent_density);
    assemble(config, phi, gauges, thresholds, tent, gate)
}

/// Rebuild from a recorded frequency list, skipping the search.
pub fn build_from_phi(
    config: &CounterexampleConfig,
    phi: Vec<u64>,
    tent: TentConstantReport,
) -> Result<CounterexampleArtifact, BuildError> {
    check_config(config)?;
    if phi.len() != config.truncation as usize {
        return Err(BuildError::Config(format!("expected {} frequencies, got {}", config.truncation, phi.len())));
    }
    let gate = gate(config)?;
    let gauge = GaugeSource::new(&config.family, config.budget)?;
    let gauges = phi.iter().map(|&p| gauge.sup(p)).collect();
    let thresholds = (1..=config.truncation as u64).map(|j| phi_threshold(j, config.c)).collect();
    assemble(config, phi, gauges, thresholds, tent, gate)
}

fn assemble(
    config: &CounterexampleConfig,
    phi: Vec<u64>,
    gauges: Vec<f64>,
    thresholds: Vec<f64>,
    tent: TentConstantReport,
    gate: GateReport,
) -> Result<CounterexampleArtifact, BuildError> {
    let k_max = config.truncation;
    let c0 = tent.c0;
    if !(c0 > 0.0) {
        return Err(BuildError::Config(format!("tent constant estimate {c0} is not positive")));
    }
    let s = 1.0 + (1.0 + c0) / c0;
    let mut o_measures = Vec::with_capacity(k_max as usize);
    let mut sets = Vec::with_capacity(config.levels as usize);
    let mut v = ArcUnion::empty();
    for k in (1..=k_max).rev() {
        let o = build_o(k, phi[k as usize - 1]);
        o_measures.push(o.measure());
        v = o.union(&v);
        if k <= config.levels {
            sets.push(v.clone());
        }
    }
    o_measures.reverse();
    sets.reverse();
    let mut f = BoundaryIndicator::new();
    for (j, set) in sets.iter().enumerate() {
        f.add(s.powi(-(j as i32 + 1)), set.clone());
    }
    Ok(CounterexampleArtifact {
        levels: config.levels,
        truncation: k_max,
        grid: config.grid,
        c: config.c,
        v: (1..=k_max as u64).map(v_sequence).collect(),
        phi,
        gauges,
        thresholds,
        c0,
        s,
        tent,
        o_measures,
        sets,
        f,
        gate,
    })
}

impl CounterexampleArtifact {
    /// `s^-j (c0 - 1/(s-1)) = s^-j c0^2/(1+c0)`.
    pub fn bound(&self, j: u32) -> f64 {
        self.s.powi(-(j as i32)) * self.c0 * self.c0 / (1.0 + self.c0)
    }

    /// Smallest level `n <= J` with `w ∉ V_n`.
    pub fn escape_level(&self, w: BoundaryPoint) -> Option<u32> {
        self.sets.iter().position(|v| !v.contains(w.angle())).map(|i| i as u32 + 1)
    }

    /// Length of the arcs of `O_K`.
    pub fn finest_arc(&self) -> f64 {
        let k = self.truncation;
        2f64.powi(-(k as i32)) * TWO_PI / self.phi[k as usize - 1] as f64
    }

    pub fn record(&self, with_sets: bool) -> ArtifactRecord {
        ArtifactRecord {
            levels: self.levels,
            truncation: self.truncation,
            grid: self.grid,
            c: self.c,
            phi: self.phi.clone(),
            v: self.v.clone(),
            gauges: self.gauges.clone(),
            thresholds: self.thresholds.clone(),
            c0: self.c0,
            s: self.s,
            tent: self.tent.clone(),
            o_measures: self.o_measures.clone(),
            coefficients: self.f.terms.iter().map(|(c, _)| *c).collect(),
            sets: self
                .sets
                .iter()
                .enumerate()
                .map(|(i, v)| SetSummary {
                    level: i as u32 + 1,
                    components: v.component_count(),
                    measure: v.measure(),
                    digest: digest(v),
                    arcs: with_sets.then(|| v.components().iter().map(|a| (a.start(), a.len())).collect()),
                })
                .collect(),
            gate: self.gate.clone(),
        }
    }
}

/// SHA-256 over the little-endian bytes of every piece.
pub fn digest(v: &ArcUnion) -> String {
    let mut h = Sha256::new();
    h.update([v.is_full() as u8, v.wraps() as u8]);
    for p in v.pieces() {
        h.update(p.start.to_le_bytes());
        h.update(p.len.to_le_bytes());
    }
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SetSummary {
    pub level: u32,
    pub components: usize,
    pub measure: f64,
    pub digest: String,
    /// `(start, length)` of each component, when requested
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arcs: Option<Vec<(f64, f64)>>,
}

/// Serializable form of an artifact.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArtifactRecord {
    pub levels: u32,
    pub truncation: u32,
    pub grid: usize,
    pub c: f64,
    pub phi: Vec<u64>,
    pub v: Vec<u32>,
    pub gauges: Vec<f64>,
    pub thresholds: Vec<f64>,
    pub c0: f64,
    pub s: f64,
    pub tent: TentConstantReport,
    pub o_measures: Vec<f64>,
    pub coefficients: Vec<f64>,
    pub sets: Vec<SetSummary>,
    pub gate: GateReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OscRow {
    pub w: f64,
    pub j: u32,
    pub osc: f64,
    pub bound: f64,
    pub pass: bool,
    pub tent_hits: usize,
    /// oscillation along `Gamma_1(w)` near `w`, for points off the edges of `f`
    pub fatou_osc: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub slack: f64,
    pub sampled: usize,
    pub passed: usize,
    pub pass_rate: f64,
    /// edge margin: points closer than this to a jump of `f` skip the Fatou check
    pub margin: f64,
    pub fatou_considered: usize,
    pub fatou_passed: usize,
    pub fatou_rate: f64,
    pub clamped: usize,
    pub rows: Vec<OscRow>,
}

fn rate(a: usize, b: usize) -> f64 {
    if b == 0 {
        0.0
    } else {
        a as f64 / b as f64
    }
}

/// Oscillation of `u = P(f)` along `lambda(w)` for sampled `w ∉ V_J`, with a
/// Fatou control along `Gamma_1(w)` at points away from the jumps of `f`.
pub fn verify_oscillation(
    artifact: &CounterexampleArtifact,
    family: &RegionFamily,
    samples: &[BoundaryPoint],
    verify_budget: usize,
) -> Result<VerificationReport, BuildError> {
    let fast = FastPoisson::new(&artifact.f);
    let phi_k = artifact.phi[artifact.truncation as usize - 1];
    let eps = default_eps_ladder(phi_k);
    let reach = eps.first().copied().unwrap_or(0.125);
    let margin = artifact.finest_arc();
    let stolz = make_stolz_region(1, BoundaryPoint::new(0.0)).sampler(verify_budget)?;
    let cone: Vec<Sample> =
        stolz.pool().iter().filter(|s| s.dist >= margin / 256.0 && s.dist < margin / 16.0).copied().collect();
    let rot_pool = match &family.kind {
        FamilyKind::RotationInvariant(r) => Some(r.sampler(verify_budget)?.pool().to_vec()),
        FamilyKind::Tabulated(_) => None,
    };
    let rows: Vec<Option<(OscRow, usize)>> = samples
        .par_iter()
        .map(|&w| -> Option<(OscRow, usize)> {
            let j = artifact.escape_level(w)?;
            let region = family.region_at(w)?.at(BoundaryPoint::new(0.0));
            let own_pool;
            let pool: &[Sample] = match &rot_pool {
                Some(p) => p,
                None => {
                    own_pool = region.sampler(verify_budget).ok()?.pool().to_vec();
                    &own_pool
                }
            };
            let zc = zygmund_check(&region, &artifact.sets[j as usize - 1], w, &eps);
            let a = w.angle();
            let (mut hi, mut lo, mut clamped) = (f64::NEG_INFINITY, f64::INFINITY, 0usize);
            let pts = pool.iter().filter(|s| s.dist < reach).map(|s| s.z.rotate(a)).chain(zc.hits.iter().copied());
            for z in pts {
                let e = fast.eval_checked(&z);
                clamped += e.clamped as usize;
                hi = hi.max(e.value);
                lo = lo.min(e.value);
            }
            let osc = if hi >= lo { hi - lo } else { 0.0 };
            let bound = artifact.bound(j);
            let fatou_osc = (fast.distance_to_edge(a) > margin && !cone.is_empty()).then(|| {
                let (mut h, mut l) = (f64::NEG_INFINITY, f64::INFINITY);
                for s in &cone {
                    let v = fast.eval(&s.z.rotate(a));
                    h = h.max(v);
                    l = l.min(v);
                }
                h - l
            });
            Some((
                OscRow { w: a, j, osc, bound, pass: osc >= (1.0 - OSC_SLACK) * bound, tent_hits: zc.hits.len(), fatou_osc },
                clamped,
            ))
        })
        .collect();
    let mut out = Vec::new();
    let mut clamped = 0;
    for (row, c) in rows.into_iter().flatten() {
        clamped += c;
        out.push(row);
    }
    let passed = out.iter().filter(|r| r.pass).count();
    let fatou: Vec<f64> = out.iter().filter_map(|r| r.fatou_osc).collect();
    let fatou_passed = fatou.iter().filter(|&&o| o < FATOU_LIMIT).count();
    Ok(VerificationReport {
        slack: OSC_SLACK,
        sampled: out.len(),
        passed,
        pass_rate: rate(passed, out.len()),
        margin,
        fatou_considered: fatou.len(),
        fatou_passed,
        fatou_rate: rate(fatou_passed, fatou.len()),
        clamped,
        rows: out,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZygmundReport {
    pub level: u32,
    pub considered: usize,
    pub passed: usize,
    pub rate: f64,
}

/// Share of grid points outside `V_n` that pass the Zygmund test.
pub fn zygmund_sample_check(
    artifact: &CounterexampleArtifact,
    family: &RegionFamily,
    n: u32,
    grid: &[BoundaryPoint],
) -> ZygmundReport {
    let v = &artifact.sets[n as usize - 1];
    let eps = default_eps_ladder(artifact.phi[artifact.truncation as usize - 1]);
    let res: Vec<bool> = grid
        .par_iter()
        .filter(|w| !v.contains(w.angle()))
        .map(|&w| zygmund_member(family, v, w, &eps))
        .collect();
    let passed = res.iter().filter(|&&b| b).count();
    ZygmundReport { level: n, considered: res.len(), passed, rate: rate(passed, res.len()) }
}

/// Angle of `z` relative to `w`, for plotting.
pub fn relative_angle(w: BoundaryPoint, z: &DiscPoint) -> f64 {
    wrap_signed(z.theta() - w.angle())
}

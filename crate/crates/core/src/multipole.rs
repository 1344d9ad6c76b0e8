//! Tree evaluator for Poisson integrals of step functions with many pieces.
//!
//! For a cluster of pieces around `u = e^{i psi}` and `D = u - z`,
//!
//! ```text
//! (1/2pi) sum_i c_i int_i P(z,t) dt
//!     = (1/2pi) [ -W + Re sum_m A_m D^{-(m+1)} ],
//! A_m = 2 (-1)^m (u mu_m + mu_{m+1}),   mu_m = sum_i c_i int_i (e^{it} - u)^m dt,
//! ```
//!
//! with `W = sum_i c_i |I_i|`. Clusters with radius `h < ETA |D|` use the
//! truncated series; nearer ones are opened down to exact leaf sums.

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::geometry::{wrap_angle, DiscPoint, TWO_PI};
use crate::harmonic::{arc_measure_raw, BoundaryIndicator, Evaluation, DELTA_CLAMP};

const ORDER: usize = 20;
const ETA: f64 = 0.3;
const LEAF: usize = 16;
const MAX_PIECE: f64 = 1e-3;
const GL_POINTS: usize = 12;
const NONE: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeightedPiece {
    pub start: f64,
    pub len: f64,
    pub weight: f64,
}

#[derive(Clone, Debug)]
struct Node {
    lo: u32,
    hi: u32,
    left: u32,
    right: u32,
    psi: f64,
    u: Complex64,
    h: f64,
    w: f64,
}

#[derive(Clone, Debug)]
pub struct FastPoisson {
    pieces: Vec<WeightedPiece>,
    edges: Vec<f64>,
    nodes: Vec<Node>,
    coeffs: Vec<Complex64>,
}

fn gauss_legendre() -> &'static ([f64; GL_POINTS], [f64; GL_POINTS]) {
    static GL: OnceLock<([f64; GL_POINTS], [f64; GL_POINTS])> = OnceLock::new();
    GL.get_or_init(|| {
        let n = GL_POINTS;
        let mut x = [0.0; GL_POINTS];
        let mut w = [0.0; GL_POINTS];
        for i in 0..n {
            let mut t = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, t);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * t * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                let dp = n as f64 * (t * p1 - p0) / (t * t - 1.0);
                let dt = p1 / dp;
                t -= dt;
                if dt.abs() < 1e-16 {
                    let (mut q0, mut q1) = (1.0, t);
                    for k in 2..=n {
                        let q2 = ((2 * k - 1) as f64 * t * q1 - (k - 1) as f64 * q0) / k as f64;
                        q0 = q1;
                        q1 = q2;
                    }
                    let dq = n as f64 * (t * q1 - q0) / (t * t - 1.0);
                    w[i] = 2.0 / ((1.0 - t * t) * dq * dq);
                    break;
                }
            }
            x[i] = t;
        }
        (x, w)
    })
}

fn binomials() -> &'static Vec<Vec<f64>> {
    static B: OnceLock<Vec<Vec<f64>>> = OnceLock::new();
    B.get_or_init(|| {
        let n = ORDER + 2;
        let mut t = vec![vec![0.0; n]; n];
        for m in 0..n {
            t[m][0] = 1.0;
            for k in 1..=m {
                t[m][k] = t[m - 1][k - 1] + if k < m { t[m - 1][k] } else { 0.0 };
            }
        }
        t
    })
}

/// `e^{ia} - e^{ib}` without cancellation for close angles.
#[inline]
fn chord_vec(a: f64, b: f64) -> Complex64 {
    let s = a - b;
    let h = 0.5 * s;
    let e = Complex64::new(-2.0 * h.sin() * h.sin(), s.sin());
    Complex64::new(b.cos(), b.sin()) * e
}

/// Disjoint weighted pieces of `sum_k c_k 1_{S_k}`, equal neighbours merged.
pub fn flatten(f: &BoundaryIndicator) -> Vec<WeightedPiece> {
    let terms: Vec<(f64, &[crate::geometry::Piece])> = f
        .terms
        .iter()
        .map(|(c, s)| {
            if s.is_full() {
                (*c, &FULL_PIECE[..])
            } else {
                (*c, s.pieces())
            }
        })
        .collect();
    let k = terms.len();
    assert!(k <= 63, "at most 63 indicator terms");
    // per term: index of the next piece and whether we are inside it
    let mut idx = vec![0usize; k];
    let mut inside = vec![false; k];
    let mut mask: u64 = 0;
    let mut prev = 0.0;
    let mut out: Vec<WeightedPiece> = Vec::new();
    let weight_of = |mask: u64| -> f64 {
        let mut w = 0.0;
        for (j, (c, _)) in terms.iter().enumerate() {
            if mask >> j & 1 == 1 {
                w += c;
            }
        }
        w
    };
    let mut weight = 0.0;
    loop {
        let mut best: Option<(f64, usize)> = None;
        for j in 0..k {
            let p = terms[j].1;
            if idx[j] >= p.len() {
                continue;
            }
            let x = if inside[j] { p[idx[j]].end() } else { p[idx[j]].start };
            if best.map_or(true, |(bx, _)| x < bx) {
                best = Some((x, j));
            }
        }
        let Some((x, j)) = best else { break };
        if x > prev && mask != 0 && weight != 0.0 {
            match out.last_mut() {
                Some(l) if l.weight == weight && l.start + l.len == prev => l.len = x - l.start,
                _ => out.push(WeightedPiece { start: prev, len: x - prev, weight }),
            }
        }
        prev = prev.max(x);
        if inside[j] {
            inside[j] = false;
            idx[j] += 1;
            mask &= !(1 << j);
        } else {
            inside[j] = true;
            mask |= 1 << j;
        }
        weight = weight_of(mask);
    }
    out
}

static FULL_PIECE: [crate::geometry::Piece; 1] = [crate::geometry::Piece { start: 0.0, len: TWO_PI }];

fn edges_of(pieces: &[WeightedPiece]) -> Vec<f64> {
    let mut e = Vec::with_capacity(2 * pieces.len());
    for p in pieces {
        if e.last() != Some(&p.start) {
            e.push(p.start);
        }
        e.push(p.start + p.len);
    }
    if let (Some(f), Some(l)) = (pieces.first(), pieces.last()) {
        if f.start == 0.0 && l.start + l.len >= TWO_PI && f.weight == l.weight {
            e.retain(|&x| x != 0.0 && x < TWO_PI);
        }
    }
    e
}

impl FastPoisson {
    pub fn new(f: &BoundaryIndicator) -> Self {
        Self::from_pieces(flatten(f))
    }

    pub fn from_pieces(merged: Vec<WeightedPiece>) -> Self {
        let edges = edges_of(&merged);
        let mut pieces = Vec::with_capacity(merged.len());
        for p in merged {
            if p.len <= MAX_PIECE {
                pieces.push(p);
                continue;
            }
            let parts = (p.len / MAX_PIECE).ceil() as usize;
            let step = p.len / parts as f64;
            for i in 0..parts {
                let s = p.start + step * i as f64;
                let e = if i + 1 == parts { p.start + p.len } else { s + step };
                pieces.push(WeightedPiece { start: s, len: e - s, weight: p.weight });
            }
        }
        let mut fp = Self { pieces, edges, nodes: Vec::new(), coeffs: Vec::new() };
        if !fp.pieces.is_empty() {
            fp.build(0, fp.pieces.len());
        }
        fp
    }

    pub fn pieces(&self) -> &[WeightedPiece] {
        &self.pieces
    }

    /// Angular distance from `angle` to the nearest point where the data jumps.
    pub fn distance_to_edge(&self, angle: f64) -> f64 {
        if self.edges.is_empty() {
            return f64::INFINITY;
        }
        let a = wrap_angle(angle);
        let i = self.edges.partition_point(|&x| x < a);
        let n = self.edges.len();
        let next = if i < n { self.edges[i] - a } else { self.edges[0] + TWO_PI - a };
        let prev = if i > 0 { a - self.edges[i - 1] } else { a + TWO_PI - self.edges[n - 1] };
        next.min(prev)
    }

    /// Builds the subtree over pieces `lo..hi`, returning its node index and moments.
    fn build(&mut self, lo: usize, hi: usize) -> (u32, Vec<Complex64>) {
        let a = self.pieces[lo].start;
        let last = self.pieces[hi - 1];
        let b = last.start + last.len;
        let psi = 0.5 * (a + b);
        let span = b - a;
        let h = if span < std::f64::consts::PI { 2.0 * (0.25 * span).sin() } else { f64::INFINITY };
        let u = Complex64::new(psi.cos(), psi.sin());
        let w: f64 = self.pieces[lo..hi].iter().map(|p| p.weight * p.len).sum();
        let id = self.nodes.len() as u32;
        self.nodes.push(Node { lo: lo as u32, hi: hi as u32, left: NONE, right: NONE, psi, u, h, w });
        self.coeffs.extend(std::iter::repeat(Complex64::new(0.0, 0.0)).take(ORDER + 1));
        let mu = if hi - lo <= LEAF {
            self.leaf_moments(lo, hi, psi)
        } else {
            let mid = lo + (hi - lo) / 2;
            let (l, ml) = self.build(lo, mid);
            let (r, mr) = self.build(mid, hi);
            self.nodes[id as usize].left = l;
            self.nodes[id as usize].right = r;
            let mut mu = vec![Complex64::new(0.0, 0.0); ORDER + 2];
            for (child, mc) in [(l, ml), (r, mr)] {
                let d = chord_vec(self.nodes[child as usize].psi, psi);
                shift_add(&mc, d, &mut mu);
            }
            mu
        };
        let base = id as usize * (ORDER + 1);
        for m in 0..=ORDER {
            let sign = if m % 2 == 0 { 2.0 } else { -2.0 };
            self.coeffs[base + m] = (u * mu[m] + mu[m + 1]) * sign;
        }
        (id, mu)
    }

    fn leaf_moments(&self, lo: usize, hi: usize, psi: f64) -> Vec<Complex64> {
        let (gx, gw) = gauss_legendre();
        let u = Complex64::new(psi.cos(), psi.sin());
        let mut mu = vec![Complex64::new(0.0, 0.0); ORDER + 2];
        for p in &self.pieces[lo..hi] {
            let half = 0.5 * p.len;
            let off = p.start - psi;
            for g in 0..GL_POINTS {
                let s = off + half * (1.0 + gx[g]);
                let hs = 0.5 * s;
                let e = u * Complex64::new(-2.0 * hs.sin() * hs.sin(), s.sin());
                let mut pw = Complex64::new(p.weight * half * gw[g], 0.0);
                for m in mu.iter_mut() {
                    *m += pw;
                    pw *= e;
                }
            }
        }
        mu
    }

    pub fn eval_checked(&self, z: &DiscPoint) -> Evaluation {
        let clamped = z.delta() < DELTA_CLAMP;
        let d = z.delta().max(DELTA_CLAMP);
        let theta = z.theta();
        if self.nodes.is_empty() {
            return Evaluation { value: 0.0, clamped };
        }
        let rho = 1.0 - d;
        let zc = Complex64::new(rho * theta.cos(), rho * theta.sin());
        let mut sum = 0.0;
        let mut stack: Vec<u32> = Vec::with_capacity(64);
        stack.push(0);
        while let Some(i) = stack.pop() {
            let n = &self.nodes[i as usize];
            if n.h.is_finite() {
                let dvec = n.u - zc;
                let dn = dvec.norm();
                if n.h < ETA * dn {
                    let q = dvec.inv();
                    let base = i as usize * (ORDER + 1);
                    let mut acc = Complex64::new(0.0, 0.0);
                    for m in (0..=ORDER).rev() {
                        acc = (acc + self.coeffs[base + m]) * q;
                    }
                    sum += (acc.re - n.w) / TWO_PI;
                    continue;
                }
            }
            if n.left == NONE {
                for p in &self.pieces[n.lo as usize..n.hi as usize] {
                    sum += p.weight * arc_measure_raw(theta, d, p.start, p.len);
                }
            } else {
                stack.push(n.left);
                stack.push(n.right);
            }
        }
        Evaluation { value: sum, clamped }
    }

    pub fn eval(&self, z: &DiscPoint) -> f64 {
        self.eval_checked(z).value
    }
}

/// `out_m += sum_k C(m,k) d^{m-k} mu_k`.
fn shift_add(mu: &[Complex64], d: Complex64, out: &mut [Complex64]) {
    let binom = binomials();
    let n = mu.len();
    let mut dp = vec![Complex64::new(1.0, 0.0); n];
    for j in 1..n {
        dp[j] = dp[j - 1] * d;
    }
    for m in 0..n {
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..=m {
            acc += mu[k] * dp[m - k] * binom[m][k];
        }
        out[m] += acc;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Arc, ArcUnion};
    use crate::harmonic::poisson_eval;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre();
        let s: f64 = w.iter().sum();
        assert!((s - 2.0).abs() < 1e-14);
        let m: f64 = x.iter().zip(w).map(|(x, w)| w * x.powi(22)).sum();
        assert!((m - 2.0 / 23.0).abs() < 1e-14);
    }

    #[test]
    fn flatten_merges_weights() {
        let mut f = BoundaryIndicator::new();
        f.add(0.5, ArcUnion::from_arc(&Arc::new(1.0, 2.0).unwrap()));
        f.add(0.25, ArcUnion::from_arc(&Arc::new(2.0, 2.0).unwrap()));
        let p = flatten(&f);
        assert_eq!(p.len(), 3);
        assert_eq!(p[1].weight, 0.75);
        assert!((p[1].start - 2.0).abs() < 1e-15 && (p[1].len - 1.0).abs() < 1e-15);
    }

    #[test]
    fn tree_matches_direct_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut f = BoundaryIndicator::new();
        for (j, n) in [(1, 3000usize), (2, 5000)] {
            let arcs: Vec<Arc> = (0..n)
                .map(|_| Arc::new(rng.gen_range(0.0..TWO_PI), rng.gen_range(1e-7..2e-4)).unwrap())
                .collect();
            f.add(0.5f64.powi(j), ArcUnion::normalize(&arcs));
        }
        let fp = FastPoisson::new(&f);
        let mut worst: f64 = 0.0;
        for _ in 0..400 {
            let theta = rng.gen_range(-3.0..3.0);
            let delta = 10f64.powf(rng.gen_range(-11.0..0.0));
            let z = DiscPoint::from_coords(theta, delta).unwrap();
            let a = fp.eval(&z);
            let b = poisson_eval(&f, &z);
            worst = worst.max((a - b).abs());
        }
        assert!(worst < 1e-10, "worst {worst}");
    }

    #[test]
    fn edge_distance() {
        let f = BoundaryIndicator::indicator(ArcUnion::from_arc(&Arc::new(1.0, 0.5).unwrap()));
        let fp = FastPoisson::new(&f);
        assert!((fp.distance_to_edge(1.2) - 0.2).abs() < 1e-15);
        assert!((fp.distance_to_edge(6.0) - (1.0 + TWO_PI - 6.0)).abs() < 1e-14);
    }
}

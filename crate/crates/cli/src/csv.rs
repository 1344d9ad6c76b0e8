//! Fixed-column CSV forms of the reports. Floats carry 17 significant digits,
//! angles are radians, missing values are empty cells.

use std::fmt::Write;

use boundary_core::adjacency::AdjacencyWitness;
use boundary_core::harmonic::TentConstantReport;
use boundary_core::regions::ClassificationReport;

use crate::{BuildRecord, PoissonRow, VerifyRecord};

pub fn float(x: f64) -> String {
    // no negative zero in tables
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

fn opt(x: Option<f64>) -> String {
    x.map(float).unwrap_or_default()
}

pub trait ToCsv {
    fn to_csv(&self) -> String;
}

impl ToCsv for ClassificationReport {
    fn to_csv(&self) -> String {
        let mut s = String::from("r,lower_tau,upper_tau,samples\n");
        for i in 0..self.radii.len() {
            let _ = writeln!(
                s,
                "{},{},{},{}",
                float(self.radii[i]),
                float(self.lower_tau[i]),
                float(self.upper_tau[i]),
                self.sample_counts[i]
            );
        }
        s
    }
}

impl ToCsv for AdjacencyWitness {
    fn to_csv(&self) -> String {
        let mut s = String::from("r,samples,witness_start,witness_len,side,chained\n");
        for row in &self.rows {
            let side = row.side.map(|x| format!("{x:?}").to_lowercase()).unwrap_or_default();
            let _ = writeln!(
                s,
                "{},{},{},{},{},{}",
                float(row.r),
                row.samples,
                opt(row.witness.map(|a| a.start())),
                opt(row.witness.map(|a| a.len())),
                side,
                row.chained
            );
        }
        s
    }
}

impl ToCsv for Vec<PoissonRow> {
    fn to_csv(&self) -> String {
        let mut s = String::from("x,y,u,v,h_re,h_im,clamped\n");
        for r in self {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{}",
                float(r.x),
                float(r.y),
                float(r.u),
                float(r.v),
                float(r.h_re),
                float(r.h_im),
                r.clamped
            );
        }
        s
    }
}

impl ToCsv for TentConstantReport {
    fn to_csv(&self) -> String {
        let mut s = String::from("theta,min,argmin_theta,argmin_delta,points\n");
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{},{},{},{},{}",
                float(r.theta),
                float(r.min),
                float(r.argmin_theta),
                float(r.argmin_delta),
                r.points
            );
        }
        s
    }
}

impl ToCsv for BuildRecord {
    fn to_csv(&self) -> String {
        let a = &self.artifact;
        let mut s = String::from("k,phi,v,gauge,threshold,o_measure,v_measure,v_components\n");
        for k in 0..a.phi.len() {
            let set = a.sets.get(k);
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{},{}",
                k + 1,
                a.phi[k],
                a.v[k],
                float(a.gauges[k]),
                float(a.thresholds[k]),
                float(a.o_measures[k]),
                opt(set.map(|x| x.measure)),
                set.map(|x| x.components.to_string()).unwrap_or_default()
            );
        }
        s
    }
}

impl ToCsv for VerifyRecord {
    fn to_csv(&self) -> String {
        let mut s = String::from("w,j,osc,bound,pass,tent_hits,fatou_osc\n");
        for r in &self.oscillation.rows {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{}",
                float(r.w),
                r.j,
                float(r.osc),
                float(r.bound),
                r.pass,
                r.tent_hits,
                opt(r.fatou_osc)
            );
        }
        s
    }
}

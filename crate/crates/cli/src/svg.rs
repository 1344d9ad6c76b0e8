//! Two-panel SVG: the sets `V_j` as rings around the circle, and the sampled
//! base region in log boundary coordinates.

use std::fmt::Write;

use boundary_core::counterexample::CounterexampleArtifact;
use boundary_core::geometry::ArcUnion;
use boundary_core::regions::RegionFamily;
use boundary_core::BoundaryPoint;

use crate::CliError;

const RES: f64 = 2e-3;
const COLORS: [&str; 6] = ["#1b4f72", "#2874a6", "#3498db", "#85c1e9", "#aed6f1", "#d6eaf8"];

/// Pieces merged across gaps below `RES` and widened to at least `RES`.
fn coarse(v: &ArcUnion) -> Vec<(f64, f64)> {
    let mut out: Vec<(f64, f64)> = Vec::new();
    for p in v.pieces() {
        let (s, e) = (p.start, p.start + p.len.max(RES));
        match out.last_mut() {
            Some(l) if s - l.1 < RES => l.1 = l.1.max(e),
            _ => out.push((s, e)),
        }
    }
    out
}

fn polar(cx: f64, cy: f64, r: f64, a: f64) -> (f64, f64) {
    (cx + r * a.cos(), cy - r * a.sin())
}

fn rings(out: &mut String, art: &CounterexampleArtifact) {
    let (cx, cy) = (320.0, 320.0);
    let _ = writeln!(out, r##"<circle cx="{cx}" cy="{cy}" r="200" fill="none" stroke="#888" stroke-width="1"/>"##);
    for (j, v) in art.sets.iter().enumerate() {
        let r = 212.0 + 14.0 * j as f64;
        let color = COLORS[j % COLORS.len()];
        let mut d = String::new();
        for (s, e) in coarse(v) {
            let (x0, y0) = polar(cx, cy, r, s);
            let (x1, y1) = polar(cx, cy, r, e);
            let large = u8::from(e - s > std::f64::consts::PI);
            let _ = write!(d, "M{x0:.3} {y0:.3}A{r} {r} 0 {large} 0 {x1:.3} {y1:.3}");
        }
        let _ = writeln!(
            out,
            r#"<path d="{d}" fill="none" stroke="{color}" stroke-width="10"><title>V_{}</title></path>"#,
            j + 1
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{cx}" y="{}" text-anchor="middle" font-size="14">V_1 (inner) .. V_{} (outer), s = {:.4}</text>"#,
        cy + 310.0,
        art.sets.len(),
        art.s
    );
}

fn region_panel(out: &mut String, family: &RegionFamily, budget: usize) -> Result<(), CliError> {
    let (x0, y0, w, h) = (700.0, 40.0, 520.0, 560.0);
    let (lx, ly) = ((-10.0f64, 0.0f64), (-20.0f64, 0.0f64));
    let sx = |t: f64| x0 + w * (t.log10().clamp(lx.0, lx.1) - lx.0) / (lx.1 - lx.0);
    let sy = |d: f64| y0 + h * (1.0 - (d.log10().clamp(ly.0, ly.1) - ly.0) / (ly.1 - ly.0));
    let _ = writeln!(out, r##"<rect x="{x0}" y="{y0}" width="{w}" height="{h}" fill="none" stroke="#888"/>"##);
    // tau is roughly delta/|theta| near the base point; draw tau = 1/2
    let _ = writeln!(
        out,
        r##"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="#c0392b" stroke-dasharray="4 3"/>"##,
        sx(1e-10),
        sy(0.5e-10),
        sx(1.0),
        sy(0.5)
    );
    let region = family.region_at(BoundaryPoint::new(0.0)).expect("rotation-invariant family");
    let sampler = region.sampler(budget)?;
    for s in sampler.pool() {
        let (t, d) = (s.z.theta(), s.z.delta());
        if t == 0.0 {
            continue;
        }
        let color = if t > 0.0 { "#1e8449" } else { "#7d3c98" };
        let _ = writeln!(out, r#"<circle cx="{:.3}" cy="{:.3}" r="1.5" fill="{color}"/>"#, sx(t.abs()), sy(d));
    }
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle" font-size="14">base region samples: log10|theta| vs log10 delta</text>"#,
        x0 + 0.5 * w,
        y0 + h + 30.0
    );
    Ok(())
}

pub fn figure(art: &CounterexampleArtifact, family: &RegionFamily, budget: usize) -> Result<String, CliError> {
    let mut out = String::new();
    out.push_str(r#"<svg xmlns="http://www.w3.org/2000/svg" width="1260" height="660" viewBox="0 0 1260 660">"#);
    out.push('\n');
    rings(&mut out, art);
    region_panel(&mut out, family, budget)?;
    out.push_str("</svg>\n");
    Ok(out)
}

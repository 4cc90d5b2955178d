//! Browser bindings for the planar slice of the engine.
//!
//! Three operations back the demo page: the zonotopal ball approximant at a
//! chosen resolution, the planar inequality report for a user polygon, and an
//! exact mixed volume of two zonotopes. Inputs are snapped to a rational grid
//! (multiples of 1/100), so everything downstream stays exact; floats appear
//! only in the JSON handed back for drawing.

use serde::Serialize;
use wasm_bindgen::prelude::wasm_bindgen;

use mvhr_core::ball::BallApprox;
use mvhr_core::body::{Body, VPolytope, Zonotope};
use mvhr_core::hrcheck::{check_even_sum, check_isoperimetric, check_odd_reflection};
use mvhr_core::mixedvol::{mixed_volume, mv_polarization, BodyList};
use mvhr_core::scalar::Scalar;
use mvhr_core::vector::Vector;

const DEMO_SEED: u64 = 0;
const MAX_RESOLUTION: usize = 96;

fn err_json(msg: impl std::fmt::Display) -> String {
    serde_json::json!({ "error": msg.to_string() }).to_string()
}

fn snap_points(points: &[(f64, f64)]) -> Vec<Vector> {
    points
        .iter()
        .map(|&(x, y)| {
            Vector::new(vec![
                Scalar::ratio((x * 100.0).round() as i64, 100),
                Scalar::ratio((y * 100.0).round() as i64, 100),
            ])
        })
        .collect()
}

/// Boundary polygon of a planar zonotope, counterclockwise, centered.
fn zonotope_boundary(z: &Zonotope) -> Vec<(f64, f64)> {
    let mut gens: Vec<Vector> = Vec::new();
    for g in z.generators() {
        // orient every generator into the upper half-plane
        let flip = g.coords()[1].is_negative()
            || (g.coords()[1].is_zero() && g.coords()[0].is_negative());
        gens.push(if flip { g.neg() } else { g.clone() });
    }
    // sort by angle: exact cross-product comparator
    gens.sort_by(|a, b| {
        let cross = &a.coords()[0] * &b.coords()[1] - &a.coords()[1] * &b.coords()[0];
        if cross.is_positive() {
            std::cmp::Ordering::Less
        } else if cross.is_negative() {
            std::cmp::Ordering::Greater
        } else {
            std::cmp::Ordering::Equal
        }
    });
    let mut corner = Vec::with_capacity(2);
    for i in 0..2 {
        let mut c = Scalar::zero();
        for g in &gens {
            c += &g.coords()[i];
        }
        corner.push(c * Scalar::ratio(-1, 2));
    }
    let mut verts = Vec::with_capacity(2 * gens.len());
    let mut cur = Vector::new(corner);
    verts.push((cur.coords()[0].to_f64(), cur.coords()[1].to_f64()));
    for g in &gens {
        cur = cur.add(g);
        verts.push((cur.coords()[0].to_f64(), cur.coords()[1].to_f64()));
    }
    for g in &gens {
        cur = cur.sub(g);
        verts.push((cur.coords()[0].to_f64(), cur.coords()[1].to_f64()));
    }
    verts
}

#[derive(Serialize)]
struct BallInfo {
    m: usize,
    vertices: Vec<(f64, f64)>,
    delta: String,
    delta_approx: f64,
    v1: String,
}

/// Ball approximant at resolution m: boundary polygon for drawing plus the
/// measured support deviation.
#[wasm_bindgen]
pub fn ball_polygon(m: u32) -> String {
    let m = (m as usize).clamp(2, MAX_RESOLUTION);
    let ball = match BallApprox::new(2, m, DEMO_SEED) {
        Ok(b) => b,
        Err(e) => return err_json(e),
    };
    let info = BallInfo {
        m,
        vertices: zonotope_boundary(&ball.zonotope),
        delta: ball.delta().to_string(),
        delta_approx: ball.delta().to_f64(),
        v1: mvhr_core::ball::ball_v1_target(2).to_string(),
    };
    serde_json::to_string(&info).expect("serializable")
}

#[derive(Serialize)]
struct InequalityReport {
    m: usize,
    odd_lhs: String,
    odd_rhs: String,
    odd_deficit: String,
    odd_deficit_approx: f64,
    even_lhs: String,
    even_rhs: String,
    even_deficit: String,
    even_deficit_approx: f64,
    even_tolerance_approx: f64,
    iso_verdict: String,
    iso_note: String,
    hull: Vec<(f64, f64)>,
}

/// Reflection and even-sum inequality deficits for a user polygon at ball
/// resolution m, plus the isoperimetric classification of its difference
/// body. Points arrive as a JSON array [[x, y], ...] and are snapped to the
/// 1/100 grid.
#[wasm_bindgen]
pub fn polygon_inequality_report(points_json: &str, m: u32) -> String {
    let raw: Vec<(f64, f64)> = match serde_json::from_str(points_json) {
        Ok(p) => p,
        Err(e) => return err_json(e),
    };
    if raw.len() < 3 {
        return err_json("need at least three points");
    }
    let m = (m as usize).clamp(4, MAX_RESOLUTION);
    let verts = snap_points(&raw);
    let poly = match VPolytope::new(2, verts) {
        Ok(p) => p,
        Err(e) => return err_json(e),
    };
    let body = Body::from(poly);
    let ball = match BallApprox::new(2, m, DEMO_SEED) {
        Ok(b) => b,
        Err(e) => return err_json(e),
    };
    let refs = [body.clone()];
    let odd = match check_odd_reflection(&refs, &ball, DEMO_SEED) {
        Ok(r) => r,
        Err(e) => return err_json(e),
    };
    let even = match check_even_sum(&refs, &ball, DEMO_SEED) {
        Ok(r) => r,
        Err(e) => return err_json(e),
    };
    let iso = match check_isoperimetric(&body, &ball, DEMO_SEED) {
        Ok(r) => r,
        Err(e) => return err_json(e),
    };

    let hull_pts = match &body {
        Body::VPolytope(p) => {
            let idx = mvhr_core::hull::hull2d(p.vertices());
            idx.iter()
                .map(|&i| {
                    (
                        p.vertices()[i].coords()[0].to_f64(),
                        p.vertices()[i].coords()[1].to_f64(),
                    )
                })
                .collect()
        }
        Body::Zonotope(_) => Vec::new(),
    };

    let report = InequalityReport {
        m,
        odd_lhs: odd.lhs.to_string(),
        odd_rhs: odd.rhs.to_string(),
        odd_deficit: odd.deficit.to_string(),
        odd_deficit_approx: odd.deficit.to_f64(),
        even_lhs: even.lhs.to_string(),
        even_rhs: even.rhs.to_string(),
        even_deficit: even.deficit.to_string(),
        even_deficit_approx: even.deficit.to_f64(),
        even_tolerance_approx: even.tolerance.to_f64(),
        iso_verdict: iso.verdict.as_str().to_string(),
        iso_note: iso.note.unwrap_or_default(),
        hull: hull_pts,
    };
    serde_json::to_string(&report).expect("serializable")
}

#[derive(Serialize)]
struct MixedVolumeDemo {
    value: String,
    decimal: String,
    cross_check: String,
    z1: Vec<(f64, f64)>,
    z2: Vec<(f64, f64)>,
}

/// Exact planar mixed volume V(Z1, Z2) of two zonotopes given by generator
/// lists [[x, y], ...] on the 1/100 grid, cross-checked by polarization.
#[wasm_bindgen]
pub fn mixed_volume_pair(gens1_json: &str, gens2_json: &str) -> String {
    let parse = |txt: &str| -> Result<Zonotope, String> {
        let raw: Vec<(f64, f64)> = serde_json::from_str(txt).map_err(|e| e.to_string())?;
        let gens: Vec<Vector> = snap_points(&raw)
            .into_iter()
            .filter(|v| !v.is_zero())
            .collect();
        if gens.is_empty() {
            return Err("need at least one nonzero generator".to_string());
        }
        Zonotope::new(2, gens).map_err(|e| e.to_string())
    };
    let z1 = match parse(gens1_json) {
        Ok(z) => z,
        Err(e) => return err_json(e),
    };
    let z2 = match parse(gens2_json) {
        Ok(z) => z,
        Err(e) => return err_json(e),
    };
    let bl = match BodyList::from_bodies(vec![z1.clone().into(), z2.clone().into()]) {
        Ok(b) => b,
        Err(e) => return err_json(e),
    };
    let value = match mixed_volume(&bl) {
        Ok(v) => v,
        Err(e) => return err_json(e),
    };
    let oracle = match mv_polarization(&bl) {
        Ok(v) => v,
        Err(e) => return err_json(e),
    };
    let demo = MixedVolumeDemo {
        decimal: value.to_decimal(12),
        cross_check: if value == oracle {
            "polarization agrees".to_string()
        } else {
            format!("ENGINE DISAGREEMENT: {oracle}")
        },
        value: value.to_string(),
        z1: zonotope_boundary(&z1),
        z2: zonotope_boundary(&z2),
    };
    serde_json::to_string(&demo).expect("serializable")
}

//! Exact convex-hull volumes in low dimension.
//!
//! Facets are found by brute force over point subsets (every supporting
//! hyperplane of the hull is spanned by some subset of points, and the
//! one-sidedness test is an exact rational comparison), then triangulated
//! recursively through a coordinate chart. This is robust against any
//! degeneracy - duplicate points, many coplanar points, lower-dimensional
//! input - at the price of an O(N^dim) facet scan, which is fine at the
//! point counts the engine produces (dim <= 5, small vertex sets).

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::{factorial, Scalar};
use crate::vector::Vector;

const FACET_SCAN_CAP: u128 = 4_000_000;

/// Volume of conv(points) in R^dim. Lower-dimensional input gives 0.
pub fn hull_volume(points: &[Vector], dim: usize) -> Result<Scalar> {
    let mut pts: Vec<Vector> = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.iter().any(|p| p.dim() != dim) {
        return Err(Error::dim("hull point dimension mismatch"));
    }
    if affine_rank(&pts) < dim {
        return Ok(Scalar::zero());
    }
    let simplices = hull_simplices(&pts, dim)?;
    let mut vol = Scalar::zero();
    for s in &simplices {
        let base = &pts[s[0]];
        let cols: Vec<Vec<Scalar>> = s[1..]
            .iter()
            .map(|&i| pts[i].sub(base).coords().to_vec())
            .collect();
        vol += &linalg::det_columns(&cols).abs();
    }
    Ok(vol / factorial(dim))
}

fn affine_rank(pts: &[Vector]) -> usize {
    if pts.len() <= 1 {
        return 0;
    }
    let base = &pts[0];
    let rows: Vec<Vec<Scalar>> = pts[1..]
        .iter()
        .map(|p| p.sub(base).coords().to_vec())
        .collect();
    linalg::rank(&rows)
}

/// Full-dimensional simplices (as point indices) tiling conv(pts).
/// Requires pts deduped and affinely full-dimensional.
fn hull_simplices(pts: &[Vector], dim: usize) -> Result<Vec<Vec<usize>>> {
    match dim {
        0 => Ok(vec![vec![0]]),
        1 => {
            let lo = (0..pts.len()).min_by(|&a, &b| pts[a].cmp(&pts[b])).unwrap();
            let hi = (0..pts.len()).max_by(|&a, &b| pts[a].cmp(&pts[b])).unwrap();
            Ok(vec![vec![lo, hi]])
        }
        2 => {
            let h = hull2d(pts);
            Ok((1..h.len() - 1).map(|i| vec![h[0], h[i], h[i + 1]]).collect())
        }
        _ => {
            let facets = enumerate_facets(pts, dim)?;
            // pts are sorted, so index 0 is the lexicographic minimum, a vertex.
            let apex = 0usize;
            let mut out = Vec::new();
            for (normal, offset, members) in &facets {
                let s = pts[apex].dot(&Vector::new(normal.clone()))? - offset.clone();
                if s.is_zero() {
                    continue; // apex lies on this facet: flat cone
                }
                let facet_pts: Vec<Vector> = members.iter().map(|&i| pts[i].clone()).collect();
                let chart_cols = chart_coordinates(&facet_pts, dim);
                let chart: Vec<Vector> = facet_pts
                    .iter()
                    .map(|p| Vector::new(chart_cols.iter().map(|&c| p.coords()[c].clone()).collect()))
                    .collect();
                for sub in hull_simplices(&chart, dim - 1)? {
                    let mut simplex = vec![apex];
                    simplex.extend(sub.into_iter().map(|k| members[k]));
                    out.push(simplex);
                }
            }
            Ok(out)
        }
    }
}

/// Supporting hyperplanes of the hull: (canonical integer normal, offset,
/// incident point indices).
#[allow(clippy::type_complexity)]
fn enumerate_facets(
    pts: &[Vector],
    dim: usize,
) -> Result<Vec<(Vec<Scalar>, Scalar, Vec<usize>)>> {
    let n = pts.len();
    let mut work: u128 = 1;
    for i in 0..dim {
        work = work.saturating_mul((n - i) as u128);
    }
    if work > FACET_SCAN_CAP {
        return Err(Error::unsupported(format!(
            "hull facet scan too large: {n} points in dim {dim}"
        )));
    }

    let mut planes: BTreeMap<(Vec<Scalar>, Scalar), Vec<usize>> = BTreeMap::new();
    let mut subset = vec![0usize; dim];
    enumerate_subsets(n, dim, &mut subset, 0, 0, &mut |s: &[usize]| {
        let base = &pts[s[0]];
        let rows: Vec<Vec<Scalar>> = s[1..]
            .iter()
            .map(|&i| pts[i].sub(base).coords().to_vec())
            .collect();
        let kernel = linalg::kernel_basis(&rows, dim);
        if kernel.len() != 1 {
            return; // subset does not span a hyperplane
        }
        let normal = canonical_direction(&kernel[0]);
        let nvec = Vector::new(normal.clone());
        let offset = base.dot(&nvec).expect("dims match");
        if planes.contains_key(&(normal.clone(), offset.clone())) {
            return;
        }
        let mut saw_pos = false;
        let mut saw_neg = false;
        for p in pts {
            let side = p.dot(&nvec).expect("dims match") - offset.clone();
            if side.is_positive() {
                saw_pos = true;
            } else if side.is_negative() {
                saw_neg = true;
            }
            if saw_pos && saw_neg {
                return;
            }
        }
        let members: Vec<usize> = (0..pts.len())
            .filter(|&i| pts[i].dot(&nvec).expect("dims match") == offset)
            .collect();
        planes.insert((normal, offset), members);
    });

    Ok(planes
        .into_iter()
        .map(|((normal, offset), members)| (normal, offset, members))
        .collect())
}

fn enumerate_subsets(
    n: usize,
    k: usize,
    subset: &mut Vec<usize>,
    depth: usize,
    start: usize,
    f: &mut impl FnMut(&[usize]),
) {
    if depth == k {
        f(subset);
        return;
    }
    for i in start..=(n - (k - depth)) {
        subset[depth] = i;
        enumerate_subsets(n, k, subset, depth + 1, i + 1, f);
    }
}

/// Scales a rational direction to a primitive integer vector with the first
/// nonzero coordinate positive.
pub fn canonical_direction(v: &[Scalar]) -> Vec<Scalar> {
    linalg::primitive_integer_direction(v)
        .into_iter()
        .map(Scalar::from_bigint)
        .collect()
}

/// Picks dim-1 coordinate axes on which the facet's direction space projects
/// bijectively (the pivot columns of its direction matrix).
fn chart_coordinates(facet_pts: &[Vector], dim: usize) -> Vec<usize> {
    let base = &facet_pts[0];
    let rows: Vec<Vec<Scalar>> = facet_pts[1..]
        .iter()
        .map(|p| p.sub(base).coords().to_vec())
        .collect();
    let cols = linalg::pivot_columns(&rows);
    debug_assert_eq!(cols.len(), dim - 1);
    cols
}

/// Convex hull of 2D points (deduped): indices in counterclockwise order,
/// collinear boundary points dropped. Monotone chain with exact orientation.
pub fn hull2d(pts: &[Vector]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..pts.len()).collect();
    idx.sort_by(|&a, &b| pts[a].cmp(&pts[b]));
    if idx.len() <= 2 {
        return idx;
    }
    let cross = |o: usize, a: usize, b: usize| -> Scalar {
        let oa = pts[a].sub(&pts[o]);
        let ob = pts[b].sub(&pts[o]);
        &oa.coords()[0] * &ob.coords()[1] - &oa.coords()[1] * &ob.coords()[0]
    };
    let mut lower: Vec<usize> = Vec::new();
    for &p in &idx {
        while lower.len() >= 2
            && !cross(lower[lower.len() - 2], lower[lower.len() - 1], p).is_positive()
        {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<usize> = Vec::new();
    for &p in idx.iter().rev() {
        while upper.len() >= 2
            && !cross(upper[upper.len() - 2], upper[upper.len() - 1], p).is_positive()
        {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

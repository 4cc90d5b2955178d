//! Exact mixed volumes.
//!
//! Normalization: V(K, ..., K) = vol(K). Two independent routes are provided.
//!
//! * `mv_zonotope` - the fast path for zonotope lists. By multilinearity the
//!   mixed volume of segments [0,v_1], ..., [0,v_d] is |det(v_1 ... v_d)|/d!,
//!   so the engine enumerates one generator per slot: unordered subsets per
//!   body (repeats give zero determinant) weighted by the count of orderings,
//!   with an incremental elimination state that prunes any branch whose chosen
//!   columns are already dependent, and the top-level index range partitioned
//!   across workers. Exact summation makes the result independent of the
//!   worker count.
//! * `mv_polarization` - the inclusion-exclusion oracle
//!   V(K_1,...,K_d) = (1/d!) sum_{S != {}} (-1)^{d-|S|} vol(sum_{i in S} K_i),
//!   kept deliberately simple and separate from the enumeration machinery.
//!
//! `mixed_volume` dispatches: zonotope-only lists go to `mv_zonotope`; lists
//! containing polytopes (ambient dimension <= 5) expand zonotope slots into
//! segments, eliminate segments one at a time by an exact shear-projection,
//! and finish with polarization over convex-hull volumes in the base
//! dimension.

use std::cell::Cell;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::body::{Body, Zonotope};
use crate::error::{Error, Result};
use crate::hull;
use crate::linalg::{det_columns, Elimination, IntElim};
use crate::scalar::{factorial, Scalar};
use crate::vector::Vector;

/// Polytope inputs are capped to this ambient dimension (hull-volume guard).
pub const POLYTOPE_DIM_CAP: usize = 5;

thread_local! {
    static WORKER_OVERRIDE: Cell<usize> = const { Cell::new(0) };
}

/// Runs `f` with the enumeration worker count pinned (0 = auto). The result
/// of every engine call is bitwise identical for any worker count; this only
/// controls parallelism.
pub fn with_workers<R>(workers: usize, f: impl FnOnce() -> R) -> R {
    WORKER_OVERRIDE.with(|c| {
        let old = c.replace(workers);
        let out = f();
        c.set(old);
        out
    })
}

fn effective_workers() -> usize {
    let w = WORKER_OVERRIDE.with(Cell::get);
    if w > 0 {
        w
    } else {
        std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
    }
}

/// Argument tuple of a mixed volume: bodies with multiplicities summing to
/// the ambient dimension. Equal bodies are merged on construction.
#[derive(Clone, Debug)]
pub struct BodyList {
    dim: usize,
    entries: Vec<(Body, usize)>,
}

impl BodyList {
    pub fn new(entries: Vec<(Body, usize)>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::input("empty body list"));
        }
        let dim = entries[0].0.dim();
        let mut total = 0usize;
        for (b, m) in &entries {
            if b.dim() != dim {
                return Err(Error::dim("body list mixes ambient dimensions"));
            }
            if *m == 0 {
                return Err(Error::input("zero multiplicity in body list"));
            }
            total += m;
        }
        if total != dim {
            return Err(Error::input(format!(
                "multiplicities sum to {total}, ambient dimension is {dim}"
            )));
        }
        let mut entries = entries;
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        let mut merged: Vec<(Body, usize)> = Vec::with_capacity(entries.len());
        for (b, m) in entries {
            match merged.last_mut() {
                Some((prev, pm)) if *prev == b => *pm += m,
                _ => merged.push((b, m)),
            }
        }
        Ok(BodyList { dim, entries: merged })
    }

    /// One slot per body, duplicates merged.
    pub fn from_bodies(bodies: Vec<Body>) -> Result<Self> {
        BodyList::new(bodies.into_iter().map(|b| (b, 1)).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[(Body, usize)] {
        &self.entries
    }

    pub fn all_zonotopes(&self) -> bool {
        self.entries.iter().all(|(b, _)| b.is_zonotope())
    }
}

/// One zonotope prepared for enumeration: every generator is cleared to a
/// primitive integer column with its rational length factored out, so the
/// incremental elimination works on small integers and each leaf multiplies
/// the product of per-column scales back in.
struct PreparedBody {
    cols: Vec<Vec<BigInt>>,
    scales: Vec<Scalar>,
    mult: usize,
}

fn prepare_body(z: &Zonotope, mult: usize) -> PreparedBody {
    let mut cols = Vec::with_capacity(z.generators().len());
    let mut scales = Vec::with_capacity(z.generators().len());
    for g in z.generators() {
        let d = crate::linalg::primitive_integer_direction(g.coords());
        let k = d.iter().position(|c| !c.is_zero()).expect("nonzero generator");
        let q = (&g.coords()[k] / &Scalar::from_bigint(d[k].clone())).abs();
        cols.push(d);
        scales.push(q);
    }
    PreparedBody { cols, scales, mult }
}

/// Mixed volume of a zonotope list via pruned generator enumeration.
pub fn mv_zonotope(bl: &BodyList) -> Result<Scalar> {
    if !bl.all_zonotopes() {
        return Err(Error::input("mv_zonotope requires zonotope bodies"));
    }
    let dim = bl.dim();
    // ascending generator count maximizes early pruning
    let mut bodies: Vec<(&Zonotope, usize)> = bl
        .entries()
        .iter()
        .map(|(b, m)| (b.as_zonotope().expect("checked"), *m))
        .collect();
    bodies.sort_by_key(|(z, _)| z.generators().len());
    for (z, m) in &bodies {
        if z.generators().len() < *m {
            return Ok(Scalar::zero()); // not enough independent segments
        }
    }

    let mut prefactor = factorial(dim).recip();
    for (_, m) in &bodies {
        prefactor *= &factorial(*m);
    }

    let prepared: Vec<PreparedBody> = bodies.iter().map(|(z, m)| prepare_body(z, *m)).collect();
    Ok(prefactor * enumerate_det_sum(&prepared, dim))
}

fn enumerate_det_sum(bodies: &[PreparedBody], dim: usize) -> Scalar {
    let first = &bodies[0];
    let tasks: Vec<usize> = (0..=(first.cols.len() - first.mult)).collect();
    let workers = effective_workers().min(tasks.len()).max(1);

    let run_task = |start: usize| -> Scalar {
        let mut acc = Scalar::zero();
        let mut state = IntElim::new(dim);
        if state.push(&first.cols[start]) {
            let q = &first.scales[start];
            descend(
                bodies,
                0,
                start + 1,
                first.mult - 1,
                &mut state,
                q.numer(),
                q.denom(),
                &mut acc,
            );
            state.pop();
        }
        acc
    };

    if workers == 1 {
        let mut total = Scalar::zero();
        for &t in &tasks {
            total += &run_task(t);
        }
        return total;
    }

    let chunk = tasks.len().div_ceil(workers);
    let partials: Vec<Scalar> = std::thread::scope(|scope| {
        let handles: Vec<_> = tasks
            .chunks(chunk)
            .map(|slice| {
                scope.spawn(move || {
                    let mut acc = Scalar::zero();
                    for &t in slice {
                        acc += &run_task(t);
                    }
                    acc
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    });
    let mut total = Scalar::zero();
    for p in &partials {
        total += p;
    }
    total
}

// The per-column rational scales ride along as an unreduced numerator /
// denominator pair; a single reduction happens per leaf.
#[allow(clippy::too_many_arguments)]
fn descend(
    bodies: &[PreparedBody],
    body_idx: usize,
    next: usize,
    left: usize,
    state: &mut IntElim,
    scale_num: &BigInt,
    scale_den: &BigInt,
    acc: &mut Scalar,
) {
    if left == 0 {
        match bodies.get(body_idx + 1) {
            None => {
                let num = state.last_pivot_abs() * scale_num;
                *acc += &Scalar::from_big_ratio(num, scale_den.clone())
                    .expect("nonzero denominator");
            }
            Some(b) => descend(
                bodies,
                body_idx + 1,
                0,
                b.mult,
                state,
                scale_num,
                scale_den,
                acc,
            ),
        }
        return;
    }
    let body = &bodies[body_idx];
    for j in next..=(body.cols.len() - left) {
        if state.push(&body.cols[j]) {
            let q = &body.scales[j];
            let num = scale_num * q.numer();
            let den = scale_den * q.denom();
            descend(bodies, body_idx, j + 1, left - 1, state, &num, &den, acc);
            state.pop();
        }
    }
}

/// Mixed volume of any body list. Zonotope-only lists take the enumeration
/// path; lists containing polytopes are limited to ambient dimension <= 5.
pub fn mixed_volume(bl: &BodyList) -> Result<Scalar> {
    if bl.all_zonotopes() {
        return mv_zonotope(bl);
    }
    let dim = bl.dim();
    if dim > POLYTOPE_DIM_CAP {
        return Err(Error::unsupported(format!(
            "polytope mixed volumes are capped at dimension {POLYTOPE_DIM_CAP} (got {dim})"
        )));
    }

    let mut polys: Vec<Vec<Vector>> = Vec::new();
    let mut zbodies: Vec<(&Zonotope, usize)> = Vec::new();
    let mut weight = Scalar::one();
    for (b, m) in bl.entries() {
        match b {
            Body::VPolytope(p) => {
                for _ in 0..*m {
                    polys.push(p.vertices().to_vec());
                }
            }
            Body::Zonotope(z) => {
                zbodies.push((z, *m));
                weight *= &factorial(*m);
            }
        }
    }
    for (z, m) in &zbodies {
        if z.generators().len() < *m {
            return Ok(Scalar::zero());
        }
    }

    let mut total = Scalar::zero();
    let mut segs: Vec<Vector> = Vec::with_capacity(dim - polys.len());
    sum_over_segment_choices(&zbodies, 0, 0, &mut segs, &mut |segs| {
        let v = poly_seg_mv(&polys, segs, dim)?;
        total += &v;
        Ok(())
    })?;
    Ok(weight * total)
}

fn sum_over_segment_choices<'a>(
    zbodies: &[(&'a Zonotope, usize)],
    body_idx: usize,
    next: usize,
    segs: &mut Vec<Vector>,
    f: &mut impl FnMut(&[Vector]) -> Result<()>,
) -> Result<()> {
    if body_idx == zbodies.len() {
        return f(segs);
    }
    let (z, m) = zbodies[body_idx];
    let picked_so_far = segs.len()
        - zbodies[..body_idx]
            .iter()
            .map(|(_, mm)| mm)
            .sum::<usize>();
    let left = m - picked_so_far;
    if left == 0 {
        return sum_over_segment_choices(zbodies, body_idx + 1, 0, segs, f);
    }
    let gens = z.generators();
    for j in next..=(gens.len() - left) {
        segs.push(gens[j].clone());
        sum_over_segment_choices(zbodies, body_idx, j + 1, segs, f)?;
        segs.pop();
    }
    Ok(())
}

/// Mixed volume of polytopes and segments, by eliminating segments one at a
/// time with an exact shear-projection and polarizing the polytope base case.
fn poly_seg_mv(polys: &[Vec<Vector>], segs: &[Vector], dim: usize) -> Result<Scalar> {
    debug_assert_eq!(polys.len() + segs.len(), dim);
    if polys.is_empty() {
        let cols: Vec<Vec<Scalar>> = segs.iter().map(|s| s.coords().to_vec()).collect();
        return Ok(det_columns(&cols).abs() / factorial(dim));
    }
    if let Some((w, rest)) = segs.split_last() {
        let Some(j) = (0..dim).find(|&i| !w.coords()[i].is_zero()) else {
            return Ok(Scalar::zero()); // degenerate segment: point
        };
        let wj = w.coords()[j].clone();
        // x -> (x_i - (w_i/w_j) x_j) for i != j collapses [0,w] to a point and
        // has unit Jacobian relative to dropping coordinate j.
        let ratios: Vec<Scalar> = (0..dim)
            .filter(|&i| i != j)
            .map(|i| &w.coords()[i] / &wj)
            .collect();
        let project = |x: &Vector| -> Vector {
            let xj = &x.coords()[j];
            let coords: Vec<Scalar> = (0..dim)
                .filter(|&i| i != j)
                .zip(&ratios)
                .map(|(i, r)| &x.coords()[i] - &(r * xj))
                .collect();
            Vector::new(coords)
        };
        let polys2: Vec<Vec<Vector>> = polys
            .iter()
            .map(|vs| vs.iter().map(&project).collect())
            .collect();
        let rest2: Vec<Vector> = rest.iter().map(&project).collect();
        let inner = poly_seg_mv(&polys2, &rest2, dim - 1)?;
        return Ok(inner * wj.abs() / Scalar::from_int(dim as i64));
    }
    // pure polytopes in their own dimension: inclusion-exclusion
    let k = polys.len();
    debug_assert_eq!(k, dim);
    let mut total = Scalar::zero();
    for mask in 1u32..(1 << k) {
        let mut sum_verts: Option<Vec<Vector>> = None;
        for (i, p) in polys.iter().enumerate() {
            if mask & (1 << i) == 0 {
                continue;
            }
            sum_verts = Some(match sum_verts {
                None => p.clone(),
                Some(acc) => vertex_sum(&acc, p),
            });
        }
        let vol = hull::hull_volume(&sum_verts.expect("mask nonzero"), dim)?;
        if (k - mask.count_ones() as usize) % 2 == 0 {
            total += &vol;
        } else {
            total -= &vol;
        }
    }
    Ok(total / factorial(dim))
}

fn vertex_sum(a: &[Vector], b: &[Vector]) -> Vec<Vector> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            out.push(x.add(y));
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Independent oracle: inclusion-exclusion polarization over volumes of
/// Minkowski sums. Zonotope-only lists work in any dimension (volumes via a
/// plain subset-determinant sum); lists with polytopes are capped at
/// dimension 5 and expand zonotope vertices, so they only suit small inputs.
pub fn mv_polarization(bl: &BodyList) -> Result<Scalar> {
    let dim = bl.dim();
    let mut slots: Vec<&Body> = Vec::with_capacity(dim);
    for (b, m) in bl.entries() {
        for _ in 0..*m {
            slots.push(b);
        }
    }
    let all_zono = bl.all_zonotopes();
    if !all_zono && dim > POLYTOPE_DIM_CAP {
        return Err(Error::unsupported(format!(
            "polarization with polytopes is capped at dimension {POLYTOPE_DIM_CAP}"
        )));
    }

    let mut total = Scalar::zero();
    for mask in 1u32..(1 << dim) {
        let chosen: Vec<&Body> = (0..dim).filter(|i| mask & (1 << i) != 0).map(|i| slots[i]).collect();
        let vol = if all_zono {
            let mut gens: Vec<Vector> = Vec::new();
            for b in &chosen {
                gens.extend(b.as_zonotope().expect("zonotope").generators().iter().cloned());
            }
            zonotope_volume_subset_sum(&gens, dim)
        } else {
            let mut verts: Option<Vec<Vector>> = None;
            for b in &chosen {
                let vs = b.vertex_list(14)?;
                verts = Some(match verts {
                    None => vs,
                    Some(acc) => vertex_sum(&acc, &vs),
                });
            }
            hull::hull_volume(&verts.expect("mask nonzero"), dim)?
        };
        if (dim - mask.count_ones() as usize) % 2 == 0 {
            total += &vol;
        } else {
            total -= &vol;
        }
    }
    Ok(total / factorial(dim))
}

/// vol(sum_k [0, g_k]) = sum over d-subsets |det|; plain, no pruning.
fn zonotope_volume_subset_sum(gens: &[Vector], dim: usize) -> Scalar {
    let mut total = Scalar::zero();
    let mut chosen: Vec<usize> = Vec::with_capacity(dim);
    fn rec(
        gens: &[Vector],
        dim: usize,
        start: usize,
        chosen: &mut Vec<usize>,
        total: &mut Scalar,
    ) {
        if chosen.len() == dim {
            let cols: Vec<Vec<Scalar>> = chosen.iter().map(|&i| gens[i].coords().to_vec()).collect();
            *total += &det_columns(&cols).abs();
            return;
        }
        let left = dim - chosen.len();
        if gens.len() < start + left {
            return;
        }
        for j in start..=(gens.len() - left) {
            chosen.push(j);
            rec(gens, dim, j + 1, chosen, total);
            chosen.pop();
        }
    }
    rec(gens, dim, 0, &mut chosen, &mut total);
    total
}

/// Exact Lebesgue volume of a body.
pub fn volume(b: &Body) -> Result<Scalar> {
    match b {
        Body::Zonotope(z) => {
            let bl = BodyList::new(vec![(b.clone(), z.dim())])?;
            mv_zonotope(&bl)
        }
        Body::VPolytope(p) => {
            if p.dim() > POLYTOPE_DIM_CAP {
                return Err(Error::unsupported(format!(
                    "polytope volume is capped at dimension {POLYTOPE_DIM_CAP}"
                )));
            }
            hull::hull_volume(p.vertices(), p.dim())
        }
    }
}

/// Mixed volume of a flat body slice (each slot multiplicity one).
pub fn mv_of(bodies: &[Body]) -> Result<Scalar> {
    mixed_volume(&BodyList::from_bodies(bodies.to_vec())?)
}

/// First intrinsic volume of a zonotope: the sum of generator lengths.
/// Exact when every generator norm is rational, otherwise a certified
/// enclosure of relative width <= 1e-15.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum V1 {
    Exact(Scalar),
    Enclosure { lo: Scalar, hi: Scalar },
}

impl V1 {
    pub fn lo(&self) -> &Scalar {
        match self {
            V1::Exact(v) => v,
            V1::Enclosure { lo, .. } => lo,
        }
    }

    pub fn hi(&self) -> &Scalar {
        match self {
            V1::Exact(v) => v,
            V1::Enclosure { hi, .. } => hi,
        }
    }
}

pub fn intrinsic_v1(z: &Zonotope) -> V1 {
    let mut exact = Some(Scalar::zero());
    let mut lo = Scalar::zero();
    let mut hi = Scalar::zero();
    for g in z.generators() {
        let nsq = g.norm_sq();
        match nsq.sqrt_exact() {
            Some(r) => {
                if let Some(e) = exact.as_mut() {
                    *e += &r;
                }
                lo += &r;
                hi += &r;
            }
            None => {
                exact = None;
                let (l, h) = nsq.sqrt_enclosure(15);
                lo += &l;
                hi += &h;
            }
        }
    }
    match exact {
        Some(v) => V1::Exact(v),
        None => V1::Enclosure { lo, hi },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::body::VPolytope;
    use crate::rng::Rng;

    fn zono(dim: usize, gens: &[&[i64]]) -> Body {
        Zonotope::from_int_generators(dim, gens).unwrap().into()
    }

    fn seg(coords: &[i64]) -> Body {
        zono(coords.len(), &[coords])
    }

    #[test]
    fn two_unit_segments() {
        let bl = BodyList::from_bodies(vec![seg(&[1, 0]), seg(&[0, 1])]).unwrap();
        assert_eq!(mv_zonotope(&bl).unwrap(), Scalar::ratio(1, 2));
        assert_eq!(mv_polarization(&bl).unwrap(), Scalar::ratio(1, 2));
    }

    #[test]
    fn square_repeated_is_its_volume() {
        let sq = zono(2, &[&[1, 0], &[0, 1]]);
        let bl = BodyList::new(vec![(sq, 2)]).unwrap();
        assert_eq!(mv_zonotope(&bl).unwrap(), Scalar::one());
        assert_eq!(mv_polarization(&bl).unwrap(), Scalar::one());
    }

    #[test]
    fn square_against_diagonal_segment() {
        let sq = zono(2, &[&[1, 0], &[0, 1]]);
        let bl = BodyList::from_bodies(vec![sq, seg(&[1, 1])]).unwrap();
        // polarization oracle: (vol(C+D) - vol(C) - vol(D)) / 2 = (3 - 1 - 0)/2
        assert_eq!(mv_polarization(&bl).unwrap(), Scalar::one());
        assert_eq!(mv_zonotope(&bl).unwrap(), Scalar::one());
    }

    #[test]
    fn volumes() {
        let cube = zono(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(volume(&cube).unwrap(), Scalar::one());
        assert_eq!(volume(&seg(&[5, 2])).unwrap(), Scalar::zero());
        let z = zono(2, &[&[1, 0], &[0, 1], &[1, 1]]);
        assert_eq!(volume(&z).unwrap(), Scalar::from_int(3));
        // cross-check against the triangulated hull of its vertex set
        let verts = z.as_zonotope().unwrap().vertices(8).unwrap();
        assert_eq!(hull::hull_volume(&verts, 2).unwrap(), Scalar::from_int(3));
    }

    #[test]
    fn simplex_against_its_reflection() {
        let t: Body = VPolytope::standard_simplex(2).into();
        let bl = BodyList::from_bodies(vec![t.clone(), t.negate()]).unwrap();
        assert_eq!(mixed_volume(&bl).unwrap(), Scalar::one());
        assert_eq!(mv_polarization(&bl).unwrap(), Scalar::one());
    }

    #[test]
    fn polytope_volume_term() {
        let t: Body = VPolytope::standard_simplex(2).into();
        assert_eq!(volume(&t).unwrap(), Scalar::ratio(1, 2));
    }

    #[test]
    fn degenerate_lists_give_zero() {
        // parallel segments
        let bl = BodyList::from_bodies(vec![seg(&[1, 1]), seg(&[2, 2])]).unwrap();
        assert_eq!(mv_zonotope(&bl).unwrap(), Scalar::zero());
        // flat zonotope volume
        let flat = zono(3, &[&[1, 0, 0], &[0, 1, 0], &[1, 1, 0]]);
        assert_eq!(volume(&flat).unwrap(), Scalar::zero());
    }

    #[test]
    fn mixed_list_with_polytope_and_zonotope() {
        // V(T, [0,e1]) in R^2: sweep of the triangle's shadow; polarization
        // cross-check on the same instance.
        let t: Body = VPolytope::standard_simplex(2).into();
        let bl = BodyList::from_bodies(vec![t, seg(&[1, 0])]).unwrap();
        let a = mixed_volume(&bl).unwrap();
        let b = mv_polarization(&bl).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, Scalar::ratio(1, 2));
    }

    #[test]
    fn non_zonotope_input_rejected_by_fast_path() {
        let t: Body = VPolytope::standard_simplex(2).into();
        let bl = BodyList::from_bodies(vec![t.clone(), t]).unwrap();
        assert!(mv_zonotope(&bl).is_err());
    }

    #[test]
    fn multiplicity_mismatch_rejected() {
        let sq = zono(2, &[&[1, 0], &[0, 1]]);
        assert!(BodyList::new(vec![(sq, 3)]).is_err());
    }

    #[test]
    fn engines_agree_on_random_lists() {
        let mut rng = Rng::new(2024);
        for _ in 0..25 {
            let dim = rng.int_in(2, 4) as usize;
            let mut entries: Vec<(Body, usize)> = Vec::new();
            let mut left = dim;
            while left > 0 {
                let m = rng.int_in(1, left as i64) as usize;
                let k = rng.int_in(m as i64, m as i64 + 2) as usize;
                let mut gens = Vec::new();
                for _ in 0..k {
                    loop {
                        let v: Vec<i64> = (0..dim).map(|_| rng.int_in(-3, 3)).collect();
                        if v.iter().any(|&c| c != 0) {
                            gens.push(Vector::from_ints(&v));
                            break;
                        }
                    }
                }
                entries.push((Zonotope::new(dim, gens).unwrap().into(), m));
                left -= m;
            }
            let bl = BodyList::new(entries).unwrap();
            assert_eq!(mv_zonotope(&bl).unwrap(), mv_polarization(&bl).unwrap());
        }
    }

    #[test]
    fn rational_generators_take_both_paths() {
        // small denominators: integer path
        let z1 = Zonotope::new(
            2,
            vec![
                Vector::new(vec![Scalar::ratio(1, 3), Scalar::ratio(1, 2)]),
                Vector::new(vec![Scalar::ratio(-2, 5), Scalar::one()]),
            ],
        )
        .unwrap();
        let bl = BodyList::new(vec![(z1.into(), 2)]).unwrap();
        assert_eq!(mv_zonotope(&bl).unwrap(), mv_polarization(&bl).unwrap());

        // huge denominator: the per-generator scales must stay exact
        let big = Scalar::from_big_ratio(BigInt::from(1), BigInt::from(1) << 600).unwrap();
        let g1 = Vector::new(vec![Scalar::one() + big.clone(), Scalar::zero()]);
        let g2 = Vector::new(vec![Scalar::zero(), Scalar::one() - big]);
        let z2 = Zonotope::new(2, vec![g1, g2]).unwrap();
        let bl2 = BodyList::new(vec![(z2.into(), 2)]).unwrap();
        assert_eq!(mv_zonotope(&bl2).unwrap(), mv_polarization(&bl2).unwrap());
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let mut rng = Rng::new(7);
        let mut gens = Vec::new();
        for _ in 0..9 {
            loop {
                let v: Vec<i64> = (0..4).map(|_| rng.int_in(-2, 2)).collect();
                if v.iter().any(|&c| c != 0) {
                    gens.push(Vector::from_ints(&v));
                    break;
                }
            }
        }
        let z: Body = Zonotope::new(4, gens).unwrap().into();
        let bl = BodyList::new(vec![(z, 4)]).unwrap();
        let a = with_workers(1, || mv_zonotope(&bl).unwrap());
        let b = with_workers(8, || mv_zonotope(&bl).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn intrinsic_v1_examples() {
        let s = Zonotope::from_int_generators(2, &[&[3, 4]]).unwrap();
        assert_eq!(intrinsic_v1(&s), V1::Exact(Scalar::from_int(5)));
        let cube = Zonotope::unit_cube(3);
        assert_eq!(intrinsic_v1(&cube), V1::Exact(Scalar::from_int(3)));
        // irrational norm: enclosure brackets sqrt(2) + 5
        let z = Zonotope::from_int_generators(2, &[&[1, 1], &[3, 4]]).unwrap();
        match intrinsic_v1(&z) {
            V1::Exact(_) => panic!("expected enclosure"),
            V1::Enclosure { lo, hi } => {
                assert!(lo < hi);
                let width = &hi - &lo;
                assert!(width < Scalar::ratio(1, 1_000_000_000));
                // sqrt(2) ~ 1.41421356...
                assert!(lo > Scalar::ratio(641, 100));
                assert!(hi < Scalar::ratio(642, 100));
            }
        }
    }

    #[test]
    fn v1_additive_under_minkowski_sum() {
        let a = Zonotope::from_int_generators(2, &[&[3, 4]]).unwrap();
        let b = Zonotope::from_int_generators(2, &[&[5, 12], &[0, 2]]).unwrap();
        let s = a.minkowski_sum(&b).unwrap();
        assert_eq!(intrinsic_v1(&s), V1::Exact(Scalar::from_int(20)));
    }
}

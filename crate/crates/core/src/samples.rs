//! Seeded construction of random test bodies and instance families.

use crate::body::{VPolytope, Zonotope};
use crate::error::Result;
use crate::mixedvol::{volume, BodyList};
use crate::rng::Rng;
use crate::scalar::Scalar;
use crate::vector::Vector;

fn random_nonzero_vector(rng: &mut Rng, dim: usize, bound: i64) -> Vector {
    loop {
        let v: Vec<i64> = (0..dim).map(|_| rng.int_in(-bound, bound)).collect();
        if v.iter().any(|&c| c != 0) {
            return Vector::from_ints(&v);
        }
    }
}

/// Zonotope with exactly `gens` nonzero integer generators in [-bound, bound].
pub fn random_zonotope(rng: &mut Rng, dim: usize, gens: usize, bound: i64) -> Zonotope {
    let vectors = (0..gens.max(1))
        .map(|_| random_nonzero_vector(rng, dim, bound))
        .collect();
    Zonotope::new(dim, vectors).expect("nonzero generators")
}

/// Zonotope with positive volume (retries the seeded stream).
pub fn random_fulldim_zonotope(rng: &mut Rng, dim: usize, gens: usize, bound: i64) -> Zonotope {
    loop {
        let z = random_zonotope(rng, dim, gens.max(dim), bound);
        if volume(&z.clone().into())
            .expect("zonotope volume")
            .is_positive()
        {
            return z;
        }
    }
}

/// Polytope over a few random integer vertices (planar non-symmetric stand-in).
pub fn random_polytope(rng: &mut Rng, dim: usize, verts: usize, bound: i64) -> VPolytope {
    loop {
        let vs: Vec<Vector> = (0..verts.max(dim + 1))
            .map(|_| {
                Vector::new(
                    (0..dim)
                        .map(|_| Scalar::from_int(rng.int_in(-bound, bound)))
                        .collect(),
                )
            })
            .collect();
        let p = VPolytope::new(dim, vs).expect("vertices valid");
        if p.vertices().len() > dim {
            return p;
        }
    }
}

/// Random mixed-volume instance for the engine-equivalence suite: ambient
/// dimension in [2, max_dim], small integer zonotopes, bounded generator
/// budget.
pub fn random_zonotope_body_list(rng: &mut Rng, max_dim: usize, max_total_gens: usize) -> Result<BodyList> {
    let dim = rng.int_in(2, max_dim as i64) as usize;
    let mut entries = Vec::new();
    let mut left = dim;
    let mut gens_budget = max_total_gens as i64;
    while left > 0 {
        let m = rng.int_in(1, left as i64) as usize;
        let max_extra = (gens_budget - left as i64).clamp(0, 3);
        let k = (m as i64 + rng.int_in(0, max_extra)) as usize;
        gens_budget -= k as i64;
        entries.push((random_zonotope(rng, dim, k, 3).into(), m));
        left -= m;
    }
    BodyList::new(entries)
}

/// Pool of full-dimensional zonotopes sharing an ambient dimension.
pub fn random_pool(rng: &mut Rng, dim: usize, count: usize, gens: usize, bound: i64) -> Vec<Zonotope> {
    (0..count)
        .map(|_| random_fulldim_zonotope(rng, dim, gens, bound))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn body_lists_are_valid_and_seeded() {
        let mut a = Rng::new(10);
        let mut b = Rng::new(10);
        for _ in 0..10 {
            let x = random_zonotope_body_list(&mut a, 5, 14).unwrap();
            let y = random_zonotope_body_list(&mut b, 5, 14).unwrap();
            assert_eq!(x.dim(), y.dim());
            let total: usize = x.entries().iter().map(|(_, m)| m).sum();
            assert_eq!(total, x.dim());
        }
    }

    #[test]
    fn fulldim_zonotopes_have_positive_volume() {
        let mut rng = Rng::new(4);
        for dim in 2..=4 {
            let z = random_fulldim_zonotope(&mut rng, dim, dim + 2, 2);
            assert!(volume(&z.into()).unwrap().is_positive());
        }
    }
}

//! Atomic mixed area measures of zonotopes.
//!
//! The mixed area measure of n-1 zonotopes is a finite even measure on the
//! sphere. Each choice of one generator per slot contributes weight
//! vol_{n-1}(parallelepiped)/(n-1)! at the two unit normals +-u of the chosen
//! vectors. To stay rational the measure is stored per canonical primitive
//! integer direction d (first nonzero coordinate positive, identified with
//! its mirror -d): the stored magnitude is the rational factor rho with true
//! weight rho * ||d|| at each of +-d/||d||. The defining pairing survives in
//! rational form: n V(Z_1,...,Z_{n-1}, L) = sum_d rho_d (h~_L(d) + h~_L(-d))
//! where h~_L(d) = h_L(d) is evaluated against the unnormalized direction.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::body::Zonotope;
use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::{factorial, Scalar};
use crate::vector::Vector;

/// Finite even measure with atoms at canonical primitive integer directions.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AtomicMeasure {
    n: usize,
    atoms: BTreeMap<Vec<BigInt>, Scalar>,
}

impl AtomicMeasure {
    pub fn empty(n: usize) -> Self {
        AtomicMeasure {
            n,
            atoms: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn atoms(&self) -> impl Iterator<Item = (&[BigInt], &Scalar)> {
        self.atoms.iter().map(|(d, m)| (d.as_slice(), m))
    }

    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    pub fn magnitude(&self, dir: &[BigInt]) -> Option<&Scalar> {
        self.atoms.get(dir)
    }

    fn add_atom(&mut self, dir: Vec<BigInt>, magnitude: Scalar) {
        debug_assert!(magnitude.is_positive());
        let entry = self.atoms.entry(dir).or_insert_with(Scalar::zero);
        *entry += &magnitude;
    }

    /// The first atom (in direction order) where the two measures differ.
    pub fn first_difference<'a>(&'a self, other: &'a AtomicMeasure) -> Option<(&'a [BigInt], Scalar, Scalar)> {
        let dirs: BTreeSet<&Vec<BigInt>> = self.atoms.keys().chain(other.atoms.keys()).collect();
        for d in dirs {
            let a = self.atoms.get(d).cloned().unwrap_or_else(Scalar::zero);
            let b = other.atoms.get(d).cloned().unwrap_or_else(Scalar::zero);
            if a != b {
                return Some((d.as_slice(), a, b));
            }
        }
        None
    }

    /// Exact rational pairing sum_d rho_d (h_L(d) + h_L(-d)) against the
    /// support function of a zonotope, evaluated at unnormalized directions.
    pub fn pair_with_support(&self, z: &Zonotope) -> Result<Scalar> {
        let mut acc = Scalar::zero();
        for (d, rho) in &self.atoms {
            let dir = Vector::new(d.iter().cloned().map(Scalar::from_bigint).collect());
            let h = z.support(&dir)? + z.support(&dir.neg())?;
            acc += &(rho * &h);
        }
        Ok(acc)
    }
}

/// Serialized as a list of {"direction": [ints], "magnitude": "p/q"}.
#[derive(Serialize, Deserialize)]
struct AtomRepr {
    direction: Vec<String>,
    magnitude: Scalar,
}

#[derive(Serialize, Deserialize)]
struct MeasureRepr {
    n: usize,
    atoms: Vec<AtomRepr>,
}

impl Serialize for AtomicMeasure {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MeasureRepr {
            n: self.n,
            atoms: self
                .atoms
                .iter()
                .map(|(d, m)| AtomRepr {
                    direction: d.iter().map(|c| c.to_string()).collect(),
                    magnitude: m.clone(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for AtomicMeasure {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = MeasureRepr::deserialize(d)?;
        let mut out = AtomicMeasure::empty(repr.n);
        for atom in repr.atoms {
            let dir: Vec<BigInt> = atom
                .direction
                .iter()
                .map(|s| s.parse::<BigInt>().map_err(serde::de::Error::custom))
                .collect::<std::result::Result<_, _>>()?;
            out.add_atom(dir, atom.magnitude);
        }
        Ok(out)
    }
}

/// Generalized cross product: the vector c with <c, x> = det(g_1,...,g_{n-1}, x).
fn cross_vector(columns: &[Vec<Scalar>], n: usize) -> Vec<Scalar> {
    debug_assert_eq!(columns.len(), n - 1);
    let mut c = Vec::with_capacity(n);
    for i in 0..n {
        // minor: remove row i from the (n x n-1) column matrix
        let minor_cols: Vec<Vec<Scalar>> = columns
            .iter()
            .map(|col| {
                col.iter()
                    .enumerate()
                    .filter(|(r, _)| *r != i)
                    .map(|(_, v)| v.clone())
                    .collect()
            })
            .collect();
        let minor = linalg::det_columns(&minor_cols);
        // expansion of det(g_1,...,g_{n-1}, x) along the last column
        if (n - 1 + i) % 2 == 0 {
            c.push(minor);
        } else {
            c.push(-minor);
        }
    }
    c
}

/// Mixed area measure S(Z_1[m_1], ..., Z_r[m_r], .) with sum m_j = n-1.
pub fn mixed_area_measure(bodies: &[(Zonotope, usize)], n: usize) -> Result<AtomicMeasure> {
    if n < 2 {
        return Err(Error::input("mixed area measures need dimension >= 2"));
    }
    let total: usize = bodies.iter().map(|(_, m)| m).sum();
    if total != n - 1 {
        return Err(Error::input(format!(
            "area-measure multiplicities sum to {total}, expected n-1 = {}",
            n - 1
        )));
    }
    for (z, _) in bodies {
        if z.dim() != n {
            return Err(Error::dim("area-measure body dimension mismatch"));
        }
    }

    let mut weight = factorial(n - 1).recip();
    for (_, m) in bodies {
        weight *= &factorial(*m);
    }

    let mut measure = AtomicMeasure::empty(n);
    let mut chosen: Vec<&Vector> = Vec::with_capacity(n - 1);
    collect_tuples(bodies, 0, 0, &mut chosen, &mut |tuple| {
        let cols: Vec<Vec<Scalar>> = tuple.iter().map(|v| v.coords().to_vec()).collect();
        let c = cross_vector(&cols, n);
        if c.iter().all(Scalar::is_zero) {
            return; // degenerate tuple
        }
        let dir = linalg::primitive_integer_direction(&c);
        // c = q * dir for a rational q; |q| = vol(parallelepiped)/||dir||
        let k = dir.iter().position(|v| !num_traits::Zero::is_zero(v)).expect("nonzero");
        let q = &c[k] / &Scalar::from_bigint(dir[k].clone());
        measure.add_atom(dir, q.abs() * weight.clone());
    });
    Ok(measure)
}

fn collect_tuples<'a>(
    bodies: &'a [(Zonotope, usize)],
    body_idx: usize,
    next: usize,
    chosen: &mut Vec<&'a Vector>,
    f: &mut impl FnMut(&[&Vector]),
) {
    if body_idx == bodies.len() {
        f(chosen);
        return;
    }
    let (z, m) = &bodies[body_idx];
    let picked: usize = bodies[..body_idx].iter().map(|(_, mm)| mm).sum();
    let left = m - (chosen.len() - picked);
    if left == 0 {
        collect_tuples(bodies, body_idx + 1, 0, chosen, f);
        return;
    }
    let gens = z.generators();
    if gens.len() < next + left {
        return;
    }
    for j in next..=(gens.len() - left) {
        chosen.push(&gens[j]);
        collect_tuples(bodies, body_idx, j + 1, chosen, f);
        chosen.pop();
    }
}

/// Exact equality of atomic measures after canonicalization.
pub fn measures_equal(a: &AtomicMeasure, b: &AtomicMeasure) -> bool {
    a == b
}

/// Linear constraints cutting out the primitive coefficient vectors: rows are
/// indexed by the union of atom directions of S(K_a, K_b, B[n-3], .) over
/// unordered pool pairs (a <= b), columns by the pairs; a coefficient vector c
/// is in the kernel exactly when sum c_ab S(K_a, K_b, B[n-3], .) = 0.
pub struct PrimitivityConstraints {
    pub pairs: Vec<(usize, usize)>,
    pub directions: Vec<Vec<BigInt>>,
    pub matrix: Vec<Vec<Scalar>>, // rows = directions, cols = pairs
}

impl PrimitivityConstraints {
    pub fn kernel_basis(&self) -> Vec<Vec<Scalar>> {
        linalg::kernel_basis(&self.matrix, self.pairs.len())
    }

    pub fn rank(&self) -> usize {
        linalg::rank(&self.matrix)
    }
}

pub fn primitivity_constraints(
    pool: &[Zonotope],
    n: usize,
    ball: &Zonotope,
) -> Result<PrimitivityConstraints> {
    if n < 4 {
        return Err(Error::input("primitivity constraints need dimension >= 4"));
    }
    if pool.is_empty() {
        return Err(Error::input("empty pool"));
    }
    let mut pairs = Vec::new();
    let mut measures = Vec::new();
    for a in 0..pool.len() {
        for b in a..pool.len() {
            pairs.push((a, b));
            let mut bodies = vec![(pool[a].clone(), 1)];
            if a == b {
                bodies[0].1 = 2;
            } else {
                bodies.push((pool[b].clone(), 1));
            }
            bodies.push((ball.clone(), n - 3));
            measures.push(mixed_area_measure(&bodies, n)?);
        }
    }
    let mut dirset: BTreeSet<Vec<BigInt>> = BTreeSet::new();
    for m in &measures {
        for (d, _) in m.atoms() {
            dirset.insert(d.to_vec());
        }
    }
    let directions: Vec<Vec<BigInt>> = dirset.into_iter().collect();
    let matrix: Vec<Vec<Scalar>> = directions
        .iter()
        .map(|d| {
            measures
                .iter()
                .map(|m| m.magnitude(d).cloned().unwrap_or_else(Scalar::zero))
                .collect()
        })
        .collect();
    Ok(PrimitivityConstraints {
        pairs,
        directions,
        matrix,
    })
}

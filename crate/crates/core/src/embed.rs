//! Linear embeddings of bodies into product spaces.
//!
//! The inequality checks live in the doubled space R^n x R^n: a body can be
//! placed in the first factor, the second factor, or on the diagonal. The
//! triple-product computation uses the analogous maps into R^{3n}.

use crate::body::{Body, VPolytope, Zonotope};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::vector::Vector;

/// Exact linear map, rows x cols, applied columnwise to generators/vertices.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinearEmbedding {
    rows: usize,
    cols: usize,
    matrix: Vec<Vec<Scalar>>, // row-major
}

impl LinearEmbedding {
    pub fn new(matrix: Vec<Vec<Scalar>>) -> Result<Self> {
        let rows = matrix.len();
        if rows == 0 {
            return Err(Error::input("embedding needs at least one row"));
        }
        let cols = matrix[0].len();
        if cols == 0 || matrix.iter().any(|r| r.len() != cols) {
            return Err(Error::input("embedding rows must share a positive length"));
        }
        Ok(LinearEmbedding { rows, cols, matrix })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn matrix(&self) -> &[Vec<Scalar>] {
        &self.matrix
    }

    pub fn identity(n: usize) -> Self {
        let m = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { Scalar::one() } else { Scalar::zero() })
                    .collect()
            })
            .collect();
        LinearEmbedding::new(m).expect("identity is valid")
    }

    /// x -> -x on R^n.
    pub fn negation(n: usize) -> Self {
        let m = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { -Scalar::one() } else { Scalar::zero() })
                    .collect()
            })
            .collect();
        LinearEmbedding::new(m).expect("negation is valid")
    }

    /// Stacks `copies` blocks of n x n, with the identity in block `slot` and
    /// zeros elsewhere.
    fn factor_embedding(n: usize, copies: usize, slot: usize) -> Self {
        let mut m = vec![vec![Scalar::zero(); n]; n * copies];
        for j in 0..n {
            m[slot * n + j][j] = Scalar::one();
        }
        LinearEmbedding::new(m).expect("factor embedding is valid")
    }

    /// Stacks `copies` identity blocks: x -> (x, ..., x).
    fn diagonal_embedding(n: usize, copies: usize) -> Self {
        let mut m = vec![vec![Scalar::zero(); n]; n * copies];
        for c in 0..copies {
            for j in 0..n {
                m[c * n + j][j] = Scalar::one();
            }
        }
        LinearEmbedding::new(m).expect("diagonal embedding is valid")
    }

    pub fn apply_vector(&self, v: &Vector) -> Result<Vector> {
        if v.dim() != self.cols {
            return Err(Error::dim(format!(
                "embedding expects dim {}, got {}",
                self.cols,
                v.dim()
            )));
        }
        let coords = self
            .matrix
            .iter()
            .map(|row| {
                let mut acc = Scalar::zero();
                for (a, b) in row.iter().zip(v.coords()) {
                    acc += &(a * b);
                }
                acc
            })
            .collect();
        Ok(Vector::new(coords))
    }

    /// Matrix product self * other (apply other first).
    pub fn compose(&self, other: &LinearEmbedding) -> Result<LinearEmbedding> {
        if self.cols != other.rows {
            return Err(Error::dim("incompatible embedding composition"));
        }
        let mut m = vec![vec![Scalar::zero(); other.cols]; self.rows];
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.matrix[i][k].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let delta = &self.matrix[i][k] * &other.matrix[k][j];
                    m[i][j] += &delta;
                }
            }
        }
        LinearEmbedding::new(m)
    }
}

/// Image of a body under an exact linear map. Zonotope generators that map to
/// zero are dropped (they contribute nothing to the Minkowski sum).
pub fn apply_embedding(e: &LinearEmbedding, b: &Body) -> Result<Body> {
    if e.cols() != b.dim() {
        return Err(Error::dim(format!(
            "embedding expects dim {}, body has dim {}",
            e.cols(),
            b.dim()
        )));
    }
    match b {
        Body::Zonotope(z) => {
            let mut gens = Vec::with_capacity(z.generators().len());
            for g in z.generators() {
                let img = e.apply_vector(g)?;
                if !img.is_zero() {
                    gens.push(img);
                }
            }
            Ok(Body::Zonotope(Zonotope::new(e.rows(), gens)?))
        }
        Body::VPolytope(p) => {
            let verts = p
                .vertices()
                .iter()
                .map(|v| e.apply_vector(v))
                .collect::<Result<Vec<_>>>()?;
            Ok(Body::VPolytope(VPolytope::new(e.rows(), verts)?))
        }
    }
}

/// The maps into R^n x R^n: left factor, right factor, diagonal.
pub struct PairEmbeddings {
    pub left: LinearEmbedding,
    pub right: LinearEmbedding,
    pub diagonal: LinearEmbedding,
}

/// The maps into R^n x R^n x R^n.
pub struct TripleEmbeddings {
    pub first: LinearEmbedding,
    pub second: LinearEmbedding,
    pub third: LinearEmbedding,
    pub diagonal: LinearEmbedding,
}

pub fn pair_embeddings(n: usize) -> Result<PairEmbeddings> {
    if n == 0 {
        return Err(Error::input("ambient dimension must be positive"));
    }
    Ok(PairEmbeddings {
        left: LinearEmbedding::factor_embedding(n, 2, 0),
        right: LinearEmbedding::factor_embedding(n, 2, 1),
        diagonal: LinearEmbedding::diagonal_embedding(n, 2),
    })
}

pub fn triple_embeddings(n: usize) -> Result<TripleEmbeddings> {
    if n == 0 {
        return Err(Error::input("ambient dimension must be positive"));
    }
    Ok(TripleEmbeddings {
        first: LinearEmbedding::factor_embedding(n, 3, 0),
        second: LinearEmbedding::factor_embedding(n, 3, 1),
        third: LinearEmbedding::factor_embedding(n, 3, 2),
        diagonal: LinearEmbedding::diagonal_embedding(n, 3),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_matrix_n1() {
        let e = pair_embeddings(1).unwrap();
        assert_eq!(
            e.diagonal.matrix(),
            &[vec![Scalar::one()], vec![Scalar::one()]]
        );
    }

    #[test]
    fn right_factor_n2_has_identity_in_lower_block() {
        let e = pair_embeddings(2).unwrap();
        let m = e.right.matrix();
        assert_eq!(m.len(), 4);
        assert!(m[0].iter().all(Scalar::is_zero));
        assert!(m[1].iter().all(Scalar::is_zero));
        assert_eq!(m[2], vec![Scalar::one(), Scalar::zero()]);
        assert_eq!(m[3], vec![Scalar::zero(), Scalar::one()]);
    }

    #[test]
    fn triple_diagonal_n2_stacks_three_identities() {
        let e = triple_embeddings(2).unwrap();
        let m = e.diagonal.matrix();
        assert_eq!(m.len(), 6);
        for c in 0..3 {
            assert_eq!(m[2 * c], vec![Scalar::one(), Scalar::zero()]);
            assert_eq!(m[2 * c + 1], vec![Scalar::zero(), Scalar::one()]);
        }
    }

    #[test]
    fn left_factor_pads_segment() {
        // segment [0,(1,0)] in R^2 -> segment [0,(1,0,0,0)] in R^4
        let e = pair_embeddings(2).unwrap();
        let seg: Body = Zonotope::from_int_generators(2, &[&[1, 0]]).unwrap().into();
        let img = apply_embedding(&e.left, &seg).unwrap();
        let expect: Body = Zonotope::from_int_generators(4, &[&[1, 0, 0, 0]])
            .unwrap()
            .into();
        assert_eq!(img, expect);
    }

    #[test]
    fn diagonal_of_unit_square() {
        let e = pair_embeddings(2).unwrap();
        let sq: Body = Zonotope::from_int_generators(2, &[&[1, 0], &[0, 1]])
            .unwrap()
            .into();
        let img = apply_embedding(&e.diagonal, &sq).unwrap();
        let expect: Body = Zonotope::from_int_generators(4, &[&[1, 0, 1, 0], &[0, 1, 0, 1]])
            .unwrap()
            .into();
        assert_eq!(img, expect);
    }

    #[test]
    fn composition_matches_sequential_application() {
        let pair = pair_embeddings(2).unwrap();
        let neg = LinearEmbedding::negation(2);
        let composed = pair.right.compose(&neg).unwrap();
        let body: Body = Zonotope::from_int_generators(2, &[&[1, 2], &[3, -1]])
            .unwrap()
            .into();
        let seq = apply_embedding(&pair.right, &apply_embedding(&neg, &body).unwrap()).unwrap();
        let direct = apply_embedding(&composed, &body).unwrap();
        assert_eq!(seq, direct);
    }
}

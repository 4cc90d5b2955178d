//! The algebra of mixed-volume valuations.
//!
//! A basis element of degree i on n-dimensional bodies is
//! K |-> V(K[i], A_1, ..., A_{n-i}) for fixed reference bodies A_j; a
//! `Valuation` is a rational linear combination of such elements, graded by
//! the degree of homogeneity. In complementary degrees the product reduces to
//!
//!   (phi . psi)(.) = C(n,i)^{-1} V(A_1,...,A_{n-i}, -B_1,...,-B_i) vol(.),
//!
//! and the convolution of degrees i and j with i + j >= n is
//!
//!   (phi * psi)(.) = C(i+j,n) C(i+j,i)^{-1}
//!                      V(.[i+j-n]; A_1,...,A_{n-i}; B_1,...,B_{n-j}),
//!
//! both extended bilinearly. The general (non-complementary) product is not
//! representable inside this basis; where it is needed - the triple product
//! behind the doubled-space inequalities - the explicit doubled-space mixed
//! volume `triple_product_mixed_volume` is exposed instead, with the
//! dimension-only positive constant dropped (all uses are sign tests or
//! ratios in which it cancels).

use std::collections::BTreeMap;

use crate::body::{Body, Zonotope};
use crate::embed::{apply_embedding, pair_embeddings};
use crate::error::{Error, Result};
use crate::mixedvol::{mixed_volume, volume, BodyList};
use crate::scalar::{binomial, Scalar};

/// K |-> V(K[degree], refs...). Degree n has no refs (the volume); degree 0
/// has n refs (a multiple of the Euler characteristic).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct BasisValuation {
    n: usize,
    degree: usize,
    refs: Vec<Body>, // sorted
}

impl BasisValuation {
    pub fn new(n: usize, degree: usize, refs: Vec<Body>) -> Result<Self> {
        if degree > n {
            return Err(Error::degree(format!("degree {degree} exceeds dimension {n}")));
        }
        if refs.len() != n - degree {
            return Err(Error::input(format!(
                "degree {degree} needs {} reference bodies, got {}",
                n - degree,
                refs.len()
            )));
        }
        if refs.iter().any(|b| b.dim() != n) {
            return Err(Error::dim("reference body dimension mismatch"));
        }
        let mut refs = refs;
        refs.sort();
        Ok(BasisValuation { n, degree, refs })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn refs(&self) -> &[Body] {
        &self.refs
    }
}

/// Graded rational combination of basis valuations.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Valuation {
    n: usize,
    terms: BTreeMap<(usize, Vec<Body>), Scalar>,
}

impl Valuation {
    pub fn zero(n: usize) -> Self {
        Valuation {
            n,
            terms: BTreeMap::new(),
        }
    }

    /// The volume valuation (degree n).
    pub fn volume(n: usize) -> Self {
        let basis = BasisValuation::new(n, n, Vec::new()).expect("volume basis");
        Valuation::from_basis(Scalar::one(), basis)
    }

    /// The Euler characteristic (degree 0), realized with unit-cube
    /// references so that its value on every body is exactly 1.
    pub fn euler(n: usize) -> Self {
        let cube: Body = Zonotope::unit_cube(n).into();
        let basis =
            BasisValuation::new(n, 0, vec![cube; n]).expect("euler basis");
        Valuation::from_basis(Scalar::one(), basis)
    }

    pub fn from_basis(coefficient: Scalar, basis: BasisValuation) -> Self {
        let mut v = Valuation::zero(basis.n);
        v.add_term(coefficient, basis);
        v
    }

    /// K |-> coefficient * V(K[degree], refs...).
    pub fn mixed_volume_term(
        coefficient: Scalar,
        n: usize,
        degree: usize,
        refs: Vec<Body>,
    ) -> Result<Self> {
        Ok(Valuation::from_basis(
            coefficient,
            BasisValuation::new(n, degree, refs)?,
        ))
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, coefficient: Scalar, basis: BasisValuation) {
        assert_eq!(basis.n, self.n, "mixed ambient dimensions");
        if coefficient.is_zero() {
            return;
        }
        let key = (basis.degree, basis.refs);
        let entry = self.terms.entry(key.clone()).or_insert_with(Scalar::zero);
        *entry += &coefficient;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn add(&self, other: &Valuation) -> Valuation {
        assert_eq!(self.n, other.n);
        let mut out = self.clone();
        for ((deg, refs), c) in &other.terms {
            out.add_term(
                c.clone(),
                BasisValuation {
                    n: self.n,
                    degree: *deg,
                    refs: refs.clone(),
                },
            );
        }
        out
    }

    pub fn sub(&self, other: &Valuation) -> Valuation {
        self.add(&other.scale(&-Scalar::one()))
    }

    pub fn scale(&self, t: &Scalar) -> Valuation {
        let mut out = Valuation::zero(self.n);
        if t.is_zero() {
            return out;
        }
        for ((deg, refs), c) in &self.terms {
            out.terms.insert((*deg, refs.clone()), c * t);
        }
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Scalar, usize, &[Body])> {
        self.terms
            .iter()
            .map(|((deg, refs), c)| (c, *deg, refs.as_slice()))
    }

    /// The common degree if homogeneous (the zero valuation has any degree).
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut deg = None;
        for ((d, _), _) in &self.terms {
            match deg {
                None => deg = Some(*d),
                Some(existing) if existing != *d => return None,
                _ => {}
            }
        }
        deg
    }
}

/// Evaluates the valuation at a body: sum of c * V(K[deg], refs...).
pub fn evaluate(v: &Valuation, k: &Body) -> Result<Scalar> {
    if k.dim() != v.n {
        return Err(Error::dim("evaluation body dimension mismatch"));
    }
    let mut acc = Scalar::zero();
    for ((deg, refs), c) in &v.terms {
        let mut entries: Vec<(Body, usize)> = Vec::with_capacity(refs.len() + 1);
        if *deg > 0 {
            entries.push((k.clone(), *deg));
        }
        for r in refs {
            entries.push((r.clone(), 1));
        }
        let mv = mixed_volume(&BodyList::new(entries)?)?;
        acc += &(c * &mv);
    }
    Ok(acc)
}

/// Convolution, defined termwise for degrees i + j >= n.
pub fn convolve(a: &Valuation, b: &Valuation) -> Result<Valuation> {
    if a.n != b.n {
        return Err(Error::dim("convolution dimension mismatch"));
    }
    let n = a.n;
    let mut out = Valuation::zero(n);
    for ((i, refs_a), ca) in &a.terms {
        for ((j, refs_b), cb) in &b.terms {
            if i + j < n {
                return Err(Error::degree(format!(
                    "convolution needs degrees i + j >= n, got {i} + {j} < {n}"
                )));
            }
            let coeff = binomial(i + j, n) / binomial(i + j, *i);
            let mut refs = refs_a.clone();
            refs.extend(refs_b.iter().cloned());
            let basis = BasisValuation::new(n, i + j - n, refs)?;
            out.add_term(ca * cb * coeff, basis);
        }
    }
    Ok(out)
}

/// Product in complementary degrees: returns the coefficient of the volume
/// valuation. Reference bodies of the second factor are negated.
pub fn product_complementary(a: &Valuation, b: &Valuation) -> Result<Scalar> {
    if a.n != b.n {
        return Err(Error::dim("product dimension mismatch"));
    }
    let n = a.n;
    let mut acc = Scalar::zero();
    for ((i, refs_a), ca) in &a.terms {
        for ((j, refs_b), cb) in &b.terms {
            if i + j != n {
                return Err(Error::degree(format!(
                    "complementary product needs degrees summing to {n}, got {i} + {j}"
                )));
            }
            let mut bodies: Vec<Body> = refs_a.clone();
            bodies.extend(refs_b.iter().map(Body::negate));
            let mv = if bodies.is_empty() {
                // i = n and j = n is impossible unless n = 0; the only empty
                // case is vol . chi-type terms with n = 0, excluded upstream
                Scalar::one()
            } else {
                mixed_volume(&BodyList::from_bodies(bodies)?)?
            };
            acc += &(ca * cb * binomial(n, *i).recip() * mv);
        }
    }
    Ok(acc)
}

/// The doubled-space mixed volume representing the triple product of
/// V(., A_1..A_{n-1}), V(., B_1..B_{n-1}) and V(.[n-2], C_1, C_2):
/// V(i_1 A_1,...,i_1 A_{n-1}; i_2 B_1,...,i_2 B_{n-1}; -D(C_1), -D(C_2))
/// in R^{2n}, with the dimension-only positive constant dropped.
pub fn triple_product_mixed_volume(
    a_refs: &[Body],
    b_refs: &[Body],
    c1: &Body,
    c2: &Body,
) -> Result<Scalar> {
    let n = c1.dim();
    if a_refs.len() != n - 1 || b_refs.len() != n - 1 {
        return Err(Error::input(format!(
            "triple product needs two (n-1)-tuples, n = {n}"
        )));
    }
    let emb = pair_embeddings(n)?;
    let mut bodies = Vec::with_capacity(2 * n);
    for a in a_refs {
        bodies.push(apply_embedding(&emb.left, a)?);
    }
    for b in b_refs {
        bodies.push(apply_embedding(&emb.right, b)?);
    }
    bodies.push(apply_embedding(&emb.diagonal, &c1.negate())?);
    bodies.push(apply_embedding(&emb.diagonal, &c2.negate())?);
    mixed_volume(&BodyList::from_bodies(bodies)?)
}

/// Coefficient lambda = 2 V(B, A_1, ..., A_{n-1}) / vol(B) projecting the
/// symmetrized degree-1 valuation of the tuple onto V(., B[n-1]); the
/// projected remainder annihilates V(.[n-1], B) in the complementary product.
pub fn ball_projection_coefficient(a_refs: &[Body], ball: &Zonotope) -> Result<Scalar> {
    let n = ball.dim();
    if a_refs.len() != n - 1 {
        return Err(Error::input("projection needs an (n-1)-tuple"));
    }
    let vol_ball = volume(&ball.clone().into())?;
    if !vol_ball.is_positive() {
        return Err(Error::input("degenerate ball approximant"));
    }
    let mut bodies: Vec<Body> = vec![ball.clone().into()];
    bodies.extend(a_refs.iter().cloned());
    let mv = mixed_volume(&BodyList::from_bodies(bodies)?)?;
    Ok(Scalar::from_int(2) * mv / vol_ball)
}

/// The tightness constant of the even inequality relative to the given ball
/// approximant: 2 V(i_1 B[n-1], i_2 B[n-1], D(B)[2]) / vol(B)^2.
pub fn even_tightness_constant(n: usize, ball: &Zonotope) -> Result<Scalar> {
    if n < 2 {
        return Err(Error::input("even inequality needs dimension >= 2"));
    }
    if ball.dim() != n {
        return Err(Error::dim("ball dimension mismatch"));
    }
    let emb = pair_embeddings(n)?;
    let b: Body = ball.clone().into();
    let i1 = apply_embedding(&emb.left, &b)?;
    let i2 = apply_embedding(&emb.right, &b)?;
    let dd = apply_embedding(&emb.diagonal, &b)?;
    let mv = mixed_volume(&BodyList::new(vec![(i1, n - 1), (i2, n - 1), (dd, 2)])?)?;
    let vol_ball = volume(&b)?;
    Ok(Scalar::from_int(2) * mv / (&vol_ball * &vol_ball))
}

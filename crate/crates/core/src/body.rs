//! Convex bodies with exact rational data.
//!
//! Two representations are supported: zonotopes (Minkowski sums of segments,
//! stored translation-normalized as sum_k [0, g_k]) and V-polytopes (vertex
//! lists). Everything computed from them downstream is translation invariant,
//! so zonotopes carry no center offset. Generator and vertex lists are kept in
//! a canonical sorted order so that structural equality matches geometric
//! equality of the stored normal forms.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::vector::Vector;

/// Minkowski sum of segments [0, g_k]; centrally symmetric up to translation.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Zonotope {
    dim: usize,
    generators: Vec<Vector>,
}

impl Zonotope {
    /// Zero generators are rejected; an empty generator list is the point {0}.
    pub fn new(dim: usize, generators: Vec<Vector>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::input("zonotope dimension must be positive"));
        }
        for g in &generators {
            if g.dim() != dim {
                return Err(Error::dim(format!(
                    "generator of dim {} in zonotope of dim {dim}",
                    g.dim()
                )));
            }
            if g.is_zero() {
                return Err(Error::input("zero zonotope generator"));
            }
        }
        let mut generators = generators;
        generators.sort();
        Ok(Zonotope { dim, generators })
    }

    pub fn from_int_generators(dim: usize, gens: &[&[i64]]) -> Result<Self> {
        Zonotope::new(dim, gens.iter().map(|g| Vector::from_ints(g)).collect())
    }

    /// The segment [0, v].
    pub fn segment(v: Vector) -> Result<Self> {
        let dim = v.dim();
        Zonotope::new(dim, vec![v])
    }

    /// Unit cube [0,1]^dim.
    pub fn unit_cube(dim: usize) -> Self {
        let gens = (0..dim).map(|i| Vector::unit(dim, i)).collect();
        Zonotope::new(dim, gens).expect("unit cube generators are valid")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[Vector] {
        &self.generators
    }

    pub fn minkowski_sum(&self, other: &Zonotope) -> Result<Zonotope> {
        if self.dim != other.dim {
            return Err(Error::dim("Minkowski sum of zonotopes with unequal dims"));
        }
        let mut gens = self.generators.clone();
        gens.extend(other.generators.iter().cloned());
        Zonotope::new(self.dim, gens)
    }

    pub fn scale(&self, t: &Scalar) -> Result<Zonotope> {
        if !t.is_positive() {
            return Err(Error::input("zonotope scale factor must be positive"));
        }
        Zonotope::new(
            self.dim,
            self.generators.iter().map(|g| g.scale(t)).collect(),
        )
    }

    pub fn negate(&self) -> Zonotope {
        Zonotope::new(self.dim, self.generators.iter().map(Vector::neg).collect())
            .expect("negation preserves validity")
    }

    /// Support function of the stored (translation-normalized) body:
    /// sum_k max(0, <g_k, u>).
    pub fn support(&self, u: &Vector) -> Result<Scalar> {
        if u.dim() != self.dim {
            return Err(Error::dim("support direction dim mismatch"));
        }
        let mut acc = Scalar::zero();
        for g in &self.generators {
            let d = g.dot(u)?;
            if d.is_positive() {
                acc += &d;
            }
        }
        Ok(acc)
    }

    /// Support function of the centered body (half the width):
    /// (1/2) sum_k |<g_k, u>|. Translation invariant.
    pub fn support_centered(&self, u: &Vector) -> Result<Scalar> {
        if u.dim() != self.dim {
            return Err(Error::dim("support direction dim mismatch"));
        }
        let mut acc = Scalar::zero();
        for g in &self.generators {
            acc += &g.dot(u)?.abs();
        }
        Ok(acc * Scalar::ratio(1, 2))
    }

    /// Vertices of the zonotope, 2^k of them before dedup. Guarded; only used
    /// on small generator counts (oracle cross-checks).
    pub fn vertices(&self, max_generators: usize) -> Result<Vec<Vector>> {
        let k = self.generators.len();
        if k > max_generators {
            return Err(Error::unsupported(format!(
                "zonotope vertex enumeration needs {k} generators (cap {max_generators})"
            )));
        }
        let mut verts = vec![Vector::zeros(self.dim)];
        for g in &self.generators {
            let mut next = Vec::with_capacity(verts.len() * 2);
            for v in &verts {
                next.push(v.clone());
                next.push(v.add(g));
            }
            verts = next;
        }
        verts.sort();
        verts.dedup();
        Ok(verts)
    }
}

/// Convex hull of a finite vertex list.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct VPolytope {
    dim: usize,
    vertices: Vec<Vector>,
}

impl VPolytope {
    /// Duplicates are permitted on input and removed here.
    pub fn new(dim: usize, vertices: Vec<Vector>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::input("polytope dimension must be positive"));
        }
        if vertices.is_empty() {
            return Err(Error::input("polytope needs at least one vertex"));
        }
        for v in &vertices {
            if v.dim() != dim {
                return Err(Error::dim(format!(
                    "vertex of dim {} in polytope of dim {dim}",
                    v.dim()
                )));
            }
        }
        let mut vertices = vertices;
        vertices.sort();
        vertices.dedup();
        Ok(VPolytope { dim, vertices })
    }

    pub fn from_int_vertices(dim: usize, verts: &[&[i64]]) -> Result<Self> {
        VPolytope::new(dim, verts.iter().map(|v| Vector::from_ints(v)).collect())
    }

    /// conv{0, e_1, ..., e_dim}.
    pub fn standard_simplex(dim: usize) -> Self {
        let mut verts = vec![Vector::zeros(dim)];
        verts.extend((0..dim).map(|i| Vector::unit(dim, i)));
        VPolytope::new(dim, verts).expect("simplex vertices are valid")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vector] {
        &self.vertices
    }

    pub fn minkowski_sum(&self, other: &VPolytope) -> Result<VPolytope> {
        if self.dim != other.dim {
            return Err(Error::dim("Minkowski sum of polytopes with unequal dims"));
        }
        let mut verts = Vec::with_capacity(self.vertices.len() * other.vertices.len());
        for a in &self.vertices {
            for b in &other.vertices {
                verts.push(a.add(b));
            }
        }
        VPolytope::new(self.dim, verts)
    }

    pub fn scale(&self, t: &Scalar) -> Result<VPolytope> {
        if !t.is_positive() {
            return Err(Error::input("polytope scale factor must be positive"));
        }
        VPolytope::new(self.dim, self.vertices.iter().map(|v| v.scale(t)).collect())
    }

    pub fn negate(&self) -> VPolytope {
        VPolytope::new(self.dim, self.vertices.iter().map(Vector::neg).collect())
            .expect("negation preserves validity")
    }

    pub fn translate(&self, t: &Vector) -> Result<VPolytope> {
        if t.dim() != self.dim {
            return Err(Error::dim("translation vector dim mismatch"));
        }
        VPolytope::new(self.dim, self.vertices.iter().map(|v| v.add(t)).collect())
    }

    pub fn support(&self, u: &Vector) -> Result<Scalar> {
        if u.dim() != self.dim {
            return Err(Error::dim("support direction dim mismatch"));
        }
        let mut best: Option<Scalar> = None;
        for v in &self.vertices {
            let d = v.dot(u)?;
            best = Some(match best {
                None => d,
                Some(b) => b.max(d),
            });
        }
        Ok(best.expect("non-empty vertex list"))
    }
}

/// Either representation, with a uniform dimension accessor.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Body {
    Zonotope(Zonotope),
    VPolytope(VPolytope),
}

impl Body {
    pub fn dim(&self) -> usize {
        match self {
            Body::Zonotope(z) => z.dim(),
            Body::VPolytope(p) => p.dim(),
        }
    }

    pub fn is_zonotope(&self) -> bool {
        matches!(self, Body::Zonotope(_))
    }

    pub fn as_zonotope(&self) -> Option<&Zonotope> {
        match self {
            Body::Zonotope(z) => Some(z),
            Body::VPolytope(_) => None,
        }
    }

    pub fn support(&self, u: &Vector) -> Result<Scalar> {
        match self {
            Body::Zonotope(z) => z.support(u),
            Body::VPolytope(p) => p.support(u),
        }
    }

    pub fn negate(&self) -> Body {
        match self {
            Body::Zonotope(z) => Body::Zonotope(z.negate()),
            Body::VPolytope(p) => Body::VPolytope(p.negate()),
        }
    }

    pub fn scale(&self, t: &Scalar) -> Result<Body> {
        Ok(match self {
            Body::Zonotope(z) => Body::Zonotope(z.scale(t)?),
            Body::VPolytope(p) => Body::VPolytope(p.scale(t)?),
        })
    }

    /// Vertex list; zonotopes are expanded subject to the generator cap.
    pub fn vertex_list(&self, zonotope_cap: usize) -> Result<Vec<Vector>> {
        match self {
            Body::Zonotope(z) => z.vertices(zonotope_cap),
            Body::VPolytope(p) => Ok(p.vertices().to_vec()),
        }
    }

    /// Translation-invariant coordinate half-width bound: the largest
    /// per-coordinate extent of the body up to centering. A cube of this
    /// radius contains a translate of the body.
    pub fn coord_extent(&self) -> Scalar {
        let mut best = Scalar::zero();
        match self {
            Body::Zonotope(z) => {
                for i in 0..z.dim() {
                    let mut width = Scalar::zero();
                    for g in z.generators() {
                        width += &g.coords()[i].abs();
                    }
                    best = best.max(width * Scalar::ratio(1, 2));
                }
            }
            Body::VPolytope(p) => {
                for i in 0..p.dim() {
                    let mut lo: Option<Scalar> = None;
                    let mut hi: Option<Scalar> = None;
                    for v in p.vertices() {
                        let c = &v.coords()[i];
                        lo = Some(match lo {
                            None => c.clone(),
                            Some(x) => x.min(c.clone()),
                        });
                        hi = Some(match hi {
                            None => c.clone(),
                            Some(x) => x.max(c.clone()),
                        });
                    }
                    let width = hi.expect("non-empty") - lo.expect("non-empty");
                    best = best.max(width * Scalar::ratio(1, 2));
                }
            }
        }
        best
    }
}

impl From<Zonotope> for Body {
    fn from(z: Zonotope) -> Body {
        Body::Zonotope(z)
    }
}

impl From<VPolytope> for Body {
    fn from(p: VPolytope) -> Body {
        Body::VPolytope(p)
    }
}

/// Wire format for bodies: {"dim": n, "kind": "zonotope"|"vpolytope",
/// "data": [[scalar, ...], ...]} with scalars as "p/q" or integer strings.
#[derive(Serialize, Deserialize)]
struct BodyRepr {
    dim: usize,
    kind: String,
    data: Vec<Vec<Scalar>>,
}

impl Serialize for Body {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let (kind, rows): (&str, Vec<Vec<Scalar>>) = match self {
            Body::Zonotope(z) => (
                "zonotope",
                z.generators().iter().map(|g| g.coords().to_vec()).collect(),
            ),
            Body::VPolytope(p) => (
                "vpolytope",
                p.vertices().iter().map(|v| v.coords().to_vec()).collect(),
            ),
        };
        BodyRepr {
            dim: self.dim(),
            kind: kind.to_string(),
            data: rows,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Body {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = BodyRepr::deserialize(deserializer)?;
        let vectors: Vec<Vector> = repr.data.into_iter().map(Vector::new).collect();
        let body = match repr.kind.as_str() {
            "zonotope" => Zonotope::new(repr.dim, vectors).map(Body::Zonotope),
            "vpolytope" => VPolytope::new(repr.dim, vectors).map(Body::VPolytope),
            other => Err(Error::Parse(format!("unknown body kind {other:?}"))),
        };
        body.map_err(serde::de::Error::custom)
    }
}

/// Minkowski sum of two bodies. Mixed zonotope/polytope sums expand the
/// zonotope's vertices and are therefore guarded by the generator cap.
pub fn minkowski_sum(a: &Body, b: &Body, zonotope_cap: usize) -> Result<Body> {
    if a.dim() != b.dim() {
        return Err(Error::dim("Minkowski sum of bodies with unequal dims"));
    }
    match (a, b) {
        (Body::Zonotope(x), Body::Zonotope(y)) => Ok(Body::Zonotope(x.minkowski_sum(y)?)),
        _ => {
            let va = a.vertex_list(zonotope_cap)?;
            let vb = b.vertex_list(zonotope_cap)?;
            let mut verts = Vec::with_capacity(va.len() * vb.len());
            for x in &va {
                for y in &vb {
                    verts.push(x.add(y));
                }
            }
            Ok(Body::VPolytope(VPolytope::new(a.dim(), verts)?))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_generator_rejected() {
        let r = Zonotope::new(2, vec![Vector::from_ints(&[0, 0])]);
        assert!(r.is_err());
    }

    #[test]
    fn polytope_dedup_on_construction() {
        let p = VPolytope::from_int_vertices(2, &[&[0, 0], &[1, 0], &[0, 0]]).unwrap();
        assert_eq!(p.vertices().len(), 2);
    }

    #[test]
    fn support_examples() {
        // unit square {e1, e2}, u = (1,1) -> 2
        let sq = Zonotope::from_int_generators(2, &[&[1, 0], &[0, 1]]).unwrap();
        let u = Vector::from_ints(&[1, 1]);
        assert_eq!(sq.support(&u).unwrap(), Scalar::from_int(2));
        // u = 0 -> 0
        assert_eq!(sq.support(&Vector::zeros(2)).unwrap(), Scalar::zero());
        let tri = VPolytope::standard_simplex(2);
        assert_eq!(tri.support(&u).unwrap(), Scalar::one());
    }

    #[test]
    fn support_additive_under_minkowski_sum() {
        let a = Zonotope::from_int_generators(2, &[&[1, 0], &[1, 1]]).unwrap();
        let b = Zonotope::from_int_generators(2, &[&[0, 2], &[-1, 1]]).unwrap();
        let s = a.minkowski_sum(&b).unwrap();
        for u in [[3, 1], [-2, 5], [0, -1]] {
            let u = Vector::from_ints(&u);
            assert_eq!(
                s.support(&u).unwrap(),
                a.support(&u).unwrap() + b.support(&u).unwrap()
            );
        }
    }

    #[test]
    fn body_json_round_trip() {
        let body: Body = Zonotope::new(
            2,
            vec![
                Vector::new(vec![Scalar::ratio(1, 3), Scalar::zero()]),
                Vector::new(vec![Scalar::from_int(-2), Scalar::ratio(7, 5)]),
            ],
        )
        .unwrap()
        .into();
        let json = serde_json::to_string(&body).unwrap();
        let back: Body = serde_json::from_str(&json).unwrap();
        assert_eq!(body, back);

        let tri: Body = VPolytope::standard_simplex(3).into();
        let json = serde_json::to_string(&tri).unwrap();
        let back: Body = serde_json::from_str(&json).unwrap();
        assert_eq!(tri, back);
    }

    #[test]
    fn zonotope_vertices_of_square() {
        let sq = Zonotope::from_int_generators(2, &[&[1, 0], &[0, 1]]).unwrap();
        let verts = sq.vertices(8).unwrap();
        assert_eq!(verts.len(), 4);
    }

    #[test]
    fn coord_extent_is_translation_invariant() {
        let p = VPolytope::from_int_vertices(2, &[&[-3, 1], &[2, 2]]).unwrap();
        let shifted = p.translate(&Vector::from_ints(&[10, -7])).unwrap();
        assert_eq!(Body::from(p.clone()).coord_extent(), Scalar::ratio(5, 2));
        assert_eq!(
            Body::from(p).coord_extent(),
            Body::from(shifted).coord_extent()
        );
    }
}

//! Deterministic zonotopal approximants of the Euclidean unit ball.
//!
//! `ball_zonotope(n, m, seed)` returns B_m = sum_k [-r u_k, r u_k] (stored
//! translation-normalized as sum_k [0, 2r u_k]) where the m directions u_k
//! are exact unit-norm rational vectors:
//!
//! * n = 2: equally spaced angles k*pi/m, snapped to the rational circle via
//!   the tangent-half-angle parameterization (denominators <= 1000, so the
//!   angular snap error ~1e-6 is far below the polygonal gap error);
//! * n >= 3: the coordinate axes followed by seeded greedy farthest-point
//!   picks from stereographic rational candidates.
//!
//! The common segment radius r is chosen so that the first intrinsic volume
//! of B_m equals a pinned rational approximation (relative error <= 1e-12) of
//! V_1 of the unit ball; since every generator has exactly rational norm 2r,
//! that normalization is exact. Identical (n, m, seed) inputs produce
//! bitwise-identical generators on every platform: the construction uses only
//! integer and rational arithmetic.

use std::sync::OnceLock;

use crate::body::Zonotope;
use crate::error::{Error, Result};
use crate::rng::Rng;
use crate::scalar::{pi_approx, Scalar};
use crate::vector::Vector;

/// Number of directions in the fixed support-deviation sample.
pub const DEVIATION_SAMPLE: usize = 10_000;

/// Seed for the fixed deviation sample in dimension >= 3 (constant by design:
/// the sample must not vary with the suite seed).
const SAMPLE_STREAM: u64 = 0x5eed_d1ec_7105;

/// V_1 of the unit ball in R^n: 2, pi, 4, 3pi/2, 16/3, ... Exact rational for
/// odd n; for even n the pinned rational pi approximation is substituted.
pub fn ball_v1_target(n: usize) -> Scalar {
    assert!(n >= 1);
    // f(1) = 2, f(k) = (2 pi / k) / f(k-1); V1(B^n) = n f(n).
    // Track the rational part and the power of pi (always 0 or 1).
    let mut rat = Scalar::from_int(2);
    let mut pi_pow = 0u8;
    for k in 2..=n {
        rat = Scalar::from_int(2) / (Scalar::from_int(k as i64) * rat);
        pi_pow = 1 - pi_pow;
    }
    let mut out = Scalar::from_int(n as i64) * rat;
    if pi_pow == 1 {
        out = out * pi_approx();
    }
    out
}

/// Best rational approximation of `x` with denominator <= max_den
/// (Stern-Brocot walk over the fractional part).
pub fn best_rational_approx(x: &Scalar, max_den: u64) -> Scalar {
    let max_den = Scalar::from_int(max_den as i64);
    let floor = Scalar::from_bigint(num_integer::Integer::div_floor(x.numer(), x.denom()));
    let frac = x - &floor;
    if frac.is_zero() {
        return floor;
    }
    let (mut a_num, mut a_den) = (Scalar::zero(), Scalar::one()); // 0/1
    let (mut b_num, mut b_den) = (Scalar::one(), Scalar::one()); // 1/1
    let mut best = if frac.clone() <= (&frac - Scalar::one()).abs() {
        Scalar::zero()
    } else {
        Scalar::one()
    };
    loop {
        let m_num = &a_num + &b_num;
        let m_den = &a_den + &b_den;
        if m_den > max_den {
            break;
        }
        let med = &m_num / &m_den;
        if (&frac - &med).abs() < (&frac - &best).abs() {
            best = med.clone();
        }
        if frac == med {
            break;
        }
        if frac < med {
            b_num = m_num;
            b_den = m_den;
        } else {
            a_num = m_num;
            a_den = m_den;
        }
    }
    floor + best
}

/// sin and cos of a rational angle by exact Taylor partial sums (25 terms;
/// the remainder is far below the snapping resolution for |x| <= pi).
fn sin_cos_rational(x: &Scalar) -> (Scalar, Scalar) {
    // A rounded angle keeps denominators small; the directions built from the
    // result are snapped to denominator <= 1000 anyway.
    let x = best_rational_approx(x, 1_000_000);
    let mut sin = Scalar::zero();
    let mut cos = Scalar::zero();
    let mut term = Scalar::one(); // x^(2j) / (2j)!
    for j in 0..25u32 {
        let sgn = if j % 2 == 0 { Scalar::one() } else { -Scalar::one() };
        cos += &(&sgn * &term);
        let sin_term = &term * &x / Scalar::from_int((2 * j + 1) as i64);
        sin += &(&sgn * &sin_term);
        term = &sin_term * &x / Scalar::from_int((2 * j + 2) as i64);
    }
    (sin, cos)
}

/// Exact unit-norm rational point at tangent-half-angle t.
fn circle_point(t: &Scalar) -> Vector {
    let t2 = t * t;
    let den = Scalar::one() + t2.clone();
    Vector::new(vec![
        (Scalar::one() - t2) / den.clone(),
        (Scalar::from_int(2) * t.clone()) / den,
    ])
}

/// Exact unit-norm rational point from the inverse stereographic map of a
/// rational parameter vector a in R^(n-1).
fn sphere_point(a: &[Scalar]) -> Vector {
    let mut norm_sq = Scalar::zero();
    for c in a {
        norm_sq += &(c * c);
    }
    let den = &norm_sq + Scalar::one();
    let mut coords: Vec<Scalar> = a
        .iter()
        .map(|c| (Scalar::from_int(2) * c.clone()) / den.clone())
        .collect();
    coords.push((norm_sq - Scalar::one()) / den);
    Vector::new(coords)
}

fn unit_directions_2d(m: usize) -> Vec<Vector> {
    let pi = pi_approx();
    (0..m)
        .map(|k| {
            let angle = &pi * Scalar::ratio(k as i64, m as i64);
            let (s, c) = sin_cos_rational(&angle);
            // tan of the half angle; angle < pi keeps 1 + cos positive
            let t = best_rational_approx(&(&s / &(Scalar::one() + c)), 1000);
            circle_point(&t)
        })
        .collect()
}

/// Squared distance between unit directions identified with their mirrors.
fn line_distance_sq(u: &Vector, v: &Vector) -> Scalar {
    let d1 = u.sub(v).norm_sq();
    let d2 = u.add(v).norm_sq();
    d1.min(d2)
}

fn unit_directions_nd(n: usize, m: usize, seed: u64) -> Vec<Vector> {
    let mut rng = Rng::new(seed).derive(&format!("ball-directions-{n}-{m}"));
    let mut dirs: Vec<Vector> = (0..n).map(|i| Vector::unit(n, i)).collect();
    const CANDIDATES: usize = 24;
    while dirs.len() < m {
        let mut best: Option<(Scalar, Vector)> = None;
        for _ in 0..CANDIDATES {
            let a: Vec<Scalar> = (0..n - 1)
                .map(|_| Scalar::ratio(rng.int_in(-128, 128), 64))
                .collect();
            let u = sphere_point(&a);
            let score = dirs
                .iter()
                .map(|v| line_distance_sq(&u, v))
                .min()
                .expect("dirs nonempty");
            match &best {
                Some((s, _)) if *s >= score => {}
                _ => best = Some((score, u)),
            }
        }
        dirs.push(best.expect("candidates nonempty").1);
    }
    dirs.truncate(m);
    dirs
}

/// Zonotopal approximant of the unit ball: m segments of equal rational
/// length, V_1-normalized. Deterministic for fixed (n, m, seed).
pub fn ball_zonotope(n: usize, m: usize, seed: u64) -> Result<Zonotope> {
    if n == 0 {
        return Err(Error::input("ball dimension must be positive"));
    }
    if m < n {
        return Err(Error::input(format!(
            "ball approximant needs at least n={n} directions, got m={m}"
        )));
    }
    let dirs: Vec<Vector> = match n {
        1 => vec![Vector::unit(1, 0); m],
        2 => unit_directions_2d(m),
        _ => unit_directions_nd(n, m, seed),
    };
    let target = ball_v1_target(n);
    let segment_length = target / Scalar::from_int(m as i64); // = 2r
    let gens = dirs.iter().map(|u| u.scale(&segment_length)).collect();
    Zonotope::new(n, gens)
}

/// Fixed direction sample used for the measured support deviation. The same
/// sample is used at every ball resolution of a given dimension.
pub fn deviation_sample(n: usize, count: usize) -> Vec<Vector> {
    assert!(n >= 2);
    if n == 2 {
        // quasi-uniform over the half-circle via the rational parameterization
        return (0..count)
            .map(|j| {
                let t = Scalar::ratio(2 * j as i64 - count as i64, count as i64);
                circle_point(&t)
            })
            .collect();
    }
    let mut rng = Rng::new(SAMPLE_STREAM).derive(&format!("deviation-sample-{n}"));
    (0..count)
        .map(|_| {
            let a: Vec<Scalar> = (0..n - 1)
                .map(|_| Scalar::ratio(rng.int_in(-128, 128), 64))
                .collect();
            sphere_point(&a)
        })
        .collect()
}

/// A ball approximant together with its measured support deviation
/// delta = max over the fixed sample of |h_{B_m}(u) - 1| (centered support).
#[derive(Debug)]
pub struct BallApprox {
    pub n: usize,
    pub m: usize,
    pub seed: u64,
    pub zonotope: Zonotope,
    delta: OnceLock<Scalar>,
    gamma: OnceLock<Scalar>,
    volume: OnceLock<Scalar>,
}

impl BallApprox {
    pub fn new(n: usize, m: usize, seed: u64) -> Result<Self> {
        Ok(BallApprox {
            n,
            m,
            seed,
            zonotope: ball_zonotope(n, m, seed)?,
            delta: OnceLock::new(),
            gamma: OnceLock::new(),
            volume: OnceLock::new(),
        })
    }

    pub fn body(&self) -> crate::body::Body {
        crate::body::Body::Zonotope(self.zonotope.clone())
    }

    /// Measured sup-sample deviation of the centered support function from 1.
    /// The evaluation splits every generator into a primitive integer
    /// direction and a rational length on a shared denominator, so each
    /// sample costs integer dot products plus one reduction.
    pub fn delta(&self) -> &Scalar {
        self.delta.get_or_init(|| {
            use num_integer::Integer;
            let sample = deviation_sample(self.n.max(2), DEVIATION_SAMPLE);
            let gens = self.zonotope.generators();
            let mut dirs: Vec<Vec<num_bigint::BigInt>> = Vec::with_capacity(gens.len());
            let mut lens: Vec<Scalar> = Vec::with_capacity(gens.len());
            for g in gens {
                let d = crate::linalg::primitive_integer_direction(g.coords());
                let k = d.iter().position(|c| !num_traits::Zero::is_zero(c)).expect("nonzero");
                lens.push((&g.coords()[k] / &Scalar::from_bigint(d[k].clone())).abs());
                dirs.push(d);
            }
            let mut shared = num_bigint::BigInt::from(1);
            for q in &lens {
                shared = shared.lcm(q.denom());
            }
            let scaled: Vec<num_bigint::BigInt> =
                lens.iter().map(|q| q.numer() * (&shared / q.denom())).collect();

            let mut worst = Scalar::zero();
            for u in &sample {
                let mut uden = num_bigint::BigInt::from(1);
                for c in u.coords() {
                    uden = uden.lcm(c.denom());
                }
                let uint: Vec<num_bigint::BigInt> = u
                    .coords()
                    .iter()
                    .map(|c| c.numer() * (&uden / c.denom()))
                    .collect();
                let mut total = num_bigint::BigInt::from(0);
                for (d, q) in dirs.iter().zip(&scaled) {
                    let mut dot = num_bigint::BigInt::from(0);
                    for (a, b) in d.iter().zip(&uint) {
                        dot += a * b;
                    }
                    total += q * num_traits::Signed::abs(&dot);
                }
                // h = total / (2 shared uden); deviation |h - 1|
                let denom = num_bigint::BigInt::from(2) * &shared * &uden;
                let dev = Scalar::from_big_ratio(
                    num_traits::Signed::abs(&(total - &denom)),
                    denom,
                )
                .expect("positive denominator");
                if dev > worst {
                    worst = dev;
                }
            }
            worst
        })
    }

    /// Exact volume of the approximant.
    pub fn volume(&self) -> Scalar {
        self.volume
            .get_or_init(|| {
                crate::mixedvol::volume(&self.body()).expect("ball volume is computable")
            })
            .clone()
    }

    /// Tightness constant of the even inequality relative to this
    /// approximant, cached (it is the most expensive repeated quantity).
    pub fn tightness_constant(&self) -> Scalar {
        self.gamma
            .get_or_init(|| {
                crate::valg::even_tightness_constant(self.n, &self.zonotope)
                    .expect("tightness constant is computable")
            })
            .clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mixedvol::{intrinsic_v1, V1};

    #[test]
    fn v1_targets() {
        assert_eq!(ball_v1_target(1), Scalar::from_int(2));
        assert_eq!(ball_v1_target(2), pi_approx());
        assert_eq!(ball_v1_target(3), Scalar::from_int(4));
        assert_eq!(ball_v1_target(4), Scalar::ratio(3, 2) * pi_approx());
        assert_eq!(ball_v1_target(5), Scalar::ratio(16, 3));
    }

    #[test]
    fn axis_cube_in_3d() {
        // m = n = 3 picks exactly the coordinate axes: a cube with half-side
        // 2/3, since V1(B^3) = 4 and the total segment length is 6r = 4.
        let b = ball_zonotope(3, 3, 99).unwrap();
        let mut gens = b.generators().to_vec();
        gens.sort();
        let expect = [
            Vector::new(vec![Scalar::zero(), Scalar::zero(), Scalar::ratio(4, 3)]),
            Vector::new(vec![Scalar::zero(), Scalar::ratio(4, 3), Scalar::zero()]),
            Vector::new(vec![Scalar::ratio(4, 3), Scalar::zero(), Scalar::zero()]),
        ];
        assert_eq!(gens, expect);
        assert_eq!(intrinsic_v1(&b), V1::Exact(Scalar::from_int(4)));
    }

    #[test]
    fn square_in_2d() {
        // m = 2 gives directions e1, e2 exactly; segment length pi_hat/2.
        let b = ball_zonotope(2, 2, 0).unwrap();
        let len = pi_approx() / Scalar::from_int(2);
        let mut gens = b.generators().to_vec();
        gens.sort();
        assert_eq!(
            gens,
            vec![
                Vector::new(vec![Scalar::zero(), len.clone()]),
                Vector::new(vec![len, Scalar::zero()]),
            ]
        );
    }

    #[test]
    fn v1_normalization_is_exact_for_all_dims() {
        for (n, m) in [(2usize, 7usize), (3, 6), (4, 9)] {
            let b = ball_zonotope(n, m, 5).unwrap();
            assert_eq!(intrinsic_v1(&b), V1::Exact(ball_v1_target(n)));
        }
    }

    #[test]
    fn deterministic_generators() {
        for (n, m) in [(2usize, 8usize), (3, 10), (4, 8)] {
            let a = ball_zonotope(n, m, 1234).unwrap();
            let b = ball_zonotope(n, m, 1234).unwrap();
            assert_eq!(a, b);
        }
        assert_ne!(
            ball_zonotope(3, 10, 1).unwrap(),
            ball_zonotope(3, 10, 2).unwrap()
        );
    }

    #[test]
    fn rejects_too_few_directions() {
        assert!(ball_zonotope(3, 2, 0).is_err());
    }

    #[test]
    fn deviation_decreases_as_m_doubles() {
        let d8 = BallApprox::new(2, 8, 0).unwrap().delta().clone();
        let d16 = BallApprox::new(2, 16, 0).unwrap().delta().clone();
        let d32 = BallApprox::new(2, 32, 0).unwrap().delta().clone();
        assert!(d8 > d16, "delta(8)={d8:?} delta(16)={d16:?}");
        assert!(d16 > d32, "delta(16)={d16:?} delta(32)={d32:?}");
        // sanity: near pi^2/(8 m^2) for the snapped polygon family
        assert!(d8 < Scalar::ratio(1, 20));
        assert!(d32 > Scalar::zero());
    }

    #[test]
    fn best_rational_approx_hits_simple_targets() {
        let x: Scalar = "355/113".parse().unwrap();
        assert_eq!(best_rational_approx(&x, 113), x);
        assert_eq!(best_rational_approx(&x, 100), Scalar::ratio(311, 99));
        let y = Scalar::ratio(1, 3);
        assert_eq!(best_rational_approx(&y, 10), y);
        let z: Scalar = "-7/2".parse().unwrap();
        assert_eq!(best_rational_approx(&z, 2), z);
    }
}

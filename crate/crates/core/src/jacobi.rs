//! Eigenvalues of small symmetric matrices by cyclic Jacobi rotations.
//!
//! This is the single floating-point computation in the workspace; it backs
//! the spectral side of the Gram positivity check, whose binding assertions
//! are the exact rational quadratic-form values.

/// Eigenvalues (unsorted) of a symmetric matrix, by cyclic Jacobi sweeps.
pub fn symmetric_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    if n == 0 {
        return Vec::new();
    }
    debug_assert!(a.iter().all(|r| r.len() == n));
    const MAX_SWEEPS: usize = 50;

    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0f64;
        let mut scale = 0.0f64;
        for p in 0..n {
            scale += a[p][p].abs();
            for q in (p + 1)..n {
                off += a[p][q].abs();
            }
        }
        if off <= 1e-15 * scale.max(1.0) {
            break;
        }
        for p in 0..n - 1 {
            for q in (p + 1)..n {
                let apq = a[p][q];
                if apq == 0.0 {
                    continue;
                }
                let theta = 0.5 * (a[q][q] - a[p][p]) / apq;
                let t = if theta.abs() > 1e18 {
                    0.5 / theta
                } else {
                    let s = theta.signum();
                    s / (theta.abs() + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i][i]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted(mut v: Vec<f64>) -> Vec<f64> {
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v
    }

    #[test]
    fn diagonal_matrix() {
        let eig = symmetric_eigenvalues(vec![
            vec![3.0, 0.0],
            vec![0.0, -1.0],
        ]);
        assert_eq!(sorted(eig), vec![-1.0, 3.0]);
    }

    #[test]
    fn known_two_by_two() {
        // eigenvalues of [[2,1],[1,2]] are 1 and 3
        let eig = sorted(symmetric_eigenvalues(vec![
            vec![2.0, 1.0],
            vec![1.0, 2.0],
        ]));
        assert!((eig[0] - 1.0).abs() < 1e-12);
        assert!((eig[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn trace_and_psd_are_preserved() {
        let m = vec![
            vec![4.0, 1.0, 0.5, 0.0],
            vec![1.0, 3.0, 0.2, 0.1],
            vec![0.5, 0.2, 2.0, 0.3],
            vec![0.0, 0.1, 0.3, 1.0],
        ];
        let trace: f64 = (0..4).map(|i| m[i][i]).sum();
        let eig = symmetric_eigenvalues(m);
        let sum: f64 = eig.iter().sum();
        assert!((sum - trace).abs() < 1e-9);
        // diagonally dominant with positive diagonal: positive definite
        assert!(eig.iter().all(|&l| l > 0.0));
    }
}

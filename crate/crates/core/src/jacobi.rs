//! Cyclic Jacobi eigenvalue iteration for small symmetric f64 matrices.
//!
//! Heuristic use only: the explicit-formula search uses it to propose face
//! minimizers; every claim is re-verified in interval arithmetic afterwards.

/// Eigenvalues and eigenvectors (columns of `v`) of a symmetric matrix.
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
}

/// Cyclic Jacobi sweeps until all off-diagonal entries are below `tol`.
pub fn jacobi_symmetric(a: &[Vec<f64>], tol: f64) -> Eigen {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a.to_vec();
    let mut v = vec![vec![0.0; n]; n];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for _sweep in 0..64 {
        let mut off = 0.0f64;
        for i in 0..n {
            for j in (i + 1)..n {
                off = off.max(m[i][j].abs());
            }
        }
        if off <= tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if m[p][q].abs() <= tol * 1e-2 {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (mkp, mkq) = (m[k][p], m[k][q]);
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let (mpk, mqk) = (m[p][k], m[q][k]);
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let (vkp, vkq) = (v[k][p], v[k][q]);
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let values = (0..n).map(|i| m[i][i]).collect();
    let vectors = (0..n)
        .map(|col| (0..n).map(|row| v[row][col]).collect())
        .collect();
    Eigen { values, vectors }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two() {
        let a = vec![vec![2.0, 1.0], vec![1.0, 2.0]];
        let e = jacobi_symmetric(&a, 1e-12);
        let mut vals = e.values.clone();
        vals.sort_by(|x, y| x.partial_cmp(y).unwrap());
        assert!((vals[0] - 1.0).abs() < 1e-10);
        assert!((vals[1] - 3.0).abs() < 1e-10);
    }

    #[test]
    fn identity_untouched() {
        let a = vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]];
        let e = jacobi_symmetric(&a, 1e-12);
        for v in e.values {
            assert!((v - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn residual_is_small() {
        let a = vec![
            vec![4.0, -1.0, 0.5, 0.0],
            vec![-1.0, 3.0, 0.2, -0.3],
            vec![0.5, 0.2, -2.0, 1.0],
            vec![0.0, -0.3, 1.0, 0.7],
        ];
        let e = jacobi_symmetric(&a, 1e-13);
        for (k, lam) in e.values.iter().enumerate() {
            for i in 0..4 {
                let av: f64 = (0..4).map(|j| a[i][j] * e.vectors[k][j]).sum();
                assert!((av - lam * e.vectors[k][i]).abs() < 1e-8);
            }
        }
    }
}

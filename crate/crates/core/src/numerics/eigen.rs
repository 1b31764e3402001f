//! Cyclic Jacobi eigensolver for symmetric float matrices.

#[derive(Clone, Debug)]
pub struct EigenResult {
    /// Eigenvalues in ascending order.
    pub eigenvalues: Vec<f64>,
    /// Columns are the matching eigenvectors.
    pub eigenvectors: Vec<Vec<f64>>,
    /// max over pairs of ||A v - lambda v||_inf.
    pub max_residual: f64,
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
///
/// Fails if the input is not symmetric within `tol`.
pub fn symmetric_eigen(a: &[Vec<f64>], tol: f64) -> Result<EigenResult, String> {
    let n = a.len();
    for row in a {
        if row.len() != n {
            return Err("matrix is not square".into());
        }
    }
    for i in 0..n {
        for j in 0..n {
            if (a[i][j] - a[j][i]).abs() > tol {
                return Err(format!("matrix not symmetric at ({i},{j})"));
            }
        }
    }
    let mut m: Vec<Vec<f64>> = a.to_vec();
    // Symmetrize exactly to keep rotations stable.
    for i in 0..n {
        for j in i + 1..n {
            let avg = 0.5 * (m[i][j] + m[j][i]);
            m[i][j] = avg;
            m[j][i] = avg;
        }
    }
    let mut v = vec![vec![0.0; n]; n];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }

    let off = |m: &Vec<Vec<f64>>| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += m[i][j] * m[i][j];
                }
            }
        }
        s.sqrt()
    };

    let target = (tol * 1e-3).max(f64::MIN_POSITIVE.sqrt());
    for _sweep in 0..100 {
        if off(&m) <= target {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if m[p][q].abs() <= f64::EPSILON * 16.0 {
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
                    let mkp = m[k][p];
                    let mkq = m[k][q];
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[p][k];
                    let mqk = m[q][k];
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let vkp = v[k][p];
                    let vkq = v[k][q];
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut pairs: Vec<(f64, Vec<f64>)> =
        (0..n).map(|i| (m[i][i], (0..n).map(|k| v[k][i]).collect())).collect();
    pairs.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());

    let mut max_residual: f64 = 0.0;
    for (lam, vec) in &pairs {
        for i in 0..n {
            let mut av = 0.0;
            for j in 0..n {
                av += a[i][j] * vec[j];
            }
            max_residual = max_residual.max((av - lam * vec[i]).abs());
        }
    }

    Ok(EigenResult {
        eigenvalues: pairs.iter().map(|p| p.0).collect(),
        eigenvectors: pairs.into_iter().map(|p| p.1).collect(),
        max_residual,
    })
}

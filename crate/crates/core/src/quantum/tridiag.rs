//! Eigendecomposition of real symmetric tridiagonal matrices by the implicit
//! QL algorithm with Wilkinson-style shifts (EISPACK `tql2` lineage).

use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 60;

/// Eigenpairs of a symmetric tridiagonal matrix, ascending energies.
#[derive(Debug, Clone)]
pub struct TridiagEigen {
    dim: usize,
    pub energies: Vec<f64>,
    /// Column-major: eigenvector `k` is `vectors[k*dim .. (k+1)*dim]`.
    vectors: Vec<f64>,
}

impl TridiagEigen {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vector(&self, k: usize) -> &[f64] {
        &self.vectors[k * self.dim..(k + 1) * self.dim]
    }

    /// Component `i` of eigenvector `k`.
    pub fn component(&self, i: usize, k: usize) -> f64 {
        self.vectors[k * self.dim + i]
    }
}

/// Diagonalize the matrix with main diagonal `diag` (length n) and
/// off-diagonal `off` (length n-1).
pub fn symmetric_tridiagonal_eigen(diag: &[f64], off: &[f64]) -> Result<TridiagEigen> {
    let n = diag.len();
    if n == 0 || off.len() + 1 != n {
        return Err(Error::param(format!(
            "tridiagonal shape mismatch: {} diagonal vs {} off-diagonal entries",
            n,
            off.len()
        )));
    }
    let mut d = diag.to_vec();
    let mut e = off.to_vec();
    e.push(0.0);
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }

    let eps = f64::EPSILON;
    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }
        if m > l {
            let mut sweeps = 0;
            loop {
                sweeps += 1;
                if sweeps > MAX_SWEEPS {
                    return Err(Error::Eigensolver {
                        index: l,
                        iterations: sweeps,
                        dim: n,
                    });
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let (mut c, mut c2, mut c3) = (1.0, 1.0, 1.0);
                let el1 = e[l + 1];
                let (mut s, mut s2) = (0.0, 0.0);
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    let h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    let (left, right) = v.split_at_mut((i + 1) * n);
                    let col_i = &mut left[i * n..];
                    let col_i1 = &mut right[..n];
                    for (a, b) in col_i.iter_mut().zip(col_i1.iter_mut()) {
                        let h = *b;
                        *b = s * *a + c * h;
                        *a = c * *a - s * h;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
    let energies = order.iter().map(|&k| d[k]).collect();
    let mut vectors = Vec::with_capacity(n * n);
    for &k in &order {
        vectors.extend_from_slice(&v[k * n..(k + 1) * n]);
    }
    Ok(TridiagEigen {
        dim: n,
        energies,
        vectors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn residual(diag: &[f64], off: &[f64], eig: &TridiagEigen) -> f64 {
        let n = diag.len();
        let mut worst: f64 = 0.0;
        for k in 0..n {
            let x = eig.vector(k);
            for i in 0..n {
                let mut hx = diag[i] * x[i];
                if i > 0 {
                    hx += off[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    hx += off[i] * x[i + 1];
                }
                worst = worst.max((hx - eig.energies[k] * x[i]).abs());
            }
        }
        worst
    }

    #[test]
    fn two_by_two() {
        let eig = symmetric_tridiagonal_eigen(&[0.0, 0.0], &[1.0]).unwrap();
        assert!((eig.energies[0] + 1.0).abs() < 1e-15);
        assert!((eig.energies[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn one_by_one() {
        let eig = symmetric_tridiagonal_eigen(&[3.5], &[]).unwrap();
        assert_eq!(eig.energies, vec![3.5]);
        assert_eq!(eig.vector(0), &[1.0]);
    }

    #[test]
    fn free_chain_spectrum() {
        // uniform hopping: E_k = 2 cos(k π / (n+1))
        let n = 40;
        let eig = symmetric_tridiagonal_eigen(&vec![0.0; n], &vec![1.0; n - 1]).unwrap();
        let mut exact: Vec<f64> = (1..=n)
            .map(|k| 2.0 * (k as f64 * std::f64::consts::PI / (n as f64 + 1.0)).cos())
            .collect();
        exact.sort_by(f64::total_cmp);
        for (a, b) in eig.energies.iter().zip(&exact) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn eigenvectors_orthonormal_and_satisfy_equation() {
        let n = 25;
        let diag: Vec<f64> = (0..n).map(|i| ((i * 7) % 5) as f64 - 2.0).collect();
        let off: Vec<f64> = (1..n).map(|i| 0.3 + (i % 3) as f64).collect();
        let eig = symmetric_tridiagonal_eigen(&diag, &off).unwrap();
        assert!(residual(&diag, &off, &eig) < 1e-12);
        for a in 0..n {
            for b in 0..n {
                let dot: f64 = eig.vector(a).iter().zip(eig.vector(b)).map(|(x, y)| x * y).sum();
                let want = if a == b { 1.0 } else { 0.0 };
                assert!((dot - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn shape_mismatch() {
        assert!(symmetric_tridiagonal_eigen(&[1.0, 2.0], &[]).is_err());
        assert!(symmetric_tridiagonal_eigen(&[], &[]).is_err());
    }
}

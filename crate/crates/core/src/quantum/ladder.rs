use num_complex::Complex64;
use serde::Serialize;

use super::tridiag::{symmetric_tridiagonal_eigen, TridiagEigen};
use crate::error::{Error, Result};
use crate::numerics::{integrate_with, TimeGrid, Trajectory};

/// Tridiagonal collective Hamiltonian in units of `g/V`.
///
/// `offdiag[i-1] = i (N - i + 1)` couples `|i-1>` and `|i>`;
/// `diag[i] = -(λ/2)(N - 2i)²` is the `λ σ³τ³ / 2` term on ladder states.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LadderHamiltonian {
    pub n: usize,
    pub lambda: f64,
    pub offdiag: Vec<f64>,
    pub diag: Vec<f64>,
}

pub fn build_ladder(n: usize, lambda: f64) -> Result<LadderHamiltonian> {
    if n == 0 {
        return Err(Error::param("ladder needs at least one pair (n >= 1)"));
    }
    if !lambda.is_finite() {
        return Err(Error::param("lambda must be finite"));
    }
    let nf = n as f64;
    let offdiag = (1..=n).map(|i| i as f64 * (nf - i as f64 + 1.0)).collect();
    let diag = (0..=n)
        .map(|i| {
            let m = nf - 2.0 * i as f64;
            if lambda == 0.0 {
                0.0
            } else {
                -0.5 * lambda * m * m
            }
        })
        .collect();
    Ok(LadderHamiltonian {
        n,
        lambda,
        offdiag,
        diag,
    })
}

impl LadderHamiltonian {
    pub fn dim(&self) -> usize {
        self.n + 1
    }

    /// Diagonal and off-diagonal in dimensionless time (divided by N).
    pub fn scaled(&self) -> (Vec<f64>, Vec<f64>) {
        let s = 1.0 / self.n as f64;
        (
            self.diag.iter().map(|d| d * s).collect(),
            self.offdiag.iter().map(|o| o * s).collect(),
        )
    }

    /// ζ weight `(N - 2i)/N` of each ladder state.
    pub fn zeta_weights(&self) -> Vec<f64> {
        let nf = self.n as f64;
        (0..=self.n).map(|i| (nf - 2.0 * i as f64) / nf).collect()
    }

    /// `<ψ|H|ψ>` in dimensionless units.
    pub fn expectation(&self, psi: &[Complex64]) -> f64 {
        let (d, o) = self.scaled();
        let mut e = 0.0;
        for i in 0..psi.len() {
            e += d[i] * psi[i].norm_sqr();
            if i + 1 < psi.len() {
                e += 2.0 * o[i] * (psi[i].conj() * psi[i + 1]).re;
            }
        }
        e
    }

    /// `-i H ψ` with the dimensionless Hamiltonian.
    fn apply_minus_i_h(&self, d: &[f64], o: &[f64], psi: &[Complex64]) -> Vec<Complex64> {
        let n = psi.len();
        (0..n)
            .map(|i| {
                let mut h = psi[i] * d[i];
                if i > 0 {
                    h += psi[i - 1] * o[i - 1];
                }
                if i + 1 < n {
                    h += psi[i + 1] * o[i];
                }
                Complex64::new(h.im, -h.re)
            })
            .collect()
    }
}

/// Amplitudes over the conversion-number states `|0>..|N>`.
#[derive(Debug, Clone, PartialEq)]
pub struct LadderState {
    pub amps: Vec<Complex64>,
}

impl LadderState {
    /// All gravitons.
    pub fn ground(n: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); n + 1];
        amps[0] = Complex64::new(1.0, 0.0);
        Self { amps }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn zeta(&self) -> f64 {
        let n = self.amps.len() - 1;
        let nf = n as f64;
        self.amps
            .iter()
            .enumerate()
            .map(|(i, a)| a.norm_sqr() * (nf - 2.0 * i as f64) / nf)
            .sum()
    }
}

/// Spectral propagator for evolution out of `|0>`.
#[derive(Debug, Clone)]
pub struct LadderPropagator {
    hamiltonian: LadderHamiltonian,
    eigen: TridiagEigen,
}

impl LadderPropagator {
    pub fn new(h: &LadderHamiltonian) -> Result<Self> {
        let (d, o) = h.scaled();
        let eigen = symmetric_tridiagonal_eigen(&d, &o)?;
        Ok(Self {
            hamiltonian: h.clone(),
            eigen,
        })
    }

    /// Dimensionless eigenvalues, ascending.
    pub fn energies(&self) -> &[f64] {
        &self.eigen.energies
    }

    pub fn hamiltonian(&self) -> &LadderHamiltonian {
        &self.hamiltonian
    }

    /// `ψ(τ) = Σ_k v_k <v_k|0> e^{-i E_k τ}`
    pub fn state_at(&self, tau: f64) -> LadderState {
        let dim = self.eigen.dim();
        let mut re = vec![0.0; dim];
        let mut im = vec![0.0; dim];
        for (k, &e) in self.eigen.energies.iter().enumerate() {
            let c = self.eigen.component(0, k);
            if c == 0.0 {
                continue;
            }
            let (s, co) = (e * tau).sin_cos();
            let (ar, ai) = (c * co, -c * s);
            for ((r, i), &v) in re.iter_mut().zip(im.iter_mut()).zip(self.eigen.vector(k)) {
                *r += v * ar;
                *i += v * ai;
            }
        }
        LadderState {
            amps: re
                .into_iter()
                .zip(im)
                .map(|(r, i)| Complex64::new(r, i))
                .collect(),
        }
    }

    /// Energy scale used for relative energy drift: `max(|E(0)|, spectral radius)`.
    fn energy_scale(&self, e0: f64) -> f64 {
        let radius = self
            .eigen
            .energies
            .iter()
            .fold(0.0f64, |m, e| m.max(e.abs()));
        e0.abs().max(radius).max(f64::MIN_POSITIVE)
    }

    pub fn evolve(&self, grid: &TimeGrid) -> Result<Trajectory> {
        let h = &self.hamiltonian;
        let weights = h.zeta_weights();
        let e0 = h.expectation(&LadderState::ground(h.n).amps);
        let scale = self.energy_scale(e0);
        let n = grid.len();
        let mut times = Vec::with_capacity(n);
        let mut zeta = Vec::with_capacity(n);
        let mut norm = Vec::with_capacity(n);
        let mut energy = Vec::with_capacity(n);
        let mut total_s3 = Vec::with_capacity(n);
        for t in grid.times() {
            let psi = self.state_at(t);
            let probs: Vec<f64> = psi.amps.iter().map(|a| a.norm_sqr()).collect();
            times.push(t);
            zeta.push(probs.iter().zip(&weights).map(|(p, w)| p * w).sum());
            norm.push(probs.iter().sum::<f64>() - 1.0);
            energy.push((h.expectation(&psi.amps) - e0) / scale);
            let nf = h.n as f64;
            total_s3.push(
                probs
                    .iter()
                    .enumerate()
                    .map(|(i, p)| {
                        let sigma3 = nf - 2.0 * i as f64;
                        let tau3 = 2.0 * i as f64 - nf;
                        p * (sigma3 + tau3)
                    })
                    .sum(),
            );
        }
        Trajectory::new(times, zeta)?
            .with_audit("norm_drift", norm)?
            .with_audit("energy_drift", energy)?
            .with_audit("sigma3_plus_tau3", total_s3)
    }
}

/// Exact evolution from `|0>` by eigendecomposition.
pub fn evolve_ladder(h: &LadderHamiltonian, grid: &TimeGrid) -> Result<Trajectory> {
    LadderPropagator::new(h)?.evolve(grid)
}

/// RK4 time stepping of the Schrödinger equation; cross-check for
/// [`evolve_ladder`]. Needs `dt · ||H|| ≲ 1`.
pub fn evolve_ladder_stepping(h: &LadderHamiltonian, grid: &TimeGrid) -> Result<Trajectory> {
    let (d, o) = h.scaled();
    let weights = h.zeta_weights();
    let mut times = Vec::with_capacity(grid.len());
    let mut zeta = Vec::with_capacity(grid.len());
    let mut norm = Vec::with_capacity(grid.len());
    integrate_with(
        |_, psi: &Vec<Complex64>| h.apply_minus_i_h(&d, &o, psi),
        LadderState::ground(h.n).amps,
        grid,
        |_, t, psi| {
            times.push(t);
            zeta.push(psi.iter().zip(&weights).map(|(a, w)| a.norm_sqr() * w).sum());
            norm.push(psi.iter().map(|a| a.norm_sqr()).sum::<f64>() - 1.0);
        },
    )?;
    Trajectory::new(times, zeta)?.with_audit("norm_drift", norm)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_ladder() {
        let h = build_ladder(1, 0.0).unwrap();
        assert_eq!(h.offdiag, vec![1.0]);
        assert_eq!(h.diag, vec![0.0, 0.0]);
    }

    #[test]
    fn four_pairs() {
        let h = build_ladder(4, 0.0).unwrap();
        assert_eq!(h.offdiag, vec![4.0, 6.0, 6.0, 4.0]);
    }

    #[test]
    fn lambda_diagonal() {
        let h = build_ladder(2, 1.0).unwrap();
        assert_eq!(h.diag, vec![-2.0, 0.0, -2.0]);
    }

    #[test]
    fn zero_pairs_rejected() {
        assert!(build_ladder(0, 0.0).is_err());
    }

    #[test]
    fn offdiag_shape() {
        let h = build_ladder(9, 0.0).unwrap();
        assert_eq!(h.offdiag[0], 9.0);
        assert_eq!(h.offdiag[8], 9.0);
        let (imax, _) = h
            .offdiag
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap();
        assert!((imax as f64 + 1.0 - 5.0).abs() <= 1.0);
    }

    #[test]
    fn two_level_rabi() {
        let h = build_ladder(1, 0.0).unwrap();
        let grid = TimeGrid::horizon(6.0, 0.01).unwrap();
        let traj = evolve_ladder(&h, &grid).unwrap();
        for (t, z) in traj.times().iter().zip(traj.zeta()) {
            assert!((z - (2.0 * t).cos()).abs() < 1e-8);
        }
    }

    #[test]
    fn starts_all_gravitons() {
        for n in [1, 2, 7, 64] {
            let traj = evolve_ladder(&build_ladder(n, 0.3).unwrap(), &TimeGrid::horizon(1.0, 0.5).unwrap())
                .unwrap();
            assert!((traj.zeta()[0] - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn stepping_agrees_with_spectral() {
        let h = build_ladder(20, 0.4).unwrap();
        let grid = TimeGrid::horizon(5.0, 1e-3).unwrap();
        let a = evolve_ladder(&h, &grid).unwrap();
        let b = evolve_ladder_stepping(&h, &grid).unwrap();
        for (x, y) in a.zeta().iter().zip(b.zeta()) {
            assert!((x - y).abs() < 1e-8);
        }
    }

    #[test]
    fn spectrum_symmetric_without_lambda() {
        let p = LadderPropagator::new(&build_ladder(33, 0.0).unwrap()).unwrap();
        let e = p.energies();
        let k = e.len();
        for i in 0..k {
            assert!((e[i] + e[k - 1 - i]).abs() < 1e-8);
        }
    }
}

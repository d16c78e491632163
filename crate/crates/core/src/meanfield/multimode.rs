use num_complex::Complex64;
use serde::Serialize;

use super::single::initial_seed_amplitude;
use super::sphere::{sample, Sampling};
use super::{BlochMode, Cloud};
use crate::error::{Error, Result};
use crate::numerics::{first_zero_crossing, integrate_with, OdeState, TimeGrid, Trajectory};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// How the pair coupling depends on the angle between momenta.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelKind {
    /// `g_qk = strength · (1 − cos θ_qk)`
    #[default]
    Angular,
    /// `(1 − cos θ)` replaced by its solid-angle average, 1.
    SolidAngleAverage,
}

/// Modes of both clouds plus the coupling that links them.
#[derive(Debug, Clone, PartialEq)]
pub struct AngularEnsemble {
    pub modes: Vec<BlochMode>,
    pub kernel_strength: f64,
    pub kernel: KernelKind,
    pub lambda: f64,
}

impl AngularEnsemble {
    pub fn new(
        modes: Vec<BlochMode>,
        kernel_strength: f64,
        kernel: KernelKind,
        lambda: f64,
    ) -> Result<Self> {
        let ens = Self {
            modes,
            kernel_strength,
            kernel,
            lambda,
        };
        ens.validate()?;
        Ok(ens)
    }

    fn validate(&self) -> Result<()> {
        for cloud in [Cloud::A, Cloud::B] {
            if !self.modes.iter().any(|m| m.cloud == cloud) {
                return Err(Error::param(format!("cloud {cloud:?} has no modes")));
            }
        }
        for (k, m) in self.modes.iter().enumerate() {
            let d = m.direction;
            let norm = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
            if (norm - 1.0).abs() > 1e-12 {
                return Err(Error::param(format!("mode {k} direction has length {norm}")));
            }
            if !(m.s3.is_finite() && m.s_plus.re.is_finite() && m.s_plus.im.is_finite()) {
                return Err(Error::param(format!("mode {k} is not finite")));
            }
        }
        if !(self.kernel_strength > 0.0) || !self.kernel_strength.is_finite() {
            return Err(Error::param("kernel strength must be positive"));
        }
        if !self.lambda.is_finite() {
            return Err(Error::param("lambda must be finite"));
        }
        Ok(())
    }

    /// Two clouds of total occupation `n` each, spread evenly over the given
    /// directions. The cloud seed `ε·sqrt(n/2)` is split equally over every
    /// mode of both clouds.
    pub fn clouds(
        n: f64,
        dirs_a: &[[f64; 3]],
        dirs_b: &[[f64; 3]],
        seed: Complex64,
        lambda: f64,
        kernel: KernelKind,
    ) -> Result<Self> {
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::param(format!("occupation must be positive, got {n}")));
        }
        let total_seed = initial_seed_amplitude(n, seed);
        let build = |dirs: &[[f64; 3]], cloud: Cloud, sign: f64| -> Result<Vec<BlochMode>> {
            let m = dirs.len() as f64;
            let occ = n / m;
            let sp = total_seed / m;
            let rest = occ * occ - 4.0 * sp.norm_sqr();
            if rest < 0.0 {
                return Err(Error::param(format!(
                    "seed {seed} too large for per-mode occupation {occ}"
                )));
            }
            Ok(dirs
                .iter()
                .map(|&direction| BlochMode {
                    s_plus: sp,
                    s3: sign * rest.sqrt(),
                    direction,
                    cloud,
                })
                .collect())
        };
        let mut modes = build(dirs_a, Cloud::A, 1.0)?;
        modes.extend(build(dirs_b, Cloud::B, -1.0)?);
        Self::new(modes, 1.0, kernel, lambda)
    }

    /// Two clashing monochromatic beams (one antipodal mode per cloud).
    pub fn beams(n: f64, seed: Complex64, lambda: f64) -> Result<Self> {
        Self::clouds(
            n,
            &[[0.0, 0.0, 1.0]],
            &[[0.0, 0.0, -1.0]],
            seed,
            lambda,
            KernelKind::Angular,
        )
    }

    /// Isotropic clouds of `m` modes each; cloud B uses the reflected
    /// directions of cloud A.
    pub fn isotropic(
        n: f64,
        m: usize,
        seed: Complex64,
        lambda: f64,
        sampling: Sampling,
        rng_seed: u64,
    ) -> Result<Self> {
        let dirs_a = sample(m, sampling, rng_seed)?;
        let dirs_b: Vec<[f64; 3]> = dirs_a.iter().map(|d| [-d[0], -d[1], -d[2]]).collect();
        Self::clouds(n, &dirs_a, &dirs_b, seed, lambda, KernelKind::Angular)
    }

    pub fn cloud(&self, cloud: Cloud) -> impl Iterator<Item = &BlochMode> {
        self.modes.iter().filter(move |m| m.cloud == cloud)
    }

    /// Coupling between an A mode and a B mode.
    pub fn coupling(&self, a: &BlochMode, b: &BlochMode) -> f64 {
        match self.kernel {
            KernelKind::Angular => {
                let c = a.direction[0] * b.direction[0]
                    + a.direction[1] * b.direction[1]
                    + a.direction[2] * b.direction[2];
                self.kernel_strength * (1.0 - c)
            }
            KernelKind::SolidAngleAverage => self.kernel_strength,
        }
    }

    fn kernel_matrix(&self) -> Kernel {
        let a: Vec<&BlochMode> = self.cloud(Cloud::A).collect();
        let b: Vec<&BlochMode> = self.cloud(Cloud::B).collect();
        let mut g = Vec::with_capacity(a.len() * b.len());
        for p in &a {
            for q in &b {
                g.push(self.coupling(p, q));
            }
        }
        Kernel {
            rows: a.len(),
            cols: b.len(),
            g,
        }
    }

    fn state(&self) -> MultiState {
        let (a, b): (Vec<&BlochMode>, Vec<&BlochMode>) =
            (self.cloud(Cloud::A).collect(), self.cloud(Cloud::B).collect());
        MultiState {
            sp: a.iter().map(|m| m.s_plus).collect(),
            tp: b.iter().map(|m| m.s_plus).collect(),
            s3: a.iter().map(|m| m.s3).collect(),
            t3: b.iter().map(|m| m.s3).collect(),
        }
    }
}

struct Kernel {
    rows: usize,
    cols: usize,
    g: Vec<f64>,
}

impl Kernel {
    fn row(&self, i: usize) -> &[f64] {
        &self.g[i * self.cols..(i + 1) * self.cols]
    }

    /// `Σ_j g_ij x_j` for every A mode i.
    fn apply<T>(&self, x: &[T]) -> Vec<T>
    where
        T: Copy + Default + std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T>,
    {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .fold(T::default(), |acc, (&g, &v)| acc + v * g)
            })
            .collect()
    }

    /// `Σ_i g_ij x_i` for every B mode j.
    fn apply_transpose<T>(&self, x: &[T]) -> Vec<T>
    where
        T: Copy + Default + std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T>,
    {
        let mut out = vec![T::default(); self.cols];
        for (i, &xi) in x.iter().enumerate().take(self.rows) {
            for (o, &g) in out.iter_mut().zip(self.row(i)) {
                *o = *o + xi * g;
            }
        }
        out
    }
}

#[derive(Debug, Clone)]
struct MultiState {
    sp: Vec<Complex64>,
    tp: Vec<Complex64>,
    s3: Vec<f64>,
    t3: Vec<f64>,
}

impl OdeState for MultiState {
    fn axpy(&mut self, h: f64, o: &Self) {
        self.sp.axpy(h, &o.sp);
        self.tp.axpy(h, &o.tp);
        self.s3.axpy(h, &o.s3);
        self.t3.axpy(h, &o.t3);
    }

    fn all_finite(&self) -> bool {
        self.sp.all_finite() && self.tp.all_finite() && self.s3.all_finite() && self.t3.all_finite()
    }
}

impl MultiState {
    fn lengths(&self) -> Vec<f64> {
        let len = |p: &Complex64, z: &f64| (z * z + 4.0 * p.norm_sqr()).sqrt();
        self.sp
            .iter()
            .zip(&self.s3)
            .map(|(p, z)| len(p, z))
            .chain(self.tp.iter().zip(&self.t3).map(|(p, z)| len(p, z)))
            .collect()
    }

    fn energy(&self, k: &Kernel, lambda: f64) -> f64 {
        let t = k.apply(&self.tp);
        let mut e: f64 = self.sp.iter().zip(&t).map(|(s, t)| 2.0 * (s * t.conj()).re).sum();
        if lambda != 0.0 {
            let u = k.apply(&self.t3);
            e += 0.5 * lambda * self.s3.iter().zip(&u).map(|(s, u)| s * u).sum::<f64>();
        }
        e
    }
}

/// Evolve the ensemble; ζ is the cloud-A average `Σσ³ / Σ|σ|`.
pub fn run_multimode(ensemble: &AngularEnsemble, grid: &TimeGrid) -> Result<Trajectory> {
    ensemble.validate()?;
    let kernel = ensemble.kernel_matrix();
    let lambda = ensemble.lambda;
    let y0 = ensemble.state();
    let len0 = y0.lengths();
    let (na, nb) = (
        len0[..kernel.rows].iter().sum::<f64>(),
        len0[kernel.rows..].iter().sum::<f64>(),
    );
    let n_ref = 0.5 * (na + nb);
    if !(n_ref > 0.0) {
        return Err(Error::param("ensemble has zero total occupation"));
    }
    let inv_n = 1.0 / n_ref;

    let deriv = |_: f64, y: &MultiState| {
        let t_sum = kernel.apply(&y.tp);
        let s_sum = kernel.apply_transpose(&y.sp);
        let mut d_sp: Vec<Complex64> = y
            .s3
            .iter()
            .zip(&t_sum)
            .map(|(&s3, &t)| -I * t * (s3 * inv_n))
            .collect();
        let mut d_tp: Vec<Complex64> = y
            .t3
            .iter()
            .zip(&s_sum)
            .map(|(&t3, &s)| -I * s * (t3 * inv_n))
            .collect();
        if lambda != 0.0 {
            let u = kernel.apply(&y.t3);
            let r = kernel.apply_transpose(&y.s3);
            for ((d, &sp), &u) in d_sp.iter_mut().zip(&y.sp).zip(&u) {
                *d += I * sp * (lambda * u * inv_n);
            }
            for ((d, &tp), &r) in d_tp.iter_mut().zip(&y.tp).zip(&r) {
                *d += I * tp * (lambda * r * inv_n);
            }
        }
        let d_s3 = y
            .sp
            .iter()
            .zip(&t_sum)
            .map(|(sp, t)| 4.0 * (sp * t.conj()).im * inv_n)
            .collect();
        let d_t3 = y
            .tp
            .iter()
            .zip(&s_sum)
            .map(|(tp, s)| -4.0 * (s * tp.conj()).im * inv_n)
            .collect();
        MultiState {
            sp: d_sp,
            tp: d_tp,
            s3: d_s3,
            t3: d_t3,
        }
    };

    let total0: f64 = y0.s3.iter().chain(&y0.t3).sum();
    let e0 = y0.energy(&kernel, lambda);
    let cap = grid.len();
    let mut times = Vec::with_capacity(cap);
    let mut zeta = Vec::with_capacity(cap);
    let mut spin = Vec::with_capacity(cap);
    let mut total = Vec::with_capacity(cap);
    let mut energy = Vec::with_capacity(cap);
    integrate_with(deriv, y0, grid, |_, t, y| {
        times.push(t);
        zeta.push(y.s3.iter().sum::<f64>() / na);
        let worst = y
            .lengths()
            .iter()
            .zip(&len0)
            .map(|(l, l0)| if *l0 > 0.0 { (l / l0 - 1.0).abs() } else { *l })
            .fold(0.0, f64::max);
        spin.push(worst);
        total.push((y.s3.iter().chain(&y.t3).sum::<f64>() - total0) * inv_n);
        energy.push((y.energy(&kernel, lambda) - e0) * inv_n * inv_n);
    })?;
    Trajectory::new(times, zeta)?
        .with_audit("max_spin_length_drift", spin)?
        .with_audit("sigma3_plus_tau3_drift", total)?
        .with_audit("energy_drift", energy)
}

/// Clashing beams against isotropic clouds at equal total occupation.
#[derive(Debug, Clone, Serialize)]
pub struct BeamIsotropicReport {
    #[serde(skip)]
    pub beams: Trajectory,
    #[serde(skip)]
    pub isotropic: Trajectory,
    pub beam_break_time: Option<f64>,
    pub isotropic_break_time: Option<f64>,
    /// Isotropic over beam break time.
    pub ratio: Option<f64>,
    pub beam_max_slope: f64,
    pub isotropic_max_slope: f64,
    /// Mean isotropic ζ over the last quarter of the run.
    pub isotropic_late_mean: f64,
}

fn max_slope(traj: &Trajectory) -> f64 {
    traj.times()
        .windows(2)
        .zip(traj.zeta().windows(2))
        .map(|(t, z)| ((z[1] - z[0]) / (t[1] - t[0])).abs())
        .fold(0.0, f64::max)
}

fn late_mean(traj: &Trajectory) -> f64 {
    let t_end = *traj.times().last().unwrap_or(&0.0);
    let t0 = traj.times()[0];
    let cut = t0 + 0.75 * (t_end - t0);
    let late: Vec<f64> = traj
        .times()
        .iter()
        .zip(traj.zeta())
        .filter(|(t, _)| **t >= cut)
        .map(|(_, z)| *z)
        .collect();
    late.iter().sum::<f64>() / late.len().max(1) as f64
}

pub fn beam_vs_isotropic_report(
    n: f64,
    m: usize,
    seed: Complex64,
    grid: &TimeGrid,
    sampling: Sampling,
    rng_seed: u64,
) -> Result<BeamIsotropicReport> {
    let beams = run_multimode(&AngularEnsemble::beams(n, seed, 0.0)?, grid)?;
    let isotropic = run_multimode(
        &AngularEnsemble::isotropic(n, m, seed, 0.0, sampling, rng_seed)?,
        grid,
    )?;
    let beam_break_time = first_zero_crossing(&beams);
    let isotropic_break_time = first_zero_crossing(&isotropic);
    let ratio = match (beam_break_time, isotropic_break_time) {
        (Some(b), Some(i)) if b > 0.0 => Some(i / b),
        _ => None,
    };
    Ok(BeamIsotropicReport {
        beam_max_slope: max_slope(&beams),
        isotropic_max_slope: max_slope(&isotropic),
        isotropic_late_mean: late_mean(&isotropic),
        beam_break_time,
        isotropic_break_time,
        ratio,
        beams,
        isotropic,
    })
}

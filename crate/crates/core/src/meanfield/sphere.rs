use std::f64::consts::PI;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sampling {
    #[default]
    Fibonacci,
    Random,
}

/// Deterministic Fibonacci-lattice directions on the unit sphere.
///
/// Heights `z_i = 1 − 2i/(m−1)` include both poles; a single direction is
/// `(0, 0, 1)`. `rng_seed` only matters for [`Sampling::Random`].
pub fn isotropic_sample(m: usize, rng_seed: u64) -> Result<Vec<[f64; 3]>> {
    sample(m, Sampling::Fibonacci, rng_seed)
}

/// Uniformly random directions from a seeded generator.
pub fn random_sphere_sample(m: usize, rng_seed: u64) -> Result<Vec<[f64; 3]>> {
    sample(m, Sampling::Random, rng_seed)
}

pub(crate) fn sample(m: usize, sampling: Sampling, rng_seed: u64) -> Result<Vec<[f64; 3]>> {
    if m == 0 {
        return Err(Error::param("need at least one direction"));
    }
    if m == 1 {
        return Ok(vec![[0.0, 0.0, 1.0]]);
    }
    let dirs = match sampling {
        Sampling::Fibonacci => {
            let golden = PI * (3.0 - 5f64.sqrt());
            (0..m)
                .map(|i| {
                    let z = 1.0 - 2.0 * i as f64 / (m - 1) as f64;
                    let r = (1.0 - z * z).max(0.0).sqrt();
                    let phi = golden * i as f64;
                    [r * phi.cos(), r * phi.sin(), z]
                })
                .collect()
        }
        Sampling::Random => {
            let mut rng = StdRng::seed_from_u64(rng_seed);
            (0..m)
                .map(|_| {
                    let z: f64 = rng.gen_range(-1.0..=1.0);
                    let phi: f64 = rng.gen_range(0.0..2.0 * PI);
                    let r = (1.0 - z * z).max(0.0).sqrt();
                    [r * phi.cos(), r * phi.sin(), z]
                })
                .collect()
        }
    };
    Ok(dirs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dot(a: &[f64; 3], b: &[f64; 3]) -> f64 {
        a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
    }

    #[test]
    fn single_direction_convention() {
        assert_eq!(isotropic_sample(1, 0).unwrap(), vec![[0.0, 0.0, 1.0]]);
        assert!(isotropic_sample(0, 0).is_err());
    }

    #[test]
    fn unit_vectors() {
        for sampling in [Sampling::Fibonacci, Sampling::Random] {
            for d in sample(257, sampling, 7).unwrap() {
                assert!((dot(&d, &d) - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn mean_kernel_is_one() {
        // cross-cloud pairs use the reflected set for cloud B
        let a = isotropic_sample(100, 0).unwrap();
        let mut sum = 0.0;
        for p in &a {
            for q in &a {
                sum += 1.0 + dot(p, q);
            }
        }
        let mean = sum / (100.0 * 100.0);
        assert!((mean - 1.0).abs() < 0.05, "mean {mean}");
    }

    #[test]
    fn deterministic() {
        assert_eq!(isotropic_sample(50, 1).unwrap(), isotropic_sample(50, 2).unwrap());
        assert_eq!(random_sphere_sample(50, 3).unwrap(), random_sphere_sample(50, 3).unwrap());
        assert_ne!(random_sphere_sample(50, 3).unwrap(), random_sphere_sample(50, 4).unwrap());
    }
}

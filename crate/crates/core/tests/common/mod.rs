#![allow(dead_code)]

use std::io::Write;

use nalgebra::{Complex, DMatrix, DVector};

/// Print one line straight to the process stdout so it shows up even when
/// the harness captures test output.
pub fn report(line: &str) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{line}");
    let _ = out.flush();
}

pub fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

/// Dense ladder Hamiltonian in dimensionless time, written out from the
/// matrix elements: off-diagonal i(N-i+1)/N, diagonal -(λ/2)(N-2i)²/N.
pub fn dense_ladder(n: usize, lambda: f64) -> DMatrix<Complex<f64>> {
    let nf = n as f64;
    DMatrix::from_fn(n + 1, n + 1, |r, c| {
        let v = if r == c {
            let s = nf - 2.0 * r as f64;
            -0.5 * lambda * s * s / nf
        } else if r + 1 == c || c + 1 == r {
            let i = r.max(c) as f64;
            i * (nf - i + 1.0) / nf
        } else {
            0.0
        };
        Complex::new(v, 0.0)
    })
}

/// exp(A) by scaling and squaring with a truncated Taylor series.
pub fn expm(a: &DMatrix<Complex<f64>>) -> DMatrix<Complex<f64>> {
    let norm = a.iter().map(|z| z.norm()).sum::<f64>();
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let scaled = a / Complex::new(2f64.powi(squarings as i32), 0.0);
    let dim = a.nrows();
    let mut result = DMatrix::<Complex<f64>>::identity(dim, dim);
    let mut term = DMatrix::<Complex<f64>>::identity(dim, dim);
    for k in 1..=30 {
        term = &term * &scaled / Complex::new(k as f64, 0.0);
        result += &term;
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}

/// ζ(τ_k) at τ_k = k·dt, k = 0..=steps, by repeated application of exp(-iH dt).
pub fn dense_zeta(n: usize, lambda: f64, dt: f64, steps: usize) -> Vec<f64> {
    let h = dense_ladder(n, lambda);
    let u = expm(&(h * Complex::new(0.0, -dt)));
    let mut psi = DVector::<Complex<f64>>::zeros(n + 1);
    psi[0] = Complex::new(1.0, 0.0);
    let nf = n as f64;
    let zeta = |psi: &DVector<Complex<f64>>| {
        psi.iter()
            .enumerate()
            .map(|(i, a)| a.norm_sqr() * (nf - 2.0 * i as f64) / nf)
            .sum::<f64>()
    };
    let mut out = vec![zeta(&psi)];
    for _ in 0..steps {
        psi = &u * &psi;
        out.push(zeta(&psi));
    }
    out
}

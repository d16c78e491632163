use num_complex::Complex64;

use super::TimeGrid;
use crate::error::{Error, Result};

/// A state vector the fixed-step integrator can advance.
pub trait OdeState: Clone {
    /// `self += h * other`
    fn axpy(&mut self, h: f64, other: &Self);

    fn all_finite(&self) -> bool;
}

impl OdeState for f64 {
    fn axpy(&mut self, h: f64, other: &Self) {
        *self += h * other;
    }

    fn all_finite(&self) -> bool {
        self.is_finite()
    }
}

impl OdeState for Complex64 {
    fn axpy(&mut self, h: f64, other: &Self) {
        *self += other * h;
    }

    fn all_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

impl<T: OdeState> OdeState for Vec<T> {
    fn axpy(&mut self, h: f64, other: &Self) {
        debug_assert_eq!(self.len(), other.len());
        for (a, b) in self.iter_mut().zip(other) {
            a.axpy(h, b);
        }
    }

    fn all_finite(&self) -> bool {
        self.iter().all(OdeState::all_finite)
    }
}

impl<T: OdeState, const N: usize> OdeState for [T; N] {
    fn axpy(&mut self, h: f64, other: &Self) {
        for (a, b) in self.iter_mut().zip(other) {
            a.axpy(h, b);
        }
    }

    fn all_finite(&self) -> bool {
        self.iter().all(OdeState::all_finite)
    }
}

fn rk4_step<S, F>(deriv: &F, t: f64, h: f64, y: &mut S)
where
    S: OdeState,
    F: Fn(f64, &S) -> S,
{
    let k1 = deriv(t, y);
    let mut tmp = y.clone();
    tmp.axpy(0.5 * h, &k1);
    let k2 = deriv(t + 0.5 * h, &tmp);
    tmp = y.clone();
    tmp.axpy(0.5 * h, &k2);
    let k3 = deriv(t + 0.5 * h, &tmp);
    tmp = y.clone();
    tmp.axpy(h, &k3);
    let k4 = deriv(t + h, &tmp);

    y.axpy(h / 6.0, &k1);
    y.axpy(h / 3.0, &k2);
    y.axpy(h / 3.0, &k3);
    y.axpy(h / 6.0, &k4);
}

/// Classical fixed-step RK4 over `grid`, calling `observe(k, t_k, &y_k)` at
/// every grid point (including the initial one). Returns the final state.
pub fn integrate_with<S, F, O>(deriv: F, y0: S, grid: &TimeGrid, mut observe: O) -> Result<S>
where
    S: OdeState,
    F: Fn(f64, &S) -> S,
    O: FnMut(usize, f64, &S),
{
    if !y0.all_finite() {
        return Err(Error::NonFinite {
            step: 0,
            time: grid.t_start(),
        });
    }
    let mut y = y0;
    let mut t = grid.t_start();
    observe(0, t, &y);
    for k in 1..grid.len() {
        let t_next = grid.time(k);
        rk4_step(&deriv, t, t_next - t, &mut y);
        if !y.all_finite() {
            return Err(Error::NonFinite {
                step: k,
                time: t_next,
            });
        }
        t = t_next;
        observe(k, t, &y);
    }
    Ok(y)
}

/// Integrate and keep the state at every grid point.
pub fn integrate<S, F>(deriv: F, y0: S, grid: &TimeGrid) -> Result<Vec<S>>
where
    S: OdeState,
    F: Fn(f64, &S) -> S,
{
    let mut out = Vec::with_capacity(grid.len());
    integrate_with(deriv, y0, grid, |_, _, y| out.push(y.clone()))?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_decay() {
        let grid = TimeGrid::horizon(1.0, 1e-3).unwrap();
        let ys = integrate(|_, y: &f64| -y, 1.0, &grid).unwrap();
        assert_eq!(ys.len(), 1001);
        assert!((ys[1000] - (-1.0f64).exp()).abs() < 1e-6);
    }

    #[test]
    fn fixed_point_stays_put() {
        let grid = TimeGrid::horizon(2.0, 0.01).unwrap();
        let ys = integrate(|_, _: &f64| 0.0, 0.75, &grid).unwrap();
        assert!(ys.iter().all(|&y| y == 0.75));
    }

    #[test]
    fn separable_angle_equation() {
        // dθ/dt = sin 2θ  =>  tan θ(t) = tan θ0 · e^{2t}
        let theta0 = 1e-3f64;
        let grid = TimeGrid::horizon(3.0, 1e-3).unwrap();
        let ys = integrate(|_, th: &f64| (2.0 * th).sin(), theta0, &grid).unwrap();
        let exact = (theta0.tan() * 6.0f64.exp()).atan();
        assert!((ys.last().unwrap() - exact).abs() < 1e-6);
    }

    #[test]
    fn fourth_order_convergence() {
        let err = |dt: f64| {
            let grid = TimeGrid::horizon(1.0, dt).unwrap();
            let ys = integrate(|_, y: &f64| -y, 1.0, &grid).unwrap();
            (ys.last().unwrap() - (-1.0f64).exp()).abs()
        };
        let coarse = err(0.1);
        let fine = err(0.05);
        assert!(coarse / fine >= 14.0, "ratio {}", coarse / fine);
    }

    #[test]
    fn complex_rotation() {
        // dz/dt = -i z  =>  z(t) = e^{-it}
        let grid = TimeGrid::horizon(std::f64::consts::PI, 1e-3).unwrap();
        let i = Complex64::new(0.0, 1.0);
        let zs = integrate(|_, z: &Vec<Complex64>| vec![-i * z[0]], vec![Complex64::new(1.0, 0.0)], &grid)
            .unwrap();
        let last = zs.last().unwrap()[0];
        assert!((last - Complex64::new(-1.0, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn blow_up_reports_step() {
        let grid = TimeGrid::horizon(10.0, 0.1).unwrap();
        let err = integrate(|_, y: &f64| y * y * 1e300, 1.0, &grid).unwrap_err();
        match err {
            Error::NonFinite { step, .. } => assert!(step >= 1),
            other => panic!("unexpected {other:?}"),
        }
    }
}

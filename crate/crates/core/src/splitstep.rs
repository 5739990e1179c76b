//! Independent brute-force propagator for the time-dependent Schrödinger
//! equation with Hamiltonian `H = f(t) P^2/(2m) + g(t) m omega0^2 X^2 / 2`.
//!
//! Strang splitting with both coefficients sampled at the step midpoint:
//! half potential phase, full kinetic phase in the momentum representation,
//! half potential phase. Every factor is a pure phase, so the norm is
//! conserved to rounding; the global error is O(dt^2). This path validates
//! the closed forms and never consults them.

use num_complex::Complex64;

use crate::abcd::CoefficientFunctions;
use crate::error::{Error, Result};
use crate::fft::{self, FftPair};
use crate::model::{GridSpec, OscillatorSpec};
use crate::states::WavefunctionGrid;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Validated description of one propagation run.
///
/// Besides the grid/step bookkeeping, construction enforces a
/// phase-per-step sanity bound: with `p_max = pi hbar / dx`,
/// `dt * max(f p_max^2 / 2m, g m omega0^2 x_edge^2 / 2) / hbar < 0.5`
/// at every step midpoint. Beyond it the discrete phase factors wrap and
/// the result is garbage regardless of convergence order.
pub struct PropagationPlan<'c> {
    pub t0: f64,
    pub t1: f64,
    pub dt: f64,
    pub grid: GridSpec,
    pub spec: OscillatorSpec,
    coeffs: &'c CoefficientFunctions,
    steps: usize,
}

impl<'c> PropagationPlan<'c> {
    pub fn new(
        t0: f64,
        t1: f64,
        dt: f64,
        grid: GridSpec,
        coeffs: &'c CoefficientFunctions,
        spec: OscillatorSpec,
    ) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::InvalidPlan(format!("dt must be positive, got {dt}")));
        }
        let span = (t1 - t0).abs();
        let steps_f = span / dt;
        let steps = steps_f.round() as usize;
        if (steps_f - steps as f64).abs() > 1e-9 * steps_f.max(1.0) {
            return Err(Error::InvalidPlan(format!(
                "(t1 - t0)/dt = {steps_f} is not a whole number of steps"
            )));
        }

        let p_max = std::f64::consts::PI * spec.hbar() / grid.dx();
        let kin_scale = p_max * p_max / (2.0 * spec.mass());
        let pot_scale = spec.mass() * spec.omega0() * spec.omega0() * grid.x_edge() * grid.x_edge()
            / 2.0;
        let dir = if t1 >= t0 { 1.0 } else { -1.0 };
        for step in 0..steps {
            let tm = t0 + dir * (step as f64 + 0.5) * dt;
            let f = coeffs.f(tm);
            if !(f > 0.0) {
                return Err(Error::InvalidPlan(format!(
                    "coefficient f({tm}) = {f} is not positive"
                )));
            }
            let phase = dt * (f * kin_scale).max(coeffs.g(tm) * pot_scale) / spec.hbar();
            if phase >= 0.5 {
                return Err(Error::InvalidPlan(format!(
                    "phase per step {phase:.3} at t = {tm} exceeds the sanity bound 0.5; \
                     shrink dt or the grid extent"
                )));
            }
        }
        Ok(Self { t0, t1, dt, grid, spec, coeffs, steps })
    }

    pub fn steps(&self) -> usize {
        self.steps
    }
}

/// Propagate `psi0` from `plan.t0` to `plan.t1`.
///
/// A zero-duration plan returns the input unchanged. Reversed plans
/// (`t1 < t0`) run the same scheme with a negative step, which is the exact
/// unitary inverse of the forward walk over the same midpoints.
pub fn split_step_evolve(
    plan: &PropagationPlan<'_>,
    psi0: &WavefunctionGrid,
) -> Result<WavefunctionGrid> {
    if psi0.grid != plan.grid {
        return Err(Error::ShapeMismatch(
            "initial state does not live on the plan's grid".into(),
        ));
    }
    if plan.steps == 0 {
        return Ok(psi0.clone());
    }

    let n = plan.grid.len();
    let dx = plan.grid.dx();
    let hbar = plan.spec.hbar();
    let mass = plan.spec.mass();
    let w0sq = plan.spec.omega0() * plan.spec.omega0();
    let dt = if plan.t1 >= plan.t0 { plan.dt } else { -plan.dt };

    let xs: Vec<f64> = plan.grid.points();
    let ks = fft::wavenumbers(n, dx);
    let pair = FftPair::new(n);

    let mut values = psi0.values.clone();
    for step in 0..plan.steps {
        let tm = plan.t0 + (step as f64 + 0.5) * dt;
        let f_m = plan.coeffs.f(tm);
        let g_m = plan.coeffs.g(tm);

        let half_pot: Vec<Complex64> = xs
            .iter()
            .map(|&x| (-I * (g_m * mass * w0sq * x * x * dt / (4.0 * hbar))).exp())
            .collect();
        for (v, p) in values.iter_mut().zip(&half_pot) {
            *v *= p;
        }
        pair.forward(&mut values);
        for (v, &k) in values.iter_mut().zip(&ks) {
            *v *= (-I * (f_m * hbar * k * k * dt / (2.0 * mass))).exp();
        }
        pair.inverse(&mut values);
        for (v, p) in values.iter_mut().zip(&half_pot) {
            *v *= p;
        }
    }

    Ok(WavefunctionGrid { grid: plan.grid, t: plan.t1, spec: plan.spec, n: None, values })
}

/// Global-phase-insensitive distance
/// `min_theta || a - e^{i theta} b || = sqrt(||a||^2 + ||b||^2 - 2 |<a,b>|)`.
pub fn phase_aligned_error(a: &WavefunctionGrid, b: &WavefunctionGrid) -> Result<f64> {
    let overlap = a.inner(b)?;
    let na = a.norm();
    let nb = b.norm();
    Ok((na * na + nb * nb - 2.0 * overlap.norm()).max(0.0).sqrt())
}

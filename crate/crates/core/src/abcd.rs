//! Symplectic ABCD parameters of the transform that maps a time-dependent
//! oscillator Hamiltonian onto a static one.
//!
//! The coupled conditions on `A, B, C, D` (one per quadratic generator:
//! kinetic, potential, and cross term) are solved here under the `B = 0`
//! ansatz and verified by finite-difference residuals. The damped
//! (Caldirola-Kanai) oscillator admits the closed form
//! `(A, B, C, D) = (e^{gamma t}, 0, m gamma e^{gamma t}, e^{-gamma t})`.

use std::io::Write;

use crate::error::{Error, Result};
use crate::model::OscillatorSpec;

/// Symplectic transform parameters at one instant. `a d - b c = 1` is the
/// invariant every producer of this type maintains.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ABCDState {
    pub t: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl ABCDState {
    pub fn new(t: f64, a: f64, b: f64, c: f64, d: f64) -> Self {
        Self { t, a, b, c, d }
    }

    /// Identity transform stamped at time `t`.
    pub fn identity(t: f64) -> Self {
        Self { t, a: 1.0, b: 0.0, c: 0.0, d: 1.0 }
    }

    /// `|AD - BC - 1|`, the deviation from the unit-determinant condition.
    pub fn symplectic_defect(&self) -> f64 {
        (self.a * self.d - self.b * self.c - 1.0).abs()
    }

    /// Inverse transform `(D, -B, -C, A)`, stamped at the same time.
    pub fn inverse(&self) -> Self {
        Self { t: self.t, a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    /// 2x2 matrix product `outer * inner` (`self` applied after `inner`),
    /// stamped with the outer time.
    pub fn compose(&self, inner: &ABCDState) -> Self {
        Self {
            t: self.t,
            a: self.a * inner.a + self.b * inner.c,
            b: self.a * inner.b + self.b * inner.d,
            c: self.c * inner.a + self.d * inner.c,
            d: self.c * inner.b + self.d * inner.d,
        }
    }

    /// Rescale from physical units to the dimensionless quadrature units of
    /// the Fock-space representation: `B -> B m omega`, `C -> C / (m omega)`.
    ///
    /// Physical `B` has units of time/mass and `C` of mass/time; with the
    /// quadratures `(X, P) = sqrt(hbar) (x, p)`-normalized to `[x, p] = i`,
    /// the scale `m omega` carries all the dimensions. `A`, `D`, and the
    /// determinant are unchanged.
    pub fn to_quadrature_units(&self, spec: &OscillatorSpec) -> Self {
        let m_omega = spec.mass() * spec.reduced_frequency();
        Self { t: self.t, a: self.a, b: self.b * m_omega, c: self.c / m_omega, d: self.d }
    }
}

/// Closed-form damped-oscillator parameters
/// `(e^{gamma t}, 0, m gamma e^{gamma t}, e^{-gamma t})`.
///
/// `AD - BC = e^{gamma t} e^{-gamma t} = 1` identically.
pub fn ck_abcd(spec: &OscillatorSpec, t: f64) -> ABCDState {
    let g = spec.gamma();
    let egt = (g * t).exp();
    ABCDState {
        t,
        a: egt,
        b: 0.0,
        c: spec.mass() * g * egt,
        d: (-g * t).exp(),
    }
}

/// Reduced frequency `sqrt(omega0^2 - gamma^2)` of the target static
/// oscillator. Always real: overdamped parameters cannot construct an
/// [`OscillatorSpec`] in the first place.
pub fn reduced_frequency(spec: &OscillatorSpec) -> f64 {
    spec.reduced_frequency()
}

/// The two positive coefficient functions `f(t)`, `g(t)` multiplying the
/// kinetic and potential terms of the Hamiltonian
/// `H = f(t) P^2/(2m) + g(t) m omega0^2 X^2 / 2`.
pub struct CoefficientFunctions {
    f: Box<dyn Fn(f64) -> f64 + Send + Sync>,
    g: Box<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl std::fmt::Debug for CoefficientFunctions {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CoefficientFunctions").finish_non_exhaustive()
    }
}

impl CoefficientFunctions {
    pub fn new(
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        g: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self { f: Box::new(f), g: Box::new(g) }
    }

    /// Damped-oscillator coefficients `f = e^{-2 gamma t}`, `g = e^{2 gamma t}`.
    pub fn ck(spec: &OscillatorSpec) -> Self {
        let g = spec.gamma();
        Self::new(move |t| (-2.0 * g * t).exp(), move |t| (2.0 * g * t).exp())
    }

    /// Static oscillator, `f = g = 1`.
    pub fn static_oscillator() -> Self {
        Self::new(|_| 1.0, |_| 1.0)
    }

    pub fn f(&self, t: f64) -> f64 {
        (self.f)(t)
    }

    pub fn g(&self, t: f64) -> f64 {
        (self.g)(t)
    }
}

/// ABCD parameters sampled along a strictly increasing time grid, together
/// with the squared frequency of the transformed Hamiltonian at each sample.
#[derive(Debug, Clone)]
pub struct ABCDTrajectory {
    pub times: Vec<f64>,
    pub states: Vec<ABCDState>,
    pub omega_sq: Vec<f64>,
}

impl ABCDTrajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn max_symplectic_defect(&self) -> f64 {
        self.states
            .iter()
            .map(|s| s.symplectic_defect())
            .fold(0.0, f64::max)
    }

    /// Spread `max - min` of the transformed squared frequency; small values
    /// mean the reduction produced a genuinely static Hamiltonian.
    pub fn omega_sq_spread(&self) -> f64 {
        let max = self.omega_sq.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let min = self.omega_sq.iter().cloned().fold(f64::INFINITY, f64::min);
        max - min
    }

    /// CSV serialization: header `t,A,B,C,D,omega_sq`, one row per sample,
    /// 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "t,A,B,C,D,omega_sq")?;
        for (i, s) in self.states.iter().enumerate() {
            writeln!(
                w,
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                self.times[i], s.a, s.b, s.c, s.d, self.omega_sq[i]
            )?;
        }
        Ok(())
    }
}

/// First derivative on a (possibly non-uniform) grid: second-order central
/// stencils in the interior, one-sided three-point stencils at the ends.
pub(crate) fn derivative(times: &[f64], values: &[f64]) -> Vec<f64> {
    let n = times.len();
    assert!(n >= 3, "derivative needs at least 3 samples");
    assert_eq!(n, values.len());
    let mut out = vec![0.0; n];
    for i in 1..n - 1 {
        let h1 = times[i] - times[i - 1];
        let h2 = times[i + 1] - times[i];
        out[i] = -h2 / (h1 * (h1 + h2)) * values[i - 1]
            + (h2 - h1) / (h1 * h2) * values[i]
            + h1 / (h2 * (h1 + h2)) * values[i + 1];
    }
    {
        let h1 = times[1] - times[0];
        let h2 = times[2] - times[1];
        out[0] = -(2.0 * h1 + h2) / (h1 * (h1 + h2)) * values[0]
            + (h1 + h2) / (h1 * h2) * values[1]
            - h1 / (h2 * (h1 + h2)) * values[2];
        let h1 = times[n - 2] - times[n - 3];
        let h2 = times[n - 1] - times[n - 2];
        out[n - 1] = h2 / (h1 * (h1 + h2)) * values[n - 3]
            - (h1 + h2) / (h1 * h2) * values[n - 2]
            + (h1 + 2.0 * h2) / (h2 * (h1 + h2)) * values[n - 1];
    }
    out
}

fn check_times(times: &[f64], min_len: usize) -> Result<()> {
    if times.len() < min_len {
        return Err(Error::OutOfRange {
            what: "number of time samples",
            value: times.len(),
            min: min_len,
            max: usize::MAX,
        });
    }
    for w in times.windows(2) {
        if !(w[1] > w[0]) {
            return Err(Error::InvalidSpec(format!(
                "times must be strictly increasing, got {} then {}",
                w[0], w[1]
            )));
        }
    }
    Ok(())
}

/// Solve the reduction conditions under the `B = 0` ansatz:
/// `A = f^{-1/2}`, `D = 1/A` (unit determinant), `C = m dA/dt` (cross-term
/// condition), with `dA/dt` by central differences on the caller's grid.
///
/// The transformed squared frequency is reported, not enforced:
/// `omega^2(t) = C^2 f / m^2 + D^2 omega0^2 g + (C D' - D C') / m`.
/// Callers decide whether its constancy is good enough for their purpose.
pub fn reduce_b_zero(
    coeffs: &CoefficientFunctions,
    spec: &OscillatorSpec,
    times: &[f64],
) -> Result<ABCDTrajectory> {
    check_times(times, 3)?;
    let m = spec.mass();
    let w0sq = spec.omega0() * spec.omega0();

    let mut a = Vec::with_capacity(times.len());
    let mut f_vals = Vec::with_capacity(times.len());
    let mut g_vals = Vec::with_capacity(times.len());
    for &t in times {
        let f = coeffs.f(t);
        if !(f > 0.0) {
            return Err(Error::Domain(format!(
                "coefficient f(t) must be positive, got f({t}) = {f}"
            )));
        }
        f_vals.push(f);
        g_vals.push(coeffs.g(t));
        a.push(1.0 / f.sqrt());
    }

    let da = derivative(times, &a);
    let c: Vec<f64> = da.iter().map(|&v| m * v).collect();
    let d: Vec<f64> = a.iter().map(|&v| 1.0 / v).collect();
    let dc = derivative(times, &c);
    let dd = derivative(times, &d);

    let mut states = Vec::with_capacity(times.len());
    let mut omega_sq = Vec::with_capacity(times.len());
    for i in 0..times.len() {
        states.push(ABCDState::new(times[i], a[i], 0.0, c[i], d[i]));
        omega_sq.push(
            c[i] * c[i] * f_vals[i] / (m * m)
                + d[i] * d[i] * w0sq * g_vals[i]
                + (c[i] * dd[i] - d[i] * dc[i]) / m,
        );
    }
    Ok(ABCDTrajectory { times: times.to_vec(), states, omega_sq })
}

/// Absolute defects of the three reduction conditions at the interior
/// sample times of a trajectory (central differences need both neighbours).
///
/// `kinetic` is the defect of the `P^2`-coefficient condition, `potential`
/// of the `X^2` condition against the target `m omega^2 / 2` with `omega`
/// the spec's reduced frequency, and `cross` of the `XP + PX` condition.
#[derive(Debug, Clone)]
pub struct Residuals {
    pub times: Vec<f64>,
    pub kinetic: Vec<f64>,
    pub potential: Vec<f64>,
    pub cross: Vec<f64>,
}

impl Residuals {
    pub fn max_abs(&self) -> f64 {
        self.kinetic
            .iter()
            .chain(&self.potential)
            .chain(&self.cross)
            .cloned()
            .fold(0.0, f64::max)
    }
}

/// Evaluate the three coupled-condition residuals on any trajectory.
///
/// Requires at least 5 samples for stable differencing. Derivatives of all
/// four parameters are taken on the trajectory's own grid.
pub fn residual_check(
    traj: &ABCDTrajectory,
    coeffs: &CoefficientFunctions,
    spec: &OscillatorSpec,
) -> Result<Residuals> {
    check_times(&traj.times, 5)?;
    let n = traj.times.len();
    let m = spec.mass();
    let w0sq = spec.omega0() * spec.omega0();
    let omega = spec.reduced_frequency();
    let target = m * omega * omega / 2.0;

    let a: Vec<f64> = traj.states.iter().map(|s| s.a).collect();
    let b: Vec<f64> = traj.states.iter().map(|s| s.b).collect();
    let c: Vec<f64> = traj.states.iter().map(|s| s.c).collect();
    let d: Vec<f64> = traj.states.iter().map(|s| s.d).collect();
    let da = derivative(&traj.times, &a);
    let db = derivative(&traj.times, &b);
    let dc = derivative(&traj.times, &c);
    let dd = derivative(&traj.times, &d);

    let mut out = Residuals {
        times: Vec::with_capacity(n - 2),
        kinetic: Vec::with_capacity(n - 2),
        potential: Vec::with_capacity(n - 2),
        cross: Vec::with_capacity(n - 2),
    };
    for i in 1..n - 1 {
        let t = traj.times[i];
        let f = coeffs.f(t);
        let g = coeffs.g(t);
        out.times.push(t);
        out.kinetic.push(
            (a[i] * a[i] * f / (2.0 * m)
                + b[i] * b[i] * m * w0sq * g / 2.0
                + (a[i] * db[i] - b[i] * da[i]) / 2.0
                - 1.0 / (2.0 * m))
                .abs(),
        );
        out.potential.push(
            (c[i] * c[i] * f / (2.0 * m)
                + d[i] * d[i] * m * w0sq * g / 2.0
                + (c[i] * dd[i] - d[i] * dc[i]) / 2.0
                - target)
                .abs(),
        );
        out.cross.push(
            (a[i] * c[i] * f / (2.0 * m) + d[i] * b[i] * m * w0sq * g / 2.0
                - (d[i] * da[i] - c[i] * db[i]) / 2.0)
                .abs(),
        );
    }
    Ok(out)
}

//! Core domain types, unit conventions, and stable special-function
//! recurrences used by every other module.
//!
//! Internal units default to `hbar = m = omega0 = 1`; all four physical
//! parameters remain configurable. The damping rate must satisfy
//! `gamma < omega0` (underdamped): the whole method rests on the reduced
//! frequency `omega = sqrt(omega0^2 - gamma^2)` being real.

use crate::error::{Error, Result};

/// Highest polynomial / eigenfunction order the recurrences are
/// documented stable for.
pub const MAX_ORDER: usize = 200;

/// Physical parameters of the damped oscillator.
///
/// Fields are validated on construction and immutable afterwards, so a
/// value of this type always describes an underdamped oscillator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorSpec {
    mass: f64,
    omega0: f64,
    gamma: f64,
    hbar: f64,
}

impl OscillatorSpec {
    /// Validate and build. Fails unless `mass, omega0, hbar > 0`,
    /// `gamma >= 0` and `gamma < omega0` (overdamped rejected: the reduced
    /// frequency must be real and positive).
    pub fn new(mass: f64, omega0: f64, gamma: f64, hbar: f64) -> Result<Self> {
        if !(mass.is_finite() && mass > 0.0) {
            return Err(Error::InvalidSpec(format!("mass must be positive, got {mass}")));
        }
        if !(omega0.is_finite() && omega0 > 0.0) {
            return Err(Error::InvalidSpec(format!("omega0 must be positive, got {omega0}")));
        }
        if !(hbar.is_finite() && hbar > 0.0) {
            return Err(Error::InvalidSpec(format!("hbar must be positive, got {hbar}")));
        }
        if !(gamma.is_finite() && gamma >= 0.0) {
            return Err(Error::InvalidSpec(format!("gamma must be non-negative, got {gamma}")));
        }
        if gamma >= omega0 {
            return Err(Error::InvalidSpec(format!(
                "overdamped regime: gamma = {gamma} >= omega0 = {omega0}; \
                 the reduced frequency sqrt(omega0^2 - gamma^2) would not be real"
            )));
        }
        Ok(Self { mass, omega0, gamma, hbar })
    }

    /// Unit oscillator: `m = omega0 = hbar = 1`, `gamma = 0`.
    pub fn unit() -> Self {
        Self { mass: 1.0, omega0: 1.0, gamma: 0.0, hbar: 1.0 }
    }

    /// Unit-parameter oscillator with the given damping rate.
    pub fn with_gamma(gamma: f64) -> Result<Self> {
        Self::new(1.0, 1.0, gamma, 1.0)
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// Reduced frequency `omega = sqrt(omega0^2 - gamma^2)` of the static
    /// oscillator the damped one maps onto. Real and positive by the
    /// construction invariant.
    pub fn reduced_frequency(&self) -> f64 {
        (self.omega0 * self.omega0 - self.gamma * self.gamma).sqrt()
    }

    /// Position width `sigma_x(t) = sqrt(hbar / (2 m omega)) e^{-gamma t}`
    /// of the squeezed ground state at time `t`.
    pub fn sigma_x(&self, t: f64) -> f64 {
        (self.hbar / (2.0 * self.mass * self.reduced_frequency())).sqrt()
            * (-self.gamma * t).exp()
    }
}

/// Uniform position grid, `n_points` a power of two so the same grid feeds
/// the fast-transform modules without resampling.
///
/// Points are `x_k = x_min + k dx`, `k = 0..n_points`, with
/// `dx = (x_max - x_min) / n_points`; the right endpoint is excluded
/// (periodic fast-transform convention).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    x_min: f64,
    x_max: f64,
    n_points: usize,
}

impl GridSpec {
    pub fn new(x_min: f64, x_max: f64, n_points: usize) -> Result<Self> {
        if !(x_min.is_finite() && x_max.is_finite() && x_min < x_max) {
            return Err(Error::InvalidSpec(format!(
                "grid bounds must satisfy x_min < x_max, got [{x_min}, {x_max}]"
            )));
        }
        if n_points < 16 || !n_points.is_power_of_two() {
            return Err(Error::InvalidSpec(format!(
                "n_points must be a power of two >= 16, got {n_points}"
            )));
        }
        Ok(Self { x_min, x_max, n_points })
    }

    /// Symmetric grid on `[-half_width, half_width)`.
    pub fn symmetric(half_width: f64, n_points: usize) -> Result<Self> {
        Self::new(-half_width, half_width, n_points)
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn len(&self) -> usize {
        self.n_points
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / self.n_points as f64
    }

    /// Largest |x| reached by the grid.
    pub fn x_edge(&self) -> f64 {
        self.x_min.abs().max(self.x_max.abs())
    }

    pub fn point(&self, k: usize) -> f64 {
        self.x_min + k as f64 * self.dx()
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n_points).map(|k| self.point(k)).collect()
    }
}

fn check_order(what: &'static str, n: usize) -> Result<()> {
    if n > MAX_ORDER {
        return Err(Error::OutOfRange { what, value: n, min: 0, max: MAX_ORDER });
    }
    Ok(())
}

/// Physicists' Hermite polynomial `H_n(x)` by the three-term recurrence
/// `H_{k+1} = 2x H_k - 2k H_{k-1}`.
pub fn hermite_h(n: usize, x: f64) -> Result<f64> {
    check_order("hermite order n", n)?;
    if n == 0 {
        return Ok(1.0);
    }
    let mut prev = 1.0;
    let mut cur = 2.0 * x;
    for k in 1..n {
        let next = 2.0 * x * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Laguerre polynomial `L_n(x)` by the recurrence
/// `(k+1) L_{k+1} = (2k+1-x) L_k - k L_{k-1}`.
pub fn laguerre_l(n: usize, x: f64) -> Result<f64> {
    check_order("laguerre order n", n)?;
    if n == 0 {
        return Ok(1.0);
    }
    let mut prev = 1.0;
    let mut cur = 1.0 - x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 - x) * cur - kf * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Normalized eigenfunction `chi_n(y)` of the static oscillator with the
/// reduced frequency `omega`:
///
/// `chi_n(y) = (m omega / (pi hbar))^{1/4} (2^n n!)^{-1/2}
///             e^{-m omega y^2 / (2 hbar)} H_n(sqrt(m omega / hbar) y)`.
///
/// Evaluated by the running-normalized recurrence
/// `chi_{k+1} = sqrt(2/(k+1)) xi chi_k - sqrt(k/(k+1)) chi_{k-1}`,
/// never forming `2^n n!`, so orders up to [`MAX_ORDER`] stay representable.
pub fn oscillator_eigenfunction(n: usize, spec: &OscillatorSpec, y: f64) -> Result<f64> {
    check_order("eigenfunction order n", n)?;
    Ok(eigenfunction_ladder(n, spec, y)[n])
}

/// All of `chi_0(y) ... chi_n(y)` in one recurrence pass.
///
/// Shares the loop of [`oscillator_eigenfunction`]; used when a Fock
/// coefficient vector is rendered onto a grid.
pub fn eigenfunction_ladder(n: usize, spec: &OscillatorSpec, y: f64) -> Vec<f64> {
    let omega = spec.reduced_frequency();
    let scale = (spec.mass() * omega / spec.hbar()).sqrt();
    let xi = scale * y;
    let chi0 = (spec.mass() * omega / (std::f64::consts::PI * spec.hbar())).powf(0.25)
        * (-xi * xi / 2.0).exp();
    let mut out = Vec::with_capacity(n + 1);
    out.push(chi0);
    if n == 0 {
        return out;
    }
    out.push(std::f64::consts::SQRT_2 * xi * chi0);
    for k in 1..n {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * xi * out[k]
            - (kf / (kf + 1.0)).sqrt() * out[k - 1];
        out.push(next);
    }
    out
}

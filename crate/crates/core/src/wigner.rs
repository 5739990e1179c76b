//! Phase-space (Wigner) representation of the damped-oscillator states:
//! closed forms, a numeric transform from gridded wavefunctions, marginals,
//! and plot-ready figure grids.
//!
//! The closed form is Laguerre-Gaussian in the mapped phase point
//! `x' = e^{gamma t} x`, `p' = m gamma e^{gamma t} x + e^{-gamma t} p`
//! (an area-preserving shear), bounded by `1/(pi hbar)` with the bound
//! attained at the origin with sign `(-1)^n`. Negative cells certify
//! nonclassicality of the `n > 0` states.

use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{laguerre_l, OscillatorSpec, MAX_ORDER};
use crate::states::WavefunctionGrid;

const PI: f64 = std::f64::consts::PI;

/// Serialization format version for the CSV/JSON grid files.
pub const GRID_FORMAT_VERSION: u32 = 1;

/// Real values on a uniform x-p mesh, row-major over x.
#[derive(Debug, Clone)]
pub struct WignerGrid {
    pub x_axis: Vec<f64>,
    pub p_axis: Vec<f64>,
    /// `values[ix * p_axis.len() + ip]`
    pub values: Vec<f64>,
    pub t: f64,
    pub spec: OscillatorSpec,
    pub n: usize,
}

impl WignerGrid {
    /// Validate axes (uniform, ascending, >= 2 points) and the phase-space
    /// bound `|W| <= 1/(pi hbar) + 1e-6`.
    pub fn new(
        x_axis: Vec<f64>,
        p_axis: Vec<f64>,
        values: Vec<f64>,
        t: f64,
        spec: OscillatorSpec,
        n: usize,
    ) -> Result<Self> {
        check_axis("x", &x_axis)?;
        check_axis("p", &p_axis)?;
        if values.len() != x_axis.len() * p_axis.len() {
            return Err(Error::ShapeMismatch(format!(
                "value count {} does not match {} x {} mesh",
                values.len(),
                x_axis.len(),
                p_axis.len()
            )));
        }
        let bound = 1.0 / (PI * spec.hbar()) + 1e-6;
        for &v in &values {
            if !(v.abs() <= bound) {
                return Err(Error::NumericalCheck(format!(
                    "value {v} exceeds the phase-space bound 1/(pi hbar) = {:.6e}",
                    1.0 / (PI * spec.hbar())
                )));
            }
        }
        Ok(Self { x_axis, p_axis, values, t, spec, n })
    }

    pub fn value(&self, ix: usize, ip: usize) -> f64 {
        self.values[ix * self.p_axis.len() + ip]
    }

    pub fn dx(&self) -> f64 {
        self.x_axis[1] - self.x_axis[0]
    }

    pub fn dp(&self) -> f64 {
        self.p_axis[1] - self.p_axis[0]
    }

    pub fn min_value(&self) -> f64 {
        self.values.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Cell sum times the cell area.
    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * self.dx() * self.dp()
    }

    /// Mean and variance of `x` under the (cell-sum normalized) grid.
    pub fn x_moments(&self) -> (f64, f64) {
        let np = self.p_axis.len();
        let mut w_sum = 0.0;
        let mut m1 = 0.0;
        let mut m2 = 0.0;
        for (ix, &x) in self.x_axis.iter().enumerate() {
            let row: f64 = self.values[ix * np..(ix + 1) * np].iter().sum();
            w_sum += row;
            m1 += row * x;
            m2 += row * x * x;
        }
        let mean = m1 / w_sum;
        (mean, m2 / w_sum - mean * mean)
    }

    /// Mean and variance of `p` under the (cell-sum normalized) grid.
    pub fn p_moments(&self) -> (f64, f64) {
        let np = self.p_axis.len();
        let mut w_sum = 0.0;
        let mut m1 = 0.0;
        let mut m2 = 0.0;
        for (ip, &p) in self.p_axis.iter().enumerate() {
            let mut col = 0.0;
            for ix in 0..self.x_axis.len() {
                col += self.values[ix * np + ip];
            }
            w_sum += col;
            m1 += col * p;
            m2 += col * p * p;
        }
        let mean = m1 / w_sum;
        (mean, m2 / w_sum - mean * mean)
    }

    /// Count of cells below the negativity threshold `-1e-9` (quadrature
    /// noise floor).
    pub fn negative_cells(&self) -> usize {
        self.values.iter().filter(|&&v| v < -1e-9).count()
    }

    /// CSV: version comment, metadata comments, then `x,p,w` triplets.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "# version={GRID_FORMAT_VERSION}")?;
        writeln!(
            w,
            "# n={} t={:.16e} gamma={:.16e} m={:.16e} omega0={:.16e} hbar={:.16e}",
            self.n,
            self.t,
            self.spec.gamma(),
            self.spec.mass(),
            self.spec.omega0(),
            self.spec.hbar()
        )?;
        writeln!(w, "x,p,w")?;
        let np = self.p_axis.len();
        for (ix, &x) in self.x_axis.iter().enumerate() {
            for (ip, &p) in self.p_axis.iter().enumerate() {
                writeln!(w, "{:.16e},{:.16e},{:.16e}", x, p, self.values[ix * np + ip])?;
            }
        }
        Ok(())
    }

    /// JSON object with a version field, both axes, row-major values, and
    /// the provenance metadata.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "version": GRID_FORMAT_VERSION,
            "x_axis": self.x_axis,
            "p_axis": self.p_axis,
            "values": self.values,
            "metadata": {
                "n": self.n,
                "t": self.t,
                "gamma": self.spec.gamma(),
                "mass": self.spec.mass(),
                "omega0": self.spec.omega0(),
                "hbar": self.spec.hbar(),
            },
        })
    }
}

fn check_axis(name: &str, axis: &[f64]) -> Result<()> {
    if axis.len() < 2 {
        return Err(Error::InvalidSpec(format!("{name} axis needs at least 2 points")));
    }
    let d = axis[1] - axis[0];
    if !(d > 0.0) {
        return Err(Error::InvalidSpec(format!("{name} axis must ascend")));
    }
    for w in axis.windows(2) {
        if ((w[1] - w[0]) - d).abs() > 1e-9 * d.max(1.0) {
            return Err(Error::InvalidSpec(format!("{name} axis must be uniform")));
        }
    }
    Ok(())
}

/// The damping-induced linear phase-space map at time `t`.
#[derive(Debug, Clone, Copy)]
pub struct PhasePointMap {
    pub t: f64,
    pub spec: OscillatorSpec,
}

/// `x' = e^{gamma t} x`, `p' = m gamma e^{gamma t} x + e^{-gamma t} p`.
/// Unit Jacobian: the map preserves phase-space area.
pub fn map_phase_point(map: &PhasePointMap, x: f64, p: f64) -> (f64, f64) {
    let gamma = map.spec.gamma();
    let egt = (gamma * map.t).exp();
    (egt * x, map.spec.mass() * gamma * egt * x + p / egt)
}

fn alpha_sq(spec: &OscillatorSpec, t: f64, x: f64, p: f64) -> f64 {
    let map = PhasePointMap { t, spec: *spec };
    let (xp, pp) = map_phase_point(&map, x, p);
    let m_omega = spec.mass() * spec.reduced_frequency();
    (m_omega * xp * xp / spec.hbar() + pp * pp / (m_omega * spec.hbar())) / 2.0
}

/// Closed-form Wigner function of the squeezed number state:
///
/// `W_n(x, p) = (-1)^n e^{-2 |alpha'|^2} L_n(4 |alpha'|^2) / (pi hbar)`
///
/// with `|alpha'|^2 = (m omega x'^2 / hbar + p'^2 / (m hbar omega)) / 2` at
/// the mapped phase point. The `1/pi` prefactor carries the restored
/// `1/hbar` so marginals and normalization stay consistent with the
/// wavefunction convention.
pub fn wigner_closed_form(spec: &OscillatorSpec, n: usize, t: f64, x: f64, p: f64) -> Result<f64> {
    if n > MAX_ORDER {
        return Err(Error::OutOfRange { what: "fock level n", value: n, min: 0, max: MAX_ORDER });
    }
    let a2 = alpha_sq(spec, t, x, p);
    // far outside the support the Gaussian wins over any polynomial; skip
    // the Laguerre evaluation before it can overflow
    if 2.0 * a2 > 600.0 {
        return Ok(0.0);
    }
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    Ok(sign * (-2.0 * a2).exp() * laguerre_l(n, 4.0 * a2)? / (PI * spec.hbar()))
}

/// Squeezed-vacuum Wigner function, transcribed directly:
///
/// `W_0 = exp[-(p + m gamma e^{2 gamma t} x)^2 / (m hbar omega e^{2 gamma t})
///            - m omega e^{2 gamma t} x^2 / hbar] / (pi hbar)`.
pub fn wigner_vacuum(spec: &OscillatorSpec, t: f64, x: f64, p: f64) -> f64 {
    let gamma = spec.gamma();
    let omega = spec.reduced_frequency();
    let m = spec.mass();
    let hbar = spec.hbar();
    let e2 = (2.0 * gamma * t).exp();
    let shear = p + m * gamma * e2 * x;
    let expo = -shear * shear / (m * hbar * omega * e2) - m * omega * e2 * x * x / hbar;
    expo.exp() / (PI * hbar)
}

/// First excited state, transcribed directly: the vacuum Gaussian times the
/// bracket `2(p + m gamma e^{2 gamma t} x)^2/(m hbar omega e^{2 gamma t})
/// + 2 m omega e^{2 gamma t} x^2/hbar - 1`, which is `-1` at the origin.
pub fn wigner_n1(spec: &OscillatorSpec, t: f64, x: f64, p: f64) -> f64 {
    let gamma = spec.gamma();
    let omega = spec.reduced_frequency();
    let m = spec.mass();
    let hbar = spec.hbar();
    let e2 = (2.0 * gamma * t).exp();
    let shear = p + m * gamma * e2 * x;
    let q1 = shear * shear / (m * hbar * omega * e2);
    let q2 = m * omega * e2 * x * x / hbar;
    (2.0 * q1 + 2.0 * q2 - 1.0) * (-q1 - q2).exp() / (PI * hbar)
}

/// Closed-form position and momentum variances of `W_n`:
/// `(2n+1) (hbar / 2 m omega) e^{-2 gamma t}` and
/// `(2n+1) (m hbar e^{2 gamma t} / 2) omega0^2 / omega`.
pub fn closed_form_variances(spec: &OscillatorSpec, n: usize, t: f64) -> (f64, f64) {
    let q = 2.0 * n as f64 + 1.0;
    let omega = spec.reduced_frequency();
    let var_x = q * spec.hbar() / (2.0 * spec.mass() * omega) * (-2.0 * spec.gamma() * t).exp();
    let var_p = q * spec.mass() * spec.hbar() * (2.0 * spec.gamma() * t).exp() / 2.0
        * spec.omega0() * spec.omega0() / omega;
    (var_x, var_p)
}

/// Numeric Wigner transform of a gridded wavefunction,
///
/// `W(x, p) = (1/2 pi hbar) \int du e^{i u p / hbar}
///            psi*(x + u/2) psi(x - u/2)`,
///
/// by Riemann summation over the lags `u = 2 k dx` the grid supports. The
/// x axis of the output is the wavefunction grid; the caller picks the
/// (uniform) momentum axis. The imaginary residue of the sum is checked
/// against 1e-10 of the phase-space bound and then discarded.
pub fn wigner_numeric(psi: &WavefunctionGrid, p_axis: &[f64]) -> Result<WignerGrid> {
    check_axis("p", p_axis)?;
    let n_pts = psi.grid.len();
    let edge = psi.values[0].norm().max(psi.values[n_pts - 1].norm());
    if edge >= 1e-8 {
        return Err(Error::TruncatedSupport(format!(
            "|psi| = {edge:.3e} at the grid edge; the correlation integral \
             needs |psi| < 1e-8 there"
        )));
    }
    let dx = psi.grid.dx();
    let hbar = psi.spec.hbar();
    let du = 2.0 * dx;
    let pref = du / (2.0 * PI * hbar);

    // phase table e^{i u_k p_j / hbar}, u_k = 2 k dx, shared by all rows
    let np = p_axis.len();
    let table: Vec<Complex64> = (0..n_pts)
        .flat_map(|k| {
            let u = 2.0 * k as f64 * dx;
            p_axis
                .iter()
                .map(move |&p| Complex64::from_polar(1.0, u * p / hbar))
                .collect::<Vec<_>>()
        })
        .collect();

    let rows: Vec<Result<Vec<f64>>> = (0..n_pts)
        .into_par_iter()
        .map(|ix| {
            let k_max = ix.min(n_pts - 1 - ix);
            let mut acc = vec![Complex64::new(0.0, 0.0); np];
            // k = 0 term
            let c0 = psi.values[ix].conj() * psi.values[ix];
            for a in acc.iter_mut() {
                *a += c0;
            }
            for k in 1..=k_max {
                let c_plus = psi.values[ix + k].conj() * psi.values[ix - k];
                let c_minus = psi.values[ix - k].conj() * psi.values[ix + k];
                let row = &table[k * np..(k + 1) * np];
                for (j, a) in acc.iter_mut().enumerate() {
                    let ph = row[j];
                    *a += c_plus * ph + c_minus * ph.conj();
                }
            }
            let imag_bound = 1e-10 / (PI * hbar);
            let mut out = Vec::with_capacity(np);
            for a in acc {
                let w = a * pref;
                if w.im.abs() > imag_bound {
                    return Err(Error::NumericalCheck(format!(
                        "imaginary residue {:.3e} of the transform exceeds 1e-10/(pi hbar)",
                        w.im
                    )));
                }
                out.push(w.re);
            }
            Ok(out)
        })
        .collect();

    let mut values = Vec::with_capacity(n_pts * np);
    for row in rows {
        values.extend(row?);
    }
    WignerGrid::new(psi.grid.points(), p_axis.to_vec(), values, psi.t, psi.spec, psi.n.unwrap_or(0))
}

/// Position and momentum marginal densities by cell sums.
///
/// Requires the grid to cover at least six measured standard deviations
/// per axis, otherwise the sums silently truncate real probability.
pub fn marginals(w: &WignerGrid) -> Result<(Vec<f64>, Vec<f64>)> {
    let (_, var_x) = w.x_moments();
    let (_, var_p) = w.p_moments();
    let x_extent = w.x_axis[w.x_axis.len() - 1] - w.x_axis[0];
    let p_extent = w.p_axis[w.p_axis.len() - 1] - w.p_axis[0];
    if x_extent < 6.0 * var_x.max(0.0).sqrt() {
        return Err(Error::TruncatedSupport(format!(
            "x extent {x_extent:.3e} is below 6 measured sigma = {:.3e}",
            6.0 * var_x.sqrt()
        )));
    }
    if p_extent < 6.0 * var_p.max(0.0).sqrt() {
        return Err(Error::TruncatedSupport(format!(
            "p extent {p_extent:.3e} is below 6 measured sigma = {:.3e}",
            6.0 * var_p.sqrt()
        )));
    }
    let np = w.p_axis.len();
    let nx = w.x_axis.len();
    let pos: Vec<f64> = (0..nx)
        .map(|ix| w.values[ix * np..(ix + 1) * np].iter().sum::<f64>() * w.dp())
        .collect();
    let mom: Vec<f64> = (0..np)
        .map(|ip| (0..nx).map(|ix| w.values[ix * np + ip]).sum::<f64>() * w.dx())
        .collect();
    Ok((pos, mom))
}

/// Auto-framed evaluation windows: `+-5 sqrt(2n+1) sigma` per axis from the
/// closed-form covariance, so every figure frames its own support.
pub fn default_windows(spec: &OscillatorSpec, n: usize, t: f64) -> ((f64, f64), (f64, f64)) {
    let (var_x, var_p) = closed_form_variances(spec, n, t);
    let hx = 5.0 * var_x.sqrt();
    let hp = 5.0 * var_p.sqrt();
    ((-hx, hx), (-hp, hp))
}

/// Closed-form Wigner values over a mesh, for external surface plotting.
/// `resolution` counts nodes per axis (max 2048), endpoint-inclusive; odd
/// resolutions with symmetric windows place a node exactly at the origin.
pub fn figure_grid(
    spec: &OscillatorSpec,
    n: usize,
    t: f64,
    x_window: Option<(f64, f64)>,
    p_window: Option<(f64, f64)>,
    resolution: usize,
) -> Result<WignerGrid> {
    if !(2..=2048).contains(&resolution) {
        return Err(Error::OutOfRange {
            what: "figure resolution",
            value: resolution,
            min: 2,
            max: 2048,
        });
    }
    let (auto_x, auto_p) = default_windows(spec, n, t);
    let (x_lo, x_hi) = x_window.unwrap_or(auto_x);
    let (p_lo, p_hi) = p_window.unwrap_or(auto_p);
    if !(x_lo < x_hi && p_lo < p_hi) {
        return Err(Error::InvalidSpec("figure windows must be non-empty".into()));
    }
    let x_axis: Vec<f64> = (0..resolution)
        .map(|i| x_lo + (x_hi - x_lo) * i as f64 / (resolution - 1) as f64)
        .collect();
    let p_axis: Vec<f64> = (0..resolution)
        .map(|i| p_lo + (p_hi - p_lo) * i as f64 / (resolution - 1) as f64)
        .collect();
    let values: Vec<f64> = x_axis
        .par_iter()
        .map(|&x| {
            p_axis
                .iter()
                .map(|&p| wigner_closed_form(spec, n, t, x, p))
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<Vec<f64>>>>()?
        .into_iter()
        .flatten()
        .collect();
    WignerGrid::new(x_axis, p_axis, values, t, *spec, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::GridSpec;
    use crate::states::ck_wavefunction;

    #[test]
    fn map_examples() {
        let spec = OscillatorSpec::with_gamma(0.5).unwrap();
        let map = PhasePointMap { t: 0.0, spec };
        let (xp, pp) = map_phase_point(&map, 1.0, 0.0);
        assert!((xp - 1.0).abs() < 1e-15);
        assert!((pp - 0.5).abs() < 1e-15);

        let undamped = OscillatorSpec::unit();
        let map = PhasePointMap { t: 1.3, spec: undamped };
        let (xp, pp) = map_phase_point(&map, 0.7, -0.4);
        assert_eq!((xp, pp), (0.7, -0.4));
    }

    #[test]
    fn map_jacobian_is_one() {
        let spec = OscillatorSpec::with_gamma(0.5).unwrap();
        let map = PhasePointMap { t: 2.0, spec };
        let h = 1e-6;
        let (x, p) = (0.3, -0.8);
        let dxp_dx = (map_phase_point(&map, x + h, p).0 - map_phase_point(&map, x - h, p).0)
            / (2.0 * h);
        let dxp_dp = (map_phase_point(&map, x, p + h).0 - map_phase_point(&map, x, p - h).0)
            / (2.0 * h);
        let dpp_dx = (map_phase_point(&map, x + h, p).1 - map_phase_point(&map, x - h, p).1)
            / (2.0 * h);
        let dpp_dp = (map_phase_point(&map, x, p + h).1 - map_phase_point(&map, x, p - h).1)
            / (2.0 * h);
        let jac = dxp_dx * dpp_dp - dxp_dp * dpp_dx;
        assert!((jac - 1.0).abs() < 1e-9, "jacobian {jac}");
    }

    #[test]
    fn origin_values() {
        let spec = OscillatorSpec::with_gamma(0.5).unwrap();
        for n in 0..=5 {
            let w = wigner_closed_form(&spec, n, 1.0, 0.0, 0.0).unwrap();
            let expect = if n % 2 == 0 { 1.0 } else { -1.0 } / PI;
            assert!((w - expect).abs() < 1e-12, "n={n}: {w}");
        }
    }

    #[test]
    fn specializations_match_closed_form() {
        let spec = OscillatorSpec::with_gamma(0.5).unwrap();
        let pts = [(0.2, 0.1), (-0.7, 0.9), (1.1, -1.3), (0.0, 0.0)];
        for &(x, p) in &pts {
            for &t in &[0.0, 1.0, 2.5] {
                let v0 = wigner_vacuum(&spec, t, x, p);
                let c0 = wigner_closed_form(&spec, 0, t, x, p).unwrap();
                assert!((v0 - c0).abs() < 1e-12, "vacuum t={t} ({x},{p})");
                let v1 = wigner_n1(&spec, t, x, p);
                let c1 = wigner_closed_form(&spec, 1, t, x, p).unwrap();
                assert!((v1 - c1).abs() < 1e-12, "n1 t={t} ({x},{p})");
            }
        }
        assert!((wigner_n1(&spec, 1.0, 0.0, 0.0) + 1.0 / PI).abs() < 1e-15);
        assert!((wigner_vacuum(&OscillatorSpec::unit(), 0.0, 0.0, 0.0) - 1.0 / PI).abs() < 1e-15);
    }

    #[test]
    fn numeric_matches_closed_form() {
        let spec = OscillatorSpec::with_gamma(0.5).unwrap();
        let grid = GridSpec::symmetric(12.0, 2048).unwrap();
        let t = 1.0;
        for n in [0usize, 1] {
            let psi = ck_wavefunction(&spec, n, t, &grid).unwrap();
            let (var_x, var_p) = closed_form_variances(&spec, n, t);
            let hp = 6.0 * var_p.sqrt();
            let p_axis: Vec<f64> = (0..121).map(|i| -hp + 2.0 * hp * i as f64 / 120.0).collect();
            let w = wigner_numeric(&psi, &p_axis).unwrap();
            let hx = 6.0 * var_x.sqrt();
            let mut sup = 0.0f64;
            for (ix, &x) in w.x_axis.iter().enumerate() {
                if x.abs() > hx {
                    continue;
                }
                for (ip, &p) in w.p_axis.iter().enumerate() {
                    let exact = wigner_closed_form(&spec, n, t, x, p).unwrap();
                    sup = sup.max((w.value(ix, ip) - exact).abs());
                }
            }
            assert!(sup < 1e-6, "n={n}: sup-norm difference {sup}");
        }
    }

    #[test]
    fn numeric_static_gaussian_peak() {
        let spec = OscillatorSpec::unit();
        let grid = GridSpec::symmetric(10.0, 512).unwrap();
        let psi = ck_wavefunction(&spec, 0, 0.0, &grid).unwrap();
        let p_axis: Vec<f64> = (0..65).map(|i| -4.0 + 8.0 * i as f64 / 64.0).collect();
        let w = wigner_numeric(&psi, &p_axis).unwrap();
        let peak = w.value(grid.len() / 2, 32);
        assert!((peak - 1.0 / PI).abs() < 1e-8, "peak {peak}");
        // real even state: W(x, -p) = W(x, p)
        for ix in (0..grid.len()).step_by(37) {
            for ip in 0..32 {
                assert!((w.value(ix, ip) - w.value(ix, 64 - ip)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn numeric_rejects_leaky_support() {
        let spec = OscillatorSpec::unit();
        // wide enough for construction but trimmed afterwards to leak
        let grid = GridSpec::symmetric(10.0, 512).unwrap();
        let mut psi = ck_wavefunction(&spec, 0, 0.0, &grid).unwrap();
        psi.values[0] = Complex64::new(1e-4, 0.0);
        let p_axis: Vec<f64> = (0..17).map(|i| -2.0 + 0.25 * i as f64).collect();
        assert!(matches!(
            wigner_numeric(&psi, &p_axis),
            Err(Error::TruncatedSupport(_))
        ));
    }

    #[test]
    fn marginals_of_closed_form_grid() {
        let spec = OscillatorSpec::with_gamma(0.5).unwrap();
        let t = 1.0;
        let (var_x, var_p) = closed_form_variances(&spec, 0, t);
        let w = figure_grid(
            &spec,
            0,
            t,
            Some((-6.0 * var_x.sqrt(), 6.0 * var_x.sqrt())),
            Some((-6.0 * var_p.sqrt(), 6.0 * var_p.sqrt())),
            241,
        )
        .unwrap();
        assert!((w.integral() - 1.0).abs() < 1e-4);
        let (pos, mom) = marginals(&w).unwrap();
        // position marginal is the squeezed Gaussian |psi_0|^2
        let sigma2 = var_x;
        for (ix, &x) in w.x_axis.iter().enumerate() {
            let expect = (-x * x / (2.0 * sigma2)).exp() / (2.0 * PI * sigma2).sqrt();
            assert!((pos[ix] - expect).abs() < 1e-5, "x={x}: {} vs {expect}", pos[ix]);
        }
        let pos_total: f64 = pos.iter().sum::<f64>() * w.dx();
        let mom_total: f64 = mom.iter().sum::<f64>() * w.dp();
        assert!((pos_total - 1.0).abs() < 1e-4);
        assert!((mom_total - 1.0).abs() < 1e-4);
    }

    #[test]
    fn marginal_node_for_first_excited() {
        let spec = OscillatorSpec::with_gamma(0.5).unwrap();
        let w = figure_grid(&spec, 1, 1.0, None, None, 201).unwrap();
        let (pos, _) = marginals(&w).unwrap();
        // node at x = 0 (odd resolution puts a sample there)
        assert!(pos[100].abs() < 1e-9, "density at origin {}", pos[100]);
    }

    #[test]
    fn squeezing_monotonicity() {
        let spec = OscillatorSpec::with_gamma(0.5).unwrap();
        let mut prev_x = f64::INFINITY;
        let mut prev_p = 0.0;
        for &t in &[0.0, 1.0, 3.0] {
            let (var_x, var_p) = closed_form_variances(&spec, 0, t);
            let w = figure_grid(
                &spec,
                0,
                t,
                Some((-6.0 * var_x.sqrt(), 6.0 * var_x.sqrt())),
                Some((-6.0 * var_p.sqrt(), 6.0 * var_p.sqrt())),
                241,
            )
            .unwrap();
            let (_, vx) = w.x_moments();
            let (_, vp) = w.p_moments();
            assert!(((vx - var_x) / var_x).abs() < 1e-6, "t={t}: {vx} vs {var_x}");
            assert!(vx < prev_x || t == 0.0);
            assert!(vp > prev_p);
            prev_x = vx;
            prev_p = vp;
        }
    }

    #[test]
    fn figure_grid_negative_core() {
        let spec = OscillatorSpec::with_gamma(0.5).unwrap();
        let w = figure_grid(&spec, 1, 1.0, None, None, 201).unwrap();
        assert!(w.negative_cells() > 0);
        assert!((w.min_value() + 1.0 / PI).abs() < 1e-6, "min {}", w.min_value());
        // isotropic vacuum panel peaks at 1/pi
        let undamped = OscillatorSpec::unit();
        let w0 = figure_grid(&undamped, 0, 0.0, None, None, 201).unwrap();
        assert!((w0.max_value() - 1.0 / PI).abs() < 1e-12);
        assert_eq!(w0.negative_cells(), 0);
    }

    #[test]
    fn closed_form_bound_holds_on_dense_mesh() {
        let spec = OscillatorSpec::with_gamma(0.5).unwrap();
        for n in [0usize, 1, 2, 5] {
            let w = figure_grid(&spec, n, 1.0, None, None, 301).unwrap();
            let bound = 1.0 / (PI * spec.hbar()) + 1e-12;
            assert!(w.min_value() >= -bound && w.max_value() <= bound);
        }
    }

    #[test]
    fn csv_and_json_shape() {
        let spec = OscillatorSpec::with_gamma(0.5).unwrap();
        let w = figure_grid(&spec, 0, 1.0, None, None, 16).unwrap();
        let mut buf = Vec::new();
        w.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("# version=1\n"));
        assert_eq!(text.lines().count(), 3 + 256);
        let json = w.to_json();
        assert_eq!(json["version"], 1);
        assert_eq!(json["values"].as_array().unwrap().len(), 256);
        assert_eq!(json["metadata"]["n"], 0);
    }
}

//! Truncated Fock-basis realization of the Fresnel operator.
//!
//! Two independent constructions of the same unitary are provided: the
//! canonical-quadrature product of `X^2`, `XP+PX`, `P^2` exponentials, and
//! the normal-ordered product `exp(s a†²) exp((a†a+1/2) ln tau) exp(s' a²)`.
//! Cross-validating them, checking the quadrature similarity relations, and
//! generating squeezed number states are the public operations.
//!
//! All parameters here are in dimensionless quadrature units
//! (`X = (a + a†)/sqrt(2)`, `[X, P] = i`). Physical ABCD parameters are
//! rescaled with [`crate::abcd::ABCDState::to_quadrature_units`] first.
//!
//! Truncation corrupts the top of the basis: squeezing drives population
//! toward high levels and anything within reach of the boundary is
//! unreliable. Norms are therefore always reported on the lower half block.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::abcd::ABCDState;
use crate::error::{Error, Result};
use crate::model::{eigenfunction_ladder, GridSpec, OscillatorSpec};
use crate::states::WavefunctionGrid;

const I: Complex64 = Complex64::new(0.0, 1.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Smallest and largest supported truncation.
pub const MIN_DIM: usize = 4;
pub const MAX_DIM: usize = 512;

/// Dense complex matrix in an `N`-level Fock basis.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedOperator {
    dim: usize,
    entries: DMatrix<Complex64>,
}

impl TruncatedOperator {
    pub fn new(entries: DMatrix<Complex64>) -> Result<Self> {
        let dim = entries.nrows();
        if entries.ncols() != dim {
            return Err(Error::ShapeMismatch("operator matrix must be square".into()));
        }
        check_dim(dim)?;
        Ok(Self { dim, entries })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self { dim, entries: DMatrix::identity(dim, dim) })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn entry(&self, row: usize, col: usize) -> Complex64 {
        self.entries[(row, col)]
    }

    pub fn adjoint(&self) -> Self {
        Self { dim: self.dim, entries: self.entries.adjoint() }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::ShapeMismatch(format!(
                "operator dims differ: {} vs {}",
                self.dim, other.dim
            )));
        }
        Ok(Self { dim: self.dim, entries: &self.entries * &other.entries })
    }

    /// Apply to a Fock coefficient vector.
    pub fn apply(&self, coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
        if coeffs.len() != self.dim {
            return Err(Error::ShapeMismatch(format!(
                "coefficient vector length {} does not match dim {}",
                coeffs.len(),
                self.dim
            )));
        }
        let v = DVector::from_column_slice(coeffs);
        Ok((&self.entries * v).iter().cloned().collect())
    }

    /// Frobenius norm of the top-left `block x block` sub-matrix.
    pub fn frobenius_block(&self, block: usize) -> f64 {
        let block = block.min(self.dim);
        let mut acc = 0.0;
        for j in 0..block {
            for k in 0..block {
                acc += self.entries[(j, k)].norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// `|| (U†U - I) ||_F` restricted to the top-left `block` square.
    pub fn unitarity_defect(&self, block: usize) -> f64 {
        let mut prod = self.entries.adjoint() * &self.entries;
        for j in 0..self.dim {
            prod[(j, j)] -= ONE;
        }
        let block = block.min(self.dim);
        let mut acc = 0.0;
        for j in 0..block {
            for k in 0..block {
                acc += prod[(j, k)].norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// Frobenius distance to `other` on the top-left `block` square.
    pub fn block_distance(&self, other: &Self, block: usize) -> f64 {
        let block = block.min(self.dim.min(other.dim));
        let mut acc = 0.0;
        for j in 0..block {
            for k in 0..block {
                acc += (self.entries[(j, k)] - other.entries[(j, k)]).norm_sqr();
            }
        }
        acc.sqrt()
    }

    /// Debug serialization: `{dim, entries_re, entries_im}`, row-major.
    /// Not a stability-guaranteed format.
    pub fn to_json(&self) -> serde_json::Value {
        let mut re = Vec::with_capacity(self.dim * self.dim);
        let mut im = Vec::with_capacity(self.dim * self.dim);
        for j in 0..self.dim {
            for k in 0..self.dim {
                re.push(self.entries[(j, k)].re);
                im.push(self.entries[(j, k)].im);
            }
        }
        serde_json::json!({ "dim": self.dim, "entries_re": re, "entries_im": im })
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if !(MIN_DIM..=MAX_DIM).contains(&dim) {
        return Err(Error::OutOfRange { what: "fock dimension", value: dim, min: MIN_DIM, max: MAX_DIM });
    }
    Ok(())
}

fn check_symplectic(abcd: &ABCDState) -> Result<()> {
    let defect = abcd.symplectic_defect();
    if defect > 1e-10 {
        return Err(Error::InvalidSpec(format!(
            "ABCD parameters have symplectic defect {defect:.3e} > 1e-10"
        )));
    }
    Ok(())
}

/// Annihilation and creation matrices: `a` carries `sqrt(k)` on the
/// superdiagonal (row `k-1`, column `k`), `a†` is its conjugate transpose.
pub fn ladder_matrices(dim: usize) -> Result<(TruncatedOperator, TruncatedOperator)> {
    check_dim(dim)?;
    let mut a = DMatrix::from_element(dim, dim, ZERO);
    for k in 1..dim {
        a[(k - 1, k)] = Complex64::new((k as f64).sqrt(), 0.0);
    }
    let adag = a.adjoint();
    Ok((TruncatedOperator { dim, entries: a }, TruncatedOperator { dim, entries: adag }))
}

/// Hermitian quadratures `X = (a + a†)/sqrt(2)`, `P = (a - a†)/(i sqrt(2))`.
pub fn quadrature_matrices(dim: usize) -> Result<(TruncatedOperator, TruncatedOperator)> {
    let (a, adag) = ladder_matrices(dim)?;
    let sqrt2_inv = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    let x = (&a.entries + &adag.entries) * sqrt2_inv;
    let p = (&a.entries - &adag.entries) * (sqrt2_inv / I);
    Ok((TruncatedOperator { dim, entries: x }, TruncatedOperator { dim, entries: p }))
}

/// `exp(z G)` for Hermitian `G` by eigendecomposition: exact to rounding at
/// these dimensions, no series truncation. The input is symmetrized first
/// to scrub the rounding-level anti-Hermitian dust of matrix products.
fn expm_hermitian(g: &DMatrix<Complex64>, z: Complex64) -> DMatrix<Complex64> {
    let n = g.nrows();
    let herm = (g + g.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = herm.symmetric_eigen();
    let mut scaled = eig.eigenvectors.clone();
    for (j, mut col) in scaled.column_iter_mut().enumerate() {
        let factor = (z * eig.eigenvalues[j]).exp();
        for v in col.iter_mut() {
            *v *= factor;
        }
    }
    let mut out = scaled * eig.eigenvectors.adjoint();
    debug_assert_eq!(out.nrows(), n);
    out.resize_mut(n, n, ZERO);
    out
}

/// Canonical-quadrature factorization of the Fresnel operator:
///
/// `F = exp(i C/(2A) X^2) exp(-i/2 (XP + PX) ln A) exp(-i B/(2A) P^2)`.
///
/// Each factor is the exponential of a (truncated) Hermitian generator, so
/// the product is exactly unitary at every truncation. Requires `A > 0`
/// (real logarithm) and a symplectic parameter set.
pub fn fresnel_canonical(abcd: &ABCDState, dim: usize) -> Result<TruncatedOperator> {
    check_dim(dim)?;
    check_symplectic(abcd)?;
    if !(abcd.a > 0.0) {
        return Err(Error::WrongBranch(format!(
            "canonical factorization needs A > 0 for a real ln A, got A = {}",
            abcd.a
        )));
    }
    let (x, p) = quadrature_matrices(dim)?;
    let x2 = &x.entries * &x.entries;
    let p2 = &p.entries * &p.entries;
    let xp_px = &x.entries * &p.entries + &p.entries * &x.entries;

    let chirp = expm_hermitian(&x2, I * (abcd.c / (2.0 * abcd.a)));
    let scale = expm_hermitian(&xp_px, -I * (0.5 * abcd.a.ln()));
    let lens = expm_hermitian(&p2, -I * (abcd.b / (2.0 * abcd.a)));

    Ok(TruncatedOperator { dim, entries: chirp * scale * lens })
}

/// Normal-ordered factorization of the Fresnel operator:
///
/// `F = exp(s a†²) exp((a†a + 1/2) ln tau) exp(s' a²)` with
/// `s = (A - D + i(B + C)) / (2 (A + D + i(B - C)))`,
/// `tau = 2 / (A + D + i(B - C))`,
/// `s' = -(A - D - i(B + C)) / (2 (A + D + i(B - C)))`.
///
/// The three factors are triangular/diagonal, so each matrix element of the
/// product closes over intermediate levels `<= min(row, col)`: the entries
/// equal the untruncated operator's matrix elements exactly. (The flip side
/// is that columns near the truncation lose the norm that lives above it.)
/// Principal branches fix the `ln tau` phase.
pub fn fresnel_normal_ordered(abcd: &ABCDState, dim: usize) -> Result<TruncatedOperator> {
    check_dim(dim)?;
    check_symplectic(abcd)?;
    let denom = Complex64::new(abcd.a + abcd.d, abcd.b - abcd.c);
    if denom.norm() < 1e-12 {
        return Err(Error::Degenerate(format!(
            "A + D + i(B - C) = {denom} vanishes; the normal-ordered form is singular here"
        )));
    }
    let s = Complex64::new(abcd.a - abcd.d, abcd.b + abcd.c) / (2.0 * denom);
    let sp = -Complex64::new(abcd.a - abcd.d, -(abcd.b + abcd.c)) / (2.0 * denom);
    let tau = Complex64::new(2.0, 0.0) / denom;
    let ln_tau = tau.ln();

    // <j| exp(s a†²) |k> = s^m / m! sqrt(j!/k!), j - k = 2m >= 0,
    // accumulated incrementally so no factorial is ever formed.
    let mut up = DMatrix::from_element(dim, dim, ZERO);
    for k in 0..dim {
        let mut val = ONE;
        up[(k, k)] = val;
        let mut m = 0usize;
        let mut j = k;
        while j + 2 < dim {
            val *= s * ((j + 1) as f64 * (j + 2) as f64).sqrt() / (m + 1) as f64;
            j += 2;
            m += 1;
            up[(j, k)] = val;
        }
    }
    // <j| exp(s' a²) |k> = s'^m / m! sqrt(k!/j!), k - j = 2m >= 0
    let mut down = DMatrix::from_element(dim, dim, ZERO);
    for k in 0..dim {
        let mut val = ONE;
        down[(k, k)] = val;
        let mut m = 0usize;
        let mut j = k;
        while j >= 2 {
            val *= sp * (j as f64 * (j - 1) as f64).sqrt() / (m + 1) as f64;
            j -= 2;
            m += 1;
            down[(j, k)] = val;
        }
    }
    // middle factor is diagonal: tau^{k + 1/2}
    for k in 0..dim {
        let factor = ((k as f64 + 0.5) * ln_tau).exp();
        for j in 0..dim {
            up[(j, k)] *= factor;
        }
    }
    Ok(TruncatedOperator { dim, entries: up * down })
}

/// Frobenius defects (on the lower half block) of the four quadrature
/// similarity relations
///
/// `F X F† = D X - B P`, `F† X F = A X + B P`,
/// `F P F† = A P - C X`, `F† P F = C X + D P`.
///
/// Exact in infinite dimension for either construction; the defects shrink
/// as the truncation grows.
pub fn verify_similarity(f: &TruncatedOperator, abcd: &ABCDState) -> Result<[f64; 4]> {
    let dim = f.dim;
    let block = dim / 2;
    let (x, p) = quadrature_matrices(dim)?;
    let fd = f.entries.adjoint();
    let a = Complex64::new(abcd.a, 0.0);
    let b = Complex64::new(abcd.b, 0.0);
    let c = Complex64::new(abcd.c, 0.0);
    let d = Complex64::new(abcd.d, 0.0);

    let defect = |got: DMatrix<Complex64>, want: DMatrix<Complex64>| -> f64 {
        let diff = got - want;
        let mut acc = 0.0;
        for j in 0..block {
            for k in 0..block {
                acc += diff[(j, k)].norm_sqr();
            }
        }
        acc.sqrt()
    };

    let fxfd = &f.entries * &x.entries * &fd;
    let fdxf = &fd * &x.entries * &f.entries;
    let fpfd = &f.entries * &p.entries * &fd;
    let fdpf = &fd * &p.entries * &f.entries;

    Ok([
        defect(fxfd, &x.entries * d - &p.entries * b),
        defect(fdxf, &x.entries * a + &p.entries * b),
        defect(fpfd, &p.entries * a - &x.entries * c),
        defect(fdpf, &x.entries * c + &p.entries * d),
    ])
}

/// Fock coefficients of the squeezed number state `F^{-1} |n>`: column `n`
/// of the conjugate transpose of the (normal-ordered, entry-exact) Fresnel
/// matrix.
///
/// Requires `n < dim/2` and enough truncation headroom that the column
/// keeps unit norm to 1e-8; rendering the coefficients through the
/// oscillator eigenfunctions reproduces the closed-form wavefunction up to
/// a global phase.
pub fn squeezed_number_state(abcd: &ABCDState, n: usize, dim: usize) -> Result<Vec<Complex64>> {
    check_dim(dim)?;
    if n >= dim / 2 {
        return Err(Error::OutOfRange { what: "fock level n", value: n, min: 0, max: dim / 2 - 1 });
    }
    let f = fresnel_normal_ordered(abcd, dim)?;
    // (F†)_{j,n} = conj(F_{n,j})
    let coeffs: Vec<Complex64> = (0..dim).map(|j| f.entries[(n, j)].conj()).collect();
    let norm: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if (norm - 1.0).abs() > 1e-8 {
        return Err(Error::NumericalCheck(format!(
            "squeezed state norm {norm:.12} deviates from 1 by more than 1e-8; \
             the truncation dim = {dim} has insufficient headroom for n = {n} \
             at these squeezing parameters"
        )));
    }
    Ok(coeffs)
}

/// Render Fock coefficients (in the reduced-frequency eigenbasis) onto a
/// position grid: `psi(x) = sum_k c_k chi_k(x)`.
pub fn render_fock_state(
    coeffs: &[Complex64],
    spec: &OscillatorSpec,
    grid: &GridSpec,
    t: f64,
) -> Result<WavefunctionGrid> {
    if coeffs.is_empty() {
        return Err(Error::ShapeMismatch("empty coefficient vector".into()));
    }
    let top = coeffs.len() - 1;
    let values: Vec<Complex64> = (0..grid.len())
        .map(|i| {
            let ladder = eigenfunction_ladder(top, spec, grid.point(i));
            coeffs
                .iter()
                .zip(&ladder)
                .map(|(c, &chi)| c * chi)
                .sum()
        })
        .collect();
    Ok(WavefunctionGrid { grid: *grid, t, spec: *spec, n: None, values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abcd::ck_abcd;
    use crate::model::OscillatorSpec;

    fn ck_fock_abcd(gamma: f64, t: f64) -> ABCDState {
        let spec = OscillatorSpec::with_gamma(gamma).unwrap();
        ck_abcd(&spec, t).to_quadrature_units(&spec)
    }

    #[test]
    fn ladder_entries() {
        let (a, adag) = ladder_matrices(4).unwrap();
        assert_eq!(a.entry(0, 1), ONE);
        assert_eq!(a.entry(1, 2).re, 2.0f64.sqrt());
        assert_eq!(a.entry(2, 3).re, 3.0f64.sqrt());
        assert_eq!(a.entry(1, 0), ZERO);
        assert_eq!(adag.entry(1, 0), ONE);
        assert!(ladder_matrices(2).is_err());
    }

    #[test]
    fn commutator_is_identity_off_corner() {
        let dim = 16;
        let (a, adag) = ladder_matrices(dim).unwrap();
        let comm = a.mul(&adag).unwrap().entries - adag.mul(&a).unwrap().entries;
        for j in 0..dim {
            for k in 0..dim {
                let expect = if j == k {
                    if j == dim - 1 {
                        -((dim - 1) as f64)
                    } else {
                        1.0
                    }
                } else {
                    0.0
                };
                assert!((comm[(j, k)] - Complex64::new(expect, 0.0)).norm() < 1e-12);
            }
        }
        // number operator diagonal
        let num = adag.mul(&a).unwrap();
        for k in 0..dim {
            assert!((num.entry(k, k).re - k as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn quadrature_structure() {
        let dim = 12;
        let (x, p) = quadrature_matrices(dim).unwrap();
        for j in 0..dim {
            assert_eq!(x.entry(j, j), ZERO);
            assert_eq!(p.entry(j, j), ZERO);
            for k in 0..dim {
                // X real symmetric, P purely imaginary Hermitian, tridiagonal
                assert_eq!(x.entry(j, k).im, 0.0);
                assert_eq!(p.entry(j, k).re, 0.0);
                if j.abs_diff(k) > 1 {
                    assert_eq!(x.entry(j, k), ZERO);
                    assert_eq!(p.entry(j, k), ZERO);
                }
                assert!((x.entry(j, k) - x.entry(k, j).conj()).norm() < 1e-15);
                assert!((p.entry(j, k) - p.entry(k, j).conj()).norm() < 1e-15);
            }
        }
        // [X, P] = i I off the truncation corner
        let comm = x.mul(&p).unwrap().entries - p.mul(&x).unwrap().entries;
        for j in 0..dim - 1 {
            for k in 0..dim - 1 {
                let expect = if j == k { I } else { ZERO };
                assert!((comm[(j, k)] - expect).norm() < 1e-12, "[{j},{k}]");
            }
        }
    }

    #[test]
    fn canonical_identity_is_identity() {
        let f = fresnel_canonical(&ABCDState::identity(0.0), 32).unwrap();
        let id = TruncatedOperator::identity(32).unwrap();
        assert!(f.block_distance(&id, 32) < 1e-12);
    }

    #[test]
    fn canonical_rejects_bad_input() {
        assert!(fresnel_canonical(&ABCDState::new(0.0, -1.0, 0.0, 0.0, -1.0), 32).is_err());
        assert!(fresnel_canonical(&ABCDState::new(0.0, 1.0, 0.3, 0.0, 1.0), 32).is_err());
    }

    #[test]
    fn canonical_is_exactly_unitary() {
        // exponentials of truncated Hermitian generators: unitary at any
        // squeezing, including gamma t = 1.5
        let abcd = ck_fock_abcd(0.5, 3.0);
        let f = fresnel_canonical(&abcd, 128).unwrap();
        assert!(f.unitarity_defect(64) < 1e-8, "{}", f.unitarity_defect(64));
    }

    #[test]
    fn normal_ordered_identity_and_rotation() {
        let f = fresnel_normal_ordered(&ABCDState::identity(0.0), 16).unwrap();
        let id = TruncatedOperator::identity(16).unwrap();
        assert!(f.block_distance(&id, 16) < 1e-12);

        // quarter-turn rotation equals exp(-i pi/2 (a†a + 1/2))
        let theta = std::f64::consts::FRAC_PI_2;
        let rot = ABCDState::new(0.0, theta.cos(), theta.sin(), -theta.sin(), theta.cos());
        let f = fresnel_normal_ordered(&rot, 16).unwrap();
        for j in 0..16 {
            for k in 0..16 {
                let expect = if j == k {
                    (-I * theta * (j as f64 + 0.5)).exp()
                } else {
                    ZERO
                };
                assert!((f.entry(j, k) - expect).norm() < 1e-12, "({j},{k})");
            }
        }
    }

    #[test]
    fn normal_ordered_degenerate_parameters() {
        // A + D + i(B - C) = 0 at a half-turn rotation
        let rot = ABCDState::new(0.0, -1.0, 0.0, 0.0, -1.0);
        assert!(matches!(
            fresnel_normal_ordered(&rot, 16),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn factorizations_agree_on_lower_block() {
        let abcd = ck_fock_abcd(0.5, 1.0);
        let canonical = fresnel_canonical(&abcd, 128).unwrap();
        let normal = fresnel_normal_ordered(&abcd, 128).unwrap();
        let dist = canonical.block_distance(&normal, 64);
        assert!(dist < 1e-6, "factorization disagreement {dist}");
    }

    #[test]
    fn pure_chirp_agreement() {
        // (A, B, C, D) = (1, 0, c, 1): two canonical factors collapse
        let abcd = ABCDState::new(0.0, 1.0, 0.0, 0.7, 1.0);
        let canonical = fresnel_canonical(&abcd, 64).unwrap();
        let normal = fresnel_normal_ordered(&abcd, 64).unwrap();
        assert!(canonical.block_distance(&normal, 32) < 1e-8);
        assert!(canonical.unitarity_defect(32) < 1e-10);
    }

    #[test]
    fn similarity_defects_identity() {
        let f = fresnel_canonical(&ABCDState::identity(0.0), 32).unwrap();
        let defects = verify_similarity(&f, &ABCDState::identity(0.0)).unwrap();
        for d in defects {
            assert!(d < 1e-12, "{defects:?}");
        }
    }

    #[test]
    fn similarity_defects_ck() {
        let abcd = ck_fock_abcd(0.5, 1.0);
        let f = fresnel_canonical(&abcd, 128).unwrap();
        let defects = verify_similarity(&f, &abcd).unwrap();
        for d in defects {
            assert!(d < 1e-6, "{defects:?}");
        }
    }

    #[test]
    fn similarity_defects_shrink_with_dim() {
        let abcd = ck_fock_abcd(0.5, 1.0);
        let d64: f64 = {
            let f = fresnel_normal_ordered(&abcd, 64).unwrap();
            verify_similarity(&f, &abcd)
                .unwrap()
                .into_iter()
                .fold(0.0, f64::max)
        };
        let d128: f64 = {
            let f = fresnel_normal_ordered(&abcd, 128).unwrap();
            verify_similarity(&f, &abcd)
                .unwrap()
                .into_iter()
                .fold(0.0, f64::max)
        };
        assert!(d128 < d64, "defects did not shrink: {d64} -> {d128}");
    }

    #[test]
    fn squeezed_state_identity_is_basis_vector() {
        let coeffs = squeezed_number_state(&ABCDState::identity(0.0), 3, 16).unwrap();
        for (j, c) in coeffs.iter().enumerate() {
            let expect = if j == 3 { ONE } else { ZERO };
            assert!((c - expect).norm() < 1e-12);
        }
        assert!(squeezed_number_state(&ABCDState::identity(0.0), 8, 16).is_err());
    }

    #[test]
    fn squeezed_state_parity() {
        // even-n squeezed states have no odd components
        let abcd = ck_fock_abcd(0.5, 1.0);
        let coeffs = squeezed_number_state(&abcd, 0, 128).unwrap();
        for (j, c) in coeffs.iter().enumerate() {
            if j % 2 == 1 {
                assert!(c.norm() < 1e-15, "odd component {j} = {c}");
            }
        }
        let norm: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        assert!((norm - 1.0).abs() < 1e-8);
    }

    #[test]
    fn composition_up_to_global_phase() {
        // F(M2) F(M1) ~ F(M2 M1): rotation-squeeze pairs with moderate norms
        let m = |theta: f64, r: f64| {
            ABCDState::new(
                0.0,
                theta.cos() * r.exp(),
                theta.sin() * (-r).exp(),
                -theta.sin() * r.exp(),
                theta.cos() * (-r).exp(),
            )
        };
        for (m1, m2) in [(m(0.3, 0.2), m(-0.4, 0.35)), (m(0.9, -0.25), m(0.15, 0.3))] {
            let dim = 128;
            let block = 64;
            let f1 = fresnel_normal_ordered(&m1, dim).unwrap();
            let f2 = fresnel_normal_ordered(&m2, dim).unwrap();
            let prod = f2.mul(&f1).unwrap();
            let f3 = fresnel_normal_ordered(&m2.compose(&m1), dim).unwrap();
            // extract the relative phase on the block, then compare
            let mut overlap = ZERO;
            for j in 0..block {
                for k in 0..block {
                    overlap += f3.entry(j, k).conj() * prod.entry(j, k);
                }
            }
            let phase = overlap / overlap.norm();
            let mut acc = 0.0;
            for j in 0..block {
                for k in 0..block {
                    acc += (prod.entry(j, k) - phase * f3.entry(j, k)).norm_sqr();
                }
            }
            let defect = acc.sqrt();
            assert!(defect < 1e-5, "composition defect {defect}");
        }
    }

    #[test]
    fn json_round_shape() {
        let f = fresnel_normal_ordered(&ck_fock_abcd(0.5, 0.5), 8).unwrap();
        let v = f.to_json();
        assert_eq!(v["dim"], 8);
        assert_eq!(v["entries_re"].as_array().unwrap().len(), 64);
        assert_eq!(v["entries_im"].as_array().unwrap().len(), 64);
    }
}

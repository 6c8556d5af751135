//! First-order two-component form of the Helmholtz equation,
//! `d_z Psi = i (s1 d_x + s2 d_y + s3 k0) Psi`, solved exactly mode by mode.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::{Complex, Complex64};
use num_traits::{Num, One, Zero};

use crate::error::{Error, Result};
use crate::field::{
    check_same_grid, forward_transform_unchecked, gradient_xy, inverse_transform_unchecked, CauchyPlane, Field2D,
    Spectrum2D,
};
use crate::flow::cos_sinc;
use crate::grid::Grid2D;

/// 2x2 matrix over any ring, row-major.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Mat2<T>(pub [[T; 2]; 2]);

impl<T: Copy + Add<Output = T> + Mul<Output = T>> Mul for Mat2<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let (a, b) = (self.0, o.0);
        Mat2([
            [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
            [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
        ])
    }
}

impl<T: Copy + Add<Output = T>> Add for Mat2<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Mat2(std::array::from_fn(|i| std::array::from_fn(|j| self.0[i][j] + o.0[i][j])))
    }
}

impl<T: Copy + Sub<Output = T>> Sub for Mat2<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Mat2(std::array::from_fn(|i| std::array::from_fn(|j| self.0[i][j] - o.0[i][j])))
    }
}

impl<T: Copy + Neg<Output = T>> Neg for Mat2<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Mat2(self.0.map(|r| r.map(|v| -v)))
    }
}

impl<T: Copy + Mul<Output = T>> Mat2<T> {
    pub fn scale(self, s: T) -> Self {
        Mat2(self.0.map(|r| r.map(|v| s * v)))
    }
}

impl<T: Clone + Num + Neg<Output = T>> Mat2<Complex<T>> {
    pub fn identity() -> Self {
        let (o, z) = (Complex::<T>::one(), Complex::<T>::zero());
        Mat2([[o.clone(), z.clone()], [z, o]])
    }

    pub fn zero() -> Self {
        let z = Complex::<T>::zero();
        Mat2([[z.clone(), z.clone()], [z.clone(), z]])
    }

    pub fn adjoint(&self) -> Self {
        let a = &self.0;
        Mat2([[a[0][0].conj(), a[1][0].conj()], [a[0][1].conj(), a[1][1].conj()]])
    }
}

impl Mat2<Complex64> {
    pub fn apply(&self, v: [Complex64; 2]) -> [Complex64; 2] {
        let a = &self.0;
        [a[0][0] * v[0] + a[0][1] * v[1], a[1][0] * v[0] + a[1][1] * v[1]]
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().fold(0.0, |m, v| m.max(v.norm()))
    }
}

type ExactMat = Mat2<Complex<i64>>;

fn exact(m: [[(i64, i64); 2]; 2]) -> ExactMat {
    Mat2(m.map(|r| r.map(|(re, im)| Complex::new(re, im))))
}

/// Pauli matrices `[s1, s2, s3]` with integer entries.
pub fn pauli() -> [ExactMat; 3] {
    [
        exact([[(0, 0), (1, 0)], [(1, 0), (0, 0)]]),
        exact([[(0, 0), (0, -1)], [(0, 1), (0, 0)]]),
        exact([[(1, 0), (0, 0)], [(0, 0), (-1, 0)]]),
    ]
}

/// The matrices of the first-order form. `gamma` holds the printed set
/// `(-i s2, i s1, s3)`; `operator_gamma` holds `(s2, -s1, s3)`, the set for
/// which `i gamma^mu d_mu + k0 = i s3 (d_z - G)` with `G` the generator.
#[derive(Debug, Clone, PartialEq)]
pub struct DiracMatrices {
    pub alpha1: ExactMat,
    pub alpha2: ExactMat,
    pub betak0: ExactMat,
    pub gamma: [ExactMat; 3],
    pub operator_gamma: [ExactMat; 3],
}

impl Default for DiracMatrices {
    fn default() -> Self {
        let [s1, s2, s3] = pauli();
        let i = Complex::new(0, 1);
        Self {
            alpha1: s1.scale(i),
            alpha2: s2.scale(i),
            betak0: s3.scale(i),
            gamma: [s2.scale(-i), s1.scale(i), s3],
            operator_gamma: [s2, -s1, s3],
        }
    }
}

/// One algebraic relation and the largest entry of `lhs - rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraCheck {
    pub relation: String,
    pub max_deviation: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraReport {
    pub checks: Vec<AlgebraCheck>,
}

impl AlgebraReport {
    pub fn max_deviation(&self) -> i64 {
        self.checks.iter().map(|c| c.max_deviation).max().unwrap_or(0)
    }

    pub fn passed(&self) -> bool {
        self.max_deviation() == 0
    }
}

fn deviation(a: ExactMat, b: ExactMat) -> i64 {
    (a - b).0.iter().flatten().map(|v| v.re.abs().max(v.im.abs())).max().unwrap_or(0)
}

/// Integer symbol of the generator, `M(p) = -p1 s1 - p2 s2 + i k0 s3`.
fn exact_mode_matrix(p1: i64, p2: i64, k0: i64) -> ExactMat {
    let [s1, s2, s3] = pauli();
    s1.scale(Complex::new(-p1, 0)) + s2.scale(Complex::new(-p2, 0)) + s3.scale(Complex::new(0, k0))
}

/// Verifies the defining relations of the first-order form in exact integer
/// arithmetic.
pub fn verify_algebra() -> AlgebraReport {
    let m = DiracMatrices::default();
    let one = ExactMat::identity();
    let zero = ExactMat::zero();
    let anti = |a: ExactMat, b: ExactMat| a * b + b * a;
    let mut checks = vec![
        AlgebraCheck { relation: "alpha1^2 = -1".into(), max_deviation: deviation(m.alpha1 * m.alpha1, -one) },
        AlgebraCheck { relation: "alpha2^2 = -1".into(), max_deviation: deviation(m.alpha2 * m.alpha2, -one) },
        AlgebraCheck { relation: "{alpha1, alpha2} = 0".into(), max_deviation: deviation(anti(m.alpha1, m.alpha2), zero) },
        AlgebraCheck { relation: "{alpha1, beta k0} = 0".into(), max_deviation: deviation(anti(m.alpha1, m.betak0), zero) },
        AlgebraCheck { relation: "{alpha2, beta k0} = 0".into(), max_deviation: deviation(anti(m.alpha2, m.betak0), zero) },
        AlgebraCheck { relation: "(beta k0)^2 = -1".into(), max_deviation: deviation(m.betak0 * m.betak0, -one) },
        AlgebraCheck { relation: "alpha1 anti-Hermitian".into(), max_deviation: deviation(m.alpha1.adjoint(), -m.alpha1) },
        AlgebraCheck { relation: "alpha2 anti-Hermitian".into(), max_deviation: deviation(m.alpha2.adjoint(), -m.alpha2) },
        AlgebraCheck { relation: "beta k0 anti-Hermitian".into(), max_deviation: deviation(m.betak0.adjoint(), -m.betak0) },
    ];
    // the printed set generates a Clifford algebra of signature (-, -, +),
    // the operator set one of signature (+, +, +)
    for (label, set, metric) in [("g", &m.gamma, [-1, -1, 1]), ("operator g", &m.operator_gamma, [1, 1, 1])] {
        for mu in 0..3 {
            for nu in mu..3 {
                let diag = if mu == nu { 2 * metric[mu] } else { 0 };
                checks.push(AlgebraCheck {
                    relation: format!("{{{label}{}, {label}{}}} = {diag}", mu + 1, nu + 1),
                    max_deviation: deviation(anti(set[mu], set[nu]), one.scale(Complex::new(diag, 0))),
                });
            }
        }
    }
    // i s3 (lambda - M(p)) is the symbol of i gamma^mu d_mu + k0 for the
    // operator set, on a lattice of integer samples
    let i = Complex::new(0, 1);
    let mut dev = 0;
    for lambda in -2..=2 {
        for p1 in -2..=2 {
            for p2 in -2..=2 {
                for k0 in 1..=3 {
                    let lhs = m.gamma[2].scale(i) * (one.scale(Complex::new(lambda, 0)) - exact_mode_matrix(p1, p2, k0));
                    let g = &m.operator_gamma;
                    let rhs = g[2].scale(i * Complex::new(lambda, 0))
                        + g[0].scale(i * i * Complex::new(p1, 0))
                        + g[1].scale(i * i * Complex::new(p2, 0))
                        + one.scale(Complex::new(k0, 0));
                    dev = dev.max(deviation(lhs, rhs));
                    let msq = exact_mode_matrix(p1, p2, k0) * exact_mode_matrix(p1, p2, k0);
                    let zeta2 = k0 * k0 - p1 * p1 - p2 * p2;
                    dev = dev.max(deviation(msq, one.scale(Complex::new(-zeta2, 0))));
                }
            }
        }
    }
    checks.push(AlgebraCheck { relation: "i s3 (d_z - G) = i gamma^mu d_mu + k0, M^2 = -zeta^2".into(), max_deviation: dev });
    AlgebraReport { checks }
}

/// `M(p) = -p1 s1 - p2 s2 + i k0 s3`, the Fourier symbol of the generator.
pub fn mode_matrix(p: [f64; 2], k0: f64) -> Mat2<Complex64> {
    Mat2([
        [Complex64::new(0.0, k0), Complex64::new(-p[0], p[1])],
        [Complex64::new(-p[0], -p[1]), Complex64::new(0.0, -k0)],
    ])
}

/// Two-component field `(Psi1, Psi2)` on one plane.
#[derive(Debug, Clone, PartialEq)]
pub struct DoubletField {
    grid: Grid2D,
    z: f64,
    psi1: Vec<Complex64>,
    psi2: Vec<Complex64>,
}

impl DoubletField {
    pub fn new(grid: Grid2D, z: f64, psi1: Vec<Complex64>, psi2: Vec<Complex64>) -> Result<Self> {
        if psi1.len() != grid.len() || psi2.len() != grid.len() {
            return Err(Error::InvalidGrid(format!(
                "doublet components have {} and {} samples, grid has {}",
                psi1.len(),
                psi2.len(),
                grid.len()
            )));
        }
        if !z.is_finite() {
            return Err(Error::NonFinite("z"));
        }
        if psi1.iter().chain(&psi2).any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::NonFinite("doublet samples"));
        }
        Ok(Self { grid, z, psi1, psi2 })
    }

    pub fn zeros(grid: Grid2D, z: f64) -> Self {
        let zero = vec![Complex64::new(0.0, 0.0); grid.len()];
        Self { grid, z, psi1: zero.clone(), psi2: zero }
    }

    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn psi1(&self) -> &[Complex64] {
        &self.psi1
    }

    pub fn psi2(&self) -> &[Complex64] {
        &self.psi2
    }

    pub fn component(&self, i: usize) -> Field2D {
        let v = if i == 0 { &self.psi1 } else { &self.psi2 };
        Field2D::from_parts(self.grid, self.z, v.clone())
    }

    /// `sqrt(sum (|Psi1|^2 + |Psi2|^2) dA)`.
    pub fn l2_norm(&self) -> f64 {
        let s: f64 = self.psi1.iter().chain(&self.psi2).map(|v| v.norm_sqr()).sum();
        (s * self.grid.cell_area()).sqrt()
    }

    pub fn l2_distance(&self, other: &DoubletField) -> Result<f64> {
        check_same_grid(&self.grid, &other.grid)?;
        let s: f64 = self
            .psi1
            .iter()
            .chain(&self.psi2)
            .zip(other.psi1.iter().chain(&other.psi2))
            .map(|(a, b)| (a - b).norm_sqr())
            .sum();
        Ok((s * self.grid.cell_area()).sqrt())
    }

    fn spectra(&self) -> (Spectrum2D, Spectrum2D) {
        (forward_transform_unchecked(&self.component(0)), forward_transform_unchecked(&self.component(1)))
    }

    fn from_spectra(a: &Spectrum2D, b: &Spectrum2D) -> Self {
        let (f1, f2) = (inverse_transform_unchecked(a), inverse_transform_unchecked(b));
        Self { grid: *f1.grid(), z: f1.z(), psi1: f1.into_values(), psi2: f2.into_values() }
    }
}

/// Applies a per-mode 2x2 matrix to the doublet spectrum.
fn map_spectral(d: &DoubletField, z_out: f64, op: impl Fn(usize, [f64; 2]) -> Mat2<Complex64>) -> DoubletField {
    let (a, b) = d.spectra();
    let g = d.grid;
    let (pxs, pys) = (g.pxs(), g.pys());
    let nx = g.nx();
    let mut out1 = Vec::with_capacity(g.len());
    let mut out2 = Vec::with_capacity(g.len());
    for i in 0..g.len() {
        let v = op(i, [pxs[i % nx], pys[i / nx]]).apply([a.amps()[i], b.amps()[i]]);
        out1.push(v[0]);
        out2.push(v[1]);
    }
    let s1 = Spectrum2D::from_parts(g, z_out, out1);
    let s2 = Spectrum2D::from_parts(g, z_out, out2);
    DoubletField::from_spectra(&s1, &s2)
}

/// `d_z Psi = G Psi`, with `G` applied spectrally as `M(p)`.
pub fn doublet_dz(d: &DoubletField) -> DoubletField {
    let k0 = d.grid.k0();
    map_spectral(d, d.z, |_, p| mode_matrix(p, k0))
}

/// Reference covector `l` of a mode: `(1, 0)` or `(1, 1)/sqrt 2`, whichever
/// makes the map `Psi -> (l Psi, l M Psi)` better conditioned.
fn covector(p: [f64; 2], k0: f64) -> [f64; 2] {
    if p[0].hypot(p[1]) >= (k0 - p[1]).abs() {
        [1.0, 0.0]
    } else {
        [std::f64::consts::FRAC_1_SQRT_2; 2]
    }
}

/// Splits Cauchy data into a doublet: per mode `Psi` solves
/// `l Psi = psi_hat`, `l M Psi = d_z psi_hat`, so that `l Psi` evolved by
/// [`dirac_propagate`] is the Helmholtz field and `l M Psi` its derivative.
pub fn doublet_from_cauchy(plane: &CauchyPlane) -> Result<DoubletField> {
    let g = *plane.grid();
    let k0 = g.k0();
    let s = forward_transform_unchecked(&plane.psi);
    let ds = forward_transform_unchecked(&plane.dz);
    let (pxs, pys) = (g.pxs(), g.pys());
    let nx = g.nx();
    let mut a = Vec::with_capacity(g.len());
    let mut b = Vec::with_capacity(g.len());
    for i in 0..g.len() {
        let p = [pxs[i % nx], pys[i / nx]];
        let l = covector(p, k0);
        let m = mode_matrix(p, k0).0;
        let lm = [l[0] * m[0][0] + l[1] * m[1][0], l[0] * m[0][1] + l[1] * m[1][1]];
        let det = l[0] * lm[1] - l[1] * lm[0];
        let (f, df) = (s.amps()[i], ds.amps()[i]);
        a.push((lm[1] * f - l[1] * df) / det);
        b.push((l[0] * df - lm[0] * f) / det);
    }
    let z = plane.z();
    Ok(DoubletField::from_spectra(&Spectrum2D::from_parts(g, z, a), &Spectrum2D::from_parts(g, z, b)))
}

/// Inverse of [`doublet_from_cauchy`].
pub fn doublet_to_cauchy(d: &DoubletField) -> CauchyPlane {
    let (a, b) = d.spectra();
    let g = d.grid;
    let k0 = g.k0();
    let (pxs, pys) = (g.pxs(), g.pys());
    let nx = g.nx();
    let mut f = Vec::with_capacity(g.len());
    let mut df = Vec::with_capacity(g.len());
    for i in 0..g.len() {
        let p = [pxs[i % nx], pys[i / nx]];
        let l = covector(p, k0);
        let v = [a.amps()[i], b.amps()[i]];
        let mv = mode_matrix(p, k0).apply(v);
        f.push(l[0] * v[0] + l[1] * v[1]);
        df.push(l[0] * mv[0] + l[1] * mv[1]);
    }
    let psi = inverse_transform_unchecked(&Spectrum2D::from_parts(g, d.z, f));
    let dz = inverse_transform_unchecked(&Spectrum2D::from_parts(g, d.z, df));
    CauchyPlane { psi, dz }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DiracOptions {
    /// Keep the growing eigen-direction of evanescent modes.
    pub allow_unstable: bool,
}

/// Per-mode propagator `e^{z M}`; on evanescent modes the growing
/// eigen-direction is removed unless `allow_unstable`.
pub fn propagator(p: [f64; 2], k0: f64, z: f64, opts: DiracOptions) -> Mat2<Complex64> {
    let m = mode_matrix(p, k0);
    let zeta = crate::grid::zeta(p[0] * p[0] + p[1] * p[1], k0);
    let one = Mat2::<Complex64>::identity();
    if zeta.im > 0.0 && !opts.allow_unstable && z != 0.0 {
        let k = zeta.im;
        let sign = z.signum();
        // projector onto the eigenvalue -sign * k, which decays along z
        let proj = (one.scale(Complex64::new(k, 0.0)) - m.scale(Complex64::new(sign, 0.0))).scale(Complex64::new(0.5 / k, 0.0));
        return proj.scale(Complex64::new((-k * z.abs()).exp(), 0.0));
    }
    let s = k0 * k0 - p[0] * p[0] - p[1] * p[1];
    let (c, sn) = cos_sinc(s, z);
    one.scale(Complex64::new(c, 0.0)) + m.scale(Complex64::new(sn, 0.0))
}

/// Propagates a doublet by `z` (either sign) with the exact per-mode
/// exponential.
pub fn dirac_propagate(d: &DoubletField, z: f64, opts: DiracOptions) -> Result<DoubletField> {
    if !z.is_finite() {
        return Err(Error::NonFinite("z"));
    }
    let k0 = d.grid.k0();
    Ok(map_spectral(d, d.z + z, |_, p| propagator(p, k0, z, opts)))
}

/// `(i s3 d_z + i s2 d_x - i s1 d_y + k0) Psi` evaluated pointwise at the
/// midpoint of two planes from the averaged doublet `m` and the difference
/// quotient `dz`.
fn operator_at(m: &DoubletField, dz: &[[Complex64; 2]]) -> Vec<[Complex64; 2]> {
    let k0 = m.grid.k0();
    let i = Complex64::i();
    let (d1x, d1y) = gradient_xy(&m.component(0));
    let (d2x, d2y) = gradient_xy(&m.component(1));
    (0..m.grid.len())
        .map(|n| {
            let v = [m.psi1[n], m.psi2[n]];
            let dx = [d1x.values()[n], d2x.values()[n]];
            let dy = [d1y.values()[n], d2y.values()[n]];
            // s2 = [[0, -i], [i, 0]], s1 = [[0, 1], [1, 0]], s3 = diag(1, -1)
            [
                i * dz[n][0] + i * (-i) * dx[1] - i * dy[1] + k0 * v[0],
                -i * dz[n][1] + i * i * dx[0] - i * dy[0] + k0 * v[1],
            ]
        })
        .collect()
}

/// Relative residual `|| (i gamma^mu d_mu + k0) Psi || / (k0 ||Psi||)` from
/// planes `a` and `b`: `d_z` by the two-plane difference, everything else
/// at the midpoint average.
pub fn dirac_residual(a: &DoubletField, b: &DoubletField) -> Result<f64> {
    check_same_grid(&a.grid, &b.grid)?;
    let h = b.z - a.z;
    if !(h.abs() > 0.0) {
        return Err(Error::InvalidArgument("planes must be at distinct z".into()));
    }
    let avg = |x: &[Complex64], y: &[Complex64]| -> Vec<Complex64> { x.iter().zip(y).map(|(u, v)| 0.5 * (u + v)).collect() };
    let m = DoubletField {
        grid: a.grid,
        z: a.z + 0.5 * h,
        psi1: avg(&a.psi1, &b.psi1),
        psi2: avg(&a.psi2, &b.psi2),
    };
    let norm = m.l2_norm();
    if norm == 0.0 {
        return Ok(0.0);
    }
    let dz: Vec<[Complex64; 2]> =
        (0..a.grid.len()).map(|n| [(b.psi1[n] - a.psi1[n]) / h, (b.psi2[n] - a.psi2[n]) / h]).collect();
    let r = operator_at(&m, &dz);
    let s: f64 = r.iter().map(|v| v[0].norm_sqr() + v[1].norm_sqr()).sum();
    Ok((s * a.grid.cell_area()).sqrt() / (a.grid.k0() * norm))
}

/// Pointwise `psibar (i gamma^mu d_mu + k0) Psi` with `psibar = Psi^dagger s3`
/// and `d_z Psi` supplied in `dzd`.
pub fn dirac_lagrangian_density(d: &DoubletField, dzd: &DoubletField) -> Result<Vec<Complex64>> {
    check_same_grid(&d.grid, &dzd.grid)?;
    let dz: Vec<[Complex64; 2]> = dzd.psi1.iter().zip(&dzd.psi2).map(|(a, b)| [*a, *b]).collect();
    let r = operator_at(d, &dz);
    Ok((0..d.grid.len()).map(|n| d.psi1[n].conj() * r[n][0] - d.psi2[n].conj() * r[n][1]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::beams::{synthesize_cauchy, BeamKind, BeamSpec, Branch, RandomBeam, SynthesisOptions};
    use crate::propagate::helmholtz_propagate_spectrum;

    fn grid() -> Grid2D {
        Grid2D::square(64, 1.5, 1.0).unwrap()
    }

    fn random_doublet(g: &Grid2D, seed: u64) -> DoubletField {
        let s = RandomBeam::for_k0(g.k0()).spectrum(g, seed).unwrap();
        doublet_from_cauchy(&CauchyPlane::from_spectrum(&s)).unwrap()
    }

    #[test]
    fn algebra_is_exact() {
        let r = verify_algebra();
        assert!(r.passed(), "{r:?}");
        assert!(r.checks.len() > 20);
        let m = DiracMatrices::default();
        assert_eq!(m.gamma[2] * m.gamma[2], ExactMat::identity());
        assert_eq!(m.alpha1 * m.alpha2 + m.alpha2 * m.alpha1, ExactMat::zero());
        assert_eq!(m.betak0 * m.betak0, -ExactMat::identity());
    }

    #[test]
    fn printed_gammas_do_not_reproduce_the_generator() {
        // i g^mu p_mu with the printed set differs from i s3 (lambda - M)
        let m = DiracMatrices::default();
        let i = Complex::new(0, 1);
        let lhs = m.gamma[2].scale(i) * (ExactMat::identity() - exact_mode_matrix(1, 0, 1));
        let g = &m.gamma;
        let rhs = g[2].scale(i) + g[0].scale(i * i) + ExactMat::identity();
        assert_ne!(deviation(lhs, rhs), 0);
    }

    #[test]
    fn mode_matrix_squares_to_minus_zeta_squared() {
        let g = grid();
        let (pxs, pys) = (g.pxs(), g.pys());
        for i in (0..g.len()).step_by(37) {
            let p = [pxs[i % g.nx()], pys[i / g.nx()]];
            let m = mode_matrix(p, 1.0);
            let z2 = 1.0 - p[0] * p[0] - p[1] * p[1];
            let d = m * m + Mat2::<Complex64>::identity().scale(Complex64::new(z2, 0.0));
            assert!(d.max_abs() < 1e-14);
        }
    }

    #[test]
    fn cauchy_round_trip() {
        let g = grid();
        let s = RandomBeam::for_k0(1.0).spectrum(&g, 1).unwrap();
        let mut cp = CauchyPlane::from_spectrum(&s);
        // make d_z independent of psi so both halves of the map are exercised
        cp.dz = cp.dz.map(|v| v * Complex64::new(0.3, -1.2)).conj();
        let back = doublet_to_cauchy(&doublet_from_cauchy(&cp).unwrap());
        assert!(back.psi.l2_distance(&cp.psi).unwrap() <= 1e-12 * cp.psi.l2_norm());
        assert!(back.dz.l2_distance(&cp.dz).unwrap() <= 1e-12 * cp.dz.l2_norm());

        let zero = CauchyPlane::new(Field2D::zeros(g, 0.0), Field2D::zeros(g, 0.0)).unwrap();
        assert_eq!(doublet_from_cauchy(&zero).unwrap().l2_norm(), 0.0);
    }

    #[test]
    fn plane_wave_doublet_is_an_eigenvector() {
        let g = grid();
        let p0 = [3.0 * g.dpx(), -5.0 * g.dpy()];
        let z0 = (1.0 - p0[0] * p0[0] - p0[1] * p0[1]).sqrt();
        let spec = BeamSpec::new(BeamKind::PlaneWave { p0 }, Branch::Plus);
        let cp = synthesize_cauchy(&spec, &g, 0.0, SynthesisOptions::default()).unwrap();
        let d = doublet_from_cauchy(&cp).unwrap();
        let i = g.mode_at(p0).unwrap();
        let (a, b) = d.spectra();
        let v = [a.amps()[i], b.amps()[i]];
        let mv = mode_matrix(p0, 1.0).apply(v);
        let lam = Complex64::new(0.0, z0);
        assert!((mv[0] - lam * v[0]).norm() + (mv[1] - lam * v[1]).norm() < 1e-12 * (v[0].norm() + v[1].norm()));

        let z = 4.2;
        let moved = dirac_propagate(&d, z, DiracOptions::default()).unwrap();
        let phase = Complex64::from_polar(1.0, z0 * z);
        let want = DoubletField::new(
            g,
            z,
            d.psi1.iter().map(|v| v * phase).collect(),
            d.psi2.iter().map(|v| v * phase).collect(),
        )
        .unwrap();
        assert!(moved.l2_distance(&want).unwrap() < 1e-12 * d.l2_norm());
    }

    #[test]
    fn zero_distance_is_identity() {
        let d = random_doublet(&grid(), 2);
        let same = dirac_propagate(&d, 0.0, DiracOptions::default()).unwrap();
        assert!(same.l2_distance(&d).unwrap() <= 1e-13 * d.l2_norm());
        assert!(dirac_propagate(&d, f64::NAN, DiracOptions::default()).is_err());
    }

    #[test]
    fn matches_second_order_propagation() {
        let g = Grid2D::square(128, 1.0, 1.0).unwrap();
        let s = RandomBeam::for_k0(1.0).spectrum(&g, 3).unwrap();
        let d = doublet_from_cauchy(&CauchyPlane::from_spectrum(&s)).unwrap();
        for z in [0.7, 13.0, 250.0] {
            let out = doublet_to_cauchy(&dirac_propagate(&d, z, DiracOptions::default()).unwrap());
            let want = CauchyPlane::from_spectrum(&helmholtz_propagate_spectrum(&s, z).unwrap());
            assert!(out.psi.l2_distance(&want.psi).unwrap() <= 1e-10 * want.psi.l2_norm(), "z={z}");
            assert!(out.dz.l2_distance(&want.dz).unwrap() <= 1e-10 * want.dz.l2_norm(), "z={z}");
        }
    }

    #[test]
    fn evanescent_growth_is_projected_out() {
        let g = Grid2D::square(16, 2.0, 1.0).unwrap();
        let m = (1.5 / g.dpx()).ceil();
        let p0 = [m * g.dpx(), 0.0];
        let k = (p0[0] * p0[0] - 1.0f64).sqrt();
        let mut psi = Field2D::zeros(g, 0.0).into_values();
        psi[g.index(3, 5)] = Complex64::new(1.0, 0.0);
        let f = Field2D::new(g, 0.0, psi).unwrap();
        // Cauchy data with both decaying and growing content
        let cp = CauchyPlane::new(f.clone(), f.scaled(Complex64::new(0.0, 0.0))).unwrap();
        let d = doublet_from_cauchy(&cp).unwrap();
        let z = 3.0;
        let tame = dirac_propagate(&d, z, DiracOptions::default()).unwrap();
        let wild = dirac_propagate(&d, z, DiracOptions { allow_unstable: true }).unwrap();
        assert!(wild.l2_norm() > tame.l2_norm());
        for i in 0..g.len() {
            let pm = [g.px(i % g.nx()), g.py(i / g.nx())];
            let e = propagator(pm, 1.0, z, DiracOptions::default());
            let kk = crate::grid::zeta(pm[0] * pm[0] + pm[1] * pm[1], 1.0).im;
            if kk > 0.0 {
                assert!(e.max_abs() <= (-kk * z).exp() * (1.0 + pm[0].hypot(pm[1]) / kk) + 1e-15);
            }
        }
        let e = propagator(p0, 1.0, z, DiracOptions { allow_unstable: true });
        let full = mode_matrix(p0, 1.0).scale(Complex64::new((k * z).sinh() / k, 0.0))
            + Mat2::<Complex64>::identity().scale(Complex64::new((k * z).cosh(), 0.0));
        assert!((e - full).max_abs() <= 1e-12 * full.max_abs());
    }

    #[test]
    fn generator_squared_is_helmholtz_operator() {
        let g = grid();
        let d = random_doublet(&g, 4);
        let twice = doublet_dz(&doublet_dz(&d));
        for c in 0..2 {
            let f = d.component(c);
            let lap = crate::field::laplacian(&f);
            let want: Vec<Complex64> = lap.values().iter().zip(f.values()).map(|(l, v)| -(l + v)).collect();
            let got = twice.component(c);
            let err: f64 = got.values().iter().zip(&want).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt();
            let scale: f64 = want.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
            assert!(err <= 1e-12 * scale);
        }
    }

    #[test]
    fn residual_orders() {
        let g = grid();
        let d = random_doublet(&g, 5);
        assert_eq!(dirac_residual(&DoubletField::zeros(g, 0.0), &DoubletField::zeros(g, 0.1)).unwrap(), 0.0);
        let mut prev = f64::INFINITY;
        let mut rs = Vec::new();
        for h in [0.2, 0.1, 0.05] {
            let b = dirac_propagate(&d, h, DiracOptions::default()).unwrap();
            let r = dirac_residual(&d, &b).unwrap();
            assert!(r < prev);
            prev = r;
            rs.push(r);
        }
        let order = (rs[0] / rs[2]).log2() / 2.0;
        assert!(order >= 1.0, "order {order}");
        assert!(dirac_residual(&d, &d).is_err());
    }

    #[test]
    fn plane_wave_residual_is_small() {
        let g = grid();
        let p0 = [2.0 * g.dpx(), g.dpy()];
        let z0 = (1.0 - p0[0] * p0[0] - p0[1] * p0[1]).sqrt();
        let spec = BeamSpec::new(BeamKind::PlaneWave { p0 }, Branch::Plus);
        let d = doublet_from_cauchy(&synthesize_cauchy(&spec, &g, 0.0, SynthesisOptions::default()).unwrap()).unwrap();
        for h in [1e-2, 1e-3] {
            let b = dirac_propagate(&d, h, DiracOptions::default()).unwrap();
            let r = dirac_residual(&d, &b).unwrap();
            assert!(r <= z0 * z0 * z0 * h * h / 12.0 * 1.01 + 1e-14, "h={h} r={r}");
        }
    }

    #[test]
    fn lagrangian_vanishes_on_shell() {
        let g = grid();
        let d = random_doublet(&g, 6);
        let l = dirac_lagrangian_density(&d, &doublet_dz(&d)).unwrap();
        let scale = d.l2_norm().powi(2);
        let norm: f64 = (l.iter().map(|v| v.norm_sqr()).sum::<f64>() * g.cell_area()).sqrt();
        assert!(norm <= 1e-8 * scale, "{norm}");

        let z = DoubletField::zeros(g, 0.0);
        assert!(dirac_lagrangian_density(&z, &z).unwrap().iter().all(|v| v.norm() == 0.0));

        let off = random_doublet(&g, 7);
        let l = dirac_lagrangian_density(&d, &off).unwrap();
        assert!(l.iter().any(|v| v.norm() > 1e-6));
    }

    #[test]
    fn rejects_bad_input() {
        let g = grid();
        assert!(DoubletField::new(g, 0.0, vec![Complex64::new(0.0, 0.0); 3], vec![]).is_err());
        let mut v = vec![Complex64::new(0.0, 0.0); g.len()];
        v[0] = Complex64::new(f64::INFINITY, 0.0);
        assert!(DoubletField::new(g, 0.0, v.clone(), v).is_err());
        let other = DoubletField::zeros(Grid2D::square(32, 1.5, 1.0).unwrap(), 0.0);
        assert!(dirac_residual(&DoubletField::zeros(g, 0.0), &other).is_err());
    }
}

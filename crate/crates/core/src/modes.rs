//! Hamiltonian dynamics of a single transverse mode: the exact linear flow
//! of `(Q, P)`, the closed-form light and dark solutions, and the effective
//! first-order amplitudes.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{check_same_grid, Spectrum2D};
use crate::flow::cos_sinc;
use crate::grid::{zeta, zeta_squared};

/// One dual-grid frequency `p` of a field with wavenumber `k0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode {
    pub p: [f64; 2],
    pub k0: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeKind {
    Propagating,
    Evanescent,
    /// `zeta_p = 0`, where the solution basis degenerates to `{1, z}`.
    BranchPoint,
}

impl Mode {
    pub fn new(p: [f64; 2], k0: f64) -> Self {
        Self { p, k0 }
    }

    pub fn p2(&self) -> f64 {
        self.p[0] * self.p[0] + self.p[1] * self.p[1]
    }

    pub fn zeta(&self) -> Complex64 {
        zeta(self.p2(), self.k0)
    }

    pub fn zeta_squared(&self) -> f64 {
        zeta_squared(self.p2(), self.k0)
    }

    pub fn kind(&self) -> ModeKind {
        let z = self.zeta();
        if z.im > 0.0 {
            ModeKind::Evanescent
        } else if z.re > 0.0 {
            ModeKind::Propagating
        } else {
            ModeKind::BranchPoint
        }
    }
}

/// Canonical pair `(Q, P)` with `P = d_z Q*`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConjugatePair {
    pub q: Complex64,
    pub p: Complex64,
}

impl ConjugatePair {
    pub fn new(q: Complex64, p: Complex64) -> Self {
        Self { q, p }
    }
}

/// `(c_1, c_2)` of `Q = c_1 e^{i zeta z} + c_2 e^{-i zeta z}` (propagating),
/// `Q = c_1 e^{-|zeta| z} + c_2 e^{|zeta| z}` (evanescent) or
/// `Q = c_1 + c_2 z` (branch point).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeCoefficients {
    pub c1: Complex64,
    pub c2: Complex64,
}

impl ModeCoefficients {
    pub fn new(c1: Complex64, c2: Complex64) -> Self {
        Self { c1, c2 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeState {
    pub mode: Mode,
    pub z: f64,
    pub pair: ConjugatePair,
    pub coeffs: ModeCoefficients,
}

impl ModeState {
    /// State with canonical data `pair` at plane `z`.
    pub fn new(mode: Mode, z: f64, pair: ConjugatePair) -> Self {
        Self { mode, z, pair, coeffs: coefficients_from_pair(pair, mode, z) }
    }

    pub fn from_coefficients(mode: Mode, z: f64, coeffs: ModeCoefficients) -> Self {
        Self { mode, z, pair: analytic_mode_solution(coeffs, mode, z), coeffs }
    }
}

/// Advances `(Q, P)` by `dz` with the exact flow of `d_z P = -zeta^2 Q*`,
/// `d_z Q* = P`.
pub fn hamilton_step(state: ModeState, dz: f64) -> ModeState {
    let s = state.mode.zeta_squared();
    let (c, sn) = cos_sinc(s, dz);
    let u = state.pair.q.conj();
    let v = state.pair.p;
    let u1 = c * u + sn * v;
    let v1 = -s * sn * u + c * v;
    ModeState { pair: ConjugatePair::new(u1.conj(), v1), z: state.z + dz, ..state }
}

/// Closed-form `(Q(z), P(z))` for the given coefficients.
pub fn analytic_mode_solution(coeffs: ModeCoefficients, mode: Mode, z: f64) -> ConjugatePair {
    let ModeCoefficients { c1, c2 } = coeffs;
    let zeta = mode.zeta();
    let (q, dq) = match mode.kind() {
        ModeKind::Propagating => {
            let e = Complex64::from_polar(1.0, zeta.re * z);
            let (a, b) = (c1 * e, c2 * e.conj());
            (a + b, Complex64::i() * zeta.re * (a - b))
        }
        ModeKind::Evanescent => {
            let k = zeta.im;
            let (a, b) = (c1 * (-k * z).exp(), c2 * (k * z).exp());
            (a + b, k * (b - a))
        }
        ModeKind::BranchPoint => (c1 + c2 * z, c2),
    };
    ConjugatePair::new(q, dq.conj())
}

/// Inverts [`analytic_mode_solution`]: coefficients whose solution passes
/// through `pair` at plane `z`.
pub fn coefficients_from_pair(pair: ConjugatePair, mode: Mode, z: f64) -> ModeCoefficients {
    let zeta = mode.zeta();
    let dq = pair.p.conj();
    match mode.kind() {
        ModeKind::Propagating => {
            let w = zeta.re;
            let r = dq / (Complex64::i() * w);
            let e = Complex64::from_polar(1.0, w * z);
            ModeCoefficients::new(0.5 * (pair.q + r) * e.conj(), 0.5 * (pair.q - r) * e)
        }
        ModeKind::Evanescent => {
            let k = zeta.im;
            let r = dq / k;
            ModeCoefficients::new(0.5 * (pair.q - r) * (k * z).exp(), 0.5 * (pair.q + r) * (-k * z).exp())
        }
        ModeKind::BranchPoint => ModeCoefficients::new(pair.q - dq * z, dq),
    }
}

/// Energy carried by one mode, per unit `dp`: `2 zeta^2 (|c1|^2 + |c2|^2)`
/// when propagating, `-2 |zeta|^2 2 Re(c1* c2)` when evanescent and
/// `|c2|^2` at the branch point.
pub fn mode_energy(coeffs: ModeCoefficients, mode: Mode) -> f64 {
    let s = mode.zeta_squared();
    match mode.kind() {
        ModeKind::Propagating => 2.0 * s * (coeffs.c1.norm_sqr() + coeffs.c2.norm_sqr()),
        ModeKind::Evanescent => 2.0 * s * 2.0 * (coeffs.c1.conj() * coeffs.c2).re,
        ModeKind::BranchPoint => coeffs.c2.norm_sqr(),
    }
}

/// Sum of [`mode_energy`] over every mode of the grid, with `(Q, d_z Q)`
/// given at the plane of `q`.
pub fn total_mode_energy(q: &Spectrum2D, dzq: &Spectrum2D) -> Result<f64> {
    check_same_grid(q.grid(), dzq.grid())?;
    let g = q.grid();
    let (pxs, pys) = (g.pxs(), g.pys());
    let nx = g.nx();
    let total: f64 = (0..g.len())
        .map(|i| {
            let mode = Mode::new([pxs[i % nx], pys[i / nx]], g.k0());
            let pair = ConjugatePair::new(q.amps()[i], dzq.amps()[i].conj());
            mode_energy(coefficients_from_pair(pair, mode, q.z()), mode)
        })
        .sum();
    Ok(total * g.mode_area())
}

/// Effective first-order amplitudes of a forward field: `Q = A_+*` on
/// propagating modes and `Q = A_-` on evanescent ones, with `Abar_-` an
/// independent variable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EffectiveAmplitude {
    Plus { a: Complex64 },
    Minus { a: Complex64, abar: Complex64 },
}

impl EffectiveAmplitude {
    /// Amplitudes of mode data `q`, with `Abar_- = 0`.
    pub fn from_q(q: Complex64, mode: Mode) -> Self {
        match mode.kind() {
            ModeKind::Evanescent => EffectiveAmplitude::Minus { a: q, abar: Complex64::new(0.0, 0.0) },
            _ => EffectiveAmplitude::Plus { a: q.conj() },
        }
    }

    pub fn q(&self) -> Complex64 {
        match *self {
            EffectiveAmplitude::Plus { a } => a.conj(),
            EffectiveAmplitude::Minus { a, .. } => a,
        }
    }

    /// `zeta |A_+|^2` or `|zeta| Abar_- A_-`.
    pub fn hamiltonian_density(&self, mode: Mode) -> Complex64 {
        let z = mode.zeta();
        match *self {
            EffectiveAmplitude::Plus { a } => Complex64::new(z.re * a.norm_sqr(), 0.0),
            EffectiveAmplitude::Minus { a, abar } => z.im * abar * a,
        }
    }
}

/// `A_+ e^{-i zeta z}`, `A_- e^{-|zeta| z}` and `Abar_- e^{|zeta| z}`. Any
/// exponentially growing factor applied to a nonzero amplitude needs
/// `allow_unstable`.
pub fn evolve_amplitudes(
    amp: EffectiveAmplitude,
    mode: Mode,
    z: f64,
    allow_unstable: bool,
) -> Result<EffectiveAmplitude> {
    if !z.is_finite() {
        return Err(Error::NonFinite("z"));
    }
    let zeta = mode.zeta();
    match amp {
        EffectiveAmplitude::Plus { a } => {
            if mode.kind() == ModeKind::Evanescent {
                return Err(Error::InvalidArgument("A_+ lives on propagating modes".into()));
            }
            Ok(EffectiveAmplitude::Plus { a: a * Complex64::from_polar(1.0, -zeta.re * z) })
        }
        EffectiveAmplitude::Minus { a, abar } => {
            if mode.kind() != ModeKind::Evanescent {
                return Err(Error::InvalidArgument("A_- and Abar_- live on evanescent modes".into()));
            }
            let k = zeta.im;
            let zero = Complex64::new(0.0, 0.0);
            let grows = (z > 0.0 && abar != zero) || (z < 0.0 && a != zero);
            if grows && !allow_unstable {
                return Err(Error::Physicality(format!(
                    "evanescent amplitude grows as e^{{{:.3e}}} over z = {z}; set allow-unstable to request it",
                    k * z.abs()
                )));
            }
            Ok(EffectiveAmplitude::Minus { a: a * (-k * z).exp(), abar: abar * (k * z).exp() })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::beams::RandomBeam;
    use crate::diagnostics::spectral_energy;
    use crate::grid::Grid2D;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn propagating() -> Mode {
        Mode::new([0.3, -0.4], 1.0)
    }

    fn evanescent() -> Mode {
        Mode::new([1.2, 0.5], 1.0)
    }

    fn pair_close(a: ConjugatePair, b: ConjugatePair, tol: f64) -> bool {
        let s = b.q.norm().max(b.p.norm()).max(1.0);
        (a.q - b.q).norm() <= tol * s && (a.p - b.p).norm() <= tol * s
    }

    #[test]
    fn kinds_follow_zeta() {
        assert_eq!(propagating().kind(), ModeKind::Propagating);
        assert_eq!(evanescent().kind(), ModeKind::Evanescent);
        assert_eq!(Mode::new([0.6, 0.8], 1.0).kind(), ModeKind::BranchPoint);
    }

    #[test]
    fn plus_branch_data_gives_pure_exponential() {
        let m = propagating();
        let z0 = m.zeta().re;
        let mut st = ModeState::new(m, 0.0, ConjugatePair::new(c(1.0, 0.0), c(0.0, -z0)));
        assert!(st.coeffs.c2.norm() < 1e-15 && (st.coeffs.c1 - 1.0).norm() < 1e-15);
        for _ in 0..7 {
            st = hamilton_step(st, 0.9);
            let want = Complex64::from_polar(1.0, z0 * st.z);
            assert!((st.pair.q - want).norm() < 1e-12);
        }
    }

    #[test]
    fn flow_is_reversible() {
        for m in [propagating(), evanescent(), Mode::new([0.6, 0.8], 1.0)] {
            let st = ModeState::new(m, 0.2, ConjugatePair::new(c(0.7, -0.2), c(0.1, 0.5)));
            let back = hamilton_step(hamilton_step(st, 1.3), -1.3);
            assert!(pair_close(back.pair, st.pair, 1e-14), "{m:?}");
        }
    }

    #[test]
    fn dark_growth_matches_closed_form() {
        let m = evanescent();
        let k = m.zeta().im;
        let coeffs = ModeCoefficients::new(c(0.4, 0.1), c(0.05, -0.02));
        let mut st = ModeState::from_coefficients(m, 0.0, coeffs);
        for _ in 0..10 {
            st = hamilton_step(st, 0.5);
            let want = coeffs.c1 * (-k * st.z).exp() + coeffs.c2 * (k * st.z).exp();
            assert!((st.pair.q - want).norm() <= 1e-12 * want.norm());
        }
        assert!(st.pair.q.norm() > 0.9 * coeffs.c2.norm() * (k * st.z).exp());
    }

    #[test]
    fn composed_steps_equal_analytic_solution() {
        for m in [propagating(), evanescent(), Mode::new([0.6, 0.8], 1.0)] {
            let coeffs = ModeCoefficients::new(c(0.3, -0.6), c(-0.2, 0.1));
            let mut st = ModeState::from_coefficients(m, 0.0, coeffs);
            for _ in 0..40 {
                st = hamilton_step(st, 0.05);
            }
            let exact = analytic_mode_solution(coeffs, m, st.z);
            assert!(pair_close(st.pair, exact, 1e-12), "{m:?}");
        }
    }

    #[test]
    fn momentum_closed_form() {
        let m = propagating();
        let z0 = m.zeta().re;
        let z = 2.3;
        let sol = analytic_mode_solution(ModeCoefficients::new(c(1.0, 0.0), c(0.0, 0.0)), m, z);
        assert!((sol.p - c(0.0, -z0) * Complex64::from_polar(1.0, -z0 * z)).norm() < 1e-15);
        let zero = analytic_mode_solution(ModeCoefficients::new(c(0.0, 0.0), c(0.0, 0.0)), evanescent(), 1.0);
        assert_eq!(zero, ConjugatePair::new(c(0.0, 0.0), c(0.0, 0.0)));
    }

    #[test]
    fn closed_form_satisfies_mode_equation() {
        for m in [propagating(), evanescent()] {
            let coeffs = ModeCoefficients::new(c(0.5, 0.2), c(-0.1, 0.3));
            let q = |z: f64| analytic_mode_solution(coeffs, m, z).q;
            let s = m.zeta_squared();
            for h in [1e-2, 5e-3] {
                let z = 0.7;
                let d2 = (q(z + h) - 2.0 * q(z) + q(z - h)) / (h * h);
                let r = (d2 + s * q(z)).norm();
                // fourth derivative is s^2 Q
                let bound = h * h / 12.0 * s * s * [z - h, z, z + h].iter().map(|&t| q(t).norm()).fold(0.0, f64::max) * 1.5;
                assert!(r <= bound + 1e-9, "{m:?} h={h} r={r} bound={bound}");
            }
        }
    }

    #[test]
    fn coefficients_round_trip() {
        for m in [propagating(), evanescent(), Mode::new([0.6, 0.8], 1.0)] {
            let coeffs = ModeCoefficients::new(c(0.9, 0.1), c(-0.3, 0.4));
            let pair = analytic_mode_solution(coeffs, m, 1.7);
            let back = coefficients_from_pair(pair, m, 1.7);
            assert!((back.c1 - coeffs.c1).norm() < 1e-13 && (back.c2 - coeffs.c2).norm() < 1e-13, "{m:?}");
        }
    }

    #[test]
    fn mode_energy_examples() {
        let on_axis = Mode::new([0.0, 0.0], 1.0);
        let e = mode_energy(ModeCoefficients::new(c(1.0, 0.0), c(0.0, 0.0)), on_axis);
        assert!((e - 2.0).abs() < 1e-15);
        let m = evanescent();
        let k2 = -m.zeta_squared();
        assert_eq!(mode_energy(ModeCoefficients::new(c(0.7, 0.2), c(0.0, 0.0)), m), 0.0);
        let e = mode_energy(ModeCoefficients::new(c(1.0, 0.0), c(1.0, 0.0)), m);
        assert!((e + 4.0 * k2).abs() < 1e-14);
    }

    #[test]
    fn mode_energy_is_canonical_energy() {
        // |P|^2 + zeta^2 |Q|^2 at an arbitrary plane
        for m in [propagating(), evanescent(), Mode::new([0.6, 0.8], 1.0)] {
            let coeffs = ModeCoefficients::new(c(0.2, -0.5), c(0.6, 0.3));
            for z in [-0.8, 0.0, 1.9] {
                let pr = analytic_mode_solution(coeffs, m, z);
                let canonical = pr.p.norm_sqr() + m.zeta_squared() * pr.q.norm_sqr();
                assert!((mode_energy(coeffs, m) - canonical).abs() < 1e-12 * canonical.abs().max(1.0), "{m:?} z={z}");
            }
        }
    }

    #[test]
    fn grid_mode_energy_matches_spectral_energy() {
        let g = Grid2D::square(64, 1.2, 1.0).unwrap();
        let base = RandomBeam::for_k0(1.0).spectrum(&g, 8).unwrap();
        let mut q = base.amps().to_vec();
        let mut dq: Vec<Complex64> = base.amps().iter().zip(base.zeta()).map(|(a, z)| Complex64::i() * z * a).collect();
        // a dark mode with both coefficients nonzero and a light mode with both directions
        let dark = g.index(40, 3);
        let k = base.zeta()[dark].im;
        assert!(k > 0.0);
        q[dark] = c(0.3, 0.1) + c(-0.2, 0.4);
        dq[dark] = k * (c(-0.2, 0.4) - c(0.3, 0.1));
        dq[1] = -dq[1];
        let q = Spectrum2D::new(g, 0.3, q).unwrap();
        let dq = Spectrum2D::new(g, 0.3, dq).unwrap();
        let total = total_mode_energy(&q, &dq).unwrap();
        let split = spectral_energy(&q, &dq).unwrap();
        assert!((total - split.total).abs() <= 1e-12 * split.total.abs());
    }

    #[test]
    fn first_order_amplitudes() {
        let m = propagating();
        let a0 = EffectiveAmplitude::Plus { a: c(0.3, 0.4) };
        for z in [-3.0, 0.5, 10.0] {
            let a = evolve_amplitudes(a0, m, z, false).unwrap();
            assert!((a.q().norm() - 0.5).abs() < 1e-15);
            assert!((a.hamiltonian_density(m) - a0.hamiltonian_density(m)).norm() < 1e-15);
            // d_z Q = i zeta Q
            let h = 1e-4;
            let qp = evolve_amplitudes(a0, m, z + h, false).unwrap().q();
            let qm = evolve_amplitudes(a0, m, z - h, false).unwrap().q();
            let r = (qp - qm) / (2.0 * h) - Complex64::i() * m.zeta() * a.q();
            assert!(r.norm() < 1e-8);
        }

        let m = evanescent();
        let k = m.zeta().im;
        let am = EffectiveAmplitude::Minus { a: c(0.8, 0.0), abar: c(-0.5, 0.0) };
        assert!(matches!(evolve_amplitudes(am, m, 1.0, false), Err(Error::Physicality(_))));
        let h0 = am.hamiltonian_density(m);
        for z in [0.5, 2.0, 7.0] {
            let a = evolve_amplitudes(am, m, z, true).unwrap();
            assert!((a.hamiltonian_density(m) - h0).norm() <= 1e-12 * h0.norm());
        }
        let grown = evolve_amplitudes(am, m, 1.0 / k, true).unwrap();
        let EffectiveAmplitude::Minus { abar, .. } = grown else { panic!() };
        assert!((abar - std::f64::consts::E * c(-0.5, 0.0)).norm() < 1e-14);

        let decaying = EffectiveAmplitude::Minus { a: c(1.0, 0.0), abar: c(0.0, 0.0) };
        assert!(evolve_amplitudes(decaying, m, 2.0, false).is_ok());
        assert!(evolve_amplitudes(decaying, m, -2.0, false).is_err());
        assert!(evolve_amplitudes(decaying, propagating(), 1.0, false).is_err());
        assert!(evolve_amplitudes(a0, m, 1.0, false).is_err());
    }

    #[test]
    fn amplitude_view_of_spectrum() {
        let m = evanescent();
        let a = EffectiveAmplitude::from_q(c(0.2, 0.1), m);
        assert_eq!(a.q(), c(0.2, 0.1));
        let p = EffectiveAmplitude::from_q(c(0.2, 0.1), propagating());
        assert_eq!(p, EffectiveAmplitude::Plus { a: c(0.2, -0.1) });
    }
}

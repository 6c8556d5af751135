//! Spectral propagators for the Helmholtz and paraxial equations and the
//! residual operators that certify their output.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::{
    check_same_grid, forward_transform, forward_transform_unchecked, inverse_transform_unchecked, laplacian,
    CauchyPlane, Field2D, Spectrum2D,
};

/// Default step for finite-difference residuals, in units of `1/k0`.
pub const DEFAULT_RESIDUAL_STEP: f64 = 1e-3;

/// Angular-spectrum multiplier for forward propagation: `e^{i zeta z}`,
/// a unimodular phase on propagating modes and `e^{-|zeta| z}` on
/// evanescent ones.
pub fn helmholtz_propagate_spectrum(s: &Spectrum2D, z: f64) -> Result<Spectrum2D> {
    if !(z >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "forward propagation needs z >= 0, got {z}; use helmholtz_backpropagate"
        )));
    }
    Ok(s.map_modes(|_, zeta| (Complex64::i() * zeta * z).exp()).with_z(s.z() + z))
}

/// `psi(x, z) = (1/2pi) int dp a(p) e^{i zeta_p z} e^{ip.x}` with
/// `a = Q(p, 0)` taken from `f0`.
pub fn helmholtz_propagate(f0: &Field2D, z: f64) -> Result<Field2D> {
    let s = forward_transform(f0)?;
    Ok(inverse_transform_unchecked(&helmholtz_propagate_spectrum(&s, z)?))
}

/// Forward propagation returning `(psi, d_z psi)` at the target plane.
pub fn helmholtz_propagate_cauchy(f0: &Field2D, z: f64) -> Result<CauchyPlane> {
    let s = forward_transform(f0)?;
    Ok(CauchyPlane::from_spectrum(&helmholtz_propagate_spectrum(&s, z)?))
}

/// Backward mirror of [`helmholtz_propagate_spectrum`] for `z <= 0`:
/// propagating modes take `e^{i zeta z}` and evanescent ones decay as
/// `e^{|zeta| z}`.
pub fn helmholtz_backpropagate_spectrum(s: &Spectrum2D, z: f64) -> Result<Spectrum2D> {
    if !(z <= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "backward propagation needs z <= 0, got {z}; use helmholtz_propagate"
        )));
    }
    Ok(s
        .map_modes(|_, zeta| {
            if zeta.im > 0.0 {
                Complex64::new((zeta.im * z).exp(), 0.0)
            } else {
                Complex64::from_polar(1.0, zeta.re * z)
            }
        })
        .with_z(s.z() + z))
}

pub fn helmholtz_backpropagate(f0: &Field2D, z: f64) -> Result<Field2D> {
    let s = forward_transform(f0)?;
    Ok(inverse_transform_unchecked(&helmholtz_backpropagate_spectrum(&s, z)?))
}

/// Paraxial envelope propagation, `e^{-i p^2 z / (2 k0)}` per mode. The
/// carrier `e^{i k0 z}` is not included.
pub fn paraxial_propagate_spectrum(s: &Spectrum2D, z: f64) -> Result<Spectrum2D> {
    if !z.is_finite() {
        return Err(Error::NonFinite("z"));
    }
    let p2 = s.grid().p2_table();
    let k0 = s.grid().k0();
    Ok(s.map_modes(|i, _| Complex64::from_polar(1.0, -p2[i] * z / (2.0 * k0))).with_z(s.z() + z))
}

pub fn paraxial_propagate(f0: &Field2D, z: f64) -> Result<Field2D> {
    let s = forward_transform(f0)?;
    Ok(inverse_transform_unchecked(&paraxial_propagate_spectrum(&s, z)?))
}

/// Removes the paraxial carrier from a Helmholtz field: `psi e^{-i k0 z}`.
pub fn remove_carrier(f: &Field2D) -> Field2D {
    let c = Complex64::from_polar(1.0, -f.grid().k0() * f.z());
    f.scaled(c)
}

fn step_between(a: &Field2D, b: &Field2D) -> Result<f64> {
    check_same_grid(a.grid(), b.grid())?;
    let h = b.z() - a.z();
    if !(h.abs() > 0.0) {
        return Err(Error::InvalidArgument("planes must be at distinct z".into()));
    }
    Ok(h)
}

/// Relative Helmholtz residual from three planes `z - h, z, z + h`:
/// `|| (lap + k0^2 + D_z^2) psi || / (k0^2 ||psi||)` with `D_z^2` the central
/// second difference and the transverse Laplacian spectral.
pub fn hwe_residual(minus: &Field2D, centre: &Field2D, plus: &Field2D) -> Result<f64> {
    let h = step_between(minus, centre)?;
    let h2 = step_between(centre, plus)?;
    if (h - h2).abs() > 1e-9 * h.abs() {
        return Err(Error::InvalidArgument("planes are not equally spaced".into()));
    }
    let norm = centre.l2_norm();
    if norm == 0.0 {
        return Ok(0.0);
    }
    let k0 = centre.grid().k0();
    let lap = laplacian(centre);
    let vals: Vec<Complex64> = (0..lap.values().len())
        .map(|i| {
            let c = centre.values()[i];
            let d2 = (plus.values()[i] - 2.0 * c + minus.values()[i]) / (h * h);
            lap.values()[i] + k0 * k0 * c + d2
        })
        .collect();
    let res = Field2D::new(*centre.grid(), centre.z(), vals)?;
    Ok(res.l2_norm() / (k0 * k0 * norm))
}

/// Relative paraxial residual from planes at `z` and `z + h`, evaluated at
/// the midpoint: `|| lap(phi_m) + 2 i k0 (phi(z+h) - phi(z)) / h || /
/// (k0^2 ||phi_m||)` with `phi_m` the average of the two planes.
pub fn pwe_residual(a: &Field2D, b: &Field2D) -> Result<f64> {
    let h = step_between(a, b)?;
    let k0 = a.grid().k0();
    let mid: Vec<Complex64> = a.values().iter().zip(b.values()).map(|(x, y)| 0.5 * (x + y)).collect();
    let mid = Field2D::new(*a.grid(), a.z() + 0.5 * h, mid)?;
    let norm = mid.l2_norm();
    if norm == 0.0 {
        return Ok(0.0);
    }
    let lap = laplacian(&mid);
    let vals: Vec<Complex64> = (0..mid.values().len())
        .map(|i| lap.values()[i] + Complex64::new(0.0, 2.0 * k0) * (b.values()[i] - a.values()[i]) / h)
        .collect();
    let res = Field2D::new(*a.grid(), mid.z(), vals)?;
    Ok(res.l2_norm() / (k0 * k0 * norm))
}

/// Fraction of the field's power carried by propagating modes.
pub fn propagating_fraction(f: &Field2D) -> f64 {
    let s = forward_transform_unchecked(f);
    let total = s.power();
    if total == 0.0 {
        return 1.0;
    }
    let prop: f64 = s
        .amps()
        .iter()
        .enumerate()
        .filter(|(i, _)| s.is_propagating(*i))
        .map(|(_, a)| a.norm_sqr())
        .sum::<f64>()
        * s.grid().mode_area();
    prop / total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::beams::{synthesize, BeamKind, BeamSpec, Branch, SynthesisOptions};
    use crate::grid::Grid2D;

    fn grid() -> Grid2D {
        Grid2D::square(64, 0.9, 1.0).unwrap()
    }

    fn plane_wave(g: &Grid2D, p0: [f64; 2]) -> Field2D {
        Field2D::from_fn(*g, 0.0, |x, y| Complex64::from_polar(1.0, p0[0] * x + p0[1] * y)).unwrap()
    }

    #[test]
    fn zero_distance_is_identity() {
        let g = grid();
        let f = plane_wave(&g, [3.0 * g.dpx(), g.dpy()]);
        for out in [
            helmholtz_propagate(&f, 0.0).unwrap(),
            helmholtz_backpropagate(&f, 0.0).unwrap(),
            paraxial_propagate(&f, 0.0).unwrap(),
        ] {
            assert!(out.l2_distance(&f).unwrap() < 1e-12 * f.l2_norm());
        }
    }

    #[test]
    fn plane_wave_picks_up_exact_phase() {
        let g = grid();
        let p0 = [3.0 * g.dpx(), -2.0 * g.dpy()];
        let zeta = (1.0 - p0[0] * p0[0] - p0[1] * p0[1]).sqrt();
        let f = plane_wave(&g, p0);
        let z = 7.3;
        let out = helmholtz_propagate(&f, z).unwrap();
        let want = f.scaled(Complex64::from_polar(1.0, zeta * z));
        assert!(out.l2_distance(&want).unwrap() < 1e-12 * f.l2_norm());

        let par = paraxial_propagate(&f, z).unwrap();
        let p2 = p0[0] * p0[0] + p0[1] * p0[1];
        let want = f.scaled(Complex64::from_polar(1.0, -p2 * z / 2.0));
        assert!(par.l2_distance(&want).unwrap() < 1e-12 * f.l2_norm());
    }

    #[test]
    fn direction_errors() {
        let g = grid();
        let f = plane_wave(&g, [0.0, 0.0]);
        assert!(helmholtz_propagate(&f, -1.0).is_err());
        assert!(helmholtz_backpropagate(&f, 1.0).is_err());
    }

    #[test]
    fn evanescent_mode_decays_backward() {
        let g = grid();
        let m = (1.4 / g.dpx()).ceil();
        let p0 = [m * g.dpx(), 0.0];
        let kappa = (p0[0] * p0[0] - 1.0f64).sqrt();
        let f = plane_wave(&g, p0);
        let out = helmholtz_backpropagate(&f, -1.0 / kappa).unwrap();
        assert!((out.max_abs() - (-1.0f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn residuals_vanish_for_zero_field_and_reject_mismatch() {
        let g = grid();
        let z = |z| Field2D::zeros(g, z);
        assert_eq!(hwe_residual(&z(-0.1), &z(0.0), &z(0.1)).unwrap(), 0.0);
        assert_eq!(pwe_residual(&z(0.0), &z(0.1)).unwrap(), 0.0);
        let other = Field2D::zeros(Grid2D::square(32, 0.9, 1.0).unwrap(), 0.1);
        assert!(pwe_residual(&z(0.0), &other).is_err());
        assert!(hwe_residual(&z(-0.1), &z(0.0), &z(0.3)).is_err());
    }

    #[test]
    fn plane_wave_hwe_residual_within_taylor_bound() {
        let g = grid();
        let p0 = [2.0 * g.dpx(), 5.0 * g.dpy()];
        let spec = BeamSpec::new(BeamKind::PlaneWave { p0 }, Branch::Plus);
        let h = 1e-3;
        let planes: Vec<Field2D> = [-h, 0.0, h]
            .iter()
            .map(|&z| synthesize(&spec, &g, z, SynthesisOptions::default()).unwrap())
            .collect();
        let r = hwe_residual(&planes[0], &planes[1], &planes[2]).unwrap();
        assert!(r <= h * h / 12.0, "residual {r}");
    }

    #[test]
    fn single_mode_pwe_residual_within_taylor_bound() {
        let g = grid();
        let p0 = [4.0 * g.dpx(), 0.0];
        let p2 = p0[0] * p0[0];
        let f = plane_wave(&g, p0);
        for h in [0.4, 0.2, 0.1] {
            let b = paraxial_propagate(&f, h).unwrap();
            let r = pwe_residual(&f, &b).unwrap();
            let theta = p2 * h / 2.0;
            let bound = p2 * theta * theta / 12.0 * 1.01 + 1e-13;
            assert!(r <= bound, "h={h} r={r} bound={bound}");
        }
    }
}

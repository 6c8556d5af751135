//! Analytic beam catalogue: separable fundamental solutions built from plane
//! waves, Bessel rings, Gaussian profiles or arbitrary spectra, plus the
//! closed-form paraxial Gaussian used as an oracle.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{forward_transform_unchecked, inverse_transform_unchecked, CauchyPlane, Field2D, Spectrum2D};
use crate::grid::Grid2D;

/// Selects one of the four separable solutions built on a transverse
/// profile `phi`: `phi e^{i zeta z}`, `phi e^{-i zeta z}`,
/// `phi* e^{-i zeta* z}`, `phi* e^{i zeta* z}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Plus,
    Minus,
    PlusConj,
    MinusConj,
}

impl Branch {
    fn direction(self) -> f64 {
        match self {
            Branch::Plus | Branch::PlusConj => 1.0,
            Branch::Minus | Branch::MinusConj => -1.0,
        }
    }

    fn conjugated(self) -> bool {
        matches!(self, Branch::PlusConj | Branch::MinusConj)
    }

    /// Evanescent modes of this branch grow with `|z|` on the given side.
    pub fn grows_at(self, z: f64) -> bool {
        self.direction() * z < 0.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum BeamKind {
    /// `e^{i p0.x}`; `p0` must be a dual-grid frequency.
    PlaneWave { p0: [f64; 2] },
    /// Ring of equal-`|p|` modes at `|p| ~ k0 sin(theta0)`; approximates
    /// `J0(k0 sin(theta0) r)` and is normalized to `phi(0) = 1`.
    Bessel { theta0: f64 },
    /// `exp(-r^2 / w0^2)` at the reference plane.
    GaussianParaxial { w0: f64 },
    /// Arbitrary `a(p)` in FFT order.
    CustomSpectrum { amps: Vec<Complex64> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct BeamSpec {
    pub kind: BeamKind,
    pub branch: Branch,
    pub amplitude: Complex64,
}

impl BeamSpec {
    pub fn new(kind: BeamKind, branch: Branch) -> Self {
        Self { kind, branch, amplitude: Complex64::new(1.0, 0.0) }
    }

    pub fn with_amplitude(mut self, amplitude: Complex64) -> Self {
        self.amplitude = amplitude;
        self
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SynthesisOptions {
    /// Keep exponentially growing evanescent solutions instead of rejecting
    /// (single-mode beams) or dropping (multi-mode beams) them.
    pub allow_unstable: bool,
}

/// Discrete Bessel ring: modes sharing one exact `p^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct BesselRing {
    pub modes: Vec<usize>,
    pub p2: f64,
}

/// Picks the set of dual-grid modes with a common `|p|^2` nearest
/// `(k0 sin theta0)^2`. Only sets closed under `p -> -p` with at least four
/// members and `p^2 <= k0^2` qualify; ties go to the larger set.
pub fn bessel_ring(grid: &Grid2D, theta0: f64) -> Result<BesselRing> {
    if !(theta0 > 0.0 && theta0 < PI / 2.0) {
        return Err(Error::InvalidArgument(format!("Bessel angle must lie in (0, pi/2), got {theta0}")));
    }
    let k0 = grid.k0();
    let target = (k0 * theta0.sin()).powi(2);
    let (nx, ny) = (grid.nx(), grid.ny());
    let p2 = grid.p2_table();

    // Nyquist rows/columns have no negated partner
    let mut candidates: Vec<(f64, usize)> = (0..grid.len())
        .filter(|&i| {
            let (ix, iy) = (i % nx, i / nx);
            let nyq_x = nx % 2 == 0 && ix == nx / 2;
            let nyq_y = ny % 2 == 0 && iy == ny / 2;
            !nyq_x && !nyq_y && p2[i] > 0.0 && p2[i] <= k0 * k0
        })
        .map(|i| (p2[i], i))
        .collect();
    candidates.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut best: Option<BesselRing> = None;
    let mut start = 0;
    while start < candidates.len() {
        let v = candidates[start].0;
        let mut end = start + 1;
        while end < candidates.len() && (candidates[end].0 - v).abs() <= 1e-12 * v {
            end += 1;
        }
        if end - start >= 4 {
            let ring = BesselRing { modes: candidates[start..end].iter().map(|c| c.1).collect(), p2: v };
            let better = match &best {
                None => true,
                Some(b) => {
                    let (d_new, d_old) = ((v - target).abs(), (b.p2 - target).abs());
                    d_new < d_old - 1e-12 * target || ((d_new - d_old).abs() <= 1e-12 * target && ring.modes.len() > b.modes.len())
                }
            };
            if better {
                best = Some(ring);
            }
        }
        start = end;
    }
    best.ok_or_else(|| Error::InvalidArgument("no symmetric mode ring fits inside the grid".into()))
}

/// Spectrum `a(p)` of the transverse profile `phi` (amplitude included).
pub fn profile_spectrum(spec: &BeamSpec, grid: &Grid2D) -> Result<Spectrum2D> {
    let g = *grid;
    let unit = 2.0 * PI / g.mode_area();
    let mut amps = vec![Complex64::new(0.0, 0.0); g.len()];
    match &spec.kind {
        BeamKind::PlaneWave { p0 } => {
            let i = g
                .mode_at(*p0)
                .ok_or_else(|| Error::InvalidArgument(format!("plane-wave frequency {p0:?} is not on the dual grid")))?;
            amps[i] = spec.amplitude * unit;
        }
        BeamKind::Bessel { theta0 } => {
            let ring = bessel_ring(&g, *theta0)?;
            let share = spec.amplitude * unit / ring.modes.len() as f64;
            for i in ring.modes {
                amps[i] = share;
            }
        }
        BeamKind::GaussianParaxial { w0 } => {
            check_waist(*w0, &g)?;
            let a = spec.amplitude;
            let f = Field2D::from_fn(g, 0.0, |x, y| a * (-(x * x + y * y) / (w0 * w0)).exp())?;
            return Ok(forward_transform_unchecked(&f));
        }
        BeamKind::CustomSpectrum { amps: custom } => {
            if custom.len() != g.len() {
                return Err(Error::InvalidArgument(format!(
                    "custom spectrum has {} modes, grid has {}",
                    custom.len(),
                    g.len()
                )));
            }
            amps = custom.iter().map(|a| a * spec.amplitude).collect();
        }
    }
    Spectrum2D::new(g, 0.0, amps)
}

/// Spectrum at `z` of the non-conjugated solution `phi e^{+-i zeta z}`,
/// applying the physicality policy to growing evanescent modes.
fn branch_spectrum(spec: &BeamSpec, grid: &Grid2D, z: f64, opts: SynthesisOptions) -> Result<Spectrum2D> {
    let profile = profile_spectrum(spec, grid)?;
    let s = spec.branch.direction();
    let grows = spec.branch.grows_at(z);
    if grows && !opts.allow_unstable {
        let has_growing = profile
            .amps()
            .iter()
            .zip(profile.zeta())
            .any(|(a, zeta)| zeta.im > 0.0 && *a != Complex64::new(0.0, 0.0));
        if has_growing && matches!(spec.kind, BeamKind::PlaneWave { .. }) {
            return Err(Error::Physicality(format!(
                "evanescent {:?} branch grows exponentially at z = {z}; set allow-unstable to request it",
                spec.branch
            )));
        }
    }
    let keep_growing = opts.allow_unstable || !grows;
    Ok(profile
        .map_modes(|_, zeta| {
            if zeta.im > 0.0 && !keep_growing {
                Complex64::new(0.0, 0.0)
            } else {
                (Complex64::i() * s * zeta * z).exp()
            }
        })
        .with_z(z))
}

/// Field of the selected fundamental solution sampled at `z`.
pub fn synthesize(spec: &BeamSpec, grid: &Grid2D, z: f64, opts: SynthesisOptions) -> Result<Field2D> {
    Ok(synthesize_cauchy(spec, grid, z, opts)?.psi)
}

/// Field and its exact `d_z` at `z`.
pub fn synthesize_cauchy(spec: &BeamSpec, grid: &Grid2D, z: f64, opts: SynthesisOptions) -> Result<CauchyPlane> {
    if !z.is_finite() {
        return Err(Error::NonFinite("z"));
    }
    let q = branch_spectrum(spec, grid, z, opts)?;
    let s = spec.branch.direction();
    let dq = q.map_modes(|_, zeta| Complex64::i() * s * zeta);
    let mut psi = inverse_transform_unchecked(&q);
    let mut dz = inverse_transform_unchecked(&dq);
    if spec.branch.conjugated() {
        psi = psi.conj();
        dz = dz.conj();
    }
    CauchyPlane::new(psi, dz)
}

fn check_waist(w0: f64, grid: &Grid2D) -> Result<()> {
    let need = 4.0 * grid.dx().max(grid.dy());
    if !(w0.is_finite() && w0 >= need) {
        return Err(Error::InvalidArgument(format!("waist {w0} is unresolved; need w0 >= {need}")));
    }
    Ok(())
}

/// Closed-form solution of the paraxial equation with waist `w0` at `z = 0`:
/// `phi = exp(-r^2 / (w0^2 u)) / u`, `u = 1 + i z / zR`, `zR = k0 w0^2 / 2`.
pub fn gaussian_paraxial_reference(w0: f64, grid: &Grid2D, z: f64) -> Result<Field2D> {
    check_waist(w0, grid)?;
    let z_r = grid.k0() * w0 * w0 / 2.0;
    let u = Complex64::new(1.0, z / z_r);
    let inv_u = u.inv();
    let w2 = w0 * w0;
    Field2D::from_fn(*grid, z, |x, y| inv_u * (-(x * x + y * y) / w2 * inv_u).exp())
}

/// Parameters for a seeded, strictly band-limited, localized test beam built
/// from tilted Gaussian beamlets.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomBeam {
    pub beamlets: usize,
    pub waist: f64,
    pub max_offset: f64,
    pub max_tilt: f64,
    /// Modes with `|p| > band_limit` are zeroed.
    pub band_limit: f64,
}

impl RandomBeam {
    /// Defaults scaled to `k0`: support `|p| <= 0.8 k0`, beamlets of waist
    /// `25/k0` tilted by at most `0.3 k0`.
    pub fn for_k0(k0: f64) -> Self {
        Self { beamlets: 6, waist: 25.0 / k0, max_offset: 16.0 / k0, max_tilt: 0.3 * k0, band_limit: 0.8 * k0 }
    }

    pub fn spectrum(&self, grid: &Grid2D, seed: u64) -> Result<Spectrum2D> {
        if self.beamlets == 0 || !(self.waist > 0.0) {
            return Err(Error::InvalidArgument("random beam needs beamlets and a positive waist".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut parts = Vec::with_capacity(self.beamlets);
        for _ in 0..self.beamlets {
            let c = Complex64::from_polar(rng.gen_range(0.2..1.0), rng.gen_range(0.0..2.0 * PI));
            let x0 = [rng.gen_range(-1.0..1.0) * self.max_offset, rng.gen_range(-1.0..1.0) * self.max_offset];
            let tilt_r = self.max_tilt * rng.gen_range(0.0f64..1.0).sqrt();
            let tilt_a = rng.gen_range(0.0..2.0 * PI);
            parts.push((c, x0, [tilt_r * tilt_a.cos(), tilt_r * tilt_a.sin()]));
        }
        let w2 = self.waist * self.waist;
        let f = Field2D::from_fn(*grid, 0.0, |x, y| {
            parts
                .iter()
                .map(|(c, x0, q)| {
                    let (u, v) = (x - x0[0], y - x0[1]);
                    c * (-(u * u + v * v) / w2).exp() * Complex64::from_polar(1.0, q[0] * x + q[1] * y)
                })
                .sum()
        })?;
        let p2 = grid.p2_table();
        let limit2 = self.band_limit * self.band_limit;
        Ok(forward_transform_unchecked(&f).map_modes(|i, _| {
            if p2[i] <= limit2 {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        }))
    }
}

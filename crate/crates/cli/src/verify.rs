use std::f64::consts::PI;
use std::fmt;

use helmwave::beams::{synthesize_cauchy, BeamKind, BeamSpec, Branch, RandomBeam, SynthesisOptions};
use helmwave::diagnostics::{zeta_squared_estimate, DiagnosticsReport};
use helmwave::dirac::{dirac_propagate, doublet_from_cauchy, doublet_to_cauchy, mode_matrix, verify_algebra, DiracOptions, Mat2};
use helmwave::propagate::{helmholtz_propagate_spectrum};
use helmwave::{inverse_transform, CauchyPlane, Grid2D, Spectrum2D};
use num_complex::Complex64;

use crate::error::{CliError, CliResult};

pub const SUITES: [&str; 5] = ["algebra", "conservation", "equivalence", "dispersion", "all"];

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub suite: &'static str,
    pub name: String,
    pub tolerance: f64,
    pub measured: f64,
}

impl Check {
    fn new(suite: &'static str, name: impl Into<String>, tolerance: f64, measured: f64) -> Self {
        Self { suite, name: name.into(), tolerance, measured }
    }

    pub fn passed(&self) -> bool {
        self.measured <= self.tolerance
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(5).max(5);
        writeln!(f, "{:<13} {:<w$} {:>10} {:>10}  status", "suite", "check", "tolerance", "measured")?;
        for c in &self.checks {
            writeln!(
                f,
                "{:<13} {:<w$} {:>10.1e} {:>10.1e}  {}",
                c.suite,
                c.name,
                c.tolerance,
                c.measured,
                if c.passed() { "pass" } else { "FAIL" }
            )?;
        }
        let failed = self.checks.iter().filter(|c| !c.passed()).count();
        write!(f, "{} checks, {failed} failed", self.checks.len())
    }
}

fn rel(a: f64, b: f64) -> f64 {
    let s = a.abs().max(b.abs());
    if s == 0.0 {
        0.0
    } else {
        (a - b).abs() / s
    }
}

fn random_beam(seed: u64) -> CliResult<Spectrum2D> {
    let g = Grid2D::square(256, 1.5, 1.0)?;
    Ok(RandomBeam::for_k0(1.0).spectrum(&g, seed)?)
}

fn algebra() -> Vec<Check> {
    let mut out: Vec<Check> = verify_algebra()
        .checks
        .into_iter()
        .map(|c| Check::new("algebra", c.relation, 0.0, c.max_deviation as f64))
        .collect();
    let g = Grid2D::square(64, 1.0, 1.0).expect("valid grid");
    let mut worst = 0.0f64;
    for iy in 0..g.ny() {
        for ix in 0..g.nx() {
            let p = [g.px(ix), g.py(iy)];
            let m = mode_matrix(p, 1.0);
            let z2 = Complex64::new(1.0 - p[0] * p[0] - p[1] * p[1], 0.0);
            worst = worst.max((m * m + Mat2::identity().scale(z2)).max_abs());
        }
    }
    out.push(Check::new("algebra", "M(p)^2 = -zeta^2 on every mode", 1e-14, worst));
    out
}

fn conservation(seed: u64) -> CliResult<Vec<Check>> {
    let s0 = random_beam(seed)?;
    let base = DiagnosticsReport::from_spectrum(&s0)?;
    let mut worst = [0.0f64; 4];
    for k in 1..10 {
        let r = DiagnosticsReport::from_spectrum(&helmholtz_propagate_spectrum(&s0, 20.0 * k as f64 / 9.0)?)?;
        let pn = base.p[0].hypot(base.p[1]);
        worst[0] = worst[0].max(rel(r.q, base.q));
        worst[1] = worst[1].max(rel(r.h, base.h));
        worst[2] = worst[2].max((r.p[0] - base.p[0]).hypot(r.p[1] - base.p[1]) / pn);
        worst[3] = worst[3].max(rel(r.jz, base.jz));
    }
    Ok(["Q drift", "H drift", "P drift", "Jz drift"]
        .into_iter()
        .zip(worst)
        .map(|(n, w)| Check::new("conservation", n, 1e-10, w))
        .collect())
}

fn equivalence(seed: u64) -> CliResult<Vec<Check>> {
    let s = random_beam(seed)?;
    let d = doublet_from_cauchy(&CauchyPlane::from_spectrum(&s))?;
    let psi = doublet_to_cauchy(&dirac_propagate(&d, 10.0, DiracOptions::default())?).psi;
    let want = inverse_transform(&helmholtz_propagate_spectrum(&s, 10.0)?)?;
    let dev = psi.l2_distance(&want)? / want.l2_norm();
    Ok(vec![Check::new("equivalence", "Dirac vs Helmholtz at z = 10/k0", 1e-10, dev)])
}

fn dispersion(seed: u64) -> CliResult<Vec<Check>> {
    let s = random_beam(seed)?;
    let z2 = zeta_squared_estimate(&inverse_transform(&s)?)?;
    let mut out = vec![Check::new("dispersion", "zeta^2 real space vs spectral", 1e-10, (z2.real_space - z2.spectral).abs())];
    // 27^2 + 12^2 = 873 puts an exact lattice ring at k0 sin(theta0)
    let theta0: f64 = 0.3;
    let g = Grid2D::square(256, 2.0 * PI * 873f64.sqrt() / (256.0 * theta0.sin()), 1.0)?;
    let bessel = synthesize_cauchy(&BeamSpec::new(BeamKind::Bessel { theta0 }, Branch::Plus), &g, 0.0, SynthesisOptions::default())?;
    let est = zeta_squared_estimate(&bessel.psi)?;
    out.push(Check::new("dispersion", "Bessel zeta^2 vs k0^2 cos^2(theta0)", 1e-4, rel(est.real_space, theta0.cos().powi(2))));
    Ok(out)
}

/// Runs one named suite, or every suite for `all`.
pub fn cmd_verify(suite: &str, seed: u64) -> CliResult<VerifyReport> {
    let checks = match suite {
        "algebra" => algebra(),
        "conservation" => conservation(seed)?,
        "equivalence" => equivalence(seed)?,
        "dispersion" => dispersion(seed)?,
        "all" => {
            let mut all = algebra();
            all.extend(conservation(seed)?);
            all.extend(equivalence(seed)?);
            all.extend(dispersion(seed)?);
            all
        }
        other => {
            return Err(CliError::Config(format!("unknown suite {other:?}; expected one of {}", SUITES.join(", "))));
        }
    };
    Ok(VerifyReport { checks })
}

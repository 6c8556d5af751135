use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use helmwave::beams::{synthesize_cauchy, BeamSpec, SynthesisOptions};
use helmwave::diagnostics::DiagnosticsReport;
use helmwave::dirac::{dirac_propagate, doublet_from_cauchy, doublet_to_cauchy, DiracOptions, DoubletField};
use helmwave::io::{read_field, write_atomic, write_diagnostics_csv, write_doublet, write_field};
use helmwave::modes::{analytic_mode_solution, hamilton_step, mode_energy, Mode, ModeCoefficients, ModeKind, ModeState};
use helmwave::propagate::{helmholtz_propagate_cauchy, paraxial_propagate_spectrum};
use helmwave::{forward_transform, inverse_transform, CauchyPlane, Field2D};
use num_complex::Complex64;

use crate::config::{Config, Propagator};
use crate::error::{CliError, CliResult};

/// Files written by a run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Artifacts {
    pub files: Vec<PathBuf>,
}

fn prepare_out(dir: &Path) -> CliResult<()> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))
}

/// Where the run starts: a synthesized beam or a field read from a dump.
enum Source {
    Beam(BeamSpec),
    Dump(Field2D),
}

fn source(cfg: &Config) -> CliResult<Source> {
    match cfg.beam_spec()? {
        Some(spec) => Ok(Source::Beam(spec)),
        None => {
            let path = cfg.beam.path.as_deref().unwrap_or(Path::new(""));
            let f = read_field(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            if !f.grid().same_as(&cfg.grid()?) {
                return Err(CliError::Config(format!("dump {} does not match the configured grid", path.display())));
            }
            Ok(Source::Dump(f))
        }
    }
}

fn synth_opts(cfg: &Config) -> SynthesisOptions {
    SynthesisOptions { allow_unstable: cfg.run.allow_unstable }
}

/// Cauchy data at the reference plane of the source.
fn initial_plane(cfg: &Config, src: &Source) -> CliResult<CauchyPlane> {
    match src {
        Source::Beam(spec) => Ok(synthesize_cauchy(spec, &cfg.grid()?, 0.0, synth_opts(cfg))?),
        Source::Dump(f) => Ok(helmholtz_propagate_cauchy(f, 0.0)?),
    }
}

/// Rejects requests for growing evanescent solutions of a synthesized beam
/// at any requested plane, and planes before a dump's reference plane.
fn check_planes(cfg: &Config, src: &Source) -> CliResult<()> {
    match src {
        Source::Beam(spec) => {
            let g = cfg.grid()?;
            for &z in &cfg.run.z {
                synthesize_cauchy(spec, &g, z, synth_opts(cfg))?;
            }
        }
        Source::Dump(f) => {
            if let Some(z) = cfg.run.z.iter().find(|&&z| z < f.z()) {
                return Err(CliError::Config(format!("plane z = {z} lies before the dump plane z = {}", f.z())));
            }
        }
    }
    Ok(())
}

/// Full field and `d_z` of the paraxial solution `phi e^{i k0 z}` grown
/// from the envelope `start`.
fn paraxial_plane(start: &Field2D, z: f64) -> CliResult<CauchyPlane> {
    let s = paraxial_propagate_spectrum(&forward_transform(start)?, z - start.z())?;
    let g = *start.grid();
    let k0 = g.k0();
    let p2 = g.p2_table();
    let ds = s.map_modes(|i, _| Complex64::new(0.0, k0 - p2[i] / (2.0 * k0)));
    let carrier = Complex64::from_polar(1.0, k0 * z);
    let psi = inverse_transform(&s)?.scaled(carrier);
    let dz = inverse_transform(&ds)?.scaled(carrier);
    Ok(CauchyPlane::new(psi, dz)?)
}

/// Cauchy data at every configured plane with the configured propagator.
fn planes(cfg: &Config, src: &Source) -> CliResult<Vec<CauchyPlane>> {
    check_planes(cfg, src)?;
    let g = cfg.grid()?;
    let opts = DiracOptions { allow_unstable: cfg.run.allow_unstable };
    let start = initial_plane(cfg, src)?;
    let z0 = start.z();
    let d0 = match cfg.run.propagator {
        Propagator::Dirac => Some(doublet_from_cauchy(&start)?),
        _ => None,
    };
    cfg.run
        .z
        .iter()
        .map(|&z| match (cfg.run.propagator, src) {
            (Propagator::Helmholtz, Source::Beam(spec)) => Ok(synthesize_cauchy(spec, &g, z, synth_opts(cfg))?),
            (Propagator::Helmholtz, Source::Dump(f)) => Ok(helmholtz_propagate_cauchy(f, z - z0)?),
            (Propagator::Paraxial, _) => paraxial_plane(&start.psi, z),
            (Propagator::Dirac, _) => {
                let d = d0.as_ref().expect("doublet built for the Dirac propagator");
                Ok(doublet_to_cauchy(&dirac_propagate(d, z - z0, opts)?))
            }
        })
        .collect()
}

/// Field dumps `field_NNN.mbf` and `diagnostics.csv` with one row per plane.
pub fn cmd_propagate(cfg: &Config) -> CliResult<Artifacts> {
    let src = source(cfg)?;
    let planes = planes(cfg, &src)?;
    let dir = cfg.out_dir();
    prepare_out(&dir)?;
    let mut files = Vec::new();
    let mut reports = Vec::with_capacity(planes.len());
    for (k, p) in planes.iter().enumerate() {
        let path = dir.join(format!("field_{k:03}.mbf"));
        write_field(&path, &p.psi)?;
        files.push(path);
        reports.push(DiagnosticsReport::from_cauchy(p, None)?);
    }
    let mut csv = Vec::new();
    write_diagnostics_csv(&mut csv, &reports)?;
    let path = dir.join("diagnostics.csv");
    write_atomic(&path, &csv)?;
    files.push(path);
    Ok(Artifacts { files })
}

/// Doublet dumps `doublet_NNN.mbd` and `dirac.csv` comparing the recovered
/// field with the second-order solution at each plane.
pub fn cmd_dirac(cfg: &Config) -> CliResult<Artifacts> {
    let src = source(cfg)?;
    check_planes(cfg, &src)?;
    let start = initial_plane(cfg, &src)?;
    let d0 = doublet_from_cauchy(&start)?;
    let opts = DiracOptions { allow_unstable: cfg.run.allow_unstable };
    let dir = cfg.out_dir();
    prepare_out(&dir)?;
    let mut files = Vec::new();
    let mut table = String::from("z,norm,psi_deviation\n");
    for (k, &z) in cfg.run.z.iter().enumerate() {
        let d: DoubletField = dirac_propagate(&d0, z - d0.z(), opts)?;
        let reference = match &src {
            Source::Beam(spec) => synthesize_cauchy(spec, &cfg.grid()?, z, SynthesisOptions { allow_unstable: true })?.psi,
            Source::Dump(f) => helmholtz_propagate_cauchy(f, z - d0.z())?.psi,
        };
        let psi = doublet_to_cauchy(&d).psi;
        let dev = psi.l2_distance(&reference)? / reference.l2_norm().max(f64::MIN_POSITIVE);
        writeln!(table, "{z:.16e},{:.16e},{dev:.16e}", d.l2_norm()).expect("write to String");
        let path = dir.join(format!("doublet_{k:03}.mbd"));
        write_doublet(&path, &d)?;
        files.push(path);
    }
    let path = dir.join("dirac.csv");
    write_atomic(&path, table.as_bytes())?;
    files.push(path);
    Ok(Artifacts { files })
}

/// Single-mode Hamilton flow written to `modes.csv`, with the deviation from
/// the closed-form solution at each step.
pub fn cmd_modes(cfg: &Config) -> CliResult<Artifacts> {
    let m = cfg.modes.as_ref().ok_or_else(|| CliError::Config("the modes command needs a [modes] section".into()))?;
    let mode = Mode::new(m.p, cfg.grid.k0);
    let coeffs = ModeCoefficients::new(Complex64::new(m.c1[0], m.c1[1]), Complex64::new(m.c2[0], m.c2[1]));
    if mode.kind() == ModeKind::Evanescent && !cfg.run.allow_unstable {
        let growing = if m.dz > 0.0 { coeffs.c2 } else { coeffs.c1 };
        if growing != Complex64::new(0.0, 0.0) {
            return Err(CliError::Physicality(format!(
                "evanescent mode p = {:?} has a growing component in the step direction; pass --allow-unstable",
                m.p
            )));
        }
    }
    let energy = mode_energy(coeffs, mode);
    let mut state = ModeState::from_coefficients(mode, 0.0, coeffs);
    let mut table = String::from("z,re_q,im_q,re_p,im_p,energy,deviation\n");
    for k in 0..=m.steps {
        if k > 0 {
            state = hamilton_step(state, m.dz);
        }
        let exact = analytic_mode_solution(coeffs, mode, state.z);
        let scale = exact.q.norm().max(exact.p.norm()).max(f64::MIN_POSITIVE);
        let dev = (state.pair.q - exact.q).norm().max((state.pair.p - exact.p).norm()) / scale;
        let (q, p) = (state.pair.q, state.pair.p);
        writeln!(table, "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{energy:.16e},{dev:.16e}", state.z, q.re, q.im, p.re, p.im)
            .expect("write to String");
    }
    let dir = cfg.out_dir();
    prepare_out(&dir)?;
    let path = dir.join("modes.csv");
    write_atomic(&path, table.as_bytes())?;
    Ok(Artifacts { files: vec![path] })
}

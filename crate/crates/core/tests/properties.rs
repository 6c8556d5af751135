use helmwave::diagnostics::{DiagnosticsReport, CSV_COLUMNS};
use helmwave::dirac::{dirac_propagate, doublet_from_cauchy, DiracOptions};
use helmwave::io::{decode_doublet, decode_field, encode_doublet, encode_field, parse_diagnostics_csv, write_diagnostics_csv};
use helmwave::propagate::helmholtz_propagate_spectrum;
use helmwave::{forward_transform, inverse_transform, CauchyPlane, Field2D, Grid2D, Spectrum2D};
use num_complex::Complex64;
use proptest::prelude::*;

fn grid() -> impl Strategy<Value = Grid2D> {
    (2usize..12, 2usize..12, 0.1f64..3.0, 0.1f64..3.0, 0.2f64..4.0)
        .prop_map(|(nx, ny, dx, dy, k0)| Grid2D::new(nx, ny, dx, dy, k0).unwrap())
}

fn field() -> impl Strategy<Value = Field2D> {
    grid().prop_flat_map(|g| {
        (prop::collection::vec((-10.0f64..10.0, -10.0f64..10.0), g.len()), -50.0f64..50.0).prop_map(move |(v, z)| {
            Field2D::new(g, z, v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect()).unwrap()
        })
    })
}

/// Band-limited spectrum on a fixed grid: only propagating modes are filled.
fn light_spectrum() -> impl Strategy<Value = Spectrum2D> {
    let g = Grid2D::square(16, 1.5, 1.0).unwrap();
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), g.len()).prop_map(move |v| {
        let zeta = g.zeta_table();
        let amps = v
            .into_iter()
            .zip(zeta)
            .map(|((re, im), z)| if z.im == 0.0 && z.re > 0.0 { Complex64::new(re, im) } else { Complex64::new(0.0, 0.0) })
            .collect();
        Spectrum2D::new(g, 0.0, amps).unwrap()
    })
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn transform_round_trip(f in field()) {
        let back = inverse_transform(&forward_transform(&f).unwrap()).unwrap();
        prop_assert!(back.l2_distance(&f).unwrap() <= 1e-12 * f.l2_norm().max(1e-300));
    }

    #[test]
    fn parseval(f in field()) {
        let s = forward_transform(&f).unwrap();
        prop_assert!(close(s.power(), f.l2_norm().powi(2), 1e-12));
    }

    #[test]
    fn field_dump_round_trip(f in field()) {
        prop_assert_eq!(decode_field(&encode_field(&f)).unwrap(), f);
    }

    #[test]
    fn doublet_dump_round_trip(s in light_spectrum()) {
        let d = doublet_from_cauchy(&CauchyPlane::from_spectrum(&s)).unwrap();
        prop_assert_eq!(decode_doublet(&encode_doublet(&d)).unwrap(), d);
    }

    #[test]
    fn truncated_dumps_are_rejected(f in field(), cut in 1usize..64) {
        let b = encode_field(&f);
        let keep = b.len().saturating_sub(cut);
        prop_assert!(decode_field(&b[..keep]).is_err());
    }

    #[test]
    fn csv_round_trip(rows in prop::collection::vec(prop::array::uniform12(-1e6f64..1e6), 1..8)) {
        let reports: Vec<DiagnosticsReport> = rows.into_iter().map(DiagnosticsReport::from_csv_values).collect();
        let mut buf = Vec::new();
        write_diagnostics_csv(&mut buf, &reports).unwrap();
        let text = String::from_utf8(buf).unwrap();
        prop_assert_eq!(text.lines().next().unwrap(), CSV_COLUMNS.join(","));
        prop_assert_eq!(parse_diagnostics_csv(&text).unwrap(), reports);
    }

    #[test]
    fn propagation_composes(s in light_spectrum(), a in 0.0f64..20.0, b in 0.0f64..20.0) {
        let two = helmholtz_propagate_spectrum(&helmholtz_propagate_spectrum(&s, a).unwrap(), b).unwrap();
        let one = helmholtz_propagate_spectrum(&s, a + b).unwrap();
        let fa = inverse_transform(&two).unwrap();
        let fb = inverse_transform(&one).unwrap();
        prop_assert!(fa.l2_distance(&fb).unwrap() <= 1e-12 * fb.l2_norm().max(1e-300));
    }

    #[test]
    fn dirac_propagation_inverts_on_light_beams(s in light_spectrum(), z in -30.0f64..30.0) {
        let d = doublet_from_cauchy(&CauchyPlane::from_spectrum(&s)).unwrap();
        let out = dirac_propagate(&d, z, DiracOptions::default()).unwrap();
        let back = dirac_propagate(&out, -z, DiracOptions::default()).unwrap();
        prop_assert!(back.l2_distance(&d).unwrap() <= 1e-10 * d.l2_norm().max(1e-300));
    }
}

//! Unnormalized 2D FFT over row-major (`y` outer) buffers.

use std::sync::{Mutex, OnceLock};

use num_complex::Complex64;
use rustfft::FftPlanner;

fn planner() -> &'static Mutex<FftPlanner<f64>> {
    static PLANNER: OnceLock<Mutex<FftPlanner<f64>>> = OnceLock::new();
    PLANNER.get_or_init(|| Mutex::new(FftPlanner::new()))
}

/// In-place `sum_j f_j e^{-+ 2 pi i m j / n}` along both axes; `inverse`
/// selects the `+` sign. No scaling is applied.
pub(crate) fn fft2(data: &mut [Complex64], nx: usize, ny: usize, inverse: bool) {
    debug_assert_eq!(data.len(), nx * ny);
    let (row, col) = {
        let mut p = planner().lock().unwrap_or_else(|e| e.into_inner());
        if inverse {
            (p.plan_fft_inverse(nx), p.plan_fft_inverse(ny))
        } else {
            (p.plan_fft_forward(nx), p.plan_fft_forward(ny))
        }
    };
    row.process(data);

    let mut t = vec![Complex64::new(0.0, 0.0); nx * ny];
    for iy in 0..ny {
        for ix in 0..nx {
            t[ix * ny + iy] = data[iy * nx + ix];
        }
    }
    col.process(&mut t);
    for ix in 0..nx {
        for iy in 0..ny {
            data[iy * nx + ix] = t[ix * ny + iy];
        }
    }
}

//! Entries of the exact flow of `u'' = -s u` for real `s`.

/// Returns `(C, S)` with `C = cos(sqrt(s) z)` and `S = sin(sqrt(s) z)/sqrt(s)`,
/// continued analytically to `cosh`/`sinh` for `s < 0` and evaluated by
/// series near `s z^2 = 0`, where the quotient has a removable singularity.
pub fn cos_sinc(s: f64, z: f64) -> (f64, f64) {
    let t = s * z * z;
    if t.abs() < 1e-4 {
        let c = 1.0 - t / 2.0 + t * t / 24.0 - t * t * t / 720.0;
        let sn = z * (1.0 - t / 6.0 + t * t / 120.0 - t * t * t / 5040.0);
        return (c, sn);
    }
    if s > 0.0 {
        let r = s.sqrt();
        ((r * z).cos(), (r * z).sin() / r)
    } else {
        let r = (-s).sqrt();
        ((r * z).cosh(), (r * z).sinh() / r)
    }
}

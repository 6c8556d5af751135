#![no_main]

use helmwave::io::{parse_diagnostics_csv, write_diagnostics_csv};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(rows) = parse_diagnostics_csv(text) {
        let mut out = Vec::new();
        write_diagnostics_csv(&mut out, &rows).unwrap();
        let again = parse_diagnostics_csv(std::str::from_utf8(&out).unwrap()).unwrap();
        assert_eq!(again, rows);
    }
});

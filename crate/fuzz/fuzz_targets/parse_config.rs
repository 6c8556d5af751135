#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(cfg) = helmwave_cli::parse_config(text) {
        assert!(cfg.grid().is_ok());
        assert!(!cfg.run.z.is_empty());
    }
});

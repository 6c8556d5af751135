#![no_main]

use helmwave::io::{decode_doublet, encode_doublet};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(d) = decode_doublet(data) {
        assert_eq!(encode_doublet(&d), data);
    }
});

#![no_main]

use helmwave::io::{decode_field, encode_field};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(f) = decode_field(data) {
        assert_eq!(encode_field(&f), data);
    }
});

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok((lo, hi)) = tatekit::io::parse_window(text) {
            assert!(lo <= hi);
        }
        let _ = tatekit::io::parse_seed(text);
    }
});

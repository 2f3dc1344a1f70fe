#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(file) = tatekit::io::AlgebraFile::parse(text, "fuzz") {
            if let Ok(algebra) = file.build() {
                let again = tatekit::io::AlgebraFile::from_algebra(&algebra).build().unwrap();
                assert_eq!(again, algebra);
            }
        }
    }
});

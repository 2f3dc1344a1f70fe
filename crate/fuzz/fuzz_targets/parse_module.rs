#![no_main]

use std::sync::{Arc, OnceLock};

use libfuzzer_sys::fuzz_target;
use tatekit::Algebra;

fn algebra() -> &'static Arc<Algebra> {
    static ALGEBRA: OnceLock<Arc<Algebra>> = OnceLock::new();
    ALGEBRA.get_or_init(|| tatekit::corpus::complete_intersection(2, &[2, 2]))
}

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let load = |_: &str| Ok((**algebra()).clone());
        if let Ok(m) = tatekit::io::parse_module(text, "fuzz", algebra(), load) {
            let file = tatekit::io::ModuleFile::from_module(&m, None);
            let again = tatekit::io::parse_module(&file.to_json(), "again", algebra(), load).unwrap();
            assert_eq!(again, m);
        }
    }
});

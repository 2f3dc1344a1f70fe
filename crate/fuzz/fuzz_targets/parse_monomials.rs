#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let (vars, monomials) = text.split_once('|').unwrap_or(("x,y", text));
        if let Ok(vars) = tatekit::io::parse_vars(Some(vars), 0) {
            if let Ok(exps) = tatekit::io::parse_monomials(monomials, &vars) {
                assert!(exps.iter().all(|e| e.len() == vars.len()));
            }
        }
    }
});

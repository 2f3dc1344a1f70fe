#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        if let Ok(table) = tatekit::io::parse_table(text, "fuzz") {
            let again = tatekit::io::parse_table(&tatekit::io::table_to_json(&table), "again").unwrap();
            assert_eq!(again, table);
            let _ = table.extrapolate(table.hi + 7);
        }
    }
});

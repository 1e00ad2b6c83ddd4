#![no_main]

use libfuzzer_sys::fuzz_target;
use polystat::graph::{parse_pattern, GraphVector};

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        let _ = parse_pattern(s);
        if let Ok(fs) = GraphVector::parse(s) {
            // labels are shorthands again
            assert_eq!(GraphVector::parse(&fs.label()).expect("label parses").patterns(), fs.patterns());
        }
    }
});

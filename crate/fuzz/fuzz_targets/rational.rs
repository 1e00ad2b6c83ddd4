#![no_main]

use libfuzzer_sys::fuzz_target;
use polystat::rational::{format_q, parse_q};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(x) = parse_q(s) {
        assert_eq!(parse_q(&format_q(&x)).expect("formatted value parses"), x);
    }
});

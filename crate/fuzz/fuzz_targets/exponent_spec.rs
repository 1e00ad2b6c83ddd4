#![no_main]

use libfuzzer_sys::fuzz_target;
use polystat::limits::TailSpec;
use polystat::spine::SpineSpec;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(spec) = s.parse::<SpineSpec>() {
        assert_eq!(spec.to_string().parse::<SpineSpec>().unwrap(), spec);
    }
    if let Ok(tail) = s.parse::<TailSpec>() {
        assert_eq!(tail.to_string().parse::<TailSpec>().unwrap(), tail);
    }
});

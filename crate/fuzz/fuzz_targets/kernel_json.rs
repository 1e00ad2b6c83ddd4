#![no_main]

use libfuzzer_sys::fuzz_target;
use polystat::zonotope::StepKernel;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(k) = StepKernel::from_json(s) {
        assert_eq!(StepKernel::from_json(&k.to_json()).unwrap(), k);
    }
});

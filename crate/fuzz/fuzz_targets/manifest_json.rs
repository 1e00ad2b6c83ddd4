#![no_main]

use libfuzzer_sys::fuzz_target;
use polystat::limits::ExperimentManifest;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(m) = ExperimentManifest::from_json(s) {
        assert_eq!(ExperimentManifest::from_json(&m.to_json()).unwrap(), m);
    }
});

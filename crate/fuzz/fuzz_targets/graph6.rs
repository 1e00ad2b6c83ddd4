#![no_main]

use libfuzzer_sys::fuzz_target;
use polystat::graph::graph6;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(g) = graph6::decode(s) {
        let again = graph6::decode(&graph6::encode(&g)).expect("encoded graph decodes");
        assert_eq!(again, g);
    }
});

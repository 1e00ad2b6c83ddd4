#![no_main]

use libfuzzer_sys::fuzz_target;
use polystat::geometry::io::PolytopeDoc;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok((poly, facets)) = PolytopeDoc::from_json(s) {
        let again = PolytopeDoc::new(&poly, facets).to_json();
        PolytopeDoc::from_json(&again).expect("re-encoded document validates");
    }
});

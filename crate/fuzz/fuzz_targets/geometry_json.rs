#![no_main]
use libfuzzer_sys::fuzz_target;
use wallx_core::io::{geometry_to_json, parse_geometry_json};
use wallx_core::quiver::Quiver;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let Ok(g) = parse_geometry_json(s) else { return };
    let text = serde_json::to_string(&geometry_to_json(&g)).unwrap();
    assert_eq!(parse_geometry_json(&text).unwrap(), g);
    let q = Quiver::from_geometry(&g);
    assert_eq!(q.arrows().len(), 2 * g.n() + g.ir().len());
});

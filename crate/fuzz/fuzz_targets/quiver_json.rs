#![no_main]
use libfuzzer_sys::fuzz_target;
use wallx_core::io::{parse_quiver_json, quiver_to_json};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let Ok(q) = parse_quiver_json(s) else { return };
    let text = serde_json::to_string(&quiver_to_json(&q)).unwrap();
    let again = parse_quiver_json(&text).unwrap();
    assert_eq!(again.arrows(), q.arrows());
});

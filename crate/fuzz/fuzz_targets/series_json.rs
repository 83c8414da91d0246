#![no_main]
use libfuzzer_sys::fuzz_target;
use wallx_core::io::{parse_series_json, series_to_json};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let Ok(x) = parse_series_json(s) else { return };
    let text = serde_json::to_string(&series_to_json(&x)).unwrap();
    assert_eq!(parse_series_json(&text).unwrap(), x);
    if x.cap() <= 6 && x.nvars() <= 3 {
        let _ = x.mul(&x);
    }
});

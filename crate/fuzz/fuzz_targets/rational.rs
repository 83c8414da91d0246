#![no_main]
use libfuzzer_sys::fuzz_target;
use wallx_core::io::{format_rational, parse_rational, parse_zeta};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(r) = parse_rational(s) {
        assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
    }
    if let Ok(z) = parse_zeta(s) {
        let back: Vec<String> = z.iter().map(format_rational).collect();
        assert_eq!(parse_zeta(&back.join(",")).unwrap(), z);
    }
});

#![no_main]
use libfuzzer_sys::fuzz_target;
use wallx_core::engine::{Flavor, Mode};
use wallx_core::toric::{divisor, presets, DivisorKind};

// "<kind>\n<index>", plus the mode and flavor names.
fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let _ = Mode::parse(s);
    let _ = Flavor::parse(s);
    let (kind, index) = match s.split_once('\n') {
        Some((k, i)) => (k, Some(i)),
        None => (s, None),
    };
    if let Ok(k) = DivisorKind::parse(kind, index) {
        for name in presets::NAMES {
            let _ = divisor(&presets::by_name(name).unwrap(), k);
        }
    }
});

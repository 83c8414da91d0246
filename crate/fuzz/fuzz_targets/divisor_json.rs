#![no_main]
use libfuzzer_sys::fuzz_target;
use wallx_core::io::{divisor_to_json, parse_divisor_json};
use wallx_core::toric::{presets, support_function};

// First byte picks a preset geometry; the rest is the divisor JSON.
fuzz_target!(|data: &[u8]| {
    let Some((&pick, rest)) = data.split_first() else { return };
    let Ok(s) = std::str::from_utf8(rest) else { return };
    let g = presets::by_name(presets::NAMES[pick as usize % presets::NAMES.len()]).unwrap();
    let Ok(d) = parse_divisor_json(s, &g) else { return };
    assert_eq!(divisor_to_json(&d).row0, d.row0);
    let _ = support_function(&g, &d);
});

#![no_main]
use libfuzzer_sys::fuzz_target;
use wallx_core::io::parse_word;
use wallx_core::quiver::Quiver;
use wallx_core::toric::presets;

fuzz_target!(|data: &[u8]| {
    let Some((&pick, rest)) = data.split_first() else { return };
    let Ok(s) = std::str::from_utf8(rest) else { return };
    let g = presets::by_name(presets::NAMES[pick as usize % presets::NAMES.len()]).unwrap();
    let q = Quiver::from_geometry(&g);
    let Ok(w) = parse_word(s, &q) else { return };
    if let Some(&a) = w.first() {
        if let Ok(p) = q.normalize_path(q.source(a), &w) {
            assert_eq!(p.source, q.source(a));
        }
    }
});

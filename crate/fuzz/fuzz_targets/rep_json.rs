#![no_main]
use libfuzzer_sys::fuzz_target;
use wallx_core::homalg::{check_relations, hom_ext};
use wallx_core::io::{parse_rep_json, rep_to_json};
use wallx_core::quiver::Quiver;
use wallx_core::toric::presets;

// First byte picks a preset quiver; the rest is the module JSON.
fuzz_target!(|data: &[u8]| {
    let Some((&pick, rest)) = data.split_first() else { return };
    let Ok(s) = std::str::from_utf8(rest) else { return };
    let g = presets::by_name(presets::NAMES[pick as usize % presets::NAMES.len()]).unwrap();
    let q = Quiver::from_geometry(&g);
    let Ok(r) = parse_rep_json(s, &q) else { return };
    let text = serde_json::to_string(&rep_to_json(&q, &r)).unwrap();
    assert_eq!(parse_rep_json(&text, &q).unwrap().dims, r.dims);
    if r.total_dim() <= 4 && s.len() <= 512 {
        let _ = check_relations(&q, &r);
        let _ = hom_ext(&q, &r, &r);
    }
});

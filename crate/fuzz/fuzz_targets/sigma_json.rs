#![no_main]
use libfuzzer_sys::fuzz_target;
use wallx_core::io::parse_sigma_json;
use wallx_core::toric::Geometry;

// First byte splits the cell count into N0/N1.
fuzz_target!(|data: &[u8]| {
    let Some((&split, rest)) = data.split_first() else { return };
    let Ok(s) = std::str::from_utf8(rest) else { return };
    let Ok(cells) = parse_sigma_json(s) else { return };
    let n = cells.len();
    let n1 = (split as usize) % (n / 2 + 1);
    if let Ok(g) = Geometry::new(n - n1, n1, cells) {
        assert_eq!(g.ir_mask().len(), n);
    }
});

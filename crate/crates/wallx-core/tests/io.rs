use std::path::PathBuf;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use wallx_core::crystal::enumerate_molten;
use wallx_core::engine::z_pt_macmahon;
use wallx_core::homalg::Rep;
use wallx_core::io::*;
use wallx_core::quiver::Quiver;
use wallx_core::toric::{divisor, presets, DivisorKind};

#[test]
fn round_trips_on_presets() {
    for name in presets::NAMES {
        let g = presets::by_name(name).unwrap();
        let text = serde_json::to_string(&geometry_to_json(&g)).unwrap();
        assert_eq!(parse_geometry_json(&text).unwrap(), g, "{name}");

        let q = Quiver::from_geometry(&g);
        let text = serde_json::to_string(&quiver_to_json(&q)).unwrap();
        assert_eq!(quiver_to_json(&parse_quiver_json(&text).unwrap()), quiver_to_json(&q));

        let d = divisor(&g, DivisorKind::FPlusTotal).unwrap();
        let text = serde_json::to_string(&divisor_to_json(&d)).unwrap();
        assert_eq!(parse_divisor_json(&text, &g).unwrap(), d);

        let s = enumerate_molten(&q, 3);
        let text = serde_json::to_string(&series_to_json(&s)).unwrap();
        assert_eq!(parse_series_json(&text).unwrap(), s);

        let mut r = Rep::zero(&q, vec![1; q.n()]);
        for (i, m) in r.maps.iter_mut().enumerate() {
            *m = wallx_core::homalg::linalg::Matrix::from_rows(vec![vec![BigRational::new(BigInt::from(i as i64 - 2), BigInt::from(3))]], 1).unwrap();
        }
        let text = serde_json::to_string(&rep_to_json(&q, &r)).unwrap();
        let back = parse_rep_json(&text, &q).unwrap();
        assert_eq!(back.dims, r.dims);
        assert_eq!(back.maps, r.maps);

        // Sheaf tables serialize in key order.
        let t = z_pt_macmahon(g.ir_mask(), 2);
        let rows = sheaf_to_json(&t);
        assert_eq!(rows.len(), t.len());
        assert!(rows.windows(2).all(|w| (w[0].n, &w[0].beta) < (w[1].n, &w[1].beta)));
    }
}

#[test]
fn rejects_malformed_input() {
    let g = presets::conifold();
    let q = Quiver::from_geometry(&g);
    for bad in [
        r#"{"N0":1,"N1":1,"sigma":[{"x2":1,"y":0},{"x2":1,"y":0}]}"#,
        r#"{"N0":1,"N1":0,"sigma":[{"x2":1,"y":0}],"extra":1}"#,
        r#"{"N0":18446744073709551615,"N1":1,"sigma":[]}"#,
        r#"{"N0":0,"N1":0,"sigma":[]}"#,
        "[",
    ] {
        assert!(parse_geometry_json(bad).is_err(), "{bad}");
    }
    assert!(parse_divisor_json(r#"{"row1":[0],"row0":[0,0]}"#, &g).is_err());
    assert!(parse_quiver_json(r#"{"N":2,"Ir":[5],"arrows":[],"potential":[]}"#).is_err());
    assert!(parse_quiver_json(r#"{"N":2,"Ir":[],"arrows":[],"potential":[]}"#).is_err());
    for bad in [
        r#"{"vars":1,"degree":2,"terms":[{"exp":[3],"coeff":"1"}]}"#,
        r#"{"vars":1,"degree":2,"terms":[{"exp":[1],"coeff":"1/2"}]}"#,
        r#"{"vars":1,"degree":2,"terms":[{"exp":[1,0],"coeff":"1"}]}"#,
        r#"{"vars":1,"degree":65,"terms":[]}"#,
    ] {
        assert!(parse_series_json(bad).is_err(), "{bad}");
    }
    for bad in [
        r#"{"framed":false,"dims":[1],"arrows":[]}"#,
        r#"{"framed":false,"dims":[1,1],"arrows":[{"id":"h+1/2","matrix":[["1","1"]]}]}"#,
        r#"{"framed":false,"dims":[1,1],"arrows":[{"id":"r0","matrix":[["1"]]}]}"#,
        r#"{"framed":false,"dims":[33,0],"arrows":[]}"#,
        r#"{"framed":false,"dims":[1,0],"framing":1,"arrows":[]}"#,
        r#"{"framed":false,"dims":[1,1],"arrows":[{"id":"h+1/2","matrix":[["0.5"]]}]}"#,
    ] {
        assert!(parse_rep_json(bad, &q).is_err(), "{bad}");
    }
    assert!(parse_word("h+1/2,,h-1/2", &q).is_err());
    assert_eq!(parse_word("", &q).unwrap(), vec![]);
    for bad in ["-0.5,1", "1e2", "1,", ",", "", "1/0,1"] {
        assert!(parse_zeta(bad).is_err(), "{bad}");
    }
}

fn corpus(target: &str) -> Vec<(String, Vec<u8>)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut v: Vec<_> = std::fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| e.unwrap().path())
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap()))
        .collect();
    v.sort();
    v
}

#[test]
fn fuzz_seeds_are_meaningful() {
    // Seeds should reach past the JSON layer, except the ones named as bad.
    for (name, bytes) in corpus("geometry_json") {
        let ok = parse_geometry_json(std::str::from_utf8(&bytes).unwrap()).is_ok();
        assert_eq!(ok, !name.ends_with("bad"), "{name}");
    }
    for (name, bytes) in corpus("quiver_json") {
        assert!(parse_quiver_json(std::str::from_utf8(&bytes).unwrap()).is_ok(), "{name}");
    }
    for (name, bytes) in corpus("series_json") {
        assert!(parse_series_json(std::str::from_utf8(&bytes).unwrap()).is_ok(), "{name}");
    }
    for (name, bytes) in corpus("rep_json") {
        let g = presets::by_name(presets::NAMES[bytes[0] as usize % presets::NAMES.len()]).unwrap();
        let q = Quiver::from_geometry(&g);
        assert!(parse_rep_json(std::str::from_utf8(&bytes[1..]).unwrap(), &q).is_ok(), "{name}");
    }
    for (name, bytes) in corpus("divisor_json") {
        let g = presets::by_name(presets::NAMES[bytes[0] as usize % presets::NAMES.len()]).unwrap();
        assert!(parse_divisor_json(std::str::from_utf8(&bytes[1..]).unwrap(), &g).is_ok(), "{name}");
    }
}

proptest! {
    #[test]
    fn rational_round_trip(p in any::<i64>(), q in 1i64..1_000_000) {
        let r = BigRational::new(p.into(), q.into());
        prop_assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
    }

    #[test]
    fn parsers_never_panic(s in ".{0,200}", pick in 0usize..8) {
        let g = presets::by_name(presets::NAMES[pick]).unwrap();
        let q = Quiver::from_geometry(&g);
        let _ = parse_rational(&s);
        let _ = parse_zeta(&s);
        let _ = parse_geometry_json(&s);
        let _ = parse_sigma_json(&s);
        let _ = parse_divisor_json(&s, &g);
        let _ = parse_quiver_json(&s);
        let _ = parse_series_json(&s);
        let _ = parse_rep_json(&s, &q);
        let _ = parse_word(&s, &q);
    }

    #[test]
    fn json_shaped_input_never_panics(
        n0 in 0usize..6, n1 in 0usize..6,
        cells in proptest::collection::vec((-3i64..14, 0u8..3), 0..10),
    ) {
        let sigma: Vec<String> = cells.iter().map(|(x, y)| format!(r#"{{"x2":{x},"y":{y}}}"#)).collect();
        let s = format!(r#"{{"N0":{n0},"N1":{n1},"sigma":[{}]}}"#, sigma.join(","));
        if let Ok(g) = parse_geometry_json(&s) {
            prop_assert_eq!(g.n(), n0 + n1);
            let _ = Quiver::from_geometry(&g);
        }
    }
}

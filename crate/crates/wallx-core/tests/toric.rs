use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wallx_core::toric::{
    divisor, is_globally_linear, is_upper_convex, difference_identity_holds, presets, support_function, Divisor,
    DivisorKind, Geometry, Half, ToricError,
};

fn d(row1: &[i64], row0: &[i64]) -> Divisor {
    Divisor { row1: row1.to_vec(), row0: row0.to_vec() }
}

fn e_plus(g: &Geometry, i2: i64) -> Divisor {
    divisor(g, DivisorKind::EPlus(Half(i2))).unwrap()
}

#[test]
fn reference_e_plus_matrices() {
    let g = presets::t42();
    let expected = [
        (1, d(&[0, 0, 0], &[0, 0, 0, 0, 1])),
        (3, d(&[0, 0, 1], &[0, 0, 0, 0, 0])),
        (5, d(&[0, 0, 0], &[0, 0, 0, 1, 1])),
        (7, d(&[0, 0, 0], &[0, 0, 1, 1, 1])),
        (9, d(&[0, 1, 1], &[0, 0, 0, 0, 0])),
        (11, d(&[0, 0, 0], &[0, 1, 1, 1, 1])),
    ];
    for (i2, m) in expected {
        assert_eq!(e_plus(&g, i2), m, "E+ at {}", Half(i2));
    }
}

#[test]
fn reference_f_plus_matrices() {
    let g = presets::t42();
    let expected = [
        d(&[0, 0, 0], &[0, 0, 0, 0, 1]),
        d(&[0, 0, 1], &[0, 0, 0, 0, 1]),
        d(&[0, 0, 1], &[0, 0, 0, 1, 2]),
        d(&[0, 0, 1], &[0, 0, 1, 2, 3]),
        d(&[0, 1, 2], &[0, 0, 1, 2, 3]),
        d(&[0, 1, 2], &[0, 1, 2, 3, 4]),
    ];
    for (k, m) in expected.into_iter().enumerate() {
        assert_eq!(divisor(&g, DivisorKind::FPlus(k + 1)).unwrap(), m, "F+ at {}", k + 1);
    }
    assert_eq!(
        divisor(&g, DivisorKind::FPlusTotal).unwrap(),
        d(&[0, 1, 5], &[0, 0, 2, 5, 10])
    );
}

#[test]
fn parse_examples() {
    let g = presets::t42();
    assert_eq!(g.n(), 6);
    assert_eq!(g.ir(), vec![0, 3]);
    assert_eq!(g.tau(), vec![1, -1, -1, 1, -1, -1]);
    assert_eq!(g.curve_type(3).unwrap(), "(0,-2)");
    assert_eq!(g.curve_type(1).unwrap(), "(-1,-1)");
    assert_eq!(presets::conifold().curve_type(1).unwrap(), "(-1,-1)");
    assert!(matches!(g.curve_type(0), Err(ToricError::IndexOutOfRange { .. })));
    assert!(matches!(g.curve_type(6), Err(ToricError::IndexOutOfRange { .. })));
}

#[test]
fn index_ranges() {
    let g = presets::conifold();
    assert!(divisor(&g, DivisorKind::EPlus(Half(5))).is_err());
    assert!(divisor(&g, DivisorKind::EPlus(Half(2))).is_err());
    assert!(divisor(&g, DivisorKind::FPlus(0)).is_err());
    assert!(divisor(&g, DivisorKind::I(2)).is_err());
    assert!(divisor(&g, DivisorKind::I(1)).is_ok());
}

/// Independent evaluation: ψ value at every lattice point of each triangle.
fn forms_match_values(g: &Geometry, dv: &Divisor) -> bool {
    let s = support_function(g, dv).unwrap();
    (0..g.n()).all(|j| {
        g.triangle_vertices(j).iter().all(|&(x, y)| {
            let t = s.forms[j];
            t[0] * x + t[1] * y as i64 + t[2] == -dv.get(y, x)
        })
    })
}

fn support_checks(g: &Geometry) {
    let n = g.n();
    for j in 0..n {
        let h = Half::plus_half(j as i64);
        let sum = divisor(g, DivisorKind::EPlus(h)).unwrap().add(&divisor(g, DivisorKind::EMinus(h)).unwrap());
        let s = support_function(g, &sum).unwrap();
        assert!(is_globally_linear(g, &s));
        let expect = if g.sigma()[j].y == 0 { [0, 1, -1] } else { [0, -1, 0] };
        assert!(s.forms.iter().all(|t| *t == expect));
        assert!(forms_match_values(g, &sum));
    }
    let fnn = divisor(g, DivisorKind::FPlus(n)).unwrap();
    let s = support_function(g, &fnn).unwrap();
    assert!(s.forms.iter().all(|t| *t == [-1, 0, 0]), "F+_N is -x");
    let ftot = divisor(g, DivisorKind::FPlusTotal).unwrap();
    let s = support_function(g, &ftot).unwrap();
    assert!(is_upper_convex(g, &s));
    assert!(difference_identity_holds(g));
    if n >= 2 {
        // The negative of a strictly convex function is not convex.
        assert!(!is_upper_convex(g, &support_function(g, &ftot.neg()).unwrap()));
    }
}

#[test]
fn support_checks_on_fixed_geometries() {
    for g in [presets::t42(), presets::conifold(), presets::a1(), presets::t21(0), presets::t21(1), presets::t21(2), presets::c3()] {
        support_checks(&g);
    }
}

#[test]
fn single_e_plus_is_not_linear_on_conifold() {
    let g = presets::conifold();
    let s = support_function(&g, &e_plus(&g, 1)).unwrap();
    assert!(!is_globally_linear(&g, &s));
}

#[test]
fn zero_divisor() {
    let g = presets::t31();
    let s = support_function(&g, &Divisor::zero(&g)).unwrap();
    assert!(is_globally_linear(&g, &s));
}

fn arb_geometry() -> impl Strategy<Value = Geometry> {
    (1usize..=5, 0usize..=4, any::<u64>()).prop_filter_map("N1 <= N0, N <= 8", |(n0, n1, seed)| {
        (n1 <= n0 && n0 + n1 <= 8).then(|| presets::random(&mut ChaCha8Rng::seed_from_u64(seed), n0, n1))
    })
}

proptest! {
    #[test]
    fn random_geometries_satisfy_support_checks(g in arb_geometry()) {
        support_checks(&g);
        prop_assert_eq!((g.n() - g.ir().len()) % 2, 0);
    }

    #[test]
    fn f_plus_and_f_minus_differ_by_linear(g in arb_geometry()) {
        for k in 1..g.n() {
            let diff = divisor(&g, DivisorKind::FPlus(k)).unwrap().sub(&divisor(&g, DivisorKind::FMinus(k)).unwrap());
            prop_assert!(is_globally_linear(&g, &support_function(&g, &diff).unwrap()));
        }
    }

    #[test]
    fn e_plus_plus_e_minus_is_full_row(g in arb_geometry()) {
        for j in 0..g.n() {
            let h = Half::plus_half(j as i64);
            let sum = divisor(&g, DivisorKind::EPlus(h)).unwrap().add(&divisor(&g, DivisorKind::EMinus(h)).unwrap());
            prop_assert_eq!(sum, Divisor::full_row(&g, g.sigma()[j].y));
        }
    }

    #[test]
    fn i_and_h_follow_their_sums(g in arb_geometry()) {
        let n = g.n();
        for k in 1..n {
            let i = divisor(&g, DivisorKind::I(k)).unwrap();
            let h = divisor(&g, DivisorKind::H(Half::plus_half(k as i64 - 1))).unwrap();
            prop_assert_eq!(i, h.add(&divisor(&g, DivisorKind::FPlus(k)).unwrap()));
        }
        prop_assert_eq!(divisor(&g, DivisorKind::H(Half(1))).unwrap(), Divisor::zero(&g));
    }
}

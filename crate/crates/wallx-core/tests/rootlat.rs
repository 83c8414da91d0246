use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use wallx_core::rootlat::{
    chamber_path, check_generic, epsilon, mutate_dimvec, mutate_param, mutate_tau, norm, pair, positive_real_roots,
    simple_index, Family, Root, RootError,
};
use wallx_core::toric::presets;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn zi(v: &[i64]) -> Vec<BigRational> {
    v.iter().map(|&x| q(x, 1)).collect()
}

/// Brute force: every non-negative vector of norm 2 and height ≤ h.
fn brute_roots(nv: usize, h: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut v = vec![0i64; nv];
    loop {
        let s: i64 = v.iter().sum();
        if s > 0 && s <= h && norm(&v) == 2 {
            out.push(v.clone());
        }
        let mut i = 0;
        loop {
            if i == nv {
                return out;
            }
            v[i] += 1;
            if v[i] <= h {
                break;
            }
            v[i] = 0;
            i += 1;
        }
    }
}

#[test]
fn roots_match_brute_force() {
    for nv in 2..=5 {
        for h in 1..=7 {
            let mut got: Vec<Vec<i64>> = positive_real_roots(nv, h).into_iter().map(|r| r.coords).collect();
            let mut want = brute_roots(nv, h);
            got.sort();
            want.sort();
            assert_eq!(got, want, "N={nv} h={h}");
        }
    }
}

#[test]
fn root_examples() {
    let c = |nv, h| -> Vec<Vec<i64>> {
        let mut v: Vec<_> = positive_real_roots(nv, h).into_iter().map(|r| r.coords).collect();
        v.sort();
        v
    };
    assert_eq!(c(2, 4), vec![vec![0, 1], vec![1, 0], vec![1, 2], vec![2, 1]]);
    assert_eq!(c(2, 1), vec![vec![0, 1], vec![1, 0]]);
    // Height ≤ 2 for N=3 also contains α₀ = δ − α_{[1,2]}.
    assert_eq!(
        c(3, 2),
        vec![vec![0, 0, 1], vec![0, 1, 0], vec![0, 1, 1], vec![1, 0, 0], vec![1, 0, 1], vec![1, 1, 0]]
    );
    assert!(positive_real_roots(1, 5).is_empty());
    let r = Root::classify(&[1, 0, 0]).unwrap();
    assert_eq!((r.a, r.b, r.n, r.family), (1, 2, 1, Family::Minus));
    assert!(matches!(Root::classify(&[1, 1, 1]), Err(RootError::NotRealRoot(_))));
}

#[test]
fn epsilon_examples() {
    let con = presets::conifold().ir_mask().to_vec();
    for n in 1..6 {
        assert_eq!(epsilon(&con, &[n, n - 1]).unwrap(), -1);
    }
    let g = presets::t42().ir_mask().to_vec();
    assert_eq!(epsilon(&g, &[0, 0, 0, 1, 0, 0]).unwrap(), 1);
    assert_eq!(epsilon(&g, &[0, 1, 0, 0, 0, 0]).unwrap(), -1);
    assert!(epsilon(&g, &[1, 1, 1, 1, 1, 1]).is_err());
    for geom in [presets::conifold(), presets::a1(), presets::t21(1), presets::t42()] {
        let ir = geom.ir_mask();
        for r in positive_real_roots(geom.n(), 8) {
            let shifted: Vec<i64> = r.coords.iter().map(|x| x + 1).collect();
            assert_eq!(epsilon(&ir, &r.coords).unwrap(), epsilon(&ir, &shifted).unwrap());
        }
    }
}

#[test]
fn mutation_examples() {
    assert_eq!(mutate_param(1, &zi(&[-3, 1])), zi(&[-1, -1]));
    // Doubled-neighbour rule: τ(k) multiplies the neighbour twice for N=2.
    assert_eq!(mutate_tau(1, &[-1, -1]), vec![-1, -1]);
    assert_eq!(mutate_tau(1, &[1, -1, -1]), vec![-1, -1, 1]);
    for nv in 1..6 {
        let delta = vec![1; nv];
        for k in 0..nv {
            assert_eq!(mutate_dimvec(k, &delta), delta);
        }
    }
    assert_eq!(mutate_dimvec(0, &[0, 1]), vec![2, 1]);
}

#[test]
fn chamber_path_examples() {
    assert!(chamber_path(&zi(&[-1, -1])).unwrap().crossings.is_empty());
    let p = chamber_path(&zi(&[-3, 1])).unwrap();
    assert_eq!(p.crossings.len(), 1);
    assert_eq!((p.crossings[0].root.coords.clone(), p.crossings[0].c.clone(), p.k_sequence()), (vec![0, 1], q(1, 1), vec![1]));

    // (−5, 4) sits on the wall of (4, 5); a nearby generic parameter has the same path shape.
    assert_eq!(chamber_path(&zi(&[-5, 4])).unwrap_err(), RootError::OnWall(vec![4, 5]));
    let p = chamber_path(&[q(-5, 1), q(39, 10)]).unwrap();
    let roots: Vec<Vec<i64>> = p.crossings.iter().map(|c| c.root.coords.clone()).collect();
    assert_eq!(roots, vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 4]]);
    assert_eq!(p.k_sequence(), vec![1, 0, 1, 0]);
    let cs: Vec<BigRational> = p.crossings.iter().map(|c| c.c.clone()).collect();
    assert_eq!(cs, vec![q(39, 10), q(14, 15), q(17, 50), q(3, 35)]);

    assert_eq!(chamber_path(&zi(&[-1, 1])).unwrap_err(), RootError::OnImaginaryWall);
    assert!(matches!(chamber_path(&zi(&[-2, 1])), Err(RootError::OnWall(_))));
    let p = chamber_path(&[q(3, 2), q(-1, 3)]).unwrap();
    assert!(!p.negative_side);
}

fn arb_param(nv: usize) -> impl Strategy<Value = Vec<BigRational>> {
    prop::collection::vec((-40i64..40, 1i64..12), nv).prop_map(|v| v.into_iter().map(|(a, b)| q(a, b)).collect())
}

proptest! {
    #[test]
    fn reflections_are_involutions(v in prop::collection::vec(-9i64..9, 2..7), k in 0usize..7) {
        let k = k % v.len();
        prop_assert_eq!(mutate_dimvec(k, &mutate_dimvec(k, &v)), v.clone());
        let z: Vec<BigRational> = v.iter().map(|&x| q(x, 3)).collect();
        prop_assert_eq!(mutate_param(k, &mutate_param(k, &z)), z.clone());
        let tau: Vec<i8> = v.iter().map(|&x| if x % 2 == 0 { 1 } else { -1 }).collect();
        let t2 = mutate_tau(k, &tau);
        prop_assert_eq!(mutate_tau(k, &t2), tau.clone());
        let neg = |t: &[i8]| t.iter().filter(|&&x| x < 0).count() % 2;
        prop_assert_eq!(neg(&t2), neg(&tau));
    }

    #[test]
    fn pairing_is_invariant(nv in 1usize..7, seed in prop::collection::vec(-9i64..9, 7), z in arb_param(7), k in 0usize..7) {
        let v = &seed[..nv];
        let z = &z[..nv];
        let k = k % nv;
        prop_assert_eq!(pair(v, z), pair(&mutate_dimvec(k, v), &mutate_param(k, z)));
    }

    #[test]
    fn chamber_paths_are_well_formed(z in arb_param(3)) {
        if let Ok(p) = chamber_path(&z) {
            prop_assert!(check_generic(&z).is_ok());
            for w in p.crossings.windows(2) {
                prop_assert!(w[0].c > w[1].c);
            }
            let mut ks = Vec::new();
            for c in &p.crossings {
                let mut b = c.root.coords.clone();
                for &k in &ks {
                    b = mutate_dimvec(k, &b);
                }
                prop_assert_eq!(simple_index(&b), Some(c.k));
                ks.push(c.k);
                prop_assert_eq!(norm(&c.root.coords), 2);
            }
        }
    }
}

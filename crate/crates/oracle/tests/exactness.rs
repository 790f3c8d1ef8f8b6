use cpcover_oracle::{
    oracle_coverage, oracle_interval, oracle_tail, rational_from_f64, to_f64, Boundary, ExactRational,
};
use num_bigint::BigInt;
use num_traits::{One, Zero};

fn r(num: i64, den: i64) -> ExactRational {
    ExactRational::new(BigInt::from(num), BigInt::from(den))
}

#[test]
fn ties_follow_the_boundary_mode() {
    // n = 2, delta = 1/2: U_0 = L_2 = 1/2 exactly, so p = 1/2 sits on both.
    let closed = oracle_coverage(2, 0.5, 0.5, Boundary::Closed).unwrap();
    let open = oracle_coverage(2, 0.5, 0.5, Boundary::Open).unwrap();
    assert_eq!(closed, ExactRational::one());
    assert_eq!(open, r(1, 2));
}

#[test]
fn limits_bracket_the_exact_roots() {
    for n in [1u64, 3, 8, 17] {
        for k in 0..=n {
            let iv = oracle_interval(n, k, 0.05).unwrap();
            let half = r(1, 40);
            if k < n {
                // S(n, k, .) crosses delta/2 within one ulp of the upper limit
                let u = iv.upper;
                let below = oracle_tail(n, k, &rational_from_f64(u - u * 1e-15).unwrap()).unwrap();
                let above = oracle_tail(n, k, &rational_from_f64(u + u * 1e-15).unwrap()).unwrap();
                assert!(below >= half && above <= half, "n={n} k={k}");
            }
            if k > 0 {
                let l = iv.lower;
                let target = ExactRational::one() - &half;
                let below = oracle_tail(n, k - 1, &rational_from_f64(l - l * 1e-15).unwrap()).unwrap();
                let above = oracle_tail(n, k - 1, &rational_from_f64(l + l * 1e-15).unwrap()).unwrap();
                assert!(below >= target && above <= target, "n={n} k={k}");
            }
        }
    }
}

#[test]
fn exact_symmetry() {
    for n in 1..=12u64 {
        for k in 0..=n {
            let a = oracle_interval(n, k, 0.1).unwrap();
            let b = oracle_interval(n, n - k, 0.1).unwrap();
            // both limits are correctly rounded, so only their two half-ulps remain
            assert!((a.lower - (1.0 - b.upper)).abs() <= 2e-16);
        }
    }
}

#[test]
fn open_never_exceeds_closed() {
    for n in [1u64, 4, 9] {
        for i in 1..20 {
            let p = i as f64 / 20.0;
            let c = oracle_coverage(n, 0.2, p, Boundary::Closed).unwrap();
            let o = oracle_coverage(n, 0.2, p, Boundary::Open).unwrap();
            assert!(o <= c && !o.is_zero());
            assert!(to_f64(&c) > 0.8);
        }
    }
}

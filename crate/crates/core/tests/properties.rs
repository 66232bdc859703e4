use cphi::arith::{divisors, kronecker, mobius};
use cphi::engine::{cphi, refined_cphi_ct};
use cphi::frobenius::enumerate_symbols;
use cphi::harness::{parse, Expr};
use cphi::{exp, Exponent, PuiseuxSeries};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// A series on the lattice `1/scale` with `prec` in `[4, 16)` and small rational coefficients.
fn series() -> impl Strategy<Value = PuiseuxSeries> {
    (prop::sample::select(vec![1i64, 2, 4]), 4i64..16).prop_flat_map(|(scale, prec)| {
        prop::collection::vec((0..prec * scale, -9i64..10, 1i64..4), 0..8).prop_map(move |terms| {
            let terms = terms.into_iter().map(|(i, n, d)| (i, rat(n, d)));
            PuiseuxSeries::new(scale, exp(prec), terms).unwrap()
        })
    })
}

/// Same as [`series`] but with constant term 1, so it is invertible.
fn unit_series() -> impl Strategy<Value = PuiseuxSeries> {
    series().prop_map(|s| {
        let c = s.coefficient(Exponent::zero()).unwrap();
        s.add(&PuiseuxSeries::constant(BigRational::one() - c, s.prec()))
    })
}

fn integer_series() -> impl Strategy<Value = PuiseuxSeries> {
    prop::collection::vec(-50i64..50, 1..20).prop_map(|c| PuiseuxSeries::from_coeffs(&c, exp(c.len() as i64)))
}

fn expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (-20i64..20, 1i64..5).prop_map(|(n, d)| Expr::Num(rat(n, d))),
        prop::sample::select(vec!["qq", "t3", "A-B", "x"]).prop_map(|s| Expr::Sym(s.to_string())),
        "[a-z ]{0,6}".prop_map(Expr::Str),
    ];
    leaf.prop_recursive(3, 24, 4, |inner| prop::collection::vec(inner, 1..4).prop_map(Expr::List))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn multiplication_is_commutative_and_associative(a in series(), b in series(), c in series()) {
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        let l = a.mul(&b).mul(&c);
        let r = a.mul(&b.mul(&c));
        prop_assert!(l.agrees_with(&r));
    }

    #[test]
    fn multiplication_distributes(a in series(), b in series(), c in series()) {
        prop_assert!(a.mul(&b.add(&c)).agrees_with(&a.mul(&b).add(&a.mul(&c))));
    }

    #[test]
    fn inverse_is_exact_to_the_same_precision(a in unit_series()) {
        let inv = a.invert().unwrap();
        prop_assert_eq!(inv.prec(), a.prec());
        prop_assert_eq!(a.mul(&inv), PuiseuxSeries::one(a.prec()));
    }

    #[test]
    fn powers_add_exponents(a in unit_series(), m in -3i64..4, n in -3i64..4) {
        let lhs = a.pow(m + n).unwrap();
        let rhs = a.pow(m).unwrap().mul(&a.pow(n).unwrap());
        prop_assert!(lhs.agrees_with(&rhs));
    }

    #[test]
    fn dissection_undoes_substitution(a in integer_series(), m in 1i64..5) {
        let back = a.substitute_power(exp(m)).unwrap().dissect(m, 0).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn dissections_sum_back(a in integer_series(), m in 1i64..6) {
        let mut sum = PuiseuxSeries::zero(a.prec());
        for r in 0..m {
            sum = sum.add(&a.dissect(m, r).unwrap().substitute_power(exp(m)).unwrap().shift(exp(r)));
        }
        prop_assert!(sum.agrees_with(&a));
    }

    #[test]
    fn shifts_cancel(a in series(), n in -6i64..6, d in 1i64..5) {
        let e = Exponent::new(n, d);
        prop_assert_eq!(a.shift(e).shift(-e), a);
    }

    #[test]
    fn text_round_trip(a in series()) {
        prop_assert_eq!(PuiseuxSeries::from_text(&a.to_text()).unwrap(), a);
    }

    #[test]
    fn reduction_commutes_with_addition(a in integer_series(), b in integer_series(), m in 2u64..40) {
        let sum = a.add(&b).reduce_mod(m).unwrap();
        let prec = sum.prec();
        for n in 0..*prec.numer() {
            let e = exp(n);
            let ra = a.reduce_mod(m).unwrap().coefficient(e).unwrap();
            let rb = b.reduce_mod(m).unwrap().coefficient(e).unwrap();
            prop_assert_eq!(sum.coefficient(e).unwrap(), (ra + rb) % m);
        }
    }

    #[test]
    fn expressions_print_and_parse_back(e in expr()) {
        prop_assert_eq!(parse(&e.to_string()).unwrap(), e);
    }

    #[test]
    fn kronecker_is_multiplicative(d in prop::sample::select(vec![-8i64, -7, -4, -3, 5, 8, 12, 13, 17]), m in 1i64..200, n in 1i64..200) {
        prop_assert_eq!(kronecker(d, m * n), kronecker(d, m) * kronecker(d, n));
    }

    #[test]
    fn mobius_sums_to_indicator(n in 1u64..2000) {
        let s: i64 = divisors(n).into_iter().map(|d| mobius(d) as i64).sum();
        prop_assert_eq!(s, (n == 1) as i64);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn symbol_orders_divide_k_and_shifts_cycle(k in 1u32..5, n in 0u32..6) {
        let symbols = enumerate_symbols(k, n);
        prop_assert_eq!(BigInt::from(symbols.len()), cphi(k as usize, n as i64).unwrap());
        for s in &symbols {
            prop_assert_eq!(k % s.order(), 0);
            prop_assert_eq!(&s.color_shift(k), s);
            prop_assert_eq!(s.swap_rows().color_difference(), -s.color_difference());
            prop_assert_eq!(s.weight(), n as u64);
        }
    }

    #[test]
    fn refined_rows_sum_to_the_total(k in 1usize..5, n in 0u32..9) {
        let t = refined_cphi_ct(k, n).unwrap();
        prop_assert_eq!(BigInt::from(t.row_total(n)), cphi(k, n as i64).unwrap());
        for (m, c) in t.row(n) {
            prop_assert_eq!(t.get(-m, n), c);
        }
    }
}

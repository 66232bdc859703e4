//! Builders for eta quotients, Eisenstein and Lambert series, and partition
//! progressions, checked against each other.

use cphi::builders::{eisenstein, eta_quotient, lambert, partition_progression, pochhammer, EisensteinKind};
use cphi::engine::cphi_series;
use cphi::{exp, PuiseuxSeries};
use num_bigint::BigInt;
use num_rational::BigRational;

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn main() -> cphi::Result<()> {
    let prec = exp(60);

    // sum p(5j - 1) q^j = 5 q (q^5;q^5)^5 / (q;q)^6.
    let qq = |r: i64| pochhammer(exp(r), exp(r), false, prec);
    let lhs = partition_progression(5, 1, prec)?;
    let rhs = qq(5)?.pow(5)?.mul(&qq(1)?.pow(-6)?).shift(exp(1)).scalar_mul(&rat(5));
    assert!(lhs.agrees_with(&rhs));
    println!("p(5j-1) generating function matches the eta quotient to q^60");

    // CPhi_3 (q;q)^3 = 1 + 6 sum (j/3) q^j / (1 - q^j).
    let a3 = cphi_series(3, prec)?.mul(&qq(1)?.pow(3)?);
    let l = lambert(-3, 0, 0, prec)?;
    let rhs = PuiseuxSeries::one(prec).add(&l.scalar_mul(&rat(6)));
    assert!(a3.agrees_with(&rhs));
    println!("CPhi_3 (q;q)^3 matches the weight-one Lambert series");

    // eta quotients carry their q^(sum r e / 24) prefactor.
    let eta = eta_quotient(&[(5, 5), (1, -6)], prec)?;
    println!("eta(5 tau)^5 / eta(tau)^6 starts at q^{}", eta.valuation().unwrap());

    // E4 = 1 + 240 sum sigma_3(n) q^n.
    let e4 = eisenstein(EisensteinKind::E4, 1, exp(6))?;
    println!("E4 = {:?}", e4.int_coeffs(6)?);
    Ok(())
}

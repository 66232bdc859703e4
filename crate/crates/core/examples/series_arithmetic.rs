//! Exact truncated q-series: products, inverses, substitution and dissection,
//! with precision tracked through every operation.

use cphi::builders::{pochhammer, theta};
use cphi::{exp, Exponent, PuiseuxSeries};

fn main() -> cphi::Result<()> {
    let prec = exp(30);

    // Jacobi triple product: Theta_3(q) = (-q^(1/2); q)^2 (q; q) evaluated at q -> q^2.
    let t3 = theta(3, exp(1), prec)?;
    let minus = pochhammer(exp(1), exp(2), true, prec)?;
    let qq2 = pochhammer(exp(2), exp(2), false, prec)?;
    let product = minus.pow(2)?.mul(&qq2);
    assert!(t3.agrees_with(&product));
    println!("Theta_3 = {}", show(&t3, 12));

    // 1/(q;q) is the partition generating function.
    let qq = pochhammer(exp(1), exp(1), false, prec)?;
    let p = qq.invert()?;
    println!("1/(q;q) = {}", show(&p, 10));

    // Coefficients of q^(2n+1) in Theta_3, re-indexed by n.
    let odd = t3.dissect(2, 1)?;
    println!("dissect(Theta_3, 2, 1) = {}  (known below q^{})", show(&odd, 6), odd.prec());

    // Fractional exponents: Theta_2(q) starts at q^(1/4).
    let t2 = theta(2, exp(1), prec)?;
    println!("Theta_2 = {}", show(&t2, 4));

    // Multiplying by q^(-3) lowers the precision by 3.
    let shifted = p.shift(Exponent::from_integer(-3));
    println!("q^-3/(q;q) known below q^{}", shifted.prec());
    Ok(())
}

fn show(s: &PuiseuxSeries, terms: usize) -> String {
    let body: Vec<String> = s.terms().take(terms).map(|(e, c)| format!("{c}q^{e}")).collect();
    format!("{} + ...", body.join(" + "))
}

//! cphi_k(n) three ways: the constant-term programme, the lattice theta series,
//! and brute-force enumeration of symbols.

use cphi::engine::{cphi_series, frobenius_theta, ThetaMethod};
use cphi::frobenius::enumerate_symbols;
use cphi::exp;

fn main() -> cphi::Result<()> {
    let prec = exp(9);
    for k in 1..=4usize {
        let series = cphi_series(k, prec)?;
        let row: Vec<String> = series.int_coeffs(9)?.iter().map(|c| c.to_string()).collect();
        println!("CPhi_{k}: {}", row.join(" "));
        for n in 0..6u32 {
            let by_enumeration = enumerate_symbols(k as u32, n).len();
            assert_eq!(series.coefficient_int(n as i64)?, by_enumeration.into());
        }
    }

    // The numerator A_k = CPhi_k (q;q)^k is a lattice theta series; both
    // algorithms give the same coefficients.
    for k in 2..=5 {
        let ct = frobenius_theta(k, exp(40), ThetaMethod::ConstantTerm)?;
        let lattice = frobenius_theta(k, exp(40), ThetaMethod::Lattice)?;
        assert_eq!(ct, lattice);
        println!("A_{k} agrees to q^40 ({} nonzero terms)", ct.num_terms());
    }
    Ok(())
}

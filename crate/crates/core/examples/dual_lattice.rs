//! The dual theta series B_l and the leading coefficients of f_l.

use cphi::builders::{fgh_ell, Fgh};
use cphi::engine::{binary_qf_theta, dual_theta};
use cphi::exp;

fn main() -> cphi::Result<()> {
    for l in [5i64, 7, 11, 13] {
        let b = dual_theta(l, exp(l - 1))?;
        let f = fgh_ell(Fgh::F, l, exp(3))?;
        let terms: Vec<String> = b.terms().map(|(e, c)| format!("{c}q^{e}")).collect();
        println!("B_{l}: {}", terms.join(" + "));
        println!("f_{l}: {:?}", f.int_coeffs(3)?);
    }

    // Theta series of m^2 + mn + 2n^2.
    let q = binary_qf_theta(1, 1, 2, exp(12))?;
    println!("m^2+mn+2n^2: {:?}", q.int_coeffs(12)?);
    Ok(())
}

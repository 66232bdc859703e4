//! Scanning coefficients modulo M along arithmetic progressions.

use cphi::builders::{fgh_ell, nu, Fgh};
use cphi::engine::cphi_series;
use cphi::exp;

fn main() -> cphi::Result<()> {
    // cphi_2(5n+3) is divisible by 5.
    let c2 = cphi_series(2, exp(301))?.reduce_mod(5)?;
    println!("cphi_2(5n+3) mod 5, first nonzero: {:?}", c2.first_nonzero_on_progression(5, 3, 300)?);
    println!("cphi_2(5n+1) mod 5, first nonzero: {:?}", c2.first_nonzero_on_progression(5, 1, 300)?);

    // h_l vanishes modulo nu_l = l^2 - l p(l - delta_l).
    for l in [17, 19, 23] {
        let m: u64 = nu(l).try_into().expect("small modulus");
        let h = fgh_ell(Fgh::H, l, exp(150))?.reduce_mod(m)?;
        println!("h_{l} mod {m}: {}", if h.is_zero() { "zero below q^150" } else { "nonzero" });
    }
    Ok(())
}

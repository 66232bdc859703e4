//! Listing colored Frobenius symbols, their order under the color shift, and
//! the counts refined by color difference.

use cphi::engine::{cphi, refined_cphi_ct};
use cphi::frobenius::{enumerate_symbols, overline_via_mobius, refined_counts};

fn main() -> cphi::Result<()> {
    println!("2-colored symbols of weight 2:");
    for s in enumerate_symbols(2, 2) {
        println!("  {s}  order {}  color difference {}", s.order(), s.color_difference());
    }

    let rc = refined_counts(3, 4);
    println!("k=3, n=4: total {}, by difference {:?}", rc.total, rc.by_difference);
    println!("           by order {:?}, classes mod 3 {:?}", rc.by_order, rc.classes);

    // The same refinement from the two-variable constant term.
    let table = refined_cphi_ct(3, 4)?;
    assert_eq!(table.row(4), rc.by_difference.iter().map(|(m, c)| (*m, *c)).collect::<Vec<_>>());

    // Symbols of full order k, counted by Mobius inversion over the divisors of k.
    for k in [4u64, 6, 9] {
        let n = 5;
        let full = overline_via_mobius(k, n, |j, m| cphi(j as usize, m))?;
        let direct = refined_counts(k as u32, n as u32).overline;
        assert_eq!(full, direct.into());
        println!("k={k}, n={n}: {full} symbols of full order, {} mod k^2", &full % (k * k));
    }
    Ok(())
}

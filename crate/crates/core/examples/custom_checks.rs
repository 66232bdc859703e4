//! Writing checks of your own in the registry language and running them.

use cphi::harness::report;
use cphi::harness::{Registry, RunConfig, Runner};

const CHECKS: &str = r#"
; Euler's pentagonal theorem, one side written as a sum.
(identity EULER "pentagonal number theorem"
  (qq 1)
  (sum j -12 12 (* (^ -1 j) (q (/ (* j (- (* 3 j) 1)) 2)))))

(def P (/ 1 (qq 1)))

(congruence RAMA-7 "p(7n+5) vanishes mod 7"
  (series P) (modulus 7) (progression 7 5))

(congruence RAMA-11 "p(11n+6) vanishes mod 11"
  (series P) (modulus 11) (progression 11 6))

; Not true: p(2n) is not always even.
(congruence EVEN "a false claim, to show a failure report"
  (series P) (modulus 2) (progression 2 0))
"#;

fn main() -> cphi::Result<()> {
    let runner = Runner::new(
        Registry::parse(CHECKS)?,
        RunConfig {
            prec: 150,
            n_max: 300,
            ..RunConfig::default()
        },
    );
    let results = runner.run_all()?;
    print!("{}", report::to_text(&results));
    print!("{}", report::to_csv(&results)?);
    Ok(())
}

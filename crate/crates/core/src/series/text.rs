//! Plain-text record format:
//!
//! ```text
//! scale 24 prec 120/1 lo -3
//! -3 1/1
//! 21 -5/2
//! ```

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{Exponent, PuiseuxSeries};
use crate::error::{Error, Result};

pub(super) fn to_text(s: &PuiseuxSeries) -> String {
    let p = s.prec();
    let mut out = format!("scale {} prec {}/{} lo {}\n", s.scale(), p.numer(), p.denom(), s.lo());
    for (i, c) in s.raw_terms() {
        out.push_str(&format!("{} {}/{}\n", i, c.numer(), c.denom()));
    }
    out
}

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn parse_ratio_big(tok: &str) -> Result<BigRational> {
    let (n, d) = tok.split_once('/').unwrap_or((tok, "1"));
    let n: BigInt = n.parse().map_err(|_| parse_err(format!("bad numerator `{n}`")))?;
    let d: BigInt = d.parse().map_err(|_| parse_err(format!("bad denominator `{d}`")))?;
    if d == BigInt::from(0) {
        return Err(parse_err("zero denominator"));
    }
    Ok(BigRational::new(n, d))
}

fn parse_ratio_small(tok: &str) -> Result<Exponent> {
    let (n, d) = tok.split_once('/').unwrap_or((tok, "1"));
    let n: i64 = n.parse().map_err(|_| parse_err(format!("bad numerator `{n}`")))?;
    let d: i64 = d.parse().map_err(|_| parse_err(format!("bad denominator `{d}`")))?;
    if d == 0 {
        return Err(parse_err("zero denominator"));
    }
    Ok(Exponent::new(n, d))
}

pub(super) fn from_text(text: &str) -> Result<PuiseuxSeries> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| parse_err("empty series record"))?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() != 6 || toks[0] != "scale" || toks[2] != "prec" || toks[4] != "lo" {
        return Err(parse_err(format!("bad header `{header}`")));
    }
    let scale: i64 = toks[1].parse().map_err(|_| parse_err("bad scale"))?;
    let prec = parse_ratio_small(toks[3])?;
    let lo: i64 = toks[5].parse().map_err(|_| parse_err("bad lo"))?;
    let mut terms = Vec::new();
    for line in lines {
        let (i, c) = line
            .trim()
            .split_once(' ')
            .ok_or_else(|| parse_err(format!("bad term line `{line}`")))?;
        let i: i64 = i.parse().map_err(|_| parse_err(format!("bad index `{i}`")))?;
        if i < lo {
            return Err(parse_err(format!("index {i} below declared lo {lo}")));
        }
        terms.push((i, parse_ratio_big(c.trim())?));
    }
    let s = PuiseuxSeries::new(scale, prec, terms)?;
    if s.scale() != scale {
        return Err(parse_err("record is not in normalized form"));
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let s = PuiseuxSeries::new(
            4,
            Exponent::new(41, 4),
            vec![(-3, BigRational::new(5.into(), 2.into())), (1, BigRational::new((-7).into(), 1.into()))],
        )
        .unwrap();
        let t = s.to_text();
        assert!(t.starts_with("scale 4 prec 41/4 lo -3\n"));
        assert_eq!(PuiseuxSeries::from_text(&t).unwrap(), s);
    }

    #[test]
    fn rejects_garbage() {
        assert!(PuiseuxSeries::from_text("scale x").is_err());
        assert!(PuiseuxSeries::from_text("scale 1 prec 3/1 lo 0\n0 1/0\n").is_err());
    }
}

//! Parenthesized prefix expressions: `(+ (qq 5) (* 25 (q 1)))`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Num(BigRational),
    Sym(String),
    Str(String),
    List(Vec<Expr>),
}

impl Expr {
    pub fn list(&self) -> Option<&[Expr]> {
        match self {
            Expr::List(v) => Some(v),
            _ => None,
        }
    }

    pub fn sym(&self) -> Option<&str> {
        match self {
            Expr::Sym(s) => Some(s),
            _ => None,
        }
    }

    pub fn head(&self) -> Option<&str> {
        self.list().and_then(|v| v.first()).and_then(Expr::sym)
    }

    /// Add one to the first numeric literal that is neither an operator
    /// argument of `^` nor a builder parameter, i.e. the first free coefficient.
    /// Returns false when there is none.
    pub fn perturb_first_coefficient(&mut self) -> bool {
        fn walk(e: &mut Expr, in_coefficient_position: bool) -> bool {
            match e {
                Expr::Num(n) if in_coefficient_position => {
                    *n += BigRational::one();
                    true
                }
                Expr::List(items) => {
                    let arith = matches!(items.first().and_then(Expr::sym), Some("+" | "-" | "*" | "/"));
                    items.iter_mut().skip(1).any(|child| walk(child, arith))
                }
                _ => false,
            }
        }
        walk(self, false)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(n) if n.is_integer() => write!(f, "{}", n.numer()),
            Expr::Num(n) => write!(f, "{}/{}", n.numer(), n.denom()),
            Expr::Sym(s) => write!(f, "{s}"),
            Expr::Str(s) => write!(f, "{s:?}"),
            Expr::List(items) => {
                write!(f, "(")?;
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "{item}")?;
                }
                write!(f, ")")
            }
        }
    }
}

#[derive(Debug, PartialEq)]
enum Token {
    Open,
    Close,
    Atom(String),
    Str(String),
}

fn tokenize(src: &str) -> Result<Vec<(Token, usize)>> {
    let mut out = Vec::new();
    let mut chars = src.char_indices().peekable();
    let mut line = 1;
    while let Some(&(_, c)) = chars.peek() {
        match c {
            '\n' => {
                line += 1;
                chars.next();
            }
            c if c.is_whitespace() => {
                chars.next();
            }
            ';' => {
                while chars.peek().is_some_and(|&(_, c)| c != '\n') {
                    chars.next();
                }
            }
            '(' => {
                out.push((Token::Open, line));
                chars.next();
            }
            ')' => {
                out.push((Token::Close, line));
                chars.next();
            }
            '"' => {
                chars.next();
                let mut s = String::new();
                loop {
                    match chars.next() {
                        Some((_, '"')) => break,
                        Some((_, '\n')) => {
                            line += 1;
                            s.push('\n');
                        }
                        Some((_, c)) => s.push(c),
                        None => return Err(Error::Parse(format!("line {line}: unterminated string"))),
                    }
                }
                out.push((Token::Str(s), line));
            }
            _ => {
                let mut s = String::new();
                while let Some(&(_, c)) = chars.peek() {
                    if c.is_whitespace() || c == '(' || c == ')' || c == ';' || c == '"' {
                        break;
                    }
                    s.push(c);
                    chars.next();
                }
                out.push((Token::Atom(s), line));
            }
        }
    }
    Ok(out)
}

fn parse_number(tok: &str) -> Option<BigRational> {
    let first = tok.chars().next()?;
    if !(first.is_ascii_digit() || (first == '-' && tok.len() > 1 && tok[1..].starts_with(|c: char| c.is_ascii_digit()))) {
        return None;
    }
    let (n, d) = tok.split_once('/').unwrap_or((tok, "1"));
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(BigRational::new(n, d))
}

/// Parse every top-level expression in `src`.
pub fn parse_all(src: &str) -> Result<Vec<Expr>> {
    let tokens = tokenize(src)?;
    let mut stack: Vec<Vec<Expr>> = vec![Vec::new()];
    let mut open_lines = Vec::new();
    for (tok, line) in tokens {
        match tok {
            Token::Open => {
                stack.push(Vec::new());
                open_lines.push(line);
            }
            Token::Close => {
                if stack.len() == 1 {
                    return Err(Error::Parse(format!("line {line}: unbalanced `)`")));
                }
                let done = stack.pop().unwrap();
                open_lines.pop();
                stack.last_mut().unwrap().push(Expr::List(done));
            }
            Token::Atom(a) => {
                let e = parse_number(&a).map(Expr::Num).unwrap_or(Expr::Sym(a));
                stack.last_mut().unwrap().push(e);
            }
            Token::Str(s) => stack.last_mut().unwrap().push(Expr::Str(s)),
        }
    }
    if stack.len() != 1 {
        return Err(Error::Parse(format!("unclosed `(` opened on line {}", open_lines.last().unwrap())));
    }
    Ok(stack.pop().unwrap())
}

/// Parse exactly one expression.
pub fn parse(src: &str) -> Result<Expr> {
    let mut all = parse_all(src)?;
    if all.len() != 1 {
        return Err(Error::Parse(format!("expected one expression, found {}", all.len())));
    }
    Ok(all.pop().unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let src = "(+ (/ 1 (qq 5)) (* 25 (q 1) (^ (qq 5) 5) (^ (qq 1) -6)) -3/4)";
        let e = parse(src).unwrap();
        assert_eq!(e.to_string(), src);
        assert_eq!(e.head(), Some("+"));
    }

    #[test]
    fn comments_and_strings() {
        let all = parse_all("; header\n(def S \"a note\") ; trailing\n(x)").unwrap();
        assert_eq!(all.len(), 2);
        assert_eq!(all[0].list().unwrap()[2], Expr::Str("a note".into()));
    }

    #[test]
    fn errors() {
        assert!(parse("(a").is_err());
        assert!(parse("a)").is_err());
        assert!(parse("\"open").is_err());
        assert_eq!(parse("-").unwrap(), Expr::Sym("-".into()));
    }

    #[test]
    fn perturbation_skips_builder_arguments() {
        let mut e = parse("(+ (qq 5) (* 25 (q 1)))").unwrap();
        assert!(e.perturb_first_coefficient());
        assert_eq!(e.to_string(), "(+ (qq 5) (* 26 (q 1)))");
        let mut plain = parse("(qq 5)").unwrap();
        assert!(!plain.perturb_first_coefficient());
    }
}

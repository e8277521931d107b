//! Polynomial expression input format.
//!
//! ```text
//! expression  := sign? term (('+' | '-') term)*
//! term        := coefficient? ('*'? 'z' ('^' integer)?)?      -- at least one part present
//! coefficient := integer | decimal | integer '/' integer
//! integer     := [0-9]+
//! decimal     := [0-9]+ '.' [0-9]* | '.' [0-9]+
//! ```
//!
//! Whitespace between tokens is ignored. Decimals are read as exact
//! rationals (`0.01` is `1/100`). Exponents above 10^6 are rejected.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::SparsePolynomial;
use crate::rational::Rat;

pub const MAX_EXPONENT: u64 = 1_000_000;

/// Source text together with the polynomial it denotes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyExpression {
    pub source_text: String,
    pub parsed: SparsePolynomial,
}

impl std::str::FromStr for PolyExpression {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(Self {
            source_text: s.to_string(),
            parsed: parse(s)?,
        })
    }
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn error(&mut self, expected: &str) -> Error {
        self.skip_ws();
        let found = match self.src.get(self.pos) {
            None => "end of input".to_string(),
            Some(&b) if b.is_ascii_graphic() => format!("'{}'", b as char),
            Some(&b) => format!("byte 0x{b:02x}"),
        };
        Error::Parse {
            position: self.pos,
            expected: expected.to_string(),
            found,
        }
    }

    fn digits(&mut self) -> &'a [u8] {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        &self.src[start..self.pos]
    }
}

fn bigint_from_digits(d: &[u8]) -> BigInt {
    BigInt::parse_bytes(d, 10).unwrap_or_else(BigInt::zero)
}

/// Parses the textual form into an exact polynomial.
pub fn parse(text: &str) -> Result<SparsePolynomial> {
    let mut lx = Lexer {
        src: text.as_bytes(),
        pos: 0,
    };
    let mut terms: Vec<(i64, Rat)> = Vec::new();
    let mut sign = Rat::one();
    match lx.peek() {
        Some(b'-') => {
            sign = -sign;
            lx.pos += 1;
        }
        Some(b'+') => lx.pos += 1,
        _ => {}
    }
    loop {
        let (exp, coeff) = parse_term(&mut lx)?;
        terms.push((exp as i64, sign * coeff));
        match lx.peek() {
            None => break,
            Some(b'+') => {
                lx.pos += 1;
                sign = Rat::one();
            }
            Some(b'-') => {
                lx.pos += 1;
                sign = -Rat::one();
            }
            Some(_) => return Err(lx.error("'+', '-' or end of input")),
        }
    }
    SparsePolynomial::from_term_list(terms)
}

fn parse_term(lx: &mut Lexer<'_>) -> Result<(u64, Rat)> {
    let coeff = parse_coefficient(lx)?;
    let has_coeff = coeff.is_some();
    let mut star = false;
    if has_coeff && lx.peek() == Some(b'*') {
        lx.pos += 1;
        star = true;
    }
    if matches!(lx.peek(), Some(b'z') | Some(b'Z')) {
        lx.pos += 1;
        let exp = if lx.peek() == Some(b'^') {
            lx.pos += 1;
            lx.skip_ws();
            let start = lx.pos;
            let d = lx.digits();
            if d.is_empty() {
                return Err(lx.error("exponent digits"));
            }
            let trimmed: &[u8] = {
                let nz = d.iter().position(|&b| b != b'0').unwrap_or(d.len());
                &d[nz..]
            };
            if trimmed.len() > 7 {
                return Err(Error::Parse {
                    position: start,
                    expected: format!("exponent <= {MAX_EXPONENT}"),
                    found: String::from_utf8_lossy(d).into_owned(),
                });
            }
            let v: u64 = std::str::from_utf8(trimmed)
                .ok()
                .filter(|s| !s.is_empty())
                .map(|s| s.parse().unwrap())
                .unwrap_or(0);
            if v > MAX_EXPONENT {
                return Err(Error::Parse {
                    position: start,
                    expected: format!("exponent <= {MAX_EXPONENT}"),
                    found: v.to_string(),
                });
            }
            v
        } else {
            1
        };
        Ok((exp, coeff.unwrap_or_else(Rat::one)))
    } else if star {
        Err(lx.error("'z'"))
    } else if let Some(c) = coeff {
        Ok((0, c))
    } else {
        Err(lx.error("coefficient or 'z'"))
    }
}

fn parse_coefficient(lx: &mut Lexer<'_>) -> Result<Option<Rat>> {
    match lx.peek() {
        Some(b) if b.is_ascii_digit() || b == b'.' => {}
        _ => return Ok(None),
    }
    let int_part = lx.digits();
    let mut value = Rat::from_integer(bigint_from_digits(int_part));
    if lx.src.get(lx.pos) == Some(&b'.') {
        lx.pos += 1;
        let frac = lx.digits();
        if int_part.is_empty() && frac.is_empty() {
            return Err(lx.error("digits around '.'"));
        }
        if !frac.is_empty() {
            let scale = num_traits::pow(BigInt::from(10), frac.len());
            value += Rat::new(bigint_from_digits(frac), scale);
        }
        return Ok(Some(value));
    }
    if lx.peek() == Some(b'/') {
        lx.pos += 1;
        lx.skip_ws();
        let den = lx.digits();
        if den.is_empty() {
            return Err(lx.error("denominator digits"));
        }
        let den = bigint_from_digits(den);
        if den.is_zero() {
            return Err(Error::Parse {
                position: lx.pos - 1,
                expected: "nonzero denominator".into(),
                found: "0".into(),
            });
        }
        value /= Rat::from_integer(den);
    }
    Ok(Some(value))
}

fn format_coeff(c: &Rat) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Canonical ascending-exponent rendering, e.g. `1 - 1/100z^5`.
pub fn format(f: &SparsePolynomial) -> String {
    if f.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (e, c)) in f.terms().enumerate() {
        let neg = c.is_negative();
        let abs = c.abs();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let var = match e {
            0 => String::new(),
            1 => "z".into(),
            _ => format!("z^{e}"),
        };
        if e == 0 {
            out.push_str(&format_coeff(&abs));
        } else if abs.is_one() {
            out.push_str(&var);
        } else {
            out.push_str(&format_coeff(&abs));
            out.push_str(&var);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;
    use proptest::prelude::*;

    #[test]
    fn parses_the_counterexample_family() {
        let f = parse("1 + z^3 + z^4 - 0.01z^5 + z^6 + z^7 + z^10").unwrap();
        let expected = SparsePolynomial::from_term_list(vec![
            (0, rat(1, 1)),
            (3, rat(1, 1)),
            (4, rat(1, 1)),
            (5, rat(-1, 100)),
            (6, rat(1, 1)),
            (7, rat(1, 1)),
            (10, rat(1, 1)),
        ])
        .unwrap();
        assert_eq!(f, expected);
    }

    #[test]
    fn small_forms() {
        assert_eq!(
            parse("z").unwrap(),
            SparsePolynomial::from_int_terms(&[(1, 1)])
        );
        let f = parse("3/2 z^2 - z").unwrap();
        assert_eq!(f.coeff(2), rat(3, 2));
        assert_eq!(f.coeff(1), rat(-1, 1));
        assert_eq!(f.num_terms(), 2);
        assert_eq!(
            parse("z^2 - z + 1").unwrap(),
            SparsePolynomial::from_int_terms(&[(0, 1), (1, -1), (2, 1)])
        );
        assert_eq!(
            parse("-1 + 2*z").unwrap(),
            SparsePolynomial::from_int_terms(&[(0, -1), (1, 2)])
        );
        assert_eq!(parse(".5z").unwrap().coeff(1), rat(1, 2));
        assert!(parse("1 - 1").unwrap().is_zero());
    }

    #[test]
    fn errors_carry_positions() {
        match parse("1 + + z") {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 4),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse(""), Err(Error::Parse { .. })));
        assert!(matches!(parse("z^"), Err(Error::Parse { .. })));
        assert!(matches!(parse("z^1000001"), Err(Error::Parse { .. })));
        assert!(parse("z^1000000").is_ok());
        assert!(matches!(parse("1/0"), Err(Error::Parse { .. })));
        assert!(matches!(parse("2 z z"), Err(Error::Parse { .. })));
        assert!(matches!(parse("x"), Err(Error::Parse { .. })));
    }

    #[test]
    fn formatting() {
        let f = SparsePolynomial::from_term_list(vec![(0, rat(1, 1)), (5, rat(-1, 100))]).unwrap();
        assert_eq!(format(&f), "1 - 1/100z^5");
        assert_eq!(format(&SparsePolynomial::zero()), "0");
        assert_eq!(
            format(&SparsePolynomial::from_int_terms(&[(1, -1), (2, 3)])),
            "-z + 3z^2"
        );
    }

    fn arb_poly() -> impl Strategy<Value = SparsePolynomial> {
        prop::collection::vec((0i64..=20, -1000i64..=1000, 1i64..=97), 0..21).prop_map(|v| {
            SparsePolynomial::from_term_list(v.into_iter().map(|(e, n, d)| (e, rat(n, d)))).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn round_trip(f in arb_poly()) {
            prop_assert_eq!(parse(&format(&f)).unwrap(), f);
        }

        #[test]
        fn never_panics_on_bytes(bytes in prop::collection::vec(any::<u8>(), 0..64)) {
            let s = String::from_utf8_lossy(&bytes);
            let _ = parse(&s);
        }

        #[test]
        fn never_panics_on_grammar_soup(s in "[0-9z^+\\-/. *]{0,40}") {
            let _ = parse(&s);
        }
    }
}

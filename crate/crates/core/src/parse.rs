//! Text syntax for series, presentations and expansions.
//!
//! ```text
//! series        1 + 3b^2 - 1/2b^5
//! presentation  fresco: (5/2 | 1 + 3b^2) (7/2 | 1)
//! expansion     xi: s^(3/2) * log^2 * [1 + 2s] @ v1 - 1/3 s^(1/2) @ v2
//! ```

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::fresco::Presentation;
use crate::rat::Rat;
use crate::series::SeriesB;
use crate::xi::{expansion_from_exponents, XiExpansion};

/// One `(component, exponent of s, log power, coefficient)` term of an expansion literal.
pub type XiTerm = (usize, Rat, usize, Rat);

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor { text, pos: 0 }
    }

    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn location(&self, pos: usize) -> (usize, usize) {
        let before = &self.text[..pos];
        let line = before.matches('\n').count() + 1;
        let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        (line, column)
    }

    fn error_at(&self, pos: usize, message: impl Into<String>) -> Error {
        let (line, column) = self.location(pos);
        Error::Syntax {
            line,
            column,
            message: message.into(),
        }
    }

    fn error(&self, message: impl Into<String>) -> Error {
        self.error_at(self.pos, message)
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.text.len() - trimmed.len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected '{c}'")))
        }
    }

    fn eat_word(&mut self, word: &str) -> bool {
        self.skip_ws();
        let rest = self.rest();
        if rest.len() >= word.len() && rest[..word.len()].eq_ignore_ascii_case(word) {
            self.pos += word.len();
            true
        } else {
            false
        }
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn digits(&mut self) -> Option<BigInt> {
        self.skip_ws();
        let len = self.rest().chars().take_while(char::is_ascii_digit).count();
        if len == 0 {
            return None;
        }
        let n = self.rest()[..len].parse().expect("ascii digits");
        self.pos += len;
        Some(n)
    }

    fn natural(&mut self) -> Result<usize> {
        let start = self.pos;
        let n = self
            .digits()
            .ok_or_else(|| self.error("expected a nonnegative integer"))?;
        usize::try_from(n).map_err(|_| self.error_at(start, "integer too large"))
    }

    /// Unsigned `p` or `p/q`.
    fn unsigned_rat(&mut self) -> Result<Option<Rat>> {
        let Some(num) = self.digits() else {
            return Ok(None);
        };
        let save = self.pos;
        if self.eat('/') {
            let at = self.pos;
            let Some(den) = self.digits() else {
                self.pos = save;
                return Ok(Some(Rat::from_integer(num)));
            };
            if den.is_zero() {
                return Err(self.error_at(at, "zero denominator"));
            }
            return Ok(Some(Rat::new(num, den)));
        }
        Ok(Some(Rat::from_integer(num)))
    }

    fn signed_rat(&mut self) -> Result<Rat> {
        let negative = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        let r = self
            .unsigned_rat()?
            .ok_or_else(|| self.error("expected a rational number"))?;
        Ok(if negative { -r } else { r })
    }

    /// Sparse polynomial `sum c_e var^e`; returns `(exponent, coefficient)` pairs.
    fn polynomial(&mut self, var: char) -> Result<Vec<(usize, Rat)>> {
        let mut terms = Vec::new();
        let mut first = true;
        loop {
            let negative = if self.eat('-') {
                true
            } else if self.eat('+') || first {
                false
            } else {
                break;
            };
            first = false;
            let start = self.pos;
            let coeff = self.unsigned_rat()?;
            if coeff.is_some() {
                self.eat('*');
            }
            let exponent = if self.eat(var) {
                if self.eat('^') {
                    self.natural()?
                } else {
                    1
                }
            } else if coeff.is_some() {
                0
            } else {
                return Err(self.error_at(start, format!("expected a term in {var}")));
            };
            let c = coeff.unwrap_or_else(Rat::one);
            terms.push((exponent, if negative { -c } else { c }));
        }
        Ok(terms)
    }
}

fn series_from_terms(terms: &[(usize, Rat)], order: usize) -> Option<SeriesB> {
    let mut coeffs = vec![Rat::zero(); order + 1];
    for (e, c) in terms {
        *coeffs.get_mut(*e)? += c;
    }
    Some(SeriesB::from_known(coeffs))
}

/// Parses a series literal in `b` known to `order`.
pub fn parse_series(text: &str, order: usize) -> Result<SeriesB> {
    let mut cur = Cursor::new(text);
    let terms = cur.polynomial('b')?;
    if !cur.at_end() {
        return Err(cur.error("unexpected input after series"));
    }
    series_from_terms(&terms, order)
        .ok_or_else(|| cur.error_at(0, format!("term beyond truncation order {order}")))
}

struct RawFactor {
    lambda: Rat,
    unit: Vec<(usize, Rat)>,
    at: usize,
}

/// Parses `fresco: (lambda | S) ...`. Without an explicit order the working
/// order of the presentation is used, widened to fit every literal term.
pub fn parse_presentation(text: &str, order: Option<usize>) -> Result<Presentation> {
    let mut cur = Cursor::new(text);
    if !cur.eat_word("fresco") {
        return Err(cur.error("expected 'fresco:'"));
    }
    cur.expect(':')?;
    let mut raw = Vec::new();
    while cur.peek() == Some('(') {
        let at = cur.pos;
        cur.expect('(')?;
        let lambda = cur.signed_rat()?;
        cur.expect('|')?;
        let unit = cur.polynomial('b')?;
        cur.expect(')')?;
        raw.push(RawFactor { lambda, unit, at });
    }
    if !cur.at_end() {
        return Err(cur.error("expected '(' or end of input"));
    }
    if raw.is_empty() {
        return Err(cur.error("presentation has no factors"));
    }
    let order = match order {
        Some(n) => n,
        None => {
            let lambdas: Vec<Rat> = raw.iter().map(|f| f.lambda.clone()).collect();
            let base = Presentation::trivial(&lambdas, 0)
                .map(|p| p.default_order())
                .unwrap_or(crate::series::DEFAULT_ORDER);
            let top = raw
                .iter()
                .flat_map(|f| f.unit.iter().map(|t| t.0))
                .max()
                .unwrap_or(0);
            base.max(top)
        }
    };
    let mut factors = Vec::with_capacity(raw.len());
    for f in &raw {
        let s = series_from_terms(&f.unit, order)
            .ok_or_else(|| cur.error_at(f.at, format!("term beyond truncation order {order}")))?;
        factors.push((f.lambda.clone(), s));
    }
    Presentation::new(factors)
}

/// Parses an expansion literal into terms with explicit exponents.
pub fn parse_xi_terms(text: &str) -> Result<Vec<XiTerm>> {
    let mut cur = Cursor::new(text);
    if cur.eat_word("xi") {
        cur.expect(':')?;
    }
    let mut out = Vec::new();
    let mut first = true;
    loop {
        let negative = if cur.eat('-') {
            true
        } else if cur.eat('+') || first {
            false
        } else {
            break;
        };
        first = false;
        let mut coeff = Rat::one();
        let mut exponent = Rat::zero();
        let mut log = 0usize;
        let mut series = vec![(0usize, Rat::one())];
        let mut factors = 0;
        loop {
            let start = cur.pos;
            if let Some(c) = cur.unsigned_rat()? {
                coeff *= c;
            } else if cur.eat_word("log") {
                log += if cur.eat('^') { cur.natural()? } else { 1 };
            } else if cur.eat('s') {
                if cur.eat('^') {
                    if cur.eat('(') {
                        exponent += cur.signed_rat()?;
                        cur.expect(')')?;
                    } else {
                        exponent += cur.signed_rat()?;
                    }
                } else {
                    exponent += Rat::one();
                }
            } else if cur.eat('[') {
                let poly = cur.polynomial('s')?;
                cur.expect(']')?;
                let mut product = Vec::new();
                for (e1, c1) in &series {
                    for (e2, c2) in &poly {
                        product.push((e1 + e2, c1 * c2));
                    }
                }
                series = product;
            } else if factors == 0 {
                return Err(cur.error_at(start, "expected a term"));
            } else {
                return Err(cur.error_at(start, "expected a factor after '*'"));
            }
            factors += 1;
            let save = cur.pos;
            if cur.eat('*') {
                continue;
            }
            // juxtaposition such as `2 s^(1/2)` or `1/2 log`
            match cur.peek() {
                Some('s' | 'l' | 'L' | '[') => continue,
                _ => cur.pos = save,
            }
            break;
        }
        let component = if cur.eat('@') {
            if !cur.eat('v') {
                return Err(cur.error("expected a component such as v1"));
            }
            let at = cur.pos;
            let n = cur.natural()?;
            if n == 0 {
                return Err(cur.error_at(at, "components are numbered from 1"));
            }
            n
        } else {
            1
        };
        if negative {
            coeff = -coeff;
        }
        for (e, c) in series {
            let c = &coeff * c;
            if !c.is_zero() {
                out.push((component, &exponent + Rat::from_integer(e.into()), log, c));
            }
        }
    }
    if !cur.at_end() {
        return Err(cur.error("unexpected input after expansion"));
    }
    if out.is_empty() {
        return Err(cur.error_at(0, "expansion has no nonzero terms"));
    }
    Ok(out)
}

/// Parses an expansion literal and lays it out with `shifts` powers of `s`.
pub fn parse_xi(text: &str, shifts: usize) -> Result<XiExpansion> {
    expansion_from_exponents(&parse_xi_terms(text)?, shifts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, rat};

    #[test]
    fn series_literals() {
        let s = parse_series("1 + 3b^2 - 1/2b^5", 8).unwrap();
        assert_eq!(s.to_string(), "1 + 3b^2 - 1/2b^5");
        assert_eq!(s.order(), 8);
        assert_eq!(parse_series("-b", 3).unwrap().to_string(), "-b");
        assert_eq!(parse_series("2 * b + b", 3).unwrap().to_string(), "3b");
        assert!(matches!(
            parse_series("1 + b^9", 4),
            Err(Error::Syntax { .. })
        ));
    }

    #[test]
    fn presentation_literal() {
        let p = parse_presentation("fresco: (5/2 | 1 + 3b^2) (7/2 | 1)", Some(16)).unwrap();
        assert_eq!(p.rank(), 2);
        assert_eq!(p.lambdas(), vec![rat(5, 2), rat(7, 2)]);
        assert_eq!(p.unit(1).coeffs()[2], int(3));
        assert_eq!(p.order(), 16);
        assert_eq!(p.to_string(), "fresco: (5/2 | 1 + 3b^2) (7/2 | 1)");
        let q = parse_presentation(&p.to_string(), Some(16)).unwrap();
        assert_eq!(p, q);
        let d = parse_presentation("fresco: (+3/2 | 1 - b)", None).unwrap();
        assert_eq!(d.lambda(1), &rat(3, 2));
        assert_eq!(d.order(), 64);
    }

    #[test]
    fn semantic_errors() {
        assert!(matches!(
            parse_presentation("fresco: (1/2 | 1) (1/2 | 1)", None),
            Err(Error::NotGeometric { .. })
        ));
        assert!(matches!(
            parse_presentation("fresco: (5/2 | 2 + b)", None),
            Err(Error::NonUnitSeries { index: 1, .. })
        ));
    }

    #[test]
    fn syntax_error_location() {
        let err = parse_presentation("fresco: (5/2 | 1 + 3b^2)\n (7/2 1)", None).unwrap_err();
        assert_eq!(
            err,
            Error::Syntax {
                line: 2,
                column: 7,
                message: "expected '|'".into()
            }
        );
        assert!(matches!(
            parse_presentation("frisco: (1 | 1)", None),
            Err(Error::Syntax {
                line: 1,
                column: 1,
                ..
            })
        ));
    }

    #[test]
    fn expansion_literal() {
        let terms = parse_xi_terms("s^(3/2) * log^2 * [1 + 2s] @ v1 - 1/3 s^(1/2) @ v2").unwrap();
        assert_eq!(
            terms,
            vec![
                (1, rat(3, 2), 2, int(1)),
                (1, rat(5, 2), 2, int(2)),
                (2, rat(1, 2), 0, rat(-1, 3)),
            ]
        );
        let x = parse_xi("xi: s^(-1/2) Log", 10).unwrap();
        assert_eq!(x.lambda(), &rat(1, 2));
        assert_eq!(x.terms(), vec![(1, 0, 1, int(1))]);
        assert!(parse_xi_terms("s^(1/2) @ w1").is_err());
        assert!(parse_xi_terms("").is_err());
    }
}

//! Exact arithmetic over Q and real quadratic fields Q(sqrt(d)).
//!
//! Every real parameter of a domain (exponents, log-radii, ratios) is a
//! [`QuadExt`]: a value `x0 + x1*sqrt(d)` with rational `x0`, `x1` and a
//! squarefree radicand `d >= 2`, or a plain rational when `d == 0`.
//! Values are kept canonical so that equality of values is equality of
//! representations.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("incompatible radicands: {0} vs {1}")]
    IncompatibleRadicands(u64, u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("radicand {0} is not a squarefree integer >= 2")]
    NonSquarefreeRadicand(u64),
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
}

/// An element `x0 + x1*sqrt(d)` of Q or Q(sqrt(d)).
///
/// Canonical form: fractions in lowest terms with positive denominator
/// (enforced by `BigRational`), and `d == 0` whenever `x1 == 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadExt {
    x0: BigRational,
    x1: BigRational,
    d: u64,
}

pub fn is_squarefree(d: u64) -> bool {
    if d < 2 {
        return false;
    }
    let mut n = d;
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return false;
            }
        }
        p += 1;
    }
    true
}

impl QuadExt {
    pub fn new(x0: BigRational, x1: BigRational, d: u64) -> Result<Self, FieldError> {
        if x1.is_zero() {
            return Ok(QuadExt { x0, x1, d: 0 });
        }
        if !is_squarefree(d) {
            return Err(FieldError::NonSquarefreeRadicand(d));
        }
        Ok(QuadExt { x0, x1, d })
    }

    pub fn rational(x0: BigRational) -> Self {
        QuadExt { x0, x1: BigRational::zero(), d: 0 }
    }

    pub fn from_int(n: i64) -> Self {
        Self::rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_frac(num: i64, den: i64) -> Self {
        Self::rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// `sqrt(d)` itself.
    pub fn sqrt(d: u64) -> Result<Self, FieldError> {
        Self::new(BigRational::zero(), BigRational::one(), d)
    }

    /// `(a + b*sqrt(d))` from integer coordinates.
    pub fn with_sqrt(a: i64, b: i64, d: u64) -> Result<Self, FieldError> {
        Self::new(
            BigRational::from_integer(BigInt::from(a)),
            BigRational::from_integer(BigInt::from(b)),
            d,
        )
    }

    pub fn zero() -> Self {
        Self::rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Self::rational(BigRational::one())
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.x0
    }

    pub fn surd_part(&self) -> &BigRational {
        &self.x1
    }

    pub fn radicand(&self) -> u64 {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.x0.is_zero() && self.x1.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.x1.is_zero()
    }

    /// Rational value if `x1 == 0`.
    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.x1.is_zero() {
            Some(&self.x0)
        } else {
            None
        }
    }

    pub fn is_integer(&self) -> bool {
        self.x1.is_zero() && self.x0.is_integer()
    }

    /// Joint radicand for a binary operation, or an error when both
    /// operands are irrational over different fields.
    fn join(&self, other: &Self) -> Result<u64, FieldError> {
        match (self.d, other.d) {
            (0, d) | (d, 0) => Ok(d),
            (a, b) if a == b => Ok(a),
            (a, b) => Err(FieldError::IncompatibleRadicands(a, b)),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, FieldError> {
        let d = self.join(other)?;
        QuadExt::new(&self.x0 + &other.x0, &self.x1 + &other.x1, d)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, FieldError> {
        let d = self.join(other)?;
        QuadExt::new(&self.x0 - &other.x0, &self.x1 - &other.x1, d)
    }

    pub fn neg(&self) -> Self {
        QuadExt { x0: -&self.x0, x1: -&self.x1, d: self.d }
    }

    pub fn mul(&self, other: &Self) -> Result<Self, FieldError> {
        let d = self.join(other)?;
        let drat = BigRational::from_integer(BigInt::from(d));
        let x0 = &self.x0 * &other.x0 + &self.x1 * &other.x1 * &drat;
        let x1 = &self.x0 * &other.x1 + &self.x1 * &other.x0;
        QuadExt::new(x0, x1, d)
    }

    /// Galois conjugate `x0 - x1*sqrt(d)`.
    pub fn conjugate(&self) -> Self {
        QuadExt { x0: self.x0.clone(), x1: -&self.x1, d: self.d }
    }

    /// Field norm `x0^2 - d*x1^2` (a rational).
    pub fn norm(&self) -> BigRational {
        let drat = BigRational::from_integer(BigInt::from(self.d));
        &self.x0 * &self.x0 - &self.x1 * &self.x1 * &drat
    }

    pub fn div(&self, other: &Self) -> Result<Self, FieldError> {
        if other.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let d = self.join(other)?;
        // rationalize by the conjugate: a/b = a*conj(b)/norm(b)
        let widened = QuadExt { x0: other.x0.clone(), x1: other.x1.clone(), d };
        let num = self.mul(&widened.conjugate())?;
        let n = widened.norm();
        QuadExt::new(num.x0 / &n, num.x1 / &n, d)
    }

    pub fn scale_int(&self, k: &BigInt) -> Self {
        let krat = BigRational::from_integer(k.clone());
        let out = QuadExt { x0: &self.x0 * &krat, x1: &self.x1 * &krat, d: self.d };
        if out.x1.is_zero() {
            QuadExt { d: 0, ..out }
        } else {
            out
        }
    }

    pub fn scale_rat(&self, k: &BigRational) -> Self {
        let out = QuadExt { x0: &self.x0 * k, x1: &self.x1 * k, d: self.d };
        if out.x1.is_zero() {
            QuadExt { d: 0, ..out }
        } else {
            out
        }
    }

    /// Exact sign of the real value `x0 + x1*sqrt(d)`.
    pub fn sign(&self) -> i32 {
        let s0 = rat_sign(&self.x0);
        let s1 = rat_sign(&self.x1);
        match (s0, s1) {
            (0, s) | (s, 0) => s,
            (a, b) if a == b => a,
            _ => {
                // opposite signs: compare x0^2 against d*x1^2
                let drat = BigRational::from_integer(BigInt::from(self.d));
                let lhs = &self.x0 * &self.x0;
                let rhs = &self.x1 * &self.x1 * &drat;
                match lhs.cmp(&rhs) {
                    std::cmp::Ordering::Greater => s0,
                    std::cmp::Ordering::Less => s1,
                    std::cmp::Ordering::Equal => 0,
                }
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        self.sign() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.sign() < 0
    }

    /// Exact comparison; errors when the operands live in different fields.
    pub fn cmp_exact(&self, other: &Self) -> Result<std::cmp::Ordering, FieldError> {
        Ok(match self.sub(other)?.sign() {
            s if s > 0 => std::cmp::Ordering::Greater,
            s if s < 0 => std::cmp::Ordering::Less,
            _ => std::cmp::Ordering::Equal,
        })
    }

    /// Double-precision approximation (verification layer only).
    pub fn to_f64(&self) -> f64 {
        rat_to_f64(&self.x0) + rat_to_f64(&self.x1) * (self.d as f64).sqrt()
    }

    /// Parse under the out-of-band radicand `d`.
    ///
    /// Grammar: `ELEM := RAT | RAT SIGN RAT "√"` with
    /// `RAT := ["-"] digits ["/" digits]`.
    pub fn parse(text: &str, d: u64) -> Result<Self, FieldError> {
        let mut p = Parser { text, pos: 0 };
        let elem = p.element(d)?;
        p.skip_ws();
        if p.pos != text.len() {
            return Err(FieldError::Syntax {
                position: p.pos,
                message: "trailing input".into(),
            });
        }
        Ok(elem)
    }
}

fn rat_sign(r: &BigRational) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

pub fn rat_to_f64(r: &BigRational) -> f64 {
    // good enough for verification-scale magnitudes
    let num = r.numer();
    let den = r.denom();
    let nf = bigint_to_f64(num);
    let df = bigint_to_f64(den);
    nf / df
}

fn bigint_to_f64(n: &BigInt) -> f64 {
    n.to_string().parse::<f64>().unwrap_or(f64::NAN)
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.text[self.pos..].starts_with(' ') {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.text[self.pos..].chars().next()
    }

    fn rat(&mut self, allow_minus: bool) -> Result<BigRational, FieldError> {
        self.skip_ws();
        let start = self.pos;
        let mut neg = false;
        if allow_minus && self.peek() == Some('-') {
            neg = true;
            self.pos += 1;
        }
        let digits_start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == digits_start {
            return Err(FieldError::Syntax {
                position: self.pos,
                message: "expected digits".into(),
            });
        }
        let numer: BigInt = self.text[digits_start..self.pos].parse().unwrap();
        let denom: BigInt = if self.peek() == Some('/') {
            self.pos += 1;
            let den_start = self.pos;
            while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                self.pos += 1;
            }
            if self.pos == den_start {
                return Err(FieldError::Syntax {
                    position: self.pos,
                    message: "expected denominator digits".into(),
                });
            }
            self.text[den_start..self.pos].parse().unwrap()
        } else {
            BigInt::one()
        };
        if denom.is_zero() {
            return Err(FieldError::Syntax {
                position: start,
                message: "zero denominator".into(),
            });
        }
        let r = BigRational::new(numer, denom);
        Ok(if neg { -r } else { r })
    }

    fn element(&mut self, d: u64) -> Result<QuadExt, FieldError> {
        let first = self.rat(true)?;
        self.skip_ws();
        match self.peek() {
            Some(sign @ ('+' | '-')) => {
                self.pos += 1;
                let second = self.rat(false)?;
                self.skip_ws();
                if self.peek() == Some('√') {
                    self.pos += '√'.len_utf8();
                } else {
                    return Err(FieldError::Syntax {
                        position: self.pos,
                        message: "expected '√' after second coefficient".into(),
                    });
                }
                let x1 = if sign == '-' { -second } else { second };
                QuadExt::new(first, x1, d)
            }
            Some('√') => Err(FieldError::Syntax {
                position: self.pos,
                message: "expected sign and coefficient before '√'".into(),
            }),
            _ => Ok(QuadExt::rational(first)),
        }
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.x1.is_zero() {
            write!(f, "{}", self.x0)
        } else if self.x1.is_negative() {
            write!(f, "{}-{}√", self.x0, -&self.x1)
        } else {
            write!(f, "{}+{}√", self.x0, self.x1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn add_componentwise() {
        let a = QuadExt::with_sqrt(3, 2, 2).unwrap();
        let b = QuadExt::with_sqrt(1, -1, 2).unwrap();
        assert_eq!(a.add(&b).unwrap(), QuadExt::with_sqrt(4, 1, 2).unwrap());
    }

    #[test]
    fn mul_example() {
        let a = QuadExt::with_sqrt(1, 1, 2).unwrap();
        let b = QuadExt::with_sqrt(3, 2, 2).unwrap();
        assert_eq!(a.mul(&b).unwrap(), QuadExt::with_sqrt(7, 5, 2).unwrap());
    }

    #[test]
    fn div_by_unit() {
        let one = QuadExt::one();
        let b = QuadExt::with_sqrt(3, 2, 2).unwrap();
        assert_eq!(one.div(&b).unwrap(), QuadExt::with_sqrt(3, -2, 2).unwrap());
    }

    #[test]
    fn div_by_zero() {
        assert_eq!(
            QuadExt::one().div(&QuadExt::zero()),
            Err(FieldError::DivisionByZero)
        );
    }

    #[test]
    fn mixed_radicands_rejected() {
        let a = QuadExt::sqrt(2).unwrap();
        let b = QuadExt::sqrt(3).unwrap();
        assert_eq!(a.add(&b), Err(FieldError::IncompatibleRadicands(2, 3)));
        assert_eq!(a.mul(&b), Err(FieldError::IncompatibleRadicands(2, 3)));
    }

    #[test]
    fn sign_opposite_coordinates() {
        assert_eq!(QuadExt::with_sqrt(3, -2, 2).unwrap().sign(), 1);
        assert_eq!(QuadExt::with_sqrt(1, -1, 2).unwrap().sign(), -1);
        assert_eq!(QuadExt::zero().sign(), 0);
    }

    #[test]
    fn canonical_rational_collapse() {
        let a = QuadExt::sqrt(2).unwrap();
        let z = a.sub(&a).unwrap();
        assert!(z.is_rational());
        assert_eq!(z.radicand(), 0);
    }

    #[test]
    fn squarefree_rejected() {
        for d in [0u64, 1, 4, 8, 9, 12] {
            assert_eq!(
                QuadExt::sqrt(d),
                Err(FieldError::NonSquarefreeRadicand(d)),
                "d={d}"
            );
        }
    }

    #[test]
    fn parse_examples() {
        assert_eq!(
            QuadExt::parse("3+2√", 2).unwrap(),
            QuadExt::with_sqrt(3, 2, 2).unwrap()
        );
        assert_eq!(QuadExt::parse("-1/2", 0).unwrap(), QuadExt::from_frac(-1, 2));
        let r = QuadExt::parse("0+4/2√", 2).unwrap();
        assert_eq!(r, QuadExt::with_sqrt(0, 2, 2).unwrap());
        assert_eq!(r.to_string(), "0+2√");
    }

    #[test]
    fn parse_rejects_malformed() {
        assert!(matches!(
            QuadExt::parse("3+√", 2),
            Err(FieldError::Syntax { .. })
        ));
        assert!(matches!(
            QuadExt::parse("√", 2),
            Err(FieldError::Syntax { .. })
        ));
        assert!(matches!(
            QuadExt::parse("1/0", 0),
            Err(FieldError::Syntax { .. })
        ));
    }

    #[test]
    fn format_parse_roundtrip() {
        let a = QuadExt::new(q(-7, 3), q(5, 4), 5).unwrap();
        let s = a.to_string();
        assert_eq!(QuadExt::parse(&s, 5).unwrap(), a);
    }
}

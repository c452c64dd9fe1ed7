//! Exact rational arithmetic, square detection and p-adic valuations.
//!
//! [`Rat`] wraps a [`BigRational`], which keeps every value in lowest terms with
//! a positive denominator. Division by zero and the valuation of zero are hard
//! errors on the fallible entry points; the `/` operator panics like integer
//! division does.

use std::cmp::Ordering;
use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Default trial-division bound for [`Factorizer`].
pub const DEFAULT_FACTOR_BOUND: u64 = 1_000_000;

/// An arbitrary-precision rational in canonical form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rat(BigRational);

impl Rat {
    pub fn new(num: BigInt, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rat(BigRational::new(num, den)))
    }

    pub fn from_int<T: Into<BigInt>>(n: T) -> Self {
        Rat(BigRational::from_integer(n.into()))
    }

    /// `num/den` from machine integers. Panics if `den == 0`.
    pub fn frac(num: i64, den: i64) -> Self {
        assert!(den != 0, "Rat::frac with zero denominator");
        Rat(BigRational::new(num.into(), den.into()))
    }

    pub fn zero() -> Self {
        Rat(BigRational::zero())
    }

    pub fn one() -> Self {
        Rat(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn abs(&self) -> Self {
        Rat(self.0.abs())
    }

    pub fn square(&self) -> Self {
        Rat(&self.0 * &self.0)
    }

    /// Integer power; negative exponents invert (and fail on zero).
    pub fn pow(&self, e: i32) -> Result<Self> {
        if e < 0 && self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rat(num_traits::Pow::pow(&self.0, e)))
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rat(self.0.recip()))
    }

    pub fn checked_div(&self, other: &Rat) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rat(&self.0 / &other.0))
    }

    /// Integer value, when the rational is one.
    pub fn to_integer(&self) -> Option<BigInt> {
        self.is_integer().then(|| self.0.numer().clone())
    }

    pub fn to_i64(&self) -> Option<i64> {
        self.to_integer().and_then(|n| n.to_i64())
    }

    pub fn inner(&self) -> &BigRational {
        &self.0
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

fn parse_int(s: &str, whole: &str) -> Result<BigInt> {
    let digits = s.strip_prefix('-').unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse(whole.to_string()));
    }
    s.parse::<BigInt>()
        .map_err(|_| Error::Parse(whole.to_string()))
}

impl FromStr for Rat {
    type Err = Error;

    /// Accepts `num`, `num/den`, with an optional leading `-` on the numerator.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        match t.split_once('/') {
            None => Ok(Rat::from_int(parse_int(t, s)?)),
            Some((n, d)) => {
                let num = parse_int(n, s)?;
                if d.starts_with('-') {
                    return Err(Error::Parse(s.to_string()));
                }
                let den = parse_int(d, s)?;
                if den.is_zero() {
                    return Err(Error::Parse(s.to_string()));
                }
                Rat::new(num, den)
            }
        }
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Self {
        Rat::from_int(n)
    }
}

impl From<BigInt> for Rat {
    fn from(n: BigInt) -> Self {
        Rat::from_int(n)
    }
}

macro_rules! forward_binop {
    ($imp:ident, $method:ident) => {
        impl $imp<Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat(self.0.$method(rhs.0))
            }
        }
        impl<'a> $imp<&'a Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: &'a Rat) -> Rat {
                Rat(self.0.$method(&rhs.0))
            }
        }
        impl<'a> $imp<Rat> for &'a Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat((&self.0).$method(rhs.0))
            }
        }
        impl<'a, 'b> $imp<&'b Rat> for &'a Rat {
            type Output = Rat;
            fn $method(self, rhs: &'b Rat) -> Rat {
                Rat((&self.0).$method(&rhs.0))
            }
        }
        impl $imp<i64> for Rat {
            type Output = Rat;
            fn $method(self, rhs: i64) -> Rat {
                Rat(self.0.$method(BigRational::from_integer(rhs.into())))
            }
        }
        impl<'a> $imp<i64> for &'a Rat {
            type Output = Rat;
            fn $method(self, rhs: i64) -> Rat {
                Rat((&self.0).$method(BigRational::from_integer(rhs.into())))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl AddAssign<&Rat> for Rat {
    fn add_assign(&mut self, rhs: &Rat) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Rat> for Rat {
    fn sub_assign(&mut self, rhs: &Rat) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&Rat> for Rat {
    fn mul_assign(&mut self, rhs: &Rat) {
        self.0 *= &rhs.0;
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

impl PartialEq<i64> for Rat {
    fn eq(&self, other: &i64) -> bool {
        self.0.is_integer() && *self.0.numer() == BigInt::from(*other)
    }
}

impl PartialOrd<i64> for Rat {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        self.0
            .partial_cmp(&BigRational::from_integer((*other).into()))
    }
}

impl Sum for Rat {
    fn sum<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rat> for Rat {
    fn sum<I: Iterator<Item = &'a Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |acc, x| acc + x)
    }
}

impl Product for Rat {
    fn product<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        iter.fold(Rat::one(), |acc, x| acc * x)
    }
}

impl<'a> Product<&'a Rat> for Rat {
    fn product<I: Iterator<Item = &'a Rat>>(iter: I) -> Rat {
        iter.fold(Rat::one(), |acc, x| acc * x)
    }
}

/// p-adic valuation of a nonzero rational.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PadicVal {
    pub value: i64,
    pub prime: u64,
}

/// Floor square root with an exactness flag.
///
/// Newton iteration on big integers (via `num-integer`), then `root² == n`.
pub fn isqrt(n: &BigInt) -> Result<(BigInt, bool)> {
    if n.is_negative() {
        return Err(Error::NegativeSqrt(n.to_string()));
    }
    let root = n.sqrt();
    let exact = &root * &root == *n;
    Ok((root, exact))
}

pub fn is_square(q: &Rat) -> bool {
    sqrt_exact(q).is_some()
}

/// The nonnegative rational square root, if `q` is a square.
pub fn sqrt_exact(q: &Rat) -> Option<Rat> {
    if q.is_negative() {
        return None;
    }
    let (n, n_exact) = isqrt(q.numer()).ok()?;
    if !n_exact {
        return None;
    }
    let (d, d_exact) = isqrt(q.denom()).ok()?;
    if !d_exact {
        return None;
    }
    // num and den coprime, so their roots are too
    Some(Rat(BigRational::new_raw(n, d)))
}

/// Multiplicity of `p` in a nonzero integer.
pub fn vp_int(n: &BigInt, p: u64) -> Result<i64> {
    if n.is_zero() {
        return Err(Error::ZeroValuation);
    }
    check_prime(p)?;
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return Ok(v);
        }
        n = q;
        v += 1;
    }
}

/// `v_p(q) = v_p(num) - v_p(den)`.
pub fn vp(q: &Rat, p: u64) -> Result<i64> {
    if q.is_zero() {
        return Err(Error::ZeroValuation);
    }
    Ok(vp_int(q.numer(), p)? - vp_int(q.denom(), p)?)
}

pub fn padic_val(q: &Rat, p: u64) -> Result<PadicVal> {
    Ok(PadicVal {
        value: vp(q, p)?,
        prime: p,
    })
}

/// Valuation that maps zero to `None` (i.e. +infinity).
pub fn vp_or_inf(q: &Rat, p: u64) -> Result<Option<i64>> {
    if q.is_zero() {
        check_prime(p)?;
        return Ok(None);
    }
    vp(q, p).map(Some)
}

/// Residue of a p-integral rational in `[0, p)`.
pub fn mod_p(q: &Rat, p: u64) -> Result<u64> {
    check_prime(p)?;
    let pb = BigInt::from(p);
    let den = q.denom().mod_floor(&pb);
    if den.is_zero() {
        return Err(Error::NotPIntegral {
            value: q.to_string(),
            p,
        });
    }
    let num = q.numer().mod_floor(&pb);
    // p prime: den^(p-2) is the inverse
    let inv = den.modpow(&BigInt::from(p - 2), &pb);
    let r = (num * inv).mod_floor(&pb);
    Ok(r.to_u64().expect("residue below p"))
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

fn check_prime(p: u64) -> Result<()> {
    if is_prime_u64(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

/// Trial-division factorization up to a configurable bound.
///
/// A cofactor left after dividing out every prime `<= bound` is accepted as
/// prime only if it is below `bound²`; anything larger is reported as
/// [`Error::FactorBound`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Factorizer {
    bound: u64,
}

impl Default for Factorizer {
    fn default() -> Self {
        Factorizer {
            bound: DEFAULT_FACTOR_BOUND,
        }
    }
}

impl Factorizer {
    pub fn new(bound: u64) -> Self {
        Factorizer {
            bound: bound.max(2),
        }
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    /// Prime factorization of `|n|` as `(prime, exponent)` pairs, ascending.
    pub fn factor(&self, n: &BigInt) -> Result<Vec<(BigInt, u32)>> {
        if n.is_zero() {
            return Err(Error::InvalidParameter("cannot factor 0".into()));
        }
        let mut n = n.abs();
        let mut out = Vec::new();
        let mut d = 2u64;
        while d <= self.bound {
            let db = BigInt::from(d);
            if &db * &db > n {
                break;
            }
            let mut e = 0;
            loop {
                let (q, r) = n.div_rem(&db);
                if !r.is_zero() {
                    break;
                }
                n = q;
                e += 1;
            }
            if e > 0 {
                out.push((db, e));
            }
            d += if d == 2 { 1 } else { 2 };
        }
        if !n.is_one() {
            let b = BigInt::from(self.bound);
            let fully_sieved = BigInt::from(d) * BigInt::from(d) > n;
            if !fully_sieved && n >= &b * &b {
                return Err(Error::FactorBound {
                    n: n.to_string(),
                    bound: self.bound,
                });
            }
            out.push((n, 1));
        }
        Ok(out)
    }

    pub fn is_squarefree(&self, n: &BigInt) -> Result<bool> {
        if !n.is_positive() {
            return Err(Error::InvalidParameter(format!(
                "squarefree test needs n >= 1, got {n}"
            )));
        }
        Ok(self.factor(n)?.iter().all(|(_, e)| *e == 1))
    }

    /// Distinct primes dividing `n`, as machine integers.
    pub fn prime_divisors(&self, n: &BigInt) -> Result<Vec<u64>> {
        self.factor(n)?
            .into_iter()
            .map(|(p, _)| {
                p.to_u64()
                    .ok_or_else(|| Error::SizeLimit(format!("prime {p} exceeds u64")))
            })
            .collect()
    }
}

pub fn is_squarefree(n: &BigInt) -> Result<bool> {
    Factorizer::default().is_squarefree(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rat {
        s.parse().unwrap()
    }

    #[test]
    fn isqrt_examples() {
        assert_eq!(isqrt(&49.into()).unwrap(), (7.into(), true));
        assert_eq!(isqrt(&50.into()).unwrap(), (7.into(), false));
        assert_eq!(isqrt(&1369.into()).unwrap(), (37.into(), true));
        assert_eq!(isqrt(&0.into()).unwrap(), (0.into(), true));
        assert!(matches!(isqrt(&(-1).into()), Err(Error::NegativeSqrt(_))));
    }

    #[test]
    fn square_detection() {
        assert!(is_square(&r("1369/144")));
        assert!(is_square(&r("100/49")));
        assert!(!is_square(&r("3")));
        assert!(!is_square(&r("-4")));
        assert!(!is_square(&r("4/3")));
        assert_eq!(sqrt_exact(&r("0")), Some(Rat::zero()));
        assert_eq!(sqrt_exact(&r("1369/144")), Some(r("37/12")));
        assert_eq!(sqrt_exact(&r("-4")), None);
    }

    #[test]
    fn valuations() {
        assert_eq!(vp(&r("50/3"), 5).unwrap(), 2);
        assert_eq!(vp(&r("3/50"), 5).unwrap(), -2);
        assert_eq!(vp(&r("220000/441"), 5).unwrap(), 4);
        assert_eq!(vp(&r("220000/441"), 3).unwrap(), -2);
        assert_eq!(vp(&Rat::zero(), 5), Err(Error::ZeroValuation));
        assert_eq!(vp(&r("12"), 4), Err(Error::NotPrime(4)));
        assert_eq!(vp_or_inf(&Rat::zero(), 5).unwrap(), None);
        assert_eq!(
            padic_val(&r("-150072"), 13).unwrap(),
            PadicVal {
                value: 2,
                prime: 13
            }
        );
    }

    #[test]
    fn residues() {
        assert_eq!(mod_p(&r("-150072"), 31).unwrap(), 30);
        assert_eq!(mod_p(&r("7/2"), 5).unwrap(), 1);
        assert_eq!(mod_p(&r("0"), 7).unwrap(), 0);
        assert!(matches!(
            mod_p(&r("1/10"), 5),
            Err(Error::NotPIntegral { p: 5, .. })
        ));
    }

    #[test]
    fn squarefree() {
        assert!(is_squarefree(&10.into()).unwrap());
        assert!(!is_squarefree(&50.into()).unwrap());
        assert!(is_squarefree(&65.into()).unwrap());
        assert!(is_squarefree(&1.into()).unwrap());
        assert!(is_squarefree(&0.into()).is_err());
        let small = Factorizer::new(100);
        // 10007 is prime and below 100², so accepted as a cofactor
        assert!(small.is_squarefree(&10007.into()).unwrap());
        // 1000003 * 1000033 has no factor below 100
        let big = BigInt::from(1_000_003u64) * BigInt::from(1_000_033u64);
        assert!(matches!(small.factor(&big), Err(Error::FactorBound { .. })));
        assert_eq!(
            Factorizer::default()
                .prime_divisors(&BigInt::from(31 * 31 + 1))
                .unwrap(),
            vec![2, 13, 37]
        );
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(r("6/4").to_string(), "3/2");
        assert_eq!(r("-6/4").to_string(), "-3/2");
        assert_eq!(r("8/4").to_string(), "2");
        assert_eq!(r(" 0/5 ").to_string(), "0");
        for bad in ["1/0", "", "-", "1/-2", "a/3", "1.5", "1//2", "+3"] {
            assert!(bad.parse::<Rat>().is_err(), "{bad:?} parsed");
        }
    }

    #[test]
    fn division_errors() {
        assert_eq!(
            Rat::one().checked_div(&Rat::zero()),
            Err(Error::DivisionByZero)
        );
        assert_eq!(Rat::zero().recip(), Err(Error::DivisionByZero));
        assert_eq!(Rat::zero().pow(-1), Err(Error::DivisionByZero));
        assert_eq!(r("2/3").pow(-2).unwrap(), r("9/4"));
    }
}

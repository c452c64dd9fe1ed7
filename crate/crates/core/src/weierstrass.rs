//! Curves `y² = x³ + a₂x² + a₄x + a₆` over ℚ and their group law.
//!
//! Points carry no reference to a curve. Every public operation takes the curve
//! explicitly and rejects points that do not satisfy its equation.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactnum::Rat;

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Point {
    Infinity,
    Affine { x: Rat, y: Rat },
}

impl Point {
    pub fn affine(x: Rat, y: Rat) -> Self {
        Point::Affine { x, y }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, Point::Infinity)
    }

    pub fn x(&self) -> Option<&Rat> {
        match self {
            Point::Infinity => None,
            Point::Affine { x, .. } => Some(x),
        }
    }

    pub fn y(&self) -> Option<&Rat> {
        match self {
            Point::Infinity => None,
            Point::Affine { y, .. } => Some(y),
        }
    }

    /// Coordinates of an affine point, or a `Degenerate` error naming `what`.
    pub fn coords(&self, what: &str) -> Result<(&Rat, &Rat)> {
        match self {
            Point::Infinity => Err(Error::Degenerate(format!(
                "{what} is the point at infinity"
            ))),
            Point::Affine { x, y } => Ok((x, y)),
        }
    }

    pub fn neg(&self) -> Point {
        match self {
            Point::Infinity => Point::Infinity,
            Point::Affine { x, y } => Point::Affine {
                x: x.clone(),
                y: -y,
            },
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Infinity => write!(f, "O"),
            Point::Affine { x, y } => write!(f, "[{x}, {y}]"),
        }
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Standard Weierstrass quantities (with `a₁ = a₃ = 0`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StdQuantities {
    pub b2: Rat,
    pub b4: Rat,
    pub b6: Rat,
    pub b8: Rat,
    pub c4: Rat,
    pub delta: Rat,
}

impl StdQuantities {
    pub fn from_coefficients(a2: &Rat, a4: &Rat, a6: &Rat) -> Self {
        let b2 = a2 * 4;
        let b4 = a4 * 2;
        let b6 = a6 * 4;
        let b8 = a2 * a6 * 4 - a4.square();
        let c4 = b2.square() - &b4 * 24;
        let delta =
            -(b2.square() * &b8) - b4.pow(3).expect("positive exponent") * 8 - b6.square() * 27
                + &b2 * &b4 * &b6 * 9;
        StdQuantities {
            b2,
            b4,
            b6,
            b8,
            c4,
            delta,
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Curve {
    a2: Rat,
    a4: Rat,
    a6: Rat,
}

impl Curve {
    /// Builds the curve, rejecting singular cubics.
    pub fn new(a2: Rat, a4: Rat, a6: Rat) -> Result<Self> {
        let curve = Curve { a2, a4, a6 };
        if curve.std_quantities().delta.is_zero() {
            return Err(Error::SingularCurve(curve.to_string()));
        }
        Ok(curve)
    }

    pub fn from_ints(a2: i64, a4: i64, a6: i64) -> Result<Self> {
        Curve::new(a2.into(), a4.into(), a6.into())
    }

    pub fn a2(&self) -> &Rat {
        &self.a2
    }

    pub fn a4(&self) -> &Rat {
        &self.a4
    }

    pub fn a6(&self) -> &Rat {
        &self.a6
    }

    /// `x³ + a₂x² + a₄x + a₆`.
    pub fn rhs(&self, x: &Rat) -> Rat {
        ((x + &self.a2) * x + &self.a4) * x + &self.a6
    }

    pub fn contains(&self, p: &Point) -> bool {
        match p {
            Point::Infinity => true,
            Point::Affine { x, y } => y.square() == self.rhs(x),
        }
    }

    pub fn check(&self, p: &Point) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::NotOnCurve {
                point: p.to_string(),
                curve: self.to_string(),
            })
        }
    }

    /// Affine point with the given x, if `rhs(x)` is a square (nonnegative root).
    pub fn lift_x(&self, x: &Rat) -> Option<Point> {
        crate::exactnum::sqrt_exact(&self.rhs(x)).map(|y| Point::affine(x.clone(), y))
    }

    pub fn std_quantities(&self) -> StdQuantities {
        StdQuantities::from_coefficients(&self.a2, &self.a4, &self.a6)
    }

    pub fn discriminant(&self) -> Rat {
        self.std_quantities().delta
    }

    pub fn add(&self, p: &Point, q: &Point) -> Result<Point> {
        self.check(p)?;
        self.check(q)?;
        Ok(self.add_unchecked(p, q))
    }

    pub fn sub(&self, p: &Point, q: &Point) -> Result<Point> {
        self.add(p, &q.neg())
    }

    pub fn double(&self, p: &Point) -> Result<Point> {
        self.check(p)?;
        Ok(self.double_unchecked(p))
    }

    /// `[k]p` by double-and-add; negative `k` negates.
    pub fn mul(&self, k: i64, p: &Point) -> Result<Point> {
        self.check(p)?;
        Ok(self.mul_unchecked(k, p))
    }

    /// `[0]p, [1]p, …, [n]p`, built by repeated addition.
    pub fn multiples(&self, p: &Point, n: usize) -> Result<Vec<Point>> {
        self.check(p)?;
        let mut out = Vec::with_capacity(n + 1);
        out.push(Point::Infinity);
        for i in 1..=n {
            let next = self.add_unchecked(&out[i - 1], p);
            out.push(next);
        }
        Ok(out)
    }

    /// Smallest `1 <= k <= bound` with `[k]p = O`.
    pub fn torsion_order_upto(&self, p: &Point, bound: u32) -> Result<Option<u32>> {
        self.check(p)?;
        let mut acc = p.clone();
        for k in 1..=bound {
            if acc.is_infinity() {
                return Ok(Some(k));
            }
            acc = self.add_unchecked(&acc, p);
        }
        Ok(None)
    }

    /// The curve `y² = x³ + (a₂/u²)x² + (a₄/u⁴)x + a₆/u⁶`, image under `(x, y) ↦ (x/u², y/u³)`.
    pub fn scale(&self, u: &Rat) -> Result<Curve> {
        if u.is_zero() {
            return Err(Error::InvalidParameter("scaling by zero".into()));
        }
        let u2 = u.square();
        let u4 = u2.square();
        let u6 = &u4 * &u2;
        Ok(Curve {
            a2: &self.a2 / &u2,
            a4: &self.a4 / &u4,
            a6: &self.a6 / &u6,
        })
    }

    /// Image of a point under the same change of variables as [`Curve::scale`].
    pub fn scale_point(u: &Rat, p: &Point) -> Result<Point> {
        if u.is_zero() {
            return Err(Error::InvalidParameter("scaling by zero".into()));
        }
        Ok(match p {
            Point::Infinity => Point::Infinity,
            Point::Affine { x, y } => {
                let u2 = u.square();
                Point::affine(x / &u2, y / (&u2 * u))
            }
        })
    }

    /// Depressed model `Y² = X³ + AX + B` with `X = x + a₂/3`, plus that shift.
    pub fn depressed(&self) -> (Curve, Rat) {
        let shift = &self.a2 / 3;
        let a = &self.a4 - self.a2.square() / 3;
        let b = &self.a6 - &self.a2 * &self.a4 / 3 + self.a2.pow(3).expect("cube") * 2 / 27;
        (
            Curve {
                a2: Rat::zero(),
                a4: a,
                a6: b,
            },
            shift,
        )
    }

    pub(crate) fn add_unchecked(&self, p: &Point, q: &Point) -> Point {
        let (x1, y1, x2, y2) = match (p, q) {
            (Point::Infinity, _) => return q.clone(),
            (_, Point::Infinity) => return p.clone(),
            (Point::Affine { x: x1, y: y1 }, Point::Affine { x: x2, y: y2 }) => (x1, y1, x2, y2),
        };
        if x1 == x2 {
            if *y1 == -y2 {
                return Point::Infinity;
            }
            return self.double_unchecked(p);
        }
        let lambda = (y2 - y1) / (x2 - x1);
        self.chord(&lambda, x1, y1, x2)
    }

    pub(crate) fn double_unchecked(&self, p: &Point) -> Point {
        let (x, y) = match p {
            Point::Infinity => return Point::Infinity,
            Point::Affine { x, y } => (x, y),
        };
        // 2-torsion
        if y.is_zero() {
            return Point::Infinity;
        }
        let slope_num = x.square() * 3 + &self.a2 * x * 2 + &self.a4;
        let lambda = slope_num / (y * 2);
        self.chord(&lambda, x, y, x)
    }

    fn chord(&self, lambda: &Rat, x1: &Rat, y1: &Rat, x2: &Rat) -> Point {
        let x3 = lambda.square() - &self.a2 - x1 - x2;
        let y3 = -(y1 + lambda * (&x3 - x1));
        Point::affine(x3, y3)
    }

    pub(crate) fn mul_unchecked(&self, k: i64, p: &Point) -> Point {
        let base = if k < 0 { p.neg() } else { p.clone() };
        let mut n = k.unsigned_abs();
        let mut acc = Point::Infinity;
        let mut addend = base;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.add_unchecked(&acc, &addend);
            }
            n >>= 1;
            if n > 0 {
                addend = self.double_unchecked(&addend);
            }
        }
        acc
    }
}

impl fmt::Display for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "y^2 = x^3 + ({})x^2 + ({})x + ({})",
            self.a2, self.a4, self.a6
        )
    }
}

impl fmt::Debug for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Curve {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rat {
        s.parse().unwrap()
    }

    fn pt(x: &str, y: &str) -> Point {
        Point::affine(r(x), r(y))
    }

    fn rank_one_curve() -> Curve {
        Curve::from_ints(0, 1512, 33588).unwrap()
    }

    fn e_at_2() -> Curve {
        Curve::from_ints(-33, 1875, 15625).unwrap()
    }

    #[test]
    fn membership() {
        assert!(rank_one_curve().contains(&pt("-11", "125")));
        assert!(e_at_2().contains(&pt("0", "125")));
        assert!(!e_at_2().contains(&pt("0", "124")));
        assert!(e_at_2().contains(&Point::Infinity));
    }

    #[test]
    fn doubling_by_tangent() {
        // λ = (3·121 + 1512) / 250 = 15/2
        let c = rank_one_curve();
        assert_eq!(c.double(&pt("-11", "125")).unwrap(), pt("313/4", "-6355/8"));
        assert_eq!(c.mul(2, &pt("-11", "125")).unwrap(), pt("313/4", "-6355/8"));
    }

    #[test]
    fn identity_and_inverse() {
        let c = rank_one_curve();
        let u = pt("-11", "125");
        assert_eq!(c.add(&u, &Point::Infinity).unwrap(), u);
        assert_eq!(c.add(&Point::Infinity, &u).unwrap(), u);
        assert_eq!(c.add(&u, &pt("-11", "-125")).unwrap(), Point::Infinity);
        assert_eq!(c.mul(1, &u).unwrap(), u);
        assert_eq!(c.mul(0, &u).unwrap(), Point::Infinity);
        assert_eq!(c.mul(-3, &u).unwrap(), c.mul(3, &u).unwrap().neg());
    }

    #[test]
    fn off_curve_rejected() {
        let c = e_at_2();
        assert!(matches!(
            c.add(&pt("0", "124"), &pt("0", "125")),
            Err(Error::NotOnCurve { .. })
        ));
        assert!(c.mul(3, &pt("1", "1")).is_err());
    }

    #[test]
    fn singular_rejected() {
        assert!(matches!(
            Curve::from_ints(0, 0, 0),
            Err(Error::SingularCurve(_))
        ));
        // (x+1)²(x-2)
        assert!(Curve::from_ints(0, -3, -2).is_err());
    }

    #[test]
    fn two_torsion_doubles_to_infinity() {
        // y² = x(x-1)(x+1)
        let c = Curve::from_ints(0, -1, 0).unwrap();
        assert_eq!(c.double(&pt("1", "0")).unwrap(), Point::Infinity);
        assert_eq!(c.torsion_order_upto(&pt("-1", "0"), 12).unwrap(), Some(2));
    }

    #[test]
    fn multiples_of_r_on_e() {
        // t = 3: a₂ = 3(1)(19) = 57, a₄ = 3·10⁴, a₆ = 10⁶
        let c = Curve::from_ints(57, 30000, 1_000_000).unwrap();
        let r0 = pt("0", "1000");
        assert_eq!(c.mul(2, &r0).unwrap().x(), Some(&r("168")));
        assert_eq!(c.mul(3, &r0).unwrap().x(), Some(&r("220000/441")));
        assert_eq!(c.torsion_order_upto(&r0, 12).unwrap(), None);
        let ms = c.multiples(&r0, 5).unwrap();
        for (k, m) in ms.iter().enumerate() {
            assert_eq!(*m, c.mul(k as i64, &r0).unwrap());
        }
    }

    #[test]
    fn std_quantities_of_known_curve() {
        // y² = x³ - x: Δ = 64, c4 = 48
        let q = Curve::from_ints(0, -1, 0).unwrap().std_quantities();
        assert_eq!(q.delta, r("64"));
        assert_eq!(q.c4, r("48"));
    }

    #[test]
    fn scaling_roundtrip() {
        let c = e_at_2();
        assert_eq!(c.scale(&Rat::one()).unwrap(), c);
        let u = r("-5/3");
        assert_eq!(c.scale(&u).unwrap().scale(&u.recip().unwrap()).unwrap(), c);
        let p = c.mul(2, &pt("0", "125")).unwrap();
        let image = Curve::scale_point(&u, &p).unwrap();
        assert!(c.scale(&u).unwrap().contains(&image));
        assert!(c.scale(&Rat::zero()).is_err());
    }

    #[test]
    fn depressed_model_of_e_at_two() {
        let (d, shift) = e_at_2().depressed();
        assert_eq!(d, rank_one_curve());
        assert_eq!(shift, r("-11"));
    }

    #[test]
    fn text_forms() {
        assert_eq!(
            e_at_2().to_string(),
            "y^2 = x^3 + (-33)x^2 + (1875)x + (15625)"
        );
        assert_eq!(pt("313/4", "-6355/8").to_string(), "[313/4, -6355/8]");
        assert_eq!(Point::Infinity.to_string(), "O");
    }
}

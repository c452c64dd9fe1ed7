//! The one-parameter construction behind the sextuples.
//!
//! For admissible `t`, the curve
//!
//! ```text
//! E(t):  y² = x³ + 3(t²−3t+1)(t²+3t+1)x² + 3(t²+1)⁴x + (t²+1)⁶
//! ```
//!
//! carries `R = [0, (t²+1)³]`. Each multiple `[m]R = (x, y)`, `m > 1`, fixes
//! symmetric functions `σ₁(t, x)`, `σ₂(σ₁, σ₃)`, `σ₃ = (t²−1)/2t` of a rational
//! Diophantine triple `{a, b, c}` whose induced curve has `S'` of order 3.
//!
//! The triple itself comes from the 3-isogenous curve `E*(t)` with kernel
//! `⟨T*⟩` and `φ(P*) = R`: the three points `(m−1)P* + kernel` map through
//! `w` and `X(w)` to `ab`, `ac`, `bc`. No cubic is ever solved.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{sqrt_exact, Rat};
use crate::weierstrass::{Curve, Point};

/// Largest `m` accepted by [`triple_from_multiple`]; coordinate sizes grow like `m²`.
pub const MAX_MULTIPLE: u32 = 8;

/// The family parameter, `t ∉ {−1, 0, 1}`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct ParamT(Rat);

impl ParamT {
    pub fn new(t: Rat) -> Result<Self> {
        if t.is_zero() || t == 1 || t == -1 {
            return Err(Error::InvalidParameter(format!(
                "t = {t} is excluded (t must avoid -1, 0, 1)"
            )));
        }
        Ok(ParamT(t))
    }

    pub fn from_int(t: i64) -> Result<Self> {
        ParamT::new(t.into())
    }

    pub fn value(&self) -> &Rat {
        &self.0
    }

    fn sq(&self) -> Rat {
        self.0.square()
    }

    /// `t² + 1`
    fn n(&self) -> Rat {
        self.sq() + 1
    }
}

impl FromStr for ParamT {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ParamT::new(s.parse()?)
    }
}

impl fmt::Display for ParamT {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl fmt::Debug for ParamT {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t={}", self.0)
    }
}

/// Elementary symmetric functions of a triple.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SigmaTriple {
    pub s1: Rat,
    pub s2: Rat,
    pub s3: Rat,
}

impl SigmaTriple {
    /// σ-triple on the order-3 locus: `s2` is derived from `s1`, `s3`, and
    /// `1 + s3²` must be a square.
    pub fn on_order3_locus(s1: Rat, s3: Rat) -> Result<Self> {
        if sqrt_exact(&(s3.square() + 1)).is_none() {
            return Err(Error::NonSquare(format!("1 + s3² for s3 = {s3}")));
        }
        let s2 = sigma2_from(&s1, &s3);
        Ok(SigmaTriple { s1, s2, s3 })
    }

    pub fn of(a: &Rat, b: &Rat, c: &Rat) -> Self {
        SigmaTriple {
            s1: a + b + c,
            s2: a * b + a * c + b * c,
            s3: a * b * c,
        }
    }
}

/// A rational Diophantine triple with its square-root witnesses.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TripleAbc {
    pub a: Rat,
    pub b: Rat,
    pub c: Rat,
    pub rho_ab: Rat,
    pub rho_ac: Rat,
    pub rho_bc: Rat,
}

impl TripleAbc {
    /// Validates nonzero, distinct elements with `ab+1`, `ac+1`, `bc+1` square.
    pub fn new(a: Rat, b: Rat, c: Rat) -> Result<Self> {
        if a.is_zero() || b.is_zero() || c.is_zero() {
            return Err(Error::Degenerate(format!(
                "zero element in {{{a}, {b}, {c}}}"
            )));
        }
        if a == b || a == c || b == c {
            return Err(Error::Degenerate(format!(
                "repeated element in {{{a}, {b}, {c}}}"
            )));
        }
        let root = |x: &Rat, y: &Rat| {
            sqrt_exact(&(x * y + 1)).ok_or_else(|| Error::NonSquare(format!("{x}·{y} + 1")))
        };
        let rho_ab = root(&a, &b)?;
        let rho_ac = root(&a, &c)?;
        let rho_bc = root(&b, &c)?;
        Ok(TripleAbc {
            a,
            b,
            c,
            rho_ab,
            rho_ac,
            rho_bc,
        })
    }

    pub fn elements(&self) -> [Rat; 3] {
        [self.a.clone(), self.b.clone(), self.c.clone()]
    }

    pub fn sigma(&self) -> SigmaTriple {
        SigmaTriple::of(&self.a, &self.b, &self.c)
    }
}

/// `E(t)`; nonsingular for every admissible `t`.
pub fn curve_e(t: &ParamT) -> Curve {
    let t2 = t.sq();
    let n = t.n();
    let a2 = (&t2 * &t2 * 3) - &t2 * 21 + 3;
    let a4 = n.pow(4).expect("positive exponent") * 3;
    let a6 = n.pow(6).expect("positive exponent");
    Curve::new(a2, a4, a6).expect("E(t) is nonsingular for t outside {-1, 0, 1}")
}

pub fn point_r(t: &ParamT) -> Point {
    Point::affine(Rat::zero(), t.n().pow(3).expect("cube"))
}

/// `σ₃ = (t² − 1) / 2t`
pub fn sigma3(t: &ParamT) -> Rat {
    (t.sq() - 1) / (t.value() * 2)
}

/// `σ₁` attached to a point of `E(t)` with x-coordinate `x ≠ 0`.
pub fn sigma1_from_x(t: &ParamT, x: &Rat) -> Result<Rat> {
    let xinv = x
        .recip()
        .map_err(|_| Error::InvalidParameter("sigma1 needs x != 0".into()))?;
    let t2 = t.sq();
    let num = -(&t2 * &t2) + &t2 * 4 - 1 - xinv * t.n().pow(4).expect("pow");
    Ok(num / ((t2 - 1) * t.value()))
}

/// `σ₂` forced by the order-3 condition on `S'`.
pub fn sigma2_from(s1: &Rat, s3: &Rat) -> Rat {
    let s3sq = s3.square();
    let num = s1.square() * &s3sq - &s3sq * 12 - s1 * s3 * 6 - 3;
    num / (s3sq * 4 + 4)
}

/// The discriminant-square condition for the cubic `X³ − σ₁X² + σ₂X − σ₃`.
pub fn quartic_condition(s1: &Rat, s3: &Rat) -> (Rat, bool) {
    let s3sq = s3.square();
    let first = s1.pow(3).expect("cube") * s3 - s1.square() * 9 - s1 * s3 * 27 - &s3sq * 54 - 27;
    let second = &s3sq + 1;
    let third = s1 * s3 + &s3sq * 2 - 1;
    let value = first * second * third;
    let square = sqrt_exact(&value).is_some();
    (value, square)
}

/// `E*(t)`, 3-isogenous to `E(t)`.
pub fn curve_estar(t: &ParamT) -> Curve {
    let t2 = t.sq();
    let t4 = t2.square();
    let n = t.n();
    let a2 = &t4 * 3 - &t2 * 21 + 3;
    let a4 = n.square() * (&t4 - &t2 * 178 + 1) * 3;
    let a6 = n.square() * (&t4 + &t2 * 110 + 1).square();
    Curve::new(a2, a4, a6).expect("E*(t) is nonsingular for t outside {-1, 0, 1}")
}

/// Generator of the isogeny kernel, of order 3.
pub fn point_tstar(t: &ParamT) -> Point {
    let tv = t.value();
    let t2 = t.sq();
    let x = -((&t2 - tv * 6 + 1) * (&t2 + tv * 6 + 1));
    let y = tv * 27 * (tv - 1).square() * (tv + 1).square();
    Point::affine(x, y)
}

/// The point with `φ(P*) = R`.
pub fn point_pstar(t: &ParamT) -> Point {
    let tv = t.value();
    let t2 = t.sq();
    let n = t.n();
    let x = -(&n * (&t2 + tv * 18 + 1));
    let y = tv * 27 * (tv + 1).square() * &n;
    Point::affine(x, y)
}

/// Constants `(v, r, s)` of the map `w(x, y) = (y + r·x + s) / (6(v − x))`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WConstants {
    pub v: Rat,
    pub r: Rat,
    pub s: Rat,
}

pub fn w_constants(t: &ParamT) -> WConstants {
    let t2 = t.sq();
    let t4 = t2.square();
    let v = &t4 * Rat::frac(5, 4) + &t2 * Rat::frac(59, 2) + Rat::frac(5, 4);
    let r = t.n() * Rat::frac(-3, 2);
    let s = &r * (t4 - &t2 * 34 + 1);
    WConstants { v, r, s }
}

/// The degree-2 map `E*(t) → ℙ¹` with `u(w(Q))⁻¹ = x(φ(Q) + R)`.
///
/// At the single point where numerator and denominator both vanish the same
/// function is evaluated as `(t²+1) + 9(t²+1)(t²−1)² / (x(Q + P* − T*) − 8(t²+1)²)`.
pub fn map_w(t: &ParamT, q: &Point) -> Result<Rat> {
    let es = curve_estar(t);
    es.check(q)?;
    let (x, y) = q.coords("w-map argument")?;
    let WConstants { v, r, s } = w_constants(t);
    let num = y + &r * x + &s;
    let den = (&v - x) * 6;
    if !den.is_zero() {
        return Ok(num / den);
    }
    if !num.is_zero() {
        return Err(Error::Degenerate(format!("w-map has a pole at {q}")));
    }
    let shift = es.add_unchecked(&point_pstar(t), &point_tstar(t).neg());
    let n = t.n();
    match es.add_unchecked(q, &shift) {
        Point::Infinity => Ok(n),
        Point::Affine { x: xs, .. } => {
            let g = &n * (t.sq() - 1).square();
            let den = xs - n.square() * 8;
            Ok(&n + (g * 9).checked_div(&den)?)
        }
    }
}

/// `X(w) = −w² / 4(t²+1)²`
pub fn map_x(t: &ParamT, w: &Rat) -> Rat {
    -(w.square()) / (t.n().square() * 4)
}

/// `u(w) = (w − t² − 1) / ((t²+1)(t² − w²/4)) · X(w)`; `w = ±2t` rejected.
pub fn map_u(t: &ParamT, w: &Rat) -> Result<Rat> {
    let n = t.n();
    let den = (t.sq() - w.square() / 4) * &n;
    if den.is_zero() {
        return Err(Error::InvalidParameter(format!(
            "u(w) undefined at w = {w}"
        )));
    }
    Ok((w - &n) / den * map_x(t, w))
}

/// Left-hand side of the plane curve `C` cut out by `E''[2]`; zero on `C`.
pub fn plane_curve_c(t: &ParamT, x_cap: &Rat, u: &Rat) -> Rat {
    let n2 = t.n().square();
    let t2 = t.sq();
    let c2 = (&n2 * u + 1).square() / 4;
    let c1 = &t2 * (&n2 * u.square() + u) / 2;
    let c0 = t2.square() * u.square() / 4;
    ((x_cap + c2) * x_cap + c1) * x_cap + c0
}

/// The Diophantine triple attached to `[m]R`, `2 ≤ m ≤ MAX_MULTIPLE`.
pub fn triple_from_multiple(t: &ParamT, m: u32) -> Result<TripleAbc> {
    if m < 2 {
        return Err(Error::InvalidParameter(format!(
            "multiple m = {m} must be at least 2"
        )));
    }
    if m > MAX_MULTIPLE {
        return Err(Error::SizeLimit(format!(
            "multiple m = {m} exceeds {MAX_MULTIPLE}"
        )));
    }
    let es = curve_estar(t);
    let tstar = point_tstar(t);
    let base = es.mul_unchecked(i64::from(m - 1), &point_pstar(t));
    let q2 = es.add_unchecked(&base, &tstar);
    let q3 = es.add_unchecked(&q2, &tstar);
    let scale = (t.n() / t.value()).square();
    let mut xs = Vec::with_capacity(3);
    // this order of the coset gives the labels of the closed-form family
    for q in [&q2, &base, &q3] {
        if q.is_infinity() {
            return Err(Error::Degenerate(format!(
                "(m-1)P* + kernel hits O for m = {m}"
            )));
        }
        let w = map_w(t, q)?;
        let pair = -(&scale * map_x(t, &w)) - 1;
        if pair.is_zero() {
            return Err(Error::Degenerate(format!(
                "pairwise product vanishes at {q}"
            )));
        }
        xs.push(pair);
    }
    let (ab, ac, bc) = (&xs[0], &xs[1], &xs[2]);
    let ratio = ab * ac / bc;
    let root = sqrt_exact(&ratio)
        .ok_or_else(|| Error::NonSquare(format!("ab·ac/bc = {ratio} for t = {t}, m = {m}")))?;
    let s3 = sigma3(t);
    let abac = ab * ac;
    // abc = ab·ac / a fixes the sign of a
    let a = if &abac / &root == s3 { root } else { -root };
    if &abac / &a != s3 {
        return Err(Error::Inconsistent(format!(
            "abc cannot equal sigma3 = {s3} for t = {t}, m = {m}"
        )));
    }
    let b = ab / &a;
    let c = ac / &a;
    if &(&b * &c) != bc {
        return Err(Error::Inconsistent(format!(
            "bc mismatch for t = {t}, m = {m}"
        )));
    }
    let triple = TripleAbc::new(a, b, c)?;

    let xm = curve_e(t).mul_unchecked(i64::from(m), &point_r(t));
    let (x, _) = xm.coords("[m]R")?;
    let s1 = sigma1_from_x(t, x)?;
    let sig = triple.sigma();
    if sig.s1 != s1 || sig.s2 != sigma2_from(&s1, &s3) || sig.s3 != s3 {
        return Err(Error::Inconsistent(format!(
            "symmetric functions disagree with [m]R for t = {t}, m = {m}"
        )));
    }
    if !three_torsion_condition(&triple.a, &triple.b, &triple.c) {
        return Err(Error::Inconsistent(format!(
            "order-3 polynomial nonzero for t = {t}, m = {m}"
        )));
    }
    Ok(triple)
}

/// The symmetric polynomial whose vanishing is equivalent to `[3]S' = O`.
pub fn order3_polynomial(a: &Rat, b: &Rat, c: &Rat) -> Rat {
    let p = |x: &Rat, e: i32| x.pow(e).expect("nonnegative exponent");
    let (a2, b2, c2) = (a.square(), b.square(), c.square());
    let abc = a * b * c;
    let abc2 = abc.square();
    -(p(a, 4) * &b2 * &c2) + p(a, 3) * p(b, 3) * &c2 * 2 + p(a, 3) * &b2 * p(c, 3) * 2
        - &a2 * p(b, 4) * &c2
        + &a2 * p(b, 3) * p(c, 3) * 2
        - &a2 * &b2 * p(c, 4)
        + &abc2 * 12
        + &abc * a * 6
        + &abc * b * 6
        + &abc * c * 6
        + a * b * 4
        + a * c * 4
        + b * c * 4
        + 3
}

pub fn three_torsion_condition(a: &Rat, b: &Rat, c: &Rat) -> bool {
    order3_polynomial(a, b, c).is_zero()
}

/// `E''(t, x)`: the curve whose 2-torsion holds the triple attached to `x`.
pub fn curve_epp(t: &ParamT, x: &Rat) -> Result<Curve> {
    let xinv = x
        .recip()
        .map_err(|_| Error::InvalidParameter("E'' needs x != 0".into()))?;
    let n2 = t.n().square();
    let t2 = t.sq();
    let a2 = (&n2 * &xinv + 1).square() / 4;
    let a4 = &t2 * (&n2 * xinv.square() + &xinv) / 2;
    let a6 = t2.square() * xinv.square() / 4;
    Curve::new(a2, a4, a6)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rat {
        s.parse().unwrap()
    }

    fn t(s: &str) -> ParamT {
        s.parse().unwrap()
    }

    #[test]
    fn excluded_parameters() {
        for bad in ["0", "1", "-1", "2/2"] {
            assert!(matches!(
                bad.parse::<ParamT>(),
                Err(Error::InvalidParameter(_))
            ));
        }
    }

    #[test]
    fn e_at_two() {
        let c = curve_e(&t("2"));
        assert_eq!(
            (c.a2(), c.a4(), c.a6()),
            (&r("-33"), &r("1875"), &r("15625"))
        );
        assert_eq!(point_r(&t("2")), Point::affine(r("0"), r("125")));
        assert_eq!(point_r(&t("6")), Point::affine(r("0"), r("50653")));
        assert!(curve_e(&t("6")).contains(&point_r(&t("6"))));
    }

    #[test]
    fn sigma3_values() {
        assert_eq!(sigma3(&t("6")), r("35/12"));
        assert_eq!(
            sqrt_exact(&(sigma3(&t("6")).square() + 1)),
            Some(r("37/12"))
        );
        assert_eq!(sigma3(&t("2")), r("3/4"));
    }

    #[test]
    fn sigma1_matches_closed_form_sum() {
        // -108/119 - 289/252 + 49/68
        let expected = r("-108/119") + r("-289/252") + r("49/68");
        assert_eq!(sigma1_from_x(&t("2"), &r("357/4")).unwrap(), expected);
        assert!(sigma1_from_x(&t("2"), &Rat::zero()).is_err());
    }

    #[test]
    fn sigma2_values() {
        assert_eq!(sigma2_from(&Rat::zero(), &Rat::zero()), r("-3/4"));
        let s1 = sigma1_from_x(&t("2"), &r("357/4")).unwrap();
        let expected = r("51/49") - r("189/289") - r("119/144");
        assert_eq!(sigma2_from(&s1, &r("3/4")), expected);
    }

    #[test]
    fn quartic_condition_values() {
        assert_eq!(
            quartic_condition(&Rat::zero(), &Rat::zero()),
            (r("27"), false)
        );
        for ts in ["2", "6"] {
            let tt = t(ts);
            let sig = triple_from_multiple(&tt, 2).unwrap().sigma();
            assert!(quartic_condition(&sig.s1, &sig.s3).1, "t = {ts}");
        }
    }

    #[test]
    fn estar_and_its_points() {
        let tt = t("2");
        let c = curve_estar(&tt);
        assert_eq!(
            (c.a2(), c.a4(), c.a6()),
            (&r("-33"), &r("-52125"), &r("5221225"))
        );
        assert_eq!(point_tstar(&tt), Point::affine(r("119"), r("486")));
        assert_eq!(point_pstar(&tt), Point::affine(r("-205"), r("2430")));
        assert!(c.contains(&point_tstar(&tt)));
        assert!(c.contains(&point_pstar(&tt)));
        assert_eq!(
            c.torsion_order_upto(&point_tstar(&tt), 12).unwrap(),
            Some(3)
        );
        assert_eq!(c.mul(3, &point_tstar(&tt)).unwrap(), Point::Infinity);
    }

    #[test]
    fn w_map_constants_and_isogeny() {
        let tt = t("2");
        let k = w_constants(&tt);
        assert_eq!(k.v, r("557/4"));
        assert_eq!(k.r, r("-15/2"));
        assert_eq!(k.s, r("1785/2"));
        let es = curve_estar(&tt);
        let ps = point_pstar(&tt);
        let x2r = r("357/4");
        let u = map_u(&tt, &map_w(&tt, &ps).unwrap()).unwrap();
        assert_eq!(u.recip().unwrap(), x2r);
        let shifted = es.add(&ps, &point_tstar(&tt)).unwrap();
        let u = map_u(&tt, &map_w(&tt, &shifted).unwrap()).unwrap();
        assert_eq!(u.recip().unwrap(), x2r);
    }

    #[test]
    fn w_map_removable_point() {
        // 2P* + T* sits at x = v with a vanishing numerator
        let tt = t("2");
        let es = curve_estar(&tt);
        let q = es
            .add(&es.mul(2, &point_pstar(&tt)).unwrap(), &point_tstar(&tt))
            .unwrap();
        assert_eq!(q.x(), Some(&r("557/4")));
        let w = map_w(&tt, &q).unwrap();
        let x3r = curve_e(&tt).mul(3, &point_r(&tt)).unwrap();
        assert_eq!(
            map_u(&tt, &w).unwrap().recip().unwrap(),
            x3r.x().unwrap().clone()
        );
    }

    #[test]
    fn w_map_rejects_infinity_and_off_curve() {
        let tt = t("2");
        assert!(map_w(&tt, &Point::Infinity).is_err());
        assert!(map_w(&tt, &Point::affine(r("1"), r("1"))).is_err());
    }

    #[test]
    fn x_and_u_maps() {
        let tt = t("2");
        assert_eq!(map_x(&tt, &r("10")), r("-1"));
        assert_eq!(map_u(&tt, &r("10")).unwrap(), r("1/21"));
        assert_eq!(map_x(&tt, &Rat::zero()), Rat::zero());
        assert!(map_u(&tt, &r("4")).is_err());
        assert!(map_u(&tt, &r("-4")).is_err());
        let w = r("-7/3");
        assert!(plane_curve_c(&tt, &map_x(&tt, &w), &map_u(&tt, &w).unwrap()).is_zero());
    }

    #[test]
    fn triple_at_two() {
        let tr = triple_from_multiple(&t("2"), 2).unwrap();
        assert_eq!(tr.elements(), [r("-108/119"), r("-289/252"), r("49/68")]);
        assert_eq!(tr.rho_ab, r("10/7"));
        assert_eq!(tr.rho_ac, r("10/17"));
        assert_eq!(tr.rho_bc, r("5/12"));
    }

    #[test]
    fn triple_at_six() {
        let tr = triple_from_multiple(&t("6"), 2).unwrap();
        assert_eq!(tr.elements(), [r("3780/73"), r("26645/252"), r("7/13140")]);
        assert!(three_torsion_condition(&tr.a, &tr.b, &tr.c));
    }

    #[test]
    fn multiple_bounds() {
        let tt = t("3");
        assert!(matches!(
            triple_from_multiple(&tt, 1),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            triple_from_multiple(&tt, 9),
            Err(Error::SizeLimit(_))
        ));
        for m in 2..=MAX_MULTIPLE {
            triple_from_multiple(&tt, m).unwrap();
        }
    }

    #[test]
    fn order3_polynomial_values() {
        assert_eq!(order3_polynomial(&r("1"), &r("3"), &r("8")), r("6479"));
        assert_eq!(
            order3_polynomial(&Rat::zero(), &Rat::zero(), &Rat::zero()),
            r("3")
        );
        assert!(!three_torsion_condition(&r("1"), &r("3"), &r("8")));
    }

    #[test]
    fn epp_discriminant_and_c4_identities() {
        let tt = t("2");
        let p = curve_e(&tt).mul(2, &point_r(&tt)).unwrap();
        let (x, y) = p.coords("2R").unwrap();
        let q = curve_epp(&tt, x).unwrap().std_quantities();
        let tv = tt.value();
        let n2 = tt.n().square();
        let delta = tv.pow(6).unwrap() * y.square() / x.pow(6).unwrap();
        let c4 = (&n2 / x + 1) * (y.square() + x.square() * tv.square() * 3) / x.pow(3).unwrap();
        assert_eq!(q.delta, delta);
        assert_eq!(q.c4, c4);
        assert!(curve_epp(&tt, &Rat::zero()).is_err());
    }

    #[test]
    fn epp_roots_are_shifted_pair_products() {
        // E'' roots are -(X+1)/k² for the products X in {ab, ac, bc}, k = (t²+1)/t
        let tt = t("2");
        let x = r("357/4");
        let c = curve_epp(&tt, &x).unwrap();
        let tr = triple_from_multiple(&tt, 2).unwrap();
        let k2 = (tt.n() / tt.value()).square();
        for prod in [&tr.a * &tr.b, &tr.a * &tr.c, &tr.b * &tr.c] {
            let root = -(prod + 1) / &k2;
            assert!(c.rhs(&root).is_zero());
        }
    }
}

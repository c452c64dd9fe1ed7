//! Induced curves of a Diophantine triple and the extension to sextuples.
//!
//! All group-law work happens on the monic model `y² = (x+ab)(x+ac)(x+bc)`.
//! Elements of the sextuple are read off as `x(·)/abc`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{sqrt_exact, Rat};
use crate::family::{self, ParamT, TripleAbc};
use crate::weierstrass::{Curve, Point};

/// Largest `n` accepted by [`extend_to_sextuple`].
pub const MAX_EXTENSION_INDEX: u32 = 6;

/// A list of nonzero, pairwise distinct rationals.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct DiophTuple(Vec<Rat>);

impl DiophTuple {
    pub fn new(elements: Vec<Rat>) -> Result<Self> {
        if let Some(z) = elements.iter().position(Rat::is_zero) {
            return Err(Error::Degenerate(format!("element {} is zero", z + 1)));
        }
        if !all_distinct(&elements) {
            return Err(Error::Degenerate("repeated element".into()));
        }
        Ok(DiophTuple(elements))
    }

    pub fn elements(&self) -> &[Rat] {
        &self.0
    }

    pub fn verify(&self) -> VerificationReport {
        verify_tuple(&self.0)
    }
}

/// One pair `(i, j)`, 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairResult {
    pub i: usize,
    pub j: usize,
    pub product_plus_one: Rat,
    pub square_root: Option<Rat>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub pair_results: Vec<PairResult>,
    pub all_pass: bool,
    pub distinct: bool,
    pub nonzero: bool,
}

impl VerificationReport {
    pub fn first_failure(&self) -> Option<&PairResult> {
        self.pair_results.iter().find(|r| r.square_root.is_none())
    }
}

fn all_distinct(xs: &[Rat]) -> bool {
    xs.iter()
        .enumerate()
        .all(|(i, x)| xs[i + 1..].iter().all(|y| x != y))
}

/// Checks every pair for `aᵢaⱼ + 1 = □`, recording the nonnegative root.
pub fn verify_tuple(elements: &[Rat]) -> VerificationReport {
    let mut pair_results = Vec::new();
    for (i, x) in elements.iter().enumerate() {
        for (j, y) in elements.iter().enumerate().skip(i + 1) {
            let product_plus_one = x * y + 1;
            let square_root = sqrt_exact(&product_plus_one);
            pair_results.push(PairResult {
                i: i + 1,
                j: j + 1,
                product_plus_one,
                square_root,
            });
        }
    }
    let distinct = all_distinct(elements);
    let nonzero = elements.iter().all(|x| !x.is_zero());
    let squares = pair_results.iter().all(|r| r.square_root.is_some());
    VerificationReport {
        all_pass: squares && distinct && nonzero,
        pair_results,
        distinct,
        nonzero,
    }
}

/// `y² = (x+ab)(x+ac)(x+bc)`.
pub fn induced_curve(a: &Rat, b: &Rat, c: &Rat) -> Result<Curve> {
    if a.is_zero() || b.is_zero() || c.is_zero() {
        return Err(Error::Degenerate(
            "induced curve needs nonzero elements".into(),
        ));
    }
    let (ab, ac, bc) = (a * b, a * c, b * c);
    if ab == ac || ab == bc || ac == bc {
        return Err(Error::SingularCurve(format!(
            "pairwise products of {{{a}, {b}, {c}}} repeat"
        )));
    }
    let a2 = &ab + &ac + &bc;
    let a4 = &ab * &ac + &ab * &bc + &ac * &bc;
    let a6 = (ab * c).square();
    Curve::new(a2, a4, a6)
}

/// `P' = [0, abc]`
pub fn point_pprime(a: &Rat, b: &Rat, c: &Rat) -> Point {
    Point::affine(Rat::zero(), a * b * c)
}

/// `S' = [1, ρ_ab·ρ_ac·ρ_bc]` with nonnegative roots.
pub fn point_sprime(triple: &TripleAbc) -> Point {
    Point::affine(Rat::one(), &triple.rho_ab * &triple.rho_ac * &triple.rho_bc)
}

fn curve_of(triple: &TripleAbc) -> Result<Curve> {
    induced_curve(&triple.a, &triple.b, &triple.c)
}

/// `[3]S' = O`.
pub fn order3_check(triple: &TripleAbc) -> Result<bool> {
    let e = curve_of(triple)?;
    let s = point_sprime(triple);
    Ok(e.mul(3, &s)?.is_infinity())
}

/// The point `R'` with `[2]R' = S'`.
pub fn half_point(triple: &TripleAbc) -> Point {
    let (r, s, t) = (&triple.rho_ab, &triple.rho_ac, &triple.rho_bc);
    let x = r * s + r * t + s * t + 1;
    let y = (r + s) * (r + t) * (s + t);
    Point::affine(x, y)
}

pub fn half_point_check(triple: &TripleAbc) -> Result<bool> {
    let e = curve_of(triple)?;
    let h = half_point(triple);
    if !e.contains(&h) {
        return Ok(false);
    }
    Ok(e.double(&h)? == point_sprime(triple))
}

/// `{d, e, f}` from `[2n+1]P'` and `[2n+1]P' ± S'`.
pub fn extend_to_sextuple(triple: &TripleAbc, n: u32) -> Result<[Rat; 3]> {
    if n > MAX_EXTENSION_INDEX {
        return Err(Error::SizeLimit(format!(
            "extension index n = {n} exceeds {MAX_EXTENSION_INDEX}"
        )));
    }
    let e = curve_of(triple)?;
    let s = point_sprime(triple);
    if !e.mul(3, &s)?.is_infinity() {
        return Err(Error::InvalidParameter(
            "S' does not have order 3 on the induced curve".into(),
        ));
    }
    let p = point_pprime(&triple.a, &triple.b, &triple.c);
    let abc = &triple.a * &triple.b * &triple.c;
    let base = e.mul_unchecked(2 * i64::from(n) + 1, &p);
    let pts = [
        ("[2n+1]P'", base.clone()),
        ("[2n+1]P'+S'", e.add_unchecked(&base, &s)),
        ("[2n+1]P'-S'", e.add_unchecked(&base, &s.neg())),
    ];
    let neg_p = p.neg();
    let mut out = Vec::with_capacity(3);
    for (name, q) in pts {
        if q.is_infinity() || q == p || q == neg_p {
            return Err(Error::Degenerate(format!("{name} = {q} for n = {n}")));
        }
        let (x, _) = q.coords(name)?;
        let el = x / &abc;
        if el.is_zero() {
            return Err(Error::Degenerate(format!("{name} gives a zero element")));
        }
        out.push(el);
    }
    let mut six = triple.elements().to_vec();
    six.extend(out.iter().cloned());
    if !all_distinct(&six) {
        return Err(Error::Degenerate(format!("repeated element for n = {n}")));
    }
    let report = verify_tuple(&six);
    if !report.all_pass {
        return Err(Error::Inconsistent(format!(
            "constructed sextuple fails verification for n = {n}"
        )));
    }
    let [d, e, f]: [Rat; 3] = out.try_into().expect("three elements");
    Ok([d, e, f])
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SextupleRecord {
    pub t: Rat,
    pub m: u32,
    pub n: u32,
    pub triple: TripleAbc,
    pub d: Rat,
    pub e: Rat,
    pub f: Rat,
    pub report: VerificationReport,
}

impl SextupleRecord {
    pub fn elements(&self) -> [Rat; 6] {
        [
            self.triple.a.clone(),
            self.triple.b.clone(),
            self.triple.c.clone(),
            self.d.clone(),
            self.e.clone(),
            self.f.clone(),
        ]
    }
}

/// Full pipeline: `[m]R` → triple → sextuple at index `n`.
pub fn generate(t: &ParamT, m: u32, n: u32) -> Result<SextupleRecord> {
    let triple = family::triple_from_multiple(t, m)?;
    record_from_triple(t, m, n, triple)
}

pub(crate) fn record_from_triple(
    t: &ParamT,
    m: u32,
    n: u32,
    triple: TripleAbc,
) -> Result<SextupleRecord> {
    let [d, e, f] = extend_to_sextuple(&triple, n)?;
    let mut six = triple.elements().to_vec();
    six.extend([d.clone(), e.clone(), f.clone()]);
    let report = verify_tuple(&six);
    Ok(SextupleRecord {
        t: t.value().clone(),
        m,
        n,
        triple,
        d,
        e,
        f,
        report,
    })
}

/// `x(q)x(r)x(q+r) + a₆`, which is a square whenever `a₆` is.
pub fn square_product_check(c: &Curve, q: &Point, r: &Point) -> Result<(Rat, bool)> {
    if sqrt_exact(c.a6()).is_none() {
        return Err(Error::InvalidParameter(format!(
            "constant term {} is not a square",
            c.a6()
        )));
    }
    let s = c.add(q, r)?;
    let xq = q.coords("q")?.0;
    let xr = r.coords("r")?.0;
    let xs = s.coords("q + r")?.0;
    let value = xq * xr * xs + c.a6();
    let square = sqrt_exact(&value).is_some();
    Ok((value, square))
}

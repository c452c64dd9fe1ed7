//! Reduction types of `E''(t, x)` at odd primes and the valuation tables for
//! multiples of `R`.

use std::fmt;

use num_bigint::BigInt;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactnum::{is_prime_u64, mod_p, vp, vp_int, vp_or_inf, Factorizer, Rat};
use crate::family::{self, ParamT, TripleAbc};
use crate::sweep;
use crate::weierstrass::{Curve, Point};

/// Largest `m_max` for the valuation tables.
pub const MAX_TABLE_M: u32 = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ReductionType {
    #[serde(rename = "good")]
    Good,
    #[serde(rename = "mult")]
    Multiplicative,
    #[serde(rename = "add")]
    Additive,
}

impl fmt::Display for ReductionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReductionType::Good => "good",
            ReductionType::Multiplicative => "mult",
            ReductionType::Additive => "add",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReductionReport {
    pub p: u64,
    #[serde(rename = "type")]
    pub kind: ReductionType,
    pub v_delta: i64,
    /// `None` when `c₄ = 0`.
    pub v_c4: Option<i64>,
    pub scaling_exponent: i64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

fn check_odd_prime(p: u64) -> Result<()> {
    if p == 2 {
        return Err(Error::InvalidParameter("p = 2 is out of scope".into()));
    }
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(())
}

fn integer_t(t: &ParamT) -> Result<i64> {
    t.value()
        .to_i64()
        .ok_or_else(|| Error::InvalidParameter(format!("t = {t} must be a machine integer")))
}

/// `(Δ, c₄)` of `E''(t, x)` for a point `(x, y)` of `E(t)`, via the closed forms.
pub fn epp_invariants(t: &ParamT, pt: &Point) -> Result<(Rat, Rat)> {
    family::curve_e(t).check(pt)?;
    let (x, y) = pt.coords("point of E")?;
    if x.is_zero() {
        return Err(Error::InvalidParameter("E'' needs x != 0".into()));
    }
    let tv = t.value();
    let delta = tv.pow(6)? * y.square() / x.pow(6)?;
    let n2 = (tv.square() + 1).square();
    let c4 = (n2 / x + 1) * (y.square() + x.square() * tv.square() * 3) / x.pow(3)?;
    Ok((delta, c4))
}

/// Scales to a p-integral model, then strips factors `(p⁴, p⁶)` from
/// `(c₄, Δ)` while possible. Returns the model and the net exponent `k`
/// of `u = pᵏ`.
pub fn p_minimal_model(c: &Curve, p: u64) -> Result<(Curve, i64)> {
    check_odd_prime(p)?;
    let mut k: Option<i64> = None;
    for (a, i) in [(c.a2(), 2), (c.a4(), 4), (c.a6(), 6)] {
        if let Some(v) = vp_or_inf(a, p)? {
            let f = v.div_euclid(i);
            k = Some(k.map_or(f, |k0| k0.min(f)));
        }
    }
    let mut k = k.unwrap_or(0);
    let pr = Rat::from(p as i64);
    let mut model = c.scale(&pr.pow(k as i32)?)?;
    loop {
        let q = model.std_quantities();
        let vc4 = vp_or_inf(&q.c4, p)?;
        let vd = vp(&q.delta, p)?;
        if vc4.is_none_or(|v| v >= 4) && vd >= 12 {
            model = model.scale(&pr)?;
            k += 1;
        } else {
            return Ok((model, k));
        }
    }
}

/// Reduction type at an odd prime from `(v(Δ), v(c₄))` on the minimal model.
pub fn classify(c: &Curve, p: u64) -> Result<ReductionReport> {
    let (model, k) = p_minimal_model(c, p)?;
    let q = model.std_quantities();
    let v_delta = vp(&q.delta, p)?;
    let v_c4 = vp_or_inf(&q.c4, p)?;
    let kind = if v_delta == 0 {
        ReductionType::Good
    } else if v_c4 == Some(0) {
        ReductionType::Multiplicative
    } else {
        ReductionType::Additive
    };
    let mut notes = Vec::new();
    if p == 3 {
        notes.push("p = 3: valuation criterion only, no Tate's algorithm".to_string());
    }
    Ok(ReductionReport {
        p,
        kind,
        v_delta,
        v_c4,
        scaling_exponent: k,
        notes,
    })
}

/// What the case analysis for integer `t` predicts at `p`, if anything.
fn case_prediction(t: i64, x: &Rat, p: u64) -> Result<(Option<&'static str>, Option<bool>)> {
    let pi = p as i64;
    let n = BigInt::from(t) * t + 1;
    if t % pi == 0 {
        let integral = vp_or_inf(x, p)?.is_none_or(|v| v >= 0);
        if integral && mod_p(x, p)? == p - 1 {
            return Ok((Some("p | t, x = -1 mod p: no prediction"), None));
        }
        // multiplicative expected
        return Ok((Some("p | t, x != -1 mod p"), Some(false)));
    }
    let vn = vp_int(&n, p)?;
    if vn == 0 {
        return Ok((None, None));
    }
    let vx = vp_or_inf(x, p)?.unwrap_or(i64::MAX);
    if vx <= 0 {
        return Ok((Some("p | t^2+1, v_p(x) <= 0"), Some(false)));
    }
    if vn == 1 && vx >= 4 {
        return Ok((Some("p || t^2+1, v_p(x) >= 4"), Some(false)));
    }
    if vn == 1 {
        return Ok((
            Some("p || t^2+1 with v_p(x) in 1..3: outside the case analysis"),
            None,
        ));
    }
    Ok((Some("p^2 | t^2+1: outside the case analysis"), None))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BadPrimes {
    pub t: Rat,
    pub reports: Vec<ReductionReport>,
    /// Whether `v₃(y) ≤ 0`, the hypothesis for the containment.
    pub containment_applies: bool,
    /// Additive primes not dividing `t(t²+1)`.
    pub exceptions: Vec<u64>,
}

impl BadPrimes {
    pub fn additive(&self) -> Vec<u64> {
        self.reports
            .iter()
            .filter(|r| r.kind == ReductionType::Additive)
            .map(|r| r.p)
            .collect()
    }

    pub fn report(&self, p: u64) -> Option<&ReductionReport> {
        self.reports.iter().find(|r| r.p == p)
    }
}

/// Every odd prime dividing `t(t²+1)` plus every odd prime of bad reduction
/// for `E''(t, x)`, each with its report.
pub fn bad_primes_epp(t: &ParamT, pt: &Point, fz: &Factorizer) -> Result<BadPrimes> {
    let ti = integer_t(t)?;
    let (delta, _) = epp_invariants(t, pt)?;
    let (x, y) = pt.coords("point of E")?;
    let curve = family::curve_epp(t, x)?;
    let tn = BigInt::from(ti) * (BigInt::from(ti) * ti + 1);
    let core: Vec<u64> = fz.prime_divisors(&tn)?;
    let mut cands = core.clone();
    for n in [delta.numer(), delta.denom()] {
        if n.magnitude() > &1u32.into() {
            cands.extend(fz.prime_divisors(n)?);
        }
    }
    cands.retain(|&p| p != 2);
    cands.sort_unstable();
    cands.dedup();

    let mut reports = Vec::new();
    for p in cands {
        let mut rep = classify(&curve, p)?;
        let in_core = core.contains(&p);
        if !in_core && rep.kind == ReductionType::Good {
            continue;
        }
        if in_core {
            let (case, additive_expected) = case_prediction(ti, x, p)?;
            if let Some(c) = case {
                rep.notes.push(c.to_string());
            }
            if additive_expected == Some(false) && rep.kind == ReductionType::Additive {
                rep.notes
                    .push("warning: additive where the case analysis predicts otherwise".into());
            }
        }
        reports.push(rep);
    }
    let containment_applies = vp_or_inf(y, 3)?.is_some_and(|v| v <= 0);
    let exceptions: Vec<u64> = reports
        .iter()
        .filter(|r| r.kind == ReductionType::Additive && !core.contains(&r.p))
        .map(|r| r.p)
        .collect();
    if containment_applies && !exceptions.is_empty() {
        return Err(Error::Inconsistent(format!(
            "additive primes {exceptions:?} outside t(t^2+1) although v_3(y) <= 0"
        )));
    }
    Ok(BadPrimes {
        t: t.value().clone(),
        reports,
        containment_applies,
        exceptions,
    })
}

/// Expected valuation in a table row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Prediction {
    Exactly(i64),
    Negative,
    Positive,
}

impl Prediction {
    /// `observed = None` stands for `+∞` (a zero coordinate).
    pub fn holds(&self, observed: Option<i64>) -> bool {
        match (self, observed) {
            (Prediction::Exactly(k), Some(v)) => *k == v,
            (Prediction::Exactly(_), None) => false,
            (Prediction::Negative, v) => v.is_some_and(|v| v < 0),
            (Prediction::Positive, v) => v.is_none_or(|v| v > 0),
        }
    }
}

impl fmt::Display for Prediction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Prediction::Exactly(k) => write!(f, "{k}"),
            Prediction::Negative => f.write_str("<0"),
            Prediction::Positive => f.write_str(">0"),
        }
    }
}

impl Serialize for Prediction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Prediction::Exactly(k) => s.serialize_i64(*k),
            other => s.collect_str(other),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValuationRow {
    pub m: u32,
    pub quantity: String,
    pub predicted: Prediction,
    pub observed: Option<i64>,
    pub lemma_part: &'static str,
    pub pass: bool,
}

fn row(
    m: u32,
    quantity: String,
    predicted: Prediction,
    value: &Rat,
    p: u64,
    part: &'static str,
) -> Result<ValuationRow> {
    let observed = vp_or_inf(value, p)?;
    Ok(ValuationRow {
        m,
        quantity,
        pass: predicted.holds(observed),
        predicted,
        observed,
        lemma_part: part,
    })
}

fn check_m_max(m_max: u32) -> Result<()> {
    if m_max == 0 {
        return Err(Error::InvalidParameter("m_max must be at least 1".into()));
    }
    if m_max > MAX_TABLE_M {
        return Err(Error::SizeLimit(format!(
            "m_max = {m_max} exceeds {MAX_TABLE_M}"
        )));
    }
    Ok(())
}

fn multiples_of_r(t: &ParamT, n: usize) -> Result<Vec<Point>> {
    family::curve_e(t).multiples(&family::point_r(t), n)
}

fn x_of(p: &Point, what: &str) -> Result<Rat> {
    Ok(p.coords(what)?.0.clone())
}

/// Predicted against observed `v_p` for multiples of `R` when `p ∥ t²+1`.
pub fn valuation_table(t: &ParamT, p: u64, m_max: u32) -> Result<Vec<ValuationRow>> {
    check_odd_prime(p)?;
    check_m_max(m_max)?;
    let ti = integer_t(t)?;
    let n = BigInt::from(ti) * ti + 1;
    match vp_int(&n, p)? {
        1 => {}
        0 => {
            return Err(Error::InvalidParameter(format!(
                "{p} does not divide t^2+1"
            )))
        }
        _ => return Err(Error::InvalidParameter(format!("{p}^2 divides t^2+1"))),
    }
    let mult = multiples_of_r(t, 4 * m_max as usize + 3)?;
    let y4 = mult[4].coords("[4]R")?.1.clone();
    let mut rows = vec![
        row(
            1,
            "x([2]R)".into(),
            Prediction::Exactly(0),
            &x_of(&mult[2], "[2]R")?,
            p,
            "double",
        )?,
        row(
            1,
            "x([3]R)".into(),
            Prediction::Exactly(4),
            &x_of(&mult[3], "[3]R")?,
            p,
            "triple",
        )?,
        row(
            1,
            "x([4]R)".into(),
            Prediction::Exactly(-2),
            &x_of(&mult[4], "[4]R")?,
            p,
            "quadruple",
        )?,
        row(
            1,
            "y([4]R)".into(),
            Prediction::Exactly(-3),
            &y4,
            p,
            "quadruple-y",
        )?,
    ];
    for m in 1..=m_max {
        let mi = m as usize;
        let vm = vp_int(&BigInt::from(m), p)?;
        let vm1 = vp_int(&BigInt::from(m + 1), p)?;
        rows.push(row(
            m,
            format!("x([4*{m}]R)"),
            Prediction::Exactly(-2 - 2 * vm),
            &x_of(&mult[4 * mi], "[4m]R")?,
            p,
            "4m",
        )?);
        rows.push(row(
            m,
            format!("x(R+[{m}][4]R)"),
            Prediction::Exactly(4 + vm),
            &x_of(&mult[4 * mi + 1], "[4m+1]R")?,
            p,
            "4m+1",
        )?);
        rows.push(row(
            m,
            format!("x([2]R+[{m}][4]R)"),
            Prediction::Exactly(0),
            &x_of(&mult[4 * mi + 2], "[4m+2]R")?,
            p,
            "4m+2",
        )?);
        rows.push(row(
            m,
            format!("x([3]R+[{m}][4]R)"),
            Prediction::Exactly(4 + vm1),
            &x_of(&mult[4 * mi + 3], "[4m+3]R")?,
            p,
            "4m+3",
        )?);
    }
    Ok(rows)
}

/// Sign of `v₃` along the classes of multiples of `R` modulo 3.
pub fn mod3_table(t: &ParamT, m_max: u32) -> Result<Vec<ValuationRow>> {
    check_m_max(m_max)?;
    integer_t(t)?;
    let mult = multiples_of_r(t, 3 * m_max as usize + 2)?;
    let mut rows = Vec::new();
    for m in 1..=m_max {
        let mi = m as usize;
        rows.push(row(
            m,
            format!("x([{m}][3]R)"),
            Prediction::Negative,
            &x_of(&mult[3 * mi], "[3m]R")?,
            3,
            "3m",
        )?);
        rows.push(row(
            m,
            format!("x(R+[{m}][3]R)"),
            Prediction::Positive,
            &x_of(&mult[3 * mi + 1], "[3m+1]R")?,
            3,
            "3m+1",
        )?);
        rows.push(row(
            m,
            format!("x([2]R+[{m}][3]R)"),
            Prediction::Positive,
            &x_of(&mult[3 * mi + 2], "[3m+2]R")?,
            3,
            "3m+2",
        )?);
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ResidueRow {
    pub m: u32,
    /// `None` when `x([m]R)` is not q-integral.
    pub residue: Option<u64>,
    pub pass: bool,
}

/// `x([m]R) ≢ −1 (mod q)` for `q | t`, `1 ≤ m ≤ m_max`.
pub fn residue_check(t: &ParamT, q: u64, m_max: u32) -> Result<(bool, Vec<ResidueRow>)> {
    check_odd_prime(q)?;
    check_m_max(m_max)?;
    let ti = integer_t(t)?;
    if ti % q as i64 != 0 {
        return Err(Error::InvalidParameter(format!(
            "{q} does not divide t = {ti}"
        )));
    }
    let mult = multiples_of_r(t, m_max as usize)?;
    let mut rows = Vec::new();
    for m in 1..=m_max {
        let x = x_of(&mult[m as usize], "[m]R")?;
        let residue = match vp_or_inf(&x, q)? {
            Some(v) if v < 0 => None,
            _ => Some(mod_p(&x, q)?),
        };
        rows.push(ResidueRow {
            m,
            residue,
            pass: residue != Some(q - 1),
        });
    }
    Ok((rows.iter().all(|r| r.pass), rows))
}

/// One `(t, m)` case of the squarefree sweep.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepRow {
    pub t: i64,
    pub m: u32,
    pub squarefree: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub triple: Option<TripleAbc>,
    pub additive_primes: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl SweepRow {
    /// Skipped rows (non-squarefree `t²+1`) pass vacuously.
    pub fn passes(&self) -> bool {
        !self.squarefree
            || (self.triple.is_some() && self.additive_primes.is_empty() && self.error.is_none())
    }
}

pub fn sweep_cases(t_max: i64, m_max: u32) -> Vec<(i64, u32)> {
    (2..=t_max)
        .flat_map(|t| (2..=m_max).map(move |m| (t, m)))
        .collect()
}

/// Triple extraction plus classification at odd `p | t(t²+1)` for one case.
pub fn sweep_case(case: &(i64, u32)) -> SweepRow {
    let (t, m) = *case;
    let fz = Factorizer::default();
    let mut out = SweepRow {
        t,
        m,
        squarefree: false,
        triple: None,
        additive_primes: Vec::new(),
        error: None,
    };
    let res = (|| -> Result<()> {
        let n = BigInt::from(t) * t + 1;
        out.squarefree = fz.is_squarefree(&n)?;
        if !out.squarefree {
            return Ok(());
        }
        let pt = ParamT::from_int(t)?;
        out.triple = Some(family::triple_from_multiple(&pt, m)?);
        let mr = family::curve_e(&pt).mul(m as i64, &family::point_r(&pt))?;
        let curve = family::curve_epp(&pt, mr.coords("[m]R")?.0)?;
        for p in fz.prime_divisors(&(n * t))? {
            if p != 2 && classify(&curve, p)?.kind == ReductionType::Additive {
                out.additive_primes.push(p);
            }
        }
        Ok(())
    })();
    if let Err(e) = res {
        out.error = Some(e.to_string());
    }
    out
}

/// All cases `2 ≤ t ≤ t_max`, `2 ≤ m ≤ m_max`, in order.
pub fn squarefree_sweep(t_max: i64, m_max: u32) -> Vec<SweepRow> {
    sweep::map_ordered(&sweep_cases(t_max, m_max), sweep_case)
}

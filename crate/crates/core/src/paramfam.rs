//! The sextuple family as explicit rational functions of `t`, plus fixtures.

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::engine::verify_tuple;
use crate::error::{Error, Result};
use crate::exactnum::{sqrt_exact, Rat};
use crate::family::{self, ParamT, TripleAbc};
use crate::poly::IntPoly;
use crate::sweep;
use crate::weierstrass::{Curve, Point};

/// `scale · tᵏ · ∏ polyᵉ`
struct Factored {
    scale: i64,
    t_power: i32,
    factors: &'static [(IntPoly, i32)],
}

impl Factored {
    fn eval(&self, t: &Rat) -> Rat {
        let mut v = Rat::from(self.scale) * t.pow(self.t_power).expect("nonnegative power");
        for (p, e) in self.factors {
            v *= &p.eval(t).pow(*e).expect("nonnegative power");
        }
        v
    }
}

const T_PLUS_1: IntPoly = IntPoly(&[1, 1]);
const T_MINUS_1: IntPoly = IntPoly(&[1, -1]);
const Q_PLUS: IntPoly = IntPoly(&[1, 6, 1]);
const Q_MINUS: IntPoly = IntPoly(&[1, -6, 1]);
const L1: IntPoly = IntPoly(&[1, 3, -2]);
const L2: IntPoly = IntPoly(&[1, -3, -2]);
const L3: IntPoly = IntPoly(&[2, 3, -1]);
const L4: IntPoly = IntPoly(&[2, -3, -1]);
const L5: IntPoly = IntPoly(&[1, 0, 7]);
const L6: IntPoly = IntPoly(&[7, 0, 1]);

const D_NUM: Factored = Factored {
    scale: 6,
    t_power: 0,
    factors: &[
        (T_PLUS_1, 1),
        (T_MINUS_1, 1),
        (Q_PLUS, 1),
        (Q_MINUS, 1),
        (IntPoly(&[8, 27, 24, -54, 24, 27, 8]), 1),
        (IntPoly(&[8, -27, 24, 54, 24, -27, 8]), 1),
        (IntPoly(&[1, 0, 22, 0, -174, 0, 22, 0, 1]), 1),
    ],
};

const D_DEN: Factored = Factored {
    scale: 1,
    t_power: 1,
    factors: &[(
        IntPoly(&[37, 0, -885, 0, 9735, 0, -13678, 0, 9735, 0, -885, 0, 37]),
        2,
    )],
};

const E_NUM: Factored = Factored {
    scale: -2,
    t_power: 1,
    factors: &[
        (IntPoly(&[4, 0, -111, 0, 18, 0, 25]), 1),
        (IntPoly(&[3, 14, -42, 30, 51, 18, -12, 2]), 1),
        (IntPoly(&[3, -14, -42, -30, 51, -18, -12, -2]), 1),
        (L1, 1),
        (L2, 1),
        (L3, 1),
        (L4, 1),
        (L5, 1),
        (L6, 1),
    ],
};

const E_DEN: Factored = Factored {
    scale: 3,
    t_power: 0,
    factors: &[
        (T_PLUS_1, 1),
        (T_MINUS_1, 1),
        (Q_PLUS, 1),
        (Q_MINUS, 1),
        (
            IntPoly(&[
                16, 0, 141, 0, -1500, 0, 7586, 0, -2724, 0, 165, 0, 424, 0, -12,
            ]),
            2,
        ),
    ],
};

const F_NUM: Factored = Factored {
    scale: 2,
    t_power: 1,
    factors: &[
        (IntPoly(&[25, 0, 18, 0, -111, 0, 4]), 1),
        (IntPoly(&[2, -12, 18, 51, 30, -42, 14, 3]), 1),
        (IntPoly(&[2, 12, 18, -51, 30, 42, 14, -3]), 1),
        (L1, 1),
        (L2, 1),
        (L3, 1),
        (L4, 1),
        (L5, 1),
        (L6, 1),
    ],
};

const F_DEN: Factored = Factored {
    scale: 3,
    t_power: 0,
    factors: &[
        (T_PLUS_1, 1),
        (T_MINUS_1, 1),
        (Q_PLUS, 1),
        (Q_MINUS, 1),
        (
            IntPoly(&[
                12, 0, -424, 0, -165, 0, 2724, 0, -7586, 0, 1500, 0, -141, 0, -16,
            ]),
            2,
        ),
    ],
};

fn quotient(num: Rat, den: Rat, what: &str, t: &ParamT) -> Result<Rat> {
    if den.is_zero() {
        return Err(Error::InvalidParameter(format!(
            "denominator of {what} vanishes at t = {t}"
        )));
    }
    Ok(num / den)
}

/// The triple part of the family.
pub fn abc_closed_form(t: &ParamT) -> Result<(Rat, Rat, Rat)> {
    let tv = t.value();
    let (qp, qm) = (Q_PLUS.eval(tv), Q_MINUS.eval(tv));
    let (tp, tm) = (tv + 1, tv - 1);
    let a = quotient(tv * 18 * &tm * &tp, &qm * &qp, "a", t)?;
    let b = quotient(&tm * qp.square(), tv * 6 * &tp * &qm, "b", t)?;
    let c = quotient(&tp * qm.square(), tv * 6 * &tm * &qp, "c", t)?;
    Ok((a, b, c))
}

/// The three extension elements of the family.
pub fn def_closed_form(t: &ParamT) -> Result<(Rat, Rat, Rat)> {
    let tv = t.value();
    let d = quotient(D_NUM.eval(tv), D_DEN.eval(tv), "d", t)?;
    let e = quotient(E_NUM.eval(tv), E_DEN.eval(tv), "e", t)?;
    let f = quotient(F_NUM.eval(tv), F_DEN.eval(tv), "f", t)?;
    Ok((d, e, f))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyPoint {
    pub t: Rat,
    pub elements: [Rat; 6],
    pub negatives: usize,
}

impl FamilyPoint {
    pub fn abc(&self) -> &[Rat] {
        &self.elements[..3]
    }

    pub fn def(&self) -> &[Rat] {
        &self.elements[3..]
    }
}

/// Evaluates the family at `t`; fails with `Inconsistent` if the values do
/// not form a sextuple.
pub fn family_point(t: &ParamT) -> Result<FamilyPoint> {
    let (a, b, c) = abc_closed_form(t)?;
    let (d, e, f) = def_closed_form(t)?;
    let elements = [a, b, c, d, e, f];
    let report = verify_tuple(&elements);
    if !report.nonzero || !report.distinct {
        return Err(Error::Degenerate(format!("family collapses at t = {t}")));
    }
    if !report.all_pass {
        return Err(Error::Inconsistent(format!(
            "family values at t = {t} fail verification"
        )));
    }
    let negatives = elements.iter().filter(|x| x.is_negative()).count();
    Ok(FamilyPoint {
        t: t.value().clone(),
        elements,
        negatives,
    })
}

/// Number of negative elements among the six.
pub fn sign_signature(t: &ParamT) -> Result<usize> {
    let (a, b, c) = abc_closed_form(t)?;
    let (d, e, f) = def_closed_form(t)?;
    Ok([a, b, c, d, e, f]
        .iter()
        .filter(|x| x.is_negative())
        .count())
}

/// Largest number of samples a single scan may request.
pub const MAX_SCAN_ROWS: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanRow {
    pub t: Rat,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elements: Option<[Rat; 6]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub negatives: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
}

/// Sample points `from, from+step, …` up to and including `to`.
pub fn scan_points(from: &Rat, to: &Rat, step: &Rat) -> Result<Vec<Rat>> {
    if !step.is_positive() {
        return Err(Error::InvalidParameter(format!(
            "step {step} must be positive"
        )));
    }
    if from > to {
        return Err(Error::InvalidParameter(format!("empty range {from}..{to}")));
    }
    let count = ((to - from) / step)
        .inner()
        .floor()
        .to_integer()
        .to_usize()
        .filter(|c| *c < MAX_SCAN_ROWS)
        .ok_or_else(|| Error::SizeLimit(format!("scan exceeds {MAX_SCAN_ROWS} rows")))?;
    Ok((0..=count)
        .map(|k| from + step * Rat::from(k as i64))
        .collect())
}

/// Family rows for every sample, in increasing `t`. Inadmissible samples are
/// kept as rows with a `skipped` reason.
pub fn scan(from: &Rat, to: &Rat, step: &Rat) -> Result<Vec<ScanRow>> {
    let pts = scan_points(from, to, step)?;
    Ok(sweep::map_ordered(&pts, scan_row))
}

/// One scan sample; inadmissible `t` yields a row with a `skipped` reason.
pub fn scan_row(t: &Rat) -> ScanRow {
    let res = ParamT::new(t.clone()).and_then(|pt| family_point(&pt));
    match res {
        Ok(fp) => ScanRow {
            t: t.clone(),
            negatives: Some(fp.negatives),
            elements: Some(fp.elements),
            skipped: None,
        },
        Err(e) => ScanRow {
            t: t.clone(),
            elements: None,
            negatives: None,
            skipped: Some(e.to_string()),
        },
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub elements: Vec<Rat>,
    pub source: &'static str,
}

const RANK_ONE_TRIPLE: [&str; 3] = [
    "36534805866201747/2323780774755404",
    "1065197767305747/13609226201091404",
    "3802080647508196/6238332600753747",
];

const RANK_ONE_EXTENSION: [&str; 3] = [
    "143947705777192337861060209232361164451/159554724645105598216911731751641945996",
    "27566706033755538837165550223247346480484/28811406145997336392588207503703089363",
    "5959833363761715860447368794188813530156/3132578990197106752312648160330628526617",
];

const T6_SEXTUPLE: [&str; 6] = [
    "3780/73",
    "26645/252",
    "7/13140",
    "791361752602550684660/1827893092234556692801",
    "95104852709815809228981184/351041911654651335633266955",
    "3210891270762333567521084544/21712719223923581005355",
];

fn parse_all(xs: &[&str]) -> Vec<Rat> {
    xs.iter()
        .map(|s| s.parse().expect("catalog literal"))
        .collect()
}

/// Named tuples used as fixtures; every entry verifies at construction.
pub fn catalog() -> Vec<CatalogEntry> {
    let mut rank_one_six = parse_all(&RANK_ONE_TRIPLE);
    rank_one_six.extend(parse_all(&RANK_ONE_EXTENSION));
    let entries = vec![
        CatalogEntry {
            name: "diophantus",
            elements: parse_all(&["1/16", "33/16", "17/4", "105/16"]),
            source: "rational quadruple of Diophantus",
        },
        CatalogEntry {
            name: "fermat",
            elements: parse_all(&["1", "3", "8", "120"]),
            source: "integer quadruple of Fermat",
        },
        CatalogEntry {
            name: "euler",
            elements: parse_all(&["1", "3", "8", "120", "777480/8288641"]),
            source: "Euler's extension of the Fermat quadruple",
        },
        CatalogEntry {
            name: "gibbs",
            elements: parse_all(&[
                "11/192",
                "35/192",
                "155/27",
                "512/27",
                "1235/48",
                "180873/16",
            ]),
            source: "first known rational sextuple (Gibbs)",
        },
        CatalogEntry {
            name: "t6-sextuple",
            elements: parse_all(&T6_SEXTUPLE),
            source: "closed-form family at t = 6, all elements positive",
        },
        CatalogEntry {
            name: "remark1-triple",
            elements: parse_all(&RANK_ONE_TRIPLE),
            source: "triple from 6U, U = [-11, 125] on Y^2 = X^3 + 1512X + 33588",
        },
        CatalogEntry {
            name: "remark1-sextuple",
            elements: rank_one_six,
            source: "remark1-triple with three extension elements",
        },
    ];
    for e in &entries {
        debug_assert!(
            verify_tuple(&e.elements).all_pass,
            "catalog entry {}",
            e.name
        );
    }
    entries
}

pub fn catalog_entry(name: &str) -> Option<CatalogEntry> {
    catalog().into_iter().find(|e| e.name == name)
}

/// The all-positive triple with `abc = 3/4` coming from `6U` on
/// `Y² = X³ + 1512X + 33588`.
///
/// That curve is the depressed model of `E(2)` and `U` corresponds to `R`,
/// so the triple is read off from `[6]R` through the isogeny.
pub fn rank_one_reconstruct() -> Result<TripleAbc> {
    let t = ParamT::from_int(2)?;
    let quartic_curve = Curve::from_ints(0, 1512, 33588)?;
    let u = Point::affine(Rat::from(-11), Rat::from(125));
    quartic_curve.check(&u)?;
    let (depressed, shift) = family::curve_e(&t).depressed();
    if depressed != quartic_curve {
        return Err(Error::Inconsistent(
            "E(2) does not depress to the rank-one model".into(),
        ));
    }
    let back = |p: &Point| -> Result<Rat> { Ok(p.coords("multiple of U")?.0 - &shift) };
    if back(&u)? != *family::point_r(&t).coords("R")?.0 {
        return Err(Error::Inconsistent("U does not correspond to R".into()));
    }
    let x6 = back(&quartic_curve.mul(6, &u)?)?;
    let s3 = family::sigma3(&t);
    let s1 = family::sigma1_from_x(&t, &x6)?;
    if !family::quartic_condition(&s1, &s3).1 {
        return Err(Error::Inconsistent(
            "6U does not satisfy the quartic condition".into(),
        ));
    }
    for k in 2..6 {
        let tr = family::triple_from_multiple(&t, k)?;
        if tr.elements().iter().all(Rat::is_positive) {
            return Err(Error::Inconsistent(format!(
                "{k}U already gives a positive triple"
            )));
        }
    }
    let triple = family::triple_from_multiple(&t, 6)?;
    if triple.sigma().s1 != s1 || !triple.elements().iter().all(Rat::is_positive) {
        return Err(Error::Inconsistent("6U triple mismatch".into()));
    }
    Ok(triple)
}

/// For each `x ∈ {0, 1/def, a, b, c}`: whether `(dx+1)(ex+1)(fx+1)` is a square.
pub fn rank_curve_membership(t: &ParamT) -> Result<Vec<(Rat, bool)>> {
    let (a, b, c) = abc_closed_form(t)?;
    let (d, e, f) = def_closed_form(t)?;
    let inv_def = (&d * &e * &f).recip()?;
    Ok([Rat::zero(), inv_def, a, b, c]
        .into_iter()
        .map(|x| {
            let v = (&d * &x + 1) * (&e * &x + 1) * (&f * &x + 1);
            let ok = sqrt_exact(&v).is_some();
            (x, ok)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine;

    fn r(s: &str) -> Rat {
        s.parse().unwrap()
    }

    fn t(s: &str) -> ParamT {
        s.parse().unwrap()
    }

    fn sorted(mut v: Vec<Rat>) -> Vec<Rat> {
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v
    }

    #[test]
    fn t6_golden() {
        let fp = family_point(&t("6")).unwrap();
        assert_eq!(fp.elements.to_vec(), parse_all(&T6_SEXTUPLE));
        assert_eq!(fp.negatives, 0);
    }

    #[test]
    fn abc_at_two() {
        let (a, b, c) = abc_closed_form(&t("2")).unwrap();
        assert_eq!((a, b, c), (r("-108/119"), r("-289/252"), r("49/68")));
    }

    #[test]
    fn closed_form_agrees_with_group_law() {
        for ts in ["6", "2", "5/4", "7", "-3", "11/3"] {
            let tt = t(ts);
            let rec = engine::generate(&tt, 2, 1).unwrap();
            let fp = family_point(&tt).unwrap();
            assert_eq!(
                sorted(fp.abc().to_vec()),
                sorted(rec.triple.elements().to_vec()),
                "{ts}"
            );
            assert_eq!(
                sorted(fp.def().to_vec()),
                sorted(vec![rec.d, rec.e, rec.f]),
                "{ts}"
            );
        }
    }

    #[test]
    fn sign_counts() {
        assert_eq!(sign_signature(&t("6")).unwrap(), 0);
        assert_eq!(sign_signature(&t("7")).unwrap(), 1);
        assert_eq!(sign_signature(&t("5/4")).unwrap(), 2);
        assert_eq!(sign_signature(&t("2")).unwrap(), 3);
    }

    #[test]
    fn scan_is_sorted_and_complete() {
        let rows = scan(&r("11/8"), &r("12/5"), &r("1/8")).unwrap();
        assert_eq!(rows.len(), 9);
        assert!(rows.windows(2).all(|w| w[0].t < w[1].t));
        assert!(rows.iter().all(|row| row.negatives == Some(3)));
    }

    #[test]
    fn scan_keeps_skipped_points() {
        let rows = scan(&r("-1"), &r("1"), &r("1")).unwrap();
        assert_eq!(rows.len(), 3);
        assert!(rows.iter().all(|row| row.skipped.is_some()));
        assert!(scan(&r("2"), &r("1"), &r("1")).is_err());
        assert!(scan(&r("1"), &r("2"), &r("0")).is_err());
        assert!(matches!(
            scan(&r("0"), &r("1"), &r("1/1000000")),
            Err(Error::SizeLimit(_))
        ));
    }

    #[test]
    fn catalog_entries_verify() {
        let cat = catalog();
        assert_eq!(cat.len(), 7);
        for e in &cat {
            assert!(verify_tuple(&e.elements).all_pass, "{}", e.name);
        }
        assert_eq!(catalog_entry("remark1-sextuple").unwrap().elements.len(), 6);
        assert!(catalog_entry("nope").is_none());
    }

    #[test]
    fn rank_one_triple_golden() {
        let tr = rank_one_reconstruct().unwrap();
        assert_eq!(
            sorted(tr.elements().to_vec()),
            sorted(parse_all(&RANK_ONE_TRIPLE))
        );
        assert_eq!(&tr.a * &tr.b * &tr.c, r("3/4"));
    }

    #[test]
    fn membership_at_two_and_six() {
        for ts in ["2", "6"] {
            let rows = rank_curve_membership(&t(ts)).unwrap();
            assert_eq!(rows.len(), 5);
            assert!(rows.iter().all(|(_, ok)| *ok), "t = {ts}");
            assert!(rows[0].0.is_zero());
        }
    }
}

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use sextuple_core::engine::{self, SextupleRecord, VerificationReport};
use sextuple_core::exactnum::{vp_int, Factorizer, DEFAULT_FACTOR_BOUND};
use sextuple_core::family::{self, ParamT, SigmaTriple, TripleAbc};
use sextuple_core::paramfam::{self, FamilyPoint};
use sextuple_core::reduction::{self, ReductionReport, ResidueRow, ValuationRow};
use sextuple_core::{Error, Point, Rat, Result};

/// Rational Diophantine sextuples from elliptic curves, with exact arithmetic.
#[derive(Parser)]
#[command(name = "sextuple", version)]
struct Cli {
    /// Trial-division bound for integer factorization.
    #[arg(long, global = true, default_value_t = DEFAULT_FACTOR_BOUND)]
    factor_bound: u64,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Route {
    Isogeny,
    ClosedForm,
}

#[derive(Clone, Copy, ValueEnum)]
enum Table {
    Valuation,
    Residue,
    Mod3,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a sextuple from [m]R and the odd multiple [2n+1]P'.
    Generate {
        #[arg(long, allow_hyphen_values = true)]
        t: Rat,
        #[arg(long, default_value_t = 2)]
        m: u32,
        #[arg(long, default_value_t = 1)]
        n: u32,
        #[arg(long, value_enum, default_value_t = Route::Isogeny)]
        route: Route,
    },
    /// Check that every pairwise product plus one is a square.
    Verify {
        #[arg(allow_negative_numbers = true, required_unless_present = "file")]
        elements: Vec<Rat>,
        /// Read elements from a file, separated by whitespace or commas.
        #[arg(long, conflicts_with = "elements")]
        file: Option<PathBuf>,
    },
    /// The Diophantine triple attached to [m]R.
    Triple {
        #[arg(long, allow_hyphen_values = true)]
        t: Rat,
        #[arg(long, default_value_t = 2)]
        m: u32,
    },
    /// The closed-form sextuple at t.
    Family {
        #[arg(long, allow_hyphen_values = true)]
        t: Rat,
    },
    /// Closed-form family over an arithmetic progression of t, as JSON lines.
    Scan {
        #[arg(long, allow_hyphen_values = true)]
        from: Rat,
        #[arg(long, allow_hyphen_values = true)]
        to: Rat,
        #[arg(long)]
        step: Rat,
    },
    /// Reduction types of E''(t, x) for a point (x, y) of E(t).
    Reduce {
        #[arg(long, allow_hyphen_values = true)]
        t: Rat,
        #[arg(long, allow_hyphen_values = true)]
        x: Rat,
        #[arg(long, allow_hyphen_values = true)]
        y: Rat,
        /// Classify at this prime only.
        #[arg(long)]
        p: Option<u64>,
    },
    /// Predicted against observed valuations for multiples of R.
    Lemmas {
        #[arg(long, allow_hyphen_values = true)]
        t: Rat,
        #[arg(long)]
        p: u64,
        #[arg(long = "max-m", default_value_t = 4)]
        max_m: u32,
        /// Defaults to valuation if p | t^2+1, residue if p | t, else mod3 for p = 3.
        #[arg(long, value_enum)]
        table: Option<Table>,
    },
    /// Named tuples used as fixtures.
    Catalog,
}

enum Outcome {
    Ok,
    CheckFailed,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::CheckFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_check_failure() { 1 } else { 2 })
        }
    }
}

fn print_json<T: Serialize>(v: &T) -> Result<()> {
    let s = serde_json::to_string_pretty(v).map_err(|e| Error::Inconsistent(e.to_string()))?;
    let mut out = io::stdout().lock();
    // a closed pipe is not worth a panic
    let _ = writeln!(out, "{s}");
    Ok(())
}

fn verdict(pass: bool) -> Outcome {
    if pass {
        Outcome::Ok
    } else {
        Outcome::CheckFailed
    }
}

#[derive(Serialize)]
struct GenerateOut<'a> {
    route: &'static str,
    elements: [Rat; 6],
    negatives: usize,
    #[serde(flatten)]
    record: &'a SextupleRecord,
}

#[derive(Serialize)]
struct VerifyOut<'a> {
    elements: &'a [Rat],
    #[serde(flatten)]
    report: &'a VerificationReport,
}

#[derive(Serialize)]
struct TripleOut {
    t: Rat,
    m: u32,
    point: Point,
    sigma: SigmaTriple,
    triple: TripleAbc,
    order3: bool,
    half_point: bool,
}

#[derive(Serialize)]
struct FamilyOut<'a> {
    #[serde(flatten)]
    point: &'a FamilyPoint,
    report: VerificationReport,
}

#[derive(Serialize)]
struct ReduceOut {
    t: Rat,
    point: Point,
    containment_applies: bool,
    additive: Vec<u64>,
    exceptions: Vec<u64>,
    reports: Vec<ReductionReport>,
}

#[derive(Serialize)]
#[serde(untagged)]
enum Rows {
    Valuation(Vec<ValuationRow>),
    Residue(Vec<ResidueRow>),
}

#[derive(Serialize)]
struct LemmasOut {
    t: Rat,
    p: u64,
    table: &'static str,
    pass: bool,
    rows: Rows,
}

fn run(cli: Cli) -> Result<Outcome> {
    let fz = Factorizer::new(cli.factor_bound);
    match cli.cmd {
        Cmd::Generate { t, m, n, route } => {
            let t = ParamT::new(t)?;
            let (name, record) = match route {
                Route::Isogeny => ("isogeny", engine::generate(&t, m, n)?),
                Route::ClosedForm => ("closed-form", closed_form_record(&t, m, n)?),
            };
            let elements = record.elements();
            let negatives = elements.iter().filter(|x| x.is_negative()).count();
            print_json(&GenerateOut {
                route: name,
                elements,
                negatives,
                record: &record,
            })?;
            Ok(verdict(record.report.all_pass))
        }
        Cmd::Verify { elements, file } => {
            let elements = match file {
                Some(path) => read_elements(&path)?,
                None => elements,
            };
            let report = engine::verify_tuple(&elements);
            print_json(&VerifyOut {
                elements: &elements,
                report: &report,
            })?;
            Ok(verdict(report.all_pass))
        }
        Cmd::Triple { t, m } => {
            let t = ParamT::new(t)?;
            let triple = family::triple_from_multiple(&t, m)?;
            let point = family::curve_e(&t).mul(i64::from(m), &family::point_r(&t))?;
            let order3 = engine::order3_check(&triple)?;
            let half_point = engine::half_point_check(&triple)?;
            let pass = order3 && half_point;
            print_json(&TripleOut {
                t: t.value().clone(),
                m,
                point,
                sigma: triple.sigma(),
                triple,
                order3,
                half_point,
            })?;
            Ok(verdict(pass))
        }
        Cmd::Family { t } => {
            let t = ParamT::new(t)?;
            let point = paramfam::family_point(&t)?;
            let report = engine::verify_tuple(&point.elements);
            let pass = report.all_pass;
            print_json(&FamilyOut {
                point: &point,
                report,
            })?;
            Ok(verdict(pass))
        }
        Cmd::Scan { from, to, step } => {
            let rows = paramfam::scan(&from, &to, &step)?;
            let mut out = io::stdout().lock();
            for row in &rows {
                let line =
                    serde_json::to_string(row).map_err(|e| Error::Inconsistent(e.to_string()))?;
                if writeln!(out, "{line}").is_err() {
                    break;
                }
            }
            Ok(Outcome::Ok)
        }
        Cmd::Reduce { t, x, y, p } => {
            let t = ParamT::new(t)?;
            let point = Point::affine(x, y);
            family::curve_e(&t).check(&point)?;
            let out = match p {
                Some(p) => {
                    let curve = family::curve_epp(&t, point.coords("point")?.0)?;
                    let rep = reduction::classify(&curve, p)?;
                    let additive = if rep.kind == reduction::ReductionType::Additive {
                        vec![p]
                    } else {
                        Vec::new()
                    };
                    ReduceOut {
                        t: t.value().clone(),
                        point,
                        containment_applies: false,
                        additive,
                        exceptions: Vec::new(),
                        reports: vec![rep],
                    }
                }
                None => {
                    let bp = reduction::bad_primes_epp(&t, &point, &fz)?;
                    ReduceOut {
                        t: bp.t.clone(),
                        point,
                        containment_applies: bp.containment_applies,
                        additive: bp.additive(),
                        exceptions: bp.exceptions.clone(),
                        reports: bp.reports,
                    }
                }
            };
            print_json(&out)?;
            Ok(Outcome::Ok)
        }
        Cmd::Lemmas { t, p, max_m, table } => {
            let t = ParamT::new(t)?;
            let table = match table {
                Some(tb) => tb,
                None => default_table(&t, p)?,
            };
            let (name, pass, rows) = match table {
                Table::Valuation => {
                    let rows = reduction::valuation_table(&t, p, max_m)?;
                    (
                        "valuation",
                        rows.iter().all(|r| r.pass),
                        Rows::Valuation(rows),
                    )
                }
                Table::Mod3 => {
                    if p != 3 {
                        return Err(Error::InvalidParameter("the mod3 table needs p = 3".into()));
                    }
                    let rows = reduction::mod3_table(&t, max_m)?;
                    ("mod3", rows.iter().all(|r| r.pass), Rows::Valuation(rows))
                }
                Table::Residue => {
                    let (pass, rows) = reduction::residue_check(&t, p, max_m)?;
                    ("residue", pass, Rows::Residue(rows))
                }
            };
            print_json(&LemmasOut {
                t: t.value().clone(),
                p,
                table: name,
                pass,
                rows,
            })?;
            Ok(verdict(pass))
        }
        Cmd::Catalog => {
            print_json(&paramfam::catalog())?;
            Ok(Outcome::Ok)
        }
    }
}

fn default_table(t: &ParamT, p: u64) -> Result<Table> {
    let ti = t
        .value()
        .to_integer()
        .ok_or_else(|| Error::InvalidParameter(format!("t = {t} must be an integer")))?;
    if p != 2 && vp_int(&(&ti * &ti + 1), p)? > 0 {
        Ok(Table::Valuation)
    } else if p != 2 && vp_int(&ti, p)? > 0 {
        Ok(Table::Residue)
    } else if p == 3 {
        Ok(Table::Mod3)
    } else {
        Err(Error::InvalidParameter(format!(
            "no table for p = {p}: it divides neither t nor t^2+1"
        )))
    }
}

fn closed_form_record(t: &ParamT, m: u32, n: u32) -> Result<SextupleRecord> {
    if (m, n) != (2, 1) {
        return Err(Error::InvalidParameter(
            "the closed-form route covers m = 2, n = 1 only".into(),
        ));
    }
    let fp = paramfam::family_point(t)?;
    let [a, b, c, d, e, f] = fp.elements.clone();
    let triple = TripleAbc::new(a, b, c)?;
    Ok(SextupleRecord {
        t: t.value().clone(),
        m,
        n,
        triple,
        d,
        e,
        f,
        report: engine::verify_tuple(&fp.elements),
    })
}

fn read_elements(path: &PathBuf) -> Result<Vec<Rat>> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::InvalidParameter(format!("{}: {e}", path.display())))?;
    text.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|s| !s.is_empty())
        .map(str::parse)
        .collect()
}

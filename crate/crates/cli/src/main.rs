//! `monocurve`: multiplier ideals, thresholds and jumping numbers of
//! monomial space curves, with JSON output.

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use monocurve::appendix::{
    appendix_matrix, local_case, verify_local_facets, verify_nu2_weights, AppendixError, LocalCase,
};
use monocurve::curve::{
    derive_curve_data, primitive_triples, survey_cases, Binomial, CaseClass, CurveData,
};
use monocurve::exec::Execution;
use monocurve::multiplier::{
    default_degree_bound, principal_binomial_lct, principal_binomial_multiplier, Branch,
    CurveMultiplier,
};
use monocurve::newton::{monomial_lct, newton_polyhedron, MonomialIdeal, ShiftVec};
use monocurve::poly::{parse_poly, parse_rat, Poly, Rat, RatJson, Weight};

const SCHEMA_VERSION: &str = "1";

#[derive(Parser)]
#[command(
    name = "monocurve",
    version,
    about = "Multiplier ideals of monomial space curves"
)]
struct Cli {
    /// Emit JSON (the only output format; accepted for explicitness).
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Commands on the curve t ↦ (t^N1, t^N2, t^N3).
    #[command(subcommand)]
    Curve(CurveCommand),
    /// Commands on monomial ideals such as "x^2, y^3".
    #[command(subcommand)]
    Monomial(MonomialCommand),
    /// Commands on principal ideals generated by a binomial.
    #[command(subcommand)]
    Binomial(BinomialCommand),
    /// Tabulate the case split over all primitive triples up to a bound.
    Survey {
        #[arg(long)]
        max_n: i64,
        /// Include one entry per triple.
        #[arg(long)]
        entries: bool,
    },
    /// Self-checks against independent computations.
    #[command(subcommand)]
    Check(CheckCommand),
}

#[derive(Args, Clone)]
struct Triple {
    #[arg(value_name = "N1")]
    n1: i64,
    #[arg(value_name = "N2")]
    n2: i64,
    #[arg(value_name = "N3")]
    n3: i64,
}

impl Triple {
    fn weights(&self) -> Vec<i64> {
        vec![self.n1, self.n2, self.n3]
    }
}

#[derive(Subcommand)]
enum CurveCommand {
    /// Generators and invariants.
    Analyze {
        #[command(flatten)]
        n: Triple,
    },
    /// Log canonical threshold and the term attaining it.
    Lct {
        #[command(flatten)]
        n: Triple,
        #[arg(long)]
        both_branches: bool,
    },
    /// Structured description of J(I^λ).
    Multiplier {
        #[command(flatten)]
        n: Triple,
        #[arg(long, value_parser = rat_arg)]
        lambda: Rat,
        /// List a basis of the elements of degree at most D.
        #[arg(long)]
        degree_bound: Option<u32>,
        #[arg(long)]
        both_branches: bool,
    },
    /// Candidate and verified jumping numbers up to --max-lambda.
    Jumps {
        #[command(flatten)]
        n: Triple,
        #[arg(long, value_parser = rat_arg, default_value = "3")]
        max_lambda: Rat,
        #[arg(long)]
        degree_bound: Option<u32>,
        #[arg(long)]
        both_branches: bool,
        /// Verify candidates on one thread.
        #[arg(long)]
        sequential: bool,
    },
    /// Whether --poly lies in J(I^λ), factor by factor.
    Member {
        #[command(flatten)]
        n: Triple,
        #[arg(long, value_parser = rat_arg)]
        lambda: Rat,
        #[arg(long)]
        poly: String,
        #[arg(long)]
        both_branches: bool,
    },
}

#[derive(Subcommand)]
enum MonomialCommand {
    Lct {
        ideal: String,
        #[arg(long)]
        dim: Option<usize>,
    },
    Multiplier {
        ideal: String,
        #[arg(long, value_parser = rat_arg)]
        lambda: Rat,
        #[arg(long)]
        dim: Option<usize>,
    },
}

#[derive(Subcommand)]
enum BinomialCommand {
    Multiplier {
        binomial: String,
        #[arg(long, value_parser = rat_arg)]
        lambda: Rat,
        #[arg(long)]
        dim: Option<usize>,
        /// Also test membership of this polynomial.
        #[arg(long)]
        poly: Option<String>,
    },
}

#[derive(Subcommand)]
enum CheckCommand {
    /// Local facet matrices and second-valuation weights.
    Appendix {
        #[arg(num_args = 0..=3, value_name = "N")]
        n: Vec<i64>,
        #[arg(long)]
        max_n: Option<i64>,
    },
}

fn rat_arg(s: &str) -> Result<Rat, String> {
    parse_rat(s).map_err(|e| e.to_string())
}

/// Failures after argument parsing; `Usage` exits with 2 and no envelope.
enum Failure {
    Usage(String),
    Domain { kind: &'static str, message: String },
}

fn domain(kind: &'static str, e: impl std::fmt::Display) -> Failure {
    Failure::Domain {
        kind,
        message: e.to_string(),
    }
}

#[derive(Serialize)]
struct Envelope<'a> {
    schema_version: &'a str,
    command: String,
    inputs: Value,
    result: Value,
    warnings: Vec<String>,
    error: Option<Value>,
}

struct Outcome {
    result: Value,
    warnings: Vec<String>,
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn rat_value(x: &Rat) -> Value {
    to_value(&RatJson(x))
}

fn infer_dim(text: &str, dim: Option<usize>) -> usize {
    dim.unwrap_or(if text.contains('z') { 3 } else { 2 })
}

fn curve_data(n: &Triple) -> Result<CurveData, Failure> {
    let w = Weight::new(n.weights()).map_err(|e| domain("invalid-curve", e))?;
    derive_curve_data(&w).map_err(|e| domain("invalid-curve", e))
}

/// Runs `f` on the natural branch, or on both branches of an equality curve
/// with `agree` comparing the second component of each run.
fn per_branch(
    c: &CurveData,
    both: bool,
    f: impl Fn(Branch) -> Result<(Value, Value), Failure>,
) -> Result<Value, Failure> {
    if !both {
        let branch = Branch::natural(c);
        let (mut v, _) = f(branch)?;
        v["branch"] = to_value(&branch);
        return Ok(v);
    }
    if c.class() != CaseClass::Equality {
        return Err(domain(
            "branch-unavailable",
            format!(
                "--both-branches needs an equality curve (e_2(d_3 - d_1) = e_1(d_3 - d_2)); this curve is {}",
                to_value(&c.class()).as_str().unwrap_or("?")
            ),
        ));
    }
    let (one, k1) = f(Branch::One)?;
    let (two, k2) = f(Branch::Two)?;
    Ok(json!({"branches": {"one": one, "two": two}, "agree": k1 == k2}))
}

fn multiplier_for(c: &CurveData) -> Result<CurveMultiplier, Failure> {
    CurveMultiplier::new(c).map_err(|e| domain("multiplier", e))
}

fn parse_ideal(text: &str, dim: usize) -> Result<MonomialIdeal, Failure> {
    MonomialIdeal::parse(text, dim).map_err(|e| Failure::Usage(e.to_string()))
}

fn parse_binomial(text: &str, dim: usize) -> Result<Binomial, Failure> {
    let p = parse_poly(text, dim).map_err(|e| Failure::Usage(e.to_string()))?;
    let terms: Vec<_> = p.terms().collect();
    let one = Rat::from_integer(1.into());
    match terms.as_slice() {
        [(a, ca), (b, cb)] if **ca == -one.clone() && **cb == one => {
            Binomial::new((*b).clone(), (*a).clone()).map_err(|e| domain("invalid-binomial", e))
        }
        [(a, ca), (b, cb)] if **ca == one && **cb == -one.clone() => {
            Binomial::new((*a).clone(), (*b).clone()).map_err(|e| domain("invalid-binomial", e))
        }
        _ => Err(domain(
            "invalid-binomial",
            format!("`{text}` is not of the form x^a - x^b"),
        )),
    }
}

fn curve_warnings(c: &CurveData) -> Vec<String> {
    c.warnings.clone()
}

fn check_curve(c: &CurveData) -> Result<Value, AppendixError> {
    let matrix = appendix_matrix(c)?;
    let facets = verify_local_facets(c)?;
    let nu2 = verify_nu2_weights(c);
    Ok(json!({
        "n": c.n,
        "case": matrix.case,
        "matrix": matrix,
        "local_facets": facets,
        "nu2": nu2,
        "passed": facets.agrees && nu2.passed,
    }))
}

fn run(cli: &Cli) -> Result<(String, Value, Outcome), (String, Value, Failure)> {
    macro_rules! attempt {
        ($name:expr, $inputs:expr, $body:expr) => {{
            let name: String = $name.to_string();
            let inputs: Value = $inputs;
            let body = || -> Result<Outcome, Failure> { $body };
            match body() {
                Ok(o) => Ok((name, inputs, o)),
                Err(f) => Err((name, inputs, f)),
            }
        }};
    }
    match &cli.command {
        Command::Curve(cmd) => match cmd {
            CurveCommand::Analyze { n } => attempt!("curve analyze", json!({"n": n.weights()}), {
                let c = curve_data(n)?;
                let mut result = to_value(&c);
                result["class"] = to_value(&c.class());
                result["local_case"] = to_value(&local_case(&c));
                result["term_ideal"] = Value::String(c.term_ideal().to_string());
                Ok(Outcome {
                    warnings: curve_warnings(&c),
                    result,
                })
            }),
            CurveCommand::Lct { n, both_branches } => attempt!(
                "curve lct",
                json!({"n": n.weights(), "both_branches": both_branches}),
                {
                    let c = curve_data(n)?;
                    let m = multiplier_for(&c)?;
                    let result = per_branch(&c, *both_branches, |branch| {
                        let r = m.lct(branch).map_err(|e| domain("multiplier", e))?;
                        Ok((to_value(&r), rat_value(&r.lct)))
                    })?;
                    Ok(Outcome {
                        warnings: curve_warnings(&c),
                        result,
                    })
                }
            ),
            CurveCommand::Multiplier {
                n,
                lambda,
                degree_bound,
                both_branches,
            } => attempt!(
                "curve multiplier",
                json!({"n": n.weights(), "lambda": rat_value(lambda), "degree_bound": degree_bound, "both_branches": both_branches}),
                {
                    let c = curve_data(n)?;
                    let m = multiplier_for(&c)?;
                    let result = per_branch(&c, *both_branches, |branch| {
                        let desc = m
                            .describe(lambda, branch)
                            .map_err(|e| domain("multiplier", e))?;
                        let mut v = to_value(&desc);
                        v["is_unit"] = Value::Bool(desc.is_unit());
                        let mut key = json!({"is_unit": desc.is_unit()});
                        if let Some(d) = degree_bound {
                            let basis: Vec<String> = desc
                                .basis_up_to_degree(*d)
                                .iter()
                                .map(Poly::to_string)
                                .collect();
                            key["dimension"] = json!(basis.len());
                            v["basis_degree_bound"] = json!(d);
                            v["basis"] = json!(basis);
                        }
                        Ok((v, key))
                    })?;
                    let mut warnings = curve_warnings(&c);
                    if let Some(d) = degree_bound {
                        warnings.push(format!("basis lists only elements of degree at most {d}"));
                    }
                    Ok(Outcome { result, warnings })
                }
            ),
            CurveCommand::Jumps {
                n,
                max_lambda,
                degree_bound,
                both_branches,
                sequential,
            } => attempt!(
                "curve jumps",
                json!({"n": n.weights(), "max_lambda": rat_value(max_lambda), "degree_bound": degree_bound, "both_branches": both_branches}),
                {
                    let c = curve_data(n)?;
                    let m = multiplier_for(&c)?;
                    let d = degree_bound.unwrap_or_else(|| default_degree_bound(&c, max_lambda));
                    let exec = if *sequential {
                        Execution::Sequential
                    } else {
                        Execution::Parallel
                    };
                    let result = per_branch(&c, *both_branches, |branch| {
                        let r = m
                            .jumping_numbers(max_lambda, d, branch, exec)
                            .map_err(|e| domain("multiplier", e))?;
                        let jumps = Value::Array(r.jumps().map(rat_value).collect());
                        let mut v = to_value(&r);
                        v["jumps"] = jumps.clone();
                        Ok((v, jumps))
                    })?;
                    let mut warnings = curve_warnings(&c);
                    warnings.push(format!(
                        "jumps verified by comparing dimensions of elements of degree at most {d}; a jump needing higher degree would be missed"
                    ));
                    Ok(Outcome { result, warnings })
                }
            ),
            CurveCommand::Member {
                n,
                lambda,
                poly,
                both_branches,
            } => attempt!(
                "curve member",
                json!({"n": n.weights(), "lambda": rat_value(lambda), "poly": poly, "both_branches": both_branches}),
                {
                    let c = curve_data(n)?;
                    let f = parse_poly(poly, 3).map_err(|e| Failure::Usage(e.to_string()))?;
                    let m = multiplier_for(&c)?;
                    let mut result = per_branch(&c, *both_branches, |branch| {
                        let desc = m
                            .describe(lambda, branch)
                            .map_err(|e| domain("multiplier", e))?;
                        let e = desc.explain(&f);
                        let member = e.member;
                        Ok((to_value(&e), Value::Bool(member)))
                    })?;
                    result["poly"] = Value::String(f.to_string());
                    Ok(Outcome {
                        warnings: curve_warnings(&c),
                        result,
                    })
                }
            ),
        },
        Command::Monomial(cmd) => match cmd {
            MonomialCommand::Lct { ideal, dim } => {
                let d = infer_dim(ideal, *dim);
                attempt!("monomial lct", json!({"ideal": ideal, "dim": d}), {
                    let a = parse_ideal(ideal, d)?;
                    let lct =
                        monomial_lct(&a, &ShiftVec::ones(d)).map_err(|e| domain("monomial", e))?;
                    let poly = newton_polyhedron(&a).map_err(|e| domain("monomial", e))?;
                    Ok(Outcome {
                        result: json!({
                            "lct": rat_value(&lct),
                            "ideal": a.to_string(),
                            "facets": poly.facets,
                            "attained_by": poly.lct_facets(&ShiftVec::ones(d)),
                        }),
                        warnings: vec![],
                    })
                })
            }
            MonomialCommand::Multiplier { ideal, lambda, dim } => {
                let d = infer_dim(ideal, *dim);
                attempt!(
                    "monomial multiplier",
                    json!({"ideal": ideal, "dim": d, "lambda": rat_value(lambda)}),
                    {
                        let a = parse_ideal(ideal, d)?;
                        let j = newton_polyhedron(&a)
                            .and_then(|p| p.multiplier_ideal(lambda, &ShiftVec::ones(d)))
                            .map_err(|e| domain("monomial", e))?;
                        Ok(Outcome {
                            result: json!({
                                "ideal": a.to_string(),
                                "multiplier": j.to_string(),
                                "generators": j.gens(),
                                "is_unit": j.is_unit(),
                            }),
                            warnings: vec![],
                        })
                    }
                )
            }
        },
        Command::Binomial(BinomialCommand::Multiplier {
            binomial,
            lambda,
            dim,
            poly,
        }) => {
            let d = infer_dim(binomial, *dim);
            attempt!(
                "binomial multiplier",
                json!({"binomial": binomial, "dim": d, "lambda": rat_value(lambda), "poly": poly}),
                {
                    let b = parse_binomial(binomial, d)?;
                    let j = principal_binomial_multiplier(&b, lambda, d)
                        .map_err(|e| domain("binomial", e))?;
                    let lct = principal_binomial_lct(&b, d).map_err(|e| domain("binomial", e))?;
                    let mut result = to_value(&j);
                    result["lct"] = rat_value(&lct);
                    result["is_unit"] = Value::Bool(j.is_unit());
                    if let Some(text) = poly {
                        let f = parse_poly(text, d).map_err(|e| Failure::Usage(e.to_string()))?;
                        result["member"] = Value::Bool(j.member(&f));
                    }
                    Ok(Outcome {
                        result,
                        warnings: vec![],
                    })
                }
            )
        }
        Command::Survey { max_n, entries } => {
            attempt!("survey", json!({"max_n": max_n, "entries": entries}), {
                if *max_n < 3 {
                    return Err(Failure::Usage("--max-n must be at least 3".into()));
                }
                let r = survey_cases(*max_n, Execution::Parallel);
                let mut result = to_value(&r);
                if !entries {
                    result.as_object_mut().unwrap().remove("entries");
                }
                let mut warnings = vec![];
                if !r.strict_greater.is_empty() {
                    warnings.push(format!(
                        "notable: {} triples with e_2(d_3 - d_1) > e_1(d_3 - d_2)",
                        r.strict_greater.len()
                    ));
                }
                if r.counts.smooth_surface > 0 {
                    warnings.push(format!(
                        "smooth-toric-surface triples counted separately: {}",
                        r.counts.smooth_surface
                    ));
                }
                if r.counts.rejected > 0 {
                    warnings.push(format!("rejected triples: {}", r.counts.rejected));
                }
                Ok(Outcome { result, warnings })
            })
        }
        Command::Check(CheckCommand::Appendix { n, max_n }) => {
            attempt!("check appendix", json!({"n": n, "max_n": max_n}), {
                match (n.len(), max_n) {
                    (3, None) => {
                        let t = Triple {
                            n1: n[0],
                            n2: n[1],
                            n3: n[2],
                        };
                        let c = curve_data(&t)?;
                        let result = check_curve(&c).map_err(|e| domain("appendix", e))?;
                        Ok(Outcome {
                            warnings: curve_warnings(&c),
                            result,
                        })
                    }
                    (0, Some(b)) => {
                        let mut checked = 0usize;
                        let mut by_case = std::collections::BTreeMap::<String, usize>::new();
                        let mut failures = vec![];
                        let mut dropped = 0usize;
                        for t in primitive_triples(*b) {
                            let Ok(c) = derive_curve_data(&Weight::new(t.to_vec()).unwrap()) else {
                                continue;
                            };
                            if c.smooth_surface {
                                continue;
                            }
                            checked += 1;
                            let case: LocalCase = local_case(&c);
                            *by_case.entry(case.to_string()).or_default() += 1;
                            match check_curve(&c) {
                                Ok(v) => {
                                    if !v["local_facets"]["dropped_rows"]
                                        .as_array()
                                        .unwrap()
                                        .is_empty()
                                    {
                                        dropped += 1;
                                    }
                                    if v["passed"] != Value::Bool(true) {
                                        failures.push(v);
                                    }
                                }
                                Err(e) => failures.push(json!({"n": t, "error": e.to_string()})),
                            }
                        }
                        Ok(Outcome {
                            result: json!({
                                "checked": checked,
                                "by_case": by_case,
                                "with_dropped_rows": dropped,
                                "failures": failures,
                                "passed": failures.is_empty(),
                            }),
                            warnings: vec![],
                        })
                    }
                    _ => Err(Failure::Usage(
                        "check appendix takes either N1 N2 N3 or --max-n B".into(),
                    )),
                }
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, inputs, outcome, code, error) = match run(&cli) {
        Ok((c, i, o)) => (c, i, o, 0, None),
        Err((_, _, Failure::Usage(msg))) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
        Err((c, i, Failure::Domain { kind, message })) => (
            c,
            i,
            Outcome {
                result: Value::Null,
                warnings: vec![],
            },
            1,
            Some(json!({"kind": kind, "message": message})),
        ),
    };
    let envelope = Envelope {
        schema_version: SCHEMA_VERSION,
        command,
        inputs,
        result: outcome.result,
        warnings: outcome.warnings,
        error,
    };
    let mut out = std::io::stdout().lock();
    // A closed pipe is not worth a panic.
    let _ = writeln!(out, "{}", serde_json::to_string_pretty(&envelope).unwrap());
    ExitCode::from(code)
}

//! Command-line front end. Every invalid verdict carries a certificate
//! that is replayed before it is printed; exit codes are 0 for
//! valid/success, 1 for invalid-with-certificate, 2 for unknown, and 3
//! for usage or validation errors.

use std::collections::BTreeSet;
use std::io::Read;

use clap::{Parser, Subcommand};
use serde::Serialize;

use tasa_core::config::Config;
use tasa_core::decide::{
    decide_equation, decide_formula, decide_quasi_equation, decide_with_diagonals,
    formula_as_equation, ValidityResult,
};
use tasa_core::free::{interpolate, leq_equation, FreeAlgebraHandle, InterpolateError};
use tasa_core::kripke::verdict_to_kripke;
use tasa_core::perm::{coxeter_normal_form, hat, SigKind};
use tasa_core::term::{
    parse_formula, parse_quasi_equation, parse_word_equation, Formula, Signature,
};

use crate::formats::{
    model_json, parse_sig, trace_json, verdict_json, FreeStatsJson, ModelJson, TraceJson,
    VerdictJson,
};
use crate::report::verify_paper;

#[derive(Parser)]
#[command(
    name = "tasa",
    version,
    about = "decision procedures, representations and certificates for finite-dimensional algebras of substitutions"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,

    /// Dimension n (at least 2)
    #[arg(long, global = true, default_value_t = 2)]
    dim: usize,

    /// Signature: TA, SA, or SAD
    #[arg(long, global = true, default_value = "TA")]
    sig: String,

    /// Seed for sampled sweeps (echoed in reports)
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Exhaustive-sweep budget on the assignment-space size
    #[arg(long, global = true)]
    budget_assignments: Option<u64>,

    /// Number of random samples when sweeps are sampled
    #[arg(long, global = true)]
    samples: Option<u64>,

    /// Emit JSON instead of text
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide an equation `t = u` or quasi-equation `e1 ; ... => e`
    Decide { input: String },
    /// Decide satisfiability of a modal formula; prints a model when
    /// satisfiable
    Sat { formula: String },
    /// Interpolate a valid implication: interpolate <a> <c> [--shared x0,x1]
    Interpolate {
        a: String,
        c: String,
        /// Shared vocabulary (defaults to the common variables)
        #[arg(long)]
        shared: Option<String>,
    },
    /// Prove a word equation `w1 = w2`, with a rewrite trace for
    /// transposition words
    Prove { input: String },
    /// Free-algebra statistics for the signature on --gens generators
    Free {
        #[arg(long, default_value_t = 1)]
        gens: usize,
        /// Print the statistics (the default action)
        #[arg(long)]
        stats: bool,
    },
    /// Extract a Kripke countermodel for an invalid formula
    Countermodel { formula: String },
    /// Run every structural check and print one report
    VerifyPaper {
        #[arg(long, default_value_t = 4)]
        dim_max: usize,
    },
}

pub const EXIT_VALID: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_UNKNOWN: i32 = 2;
pub const EXIT_USAGE: i32 = 3;

fn read_arg(s: &str) -> String {
    if s == "-" {
        let mut buf = String::new();
        let _ = std::io::stdin().read_to_string(&mut buf);
        buf.trim().to_string()
    } else {
        s.to_string()
    }
}

fn render<T: Serialize>(json: bool, value: &T, text: String) -> String {
    if json {
        let mut s = serde_json::to_string_pretty(value).expect("serializable");
        s.push('\n');
        s
    } else {
        text
    }
}

fn verdict_exit(result: &ValidityResult) -> i32 {
    match result {
        ValidityResult::Valid { .. } => EXIT_VALID,
        ValidityResult::Invalid { .. } => EXIT_INVALID,
        ValidityResult::Unknown { .. } => EXIT_UNKNOWN,
    }
}

fn verdict_text(v: &VerdictJson) -> String {
    let mut out = format!("{} ({})", v.status, v.method);
    if let Some(d) = &v.detail {
        out.push_str(&format!(": {d}"));
    }
    if let Some(cm) = &v.countermodel {
        out.push_str(&format!(
            "\ncountermodel: dim {} base {} signature {}, witness point {}",
            cm.algebra.dim, cm.algebra.base, cm.algebra.signature, cm.witness
        ));
        for (var, mask) in &cm.assignment {
            out.push_str(&format!("\n  {var} = 0x{mask}"));
        }
    }
    out.push('\n');
    out
}

/// Parses and runs one command line; returns the exit status and the
/// rendered report.
pub fn dispatch(args: &[String]) -> (i32, String) {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            // clap prints help/version through "errors" as well
            let code = if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_VALID
            };
            return (code, rendered);
        }
    };
    let Some(kind) = parse_sig(&cli.sig) else {
        return (
            EXIT_USAGE,
            format!("unknown signature '{}': use TA, SA, or SAD\n", cli.sig),
        );
    };
    let sig = match Signature::new(cli.dim, kind) {
        Ok(sig) => sig,
        Err(e) => return (EXIT_USAGE, format!("{e}\n")),
    };
    let mut config = Config::default();
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    if let Some(b) = cli.budget_assignments {
        config.assignment_budget = b;
    }
    if let Some(s) = cli.samples {
        config.samples = s;
    }

    match &cli.cmd {
        Cmd::Decide { input } => cmd_decide(&read_arg(input), &sig, &config, cli.json),
        Cmd::Sat { formula } => cmd_sat(&read_arg(formula), &sig, &config, cli.json),
        Cmd::Interpolate { a, c, shared } => cmd_interpolate(
            &read_arg(a),
            &read_arg(c),
            shared.as_deref(),
            &sig,
            &config,
            cli.json,
        ),
        Cmd::Prove { input } => cmd_prove(&read_arg(input), &sig, &config, cli.json),
        Cmd::Free { gens, stats: _ } => cmd_free(*gens, &sig, &config, cli.json),
        Cmd::Countermodel { formula } => {
            cmd_countermodel(&read_arg(formula), &sig, &config, cli.json)
        }
        Cmd::VerifyPaper { dim_max } => cmd_verify_paper(*dim_max, &config, cli.json),
    }
}

fn cmd_decide(input: &str, sig: &Signature, config: &Config, json: bool) -> (i32, String) {
    let qe = match parse_quasi_equation(input, sig) {
        Ok(qe) => qe,
        Err(e) => return (EXIT_USAGE, format!("{e}\n")),
    };
    let result = if qe.premises.is_empty() {
        if sig.kind == SigKind::Sad {
            decide_with_diagonals(&qe.conclusion, sig, config)
        } else {
            decide_equation(&qe.conclusion, sig, config)
        }
    } else {
        decide_quasi_equation(&qe, sig, config)
    };
    let result = match result {
        Ok(r) => r,
        Err(e) => return (EXIT_USAGE, format!("{e}\n")),
    };
    // exit-1 runs must carry a certificate the replay path accepts
    if let Some(cm) = result.countermodel() {
        let replayed = if qe.premises.is_empty() {
            cm.replay_equation(&qe.conclusion, config)
        } else {
            cm.replay_quasi_equation(&qe, config)
        };
        if !replayed.unwrap_or(false) {
            return (
                EXIT_USAGE,
                "internal error: countermodel failed to replay\n".to_string(),
            );
        }
    }
    let v = verdict_json(&result, config.seed);
    let text = verdict_text(&v);
    (verdict_exit(&result), render(json, &v, text))
}

#[derive(Serialize)]
struct SatJson {
    satisfiable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    model: Option<ModelJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    unsat_certificate: Option<VerdictJson>,
    seed: u64,
}

fn cmd_sat(input: &str, sig: &Signature, config: &Config, json: bool) -> (i32, String) {
    let f = match parse_formula(input, sig) {
        Ok(f) => f,
        Err(e) => return (EXIT_USAGE, format!("{e}\n")),
    };
    let negated = Formula::not(f.clone());
    let result = match decide_formula(&negated, sig, config) {
        Ok(r) => r,
        Err(e) => return (EXIT_USAGE, format!("{e}\n")),
    };
    match &result {
        // the negation is falsifiable: its countermodel satisfies f
        ValidityResult::Invalid { .. } => {
            let (model, witness) = match verdict_to_kripke(&result, &negated, config) {
                Ok(mw) => mw,
                Err(e) => return (EXIT_USAGE, format!("{e}\n")),
            };
            let mj = model_json(&model, witness);
            let out = SatJson {
                satisfiable: true,
                model: Some(mj),
                unsat_certificate: None,
                seed: config.seed,
            };
            let text = format!(
                "satisfiable: model over {} states (base {}), witness state {}\n",
                model.algebra().unit().size(),
                model.algebra().unit().base(),
                witness
            );
            (EXIT_VALID, render(json, &out, text))
        }
        ValidityResult::Valid { .. } => {
            let out = SatJson {
                satisfiable: false,
                model: None,
                unsat_certificate: Some(verdict_json(&result, config.seed)),
                seed: config.seed,
            };
            let text = "unsatisfiable: the negation is valid\n".to_string();
            (EXIT_INVALID, render(json, &out, text))
        }
        ValidityResult::Unknown { .. } => {
            let v = verdict_json(&result, config.seed);
            let text = verdict_text(&v);
            (EXIT_UNKNOWN, render(json, &v, text))
        }
    }
}

#[derive(Serialize)]
struct InterpolateJson {
    interpolant: String,
    lower: VerdictJson,
    upper: VerdictJson,
    shared: Vec<String>,
    seed: u64,
}

fn parse_var_list(s: &str) -> Option<BTreeSet<usize>> {
    let mut out = BTreeSet::new();
    for part in s.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let digits = part.strip_prefix('x').unwrap_or(part);
        out.insert(digits.parse().ok()?);
    }
    Some(out)
}

fn cmd_interpolate(
    a_text: &str,
    c_text: &str,
    shared: Option<&str>,
    sig: &Signature,
    config: &Config,
    json: bool,
) -> (i32, String) {
    let a = match tasa_core::term::parse_term(a_text, sig) {
        Ok(t) => t,
        Err(e) => return (EXIT_USAGE, format!("in a: {e}\n")),
    };
    let c = match tasa_core::term::parse_term(c_text, sig) {
        Ok(t) => t,
        Err(e) => return (EXIT_USAGE, format!("in c: {e}\n")),
    };
    let common: BTreeSet<usize> = a.vars().intersection(&c.vars()).copied().collect();
    let shared = match shared {
        None => common.clone(),
        Some(s) => match parse_var_list(s) {
            Some(v) => v,
            None => return (EXIT_USAGE, format!("bad --shared list '{s}'\n")),
        },
    };
    if !common.is_subset(&shared) {
        return (
            EXIT_USAGE,
            "the shared vocabulary must contain every variable common to a and c\n".to_string(),
        );
    }
    let x1: BTreeSet<usize> = a.vars().union(&shared).copied().collect();
    let x2: BTreeSet<usize> = c.vars().union(&shared).copied().collect();
    match interpolate(&a, &c, sig, &x1, &x2, config) {
        Ok(r) => {
            let out = InterpolateJson {
                interpolant: r.interpolant.to_string(),
                lower: verdict_json(&r.lower, config.seed),
                upper: verdict_json(&r.upper, config.seed),
                shared: shared.iter().map(|v| format!("x{v}")).collect(),
                seed: config.seed,
            };
            let text = format!(
                "interpolant: {}\nlower bound a <= b: {}\nupper bound b <= c: {}\n",
                r.interpolant, out.lower.status, out.upper.status
            );
            (EXIT_VALID, render(json, &out, text))
        }
        Err(InterpolateError::PremiseNotValid(cm)) => {
            let eq = leq_equation(&a, &c);
            if !cm.replay_equation(&eq, config).unwrap_or(false) {
                return (
                    EXIT_USAGE,
                    "internal error: countermodel failed to replay\n".to_string(),
                );
            }
            let result = ValidityResult::Invalid {
                method: tasa_core::decide::Method::NormalForm,
                countermodel: cm,
            };
            let v = verdict_json(&result, config.seed);
            let text = format!("premise a <= c is not valid\n{}", verdict_text(&v));
            (EXIT_INVALID, render(json, &v, text))
        }
        Err(e) => (EXIT_USAGE, format!("{e}\n")),
    }
}

#[derive(Serialize)]
struct ProveJson {
    equal: bool,
    method: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    canonical: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    traces: Option<Vec<TraceJson>>,
    hat_left: Vec<usize>,
    hat_right: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness_index: Option<usize>,
}

fn cmd_prove(input: &str, sig: &Signature, config: &Config, json: bool) -> (i32, String) {
    let (w1, w2) = match parse_word_equation(input, sig) {
        Ok(ws) => ws,
        Err(e) => return (EXIT_USAGE, format!("{e}\n")),
    };
    let (h1, h2) = (hat(&w1), hat(&w2));
    let equal = h1 == h2;
    let witness_index = (0..sig.dim).find(|&k| h1.apply(k) != h2.apply(k));
    let transposition_only = w1.is_transposition_only() && w2.is_transposition_only();

    if transposition_only {
        let t1 = coxeter_normal_form(&w1, config);
        let t2 = coxeter_normal_form(&w2, config);
        match (t1, t2) {
            (Ok((c1, trace1)), Ok((c2, trace2))) => {
                debug_assert_eq!(c1 == c2, equal);
                let out = ProveJson {
                    equal,
                    method: "coxeter-normal-form".to_string(),
                    canonical: equal.then(|| c1.to_string()),
                    traces: Some(vec![trace_json(&trace1), trace_json(&trace2)]),
                    hat_left: h1.images().to_vec(),
                    hat_right: h2.images().to_vec(),
                    witness_index,
                };
                let text = if equal {
                    format!(
                        "equal: both words rewrite to {} ({} + {} trace steps)\n",
                        c1,
                        trace1.steps.len(),
                        trace2.steps.len()
                    )
                } else {
                    format!(
                        "not equal: hat values differ at index {} ({:?} vs {:?})\n",
                        witness_index.expect("unequal transformations differ"),
                        h1,
                        h2
                    )
                };
                (
                    if equal { EXIT_VALID } else { EXIT_INVALID },
                    render(json, &out, text),
                )
            }
            (Err(e), _) | (_, Err(e)) => (EXIT_USAGE, format!("{e}\n")),
        }
    } else {
        // replacement letters: equality is decided semantically by the
        // evaluation map
        let out = ProveJson {
            equal,
            method: "hat-evaluation".to_string(),
            canonical: None,
            traces: None,
            hat_left: h1.images().to_vec(),
            hat_right: h2.images().to_vec(),
            witness_index,
        };
        let text = if equal {
            format!("equal: both words evaluate to {h1:?}\n")
        } else {
            format!(
                "not equal: hat values differ at index {} ({:?} vs {:?})\n",
                witness_index.expect("unequal transformations differ"),
                h1,
                h2
            )
        };
        (
            if equal { EXIT_VALID } else { EXIT_INVALID },
            render(json, &out, text),
        )
    }
}

fn cmd_free(gens: usize, sig: &Signature, config: &Config, json: bool) -> (i32, String) {
    let handle = match FreeAlgebraHandle::build(sig, gens, config) {
        Ok(h) => h,
        Err(e) => return (EXIT_USAGE, format!("{e}\n")),
    };
    let stats = match handle.stats() {
        Ok(s) => s,
        Err(e) => return (EXIT_USAGE, format!("{e}\n")),
    };
    let out = FreeStatsJson::from(&stats);
    let text = format!(
        "Fr_{} {} n={}: alphabet {}, atoms {}, cardinality 2^(2^{}); minterms realized {}/{} ({})\n",
        gens,
        sig.kind.name(),
        sig.dim,
        stats.alphabet,
        stats.atom_count,
        stats.cardinality_log2_log2,
        stats.minterms_realized,
        stats.minterms_checked,
        if stats.exhaustive { "exhaustive" } else { "sampled" },
    );
    (EXIT_VALID, render(json, &out, text))
}

fn cmd_countermodel(input: &str, sig: &Signature, config: &Config, json: bool) -> (i32, String) {
    let f = match parse_formula(input, sig) {
        Ok(f) => f,
        Err(e) => return (EXIT_USAGE, format!("{e}\n")),
    };
    let result = match decide_formula(&f, sig, config) {
        Ok(r) => r,
        Err(e) => return (EXIT_USAGE, format!("{e}\n")),
    };
    match &result {
        ValidityResult::Invalid { countermodel, .. } => {
            if !countermodel
                .replay_equation(&formula_as_equation(&f), config)
                .unwrap_or(false)
            {
                return (
                    EXIT_USAGE,
                    "internal error: countermodel failed to replay\n".to_string(),
                );
            }
            let (model, witness) = match verdict_to_kripke(&result, &f, config) {
                Ok(mw) => mw,
                Err(e) => return (EXIT_USAGE, format!("{e}\n")),
            };
            let mj = model_json(&model, witness);
            let text = format!(
                "countermodel: {} states (base {}), formula fails at state {}\n",
                model.algebra().unit().size(),
                model.algebra().unit().base(),
                witness
            );
            (EXIT_VALID, render(json, &mj, text))
        }
        ValidityResult::Valid { .. } => {
            let v = verdict_json(&result, config.seed);
            let text = "the formula is valid; no countermodel exists\n".to_string();
            (EXIT_INVALID, render(json, &v, text))
        }
        ValidityResult::Unknown { .. } => {
            let v = verdict_json(&result, config.seed);
            (EXIT_UNKNOWN, render(json, &v, verdict_text(&v)))
        }
    }
}

fn cmd_verify_paper(dim_max: usize, config: &Config, json: bool) -> (i32, String) {
    if !(2..=6).contains(&dim_max) {
        return (
            EXIT_USAGE,
            "--dim-max must be between 2 and 6\n".to_string(),
        );
    }
    let report = verify_paper(dim_max, config);
    let code = if report.pass {
        EXIT_VALID
    } else {
        EXIT_INVALID
    };
    let text = report.render_text();
    (code, render(json, &report, text))
}

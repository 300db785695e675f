use std::fmt::Write as _;

use anyhow::{Context, Result};
use kneadlab::entropy::{entropy_lap, entropy_sweep};
use kneadlab::enumeration::{admissible_up_to, census};
use kneadlab::inverse::{level_fixed_points, parse_branches, LevelFunction};
use kneadlab::kneading::{kneading_sequence, Termination};
use kneadlab::schwarzian::{positivity_grid, verify_positive_schwarzian};
use kneadlab::solver::{solve_all, solve_discovered, solve_word, SolveOptions};
use kneadlab::sweep::kneading_sweep;
use kneadlab::symbolic::{compare, is_shift_maximal};
use kneadlab::{BuiltinFamily, Word};
use serde::Serialize;
use serde_json::json;

use crate::args::{Cli, Command, Format};
use crate::Outcome;

fn json_text<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)?)
}

fn ok(text: String) -> Outcome {
    Outcome {
        text,
        verified: true,
        note: None,
    }
}

/// Floats in CSV carry 17 significant digits.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn termination_name(t: Termination) -> &'static str {
    match t {
        Termination::HitC => "hit_C",
        Termination::Truncated => "truncated",
    }
}

fn format_or(cli: &Cli, default: Format) -> Format {
    cli.format.unwrap_or(default)
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Knead {
            family,
            mu,
            len,
            ctol,
        } => {
            let k = kneading_sequence(&family.family, *mu, *len, *ctol)?;
            Ok(ok(json_text(&k)?))
        }
        Command::Compare { a, b } => Ok(ok(json_text(
            &json!({ "a": a, "b": b, "order": compare(a, b) }),
        )?)),
        Command::Shiftmax { word } => Ok(ok(json_text(
            &json!({ "word": word, "shift_maximal": is_shift_maximal(word) }),
        )?)),
        Command::Level {
            family,
            word,
            mu,
            tol,
        } => {
            let level = LevelFunction::new(&family.family, parse_branches(word)?)?;
            let value = level.eval(*mu, *tol)?;
            Ok(ok(json_text(
                &json!({ "word": word, "mu": mu, "level": value }),
            )?))
        }
        Command::Superstable {
            family,
            word,
            lo,
            hi,
            tol,
        } => {
            let level = LevelFunction::for_word(&family.family, word)?;
            let points = level_fixed_points(&level, *lo, *hi, *tol)?;
            let verified = !points.is_empty() && points.iter().all(|p| p.verified);
            let text = json_text(&json!({ "word": word, "fixed_points": points }))?;
            let note = (!verified).then(|| format!("no verified fixed point for {word}"));
            Ok(Outcome {
                text,
                verified,
                note,
            })
        }
        Command::Solve {
            family,
            word,
            lo,
            hi,
            tol,
            ctol,
        } => {
            let opts = SolveOptions {
                tol: *tol,
                c_tol: *ctol,
                ..SolveOptions::default()
            };
            let report = match (lo, hi) {
                (Some(lo), Some(hi)) => solve_word(&family.family, word, *lo, *hi, &opts)?,
                _ => solve_discovered(&family.family, word, &opts)?,
            };
            Ok(ok(json_text(&report)?))
        }
        Command::SolveAll {
            family,
            max_period,
            tol,
        } => solve_all_command(family.family, *max_period, *tol),
        Command::Census { max_period, list } => {
            let rows = census(*max_period)?;
            let verified = rows.iter().all(|r| r.agrees());
            let out: Vec<_> = rows
                .iter()
                .map(|r| {
                    let mut row = json!({
                        "n": r.n,
                        "enumerated": r.enumerated.len(),
                        "formula": r.formula_count,
                        "agrees": r.agrees(),
                    });
                    if *list {
                        row["words"] = json!(r.enumerated);
                    }
                    row
                })
                .collect();
            let note =
                (!verified).then(|| "enumeration disagrees with the counting formula".to_string());
            Ok(Outcome {
                text: json_text(&out)?,
                verified,
                note,
            })
        }
        Command::Entropy { family, mu, nmax } => {
            let h = entropy_lap(&family.family, *mu, *nmax)?;
            let text = match format_or(cli, Format::Csv) {
                Format::Csv => format!("mu,h\n{},{}\n", num(*mu), num(h)),
                Format::Json => json_text(&json!({ "mu": mu, "h": h }))?,
            };
            Ok(ok(text))
        }
        Command::EntropySweep {
            family,
            grid,
            nmax,
            slack,
        } => {
            let sweep = entropy_sweep(&family.family, *grid, *nmax, *slack)?;
            let verified = sweep.violations.is_empty();
            let text = match format_or(cli, Format::Csv) {
                Format::Csv => {
                    let mut s = String::from("mu,h\n");
                    for p in &sweep.points {
                        writeln!(s, "{},{}", num(p.mu), num(p.h))?;
                    }
                    s
                }
                Format::Json => json_text(&sweep)?,
            };
            let note = (!verified).then(|| {
                format!(
                    "{} entropy drops beyond slack {}",
                    sweep.violations.len(),
                    sweep.slack
                )
            });
            Ok(Outcome {
                text,
                verified,
                note,
            })
        }
        Command::Schwarzian { family, grid } => {
            let (mus, fracs) = positivity_grid(grid.0, grid.1);
            let report = verify_positive_schwarzian(&family.family, &mus, &fracs)?;
            let verified = report.pass;
            let note =
                (!verified).then(|| format!("minimum Schwarzian {} is not positive", report.min_s));
            Ok(Outcome {
                text: json_text(&report)?,
                verified,
                note,
            })
        }
        Command::Sweep {
            family,
            grid,
            len,
            ctol,
        } => {
            let report = kneading_sweep(&family.family, *grid, *len, *ctol)?;
            let verified = report.is_monotone();
            let text = match format_or(cli, Format::Csv) {
                Format::Csv => {
                    let mut s = String::from("mu,word,termination,c_distance\n");
                    for p in &report.points {
                        writeln!(
                            s,
                            "{},{},{},{}",
                            num(p.mu),
                            p.word,
                            termination_name(p.termination),
                            num(p.c_distance)
                        )?;
                    }
                    s
                }
                Format::Json => json_text(&report)?,
            };
            let note = if !verified {
                let first = &report.violations[0];
                Some(format!(
                    "{} order reversals, first between mu = {} ({}) and mu = {} ({})",
                    report.violations.len(),
                    first.mu_lo,
                    first.word_lo,
                    first.mu_hi,
                    first.word_hi
                ))
            } else if !report.undecided.is_empty() {
                Some(format!(
                    "{} adjacent pairs left undecided",
                    report.undecided.len()
                ))
            } else {
                None
            };
            Ok(Outcome {
                text,
                verified,
                note,
            })
        }
    }
}

/// Solves every admissible word up to `max_period` and checks that the
/// parameter order equals the parity-lexicographic word order.
fn solve_all_command(family: BuiltinFamily, max_period: u32, tol: f64) -> Result<Outcome> {
    let words = admissible_up_to(max_period)?;
    let opts = SolveOptions {
        tol,
        ..SolveOptions::default()
    };
    let all = solve_all(&family, &words, &opts);
    let by_mu: Vec<&Word> = all.reports.iter().map(|r| &r.target).collect();
    let in_order = all.failures.is_empty() && by_mu.iter().copied().eq(words.iter());
    let mut notes = Vec::new();
    for f in &all.failures {
        notes.push(format!("{}: {}", f.target, f.error));
    }
    if all.failures.is_empty() && !in_order {
        notes.push("parameter order differs from word order".to_string());
    }
    let text = json_text(&all.reports).context("serializing reports")?;
    Ok(Outcome {
        text,
        verified: in_order,
        note: (!notes.is_empty()).then(|| notes.join("\n")),
    })
}

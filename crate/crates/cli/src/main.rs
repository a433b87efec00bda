//! `conevol` — seeded, reproducible command-line checks over exact
//! reflection-group geometry.
//!
//! Every command prints either plain text lines or (with `--json`) a single
//! JSON document; a failed check exits nonzero after printing a one-line
//! witness (JSON on stdout in `--json` mode, text on stderr otherwise).
//! Randomized commands take an explicit `--seed` and re-running with the
//! same seed reproduces the output byte for byte.

use std::process::ExitCode;

use anyhow::{anyhow, bail, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use conevol::{
    alcove_partition_check, chamber_counts, classify_finite, cone_volume_exact,
    deletion_identity, exponents_from_lattice, generate_group, intersection_lattice,
    monte_carlo_cone_volume_with, poincare_polynomial, rat, ratio_string,
    reflection_arrangement, search_h_extensions_with_bound,
    standard_crystallographic_families, truncated_poincare, verify_count_theorem,
    verify_factorization, CoxeterDiagram, Factorization, Family, McOptions, RootSystem,
    DEFAULT_GROUP_CAP,
};

#[derive(Parser)]
#[command(
    name = "conevol",
    version,
    about = "Exact root systems, reflection arrangements, and cone-volume checks"
)]
struct Cli {
    /// Emit one JSON document instead of text lines.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for Monte Carlo runs (default: $CONEVOL_THREADS or 1).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

impl Cli {
    fn threads(&self) -> usize {
        self.threads
            .or_else(|| {
                std::env::var("CONEVOL_THREADS")
                    .ok()
                    .and_then(|s| s.parse().ok())
            })
            .unwrap_or(1)
            .max(1)
    }
}

/// A finite type named on the command line: `A2`, `b4`, `H3`, `I2(7)`,
/// or a bare `I2` paired with `--m`.
#[derive(Args)]
struct Selector {
    /// Type name.
    name: String,
    /// Dihedral bond label, for the bare `I2` form.
    #[arg(long)]
    m: Option<u32>,
}

impl Selector {
    fn family(&self) -> Result<Family> {
        let family = match (self.name.eq_ignore_ascii_case("i2"), self.m) {
            (true, Some(m)) => Family::I2(m),
            (true, None) => bail!("bare I2 needs --m <label>"),
            (false, None) => Family::parse(&self.name)?,
            (false, Some(_)) => bail!("--m only combines with the bare I2 name"),
        };
        family.validate()?;
        Ok(family)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Degree table, group order, and positive-root count of a type.
    Degrees(Selector),
    /// Exact cone volume, optionally with a seeded Monte Carlo estimate.
    Volume {
        #[command(flatten)]
        selector: Selector,
        /// Number of Monte Carlo samples.
        #[arg(long)]
        mc: Option<u64>,
        /// RNG seed (required with --mc).
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Verify that seeded generic points meet exactly ∏(dᵢ−1) cone
    /// translates, by full group enumeration.
    Count {
        #[command(flatten)]
        selector: Selector,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long)]
        seed: u64,
    },
    /// Intersection-lattice Poincaré polynomial with its factorization,
    /// chamber counts, and rank truncation.
    Poincare(Selector),
    /// The affine deletion identity Σᵢ ∏ⱼ (dⱼ⁽ⁱ⁾−1)/dⱼ⁽ⁱ⁾ = 1.
    Identity {
        /// Crystallographic type name (or use --all-crystallographic).
        name: Option<String>,
        /// Dihedral bond label, for the bare `I2` form.
        #[arg(long)]
        m: Option<u32>,
        /// Check every family A2..A8, B2..B5, C2..C5, D4..D6, E6..E8, F4, G2.
        #[arg(long)]
        all_crystallographic: bool,
    },
    /// Exhaustively search one-vertex extensions of H3 or H4 for the
    /// deletion identity; passes when no admissible extension sums to 1.
    SearchExt {
        #[command(flatten)]
        selector: Selector,
        /// Keep extensions that are themselves of finite type.
        #[arg(long)]
        allow_finite_total: bool,
        /// Largest bond label to try on the new vertex.
        #[arg(long, default_value_t = 5)]
        max_label: u32,
    },
    /// Check that seeded generic points land in exactly one vertex cone
    /// of the fundamental alcove.
    Alcove {
        #[command(flatten)]
        selector: Selector,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long)]
        seed: u64,
    },
    /// Classify a Coxeter diagram written in the "n; i j m; …" grammar.
    Classify {
        /// Diagram text, e.g. "3; 1 2 3; 2 3 5" for H3.
        diagram: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if cli.json {
                println!("{}", json!({ "status": "fail", "error": format!("{e:#}") }));
            } else {
                eprintln!("error: {e:#}");
            }
            ExitCode::FAILURE
        }
    }
}

fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Degrees(selector) => cmd_degrees(cli, selector.family()?),
        Command::Volume { selector, mc, seed } => cmd_volume(cli, selector.family()?, *mc, *seed),
        Command::Count {
            selector,
            trials,
            seed,
        } => cmd_count(cli, selector.family()?, *trials, *seed),
        Command::Poincare(selector) => cmd_poincare(cli, selector.family()?),
        Command::Identity {
            name,
            m,
            all_crystallographic,
        } => cmd_identity(cli, name.as_deref(), *m, *all_crystallographic),
        Command::SearchExt {
            selector,
            allow_finite_total,
            max_label,
        } => cmd_search(cli, selector.family()?, *allow_finite_total, *max_label),
        Command::Alcove {
            selector,
            trials,
            seed,
        } => cmd_alcove(cli, selector.family()?, *trials, *seed),
        Command::Classify { diagram } => cmd_classify(cli, diagram),
    }
}

fn emit(cli: &Cli, value: serde_json::Value, text: Vec<String>) -> Result<()> {
    if cli.json {
        println!("{value}");
    } else {
        for line in text {
            println!("{line}");
        }
    }
    Ok(())
}

fn join<T: ToString>(vals: &[T]) -> String {
    vals.iter()
        .map(T::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

fn cmd_degrees(cli: &Cli, family: Family) -> Result<()> {
    let degrees = family.degrees();
    let order = degrees.group_order();
    let positive = degrees.exponent_sum();
    emit(
        cli,
        json!({
            "type": family.to_string(),
            "degrees": degrees.values(),
            "group_order": order,
            "positive_roots": positive,
        }),
        vec![
            format!("type {family}"),
            format!("degrees {}", join(degrees.values())),
            format!("group order {order}"),
            format!("positive roots {positive}"),
        ],
    )
}

fn cmd_volume(cli: &Cli, family: Family, mc: Option<u64>, seed: Option<u64>) -> Result<()> {
    let degrees = family.degrees();
    let exact = cone_volume_exact(&degrees);
    let Some(samples) = mc else {
        if seed.is_some() {
            bail!("--seed does nothing without --mc");
        }
        return emit(
            cli,
            json!({
                "type": family.to_string(),
                "degrees": degrees.values(),
                "exact": ratio_string(&exact),
            }),
            vec![
                format!("type {family}"),
                format!("degrees {}", join(degrees.values())),
                format!("exact {}", ratio_string(&exact)),
            ],
        );
    };
    let seed = seed.ok_or_else(|| anyhow!("--mc needs an explicit --seed"))?;
    let rs = RootSystem::of_family(family)?;
    let options = McOptions {
        threads: cli.threads(),
        ..McOptions::default()
    };
    let report = monte_carlo_cone_volume_with(&rs, samples, seed, &options)?;
    let deviation = report.deviation_in_stderr();
    if deviation > 5.0 {
        bail!(
            "{family}: estimate {:.6} is {deviation:.2} standard errors from the exact {} (stderr {:.2e}, seed {seed})",
            report.estimate,
            report.exact_string(),
            report.stderr,
        );
    }
    let mut value = serde_json::to_value(&report)?;
    let map = value.as_object_mut().expect("report serializes to an object");
    map.insert("deviation_sigma".into(), json!(deviation));
    map.insert("status".into(), json!("pass"));
    emit(
        cli,
        value,
        vec![
            format!("type {}", report.type_name),
            format!("degrees {}", join(&report.degrees)),
            format!("exact {}", report.exact_string()),
            format!("estimate {:.6}", report.estimate),
            format!("stderr {:.3e}", report.stderr),
            format!("deviation {deviation:.2} sigma"),
            format!("samples {}", report.samples),
            format!("seed {}", report.seed),
            format!("discards {}", report.discards),
            "status pass".into(),
        ],
    )
}

fn cmd_count(cli: &Cli, family: Family, trials: u64, seed: u64) -> Result<()> {
    let degrees = family.degrees();
    let expected: u64 = degrees.exponents().iter().product();
    let order = degrees.group_order();
    if order > DEFAULT_GROUP_CAP {
        return emit(
            cli,
            json!({
                "type": family.to_string(),
                "status": "skipped",
                "reason": format!(
                    "group order {order} exceeds the enumeration cap {DEFAULT_GROUP_CAP}"
                ),
                "expected_count": expected,
            }),
            vec![
                format!("type {family}"),
                "status skipped".into(),
                format!("group order {order} exceeds the enumeration cap {DEFAULT_GROUP_CAP}"),
                format!("formula count (not enumerated) {expected}"),
            ],
        );
    }
    let rs = RootSystem::of_family(family)?;
    let w = generate_group(&rs)?;
    let report = verify_count_theorem(&rs, &w, trials, seed)?;
    let mut value = serde_json::to_value(&report)?;
    let map = value.as_object_mut().expect("report serializes to an object");
    map.insert("status".into(), json!("pass"));
    emit(
        cli,
        value,
        vec![
            format!("type {}", report.type_name),
            format!("expected {}", report.expected),
            format!("trials {}", report.trials),
            format!("seed {}", report.seed),
            format!("every sampled point met {} cones", report.expected),
            "status pass".into(),
        ],
    )
}

fn cmd_poincare(cli: &Cli, family: Family) -> Result<()> {
    let rs = RootSystem::of_family(family)?;
    let arrangement = reflection_arrangement(&rs)?;
    let lattice = intersection_lattice(&arrangement)?;
    let p = poincare_polynomial(&lattice);
    let degrees = rs.degrees()?;
    let n = rs.rank();
    if !verify_factorization(&p, &degrees) {
        bail!(
            "{family}: π = {p} does not factor as ∏(1 + (dᵢ−1)t) over degrees {}",
            join(degrees.values())
        );
    }
    let exponents = match exponents_from_lattice(&lattice) {
        Factorization::Exponents(e) => e,
        Factorization::NonFactoring => bail!("{family}: π = {p} does not factor over ℤ"),
    };
    let (chambers, _) = chamber_counts(&p, n);
    if chambers as u64 != degrees.group_order() {
        bail!(
            "{family}: {chambers} chambers but the group has order {}",
            degrees.group_order()
        );
    }
    let truncated = truncated_poincare(&lattice, n);
    let (sliced_regions, sliced_bounded) = chamber_counts(&truncated, n.saturating_sub(1));
    let top = p.coeff(n);
    if n >= 1 && sliced_bounded != top {
        bail!(
            "{family}: {sliced_bounded} bounded regions on a generic slice, but the top coefficient is {top}"
        );
    }
    emit(
        cli,
        json!({
            "type": family.to_string(),
            "hyperplanes": arrangement.num_hyperplanes(),
            "poincare": serde_json::to_value(&p)?,
            "exponents": exponents,
            "factorization": "pass",
            "chambers": chambers,
            "truncated": serde_json::to_value(&truncated)?,
            "sliced_regions": sliced_regions,
            "sliced_bounded": sliced_bounded,
            "top_coefficient": top,
        }),
        vec![
            format!("type {family}"),
            format!("hyperplanes {}", arrangement.num_hyperplanes()),
            format!("poincare {p}"),
            format!("exponents {}", join(&exponents)),
            "factorization pass".into(),
            format!("chambers {chambers}"),
            format!("truncated {truncated}"),
            format!("sliced regions {sliced_regions}"),
            format!("sliced bounded chambers {sliced_bounded}"),
            format!("top coefficient {top}"),
        ],
    )
}

fn cmd_identity(cli: &Cli, name: Option<&str>, m: Option<u32>, all: bool) -> Result<()> {
    let families = match (name, all) {
        (Some(_), true) | (None, false) => {
            bail!("pass exactly one of a type name or --all-crystallographic")
        }
        (None, true) => standard_crystallographic_families(),
        (Some(name), false) => {
            let selector = Selector {
                name: name.to_string(),
                m,
            };
            vec![selector.family()?]
        }
    };
    let mut reports = Vec::new();
    let mut text = Vec::new();
    for family in families {
        let report = deletion_identity(family)?;
        if report.total != rat(1, 1) {
            bail!(
                "{family}: deletion terms sum to {}, not 1",
                ratio_string(&report.total)
            );
        }
        text.push(format!("type {family}"));
        text.push(format!("extended {}", report.extended));
        for d in &report.deletions {
            text.push(format!(
                "node {} -> {} (degrees {}) term {}",
                d.node,
                d.decomposition,
                join(d.degrees.values()),
                ratio_string(&d.term)
            ));
        }
        text.push(format!("total {}", ratio_string(&report.total)));
        text.push("status pass".into());
        reports.push(report);
    }
    emit(
        cli,
        json!({
            "reports": serde_json::to_value(&reports)?,
            "status": "pass",
        }),
        text,
    )
}

fn cmd_search(cli: &Cli, family: Family, allow_finite_total: bool, max_label: u32) -> Result<()> {
    let candidates = search_h_extensions_with_bound(family, !allow_finite_total, max_label)?;
    if let Some(c) = candidates.iter().find(|c| c.sum == rat(1, 1)) {
        bail!(
            "{family}: extension with labels {} satisfies the identity",
            join(&c.labels)
        );
    }
    let mut text = vec![
        format!("base {family}"),
        format!(
            "mode {}",
            if allow_finite_total {
                "allow-finite-total"
            } else {
                "require-nonfinite-total"
            }
        ),
        format!("max label {max_label}"),
    ];
    for c in &candidates {
        text.push(format!(
            "labels {}  sum {}  finite-total {}  single-3-path {}",
            join(&c.labels),
            ratio_string(&c.sum),
            if c.finite_total { "yes" } else { "no" },
            if c.single_label3_path { "yes" } else { "no" },
        ));
    }
    text.push(format!("candidates {}", candidates.len()));
    text.push("status pass (no sum equals 1)".into());
    emit(
        cli,
        json!({
            "base": family.to_string(),
            "mode": if allow_finite_total { "allow-finite-total" } else { "require-nonfinite-total" },
            "max_label": max_label,
            "candidates": serde_json::to_value(&candidates)?,
            "count": candidates.len(),
            "all_sums_differ_from_one": true,
            "status": "pass",
        }),
        text,
    )
}

fn cmd_alcove(cli: &Cli, family: Family, trials: u64, seed: u64) -> Result<()> {
    let report = alcove_partition_check(family, trials, seed)?;
    let mut hits = vec![0u64; family.rank() + 1];
    for sample in &report.samples {
        hits[sample.vertex] += 1;
    }
    let mut value = serde_json::to_value(&report)?;
    let map = value.as_object_mut().expect("report serializes to an object");
    map.insert("vertex_histogram".into(), json!(hits));
    map.insert("status".into(), json!("pass"));
    let mut text = vec![
        format!("type {family}"),
        format!("trials {trials}"),
        format!("seed {seed}"),
    ];
    for (vertex, count) in hits.iter().enumerate() {
        text.push(format!("vertex {vertex}: {count} points"));
    }
    text.push("every point lay in exactly one vertex cone".into());
    text.push("status pass".into());
    emit(cli, value, text)
}

fn cmd_classify(cli: &Cli, diagram: &str) -> Result<()> {
    let d = CoxeterDiagram::parse(diagram)?;
    let decomposition = classify_finite(&d);
    if !decomposition.is_finite() {
        return emit(
            cli,
            json!({
                "input": d.to_string(),
                "type": decomposition.to_string(),
                "finite": false,
            }),
            vec![
                format!("input {d}"),
                format!("type {decomposition}"),
                "finite no".into(),
            ],
        );
    }
    let degrees = conevol::degrees(&d)?;
    emit(
        cli,
        json!({
            "input": d.to_string(),
            "type": decomposition.to_string(),
            "finite": true,
            "degrees": degrees.values(),
            "group_order": degrees.group_order(),
        }),
        vec![
            format!("input {d}"),
            format!("type {decomposition}"),
            "finite yes".into(),
            format!("degrees {}", join(degrees.values())),
            format!("group order {}", degrees.group_order()),
        ],
    )
}

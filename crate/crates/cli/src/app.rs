//! Argument parsing, dispatch, and the exit-code contract:
//! 0 = ok, 1 = counterexample found, 2 = usage or internal error.

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::{json, Value};

use sumsetlab_core::constructions::{
    build_decomp, build_mod3, build_two_coset, build_x22, canonical_index5_subgroup,
    ConstructionRecipe, Parity, VerifyReport,
};
use sumsetlab_core::group::{diam_plus, diam_plus_bruteforce};
use sumsetlab_core::harness::{
    check_doubling_density, check_kneser_suite, check_propositions, falsify_stability_stochastic,
    verify_stability_exhaustive, Sampler, TrialConfig, ViolationReport,
};
use sumsetlab_core::lp::{certify_all, LpCertificate};
use sumsetlab_core::search::DEFAULT_BUDGET;
use sumsetlab_core::spectral::{cubic_sum, find_witness, parseval_offprincipal, CubeRoot};
use sumsetlab_core::{
    bt_rho_search, known_value, mk_bruteforce, mk_formula, mk_search_descending, nk_search, GroupSpec, SetEngine,
};

use crate::format::{
    group_literal, parse_group, parse_set, search_report_json, set_hex_literal, set_literal,
    source_label,
};

#[derive(Parser, Debug)]
#[command(
    name = "sumsetlab",
    about = "Extremal sumset constants, constructions, character sums and certificates in finite abelian groups",
    version
)]
struct Cli {
    /// Worker threads (defaults to all cores; SUMSETLAB_THREADS as fallback).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Write the JSON result to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Emit JSON (the default; kept for interface stability).
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug)]
struct GroupArg {
    /// Group as comma-separated cyclic factors, e.g. "5,5" (use "1" for the
    /// trivial group). Non-chain lists are normalized.
    #[arg(long)]
    group: String,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Largest size of a subset whose k-fold sumset misses part of the group.
    Mk {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long)]
        k: u32,
        /// Cross-check the closed form against the full 2^|G| scan (|G| <= 16).
        #[arg(long)]
        brute: bool,
        /// Use the size-descending scan instead of the closed form.
        #[arg(long)]
        descending: bool,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Largest aperiodic maximal subset with a non-full k-fold sumset.
    Nk {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Largest aperiodic generating subset A with (rho-1)(A ∪ {0}) ≠ G,
    /// maximal with this property.
    Bt {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long)]
        rho: u32,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// The covering exponent sum(m_i - 1), optionally with its exhaustive
    /// oracle.
    Diam {
        #[command(flatten)]
        group: GroupArg,
        #[arg(long)]
        brute: bool,
    },
    /// Build one of the extremal constructions, optionally verifying every
    /// claimed property.
    Construct {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        group: Option<String>,
        /// Rank n for the Z_5^n constructions.
        #[arg(long)]
        n: Option<usize>,
        /// Two coset indices for the two-coset union, e.g. "0,1".
        #[arg(long, default_value = "0,1")]
        cosets: String,
        /// Order of the cyclic summand (3m+2) for the mod3 constructions.
        #[arg(long)]
        g1_order: Option<u64>,
        #[arg(long)]
        verify: bool,
    },
    /// Fourier analysis of a subset of Z_5^n.
    Spectral {
        /// Set literal: "{(a,b),...}" (needs --group) or "<group>:0x<hex>".
        #[arg(long)]
        set: String,
        #[arg(long)]
        group: Option<String>,
    },
    /// Exact certificates for the ten density linear programs.
    #[command(name = "lp-cert")]
    LpCert {
        /// Certify all ten instances (the default).
        #[arg(long, default_value_t = true)]
        all: bool,
    },
    /// Falsification suites; exit code 1 signals a found counterexample.
    Harness {
        #[arg(long, value_enum)]
        suite: SuiteArg,
        #[arg(long, default_value = "5,5")]
        group: String,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Known-value / searched-value matrix over a list of groups.
    Table {
        /// Semicolon-separated group literals, e.g. "5;7;3,3;2,2,2,2;5,5".
        #[arg(long)]
        groups: String,
        #[arg(long, default_value_t = 4)]
        kmax: u32,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        /// Emit CSV on stdout instead of JSON.
        #[arg(long)]
        csv: bool,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum KindArg {
    Decomp,
    TwoCoset,
    X22,
    Mod3Odd,
    Mod3Even,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum SuiteArg {
    Kneser,
    Props,
    Stability,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Ok,
    Counterexample,
    Error,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Ok => 0,
            Verdict::Counterexample => 1,
            Verdict::Error => 2,
        }
    }

    fn label(self) -> &'static str {
        match self {
            Verdict::Ok => "ok",
            Verdict::Counterexample => "counterexample",
            Verdict::Error => "error",
        }
    }
}

/// Dispatch result: verdict, subcommand payload, and a one-line summary.
struct CommandResult {
    verdict: Verdict,
    payload: Value,
    summary: String,
    /// Raw non-JSON stdout (CSV mode).
    raw: Option<String>,
}

/// Parses and runs `argv` (without the program name handled by clap),
/// returning the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders its own message; --help/--version exit 0
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    init_threads(cli.threads);
    let started = Instant::now();
    match dispatch(&cli.cmd) {
        Ok(outcome) => {
            let envelope = json!({
                "verdict": outcome.verdict.label(),
                "elapsed_ms": started.elapsed().as_millis() as u64,
                "payload": outcome.payload,
            });
            if let Some(raw) = &outcome.raw {
                if emit(cli.out.as_deref(), raw).is_err() {
                    return Verdict::Error.exit_code();
                }
            } else {
                let text = serde_json::to_string_pretty(&envelope).expect("serializable");
                if emit(cli.out.as_deref(), &text).is_err() {
                    return Verdict::Error.exit_code();
                }
            }
            eprintln!("{}", outcome.summary);
            outcome.verdict.exit_code()
        }
        Err(e) => {
            let envelope = json!({
                "verdict": Verdict::Error.label(),
                "elapsed_ms": started.elapsed().as_millis() as u64,
                "error": format!("{e:#}"),
            });
            println!("{}", serde_json::to_string_pretty(&envelope).expect("serializable"));
            eprintln!("error: {e:#}");
            Verdict::Error.exit_code()
        }
    }
}

fn emit(out: Option<&std::path::Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => {
            let mut f = std::fs::File::create(path)
                .with_context(|| format!("cannot create {}", path.display()))?;
            writeln!(f, "{text}")?;
        }
        None => println!("{text}"),
    }
    Ok(())
}

fn init_threads(flag: Option<usize>) {
    let n = flag.or_else(|| {
        std::env::var("SUMSETLAB_THREADS")
            .ok()
            .and_then(|v| v.parse().ok())
    });
    if let Some(n) = n {
        // ignore the error when a pool already exists (repeated calls in tests)
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn dispatch(cmd: &Cmd) -> Result<CommandResult> {
    match cmd {
        Cmd::Mk {
            group,
            k,
            brute,
            descending,
            budget,
        } => run_mk(&group.group, *k, *brute, *descending, *budget),
        Cmd::Nk { group, k, budget } => run_nk(&group.group, *k, *budget),
        Cmd::Bt { group, rho, budget } => run_bt(&group.group, *rho, *budget),
        Cmd::Diam { group, brute } => run_diam(&group.group, *brute),
        Cmd::Construct {
            kind,
            group,
            n,
            cosets,
            g1_order,
            verify,
        } => run_construct(*kind, group.as_deref(), *n, cosets, *g1_order, *verify),
        Cmd::Spectral { set, group } => run_spectral(set, group.as_deref()),
        Cmd::LpCert { all: _ } => run_lp_cert(),
        Cmd::Harness {
            suite,
            group,
            trials,
            seed,
        } => run_harness(*suite, group, *trials, *seed),
        Cmd::Table {
            groups,
            kmax,
            budget,
            csv,
        } => run_table(groups, *kmax, *budget, *csv),
    }
}

fn run_mk(group: &str, k: u32, brute: bool, descending: bool, budget: u64) -> Result<CommandResult> {
    let g = parse_group(group)?;
    let (value, divisor) = mk_formula(&g, k);
    let mut payload;
    if descending {
        let report = mk_search_descending(&g, k, budget).map_err(|e| anyhow!("{e}"))?;
        let mut j = search_report_json(&report);
        j.best_divisor = Some(divisor);
        payload = serde_json::to_value(&j)?;
        if report.value != value {
            bail!("descending scan ({}) disagrees with the closed form ({value})", report.value);
        }
    } else if brute {
        let report = mk_bruteforce(&g, k).map_err(|e| anyhow!("{e}"))?;
        let mut j = search_report_json(&report);
        j.best_divisor = Some(divisor);
        payload = serde_json::to_value(&j)?;
        if report.value != value {
            bail!("full scan ({}) disagrees with the closed form ({value})", report.value);
        }
        payload["formula_value"] = json!(value);
    } else {
        payload = json!({
            "group": group_literal(&g),
            "k": k,
            "constant": "Mk",
            "value": value,
            "witnesses": [],
            "nodes": 0,
            "elapsed_ms": 0,
            "method": "formula",
            "best_divisor": divisor,
        });
    }
    Ok(CommandResult {
        verdict: Verdict::Ok,
        summary: format!("M_{k}({}) = {value} (maximizing divisor {divisor})", group_literal(&g)),
        payload,
        raw: None,
    })
}

fn run_nk(group: &str, k: u32, budget: u64) -> Result<CommandResult> {
    let g = parse_group(group)?;
    let report = nk_search(&g, k, budget).map_err(|e| anyhow!("{e}"))?;
    let mut j = search_report_json(&report);
    if let Some(kv) = known_value(&g, k) {
        if kv.value != report.value {
            bail!(
                "search value {} contradicts the known closed form {} ({})",
                report.value,
                kv.value,
                source_label(kv.source)
            );
        }
        j.method = format!("{} (known: {})", j.method, source_label(kv.source));
    }
    let summary = format!("N_{k}({}) = {}", group_literal(&g), report.value);
    Ok(CommandResult {
        verdict: Verdict::Ok,
        payload: serde_json::to_value(&j)?,
        summary,
        raw: None,
    })
}

fn run_bt(group: &str, rho: u32, budget: u64) -> Result<CommandResult> {
    let g = parse_group(group)?;
    let report = bt_rho_search(&g, rho, budget).map_err(|e| anyhow!("{e}"))?;
    let j = search_report_json(&report);
    let summary = format!("b+_{rho}({}) = {}", group_literal(&g), report.value);
    Ok(CommandResult {
        verdict: Verdict::Ok,
        payload: serde_json::to_value(&j)?,
        summary,
        raw: None,
    })
}

fn run_diam(group: &str, brute: bool) -> Result<CommandResult> {
    let g = parse_group(group)?;
    let formula = diam_plus(&g);
    let brute_value = if brute {
        Some(diam_plus_bruteforce(&g).map_err(|e| anyhow!("{e}"))?)
    } else {
        None
    };
    if let Some(b) = brute_value {
        if b != formula {
            bail!("exhaustive diameter {b} disagrees with the formula {formula}");
        }
    }
    Ok(CommandResult {
        verdict: Verdict::Ok,
        payload: json!({
            "group": group_literal(&g),
            "diam_plus": formula,
            "brute": brute_value,
            "agree": brute_value.map(|b| b == formula),
        }),
        summary: format!("diam+({}) = {formula}", group_literal(&g)),
        raw: None,
    })
}

#[derive(Serialize)]
struct CheckJson {
    name: &'static str,
    pass: bool,
    detail: String,
}

fn verify_json(report: &VerifyReport) -> Vec<CheckJson> {
    report
        .checks
        .iter()
        .map(|c| CheckJson {
            name: c.name,
            pass: c.pass,
            detail: c.detail.clone(),
        })
        .collect()
}

fn run_construct(
    kind: KindArg,
    group: Option<&str>,
    n: Option<usize>,
    cosets: &str,
    g1_order: Option<u64>,
    verify: bool,
) -> Result<CommandResult> {
    let recipe: ConstructionRecipe = match kind {
        KindArg::Decomp => {
            let g = parse_group(group.ok_or_else(|| anyhow!("--kind decomp needs --group"))?)?;
            let output = build_decomp(&g).map_err(|e| anyhow!("{e}"))?;
            ConstructionRecipe::Decomp { group: g, output }
        }
        KindArg::TwoCoset => {
            let n = n.ok_or_else(|| anyhow!("--kind two-coset needs --n"))?;
            let g = GroupSpec::elementary(5, n).map_err(|e| anyhow!("{e}"))?;
            let engine = SetEngine::new(g.clone()).map_err(|e| anyhow!("{e}"))?;
            let f = canonical_index5_subgroup(&engine).map_err(|e| anyhow!("{e}"))?;
            let (a, b) = cosets
                .split_once(',')
                .ok_or_else(|| anyhow!("--cosets wants two indices like 0,1"))?;
            let pair = (a.trim().parse::<u8>()?, b.trim().parse::<u8>()?);
            ConstructionRecipe::TwoCoset(build_two_coset(&g, &f, pair).map_err(|e| anyhow!("{e}"))?)
        }
        KindArg::X22 => {
            let n = n.ok_or_else(|| anyhow!("--kind x22 needs --n"))?;
            ConstructionRecipe::X22(build_x22(n).map_err(|e| anyhow!("{e}"))?)
        }
        KindArg::Mod3Odd | KindArg::Mod3Even => {
            let g = parse_group(group.ok_or_else(|| anyhow!("mod3 constructions need --group"))?)?;
            let d = g1_order.ok_or_else(|| anyhow!("mod3 constructions need --g1-order"))?;
            let parity = if matches!(kind, KindArg::Mod3Odd) {
                Parity::Odd
            } else {
                Parity::Even
            };
            ConstructionRecipe::Mod3(build_mod3(&g, d, parity).map_err(|e| anyhow!("{e}"))?)
        }
    };
    let set = recipe.output().clone();
    let extra: Value = match &recipe {
        ConstructionRecipe::Decomp { .. } => json!({}),
        ConstructionRecipe::TwoCoset(c) => {
            json!({"cosets": [c.cosets.0, c.cosets.1], "direction": c.direction.to_string()})
        }
        ConstructionRecipe::X22(c) => json!({
            "direction": c.direction.to_string(),
            "missing": c.missing.to_string(),
            "s_set": set_literal(&c.s_set),
        }),
        ConstructionRecipe::Mod3(c) => json!({
            "direction": c.direction.to_string(),
            "missing": c.missing.to_string(),
            "summand_order": c.summand_order,
            "even_shift": c.even_shift.as_ref().map(|g| g.to_string()),
        }),
    };
    let report: Option<VerifyReport> = if verify {
        let engine = SetEngine::new(set.group().clone()).map_err(|e| anyhow!("{e}"))?;
        Some(recipe.verify(&engine).map_err(|e| anyhow!("{e}"))?)
    } else {
        None
    };
    let all_pass = report.as_ref().map(|r| r.all_pass());
    let mut payload = json!({
        "kind": format!("{kind:?}").to_lowercase(),
        "group": group_literal(set.group()),
        "size": set.len(),
        "set": set_literal(&set),
        "hex": set_hex_literal(&set),
    });
    for (k, v) in extra.as_object().unwrap() {
        payload[k] = v.clone();
    }
    if let Some(r) = &report {
        payload["verify"] = serde_json::to_value(verify_json(r))?;
        payload["all_pass"] = json!(all_pass.unwrap());
    }
    let verdict = match all_pass {
        Some(false) => Verdict::Counterexample,
        _ => Verdict::Ok,
    };
    let summary = match all_pass {
        Some(true) => format!("built |A| = {}; all claimed properties verified", set.len()),
        Some(false) => format!("built |A| = {}; VERIFICATION FAILED", set.len()),
        None => format!("built |A| = {}", set.len()),
    };
    Ok(CommandResult {
        verdict,
        payload,
        summary,
        raw: None,
    })
}

fn run_spectral(set: &str, group: Option<&str>) -> Result<CommandResult> {
    let group_spec = group.map(parse_group).transpose()?;
    let a = parse_set(set, group_spec.as_ref())?;
    let g = a.group().clone();
    let engine = SetEngine::new(g.clone()).map_err(|e| anyhow!("{e}"))?;
    let alpha = a.len() as f64 / g.order() as f64;
    let cs = cubic_sum(&a).map_err(|e| anyhow!("{e}"))?;
    let pv = parseval_offprincipal(&a).map_err(|e| anyhow!("{e}"))?;
    let witness = match find_witness(&engine, &a) {
        Ok(w) => {
            let densities: Vec<String> = w
                .profile
                .densities
                .iter()
                .map(|d| format!("{}/{}", d.numer(), d.denom()))
                .collect();
            json!({
                "character": w.character.coeffs(),
                "zeta": match w.zeta { CubeRoot::One => "1", _ => "omega" },
                "coefficient": {"re": w.coefficient.re, "im": w.coefficient.im},
                "re_z": w.re_z,
                "floor": sumsetlab_core::spectral::witness_floor(alpha),
                "profile": {
                    "subgroup_order": w.profile.subgroup.order(),
                    "direction": w.profile.direction.to_string(),
                    "counts": w.profile.counts,
                    "densities": densities,
                },
            })
        }
        Err(e) => json!({"unavailable": format!("{e}")}),
    };
    Ok(CommandResult {
        verdict: Verdict::Ok,
        payload: json!({
            "group": group_literal(&g),
            "set": set_literal(&a),
            "alpha": alpha,
            "cubic_sum": {"re": cs.re, "im": cs.im},
            "parseval": pv,
            "witness": witness,
        }),
        summary: format!("alpha = {alpha:.4}, cubic |sum| = {:.3e}, parseval = {pv:.6}", cs.norm()),
        raw: None,
    })
}

fn certificate_json(c: &LpCertificate) -> Value {
    let argmin: Vec<String> = c
        .argmin
        .iter()
        .map(|x| format!("{}/{}", x.numer(), x.denom()))
        .collect();
    json!({
        "case": c.instance.case.label(),
        "k": c.instance.relaxed,
        "coefficients": c.coefficient_strings(),
        "minimum": c.minimum,
        "error_bound": c.error_bound,
        "argmin": argmin,
        "margin": c.margin,
        "method_agreement": c.method_agreement,
        "verdict": "ok",
    })
}

fn run_lp_cert() -> Result<CommandResult> {
    let certs = certify_all().map_err(|e| anyhow!("{e}"))?;
    let global_min = certs
        .iter()
        .map(|c| c.minimum)
        .fold(f64::INFINITY, f64::min);
    let min_margin = certs.iter().map(|c| c.margin).fold(f64::INFINITY, f64::min);
    let payload = json!({
        "threshold": "-9/14",
        "threshold_value": sumsetlab_core::lp::threshold().to_f64().unwrap(),
        "global_minimum": global_min,
        "min_margin": min_margin,
        "certificates": certs.iter().map(certificate_json).collect::<Vec<_>>(),
    });
    Ok(CommandResult {
        verdict: Verdict::Ok,
        payload,
        summary: format!(
            "10 certificates, global minimum {global_min:.6} > -9/14, min margin {min_margin:.6}"
        ),
        raw: None,
    })
}

fn violations_json(violations: &[ViolationReport]) -> Vec<Value> {
    violations
        .iter()
        .map(|v| {
            json!({
                "property": v.property,
                "observed": v.observed,
                "sets": v.sets.iter().map(set_hex_literal).collect::<Vec<_>>(),
            })
        })
        .collect()
}

fn run_harness(suite: SuiteArg, group: &str, trials: u64, seed: u64) -> Result<CommandResult> {
    let g = parse_group(group)?;
    let (violations, extra): (Vec<ViolationReport>, Value) = match suite {
        SuiteArg::Kneser => {
            let cfg = TrialConfig::new(g.clone(), Sampler::UniformSize, trials, seed);
            (check_kneser_suite(&cfg).map_err(|e| anyhow!("{e}"))?, json!({}))
        }
        SuiteArg::Props => {
            let mut v = check_doubling_density(&TrialConfig::new(
                g.clone(),
                Sampler::UniformSize,
                trials,
                seed,
            ))
            .map_err(|e| anyhow!("{e}"))?;
            v.extend(
                check_propositions(&TrialConfig::new(
                    g.clone(),
                    Sampler::ConstructionPerturbation,
                    trials,
                    seed ^ 0x9e3779b97f4a7c15,
                ))
                .map_err(|e| anyhow!("{e}"))?,
            );
            (v, json!({}))
        }
        SuiteArg::Stability => {
            if !g.is_elementary(5) {
                bail!("the stability suite needs a group of exponent 5");
            }
            if g.rank() == 2 {
                let report = verify_stability_exhaustive().map_err(|e| anyhow!("{e}"))?;
                let mut violations = Vec::new();
                let stats: Vec<Value> = report
                    .per_size
                    .iter()
                    .map(|s| {
                        violations.extend(s.violations.clone());
                        json!({
                            "size": s.size,
                            "scanned": s.scanned,
                            "survivors": s.survivors,
                            "covered": s.covered,
                        })
                    })
                    .collect();
                (violations, json!({"mode": "exhaustive", "per_size": stats}))
            } else {
                let v = falsify_stability_stochastic(g.rank(), trials, seed)
                    .map_err(|e| anyhow!("{e}"))?;
                (v, json!({"mode": "stochastic", "restarts": trials}))
            }
        }
    };
    let verdict = if violations.is_empty() {
        Verdict::Ok
    } else {
        Verdict::Counterexample
    };
    let mut payload = json!({
        "suite": format!("{suite:?}").to_lowercase(),
        "group": group_literal(&g),
        "trials": trials,
        "seed": seed,
        "violations": violations_json(&violations),
    });
    for (k, v) in extra.as_object().unwrap() {
        payload[k] = v.clone();
    }
    Ok(CommandResult {
        verdict,
        summary: format!(
            "suite {:?}: {} violation(s)",
            suite,
            violations.len()
        ),
        payload,
        raw: None,
    })
}

fn run_table(groups: &str, kmax: u32, budget: u64, csv: bool) -> Result<CommandResult> {
    let specs: Vec<GroupSpec> = groups
        .split(';')
        .map(|s| parse_group(s.trim()))
        .collect::<Result<_>>()?;
    let mut rows = Vec::new();
    let mut all_agree = true;
    for g in &specs {
        for k in 1..=kmax {
            let known = known_value(g, k);
            let feasible = sumsetlab_core::search::binom(
                g.order(),
                sumsetlab_core::search::nk_upper_bound(g.order(), k) as u64,
            ) <= budget;
            let search = if feasible {
                nk_search(g, k, budget).ok().map(|r| r.value)
            } else {
                None
            };
            let agree = match (&known, &search) {
                (Some(kv), Some(s)) => Some(kv.value == *s),
                _ => None,
            };
            if agree == Some(false) {
                all_agree = false;
            }
            rows.push(json!({
                "group": group_literal(g),
                "k": k,
                "known": known.map(|kv| kv.value),
                "source": known.map(|kv| source_label(kv.source)),
                "search": search,
                "agree": agree,
            }));
        }
    }
    let verdict = if all_agree { Verdict::Ok } else { Verdict::Counterexample };
    let raw = if csv {
        let mut text = String::from("group,k,known,source,search,agree\n");
        for r in &rows {
            text.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r["group"].as_str().unwrap(),
                r["k"],
                r["known"].as_u64().map(|v| v.to_string()).unwrap_or_default(),
                r["source"].as_str().unwrap_or(""),
                r["search"].as_u64().map(|v| v.to_string()).unwrap_or_default(),
                r["agree"].as_bool().map(|v| v.to_string()).unwrap_or_default(),
            ));
        }
        Some(text)
    } else {
        None
    };
    Ok(CommandResult {
        verdict,
        summary: format!("{} rows, all agree: {all_agree}", rows.len()),
        payload: json!({"rows": rows}),
        raw,
    })
}

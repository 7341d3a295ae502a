//! Command-line front end: `policy-forest <command> [flags]`.
//!
//! Exit codes: 0 on success, 1 on data or experiment errors, 2 on bad
//! flags. Output files go under `--out`; a readable summary goes to
//! standard output.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::dataset::schema::{self, PolicyArea, PolicyDomain};
use crate::dataset::summary::domain_counts_with_cutoff;
use crate::dataset::{load_cases_from_path, net_iga_mismatches, FeatureSetId, FeatureSetSpec, NameMapping, PolicyCase};
use crate::error::{Error, Result};
use crate::experiments::report::{self, Provenance};
use crate::experiments::{
    build_set_c, compare_selectors, gain_per_ig, nonlinearity_case_study, rank_igs_by_domain, run_feature_set_eval,
    ExperimentConfig, FeatureSetChoice, ModelKind, Regime, Settings, DEFAULT_MIN_TEST_CASES, DEFAULT_PIVOT,
    DEFAULT_RANKING_SPLITS, DEFAULT_SET_C_SIZE,
};
use crate::forest::Execution;

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "POLICY_FOREST_OUT";

#[derive(Debug, Parser)]
#[command(name = "policy-forest", version, about = "Predict policy outcomes with random forests and logistic regression")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Global {
    /// Case file in the canonical CSV schema.
    #[arg(long, global = true)]
    data: Option<PathBuf>,
    /// Column/label renames, one `source=canonical` per line.
    #[arg(long, global = true)]
    mapping: Option<PathBuf>,
    /// JSON experiment configuration; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory (default: $POLICY_FOREST_OUT, else no files).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Write only this format (default: both).
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Trees per forest.
    #[arg(long, global = true)]
    trees: Option<usize>,
    /// Run everything on one thread. Results are identical.
    #[arg(long, global = true)]
    serial: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SetArg {
    A,
    B,
    C,
    D,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RegimeArg {
    #[value(alias = "random_draw", alias = "random-draw")]
    Random,
    Retrodiction,
}

impl From<RegimeArg> for Regime {
    fn from(r: RegimeArg) -> Self {
        match r {
            RegimeArg::Random => Regime::RandomDraw,
            RegimeArg::Retrodiction => Regime::Retrodiction,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModelArg {
    Forest,
    Logistic,
}

impl From<ModelArg> for ModelKind {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Forest => ModelKind::Forest,
            ModelArg::Logistic => ModelKind::Logistic,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the canonical CSV header and the policy-area table.
    Schema,
    /// Load a case file and report problems.
    Validate {
        /// Tolerance for comparing a stored net_iga column with the derived value.
        #[arg(long, default_value_t = 1e-6)]
        tolerance: f64,
    },
    /// Outcome counts per policy domain, overall and from the cutoff year.
    Summarize {
        #[arg(long)]
        cutoff: Option<i32>,
    },
    /// Evaluate feature sets over repeated splits.
    Eval {
        /// Feature set; repeat for several.
        #[arg(long = "set", value_enum, ignore_case = true)]
        sets: Vec<SetArg>,
        #[arg(long, value_enum)]
        regime: Option<RegimeArg>,
        #[arg(long, value_enum)]
        model: Option<ModelArg>,
        #[arg(long)]
        runs: Option<usize>,
        /// Interest groups kept in set C.
        #[arg(long, default_value_t = DEFAULT_SET_C_SIZE)]
        k: usize,
    },
    /// Rank P90 and interest groups by forest importance within domains.
    Rank {
        /// Domain label; omit for all domains.
        #[arg(long)]
        domain: Option<String>,
        #[arg(long, default_value_t = DEFAULT_RANKING_SPLITS)]
        splits: usize,
    },
    /// Choose the reduced interest-group subset.
    SetC {
        #[arg(long, default_value_t = DEFAULT_SET_C_SIZE)]
        k: usize,
        #[arg(long, default_value_t = DEFAULT_RANKING_SPLITS)]
        splits: usize,
    },
    /// Per-group accuracy gain of set B over set A.
    Gains {
        #[arg(long, default_value_t = 25)]
        runs: usize,
        #[arg(long, default_value_t = DEFAULT_MIN_TEST_CASES)]
        min_test_cases: usize,
    },
    /// Forest-chosen versus logistic-chosen interest groups.
    CompareSelectors {
        #[arg(long, default_value_t = DEFAULT_SET_C_SIZE)]
        k: usize,
        #[arg(long, default_value_t = DEFAULT_RANKING_SPLITS)]
        splits: usize,
        /// Regime; omit for both.
        #[arg(long, value_enum)]
        regime: Option<RegimeArg>,
    },
    /// Forest versus logistic on P90 and one pivot group within a domain.
    CaseStudy {
        #[arg(long, default_value = DEFAULT_PIVOT)]
        pivot: String,
        #[arg(long, default_value = "Foreign")]
        domain: String,
    },
}

/// Runs the command line in `argv` (including the program name), writing
/// the summary to stdout and diagnostics to stderr.
pub fn run(argv: &[String]) -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// [`run`] with explicit output streams.
pub fn run_with(argv: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match execute(cli, argv, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

struct Context {
    config: ExperimentConfig,
    settings: Settings,
    seed: u64,
    out_dir: Option<PathBuf>,
    format: Option<Format>,
    argv: Vec<String>,
}

impl Context {
    fn new(global: &Global, argv: &[String]) -> Result<Context> {
        let mut config = match &global.config {
            Some(path) => ExperimentConfig::from_path(path).map_err(|e| with_path(path, e))?,
            None => ExperimentConfig::default(),
        };
        if let Some(p) = &global.data {
            config.dataset = Some(p.clone());
        }
        if let Some(p) = &global.mapping {
            config.mapping = Some(p.clone());
        }
        if let Some(seed) = global.seed {
            config.base_seed = seed;
        }
        if let Some(trees) = global.trees {
            config.forest.n_trees = trees;
        }
        let mut settings = config.settings();
        settings.execution = if global.serial { Execution::Serial } else { Execution::Parallel };
        let out_dir = global
            .out
            .clone()
            .or_else(|| config.output_dir.clone())
            .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from));
        Ok(Context {
            seed: config.base_seed,
            config,
            settings,
            out_dir,
            format: global.format,
            argv: provenance_argv(argv),
        })
    }

    fn cases(&self) -> Result<Vec<PolicyCase>> {
        let path = self
            .config
            .dataset
            .as_ref()
            .ok_or_else(|| Error::InvalidArgument("no dataset: pass --data or set `dataset` in --config".into()))?;
        let mapping = match &self.config.mapping {
            Some(p) => Some(NameMapping::from_path(p).map_err(|e| with_path(p, e))?),
            None => None,
        };
        load_cases_from_path(path, mapping.as_ref()).map_err(|e| with_path(path, e))
    }

    fn provenance(&self, seeded: bool) -> Provenance {
        Provenance::new(&self.argv, seeded.then_some(self.seed))
    }

    /// Writes `<stem>.json` and/or `<stem>.csv` when an output directory is
    /// set, and lists them on `out`.
    fn emit<T: serde::Serialize>(
        &self,
        out: &mut dyn Write,
        stem: &str,
        seeded: bool,
        value: &T,
        csv: impl FnOnce(&mut Vec<u8>, &Provenance) -> Result<()>,
    ) -> Result<()> {
        let Some(dir) = &self.out_dir else { return Ok(()) };
        let provenance = self.provenance(seeded);
        if self.format != Some(Format::Csv) {
            let path = dir.join(format!("{stem}.json"));
            report::write_file(&path, |buf| report::write_json(buf, &provenance, value))?;
            writeln!(out, "wrote {}", path.display())?;
        }
        if self.format != Some(Format::Json) {
            let path = dir.join(format!("{stem}.csv"));
            report::write_file(&path, |buf| csv(buf, &provenance))?;
            writeln!(out, "wrote {}", path.display())?;
        }
        Ok(())
    }
}

/// `argv` without the flags that cannot change results (output location,
/// threading), so reruns elsewhere or on one thread produce identical files.
fn provenance_argv(argv: &[String]) -> Vec<String> {
    let mut kept = Vec::with_capacity(argv.len());
    let mut args = argv.iter();
    while let Some(arg) = args.next() {
        if arg == "--out" {
            args.next();
        } else if arg != "--serial" && !arg.starts_with("--out=") {
            kept.push(arg.clone());
        }
    }
    kept
}

fn with_path(path: &Path, e: Error) -> Error {
    match e {
        Error::Io(io) => Error::Io(std::io::Error::new(io.kind(), format!("{}: {io}", path.display()))),
        other => Error::InvalidArgument(format!("{}: {other}", path.display())),
    }
}

fn parse_domain(s: &str) -> Result<PolicyDomain> {
    s.replace(['_', '-'], " ").parse()
}

fn slug(label: &str) -> String {
    label.to_ascii_lowercase().replace(' ', "_")
}

fn pct(value: f64) -> String {
    format!("{:.1}", value * 100.0)
}

fn execute(cli: Cli, argv: &[String], out: &mut dyn Write) -> Result<()> {
    let ctx = Context::new(&cli.global, argv)?;
    match cli.command {
        Command::Schema => {
            writeln!(out, "{}", schema::canonical_header().join(","))?;
            writeln!(out)?;
            writeln!(out, "{:<28} domain", "policy_area")?;
            for area in PolicyArea::ALL {
                writeln!(out, "{:<28} {}", area.label(), area.domain().label())?;
            }
            writeln!(out)?;
            writeln!(out, "{} interest groups, alignments in -2..=2", schema::IG_COUNT)?;
        }
        Command::Validate { tolerance } => {
            let cases = ctx.cases()?;
            let missing = cases.iter().filter(|c| c.p90.is_none()).count();
            writeln!(out, "{} cases loaded, {} without p90", cases.len(), missing)?;
            let mismatches = net_iga_mismatches(&cases, tolerance);
            for m in &mismatches {
                writeln!(out, "net_iga mismatch: {m:?}")?;
            }
            if !mismatches.is_empty() {
                return Err(Error::InvalidArgument(format!("{} stored net_iga value(s) disagree", mismatches.len())));
            }
            writeln!(out, "ok")?;
        }
        Command::Summarize { cutoff } => {
            let cases = ctx.cases()?;
            let cutoff = cutoff.unwrap_or(ctx.settings.cutoff_year);
            let counts = domain_counts_with_cutoff(&cases, cutoff);
            writeln!(out, "{:<16} {:>9} {:>9}   {:>9} {:>9}", "domain", "passed", "failed", "passed", "failed")?;
            writeln!(out, "{:<16} {:>19}   {:>19}", "", "all years", format!("from {cutoff}"))?;
            for row in &counts.rows {
                writeln!(
                    out,
                    "{:<16} {:>9} {:>9}   {:>9} {:>9}",
                    row.domain, row.full.positive, row.full.negative, row.post_cutoff.positive, row.post_cutoff.negative
                )?;
            }
            ctx.emit(out, "domain_counts", false, &counts, |w, p| report::domain_counts_csv(w, p, &counts))?;
        }
        Command::Eval { sets, regime, model, runs, k } => {
            let cases = ctx.cases()?;
            let regime = regime.map(Regime::from).unwrap_or(ctx.config.regime);
            let model = model.map(ModelKind::from).unwrap_or(ctx.config.model);
            let n_runs = runs.unwrap_or_else(|| ctx.config.n_runs.unwrap_or_else(|| regime.default_runs()));
            let mut specs = Vec::new();
            let mut selection = None;
            let choices: Vec<FeatureSetChoice> = if sets.is_empty() {
                vec![ctx.config.feature_set.clone()]
            } else {
                sets.iter()
                    .map(|s| {
                        FeatureSetChoice::Id(match s {
                            SetArg::A => FeatureSetId::A,
                            SetArg::B => FeatureSetId::B,
                            SetArg::C => FeatureSetId::C,
                            SetArg::D => FeatureSetId::D,
                        })
                    })
                    .collect()
            };
            for choice in choices {
                match choice {
                    FeatureSetChoice::Spec(spec) => specs.push(spec),
                    FeatureSetChoice::Id(FeatureSetId::C) => {
                        let chosen = build_set_c(&cases, k, DEFAULT_RANKING_SPLITS, ctx.seed, &ctx.settings)?;
                        specs.push(chosen.spec.clone());
                        selection = Some(chosen);
                    }
                    FeatureSetChoice::Id(id) => specs.push(
                        FeatureSetSpec::by_id(id)
                            .ok_or_else(|| Error::InvalidArgument(format!("feature set `{id}` needs a full description")))?,
                    ),
                }
            }
            let mut reports = Vec::new();
            for spec in &specs {
                reports.push(run_feature_set_eval(&cases, spec, regime, model, n_runs, ctx.seed, &ctx.settings)?);
            }
            writeln!(out, "{:<8} {:<14} {:<9} {:>5}  {:>14}  {:>14}", "set", "regime", "model", "runs", "bal. acc.", "AUC")?;
            for r in &reports {
                writeln!(
                    out,
                    "{:<8} {:<14} {:<9} {:>5}  {:>14}  {:>14}",
                    r.feature_set_id.to_string(),
                    r.regime.label(),
                    r.model_kind.label(),
                    r.runs.len(),
                    r.balanced_accuracy.display_scaled(100.0, 1),
                    r.auc.display_scaled(100.0, 1)
                )?;
            }
            if let Some(sel) = &selection {
                writeln!(out, "set C interest groups: {}", sel.spec.ig_subset.join(", "))?;
                ctx.emit(out, "set_c", true, sel, |w, p| report::set_c_csv(w, p, sel))?;
            }
            ctx.emit(out, "eval", true, &reports, |w, p| report::eval_summary_csv(w, p, &reports))?;
        }
        Command::Rank { domain, splits } => {
            let cases = ctx.cases()?;
            let domains = match domain {
                Some(d) => vec![parse_domain(&d)?],
                None => PolicyDomain::ALL.to_vec(),
            };
            for domain in domains {
                let ranking = rank_igs_by_domain(&cases, domain, splits, ctx.seed, &ctx.settings)?;
                writeln!(out, "{} ({} cases, {} splits)", domain.label(), ranking.n_cases, ranking.n_splits)?;
                writeln!(out, "  {:<4} {:<40} {:>12} {:>14} {:>12}", "rank", "feature", "rf score", "corr", "at-bats")?;
                for (i, row) in ranking.rows.iter().enumerate().filter(|(_, r)| r.rf_score.mean > 0.0) {
                    writeln!(
                        out,
                        "  {:<4} {:<40} {:>12} {:>14} {:>12}",
                        i + 1,
                        row.display_name,
                        row.rf_score.display_scaled(100.0, 0),
                        row.correlation.map(|c| c.display_scaled(100.0, 0)).unwrap_or_else(|| "-".into()),
                        row.at_bats.display_scaled(1.0, 0)
                    )?;
                }
                let stem = format!("ranking_{}", slug(domain.label()));
                ctx.emit(out, &stem, true, &ranking, |w, p| report::ranking_csv(w, p, &ranking))?;
            }
        }
        Command::SetC { k, splits } => {
            let cases = ctx.cases()?;
            let selection = build_set_c(&cases, k, splits, ctx.seed, &ctx.settings)?;
            for (i, (ig, score)) in selection.ranked_igs.iter().enumerate().take(k) {
                writeln!(out, "{:>3}  {:<40} {:>7.2}", i + 1, ig, score * 100.0)?;
            }
            ctx.emit(out, "set_c", true, &selection, |w, p| report::set_c_csv(w, p, &selection))?;
        }
        Command::Gains { runs, min_test_cases } => {
            let cases = ctx.cases()?;
            let gains = gain_per_ig(
                &cases,
                &FeatureSetSpec::set_b(),
                &FeatureSetSpec::set_a(),
                runs,
                ctx.seed,
                min_test_cases,
                &ctx.settings,
            )?;
            for row in &gains.rows {
                writeln!(out, "{:<40} {:>14}  n = {}", row.display_name, row.gain.display_scaled(100.0, 1), row.test_cases.display_scaled(1.0, 0))?;
            }
            writeln!(out, "{} group(s) below {min_test_cases} test cases in some run", gains.omitted.len())?;
            ctx.emit(out, "gains", true, &gains, |w, p| report::gains_csv(w, p, &gains))?;
        }
        Command::CompareSelectors { k, splits, regime } => {
            let cases = ctx.cases()?;
            let regimes = match regime {
                Some(r) => vec![Regime::from(r)],
                None => vec![Regime::RandomDraw, Regime::Retrodiction],
            };
            let cmp = compare_selectors(&cases, k, &regimes, splits, ctx.seed, &ctx.settings)?;
            writeln!(out, "{:<14} {:<9} {:<14} {:>14}  {:>14}", "regime", "model", "selector", "bal. acc.", "AUC")?;
            for c in &cmp.cells {
                writeln!(
                    out,
                    "{:<14} {:<9} {:<14} {:>14}  {:>14}",
                    c.regime.label(),
                    c.model.label(),
                    c.selector.label(),
                    c.balanced_accuracy.display_scaled(100.0, 1),
                    c.auc.display_scaled(100.0, 1)
                )?;
            }
            for g in &cmp.gains {
                writeln!(
                    out,
                    "{:<14} {:<9} {:<14} {:>14}  {:>14}",
                    g.regime.label(),
                    g.model.label(),
                    "gain",
                    g.balanced_accuracy.display_scaled(100.0, 1),
                    g.auc.display_scaled(100.0, 1)
                )?;
            }
            ctx.emit(out, "selectors", true, &cmp, |w, p| report::selectors_csv(w, p, &cmp))?;
        }
        Command::CaseStudy { pivot, domain } => {
            let cases = ctx.cases()?;
            let domain = parse_domain(&domain)?;
            let study = nonlinearity_case_study(&cases, &pivot, domain, ctx.seed, &ctx.settings)?;
            writeln!(out, "{} cases in {} with a non-neutral `{}`", study.n_cases, domain.label(), study.pivot)?;
            for r in &study.regions {
                writeln!(out, "  {:<28} {:>4} passed {:>4} failed", r.region.label(), r.outcomes.positive, r.outcomes.negative)?;
            }
            writeln!(out, "forest balanced accuracy   {}", pct(study.forest_balanced_accuracy))?;
            writeln!(out, "logistic balanced accuracy {}", pct(study.logistic_balanced_accuracy))?;
            ctx.emit(out, "case_study", true, &study, |w, p| report::case_study_csv(w, p, &study))?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let argv: Vec<String> = std::iter::once("policy-forest").chain(args.iter().copied()).map(String::from).collect();
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run_with(&argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn schema_prints_the_header() {
        let (code, out, _) = call(&["schema"]);
        assert_eq!(code, 0);
        let header = out.lines().next().unwrap();
        assert_eq!(header.split(',').count(), 6 + schema::IG_COUNT + 2);
        for area in PolicyArea::ALL {
            assert!(out.contains(area.label()));
        }
    }

    #[test]
    fn bad_flags_exit_2() {
        let (code, _, err) = call(&["eval", "--set", "Q"]);
        assert_eq!(code, 2);
        assert!(!err.is_empty());
        assert_eq!(call(&["frobnicate"]).0, 2);
        assert_eq!(call(&["--help"]).0, 0);
    }

    #[test]
    fn missing_data_exits_1() {
        let (code, _, err) = call(&["summarize", "--data", "/nonexistent/cases.csv"]);
        assert_eq!(code, 1);
        assert!(err.contains("/nonexistent/cases.csv"));
        assert_eq!(call(&["summarize"]).0, 1);
    }

    #[test]
    fn provenance_ignores_output_and_threading_flags() {
        let argv: Vec<String> = ["p", "eval", "--out", "/a", "--serial", "--seed", "3", "--out=/b"].map(String::from).to_vec();
        assert_eq!(provenance_argv(&argv), vec!["p", "eval", "--seed", "3"]);
    }

    #[test]
    fn domain_names_are_forgiving() {
        assert_eq!(parse_domain("social_welfare").unwrap(), PolicyDomain::SocialWelfare);
        assert_eq!(parse_domain("Social-Welfare").unwrap(), PolicyDomain::SocialWelfare);
        assert!(parse_domain("Space").is_err());
    }
}

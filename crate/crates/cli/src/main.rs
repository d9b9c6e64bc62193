use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use branchstat::catalan::{self, CheckOutcome, CheckStatus, Counterexample, Triangle};
use branchstat::charpoly::{self, IntPolynomial};
use branchstat::dyck::{self, PathStatistic};
use branchstat::enumerate::{self, DistributionJson, Statistic};
use branchstat::setsys::{parse_set_spec, OffsetSet};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde::Serialize;
use serde_json::{json, Value};

#[derive(Parser)]
#[command(
    name = "branchstat",
    version,
    about = "Exact computations on labeled trees for braid-arrangement deformations"
)]
struct Cli {
    /// Worker threads for parallel enumeration; output does not depend on it.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report whether S is transitive, and its m.
    CheckTransitive(SetArg),
    /// Characteristic polynomial of A_S(n).
    Chi {
        #[command(flatten)]
        set: SetArg,
        #[arg(short, long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Method::Ff)]
        method: Method,
    },
    /// Check branch counts against the characteristic polynomial, plus the
    /// coefficient inequalities, for every n up to n-max.
    Verify {
        #[command(flatten)]
        set: SetArg,
        #[arg(short = 'n', long = "n-max")]
        n_max: usize,
    },
    /// List, count or tabulate the trees T_S(n).
    Trees {
        #[command(flatten)]
        set: SetArg,
        #[arg(short, long)]
        n: usize,
        /// Print only the number of trees.
        #[arg(long, conflicts_with = "stat")]
        count: bool,
        /// Print the distribution of a statistic instead of the trees.
        #[arg(long, value_enum)]
        stat: Option<TreeStat>,
    },
    /// Coefficient triangle C(S, n, j) for n up to n-max.
    Triangle {
        #[command(flatten)]
        set: SetArg,
        #[arg(short = 'n', long = "n-max")]
        n_max: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Count trees even when a closed formula applies.
        #[arg(long)]
        enumerate: bool,
        /// Compare against the vendored m = 1 fixture (OEIS A038455).
        #[arg(long)]
        check_fixture: bool,
        /// Rewrite a fixture file from brute-force enumeration.
        #[arg(long, value_name = "PATH")]
        unsafe_regen: Option<PathBuf>,
    },
    /// Statistic distribution over labeled m-Dyck paths on [n].
    Dyck {
        #[arg(short)]
        m: usize,
        #[arg(short)]
        n: usize,
        #[arg(long, value_enum, default_value_t = DyckStat::Compartments)]
        stat: DyckStat,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct SetArg {
    /// Offsets such as "-1,0,1", or a family such as "shi:2". Empty means S = {}.
    #[arg(long, allow_hyphen_values = true)]
    set: Option<String>,
    /// Named family: braid, catalan:M, shi:M, linial:M, semiorder:M.
    #[arg(long)]
    family: Option<String>,
}

impl SetArg {
    fn resolve(&self) -> Result<OffsetSet, Failure> {
        let spec = self
            .set
            .as_deref()
            .or(self.family.as_deref())
            .unwrap_or_default();
        parse_set_spec(spec).map_err(|e| Failure::Input(e.to_string()))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Ff,
    Esa,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum TreeStat {
    Branches,
    Compartments,
}

#[derive(Clone, Copy, ValueEnum)]
enum DyckStat {
    Compartments,
    RlMaxima,
}

enum Failure {
    Input(String),
    Internal(String),
}

#[derive(Serialize)]
struct RunReport {
    command: Value,
    status: CheckStatus,
    checks: Vec<CheckOutcome>,
    result: Value,
}

enum Output {
    Report(RunReport),
    Text(String, Vec<CheckOutcome>),
}

impl RunReport {
    fn new(command: Value, result: Value, checks: Vec<CheckOutcome>) -> Self {
        let status = if checks.iter().any(|c| c.status == CheckStatus::Fail) {
            CheckStatus::Fail
        } else {
            CheckStatus::Pass
        };
        RunReport {
            command,
            status,
            checks,
            result,
        }
    }
}

fn input<E: ToString>(e: E) -> Failure {
    Failure::Input(e.to_string())
}

fn internal<E: ToString>(e: E) -> Failure {
    Failure::Internal(e.to_string())
}

fn counts_json(row: &[BigUint]) -> Value {
    Value::Object(
        row.iter()
            .enumerate()
            .map(|(j, c)| ((j + 1).to_string(), Value::String(c.to_string())))
            .collect(),
    )
}

fn outcome(name: &str, cells: usize, failures: Vec<Counterexample>) -> CheckOutcome {
    CheckOutcome {
        name: name.to_string(),
        status: if failures.is_empty() {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        },
        cells_checked: cells,
        counterexamples: failures,
        note: None,
    }
}

fn skipped(name: &str, note: &str) -> CheckOutcome {
    CheckOutcome {
        name: name.to_string(),
        status: CheckStatus::Skipped,
        cells_checked: 0,
        counterexamples: Vec::new(),
        note: Some(note.to_string()),
    }
}

/// Compares two rows cell by cell, recording each mismatch.
fn compare_rows(
    n: usize,
    lhs: &[BigUint],
    rhs: &[BigUint],
    failures: &mut Vec<Counterexample>,
) -> usize {
    let width = lhs.len().max(rhs.len());
    for j in 0..width {
        let a = lhs.get(j).cloned().unwrap_or_default();
        let b = rhs.get(j).cloned().unwrap_or_default();
        if a != b {
            failures.push(Counterexample {
                n,
                j: j + 1,
                lhs: a.to_string(),
                rhs: b.to_string(),
                context: None,
            });
        }
    }
    width
}

fn cmd_check_transitive(set: &SetArg) -> Result<Output, Failure> {
    let s = set.resolve()?;
    let result = json!({ "S": s.elements(), "m": s.m(), "transitive": s.is_transitive() });
    Ok(Output::Report(RunReport::new(
        json!({ "name": "check-transitive", "S": s.elements() }),
        result,
        Vec::new(),
    )))
}

fn cmd_chi(set: &SetArg, n: usize, method: Method) -> Result<Output, Failure> {
    let s = set.resolve()?;
    let command = json!({
        "name": "chi",
        "S": s.elements(),
        "n": n,
        "method": match method { Method::Ff => "ff", Method::Esa => "esa", Method::Both => "both" },
    });
    if n == 0 || n > enumerate::MAX_NODES {
        return Err(input(format!(
            "n must be between 1 and {}",
            enumerate::MAX_NODES
        )));
    }
    let ff = match method {
        Method::Esa => None,
        _ => Some(charpoly::chi_ff(&s, n).map_err(internal)?),
    };
    let esa = match method {
        Method::Ff => None,
        _ => {
            if !s.is_transitive() {
                return Err(input(format!(
                    "the series method needs a transitive S; {s} is not"
                )));
            }
            let mut all = charpoly::chi_esa(&s, n).map_err(internal)?;
            Some(all.pop().expect("n >= 1"))
        }
    };
    let mut checks = Vec::new();
    if let (Some(a), Some(b)) = (&ff, &esa) {
        let mut failures = Vec::new();
        if a != b {
            failures.push(Counterexample {
                n,
                j: 0,
                lhs: a.to_string(),
                rhs: b.to_string(),
                context: Some("ff vs esa".to_string()),
            });
        }
        checks.push(outcome("ff-equals-esa", 1, failures));
    }
    let shown: &IntPolynomial = ff.as_ref().or(esa.as_ref()).expect("one method ran");
    let result = json!({
        "S": s.elements(),
        "n": n,
        "polynomial": shown.to_string(),
        "regions": charpoly::regions(shown).to_string(),
        "ff": ff.as_ref().map(|p| p.to_json()),
        "esa": esa.as_ref().map(|p| p.to_json()),
    });
    Ok(Output::Report(RunReport::new(command, result, checks)))
}

fn cmd_verify(set: &SetArg, n_max: usize) -> Result<Output, Failure> {
    let s = set.resolve()?;
    let command = json!({ "name": "verify", "S": s.elements(), "n_max": n_max });
    if n_max == 0 || n_max > enumerate::MAX_NODES {
        return Err(input(format!(
            "n-max must be between 1 and {}",
            enumerate::MAX_NODES
        )));
    }
    let mut checks = Vec::new();
    let mut rows = Vec::new();
    if !s.is_transitive() {
        let why = "S is not transitive";
        checks.push(skipped("branches-match-chi", why));
        checks.push(skipped("compartments-match-branches", why));
    } else {
        let mut failures = Vec::new();
        let mut cells = 0;
        let mut comp_failures = Vec::new();
        let mut comp_cells = 0;
        for n in 1..=n_max {
            let chi = charpoly::chi_ff(&s, n).map_err(internal)?;
            let coeffs = charpoly::abs_coeffs(&chi).map_err(internal)?;
            let branches = enumerate::branch_distribution(&s, n)
                .map_err(internal)?
                .row();
            cells += compare_rows(n, &branches, &coeffs[1..], &mut failures);
            if s.has_zero_and_symmetric_pair() {
                let comps = enumerate::compartment_distribution(&s, n)
                    .map_err(internal)?
                    .row();
                comp_cells += compare_rows(n, &comps, &branches, &mut comp_failures);
            }
            rows.push(json!({ "n": n, "chi": chi.to_string(), "counts": counts_json(&branches) }));
        }
        checks.push(outcome("branches-match-chi", cells, failures));
        if s.has_zero_and_symmetric_pair() {
            checks.push(outcome(
                "compartments-match-branches",
                comp_cells,
                comp_failures,
            ));
        } else {
            checks.push(skipped(
                "compartments-match-branches",
                "needs 0 in S and k, -k in S for some k >= 1",
            ));
        }
    }
    checks.extend(catalan::verify_inequalities(&s, n_max).map_err(internal)?);
    let result = json!({ "S": s.elements(), "transitive": s.is_transitive(), "rows": rows });
    Ok(Output::Report(RunReport::new(command, result, checks)))
}

fn cmd_trees(
    set: &SetArg,
    n: usize,
    count: bool,
    stat: Option<TreeStat>,
) -> Result<Output, Failure> {
    let s = set.resolve()?;
    let command = json!({
        "name": "trees",
        "S": s.elements(),
        "n": n,
        "count": count,
        "stat": stat.map(|st| tree_stat(st).name()),
    });
    if n > enumerate::MAX_NODES {
        return Err(input(format!("n must be at most {}", enumerate::MAX_NODES)));
    }
    let result = if count {
        let total = enumerate::count_trees(&s, n).map_err(input)?;
        json!({ "S": s.elements(), "n": n, "count": total.to_string() })
    } else if let Some(st) = stat {
        let st = tree_stat(st);
        let dist = match st {
            Statistic::Branches => enumerate::branch_distribution(&s, n),
            Statistic::Compartments => enumerate::compartment_distribution(&s, n),
        }
        .map_err(input)?;
        let wire: DistributionJson = dist.to_json(&s, st);
        serde_json::to_value(wire).map_err(internal)?
    } else {
        let trees = enumerate::enumerate_trees(&s, n).map_err(input)?;
        let listed: Vec<Value> = trees
            .iter()
            .map(|t| json!({ "tree": t.serialize(), "branches": enumerate::branch_count(t) }))
            .collect();
        json!({ "S": s.elements(), "n": n, "count": trees.len().to_string(), "trees": listed })
    };
    Ok(Output::Report(RunReport::new(command, result, Vec::new())))
}

fn tree_stat(st: TreeStat) -> Statistic {
    match st {
        TreeStat::Branches => Statistic::Branches,
        TreeStat::Compartments => Statistic::Compartments,
    }
}

fn cmd_triangle(
    set: &SetArg,
    n_max: usize,
    format: Format,
    force_enumerate: bool,
    check_fixture: bool,
    regen: Option<&PathBuf>,
) -> Result<Output, Failure> {
    let s = set.resolve()?;
    let command = json!({
        "name": "triangle",
        "S": s.elements(),
        "n_max": n_max,
        "format": match format { Format::Json => "json", Format::Csv => "csv" },
        "enumerate": force_enumerate,
        "check_fixture": check_fixture,
    });
    if !s.is_transitive() {
        return Err(input(format!(
            "{s} is not transitive, so C(S, n, j) is not defined by branches"
        )));
    }
    if n_max == 0 || n_max > enumerate::MAX_NODES {
        return Err(input(format!(
            "n-max must be between 1 and {}",
            enumerate::MAX_NODES
        )));
    }
    let formula = s
        .catalan_m()
        .filter(|_| !force_enumerate && regen.is_none());
    let triangle = match formula {
        Some(m) => Triangle::catalan(m, n_max),
        None => Triangle::from_branch_counts(&s, n_max),
    }
    .map_err(internal)?;

    if let Some(path) = regen {
        fs::write(path, triangle.to_csv())
            .map_err(|e| input(format!("{}: {e}", path.display())))?;
    }

    let mut checks = Vec::new();
    if check_fixture {
        if s.catalan_m() != Some(1) {
            return Err(input("the vendored fixture covers catalan:1 only"));
        }
        let fixture = Triangle::from_csv("catalan:1", catalan::A038455_CSV).map_err(internal)?;
        let mut failures = Vec::new();
        let mut cells = 0;
        for n in 1..=n_max.min(fixture.n_max()) {
            cells += compare_rows(
                n,
                &triangle.rows[n - 1],
                &fixture.rows[n - 1],
                &mut failures,
            );
        }
        checks.push(outcome("matches-fixture", cells, failures));
    }

    match format {
        Format::Csv => Ok(Output::Text(triangle.to_csv(), checks)),
        Format::Json => {
            let result = serde_json::to_value(triangle.to_json()).map_err(internal)?;
            Ok(Output::Report(RunReport::new(command, result, checks)))
        }
    }
}

fn cmd_dyck(m: usize, n: usize, stat: DyckStat) -> Result<Output, Failure> {
    let stat = match stat {
        DyckStat::Compartments => PathStatistic::Compartments,
        DyckStat::RlMaxima => PathStatistic::RlMaxima,
    };
    let command = json!({ "name": "dyck", "m": m, "n": n, "stat": stat.name() });
    if m == 0 || n == 0 || n > 12 {
        return Err(input("need m >= 1 and 1 <= n <= 12"));
    }
    let dist = dyck::path_distribution(m, n, stat);
    let row = dist.row();
    let mut failures = Vec::new();
    let expected = (1..=n)
        .map(|j| catalan::catalan_coeff_by_trunks(m, n, j))
        .collect::<Result<Vec<_>, _>>()
        .map_err(internal)?;
    let cells = compare_rows(n, &row, &expected, &mut failures);
    let checks = vec![outcome("matches-catalan-row", cells, failures)];
    let result = json!({
        "m": m,
        "n": n,
        "stat": stat.name(),
        "total": dist.total().to_string(),
        "counts": counts_json(&row),
    });
    Ok(Output::Report(RunReport::new(command, result, checks)))
}

fn run(cli: &Cli) -> Result<Output, Failure> {
    match &cli.command {
        Command::CheckTransitive(set) => cmd_check_transitive(set),
        Command::Chi { set, n, method } => cmd_chi(set, *n, *method),
        Command::Verify { set, n_max } => cmd_verify(set, *n_max),
        Command::Trees {
            set,
            n,
            count,
            stat,
        } => cmd_trees(set, *n, *count, *stat),
        Command::Triangle {
            set,
            n_max,
            format,
            enumerate,
            check_fixture,
            unsafe_regen,
        } => cmd_triangle(
            set,
            *n_max,
            *format,
            *enumerate,
            *check_fixture,
            unsafe_regen.as_ref(),
        ),
        Command::Dyck { m, n, stat } => cmd_dyck(*m, *n, *stat),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let start = Instant::now();
    let outcome = run(&cli);
    eprintln!("wall_time_ms: {}", start.elapsed().as_millis());
    match outcome {
        Ok(Output::Report(report)) => {
            let failed = report.status == CheckStatus::Fail;
            println!(
                "{}",
                serde_json::to_string_pretty(&report).expect("report serializes")
            );
            ExitCode::from(u8::from(failed))
        }
        Ok(Output::Text(text, checks)) => {
            print!("{text}");
            let failed: Vec<_> = checks
                .iter()
                .filter(|c| c.status == CheckStatus::Fail)
                .collect();
            for check in &failed {
                eprintln!(
                    "{}",
                    serde_json::to_string(check).expect("check serializes")
                );
            }
            ExitCode::from(u8::from(!failed.is_empty()))
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

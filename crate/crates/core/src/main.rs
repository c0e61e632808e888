use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use latdeg::closed_forms::{limit_diagnostics_with, sd_dihedral_2r, sd_e_p3, sd_schmidt_formula, QChoice};
use latdeg::degrees::{pair_census, sd_of_lattice, SdStarSolver};
use latdeg::lattice::{enumerate_subgroups, is_schmidt};
use latdeg::scan::ingest::resolve_group;
use latdeg::scan::{emit_report, scan, CatalogConfig, Family, ReportFormat};
use latdeg::schmidt::{
    construct_schmidt_minimal, lattice_decomposition_check, schmidt_census, structure_report, SchmidtSpec,
};
use latdeg::ExactRational;

/// `println!` that reports a closed stdout as an error instead of panicking.
macro_rules! out {
    ($($arg:tt)*) => {
        writeln!(io::stdout(), $($arg)*)?
    };
}

/// Exact subgroup commutativity degrees of finite groups.
///
/// A GROUP argument is a group file (JSON), `schmidt:<p>:<q>`, or a spec
/// such as `cyclic:12`, `dihedral:8`, `quaternion8`, `dicyclic:12`,
/// `elementary_abelian:2:3`, `extraspecial:3`, `symmetric:4`, `alternating:5`.
#[derive(Parser)]
#[command(name = "latdeg", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Subgroup commutativity degree sd(G).
    Sd {
        group: String,
        /// Emit the commuting-pair census as JSON.
        #[arg(long)]
        census: bool,
        #[arg(long)]
        json: bool,
    },
    /// Minimum of sd over all sections H/N, with a section attaining it.
    Sdstar {
        group: String,
        #[arg(long)]
        json: bool,
    },
    /// Closed-form values.
    Formulas(FormulaArgs),
    /// Build the minimal Schmidt group of order p^r q and check its structure.
    Schmidt {
        p: u64,
        q: u64,
        #[arg(long)]
        report: bool,
        #[arg(long)]
        census: bool,
        #[arg(long)]
        json: bool,
    },
    /// Scan a catalog of groups.
    Scan(ScanArgs),
    /// Dump the subgroup lattice as JSON: one array of element indices per subgroup.
    Lattice { group: String },
}

#[derive(Args)]
struct FormulaArgs {
    /// sd of the dihedral group of order 2r.
    #[arg(long, value_name = "R")]
    dihedral: Option<u64>,
    /// sd of the extraspecial group of order p^3 and exponent p.
    #[arg(long, value_name = "P")]
    ep3: Option<u64>,
    /// sd of the minimal Schmidt group of order p^r q.
    #[arg(long, num_args = 2, value_names = ["P", "Q"])]
    schmidt: Option<Vec<u64>>,
    /// Schmidt values along increasing primes p with ord_q(p) = R.
    #[arg(long, value_name = "R", requires = "count")]
    limits: Option<u32>,
    #[arg(long, value_name = "N")]
    count: Option<usize>,
    /// Largest prime p tried by --limits.
    #[arg(long, default_value_t = 1_000_000)]
    p_bound: u64,
    /// Require q to increase strictly along the table as well as p.
    #[arg(long, requires = "limits")]
    strict_q: bool,
    #[arg(long)]
    json: bool,
}

impl FormulaArgs {
    fn q_choice(&self) -> QChoice {
        if self.strict_q {
            QChoice::StrictlyIncreasing
        } else {
            QChoice::Smallest
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
    Text,
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long, default_value_t = 100)]
    max_order: usize,
    /// Comma-separated families (default: all).
    #[arg(long, value_delimiter = ',')]
    families: Vec<String>,
    /// Group file or directory of group files; repeatable.
    #[arg(long)]
    ingest: Vec<PathBuf>,
    /// Report destination (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Reuse cached records.
    #[arg(long)]
    resume: bool,
    /// Cache directory (default: $LATDEG_CACHE_DIR, else no cache).
    #[arg(long)]
    cache_dir: Option<PathBuf>,
}

fn print_json(v: &impl Serialize) -> anyhow::Result<()> {
    out!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

fn fraction_line(name: &str, v: &ExactRational) -> String {
    format!("{name} = {v} ≈ {}", v.decimal())
}

fn print_table(header: &[&str], rows: &[Vec<String>]) -> anyhow::Result<()> {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.chars().count());
        }
    }
    let fmt =
        |cells: Vec<String>| cells.iter().zip(&widths).map(|(c, &w)| format!("{c:>w$}")).collect::<Vec<_>>().join("  ");
    out!("{}", fmt(header.iter().map(|s| s.to_string()).collect()));
    for row in rows {
        out!("{}", fmt(row.clone()));
    }
    Ok(())
}

fn formulas(a: FormulaArgs) -> anyhow::Result<()> {
    let mut rows: Vec<Vec<String>> = Vec::new();
    let mut values = Vec::new();
    let mut push = |family: String, v: ExactRational| {
        values.push(json!({"family": family, "value": v, "decimal": v.decimal()}));
        rows.push(vec![family, v.to_string(), v.decimal()]);
    };
    if let Some(r) = a.dihedral {
        push(format!("dihedral 2r, r={r}"), sd_dihedral_2r(r)?);
    }
    if let Some(p) = a.ep3 {
        push(format!("extraspecial p^3, p={p}"), sd_e_p3(p)?);
    }
    let mut any = !rows.is_empty();
    if let Some(pq) = &a.schmidt {
        let rep = sd_schmidt_formula(pq[0], pq[1])?;
        any = true;
        if a.json {
            print_json(&rep)?;
        } else {
            print_table(
                &["p", "q", "r", "a_rp", "p^r", "sd", "decimal"],
                &[vec![
                    rep.p.to_string(),
                    rep.q.to_string(),
                    rep.r.to_string(),
                    rep.a_rp.to_string(),
                    rep.p_pow_r.to_string(),
                    rep.sd_value.to_string(),
                    rep.decimal,
                ]],
            )?;
        }
    }
    if let Some(r) = a.limits {
        let table = limit_diagnostics_with(r, a.count.unwrap_or(10), a.p_bound, a.q_choice())?;
        any = true;
        if a.json {
            print_json(&table)?;
        } else {
            let rows: Vec<Vec<String>> = table
                .rows
                .iter()
                .map(|row| vec![row.p.to_string(), row.q.to_string(), row.sd.to_string(), row.decimal.clone()])
                .collect();
            print_table(&["p", "q", "sd", "decimal"], &rows)?;
        }
    }
    if !any {
        bail!("nothing to evaluate: pass --dihedral, --ep3, --schmidt or --limits");
    }
    if !rows.is_empty() {
        if a.json {
            print_json(&values)?;
        } else {
            print_table(&["family", "sd", "decimal"], &rows)?;
        }
    }
    Ok(())
}

fn run_scan(a: ScanArgs) -> anyhow::Result<ExitCode> {
    let families = if a.families.is_empty() {
        Family::ALL.into_iter().collect()
    } else {
        a.families.iter().map(|f| f.parse()).collect::<Result<_, _>>()?
    };
    let config = CatalogConfig {
        max_order: a.max_order,
        families,
        ingest_paths: a.ingest,
        threads: a.threads,
        resume: a.resume,
        cache_dir: a.cache_dir,
    };
    let outcome = scan(&config)?;
    let format = match a.format {
        Format::Csv => ReportFormat::Csv,
        Format::Json => ReportFormat::Json,
        Format::Text => ReportFormat::Text,
    };
    match &a.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path).with_context(|| path.display().to_string())?);
            emit_report(&outcome.records, format, &mut w)?;
            w.flush()?;
        }
        None => emit_report(&outcome.records, format, &mut io::stdout().lock())?,
    }
    let s = &outcome.summary;
    eprintln!("groups scanned: {} ({} from cache)", s.groups, s.cache_hits);
    eprintln!("counterexamples: {}", s.counterexamples.len());
    eprintln!("nilpotent above 23/25 but not Iwasawa: {}", s.nilpotent_above_threshold_not_iwasawa.len());
    eprintln!("non-solvable above 23/25: {}", s.unsolvable_above_threshold.len());
    eprintln!("sd* = 23/25 exactly: {}", s.boundary_hits.join(", "));
    for q in &outcome.quarantine {
        eprintln!("quarantined {}: {}", q.label, q.error);
    }
    Ok(if s.counterexamples.is_empty() { ExitCode::SUCCESS } else { ExitCode::from(2) })
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Sd { group, census, json } => {
            let g = resolve_group(&group)?;
            let lat = enumerate_subgroups(&g)?;
            if census {
                let c = if is_schmidt(&lat) {
                    schmidt_census(&lat).unwrap_or_else(|_| pair_census(&lat, true))
                } else {
                    pair_census(&lat, true)
                };
                print_json(&json!({
                    "label": g.label(),
                    "subgroups": lat.len(),
                    "total_pairs": c.total_pairs,
                    "commuting_pairs": c.commuting_pairs,
                    "breakdown": c.breakdown,
                    "sd": c.sd(),
                }))?;
            } else {
                let v = sd_of_lattice(&lat);
                if json {
                    print_json(
                        &json!({"label": g.label(), "order": g.order(), "subgroups": lat.len(), "sd": v, "decimal": v.decimal()}),
                    )?;
                } else {
                    out!("{}", fraction_line(&format!("sd({})", g.label()), &v));
                }
            }
        }
        Command::Sdstar { group, json } => {
            let g = resolve_group(&group)?;
            let s = SdStarSolver::default().solve(&g)?;
            let (h, n) = (s.host.order(), s.kernel.order());
            if json {
                print_json(&json!({
                    "label": g.label(),
                    "sd_star": s.value,
                    "decimal": s.value.decimal(),
                    "host_order": h,
                    "kernel_order": n,
                    "host": s.host.elements(),
                    "kernel": s.kernel.elements(),
                }))?;
            } else {
                out!("{}", fraction_line(&format!("sd*({})", g.label()), &s.value));
                out!("attained by H/N with |H| = {h}, |N| = {n}");
            }
        }
        Command::Formulas(a) => formulas(a)?,
        Command::Schmidt { p, q, report, census, json } => {
            let spec = SchmidtSpec::new(p, q)?;
            let g = construct_schmidt_minimal(spec)?;
            let lat = enumerate_subgroups(&g)?;
            let verdict = lattice_decomposition_check(&lat)?;
            let sd = sd_of_lattice(&lat);
            let formula = sd_schmidt_formula(p, q)?;
            let rep = report.then(|| structure_report(&lat)).transpose()?;
            let cen = census.then(|| schmidt_census(&lat)).transpose()?;
            if json {
                print_json(&json!({
                    "spec": spec,
                    "order": g.order(),
                    "decomposition": verdict,
                    "sd": sd,
                    "formula": formula,
                    "structure": rep,
                    "census": cen,
                }))?;
            } else {
                out!("{}: order {}, r = {}", spec.label(), g.order(), spec.r);
                out!(
                    "subgroups: {} = a_rp + p^r + 1 = {}; {} Sylow {}-subgroups",
                    verdict.lattice_size,
                    verdict.expected_size,
                    verdict.sylow_q_conjugates,
                    q
                );
                out!("{}", fraction_line("sd (enumerated)", &sd));
                out!("{}", fraction_line("sd (closed form)", &formula.sd_value));
                if let Some(r) = rep {
                    out!("{}", serde_json::to_string_pretty(&r)?);
                }
                if let Some(c) = cen {
                    for (k, v) in c.breakdown.iter().flatten() {
                        out!("  {k:<24} {v}");
                    }
                    out!("  {:<24} {}", "total", c.commuting_pairs);
                }
            }
            if sd != formula.sd_value {
                bail!("enumerated sd {sd} differs from the closed form {}", formula.sd_value);
            }
        }
        Command::Scan(a) => return run_scan(a),
        Command::Lattice { group } => {
            let g = resolve_group(&group)?;
            let lat = enumerate_subgroups(&g)?;
            let subs: Vec<Vec<usize>> = lat.subgroups().iter().map(|s| s.elements()).collect();
            print_json(&subs)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) if broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn broken_pipe(e: &anyhow::Error) -> bool {
    e.chain().any(|c| c.downcast_ref::<io::Error>().is_some_and(|io| io.kind() == io::ErrorKind::BrokenPipe))
        || matches!(e.downcast_ref::<latdeg::Error>(), Some(latdeg::Error::Io(m)) if m.contains("Broken pipe"))
}

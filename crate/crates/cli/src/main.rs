use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use qtlab_core::grassmann::{self, AdmissibleBasis};
use qtlab_core::kacschwarz::{self, ModelInstance};
use qtlab_core::suite::{self, Job};
use qtlab_core::{boson, oracle, CheckReport, ModelId, WBounds};

#[derive(Parser, Debug)]
#[command(name = "qtlab", version, about = "Exact checks of Kac-Schwarz pairs and Hurwitz-type tau-functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Tsv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Kac-Schwarz suite: annihilation, ladder, recursion, commutator, optional W-constraints.
    Verify {
        /// One model; all catalogue models when omitted.
        #[arg(long)]
        model: Option<ModelId>,
        #[arg(long, default_value_t = 40, value_parser = clap::value_parser!(i64).range(1..))]
        order: i64,
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(i64).range(1..))]
        jmax: i64,
        #[arg(long, value_parser = clap::value_parser!(i64).range(0..))]
        kmax: Option<i64>,
        #[arg(long, value_parser = clap::value_parser!(i64).range(0..))]
        lmax: Option<i64>,
    },
    /// Tau-function coefficients in the Schur-expanded power sums.
    Tau {
        #[arg(long, default_value = "hurwitz")]
        model: ModelId,
        #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..))]
        dmax: u64,
    },
    /// Zero-time wave function from the tau-function.
    Wave {
        #[arg(long, default_value = "hurwitz")]
        model: ModelId,
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u64).range(1..))]
        order: u64,
    },
    /// Tau coefficients against symmetric-group enumeration.
    Oracle {
        #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..=6))]
        dmax: u64,
        #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u32).range(0..=8))]
        bmax: u32,
    },
    /// Boson-fermion correspondence and operator cross-checks.
    BfCheck {
        #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u64).range(1..))]
        dmax: u64,
    },
    /// Commutator theorems and the q-product identities.
    Identities {
        #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u64).range(1..))]
        xmax: u64,
        #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u64).range(1..))]
        qmax: u64,
    },
}

struct Output {
    text: String,
    ok: bool,
}

fn reports_output(reports: &[CheckReport], format: Format) -> Result<Output> {
    let text = match format {
        Format::Json => serde_json::to_string_pretty(reports)? + "\n",
        Format::Tsv => {
            let mut s = String::from("check\tmodel\tparams\tstatus\tresidual\n");
            for r in reports {
                let params: Vec<String> = r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
                let residual: Vec<String> =
                    r.residual.iter().map(|(k, v)| format!("{}={v}", serde_json::to_string(k).unwrap_or_default())).collect();
                s.push_str(&format!(
                    "{}\t{}\t{}\t{}\t{}\n",
                    r.check,
                    r.model,
                    params.join(";"),
                    if r.passed() { "pass" } else { "fail" },
                    residual.join(";")
                ));
            }
            s
        }
    };
    Ok(Output { text, ok: suite::all_pass(reports) })
}

fn verify(model: Option<ModelId>, order: i64, jmax: i64, kmax: Option<i64>, lmax: Option<i64>) -> Vec<CheckReport> {
    let models = model.map_or_else(ModelId::catalogue, |m| vec![m]);
    let bounds = match (kmax, lmax) {
        (None, None) => None,
        (k, l) => Some(WBounds { kmax: k.unwrap_or(0), lmax: l.unwrap_or(0), total: None, jmax: jmax.min(4) }),
    };
    suite::run_jobs(suite::verify_jobs(&models, order, jmax, bounds))
}

fn tau(model: ModelId, d_max: usize, format: Format) -> Result<Output> {
    let tau = match model {
        ModelId::Hurwitz => boson::hurwitz_tau(d_max),
        m => grassmann::tau_from_basis(&AdmissibleBasis::from_model(m, d_max, d_max as i64), d_max)?,
    };
    let text = match format {
        Format::Tsv => tau.to_tsv(),
        Format::Json => {
            let rows: Vec<_> = tau
                .to_tsv()
                .lines()
                .filter_map(|l| l.split_once('\t'))
                .map(|(p, c)| json!({"partition": p, "coefficient": c}))
                .collect();
            serde_json::to_string_pretty(&rows)? + "\n"
        }
    };
    Ok(Output { text, ok: true })
}

fn wave(model: ModelId, order: usize, format: Format) -> Result<Output> {
    let tau = match model {
        ModelId::Hurwitz => boson::hurwitz_tau(order),
        m => grassmann::tau_from_basis(&AdmissibleBasis::from_model(m, order, order as i64), order)?,
    };
    let w = grassmann::sato_wave(&tau, order as i64)?;
    let report = grassmann::check_wave(model, order);
    let text = match format {
        Format::Tsv => w.to_tsv(),
        Format::Json => {
            let terms: Vec<_> = w
                .nonzero_terms()
                .into_iter()
                .map(|(e, c)| json!([e, c.to_string()]))
                .collect();
            serde_json::to_string_pretty(&json!({"series": terms, "report": report}))? + "\n"
        }
    };
    Ok(Output { text, ok: report.passed() })
}

fn oracle_cmd(d_max: usize, b_max: u32, format: Format) -> Result<Output> {
    let rows = oracle::oracle_table(d_max, b_max)?;
    let report = oracle::check_tau_vs_oracle(d_max, b_max);
    let ok = report.passed() && rows.iter().all(|r| r.matches);
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&json!({"rows": rows, "report": report}))? + "\n",
        Format::Tsv => {
            let mut s = String::from("d\tmu\tb\tN\tnormalized\ttau\tmatch\n");
            for r in &rows {
                s.push_str(&format!(
                    "{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
                    r.d,
                    r.mu,
                    r.b,
                    r.count,
                    r.normalized,
                    r.tau,
                    if r.matches { "yes" } else { "no" }
                ));
            }
            s
        }
    };
    let last = if ok { "ALL MATCH\n" } else { "MISMATCH\n" };
    Ok(Output { text: text + last, ok })
}

fn identities(x_max: usize, q_max: usize) -> Vec<CheckReport> {
    let mut jobs: Vec<Job> = ModelId::catalogue()
        .into_iter()
        .map(|m| -> Job { Box::new(move || vec![kacschwarz::check_commutator(&ModelInstance::new(m, 0, 4), 0)]) })
        .collect();
    jobs.extend(suite::identity_jobs(x_max, q_max, x_max + 2, q_max + 5));
    suite::run_jobs(jobs)
}

fn run(cli: &Cli) -> Result<Output> {
    match &cli.command {
        Command::Verify { model, order, jmax, kmax, lmax } => {
            reports_output(&verify(*model, *order, *jmax, *kmax, *lmax), cli.format)
        }
        Command::Tau { model, dmax } => tau(*model, *dmax as usize, cli.format),
        Command::Wave { model, order } => wave(*model, *order as usize, cli.format),
        Command::Oracle { dmax, bmax } => oracle_cmd(*dmax as usize, *bmax, cli.format),
        Command::BfCheck { dmax } => reports_output(&suite::run_jobs(suite::bf_jobs(*dmax as usize)), cli.format),
        Command::Identities { xmax, qmax } => reports_output(&identities(*xmax as usize, *qmax as usize), cli.format),
    }
}

fn emit(cli: &Cli, text: &str) -> Result<()> {
    match &cli.output {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = run(&cli).and_then(|out| {
        emit(&cli, &out.text)?;
        if out.text.is_empty() {
            bail!("empty output");
        }
        Ok(out.ok)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("qtlab: {e:#}");
            ExitCode::from(3)
        }
    }
}

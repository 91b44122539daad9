//! Command-line entry points. Exit codes: 0 success, 1 usage error, 2 data error.

use std::ffi::OsString;
use std::io::Write;
use std::net::IpAddr;
use std::path::PathBuf;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};

use regret_elicit::metrics::write_cloud_csv;
use regret_elicit::table::render_table;
use regret_elicit::{
    analyze_session, FitOptions, MembershipSet, SubjectSpec, WeightFamily, WeightingSpec,
};

use crate::error::ServiceError;
use crate::simulate::{simulate, SimulationConfig};
use crate::store::{read_log, SessionStore};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "regret-survey",
    version,
    about = "Adaptive regret-theory survey engine"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Serve the HTTP API.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        bind: IpAddr,
        /// Directory of session logs; sessions stay in memory without it.
        #[arg(long)]
        data_dir: Option<PathBuf>,
    },
    /// Run a group of synthetic subjects and print the group report.
    Simulate {
        #[arg(long, default_value_t = 20)]
        subjects: usize,
        #[arg(long, default_value = "identity")]
        family: WeightFamily,
        #[arg(long, default_value_t = 1.0)]
        gamma: f64,
        #[arg(long, default_value_t = 1.0)]
        beta: f64,
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        data_dir: Option<PathBuf>,
        #[arg(long, default_value_t = 100.0)]
        money_scale: f64,
        #[arg(long)]
        practice: bool,
    },
    /// Refit a completed session log.
    Fit {
        #[arg(long)]
        session: PathBuf,
    },
    /// Print a completed session's report, or its membership cloud as CSV.
    Report {
        #[arg(long)]
        session: PathBuf,
        #[arg(long, value_enum, default_value_t = ReportFormat::Json)]
        format: ReportFormat,
    },
    /// Print the outcome table used by the training modules.
    GenTable2,
}

/// Parses and runs a command line, returning the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_DATA
        }
    }
}

fn json_line(out: &mut dyn Write, value: &impl serde::Serialize) -> Result<(), ServiceError> {
    serde_json::to_writer_pretty(&mut *out, value)
        .map_err(|e| ServiceError::Corrupt(e.to_string()))?;
    writeln!(out)?;
    Ok(())
}

fn execute(command: Command, out: &mut dyn Write) -> Result<(), ServiceError> {
    match command {
        Command::Serve {
            port,
            bind,
            data_dir,
        } => serve(bind, port, data_dir),
        Command::Simulate {
            subjects,
            family,
            gamma,
            beta,
            noise,
            seed,
            data_dir,
            money_scale,
            practice,
        } => {
            let store = match data_dir {
                Some(dir) => SessionStore::open(dir)?,
                None => SessionStore::in_memory(),
            };
            let subject = SubjectSpec {
                w_true: WeightingSpec::new(family, gamma)?,
                beta,
                memberships: MembershipSet::default(),
                noise_sigma: noise,
                seed,
            };
            subject.validate()?;
            let config = SimulationConfig {
                subjects,
                subject,
                money_scale,
                seed,
                practice,
            };
            json_line(out, &simulate(&store, &config)?)
        }
        Command::Fit { session } => {
            let session = read_log(&session)?;
            if !session.is_complete() {
                return Err(ServiceError::conflict("session is not complete"));
            }
            let analysis = analyze_session(session.engine(), &FitOptions::default())?;
            json_line(out, &analysis.fit)
        }
        Command::Report { session, format } => {
            let report = read_log(&session)?.report()?;
            match format {
                ReportFormat::Json => json_line(out, &report),
                ReportFormat::Csv => Ok(write_cloud_csv(&report.membership_cloud, out)?),
            }
        }
        Command::GenTable2 => Ok(out.write_all(render_table().as_bytes())?),
    }
}

fn serve(bind: IpAddr, port: u16, data_dir: Option<PathBuf>) -> Result<(), ServiceError> {
    let store = Arc::new(match data_dir {
        Some(dir) => SessionStore::open(dir)?,
        None => SessionStore::in_memory(),
    });
    let runtime = tokio::runtime::Builder::new_multi_thread()
        .enable_all()
        .build()?;
    runtime.block_on(async move {
        let listener = tokio::net::TcpListener::bind((bind, port)).await?;
        tracing::info!(address = %listener.local_addr()?, "listening");
        axum::serve(listener, crate::api::router(store))
            .with_graceful_shutdown(async {
                let _ = tokio::signal::ctrl_c().await;
            })
            .await?;
        Ok(())
    })
}

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod jobs;

#[derive(Parser, Debug)]
#[command(name = "darcais", version, about = "Exact D'Arcais-type polynomials and their coefficient formulas")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print P_n^{g,h}(x), or its value at --eval-at.
    Poly {
        #[command(flatten)]
        fns: Functions,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Method::Recursion)]
        method: Method,
        /// Rational point, e.g. -24 or 3/2.
        #[arg(long, allow_hyphen_values = true)]
        eval_at: Option<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Print the integer-normalized coefficient A_{n,m} = [x^m] H(n) P_n(x).
    Coeff {
        #[command(flatten)]
        fns: Functions,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, value_enum, default_value_t = Method::Lemma)]
        method: Method,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run a named verification suite, or `all`.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long)]
        max_n: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run a scan over n <= --max-n.
    Scan {
        #[arg(long, value_enum)]
        check: Check,
        #[arg(long)]
        max_n: usize,
        #[arg(long, default_value = "sigma:1")]
        g: String,
        #[arg(long, default_value = "id")]
        h: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Dump the coefficient table A_{n,m} for n <= --max-n.
    Export {
        #[command(flatten)]
        fns: Functions,
        #[arg(long)]
        max_n: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

#[derive(clap::Args, Debug)]
struct Functions {
    /// one | id | sigma:<l> | tilde:<desc> | table:<path>
    #[arg(long)]
    g: String,
    #[arg(long)]
    h: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Recursion,
    Lemma,
    MainTheorem,
    Thm1,
    Thm2,
    Composition,
    Series,
    Hook,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Check {
    Lehmer,
    NoLogconcave,
    NoCorollary,
    Delta,
    Transfer,
    Counterexample,
}

fn init_threads() -> Result<(), jobs::Failure> {
    let Ok(v) = std::env::var("DARCAIS_THREADS") else {
        return Ok(());
    };
    let threads: usize = v
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| jobs::Failure::Usage(format!("DARCAIS_THREADS must be a positive integer, got `{v}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| jobs::Failure::Usage(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = init_threads().and_then(|()| match cli.command {
        Command::Poly { fns, n, method, eval_at, format } => {
            jobs::poly(&fns.g, &fns.h, n, method, eval_at.as_deref(), format)
        }
        Command::Coeff { fns, n, m, method, format } => jobs::coeff(&fns.g, &fns.h, n, m, method, format),
        Command::Verify { suite, max_n, format } => jobs::verify(&suite, max_n, format),
        Command::Scan { check, max_n, g, h, format } => jobs::scan(check, &g, &h, max_n, format),
        Command::Export { fns, max_n, format } => jobs::export(&fns.g, &fns.h, max_n, format),
    });
    match result {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(jobs::Failure::Verification(out)) => {
            print!("{out}");
            ExitCode::from(1)
        }
        Err(jobs::Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

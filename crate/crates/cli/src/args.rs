use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;

#[derive(Debug, Parser)]
#[command(name = "congabc", version, about = "ABC-solutions, the Theta operator and its verification suites")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    pub format: Format,
    /// Worker threads for the suites (0 = one per core).
    #[arg(long, default_value_t = 0, global = true)]
    pub workers: usize,
    /// Seed for random corpora and probabilistic primality rounds.
    #[arg(long, default_value_t = 0x5eed_abc0, global = true)]
    pub seed: u64,
    /// Trial-division bound for multi-word integers.
    #[arg(long, global = true)]
    pub trial_bound: Option<u32>,
    /// Pollard-rho iteration budget per composite.
    #[arg(long, env = "CONGABC_RHO_BUDGET", global = true)]
    pub rho_budget: Option<u64>,
    /// Miller-Rabin rounds for multi-word integers.
    #[arg(long, global = true)]
    pub mr_rounds: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Normalize a triple and print its factorizations, radical, quality and merit.
    #[command(allow_negative_numbers = true)]
    Analyze {
        x: BigInt,
        y: BigInt,
        z: BigInt,
        /// Comma-separated epsilons for the merit function.
        #[arg(long, value_delimiter = ',', default_value = "0,1")]
        eps: Vec<f64>,
    },
    /// Apply Theta_n repeatedly and print the orbit.
    #[command(allow_negative_numbers = true)]
    Theta {
        x: BigInt,
        y: BigInt,
        z: BigInt,
        #[arg(long)]
        n: u32,
        #[arg(long = "iter", default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
        iterations: u32,
    },
    /// Run a verification suite over a corpus.
    Verify {
        #[command(subcommand)]
        suite: Suite,
    },
    /// Bound on f(aa, eps) for all triples from a bound C on the triples with N | abc.
    Bound {
        #[arg(long = "N")]
        modulus: u64,
        #[arg(long)]
        eps: f64,
        #[arg(long = "C", allow_negative_numbers = true)]
        constant: f64,
    },
    /// List the solutions with c <= max-c and quality above a threshold.
    Search {
        #[arg(long)]
        max_c: u64,
        #[arg(long, default_value_t = 1.0)]
        min_quality: f64,
    },
}

#[derive(Debug, Args)]
pub struct CorpusArgs {
    /// Largest c in the corpus.
    #[arg(long, default_value_t = 1000)]
    pub max_c: u64,
    /// Sample this many triples instead of enumerating all of them.
    #[arg(long)]
    pub random: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Suite {
    /// Amplification inequality for every (triple, n, eps).
    Lemma1 {
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<u32>,
        #[arg(long, value_delimiter = ',', required = true)]
        eps: Vec<f64>,
        #[command(flatten)]
        corpus: CorpusArgs,
    },
    /// N | ABC for the image under Theta_phi(N).
    Lemma2 {
        /// Moduli: a comma-separated list of integers or `lo..=hi` ranges.
        #[arg(long = "N", value_delimiter = ',', required = true, value_parser = parse_moduli)]
        moduli: Vec<Vec<u64>>,
        #[command(flatten)]
        corpus: CorpusArgs,
    },
    /// Exact identities behind the amplification inequality.
    Identities {
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<u32>,
        #[command(flatten)]
        corpus: CorpusArgs,
    },
    /// End-to-end bound chain for one modulus.
    Chain {
        #[arg(long = "N")]
        modulus: u64,
        #[arg(long)]
        eps: f64,
        /// Assumed bound on the image merits; defaults to the observed maximum.
        #[arg(long = "C", allow_negative_numbers = true)]
        constant: Option<f64>,
        #[command(flatten)]
        corpus: CorpusArgs,
    },
}

fn parse_moduli(s: &str) -> Result<Vec<u64>, String> {
    let parse = |t: &str| t.trim().parse::<u64>().map_err(|e| format!("{t:?}: {e}"));
    match s.split_once("..=") {
        Some((lo, hi)) => {
            let (lo, hi) = (parse(lo)?, parse(hi)?);
            if lo > hi {
                return Err(format!("empty range {s}"));
            }
            Ok((lo..=hi).collect())
        }
        None => Ok(vec![parse(s)?]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moduli_ranges() {
        assert_eq!(parse_moduli("3..=6").unwrap(), vec![3, 4, 5, 6]);
        assert_eq!(parse_moduli("16").unwrap(), vec![16]);
        assert!(parse_moduli("6..=3").is_err());
        assert!(parse_moduli("x").is_err());
    }

    #[test]
    fn command_line_parses() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
        let cli = Cli::try_parse_from(["congabc", "analyze", "1", "8", "-9", "--eps", "0,1"]).unwrap();
        assert!(matches!(cli.command, Command::Analyze { ref eps, .. } if eps == &[0.0, 1.0]));
        let cli = Cli::try_parse_from(["congabc", "verify", "lemma2", "--N", "3..=5,16", "--max-c", "50"]).unwrap();
        match cli.command {
            Command::Verify { suite: Suite::Lemma2 { moduli, corpus } } => {
                assert_eq!(moduli.concat(), vec![3, 4, 5, 16]);
                assert_eq!(corpus.max_c, 50);
            }
            other => panic!("{other:?}"),
        }
    }
}

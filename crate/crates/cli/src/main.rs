mod commands;
mod output;
mod parse;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::commands::CliError;

#[derive(Parser, Debug)]
#[command(name = "inertia", version, about = "Inert subgroups and algebraic entropy on abelian group models")]
pub struct Cli {
    #[command(flatten)]
    pub session: SessionConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputMode {
    Json,
    Text,
}

/// Settings shared by every command. Environment variables fill in what
/// the command line leaves out.
#[derive(Args, Debug, Clone)]
pub struct SessionConfig {
    /// Error tolerance for certified numeric values.
    #[arg(long, global = true, env = "INERT_TOLERANCE", default_value_t = 1e-9)]
    pub tolerance: f64,
    /// Step budget for stabilization and refinement.
    #[arg(long, global = true, env = "INERT_MAX_STEPS", default_value_t = 64)]
    pub max_steps: usize,
    /// Consecutive equal indices required to declare stationarity.
    #[arg(long, global = true, env = "INERT_WINDOW", default_value_t = 3)]
    pub stabilization_window: usize,
    /// Maximum number of elements any explicit enumeration may hold.
    #[arg(long, global = true, env = "INERT_ELEMENT_CAP", default_value_t = 1_000_000)]
    pub element_cap: usize,
    #[arg(long, global = true, env = "INERT_OUTPUT", value_enum, default_value_t = OutputMode::Json)]
    pub output: OutputMode,
}

impl SessionConfig {
    fn validate(&self) -> Result<(), CliError> {
        let positive = self.tolerance > 0.0
            && self.tolerance.is_finite()
            && self.max_steps > 0
            && self.stabilization_window > 0
            && self.element_cap > 0;
        if !positive {
            return Err(CliError::Usage("session settings must all be positive".into()));
        }
        if self.stabilization_window > self.max_steps {
            return Err(CliError::Usage(format!(
                "stabilization window {} exceeds max steps {}",
                self.stabilization_window, self.max_steps
            )));
        }
        Ok(())
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Finitely generated abelian groups.
    #[command(subcommand)]
    Group(GroupCmd),
    /// Subgroup lattice operations.
    #[command(subcommand)]
    Sub(SubCmd),
    /// Inertness of subgroups and endomorphisms.
    #[command(subcommand)]
    Inert(InertCmd),
    /// Fully inert subgroups and self-inert groups.
    #[command(subcommand)]
    Fullyinert(FullyInertCmd),
    /// Entropy invariants.
    #[command(subcommand)]
    Entropy(EntropyCmd),
    /// Growth of endomorphisms.
    #[command(subcommand)]
    Growth(GrowthCmd),
    /// Mahler measure and cyclotomic detection.
    #[command(subcommand)]
    Mahler(MahlerCmd),
    /// Finite non-abelian groups.
    #[command(subcommand)]
    Nonabelian(NonabelianCmd),
}

#[derive(Subcommand, Debug)]
pub enum GroupCmd {
    /// Invariant-factor form of a group such as `Z/2 + Z/3 + Z^2`.
    Canon {
        #[arg(long)]
        group: String,
    },
}

#[derive(Args, Debug)]
pub struct TwoSubs {
    /// `Z^n`, `Z/2 + Z`, `Q^n`, or the JSON group form.
    #[arg(long)]
    pub group: String,
    /// Rows generating the first subgroup, e.g. `[[2,0],[0,3]]`.
    #[arg(long)]
    pub sub: String,
    /// Rows generating the second subgroup.
    #[arg(long)]
    pub other: String,
}

#[derive(Subcommand, Debug)]
pub enum SubCmd {
    /// `[H : H ∩ K]`.
    Index(TwoSubs),
    Sum(TwoSubs),
    Meet(TwoSubs),
}

#[derive(Subcommand, Debug)]
pub enum InertCmd {
    /// Inert index of a subgroup under an endomorphism.
    Check {
        #[arg(long)]
        group: String,
        #[arg(long)]
        matrix: String,
        #[arg(long)]
        sub: String,
    },
    /// Decide whether every subgroup is inert under the endomorphism.
    Endo {
        #[arg(long)]
        group: String,
        #[arg(long)]
        matrix: String,
    },
    /// Search cyclic subgroups for a non-inert witness.
    Witness {
        #[arg(long)]
        group: String,
        #[arg(long)]
        matrix: String,
        #[arg(long, default_value_t = inertia_core::inertia::WITNESS_HEIGHT)]
        height: u32,
    },
}

#[derive(Subcommand, Debug)]
pub enum FullyInertCmd {
    /// Full inertness of a subgroup of a finite, free or rational ambient.
    Check {
        #[arg(long)]
        group: String,
        #[arg(long)]
        sub: String,
        /// Ranks of free direct summands, e.g. `1,1`, for the box decomposition.
        #[arg(long)]
        factors: Option<String>,
        /// Index threshold for refuting uniform full inertness on `Q^n`.
        #[arg(long, default_value_t = inertia_core::fully_inert::UNIFORM_THRESHOLD)]
        threshold: u64,
    },
    /// Self-inert verdict for a group descriptor given as JSON.
    Classify {
        #[arg(long)]
        descriptor: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum EntropyCmd {
    /// `ent`: on f.g. and rational models always 0; on a Bernoulli shift `log|F|`.
    Ent(EndoInput),
    /// `h_alg` via the Mahler measure, or by stabilization on a shift.
    Halg(EndoInput),
    /// Intrinsic entropy on `Q^n`.
    Intrinsic {
        #[arg(long)]
        matrix: String,
        /// Also run the stabilization path on `Z^n` and compare.
        #[arg(long)]
        cross_check: bool,
    },
    /// Intrinsic adjoint entropy along the cotrajectory.
    Adjoint {
        #[arg(long)]
        matrix: String,
        #[arg(long)]
        group: Option<String>,
        /// The inert subgroup; the standard lattice by default.
        #[arg(long)]
        sub: Option<String>,
    },
    /// Limit-free formula on a finite trajectory or a full shift trajectory.
    Limitfree {
        #[command(flatten)]
        input: EndoInput,
        /// Subgroup whose trajectory is used.
        #[arg(long)]
        sub: Option<String>,
    },
    /// Topological entropy of the one-sided shift over a finite cell.
    Htop {
        #[arg(long)]
        cell: String,
    },
    /// Scale of the two-sided shift relative to the cylinders `U_0..U_K`.
    Scale {
        #[arg(long)]
        cell: String,
        #[arg(long, default_value_t = 10)]
        k: usize,
    },
}

#[derive(Args, Debug)]
pub struct EndoInput {
    /// Endomorphism matrix acting on column vectors; `/d` divides all entries.
    #[arg(long, required_unless_present = "shift")]
    pub matrix: Option<String>,
    /// Ambient group; `Q^n` when omitted.
    #[arg(long)]
    pub group: Option<String>,
    /// Use the right Bernoulli shift over this finite cell instead.
    #[arg(long, conflicts_with_all = ["matrix", "group"])]
    pub shift: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum GrowthCmd {
    /// Polynomial or exponential growth.
    Classify {
        #[arg(long)]
        matrix: String,
        #[arg(long)]
        group: Option<String>,
    },
    /// Sizes `|F + φF + … + φ^{n-1}F|` for `n = 1..N`.
    Sumset {
        #[arg(long, required_unless_present = "shift")]
        matrix: Option<String>,
        #[arg(long, required_unless_present = "shift")]
        group: Option<String>,
        /// Bernoulli shift cell; set elements are then `[position, coords...]`.
        #[arg(long, conflicts_with_all = ["matrix", "group"])]
        shift: Option<String>,
        /// The finite subset as rows, e.g. `[[0],[1]]`.
        #[arg(long)]
        set: String,
        #[arg(long)]
        n: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum MahlerCmd {
    /// Certified Mahler measure of an integer polynomial (ascending coefficients).
    Measure {
        #[arg(long)]
        poly: String,
        #[arg(long, value_enum, default_value_t = Schedule::Aberth)]
        schedule: Schedule,
    },
    /// Whether the polynomial is `± t^a` times cyclotomic factors.
    Kronecker {
        #[arg(long)]
        poly: String,
    },
    /// Monic polynomials with measure below a threshold.
    Scan {
        #[arg(long)]
        degree: usize,
        #[arg(long)]
        height: u32,
        #[arg(long)]
        threshold: f64,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Schedule {
    Aberth,
    Weierstrass,
}

#[derive(Subcommand, Debug)]
pub enum NonabelianCmd {
    /// Transversal counts `t_n` of `T_n = H·H^φ⋯H^{φ^n}` against `t^n`.
    Traj {
        /// `cyclic:n`, `dihedral:n`, `dicyclic:n`, `symmetric:n`, `a4`, `sl2_3`,
        /// or `{"table": [[...]]}`.
        #[arg(long)]
        group: String,
        /// `identity`, `conj:g`, or a full map `[...]`.
        #[arg(long, default_value = "identity")]
        phi: String,
        /// Generators of `H` as element indices, e.g. `[1]`.
        #[arg(long)]
        sub: String,
        #[arg(long)]
        n: usize,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = cli.session.validate().and_then(|_| commands::run(&cli));
    match result {
        Ok(v) => {
            match cli.session.output {
                OutputMode::Json => println!("{}", serde_json::to_string_pretty(&v).expect("json")),
                OutputMode::Text => print!("{}", output::text(&v)),
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

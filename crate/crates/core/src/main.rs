use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use preserver::fixtures::{example_band_nilpotent, example_ors, example_symmetric_killer, random_zpp_map, GenSpec};
use preserver::jordan::{decompose_dzp, split_jordan};
use preserver::linalg::json::field_from_json;
use preserver::linalg::{Field, FieldDesc, PrimeField, Rationals};
use preserver::nilspace::{canonicalize_trivial_mult, subspace_from_json};
use preserver::structure::{
    canonicalize_unital_hom, classify_scalar_domain, decompose_zpp, fitting_to_json, small_codomain_classify,
};
use preserver::verify::{
    check_idempotent_preserver, check_jordan, check_ring_hom, check_trivial_mult, check_zpp, fuzz_preserver,
};
use preserver::{Error, LinMap, Property, Verdict};

#[derive(Parser)]
#[command(name = "zpp", version, about = "Check and decompose zero-product preserving maps between matrix algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Io {
    /// Input JSON document (standard input when omitted).
    #[arg(long = "in", value_name = "PATH")]
    input: Option<PathBuf>,
    /// Output path (standard output when omitted).
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Decide a property of a linear map (dzp is checked by random falsification).
    Check {
        #[arg(long, default_value = "zpp", value_parser = ["zpp", "dzp", "jordan", "ring", "idem", "trivial"])]
        property: String,
        /// Sample count for dzp.
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        io: Io,
    },
    /// Canonical decomposition certificate of a zero-product (or double-zero-product) preserver.
    Decompose {
        #[arg(long, default_value = "zpp", value_parser = ["zpp", "dzp"])]
        property: String,
        #[command(flatten)]
        io: Io,
    },
    /// Split a Jordan homomorphism into its homomorphism and anti-homomorphism parts.
    SplitJordan {
        #[command(flatten)]
        io: Io,
    },
    /// Conjugate a unital ring homomorphism to A -> I_k (x) A.
    CanonHom {
        #[command(flatten)]
        io: Io,
    },
    /// Block-pattern canonical form of a subspace with trivial multiplication.
    CanonNilspace {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        io: Io,
    },
    /// Classify a zero-product preserver M_n -> M_r with r <= n + 1.
    ClassifySmall {
        #[command(flatten)]
        io: Io,
    },
    /// Draw a random zero-product preserver from a generator spec.
    Gen {
        /// Overrides the seed stored in the spec.
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        io: Io,
    },
    /// Search for counterexamples on random zero pairs.
    Fuzz {
        #[arg(long, default_value = "zpp", value_parser = ["zpp", "dzp"])]
        property: String,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        io: Io,
    },
    /// Print the example maps over the rationals.
    Examples {
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
}

struct Outcome {
    doc: Value,
    code: u8,
}

impl Outcome {
    fn ok(doc: Value) -> Self {
        Outcome { doc, code: 0 }
    }

    fn verdict<F: Field>(v: &Verdict<F>) -> Self {
        Outcome { doc: v.to_json(), code: if v.holds { 0 } else { 1 } }
    }

    fn input_error(message: String) -> Self {
        Outcome { doc: json!({ "error": "input", "message": message }), code: 2 }
    }
}

impl<F: Field> From<Error<F>> for Outcome {
    fn from(e: Error<F>) -> Self {
        Outcome { doc: e.to_json(), code: e.exit_code() as u8 }
    }
}

fn read_doc(path: Option<&Path>) -> Result<Value, String> {
    let text = match path {
        Some(p) => fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?,
        None => {
            let mut buf = String::new();
            io::stdin().read_to_string(&mut buf).map_err(|e| format!("standard input: {e}"))?;
            buf
        }
    };
    serde_json::from_str(&text).map_err(|e| format!("invalid JSON: {e}"))
}

fn read_map<F: Field>(field: &F, doc: &Value) -> Result<LinMap<F>, Error<F>> {
    Ok(LinMap::from_json(field, doc)?)
}

fn run_in_field<F: Field>(field: F, command: &Command, doc: &Value) -> Result<Outcome, Error<F>> {
    Ok(match command {
        Command::Check { property, trials, seed, .. } => {
            let phi = read_map(&field, doc)?;
            let verdict = match property.parse::<Property>().map_err(Error::Precondition)? {
                Property::Zpp => check_zpp(&phi),
                Property::Dzp => fuzz_preserver(&phi, Property::Dzp, *trials, *seed)?,
                Property::Jordan => check_jordan(&phi)?,
                Property::RingHom => check_ring_hom(&phi),
                Property::Idempotent => check_idempotent_preserver(&phi)?,
                _ => check_trivial_mult(&phi),
            };
            Outcome::verdict(&verdict)
        }
        Command::Decompose { property, .. } => {
            let phi = read_map(&field, doc)?;
            match (property.as_str(), phi.n()) {
                ("zpp", 1) => Outcome::ok(fitting_to_json(&classify_scalar_domain(&phi)?)),
                ("zpp", _) => Outcome::ok(decompose_zpp(&phi)?.to_json()),
                _ => Outcome::ok(decompose_dzp(&phi)?.to_json()),
            }
        }
        Command::SplitJordan { .. } => Outcome::ok(split_jordan(&read_map(&field, doc)?)?.to_json()),
        Command::CanonHom { .. } => {
            let psi = read_map(&field, doc)?;
            let (s1, k) = canonicalize_unital_hom(&psi)?;
            Outcome::ok(json!({
                "field": field.desc().to_string(),
                "n": psi.n(),
                "r": psi.r(),
                "S1": preserver::linalg::json::mat_to_json(&s1),
                "k": k,
                "verified": true,
            }))
        }
        Command::CanonNilspace { seed, .. } => {
            let (l, basis) = subspace_from_json(&field, doc)?;
            Outcome::ok(canonicalize_trivial_mult(&basis, &field, l, *seed)?.to_json())
        }
        Command::ClassifySmall { .. } => Outcome::ok(small_codomain_classify(&read_map(&field, doc)?)?.to_json(&field)),
        Command::Gen { seed, .. } => {
            let mut spec: GenSpec = serde_json::from_value(doc.clone())
                .map_err(|e| Error::Precondition(format!("invalid generator spec: {e}")))?;
            if let Some(seed) = seed {
                spec.seed = *seed;
            }
            let (phi, truth) = random_zpp_map(&field, &spec)?;
            Outcome::ok(json!({
                "spec": serde_json::to_value(spec).expect("spec serialises"),
                "map": phi.to_json(),
                "certificate": truth.to_json(),
            }))
        }
        Command::Fuzz { property, trials, seed, .. } => {
            let phi = read_map(&field, doc)?;
            let property = property.parse::<Property>().map_err(Error::Precondition)?;
            Outcome::verdict(&fuzz_preserver(&phi, property, *trials, *seed)?)
        }
        Command::Examples { .. } => unreachable!("examples takes no input"),
    })
}

fn dispatch<F: Field>(field: F, command: &Command, doc: &Value) -> Outcome {
    run_in_field(field, command, doc).unwrap_or_else(Outcome::from)
}

fn examples() -> Outcome {
    let q = Rationals;
    let band = example_band_nilpotent(&q, 2, 3).expect("valid parameters");
    let ors = example_ors(&q, 2, 4).expect("valid parameters");
    Outcome::ok(json!({
        "symmetric_killer": example_symmetric_killer(&q).to_json(),
        "band_nilpotent_n2_k3": band.to_json(),
        "ors_n2_r4": ors.to_json(),
    }))
}

fn run(cli: &Cli) -> (Outcome, Option<&Path>) {
    let io = match &cli.command {
        Command::Examples { out } => return (examples(), out.as_deref()),
        Command::Check { io, .. }
        | Command::Decompose { io, .. }
        | Command::SplitJordan { io }
        | Command::CanonHom { io }
        | Command::CanonNilspace { io, .. }
        | Command::ClassifySmall { io }
        | Command::Gen { io, .. }
        | Command::Fuzz { io, .. } => io,
    };
    let out = io.out.as_deref();
    let doc = match read_doc(io.input.as_deref()) {
        Ok(doc) => doc,
        Err(e) => return (Outcome::input_error(e), out),
    };
    let outcome = match field_from_json(&doc) {
        Err(e) => Outcome::input_error(e.to_string()),
        Ok(FieldDesc::Rationals) => dispatch(Rationals, &cli.command, &doc),
        Ok(FieldDesc::Prime(p)) => match PrimeField::new(p) {
            Ok(f) => dispatch(f, &cli.command, &doc),
            Err(e) => Outcome::input_error(e.to_string()),
        },
    };
    (outcome, out)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (outcome, out) = run(&cli);
    if let Some(message) = outcome.doc.get("message").and_then(Value::as_str) {
        eprintln!("zpp: {message}");
    } else if outcome.code == 1 {
        eprintln!("zpp: property does not hold; witness in output");
    }
    let mut text = serde_json::to_string_pretty(&outcome.doc).expect("JSON serialises");
    text.push('\n');
    let written = match out {
        Some(path) => fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => io::stdout().lock().write_all(text.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        eprintln!("zpp: cannot write output: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(outcome.code)
}

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use breuil::abelian::{build_extension, check_exact, cokernel, image, kernel};
use breuil::functors::{lift_object, truncate};
use breuil::io::{
    parse_block, parse_morphism, parse_sequence, read_module, serialize_document, serialize_module,
    serialize_morphism, serialize_sequence, ModuleDocument,
};
use breuil::phimod::hom_space;
use breuil::random::{fixture_rng, random_matrix, random_object_seeded};
use breuil::ring::fil_quotient_dim;
use breuil::selftest::{run_suites, SuiteConfig, DEFAULT_ITERATIONS};
use breuil::{BreuilError, RingParams, TMatrix};

#[derive(Parser)]
#[command(name = "breuil", version, about = "Torsion Breuil modules over F_p[u]/u^s")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a module file.
    Validate { file: PathBuf },
    /// Write the Cartier dual.
    Dual {
        file: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Print the ranks of M^m, M^nil, M^uni, M^et.
    Parts { file: PathBuf },
    /// Exit 0 if unipotent, 1 if not.
    IsUnipotent { file: PathBuf },
    /// Print the F_p-dimension and a basis of Hom(SRC, TGT).
    Hom { source: PathBuf, target: PathBuf },
    /// Reduce to a lower level.
    Truncate {
        file: PathBuf,
        #[arg(long)]
        to: usize,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Lift to a higher level.
    Lift {
        file: PathBuf,
        #[arg(long)]
        to: usize,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Write the kernel inclusion of a morphism.
    Ker {
        morphism: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Write the cokernel projection of a morphism.
    Coker {
        morphism: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Write the image inclusion of a morphism.
    Im {
        morphism: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Check that a sequence file is short exact.
    CheckExact { sequence: PathBuf },
    /// Build an extension 0 -> M1 -> E -> M2 -> 0.
    Extend {
        m1: PathBuf,
        m2: PathBuf,
        /// Block C0 (otherwise drawn from --seed).
        #[arg(long)]
        block: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Check the monodromy axioms of a module file with an N field.
    CheckN { file: PathBuf },
    /// Compare dim Fil^a T_s / Fil^b T_s at two levels.
    Filcmp {
        #[arg(long)]
        a: u32,
        #[arg(long)]
        b: u32,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        s2: usize,
        #[arg(long)]
        e: u32,
    },
    /// Write a seeded random object.
    Gen {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        p: u32,
        #[arg(long)]
        e: u32,
        #[arg(long)]
        r: u32,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        rank: usize,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Run the property suites.
    Selftest {
        #[arg(long, default_value_t = DEFAULT_ITERATIONS)]
        iterations: usize,
        /// Defaults to SELFTEST_SEED, then 0.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        suite: Vec<String>,
    },
}

enum Outcome {
    Yes,
    No,
}

fn write(path: &Path, text: &str) -> Result<(), BreuilError> {
    fs::write(path, text).map_err(|e| BreuilError::ParseError {
        location: path.display().to_string(),
        message: e.to_string(),
    })
}

fn read_text(path: &Path) -> Result<String, BreuilError> {
    fs::read_to_string(path).map_err(|e| BreuilError::ParseError {
        location: path.display().to_string(),
        message: e.to_string(),
    })
}

fn load_morphism(path: &Path) -> Result<breuil::PhiMorphism, BreuilError> {
    parse_morphism(&read_text(path)?, path.parent())
}

fn run(cmd: Command) -> Result<Outcome, BreuilError> {
    match cmd {
        Command::Validate { file } => {
            let doc = read_module(&file)?;
            let m = doc.phi();
            let p = m.params();
            println!("valid: p = {}, e = {}, r = {}, s = {}, rank {}", p.p(), p.e(), p.r(), p.s(), m.rank());
            println!("Fil^r exponents: {:?}", m.filtration().exponents());
            if let ModuleDocument::Monodromy(_) = doc {
                println!("carries a monodromy operator");
            }
        }
        Command::Dual { file, output } => {
            let m = read_module(&file)?.into_phi();
            let dual = m.cartier_dual();
            m.verify_dual(&dual)?;
            write(&output, &serialize_module(&dual))?;
        }
        Command::Parts { file } => {
            let [m, nil, uni, et] = read_module(&file)?.phi().parts()?.ranks();
            println!("m {m}\nnil {nil}\nuni {uni}\net {et}");
        }
        Command::IsUnipotent { file } => {
            return Ok(if read_module(&file)?.phi().is_unipotent()? {
                println!("unipotent");
                Outcome::Yes
            } else {
                println!("not unipotent");
                Outcome::No
            });
        }
        Command::Hom { source, target } => {
            let basis = hom_space(read_module(&source)?.phi(), read_module(&target)?.phi())?;
            println!("dimension {}", basis.len());
            for f in &basis {
                println!("{}", f.phi_x());
            }
        }
        Command::Truncate { file, to, output } => {
            let m = truncate(read_module(&file)?.phi(), to)?;
            write(&output, &serialize_module(&m))?;
        }
        Command::Lift { file, to, output } => {
            let m = lift_object(read_module(&file)?.phi(), to)?;
            write(&output, &serialize_module(&m))?;
        }
        Command::Ker { morphism, output } => {
            let (k, incl) = kernel(&load_morphism(&morphism)?)?;
            println!("kernel rank {}", k.rank());
            write(&output, &serialize_morphism(&incl))?;
        }
        Command::Coker { morphism, output } => {
            let (q, proj) = cokernel(&load_morphism(&morphism)?)?;
            println!("cokernel rank {}", q.rank());
            write(&output, &serialize_morphism(&proj))?;
        }
        Command::Im { morphism, output } => {
            let im = image(&load_morphism(&morphism)?)?;
            println!("image rank {}", im.image.rank());
            write(&output, &serialize_morphism(&im.mono))?;
        }
        Command::CheckExact { sequence } => {
            let seq = parse_sequence(&read_text(&sequence)?, sequence.parent())?;
            let report = check_exact(&seq)?;
            println!("{report}");
            if !report.is_exact() {
                return Ok(Outcome::No);
            }
        }
        Command::Extend { m1, m2, block, seed, output } => {
            let m1 = read_module(&m1)?.into_phi();
            let m2 = read_module(&m2)?.into_phi();
            let c0: TMatrix = match block {
                Some(path) => parse_block(&read_text(&path)?, m1.params())?,
                None => random_matrix(&mut fixture_rng(seed), m1.p(), m1.s(), m2.rank(), m1.rank()),
            };
            let seq = build_extension(&m1, &m2, &c0)?;
            write(&output, &serialize_sequence(&seq))?;
        }
        Command::CheckN { file } => {
            let ModuleDocument::Monodromy(m) = read_module(&file)? else {
                return Err(BreuilError::ParseError {
                    location: file.display().to_string(),
                    message: "document has no N field".into(),
                });
            };
            let report = m.check_monodromy();
            match report.failure() {
                None => println!("monodromy axioms hold"),
                Some(what) => {
                    println!("monodromy axioms fail: {what}");
                    return Ok(Outcome::No);
                }
            }
        }
        Command::Filcmp { a, b, s, s2, e } => {
            let (d1, d2) = (fil_quotient_dim(a, b, e, s)?, fil_quotient_dim(a, b, e, s2)?);
            println!("dim at s = {s}: {d1}\ndim at s = {s2}: {d2}");
            return Ok(if d1 == d2 {
                println!("isomorphic");
                Outcome::Yes
            } else {
                println!("not isomorphic");
                Outcome::No
            });
        }
        Command::Gen { seed, p, e, r, s, rank, output } => {
            let params = RingParams::with_unit_c(p, e, r, s)?;
            let m = random_object_seeded(seed, &params, rank);
            write(&output, &serialize_document(&ModuleDocument::Phi(m)))?;
        }
        Command::Selftest { iterations, seed, suite } => {
            let seed = match seed {
                Some(s) => s,
                None => match std::env::var("SELFTEST_SEED") {
                    Ok(v) => v.trim().parse().map_err(|_| BreuilError::ParseError {
                        location: "SELFTEST_SEED".into(),
                        message: format!("not an integer: {v}"),
                    })?,
                    Err(_) => 0,
                },
            };
            let names: Vec<&str> = suite.iter().map(String::as_str).collect();
            let results = run_suites(&names, SuiteConfig { iterations, seed })?;
            for r in &results {
                println!("{r}");
            }
            let failed = results.iter().filter(|r| !r.passed()).count();
            println!("{} suites, {} failed (seed {seed}, {iterations} iterations)", results.len(), failed);
            if failed > 0 {
                return Ok(Outcome::No);
            }
        }
    }
    Ok(Outcome::Yes)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(Outcome::Yes) => ExitCode::SUCCESS,
        Ok(Outcome::No) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

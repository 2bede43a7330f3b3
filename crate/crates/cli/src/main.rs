use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use flagsum::cocycle::{pullback_group_cocycle, restrict, standard_cyclic_cocycle};
use flagsum::group::FiniteGroup;
use flagsum::io::{self, Document, ParcelDocument};
use flagsum::parcel::{from_group_spec, validate_parcel, GroupParcelSpec};
use flagsum::statesum::SumOptions;
use flagsum::walk::{random_walk, InvariantValue, WalkConfig};
use flagsum::{s3_join_fixture, Parcel, PartialCocycle, StratifiedTriangulation};

/// Defect Dijkgraaf-Witten invariants of knot / Seifert surface / 3-manifold triples.
#[derive(Parser, Debug)]
#[command(name = "flagsum", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check triangulation, parcel and cocycle documents.
    Validate {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
    },
    /// Compute the untwisted invariant, or the twisted one if a cocycle is given.
    Invariant {
        triangulation: PathBuf,
        parcel: PathBuf,
        cocycle: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Exact)]
        format: Format,
        #[arg(long)]
        parallel: bool,
    },
    /// Random walk through flag-like moves; fails if the invariant changes.
    Fuzz {
        triangulation: PathBuf,
        parcel: PathBuf,
        cocycle: Option<PathBuf>,
        #[arg(long, default_value_t = 200)]
        steps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Vertex-adding moves are skipped at this many vertices.
        #[arg(long, default_value_t = 10)]
        max_vertices: usize,
        #[arg(long, value_enum, default_value_t = Format::Exact)]
        format: Format,
        #[arg(long)]
        parallel: bool,
    },
    /// Write example documents.
    Make {
        #[command(subcommand)]
        what: Make,
        /// Output file; standard output if omitted.
        #[arg(short, long, global = true)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum Make {
    /// The join of two triangles, triangulating the unknot in S³.
    #[command(name = "s3-join")]
    S3Join,
    /// A parcel inside a cyclic or symmetric group.
    Parcel { family: Family, n: usize, kind: ParcelKind },
    /// Restricted pullback of the standard ℤ/n cocycle with parameter p to the full ℤ/n parcel.
    Cocycle { family: Family, n: usize, p: i64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Family {
    Zn,
    Sn,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ParcelKind {
    /// Every hom-set is the whole group.
    Full,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Exact,
    Decimal,
    Both,
}

/// Input problems exit with 2, failed checks with 1.
enum Outcome {
    Ok,
    Failed,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Failed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Validate { paths } => validate(&paths),
        Command::Invariant { triangulation, parcel, cocycle, format, parallel } => {
            let (t, p, alpha) = load_inputs(&triangulation, &parcel, cocycle.as_deref())?;
            let value = InvariantValue::compute(&t, &p, alpha.as_ref(), SumOptions { parallel })?;
            println!("{}", render(&value, format));
            Ok(Outcome::Ok)
        }
        Command::Fuzz { triangulation, parcel, cocycle, steps, seed, max_vertices, format, parallel } => {
            let (t, p, alpha) = load_inputs(&triangulation, &parcel, cocycle.as_deref())?;
            let cfg = WalkConfig { seed, steps, max_vertices, parallel, ..WalkConfig::default() };
            let walk = random_walk(&t, &p, alpha.as_ref(), &cfg)?;
            for entry in &walk.entries {
                let kind = entry.step.as_ref().map_or("START".to_string(), |m| m.to_string());
                println!("{kind} -> {}", render(&entry.value, format));
            }
            match walk.first_divergence() {
                None => Ok(Outcome::Ok),
                Some(i) => {
                    let m = walk.entries[i].step.as_ref().expect("the start cannot diverge");
                    eprintln!(
                        "invariant changed at step {i} ({m}): {} != {}",
                        walk.entries[i].value, walk.entries[0].value
                    );
                    Ok(Outcome::Failed)
                }
            }
        }
        Command::Make { what, output } => {
            let text = make(what)?;
            match output {
                Some(path) => fs::write(&path, text + "\n").with_context(|| format!("writing {}", path.display()))?,
                None => println!("{text}"),
            }
            Ok(Outcome::Ok)
        }
    }
}

fn render(value: &InvariantValue, format: Format) -> String {
    match format {
        Format::Exact => value.to_string(),
        Format::Decimal => value.decimal(),
        Format::Both => format!("{value} ≈ {}", value.decimal()),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn parse(path: &Path) -> Result<Document> {
    io::parse_document(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn load_inputs(
    t_path: &Path,
    p_path: &Path,
    a_path: Option<&Path>,
) -> Result<(StratifiedTriangulation, Parcel, Option<PartialCocycle>)> {
    let t = io::parse_triangulation(&read(t_path)?).with_context(|| format!("parsing {}", t_path.display()))?;
    let report = t.validate();
    if !report.is_empty() {
        bail!("{} is not a valid triangulation:\n{report}", t_path.display());
    }
    let p = io::parse_parcel(&read(p_path)?).with_context(|| format!("parsing {}", p_path.display()))?;
    let report = validate_parcel(&p);
    if !report.is_empty() {
        bail!("{} is not a valid parcel:\n{report}", p_path.display());
    }
    let alpha = match a_path {
        None => None,
        Some(path) => {
            let (alpha, missing) = io::parse_cocycle(&read(path)?, p.hom_sizes())
                .with_context(|| format!("parsing {} against {}", path.display(), p_path.display()))?;
            warn_missing(path, missing.len());
            Some(alpha)
        }
    };
    Ok((t, p, alpha))
}

fn warn_missing(path: &Path, missing: usize) {
    if missing > 0 {
        eprintln!("warning: {}: {missing} admissible entries missing, taken as exponent 0", path.display());
    }
}

fn validate(paths: &[PathBuf]) -> Result<Outcome> {
    let docs: Vec<(PathBuf, Document)> = paths.iter().map(|p| Ok((p.clone(), parse(p)?))).collect::<Result<_>>()?;
    let parcel = docs
        .iter()
        .find_map(|(path, d)| match d {
            Document::Parcel(doc) => Some(doc.to_parcel().with_context(|| format!("building {}", path.display()))),
            _ => None,
        })
        .transpose()?;
    let mut ok = true;
    for (path, doc) in &docs {
        let name = path.display();
        let report = match doc {
            Document::Triangulation(doc) => doc.to_triangulation()?.validate().to_string(),
            Document::Parcel(doc) => validate_parcel(&doc.to_parcel()?).to_string(),
            Document::Cocycle(doc) => match &parcel {
                None => {
                    eprintln!("warning: {name}: no parcel given, cocycle conditions not checked");
                    "ok".to_string()
                }
                Some(p) => {
                    let (alpha, missing) = doc.to_cocycle(p.hom_sizes())?;
                    warn_missing(path, missing.len());
                    alpha.check(p)?.to_string()
                }
            },
        };
        ok &= report == "ok";
        println!("{name}: {report}");
    }
    Ok(if ok { Outcome::Ok } else { Outcome::Failed })
}

fn group(family: Family, n: usize) -> Result<FiniteGroup> {
    match family {
        Family::Zn if n >= 1 => Ok(FiniteGroup::cyclic(n)),
        Family::Sn if (1..=5).contains(&n) => Ok(FiniteGroup::symmetric(n)),
        Family::Zn => bail!("ℤ/n needs n ≥ 1"),
        Family::Sn => bail!("S_n is supported for 1 ≤ n ≤ 5"),
    }
}

fn make(what: Make) -> Result<String> {
    Ok(match what {
        Make::S3Join => io::triangulation_to_json(&s3_join_fixture()),
        Make::Parcel { family, n, kind: ParcelKind::Full } => {
            io::to_json(&ParcelDocument::from_spec(&GroupParcelSpec::full(group(family, n)?)))
        }
        Make::Cocycle { family, n, p } => {
            if family != Family::Zn {
                bail!("standard cocycles are only defined for ℤ/n");
            }
            let parcel = from_group_spec(&GroupParcelSpec::full(group(family, n)?))?;
            let beta = pullback_group_cocycle(&parcel, &standard_cyclic_cocycle(n, p))?;
            let alpha = restrict(&beta, &parcel).map_err(|e| anyhow!("{e}"))?;
            io::cocycle_to_json(&alpha)
        }
    })
}

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use bnl_core::cobordism::{distinguishing_element, induced_on_homology, movie_map, Movie};
use bnl_core::complex::build::build_cube;
use bnl_core::complex::{homology, reduced_complex, simplify, verify_splitting, BuildOptions, Flavor};
use bnl_core::diagram::pd::DiagramSpec;
use bnl_core::lasagna::{cable_system, kunneth_mu};
use bnl_core::lee::{canonical_basis, canonical_image, coloring_decomposition, localized_homology, Orientation};
use bnl_core::torsion::{primitivity_check, torsion_order};
use bnl_core::{parse_pd, Diagram, Error, FrobeniusTheory, GradedComplex, Homology, HomologyClass};

/// Bar-Natan homology over F2[H] and related computations.
#[derive(Parser, Debug)]
#[command(name = "bnl", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct Common {
    /// Frobenius specialization: bn, h1 or sigma:l1,l2.
    #[arg(long, global = true, default_value = "bn")]
    theory: String,
    /// Refuse diagrams with more crossings than this.
    #[arg(long, global = true, default_value_t = bnl_core::complex::DEFAULT_MAX_CROSSINGS)]
    max_crossings: usize,
    /// Write JSON here instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Homology of a diagram as a bigraded module.
    Homology { diagram: PathBuf },
    /// Both reduced homologies at the diagram's basepoint.
    Reduced { diagram: PathBuf },
    /// Checks BN = red_x + red_1 and red_x = red_1 shifted.
    Splitting { diagram: PathBuf },
    /// Map induced on homology by a movie.
    MovieMap { movie: PathBuf },
    /// Torsion order of a class, or of every generator.
    Torsion {
        diagram: PathBuf,
        #[arg(long)]
        class: Option<PathBuf>,
    },
    /// Difference of two movie maps applied to a class, with its torsion order.
    Delta {
        first: PathBuf,
        second: PathBuf,
        /// Class in the start homology; defaults to the first generator in degree 0.
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Whether a class is divisible by H.
    Primitive {
        diagram: PathBuf,
        #[arg(long)]
        class: PathBuf,
    },
    /// Homology at H = 1 and its coloring decomposition.
    Localize { diagram: PathBuf },
    /// Canonical classes of a diagram, or their images under a movie.
    Canonical { input: PathBuf },
    /// Künneth accounting for the disjoint union of two diagrams.
    Kunneth { first: PathBuf, second: PathBuf },
    /// Stages of the cabling system of a framed link.
    LasagnaStage {
        kirby: PathBuf,
        /// Link drawn beside the handles.
        #[arg(long)]
        boundary: Option<PathBuf>,
        /// Handle coefficients, comma separated.
        #[arg(long, default_value = "", allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, default_value_t = 2)]
        r_max: usize,
    },
}

/// Failure kinds with their exit codes.
#[derive(Debug)]
enum Kind {
    Parse,
    Resource,
    Invariant,
    Refused,
}

impl Kind {
    fn of(e: &anyhow::Error) -> Kind {
        if let Some(e) = e.downcast_ref::<Error>() {
            return match e {
                Error::TooLarge { .. } => Kind::Resource,
                Error::Invariant(_) | Error::NotACycle => Kind::Invariant,
                Error::Unsupported(_) | Error::TorObstruction(_) | Error::FrameMismatch(_) => Kind::Refused,
                _ => Kind::Parse,
            };
        }
        // I/O and JSON failures are input problems too.
        Kind::Parse
    }

    fn code(&self) -> u8 {
        match self {
            Kind::Parse => 2,
            Kind::Resource => 3,
            Kind::Invariant => 4,
            Kind::Refused => 5,
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Kind::Parse => "parse",
            Kind::Resource => "resource",
            Kind::Invariant => "invariant",
            Kind::Refused => "refused",
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

/// PD text, or the JSON form when the file starts with `{`.
fn load_diagram(path: &Path) -> Result<Diagram> {
    let text = read(path)?;
    if text.trim_start().starts_with('{') {
        let spec: DiagramSpec = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        return Ok(Diagram::from_spec(&spec)?);
    }
    Ok(parse_pd(&text)?)
}

fn load_movie(path: &Path) -> Result<Movie> {
    let text = read(path)?;
    if text.trim_start().starts_with('{') {
        let spec = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        return Ok(Movie::from_spec(&spec)?);
    }
    Ok(Movie::parse(&text)?)
}

fn load_class(path: &Path) -> Result<HomologyClass> {
    serde_json::from_str(&read(path)?).with_context(|| format!("parsing class {}", path.display()))
}

fn is_movie(path: &Path) -> bool {
    path.extension().is_some_and(|e| e == "movie")
}

struct Ctx {
    theory: FrobeniusTheory,
    opts: BuildOptions,
}

impl Ctx {
    fn complex(&self, d: &Diagram) -> Result<GradedComplex> {
        Ok(simplify(&build_cube(d, &self.theory, &self.opts)?.complex))
    }

    fn guard(&self, d: &Diagram) -> Result<()> {
        if d.n_crossings() > self.opts.max_crossings {
            bail!(Error::TooLarge { crossings: d.n_crossings(), limit: self.opts.max_crossings });
        }
        Ok(())
    }

    fn bn_only(&self, verb: &str) -> Result<()> {
        if !self.theory.is_bar_natan() {
            bail!(Error::Unsupported(format!("{verb} is only defined for --theory bn")));
        }
        Ok(())
    }
}

/// Checks that a class fits the homology it is used in.
fn check_class(hom: &Homology, cls: &HomologyClass) -> Result<()> {
    let n = hom.gens_at(cls.h).len();
    if cls.coords.len() != n {
        bail!(Error::Parse(format!(
            "class has {} coordinates, homology in degree {} has {n} generators",
            cls.coords.len(),
            cls.h
        )));
    }
    Ok(())
}

fn map_json<T: Serialize>(m: &BTreeMap<i32, T>) -> Value {
    serde_json::to_value(m).unwrap_or(Value::Null)
}

fn run(cli: &Cli) -> Result<Value> {
    let theory: FrobeniusTheory = cli.common.theory.parse()?;
    let ctx = Ctx { theory, opts: BuildOptions { max_crossings: cli.common.max_crossings } };
    let out = match &cli.command {
        Command::Homology { diagram } => {
            let d = load_diagram(diagram)?;
            let module = homology(&ctx.complex(&d)?).module();
            serde_json::to_value(module)?
        }
        Command::Reduced { diagram } => {
            let d = load_diagram(diagram)?;
            ctx.guard(&d)?;
            let x = homology(&simplify(&reduced_complex(&d, Flavor::X, &ctx.theory)?)).module();
            let one = homology(&simplify(&reduced_complex(&d, Flavor::One, &ctx.theory)?)).module();
            json!({ "x": x, "one": one })
        }
        Command::Splitting { diagram } => {
            ctx.bn_only("splitting")?;
            let d = load_diagram(diagram)?;
            ctx.guard(&d)?;
            serde_json::to_value(verify_splitting(&d)?)?
        }
        Command::MovieMap { movie } => {
            let movie = load_movie(movie)?;
            let mm = movie_map(&movie, &ctx.theory, &ctx.opts)?;
            let (hs, ht) = (homology(&mm.source), homology(&mm.target));
            let f = induced_on_homology(&mm.map, &mm.source, &hs, &mm.target, &ht)?;
            json!({
                "euler": movie.euler(),
                "dots": movie.dots(),
                "source": hs.module(),
                "target": ht.module(),
                "h_shift": f.h_shift,
                "q_shift": f.q_shift,
                "blocks": map_json(&f.blocks),
            })
        }
        Command::Torsion { diagram, class } => {
            let d = load_diagram(diagram)?;
            let hom = homology(&ctx.complex(&d)?);
            match class {
                Some(p) => {
                    let cls = load_class(p)?;
                    check_class(&hom, &cls)?;
                    serde_json::to_value(torsion_order(&hom, &cls))?
                }
                None => {
                    let rows: Vec<Value> = hom
                        .degrees
                        .iter()
                        .flat_map(|(&h, deg)| (0..deg.gens.len()).map(move |k| (h, k)))
                        .map(|(h, k)| {
                            let r = torsion_order(&hom, &hom.generator(h, k));
                            json!({ "h": h, "index": k, "q": hom.gens_at(h)[k].q, "order": r.order })
                        })
                        .collect();
                    Value::Array(rows)
                }
            }
        }
        Command::Delta { first, second, input } => {
            let (m1, m2) = (load_movie(first)?, load_movie(second)?);
            let mm = movie_map(&m1, &ctx.theory, &ctx.opts)?;
            let src = homology(&mm.source);
            let cls = match input {
                Some(p) => load_class(p)?,
                None if !src.gens_at(0).is_empty() => src.generator(0, 0),
                None => bail!(Error::Unsupported("start homology has no generator in degree 0; pass --input".into())),
            };
            check_class(&src, &cls)?;
            let (delta, hom) = distinguishing_element(&m1, &m2, &cls, &ctx.theory, &ctx.opts)?;
            let order = torsion_order(&hom, &delta);
            let primitive = (!hom.is_zero(&delta)).then(|| primitivity_check(&mm.target, &hom, &delta).primitive);
            json!({ "class": delta, "zero": hom.is_zero(&delta), "order": order.order, "witness": order.witness, "primitive": primitive })
        }
        Command::Primitive { diagram, class } => {
            let d = load_diagram(diagram)?;
            let c = ctx.complex(&d)?;
            let hom = homology(&c);
            let cls = load_class(class)?;
            check_class(&hom, &cls)?;
            serde_json::to_value(primitivity_check(&c, &hom, &cls))?
        }
        Command::Localize { diagram } => {
            let d = load_diagram(diagram)?;
            ctx.guard(&d)?;
            let betti = localized_homology(&d)?;
            let decomposition = coloring_decomposition(&d)?;
            json!({
                "betti": map_json(&betti),
                "dimension": betti.values().sum::<usize>(),
                "expected": 1usize << d.n_components(),
                "decomposition": decomposition,
            })
        }
        Command::Canonical { input } => {
            if is_movie(input) {
                let movie = load_movie(input)?;
                let images = Orientation::all(movie.start.n_components())
                    .iter()
                    .map(|o| canonical_image(&movie, o, &ctx.opts))
                    .collect::<bnl_core::Result<Vec<_>>>()?;
                let agree = images.iter().all(|i| i.agrees());
                json!({ "images": images, "agree": agree })
            } else {
                let d = load_diagram(input)?;
                let b = canonical_basis(&d, &ctx.opts)?;
                let classes: Vec<Value> = b
                    .classes
                    .iter()
                    .map(|c| json!({ "orientation": c.orientation, "h": c.h, "state": c.state, "labels": c.labels }))
                    .collect();
                json!({ "classes": classes, "betti": map_json(&b.betti), "is_basis": b.is_basis })
            }
        }
        Command::Kunneth { first, second } => {
            let (a, b) = (load_diagram(first)?, load_diagram(second)?);
            let joint = bnl_core::diagram::disjoint_union(&a, &b);
            let ma = homology(&ctx.complex(&a)?).module();
            let mb = homology(&ctx.complex(&b)?).module();
            let mj = homology(&ctx.complex(&joint)?).module();
            serde_json::to_value(kunneth_mu(&ma, &mb, &mj)?)?
        }
        Command::LasagnaStage { kirby, boundary, alpha, r_max } => {
            ctx.bn_only("lasagna-stage")?;
            let k = load_diagram(kirby)?;
            let l = match boundary {
                Some(p) => load_diagram(p)?,
                None => Diagram::empty(),
            };
            let alpha: Vec<i64> = if alpha.trim().is_empty() {
                vec![0; k.n_components()]
            } else {
                alpha
                    .split(',')
                    .map(|s| s.trim().parse::<i64>().map_err(|e| anyhow!(Error::Parse(format!("alpha entry {s:?}: {e}")))))
                    .collect::<Result<_>>()?
            };
            let sys = cable_system(&k, &l, &alpha, *r_max, &ctx.opts)?;
            serde_json::to_value(sys.report())?
        }
    };
    Ok(out)
}

fn emit(value: &Value, output: Option<&Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(value)? + "\n";
    match output {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|v| emit(&v, cli.common.output.as_deref()));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let kind = Kind::of(&e);
            let err = json!({ "error": kind.name(), "message": format!("{e:#}") });
            println!("{}", serde_json::to_string_pretty(&err).unwrap());
            ExitCode::from(kind.code())
        }
    }
}

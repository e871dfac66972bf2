//! Command-line front end. Documents go to stdout as JSON (or DOT), and
//! diagnostics go to stderr.
//!
//! Stratum and cell ids in emitted documents are positions in the emitted
//! lists and only mean something within one run. Barcode type strings are
//! stable across runs.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::analysis::{is_essential, orbit_table, DEFAULT_BUDGET};
use crate::barcode::{CombinatorialBarcode, Endpoint};
use crate::complex::{build_complex, Simplex, SimplicialComplex};
use crate::error::{Error, Result};
use crate::fiber::{
    check_dimension_bound, emit_dot, fiber_complex_with_mode, fiber_dimension, fiber_homology,
    triangulate_fiber, FiberComplex, FiberMode,
};
use crate::field::FieldSpec;
use crate::morphism::{enumerate_morphism_classes, monodromy_map, BarMatching};
use crate::strata::{enumerate_filter_strata, image_records, FilterStratum, StratumMode};

/// On-disk complex format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexFile {
    pub maximal_simplices: Vec<Vec<u32>>,
}

pub fn parse_complex(json: &str) -> Result<SimplicialComplex> {
    let file: ComplexFile =
        serde_json::from_str(json).map_err(|e| Error::InvalidInput(e.to_string()))?;
    build_complex(&file.maximal_simplices)
}

pub fn load_complex(path: &Path) -> Result<SimplicialComplex> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
    parse_complex(&text)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    All,
    Interior,
    LowerStar,
}

impl Mode {
    fn strata(self) -> StratumMode {
        match self {
            Mode::All => StratumMode::All,
            Mode::Interior => StratumMode::Interior,
            Mode::LowerStar => StratumMode::LowerStar,
        }
    }

    // Interior types carry no zero/one symbol, so their fibers contain no
    // pinned strata anyway.
    fn fiber(self) -> FiberMode {
        match self {
            Mode::LowerStar => FiberMode::LowerStar,
            _ => FiberMode::All,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OutputFormat {
    Json,
    Dot,
}

/// Fully resolved settings for one invocation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub complex: PathBuf,
    pub field: FieldSpec,
    pub mode: Mode,
    pub format: OutputFormat,
    pub budget: u64,
    pub threads: usize,
}

#[derive(Debug, Parser)]
#[command(
    name = "phfiber",
    version,
    about = "Strata, fibers and monodromies of the persistence map"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: GlobalArgs,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// Which filters to consider.
    #[arg(long, global = true, value_enum, default_value_t = Mode::Interior)]
    mode: Mode,
    /// Prime characteristic of the coefficient field.
    #[arg(long, global = true, default_value_t = 2)]
    field: u32,
    /// Worker threads; defaults to PHFIBER_THREADS or the number of cores.
    #[arg(long, global = true, env = "PHFIBER_THREADS")]
    threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List filter strata as ordered set partitions.
    Strata { complex: PathBuf },
    /// Barcode strata of the image, one record per combinatorial type.
    Image { complex: PathBuf },
    /// Cells, faces and vertices of the fiber over a barcode type.
    Fiber {
        complex: PathBuf,
        #[arg(long)]
        barcode: String,
        /// Write the 1-skeleton as a DOT graph instead of JSON.
        #[arg(long)]
        emit_dot: bool,
    },
    /// Betti numbers of the fiber over a barcode type.
    Homology {
        complex: PathBuf,
        #[arg(long)]
        barcode: String,
    },
    /// Homotopy classes of barcode morphisms between two types.
    Morphisms {
        complex: PathBuf,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    /// Monodromy map between the fibers over two types.
    Monodromy {
        complex: PathBuf,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        /// Position of the class in the `morphisms` listing.
        #[arg(long, default_value_t = 0)]
        class: usize,
    },
    /// Check fiber dimension <= bounded deficit <= codimension on every type.
    CheckBounds { complex: PathBuf },
    /// Search for a removable subset.
    Essential {
        complex: PathBuf,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Orbits of the automorphism group on the cells of a fiber.
    Symmetries {
        complex: PathBuf,
        #[arg(long)]
        barcode: String,
    },
}

impl Command {
    fn complex(&self) -> &Path {
        match self {
            Command::Strata { complex }
            | Command::Image { complex }
            | Command::Fiber { complex, .. }
            | Command::Homology { complex, .. }
            | Command::Morphisms { complex, .. }
            | Command::Monodromy { complex, .. }
            | Command::CheckBounds { complex }
            | Command::Essential { complex, .. }
            | Command::Symmetries { complex, .. } => complex,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellDocument {
    pub stratum: FilterStratum,
    pub dim: usize,
    pub vertices: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexDocument {
    pub cell: usize,
    pub rank_vector: Vec<Endpoint>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberDocument {
    pub barcode_type: CombinatorialBarcode,
    pub dimension: usize,
    pub cells: Vec<CellDocument>,
    pub face_relation: Vec<(usize, usize)>,
    pub gap_shapes: Vec<Vec<usize>>,
    pub vertices: Vec<VertexDocument>,
}

impl FiberDocument {
    pub fn new(fc: &FiberComplex) -> Self {
        FiberDocument {
            barcode_type: fc.barcode_type.clone(),
            dimension: fiber_dimension(fc),
            cells: fc
                .cells
                .iter()
                .map(|c| CellDocument {
                    stratum: c.stratum.clone(),
                    dim: c.dim,
                    vertices: c.vertices.clone(),
                })
                .collect(),
            face_relation: fc.face_relation.clone(),
            gap_shapes: fc.cells.iter().map(|c| c.gap_shape.clone()).collect(),
            vertices: fc
                .vertices
                .iter()
                .map(|v| VertexDocument {
                    cell: v.cell,
                    rank_vector: v.rank_vector.clone(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismDocument {
    pub class: usize,
    pub index: Vec<(Endpoint, Vec<Endpoint>)>,
    pub matching: BarMatching,
    /// Images of the source ranks `1..m`.
    pub representative: Vec<Endpoint>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonodromyDocument {
    pub source: CombinatorialBarcode,
    pub target: CombinatorialBarcode,
    pub class: usize,
    pub representative: Vec<Endpoint>,
    pub vertex_map: Vec<usize>,
    pub cell_map: Vec<usize>,
    pub collapsed_cells: Vec<usize>,
    pub surviving_cells: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EssentialityDocument {
    pub essential: bool,
    pub witness: Option<Vec<Simplex>>,
    pub candidates_checked: u64,
}

/// What a run produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandOutput {
    pub status: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `argv` (program name first) and runs one subcommand. Exit status is
/// 0 on success, 1 on domain errors and 2 on usage errors.
pub fn run_command<I, T>(argv: I) -> CommandOutput
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                CommandOutput {
                    status: 2,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                CommandOutput {
                    status: 0,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let mut stderr = String::new();
    match execute(&cli, &mut stderr) {
        Ok(stdout) => CommandOutput {
            status: 0,
            stdout,
            stderr,
        },
        Err(e) => {
            stderr.push_str(&format!("error: {e}\n"));
            CommandOutput {
                status: 1,
                stdout: String::new(),
                stderr,
            }
        }
    }
}

fn config(cli: &Cli) -> Result<RunConfig> {
    let threads = match cli.global.threads {
        Some(0) => return Err(Error::InvalidInput("--threads must be at least 1".into())),
        Some(n) => n,
        None => std::thread::available_parallelism()
            .map(|n| n.get())
            .unwrap_or(1),
    };
    let (format, budget) = match &cli.command {
        Command::Fiber { emit_dot: true, .. } => (OutputFormat::Dot, DEFAULT_BUDGET),
        Command::Essential { budget, .. } => (OutputFormat::Json, *budget),
        _ => (OutputFormat::Json, DEFAULT_BUDGET),
    };
    Ok(RunConfig {
        complex: cli.command.complex().to_path_buf(),
        field: FieldSpec::new(cli.global.field)?,
        mode: cli.global.mode,
        format,
        budget,
        threads,
    })
}

fn execute(cli: &Cli, stderr: &mut String) -> Result<String> {
    let cfg = config(cli)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| Error::Internal(e.to_string()))?;
    pool.install(|| dispatch(&cli.command, &cfg, stderr))
}

fn barcode(s: &str) -> Result<CombinatorialBarcode> {
    s.parse()
}

fn json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::Internal(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn dispatch(cmd: &Command, cfg: &RunConfig, stderr: &mut String) -> Result<String> {
    let k = load_complex(&cfg.complex)?;
    let field = cfg.field;
    match cmd {
        Command::Strata { .. } => json(&enumerate_filter_strata(&k, cfg.mode.strata())?),
        Command::Image { .. } => {
            let (strata, records) = image_records(&k, cfg.mode.strata(), field)?;
            let top = records.iter().filter(|r| r.codim == 0).count();
            stderr.push_str(&format!(
                "{} filter strata, {} barcode strata ({} top-dimensional)\n",
                strata.len(),
                records.len(),
                top
            ));
            json(&records)
        }
        Command::Fiber { barcode: t, .. } => {
            let fc = fiber_complex_with_mode(&k, &barcode(t)?, field, cfg.mode.fiber())?;
            match cfg.format {
                OutputFormat::Dot => Ok(emit_dot(&fc)),
                OutputFormat::Json => json(&FiberDocument::new(&fc)),
            }
        }
        Command::Homology { barcode: t, .. } => {
            let fc = fiber_complex_with_mode(&k, &barcode(t)?, field, cfg.mode.fiber())?;
            let tf = triangulate_fiber(&fc)?;
            json(&fiber_homology(&tf, field))
        }
        Command::Morphisms { from, to, .. } => {
            let docs: Vec<MorphismDocument> =
                enumerate_morphism_classes(&barcode(from)?, &barcode(to)?)
                    .into_iter()
                    .enumerate()
                    .map(|(i, c)| MorphismDocument {
                        class: i,
                        index: c.index(),
                        matching: c.matching.clone(),
                        representative: c.representative.rank_images().to_vec(),
                    })
                    .collect();
            json(&docs)
        }
        Command::Monodromy {
            from, to, class, ..
        } => {
            let (t, t2) = (barcode(from)?, barcode(to)?);
            let classes = enumerate_morphism_classes(&t, &t2);
            let c = classes.get(*class).ok_or_else(|| {
                Error::InvalidInput(format!(
                    "class {class} requested but there are {} classes from {t} to {t2}",
                    classes.len()
                ))
            })?;
            let fc = fiber_complex_with_mode(&k, &t, field, cfg.mode.fiber())?;
            let fc2 = fiber_complex_with_mode(&k, &t2, field, cfg.mode.fiber())?;
            let m = monodromy_map(&fc, &fc2, c)?;
            json(&MonodromyDocument {
                source: m.source.clone(),
                target: m.target.clone(),
                class: *class,
                representative: m.representative.rank_images().to_vec(),
                vertex_map: m.vertex_map,
                cell_map: m.cell_map,
                collapsed_cells: m.collapsed_cells,
                surviving_cells: m.surviving_cells,
            })
        }
        Command::CheckBounds { .. } => {
            let (_, records) = image_records(&k, cfg.mode.strata(), field)?;
            let report = check_dimension_bound(&k, &records, field)?;
            if !report.all_pass {
                let bad = report.rows.iter().filter(|r| !r.within_bound).count();
                stderr.push_str(&format!(
                    "{bad} barcode strata violate the dimension bound\n"
                ));
            }
            json(&report)
        }
        Command::Essential { .. } => {
            let r = is_essential(&k, field, cfg.budget)?;
            json(&EssentialityDocument {
                essential: r.essential,
                witness: r
                    .witness
                    .map(|w| w.subset.iter().map(|&s| k.simplex(s).clone()).collect()),
                candidates_checked: r.candidates_checked,
            })
        }
        Command::Symmetries { barcode: t, .. } => {
            let fc = fiber_complex_with_mode(&k, &barcode(t)?, field, cfg.mode.fiber())?;
            json(&orbit_table(&k, &fc)?)
        }
    }
}

//! Command-line driver: single files and batches.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use clap::Parser;
use log::{debug, info};

use crate::circuit::Circuit;
use crate::device::{load_calibration, load_topology, Calibration, CouplingGraph};
use crate::exec::{map_items, with_workers, Execution};
use crate::layout::{LayoutMap, Method};
use crate::mapper::map;
use crate::qasm::{emit_qasm, parse_named};
use crate::route::{compare, CompareReport};

#[derive(Debug, Clone, Parser)]
#[command(name = "qlayout", version, about = "Initial qubit layout for OpenQASM 2.0 programs")]
pub struct RunConfig {
    /// OpenQASM files or directories of `.qasm` files.
    #[arg(long, short, required = true, num_args = 1..)]
    pub input: Vec<PathBuf>,
    /// Device topology JSON, or a built-in name (`kolkata`, `manhattan`).
    #[arg(long, short)]
    pub device: String,
    /// Calibration JSON; errors default to zero without one.
    #[arg(long)]
    pub calibration: Option<PathBuf>,
    #[arg(long, short, value_enum, default_value_t = Method::Gsf)]
    pub method: Method,
    /// Remapped QASM: a file for a single input, otherwise a directory.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Layout JSON: a file for a single input, otherwise a directory.
    #[arg(long)]
    pub layout_out: Option<PathBuf>,
    /// Metrics JSON report: a file for a single input, otherwise a directory.
    #[arg(long)]
    pub metrics_out: Option<PathBuf>,
    /// Also route and report the other two methods next to the identity baseline.
    #[arg(long)]
    pub compare_baselines: bool,
    /// Count each routed swap as three gates in the volume.
    #[arg(long)]
    pub decompose_swaps: bool,
    /// Worker threads for batch mode.
    #[arg(long)]
    pub workers: Option<usize>,
    #[arg(long, short)]
    pub verbose: bool,
}

/// Size buckets by original gate count.
pub const GROUP_BOUNDS: [usize; 9] = [1_000, 5_000, 10_000, 20_000, 30_000, 40_000, 100_000, 250_000, 1_000_000];

/// 1-based group number for a circuit with `gates` gates.
pub fn size_group(gates: usize) -> usize {
    GROUP_BOUNDS.iter().position(|&b| gates <= b).unwrap_or(GROUP_BOUNDS.len()) + 1
}

#[derive(Debug, Clone)]
pub struct FileOutcome {
    pub path: PathBuf,
    pub gates: usize,
    pub group: usize,
    pub mapping_time: Duration,
    pub layout_tag: String,
    pub report: Option<CompareReport>,
}

#[derive(Debug, Default)]
pub struct RunSummary {
    pub succeeded: Vec<FileOutcome>,
    pub failed: Vec<(PathBuf, String)>,
}

impl RunSummary {
    pub fn exit_code(&self) -> i32 {
        i32::from(!self.failed.is_empty())
    }

    pub fn total_mapping_time(&self) -> Duration {
        self.succeeded.iter().map(|o| o.mapping_time).sum()
    }

    /// One line per non-empty size group: count, mapping time and, where
    /// metrics were collected, the mean ratios of the chosen method.
    pub fn group_table(&self, method: Method) -> String {
        let mut out = String::from("group  circuits  map-time(s)  mean depth×  mean volume×  mean Δswaps\n");
        for g in 1..=GROUP_BOUNDS.len() + 1 {
            let members: Vec<_> = self.succeeded.iter().filter(|o| o.group == g).collect();
            if members.is_empty() {
                continue;
            }
            let time: f64 = members.iter().map(|o| o.mapping_time.as_secs_f64()).sum();
            let rows: Vec<_> = members
                .iter()
                .filter_map(|o| o.report.as_ref())
                .filter_map(|r| r.rows.iter().find(|row| row.label == method.as_str()))
                .collect();
            let mean = |f: &dyn Fn(&crate::route::CompareRow) -> f64| {
                if rows.is_empty() {
                    "-".to_string()
                } else {
                    format!("{:.3}", rows.iter().map(|r| f(r)).sum::<f64>() / rows.len() as f64)
                }
            };
            out.push_str(&format!(
                "G{g:<5} {:>8}  {time:>11.3}  {:>11}  {:>12}  {:>11}\n",
                members.len(),
                mean(&|r| r.depth_ratio),
                mean(&|r| r.volume_ratio),
                mean(&|r| r.swap_delta as f64),
            ));
        }
        out
    }
}

/// Expands directories into their `.qasm` files, sorted by path.
pub fn collect_inputs(inputs: &[PathBuf]) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for p in inputs {
        if p.is_dir() {
            let mut found: Vec<PathBuf> = fs::read_dir(p)
                .with_context(|| format!("reading directory {}", p.display()))?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|f| f.is_file() && f.extension().is_some_and(|x| x == "qasm"))
                .collect();
            found.sort();
            files.extend(found);
        } else if p.is_file() {
            files.push(p.clone());
        } else {
            bail!("input {} does not exist", p.display());
        }
    }
    Ok(files)
}

fn load_device(spec: &str) -> Result<CouplingGraph> {
    let path = Path::new(spec);
    if path.exists() {
        return load_topology(path).with_context(|| format!("loading device {spec}"));
    }
    CouplingGraph::builtin(spec).with_context(|| format!("device {spec} is neither a file nor a built-in"))
}

/// Where an artifact for `input` goes: `target` itself for a single input,
/// `target/<stem><suffix>` in batch mode.
fn artifact_path(target: &Path, input: &Path, batch: bool, suffix: &str) -> PathBuf {
    if batch {
        let stem = input.file_stem().map_or_else(|| "circuit".into(), |s| s.to_string_lossy().into_owned());
        target.join(format!("{stem}{suffix}"))
    } else {
        target.to_path_buf()
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
    }
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

struct Job<'a> {
    config: &'a RunConfig,
    graph: &'a CouplingGraph,
    cal: &'a Calibration,
    batch: bool,
}

fn process_file(ctx: &Job<'_>, path: &Path) -> Result<FileOutcome> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let name = path.file_name().map_or_else(String::new, |s| s.to_string_lossy().into_owned());
    let circuit = parse_named(&text, &name).with_context(|| format!("parsing {}", path.display()))?;
    let gates = circuit.gates.len();

    let start = Instant::now();
    let layout = map(&circuit, ctx.graph, ctx.cal, ctx.config.method)?;
    let mapping_time = start.elapsed();
    debug!("{name}: {} qubits placed in {:.3}s ({})", layout.len(), mapping_time.as_secs_f64(), layout.tag());

    let remapped = emit_qasm(&circuit, &layout, ctx.graph.width())?;
    if let Some(out) = &ctx.config.output {
        write_file(&artifact_path(out, path, ctx.batch, ".qasm"), &remapped)?;
    }
    let layout_json = layout.to_json(ctx.graph.name());
    match &ctx.config.layout_out {
        Some(out) => write_file(&artifact_path(out, path, ctx.batch, ".layout.json"), &layout_json)?,
        None if ctx.config.output.is_none() && !ctx.batch => print!("{remapped}"),
        None => {}
    }

    let report = if ctx.config.metrics_out.is_some() || ctx.config.compare_baselines {
        let report = metrics_report(ctx, &circuit, &layout)?;
        if let Some(out) = &ctx.config.metrics_out {
            write_file(&artifact_path(out, path, ctx.batch, ".metrics.json"), &report.to_json())?;
        }
        if ctx.config.compare_baselines && !ctx.batch {
            eprint!("{}", report.to_table());
        }
        Some(report)
    } else {
        None
    };

    Ok(FileOutcome {
        path: path.to_path_buf(),
        gates,
        group: size_group(gates),
        mapping_time,
        layout_tag: layout.tag(),
        report,
    })
}

fn metrics_report(ctx: &Job<'_>, circuit: &Circuit, layout: &LayoutMap) -> Result<CompareReport> {
    let method = ctx.config.method;
    let mut layouts = vec![(method.as_str().to_string(), layout.clone())];
    if ctx.config.compare_baselines {
        for other in Method::ALL.into_iter().filter(|&m| m != method) {
            layouts.push((other.as_str().to_string(), map(circuit, ctx.graph, ctx.cal, other)?));
        }
    }
    Ok(compare(
        circuit,
        &layouts,
        ctx.graph,
        "identity",
        ctx.config.decompose_swaps,
        Execution::Sequential,
    )?)
}

/// Runs the configured workflow. Per-file failures are collected in the
/// summary; device and calibration problems abort the run.
pub fn run(config: &RunConfig) -> Result<RunSummary> {
    let graph = load_device(&config.device)?;
    let cal = load_calibration(config.calibration.as_deref(), &graph).context("loading calibration")?;
    let files = collect_inputs(&config.input)?;
    let batch = files.len() > 1 || config.input.iter().any(|p| p.is_dir());
    let ctx = Job {
        config,
        graph: &graph,
        cal: &cal,
        batch,
    };

    let results = with_workers(config.workers, || {
        map_items(Execution::Parallel, &files, |f| process_file(&ctx, f))
    });

    let mut summary = RunSummary::default();
    for (file, result) in files.iter().zip(results) {
        match result {
            Ok(outcome) => summary.succeeded.push(outcome),
            Err(e) => {
                eprintln!("error: {}: {e:#}", file.display());
                summary.failed.push((file.clone(), format!("{e:#}")));
            }
        }
    }
    if batch {
        info!(
            "{} of {} circuits mapped with {} in {:.3}s total mapping time",
            summary.succeeded.len(),
            files.len(),
            config.method,
            summary.total_mapping_time().as_secs_f64()
        );
        eprint!("{}", summary.group_table(config.method));
        eprintln!(
            "total mapping time: {:.3}s ({} ok, {} failed)",
            summary.total_mapping_time().as_secs_f64(),
            summary.succeeded.len(),
            summary.failed.len()
        );
    }
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_boundaries() {
        assert_eq!(size_group(1), 1);
        assert_eq!(size_group(1000), 1);
        assert_eq!(size_group(1001), 2);
        assert_eq!(size_group(5000), 2);
        assert_eq!(size_group(40_001), 7);
        assert_eq!(size_group(1_000_000), 9);
        assert_eq!(size_group(1_000_001), 10);
    }

    #[test]
    fn artifact_paths() {
        let p = artifact_path(Path::new("out"), Path::new("dir/foo.qasm"), true, ".layout.json");
        assert_eq!(p, PathBuf::from("out/foo.layout.json"));
        let p = artifact_path(Path::new("x.json"), Path::new("foo.qasm"), false, ".layout.json");
        assert_eq!(p, PathBuf::from("x.json"));
    }

    #[test]
    fn bad_method_is_rejected_by_the_parser() {
        let err = RunConfig::try_parse_from(["qlayout", "--input", "a.qasm", "--device", "kolkata", "--method", "bogus"])
            .unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }
}

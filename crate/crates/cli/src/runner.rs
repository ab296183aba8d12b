//! Executes run, sweep, resource and depth requests and serializes results.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use daqc_core::channels::{noisy_daqc_evolve, NoiseConfig};
use daqc_core::digital::{digital_cnots_per_step, digital_evolve, noisy_digital_evolve};
use daqc_core::evolve::{exact_trajectory, uniform_times};
use daqc_core::model::{build_spin_boson, HHParams};
use daqc_core::observables::{double_occupation, fidelity, phonon_number, QuantumState};
use daqc_core::schedule::{circuit_depth, daqc_evolve, schedule_compile, Depth};
use daqc_core::synthesis::{resource_table, ResourceEstimate};
use daqc_core::tensor::{DensityMatrix, HilbertSpace, StateVector};
use daqc_core::{Error, Result};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{Evolution, Metric, RunConfig, SweepConfig, SweepParam};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// Time series of one run. Site columns are numbered from 1.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunOutput {
    pub times: Vec<f64>,
    pub fidelity: Vec<f64>,
    pub double_occ: Vec<Vec<f64>>,
    pub total_double_occ: Vec<f64>,
    pub phonon_number: Vec<f64>,
}

impl RunOutput {
    pub fn columns(&self) -> Vec<String> {
        let mut cols = vec!["t".to_string(), "fidelity".to_string()];
        cols.extend((1..=self.double_occ.len()).map(|j| format!("double_occ_site{j}")));
        cols.push("total_double_occ".into());
        cols.push("phonon_number".into());
        cols
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns().join(",");
        out.push('\n');
        for i in 0..self.times.len() {
            let mut row = vec![self.times[i], self.fidelity[i]];
            row.extend(self.double_occ.iter().map(|d| d[i]));
            row.push(self.total_double_occ[i]);
            row.push(self.phonon_number[i]);
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Io(e.to_string()))
    }

    fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Csv => Ok(self.to_csv()),
            Format::Json => self.to_json(),
        }
    }
}

fn check_finite(values: &[f64], what: &str) -> Result<()> {
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numerical(format!("{what} series contains non-finite values")));
    }
    Ok(())
}

fn series<S: QuantumState>(space: &HilbertSpace, reference: &[StateVector], states: &[S], times: Vec<f64>) -> Result<RunOutput> {
    let n_sites = space.n_modes();
    let fid = reference
        .iter()
        .zip(states)
        .map(|(r, s)| fidelity(r, s))
        .collect::<Result<Vec<_>>>()?;
    let double_occ = (0..n_sites)
        .map(|j| states.iter().map(|s| double_occupation(s, space, j)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let total = (0..states.len()).map(|i| double_occ.iter().map(|d| d[i]).sum()).collect();
    let phonons = states.iter().map(|s| phonon_number(s, space)).collect::<Result<Vec<_>>>()?;
    let out = RunOutput {
        times,
        fidelity: fid,
        double_occ,
        total_double_occ: total,
        phonon_number: phonons,
    };
    check_finite(&out.fidelity, "fidelity")?;
    check_finite(&out.phonon_number, "phonon number")?;
    Ok(out)
}

fn evolve(
    params: &HHParams,
    evolution: Evolution,
    psi0: &StateVector,
    t_final: f64,
    steps: usize,
    samples: Option<usize>,
    noise: Option<&NoiseConfig>,
) -> Result<RunOutput> {
    let space = params.space()?;
    let h = build_spin_boson(params)?.total();
    match (evolution, noise) {
        (Evolution::Exact, _) => {
            let times = uniform_times(t_final, samples.unwrap_or(steps));
            let reference = exact_trajectory(&h, psi0, &times)?;
            let sim = exact_trajectory(&h, psi0, &times)?;
            series(&space, &reference.states, &sim.states, times)
        }
        (Evolution::Daqc | Evolution::Digital, None) => {
            let sim = if evolution == Evolution::Daqc {
                daqc_evolve(params, psi0, t_final, steps)?
            } else {
                digital_evolve(params, psi0, t_final, steps)?
            };
            let reference = exact_trajectory(&h, psi0, &sim.times)?;
            series(&space, &reference.states, &sim.states, sim.times)
        }
        (Evolution::Daqc | Evolution::Digital, Some(cfg)) => {
            let rho0 = DensityMatrix::from_pure(psi0);
            let sim = if evolution == Evolution::Daqc {
                noisy_daqc_evolve(params, &rho0, t_final, steps, cfg)?
            } else {
                noisy_digital_evolve(params, &rho0, t_final, steps, cfg)?
            };
            let reference = exact_trajectory(&h, psi0, &sim.times)?;
            series(&space, &reference.states, &sim.states, sim.times)
        }
    }
}

/// Evolves the configured state and measures every observable against exact
/// evolution at the same times.
pub fn run(cfg: &RunConfig) -> Result<RunOutput> {
    cfg.validate()?;
    let params = cfg.params();
    let psi0 = StateVector::product(&params.space()?, &cfg.initial_state)?;
    evolve(
        &params,
        cfg.evolution,
        &psi0,
        cfg.t_final,
        cfg.steps,
        cfg.samples,
        cfg.noise.as_ref(),
    )
}

#[derive(Serialize)]
struct Manifest<'a, C: Serialize> {
    tool: &'static str,
    version: &'static str,
    core_version: &'static str,
    config: &'a C,
    rows: usize,
    columns: Vec<String>,
    data_file: String,
    elapsed_seconds: f64,
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Rendered data file plus what its manifest records about it.
struct Rendered {
    data: String,
    rows: usize,
    columns: Vec<String>,
}

fn write_with_manifest<C: Serialize>(
    out_dir: &Path,
    stem: &str,
    format: Format,
    rendered: Rendered,
    config: &C,
    started: Instant,
) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(out_dir).map_err(|e| Error::Io(format!("{}: {e}", out_dir.display())))?;
    let data_path = out_dir.join(format!("{stem}.{}", format.extension()));
    write_file(&data_path, &rendered.data)?;
    let manifest = Manifest {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        core_version: daqc_core::VERSION,
        config,
        rows: rendered.rows,
        columns: rendered.columns,
        data_file: data_path.file_name().unwrap_or_default().to_string_lossy().into_owned(),
        elapsed_seconds: started.elapsed().as_secs_f64(),
    };
    let manifest_path = out_dir.join(format!("{stem}.manifest.json"));
    let text = serde_json::to_string_pretty(&manifest).map_err(|e| Error::Io(e.to_string()))?;
    write_file(&manifest_path, &text)?;
    Ok(vec![data_path, manifest_path])
}

/// Runs `cfg` and writes `<output>.<ext>` plus `<output>.manifest.json`.
pub fn run_to_dir(cfg: &RunConfig, out_dir: &Path, format: Format) -> Result<Vec<PathBuf>> {
    let started = Instant::now();
    let out = run(cfg)?;
    let rendered = Rendered {
        data: out.render(format)?,
        rows: out.times.len(),
        columns: out.columns(),
    };
    write_with_manifest(out_dir, &cfg.output, format, rendered, cfg, started)
}

/// One heatmap cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepCell {
    pub axis1: f64,
    pub axis2: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepOutput {
    pub axis1: SweepParam,
    pub axis2: SweepParam,
    pub metric: Metric,
    /// Row-major: `axis1` is the slow index.
    pub cells: Vec<SweepCell>,
}

impl SweepOutput {
    pub fn columns(&self) -> Vec<String> {
        vec![
            self.axis1.name().to_string(),
            self.axis2.name().to_string(),
            self.metric.name().to_string(),
        ]
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns().join(",");
        out.push('\n');
        for c in &self.cells {
            let _ = writeln!(out, "{},{},{}", c.axis1, c.axis2, c.value);
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Io(e.to_string()))
    }

    pub fn min_value(&self) -> f64 {
        self.cells.iter().map(|c| c.value).fold(f64::INFINITY, f64::min)
    }

    fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Csv => Ok(self.to_csv()),
            Format::Json => self.to_json(),
        }
    }
}

fn sweep_cell(cfg: &SweepConfig, v1: f64, v2: f64) -> Result<SweepCell> {
    let params = cfg.cell_model(v1, v2).params();
    let psi0 = StateVector::product(&params.space()?, &cfg.initial_state)?;
    let out = evolve(&params, cfg.evolution, &psi0, cfg.t_final, cfg.steps, None, None)?;
    let value = match cfg.metric {
        Metric::FinalFidelity => *out.fidelity.last().expect("trajectory has at least one state"),
        Metric::MinFidelity => out.fidelity.iter().copied().fold(f64::INFINITY, f64::min),
    };
    Ok(SweepCell {
        axis1: v1,
        axis2: v2,
        value,
    })
}

/// Evaluates every grid cell in parallel on the current rayon pool. The
/// result order does not depend on scheduling.
pub fn sweep(cfg: &SweepConfig) -> Result<SweepOutput> {
    cfg.validate()?;
    let grid: Vec<(f64, f64)> = cfg
        .axis1
        .values()
        .into_iter()
        .flat_map(|a| cfg.axis2.values().into_iter().map(move |b| (a, b)))
        .collect();
    let cells = grid
        .par_iter()
        .map(|&(a, b)| sweep_cell(cfg, a, b))
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepOutput {
        axis1: cfg.axis1.param,
        axis2: cfg.axis2.param,
        metric: cfg.metric,
        cells,
    })
}

pub fn sweep_to_dir(cfg: &SweepConfig, out_dir: &Path, format: Format) -> Result<Vec<PathBuf>> {
    let started = Instant::now();
    let out = sweep(cfg)?;
    let rendered = Rendered {
        data: out.render(format)?,
        rows: out.cells.len(),
        columns: out.columns(),
    };
    write_with_manifest(out_dir, &cfg.output, format, rendered, cfg, started)
}

/// Mode truncations covered by the resource report.
pub const RESOURCE_LEVELS: [usize; 4] = [2, 4, 8, 16];

/// Depth and CNOT scaling of both approaches at one mode truncation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScalingRow {
    pub levels: usize,
    pub daqc_depth_per_step: usize,
    pub daqc_depth_total: usize,
    pub quoted_depth_total: usize,
    pub digital_cnots_per_step: usize,
    pub digital_cnots_total: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResourceReport {
    pub rows: usize,
    pub cols: usize,
    pub steps: usize,
    pub gates: Vec<ResourceEstimate>,
    pub scaling: Vec<ScalingRow>,
}

impl ResourceReport {
    pub const SCALING_HEADER: &'static str =
        "levels,daqc_depth_per_step,daqc_depth_total,quoted_depth_total,digital_cnots_per_step,digital_cnots_total";

    pub fn gates_csv(&self) -> String {
        let mut out = format!("{}\n", ResourceEstimate::CSV_HEADER);
        for g in &self.gates {
            out.push_str(&g.csv_row());
            out.push('\n');
        }
        out
    }

    pub fn scaling_csv(&self) -> String {
        let mut out = format!("{}\n", Self::SCALING_HEADER);
        for s in &self.scaling {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                s.levels,
                s.daqc_depth_per_step,
                s.daqc_depth_total,
                s.quoted_depth_total,
                s.digital_cnots_per_step,
                s.digital_cnots_total
            );
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Io(e.to_string()))
    }
}

fn probe_params(rows: usize, cols: usize, levels: usize) -> HHParams {
    HHParams {
        omega0: 1.0,
        u: 1.0,
        k: 1.0,
        g: 1.0,
        rows,
        cols,
        boson_levels: levels,
    }
}

/// CNOT table of the bosonic gates and depth figures for an `rows x cols`
/// lattice run for `steps` Trotter steps.
pub fn resources(rows: usize, cols: usize, steps: usize, theta: f64) -> Result<ResourceReport> {
    let depth = circuit_depth(rows, cols, steps)?;
    let gates = resource_table(&RESOURCE_LEVELS, theta)?;
    let scaling = RESOURCE_LEVELS
        .iter()
        .map(|&n| {
            let per_step = digital_cnots_per_step(&probe_params(rows, cols, n))?;
            Ok(ScalingRow {
                levels: n,
                daqc_depth_per_step: depth.per_step,
                daqc_depth_total: depth.total,
                quoted_depth_total: depth.quoted_total,
                digital_cnots_per_step: per_step,
                digital_cnots_total: per_step * steps,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ResourceReport {
        rows,
        cols,
        steps,
        gates,
        scaling,
    })
}

/// Depth figures plus the layer count of an actually compiled schedule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DepthReport {
    pub rows: usize,
    pub cols: usize,
    pub steps: usize,
    pub per_step: usize,
    pub total: usize,
    pub quoted_total: usize,
    pub compiled_total: usize,
}

impl DepthReport {
    pub const CSV_HEADER: &'static str = "rows,cols,steps,per_step,total,quoted_total,compiled_total";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.rows, self.cols, self.steps, self.per_step, self.total, self.quoted_total, self.compiled_total
        )
    }
}

pub fn depth(rows: usize, cols: usize, steps: usize) -> Result<DepthReport> {
    let Depth {
        per_step,
        total,
        quoted_total,
    } = circuit_depth(rows, cols, steps)?;
    let compiled = schedule_compile(&probe_params(rows, cols, 2), 1.0, steps.max(1))?;
    let compiled_total = if steps == 0 { 0 } else { compiled.depth() };
    Ok(DepthReport {
        rows,
        cols,
        steps,
        per_step,
        total,
        quoted_total,
        compiled_total,
    })
}

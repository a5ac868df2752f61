//! Iteration-count benchmark harness.
//!
//! Two benchmark families, one magic and one antimagic: super vertex-magic
//! total labellings of complete graphs K_n, and vertex-antimagic edge
//! labellings of the Cartesian powers of the three-vertex path. Each point
//! runs a batch of independently seeded anneals and records exact iteration
//! counts, which feed a least-squares fit: exponential in n for the complete
//! graphs, linear in the edge count for the path powers.

use thiserror::Error;

use crate::anneal::{multi_start, AnnealError, AnnealParams};
use crate::generators::{self, GeneratorError};
use crate::graph::{ElementClass, Graph};
use crate::labelling::{DomainSelector, LabelKind, TargetKind};
use crate::objectives::Objective;

#[derive(Error, Debug)]
pub enum BenchError {
    #[error(
        "{family} range {lo}..={hi} outside the guardrail {allowed_lo}..={allowed_hi}; \
         pass force to override"
    )]
    RangeGuardrail {
        family: &'static str,
        lo: u64,
        hi: u64,
        allowed_lo: u64,
        allowed_hi: u64,
    },
    #[error("empty range {lo}..={hi}")]
    EmptyRange { lo: u64, hi: u64 },
    #[error(transparent)]
    Generator(#[from] GeneratorError),
    #[error(transparent)]
    Anneal(#[from] AnnealError),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BenchFamily {
    /// K_n, vertex-magic edge labelling. The bijection puts the labels
    /// exactly onto [1, |E|], which is the super condition for an edge
    /// labelling; such labellings exist for n >= 6 with n not divisible
    /// by 4 (the weight sum 2(1+..+|E|) must split into n equal integers,
    /// which fails for n = 0 mod 4).
    KnSuperVertexMagic,
    /// Path power P3^k, edge labelling, vertex-antimagic.
    P3PowerAntimagic,
}

impl BenchFamily {
    pub fn name(&self) -> &'static str {
        match self {
            BenchFamily::KnSuperVertexMagic => "kn-super-vmt",
            BenchFamily::P3PowerAntimagic => "p3power-antimagic",
        }
    }

    pub fn parse(name: &str) -> Option<BenchFamily> {
        match name {
            "kn-super-vmt" => Some(BenchFamily::KnSuperVertexMagic),
            "p3power-antimagic" => Some(BenchFamily::P3PowerAntimagic),
            _ => None,
        }
    }

    /// Desk-scale parameter guardrail.
    pub fn guardrail(&self) -> (u64, u64) {
        match self {
            BenchFamily::KnSuperVertexMagic => (6, 12),
            BenchFamily::P3PowerAntimagic => (1, 4),
        }
    }

    pub fn instance(&self, param: u64) -> Result<BenchInstance, BenchError> {
        match self {
            BenchFamily::KnSuperVertexMagic => {
                let graph = generators::complete_graph(param as usize)?;
                Ok(BenchInstance {
                    graph,
                    selector: DomainSelector::new(false, true, false),
                    task: TargetKind {
                        target: ElementClass::Vertex,
                        kind: LabelKind::Magic,
                        super_labelling: false,
                    },
                })
            }
            BenchFamily::P3PowerAntimagic => {
                let p3 = generators::path(3)?;
                let graph = generators::power(&p3, param as usize)?;
                Ok(BenchInstance {
                    graph,
                    selector: DomainSelector::new(false, true, false),
                    task: TargetKind {
                        target: ElementClass::Vertex,
                        kind: LabelKind::Antimagic,
                        super_labelling: false,
                    },
                })
            }
        }
    }

    /// Abscissa for the fit: n for complete graphs, edge count for powers.
    fn fit_x(&self, param: u64, graph: &Graph) -> f64 {
        match self {
            BenchFamily::KnSuperVertexMagic => param as f64,
            BenchFamily::P3PowerAntimagic => graph.edge_count() as f64,
        }
    }
}

pub struct BenchInstance {
    pub graph: Graph,
    pub selector: DomainSelector,
    pub task: TargetKind,
}

/// One CSV row: one annealing run.
#[derive(Clone, Debug)]
pub struct BenchRecord {
    pub family: &'static str,
    pub param: u64,
    pub seed: u64,
    pub iterations: u64,
    pub accepted: u64,
    pub wall_ms: f64,
    pub solved: bool,
}

pub const CSV_HEADER: &str = "family,param,seed,iterations,accepted,wall_ms,solved";

impl BenchRecord {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{:.3},{}",
            self.family,
            self.param,
            self.seed,
            self.iterations,
            self.accepted,
            self.wall_ms,
            self.solved
        )
    }
}

#[derive(Clone, Debug)]
pub struct BenchPoint {
    pub param: u64,
    /// Fit abscissa of this point.
    pub x: f64,
    pub edge_count: usize,
    pub records: Vec<BenchRecord>,
    pub mean_iterations: f64,
    pub solved_runs: usize,
}

#[derive(Clone, Debug)]
pub struct BenchSummary {
    pub family: BenchFamily,
    pub points: Vec<BenchPoint>,
    /// (amplitude, rate) of the least-squares fit mean = amplitude*e^(rate*x).
    pub exponential_fit: Option<(f64, f64)>,
    /// (slope, intercept) of the least-squares fit mean = slope*x + intercept.
    pub linear_fit: Option<(f64, f64)>,
}

#[derive(Clone, Copy, Debug)]
pub struct BenchConfig {
    pub runs_per_point: u64,
    pub seed: u64,
    pub max_iters: u64,
    /// Override the desk-scale range guardrail.
    pub force: bool,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            runs_per_point: 8,
            seed: 0,
            max_iters: 1_000_000,
            force: false,
        }
    }
}

/// Runs the benchmark over `lo..=hi`, one batch per parameter value.
/// Per-point base seeds are spread as seed + param * 10_000 so every run in
/// the whole sweep draws from a distinct stream while staying reproducible
/// from the single configured seed.
pub fn run_bench(
    family: BenchFamily,
    lo: u64,
    hi: u64,
    config: &BenchConfig,
) -> Result<BenchSummary, BenchError> {
    if lo > hi {
        return Err(BenchError::EmptyRange { lo, hi });
    }
    let (allowed_lo, allowed_hi) = family.guardrail();
    if !config.force && (lo < allowed_lo || hi > allowed_hi) {
        return Err(BenchError::RangeGuardrail {
            family: family.name(),
            lo,
            hi,
            allowed_lo,
            allowed_hi,
        });
    }

    let mut points = Vec::new();
    for param in lo..=hi {
        let instance = family.instance(param)?;
        let objective = Objective::for_task(instance.task).expect("bench kinds are valid");
        let params = AnnealParams {
            max_iters: config.max_iters,
            seed: config.seed.wrapping_add(param.wrapping_mul(10_000)),
            ..AnnealParams::default()
        };
        let (_, stats) = multi_start(
            &instance.graph,
            instance.selector,
            instance.task,
            objective,
            &params,
            config.runs_per_point,
        )?;
        let records: Vec<BenchRecord> = stats
            .iter()
            .map(|s| BenchRecord {
                family: family.name(),
                param,
                seed: s.seed,
                iterations: s.iterations,
                accepted: s.accepted,
                wall_ms: s.wall.as_secs_f64() * 1e3,
                solved: s.solved,
            })
            .collect();
        let mean = records.iter().map(|r| r.iterations as f64).sum::<f64>()
            / records.len() as f64;
        points.push(BenchPoint {
            param,
            x: family.fit_x(param, &instance.graph),
            edge_count: instance.graph.edge_count(),
            solved_runs: records.iter().filter(|r| r.solved).count(),
            records,
            mean_iterations: mean,
        });
    }

    let xs: Vec<f64> = points.iter().map(|p| p.x).collect();
    let means: Vec<f64> = points.iter().map(|p| p.mean_iterations).collect();
    Ok(BenchSummary {
        family,
        exponential_fit: fit_exponential(&xs, &means),
        linear_fit: fit_linear(&xs, &means),
        points,
    })
}

/// Ordinary least squares y = slope*x + intercept.
pub fn fit_linear(xs: &[f64], ys: &[f64]) -> Option<(f64, f64)> {
    if xs.len() < 2 || xs.len() != ys.len() {
        return None;
    }
    let n = xs.len() as f64;
    let sx: f64 = xs.iter().sum();
    let sy: f64 = ys.iter().sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| x * y).sum();
    let denom = n * sxx - sx * sx;
    if denom.abs() < f64::EPSILON {
        return None;
    }
    let slope = (n * sxy - sx * sy) / denom;
    let intercept = (sy - slope * sx) / n;
    Some((slope, intercept))
}

/// Least squares of ln y against x: y = amplitude * e^(rate*x). Zero means
/// are clamped to one iteration before taking logs.
pub fn fit_exponential(xs: &[f64], ys: &[f64]) -> Option<(f64, f64)> {
    let logs: Vec<f64> = ys.iter().map(|&y| y.max(1.0).ln()).collect();
    let (rate, log_amplitude) = fit_linear(xs, &logs)?;
    Some((log_amplitude.exp(), rate))
}

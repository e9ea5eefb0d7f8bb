//! Sweeps over models, sizes and seeds, and log-log regression of
//! splittability against graph size.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{connected_components, degree_stats, largest_component, Graph};
use crate::io::{load_graph, GraphFormat, ResultRow};
use crate::models::{build_model, ModelSpec};
use crate::par::Execution;
use crate::planarity::check_planar;
use crate::spanning::spanning_profile;
use crate::splitting::{
    estimate_splittability, GbasConfig, SplitMode, DEFAULT_TARGET_SUCCESSES, DEFAULT_TRIAL_CAP,
};

/// Ordinary least squares of `ln p` on `ln n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegressionFit {
    pub slope: f64,
    /// In natural-log units.
    pub intercept: f64,
    pub r_squared: f64,
    pub n_points: usize,
}

impl RegressionFit {
    pub const SCHEMA: [&'static str; 4] = ["slope", "intercept_ln", "r_squared", "n_points"];

    pub fn to_row(&self) -> ResultRow {
        ResultRow::new()
            .with("slope", self.slope)
            .with("intercept_ln", self.intercept)
            .with("r_squared", self.r_squared)
            .with("n_points", self.n_points)
    }
}

pub fn loglog_fit(samples: &[(f64, f64)]) -> Result<RegressionFit> {
    if samples.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "a fit needs at least 2 samples, got {}",
            samples.len()
        )));
    }
    let mut pts = Vec::with_capacity(samples.len());
    for (index, &(n, p)) in samples.iter().enumerate() {
        // also rejects NaN
        if !(n > 0.0 && p > 0.0) {
            return Err(Error::NonPositiveSample { index, n, p });
        }
        pts.push((n.ln(), p.ln()));
    }
    let len = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / len;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / len;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument("all samples share one n; slope undefined".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        (sxy * sxy / (sxx * syy)).clamp(0.0, 1.0)
    };
    Ok(RegressionFit {
        slope,
        intercept,
        r_squared,
        n_points: pts.len(),
    })
}

/// Settings shared by all sweeps, read from `key = value` lines.
///
/// Keys: `models` (presets or spec strings, `;`-separated; `,` also
/// separates when no entry has parentheses), `sizes`, `seeds_per_size`,
/// `k_values`, `target_successes`, `master_seed`, `trial_cap`, `mode`
/// (`exact`, `near` or `auto`), `exclude_small` (drop graphs with fewer
/// than `4k` vertices), and `graphs` (node-link or edge-list files,
/// relative to the config file). `#` starts a comment.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub models: Vec<ModelSpec>,
    pub sizes: Vec<usize>,
    pub seeds_per_size: usize,
    pub k_values: Vec<usize>,
    pub target_successes: u64,
    pub master_seed: u64,
    pub trial_cap: u64,
    pub mode: Option<SplitMode>,
    pub exclude_small: bool,
    pub graphs: Vec<PathBuf>,
    pub execution: Execution,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            models: Vec::new(),
            sizes: vec![100, 250, 500, 1000, 2500],
            seeds_per_size: 10,
            k_values: vec![2],
            target_successes: DEFAULT_TARGET_SUCCESSES,
            master_seed: 0,
            trial_cap: DEFAULT_TRIAL_CAP,
            mode: None,
            exclude_small: false,
            graphs: Vec::new(),
            execution: Execution::default(),
        }
    }
}

fn parse_list<T: std::str::FromStr>(key: &str, value: &str, line: usize) -> Result<Vec<T>> {
    value
        .split([',', ' ', '\t'])
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse().map_err(|_| Error::Parse {
                line,
                field: Some(key.into()),
                message: format!("cannot parse {s:?}"),
            })
        })
        .collect()
}

fn parse_one<T: std::str::FromStr>(key: &str, value: &str, line: usize) -> Result<T> {
    value.parse().map_err(|_| Error::Parse {
        line,
        field: Some(key.into()),
        message: format!("cannot parse {value:?}"),
    })
}

impl SweepConfig {
    /// Parses config text; relative graph paths resolve against `base`.
    pub fn parse(text: &str, base: &Path) -> Result<Self> {
        let mut cfg = SweepConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let Some((key, value)) = body.split_once('=') else {
                return Err(Error::Parse {
                    line,
                    field: None,
                    message: "expected `key = value`".into(),
                });
            };
            let (key, value) = (key.trim(), value.trim());
            let wrap = |e: Error| Error::Parse {
                line,
                field: Some(key.into()),
                message: e.to_string(),
            };
            match key {
                "models" => {
                    let entries: Vec<&str> = if value.contains(';') || value.contains('(') {
                        value.split(';').collect()
                    } else {
                        value.split(',').collect()
                    };
                    cfg.models = entries
                        .into_iter()
                        .map(str::trim)
                        .filter(|s| !s.is_empty())
                        .map(ModelSpec::resolve)
                        .collect::<Result<_>>()
                        .map_err(wrap)?;
                }
                "sizes" => cfg.sizes = parse_list(key, value, line)?,
                "seeds_per_size" => cfg.seeds_per_size = parse_one(key, value, line)?,
                "k_values" => cfg.k_values = parse_list(key, value, line)?,
                "target_successes" => cfg.target_successes = parse_one(key, value, line)?,
                "master_seed" => cfg.master_seed = parse_one(key, value, line)?,
                "trial_cap" => cfg.trial_cap = parse_one(key, value, line)?,
                "exclude_small" => cfg.exclude_small = parse_one(key, value, line)?,
                "mode" => {
                    cfg.mode = match value {
                        "auto" => None,
                        m => Some(m.parse().map_err(wrap)?),
                    }
                }
                "graphs" => {
                    cfg.graphs = value
                        .split(',')
                        .map(str::trim)
                        .filter(|s| !s.is_empty())
                        .map(|s| base.join(s))
                        .collect()
                }
                _ => {
                    return Err(Error::Parse {
                        line,
                        field: Some(key.into()),
                        message: "unknown key".into(),
                    })
                }
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, path.parent().unwrap_or(Path::new(".")))
    }

    pub fn validate(&self) -> Result<()> {
        if self.sizes.contains(&0) {
            return Err(Error::InvalidArgument("sizes must be positive".into()));
        }
        if self.seeds_per_size == 0 {
            return Err(Error::InvalidArgument("seeds_per_size must be at least 1".into()));
        }
        if self.k_values.iter().any(|&k| k < 2) {
            return Err(Error::InvalidArgument("every k must be at least 2".into()));
        }
        if self.target_successes == 0 || self.trial_cap == 0 {
            return Err(Error::InvalidArgument(
                "target_successes and trial_cap must be positive".into(),
            ));
        }
        Ok(())
    }

    fn cells(&self) -> Vec<(usize, usize, usize)> {
        let mut cells = Vec::new();
        for m in 0..self.models.len() {
            for &n in &self.sizes {
                for s in 0..self.seeds_per_size {
                    cells.push((m, n, s));
                }
            }
        }
        cells
    }

    fn instance_seed(&self, model: &ModelSpec, n: usize, s: usize) -> u64 {
        derive_seed(self.master_seed, &[fnv1a(model.name.as_bytes()), n as u64, s as u64])
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| {
        (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

/// Mixes a master seed with cell coordinates into an independent seed.
pub fn derive_seed(master: u64, parts: &[u64]) -> u64 {
    parts.iter().fold(splitmix64(master), |acc, &p| splitmix64(acc ^ p))
}

#[derive(Debug, Clone, Copy)]
struct Instance {
    planar: bool,
    connected: bool,
    avg_degree: f64,
    median_degree: f64,
    max_degree: f64,
    st_constant: f64,
}

fn measure(g: &Graph) -> Result<Instance> {
    let deg = degree_stats(g)?;
    let connected = connected_components(g).is_connected();
    let lcc;
    let h = if connected {
        g
    } else {
        lcc = largest_component(g)?;
        &lcc
    };
    Ok(Instance {
        planar: check_planar(g),
        connected,
        avg_degree: deg.average,
        median_degree: deg.median,
        max_degree: deg.maximum,
        st_constant: spanning_profile(h)?.st_constant,
    })
}

/// One aggregated row per model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSummary {
    pub model: String,
    pub planar_rate: Option<f64>,
    pub connected_rate: Option<f64>,
    pub avg_degree: Option<f64>,
    pub median_degree: Option<f64>,
    pub max_degree: Option<f64>,
    pub avg_st_constant: Option<f64>,
    pub instances: usize,
    pub errors: usize,
    pub spec: String,
}

impl ModelSummary {
    pub const SCHEMA: [&'static str; 10] = [
        "model",
        "planar_rate",
        "connected_rate",
        "avg_degree",
        "median_degree",
        "max_degree",
        "avg_st_constant",
        "instances",
        "errors",
        "spec",
    ];

    pub fn to_row(&self) -> ResultRow {
        ResultRow::new()
            .with("model", self.model.as_str())
            .with("planar_rate", self.planar_rate)
            .with("connected_rate", self.connected_rate)
            .with("avg_degree", self.avg_degree)
            .with("median_degree", self.median_degree)
            .with("max_degree", self.max_degree)
            .with("avg_st_constant", self.avg_st_constant)
            .with("instances", self.instances)
            .with("errors", self.errors)
            .with("spec", self.spec.as_str())
    }
}

/// Generates every (model, size, seed) instance and averages its statistics
/// per model. Failed instances are counted, not averaged.
pub fn model_sweep(cfg: &SweepConfig) -> Result<Vec<ModelSummary>> {
    cfg.validate()?;
    let cells = cfg.cells();
    let results = cfg.execution.map(&cells, |&(m, n, s)| {
        let spec = &cfg.models[m];
        build_model(spec, n, cfg.instance_seed(spec, n, s)).and_then(|g| measure(&g))
    });
    let mut out = Vec::with_capacity(cfg.models.len());
    for (m, spec) in cfg.models.iter().enumerate() {
        let ok: Vec<Instance> = cells
            .iter()
            .zip(&results)
            .filter(|(c, _)| c.0 == m)
            .filter_map(|(_, r)| r.as_ref().ok().copied())
            .collect();
        let total = cells.iter().filter(|c| c.0 == m).count();
        let mean = |f: fn(&Instance) -> f64| {
            (!ok.is_empty()).then(|| ok.iter().map(f).sum::<f64>() / ok.len() as f64)
        };
        out.push(ModelSummary {
            model: spec.name.clone(),
            planar_rate: mean(|i| i.planar as u8 as f64),
            connected_rate: mean(|i| i.connected as u8 as f64),
            avg_degree: mean(|i| i.avg_degree),
            median_degree: mean(|i| i.median_degree),
            max_degree: mean(|i| i.max_degree),
            avg_st_constant: mean(|i| i.st_constant),
            instances: ok.len(),
            errors: total - ok.len(),
            spec: spec.to_string(),
        });
    }
    Ok(out)
}

/// A graph queued for a splittability sweep.
#[derive(Debug, Clone)]
pub struct LabeledGraph {
    pub label: String,
    /// Spec text for generated graphs, empty for loaded ones.
    pub model: String,
    pub graph: Graph,
}

/// Loads the config's graph files followed by every generated instance.
pub fn sweep_graphs(cfg: &SweepConfig) -> Result<Vec<LabeledGraph>> {
    let mut out = Vec::new();
    for path in &cfg.graphs {
        let graph = load_graph(path, GraphFormat::from_path(path))?;
        let label = path.file_stem().map_or_else(
            || path.display().to_string(),
            |s| s.to_string_lossy().into_owned(),
        );
        out.push(LabeledGraph {
            label,
            model: String::new(),
            graph,
        });
    }
    let cells = cfg.cells();
    let built = cfg.execution.map(&cells, |&(m, n, s)| {
        let spec = &cfg.models[m];
        build_model(spec, n, cfg.instance_seed(spec, n, s))
    });
    for (&(m, n, s), g) in cells.iter().zip(built) {
        let spec = &cfg.models[m];
        out.push(LabeledGraph {
            label: format!("{}-n{n}-s{s}", spec.name),
            model: spec.to_string(),
            graph: g?,
        });
    }
    Ok(out)
}

/// One splittability estimate; `p_hat` is absent when the trial cap ran out.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitRow {
    pub graph: String,
    pub n: usize,
    pub k: usize,
    pub successes: u64,
    pub trials: u64,
    pub p_hat: Option<f64>,
    pub seed: u64,
    pub p_gbas: Option<f64>,
    pub model: String,
}

impl SplitRow {
    pub const SCHEMA: [&'static str; 9] = [
        "graph", "n", "k", "successes", "trials", "p_hat", "seed", "p_gbas", "model",
    ];

    pub fn to_row(&self) -> ResultRow {
        ResultRow::new()
            .with("graph", self.graph.as_str())
            .with("n", self.n)
            .with("k", self.k)
            .with("successes", self.successes)
            .with("trials", self.trials)
            .with("p_hat", self.p_hat)
            .with("seed", self.seed)
            .with("p_gbas", self.p_gbas)
            .with("model", self.model.as_str())
    }
}

#[derive(Debug, Clone)]
pub struct KFit {
    pub k: usize,
    pub fit: Result<RegressionFit, String>,
}

impl KFit {
    pub const SCHEMA: [&'static str; 6] = ["k", "slope", "intercept_ln", "r_squared", "n_points", "error"];

    pub fn to_row(&self) -> ResultRow {
        let row = ResultRow::new().with("k", self.k);
        match &self.fit {
            Ok(f) => f
                .to_row()
                .cells
                .into_iter()
                .fold(row, |r, (name, c)| r.with(&name, c))
                .with("error", ""),
            Err(e) => RegressionFit::SCHEMA
                .iter()
                .fold(row, |r, name| r.with(name, None::<f64>))
                .with("error", e.as_str()),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SplitSweep {
    pub rows: Vec<SplitRow>,
    pub fits: Vec<KFit>,
    /// Labels of graphs dropped by the `n >= 4k` rule, per k.
    pub excluded: Vec<(String, usize)>,
}

/// Estimates splittability of every graph for every k, then fits
/// `ln p_hat` against `ln n` per k. Graphs are measured on their largest
/// component.
pub fn splittability_sweep(cfg: &SweepConfig, graphs: &[LabeledGraph]) -> Result<SplitSweep> {
    cfg.validate()?;
    let mut rows = Vec::new();
    let mut excluded = Vec::new();
    for &k in &cfg.k_values {
        for (gi, lg) in graphs.iter().enumerate() {
            let n = connected_components(&lg.graph).sizes().first().copied().unwrap_or(0);
            if n < k || (cfg.exclude_small && n < 4 * k) {
                excluded.push((lg.label.clone(), k));
                continue;
            }
            let seed = derive_seed(cfg.master_seed, &[fnv1a(lg.label.as_bytes()), gi as u64, k as u64]);
            let gbas = GbasConfig {
                target_successes: cfg.target_successes,
                trial_cap: cfg.trial_cap,
                seed,
                execution: cfg.execution,
            };
            let row = match estimate_splittability(&lg.graph, &lg.label, k, cfg.mode, &gbas) {
                Ok(e) => SplitRow {
                    graph: e.graph_label,
                    n: e.n,
                    k,
                    successes: e.successes,
                    trials: e.trials,
                    p_hat: Some(e.p_hat),
                    seed,
                    p_gbas: Some(e.p_gbas),
                    model: lg.model.clone(),
                },
                Err(Error::TrialCapExceeded { successes, trials, .. }) => SplitRow {
                    graph: lg.label.clone(),
                    n,
                    k,
                    successes,
                    trials,
                    p_hat: None,
                    seed,
                    p_gbas: None,
                    model: lg.model.clone(),
                },
                Err(e) => return Err(e),
            };
            rows.push(row);
        }
    }
    let fits = cfg
        .k_values
        .iter()
        .map(|&k| {
            let pts: Vec<(f64, f64)> = rows
                .iter()
                .filter(|r| r.k == k)
                .filter_map(|r| r.p_hat.map(|p| (r.n as f64, p)))
                .collect();
            KFit {
                k,
                fit: loglog_fit(&pts).map_err(|e| e.to_string()),
            }
        })
        .collect();
    Ok(SplitSweep { rows, fits, excluded })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpanningRow {
    pub model: String,
    pub n: usize,
    pub seed: u64,
    pub ln_st: f64,
    pub st_constant: f64,
}

impl SpanningRow {
    pub const SCHEMA: [&'static str; 5] = ["model", "n", "seed", "ln_st", "st_constant"];

    pub fn to_row(&self) -> ResultRow {
        ResultRow::new()
            .with("model", self.model.as_str())
            .with("n", self.n)
            .with("seed", self.seed)
            .with("ln_st", self.ln_st)
            .with("st_constant", self.st_constant)
    }
}

/// Spanning-tree constant of each instance's largest component, ordered by
/// (model, size, seed). `n` is the measured vertex count.
pub fn spanning_constant_sweep(cfg: &SweepConfig) -> Result<Vec<SpanningRow>> {
    cfg.validate()?;
    let cells = cfg.cells();
    let results = cfg.execution.map(&cells, |&(m, n, s)| {
        let spec = &cfg.models[m];
        let seed = cfg.instance_seed(spec, n, s);
        let g = build_model(spec, n, seed)?;
        let h = largest_component(&g)?;
        let p = spanning_profile(&h)?;
        Ok(SpanningRow {
            model: spec.name.clone(),
            n: h.n(),
            seed,
            ln_st: p.ln_count,
            st_constant: p.st_constant,
        })
    });
    results.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn collinear_fit_is_exact() {
        let pts: Vec<(f64, f64)> = [10.0, 20.0, 40.0, 80.0].iter().map(|&n| (n, 4.0 / n)).collect();
        let f = loglog_fit(&pts).unwrap();
        assert!((f.slope + 1.0).abs() < 1e-12);
        assert!((f.intercept - 4f64.ln()).abs() < 1e-12);
        assert_eq!(f.r_squared, 1.0);
        assert_eq!(f.n_points, 4);
    }

    #[test]
    fn rescaling_p_moves_only_the_intercept() {
        let pts = [(10.0, 0.3), (30.0, 0.05), (90.0, 0.02), (200.0, 0.004)];
        let scaled: Vec<(f64, f64)> = pts.iter().map(|&(n, p)| (n, p * 8.0)).collect();
        let (a, b) = (loglog_fit(&pts).unwrap(), loglog_fit(&scaled).unwrap());
        assert!((a.slope - b.slope).abs() < 1e-12);
        assert!((b.intercept - a.intercept - 8f64.ln()).abs() < 1e-12);
        assert!((a.r_squared - b.r_squared).abs() < 1e-12);
    }

    #[test]
    fn fit_rejects_bad_samples() {
        assert!(matches!(
            loglog_fit(&[(10.0, 0.1), (20.0, 0.0)]),
            Err(Error::NonPositiveSample { index: 1, .. })
        ));
        assert!(loglog_fit(&[(10.0, 0.1)]).is_err());
        assert!(loglog_fit(&[(10.0, 0.1), (10.0, 0.2)]).is_err());
    }

    #[test]
    fn config_parses() {
        let text = "# demo\nmodels = 3, 11c\nsizes = 50 100\nseeds_per_size = 2\nk_values = 2,3\n\
                    master_seed = 9\nmode = near\nexclude_small = true\ngraphs = a.json\n";
        let cfg = SweepConfig::parse(text, Path::new("/data")).unwrap();
        assert_eq!(cfg.models.len(), 2);
        assert_eq!(cfg.models[1].name, "11c");
        assert_eq!(cfg.sizes, vec![50, 100]);
        assert_eq!(cfg.k_values, vec![2, 3]);
        assert_eq!(cfg.mode, Some(SplitMode::Near));
        assert!(cfg.exclude_small);
        assert_eq!(cfg.graphs, vec![PathBuf::from("/data/a.json")]);

        let spec = SweepConfig::parse("models = x:cloud|add_shortest(2)|lcc; 3", Path::new(".")).unwrap();
        assert_eq!(spec.models.len(), 2);

        let err = SweepConfig::parse("sizes = 10\nbogus = 1", Path::new(".")).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        assert!(SweepConfig::parse("seeds_per_size = 0", Path::new(".")).is_err());
    }

    #[test]
    fn one_cell_gives_one_row() {
        let cfg = SweepConfig {
            models: vec![ModelSpec::resolve("3").unwrap()],
            sizes: vec![60],
            seeds_per_size: 1,
            ..SweepConfig::default()
        };
        let rows = model_sweep(&cfg).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].planar_rate, Some(1.0));
        assert_eq!(rows[0].instances, 1);
    }

    #[test]
    fn sweeps_do_not_depend_on_execution() {
        let base = SweepConfig {
            models: vec![ModelSpec::resolve("2").unwrap(), ModelSpec::resolve("12").unwrap()],
            sizes: vec![40, 80],
            seeds_per_size: 2,
            k_values: vec![2],
            target_successes: 20,
            ..SweepConfig::default()
        };
        let seq = SweepConfig {
            execution: Execution::Sequential,
            ..base.clone()
        };
        let par = SweepConfig {
            execution: Execution::Parallel,
            ..base
        };
        assert_eq!(model_sweep(&seq).unwrap(), model_sweep(&par).unwrap());
        assert_eq!(spanning_constant_sweep(&seq).unwrap(), spanning_constant_sweep(&par).unwrap());
        let a = splittability_sweep(&seq, &sweep_graphs(&seq).unwrap()).unwrap();
        let b = splittability_sweep(&par, &sweep_graphs(&par).unwrap()).unwrap();
        assert_eq!(a.rows, b.rows);
    }

    #[test]
    fn tree_has_zero_constant() {
        let cfg = SweepConfig {
            models: vec!["t:grid(1,12)".parse().unwrap()],
            sizes: vec![12],
            seeds_per_size: 1,
            ..SweepConfig::default()
        };
        let rows = spanning_constant_sweep(&cfg).unwrap();
        assert_eq!(rows[0].st_constant, 0.0);
    }

    #[test]
    fn small_graphs_are_excluded_and_cap_leaves_p_absent() {
        let star = Graph::from_edges(8, (1..8).map(|v| (0, v))).unwrap();
        let path = Graph::from_edges(12, (0..11).map(|v| (v, v + 1))).unwrap();
        let graphs = vec![
            LabeledGraph { label: "star".into(), model: String::new(), graph: star },
            LabeledGraph { label: "path".into(), model: String::new(), graph: path },
        ];
        let cfg = SweepConfig {
            k_values: vec![2],
            exclude_small: true,
            trial_cap: 50,
            target_successes: 10,
            ..SweepConfig::default()
        };
        let out = splittability_sweep(&cfg, &graphs).unwrap();
        assert_eq!(out.rows.len(), 2);
        let star_row = &out.rows[0];
        assert_eq!(star_row.p_hat, None);
        assert_eq!(star_row.trials, 50);
        assert_eq!(out.rows[1].p_hat, Some(1.0));
        // one usable point cannot be fitted
        assert!(out.fits[0].fit.is_err());

        let cfg = SweepConfig { k_values: vec![3], ..cfg };
        let out = splittability_sweep(&cfg, &graphs).unwrap();
        assert_eq!(out.excluded, vec![("star".to_string(), 3)]);
    }
}

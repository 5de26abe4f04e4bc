//! Experiment harness: config-driven sweeps over problem size, branch
//! count, unit length, and VQE iterations, with per-run CSV rows and a
//! per-point summary file. Rows are fully deterministic for a fixed
//! config except for the wall-time column.

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::engine::{run_pqls, AcceptRule, PqlsParams};
use crate::error::{PqlsError, Result};
use crate::io::fmt_float;
use crate::ising::generate_instance;
use crate::seeding::mix_seeds;
use crate::subsolver::{tabu_baseline, SubsolverSpec};

/// `e / e_baseline`, defined only for strictly negative baselines.
/// Both energies negative: 1.0 matches the baseline, > 1 beats it.
pub fn approximation_ratio(e: f64, e_baseline: f64) -> Result<f64> {
    if !(e_baseline < 0.0) {
        return Err(PqlsError::MetricUndefined {
            baseline: e_baseline,
        });
    }
    Ok(e / e_baseline)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepKind {
    GridNpNg,
    Branches,
    UnitLength,
    VqeIters,
    Custom,
}

fn default_instances_per_point() -> usize {
    5
}

fn default_generations() -> usize {
    10
}

/// Flat sweep schema. Points are the Cartesian product of the five axis
/// lists; `kind` selects extra validation (a `unit_length` sweep derives
/// generations from `total_budget / L`, which must divide exactly).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment_id: String,
    pub kind: SweepKind,
    pub n_p: Vec<usize>,
    pub n_g: Vec<usize>,
    pub branches: Vec<usize>,
    pub unit_length: Vec<usize>,
    #[serde(default)]
    pub vqe_iterations: Vec<usize>,
    #[serde(default = "default_generations")]
    pub generations: usize,
    #[serde(default)]
    pub total_budget: Option<usize>,
    #[serde(default = "default_instances_per_point")]
    pub instances_per_point: usize,
    pub subsolver: SubsolverSpec,
    pub master_seed: u64,
    #[serde(default)]
    pub compare_qls: bool,
    #[serde(default)]
    pub accept_rule: AcceptRule,
    /// Worker threads for branch fan-out; 0 = all cores, 1 = serial.
    #[serde(default)]
    pub concurrency: usize,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let config: ExperimentConfig =
            toml::from_str(text).map_err(|e| PqlsError::InvalidConfig(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, axis) in [
            ("n_p", &self.n_p),
            ("n_g", &self.n_g),
            ("branches", &self.branches),
            ("unit_length", &self.unit_length),
        ] {
            if axis.is_empty() {
                return Err(PqlsError::InvalidConfig(format!("axis `{name}` is empty")));
            }
            if axis.iter().any(|&v| v == 0) {
                return Err(PqlsError::InvalidConfig(format!(
                    "axis `{name}` contains a zero"
                )));
            }
        }
        if self.instances_per_point == 0 {
            return Err(PqlsError::InvalidConfig(
                "instances_per_point must be >= 1".into(),
            ));
        }
        self.subsolver.validate()?;
        let is_vqe = matches!(self.subsolver, SubsolverSpec::Vqe(_));
        if !self.vqe_iterations.is_empty() && !is_vqe {
            return Err(PqlsError::InvalidConfig(
                "vqe_iterations axis requires a vqe subsolver".into(),
            ));
        }
        if self.vqe_iterations.iter().any(|&v| v == 0) {
            return Err(PqlsError::InvalidConfig(
                "vqe_iterations contains a zero".into(),
            ));
        }
        match self.kind {
            SweepKind::UnitLength => {
                let budget = self.total_budget.ok_or_else(|| {
                    PqlsError::InvalidConfig(
                        "unit_length sweep requires total_budget".into(),
                    )
                })?;
                for &length in &self.unit_length {
                    if budget % length != 0 {
                        return Err(PqlsError::InvalidConfig(format!(
                            "total_budget {budget} is not divisible by unit_length {length}"
                        )));
                    }
                }
            }
            _ => {
                if self.generations == 0 {
                    return Err(PqlsError::InvalidConfig("generations must be >= 1".into()));
                }
            }
        }
        for &n_p in &self.n_p {
            for &n_g in &self.n_g {
                if n_g > n_p {
                    return Err(PqlsError::InvalidConfig(format!(
                        "n_g {n_g} exceeds n_p {n_p}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Points in stable order: n_p × n_g × branches × unit_length × vqe axis.
    pub fn points(&self) -> Vec<SweepPoint> {
        let vqe_axis: Vec<Option<usize>> = if self.vqe_iterations.is_empty() {
            vec![None]
        } else {
            self.vqe_iterations.iter().map(|&v| Some(v)).collect()
        };
        let mut points = Vec::new();
        for &n_p in &self.n_p {
            for &n_g in &self.n_g {
                for &branches in &self.branches {
                    for &unit_length in &self.unit_length {
                        let generations = match (self.kind, self.total_budget) {
                            (SweepKind::UnitLength, Some(budget)) => budget / unit_length,
                            _ => self.generations,
                        };
                        for &vqe_iterations in &vqe_axis {
                            points.push(SweepPoint {
                                n_p,
                                n_g,
                                branches,
                                unit_length,
                                generations,
                                vqe_iterations,
                            });
                        }
                    }
                }
            }
        }
        points
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepPoint {
    pub n_p: usize,
    pub n_g: usize,
    pub branches: usize,
    pub unit_length: usize,
    pub generations: usize,
    pub vqe_iterations: Option<usize>,
}

impl SweepPoint {
    fn seed_parts(&self) -> [u64; 6] {
        [
            self.n_p as u64,
            self.n_g as u64,
            self.branches as u64,
            self.unit_length as u64,
            self.generations as u64,
            self.vqe_iterations.unwrap_or(0) as u64,
        ]
    }
}

pub const CSV_HEADER: [&str; 17] = [
    "experiment_id",
    "method",
    "n_p",
    "n_g",
    "branches",
    "unit_length",
    "generations",
    "subsolver",
    "vqe_iterations",
    "instance_seed",
    "master_seed",
    "best_energy",
    "baseline_energy",
    "approx_ratio",
    "subsolver_calls",
    "wall_time_ms",
    "error",
];

/// One CSV row: a (point, instance, method) result, or an error marker.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub experiment_id: String,
    pub method: String,
    pub point: SweepPoint,
    pub subsolver: String,
    pub instance_seed: u64,
    pub master_seed: u64,
    pub best_energy: Option<f64>,
    pub baseline_energy: Option<f64>,
    pub approx_ratio: Option<f64>,
    pub subsolver_calls: Option<u64>,
    pub wall_time_ms: Option<u64>,
    pub error: Option<String>,
}

impl RunRecord {
    pub fn to_row(&self) -> Vec<String> {
        let opt_f = |v: Option<f64>| v.map(fmt_float).unwrap_or_default();
        vec![
            self.experiment_id.clone(),
            self.method.clone(),
            self.point.n_p.to_string(),
            self.point.n_g.to_string(),
            self.point.branches.to_string(),
            self.point.unit_length.to_string(),
            self.point.generations.to_string(),
            self.subsolver.clone(),
            self.point
                .vqe_iterations
                .map(|v| v.to_string())
                .unwrap_or_default(),
            self.instance_seed.to_string(),
            self.master_seed.to_string(),
            opt_f(self.best_energy),
            opt_f(self.baseline_energy),
            opt_f(self.approx_ratio),
            self.subsolver_calls
                .map(|v| v.to_string())
                .unwrap_or_default(),
            self.wall_time_ms
                .map(|v| v.to_string())
                .unwrap_or_default(),
            self.error.clone().unwrap_or_default(),
        ]
    }
}

// seed-stream tags so the baseline, PQLS, and QLS never share a stream
const STREAM_BASELINE: u64 = 1;
const STREAM_PQLS: u64 = 2;
const STREAM_QLS: u64 = 3;

fn point_subsolver(config: &ExperimentConfig, point: &SweepPoint) -> SubsolverSpec {
    match (&config.subsolver, point.vqe_iterations) {
        (SubsolverSpec::Vqe(spec), Some(iterations)) => {
            let mut spec = *spec;
            spec.iterations = iterations;
            SubsolverSpec::Vqe(spec)
        }
        (other, _) => other.clone(),
    }
}

/// Run every instance × method at one sweep point.
pub fn run_point(config: &ExperimentConfig, point: &SweepPoint) -> Vec<RunRecord> {
    let mut records = Vec::new();
    let subsolver = point_subsolver(config, point);
    for k in 1..=config.instances_per_point {
        let mut parts = vec![config.master_seed];
        parts.extend(point.seed_parts());
        parts.push(k as u64);
        let instance_seed = mix_seeds(&parts);

        let mut methods: Vec<&str> = vec!["pqls"];
        if config.compare_qls {
            methods.push("qls");
        }
        for method in methods {
            records.push(run_one(config, point, &subsolver, instance_seed, method));
        }
    }
    records
}

fn run_one(
    config: &ExperimentConfig,
    point: &SweepPoint,
    subsolver: &SubsolverSpec,
    instance_seed: u64,
    method: &str,
) -> RunRecord {
    let (method_stream, branches, unit_length, generations) = if method == "qls" {
        // sequential baseline: one branch with the same per-branch budget
        (STREAM_QLS, 1, point.unit_length * point.generations, 1)
    } else {
        (
            STREAM_PQLS,
            point.branches,
            point.unit_length,
            point.generations,
        )
    };
    let master_seed = mix_seeds(&[instance_seed, method_stream]);
    let mut record = RunRecord {
        experiment_id: config.experiment_id.clone(),
        method: method.to_string(),
        point: *point,
        subsolver: subsolver.name().to_string(),
        instance_seed,
        master_seed,
        best_energy: None,
        baseline_energy: None,
        approx_ratio: None,
        subsolver_calls: None,
        wall_time_ms: None,
        error: None,
    };

    let started = Instant::now();
    let outcome = (|| -> Result<()> {
        let problem = generate_instance(point.n_p, instance_seed)?;
        let baseline = tabu_baseline(&problem, mix_seeds(&[instance_seed, STREAM_BASELINE]))?;
        record.baseline_energy = Some(baseline.energy);

        let params = PqlsParams {
            sub_size: point.n_g,
            branches,
            unit_length,
            generations,
            subsolver: subsolver.clone(),
            master_seed,
            accept_rule: config.accept_rule,
            retain_branches: false,
        };
        let result = run_pqls(&problem, None, &params, config.concurrency)?;
        record.best_energy = Some(result.best_energy);
        record.subsolver_calls = Some(result.subsolver_calls);
        record.approx_ratio = Some(approximation_ratio(result.best_energy, baseline.energy)?);
        Ok(())
    })();
    record.wall_time_ms = Some(started.elapsed().as_millis() as u64);
    if let Err(e) = outcome {
        record.error = Some(e.to_string());
    }
    record
}

pub struct SweepReport {
    pub records: Vec<RunRecord>,
    pub points: usize,
    pub error_rows: usize,
    pub csv_path: PathBuf,
    pub summary_path: PathBuf,
}

/// Run the full sweep and write the CSV plus a `<name>.summary.csv`
/// sibling with per-point mean and median approximation ratios.
pub fn run_sweep(config: &ExperimentConfig, out: &Path) -> Result<SweepReport> {
    config.validate()?;
    let points = config.points();
    let mut records = Vec::new();
    for point in &points {
        records.extend(run_point(config, point));
    }
    write_csv(&records, out)?;
    let summary_path = summary_path_for(out);
    write_summary(&records, &summary_path)?;
    let error_rows = records.iter().filter(|r| r.error.is_some()).count();
    Ok(SweepReport {
        points: points.len(),
        error_rows,
        records,
        csv_path: out.to_path_buf(),
        summary_path,
    })
}

pub fn summary_path_for(out: &Path) -> PathBuf {
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "sweep".into());
    out.with_file_name(format!("{stem}.summary.csv"))
}

pub fn write_csv(records: &[RunRecord], path: &Path) -> Result<()> {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(path)
        .map_err(csv_io_error)?;
    writer
        .write_record(CSV_HEADER)
        .map_err(csv_io_error)?;
    for record in records {
        writer.write_record(record.to_row()).map_err(csv_io_error)?;
    }
    writer.flush()?;
    Ok(())
}

fn csv_io_error(e: csv::Error) -> PqlsError {
    PqlsError::CsvInvalid(e.to_string())
}

fn median(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    }
}

fn write_summary(records: &[RunRecord], path: &Path) -> Result<()> {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_path(path)
        .map_err(csv_io_error)?;
    writer
        .write_record([
            "experiment_id",
            "method",
            "n_p",
            "n_g",
            "branches",
            "unit_length",
            "generations",
            "vqe_iterations",
            "runs",
            "mean_approx_ratio",
            "median_approx_ratio",
        ])
        .map_err(csv_io_error)?;

    // group in first-appearance order, which is the stable point order
    let mut groups: Vec<((SweepPoint, String), Vec<f64>)> = Vec::new();
    for record in records {
        let Some(ratio) = record.approx_ratio else {
            continue;
        };
        let key = (record.point, record.method.clone());
        match groups.iter_mut().find(|(k, _)| *k == key) {
            Some((_, ratios)) => ratios.push(ratio),
            None => groups.push((key, vec![ratio])),
        }
    }
    let experiment_id = records
        .first()
        .map(|r| r.experiment_id.clone())
        .unwrap_or_default();
    for ((point, method), mut ratios) in groups {
        ratios.sort_by(|a, b| a.partial_cmp(b).expect("finite ratios"));
        let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
        writer
            .write_record([
                experiment_id.clone(),
                method,
                point.n_p.to_string(),
                point.n_g.to_string(),
                point.branches.to_string(),
                point.unit_length.to_string(),
                point.generations.to_string(),
                point
                    .vqe_iterations
                    .map(|v| v.to_string())
                    .unwrap_or_default(),
                ratios.len().to_string(),
                fmt_float(mean),
                fmt_float(median(&ratios)),
            ])
            .map_err(csv_io_error)?;
    }
    writer.flush()?;
    Ok(())
}

/// Re-check an emitted CSV: header shape, finite fields, and the ratio
/// invariant `approx_ratio = best_energy / baseline_energy` on every
/// non-error row. Returns the number of data rows checked.
pub fn validate_csv(text: &str) -> Result<usize> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(text.as_bytes());
    let header = reader
        .headers()
        .map_err(|e| PqlsError::CsvInvalid(e.to_string()))?;
    if header.iter().ne(CSV_HEADER.iter().copied()) {
        return Err(PqlsError::CsvInvalid(format!(
            "unexpected header: {header:?}"
        )));
    }
    let mut rows = 0;
    for (index, row) in reader.records().enumerate() {
        let row = row.map_err(|e| PqlsError::CsvInvalid(e.to_string()))?;
        let line = index + 2;
        if row.len() != CSV_HEADER.len() {
            return Err(PqlsError::CsvInvalid(format!(
                "row {line}: expected {} columns, got {}",
                CSV_HEADER.len(),
                row.len()
            )));
        }
        rows += 1;
        let error_col = &row[16];
        if !error_col.is_empty() {
            continue;
        }
        let parse = |column: usize| -> Result<f64> {
            row[column].parse::<f64>().map_err(|_| {
                PqlsError::CsvInvalid(format!(
                    "row {line}: column `{}` is not a number: {:?}",
                    CSV_HEADER[column], &row[column]
                ))
            })
        };
        let best = parse(11)?;
        let baseline = parse(12)?;
        let ratio = parse(13)?;
        for (name, value) in [("best_energy", best), ("baseline_energy", baseline), ("approx_ratio", ratio)] {
            if !value.is_finite() {
                return Err(PqlsError::CsvInvalid(format!(
                    "row {line}: {name} is not finite"
                )));
            }
        }
        if !(baseline < 0.0) {
            return Err(PqlsError::CsvInvalid(format!(
                "row {line}: baseline_energy {baseline} is not strictly negative"
            )));
        }
        let expected = best / baseline;
        if (ratio - expected).abs() > 1e-12 * expected.abs().max(1.0) {
            return Err(PqlsError::CsvInvalid(format!(
                "row {line}: approx_ratio {ratio} != best/baseline {expected}"
            )));
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subsolver::{solve_exact, AnnealingSpec};

    fn small_config() -> ExperimentConfig {
        ExperimentConfig {
            experiment_id: "test".into(),
            kind: SweepKind::Custom,
            n_p: vec![12],
            n_g: vec![4],
            branches: vec![2],
            unit_length: vec![3],
            vqe_iterations: vec![],
            generations: 2,
            total_budget: None,
            instances_per_point: 2,
            subsolver: SubsolverSpec::Annealing(AnnealingSpec {
                sweeps: 20,
                ..AnnealingSpec::default()
            }),
            master_seed: 7,
            compare_qls: true,
            accept_rule: AcceptRule::ImproveOrEqual,
            concurrency: 1,
            output: None,
        }
    }

    #[test]
    fn ratio_basic_cases() {
        assert_eq!(approximation_ratio(-90.0, -100.0).unwrap(), 0.9);
        assert_eq!(approximation_ratio(-100.0, -100.0).unwrap(), 1.0);
        assert!(matches!(
            approximation_ratio(-5.0, 0.0),
            Err(PqlsError::MetricUndefined { .. })
        ));
        assert!(approximation_ratio(-5.0, 1.0).is_err());
    }

    #[test]
    fn config_round_trip_and_validation() {
        let text = r#"
experiment_id = "fig2b"
kind = "branches"
n_p = [36]
n_g = [10]
branches = [1, 2, 4]
unit_length = [100]
generations = 10
instances_per_point = 5
master_seed = 2024

[subsolver]
kind = "annealing"
sweeps = 100
t_initial = 2.0
t_final = 0.05
"#;
        let config = ExperimentConfig::from_toml(text).unwrap();
        assert_eq!(config.points().len(), 3);
        assert!(!config.compare_qls);
    }

    #[test]
    fn empty_axis_rejected() {
        let mut config = small_config();
        config.branches.clear();
        assert!(config.validate().is_err());
    }

    #[test]
    fn unit_length_sweep_requires_exact_division() {
        let mut config = small_config();
        config.kind = SweepKind::UnitLength;
        config.unit_length = vec![50, 100];
        assert!(config.validate().is_err());
        config.total_budget = Some(1000);
        config.validate().unwrap();
        assert!(config.points().iter().any(|p| p.generations == 20));
        config.unit_length = vec![300];
        assert!(config.validate().is_err());
    }

    #[test]
    fn vqe_axis_requires_vqe_subsolver() {
        let mut config = small_config();
        config.vqe_iterations = vec![10];
        assert!(config.validate().is_err());
    }

    #[test]
    fn point_runs_are_deterministic_modulo_wall_time() {
        let config = small_config();
        let point = config.points()[0];
        let strip = |records: Vec<RunRecord>| -> Vec<RunRecord> {
            records
                .into_iter()
                .map(|mut r| {
                    r.wall_time_ms = None;
                    r
                })
                .collect()
        };
        let a = strip(run_point(&config, &point));
        let b = strip(run_point(&config, &point));
        assert_eq!(a, b);
        // one row per (instance, method)
        assert_eq!(a.len(), config.instances_per_point * 2);
        assert!(a.iter().all(|r| r.error.is_none()));
    }

    #[test]
    fn baseline_matches_exact_on_most_small_instances() {
        let mut hits = 0;
        for k in 0..20u64 {
            let seed = mix_seeds(&[99, k]);
            let problem = generate_instance(20, seed).unwrap();
            let baseline = tabu_baseline(&problem, mix_seeds(&[seed, STREAM_BASELINE])).unwrap();
            let exact = solve_exact(&problem).unwrap();
            assert!(baseline.energy >= exact.energy - 1e-9);
            if (baseline.energy - exact.energy).abs() < 1e-9 {
                hits += 1;
            }
        }
        assert!(hits >= 18, "baseline matched exact on only {hits}/20");
    }

    #[test]
    fn sweep_writes_valid_csv_and_summary() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("rows.csv");
        let config = small_config();
        let report = run_sweep(&config, &out).unwrap();
        assert_eq!(report.error_rows, 0);
        assert_eq!(
            report.records.len(),
            config.points().len() * config.instances_per_point * 2
        );
        let text = std::fs::read_to_string(&out).unwrap();
        assert_eq!(validate_csv(&text).unwrap(), report.records.len());
        let summary = std::fs::read_to_string(report.summary_path).unwrap();
        assert!(summary.lines().count() >= 3, "{summary}");
    }

    #[test]
    fn validator_rejects_corrupt_ratio() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("rows.csv");
        let mut config = small_config();
        config.compare_qls = false;
        config.instances_per_point = 1;
        run_sweep(&config, &out).unwrap();
        let text = std::fs::read_to_string(&out).unwrap();
        let corrupted = text.replace("pqls", "pqls").replacen(',', ",", 1);
        assert!(validate_csv(&corrupted).is_ok());
        // break the ratio column on the data row
        let mut lines: Vec<String> = text.lines().map(String::from).collect();
        let fields: Vec<&str> = lines[1].split(',').collect();
        let mut broken = fields.clone();
        broken[13] = "2.5";
        lines[1] = broken.join(",");
        let bad = lines.join("\n");
        assert!(validate_csv(&bad).is_err());
    }
}

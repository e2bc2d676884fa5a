use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::experiment::{ExperimentFile, ExperimentSpec, Pipeline};
use super::HarnessError;
use crate::setcore::{k_fold_sum_capped, productset, sumset, FiniteSet, SetError};
use crate::witness::{
    recheck_detailed, ruzsa_plunnecke_audit_capped, theorem1_certificate_with, theorem2_certificate_with,
    GrowthCertificate, PipelineOptions,
};

/// Exact cardinalities for one run. `None` marks a quantity that was not
/// requested or could not be computed; `status` and `stage` say which.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthRow {
    pub label: String,
    pub family: String,
    pub pipeline: String,
    pub seed: u64,
    pub n: Option<usize>,
    pub sumset: Option<usize>,
    pub productset: Option<usize>,
    pub h: Vec<usize>,
    /// `|hA|`, one entry per `h`.
    pub h_sumset: Vec<Option<usize>>,
    /// `|h(A.A)|`, one entry per `h`.
    pub h_productset: Vec<Option<usize>>,
    pub cert_n: Option<usize>,
    pub cert_k: Option<usize>,
    pub cert_l: Option<usize>,
    pub audit_ok: Option<bool>,
    pub status: RowStatus,
    /// Name of the failing stage when `status` is not `ok`.
    pub stage: String,
    pub detail: String,
    /// Relative path of the certificate, when one was written.
    pub certificate: String,
    /// Kept out of the row CSV so it stays reproducible.
    #[serde(skip)]
    pub wall_ms: u128,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RowStatus {
    Ok,
    Failed,
}

impl GrowthRow {
    fn new(spec: &ExperimentSpec, seed: u64) -> Self {
        GrowthRow {
            label: spec.label.clone(),
            family: spec.family.to_string(),
            pipeline: spec.pipeline.name().to_string(),
            seed,
            n: None,
            sumset: None,
            productset: None,
            h: spec.h.clone(),
            h_sumset: Vec::new(),
            h_productset: Vec::new(),
            cert_n: None,
            cert_k: None,
            cert_l: None,
            audit_ok: None,
            status: RowStatus::Ok,
            stage: String::new(),
            detail: String::new(),
            certificate: String::new(),
            wall_ms: 0,
        }
    }

    fn fail(&mut self, stage: &str, detail: impl ToString) {
        self.status = RowStatus::Failed;
        self.stage = stage.to_string();
        self.detail = detail.to_string();
    }

    pub fn is_ok(&self) -> bool {
        self.status == RowStatus::Ok
    }

    fn record(&self) -> CsvRecord {
        fn opt<T: ToString>(v: &Option<T>) -> String {
            v.as_ref().map(T::to_string).unwrap_or_default()
        }
        fn list(v: &[Option<usize>]) -> String {
            v.iter().map(opt).collect::<Vec<_>>().join(";")
        }
        CsvRecord {
            label: self.label.clone(),
            family: self.family.clone(),
            pipeline: self.pipeline.clone(),
            seed: self.seed,
            n: opt(&self.n),
            sumset: opt(&self.sumset),
            productset: opt(&self.productset),
            h: self.h.iter().map(usize::to_string).collect::<Vec<_>>().join(";"),
            h_sumset: list(&self.h_sumset),
            h_productset: list(&self.h_productset),
            cert_n: opt(&self.cert_n),
            cert_k: opt(&self.cert_k),
            cert_l: opt(&self.cert_l),
            audit_ok: opt(&self.audit_ok),
            status: match self.status {
                RowStatus::Ok => "ok",
                RowStatus::Failed => "failed",
            },
            stage: self.stage.clone(),
            detail: self.detail.clone(),
            certificate: self.certificate.clone(),
        }
    }
}

#[derive(Serialize)]
struct CsvRecord {
    label: String,
    family: String,
    pipeline: String,
    seed: u64,
    n: String,
    sumset: String,
    productset: String,
    h: String,
    h_sumset: String,
    h_productset: String,
    cert_n: String,
    cert_k: String,
    cert_l: String,
    audit_ok: String,
    status: &'static str,
    stage: String,
    detail: String,
    certificate: String,
}

/// Output settings for [`run_experiment`].
#[derive(Debug, Clone)]
pub struct RunOptions {
    pub out_dir: PathBuf,
    /// Directory that `file` families are resolved against.
    pub base_dir: PathBuf,
    /// Write a `# generated-unix <secs>` header comment.
    pub timestamp: bool,
}

impl RunOptions {
    pub fn new(out_dir: impl Into<PathBuf>) -> Self {
        RunOptions { out_dir: out_dir.into(), base_dir: PathBuf::from("."), timestamp: true }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentOutcome {
    pub rows: Vec<GrowthRow>,
    pub csv_path: PathBuf,
    pub timings_path: PathBuf,
    pub certificates: Vec<PathBuf>,
}

struct RowResult {
    row: GrowthRow,
    cert: Option<(GrowthCertificate, FiniteSet)>,
}

fn certificate_name(label: &str, seed: u64) -> String {
    format!("{label}-seed{seed}.json")
}

fn set_failure(row: &mut GrowthRow, e: &SetError) {
    match e {
        SetError::Blowup { .. } => row.fail("cap", e),
        _ => row.fail("compute", e),
    }
}

fn growth_columns(row: &mut GrowthRow, a: &FiniteSet, spec: &ExperimentSpec) -> Result<(), SetError> {
    let cap = spec.caps.max_elements;
    let aa = productset(a, a);
    row.sumset = Some(sumset(a, a).len());
    row.productset = Some(aa.len());
    for &h in &spec.h {
        let s = k_fold_sum_capped(a, h, cap);
        row.h_sumset.push(s.as_ref().ok().map(FiniteSet::len));
        let p = k_fold_sum_capped(&aa, h, cap);
        row.h_productset.push(p.as_ref().ok().map(FiniteSet::len));
        s?;
        p?;
    }
    Ok(())
}

/// Runs one row; every failure ends up in the row itself.
fn run_row(spec: &ExperimentSpec, seed: u64, base: &Path) -> RowResult {
    let start = Instant::now();
    let mut row = GrowthRow::new(spec, seed);
    let mut cert = None;
    match spec.family.generate(seed, base) {
        Err(e) => row.fail("generate", e),
        Ok(a) => {
            row.n = Some(a.len());
            if let Err(e) = growth_columns(&mut row, &a, spec) {
                set_failure(&mut row, &e);
            } else {
                cert = run_pipeline(&mut row, &a, spec);
            }
        }
    }
    row.wall_ms = start.elapsed().as_millis();
    RowResult { row, cert }
}

fn run_pipeline(row: &mut GrowthRow, a: &FiniteSet, spec: &ExperimentSpec) -> Option<(GrowthCertificate, FiniteSet)> {
    let opts = PipelineOptions {
        caps: crate::setcore::Caps::new(spec.caps.max_elements),
        enumeration_budget: spec.caps.enumeration_budget,
        thinning: spec.thinning,
        cross_check_cap: spec.caps.cross_check,
        ..PipelineOptions::default()
    };
    match spec.pipeline {
        Pipeline::RawGrowth => None,
        Pipeline::Audit => {
            match ruzsa_plunnecke_audit_capped(a, spec.k, spec.ell, spec.caps.max_elements) {
                Ok(r) => {
                    row.audit_ok = Some(r.holds);
                    if !r.holds {
                        row.fail("audit", format!("|kA-lA| = {} exceeds {}", r.combination_size, r.bound));
                    }
                }
                Err(e) => set_failure(row, &e),
            }
            None
        }
        Pipeline::Theorem1 | Pipeline::Theorem2 => {
            let delta = spec.delta.as_ref().expect("validated");
            let result = if spec.pipeline == Pipeline::Theorem1 {
                theorem1_certificate_with(a, spec.k, delta, &opts)
            } else {
                theorem2_certificate_with(a, spec.k, delta, &opts)
            };
            match result {
                Ok(c) => {
                    row.cert_n = Some(c.n());
                    row.cert_k = Some(c.expansion_bound.k_plus);
                    row.cert_l = Some(c.expansion_bound.l_minus);
                    row.certificate = format!("certificates/{}", certificate_name(&spec.label, row.seed));
                    Some((c, a.clone()))
                }
                Err(e) => {
                    row.fail(e.stage().name(), e.reason());
                    None
                }
            }
        }
    }
}

fn write_rows(path: &Path, rows: &[GrowthRow], timestamp: bool) -> Result<(), HarnessError> {
    let mut file = BufWriter::new(File::create(path)?);
    if timestamp {
        let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        writeln!(file, "# generated-unix {secs}")?;
    }
    let mut w = csv::Writer::from_writer(file);
    for row in rows {
        w.serialize(row.record())?;
    }
    w.flush()?;
    Ok(())
}

fn write_timings(path: &Path, rows: &[GrowthRow]) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["label", "seed", "wall_ms"])?;
    for row in rows {
        w.write_record([row.label.clone(), row.seed.to_string(), row.wall_ms.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// Runs every row of `file` on the rayon pool and writes, in spec order,
/// `<out>/<name>.csv`, `<out>/<name>.timings.csv` and one certificate per
/// successful certificate run under `<out>/certificates/`. Each certificate
/// is read back and rechecked; a failed recheck marks its row failed.
pub fn run_experiment(file: &ExperimentFile, opts: &RunOptions) -> Result<ExperimentOutcome, HarnessError> {
    file.validate()?;
    let jobs: Vec<(&ExperimentSpec, u64)> = file.runs.iter().flat_map(|r| r.seeds().map(move |s| (r, s))).collect();
    let results: Vec<RowResult> = jobs.par_iter().map(|&(spec, seed)| run_row(spec, seed, &opts.base_dir)).collect();

    fs::create_dir_all(&opts.out_dir)?;
    let cert_dir = opts.out_dir.join("certificates");
    let mut rows = Vec::with_capacity(results.len());
    let mut written = Vec::new();
    for RowResult { row, cert } in results {
        if let Some((c, a)) = cert {
            fs::create_dir_all(&cert_dir)?;
            let path = cert_dir.join(certificate_name(&row.label, row.seed));
            fs::write(&path, c.to_json())?;
            written.push((rows.len(), path, a));
        }
        rows.push(row);
    }
    let verdicts: Vec<Result<(), String>> = written
        .par_iter()
        .map(|(_, path, a)| {
            let text = fs::read_to_string(path).map_err(|e| e.to_string())?;
            let cert = GrowthCertificate::from_json(&text).map_err(|e| e.to_string())?;
            recheck_detailed(&cert, a)
        })
        .collect();
    for ((i, _, _), verdict) in written.iter().zip(verdicts) {
        if let Err(reason) = verdict {
            rows[*i].fail("recheck", reason);
        }
    }

    let csv_path = opts.out_dir.join(format!("{}.csv", file.name));
    let timings_path = opts.out_dir.join(format!("{}.timings.csv", file.name));
    write_rows(&csv_path, &rows, opts.timestamp)?;
    write_timings(&timings_path, &rows)?;
    Ok(ExperimentOutcome {
        rows,
        csv_path,
        timings_path,
        certificates: written.into_iter().map(|(_, p, _)| p).collect(),
    })
}

/// Runs a single spec without touching the filesystem.
pub fn run_spec(spec: &ExperimentSpec, base_dir: &Path) -> Result<Vec<(GrowthRow, Option<GrowthCertificate>)>, HarnessError> {
    spec.validate()?;
    let seeds: Vec<u64> = spec.seeds().collect();
    Ok(seeds
        .par_iter()
        .map(|&s| {
            let r = run_row(spec, s, base_dir);
            (r.row, r.cert.map(|c| c.0))
        })
        .collect())
}

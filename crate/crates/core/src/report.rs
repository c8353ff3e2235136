//! Machine-readable run reports (`report-v1`).
//!
//! Every rational in a certificate or witness is written as an exact `"p/q"`
//! string. Floating-point values appear only in the numeric decay table and
//! the probe statistics. `timing` is the last field and is the only part of a
//! report that may change between runs on the same input.

use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::{load, ConfigError, ProblemFile};
use crate::criterion::{check_general_with_workers, replay_certificate_detailed, Certificate, GroupConfig, SearchStats, Verdict};
use crate::probe::{orbit_probe, ProbeGrid, ProbeStats, QuadraticOrder};
use crate::roots::GroupSpec;
use crate::scalar::{format_rational, parse_rational, Scalar};
use crate::weyl::{CentralizerWeylElement, WeylElement};
use crate::witness::{build_escape_witness, verify_divergence, DivergenceReport, DivergenceSequence, EscapeWitness, HSampler};
use crate::{BigInt, RatMatrix, Rational};

pub const FORMAT: &str = "report-v1";

const CERTIFY_NS: [u32; 4] = [0, 5, 10, 20];
const N_TARGET: u32 = 100;

const ASSUMPTIONS: [&str; 2] = [
    "centralizer-weyl representatives are checked for determinant 1, centralizing Lie(M) and normalizing Lie(D); membership in the identity component of Z_G(M) is assumed",
    "torus-d is assumed to be a maximal R-split torus of Z_G(M); only commutation with M and containment in Lie(T) are checked",
];

const PROBE_NOTE: &str =
    "corroborative only: the verdict is certified by the criterion, the probe samples a finite grid of the A-orbit of each g_N";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Check,
    Certify,
    Probe,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerdictKind {
    UniformlyNondivergent,
    NotUniformlyNondivergent,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateRecord {
    /// 1-based simple-root indices.
    pub subset: Vec<usize>,
    /// One 1-based permutation per factor.
    pub w: WeylElement,
    pub w_prime_index: usize,
    pub w_prime: Vec<Vec<Vec<String>>>,
    pub dependence: Vec<String>,
    pub integer_dependence: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditRecord {
    pub replay: String,
    pub witness_exact: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub sigma0: String,
    pub v: Vec<String>,
    pub lambda_v: Vec<String>,
    pub u_prime_basis: Vec<Vec<String>>,
    pub decaying_sides: Vec<String>,
    pub sampler: HSampler,
    pub decay: DivergenceReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeRow {
    pub n: u32,
    pub stats: ProbeStats,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeRecord {
    pub note: String,
    /// Order `Z[√d]`; absent when `m = 1` (lattice `Z^n`).
    pub d: Option<u64>,
    pub radius: f64,
    pub points: usize,
    pub seed: u64,
    pub rows: Vec<ProbeRow>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub elapsed_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub format: String,
    pub tool_version: String,
    pub command: Command,
    pub input_digest: String,
    pub problem: String,
    pub verdict: VerdictKind,
    pub stats: Option<SearchStats>,
    pub certificate: Option<CertificateRecord>,
    pub assumptions: Vec<String>,
    pub audit: Option<AuditRecord>,
    pub witness: Option<WitnessRecord>,
    pub probe: Option<ProbeRecord>,
    pub timing: Timing,
}

/// Failure classes of a pipeline run; the CLI maps each to an exit code.
#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("{0}")]
    Config(String),
    #[error("audit failed: {0}")]
    Audit(String),
    #[error("{0}")]
    ProbeOnNondivergent(String),
}

impl From<ConfigError> for RunError {
    fn from(e: ConfigError) -> Self {
        RunError::Config(e.to_string())
    }
}

pub fn digest(text: &str) -> String {
    format!("sha256:{}", hex::encode(Sha256::digest(text.as_bytes())))
}

fn strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

fn matrix_strings(m: &RatMatrix) -> Vec<Vec<String>> {
    m.row_vecs().iter().map(|r| strings(r)).collect()
}

impl CertificateRecord {
    pub fn from_certificate(c: &Certificate) -> Self {
        Self {
            subset: c.subset.clone(),
            w: c.w.clone(),
            w_prime_index: c.w_prime_index,
            w_prime: c.w_prime.matrices().iter().map(matrix_strings).collect(),
            dependence: strings(&c.dependence),
            integer_dependence: c.integer_dependence.as_ref().map(|v| v.iter().map(|x| x.to_string()).collect()),
        }
    }

    /// Rebuild the certificate. Matrices are parsed but not validated here;
    /// [`replay_certificate_detailed`] checks them against the configuration.
    pub fn to_certificate(&self, spec: &GroupSpec) -> Result<Certificate, String> {
        let rat = |s: &String| parse_rational(s).ok_or_else(|| format!("{s:?} is not a rational"));
        let matrices = self
            .w_prime
            .iter()
            .map(|rows| {
                let data = rows
                    .iter()
                    .map(|r| r.iter().map(rat).collect::<Result<Vec<_>, _>>())
                    .collect::<Result<Vec<_>, _>>()?;
                RatMatrix::from_rows(spec.n(), &data).map_err(|e| e.to_string())
            })
            .collect::<Result<Vec<_>, _>>()?;
        let integer_dependence = match &self.integer_dependence {
            None => None,
            Some(v) => Some(
                v.iter()
                    .map(|s| s.parse::<BigInt>().map_err(|_| format!("{s:?} is not an integer")))
                    .collect::<Result<Vec<_>, _>>()?,
            ),
        };
        Ok(Certificate {
            subset: self.subset.clone(),
            w: self.w.clone(),
            w_prime_index: self.w_prime_index,
            w_prime: CentralizerWeylElement::from_matrices(spec, matrices)?,
            dependence: self.dependence.iter().map(rat).collect::<Result<_, _>>()?,
            integer_dependence,
        })
    }
}

/// Options not carried by the problem file.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RunOptions {
    /// `None` uses every core. Never affects the report.
    pub workers: Option<usize>,
    /// Overrides `[probe] seed`.
    pub seed: Option<u64>,
}

struct Pipeline<'a> {
    file: ProblemFile,
    config: GroupConfig,
    text: &'a str,
}

/// Run `command` on the problem text and assemble its report.
pub fn run(command: Command, text: &str, opts: RunOptions) -> Result<Report, RunError> {
    let start = Instant::now();
    let (file, config) = load(text)?;
    let p = Pipeline { file, config, text };
    let pool = {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(n) = opts.workers {
            b = b.num_threads(n.max(1));
        }
        b.build().map_err(|e| RunError::Config(e.to_string()))?
    };
    let mut report = pool.install(|| p.execute(command, opts))?;
    report.timing.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(report)
}

impl Pipeline<'_> {
    fn execute(&self, command: Command, opts: RunOptions) -> Result<Report, RunError> {
        let probe_section = self.file.probe.clone();
        if command == Command::Probe {
            if probe_section.is_none() {
                return Err(RunError::Config("probe: the problem file has no [probe] section".into()));
            }
        }
        let verdict = check_general_with_workers(&self.config, opts.workers).map_err(|e| RunError::Config(e.to_string()))?;
        let mut report = Report {
            format: FORMAT.into(),
            tool_version: env!("CARGO_PKG_VERSION").into(),
            command,
            input_digest: digest(self.text),
            problem: self.text.to_string(),
            verdict: if verdict.is_nondivergent() {
                VerdictKind::UniformlyNondivergent
            } else {
                VerdictKind::NotUniformlyNondivergent
            },
            stats: match &verdict {
                Verdict::UniformlyNondivergent(s) => Some(*s),
                Verdict::NotUniformlyNondivergent(_) => None,
            },
            certificate: verdict.certificate().map(CertificateRecord::from_certificate),
            assumptions: ASSUMPTIONS.iter().map(|s| s.to_string()).collect(),
            audit: None,
            witness: None,
            probe: None,
            timing: Timing { elapsed_ms: 0.0 },
        };
        if command == Command::Check {
            return Ok(report);
        }
        let Some(cert) = verdict.certificate() else {
            if command == Command::Probe {
                return Err(RunError::ProbeOnNondivergent(
                    "probe: the verdict is uniformly nondivergent, so there is no divergence sequence to follow".into(),
                ));
            }
            return Ok(report);
        };

        replay_certificate_detailed(&self.config, cert).map_err(|e| RunError::Audit(format!("certificate replay: {e}")))?;
        let witness = build_escape_witness(cert, &self.config).map_err(|e| RunError::Audit(format!("escape witness: {e}")))?;
        witness.exact_check().map_err(|e| RunError::Audit(e.to_string()))?;
        report.audit = Some(AuditRecord {
            replay: "pass".into(),
            witness_exact: "pass".into(),
        });

        let seed = opts.seed.or(probe_section.as_ref().map(|p| p.seed));
        let sampler = HSampler {
            seed: seed.unwrap_or(HSampler::default().seed),
            ..HSampler::default()
        };
        let seq = DivergenceSequence::new(&self.config, cert.clone(), witness.clone());
        let decay = verify_divergence(&seq, &self.config, &sampler, &CERTIFY_NS, N_TARGET)
            .map_err(|e| RunError::Audit(e.to_string()))?;
        report.witness = Some(witness_record(&witness, sampler.clone(), decay));

        if let (Command::Probe, Some(section)) = (command, probe_section) {
            let spec = self.config.spec();
            if !(1..=2).contains(&spec.m()) {
                return Err(RunError::Config(format!(
                    "probe: module lattices are available for m = 1 or 2, not m = {}",
                    spec.m()
                )));
            }
            // The order only matters for m = 2; m = 1 probes g·Z^n.
            let d = if spec.m() == 2 { section.d } else { 2 };
            let order = QuadraticOrder::new(d).map_err(|e| RunError::Config(format!("probe.d: {e}")))?;
            let grid = ProbeGrid {
                directions: self
                    .config
                    .a_basis()
                    .basis()
                    .iter()
                    .map(|b| b.iter().map(Scalar::to_f64).collect())
                    .collect(),
                radius: section.radius,
                points: section.points,
            };
            let mut rows = Vec::with_capacity(section.ns.len());
            for &n in &section.ns {
                let g = seq.element(n as f64);
                let stats = orbit_probe(&order, &g, &grid).map_err(|e| RunError::Config(format!("probe: {e}")))?;
                rows.push(ProbeRow { n, stats });
            }
            report.probe = Some(ProbeRecord {
                note: PROBE_NOTE.into(),
                d: (spec.m() == 2).then_some(d),
                radius: section.radius,
                points: section.points,
                seed: sampler.seed,
                rows,
            });
        }
        Ok(report)
    }
}

fn witness_record(w: &EscapeWitness, sampler: HSampler, decay: DivergenceReport) -> WitnessRecord {
    WitnessRecord {
        sigma0: w.sigma0.to_string(),
        v: strings(&w.v),
        lambda_v: strings(&w.lambda_of_v()),
        u_prime_basis: w.u_prime.basis().iter().map(|b| strings(b)).collect(),
        decaying_sides: (0..w.subset.len())
            .map(|j| format!("{:?}", w.decaying_side(j)).to_lowercase())
            .collect(),
        sampler,
        decay,
    }
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, String> {
        serde_json::from_str(text).map_err(|e| e.to_string())
    }

    /// JSON value with `timing` removed, for run-to-run comparison.
    pub fn comparable(&self) -> serde_json::Value {
        let text = serde_json::to_string(self).expect("reports serialize");
        let mut v: serde_json::Value = serde_json::from_str(&text).expect("round trip");
        if let Some(obj) = v.as_object_mut() {
            obj.remove("timing");
        }
        v
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ReplayError {
    #[error("unreadable report: {0}")]
    Unreadable(String),
    #[error("{0}")]
    Config(String),
    #[error("replay mismatch: {0}")]
    Mismatch(String),
}

/// Recheck a report: digest, certificate, then a full rerun of the recorded
/// command, compared field by field (timing excluded).
pub fn replay(report_text: &str, workers: Option<usize>) -> Result<Report, ReplayError> {
    let report = Report::from_json(report_text).map_err(ReplayError::Unreadable)?;
    if report.format != FORMAT {
        return Err(ReplayError::Unreadable(format!("unsupported format {:?}", report.format)));
    }
    if digest(&report.problem) != report.input_digest {
        return Err(ReplayError::Mismatch("input digest does not match the embedded problem".into()));
    }
    let (_, config) = load(&report.problem).map_err(|e| ReplayError::Config(e.to_string()))?;
    if let Some(record) = &report.certificate {
        let cert = record
            .to_certificate(config.spec())
            .map_err(|e| ReplayError::Mismatch(format!("certificate: {e}")))?;
        replay_certificate_detailed(&config, &cert).map_err(|e| ReplayError::Mismatch(format!("certificate: {e}")))?;
    }
    let seed = report.probe.as_ref().map(|p| p.seed).or(report.witness.as_ref().map(|w| w.sampler.seed));
    let fresh = run(report.command, &report.problem, RunOptions { workers, seed }).map_err(|e| match e {
        RunError::Config(m) => ReplayError::Config(m),
        other => ReplayError::Mismatch(other.to_string()),
    })?;
    let (a, b) = (report.comparable(), fresh.comparable());
    if a != b {
        let field = a
            .as_object()
            .and_then(|ao| ao.iter().find(|(k, v)| b.get(k.as_str()) != Some(*v)).map(|(k, _)| k.clone()))
            .unwrap_or_else(|| "report".into());
        return Err(ReplayError::Mismatch(format!("field {field:?} differs from a fresh run")));
    }
    Ok(fresh)
}

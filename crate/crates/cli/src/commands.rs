use std::path::Path;
use std::time::Instant;

use hspan::span::{corollary4_sample_run, SamplerRun};
use hspan::verify::VerificationReport;
use hspan::{
    basis_product_oracle, corollary5_span, generate, random_sample_span, theorem_span, verify_all,
    AnyFamily, FamilyKind, GenSpec, HspanError, InstanceFile, MatrixFamily, Subspace,
    ToleranceConfig, VerifyOptions,
};
use serde::Serialize;

use crate::report::{to_json_line, ErrorInfo, InstanceEcho, ReportFile, REPORT_SCHEMA_VERSION};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

/// Rendered report line plus process exit code.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub line: String,
    pub code: i32,
}

fn exit_code_for(err: &HspanError) -> i32 {
    match err {
        HspanError::InstanceTooLarge { .. } => EXIT_BUDGET,
        _ => EXIT_INPUT,
    }
}

fn error_kind(code: i32) -> &'static str {
    match code {
        EXIT_BUDGET => "budget",
        _ => "input",
    }
}

fn elapsed_ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

fn render<P: Serialize>(
    command: &'static str,
    file: Option<&Path>,
    instance: Option<InstanceEcho>,
    result: Result<(P, i32), HspanError>,
    start: Instant,
) -> Outcome {
    let file = file.map(|p| p.display().to_string());
    let (payload, error, code) = match result {
        Ok((p, code)) => (Some(p), None, code),
        Err(err) => {
            let code = exit_code_for(&err);
            eprintln!("hspan {command}: {err}");
            let info = ErrorInfo {
                kind: error_kind(code),
                message: err.to_string(),
            };
            (None, Some(info), code)
        }
    };
    let report = ReportFile {
        schema_version: REPORT_SCHEMA_VERSION,
        command,
        file,
        instance,
        payload,
        error,
        exit_code: code,
        wall_time_ms: elapsed_ms(start),
    };
    Outcome {
        line: to_json_line(&report),
        code,
    }
}

fn load(path: &Path) -> Result<AnyFamily, HspanError> {
    InstanceFile::load(path)?.to_family()
}

fn echo(family: &AnyFamily, seed: u64) -> InstanceEcho {
    InstanceEcho {
        n: family.n(),
        k: family.k(),
        kind: match family {
            AnyFamily::General(_) => FamilyKind::General,
            AnyFamily::Psd(_) => FamilyKind::Psd,
        },
        seed,
    }
}

fn basis_rows(s: &Subspace) -> Vec<Vec<[f64; 2]>> {
    let q = s.basis();
    (0..q.rows())
        .map(|i| q.row_vec(i).into_iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

#[derive(Debug, Serialize)]
pub struct GenPayload {
    pub out: String,
    pub rank_deficit: usize,
}

/// Writes the instance to `out`, or to stdout (no report) when `out` is `None`.
pub fn cmd_gen(spec: &GenSpec, out: Option<&Path>) -> Outcome {
    let start = Instant::now();
    let generated = generate(spec);
    let instance = Some(InstanceEcho {
        n: spec.n,
        k: spec.k,
        kind: spec.kind,
        seed: spec.seed,
    });
    let result = generated.and_then(|family| {
        let file = InstanceFile::from_family(&family);
        match out {
            Some(path) => {
                file.save(path)?;
                Ok(Some(path.display().to_string()))
            }
            None => {
                print!("{}", file.to_json());
                Ok(None)
            }
        }
    });
    match result {
        Ok(None) => Outcome {
            line: String::new(),
            code: EXIT_OK,
        },
        Ok(Some(path)) => render(
            "gen",
            None,
            instance,
            Ok((
                GenPayload {
                    out: path,
                    rank_deficit: spec.rank_deficit,
                },
                EXIT_OK,
            )),
            start,
        ),
        Err(err) => render::<GenPayload>("gen", None, instance, Err(err), start),
    }
}

#[derive(Debug, Serialize)]
pub struct SpanPayload {
    /// `theorem` for general families, `corollary5` for PSD families.
    pub route: &'static str,
    pub rank: usize,
    pub rank_rel_tol: f64,
    pub tol_used: f64,
    pub basis: Vec<Vec<[f64; 2]>>,
}

pub fn cmd_span(path: &Path, cfg: &ToleranceConfig) -> Outcome {
    let start = Instant::now();
    let family = match load(path) {
        Ok(f) => f,
        Err(err) => return render::<SpanPayload>("span", Some(path), None, Err(err), start),
    };
    let (route, subspace) = match &family {
        AnyFamily::General(f) => ("theorem", theorem_span(f, cfg)),
        AnyFamily::Psd(p) => ("corollary5", corollary5_span(p, cfg)),
    };
    let payload = SpanPayload {
        route,
        rank: subspace.rank(),
        rank_rel_tol: cfg.rank_rel_tol,
        tol_used: subspace.tol_used(),
        basis: basis_rows(&subspace),
    };
    render(
        "span",
        Some(path),
        Some(echo(&family, cfg.seed)),
        Ok((payload, EXIT_OK)),
        start,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum CompareMode {
    Basis,
    Random,
}

#[derive(Debug, Serialize)]
pub struct ComparePayload {
    pub mode: CompareMode,
    pub theorem_rank: usize,
    pub oracle_rank: usize,
    pub distance: f64,
    pub tol: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    pub agree: bool,
}

/// Compares `range(G)` (or `range(A_1 ∘ ... ∘ A_k)` for PSD input) with the
/// directly computed span of Hadamard products.
pub fn cmd_compare(
    path: &Path,
    mode: CompareMode,
    samples: Option<usize>,
    cfg: &ToleranceConfig,
) -> Outcome {
    let start = Instant::now();
    let family = match load(path) {
        Ok(f) => f,
        Err(err) => return render::<ComparePayload>("compare", Some(path), None, Err(err), start),
    };
    let instance = Some(echo(&family, cfg.seed));
    let (members, rhs): (&MatrixFamily, Subspace) = match &family {
        AnyFamily::General(f) => (f, theorem_span(f, cfg)),
        AnyFamily::Psd(p) => (p.as_family(), corollary5_span(p, cfg)),
    };
    let samples = match mode {
        CompareMode::Basis => None,
        CompareMode::Random => Some(samples.unwrap_or(members.n() + 5)),
    };
    let lhs = match samples {
        None => basis_product_oracle(members, cfg),
        Some(s) => random_sample_span(members, s, cfg),
    };
    let result = lhs.and_then(|lhs| {
        let distance = rhs.distance(&lhs)?;
        let agree = distance <= cfg.subspace_tol;
        let payload = ComparePayload {
            mode,
            theorem_rank: rhs.rank(),
            oracle_rank: lhs.rank(),
            distance,
            tol: cfg.subspace_tol,
            samples,
            agree,
        };
        Ok((payload, if agree { EXIT_OK } else { EXIT_MISMATCH }))
    });
    render("compare", Some(path), instance, result, start)
}

#[derive(Debug, Serialize)]
pub struct VerifyPayload {
    #[serde(flatten)]
    pub report: VerificationReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sampler: Option<SamplerSummary>,
}

#[derive(Debug, Serialize)]
pub struct SamplerSummary {
    pub rank: usize,
    pub samples_drawn: usize,
    pub stabilized: bool,
    pub distance_to_corollary5: f64,
}

impl SamplerSummary {
    fn new(run: &SamplerRun, target: &Subspace) -> Result<Self, HspanError> {
        Ok(Self {
            rank: run.subspace.rank(),
            samples_drawn: run.samples_drawn,
            stabilized: run.stabilized,
            distance_to_corollary5: run.subspace.distance(target)?,
        })
    }
}

pub fn cmd_verify(path: &Path, opts: &VerifyOptions, cfg: &ToleranceConfig) -> Outcome {
    let start = Instant::now();
    let family = match load(path) {
        Ok(f) => f,
        Err(err) => return render::<VerifyPayload>("verify", Some(path), None, Err(err), start),
    };
    let instance = Some(echo(&family, cfg.seed));
    let result = verify_all(&family, opts, cfg).and_then(|report| {
        let sampler = match &family {
            AnyFamily::General(_) => None,
            AnyFamily::Psd(p) => {
                let run = corollary4_sample_run(p, cfg);
                Some(SamplerSummary::new(&run, &corollary5_span(p, cfg))?)
            }
        };
        let code = if report.passed {
            EXIT_OK
        } else {
            EXIT_MISMATCH
        };
        Ok((VerifyPayload { report, sampler }, code))
    });
    render("verify", Some(path), instance, result, start)
}

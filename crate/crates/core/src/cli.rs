//! Command-line front end: TOML problem files in, JSON or text reports
//! out, with a stable exit-code contract.
//!
//! Exit codes: 0 success (including an empty verdict), 1 parse or
//! validation error, 2 unsupported pair, 3 verification failure, 4 empty
//! verdict under --expect-exists.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::domains::{
    Classification, DomainSpec, Lower, MonomialMap, QuadExtRepr,
};
use crate::field::QuadExt;
use crate::solver::{decide, Certificate, Existence, MapFamily, Theorem, Verdict};
use crate::verify::{
    oracle_membership, verify_instance, instantiate_family, MapInstance, SamplePlan,
    VerificationReport, VerifyError,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 1;
pub const EXIT_UNSUPPORTED: i32 = 2;
pub const EXIT_VERIFY_FAILED: i32 = 3;
pub const EXIT_EMPTY_EXPECTED_EXISTS: i32 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "reinhardt-propmap",
    version,
    about = "Decide and enumerate proper holomorphic maps between 2D pseudoconvex \
             Reinhardt domains with strip or half-plane logarithmic image"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Canonicalize both domains and print tags with witness maps
    Classify {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Decide existence and print the verdict with its certificate
    Decide {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// exit 4 when the verdict is empty
        #[arg(long)]
        expect_exists: bool,
    },
    /// Decide and additionally print the full map-family descriptor
    Enumerate {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Instantiate the family and run all numerical checks
    Verify {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// absolute tolerance on log-scale quantities
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// log|b| as a field-element string; log|a| is fixed by the
        /// coefficient constraint
        #[arg(long)]
        coeff: Option<String>,
        /// test hook: corrupt one exponent, e.g. "E11+1"
        #[arg(long)]
        mutate: Option<String>,
    },
    /// Brute-force scan for representations x = k + l*beta
    Oracle {
        /// field element, e.g. "3+2√"
        x: String,
        /// field element, e.g. "0+1√" or "3/7"
        beta: String,
        /// scan bound on |k|, |l|
        bound: u64,
        /// shared radicand for x and beta (0 for rationals)
        #[arg(long, default_value_t = 0)]
        radicand: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

/// On-disk problem description. Field elements are grammar strings under
/// the declared radicand; the optional second radicand covers the target.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct ProblemFile {
    pub radicand: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radicand2: Option<u64>,
    pub source: SpecBlock,
    pub target: SpecBlock,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plan: Option<PlanBlock>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct SpecBlock {
    pub alpha: [String; 2],
    /// exact lower log-radius; mutually exclusive with `lower`
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub log_lower: Option<String>,
    /// "negative" or "zero" for the unbounded-below categories
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lower: Option<String>,
    pub log_upper: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct PlanBlock {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary_margin: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn parse(message: impl Into<String>) -> Self {
        CliError { code: EXIT_PARSE, message: message.into() }
    }
}

impl ProblemFile {
    pub fn parse_str(text: &str) -> Result<Self, CliError> {
        if text.contains("radiusPowerOfE") {
            return Err(CliError::parse(
                "key \"radiusPowerOfE\" is not accepted: radii must be given as exact \
                 log-values via \"logLower\"/\"logUpper\"",
            ));
        }
        toml::from_str(text).map_err(|e| CliError::parse(format!("problem file: {e}")))
    }

    fn spec(&self, block: &SpecBlock, d: u64) -> Result<DomainSpec, CliError> {
        let parse = |s: &str| {
            QuadExt::parse(s, d).map_err(|e| CliError::parse(format!("element {s:?}: {e}")))
        };
        let alpha = (parse(&block.alpha[0])?, parse(&block.alpha[1])?);
        let log_upper = parse(&block.log_upper)?;
        let lower = match (&block.log_lower, block.lower.as_deref()) {
            (Some(v), None) => Lower::Positive(parse(v)?),
            (None, Some("negative")) => Lower::Negative,
            (None, Some("zero")) => Lower::Zero,
            (None, Some(other)) => {
                return Err(CliError::parse(format!(
                    "lower must be \"negative\" or \"zero\", got {other:?}"
                )))
            }
            (Some(_), Some(_)) => {
                return Err(CliError::parse("give either logLower or lower, not both"))
            }
            (None, None) => {
                return Err(CliError::parse("missing lower bound: set logLower or lower"))
            }
        };
        DomainSpec::new(alpha, lower, log_upper)
            .map_err(|e| CliError::parse(format!("invalid spec: {e}")))
    }

    pub fn source_spec(&self) -> Result<DomainSpec, CliError> {
        self.spec(&self.source, self.radicand)
    }

    pub fn target_spec(&self) -> Result<DomainSpec, CliError> {
        self.spec(&self.target, self.radicand2.unwrap_or(self.radicand))
    }

    pub fn plan(&self, samples: Option<usize>, seed: Option<u64>, tol: Option<f64>) -> SamplePlan {
        let defaults = SamplePlan::default();
        let block = self.plan.clone().unwrap_or(PlanBlock {
            count: None,
            seed: None,
            boundary_margin: None,
            tolerance: None,
        });
        SamplePlan {
            count: samples.or(block.count).unwrap_or(defaults.count),
            seed: seed.or(block.seed).unwrap_or(defaults.seed),
            boundary_margin: block.boundary_margin.unwrap_or(defaults.boundary_margin),
            tolerance: tol.or(block.tolerance).unwrap_or(defaults.tolerance),
        }
    }
}

/// Serializable view of a witness monomial map.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct WitnessDoc {
    pub exponents: [[String; 2]; 2],
    pub log_moduli: [QuadExtRepr; 2],
    pub phases: [f64; 2],
    pub det: String,
}

impl From<&MonomialMap> for WitnessDoc {
    fn from(m: &MonomialMap) -> Self {
        let s = |b: &BigInt| b.to_string();
        WitnessDoc {
            exponents: [
                [s(&m.exponents[0][0]), s(&m.exponents[0][1])],
                [s(&m.exponents[1][0]), s(&m.exponents[1][1])],
            ],
            log_moduli: [(&m.log_moduli.0).into(), (&m.log_moduli.1).into()],
            phases: [m.phases.0, m.phases.1],
            det: s(&m.det()),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ClassifyDoc {
    pub tag: String,
    pub canonical: crate::domains::CanonicalDomain,
    pub witness: WitnessDoc,
    pub trail: Vec<String>,
}

impl From<&Classification> for ClassifyDoc {
    fn from(c: &Classification) -> Self {
        ClassifyDoc {
            tag: c.canonical.tag_name().to_string(),
            canonical: c.canonical.clone(),
            witness: (&c.witness).into(),
            trail: c.trail.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct InstanceDoc {
    pub label: String,
    pub report: VerificationReport,
}

/// Machine-readable report emitted by every subcommand.
#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ReportDocument {
    pub tool_version: String,
    pub command: String,
    pub input_echo: ProblemFile,
    pub source: ClassifyDoc,
    pub target: ClassifyDoc,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theorem: Option<Theorem>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<MapFamily>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verification: Option<Vec<InstanceDoc>>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
}

fn verdict_str(v: &Verdict) -> String {
    match v.existence {
        Existence::Exists => "exists",
        Existence::Empty => "empty",
        Existence::Unsupported => "unsupported",
    }
    .to_string()
}

fn color_enabled() -> bool {
    std::env::var_os("REINHARDT_PROPMAP_NO_COLOR").is_none()
}

fn paint(text: &str, code: &str) -> String {
    if color_enabled() {
        format!("\x1b[{code}m{text}\x1b[0m")
    } else {
        text.to_string()
    }
}

fn emit(doc: &ReportDocument, format: Format, out: &mut String) {
    match format {
        Format::Json => {
            out.push_str(&serde_json::to_string_pretty(doc).expect("report serializes"));
            out.push('\n');
        }
        Format::Text => {
            out.push_str(&format!(
                "source: {} (witness det {})\n",
                doc.source.tag, doc.source.witness.det
            ));
            for step in &doc.source.trail {
                out.push_str(&format!("  - {step}\n"));
            }
            out.push_str(&format!(
                "target: {} (witness det {})\n",
                doc.target.tag, doc.target.witness.det
            ));
            for step in &doc.target.trail {
                out.push_str(&format!("  - {step}\n"));
            }
            if let Some(v) = &doc.verdict {
                let colored = match v.as_str() {
                    "exists" => paint(v, "32"),
                    "empty" => paint(v, "33"),
                    _ => paint(v, "31"),
                };
                out.push_str(&format!("verdict: {colored}"));
                if let Some(t) = &doc.theorem {
                    out.push_str(&format!("  [{}]", t.label()));
                }
                out.push('\n');
            }
            if let Some(c) = &doc.certificate {
                match c {
                    Certificate::Quadruple { k1, k2, l1, l2 } => {
                        out.push_str(&format!("certificate: (k1,k2,l1,l2) = ({k1},{k2},{l1},{l2})\n"))
                    }
                    Certificate::BaseDegree { m } => {
                        out.push_str(&format!("certificate: base degree m = {m}\n"))
                    }
                }
            }
            if let Some(f) = &doc.family {
                out.push_str(&format!(
                    "family: {}\n",
                    serde_json::to_string(f).expect("family serializes")
                ));
            }
            if let Some(reports) = &doc.verification {
                for r in reports {
                    let status = if r.report.passed {
                        paint("pass", "32")
                    } else {
                        paint("FAIL", "31")
                    };
                    out.push_str(&format!(
                        "verify {}: {} (containment {:.4}, level spread {:.3e}, homogeneity {:.3e})\n",
                        r.label,
                        status,
                        r.report.containment_pass_rate,
                        r.report.level_set_max_deviation,
                        r.report.homogeneity_max_deviation.unwrap_or(f64::NAN),
                    ));
                    for fail in &r.report.failures {
                        out.push_str(&format!("    failure: {fail}\n"));
                    }
                    if let Some(d) = &r.report.constraint_discrimination {
                        out.push_str(&format!("    constraint: {d}\n"));
                    }
                }
            }
            for n in &doc.notes {
                out.push_str(&format!("note: {n}\n"));
            }
        }
    }
}

fn load(file: &PathBuf) -> Result<ProblemFile, CliError> {
    let text = std::fs::read_to_string(file)
        .map_err(|e| CliError::parse(format!("{}: {e}", file.display())))?;
    ProblemFile::parse_str(&text)
}

struct Decided {
    problem: ProblemFile,
    source: Classification,
    target: Classification,
    verdict: Verdict,
}

fn run_decide(file: &PathBuf) -> Result<Decided, CliError> {
    let problem = load(file)?;
    let src = problem.source_spec()?;
    let dst = problem.target_spec()?;
    let decision = decide(&src, &dst).map_err(|e| CliError::parse(format!("{e}")))?;
    Ok(Decided {
        problem,
        source: decision.src,
        target: decision.dst,
        verdict: decision.verdict,
    })
}

fn base_document(command: &str, d: &Decided) -> ReportDocument {
    ReportDocument {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        command: command.to_string(),
        input_echo: d.problem.clone(),
        source: (&d.source).into(),
        target: (&d.target).into(),
        verdict: Some(verdict_str(&d.verdict)),
        theorem: Some(d.verdict.theorem),
        certificate: d.verdict.certificate.clone(),
        family: None,
        verification: None,
        notes: d.verdict.notes.clone(),
    }
}

/// Parse a mutation spec like "E11+1" into (row, col, delta).
fn parse_mutation(spec: &str) -> Result<(usize, usize, i64), CliError> {
    let err = || CliError::parse(format!("mutation spec {spec:?}: expected e.g. \"E11+1\""));
    let rest = spec.strip_prefix('E').ok_or_else(err)?;
    let mut chars = rest.chars();
    let row = chars.next().and_then(|c| c.to_digit(10)).ok_or_else(err)? as usize;
    let col = chars.next().and_then(|c| c.to_digit(10)).ok_or_else(err)? as usize;
    if !(1..=2).contains(&row) || !(1..=2).contains(&col) {
        return Err(err());
    }
    let delta: i64 = chars.as_str().parse().map_err(|_| err())?;
    Ok((row - 1, col - 1, delta))
}

fn apply_mutation(inst: &mut MapInstance, row: usize, col: usize, delta: i64) {
    if let MapInstance::Monomial(m) = inst {
        m.exponents[row][col] += BigInt::from(delta);
    }
}

pub fn execute<I, T>(args: I, out: &mut String) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            out.push_str(&e.to_string());
            out.push('\n');
            return if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
        }
    };
    match run_command(cli, out) {
        Ok(code) => code,
        Err(e) => {
            out.push_str(&format!("error: {}\n", e.message));
            e.code
        }
    }
}

fn run_command(cli: Cli, out: &mut String) -> Result<i32, CliError> {
    match cli.command {
        Command::Classify { file, format } => {
            let d = run_decide(&file)?;
            let mut doc = base_document("classify", &d);
            doc.verdict = None;
            doc.theorem = None;
            doc.certificate = None;
            doc.notes = Vec::new();
            emit(&doc, format, out);
            Ok(EXIT_OK)
        }
        Command::Decide { file, format, expect_exists } => {
            let d = run_decide(&file)?;
            let doc = base_document("decide", &d);
            emit(&doc, format, out);
            Ok(match d.verdict.existence {
                Existence::Exists => EXIT_OK,
                Existence::Empty => {
                    if expect_exists {
                        EXIT_EMPTY_EXPECTED_EXISTS
                    } else {
                        EXIT_OK
                    }
                }
                Existence::Unsupported => EXIT_UNSUPPORTED,
            })
        }
        Command::Enumerate { file, format } => {
            let d = run_decide(&file)?;
            let mut doc = base_document("enumerate", &d);
            doc.family = Some(d.verdict.family.clone());
            emit(&doc, format, out);
            Ok(match d.verdict.existence {
                Existence::Unsupported => EXIT_UNSUPPORTED,
                _ => EXIT_OK,
            })
        }
        Command::Verify { file, format, tol, samples, seed, coeff, mutate } => {
            let d = run_decide(&file)?;
            match d.verdict.existence {
                Existence::Unsupported => {
                    let doc = base_document("verify", &d);
                    emit(&doc, format, out);
                    return Ok(EXIT_UNSUPPORTED);
                }
                Existence::Empty => {
                    let mut doc = base_document("verify", &d);
                    doc.notes.push("nothing to verify: the family is empty".into());
                    emit(&doc, format, out);
                    return Ok(EXIT_OK);
                }
                Existence::Exists => {}
            }
            let plan = d.problem.plan(samples, seed, tol);
            let coeff_log_b = match &coeff {
                None => None,
                Some(s) => {
                    let d2 = d.problem.radicand2.unwrap_or(d.problem.radicand);
                    Some(
                        QuadExt::parse(s, d2)
                            .map_err(|e| CliError::parse(format!("--coeff {s:?}: {e}")))?,
                    )
                }
            };
            let mutation = mutate.as_deref().map(parse_mutation).transpose()?;
            let instances = instantiate_family(
                &d.verdict.family,
                &d.target.canonical,
                coeff_log_b.as_ref(),
            )
            .map_err(|e| CliError::parse(format!("{e}")))?;
            let mut docs = Vec::new();
            let mut all_passed = true;
            for (label, mut inst) in instances {
                if let Some((r, c, delta)) = mutation {
                    apply_mutation(&mut inst, r, c, delta);
                }
                let report = verify_instance(&inst, &d.source.canonical, &d.target.canonical, &plan)
                    .map_err(|e| match e {
                        VerifyError::NotApplicable(m) => CliError::parse(m),
                        VerifyError::Domain(m) => CliError::parse(format!("{m}")),
                    })?;
                all_passed &= report.passed;
                docs.push(InstanceDoc { label, report });
            }
            let mut doc = base_document("verify", &d);
            doc.verification = Some(docs);
            emit(&doc, format, out);
            Ok(if all_passed { EXIT_OK } else { EXIT_VERIFY_FAILED })
        }
        Command::Oracle { x, beta, bound, radicand, format } => {
            if bound < 1 {
                return Err(CliError::parse("bound must be >= 1"));
            }
            let xv = QuadExt::parse(&x, radicand)
                .map_err(|e| CliError::parse(format!("x {x:?}: {e}")))?;
            let bv = QuadExt::parse(&beta, radicand)
                .map_err(|e| CliError::parse(format!("beta {beta:?}: {e}")))?;
            let hits = oracle_membership(&xv, &bv, bound);
            match format {
                Format::Json => {
                    let rows: Vec<[String; 2]> = hits
                        .iter()
                        .map(|(k, l)| [k.to_string(), l.to_string()])
                        .collect();
                    out.push_str(&serde_json::to_string_pretty(&rows).expect("serializes"));
                    out.push('\n');
                }
                Format::Text => {
                    if hits.is_empty() {
                        out.push_str("no representations\n");
                    }
                    for (k, l) in &hits {
                        out.push_str(&format!("x = {k} + {l}*beta\n"));
                    }
                }
            }
            Ok(EXIT_OK)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"
radicand = 2

[source]
alpha = ["1", "1+1√"]
logLower = "-1"
logUpper = "1"

[target]
alpha = ["1", "0+1√"]
logLower = "-3-2√"
logUpper = "3+2√"
"#;

    #[test]
    fn problem_file_roundtrip() {
        let p = ProblemFile::parse_str(SAMPLE).unwrap();
        let text = toml::to_string(&p).unwrap();
        let again = ProblemFile::parse_str(&text).unwrap();
        assert_eq!(p, again);
    }

    #[test]
    fn radius_power_of_e_rejected_with_hint() {
        let bad = SAMPLE.replace("logUpper = \"1\"", "radiusPowerOfE = \"1\"");
        let err = ProblemFile::parse_str(&bad).unwrap_err();
        assert_eq!(err.code, EXIT_PARSE);
        assert!(err.message.contains("logLower"));
    }

    #[test]
    fn specs_build() {
        let p = ProblemFile::parse_str(SAMPLE).unwrap();
        p.source_spec().unwrap();
        p.target_spec().unwrap();
    }

    #[test]
    fn mutation_spec_parses() {
        assert_eq!(parse_mutation("E11+1").unwrap(), (0, 0, 1));
        assert_eq!(parse_mutation("E21-3").unwrap(), (1, 0, -3));
        assert!(parse_mutation("X11+1").is_err());
        assert!(parse_mutation("E31+1").is_err());
    }

    #[test]
    fn malformed_element_position_diagnostic() {
        let bad = SAMPLE.replace("\"1+1√\"", "\"3+√\"");
        let p = ProblemFile::parse_str(&bad).unwrap();
        let err = p.source_spec().unwrap_err();
        assert_eq!(err.code, EXIT_PARSE);
        assert!(err.message.contains("position") || err.message.contains("3+√"), "{}", err.message);
    }
}

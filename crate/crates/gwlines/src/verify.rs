//! Zero analysis, certificates and the seeded verification suites.
//!
//! Every suite draws its trials from one ChaCha stream per trial index, so a
//! trial is reproducible from `(seed, trial)` alone, and every certificate
//! embeds its input configuration.

use std::fmt::Write as _;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::{ConfigDoc, ConfigError, Parsed, Sample};
use crate::crossratio::{lambda_mu, CrossRatioError};
use crate::field::{poly, AnyField, Field, FieldError, FieldExtension, FiniteField, Trivial};
use crate::grassmann::Line;
use crate::gw::{trace_form, GwClass, GwError, GwField};
use crate::linalg;
use crate::localindex::zeros::{zero_locus_bruteforce, ZeroLocus};
use crate::localindex::{local_index_value, IndexError, Method, PlaneConfig};
use crate::transversals::{lines_meeting_four, TransversalError, Transversals};
use crate::weil::{local_index_res, local_index_res_oracle, res_zeros, EtaleAlgebra, ResSection, ResZero, WeilError};

/// Draws per trial before giving up on finding a general configuration.
const MAX_ATTEMPTS: usize = 1000;

#[derive(Debug, thiserror::Error)]
pub enum TrialError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Gw(#[from] GwError),
    #[error(transparent)]
    Index(#[from] IndexError),
    #[error(transparent)]
    Transversal(#[from] TransversalError),
    #[error(transparent)]
    CrossRatio(#[from] CrossRatioError),
    #[error(transparent)]
    Weil(#[from] WeilError),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl TrialError {
    /// The configuration violates a general-position hypothesis, as opposed
    /// to being malformed.
    pub fn is_genericity(&self) -> bool {
        fn index(e: &IndexError) -> bool {
            matches!(e, IndexError::Misses(_) | IndexError::NonSimple | IndexError::Degenerate(_))
        }
        fn transversal(e: &TransversalError) -> bool {
            matches!(e, TransversalError::Intersecting(..) | TransversalError::Degenerate(_) | TransversalError::Tangent)
        }
        match self {
            TrialError::Index(e) => index(e),
            TrialError::Transversal(e) => transversal(e),
            TrialError::CrossRatio(e) => !matches!(e, CrossRatioError::Field(_) | CrossRatioError::Geometry(_) | CrossRatioError::Gw(_) | CrossRatioError::Shape),
            TrialError::Weil(WeilError::Index(e)) => index(e),
            TrialError::Weil(WeilError::Transversal(e)) => transversal(e),
            _ => false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub ok: bool,
}

fn check(checks: &mut Vec<Check>, name: impl Into<String>, ok: bool) {
    checks.push(Check { name: name.into(), ok });
}

/// One closed point of the zero locus as it appears in a certificate.
#[derive(Debug, Clone, Default, Serialize)]
pub struct ZeroReport {
    /// Residue field.
    pub field: String,
    pub degree: usize,
    /// Basis of the line over the residue field.
    pub line: Vec<Vec<String>>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub plucker: Vec<String>,
    /// `L ∩ L_i` for `n = 3`.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub intersections: Vec<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub det_j: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub i_l: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_minus_mu: Option<String>,
    /// Diagonal of the local index over the base field.
    pub index: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub index_oracle: Option<Vec<String>>,
}

/// A certificate for one configuration.
#[derive(Debug, Clone, Serialize)]
pub struct TrialReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trial: Option<usize>,
    pub outcome: Outcome,
    /// General-position rejections before this draw.
    #[serde(skip_serializing_if = "is_zero")]
    pub rejected: usize,
    pub input: serde_json::Value,
    /// Number of geometric zeros found, and the number expected.
    pub accounted: usize,
    pub expected: usize,
    pub zeros: Vec<ZeroReport>,
    pub euler_class: Vec<String>,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

fn is_zero(n: &usize) -> bool {
    *n == 0
}

impl TrialReport {
    fn new(input: serde_json::Value, expected: usize) -> Self {
        TrialReport {
            trial: None,
            outcome: Outcome::Inconclusive,
            rejected: 0,
            input,
            accounted: 0,
            expected,
            zeros: Vec::new(),
            euler_class: Vec::new(),
            checks: Vec::new(),
            note: None,
        }
    }

    fn finish(mut self) -> Self {
        self.outcome = if self.checks.iter().all(|c| c.ok) { Outcome::Pass } else { Outcome::Fail };
        self
    }

    fn failed_with(input: serde_json::Value, expected: usize, e: &TrialError) -> Self {
        let mut r = TrialReport::new(input, expected);
        r.outcome = Outcome::Fail;
        r.note = Some(e.to_string());
        r
    }

    pub fn check(&self, name: &str) -> Option<bool> {
        let mut hits = self.checks.iter().filter(|c| c.name == name).peekable();
        hits.peek()?;
        Some(hits.all(|c| c.ok))
    }
}

/// `(2n − 2)! / (n! (n − 1)!)`, the number of transversal lines.
pub fn expected_count(n: usize) -> usize {
    let m = n - 1;
    let mut c: u128 = 1;
    for i in 0..m as u128 {
        c = c * (2 * m as u128 - i) / (i + 1);
    }
    (c / (m as u128 + 1)) as usize
}

/// `N_{top/base}(a)`, as the determinant of multiplication by `a`.
pub fn norm<X: FieldExtension>(ext: &X, a: &<X::Top as Field>::Elem) -> Result<<X::Base as Field>::Elem, FieldError> {
    let (k, t) = (ext.base(), ext.top());
    let basis = ext.basis();
    let gram: Vec<Vec<_>> = basis.iter().map(|x| basis.iter().map(|y| ext.trace(&t.mul(x, y))).collect()).collect();
    let ginv = linalg::inverse(k, &gram).ok_or_else(|| FieldError::Invalid("inseparable extension".into()))?;
    let cols: Vec<Vec<_>> = basis
        .iter()
        .map(|b| {
            let y = t.mul(a, b);
            let rhs: Vec<_> = basis.iter().map(|x| ext.trace(&t.mul(x, &y))).collect();
            linalg::matvec(k, &ginv, &rhs)
        })
        .collect();
    Ok(linalg::det(k, &linalg::transpose(&cols)))
}

/// Everything computed at one zero, kept over the base field `K`.
struct ZeroData<K: GwField> {
    report: ZeroReport,
    degree: usize,
    jacobian: GwClass<K>,
    geometric: GwClass<K>,
    cross_ratio: Option<GwClass<K>>,
    /// `det J` when it lies in `K`.
    det_j: Option<K::Elem>,
    /// `det J / (λ − μ)` when it lies in `K`, and its norm to `K`.
    unit: Option<K::Elem>,
    unit_norm: Option<K::Elem>,
    /// Whether `λ − μ` is a square in the residue field.
    lm_square: Option<bool>,
    lambda_mu: Option<(K::Elem, K::Elem)>,
}

fn format_row<F: Field>(f: &F, v: &[F::Elem]) -> Vec<String> {
    v.iter().map(|x| f.format(x)).collect()
}

fn analyze_zero<X>(parsed: &Parsed<X::Base>, ext: &X, line: &Line<X::Top>) -> Result<ZeroData<X::Base>, TrialError>
where
    X: FieldExtension,
    X::Base: GwField,
{
    let t = ext.top();
    let cfg = parsed.planes.embed(ext);
    let j = local_index_value(&cfg, line, Method::Jacobian)?;
    let g = local_index_value(&cfg, line, Method::Geometric)?;
    let jacobian = trace_form(ext, &j)?;
    let geometric = trace_form(ext, &g)?;
    let [r0, r1] = line.rows();
    let mut report = ZeroReport {
        field: t.descriptor(),
        degree: ext.degree(),
        line: vec![format_row(t, r0), format_row(t, r1)],
        det_j: Some(t.format(&j)),
        i_l: Some(t.format(&g)),
        index: jacobian.format_entries(),
        ..ZeroReport::default()
    };
    let mut data = ZeroData {
        report: ZeroReport::default(),
        degree: ext.degree(),
        jacobian,
        geometric,
        cross_ratio: None,
        det_j: ext.restrict(&j),
        unit: None,
        unit_norm: None,
        lm_square: None,
        lambda_mu: None,
    };
    if let Some(lines) = &parsed.lines {
        report.plucker = format_row(t, &line.plucker());
        let up: Vec<Line<X::Top>> = lines.iter().map(|m| m.embed(ext)).collect();
        let cr = lambda_mu(&up, line)?;
        let diff = cr.difference(t);
        if t.is_zero(&diff) {
            return Err(CrossRatioError::LambdaEqualsMu.into());
        }
        report.intersections = cr.points.iter().map(|p| format_row(t, p)).collect();
        report.lambda = Some(t.format(&cr.lambda));
        report.mu = Some(t.format(&cr.mu));
        report.lambda_minus_mu = Some(t.format(&diff));
        let ratio = t.div(&j, &diff)?;
        data.cross_ratio = Some(trace_form(ext, &diff)?);
        data.unit = ext.restrict(&ratio);
        data.unit_norm = Some(norm(ext, &ratio)?);
        data.lm_square = Some(t.is_square(&diff)?);
        data.lambda_mu = match (ext.restrict(&cr.lambda), ext.restrict(&cr.mu)) {
            (Some(l), Some(m)) => Some((l, m)),
            _ => None,
        };
    }
    data.report = report;
    Ok(data)
}

/// Trial-level checks shared by every route that produces plane-section zeros.
fn assess<K: GwField>(k: &K, n: usize, zeros: Vec<ZeroData<K>>, report: &mut TrialReport) -> Result<(), TrialError> {
    let expected = expected_count(n);
    report.accounted = zeros.iter().map(|z| z.degree).sum();
    check(&mut report.checks, "count", report.accounted == expected);
    let h = GwClass::hyperbolic(k, expected / 2);
    let euler = GwClass::sum(k, zeros.iter().map(|z| &z.jacobian))?;
    let geo = GwClass::sum(k, zeros.iter().map(|z| &z.geometric))?;
    check(&mut report.checks, "euler-class", euler.gw_equal(&h)?);
    check(&mut report.checks, "geometric-sum", geo.gw_equal(&h)?);
    for z in &zeros {
        check(&mut report.checks, "jacobian=geometric", z.jacobian.gw_equal(&z.geometric)?);
    }
    if zeros.iter().all(|z| z.cross_ratio.is_some()) {
        let cr = GwClass::sum(k, zeros.iter().filter_map(|z| z.cross_ratio.as_ref()))?;
        check(&mut report.checks, "cross-ratio-sum", cr.gw_equal(&h)?);
        // det J/(λ − μ) must come from one unit u of k: rational zeros give
        // u itself up to squares, a degree-2 point needs its norm to be a square.
        let rational: Vec<&K::Elem> = zeros.iter().filter(|z| z.degree == 1).filter_map(|z| z.unit.as_ref()).collect();
        let mut ok = rational.windows(2).all(|w| k.is_square(&k.mul(w[0], w[1])).unwrap_or(false));
        for z in zeros.iter().filter(|z| z.degree == 2) {
            ok &= z.unit_norm.as_ref().is_some_and(|u| k.is_square(u).unwrap_or(false));
        }
        check(&mut report.checks, "common-unit", ok);
        let rat: Vec<&ZeroData<K>> = zeros.iter().filter(|z| z.degree == 1).collect();
        if rat.len() == 2 {
            if let (Some(a), Some(b)) = (&rat[0].lambda_mu, &rat[1].lambda_mu) {
                check(&mut report.checks, "swap-symmetry", a.1 == b.0 && b.1 == a.0);
            }
            if let (Some(a), Some(b)) = (&rat[0].det_j, &rat[1].det_j) {
                check(&mut report.checks, "opposite-pair", k.is_square(&k.neg(&k.mul(a, b)))?);
            }
        }
        if let Some(q) = k.order() {
            // λ − μ at a degree-2 transversal is a square iff q ≡ 3 mod 4.
            for z in zeros.iter().filter(|z| z.degree == 2) {
                check(&mut report.checks, "fq-square-class", z.lm_square == Some(q % 4 == 3));
            }
        }
    }
    report.euler_class = euler.format_entries();
    report.zeros = zeros.into_iter().map(|z| z.report).collect();
    Ok(())
}

fn zeros_n3<F: GwField>(parsed: &Parsed<F>) -> Result<Vec<ZeroData<F>>, TrialError> {
    let f = parsed.planes.field();
    let lines = parsed.lines.as_ref().ok_or_else(|| TrialError::Unsupported("transversals need n = 3".into()))?;
    Ok(match lines_meeting_four(lines)? {
        Transversals::Rational([a, b]) => {
            let ext = Trivial(f.clone());
            vec![analyze_zero(parsed, &ext, &a)?, analyze_zero(parsed, &ext, &b)?]
        }
        Transversals::Conjugate { ext, line, .. } => vec![analyze_zero(parsed, &ext, &line)?],
    })
}

/// Zero locus over a finite field, sweeping degree `max_degree` only when
/// the count left after the lower degrees could still be made up by it.
pub fn staged_zero_locus(cfg: &PlaneConfig<FiniteField>, max_degree: usize) -> Result<ZeroLocus, IndexError> {
    let expected = expected_count(cfg.n());
    if max_degree >= 3 {
        let low = zero_locus_bruteforce(cfg, max_degree - 1)?;
        let rest = expected as isize - low.accounted as isize;
        if rest <= 0 || rest % max_degree as isize != 0 {
            return Ok(low);
        }
    }
    zero_locus_bruteforce(cfg, max_degree)
}

fn zeros_finite(parsed: &Parsed<FiniteField>, max_degree: usize, report: &mut TrialReport) -> Result<Option<Vec<ZeroData<FiniteField>>>, TrialError> {
    let locus = staged_zero_locus(&parsed.planes, max_degree)?;
    report.accounted = locus.accounted;
    if locus.accounted != report.expected {
        // A short count is only inconclusive when every zero found is simple.
        for p in &locus.points {
            local_index_value(&parsed.planes.embed(&p.ext), &p.line, Method::Jacobian)?;
        }
        return Ok(None);
    }
    let zeros = locus.points.iter().map(|p| analyze_zero(parsed, &p.ext, &p.line)).collect::<Result<Vec<_>, _>>()?;
    Ok(Some(zeros))
}

/// Certificate for a configuration document. Over finite fields with
/// `n ≥ 5` the zero locus is searched up to residue degree `max_degree`.
pub fn solve(doc: &ConfigDoc, max_degree: usize) -> Result<TrialReport, TrialError> {
    let input = serde_json::to_value(doc).expect("serializable");
    let mut report = TrialReport::new(input, expected_count(doc.n.max(3)));
    match doc.field()? {
        AnyField::Rationals(f) => {
            let p = doc.build(&f)?;
            let z = zeros_n3(&p)?;
            assess(&f, doc.n, z, &mut report)?;
        }
        AnyField::QuadRationals(f) => {
            let p = doc.build(&f)?;
            let z = zeros_n3(&p)?;
            assess(&f, doc.n, z, &mut report)?;
        }
        AnyField::Finite(f) => {
            let p = doc.build(&f)?;
            if doc.n == 3 {
                let z = zeros_n3(&p)?;
                assess(&f, doc.n, z, &mut report)?;
            } else {
                match zeros_finite(&p, max_degree, &mut report)? {
                    Some(z) => assess(&f, doc.n, z, &mut report)?,
                    None => {
                        report.note = Some(format!("{} of {} zeros found up to degree {max_degree}", report.accounted, report.expected));
                        return Ok(report);
                    }
                }
            }
        }
    }
    Ok(report.finish())
}

// ---------------------------------------------------------------- suites

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Thm1,
    Thm2,
    CorFq,
    Appendix,
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "thm1" => Ok(Suite::Thm1),
            "thm2" => Ok(Suite::Thm2),
            "cor-fq" => Ok(Suite::CorFq),
            "appendix" => Ok(Suite::Appendix),
            _ => Err(format!("unknown suite {s:?}; expected thm1, thm2, cor-fq or appendix")),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyOptions {
    pub field: String,
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub max_degree: usize,
    /// Coefficient bound for samples over ℚ.
    pub bound: i64,
    /// Étale algebra for the appendix suite: `split`, `quartic` or `biquadratic a b`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub algebra: Option<String>,
    /// Conclusive trials needed for an overall pass.
    pub min_conclusive: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { field: "Q".into(), n: 3, trials: 10, seed: 0, max_degree: 2, bound: 10, algebra: None, min_conclusive: 1 }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub options: VerifyOptions,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<Check>,
    pub trials: Vec<TrialReport>,
    pub passed: usize,
    pub failed: usize,
    pub inconclusive: usize,
    pub verdict: Outcome,
}

fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

/// Draws configurations until `run` accepts one as general.
fn sampled_trial<F, R>(f: &F, opts: &VerifyOptions, trial: usize, mut run: R) -> TrialReport
where
    F: Sample,
    R: FnMut(&ConfigDoc) -> Result<TrialReport, TrialError>,
{
    let mut rng = trial_rng(opts.seed, trial);
    let expected = expected_count(opts.n);
    for rejected in 0..MAX_ATTEMPTS {
        let doc = crate::config::random_doc(f, opts.n, &mut rng, opts.bound);
        let input = serde_json::to_value(&doc).expect("serializable");
        match run(&doc) {
            Ok(mut r) => {
                r.trial = Some(trial);
                r.rejected = rejected;
                return r;
            }
            Err(TrialError::Config(_)) => continue,
            Err(e) if e.is_genericity() => continue,
            Err(e) => {
                let mut r = TrialReport::failed_with(input, expected, &e);
                r.trial = Some(trial);
                r.rejected = rejected;
                return r;
            }
        }
    }
    let mut r = TrialReport::new(serde_json::Value::Null, expected);
    r.trial = Some(trial);
    r.rejected = MAX_ATTEMPTS;
    r.note = Some("no general configuration drawn".into());
    r
}

fn n3_trials<F: GwField + Sample>(f: &F, opts: &VerifyOptions) -> Vec<TrialReport> {
    (0..opts.trials)
        .map(|t| {
            sampled_trial(f, opts, t, |doc| {
                let p = doc.build(f)?;
                let mut r = TrialReport::new(serde_json::to_value(doc).expect("serializable"), 2);
                assess(f, 3, zeros_n3(&p)?, &mut r)?;
                Ok(r.finish())
            })
        })
        .collect()
}

fn finite_trials(f: &FiniteField, opts: &VerifyOptions) -> Vec<TrialReport> {
    (0..opts.trials)
        .map(|t| {
            sampled_trial(f, opts, t, |doc| {
                let p = doc.build(f)?;
                let mut r = TrialReport::new(serde_json::to_value(doc).expect("serializable"), expected_count(opts.n));
                match zeros_finite(&p, opts.max_degree, &mut r)? {
                    Some(z) => {
                        assess(f, opts.n, z, &mut r)?;
                        Ok(r.finish())
                    }
                    None => {
                        r.note = Some(format!("{} of {} zeros up to degree {}", r.accounted, r.expected, opts.max_degree));
                        Ok(r)
                    }
                }
            })
        })
        .collect()
}

fn finite_field(opts: &VerifyOptions) -> Result<FiniteField, TrialError> {
    match AnyField::parse(&opts.field)? {
        AnyField::Finite(f) => Ok(f),
        other => Err(TrialError::Unsupported(format!("this suite needs a finite field, not {}", other.descriptor()))),
    }
}

pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> Result<SuiteReport, TrialError> {
    if opts.n < 3 || opts.n % 2 == 0 {
        return Err(TrialError::Unsupported(format!("n = {} must be odd and at least 3", opts.n)));
    }
    let mut checks = Vec::new();
    let trials = match suite {
        Suite::Thm1 | Suite::CorFq => {
            if opts.n != 3 {
                return Err(TrialError::Unsupported("this suite is about four lines in P³ (n = 3)".into()));
            }
            match AnyField::parse(&opts.field)? {
                AnyField::Rationals(f) if suite == Suite::Thm1 => n3_trials(&f, opts),
                AnyField::QuadRationals(f) if suite == Suite::Thm1 => n3_trials(&f, opts),
                AnyField::Finite(f) => n3_trials(&f, opts),
                other => return Err(TrialError::Unsupported(format!("cor-fq needs a finite field, not {}", other.descriptor()))),
            }
        }
        Suite::Thm2 => finite_trials(&finite_field(opts)?, opts),
        Suite::Appendix => {
            if opts.n != 3 {
                return Err(TrialError::Unsupported("the appendix suite lives on Gr(2, 4) (n = 3)".into()));
            }
            appendix_trials(opts, &mut checks)?
        }
    };
    let count = |o: Outcome| trials.iter().filter(|t| t.outcome == o).count();
    let (passed, failed, inconclusive) = (count(Outcome::Pass), count(Outcome::Fail), count(Outcome::Inconclusive));
    let verdict = if failed > 0 || checks.iter().any(|c: &Check| !c.ok) {
        Outcome::Fail
    } else if passed >= opts.min_conclusive.max(1) {
        Outcome::Pass
    } else {
        Outcome::Inconclusive
    };
    Ok(SuiteReport { suite, options: opts.clone(), checks, trials, passed, failed, inconclusive, verdict })
}

// ---------------------------------------------------------------- appendix

#[derive(Serialize)]
struct ResInput {
    algebra: String,
    alpha: Vec<String>,
    beta: Vec<String>,
}

fn appendix_trials(opts: &VerifyOptions, checks: &mut Vec<Check>) -> Result<Vec<TrialReport>, TrialError> {
    let algebra = opts.algebra.clone();
    let words: Vec<&str> = algebra.as_deref().unwrap_or("").split_whitespace().collect();
    match AnyField::parse(&opts.field)? {
        AnyField::Rationals(q) => match words.as_slice() {
            ["split"] => {
                let alg = EtaleAlgebra::split(Trivial(q), 4)?;
                Ok(res_trials(&alg, opts, checks))
            }
            [] | ["biquadratic"] => Ok(res_trials(&EtaleAlgebra::biquadratic(2, 3)?, opts, checks)),
            ["biquadratic", a, b] => {
                let parse = |s: &str| s.parse::<i64>().map_err(|_| TrialError::Unsupported(format!("bad integer {s:?}")));
                Ok(res_trials(&EtaleAlgebra::biquadratic(parse(a)?, parse(b)?)?, opts, checks))
            }
            _ => Err(TrialError::Unsupported(format!("algebra {algebra:?} over Q"))),
        },
        AnyField::Finite(f) => match words.as_slice() {
            ["split"] => Ok(res_trials(&EtaleAlgebra::split(Trivial(f), 4)?, opts, checks)),
            [] | ["quartic"] => {
                if f.m() != 1 {
                    return Err(TrialError::Unsupported("quartic algebras need a prime field".into()));
                }
                // The defining polynomial of F_{p⁴} is an irreducible quartic over F_p.
                let quartic = FiniteField::new(f.p(), 4)?.modulus().to_vec();
                let alg = EtaleAlgebra::finite_field(&f, quartic.clone())?;
                check(checks, "vandermonde-discriminant", alg.det_a_squared()? == poly::discriminant(&f, &quartic));
                Ok(res_trials(&alg, opts, checks))
            }
            _ => Err(TrialError::Unsupported(format!("algebra {algebra:?} over {}", f.descriptor()))),
        },
        other => Err(TrialError::Unsupported(format!("appendix suite over {}", other.descriptor()))),
    }
}

fn res_trials<X>(alg: &EtaleAlgebra<X>, opts: &VerifyOptions, checks: &mut Vec<Check>) -> Vec<TrialReport>
where
    X: FieldExtension,
    X::Base: GwField + Sample,
{
    let k = alg.ext().base();
    check(checks, "det-a-squared-in-k", alg.det_a_squared().is_ok());
    let m = alg.degree();
    (0..opts.trials)
        .map(|trial| {
            let mut rng = trial_rng(opts.seed, trial);
            let mut rejected = 0;
            loop {
                if rejected == MAX_ATTEMPTS {
                    let mut r = TrialReport::new(serde_json::Value::Null, 2);
                    r.trial = Some(trial);
                    r.rejected = rejected;
                    r.note = Some("no general section drawn".into());
                    return r;
                }
                let mut vector = || (0..4).map(|_| (0..m).map(|_| k.sample(&mut rng, opts.bound)).collect::<Vec<_>>()).collect::<Vec<_>>();
                let (alpha, beta) = (vector(), vector());
                let fmt = |v: &Vec<Vec<<X::Base as Field>::Elem>>| v.iter().map(|e| format!("({})", format_row(k, e).join(", "))).collect::<Vec<_>>();
                let input = ResInput { algebra: alg.description().to_string(), alpha: fmt(&alpha), beta: fmt(&beta) };
                let input = serde_json::to_value(&input).expect("serializable");
                let Ok(sec) = ResSection::new(alpha, beta, m) else {
                    rejected += 1;
                    continue;
                };
                match res_trial(alg, &sec, input.clone()) {
                    Ok(mut r) => {
                        r.trial = Some(trial);
                        r.rejected = rejected;
                        return r;
                    }
                    Err(e) if e.is_genericity() => rejected += 1,
                    Err(e) => {
                        let mut r = TrialReport::failed_with(input, 2, &e);
                        r.trial = Some(trial);
                        r.rejected = rejected;
                        return r;
                    }
                }
            }
        })
        .collect()
}

fn res_trial<X>(alg: &EtaleAlgebra<X>, sec: &ResSection<X::Base>, input: serde_json::Value) -> Result<TrialReport, TrialError>
where
    X: FieldExtension,
    X::Base: GwField,
{
    let k = alg.ext().base();
    let mut report = TrialReport::new(input, 2);
    let zeros = res_zeros(alg, sec)?;
    let mut total = GwClass::zero(k);
    for z in &zeros {
        let a = local_index_res(alg, sec, z)?;
        let b = local_index_res_oracle(alg, sec, z)?;
        check(&mut report.checks, "res=oracle", a.gw_equal(&b)?);
        total = total.add(&a)?;
        let (field, line) = match z {
            ResZero::Rational(l) => (k.descriptor(), vec![format_row(k, &l.rows()[0]), format_row(k, &l.rows()[1])]),
            ResZero::Conjugate { ext, line } => (ext.descriptor(), vec![format_row(ext, &line.rows()[0]), format_row(ext, &line.rows()[1])]),
        };
        report.zeros.push(ZeroReport {
            field,
            degree: z.degree(),
            line,
            index: a.format_entries(),
            index_oracle: Some(b.format_entries()),
            ..ZeroReport::default()
        });
    }
    report.accounted = zeros.iter().map(|z| z.degree()).sum();
    check(&mut report.checks, "count", report.accounted == 2);
    check(&mut report.checks, "euler-class", total.gw_equal(&GwClass::hyperbolic(k, 1))?);
    report.euler_class = total.format_entries();
    Ok(report.finish())
}

// ---------------------------------------------------------------- text

/// Plain-text rendering of any report: one `key: value` line per scalar,
/// nested objects indented, so text and JSON carry the same content.
pub fn render_text<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("serializable");
    let mut out = String::new();
    render(&v, 0, &mut out);
    out
}

fn scalar(v: &serde_json::Value) -> Option<String> {
    match v {
        serde_json::Value::Null => Some("-".into()),
        serde_json::Value::Bool(b) => Some(b.to_string()),
        serde_json::Value::Number(n) => Some(n.to_string()),
        serde_json::Value::String(s) => Some(s.clone()),
        serde_json::Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => {
            Some(format!("[{}]", a.iter().filter_map(scalar).collect::<Vec<_>>().join(", ")))
        }
        serde_json::Value::Array(a) if a.iter().all(|x| x.as_array().is_some_and(|r| r.iter().all(|y| !y.is_object() && !y.is_array()))) => {
            Some(format!("[{}]", a.iter().filter_map(scalar).collect::<Vec<_>>().join(", ")))
        }
        _ => None,
    }
}

fn render(v: &serde_json::Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match v {
        serde_json::Value::Object(map) => {
            for (key, val) in map {
                match scalar(val) {
                    Some(s) => {
                        let _ = writeln!(out, "{pad}{key}: {s}");
                    }
                    None => {
                        let _ = writeln!(out, "{pad}{key}:");
                        render(val, depth + 1, out);
                    }
                }
            }
        }
        serde_json::Value::Array(items) => {
            for (i, item) in items.iter().enumerate() {
                match scalar(item) {
                    Some(s) => {
                        let _ = writeln!(out, "{pad}- {s}");
                    }
                    None => {
                        let _ = writeln!(out, "{pad}- [{i}]");
                        render(item, depth + 1, out);
                    }
                }
            }
        }
        other => {
            let _ = writeln!(out, "{pad}{}", scalar(other).unwrap_or_default());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{FiniteExt, Rationals};

    const WORKED: &str = r#"{
        "field": "Q", "n": 3,
        "lines": [
            { "points": [[1, 0, 0, 0], [0, 0, 0, 1]] },
            { "points": [[1, 0, 1, 0], [0, 1, 0, 1]] },
            { "points": [[1, 0, 2, 0], [1, 2, 2, 1]] },
            { "points": [[2, 1, 0, 0], [0, 0, 1, 2]] }
        ]
    }"#;

    #[test]
    fn counts() {
        assert_eq!((3..=9).step_by(2).map(expected_count).collect::<Vec<_>>(), vec![2, 14, 132, 1430]);
    }

    #[test]
    fn norms() {
        let q = crate::field::QuadExt::rational(5).unwrap();
        let a = q.make(Rationals.from_i64(3), Rationals.from_i64(2));
        assert_eq!(norm(&q, &a).unwrap(), Rationals.from_i64(9 - 20));
        let f = FiniteField::prime(7).unwrap();
        let big = FiniteField::new(7, 3).unwrap();
        let ext = FiniteExt::new(&f, &big).unwrap();
        let g = big.frobenius(&2);
        let expect = big.mul(&big.mul(&2, &g), &big.frobenius(&g));
        assert_eq!(ext.embed(&norm(&ext, &2).unwrap()), expect);
    }

    #[test]
    fn worked_example_certificate() {
        let doc = ConfigDoc::from_json(WORKED).unwrap();
        let r = solve(&doc, 1).unwrap();
        assert_eq!(r.outcome, Outcome::Pass, "{:?}", r.checks);
        assert_eq!(r.zeros.len(), 2);
        let lm: Vec<_> = r.zeros.iter().map(|z| z.lambda_minus_mu.clone().unwrap()).collect();
        assert!(lm.contains(&"8/15".to_string()) && lm.contains(&"-8/15".to_string()));
        assert_eq!(r.check("swap-symmetry"), Some(true));
        assert_eq!(r.check("opposite-pair"), Some(true));
    }

    #[test]
    fn degenerate_configuration_is_a_genericity_error() {
        let mut doc = ConfigDoc::from_json(WORKED).unwrap();
        doc.lines[3] = doc.lines[2].clone();
        let e = solve(&doc, 1).unwrap_err();
        assert!(e.is_genericity(), "{e}");
        let bad = ConfigDoc { field: "F 4".into(), ..ConfigDoc::from_json(WORKED).unwrap() };
        assert!(!solve(&bad, 1).unwrap_err().is_genericity());
    }

    #[test]
    fn suites_are_deterministic() {
        let opts = VerifyOptions { field: "F 5".into(), trials: 4, seed: 3, ..VerifyOptions::default() };
        let a = render_text(&run_suite(Suite::Thm2, &opts).unwrap());
        let b = render_text(&run_suite(Suite::Thm2, &opts).unwrap());
        assert_eq!(a, b);
        let r = run_suite(Suite::Thm2, &opts).unwrap();
        assert_eq!(r.verdict, Outcome::Pass);
        assert!(r.trials.iter().all(|t| t.accounted == 2), "{}", render_text(&r));
    }

    #[test]
    fn cor_fq_classes() {
        for q in [5, 7] {
            let opts = VerifyOptions { field: format!("F {q}"), trials: 12, seed: 1, ..VerifyOptions::default() };
            let r = run_suite(Suite::CorFq, &opts).unwrap();
            assert_eq!(r.verdict, Outcome::Pass);
            assert!(r.trials.iter().any(|t| t.check("fq-square-class").is_some()), "q = {q}: no degree-2 transversal");
        }
    }

    #[test]
    fn appendix_suite_runs() {
        let opts = VerifyOptions { field: "F 5".into(), trials: 3, seed: 2, ..VerifyOptions::default() };
        let r = run_suite(Suite::Appendix, &opts).unwrap();
        assert_eq!(r.verdict, Outcome::Pass, "{}", render_text(&r));
        assert_eq!(r.checks.len(), 2);
    }

    #[test]
    fn text_rendering_lists_every_scalar() {
        let doc = ConfigDoc::from_json(WORKED).unwrap();
        let r = solve(&doc, 1).unwrap();
        let text = render_text(&r);
        assert!(text.contains("lambda: 1/3"));
        assert!(text.contains("outcome: pass"));
        assert!(text.contains("euler_class: ["));
    }
}

//! C ABI over the exact-decide engine.
//!
//! Every function returns an [`EdStatus`]. On failure the message is kept
//! per thread and can be read with [`ed_last_error_message`]. Strings
//! returned through out-parameters are owned by the caller and must be
//! released with [`ed_string_free`]; evaluators with [`ed_evaluator_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use exact_decide::config::{OutputFormat, RunConfig, TrialRecord};
use exact_decide::criteria::{Criterion, Evaluator};
use exact_decide::likelihood::{likelihood, Prior};
use exact_decide::num_rational::Rational64;
use exact_decide::num_traits::ToPrimitive;
use exact_decide::report::analyze;
use exact_decide::rules::{decide, Rule, UtilitySpec};
use exact_decide::{Design, Error, StratumCounts, TrialOutcome};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidDesign = 2,
    MarginViolation = 3,
    StratumTotal = 4,
    InvalidPrior = 5,
    DegeneratePosterior = 6,
    InvalidUtility = 7,
    UnknownRule = 8,
    UnknownCriterion = 9,
    Overflow = 10,
    InvalidArgument = 11,
    Panic = 12,
}

pub const ED_RULE_ML: u32 = 0;
pub const ED_RULE_BAYES: u32 = 1;
pub const ED_RULE_ES: u32 = 2;
pub const ED_RULE_FRECHET: u32 = 3;
pub const ED_RULE_COINFLIP: u32 = 4;

pub const ED_CRITERION_MAXIMIN: u32 = 0;
pub const ED_CRITERION_MAXIMIN_NORMALIZED: u32 = 1;
pub const ED_CRITERION_BAYES: u32 = 2;
pub const ED_CRITERION_ML: u32 = 3;

/// A two-arm design and its observed cell counts.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct EdTrial {
    pub n: u32,
    pub m: u32,
    pub x_i1: u32,
    pub x_i0: u32,
    pub x_c1: u32,
    pub x_c0: u32,
}

/// Principal-stratum counts.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct EdStrata {
    pub live_regardless: u32,
    pub efficacious: u32,
    pub harmed: u32,
    pub die_regardless: u32,
}

/// Utility weights as fractions; `per_participant` is 0 or 1.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct EdUtility {
    pub efficacy_num: i64,
    pub efficacy_den: i64,
    pub unsafe_num: i64,
    pub unsafe_den: i64,
    pub per_participant: u8,
}

/// Opaque evaluator over every stratum and outcome of one design.
pub struct EdEvaluator {
    inner: Evaluator,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(err: &Error) -> EdStatus {
    match err {
        Error::InvalidDesign { .. } => EdStatus::InvalidDesign,
        Error::MarginViolation(_) => EdStatus::MarginViolation,
        Error::StratumTotal { .. } => EdStatus::StratumTotal,
        Error::InvalidPrior(_) => EdStatus::InvalidPrior,
        Error::DegeneratePosterior => EdStatus::DegeneratePosterior,
        Error::InvalidUtility(_) => EdStatus::InvalidUtility,
        Error::UnknownRule(_) => EdStatus::UnknownRule,
        Error::UnknownCriterion(_) => EdStatus::UnknownCriterion,
        Error::Overflow(_) => EdStatus::Overflow,
        _ => EdStatus::InvalidArgument,
    }
}

enum Failure {
    Engine(Error),
    Status(EdStatus, String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Engine(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> EdStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            EdStatus::Ok
        }
        Ok(Err(Failure::Engine(e))) => {
            set_error(&e.to_string());
            status_of(&e)
        }
        Ok(Err(Failure::Status(s, msg))) => {
            set_error(&msg);
            s
        }
        Err(_) => {
            set_error("internal panic");
            EdStatus::Panic
        }
    }
}

fn null(name: &str) -> Failure {
    Failure::Status(EdStatus::NullPointer, format!("`{name}` is null"))
}

fn rule_from(code: u32) -> Result<Rule, Failure> {
    Rule::ALL
        .get(code as usize)
        .copied()
        .ok_or_else(|| Error::UnknownRule(code.to_string()).into())
}

fn criterion_from(code: u32) -> Result<Criterion, Failure> {
    Criterion::ALL
        .get(code as usize)
        .copied()
        .ok_or_else(|| Error::UnknownCriterion(code.to_string()).into())
}

fn trial_parts(t: &EdTrial) -> Result<(Design, TrialOutcome), Failure> {
    let design = Design::new(t.n, t.m)?;
    let x = TrialOutcome::new(t.x_i1, t.x_i0, t.x_c1, t.x_c0);
    design.check_outcome(&x)?;
    Ok((design, x))
}

fn utility_from(u: &EdUtility) -> Result<UtilitySpec, Failure> {
    if u.efficacy_den == 0 || u.unsafe_den == 0 {
        return Err(Failure::Status(
            EdStatus::InvalidUtility,
            "weight denominator is zero".into(),
        ));
    }
    Ok(UtilitySpec::new(
        Rational64::new(u.efficacy_num, u.efficacy_den),
        Rational64::new(u.unsafe_num, u.unsafe_den),
        u.per_participant != 0,
    )?)
}

fn give_string(s: String, out: *mut *mut c_char) {
    let c = CString::new(s).expect("engine output has no nul bytes");
    // SAFETY: caller checked `out` for null.
    unsafe { *out = c.into_raw() };
}

/// Message for the most recent failure on this thread, or an empty string.
/// The pointer stays valid until the next call into this library on the
/// same thread.
#[no_mangle]
pub extern "C" fn ed_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn ed_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Default utility: efficacy 1/2, harm 1, per participant.
#[no_mangle]
pub extern "C" fn ed_utility_default() -> EdUtility {
    EdUtility {
        efficacy_num: 1,
        efficacy_den: 2,
        unsafe_num: 1,
        unsafe_den: 1,
        per_participant: 1,
    }
}

/// `P(X = x | theta)` as `numerator / denominator`, where the denominator
/// is `C(n, m)`. Fails with `Overflow` if either does not fit 64 bits.
///
/// # Safety
/// `trial`, `theta`, `numerator` and `denominator` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn ed_likelihood(
    trial: *const EdTrial,
    theta: *const EdStrata,
    numerator: *mut u64,
    denominator: *mut u64,
) -> EdStatus {
    guard(|| {
        let t = unsafe { trial.as_ref() }.ok_or_else(|| null("trial"))?;
        let s = unsafe { theta.as_ref() }.ok_or_else(|| null("theta"))?;
        if numerator.is_null() || denominator.is_null() {
            return Err(null("numerator/denominator"));
        }
        let (design, x) = trial_parts(t)?;
        let theta =
            StratumCounts::new(s.live_regardless, s.efficacious, s.harmed, s.die_regardless);
        let p = likelihood(&theta, &x, &design)?;
        let num =
            u64::try_from(p.numerator()).map_err(|_| Error::Overflow("likelihood numerator"))?;
        let den = u64::try_from(p.denominator())
            .map_err(|_| Error::Overflow("likelihood denominator"))?;
        unsafe {
            *numerator = num;
            *denominator = den;
        }
        Ok(())
    })
}

/// Applies rule `rule` (an `ED_RULE_*` code) under the uniform prior and
/// writes the probability of acting as `numerator / denominator`.
///
/// # Safety
/// `trial`, `utility`, `numerator` and `denominator` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn ed_decide(
    trial: *const EdTrial,
    utility: *const EdUtility,
    rule: u32,
    numerator: *mut i64,
    denominator: *mut i64,
) -> EdStatus {
    guard(|| {
        let t = unsafe { trial.as_ref() }.ok_or_else(|| null("trial"))?;
        let u = unsafe { utility.as_ref() }.ok_or_else(|| null("utility"))?;
        if numerator.is_null() || denominator.is_null() {
            return Err(null("numerator/denominator"));
        }
        let (design, x) = trial_parts(t)?;
        let spec = utility_from(u)?;
        let d = decide(rule_from(rule)?, &x, &design, &spec, &Prior::Uniform)?;
        let v = d.probability.value();
        unsafe {
            *numerator = *v.numer();
            *denominator = *v.denom();
        }
        Ok(())
    })
}

/// Full analysis of one trial as a JSON document, with `digits` fractional
/// digits in decimal renderings and the `top_k` most likely strata.
///
/// # Safety
/// `trial` and `json_out` must be valid pointers. Free the result with
/// [`ed_string_free`].
#[no_mangle]
pub unsafe extern "C" fn ed_analyze_json(
    trial: *const EdTrial,
    digits: u32,
    top_k: usize,
    json_out: *mut *mut c_char,
) -> EdStatus {
    guard(|| {
        let t = unsafe { trial.as_ref() }.ok_or_else(|| null("trial"))?;
        if json_out.is_null() {
            return Err(null("json_out"));
        }
        let record = TrialRecord {
            n: t.n,
            m: t.m,
            x_i1: t.x_i1,
            x_i0: t.x_i0,
            x_c1: t.x_c1,
            x_c0: t.x_c0,
            label: None,
        };
        let cfg = RunConfig {
            digits,
            top_k,
            threads: 1,
            ..RunConfig::default()
        };
        let report = analyze(&record, &cfg)?;
        give_string(report.render(OutputFormat::Json), json_out);
        Ok(())
    })
}

/// Builds an evaluator for design `(n, m)` under the uniform prior.
///
/// # Safety
/// `utility` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn ed_evaluator_new(
    n: u32,
    m: u32,
    utility: *const EdUtility,
    out: *mut *mut EdEvaluator,
) -> EdStatus {
    guard(|| {
        let u = unsafe { utility.as_ref() }.ok_or_else(|| null("utility"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let design = Design::new(n, m)?;
        let spec = utility_from(u)?;
        let inner = Evaluator::new(&design, &spec, &Prior::Uniform)?;
        unsafe { *out = Box::into_raw(Box::new(EdEvaluator { inner })) };
        Ok(())
    })
}

/// # Safety
/// `evaluator` must come from [`ed_evaluator_new`] and not be used again.
/// Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn ed_evaluator_free(evaluator: *mut EdEvaluator) {
    if !evaluator.is_null() {
        drop(unsafe { Box::from_raw(evaluator) });
    }
}

/// Scores `rule` under `criterion`. Writes the nearest double to `value`
/// and, if `exact_out` is not null, the exact value as `"num/den"`.
///
/// # Safety
/// `evaluator` must be live; `value` must be valid; `exact_out` may be null.
#[no_mangle]
pub unsafe extern "C" fn ed_evaluator_score(
    evaluator: *const EdEvaluator,
    rule: u32,
    criterion: u32,
    value: *mut f64,
    exact_out: *mut *mut c_char,
) -> EdStatus {
    guard(|| {
        let ev = unsafe { evaluator.as_ref() }.ok_or_else(|| null("evaluator"))?;
        if value.is_null() {
            return Err(null("value"));
        }
        let score = ev.inner.score(rule_from(rule)?, criterion_from(criterion)?);
        unsafe { *value = score.value.to_f64().unwrap_or(f64::NAN) };
        if !exact_out.is_null() {
            give_string(
                format!("{}/{}", score.value.numer(), score.value.denom()),
                exact_out,
            );
        }
        Ok(())
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn ed_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Parses a rule name (`ml`, `bayes`, `es`, `frechet`, `coinflip`) into its
/// `ED_RULE_*` code.
///
/// # Safety
/// `name` must be a valid NUL-terminated string; `code` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ed_rule_code(name: *const c_char, code: *mut u32) -> EdStatus {
    guard(|| {
        if name.is_null() || code.is_null() {
            return Err(null("name/code"));
        }
        let s = unsafe { CStr::from_ptr(name) }.to_str().map_err(|_| {
            Failure::Status(EdStatus::InvalidArgument, "rule name is not UTF-8".into())
        })?;
        let rule: Rule = s.parse()?;
        unsafe { *code = rule.position() as u32 };
        Ok(())
    })
}

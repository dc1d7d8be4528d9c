//! Decision procedures: the complete fork procedure, bounded model search
//! over finite frames, and certificate verification.

mod bounded;
mod encode;
mod forks;


pub use bounded::sat_bounded;
pub use forks::sat_forks;

use crate::formula::{classify, propositional_skeleton, BaseLanguage, ConnLevel, Formula, TermFamily};
use crate::frames::{connectify, ConnectifyMode, FrameClass, Model};
use crate::semantics::{holds, SemanticsError};
use std::fmt;
use std::time::Duration;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("formula mixes regular-closed and set operators")]
    MixedFamily,
    #[error("language {language} is not interpreted over frame class {class}")]
    IncompatibleClass { language: String, class: FrameClass },
    #[error("the fork procedure does not accept {0}")]
    NotForkLanguage(String),
    #[error("bound must be at least 1")]
    ZeroBound,
    #[error("certificate failed verification")]
    BadCertificate,
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
}

impl SolverError {
    pub fn code(&self) -> &'static str {
        match self {
            SolverError::MixedFamily => "mixed_family",
            SolverError::IncompatibleClass { .. } => "language_frame_mismatch",
            SolverError::NotForkLanguage(_) => "unsupported_language",
            SolverError::ZeroBound => "bad_bound",
            SolverError::BadCertificate => "bad_certificate",
            SolverError::Semantics(e) => e.code(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Sat,
    Unsat,
    UnsatWithinBound,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Sat => "SAT",
            Status::Unsat => "UNSAT",
            Status::UnsatWithinBound => "UNSAT_WITHIN_BOUND",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Completeness {
    Complete,
    Bounded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Forks,
    Bounded,
    /// Decided by the propositional skeleton alone.
    Propositional,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Forks => "forks",
            Method::Bounded => "bounded",
            Method::Propositional => "propositional",
        })
    }
}

/// Frame size beyond which exhaustive search is complete.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CompleteBound {
    Points(usize),
    /// `2^k` points.
    PowerOfTwo(usize),
    /// No finite bound is known.
    Unknown,
}

impl CompleteBound {
    fn covered_by(&self, points: usize) -> bool {
        match *self {
            CompleteBound::Points(n) => points >= n,
            CompleteBound::PowerOfTwo(k) => k < usize::BITS as usize && points >= 1usize << k,
            CompleteBound::Unknown => false,
        }
    }
}

impl fmt::Display for CompleteBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CompleteBound::Points(n) => write!(f, "{n}"),
            CompleteBound::PowerOfTwo(k) => write!(f, "2^{k}"),
            CompleteBound::Unknown => f.write_str("none"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Stats {
    /// Candidate frame shapes (or fork literal sets) examined.
    pub nodes: u64,
    pub time: Duration,
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    pub status: Status,
    pub certificate: Option<Model>,
    pub bound_used: usize,
    pub completeness: Completeness,
    pub method: Method,
    pub complete_bound: CompleteBound,
    pub stats: Stats,
}

impl SolveResult {
    /// `SAT|UNSAT|UNSAT_WITHIN_BOUND bound=<n> method=<m>` plus the complete bound.
    pub fn verdict_line(&self) -> String {
        format!(
            "{} bound={} method={} complete_bound={}",
            self.status, self.bound_used, self.method, self.complete_bound
        )
    }
}

#[derive(Debug, Clone)]
pub struct SolveOptions {
    /// Largest frame size tried by bounded search.
    pub max_points: usize,
    /// Wall-clock budget for bounded search.
    pub timeout: Option<Duration>,
    /// Worker count; `None` uses the global pool.
    pub threads: Option<usize>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { max_points: 12, timeout: None, threads: None }
    }
}

impl SolveOptions {
    pub fn with_bound(max_points: usize) -> Self {
        SolveOptions { max_points, ..SolveOptions::default() }
    }
}

/// Delegates to model checking.
pub fn check_certificate(model: &Model, f: &Formula) -> Result<bool, SolverError> {
    Ok(holds(model, f)?)
}

/// Re-verify a certificate before it leaves the solver.
pub(crate) fn verified(model: Model, f: &Formula) -> Result<Model, SolverError> {
    if check_certificate(&model, f)? {
        Ok(model)
    } else {
        Err(SolverError::BadCertificate)
    }
}

/// Reject inputs whose term family is not interpreted over `class`.
pub(crate) fn check_class(f: &Formula, class: FrameClass) -> Result<TermFamily, SolverError> {
    let family = f.family().ok_or(SolverError::MixedFamily)?;
    let ok = match family {
        TermFamily::Neutral => true,
        TermFamily::Rc => class.is_rc(),
        TermFamily::Set => !class.is_rc(),
    };
    if ok {
        Ok(family)
    } else {
        let language = classify(f).map(|t| t.to_string()).unwrap_or_default();
        Err(SolverError::IncompatibleClass { language, class })
    }
}

/// Contact languages without connectedness, where the fork procedure is complete.
pub(crate) fn is_fork_language(f: &Formula) -> bool {
    matches!(
        classify(f),
        Some(tag) if tag.conn_level() == ConnLevel::None
            && matches!(tag.base(), BaseLanguage::B | BaseLanguage::C | BaseLanguage::Cm | BaseLanguage::Rcc8)
    )
}

/// Decide `f` over `class`, choosing the procedure from its language.
pub fn auto(f: &Formula, class: FrameClass, options: &SolveOptions) -> Result<SolveResult, SolverError> {
    let start = std::time::Instant::now();
    check_class(f, class)?;
    let (prop, table) = propositional_skeleton(f);
    if crate::formula::implicants(&prop, &table).next().is_none() {
        return Ok(SolveResult {
            status: Status::Unsat,
            certificate: None,
            bound_used: 0,
            completeness: Completeness::Complete,
            method: Method::Propositional,
            complete_bound: CompleteBound::Points(0),
            stats: Stats { nodes: 0, time: start.elapsed() },
        });
    }
    let tag = classify(f).expect("family checked");
    match class {
        FrameClass::Regc if is_fork_language(f) => sat_forks(f),
        FrameClass::Conregc if is_fork_language(f) && matches!(tag.base(), BaseLanguage::B | BaseLanguage::Rcc8) => {
            let mut res = sat_forks(f)?;
            if let Some(m) = res.certificate.take() {
                let mode = if tag.base() == BaseLanguage::B { ConnectifyMode::B } else { ConnectifyMode::Rcc8 };
                let connected = connectify(&m, mode).map_err(|_| SolverError::BadCertificate)?;
                res.bound_used = connected.frame().len();
                res.certificate = Some(verified(connected, f)?);
            }
            res.complete_bound = connectified_bound(&res.complete_bound);
            res.stats.time = start.elapsed();
            Ok(res)
        }
        _ => sat_bounded(f, class, options),
    }
}

/// Fork bound plus the points `connectify` may add (one bridge hub per fork).
fn connectified_bound(b: &CompleteBound) -> CompleteBound {
    match *b {
        CompleteBound::Points(n) => CompleteBound::Points(2 * n),
        ref other => other.clone(),
    }
}

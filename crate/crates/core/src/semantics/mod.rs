//! Model checking of terms and formulas.

use crate::formula::{Formula, Rcc8Rel, Term, TermFamily};
use crate::frames::{Frame, FrameClass, Model, PointSet};
use num_bigint::BigUint;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("variable '{0}' has no value in the model")]
    UnboundVariable(String),
    #[error("{family} terms cannot be evaluated over {class} models")]
    FamilyMismatch { family: &'static str, class: FrameClass },
    #[error("formula mixes regular-closed and set operators")]
    MixedFamily,
    #[error("RCC8 relations are only defined between non-empty regions")]
    EmptyRegion,
    #[error("argument is not regular closed")]
    NotRegularClosed,
}

impl SemanticsError {
    pub fn code(&self) -> &'static str {
        match self {
            SemanticsError::UnboundVariable(_) => "unbound_variable",
            SemanticsError::FamilyMismatch { .. } => "language_frame_mismatch",
            SemanticsError::MixedFamily => "mixed_family",
            SemanticsError::EmptyRegion => "empty_region",
            SemanticsError::NotRegularClosed => "not_regular_closed",
        }
    }
}

/// Evaluation record for one atom.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomRecord {
    pub atom: Formula,
    pub truth: bool,
    pub terms: Vec<(Term, PointSet)>,
}

/// Result of `check`; the trace lists atoms in pre-order, each once.
#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub truth: bool,
    pub trace: Option<Vec<AtomRecord>>,
}

fn family_name(f: TermFamily) -> &'static str {
    match f {
        TermFamily::Neutral => "neutral",
        TermFamily::Rc => "regular-closed",
        TermFamily::Set => "set",
    }
}

fn compatible(family: TermFamily, class: FrameClass) -> Result<(), SemanticsError> {
    let ok = match family {
        TermFamily::Neutral => true,
        TermFamily::Rc => class.is_rc(),
        TermFamily::Set => !class.is_rc(),
    };
    if ok {
        Ok(())
    } else {
        Err(SemanticsError::FamilyMismatch { family: family_name(family), class })
    }
}

/// Term evaluation over a frame, reading variables through `lookup`.
pub(crate) fn eval_with<'a>(
    frame: &Frame,
    lookup: &impl Fn(&str) -> Option<&'a PointSet>,
    t: &Term,
) -> Result<PointSet, SemanticsError> {
    Ok(match t {
        Term::Var(v) => lookup(v).cloned().ok_or_else(|| SemanticsError::UnboundVariable(v.clone()))?,
        Term::Zero => frame.empty_set(),
        Term::One => frame.full_set(),
        Term::Sum(a, b) | Term::Union(a, b) => eval_with(frame, lookup, a)?.union(&eval_with(frame, lookup, b)?),
        Term::Prod(a, b) => {
            let meet = eval_with(frame, lookup, a)?.intersection(&eval_with(frame, lookup, b)?);
            frame.closure_unchecked(&frame.interior_unchecked(&meet))
        }
        Term::Inter(a, b) => eval_with(frame, lookup, a)?.intersection(&eval_with(frame, lookup, b)?),
        Term::Compl(a) => frame.closure_unchecked(&eval_with(frame, lookup, a)?.complement()),
        Term::SetCompl(a) => eval_with(frame, lookup, a)?.complement(),
        Term::Interior(a) => frame.interior_unchecked(&eval_with(frame, lookup, a)?),
        Term::Closure(a) => frame.closure_unchecked(&eval_with(frame, lookup, a)?),
    })
}

fn rcc8_holds(frame: &Frame, rel: Rcc8Rel, x: &PointSet, y: &PointSet) -> bool {
    let ix = || frame.interior_unchecked(x);
    let iy = || frame.interior_unchecked(y);
    match rel {
        Rcc8Rel::DC => !x.intersects(y),
        Rcc8Rel::EC => x.intersects(y) && !ix().intersects(&iy()),
        Rcc8Rel::PO => {
            let (ix, iy) = (ix(), iy());
            ix.intersects(&iy) && !ix.is_subset(y) && !iy.is_subset(x)
        }
        Rcc8Rel::EQ => x == y,
        Rcc8Rel::TPP => x.is_subset(y) && !x.is_subset(&iy()) && !y.is_subset(x),
        Rcc8Rel::NTPP => x.is_subset(&iy()) && !y.is_subset(x),
        Rcc8Rel::TPPi => rcc8_holds(frame, Rcc8Rel::TPP, y, x),
        Rcc8Rel::NTPPi => rcc8_holds(frame, Rcc8Rel::NTPP, y, x),
    }
}

/// Truth of an atom given its argument extensions.
pub(crate) fn atom_truth(frame: &Frame, atom: &Formula, args: &[PointSet]) -> bool {
    match atom {
        Formula::Eq(..) => args[0] == args[1],
        Formula::Contact(_) => {
            let mut meet = args[0].clone();
            for a in &args[1..] {
                meet = meet.intersection(a);
            }
            !meet.is_empty()
        }
        Formula::Rcc8(rel, ..) => rcc8_holds(frame, *rel, &args[0], &args[1]),
        Formula::Conn(_) => frame.components_unchecked(&args[0]).len() <= 1,
        Formula::ConnLe(k, _) => BigUint::from(frame.components_unchecked(&args[0]).len()) <= *k,
        _ => unreachable!("not an atom"),
    }
}

struct Checker<'m, L> {
    frame: &'m Frame,
    lookup: L,
    trace: Option<Vec<AtomRecord>>,
}

impl<'m, L: Fn(&str) -> Option<&'m PointSet>> Checker<'m, L> {
    fn formula(&mut self, f: &Formula) -> Result<bool, SemanticsError> {
        Ok(match f {
            Formula::And(..) | Formula::Or(..) => {
                // Long generated conjunctions nest to the left; walk the spine
                // iteratively so evaluation depth stays flat.
                let conj = matches!(f, Formula::And(..));
                let mut parts = Vec::new();
                let mut cur = f;
                while let Formula::And(a, b) | Formula::Or(a, b) = cur {
                    if matches!(cur, Formula::And(..)) != conj {
                        break;
                    }
                    parts.push(&**b);
                    cur = a;
                }
                parts.push(cur);
                let mut acc = conj;
                for part in parts.into_iter().rev() {
                    let x = self.formula(part)?;
                    acc = if conj { acc && x } else { acc || x };
                }
                acc
            }
            Formula::Implies(a, b) => {
                let x = self.formula(a)?;
                let y = self.formula(b)?;
                !x || y
            }
            Formula::Not(a) => !self.formula(a)?,
            atom => {
                let args = atom
                    .atom_terms()
                    .into_iter()
                    .map(|t| eval_with(self.frame, &self.lookup, t))
                    .collect::<Result<Vec<_>, _>>()?;
                let truth = atom_truth(self.frame, atom, &args);
                if let Some(trace) = &mut self.trace {
                    if !trace.iter().any(|r| r.atom == *atom) {
                        let terms = atom.atom_terms().into_iter().cloned().zip(args).collect();
                        trace.push(AtomRecord { atom: atom.clone(), truth, terms });
                    }
                }
                truth
            }
        })
    }
}

/// Extension of `t` in `model`.
pub fn eval_term(model: &Model, t: &Term) -> Result<PointSet, SemanticsError> {
    compatible(t.family().ok_or(SemanticsError::MixedFamily)?, model.class())?;
    eval_with(model.frame(), &|v| model.value(v), t)
}

/// Model-check `f`, optionally recording every atom's value.
pub fn check(model: &Model, f: &Formula, trace: bool) -> Result<Verdict, SemanticsError> {
    compatible(f.family().ok_or(SemanticsError::MixedFamily)?, model.class())?;
    let mut checker = Checker { frame: model.frame(), lookup: |v: &str| model.value(v), trace: trace.then(Vec::new) };
    let truth = checker.formula(f)?;
    Ok(Verdict { truth, trace: checker.trace })
}

pub fn holds(model: &Model, f: &Formula) -> Result<bool, SemanticsError> {
    Ok(check(model, f, false)?.truth)
}

/// The unique RCC8 relation between two non-empty regular closed extensions.
pub fn rcc8_relation(model: &Model, t1: &Term, t2: &Term) -> Result<Rcc8Rel, SemanticsError> {
    let x = eval_term(model, t1)?;
    let y = eval_term(model, t2)?;
    if x.is_empty() || y.is_empty() {
        return Err(SemanticsError::EmptyRegion);
    }
    let frame = model.frame();
    if !frame.is_regular_closed_unchecked(&x) || !frame.is_regular_closed_unchecked(&y) {
        return Err(SemanticsError::NotRegularClosed);
    }
    Ok(Rcc8Rel::ALL
        .into_iter()
        .find(|&rel| rcc8_holds(frame, rel, &x, &y))
        .expect("RCC8 relations are jointly exhaustive"))
}

pub fn count_components(model: &Model, t: &Term) -> Result<usize, SemanticsError> {
    let x = eval_term(model, t)?;
    Ok(model.frame().components_unchecked(&x).len())
}

/// Truth of `f` over the empty space, where every term denotes the empty set.
pub fn empty_space_eval(f: &Formula) -> bool {
    let frame = Frame::empty();
    let empty = frame.empty_set();
    let mut checker = Checker { frame: &frame, lookup: |_: &str| Some(&empty), trace: None };
    checker.formula(f).expect("every variable is bound over the empty space")
}

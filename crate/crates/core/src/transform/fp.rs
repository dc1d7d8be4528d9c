use super::{unsupported, TransformError};
use crate::formula::{classify, Formula, LanguageTag, Term};
use crate::frames::{fence_cells, FrameClass, Model};
use num_bigint::BigUint;
use std::fmt;

/// Future/past temporal formula over letters named after region variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FpFormula {
    Letter(String),
    Top,
    Bot,
    Not(Box<FpFormula>),
    And(Box<FpFormula>, Box<FpFormula>),
    Or(Box<FpFormula>, Box<FpFormula>),
    /// Sometime in the future.
    F(Box<FpFormula>),
    /// Sometime in the past.
    P(Box<FpFormula>),
}

impl FpFormula {
    fn not(a: FpFormula) -> FpFormula {
        FpFormula::Not(Box::new(a))
    }
    fn and(a: FpFormula, b: FpFormula) -> FpFormula {
        FpFormula::And(Box::new(a), Box::new(b))
    }
    fn or(a: FpFormula, b: FpFormula) -> FpFormula {
        FpFormula::Or(Box::new(a), Box::new(b))
    }
    fn f(a: FpFormula) -> FpFormula {
        FpFormula::F(Box::new(a))
    }
    fn p(a: FpFormula) -> FpFormula {
        FpFormula::P(Box::new(a))
    }
    fn iff(a: FpFormula, b: FpFormula) -> FpFormula {
        FpFormula::or(
            FpFormula::and(a.clone(), b.clone()),
            FpFormula::and(FpFormula::not(a), FpFormula::not(b)),
        )
    }
    /// Holds at every cell.
    fn always(a: FpFormula) -> FpFormula {
        FpFormula::not(FpFormula::f(FpFormula::p(FpFormula::not(a))))
    }

    pub fn size(&self) -> usize {
        match self {
            FpFormula::Letter(_) | FpFormula::Top | FpFormula::Bot => 1,
            FpFormula::Not(a) | FpFormula::F(a) | FpFormula::P(a) => 1 + a.size(),
            FpFormula::And(a, b) | FpFormula::Or(a, b) => 1 + a.size() + b.size(),
        }
    }

    fn prec(&self) -> u8 {
        match self {
            FpFormula::Or(..) => 1,
            FpFormula::And(..) => 2,
            _ => 3,
        }
    }
}

impl fmt::Display for FpFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |f: &mut fmt::Formatter<'_>, g: &FpFormula, min: u8| {
            if g.prec() < min {
                write!(f, "({g})")
            } else {
                write!(f, "{g}")
            }
        };
        match self {
            FpFormula::Letter(p) => f.write_str(p),
            FpFormula::Top => f.write_str("true"),
            FpFormula::Bot => f.write_str("false"),
            FpFormula::Not(a) => {
                f.write_str("!")?;
                wrap(f, a, 3)
            }
            FpFormula::And(a, b) => {
                wrap(f, a, 2)?;
                f.write_str(" & ")?;
                wrap(f, b, 3)
            }
            FpFormula::Or(a, b) => {
                wrap(f, a, 1)?;
                f.write_str(" | ")?;
                wrap(f, b, 2)
            }
            FpFormula::F(a) => write!(f, "F({a})"),
            FpFormula::P(a) => write!(f, "P({a})"),
        }
    }
}

fn term_star(t: &Term) -> FpFormula {
    match t {
        Term::Var(v) => FpFormula::Letter(v.clone()),
        Term::Zero => FpFormula::Bot,
        Term::One => FpFormula::Top,
        Term::Compl(a) => FpFormula::not(term_star(a)),
        Term::Prod(a, b) => FpFormula::and(term_star(a), term_star(b)),
        Term::Sum(a, b) => FpFormula::or(term_star(a), term_star(b)),
        _ => unreachable!("set operator in a regular-closed term"),
    }
}

fn conn_star(t: &Term) -> FpFormula {
    let s = term_star(t);
    FpFormula::not(FpFormula::f(FpFormula::p(FpFormula::and(
        s.clone(),
        FpFormula::f(FpFormula::and(FpFormula::not(s.clone()), FpFormula::f(s))),
    ))))
}

fn formula_star(f: &Formula) -> FpFormula {
    match f {
        Formula::Eq(a, b) => FpFormula::always(FpFormula::iff(term_star(a), term_star(b))),
        Formula::Conn(t) => conn_star(t),
        Formula::ConnLe(k, t) if *k == BigUint::from(1u32) => conn_star(t),
        Formula::And(a, b) => FpFormula::and(formula_star(a), formula_star(b)),
        Formula::Or(a, b) => FpFormula::or(formula_star(a), formula_star(b)),
        Formula::Implies(a, b) => FpFormula::or(FpFormula::not(formula_star(a)), formula_star(b)),
        Formula::Not(a) => FpFormula::not(formula_star(a)),
        _ => unreachable!("atom outside the Boolean language with connectedness"),
    }
}

/// Translate a Boolean formula with connectedness into temporal logic over the line.
pub fn fp_translate(f: &Formula) -> Result<FpFormula, TransformError> {
    match classify(f) {
        Some(LanguageTag::B | LanguageTag::Bc) => Ok(formula_star(f)),
        other => Err(unsupported(other)),
    }
}

/// Truth of `g` at every cell of a fence model, in fence order. A letter
/// holds at an interval cell when the interval lies in the region, and at a
/// boundary point when it holds on the interval to its left.
pub fn fp_eval_cells(model: &Model, g: &FpFormula) -> Result<Vec<bool>, TransformError> {
    if model.class() != FrameClass::Fence {
        return Err(TransformError::NotFence(format!("model class is {}", model.class())));
    }
    let cells = fence_cells(model.frame()).map_err(|e| TransformError::NotFence(e.to_string()))?;
    eval_cells(&cells, &|v| model.value(v).map(|s| cells.iter().map(|&c| s.contains(c)).collect()), g)
}

/// Evaluate over a cell sequence I p I ... I, given per-cell membership of each letter.
pub(crate) fn eval_cells(
    cells: &[usize],
    letter: &impl Fn(&str) -> Option<Vec<bool>>,
    g: &FpFormula,
) -> Result<Vec<bool>, TransformError> {
    let n = cells.len();
    let is_interval = |i: usize| i % 2 == 0;
    Ok(match g {
        FpFormula::Letter(p) => {
            let member = letter(p).ok_or_else(|| TransformError::UnboundLetter(p.clone()))?;
            (0..n).map(|i| if is_interval(i) { member[i] } else { member[i - 1] }).collect()
        }
        FpFormula::Top => vec![true; n],
        FpFormula::Bot => vec![false; n],
        FpFormula::Not(a) => eval_cells(cells, letter, a)?.into_iter().map(|x| !x).collect(),
        FpFormula::And(a, b) => {
            let (x, y) = (eval_cells(cells, letter, a)?, eval_cells(cells, letter, b)?);
            x.into_iter().zip(y).map(|(p, q)| p && q).collect()
        }
        FpFormula::Or(a, b) => {
            let (x, y) = (eval_cells(cells, letter, a)?, eval_cells(cells, letter, b)?);
            x.into_iter().zip(y).map(|(p, q)| p || q).collect()
        }
        FpFormula::F(a) => {
            let x = eval_cells(cells, letter, a)?;
            let mut out = vec![false; n];
            let mut later = false;
            for i in (0..n).rev() {
                out[i] = later || (is_interval(i) && x[i]);
                later |= x[i];
            }
            out
        }
        FpFormula::P(a) => {
            let x = eval_cells(cells, letter, a)?;
            let mut out = vec![false; n];
            let mut earlier = false;
            for i in 0..n {
                out[i] = earlier || (is_interval(i) && x[i]);
                earlier |= x[i];
            }
            out
        }
    })
}

/// Truth of `g` at cell `cell` (index in fence order).
pub fn fp_modelcheck(model: &Model, g: &FpFormula, cell: usize) -> Result<bool, TransformError> {
    let truth = fp_eval_cells(model, g)?;
    truth.get(cell).copied().ok_or(TransformError::NoSuchCell(cell))
}

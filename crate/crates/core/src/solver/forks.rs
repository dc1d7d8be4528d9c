use super::{verified, CompleteBound, Completeness, Method, SolveResult, SolverError, Stats, Status};
use crate::formula::{classify, implicants, propositional_skeleton, Formula, Term};
use crate::frames::{make_fork_frame, Frame, FrameClass, Model};
use crate::transform::{eq_normalize, rcc8_to_c};
use std::collections::BTreeMap;
use std::time::Instant;

/// Three-valued membership of a tooth type in a term; `None` while undecided.
fn term3(t: &Term, ty: &[Option<bool>], index: &BTreeMap<&str, usize>) -> Option<bool> {
    match t {
        Term::Var(v) => ty[index[v.as_str()]],
        Term::Zero => Some(false),
        Term::One => Some(true),
        Term::Compl(a) => term3(a, ty, index).map(|b| !b),
        Term::Prod(a, b) => match (term3(a, ty, index), term3(b, ty, index)) {
            (Some(false), _) | (_, Some(false)) => Some(false),
            (Some(true), Some(true)) => Some(true),
            _ => None,
        },
        Term::Sum(a, b) => match (term3(a, ty, index), term3(b, ty, index)) {
            (Some(true), _) | (_, Some(true)) => Some(true),
            (Some(false), Some(false)) => Some(false),
            _ => None,
        },
        _ => unreachable!("set operator in a contact formula"),
    }
}

/// Constraint on the teeth of one fork.
enum Cond {
    In(usize, Term),
    Not(Box<Cond>),
    All(Vec<Cond>),
    Any(Vec<Cond>),
}

impl Cond {
    fn eval(&self, teeth: &[Vec<Option<bool>>], index: &BTreeMap<&str, usize>) -> Option<bool> {
        match self {
            Cond::In(i, t) => term3(t, &teeth[*i], index),
            Cond::Not(c) => c.eval(teeth, index).map(|b| !b),
            Cond::All(cs) => {
                let mut out = Some(true);
                for c in cs {
                    match c.eval(teeth, index) {
                        Some(false) => return Some(false),
                        None => out = None,
                        _ => {}
                    }
                }
                out
            }
            Cond::Any(cs) => {
                let mut out = Some(false);
                for c in cs {
                    match c.eval(teeth, index) {
                        Some(true) => return Some(true),
                        None => out = None,
                        _ => {}
                    }
                }
                out
            }
        }
    }
}

/// Backtracking search for `k` tooth types meeting `cond`.
fn find_teeth(k: usize, nvars: usize, cond: &Cond, index: &BTreeMap<&str, usize>) -> Option<Vec<Vec<bool>>> {
    fn go(
        teeth: &mut Vec<Vec<Option<bool>>>,
        pos: usize,
        nvars: usize,
        cond: &Cond,
        index: &BTreeMap<&str, usize>,
    ) -> bool {
        match cond.eval(teeth, index) {
            Some(false) => return false,
            Some(true) => return true,
            None => {}
        }
        let (i, v) = (pos / nvars, pos % nvars);
        for b in [true, false] {
            teeth[i][v] = Some(b);
            if go(teeth, pos + 1, nvars, cond, index) {
                return true;
            }
        }
        teeth[i][v] = None;
        false
    }
    let mut teeth = vec![vec![None; nvars]; k];
    if !go(&mut teeth, 0, nvars, cond, index) {
        return None;
    }
    // Undecided memberships are irrelevant; fix them to false.
    Some(teeth.into_iter().map(|t| t.into_iter().map(|b| b.unwrap_or(false)).collect()).collect())
}

/// Decide a contact formula without connectedness by searching for a
/// disjoint union of forks, one per existential literal.
pub fn sat_forks(f: &Formula) -> Result<SolveResult, SolverError> {
    let start = Instant::now();
    if !super::is_fork_language(f) {
        let tag = classify(f).map(|t| t.to_string()).unwrap_or_else(|| "mixed".into());
        return Err(SolverError::NotForkLanguage(tag));
    }
    let g = rcc8_to_c(f);
    let vars: Vec<String> = f.vars().into_iter().collect();
    let index: BTreeMap<&str, usize> = vars.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
    let (prop, table) = propositional_skeleton(&g);
    let mut nodes = 0u64;
    let mut bound = 0usize;
    for lits in implicants(&prop, &table) {
        nodes += 1;
        let mut zeros = Vec::new();
        let mut non_contacts: Vec<Vec<Term>> = Vec::new();
        let mut demands: Vec<Vec<Term>> = Vec::new();
        for &(letter, value) in &lits {
            match (eq_normalize(table.atom(letter)), value) {
                (Formula::Eq(t, _), true) => zeros.push(t),
                (Formula::Eq(t, _), false) => demands.push(vec![t]),
                (Formula::Contact(ts), true) => demands.push(ts),
                (Formula::Contact(ts), false) => non_contacts.push(ts),
                (other, _) => unreachable!("atom {other:?} outside the contact language"),
            }
        }
        bound = bound.max(demands.iter().map(|d| d.len() + 1).sum());
        let mut forks = Vec::new();
        for demand in &demands {
            let k = demand.len();
            let mut conds = Vec::new();
            for (i, t) in demand.iter().enumerate() {
                conds.push(Cond::In(i, t.clone()));
                for z in &zeros {
                    conds.push(Cond::Not(Box::new(Cond::In(i, z.clone()))));
                }
                for sigma in &non_contacts {
                    conds.push(Cond::Not(Box::new(Cond::All(sigma.iter().map(|s| Cond::In(i, s.clone())).collect()))));
                }
            }
            // The hub lies in every sigma_j it reaches through some tooth.
            for sigma in &non_contacts {
                let covered = sigma.iter().map(|s| Cond::Any((0..k).map(|i| Cond::In(i, s.clone())).collect()));
                conds.push(Cond::Not(Box::new(Cond::All(covered.collect()))));
            }
            match find_teeth(k, vars.len(), &Cond::All(conds), &index) {
                Some(teeth) => forks.push(teeth),
                None => break,
            }
        }
        if forks.len() < demands.len() {
            continue;
        }
        let model = if forks.is_empty() {
            empty_model(&vars, FrameClass::Regc)
        } else {
            fork_model(&forks, &vars)
        }
        .expect("fork model is well-formed");
        let size = model.frame().len();
        return Ok(SolveResult {
            status: Status::Sat,
            certificate: Some(verified(model, f)?),
            bound_used: size,
            completeness: Completeness::Complete,
            method: Method::Forks,
            complete_bound: CompleteBound::Points(literal_bound(&g)),
            stats: Stats { nodes, time: start.elapsed() },
        });
    }
    Ok(SolveResult {
        status: Status::Unsat,
        certificate: None,
        bound_used: bound,
        completeness: Completeness::Complete,
        method: Method::Forks,
        complete_bound: CompleteBound::Points(literal_bound(&g)),
        stats: Stats { nodes, time: start.elapsed() },
    })
}

/// Largest fork union the procedure can build: two points per equation and
/// `k + 1` per `k`-ary contact.
pub(crate) fn literal_bound(g: &Formula) -> usize {
    let (_, table) = propositional_skeleton(g);
    table
        .atoms
        .iter()
        .map(|a| match a {
            Formula::Contact(ts) => ts.len() + 1,
            _ => 2,
        })
        .sum()
}

/// The model over the empty space with every variable empty.
pub(crate) fn empty_model(vars: &[String], class: FrameClass) -> Result<Model, crate::frames::FrameError> {
    let frame = Frame::empty();
    let valuation = vars.iter().map(|v| (v.clone(), frame.empty_set())).collect();
    Model::new(frame, valuation, class)
}

fn fork_model(forks: &[Vec<Vec<bool>>], vars: &[String]) -> Result<Model, crate::frames::FrameError> {
    let specs: Vec<usize> = forks.iter().map(Vec::len).collect();
    let qs = make_fork_frame(&specs)?;
    let frame = qs.frame();
    let mut valuation = BTreeMap::new();
    for (vi, v) in vars.iter().enumerate() {
        let mut support = Vec::new();
        for (fi, teeth) in forks.iter().enumerate() {
            for (ti, ty) in teeth.iter().enumerate() {
                if ty[vi] {
                    support.push(frame.point(&format!("f{fi}t{ti}")).expect("tooth exists"));
                }
            }
        }
        valuation.insert(v.clone(), qs.rc_from_support(&frame.set_from_points(support))?);
    }
    Model::new(qs.into_frame(), valuation, FrameClass::Regc)
}

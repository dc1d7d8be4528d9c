use super::encode::{Encoding, Shape};
use super::forks::{empty_model, literal_bound};
use super::{
    check_class, is_fork_language, verified, CompleteBound, Completeness, Method, SolveOptions, SolveResult,
    SolverError, Stats, Status,
};
use crate::formula::{subterm_closure, Formula, Term, TermFamily};
use crate::frames::{FrameClass, Model};
use crate::semantics::empty_space_eval;
use crate::transform::{dagger, rcc8_to_c};
use rayon::prelude::*;
use std::collections::BTreeSet;
use std::time::Instant;

/// Candidate shapes in the order they are tried: by point count, then by
/// the number of depth-1 points.
fn shapes(class: FrameClass, max_points: usize) -> Vec<Shape> {
    match class {
        FrameClass::Fence => (1..).map(|m| Shape::Fence { intervals: m }).take_while(|s| s.points() <= max_points).collect(),
        FrameClass::All | FrameClass::Con => (1..=max_points).map(|n| Shape::General { n }).collect(),
        FrameClass::Regc | FrameClass::Conregc => {
            let mut out = Vec::new();
            for n in 1..=max_points {
                for n1 in 0..n {
                    let n0 = n - n1;
                    if n1 > 0 && n0 < 2 {
                        continue;
                    }
                    // Hubs have pairwise distinct successor sets of size >= 2.
                    if n0 < usize::BITS as usize - 1 && n1 > (1usize << n0) - n0 - 1 {
                        continue;
                    }
                    if class == FrameClass::Conregc && n1 == 0 && n0 > 1 {
                        continue;
                    }
                    out.push(Shape::QuasiSaw { n0, n1 });
                }
            }
            out
        }
    }
}

fn has_negative_count(f: &Formula) -> bool {
    f.atom_occurrences().iter().any(|(a, pos)| !pos && matches!(a, Formula::Conn(_) | Formula::ConnLe(..)))
}

/// Frame size from which exhaustive search decides `f` over `class`.
pub(crate) fn complete_bound(f: &Formula, class: FrameClass) -> CompleteBound {
    if class == FrameClass::Fence || has_negative_count(f) {
        return CompleteBound::Unknown;
    }
    if class == FrameClass::Regc && is_fork_language(f) {
        return CompleteBound::Points(literal_bound(&rcc8_to_c(f)));
    }
    match f.family() {
        Some(TermFamily::Set) => CompleteBound::PowerOfTwo(subterm_closure(f).len()),
        Some(_) => match dagger(f) {
            Ok(d) => CompleteBound::PowerOfTwo(subterm_closure(&d).len()),
            Err(_) => CompleteBound::Unknown,
        },
        None => CompleteBound::Unknown,
    }
}

fn solve_shape(g: &Formula, shape: Shape, class: FrameClass, vars: &BTreeSet<String>) -> Option<Model> {
    let mut enc = Encoding::new(shape);
    if class.is_rc() {
        enc.split_with(vars.iter().map(|v| Term::Var(v.clone())).collect());
    }
    if class.requires_connected() {
        enc.assert_connected();
    }
    enc.assert_formula(g);
    enc.solve(vars, class)
}

/// Search for a model of `f` over `class` with at most `options.max_points` points.
///
/// Smaller frames are always tried first, so a SAT certificate has minimal
/// size among the shapes searched.
pub fn sat_bounded(f: &Formula, class: FrameClass, options: &SolveOptions) -> Result<SolveResult, SolverError> {
    match options.threads {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).stack_size(256 << 20).build().expect("thread pool");
            pool.install(|| search(f, class, options))
        }
        None => search(f, class, options),
    }
}

fn search(f: &Formula, class: FrameClass, options: &SolveOptions) -> Result<SolveResult, SolverError> {
    let start = Instant::now();
    if options.max_points < 1 {
        return Err(SolverError::ZeroBound);
    }
    check_class(f, class)?;
    let bound = complete_bound(f, class);
    let vars = f.vars();
    let sat = |model: Model, used: usize, nodes: u64| -> Result<SolveResult, SolverError> {
        Ok(SolveResult {
            status: Status::Sat,
            certificate: Some(verified(model, f)?),
            bound_used: used,
            completeness: Completeness::Complete,
            method: Method::Bounded,
            complete_bound: bound.clone(),
            stats: Stats { nodes, time: start.elapsed() },
        })
    };
    if class != FrameClass::Fence && empty_space_eval(f) {
        let vars: Vec<String> = vars.iter().cloned().collect();
        return sat(empty_model(&vars, class).expect("empty model"), 0, 0);
    }
    let g = rcc8_to_c(f);
    let all = shapes(class, options.max_points);
    let window = rayon::current_num_threads().max(1) * 2;
    let mut nodes = 0u64;
    let mut exhausted = 0usize;
    let mut done = 0usize;
    while done < all.len() {
        if options.timeout.is_some_and(|t| start.elapsed() >= t) {
            break;
        }
        let chunk = &all[done..(done + window).min(all.len())];
        let results: Vec<Option<Model>> = chunk.par_iter().map(|&s| solve_shape(&g, s, class, &vars)).collect();
        nodes += chunk.len() as u64;
        if let Some((i, m)) = results.into_iter().enumerate().find_map(|(i, r)| r.map(|m| (i, m))) {
            return sat(m, chunk[i].points(), nodes);
        }
        done += chunk.len();
        exhausted = match all.get(done) {
            Some(next) => next.points() - 1,
            None => options.max_points,
        };
    }
    let complete = done == all.len() && bound.covered_by(options.max_points);
    Ok(SolveResult {
        status: if complete { Status::Unsat } else { Status::UnsatWithinBound },
        certificate: None,
        bound_used: if done == all.len() { options.max_points } else { exhausted },
        completeness: if complete { Completeness::Complete } else { Completeness::Bounded },
        method: Method::Bounded,
        complete_bound: bound,
        stats: Stats { nodes, time: start.elapsed() },
    })
}

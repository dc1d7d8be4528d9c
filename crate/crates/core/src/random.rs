//! Seeded generators for frames, models, terms and formulas.

use crate::formula::{var, Formula, Rcc8Rel, Term};
use crate::frames::{Frame, FrameClass, Model, PointSet, QuasiSawFrame};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

pub type SeededRng = ChaCha8Rng;

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 0x5eed_7090;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

/// Quasi-order on `n` points generated by random arrows.
pub fn random_frame(rng: &mut SeededRng, n: usize) -> Frame {
    let p = rng.random_range(0.1..0.5);
    let mut edges = Vec::new();
    for x in 0..n {
        for y in 0..n {
            if x != y && rng.random_bool(p) {
                edges.push((x, y));
            }
        }
    }
    Frame::new(names("p", n), &edges).expect("generated names are distinct")
}

/// Quasi-saw with `n0` depth-0 and `n1` depth-1 points; every hub sees at
/// least one depth-0 point.
pub fn random_quasi_saw(rng: &mut SeededRng, n0: usize, n1: usize) -> QuasiSawFrame {
    assert!(n0 > 0 || n1 == 0, "hubs need a depth-0 point");
    let mut all = names("x", n0);
    all.extend(names("z", n1));
    let depth: Vec<u8> = (0..n0).map(|_| 0).chain((0..n1).map(|_| 1)).collect();
    let mut edges = Vec::new();
    for z in 0..n1 {
        let first = rng.random_range(0..n0);
        edges.push((n0 + z, first));
        for x in 0..n0 {
            if x != first && rng.random_bool(0.4) {
                edges.push((n0 + z, x));
            }
        }
    }
    QuasiSawFrame::build(all, depth, &edges).expect("generated quasi-saw is well formed")
}

fn random_set(rng: &mut SeededRng, frame: &Frame) -> PointSet {
    let p = rng.random_range(0.2..0.8);
    frame.set_from_points((0..frame.len()).filter(|_| rng.random_bool(p)))
}

/// Random regular closed set: `cl int X` for a random `X`.
pub fn random_rc_set(rng: &mut SeededRng, frame: &Frame) -> PointSet {
    let x = random_set(rng, frame);
    let i = frame.interior(&x).expect("same frame");
    frame.closure(&i).expect("same frame")
}

/// Linear fence with `intervals` open intervals (and one boundary point between neighbours).
pub fn fence_frame(intervals: usize) -> QuasiSawFrame {
    let mut all = Vec::new();
    let mut depth = Vec::new();
    let mut edges = Vec::new();
    for k in 0..intervals {
        all.push(format!("i{k}"));
        depth.push(0);
        if k + 1 < intervals {
            all.push(format!("p{k}"));
            depth.push(1);
        }
    }
    for k in 0..intervals.saturating_sub(1) {
        let p = 2 * k + 1;
        edges.push((p, p - 1));
        edges.push((p, p + 1));
    }
    QuasiSawFrame::build(all, depth, &edges).expect("fence is a quasi-saw")
}

/// Random model of `class` on at most `max_points` points (at least one).
pub fn random_model(rng: &mut SeededRng, class: FrameClass, max_points: usize, vars: &[String]) -> Model {
    let max_points = max_points.max(1);
    if class == FrameClass::Fence {
        let intervals = rng.random_range(1..=max_points.div_ceil(2));
        let qs = fence_frame(intervals);
        let valuation = vars
            .iter()
            .map(|v| {
                let support = qs.frame().set_from_points(qs.depth0().iter().copied().filter(|_| rng.random_bool(0.5)));
                (v.clone(), qs.rc_from_support(&support).expect("support is depth 0"))
            })
            .collect();
        return Model::new(qs.into_frame(), valuation, class).expect("fence model is valid");
    }
    loop {
        let n = rng.random_range(1..=max_points);
        let frame = random_frame(rng, n);
        if class.requires_connected() && !frame.is_connected() {
            continue;
        }
        let valuation: BTreeMap<String, PointSet> = vars
            .iter()
            .map(|v| {
                let s = if class.is_rc() { random_rc_set(rng, &frame) } else { random_set(rng, &frame) };
                (v.clone(), s)
            })
            .collect();
        return Model::new(frame, valuation, class).expect("generated model is valid");
    }
}

/// Term shape drawn by [`random_term`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TermKind {
    /// `+`, `*`, `-` over regular closed sets.
    Rc,
    /// Set operators with interior and closure.
    Set,
}

pub fn random_term(rng: &mut SeededRng, kind: TermKind, vars: &[String], depth: usize) -> Term {
    if depth == 0 || rng.random_bool(0.3) {
        return match rng.random_range(0..12) {
            0 => Term::Zero,
            1 => Term::One,
            _ => var(vars.choose(rng).expect("at least one variable")),
        };
    }
    let sub = |rng: &mut SeededRng| random_term(rng, kind, vars, depth - 1);
    match kind {
        TermKind::Rc => match rng.random_range(0..3) {
            0 => Term::sum(sub(rng), sub(rng)),
            1 => Term::prod(sub(rng), sub(rng)),
            _ => Term::compl(sub(rng)),
        },
        TermKind::Set => match rng.random_range(0..5) {
            0 => Term::union(sub(rng), sub(rng)),
            1 => Term::inter(sub(rng), sub(rng)),
            2 => Term::set_compl(sub(rng)),
            3 => Term::interior(sub(rng)),
            _ => Term::closure(sub(rng)),
        },
    }
}

/// Atom kinds a random formula may use.
#[derive(Debug, Clone)]
pub struct FormulaShape {
    pub vars: Vec<String>,
    pub kind: TermKind,
    pub term_depth: usize,
    pub atoms: usize,
    pub contact: bool,
    pub rcc8: bool,
    pub conn: bool,
    pub count: bool,
}

impl FormulaShape {
    pub fn new(vars: usize, atoms: usize) -> Self {
        FormulaShape {
            vars: (1..=vars).map(|i| format!("r{i}")).collect(),
            kind: TermKind::Rc,
            term_depth: 2,
            atoms,
            contact: true,
            rcc8: false,
            conn: false,
            count: false,
        }
    }
}

pub fn random_atom(rng: &mut SeededRng, shape: &FormulaShape) -> Formula {
    let t = |rng: &mut SeededRng| random_term(rng, shape.kind, &shape.vars, shape.term_depth);
    let mut choices = vec![0];
    if shape.contact && shape.kind == TermKind::Rc {
        choices.push(1);
    }
    if shape.rcc8 && shape.kind == TermKind::Rc {
        choices.push(2);
    }
    if shape.conn {
        choices.push(3);
    }
    if shape.count {
        choices.push(4);
    }
    match *choices.choose(rng).expect("non-empty") {
        0 => Formula::eq(t(rng), t(rng)),
        1 => Formula::contact(t(rng), t(rng)),
        2 => Formula::rcc8(*Rcc8Rel::ALL.choose(rng).expect("eight relations"), t(rng), t(rng)),
        3 => Formula::conn(t(rng)),
        _ => Formula::conn_le(rng.random_range(1..=3), t(rng)),
    }
}

/// Boolean combination of `shape.atoms` random atoms.
pub fn random_formula(rng: &mut SeededRng, shape: &FormulaShape) -> Formula {
    let atoms: Vec<Formula> = (0..shape.atoms.max(1))
        .map(|_| {
            let a = random_atom(rng, shape);
            if rng.random_bool(0.35) {
                Formula::not(a)
            } else {
                a
            }
        })
        .collect();
    atoms
        .into_iter()
        .reduce(|acc, a| match rng.random_range(0..6) {
            0 => Formula::or(acc, a),
            1 => Formula::implies(acc, a),
            _ => Formula::and(acc, a),
        })
        .expect("at least one atom")
}

use super::GadgetError;
use crate::formula::{var, Formula, Term};
use crate::frames::{FrameClass, Model, PointSet};
use crate::random::fence_frame;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap, HashSet};

/// `(q, a) -> (q', a', d)` as `[q, a, q', a', d]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instruction(pub String, pub String, pub String, pub String, pub i8);

/// Deterministic machine working on `space` cells.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TuringMachine {
    pub states: Vec<String>,
    pub initial: String,
    pub accepting: String,
    pub halting: String,
    pub alphabet: Vec<String>,
    pub blank: String,
    pub space: usize,
    pub delta: Vec<Instruction>,
}

/// A tile with its four edge colours.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TileType {
    pub id: String,
    pub left: String,
    pub top: String,
    pub right: String,
    pub bot: String,
}

impl TileType {
    fn colours(&self) -> (&str, &str, &str, &str) {
        (&self.left, &self.top, &self.right, &self.bot)
    }
}

/// Tape contents, head cell (0-based) and state, all by index.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Config {
    pub state: usize,
    pub head: usize,
    pub tape: Vec<usize>,
}

struct Step {
    next: usize,
    write: usize,
    dir: i8,
}

/// Index form of a validated machine.
pub(crate) struct Compiled {
    pub(crate) space: usize,
    sym: HashMap<String, usize>,
    pub(crate) blank: usize,
    initial: usize,
    accepting: usize,
    pub(crate) states: usize,
    pub(crate) symbols: usize,
    steps: HashMap<(usize, usize), Step>,
    order: Vec<(usize, usize)>,
}

fn index_of(list: &[String], what: &str, kind: &str) -> Result<usize, GadgetError> {
    list.iter()
        .position(|x| x == what)
        .ok_or_else(|| GadgetError::MalformedMachine(format!("unknown {kind} '{what}'")))
}

fn distinct(list: &[String], kind: &str) -> Result<(), GadgetError> {
    let mut seen = HashSet::new();
    for x in list {
        if !seen.insert(x) {
            return Err(GadgetError::MalformedMachine(format!("duplicate {kind} '{x}'")));
        }
    }
    Ok(())
}

impl TuringMachine {
    pub fn from_json(text: &str) -> Result<Self, GadgetError> {
        let m: TuringMachine = serde_json::from_str(text).map_err(|e| GadgetError::Json(e.to_string()))?;
        m.compile()?;
        Ok(m)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("machine serialises")
    }

    pub(crate) fn compile(&self) -> Result<Compiled, GadgetError> {
        let bad = |m: &str| Err(GadgetError::MalformedMachine(m.to_string()));
        if self.states.is_empty() || self.alphabet.is_empty() {
            return bad("states and alphabet must be non-empty");
        }
        if self.space == 0 {
            return bad("space must be at least 1");
        }
        distinct(&self.states, "state")?;
        distinct(&self.alphabet, "symbol")?;
        let st = |s: &str| index_of(&self.states, s, "state");
        let sy = |s: &str| index_of(&self.alphabet, s, "symbol");
        let (initial, accepting, halting, blank) = (st(&self.initial)?, st(&self.accepting)?, st(&self.halting)?, sy(&self.blank)?);
        if accepting == halting {
            return bad("accepting and halting states must differ");
        }
        let mut steps = HashMap::new();
        let mut order = Vec::new();
        for Instruction(q, a, q2, b, d) in &self.delta {
            let key = (st(q)?, sy(a)?);
            let step = Step { next: st(q2)?, write: sy(b)?, dir: *d };
            if !(-1..=1).contains(d) {
                return bad("moves must be -1, 0 or 1");
            }
            if key.0 == halting {
                return bad("the halting state has no transitions");
            }
            if key.0 == accepting && step.next != halting {
                return bad("the accepting state moves only to the halting state");
            }
            if steps.insert(key, step).is_some() {
                return Err(GadgetError::MalformedMachine(format!("two instructions for ({q}, {a})")));
            }
            order.push(key);
        }
        if !steps.contains_key(&(accepting, blank)) {
            return bad("the accepting state needs an instruction on the blank");
        }
        Ok(Compiled {
            space: self.space,
            sym: self.alphabet.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect(),
            blank,
            initial,
            accepting,
            states: self.states.len(),
            symbols: self.alphabet.len(),
            steps,
            order,
        })
    }

    /// The configuration the machine starts in on `input`.
    pub fn initial_config(&self, input: &[String]) -> Result<Config, GadgetError> {
        self.compile()?.initial_config(input)
    }

    /// Successor configuration; `None` when no instruction applies or the
    /// head would leave the tape.
    pub fn step(&self, c: &Config) -> Result<Option<Config>, GadgetError> {
        Ok(self.compile()?.step(c))
    }

    /// The accepting run `c_0 -> ... -> c_{m+1}` on `input`, ending in the
    /// halting configuration; `None` if the machine rejects or loops.
    pub fn accepting_run(&self, input: &[String]) -> Result<Option<Vec<Config>>, GadgetError> {
        let m = self.compile()?;
        let target = m.final_config();
        let mut run = vec![m.initial_config(input)?];
        let mut seen: HashSet<Config> = run.iter().cloned().collect();
        while let Some(next) = m.step(run.last().expect("non-empty")) {
            if !seen.insert(next.clone()) {
                return Ok(None);
            }
            let done = next == target;
            run.push(next);
            if done {
                return Ok(Some(run));
            }
        }
        Ok(None)
    }

    /// Tile types encoding single steps of the machine.
    pub fn tiles(&self) -> Result<Vec<TileType>, GadgetError> {
        Ok(self.compile()?.tiles())
    }
}

fn sym(a: usize) -> String {
    format!("s{a}")
}
fn head(q: usize, a: usize) -> String {
    format!("h{q}_{a}")
}
fn head_top(q: usize) -> String {
    format!("ht{q}")
}
fn head_bot(q: usize) -> String {
    format!("hb{q}")
}
const TOP: &str = "t";
const BOT: &str = "b";

fn tile(left: String, top: String, right: String, bot: String) -> TileType {
    TileType { id: String::new(), left, top, right, bot }
}

impl Compiled {
    fn initial_config(&self, input: &[String]) -> Result<Config, GadgetError> {
        if input.len() > self.space {
            return Err(GadgetError::BadInput(format!("{} symbols exceed the space bound {}", input.len(), self.space)));
        }
        let mut tape = vec![self.blank; self.space];
        for (i, a) in input.iter().enumerate() {
            tape[i] = *self.sym.get(a).ok_or_else(|| GadgetError::BadInput(format!("unknown symbol '{a}'")))?;
        }
        Ok(Config { state: self.initial, head: 0, tape })
    }

    fn accepting_config(&self) -> Config {
        Config { state: self.accepting, head: 0, tape: vec![self.blank; self.space] }
    }

    pub(crate) fn final_config(&self) -> Config {
        self.step(&self.accepting_config()).expect("accepting state steps on the blank")
    }

    fn step(&self, c: &Config) -> Option<Config> {
        let s = self.steps.get(&(c.state, c.tape[c.head]))?;
        let head = c.head.checked_add_signed(s.dir as isize).filter(|&h| h < self.space)?;
        let mut tape = c.tape.clone();
        tape[c.head] = s.write;
        Some(Config { state: s.next, head, tape })
    }

    fn tiles(&self) -> Vec<TileType> {
        let mut out = Vec::new();
        for a in 0..self.symbols {
            out.push(tile(sym(a), TOP.into(), sym(a), TOP.into()));
            out.push(tile(sym(a), BOT.into(), sym(a), BOT.into()));
        }
        for a in 0..self.symbols {
            for q in 0..self.states {
                out.push(tile(sym(a), head_bot(q), head(q, a), BOT.into()));
                out.push(tile(sym(a), TOP.into(), head(q, a), head_top(q)));
            }
        }
        for key in &self.order {
            let (q, a) = *key;
            let s = &self.steps[key];
            out.push(match s.dir {
                0 => tile(head(q, a), TOP.into(), head(s.next, s.write), BOT.into()),
                -1 => tile(head(q, a), TOP.into(), sym(s.write), head_bot(s.next)),
                _ => tile(head(q, a), head_top(s.next), sym(s.write), BOT.into()),
            });
        }
        for (k, t) in out.iter_mut().enumerate() {
            t.id = format!("T{k}");
        }
        out
    }

    /// Tile indices, one per cell, of the step leaving `c`.
    fn step_tiles(&self, c: &Config, tiles: &[TileType]) -> Option<Vec<usize>> {
        let s = self.steps.get(&(c.state, c.tape[c.head]))?;
        let h = c.head;
        let target = h.checked_add_signed(s.dir as isize).filter(|&t| t < self.space)?;
        let index: HashMap<(&str, &str, &str, &str), usize> =
            tiles.iter().enumerate().map(|(k, t)| (t.colours(), k)).collect();
        let mut want = Vec::with_capacity(self.space);
        for (i, &a) in c.tape.iter().enumerate() {
            let below = i < h && !(s.dir == -1 && i == target);
            let t = if i == h {
                match s.dir {
                    0 => tile(head(c.state, a), TOP.into(), head(s.next, s.write), BOT.into()),
                    -1 => tile(head(c.state, a), TOP.into(), sym(s.write), head_bot(s.next)),
                    _ => tile(head(c.state, a), head_top(s.next), sym(s.write), BOT.into()),
                }
            } else if i == target {
                if s.dir == -1 {
                    tile(sym(a), head_bot(s.next), head(s.next, a), BOT.into())
                } else {
                    tile(sym(a), TOP.into(), head(s.next, a), head_top(s.next))
                }
            } else if below {
                tile(sym(a), BOT.into(), sym(a), BOT.into())
            } else {
                tile(sym(a), TOP.into(), sym(a), TOP.into())
            };
            want.push(*index.get(&t.colours()).expect("every step has its tiles"));
        }
        Some(want)
    }
}

fn b_var(l: usize) -> Term {
    var(&format!("B{l}"))
}

fn t_var(k: usize, i: usize) -> Term {
    var(&format!("T{k}_{i}"))
}

fn anchor(seq: Option<Vec<usize>>) -> Formula {
    match seq {
        Some(seq) => Formula::nonzero(Term::prod_all(seq.iter().enumerate().map(|(i, &k)| t_var(k, i + 1)))),
        None => Formula::nonzero(Term::Zero),
    }
}

/// The contact formula satisfiable over connected spaces iff `m` accepts `input`.
pub fn gen_tm_formula(m: &TuringMachine, input: &[String]) -> Result<Formula, GadgetError> {
    let c = m.compile()?;
    let start = c.initial_config(input)?;
    let tiles = c.tiles();
    let (s, n) = (c.space, tiles.len());
    let mut parts = vec![Formula::eq(Term::sum_all((0..3).map(b_var)), Term::One)];
    for l in 0..3 {
        parts.push(Formula::is_zero(Term::prod(b_var(l), b_var((l + 1) % 3))));
    }
    for i in 1..=s {
        parts.push(Formula::eq(Term::sum_all((0..n).map(|k| t_var(k, i))), Term::One));
    }
    for i in 1..=s {
        for k1 in 0..n {
            for k2 in k1 + 1..n {
                parts.push(Formula::is_zero(Term::prod(t_var(k1, i), t_var(k2, i))));
            }
        }
    }
    for i in 1..s {
        for (k1, t1) in tiles.iter().enumerate() {
            for (k2, t2) in tiles.iter().enumerate() {
                if t1.top != t2.bot {
                    parts.push(Formula::is_zero(Term::prod(t_var(k1, i), t_var(k2, i + 1))));
                }
            }
        }
    }
    for (k, t) in tiles.iter().enumerate() {
        if t.bot != BOT {
            parts.push(Formula::is_zero(t_var(k, 1)));
        }
    }
    for (k, t) in tiles.iter().enumerate() {
        if t.top != TOP {
            parts.push(Formula::is_zero(t_var(k, s)));
        }
    }
    for i in 1..=s {
        for l in 0..3 {
            for (k1, t1) in tiles.iter().enumerate() {
                for (k2, t2) in tiles.iter().enumerate() {
                    if t1.right != t2.left {
                        parts.push(Formula::not(Formula::contact(
                            Term::prod(b_var(l), t_var(k1, i)),
                            Term::prod(b_var((l + 1) % 3), t_var(k2, i)),
                        )));
                    }
                }
            }
            for k1 in 0..n {
                for k2 in k1 + 1..n {
                    parts.push(Formula::not(Formula::contact(
                        Term::prod(b_var(l), t_var(k1, i)),
                        Term::prod(b_var(l), t_var(k2, i)),
                    )));
                }
            }
        }
    }
    parts.push(anchor(c.step_tiles(&start, &tiles)));
    parts.push(anchor(c.step_tiles(&c.accepting_config(), &tiles)));
    Ok(Formula::and_all(parts))
}

/// Fence model of the formula from an accepting run `c_0 -> ... -> c_{m+1}`:
/// interval `j` carries the tiles of the step `c_j -> c_{j+1}`.
pub fn gen_tm_witness(m: &TuringMachine, input: &[String], run: &[Config]) -> Result<Model, GadgetError> {
    let c = m.compile()?;
    let tiles = c.tiles();
    if run.len() < 2 {
        return Err(GadgetError::InvalidRun("a run needs at least one step".into()));
    }
    if run[0] != c.initial_config(input)? {
        return Err(GadgetError::InvalidRun("run does not start in the initial configuration".into()));
    }
    if *run.last().expect("non-empty") != c.final_config() {
        return Err(GadgetError::InvalidRun("run does not end in the halting configuration".into()));
    }
    let mut seqs = Vec::with_capacity(run.len() - 1);
    for (j, pair) in run.windows(2).enumerate() {
        if c.step(&pair[0]).as_ref() != Some(&pair[1]) {
            return Err(GadgetError::InvalidRun(format!("step {j} is not a machine step")));
        }
        seqs.push(c.step_tiles(&pair[0], &tiles).expect("a step has its tiles"));
    }
    let qs = fence_frame(seqs.len());
    let frame = qs.frame();
    let interval = |j: usize| frame.point(&format!("i{j}")).expect("interval exists");
    let rc = |pts: Vec<usize>| -> Result<PointSet, GadgetError> { Ok(qs.rc_from_support(&frame.set_from_points(pts))?) };
    let mut valuation = BTreeMap::new();
    for l in 0..3 {
        let pts = (0..seqs.len()).filter(|j| j % 3 == l).map(interval).collect();
        valuation.insert(format!("B{l}"), rc(pts)?);
    }
    for k in 0..tiles.len() {
        for i in 1..=c.space {
            let pts = (0..seqs.len()).filter(|&j| seqs[j][i - 1] == k).map(interval).collect();
            valuation.insert(format!("T{k}_{i}"), rc(pts)?);
        }
    }
    Ok(Model::new(qs.into_frame(), valuation, FrameClass::Fence)?)
}

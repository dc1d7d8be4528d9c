use super::modal::{closure, Modal};
use super::tm::Instruction;
use super::GadgetError;
use crate::formula::{var, Formula, Term};
use crate::frames::{FrameClass, Model, QuasiSawFrame};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

fn q(i: usize) -> Term {
    var(&format!("q{i}"))
}
fn m(b: usize, j: usize) -> Term {
    var(&format!("m{b}_{j}"))
}
fn s(j: usize, k: usize) -> Term {
    var(&format!("s{j}_{k}"))
}
fn f(j: usize) -> Term {
    Term::sum_all((0..6).map(|k| s(j, k)))
}
fn d() -> Term {
    Term::sum(s(0, 0), s(1, 0))
}

struct Closure {
    sub: Vec<Modal>,
    index: HashMap<Modal, usize>,
}

impl Closure {
    fn new(chi: &Modal, psi: &Modal) -> Self {
        let sub = closure(chi, psi);
        let index = sub.iter().enumerate().map(|(i, x)| (x.clone(), i)).collect();
        Closure { sub, index }
    }
    fn q(&self, x: &Modal) -> Term {
        q(self.index[x])
    }
}

/// Which seeding of the successor scaffold is used.
enum Init<'a> {
    /// Every `s_j^{2i}` lies in `s_{j+1}^0`.
    Infinite,
    /// Only points carrying one of these subformulas must grow successors.
    Guarded(&'a [Modal]),
}

fn build(chi: &Modal, psi: &Modal, init: Init) -> Result<Formula, GadgetError> {
    let cl = Closure::new(chi, psi);
    let a = var("a");
    let mut parts = vec![
        Formula::eq(a.clone(), s(0, 6)),
        Formula::eq(a.clone(), s(1, 6)),
        Formula::nonzero(a.clone()),
        Formula::conn(Term::sum(f(0), a.clone())),
        Formula::conn(Term::sum(f(1), a)),
    ];
    for j in 0..2 {
        for k in 0..=6 {
            for k2 in k + 1..=6 {
                parts.push(Formula::is_zero(Term::prod(s(j, k), s(j, k2))));
            }
        }
        for k in 0..=6 {
            for k2 in k + 2..=6 {
                parts.push(Formula::not(Formula::contact(s(j, k), s(j, k2))));
            }
        }
    }
    match init {
        Init::Infinite => {
            for i in 1..=2 {
                parts.push(Formula::le(s(0, 2 * i), s(1, 0)));
                parts.push(Formula::le(s(1, 2 * i), s(0, 0)));
            }
        }
        Init::Guarded(guards) => {
            for g in guards {
                let qg = cl
                    .index
                    .get(g)
                    .map(|&i| q(i))
                    .ok_or_else(|| GadgetError::MalformedModal(format!("guard {g} is not a subformula")))?;
                for i in 1..=2 {
                    parts.push(Formula::le(Term::prod(qg.clone(), s(0, 2 * i)), s(1, 0)));
                    parts.push(Formula::le(Term::prod(qg.clone(), s(1, 2 * i)), s(0, 0)));
                }
            }
        }
    }
    parts.push(Formula::nonzero(Term::prod(cl.q(&psi.negated()), s(0, 0))));
    parts.push(Formula::le(d(), cl.q(chi)));
    for x in &cl.sub {
        match x {
            Modal::Not(y) => {
                parts.push(Formula::eq(Term::prod(d(), cl.q(x)), Term::prod(d(), Term::compl(cl.q(y)))));
            }
            Modal::And(y, z) => {
                parts.push(Formula::eq(Term::prod(d(), cl.q(x)), Term::prod(d(), Term::prod(cl.q(y), cl.q(z)))));
            }
            _ => {}
        }
    }
    for (b, x) in cl.sub.iter().enumerate() {
        let Modal::Box(i, y) = x else { continue };
        for j in 0..2 {
            let mk = m(b, j);
            parts.push(Formula::not(Formula::contact(
                Term::prod(f(j), mk.clone()),
                Term::prod(f(j), Term::compl(mk.clone())),
            )));
            parts.push(Formula::eq(Term::prod(s(j, 0), cl.q(x)), Term::prod(s(j, 0), mk.clone())));
            let succ = s(j, 2 * *i as usize);
            parts.push(Formula::eq(Term::prod(succ.clone(), mk), Term::prod(succ, cl.q(y))));
        }
    }
    Ok(Formula::and_all(parts))
}

/// Formula with the successor seeding guarded by `guards`.
#[cfg(test)]
pub(crate) fn build_guarded(chi: &Modal, psi: &Modal, guards: &[Modal]) -> Result<Formula, GadgetError> {
    build(chi, psi, Init::Guarded(guards))
}

fn check_boxes(x: &Modal) -> Result<(), GadgetError> {
    match x {
        Modal::Var(_) => Ok(()),
        Modal::Not(a) => check_boxes(a),
        Modal::And(a, b) => check_boxes(a).and(check_boxes(b)),
        Modal::Box(i, a) if *i == 1 || *i == 2 => check_boxes(a),
        Modal::Box(i, _) => Err(GadgetError::MalformedModal(format!("box index {i} is not 1 or 2"))),
    }
}

/// Contact formula with two connectedness atoms, satisfiable iff `psi`
/// fails at the root of some binary tree validating `chi`.
pub fn gen_tree_formula(chi: &Modal, psi: &Modal) -> Result<Formula, GadgetError> {
    check_boxes(chi)?;
    check_boxes(psi)?;
    build(chi, psi, Init::Infinite)
}

/// Existential or universal state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exists,
    Forall,
}

/// Alternating machine: every non-final state has two instructions per
/// symbol, listed in order (first, second).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlternatingTM {
    pub states: Vec<String>,
    pub initial: String,
    pub accepting: String,
    #[serde(alias = "halting")]
    pub rejecting: String,
    pub alphabet: Vec<String>,
    pub blank: String,
    pub space: usize,
    pub mode: BTreeMap<String, Mode>,
    pub delta: Vec<Instruction>,
}

type Move = (usize, usize, i8);

struct Atm {
    states: Vec<String>,
    alphabet: Vec<String>,
    space: usize,
    blank: usize,
    initial: usize,
    accepting: usize,
    rejecting: usize,
    mode: Vec<Option<Mode>>,
    moves: HashMap<(usize, usize), [Move; 2]>,
}

/// A configuration of the alternating machine.
type AtmConfig = (usize, usize, Vec<usize>);

impl AlternatingTM {
    pub fn from_json(text: &str) -> Result<Self, GadgetError> {
        let m: AlternatingTM = serde_json::from_str(text).map_err(|e| GadgetError::Json(e.to_string()))?;
        m.compile()?;
        Ok(m)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("machine serialises")
    }

    fn compile(&self) -> Result<Atm, GadgetError> {
        let bad = |m: String| GadgetError::MalformedMachine(m);
        let st = |x: &str| self.states.iter().position(|y| y == x).ok_or_else(|| bad(format!("unknown state '{x}'")));
        let sy = |x: &str| self.alphabet.iter().position(|y| y == x).ok_or_else(|| bad(format!("unknown symbol '{x}'")));
        if self.space == 0 {
            return Err(bad("space must be at least 1".into()));
        }
        if self.states.iter().collect::<HashSet<_>>().len() != self.states.len()
            || self.alphabet.iter().collect::<HashSet<_>>().len() != self.alphabet.len()
        {
            return Err(bad("duplicate state or symbol".into()));
        }
        let (initial, accepting, rejecting, blank) =
            (st(&self.initial)?, st(&self.accepting)?, st(&self.rejecting)?, sy(&self.blank)?);
        if accepting == rejecting {
            return Err(bad("accepting and rejecting states must differ".into()));
        }
        let mut mode = vec![None; self.states.len()];
        for (q, md) in &self.mode {
            mode[st(q)?] = Some(*md);
        }
        let mut lists: HashMap<(usize, usize), Vec<Move>> = HashMap::new();
        for Instruction(q, a, q2, b, dir) in &self.delta {
            if !(-1..=1).contains(dir) {
                return Err(bad("moves must be -1, 0 or 1".into()));
            }
            lists.entry((st(q)?, sy(a)?)).or_default().push((st(q2)?, sy(b)?, *dir));
        }
        let mut moves = HashMap::new();
        for qi in 0..self.states.len() {
            let is_final = qi == accepting || qi == rejecting;
            if !is_final && mode[qi].is_none() {
                return Err(bad(format!("state '{}' has no mode", self.states[qi])));
            }
            for ai in 0..self.alphabet.len() {
                let list = lists.remove(&(qi, ai)).unwrap_or_default();
                match (is_final, list.as_slice()) {
                    (true, []) => {}
                    (false, [x, y]) => {
                        moves.insert((qi, ai), [*x, *y]);
                    }
                    _ => {
                        return Err(bad(format!(
                            "state '{}' on '{}' needs {} instructions",
                            self.states[qi],
                            self.alphabet[ai],
                            if is_final { 0 } else { 2 }
                        )))
                    }
                }
            }
        }
        Ok(Atm {
            states: self.states.clone(),
            alphabet: self.alphabet.clone(),
            space: self.space,
            blank,
            initial,
            accepting,
            rejecting,
            mode,
            moves,
        })
    }

    /// Whether the machine accepts `input`; every branch must halt.
    pub fn accepts(&self, input: &[String]) -> Result<bool, GadgetError> {
        let atm = self.compile()?;
        let start = atm.initial_config(input)?;
        Ok(atm.tree(start, &mut Vec::new(), &mut LabeledBinaryTree { nodes: Vec::new() })?.1)
    }

    /// The labelled computation tree on `input`; `A` marks accepting nodes.
    pub fn computation_tree(&self, input: &[String]) -> Result<LabeledBinaryTree, GadgetError> {
        let atm = self.compile()?;
        let start = atm.initial_config(input)?;
        let mut tree = LabeledBinaryTree { nodes: Vec::new() };
        atm.tree(start, &mut Vec::new(), &mut tree)?;
        Ok(tree)
    }
}

pub(crate) fn head_var(q: &str, i: usize) -> String {
    format!("H_{q}_{i}")
}
pub(crate) fn sym_var(a: &str, i: usize) -> String {
    format!("S_{a}_{i}")
}
const ACCEPT: &str = "A";

impl Atm {
    fn initial_config(&self, input: &[String]) -> Result<AtmConfig, GadgetError> {
        if input.len() > self.space {
            return Err(GadgetError::BadInput(format!("{} symbols exceed the space bound {}", input.len(), self.space)));
        }
        let mut tape = vec![self.blank; self.space];
        for (i, a) in input.iter().enumerate() {
            tape[i] = self
                .alphabet
                .iter()
                .position(|x| x == a)
                .ok_or_else(|| GadgetError::BadInput(format!("unknown symbol '{a}'")))?;
        }
        Ok((self.initial, 0, tape))
    }

    /// Append the subtree below `c`; returns its node and acceptance.
    fn tree(
        &self,
        c: AtmConfig,
        path: &mut Vec<AtmConfig>,
        out: &mut LabeledBinaryTree,
    ) -> Result<(usize, bool), GadgetError> {
        if path.contains(&c) {
            return Err(GadgetError::MalformedMachine("a computation branch does not terminate".into()));
        }
        let (state, head, ref tape) = c;
        let mut labels: BTreeSet<String> = tape.iter().enumerate().map(|(i, &a)| sym_var(&self.alphabet[a], i + 1)).collect();
        labels.insert(head_var(&self.states[state], head + 1));
        let node = out.nodes.len();
        out.nodes.push(TreeNode { children: None, labels });
        let accepted = if state == self.accepting || state == self.rejecting {
            state == self.accepting
        } else {
            path.push(c.clone());
            let mut kids = [0; 2];
            let mut acc = [false; 2];
            for (j, &(q2, b, dir)) in self.moves[&(state, tape[head])].iter().enumerate() {
                let h2 = head
                    .checked_add_signed(dir as isize)
                    .filter(|&h| h < self.space)
                    .ok_or_else(|| GadgetError::MalformedMachine("the head leaves the tape".into()))?;
                let mut t2 = tape.clone();
                t2[head] = b;
                (kids[j], acc[j]) = self.tree((q2, h2, t2), path, out)?;
            }
            path.pop();
            out.nodes[node].children = Some(kids);
            match self.mode[state].expect("non-final states have a mode") {
                Mode::Exists => acc[0] || acc[1],
                Mode::Forall => acc[0] && acc[1],
            }
        };
        if accepted {
            out.nodes[node].labels.insert(ACCEPT.into());
        }
        Ok((node, accepted))
    }

    fn chi(&self) -> Modal {
        let h = |q: usize, i: usize| Modal::var(&head_var(&self.states[q], i));
        let sv = |a: usize, i: usize| Modal::var(&sym_var(&self.alphabet[a], i));
        let acc = Modal::var(ACCEPT);
        let mut parts = Vec::new();
        for i in 1..=self.space {
            let mut keys: Vec<_> = self.moves.keys().copied().collect();
            keys.sort_unstable();
            for (q, a) in keys {
                for (j, &(q2, b, dir)) in self.moves[&(q, a)].iter().enumerate() {
                    let target = i as isize + dir as isize;
                    let after = if (1..=self.space as isize).contains(&target) {
                        Modal::and(h(q2, target as usize), sv(b, i))
                    } else {
                        // Leaving the tape is impossible.
                        Modal::and(acc.clone(), Modal::not(acc.clone()))
                    };
                    parts.push(Modal::implies(Modal::and(h(q, i), sv(a, i)), Modal::boxed(j as u8 + 1, after)));
                }
            }
            for q in 0..self.states.len() {
                for k in (1..=self.space).filter(|&k| k != i) {
                    for a in 0..self.alphabet.len() {
                        for j in 1..=2 {
                            parts.push(Modal::implies(Modal::and(h(q, i), sv(a, k)), Modal::boxed(j, sv(a, k))));
                        }
                    }
                }
            }
            parts.push(Modal::implies(h(self.accepting, i), acc.clone()));
            for q in 0..self.states.len() {
                let both = |combine: fn(Modal, Modal) -> Modal| {
                    combine(Modal::diamond(1, acc.clone()), Modal::diamond(2, acc.clone()))
                };
                match self.mode[q] {
                    Some(_) if q == self.accepting || q == self.rejecting => {}
                    Some(Mode::Forall) => {
                        parts.push(Modal::implies(Modal::and(h(q, i), both(Modal::and)), acc.clone()))
                    }
                    Some(Mode::Exists) => {
                        parts.push(Modal::implies(Modal::and(h(q, i), both(Modal::or)), acc.clone()))
                    }
                    None => {}
                }
            }
        }
        Modal::and_all(parts)
    }

    fn psi(&self, start: &AtmConfig) -> Modal {
        let (q, _, tape) = start;
        let mut parts = vec![Modal::var(&head_var(&self.states[*q], 1))];
        parts.extend(tape.iter().enumerate().map(|(i, &a)| Modal::var(&sym_var(&self.alphabet[a], i + 1))));
        Modal::implies(Modal::and_all(parts), Modal::var(ACCEPT))
    }

    fn guards(&self) -> Vec<Modal> {
        let mut out = Vec::new();
        for (q, name) in self.states.iter().enumerate() {
            if q != self.accepting && q != self.rejecting {
                out.extend((1..=self.space).map(|k| Modal::var(&head_var(name, k))));
            }
        }
        out
    }
}

/// `chi_M` and `psi_a` for an alternating machine and input.
pub fn atm_modal_pair(machine: &AlternatingTM, input: &[String]) -> Result<(Modal, Modal), GadgetError> {
    let atm = machine.compile()?;
    let start = atm.initial_config(input)?;
    Ok((atm.chi(), atm.psi(&start)))
}

/// Finite-tree variant: satisfiable iff the machine rejects `input`.
pub fn gen_atm_formula(machine: &AlternatingTM, input: &[String]) -> Result<Formula, GadgetError> {
    let atm = machine.compile()?;
    let start = atm.initial_config(input)?;
    build(&atm.chi(), &atm.psi(&start), Init::Guarded(&atm.guards()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeNode {
    /// First and second successor.
    pub children: Option<[usize; 2]>,
    /// Propositional variables true at the node.
    pub labels: BTreeSet<String>,
}

/// Finite binary tree rooted at node 0.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledBinaryTree {
    pub nodes: Vec<TreeNode>,
}

impl LabeledBinaryTree {
    /// Depth of every node; errors unless the nodes form one tree rooted at 0.
    pub fn depths(&self) -> Result<Vec<usize>, GadgetError> {
        let bad = |m: &str| GadgetError::InconsistentLabelling(m.to_string());
        if self.nodes.is_empty() {
            return Err(bad("the tree is empty"));
        }
        let mut depth = vec![usize::MAX; self.nodes.len()];
        depth[0] = 0;
        let mut stack = vec![0];
        while let Some(v) = stack.pop() {
            for c in self.nodes[v].children.into_iter().flatten() {
                if c >= self.nodes.len() || c == 0 || depth[c] != usize::MAX {
                    return Err(bad("children do not form a tree"));
                }
                depth[c] = depth[v] + 1;
                stack.push(c);
            }
        }
        if depth.contains(&usize::MAX) {
            return Err(bad("some node is unreachable from the root"));
        }
        Ok(depth)
    }

    /// Truth of `x` at node `v`; boxes hold vacuously at leaves.
    pub fn holds(&self, v: usize, x: &Modal) -> bool {
        match x {
            Modal::Var(p) => self.nodes[v].labels.contains(p),
            Modal::Not(a) => !self.holds(v, a),
            Modal::And(a, b) => self.holds(v, a) && self.holds(v, b),
            Modal::Box(i, a) => match self.nodes[v].children {
                Some(c) => self.holds(c[*i as usize - 1], a),
                None => true,
            },
        }
    }
}

/// Model of hooked 7-saws, one per node, all sharing the sink `w`.
///
/// Node `v` owns depth-0 points `y{v}_0..y{v}_5` and hubs `z{v}_0..z{v}_5`
/// with `z_k` seeing `y_k` and `y_{k+1}` (`y_6` is `w`); the second and
/// fourth points of an inner node are the first points of its children.
pub fn gen_tree_witness(tree: &LabeledBinaryTree, chi: &Modal, psi: &Modal) -> Result<Model, GadgetError> {
    check_boxes(chi)?;
    check_boxes(psi)?;
    let depth = tree.depths()?;
    for v in 0..tree.nodes.len() {
        if !tree.holds(v, chi) {
            return Err(GadgetError::InconsistentLabelling(format!("chi fails at node {v}")));
        }
    }
    if tree.holds(0, psi) {
        return Err(GadgetError::InconsistentLabelling("psi holds at the root".into()));
    }
    let cl = Closure::new(chi, psi);
    let mut names = vec!["w".to_string()];
    let mut depths = vec![0u8];
    let mut ids: HashMap<String, usize> = HashMap::from([("w".to_string(), 0)]);
    let mut point = |name: String, d: u8, names: &mut Vec<String>, depths: &mut Vec<u8>| -> usize {
        *ids.entry(name.clone()).or_insert_with(|| {
            names.push(name);
            depths.push(d);
            names.len() - 1
        })
    };
    // ys[v][k] for k in 0..=6.
    let mut ys = vec![[0usize; 7]; tree.nodes.len()];
    let mut edges = Vec::new();
    for (v, node) in tree.nodes.iter().enumerate() {
        for k in 0..6 {
            let owner = match (k, node.children) {
                (2, Some(c)) => Some(c[0]),
                (4, Some(c)) => Some(c[1]),
                _ => None,
            };
            let name = match owner {
                Some(c) => format!("y{c}_0"),
                None => format!("y{v}_{k}"),
            };
            ys[v][k] = point(name, 0, &mut names, &mut depths);
        }
        ys[v][6] = 0;
    }
    for v in 0..tree.nodes.len() {
        for k in 0..6 {
            let z = point(format!("z{v}_{k}"), 1, &mut names, &mut depths);
            edges.push((z, ys[v][k]));
            edges.push((z, ys[v][k + 1]));
        }
    }
    let qs = QuasiSawFrame::build(names, depths, &edges)?;
    let frame = qs.frame();
    let mut support: BTreeMap<String, BTreeSet<usize>> = BTreeMap::new();
    for j in 0..2 {
        for k in 0..=6 {
            support.entry(format!("s{j}_{k}")).or_default();
        }
    }
    let mut add = |name: String, p: usize| {
        support.entry(name).or_default().insert(p);
    };
    for j in 0..2 {
        add(format!("s{j}_6"), 0);
    }
    add("a".into(), 0);
    for (v, node) in tree.nodes.iter().enumerate() {
        let j = depth[v] % 2;
        for k in 0..6 {
            add(format!("s{j}_{k}"), ys[v][k]);
        }
        for (i, x) in cl.sub.iter().enumerate() {
            if tree.holds(v, x) {
                add(format!("q{i}"), ys[v][0]);
            }
            if let Modal::Box(bi, y) = x {
                if tree.holds(v, x) {
                    for k in 0..6 {
                        add(format!("m{i}_{j}"), ys[v][k]);
                    }
                }
                // A leaf's successor points stand in for children where
                // every boxed subformula holds.
                if node.children.is_none() {
                    add(format!("q{}", cl.index[&**y]), ys[v][2 * *bi as usize]);
                }
            }
        }
    }
    let mut valuation = BTreeMap::new();
    for (i, x) in cl.sub.iter().enumerate() {
        valuation.insert(format!("q{i}"), frame.empty_set());
        if matches!(x, Modal::Box(..)) {
            for j in 0..2 {
                valuation.insert(format!("m{i}_{j}"), frame.empty_set());
            }
        }
    }
    for (name, pts) in support {
        valuation.insert(name, frame.set_from_points(pts));
    }
    for val in valuation.values_mut() {
        *val = qs.rc_from_support(val)?;
    }
    Ok(Model::new(qs.into_frame(), valuation, FrameClass::Conregc)?)
}

//! CNF encoding of "some model of this shape satisfies the formula".

use crate::formula::{Formula, Term};
use crate::frames::{FrameClass, FrameError, Model, QuasiSawFrame};
use crate::frames::Frame;
use num_traits::ToPrimitive;
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use varisat::{CnfFormula, ExtendFormula, Lit, Solver};

/// Frame shape with a fixed number of points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Shape {
    /// `n0` depth-0 points followed by `n1` depth-1 points, arrows chosen by the solver.
    QuasiSaw { n0: usize, n1: usize },
    /// Alternating interval and boundary cells, `intervals` of the former.
    Fence { intervals: usize },
    /// `n` points under a reflexive-transitive relation chosen by the solver.
    General { n: usize },
}

impl Shape {
    pub(crate) fn points(self) -> usize {
        match self {
            Shape::QuasiSaw { n0, n1 } => n0 + n1,
            Shape::Fence { intervals } => 2 * intervals - 1,
            Shape::General { n } => n,
        }
    }
}

pub(crate) struct Encoding {
    cnf: CnfFormula,
    t: Lit,
    shape: Shape,
    n: usize,
    /// Points whose membership fixes every regular closed set; all points for `General`.
    core: Vec<usize>,
    /// Arrows `x -> y` for `x != y`: chosen, fixed (`t`) or absent.
    arrow: Vec<Vec<Option<Lit>>>,
    /// Undirected adjacency for component counting.
    adj: Vec<Vec<Option<Lit>>>,
    members: HashMap<Term, Vec<Lit>>,
    atoms: HashMap<(Formula, bool), Lit>,
    /// Terms used to split connected regions in redundant clauses.
    splitters: Vec<Term>,
}

impl Encoding {
    pub(crate) fn new(shape: Shape) -> Encoding {
        let mut cnf = CnfFormula::new();
        let t = cnf.new_lit();
        cnf.add_clause(&[t]);
        let n = shape.points();
        let mut enc = Encoding {
            cnf,
            t,
            shape,
            n,
            core: Vec::new(),
            arrow: vec![vec![None; n]; n],
            adj: vec![vec![None; n]; n],
            members: HashMap::new(),
            atoms: HashMap::new(),
            splitters: Vec::new(),
        };
        match shape {
            Shape::QuasiSaw { n0, n1 } => {
                enc.core = (0..n0).collect();
                for z in n0..n0 + n1 {
                    let succ: Vec<Lit> = (0..n0).map(|_| enc.cnf.new_lit()).collect();
                    // At least two successors.
                    enc.cnf.add_clause(&succ);
                    for (j, &e) in succ.iter().enumerate() {
                        let mut others: Vec<Lit> = succ.iter().enumerate().filter(|&(i, _)| i != j).map(|(_, &l)| l).collect();
                        others.push(!e);
                        enc.cnf.add_clause(&others);
                        enc.arrow[z][j] = Some(e);
                        enc.adj[z][j] = Some(e);
                        enc.adj[j][z] = Some(e);
                    }
                }
                // Hubs in lexicographic order of successor sets (symmetry breaking).
                for z in n0..(n0 + n1).saturating_sub(1) {
                    let a: Vec<Lit> = (0..n0).map(|j| enc.arrow[z][j].unwrap()).collect();
                    let b: Vec<Lit> = (0..n0).map(|j| enc.arrow[z + 1][j].unwrap()).collect();
                    enc.lex_order(&a, &b, true);
                }
            }
            Shape::Fence { intervals } => {
                enc.core = (0..intervals).map(|i| 2 * i).collect();
                for p in (1..n).step_by(2) {
                    for q in [p - 1, p + 1] {
                        enc.arrow[p][q] = Some(t);
                        enc.adj[p][q] = Some(t);
                        enc.adj[q][p] = Some(t);
                    }
                }
            }
            Shape::General { n } => {
                enc.core = (0..n).collect();
                for i in 0..n {
                    for j in 0..n {
                        if i != j {
                            enc.arrow[i][j] = Some(enc.cnf.new_lit());
                        }
                    }
                }
                for i in 0..n {
                    for j in 0..n {
                        for k in 0..n {
                            if i != j && j != k && i != k {
                                let (a, b, c) = (enc.arrow[i][j].unwrap(), enc.arrow[j][k].unwrap(), enc.arrow[i][k].unwrap());
                                enc.cnf.add_clause(&[!a, !b, c]);
                            }
                        }
                    }
                }
                for i in 0..n {
                    for j in i + 1..n {
                        let l = enc.or(&[enc.arrow[i][j].unwrap(), enc.arrow[j][i].unwrap()]);
                        enc.adj[i][j] = Some(l);
                        enc.adj[j][i] = Some(l);
                    }
                }
            }
        }
        enc
    }

    /// Lexicographic order `a < b` (or `a <= b` unless `strict`), most significant bit first.
    fn lex_order(&mut self, a: &[Lit], b: &[Lit], strict: bool) {
        // eq_prev: prefixes before i agree.
        let mut eq_prev = self.t;
        let mut witnesses = Vec::new();
        for i in 0..a.len() {
            let lt = self.and(&[eq_prev, !a[i], b[i]]);
            witnesses.push(lt);
            let same = self.xnor(a[i], b[i]);
            eq_prev = self.and(&[eq_prev, same]);
        }
        if !strict {
            witnesses.push(eq_prev);
        }
        self.cnf.add_clause(&witnesses);
    }

    /// Longest simple path, in edges, that reachability must cover.
    fn path_levels(&self) -> usize {
        match self.shape {
            // Paths alternate between depth-0 points and hubs.
            Shape::QuasiSaw { n0, .. } => (self.n - 1).min(2 * n0),
            _ => self.n - 1,
        }
    }

    fn is_true(&self, l: Lit) -> bool {
        l == self.t
    }

    fn is_false(&self, l: Lit) -> bool {
        l == !self.t
    }

    pub(crate) fn and(&mut self, lits: &[Lit]) -> Lit {
        if lits.iter().any(|&l| self.is_false(l)) {
            return !self.t;
        }
        let mut ls: Vec<Lit> = lits.iter().copied().filter(|&l| !self.is_true(l)).collect();
        ls.sort_by_key(|l| l.code());
        ls.dedup();
        match ls.len() {
            0 => self.t,
            1 => ls[0],
            _ => {
                let g = self.cnf.new_lit();
                let mut back = vec![g];
                for &l in &ls {
                    self.cnf.add_clause(&[!g, l]);
                    back.push(!l);
                }
                self.cnf.add_clause(&back);
                g
            }
        }
    }

    pub(crate) fn or(&mut self, lits: &[Lit]) -> Lit {
        let neg: Vec<Lit> = lits.iter().map(|&l| !l).collect();
        !self.and(&neg)
    }

    fn xnor(&mut self, a: Lit, b: Lit) -> Lit {
        let both = self.and(&[a, b]);
        let neither = self.and(&[!a, !b]);
        self.or(&[both, neither])
    }

    /// Membership literal of every point in the extension of `t`.
    pub(crate) fn member(&mut self, t: &Term) -> Vec<Lit> {
        if let Some(v) = self.members.get(t) {
            return v.clone();
        }
        let v = match self.shape {
            Shape::General { .. } => self.member_general(t),
            _ => self.member_rc(t),
        };
        self.members.insert(t.clone(), v.clone());
        v
    }

    fn var_lits(&mut self) -> Vec<Lit> {
        (0..self.n).map(|_| self.cnf.new_lit()).collect()
    }

    /// Regular closed terms on two-level shapes: Boolean at depth 0, existential above.
    fn member_rc(&mut self, t: &Term) -> Vec<Lit> {
        let core_vals: Vec<Lit> = match t {
            Term::Var(_) => {
                let fresh = self.var_lits();
                self.core.clone().into_iter().map(|p| fresh[p]).collect()
            }
            Term::Zero => vec![!self.t; self.core.len()],
            Term::One => vec![self.t; self.core.len()],
            Term::Sum(a, b) | Term::Prod(a, b) | Term::Union(a, b) | Term::Inter(a, b) => {
                let (x, y) = (self.member(a), self.member(b));
                let conj = matches!(t, Term::Prod(..) | Term::Inter(..));
                self.core
                    .clone()
                    .into_iter()
                    .map(|p| if conj { self.and(&[x[p], y[p]]) } else { self.or(&[x[p], y[p]]) })
                    .collect()
            }
            Term::Compl(a) | Term::SetCompl(a) => {
                let x = self.member(a);
                self.core.iter().map(|&p| !x[p]).collect()
            }
            Term::Interior(_) | Term::Closure(_) => unreachable!("set operator on a two-level shape"),
        };
        let mut out = vec![!self.t; self.n];
        for (i, &p) in self.core.iter().enumerate() {
            out[p] = core_vals[i];
        }
        for z in 0..self.n {
            if !self.core.contains(&z) {
                let pairs: Vec<(Lit, Lit)> =
                    self.core.iter().filter_map(|&j| self.arrow[z][j].map(|e| (e, out[j]))).collect();
                let ins: Vec<Lit> = pairs.into_iter().map(|(e, x)| self.and(&[e, x])).collect();
                out[z] = self.or(&ins);
            }
        }
        out
    }

    fn member_general(&mut self, t: &Term) -> Vec<Lit> {
        let n = self.n;
        match t {
            Term::Var(_) => self.var_lits(),
            Term::Zero => vec![!self.t; n],
            Term::One => vec![self.t; n],
            Term::Union(a, b) | Term::Sum(a, b) => {
                let (x, y) = (self.member(a), self.member(b));
                (0..n).map(|p| self.or(&[x[p], y[p]])).collect()
            }
            Term::Inter(a, b) => {
                let (x, y) = (self.member(a), self.member(b));
                (0..n).map(|p| self.and(&[x[p], y[p]])).collect()
            }
            Term::SetCompl(a) => self.member(a).into_iter().map(|l| !l).collect(),
            Term::Interior(a) => {
                let x = self.member(a);
                self.interior(&x)
            }
            Term::Closure(a) => {
                let x = self.member(a);
                self.closure(&x)
            }
            Term::Prod(a, b) => {
                let (x, y) = (self.member(a), self.member(b));
                let meet: Vec<Lit> = (0..n).map(|p| self.and(&[x[p], y[p]])).collect();
                let int = self.interior(&meet);
                self.closure(&int)
            }
            Term::Compl(a) => {
                let x: Vec<Lit> = self.member(a).into_iter().map(|l| !l).collect();
                self.closure(&x)
            }
        }
    }

    fn interior(&mut self, x: &[Lit]) -> Vec<Lit> {
        (0..self.n)
            .map(|i| {
                let mut parts = vec![x[i]];
                for j in 0..self.n {
                    if let Some(r) = self.arrow[i][j] {
                        parts.push(self.or(&[!r, x[j]]));
                    }
                }
                self.and(&parts)
            })
            .collect()
    }

    fn closure(&mut self, x: &[Lit]) -> Vec<Lit> {
        (0..self.n)
            .map(|i| {
                let mut parts = vec![x[i]];
                for j in 0..self.n {
                    if let Some(r) = self.arrow[i][j] {
                        parts.push(self.and(&[r, x[j]]));
                    }
                }
                self.or(&parts)
            })
            .collect()
    }

    /// A literal implying the atom (`positive`) or its negation.
    fn atom(&mut self, atom: &Formula, positive: bool) -> Lit {
        let key = (atom.clone(), positive);
        if let Some(&l) = self.atoms.get(&key) {
            return l;
        }
        let l = match atom {
            Formula::Eq(a, b) => {
                let (x, y) = (self.member(a), self.member(b));
                let core = self.core.clone();
                let same: Vec<Lit> = core.iter().map(|&p| self.xnor(x[p], y[p])).collect();
                if positive {
                    self.and(&same)
                } else {
                    let diff: Vec<Lit> = same.iter().map(|&l| !l).collect();
                    self.or(&diff)
                }
            }
            Formula::Contact(ts) => {
                let vals: Vec<Vec<Lit>> = ts.iter().map(|t| self.member(t)).collect();
                let common: Vec<Lit> = (0..self.n)
                    .map(|p| {
                        let at_p: Vec<Lit> = vals.iter().map(|v| v[p]).collect();
                        self.and(&at_p)
                    })
                    .collect();
                let some = self.or(&common);
                if positive {
                    some
                } else {
                    !some
                }
            }
            Formula::Conn(t) => self.count_atom(t, 1, positive),
            Formula::ConnLe(k, t) => self.count_atom(t, k.to_usize().unwrap_or(usize::MAX), positive),
            _ => unreachable!("RCC8 atoms are rewritten before encoding"),
        };
        self.atoms.insert(key, l);
        l
    }

    /// Add, for every connected region, clauses saying each splitter cuts it
    /// into pieces in contact (or leaves one piece empty). Valid on two-level
    /// shapes; it lets the solver refute connectedness locally.
    pub(crate) fn split_with(&mut self, terms: Vec<Term>) {
        if !matches!(self.shape, Shape::General { .. }) {
            self.splitters = terms;
        }
    }

    fn split_clauses(&mut self, t: &Term, guard: Lit) {
        for a in self.splitters.clone() {
            let inside = self.member(&Term::prod(t.clone(), a.clone()));
            let outside = self.member(&Term::prod(t.clone(), Term::compl(a)));
            let core = self.core.clone();
            let mut clause = vec![!guard];
            clause.push(!self.or(&core.iter().map(|&p| inside[p]).collect::<Vec<_>>()));
            clause.push(!self.or(&core.iter().map(|&p| outside[p]).collect::<Vec<_>>()));
            let touch: Vec<Lit> = (0..self.n).map(|p| self.and(&[inside[p], outside[p]])).collect();
            clause.push(self.or(&touch));
            self.cnf.add_clause(&clause);
        }
    }

    /// `positive`: at most `k` components; otherwise at least `k + 1`.
    fn count_atom(&mut self, t: &Term, k: usize, positive: bool) -> Lit {
        let n = self.n;
        if k >= n {
            return if positive { self.t } else { !self.t };
        }
        let x = self.member(t);
        let guard = self.cnf.new_lit();
        if positive {
            let roots: Vec<Lit> = (0..n).map(|_| self.cnf.new_lit()).collect();
            for p in 0..n {
                self.cnf.add_clause(&[!roots[p], x[p]]);
            }
            self.at_most(&roots, k);
            let mut reach: Vec<Lit> = roots.clone();
            for _ in 0..self.path_levels() {
                let next: Vec<Lit> = (0..n)
                    .map(|p| {
                        let mut via = vec![reach[p]];
                        for q in 0..n {
                            if let Some(a) = self.adj[p][q] {
                                via.push(self.and(&[reach[q], a]));
                            }
                        }
                        let r = self.or(&via);
                        self.and(&[r, x[p]])
                    })
                    .collect();
                reach = next;
            }
            for p in 0..n {
                self.cnf.add_clause(&[!guard, !x[p], reach[p]]);
            }
            if k == 1 {
                self.split_clauses(t, guard);
            }
        } else {
            let colours = k + 1;
            let c: Vec<Vec<Lit>> = (0..n).map(|_| (0..colours).map(|_| self.cnf.new_lit()).collect()).collect();
            for p in 0..n {
                let mut alo = vec![!guard, !x[p]];
                alo.extend(c[p].iter().copied());
                self.cnf.add_clause(&alo);
                for a in 0..colours {
                    self.cnf.add_clause(&[!c[p][a], x[p]]);
                    for b in a + 1..colours {
                        self.cnf.add_clause(&[!c[p][a], !c[p][b]]);
                    }
                }
                for q in 0..n {
                    if let Some(adj) = self.adj[p][q] {
                        for a in 0..colours {
                            self.cnf.add_clause(&[!guard, !adj, !c[p][a], !x[q], c[q][a]]);
                        }
                    }
                }
            }
            for a in 0..colours {
                let mut used = vec![!guard];
                used.extend((0..n).map(|p| c[p][a]));
                self.cnf.add_clause(&used);
            }
        }
        guard
    }

    /// Sequential-counter encoding of `sum(lits) <= k` for `1 <= k`.
    fn at_most(&mut self, lits: &[Lit], k: usize) {
        let n = lits.len();
        if k >= n {
            return;
        }
        let s: Vec<Vec<Lit>> = (0..n).map(|_| (0..k).map(|_| self.cnf.new_lit()).collect()).collect();
        for i in 0..n {
            self.cnf.add_clause(&[!lits[i], s[i][0]]);
            if i == 0 {
                for j in 1..k {
                    self.cnf.add_clause(&[!s[0][j]]);
                }
                continue;
            }
            for j in 0..k {
                self.cnf.add_clause(&[!s[i - 1][j], s[i][j]]);
            }
            for j in 1..k {
                self.cnf.add_clause(&[!lits[i], !s[i - 1][j - 1], s[i][j]]);
            }
            self.cnf.add_clause(&[!lits[i], !s[i - 1][k - 1]]);
        }
    }

    /// Literal implying truth (`positive`) or falsity of `f`.
    fn formula(&mut self, f: &Formula, positive: bool) -> Lit {
        // Chains of one connective are flattened with an explicit stack so
        // that long generated conjunctions do not exhaust the call stack.
        let (f, positive) = strip_not(f, positive);
        let Some(conj) = junction(f, positive) else {
            return self.atom(f, positive);
        };
        let mut leaves = Vec::new();
        let mut stack = vec![(f, positive)];
        while let Some((g, p)) = stack.pop() {
            let (g, p) = strip_not(g, p);
            match (junction(g, p), g) {
                (Some(c), Formula::And(a, b) | Formula::Or(a, b)) if c == conj => {
                    stack.push((b, p));
                    stack.push((a, p));
                }
                (Some(c), Formula::Implies(a, b)) if c == conj => {
                    stack.push((b, p));
                    stack.push((a, !p));
                }
                _ => leaves.push((g, p)),
            }
        }
        let lits: Vec<Lit> = leaves.into_iter().map(|(g, p)| self.formula(g, p)).collect();
        if conj {
            self.and(&lits)
        } else {
            self.or(&lits)
        }
    }

    /// Require `f` to hold.
    pub(crate) fn assert_formula(&mut self, f: &Formula) {
        let l = self.formula(f, true);
        self.cnf.add_clause(&[l]);
    }

    /// Require the whole frame to be connected.
    pub(crate) fn assert_connected(&mut self) {
        let n = self.n;
        if n == 0 {
            return;
        }
        // Every point is a member, so point 0 can serve as the root.
        let levels = match self.shape {
            Shape::QuasiSaw { n0, .. } => (n - 1).min(2 * n0 - 1),
            _ => n - 1,
        };
        let mut reach: Vec<Lit> = (0..n).map(|p| if p == 0 { self.t } else { !self.t }).collect();
        for _ in 0..levels {
            reach = (0..n)
                .map(|p| {
                    let mut via = vec![reach[p]];
                    for q in 0..n {
                        if let Some(a) = self.adj[p][q] {
                            via.push(self.and(&[reach[q], a]));
                        }
                    }
                    self.or(&via)
                })
                .collect();
        }
        for l in reach {
            self.cnf.add_clause(&[l]);
        }
    }

    /// Solve and decode a model over `vars`.
    pub(crate) fn solve(mut self, vars: &BTreeSet<String>, class: FrameClass) -> Option<Model> {
        let var_terms: Vec<(String, Vec<Lit>)> =
            vars.iter().map(|v| (v.clone(), self.member(&Term::Var(v.clone())))).collect();
        if let Shape::QuasiSaw { n0, n1 } = self.shape {
            // Depth-0 points are interchangeable: order their columns (variable
            // supports, then incoming arrows). Together with the hub row order
            // this is a double-lex ordering, which every model can be permuted into.
            let column = |p: usize| -> Vec<Lit> {
                var_terms
                    .iter()
                    .map(|(_, lits)| lits[p])
                    .chain((n0..n0 + n1).map(|z| self.arrow[z][p].expect("hub arrow")))
                    .collect()
            };
            let cols: Vec<Vec<Lit>> = (0..n0).map(column).collect();
            for w in cols.windows(2) {
                self.lex_order(&w[0], &w[1], false);
            }
        }
        let mut solver = Solver::new();
        solver.add_formula(&self.cnf);
        if !solver.solve().expect("SAT backend failure") {
            return None;
        }
        let truth: HashSet<Lit> = solver.model().expect("model after SAT").into_iter().collect();
        let val = |l: Lit| truth.contains(&l);
        let model = self.decode(&val, &var_terms, class).expect("decoded model is well-formed");
        Some(model)
    }

    fn decode(
        &self,
        val: &impl Fn(Lit) -> bool,
        var_terms: &[(String, Vec<Lit>)],
        class: FrameClass,
    ) -> Result<Model, FrameError> {
        let n = self.n;
        let mut edges = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if let Some(l) = self.arrow[i][j] {
                    if val(l) {
                        edges.push((i, j));
                    }
                }
            }
        }
        match self.shape {
            Shape::General { n } => {
                let names = (0..n).map(|i| format!("w{i}")).collect();
                let frame = Frame::new(names, &edges)?;
                let valuation = var_terms
                    .iter()
                    .map(|(v, lits)| (v.clone(), frame.set_from_points((0..n).filter(|&p| val(lits[p])))))
                    .collect();
                Model::new(frame, valuation, class)
            }
            _ => {
                let (names, depth): (Vec<String>, Vec<u8>) = match self.shape {
                    Shape::QuasiSaw { n0, n1 } => (0..n0)
                        .map(|i| (format!("x{i}"), 0))
                        .chain((0..n1).map(|i| (format!("z{i}"), 1)))
                        .unzip(),
                    _ => (0..n)
                        .map(|c| if c % 2 == 0 { (format!("i{}", c / 2), 0) } else { (format!("p{}", c / 2 + 1), 1) })
                        .unzip(),
                };
                let qs = QuasiSawFrame::build(names, depth, &edges)?;
                let mut valuation = BTreeMap::new();
                for (v, lits) in var_terms {
                    let support = qs.frame().set_from_points(self.core.iter().copied().filter(|&p| val(lits[p])));
                    valuation.insert(v.clone(), qs.rc_from_support(&support)?);
                }
                Model::new(qs.into_frame(), valuation, class)
            }
        }
    }
}

fn strip_not(mut f: &Formula, mut positive: bool) -> (&Formula, bool) {
    while let Formula::Not(a) = f {
        f = a;
        positive = !positive;
    }
    (f, positive)
}

/// `Some(true)` if `f` at this polarity acts as a conjunction, `Some(false)`
/// for a disjunction, `None` for an atom.
fn junction(f: &Formula, positive: bool) -> Option<bool> {
    match f {
        Formula::And(..) => Some(positive),
        Formula::Or(..) | Formula::Implies(..) => Some(!positive),
        _ => None,
    }
}

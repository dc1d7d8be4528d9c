use super::ast::Formula;
use std::collections::HashMap;

/// Propositional abstraction of a formula: atoms become letters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Prop {
    Letter(usize),
    Not(Box<Prop>),
    And(Box<Prop>, Box<Prop>),
    Or(Box<Prop>, Box<Prop>),
    Implies(Box<Prop>, Box<Prop>),
}

/// Letter `i` stands for `atoms[i]`; structurally equal atoms share a letter.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AtomTable {
    pub atoms: Vec<Formula>,
}

impl AtomTable {
    pub fn len(&self) -> usize {
        self.atoms.len()
    }
    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }
    pub fn atom(&self, letter: usize) -> &Formula {
        &self.atoms[letter]
    }
}

pub type Literal = (usize, bool);

pub fn propositional_skeleton(f: &Formula) -> (Prop, AtomTable) {
    fn go(f: &Formula, table: &mut AtomTable, index: &mut HashMap<Formula, usize>) -> Prop {
        match f {
            Formula::And(a, b) => Prop::And(Box::new(go(a, table, index)), Box::new(go(b, table, index))),
            Formula::Or(a, b) => Prop::Or(Box::new(go(a, table, index)), Box::new(go(b, table, index))),
            Formula::Implies(a, b) => {
                Prop::Implies(Box::new(go(a, table, index)), Box::new(go(b, table, index)))
            }
            Formula::Not(a) => Prop::Not(Box::new(go(a, table, index))),
            atom => {
                let next = table.atoms.len();
                let id = *index.entry(atom.clone()).or_insert(next);
                if id == next {
                    table.atoms.push(atom.clone());
                }
                Prop::Letter(id)
            }
        }
    }
    let mut table = AtomTable::default();
    let mut index = HashMap::new();
    let p = go(f, &mut table, &mut index);
    (p, table)
}

impl Prop {
    /// Kleene three-valued evaluation under a partial assignment.
    pub fn eval3(&self, assign: &[Option<bool>]) -> Option<bool> {
        match self {
            Prop::Letter(i) => assign[*i],
            Prop::Not(a) => a.eval3(assign).map(|v| !v),
            Prop::And(a, b) => match (a.eval3(assign), b.eval3(assign)) {
                (Some(false), _) | (_, Some(false)) => Some(false),
                (Some(true), Some(true)) => Some(true),
                _ => None,
            },
            Prop::Or(a, b) => match (a.eval3(assign), b.eval3(assign)) {
                (Some(true), _) | (_, Some(true)) => Some(true),
                (Some(false), Some(false)) => Some(false),
                _ => None,
            },
            Prop::Implies(a, b) => match (a.eval3(assign), b.eval3(assign)) {
                (Some(false), _) | (_, Some(true)) => Some(true),
                (Some(true), Some(false)) => Some(false),
                _ => None,
            },
        }
    }

    pub fn eval(&self, assign: &[bool]) -> bool {
        match self {
            Prop::Letter(i) => assign[*i],
            Prop::Not(a) => !a.eval(assign),
            Prop::And(a, b) => a.eval(assign) && b.eval(assign),
            Prop::Or(a, b) => a.eval(assign) || b.eval(assign),
            Prop::Implies(a, b) => !a.eval(assign) || b.eval(assign),
        }
    }

    /// Literals forced by top-level conjuncts.
    fn forced(&self, out: &mut Vec<Literal>) {
        match self {
            Prop::And(a, b) => {
                a.forced(out);
                b.forced(out);
            }
            Prop::Letter(i) => out.push((*i, true)),
            Prop::Not(a) => {
                if let Prop::Letter(i) = a.as_ref() {
                    out.push((*i, false))
                }
            }
            _ => {}
        }
    }
}

/// Depth-first enumeration of satisfying assignments of a skeleton.
///
/// In full mode every letter is assigned; otherwise enumeration stops as soon
/// as the skeleton is decided true, yielding disjoint partial assignments.
pub struct LiteralSets<'a> {
    prop: &'a Prop,
    letters: usize,
    full: bool,
    stack: Vec<Vec<Option<bool>>>,
}

impl<'a> LiteralSets<'a> {
    pub fn new(prop: &'a Prop, letters: usize, full: bool) -> Self {
        let mut start = vec![None; letters];
        let mut forced = Vec::new();
        prop.forced(&mut forced);
        let mut consistent = true;
        for (i, v) in forced {
            match start[i] {
                Some(w) if w != v => consistent = false,
                _ => start[i] = Some(v),
            }
        }
        let stack = if consistent { vec![start] } else { vec![] };
        LiteralSets { prop, letters, full, stack }
    }
}

impl Iterator for LiteralSets<'_> {
    type Item = Vec<Literal>;

    fn next(&mut self) -> Option<Vec<Literal>> {
        while let Some(assign) = self.stack.pop() {
            let value = self.prop.eval3(&assign);
            if value == Some(false) {
                continue;
            }
            let free = assign.iter().position(Option::is_none);
            if free.is_none() || (value == Some(true) && !self.full) {
                return Some(
                    assign
                        .iter()
                        .enumerate()
                        .filter_map(|(i, v)| v.map(|b| (i, b)))
                        .collect(),
                );
            }
            let i = free.unwrap();
            debug_assert!(i < self.letters);
            let mut f = assign.clone();
            f[i] = Some(false);
            let mut t = assign;
            t[i] = Some(true);
            self.stack.push(f);
            self.stack.push(t);
        }
        None
    }
}

/// Full satisfying literal sets (one per satisfying total assignment).
pub fn literal_sets<'a>(prop: &'a Prop, table: &AtomTable) -> LiteralSets<'a> {
    LiteralSets::new(prop, table.len(), true)
}

/// Disjoint partial assignments that already force the skeleton true.
pub fn implicants<'a>(prop: &'a Prop, table: &AtomTable) -> LiteralSets<'a> {
    LiteralSets::new(prop, table.len(), false)
}

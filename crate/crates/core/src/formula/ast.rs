use num_bigint::BigUint;
use std::fmt;

/// Region terms. The first group is the regular-closed algebra, the second
/// the plain set algebra with interior and closure.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(String),
    Zero,
    One,
    Sum(Box<Term>, Box<Term>),
    Prod(Box<Term>, Box<Term>),
    Compl(Box<Term>),
    Union(Box<Term>, Box<Term>),
    Inter(Box<Term>, Box<Term>),
    SetCompl(Box<Term>),
    Interior(Box<Term>),
    Closure(Box<Term>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rcc8Rel {
    DC,
    EC,
    PO,
    EQ,
    TPP,
    NTPP,
    TPPi,
    NTPPi,
}

impl Rcc8Rel {
    pub const ALL: [Rcc8Rel; 8] = [
        Rcc8Rel::DC,
        Rcc8Rel::EC,
        Rcc8Rel::PO,
        Rcc8Rel::EQ,
        Rcc8Rel::TPP,
        Rcc8Rel::NTPP,
        Rcc8Rel::TPPi,
        Rcc8Rel::NTPPi,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rcc8Rel::DC => "DC",
            Rcc8Rel::EC => "EC",
            Rcc8Rel::PO => "PO",
            Rcc8Rel::EQ => "EQ",
            Rcc8Rel::TPP => "TPP",
            Rcc8Rel::NTPP => "NTPP",
            Rcc8Rel::TPPi => "TPPi",
            Rcc8Rel::NTPPi => "NTPPi",
        }
    }

    pub fn from_name(s: &str) -> Option<Rcc8Rel> {
        Rcc8Rel::ALL.into_iter().find(|r| r.name() == s)
    }

    pub fn converse(self) -> Rcc8Rel {
        match self {
            Rcc8Rel::TPP => Rcc8Rel::TPPi,
            Rcc8Rel::NTPP => Rcc8Rel::NTPPi,
            Rcc8Rel::TPPi => Rcc8Rel::TPP,
            Rcc8Rel::NTPPi => Rcc8Rel::NTPP,
            r => r,
        }
    }
}

impl fmt::Display for Rcc8Rel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Eq(Term, Term),
    /// k-ary contact, k >= 2.
    Contact(Vec<Term>),
    Rcc8(Rcc8Rel, Term, Term),
    Conn(Term),
    /// At most k components, k >= 1.
    ConnLe(BigUint, Term),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Not(Box<Formula>),
}

/// Which operator family a term (or formula) draws on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TermFamily {
    /// Only variables and constants.
    Neutral,
    Rc,
    Set,
}

impl TermFamily {
    pub fn join(self, other: TermFamily) -> Option<TermFamily> {
        match (self, other) {
            (TermFamily::Neutral, x) | (x, TermFamily::Neutral) => Some(x),
            (a, b) if a == b => Some(a),
            _ => None,
        }
    }
}

pub fn var(name: &str) -> Term {
    Term::Var(name.to_string())
}

impl Term {
    pub fn sum(a: Term, b: Term) -> Term {
        Term::Sum(Box::new(a), Box::new(b))
    }
    pub fn prod(a: Term, b: Term) -> Term {
        Term::Prod(Box::new(a), Box::new(b))
    }
    pub fn compl(a: Term) -> Term {
        Term::Compl(Box::new(a))
    }
    pub fn union(a: Term, b: Term) -> Term {
        Term::Union(Box::new(a), Box::new(b))
    }
    pub fn inter(a: Term, b: Term) -> Term {
        Term::Inter(Box::new(a), Box::new(b))
    }
    pub fn set_compl(a: Term) -> Term {
        Term::SetCompl(Box::new(a))
    }
    pub fn interior(a: Term) -> Term {
        Term::Interior(Box::new(a))
    }
    pub fn closure(a: Term) -> Term {
        Term::Closure(Box::new(a))
    }

    /// Sum of a non-empty list, left-associated; `Zero` for an empty list.
    pub fn sum_all(terms: impl IntoIterator<Item = Term>) -> Term {
        terms.into_iter().reduce(Term::sum).unwrap_or(Term::Zero)
    }

    /// Product of a list, left-associated; `One` for an empty list.
    pub fn prod_all(terms: impl IntoIterator<Item = Term>) -> Term {
        terms.into_iter().reduce(Term::prod).unwrap_or(Term::One)
    }

    pub fn union_all(terms: impl IntoIterator<Item = Term>) -> Term {
        terms.into_iter().reduce(Term::union).unwrap_or(Term::Zero)
    }

    pub fn inter_all(terms: impl IntoIterator<Item = Term>) -> Term {
        terms.into_iter().reduce(Term::inter).unwrap_or(Term::One)
    }

    pub fn children(&self) -> Vec<&Term> {
        match self {
            Term::Var(_) | Term::Zero | Term::One => vec![],
            Term::Sum(a, b) | Term::Prod(a, b) | Term::Union(a, b) | Term::Inter(a, b) => {
                vec![a, b]
            }
            Term::Compl(a) | Term::SetCompl(a) | Term::Interior(a) | Term::Closure(a) => vec![a],
        }
    }

    /// Family of this term, or `None` when it mixes the two algebras.
    pub fn family(&self) -> Option<TermFamily> {
        let own = match self {
            Term::Var(_) | Term::Zero | Term::One => TermFamily::Neutral,
            Term::Sum(..) | Term::Prod(..) | Term::Compl(..) => TermFamily::Rc,
            _ => TermFamily::Set,
        };
        self.children()
            .into_iter()
            .try_fold(own, |acc, c| acc.join(c.family()?))
    }

    pub fn size(&self) -> usize {
        1 + self.children().into_iter().map(Term::size).sum::<usize>()
    }

    pub fn collect_vars(&self, out: &mut std::collections::BTreeSet<String>) {
        if let Term::Var(v) = self {
            out.insert(v.clone());
        }
        for c in self.children() {
            c.collect_vars(out);
        }
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    /// Rebuild the term bottom-up, applying `f` to every node after its children.
    pub fn map_bottom_up(&self, f: &mut impl FnMut(Term) -> Term) -> Term {
        let rebuilt = match self {
            Term::Var(_) | Term::Zero | Term::One => self.clone(),
            Term::Sum(a, b) => Term::sum(a.map_bottom_up(f), b.map_bottom_up(f)),
            Term::Prod(a, b) => Term::prod(a.map_bottom_up(f), b.map_bottom_up(f)),
            Term::Union(a, b) => Term::union(a.map_bottom_up(f), b.map_bottom_up(f)),
            Term::Inter(a, b) => Term::inter(a.map_bottom_up(f), b.map_bottom_up(f)),
            Term::Compl(a) => Term::compl(a.map_bottom_up(f)),
            Term::SetCompl(a) => Term::set_compl(a.map_bottom_up(f)),
            Term::Interior(a) => Term::interior(a.map_bottom_up(f)),
            Term::Closure(a) => Term::closure(a.map_bottom_up(f)),
        };
        f(rebuilt)
    }

    /// Substitute variables by terms.
    pub fn substitute(&self, sub: &impl Fn(&str) -> Option<Term>) -> Term {
        self.map_bottom_up(&mut |t| match &t {
            Term::Var(v) => sub(v).unwrap_or(t),
            _ => t,
        })
    }
}

impl Formula {
    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }
    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }
    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }
    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Formula) -> Formula {
        Formula::Not(Box::new(a))
    }
    pub fn eq(a: Term, b: Term) -> Formula {
        Formula::Eq(a, b)
    }
    pub fn neq(a: Term, b: Term) -> Formula {
        Formula::not(Formula::Eq(a, b))
    }
    pub fn is_zero(a: Term) -> Formula {
        Formula::Eq(a, Term::Zero)
    }
    pub fn nonzero(a: Term) -> Formula {
        Formula::neq(a, Term::Zero)
    }
    /// `a <= b` in the regular-closed algebra.
    pub fn le(a: Term, b: Term) -> Formula {
        Formula::Eq(Term::prod(a, Term::compl(b)), Term::Zero)
    }
    /// `a <= b` in the set algebra.
    pub fn set_le(a: Term, b: Term) -> Formula {
        Formula::Eq(Term::inter(a, Term::set_compl(b)), Term::Zero)
    }
    pub fn contact(a: Term, b: Term) -> Formula {
        Formula::Contact(vec![a, b])
    }
    pub fn conn(a: Term) -> Formula {
        Formula::Conn(a)
    }
    pub fn conn_le(k: u64, a: Term) -> Formula {
        Formula::ConnLe(BigUint::from(k), a)
    }
    pub fn rcc8(rel: Rcc8Rel, a: Term, b: Term) -> Formula {
        Formula::Rcc8(rel, a, b)
    }

    /// Conjunction of a list, left-associated; `0 = 0` for an empty list.
    pub fn and_all(parts: impl IntoIterator<Item = Formula>) -> Formula {
        parts.into_iter().reduce(Formula::and).unwrap_or(Formula::Eq(Term::Zero, Term::Zero))
    }

    /// Disjunction of a list, left-associated; `!(0 = 0)` for an empty list.
    pub fn or_all(parts: impl IntoIterator<Item = Formula>) -> Formula {
        parts.into_iter().reduce(Formula::or).unwrap_or_else(|| Formula::not(Formula::Eq(Term::Zero, Term::Zero)))
    }

    pub fn is_atom(&self) -> bool {
        !matches!(
            self,
            Formula::And(..) | Formula::Or(..) | Formula::Implies(..) | Formula::Not(..)
        )
    }

    /// Terms directly under an atom; empty for connectives.
    pub fn atom_terms(&self) -> Vec<&Term> {
        match self {
            Formula::Eq(a, b) | Formula::Rcc8(_, a, b) => vec![a, b],
            Formula::Contact(ts) => ts.iter().collect(),
            Formula::Conn(t) | Formula::ConnLe(_, t) => vec![t],
            _ => vec![],
        }
    }

    pub fn sub_formulas(&self) -> Vec<&Formula> {
        match self {
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => vec![a, b],
            Formula::Not(a) => vec![a],
            _ => vec![],
        }
    }

    /// All maximal terms in left-to-right order.
    pub fn terms(&self) -> Vec<&Term> {
        let mut out = Vec::new();
        self.visit_atoms(&mut |a| out.extend(a.atom_terms()));
        out
    }

    pub fn visit_atoms<'a>(&'a self, f: &mut impl FnMut(&'a Formula)) {
        if self.is_atom() {
            f(self)
        } else {
            for s in self.sub_formulas() {
                s.visit_atoms(f);
            }
        }
    }

    pub fn vars(&self) -> std::collections::BTreeSet<String> {
        let mut out = std::collections::BTreeSet::new();
        for t in self.terms() {
            t.collect_vars(&mut out);
        }
        out
    }

    /// Number of AST nodes, counting term nodes.
    pub fn size(&self) -> usize {
        1 + self.sub_formulas().into_iter().map(Formula::size).sum::<usize>()
            + self.atom_terms().into_iter().map(Term::size).sum::<usize>()
    }

    /// Family shared by every term, or `None` on a mix.
    pub fn family(&self) -> Option<TermFamily> {
        self.terms()
            .into_iter()
            .try_fold(TermFamily::Neutral, |acc, t| acc.join(t.family()?))
    }

    /// Rebuild by mapping every maximal term.
    pub fn map_terms(&self, f: &mut impl FnMut(&Term) -> Term) -> Formula {
        match self {
            Formula::Eq(a, b) => Formula::Eq(f(a), f(b)),
            Formula::Contact(ts) => Formula::Contact(ts.iter().map(&mut *f).collect()),
            Formula::Rcc8(r, a, b) => Formula::Rcc8(*r, f(a), f(b)),
            Formula::Conn(t) => Formula::Conn(f(t)),
            Formula::ConnLe(k, t) => Formula::ConnLe(k.clone(), f(t)),
            Formula::And(a, b) => Formula::and(a.map_terms(f), b.map_terms(f)),
            Formula::Or(a, b) => Formula::or(a.map_terms(f), b.map_terms(f)),
            Formula::Implies(a, b) => Formula::implies(a.map_terms(f), b.map_terms(f)),
            Formula::Not(a) => Formula::not(a.map_terms(f)),
        }
    }

    /// Rebuild by mapping every atom.
    pub fn map_atoms(&self, f: &mut impl FnMut(&Formula) -> Formula) -> Formula {
        match self {
            Formula::And(a, b) => Formula::and(a.map_atoms(f), b.map_atoms(f)),
            Formula::Or(a, b) => Formula::or(a.map_atoms(f), b.map_atoms(f)),
            Formula::Implies(a, b) => Formula::implies(a.map_atoms(f), b.map_atoms(f)),
            Formula::Not(a) => Formula::not(a.map_atoms(f)),
            atom => f(atom),
        }
    }

    /// Atom occurrences in pre-order (outermost-leftmost) with their polarity.
    pub fn atom_occurrences(&self) -> Vec<(&Formula, bool)> {
        fn go<'a>(f: &'a Formula, pos: bool, out: &mut Vec<(&'a Formula, bool)>) {
            match f {
                Formula::And(a, b) | Formula::Or(a, b) => {
                    go(a, pos, out);
                    go(b, pos, out);
                }
                Formula::Implies(a, b) => {
                    go(a, !pos, out);
                    go(b, pos, out);
                }
                Formula::Not(a) => go(a, !pos, out),
                atom => out.push((atom, pos)),
            }
        }
        let mut out = Vec::new();
        go(self, true, &mut out);
        out
    }
}

use super::ast::{Formula, Term, TermFamily};
use num_bigint::BigUint;
use std::collections::BTreeSet;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LanguageTag {
    B,
    Bc,
    Bcc,
    RCC8,
    RCC8c,
    RCC8cc,
    C,
    Cc,
    Ccc,
    Cm,
    Cmc,
    Cmcc,
    S4u,
    S4uc,
    S4ucc,
}

/// The language without connectedness predicates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BaseLanguage {
    B,
    Rcc8,
    C,
    Cm,
    S4u,
}

/// Which connectedness predicates occur.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ConnLevel {
    None,
    Conn,
    Count,
}

impl LanguageTag {
    pub fn from_parts(base: BaseLanguage, level: ConnLevel) -> LanguageTag {
        use LanguageTag::*;
        match (base, level) {
            (BaseLanguage::B, ConnLevel::None) => B,
            (BaseLanguage::B, ConnLevel::Conn) => Bc,
            (BaseLanguage::B, ConnLevel::Count) => Bcc,
            (BaseLanguage::Rcc8, ConnLevel::None) => RCC8,
            (BaseLanguage::Rcc8, ConnLevel::Conn) => RCC8c,
            (BaseLanguage::Rcc8, ConnLevel::Count) => RCC8cc,
            (BaseLanguage::C, ConnLevel::None) => C,
            (BaseLanguage::C, ConnLevel::Conn) => Cc,
            (BaseLanguage::C, ConnLevel::Count) => Ccc,
            (BaseLanguage::Cm, ConnLevel::None) => Cm,
            (BaseLanguage::Cm, ConnLevel::Conn) => Cmc,
            (BaseLanguage::Cm, ConnLevel::Count) => Cmcc,
            (BaseLanguage::S4u, ConnLevel::None) => S4u,
            (BaseLanguage::S4u, ConnLevel::Conn) => S4uc,
            (BaseLanguage::S4u, ConnLevel::Count) => S4ucc,
        }
    }

    pub fn base(self) -> BaseLanguage {
        use LanguageTag::*;
        match self {
            B | Bc | Bcc => BaseLanguage::B,
            RCC8 | RCC8c | RCC8cc => BaseLanguage::Rcc8,
            C | Cc | Ccc => BaseLanguage::C,
            Cm | Cmc | Cmcc => BaseLanguage::Cm,
            S4u | S4uc | S4ucc => BaseLanguage::S4u,
        }
    }

    pub fn conn_level(self) -> ConnLevel {
        use LanguageTag::*;
        match self {
            B | RCC8 | C | Cm | S4u => ConnLevel::None,
            Bc | RCC8c | Cc | Cmc | S4uc => ConnLevel::Conn,
            _ => ConnLevel::Count,
        }
    }

    /// Interpreted over regular closed sets.
    pub fn is_rc_family(self) -> bool {
        self.base() != BaseLanguage::S4u
    }

    pub fn name(self) -> &'static str {
        use LanguageTag::*;
        match self {
            B => "B",
            Bc => "Bc",
            Bcc => "Bcc",
            RCC8 => "RCC8",
            RCC8c => "RCC8c",
            RCC8cc => "RCC8cc",
            C => "C",
            Cc => "Cc",
            Ccc => "Ccc",
            Cm => "Cm",
            Cmc => "Cmc",
            Cmcc => "Cmcc",
            S4u => "S4u",
            S4uc => "S4uc",
            S4ucc => "S4ucc",
        }
    }
}

impl fmt::Display for LanguageTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Least language containing every constructor and predicate of `f`.
/// Returns `None` when the formula mixes the two term algebras.
pub fn classify(f: &Formula) -> Option<LanguageTag> {
    let family = f.family()?;
    let mut level = ConnLevel::None;
    let (mut has_rcc8, mut has_eq, mut has_c2, mut has_cm) = (false, false, false, false);
    let mut rcc8_vars_only = true;
    let mut conn_vars_only = true;
    let one = BigUint::from(1u32);
    f.visit_atoms(&mut |a| match a {
        Formula::Eq(..) => has_eq = true,
        Formula::Contact(ts) => {
            if ts.len() > 2 {
                has_cm = true
            } else {
                has_c2 = true
            }
        }
        Formula::Rcc8(_, x, y) => {
            has_rcc8 = true;
            rcc8_vars_only &= x.is_var() && y.is_var();
        }
        Formula::Conn(t) => {
            level = level.max(ConnLevel::Conn);
            conn_vars_only &= t.is_var();
        }
        Formula::ConnLe(k, t) => {
            level = level.max(if *k == one { ConnLevel::Conn } else { ConnLevel::Count });
            conn_vars_only &= t.is_var();
        }
        _ => {}
    });
    let base = if family == TermFamily::Set {
        BaseLanguage::S4u
    } else if has_cm {
        BaseLanguage::Cm
    } else if has_rcc8 && rcc8_vars_only && conn_vars_only && !has_eq && !has_c2 {
        BaseLanguage::Rcc8
    } else if has_rcc8 || has_c2 {
        BaseLanguage::C
    } else {
        BaseLanguage::B
    };
    Some(LanguageTag::from_parts(base, level))
}

/// All subterms of all terms of `f`.
pub fn subterm_closure(f: &Formula) -> BTreeSet<Term> {
    fn add(t: &Term, out: &mut BTreeSet<Term>) {
        if out.insert(t.clone()) {
            for c in t.children() {
                add(c, out);
            }
        }
    }
    let mut out = BTreeSet::new();
    for t in f.terms() {
        add(t, &mut out);
    }
    out
}

use super::{unsupported, TransformError};
use crate::formula::{classify, Formula, Rcc8Rel, Term, TermFamily};

fn rc_rcc8(rel: Rcc8Rel, a: Term, b: Term) -> Formula {
    match rel {
        Rcc8Rel::DC => Formula::not(Formula::contact(a, b)),
        Rcc8Rel::EC => Formula::and(Formula::is_zero(Term::prod(a.clone(), b.clone())), Formula::contact(a, b)),
        Rcc8Rel::PO => Formula::and_all([
            Formula::nonzero(Term::prod(a.clone(), b.clone())),
            Formula::not(Formula::le(a.clone(), b.clone())),
            Formula::not(Formula::le(b, a)),
        ]),
        Rcc8Rel::EQ => Formula::eq(a, b),
        Rcc8Rel::TPP => Formula::and_all([
            Formula::le(a.clone(), b.clone()),
            Formula::contact(a.clone(), Term::compl(b.clone())),
            Formula::not(Formula::le(b, a)),
        ]),
        Rcc8Rel::NTPP => Formula::and(
            Formula::not(Formula::contact(a.clone(), Term::compl(b.clone()))),
            Formula::not(Formula::le(b, a)),
        ),
        Rcc8Rel::TPPi => rc_rcc8(Rcc8Rel::TPP, b, a),
        Rcc8Rel::NTPPi => rc_rcc8(Rcc8Rel::NTPP, b, a),
    }
}

/// The relations read literally on arbitrary sets.
fn set_rcc8(rel: Rcc8Rel, a: Term, b: Term) -> Formula {
    let int = Term::interior;
    match rel {
        Rcc8Rel::DC => Formula::is_zero(Term::inter(a, b)),
        Rcc8Rel::EC => Formula::and(
            Formula::nonzero(Term::inter(a.clone(), b.clone())),
            Formula::is_zero(Term::inter(int(a), int(b))),
        ),
        Rcc8Rel::PO => Formula::and_all([
            Formula::nonzero(Term::inter(int(a.clone()), int(b.clone()))),
            Formula::nonzero(Term::inter(int(a.clone()), Term::set_compl(b.clone()))),
            Formula::nonzero(Term::inter(int(b), Term::set_compl(a))),
        ]),
        Rcc8Rel::EQ => Formula::eq(a, b),
        Rcc8Rel::TPP => Formula::and_all([
            Formula::set_le(a.clone(), b.clone()),
            Formula::not(Formula::set_le(a.clone(), int(b.clone()))),
            Formula::not(Formula::set_le(b, a)),
        ]),
        Rcc8Rel::NTPP => Formula::and(Formula::set_le(a.clone(), int(b.clone())), Formula::not(Formula::set_le(b, a))),
        Rcc8Rel::TPPi => set_rcc8(Rcc8Rel::TPP, b, a),
        Rcc8Rel::NTPPi => set_rcc8(Rcc8Rel::NTPP, b, a),
    }
}

/// Replace every RCC8 atom by its contact-language equivalent.
pub fn rcc8_to_c(f: &Formula) -> Formula {
    let set = f.family() == Some(TermFamily::Set);
    f.map_atoms(&mut |a| match a {
        Formula::Rcc8(rel, x, y) if set => set_rcc8(*rel, x.clone(), y.clone()),
        Formula::Rcc8(rel, x, y) => rc_rcc8(*rel, x.clone(), y.clone()),
        other => other.clone(),
    })
}

fn dagger_term(t: &Term) -> Term {
    match t {
        Term::Var(_) => Term::closure(Term::interior(t.clone())),
        Term::Zero | Term::One => t.clone(),
        Term::Sum(a, b) => Term::union(dagger_term(a), dagger_term(b)),
        Term::Prod(a, b) => Term::closure(Term::interior(Term::inter(dagger_term(a), dagger_term(b)))),
        Term::Compl(a) => Term::closure(Term::set_compl(dagger_term(a))),
        _ => unreachable!("set operator in a regular-closed term"),
    }
}

/// Translate a regular-closed formula into the set language, reading each
/// variable as the regularisation of an arbitrary set.
pub fn dagger(f: &Formula) -> Result<Formula, TransformError> {
    match f.family() {
        None => return Err(TransformError::MixedFamily),
        Some(TermFamily::Set) => return Err(unsupported(classify(f))),
        _ => {}
    }
    let f = rcc8_to_c(f);
    Ok(f.map_atoms(&mut |a| match a {
        Formula::Contact(ts) => Formula::nonzero(Term::inter_all(ts.iter().map(dagger_term))),
        other => other.map_terms(&mut |t| dagger_term(t)),
    }))
}

/// Rewrite every equation `a = b` as `a*-b + b*-a = 0` (set analogue for set formulas).
pub fn eq_normalize(f: &Formula) -> Formula {
    let set = f.family() == Some(TermFamily::Set);
    f.map_atoms(&mut |a| match a {
        Formula::Eq(x, y) if set => Formula::is_zero(Term::union(
            Term::inter(x.clone(), Term::set_compl(y.clone())),
            Term::inter(y.clone(), Term::set_compl(x.clone())),
        )),
        Formula::Eq(x, y) => Formula::is_zero(Term::sum(
            Term::prod(x.clone(), Term::compl(y.clone())),
            Term::prod(y.clone(), Term::compl(x.clone())),
        )),
        other => other.clone(),
    })
}

/// Replace every maximal term `t` by `s * t`; `0` is left alone since `s * 0 = 0`.
pub fn relativize(f: &Formula, s: &str) -> Formula {
    let set = f.family() == Some(TermFamily::Set);
    let s = Term::Var(s.to_string());
    f.map_terms(&mut |t| match t {
        Term::Zero => Term::Zero,
        _ if set => Term::inter(s.clone(), t.clone()),
        _ => Term::prod(s.clone(), t.clone()),
    })
}

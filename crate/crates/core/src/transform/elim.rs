use super::rewrite::{rcc8_to_c, relativize};
use super::{unsupported, Fresh, TransformError};
use crate::formula::{classify, Formula, Term, TermFamily};
use crate::semantics::empty_space_eval;
use num_bigint::BigUint;
use num_traits::ToPrimitive;

/// Largest count bound unfolded into fresh variables.
const MAX_UNFOLD: usize = 10_000;

/// `0 = 1` when `f` holds over the empty space, otherwise a falsum.
pub fn epsilon(f: &Formula) -> Formula {
    if empty_space_eval(f) {
        Formula::eq(Term::Zero, Term::One)
    } else {
        Formula::not(Formula::eq(Term::Zero, Term::Zero))
    }
}

/// Rebuild `f`, offering each atom occurrence (pre-order index, atom,
/// polarity) to `sel`. A replacement `!x` directly under `!` collapses to `x`.
fn rewrite_occurrences(f: &Formula, sel: &mut impl FnMut(usize, &Formula, bool) -> Option<Formula>) -> Formula {
    fn go(
        f: &Formula,
        pos: bool,
        idx: &mut usize,
        sel: &mut impl FnMut(usize, &Formula, bool) -> Option<Formula>,
    ) -> Formula {
        match f {
            Formula::And(a, b) => {
                let x = go(a, pos, idx, sel);
                Formula::and(x, go(b, pos, idx, sel))
            }
            Formula::Or(a, b) => {
                let x = go(a, pos, idx, sel);
                Formula::or(x, go(b, pos, idx, sel))
            }
            Formula::Implies(a, b) => {
                let x = go(a, !pos, idx, sel);
                Formula::implies(x, go(b, pos, idx, sel))
            }
            Formula::Not(a) => match go(a, !pos, idx, sel) {
                Formula::Not(x) if a.is_atom() => *x,
                r => Formula::not(r),
            },
            atom => {
                let i = *idx;
                *idx += 1;
                sel(i, atom, pos).unwrap_or_else(|| atom.clone())
            }
        }
    }
    go(f, true, &mut 0, sel)
}

/// Resolve the occurrence to rewrite: the given index, or the first eligible one.
fn pick(
    f: &Formula,
    occurrence: Option<usize>,
    eligible: impl Fn(&Formula) -> bool,
    positive: bool,
) -> Result<(usize, Formula), TransformError> {
    let occs = f.atom_occurrences();
    match occurrence {
        Some(i) => {
            let (atom, pol) = *occs.get(i).ok_or(TransformError::NoSuchOccurrence(i))?;
            if !eligible(atom) {
                Err(TransformError::WrongAtom(i))
            } else if pol != positive {
                Err(if positive { TransformError::NotPositive(i) } else { TransformError::NotNegative(i) })
            } else {
                Ok((i, atom.clone()))
            }
        }
        None => occs
            .iter()
            .enumerate()
            .find(|(_, (a, p))| eligible(a) && *p == positive)
            .map(|(i, (a, _))| (i, (*a).clone()))
            .ok_or(TransformError::NoEligibleOccurrence),
    }
}

/// Which count elimination to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountMode {
    /// A positive `conn_le(k, t)`: `t` is the union of `k` connected sets.
    AtMost,
    /// A negative `conn_le(k, t)`, i.e. at least `k+1` components: `t` splits
    /// into `k+1` non-empty pieces whose closures meet outside `t` only.
    AtLeast,
}

fn count_bound(atom: &Formula) -> Option<&Term> {
    match atom {
        Formula::Conn(t) | Formula::ConnLe(_, t) => Some(t),
        _ => None,
    }
}

fn unfold_bound(k: &BigUint) -> Result<usize, TransformError> {
    k.to_usize().filter(|&k| k <= MAX_UNFOLD).ok_or_else(|| TransformError::CountTooLarge(k.to_string()))
}

/// Replace one counting atom of a set-language formula by its unfolding with fresh variables.
pub fn eliminate_count_pos(
    f: &Formula,
    occurrence: Option<usize>,
    mode: CountMode,
    fresh: &mut Fresh,
) -> Result<Formula, TransformError> {
    match f.family() {
        None => return Err(TransformError::MixedFamily),
        Some(TermFamily::Rc) => return Err(unsupported(classify(f))),
        _ => {}
    }
    let (index, atom) = pick(f, occurrence, |a| count_bound(a).is_some(), mode == CountMode::AtMost)?;
    let tau = count_bound(&atom).expect("eligible atom").clone();
    let k = match &atom {
        Formula::ConnLe(k, _) => unfold_bound(k)?,
        _ => 1,
    };
    let replacement = match mode {
        CountMode::AtMost => {
            let rs: Vec<Term> = (0..k).map(|_| Term::Var(fresh.var())).collect();
            let mut parts = vec![Formula::eq(tau, Term::union_all(rs.iter().cloned()))];
            parts.extend(rs.into_iter().map(Formula::conn));
            Formula::and_all(parts)
        }
        CountMode::AtLeast => {
            let rs: Vec<Term> = (0..=k).map(|_| Term::Var(fresh.var())).collect();
            let mut parts = vec![Formula::eq(tau.clone(), Term::union_all(rs.iter().cloned()))];
            parts.extend(rs.iter().cloned().map(Formula::nonzero));
            for i in 0..rs.len() {
                for j in i + 1..rs.len() {
                    parts.push(Formula::is_zero(Term::inter_all([
                        tau.clone(),
                        Term::closure(rs[i].clone()),
                        Term::closure(rs[j].clone()),
                    ])));
                }
            }
            Formula::not(Formula::and_all(parts))
        }
    };
    let mut replacement = Some(replacement);
    Ok(rewrite_occurrences(f, &mut |i, _, _| if i == index { replacement.take() } else { None }))
}

fn binary_contact(atom: &Formula) -> Option<(&Term, &Term)> {
    match atom {
        Formula::Contact(ts) if ts.len() == 2 => Some((&ts[0], &ts[1])),
        _ => None,
    }
}

fn check_contact_language(f: &Formula) -> Result<(), TransformError> {
    let tag = classify(f);
    let mut bad = f.family() != Some(TermFamily::Rc) && f.family() != Some(TermFamily::Neutral);
    f.visit_atoms(&mut |a| {
        bad |= matches!(a, Formula::Rcc8(..)) || matches!(a, Formula::Contact(ts) if ts.len() != 2)
    });
    if bad {
        Err(unsupported(tag))
    } else {
        Ok(())
    }
}

/// Remove every positive occurrence of one binary contact atom, introducing
/// `t, t1, t2` with a connected witness pair.
pub fn eliminate_contact_pos(
    f: &Formula,
    occurrence: Option<usize>,
    fresh: &mut Fresh,
) -> Result<Formula, TransformError> {
    check_contact_language(f)?;
    let (_, atom) = pick(f, occurrence, |a| binary_contact(a).is_some(), true)?;
    let (tau1, tau2) = binary_contact(&atom).expect("eligible atom");
    let (t, t1, t2) = (Term::Var(fresh.var()), Term::Var(fresh.var()), Term::Var(fresh.var()));
    let t_zero = Formula::is_zero(t.clone());
    let body = rewrite_occurrences(f, &mut |_, a, pos| (pos && *a == atom).then(|| t_zero.clone()));
    let mut guard = vec![Formula::conn(Term::sum(t1.clone(), t2.clone()))];
    for (ti, taui) in [(t1, tau1), (t2, tau2)] {
        guard.push(Formula::nonzero(ti.clone()));
        guard.push(Formula::le(ti.clone(), taui.clone()));
        guard.push(Formula::conn(ti));
    }
    let rest = Formula::and(body, Formula::implies(t_zero, Formula::and_all(guard)));
    Ok(Formula::or(epsilon(f), rest))
}

/// Remove every negative occurrence of each listed contact atom under one
/// shared relativising region `s`.
fn eliminate_negatives(f: &Formula, atoms: &[Formula], connected: bool, fresh: &mut Fresh) -> Formula {
    let s_name = fresh.var();
    let s = Term::Var(s_name.clone());
    let mut guards = Vec::new();
    let mut zeros = Vec::new();
    for atom in atoms {
        let (tau1, tau2) = binary_contact(atom).expect("contact atom");
        let (t, t1, t2) = (Term::Var(fresh.var()), Term::Var(fresh.var()), Term::Var(fresh.var()));
        let mut consequent = vec![Formula::not(Formula::conn(Term::sum(t1.clone(), t2.clone())))];
        for (ti, taui) in [(t1, tau1), (t2, tau2)] {
            consequent.push(Formula::conn(ti.clone()));
            consequent.push(Formula::le(Term::prod(taui.clone(), s.clone()), ti));
        }
        guards.push(Formula::implies(
            Formula::is_zero(Term::prod(t.clone(), s.clone())),
            Formula::and_all(consequent),
        ));
        zeros.push(Formula::is_zero(t));
    }
    let body = rewrite_occurrences(f, &mut |_, a, pos| {
        if pos {
            return None;
        }
        atoms.iter().position(|x| x == a).map(|j| Formula::not(zeros[j].clone()))
    });
    let mut parts = vec![Formula::nonzero(s.clone()), relativize(&body, &s_name)];
    parts.extend(guards);
    let out = Formula::or(epsilon(f), Formula::and_all(parts));
    if connected {
        Formula::and(out, Formula::conn(s))
    } else {
        out
    }
}

/// Remove every negative occurrence of one binary contact atom by
/// relativising to a fresh region `s`; `connected` adds `conn(s)`.
pub fn eliminate_contact_neg(
    f: &Formula,
    occurrence: Option<usize>,
    connected: bool,
    fresh: &mut Fresh,
) -> Result<Formula, TransformError> {
    check_contact_language(f)?;
    let (_, atom) = pick(f, occurrence, |a| binary_contact(a).is_some(), false)?;
    Ok(eliminate_negatives(f, &[atom], connected, fresh))
}

/// Equisatisfiable contact-free rewrite: all negative contact occurrences
/// are removed under one relativising region, then each positive one in turn.
pub fn eliminate_contacts(f: &Formula, connected: bool, fresh: &mut Fresh) -> Result<Formula, TransformError> {
    let f = rcc8_to_c(f);
    check_contact_language(&f)?;
    let mut negatives: Vec<Formula> = Vec::new();
    for (a, pos) in f.atom_occurrences() {
        if !pos && binary_contact(a).is_some() && !negatives.contains(a) {
            negatives.push(a.clone());
        }
    }
    let mut g = if negatives.is_empty() { f } else { eliminate_negatives(&f, &negatives, connected, fresh) };
    while g.atom_occurrences().iter().any(|(a, _)| binary_contact(a).is_some()) {
        g = eliminate_contact_pos(&g, None, fresh)?;
    }
    Ok(g)
}

use super::ast::{Formula, Term};
use std::fmt::{self, Write};

// Term precedence: 1 additive, 2 multiplicative, 3 unary/atomic.
fn term_prec(t: &Term) -> u8 {
    match t {
        Term::Sum(..) | Term::Union(..) => 1,
        Term::Prod(..) | Term::Inter(..) => 2,
        _ => 3,
    }
}

fn write_term(out: &mut String, t: &Term, min_prec: u8) {
    let paren = term_prec(t) < min_prec;
    if paren {
        out.push('(');
    }
    match t {
        Term::Var(v) => out.push_str(v),
        Term::Zero => out.push('0'),
        Term::One => out.push('1'),
        Term::Sum(a, b) | Term::Union(a, b) => {
            write_term(out, a, 1);
            out.push_str(if matches!(t, Term::Sum(..)) { " + " } else { " v " });
            write_term(out, b, 2);
        }
        Term::Prod(a, b) | Term::Inter(a, b) => {
            write_term(out, a, 2);
            out.push_str(if matches!(t, Term::Prod(..)) { " * " } else { " ^ " });
            write_term(out, b, 3);
        }
        Term::Compl(a) => {
            out.push('-');
            write_term(out, a, 3);
        }
        Term::SetCompl(a) => {
            out.push('~');
            write_term(out, a, 3);
        }
        Term::Interior(a) | Term::Closure(a) => {
            out.push_str(if matches!(t, Term::Interior(..)) { "int(" } else { "cl(" });
            write_term(out, a, 1);
            out.push(')');
        }
    }
    if paren {
        out.push(')');
    }
}

// Formula precedence: 1 implication, 2 disjunction, 3 conjunction, 4 literal.
fn formula_prec(f: &Formula) -> u8 {
    match f {
        Formula::Implies(..) => 1,
        Formula::Or(..) => 2,
        Formula::And(..) => 3,
        _ => 4,
    }
}

/// `a * -b = 0` reads back as `a <= b`.
fn le_sugar(f: &Formula) -> Option<(&Term, &Term)> {
    if let Formula::Eq(Term::Prod(a, nb), Term::Zero) = f {
        if let Term::Compl(b) = nb.as_ref() {
            return Some((a, b));
        }
    }
    None
}

fn write_formula(out: &mut String, f: &Formula, min_prec: u8) {
    let paren = formula_prec(f) < min_prec;
    if paren {
        out.push('(');
    }
    match f {
        Formula::Implies(a, b) => {
            write_formula(out, a, 2);
            out.push_str(" -> ");
            write_formula(out, b, 1);
        }
        Formula::Or(a, b) => {
            write_formula(out, a, 2);
            out.push_str(" | ");
            write_formula(out, b, 3);
        }
        Formula::And(a, b) => {
            write_formula(out, a, 3);
            out.push_str(" & ");
            write_formula(out, b, 4);
        }
        Formula::Not(inner) => match inner.as_ref() {
            Formula::Eq(a, b) if le_sugar(inner).is_none() => {
                write_term(out, a, 1);
                out.push_str(" != ");
                write_term(out, b, 1);
            }
            _ => {
                out.push('!');
                let infix = matches!(inner.as_ref(), Formula::Eq(..))
                    || matches!(inner.as_ref(), Formula::Not(x) if matches!(x.as_ref(), Formula::Eq(..)));
                if infix {
                    out.push('(');
                    write_formula(out, inner, 1);
                    out.push(')');
                } else {
                    write_formula(out, inner, 4);
                }
            }
        },
        Formula::Eq(a, b) => {
            if let Some((x, y)) = le_sugar(f) {
                write_term(out, x, 1);
                out.push_str(" <= ");
                write_term(out, y, 1);
            } else {
                write_term(out, a, 1);
                out.push_str(" = ");
                write_term(out, b, 1);
            }
        }
        Formula::Contact(ts) => {
            out.push_str("C(");
            for (i, t) in ts.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_term(out, t, 1);
            }
            out.push(')');
        }
        Formula::Rcc8(rel, a, b) => {
            out.push_str(rel.name());
            out.push('(');
            write_term(out, a, 1);
            out.push_str(", ");
            write_term(out, b, 1);
            out.push(')');
        }
        Formula::Conn(t) => {
            out.push_str("conn(");
            write_term(out, t, 1);
            out.push(')');
        }
        Formula::ConnLe(k, t) => {
            let _ = write!(out, "conn_le({k}, ");
            write_term(out, t, 1);
            out.push(')');
        }
    }
    if paren {
        out.push(')');
    }
}

/// Canonical text of a term.
pub fn term_to_string(t: &Term) -> String {
    let mut s = String::new();
    write_term(&mut s, t, 1);
    s
}

/// Canonical text of a formula, without the trailing newline.
pub fn formula_to_string(f: &Formula) -> String {
    let mut s = String::new();
    write_formula(&mut s, f, 1);
    s
}

/// Canonical file form: minimal parentheses, newline-terminated.
pub fn print(f: &Formula) -> String {
    let mut s = formula_to_string(f);
    s.push('\n');
    s
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&term_to_string(self))
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&formula_to_string(self))
    }
}

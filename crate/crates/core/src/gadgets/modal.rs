use super::GadgetError;
use std::fmt;

/// Formulas of the bimodal language with boxes `[1]` and `[2]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Modal {
    Var(String),
    Not(Box<Modal>),
    And(Box<Modal>, Box<Modal>),
    Box(u8, Box<Modal>),
}

impl Modal {
    pub fn var(name: &str) -> Modal {
        Modal::Var(name.to_string())
    }
    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Modal) -> Modal {
        Modal::Not(Box::new(a))
    }
    pub fn and(a: Modal, b: Modal) -> Modal {
        Modal::And(Box::new(a), Box::new(b))
    }
    pub fn or(a: Modal, b: Modal) -> Modal {
        Modal::not(Modal::and(Modal::not(a), Modal::not(b)))
    }
    pub fn implies(a: Modal, b: Modal) -> Modal {
        Modal::not(Modal::and(a, Modal::not(b)))
    }
    pub fn boxed(i: u8, a: Modal) -> Modal {
        Modal::Box(i, Box::new(a))
    }
    pub fn diamond(i: u8, a: Modal) -> Modal {
        Modal::not(Modal::boxed(i, Modal::not(a)))
    }
    /// Conjunction, left-associated; panics on an empty list.
    pub fn and_all(parts: impl IntoIterator<Item = Modal>) -> Modal {
        parts.into_iter().reduce(Modal::and).expect("non-empty conjunction")
    }

    /// `~φ`: strips one negation, otherwise adds one.
    pub fn negated(&self) -> Modal {
        match self {
            Modal::Not(a) => (**a).clone(),
            other => Modal::not(other.clone()),
        }
    }

    fn collect(&self, out: &mut Vec<Modal>) {
        match self {
            Modal::Var(_) => {}
            Modal::Not(a) | Modal::Box(_, a) => a.collect(out),
            Modal::And(a, b) => {
                a.collect(out);
                b.collect(out);
            }
        }
        if !out.contains(self) {
            out.push(self.clone());
        }
    }

    pub fn vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect(&mut out);
        out.into_iter()
            .filter_map(|m| match m {
                Modal::Var(v) => Some(v),
                _ => None,
            })
            .collect()
    }
}

/// Subformulas of `chi` and `psi` closed under single negation, in a fixed order.
pub(crate) fn closure(chi: &Modal, psi: &Modal) -> Vec<Modal> {
    let mut out = Vec::new();
    chi.collect(&mut out);
    psi.collect(&mut out);
    for i in 0..out.len() {
        let n = out[i].negated();
        if !out.contains(&n) {
            out.push(n);
        }
    }
    out
}

impl fmt::Display for Modal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Modal::Var(v) => f.write_str(v),
            Modal::Not(a) => write!(f, "!{a}"),
            Modal::And(a, b) => write!(f, "({a} & {b})"),
            Modal::Box(i, a) => write!(f, "[{i}]{a}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Not,
    And,
    Or,
    Implies,
    Box(u8),
    Diamond(u8),
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<Tok>, GadgetError> {
    let err = |m: String| GadgetError::MalformedModal(m);
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    let mut out = Vec::new();
    while i < chars.len() {
        let c = chars[i];
        match c {
            _ if c.is_whitespace() => i += 1,
            '!' => {
                out.push(Tok::Not);
                i += 1
            }
            '&' => {
                out.push(Tok::And);
                i += 1
            }
            '|' => {
                out.push(Tok::Or);
                i += 1
            }
            '(' => {
                out.push(Tok::LParen);
                i += 1
            }
            ')' => {
                out.push(Tok::RParen);
                i += 1
            }
            '-' if chars.get(i + 1) == Some(&'>') => {
                out.push(Tok::Implies);
                i += 2
            }
            '[' | '<' => {
                let close = if c == '[' { ']' } else { '>' };
                let idx = match (chars.get(i + 1), chars.get(i + 2)) {
                    (Some('1'), Some(&x)) if x == close => 1,
                    (Some('2'), Some(&x)) if x == close => 2,
                    _ => return Err(err(format!("expected {c}1{close} or {c}2{close} at offset {i}"))),
                };
                out.push(if c == '[' { Tok::Box(idx) } else { Tok::Diamond(idx) });
                i += 3;
            }
            _ if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(Tok::Ident(chars[start..i].iter().collect()));
            }
            _ => return Err(err(format!("unexpected '{c}' at offset {i}"))),
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn implication(&mut self) -> Result<Modal, GadgetError> {
        let lhs = self.disjunction()?;
        if self.peek() == Some(&Tok::Implies) {
            self.pos += 1;
            let rhs = self.implication()?;
            return Ok(Modal::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Modal, GadgetError> {
        let mut acc = self.conjunction()?;
        while self.peek() == Some(&Tok::Or) {
            self.pos += 1;
            acc = Modal::or(acc, self.conjunction()?);
        }
        Ok(acc)
    }

    fn conjunction(&mut self) -> Result<Modal, GadgetError> {
        let mut acc = self.unary()?;
        while self.peek() == Some(&Tok::And) {
            self.pos += 1;
            acc = Modal::and(acc, self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Modal, GadgetError> {
        let tok = self.peek().cloned().ok_or_else(|| GadgetError::MalformedModal("unexpected end".into()))?;
        self.pos += 1;
        match tok {
            Tok::Not => Ok(Modal::not(self.unary()?)),
            Tok::Box(i) => Ok(Modal::boxed(i, self.unary()?)),
            Tok::Diamond(i) => Ok(Modal::diamond(i, self.unary()?)),
            Tok::Ident(v) => Ok(Modal::Var(v)),
            Tok::LParen => {
                let inner = self.implication()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(GadgetError::MalformedModal("missing ')'".into()));
                }
                self.pos += 1;
                Ok(inner)
            }
            other => Err(GadgetError::MalformedModal(format!("unexpected {other:?}"))),
        }
    }
}

/// Parse `!`, `&`, `|`, `->`, `[i]` and `<i>` (i = 1, 2) over identifiers.
pub fn parse_modal(text: &str) -> Result<Modal, GadgetError> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let m = p.implication()?;
    if p.pos != p.toks.len() {
        return Err(GadgetError::MalformedModal(format!("trailing input at token {}", p.pos)));
    }
    Ok(m)
}

use super::ast::{Formula, Rcc8Rel, Term, TermFamily};
use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("term at {line}:{col} mixes regular-closed and set operators")]
    MixedFamily { line: usize, col: usize },
    #[error("formula mixes regular-closed and set operators")]
    MixedFormula,
    #[error("conn_le at {line}:{col} needs k >= 1")]
    ConnLeZero { line: usize, col: usize },
    #[error("conn_ge at {line}:{col} needs k >= 2")]
    ConnGeTooSmall { line: usize, col: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Nat(String),
    LParen,
    RParen,
    Comma,
    Arrow,
    Bar,
    Amp,
    Bang,
    Eq,
    Neq,
    Le,
    Plus,
    Star,
    Minus,
    Caret,
    Tilde,
    End,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

const KEYWORDS: &[&str] = &[
    "C", "conn", "conn_le", "conn_ge", "int", "cl", "v", "DC", "EC", "PO", "EQ", "TPP", "NTPP",
    "TPPi", "NTPPi",
];

pub fn is_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s)
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let push = |out: &mut Vec<Spanned>, tok| out.push(Spanned { tok, line: l0, col: c0 });
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            col += i - start;
            push(&mut out, Tok::Ident(word));
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let word: String = chars[start..i].iter().collect();
            col += i - start;
            push(&mut out, Tok::Nat(word));
            continue;
        }
        let next = chars.get(i + 1).copied();
        let (tok, width) = match (c, next) {
            ('-', Some('>')) => (Tok::Arrow, 2),
            ('!', Some('=')) => (Tok::Neq, 2),
            ('<', Some('=')) => (Tok::Le, 2),
            ('(', _) => (Tok::LParen, 1),
            (')', _) => (Tok::RParen, 1),
            (',', _) => (Tok::Comma, 1),
            ('|', _) => (Tok::Bar, 1),
            ('&', _) => (Tok::Amp, 1),
            ('!', _) => (Tok::Bang, 1),
            ('=', _) => (Tok::Eq, 1),
            ('+', _) => (Tok::Plus, 1),
            ('*', _) => (Tok::Star, 1),
            ('-', _) => (Tok::Minus, 1),
            ('^', _) => (Tok::Caret, 1),
            ('~', _) => (Tok::Tilde, 1),
            _ => {
                return Err(ParseError::Syntax {
                    line,
                    col,
                    msg: format!("unexpected character '{c}'"),
                })
            }
        };
        push(&mut out, tok);
        i += width;
        col += width;
    }
    out.push(Spanned { tok: Tok::End, line, col });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    atom_index: usize,
    /// Indices (in textual order) of `<=` atoms whose family is still open.
    deferred_le: Vec<usize>,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn here(&self) -> (usize, usize) {
        let s = &self.toks[self.pos];
        (s.line, s.col)
    }

    fn err<T>(&self, msg: impl Into<String>) -> PResult<T> {
        let (line, col) = self.here();
        Err(ParseError::Syntax { line, col, msg: msg.into() })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> PResult<()> {
        if *self.peek() == tok {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn formula(&mut self) -> PResult<Formula> {
        let lhs = self.disj()?;
        if *self.peek() == Tok::Arrow {
            self.pos += 1;
            let rhs = self.formula()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disj(&mut self) -> PResult<Formula> {
        let mut acc = self.conj()?;
        while *self.peek() == Tok::Bar {
            self.pos += 1;
            let rhs = self.conj()?;
            acc = Formula::or(acc, rhs);
        }
        Ok(acc)
    }

    fn conj(&mut self) -> PResult<Formula> {
        let mut acc = self.lit()?;
        while *self.peek() == Tok::Amp {
            self.pos += 1;
            let rhs = self.lit()?;
            acc = Formula::and(acc, rhs);
        }
        Ok(acc)
    }

    fn lit(&mut self) -> PResult<Formula> {
        match self.peek() {
            Tok::Bang => {
                self.pos += 1;
                Ok(Formula::not(self.lit()?))
            }
            Tok::LParen => {
                // Either a parenthesised formula or an atom whose first term is parenthesised.
                let save = (self.pos, self.atom_index, self.deferred_le.len());
                match self.atom() {
                    Ok(a) => Ok(a),
                    Err(atom_err) => {
                        let atom_pos = self.pos;
                        self.pos = save.0;
                        self.atom_index = save.1;
                        self.deferred_le.truncate(save.2);
                        self.pos += 1;
                        let inner = self.formula().and_then(|f| {
                            self.expect(Tok::RParen, "')'")?;
                            Ok(f)
                        });
                        match inner {
                            Ok(f) => Ok(f),
                            Err(e) => {
                                if self.pos >= atom_pos {
                                    Err(e)
                                } else {
                                    Err(atom_err)
                                }
                            }
                        }
                    }
                }
            }
            _ => self.atom(),
        }
    }

    fn nat(&mut self) -> PResult<(BigUint, usize, usize)> {
        let (line, col) = self.here();
        match self.peek().clone() {
            Tok::Nat(s) => {
                self.pos += 1;
                let n = s.parse::<BigUint>().map_err(|_| ParseError::Syntax {
                    line,
                    col,
                    msg: "bad number".into(),
                })?;
                Ok((n, line, col))
            }
            _ => self.err("expected a natural number"),
        }
    }

    fn atom(&mut self) -> PResult<Formula> {
        let idx = self.atom_index;
        self.atom_index += 1;
        if let Tok::Ident(name) = self.peek().clone() {
            let followed_by_paren = self.toks.get(self.pos + 1).map(|s| &s.tok) == Some(&Tok::LParen);
            if followed_by_paren {
                if let Some(rel) = Rcc8Rel::from_name(&name) {
                    self.pos += 2;
                    let a = self.term()?;
                    self.expect(Tok::Comma, "','")?;
                    let b = self.term()?;
                    self.expect(Tok::RParen, "')'")?;
                    return Ok(Formula::Rcc8(rel, a, b));
                }
                match name.as_str() {
                    "C" => {
                        self.pos += 2;
                        let mut ts = vec![self.term()?];
                        while *self.peek() == Tok::Comma {
                            self.pos += 1;
                            ts.push(self.term()?);
                        }
                        if ts.len() < 2 {
                            return self.err("contact needs at least two arguments");
                        }
                        self.expect(Tok::RParen, "')'")?;
                        return Ok(Formula::Contact(ts));
                    }
                    "conn" => {
                        self.pos += 2;
                        let t = self.term()?;
                        self.expect(Tok::RParen, "')'")?;
                        return Ok(Formula::Conn(t));
                    }
                    "conn_le" | "conn_ge" => {
                        self.pos += 2;
                        let (k, line, col) = self.nat()?;
                        self.expect(Tok::Comma, "','")?;
                        let t = self.term()?;
                        self.expect(Tok::RParen, "')'")?;
                        if name == "conn_le" {
                            if k.is_zero() {
                                return Err(ParseError::ConnLeZero { line, col });
                            }
                            return Ok(Formula::ConnLe(k, t));
                        }
                        if k <= BigUint::one() {
                            return Err(ParseError::ConnGeTooSmall { line, col });
                        }
                        return Ok(Formula::not(Formula::ConnLe(k - 1u32, t)));
                    }
                    _ => {}
                }
            }
        }
        let lhs = self.term()?;
        let rel = self.peek().clone();
        match rel {
            Tok::Eq | Tok::Neq | Tok::Le => self.pos += 1,
            _ => return self.err("expected '=', '!=' or '<='"),
        }
        let rhs = self.term()?;
        Ok(match rel {
            Tok::Eq => Formula::Eq(lhs, rhs),
            Tok::Neq => Formula::neq(lhs, rhs),
            _ => {
                let fam = lhs.family().and_then(|f| f.join(rhs.family()?));
                match fam {
                    Some(TermFamily::Set) => Formula::set_le(lhs, rhs),
                    Some(TermFamily::Neutral) => {
                        self.deferred_le.push(idx);
                        Formula::le(lhs, rhs)
                    }
                    _ => Formula::le(lhs, rhs),
                }
            }
        })
    }

    fn term(&mut self) -> PResult<Term> {
        let (line, col) = self.here();
        let t = self.sum()?;
        if t.family().is_none() {
            return Err(ParseError::MixedFamily { line, col });
        }
        Ok(t)
    }

    fn sum(&mut self) -> PResult<Term> {
        let mut acc = self.prod()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.pos += 1;
                    acc = Term::sum(acc, self.prod()?);
                }
                Tok::Ident(s) if s == "v" => {
                    self.pos += 1;
                    acc = Term::union(acc, self.prod()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn prod(&mut self) -> PResult<Term> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.pos += 1;
                    acc = Term::prod(acc, self.unary()?);
                }
                Tok::Caret => {
                    self.pos += 1;
                    acc = Term::inter(acc, self.unary()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> PResult<Term> {
        match self.peek().clone() {
            Tok::Minus => {
                self.pos += 1;
                Ok(Term::compl(self.unary()?))
            }
            Tok::Tilde => {
                self.pos += 1;
                Ok(Term::set_compl(self.unary()?))
            }
            Tok::LParen => {
                self.pos += 1;
                let t = self.sum()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(t)
            }
            Tok::Nat(n) if n == "0" => {
                self.pos += 1;
                Ok(Term::Zero)
            }
            Tok::Nat(n) if n == "1" => {
                self.pos += 1;
                Ok(Term::One)
            }
            Tok::Ident(name) if name == "int" || name == "cl" => {
                self.pos += 1;
                self.expect(Tok::LParen, "'('")?;
                let t = self.sum()?;
                self.expect(Tok::RParen, "')'")?;
                Ok(if name == "int" { Term::interior(t) } else { Term::closure(t) })
            }
            Tok::Ident(name) if !is_keyword(&name) => {
                self.pos += 1;
                Ok(Term::Var(name))
            }
            _ => self.err("expected a term"),
        }
    }
}

/// Parse formula source text.
pub fn parse(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser { toks: lex(text)?, pos: 0, atom_index: 0, deferred_le: Vec::new() };
    let f = p.formula()?;
    if *p.peek() != Tok::End {
        return p.err("trailing input");
    }
    let deferred = p.deferred_le;
    let mut fam = Some(TermFamily::Neutral);
    {
        let mut idx = 0usize;
        f.visit_atoms(&mut |a| {
            if !deferred.contains(&idx) {
                for t in a.atom_terms() {
                    fam = fam.and_then(|x| x.join(t.family()?));
                }
            }
            idx += 1;
        });
    }
    let fam = fam.ok_or(ParseError::MixedFormula)?;
    let f = if fam == TermFamily::Set && !deferred.is_empty() {
        let mut idx = 0usize;
        f.map_atoms(&mut |a| {
            let here = idx;
            idx += 1;
            match a {
                Formula::Eq(Term::Prod(x, y), Term::Zero) if deferred.contains(&here) => match y.as_ref() {
                    Term::Compl(y) => Formula::set_le((**x).clone(), (**y).clone()),
                    _ => a.clone(),
                },
                _ => a.clone(),
            }
        })
    } else {
        f
    };
    f.family().ok_or(ParseError::MixedFormula)?;
    Ok(f)
}

/// Parse a single term.
pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    let mut p = Parser { toks: lex(text)?, pos: 0, atom_index: 0, deferred_le: Vec::new() };
    let t = p.term()?;
    if *p.peek() != Tok::End {
        return p.err("trailing input");
    }
    Ok(t)
}

//! Formula syntax shared by every language: AST, parser, printer,
//! language classification and the propositional skeleton.

mod ast;
mod classify;
mod parser;
mod printer;
mod skeleton;

pub use ast::{var, Formula, Rcc8Rel, Term, TermFamily};
pub use classify::{classify, subterm_closure, BaseLanguage, ConnLevel, LanguageTag};
pub use parser::{is_keyword, parse, parse_term, ParseError};
pub use printer::{formula_to_string, print, term_to_string};
pub use skeleton::{implicants, literal_sets, propositional_skeleton, AtomTable, Literal, LiteralSets, Prop};

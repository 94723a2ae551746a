//! Modal formula front-end: AST, parser, CNF conversion, and the canonical
//! set-based representation.

mod ast;
mod cnf;
mod parse;
mod transform;

pub use ast::{Formula, Signature};
pub use cnf::{Clause, Literal, ModalCnf, ModalLiteral, Modality};
pub use parse::{parse_to_cnf, ParseError};
pub use transform::{is_definitional_atom, DEFAULT_DISTRIBUTION_BUDGET};

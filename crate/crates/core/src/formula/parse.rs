//! Text parsers for the formula grammar and the explicit set notation.
//!
//! Formula grammar (ASCII): atoms `[a-z][a-zA-Z0-9_]*`; negation `~`;
//! connectives `&`, `|`, `->`; boxes `[m]`, `[A]`, `[@i]`; diamonds `<m>`,
//! `<A>`, `<@i>`; parentheses. Precedence `~` > `&` > `|` > `->`, with the
//! binary connectives associating to the right. The set notation
//! `{ { ~p, r }, { q, r } }` denotes a modal CNF formula directly.

use std::collections::BTreeSet;

use thiserror::Error;

use super::ast::{Formula, Signature};
use super::cnf::{Clause, Literal, ModalCnf, ModalLiteral, Modality};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at {line}:{col}: {message}")]
    Syntax { line: usize, col: usize, message: String },
    #[error("unknown modality `{name}` at {line}:{col}")]
    UnknownModality { name: String, line: usize, col: usize },
    #[error("name `{name}` is used both as an atom and as a modality")]
    NameClash { name: String },
}

impl ParseError {
    fn syntax(pos: Pos, message: impl Into<String>) -> Self {
        ParseError::Syntax { line: pos.line, col: pos.col, message: message.into() }
    }

    pub(crate) fn name_clash(name: impl Into<String>) -> Self {
        ParseError::NameClash { name: name.into() }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
struct Pos {
    line: usize,
    col: usize,
}

#[derive(Clone, PartialEq, Eq, Debug)]
enum Token {
    Ident(String),
    Tilde,
    Amp,
    Pipe,
    Arrow,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    BoxOp(Modality),
    DiamondOp(Modality),
}

impl Token {
    fn describe(&self) -> String {
        match self {
            Token::Ident(s) => format!("`{s}`"),
            Token::Tilde => "`~`".into(),
            Token::Amp => "`&`".into(),
            Token::Pipe => "`|`".into(),
            Token::Arrow => "`->`".into(),
            Token::LParen => "`(`".into(),
            Token::RParen => "`)`".into(),
            Token::LBrace => "`{`".into(),
            Token::RBrace => "`}`".into(),
            Token::Comma => "`,`".into(),
            Token::BoxOp(m) => format!("`[{m}]`"),
            Token::DiamondOp(m) => format!("`<{m}>`"),
        }
    }
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer { chars: text.chars().peekable(), line: 1, col: 1 }
    }

    fn pos(&self) -> Pos {
        Pos { line: self.line, col: self.col }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn ident(&mut self, first: char) -> String {
        let mut s = String::new();
        s.push(first);
        while let Some(&c) = self.chars.peek() {
            if c.is_ascii_alphanumeric() || c == '_' {
                s.push(c);
                self.bump();
            } else {
                break;
            }
        }
        s
    }

    /// Lexes the modality name between `[`/`]` or `<`/`>` delimiters.
    fn modality(&mut self, close: char) -> Result<Modality, ParseError> {
        let pos = self.pos();
        let m = match self.bump() {
            Some('A') => Modality::Universal,
            Some('@') => {
                let pos = self.pos();
                match self.bump() {
                    Some(c) if c.is_ascii_lowercase() => Modality::AtomIndexed(self.ident(c)),
                    _ => return Err(ParseError::syntax(pos, "expected an atom after `@`")),
                }
            }
            Some(c) if c.is_ascii_lowercase() => Modality::Relational(self.ident(c)),
            _ => return Err(ParseError::syntax(pos, "expected a modality name")),
        };
        let pos = self.pos();
        match self.bump() {
            Some(c) if c == close => Ok(m),
            _ => Err(ParseError::syntax(pos, format!("expected `{close}`"))),
        }
    }

    fn tokens(mut self) -> Result<Vec<(Token, Pos)>, ParseError> {
        let mut out = Vec::new();
        while let Some(&c) = self.chars.peek() {
            let pos = self.pos();
            match c {
                ' ' | '\t' | '\r' | '\n' => {
                    self.bump();
                }
                '~' => {
                    self.bump();
                    out.push((Token::Tilde, pos));
                }
                '&' => {
                    self.bump();
                    out.push((Token::Amp, pos));
                }
                '|' => {
                    self.bump();
                    out.push((Token::Pipe, pos));
                }
                '-' => {
                    self.bump();
                    if self.chars.peek() == Some(&'>') {
                        self.bump();
                        out.push((Token::Arrow, pos));
                    } else {
                        return Err(ParseError::syntax(pos, "expected `->`"));
                    }
                }
                '(' => {
                    self.bump();
                    out.push((Token::LParen, pos));
                }
                ')' => {
                    self.bump();
                    out.push((Token::RParen, pos));
                }
                '{' => {
                    self.bump();
                    out.push((Token::LBrace, pos));
                }
                '}' => {
                    self.bump();
                    out.push((Token::RBrace, pos));
                }
                ',' => {
                    self.bump();
                    out.push((Token::Comma, pos));
                }
                '[' => {
                    self.bump();
                    let m = self.modality(']')?;
                    out.push((Token::BoxOp(m), pos));
                }
                '<' => {
                    self.bump();
                    let m = self.modality('>')?;
                    out.push((Token::DiamondOp(m), pos));
                }
                c if c.is_ascii_lowercase() => {
                    self.bump();
                    let id = self.ident(c);
                    out.push((Token::Ident(id), pos));
                }
                other => {
                    return Err(ParseError::syntax(pos, format!("unexpected character `{other}`")));
                }
            }
        }
        Ok(out)
    }
}

struct Parser {
    tokens: Vec<(Token, Pos)>,
    at: usize,
    end: Pos,
    /// None: modalities are open and inferred from the text.
    signature: Option<Signature>,
    seen_atoms: BTreeSet<String>,
    seen_modalities: BTreeSet<Modality>,
}

impl Parser {
    fn new(text: &str, signature: Option<&Signature>) -> Result<Self, ParseError> {
        let lexer = Lexer::new(text);
        let end = Pos {
            line: text.lines().count().max(1),
            col: text.lines().last().map(|l| l.chars().count() + 1).unwrap_or(1),
        };
        Ok(Parser {
            tokens: lexer.tokens()?,
            at: 0,
            end,
            signature: signature.cloned(),
            seen_atoms: BTreeSet::new(),
            seen_modalities: BTreeSet::new(),
        })
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.at).map(|(t, _)| t)
    }

    fn pos(&self) -> Pos {
        self.tokens.get(self.at).map(|(_, p)| *p).unwrap_or(self.end)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.at).map(|(t, _)| t.clone());
        if t.is_some() {
            self.at += 1;
        }
        t
    }

    fn expect(&mut self, want: Token) -> Result<(), ParseError> {
        let pos = self.pos();
        match self.next() {
            Some(t) if t == want => Ok(()),
            Some(t) => {
                Err(ParseError::syntax(pos, format!("expected {}, found {}", want.describe(), t.describe())))
            }
            None => Err(ParseError::syntax(pos, format!("expected {}, found end of input", want.describe()))),
        }
    }

    fn note_modality(&mut self, m: &Modality, pos: Pos) -> Result<(), ParseError> {
        if let Some(sig) = &self.signature {
            if !sig.has_modality(m) {
                return Err(ParseError::UnknownModality {
                    name: m.name(),
                    line: pos.line,
                    col: pos.col,
                });
            }
        }
        self.seen_modalities.insert(m.clone());
        if let Some(i) = m.index_atom() {
            self.seen_atoms.insert(i.to_string());
        }
        Ok(())
    }

    fn note_atom(&mut self, name: &str) -> Result<(), ParseError> {
        if let Some(sig) = &self.signature {
            if sig.clashes_with_modality(name) {
                return Err(ParseError::name_clash(name));
            }
        }
        self.seen_atoms.insert(name.to_string());
        Ok(())
    }

    /// After a full parse, atoms and modality names must be disjoint.
    fn check_clashes(&self) -> Result<(), ParseError> {
        for m in &self.seen_modalities {
            if let Modality::Relational(n) = m {
                if self.seen_atoms.contains(n) {
                    return Err(ParseError::name_clash(n));
                }
            }
        }
        Ok(())
    }

    // Formula grammar, with each binary connective associating right.

    fn formula(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if self.peek() == Some(&Token::Arrow) {
            self.next();
            let rhs = self.formula()?;
            // `a -> b` desugars to `~a | b`.
            Ok(Formula::or(Formula::not(lhs), rhs))
        } else {
            Ok(lhs)
        }
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.conjunction()?;
        if self.peek() == Some(&Token::Pipe) {
            self.next();
            let rhs = self.disjunction()?;
            Ok(Formula::or(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.unary()?;
        if self.peek() == Some(&Token::Amp) {
            self.next();
            let rhs = self.conjunction()?;
            Ok(Formula::and(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        let pos = self.pos();
        match self.next() {
            Some(Token::Tilde) => Ok(Formula::not(self.unary()?)),
            Some(Token::BoxOp(m)) => {
                self.note_modality(&m, pos)?;
                Ok(Formula::boxed(m, self.unary()?))
            }
            Some(Token::DiamondOp(m)) => {
                self.note_modality(&m, pos)?;
                Ok(Formula::diamond(m, self.unary()?))
            }
            Some(Token::Ident(name)) => {
                self.note_atom(&name)?;
                Ok(Formula::Atom(name))
            }
            Some(Token::LParen) => {
                let f = self.formula()?;
                self.expect(Token::RParen)?;
                Ok(f)
            }
            Some(t) => Err(ParseError::syntax(pos, format!("expected a formula, found {}", t.describe()))),
            None => Err(ParseError::syntax(pos, "expected a formula, found end of input")),
        }
    }

    // Set notation for modal CNF.

    fn cnf(&mut self) -> Result<ModalCnf, ParseError> {
        self.expect(Token::LBrace)?;
        let mut clauses = Vec::new();
        if self.peek() != Some(&Token::RBrace) {
            loop {
                clauses.push(self.clause()?);
                if self.peek() == Some(&Token::Comma) {
                    self.next();
                } else {
                    break;
                }
            }
        }
        self.expect(Token::RBrace)?;
        Ok(ModalCnf::from_clauses(clauses))
    }

    fn clause(&mut self) -> Result<Clause, ParseError> {
        self.expect(Token::LBrace)?;
        let mut atom_literals = Vec::new();
        let mut modal_literals = Vec::new();
        if self.peek() != Some(&Token::RBrace) {
            loop {
                let positive = if self.peek() == Some(&Token::Tilde) {
                    self.next();
                    false
                } else {
                    true
                };
                let pos = self.pos();
                match self.next() {
                    Some(Token::Ident(name)) => {
                        self.note_atom(&name)?;
                        atom_literals.push(Literal { atom: name, positive });
                    }
                    Some(Token::BoxOp(m)) => {
                        self.note_modality(&m, pos)?;
                        let body = self.clause()?;
                        modal_literals.push(ModalLiteral::new(m, positive, body));
                    }
                    Some(t) => {
                        return Err(ParseError::syntax(
                            pos,
                            format!("expected a literal or modal literal, found {}", t.describe()),
                        ));
                    }
                    None => {
                        return Err(ParseError::syntax(pos, "expected a literal, found end of input"));
                    }
                }
                if self.peek() == Some(&Token::Comma) {
                    self.next();
                } else {
                    break;
                }
            }
        }
        self.expect(Token::RBrace)?;
        Ok(Clause::new(atom_literals, modal_literals))
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        if let Some(t) = self.peek() {
            let pos = self.pos();
            return Err(ParseError::syntax(pos, format!("unexpected {}", t.describe())));
        }
        self.check_clashes()
    }
}

impl Formula {
    /// Parses the formula grammar, inferring the signature from the text.
    pub fn parse(text: &str) -> Result<Formula, ParseError> {
        let mut p = Parser::new(text, None)?;
        let f = p.formula()?;
        p.finish()?;
        Ok(f)
    }

    /// Parses the formula grammar against a fixed signature. Modalities not
    /// declared in the signature are rejected.
    pub fn parse_with(text: &str, signature: &Signature) -> Result<Formula, ParseError> {
        let mut p = Parser::new(text, Some(signature))?;
        let f = p.formula()?;
        p.finish()?;
        Ok(f)
    }
}

impl ModalCnf {
    /// Parses the explicit set notation, e.g. `{ { ~p, r }, { q, r } }`.
    pub fn parse(text: &str) -> Result<ModalCnf, ParseError> {
        let mut p = Parser::new(text, None)?;
        let phi = p.cnf()?;
        p.finish()?;
        Ok(phi)
    }
}

/// Parses either input form and normalizes to modal CNF: set notation when
/// the text starts with `{`, the formula grammar otherwise.
pub fn parse_to_cnf(text: &str) -> Result<ModalCnf, ParseError> {
    if text.trim_start().starts_with('{') {
        ModalCnf::parse(text)
    } else {
        Ok(Formula::parse(text)?.to_cnf())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_worked_example() {
        let f = Formula::parse("<m>(p & q & p) & [m]~r").unwrap();
        let m = Modality::Relational("m".into());
        let expected = Formula::and(
            Formula::diamond(
                m.clone(),
                Formula::and(Formula::atom("p"), Formula::and(Formula::atom("q"), Formula::atom("p"))),
            ),
            Formula::boxed(m, Formula::not(Formula::atom("r"))),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn parses_single_atom() {
        assert_eq!(Formula::parse("p").unwrap(), Formula::atom("p"));
    }

    #[test]
    fn parses_indexed_box() {
        let f = Formula::parse("[@i]p").unwrap();
        assert_eq!(f, Formula::boxed(Modality::AtomIndexed("i".into()), Formula::atom("p")));
        assert_eq!(f.atoms().into_iter().collect::<Vec<_>>(), ["i", "p"]);
    }

    #[test]
    fn implication_desugars() {
        let f = Formula::parse("p -> q").unwrap();
        assert_eq!(f, Formula::or(Formula::not(Formula::atom("p")), Formula::atom("q")));
    }

    #[test]
    fn precedence_tilde_amp_pipe_arrow() {
        let f = Formula::parse("~p & q | r -> s").unwrap();
        let expected = Formula::or(
            Formula::not(Formula::or(
                Formula::and(Formula::not(Formula::atom("p")), Formula::atom("q")),
                Formula::atom("r"),
            )),
            Formula::atom("s"),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn syntax_error_reports_position() {
        let err = Formula::parse("p &\n& q").unwrap_err();
        match err {
            ParseError::Syntax { line, col, .. } => {
                assert_eq!((line, col), (2, 1));
            }
            other => panic!("unexpected error: {other}"),
        }
    }

    #[test]
    fn unknown_modality_is_rejected_under_a_signature() {
        let sig = Signature::new([], [Modality::Relational("m".into())]).unwrap();
        assert!(Formula::parse_with("[m]p", &sig).is_ok());
        let err = Formula::parse_with("[n]p", &sig).unwrap_err();
        assert!(matches!(err, ParseError::UnknownModality { .. }));
    }

    #[test]
    fn atom_modality_clash_is_rejected() {
        let err = Formula::parse("m & [m]p").unwrap_err();
        assert!(matches!(err, ParseError::NameClash { .. }));
    }

    #[test]
    fn set_notation_round_trips() {
        let text = "{ { ~p, r }, { q, r }, { r, [m]{ ~p, q } } }";
        let phi = ModalCnf::parse(text).unwrap();
        assert_eq!(phi.to_string(), text);
    }

    #[test]
    fn set_notation_accepts_negative_modal_literals() {
        let phi = ModalCnf::parse("{ { ~[m]{ ~p, ~q } }, { [m]{ ~r } } }").unwrap();
        assert_eq!(phi.clauses.len(), 2);
        assert_eq!(phi.modal_depth(), 1);
    }

    #[test]
    fn empty_sets_parse() {
        assert!(ModalCnf::parse("{ }").unwrap().is_empty());
        let phi = ModalCnf::parse("{ { } }").unwrap();
        assert_eq!(phi.clauses.len(), 1);
        assert!(phi.clauses.iter().next().unwrap().is_empty());
    }
}

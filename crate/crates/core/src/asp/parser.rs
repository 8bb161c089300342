//! Hand-written lexer and recursive-descent parser for program text.
//!
//! ```text
//! a(1) v b(2,2).
//! c(X) :- a(X), #sum{Y: b(X,Y)} >= 2.
//! :- p(X), not q(X).      % constraint
//! ```

use std::fmt;
use std::sync::Arc;

use super::syntax::{
    AggregateAtom, AggregateFunction, ArithOp, Atom, BuiltinAtom, Comparator, Const, Expr,
    GroundAtom, GroundPair, GroundSet, Literal, Program, Rule, SetTerm, Term,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

const RESERVED: &[&str] = &["not", "v"];

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Var(String),
    Anon,
    Int(i64),
    Agg(AggregateFunction),
    LParen,
    RParen,
    LBrace,
    RBrace,
    LAngle,
    RAngle,
    Comma,
    Dot,
    Colon,
    If,
    Bar,
    Plus,
    Minus,
    Cmp(Comparator),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "'{s}'"),
            Tok::Var(s) => write!(f, "variable '{s}'"),
            Tok::Anon => f.write_str("'_'"),
            Tok::Int(v) => write!(f, "'{v}'"),
            Tok::Agg(a) => write!(f, "'{a}'"),
            Tok::LParen => f.write_str("'('"),
            Tok::RParen => f.write_str("')'"),
            Tok::LBrace => f.write_str("'{'"),
            Tok::RBrace => f.write_str("'}'"),
            Tok::LAngle => f.write_str("'⟨'"),
            Tok::RAngle => f.write_str("'⟩'"),
            Tok::Comma => f.write_str("','"),
            Tok::Dot => f.write_str("'.'"),
            Tok::Colon => f.write_str("':'"),
            Tok::If => f.write_str("':-'"),
            Tok::Bar => f.write_str("disjunction"),
            Tok::Plus => f.write_str("'+'"),
            Tok::Minus => f.write_str("'-'"),
            Tok::Cmp(c) => write!(f, "'{c}'"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let err = |line, column, message: String| ParseError { line, column, message };
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        let advance = |n: usize, i: &mut usize, col: &mut usize| {
            *i += n;
            *col += n;
        };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            advance(1, &mut i, &mut col);
            continue;
        }
        if c == '%' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let next = chars.get(i + 1).copied();
        let tok = if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                advance(1, &mut i, &mut col);
            }
            let s: String = chars[start..i].iter().collect();
            let v = s
                .parse::<i64>()
                .map_err(|_| err(tl, tc, format!("integer constant '{s}' out of range")))?;
            out.push(Spanned { tok: Tok::Int(v), line: tl, column: tc });
            continue;
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                advance(1, &mut i, &mut col);
            }
            let s: String = chars[start..i].iter().collect();
            let tok = if s == "_" {
                Tok::Anon
            } else if c.is_uppercase() || c == '_' {
                Tok::Var(s)
            } else if c.is_lowercase() {
                Tok::Ident(s)
            } else {
                return Err(err(tl, tc, format!("identifier '{s}' must start with a letter")));
            };
            out.push(Spanned { tok, line: tl, column: tc });
            continue;
        } else if c == '#' {
            let start = i + 1;
            let mut j = start;
            while j < chars.len() && chars[j].is_alphabetic() {
                j += 1;
            }
            let name: String = chars[start..j].iter().collect();
            let f = match name.as_str() {
                "count" => AggregateFunction::Count,
                "sum" => AggregateFunction::Sum,
                "min" => AggregateFunction::Min,
                "max" => AggregateFunction::Max,
                _ => return Err(err(tl, tc, format!("unknown aggregate function '#{name}'"))),
            };
            let n = j - i;
            advance(n, &mut i, &mut col);
            out.push(Spanned { tok: Tok::Agg(f), line: tl, column: tc });
            continue;
        } else {
            match (c, next) {
                (':', Some('-')) => {
                    advance(2, &mut i, &mut col);
                    Tok::If
                }
                ('<', Some('=')) => {
                    advance(2, &mut i, &mut col);
                    Tok::Cmp(Comparator::Le)
                }
                ('<', Some('>')) => {
                    advance(2, &mut i, &mut col);
                    Tok::Cmp(Comparator::Ne)
                }
                ('>', Some('=')) => {
                    advance(2, &mut i, &mut col);
                    Tok::Cmp(Comparator::Ge)
                }
                ('!', Some('=')) => {
                    advance(2, &mut i, &mut col);
                    Tok::Cmp(Comparator::Ne)
                }
                ('=', Some('=')) => {
                    advance(2, &mut i, &mut col);
                    Tok::Cmp(Comparator::Eq)
                }
                _ => {
                    let t = match c {
                        '(' => Tok::LParen,
                        ')' => Tok::RParen,
                        '{' => Tok::LBrace,
                        '}' => Tok::RBrace,
                        '⟨' => Tok::LAngle,
                        '⟩' => Tok::RAngle,
                        ',' => Tok::Comma,
                        '.' => Tok::Dot,
                        ':' => Tok::Colon,
                        '|' | '∨' => Tok::Bar,
                        '+' => Tok::Plus,
                        '-' => Tok::Minus,
                        '<' => Tok::Cmp(Comparator::Lt),
                        '>' => Tok::Cmp(Comparator::Gt),
                        '=' => Tok::Cmp(Comparator::Eq),
                        '≤' => Tok::Cmp(Comparator::Le),
                        '≥' => Tok::Cmp(Comparator::Ge),
                        '≠' => Tok::Cmp(Comparator::Ne),
                        other => return Err(err(tl, tc, format!("unexpected character '{other}'"))),
                    };
                    advance(1, &mut i, &mut col);
                    t
                }
            }
        };
        out.push(Spanned { tok, line: tl, column: tc });
    }
    out.push(Spanned { tok: Tok::Eof, line, column: col });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    anon: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let idx = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[idx].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos < self.toks.len() - 1 {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, message: String) -> ParseError {
        let s = &self.toks[self.pos];
        ParseError { line: s.line, column: s.column, message }
    }

    fn expected(&self, what: &str) -> ParseError {
        self.error_here(format!("expected {what}, found {}", self.peek()))
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.expected(what))
        }
    }

    fn at_disjunction(&self) -> bool {
        matches!(self.peek(), Tok::Bar) || matches!(self.peek(), Tok::Ident(s) if s == "v")
    }

    fn program(&mut self) -> Result<Program, ParseError> {
        let mut rules = Vec::new();
        while *self.peek() != Tok::Eof {
            rules.push(self.rule()?);
        }
        Ok(Program::new(rules))
    }

    fn rule(&mut self) -> Result<Rule, ParseError> {
        self.anon = 0;
        let mut head = Vec::new();
        if *self.peek() != Tok::If {
            head.push(self.atom()?);
            while self.at_disjunction() {
                self.bump();
                head.push(self.atom()?);
            }
        }
        let mut body = Vec::new();
        if *self.peek() == Tok::If {
            self.bump();
            body.push(self.literal()?);
            while *self.peek() == Tok::Comma {
                self.bump();
                body.push(self.literal()?);
            }
        } else if head.is_empty() {
            return Err(self.expected("a rule"));
        }
        self.expect(Tok::Dot, "'.' at end of rule")?;
        Ok(Rule { head, body })
    }

    fn predicate_name(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                if RESERVED.contains(&name.as_str()) {
                    return Err(self.error_here(format!(
                        "reserved word '{name}' cannot be used as a predicate"
                    )));
                }
                self.bump();
                Ok(name)
            }
            _ => Err(self.expected("a predicate name")),
        }
    }

    fn atom(&mut self) -> Result<Atom, ParseError> {
        let name = self.predicate_name()?;
        let mut terms = Vec::new();
        if *self.peek() == Tok::LParen {
            self.bump();
            terms.push(self.term()?);
            while *self.peek() == Tok::Comma {
                self.bump();
                terms.push(self.term()?);
            }
            self.expect(Tok::RParen, "',' or ')'")?;
        }
        Ok(Atom { predicate: Arc::from(name.as_str()), terms })
    }

    fn fresh_anon(&mut self) -> Term {
        self.anon += 1;
        Term::Var(Arc::from(format!("_{}", self.anon).as_str()))
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        match self.peek().clone() {
            Tok::Var(v) => {
                self.bump();
                Ok(Term::Var(Arc::from(v.as_str())))
            }
            Tok::Anon => {
                self.bump();
                Ok(self.fresh_anon())
            }
            Tok::Int(v) => {
                self.bump();
                Ok(Term::int(v))
            }
            Tok::Ident(s) => {
                if RESERVED.contains(&s.as_str()) {
                    return Err(self.error_here(format!(
                        "reserved word '{s}' cannot be used as a constant"
                    )));
                }
                self.bump();
                Ok(Term::sym(&s))
            }
            _ => Err(self.expected("a term")),
        }
    }

    fn constant(&mut self) -> Result<Const, ParseError> {
        match self.term()? {
            Term::Const(c) => Ok(c),
            Term::Var(_) => Err(self.error_here("expected a constant in a ground set".into())),
        }
    }

    fn ground_atom(&mut self) -> Result<GroundAtom, ParseError> {
        let atom = self.atom()?;
        atom.to_ground()
            .ok_or_else(|| self.error_here("ground set elements must not contain variables".into()))
    }

    fn literal(&mut self) -> Result<Literal, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) if s == "not" => {
                self.bump();
                Ok(Literal::Neg(self.atom()?))
            }
            Tok::Agg(_) => Ok(Literal::Aggregate(self.aggregate()?)),
            Tok::Ident(_) => {
                let next = self.peek_at(1);
                if matches!(next, Tok::Cmp(_) | Tok::Plus | Tok::Minus) {
                    Ok(Literal::Builtin(self.builtin()?))
                } else {
                    Ok(Literal::Pos(self.atom()?))
                }
            }
            Tok::Var(_) | Tok::Anon | Tok::Int(_) | Tok::LParen => {
                Ok(Literal::Builtin(self.builtin()?))
            }
            _ => Err(self.expected("a literal")),
        }
    }

    fn comparator(&mut self) -> Result<Comparator, ParseError> {
        match self.peek().clone() {
            Tok::Cmp(c) => {
                self.bump();
                Ok(c)
            }
            _ => Err(self.expected("a comparison operator")),
        }
    }

    fn builtin(&mut self) -> Result<BuiltinAtom, ParseError> {
        let left = self.expr()?;
        let comparator = self.comparator()?;
        let right = self.expr()?;
        Ok(BuiltinAtom { left, comparator, right })
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut acc = self.expr_operand()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => ArithOp::Add,
                Tok::Minus => ArithOp::Sub,
                _ => break,
            };
            self.bump();
            let rhs = self.expr_operand()?;
            acc = Expr::Binary(op, Box::new(acc), Box::new(rhs));
        }
        Ok(acc)
    }

    fn expr_operand(&mut self) -> Result<Expr, ParseError> {
        if *self.peek() == Tok::LParen {
            self.bump();
            let e = self.expr()?;
            self.expect(Tok::RParen, "')'")?;
            return Ok(e);
        }
        Ok(Expr::Term(self.term()?))
    }

    fn aggregate(&mut self) -> Result<AggregateAtom, ParseError> {
        let function = match self.bump() {
            Tok::Agg(f) => f,
            _ => unreachable!("caller checked for an aggregate keyword"),
        };
        self.expect(Tok::LBrace, "'{'")?;
        let set = if *self.peek() == Tok::LAngle || *self.peek() == Tok::RBrace {
            let mut pairs = Vec::new();
            while *self.peek() == Tok::LAngle {
                self.bump();
                let mut consts = vec![self.constant()?];
                while *self.peek() == Tok::Comma {
                    self.bump();
                    consts.push(self.constant()?);
                }
                self.expect(Tok::Colon, "':'")?;
                let mut conj = vec![self.ground_atom()?];
                while *self.peek() == Tok::Comma {
                    self.bump();
                    conj.push(self.ground_atom()?);
                }
                self.expect(Tok::RAngle, "'⟩'")?;
                pairs.push(GroundPair { consts, conj });
                if *self.peek() == Tok::Comma {
                    self.bump();
                    if *self.peek() != Tok::LAngle {
                        return Err(self.expected("'⟨'"));
                    }
                }
            }
            SetTerm::Ground(GroundSet::new(pairs))
        } else {
            let mut terms = vec![self.term()?];
            while *self.peek() == Tok::Comma {
                self.bump();
                terms.push(self.term()?);
            }
            self.expect(Tok::Colon, "':' or ','")?;
            let mut conj = vec![self.atom()?];
            while *self.peek() == Tok::Comma {
                self.bump();
                conj.push(self.atom()?);
            }
            SetTerm::Symbolic { terms, conj }
        };
        self.expect(Tok::RBrace, "'}'")?;
        let comparator = self.comparator()?;
        let guard = self.term()?;
        Ok(AggregateAtom { function, set, comparator, guard })
    }
}

/// Parses program text into a [`Program`], preserving rule order.
pub fn parse_program(text: &str) -> Result<Program, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, anon: 0 };
    p.program()
}

/// Parses a single rule; convenient for building encodings piecewise.
pub fn parse_rule(text: &str) -> Result<Rule, ParseError> {
    let mut program = parse_program(text)?;
    match program.rules.len() {
        1 => Ok(program.rules.pop().unwrap()),
        n => Err(ParseError { line: 1, column: 1, message: format!("expected one rule, found {n}") }),
    }
}

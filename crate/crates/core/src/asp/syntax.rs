//! Abstract syntax for the logic-program dialect: terms, standard atoms,
//! set terms, aggregate and builtin atoms, rules and programs, plus their
//! ground counterparts.
//!
//! Every type renders back into the concrete syntax accepted by
//! [`parse_program`](super::parse_program) through its `Display` impl.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

/// A constant. The derived order puts every integer before every symbol,
/// integers compare by value and symbols lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Const {
    Int(i64),
    Sym(Arc<str>),
}

impl Const {
    pub fn sym(name: &str) -> Self {
        Const::Sym(Arc::from(name))
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            Const::Int(v) => Some(*v),
            Const::Sym(_) => None,
        }
    }
}

impl From<i64> for Const {
    fn from(v: i64) -> Self {
        Const::Int(v)
    }
}

impl From<&str> for Const {
    fn from(s: &str) -> Self {
        Const::sym(s)
    }
}

impl fmt::Display for Const {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Const::Int(v) => write!(f, "{v}"),
            Const::Sym(s) => f.write_str(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(Arc<str>),
    Const(Const),
}

impl Term {
    pub fn var(name: &str) -> Self {
        Term::Var(Arc::from(name))
    }

    pub fn int(v: i64) -> Self {
        Term::Const(Const::Int(v))
    }

    pub fn sym(name: &str) -> Self {
        Term::Const(Const::sym(name))
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::Const(c) => c.fmt(f),
        }
    }
}

/// `p(t1,...,tk)`, possibly with variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub predicate: Arc<str>,
    pub terms: Vec<Term>,
}

impl Atom {
    pub fn new(predicate: &str, terms: Vec<Term>) -> Self {
        Atom { predicate: Arc::from(predicate), terms }
    }

    pub fn arity(&self) -> usize {
        self.terms.len()
    }

    pub fn is_ground(&self) -> bool {
        self.terms.iter().all(|t| !t.is_var())
    }

    pub fn vars(&self) -> impl Iterator<Item = &Arc<str>> {
        self.terms.iter().filter_map(|t| match t {
            Term::Var(v) => Some(v),
            Term::Const(_) => None,
        })
    }

    /// The ground atom, if no variable occurs.
    pub fn to_ground(&self) -> Option<GroundAtom> {
        let args = self
            .terms
            .iter()
            .map(|t| match t {
                Term::Const(c) => Some(c.clone()),
                Term::Var(_) => None,
            })
            .collect::<Option<Vec<_>>>()?;
        Some(GroundAtom { predicate: self.predicate.clone(), args })
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.predicate)?;
        if !self.terms.is_empty() {
            f.write_str("(")?;
            write_joined(f, &self.terms, ",")?;
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// A variable-free standard atom.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroundAtom {
    pub predicate: Arc<str>,
    pub args: Vec<Const>,
}

impl GroundAtom {
    pub fn new(predicate: &str, args: Vec<Const>) -> Self {
        GroundAtom { predicate: Arc::from(predicate), args }
    }

    pub fn to_atom(&self) -> Atom {
        Atom {
            predicate: self.predicate.clone(),
            terms: self.args.iter().cloned().map(Term::Const).collect(),
        }
    }
}

impl fmt::Display for GroundAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.predicate)?;
        if !self.args.is_empty() {
            f.write_str("(")?;
            write_joined(f, &self.args, ",")?;
            f.write_str(")")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Comparator {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
}

impl Comparator {
    pub fn holds<T: Ord + ?Sized>(self, left: &T, right: &T) -> bool {
        let ord = left.cmp(right);
        match self {
            Comparator::Lt => ord == Ordering::Less,
            Comparator::Le => ord != Ordering::Greater,
            Comparator::Gt => ord == Ordering::Greater,
            Comparator::Ge => ord != Ordering::Less,
            Comparator::Eq => ord == Ordering::Equal,
            Comparator::Ne => ord != Ordering::Equal,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Comparator::Lt => "<",
            Comparator::Le => "<=",
            Comparator::Gt => ">",
            Comparator::Ge => ">=",
            Comparator::Eq => "=",
            Comparator::Ne => "!=",
        }
    }
}

impl fmt::Display for Comparator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AggregateFunction {
    Count,
    Sum,
    Min,
    Max,
}

impl AggregateFunction {
    pub fn keyword(self) -> &'static str {
        match self {
            AggregateFunction::Count => "#count",
            AggregateFunction::Sum => "#sum",
            AggregateFunction::Min => "#min",
            AggregateFunction::Max => "#max",
        }
    }
}

impl fmt::Display for AggregateFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

/// One `⟨consts : conj⟩` element of a ground set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroundPair {
    pub consts: Vec<Const>,
    pub conj: Vec<GroundAtom>,
}

impl fmt::Display for GroundPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("⟨")?;
        write_joined(f, &self.consts, ",")?;
        f.write_str(": ")?;
        write_joined(f, &self.conj, ", ")?;
        f.write_str("⟩")
    }
}

/// A set of ground pairs. Kept sorted and duplicate-free.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroundSet {
    pairs: Vec<GroundPair>,
}

impl GroundSet {
    pub fn new(pairs: impl IntoIterator<Item = GroundPair>) -> Self {
        let set: BTreeSet<GroundPair> = pairs.into_iter().collect();
        GroundSet { pairs: set.into_iter().collect() }
    }

    pub fn pairs(&self) -> &[GroundPair] {
        &self.pairs
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

impl fmt::Display for GroundSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        write_joined(f, &self.pairs, ", ")?;
        f.write_str("}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SetTerm {
    /// `{Terms : Conj}`
    Symbolic { terms: Vec<Term>, conj: Vec<Atom> },
    Ground(GroundSet),
}

impl fmt::Display for SetTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetTerm::Symbolic { terms, conj } => {
                f.write_str("{")?;
                write_joined(f, terms, ",")?;
                f.write_str(": ")?;
                write_joined(f, conj, ", ")?;
                f.write_str("}")
            }
            SetTerm::Ground(g) => g.fmt(f),
        }
    }
}

/// `f(S) ⊙ T`
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AggregateAtom {
    pub function: AggregateFunction,
    pub set: SetTerm,
    pub comparator: Comparator,
    pub guard: Term,
}

impl fmt::Display for AggregateAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{} {} {}", self.function, self.set, self.comparator, self.guard)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ArithOp {
    Add,
    Sub,
}

/// Arithmetic over terms, as used by builtin atoms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    Term(Term),
    Binary(ArithOp, Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn vars(&self, out: &mut Vec<Arc<str>>) {
        match self {
            Expr::Term(Term::Var(v)) => out.push(v.clone()),
            Expr::Term(Term::Const(_)) => {}
            Expr::Binary(_, l, r) => {
                l.vars(out);
                r.vars(out);
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Term(t) => t.fmt(f),
            Expr::Binary(op, l, r) => {
                let sym = match op {
                    ArithOp::Add => "+",
                    ArithOp::Sub => "-",
                };
                // Right operands that are themselves binary need brackets to
                // survive reparsing, since operators associate to the left.
                match r.as_ref() {
                    Expr::Binary(..) => write!(f, "{l} {sym} ({r})"),
                    Expr::Term(_) => write!(f, "{l} {sym} {r}"),
                }
            }
        }
    }
}

/// An infix comparison with a fixed meaning, e.g. `D + Wh > Hmax`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BuiltinAtom {
    pub left: Expr,
    pub comparator: Comparator,
    pub right: Expr,
}

impl fmt::Display for BuiltinAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.left, self.comparator, self.right)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Literal {
    Pos(Atom),
    Neg(Atom),
    Aggregate(AggregateAtom),
    Builtin(BuiltinAtom),
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Literal::Pos(a) => a.fmt(f),
            Literal::Neg(a) => write!(f, "not {a}"),
            Literal::Aggregate(a) => a.fmt(f),
            Literal::Builtin(b) => b.fmt(f),
        }
    }
}

/// `α1 v ... v αn :- ℓ1, ..., ℓm.` An empty head is a constraint.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rule {
    pub head: Vec<Atom>,
    pub body: Vec<Literal>,
}

impl Rule {
    pub fn fact(atom: Atom) -> Self {
        Rule { head: vec![atom], body: Vec::new() }
    }

    pub fn is_constraint(&self) -> bool {
        self.head.is_empty()
    }

    pub fn is_fact(&self) -> bool {
        self.head.len() == 1 && self.body.is_empty()
    }

    pub fn positive_body(&self) -> impl Iterator<Item = &Atom> {
        self.body.iter().filter_map(|l| match l {
            Literal::Pos(a) => Some(a),
            _ => None,
        })
    }

    pub fn negative_body(&self) -> impl Iterator<Item = &Atom> {
        self.body.iter().filter_map(|l| match l {
            Literal::Neg(a) => Some(a),
            _ => None,
        })
    }

    pub fn aggregates(&self) -> impl Iterator<Item = &AggregateAtom> {
        self.body.iter().filter_map(|l| match l {
            Literal::Aggregate(a) => Some(a),
            _ => None,
        })
    }

    pub fn builtins(&self) -> impl Iterator<Item = &BuiltinAtom> {
        self.body.iter().filter_map(|l| match l {
            Literal::Builtin(b) => Some(b),
            _ => None,
        })
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_joined(f, &self.head, " v ")?;
        if !self.body.is_empty() {
            if self.head.is_empty() {
                f.write_str(":- ")?;
            } else {
                f.write_str(" :- ")?;
            }
            write_joined(f, &self.body, ", ")?;
        } else if self.head.is_empty() {
            f.write_str(":-")?;
        }
        f.write_str(".")
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Program {
    pub rules: Vec<Rule>,
}

impl Program {
    pub fn new(rules: Vec<Rule>) -> Self {
        Program { rules }
    }

    pub fn extend(&mut self, other: Program) {
        self.rules.extend(other.rules);
    }

    /// The universe: every constant occurring in the program, in order.
    pub fn universe(&self) -> BTreeSet<Const> {
        let mut out = BTreeSet::new();
        let atom = |a: &Atom, out: &mut BTreeSet<Const>| {
            for t in &a.terms {
                if let Term::Const(c) = t {
                    out.insert(c.clone());
                }
            }
        };
        for rule in &self.rules {
            for h in &rule.head {
                atom(h, &mut out);
            }
            for lit in &rule.body {
                match lit {
                    Literal::Pos(a) | Literal::Neg(a) => atom(a, &mut out),
                    Literal::Aggregate(agg) => {
                        if let Term::Const(c) = &agg.guard {
                            out.insert(c.clone());
                        }
                        match &agg.set {
                            SetTerm::Symbolic { terms, conj } => {
                                for t in terms {
                                    if let Term::Const(c) = t {
                                        out.insert(c.clone());
                                    }
                                }
                                for a in conj {
                                    atom(a, &mut out);
                                }
                            }
                            SetTerm::Ground(g) => {
                                for p in g.pairs() {
                                    out.extend(p.consts.iter().cloned());
                                    for a in &p.conj {
                                        out.extend(a.args.iter().cloned());
                                    }
                                }
                            }
                        }
                    }
                    Literal::Builtin(b) => {
                        let mut consts = Vec::new();
                        expr_consts(&b.left, &mut consts);
                        expr_consts(&b.right, &mut consts);
                        out.extend(consts);
                    }
                }
            }
        }
        out
    }

    /// Predicates with their arities, as they occur anywhere in the program.
    pub fn predicates(&self) -> BTreeSet<(Arc<str>, usize)> {
        let mut out = BTreeSet::new();
        for rule in &self.rules {
            for h in &rule.head {
                out.insert((h.predicate.clone(), h.arity()));
            }
            for lit in &rule.body {
                match lit {
                    Literal::Pos(a) | Literal::Neg(a) => {
                        out.insert((a.predicate.clone(), a.arity()));
                    }
                    Literal::Aggregate(agg) => match &agg.set {
                        SetTerm::Symbolic { conj, .. } => {
                            for a in conj {
                                out.insert((a.predicate.clone(), a.arity()));
                            }
                        }
                        SetTerm::Ground(g) => {
                            for p in g.pairs() {
                                for a in &p.conj {
                                    out.insert((a.predicate.clone(), a.args.len()));
                                }
                            }
                        }
                    },
                    Literal::Builtin(_) => {}
                }
            }
        }
        out
    }
}

fn expr_consts(e: &Expr, out: &mut Vec<Const>) {
    match e {
        Expr::Term(Term::Const(c)) => out.push(c.clone()),
        Expr::Term(Term::Var(_)) => {}
        Expr::Binary(_, l, r) => {
            expr_consts(l, out);
            expr_consts(r, out);
        }
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for rule in &self.rules {
            writeln!(f, "{rule}")?;
        }
        Ok(())
    }
}

/// A ground aggregate atom `f(S) ⊙ k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroundAggregate {
    pub function: AggregateFunction,
    pub set: GroundSet,
    pub comparator: Comparator,
    pub guard: Const,
}

impl fmt::Display for GroundAggregate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{} {} {}", self.function, self.set, self.comparator, self.guard)
    }
}

/// A builtin whose operands are already constants.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroundBuiltin {
    pub left: Const,
    pub comparator: Comparator,
    pub right: Const,
}

impl GroundBuiltin {
    pub fn holds(&self) -> bool {
        self.comparator.holds(&self.left, &self.right)
    }
}

impl fmt::Display for GroundBuiltin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.left, self.comparator, self.right)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroundLiteral {
    Pos(GroundAtom),
    Neg(GroundAtom),
    Aggregate(GroundAggregate),
    Builtin(GroundBuiltin),
}

impl fmt::Display for GroundLiteral {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroundLiteral::Pos(a) => a.fmt(f),
            GroundLiteral::Neg(a) => write!(f, "not {a}"),
            GroundLiteral::Aggregate(a) => a.fmt(f),
            GroundLiteral::Builtin(b) => b.fmt(f),
        }
    }
}

/// A ground rule. Head atoms are a set, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroundRule {
    pub head: Vec<GroundAtom>,
    pub body: Vec<GroundLiteral>,
}

impl GroundRule {
    pub fn new(head: Vec<GroundAtom>, body: Vec<GroundLiteral>) -> Self {
        let mut head = head;
        head.sort();
        head.dedup();
        GroundRule { head, body }
    }

    pub fn fact(atom: GroundAtom) -> Self {
        GroundRule { head: vec![atom], body: Vec::new() }
    }

    pub fn is_fact(&self) -> bool {
        self.head.len() == 1 && self.body.is_empty()
    }
}

impl fmt::Display for GroundRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_joined(f, &self.head, " v ")?;
        if !self.body.is_empty() {
            if self.head.is_empty() {
                f.write_str(":- ")?;
            } else {
                f.write_str(" :- ")?;
            }
            write_joined(f, &self.body, ", ")?;
        } else if self.head.is_empty() {
            f.write_str(":-")?;
        }
        f.write_str(".")
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GroundProgram {
    pub rules: Vec<GroundRule>,
}

impl GroundProgram {
    pub fn new(rules: Vec<GroundRule>) -> Self {
        GroundProgram { rules }
    }

    /// Every ground atom occurring anywhere in the program.
    pub fn atoms(&self) -> BTreeSet<GroundAtom> {
        let mut out = BTreeSet::new();
        for r in &self.rules {
            out.extend(r.head.iter().cloned());
            for l in &r.body {
                match l {
                    GroundLiteral::Pos(a) | GroundLiteral::Neg(a) => {
                        out.insert(a.clone());
                    }
                    GroundLiteral::Aggregate(agg) => {
                        for p in agg.set.pairs() {
                            out.extend(p.conj.iter().cloned());
                        }
                    }
                    GroundLiteral::Builtin(_) => {}
                }
            }
        }
        out
    }

    pub fn head_atoms(&self) -> BTreeSet<GroundAtom> {
        self.rules.iter().flat_map(|r| r.head.iter().cloned()).collect()
    }
}

impl fmt::Display for GroundProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for rule in &self.rules {
            writeln!(f, "{rule}")?;
        }
        Ok(())
    }
}

/// A set of ground atoms.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interpretation {
    atoms: BTreeSet<GroundAtom>,
}

impl Interpretation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn contains(&self, atom: &GroundAtom) -> bool {
        self.atoms.contains(atom)
    }

    pub fn insert(&mut self, atom: GroundAtom) -> bool {
        self.atoms.insert(atom)
    }

    pub fn remove(&mut self, atom: &GroundAtom) -> bool {
        self.atoms.remove(atom)
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &GroundAtom> {
        self.atoms.iter()
    }

    pub fn atoms(&self) -> &BTreeSet<GroundAtom> {
        &self.atoms
    }

    /// Atoms of one predicate, in order.
    pub fn with_predicate<'a>(&'a self, predicate: &'a str) -> impl Iterator<Item = &'a GroundAtom> + 'a {
        self.atoms.iter().filter(move |a| &*a.predicate == predicate)
    }

    pub fn is_subset(&self, other: &Interpretation) -> bool {
        self.atoms.is_subset(&other.atoms)
    }
}

impl FromIterator<GroundAtom> for Interpretation {
    fn from_iter<T: IntoIterator<Item = GroundAtom>>(iter: T) -> Self {
        Interpretation { atoms: iter.into_iter().collect() }
    }
}

impl IntoIterator for Interpretation {
    type Item = GroundAtom;
    type IntoIter = std::collections::btree_set::IntoIter<GroundAtom>;

    fn into_iter(self) -> Self::IntoIter {
        self.atoms.into_iter()
    }
}

impl fmt::Display for Interpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        let mut first = true;
        for a in &self.atoms {
            if !first {
                f.write_str(", ")?;
            }
            first = false;
            a.fmt(f)?;
        }
        f.write_str("}")
    }
}

pub(crate) fn write_joined<T: fmt::Display>(
    f: &mut fmt::Formatter<'_>,
    items: &[T],
    sep: &str,
) -> fmt::Result {
    for (i, item) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(sep)?;
        }
        item.fmt(f)?;
    }
    Ok(())
}

//! First-order model checking on graphs: find the lexicographically first
//! setting of the leading existential quantifiers under which the rest of
//! the formula holds. Nonexistence certificates for prefix restrictions are
//! pluggable; the default `slow-reference` checker brute-forces the
//! restricted domain.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::protocol::outcome::ProtocolOutcome;
use crate::protocol::random::RandomStream;
use crate::protocol::text::{join_ints, parse_usize, parse_usize_list, KvLines};

pub const MAX_QUANTIFIERS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quant {
    Exists,
    Forall,
}

/// Quantifier-free matrix over edge predicates and variable equalities;
/// variables are 0-based indices into the prefix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MatrixExpr {
    And(Box<MatrixExpr>, Box<MatrixExpr>),
    Or(Box<MatrixExpr>, Box<MatrixExpr>),
    Not(Box<MatrixExpr>),
    Edge(usize, usize),
    Eq(usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Formula {
    pub prefix: Vec<Quant>,
    pub matrix: MatrixExpr,
}

/// Graph plus formula plus per-variable vertex domains.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FoModelInstance {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
    formula: Formula,
    domains: Vec<Vec<usize>>,
}

impl FoModelInstance {
    pub fn new(
        n: usize,
        edge_list: &[(usize, usize)],
        formula: Formula,
        domains: Vec<Option<Vec<usize>>>,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::parse("graph needs at least one vertex"));
        }
        let k = formula.prefix.len();
        if k == 0 || k > MAX_QUANTIFIERS {
            return Err(Error::parse(format!(
                "formula must have 1..={MAX_QUANTIFIERS} quantifiers"
            )));
        }
        // The co-nondeterministic speedup hypothesis excludes the form
        // E^{k-1} A; reject it at parse time.
        if formula.prefix[k - 1] == Quant::Forall
            && formula.prefix[..k - 1].iter().all(|q| *q == Quant::Exists)
        {
            return Err(Error::parse(
                "formula prefix of the excluded form (all-exists then forall)",
            ));
        }
        if formula.prefix[0] != Quant::Exists {
            return Err(Error::parse(
                "formula must start with an existential quantifier",
            ));
        }
        check_matrix_vars(&formula.matrix, k)?;
        let mut edges = BTreeSet::new();
        for &(a, b) in edge_list {
            if a == 0 || b == 0 || a > n || b > n || a == b {
                return Err(Error::parse("edge endpoints must be distinct vertices"));
            }
            edges.insert((a.min(b), a.max(b)));
        }
        if domains.len() > k {
            return Err(Error::parse("more domains than quantifiers"));
        }
        let mut doms = Vec::with_capacity(k);
        for idx in 0..k {
            match domains.get(idx).cloned().flatten() {
                None => doms.push((1..=n).collect()),
                Some(d) => {
                    if d.windows(2).any(|w| w[0] >= w[1]) || d.iter().any(|&v| v == 0 || v > n) {
                        return Err(Error::parse(
                            "domains must be sorted duplicate-free vertex lists",
                        ));
                    }
                    doms.push(d);
                }
            }
        }
        Ok(FoModelInstance {
            n,
            edges,
            formula,
            domains: doms,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn formula(&self) -> &Formula {
        &self.formula
    }

    pub fn domains(&self) -> &[Vec<usize>] {
        &self.domains
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a != b && self.edges.contains(&(a.min(b), a.max(b)))
    }

    /// Number of leading existential quantifiers.
    pub fn leading_existentials(&self) -> usize {
        self.formula
            .prefix
            .iter()
            .take_while(|q| **q == Quant::Exists)
            .count()
    }

    pub fn render_body(&self, kv: &mut KvLines) {
        kv.push("n", self.n.to_string());
        kv.push("formula", render_formula(&self.formula));
        for (i, d) in self.domains.iter().enumerate() {
            let full: Vec<usize> = (1..=self.n).collect();
            if *d != full {
                kv.push_ints(&format!("domain-x{}", i + 1), d);
            }
        }
        for &(a, b) in &self.edges {
            kv.push("e", format!("{a} {b}"));
        }
    }

    pub fn parse_body(kv: &KvLines) -> Result<Self> {
        let n = parse_usize(kv.require("n")?)?;
        let formula = parse_formula(kv.require("formula")?)?;
        let k = formula.prefix.len();
        let mut domains: Vec<Option<Vec<usize>>> = vec![None; k];
        for (i, dom) in domains.iter_mut().enumerate() {
            if let Some(line) = kv.get(&format!("domain-x{}", i + 1)) {
                *dom = Some(parse_usize_list(line)?);
            }
        }
        let mut edges = Vec::new();
        for line in kv.get_all("e") {
            let v = parse_usize_list(line)?;
            if v.len() != 2 {
                return Err(Error::parse("edge line must be `e: a b`"));
            }
            edges.push((v[0], v[1]));
        }
        Self::new(n, &edges, formula, domains)
    }
}

fn check_matrix_vars(m: &MatrixExpr, k: usize) -> Result<()> {
    match m {
        MatrixExpr::And(a, b) | MatrixExpr::Or(a, b) => {
            check_matrix_vars(a, k)?;
            check_matrix_vars(b, k)
        }
        MatrixExpr::Not(a) => check_matrix_vars(a, k),
        MatrixExpr::Edge(a, b) | MatrixExpr::Eq(a, b) => {
            if *a >= k || *b >= k {
                Err(Error::parse("matrix references an undeclared variable"))
            } else {
                Ok(())
            }
        }
    }
}

fn eval_matrix(inst: &FoModelInstance, m: &MatrixExpr, assignment: &[usize]) -> bool {
    match m {
        MatrixExpr::And(a, b) => {
            eval_matrix(inst, a, assignment) && eval_matrix(inst, b, assignment)
        }
        MatrixExpr::Or(a, b) => {
            eval_matrix(inst, a, assignment) || eval_matrix(inst, b, assignment)
        }
        MatrixExpr::Not(a) => !eval_matrix(inst, a, assignment),
        MatrixExpr::Edge(a, b) => inst.has_edge(assignment[*a], assignment[*b]),
        MatrixExpr::Eq(a, b) => assignment[*a] == assignment[*b],
    }
}

/// Evaluates Q_{level+1} .. Q_k psi with the first `level` variables fixed.
pub fn eval_from(inst: &FoModelInstance, level: usize, assignment: &mut Vec<usize>) -> bool {
    if level == inst.formula.prefix.len() {
        return eval_matrix(inst, &inst.formula.matrix, assignment);
    }
    let domain = inst.domains[level].clone();
    match inst.formula.prefix[level] {
        Quant::Exists => domain.iter().any(|&v| {
            assignment.push(v);
            let r = eval_from(inst, level + 1, assignment);
            assignment.pop();
            r
        }),
        Quant::Forall => domain.iter().all(|&v| {
            assignment.push(v);
            let r = eval_from(inst, level + 1, assignment);
            assignment.pop();
            r
        }),
    }
}

/// Lexicographically first assignment to the leading existential block, or
/// None when the formula is false.
pub fn lex_first_assignment(inst: &FoModelInstance) -> Option<Vec<usize>> {
    let i = inst.leading_existentials();
    let mut assignment = Vec::with_capacity(i);
    if search(inst, 0, i, &mut assignment) {
        Some(assignment)
    } else {
        None
    }
}

fn search(inst: &FoModelInstance, level: usize, block: usize, assignment: &mut Vec<usize>) -> bool {
    if level == block {
        return eval_from(inst, level, assignment);
    }
    let domain = inst.domains[level].clone();
    for &v in &domain {
        assignment.push(v);
        if search(inst, level + 1, block, assignment) {
            return true;
        }
        assignment.pop();
    }
    false
}

/// A drop-in certificate checker for the restricted prefix claims.
pub trait PrefixChecker: Sync {
    fn label(&self) -> &'static str;
    /// True iff no z < `bound` in the domain of x_{level+1} (where
    /// `level = prefix.len()`) extends `prefix` to a satisfying setting of
    /// the remaining formula.
    fn none_below(&self, inst: &FoModelInstance, prefix: &[usize], bound: usize) -> bool;
}

/// The default checker: re-evaluate the restricted formula by brute force
/// over X'_j = X_j intersected with { x | x < bound }.
pub struct BruteForceChecker;

impl PrefixChecker for BruteForceChecker {
    fn label(&self) -> &'static str {
        "slow-reference"
    }

    fn none_below(&self, inst: &FoModelInstance, prefix: &[usize], bound: usize) -> bool {
        let level = prefix.len();
        let mut assignment = prefix.to_vec();
        let restricted: Vec<usize> = inst.domains[level]
            .iter()
            .copied()
            .take_while(|&v| v < bound)
            .collect();
        !restricted.iter().any(|&z| {
            assignment.push(z);
            let r = eval_from(inst, level + 1, &mut assignment);
            assignment.pop();
            r
        })
    }
}

static BRUTE_FORCE: BruteForceChecker = BruteForceChecker;

pub fn checker_for(label: &str) -> Option<&'static dyn PrefixChecker> {
    match label {
        "slow-reference" => Some(&BRUTE_FORCE),
        _ => None,
    }
}

pub fn prove(inst: &FoModelInstance, _rng: &mut RandomStream) -> Result<Vec<u8>> {
    let mut kv = KvLines::new();
    match lex_first_assignment(inst) {
        Some(a) => kv.push("solution", join_ints(&a)),
        None => kv.push("solution", "none"),
    }
    kv.push("checker", BRUTE_FORCE.label());
    Ok(kv.render().into_bytes())
}

pub fn verify(inst: &FoModelInstance, message: &[u8], _rng: &mut RandomStream) -> ProtocolOutcome {
    let text = match std::str::from_utf8(message) {
        Ok(t) => t,
        Err(_) => return ProtocolOutcome::bot("malformed-utf8"),
    };
    let kv = match KvLines::parse(text) {
        Ok(kv) => kv,
        Err(_) => return ProtocolOutcome::bot("malformed-message"),
    };
    let solution = match kv.get("solution") {
        Some(s) => s,
        None => return ProtocolOutcome::bot("missing-solution"),
    };
    let checker = match kv.get("checker").and_then(checker_for) {
        Some(c) => c,
        None => return ProtocolOutcome::bot("unknown-checker"),
    };
    let block = inst.leading_existentials();

    if solution == "none" {
        // The whole formula starts existentially; "no solution" means the
        // first existential has no viable value at all.
        return if checker.none_below(inst, &[], usize::MAX) {
            ProtocolOutcome::bot("no-solution")
        } else {
            ProtocolOutcome::bot("formula-satisfiable")
        };
    }

    let assignment = match parse_usize_list(solution) {
        Ok(v) if v.len() == block => v,
        _ => return ProtocolOutcome::bot("malformed-solution"),
    };
    for (j, &v) in assignment.iter().enumerate() {
        if !inst.domains[j].contains(&v) {
            return ProtocolOutcome::bot("solution-out-of-domain");
        }
    }
    let mut work = assignment.clone();
    if !eval_from(inst, block, &mut work) {
        return ProtocolOutcome::bot("assignment-fails");
    }
    for j in 0..block {
        if !checker.none_below(inst, &assignment[..j], assignment[j]) {
            return ProtocolOutcome::bot("prefix-not-minimal");
        }
    }
    ProtocolOutcome::canonical(join_ints(&assignment))
}

// ---- formula text form ----

pub fn render_formula(f: &Formula) -> String {
    let mut out = String::new();
    for (i, q) in f.prefix.iter().enumerate() {
        out.push_str(match q {
            Quant::Exists => "E",
            Quant::Forall => "A",
        });
        out.push_str(&format!(" x{} ", i + 1));
    }
    out.push_str(": ");
    out.push_str(&render_matrix(&f.matrix));
    out
}

fn render_matrix(m: &MatrixExpr) -> String {
    match m {
        MatrixExpr::And(a, b) => format!("({} & {})", render_matrix(a), render_matrix(b)),
        MatrixExpr::Or(a, b) => format!("({} | {})", render_matrix(a), render_matrix(b)),
        MatrixExpr::Not(a) => format!("!{}", render_matrix(a)),
        MatrixExpr::Edge(a, b) => format!("edge x{} x{}", a + 1, b + 1),
        MatrixExpr::Eq(a, b) => format!("x{} = x{}", a + 1, b + 1),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Ident(String),
    LParen,
    RParen,
    Not,
    And,
    Or,
    Eq,
    Colon,
}

fn tokenize(s: &str) -> Result<Vec<Token>> {
    let mut tokens = Vec::new();
    let mut chars = s.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            ' ' | '\t' => {
                chars.next();
            }
            '(' => {
                chars.next();
                tokens.push(Token::LParen);
            }
            ')' => {
                chars.next();
                tokens.push(Token::RParen);
            }
            '!' => {
                chars.next();
                tokens.push(Token::Not);
            }
            '&' => {
                chars.next();
                tokens.push(Token::And);
            }
            '|' => {
                chars.next();
                tokens.push(Token::Or);
            }
            '=' => {
                chars.next();
                tokens.push(Token::Eq);
            }
            ':' => {
                chars.next();
                tokens.push(Token::Colon);
            }
            c if c.is_ascii_alphanumeric() => {
                let mut ident = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_ascii_alphanumeric() {
                        ident.push(c);
                        chars.next();
                    } else {
                        break;
                    }
                }
                tokens.push(Token::Ident(ident));
            }
            other => return Err(Error::parse(format!("unexpected character `{other}`"))),
        }
    }
    Ok(tokens)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    k: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn var(&mut self) -> Result<usize> {
        match self.next() {
            Some(Token::Ident(name)) => {
                let idx: usize = name
                    .strip_prefix('x')
                    .and_then(|d| d.parse().ok())
                    .ok_or_else(|| Error::parse(format!("expected a variable, got `{name}`")))?;
                if idx == 0 || idx > self.k {
                    return Err(Error::parse(format!("variable x{idx} not declared")));
                }
                Ok(idx - 1)
            }
            other => Err(Error::parse(format!("expected a variable, got {other:?}"))),
        }
    }

    fn or_expr(&mut self) -> Result<MatrixExpr> {
        let mut left = self.and_expr()?;
        while self.peek() == Some(&Token::Or) {
            self.next();
            let right = self.and_expr()?;
            left = MatrixExpr::Or(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn and_expr(&mut self) -> Result<MatrixExpr> {
        let mut left = self.unary()?;
        while self.peek() == Some(&Token::And) {
            self.next();
            let right = self.unary()?;
            left = MatrixExpr::And(Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<MatrixExpr> {
        match self.peek() {
            Some(Token::Not) => {
                self.next();
                Ok(MatrixExpr::Not(Box::new(self.unary()?)))
            }
            Some(Token::LParen) => {
                self.next();
                let e = self.or_expr()?;
                match self.next() {
                    Some(Token::RParen) => Ok(e),
                    _ => Err(Error::parse("missing `)`")),
                }
            }
            Some(Token::Ident(name)) if name == "edge" => {
                self.next();
                let a = self.var()?;
                let b = self.var()?;
                Ok(MatrixExpr::Edge(a, b))
            }
            Some(Token::Ident(_)) => {
                let a = self.var()?;
                match self.next() {
                    Some(Token::Eq) => {}
                    _ => return Err(Error::parse("expected `=` in equality atom")),
                }
                let b = self.var()?;
                Ok(MatrixExpr::Eq(a, b))
            }
            other => Err(Error::parse(format!("unexpected token {other:?}"))),
        }
    }
}

/// Parses `E x1 A x2 : (edge x1 x2 & !edge x2 x1)` prefix notation.
/// Variables must be named x1..xk in prefix order.
pub fn parse_formula(s: &str) -> Result<Formula> {
    let tokens = tokenize(s)?;
    let colon = tokens
        .iter()
        .position(|t| *t == Token::Colon)
        .ok_or_else(|| Error::parse("formula needs a `:` between prefix and matrix"))?;
    let mut prefix = Vec::new();
    let mut it = tokens[..colon].iter();
    let mut var_count = 0usize;
    while let Some(tok) = it.next() {
        let q = match tok {
            Token::Ident(s) if s == "E" => Quant::Exists,
            Token::Ident(s) if s == "A" => Quant::Forall,
            other => return Err(Error::parse(format!("expected quantifier, got {other:?}"))),
        };
        var_count += 1;
        match it.next() {
            Some(Token::Ident(name)) if *name == format!("x{var_count}") => {}
            other => {
                return Err(Error::parse(format!(
                    "expected variable x{var_count} after quantifier, got {other:?}"
                )))
            }
        }
        prefix.push(q);
    }
    if prefix.is_empty() {
        return Err(Error::parse("formula needs at least one quantifier"));
    }
    let mut parser = Parser {
        tokens: tokens[colon + 1..].to_vec(),
        pos: 0,
        k: prefix.len(),
    };
    let matrix = parser.or_expr()?;
    if parser.pos != parser.tokens.len() {
        return Err(Error::parse("trailing tokens after formula matrix"));
    }
    Ok(Formula { prefix, matrix })
}

//! Width-5 permutation branching programs for fan-in-2 formulas.
//!
//! Formulas are written in prefix form: `(and e1 e2)`, `(or e1 e2)`,
//! `(not e)`, variables `x1`, `x2`, ... and the constants `0` and `1`.

use std::fmt;
use std::sync::OnceLock;

use crate::bp::{BranchingProgram, Edge};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    Const(bool),
    /// 1-based variable index.
    Var(usize),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
}

impl Formula {
    /// Longest root-to-leaf edge count.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Const(_) | Formula::Var(_) => 0,
            Formula::Not(f) => 1 + f.depth(),
            Formula::And(l, r) | Formula::Or(l, r) => 1 + l.depth().max(r.depth()),
        }
    }

    /// Largest variable index, 0 for closed formulas.
    pub fn num_vars(&self) -> usize {
        match self {
            Formula::Const(_) => 0,
            Formula::Var(i) => *i,
            Formula::Not(f) => f.num_vars(),
            Formula::And(l, r) | Formula::Or(l, r) => l.num_vars().max(r.num_vars()),
        }
    }

    /// Value under `asg`, where `asg[i - 1]` is variable `i`.
    pub fn eval(&self, asg: &[bool]) -> bool {
        match self {
            Formula::Const(c) => *c,
            Formula::Var(i) => asg[*i - 1],
            Formula::Not(f) => !f.eval(asg),
            Formula::And(l, r) => l.eval(asg) && r.eval(asg),
            Formula::Or(l, r) => l.eval(asg) || r.eval(asg),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Const(c) => write!(f, "{}", *c as u8),
            Formula::Var(i) => write!(f, "x{i}"),
            Formula::Not(e) => write!(f, "(not {e})"),
            Formula::And(l, r) => write!(f, "(and {l} {r})"),
            Formula::Or(l, r) => write!(f, "(or {l} {r})"),
        }
    }
}

pub fn formula_depth(f: &Formula) -> usize {
    f.depth()
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Token {
    Open,
    Close,
    Atom(String),
}

fn tokenize(text: &str) -> Vec<(usize, Token)> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(pos, c)) = chars.peek() {
        match c {
            '(' => {
                out.push((pos, Token::Open));
                chars.next();
            }
            ')' => {
                out.push((pos, Token::Close));
                chars.next();
            }
            c if c.is_whitespace() => {
                chars.next();
            }
            _ => {
                let mut atom = String::new();
                while let Some(&(_, c)) = chars.peek() {
                    if c == '(' || c == ')' || c.is_whitespace() {
                        break;
                    }
                    atom.push(c);
                    chars.next();
                }
                out.push((pos, Token::Atom(atom)));
            }
        }
    }
    out
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    next: usize,
    end: usize,
}

fn syntax<T>(pos: usize, msg: impl Into<String>) -> Result<T> {
    Err(Error::Syntax { pos, msg: msg.into() })
}

impl Parser {
    fn peek_pos(&self) -> usize {
        self.tokens.get(self.next).map_or(self.end, |t| t.0)
    }

    fn bump(&mut self) -> Option<(usize, Token)> {
        let t = self.tokens.get(self.next).cloned();
        self.next += 1;
        t
    }

    fn expr(&mut self) -> Result<Formula> {
        match self.bump() {
            None => syntax(self.end, "unexpected end of input"),
            Some((pos, Token::Close)) => syntax(pos, "unexpected ')'"),
            Some((pos, Token::Atom(a))) => leaf(pos, &a),
            Some((pos, Token::Open)) => {
                let op = match self.bump() {
                    Some((_, Token::Atom(op))) => op,
                    _ => return syntax(pos + 1, "expected an operator after '('"),
                };
                let mut args = Vec::new();
                loop {
                    match self.tokens.get(self.next) {
                        Some((_, Token::Close)) => {
                            self.next += 1;
                            break;
                        }
                        None => return syntax(self.end, format!("unclosed '(' opened at {pos}")),
                        _ => args.push(self.expr()?),
                    }
                }
                let arity = match op.as_str() {
                    "not" => 1,
                    "and" | "or" => 2,
                    _ => return syntax(pos + 1, format!("unknown operator '{op}'")),
                };
                if args.len() != arity {
                    return syntax(pos, format!("'{op}' takes {arity} argument(s), got {}", args.len()));
                }
                let mut args = args.into_iter().map(Box::new);
                let first = args.next().expect("arity checked");
                Ok(match op.as_str() {
                    "not" => Formula::Not(first),
                    "and" => Formula::And(first, args.next().expect("arity checked")),
                    _ => Formula::Or(first, args.next().expect("arity checked")),
                })
            }
        }
    }
}

fn leaf(pos: usize, atom: &str) -> Result<Formula> {
    match atom {
        "0" => Ok(Formula::Const(false)),
        "1" => Ok(Formula::Const(true)),
        _ => match atom.strip_prefix('x').map(str::parse::<usize>) {
            Some(Ok(i)) if i >= 1 => Ok(Formula::Var(i)),
            _ => syntax(pos, format!("expected a variable x<i> with i >= 1 or a constant, got '{atom}'")),
        },
    }
}

/// Parses one formula; byte offsets in errors are 0-based.
pub fn parse_formula(text: &str) -> Result<Formula> {
    let mut parser = Parser { tokens: tokenize(text), next: 0, end: text.len() };
    let f = parser.expr()?;
    if parser.next < parser.tokens.len() {
        return syntax(parser.peek_pos(), "trailing input after the formula");
    }
    Ok(f)
}

/// A permutation of `0..5`; `p[j]` is the image of `j`.
type Perm = [u8; 5];

const IDENTITY: Perm = [0, 1, 2, 3, 4];

/// `p` followed by `q`.
fn then(p: Perm, q: Perm) -> Perm {
    p.map(|j| q[j as usize])
}

fn inverse(p: Perm) -> Perm {
    let mut inv = IDENTITY;
    for (j, &pj) in p.iter().enumerate() {
        inv[pj as usize] = j as u8;
    }
    inv
}

fn is_five_cycle(p: Perm) -> bool {
    let mut j = 0u8;
    for step in 1..=5 {
        j = p[j as usize];
        if j == 0 {
            return step == 5;
        }
    }
    false
}

fn all_perms() -> Vec<Perm> {
    fn extend(prefix: &mut Vec<u8>, out: &mut Vec<Perm>) {
        if prefix.len() == 5 {
            out.push(prefix.as_slice().try_into().expect("length 5"));
            return;
        }
        for v in 0..5u8 {
            if !prefix.contains(&v) {
                prefix.push(v);
                extend(prefix, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::with_capacity(120);
    extend(&mut Vec::new(), &mut out);
    out
}

struct Cycles {
    /// The fixed target cycle and a pair of cycles whose commutator is it.
    target: Perm,
    alpha: Perm,
    beta: Perm,
    perms: Vec<Perm>,
}

fn cycles() -> &'static Cycles {
    static CYCLES: OnceLock<Cycles> = OnceLock::new();
    CYCLES.get_or_init(|| {
        let perms = all_perms();
        let five: Vec<Perm> = perms.iter().copied().filter(|&p| is_five_cycle(p)).collect();
        let alpha = [1, 2, 3, 4, 0];
        let beta = five
            .iter()
            .copied()
            .find(|&b| is_five_cycle(commutator(alpha, b)))
            .expect("S5 has 5-cycles with a 5-cycle commutator");
        Cycles { target: commutator(alpha, beta), alpha, beta, perms }
    })
}

fn commutator(a: Perm, b: Perm) -> Perm {
    then(then(then(a, b), inverse(a)), inverse(b))
}

/// `theta` with `theta^-1 from theta = to`, for 5-cycles `from` and `to`.
fn conjugator(from: Perm, to: Perm) -> Perm {
    cycles()
        .perms
        .iter()
        .copied()
        .find(|&th| then(then(inverse(th), from), th) == to)
        .expect("5-cycles are conjugate in S5")
}

fn conjugate(p: Perm, theta: Perm) -> Perm {
    then(then(inverse(theta), p), theta)
}

#[derive(Debug, Clone, Copy)]
struct Instruction {
    var: usize,
    on_false: Perm,
    on_true: Perm,
}

/// Instructions whose product is `target` when `f` holds and the identity
/// otherwise; `target` must be a 5-cycle.
fn group_program(f: &Formula, target: Perm) -> Vec<Instruction> {
    match f {
        Formula::Const(c) => {
            let p = if *c { target } else { IDENTITY };
            vec![Instruction { var: 1, on_false: p, on_true: p }]
        }
        Formula::Var(i) => vec![Instruction { var: *i, on_false: IDENTITY, on_true: target }],
        Formula::Not(g) => {
            let mut prog = group_program(g, inverse(target));
            let first = &mut prog[0];
            first.on_false = then(target, first.on_false);
            first.on_true = then(target, first.on_true);
            prog
        }
        Formula::And(l, r) => {
            let c = cycles();
            let theta = conjugator(c.target, target);
            let a = conjugate(c.alpha, theta);
            let b = conjugate(c.beta, theta);
            let mut prog = group_program(l, a);
            prog.extend(group_program(r, b));
            prog.extend(group_program(l, inverse(a)));
            prog.extend(group_program(r, inverse(b)));
            prog
        }
        Formula::Or(l, r) => {
            let rewritten = Formula::Not(Box::new(Formula::And(
                Box::new(Formula::Not(l.clone())),
                Box::new(Formula::Not(r.clone())),
            )));
            group_program(&rewritten, target)
        }
    }
}

/// Compiles `f` into a width-5 program accepting exactly the satisfying
/// assignments. The instruction count is padded with identity layers up to
/// a power of two, which stays within `4^depth`.
pub fn to_width5_bp(f: &Formula) -> Result<BranchingProgram> {
    let n = f.num_vars().max(1);
    // The complement maps node 1 back to itself exactly when f holds.
    let negated = Formula::Not(Box::new(f.clone()));
    let mut prog = group_program(&negated, cycles().target);
    let padded = prog.len().next_power_of_two();
    prog.resize(padded, Instruction { var: 1, on_false: IDENTITY, on_true: IDENTITY });
    let mut edges = Vec::with_capacity(prog.len() * 10);
    for (i, ins) in prog.iter().enumerate() {
        for (bit, perm) in [(false, ins.on_false), (true, ins.on_true)] {
            for j in 0..5u8 {
                edges.push(Edge { layer: i + 1, from: j as usize + 1, to: perm[j as usize] as usize + 1, bit });
            }
        }
    }
    BranchingProgram::new(n, prog.len() + 1, 5, prog.iter().map(|i| i.var).collect(), edges)
}

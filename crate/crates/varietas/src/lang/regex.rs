//! A minimal regex dialect compiled to canonical DFAs.
//!
//! Grammar: literals, concatenation, `|`, `*`, `()`, plus `ε` for the empty
//! word and `∅` for the empty language. There is deliberately no complement,
//! and union appears only as regex alternation during construction.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::LangError;

use super::dfa::Dfa;
use super::Alphabet;

#[derive(Debug, Clone)]
enum Ast {
    Empty,
    Epsilon,
    Literal(char),
    Concat(Box<Ast>, Box<Ast>),
    Alt(Box<Ast>, Box<Ast>),
    Star(Box<Ast>),
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    src: &'a str,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser {
            chars: src.chars().collect(),
            pos: 0,
            src,
        }
    }

    fn err(&self, msg: &str) -> LangError {
        let _ = self.src;
        LangError::RegexParse {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn parse(&mut self) -> Result<Ast, LangError> {
        if self.chars.is_empty() {
            return Err(self.err("empty pattern"));
        }
        let ast = self.alt()?;
        if self.pos != self.chars.len() {
            return Err(self.err("unexpected trailing input"));
        }
        Ok(ast)
    }

    fn alt(&mut self) -> Result<Ast, LangError> {
        let mut node = self.concat()?;
        while self.peek() == Some('|') {
            self.pos += 1;
            let rhs = self.concat()?;
            node = Ast::Alt(Box::new(node), Box::new(rhs));
        }
        Ok(node)
    }

    fn concat(&mut self) -> Result<Ast, LangError> {
        let mut node = self.star()?;
        while matches!(self.peek(), Some(c) if c != '|' && c != ')') {
            let rhs = self.star()?;
            node = Ast::Concat(Box::new(node), Box::new(rhs));
        }
        Ok(node)
    }

    fn star(&mut self) -> Result<Ast, LangError> {
        let mut node = self.atom()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            node = Ast::Star(Box::new(node));
        }
        Ok(node)
    }

    fn atom(&mut self) -> Result<Ast, LangError> {
        match self.peek() {
            None => Err(self.err("expected an atom")),
            Some('(') => {
                self.pos += 1;
                let inner = self.alt()?;
                if self.peek() != Some(')') {
                    return Err(self.err("unclosed group"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(')') => Err(self.err("unmatched closing parenthesis")),
            Some('*') => Err(self.err("nothing to repeat")),
            Some('|') => Err(self.err("empty alternative")),
            Some('ε') => {
                self.pos += 1;
                Ok(Ast::Epsilon)
            }
            Some('∅') => {
                self.pos += 1;
                Ok(Ast::Empty)
            }
            Some(c) if c == Alphabet::LEFT_MARKER || c == Alphabet::RIGHT_MARKER => {
                Err(self.err("end markers cannot appear in patterns"))
            }
            Some(c) => {
                self.pos += 1;
                Ok(Ast::Literal(c))
            }
        }
    }
}

fn literals(ast: &Ast, acc: &mut BTreeSet<char>) {
    match ast {
        Ast::Empty | Ast::Epsilon => {}
        Ast::Literal(c) => {
            acc.insert(*c);
        }
        Ast::Concat(l, r) | Ast::Alt(l, r) => {
            literals(l, acc);
            literals(r, acc);
        }
        Ast::Star(inner) => literals(inner, acc),
    }
}

// Thompson construction: states with ε-edges and labeled edges.
struct Nfa {
    eps: Vec<Vec<usize>>,
    edges: Vec<Vec<(char, usize)>>,
    start: usize,
    accept: usize,
}

fn build_nfa(ast: &Ast) -> Nfa {
    fn new_state(eps: &mut Vec<Vec<usize>>, edges: &mut Vec<Vec<(char, usize)>>) -> usize {
        eps.push(Vec::new());
        edges.push(Vec::new());
        eps.len() - 1
    }
    fn go(
        ast: &Ast,
        eps: &mut Vec<Vec<usize>>,
        edges: &mut Vec<Vec<(char, usize)>>,
    ) -> (usize, usize) {
        match ast {
            Ast::Empty => {
                let s = new_state(eps, edges);
                let t = new_state(eps, edges);
                (s, t)
            }
            Ast::Epsilon => {
                let s = new_state(eps, edges);
                let t = new_state(eps, edges);
                eps[s].push(t);
                (s, t)
            }
            Ast::Literal(c) => {
                let s = new_state(eps, edges);
                let t = new_state(eps, edges);
                edges[s].push((*c, t));
                (s, t)
            }
            Ast::Concat(l, r) => {
                let (ls, lt) = go(l, eps, edges);
                let (rs, rt) = go(r, eps, edges);
                eps[lt].push(rs);
                (ls, rt)
            }
            Ast::Alt(l, r) => {
                let (ls, lt) = go(l, eps, edges);
                let (rs, rt) = go(r, eps, edges);
                let s = new_state(eps, edges);
                let t = new_state(eps, edges);
                eps[s].push(ls);
                eps[s].push(rs);
                eps[lt].push(t);
                eps[rt].push(t);
                (s, t)
            }
            Ast::Star(inner) => {
                let (is, it) = go(inner, eps, edges);
                let s = new_state(eps, edges);
                let t = new_state(eps, edges);
                eps[s].push(is);
                eps[s].push(t);
                eps[it].push(is);
                eps[it].push(t);
                (s, t)
            }
        }
    }
    let mut eps = Vec::new();
    let mut edges = Vec::new();
    let (start, accept) = go(ast, &mut eps, &mut edges);
    Nfa {
        eps,
        edges,
        start,
        accept,
    }
}

fn eps_closure(nfa: &Nfa, set: &BTreeSet<usize>) -> BTreeSet<usize> {
    let mut out = set.clone();
    let mut stack: Vec<usize> = set.iter().copied().collect();
    while let Some(q) = stack.pop() {
        for &t in &nfa.eps[q] {
            if out.insert(t) {
                stack.push(t);
            }
        }
    }
    out
}

/// Compiles a pattern over the given alphabet to a complete (not yet minimal) DFA.
pub fn compile(pattern: &str, alphabet: Option<Alphabet>) -> Result<Dfa, LangError> {
    let ast = Parser::new(pattern).parse()?;
    let mut lits = BTreeSet::new();
    literals(&ast, &mut lits);
    let alphabet = match alphabet {
        Some(sigma) => {
            for c in &lits {
                sigma.position(*c)?;
            }
            sigma
        }
        None => {
            let symbols: String = lits.iter().collect();
            if symbols.is_empty() {
                // ε or ∅ alone: a one-letter alphabet keeps every language operation total
                Alphabet::new("a")?
            } else {
                Alphabet::new(&symbols)?
            }
        }
    };

    let nfa = build_nfa(&ast);
    let start = eps_closure(&nfa, &BTreeSet::from([nfa.start]));
    let mut subsets: Vec<BTreeSet<usize>> = vec![start.clone()];
    let mut index: BTreeMap<BTreeSet<usize>, usize> = BTreeMap::new();
    index.insert(start, 0);
    let mut delta: Vec<Vec<usize>> = Vec::new();
    let mut frontier = 0;
    while frontier < subsets.len() {
        let current = subsets[frontier].clone();
        frontier += 1;
        let mut row = Vec::with_capacity(alphabet.len());
        for &c in alphabet.symbols() {
            let mut moved = BTreeSet::new();
            for &q in &current {
                for &(label, t) in &nfa.edges[q] {
                    if label == c {
                        moved.insert(t);
                    }
                }
            }
            let closed = eps_closure(&nfa, &moved);
            let next = *index.entry(closed.clone()).or_insert_with(|| {
                subsets.push(closed);
                subsets.len() - 1
            });
            row.push(next);
        }
        delta.push(row);
    }
    let finals = subsets.iter().map(|s| s.contains(&nfa.accept)).collect();
    Dfa::new(alphabet, subsets.len(), 0, delta, finals)
}

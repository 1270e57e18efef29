//! Universal sentences over words, checked exhaustively on Cayley balls.

use crate::ball::{explore, BallOptions};
use crate::error::{Error, Result};
use crate::group::{Element, MarkedGroup};
use crate::word::{parse_expr, Word};
use rayon::prelude::*;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Formula {
    /// index into Sentence::atoms; true iff the word evaluates to 1
    Atom(usize),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sentence {
    pub vars: Vec<String>,
    pub atoms: Vec<Word>,
    pub formula: Formula,
}

const WORD_LIMIT: usize = 100_000;

fn identifiers(text: &str) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    let cs: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < cs.len() {
        if cs[i].is_ascii_alphabetic() {
            let mut s = cs[i].to_string();
            i += 1;
            while i < cs.len() && cs[i].is_ascii_digit() {
                s.push(cs[i]);
                i += 1;
            }
            if !out.contains(&s) {
                out.push(s);
            }
        } else {
            i += 1;
        }
    }
    out
}

fn default_vars(body: &str) -> Vec<String> {
    let ids = identifiers(body);
    let xyz = ["x", "y", "z"];
    if ids.iter().all(|s| xyz.contains(&s.as_str())) {
        let n = ids.iter().map(|s| xyz.iter().position(|x| x == s).unwrap() + 1).max().unwrap_or(0);
        return xyz[..n].iter().map(|s| s.to_string()).collect();
    }
    let idx: Option<Vec<usize>> = ids.iter().map(|s| s.strip_prefix('x').and_then(|r| r.parse().ok())).collect();
    if let Some(idx) = idx {
        if idx.iter().all(|&i| i >= 1) {
            let n = idx.into_iter().max().unwrap_or(0);
            return (1..=n).map(|i| format!("x{i}")).collect();
        }
    }
    ids
}

struct P<'a> {
    s: &'a [u8],
    pos: usize,
    vars: &'a [String],
    atoms: Vec<Word>,
}

impl P<'_> {
    fn skip(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, t: &str) -> bool {
        self.skip();
        if self.s[self.pos..].starts_with(t.as_bytes()) {
            self.pos += t.len();
            true
        } else {
            false
        }
    }

    fn err(&self, msg: &str) -> Error {
        Error::Syntax { pos: self.pos, msg: msg.into() }
    }

    fn implication(&mut self) -> Result<Formula> {
        let lhs = self.disj()?;
        if self.eat("=>") {
            let rhs = self.implication()?;
            return Ok(Formula::Implies(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn disj(&mut self) -> Result<Formula> {
        let mut f = self.conj()?;
        while self.eat("|") {
            f = Formula::Or(Box::new(f), Box::new(self.conj()?));
        }
        Ok(f)
    }

    fn conj(&mut self) -> Result<Formula> {
        let mut f = self.unary()?;
        while self.eat("&") {
            f = Formula::And(Box::new(f), Box::new(self.unary()?));
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<Formula> {
        self.skip();
        if self.pos < self.s.len() && self.s[self.pos] == b'!' && self.s.get(self.pos + 1) != Some(&b'=') {
            self.pos += 1;
            return Ok(Formula::Not(Box::new(self.unary()?)));
        }
        if self.pos < self.s.len() && self.s[self.pos] == b'(' {
            let close = self.matching(self.pos).ok_or_else(|| self.err("unbalanced parenthesis"))?;
            if contains_relation(&self.s[self.pos + 1..close]) {
                self.pos += 1;
                let f = self.implication()?;
                if !self.eat(")") {
                    return Err(self.err("expected ')'"));
                }
                return Ok(f);
            }
        }
        self.atom()
    }

    fn matching(&self, open: usize) -> Option<usize> {
        let mut depth = 0i32;
        for (i, &c) in self.s.iter().enumerate().skip(open) {
            match c {
                b'(' | b'[' => depth += 1,
                b')' | b']' => {
                    depth -= 1;
                    if depth == 0 {
                        return Some(i);
                    }
                }
                _ => {}
            }
        }
        None
    }

    fn atom(&mut self) -> Result<Formula> {
        self.skip();
        let start = self.pos;
        let mut depth = 0i32;
        let mut end = self.s.len();
        let mut i = start;
        while i < self.s.len() {
            let c = self.s[i];
            match c {
                b'(' | b'[' => depth += 1,
                b')' | b']' => {
                    if depth == 0 {
                        end = i;
                        break;
                    }
                    depth -= 1;
                }
                b'&' | b'|' if depth == 0 => {
                    end = i;
                    break;
                }
                b'=' if depth == 0 && self.s.get(i + 1) == Some(&b'>') => {
                    end = i;
                    break;
                }
                _ => {}
            }
            i += 1;
        }
        let text = std::str::from_utf8(&self.s[start..end]).unwrap();
        let (lhs, rhs, negate) = split_relation(text).ok_or_else(|| self.err("expected an atom 'u = v'"))?;
        let resolve = |n: &str| self.vars.iter().position(|v| v == n);
        let wrap = |e: Error| match e {
            Error::Syntax { pos, msg } => Error::Syntax { pos: start + pos, msg },
            other => other,
        };
        let u = parse_expr(lhs, &resolve).map_err(wrap)?.to_word(WORD_LIMIT)?;
        let v = parse_expr(rhs, &resolve).map_err(wrap)?.to_word(WORD_LIMIT)?;
        self.pos = end;
        self.atoms.push(u.mul(&v.inverse()));
        let a = Formula::Atom(self.atoms.len() - 1);
        Ok(if negate { Formula::Not(Box::new(a)) } else { a })
    }
}

fn contains_relation(s: &[u8]) -> bool {
    let mut depth = 0i32;
    for (i, &c) in s.iter().enumerate() {
        match c {
            b'(' | b'[' => depth += 1,
            b')' | b']' => depth -= 1,
            b'=' if depth == 0 && s.get(i + 1) != Some(&b'>') => return true,
            _ => {}
        }
    }
    false
}

fn split_relation(text: &str) -> Option<(&str, &str, bool)> {
    if let Some(i) = text.find("!=") {
        return Some((&text[..i], &text[i + 2..], true));
    }
    let i = text.find('=')?;
    Some((&text[..i], &text[i + 1..], false))
}

/// Grammar: ["forall" v1,..,vn ":"] formula; atoms "u = v" or "u != v"; connectives ! & | =>.
pub fn parse_sentence(text: &str) -> Result<Sentence> {
    let trimmed = text.trim_start();
    let offset = text.len() - trimmed.len();
    let (vars, body, base) = if let Some(rest) = trimmed.strip_prefix("forall") {
        let colon = rest.find(':').ok_or(Error::Syntax { pos: offset + 6, msg: "expected ':' after variables".into() })?;
        let vars: Vec<String> = rest[..colon].split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect();
        (vars, &rest[colon + 1..], offset + 6 + colon + 1)
    } else {
        (default_vars(trimmed), trimmed, offset)
    };
    if vars.is_empty() {
        return Err(Error::Syntax { pos: 0, msg: "sentence has no variables".into() });
    }
    let mut p = P { s: body.as_bytes(), pos: 0, vars: &vars, atoms: Vec::new() };
    let formula = p.implication().map_err(|e| match e {
        Error::Syntax { pos, msg } => Error::Syntax { pos: base + pos, msg },
        other => other,
    })?;
    p.skip();
    if p.pos != body.len() {
        return Err(Error::Syntax { pos: base + p.pos, msg: "unexpected trailing input".into() });
    }
    let atoms = p.atoms;
    Ok(Sentence { vars, atoms, formula })
}

impl Sentence {
    pub fn arity(&self) -> usize {
        self.vars.len()
    }

    pub fn eval(&self, atom: &dyn Fn(usize) -> bool) -> bool {
        fn go(f: &Formula, atom: &dyn Fn(usize) -> bool) -> bool {
            match f {
                Formula::Atom(i) => atom(*i),
                Formula::Not(a) => !go(a, atom),
                Formula::And(a, b) => go(a, atom) && go(b, atom),
                Formula::Or(a, b) => go(a, atom) || go(b, atom),
                Formula::Implies(a, b) => !go(a, atom) || go(b, atom),
            }
        }
        go(&self.formula, atom)
    }

    /// Evaluate on a concrete tuple of group elements.
    pub fn holds_at(&self, mg: &MarkedGroup, tuple: &[Element]) -> Result<bool> {
        let model = &*mg.model;
        let vals = self
            .atoms
            .iter()
            .map(|w| Ok(model.is_identity(&model.eval_word(w, tuple)?)))
            .collect::<Result<Vec<bool>>>()?;
        Ok(self.eval(&|i| vals[i]))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SentenceVerdict {
    /// bounded verdict: no tuple from the ball falsifies the sentence
    HoldsOnBall { radius: u32, tuples: u64 },
    /// falsifying tuple as words in the marking
    Witness { tuple: Vec<Word> },
}

pub const SENTENCE_TUPLE_CAP: u64 = 50_000_000;

pub fn evaluate_sentence_on_ball(mg: &MarkedGroup, s: &Sentence, rho: u32, opts: &BallOptions) -> Result<SentenceVerdict> {
    let b = explore(mg, rho, opts)?;
    let n = b.elements.len();
    let m = s.arity();
    let total = (n as u64).checked_pow(m as u32).filter(|&t| t <= SENTENCE_TUPLE_CAP);
    let total = total.ok_or_else(|| Error::Budget(format!("{n}^{m} tuples exceed {SENTENCE_TUPLE_CAP}")))?;
    let model = &*mg.model;
    let decode = |mut idx: u64| {
        let mut out = vec![0usize; m];
        for slot in out.iter_mut().rev() {
            *slot = (idx % n as u64) as usize;
            idx /= n as u64;
        }
        out
    };
    let hit = (0..total).into_par_iter().find_first(|&idx| {
        let t: Vec<Element> = decode(idx).into_iter().map(|i| b.elements[i].clone()).collect();
        let cache: Vec<std::cell::OnceCell<bool>> = (0..s.atoms.len()).map(|_| std::cell::OnceCell::new()).collect();
        let atom = |i: usize| *cache[i].get_or_init(|| model.is_identity(&model.eval_word(&s.atoms[i], &t).expect("arity")));
        !s.eval(&atom)
    });
    Ok(match hit {
        Some(idx) => SentenceVerdict::Witness { tuple: decode(idx).into_iter().map(|i| b.word_of(i)).collect() },
        None => SentenceVerdict::HoldsOnBall { radius: rho, tuples: total },
    })
}

/// [x,y]=1 & [y,z]=1 => [x,z]=1
pub const COMMUTATIVE_TRANSITIVITY: &str = "forall x,y,z: y != 1 & [x,y]=1 & [y,z]=1 => [x,z]=1";

/// Holds in N_{2,2} (centralizers of noncentral elements are abelian) but not in N_{2,2} x N_{2,2}.
pub const N22_SENTENCE: &str = "forall a,b,c,z: ([a,b]=1 & [a,c]=1 & [b,c]!=1) => [a,z]=1";

//! Reduced words, word expressions and the word grammar.

use crate::error::{Error, Result};
use crate::int::{to_u32, Int};
use num_traits::{One, Signed, Zero};
use std::fmt::Write as _;

/// Freely reduced word; letter `i > 0` is generator `i`, `-i` its inverse.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word {
    pub letters: Vec<i32>,
}

impl Word {
    pub fn new(letters: impl IntoIterator<Item = i32>) -> Word {
        let mut out: Vec<i32> = Vec::new();
        for l in letters {
            assert!(l != 0, "zero letter");
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word { letters: out }
    }

    pub fn empty() -> Word {
        Word::default()
    }

    pub fn gen(i: usize) -> Word {
        Word { letters: vec![i as i32] }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn arity(&self) -> usize {
        self.letters.iter().map(|l| l.unsigned_abs() as usize).max().unwrap_or(0)
    }

    pub fn inverse(&self) -> Word {
        Word { letters: self.letters.iter().rev().map(|l| -l).collect() }
    }

    pub fn mul(&self, other: &Word) -> Word {
        Word::new(self.letters.iter().chain(other.letters.iter()).copied())
    }

    /// u^-1 v^-1 u v
    pub fn commutator(u: &Word, v: &Word) -> Word {
        u.inverse().mul(&v.inverse()).mul(u).mul(v)
    }

    /// a^-1 w a
    pub fn conjugate(&self, a: &Word) -> Word {
        a.inverse().mul(self).mul(a)
    }

    /// Returns (u, c) with self = u c u^-1 and c cyclically reduced.
    pub fn cyclic_split(&self) -> (Word, Word) {
        let l = &self.letters;
        let mut i = 0;
        let n = l.len();
        while i < n / 2 && l[i] == -l[n - 1 - i] {
            i += 1;
        }
        (Word { letters: l[..i].to_vec() }, Word { letters: l[i..n - i].to_vec() })
    }

    pub fn cyclically_reduced(&self) -> Word {
        self.cyclic_split().1
    }

    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let (u, c) = base.cyclic_split();
        let mut letters = u.letters.clone();
        for _ in 0..n.unsigned_abs() {
            letters.extend_from_slice(&c.letters);
        }
        letters.extend(u.inverse().letters);
        Word::new(letters)
    }

    /// Substitute a word for each generator.
    pub fn substitute(&self, subs: &[Word]) -> Word {
        let mut out = Vec::new();
        for &l in &self.letters {
            let w = &subs[l.unsigned_abs() as usize - 1];
            if l > 0 {
                out.extend_from_slice(&w.letters);
            } else {
                out.extend(w.inverse().letters);
            }
        }
        Word::new(out)
    }

    pub fn render(&self, names: &[String]) -> String {
        if self.letters.is_empty() {
            return "1".to_string();
        }
        let mut s = String::new();
        let mut i = 0;
        while i < self.letters.len() {
            let l = self.letters[i];
            let mut j = i;
            while j < self.letters.len() && self.letters[j] == l {
                j += 1;
            }
            let name = names
                .get(l.unsigned_abs() as usize - 1)
                .cloned()
                .unwrap_or_else(|| format!("g{}", l.unsigned_abs()));
            let e = (j - i) as i64 * l.signum() as i64;
            if e == 1 {
                s.push_str(&name);
            } else {
                let _ = write!(s, "{name}^{e}");
            }
            i = j;
        }
        s
    }
}

/// Position of a letter in the fixed label order g1..gk, g1^-1..gk^-1.
pub fn label_index(l: i32, k: usize) -> usize {
    if l > 0 {
        l as usize - 1
    } else {
        k + (-l) as usize - 1
    }
}

pub fn label_letter(j: usize, k: usize) -> i32 {
    if j < k {
        j as i32 + 1
    } else {
        -((j - k) as i32 + 1)
    }
}

/// Length-lex comparison in label order.
pub fn shortlex_cmp(a: &Word, b: &Word, k: usize) -> std::cmp::Ordering {
    a.len().cmp(&b.len()).then_with(|| {
        let ka: Vec<usize> = a.letters.iter().map(|&l| label_index(l, k)).collect();
        let kb: Vec<usize> = b.letters.iter().map(|&l| label_index(l, k)).collect();
        ka.cmp(&kb)
    })
}

/// Word expression over generator indices (0-based); powers keep their exponent symbolic.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    One,
    Gen(usize),
    Prod(Vec<Expr>),
    Pow(Box<Expr>, Int),
    Inv(Box<Expr>),
    Comm(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn gen(i: usize) -> Expr {
        Expr::Gen(i)
    }

    pub fn pow(e: Expr, n: impl Into<Int>) -> Expr {
        Expr::Pow(Box::new(e), n.into())
    }

    pub fn inv(e: Expr) -> Expr {
        Expr::Inv(Box::new(e))
    }

    pub fn comm(a: Expr, b: Expr) -> Expr {
        Expr::Comm(Box::new(a), Box::new(b))
    }

    pub fn from_word(w: &Word) -> Expr {
        if w.is_empty() {
            return Expr::One;
        }
        let mut parts = Vec::new();
        let mut i = 0;
        while i < w.letters.len() {
            let l = w.letters[i];
            let mut j = i;
            while j < w.letters.len() && w.letters[j] == l {
                j += 1;
            }
            let g = Expr::Gen(l.unsigned_abs() as usize - 1);
            let e = (j - i) as i64 * l.signum() as i64;
            parts.push(if e == 1 { g } else { Expr::pow(g, e) });
            i = j;
        }
        if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Expr::Prod(parts)
        }
    }

    /// Largest generator index used, plus one.
    pub fn arity(&self) -> usize {
        match self {
            Expr::One => 0,
            Expr::Gen(i) => i + 1,
            Expr::Prod(v) => v.iter().map(|e| e.arity()).max().unwrap_or(0),
            Expr::Pow(e, _) | Expr::Inv(e) => e.arity(),
            Expr::Comm(a, b) => a.arity().max(b.arity()),
        }
    }

    /// Expand to a reduced word, failing if any intermediate exceeds `limit` letters.
    pub fn to_word(&self, limit: usize) -> Result<Word> {
        let w = match self {
            Expr::One => Word::empty(),
            Expr::Gen(i) => Word::gen(i + 1),
            Expr::Prod(v) => {
                let mut acc = Word::empty();
                for e in v {
                    acc = acc.mul(&e.to_word(limit)?);
                    check_len(&acc, limit)?;
                }
                acc
            }
            Expr::Pow(e, n) => {
                let base = e.to_word(limit)?;
                let (u, c) = base.cyclic_split();
                let mag = n.abs();
                if !c.is_empty() {
                    let total = Int::from(c.len()) * &mag + 2 * u.len();
                    if total > Int::from(limit) {
                        return Err(Error::Param(format!("expanded word exceeds {limit} letters")));
                    }
                }
                if c.is_empty() {
                    Word::empty()
                } else {
                    let k = i64::try_from(n.clone()).map_err(|_| Error::Param("exponent".into()))?;
                    base.pow(k)
                }
            }
            Expr::Inv(e) => e.to_word(limit)?.inverse(),
            Expr::Comm(a, b) => Word::commutator(&a.to_word(limit)?, &b.to_word(limit)?),
        };
        check_len(&w, limit)?;
        Ok(w)
    }

    /// Letter count of the unreduced expansion.
    pub fn length(&self) -> Int {
        match self {
            Expr::One => Int::zero(),
            Expr::Gen(_) => Int::one(),
            Expr::Prod(v) => v.iter().map(|e| e.length()).sum(),
            Expr::Pow(e, n) => e.length() * n.abs(),
            Expr::Inv(e) => e.length(),
            Expr::Comm(a, b) => (a.length() + b.length()) * 2,
        }
    }

    /// Renumber generators by adding `by`.
    pub fn shift(&self, by: usize) -> Expr {
        match self {
            Expr::One => Expr::One,
            Expr::Gen(i) => Expr::Gen(i + by),
            Expr::Prod(v) => Expr::Prod(v.iter().map(|e| e.shift(by)).collect()),
            Expr::Pow(e, n) => Expr::Pow(Box::new(e.shift(by)), n.clone()),
            Expr::Inv(e) => Expr::inv(e.shift(by)),
            Expr::Comm(a, b) => Expr::comm(a.shift(by), b.shift(by)),
        }
    }

    /// Replace generator i by subs[i].
    pub fn substitute(&self, subs: &[Expr]) -> Expr {
        match self {
            Expr::One => Expr::One,
            Expr::Gen(i) => subs[*i].clone(),
            Expr::Prod(v) => Expr::Prod(v.iter().map(|e| e.substitute(subs)).collect()),
            Expr::Pow(e, n) => Expr::Pow(Box::new(e.substitute(subs)), n.clone()),
            Expr::Inv(e) => Expr::inv(e.substitute(subs)),
            Expr::Comm(a, b) => Expr::comm(a.substitute(subs), b.substitute(subs)),
        }
    }

    /// Same element, written without trivial factors: drops 1 and x^0, unwraps x^1 and singleton products.
    pub fn simplify(&self) -> Expr {
        match self {
            Expr::One | Expr::Gen(_) => self.clone(),
            Expr::Prod(v) => {
                let mut out = Vec::new();
                for e in v {
                    match e.simplify() {
                        Expr::One => {}
                        Expr::Prod(inner) => out.extend(inner),
                        x => out.push(x),
                    }
                }
                match out.len() {
                    0 => Expr::One,
                    1 => out.pop().unwrap(),
                    _ => Expr::Prod(out),
                }
            }
            Expr::Pow(e, n) => match e.simplify() {
                Expr::One => Expr::One,
                _ if n.is_zero() => Expr::One,
                x if n.is_one() => x,
                Expr::Pow(b, m) => Expr::Pow(b, m * n),
                x => Expr::Pow(Box::new(x), n.clone()),
            },
            Expr::Inv(e) => match e.simplify() {
                Expr::One => Expr::One,
                Expr::Gen(i) => Expr::pow(Expr::Gen(i), -1),
                Expr::Pow(b, m) => Expr::Pow(b, -m).simplify(),
                x => Expr::inv(x),
            },
            Expr::Comm(a, b) => Expr::comm(a.simplify(), b.simplify()),
        }
    }

    pub fn render(&self, names: &[String]) -> String {
        let mut s = String::new();
        self.render_into(names, &mut s, false);
        if s.is_empty() {
            s.push('1');
        }
        s
    }

    fn render_into(&self, names: &[String], s: &mut String, atom: bool) {
        match self {
            Expr::One => s.push('1'),
            Expr::Gen(i) => s.push_str(&names.get(*i).cloned().unwrap_or_else(|| format!("g{}", i + 1))),
            Expr::Prod(v) => {
                if v.is_empty() {
                    s.push('1');
                    return;
                }
                let paren = atom && v.len() > 1;
                if paren {
                    s.push('(');
                }
                for (n, e) in v.iter().enumerate() {
                    if n > 0 {
                        s.push(' ');
                    }
                    e.render_into(names, s, false);
                }
                if paren {
                    s.push(')');
                }
            }
            Expr::Pow(e, n) => {
                let simple = matches!(**e, Expr::Gen(_) | Expr::Comm(..));
                if simple {
                    e.render_into(names, s, true);
                } else {
                    s.push('(');
                    e.render_into(names, s, false);
                    s.push(')');
                }
                let _ = write!(s, "^{n}");
            }
            Expr::Inv(e) => {
                let simple = matches!(**e, Expr::Gen(_) | Expr::Comm(..));
                if simple {
                    e.render_into(names, s, true);
                } else {
                    s.push('(');
                    e.render_into(names, s, false);
                    s.push(')');
                }
                s.push('~');
            }
            Expr::Comm(a, b) => {
                s.push('[');
                a.render_into(names, s, false);
                s.push(',');
                b.render_into(names, s, false);
                s.push(']');
            }
        }
    }
}

fn check_len(w: &Word, limit: usize) -> Result<()> {
    if w.len() > limit {
        Err(Error::Param(format!("expanded word exceeds {limit} letters")))
    } else {
        Ok(())
    }
}

/// Tokens of the word grammar.
#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(Int),
    Caret,
    Tilde,
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        if c.is_whitespace() || c == '*' || c == '.' {
            i += 1;
            continue;
        }
        if c.is_ascii_alphabetic() {
            let mut s = String::from(c);
            i += 1;
            while i < chars.len() && chars[i].is_ascii_digit() {
                s.push(chars[i]);
                i += 1;
            }
            out.push((start, Tok::Ident(s)));
            continue;
        }
        if c.is_ascii_digit() || (c == '-' && i + 1 < chars.len() && chars[i + 1].is_ascii_digit()) {
            let mut s = String::from(c);
            i += 1;
            while i < chars.len() && chars[i].is_ascii_digit() {
                s.push(chars[i]);
                i += 1;
            }
            let v: Int = s.parse().map_err(|_| Error::Syntax { pos: start, msg: "bad integer".into() })?;
            out.push((start, Tok::Int(v)));
            continue;
        }
        let t = match c {
            '^' => Tok::Caret,
            '~' | '\'' => Tok::Tilde,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBrack,
            ']' => Tok::RBrack,
            ',' => Tok::Comma,
            _ => return Err(Error::Syntax { pos: start, msg: format!("unexpected character '{c}'") }),
        };
        out.push((start, t));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    resolve: &'a dyn Fn(&str) -> Option<usize>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.0).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Syntax { pos: self.here(), msg: msg.to_string() })
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut parts = Vec::new();
        while let Some(t) = self.peek() {
            match t {
                Tok::Ident(_) | Tok::LParen | Tok::LBrack | Tok::Int(_) => parts.push(self.term()?),
                _ => break,
            }
        }
        Ok(match parts.len() {
            0 => Expr::One,
            1 => parts.pop().unwrap(),
            _ => Expr::Prod(parts),
        })
    }

    fn term(&mut self) -> Result<Expr> {
        let mut e = self.atom()?;
        loop {
            match self.peek() {
                Some(Tok::Caret) => {
                    self.pos += 1;
                    match self.peek().cloned() {
                        Some(Tok::Int(n)) => {
                            self.pos += 1;
                            e = Expr::pow(e, n);
                        }
                        _ => return self.err("expected integer exponent"),
                    }
                }
                Some(Tok::Tilde) => {
                    self.pos += 1;
                    e = Expr::inv(e);
                }
                _ => return Ok(e),
            }
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek().cloned() {
            Some(Tok::Ident(name)) => {
                let at = self.here();
                self.pos += 1;
                match (self.resolve)(&name) {
                    Some(i) => Ok(Expr::Gen(i)),
                    None => Err(Error::Syntax { pos: at, msg: format!("unknown generator '{name}'") }),
                }
            }
            Some(Tok::Int(n)) => {
                if n.is_one() {
                    self.pos += 1;
                    Ok(Expr::One)
                } else {
                    self.err("only 1 may appear as a standalone integer")
                }
            }
            Some(Tok::LParen) => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(e)
            }
            Some(Tok::LBrack) => {
                self.pos += 1;
                let a = self.expr()?;
                if self.peek() != Some(&Tok::Comma) {
                    return self.err("expected ','");
                }
                self.pos += 1;
                let b = self.expr()?;
                if self.peek() != Some(&Tok::RBrack) {
                    return self.err("expected ']'");
                }
                self.pos += 1;
                Ok(Expr::comm(a, b))
            }
            _ => self.err("expected generator, '(' or '['"),
        }
    }
}

/// Parse a word expression; `resolve` maps generator names to 0-based indices.
pub fn parse_expr(text: &str, resolve: &dyn Fn(&str) -> Option<usize>) -> Result<Expr> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, end: text.len(), resolve };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("unexpected trailing input");
    }
    Ok(e)
}

/// Resolver accepting g1..gk plus the given names.
pub fn name_resolver(names: &[String]) -> impl Fn(&str) -> Option<usize> + '_ {
    move |s: &str| {
        if let Some(i) = names.iter().position(|n| n == s) {
            return Some(i);
        }
        if let Some(rest) = s.strip_prefix('g') {
            if let Ok(i) = rest.parse::<usize>() {
                if i >= 1 && i <= names.len() {
                    return Some(i - 1);
                }
            }
        }
        None
    }
}

/// Parse a word over `arity` generators named g1..gk, x1..xk, or x,y,z when k ≤ 3.
pub fn parse_word(text: &str, arity: usize) -> Result<Word> {
    let names = default_names("x", arity);
    let short: Vec<String> = ["x", "y", "z"].iter().take(arity.min(3)).map(|s| s.to_string()).collect();
    let resolver = |s: &str| {
        if let Some(i) = name_resolver(&names)(s) {
            return Some(i);
        }
        if arity <= 3 {
            if let Some(i) = short.iter().position(|n| n == s) {
                return Some(i);
            }
        }
        None
    };
    let e = parse_expr(text, &resolver)?;
    if e.arity() > arity {
        return Err(Error::Arity(format!("word uses {} generators, arity is {arity}", e.arity())));
    }
    e.to_word(10_000_000)
}

/// prefix1..prefixk
pub fn default_names(prefix: &str, k: usize) -> Vec<String> {
    (1..=k).map(|i| format!("{prefix}{i}")).collect()
}

/// Exponent sum vector of a word.
pub fn exponent_sums(w: &Word, k: usize) -> Vec<Int> {
    let mut v = vec![Int::zero(); k];
    for &l in &w.letters {
        let i = l.unsigned_abs() as usize - 1;
        if l > 0 {
            v[i] += 1;
        } else {
            v[i] -= 1;
        }
    }
    v
}

pub fn exponent_u32(n: &Int) -> u32 {
    to_u32(n)
}

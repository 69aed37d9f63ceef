//! Words over `a, b` and Hasse–Lehmer–Todd–Coxeter coset enumeration.
//!
//! `a ↦ T` and `b ↦ RT⁻¹`, so `R = ba`. Words written in `T, R` are parsed
//! into `a, b` through that substitution.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub const DEFAULT_MAX_COSETS: usize = 1_000_000;

const NGENS: usize = 4;
const UNDEF: u32 = u32::MAX;

/// Generator letters: `a`, `a⁻¹`, `b`, `b⁻¹`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Letter {
    A,
    AInv,
    B,
    BInv,
}

impl Letter {
    fn index(self) -> usize {
        self as usize
    }

    pub fn inverse(self) -> Letter {
        match self {
            Letter::A => Letter::AInv,
            Letter::AInv => Letter::A,
            Letter::B => Letter::BInv,
            Letter::BInv => Letter::B,
        }
    }

    fn base(self) -> (char, i64) {
        match self {
            Letter::A => ('a', 1),
            Letter::AInv => ('a', -1),
            Letter::B => ('b', 1),
            Letter::BInv => ('b', -1),
        }
    }
}

/// A freely reduced word in `a, b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Word {
        Word(Vec::new())
    }

    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Word {
        let mut w = Word::identity();
        for l in letters {
            w.push(l);
        }
        w
    }

    fn push(&mut self, l: Letter) {
        if self.0.last() == Some(&l.inverse()) {
            self.0.pop();
        } else {
            self.0.push(l);
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Word) -> Word {
        let mut w = self.clone();
        for &l in &other.0 {
            w.push(l);
        }
        w
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut w = Word::identity();
        for _ in 0..k.unsigned_abs() {
            w = w.mul(&base);
        }
        w
    }

    pub fn commutator(x: &Word, y: &Word) -> Word {
        x.mul(y).mul(&x.inverse()).mul(&y.inverse())
    }

    pub fn a() -> Word {
        Word(vec![Letter::A])
    }

    pub fn b() -> Word {
        Word(vec![Letter::B])
    }

    pub fn t() -> Word {
        Word::a()
    }

    pub fn r() -> Word {
        Word(vec![Letter::B, Letter::A])
    }

    /// Free reduction followed by cyclic reduction.
    pub fn cyclically_reduced(&self) -> Word {
        let mut v = self.0.clone();
        while v.len() >= 2 && v[0] == v[v.len() - 1].inverse() {
            v.pop();
            v.remove(0);
        }
        Word(v)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        let mut runs: Vec<(char, i64)> = Vec::new();
        for l in &self.0 {
            let (c, e) = l.base();
            match runs.last_mut() {
                Some((lc, le)) if *lc == c && le.signum() == e => *le += e,
                _ => runs.push((c, e)),
            }
        }
        let parts: Vec<String> = runs
            .into_iter()
            .map(|(c, e)| {
                if e == 1 {
                    c.to_string()
                } else {
                    format!("{c}^{e}")
                }
            })
            .collect();
        f.write_str(&parts.join(" "))
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Accepts `a b A B` (capitals invert), `T R`, `x^k` with signed `k`,
    /// parentheses and commutators `[x,y]`.
    fn from_str(s: &str) -> Result<Word> {
        let chars: Vec<char> = s
            .chars()
            .filter(|c| !c.is_whitespace() && *c != '*')
            .collect();
        let mut p = Parser { s: &chars, pos: 0 };
        let w = p.expr()?;
        if p.pos != chars.len() {
            return Err(p.error("unexpected character"));
        }
        Ok(w)
    }
}

struct Parser<'a> {
    s: &'a [char],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, what: &str) -> Error {
        let rest: String = self.s[self.pos.min(self.s.len())..].iter().collect();
        Error::Parse(format!(
            "{what} at position {} in word (near {rest:?})",
            self.pos
        ))
    }

    fn peek(&self) -> Option<char> {
        self.s.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Word> {
        let mut w = Word::identity();
        while let Some(c) = self.peek() {
            if c == ')' || c == ']' || c == ',' {
                break;
            }
            let t = self.term()?;
            w = w.mul(&t);
        }
        Ok(w)
    }

    fn term(&mut self) -> Result<Word> {
        let atom = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            let k = self.int()?;
            return Ok(atom.pow(k));
        }
        Ok(atom)
    }

    fn int(&mut self) -> Result<i64> {
        let start = self.pos;
        if matches!(self.peek(), Some('-') | Some('+')) {
            self.pos += 1;
        }
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        let text: String = self.s[start..self.pos].iter().collect();
        text.parse().map_err(|_| {
            self.pos = start;
            self.error("expected an integer exponent")
        })
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected '{c}'")))
        }
    }

    fn atom(&mut self) -> Result<Word> {
        let c = self.peek().ok_or_else(|| self.error("unexpected end"))?;
        self.pos += 1;
        Ok(match c {
            'a' | 'T' | 't' => Word::a(),
            'A' => Word::a().inverse(),
            'b' => Word::b(),
            'B' => Word::b().inverse(),
            'R' | 'r' => Word::r(),
            '1' => Word::identity(),
            '(' => {
                let w = self.expr()?;
                self.expect(')')?;
                w
            }
            '[' => {
                let x = self.expr()?;
                self.expect(',')?;
                let y = self.expr()?;
                self.expect(']')?;
                Word::commutator(&x, &y)
            }
            _ => {
                self.pos -= 1;
                return Err(self.error("unknown generator"));
            }
        })
    }
}

/// A quotient of `⟨a, b | b²⟩`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    relators: Vec<Word>,
}

impl Presentation {
    /// `b²` is added when missing; trivial relators are dropped.
    pub fn new(relators: impl IntoIterator<Item = Word>) -> Presentation {
        let b2 = Word::b().pow(2);
        let mut rels: Vec<Word> = vec![b2.clone()];
        for r in relators {
            let r = r.cyclically_reduced();
            if !r.is_empty() && !rels.contains(&r) && r != b2.inverse() {
                rels.push(r);
            }
        }
        Presentation { relators: rels }
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }
}

impl FromStr for Presentation {
    type Err = Error;

    /// Comma-separated relators. Commas inside brackets belong to commutators.
    fn from_str(s: &str) -> Result<Presentation> {
        let mut parts = Vec::new();
        let mut depth = 0i32;
        let mut cur = String::new();
        for c in s.chars() {
            match c {
                '[' | '(' => depth += 1,
                ']' | ')' => depth -= 1,
                _ => {}
            }
            if c == ',' && depth == 0 {
                parts.push(std::mem::take(&mut cur));
            } else {
                cur.push(c);
            }
        }
        parts.push(cur);
        let words = parts
            .iter()
            .map(|p| p.trim())
            .filter(|p| !p.is_empty())
            .map(|p| p.parse::<Word>())
            .collect::<Result<Vec<_>>>()?;
        Ok(Presentation::new(words))
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rels: Vec<String> = self.relators.iter().map(|r| r.to_string()).collect();
        write!(f, "⟨a, b | {}⟩", rels.join(", "))
    }
}

/// The regular permutation representation of a finite quotient.
#[derive(Clone, Debug)]
pub struct CosetTable {
    rows: Vec<[u32; NGENS]>,
}

impl CosetTable {
    pub fn order(&self) -> usize {
        self.rows.len()
    }

    pub fn act(&self, coset: usize, w: &Word) -> usize {
        w.letters()
            .iter()
            .fold(coset, |c, l| self.rows[c][l.index()] as usize)
    }

    /// Order of the image of `w` in the quotient.
    pub fn element_order(&self, w: &Word) -> usize {
        let mut c = self.act(0, w);
        let mut k = 1;
        while c != 0 {
            c = self.act(c, w);
            k += 1;
        }
        k
    }

    pub fn is_trivial(&self, w: &Word) -> bool {
        self.act(0, w) == 0
    }
}

struct Enumerator {
    table: Vec<[u32; NGENS]>,
    parent: Vec<u32>,
    max: usize,
    queue: Vec<u32>,
}

impl Enumerator {
    fn new(max: usize) -> Enumerator {
        Enumerator {
            table: vec![[UNDEF; NGENS]],
            parent: vec![0],
            max,
            queue: Vec::new(),
        }
    }

    fn alive(&self, c: u32) -> bool {
        self.parent[c as usize] == c
    }

    fn define(&mut self, c: u32, x: usize) -> Result<()> {
        if self.table.len() >= self.max {
            return Err(Error::EnumerationExceeded { max: self.max });
        }
        let n = self.table.len() as u32;
        self.table.push([UNDEF; NGENS]);
        self.parent.push(n);
        self.table[c as usize][x] = n;
        self.table[n as usize][x ^ 1] = c;
        Ok(())
    }

    fn rep(&mut self, c: u32) -> u32 {
        let mut r = c;
        while self.parent[r as usize] != r {
            r = self.parent[r as usize];
        }
        let mut c = c;
        while self.parent[c as usize] != r {
            let next = self.parent[c as usize];
            self.parent[c as usize] = r;
            c = next;
        }
        r
    }

    fn merge(&mut self, k: u32, l: u32) {
        let (k, l) = (self.rep(k), self.rep(l));
        if k != l {
            let (lo, hi) = if k < l { (k, l) } else { (l, k) };
            self.parent[hi as usize] = lo;
            self.queue.push(hi);
        }
    }

    fn coincidence(&mut self, a: u32, b: u32) {
        self.queue.clear();
        self.merge(a, b);
        let mut i = 0;
        while i < self.queue.len() {
            let e = self.queue[i];
            i += 1;
            for x in 0..NGENS {
                let f = self.table[e as usize][x];
                if f == UNDEF {
                    continue;
                }
                self.table[f as usize][x ^ 1] = UNDEF;
                let e1 = self.rep(e);
                let f1 = self.rep(f);
                let ex = self.table[e1 as usize][x];
                let fx = self.table[f1 as usize][x ^ 1];
                if ex != UNDEF {
                    self.merge(f1, ex);
                } else if fx != UNDEF {
                    self.merge(e1, fx);
                } else {
                    self.table[e1 as usize][x] = f1;
                    self.table[f1 as usize][x ^ 1] = e1;
                }
            }
        }
    }

    fn scan_and_fill(&mut self, c: u32, w: &[usize]) -> Result<()> {
        if w.is_empty() {
            return Ok(());
        }
        let (mut f, mut b) = (c, c);
        let (mut i, mut j) = (0isize, w.len() as isize - 1);
        loop {
            while i <= j && self.table[f as usize][w[i as usize]] != UNDEF {
                f = self.table[f as usize][w[i as usize]];
                i += 1;
            }
            if i > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j >= i && self.table[b as usize][w[j as usize] ^ 1] != UNDEF {
                b = self.table[b as usize][w[j as usize] ^ 1];
                j -= 1;
            }
            if j < i {
                self.coincidence(f, b);
                return Ok(());
            }
            if i == j {
                let x = w[i as usize];
                self.table[f as usize][x] = b;
                self.table[b as usize][x ^ 1] = f;
                return Ok(());
            }
            self.define(f, w[i as usize])?;
        }
    }

    fn run(mut self, relators: &[Vec<usize>]) -> Result<CosetTable> {
        let mut c = 0u32;
        while (c as usize) < self.table.len() {
            for r in relators {
                if !self.alive(c) {
                    break;
                }
                self.scan_and_fill(c, r)?;
            }
            if self.alive(c) {
                for x in 0..NGENS {
                    if self.table[c as usize][x] == UNDEF {
                        self.define(c, x)?;
                    }
                }
            }
            c += 1;
        }
        Ok(self.compact())
    }

    fn compact(mut self) -> CosetTable {
        let n = self.table.len();
        let mut index = vec![UNDEF; n];
        let mut k = 0u32;
        for (c, slot) in index.iter_mut().enumerate() {
            if self.parent[c] == c as u32 {
                *slot = k;
                k += 1;
            }
        }
        let mut rows = Vec::with_capacity(k as usize);
        for c in 0..n {
            if self.parent[c] != c as u32 {
                continue;
            }
            let mut row = self.table[c];
            for e in row.iter_mut() {
                let r = self.rep(*e);
                *e = index[r as usize];
            }
            rows.push(row);
        }
        CosetTable { rows }
    }
}

/// Enumerate the cosets of the trivial subgroup, giving the regular
/// representation of the quotient.
pub fn enumerate(p: &Presentation, max_cosets: usize) -> Result<CosetTable> {
    if max_cosets == 0 {
        return Err(Error::InvalidArgument(
            "max_cosets must be at least 1".into(),
        ));
    }
    let rels: Vec<Vec<usize>> = p
        .relators()
        .iter()
        .map(|r| r.letters().iter().map(|l| l.index()).collect())
        .collect();
    Enumerator::new(max_cosets).run(&rels)
}

/// Order of the finitely presented quotient.
pub fn coset_enumerate(p: &Presentation, max_cosets: usize) -> Result<usize> {
    enumerate(p, max_cosets).map(|t| t.order())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn order(s: &str) -> usize {
        coset_enumerate(&s.parse().unwrap(), DEFAULT_MAX_COSETS).unwrap()
    }

    #[test]
    fn word_parsing() {
        let w: Word = "(ba)^3".parse().unwrap();
        assert_eq!(w.to_string(), "b a b a b a");
        let r: Word = "R".parse().unwrap();
        assert_eq!(r, "ba".parse().unwrap());
        let c: Word = "[T,R]".parse().unwrap();
        assert_eq!(c.to_string(), "a b a^-1 b^-1");
        let inv: Word = "a^-2 A".parse().unwrap();
        assert_eq!(inv.to_string(), "a^-3");
        assert!("a^".parse::<Word>().is_err());
        assert!("x".parse::<Word>().is_err());
    }

    #[test]
    fn polyhedral_orders() {
        assert_eq!(order("b^2,a^3,(ba)^3"), 12);
        assert_eq!(order("b^2,a^4,(ba)^3"), 24);
        assert_eq!(order("b^2,a^5,(ba)^3"), 60);
        assert_eq!(order("b^2,a^6,(ba)^2"), 12);
    }

    #[test]
    fn b_squared_is_implicit() {
        assert_eq!(order("a^3,(ba)^3"), 12);
        assert_eq!(order("a"), 2);
        assert_eq!(order("b,a^5"), 5);
    }

    #[test]
    fn infinite_quotient_is_reported() {
        let p: Presentation = "a^2 b a^-2 b".parse().unwrap();
        assert_eq!(
            coset_enumerate(&p, 5000),
            Err(Error::EnumerationExceeded { max: 5000 })
        );
    }

    #[test]
    fn element_orders() {
        let t = enumerate(&"a^4,(ba)^3".parse().unwrap(), 1000).unwrap();
        assert_eq!(t.element_order(&Word::a()), 4);
        assert_eq!(t.element_order(&Word::b()), 2);
        assert_eq!(t.element_order(&Word::r()), 3);
    }
}

//! Element oracles for finitely generated groups.
//!
//! A group is known only through an oracle: identity, product, inverse, a finite
//! symmetric generator list and canonical labels. Elements are plain values whose
//! equality coincides with equality in the group, so they can be hashed and used
//! as keys by the Cayley-graph explorer.

use std::fmt;
use std::sync::Arc;

use smallvec::{smallvec, SmallVec};

use crate::error::{Error, Result};

/// A group element in one of the registry representations.
///
/// Every representation is canonical: two values compare equal iff they denote
/// the same element of the owning group.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    /// A lattice vector in `Z^d`.
    Lattice(SmallVec<[i64; 4]>),
    /// A freely reduced word; letter `+k` is the `k`-th free generator and `-k` its inverse.
    Word(SmallVec<[i32; 8]>),
    /// A residue in `Z/n`.
    Residue(u64),
    /// A permutation of `0..n` given by its images.
    Perm(SmallVec<[u8; 16]>),
    /// An element of a direct product, one entry per factor.
    Tuple(Vec<Element>),
}

/// Oracle access to a finitely generated group.
///
/// The generator list is ordered; its order is part of the group's identity
/// because geodesic tie-breaking and every table layout derive from it.
pub trait GroupOracle: fmt::Debug + Send + Sync {
    /// Canonical spec string, e.g. `Z^2 x C(2)`.
    fn spec(&self) -> String;
    fn identity(&self) -> Element;
    fn multiply(&self, a: &Element, b: &Element) -> Element;
    fn inverse(&self, a: &Element) -> Element;
    /// Symmetric generating list in declaration order.
    fn generators(&self) -> &[Element];
    /// Short names for the generators, parallel to [`GroupOracle::generators`].
    fn generator_names(&self) -> &[String];
    fn label(&self, a: &Element) -> String;
    fn parse_label(&self, s: &str) -> Result<Element>;

    fn is_identity(&self, a: &Element) -> bool {
        *a == self.identity()
    }

    /// `a^n` for any integer `n`.
    fn pow(&self, a: &Element, n: i64) -> Element {
        let mut base = if n < 0 { self.inverse(a) } else { a.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = self.identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.multiply(&acc, &base);
            }
            base = self.multiply(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Product of the generators named by `word`, left to right.
    fn word_product(&self, word: &[usize]) -> Element {
        let gens = self.generators();
        word.iter()
            .fold(self.identity(), |acc, &i| self.multiply(&acc, &gens[i]))
    }
}

pub type SharedGroup = Arc<dyn GroupOracle>;

/// The free abelian group `Z^d` with generators `+e1..+ed, -e1..-ed`.
#[derive(Debug, Clone)]
pub struct Lattice {
    dim: usize,
    generators: Vec<Element>,
    names: Vec<String>,
}

impl Lattice {
    pub fn new(dim: usize) -> Self {
        let mut generators = Vec::with_capacity(2 * dim);
        let mut names = Vec::with_capacity(2 * dim);
        for sign in [1i64, -1] {
            for i in 0..dim {
                let mut v = vec![0; dim];
                v[i] = sign;
                generators.push(Element::Lattice(v.into()));
                names.push(if sign > 0 {
                    format!("e{}", i + 1)
                } else {
                    format!("E{}", i + 1)
                });
            }
        }
        Lattice {
            dim,
            generators,
            names,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vector(v: &[i64]) -> Element {
        Element::Lattice(SmallVec::from_slice(v))
    }
}

fn lattice_coords(a: &Element) -> &[i64] {
    match a {
        Element::Lattice(v) => v,
        other => panic!("lattice oracle received foreign element {other:?}"),
    }
}

impl GroupOracle for Lattice {
    fn spec(&self) -> String {
        format!("Z^{}", self.dim)
    }

    fn identity(&self) -> Element {
        Element::Lattice(smallvec![0; self.dim])
    }

    fn multiply(&self, a: &Element, b: &Element) -> Element {
        let (a, b) = (lattice_coords(a), lattice_coords(b));
        Element::Lattice(a.iter().zip(b).map(|(x, y)| x + y).collect())
    }

    fn inverse(&self, a: &Element) -> Element {
        Element::Lattice(lattice_coords(a).iter().map(|x| -x).collect())
    }

    fn generators(&self) -> &[Element] {
        &self.generators
    }

    fn generator_names(&self) -> &[String] {
        &self.names
    }

    fn label(&self, a: &Element) -> String {
        let parts: Vec<String> = lattice_coords(a).iter().map(|x| x.to_string()).collect();
        format!("({})", parts.join(","))
    }

    fn parse_label(&self, s: &str) -> Result<Element> {
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::label(s, "expected `(a,b,...)`"))?;
        let coords = inner
            .split(',')
            .map(|p| p.trim().parse::<i64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::label(s, e.to_string()))?;
        if coords.len() != self.dim {
            return Err(Error::label(
                s,
                format!("expected {} coordinates", self.dim),
            ));
        }
        Ok(Element::Lattice(coords.into()))
    }
}

/// The free group on `rank` generators `a, b, ...` with inverses `A, B, ...`.
#[derive(Debug, Clone)]
pub struct Free {
    rank: usize,
    generators: Vec<Element>,
    names: Vec<String>,
}

impl Free {
    pub fn new(rank: usize) -> Result<Self> {
        if rank > 26 {
            return Err(Error::UnsupportedAtom(format!("F({rank})")));
        }
        let mut generators = Vec::with_capacity(2 * rank);
        let mut names = Vec::with_capacity(2 * rank);
        for sign in [1i32, -1] {
            for i in 0..rank {
                generators.push(Element::Word(smallvec![sign * (i as i32 + 1)]));
                let c = (b'a' + i as u8) as char;
                names.push(if sign > 0 {
                    c.to_string()
                } else {
                    c.to_ascii_uppercase().to_string()
                });
            }
        }
        Ok(Free {
            rank,
            generators,
            names,
        })
    }

    fn letter_char(letter: i32) -> char {
        let c = (b'a' + (letter.unsigned_abs() - 1) as u8) as char;
        if letter > 0 {
            c
        } else {
            c.to_ascii_uppercase()
        }
    }
}

fn word_letters(a: &Element) -> &[i32] {
    match a {
        Element::Word(w) => w,
        other => panic!("free oracle received foreign element {other:?}"),
    }
}

impl GroupOracle for Free {
    fn spec(&self) -> String {
        format!("F({})", self.rank)
    }

    fn identity(&self) -> Element {
        Element::Word(SmallVec::new())
    }

    fn multiply(&self, a: &Element, b: &Element) -> Element {
        let mut out: SmallVec<[i32; 8]> = SmallVec::from_slice(word_letters(a));
        for &l in word_letters(b) {
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Element::Word(out)
    }

    fn inverse(&self, a: &Element) -> Element {
        Element::Word(word_letters(a).iter().rev().map(|l| -l).collect())
    }

    fn generators(&self) -> &[Element] {
        &self.generators
    }

    fn generator_names(&self) -> &[String] {
        &self.names
    }

    fn label(&self, a: &Element) -> String {
        let w = word_letters(a);
        if w.is_empty() {
            return "1".to_string();
        }
        w.iter().map(|&l| Self::letter_char(l)).collect()
    }

    fn parse_label(&self, s: &str) -> Result<Element> {
        let s = s.trim();
        if s == "1" {
            return Ok(self.identity());
        }
        let mut acc = self.identity();
        for c in s.chars() {
            let lower = c.to_ascii_lowercase();
            if !lower.is_ascii_lowercase() || (lower as u8 - b'a') as usize >= self.rank {
                return Err(Error::label(s, format!("`{c}` is not a generator letter")));
            }
            let k = (lower as u8 - b'a') as i32 + 1;
            let letter = if c.is_ascii_lowercase() { k } else { -k };
            acc = self.multiply(&acc, &Element::Word(smallvec![letter]));
        }
        Ok(acc)
    }
}

/// The cyclic group `Z/n` with generators `c = 1` and `C = n - 1`.
#[derive(Debug, Clone)]
pub struct Cyclic {
    order: u64,
    generators: Vec<Element>,
    names: Vec<String>,
}

impl Cyclic {
    pub fn new(order: u64) -> Result<Self> {
        if order == 0 {
            return Err(Error::UnsupportedAtom("C(0)".into()));
        }
        let up = 1 % order;
        let down = (order - 1) % order;
        Ok(Cyclic {
            order,
            generators: vec![Element::Residue(up), Element::Residue(down)],
            names: vec!["c".into(), "C".into()],
        })
    }
}

fn residue(a: &Element) -> u64 {
    match a {
        Element::Residue(r) => *r,
        other => panic!("cyclic oracle received foreign element {other:?}"),
    }
}

impl GroupOracle for Cyclic {
    fn spec(&self) -> String {
        format!("C({})", self.order)
    }

    fn identity(&self) -> Element {
        Element::Residue(0)
    }

    fn multiply(&self, a: &Element, b: &Element) -> Element {
        Element::Residue((residue(a) + residue(b)) % self.order)
    }

    fn inverse(&self, a: &Element) -> Element {
        Element::Residue((self.order - residue(a)) % self.order)
    }

    fn generators(&self) -> &[Element] {
        &self.generators
    }

    fn generator_names(&self) -> &[String] {
        &self.names
    }

    fn label(&self, a: &Element) -> String {
        residue(a).to_string()
    }

    fn parse_label(&self, s: &str) -> Result<Element> {
        let r: u64 = s
            .trim()
            .parse()
            .map_err(|e: std::num::ParseIntError| Error::label(s, e.to_string()))?;
        if r >= self.order {
            return Err(Error::label(
                s,
                format!("residue must be below {}", self.order),
            ));
        }
        Ok(Element::Residue(r))
    }
}

/// The symmetric group on `n` points, generated by adjacent transpositions
/// `s1 = (1 2), ..., s(n-1) = (n-1 n)`.
///
/// Products compose right to left: `(a * b)(i) = a(b(i))`.
#[derive(Debug, Clone)]
pub struct Symmetric {
    n: usize,
    generators: Vec<Element>,
    names: Vec<String>,
}

impl Symmetric {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > 255 {
            return Err(Error::UnsupportedAtom(format!("S({n})")));
        }
        let mut generators = Vec::new();
        let mut names = Vec::new();
        for i in 0..n.saturating_sub(1) {
            let mut p: Vec<u8> = (0..n as u8).collect();
            p.swap(i, i + 1);
            generators.push(Element::Perm(p.into()));
            names.push(format!("s{}", i + 1));
        }
        Ok(Symmetric {
            n,
            generators,
            names,
        })
    }

    /// Every element, sorted by image vector.
    pub fn elements(&self) -> Vec<Element> {
        fn rec(prefix: &mut Vec<u8>, used: &mut [bool], out: &mut Vec<Element>) {
            if prefix.len() == used.len() {
                out.push(Element::Perm(SmallVec::from_slice(prefix)));
                return;
            }
            for i in 0..used.len() {
                if !used[i] {
                    used[i] = true;
                    prefix.push(i as u8);
                    rec(prefix, used, out);
                    prefix.pop();
                    used[i] = false;
                }
            }
        }
        let mut out = Vec::new();
        rec(&mut Vec::new(), &mut vec![false; self.n], &mut out);
        out
    }
}

fn perm(a: &Element) -> &[u8] {
    match a {
        Element::Perm(p) => p,
        other => panic!("permutation oracle received foreign element {other:?}"),
    }
}

impl GroupOracle for Symmetric {
    fn spec(&self) -> String {
        format!("S({})", self.n)
    }

    fn identity(&self) -> Element {
        Element::Perm((0..self.n as u8).collect())
    }

    fn multiply(&self, a: &Element, b: &Element) -> Element {
        let (a, b) = (perm(a), perm(b));
        Element::Perm(b.iter().map(|&i| a[i as usize]).collect())
    }

    fn inverse(&self, a: &Element) -> Element {
        let a = perm(a);
        let mut out: SmallVec<[u8; 16]> = smallvec![0u8; a.len()];
        for (i, &j) in a.iter().enumerate() {
            out[j as usize] = i as u8;
        }
        Element::Perm(out)
    }

    fn generators(&self) -> &[Element] {
        &self.generators
    }

    fn generator_names(&self) -> &[String] {
        &self.names
    }

    fn label(&self, a: &Element) -> String {
        let p = perm(a);
        let mut seen = vec![false; p.len()];
        let mut out = String::new();
        for start in 0..p.len() {
            if seen[start] || p[start] as usize == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cycle.push((i + 1).to_string());
                i = p[i] as usize;
            }
            out.push('(');
            out.push_str(&cycle.join(" "));
            out.push(')');
        }
        if out.is_empty() {
            "()".to_string()
        } else {
            out
        }
    }

    fn parse_label(&self, s: &str) -> Result<Element> {
        let t = s.trim();
        let mut p: Vec<u8> = (0..self.n as u8).collect();
        if t == "()" {
            return Ok(Element::Perm(p.into()));
        }
        let mut seen = vec![false; self.n];
        let mut rest = t;
        while !rest.is_empty() {
            let body_end = rest
                .find(')')
                .ok_or_else(|| Error::label(s, "unbalanced parenthesis"))?;
            let body = rest
                .strip_prefix('(')
                .ok_or_else(|| Error::label(s, "expected `(`"))?;
            let body = &body[..body_end - 1];
            let points = body
                .split_whitespace()
                .map(|x| x.parse::<usize>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::label(s, e.to_string()))?;
            for &x in &points {
                if x == 0 || x > self.n || seen[x - 1] {
                    return Err(Error::label(s, format!("bad point {x}")));
                }
                seen[x - 1] = true;
            }
            for k in 0..points.len() {
                p[points[k] - 1] = (points[(k + 1) % points.len()] - 1) as u8;
            }
            rest = rest[body_end + 1..].trim_start();
        }
        Ok(Element::Perm(p.into()))
    }
}

/// Direct product of registry groups. Generators are each factor's generators,
/// embedded with the identity in every other coordinate, factor by factor.
#[derive(Debug, Clone)]
pub struct Product {
    factors: Vec<SharedGroup>,
    generators: Vec<Element>,
    names: Vec<String>,
}

impl Product {
    pub fn new(factors: Vec<SharedGroup>) -> Self {
        let ids: Vec<Element> = factors.iter().map(|f| f.identity()).collect();
        let mut generators = Vec::new();
        let mut names = Vec::new();
        for (k, f) in factors.iter().enumerate() {
            for (g, name) in f.generators().iter().zip(f.generator_names()) {
                let mut t = ids.clone();
                t[k] = g.clone();
                generators.push(Element::Tuple(t));
                names.push(format!("{}:{}", k + 1, name));
            }
        }
        Product {
            factors,
            generators,
            names,
        }
    }

    pub fn factors(&self) -> &[SharedGroup] {
        &self.factors
    }
}

fn tuple(a: &Element) -> &[Element] {
    match a {
        Element::Tuple(t) => t,
        other => panic!("product oracle received foreign element {other:?}"),
    }
}

impl GroupOracle for Product {
    fn spec(&self) -> String {
        let parts: Vec<String> = self.factors.iter().map(|f| f.spec()).collect();
        parts.join(" x ")
    }

    fn identity(&self) -> Element {
        Element::Tuple(self.factors.iter().map(|f| f.identity()).collect())
    }

    fn multiply(&self, a: &Element, b: &Element) -> Element {
        Element::Tuple(
            self.factors
                .iter()
                .zip(tuple(a).iter().zip(tuple(b)))
                .map(|(f, (x, y))| f.multiply(x, y))
                .collect(),
        )
    }

    fn inverse(&self, a: &Element) -> Element {
        Element::Tuple(
            self.factors
                .iter()
                .zip(tuple(a))
                .map(|(f, x)| f.inverse(x))
                .collect(),
        )
    }

    fn generators(&self) -> &[Element] {
        &self.generators
    }

    fn generator_names(&self) -> &[String] {
        &self.names
    }

    fn label(&self, a: &Element) -> String {
        let parts: Vec<String> = self
            .factors
            .iter()
            .zip(tuple(a))
            .map(|(f, x)| f.label(x))
            .collect();
        parts.join(" x ")
    }

    fn parse_label(&self, s: &str) -> Result<Element> {
        let parts: Vec<&str> = s.split(" x ").collect();
        if parts.len() != self.factors.len() {
            return Err(Error::label(
                s,
                format!("expected {} factors", self.factors.len()),
            ));
        }
        Ok(Element::Tuple(
            self.factors
                .iter()
                .zip(parts)
                .map(|(f, p)| f.parse_label(p))
                .collect::<Result<Vec<_>>>()?,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_reduction_and_labels() {
        let f = Free::new(2).unwrap();
        let a = f.parse_label("ab").unwrap();
        let b = f.parse_label("bA").unwrap();
        assert_eq!(f.label(&f.multiply(&a, &b)), "abbA");
        assert_eq!(f.label(&f.multiply(&a, &f.inverse(&a))), "1");
        assert_eq!(f.label(&f.pow(&f.parse_label("a").unwrap(), -3)), "AAA");
    }

    #[test]
    fn permutation_cycle_notation_round_trips() {
        let s = Symmetric::new(4).unwrap();
        for e in s.elements() {
            let l = s.label(&e);
            assert_eq!(s.parse_label(&l).unwrap(), e, "label {l}");
        }
        assert_eq!(s.elements().len(), 24);
        assert_eq!(s.label(&s.identity()), "()");
    }

    #[test]
    fn permutation_product_composes_right_to_left() {
        let s = Symmetric::new(3).unwrap();
        let a = s.parse_label("(1 2)").unwrap();
        let b = s.parse_label("(2 3)").unwrap();
        // a(b(1)) = 2, a(b(2)) = 3, a(b(3)) = 1
        assert_eq!(s.label(&s.multiply(&a, &b)), "(1 2 3)");
    }

    #[test]
    fn cyclic_two_lists_the_generator_twice() {
        let c = Cyclic::new(2).unwrap();
        assert_eq!(c.generators(), &[Element::Residue(1), Element::Residue(1)]);
        assert!(c.parse_label("2").is_err());
    }

    #[test]
    fn product_generators_embed_factors() {
        let p = Product::new(vec![
            Arc::new(Lattice::new(2)),
            Arc::new(Cyclic::new(2).unwrap()),
        ]);
        assert_eq!(p.generators().len(), 6);
        assert_eq!(p.spec(), "Z^2 x C(2)");
        let g = p.parse_label("(1,-2) x 1").unwrap();
        assert_eq!(p.label(&g), "(1,-2) x 1");
        assert_eq!(p.generator_names()[4], "2:c");
    }
}

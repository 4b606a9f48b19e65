//! The full shift `A^G` at desk scale.
//!
//! A [`Configuration`] is a default symbol plus finitely many overrides, which
//! covers the all-zero point, the finitely supported configurations around it,
//! and every "arbitrary" point the pipeline ever evaluates, since each
//! evaluation reads only finitely many sites.

use std::collections::BTreeMap;

use crate::cayley::{Ball, CayleyExplorer};
use crate::error::{Error, Result};
use crate::group::{Element, SharedGroup};

/// Index of a symbol in its alphabet.
pub type Symbol = u8;

/// A finite alphabet with a designated zero symbol. Symbol names are single
/// characters so that patterns print as plain strings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<char>,
    zero: Symbol,
}

impl Alphabet {
    pub fn new<S: AsRef<str>>(names: &[S], zero: &str) -> Result<Self> {
        if names.is_empty() || names.len() > Symbol::MAX as usize {
            return Err(Error::Document(format!(
                "alphabet must have between 1 and {} symbols",
                Symbol::MAX
            )));
        }
        let mut symbols = Vec::with_capacity(names.len());
        for n in names {
            let mut chars = n.as_ref().chars();
            match (chars.next(), chars.next()) {
                (Some(c), None) if !c.is_whitespace() => {
                    if symbols.contains(&c) {
                        return Err(Error::Document(format!("duplicate symbol `{c}`")));
                    }
                    symbols.push(c);
                }
                _ => {
                    return Err(Error::Document(format!(
                        "symbol names must be single characters, got `{}`",
                        n.as_ref()
                    )))
                }
            }
        }
        let zero = names
            .iter()
            .position(|n| n.as_ref() == zero)
            .ok_or_else(|| {
                Error::Document(format!("zero symbol `{zero}` is not in the alphabet"))
            })?;
        Ok(Alphabet {
            symbols,
            zero: zero as Symbol,
        })
    }

    /// `{0, 1}` with zero `0`.
    pub fn binary() -> Self {
        Alphabet::new(&["0", "1"], "0").expect("valid alphabet")
    }

    pub fn size(&self) -> usize {
        self.symbols.len()
    }

    pub fn zero(&self) -> Symbol {
        self.zero
    }

    pub fn name(&self, s: Symbol) -> char {
        self.symbols[s as usize]
    }

    pub fn names(&self) -> Vec<String> {
        self.symbols.iter().map(|c| c.to_string()).collect()
    }

    pub fn symbol(&self, c: char) -> Option<Symbol> {
        self.symbols
            .iter()
            .position(|&x| x == c)
            .map(|i| i as Symbol)
    }

    pub fn pattern_string(&self, values: &[Symbol]) -> String {
        values.iter().map(|&s| self.name(s)).collect()
    }

    pub fn parse_pattern(&self, s: &str, len: usize) -> Result<Vec<Symbol>> {
        let values = s
            .chars()
            .map(|c| {
                self.symbol(c)
                    .ok_or_else(|| Error::label(s, format!("`{c}` is not a symbol")))
            })
            .collect::<Result<Vec<_>>>()?;
        if values.len() != len {
            return Err(Error::label(s, format!("expected {len} symbols")));
        }
        Ok(values)
    }
}

/// A point of `A^G`: `default` everywhere except at finitely many overrides.
///
/// Canonical form: no override equals the default.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Configuration {
    default: Symbol,
    overrides: BTreeMap<Element, Symbol>,
}

impl Configuration {
    pub fn new(default: Symbol, overrides: impl IntoIterator<Item = (Element, Symbol)>) -> Self {
        let overrides = overrides
            .into_iter()
            .filter(|(_, s)| *s != default)
            .collect();
        Configuration { default, overrides }
    }

    /// The constant configuration.
    pub fn constant(symbol: Symbol) -> Self {
        Configuration {
            default: symbol,
            overrides: BTreeMap::new(),
        }
    }

    /// The all-zero configuration.
    pub fn zero(alphabet: &Alphabet) -> Self {
        Self::constant(alphabet.zero())
    }

    pub fn default_symbol(&self) -> Symbol {
        self.default
    }

    pub fn overrides(&self) -> &BTreeMap<Element, Symbol> {
        &self.overrides
    }

    pub fn at(&self, g: &Element) -> Symbol {
        self.overrides.get(g).copied().unwrap_or(self.default)
    }

    /// Finitely supported on the zero symbol.
    pub fn is_finite_support(&self, alphabet: &Alphabet) -> bool {
        self.default == alphabet.zero()
    }

    /// Left shift: `(g x)(h) = x(g^{-1} h)`, so the override at `k` moves to `g k`.
    pub fn shift(&self, oracle: &SharedGroup, g: &Element) -> Configuration {
        Configuration {
            default: self.default,
            overrides: self
                .overrides
                .iter()
                .map(|(k, &s)| (oracle.multiply(g, k), s))
                .collect(),
        }
    }

    /// `||x|| = max{|g| : x(g) != 0}`, and 0 for the all-zero configuration.
    pub fn support_norm(&self, explorer: &CayleyExplorer, alphabet: &Alphabet) -> Result<u32> {
        if !self.is_finite_support(alphabet) {
            return Err(Error::NotInDelta(alphabet.name(self.default).to_string()));
        }
        let mut max = 0;
        for g in self.overrides.keys() {
            max = max.max(explorer.word_norm(g)?);
        }
        Ok(max)
    }

    /// Agrees with `self` on `B(r)` and is zero outside.
    pub fn truncate(
        &self,
        r: u32,
        explorer: &CayleyExplorer,
        alphabet: &Alphabet,
    ) -> Result<Configuration> {
        let ball = explorer.ensure(r)?;
        let zero = alphabet.zero();
        Ok(Configuration::new(
            zero,
            ball.elements()[..ball.ball_len(r)]
                .iter()
                .map(|g| (g.clone(), self.at(g))),
        ))
    }

    /// `x|_F` for the given domain.
    pub fn restrict(&self, domain: &[Element]) -> Pattern {
        Pattern {
            domain: domain.to_vec(),
            values: domain.iter().map(|g| self.at(g)).collect(),
        }
    }

    /// Dense copy of the values on `B(r)`; reads past `B(r)` return the default.
    ///
    /// Panics if `ball` does not cover `r`.
    pub fn to_dense(&self, ball: &Ball, r: u32) -> Dense {
        assert!(ball.covers(r), "ball does not cover radius {r}");
        let n = ball.ball_len(r);
        let mut values = vec![self.default; n];
        for (g, &s) in &self.overrides {
            if let Some(i) = ball.index_of(g) {
                if i < n {
                    values[i] = s;
                }
            }
        }
        Dense {
            values,
            default: self.default,
        }
    }

    /// Configuration equal to `dense` on its stored prefix and to its default beyond.
    pub fn from_dense(ball: &Ball, dense: &Dense) -> Configuration {
        Configuration::new(
            dense.default,
            dense
                .values
                .iter()
                .enumerate()
                .map(|(i, &s)| (ball.element(i).clone(), s)),
        )
    }
}

/// Values on an explicit finite domain.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Pattern {
    domain: Vec<Element>,
    values: Vec<Symbol>,
}

impl Pattern {
    pub fn new(domain: Vec<Element>, values: Vec<Symbol>) -> Result<Self> {
        if domain.len() != values.len() {
            return Err(Error::precondition("pattern values must match the domain"));
        }
        Ok(Pattern { domain, values })
    }

    pub fn domain(&self) -> &[Element] {
        &self.domain
    }

    pub fn values(&self) -> &[Symbol] {
        &self.values
    }

    pub fn get(&self, g: &Element) -> Option<Symbol> {
        self.domain
            .iter()
            .position(|d| d == g)
            .map(|i| self.values[i])
    }

    /// Extends the pattern by `fill` outside its domain.
    pub fn totalize(&self, fill: Symbol) -> Configuration {
        Configuration::new(
            fill,
            self.domain.iter().cloned().zip(self.values.iter().copied()),
        )
    }
}

/// Ball-indexed configuration used on hot paths. Index `i` refers to the BFS
/// numbering of a [`Ball`]; indices past `values` read as `default`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dense {
    values: Vec<Symbol>,
    default: Symbol,
}

impl Dense {
    pub fn new(values: Vec<Symbol>, default: Symbol) -> Self {
        Dense { values, default }
    }

    #[inline]
    pub fn at(&self, i: usize) -> Symbol {
        self.values.get(i).copied().unwrap_or(self.default)
    }

    pub fn values(&self) -> &[Symbol] {
        &self.values
    }

    pub fn default_symbol(&self) -> Symbol {
        self.default
    }

    /// Largest index holding a symbol other than `zero`, if the default is `zero`.
    pub fn last_nonzero(&self, zero: Symbol) -> Option<usize> {
        self.values.iter().rposition(|&s| s != zero)
    }

    /// The translate `g x` read on `B(r)`, where `g_inverse` is the ball index of
    /// `g^{-1}`: `(g x)(h) = x(g^{-1} h)`.
    pub fn shifted(
        &self,
        ball: &Ball,
        g_inverse: usize,
        r: u32,
        scratch: &mut Vec<usize>,
    ) -> Dense {
        assert!(
            ball.window_into(g_inverse, r, scratch),
            "translate window leaves the explored ball"
        );
        Dense {
            values: scratch.iter().map(|&i| self.at(i)).collect(),
            default: self.default,
        }
    }
}

/// All `|A|^n` symbol vectors of length `n`, in lexicographic order (first site
/// most significant).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PatternSpace {
    base: usize,
    len: usize,
}

impl PatternSpace {
    pub fn new(base: usize, len: usize) -> Self {
        PatternSpace { base, len }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// `|A|^n`, or `None` when it does not fit in 64 bits.
    pub fn count(&self) -> Option<u64> {
        (self.base as u64).checked_pow(self.len as u32)
    }

    pub fn describe_count(&self) -> String {
        match self.count() {
            Some(c) => c.to_string(),
            None => format!("{}^{}", self.base, self.len),
        }
    }

    /// Errors unless the space has at most `cap` points.
    pub fn check_cap(&self, cap: u64) -> Result<u64> {
        match self.count() {
            Some(c) if c <= cap => Ok(c),
            _ => Err(Error::CapExceeded {
                count: self.describe_count(),
                cap,
            }),
        }
    }

    pub fn index_of(&self, values: &[Symbol]) -> usize {
        values
            .iter()
            .fold(0usize, |acc, &s| acc * self.base + s as usize)
    }

    pub fn pattern_at(&self, mut index: usize) -> Vec<Symbol> {
        let mut out = vec![0; self.len];
        for slot in out.iter_mut().rev() {
            *slot = (index % self.base) as Symbol;
            index /= self.base;
        }
        out
    }

    /// Iterates the space; callers check the cap first.
    pub fn iter(&self) -> impl Iterator<Item = Vec<Symbol>> + '_ {
        let total = self.count().unwrap_or(u64::MAX);
        (0..total).map(move |i| self.pattern_at(i as usize))
    }
}

/// Every pattern on `domain`, lexicographic in symbol order.
pub fn enumerate_patterns<'a>(
    alphabet: &Alphabet,
    domain: &'a [Element],
    cap: u64,
) -> Result<impl Iterator<Item = Pattern> + 'a> {
    let space = PatternSpace::new(alphabet.size(), domain.len());
    let count = space.check_cap(cap)?;
    Ok((0..count).map(move |i| Pattern {
        domain: domain.to_vec(),
        values: space.pattern_at(i as usize),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Lattice;
    use std::sync::Arc;

    #[test]
    fn alphabet_validation() {
        assert!(Alphabet::new(&["0", "0"], "0").is_err());
        assert!(Alphabet::new(&["ab"], "ab").is_err());
        assert!(Alphabet::new(&["0", "1"], "2").is_err());
        let a = Alphabet::new(&["x", "y", "z"], "y").unwrap();
        assert_eq!(a.zero(), 1);
        assert_eq!(a.parse_pattern("zyx", 3).unwrap(), vec![2, 1, 0]);
    }

    #[test]
    fn canonical_form_drops_default_overrides() {
        let x = Configuration::new(0, [(Lattice::vector(&[1]), 0), (Lattice::vector(&[2]), 1)]);
        assert_eq!(x.overrides().len(), 1);
    }

    #[test]
    fn shift_moves_support() {
        let z: SharedGroup = Arc::new(Lattice::new(1));
        let x = Configuration::new(0, [(Lattice::vector(&[0]), 1)]);
        let y = x.shift(&z, &Lattice::vector(&[1]));
        assert_eq!(y, Configuration::new(0, [(Lattice::vector(&[1]), 1)]));
        assert_eq!(y.at(&Lattice::vector(&[1])), 1);
        let back = y.shift(&z, &z.inverse(&Lattice::vector(&[1])));
        assert_eq!(back, x);
    }

    #[test]
    fn pattern_space_order() {
        let sp = PatternSpace::new(2, 5);
        assert_eq!(sp.count(), Some(32));
        let all: Vec<Vec<Symbol>> = sp.iter().collect();
        assert_eq!(all[0], vec![0; 5]);
        assert_eq!(all[1], vec![0, 0, 0, 0, 1]);
        assert_eq!(sp.index_of(&all[19]), 19);
        assert_eq!(PatternSpace::new(1, 7).count(), Some(1));
        assert!(PatternSpace::new(2, 85).check_cap(1 << 16).is_err());
        assert_eq!(PatternSpace::new(2, 85).describe_count(), "2^85");
    }
}

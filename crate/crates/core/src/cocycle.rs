//! Continuous cocycles given by finite-window local rules.
//!
//! A [`LocalCocycle`] stores one rule per positive generator `s`, reading the
//! pattern `x|B(L)`. Inverse generators use `c(s^{-1}, y) = c(s, s^{-1} y)^{-1}`.
//! For any `g` with canonical word `t_1 ... t_l`,
//!
//! `c(g, x) = c(t_1, k_1 x) ... c(t_l, x)`, with `k_j = t_{j+1} ... t_l`,
//!
//! and `(k x)|B(L)` is `x` read on the translate `k^{-1} B(L)`, which is what
//! [`Ball::window_into`] produces.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cayley::{Ball, CayleyExplorer, Path};
use crate::error::{Error, Result};
use crate::group::{Element, SharedGroup};
use crate::shift::{Alphabet, Configuration, Dense, PatternSpace, Symbol};

/// Largest rule table accepted by the constructors and loaders.
pub const TABLE_CAP: u64 = 1 << 20;

/// Window counts up to this size are swept exhaustively by default.
pub const EXHAUSTIVE_CAP: u64 = 1 << 16;

/// A rule for one positive generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rule {
    /// Values indexed by the `B(L)` pattern, lexicographic in canonical site order.
    Table(Vec<Element>),
    /// `prod_m w_m^{x(site_m)}` over the listed sites (ball indices inside
    /// `B(L)`, ascending), with the symbol read as its alphabet index.
    WeightedSiteSum(Vec<(usize, Element)>),
}

/// A `(generator, pattern)` rule entry read during an evaluation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RuleHit {
    /// Index of the positive generator whose rule was read.
    pub generator: usize,
    /// The `B(L)` pattern it was read on.
    pub pattern: Vec<Symbol>,
}

/// A failure of `c(gh, x) = c(g, hx) c(h, x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityWitness {
    pub g: Element,
    pub h: Element,
    /// Radius of the window `x` was read on, `|g| + |h| + L`.
    pub window_radius: u32,
    /// `x` on `B(window_radius)` in canonical order.
    pub window: Vec<Symbol>,
    pub left: Element,
    pub right: Element,
    /// Rule entries read by the three evaluations, sorted and deduplicated.
    pub rule_hits: Vec<RuleHit>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocycleReport {
    pub radius: u32,
    pub configurations: u64,
    pub checked_pairs: u64,
    pub exhaustive: bool,
    pub seed: u64,
    pub failure_count: u64,
    /// The first `max_witnesses` failures in sweep order.
    pub witnesses: Vec<IdentityWitness>,
}

impl CocycleReport {
    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }
}

/// How a sweep chooses configurations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exhaustive {
    /// Exhaustive when the window count is at most the cap, sampled otherwise.
    Auto,
    /// Always exhaustive; exceeding the cap is an error.
    Always,
    /// Always sampled.
    Never,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SweepOptions {
    pub samples: usize,
    pub seed: u64,
    pub exhaustive: Exhaustive,
    pub cap: u64,
    pub max_witnesses: usize,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            samples: 10_000,
            seed: 0,
            exhaustive: Exhaustive::Auto,
            cap: EXHAUSTIVE_CAP,
            max_witnesses: 16,
        }
    }
}

impl SweepOptions {
    /// Whether a window of `sites` sites is swept exhaustively.
    pub fn resolve(&self, alphabet: &Alphabet, sites: usize) -> Result<bool> {
        let space = PatternSpace::new(alphabet.size(), sites);
        match self.exhaustive {
            Exhaustive::Always => space.check_cap(self.cap).map(|_| true),
            Exhaustive::Never => Ok(false),
            Exhaustive::Auto => Ok(space.count().is_some_and(|c| c <= self.cap)),
        }
    }
}

/// Random symbols on the first `len` sites, with a random default.
pub fn random_dense(rng: &mut ChaCha8Rng, alphabet: &Alphabet, len: usize) -> Dense {
    let n = alphabet.size();
    let values = (0..len).map(|_| rng.gen_range(0..n) as Symbol).collect();
    Dense::new(values, rng.gen_range(0..n) as Symbol)
}

/// Independent reproducible stream `i` of a seeded sweep.
pub fn sweep_rng(seed: u64, i: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i);
    rng
}

/// Suffix links for evaluating a cocycle on a whole ball at once.
///
/// Suffixes of canonical words are canonical, so for `g = t g'` with `t` the
/// first letter, `c(g, x) = c(t, g' x) c(g', x)` reproduces the canonical
/// telescoping exactly with one rule read per element.
#[derive(Clone, Debug)]
pub struct Telescope {
    radius: u32,
    // Per element of B(radius) past the identity: (first letter, suffix, suffix inverse).
    links: Vec<(usize, usize, usize)>,
}

impl Telescope {
    /// The ball must cover `radius`.
    pub fn new(ball: &Ball, radius: u32) -> Self {
        let links = (1..ball.ball_len(radius))
            .map(|i| {
                let w = ball.word(i);
                let suffix = ball.walk(0, &w[1..]).expect("suffix inside the ball");
                let inv = ball.inverse_of(suffix).expect("inverse inside the ball");
                (w[0], suffix, inv)
            })
            .collect();
        Telescope { radius, links }
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.links.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// A local transfer function: values on `B(radius)` patterns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalTransfer {
    pub radius: u32,
    pub values: Vec<Element>,
}

impl LocalTransfer {
    pub fn constant(
        radius: u32,
        sites: usize,
        alphabet: &Alphabet,
        value: Element,
    ) -> Result<Self> {
        let count = PatternSpace::new(alphabet.size(), sites).check_cap(TABLE_CAP)?;
        Ok(LocalTransfer {
            radius,
            values: vec![value; count as usize],
        })
    }

    /// `b0(x|B(radius))` for a pattern given in canonical site order.
    pub fn value(&self, alphabet: &Alphabet, pattern: &[Symbol]) -> &Element {
        &self.values[PatternSpace::new(alphabet.size(), pattern.len()).index_of(pattern)]
    }
}

#[derive(Clone, Debug)]
pub struct LocalCocycle {
    explorer: Arc<CayleyExplorer>,
    target: SharedGroup,
    alphabet: Alphabet,
    window: u32,
    window_sites: usize,
    rules: Vec<Rule>,
    // Per generator of G: (index into `rules`, whether it is read inverted).
    slots: Vec<(usize, bool)>,
}

impl LocalCocycle {
    /// Rules are given per positive generator, in the order of
    /// [`CayleyExplorer::positive_generators`].
    pub fn new(
        explorer: Arc<CayleyExplorer>,
        target: SharedGroup,
        alphabet: Alphabet,
        window: u32,
        rules: Vec<Rule>,
    ) -> Result<Self> {
        let positive = explorer.positive_generators().to_vec();
        if rules.len() != positive.len() {
            return Err(Error::precondition(format!(
                "expected {} rules, one per positive generator, got {}",
                positive.len(),
                rules.len()
            )));
        }
        let ball = explorer.ensure(window)?;
        let window_sites = ball.ball_len(window);
        let space = PatternSpace::new(alphabet.size(), window_sites);
        for (k, rule) in rules.iter().enumerate() {
            match rule {
                Rule::Table(values) => {
                    let count = space.check_cap(TABLE_CAP)?;
                    if values.len() as u64 != count {
                        let generator = explorer.oracle().generator_names()[positive[k]].clone();
                        let missing = space.pattern_at(values.len().min(count as usize));
                        return Err(Error::Incomplete {
                            generator,
                            pattern: alphabet.pattern_string(&missing),
                        });
                    }
                }
                Rule::WeightedSiteSum(weights) => {
                    if weights.iter().any(|&(m, _)| m >= window_sites)
                        || weights.windows(2).any(|w| w[0].0 >= w[1].0)
                    {
                        return Err(Error::precondition(
                            "weighted-site-sum sites must be ascending and inside B(L)",
                        ));
                    }
                }
            }
        }
        let mut slots = vec![(usize::MAX, false); explorer.generator_count()];
        for (k, &p) in positive.iter().enumerate() {
            slots[p] = (k, false);
            let q = explorer.inverse_generator(p);
            if q != p {
                slots[q] = (k, true);
            }
        }
        Ok(LocalCocycle {
            explorer,
            target,
            alphabet,
            window,
            window_sites,
            rules,
            slots,
        })
    }

    pub fn explorer(&self) -> &Arc<CayleyExplorer> {
        &self.explorer
    }

    pub fn source(&self) -> &SharedGroup {
        self.explorer.oracle()
    }

    pub fn target(&self) -> &SharedGroup {
        &self.target
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// The window radius `L`.
    pub fn window(&self) -> u32 {
        self.window
    }

    /// `|B(L)|`.
    pub fn window_sites(&self) -> usize {
        self.window_sites
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn pattern_space(&self) -> PatternSpace {
        PatternSpace::new(self.alphabet.size(), self.window_sites)
    }

    /// Table entry of positive rule `k` at a pattern index.
    pub fn entry(&self, k: usize, pattern: usize) -> Option<&Element> {
        match &self.rules[k] {
            Rule::Table(v) => v.get(pattern),
            Rule::WeightedSiteSum(_) => None,
        }
    }

    /// Overwrites a table entry, returning the previous value.
    pub fn set_entry(&mut self, k: usize, pattern: usize, value: Element) -> Result<Element> {
        match &mut self.rules[k] {
            Rule::Table(v) if pattern < v.len() => Ok(std::mem::replace(&mut v[pattern], value)),
            Rule::Table(_) => Err(Error::precondition("pattern index out of range")),
            Rule::WeightedSiteSum(_) => Err(Error::precondition("rule is not a table")),
        }
    }

    fn rule_value(&self, k: usize, pattern: &[Symbol]) -> Element {
        match &self.rules[k] {
            Rule::Table(values) => values[self.pattern_space().index_of(pattern)].clone(),
            Rule::WeightedSiteSum(weights) => {
                let h = &self.target;
                weights.iter().fold(h.identity(), |acc, (m, w)| {
                    h.multiply(&acc, &h.pow(w, pattern[*m] as i64))
                })
            }
        }
    }

    /// Rule value of positive rule `k` on an explicit `B(L)` pattern.
    pub fn rule_at(&self, k: usize, pattern: &[Symbol]) -> Element {
        self.rule_value(k, pattern)
    }

    /// `c(w, x)` along an arbitrary generator word `w`, read left to right, for
    /// `x` stored densely on the ball. The ball must cover `|w| + L`.
    pub fn evaluate_word_dense(
        &self,
        ball: &Ball,
        word: &[usize],
        x: &Dense,
        mut trace: Option<&mut Vec<RuleHit>>,
    ) -> Element {
        let h = &self.target;
        let positive = self.explorer.positive_generators();
        let mut acc = h.identity();
        let mut base = 0usize;
        let mut sites = Vec::with_capacity(self.window_sites);
        let mut pattern = Vec::with_capacity(self.window_sites);
        for &t in word.iter().rev() {
            let (k, inverted) = self.slots[t];
            let at = if inverted {
                ball.neighbor(base, positive[k])
                    .expect("evaluation stays inside the explored ball")
            } else {
                base
            };
            assert!(
                ball.window_into(at, self.window, &mut sites),
                "evaluation window leaves the explored ball"
            );
            pattern.clear();
            pattern.extend(sites.iter().map(|&i| x.at(i)));
            let mut f = self.rule_value(k, &pattern);
            if inverted {
                f = h.inverse(&f);
            }
            if let Some(tr) = trace.as_deref_mut() {
                tr.push(RuleHit {
                    generator: positive[k],
                    pattern: pattern.clone(),
                });
            }
            acc = h.multiply(&f, &acc);
            base = ball
                .neighbor(base, self.explorer.inverse_generator(t))
                .expect("evaluation stays inside the explored ball");
        }
        acc
    }

    /// `c(g, x)` for every `g` in the telescope's ball, in canonical order. The
    /// ball must cover the telescope radius plus `L`.
    pub fn evaluate_all(&self, ball: &Ball, tel: &Telescope, x: &Dense) -> Vec<Element> {
        self.evaluate_upto(ball, tel, tel.radius, x)
    }

    /// [`LocalCocycle::evaluate_all`] restricted to `B(r)` for `r` up to the
    /// telescope radius.
    pub fn evaluate_upto(&self, ball: &Ball, tel: &Telescope, r: u32, x: &Dense) -> Vec<Element> {
        assert!(r <= tel.radius, "radius beyond the telescope");
        let n = ball.ball_len(r);
        let h = &self.target;
        let positive = self.explorer.positive_generators();
        let mut out = Vec::with_capacity(tel.len());
        out.push(h.identity());
        let mut sites = Vec::with_capacity(self.window_sites);
        let mut pattern = Vec::with_capacity(self.window_sites);
        for &(t, suffix, suffix_inv) in &tel.links[..n - 1] {
            let (k, inverted) = self.slots[t];
            let at = if inverted {
                ball.neighbor(suffix_inv, positive[k])
                    .expect("evaluation stays inside the explored ball")
            } else {
                suffix_inv
            };
            assert!(
                ball.window_into(at, self.window, &mut sites),
                "evaluation window leaves the explored ball"
            );
            pattern.clear();
            pattern.extend(sites.iter().map(|&i| x.at(i)));
            let f = self.rule_value(k, &pattern);
            let f = if inverted { h.inverse(&f) } else { f };
            out.push(h.multiply(&f, &out[suffix]));
        }
        out
    }

    /// `c(g, x)` for `g = ball.element(g)` along its canonical word.
    pub fn evaluate_dense(&self, ball: &Ball, g: usize, x: &Dense) -> Element {
        self.evaluate_word_dense(ball, &ball.word(g), x, None)
    }

    /// `c(g, x)` along the canonical geodesic word of `g`.
    pub fn evaluate(&self, g: &Element, x: &Configuration) -> Result<Element> {
        let word = self.explorer.canonical_word(g)?;
        self.evaluate_word(&word, x)
    }

    /// `c(w, x)` along an arbitrary generator word.
    pub fn evaluate_word(&self, word: &[usize], x: &Configuration) -> Result<Element> {
        let r = word.len() as u32 + self.window;
        let ball = self.explorer.ensure(r)?;
        let dense = x.to_dense(&ball, r);
        Ok(self.evaluate_word_dense(&ball, word, &dense, None))
    }

    /// Checks `c(gh, x) = c(g, hx) c(h, x)` for all `g, h` in `B(r)`, with `x`
    /// ranging over the window `B(2r + L)`.
    ///
    /// Besides the exhaustive or sampled configurations, every `B(L)` pattern is
    /// placed at the identity with a zero and a random surrounding, so that each
    /// table entry is exercised.
    pub fn check_identity(&self, r: u32, opts: &SweepOptions) -> Result<CocycleReport> {
        let l = self.window;
        let ball = self.explorer.ensure(2 * r + l)?;
        let big = ball.ball_len(2 * r + l);
        let exhaustive = opts.resolve(&self.alphabet, big)?;
        let inner = ball.ball_len(r);
        // products[h * inner + g] = gh
        let mut products = Vec::with_capacity(inner * inner);
        let mut inverses = Vec::with_capacity(inner);
        for h in 0..inner {
            inverses.push(ball.inverse_of(h).expect("B(r) explored"));
            for g in 0..inner {
                let gh = ball.multiply(g, h).expect("B(2r) explored");
                products.push(gh);
            }
        }
        let tel_r = Telescope::new(&ball, r);
        let tel_2r = Telescope::new(&ball, 2 * r);
        let pairs = (inner * inner) as u64;

        let space = PatternSpace::new(self.alphabet.size(), big);
        let primary = if exhaustive {
            space.count().expect("checked by resolve")
        } else {
            opts.samples as u64
        };
        let local = self.pattern_space();
        let targeted = match local.count() {
            Some(c) if c <= opts.cap && self.rules.iter().any(|r| matches!(r, Rule::Table(_))) => c,
            _ => 0,
        };
        let total = primary + 2 * targeted;
        let zero = self.alphabet.zero();
        let make = |i: u64| -> Dense {
            if i < primary {
                if exhaustive {
                    Dense::new(space.pattern_at(i as usize), zero)
                } else {
                    random_dense(&mut sweep_rng(opts.seed, i), &self.alphabet, big)
                }
            } else {
                let j = i - primary;
                let p = local.pattern_at((j / 2) as usize);
                let mut d = if j.is_multiple_of(2) {
                    Dense::new(vec![zero; big], zero)
                } else {
                    random_dense(&mut sweep_rng(opts.seed, i), &self.alphabet, big)
                };
                let mut values = d.values().to_vec();
                values[..p.len()].copy_from_slice(&p);
                d = Dense::new(values, d.default_symbol());
                d
            }
        };

        let per_config: Vec<(u64, Vec<IdentityWitness>)> = (0..total)
            .into_par_iter()
            .map(|i| {
                let x = make(i);
                self.identity_failures(
                    &ball,
                    r,
                    (&products, &inverses),
                    (&tel_r, &tel_2r),
                    &x,
                    opts.max_witnesses,
                )
            })
            .collect();
        let mut failure_count = 0;
        let mut witnesses = Vec::new();
        for (n, ws) in per_config {
            failure_count += n;
            for w in ws {
                if witnesses.len() < opts.max_witnesses {
                    witnesses.push(w);
                }
            }
        }
        Ok(CocycleReport {
            radius: r,
            configurations: total,
            checked_pairs: total * pairs,
            exhaustive,
            seed: opts.seed,
            failure_count,
            witnesses,
        })
    }

    fn identity_failures(
        &self,
        ball: &Ball,
        r: u32,
        (products, inverses): (&[usize], &[usize]),
        (tel_r, tel_2r): (&Telescope, &Telescope),
        x: &Dense,
        max_witnesses: usize,
    ) -> (u64, Vec<IdentityWitness>) {
        let grp = &self.target;
        let inner = inverses.len();
        let on_x = self.evaluate_all(ball, tel_2r, x);
        let mut scratch = Vec::new();
        let mut failures = 0;
        let mut out = Vec::new();
        for h in 0..inner {
            let hx = x.shifted(ball, inverses[h], r + self.window, &mut scratch);
            let on_hx = self.evaluate_all(ball, tel_r, &hx);
            for g in 0..inner {
                let gh = products[h * inner + g];
                let right = grp.multiply(&on_hx[g], &on_x[h]);
                if right != on_x[gh] {
                    failures += 1;
                    if out.len() < max_witnesses {
                        out.push(self.identity_witness(ball, g, h, gh, &hx, x, right));
                    }
                }
            }
        }
        (failures, out)
    }

    #[allow(clippy::too_many_arguments)]
    fn identity_witness(
        &self,
        ball: &Ball,
        g: usize,
        h: usize,
        gh: usize,
        hx: &Dense,
        x: &Dense,
        right: Element,
    ) -> IdentityWitness {
        let mut hits = Vec::new();
        let left = self.evaluate_word_dense(ball, &ball.word(gh), x, Some(&mut hits));
        self.evaluate_word_dense(ball, &ball.word(g), hx, Some(&mut hits));
        self.evaluate_word_dense(ball, &ball.word(h), x, Some(&mut hits));
        hits.sort();
        hits.dedup();
        let window_radius = ball.norm(g) + ball.norm(h) + self.window;
        IdentityWitness {
            g: ball.element(g).clone(),
            h: ball.element(h).clone(),
            window_radius,
            window: (0..ball.ball_len(window_radius)).map(|i| x.at(i)).collect(),
            left,
            right,
            rule_hits: hits,
        }
    }

    /// Window check: for `x, y` agreeing on the `L`-neighborhood
    /// of `path`, `c(end^{-1}, .) c(start^{-1}, .)^{-1}` takes the same value.
    pub fn dependence_window_check(
        &self,
        path: &Path,
        x: &Configuration,
        y: &Configuration,
    ) -> Result<bool> {
        let nbhd = self.explorer.l_neighborhood(path.vertices(), self.window)?;
        if let Some(g) = nbhd.iter().find(|g| x.at(g) != y.at(g)) {
            return Err(Error::precondition(format!(
                "configurations differ at {} inside the window",
                self.source().label(g)
            )));
        }
        let (first, last) = match (path.vertices().first(), path.vertices().last()) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(Error::precondition("empty path")),
        };
        let g = self.source();
        let h = &self.target;
        let value = |z: &Configuration| -> Result<Element> {
            let a = self.evaluate(&g.inverse(last), z)?;
            let b = self.evaluate(&g.inverse(first), z)?;
            Ok(h.multiply(&a, &h.inverse(&b)))
        };
        Ok(value(x)? == value(y)?)
    }
}

/// `c(g, x) = phi0(g)`, with `L = 0`. Images are given per positive generator.
pub fn make_hom_cocycle(
    explorer: Arc<CayleyExplorer>,
    target: SharedGroup,
    alphabet: Alphabet,
    images: &[Element],
) -> Result<LocalCocycle> {
    let n = alphabet.size();
    let rules = images
        .iter()
        .map(|p| Rule::Table(vec![p.clone(); n]))
        .collect();
    LocalCocycle::new(explorer, target, alphabet, 0, rules)
}

/// The twisted cocycle `c(s, x) = b0((s x)|B(rho)) phi0(s) b0(x|B(rho))^{-1}`,
/// tabulated on `B(rho + 1)` patterns.
pub fn make_twisted(
    explorer: Arc<CayleyExplorer>,
    target: SharedGroup,
    alphabet: Alphabet,
    images: &[Element],
    transfer: &LocalTransfer,
) -> Result<LocalCocycle> {
    let rho = transfer.radius;
    let l = rho + 1;
    let ball = explorer.ensure(l + 1)?;
    let small = ball.ball_len(rho);
    let expected = PatternSpace::new(alphabet.size(), small).check_cap(TABLE_CAP)?;
    if transfer.values.len() as u64 != expected {
        return Err(Error::precondition(
            "transfer table does not cover every B(rho) pattern",
        ));
    }
    let space = PatternSpace::new(alphabet.size(), ball.ball_len(l));
    let count = space.check_cap(TABLE_CAP)?;
    let h = &target;
    let mut rules = Vec::new();
    for (k, &s) in explorer.positive_generators().iter().enumerate() {
        let sites = ball
            .window(
                ball.neighbor(0, explorer.inverse_generator(s))
                    .expect("B(1) explored"),
                rho,
            )
            .expect("B(rho + 1) explored");
        let phi = &images[k];
        let mut table = Vec::with_capacity(count as usize);
        for i in 0..count as usize {
            let q = space.pattern_at(i);
            let moved: Vec<Symbol> = sites.iter().map(|&m| q[m]).collect();
            let after = transfer.value(&alphabet, &moved);
            let before = transfer.value(&alphabet, &q[..small]);
            table.push(h.multiply(&h.multiply(after, phi), &h.inverse(before)));
        }
        rules.push(Rule::Table(table));
    }
    LocalCocycle::new(explorer, target, alphabet, l, rules)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{Lattice, Symmetric};

    fn z(d: usize) -> Arc<CayleyExplorer> {
        Arc::new(CayleyExplorer::new(Arc::new(Lattice::new(d))).unwrap())
    }

    fn sum_cocycle() -> LocalCocycle {
        let h: SharedGroup = Arc::new(Lattice::new(1));
        LocalCocycle::new(
            z(1),
            h,
            Alphabet::binary(),
            0,
            vec![Rule::WeightedSiteSum(vec![(0, Lattice::vector(&[1]))])],
        )
        .unwrap()
    }

    #[test]
    fn telescoping_on_z() {
        let c = sum_cocycle();
        let x = Configuration::new(
            0,
            [
                (Lattice::vector(&[0]), 1),
                (Lattice::vector(&[-2]), 1),
                (Lattice::vector(&[1]), 1),
            ],
        );
        // c(3, x) = u^{x(0) + x(-1) + x(-2)}
        assert_eq!(
            c.evaluate(&Lattice::vector(&[3]), &x).unwrap(),
            Lattice::vector(&[2])
        );
        // c(-2, x) = u^{-x(1) - x(2)}
        assert_eq!(
            c.evaluate(&Lattice::vector(&[-2]), &x).unwrap(),
            Lattice::vector(&[-1])
        );
        assert_eq!(
            c.evaluate(&Lattice::vector(&[0]), &x).unwrap(),
            Lattice::vector(&[0])
        );
    }

    #[test]
    fn hom_cocycle_passes_exhaustively() {
        let h: SharedGroup = Arc::new(Symmetric::new(3).unwrap());
        let s = h.parse_label("(1 2)").unwrap();
        let c = make_hom_cocycle(z(2), h, Alphabet::binary(), &[s.clone(), s]).unwrap();
        let opts = SweepOptions {
            exhaustive: Exhaustive::Never,
            samples: 20,
            ..SweepOptions::default()
        };
        let report = c.check_identity(2, &opts).unwrap();
        assert!(report.passed());
        assert_eq!(report.checked_pairs, report.configurations * 13 * 13);
    }

    #[test]
    fn noncommuting_images_fail() {
        let h: SharedGroup = Arc::new(Symmetric::new(3).unwrap());
        let a = h.parse_label("(1 2)").unwrap();
        let b = h.parse_label("(2 3)").unwrap();
        let c = make_hom_cocycle(z(2), h, Alphabet::binary(), &[a, b]).unwrap();
        let opts = SweepOptions {
            samples: 2,
            exhaustive: Exhaustive::Never,
            ..SweepOptions::default()
        };
        let report = c.check_identity(1, &opts).unwrap();
        assert!(!report.passed());
        assert!(!report.witnesses.is_empty());
    }

    #[test]
    fn twisted_with_trivial_transfer_is_hom() {
        let ex = z(2);
        let h: SharedGroup = Arc::new(Symmetric::new(3).unwrap());
        let s = h.parse_label("(1 2)").unwrap();
        let a = Alphabet::binary();
        let b0 = LocalTransfer::constant(0, 1, &a, h.identity()).unwrap();
        let c = make_twisted(
            ex.clone(),
            h.clone(),
            a.clone(),
            &[s.clone(), s.clone()],
            &b0,
        )
        .unwrap();
        assert_eq!(c.window(), 1);
        for rule in c.rules() {
            match rule {
                Rule::Table(v) => assert!(v.iter().all(|e| *e == s)),
                _ => unreachable!(),
            }
        }
    }

    #[test]
    fn incomplete_table_names_missing_pattern() {
        let h: SharedGroup = Arc::new(Lattice::new(1));
        let err = LocalCocycle::new(
            z(1),
            h,
            Alphabet::binary(),
            1,
            vec![Rule::Table(vec![Lattice::vector(&[0]); 5])],
        )
        .unwrap_err();
        assert!(err.to_string().contains("`101`"), "{err}");
    }
}

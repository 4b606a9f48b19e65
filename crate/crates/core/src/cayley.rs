//! Cayley-graph geometry over a group oracle.
//!
//! [`CayleyExplorer`] grows a breadth-first ball around the identity on demand.
//! Elements are numbered in BFS order with generator-index tie-break, which makes
//! every element's BFS parent chain spell its lexicographically minimal geodesic
//! word, and makes `B(r)` the index prefix `0..ball_len(r)`.
//!
//! Growth happens behind a lock on a shared [`Ball`] snapshot. Callers that need
//! many queries take a snapshot once with [`CayleyExplorer::ensure`] and then work
//! on plain indices without further locking.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::{Arc, OnceLock, RwLock};

use crate::error::{Error, Result};
use crate::group::{Element, SharedGroup};

const UNKNOWN: usize = usize::MAX;

/// Exploration limits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExplorerConfig {
    /// Hard cap on the explored radius.
    pub max_radius: u32,
    /// Hard cap on the number of explored elements.
    pub max_elements: usize,
    /// Depth to which the biinfinite geodesic is certified; segments up to this
    /// half-length are restrictions of one fixed geodesic. Lowered to half the
    /// largest radius whose ball fits `max_elements`.
    pub geodesic_horizon: u32,
}

impl Default for ExplorerConfig {
    fn default() -> Self {
        ExplorerConfig {
            max_radius: 64,
            max_elements: 1 << 20,
            geodesic_horizon: 12,
        }
    }
}

/// An explored ball of the Cayley graph, indexed in BFS order.
#[derive(Clone, Debug)]
pub struct Ball {
    ngen: usize,
    elements: Vec<Element>,
    index: HashMap<Element, usize>,
    norms: Vec<u32>,
    parent: Vec<usize>,
    parent_gen: Vec<u32>,
    // neighbors[i * ngen + s] = index of elements[i] * gen[s], or UNKNOWN if that
    // product lies outside the explored ball.
    neighbors: Vec<usize>,
    // sphere_starts[k] is the first index of sphere k; the last entry is len().
    sphere_starts: Vec<usize>,
    radius: u32,
    exhausted: bool,
    inverse_gen: Vec<usize>,
}

impl Ball {
    fn new(oracle: &SharedGroup, inverse_gen: Vec<usize>) -> Self {
        let id = oracle.identity();
        let ngen = oracle.generators().len();
        let mut ball = Ball {
            ngen,
            elements: vec![id.clone()],
            index: HashMap::from([(id.clone(), 0)]),
            norms: vec![0],
            parent: vec![UNKNOWN],
            parent_gen: vec![u32::MAX],
            neighbors: vec![UNKNOWN; ngen],
            sphere_starts: vec![0, 1],
            radius: 0,
            exhausted: false,
            inverse_gen,
        };
        for (s, g) in oracle.generators().iter().enumerate() {
            if *g == id {
                ball.neighbors[s] = 0;
            }
        }
        ball
    }

    fn grow(&mut self, oracle: &SharedGroup, target: u32, max_elements: usize) -> Result<()> {
        let gens = oracle.generators();
        while self.radius < target && !self.exhausted {
            let start = self.sphere_starts[self.radius as usize];
            let end = self.elements.len();
            // The next sphere has at most |S(r)| * |gens| elements.
            if end + (end - start) * self.ngen > max_elements {
                return Err(Error::BallTooLarge {
                    radius: self.radius + 1,
                    cap: max_elements,
                });
            }
            for u in start..end {
                for (s, gen) in gens.iter().enumerate() {
                    if self.neighbors[u * self.ngen + s] != UNKNOWN {
                        continue;
                    }
                    let v = oracle.multiply(&self.elements[u], gen);
                    let j = match self.index.get(&v) {
                        Some(&j) => j,
                        None => {
                            let j = self.elements.len();
                            self.index.insert(v.clone(), j);
                            self.elements.push(v);
                            self.norms.push(self.radius + 1);
                            self.parent.push(u);
                            self.parent_gen.push(s as u32);
                            self.neighbors
                                .extend(std::iter::repeat_n(UNKNOWN, self.ngen));
                            j
                        }
                    };
                    self.neighbors[u * self.ngen + s] = j;
                }
            }
            let new_end = self.elements.len();
            if new_end == end {
                self.exhausted = true;
                break;
            }
            for v in end..new_end {
                for (s, gen) in gens.iter().enumerate() {
                    if self.neighbors[v * self.ngen + s] != UNKNOWN {
                        continue;
                    }
                    let w = oracle.multiply(&self.elements[v], gen);
                    if let Some(&j) = self.index.get(&w) {
                        self.neighbors[v * self.ngen + s] = j;
                    }
                }
            }
            self.radius += 1;
            self.sphere_starts.push(new_end);
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Largest radius explored completely.
    pub fn radius(&self) -> u32 {
        self.radius
    }

    /// True when the whole (finite) group has been enumerated.
    pub fn is_exhausted(&self) -> bool {
        self.exhausted
    }

    pub fn covers(&self, r: u32) -> bool {
        self.exhausted || r <= self.radius
    }

    pub fn generator_count(&self) -> usize {
        self.ngen
    }

    pub fn inverse_generator(&self, s: usize) -> usize {
        self.inverse_gen[s]
    }

    pub fn element(&self, i: usize) -> &Element {
        &self.elements[i]
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn index_of(&self, g: &Element) -> Option<usize> {
        self.index.get(g).copied()
    }

    pub fn norm(&self, i: usize) -> u32 {
        self.norms[i]
    }

    /// Number of elements of `B(r)`; they occupy indices `0..ball_len(r)`.
    pub fn ball_len(&self, r: u32) -> usize {
        if r >= self.radius {
            self.elements.len()
        } else {
            self.sphere_starts[r as usize + 1]
        }
    }

    /// Index range of the sphere of radius `r` (empty past the end of a finite group).
    pub fn sphere_range(&self, r: u32) -> std::ops::Range<usize> {
        if r > self.radius {
            return self.elements.len()..self.elements.len();
        }
        self.sphere_starts[r as usize]..self.sphere_starts[r as usize + 1]
    }

    pub fn neighbor(&self, i: usize, s: usize) -> Option<usize> {
        match self.neighbors[i * self.ngen + s] {
            UNKNOWN => None,
            j => Some(j),
        }
    }

    /// BFS parent `(p, s)` with `p * gen[s] = element(i)`; `None` for the identity.
    pub fn parent(&self, i: usize) -> Option<(usize, usize)> {
        (i != 0).then(|| (self.parent[i], self.parent_gen[i] as usize))
    }

    /// Lexicographically minimal geodesic word for `element(i)`, read left to right.
    pub fn word(&self, mut i: usize) -> Vec<usize> {
        let mut w = Vec::with_capacity(self.norms[i] as usize);
        while i != 0 {
            w.push(self.parent_gen[i] as usize);
            i = self.parent[i];
        }
        w.reverse();
        w
    }

    /// Index of `element(i) * (word product)`, if every step stays explored.
    pub fn walk(&self, mut i: usize, word: &[usize]) -> Option<usize> {
        for &s in word {
            i = self.neighbor(i, s)?;
        }
        Some(i)
    }

    pub fn multiply(&self, i: usize, j: usize) -> Option<usize> {
        self.walk(i, &self.word(j))
    }

    pub fn inverse_of(&self, i: usize) -> Option<usize> {
        let w: Vec<usize> = self
            .word(i)
            .iter()
            .rev()
            .map(|&s| self.inverse_gen[s])
            .collect();
        self.walk(0, &w)
    }

    /// `d(i, j) = |i^{-1} j|`, when the product is inside the explored ball.
    pub fn distance(&self, i: usize, j: usize) -> Option<u32> {
        let inv = self.inverse_of(i)?;
        self.walk(inv, &self.word(j)).map(|k| self.norms[k])
    }

    /// Fills `out` with the indices of `base * h` for every `h` in `B(r)`, in
    /// canonical order. Returns false if part of the translate is unexplored.
    pub fn window_into(&self, base: usize, r: u32, out: &mut Vec<usize>) -> bool {
        let n = self.ball_len(r);
        out.clear();
        out.reserve(n);
        out.push(base);
        for (&p, &s) in self.parent[1..n].iter().zip(&self.parent_gen[1..n]) {
            let j = self.neighbors[out[p] * self.ngen + s as usize];
            if j == UNKNOWN {
                return false;
            }
            out.push(j);
        }
        true
    }

    pub fn window(&self, base: usize, r: u32) -> Option<Vec<usize>> {
        let mut out = Vec::new();
        self.window_into(base, r, &mut out).then_some(out)
    }
}

/// A map from an integer interval to the group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Path {
    start: i64,
    vertices: Vec<Element>,
}

impl Path {
    pub fn new(start: i64, vertices: Vec<Element>) -> Self {
        assert!(!vertices.is_empty(), "a path has at least one vertex");
        Path { start, vertices }
    }

    /// First index of the domain.
    pub fn start(&self) -> i64 {
        self.start
    }

    /// Last index of the domain (inclusive).
    pub fn end(&self) -> i64 {
        self.start + self.vertices.len() as i64 - 1
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn get(&self, k: i64) -> Option<&Element> {
        if k < self.start {
            return None;
        }
        self.vertices.get((k - self.start) as usize)
    }

    pub fn vertices(&self) -> &[Element] {
        &self.vertices
    }

    /// Restriction to `lo..=hi`.
    pub fn restrict(&self, lo: i64, hi: i64) -> Option<Path> {
        if lo < self.start || hi > self.end() || lo > hi {
            return None;
        }
        let a = (lo - self.start) as usize;
        let b = (hi - self.start) as usize;
        Some(Path::new(lo, self.vertices[a..=b].to_vec()))
    }

    /// Left translate `k -> g * self(k)`; translates of paths and geodesics are again such.
    pub fn translate(&self, oracle: &SharedGroup, g: &Element) -> Path {
        Path::new(
            self.start,
            self.vertices
                .iter()
                .map(|v| oracle.multiply(g, v))
                .collect(),
        )
    }
}

/// Result of [`CayleyExplorer::half_geodesic_intersection_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionCheck {
    pub holds: bool,
    pub intersection: Vec<Element>,
    pub witness: Option<Element>,
}

/// Connected components of `B(cutoff) \ B(r)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EndsReport {
    pub radius: u32,
    pub cutoff: u32,
    pub unbounded_components: usize,
    pub bounded_components: usize,
    /// Elements of the bounded components, in canonical order.
    pub bounded_elements: Vec<Element>,
    /// Largest norm over `B(r)` and the bounded components.
    pub n_of_r: u32,
    /// Set when the classification changed between cutoff - 1 and cutoff, i.e.
    /// it has not visibly stabilized inside the explored window.
    pub caveat: bool,
}

struct Classification {
    unbounded: usize,
    bounded: usize,
    bounded_idx: Vec<usize>,
    n_of_r: u32,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn classify(ball: &Ball, r: u32, cutoff: u32) -> Classification {
    let lo = ball.ball_len(r);
    let hi = ball.ball_len(cutoff);
    let mut parent: Vec<usize> = (0..hi - lo).collect();
    for v in lo..hi {
        for s in 0..ball.ngen {
            if let Some(w) = ball.neighbor(v, s) {
                if w >= lo && w < hi {
                    let (a, b) = (find(&mut parent, v - lo), find(&mut parent, w - lo));
                    if a != b {
                        parent[a.max(b)] = a.min(b);
                    }
                }
            }
        }
    }
    let mut reaches_cutoff: HashMap<usize, bool> = HashMap::new();
    for v in lo..hi {
        let root = find(&mut parent, v - lo);
        let e = reaches_cutoff.entry(root).or_insert(false);
        *e |= ball.norm(v) == cutoff;
    }
    let unbounded = reaches_cutoff.values().filter(|&&b| b).count();
    let bounded = reaches_cutoff.len() - unbounded;
    let bounded_idx: Vec<usize> = (lo..hi)
        .filter(|&v| !reaches_cutoff[&find(&mut parent, v - lo)])
        .collect();
    let max_ball = if lo > 0 { ball.norm(lo - 1) } else { 0 };
    let n_of_r = bounded_idx
        .iter()
        .map(|&v| ball.norm(v))
        .max()
        .unwrap_or(0)
        .max(max_ball)
        .max(r);
    Classification {
        unbounded,
        bounded,
        bounded_idx,
        n_of_r,
    }
}

/// Certified horizon and the branch of the fixed biinfinite geodesic.
type GeodesicBranch = (u32, Vec<(usize, usize)>);

/// Lazily explored Cayley graph of a group oracle.
#[derive(Debug)]
pub struct CayleyExplorer {
    oracle: SharedGroup,
    config: ExplorerConfig,
    inverse_gen: Vec<usize>,
    positive: Vec<usize>,
    ball: RwLock<Arc<Ball>>,
    geodesic: OnceLock<std::result::Result<GeodesicBranch, String>>,
}

/// Pairs every generator with an inverse generator. Inverse pairs are matched
/// greedily in declaration order; an involution without a later duplicate is
/// paired with itself.
fn pair_generators(oracle: &SharedGroup) -> Result<(Vec<usize>, Vec<usize>)> {
    let gens = oracle.generators();
    let mut inverse = vec![UNKNOWN; gens.len()];
    let mut positive = Vec::new();
    for i in 0..gens.len() {
        if inverse[i] != UNKNOWN {
            continue;
        }
        let inv = oracle.inverse(&gens[i]);
        let later = (i + 1..gens.len()).find(|&j| inverse[j] == UNKNOWN && gens[j] == inv);
        match later {
            Some(j) => {
                inverse[i] = j;
                inverse[j] = i;
            }
            None if inv == gens[i] => inverse[i] = i,
            None => return Err(Error::NotSymmetric(i)),
        }
        positive.push(i);
    }
    Ok((inverse, positive))
}

impl CayleyExplorer {
    pub fn new(oracle: SharedGroup) -> Result<Self> {
        Self::with_config(oracle, ExplorerConfig::default())
    }

    pub fn with_config(oracle: SharedGroup, config: ExplorerConfig) -> Result<Self> {
        let (inverse_gen, positive) = pair_generators(&oracle)?;
        let ball = Ball::new(&oracle, inverse_gen.clone());
        Ok(CayleyExplorer {
            oracle,
            config,
            inverse_gen,
            positive,
            ball: RwLock::new(Arc::new(ball)),
            geodesic: OnceLock::new(),
        })
    }

    pub fn oracle(&self) -> &SharedGroup {
        &self.oracle
    }

    pub fn config(&self) -> ExplorerConfig {
        self.config
    }

    pub fn generator_count(&self) -> usize {
        self.inverse_gen.len()
    }

    /// Index of the generator paired as the inverse of generator `s`.
    pub fn inverse_generator(&self, s: usize) -> usize {
        self.inverse_gen[s]
    }

    /// One generator from each inverse pair, in declaration order.
    pub fn positive_generators(&self) -> &[usize] {
        &self.positive
    }

    /// Snapshot of the current ball, whatever its radius.
    pub fn snapshot(&self) -> Arc<Ball> {
        self.ball.read().expect("explorer lock poisoned").clone()
    }

    /// Explores at least `B(r)` and returns a snapshot. After this call, queries
    /// at or below `r` on the snapshot are read-only.
    pub fn ensure(&self, r: u32) -> Result<Arc<Ball>> {
        if r > self.config.max_radius {
            return Err(Error::RadiusExceeded {
                needed: r,
                max: self.config.max_radius,
            });
        }
        {
            let ball = self.ball.read().expect("explorer lock poisoned");
            if ball.covers(r) {
                return Ok(ball.clone());
            }
        }
        let mut guard = self.ball.write().expect("explorer lock poisoned");
        if !guard.covers(r) {
            Arc::make_mut(&mut guard).grow(&self.oracle, r, self.config.max_elements)?;
        }
        Ok(guard.clone())
    }

    /// Finds `g`, growing the ball until it appears or the cap is hit.
    pub fn locate(&self, g: &Element) -> Result<(Arc<Ball>, usize)> {
        loop {
            let ball = self.snapshot();
            if let Some(i) = ball.index_of(g) {
                return Ok((ball, i));
            }
            if ball.is_exhausted() || ball.radius() >= self.config.max_radius {
                return Err(Error::NotReached {
                    label: self.oracle.label(g),
                    max: self.config.max_radius,
                });
            }
            self.ensure(ball.radius() + 1)?;
        }
    }

    /// Word norm `|g|`.
    pub fn word_norm(&self, g: &Element) -> Result<u32> {
        let (ball, i) = self.locate(g)?;
        Ok(ball.norm(i))
    }

    /// Left-invariant word metric `d(g, h) = |g^{-1} h|`.
    pub fn distance(&self, g: &Element, h: &Element) -> Result<u32> {
        self.word_norm(&self.oracle.multiply(&self.oracle.inverse(g), h))
    }

    /// `B(r)` in canonical order.
    pub fn ball(&self, r: u32) -> Result<Vec<Element>> {
        let ball = self.ensure(r)?;
        Ok(ball.elements()[..ball.ball_len(r)].to_vec())
    }

    pub fn sphere(&self, r: u32) -> Result<Vec<Element>> {
        let ball = self.ensure(r)?;
        Ok(ball.elements()[ball.sphere_range(r)].to_vec())
    }

    /// Lexicographically minimal geodesic word for `g`.
    pub fn canonical_word(&self, g: &Element) -> Result<Vec<usize>> {
        let (ball, i) = self.locate(g)?;
        Ok(ball.word(i))
    }

    /// Canonical word as generator names joined by `.`, or `1` for the identity.
    pub fn word_label(&self, g: &Element) -> Result<String> {
        let w = self.canonical_word(g)?;
        Ok(self.format_word(&w))
    }

    pub fn format_word(&self, w: &[usize]) -> String {
        if w.is_empty() {
            return "1".to_string();
        }
        let names = self.oracle.generator_names();
        w.iter()
            .map(|&s| names[s].as_str())
            .collect::<Vec<_>>()
            .join(".")
    }

    /// Parses a word label back into the element it represents.
    pub fn parse_word_label(&self, label: &str) -> Result<Element> {
        if label == "1" {
            return Ok(self.oracle.identity());
        }
        let names = self.oracle.generator_names();
        let mut word = Vec::new();
        for part in label.split('.') {
            let s = names
                .iter()
                .position(|n| n == part)
                .ok_or_else(|| Error::label(label, format!("unknown generator `{part}`")))?;
            word.push(s);
        }
        Ok(self.oracle.word_product(&word))
    }

    /// Geodesic from the identity to `g` following the canonical word.
    pub fn geodesic_segment(&self, g: &Element) -> Result<Path> {
        let (ball, i) = self.locate(g)?;
        let mut cur = 0;
        let mut vertices = vec![ball.element(0).clone()];
        for s in ball.word(i) {
            cur = ball
                .neighbor(cur, s)
                .expect("canonical word stays inside the ball");
            vertices.push(ball.element(cur).clone());
        }
        Ok(Path::new(0, vertices))
    }

    /// Consecutive vertices differ by one generator.
    pub fn is_path(&self, path: &Path) -> Result<bool> {
        for w in path.vertices().windows(2) {
            if self.distance(&w[0], &w[1])? != 1 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `d(path(m), path(n)) = |n - m|` for every pair of indices.
    pub fn is_geodesic(&self, path: &Path) -> Result<bool> {
        let v = path.vertices();
        for j in 0..v.len() {
            for k in j + 1..v.len() {
                if self.distance(&v[j], &v[k])? as usize != k - j {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// The horizon actually used: the configured one, or half the largest
    /// radius that fits the element cap.
    pub fn geodesic_horizon(&self) -> Result<u32> {
        Ok(self.horizon_geodesic()?.0)
    }

    fn horizon_geodesic(&self) -> Result<(u32, &[(usize, usize)])> {
        let branch = self.geodesic.get_or_init(|| {
            let target = (2 * self.config.geodesic_horizon).min(self.config.max_radius);
            let ball = match self.ensure(target) {
                Ok(ball) => ball,
                Err(Error::BallTooLarge { .. }) => self.snapshot(),
                Err(e) => return Err(e.to_string()),
            };
            let reach = if ball.is_exhausted() {
                ball.radius()
            } else {
                ball.radius().min(target)
            };
            let horizon = self.config.geodesic_horizon.min(reach / 2);
            let mut dead = HashSet::new();
            let mut branch = vec![(0, 0)];
            if extend_branch(&ball, horizon, &mut branch, &mut dead) {
                Ok((horizon, branch))
            } else {
                Err(format!(
                    "no geodesic of span {} inside B({})",
                    2 * horizon,
                    2 * horizon
                ))
            }
        });
        match branch {
            Ok((h, b)) => Ok((*h, b)),
            Err(e) => Err(Error::Infeasible(e.clone())),
        }
    }

    /// Segment `{-n..n}` of a fixed biinfinite geodesic through the identity.
    ///
    /// The geodesic is the lexicographically least branch (forward generator
    /// first, then backward generator, level by level) of the tree of centered
    /// geodesic segments that survives to the horizon. Results for different
    /// `n` are restrictions of one another.
    pub fn extend_biinfinite_geodesic(&self, n: u32) -> Result<Path> {
        let (horizon, branch) = self.horizon_geodesic()?;
        if n > horizon {
            return Err(Error::RadiusExceeded {
                needed: n,
                max: horizon,
            });
        }
        let ball = self.snapshot();
        let n = n as usize;
        let mut vertices = Vec::with_capacity(2 * n + 1);
        for k in (1..=n).rev() {
            vertices.push(ball.element(branch[k].0).clone());
        }
        vertices.push(ball.element(0).clone());
        for &(_, fwd) in &branch[1..=n] {
            vertices.push(ball.element(fwd).clone());
        }
        Ok(Path::new(-(n as i64), vertices))
    }

    fn neighborhood_idx(&self, ball: &Ball, seeds: &[usize], l: u32) -> Vec<usize> {
        let mut dist: HashMap<usize, u32> = HashMap::new();
        let mut queue = VecDeque::new();
        for &t in seeds {
            if dist.insert(t, 0).is_none() {
                queue.push_back(t);
            }
        }
        while let Some(v) = queue.pop_front() {
            let d = dist[&v];
            if d == l {
                continue;
            }
            for s in 0..ball.generator_count() {
                let w = ball
                    .neighbor(v, s)
                    .expect("neighborhood stays inside the ball");
                if let std::collections::hash_map::Entry::Vacant(e) = dist.entry(w) {
                    e.insert(d + 1);
                    queue.push_back(w);
                }
            }
        }
        let mut out: Vec<usize> = dist.into_keys().collect();
        out.sort_unstable();
        out
    }

    fn locate_all(&self, set: &[Element], margin: u32) -> Result<(Arc<Ball>, Vec<usize>)> {
        let mut max = 0;
        for t in set {
            max = max.max(self.word_norm(t)?);
        }
        let ball = self.ensure(max + margin)?;
        let idx = set
            .iter()
            .map(|t| ball.index_of(t).expect("located above"))
            .collect();
        Ok((ball, idx))
    }

    /// `N_L(T) = {g : min_t d(g, t) <= L}` in canonical order.
    pub fn l_neighborhood(&self, set: &[Element], l: u32) -> Result<Vec<Element>> {
        let (ball, idx) = self.locate_all(set, l)?;
        Ok(self
            .neighborhood_idx(&ball, &idx, l)
            .into_iter()
            .map(|i| ball.element(i).clone())
            .collect())
    }

    /// Checks that the `L`-neighborhoods of the two halves of `path` meet only
    /// inside `B(3L)`. The path must be a geodesic defined on at least `{-2L..2L}`.
    pub fn half_geodesic_intersection_check(
        &self,
        path: &Path,
        l: u32,
    ) -> Result<IntersectionCheck> {
        let reach = 2 * l as i64;
        if path.start() > -reach || path.end() < reach || path.get(0).is_none() {
            return Err(Error::precondition(format!(
                "geodesic must cover {{-{reach}..{reach}}}"
            )));
        }
        let forward: Vec<Element> = (0..=path.end())
            .map(|k| path.get(k).unwrap().clone())
            .collect();
        let backward: Vec<Element> = (path.start()..=0)
            .map(|k| path.get(k).unwrap().clone())
            .collect();
        let mut all = forward.clone();
        all.extend(backward.iter().cloned());
        let (ball, idx) = self.locate_all(&all, l)?;
        let (fwd_idx, back_idx) = idx.split_at(forward.len());
        let fwd: HashSet<usize> = self
            .neighborhood_idx(&ball, fwd_idx, l)
            .into_iter()
            .collect();
        let back = self.neighborhood_idx(&ball, back_idx, l);
        let inter: Vec<usize> = back.into_iter().filter(|i| fwd.contains(i)).collect();
        let witness = inter.iter().find(|&&i| ball.norm(i) > 3 * l).copied();
        Ok(IntersectionCheck {
            holds: witness.is_none(),
            intersection: inter.iter().map(|&i| ball.element(i).clone()).collect(),
            witness: witness.map(|i| ball.element(i).clone()),
        })
    }

    /// Components of `B(cutoff) \ B(r)`; a component counts as unbounded iff it
    /// reaches norm `cutoff`.
    pub fn component_report(&self, r: u32, cutoff: u32) -> Result<EndsReport> {
        if cutoff <= r {
            return Err(Error::precondition(format!(
                "cutoff {cutoff} must exceed the cut radius {r}"
            )));
        }
        let ball = self.ensure(cutoff)?;
        let c = classify(&ball, r, cutoff);
        let caveat = if cutoff <= r + 1 {
            true
        } else {
            let prev = classify(&ball, r, cutoff - 1);
            prev.unbounded != c.unbounded || prev.n_of_r != c.n_of_r
        };
        Ok(EndsReport {
            radius: r,
            cutoff,
            unbounded_components: c.unbounded,
            bounded_components: c.bounded,
            bounded_elements: c
                .bounded_idx
                .iter()
                .map(|&i| ball.element(i).clone())
                .collect(),
            n_of_r: c.n_of_r,
            caveat,
        })
    }

    /// A path from `from` to `to` all of whose vertices have norm greater than
    /// `r`, searched inside `B(cutoff)`. `None` means no such path exists there.
    pub fn path_avoiding_ball(
        &self,
        from: &Element,
        to: &Element,
        r: u32,
        cutoff: u32,
    ) -> Result<Option<Path>> {
        let ball = self.ensure(cutoff)?;
        let locate = |g: &Element| {
            ball.index_of(g)
                .filter(|&i| ball.norm(i) <= cutoff)
                .ok_or_else(|| Error::RadiusExceeded {
                    needed: self.word_norm(g).unwrap_or(u32::MAX),
                    max: cutoff,
                })
        };
        let (a, b) = (locate(from)?, locate(to)?);
        if ball.norm(a) <= r || ball.norm(b) <= r {
            return Err(Error::precondition(format!(
                "endpoints must lie outside B({r})"
            )));
        }
        let mut prev: HashMap<usize, usize> = HashMap::from([(a, a)]);
        let mut queue = VecDeque::from([a]);
        while let Some(v) = queue.pop_front() {
            if v == b {
                let mut chain = vec![b];
                let mut cur = b;
                while cur != a {
                    cur = prev[&cur];
                    chain.push(cur);
                }
                chain.reverse();
                return Ok(Some(Path::new(
                    0,
                    chain.into_iter().map(|i| ball.element(i).clone()).collect(),
                )));
            }
            for s in 0..ball.generator_count() {
                if let Some(w) = ball.neighbor(v, s) {
                    let n = ball.norm(w);
                    if n > r && n <= cutoff && !prev.contains_key(&w) {
                        prev.insert(w, v);
                        queue.push_back(w);
                    }
                }
            }
        }
        Ok(None)
    }
}

fn extend_branch(
    ball: &Ball,
    horizon: u32,
    branch: &mut Vec<(usize, usize)>,
    dead: &mut HashSet<(usize, usize)>,
) -> bool {
    let level = branch.len() as u32 - 1;
    if level == horizon {
        return true;
    }
    let (back, fwd) = *branch.last().unwrap();
    for b in 0..ball.generator_count() {
        let Some(nf) = ball.neighbor(fwd, b) else {
            continue;
        };
        if ball.norm(nf) != level + 1 {
            continue;
        }
        for a in 0..ball.generator_count() {
            let Some(nb) = ball.neighbor(back, a) else {
                continue;
            };
            if ball.norm(nb) != level + 1 || dead.contains(&(nb, nf)) {
                continue;
            }
            if ball.distance(nb, nf) != Some(2 * (level + 1)) {
                continue;
            }
            branch.push((nb, nf));
            if extend_branch(ball, horizon, branch, dead) {
                return true;
            }
            branch.pop();
            dead.insert((nb, nf));
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{Free, Lattice};

    fn z2() -> CayleyExplorer {
        CayleyExplorer::new(Arc::new(Lattice::new(2))).unwrap()
    }

    #[test]
    fn bfs_order_is_canonical() {
        let ex = z2();
        let ball = ex.ensure(1).unwrap();
        let labels: Vec<String> = ball.elements()[..5]
            .iter()
            .map(|g| ex.oracle().label(g))
            .collect();
        assert_eq!(labels, ["(0,0)", "(1,0)", "(0,1)", "(-1,0)", "(0,-1)"]);
    }

    #[test]
    fn window_matches_group_product() {
        let ex = z2();
        let ball = ex.ensure(6).unwrap();
        let base = ball.index_of(&Lattice::vector(&[2, -1])).unwrap();
        let win = ball.window(base, 3).unwrap();
        for (m, &j) in win.iter().enumerate() {
            let expect = ex.oracle().multiply(ball.element(base), ball.element(m));
            assert_eq!(ball.element(j), &expect);
        }
    }

    #[test]
    fn radius_cap_is_an_error() {
        let ex = CayleyExplorer::with_config(
            Arc::new(Free::new(2).unwrap()),
            ExplorerConfig {
                max_radius: 3,
                geodesic_horizon: 1,
                ..ExplorerConfig::default()
            },
        )
        .unwrap();
        let far = ex.oracle().parse_label("abab").unwrap();
        assert!(matches!(ex.word_norm(&far), Err(Error::NotReached { .. })));
        assert!(matches!(ex.ball(4), Err(Error::RadiusExceeded { .. })));
    }

    #[test]
    fn element_cap_bounds_exploration_and_horizon() {
        let ex = CayleyExplorer::with_config(
            Arc::new(Free::new(2).unwrap()),
            ExplorerConfig {
                max_elements: 1000,
                ..ExplorerConfig::default()
            },
        )
        .unwrap();
        assert!(matches!(ex.ensure(6), Err(Error::BallTooLarge { .. })));
        // |B(4)| = 161 and the bound for B(5) is 161 + 108 * 4 < 1000; B(6) is refused.
        assert_eq!(ex.snapshot().radius(), 5);
        assert_eq!(ex.geodesic_horizon().unwrap(), 2);
        let path = ex.extend_biinfinite_geodesic(2).unwrap();
        assert!(ex.is_geodesic(&path).unwrap());
    }

    #[test]
    fn pairing_handles_duplicates_and_involutions() {
        use crate::group::{Cyclic, Symmetric};
        let c2 = CayleyExplorer::new(Arc::new(Cyclic::new(2).unwrap())).unwrap();
        assert_eq!(c2.positive_generators(), &[0]);
        assert_eq!(c2.inverse_generator(0), 1);
        let s3 = CayleyExplorer::new(Arc::new(Symmetric::new(3).unwrap())).unwrap();
        assert_eq!(s3.positive_generators(), &[0, 1]);
        assert_eq!(s3.inverse_generator(1), 1);
    }

    #[test]
    fn finite_group_exhausts() {
        use crate::group::Symmetric;
        let ex = CayleyExplorer::new(Arc::new(Symmetric::new(3).unwrap())).unwrap();
        let ball = ex.ensure(10).unwrap();
        assert!(ball.is_exhausted());
        assert_eq!(ball.len(), 6);
        assert!(ex.sphere(5).unwrap().is_empty());
        let rep = ex.component_report(1, 6).unwrap();
        assert_eq!(rep.unbounded_components, 0);
        assert_eq!(rep.n_of_r, 3);
        assert!(!rep.caveat);
    }
}

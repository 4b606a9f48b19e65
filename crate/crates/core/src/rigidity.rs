//! Trivializing a cocycle over a one-ended group.
//!
//! For `x` finitely supported on the zero symbol, pick `g_x` far enough out
//! that every word for it crosses the support only inside a bounded region,
//! and set
//!
//! `phi(g) = c(g, 0)`, `b(x) = c(g_x, x)^{-1} phi(g_x)`.
//!
//! On one-ended groups `b(x)` does not depend on the choice of `g_x`, depends
//! only on `x|B(3L)`, and `c(g, x) = b(gx) phi(g) b(x)^{-1}`. On groups with
//! more ends the first two statements fail, and the sweeps below report where.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;

use crate::cayley::{Ball, CayleyExplorer, Path};
use crate::cocycle::{random_dense, sweep_rng, LocalCocycle, SweepOptions, Telescope};
use crate::error::{Error, Result};
use crate::group::Element;
use crate::shift::{Alphabet, Configuration, Dense, PatternSpace, Symbol};

// Stream offsets keep the sweeps' random draws independent of each other.
const INDEPENDENCE_STREAM: u64 = 1 << 40;
const LOCALITY_STREAM: u64 = 2 << 40;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RigidityOptions {
    /// Radius of the stored `phi` table.
    pub r_phi: u32,
    /// Radius of the exhaustive homomorphism check.
    pub r_hom: u32,
    /// Radius of `g` in the cohomology check.
    pub r_check: u32,
    /// Sampling for the cohomology check.
    pub sweep: SweepOptions,
    /// Random finitely supported configurations in the independence sweep.
    pub independence_samples: usize,
    /// The independence sweep also runs every `B(L)` pattern when there are at
    /// most this many.
    pub independence_cap: u64,
    /// Random pairs in the locality sweep.
    pub locality_pairs: usize,
    /// Maximum number of stored transfer entries when the full `B(3L)` table is
    /// too large.
    pub store_cap: u64,
}

impl Default for RigidityOptions {
    fn default() -> Self {
        RigidityOptions {
            r_phi: 4,
            r_hom: 3,
            r_check: 3,
            sweep: SweepOptions::default(),
            independence_samples: 64,
            independence_cap: 1 << 10,
            locality_pairs: 100,
            store_cap: 1 << 12,
        }
    }
}

/// `N(r)` as used by the pipeline.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NValue {
    pub r: u32,
    pub n: u32,
    pub cutoff: u32,
    pub unbounded: usize,
    pub caveat: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ObstructionKind {
    IndependenceFailure,
    LocalityFailure,
    NoAvoidingPath,
}

impl ObstructionKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ObstructionKind::IndependenceFailure => "independence-failure",
            ObstructionKind::LocalityFailure => "locality-failure",
            ObstructionKind::NoAvoidingPath => "no-avoiding-path",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        [
            ObstructionKind::IndependenceFailure,
            ObstructionKind::LocalityFailure,
            ObstructionKind::NoAvoidingPath,
        ]
        .into_iter()
        .find(|k| k.as_str() == s)
    }
}

impl fmt::Display for ObstructionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ObstructionDetails {
    /// Two far elements giving different values of `c(g, x)^{-1} phi(g)`.
    Conflict {
        first: Element,
        second: Element,
        first_value: Element,
        second_value: Element,
        /// Whether a path from `first` to `second` avoiding `B(||x|| + L)` was
        /// found inside the search cutoff.
        avoiding_path: bool,
    },
    /// `x` and `y` agree on `B(3L)` but `b(x) != b(y)`.
    Locality {
        y: Configuration,
        x_value: Element,
        y_value: Element,
    },
    /// No path from `from` to `to` avoids `B(radius)` inside `B(cutoff)`.
    Disconnected {
        from: Element,
        to: Element,
        radius: u32,
        cutoff: u32,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionWitness {
    pub kind: ObstructionKind,
    pub x: Configuration,
    pub details: ObstructionDetails,
}

impl ObstructionWitness {
    /// Re-runs the failed check. True when the failure reproduces.
    pub fn replay(&self, rig: &Rigidifier<'_>) -> Result<bool> {
        match &self.details {
            ObstructionDetails::Conflict { first, second, .. } => {
                Ok(rig.b_via(first, &self.x)? != rig.b_via(second, &self.x)?)
            }
            ObstructionDetails::Locality { y, .. } => {
                Ok(rig.compute_b(&self.x)? != rig.compute_b(y)?)
            }
            ObstructionDetails::Disconnected {
                from,
                to,
                radius,
                cutoff,
            } => Ok(rig
                .cocycle
                .explorer()
                .path_avoiding_ball(from, to, *radius, *cutoff)?
                .is_none()),
        }
    }
}

/// `phi` on `B(radius)` in canonical order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiTable {
    pub radius: u32,
    pub values: Vec<Element>,
}

/// Failures of `phi(gh) = phi(g) phi(h)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiReport {
    pub radius: u32,
    pub checked: u64,
    pub failures: Vec<(Element, Element, Element, Element)>,
}

/// `b` on `B(3L)` patterns.
///
/// When all `|A|^|B(3L)|` entries fit the cap the table is complete. Otherwise
/// it stores the entries for patterns supported in the largest `B(s)` that
/// fits the store cap, and other patterns are computed from the rule on lookup.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransferTable {
    pub radius: u32,
    pub sites: usize,
    pub support_radius: u32,
    pub support_sites: usize,
    pub complete: bool,
    /// Indexed by the pattern on `B(support_radius)`, zero beyond.
    pub values: Vec<Element>,
}

impl TransferTable {
    /// Pattern on `B(3L)` of stored entry `i`.
    pub fn pattern(&self, alphabet: &Alphabet, i: usize) -> Vec<Symbol> {
        let mut p = PatternSpace::new(alphabet.size(), self.support_sites).pattern_at(i);
        p.resize(self.sites, alphabet.zero());
        p
    }

    /// Stored entry for a `B(3L)` pattern, if there is one.
    pub fn stored(&self, alphabet: &Alphabet, pattern: &[Symbol]) -> Option<&Element> {
        let zero = alphabet.zero();
        if pattern[self.support_sites..].iter().any(|&s| s != zero) {
            return None;
        }
        let space = PatternSpace::new(alphabet.size(), self.support_sites);
        self.values
            .get(space.index_of(&pattern[..self.support_sites]))
    }

    /// `b` at a `B(3L)` pattern: the stored entry, or the rule's value.
    pub fn lookup(&self, rig: &Rigidifier<'_>, pattern: &[Symbol]) -> Result<Element> {
        match self.stored(rig.cocycle.alphabet(), pattern) {
            Some(e) => Ok(e.clone()),
            None => {
                rig.compute_b_dense(&Dense::new(pattern.to_vec(), rig.cocycle.alphabet().zero()))
            }
        }
    }
}

/// A failure of `c(g, x) = b(gx) phi(g) b(x)^{-1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyFailure {
    pub g: Element,
    /// Radius of the window `x` was read on.
    pub window_radius: u32,
    /// `x` on `B(window_radius)` in canonical order.
    pub window: Vec<Symbol>,
    pub default: Symbol,
    pub left: Element,
    pub right: Element,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomologyReport {
    pub radius: u32,
    pub configurations: u64,
    pub checked: u64,
    pub exhaustive: bool,
    pub seed: u64,
    pub failure_count: u64,
    /// The first failures in sweep order, up to the witness cap.
    pub failures: Vec<CohomologyFailure>,
}

impl CohomologyReport {
    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }
}

/// Summary of the independence or locality sweep.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepSummary {
    pub configurations: u64,
    pub comparisons: u64,
    pub seed: u64,
    pub witness: Option<ObstructionWitness>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RigidityResult {
    pub window: u32,
    pub n_values: Vec<NValue>,
    pub phi: PhiTable,
    pub phi_report: PhiReport,
    pub independence: SweepSummary,
    pub b_table: TransferTable,
    pub locality: SweepSummary,
    pub verification: CohomologyReport,
    pub obstruction: Option<ObstructionWitness>,
}

impl RigidityResult {
    pub fn passed(&self) -> bool {
        self.obstruction.is_none()
            && self.verification.passed()
            && self.phi_report.failures.is_empty()
    }
}

/// Pipeline state for one cocycle: `N` values and `phi` at every radius the
/// sweeps reach, all computed up front.
#[derive(Debug)]
pub struct Rigidifier<'a> {
    cocycle: &'a LocalCocycle,
    opts: RigidityOptions,
    ball: Arc<Ball>,
    n_values: Vec<NValue>,
    tel: Telescope,
    // phi on the telescope's ball.
    phi_all: Vec<Element>,
}

impl<'a> Rigidifier<'a> {
    pub fn new(cocycle: &'a LocalCocycle, opts: RigidityOptions) -> Result<Self> {
        let ex = cocycle.explorer();
        let l = cocycle.window();
        let reach = (3 * l + 3).max(opts.r_check + 3 * l) + l;
        let mut n_values = Vec::with_capacity(reach as usize + 1);
        for r in 0..=reach {
            let cutoff = 2 * r + 4;
            let rep = ex.component_report(r, cutoff)?;
            n_values.push(NValue {
                r,
                n: rep.n_of_r,
                cutoff,
                unbounded: rep.unbounded_components,
                caveat: rep.caveat,
            });
        }
        let n_max = n_values.iter().map(|v| v.n).max().unwrap_or(0);
        let need = (n_max + 3 + l)
            .max(opts.r_check + 3 * l)
            .max(2 * opts.r_hom + l)
            .max(opts.r_phi + l);
        let ball = ex.ensure(need)?;
        let tel = Telescope::new(&ball, n_max + 3);
        let phi_all = cocycle.evaluate_all(
            &ball,
            &tel,
            &Dense::new(Vec::new(), cocycle.alphabet().zero()),
        );
        Ok(Rigidifier {
            cocycle,
            opts,
            ball,
            n_values,
            tel,
            phi_all,
        })
    }

    pub fn cocycle(&self) -> &LocalCocycle {
        self.cocycle
    }

    pub fn options(&self) -> &RigidityOptions {
        &self.opts
    }

    pub fn ball(&self) -> &Arc<Ball> {
        &self.ball
    }

    pub fn n_values(&self) -> &[NValue] {
        &self.n_values
    }

    /// `N(r)`, from the precomputed table.
    pub fn n_of(&self, r: u32) -> Result<u32> {
        self.n_values
            .get(r as usize)
            .map(|v| v.n)
            .ok_or(Error::RadiusExceeded {
                needed: r,
                max: self.n_values.len() as u32 - 1,
            })
    }

    fn zero_dense(&self) -> Dense {
        Dense::new(Vec::new(), self.cocycle.alphabet().zero())
    }

    fn index(&self, g: &Element) -> Result<usize> {
        self.ball.index_of(g).ok_or_else(|| Error::NotReached {
            label: self.cocycle.source().label(g),
            max: self.ball.radius(),
        })
    }

    fn dense(&self, x: &Configuration) -> Result<(Dense, u32)> {
        if !x.is_finite_support(self.cocycle.alphabet()) {
            return Err(Error::NotInDelta(
                self.cocycle.alphabet().name(x.default_symbol()).to_string(),
            ));
        }
        let mut norm = 0;
        for g in x.overrides().keys() {
            norm = norm.max(self.ball.norm(self.index(g)?));
        }
        Ok((x.to_dense(&self.ball, norm), norm))
    }

    fn dense_norm(&self, x: &Dense) -> u32 {
        x.last_nonzero(self.cocycle.alphabet().zero())
            .map_or(0, |i| self.ball.norm(i))
    }

    /// `phi(g) = c(g, 0)`.
    pub fn compute_phi(&self, g: &Element) -> Result<Element> {
        let ex = self.cocycle.explorer();
        let (ball, i) = ex.locate(g)?;
        let ball = ex.ensure(ball.norm(i) + self.cocycle.window())?;
        Ok(self.cocycle.evaluate_dense(&ball, i, &self.zero_dense()))
    }

    fn phi_idx(&self, i: usize) -> Element {
        match self.phi_all.get(i) {
            Some(p) => p.clone(),
            None => self
                .cocycle
                .evaluate_dense(&self.ball, i, &self.zero_dense()),
        }
    }

    /// `phi` on `B(r)`.
    pub fn phi_table(&self, r: u32) -> Result<PhiTable> {
        let ex = self.cocycle.explorer();
        let ball = ex.ensure(r + self.cocycle.window())?;
        let zero = self.zero_dense();
        Ok(PhiTable {
            radius: r,
            values: (0..ball.ball_len(r))
                .map(|i| self.cocycle.evaluate_dense(&ball, i, &zero))
                .collect(),
        })
    }

    /// Exhaustive check of `phi(gh) = phi(g) phi(h)` on `B(r) x B(r)`.
    pub fn check_phi_homomorphism(&self, r: u32) -> Result<PhiReport> {
        let ex = self.cocycle.explorer();
        let ball = ex.ensure(2 * r + self.cocycle.window())?;
        let h = self.cocycle.target();
        let zero = self.zero_dense();
        let phi: Vec<Element> = (0..ball.ball_len(2 * r))
            .map(|i| self.cocycle.evaluate_dense(&ball, i, &zero))
            .collect();
        let n = ball.ball_len(r);
        let mut failures = Vec::new();
        for a in 0..n {
            for b in 0..n {
                let ab = ball.multiply(a, b).expect("B(2r) explored");
                let right = h.multiply(&phi[a], &phi[b]);
                if phi[ab] != right {
                    failures.push((
                        ball.element(a).clone(),
                        ball.element(b).clone(),
                        phi[ab].clone(),
                        right,
                    ));
                }
            }
        }
        Ok(PhiReport {
            radius: r,
            checked: (n * n) as u64,
            failures,
        })
    }

    fn gx_radius(&self, norm: u32) -> Result<u32> {
        let r = self.n_of(norm + self.cocycle.window())? + 1;
        if self.ball.sphere_range(r).is_empty() {
            return Err(Error::Infeasible(format!(
                "the group has no element of norm {r}"
            )));
        }
        Ok(r)
    }

    /// The canonical element of the sphere of radius `N(||x|| + L) + 1`.
    pub fn choose_gx(&self, x: &Configuration) -> Result<Element> {
        let (_, norm) = self.dense(x)?;
        let r = self.gx_radius(norm)?;
        Ok(self.ball.element(self.ball.sphere_range(r).start).clone())
    }

    /// `b(x) = c(g_x, x)^{-1} phi(g_x)` for `x` stored densely with zero default.
    pub fn compute_b_dense(&self, x: &Dense) -> Result<Element> {
        let r = self.gx_radius(self.dense_norm(x))?;
        let g = self.ball.sphere_range(r).start;
        let h = self.cocycle.target();
        let c = self.cocycle.evaluate_dense(&self.ball, g, x);
        Ok(h.multiply(&h.inverse(&c), &self.phi_all[g]))
    }

    /// `b(x)`; configurations beyond the precomputed range are handled by
    /// exploring further.
    pub fn compute_b(&self, x: &Configuration) -> Result<Element> {
        match self.dense(x) {
            Ok((d, norm)) if (norm + self.cocycle.window()) < self.n_values.len() as u32 => {
                self.compute_b_dense(&d)
            }
            Ok(_) | Err(Error::NotReached { .. }) => self.compute_b_far(x),
            Err(e) => Err(e),
        }
    }

    fn compute_b_far(&self, x: &Configuration) -> Result<Element> {
        let ex = self.cocycle.explorer();
        let alphabet = self.cocycle.alphabet();
        let r = x.support_norm(ex, alphabet)? + self.cocycle.window();
        let n = ex.component_report(r, 2 * r + 4)?.n_of_r;
        let g = ex.sphere(n + 1)?.into_iter().next().ok_or_else(|| {
            Error::Infeasible(format!("the group has no element of norm {}", n + 1))
        })?;
        let h = self.cocycle.target();
        let c = self.cocycle.evaluate(&g, x)?;
        let phi = self.cocycle.evaluate(&g, &Configuration::zero(alphabet))?;
        Ok(h.multiply(&h.inverse(&c), &phi))
    }

    fn b_via_idx(&self, g: usize, x: &Dense) -> Element {
        let h = self.cocycle.target();
        let c = self.cocycle.evaluate_dense(&self.ball, g, x);
        h.multiply(&h.inverse(&c), &self.phi_idx(g))
    }

    /// `c(g, x)^{-1} phi(g)` for an arbitrary `g`.
    pub fn b_via(&self, g: &Element, x: &Configuration) -> Result<Element> {
        let (d, _) = self.dense(x)?;
        let i = self.index(g)?;
        if self.ball.norm(i) + self.cocycle.window() > self.ball.radius() {
            return Err(Error::RadiusExceeded {
                needed: self.ball.norm(i) + self.cocycle.window(),
                max: self.ball.radius(),
            });
        }
        Ok(self.b_via_idx(i, &d))
    }

    /// Candidates for the independence sweep: the spheres of radius
    /// `N(||x|| + L) + 2` and `+ 3`.
    pub fn candidates(&self, x: &Configuration) -> Result<Vec<Element>> {
        let (_, norm) = self.dense(x)?;
        let r = self.gx_radius(norm)?;
        Ok(self.ball.elements()
            [self.ball.sphere_range(r + 1).start..self.ball.sphere_range(r + 2).end]
            .to_vec())
    }

    fn conflict(
        &self,
        x: &Dense,
        norm: u32,
        first: usize,
        second: usize,
        first_value: Element,
        second_value: Element,
    ) -> Result<ObstructionWitness> {
        let (a, b) = (self.ball.element(first), self.ball.element(second));
        let cutoff = 2 * self.ball.norm(first).max(self.ball.norm(second)) + 4;
        let avoiding_path = self
            .cocycle
            .explorer()
            .path_avoiding_ball(a, b, norm + self.cocycle.window(), cutoff)?
            .is_some();
        Ok(ObstructionWitness {
            kind: ObstructionKind::IndependenceFailure,
            x: Configuration::from_dense(&self.ball, x),
            details: ObstructionDetails::Conflict {
                first: a.clone(),
                second: b.clone(),
                first_value,
                second_value,
                avoiding_path,
            },
        })
    }

    /// Compares `c(g, x)^{-1} phi(g)` over the candidates; all must lie
    /// outside `B(N(||x|| + L))`.
    pub fn check_independence(
        &self,
        x: &Configuration,
        candidates: &[Element],
    ) -> Result<Option<ObstructionWitness>> {
        let (d, norm) = self.dense(x)?;
        let n = self.n_of(norm + self.cocycle.window())?;
        let mut idx = Vec::with_capacity(candidates.len());
        for g in candidates {
            let i = self.index(g)?;
            if self.ball.norm(i) <= n {
                return Err(Error::precondition(format!(
                    "candidate {} has norm {} <= N = {n}",
                    self.cocycle.source().label(g),
                    self.ball.norm(i)
                )));
            }
            if self.ball.norm(i) + self.cocycle.window() > self.ball.radius() {
                return Err(Error::RadiusExceeded {
                    needed: self.ball.norm(i) + self.cocycle.window(),
                    max: self.ball.radius(),
                });
            }
            idx.push(i);
        }
        self.independence_idx(&d, norm, &idx)
    }

    fn independence_idx(
        &self,
        x: &Dense,
        norm: u32,
        idx: &[usize],
    ) -> Result<Option<ObstructionWitness>> {
        let Some(&first) = idx.first() else {
            return Ok(None);
        };
        let v0 = self.b_via_idx(first, x);
        for &j in &idx[1..] {
            let v = self.b_via_idx(j, x);
            if v != v0 {
                return self.conflict(x, norm, first, j, v0, v).map(Some);
            }
        }
        Ok(None)
    }

    fn random_delta(&self, i: u64, radius: u32) -> Dense {
        let mut rng = sweep_rng(self.opts.sweep.seed, i);
        let alphabet = self.cocycle.alphabet();
        let r = rng.gen_range(0..=radius);
        let mut d = random_dense(&mut rng, alphabet, self.ball.ball_len(r));
        d = Dense::new(d.values().to_vec(), alphabet.zero());
        d
    }

    /// Independence sweep: every `B(L)` pattern (zero-extended) when there are at
    /// most 2^16, then seeded random configurations supported in `B(3L + 2)`.
    /// Each is compared across both candidate spheres and against `g_x`.
    pub fn independence_sweep(&self) -> Result<SweepSummary> {
        let alphabet = self.cocycle.alphabet();
        let l = self.cocycle.window();
        let local = PatternSpace::new(alphabet.size(), self.ball.ball_len(l));
        let exhaustive = local
            .count()
            .filter(|&c| c <= self.opts.independence_cap)
            .unwrap_or(0);
        let total = exhaustive + self.opts.independence_samples as u64;
        let h = self.cocycle.target();
        let results: Vec<Result<(u64, Option<ObstructionWitness>)>> = (0..total)
            .into_par_iter()
            .map(|i| {
                let x = if i < exhaustive {
                    Dense::new(local.pattern_at(i as usize), alphabet.zero())
                } else {
                    self.random_delta(INDEPENDENCE_STREAM + i, 3 * l + 2)
                };
                let norm = self.dense_norm(&x);
                let r = self.gx_radius(norm)?;
                let values = self.cocycle.evaluate_upto(&self.ball, &self.tel, r + 2, &x);
                let b = |g: usize| h.multiply(&h.inverse(&values[g]), &self.phi_all[g]);
                let cand = self.ball.sphere_range(r + 1).start..self.ball.sphere_range(r + 2).end;
                let count = cand.len() as u64;
                let first = cand.start;
                let v0 = b(first);
                for j in cand.skip(1) {
                    let v = b(j);
                    if v != v0 {
                        return Ok((count, Some(self.conflict(&x, norm, first, j, v0, v)?)));
                    }
                }
                let g = self.ball.sphere_range(r).start;
                let canonical = b(g);
                if canonical != v0 {
                    return Ok((
                        count,
                        Some(self.conflict(&x, norm, g, first, canonical, v0)?),
                    ));
                }
                Ok((count, None))
            })
            .collect();
        let mut comparisons = 0;
        let mut witness = None;
        for r in results {
            let (n, w) = r?;
            comparisons += n;
            if witness.is_none() {
                witness = w;
            }
        }
        Ok(SweepSummary {
            configurations: total,
            comparisons,
            seed: self.opts.sweep.seed,
            witness,
        })
    }

    /// `b(x) = b(y)` for `x, y` agreeing on `B(3L)`.
    pub fn check_locality(
        &self,
        x: &Configuration,
        y: &Configuration,
    ) -> Result<Option<ObstructionWitness>> {
        let inner = self.cocycle.explorer().ball(3 * self.cocycle.window())?;
        if let Some(g) = inner.iter().find(|g| x.at(g) != y.at(g)) {
            return Err(Error::precondition(format!(
                "configurations differ at {} inside B(3L)",
                self.cocycle.source().label(g)
            )));
        }
        let (bx, by) = (self.compute_b(x)?, self.compute_b(y)?);
        Ok((bx != by).then(|| ObstructionWitness {
            kind: ObstructionKind::LocalityFailure,
            x: x.clone(),
            details: ObstructionDetails::Locality {
                y: y.clone(),
                x_value: bx,
                y_value: by,
            },
        }))
    }

    /// Random pair agreeing on `B(3L)`: `x` random on `B(3L + 3)`, `y` equal to
    /// `x` on `B(3L)` with a resampled tail that differs somewhere.
    pub fn locality_pair(&self, i: u64) -> (Configuration, Configuration) {
        let alphabet = self.cocycle.alphabet();
        let l = self.cocycle.window();
        let mut rng = sweep_rng(self.opts.sweep.seed, LOCALITY_STREAM + i);
        let (inner, outer) = (self.ball.ball_len(3 * l), self.ball.ball_len(3 * l + 3));
        let n = alphabet.size();
        let xs: Vec<Symbol> = (0..outer).map(|_| rng.gen_range(0..n) as Symbol).collect();
        let mut ys = xs.clone();
        for v in &mut ys[inner..] {
            *v = rng.gen_range(0..n) as Symbol;
        }
        if ys == xs && n > 1 {
            let m = rng.gen_range(inner..outer);
            ys[m] = ((ys[m] as usize + rng.gen_range(1..n)) % n) as Symbol;
        }
        let zero = alphabet.zero();
        (
            Configuration::from_dense(&self.ball, &Dense::new(xs, zero)),
            Configuration::from_dense(&self.ball, &Dense::new(ys, zero)),
        )
    }

    pub fn locality_sweep(&self) -> Result<SweepSummary> {
        let results: Vec<Result<Option<ObstructionWitness>>> = (0..self.opts.locality_pairs as u64)
            .into_par_iter()
            .map(|i| {
                let (x, y) = self.locality_pair(i);
                self.check_locality(&x, &y)
            })
            .collect();
        let mut witness = None;
        for r in results {
            let w = r?;
            if witness.is_none() {
                witness = w;
            }
        }
        Ok(SweepSummary {
            configurations: self.opts.locality_pairs as u64,
            comparisons: self.opts.locality_pairs as u64,
            seed: self.opts.sweep.seed,
            witness,
        })
    }

    /// The complete `B(3L)` table; errors when it exceeds the exhaustive cap.
    pub fn build_b_table(&self) -> Result<TransferTable> {
        let l = self.cocycle.window();
        let sites = self.ball.ball_len(3 * l);
        PatternSpace::new(self.cocycle.alphabet().size(), sites).check_cap(self.opts.sweep.cap)?;
        self.table_on(3 * l)
    }

    /// The complete table when it fits the exhaustive cap, otherwise the
    /// entries supported in the largest ball that fits the store cap.
    pub fn transfer_table(&self) -> Result<TransferTable> {
        let l = self.cocycle.window();
        let a = self.cocycle.alphabet().size();
        let full = PatternSpace::new(a, self.ball.ball_len(3 * l));
        if full.count().is_some_and(|c| c <= self.opts.sweep.cap) {
            return self.table_on(3 * l);
        }
        let mut s = 0;
        while s < 3 * l
            && PatternSpace::new(a, self.ball.ball_len(s + 1))
                .count()
                .is_some_and(|c| c <= self.opts.store_cap)
        {
            s += 1;
        }
        self.table_on(s)
    }

    fn table_on(&self, s: u32) -> Result<TransferTable> {
        let l = self.cocycle.window();
        let alphabet = self.cocycle.alphabet();
        let support_sites = self.ball.ball_len(s);
        let space = PatternSpace::new(alphabet.size(), support_sites);
        let count = space.check_cap(u64::MAX)?;
        let values: Vec<Result<Element>> = (0..count as usize)
            .into_par_iter()
            .map(|i| self.compute_b_dense(&Dense::new(space.pattern_at(i), alphabet.zero())))
            .collect();
        Ok(TransferTable {
            radius: 3 * l,
            sites: self.ball.ball_len(3 * l),
            support_radius: s,
            support_sites,
            complete: s == 3 * l,
            values: values.into_iter().collect::<Result<_>>()?,
        })
    }

    /// Checks `c(g, x) = b(gx) phi(g) b(x)^{-1}` for `g` in `B(r)`, reading `b`
    /// through `table` on `B(3L)` restrictions and `phi` through `phi` where it
    /// is stored.
    ///
    /// Configurations: exhaustive or sampled on `B(r + 3L)` (sampled ones with a
    /// random default), then every stored table pattern, zero-extended.
    pub fn check_cohomology(
        &self,
        phi: &PhiTable,
        table: &TransferTable,
        r: u32,
    ) -> Result<CohomologyReport> {
        let opts = &self.opts.sweep;
        let l = self.cocycle.window();
        let alphabet = self.cocycle.alphabet();
        let ex = self.cocycle.explorer();
        let ball = ex.ensure(r + 3 * l)?;
        let big = ball.ball_len(r + 3 * l);
        let exhaustive = opts.resolve(alphabet, big)?;
        let space = PatternSpace::new(alphabet.size(), big);
        let primary = if exhaustive {
            space.count().expect("checked by resolve")
        } else {
            opts.samples as u64
        };
        let stored = if table.complete {
            0
        } else {
            table.values.len() as u64
        };
        let total = primary + stored;
        let gs: Vec<(usize, usize, Element)> = (0..ball.ball_len(r))
            .map(|g| {
                let inv = ball.inverse_of(g).expect("B(r) explored");
                let p = phi
                    .values
                    .get(g)
                    .cloned()
                    .unwrap_or_else(|| self.phi_idx(g));
                (g, inv, p)
            })
            .collect();
        let zero = alphabet.zero();
        let tel = Telescope::new(&ball, r);
        let results: Vec<Result<(u64, Vec<CohomologyFailure>)>> = (0..total)
            .into_par_iter()
            .map(|i| {
                let x = if i < primary {
                    if exhaustive {
                        Dense::new(space.pattern_at(i as usize), zero)
                    } else {
                        random_dense(&mut sweep_rng(opts.seed, i), alphabet, big)
                    }
                } else {
                    Dense::new(table.pattern(alphabet, (i - primary) as usize), zero)
                };
                self.cohomology_failures(&ball, &tel, &gs, table, &x, opts.max_witnesses)
            })
            .collect();
        let mut failure_count = 0;
        let mut failures = Vec::new();
        for res in results {
            let (n, fs) = res?;
            failure_count += n;
            for f in fs {
                if failures.len() < opts.max_witnesses {
                    failures.push(f);
                }
            }
        }
        Ok(CohomologyReport {
            radius: r,
            configurations: total,
            checked: total * gs.len() as u64,
            exhaustive,
            seed: opts.seed,
            failure_count,
            failures,
        })
    }

    fn cohomology_failures(
        &self,
        ball: &Ball,
        tel: &Telescope,
        gs: &[(usize, usize, Element)],
        table: &TransferTable,
        x: &Dense,
        max_witnesses: usize,
    ) -> Result<(u64, Vec<CohomologyFailure>)> {
        let l = self.cocycle.window();
        let h = self.cocycle.target();
        let sites = ball.ball_len(3 * l);
        let restrict = |d: &Dense| -> Vec<Symbol> { (0..sites).map(|m| d.at(m)).collect() };
        let bx_inv = h.inverse(&table.lookup(self, &restrict(x))?);
        let mut scratch = Vec::new();
        let mut count = 0;
        let mut out = Vec::new();
        let lhs = self.cocycle.evaluate_all(ball, tel, x);
        for (g, g_inv, phi_g) in gs {
            let left = lhs[*g].clone();
            let gx = x.shifted(ball, *g_inv, 3 * l, &mut scratch);
            let bgx = table.lookup(self, gx.values())?;
            let right = h.multiply(&h.multiply(&bgx, phi_g), &bx_inv);
            if left != right {
                count += 1;
                if out.len() < max_witnesses {
                    let window_radius = ball.norm(*g) + 3 * l;
                    out.push(CohomologyFailure {
                        g: ball.element(*g).clone(),
                        window_radius,
                        window: (0..ball.ball_len(window_radius)).map(|m| x.at(m)).collect(),
                        default: x.default_symbol(),
                        left,
                        right,
                    });
                }
            }
        }
        Ok((count, out))
    }

    /// Runs the whole pipeline. Every sweep runs; the obstruction is the first
    /// failing sweep's witness.
    pub fn rigidify(&self) -> Result<RigidityResult> {
        let phi = self.phi_table(self.opts.r_phi)?;
        let phi_report = self.check_phi_homomorphism(self.opts.r_hom)?;
        let independence = self.independence_sweep()?;
        let b_table = self.transfer_table()?;
        let locality = self.locality_sweep()?;
        let verification = self.check_cohomology(&phi, &b_table, self.opts.r_check)?;
        let obstruction = independence
            .witness
            .clone()
            .or_else(|| locality.witness.clone());
        Ok(RigidityResult {
            window: self.cocycle.window(),
            n_values: self.n_values.clone(),
            phi,
            phi_report,
            independence,
            b_table,
            locality,
            verification,
            obstruction,
        })
    }

    /// Diagnostic for the geometric step behind independence: a witness when
    /// no path from `from` to `to` avoids `B(||x|| + L)`.
    pub fn avoiding_path_witness(
        &self,
        x: &Configuration,
        from: &Element,
        to: &Element,
    ) -> Result<Option<ObstructionWitness>> {
        let (_, norm) = self.dense(x)?;
        let radius = norm + self.cocycle.window();
        let ex = self.cocycle.explorer();
        let cutoff = 2 * ex.word_norm(from)?.max(ex.word_norm(to)?) + 4;
        Ok(ex
            .path_avoiding_ball(from, to, radius, cutoff)?
            .is_none()
            .then(|| ObstructionWitness {
                kind: ObstructionKind::NoAvoidingPath,
                x: x.clone(),
                details: ObstructionDetails::Disconnected {
                    from: from.clone(),
                    to: to.clone(),
                    radius,
                    cutoff,
                },
            }))
    }
}

/// Splices `x` and `y` along a biinfinite geodesic: `x` on the
/// `L`-neighborhood of the forward half, `y` on that of the backward half, zero
/// elsewhere. Errors if `x` and `y` disagree where the neighborhoods overlap.
pub fn splice_configurations(
    explorer: &CayleyExplorer,
    path: &Path,
    l: u32,
    x: &Configuration,
    y: &Configuration,
    alphabet: &Alphabet,
) -> Result<Configuration> {
    if path.get(0).is_none() {
        return Err(Error::precondition("geodesic must contain index 0"));
    }
    let forward: Vec<Element> = (0..=path.end())
        .filter_map(|k| path.get(k).cloned())
        .collect();
    let backward: Vec<Element> = (path.start()..=0)
        .filter_map(|k| path.get(k).cloned())
        .collect();
    let nf = explorer.l_neighborhood(&forward, l)?;
    let nb = explorer.l_neighborhood(&backward, l)?;
    let nf_set: HashSet<&Element> = nf.iter().collect();
    let mut overrides = Vec::new();
    for g in &nb {
        if nf_set.contains(g) && x.at(g) != y.at(g) {
            return Err(Error::precondition(format!(
                "configurations disagree at {} on the overlap",
                explorer.oracle().label(g)
            )));
        }
        overrides.push((g.clone(), y.at(g)));
    }
    for g in &nf {
        overrides.push((g.clone(), x.at(g)));
    }
    Ok(Configuration::new(alphabet.zero(), overrides))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{random_twisted, z_counterexample};
    use crate::group::{Lattice, SharedGroup, Symmetric};

    fn quick() -> RigidityOptions {
        RigidityOptions {
            sweep: SweepOptions {
                samples: 200,
                ..SweepOptions::default()
            },
            independence_samples: 8,
            locality_pairs: 10,
            ..RigidityOptions::default()
        }
    }

    #[test]
    fn counterexample_on_z() {
        let c = z_counterexample().unwrap();
        let rig = Rigidifier::new(&c, quick()).unwrap();
        let result = rig.rigidify().unwrap();
        let w = result.obstruction.clone().expect("obstruction");
        assert_eq!(w.kind, ObstructionKind::IndependenceFailure);
        assert_eq!(w.x, Configuration::new(0, [(Lattice::vector(&[0]), 1)]));
        match &w.details {
            ObstructionDetails::Conflict {
                first,
                second,
                first_value,
                second_value,
                avoiding_path,
            } => {
                assert_eq!(*first, Lattice::vector(&[2]));
                assert_eq!(*second, Lattice::vector(&[-2]));
                assert_eq!(*first_value, Lattice::vector(&[-1]));
                assert_eq!(*second_value, Lattice::vector(&[0]));
                assert!(!avoiding_path);
            }
            other => panic!("{other:?}"),
        }
        assert!(w.replay(&rig).unwrap());
        assert!(!result.verification.passed());
        assert!(result.phi_report.failures.is_empty());
    }

    #[test]
    fn locality_fails_on_z_from_the_left() {
        let c = z_counterexample().unwrap();
        let rig = Rigidifier::new(&c, quick()).unwrap();
        let zero = Configuration::constant(0);
        let right = Configuration::new(0, [(Lattice::vector(&[5]), 1)]);
        let left = Configuration::new(0, [(Lattice::vector(&[-5]), 1)]);
        assert!(rig.check_locality(&zero, &right).unwrap().is_none());
        let w = rig.check_locality(&zero, &left).unwrap().expect("witness");
        assert_eq!(w.kind, ObstructionKind::LocalityFailure);
        assert!(w.replay(&rig).unwrap());
    }

    #[test]
    fn twisted_on_z2_trivializes() {
        let ex = Arc::new(CayleyExplorer::new(Arc::new(Lattice::new(2))).unwrap());
        let h: SharedGroup = Arc::new(Symmetric::new(3).unwrap());
        let t = random_twisted(ex, h.clone(), Alphabet::binary(), 0, 7).unwrap();
        let rig = Rigidifier::new(&t.cocycle, quick()).unwrap();
        let result = rig.rigidify().unwrap();
        assert!(result.passed(), "{:?}", result.obstruction);
        assert!(!result.b_table.complete);
        assert_eq!(result.b_table.support_radius, 1);
        assert_eq!(result.b_table.values.len(), 32);
        assert_eq!(result.b_table.values[0], h.identity());
        let h0 = t.h0();
        let ball = rig.ball();
        for (i, phi) in result.phi.values.iter().enumerate().take(ball.ball_len(3)) {
            let w = ball.word(i);
            let mut phi0 = h.identity();
            for s in w {
                let (k, inv) = match t
                    .cocycle
                    .explorer()
                    .positive_generators()
                    .iter()
                    .position(|&p| p == s)
                {
                    Some(k) => (k, false),
                    None => (
                        t.cocycle
                            .explorer()
                            .positive_generators()
                            .iter()
                            .position(|&p| p == t.cocycle.explorer().inverse_generator(s))
                            .unwrap(),
                        true,
                    ),
                };
                let e = if inv {
                    h.inverse(&t.images[k])
                } else {
                    t.images[k].clone()
                };
                phi0 = h.multiply(&phi0, &e);
            }
            assert_eq!(*phi, h.multiply(&h.multiply(h0, &phi0), &h.inverse(h0)));
        }
    }
}

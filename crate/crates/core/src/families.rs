//! Ready-made cocycles: seeded twisted coboundaries and the two-ended
//! counterexample.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cayley::CayleyExplorer;
use crate::cocycle::{
    make_hom_cocycle, make_twisted, LocalCocycle, LocalTransfer, Rule, TABLE_CAP,
};
use crate::error::Result;
use crate::group::{Element, Lattice, SharedGroup, Symmetric};
use crate::shift::{Alphabet, PatternSpace};

/// A twisted cocycle together with the data it was built from.
#[derive(Clone, Debug)]
pub struct Twisted {
    pub cocycle: LocalCocycle,
    /// `phi0` per positive generator.
    pub images: Vec<Element>,
    pub transfer: LocalTransfer,
}

impl Twisted {
    /// `h0 = b0(0-pattern)`.
    pub fn h0(&self) -> &Element {
        &self.transfer.values[0]
    }
}

/// Product of a random word of length at most 4 in the generators of `h`.
pub fn random_element(rng: &mut impl Rng, h: &SharedGroup) -> Element {
    let gens = h.generators();
    let len = rng.gen_range(0..=4);
    (0..len).fold(h.identity(), |acc, _| {
        h.multiply(&acc, &gens[rng.gen_range(0..gens.len())])
    })
}

/// Pairwise commuting random images, one per positive generator of an
/// abelian source. Each new image is resampled until it commutes with the
/// previous ones, falling back to the identity.
pub fn commuting_images(rng: &mut impl Rng, h: &SharedGroup, count: usize) -> Vec<Element> {
    let mut out: Vec<Element> = Vec::with_capacity(count);
    for _ in 0..count {
        let pick = (0..64)
            .map(|_| random_element(rng, h))
            .find(|e| out.iter().all(|p| h.multiply(p, e) == h.multiply(e, p)))
            .unwrap_or_else(|| h.identity());
        out.push(pick);
    }
    out
}

/// Seeded random twisted coboundary over an abelian source group: commuting
/// images and a random transfer of radius `rho`.
pub fn random_twisted(
    explorer: Arc<CayleyExplorer>,
    target: SharedGroup,
    alphabet: Alphabet,
    rho: u32,
    seed: u64,
) -> Result<Twisted> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let images = commuting_images(&mut rng, &target, explorer.positive_generators().len());
    let sites = explorer.ensure(rho)?.ball_len(rho);
    let count = PatternSpace::new(alphabet.size(), sites).check_cap(TABLE_CAP)?;
    let transfer = LocalTransfer {
        radius: rho,
        values: (0..count)
            .map(|_| random_element(&mut rng, &target))
            .collect(),
    };
    let cocycle = make_twisted(explorer, target, alphabet, &images, &transfer)?;
    Ok(Twisted {
        cocycle,
        images,
        transfer,
    })
}

/// `G = Z`, `H = Z = <u>`, `A = {0, 1}`, `c(+1, x) = u^{x(0)}`.
///
/// A valid cocycle that is not cohomologous to a homomorphism through any
/// transfer depending on a bounded window.
pub fn z_counterexample() -> Result<LocalCocycle> {
    let explorer = Arc::new(CayleyExplorer::new(Arc::new(Lattice::new(1)))?);
    let target: SharedGroup = Arc::new(Lattice::new(1));
    LocalCocycle::new(
        explorer,
        target,
        Alphabet::binary(),
        0,
        vec![Rule::WeightedSiteSum(vec![(0, Lattice::vector(&[1]))])],
    )
}

fn z2_explorer() -> Result<Arc<CayleyExplorer>> {
    Ok(Arc::new(CayleyExplorer::new(Arc::new(Lattice::new(2)))?))
}

fn s3() -> Result<SharedGroup> {
    Ok(Arc::new(Symmetric::new(3)?))
}

/// `Z^2 -> S(3)` homomorphism cocycle, `e1 -> (1 2 3)`, `e2 -> (1 3 2)`.
pub fn z2_hom() -> Result<LocalCocycle> {
    let h = s3()?;
    let images = [h.parse_label("(1 2 3)")?, h.parse_label("(1 3 2)")?];
    make_hom_cocycle(z2_explorer()?, h, Alphabet::binary(), &images)
}

pub const Z2_TWISTED_SEED: u64 = 7;

/// Seeded twisted cocycle `Z^2 -> S(3)` with a single-site transfer, so the
/// window is `B(1)`.
pub fn z2_twisted() -> Result<Twisted> {
    random_twisted(
        z2_explorer()?,
        s3()?,
        Alphabet::binary(),
        0,
        Z2_TWISTED_SEED,
    )
}

/// [`z2_twisted`] with the `e1` entry on the pattern `10000` composed with
/// `(1 2)` on the right.
pub fn z2_twisted_corrupt() -> Result<LocalCocycle> {
    let mut c = z2_twisted()?.cocycle;
    let idx = c
        .pattern_space()
        .index_of(&c.alphabet().parse_pattern("10000", 5)?);
    let old = c.entry(0, idx).cloned().expect("table rule");
    let swap = c.target().parse_label("(1 2)")?;
    let new = c.target().multiply(&old, &swap);
    c.set_entry(0, idx, new)?;
    Ok(c)
}

//! Seeded generators of carrier members.

use rand::Rng as _;

use super::{Element, Fuel, Pca, Rng};

/// Budget for evaluating one random application tree.
pub const SAMPLE_FUEL: u64 = 2_000;

const MAX_DEPTH: u32 = 3;

/// A random carrier member: either kit data (booleans, small numerals, short
/// sequences) or the value of a random application tree over the model's
/// generators. Trees that do not converge within [`SAMPLE_FUEL`] are redrawn.
pub fn element(pca: &dyn Pca, rng: &mut Rng) -> Element {
    if rng.gen_bool(0.2) {
        if let Some(e) = data(pca, rng) {
            return e;
        }
    }
    let gens = pca.generators();
    for _ in 0..32 {
        if let Some(e) = tree(pca, &gens, rng, MAX_DEPTH, &mut Fuel::new(SAMPLE_FUEL)) {
            return e;
        }
    }
    gens[rng.gen_range(0..gens.len())].clone()
}

/// Samples `n` elements.
pub fn elements(pca: &dyn Pca, rng: &mut Rng, n: usize) -> Vec<Element> {
    (0..n).map(|_| element(pca, rng)).collect()
}

fn tree(
    pca: &dyn Pca,
    gens: &[Element],
    rng: &mut Rng,
    depth: u32,
    fuel: &mut Fuel,
) -> Option<Element> {
    if depth == 0 || rng.gen_bool(0.35) {
        return Some(gens[rng.gen_range(0..gens.len())].clone());
    }
    let f = tree(pca, gens, rng, depth - 1, fuel)?;
    let x = tree(pca, gens, rng, depth - 1, fuel)?;
    pca.apply(&f, &x, fuel).ok()
}

fn data(pca: &dyn Pca, rng: &mut Rng) -> Option<Element> {
    let kit = pca.kit();
    let mut fuel = Fuel::new(SAMPLE_FUEL * 10);
    match rng.gen_range(0..5) {
        0 => Some(kit.tru.clone()),
        1 => Some(kit.fls.clone()),
        2 => Some(kit.id.clone()),
        3 => kit.numeral(pca, rng.gen_range(0..5), &mut fuel).ok(),
        _ => {
            let n = rng.gen_range(0..3);
            let items: Vec<Element> = (0..n)
                .map(|_| {
                    let gens = pca.generators();
                    gens[rng.gen_range(0..gens.len())].clone()
                })
                .collect();
            kit.seq(pca, &items, &mut fuel).ok()
        }
    }
}

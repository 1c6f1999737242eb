//! Shared test support: seeded random generators for palettes, hypergraphs
//! and simplex points, plus brute-force oracles kept independent of the
//! library's search paths.

#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use turanpal::colorability::{pair_count, Hypergraph, OrderedHypergraph, PairColoring};
use turanpal::palette::{ColorId, Palette, Triple};
use turanpal::simplex::SimplexPoint;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random palette with up to `max_colors` colors, mixing sparse and dense
/// triple sets.
pub fn random_palette(rng: &mut ChaCha8Rng, max_colors: usize) -> Palette {
    let n = rng.random_range(1..=max_colors);
    random_palette_with_colors(rng, n)
}

pub fn random_palette_with_colors(rng: &mut ChaCha8Rng, n: usize) -> Palette {
    let names: Vec<String> = (0..n).map(|i| format!("c{i}")).collect();
    let mut triples = Vec::new();
    if rng.random::<f64>() < 0.5 {
        let want = rng.random_range(0..=(n * n * n).min(8));
        let mut set = std::collections::BTreeSet::new();
        while set.len() < want {
            set.insert((
                rng.random_range(0..n),
                rng.random_range(0..n),
                rng.random_range(0..n),
            ));
        }
        triples.extend(set);
    } else {
        let rate: f64 = rng.random_range(0.05..0.7);
        for l in 0..n {
            for m in 0..n {
                for r in 0..n {
                    if rng.random::<f64>() < rate {
                        triples.push((l, m, r));
                    }
                }
            }
        }
    }
    Palette::new(names, triples).expect("generated parts are valid")
}

/// Random hypergraph on exactly `n` vertices with the given edge rate.
pub fn random_hypergraph(rng: &mut ChaCha8Rng, n: usize, edge_rate: f64) -> Hypergraph {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                if rng.random::<f64>() < edge_rate {
                    edges.push((i, j, k));
                }
            }
        }
    }
    Hypergraph::new(n, edges).expect("generated edges are valid")
}

/// Random interior simplex point via normalized positive exponentials.
pub fn random_interior_point(rng: &mut ChaCha8Rng, n: usize) -> SimplexPoint {
    let raw: Vec<f64> = (0..n)
        .map(|_| 0.05 - (1.0 - rng.random::<f64>()).ln())
        .collect();
    let sum: f64 = raw.iter().sum();
    SimplexPoint::new(raw.into_iter().map(|x| x / sum).collect()).expect("normalized")
}

/// Oracle: all-maps enumeration of homomorphism existence. Returns the
/// lexicographically first preserving total map, if any.
pub fn brute_force_hom(p: &Palette, q: &Palette) -> Option<Vec<usize>> {
    let n = p.color_count();
    let qn = q.color_count();
    let mut map = vec![0usize; n];
    loop {
        if preserves(p, q, &map) {
            return Some(map);
        }
        if !advance(&mut map, qn) {
            return None;
        }
    }
}

/// Oracle: all-maps homomorphism count (every total map counted once).
pub fn brute_force_hom_count(p: &Palette, q: &Palette) -> u64 {
    let n = p.color_count();
    let qn = q.color_count();
    let mut map = vec![0usize; n];
    let mut count = 0u64;
    loop {
        if preserves(p, q, &map) {
            count += 1;
        }
        if !advance(&mut map, qn) {
            return count;
        }
    }
}

fn preserves(p: &Palette, q: &Palette, map: &[usize]) -> bool {
    p.triples().iter().all(|t| {
        q.contains(Triple::new(
            ColorId(map[t.left.0]),
            ColorId(map[t.middle.0]),
            ColorId(map[t.right.0]),
        ))
    })
}

/// Advances a mixed-radix counter; false on wrap-around.
fn advance(digits: &mut [usize], radix: usize) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < radix {
            return true;
        }
        *d = 0;
    }
    false
}

/// Oracle: exhaustive enumeration of all pair colorings of an ordered
/// hypergraph; returns the first valid certificate.
pub fn brute_force_ordered_colorable(h: &OrderedHypergraph, p: &Palette) -> Option<PairColoring> {
    let n = h.base().vertex_count();
    let pairs = pair_count(n);
    let cn = p.color_count();
    let mut digits = vec![0usize; pairs];
    loop {
        let coloring = PairColoring::new(n, digits.iter().map(|&c| ColorId(c)).collect()).unwrap();
        if turanpal::colorability::check_certificate(h, p, &coloring).unwrap() {
            return Some(coloring);
        }
        if !advance(&mut digits, cn) {
            return None;
        }
    }
}

//! Palette-colorability of small 3-uniform hypergraphs: certificate
//! checking, exhaustive backtracking search over pair colorings (ordered and
//! over all vertex orders), the random palette-based hypergraph
//! construction, and induced-subset edge-density scans.

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::hom::Homomorphism;
use crate::palette::{ColorId, Palette, Triple};
use crate::simplex::SimplexPoint;

/// A 3-uniform hypergraph on vertices `0..vertex_count`. Edges are stored
/// as sorted vertex triples, list sorted and duplicate-free.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Hypergraph {
    vertex_count: usize,
    edges: Vec<[usize; 3]>,
}

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum HypergraphError {
    #[error("edge ({0}, {1}, {2}) has repeated vertices")]
    RepeatedVertex(usize, usize, usize),
    #[error("edge ({0}, {1}, {2}) uses a vertex >= vertex count {3}")]
    VertexOutOfRange(usize, usize, usize, usize),
    #[error("duplicate edge ({0}, {1}, {2})")]
    DuplicateEdge(usize, usize, usize),
    #[error("order is not a permutation of the vertices")]
    InvalidOrder,
}

impl Hypergraph {
    pub fn new(
        vertex_count: usize,
        edges: Vec<(usize, usize, usize)>,
    ) -> Result<Self, HypergraphError> {
        let mut normalized: Vec<[usize; 3]> = Vec::with_capacity(edges.len());
        for (a, b, c) in edges {
            if a == b || a == c || b == c {
                return Err(HypergraphError::RepeatedVertex(a, b, c));
            }
            let mut edge = [a, b, c];
            edge.sort_unstable();
            if edge[2] >= vertex_count {
                return Err(HypergraphError::VertexOutOfRange(a, b, c, vertex_count));
            }
            normalized.push(edge);
        }
        normalized.sort_unstable();
        for window in normalized.windows(2) {
            if window[0] == window[1] {
                let [a, b, c] = window[0];
                return Err(HypergraphError::DuplicateEdge(a, b, c));
            }
        }
        Ok(Hypergraph {
            vertex_count,
            edges: normalized,
        })
    }

    pub fn edgeless(vertex_count: usize) -> Self {
        Hypergraph {
            vertex_count,
            edges: Vec::new(),
        }
    }

    /// The four-vertex complete 3-uniform hypergraph minus one edge.
    pub fn k4_minus() -> Self {
        Hypergraph::new(4, vec![(0, 1, 2), (0, 1, 3), (0, 2, 3)]).unwrap()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[[usize; 3]] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Lexicographically least relabeling of the edge list over all vertex
    /// permutations. Equal canonical forms mean isomorphic hypergraphs.
    pub fn canonical_form(&self) -> Vec<[usize; 3]> {
        let n = self.vertex_count;
        let mut best: Option<Vec<[usize; 3]>> = None;
        for perm in (0..n).permutations(n) {
            let mut relabeled: Vec<[usize; 3]> = self
                .edges
                .iter()
                .map(|&[a, b, c]| {
                    let mut e = [perm[a], perm[b], perm[c]];
                    e.sort_unstable();
                    e
                })
                .collect();
            relabeled.sort_unstable();
            if best.as_ref().is_none_or(|b| relabeled < *b) {
                best = Some(relabeled);
            }
        }
        best.unwrap_or_default()
    }
}

/// A hypergraph together with a total vertex order; `order[i]` is the
/// vertex at position `i` (the `i`-th smallest).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct OrderedHypergraph {
    base: Hypergraph,
    order: Vec<usize>,
}

impl OrderedHypergraph {
    pub fn new(base: Hypergraph, order: Vec<usize>) -> Result<Self, HypergraphError> {
        let n = base.vertex_count();
        if order.len() != n {
            return Err(HypergraphError::InvalidOrder);
        }
        let mut seen = vec![false; n];
        for &v in &order {
            if v >= n || seen[v] {
                return Err(HypergraphError::InvalidOrder);
            }
            seen[v] = true;
        }
        Ok(OrderedHypergraph { base, order })
    }

    /// The hypergraph with vertices in their natural order.
    pub fn natural(base: Hypergraph) -> Self {
        let order = (0..base.vertex_count()).collect();
        OrderedHypergraph { base, order }
    }

    pub fn base(&self) -> &Hypergraph {
        &self.base
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Position of each vertex under the order.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.order.len()];
        for (i, &v) in self.order.iter().enumerate() {
            pos[v] = i;
        }
        pos
    }

    /// The same hypergraph under the reversed order.
    pub fn reversed(&self) -> Self {
        let mut order = self.order.clone();
        order.reverse();
        OrderedHypergraph {
            base: self.base.clone(),
            order,
        }
    }

    /// Edges as position triples `(a, b, c)` with `a < b < c`.
    fn position_edges(&self) -> Vec<[usize; 3]> {
        let pos = self.positions();
        self.base
            .edges()
            .iter()
            .map(|&[u, v, w]| {
                let mut e = [pos[u], pos[v], pos[w]];
                e.sort_unstable();
                e
            })
            .collect()
    }
}

/// Number of unordered pairs on `n` vertices.
pub fn pair_count(n: usize) -> usize {
    n * (n - 1) / 2
}

/// Index of the unordered pair `{u, v}` (with `u < v`) in row-major upper
/// triangle layout.
pub fn pair_index(u: usize, v: usize, n: usize) -> usize {
    debug_assert!(u < v && v < n);
    u * n - u * (u + 1) / 2 + (v - u - 1)
}

/// An assignment of a palette color to every unordered vertex pair.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PairColoring {
    vertex_count: usize,
    colors: Vec<ColorId>,
}

impl PairColoring {
    pub fn new(vertex_count: usize, colors: Vec<ColorId>) -> Result<Self, CertificateError> {
        if colors.len() != pair_count(vertex_count) {
            return Err(CertificateError::WrongPairCount {
                got: colors.len(),
                expected: pair_count(vertex_count),
            });
        }
        Ok(PairColoring {
            vertex_count,
            colors,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn colors(&self) -> &[ColorId] {
        &self.colors
    }

    pub fn get(&self, u: usize, v: usize) -> ColorId {
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        self.colors[pair_index(a, b, self.vertex_count)]
    }

    /// Pushes every pair color through a palette homomorphism.
    pub fn mapped(&self, hom: &Homomorphism) -> PairColoring {
        PairColoring {
            vertex_count: self.vertex_count,
            colors: self.colors.iter().map(|&c| hom.apply(c)).collect(),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum CertificateError {
    #[error("coloring covers {got} pairs, hypergraph needs {expected}")]
    WrongPairCount { got: usize, expected: usize },
    #[error("coloring is over {coloring} vertices, hypergraph has {hypergraph}")]
    VertexMismatch { coloring: usize, hypergraph: usize },
    #[error("pair color {color} is outside the palette's {color_count} colors")]
    ColorOutOfRange { color: usize, color_count: usize },
}

/// Verifies a coloring as a colorability certificate: every edge
/// `u ⪯ v ⪯ w` must use a feasible triple `(color(uv), color(uw), color(vw))`.
pub fn check_certificate(
    h: &OrderedHypergraph,
    p: &Palette,
    coloring: &PairColoring,
) -> Result<bool, CertificateError> {
    if coloring.vertex_count() != h.base().vertex_count() {
        return Err(CertificateError::VertexMismatch {
            coloring: coloring.vertex_count(),
            hypergraph: h.base().vertex_count(),
        });
    }
    if let Some(c) = coloring.colors().iter().find(|c| c.0 >= p.color_count()) {
        return Err(CertificateError::ColorOutOfRange {
            color: c.0,
            color_count: p.color_count(),
        });
    }
    let order = h.order();
    for &[a, b, c] in &h.position_edges() {
        let (u, v, w) = (order[a], order[b], order[c]);
        let triple = Triple::new(coloring.get(u, v), coloring.get(u, w), coloring.get(v, w));
        if !p.contains(triple) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Search size limits; exceeding them is an error rather than a long wait.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SearchLimits {
    pub max_ordered_vertices: usize,
    pub max_unordered_vertices: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            max_ordered_vertices: 8,
            max_unordered_vertices: 7,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Error)]
#[error("instance too large: {vertices} vertices exceeds the configured bound {bound}")]
pub struct InstanceTooLarge {
    pub vertices: usize,
    pub bound: usize,
}

/// Exhaustive backtracking search for a certificate of the ordered
/// hypergraph. Pairs are assigned in lexicographic `(min position, max
/// position)` order with ascending colors; an edge is checked as soon as its
/// third pair receives a color.
pub fn ordered_colorable(
    h: &OrderedHypergraph,
    p: &Palette,
    limits: &SearchLimits,
) -> Result<Option<PairColoring>, InstanceTooLarge> {
    let n = h.base().vertex_count();
    if n > limits.max_ordered_vertices {
        return Err(InstanceTooLarge {
            vertices: n,
            bound: limits.max_ordered_vertices,
        });
    }
    Ok(ordered_colorable_unchecked(h, p))
}

fn ordered_colorable_unchecked(h: &OrderedHypergraph, p: &Palette) -> Option<PairColoring> {
    let n = h.base().vertex_count();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .collect();
    // completes_at[k] lists edges whose final pair in assignment order is
    // pair k; for an edge (a, b, c) that is the pair (b, c).
    let mut completes_at: Vec<Vec<[usize; 3]>> = vec![Vec::new(); pairs.len()];
    for edge in h.position_edges() {
        let [_, b, c] = edge;
        completes_at[pair_index(b, c, n)].push(edge);
    }

    let mut assigned: Vec<ColorId> = Vec::with_capacity(pairs.len());
    let color_at = |assigned: &[ColorId], i: usize, j: usize| assigned[pair_index(i, j, n)];

    fn backtrack(
        p: &Palette,
        pairs: &[(usize, usize)],
        completes_at: &[Vec<[usize; 3]>],
        assigned: &mut Vec<ColorId>,
        color_at: &impl Fn(&[ColorId], usize, usize) -> ColorId,
    ) -> bool {
        let k = assigned.len();
        if k == pairs.len() {
            return true;
        }
        'values: for color in 0..p.color_count() {
            assigned.push(ColorId(color));
            for &[a, b, c] in &completes_at[k] {
                let triple = Triple::new(
                    color_at(assigned, a, b),
                    color_at(assigned, a, c),
                    color_at(assigned, b, c),
                );
                if !p.contains(triple) {
                    assigned.pop();
                    continue 'values;
                }
            }
            if backtrack(p, pairs, completes_at, assigned, color_at) {
                return true;
            }
            assigned.pop();
        }
        false
    }

    if !backtrack(p, &pairs, &completes_at, &mut assigned, &color_at) {
        return None;
    }

    // Translate the position-space assignment back to vertex pairs.
    let order = h.order();
    let mut colors = vec![ColorId(0); pairs.len()];
    for (k, &(i, j)) in pairs.iter().enumerate() {
        let (u, v) = (order[i], order[j]);
        let (u, v) = if u < v { (u, v) } else { (v, u) };
        colors[pair_index(u, v, n)] = assigned[k];
    }
    Some(PairColoring {
        vertex_count: n,
        colors,
    })
}

/// Unordered colorability: scans all vertex orders lexicographically and
/// returns the witness from the first order that admits a certificate.
pub fn colorable(
    h: &Hypergraph,
    p: &Palette,
    limits: &SearchLimits,
) -> Result<Option<(Vec<usize>, PairColoring)>, InstanceTooLarge> {
    let n = h.vertex_count();
    if n > limits.max_unordered_vertices {
        return Err(InstanceTooLarge {
            vertices: n,
            bound: limits.max_unordered_vertices,
        });
    }
    if n == 0 {
        return Ok(Some((
            Vec::new(),
            PairColoring {
                vertex_count: 0,
                colors: Vec::new(),
            },
        )));
    }
    for order in (0..n).permutations(n) {
        let ordered = OrderedHypergraph {
            base: h.clone(),
            order,
        };
        if let Some(coloring) = ordered_colorable_unchecked(&ordered, p) {
            return Ok(Some((ordered.order, coloring)));
        }
    }
    Ok(None)
}

/// Samples the palette-based random hypergraph: every vertex pair draws an
/// independent color from `distribution`, and exactly the consistently
/// colored triples become edges. The returned coloring certifies the result
/// by construction.
pub fn random_palette_hypergraph(
    p: &Palette,
    n: usize,
    distribution: &SimplexPoint,
    seed: u64,
) -> Result<(OrderedHypergraph, PairColoring), crate::simplex::DimensionMismatch> {
    if distribution.dimension() != p.color_count() {
        return Err(crate::simplex::DimensionMismatch {
            palette: p.color_count(),
            point: distribution.dimension(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights = distribution.weights();
    let mut colors = Vec::with_capacity(pair_count(n));
    for _ in 0..pair_count(n) {
        let draw: f64 = rng.random();
        let mut cumulative = 0.0;
        let mut picked = p.color_count() - 1;
        for (c, &w) in weights.iter().enumerate() {
            cumulative += w;
            if draw < cumulative {
                picked = c;
                break;
            }
        }
        colors.push(ColorId(picked));
    }
    let coloring = PairColoring {
        vertex_count: n,
        colors,
    };
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            for k in (j + 1)..n {
                let triple =
                    Triple::new(coloring.get(i, j), coloring.get(i, k), coloring.get(j, k));
                if p.contains(triple) {
                    edges.push((i, j, k));
                }
            }
        }
    }
    let base = Hypergraph::new(n, edges).expect("construction yields valid edges");
    Ok((OrderedHypergraph::natural(base), coloring))
}

/// Vertex bound for the exact induced-density scan.
pub const EXACT_DENSITY_MAX_VERTICES: usize = 20;

fn binomial3(s: usize) -> usize {
    s * (s - 1) * (s - 2) / 6
}

fn size_admissible(s: usize, min_frac: f64, n: usize) -> bool {
    s >= 3 && (s as f64) + 1e-9 >= min_frac * n as f64
}

/// Exact minimum induced edge density `e(S) / C(|S|, 3)` over all vertex
/// subsets with `|S| ≥ min_frac·n` (subsets below three vertices span no
/// triples and are skipped).
pub fn min_induced_density(h: &Hypergraph, min_frac: f64) -> Result<f64, InstanceTooLarge> {
    let n = h.vertex_count();
    if n > EXACT_DENSITY_MAX_VERTICES {
        return Err(InstanceTooLarge {
            vertices: n,
            bound: EXACT_DENSITY_MAX_VERTICES,
        });
    }
    let edge_masks: Vec<u32> = h
        .edges()
        .iter()
        .map(|&[a, b, c]| (1 << a) | (1 << b) | (1 << c))
        .collect();
    let mut best = f64::INFINITY;
    for mask in 1u32..(1u32 << n) {
        let s = mask.count_ones() as usize;
        if !size_admissible(s, min_frac, n) {
            continue;
        }
        let spanned = edge_masks.iter().filter(|&&e| e & mask == e).count();
        let density = spanned as f64 / binomial3(s) as f64;
        if density < best {
            best = density;
        }
    }
    if best.is_infinite() {
        return Ok(0.0);
    }
    Ok(best)
}

/// Sampled variant for larger instances: the minimum over seeded uniformly
/// random subsets of each admissible size, an upper bound on the exact
/// minimum.
pub fn min_induced_density_sampled(
    h: &Hypergraph,
    min_frac: f64,
    samples_per_size: usize,
    seed: u64,
) -> f64 {
    let n = h.vertex_count();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = f64::INFINITY;
    let mut scratch: Vec<usize> = (0..n).collect();
    let mut member = vec![false; n];
    for s in 3..=n {
        if !size_admissible(s, min_frac, n) {
            continue;
        }
        for _ in 0..samples_per_size {
            // Partial Fisher-Yates: the first s entries become the sample.
            for i in 0..s {
                let j = rng.random_range(i..n);
                scratch.swap(i, j);
            }
            member.iter_mut().for_each(|m| *m = false);
            for &v in &scratch[..s] {
                member[v] = true;
            }
            let spanned = h
                .edges()
                .iter()
                .filter(|&&[a, b, c]| member[a] && member[b] && member[c])
                .count();
            let density = spanned as f64 / binomial3(s) as f64;
            if density < best {
                best = density;
            }
        }
    }
    if best.is_infinite() {
        0.0
    } else {
        best
    }
}

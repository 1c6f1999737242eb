//! Separation conditions between palette families: the homomorphism-based
//! necessary-and-sufficient tests, the 4/81 density bound, small-witness
//! search, and the scripted end-to-end verification of the 4/81 pipeline.
//!
//! A family `P_1, …, P_r` separates from a target `P_0` (some hypergraph is
//! colorable by every `P_s` and not by `P_0`) exactly when, for every `q`,
//! the palette `P_q × ∏_{s≠q} sym(P_s)` admits no homomorphism to `P_0` nor
//! to `inv(P_0)`.

use std::fmt;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::builtins;
use crate::colorability::{
    check_certificate, colorable, Hypergraph, OrderedHypergraph, PairColoring, SearchLimits,
};
use crate::hom::{exists_hom, Homomorphism};
use crate::palette::{product, product_color_index, ColorId, ColorRoles, Palette, Rational};
use crate::simplex::{brute_force_lagrangian, lagrangian, DEFAULT_TOLERANCE};

/// Which side of the target a blocking homomorphism lands in.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TargetDirection {
    Straight,
    Inverted,
}

impl fmt::Display for TargetDirection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TargetDirection::Straight => write!(f, "straight"),
            TargetDirection::Inverted => write!(f, "inverted"),
        }
    }
}

/// A homomorphism refuting separability, tagged with the indices of the
/// positive factor and the negative target it blocks.
#[derive(Clone, Debug)]
pub struct BlockingCertificate {
    pub positive_index: usize,
    pub negative_index: usize,
    pub direction: TargetDirection,
    pub hom: Homomorphism,
}

/// Verdict of a separation test; separable exactly when no blocking
/// certificate exists. Certificates are listed in `(positive, negative,
/// direction)` order.
#[derive(Clone, Debug)]
pub struct SeparationVerdict {
    pub certificates: Vec<BlockingCertificate>,
}

impl SeparationVerdict {
    pub fn separable(&self) -> bool {
        self.certificates.is_empty()
    }

    /// Re-validates every certificate against its stated target.
    pub fn verify(&self) -> bool {
        self.certificates.iter().all(|c| c.hom.verify())
    }
}

/// A separation question: is some hypergraph colorable by every positive
/// palette and by no negative palette?
#[derive(Clone, Debug)]
pub struct SeparationQuery {
    pub positives: Vec<Palette>,
    pub negatives: Vec<Palette>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Error)]
pub enum QueryError {
    #[error("a separation query needs at least one positive palette")]
    NoPositives,
    #[error("a separation query needs at least one negative palette")]
    NoNegatives,
}

impl SeparationQuery {
    pub fn new(positives: Vec<Palette>, negatives: Vec<Palette>) -> Result<Self, QueryError> {
        if positives.is_empty() {
            return Err(QueryError::NoPositives);
        }
        if negatives.is_empty() {
            return Err(QueryError::NoNegatives);
        }
        Ok(SeparationQuery {
            positives,
            negatives,
        })
    }
}

/// The product `P_q × ∏_{s≠q} sym(P_s)` tested against the targets.
pub fn symmetrized_product(positives: &[Palette], q: usize) -> Palette {
    let mut factors = Vec::with_capacity(positives.len());
    factors.push(positives[q].clone());
    for (s, palette) in positives.iter().enumerate() {
        if s != q {
            factors.push(palette.symmetrize());
        }
    }
    product(&factors).expect("at least one factor")
}

/// Single-positive separation test: separable from `p0` exactly when `p`
/// has no homomorphism to `p0` nor to `inv(p0)`.
pub fn single_condition(p: &Palette, p0: &Palette) -> SeparationVerdict {
    multi_condition(std::slice::from_ref(p), p0)
}

/// Multi-positive separation test against a single target: for every `q`
/// the symmetrized product must avoid both `p0` and `inv(p0)`.
pub fn multi_condition(positives: &[Palette], p0: &Palette) -> SeparationVerdict {
    assert!(
        !positives.is_empty(),
        "multi_condition needs at least one positive"
    );
    let inverse = p0.inverse();
    let mut certificates = Vec::new();
    for q in 0..positives.len() {
        let source = symmetrized_product(positives, q);
        for (direction, target) in [
            (TargetDirection::Straight, p0),
            (TargetDirection::Inverted, &inverse),
        ] {
            if let Some(hom) = exists_hom(&source, target) {
                certificates.push(BlockingCertificate {
                    positive_index: q,
                    negative_index: 0,
                    direction,
                    hom,
                });
            }
        }
    }
    SeparationVerdict { certificates }
}

/// Family separation test: the conjunction of [`multi_condition`] over all
/// negatives, with certificates aggregated.
pub fn family_condition(query: &SeparationQuery) -> SeparationVerdict {
    let mut certificates = Vec::new();
    for (negative_index, negative) in query.negatives.iter().enumerate() {
        let mut verdict = multi_condition(&query.positives, negative);
        for certificate in &mut verdict.certificates {
            certificate.negative_index = negative_index;
        }
        certificates.extend(verdict.certificates);
    }
    certificates.sort_by_key(|c| {
        (
            c.positive_index,
            c.negative_index,
            c.direction == TargetDirection::Inverted,
        )
    });
    SeparationVerdict { certificates }
}

/// Which of the three bound tests produced a homomorphism.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BoundWitnessKind {
    /// `P_LM` into the palette itself.
    LeftMiddleStraight,
    /// `P_LM` into the inverse palette.
    LeftMiddleInverted,
    /// `P_3T` into the palette itself.
    ChainStraight,
}

/// Outcome of the 4/81 density bound test.
#[derive(Clone, Debug)]
pub enum DensityBound {
    /// All three homomorphism tests failed; the density is at most 4/81 and
    /// the role classification certifies the counting argument.
    Holds {
        roles: ColorRoles,
        density: Rational,
    },
    /// One of the tests produced a witness, so the bound gives no
    /// information about this palette.
    HomomorphismFound {
        kind: BoundWitnessKind,
        witness: Homomorphism,
    },
}

/// The three homomorphism tests all failing forces `density ≤ 4/81`; a
/// failure of that implication indicates a solver defect and is returned as
/// an error rather than a verdict.
#[derive(Clone, Debug, Error)]
#[error(
    "solver defect: all three homomorphism tests failed yet the density {density} exceeds 4/81"
)]
pub struct DensityBoundDefect {
    pub density: Rational,
}

pub fn density_bound_481(p: &Palette) -> Result<DensityBound, DensityBoundDefect> {
    let tests = [
        (
            BoundWitnessKind::LeftMiddleStraight,
            builtins::p_lm(),
            p.clone(),
        ),
        (
            BoundWitnessKind::LeftMiddleInverted,
            builtins::p_lm(),
            p.inverse(),
        ),
        (BoundWitnessKind::ChainStraight, builtins::p_3t(), p.clone()),
    ];
    for (kind, source, target) in tests {
        if let Some(witness) = exists_hom(&source, &target) {
            return Ok(DensityBound::HomomorphismFound { kind, witness });
        }
    }
    let density = p.density();
    if density > Rational::new(4, 81) {
        return Err(DensityBoundDefect { density });
    }
    Ok(DensityBound::Holds {
        roles: p.classify_roles(),
        density,
    })
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Error)]
#[error("witness search supports at most {max} vertices, {got} requested")]
pub struct WitnessBoundTooLarge {
    pub got: usize,
    pub max: usize,
}

/// Vertex cap for the exhaustive witness enumeration.
pub const WITNESS_SEARCH_MAX_VERTICES: usize = 7;

/// Best-effort constructive companion to the separation conditions:
/// enumerates hypergraphs by vertex count, then edge count, skipping
/// non-canonical relabelings, and returns the first one colorable by every
/// positive and by no negative. Exhausting the bound proves nothing — small
/// witnesses need not exist even for separable queries.
pub fn witness_search(
    query: &SeparationQuery,
    max_vertices: usize,
) -> Result<Option<Hypergraph>, WitnessBoundTooLarge> {
    if max_vertices > WITNESS_SEARCH_MAX_VERTICES {
        return Err(WitnessBoundTooLarge {
            got: max_vertices,
            max: WITNESS_SEARCH_MAX_VERTICES,
        });
    }
    let limits = SearchLimits::default();
    for n in 3..=max_vertices {
        let mut possible = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                for k in (j + 1)..n {
                    possible.push((i, j, k));
                }
            }
        }
        for edge_count in 1..=possible.len() {
            let mut chosen = vec![0usize; edge_count];
            let found = enumerate_edge_subsets(&possible, &mut chosen, 0, 0, &mut |edges| {
                let h = Hypergraph::new(n, edges.to_vec()).expect("edges are distinct");
                if h.canonical_form() != h.edges() {
                    return None;
                }
                if is_separating_witness(&h, query, &limits) {
                    Some(h)
                } else {
                    None
                }
            });
            if let Some(h) = found {
                return Ok(Some(h));
            }
        }
    }
    Ok(None)
}

fn enumerate_edge_subsets(
    possible: &[(usize, usize, usize)],
    chosen: &mut Vec<usize>,
    depth: usize,
    start: usize,
    visit: &mut impl FnMut(&[(usize, usize, usize)]) -> Option<Hypergraph>,
) -> Option<Hypergraph> {
    if depth == chosen.len() {
        let edges: Vec<(usize, usize, usize)> = chosen.iter().map(|&i| possible[i]).collect();
        return visit(&edges);
    }
    let remaining = chosen.len() - depth;
    for i in start..=(possible.len() - remaining) {
        chosen[depth] = i;
        if let Some(h) = enumerate_edge_subsets(possible, chosen, depth + 1, i + 1, visit) {
            return Some(h);
        }
    }
    None
}

fn is_separating_witness(h: &Hypergraph, query: &SeparationQuery, limits: &SearchLimits) -> bool {
    let mut positive_witnesses = Vec::new();
    for p in &query.positives {
        match colorable(h, p, limits).expect("witness sizes stay within limits") {
            Some(witness) => positive_witnesses.push(witness),
            None => return false,
        }
    }
    for p in &query.negatives {
        if colorable(h, p, limits)
            .expect("witness sizes stay within limits")
            .is_some()
        {
            return false;
        }
    }
    // Independent re-verification of the positive certificates.
    for (p, (order, coloring)) in query.positives.iter().zip(&positive_witnesses) {
        let ordered =
            OrderedHypergraph::new(h.clone(), order.clone()).expect("search returns permutations");
        if !check_certificate(&ordered, p, coloring).unwrap_or(false) {
            return false;
        }
    }
    true
}

/// Builds the certificate that makes a hypergraph colorable by the
/// symmetrized product `P_q × ∏_{s≠q} sym(P_s)` under the `q`-th witness
/// order, out of per-palette colorability witnesses `(order, coloring)`:
/// each remaining factor colors a pair with its own witness color, or with
/// that color's clone when the factor's order disagrees with the `q`-th
/// order on the pair.
pub fn sym_product_certificate(
    h: &Hypergraph,
    positives: &[Palette],
    witnesses: &[(Vec<usize>, PairColoring)],
    q: usize,
) -> (OrderedHypergraph, PairColoring) {
    assert_eq!(positives.len(), witnesses.len());
    let n = h.vertex_count();
    let (q_order, _) = &witnesses[q];
    let ordered = OrderedHypergraph::new(h.clone(), q_order.clone()).expect("witness order");

    let mut positions: Vec<Vec<usize>> = Vec::with_capacity(witnesses.len());
    for (order, _) in witnesses {
        let mut pos = vec![0usize; n];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        positions.push(pos);
    }

    let mut factor_order: Vec<usize> = vec![q];
    for s in 0..positives.len() {
        if s != q {
            factor_order.push(s);
        }
    }
    let factor_sizes: Vec<usize> = factor_order
        .iter()
        .map(|&s| {
            if s == q {
                positives[s].color_count()
            } else {
                2 * positives[s].color_count()
            }
        })
        .collect();

    let pos_q = &positions[q];
    let mut colors = Vec::with_capacity(n * (n - 1) / 2);
    for u in 0..n {
        for v in (u + 1)..n {
            let (lo, hi) = if pos_q[u] < pos_q[v] { (u, v) } else { (v, u) };
            let mut components = Vec::with_capacity(factor_order.len());
            for (slot, &s) in factor_order.iter().enumerate() {
                let base = witnesses[s].1.get(lo, hi);
                if slot == 0 {
                    components.push(base);
                } else {
                    let agrees = positions[s][lo] < positions[s][hi];
                    components.push(if agrees {
                        base
                    } else {
                        ColorId(base.0 + positives[s].color_count())
                    });
                }
            }
            colors.push(product_color_index(&factor_sizes, &components));
        }
    }
    let coloring = PairColoring::new(n, colors).expect("one color per pair");
    (ordered, coloring)
}

/// One line of the 4/81 verification report.
#[derive(Clone, Debug)]
pub struct ReportItem {
    pub label: String,
    pub passed: bool,
    pub detail: String,
}

/// Outcome of the scripted 4/81 verification.
#[derive(Clone, Debug)]
pub struct Verify481Report {
    pub items: Vec<ReportItem>,
    pub elapsed_seconds: f64,
}

impl Verify481Report {
    pub fn all_passed(&self) -> bool {
        self.items.iter().all(|item| item.passed)
    }
}

impl fmt::Display for Verify481Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for item in &self.items {
            let tag = if item.passed { "PASS" } else { "FAIL" };
            writeln!(f, "[{tag}] {}: {}", item.label, item.detail)?;
        }
        let failed = self.items.iter().filter(|i| !i.passed).count();
        if failed == 0 {
            write!(f, "all {} checks passed", self.items.len())
        } else {
            write!(f, "{failed} of {} checks failed", self.items.len())
        }
    }
}

/// Runs the complete 4/81 verification over the built-in palettes: the four
/// homomorphism-absence checks, the Lagrangian and its grid oracle, the
/// inverse self-isomorphism, randomized density-bound spot checks, and the
/// family separation verdict.
pub fn verify_481() -> Verify481Report {
    verify_481_with(&builtins::p_lm(), &builtins::p_3t(), &builtins::p_4_81())
}

/// Parameterized core of [`verify_481`], also used to exercise the report
/// on perturbed palettes.
pub fn verify_481_with(lm: &Palette, chain: &Palette, target: &Palette) -> Verify481Report {
    let start = Instant::now();
    let mut items = Vec::new();

    let first = product(&[lm.clone(), chain.symmetrize()]).expect("two factors");
    let second = product(&[chain.clone(), lm.symmetrize()]).expect("two factors");
    let inverse_target = target.inverse();
    let hom_checks = [
        ("no homomorphism P_LM x sym(P_3T) -> P_4_81", &first, target),
        (
            "no homomorphism P_LM x sym(P_3T) -> inv(P_4_81)",
            &first,
            &inverse_target,
        ),
        (
            "no homomorphism P_3T x sym(P_LM) -> P_4_81",
            &second,
            target,
        ),
        (
            "no homomorphism P_3T x sym(P_LM) -> inv(P_4_81)",
            &second,
            &inverse_target,
        ),
    ];
    for (label, source, hom_target) in hom_checks {
        let witness = exists_hom(source, hom_target);
        items.push(ReportItem {
            label: label.to_string(),
            passed: witness.is_none(),
            detail: match witness {
                None => "exhaustive search found none".to_string(),
                Some(hom) => format!("found a homomorphism: {hom}"),
            },
        });
    }

    let expected = 4.0 / 81.0;
    let result = lagrangian(target, 200, DEFAULT_TOLERANCE, 481);
    let deviation = (result.value - expected).abs();
    items.push(ReportItem {
        label: "lagrangian(P_4_81) = 4/81 within 1e-6".to_string(),
        passed: deviation <= 1e-6,
        detail: format!(
            "value {:.12}, |value - 4/81| = {:.3e}, kkt residual {:.3e}",
            result.value, deviation, result.kkt_residual
        ),
    });

    let grid = brute_force_lagrangian(target, 9);
    items.push(ReportItem {
        label: "grid oracle at 9 steps equals 4/81 exactly".to_string(),
        passed: grid.as_ref().is_ok_and(|g| *g == Rational::new(4, 81)),
        detail: match &grid {
            Ok(g) => format!("grid maximum {g}"),
            Err(e) => format!("oracle unavailable: {e}"),
        },
    });

    let iso = crate::palette::find_isomorphism(target, &inverse_target);
    items.push(ReportItem {
        label: "P_4_81 is isomorphic to its inverse".to_string(),
        passed: iso.is_some(),
        detail: match &iso {
            Some(hom) => format!("renaming {hom}"),
            None => "no color renaming carries the triples onto the inverse".to_string(),
        },
    });

    let spot = density_bound_spot_checks(2000, 0x481);
    items.push(ReportItem {
        label: "density bound spot checks (2000 random palettes)".to_string(),
        passed: spot.defects == 0,
        detail: format!(
            "{} bound-certified palettes, {} with witnesses, {} defects",
            spot.holds, spot.witnessed, spot.defects
        ),
    });

    let query = SeparationQuery::new(vec![lm.clone(), chain.clone()], vec![target.clone()])
        .expect("nonempty query");
    let verdict = family_condition(&query);
    items.push(ReportItem {
        label: "family condition: {P_LM, P_3T} separable from P_4_81".to_string(),
        passed: verdict.separable() && verdict.verify(),
        detail: if verdict.separable() {
            "all symmetrized-product homomorphism tests failed".to_string()
        } else {
            format!(
                "{} blocking certificate(s) found",
                verdict.certificates.len()
            )
        },
    });

    Verify481Report {
        items,
        elapsed_seconds: start.elapsed().as_secs_f64(),
    }
}

struct SpotCheckStats {
    holds: usize,
    witnessed: usize,
    defects: usize,
}

fn density_bound_spot_checks(cases: usize, seed: u64) -> SpotCheckStats {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stats = SpotCheckStats {
        holds: 0,
        witnessed: 0,
        defects: 0,
    };
    for _ in 0..cases {
        let palette = random_small_palette(&mut rng, 5);
        match density_bound_481(&palette) {
            Ok(DensityBound::Holds { .. }) => stats.holds += 1,
            Ok(DensityBound::HomomorphismFound { .. }) => stats.witnessed += 1,
            Err(_) => stats.defects += 1,
        }
    }
    stats
}

/// Seeded random palette generator used by the spot checks: few colors,
/// mixed sparse and dense triple sets.
pub fn random_small_palette(rng: &mut ChaCha8Rng, max_colors: usize) -> Palette {
    let n = rng.random_range(1..=max_colors);
    let names: Vec<String> = (0..n).map(|i| format!("c{i}")).collect();
    let mut triples = Vec::new();
    if rng.random::<f64>() < 0.6 {
        // Sparse: a handful of random triples.
        let want = rng.random_range(0..=8usize.min(n * n * n));
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
        let rate: f64 = rng.random_range(0.05..0.6);
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

/// A triple in a palette exhibiting the obstruction used by the bound
/// argument: a color that is a middle somewhere and an end (left or right)
/// elsewhere maps to a color with the same property, so its absence in the
/// target rules out any homomorphism. Used by tests as an independent
/// confirmation route.
pub fn middle_and_end_overlap(p: &Palette) -> (bool, bool) {
    let roles = p.classify_roles();
    let middle_and_left = roles
        .middle_colors
        .intersection(&roles.left_colors)
        .next()
        .is_some();
    let middle_and_right = roles
        .middle_colors
        .intersection(&roles.right_colors)
        .next()
        .is_some();
    (middle_and_left, middle_and_right)
}

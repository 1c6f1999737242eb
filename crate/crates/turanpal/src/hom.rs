//! Palette homomorphisms and the backtracking decision procedure.
//!
//! A homomorphism from `(C, T)` to `(C', T')` is a total map `f: C → C'`
//! with `(f(x), f(y), f(z)) ∈ T'` for every `(x, y, z) ∈ T`. The solver
//! backtracks over the source colors that occur in triples (most-occurring
//! first) with forward checking on the ternary triple constraints; colors
//! outside every triple are unconstrained and assigned afterwards.

use std::fmt;

use thiserror::Error;

use crate::palette::{ColorId, Palette, Triple};

/// A verified palette homomorphism. Construction re-checks totality and
/// triple preservation, so a value of this type is always a witness.
#[derive(Clone, PartialEq, Debug)]
pub struct Homomorphism {
    source: Palette,
    target: Palette,
    map: Vec<ColorId>,
}

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum HomomorphismError {
    #[error("map has {got} entries but the source palette has {expected} colors")]
    WrongLength { got: usize, expected: usize },
    #[error("color {color} maps to {image}, outside the target's {target_colors} colors")]
    ImageOutOfRange {
        color: usize,
        image: usize,
        target_colors: usize,
    },
    #[error("triple {triple} maps outside the target triple set")]
    TripleNotPreserved { triple: Triple },
    #[error("cannot compose: the first map's target differs from the second map's source")]
    ComposeMismatch,
}

impl Homomorphism {
    /// Builds a homomorphism after verifying the map against the invariants.
    pub fn new(
        source: Palette,
        target: Palette,
        map: Vec<ColorId>,
    ) -> Result<Self, HomomorphismError> {
        if map.len() != source.color_count() {
            return Err(HomomorphismError::WrongLength {
                got: map.len(),
                expected: source.color_count(),
            });
        }
        for (color, image) in map.iter().enumerate() {
            if image.0 >= target.color_count() {
                return Err(HomomorphismError::ImageOutOfRange {
                    color,
                    image: image.0,
                    target_colors: target.color_count(),
                });
            }
        }
        let hom = Homomorphism {
            source,
            target,
            map,
        };
        match hom.first_unpreserved_triple() {
            None => Ok(hom),
            Some(triple) => Err(HomomorphismError::TripleNotPreserved { triple }),
        }
    }

    pub fn identity(p: &Palette) -> Self {
        Homomorphism {
            source: p.clone(),
            target: p.clone(),
            map: p.colors().collect(),
        }
    }

    pub fn source(&self) -> &Palette {
        &self.source
    }

    pub fn target(&self) -> &Palette {
        &self.target
    }

    pub fn map(&self) -> &[ColorId] {
        &self.map
    }

    pub fn apply(&self, color: ColorId) -> ColorId {
        self.map[color.0]
    }

    pub fn apply_triple(&self, triple: Triple) -> Triple {
        Triple::new(
            self.apply(triple.left),
            self.apply(triple.middle),
            self.apply(triple.right),
        )
    }

    /// Re-validates triple preservation by direct enumeration.
    pub fn verify(&self) -> bool {
        self.first_unpreserved_triple().is_none()
    }

    fn first_unpreserved_triple(&self) -> Option<Triple> {
        self.source
            .triples()
            .iter()
            .copied()
            .find(|&t| !self.target.contains(self.apply_triple(t)))
    }
}

impl fmt::Display for Homomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, image) in self.map.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(
                f,
                "{}:{}",
                self.source.name(ColorId(i)),
                self.target.name(*image)
            )?;
        }
        Ok(())
    }
}

/// Composes `f: P → Q` with `g: Q → R` into `g ∘ f : P → R`.
pub fn compose(f: &Homomorphism, g: &Homomorphism) -> Result<Homomorphism, HomomorphismError> {
    if f.target() != g.source() {
        return Err(HomomorphismError::ComposeMismatch);
    }
    let map = f.map().iter().map(|&c| g.apply(c)).collect();
    Homomorphism::new(f.source().clone(), g.target().clone(), map)
}

/// Fixed-universe bit set holding candidate target colors.
#[derive(Clone, PartialEq, Eq, Debug)]
struct Domain {
    words: Vec<u64>,
}

impl Domain {
    fn full(len: usize) -> Self {
        let mut words = vec![u64::MAX; len.div_ceil(64)];
        if !len.is_multiple_of(64) {
            *words.last_mut().unwrap() = (1u64 << (len % 64)) - 1;
        }
        if len == 0 {
            words.clear();
        }
        Domain { words }
    }

    fn empty_like(&self) -> Self {
        Domain {
            words: vec![0; self.words.len()],
        }
    }

    fn insert(&mut self, value: usize) {
        self.words[value / 64] |= 1 << (value % 64);
    }

    fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &word)| {
            let mut w = word;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let bit = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(i * 64 + bit)
                }
            })
        })
    }
}

/// One slot of a source triple during search: an already assigned image or
/// a reference to the variable owning the slot's color.
#[derive(Clone, Copy)]
enum Slot {
    Var(usize),
    Fixed(ColorId),
}

struct HomSearch<'a> {
    source: &'a Palette,
    target: &'a Palette,
    /// Constrained source colors in search order (descending occurrence,
    /// ties by color id).
    vars: Vec<ColorId>,
    /// Source color index -> variable slot.
    var_of_color: Vec<Option<usize>>,
    /// Variable slot -> indices into `source.triples()` mentioning it.
    triples_of_var: Vec<Vec<usize>>,
    assignment: Vec<Option<ColorId>>,
    domains: Vec<Domain>,
}

enum SearchGoal {
    FirstWitness,
    Count {
        limit: u64,
        unconstrained_factor: u64,
    },
}

enum SearchOutcome {
    Found(Vec<ColorId>),
    Counted(u64),
}

impl<'a> HomSearch<'a> {
    fn new(source: &'a Palette, target: &'a Palette) -> Self {
        let mut occurrences = vec![0usize; source.color_count()];
        for t in source.triples() {
            for c in t.components() {
                occurrences[c.0] += 1;
            }
        }
        let mut vars: Vec<ColorId> = source.colors().filter(|c| occurrences[c.0] > 0).collect();
        vars.sort_by_key(|c| (std::cmp::Reverse(occurrences[c.0]), c.0));
        let mut var_of_color = vec![None; source.color_count()];
        for (slot, c) in vars.iter().enumerate() {
            var_of_color[c.0] = Some(slot);
        }
        let mut triples_of_var = vec![Vec::new(); vars.len()];
        for (idx, t) in source.triples().iter().enumerate() {
            let mut slots: Vec<usize> = t
                .components()
                .iter()
                .map(|c| var_of_color[c.0].unwrap())
                .collect();
            slots.sort_unstable();
            slots.dedup();
            for slot in slots {
                triples_of_var[slot].push(idx);
            }
        }
        let domains = vec![Domain::full(target.color_count()); vars.len()];
        let assignment = vec![None; vars.len()];
        HomSearch {
            source,
            target,
            vars,
            var_of_color,
            triples_of_var,
            assignment,
            domains,
        }
    }

    fn slots_of(&self, triple: Triple) -> [Slot; 3] {
        let slot = |c: ColorId| match self.var_of_color[c.0] {
            Some(v) => match self.assignment[v] {
                Some(image) => Slot::Fixed(image),
                None => Slot::Var(v),
            },
            None => unreachable!("triples only mention constrained colors"),
        };
        [slot(triple.left), slot(triple.middle), slot(triple.right)]
    }

    fn triple_with(&self, slots: &[Slot; 3], values: &dyn Fn(usize) -> ColorId) -> Triple {
        let resolve = |s: &Slot| match *s {
            Slot::Fixed(c) => c,
            Slot::Var(v) => values(v),
        };
        Triple::new(resolve(&slots[0]), resolve(&slots[1]), resolve(&slots[2]))
    }

    /// Forward checking after assigning `var`: every triple mentioning it
    /// either becomes fully checked, or the candidate sets of its still-free
    /// colors are filtered down to supported values. Returns false on a
    /// wipe-out or a violated fully-assigned triple.
    fn prune_after(&mut self, var: usize) -> bool {
        let triple_ids = self.triples_of_var[var].clone();
        for idx in triple_ids {
            let triple = self.source.triples()[idx];
            let slots = self.slots_of(triple);
            let mut free: Vec<usize> = slots
                .iter()
                .filter_map(|s| match s {
                    Slot::Var(v) => Some(*v),
                    Slot::Fixed(_) => None,
                })
                .collect();
            free.sort_unstable();
            free.dedup();
            match free.len() {
                0 => {
                    let image = self.triple_with(&slots, &|_| unreachable!());
                    if !self.target.contains(image) {
                        return false;
                    }
                }
                1 => {
                    let u = free[0];
                    let mut allowed = self.domains[u].empty_like();
                    for w in self.domains[u].iter() {
                        let image = self.triple_with(&slots, &|_| ColorId(w));
                        if self.target.contains(image) {
                            allowed.insert(w);
                        }
                    }
                    if allowed.is_empty() {
                        return false;
                    }
                    self.domains[u] = allowed;
                }
                2 => {
                    let (u1, u2) = (free[0], free[1]);
                    let mut allowed1 = self.domains[u1].empty_like();
                    let mut allowed2 = self.domains[u2].empty_like();
                    for w1 in self.domains[u1].iter() {
                        for w2 in self.domains[u2].iter() {
                            let image = self.triple_with(&slots, &|v| {
                                if v == u1 {
                                    ColorId(w1)
                                } else {
                                    ColorId(w2)
                                }
                            });
                            if self.target.contains(image) {
                                allowed1.insert(w1);
                                allowed2.insert(w2);
                            }
                        }
                    }
                    if allowed1.is_empty() || allowed2.is_empty() {
                        return false;
                    }
                    self.domains[u1] = allowed1;
                    self.domains[u2] = allowed2;
                }
                _ => unreachable!("a triple has at most 3 distinct colors, one was just assigned"),
            }
        }
        true
    }

    /// Initial unary pruning: a triple whose three positions carry the same
    /// color constrains that color before any assignment is made.
    fn prune_unary(&mut self) -> bool {
        for t in self.source.triples() {
            if t.left == t.middle && t.middle == t.right {
                let var = self.var_of_color[t.left.0].unwrap();
                let mut allowed = self.domains[var].empty_like();
                for w in self.domains[var].iter() {
                    if self
                        .target
                        .contains(Triple::new(ColorId(w), ColorId(w), ColorId(w)))
                    {
                        allowed.insert(w);
                    }
                }
                if allowed.is_empty() {
                    return false;
                }
                self.domains[var] = allowed;
            }
        }
        true
    }

    fn neighbors(&self, var: usize) -> Vec<usize> {
        let mut out = Vec::new();
        for &idx in &self.triples_of_var[var] {
            for c in self.source.triples()[idx].components() {
                let v = self.var_of_color[c.0].unwrap();
                if v != var && self.assignment[v].is_none() {
                    out.push(v);
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        out
    }

    fn search(
        &mut self,
        next: usize,
        goal: &SearchGoal,
        counted: &mut u64,
    ) -> Option<Vec<ColorId>> {
        if next == self.vars.len() {
            return match goal {
                SearchGoal::FirstWitness => {
                    Some(self.assignment.iter().map(|a| a.unwrap()).collect())
                }
                SearchGoal::Count {
                    limit,
                    unconstrained_factor,
                } => {
                    *counted = counted.saturating_add(*unconstrained_factor).min(*limit);
                    if *counted >= *limit {
                        Some(Vec::new())
                    } else {
                        None
                    }
                }
            };
        }
        let candidates: Vec<usize> = self.domains[next].iter().collect();
        for value in candidates {
            self.assignment[next] = Some(ColorId(value));
            let touched = self.neighbors(next);
            let saved: Vec<(usize, Domain)> = touched
                .iter()
                .map(|&v| (v, self.domains[v].clone()))
                .collect();
            if self.prune_after(next) {
                if let Some(found) = self.search(next + 1, goal, counted) {
                    return Some(found);
                }
            }
            for (v, domain) in saved {
                self.domains[v] = domain;
            }
            self.assignment[next] = None;
        }
        self.assignment[next] = None;
        None
    }

    fn run(mut self, goal: SearchGoal) -> SearchOutcome {
        if !self.prune_unary() {
            return SearchOutcome::Counted(0);
        }
        let mut counted = 0u64;
        let found = self.search(0, &goal, &mut counted);
        match goal {
            SearchGoal::FirstWitness => match found {
                Some(assignment) => {
                    let mut map = vec![ColorId(0); self.source.color_count()];
                    for (slot, color) in self.vars.iter().enumerate() {
                        map[color.0] = assignment[slot];
                    }
                    SearchOutcome::Found(map)
                }
                None => SearchOutcome::Counted(0),
            },
            SearchGoal::Count { .. } => SearchOutcome::Counted(counted),
        }
    }
}

/// Decides homomorphism existence from `p` to `q` and returns the first
/// witness in the deterministic search order, or `None` after an exhaustive
/// search. Source colors occurring in no triple map to target color 0.
pub fn exists_hom(p: &Palette, q: &Palette) -> Option<Homomorphism> {
    match HomSearch::new(p, q).run(SearchGoal::FirstWitness) {
        SearchOutcome::Found(map) => Some(
            Homomorphism::new(p.clone(), q.clone(), map)
                .expect("search returned a non-homomorphism"),
        ),
        SearchOutcome::Counted(_) => None,
    }
}

/// Counts distinct total homomorphisms from `p` to `q`, saturating at
/// `limit`. Colors occurring in no triple contribute a multiplicative factor
/// of `q.color_count()` each.
pub fn count_homs(p: &Palette, q: &Palette, limit: u64) -> u64 {
    if limit == 0 {
        return 0;
    }
    let constrained: usize = {
        let mut occurs = vec![false; p.color_count()];
        for t in p.triples() {
            for c in t.components() {
                occurs[c.0] = true;
            }
        }
        occurs.iter().filter(|&&b| b).count()
    };
    let unconstrained = p.color_count() - constrained;
    let mut factor = 1u64;
    for _ in 0..unconstrained {
        factor = factor.saturating_mul(q.color_count() as u64);
        if factor >= limit {
            factor = limit;
            break;
        }
    }
    match HomSearch::new(p, q).run(SearchGoal::Count {
        limit,
        unconstrained_factor: factor,
    }) {
        SearchOutcome::Counted(n) => n.min(limit),
        SearchOutcome::Found(_) => unreachable!("count mode never returns a witness"),
    }
}

//! Palettes — finite color sets equipped with a set of ordered feasible
//! triples — and the operations used to combine and classify them: inverse,
//! product, symmetrization, density, role classification and isomorphism
//! search.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use num_rational::Ratio;
use thiserror::Error;

use crate::hom::Homomorphism;

/// Exact rational used for palette densities and grid objectives.
pub type Rational = Ratio<u128>;

/// Index of a color within its owning palette, dense in `[0, color_count)`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ColorId(pub usize);

impl fmt::Display for ColorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An ordered feasible triple `(left, middle, right)`.
///
/// The component names follow the role the colors play on an ordered
/// triangle `u ⪯ v ⪯ w`: left is the color of `uv`, middle of `uw`,
/// right of `vw`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Triple {
    pub left: ColorId,
    pub middle: ColorId,
    pub right: ColorId,
}

impl Triple {
    pub const fn new(left: ColorId, middle: ColorId, right: ColorId) -> Self {
        Triple {
            left,
            middle,
            right,
        }
    }

    /// The triple read in the opposite vertex order.
    pub const fn reversed(self) -> Self {
        Triple {
            left: self.right,
            middle: self.middle,
            right: self.left,
        }
    }

    pub const fn components(self) -> [ColorId; 3] {
        [self.left, self.middle, self.right]
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.left, self.middle, self.right)
    }
}

/// A single violation of the palette invariants, reported by validation.
#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum Violation {
    #[error("empty palette: at least one color is required")]
    EmptyPalette,
    #[error("color name at index {index} is empty")]
    EmptyName { index: usize },
    #[error("color name `{name}` contains whitespace")]
    WhitespaceName { name: String },
    #[error("duplicate color name `{name}`")]
    DuplicateName { name: String },
    #[error("triple #{index} uses color {color} but the palette has {color_count} colors")]
    ColorOutOfRange {
        index: usize,
        color: usize,
        color_count: usize,
    },
    #[error("duplicate triple ({left}, {middle}, {right})")]
    DuplicateTriple {
        left: usize,
        middle: usize,
        right: usize,
    },
    #[error("unknown color name `{name}`")]
    UnknownName { name: String },
}

/// Construction failure carrying every detected [`Violation`].
#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub struct InvalidPalette {
    pub violations: Vec<Violation>,
}

impl fmt::Display for InvalidPalette {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid palette: ")?;
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Checks raw palette parts against the palette invariants and returns every
/// violation found (empty means the parts form a valid palette).
pub fn validate_parts(names: &[String], triples: &[(usize, usize, usize)]) -> Vec<Violation> {
    let mut violations = Vec::new();
    if names.is_empty() {
        violations.push(Violation::EmptyPalette);
    }
    let mut seen_names = HashSet::new();
    for (index, name) in names.iter().enumerate() {
        if name.is_empty() {
            violations.push(Violation::EmptyName { index });
        } else if name.chars().any(char::is_whitespace) {
            violations.push(Violation::WhitespaceName { name: name.clone() });
        }
        if !seen_names.insert(name.as_str()) {
            violations.push(Violation::DuplicateName { name: name.clone() });
        }
    }
    let color_count = names.len();
    let mut seen_triples = HashSet::new();
    for (index, &(l, m, r)) in triples.iter().enumerate() {
        let mut in_range = true;
        for color in [l, m, r] {
            if color >= color_count {
                violations.push(Violation::ColorOutOfRange {
                    index,
                    color,
                    color_count,
                });
                in_range = false;
            }
        }
        if in_range && !seen_triples.insert((l, m, r)) {
            violations.push(Violation::DuplicateTriple {
                left: l,
                middle: m,
                right: r,
            });
        }
    }
    violations
}

/// A palette: a color set `C` (named, indexed densely) together with a set
/// of feasible ordered triples `T ⊆ C³`.
///
/// Triples are stored sorted and duplicate-free, so structural equality of
/// two `Palette` values is equality of color names and triple sets.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Palette {
    names: Vec<String>,
    triples: Vec<Triple>,
}

impl Palette {
    /// Builds a palette, rejecting any invariant violation.
    pub fn new(
        names: Vec<String>,
        triples: Vec<(usize, usize, usize)>,
    ) -> Result<Self, InvalidPalette> {
        let violations = validate_parts(&names, &triples);
        if !violations.is_empty() {
            return Err(InvalidPalette { violations });
        }
        let mut triples: Vec<Triple> = triples
            .into_iter()
            .map(|(l, m, r)| Triple::new(ColorId(l), ColorId(m), ColorId(r)))
            .collect();
        triples.sort_unstable();
        triples.dedup();
        Ok(Palette { names, triples })
    }

    /// Convenience constructor resolving triples given by color name.
    pub fn from_named_triples(
        names: &[&str],
        triples: &[(&str, &str, &str)],
    ) -> Result<Self, InvalidPalette> {
        let owned: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        let resolve = |name: &str| -> Result<usize, InvalidPalette> {
            owned
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| InvalidPalette {
                    violations: vec![Violation::UnknownName {
                        name: name.to_string(),
                    }],
                })
        };
        let mut raw = Vec::with_capacity(triples.len());
        for &(l, m, r) in triples {
            raw.push((resolve(l)?, resolve(m)?, resolve(r)?));
        }
        Palette::new(owned, raw)
    }

    pub fn color_count(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, color: ColorId) -> &str {
        &self.names[color.0]
    }

    pub fn color_by_name(&self, name: &str) -> Option<ColorId> {
        self.names.iter().position(|n| n == name).map(ColorId)
    }

    pub fn colors(&self) -> impl Iterator<Item = ColorId> {
        (0..self.color_count()).map(ColorId)
    }

    /// The feasible triples, sorted by `(left, middle, right)`.
    pub fn triples(&self) -> &[Triple] {
        &self.triples
    }

    pub fn triple_count(&self) -> usize {
        self.triples.len()
    }

    pub fn contains(&self, triple: Triple) -> bool {
        self.triples.binary_search(&triple).is_ok()
    }

    /// Re-checks the palette invariants; always empty for values built
    /// through [`Palette::new`].
    pub fn validate(&self) -> Vec<Violation> {
        let raw: Vec<(usize, usize, usize)> = self
            .triples
            .iter()
            .map(|t| (t.left.0, t.middle.0, t.right.0))
            .collect();
        validate_parts(&self.names, &raw)
    }

    /// `|T| / |C|³` as an exact rational.
    pub fn density(&self) -> Rational {
        let c = self.color_count() as u128;
        Rational::new(self.triple_count() as u128, c * c * c)
    }

    /// The palette with every triple reversed: `(x, y, z)` is feasible in
    /// the inverse exactly when `(z, y, x)` is feasible here.
    pub fn inverse(&self) -> Palette {
        let mut triples: Vec<Triple> = self.triples.iter().map(|t| t.reversed()).collect();
        triples.sort_unstable();
        Palette {
            names: self.names.clone(),
            triples,
        }
    }

    /// Doubles the color set with a clone `c~` for each color `c` (placed at
    /// index `color_count + c`) and closes the triple set under the six
    /// reorderings of an ordered triangle:
    /// `(x,y,z) ↦ {(x,y,z), (x~,z,y), (y,x,z~), (y~,z~,x), (z,x~,y~), (z~,y~,x~)}`.
    pub fn symmetrize(&self) -> Palette {
        let n = self.color_count();
        let mut names = self.names.clone();
        names.extend(self.names.iter().map(|name| format!("{name}~")));
        let clone_of = |c: ColorId| ColorId(c.0 + n);
        let mut set = BTreeSet::new();
        for t in &self.triples {
            let (x, y, z) = (t.left, t.middle, t.right);
            set.insert(Triple::new(x, y, z));
            set.insert(Triple::new(clone_of(x), z, y));
            set.insert(Triple::new(y, x, clone_of(z)));
            set.insert(Triple::new(clone_of(y), clone_of(z), x));
            set.insert(Triple::new(z, clone_of(x), clone_of(y)));
            set.insert(Triple::new(clone_of(z), clone_of(y), clone_of(x)));
        }
        Palette {
            names,
            triples: set.into_iter().collect(),
        }
    }

    /// Role occurrence sets and the left/right/both/middle classification.
    pub fn classify_roles(&self) -> ColorRoles {
        let mut left_colors = BTreeSet::new();
        let mut middle_colors = BTreeSet::new();
        let mut right_colors = BTreeSet::new();
        for t in &self.triples {
            left_colors.insert(t.left);
            middle_colors.insert(t.middle);
            right_colors.insert(t.right);
        }
        let left_only = left_colors.difference(&right_colors).copied().collect();
        let right_only = right_colors.difference(&left_colors).copied().collect();
        let both_ends = left_colors.intersection(&right_colors).copied().collect();
        ColorRoles {
            left_colors,
            middle_colors,
            right_colors,
            left_only,
            right_only,
            both_ends,
        }
    }
}

/// Occurrence sets of colors by triple position, plus the partition used by
/// the density-bound argument: `left_only = L`, `right_only = R`,
/// `both_ends = B`, and `middle_colors` doubles as `M`.
///
/// `L`, `R`, `B` are pairwise disjoint for every palette; disjointness from
/// `M` holds only under extra hypotheses and is checked by consumers.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ColorRoles {
    pub left_colors: BTreeSet<ColorId>,
    pub middle_colors: BTreeSet<ColorId>,
    pub right_colors: BTreeSet<ColorId>,
    pub left_only: BTreeSet<ColorId>,
    pub right_only: BTreeSet<ColorId>,
    pub both_ends: BTreeSet<ColorId>,
}

/// Error for [`product`] applied to an empty factor list.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Error)]
#[error("product of an empty palette list")]
pub struct EmptyProduct;

/// Computes the product color index for given component colors, using the
/// mixed-radix (first factor most significant) layout of [`product`].
pub(crate) fn product_color_index(factor_sizes: &[usize], components: &[ColorId]) -> ColorId {
    debug_assert_eq!(factor_sizes.len(), components.len());
    let mut index = 0usize;
    for (size, comp) in factor_sizes.iter().zip(components) {
        debug_assert!(comp.0 < *size);
        index = index * size + comp.0;
    }
    ColorId(index)
}

/// The product palette: colors are tuples of component colors (names joined
/// with `*`, ordered lexicographically in component indices) and a triple is
/// feasible exactly when every component triple is.
pub fn product(factors: &[Palette]) -> Result<Palette, EmptyProduct> {
    if factors.is_empty() {
        return Err(EmptyProduct);
    }
    let sizes: Vec<usize> = factors.iter().map(Palette::color_count).collect();

    let mut names = vec![String::new()];
    for factor in factors {
        let mut next = Vec::with_capacity(names.len() * factor.color_count());
        for prefix in &names {
            for component in factor.names() {
                if prefix.is_empty() {
                    next.push(component.clone());
                } else {
                    next.push(format!("{prefix}*{component}"));
                }
            }
        }
        names = next;
    }

    let mut combos: Vec<Vec<Triple>> = vec![Vec::new()];
    for factor in factors {
        let mut next = Vec::with_capacity(combos.len() * factor.triple_count());
        for prefix in &combos {
            for t in factor.triples() {
                let mut extended = prefix.clone();
                extended.push(*t);
                next.push(extended);
            }
        }
        combos = next;
    }
    let mut triples: Vec<Triple> = combos
        .into_iter()
        .map(|parts| {
            let lefts: Vec<ColorId> = parts.iter().map(|t| t.left).collect();
            let middles: Vec<ColorId> = parts.iter().map(|t| t.middle).collect();
            let rights: Vec<ColorId> = parts.iter().map(|t| t.right).collect();
            Triple::new(
                product_color_index(&sizes, &lefts),
                product_color_index(&sizes, &middles),
                product_color_index(&sizes, &rights),
            )
        })
        .collect();
    triples.sort_unstable();
    triples.dedup();
    Ok(Palette { names, triples })
}

/// Searches for a bijective color map carrying the triples of `p` exactly
/// onto the triples of `q`.
///
/// Candidates are pruned by matching per-color occurrence signatures and by
/// checking every fully mapped triple; the first bijection in ascending
/// target-color order is returned.
pub fn find_isomorphism(p: &Palette, q: &Palette) -> Option<Homomorphism> {
    if p.color_count() != q.color_count() || p.triple_count() != q.triple_count() {
        return None;
    }
    let n = p.color_count();
    let signature = |palette: &Palette| -> Vec<[usize; 3]> {
        let mut sig = vec![[0usize; 3]; palette.color_count()];
        for t in palette.triples() {
            sig[t.left.0][0] += 1;
            sig[t.middle.0][1] += 1;
            sig[t.right.0][2] += 1;
        }
        sig
    };
    let sig_p = signature(p);
    let sig_q = signature(q);

    let mut map: Vec<Option<ColorId>> = vec![None; n];
    let mut used = vec![false; n];

    fn assign(
        p: &Palette,
        q: &Palette,
        sig_p: &[[usize; 3]],
        sig_q: &[[usize; 3]],
        map: &mut Vec<Option<ColorId>>,
        used: &mut Vec<bool>,
        next: usize,
    ) -> bool {
        if next == map.len() {
            return p.triples().iter().all(|t| {
                q.contains(Triple::new(
                    map[t.left.0].unwrap(),
                    map[t.middle.0].unwrap(),
                    map[t.right.0].unwrap(),
                ))
            });
        }
        'candidates: for target in 0..map.len() {
            if used[target] || sig_p[next] != sig_q[target] {
                continue;
            }
            map[next] = Some(ColorId(target));
            used[target] = true;
            for t in p.triples() {
                let image = [map[t.left.0], map[t.middle.0], map[t.right.0]];
                if let [Some(l), Some(m), Some(r)] = image {
                    if !q.contains(Triple::new(l, m, r)) {
                        map[next] = None;
                        used[target] = false;
                        continue 'candidates;
                    }
                }
            }
            if assign(p, q, sig_p, sig_q, map, used, next + 1) {
                return true;
            }
            map[next] = None;
            used[target] = false;
        }
        false
    }

    if !assign(p, q, &sig_p, &sig_q, &mut map, &mut used, 0) {
        return None;
    }
    let map: Vec<ColorId> = map.into_iter().map(Option::unwrap).collect();
    // A bijection whose triple images stay in T(q) is onto T(q) since the
    // triple counts agree.
    Some(
        Homomorphism::new(p.clone(), q.clone(), map)
            .expect("isomorphism search produced a non-homomorphism"),
    )
}

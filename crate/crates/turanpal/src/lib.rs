//! Palette calculus for uniform Turán densities of 3-uniform hypergraphs.
//!
//! A palette is a finite color set `C` with a set `T ⊆ C³` of feasible
//! ordered triples. This crate mechanizes the operations and decision
//! procedures built on palettes:
//!
//! - [`palette`]: the palette type, density, inverse, product,
//!   symmetrization, role classification and isomorphism search;
//! - [`hom`]: palette homomorphisms and the backtracking decision
//!   procedure with forward checking;
//! - [`simplex`]: the palette Lagrangian — maximization of the cubic pair
//!   objective over probability distributions — plus an exact grid oracle;
//! - [`colorability`]: colorability of small hypergraphs by exhaustive
//!   search, certificate checking, and the random palette-based hypergraph
//!   construction;
//! - [`turan`]: the necessary-and-sufficient separation conditions between
//!   palette families, the 4/81 density bound, small-witness search and
//!   the scripted 4/81 verification;
//! - [`io`]: line-oriented palette and hypergraph file formats;
//! - [`builtins`]: the named palettes the 4/81 pipeline is built from.
//!
//! ```
//! use turanpal::{builtins, palette, simplex, turan};
//!
//! // The four-color palette whose Lagrangian pins the value 4/81.
//! let p = builtins::p_4_81();
//! assert_eq!(p.density(), turanpal::Rational::new(3, 64));
//!
//! let best = simplex::lagrangian(&p, 50, 1e-10, 0);
//! assert!((best.value - 4.0 / 81.0).abs() < 1e-6);
//!
//! // No hypergraph separates a palette from itself...
//! let blocked = turan::single_condition(&p, &p);
//! assert!(!blocked.separable());
//!
//! // ...but {P_LM, P_3T} separates from P_4_81: every symmetrized
//! // product avoids the target and its inverse.
//! let verdict = turan::multi_condition(&[builtins::p_lm(), builtins::p_3t()], &p);
//! assert!(verdict.separable());
//!
//! // K4 minus an edge is colorable by the two-color palette but not by
//! // the product with its inverse.
//! let two = builtins::two_color();
//! let prod = palette::product(&[two.clone(), two.inverse()]).unwrap();
//! let k4m = turanpal::colorability::Hypergraph::k4_minus();
//! let limits = turanpal::colorability::SearchLimits::default();
//! assert!(turanpal::colorability::colorable(&k4m, &two, &limits).unwrap().is_some());
//! assert!(turanpal::colorability::colorable(&k4m, &prod, &limits).unwrap().is_none());
//! ```

pub mod builtins;
pub mod colorability;
pub mod hom;
pub mod io;
pub mod numfmt;
pub mod palette;
pub mod simplex;
pub mod turan;

pub use palette::{ColorId, Palette, Rational, Triple};

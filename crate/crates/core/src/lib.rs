//! Defeasible logic DL: a sceptical reasoner with two independent semantic oracles.
//!
//! A theory is a set of facts, strict rules (`->`), defeasible rules (`=>`),
//! defeaters (`~>`) and an acyclic superiority relation over rule labels. The
//! [`engine`] derives the four kinds of tagged conclusion (`+D`, `-D`, `+d`,
//! `-d`) by linear-time propagation. [`metaprogram`] computes the same
//! conclusions from the Kunen semantics of a logic metaprogram, and
//! [`modelcheck`] from the intersection of all defeasible models.
//!
//! ```
//! use dlog_core::{engine, ground, parser};
//!
//! let src = "bird(tweety). r: bird(X) => flies(X).";
//! let g = ground::ground(&parser::parse_theory(src).unwrap()).unwrap();
//! let c = parser::parse_conclusion("+d flies(tweety)").unwrap();
//! assert_eq!(engine::prove(&g, &c).unwrap(), engine::Proof::Proved);
//! ```

pub mod conclusion;
pub mod derivation;
pub mod engine;
pub mod ground;
pub mod index;
pub mod metaprogram;
pub mod modelcheck;
pub mod parser;
pub mod syntax;
pub mod truth;

pub use conclusion::{ConclusionSet, Tag, TaggedConclusion};
pub use ground::{GroundTheory, HerbrandBase};
pub use syntax::{Atom, Literal, Rule, RuleKind, SourceTheory, Term};
pub use truth::ThreeVal;

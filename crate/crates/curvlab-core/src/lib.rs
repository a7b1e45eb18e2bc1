//! Exact Lin-Lu-Yau (LLY) Ricci curvature on finite graphs, together with an
//! outerplanar-graph enumerator and a verification harness.
//!
//! Everything curvature-facing is computed in exact rational arithmetic: the
//! transportation solver works on integer masses, curvature values are
//! `Rational`s, and no floating point enters any curvature path. The crate
//! exposes three independent routes to the same curvature number (an exact
//! coupling formula on edges, a Lipschitz-potential search, and the lazy
//! random-walk limit), which the test suite and the `verify` tooling hold to
//! exact agreement.
//!
//! Modules:
//! - [`graph`]: immutable simple graphs, graph6 I/O, BFS metric.
//! - [`canon`]: isomorphism-invariant canonical codes.
//! - [`transport`]: exact integer min-cost transportation and Wasserstein-1.
//! - [`curvature`]: LLY curvature by three methods plus certificate bounds.
//! - [`outerplanar`]: recognition, embeddings, faces, suppression.
//! - [`enumerate`]: dissection/block generators and the classification pipeline.
//! - [`lemma_lab`]: corpus-wide structural property checks.
//! - [`dot`]: Graphviz export with curvature edge labels.

pub mod canon;
pub mod curvature;
pub mod dot;
pub mod enumerate;
pub mod error;
pub mod graph;
pub mod lemma_lab;
pub mod outerplanar;
pub mod rational;
pub mod transport;

pub use canon::{canonical_code, canonical_form, CanonicalCode};
pub use curvature::{
    coupling_lower_bound, curvature_report, is_positively_curved, kappa, kappa_adjacent,
    kappa_adjacent_with_witness, kappa_alpha, kappa_limit_check, kappa_lipschitz, lazy_measure,
    mass_pair, star_coupling_bound, star_coupling_from_sigma, CurvatureReport, LazyMeasure,
    LipschitzPotential, MassPair, PairKappa, PositivityReport, StarCoupling,
};
pub use dot::{dot_filename, to_dot};
pub use enumerate::{
    classify_maximal_outerplanar, classify_positively_curved, enumerate_2connected_outerplanar,
    enumerate_maximal_outerplanar, enumerate_outerplanar_min_deg2, find_g8, verify_base_case_11,
    ClassificationReport, ClassifiedGraph, ClassifyScope, Dissection, EdgeKappa,
};
pub use error::Error;
pub use graph::{bfs_distances, encode_graph6, parse_adjacency_list, parse_graph6, parse_graph6_file,
    DistanceMatrix, Graph};
pub use lemma_lab::{
    default_corpus, run_all, run_lemma, LemmaCheckResult, Violation, LEMMA_IDS,
};
pub use outerplanar::{
    classify_edge, combinatorial_curvature, embed_outerplanar, face_profile, is_maximal_outerplanar,
    is_outerplanar, suppress_degree2, suppression_sites, EdgeClass, FaceProfile, ForbiddenMinor,
    MinorKind, OuterEmbedding, OuterplanarVerdict, Suppression,
};
pub use rational::{parse_rational, rational, Rational};

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;

//! Max-cut bounds for the (-1)-curve graphs of minuscule Picard lattices.
//!
//! The `(-1)`-classes of the lattice with form `(a, b, c)` form a weighted
//! multigraph whose edge weights are `1 + U·V`. For the minuscule families
//! (types A and D, E6 and E7) the graph is strongly regular, its
//! semidefinite relaxation is solved in closed form with a matching dual
//! certificate, and Goemans-Williamson rounding of the canonical embedding
//! gives an explicit lower bound.
//!
//! Everything that can be exact is exact: weights, spectra and certificates
//! are rational, and `arccos/π` values are computed as certified enclosures.

#![no_std]
extern crate alloc;

pub mod certificate;
pub mod error;
pub mod graph;
pub mod lattice;
pub mod literal;
pub mod matrix;
pub mod models;
pub mod oracle;
pub mod precise;
pub mod rational;
pub mod rounding;
pub mod spectral;

use alloc::vec::Vec;

pub use certificate::{
    bounds_closed_form, build_embedding, dual_certificate, sd_closed_form, sd_primal, verify_strong_duality,
    BoundsReport, DualCertificate, DualityReport, Embedding,
};
pub use error::Error;
pub use graph::{Cut, IntWeights, Multigraph, WeightHistogram};
pub use lattice::{build_params, minus_one_divisors, Family, MinusculeParams, PicardClass, PicardLattice};
pub use models::{check_model_agreement, AgreementReport, SubsetModel};
pub use oracle::{brute_force_maxcut, local_search_maxcut, OracleMethod, OracleResult};
pub use precise::{gw_alpha_constant, performance_ratio, Enclosure, GwAlpha};
pub use rational::Rational;
pub use rounding::{factorize_embedding, simulate, CutStats, EmbeddingFactor};
pub use spectral::{closed_form_spectrum, spectrum_from_srmg, verify_spectrum_exact, verify_srmg, Spectrum, SrmgCertificate};

/// The `(-1)`-classes of the lattice and the multigraph they span.
pub fn lattice_graph(p: &MinusculeParams) -> Result<(Vec<PicardClass>, Multigraph), Error> {
    let divs = minus_one_divisors(p)?;
    let g = lattice::graph_from_divisors(&divs, p)?;
    Ok((divs, g))
}

//! Entropic analysis of measurement dependence in Bell experiments embedded
//! in causal networks.
//!
//! The crate is organised around a handful of small, composable layers:
//!
//! - [`probtab`]: dense joint distributions over named finite variables and
//!   the usual information measures (entropy, mutual information, the L1
//!   measurement-dependence measure).
//! - [`causal_graphs`]: DAGs with latent/observed flags, local Markov
//!   constraint extraction, the canonical scenario builders (Bell, triangle,
//!   "2's & n", cyclic, n-locality chains) and variable merge/split maps.
//! - [`cone_engine`]: exact rational polyhedral machinery — Shannon cones,
//!   causal constraint injection, Fourier-Motzkin elimination and an exact
//!   simplex used to certify the entropic upper bounds on measurement
//!   dependence.
//! - [`bell_functionals`]: behaviours p(outputs|inputs), no-signaling tests
//!   and the CHSH / CGLMP / Mermin / bilocality functionals.
//! - [`md_bounds`]: the lower-bound formulas in bits and L1 form, the data
//!   computable upper bound Θ(X,Y,R), and the combined nonlinear inequality
//!   verdicts.
//! - [`quantum_sim`]: dense complex linear algebra for the Fritz distribution,
//!   GHZ/Mermin and bilocality behaviours, plus critical-visibility searches.
//! - [`oracles`]: independent brute-force ground truth (deterministic strategy
//!   enumeration, optimal measurement-dependent models, the no-signaling
//!   lift, seeded causal-model samplers, frontier search).

pub mod bell_functionals;
pub mod causal_graphs;
pub mod cone_engine;
pub mod error;
pub mod md_bounds;
pub mod oracles;
pub mod probtab;
pub mod quantum_sim;

pub use bell_functionals::Behavior;
pub use causal_graphs::{CiStatement, Dag};
pub use cone_engine::{Cone, EntropyCoordinateSpace, LinForm};
pub use error::{Error, Result};
pub use md_bounds::{MdReport, Verdict};
pub use probtab::{Distribution, EntropyVector, VariableSpec};
pub use quantum_sim::{DensityMatrix, Povm};

//! Exact GF(2) persistence engine for simplicial cover filtrations.
//!
//! The crate builds the objects that relate a covered simplicial filtration
//! to the nerve of its cover: intersection filtrations, the nerve and its
//! barycentric subdivision (the flag complex), and the cellular blow-up
//! complex. On top of those it computes persistence diagrams, exact
//! cover goodness, an explicitly constructed chain-level interleaving with
//! machine-checked identities, and bottleneck-distance bound reports.
//!
//! Everything is exact: scales are compared bit-for-bit and all linear
//! algebra is over the two-element field.
//!
//! ```
//! use nervecheck_core::generators;
//! use nervecheck_core::interleave::{Interleaver, InterleavingConfig};
//! use nervecheck_core::metrics::shifted_bound_check;
//! use nervecheck_core::persistence::goodness;
//!
//! let cover = generators::gen_e1();
//! let eps = goodness(&cover, 1).epsilon_star;
//! let report = shifted_bound_check(&cover, 1).unwrap();
//! assert!(report.verdict && report.shifted_verdict);
//!
//! let mut il = Interleaver::new(cover, InterleavingConfig::new(1, eps));
//! assert!(il.verify_identities().unwrap().all_pass());
//! ```

pub mod cell;
pub mod complex;
pub mod cover;
pub mod filtration;
pub mod generators;
pub mod gf2;
pub mod interleave;
pub mod metrics;
pub mod persistence;
pub mod scale;

pub use cell::{BlowupCell, CellLabel, FlagSimplex, IndexSet, Simplex};
pub use complex::{ChainHomotopy, ChainMap, FilteredComplex, Violation};
pub use cover::CoverFiltration;
pub use filtration::Filtration;
pub use gf2::{col_reduce, rank, solve_in_image, Gf2Matrix, ReductionResult};
pub use interleave::{Interleaver, InterleavingConfig};
pub use metrics::{bottleneck, bound_check, shifted_bound_check, BoundReport};
pub use persistence::{
    goodness, induced_rank, persistence, Bar, GoodnessReport, PersistenceDiagram,
};
pub use scale::Scale;

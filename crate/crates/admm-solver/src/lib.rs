//! First-order solver for chordally decomposed semidefinite programs.
//!
//! The decomposition replaces one large PSD cone by coupled cones on
//! the maximal cliques of the chordally extended aggregate pattern, so
//! each ADMM iteration splits into three closed-form pieces: an
//! equality-constrained quadratic step whose Hessian is diagonal in the
//! scaled symmetric vectorization, independent per-clique eigenvalue
//! projections, and a multiplier update. The quadratic step reduces to
//! one cached sparse factorization of A D⁻¹ Aᵀ that is reused across
//! all iterations and penalty values.
//!
//! [`solve_domain`] iterates on the primal variable of `min ⟨C,X⟩`;
//! [`solve_range`] on the dual variable of `max bᵀy`. The [`reference`]
//! module carries a dense primal-dual method used as an accuracy oracle
//! in tests.

mod error;
mod kkt;
mod project;
mod solve;
mod svec;

pub mod reference;

pub use error::Error;
pub use project::psd_project;
pub use solve::{
    solve_domain, solve_domain_with_log, solve_range, solve_range_with_log, AdmmSettings,
    AdmmState, Solution, Status,
};

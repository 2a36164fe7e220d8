//! Approximation by algebraic numbers of bounded degree.

mod factor;
mod roots;
mod star;

pub use factor::{factor_small, is_irreducible, Factorization};
pub use roots::{isolate_real_roots, real_roots, refine_root, squarefree_part};
pub use star::{
    approximants, estimate_star_ordinary, estimate_star_uniform, psi_star_table, AlgebraicNumber, StarCandidate, StarRecord,
    StarRow, StarStudy, StarTable,
};

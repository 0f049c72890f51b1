//! Exact polynomial, rational-function and truncated-series arithmetic, and
//! the symmetric-function toolbox built on it.

mod monomial;
mod poly;
mod rational;
mod series;
mod symmetric;

pub use monomial::{Monomial, Registry, Var};
pub use poly::{q, q_frac, Poly, Q};
pub use rational::{RationalFunction, RF};
pub use series::{euler_product, series_from_rational, FormalSeries};
pub use symmetric::{
    complete_homogeneous, complete_of, complete_rf, determinant, elementary_of, elementary_rf,
    elementary_symmetric, jacobi_trudi, lagrange_reconstruct, partitions, partitions_up_to, schur,
    schur_rf, vandermonde, Partition,
};

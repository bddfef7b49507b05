//! The inequality catalog and its evaluators.

mod catalog;
mod functional;
mod ops;
mod report;

pub use catalog::{
    catalog_list, catalog_lookup, parse_bound_list, BoundId, CatalogEntry, Probe,
    DEFAULT_COR_EXPONENT,
};
pub use functional::{inverse_x_plus_sqrt, FunctionPair, ScalarFn};
pub use ops::{
    bound_kit, bound_lem1, bound_lem_pos_diff, bound_lem_sum, bound_t3, bound_t3_printed, chain_b0,
    chain_cor, chain_functional, chain_sq, chain_t1, chain_t2, evaluate, radius_enclosure,
    tightness_compare, MatrixContext, ProbeOutcome, TightnessRecord,
};
pub use report::{BoundReport, ChainReport, IdentityCheck};

use crate::error::Result;
use crate::linalg::ComplexMatrix;
use crate::radius::RadiusConfig;

pub fn eval_chain_b0(a: &ComplexMatrix, cfg: &RadiusConfig) -> Result<ChainReport> {
    chain_b0(&MatrixContext::new(a, cfg)?)
}

pub fn eval_bound_kit(a: &ComplexMatrix, cfg: &RadiusConfig) -> Result<BoundReport> {
    bound_kit(&MatrixContext::new(a, cfg)?)
}

pub fn eval_chain_sq(a: &ComplexMatrix, cfg: &RadiusConfig) -> Result<ChainReport> {
    chain_sq(&MatrixContext::new(a, cfg)?)
}

/// `plus` selects `A + A*`, otherwise `A - A*`.
pub fn eval_bound_lem1(a: &ComplexMatrix, plus: bool, cfg: &RadiusConfig) -> Result<BoundReport> {
    bound_lem1(&MatrixContext::new(a, cfg)?, plus)
}

pub fn eval_chain_t1(a: &ComplexMatrix, cfg: &RadiusConfig) -> Result<ChainReport> {
    chain_t1(&MatrixContext::new(a, cfg)?)
}

pub fn eval_lemma_norm_sum(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    cfg: &RadiusConfig,
) -> Result<BoundReport> {
    bound_lem_sum(&MatrixContext::new(a, cfg)?, b)
}

pub fn eval_chain_t2(a: &ComplexMatrix, cfg: &RadiusConfig) -> Result<ChainReport> {
    chain_t2(&MatrixContext::new(a, cfg)?)
}

pub fn eval_lemma_pos_diff(p: &ComplexMatrix, q: &ComplexMatrix) -> Result<BoundReport> {
    bound_lem_pos_diff(p, q)
}

pub fn eval_bound_t3(a: &ComplexMatrix, cfg: &RadiusConfig) -> Result<BoundReport> {
    bound_t3(&MatrixContext::new(a, cfg)?)
}

pub fn eval_bound_t3_printed(a: &ComplexMatrix, cfg: &RadiusConfig) -> Result<BoundReport> {
    bound_t3_printed(&MatrixContext::new(a, cfg)?)
}

pub fn eval_functional_chain(
    a: &ComplexMatrix,
    fp: &FunctionPair,
    cfg: &RadiusConfig,
) -> Result<ChainReport> {
    chain_functional(&MatrixContext::new(a, cfg)?, fp)
}

pub fn eval_chain_cor(a: &ComplexMatrix, r: f64, cfg: &RadiusConfig) -> Result<ChainReport> {
    chain_cor(&MatrixContext::new(a, cfg)?, r)
}

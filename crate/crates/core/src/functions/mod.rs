//! Weight functions, BMT weight functions and their Young conjugates.

mod bmt;
mod conjugate;
mod weight;

pub use bmt::{
    check_alpha, check_bmt_conditions, check_delta, check_gamma, compare_weight_functions, young_conjugate,
    BmtConditions, BmtKind, BmtWeightFunction, PHI_POINTS,
};
pub use conjugate::{chord_slopes, legendre_at, ConjugateTable};
pub use weight::{LnWeight, WeightFunction};

use crate::error::Result;
use crate::sequences::WeightSequence;
use std::sync::Arc;

/// `M^λ_ω = (exp(φ*(λ|α|)/λ))_α` up to order `q_max`.
pub fn sequence_from_bmt(dim: usize, omega: &Arc<BmtWeightFunction>, lambda: f64, q_max: usize) -> Result<WeightSequence> {
    let conj = young_conjugate(omega, lambda * q_max as f64)?;
    WeightSequence::from_bmt(dim, omega.clone(), lambda, &conj, q_max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multi_index::MultiIndex;

    #[test]
    fn exponential_phi_gives_factorial_like_sequence() {
        let w = Arc::new(BmtWeightFunction::power_minus_one(1.0).unwrap());
        let m = sequence_from_bmt(1, &w, 1.0, 64).unwrap();
        assert_eq!(m.evaluate(&MultiIndex::zero(1)).unwrap(), 1.0);
        assert!((m.evaluate(&MultiIndex::new(vec![1])).unwrap() - 1.0).abs() < 1e-9);
        // φ*(q) = q ln q - q + 1
        let q = 64.0f64;
        let l = m.ln_value(&MultiIndex::new(vec![64])).unwrap();
        assert!((l - (q * q.ln() - q + 1.0)).abs() < 1e-6 * l);
    }
}

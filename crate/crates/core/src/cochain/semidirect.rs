//! Splitting test for the semidirect sum: a degree-1 cochain `d` defines a
//! multiplicative section `X ↦ (d[X], X)` exactly when its coboundary
//! vanishes, and any factor set obtained as a coboundary is associative.

use super::{coboundary_capped, random_cochain, summarize_residual, Cochain, ResidualReport};
use crate::context::GridContext;
use crate::error::Result;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone)]
pub struct SemidirectReport {
    /// Multiplicativity defect of the section: max |d[XY] − d[X] − X.d[Y]|.
    pub splitting: ResidualReport,
    /// Associativity defect of the factor set `δg` for a seeded random `g`.
    pub factor_set: ResidualReport,
}

impl SemidirectReport {
    pub fn splits_within(&self, tol: f64) -> bool {
        self.splitting.is_cocycle_within(tol)
    }

    pub fn factor_set_associative_within(&self, tol: f64) -> bool {
        self.factor_set.is_cocycle_within(tol)
    }
}

pub fn semidirect_check(ctx: &GridContext, d: &Cochain, seed: u64) -> Result<SemidirectReport> {
    let dd = coboundary_capped(ctx, d, d.degree + 1)?;
    let splitting = summarize_residual(ctx, &dd);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = random_cochain(ctx, d.alpha, 1, &mut rng);
    let factor = coboundary_capped(ctx, &g, 2)?;
    let d_factor = coboundary_capped(ctx, &factor, 3)?;
    let factor_set = summarize_residual(ctx, &d_factor);
    Ok(SemidirectReport {
        splitting,
        factor_set,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cochain::entropy_cochain;
    use crate::numeric::{AlphaParam, Value};
    use crate::partition::Partition;
    use crate::prob::ProbabilityFunctor;
    use crate::structure::build_concrete_structure;

    #[test]
    fn entropy_sections_split_and_factor_sets_associate() {
        let ground = vec!["00".into(), "01".into(), "10".into(), "11".into()];
        let c = build_concrete_structure(
            ground,
            vec![
                ("Y".into(), Partition::from_assignment(&[0, 0, 1, 1])),
                ("Z".into(), Partition::from_assignment(&[0, 1, 0, 1])),
            ],
            true,
        )
        .unwrap();
        let s = &c.structure;
        let q = ProbabilityFunctor::full(s);
        let ctx = GridContext::new(s, &q, 3).unwrap();

        let d1 = entropy_cochain(&ctx, AlphaParam::One);
        let rep = semidirect_check(&ctx, &d1, 42).unwrap();
        assert!(rep.splitting.exact_zero);
        assert!(rep.factor_set.exact_zero);

        let alpha = AlphaParam::new(2.0).unwrap();
        let d2 = entropy_cochain(&ctx, alpha);
        let rep2 = semidirect_check(&ctx, &d2, 42).unwrap();
        assert!(rep2.splits_within(1e-12));
        assert!(rep2.factor_set_associative_within(1e-10));

        let mut bad = d1.clone();
        let key = bad.tables.keys().next().unwrap().clone();
        bad.tables.get_mut(&key).unwrap().values[1] =
            Value::from_rat(num::rational::BigRational::new(1.into(), 3.into()));
        let rep3 = semidirect_check(&ctx, &bad, 42).unwrap();
        assert!(!rep3.splits_within(1e-12));
        assert!(rep3.splitting.max_residual > 1e-3);
    }
}

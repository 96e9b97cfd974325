//! Formal bar chains over the monoid of variables coarser than a base, with
//! the boundary operator and the trivial-module augmentation.

use crate::error::{Error, Result};
use crate::structure::InfoStructure;
use num::rational::BigRational;
use std::collections::BTreeMap;

/// A finite linear combination of terms `lead·[x₁|…|xₙ]` over one base
/// variable. Leads and letters are variables coarser than the base; the
/// terminal plays the monoid identity.
#[derive(Debug, Clone, PartialEq)]
pub struct BarChain {
    pub base: usize,
    pub degree: usize,
    pub terms: BTreeMap<(usize, Vec<usize>), BigRational>,
}

impl BarChain {
    pub fn zero(base: usize, degree: usize) -> BarChain {
        BarChain {
            base,
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(
        &mut self,
        s: &InfoStructure,
        lead: usize,
        letters: Vec<usize>,
        coeff: BigRational,
    ) -> Result<()> {
        if letters.len() != self.degree {
            return Err(Error::Input(format!(
                "letter count {} does not match degree {}",
                letters.len(),
                self.degree
            )));
        }
        for &x in letters.iter().chain(std::iter::once(&lead)) {
            if !s.leq(self.base, x) {
                return Err(Error::Input(format!(
                    "`{}` is not coarser than the base `{}`",
                    s.id(x),
                    s.id(self.base)
                )));
            }
        }
        let zero = BigRational::from_integer(0.into());
        let entry = self.terms.entry((lead, letters)).or_insert_with(|| zero.clone());
        *entry += coeff;
        if *entry == zero {
            self.terms.retain(|_, c| c != &zero);
        }
        Ok(())
    }
}

/// A single generator `lead·[letters]` with coefficient 1.
pub fn bar_generator(
    s: &InfoStructure,
    base: usize,
    lead: usize,
    letters: Vec<usize>,
) -> Result<BarChain> {
    let mut chain = BarChain::zero(base, letters.len());
    chain.add_term(s, lead, letters, BigRational::from_integer(1.into()))?;
    Ok(chain)
}

fn monoid_mul(s: &InfoStructure, base: usize, x: usize, y: usize) -> Result<usize> {
    match s.meet(x, y)? {
        Some(m) => {
            debug_assert!(s.leq(base, m));
            Ok(m)
        }
        None => Err(Error::MissingMeet {
            x: s.id(x).to_string(),
            y: s.id(y).to_string(),
        }),
    }
}

/// The bar boundary `∂(lead·[x₁|…|xₙ]) = (lead·x₁)[x₂|…] + Σ (−1)^k
/// lead·[…|x_k x_{k+1}|…] + (−1)^n lead·[x₁|…|x_{n−1}]`.
pub fn bar_boundary(s: &InfoStructure, chain: &BarChain) -> Result<BarChain> {
    if chain.degree == 0 {
        return Err(Error::Input(
            "boundary of a degree-0 bar chain is undefined; use the augmentation".into(),
        ));
    }
    let n = chain.degree;
    let mut out = BarChain::zero(chain.base, n - 1);
    for ((lead, letters), coeff) in &chain.terms {
        let front = monoid_mul(s, chain.base, *lead, letters[0])?;
        out.add_term(s, front, letters[1..].to_vec(), coeff.clone())?;
        for k in 1..n {
            let mut merged = Vec::with_capacity(n - 1);
            merged.extend_from_slice(&letters[..k - 1]);
            merged.push(monoid_mul(s, chain.base, letters[k - 1], letters[k])?);
            merged.extend_from_slice(&letters[k + 1..]);
            let sign = if k % 2 == 1 { -1 } else { 1 };
            out.add_term(
                s,
                *lead,
                merged,
                coeff * BigRational::from_integer(sign.into()),
            )?;
        }
        let sign = if n % 2 == 1 { -1 } else { 1 };
        out.add_term(
            s,
            *lead,
            letters[..n - 1].to_vec(),
            coeff * BigRational::from_integer(sign.into()),
        )?;
    }
    Ok(out)
}

/// Trivial-module augmentation of a degree-0 chain: the sum of coefficients.
pub fn bar_epsilon(chain: &BarChain) -> Result<BigRational> {
    if chain.degree != 0 {
        return Err(Error::Input(format!(
            "augmentation applies to degree 0, got degree {}",
            chain.degree
        )));
    }
    Ok(chain.terms.values().sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::Partition;
    use crate::structure::build_concrete_structure;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn two_binary() -> crate::structure::ConcreteStructure {
        let ground = vec!["00".into(), "01".into(), "10".into(), "11".into()];
        build_concrete_structure(
            ground,
            vec![
                ("Y".into(), Partition::from_assignment(&[0, 0, 1, 1])),
                ("Z".into(), Partition::from_assignment(&[0, 1, 0, 1])),
            ],
            true,
        )
        .unwrap()
    }

    #[test]
    fn boundary_of_a_pair_has_three_standard_terms() {
        let c = two_binary();
        let s = &c.structure;
        let t = s.terminal();
        let y = s.index_of("Y").unwrap();
        let z = s.index_of("Z").unwrap();
        let yz = s.index_of("Y·Z").unwrap();
        let base = yz;
        let chain = bar_generator(s, base, t, vec![y, z]).unwrap();
        let boundary = bar_boundary(s, &chain).unwrap();
        let one = BigRational::from_integer(1.into());
        let mut expect = BarChain::zero(base, 1);
        expect.add_term(s, y, vec![z], one.clone()).unwrap();
        expect.add_term(s, t, vec![yz], -one.clone()).unwrap();
        expect.add_term(s, t, vec![y], one).unwrap();
        assert_eq!(boundary, expect);
    }

    #[test]
    fn boundary_squares_to_zero_on_random_chains() {
        let c = two_binary();
        let s = &c.structure;
        let base = s.index_of("Y·Z").unwrap();
        let elems: Vec<usize> = (0..s.len()).filter(|&x| s.leq(base, x)).collect();
        assert_eq!(elems.len(), 4);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let mut chain = BarChain::zero(base, 3);
            for _ in 0..6 {
                let lead = elems[rng.gen_range(0..elems.len())];
                let letters: Vec<usize> =
                    (0..3).map(|_| elems[rng.gen_range(0..elems.len())]).collect();
                let coeff = BigRational::new(
                    rng.gen_range(-9i64..=9).into(),
                    rng.gen_range(1i64..=9).into(),
                );
                chain.add_term(s, lead, letters, coeff).unwrap();
            }
            let dd = bar_boundary(s, &bar_boundary(s, &chain).unwrap()).unwrap();
            assert!(dd.is_zero(), "nonzero ∂∂: {dd:?}");
        }
    }

    #[test]
    fn augmentation_kills_degree_one_boundaries() {
        let c = two_binary();
        let s = &c.structure;
        let base = s.index_of("Y·Z").unwrap();
        let y = s.index_of("Y").unwrap();
        let z = s.index_of("Z").unwrap();
        let chain = bar_generator(s, base, z, vec![y]).unwrap();
        let boundary = bar_boundary(s, &chain).unwrap();
        assert_eq!(bar_epsilon(&boundary).unwrap(), BigRational::from_integer(0.into()));
    }
}

//! Interned grid laws per variable with precomputed marginalization and
//! conditioning index maps, so cochain evaluation is pure table lookup.

use crate::error::{Error, Result};
use crate::numeric::{AlphaParam, Weight};
use crate::prob::{enumerate_grid_laws, ProbabilityFunctor, RationalLaw};
use crate::structure::InfoStructure;
use num::rational::BigRational;
use std::collections::BTreeMap;

/// Grid laws for every variable of a structure at one denominator bound,
/// with index maps for every arrow.
pub struct GridContext<'a> {
    pub s: &'a InfoStructure,
    pub q: &'a ProbabilityFunctor,
    pub bound: u32,
    /// `laws[i]` are the admissible grid laws on object `i`, sorted.
    pub laws: Vec<Vec<RationalLaw>>,
    index: Vec<BTreeMap<Vec<BigRational>, usize>>,
    /// `marg[&(i, j)][p]` is the index in `laws[j]` of the marginal of `laws[i][p]`.
    marg: BTreeMap<(usize, usize), Vec<usize>>,
    /// `cond[&(i, j)][p][y]` is the mass of `j = y` and, when positive, the
    /// index in `laws[i]` of the conditioned law.
    cond: BTreeMap<(usize, usize), Vec<Vec<(BigRational, Option<usize>)>>>,
}

impl<'a> GridContext<'a> {
    pub fn new(
        s: &'a InfoStructure,
        q: &'a ProbabilityFunctor,
        bound: u32,
    ) -> Result<GridContext<'a>> {
        let laws: Vec<Vec<RationalLaw>> = (0..s.len())
            .map(|i| enumerate_grid_laws(s, q, i, bound))
            .collect();
        let index: Vec<BTreeMap<Vec<BigRational>, usize>> = laws
            .iter()
            .map(|ls| {
                ls.iter()
                    .enumerate()
                    .map(|(k, l)| (l.weights.clone(), k))
                    .collect()
            })
            .collect();

        let mut marg = BTreeMap::new();
        let mut cond = BTreeMap::new();
        for i in 0..s.len() {
            for &j in s.above(i) {
                let mut marg_row = Vec::with_capacity(laws[i].len());
                let mut cond_row = Vec::with_capacity(laws[i].len());
                for p in &laws[i] {
                    let m = p.marginalize(s, j)?;
                    let mk = index[j].get(&m.weights).copied().ok_or_else(|| {
                        Error::NotAdapted(format!(
                            "marginal of ({}) from `{}` to `{}` is off the admissible grid",
                            p.key(),
                            s.id(i),
                            s.id(j)
                        ))
                    })?;
                    marg_row.push(mk);
                    let mut per_value = Vec::with_capacity(s.var(j).arity());
                    for y in 0..s.var(j).arity() {
                        match p.condition(s, j, y)? {
                            Some(c) => {
                                let mass = p.mass_of(s, j, y)?;
                                let ck = index[i].get(&c.weights).copied().ok_or_else(|| {
                                    Error::NotAdapted(format!(
                                        "conditioning ({}) on `{}`={} leaves the grid",
                                        p.key(),
                                        s.id(j),
                                        s.var(j).values[y]
                                    ))
                                })?;
                                per_value.push((mass, Some(ck)));
                            }
                            None => per_value.push((BigRational::from_integer(0.into()), None)),
                        }
                    }
                    cond_row.push(per_value);
                }
                marg.insert((i, j), marg_row);
                cond.insert((i, j), cond_row);
            }
        }
        Ok(GridContext {
            s,
            q,
            bound,
            laws,
            index,
            marg,
            cond,
        })
    }

    pub fn law(&self, var: usize, k: usize) -> &RationalLaw {
        &self.laws[var][k]
    }

    pub fn law_count(&self, var: usize) -> usize {
        self.laws[var].len()
    }

    pub fn find(&self, law: &RationalLaw) -> Option<usize> {
        self.index[law.var].get(&law.weights).copied()
    }

    /// Index of the marginal on `target` of law `k` of `var`; identity when
    /// `target == var`.
    pub fn marginal_index(&self, var: usize, k: usize, target: usize) -> usize {
        if target == var {
            return k;
        }
        self.marg[&(var, target)][k]
    }

    /// Mass of `coarser = y` under law `k` of `var`, with the conditioned
    /// law's index when the mass is positive.
    pub fn conditional(
        &self,
        var: usize,
        k: usize,
        coarser: usize,
        y: usize,
    ) -> (BigRational, Option<usize>) {
        if coarser == var {
            let mass = self.laws[var][k].weights[y].clone();
            if mass == BigRational::from_integer(0.into()) {
                return (mass, None);
            }
            let kd = self
                .find(&RationalLaw::dirac(self.s, var, y))
                .expect("Dirac laws are on every grid");
            return (mass, Some(kd));
        }
        let (mass, idx) = &self.cond[&(var, coarser)][k][y];
        (mass.clone(), *idx)
    }

    /// The α-power weights of the values of `coarser` under law `k` of `var`,
    /// paired with the conditioned-then-marginalized law index on `target`.
    /// Zero-mass values are skipped.
    pub fn action_terms(
        &self,
        alpha: AlphaParam,
        var: usize,
        k: usize,
        coarser: usize,
        target: usize,
    ) -> Vec<(Weight, usize)> {
        let arity = self.s.var(coarser).arity();
        let mut out = Vec::with_capacity(arity);
        if coarser == var {
            // Every value of `var` conditions the law to the Dirac there.
            let p = &self.laws[var][k];
            for (v, w) in p.weights.iter().enumerate() {
                if w == &BigRational::from_integer(0.into()) {
                    continue;
                }
                let dirac = RationalLaw::dirac(self.s, var, v);
                let kd = self.find(&dirac).expect("Dirac laws are on every grid");
                let kt = self.marginal_index(var, kd, target);
                out.push((Weight::pow(alpha, w), kt));
            }
            return out;
        }
        for y in 0..arity {
            let (mass, idx) = &self.cond[&(var, coarser)][k][y];
            if let Some(ki) = idx {
                let kt = self.marginal_index(var, *ki, target);
                out.push((Weight::pow(alpha, mass), kt));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::Partition;
    use crate::structure::build_concrete_structure;

    #[test]
    fn index_maps_agree_with_direct_computation() {
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
        let m = s.index_of("Y·Z").unwrap();
        let y = s.index_of("Y").unwrap();
        for (k, p) in ctx.laws[m].iter().enumerate() {
            let direct = p.marginalize(s, y).unwrap();
            let via = ctx.law(y, ctx.marginal_index(m, k, y));
            assert_eq!(via.weights, direct.weights);
            for v in 0..2 {
                let (mass, idx) = ctx.conditional(m, k, y, v);
                assert_eq!(mass, p.mass_of(s, y, v).unwrap());
                match (idx, p.condition(s, y, v).unwrap()) {
                    (Some(ki), Some(c)) => assert_eq!(ctx.law(m, ki).weights, c.weights),
                    (None, None) => {}
                    _ => panic!("conditioning presence mismatch"),
                }
            }
        }
    }

    #[test]
    fn diracs_are_present_on_every_grid() {
        let ground = vec!["a".into(), "b".into(), "c".into()];
        let c = build_concrete_structure(
            ground,
            vec![("X".into(), Partition::finest(3))],
            false,
        )
        .unwrap();
        let s = &c.structure;
        let q = ProbabilityFunctor::full(s);
        let ctx = GridContext::new(s, &q, 1).unwrap();
        let x = s.index_of("X").unwrap();
        assert_eq!(ctx.law_count(x), 3);
        for v in 0..3 {
            assert!(ctx.find(&RationalLaw::dirac(s, x, v)).is_some());
        }
    }
}

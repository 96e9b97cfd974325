//! Exact probability laws on the value set of a variable, support
//! subcomplexes, marginalization, conditioning, and denominator-bounded
//! grid enumeration.

use crate::error::{Error, Result};
use crate::numeric::rational_str;
use crate::structure::InfoStructure;
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Zero};
use std::collections::BTreeSet;

/// An exact probability law on the values of one variable.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct RationalLaw {
    /// Object index of the carrying variable.
    pub var: usize,
    /// One weight per value, summing to one.
    pub weights: Vec<BigRational>,
}

impl RationalLaw {
    pub fn new(s: &InfoStructure, var: usize, weights: Vec<BigRational>) -> Result<RationalLaw> {
        if weights.len() != s.var(var).arity() {
            return Err(Error::InvalidLaw(format!(
                "law on `{}` has {} weights for {} values",
                s.id(var),
                weights.len(),
                s.var(var).arity()
            )));
        }
        if weights.iter().any(|w| w < &BigRational::zero()) {
            return Err(Error::InvalidLaw(format!(
                "negative weight on `{}`",
                s.id(var)
            )));
        }
        let total: BigRational = weights.iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidLaw(format!(
                "weights on `{}` sum to {}, not 1",
                s.id(var),
                rational_str(&total)
            )));
        }
        Ok(RationalLaw { var, weights })
    }

    pub fn dirac(s: &InfoStructure, var: usize, value: usize) -> RationalLaw {
        let mut weights = vec![BigRational::zero(); s.var(var).arity()];
        weights[value] = BigRational::one();
        RationalLaw { var, weights }
    }

    pub fn support(&self) -> BTreeSet<usize> {
        self.weights
            .iter()
            .enumerate()
            .filter(|(_, w)| !w.is_zero())
            .map(|(v, _)| v)
            .collect()
    }

    pub fn is_dirac(&self) -> bool {
        self.weights.iter().filter(|w| !w.is_zero()).count() == 1
    }

    /// Smallest common denominator of the weights.
    pub fn common_denominator(&self) -> BigInt {
        self.weights
            .iter()
            .fold(BigInt::one(), |acc, w| acc.lcm(w.denom()))
    }

    /// Pushes the law along the arrow `var -> target` by summing fibers.
    pub fn marginalize(&self, s: &InfoStructure, target: usize) -> Result<RationalLaw> {
        let map = s
            .map(self.var, target)
            .ok_or_else(|| Error::InvalidArrow {
                from: s.id(self.var).to_string(),
                to: s.id(target).to_string(),
                reason: "no arrow for marginalization".into(),
            })?;
        let mut weights = vec![BigRational::zero(); s.var(target).arity()];
        for (v, w) in self.weights.iter().enumerate() {
            weights[map[v]] += w;
        }
        Ok(RationalLaw {
            var: target,
            weights,
        })
    }

    /// Mass assigned to the event `coarser = y`.
    pub fn mass_of(&self, s: &InfoStructure, coarser: usize, y: usize) -> Result<BigRational> {
        let map = s
            .map(self.var, coarser)
            .ok_or_else(|| Error::InvalidArrow {
                from: s.id(self.var).to_string(),
                to: s.id(coarser).to_string(),
                reason: "no arrow for conditioning".into(),
            })?;
        Ok(self
            .weights
            .iter()
            .enumerate()
            .filter(|(v, _)| map[*v] == y)
            .map(|(_, w)| w)
            .sum())
    }

    /// Bayes restriction to the event `coarser = y`; `None` on mass zero.
    pub fn condition(
        &self,
        s: &InfoStructure,
        coarser: usize,
        y: usize,
    ) -> Result<Option<RationalLaw>> {
        let map = s
            .map(self.var, coarser)
            .ok_or_else(|| Error::InvalidArrow {
                from: s.id(self.var).to_string(),
                to: s.id(coarser).to_string(),
                reason: "no arrow for conditioning".into(),
            })?;
        let mass = self.mass_of(s, coarser, y)?;
        if mass.is_zero() {
            return Ok(None);
        }
        let weights = self
            .weights
            .iter()
            .enumerate()
            .map(|(v, w)| if map[v] == y { w / &mass } else { BigRational::zero() })
            .collect();
        Ok(Some(RationalLaw {
            var: self.var,
            weights,
        }))
    }

    /// Stable textual key `a/b,c/d,…` in value order.
    pub fn key(&self) -> String {
        self.weights
            .iter()
            .map(rational_str)
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// The admissible supports of laws on one variable, generated by a family
/// of maximal supports (so admissibility is downward closed).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportComplex {
    pub var: usize,
    /// Pairwise incomparable nonempty value sets.
    pub maximal: Vec<BTreeSet<usize>>,
}

impl SupportComplex {
    pub fn full(s: &InfoStructure, var: usize) -> SupportComplex {
        SupportComplex {
            var,
            maximal: vec![(0..s.var(var).arity()).collect()],
        }
    }

    pub fn new(s: &InfoStructure, var: usize, supports: Vec<BTreeSet<usize>>) -> Result<SupportComplex> {
        if supports.is_empty() {
            return Err(Error::InvalidSupport(s.id(var).to_string()));
        }
        for sup in &supports {
            if sup.is_empty() || sup.iter().any(|&v| v >= s.var(var).arity()) {
                return Err(Error::InvalidSupport(s.id(var).to_string()));
            }
        }
        let maximal: Vec<BTreeSet<usize>> = supports
            .iter()
            .filter(|a| !supports.iter().any(|b| *a != b && a.is_subset(b)))
            .cloned()
            .collect();
        let mut dedup = Vec::new();
        for m in maximal {
            if !dedup.contains(&m) {
                dedup.push(m);
            }
        }
        Ok(SupportComplex {
            var,
            maximal: dedup,
        })
    }

    pub fn admits(&self, support: &BTreeSet<usize>) -> bool {
        self.maximal.iter().any(|m| support.is_subset(m))
    }

    pub fn is_full(&self, s: &InfoStructure) -> bool {
        self.maximal.len() == 1 && self.maximal[0].len() == s.var(self.var).arity()
    }
}

/// One support complex per object, with full simplices as the default.
#[derive(Debug, Clone)]
pub struct ProbabilityFunctor {
    pub supports: Vec<SupportComplex>,
}

impl ProbabilityFunctor {
    pub fn full(s: &InfoStructure) -> ProbabilityFunctor {
        ProbabilityFunctor {
            supports: (0..s.len()).map(|i| SupportComplex::full(s, i)).collect(),
        }
    }

    pub fn with_supports(
        s: &InfoStructure,
        given: Vec<(usize, Vec<BTreeSet<usize>>)>,
    ) -> Result<ProbabilityFunctor> {
        let mut q = ProbabilityFunctor::full(s);
        for (var, supports) in given {
            q.supports[var] = SupportComplex::new(s, var, supports)?;
        }
        Ok(q)
    }

    pub fn admits(&self, law: &RationalLaw) -> bool {
        self.supports[law.var].admits(&law.support())
    }

    pub fn is_full(&self, s: &InfoStructure) -> bool {
        self.supports.iter().all(|c| c.is_full(s))
    }
}

/// All admissible laws on `var` whose weights share a denominator `≤ bound`,
/// in ascending weight-vector order.
pub fn enumerate_grid_laws(
    s: &InfoStructure,
    q: &ProbabilityFunctor,
    var: usize,
    bound: u32,
) -> Vec<RationalLaw> {
    let arity = s.var(var).arity();
    let mut seen: BTreeSet<Vec<BigRational>> = BTreeSet::new();
    for sup in &q.supports[var].maximal {
        let slots: Vec<usize> = sup.iter().copied().collect();
        for d in 1..=bound {
            let mut parts = vec![0u32; slots.len()];
            compositions(d, 0, &mut parts, &mut |parts| {
                let mut weights = vec![BigRational::zero(); arity];
                for (k, &slot) in slots.iter().enumerate() {
                    weights[slot] =
                        BigRational::new(BigInt::from(parts[k]), BigInt::from(d));
                }
                seen.insert(weights);
            });
        }
    }
    seen.into_iter()
        .map(|weights| RationalLaw { var, weights })
        .collect()
}

fn compositions(rest: u32, k: usize, parts: &mut Vec<u32>, emit: &mut impl FnMut(&[u32])) {
    if k + 1 == parts.len() {
        parts[k] = rest;
        emit(parts);
        return;
    }
    for v in 0..=rest {
        parts[k] = v;
        compositions(rest - v, k + 1, parts, emit);
    }
}

/// Adaptedness report: marginals of admissible grid laws stay admissible,
/// and conditionings of admissible laws stay admissible.
#[derive(Debug, Clone)]
pub struct AdaptedReport {
    pub adapted: bool,
    pub checked_laws: usize,
    pub witness: Option<String>,
}

/// Verifies adaptedness exhaustively over the grid at denominator `bound`.
pub fn check_adapted(
    s: &InfoStructure,
    q: &ProbabilityFunctor,
    bound: u32,
) -> Result<AdaptedReport> {
    let mut checked = 0usize;
    for x in 0..s.len() {
        for law in enumerate_grid_laws(s, q, x, bound) {
            checked += 1;
            for &y in s.above(x) {
                let marginal = law.marginalize(s, y)?;
                if !q.admits(&marginal) {
                    return Ok(AdaptedReport {
                        adapted: false,
                        checked_laws: checked,
                        witness: Some(format!(
                            "marginal of ({}) on `{}` leaves the supports of `{}`",
                            law.key(),
                            s.id(x),
                            s.id(y)
                        )),
                    });
                }
                for v in 0..s.var(y).arity() {
                    if let Some(cond) = law.condition(s, y, v)? {
                        if !q.admits(&cond) {
                            return Ok(AdaptedReport {
                                adapted: false,
                                checked_laws: checked,
                                witness: Some(format!(
                                    "conditioning ({}) on `{}`={} leaves the supports of `{}`",
                                    law.key(),
                                    s.id(y),
                                    s.var(y).values[v],
                                    s.id(x)
                                )),
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(AdaptedReport {
        adapted: true,
        checked_laws: checked,
        witness: None,
    })
}

/// Number of grid laws with `k` slots and denominator dividing `n`.
pub fn dividing_grid_count(k: u32, n: u32) -> u64 {
    // Compositions of n into k nonnegative parts.
    let (mut num, mut den) = (1u64, 1u64);
    for i in 1..k {
        num *= (n + i) as u64;
        den *= i as u64;
    }
    num / den
}

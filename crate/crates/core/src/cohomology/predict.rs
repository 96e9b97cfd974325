//! Structural prediction of the degree-1 cohomology from minimal objects,
//! and the concordance check against grid measurements.

use super::blocks::{nondegenerate_product_check, BlockChain, BlockSearch};
use super::fit::FitReport;
use super::GridDimensions;
use crate::error::Result;
use crate::numeric::AlphaParam;
use crate::prob::{ProbabilityFunctor, RationalLaw};
use crate::structure::{components, minimal_objects, InfoStructure};
use num::rational::BigRational;

#[derive(Debug, Clone)]
pub enum H1Prediction {
    /// Every minimal object factors as a non-degenerate product.
    Finite {
        components: usize,
        dimension: usize,
        factorizations: Vec<(String, BlockChain)>,
    },
    /// An irreducible minimal object with a linear chain of coarser
    /// variables and a non-atomic conditioned grid law.
    Infinite {
        minimal: String,
        chain: Vec<String>,
        conditioning: String,
        value: String,
        witness_law: String,
    },
    /// Neither theorem applies; fall back to the numerical path.
    Unknown { reason: String },
}

impl H1Prediction {
    pub fn dimension(&self) -> Option<usize> {
        match self {
            H1Prediction::Finite { dimension, .. } => Some(*dimension),
            _ => None,
        }
    }

    pub fn verdict(&self) -> &'static str {
        match self {
            H1Prediction::Finite { .. } => "finite",
            H1Prediction::Infinite { .. } => "infinite",
            H1Prediction::Unknown { .. } => "unknown",
        }
    }
}

fn reducible_pairs(s: &InfoStructure, m: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let vars = s.non_terminal();
    for (i, &x) in vars.iter().enumerate() {
        for &y in &vars[i + 1..] {
            if x == m || y == m {
                continue;
            }
            if matches!(s.meet(x, y), Ok(Some(w)) if w == m) {
                out.push((x, y));
            }
        }
    }
    out
}

/// A witness that conditioning `m` on `on = value` leaves a non-atomic
/// admissible law: two atoms of one admissible support in the same fiber.
fn infinite_witness(
    s: &InfoStructure,
    q: &ProbabilityFunctor,
    m: usize,
    on: usize,
) -> Option<(usize, RationalLaw)> {
    let arity = s.var(m).arity();
    let fiber_of: Vec<usize> = if on == s.terminal() {
        vec![0; arity]
    } else {
        s.map(m, on)?
    };
    for support in &q.supports[m].maximal {
        for value in 0..s.var(on).arity() {
            let atoms: Vec<usize> = support
                .iter()
                .copied()
                .filter(|&a| fiber_of[a] == value)
                .collect();
            if atoms.len() >= 2 {
                let mut weights = vec![BigRational::from_integer(0.into()); arity];
                let half = BigRational::new(1.into(), 2.into());
                weights[atoms[0]] = half.clone();
                weights[atoms[1]] = half;
                let law = RationalLaw::new(s, m, weights).ok()?;
                return Some((value, law));
            }
        }
    }
    None
}

pub fn predict_h1(
    s: &InfoStructure,
    q: &ProbabilityFunctor,
    alpha: AlphaParam,
    seed: u64,
) -> Result<H1Prediction> {
    let minimals = minimal_objects(s);

    // Infinite-dimension test: an irreducible minimal whose coarser
    // variables form a chain, with a non-atomic conditioned law.
    for &m in &minimals {
        if !reducible_pairs(s, m).is_empty() {
            continue;
        }
        let mut coarser: Vec<usize> = s
            .non_terminal()
            .into_iter()
            .filter(|&x| x != m && s.leq(m, x))
            .collect();
        let chain_ok = coarser
            .iter()
            .all(|&a| coarser.iter().all(|&b| s.leq(a, b) || s.leq(b, a)));
        if !chain_ok {
            continue;
        }
        coarser.sort_by(|&a, &b| {
            if a == b {
                std::cmp::Ordering::Equal
            } else if s.leq(a, b) {
                std::cmp::Ordering::Less
            } else {
                std::cmp::Ordering::Greater
            }
        });
        let mut candidates = coarser.clone();
        candidates.push(s.terminal());
        for &on in &candidates {
            if let Some((value, law)) = infinite_witness(s, q, m, on) {
                let mut chain = vec![m];
                chain.extend(coarser.iter().copied());
                chain.push(s.terminal());
                return Ok(H1Prediction::Infinite {
                    minimal: s.id(m).to_string(),
                    chain: chain.into_iter().map(|x| s.id(x).to_string()).collect(),
                    conditioning: s.id(on).to_string(),
                    value: s.var(on).values[value].clone(),
                    witness_law: law.key(),
                });
            }
        }
    }

    // Finite verdict: every minimal object factors non-degenerately.
    let mut factorizations = Vec::new();
    let mut blocked = None;
    for &m in &minimals {
        let mut found = None;
        for (x, y) in reducible_pairs(s, m) {
            if let BlockSearch::Found(chain) = nondegenerate_product_check(s, q, x, y, seed)? {
                found = Some(chain);
                break;
            }
        }
        match found {
            Some(chain) => factorizations.push((s.id(m).to_string(), chain)),
            None => {
                blocked = Some(s.id(m).to_string());
                break;
            }
        }
    }
    if let Some(id) = blocked {
        return Ok(H1Prediction::Unknown {
            reason: format!("minimal object `{id}` has no non-degenerate factorization"),
        });
    }
    let comps = components(s).len();
    let dimension = if alpha.is_one() {
        comps
    } else {
        comps.saturating_sub(1)
    };
    Ok(H1Prediction::Finite {
        components: comps,
        dimension,
        factorizations,
    })
}

/// Comparison between the structural verdict and the measured grid numbers:
/// the grid dimension must dominate a finite prediction, with equality
/// exactly when the fit explains every nullspace vector.
#[derive(Debug, Clone)]
pub struct ConcordanceReport {
    pub structural: Option<usize>,
    pub verdict: String,
    pub grid_h1: usize,
    pub all_explained: bool,
    pub consistent: bool,
}

pub fn concordance(
    prediction: &H1Prediction,
    dims: &GridDimensions,
    fit: &FitReport,
) -> ConcordanceReport {
    let all_explained = fit.all_explained();
    let (structural, consistent) = match prediction {
        H1Prediction::Finite { dimension, .. } => (
            Some(*dimension),
            dims.h1 >= *dimension && ((dims.h1 == *dimension) == all_explained),
        ),
        _ => (None, true),
    };
    ConcordanceReport {
        structural,
        verdict: prediction.verdict().to_string(),
        grid_h1: dims.h1,
        all_explained,
        consistent,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::Partition;
    use crate::structure::{build_concrete_structure, coproduct_structure};

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
    fn full_two_binary_structure_predicts_one_then_zero() {
        let c = two_binary();
        let s = &c.structure;
        let q = ProbabilityFunctor::full(s);
        let p1 = predict_h1(s, &q, AlphaParam::One, 1).unwrap();
        assert_eq!(p1.dimension(), Some(1));
        let p2 = predict_h1(s, &q, AlphaParam::new(2.0).unwrap(), 1).unwrap();
        assert_eq!(p2.dimension(), Some(0));
    }

    #[test]
    fn coproduct_doubles_the_finite_prediction() {
        let c1 = two_binary();
        let ground = vec!["00".into(), "01".into(), "10".into(), "11".into()];
        let c2 = build_concrete_structure(
            ground,
            vec![
                ("U".into(), Partition::from_assignment(&[0, 0, 1, 1])),
                ("V".into(), Partition::from_assignment(&[0, 1, 0, 1])),
            ],
            true,
        )
        .unwrap();
        let cop = coproduct_structure(&c1.structure, &c2.structure).unwrap();
        let q = ProbabilityFunctor::full(&cop.structure);
        let p1 = predict_h1(&cop.structure, &q, AlphaParam::One, 1).unwrap();
        assert_eq!(p1.dimension(), Some(2));
        let p2 = predict_h1(&cop.structure, &q, AlphaParam::new(2.0).unwrap(), 1).unwrap();
        assert_eq!(p2.dimension(), Some(1));
    }

    #[test]
    fn irreducible_chain_predicts_infinite_with_a_uniform_witness() {
        let ground = vec!["0".into(), "1".into(), "2".into()];
        let c = build_concrete_structure(
            ground,
            vec![
                ("M".into(), Partition::finest(3)),
                ("X1".into(), Partition::from_assignment(&[0, 0, 1])),
            ],
            false,
        )
        .unwrap();
        let s = &c.structure;
        let q = ProbabilityFunctor::full(s);
        match predict_h1(s, &q, AlphaParam::One, 1).unwrap() {
            H1Prediction::Infinite {
                minimal,
                chain,
                conditioning,
                witness_law,
                ..
            } => {
                assert_eq!(minimal, "M");
                assert_eq!(chain, vec!["M", "X1", "1"]);
                assert_eq!(conditioning, "X1");
                assert_eq!(witness_law, "1/2,1/2,0");
            }
            other => panic!("expected infinite, got {other:?}"),
        }
    }

    #[test]
    fn dirac_only_laws_give_no_infinite_witness() {
        let ground = vec!["a".into(), "b".into()];
        let c = build_concrete_structure(
            ground,
            vec![("X".into(), Partition::finest(2))],
            false,
        )
        .unwrap();
        let s = &c.structure;
        let q = ProbabilityFunctor::with_supports(
            s,
            vec![(
                s.index_of("X").unwrap(),
                vec![
                    std::collections::BTreeSet::from([0]),
                    std::collections::BTreeSet::from([1]),
                ],
            )],
        )
        .unwrap();
        match predict_h1(s, &q, AlphaParam::One, 1).unwrap() {
            H1Prediction::Unknown { .. } => {}
            other => panic!("expected unknown, got {other:?}"),
        }
    }

    #[test]
    fn single_binary_variable_is_infinite_via_the_empty_chain() {
        let ground = vec!["a".into(), "b".into()];
        let c = build_concrete_structure(
            ground,
            vec![("X".into(), Partition::finest(2))],
            false,
        )
        .unwrap();
        let s = &c.structure;
        let q = ProbabilityFunctor::full(s);
        match predict_h1(s, &q, AlphaParam::One, 1).unwrap() {
            H1Prediction::Infinite {
                minimal,
                conditioning,
                witness_law,
                ..
            } => {
                assert_eq!(minimal, "X");
                assert_eq!(conditioning, "1");
                assert_eq!(witness_law, "1/2,1/2");
            }
            other => panic!("expected infinite, got {other:?}"),
        }
    }
}

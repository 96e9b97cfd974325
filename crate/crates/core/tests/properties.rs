//! Randomized invariants: partition algebra, grid law exactness, coboundary
//! composition, entropy recursion, and the Farey grid.

use std::collections::BTreeSet;

use infocoh::cochain::{coboundary_capped, random_cochain, summarize_residual};
use infocoh::context::GridContext;
use infocoh::funceq::FareyGrid;
use infocoh::numeric::{entropy, AlphaParam, Value, Weight};
use infocoh::partition::Partition;
use infocoh::prob::{ProbabilityFunctor, SupportComplex};
use infocoh::structure::{build_concrete_structure, limit_sections, ConcreteStructure};
use num::rational::BigRational;
use num::{Signed, ToPrimitive, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn assignments(n: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0..n, n)
}

fn closed_structure(
    ground: usize,
    gens: Vec<Vec<usize>>,
) -> Option<ConcreteStructure> {
    let names = ["A", "B", "C"];
    let named = gens
        .iter()
        .enumerate()
        .map(|(i, a)| (names[i].to_string(), Partition::from_assignment(a)))
        .collect();
    build_concrete_structure((0..ground).map(|i| format!("w{i}")).collect(), named, true).ok()
}

fn rational_law(numerators: &[u8]) -> Option<Vec<BigRational>> {
    let total: i64 = numerators.iter().map(|&n| i64::from(n)).sum();
    if total == 0 {
        return None;
    }
    Some(
        numerators
            .iter()
            .map(|&n| BigRational::new(i64::from(n).into(), total.into()))
            .collect(),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn partition_product_is_commutative_and_idempotent(
        a in assignments(6),
        b in assignments(6),
    ) {
        let pa = Partition::from_assignment(&a);
        let pb = Partition::from_assignment(&b);
        prop_assert_eq!(pa.product(&pb), pb.product(&pa));
        prop_assert_eq!(pa.product(&pa), pa.clone());
        prop_assert_eq!(pa.product(&Partition::coarsest(6)), pa.clone());
        prop_assert_eq!(pa.product(&Partition::finest(6)), Partition::finest(6));
    }

    #[test]
    fn partition_product_is_associative(
        a in assignments(6),
        b in assignments(6),
        c in assignments(6),
    ) {
        let pa = Partition::from_assignment(&a);
        let pb = Partition::from_assignment(&b);
        let pc = Partition::from_assignment(&c);
        prop_assert_eq!(
            pa.product(&pb).product(&pc),
            pa.product(&pb.product(&pc))
        );
    }

    #[test]
    fn partition_product_is_the_coarsest_common_refinement(
        a in assignments(6),
        b in assignments(6),
        d in assignments(6),
    ) {
        let pa = Partition::from_assignment(&a);
        let pb = Partition::from_assignment(&b);
        let meet = pa.product(&pb);
        prop_assert!(meet.refines(&pa));
        prop_assert!(meet.refines(&pb));
        // Any common refinement factors through the product.
        let finer = meet.product(&Partition::from_assignment(&d));
        prop_assert!(finer.refines(&meet));
        let map = finer.refinement_map(&meet);
        prop_assert!(map.is_some());
        let map = map.unwrap();
        for i in 0..6 {
            prop_assert_eq!(map[finer.label(i)], meet.label(i));
        }
    }

    #[test]
    fn support_admissibility_is_downward_closed(
        fams in prop::collection::vec(prop::collection::btree_set(0usize..4, 1..=4), 1..=3),
        probe in prop::collection::btree_set(0usize..4, 0..=4),
    ) {
        let c = build_concrete_structure(
            (0..4).map(|i| format!("w{i}")).collect(),
            vec![("A".to_string(), Partition::finest(4))],
            false,
        ).unwrap();
        let s = &c.structure;
        let a = s.index_of("A").unwrap();
        let complex = SupportComplex::new(s, a, fams).unwrap();
        if complex.admits(&probe) {
            for &drop in &probe {
                let mut smaller: BTreeSet<usize> = probe.clone();
                smaller.remove(&drop);
                prop_assert!(complex.admits(&smaller));
            }
        }
        for m in &complex.maximal {
            prop_assert!(complex.admits(m));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn grid_laws_are_exact_reduced_and_consistent(
        a in assignments(4),
        b in assignments(4),
        bound in 2u32..=4,
    ) {
        let Some(c) = closed_structure(4, vec![a, b]) else {
            return Ok(());
        };
        let s = &c.structure;
        let q = ProbabilityFunctor::full(s);
        let ctx = GridContext::new(s, &q, bound).unwrap();
        for x in 0..s.len() {
            for k in 0..ctx.law_count(x) {
                let law = ctx.law(x, k);
                let total: BigRational = law.weights.iter().sum();
                prop_assert_eq!(total, BigRational::from_integer(1.into()));
                for w in &law.weights {
                    prop_assert!(w.denom().to_u32().map(|d| d <= bound).unwrap_or(false));
                    prop_assert!(!w.is_negative());
                }
                prop_assert_eq!(ctx.find(law), Some(k));
            }
        }
        // Marginals of grid laws are the pointwise fiber sums.
        for &x in &s.non_terminal() {
            for &y in &s.non_terminal() {
                let Some(m) = s.meet(x, y).unwrap() else { continue };
                let fiber = s.map(m, x).unwrap();
                for k in 0..ctx.law_count(m) {
                    let law = ctx.law(m, k);
                    let marg = ctx.law(x, ctx.marginal_index(m, k, x));
                    let mut expect =
                        vec![BigRational::from_integer(0.into()); s.var(x).arity()];
                    for (v, w) in law.weights.iter().enumerate() {
                        expect[fiber[v]] += w;
                    }
                    prop_assert_eq!(&marg.weights, &expect);
                }
            }
        }
    }

    #[test]
    fn coboundary_composition_vanishes_on_random_structures(
        a in assignments(4),
        b in assignments(4),
        degree in 0usize..=1,
        seed in any::<u64>(),
    ) {
        let Some(c) = closed_structure(4, vec![a, b]) else {
            return Ok(());
        };
        let s = &c.structure;
        let q = ProbabilityFunctor::full(s);
        let ctx = GridContext::new(s, &q, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = random_cochain(&ctx, AlphaParam::One, degree, &mut rng);
        let df = coboundary_capped(&ctx, &f, degree + 1).unwrap();
        let ddf = coboundary_capped(&ctx, &df, degree + 2).unwrap();
        let rep = summarize_residual(&ctx, &ddf);
        prop_assert!(rep.exact && rep.exact_zero, "witness {:?}", rep.witness);
    }

    #[test]
    fn closed_concrete_limits_collapse_to_the_finest_variable(
        a in assignments(5),
        b in assignments(5),
    ) {
        let Some(c) = closed_structure(5, vec![a, b]) else {
            return Ok(());
        };
        let s = &c.structure;
        let bottom = s.meet_all(&s.non_terminal()).unwrap().unwrap();
        prop_assert_eq!(limit_sections(s).len(), s.var(bottom).arity());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn entropy_grouping_recursion_is_exact(nums in prop::collection::vec(0u8..=6, 4)) {
        let Some(w) = rational_law(&nums) else {
            return Ok(());
        };
        let g1 = &w[0] + &w[1];
        let g2 = &w[2] + &w[3];
        let mut rhs = entropy(AlphaParam::One, &[g1.clone(), g2.clone()]);
        if !g1.is_zero() {
            let cond = [&w[0] / &g1, &w[1] / &g1];
            rhs = rhs.add(
                &entropy(AlphaParam::One, &cond).scale_weight(&Weight::Rat(g1.clone())),
            );
        }
        if !g2.is_zero() {
            let cond = [&w[2] / &g2, &w[3] / &g2];
            rhs = rhs.add(
                &entropy(AlphaParam::One, &cond).scale_weight(&Weight::Rat(g2.clone())),
            );
        }
        let lhs = entropy(AlphaParam::One, &w);
        prop_assert!(lhs.sub(&rhs).is_zero_within(0.0));
    }

    #[test]
    fn uniform_entropy_matches_closed_forms(k in 2usize..=6, lane in prop::sample::select(vec![0.5f64, 2.0, 3.0])) {
        let uniform: Vec<BigRational> =
            (0..k).map(|_| BigRational::new(1.into(), (k as i64).into())).collect();

        let shannon = entropy(AlphaParam::One, &uniform).to_f64();
        prop_assert!((shannon - (k as f64).ln()).abs() <= 1e-12);

        let alpha = AlphaParam::new(lane).unwrap();
        let expect = ((k as f64).powf(1.0 - lane) - 1.0) / (1.0 - lane);
        let got = match entropy(alpha, &uniform) {
            Value::Float(x) => x,
            Value::Exact(_) => unreachable!("general lane is floating point"),
        };
        prop_assert!((got - expect).abs() <= 1e-12);
    }

    #[test]
    fn farey_grid_matches_direct_enumeration(bound in 2u32..=12) {
        let grid = FareyGrid::new(bound).unwrap();
        let mut expect = BTreeSet::new();
        for b in 1..=i64::from(bound) {
            for a in 0..=b {
                expect.insert(BigRational::new(a.into(), b.into()));
            }
        }
        let expect: Vec<BigRational> = expect.into_iter().collect();
        prop_assert_eq!(&grid.points, &expect);
        for (i, p) in grid.points.iter().enumerate() {
            prop_assert_eq!(grid.index_of(p), Some(i));
            let mirror = BigRational::from_integer(1.into()) - p;
            prop_assert!(grid.contains(&mirror));
        }
    }
}

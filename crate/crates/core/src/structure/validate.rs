use super::sections::limit_sections;
use super::InfoStructure;
use crate::error::Error;

/// Outcome of a single axiom check.
#[derive(Debug, Clone)]
pub struct AxiomCheck {
    pub name: &'static str,
    pub pass: bool,
    /// Human-readable witness of the first failure, if any.
    pub witness: Option<String>,
}

impl AxiomCheck {
    fn pass(name: &'static str) -> AxiomCheck {
        AxiomCheck {
            name,
            pass: true,
            witness: None,
        }
    }

    fn fail(name: &'static str, witness: String) -> AxiomCheck {
        AxiomCheck {
            name,
            pass: false,
            witness: Some(witness),
        }
    }
}

/// Per-axiom verdicts plus the recorded nerve height.
#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub checks: Vec<AxiomCheck>,
    pub height: usize,
}

impl ValidationReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> Vec<&AxiomCheck> {
        self.checks.iter().filter(|c| !c.pass).collect()
    }
}

/// Checks the eight structure axioms and reports one verdict per axiom,
/// each failure carrying a concrete witness.
pub fn validate_structure(s: &InfoStructure) -> ValidationReport {
    let n = s.len();
    let t = s.terminal();
    let mut checks = Vec::with_capacity(8);

    // Poset: reachability is antisymmetric (no 2-cycles).
    let mut poset = AxiomCheck::pass("poset");
    'poset: for i in 0..n {
        for j in (i + 1)..n {
            if s.leq(i, j) && s.leq(j, i) {
                poset = AxiomCheck::fail(
                    "poset",
                    format!("`{}` and `{}` refine each other", s.id(i), s.id(j)),
                );
                break 'poset;
            }
        }
    }
    let poset_ok = poset.pass;
    checks.push(poset);

    // Finite height: automatic for a finite poset; the height is recorded.
    let height = if poset_ok { s.nerve_height() } else { 0 };
    checks.push(AxiomCheck::pass("finite-height"));

    // Terminal object: every other variable refines it.
    checks.push(
        match (0..n).find(|&i| i != t && !s.leq(i, t)) {
            Some(i) => AxiomCheck::fail(
                "terminal-object",
                format!("`{}` has no arrow to `{}`", s.id(i), s.id(t)),
            ),
            None => AxiomCheck::pass("terminal-object"),
        },
    );

    // Terminal point: the terminal variable has a single value.
    checks.push(if s.var(t).arity() == 1 {
        AxiomCheck::pass("terminal-point")
    } else {
        AxiomCheck::fail(
            "terminal-point",
            Error::BadTerminal(s.id(t).to_string(), s.var(t).arity()).to_string(),
        )
    });

    // Conditional meets: a common refiner forces a unique greatest one.
    let mut meets = AxiomCheck::pass("conditional-meets");
    'meets: for x in 0..n {
        for y in (x + 1)..n {
            let has_lower = (0..n).any(|z| s.leq(z, x) && s.leq(z, y));
            if !has_lower {
                continue;
            }
            match s.meet(x, y) {
                Ok(Some(_)) => {}
                Ok(None) => unreachable!("a common refiner exists"),
                Err(e) => {
                    meets = AxiomCheck::fail("conditional-meets", e.to_string());
                    break 'meets;
                }
            }
        }
    }
    checks.push(meets);

    // Strict surjections: every arrow's value map is onto and strictly
    // decreases the value count.
    let mut surj = AxiomCheck::pass("strict-surjections");
    'surj: for i in 0..n {
        for &j in s.above(i) {
            let map = s.map(i, j).expect("reachable pair has a map");
            let mut hit = vec![false; s.var(j).arity()];
            for &v in &map {
                hit[v] = true;
            }
            if let Some(miss) = hit.iter().position(|h| !h) {
                surj = AxiomCheck::fail(
                    "strict-surjections",
                    format!(
                        "map `{}` -> `{}` misses value `{}`",
                        s.id(i),
                        s.id(j),
                        s.var(j).values[miss]
                    ),
                );
                break 'surj;
            }
            if s.var(i).arity() <= s.var(j).arity() {
                surj = AxiomCheck::fail(
                    "strict-surjections",
                    format!(
                        "arrow `{}` -> `{}` between distinct variables is not strict: {} values to {}",
                        s.id(i),
                        s.id(j),
                        s.var(i).arity(),
                        s.var(j).arity()
                    ),
                );
                break 'surj;
            }
        }
    }
    checks.push(surj);

    // Product fibers: values of a meet embed into the value pairs.
    let mut fibers = AxiomCheck::pass("product-fibers");
    'fibers: for x in 0..n {
        for y in (x + 1)..n {
            let m = match s.meet(x, y) {
                Ok(Some(m)) => m,
                _ => continue,
            };
            let mut seen = std::collections::BTreeMap::new();
            for w in 0..s.var(m).arity() {
                let key = (s.apply(m, x, w).unwrap(), s.apply(m, y, w).unwrap());
                if let Some(&w0) = seen.get(&key) {
                    fibers = AxiomCheck::fail(
                        "product-fibers",
                        format!(
                            "values `{}` and `{}` of `{}` both restrict to ({}={}, {}={})",
                            s.var(m).values[w0 as usize],
                            s.var(m).values[w],
                            s.id(m),
                            s.id(x),
                            s.var(x).values[key.0],
                            s.id(y),
                            s.var(y).values[key.1]
                        ),
                    );
                    break 'fibers;
                }
                seen.insert(key, w);
            }
        }
    }
    checks.push(fibers);

    // Global sections: every value of every variable extends to a section.
    let mut global = AxiomCheck::pass("global-sections");
    if poset_ok {
        let sections = limit_sections(s);
        'global: for i in 0..n {
            for v in 0..s.var(i).arity() {
                if !sections.iter().any(|sec| sec.values[i] == v) {
                    global = AxiomCheck::fail(
                        "global-sections",
                        format!(
                            "value `{}` of `{}` is not reached by any section",
                            s.var(i).values[v],
                            s.id(i)
                        ),
                    );
                    break 'global;
                }
            }
        }
    }
    checks.push(global);

    ValidationReport { checks, height }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::Partition;
    use crate::structure::{build_concrete_structure, build_simplicial_structure, Arrow, Variable};

    #[test]
    fn closed_two_projection_structure_passes_all_axioms() {
        let ground = vec!["00".into(), "01".into(), "10".into(), "11".into()];
        let x1 = Partition::from_assignment(&[0, 0, 1, 1]);
        let x2 = Partition::from_assignment(&[0, 1, 0, 1]);
        let c = build_concrete_structure(
            ground,
            vec![("X1".into(), x1), ("X2".into(), x2)],
            true,
        )
        .unwrap();
        let report = validate_structure(&c.structure);
        assert!(report.all_pass(), "{:?}", report.failures());
        assert_eq!(report.checks.len(), 8);
        assert_eq!(report.height, 2);
    }

    #[test]
    fn unclosed_projections_with_atomic_joint_fail_fiber_axiom() {
        // Two coordinate projections plus the complement-of-a-point partition;
        // only the first two carry a joint. The joint refines the third
        // variable, so spans exist whose fibers collide.
        let ground = vec!["00".into(), "01".into(), "10".into(), "11".into()];
        let x1 = Partition::from_assignment(&[0, 0, 1, 1]);
        let x2 = Partition::from_assignment(&[0, 1, 0, 1]);
        let x3 = Partition::from_assignment(&[0, 1, 1, 1]);
        let x12 = x1.product(&x2);
        let c = build_concrete_structure(
            ground,
            vec![
                ("X1".into(), x1),
                ("X2".into(), x2),
                ("X3".into(), x3),
                ("J".into(), x12),
            ],
            false,
        )
        .unwrap();
        let report = validate_structure(&c.structure);
        assert!(!report.all_pass());
        let failed: Vec<&str> = report.failures().iter().map(|c| c.name).collect();
        assert_eq!(failed, vec!["product-fibers"]);
    }

    #[test]
    fn non_surjective_arrow_fails_with_witness() {
        let vars = vec![
            Variable::new("1", vec!["*".into()]),
            Variable::new("X", vec!["a".into(), "b".into(), "c".into()]),
            Variable::new("Y", vec!["u".into(), "v".into()]),
        ];
        let arrows = vec![
            Arrow { from: 1, to: 0, map: vec![0, 0, 0] },
            Arrow { from: 2, to: 0, map: vec![0, 0] },
            Arrow { from: 1, to: 2, map: vec![0, 0, 0] },
        ];
        let s = InfoStructure::assemble(vars, arrows, 0).unwrap();
        let report = validate_structure(&s);
        let surj = report
            .checks
            .iter()
            .find(|c| c.name == "strict-surjections")
            .unwrap();
        assert!(!surj.pass);
        assert!(surj.witness.as_ref().unwrap().contains("misses value `v`"));
    }

    #[test]
    fn forbidden_top_face_still_validates() {
        let vertices = vec![("X1".into(), 2), ("X2".into(), 2), ("X3".into(), 2)];
        let faces = vec![
            vec!["X1".into()],
            vec!["X2".into()],
            vec!["X3".into()],
            vec!["X1".into(), "X2".into()],
            vec!["X1".into(), "X3".into()],
            vec!["X2".into(), "X3".into()],
        ];
        let s = build_simplicial_structure(vertices, faces).unwrap();
        assert_eq!(s.len(), 7);
        assert!(validate_structure(&s).all_pass());
    }
}

use super::sections::limit_sections;
use super::InfoStructure;
use crate::error::{Error, Result};
use crate::partition::Partition;

/// A realization of a structure by partitions of a concrete sample set:
/// one partition per object, with a value <-> block bijection.
#[derive(Debug, Clone)]
pub struct ClassicalModel {
    pub ground: Vec<String>,
    /// `rho[i]` realizes object `i`.
    pub rho: Vec<Partition>,
    /// `block_value[i][b]` is the value index labelled by block `b` of `rho[i]`.
    pub block_value: Vec<Vec<usize>>,
}

impl ClassicalModel {
    /// Value index of object `i` observed at sample point `w`.
    pub fn observe(&self, i: usize, w: usize) -> usize {
        self.block_value[i][self.rho[i].label(w)]
    }
}

/// One verdict per model axiom.
#[derive(Debug, Clone)]
pub struct ModelCheck {
    pub injective_on_objects: bool,
    pub value_bijections: bool,
    pub natural: bool,
    pub meets_to_products: bool,
    pub witness: Option<String>,
}

impl ModelCheck {
    pub fn all_pass(&self) -> bool {
        self.injective_on_objects && self.value_bijections && self.natural && self.meets_to_products
    }
}

/// Checks the classical-model axioms of `m` against `s` exhaustively.
pub fn check_model(s: &InfoStructure, m: &ClassicalModel) -> ModelCheck {
    let n = s.len();
    let mut check = ModelCheck {
        injective_on_objects: true,
        value_bijections: true,
        natural: true,
        meets_to_products: true,
        witness: None,
    };
    let witness = |w: String, slot: &mut bool| {
        *slot = false;
        w
    };
    let mut first: Option<String> = None;
    let mut note = |w: Option<String>| {
        if first.is_none() {
            first = w;
        }
    };

    for i in 0..n {
        for j in (i + 1)..n {
            if m.rho[i] == m.rho[j] {
                note(Some(witness(
                    format!("`{}` and `{}` share a partition", s.id(i), s.id(j)),
                    &mut check.injective_on_objects,
                )));
            }
        }
    }

    for i in 0..n {
        let blocks = m.rho[i].block_count();
        let ok = blocks == s.var(i).arity()
            && m.block_value[i].len() == blocks
            && {
                let mut seen = vec![false; blocks];
                m.block_value[i].iter().all(|&v| {
                    v < blocks && !std::mem::replace(&mut seen[v], true)
                })
            };
        if !ok {
            note(Some(witness(
                format!("`{}` lacks a value/block bijection", s.id(i)),
                &mut check.value_bijections,
            )));
        }
    }

    if check.value_bijections {
        for i in 0..n {
            for &j in s.above(i) {
                let map = s.map(i, j).unwrap();
                for w in 0..m.ground.len() {
                    if map[m.observe(i, w)] != m.observe(j, w) {
                        note(Some(witness(
                            format!(
                                "arrow `{}` -> `{}` disagrees with observation at `{}`",
                                s.id(i),
                                s.id(j),
                                m.ground[w]
                            ),
                            &mut check.natural,
                        )));
                    }
                }
            }
        }
    }

    for x in 0..n {
        for y in (x + 1)..n {
            if let Ok(Some(z)) = s.meet(x, y) {
                if m.rho[z] != m.rho[x].product(&m.rho[y]) {
                    note(Some(witness(
                        format!(
                            "partition of `{}` is not the product of `{}` and `{}`",
                            s.id(z),
                            s.id(x),
                            s.id(y)
                        ),
                        &mut check.meets_to_products,
                    )));
                }
            }
        }
    }

    check.witness = first;
    check
}

/// Result of attempting to model a structure over its own section set.
#[derive(Debug, Clone)]
pub struct InducedModelReport {
    pub model: Option<ClassicalModel>,
    /// Two objects inducing identical section partitions, when modelling fails.
    pub collision: Option<(String, String)>,
    pub section_count: usize,
}

/// Builds the candidate model over the section set: each object partitions
/// sections by its value. Succeeds iff that assignment is injective.
pub fn induced_model(s: &InfoStructure) -> InducedModelReport {
    let sections = limit_sections(s);
    let ground: Vec<String> = (0..sections.len()).map(|k| format!("s{k}")).collect();
    let n = s.len();
    let mut rho = Vec::with_capacity(n);
    let mut block_value = Vec::with_capacity(n);
    for i in 0..n {
        let assignment: Vec<usize> = sections.iter().map(|sec| sec.values[i]).collect();
        let p = Partition::from_assignment(&assignment);
        // Canonical block order is first occurrence; recover each block's value.
        let mut bv = vec![usize::MAX; p.block_count()];
        for (k, sec) in sections.iter().enumerate() {
            bv[p.label(k)] = sec.values[i];
        }
        rho.push(p);
        block_value.push(bv);
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if rho[i] == rho[j] {
                return InducedModelReport {
                    model: None,
                    collision: Some((s.id(i).to_string(), s.id(j).to_string())),
                    section_count: sections.len(),
                };
            }
        }
    }
    InducedModelReport {
        model: Some(ClassicalModel {
            ground,
            rho,
            block_value,
        }),
        collision: None,
        section_count: sections.len(),
    }
}

fn paired_ground(g1: &[String], g2: &[String]) -> Vec<String> {
    let mut out = Vec::with_capacity(g1.len() * g2.len());
    for a in g1 {
        for b in g2 {
            out.push(format!("({a};{b})"));
        }
    }
    out
}

/// Model of a product structure over the product sample set:
/// the pair object carries the product partition of the factors.
pub fn product_model(
    prod: &InfoStructure,
    pair_of: &dyn Fn(usize) -> (usize, usize),
    m1: &ClassicalModel,
    m2: &ClassicalModel,
) -> Result<ClassicalModel> {
    let ground = paired_ground(&m1.ground, &m2.ground);
    let w2 = m2.ground.len();
    let mut rho = Vec::with_capacity(prod.len());
    let mut block_value = Vec::with_capacity(prod.len());
    for k in 0..prod.len() {
        let (i, j) = pair_of(k);
        let assignment: Vec<usize> = (0..ground.len())
            .map(|w| m1.rho[i].label(w / w2) * m2.rho[j].block_count() + m2.rho[j].label(w % w2))
            .collect();
        let p = Partition::from_assignment(&assignment);
        if p.block_count() != prod.var(k).arity() {
            return Err(Error::ModelObstruction(format!(
                "object `{}` has {} values but {} product blocks",
                prod.id(k),
                prod.var(k).arity(),
                p.block_count()
            )));
        }
        let arity2 = m2.block_value[j].len();
        let mut bv = vec![usize::MAX; p.block_count()];
        for (w, &lab) in p.labels().iter().enumerate() {
            bv[lab] = m1.observe(i, w / w2) * arity2 + m2.observe(j, w % w2);
        }
        rho.push(p);
        block_value.push(bv);
    }
    Ok(ClassicalModel {
        ground,
        rho,
        block_value,
    })
}

/// Model of a coproduct structure over the product sample set: objects of
/// the left summand ignore the right coordinate and vice versa.
pub fn coproduct_model(
    cop: &InfoStructure,
    side_of: &dyn Fn(usize) -> Option<(bool, usize)>,
    m1: &ClassicalModel,
    m2: &ClassicalModel,
) -> ClassicalModel {
    let ground = paired_ground(&m1.ground, &m2.ground);
    let w2 = m2.ground.len();
    let mut rho = Vec::with_capacity(cop.len());
    let mut block_value = Vec::with_capacity(cop.len());
    for k in 0..cop.len() {
        let assignment: Vec<usize> = match side_of(k) {
            None => vec![0; ground.len()],
            Some((false, i)) => (0..ground.len()).map(|w| m1.rho[i].label(w / w2)).collect(),
            Some((true, j)) => (0..ground.len()).map(|w| m2.rho[j].label(w % w2)).collect(),
        };
        let p = Partition::from_assignment(&assignment);
        let mut bv = vec![usize::MAX; p.block_count()];
        for w in 0..ground.len() {
            let v = match side_of(k) {
                None => 0,
                Some((false, i)) => m1.observe(i, w / w2),
                Some((true, j)) => m2.observe(j, w % w2),
            };
            bv[p.label(w)] = v;
        }
        rho.push(p);
        block_value.push(bv);
    }
    ClassicalModel {
        ground,
        rho,
        block_value,
    }
}

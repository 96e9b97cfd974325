use super::construct::ProductStructure;
use super::validate::AxiomCheck;
use super::InfoStructure;

/// A map of structures: an object map plus one value map per source object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureMorphism {
    /// `object_map[i]` is the target object of source object `i`.
    pub object_map: Vec<usize>,
    /// `value_maps[i][v]` is the target value of value `v` of object `i`.
    pub value_maps: Vec<Vec<usize>>,
}

impl StructureMorphism {
    pub fn identity(s: &InfoStructure) -> StructureMorphism {
        StructureMorphism {
            object_map: (0..s.len()).collect(),
            value_maps: (0..s.len())
                .map(|i| (0..s.var(i).arity()).collect())
                .collect(),
        }
    }

    /// `g` after `self`.
    pub fn then(&self, g: &StructureMorphism) -> StructureMorphism {
        StructureMorphism {
            object_map: self.object_map.iter().map(|&k| g.object_map[k]).collect(),
            value_maps: self
                .object_map
                .iter()
                .zip(&self.value_maps)
                .map(|(&k, vm)| vm.iter().map(|&v| g.value_maps[k][v]).collect())
                .collect(),
        }
    }
}

/// The pairing of two morphisms out of a common source into a product.
pub fn pairing(
    f1: &StructureMorphism,
    f2: &StructureMorphism,
    s2: &InfoStructure,
    prod: &ProductStructure,
) -> StructureMorphism {
    let object_map: Vec<usize> = f1
        .object_map
        .iter()
        .zip(&f2.object_map)
        .map(|(&i, &j)| prod.pair(i, j))
        .collect();
    let value_maps = f1
        .value_maps
        .iter()
        .zip(&f2.value_maps)
        .zip(&f2.object_map)
        .map(|((vm1, vm2), &j)| {
            let a2 = s2.var(j).arity();
            vm1.iter()
                .zip(vm2)
                .map(|(&v1, &v2)| v1 * a2 + v2)
                .collect()
        })
        .collect();
    StructureMorphism {
        object_map,
        value_maps,
    }
}

/// Verdicts for a morphism between validated structures.
#[derive(Debug, Clone)]
pub struct MorphismReport {
    pub checks: Vec<AxiomCheck>,
    /// Injective on objects with bijective value maps.
    pub embedding: bool,
}

impl MorphismReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

fn check(name: &'static str, witness: Option<String>) -> AxiomCheck {
    AxiomCheck {
        name,
        pass: witness.is_none(),
        witness,
    }
}

/// Checks shape, terminal preservation, monotonicity, meet preservation,
/// naturality of the value maps, and their surjectivity.
pub fn validate_morphism(
    phi: &StructureMorphism,
    s: &InfoStructure,
    t: &InfoStructure,
) -> MorphismReport {
    let n = s.len();
    let mut checks = Vec::new();

    let mut shape = None;
    if phi.object_map.len() != n || phi.value_maps.len() != n {
        shape = Some(format!("maps cover {} of {} objects", phi.object_map.len(), n));
    } else {
        for i in 0..n {
            let k = phi.object_map[i];
            if k >= t.len() {
                shape = Some(format!("`{}` maps outside the target", s.id(i)));
                break;
            }
            if phi.value_maps[i].len() != s.var(i).arity()
                || phi.value_maps[i].iter().any(|&v| v >= t.var(k).arity())
            {
                shape = Some(format!("value map of `{}` malformed", s.id(i)));
                break;
            }
        }
    }
    let shape_ok = shape.is_none();
    checks.push(check("shape", shape));
    if !shape_ok {
        return MorphismReport {
            checks,
            embedding: false,
        };
    }

    let terminal = if phi.object_map[s.terminal()] == t.terminal() {
        None
    } else {
        Some(format!(
            "terminal maps to `{}`",
            t.id(phi.object_map[s.terminal()])
        ))
    };
    checks.push(check("terminal", terminal));

    let mut monotone = None;
    'mono: for i in 0..n {
        for &j in s.above(i) {
            if !t.leq(phi.object_map[i], phi.object_map[j]) {
                monotone = Some(format!(
                    "`{}` -> `{}` has no image arrow",
                    s.id(i),
                    s.id(j)
                ));
                break 'mono;
            }
        }
    }
    let monotone_ok = monotone.is_none();
    checks.push(check("monotone", monotone));

    let mut meets = None;
    'meets: for x in 0..n {
        for y in (x + 1)..n {
            let m = match s.meet(x, y) {
                Ok(Some(m)) => m,
                _ => continue,
            };
            match t.meet(phi.object_map[x], phi.object_map[y]) {
                Ok(Some(m2)) if m2 == phi.object_map[m] => {}
                _ => {
                    meets = Some(format!(
                        "meet of `{}` and `{}` is not preserved",
                        s.id(x),
                        s.id(y)
                    ));
                    break 'meets;
                }
            }
        }
    }
    checks.push(check("meets", meets));

    let mut natural = None;
    if monotone_ok {
        'nat: for i in 0..n {
            for &j in s.above(i) {
                let m = s.map(i, j).unwrap();
                for v in 0..s.var(i).arity() {
                    let down_then_map = phi.value_maps[j][m[v]];
                    let map_then_down = t
                        .apply(phi.object_map[i], phi.object_map[j], phi.value_maps[i][v])
                        .unwrap();
                    if down_then_map != map_then_down {
                        natural = Some(format!(
                            "square `{}` -> `{}` fails at value `{}`",
                            s.id(i),
                            s.id(j),
                            s.var(i).values[v]
                        ));
                        break 'nat;
                    }
                }
            }
        }
    }
    checks.push(check("naturality", natural));

    let mut surjective = None;
    for i in 0..n {
        let k = phi.object_map[i];
        let mut hit = vec![false; t.var(k).arity()];
        for &v in &phi.value_maps[i] {
            hit[v] = true;
        }
        if let Some(miss) = hit.iter().position(|h| !h) {
            surjective = Some(format!(
                "value map of `{}` misses `{}`",
                s.id(i),
                t.var(k).values[miss]
            ));
            break;
        }
    }
    let surjective_ok = surjective.is_none();
    checks.push(check("surjectivity", surjective));

    let mut injective_objects = true;
    for i in 0..n {
        for j in (i + 1)..n {
            if phi.object_map[i] == phi.object_map[j] {
                injective_objects = false;
            }
        }
    }
    let bijective_values = surjective_ok
        && (0..n).all(|i| phi.value_maps[i].len() == t.var(phi.object_map[i]).arity());

    MorphismReport {
        checks,
        embedding: injective_objects && bijective_values,
    }
}

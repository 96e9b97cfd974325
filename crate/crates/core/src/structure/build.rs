use super::{Arrow, InfoStructure, Variable};
use crate::error::{Error, Result};
use crate::partition::Partition;
use std::collections::BTreeMap;

pub const TERMINAL_ID: &str = "1";
pub const PRODUCT_SEP: &str = "·";

/// A structure realized by partitions of a concrete finite ground set.
#[derive(Debug, Clone)]
pub struct ConcreteStructure {
    pub structure: InfoStructure,
    pub ground: Vec<String>,
    /// Partition of the ground set realizing each object.
    pub partitions: Vec<Partition>,
}

fn check_generator_id(id: &str) -> Result<()> {
    if id == TERMINAL_ID || id.contains(PRODUCT_SEP) {
        return Err(Error::ReservedId(id.to_string()));
    }
    Ok(())
}

fn block_label(ground: &[String], block: &[usize]) -> String {
    block
        .iter()
        .map(|&p| ground[p].as_str())
        .collect::<Vec<_>>()
        .join(",")
}

/// Builds the structure generated by named partitions of a ground set.
/// With `close` set, the object set is closed under pairwise partition
/// products; the trivial partition is always present as the terminal.
pub fn build_concrete_structure(
    ground: Vec<String>,
    generators: Vec<(String, Partition)>,
    close: bool,
) -> Result<ConcreteStructure> {
    if ground.is_empty() {
        return Err(Error::Input("empty ground set".into()));
    }
    {
        let mut seen = std::collections::BTreeSet::new();
        for g in &ground {
            if !seen.insert(g) {
                return Err(Error::Input(format!("ground point `{g}` repeated")));
            }
        }
    }

    // Objects carry the partition and the set of generators spanning them.
    let mut objects: Vec<(String, Partition, Vec<usize>)> = Vec::new();
    let mut by_partition: BTreeMap<Vec<usize>, usize> = BTreeMap::new();

    let trivial = Partition::coarsest(ground.len());
    by_partition.insert(trivial.labels().to_vec(), 0);
    objects.push((TERMINAL_ID.to_string(), trivial, Vec::new()));

    for (gi, (id, p)) in generators.into_iter().enumerate() {
        check_generator_id(&id)?;
        if p.ground_size() != ground.len() {
            return Err(Error::Input(format!(
                "partition `{id}` has ground size {} but omega has {}",
                p.ground_size(),
                ground.len()
            )));
        }
        if objects.iter().any(|(other, _, _)| *other == id) {
            return Err(Error::DuplicateId(id));
        }
        if let Some(&prev) = by_partition.get(p.labels()) {
            if !objects[prev].2.is_empty() || prev == 0 {
                return Err(Error::DuplicateGenerator(objects[prev].0.clone(), id));
            }
        }
        by_partition.insert(p.labels().to_vec(), objects.len());
        objects.push((id, p, vec![gi]));
    }

    if close {
        loop {
            let mut added = false;
            let n = objects.len();
            'pairs: for i in 1..n {
                for j in (i + 1)..n {
                    let prod = objects[i].1.product(&objects[j].1);
                    if by_partition.contains_key(prod.labels()) {
                        continue;
                    }
                    let mut span = objects[i].2.clone();
                    span.extend(objects[j].2.iter().copied());
                    span.sort_unstable();
                    span.dedup();
                    let id = {
                        let names: Vec<&str> = span
                            .iter()
                            .map(|&g| {
                                objects
                                    .iter()
                                    .find(|(_, _, s)| s.as_slice() == [g])
                                    .map(|(n, _, _)| n.as_str())
                                    .unwrap_or("?")
                            })
                            .collect();
                        names.join(PRODUCT_SEP)
                    };
                    by_partition.insert(prod.labels().to_vec(), objects.len());
                    objects.push((id, prod, span));
                    added = true;
                    break 'pairs;
                }
            }
            if !added {
                break;
            }
        }
    }

    let vars: Vec<Variable> = objects
        .iter()
        .map(|(id, p, _)| {
            let values = p
                .blocks()
                .iter()
                .map(|b| block_label(&ground, b))
                .collect();
            Variable::new(id.clone(), values)
        })
        .collect();

    let mut arrows = Vec::new();
    for i in 0..objects.len() {
        for j in 0..objects.len() {
            if i == j {
                continue;
            }
            if let Some(map) = objects[i].1.refinement_map(&objects[j].1) {
                arrows.push(Arrow { from: i, to: j, map });
            }
        }
    }

    let structure = InfoStructure::assemble(vars, arrows, 0)?;
    let partitions = objects.into_iter().map(|(_, p, _)| p).collect();
    Ok(ConcreteStructure {
        structure,
        ground,
        partitions,
    })
}

/// Builds the structure of a simplicial complex over named vertices:
/// objects are the faces plus a terminal, values are tuples over the
/// vertex alphabets, arrows forget coordinates.
pub fn build_simplicial_structure(
    vertices: Vec<(String, usize)>,
    faces: Vec<Vec<String>>,
) -> Result<InfoStructure> {
    let mut index: BTreeMap<String, usize> = BTreeMap::new();
    for (i, (id, card)) in vertices.iter().enumerate() {
        check_generator_id(id)?;
        if *card < 2 {
            return Err(Error::Input(format!(
                "vertex `{id}` has alphabet size {card}; need at least 2"
            )));
        }
        if index.insert(id.clone(), i).is_some() {
            return Err(Error::DuplicateId(id.clone()));
        }
    }

    let mut face_set: Vec<Vec<usize>> = Vec::new();
    for face in &faces {
        let mut f: Vec<usize> = face
            .iter()
            .map(|v| {
                index
                    .get(v)
                    .copied()
                    .ok_or_else(|| Error::UnknownId(v.clone()))
            })
            .collect::<Result<_>>()?;
        f.sort_unstable();
        f.dedup();
        if !f.is_empty() && !face_set.contains(&f) {
            face_set.push(f);
        }
    }
    for f in face_set.clone() {
        for mask in 1..(1u32 << f.len()) - 1 {
            let sub: Vec<usize> = f
                .iter()
                .enumerate()
                .filter(|(k, _)| mask >> k & 1 == 1)
                .map(|(_, &v)| v)
                .collect();
            if !face_set.contains(&sub) {
                let names: Vec<&str> = sub.iter().map(|&v| vertices[v].0.as_str()).collect();
                return Err(Error::Input(format!(
                    "face family not downward closed: missing {{{}}}",
                    names.join(",")
                )));
            }
        }
    }
    face_set.sort_by(|a, b| (a.len(), a.clone()).cmp(&(b.len(), b.clone())));

    let mut vars = vec![Variable::new(TERMINAL_ID, vec!["*".to_string()])];
    let mut tuples: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new()]];
    for f in &face_set {
        let id = f
            .iter()
            .map(|&v| vertices[v].0.as_str())
            .collect::<Vec<_>>()
            .join(PRODUCT_SEP);
        let mut vals: Vec<Vec<usize>> = vec![Vec::new()];
        for &v in f {
            let card = vertices[v].1;
            vals = vals
                .into_iter()
                .flat_map(|t| {
                    (0..card).map(move |c| {
                        let mut t2 = t.clone();
                        t2.push(c);
                        t2
                    })
                })
                .collect();
        }
        let labels = vals
            .iter()
            .map(|t| {
                t.iter()
                    .map(|c| c.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            })
            .collect();
        vars.push(Variable::new(id, labels));
        tuples.push(vals);
    }

    let mut arrows = Vec::new();
    for (fi, f) in face_set.iter().enumerate() {
        arrows.push(Arrow {
            from: fi + 1,
            to: 0,
            map: vec![0; tuples[fi + 1].len()],
        });
        for (gi, g) in face_set.iter().enumerate() {
            if fi == gi || !g.iter().all(|v| f.contains(v)) {
                continue;
            }
            let positions: Vec<usize> = g
                .iter()
                .map(|v| f.iter().position(|w| w == v).unwrap())
                .collect();
            let map = tuples[fi + 1]
                .iter()
                .map(|t| {
                    let sub: Vec<usize> = positions.iter().map(|&p| t[p]).collect();
                    tuples[gi + 1].iter().position(|u| *u == sub).unwrap()
                })
                .collect();
            arrows.push(Arrow {
                from: fi + 1,
                to: gi + 1,
                map,
            });
        }
    }

    InfoStructure::assemble(vars, arrows, 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_bit_ground() -> Vec<String> {
        vec!["00".into(), "01".into(), "10".into(), "11".into()]
    }

    #[test]
    fn closure_of_two_projections_has_four_objects() {
        let x1 = Partition::from_assignment(&[0, 0, 1, 1]);
        let x2 = Partition::from_assignment(&[0, 1, 0, 1]);
        let c = build_concrete_structure(
            two_bit_ground(),
            vec![("X1".into(), x1), ("X2".into(), x2)],
            true,
        )
        .unwrap();
        assert_eq!(c.structure.len(), 4);
        let joint = c.structure.index_of("X1·X2").unwrap();
        assert_eq!(c.structure.var(joint).arity(), 4);
        let x1 = c.structure.index_of("X1").unwrap();
        let x2 = c.structure.index_of("X2").unwrap();
        assert_eq!(c.structure.meet(x1, x2).unwrap(), Some(joint));
    }

    #[test]
    fn single_partition_gives_two_objects() {
        let die = Partition::finest(6);
        let ground = (1..=6).map(|i| i.to_string()).collect();
        let c = build_concrete_structure(ground, vec![("D".into(), die)], true).unwrap();
        assert_eq!(c.structure.len(), 2);
        assert_eq!(c.structure.var(c.structure.index_of("D").unwrap()).arity(), 6);
    }

    #[test]
    fn duplicate_generator_partitions_rejected() {
        let p = Partition::from_assignment(&[0, 0, 1, 1]);
        let err = build_concrete_structure(
            two_bit_ground(),
            vec![("A".into(), p.clone()), ("B".into(), p)],
            false,
        )
        .unwrap_err();
        assert!(matches!(err, Error::DuplicateGenerator(..)));
    }

    #[test]
    fn full_complex_on_three_binary_vertices_has_eight_objects() {
        let vertices = vec![("X1".into(), 2), ("X2".into(), 2), ("X3".into(), 2)];
        let faces = vec![
            vec!["X1".into()],
            vec!["X2".into()],
            vec!["X3".into()],
            vec!["X1".into(), "X2".into()],
            vec!["X1".into(), "X3".into()],
            vec!["X2".into(), "X3".into()],
            vec!["X1".into(), "X2".into(), "X3".into()],
        ];
        let s = build_simplicial_structure(vertices, faces).unwrap();
        assert_eq!(s.len(), 8);
        let top = s.index_of("X1·X2·X3").unwrap();
        assert_eq!(s.var(top).arity(), 8);
        let x12 = s.index_of("X1·X2").unwrap();
        assert_eq!(s.apply(top, x12, 5), Some(2)); // (1,0,1) -> (1,0)
    }

    #[test]
    fn missing_face_breaks_downward_closure() {
        let vertices = vec![("A".into(), 2), ("B".into(), 2)];
        let faces = vec![vec!["A".into(), "B".into()], vec!["A".into()]];
        assert!(build_simplicial_structure(vertices, faces).is_err());
    }

    #[test]
    fn single_vertex_is_a_two_object_chain() {
        let s = build_simplicial_structure(vec![("V".into(), 2)], vec![vec!["V".into()]]).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.nerve_height(), 1);
    }
}

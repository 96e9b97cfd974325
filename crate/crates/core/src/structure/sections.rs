use super::InfoStructure;

/// A compatible choice of one value per variable.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Section {
    /// `values[i]` is the chosen value index of variable `i`.
    pub values: Vec<usize>,
}

impl Section {
    /// Renders the section as `id=value` pairs in variable order.
    pub fn render(&self, s: &InfoStructure) -> String {
        self.values
            .iter()
            .enumerate()
            .map(|(i, &v)| format!("{}={}", s.id(i), s.var(i).values[v]))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

/// Enumerates all sections of the limit by depth-first assignment over
/// variables in decreasing value-count order, forward-checking every arrow
/// touching the assigned prefix. Exact and exhaustive.
pub fn limit_sections(s: &InfoStructure) -> Vec<Section> {
    let n = s.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (std::cmp::Reverse(s.var(i).arity()), i));

    let mut assigned: Vec<Option<usize>> = vec![None; n];
    let mut out = Vec::new();
    fn descend(
        s: &InfoStructure,
        order: &[usize],
        depth: usize,
        assigned: &mut Vec<Option<usize>>,
        out: &mut Vec<Section>,
    ) {
        if depth == order.len() {
            out.push(Section {
                values: assigned.iter().map(|v| v.unwrap()).collect(),
            });
            return;
        }
        let v = order[depth];
        'candidates: for x in 0..s.var(v).arity() {
            for &u in &order[..depth] {
                let su = assigned[u].unwrap();
                if let Some(sv) = s.apply(u, v, su) {
                    if u != v && sv != x {
                        continue 'candidates;
                    }
                }
                if u != v {
                    if let Some(img) = s.apply(v, u, x) {
                        if img != su {
                            continue 'candidates;
                        }
                    }
                }
            }
            assigned[v] = Some(x);
            descend(s, order, depth + 1, assigned, out);
            assigned[v] = None;
        }
    }
    descend(s, &order, 0, &mut assigned, &mut out);
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::Partition;
    use crate::structure::build_concrete_structure;

    #[test]
    fn die_structure_has_one_section_per_face() {
        let ground: Vec<String> = (1..=6).map(|i| i.to_string()).collect();
        let c =
            build_concrete_structure(ground, vec![("D".into(), Partition::finest(6))], true)
                .unwrap();
        let sections = limit_sections(&c.structure);
        assert_eq!(sections.len(), 6);
    }

    #[test]
    fn terminal_only_structure_has_one_empty_ish_section() {
        let c = build_concrete_structure(vec!["w".into()], vec![], false).unwrap();
        let sections = limit_sections(&c.structure);
        assert_eq!(sections.len(), 1);
        assert_eq!(sections[0].values, vec![0]);
    }

    #[test]
    fn four_point_one_vs_rest_structure_has_five_sections() {
        let ground: Vec<String> = (1..=4).map(|i| i.to_string()).collect();
        let x = |i: usize| {
            Partition::from_assignment(&[0, 1, 2, 3].map(|p| usize::from(p != i - 1)))
        };
        let x12 = x(1).product(&x(2));
        let x23 = x(2).product(&x(3));
        let c = build_concrete_structure(
            ground,
            vec![
                ("X1".into(), x(1)),
                ("X2".into(), x(2)),
                ("X3".into(), x(3)),
                ("X1X2".into(), x12.clone()),
                ("X2X3".into(), x23.clone()),
            ],
            false,
        )
        .unwrap();
        let s = &c.structure;
        let sections = limit_sections(s);
        let rendered: Vec<Vec<&str>> = sections
            .iter()
            .map(|sec| {
                (0..s.len())
                    .map(|i| s.var(i).values[sec.values[i]].as_str())
                    .collect()
            })
            .collect();
        let expected = vec![
            vec!["1,2,3,4", "1", "1,3,4", "1,2,4", "1", "1,4"],
            vec!["1,2,3,4", "1", "1,3,4", "3", "1", "3"],
            vec!["1,2,3,4", "2,3,4", "1,3,4", "1,2,4", "3,4", "1,4"],
            vec!["1,2,3,4", "2,3,4", "1,3,4", "3", "3,4", "3"],
            vec!["1,2,3,4", "2,3,4", "2", "1,2,4", "2", "2"],
        ];
        let mut sorted = rendered.clone();
        sorted.sort();
        assert_eq!(sorted, expected);

        // Adjoining the missing pair separates the two indistinguishable
        // points and the limit shrinks to the sample set.
        let x13 = x(1).product(&x(3));
        let c2 = build_concrete_structure(
            (1..=4).map(|i| i.to_string()).collect(),
            vec![
                ("X1".into(), x(1)),
                ("X2".into(), x(2)),
                ("X3".into(), x(3)),
                ("X1X2".into(), x12),
                ("X2X3".into(), x23),
                ("X1X3".into(), x13),
            ],
            false,
        )
        .unwrap();
        assert_eq!(limit_sections(&c2.structure).len(), 4);
    }

    #[test]
    fn sections_respect_every_arrow() {
        let ground = vec!["00".into(), "01".into(), "10".into(), "11".into()];
        let x1 = Partition::from_assignment(&[0, 0, 1, 1]);
        let x2 = Partition::from_assignment(&[0, 1, 0, 1]);
        let c = build_concrete_structure(
            ground,
            vec![("X1".into(), x1), ("X2".into(), x2)],
            true,
        )
        .unwrap();
        let s = &c.structure;
        let sections = limit_sections(s);
        assert_eq!(sections.len(), 4);
        for sec in &sections {
            for i in 0..s.len() {
                for &j in s.above(i) {
                    assert_eq!(s.apply(i, j, sec.values[i]), Some(sec.values[j]));
                }
            }
        }
    }
}

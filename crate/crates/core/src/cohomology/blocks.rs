//! Elementary blocks of a joint-value array and chains of them certifying
//! that a product of two variables pins one entropy constant.

use crate::error::{Error, Result};
use crate::prob::ProbabilityFunctor;
use crate::structure::InfoStructure;
use itertools::Itertools;
use num::rational::BigRational;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, BTreeSet};

/// Orderings with at most this many parts per side are searched exhaustively;
/// larger arrays get seeded random restarts.
pub const EXHAUSTIVE_PARTS: usize = 6;
pub const RANDOM_RESTARTS: usize = 64;

/// A chain of 2×2 elementary blocks linking the array's corners under the
/// recorded orderings. Block positions are in ordered coordinates; orders map
/// ordered positions back to original value indices.
#[derive(Debug, Clone)]
pub struct BlockChain {
    pub x: String,
    pub y: String,
    pub meet: String,
    pub row_order: Vec<usize>,
    pub col_order: Vec<usize>,
    /// Top-left ordered coordinate (r, c) of each block.
    pub blocks: Vec<(usize, usize)>,
    /// The three positions per block whose cells support a full 2-simplex.
    pub block_cells: Vec<[(usize, usize); 3]>,
    /// Shared positions between consecutive blocks (always exactly two).
    pub overlaps: Vec<[(usize, usize); 2]>,
}

/// Outcome of the ordering search.
#[derive(Debug, Clone)]
pub enum BlockSearch {
    Found(BlockChain),
    Absent,
    /// Too many parts for an exhaustive search and no restart succeeded.
    NotFound { restarts: usize },
}

impl BlockSearch {
    pub fn chain(&self) -> Option<&BlockChain> {
        match self {
            BlockSearch::Found(c) => Some(c),
            _ => None,
        }
    }
}

fn cell_atoms(s: &InfoStructure, m: usize, x: usize, y: usize) -> Vec<Vec<Vec<usize>>> {
    let to_x = s.map(m, x).expect("meet refines its factors");
    let to_y = s.map(m, y).expect("meet refines its factors");
    let mut cells = vec![vec![Vec::new(); s.var(y).arity()]; s.var(x).arity()];
    for v in 0..s.var(m).arity() {
        cells[to_x[v]][to_y[v]].push(v);
    }
    cells
}

/// Search for a chain of elementary blocks between the corners of the joint
/// array of `x` and `y`, over orderings of both sides.
pub fn nondegenerate_product_check(
    s: &InfoStructure,
    q: &ProbabilityFunctor,
    x: usize,
    y: usize,
    seed: u64,
) -> Result<BlockSearch> {
    if x == s.terminal() || y == s.terminal() {
        return Err(Error::TerminalOperand(
            "product sides must be non-terminal".into(),
        ));
    }
    let Some(m) = s.meet(x, y)? else {
        return Err(Error::MissingMeet {
            x: s.id(x).to_string(),
            y: s.id(y).to_string(),
        });
    };
    let k = s.var(x).arity();
    let l = s.var(y).arity();
    if k < 2 || l < 2 {
        return Ok(BlockSearch::Absent);
    }
    let cells = cell_atoms(s, m, x, y);
    let support = &q.supports[m];

    // Elementary-ness only depends on the two rows and two columns involved,
    // so certify every 2×2 choice once, in original coordinates.
    let mut elem: BTreeMap<((usize, usize), (usize, usize)), [(usize, usize); 3]> =
        BTreeMap::new();
    for (i1, i2) in (0..k).tuple_combinations() {
        for (j1, j2) in (0..l).tuple_combinations() {
            let positions = [(i1, j1), (i1, j2), (i2, j1), (i2, j2)];
            'omit: for omit in 0..4 {
                let chosen: Vec<(usize, usize)> = positions
                    .iter()
                    .enumerate()
                    .filter(|&(t, _)| t != omit)
                    .map(|(_, &p)| p)
                    .collect();
                let mut union = BTreeSet::new();
                for &(i, j) in &chosen {
                    if cells[i][j].is_empty() {
                        continue 'omit;
                    }
                    union.extend(cells[i][j].iter().copied());
                }
                if support.admits(&union) {
                    elem.insert(
                        ((i1, i2), (j1, j2)),
                        [chosen[0], chosen[1], chosen[2]],
                    );
                    break;
                }
            }
        }
    }
    if elem.is_empty() {
        return Ok(BlockSearch::Absent);
    }

    let try_order = |row_order: &[usize], col_order: &[usize]| -> Option<BlockChain> {
        let pair = |a: usize, b: usize| if a < b { (a, b) } else { (b, a) };
        let block_at = |r: usize, c: usize| {
            elem.get(&(
                pair(row_order[r], row_order[r + 1]),
                pair(col_order[c], col_order[c + 1]),
            ))
        };
        let start = (0usize, 0usize);
        let goal = (k - 2, l - 2);
        block_at(start.0, start.1)?;
        let mut prev: BTreeMap<(usize, usize), (usize, usize)> = BTreeMap::new();
        let mut queue = std::collections::VecDeque::from([start]);
        let mut seen = BTreeSet::from([start]);
        while let Some((r, c)) = queue.pop_front() {
            if (r, c) == goal {
                let mut path = vec![(r, c)];
                let mut cur = (r, c);
                while cur != start {
                    cur = prev[&cur];
                    path.push(cur);
                }
                path.reverse();
                return Some(assemble_chain(
                    s, x, y, m, row_order, col_order, &path, &elem,
                ));
            }
            let (r, c) = (r as isize, c as isize);
            for (dr, dc) in [(0isize, 1isize), (0, -1), (1, 0), (-1, 0)] {
                let (nr, nc) = (r + dr, c + dc);
                if nr < 0 || nc < 0 || nr as usize > k - 2 || nc as usize > l - 2 {
                    continue;
                }
                let nxt = (nr as usize, nc as usize);
                if seen.contains(&nxt) || block_at(nxt.0, nxt.1).is_none() {
                    continue;
                }
                seen.insert(nxt);
                prev.insert(nxt, (r as usize, c as usize));
                queue.push_back(nxt);
            }
        }
        None
    };

    if k <= EXHAUSTIVE_PARTS && l <= EXHAUSTIVE_PARTS {
        for rp in (0..k).permutations(k) {
            for cp in (0..l).permutations(l) {
                if let Some(chain) = try_order(&rp, &cp) {
                    return Ok(BlockSearch::Found(chain));
                }
            }
        }
        Ok(BlockSearch::Absent)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut rp: Vec<usize> = (0..k).collect();
        let mut cp: Vec<usize> = (0..l).collect();
        for _ in 0..RANDOM_RESTARTS {
            if let Some(chain) = try_order(&rp, &cp) {
                return Ok(BlockSearch::Found(chain));
            }
            rp.shuffle(&mut rng);
            cp.shuffle(&mut rng);
        }
        Ok(BlockSearch::NotFound {
            restarts: RANDOM_RESTARTS,
        })
    }
}

#[allow(clippy::too_many_arguments)]
fn assemble_chain(
    s: &InfoStructure,
    x: usize,
    y: usize,
    m: usize,
    row_order: &[usize],
    col_order: &[usize],
    path: &[(usize, usize)],
    elem: &BTreeMap<((usize, usize), (usize, usize)), [(usize, usize); 3]>,
) -> BlockChain {
    let pair = |a: usize, b: usize| if a < b { (a, b) } else { (b, a) };
    let mut block_cells = Vec::new();
    for &(r, c) in path {
        let key = (
            pair(row_order[r], row_order[r + 1]),
            pair(col_order[c], col_order[c + 1]),
        );
        // Map the certified original positions back to ordered coordinates.
        let back_r: BTreeMap<usize, usize> = [(row_order[r], r), (row_order[r + 1], r + 1)]
            .into_iter()
            .collect();
        let back_c: BTreeMap<usize, usize> = [(col_order[c], c), (col_order[c + 1], c + 1)]
            .into_iter()
            .collect();
        let cells = elem[&key];
        block_cells.push([
            (back_r[&cells[0].0], back_c[&cells[0].1]),
            (back_r[&cells[1].0], back_c[&cells[1].1]),
            (back_r[&cells[2].0], back_c[&cells[2].1]),
        ]);
    }
    let mut overlaps = Vec::new();
    for w in path.windows(2) {
        let cover = |(r, c): (usize, usize)| {
            BTreeSet::from([(r, c), (r, c + 1), (r + 1, c), (r + 1, c + 1)])
        };
        let shared: Vec<(usize, usize)> =
            cover(w[0]).intersection(&cover(w[1])).copied().collect();
        debug_assert_eq!(shared.len(), 2);
        overlaps.push([shared[0], shared[1]]);
    }
    BlockChain {
        x: s.id(x).to_string(),
        y: s.id(y).to_string(),
        meet: s.id(m).to_string(),
        row_order: row_order.to_vec(),
        col_order: col_order.to_vec(),
        blocks: path.to_vec(),
        block_cells,
        overlaps,
    }
}

/// Grid oracle for block completeness: the probability triples realized on
/// three single-atom cells at denominator bound `n` must be exactly the full
/// 2-simplex grid.
pub fn block_completeness_grid_oracle(
    s: &InfoStructure,
    q: &ProbabilityFunctor,
    m: usize,
    atoms: [usize; 3],
    n: u32,
) -> bool {
    let laws = crate::prob::enumerate_grid_laws(s, q, m, n);
    let union: BTreeSet<usize> = atoms.into_iter().collect();
    let mut seen = BTreeSet::new();
    for law in &laws {
        if law.support().is_subset(&union) {
            seen.insert((
                law.weights[atoms[0]].clone(),
                law.weights[atoms[1]].clone(),
                law.weights[atoms[2]].clone(),
            ));
        }
    }
    let mut expected = BTreeSet::new();
    for d in 1..=n as i64 {
        for a in 0..=d {
            for b in 0..=d - a {
                expected.insert((
                    BigRational::new(a.into(), d.into()),
                    BigRational::new(b.into(), d.into()),
                    BigRational::new((d - a - b).into(), d.into()),
                ));
            }
        }
    }
    seen == expected
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::Partition;
    use crate::structure::build_concrete_structure;

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
    fn full_two_by_two_array_is_one_block() {
        let c = two_binary();
        let s = &c.structure;
        let q = ProbabilityFunctor::full(s);
        let y = s.index_of("Y").unwrap();
        let z = s.index_of("Z").unwrap();
        let found = nondegenerate_product_check(s, &q, y, z, 1).unwrap();
        let chain = found.chain().expect("full array is non-degenerate");
        assert_eq!(chain.blocks.len(), 1);
        assert_eq!(chain.blocks[0], (0, 0));
        assert_eq!(chain.overlaps.len(), 0);

        let m = s.index_of("Y·Z").unwrap();
        let cells = cell_atoms(s, m, y, z);
        let atoms = [cells[0][0][0], cells[0][1][0], cells[1][0][0]];
        assert!(block_completeness_grid_oracle(s, &q, m, atoms, 3));
    }

    #[test]
    fn product_with_itself_is_degenerate() {
        let c = two_binary();
        let s = &c.structure;
        let q = ProbabilityFunctor::full(s);
        let y = s.index_of("Y").unwrap();
        match nondegenerate_product_check(s, &q, y, y, 1).unwrap() {
            BlockSearch::Absent => {}
            other => panic!("expected absent, got {other:?}"),
        }
    }

    #[test]
    fn terminal_operand_is_rejected() {
        let c = two_binary();
        let s = &c.structure;
        let q = ProbabilityFunctor::full(s);
        let y = s.index_of("Y").unwrap();
        assert!(matches!(
            nondegenerate_product_check(s, &q, s.terminal(), y, 1),
            Err(Error::TerminalOperand(_))
        ));
    }

    #[test]
    fn blocked_supports_disconnect_the_corners() {
        // X, Y quaternary; admissible supports are the two diagonal 2×2
        // blocks of the 4×4 array.
        let mut ground = Vec::new();
        for i in 0..4 {
            for j in 0..4 {
                ground.push(format!("{i}{j}"));
            }
        }
        let xs: Vec<usize> = (0..16).map(|w| w / 4).collect();
        let ys: Vec<usize> = (0..16).map(|w| w % 4).collect();
        let c = build_concrete_structure(
            ground,
            vec![
                ("X".into(), Partition::from_assignment(&xs)),
                ("Y".into(), Partition::from_assignment(&ys)),
            ],
            true,
        )
        .unwrap();
        let s = &c.structure;
        let m = s.index_of("X·Y").unwrap();
        let x = s.index_of("X").unwrap();
        let y = s.index_of("Y").unwrap();
        let block1: BTreeSet<usize> = (0..s.var(m).arity())
            .filter(|&v| {
                let i = s.apply(m, x, v).unwrap();
                let j = s.apply(m, y, v).unwrap();
                i < 2 && j < 2
            })
            .collect();
        let block2: BTreeSet<usize> = (0..s.var(m).arity())
            .filter(|&v| {
                let i = s.apply(m, x, v).unwrap();
                let j = s.apply(m, y, v).unwrap();
                i >= 2 && j >= 2
            })
            .collect();
        let q = ProbabilityFunctor::with_supports(
            s,
            vec![
                (m, vec![block1, block2]),
                (
                    x,
                    vec![BTreeSet::from([0, 1]), BTreeSet::from([2, 3])],
                ),
                (
                    y,
                    vec![BTreeSet::from([0, 1]), BTreeSet::from([2, 3])],
                ),
            ],
        )
        .unwrap();
        match nondegenerate_product_check(s, &q, x, y, 1).unwrap() {
            BlockSearch::Absent => {}
            other => panic!("expected absent, got {other:?}"),
        }

        let full = ProbabilityFunctor::full(s);
        let found = nondegenerate_product_check(s, &full, x, y, 1).unwrap();
        let chain = found.chain().expect("full 4×4 array is non-degenerate");
        assert_eq!(chain.blocks[0], (0, 0));
        assert_eq!(*chain.blocks.last().unwrap(), (2, 2));
        for w in chain.overlaps.iter() {
            assert_eq!(w.len(), 2);
        }
    }
}

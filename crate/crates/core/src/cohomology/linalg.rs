//! Rank and nullspace computations: exact reduced row echelon form over the
//! rationals, a fraction-free integer elimination as an independent rank
//! oracle, and an SVD path for the float lane.

use nalgebra::DMatrix;
use num::rational::BigRational;
use num::{BigInt, One, Signed, Zero};
use std::collections::BTreeMap;

pub type RatRow = BTreeMap<usize, BigRational>;
pub type FloatRow = BTreeMap<usize, f64>;

/// Rank and a rational nullspace basis via sparse reduced row echelon form.
/// Basis vectors are dense with a 1 in their free column.
pub fn rational_nullspace(rows: &[RatRow], ncols: usize) -> (usize, Vec<Vec<BigRational>>) {
    let mut pivots: BTreeMap<usize, RatRow> = BTreeMap::new();
    for row in rows {
        let mut r = row.clone();
        loop {
            r.retain(|_, v| !v.is_zero());
            let Some((&c, lead)) = r.iter().next() else {
                break;
            };
            let lead = lead.clone();
            match pivots.get(&c) {
                Some(p) => {
                    for (&pc, pv) in p {
                        let upd = r
                            .entry(pc)
                            .or_insert_with(|| BigRational::from_integer(0.into()));
                        *upd -= &lead * pv;
                    }
                }
                None => {
                    let inv = lead.recip();
                    let normalized: RatRow =
                        r.iter().map(|(&k, v)| (k, v * &inv)).collect();
                    pivots.insert(c, normalized);
                    break;
                }
            }
        }
    }
    // Back-substitute so pivot columns vanish from every other pivot row.
    let cols: Vec<usize> = pivots.keys().copied().collect();
    for &c in cols.iter().rev() {
        let prow = pivots[&c].clone();
        for (&c2, row2) in pivots.iter_mut() {
            if c2 == c {
                continue;
            }
            if let Some(coeff) = row2.get(&c).cloned() {
                if coeff.is_zero() {
                    continue;
                }
                for (&pc, pv) in &prow {
                    let upd = row2
                        .entry(pc)
                        .or_insert_with(|| BigRational::from_integer(0.into()));
                    *upd -= &coeff * pv;
                }
                row2.retain(|_, v| !v.is_zero());
            }
        }
    }
    let rank = pivots.len();
    let mut basis = Vec::with_capacity(ncols - rank);
    for free in 0..ncols {
        if pivots.contains_key(&free) {
            continue;
        }
        let mut v = vec![BigRational::from_integer(0.into()); ncols];
        v[free] = BigRational::from_integer(1.into());
        for (&pc, prow) in &pivots {
            if let Some(coeff) = prow.get(&free) {
                v[pc] = -coeff.clone();
            }
        }
        basis.push(v);
    }
    (rank, basis)
}

/// Rank by dense fraction-free (Bareiss) elimination over the integers,
/// independent of the echelon path above. Duplicate rows are dropped first.
pub fn bareiss_rank(rows: &[RatRow], ncols: usize) -> usize {
    let mut seen = std::collections::BTreeSet::new();
    let mut m: Vec<Vec<BigInt>> = Vec::new();
    for row in rows {
        if row.values().all(|v| v.is_zero()) {
            continue;
        }
        let mut lcm = BigInt::one();
        for v in row.values() {
            lcm = num::integer::lcm(lcm, v.denom().clone());
        }
        let mut dense = vec![BigInt::zero(); ncols];
        for (&c, v) in row {
            dense[c] = v.numer() * (&lcm / v.denom());
        }
        // Normalize by gcd and sign so duplicates collapse.
        let mut g = BigInt::zero();
        for e in &dense {
            g = num::integer::gcd(g, e.clone());
        }
        if !g.is_zero() {
            let first = dense.iter().find(|e| !e.is_zero()).unwrap().clone();
            let sign = if first.is_negative() { -g.clone() } else { g.clone() };
            for e in dense.iter_mut() {
                *e = &*e / &sign;
            }
        }
        if seen.insert(dense.clone()) {
            m.push(dense);
        }
    }
    let nrows = m.len();
    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..ncols {
        let Some(pivot_row) = (rank..nrows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot_row);
        let pivot = m[rank][col].clone();
        for r in rank + 1..nrows {
            if m[r][col].is_zero() && m[r][col + 1..].iter().all(|e| e.is_zero()) {
                continue;
            }
            for c in col + 1..ncols {
                let t = &m[r][c] * &pivot - &m[r][col] * &m[rank][c];
                m[r][c] = t / &prev;
            }
            m[r][col] = BigInt::zero();
        }
        prev = pivot;
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    rank
}

/// SVD rank and nullspace with threshold `1e−8·σ_max`; also reports the gap
/// `σ_rank / σ_{rank+1}` and whether it is suspiciously small (< 10³).
pub fn float_nullspace(
    rows: &[FloatRow],
    ncols: usize,
) -> (usize, Vec<Vec<f64>>, Option<f64>, bool) {
    let nrows = rows.len().max(ncols);
    let mut mat = DMatrix::<f64>::zeros(nrows, ncols);
    for (r, row) in rows.iter().enumerate() {
        for (&c, &v) in row {
            mat[(r, c)] = v;
        }
    }
    let svd = mat.svd(false, true);
    let vt = svd.v_t.expect("SVD with right singular vectors");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| {
        svd.singular_values[b]
            .partial_cmp(&svd.singular_values[a])
            .unwrap()
    });
    let sigma_max = order
        .first()
        .map(|&i| svd.singular_values[i])
        .unwrap_or(0.0);
    let tol = 1e-8 * sigma_max;
    let rank = order
        .iter()
        .filter(|&&i| svd.singular_values[i] > tol && sigma_max > 0.0)
        .count();
    let mut basis = Vec::new();
    for &i in order.iter().skip(rank) {
        basis.push(vt.row(i).iter().copied().collect::<Vec<f64>>());
    }
    // Right singular vectors not represented in vt (when it is thin) are
    // absent only if nrows < ncols, which padding above rules out.
    let gap = if rank > 0 && rank < order.len() {
        let lo = svd.singular_values[order[rank]];
        Some(if lo == 0.0 {
            f64::INFINITY
        } else {
            svd.singular_values[order[rank - 1]] / lo
        })
    } else {
        None
    };
    let warning = gap.map(|g| g.is_finite() && g < 1e3).unwrap_or(false);
    (rank, basis, gap, warning)
}

/// Dimension of the span of rational vectors restricted to a column subset.
pub fn projected_dimension(vectors: &[Vec<BigRational>], cols: &[usize]) -> usize {
    let rows: Vec<RatRow> = vectors
        .iter()
        .map(|v| {
            cols.iter()
                .enumerate()
                .filter_map(|(k, &c)| {
                    if v[c].is_zero() {
                        None
                    } else {
                        Some((k, v[c].clone()))
                    }
                })
                .collect()
        })
        .collect();
    let (rank, _) = rational_nullspace(&rows, cols.len());
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn rref_and_bareiss_agree_on_a_rank_two_system() {
        // x + y + z = 0 appears twice, x − z = 0 once.
        let rows = vec![
            BTreeMap::from([(0, rat(1, 1)), (1, rat(1, 1)), (2, rat(1, 1))]),
            BTreeMap::from([(0, rat(2, 1)), (1, rat(2, 1)), (2, rat(2, 1))]),
            BTreeMap::from([(0, rat(1, 1)), (2, rat(-1, 1))]),
        ];
        let (rank, basis) = rational_nullspace(&rows, 3);
        assert_eq!(rank, 2);
        assert_eq!(basis.len(), 1);
        let v = &basis[0];
        assert_eq!(v[0], v[2]);
        assert_eq!(v[1], -(v[0].clone() + v[2].clone()));
        assert_eq!(bareiss_rank(&rows, 3), 2);
    }

    #[test]
    fn nullspace_vectors_annihilate_the_rows() {
        let rows = vec![
            BTreeMap::from([(0, rat(1, 2)), (1, rat(1, 3)), (3, rat(-1, 1))]),
            BTreeMap::from([(1, rat(2, 1)), (2, rat(5, 7))]),
        ];
        let (rank, basis) = rational_nullspace(&rows, 4);
        assert_eq!(rank, 2);
        assert_eq!(basis.len(), 2);
        for v in &basis {
            for row in &rows {
                let dot: BigRational = row.iter().map(|(&c, w)| w * &v[c]).sum();
                assert!(dot.is_zero());
            }
        }
    }

    #[test]
    fn float_path_matches_exact_rank() {
        let rows_f: Vec<FloatRow> = vec![
            BTreeMap::from([(0, 1.0), (1, 1.0), (2, 1.0)]),
            BTreeMap::from([(0, 2.0), (1, 2.0), (2, 2.0)]),
            BTreeMap::from([(0, 1.0), (2, -1.0)]),
        ];
        let (rank, basis, gap, _warn) = float_nullspace(&rows_f, 3);
        assert_eq!(rank, 2);
        assert_eq!(basis.len(), 1);
        let v = &basis[0];
        assert!((v[0] - v[2]).abs() < 1e-12);
        assert!((v[1] + 2.0 * v[0]).abs() < 1e-10);
        assert!(gap.unwrap() > 1e3);
    }

    #[test]
    fn wide_systems_report_every_nullspace_direction() {
        let rows_f: Vec<FloatRow> = vec![BTreeMap::from([(0, 1.0), (4, -1.0)])];
        let (rank, basis, _, _) = float_nullspace(&rows_f, 5);
        assert_eq!(rank, 1);
        assert_eq!(basis.len(), 4);
    }

    #[test]
    fn projection_drops_directions_outside_the_window() {
        let vectors = vec![
            vec![rat(1, 1), rat(0, 1), rat(3, 1)],
            vec![rat(0, 1), rat(0, 1), rat(1, 1)],
        ];
        assert_eq!(projected_dimension(&vectors, &[0, 1]), 1);
        assert_eq!(projected_dimension(&vectors, &[0, 2]), 2);
    }
}

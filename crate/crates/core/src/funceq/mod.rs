//! The fundamental functional equation of degree-one information functions,
//! sampled on rationals of bounded denominator: system assembly, closed-form
//! solution checks, and the zero-propagation argument forcing the symmetry
//! u(x) = u(1−x) on grid rationals.

pub mod modular;

use crate::cohomology::linalg::{FloatRow, RatRow};
use crate::cohomology::SparseRows;
use crate::error::{Error, Result};
use crate::numeric::{binary_entropy, AlphaParam, LogExact, Value, Weight};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, HashSet, VecDeque};

fn ratio(num: u64, den: u64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// All reduced rationals a/b in [0,1] with denominator b ≤ bound, sorted.
/// Closed under x ↦ 1−x; contains 0, 1/2 and 1.
#[derive(Debug, Clone)]
pub struct FareyGrid {
    pub bound: u32,
    pub points: Vec<BigRational>,
    index: BTreeMap<BigRational, usize>,
}

impl FareyGrid {
    pub fn new(bound: u32) -> Result<FareyGrid> {
        if bound < 2 {
            return Err(Error::Input(format!(
                "denominator bound must be at least 2, got {bound}"
            )));
        }
        let mut points = Vec::new();
        for b in 1..=u64::from(bound) {
            for a in 0..=b {
                if num::integer::gcd(a, b) == 1 {
                    points.push(ratio(a, b));
                }
            }
        }
        points.sort();
        let index = points
            .iter()
            .enumerate()
            .map(|(i, q)| (q.clone(), i))
            .collect();
        Ok(FareyGrid {
            bound,
            points,
            index,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn index_of(&self, q: &BigRational) -> Option<usize> {
        self.index.get(q).copied()
    }

    pub fn contains(&self, q: &BigRational) -> bool {
        self.index.contains_key(q)
    }

    pub fn point(&self, k: usize) -> &BigRational {
        &self.points[k]
    }
}

/// Origin of one assembled row.
#[derive(Debug, Clone)]
pub enum FunceqRow {
    /// u(q) = 0 at an endpoint.
    Boundary(BigRational),
    /// u(1−x) + (1−x)^α u(y/(1−x)) − u(y) − (1−y)^α u((1−x−y)/(1−y)) = 0.
    Pair { x: BigRational, y: BigRational },
}

/// Linear constraints on the unknowns u(q), q running over a Farey grid.
#[derive(Debug)]
pub struct FunceqSystem {
    pub alpha: AlphaParam,
    pub grid: FareyGrid,
    pub rows: SparseRows,
    pub row_meta: Vec<FunceqRow>,
}

/// One row per grid pair (x, y) with x+y ≤ 1, x < 1, y < 1 whose conditioned
/// arguments y/(1−x) and (1−x−y)/(1−y) stay on the grid, plus the boundary
/// rows u(0) = u(1) = 0. Pairs sharing a denominator always qualify.
pub fn assemble_funceq_system(alpha: AlphaParam, bound: u32) -> Result<FunceqSystem> {
    let grid = FareyGrid::new(bound)?;
    let one = BigRational::one();
    let lane = |c: &BigRational| match alpha {
        AlphaParam::One => Weight::Rat(c.clone()),
        AlphaParam::General(a) => Weight::Float(c.to_f64().unwrap().powf(a)),
    };
    let mut rat_rows = Vec::new();
    let mut float_rows = Vec::new();
    let mut row_meta = Vec::new();
    let mut push = |terms: Vec<(usize, Weight)>, meta: FunceqRow| {
        match alpha {
            AlphaParam::One => {
                let mut row: RatRow = BTreeMap::new();
                for (col, w) in terms {
                    if let Weight::Rat(c) = w {
                        *row.entry(col).or_insert_with(BigRational::zero) += c;
                    }
                }
                row.retain(|_, v| !v.is_zero());
                if row.is_empty() {
                    return;
                }
                rat_rows.push(row);
            }
            AlphaParam::General(_) => {
                let mut row: FloatRow = BTreeMap::new();
                for (col, w) in terms {
                    *row.entry(col).or_insert(0.0) += w.to_f64();
                }
                row.retain(|_, v| *v != 0.0);
                if row.is_empty() {
                    return;
                }
                float_rows.push(row);
            }
        }
        row_meta.push(meta);
    };
    for endpoint in [BigRational::zero(), one.clone()] {
        let col = grid.index_of(&endpoint).unwrap();
        push(
            vec![(col, lane(&one))],
            FunceqRow::Boundary(endpoint.clone()),
        );
    }
    for x in &grid.points {
        if *x >= one {
            continue;
        }
        let cx = &one - x;
        for y in &grid.points {
            if *y >= one || x + y > one {
                continue;
            }
            let cy = &one - y;
            let second = y / &cx;
            let fourth = (&cx - y) / &cy;
            if second.denom().to_u32().map_or(true, |d| d > bound)
                || fourth.denom().to_u32().map_or(true, |d| d > bound)
            {
                continue;
            }
            let terms = vec![
                (grid.index_of(&cx).unwrap(), lane(&one)),
                (grid.index_of(&second).unwrap(), lane(&cx)),
                (
                    grid.index_of(y).unwrap(),
                    match lane(&one) {
                        Weight::Rat(c) => Weight::Rat(-c),
                        Weight::Float(c) => Weight::Float(-c),
                    },
                ),
                (
                    grid.index_of(&fourth).unwrap(),
                    match lane(&cy) {
                        Weight::Rat(c) => Weight::Rat(-c),
                        Weight::Float(c) => Weight::Float(-c),
                    },
                ),
            ];
            push(
                terms,
                FunceqRow::Pair {
                    x: x.clone(),
                    y: y.clone(),
                },
            );
        }
    }
    let rows = match alpha {
        AlphaParam::One => SparseRows::Rat(rat_rows),
        AlphaParam::General(_) => SparseRows::Float(float_rows),
    };
    Ok(FunceqSystem {
        alpha,
        grid,
        rows,
        row_meta,
    })
}

/// The binary entropy sampled at every grid point: exact at α = 1.
pub fn entropy_sample(grid: &FareyGrid, alpha: AlphaParam) -> Vec<Value> {
    grid.points
        .iter()
        .map(|q| binary_entropy(alpha, q))
        .collect()
}

/// How badly a sample vector u violates the assembled rows.
#[derive(Debug, Clone)]
pub struct FunceqResidual {
    pub max_residual: f64,
    pub exact: bool,
    pub exact_zero: bool,
    /// Worst row, rendered from its origin.
    pub witness: Option<String>,
}

impl FunceqResidual {
    pub fn passes_within(&self, tol: f64) -> bool {
        if self.exact {
            self.exact_zero
        } else {
            self.max_residual <= tol
        }
    }
}

fn describe_row(meta: &FunceqRow) -> String {
    match meta {
        FunceqRow::Boundary(q) => format!("boundary u({q}) = 0"),
        FunceqRow::Pair { x, y } => format!("pair x={x}, y={y}"),
    }
}

/// Evaluate every row on a sample of u; exact on the α = 1 lane.
pub fn funceq_residual(sys: &FunceqSystem, sample: &[Value]) -> Result<FunceqResidual> {
    if sample.len() != sys.grid.len() {
        return Err(Error::Input(format!(
            "sample has {} entries for {} grid points",
            sample.len(),
            sys.grid.len()
        )));
    }
    let mut max_residual = 0.0f64;
    let mut exact = true;
    let mut exact_zero = true;
    let mut witness = None;
    let mut note = |row_idx: usize, mag: f64, zero: bool, meta: &[FunceqRow]| {
        if !zero && (mag >= max_residual || witness.is_none()) {
            max_residual = mag.max(max_residual);
            witness = Some(describe_row(&meta[row_idx]));
        }
    };
    match &sys.rows {
        SparseRows::Rat(rows) => {
            for (i, row) in rows.iter().enumerate() {
                let mut acc = LogExact::zero();
                for (&col, coeff) in row {
                    match &sample[col] {
                        Value::Exact(v) => acc = &acc + &v.scale(coeff),
                        Value::Float(_) => {
                            return Err(Error::Input(
                                "float sample evaluated against exact rows".into(),
                            ))
                        }
                    }
                }
                let zero = acc.is_zero();
                exact_zero &= zero;
                note(i, if zero { 0.0 } else { acc.to_f64().abs() }, zero, &sys.row_meta);
            }
        }
        SparseRows::Float(rows) => {
            exact = false;
            exact_zero = false;
            for (i, row) in rows.iter().enumerate() {
                let acc: f64 = row.iter().map(|(&col, c)| c * sample[col].to_f64()).sum();
                note(i, acc.abs(), acc == 0.0, &sys.row_meta);
            }
        }
    }
    Ok(FunceqResidual {
        max_residual,
        exact,
        exact_zero: exact && exact_zero,
        witness,
    })
}

/// The unique measurable solution with u(1/2) = K:
/// K/(2^{1−α}−1) · (x^α + (1−x)^α − 1) for α ≠ 1, (K/ln 2) · s₁(x) at α = 1.
pub fn closed_form(alpha: AlphaParam, k: f64, x: f64) -> f64 {
    match alpha {
        AlphaParam::One => {
            let s = |p: f64| if p <= 0.0 || p >= 1.0 { 0.0 } else { -p * p.ln() };
            k / std::f64::consts::LN_2 * (s(x) + s(1.0 - x))
        }
        AlphaParam::General(a) => {
            let pow = |p: f64| if p <= 0.0 { 0.0 } else { p.powf(a) };
            k / (2f64.powf(1.0 - a) - 1.0) * (pow(x) + pow(1.0 - x) - 1.0)
        }
    }
}

#[derive(Debug, Clone)]
pub struct ClosedFormReport {
    pub alpha: AlphaParam,
    pub k: f64,
    pub samples: usize,
    pub max_residual: f64,
    /// u(1/2), which must reproduce K.
    pub half_value: f64,
}

impl ClosedFormReport {
    pub fn passes_within(&self, tol: f64) -> bool {
        self.max_residual <= tol && (self.half_value - self.k).abs() <= tol
    }
}

/// Evaluate the symmetric equation
/// u(x) + (1−x)^α u(y/(1−x)) = u(y) + (1−y)^α u(x/(1−y))
/// on random admissible pairs and report the worst residual.
pub fn closed_form_check(
    alpha: AlphaParam,
    k: f64,
    samples: usize,
    seed: u64,
) -> ClosedFormReport {
    let a = alpha.value();
    let u = |x: f64| closed_form(alpha, k, x);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_residual = 0.0f64;
    for _ in 0..samples {
        let x: f64 = rng.gen();
        let y: f64 = rng.gen::<f64>() * (1.0 - x);
        let lhs = u(x) + (1.0 - x).powf(a) * u(y / (1.0 - x));
        let rhs = u(y) + (1.0 - y).powf(a) * u(x / (1.0 - y));
        max_residual = max_residual.max((lhs - rhs).abs());
    }
    ClosedFormReport {
        alpha,
        k,
        samples,
        max_residual,
        half_value: u(0.5),
    }
}

/// Outcome of zero-propagation for h(x) := u(x) − u(1−x).
#[derive(Debug, Clone)]
pub struct PropagationReport {
    pub alpha: AlphaParam,
    pub bound: u32,
    pub ambient: u32,
    /// Grid points of FareyGrid(bound) forced to zero at the given ambient.
    pub forced: Vec<BigRational>,
    pub coverage: f64,
    pub full: bool,
    /// Smallest ambient on the doubling ladder bound·2^k, k ≤ 6, that forces
    /// the whole grid; None means inconclusive up to 64·bound.
    pub minimal_ambient: Option<u32>,
}

/// Mod-1 representative of a reduced fraction num/den in [0,1).
fn rep(num: u64, den: u64) -> (u64, u64) {
    (num % den, den)
}

/// Closure of {0} under x ↦ (2x−1)/x, x ↦ (1−x)/x, their inverses and
/// periodicity, kept inside denominators ≤ ambient, as reduced mod-1 classes.
/// The forward maps send a/b to denominator a < b, so they never leave the
/// ambient grid; the inverse maps are kept only when their denominators fit.
fn propagate(ambient: u64) -> HashSet<(u64, u64)> {
    let mut seen: HashSet<(u64, u64)> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert((0, 1));
    queue.push_back((0u64, 1u64));
    while let Some((a, b)) = queue.pop_front() {
        debug_assert!(b <= ambient && a < b && num::integer::gcd(a.max(1), b) == 1);
        let push = |p: (u64, u64), seen: &mut HashSet<(u64, u64)>,
                        queue: &mut VecDeque<(u64, u64)>| {
            if seen.insert(p) {
                queue.push_back(p);
            }
        };
        if a > 0 {
            push(((a - b % a) % a, a), &mut seen, &mut queue);
            push((b % a, a), &mut seen, &mut queue);
        }
        if 2 * b - a <= ambient {
            push(rep(b, 2 * b - a), &mut seen, &mut queue);
        }
        if a + b <= ambient {
            push(rep(b, a + b), &mut seen, &mut queue);
        }
    }
    seen
}

fn forces_all(grid: &FareyGrid, ambient: u64) -> (HashSet<(u64, u64)>, bool) {
    let closure = propagate(ambient);
    let full = grid.points.iter().all(|q| {
        let num = q.numer().to_u64().unwrap();
        let den = q.denom().to_u64().unwrap();
        closure.contains(&rep(num, den))
    });
    (closure, full)
}

/// BFS closure of {0, 1} under the two h-relations and periodicity inside
/// FareyGrid(ambient), reported against FareyGrid(bound). The α parameter
/// only tags the report: zero-propagation is insensitive to the exponent.
pub fn symmetry_propagation(
    alpha: AlphaParam,
    bound: u32,
    ambient: u32,
) -> Result<PropagationReport> {
    if ambient < bound {
        return Err(Error::Input(format!(
            "ambient denominator bound {ambient} is below the grid bound {bound}"
        )));
    }
    let grid = FareyGrid::new(bound)?;
    let (closure, full) = forces_all(&grid, u64::from(ambient));
    let forced: Vec<BigRational> = grid
        .points
        .iter()
        .filter(|q| {
            let num = q.numer().to_u64().unwrap();
            let den = q.denom().to_u64().unwrap();
            closure.contains(&rep(num, den))
        })
        .cloned()
        .collect();
    let coverage = forced.len() as f64 / grid.len() as f64;
    let mut minimal_ambient = None;
    for k in 0..=6u32 {
        let m = bound << k;
        if forces_all(&grid, u64::from(m)).1 {
            minimal_ambient = Some(m);
            break;
        }
    }
    Ok(PropagationReport {
        alpha,
        bound,
        ambient,
        forced,
        coverage,
        full,
        minimal_ambient,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::parse_rational;

    #[test]
    fn grid_is_symmetric_and_contains_the_landmarks() {
        let g = FareyGrid::new(5).unwrap();
        assert_eq!(g.len(), 11);
        for q in &g.points {
            assert!(g.contains(&(BigRational::one() - q)));
        }
        for landmark in ["0", "1/2", "1"] {
            assert!(g.contains(&parse_rational(landmark).unwrap()));
        }
    }

    #[test]
    fn smallest_grid_carries_only_the_boundary_rows() {
        let sys = assemble_funceq_system(AlphaParam::One, 2).unwrap();
        assert_eq!(sys.grid.len(), 3);
        let boundary = sys
            .row_meta
            .iter()
            .filter(|m| matches!(m, FunceqRow::Boundary(_)))
            .count();
        assert_eq!(boundary, 2);
        let sample = entropy_sample(&sys.grid, AlphaParam::One);
        let res = funceq_residual(&sys, &sample).unwrap();
        assert!(res.exact && res.exact_zero);
    }

    #[test]
    fn entropy_satisfies_every_row_exactly_at_alpha_one() {
        let sys = assemble_funceq_system(AlphaParam::One, 6).unwrap();
        assert!(sys.rows.len() > sys.grid.len());
        let sample = entropy_sample(&sys.grid, AlphaParam::One);
        let res = funceq_residual(&sys, &sample).unwrap();
        assert!(res.exact_zero, "worst row: {:?}", res.witness);
    }

    #[test]
    fn entropy_satisfies_every_row_numerically_at_other_alphas() {
        for a in [0.5, 2.0] {
            let alpha = AlphaParam::new(a).unwrap();
            let sys = assemble_funceq_system(alpha, 6).unwrap();
            let sample = entropy_sample(&sys.grid, alpha);
            let res = funceq_residual(&sys, &sample).unwrap();
            assert!(res.passes_within(1e-10), "alpha {a}: {res:?}");
        }
    }

    #[test]
    fn a_skewed_sample_leaves_a_residual() {
        let sys = assemble_funceq_system(AlphaParam::One, 4).unwrap();
        let sample: Vec<Value> = sys
            .grid
            .points
            .iter()
            .map(|q| Value::from_rat(q * q))
            .collect();
        let res = funceq_residual(&sys, &sample).unwrap();
        assert!(!res.exact_zero);
        assert!(res.witness.is_some());
    }

    #[test]
    fn closed_forms_solve_the_symmetric_equation() {
        let two = AlphaParam::new(2.0).unwrap();
        let quadratic = closed_form_check(two, 1.0, 1000, 7);
        assert!((closed_form(two, 1.0, 0.25) - 4.0 * 0.25 * 0.75).abs() < 1e-12);
        assert!((closed_form(two, 0.5, 0.25) - 2.0 * 0.25 * 0.75).abs() < 1e-12);
        assert!(quadratic.passes_within(1e-10), "{quadratic:?}");
        let shannon = closed_form_check(AlphaParam::One, std::f64::consts::LN_2, 1000, 7);
        assert!(shannon.passes_within(1e-10), "{shannon:?}");
        let skew = closed_form_check(AlphaParam::new(0.5).unwrap(), 2.0, 1000, 7);
        assert!(skew.passes_within(1e-10), "{skew:?}");
    }

    #[test]
    fn half_is_forced_in_one_step_from_zero() {
        let closure = propagate(2);
        assert!(closure.contains(&(1, 2)));
    }

    #[test]
    fn propagation_is_monotone_in_the_ambient_bound() {
        let small = propagate(8);
        let large = propagate(16);
        assert!(small.is_subset(&large));
    }

    #[test]
    fn the_five_grid_is_fully_forced() {
        let rep = symmetry_propagation(AlphaParam::One, 5, 5 * 64).unwrap();
        assert!(rep.full, "coverage {}", rep.coverage);
        assert_eq!(rep.forced.len(), 11);
        let minimal = rep.minimal_ambient.expect("ladder must succeed");
        assert_eq!(minimal, 10);
        let again = symmetry_propagation(AlphaParam::One, 5, minimal).unwrap();
        assert!(again.full);
    }
}

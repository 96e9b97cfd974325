//! Degree-0 and degree-1 cohomology on grids: the constraint system carved
//! out by the cocycle identity, its nullspace dimensions, and the structural
//! prediction machinery.

pub mod blocks;
pub mod fit;
pub mod linalg;
pub mod predict;

use crate::cochain::Cochain;
use crate::context::GridContext;
use crate::error::{Error, Result};
use crate::numeric::{entropy, AlphaParam, LogExact, Value, Weight};
use linalg::{FloatRow, RatRow};
use num::rational::BigRational;
use num::{ToPrimitive, Zero};
use std::collections::BTreeMap;

/// Dimension of degree-0 cocycles: constants annihilated by the coboundary.
#[derive(Debug, Clone)]
pub struct H0Report {
    pub dimension: usize,
    /// A non-Dirac law obstructing constants when the dimension is 0.
    pub obstruction: Option<(String, String)>,
}

pub fn h0_dimension(ctx: &GridContext, alpha: AlphaParam) -> H0Report {
    if alpha.is_one() {
        return H0Report {
            dimension: 1,
            obstruction: None,
        };
    }
    for x in ctx.s.non_terminal() {
        for law in &ctx.laws[x] {
            if !law.is_dirac() {
                return H0Report {
                    dimension: 0,
                    obstruction: Some((ctx.s.id(x).to_string(), law.key())),
                };
            }
        }
    }
    H0Report {
        dimension: 1,
        obstruction: None,
    }
}

/// Sparse rows of the cocycle constraints, exact or float depending on α.
#[derive(Debug, Clone)]
pub enum SparseRows {
    Rat(Vec<RatRow>),
    Float(Vec<FloatRow>),
}

impl SparseRows {
    pub fn len(&self) -> usize {
        match self {
            SparseRows::Rat(r) => r.len(),
            SparseRows::Float(r) => r.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// The grid-sampled linear system cutting out degree-1 cocycles. Unknowns
/// are pairs (non-terminal variable, grid law); one row per ordered pair
/// (Y, Z) with a meet, per grid law on the meet, stating
/// `f[YZ](P) − f[Z](Z∗P) − Σ_z P(z)^α f[Y](Y∗(P|_{Z=z})) = 0`.
#[derive(Debug)]
pub struct Z1System {
    pub alpha: AlphaParam,
    pub bound: u32,
    pub columns: Vec<(usize, usize)>,
    pub col_of: BTreeMap<(usize, usize), usize>,
    /// Ordered pairs (y, z, meet), diagonal included.
    pub pairs: Vec<(usize, usize, usize)>,
    pub rows: SparseRows,
    /// Per row: (pair index, law index on the meet).
    pub row_meta: Vec<(usize, usize)>,
}

pub fn assemble_z1_system(ctx: &GridContext, alpha: AlphaParam) -> Z1System {
    let mut columns = Vec::new();
    let mut col_of = BTreeMap::new();
    for x in ctx.s.non_terminal() {
        for k in 0..ctx.law_count(x) {
            col_of.insert((x, k), columns.len());
            columns.push((x, k));
        }
    }
    let mut pairs = Vec::new();
    for y in ctx.s.non_terminal() {
        for z in ctx.s.non_terminal() {
            if let Ok(Some(m)) = ctx.s.meet(y, z) {
                pairs.push((y, z, m));
            }
        }
    }
    let mut rat_rows = Vec::new();
    let mut float_rows = Vec::new();
    let mut row_meta = Vec::new();
    for (pi, &(y, z, m)) in pairs.iter().enumerate() {
        for k in 0..ctx.law_count(m) {
            let mut exact: RatRow = BTreeMap::new();
            let mut float: FloatRow = BTreeMap::new();
            let one = BigRational::from_integer(1.into());
            let mut add = |col: usize, w: Weight| match &w {
                Weight::Rat(c) => {
                    let e = exact
                        .entry(col)
                        .or_insert_with(|| BigRational::from_integer(0.into()));
                    *e += c;
                }
                Weight::Float(c) => {
                    *float.entry(col).or_insert(0.0) += c;
                }
            };
            let lane = |c: BigRational| match alpha {
                AlphaParam::One => Weight::Rat(c),
                AlphaParam::General(_) => Weight::Float(c.to_f64().unwrap()),
            };
            add(col_of[&(m, k)], lane(one.clone()));
            add(col_of[&(z, ctx.marginal_index(m, k, z))], lane(-one));
            for (w, kt) in ctx.action_terms(alpha, m, k, z, y) {
                let neg = match w {
                    Weight::Rat(c) => Weight::Rat(-c),
                    Weight::Float(c) => Weight::Float(-c),
                };
                add(col_of[&(y, kt)], neg);
            }
            match alpha {
                AlphaParam::One => {
                    exact.retain(|_, v| !v.is_zero());
                    rat_rows.push(exact);
                }
                AlphaParam::General(_) => {
                    float.retain(|_, v| *v != 0.0);
                    float_rows.push(float);
                }
            }
            row_meta.push((pi, k));
        }
    }
    let rows = match alpha {
        AlphaParam::One => SparseRows::Rat(rat_rows),
        AlphaParam::General(_) => SparseRows::Float(float_rows),
    };
    Z1System {
        alpha,
        bound: ctx.bound,
        columns,
        col_of,
        pairs,
        rows,
        row_meta,
    }
}

/// How badly a degree-1 cochain violates the assembled constraints.
#[derive(Debug, Clone)]
pub struct SystemResidual {
    pub max_residual: f64,
    pub exact: bool,
    pub exact_zero: bool,
    /// Worst row: (Y id, Z id, law key on the meet).
    pub witness: Option<(String, String, String)>,
}

impl SystemResidual {
    pub fn passes_within(&self, tol: f64) -> bool {
        if self.exact {
            self.exact_zero
        } else {
            self.max_residual <= tol
        }
    }
}

/// Evaluate every row of the system on a degree-1 cochain; exact on the α=1
/// lane (formal logarithms), floating point otherwise.
pub fn system_residual(sys: &Z1System, ctx: &GridContext, f: &Cochain) -> Result<SystemResidual> {
    if f.degree != 1 {
        return Err(Error::Input(format!(
            "system residual needs a degree-1 cochain, got degree {}",
            f.degree
        )));
    }
    let value_at = |col: usize| -> &Value {
        let (x, k) = sys.columns[col];
        f.value(&[x], k)
    };
    let mut max_residual = 0.0f64;
    let mut exact = true;
    let mut exact_zero = true;
    let mut witness = None;
    let mut note = |row_idx: usize, mag: f64, zero: bool, sys: &Z1System| {
        if !zero && (mag >= max_residual || witness.is_none()) {
            max_residual = mag.max(max_residual);
            let (pi, k) = sys.row_meta[row_idx];
            let (y, z, m) = sys.pairs[pi];
            witness = Some((
                ctx.s.id(y).to_string(),
                ctx.s.id(z).to_string(),
                ctx.law(m, k).key(),
            ));
        }
    };
    match &sys.rows {
        SparseRows::Rat(rows) => {
            for (i, row) in rows.iter().enumerate() {
                let mut acc = LogExact::zero();
                for (&col, coeff) in row {
                    match value_at(col) {
                        Value::Exact(v) => acc = &acc + &v.scale(coeff),
                        Value::Float(_) => {
                            return Err(Error::Input(
                                "float cochain evaluated against exact rows".into(),
                            ))
                        }
                    }
                }
                let zero = acc.is_zero();
                exact_zero &= zero;
                note(i, if zero { 0.0 } else { acc.to_f64().abs() }, zero, sys);
            }
        }
        SparseRows::Float(rows) => {
            exact = false;
            exact_zero = false;
            for (i, row) in rows.iter().enumerate() {
                let acc: f64 = row.iter().map(|(&col, c)| c * value_at(col).to_f64()).sum();
                note(i, acc.abs(), acc == 0.0, sys);
            }
        }
    }
    Ok(SystemResidual {
        max_residual,
        exact,
        exact_zero: exact && exact_zero,
        witness,
    })
}

/// Grid dimensions of Z¹, B¹ and H¹, with the nullspace basis used to get
/// them and float-lane conditioning diagnostics.
#[derive(Debug)]
pub struct GridDimensions {
    pub alpha: AlphaParam,
    pub bound: u32,
    pub unknowns: usize,
    pub rows: usize,
    pub rank: usize,
    pub z1: usize,
    pub b1: usize,
    pub h1: usize,
    pub basis: NullspaceBasis,
    pub sigma_gap: Option<f64>,
    pub gap_warning: bool,
}

#[derive(Debug)]
pub enum NullspaceBasis {
    Rat(Vec<Vec<BigRational>>),
    Float(Vec<Vec<f64>>),
}

impl NullspaceBasis {
    pub fn len(&self) -> usize {
        match self {
            NullspaceBasis::Rat(b) => b.len(),
            NullspaceBasis::Float(b) => b.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        match self {
            NullspaceBasis::Rat(b) => b
                .iter()
                .map(|v| v.iter().map(|q| q.to_f64().unwrap()).collect())
                .collect(),
            NullspaceBasis::Float(b) => b.clone(),
        }
    }
}

pub fn z1_h1_dimensions(sys: &Z1System, ctx: &GridContext) -> GridDimensions {
    let ncols = sys.columns.len();
    let (rank, basis, sigma_gap, gap_warning) = match &sys.rows {
        SparseRows::Rat(rows) => {
            let (rank, basis) = linalg::rational_nullspace(rows, ncols);
            (rank, NullspaceBasis::Rat(basis), None, false)
        }
        SparseRows::Float(rows) => {
            let (rank, basis, gap, warn) = linalg::float_nullspace(rows, ncols);
            (rank, NullspaceBasis::Float(basis), gap, warn)
        }
    };
    let z1 = ncols - rank;
    let b1 = match sys.alpha {
        AlphaParam::One => 0,
        AlphaParam::General(_) => {
            let nonzero = sys.columns.iter().any(|&(x, k)| {
                !entropy(sys.alpha, &ctx.law(x, k).weights).is_zero_within(1e-12)
            });
            usize::from(nonzero && z1 > 0)
        }
    };
    GridDimensions {
        alpha: sys.alpha,
        bound: sys.bound,
        unknowns: ncols,
        rows: sys.rows.len(),
        rank,
        z1,
        b1,
        h1: z1 - b1,
        basis,
        sigma_gap,
        gap_warning,
    }
}

/// Independent exact rank for the α=1 lane (fraction-free elimination).
pub fn exact_rank_oracle(sys: &Z1System) -> Result<usize> {
    match &sys.rows {
        SparseRows::Rat(rows) => Ok(linalg::bareiss_rank(rows, sys.columns.len())),
        SparseRows::Float(_) => Err(Error::Input(
            "exact rank oracle applies to the exact lane only".into(),
        )),
    }
}

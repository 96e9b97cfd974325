//! Cochains on an information structure: tables of values over grid laws,
//! the twisted monoid action, the coboundary, and residual checks.

pub mod bar;
pub mod semidirect;

use crate::context::GridContext;
use crate::error::{Error, Result};
use crate::numeric::{entropy, AlphaParam, Value};
use crate::structure::{InfoStructure, StructureMorphism};
use num::rational::BigRational;
use rand::Rng;
use std::collections::BTreeMap;

/// Default highest degree materialized by `coboundary`.
pub const DEFAULT_DEGREE_CAP: usize = 3;

/// Values of one generator tuple, indexed by the grid laws of its meet.
#[derive(Debug, Clone)]
pub struct Table {
    pub meet: usize,
    pub values: Vec<Value>,
}

/// A degree-`n` cochain: one table per ordered tuple of `n` non-terminal
/// variables whose meet exists. Degree 0 is the single empty tuple over the
/// terminal, i.e. a constant.
#[derive(Debug, Clone)]
pub struct Cochain {
    pub degree: usize,
    pub alpha: AlphaParam,
    pub tables: BTreeMap<Vec<usize>, Table>,
}

/// Ordered tuples of non-terminal variables with existing meets, paired with
/// the meet. Degree 0 yields the empty tuple over the terminal.
pub fn cochain_tuples(s: &InfoStructure, degree: usize) -> Vec<(Vec<usize>, usize)> {
    if degree == 0 {
        return vec![(Vec::new(), s.terminal())];
    }
    let vars = s.non_terminal();
    let mut out = Vec::new();
    let mut stack: Vec<(Vec<usize>, usize)> = vars.iter().map(|&x| (vec![x], x)).collect();
    stack.reverse();
    while let Some((tuple, meet)) = stack.pop() {
        if tuple.len() == degree {
            out.push((tuple, meet));
            continue;
        }
        for &x in vars.iter().rev() {
            if let Ok(Some(m)) = s.meet(meet, x) {
                let mut t = tuple.clone();
                t.push(x);
                stack.push((t, m));
            }
        }
    }
    out.sort();
    out
}

impl Cochain {
    pub fn zero(ctx: &GridContext, alpha: AlphaParam, degree: usize) -> Cochain {
        let tables = cochain_tuples(ctx.s, degree)
            .into_iter()
            .map(|(t, m)| {
                let values = vec![Value::zero(alpha); ctx.law_count(m)];
                (t, Table { meet: m, values })
            })
            .collect();
        Cochain {
            degree,
            alpha,
            tables,
        }
    }

    pub fn value(&self, tuple: &[usize], law: usize) -> &Value {
        &self
            .tables
            .get(tuple)
            .expect("cochain domain is closed under faces")
            .values[law]
    }

    /// Tuples in lexicographic order with their meets.
    pub fn domain(&self) -> impl Iterator<Item = (&Vec<usize>, &Table)> {
        self.tables.iter()
    }
}

/// The cochain whose degree-1 tables hold the entropy of each grid law.
pub fn entropy_cochain(ctx: &GridContext, alpha: AlphaParam) -> Cochain {
    let mut f = Cochain::zero(ctx, alpha, 1);
    for table in f.tables.values_mut() {
        for (k, v) in table.values.iter_mut().enumerate() {
            *v = entropy(alpha, &ctx.law(table.meet, k).weights);
        }
    }
    f
}

/// A cochain with independent pseudo-random entries: small rationals on the
/// exact lane, uniform floats otherwise.
pub fn random_cochain<R: Rng>(
    ctx: &GridContext,
    alpha: AlphaParam,
    degree: usize,
    rng: &mut R,
) -> Cochain {
    let mut f = Cochain::zero(ctx, alpha, degree);
    for table in f.tables.values_mut() {
        for v in table.values.iter_mut() {
            *v = if alpha.is_one() {
                let num: i64 = rng.gen_range(-9..=9);
                let den: i64 = rng.gen_range(1..=9);
                Value::from_rat(BigRational::new(num.into(), den.into()))
            } else {
                Value::Float(rng.gen_range(-1.0..1.0))
            };
        }
    }
    f
}

/// Evaluate the twisted action `(y.f)[tuple]` at law `k` of `var`; `var`
/// must refine both `y` and the tuple's meet.
pub fn act(ctx: &GridContext, f: &Cochain, tuple: &[usize], y: usize, var: usize, k: usize) -> Value {
    let table = f
        .tables
        .get(tuple)
        .expect("cochain domain is closed under faces");
    let mut acc = Value::zero(f.alpha);
    for (w, kt) in ctx.action_terms(f.alpha, var, k, y, table.meet) {
        acc = acc.add(&table.values[kt].scale_weight(&w));
    }
    acc
}

/// The coboundary `δf`, refusing degrees above `cap`.
pub fn coboundary_capped(ctx: &GridContext, f: &Cochain, cap: usize) -> Result<Cochain> {
    let target = f.degree + 1;
    if target > cap {
        return Err(Error::DegreeCap(target, cap));
    }
    let mut out = Cochain::zero(ctx, f.alpha, target);
    for (tuple, table) in out.tables.iter_mut() {
        let m = table.meet;
        let lead_tuple = &tuple[1..];
        let last_tuple = &tuple[..target - 1];
        let last_meet = f
            .tables
            .get(last_tuple)
            .expect("cochain domain is closed under faces")
            .meet;
        let merged: Vec<Vec<usize>> = (1..target)
            .map(|pos| {
                let mut t: Vec<usize> = Vec::with_capacity(target - 1);
                t.extend_from_slice(&tuple[..pos - 1]);
                let m2 = ctx
                    .s
                    .meet(tuple[pos - 1], tuple[pos])
                    .expect("meets of domain tuples exist")
                    .expect("meets of domain tuples exist");
                t.push(m2);
                t.extend_from_slice(&tuple[pos + 1..]);
                t
            })
            .collect();
        for k in 0..table.values.len() {
            let mut acc = act(ctx, f, lead_tuple, tuple[0], m, k);
            for (pos, mt) in merged.iter().enumerate() {
                let v = f.value(mt, k);
                acc = if pos % 2 == 0 { acc.sub(v) } else { acc.add(v) };
            }
            let vlast = f.value(last_tuple, ctx.marginal_index(m, k, last_meet));
            acc = if target % 2 == 0 {
                acc.add(vlast)
            } else {
                acc.sub(vlast)
            };
            table.values[k] = acc;
        }
    }
    Ok(out)
}

/// `δf` with the default degree cap.
pub fn coboundary(ctx: &GridContext, f: &Cochain) -> Result<Cochain> {
    coboundary_capped(ctx, f, DEFAULT_DEGREE_CAP)
}

/// Where and how badly a coboundary fails to vanish.
#[derive(Debug, Clone)]
pub struct ResidualReport {
    pub degree: usize,
    pub max_residual: f64,
    pub exact: bool,
    pub exact_zero: bool,
    pub witness: Option<ResidualWitness>,
}

#[derive(Debug, Clone)]
pub struct ResidualWitness {
    pub tuple: Vec<String>,
    pub law: String,
    pub value: f64,
}

impl ResidualReport {
    pub fn is_cocycle_within(&self, tol: f64) -> bool {
        if self.exact {
            self.exact_zero
        } else {
            self.max_residual <= tol
        }
    }
}

/// Max-norm of `δf` over every tuple and grid law, with the worst witness.
pub fn cocycle_residual(ctx: &GridContext, f: &Cochain) -> Result<ResidualReport> {
    let df = coboundary_capped(ctx, f, f.degree + 1)?;
    Ok(summarize_residual(ctx, &df))
}

/// Residual summary of an already-computed cochain (e.g. a coboundary).
pub fn summarize_residual(ctx: &GridContext, df: &Cochain) -> ResidualReport {
    let mut max_residual = 0.0f64;
    let mut exact = true;
    let mut exact_zero = true;
    let mut witness = None;
    for (tuple, table) in df.domain() {
        for (k, v) in table.values.iter().enumerate() {
            exact &= v.is_exact();
            let zero = v.is_zero_within(0.0);
            exact_zero &= zero;
            let mag = if zero { 0.0 } else { v.to_f64().abs() };
            if mag > max_residual || (witness.is_none() && !zero) {
                max_residual = mag.max(max_residual);
                witness = Some(ResidualWitness {
                    tuple: tuple.iter().map(|&x| ctx.s.id(x).to_string()).collect(),
                    law: ctx.law(table.meet, k).key(),
                    value: v.to_f64(),
                });
            }
        }
    }
    ResidualReport {
        degree: df.degree,
        max_residual,
        exact,
        exact_zero: exact && exact_zero,
        witness,
    }
}

/// Pull a cochain back along a morphism whose value maps are bijections.
pub fn pullback_cochain(
    phi: &StructureMorphism,
    ctx_src: &GridContext,
    ctx_tgt: &GridContext,
    f: &Cochain,
) -> Result<Cochain> {
    let mut out = Cochain::zero(ctx_src, f.alpha, f.degree);
    for (tuple, table) in out.tables.iter_mut() {
        let mapped: Vec<usize> = tuple.iter().map(|&x| phi.object_map[x]).collect();
        if mapped.iter().any(|&x| x == ctx_tgt.s.terminal()) && f.degree > 0 {
            return Err(Error::InvalidMorphism(
                "pullback needs tuple entries to stay non-terminal".into(),
            ));
        }
        let m_src = table.meet;
        let m_tgt = if f.degree == 0 {
            ctx_tgt.s.terminal()
        } else {
            phi.object_map[m_src]
        };
        let vm = &phi.value_maps[m_src];
        let arity_tgt = ctx_tgt.s.var(m_tgt).arity();
        let mut seen = vec![false; arity_tgt];
        for &t in vm {
            if t >= arity_tgt || seen[t] {
                return Err(Error::InvalidMorphism(format!(
                    "value map of `{}` is not a bijection",
                    ctx_src.s.id(m_src)
                )));
            }
            seen[t] = true;
        }
        if vm.len() != arity_tgt {
            return Err(Error::InvalidMorphism(format!(
                "value map of `{}` is not a bijection",
                ctx_src.s.id(m_src)
            )));
        }
        for (k, slot) in table.values.iter_mut().enumerate() {
            let p = ctx_src.law(m_src, k);
            let mut weights = vec![BigRational::from_integer(0.into()); arity_tgt];
            for (v, w) in p.weights.iter().enumerate() {
                weights[vm[v]] = w.clone();
            }
            let q = crate::prob::RationalLaw::new(ctx_tgt.s, m_tgt, weights)?;
            let kt = ctx_tgt.find(&q).ok_or_else(|| {
                Error::NotAdapted(format!(
                    "transported law ({}) is off the target grid",
                    q.key()
                ))
            })?;
            *slot = f.value(&mapped, kt).clone();
        }
    }
    Ok(out)
}

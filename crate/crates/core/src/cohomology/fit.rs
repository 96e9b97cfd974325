//! Least-squares decomposition of cocycles (or nullspace vectors) into
//! per-component entropy multiples.

use super::GridDimensions;
use crate::cochain::Cochain;
use crate::context::GridContext;
use crate::error::{Error, Result};
use crate::numeric::{entropy, AlphaParam};
use crate::structure::InfoStructure;
use nalgebra::{DMatrix, DVector};

pub const DEFAULT_FIT_TOL: f64 = 1e-10;

/// Fit of one or more vectors against a fixed set of directions.
#[derive(Debug, Clone)]
pub struct FitReport {
    pub directions: usize,
    /// One λ per direction, per fitted vector.
    pub lambdas: Vec<Vec<f64>>,
    /// Relative residual per fitted vector.
    pub residuals: Vec<f64>,
    pub explained: Vec<bool>,
    pub tol: f64,
}

impl FitReport {
    pub fn all_explained(&self) -> bool {
        self.explained.iter().all(|&e| e)
    }

    pub fn explained_fraction(&self) -> f64 {
        if self.explained.is_empty() {
            return 1.0;
        }
        self.explained.iter().filter(|&&e| e).count() as f64 / self.explained.len() as f64
    }
}

/// One direction per connected component: the entropy of each grid law on
/// the component's variables, zero elsewhere.
pub fn entropy_directions(
    ctx: &GridContext,
    alpha: AlphaParam,
    columns: &[(usize, usize)],
    components: &[Vec<usize>],
) -> Vec<Vec<f64>> {
    let member: Vec<std::collections::BTreeSet<usize>> = components
        .iter()
        .map(|c| c.iter().copied().collect())
        .collect();
    member
        .iter()
        .map(|objs| {
            columns
                .iter()
                .map(|&(x, k)| {
                    if objs.contains(&x) {
                        entropy(alpha, &ctx.law(x, k).weights).to_f64()
                    } else {
                        0.0
                    }
                })
                .collect()
        })
        .collect()
}

/// Least-squares fit of each vector against the directions; the residual is
/// relative to the vector's norm.
pub fn fit_directions(vectors: &[Vec<f64>], directions: &[Vec<f64>], tol: f64) -> FitReport {
    let ncols = directions
        .first()
        .or_else(|| vectors.first())
        .map(|d| d.len())
        .unwrap_or(0);
    let d = DMatrix::<f64>::from_fn(ncols, directions.len(), |r, c| directions[c][r]);
    let svd = if directions.is_empty() || ncols == 0 {
        None
    } else {
        Some(d.clone().svd(true, true))
    };
    let mut lambdas = Vec::new();
    let mut residuals = Vec::new();
    let mut explained = Vec::new();
    for v in vectors {
        let b = DVector::<f64>::from_column_slice(v);
        let norm = b.norm();
        let lambda = match &svd {
            Some(svd) => svd.solve(&b, 1e-12).expect("SVD solve"),
            None => DVector::<f64>::zeros(directions.len()),
        };
        let residual_vec = &b - &d * &lambda;
        let residual = if norm == 0.0 {
            0.0
        } else {
            residual_vec.norm() / norm
        };
        lambdas.push(lambda.iter().copied().collect());
        residuals.push(residual);
        explained.push(residual <= tol);
    }
    FitReport {
        directions: directions.len(),
        lambdas,
        residuals,
        explained,
        tol,
    }
}

/// Flatten a degree-1 cochain into the column layout of an assembled system.
pub fn cochain_vector(f: &Cochain, columns: &[(usize, usize)]) -> Result<Vec<f64>> {
    if f.degree != 1 {
        return Err(Error::Input(format!(
            "expected a degree-1 cochain, got degree {}",
            f.degree
        )));
    }
    Ok(columns
        .iter()
        .map(|&(x, k)| f.value(&[x], k).to_f64())
        .collect())
}

/// Fit one cochain against the per-component entropy directions.
pub fn fit_entropy_multiples(
    ctx: &GridContext,
    alpha: AlphaParam,
    f: &Cochain,
    columns: &[(usize, usize)],
    components: &[Vec<usize>],
    tol: f64,
) -> Result<FitReport> {
    let dirs = entropy_directions(ctx, alpha, columns, components);
    let v = cochain_vector(f, columns)?;
    Ok(fit_directions(&[v], &dirs, tol))
}

/// Fit every nullspace basis vector against the entropy directions.
pub fn fit_nullspace(
    ctx: &GridContext,
    alpha: AlphaParam,
    dims: &GridDimensions,
    columns: &[(usize, usize)],
    s: &InfoStructure,
    tol: f64,
) -> FitReport {
    let components = crate::structure::components(s);
    let dirs = entropy_directions(ctx, alpha, columns, &components);
    fit_directions(&dims.basis.to_f64(), &dirs, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cochain::entropy_cochain;
    use num::ToPrimitive;
    use crate::cohomology::{assemble_z1_system, z1_h1_dimensions};
    use crate::partition::Partition;
    use crate::prob::ProbabilityFunctor;
    use crate::structure::{build_concrete_structure, components};

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
    fn scaled_entropy_fits_with_the_scale_as_lambda() {
        let c = two_binary();
        let s = &c.structure;
        let q = ProbabilityFunctor::full(s);
        let ctx = GridContext::new(s, &q, 3).unwrap();
        let sys = assemble_z1_system(&ctx, AlphaParam::One);
        let f = entropy_cochain(&ctx, AlphaParam::One);
        let mut v = cochain_vector(&f, &sys.columns).unwrap();
        for e in v.iter_mut() {
            *e *= 2.5;
        }
        let comps = components(s);
        assert_eq!(comps.len(), 1);
        let dirs = entropy_directions(&ctx, AlphaParam::One, &sys.columns, &comps);
        let rep = fit_directions(&[v], &dirs, DEFAULT_FIT_TOL);
        assert!((rep.lambdas[0][0] - 2.5).abs() < 1e-12);
        assert!(rep.residuals[0] <= 1e-12);
        assert!(rep.all_explained());
    }

    #[test]
    fn entropy_lies_in_the_span_of_the_grid_nullspace() {
        let c = two_binary();
        let s = &c.structure;
        let q = ProbabilityFunctor::full(s);
        let ctx = GridContext::new(s, &q, 3).unwrap();
        let sys = assemble_z1_system(&ctx, AlphaParam::One);
        let dims = z1_h1_dimensions(&sys, &ctx);
        let rep = fit_nullspace(&ctx, AlphaParam::One, &dims, &sys.columns, s, DEFAULT_FIT_TOL);
        assert_eq!(rep.explained.len(), dims.z1);
        let fraction = rep.explained_fraction();
        assert!((0.0..=1.0).contains(&fraction));

        // The grid at small denominators keeps directions beyond entropy,
        // but the entropy vector itself must be inside the nullspace span.
        let f = entropy_cochain(&ctx, AlphaParam::One);
        let v = cochain_vector(&f, &sys.columns).unwrap();
        let basis = dims.basis.to_f64();
        let back = fit_directions(&[v], &basis, 1e-8);
        assert!(back.all_explained(), "residuals {:?}", back.residuals);
    }

    #[test]
    fn non_entropy_shapes_leave_a_residual()  {
        let c = two_binary();
        let s = &c.structure;
        let q = ProbabilityFunctor::full(s);
        let ctx = GridContext::new(s, &q, 3).unwrap();
        let sys = assemble_z1_system(&ctx, AlphaParam::One);
        let comps = components(s);
        let dirs = entropy_directions(&ctx, AlphaParam::One, &sys.columns, &comps);
        // g(p) = p(1−p) vanishes at the corners but is no entropy multiple.
        let v: Vec<f64> = sys
            .columns
            .iter()
            .map(|&(x, k)| {
                let w = &ctx.law(x, k).weights;
                let p = w[0].to_f64().unwrap();
                if ctx.s.var(x).arity() == 2 {
                    p * (1.0 - p)
                } else {
                    0.0
                }
            })
            .collect();
        let rep = fit_directions(&[v], &dirs, DEFAULT_FIT_TOL);
        assert!(rep.residuals[0] > 1e-3);
        assert!(!rep.all_explained());
    }
}

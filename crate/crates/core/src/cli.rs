//! Batch front-end: structure files in, JSON reports and text summaries out.
//!
//! Exit codes: 0 on success, 1 when a structural claim and a numerical
//! computation disagree, 2 on input errors.

use crate::cochain::{cocycle_residual, entropy_cochain, ResidualReport};
use crate::cohomology::fit::{fit_nullspace, FitReport};
use crate::cohomology::predict::{concordance, predict_h1, H1Prediction};
use crate::cohomology::{
    assemble_z1_system, exact_rank_oracle, h0_dimension, system_residual, z1_h1_dimensions,
    GridDimensions, SystemResidual,
};
use crate::context::GridContext;
use crate::error::Result;
use crate::funceq::modular::{modular_group_check, orbit_witness, OrbitWitness};
use crate::funceq::{
    assemble_funceq_system, closed_form_check, entropy_sample, funceq_residual,
    symmetry_propagation, FareyGrid,
};
use crate::io::{parse_spec, parse_spec_unvalidated};
use crate::numeric::AlphaParam;
use crate::prob::check_adapted;
use crate::report::{cochain_json, fmt_sig12, sig12, Envelope};
use crate::structure::{
    check_model, coproduct_structure, embed_coproduct_into_product, induced_model,
    limit_sections, product_structure, validate_morphism, validate_structure, AxiomCheck,
    MorphismReport,
};
use clap::{Parser, Subcommand, ValueEnum};
use num::integer::gcd;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value as Json};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "infocoh", version, about = "Cohomological information analysis on probability grids")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Entropy orders to evaluate, comma separated.
    #[arg(
        long,
        global = true,
        value_delimiter = ',',
        default_value = "1",
        allow_negative_numbers = true
    )]
    pub alpha: Vec<f64>,

    /// Denominator bound of the probability grid.
    #[arg(long = "N", global = true, default_value_t = 3)]
    pub bound: u32,

    /// Tolerance for floating-point residual checks.
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tol: f64,

    /// Stdout format; the JSON report is identical in both.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Seed for randomized searches.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Also write the JSON report to this path.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the structure axioms and grid adaptedness of a file.
    Validate { input: PathBuf },
    /// List the sections of the inverse limit.
    Limit { input: PathBuf },
    /// Reconstruct a classical model over the sections and verify it.
    Model { input: PathBuf },
    /// Build the product of two structures and verify the projections.
    Product { left: PathBuf, right: PathBuf },
    /// Build the coproduct of two structures and verify the injections.
    Coproduct { left: PathBuf, right: PathBuf },
    /// Tabulate the entropy cochain on the grid.
    Entropy { input: PathBuf },
    /// Verify that the entropy cochain satisfies the cocycle equations.
    CocycleCheck { input: PathBuf },
    /// Dimension of the invariant 0-cochains on the grid.
    H0 { input: PathBuf },
    /// Assemble the cocycle system and report its grid dimensions.
    Z1 { input: PathBuf },
    /// Grid dimensions, structural prediction, and their concordance.
    H1 { input: PathBuf },
    /// Structural prediction of the first cohomology.
    PredictH1 { input: PathBuf },
    /// Fit nullspace vectors as per-component entropy multiples.
    FitLambda { input: PathBuf },
    /// Analyze the binary functional equation on the Farey grid.
    Funceq,
    /// Verify the homography generator identities.
    ModularCheck,
    /// Generator word reaching p/q from 0 on the rational line.
    Orbit {
        #[arg(allow_negative_numbers = true)]
        p: i64,
        #[arg(allow_negative_numbers = true)]
        q: i64,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Validate { .. } => "validate",
            Command::Limit { .. } => "limit",
            Command::Model { .. } => "model",
            Command::Product { .. } => "product",
            Command::Coproduct { .. } => "coproduct",
            Command::Entropy { .. } => "entropy",
            Command::CocycleCheck { .. } => "cocycle-check",
            Command::H0 { .. } => "h0",
            Command::Z1 { .. } => "z1",
            Command::H1 { .. } => "h1",
            Command::PredictH1 { .. } => "predict-h1",
            Command::FitLambda { .. } => "fit-lambda",
            Command::Funceq => "funceq",
            Command::ModularCheck => "modular-check",
            Command::Orbit { .. } => "orbit",
        }
    }

    fn inputs(&self) -> Vec<String> {
        let show = |p: &Path| p.display().to_string();
        match self {
            Command::Validate { input }
            | Command::Limit { input }
            | Command::Model { input }
            | Command::Entropy { input }
            | Command::CocycleCheck { input }
            | Command::H0 { input }
            | Command::Z1 { input }
            | Command::H1 { input }
            | Command::PredictH1 { input }
            | Command::FitLambda { input } => vec![show(input)],
            Command::Product { left, right } | Command::Coproduct { left, right } => {
                vec![show(left), show(right)]
            }
            Command::Funceq | Command::ModularCheck => Vec::new(),
            Command::Orbit { p, q } => vec![format!("{p}/{q}")],
        }
    }

    fn method(&self) -> &'static str {
        match self {
            Command::Validate { .. } => "exhaustive axiom checks; grid adaptedness by enumeration",
            Command::Limit { .. } => "exhaustive section enumeration with forward checking",
            Command::Model { .. } => "section-induced partitions with naturality checks",
            Command::Product { .. } | Command::Coproduct { .. } => {
                "categorical construction with morphism verification"
            }
            Command::Entropy { .. } => "exact logarithmic bookkeeping at alpha=1, floats otherwise",
            Command::CocycleCheck { .. } => "coboundary over all grid laws, exact at alpha=1",
            Command::H0 { .. } => "exact invariance scan over grid laws",
            Command::Z1 { .. } => {
                "sparse exact elimination at alpha=1 (Bareiss oracle), SVD otherwise"
            }
            Command::H1 { .. } => "grid nullspace + structural prediction + entropy fit",
            Command::PredictH1 { .. } => "minimal-object factorization search",
            Command::FitLambda { .. } => "least-squares fit of nullspace vectors per component",
            Command::Funceq => "Farey-grid linear system, symmetry propagation, closed forms",
            Command::ModularCheck => "projective integer matrix identities",
            Command::Orbit { .. } => "Euclidean word construction with projective verification",
        }
    }
}

pub struct Outcome {
    pub report: Json,
    pub summary: String,
    pub exit: i32,
}

fn alpha_params(cli: &Cli) -> Result<Vec<AlphaParam>> {
    cli.alpha.iter().map(|&a| AlphaParam::new(a)).collect()
}

fn checks_json(checks: &[AxiomCheck]) -> Json {
    Json::Array(
        checks
            .iter()
            .map(|c| json!({"name": c.name, "pass": c.pass, "witness": c.witness}))
            .collect(),
    )
}

fn morphism_json(r: &MorphismReport) -> Json {
    json!({
        "checks": checks_json(&r.checks),
        "all_pass": r.all_pass(),
        "embedding": r.embedding,
    })
}

fn residual_json(r: &ResidualReport, tol: f64) -> Json {
    json!({
        "degree": r.degree,
        "max_residual": fmt_sig12(r.max_residual),
        "exact": r.exact,
        "exact_zero": r.exact_zero,
        "pass": r.is_cocycle_within(tol),
        "witness": r.witness.as_ref().map(|w| json!({
            "tuple": w.tuple,
            "law": w.law,
            "value": fmt_sig12(w.value),
        })),
    })
}

fn system_residual_json(r: &SystemResidual, tol: f64) -> Json {
    json!({
        "max_residual": fmt_sig12(r.max_residual),
        "exact": r.exact,
        "exact_zero": r.exact_zero,
        "pass": r.passes_within(tol),
        "witness": r.witness.as_ref().map(|(y, z, law)| json!([y, z, law])),
    })
}

fn dims_json(d: &GridDimensions) -> Json {
    json!({
        "unknowns": d.unknowns,
        "rows": d.rows,
        "rank": d.rank,
        "z1": d.z1,
        "b1": d.b1,
        "h1": d.h1,
        "sigma_gap": d.sigma_gap.map(sig12),
        "gap_warning": d.gap_warning,
    })
}

fn prediction_json(p: &H1Prediction) -> Json {
    match p {
        H1Prediction::Finite {
            components,
            dimension,
            factorizations,
        } => json!({
            "verdict": "finite",
            "components": components,
            "dimension": dimension,
            "factorizations": factorizations.iter().map(|(id, c)| json!({
                "minimal": id,
                "factors": [c.x, c.y],
                "blocks": c.blocks.len(),
            })).collect::<Vec<_>>(),
        }),
        H1Prediction::Infinite {
            minimal,
            chain,
            conditioning,
            value,
            witness_law,
        } => json!({
            "verdict": "infinite",
            "minimal": minimal,
            "chain": chain,
            "conditioning": conditioning,
            "value": value,
            "witness_law": witness_law,
        }),
        H1Prediction::Unknown { reason } => json!({"verdict": "unknown", "reason": reason}),
    }
}

fn prediction_text(p: &H1Prediction) -> String {
    match p {
        H1Prediction::Finite {
            components,
            dimension,
            ..
        } => format!("finite, dimension {dimension} ({components} component(s))"),
        H1Prediction::Infinite {
            minimal, witness_law, ..
        } => format!("infinite (irreducible `{minimal}`, witness law {witness_law})"),
        H1Prediction::Unknown { reason } => format!("unknown ({reason})"),
    }
}

fn fit_json(fit: &FitReport) -> Json {
    json!({
        "directions": fit.directions,
        "lambdas": fit.lambdas.iter()
            .map(|row| row.iter().map(|&x| sig12(x)).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
        "residuals": fit.residuals.iter().map(|&x| sig12(x)).collect::<Vec<_>>(),
        "explained": fit.explained,
        "explained_fraction": fit.explained_fraction(),
    })
}

fn pass_word(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

type Piece = (Json, String, i32);

fn cmd_validate(cli: &Cli, input: &Path) -> Result<Piece> {
    let (s, q) = parse_spec_unvalidated(input)?;
    let rep = validate_structure(&s);
    let mut text = String::new();
    for c in &rep.checks {
        writeln!(text, "{} {}", pass_word(c.pass), c.name).unwrap();
        if let Some(w) = &c.witness {
            writeln!(text, "  witness: {w}").unwrap();
        }
    }
    let mut exit = 0;
    let adapted = if rep.all_pass() {
        let a = check_adapted(&s, &q, cli.bound)?;
        writeln!(
            text,
            "{} Q adapted at N={} ({} laws checked)",
            pass_word(a.adapted),
            cli.bound,
            a.checked_laws
        )
        .unwrap();
        if let Some(w) = &a.witness {
            writeln!(text, "  witness: {w}").unwrap();
        }
        if !a.adapted {
            exit = 2;
        }
        json!({"pass": a.adapted, "checked_laws": a.checked_laws, "witness": a.witness})
    } else {
        exit = 2;
        Json::Null
    };
    writeln!(text, "objects: {}, height: {}", s.len(), rep.height).unwrap();
    let payload = json!({
        "objects": s.len(),
        "height": rep.height,
        "all_pass": rep.all_pass(),
        "checks": checks_json(&rep.checks),
        "adapted": adapted,
    });
    Ok((payload, text, exit))
}

fn cmd_limit(input: &Path) -> Result<Piece> {
    let (s, _) = parse_spec(input)?;
    let sections = limit_sections(&s);
    let rendered: Vec<String> = sections.iter().map(|sec| sec.render(&s)).collect();
    let mut text = format!("sections: {}\n", rendered.len());
    for r in &rendered {
        writeln!(text, "  ({r})").unwrap();
    }
    Ok((json!({"count": rendered.len(), "sections": rendered}), text, 0))
}

fn cmd_model(input: &Path) -> Result<Piece> {
    let (s, _) = parse_spec(input)?;
    let rep = induced_model(&s);
    match rep.model {
        Some(m) => {
            let check = check_model(&s, &m);
            let exit = i32::from(!check.all_pass());
            let text = format!(
                "{} faithful model over {} sections (injective {}, bijections {}, natural {}, meets {})\n",
                pass_word(check.all_pass()),
                rep.section_count,
                check.injective_on_objects,
                check.value_bijections,
                check.natural,
                check.meets_to_products,
            );
            let payload = json!({
                "faithful": true,
                "sections": rep.section_count,
                "checks": {
                    "injective_on_objects": check.injective_on_objects,
                    "value_bijections": check.value_bijections,
                    "natural": check.natural,
                    "meets_to_products": check.meets_to_products,
                    "witness": check.witness,
                },
                "all_pass": check.all_pass(),
            });
            Ok((payload, text, exit))
        }
        None => {
            let (a, b) = rep.collision.clone().expect("collision when no model");
            let text = format!(
                "no faithful model: `{a}` and `{b}` induce the same partition of {} sections\n",
                rep.section_count
            );
            let payload = json!({
                "faithful": false,
                "sections": rep.section_count,
                "collision": [a, b],
            });
            Ok((payload, text, 0))
        }
    }
}

fn cmd_product(left: &Path, right: &Path) -> Result<Piece> {
    let (s1, _) = parse_spec(left)?;
    let (s2, _) = parse_spec(right)?;
    let prod = product_structure(&s1, &s2)?;
    let r1 = validate_morphism(&prod.proj1, &prod.structure, &s1);
    let r2 = validate_morphism(&prod.proj2, &prod.structure, &s2);
    let pass = r1.all_pass() && r2.all_pass();
    let text = format!(
        "{} product: {} x {} objects -> {} objects; projections valid: {}, {}\n",
        pass_word(pass),
        s1.len(),
        s2.len(),
        prod.structure.len(),
        r1.all_pass(),
        r2.all_pass(),
    );
    let payload = json!({
        "left_objects": s1.len(),
        "right_objects": s2.len(),
        "objects": prod.structure.len(),
        "proj1": morphism_json(&r1),
        "proj2": morphism_json(&r2),
    });
    Ok((payload, text, i32::from(!pass)))
}

fn cmd_coproduct(left: &Path, right: &Path) -> Result<Piece> {
    let (s1, _) = parse_spec(left)?;
    let (s2, _) = parse_spec(right)?;
    let cop = coproduct_structure(&s1, &s2)?;
    let r1 = validate_morphism(&cop.inj1, &s1, &cop.structure);
    let r2 = validate_morphism(&cop.inj2, &s2, &cop.structure);
    let prod = product_structure(&s1, &s2)?;
    let phi = embed_coproduct_into_product(&s1, &s2, &cop, &prod);
    let re = validate_morphism(&phi, &cop.structure, &prod.structure);
    let pass = r1.all_pass() && r2.all_pass() && re.all_pass();
    let text = format!(
        "{} coproduct: {} + {} objects -> {} objects; injections valid: {}, {}; embeds into product: {}\n",
        pass_word(pass),
        s1.len(),
        s2.len(),
        cop.structure.len(),
        r1.all_pass(),
        r2.all_pass(),
        re.all_pass() && re.embedding,
    );
    let payload = json!({
        "left_objects": s1.len(),
        "right_objects": s2.len(),
        "objects": cop.structure.len(),
        "inj1": morphism_json(&r1),
        "inj2": morphism_json(&r2),
        "embedding_into_product": morphism_json(&re),
    });
    Ok((payload, text, i32::from(!pass)))
}

fn cmd_entropy(cli: &Cli, input: &Path) -> Result<Piece> {
    let (s, q) = parse_spec(input)?;
    let ctx = GridContext::new(&s, &q, cli.bound)?;
    let mut per_alpha = Vec::new();
    let mut text = String::new();
    for &alpha in &alpha_params(cli)? {
        let f = entropy_cochain(&ctx, alpha);
        let values: usize = f.tables.values().map(|t| t.values.len()).sum();
        writeln!(
            text,
            "alpha={alpha}: 1-cochain on {} objects, {values} grid values",
            f.tables.len()
        )
        .unwrap();
        per_alpha.push(cochain_json(&ctx, &f));
    }
    Ok((json!({"cochains": per_alpha}), text, 0))
}

fn cmd_cocycle_check(cli: &Cli, input: &Path) -> Result<Piece> {
    let (s, q) = parse_spec(input)?;
    let ctx = GridContext::new(&s, &q, cli.bound)?;
    let mut per_alpha = Vec::new();
    let mut text = String::new();
    let mut exit = 0;
    for &alpha in &alpha_params(cli)? {
        let f = entropy_cochain(&ctx, alpha);
        let r = cocycle_residual(&ctx, &f)?;
        let pass = r.is_cocycle_within(cli.tol);
        if !pass {
            exit = 1;
        }
        writeln!(
            text,
            "{} alpha={alpha}: max residual {}{}",
            pass_word(pass),
            fmt_sig12(r.max_residual),
            if r.exact_zero { " (exactly zero)" } else { "" },
        )
        .unwrap();
        let mut entry = residual_json(&r, cli.tol);
        entry["alpha"] = json!(alpha.value());
        per_alpha.push(entry);
    }
    Ok((json!({"residuals": per_alpha}), text, exit))
}

fn cmd_h0(cli: &Cli, input: &Path) -> Result<Piece> {
    let (s, q) = parse_spec(input)?;
    let ctx = GridContext::new(&s, &q, cli.bound)?;
    let mut per_alpha = Vec::new();
    let mut text = String::new();
    for &alpha in &alpha_params(cli)? {
        let rep = h0_dimension(&ctx, alpha);
        match &rep.obstruction {
            Some((var, law)) => writeln!(
                text,
                "alpha={alpha}: dimension {} (constants obstructed by {law} on `{var}`)",
                rep.dimension
            )
            .unwrap(),
            None => writeln!(text, "alpha={alpha}: dimension {}", rep.dimension).unwrap(),
        }
        per_alpha.push(json!({
            "alpha": alpha.value(),
            "dimension": rep.dimension,
            "obstruction": rep.obstruction.as_ref().map(|(v, l)| json!([v, l])),
        }));
    }
    Ok((json!({"dimensions": per_alpha}), text, 0))
}

fn cmd_z1(cli: &Cli, input: &Path) -> Result<Piece> {
    let (s, q) = parse_spec(input)?;
    let ctx = GridContext::new(&s, &q, cli.bound)?;
    let mut per_alpha = Vec::new();
    let mut text = String::new();
    let mut exit = 0;
    for &alpha in &alpha_params(cli)? {
        let sys = assemble_z1_system(&ctx, alpha);
        let dims = z1_h1_dimensions(&sys, &ctx);
        let f = entropy_cochain(&ctx, alpha);
        let res = system_residual(&sys, &ctx, &f)?;
        let pass = res.passes_within(cli.tol);
        let oracle = if alpha.is_one() {
            Some(exact_rank_oracle(&sys)?)
        } else {
            None
        };
        let agrees = oracle.map(|r| r == dims.rank);
        if !pass || agrees == Some(false) {
            exit = 1;
        }
        writeln!(
            text,
            "{} alpha={alpha}: unknowns {}, rank {}, z1 {}, b1 {}, h1 {}; entropy residual {}{}",
            pass_word(pass && agrees != Some(false)),
            dims.unknowns,
            dims.rank,
            dims.z1,
            dims.b1,
            dims.h1,
            fmt_sig12(res.max_residual),
            match agrees {
                Some(true) => "; rank oracle agrees",
                Some(false) => "; rank oracle DISAGREES",
                None => "",
            },
        )
        .unwrap();
        if dims.gap_warning {
            writeln!(text, "  warning: small singular-value gap").unwrap();
        }
        let mut entry = dims_json(&dims);
        entry["alpha"] = json!(alpha.value());
        entry["entropy_residual"] = system_residual_json(&res, cli.tol);
        entry["rank_oracle"] = json!(oracle);
        entry["oracle_agrees"] = json!(agrees);
        per_alpha.push(entry);
    }
    Ok((json!({"systems": per_alpha}), text, exit))
}

fn cmd_h1(cli: &Cli, input: &Path) -> Result<Piece> {
    let (s, q) = parse_spec(input)?;
    let ctx = GridContext::new(&s, &q, cli.bound)?;
    let mut per_alpha = Vec::new();
    let mut text = String::new();
    let mut exit = 0;
    for &alpha in &alpha_params(cli)? {
        let sys = assemble_z1_system(&ctx, alpha);
        let dims = z1_h1_dimensions(&sys, &ctx);
        let f = entropy_cochain(&ctx, alpha);
        let res = system_residual(&sys, &ctx, &f)?;
        let in_nullspace = res.passes_within(cli.tol);
        let prediction = predict_h1(&s, &q, alpha, cli.seed)?;
        let fit = fit_nullspace(&ctx, alpha, &dims, &sys.columns, &s, cli.tol);
        let conc = concordance(&prediction, &dims, &fit);
        if !conc.consistent || !in_nullspace {
            exit = 1;
        }
        writeln!(
            text,
            "{} alpha={alpha}: prediction {}; grid z1 {}, h1 {}; entropy in nullspace: {} (residual {}); basis explained {}/{}",
            pass_word(conc.consistent && in_nullspace),
            prediction_text(&prediction),
            dims.z1,
            dims.h1,
            in_nullspace,
            fmt_sig12(res.max_residual),
            fit.explained.iter().filter(|&&e| e).count(),
            fit.explained.len(),
        )
        .unwrap();
        per_alpha.push(json!({
            "alpha": alpha.value(),
            "grid": dims_json(&dims),
            "entropy_residual": system_residual_json(&res, cli.tol),
            "prediction": prediction_json(&prediction),
            "fit": fit_json(&fit),
            "concordance": {
                "structural": conc.structural,
                "verdict": conc.verdict,
                "grid_h1": conc.grid_h1,
                "all_explained": conc.all_explained,
                "consistent": conc.consistent,
            },
        }));
    }
    Ok((json!({"analyses": per_alpha}), text, exit))
}

fn cmd_predict_h1(cli: &Cli, input: &Path) -> Result<Piece> {
    let (s, q) = parse_spec(input)?;
    let mut per_alpha = Vec::new();
    let mut text = String::new();
    for &alpha in &alpha_params(cli)? {
        let prediction = predict_h1(&s, &q, alpha, cli.seed)?;
        writeln!(text, "alpha={alpha}: {}", prediction_text(&prediction)).unwrap();
        let mut entry = prediction_json(&prediction);
        entry["alpha"] = json!(alpha.value());
        per_alpha.push(entry);
    }
    Ok((json!({"predictions": per_alpha}), text, 0))
}

fn cmd_fit_lambda(cli: &Cli, input: &Path) -> Result<Piece> {
    let (s, q) = parse_spec(input)?;
    let ctx = GridContext::new(&s, &q, cli.bound)?;
    let mut per_alpha = Vec::new();
    let mut text = String::new();
    for &alpha in &alpha_params(cli)? {
        let sys = assemble_z1_system(&ctx, alpha);
        let dims = z1_h1_dimensions(&sys, &ctx);
        let fit = fit_nullspace(&ctx, alpha, &dims, &sys.columns, &s, cli.tol);
        writeln!(
            text,
            "alpha={alpha}: {} basis vector(s) fitted against {} entropy direction(s); {} explained (fraction {})",
            fit.explained.len(),
            fit.directions,
            fit.explained.iter().filter(|&&e| e).count(),
            fmt_sig12(fit.explained_fraction()),
        )
        .unwrap();
        for (i, (lams, res)) in fit.lambdas.iter().zip(&fit.residuals).enumerate() {
            let shown: Vec<String> = lams.iter().map(|&x| fmt_sig12(x)).collect();
            writeln!(
                text,
                "  direction {i}: lambda [{}], residual {}",
                shown.join(", "),
                fmt_sig12(*res)
            )
            .unwrap();
        }
        let mut entry = fit_json(&fit);
        entry["alpha"] = json!(alpha.value());
        entry["z1"] = json!(dims.z1);
        per_alpha.push(entry);
    }
    Ok((json!({"fits": per_alpha}), text, 0))
}

fn orbit_sample_json(w: &OrbitWitness) -> Json {
    json!({
        "target": format!("{}/{}", w.target.0, w.target.1),
        "matrix": w.matrix.to_string(),
        "word_length": w.word.len(),
        "maps_zero_to_target": w.maps_zero_to_target(),
        "word_matches": w.word_matches(),
    })
}

fn cmd_funceq(cli: &Cli) -> Result<Piece> {
    let alphas = alpha_params(cli)?;
    let mut text = String::new();
    let mut exit = 0;
    let mut per_alpha = Vec::new();
    for &alpha in &alphas {
        let sys = assemble_funceq_system(alpha, cli.bound)?;
        let sample = entropy_sample(&sys.grid, alpha);
        let res = funceq_residual(&sys, &sample)?;
        let pass = res.passes_within(cli.tol);
        let cf = closed_form_check(alpha, 1.0, 10_000, cli.seed);
        let cf_pass = cf.passes_within(cli.tol);
        if !pass || !cf_pass {
            exit = 1;
        }
        writeln!(
            text,
            "{} alpha={alpha}: {} rows on {} grid points; entropy residual {}{}",
            pass_word(pass),
            sys.rows.len(),
            sys.grid.len(),
            fmt_sig12(res.max_residual),
            if res.exact_zero { " (exactly zero)" } else { "" },
        )
        .unwrap();
        writeln!(
            text,
            "{} alpha={alpha}: closed form residual {} over {} samples, u(1/2) = {}",
            pass_word(cf_pass),
            fmt_sig12(cf.max_residual),
            cf.samples,
            fmt_sig12(cf.half_value),
        )
        .unwrap();
        per_alpha.push(json!({
            "alpha": alpha.value(),
            "rows": sys.rows.len(),
            "unknowns": sys.grid.len(),
            "entropy_residual": {
                "max_residual": fmt_sig12(res.max_residual),
                "exact": res.exact,
                "exact_zero": res.exact_zero,
                "pass": pass,
                "witness": res.witness,
            },
            "closed_form": {
                "k": cf.k,
                "samples": cf.samples,
                "max_residual": fmt_sig12(cf.max_residual),
                "half_value": fmt_sig12(cf.half_value),
                "pass": cf_pass,
            },
        }));
    }

    let prop = symmetry_propagation(alphas[0], cli.bound, cli.bound.saturating_mul(64))?;
    let grid_total = FareyGrid::new(cli.bound)?.len();
    let recorded_m = prop.minimal_ambient.unwrap_or(prop.ambient);
    writeln!(
        text,
        "{} symmetry propagation: {}/{} grid points forced to zero at ambient M={}{}",
        if prop.full { "PASS" } else { "INCONCLUSIVE" },
        prop.forced.len(),
        grid_total,
        recorded_m,
        if prop.full { "" } else { " (not a refutation)" },
    )
    .unwrap();

    let identities = modular_group_check();
    let id_pass = identities.iter().filter(|c| c.pass).count();
    if id_pass != identities.len() {
        exit = 1;
    }
    writeln!(
        text,
        "{} homography identities: {id_pass}/{} pass",
        pass_word(id_pass == identities.len()),
        identities.len()
    )
    .unwrap();

    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    let mut orbit_samples = Vec::new();
    let mut orbit_ok = true;
    while orbit_samples.len() < 5 {
        let p = rng.gen_range(-50i64..=50);
        let q = rng.gen_range(1i64..=50);
        if gcd(p.abs(), q) != 1 {
            continue;
        }
        let w = orbit_witness(p, q)?;
        orbit_ok &= w.maps_zero_to_target() && w.word_matches();
        orbit_samples.push(orbit_sample_json(&w));
    }
    if !orbit_ok {
        exit = 1;
    }
    writeln!(
        text,
        "{} orbit witnesses: {} random targets verified",
        pass_word(orbit_ok),
        orbit_samples.len()
    )
    .unwrap();

    let payload = json!({
        "N": cli.bound,
        "ambient_M": recorded_m,
        "coverage": prop.coverage,
        "forced_zero": prop.forced.len(),
        "full": prop.full,
        "minimal_ambient": prop.minimal_ambient,
        "systems": per_alpha,
        "identities": identities.iter()
            .map(|c| json!({"name": c.name, "pass": c.pass}))
            .collect::<Vec<_>>(),
        "orbit_samples": orbit_samples,
    });
    Ok((payload, text, exit))
}

fn cmd_modular_check() -> Result<Piece> {
    let identities = modular_group_check();
    let passed = identities.iter().filter(|c| c.pass).count();
    let mut text = String::new();
    for c in &identities {
        writeln!(text, "{} {}", pass_word(c.pass), c.name).unwrap();
    }
    writeln!(text, "{passed}/{} identities pass", identities.len()).unwrap();
    let payload = json!({
        "identities": identities.iter()
            .map(|c| json!({"name": c.name, "pass": c.pass}))
            .collect::<Vec<_>>(),
        "passed": passed,
        "total": identities.len(),
    });
    Ok((payload, text, i32::from(passed != identities.len())))
}

fn cmd_orbit(p: i64, q: i64) -> Result<Piece> {
    let w = orbit_witness(p, q)?;
    let maps = w.maps_zero_to_target();
    let matches = w.word_matches();
    let pass = maps && matches;
    let text = format!(
        "{} {p}/{q}: matrix {}, word of length {} ({}); maps 0 to target: {maps}, word matches: {matches}\n",
        pass_word(pass),
        w.matrix,
        w.word.len(),
        w.word,
    );
    let mut payload = orbit_sample_json(&w);
    payload["word"] = json!(w.word.to_string());
    Ok((payload, text, i32::from(!pass)))
}

/// Dispatches a parsed invocation and wraps the payload in the report
/// envelope. Input failures surface as errors; the caller maps them to
/// exit code 2.
pub fn run(cli: &Cli) -> Result<Outcome> {
    let (payload, summary, exit) = match &cli.command {
        Command::Validate { input } => cmd_validate(cli, input)?,
        Command::Limit { input } => cmd_limit(input)?,
        Command::Model { input } => cmd_model(input)?,
        Command::Product { left, right } => cmd_product(left, right)?,
        Command::Coproduct { left, right } => cmd_coproduct(left, right)?,
        Command::Entropy { input } => cmd_entropy(cli, input)?,
        Command::CocycleCheck { input } => cmd_cocycle_check(cli, input)?,
        Command::H0 { input } => cmd_h0(cli, input)?,
        Command::Z1 { input } => cmd_z1(cli, input)?,
        Command::H1 { input } => cmd_h1(cli, input)?,
        Command::PredictH1 { input } => cmd_predict_h1(cli, input)?,
        Command::FitLambda { input } => cmd_fit_lambda(cli, input)?,
        Command::Funceq => cmd_funceq(cli)?,
        Command::ModularCheck => cmd_modular_check()?,
        Command::Orbit { p, q } => cmd_orbit(*p, *q)?,
    };
    let inputs = cli.command.inputs();
    let envelope = Envelope {
        command: cli.command.name(),
        alphas: &cli.alpha,
        bound: cli.bound,
        tol: cli.tol,
        seed: cli.seed,
        inputs: &inputs,
        method: cli.command.method(),
    };
    Ok(Outcome {
        report: envelope.report(payload),
        summary,
        exit,
    })
}

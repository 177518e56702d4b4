//! The eight experiments the CLI can run, each producing CSV tables and
//! PASS/FAIL checks with measured-vs-expected values.

use super::config::Section;
use crate::error::{Error, Result};
use crate::models::{
    CircleModel, EuclideanEigenfunction, EuclideanKind, ModelRef, SpectralFunction,
    SyntheticModel, TorusModel,
};
use crate::multiplier::{self, MultiplierQuery};
use crate::numerics::geometric_grid;
use crate::numerics::mc::seeded_rng;
use crate::numerics::quad::QuadratureSettings;
use crate::table::ResultTable;
use crate::transform::{
    self, HeatParams, RadialProfile,
};
use num_complex::Complex64;
use rand::Rng;
use std::sync::Arc;

/// One acceptance check of one experiment.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub experiment: String,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn absolute(experiment: &str, name: &str, measured: f64, expected: f64, tol: f64) -> Self {
        CheckResult {
            experiment: experiment.into(),
            name: name.into(),
            passed: (measured - expected).abs() <= tol,
            detail: format!("measured {measured:.12e}, expected {expected:.12e}, tol {tol:.3e}"),
        }
    }

    fn relative(experiment: &str, name: &str, measured: f64, expected: f64, rel_tol: f64) -> Self {
        let scale = expected.abs().max(f64::MIN_POSITIVE);
        CheckResult {
            experiment: experiment.into(),
            name: name.into(),
            passed: ((measured - expected) / scale).abs() <= rel_tol,
            detail: format!(
                "measured {measured:.12e}, expected {expected:.12e}, rel tol {rel_tol:.3e}"
            ),
        }
    }

    fn predicate(experiment: &str, name: &str, passed: bool, detail: String) -> Self {
        CheckResult {
            experiment: experiment.into(),
            name: name.into(),
            passed,
            detail,
        }
    }
}

pub(super) struct ExperimentOutput {
    pub tables: Vec<ResultTable>,
    pub checks: Vec<CheckResult>,
}

pub(super) fn run_experiment(
    section: &Section,
    seed: u64,
    tol_override: Option<f64>,
    settings: &QuadratureSettings,
) -> Result<ExperimentOutput> {
    match section.name.as_str() {
        "multiplier-curve" => multiplier_curve(section, tol_override, settings),
        "invert-l2" => invert_l2(section, seed, tol_override, settings),
        "invert-pointwise" => invert_pointwise(section, seed, tol_override, settings),
        "isometry" => isometry(section, seed, tol_override, settings),
        "surjectivity" => surjectivity(section, seed, tol_override, settings),
        "lemma5" => lemma5(section, seed, tol_override, settings),
        "holo-change" => holo_change(section, seed, tol_override, settings),
        "path-agreement" => path_agreement(section, seed, tol_override, settings),
        other => Err(Error::Config {
            line: section.line,
            column: 1,
            message: format!("experiment '{other}' is not implemented"),
        }),
    }
}

/// Catalogue of experiments with the statement each one verifies.
pub fn catalogue() -> Vec<(&'static str, &'static str, &'static str)> {
    vec![
        (
            "multiplier-curve",
            "sample alpha_{t,R} or beta_{t,R} over a radius grid",
            "partial inversion / partial isometry multipliers and their Gaussian limits (alpha -> 1, beta -> e^{t lambda/2})",
        ),
        (
            "invert-l2",
            "L2 error of the partial inversion of a random function as R grows",
            "global inversion formula, L2 version: A_{t,R} f -> f in norm",
        ),
        (
            "invert-pointwise",
            "sup error over probe points of the partial inversion as R grows",
            "global inversion formula, pointwise version with the Sobolev gate l > (3d^2-d)/4",
        ),
        (
            "isometry",
            "isometry functional G_F(R) against the Parseval target",
            "global isometry formula: lim G_F(R) = ||f||^2, with the geometric double integral cross-checked at small R",
        ),
        (
            "surjectivity",
            "reconstruct f from holomorphic-side coefficients and round-trip through the heat operator",
            "surjectivity theorem: f = sum a_n e^{t lambda_n/2} psi_n with lim G_F = sum |a_n|^2 e^{t lambda_n}",
        ),
        (
            "lemma5",
            "dual-path check of the rotationally-invariant ball integral identity",
            "Euclidean eigenfunction ball identity: int Psi beta = Psi(0) int e^{sqrt(sigma) y_1} beta",
        ),
        (
            "holo-change",
            "dual-path check of the circle change-of-variable identity",
            "holomorphic change of variable, S^1 prototype: shifting x -> x - iy/2 inside the double integral",
        ),
        (
            "path-agreement",
            "geometric ball quadrature against the spectral multiplier path",
            "partial inversion formula: A_{t,R} acts diagonally as alpha_{t,R}(-Delta)",
        ),
    ]
}

fn build_model(section: &Section) -> Result<ModelRef> {
    let model = section.str_or("model", "circle");
    match model {
        "circle" => {
            let n_modes = section.usize_or("n_modes", 64)?;
            Ok(Arc::new(CircleModel::new(n_modes)))
        }
        "torus" => {
            let d = section.usize_or("d", 2)?;
            let per_axis = section.usize_or("axis_modes", 15)?;
            Ok(Arc::new(TorusModel::new(d, per_axis)))
        }
        "synthetic" => {
            let d = section.usize_or("d", 3)?;
            let rho_sq = section.f64_or("rho_sq", 1.0)?;
            let weyl_const = section.f64_or("weyl_const", 1.0)?;
            let n_modes = section.usize_or("n_modes", 2000)?;
            let low = section.f64_list_or("low_spectrum", &[0.5])?;
            let seed = section.u64_opt("model_seed")?.unwrap_or(0);
            Ok(Arc::new(SyntheticModel::new(
                d, rho_sq, weyl_const, n_modes, low, seed,
            )?))
        }
        other => Err(Error::Config {
            line: section.line,
            column: 1,
            message: format!("unknown model '{other}' (circle, torus, synthetic)"),
        }),
    }
}

const MODEL_KEYS: [&str; 7] = [
    "model",
    "n_modes",
    "axis_modes",
    "d",
    "rho_sq",
    "weyl_const",
    "low_spectrum",
];

fn random_function(
    section: &Section,
    model: &ModelRef,
    seed: u64,
    default_active: usize,
    default_max: usize,
) -> Result<SpectralFunction> {
    let active = section.usize_or("active_modes", default_active)?;
    let max_mode = section.usize_or("max_mode", default_max)?;
    let mut rng = seeded_rng(seed);
    SpectralFunction::random(Arc::clone(model), active, max_mode, &mut rng)
}

fn r_grid_for(
    section: &Section,
    f: &SpectralFunction,
    p: HeatParams,
    default_steps: usize,
) -> Result<Vec<f64>> {
    let r_min = section.f64_or("r_min", 0.05)?;
    let steps = section.usize_or("r_steps", default_steps)?;
    let auto = transform::r_infinity_for(f, p).max(r_min * 2.0);
    let r_max = match section.str_or("r_max", "auto") {
        "auto" => auto,
        other => other.parse::<f64>().map_err(|_| Error::Config {
            line: section.line,
            column: 1,
            message: format!("r_max must be a number or 'auto', got '{other}'"),
        })?,
    };
    if !(r_min > 0.0) || r_max <= r_min || steps < 2 {
        return Err(Error::Config {
            line: section.line,
            column: 1,
            message: format!("bad radius grid: r_min {r_min}, r_max {r_max}, steps {steps}"),
        });
    }
    Ok(geometric_grid(r_min, r_max, steps))
}

fn multiplier_curve(
    section: &Section,
    tol_override: Option<f64>,
    settings: &QuadratureSettings,
) -> Result<ExperimentOutput> {
    section.reject_unknown_keys(&[
        "kind", "t", "d", "rho_sq", "lambdas", "r_min", "r_max", "r_steps", "seed", "tol",
    ])?;
    let kind = section.str_or("kind", "alpha").to_string();
    if kind != "alpha" && kind != "beta" {
        return Err(Error::Config {
            line: section.line,
            column: 1,
            message: format!("kind must be alpha or beta, got '{kind}'"),
        });
    }
    let t = section.f64_or("t", 0.5)?;
    let dim = section.usize_or("d", 3)?;
    let rho_sq = section.f64_or("rho_sq", 1.0)?;
    let lambdas = section.f64_list_or("lambdas", &[0.0, 0.5, 1.0, 2.0, 10.0])?;
    let tol = tol_override.unwrap_or(1e-6);

    let r_min = section.f64_or("r_min", 0.05)?;
    let steps = section.usize_or("r_steps", 40)?;
    let auto: f64 = lambdas
        .iter()
        .map(|&l| multiplier::r_infinity(t, dim, l, rho_sq))
        .fold(0.0, f64::max)
        .max(2.0 * r_min);
    let r_max = match section.str_or("r_max", "auto") {
        "auto" => auto,
        other => other.parse::<f64>().map_err(|_| Error::Config {
            line: section.line,
            column: 1,
            message: format!("r_max must be a number or 'auto', got '{other}'"),
        })?,
    };
    let grid = geometric_grid(r_min, r_max, steps);

    let mut columns = vec!["R".to_string()];
    for &l in &lambdas {
        columns.push(format!("{kind}(lambda={l})"));
    }
    let mut table = ResultTable {
        name: format!("{kind}-curve"),
        columns,
        rows: Vec::new(),
        metadata: Vec::new(),
    };
    let cells: Vec<(usize, usize)> = (0..grid.len())
        .flat_map(|i| (0..lambdas.len()).map(move |j| (i, j)))
        .collect();
    let values: Vec<Result<f64>> = crate::numerics::parallel_map(&cells, |&(i, j)| {
        let q = MultiplierQuery::new(t, grid[i], lambdas[j], rho_sq, dim)?;
        match kind.as_str() {
            "alpha" => multiplier::alpha(&q, settings),
            _ => multiplier::beta(&q, settings),
        }
    });
    let mut matrix = vec![vec![0.0; lambdas.len()]; grid.len()];
    for ((i, j), v) in cells.into_iter().zip(values) {
        matrix[i][j] = v?;
    }
    for (i, &r) in grid.iter().enumerate() {
        let mut row = vec![r];
        row.extend(matrix[i].iter());
        table.push_row(row);
    }

    let mut checks = Vec::new();
    for (j, &l) in lambdas.iter().enumerate() {
        let last = matrix[grid.len() - 1][j];
        if l >= rho_sq {
            match kind.as_str() {
                "alpha" => checks.push(CheckResult::absolute(
                    "multiplier-curve",
                    &format!("alpha(lambda={l}) limit at R_max"),
                    last,
                    1.0,
                    tol,
                )),
                _ => checks.push(CheckResult::relative(
                    "multiplier-curve",
                    &format!("beta(lambda={l}) limit at R_max"),
                    last,
                    (t * l / 2.0).exp(),
                    tol,
                )),
            }
        } else {
            checks.push(CheckResult::predicate(
                "multiplier-curve",
                &format!("{kind}(lambda={l}) low-spectrum value finite and real"),
                last.is_finite(),
                format!("value at R_max = {last:.12e}"),
            ));
        }
    }
    Ok(ExperimentOutput {
        tables: vec![table],
        checks,
    })
}

fn invert_l2(
    section: &Section,
    seed: u64,
    tol_override: Option<f64>,
    settings: &QuadratureSettings,
) -> Result<ExperimentOutput> {
    let mut allowed = vec![
        "t", "active_modes", "max_mode", "r_min", "r_max", "r_steps", "seed", "tol", "model_seed",
    ];
    allowed.extend(MODEL_KEYS);
    section.reject_unknown_keys(&allowed)?;
    let model = build_model(section)?;
    let p = HeatParams::new(section.f64_or("t", 0.5)?)?;
    let f = random_function(section, &model, seed, 8, 24)?;
    let grid = r_grid_for(section, &f, p, 40)?;
    let tol = tol_override.unwrap_or(1e-6);

    let report = transform::global_inversion_l2(&f, p, &grid, settings)?;
    let mut table = report.to_table();
    table.tag("model", model.name());
    let checks = vec![
        CheckResult::absolute(
            "invert-l2",
            &format!("final relative L2 error ({})", model.name()),
            report.final_error / report.norm.max(f64::MIN_POSITIVE),
            0.0,
            tol,
        ),
        CheckResult::predicate(
            "invert-l2",
            &format!("error curve eventually decreasing ({})", model.name()),
            report.eventually_decreasing(),
            format!(
                "trailing-quarter monotone within noise floor; final {:.3e}",
                report.final_error
            ),
        ),
    ];
    Ok(ExperimentOutput {
        tables: vec![table],
        checks,
    })
}

fn invert_pointwise(
    section: &Section,
    seed: u64,
    tol_override: Option<f64>,
    settings: &QuadratureSettings,
) -> Result<ExperimentOutput> {
    let mut allowed = vec![
        "t",
        "active_modes",
        "max_mode",
        "probes",
        "sobolev_order",
        "r_min",
        "r_max",
        "r_steps",
        "seed",
        "tol",
        "model_seed",
    ];
    allowed.extend(MODEL_KEYS);
    section.reject_unknown_keys(&allowed)?;
    let model = build_model(section)?;
    let p = HeatParams::new(section.f64_or("t", 0.25)?)?;
    let mut f = random_function(section, &model, seed, 5, 11)?;
    if let Some(l) = section.f64_opt("sobolev_order")? {
        f = f.with_declared_sobolev_order(l);
    }
    let probes = transform::uniform_probes(model.dim(), section.usize_or("probes", 16)?);
    let grid = r_grid_for(section, &f, p, 20)?;
    let tol = tol_override.unwrap_or(1e-6);

    let report = transform::global_inversion_pointwise(&f, p, &grid, &probes, settings)?;
    let mut table = report.to_table();
    table.tag("model", model.name());
    let mut checks = vec![CheckResult::absolute(
        "invert-pointwise",
        &format!("final sup error over {} probes", probes.len()),
        report.final_sup_error,
        0.0,
        tol,
    )];
    if report.gate.warning {
        checks.push(CheckResult::predicate(
            "invert-pointwise",
            "Sobolev gate exponent positive under declared order",
            false,
            format!(
                "declared l = {:?} gives exponent {:?} <= 0 (threshold (3d^2-d)/4 = {})",
                report.gate.declared_order, report.gate.exponent, report.gate.threshold
            ),
        ));
    }
    Ok(ExperimentOutput {
        tables: vec![table],
        checks,
    })
}

fn isometry(
    section: &Section,
    seed: u64,
    tol_override: Option<f64>,
    settings: &QuadratureSettings,
) -> Result<ExperimentOutput> {
    let mut allowed = vec![
        "t",
        "active_modes",
        "max_mode",
        "r_min",
        "r_max",
        "r_steps",
        "geometric_radii",
        "budget",
        "seed",
        "tol",
        "model_seed",
    ];
    allowed.extend(MODEL_KEYS);
    section.reject_unknown_keys(&allowed)?;
    let model = build_model(section)?;
    let p = HeatParams::new(section.f64_or("t", 0.5)?)?;
    let f = random_function(section, &model, seed, 6, 18)?;
    let grid = r_grid_for(section, &f, p, 20)?;
    let tol = tol_override.unwrap_or(1e-6);
    let budget = section.usize_or("budget", 1 << 22)?;
    let default_geo: &[f64] = if model.has_complex_extension() && model.dim() <= 2 {
        &[0.1, 0.25]
    } else {
        &[]
    };
    let geo_radii = section.f64_list_or("geometric_radii", default_geo)?;

    let mut tables = vec![transform::isometry_curve(&f, p, &grid, settings)?];
    tables[0].tag("model", model.name());
    let limit = transform::isometry_limit_estimate(&f, p, settings)?;
    let mut checks = vec![CheckResult::relative(
        "isometry",
        &format!("limit estimate vs Parseval norm ({})", model.name()),
        limit,
        f.norm_sq(),
        tol,
    )];

    if !geo_radii.is_empty() {
        let mut geo_table =
            ResultTable::new("isometry-geometric", vec!["R", "geometric", "spectral", "diff"]);
        for &r in &geo_radii {
            let geo = transform::isometry_geometric(&f, p, r, budget, settings)?;
            let spec = transform::isometry_spectral(&f, p, r, settings)?;
            geo_table.push_row(vec![r, geo, spec, geo - spec]);
            checks.push(CheckResult::absolute(
                "isometry",
                &format!("geometric vs spectral G_F at R={r}"),
                geo,
                spec,
                tol,
            ));
        }
        tables.push(geo_table);
    }
    Ok(ExperimentOutput { tables, checks })
}

fn surjectivity(
    section: &Section,
    seed: u64,
    tol_override: Option<f64>,
    settings: &QuadratureSettings,
) -> Result<ExperimentOutput> {
    let mut allowed = vec!["t", "active_modes", "max_mode", "seed", "tol", "model_seed"];
    allowed.extend(MODEL_KEYS);
    section.reject_unknown_keys(&allowed)?;
    let model = build_model(section)?;
    let p = HeatParams::new(section.f64_or("t", 0.4)?)?;
    let capital = random_function(section, &model, seed, 6, 12)?;
    let tol = tol_override.unwrap_or(1e-6);

    let outcome =
        transform::surjectivity_reconstruct(Arc::clone(&model), capital.coefficients(), p)?;
    let round = transform::heat(&outcome.reconstructed, p);
    let mut worst_rel = 0.0f64;
    let mut table = ResultTable::new(
        "surjectivity",
        vec!["n", "lambda", "coeff_re", "coeff_im", "roundtrip_rel_error"],
    );
    for (n, (&got, &want)) in round
        .coefficients()
        .iter()
        .zip(capital.coefficients())
        .enumerate()
    {
        let rel = if want.norm() > 0.0 {
            (got - want).norm() / want.norm()
        } else {
            (got - want).norm()
        };
        worst_rel = worst_rel.max(rel);
        table.push_row(vec![n as f64, model.eigenvalue(n), want.re, want.im, rel]);
    }
    let limit = transform::isometry_limit_estimate(&outcome.reconstructed, p, settings)?;
    table.tag("model", model.name());
    table.tag(
        "predicted_limit",
        crate::table::format_float(outcome.predicted_limit),
    );
    table.tag("isometry_limit", crate::table::format_float(limit));

    let checks = vec![
        CheckResult::absolute(
            "surjectivity",
            "heat round trip relative coefficient error",
            worst_rel,
            0.0,
            1e-12,
        ),
        CheckResult::relative(
            "surjectivity",
            "lim G_F of reconstruction vs sum |a_n|^2 e^{t lambda_n}",
            limit,
            outcome.predicted_limit,
            tol,
        ),
    ];
    Ok(ExperimentOutput {
        tables: vec![table],
        checks,
    })
}

/// The six shipped eigenfunction/profile combinations: deterministic
/// quadrature in d <= 2, Monte Carlo in d >= 3.
fn lemma5_combos() -> Vec<(EuclideanEigenfunction, RadialProfile, f64)> {
    vec![
        (
            EuclideanEigenfunction::new(vec![1.3], EuclideanKind::Exponential).unwrap(),
            RadialProfile::heat_gaussian(0.4, 1),
            1.2,
        ),
        (
            EuclideanEigenfunction::new(vec![0.9, -0.7], EuclideanKind::Exponential).unwrap(),
            RadialProfile::heat_gaussian(0.5, 2),
            1.0,
        ),
        (
            EuclideanEigenfunction::new(vec![1.0, 0.5], EuclideanKind::PlaneWaveRealPart)
                .unwrap()
                .with_phase(0.7),
            RadialProfile::heat_gaussian(0.5, 2),
            1.1,
        ),
        (
            EuclideanEigenfunction::new(vec![1.1, 0.4, -0.8], EuclideanKind::PlaneWaveRealPart)
                .unwrap(),
            RadialProfile::heat_gaussian(0.6, 3),
            1.3,
        ),
        (
            EuclideanEigenfunction::new(vec![0.8, 0.3, 0.2], EuclideanKind::PlaneWaveRealPart)
                .unwrap(),
            RadialProfile::indicator(),
            1.0,
        ),
        (
            EuclideanEigenfunction::new(vec![0.6, 0.5, 0.0, 0.0], EuclideanKind::Exponential)
                .unwrap(),
            RadialProfile::heat_gaussian(0.5, 4),
            0.9,
        ),
    ]
}

fn lemma5(
    section: &Section,
    seed: u64,
    tol_override: Option<f64>,
    settings: &QuadratureSettings,
) -> Result<ExperimentOutput> {
    section.reject_unknown_keys(&["budget", "seed", "tol"])?;
    let budget = section.usize_or("budget", 200_000)?;
    let tol = tol_override.unwrap_or(1e-7);
    let mut table = ResultTable::new(
        "lemma5",
        vec!["combo", "d", "sigma", "lhs", "rhs", "diff", "mc_std_error"],
    );
    let mut checks = Vec::new();
    for (idx, (psi, beta, r)) in lemma5_combos().into_iter().enumerate() {
        let check =
            transform::lemma5_check(&psi, &beta, r, budget, seed ^ (idx as u64 + 1), settings)?;
        table.push_row(vec![
            idx as f64,
            psi.dim() as f64,
            psi.sigma(),
            check.lhs,
            check.rhs,
            check.difference,
            check.mc_std_error.unwrap_or(0.0),
        ]);
        let name = format!(
            "combo {idx} (d={}, {:?}, beta={})",
            psi.dim(),
            psi.kind(),
            beta.name()
        );
        match check.mc_std_error {
            Some(se) => checks.push(CheckResult::absolute(
                "lemma5",
                &format!("{name}, Monte Carlo side"),
                check.lhs,
                check.rhs,
                4.0 * se,
            )),
            None => checks.push(CheckResult::absolute(
                "lemma5",
                &format!("{name}, deterministic"),
                check.lhs,
                check.rhs,
                tol,
            )),
        }
    }
    Ok(ExperimentOutput {
        tables: vec![table],
        checks,
    })
}

fn holo_change(
    section: &Section,
    seed: u64,
    tol_override: Option<f64>,
    settings: &QuadratureSettings,
) -> Result<ExperimentOutput> {
    section.reject_unknown_keys(&["pairs", "modes", "r", "seed", "tol"])?;
    let pairs = section.usize_or("pairs", 5)?;
    let modes = section.usize_or("modes", 4)?;
    let r = section.f64_or("r", 0.15)?;
    let tol = tol_override.unwrap_or(1e-8);
    let tight = QuadratureSettings {
        rel_tol: settings.rel_tol.min(1e-12),
        ..*settings
    };
    let mut rng = seeded_rng(seed);
    let alpha_profile = RadialProfile::new("exp(-y^2)", |y| (-y * y).exp());
    let mut table = ResultTable::new(
        "holo-change",
        vec!["pair", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "diff"],
    );
    let mut checks = Vec::new();
    for i in 0..pairs {
        let mut draw = |count: usize| -> Vec<Complex64> {
            (0..count)
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect()
        };
        let f1 = draw(modes);
        let f2 = draw(modes);
        let check =
            transform::holo_change_check_circle(&f1, &f2, &alpha_profile, r, &tight)?;
        table.push_row(vec![
            i as f64,
            check.lhs.re,
            check.lhs.im,
            check.rhs.re,
            check.rhs.im,
            check.difference,
        ]);
        checks.push(CheckResult::absolute(
            "holo-change",
            &format!("pair {i} dual-path difference"),
            check.difference,
            0.0,
            tol,
        ));
    }
    Ok(ExperimentOutput {
        tables: vec![table],
        checks,
    })
}

fn path_agreement(
    section: &Section,
    seed: u64,
    tol_override: Option<f64>,
    settings: &QuadratureSettings,
) -> Result<ExperimentOutput> {
    let mut allowed = vec![
        "t", "modes", "radii", "probes", "active_modes", "max_mode", "seed", "tol", "model_seed",
    ];
    allowed.extend(MODEL_KEYS);
    section.reject_unknown_keys(&allowed)?;
    let model = build_model(section)?;
    let p = HeatParams::new(section.f64_or("t", 0.1)?)?;
    let probes = transform::uniform_probes(model.dim(), section.usize_or("probes", 8)?);
    let radii = section.f64_list_or("radii", &[0.1, 0.3])?;
    let mut table = ResultTable::new(
        "path-agreement",
        vec!["case", "R", "probe", "abs_diff"],
    );
    let mut checks = Vec::new();

    if model.name() == "circle" {
        let tol = tol_override.unwrap_or(1e-7);
        let modes = section.usize_or("modes", 6)?;
        for n in 0..modes {
            let f = SpectralFunction::single_mode(Arc::clone(&model), n)?;
            let lambda = model.eigenvalue(n);
            for &r in &radii {
                let q = MultiplierQuery::new(p.t, r, lambda, model.rho_sq(), model.dim())?;
                let scale = multiplier::alpha(&q, settings)?;
                let mut sup = 0.0f64;
                for (pi, x) in probes.iter().enumerate() {
                    let geo =
                        transform::partial_inversion_geometric(&f, p, r, x, settings)?;
                    let expect = model.eigenfunction(n, x)? * scale;
                    let diff = (geo - expect).norm();
                    sup = sup.max(diff);
                    table.push_row(vec![n as f64, r, pi as f64, diff]);
                }
                checks.push(CheckResult::absolute(
                    "path-agreement",
                    &format!("mode {n}, R={r}: geometric vs multiplier"),
                    sup,
                    0.0,
                    tol,
                ));
            }
        }
    } else {
        let tol = tol_override.unwrap_or(1e-6);
        let f = random_function(section, &model, seed, 5, 13)?;
        for &r in &radii {
            let spectral = transform::partial_inversion_spectral(&f, p, r, settings)?;
            let mut sup = 0.0f64;
            for (pi, x) in probes.iter().enumerate() {
                let geo = transform::partial_inversion_geometric(&f, p, r, x, settings)?;
                let expect = spectral.eval(x)?;
                let diff = (geo - expect).norm();
                sup = sup.max(diff);
                table.push_row(vec![0.0, r, pi as f64, diff]);
            }
            checks.push(CheckResult::absolute(
                "path-agreement",
                &format!("random function, R={r}: geometric vs spectral"),
                sup,
                0.0,
                tol,
            ));
        }
    }
    Ok(ExperimentOutput {
        tables: vec![table],
        checks,
    })
}

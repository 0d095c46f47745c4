use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use schlicht_core::families::{
    invert_to_sigma, koebe_transform_alpha, make_schlicht, standard_corpus, CorpusMember, Family,
    SchlichtFunction, DE_BRANGES_SLACK,
};
use schlicht_core::grunsky::{
    full_mapping_defect, grunsky_matrix, lemma3_check, strong_grunsky_norm, FullMappingDefect,
};
use schlicht_core::hayman::{default_schedule, hayman_index_with_grid, HaymanEstimate};
use schlicht_core::logmilin::{
    bazilevich_gap, coefficient_functionals, lebedev_milin_check, log_data, milin_check,
    prawitz_check, sn_bound_check, MILIN_BOUND,
};
use schlicht_core::series::Complex;
use schlicht_core::tauber::{
    lemma1_harness, n_of_eps, tauber_decomposition_check, uniform_gap, DeviationSurface,
    DoubleFamily,
};

use crate::config::{ScenarioConfig, ScenarioKind};
use crate::report::{Check, Flag, NOfEps, Provenance, Row, ScenarioReport, TailSummary};
use crate::LabError;

/// Levels at which `N(ε)` is tabulated.
pub const EPS_LEVELS: [f64; 5] = [0.1, 0.05, 0.01, 0.005, 0.001];

const PRAWITZ_RADII: [f64; 4] = [0.2, 0.4, 0.6, 0.8];
const PRAWITZ_POINTS: usize = 1024;
const TAUBER_INDICES: [usize; 5] = [2, 8, 16, 32, 64];
const LEMMA3_TERMS: usize = 128;

#[derive(Default)]
struct Body {
    rows: Vec<Row>,
    checks: Vec<Check>,
    tails: Vec<TailSummary>,
    members: BTreeMap<usize, String>,
}

pub fn run_scenario(cfg: &ScenarioConfig) -> Result<ScenarioReport, LabError> {
    cfg.validate()?;
    let body = match cfg.scenario {
        ScenarioKind::Counterexample => counterexample(cfg)?,
        ScenarioKind::Theorem1 => theorem1(cfg)?,
        ScenarioKind::Theorem2 => theorem2(cfg)?,
        ScenarioKind::ZalcmanScan => zalcman_scan(cfg)?,
        ScenarioKind::InequalityAudit => inequality_audit(cfg)?,
    };
    Ok(ScenarioReport {
        scenario: cfg.scenario,
        rows: body.rows,
        checks: body.checks,
        tails: body.tails,
        members: body.members,
        provenance: Provenance {
            config: cfg.clone(),
            versions: versions(),
        },
    })
}

fn versions() -> BTreeMap<String, String> {
    BTreeMap::from([
        (
            "schlicht-core".to_string(),
            schlicht_core::VERSION.to_string(),
        ),
        (
            "schlicht-lab".to_string(),
            env!("CARGO_PKG_VERSION").to_string(),
        ),
    ])
}

fn tail_summary(surface: &str, d: &DeviationSurface) -> TailSummary {
    let joint = d.tail_sup();
    let columns = d.tail_sup_columns();
    let table = |tail: &[f64]| {
        EPS_LEVELS
            .iter()
            .map(|&eps| NOfEps {
                eps,
                n: n_of_eps(tail, eps),
            })
            .collect()
    };
    TailSummary {
        surface: surface.to_string(),
        n_of_eps_joint: table(&joint),
        n_of_eps_columns: table(&columns),
        joint,
        columns,
    }
}

fn surface_from_rows(
    ms: &[usize],
    ns: &[usize],
    rows: &[Row],
) -> Result<DeviationSurface, LabError> {
    let d = rows
        .chunks(ns.len())
        .map(|c| c.iter().map(|r| r.deviation).collect())
        .collect();
    DeviationSurface::new(ms.to_vec(), ns.to_vec(), d).map_err(LabError::at(None, None))
}

fn non_increasing(tail: &[f64]) -> Check {
    let worst = tail.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
    Check::new("tail_non_increasing", worst <= 0.0, worst, 0.0)
}

/// `(1-t)² M(t, f)/t` on the grid, with `1` at `t = 0` and `alpha` at `t = 1`.
fn abel_profile(
    f: &SchlichtFunction,
    t_grid: &[f64],
    alpha: f64,
    grid: usize,
) -> Result<Vec<f64>, LabError> {
    t_grid
        .iter()
        .map(|&t| {
            if t <= 0.0 {
                Ok(1.0)
            } else if t >= 1.0 {
                Ok(alpha)
            } else {
                let m = f.max_modulus(t, grid).map_err(LabError::at(None, None))?;
                Ok((1.0 - t) * (1.0 - t) * m.modulus / t)
            }
        })
        .collect()
}

struct DilationGrid {
    rows: Vec<Row>,
    profiles: Vec<Vec<f64>>,
    functions: Vec<SchlichtFunction>,
}

/// Rows of the dilation schedule `f_m(z) = f(r_m z)/r_m`, `r_m = 1 - 1/m`,
/// with `α_m = 0` and the profile of each row on the Abel grid.
fn dilation_grid(
    cfg: &ScenarioConfig,
    base: &Family,
    closed: impl Fn(f64, usize) -> f64 + Sync,
) -> Result<DilationGrid, LabError> {
    let tol = cfg.tolerance("closed_form");
    let ns = cfg.n_values();
    let per_m = cfg
        .m_values()
        .into_par_iter()
        .map(|m| {
            let r = 1.0 - 1.0 / m as f64;
            let f = make_schlicht(&Family::dilation(r, base.clone()), cfg.series_order)
                .map_err(LabError::at(Some(m), None))?;
            let rows: Vec<Row> = ns
                .iter()
                .map(|&n| {
                    let value = f.a(n).norm() / n as f64;
                    Row {
                        m,
                        n,
                        value,
                        alpha_m: 0.0,
                        deviation: value,
                        flag: Flag::from_bool((value - closed(r, n)).abs() <= tol),
                        invariant: "closed_form".into(),
                    }
                })
                .collect();
            let profile = abel_profile(&f, &cfg.t_grid, 0.0, cfg.max_modulus_grid)
                .map_err(|e| relabel(e, Some(m), None))?;
            Ok((rows, profile, f))
        })
        .collect::<Result<Vec<_>, LabError>>()?;
    let mut grid = DilationGrid {
        rows: Vec::with_capacity(per_m.len() * ns.len()),
        profiles: Vec::with_capacity(per_m.len()),
        functions: Vec::with_capacity(per_m.len()),
    };
    for (r, p, f) in per_m {
        grid.rows.extend(r);
        grid.profiles.push(p);
        grid.functions.push(f);
    }
    Ok(grid)
}

fn relabel(e: LabError, m: Option<usize>, n: Option<usize>) -> LabError {
    match e {
        LabError::Module { message, .. } => LabError::Module { m, n, message },
        other => other,
    }
}

fn counterexample(cfg: &ScenarioConfig) -> Result<Body, LabError> {
    let tol = cfg.tolerance("closed_form");
    let floor = cfg.tolerance("diagonal_floor");
    let (ms, ns) = (cfg.m_values(), cfg.n_values());
    let DilationGrid { rows, profiles, .. } =
        dilation_grid(cfg, &Family::Koebe, |r, n| r.powi(n as i32 - 1))?;
    let mut checks = Vec::new();

    for (i, &m) in ms.iter().enumerate() {
        let row = &rows[i * ns.len()..(i + 1) * ns.len()];
        if let Some(cell) = row.iter().find(|r| r.n == m) {
            let closed = (1.0 - 1.0 / m as f64).powi(m as i32 - 1);
            let err = (cell.value - closed).abs();
            checks.push(
                Check::new("diagonal_closed_form", err <= tol, err, tol).at(Some(m), Some(m)),
            );
            if m >= 8 {
                checks.push(
                    Check::new(
                        "diagonal_exceeds_floor",
                        cell.value > floor,
                        cell.value,
                        floor,
                    )
                    .at(Some(m), Some(m)),
                );
            }
        }
        let rise = row
            .windows(2)
            .map(|w| w[1].value - w[0].value)
            .fold(f64::NEG_INFINITY, f64::max);
        if row.len() > 1 {
            checks.push(Check::new("row_decreases_in_n", rise < 0.0, rise, 0.0).at(Some(m), None));
        }
    }

    let surface = surface_from_rows(&ms, &ns, &rows)?;
    let tails = tail_summary("coefficient_ratio", &surface);
    // the set m, n > N is non-empty exactly for N below both range ends
    let reach = cfg.m_range[1].min(cfg.n_range[1]);
    if reach > 0 {
        let worst = tails.joint[..reach]
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        checks.push(
            Check::new(
                "simultaneous_convergence_fails",
                worst > floor,
                worst,
                floor,
            )
            .at(None, Some(reach - 1)),
        );
    }

    let koebe = vec![1.0; cfg.t_grid.len()];
    let gaps = uniform_gap(&profiles, &koebe).map_err(LabError::at(None, None))?;
    let least = gaps.sup_gaps.iter().copied().fold(f64::INFINITY, f64::min);
    checks.push(Check::new(
        "hypothesis_ii_fails",
        least >= 1.0 - tol,
        least,
        1.0,
    ));

    Ok(Body {
        rows,
        checks,
        tails: vec![tails],
        ..Body::default()
    })
}

fn theorem1(cfg: &ScenarioConfig) -> Result<Body, LabError> {
    let tol = cfg.tolerance("closed_form");
    let target = cfg.tolerance("tail_target");
    let big = cfg.tail_index();
    let (ms, ns) = (cfg.m_values(), cfg.n_values());
    let DilationGrid {
        rows,
        profiles,
        functions: fs,
    } = dilation_grid(cfg, &Family::Halfplane, |r, n| {
        r.powi(n as i32 - 1) / n as f64
    })?;
    let mut checks = Vec::new();

    let worst = rows
        .iter()
        .map(|r| r.value * r.n as f64)
        .fold(0.0, f64::max);
    checks.push(Check::new("row_bound", worst <= 1.0 + tol, worst, 1.0));

    let surface = surface_from_rows(&ms, &ns, &rows)?;
    let tails = tail_summary("coefficient_ratio", &surface);
    checks.push(non_increasing(&tails.joint));
    if let Some(&t) = tails.joint.get(big) {
        checks.push(Check::new("tail_below_target", t <= target, t, target).at(None, Some(big)));
        let bound = 1.0 / (big + 1) as f64;
        checks.push(
            Check::new("tail_closed_form_bound", t <= bound + tol, t, bound).at(None, Some(big)),
        );
    }

    // F(t) = (1-t)² f_m(t)/t has Abel limit α_m = 0 and Cesàro means r_mⁿ/(n+1)
    let coeff_rows = fs
        .par_iter()
        .zip(&ms)
        .map(|(f, &m)| {
            log_data(f)
                .map(|ld| ld.f_coeffs)
                .map_err(LabError::at(Some(m), None))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let family = DoubleFamily {
        m_values: ms.clone(),
        coeff_rows,
        alpha: vec![0.0; ms.len()],
        k_bound: 1.0,
        l_bound: 2.0,
        t_grid: cfg.t_grid.clone(),
    };
    let lemma = lemma1_harness(&family).map_err(LabError::at(None, None))?;
    checks.push(Check::new(
        "lemma1_hypothesis_i",
        lemma.hypothesis_i_ok,
        0.0,
        family.k_bound,
    ));
    checks.push(Check::new(
        "lemma1_hypothesis_iii",
        lemma.hypothesis_iii_ok,
        lemma.l_observed,
        family.l_bound,
    ));
    let cesaro = tail_summary("cesaro_deviation", &lemma.deviation);
    let mut mono = non_increasing(&cesaro.joint);
    mono.invariant = "lemma1_tail_non_increasing".into();
    checks.push(mono);
    if let Some(&t) = cesaro.joint.get(big) {
        checks.push(
            Check::new("lemma1_tail_below_target", t <= target, t, target).at(None, Some(big)),
        );
    }

    let limit: Vec<f64> = cfg.t_grid.iter().map(|t| 1.0 - t).collect();
    let gaps = uniform_gap(&profiles, &limit).map_err(LabError::at(None, None))?;
    let first = gaps.sup_gaps[gaps.sup_gaps.len() / 2];
    let last = *gaps.sup_gaps.last().expect("m range is non-empty");
    checks.push(Check::new("hypothesis_ii_holds", gaps.dini_ok, last, first));

    Ok(Body {
        rows,
        checks,
        tails: vec![tails, cesaro],
        ..Body::default()
    })
}

fn theorem2(cfg: &ScenarioConfig) -> Result<Body, LabError> {
    let width_tol = cfg.tolerance("bracket_width");
    let alpha_tol = cfg.tolerance("alpha_closed_form");
    let target = cfg.tolerance("tail_target");
    let big = cfg.tail_index();
    let (ms, ns) = (cfg.m_values(), cfg.n_values());
    let per_m = ms
        .par_iter()
        .map(|&m| {
            let w = Complex::from_polar(cfg.w_modulus, 1.0 / m as f64);
            let f = make_schlicht(&Family::koebe_transform(w), cfg.series_order)
                .map_err(LabError::at(Some(m), None))?;
            let est = hayman_index_with_grid(&f, &default_schedule(&f), cfg.max_modulus_grid)
                .map_err(LabError::at(Some(m), None))?;
            let rows: Vec<Row> = ns
                .iter()
                .map(|&n| {
                    let value = f.a(n).norm() / n as f64;
                    Row {
                        m,
                        n,
                        value,
                        alpha_m: est.alpha,
                        deviation: (value - est.alpha).abs(),
                        flag: Flag::from_bool(value <= 1.0 + DE_BRANGES_SLACK),
                        invariant: "bieberbach".into(),
                    }
                })
                .collect();
            let err = (est.alpha - koebe_transform_alpha(w)).abs();
            let checks = vec![
                Check::new(
                    "bracket_width",
                    est.bracket_width <= width_tol,
                    est.bracket_width,
                    width_tol,
                )
                .at(Some(m), None),
                Check::new("alpha_closed_form", err <= alpha_tol, err, alpha_tol).at(Some(m), None),
            ];
            Ok((rows, checks, est.bracket_width))
        })
        .collect::<Result<Vec<_>, LabError>>()?;

    let mut rows = Vec::with_capacity(ms.len() * ns.len());
    let mut checks = Vec::new();
    let mut widest: f64 = 0.0;
    for (r, c, w) in per_m {
        rows.extend(r);
        checks.extend(c);
        widest = widest.max(w);
    }
    let surface = surface_from_rows(&ms, &ns, &rows)?;
    let tails = tail_summary("alpha_deviation", &surface);
    checks.push(non_increasing(&tails.columns));
    if let Some(&t) = tails.columns.get(big) {
        let threshold = target + widest;
        checks.push(
            Check::new("tail_below_target", t <= threshold, t, threshold).at(None, Some(big)),
        );
    }
    Ok(Body {
        rows,
        checks,
        tails: vec![tails],
        ..Body::default()
    })
}

fn selected_corpus(cfg: &ScenarioConfig) -> Vec<(usize, CorpusMember)> {
    standard_corpus()
        .into_iter()
        .enumerate()
        .filter(|(_, c)| {
            cfg.members
                .as_ref()
                .is_none_or(|names| names.contains(&c.name))
        })
        .collect()
}

fn koebe_like(f: &Family) -> bool {
    match f {
        Family::Koebe => true,
        Family::Rotation { base, .. } => koebe_like(base),
        _ => false,
    }
}

fn estimate(f: &SchlichtFunction, grid: usize, m: usize) -> Result<HaymanEstimate, LabError> {
    hayman_index_with_grid(f, &default_schedule(f), grid).map_err(LabError::at(Some(m), None))
}

fn zalcman_scan(cfg: &ScenarioConfig) -> Result<Body, LabError> {
    let slack = cfg.tolerance("zalcman_slack");
    let ratio_slack = cfg.tolerance("bieberbach_slack");
    let ns = cfg.n_values();
    let corpus = selected_corpus(cfg);
    let per_member = corpus
        .par_iter()
        .map(|(m, c)| {
            let m = *m;
            let f =
                make_schlicht(&c.family, cfg.series_order).map_err(LabError::at(Some(m), None))?;
            let est = estimate(&f, cfg.max_modulus_grid, m)?;
            let rows = ns
                .iter()
                .map(|&n| {
                    let cf =
                        coefficient_functionals(&f, n).map_err(LabError::at(Some(m), Some(n)))?;
                    let allowed = slack * cf.zalcman_bound.max(1.0);
                    Ok(Row {
                        m,
                        n,
                        value: cf.zalcman,
                        alpha_m: est.alpha,
                        deviation: cf.zalcman_bound - cf.zalcman,
                        flag: Flag::from_bool(cf.zalcman <= cf.zalcman_bound + allowed),
                        invariant: "zalcman_bound".into(),
                    })
                })
                .collect::<Result<Vec<Row>, LabError>>()?;
            let ratio = (1..=f.order())
                .map(|k| f.a(k).norm() / k as f64)
                .fold(0.0, f64::max);
            let check = Check::new("bieberbach_ratio", ratio <= 1.0 + ratio_slack, ratio, 1.0)
                .at(Some(m), None)
                .on(&c.name);
            Ok((rows, check))
        })
        .collect::<Result<Vec<_>, LabError>>()?;

    let mut rows = Vec::new();
    let mut checks = Vec::new();
    for (r, c) in per_member {
        rows.extend(r);
        checks.push(c);
    }
    let koebe_rows: Vec<bool> = corpus.iter().map(|(_, c)| koebe_like(&c.family)).collect();
    if koebe_rows.iter().any(|&k| k) {
        for (j, &n) in ns.iter().enumerate() {
            let cells: Vec<&Row> = (0..corpus.len()).map(|i| &rows[i * ns.len() + j]).collect();
            let bound = cells[0].value + cells[0].deviation;
            let allowed = slack * bound.max(1.0);
            let best = cells.iter().map(|r| r.value).fold(0.0, f64::max);
            let best_koebe = cells
                .iter()
                .zip(&koebe_rows)
                .filter(|(_, &k)| k)
                .map(|(r, _)| r.value)
                .fold(0.0, f64::max);
            checks.push(
                Check::new(
                    "zalcman_maxima_at_koebe",
                    best_koebe >= best - allowed,
                    best_koebe,
                    best,
                )
                .at(None, Some(n)),
            );
            let koebe_gap = cells
                .iter()
                .zip(&koebe_rows)
                .filter(|(_, &k)| k)
                .map(|(r, _)| r.deviation.abs())
                .fold(0.0, f64::max);
            checks.push(
                Check::new(
                    "zalcman_koebe_equality",
                    koebe_gap <= allowed,
                    koebe_gap,
                    allowed,
                )
                .at(None, Some(n)),
            );
        }
    }
    Ok(Body {
        rows,
        checks,
        members: corpus.into_iter().map(|(i, c)| (i, c.name)).collect(),
        ..Body::default()
    })
}

fn audit_member(
    cfg: &ScenarioConfig,
    m: usize,
    c: &CorpusMember,
) -> Result<(Vec<Row>, Vec<Check>), LabError> {
    let tol = |name: &str| cfg.tolerance(name);
    let f = make_schlicht(&c.family, cfg.series_order).map_err(LabError::at(Some(m), None))?;
    let ld = log_data(&f).map_err(LabError::at(Some(m), None))?;
    let est = estimate(&f, cfg.max_modulus_grid, m)?;
    let mut checks = Vec::new();
    let mut push = |check: Check| checks.push(check.on(&c.name));

    let rows = cfg
        .n_values()
        .into_iter()
        .map(|n| {
            let lm = lebedev_milin_check(&f, &ld, n).map_err(LabError::at(Some(m), Some(n)))?;
            Ok(Row {
                m,
                n,
                value: lm.a_abs,
                alpha_m: est.alpha,
                deviation: lm.rhs - lm.a_abs,
                flag: Flag::from_bool(lm.holds),
                invariant: "lebedev_milin".into(),
            })
        })
        .collect::<Result<Vec<Row>, LabError>>()?;

    let milin = milin_check(&ld);
    push(Check::new("milin", milin.passes, milin.max_partial, MILIN_BOUND).at(Some(m), None));
    let p =
        prawitz_check(&f, &PRAWITZ_RADII, PRAWITZ_POINTS).map_err(LabError::at(Some(m), None))?;
    push(Check::new("prawitz", p.violations == 0, p.violations as f64, 0.0).at(Some(m), None));

    if c.full_mapping {
        let width = tol("bracket_width");
        push(
            Check::new(
                "bracket_width",
                est.bracket_width <= width,
                est.bracket_width,
                width,
            )
            .at(Some(m), None),
        );
        let sn = sn_bound_check(&f, est.alpha, est.theta).map_err(LabError::at(Some(m), None))?;
        push(Check::new("sn_bound", sn.holds, sn.max_sq, sn.bound).at(Some(m), None));
        let terms = LEMMA3_TERMS.min(ld.order());
        let gap = bazilevich_gap(&ld, est.alpha, est.theta, terms)
            .map_err(LabError::at(Some(m), Some(terms)))?;
        let slack = tol("bazilevich_slack");
        push(Check::new("bazilevich", gap.gap >= -slack, gap.gap, -slack).at(Some(m), Some(terms)));
        let residual = lemma3_check(&ld, est.alpha, est.theta, terms)
            .map_err(LabError::at(Some(m), Some(terms)))?;
        let limit = tol("lemma3_residual");
        push(Check::new("lemma3", residual <= limit, residual, limit).at(Some(m), Some(terms)));
    }

    let order = cfg.grunsky_order;
    let g = invert_to_sigma(&f, 2 * order - 1).map_err(LabError::at(Some(m), Some(order)))?;
    let table = grunsky_matrix(&g, order).map_err(LabError::at(Some(m), Some(order)))?;
    let asym = table.max_asymmetry();
    let limit = tol("symmetry");
    push(Check::new("grunsky_symmetry", asym <= limit, asym, limit).at(Some(m), Some(order)));
    let norm = strong_grunsky_norm(&table).map_err(LabError::at(Some(m), Some(order)))?;
    let bound = 1.0 + tol("grunsky_norm_slack");
    push(Check::new("strong_grunsky", norm <= bound, norm, bound).at(Some(m), Some(order)));
    let z = Complex::new(cfg.z[0], cfg.z[1]);
    let d = full_mapping_defect(&table, &ld, &f, z).map_err(LabError::at(Some(m), Some(order)))?;
    if c.full_mapping {
        let limit = tol("defect_full");
        push(
            Check::new("full_mapping_defect", d.defect <= limit, d.defect, limit)
                .at(Some(m), Some(order)),
        );
    } else {
        let floor = tol("defect_nonfull_floor");
        push(
            Check::new("nonfull_defect", d.defect > floor, d.defect, floor)
                .at(Some(m), Some(order)),
        );
    }
    let limit = tol("identity_residual");
    push(
        Check::new(
            "grunsky_identity",
            d.identity_residual <= limit,
            d.identity_residual,
            limit,
        )
        .at(Some(m), Some(order)),
    );

    let limit = tol("tauber_residual");
    for n in TAUBER_INDICES.into_iter().filter(|&n| n <= ld.order()) {
        let t = tauber_decomposition_check(&ld, n, 1.0 - 1.0 / n as f64)
            .map_err(LabError::at(Some(m), Some(n)))?;
        push(
            Check::new(
                "tauber_decomposition",
                t.residual <= limit,
                t.residual,
                limit,
            )
            .at(Some(m), Some(n)),
        );
    }
    Ok((rows, checks))
}

fn inequality_audit(cfg: &ScenarioConfig) -> Result<Body, LabError> {
    let corpus = selected_corpus(cfg);
    let per_member = corpus
        .par_iter()
        .map(|(m, c)| audit_member(cfg, *m, c))
        .collect::<Result<Vec<_>, LabError>>()?;
    let mut body = Body {
        members: corpus.into_iter().map(|(i, c)| (i, c.name)).collect(),
        ..Body::default()
    };
    for (r, c) in per_member {
        body.rows.extend(r);
        body.checks.extend(c);
    }
    Ok(body)
}

/// Grunsky data of one corpus member at a single evaluation point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrunskySummary {
    pub function: String,
    pub order: usize,
    pub full_mapping: bool,
    pub z: Complex,
    pub strong_norm: f64,
    pub max_asymmetry: f64,
    /// `γ_{nn}` for `n = 1..=order`.
    pub diagonal: Vec<Complex>,
    pub defect: FullMappingDefect,
}

pub fn grunsky_summary(
    function: &str,
    order: usize,
    z: Complex,
) -> Result<GrunskySummary, LabError> {
    let member = standard_corpus()
        .into_iter()
        .find(|c| c.name == function)
        .ok_or_else(|| LabError::Config(format!("unknown corpus member {function:?}")))?;
    if order < 1 {
        return Err(LabError::Config("grunsky order must be at least 1".into()));
    }
    let f =
        make_schlicht(&member.family, 2 * order + 2).map_err(LabError::at(None, Some(order)))?;
    let ld = log_data(&f).map_err(LabError::at(None, Some(order)))?;
    let g = invert_to_sigma(&f, 2 * order - 1).map_err(LabError::at(None, Some(order)))?;
    let table = grunsky_matrix(&g, order).map_err(LabError::at(None, Some(order)))?;
    let defect =
        full_mapping_defect(&table, &ld, &f, z).map_err(LabError::at(None, Some(order)))?;
    Ok(GrunskySummary {
        function: member.name,
        order,
        full_mapping: member.full_mapping,
        z,
        strong_norm: strong_grunsky_norm(&table).map_err(LabError::at(None, Some(order)))?,
        max_asymmetry: table.max_asymmetry(),
        diagonal: (1..=order).map(|n| table.get(n, n)).collect(),
        defect,
    })
}

//! One function per subcommand: run the library, fill a [`RunReport`].

use rayon::prelude::*;
use serde_json::json;

use crate::fiber::{solve_potential, FiberPotential};
use crate::field::FieldProfile;
use crate::scattering::{embedded_exclusion, EmbeddedExclusion};
use crate::semiclassical::{
    agmon_decay_check, agmon_identity_residual, agmon_refinement, asymptotic_fit, compare_harmonic,
    counting_check, profile_decay_rate, relative_tolerance, AgmonWeight,
};
use crate::spectral::{
    ess_threshold, exclusion_analysis, spectrum_slice, sweep_bands, BandDiagram, Exclusion,
};

use super::config::RunConfig;
use super::report::{Cell, Curve, Record, RunReport, Table};
use super::CliError;

fn missing(table: &str) -> CliError {
    CliError::Config(format!("missing [{table}] table for this command"))
}

fn eta_for(
    profile: &FieldProfile,
    section: &str,
    theta: f64,
    eta: Option<f64>,
    fraction: f64,
) -> Result<f64, CliError> {
    if let Some(e) = eta {
        return Ok(e);
    }
    ess_threshold(profile, theta)
        .finite()
        .map(|t| fraction * t)
        .ok_or_else(|| {
            CliError::Config(format!(
                "{section}.eta: required, the essential threshold at theta = {theta} is infinite"
            ))
        })
}

fn window(w: Option<[f64; 2]>) -> Option<(f64, f64)> {
    w.map(|[a, b]| (a, b))
}

pub fn cmd_slice(cfg: &RunConfig) -> Result<RunReport, CliError> {
    let s = cfg.slice.as_ref().ok_or_else(|| missing("slice"))?;
    let mut report = RunReport::new("slice", cfg);
    let slice = spectrum_slice(&cfg.profile, s.xi, s.k_max, &cfg.grid)?;
    let mut table = Table::new("slice", &["n", "lambda", "error", "converged", "near_threshold"]);
    let mut curve = Curve {
        name: "slice".into(),
        comments: vec![format!("xi = {}, threshold = {}", s.xi, slice.ess_threshold)],
        columns: vec!["n".into(), "lambda".into(), "error".into()],
        rows: Vec::new(),
    };
    for (k, (l, e)) in slice.eigenvalues.iter().zip(&slice.errors).enumerate() {
        let f = slice.flags[k];
        table.push(vec![
            (k + 1).into(),
            (*l).into(),
            (*e).into(),
            f.converged.into(),
            f.near_threshold.into(),
        ]);
        curve.rows.push(Some(vec![(k + 1) as f64, *l, *e]));
    }
    report.verdict(
        format!("xi = {}", s.xi),
        format!(
            "{} eigenvalues below threshold {}",
            slice.eigenvalues.len(),
            slice.ess_threshold
        ),
        false,
    );
    report.records.push(Record::new(
        "spectral",
        "spectrum_slice",
        json!({"xi": s.xi, "k_max": s.k_max}),
        &slice,
        None,
    )?);
    report.tables.push(table);
    report.curves.push(curve);
    Ok(report)
}

fn sample_flags(d: &BandDiagram, i: usize) -> String {
    let s = &d.samples[i];
    if let Some(e) = &s.error {
        return format!("error: {e}");
    }
    let mut flags = Vec::new();
    if let Some(slice) = &s.slice {
        if slice.domain_capped {
            flags.push("domain_capped".to_string());
        }
        for (k, f) in slice.flags.iter().enumerate() {
            if !f.converged {
                flags.push(format!("n{}:unconverged", k + 1));
            }
            if f.near_threshold {
                flags.push(format!("n{}:near_threshold", k + 1));
            }
        }
    }
    if flags.is_empty() {
        "ok".into()
    } else {
        flags.join(";")
    }
}

fn band_curves(d: &BandDiagram, prefix: &str, comment: &str) -> Vec<Curve> {
    (1..=d.k_max)
        .filter(|&n| d.samples.iter().any(|s| s.band(n).is_some()))
        .map(|n| {
            let mut pts: Vec<(f64, f64, f64)> = d
                .samples
                .iter()
                .filter_map(|s| {
                    let slice = s.slice.as_ref()?;
                    Some((s.xi, *slice.eigenvalues.get(n - 1)?, slice.errors[n - 1]))
                })
                .collect();
            pts.sort_by(|a, b| a.0.total_cmp(&b.0));
            Curve {
                name: format!("{prefix}band_{n}"),
                comments: vec![comment.to_string(), format!("band {n}")],
                columns: vec!["xi".into(), "lambda".into(), "error".into()],
                rows: pts.into_iter().map(|(x, l, e)| Some(vec![x, l, e])).collect(),
            }
        })
        .collect()
}

pub fn cmd_bands(cfg: &RunConfig) -> Result<RunReport, CliError> {
    let s = cfg.sweep.as_ref().ok_or_else(|| missing("sweep"))?;
    let mut report = RunReport::new("bands", cfg);
    let d = sweep_bands(&cfg.profile, s.xi_min, s.xi_max, s.samples, s.k_max, &cfg.grid)?;
    let mut cols = vec!["xi".to_string(), "ess_threshold".to_string()];
    cols.extend((1..=s.k_max).map(|n| format!("lambda_{n}")));
    cols.push("flags".into());
    let mut table = Table {
        name: "bands".into(),
        columns: cols,
        rows: Vec::new(),
    };
    for (i, sample) in d.samples.iter().enumerate() {
        let mut row: Vec<Cell> = vec![sample.xi.into(), sample.ess_threshold.to_f64().into()];
        row.extend((1..=s.k_max).map(|n| Cell::from(sample.band(n))));
        row.push(sample_flags(&d, i).into());
        table.push(row);
    }
    let solved = d.samples.iter().filter(|s| s.slice.is_some()).count();
    report.verdict(
        "sweep".into(),
        format!("{solved}/{} samples solved", d.samples.len()),
        false,
    );
    report.curves = band_curves(&d, "", &format!("xi in [{}, {}]", s.xi_min, s.xi_max));
    report.records.push(Record::new(
        "spectral",
        "sweep_bands",
        json!({"xi_min": s.xi_min, "xi_max": s.xi_max, "samples": s.samples, "k_max": s.k_max}),
        &d,
        None,
    )?);
    report.tables.push(table);
    Ok(report)
}

pub fn cmd_flatband(cfg: &RunConfig) -> Result<RunReport, CliError> {
    let f = cfg.flatband.as_ref().ok_or_else(|| missing("flatband"))?;
    let mut report = RunReport::new("flatband", cfg);
    let mut table = Table::new(
        "flatband",
        &[
            "lambda",
            "component",
            "band",
            "samples",
            "min",
            "max",
            "oscillation",
            "budget",
            "verdict",
            "note",
        ],
    );
    for (i, &lambda) in f.lambdas.iter().enumerate() {
        let (rep, diagram) = exclusion_analysis(&cfg.profile, lambda, f.k_max, &cfg.grid, &f.options)?;
        for v in &rep.verdicts {
            table.push(vec![
                lambda.into(),
                v.component.to_string().into(),
                v.band.map_or(Cell::Empty, Cell::from),
                v.samples.into(),
                v.min.into(),
                v.max.into(),
                v.oscillation.into(),
                v.budget.into(),
                v.verdict.to_string().into(),
                v.note.clone().into(),
            ]);
        }
        let reasons: Vec<String> = rep
            .verdicts
            .iter()
            .map(|v| match v.band {
                Some(n) => format!("band {n} on {}: {}", v.component, v.verdict),
                None => format!("{}: {}", v.component, v.verdict),
            })
            .collect();
        report.verdict(
            format!("lambda = {lambda}"),
            format!(
                "excluded as eigenvalue: {} ({})",
                rep.excluded,
                reasons.join("; ")
            ),
            rep.excluded == Exclusion::Inconclusive,
        );
        report.curves.extend(band_curves(
            &diagram,
            &format!("flatband_{}_", i + 1),
            &format!("lambda = {lambda}"),
        ));
        report.records.push(Record::new(
            "spectral",
            "exclusion_analysis",
            json!({"lambda": lambda, "k_max": f.k_max, "options": f.options}),
            &rep,
            Some(rep.excluded == Exclusion::Yes),
        )?);
    }
    report.tables.push(table);
    Ok(report)
}

struct HarmonicPoint {
    theta: f64,
    h: f64,
    eta: f64,
    records: Vec<Record>,
    rows: Vec<Vec<Cell>>,
    lower: Vec<Cell>,
    counting: Vec<Cell>,
    agmon: Option<Vec<Cell>>,
    passes: Vec<(String, bool)>,
    relative: Vec<f64>,
}

pub fn cmd_harmonic(cfg: &RunConfig) -> Result<RunReport, CliError> {
    let hc = cfg.harmonic.as_ref().ok_or_else(|| missing("harmonic"))?;
    let mut report = RunReport::new("harmonic", cfg);
    let profile = &cfg.profile;
    let solver = cfg.grid.solver;
    let mut pairs = Vec::new();
    for &theta in &hc.thetas {
        let eta = eta_for(profile, "harmonic", theta, hc.eta, hc.eta_fraction)?;
        for &h in &hc.hs {
            pairs.push((theta, h, eta));
        }
    }
    let points: Vec<HarmonicPoint> = pairs
        .par_iter()
        .map(|&(theta, h, eta)| -> Result<HarmonicPoint, CliError> {
            let comps = compare_harmonic(profile, theta, h, hc.n_max, eta, &solver)?;
            let v = profile.effective_velocity(theta)?;
            let inputs = json!({"theta": theta, "h": h, "eta": eta, "n_max": hc.n_max});
            let mut records = vec![Record::new(
                "semiclassical",
                "compare_harmonic",
                &inputs,
                &comps,
                None,
            )?];
            let rows = comps
                .iter()
                .map(|c| {
                    vec![
                        theta.into(),
                        h.into(),
                        eta.into(),
                        c.n.into(),
                        c.lambda.into(),
                        c.harmonic.into(),
                        c.relative_error.into(),
                        c.lambda_error.into(),
                    ]
                })
                .collect();
            let mut passes = Vec::new();
            let lambda1 = comps.first().map(|c| (c.lambda, c.lambda_error));
            let bound = h * v / 2.0;
            let lower_ok = lambda1.is_some_and(|(l, e)| l >= bound - e - solver.tolerance(eta));
            passes.push(("lower bound".to_string(), lower_ok));
            records.push(Record::new(
                "semiclassical",
                "lower_bound",
                &inputs,
                json!({"lambda_1": lambda1.map(|p| p.0), "bound": bound}),
                Some(lower_ok),
            )?);
            let lower = vec![
                theta.into(),
                h.into(),
                lambda1.map(|p| p.0).into(),
                bound.into(),
                lower_ok.into(),
            ];

            let cc = counting_check(profile, theta, h, eta, window(hc.window), &solver)?;
            passes.push(("counting".to_string(), cc.pass));
            records.push(Record::new(
                "semiclassical",
                "counting_check",
                &inputs,
                &cc,
                Some(cc.pass),
            )?);
            let counting = vec![
                theta.into(),
                h.into(),
                eta.into(),
                cc.v_plus.into(),
                cc.n_computed.into(),
                cc.bound.into(),
                cc.pass.into(),
                cc.vacuous.into(),
                cc.outside_regime.into(),
            ];

            let agmon = if hc.agmon {
                let threshold = ess_threshold(profile, theta).to_f64();
                let e = eta.min(0.5 * threshold);
                let rate = profile_decay_rate(profile, theta, e, window(hc.window))?;
                let pot = FiberPotential::centered(profile, theta)?;
                let d = agmon_decay_check(&pot, h, e, 1, rate.gamma, hc.decay_bound, &solver)?;
                passes.push(("agmon decay".to_string(), d.pass));
                records.push(Record::new(
                    "semiclassical",
                    "agmon_decay_check",
                    json!({"theta": theta, "h": h, "energy": e, "rate": rate}),
                    &d,
                    Some(d.pass),
                )?);
                Some(vec![
                    theta.into(),
                    h.into(),
                    1usize.into(),
                    e.into(),
                    d.gamma.into(),
                    d.ratio.into(),
                    d.ratio_doubled.into(),
                    d.bound.into(),
                    d.pass.into(),
                ])
            } else {
                None
            };
            Ok(HarmonicPoint {
                theta,
                h,
                eta,
                records,
                rows,
                lower,
                counting,
                agmon,
                passes,
                relative: comps.iter().map(|c| c.relative_error).collect(),
            })
        })
        .collect::<Result<_, _>>()?;

    let mut harmonic = Table::new(
        "harmonic",
        &[
            "theta",
            "h",
            "eta",
            "n",
            "lambda",
            "harmonic",
            "relative_error",
            "lambda_error",
        ],
    );
    let mut lower = Table::new("lower_bound", &["theta", "h", "lambda_1", "bound", "pass"]);
    let mut counting = Table::new(
        "counting",
        &[
            "theta",
            "h",
            "eta",
            "v_plus",
            "n_computed",
            "bound",
            "pass",
            "vacuous",
            "outside_regime",
        ],
    );
    let mut agmon = Table::new(
        "agmon_decay",
        &[
            "theta",
            "h",
            "n",
            "energy",
            "gamma",
            "ratio",
            "ratio_doubled",
            "bound",
            "pass",
        ],
    );
    for p in &points {
        for r in &p.rows {
            harmonic.push(r.clone());
        }
        lower.push(p.lower.clone());
        counting.push(p.counting.clone());
        if let Some(a) = &p.agmon {
            agmon.push(a.clone());
        }
        for (what, ok) in &p.passes {
            report.verdict(
                format!("theta = {}, h = {}, eta = {}: {what}", p.theta, p.h, p.eta),
                if *ok { "pass" } else { "fail" }.into(),
                false,
            );
        }
        report.records.extend(p.records.iter().cloned());
    }
    // error trend in h for each θ and n
    for (ti, &theta) in hc.thetas.iter().enumerate() {
        let mut pts: Vec<&HarmonicPoint> = points.iter().filter(|p| p.theta == theta).collect();
        pts.sort_by(|a, b| b.h.total_cmp(&a.h));
        for n in 1..=hc.n_max {
            let series: Vec<(f64, f64)> = pts
                .iter()
                .filter_map(|p| p.relative.get(n - 1).map(|r| (p.h, *r)))
                .collect();
            if series.len() < 2 {
                continue;
            }
            let decreasing = series.windows(2).all(|w| w[1].1 < w[0].1);
            report.verdict(
                format!("theta = {theta}, n = {n}: relative error decreasing as h decreases"),
                if decreasing { "yes" } else { "no" }.into(),
                false,
            );
            report.curves.push(Curve {
                name: format!("harmonic_theta_{}_n_{n}", ti + 1),
                comments: vec![format!("theta = {theta}, n = {n}")],
                columns: vec!["h".into(), "relative_error".into()],
                rows: series.iter().map(|(h, r)| Some(vec![*h, *r])).collect(),
            });
        }
    }
    report.tables.extend([harmonic, lower, counting]);
    if hc.agmon {
        report.tables.push(agmon);
    }
    Ok(report)
}

pub fn cmd_asymptotics(cfg: &RunConfig) -> Result<RunReport, CliError> {
    let a = cfg.asymptotics.as_ref().ok_or_else(|| missing("asymptotics"))?;
    let mut report = RunReport::new("asymptotics", cfg);
    let xis: Vec<f64> = a.xi_decades.iter().map(|d| 10f64.powf(*d)).collect();
    let mut fits = Table::new(
        "asymptotics",
        &[
            "n",
            "slope",
            "target_slope",
            "coefficient",
            "target_coefficient",
            "residual",
        ],
    );
    let mut samples = Table::new("asymptotics_samples", &["n", "xi", "lambda", "error", "method"]);
    for &n in &a.n {
        let fit = asymptotic_fit(&cfg.profile, n, &xis, &cfg.grid)?;
        fits.push(vec![
            n.into(),
            fit.slope.into(),
            fit.target_slope.into(),
            fit.coefficient.into(),
            fit.target_coefficient.into(),
            fit.residual.into(),
        ]);
        for s in &fit.samples {
            let method = serde_json::to_value(s.method)
                .ok()
                .and_then(|v| v.as_str().map(String::from))
                .unwrap_or_default();
            samples.push(vec![
                n.into(),
                s.xi.into(),
                s.lambda.into(),
                s.error.into(),
                method.into(),
            ]);
        }
        report.verdict(
            format!("n = {n}"),
            format!(
                "slope {:.6} (target {:.6}), coefficient {:.6} (target {:.6})",
                fit.slope, fit.target_slope, fit.coefficient, fit.target_coefficient
            ),
            false,
        );
        report.curves.push(Curve {
            name: format!("asymptotics_n_{n}"),
            comments: vec![format!(
                "target lambda = {} * xi^{}",
                fit.target_coefficient, fit.target_slope
            )],
            columns: vec!["xi".into(), "lambda".into(), "target".into()],
            rows: fit
                .samples
                .iter()
                .map(|s| {
                    Some(vec![
                        s.xi,
                        s.lambda,
                        fit.target_coefficient * s.xi.powf(fit.target_slope),
                    ])
                })
                .collect(),
        });
        report.records.push(Record::new(
            "semiclassical",
            "asymptotic_fit",
            json!({"n": n, "xi": xis}),
            &fit,
            None,
        )?);
    }
    report.tables.extend([fits, samples]);
    Ok(report)
}

pub fn cmd_scattering(cfg: &RunConfig) -> Result<RunReport, CliError> {
    let s = cfg.scattering.as_ref().ok_or_else(|| missing("scattering"))?;
    let mut report = RunReport::new("scattering", cfg);
    let results: Vec<EmbeddedExclusion> = s
        .lambdas
        .par_iter()
        .map(|&l| embedded_exclusion(&cfg.profile, s.xi, l, &s.options))
        .collect::<Result<_, _>>()?;
    let mut table = Table::new(
        "scattering",
        &[
            "xi",
            "lambda",
            "side",
            "omega",
            "start",
            "re_a",
            "im_a",
            "re_b",
            "im_b",
            "amplitude",
            "threshold",
            "tail_bound",
            "w_l1",
            "horizon",
            "gronwall_violations",
            "excluded",
        ],
    );
    for r in &results {
        let c = &r.coefficients;
        let start = serde_json::to_value(r.start)
            .ok()
            .and_then(|v| v.as_str().map(String::from))
            .unwrap_or_default();
        table.push(vec![
            r.xi.into(),
            r.lambda.into(),
            r.side.to_string().into(),
            r.omega.into(),
            start.into(),
            c.a.re.into(),
            c.a.im.into(),
            c.b.re.into(),
            c.b.im.into(),
            r.amplitude.into(),
            r.threshold.into(),
            c.tail_bound.into(),
            r.w_l1.into(),
            r.horizon.into(),
            c.gronwall_violations.into(),
            r.excluded.into(),
        ]);
        report.verdict(
            format!("xi = {}, lambda = {}", r.xi, r.lambda),
            format!("excluded: {}", if r.excluded { "yes" } else { "no" }),
            false,
        );
        report.records.push(Record::new(
            "scattering",
            "embedded_exclusion",
            json!({"xi": r.xi, "lambda": r.lambda, "options": s.options}),
            r,
            Some(r.excluded),
        )?);
    }
    report.tables.push(table);
    Ok(report)
}

struct AgmonPoint {
    records: Vec<Record>,
    identity: Vec<Vec<Cell>>,
    refinement: Vec<Vec<Cell>>,
    decay: Vec<Vec<Cell>>,
    passes: Vec<(String, bool)>,
}

pub fn cmd_agmon(cfg: &RunConfig) -> Result<RunReport, CliError> {
    let ac = cfg.agmon.as_ref().ok_or_else(|| missing("agmon"))?;
    let mut report = RunReport::new("agmon", cfg);
    let profile = &cfg.profile;
    let mut pairs = Vec::new();
    for &theta in &ac.thetas {
        let e = eta_for(profile, "agmon", theta, ac.eta, ac.eta_fraction)?;
        for &h in &ac.hs {
            pairs.push((theta, h, e));
        }
    }
    let points: Vec<AgmonPoint> = pairs
        .par_iter()
        .map(|&(theta, h, e)| -> Result<AgmonPoint, CliError> {
            let pot = FiberPotential::centered(profile, theta)?;
            let solver = relative_tolerance(&cfg.grid.solver, e);
            let spectrum = solve_potential(&pot, h, e, e, ac.n_max, &solver)?;
            let gamma = match ac.gamma {
                Some(g) => g,
                None => profile_decay_rate(profile, theta, e, window(ac.window))?.gamma,
            };
            let threshold = ess_threshold(profile, theta).finite();
            let tag = format!("theta = {theta}, h = {h}");
            let mut pt = AgmonPoint {
                records: Vec::new(),
                identity: Vec::new(),
                refinement: Vec::new(),
                decay: Vec::new(),
                passes: Vec::new(),
            };
            let op = &spectrum.operator;
            let dx = op.grid.spacing();
            for k in 0..spectrum.fine.len() {
                let n = k + 1;
                let pair = spectrum.eigenpair(k)?;
                let zero = agmon_identity_residual(op, &pair, &AgmonWeight::zero())?;
                let t_psi = op.apply(&pair.psi);
                let quad: f64 = t_psi.iter().zip(&pair.psi).map(|(a, b)| a * b).sum::<f64>() * dx;
                let defect = (quad - pair.lambda).abs();
                let ok = (zero - defect).abs() <= 64.0 * f64::EPSILON * op.norm().max(1.0);
                pt.passes
                    .push((format!("{tag}, n = {n}: identity with zero weight"), ok));
                pt.identity.push(vec![
                    theta.into(),
                    h.into(),
                    n.into(),
                    pair.lambda.into(),
                    zero.into(),
                    defect.into(),
                    ok.into(),
                ]);

                let study = agmon_refinement(&pot, h, e, n, gamma, ac.cap, ac.levels, &solver)?;
                let order_ok = study.min_order() >= 1.0;
                pt.passes
                    .push((format!("{tag}, n = {n}: refinement order >= 1"), order_ok));
                for (i, (d, r)) in study.spacings.iter().zip(&study.residuals).enumerate() {
                    let order = if i == 0 {
                        Cell::Empty
                    } else {
                        study.orders[i - 1].into()
                    };
                    pt.refinement.push(vec![
                        theta.into(),
                        h.into(),
                        n.into(),
                        (*d).into(),
                        (*r).into(),
                        order,
                    ]);
                }

                let decay = agmon_decay_check(&pot, h, e, n, gamma, ac.decay_bound, &solver)?;
                pt.passes
                    .push((format!("{tag}, n = {n}: decay bound"), decay.pass));
                let negative = match (ac.negative_control, threshold) {
                    (true, Some(t)) if t > pair.lambda => {
                        let g = 2.0 * pair.lambda.sqrt() * (t - pair.lambda).sqrt() / h;
                        Some(agmon_decay_check(&pot, h, e, n, g, ac.decay_bound, &solver)?)
                    }
                    _ => None,
                };
                if let Some(neg) = &negative {
                    pt.passes
                        .push((format!("{tag}, n = {n}: negative control fails"), !neg.pass));
                }
                pt.decay.push(vec![
                    theta.into(),
                    h.into(),
                    n.into(),
                    decay.gamma.into(),
                    decay.ratio.into(),
                    decay.ratio_doubled.into(),
                    decay.pass.into(),
                    negative.as_ref().map(|d| d.gamma).into(),
                    negative.as_ref().map(|d| d.ratio).into(),
                    negative.as_ref().map_or(Cell::Empty, |d| d.pass.into()),
                ]);
                pt.records.push(Record::new(
                    "semiclassical",
                    "agmon",
                    json!({"theta": theta, "h": h, "energy": e, "n": n, "gamma": gamma, "cap": ac.cap}),
                    json!({
                        "identity_zero_weight": zero,
                        "eigen_defect": defect,
                        "refinement": study,
                        "decay": decay,
                        "negative_control": negative,
                    }),
                    Some(ok && order_ok && decay.pass && negative.as_ref().is_none_or(|d| !d.pass)),
                )?);
            }
            Ok(pt)
        })
        .collect::<Result<_, _>>()?;

    let mut identity = Table::new(
        "agmon_identity",
        &[
            "theta",
            "h",
            "n",
            "lambda",
            "identity_zero_weight",
            "eigen_defect",
            "match",
        ],
    );
    let mut refinement = Table::new(
        "agmon_refinement",
        &["theta", "h", "n", "spacing", "residual", "order"],
    );
    let mut decay = Table::new(
        "agmon_decay",
        &[
            "theta",
            "h",
            "n",
            "gamma",
            "ratio",
            "ratio_doubled",
            "pass",
            "negative_gamma",
            "negative_ratio",
            "negative_pass",
        ],
    );
    for p in points {
        identity.rows.extend(p.identity);
        refinement.rows.extend(p.refinement);
        decay.rows.extend(p.decay);
        for (what, ok) in p.passes {
            report.verdict(what, if ok { "pass" } else { "fail" }.into(), false);
        }
        report.records.extend(p.records);
    }
    report.tables.extend([identity, refinement, decay]);
    Ok(report)
}

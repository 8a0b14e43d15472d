use std::f64::consts::PI;

use anyhow::anyhow;
use ince_core::physics::{derive_config, gap_threshold, momentum_spectrum, PHatKind, PhysicalInputs};
use ince_core::verify::{cross_gram_max, gram_summary, normalization_check, oracle_eigenvalues, ORACLE_MAX_DIM};
use ince_core::wavefunction::prefactor;
use ince_core::{eigen_decompose, Branch, Parity, SpectralSolution, Tier, TridiagonalMatrix, TrigPolynomial};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::output::{cell, num, nums, opt_num, sig, Report};
use crate::{CliError, PhysicsArgs, ScanArgs, SpectrumArgs, VerifyArgs, WavefunctionArgs};

pub struct Outcome {
    pub report: Report,
    /// Normalised parameters for the manifest.
    pub parameters: Value,
    /// Set when the command produced output but must exit with status 1.
    pub failure: Option<String>,
}

fn solve(parity: Parity, n: i64, a: f64, tier: Tier) -> Result<SpectralSolution, CliError> {
    let m = TridiagonalMatrix::new(parity, n, a)?;
    Ok(eigen_decompose(&m, tier)?)
}

pub fn spectrum(args: &SpectrumArgs, tier: Tier, digits: usize) -> Result<Outcome, CliError> {
    let parity: Parity = args.parity.into();
    let sol = solve(parity, args.n, args.a, tier)?;
    let rows: Vec<i64> = sol.rows().collect();

    let mut table = Vec::with_capacity(sol.dim() * sol.dim());
    for (k, (eta, d)) in sol.eigenvalues().iter().zip(sol.eigenvectors()).enumerate() {
        for (r, x) in rows.iter().zip(d) {
            table.push(vec![(k + 1).to_string(), sig(*eta, digits), r.to_string(), sig(*x, digits)]);
        }
    }
    let json = json!({
        "parity": parity.as_str(),
        "n": args.n,
        "a": num(args.a),
        "tier": tier.as_str(),
        "eigenvalues": nums(sol.eigenvalues()),
        "eigenvectors": sol.eigenvectors().iter().map(|d| nums(d)).collect::<Vec<_>>(),
        "rows": rows,
        "working_precision": sol.precision().as_str(),
        "min_relative_gap": num(sol.min_relative_gap()),
    });
    Ok(Outcome {
        report: Report { json, header: vec!["k", "eta", "r", "D"], rows: table },
        parameters: json!({ "parity": parity.as_str(), "n": args.n, "a": num(args.a) }),
        failure: None,
    })
}

pub fn wavefunction(args: &WavefunctionArgs, tier: Tier, digits: usize) -> Result<Outcome, CliError> {
    if args.points < 2 {
        return Err(CliError::usage(anyhow!("--points must be at least 2")));
    }
    if !(args.xi_max > args.xi_min) {
        return Err(CliError::usage(anyhow!("--xi-max must exceed --xi-min")));
    }
    if !(args.tolerance >= 0.0) {
        return Err(CliError::usage(anyhow!("--tolerance must be >= 0")));
    }
    let parity: Parity = args.parity.into();
    let branch: Branch = args.branch.into();
    let sol = solve(parity, args.n, args.a, tier)?;
    let (k, eta) = sol.nearest(args.eta);
    if (eta - args.eta).abs() > args.tolerance {
        let mut by_distance: Vec<(usize, f64)> =
            sol.eigenvalues().iter().enumerate().map(|(i, &v)| (i + 1, v)).collect();
        by_distance.sort_by(|x, y| (x.1 - args.eta).abs().total_cmp(&(y.1 - args.eta).abs()));
        let nearest: Vec<String> =
            by_distance.iter().take(3).map(|(k, v)| format!("{} (k={k})", sig(*v, 17))).collect();
        return Err(CliError::usage(anyhow!(
            "no eigenvalue within {} of {}; nearest candidates: {}",
            args.tolerance,
            args.eta,
            nearest.join(", ")
        )));
    }
    let poly = TrigPolynomial::from_solution(&sol, k, branch)?;

    let step = (args.xi_max - args.xi_min) / (args.points - 1) as f64;
    let mut cols: [Vec<f64>; 4] = Default::default();
    let mut table = Vec::with_capacity(args.points);
    for j in 0..args.points {
        let xi = if j + 1 == args.points { args.xi_max } else { args.xi_min + j as f64 * step };
        let mut v = poly.evaluate(xi);
        if args.with_prefactor {
            v *= prefactor(args.a, xi);
        }
        let row = [xi, v.re, v.im, v.norm()];
        table.push(row.iter().map(|x| sig(*x, digits)).collect());
        for (c, x) in cols.iter_mut().zip(row) {
            c.push(x);
        }
    }
    let strengths = poly.harmonic_strengths();
    let total: f64 = strengths.iter().map(|(_, s)| s).sum();
    let json = json!({
        "parity": parity.as_str(),
        "n": args.n,
        "a": num(args.a),
        "tier": tier.as_str(),
        "k": k,
        "eta": num(eta),
        "branch": branch.as_str(),
        "with_prefactor": args.with_prefactor,
        "strengths": {
            "r": strengths.iter().map(|(r, _)| *r).collect::<Vec<_>>(),
            "strength": strengths.iter().map(|(_, s)| num(*s)).collect::<Vec<_>>(),
            "sum": num(total),
        },
        "trace": { "xi": nums(&cols[0]), "re": nums(&cols[1]), "im": nums(&cols[2]), "abs": nums(&cols[3]) },
    });
    Ok(Outcome {
        report: Report { json, header: vec!["xi", "re", "im", "abs"], rows: table },
        parameters: json!({
            "parity": parity.as_str(),
            "n": args.n,
            "a": num(args.a),
            "eta_selector": num(args.eta),
            "tolerance": num(args.tolerance),
            "xi_min": num(args.xi_min),
            "xi_max": num(args.xi_max),
            "points": args.points,
            "with_prefactor": args.with_prefactor,
            "branch": branch.as_str(),
        }),
        failure: None,
    })
}

pub fn physics(args: &PhysicsArgs, digits: usize) -> Result<Outcome, CliError> {
    let inputs = PhysicalInputs {
        photon_ev: args.photon_ev,
        plasma_ev: args.plasma_ev,
        density_cm3: args.density_cm3,
        intensity_wcm2: args.intensity,
    };
    let cfg = derive_config(&inputs)?;
    let fp = &cfg.first_principles;
    let sections: [(&str, Vec<(&str, f64)>); 4] = [
        (
            "inputs",
            vec![
                ("photon_ev", cfg.photon_ev),
                ("plasma_ev", cfg.plasma_ev),
                ("density_cm3", cfg.density_cm3),
                ("intensity_wcm2", cfg.intensity_wcm2),
            ],
        ),
        (
            "derived",
            vec![
                ("n_m", cfg.n_m),
                ("k0_per_cm", cfg.k0_per_cm),
                ("kp_per_cm", cfg.kp_per_cm),
                ("k0_over_kp", cfg.k0_over_kp()),
                ("plasma_wavelength_nm", cfg.plasma_wavelength_nm),
                ("mu0", cfg.mu0),
                ("photon_density_cm3", cfg.photon_density_cm3),
                ("a", cfg.a),
                ("mass_shift_ratio", cfg.mass_shift_ratio),
                ("kappa_scaled", cfg.kappa_scaled()),
                ("gap_threshold", gap_threshold(cfg.a)),
            ],
        ),
        (
            "first_principles",
            vec![
                ("field_v_per_m", fp.field_v_m),
                ("mu0", fp.mu0),
                ("photon_density_cm3", fp.photon_density_cm3),
                ("a_vector_potential", fp.a_forms[0]),
                ("a_field_wavelength", fp.a_forms[1]),
                ("a_density_ratio", fp.a_forms[2]),
                ("a_mu0", fp.a_forms[3]),
            ],
        ),
        (
            "discrepancy",
            vec![
                ("mu0", cfg.mu0_discrepancy()),
                ("a", cfg.a_discrepancy()),
                ("photon_density", cfg.photon_density_discrepancy()),
            ],
        ),
    ];
    let mut json = serde_json::Map::new();
    let mut table = Vec::new();
    for (section, entries) in &sections {
        let mut obj = serde_json::Map::new();
        for (key, value) in entries {
            obj.insert(key.to_string(), num(*value));
            table.push(vec![section.to_string(), key.to_string(), sig(*value, digits)]);
        }
        json.insert(section.to_string(), Value::Object(obj));
    }
    Ok(Outcome {
        report: Report { json: Value::Object(json), header: vec!["section", "quantity", "value"], rows: table },
        parameters: json!({
            "photon_ev": num(args.photon_ev),
            "plasma_ev": opt_num(args.plasma_ev),
            "density_cm3": opt_num(args.density_cm3),
            "intensity_wcm2": num(args.intensity),
        }),
        failure: None,
    })
}

/// `1,3,5..8` -> [1, 3, 5, 6, 7, 8]
fn parse_n_list(items: &[String]) -> Result<Vec<i64>, CliError> {
    let bad = |s: &str| CliError::usage(anyhow!("invalid --n entry '{s}' (expected N or LO..HI)"));
    let mut out = Vec::new();
    for item in items {
        let item = item.trim();
        if item.is_empty() {
            continue;
        }
        if let Some((lo, hi)) = item.split_once("..") {
            let lo: i64 = lo.trim().parse().map_err(|_| bad(item))?;
            let hi: i64 = hi.trim().trim_start_matches('=').parse().map_err(|_| bad(item))?;
            out.extend(lo..=hi);
        } else {
            out.push(item.parse().map_err(|_| bad(item))?);
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

pub fn scan(args: &ScanArgs, tier: Tier, digits: usize) -> Result<Outcome, CliError> {
    let parity: Parity = args.parity.into();
    let ns = parse_n_list(&args.n)?;
    let mut avals = args.a.clone();
    if let Some(bad) = avals.iter().find(|a| !a.is_finite()) {
        return Err(CliError::usage(anyhow!("non-finite a value {bad}")));
    }
    avals.sort_by(f64::total_cmp);
    avals.dedup();
    let grid: Vec<(i64, f64)> = ns.iter().flat_map(|&n| avals.iter().map(move |&a| (n, a))).collect();
    if grid.is_empty() {
        return Err(CliError::usage(anyhow!("empty scan grid")));
    }
    let blocks = grid
        .par_iter()
        .map(|&(n, a)| {
            let sol = solve(parity, n, a, tier)?;
            Ok((n, a, momentum_spectrum(&sol, args.pz, args.kappa)?))
        })
        .collect::<Result<Vec<_>, CliError>>()?;

    let mut rows_json = Vec::new();
    let mut table = Vec::new();
    for (n, a, records) in &blocks {
        for r in records {
            let kind = match r.p_hat_kind {
                PHatKind::Propagating => "propagating",
                PHatKind::Evanescent => "evanescent",
            };
            rows_json.push(json!({
                "n": n,
                "a": num(*a),
                "k": r.k,
                "eta": num(r.eta),
                "gap": r.gap,
                "p_xi_scaled": opt_num(r.p_xi()),
                "p_hat": num(r.p_hat),
                "p_hat_kind": kind,
            }));
            table.push(vec![
                parity.as_str().to_string(),
                n.to_string(),
                sig(*a, digits),
                r.k.to_string(),
                sig(r.eta, digits),
                r.gap.to_string(),
                cell(r.p_xi(), digits),
                sig(r.p_hat, digits),
                kind.to_string(),
            ]);
        }
    }
    let json = json!({
        "parity": parity.as_str(),
        "tier": tier.as_str(),
        "p_z": num(args.pz),
        "kappa": num(args.kappa),
        "rows": rows_json,
    });
    Ok(Outcome {
        report: Report {
            json,
            header: vec!["parity", "n", "a", "k", "eta", "gap", "p_xi_scaled", "p_hat", "p_hat_kind"],
            rows: table,
        },
        parameters: json!({
            "parity": parity.as_str(),
            "n": ns,
            "a": nums(&avals),
            "p_z": num(args.pz),
            "kappa": num(args.kappa),
        }),
        failure: None,
    })
}

enum Status {
    Pass,
    Fail,
    Skipped(String),
}

struct Check {
    name: &'static str,
    value: Option<f64>,
    threshold: f64,
    status: Status,
}

fn check(name: &'static str, value: f64, threshold: f64) -> Check {
    let status = if value <= threshold { Status::Pass } else { Status::Fail };
    Check { name, value: Some(value), threshold, status }
}

pub fn verify(args: &VerifyArgs, tier: Tier, digits: usize) -> Result<Outcome, CliError> {
    let parity: Parity = args.parity.into();
    let m = TridiagonalMatrix::new(parity, args.n, args.a)?;
    let sol = eigen_decompose(&m, tier)?;
    let dim = sol.dim();
    let a = args.a;

    let mut eig_res: f64 = 0.0;
    let mut norm_err: f64 = 0.0;
    for (eta, d) in sol.eigenvalues().iter().zip(sol.eigenvectors()) {
        let r = m.apply(d).iter().zip(d).map(|(md, x)| (md - eta * x).abs()).fold(0.0, f64::max);
        eig_res = eig_res.max(r / (eta.abs() + a * dim as f64).max(f64::MIN_POSITIVE));
        norm_err = norm_err.max((d.iter().map(|x| x * x).sum::<f64>() - 1.0).abs());
    }
    let trace = m.trace();
    let trace_err = (sol.eigenvalues().iter().sum::<f64>() - trace).abs() / trace.abs().max(1.0);

    let shift = args.corrupt_eigenvalue.unwrap_or(0.0);
    let zs: Vec<f64> = (0..64).map(|j| j as f64 * PI / 64.0).collect();
    let mut ode: f64 = 0.0;
    let mut conj: f64 = 0.0;
    let mut parseval: f64 = 0.0;
    for k in 1..=dim {
        let plus = TrigPolynomial::from_solution(&sol, k, Branch::Plus)?;
        let minus = plus.with_branch(Branch::Minus);
        let fmax = zs.iter().map(|&z| plus.jet_z(z)[0].norm()).fold(0.0, f64::max);
        let scale = ((plus.eta().abs() + 2.0 * args.n as f64 * a) * fmax).max(f64::MIN_POSITIVE);
        for p in [&plus, &minus] {
            let p = p.with_eta(p.eta() + shift);
            let r = zs.iter().map(|&z| p.ode_residual(z).norm()).fold(0.0, f64::max);
            ode = ode.max(r / scale);
        }
        let sum_abs = plus.abs_coefficient_sum();
        for j in 0..32 {
            let xi = -2.0 * PI + j as f64 * PI / 8.0;
            conj = conj.max((minus.evaluate(xi) - plus.evaluate(xi).conj()).norm() / sum_abs);
        }
        parseval = parseval.max((normalization_check(&plus) - 1.0).abs());
    }
    let gram = gram_summary(&sol, Branch::Plus)?;

    let oracle = if dim <= ORACLE_MAX_DIM {
        match oracle_eigenvalues(&m) {
            Ok(o) => {
                let d = sol.eigenvalues().iter().zip(&o).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
                check("oracle", d, 1e-10)
            }
            Err(e) => Check {
                name: "oracle",
                value: None,
                threshold: 1e-10,
                status: Status::Skipped(format!("oracle could not bracket all roots: {e}")),
            },
        }
    } else {
        Check {
            name: "oracle",
            value: None,
            threshold: 1e-10,
            status: Status::Skipped(format!("dimension {dim} exceeds oracle limit {ORACLE_MAX_DIM}")),
        }
    };

    let gap = sol.min_relative_gap();
    let checks = vec![
        check("eigen_residual", eig_res, 1e-10),
        check("normalization", norm_err, 1e-12),
        check("trace", trace_err, 1e-9),
        Check {
            name: "distinct",
            value: Some(gap),
            threshold: 0.0,
            status: if gap > 0.0 { Status::Pass } else { Status::Fail },
        },
        check("ode_residual", ode, 1e-8),
        check("conjugation", conj, 1e-15),
        check("parseval", parseval, 1e-12),
        check("gram_off_diagonal", gram.max_off_diagonal, 1e-9),
        check("quadrature_vs_bessel", gram.max_route_discrepancy, 1e-9),
        oracle,
    ];

    let mut cross = serde_json::Map::new();
    for other in [args.n - 1, args.n + 1] {
        if let Ok(om) = TridiagonalMatrix::new(parity, other, a) {
            let os = eigen_decompose(&om, tier)?;
            cross.insert(format!("n={other}"), num(cross_gram_max(&sol, &os, Branch::Plus)?));
        }
    }

    let failed: Vec<&str> = checks.iter().filter(|c| matches!(c.status, Status::Fail)).map(|c| c.name).collect();
    let mut table = Vec::new();
    let checks_json: Vec<Value> = checks
        .iter()
        .map(|c| {
            let (status, note) = match &c.status {
                Status::Pass => ("pass", None),
                Status::Fail => ("fail", None),
                Status::Skipped(why) => ("skipped", Some(why.clone())),
            };
            table.push(vec![
                c.name.to_string(),
                cell(c.value, digits),
                sig(c.threshold, digits),
                status.to_string(),
            ]);
            let mut obj = json!({
                "name": c.name,
                "value": opt_num(c.value),
                "threshold": num(c.threshold),
                "status": status,
            });
            if let Some(note) = note {
                obj["note"] = Value::String(note);
            }
            obj
        })
        .collect();
    let json = json!({
        "parity": parity.as_str(),
        "n": args.n,
        "a": num(a),
        "tier": tier.as_str(),
        "working_precision": sol.precision().as_str(),
        "pass": failed.is_empty(),
        "failed": failed,
        "checks": checks_json,
        "diagnostics": {
            "min_relative_gap": num(gap),
            "conjugated_gram_off_diagonal": num(gram.max_off_diagonal_conjugated),
            "cross_n_bilinear_max": Value::Object(cross),
        },
    });
    let failure = (!failed.is_empty()).then(|| format!("verification failed: {}", failed.join(", ")));
    Ok(Outcome {
        report: Report { json, header: vec!["check", "value", "threshold", "status"], rows: table },
        parameters: json!({
            "parity": parity.as_str(),
            "n": args.n,
            "a": num(a),
            "corrupt_eigenvalue": opt_num(args.corrupt_eigenvalue),
        }),
        failure,
    })
}

//! The six experiment commands.
//!
//! Each handler resolves its configuration keys (recording the echo),
//! runs the corresponding library operations, and returns the resolved
//! config together with checks, a JSON results payload, and — where the
//! command documents a CSV schema — the CSV rendering.
//!
//! CSV schemas:
//! - `flux` and `fit-bound`: `u,component,value,est_error` (for
//!   `fit-bound` the `u` column carries the power of r instead);
//! - `field-eval`: `quantity,component,value`;
//! - `evolve`: `tau,z0..z{D-1},u0..,a0..,flags`.
//!
//! `angular-check` and `balance` emit JSON reports only.

use std::path::PathBuf;

use serde_json::json;

use worldtube::balance::{balance_residual, momentum_rate_4d, momentum_rate_6d};
use worldtube::fields::{
    field_at_frame, potential_at_frame, stress_from_field, stress_split_at_frame,
};
use worldtube::fluxlab::{
    angular_moments, bound_coefficient_fit, moment2_closed, moment4_closed,
    radiative_momentum_rate, tube_angular_flux_window, tube_flux_window, StressPart,
};
use worldtube::minkowski::metric_sign;
use worldtube::motion::{evolve_4d, evolve_6d};
use worldtube::quad::SphereQuadrature;
use worldtube::{
    Bivector, Dim, ForceLaw, KinematicState, LorentzVector, Method4D, MotionState4D,
    MotionState6D, ParticleParams, SymTensor2, Worldline,
};

use crate::config::{usage, CliResult, ExperimentConfig, FileConfig, Resolver};
use crate::report::{Check, Outcome, OutputFormat};
use crate::{AngularArgs, BalanceArgs, Command, EvolveArgs, FieldArgs, FitArgs, FluxArgs};

pub fn dispatch(cmd: &Command, file: FileConfig) -> CliResult<(ExperimentConfig, Outcome)> {
    match cmd {
        Command::AngularCheck(a) => angular_check(Resolver::new("angular-check", file), a),
        Command::FieldEval(a) => field_eval(Resolver::new("field-eval", file), a),
        Command::Flux(a) => flux(Resolver::new("flux", file), a),
        Command::FitBound(a) => fit_bound(Resolver::new("fit-bound", file), a),
        Command::Balance(a) => balance(Resolver::new("balance", file), a),
        Command::Evolve(a) => evolve(Resolver::new("evolve", file), a),
    }
}

/// Resolve the shared output keys: `seed`, `format`, `out`.
fn output_keys(
    res: &mut Resolver,
    out: Option<&str>,
    format: Option<&str>,
    seed: Option<&str>,
    allow_csv: bool,
) -> CliResult<(OutputFormat, Option<PathBuf>)> {
    res.seed(seed)?;
    let format = match res.str_or("format", format, "json").as_str() {
        "json" => OutputFormat::Json,
        "csv" if allow_csv => OutputFormat::Csv,
        "csv" => {
            return Err(usage(format!(
                "key `format`: command `{}` documents no CSV schema; use json",
                res.command()
            )))
        }
        other => return Err(usage(format!("key `format` must be csv or json, got `{other}`"))),
    };
    let out = res.opt_str("out", out).map(PathBuf::from);
    Ok((format, out))
}

fn parse_worldline(dim: Dim, spec: &str) -> CliResult<Worldline> {
    Worldline::parse(dim, spec).map_err(|e| usage(format!("key `worldline`: {e}")))
}

fn check_degree(degree: usize, min: usize) -> CliResult<()> {
    if !(min..=200).contains(&degree) {
        return Err(usage(format!("key `degree` must be between {min} and 200, got {degree}")));
    }
    Ok(())
}

/// Unit timelike vector with the given spatial part.
fn unit_timelike(dim: Dim, spatial: &[f64]) -> LorentzVector {
    let d = dim.count();
    let mut u = LorentzVector::zero(dim);
    let mut w2 = 0.0;
    for i in 0..(d - 1) {
        u.set(i + 1, spatial[i]);
        w2 += spatial[i] * spatial[i];
    }
    u.set(0, (1.0 + w2).sqrt());
    u
}

fn max_abs(xs: &[f64]) -> f64 {
    xs.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
}

// ---------------------------------------------------------------- angular-check

/// Sphere-average identities: total solid angle, vanishing odd moments,
/// and the closed-form second and fourth direction moments, at rest and
/// under a fixed boost.
fn angular_check(mut res: Resolver, a: &AngularArgs) -> CliResult<(ExperimentConfig, Outcome)> {
    let dim = res.dim(a.dim.as_deref())?;
    let degree = res.usize_or("degree", a.degree.as_deref(), 12)?;
    check_degree(degree, 4)?;
    let tol = res.f64_or("tol", a.tol.as_deref(), 1e-12)?;
    let (format, out) =
        output_keys(&mut res, a.output.out.as_deref(), a.output.format.as_deref(),
                    a.output.seed.as_deref(), false)?;
    let cfg = res.finish()?;

    let quad = SphereQuadrature::new(dim, degree);
    let omega = dim.sphere_area();
    let boost_v = [0.2, -0.1, 0.05, 0.1, -0.05];
    let cases = [
        ("rest", unit_timelike(dim, &[0.0; 5][..dim.count() - 1])),
        ("boosted", unit_timelike(dim, &boost_v[..dim.count() - 1])),
    ];

    let mut checks = Vec::new();
    let mut case_payloads = Vec::new();
    for (label, u) in &cases {
        let mom = angular_moments(&quad, u, 4)?;
        let mass_dev = (mom.tensor(0)[0] - omega).abs() / omega;
        checks.push(Check::below(&format!("mass-{label}"), mass_dev, tol));
        let odd = max_abs(mom.tensor(1)).max(max_abs(mom.tensor(3))) / omega;
        checks.push(Check::below(&format!("odd-moments-{label}"), odd, tol));
        for (order, closed) in [(2usize, moment2_closed(u)), (4, moment4_closed(u))] {
            let scale = max_abs(&closed).max(1e-300);
            let dev = mom
                .tensor(order)
                .iter()
                .zip(&closed)
                .fold(0.0_f64, |m, (got, want)| m.max((got - want).abs()))
                / scale;
            checks.push(Check::below(&format!("moment{order}-{label}"), dev, tol));
        }
        case_payloads.push(json!({
            "label": label,
            "u": u.components(),
            "sphere_mass": mom.tensor(0)[0],
            "moment2": mom.tensor(2),
            "moment4": mom.tensor(4),
        }));
    }
    let results = json!({ "sphere_area": omega, "cases": case_payloads });
    Ok((cfg, Outcome { format, out, checks, results, csv: None }))
}

// ------------------------------------------------------------------ field-eval

fn tensor_contract_vector(t: &SymTensor2, v: &LorentzVector) -> LorentzVector {
    let dim = t.dim();
    let d = dim.count();
    let mut out = LorentzVector::zero(dim);
    for mu in 0..d {
        let mut s = 0.0;
        for nu in 0..d {
            s += t.get(mu, nu) * metric_sign(nu) * v.get(nu);
        }
        out.set(mu, s);
    }
    out
}

fn tensor_max_diff(a: &SymTensor2, b: &SymTensor2) -> f64 {
    let d = a.dim().count();
    let mut m = 0.0_f64;
    for i in 0..d {
        for j in 0..d {
            m = m.max((a.get(i, j) - b.get(i, j)).abs());
        }
    }
    m
}

/// Retarded potential, field strength, and stress split at one lab
/// point, with structural checks on the radiative part (null direction,
/// tracelessness, exact reassembly of the split).
fn field_eval(mut res: Resolver, a: &FieldArgs) -> CliResult<(ExperimentConfig, Outcome)> {
    let dim = res.dim(a.dim.as_deref())?;
    let wspec = res.require("worldline", a.worldline.as_deref())?;
    let w = parse_worldline(dim, &wspec)?;
    let e = res.f64_or("e", a.e.as_deref(), 1.0)?;
    let point = res.f64_list("point", a.point.as_deref())?;
    if point.len() != dim.count() {
        return Err(usage(format!(
            "key `point` needs {} comma-separated components for dim {}, got {}",
            dim.count(),
            dim.count(),
            point.len()
        )));
    }
    let tol = res.f64_or("tol", a.tol.as_deref(), 1e-10)?;
    let (format, out) =
        output_keys(&mut res, a.output.out.as_deref(), a.output.format.as_deref(),
                    a.output.seed.as_deref(), true)?;
    let cfg = res.finish()?;

    let y = LorentzVector::from_slice(dim, &point);
    let fr = w.retarded_frame(&y)?;
    let pot = potential_at_frame(&fr, e);
    let f = field_at_frame(&fr, e);
    let split = stress_split_at_frame(&fr, e);
    let total_direct = stress_from_field(&f);
    let d = dim.count();

    let scale = total_direct.max_abs().max(1e-300);
    let reassembly = tensor_max_diff(&split.total(), &total_direct) / scale;
    let null_dev = tensor_contract_vector(&split.t_rad, &fr.k).max_abs() / scale;
    let trace_dev = split.t_rad.trace().abs() / scale;
    let checks = vec![
        Check::below("split-reassembly", reassembly, tol),
        Check::below("radiative-null", null_dev, tol),
        Check::below("radiative-traceless", trace_dev, tol),
    ];

    let mut rows: Vec<(String, String, f64)> = vec![
        ("tau_ret".into(), "-".into(), fr.tau_ret()),
        ("r".into(), "-".into(), fr.r),
        ("a_k".into(), "-".into(), fr.a_k),
    ];
    for mu in 0..d {
        rows.push(("k".into(), format!("{mu}"), fr.k.get(mu)));
    }
    for mu in 0..d {
        rows.push(("potential".into(), format!("{mu}"), pot.get(mu)));
    }
    for (i, j) in Bivector::pairs(dim) {
        rows.push(("field".into(), format!("{i}{j}"), f.get(i, j)));
    }
    let tensor_rows = |name: &str, t: &SymTensor2, rows: &mut Vec<(String, String, f64)>| {
        for i in 0..d {
            for j in i..d {
                rows.push((name.to_string(), format!("{i}{j}"), t.get(i, j)));
            }
        }
    };
    tensor_rows("stress_rad", &split.t_rad, &mut rows);
    for (power, part) in &split.t_bnd_parts {
        tensor_rows(&format!("stress_bnd:{power}"), part, &mut rows);
    }
    tensor_rows("stress_total", &total_direct, &mut rows);

    let mut csv = String::from("quantity,component,value\n");
    let mut json_rows = Vec::new();
    for (q, comp, v) in &rows {
        csv.push_str(&format!("{q},{comp},{v}\n"));
        json_rows.push(json!({ "quantity": q, "component": comp, "value": v }));
    }
    let results = json!({ "rows": json_rows });
    Ok((cfg, Outcome { format, out, checks, results, csv: Some(csv) }))
}

// ------------------------------------------------------------------------ flux

/// Cumulative flux of the selected stress part through a world tube of
/// radius r, reported at `samples` points across the retarded-time
/// window. Momentum components are labeled `p0..`, angular-momentum
/// components `m{i}{j}` in lexicographic pair order.
fn flux(mut res: Resolver, a: &FluxArgs) -> CliResult<(ExperimentConfig, Outcome)> {
    let dim = res.dim(a.dim.as_deref())?;
    let wspec = res.require("worldline", a.worldline.as_deref())?;
    let w = parse_worldline(dim, &wspec)?;
    let e = res.f64_or("e", a.e.as_deref(), 1.0)?;
    let part_s = res.str_or("part", a.part.as_deref(), "total");
    let part: StressPart = part_s
        .parse()
        .map_err(|_| usage(format!("key `part` must be total, bnd, or rad, got `{part_s}`")))?;
    let quantity = res.str_or("quantity", a.quantity.as_deref(), "momentum");
    let r = res.require_f64("r", a.r.as_deref())?;
    if !(r > 0.0) {
        return Err(usage(format!("key `r` must be positive, got {r}")));
    }
    let window = res.pair("window", a.window.as_deref())?;
    if window.1 < window.0 {
        return Err(usage(format!("key `window`: [{}, {}] is inverted", window.0, window.1)));
    }
    let samples = res.usize_or("samples", a.samples.as_deref(), 8)?;
    if !(1..=100_000).contains(&samples) {
        return Err(usage(format!("key `samples` must be between 1 and 100000, got {samples}")));
    }
    let degree = res.usize_or("degree", a.degree.as_deref(), 10)?;
    check_degree(degree, 2)?;
    let tol = res.f64_or("tol", a.tol.as_deref(), 1e-6)?;
    let (format, out) =
        output_keys(&mut res, a.output.out.as_deref(), a.output.format.as_deref(),
                    a.output.seed.as_deref(), true)?;
    let cfg = res.finish()?;

    // sample edges; the last one is exactly the window end
    let mut edges = Vec::with_capacity(samples + 1);
    for i in 0..=samples {
        let t = if i == samples {
            window.1
        } else {
            window.0 + (window.1 - window.0) * i as f64 / samples as f64
        };
        edges.push(t);
    }

    let mut rows: Vec<(f64, String, f64, f64)> = Vec::new();
    let mut err_acc = 0.0_f64;
    match quantity.as_str() {
        "momentum" => {
            let mut acc = LorentzVector::zero(dim);
            for i in 1..=samples {
                let seg = tube_flux_window(&w, edges[i - 1], edges[i], r, part, e, degree)?;
                acc = acc + seg.p;
                err_acc += seg.est_error;
                for mu in 0..dim.count() {
                    rows.push((edges[i], format!("p{mu}"), acc.get(mu), err_acc));
                }
            }
        }
        "angular" => {
            let mut acc = Bivector::zero(dim);
            for i in 1..=samples {
                let seg = tube_angular_flux_window(&w, edges[i - 1], edges[i], r, part, e, degree)?;
                acc = acc + seg.m;
                err_acc += seg.est_error;
                for (i_, j_) in Bivector::pairs(dim) {
                    rows.push((edges[i], format!("m{i_}{j_}"), acc.get(i_, j_), err_acc));
                }
            }
        }
        other => {
            return Err(usage(format!(
                "key `quantity` must be momentum or angular, got `{other}`"
            )))
        }
    }

    let checks = vec![Check::below("quadrature-error", err_acc, tol)];
    let mut csv = String::from("u,component,value,est_error\n");
    let mut json_rows = Vec::new();
    for (u, comp, v, err) in &rows {
        csv.push_str(&format!("{u},{comp},{v},{err}\n"));
        json_rows.push(json!({ "u": u, "component": comp, "value": v, "est_error": err }));
    }
    let results = json!({ "rows": json_rows });
    Ok((cfg, Outcome { format, out, checks, results, csv: Some(csv) }))
}

// ------------------------------------------------------------------- fit-bound

/// Power-law fit of the bound momentum content against the tube radius.
/// Rows reuse the flux schema with the power of r in the `u` column and
/// the overall fit residual in `est_error`.
fn fit_bound(mut res: Resolver, a: &FitArgs) -> CliResult<(ExperimentConfig, Outcome)> {
    let dim = res.dim(a.dim.as_deref())?;
    let wspec = res.require("worldline", a.worldline.as_deref())?;
    let w = parse_worldline(dim, &wspec)?;
    let e = res.f64_or("e", a.e.as_deref(), 1.0)?;
    let tau = res.f64_or("tau", a.tau.as_deref(), 0.0)?;
    let radii = res.f64_list("radii", a.radii.as_deref())?;
    let mut sorted = radii.clone();
    sorted.sort_by(|x, y| x.partial_cmp(y).expect("finite radii"));
    sorted.dedup();
    if sorted.len() < 4 {
        return Err(usage(format!("key `radii` needs at least 4 distinct values, got {}", sorted.len())));
    }
    if !(sorted[0] > 0.0) {
        return Err(usage("key `radii` must be positive"));
    }
    if sorted[sorted.len() - 1] / sorted[0] < 9.9 {
        return Err(usage(format!(
            "key `radii` must span a decade, got ratio {:.3}",
            sorted[sorted.len() - 1] / sorted[0]
        )));
    }
    let degree = res.usize_or("degree", a.degree.as_deref(), 10)?;
    check_degree(degree, 2)?;
    let tol = res.f64_or("tol", a.tol.as_deref(), 1e-3)?;
    let (format, out) =
        output_keys(&mut res, a.output.out.as_deref(), a.output.format.as_deref(),
                    a.output.seed.as_deref(), true)?;
    let cfg = res.finish()?;

    let fit = bound_coefficient_fit(&w, tau, &radii, e, degree)?;
    let checks = vec![Check::below("fit-residual", fit.residual, tol)];
    let mut csv = String::from("u,component,value,est_error\n");
    let mut json_rows = Vec::new();
    for (power, coeff) in &fit.coefficients {
        for mu in 0..dim.count() {
            let v = coeff.get(mu);
            csv.push_str(&format!("{power},p{mu},{v},{}\n", fit.residual));
            json_rows.push(json!({
                "u": power, "component": format!("p{mu}"), "value": v,
                "est_error": fit.residual,
            }));
        }
    }
    let results = json!({ "rows": json_rows, "residual": fit.residual });
    Ok((cfg, Outcome { format, out, checks, results, csv: Some(csv) }))
}

// --------------------------------------------------------------------- balance

/// Momentum and angular-momentum balance residuals sampled along a
/// worldline. The default force `closing` is the one the balance
/// equations demand (analytic momentum rate plus radiated rate), so
/// residuals measure internal consistency; any other force spec
/// measures how far that force is from closing the balance.
fn balance(mut res: Resolver, a: &BalanceArgs) -> CliResult<(ExperimentConfig, Outcome)> {
    let dim = res.dim(a.dim.as_deref())?;
    let wspec = res.require("worldline", a.worldline.as_deref())?;
    let w = parse_worldline(dim, &wspec)?;
    let m = res.f64_or("m", a.m.as_deref(), 1.0)?;
    let mu = res.f64_or("mu", a.mu.as_deref(), 0.0)?;
    let e = res.f64_or("e", a.e.as_deref(), 1.0)?;
    let prm = ParticleParams::new(m, mu, e)
        .map_err(|err| usage(format!("keys `m`/`mu`/`e`: {err}")))?;
    let span = res.pair("span", a.span.as_deref())?;
    if span.1 < span.0 {
        return Err(usage(format!("key `span`: [{}, {}] is inverted", span.0, span.1)));
    }
    let step = res.f64_or("step", a.step.as_deref(), 0.01)?;
    if !(step > 0.0) {
        return Err(usage(format!("key `step` must be positive, got {step}")));
    }
    let n = ((span.1 - span.0) / step + 1e-9).floor() as usize;
    if n > 1_000_000 {
        return Err(usage(format!("key `step` yields {n} samples; at most 1000000 allowed")));
    }
    let force_spec = res.str_or("force", a.force.as_deref(), "closing");
    let law = if force_spec == "closing" {
        None
    } else {
        Some(ForceLaw::parse(dim, &force_spec).map_err(|e| usage(format!("key `force`: {e}")))?)
    };
    let tol = res.f64_or("tol", a.tol.as_deref(), 1e-10)?;
    let (format, out) =
        output_keys(&mut res, a.output.out.as_deref(), a.output.format.as_deref(),
                    a.output.seed.as_deref(), false)?;
    let cfg = res.finish()?;

    let f_ext = |st: &KinematicState| match &law {
        Some(l) => l.value(st),
        None => {
            let p_dot = match dim {
                Dim::Four => momentum_rate_4d(st, &prm),
                Dim::Six => momentum_rate_6d(st, &prm),
            };
            p_dot + radiative_momentum_rate(st, prm.e)
        }
    };

    let mut samples = Vec::with_capacity(n + 1);
    let mut dp_worst = 0.0_f64;
    let mut dm_worst = 0.0_f64;
    for i in 0..=n {
        let tau = if i == n { span.0 + step * n as f64 } else { span.0 + step * i as f64 };
        let rep = balance_residual(&w, tau, &prm, f_ext);
        dp_worst = dp_worst.max(rep.dp_norm / rep.dp_scale.max(1e-300));
        dm_worst = dm_worst.max(rep.dm_norm / rep.dm_scale.max(1e-300));
        let dm_comps: Vec<f64> =
            Bivector::pairs(dim).map(|(i_, j_)| rep.dm_residual.get(i_, j_)).collect();
        samples.push(json!({
            "tau": tau,
            "dp_residual": rep.dp_residual.components(),
            "dp_norm": rep.dp_norm,
            "dp_scale": rep.dp_scale,
            "dm_residual": dm_comps,
            "dm_norm": rep.dm_norm,
            "dm_scale": rep.dm_scale,
        }));
    }
    let checks = vec![
        Check::below("momentum-balance", dp_worst, tol),
        Check::below("angular-balance", dm_worst, tol),
    ];
    let results = json!({ "samples": samples });
    Ok((cfg, Outcome { format, out, checks, results, csv: None }))
}

// ---------------------------------------------------------------------- evolve

/// Integrate the radiation-reaction equations of motion. Initial data
/// come from the worldline catalog at the span start (default `rest`);
/// the 4D method is `direct` or `reduced`, while the 6D branch follows
/// from the particle constants. A truncated run flags its last row
/// `runaway` and fails the completed-span check.
fn evolve(mut res: Resolver, a: &EvolveArgs) -> CliResult<(ExperimentConfig, Outcome)> {
    let dim = res.dim(a.dim.as_deref())?;
    let wspec = res.str_or("worldline", a.worldline.as_deref(), "rest");
    let w = parse_worldline(dim, &wspec)?;
    let m = res.f64_or("m", a.m.as_deref(), 1.0)?;
    let mu = res.f64_or("mu", a.mu.as_deref(), 0.0)?;
    let e = res.f64_or("e", a.e.as_deref(), 1.0)?;
    let prm = ParticleParams::new(m, mu, e)
        .map_err(|err| usage(format!("keys `m`/`mu`/`e`: {err}")))?;
    let span = res.pair("span", a.span.as_deref())?;
    if span.1 < span.0 {
        return Err(usage(format!("key `span`: [{}, {}] is inverted", span.0, span.1)));
    }
    let step = res.f64_or("step", a.step.as_deref(), 0.01)?;
    if !(step > 0.0) {
        return Err(usage(format!("key `step` must be positive, got {step}")));
    }
    if (span.1 - span.0) / step > 2_000_000.0 {
        return Err(usage("key `step` yields more than 2000000 steps"));
    }
    let method = match dim {
        Dim::Four => match res.str_or("method", a.method.as_deref(), "reduced").as_str() {
            "direct" => Method4D::Direct,
            "reduced" => Method4D::Reduced,
            other => {
                return Err(usage(format!(
                    "key `method` must be direct or reduced, got `{other}`"
                )))
            }
        },
        Dim::Six => {
            if res.opt_str("method", a.method.as_deref()).is_some() {
                return Err(usage(
                    "key `method` applies only to dim 4; the 6D branch follows from e and mu",
                ));
            }
            Method4D::Reduced // unused
        }
    };
    let force_spec = res.str_or("force", a.force.as_deref(), "zero");
    let law = ForceLaw::parse(dim, &force_spec).map_err(|e| usage(format!("key `force`: {e}")))?;
    let (format, out) =
        output_keys(&mut res, a.output.out.as_deref(), a.output.format.as_deref(),
                    a.output.seed.as_deref(), true)?;
    let cfg = res.finish()?;

    let init = w.state_full(span.0);
    let traj = match dim {
        Dim::Four => evolve_4d(
            &MotionState4D { z: init.z, u: init.u, a: init.a },
            &prm,
            &law,
            span,
            step,
            method,
        )?,
        Dim::Six => evolve_6d(
            &MotionState6D { z: init.z, u: init.u, a: init.a, a1: init.a1, a2: init.a2 },
            &prm,
            &law,
            span,
            step,
        )?,
    };

    let d = dim.count();
    let mut csv = String::from("tau");
    for label in ["z", "u", "a"] {
        for mu in 0..d {
            csv.push_str(&format!(",{label}{mu}"));
        }
    }
    csv.push_str(",flags\n");
    let mut json_rows = Vec::new();
    let last_idx = traj.samples.len() - 1;
    let mut min_dtau = step;
    for (idx, st) in traj.samples.iter().enumerate() {
        if idx > 0 {
            min_dtau = min_dtau.min(st.tau - traj.samples[idx - 1].tau);
        }
        let flags = if traj.runaway && idx == last_idx { "runaway" } else { "" };
        csv.push_str(&format!("{}", st.tau));
        for vec in [&st.z, &st.u, &st.a] {
            for mu in 0..d {
                csv.push_str(&format!(",{}", vec.get(mu)));
            }
        }
        csv.push_str(&format!(",{flags}\n"));
        json_rows.push(json!({
            "tau": st.tau,
            "z": st.z.components(),
            "u": st.u.components(),
            "a": st.a.components(),
            "flags": flags,
        }));
    }

    let gap = span.1 - traj.samples[last_idx].tau;
    let checks = vec![
        Check {
            name: "completed-span".to_string(),
            pass: gap <= 0.0 && !traj.runaway,
            value: gap,
            tolerance: 0.0,
        },
        Check::above("monotone-tau", min_dtau, 0.0),
    ];
    let results = json!({
        "method": traj.method,
        "runaway": traj.runaway,
        "steps": traj.steps,
        "max_embedded_error": traj.max_embedded_error,
        "max_chain_drift": traj.max_chain_drift,
        "rows": json_rows,
    });
    Ok((cfg, Outcome { format, out, checks, results, csv: Some(csv) }))
}

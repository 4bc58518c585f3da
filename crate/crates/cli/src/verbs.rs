//! One function per CLI verb. Each builds a [`Report`], optionally writes
//! an artifact for `--emit`, and returns whether the verb's check (if any)
//! passed.

use std::path::Path;

use maxplus::asymptotics::{detect_coupling, power_trace, turnpike_profile, CouplingVerdict};
use maxplus::eigen::{check_eigen_rows, check_super_eigen, principal_eigenbasis};
use maxplus::io::{parse_vector, write_matrix, write_vector};
use maxplus::kernels::{
    boundary_column_probe, catalog, kernel_by_spec, martin_kernel, property_t_probe, truncate,
    ArcCount,
};
use maxplus::spectral::{kleene_star, max_cycle_mean, normalize, spectral_summary};
use maxplus::{Error, Tolerance, Trop};

use crate::report::{arcs, classes, csv, path, Format, Report};
use crate::source::{emit_file, load, CliError, Loaded, Source};
use crate::{Common, Outcome};

/// Matrices and vectors up to this size are printed inline in text mode;
/// larger ones go through `--emit`.
const INLINE_LIMIT: usize = 12;

/// Reproducibility header shared by every report: what ran, at which
/// tolerance, on which source, over which window.
fn header(rep: &mut Report, verb: &str, eps: f64, src: &Loaded) {
    rep.kv("verb", verb);
    rep.kv("eps", eps);
    rep.kv("source", &src.label);
    match src.window {
        Some(w) => rep.kv("window", w),
        None => rep.kv("window", "none"),
    }
    if !src.rows_truncated.is_empty() {
        rep.kv("rows_truncated", csv(&src.rows_truncated));
    }
}

fn matrix_block(rep: &mut Report, name: &str, m: &maxplus::TropMatrix) {
    if m.n() <= INLINE_LIMIT {
        rep.blank();
        rep.note(name);
        rep.block(&write_matrix(m));
    } else {
        rep.note(format!(
            "{name} has size {} > {INLINE_LIMIT}; use --emit FILE to export it",
            m.n()
        ));
    }
}

fn vector_block(rep: &mut Report, name: &str, u: &[Trop]) {
    if u.len() <= INLINE_LIMIT {
        rep.blank();
        rep.note(name);
        rep.block(&write_vector(u));
    } else {
        rep.note(format!(
            "{name} has {} entries; use --emit FILE to export it",
            u.len()
        ));
    }
}

fn arc_count(c: ArcCount) -> String {
    match c {
        ArcCount::Finite(k) => k.to_string(),
        ArcCount::Infinite => "inf".to_string(),
    }
}

fn opt<T: std::fmt::Display>(v: &Option<T>) -> String {
    match v {
        Some(x) => x.to_string(),
        None => "none".to_string(),
    }
}

pub fn spectral(source: &Source, common: &Common) -> Result<Outcome, CliError> {
    let src = load(source)?;
    let tol = Tolerance::new(common.eps);
    let summary = spectral_summary(&src.matrix, tol);
    let mut rep = Report::new(common.format);
    header(&mut rep, "spectral", common.eps, &src);
    rep.kv("n", src.matrix.n());
    rep.kv("rho", summary.rho);
    rep.kv("gamma", summary.gamma);
    rep.kv("sigma", summary.sigma);
    rep.kv("critical_nodes", csv(&summary.critical_nodes));
    rep.kv("critical_arcs", arcs(&summary.critical_arcs));
    rep.kv("critical_classes", classes(&summary.critical_classes));
    rep.kv("recurrence_classes", classes(&summary.recurrence_classes));
    rep.kv("marginal_nodes", csv(&summary.marginal_nodes));
    if let Some(out) = &common.emit {
        let shifted = normalize(&src.matrix)?;
        emit_file(out, &write_matrix(&shifted))?;
        rep.kv("emitted", out.display());
        rep.note("emitted matrix is the source shifted entrywise by -rho");
    }
    rep.finish();
    Ok(Outcome::Success)
}

pub fn star(source: &Source, common: &Common, plus: bool) -> Result<Outcome, CliError> {
    let src = load(source)?;
    let tol = Tolerance::new(common.eps);
    let res = kleene_star(&src.matrix, tol);
    let chosen = if plus { &res.plus } else { &res.star };
    let mut rep = Report::new(common.format);
    header(&mut rep, "star", common.eps, &src);
    rep.kv("n", src.matrix.n());
    rep.kv("closure", if plus { "plus" } else { "star" });
    rep.kv("diverged", res.diverged);
    rep.kv("entries", chosen.nnz());
    if res.diverged {
        rep.note(
            "some entries are +inf: a walk between them can absorb a positive-weight circuit",
        );
    }
    matrix_block(&mut rep, "closure", chosen);
    if let Some(out) = &common.emit {
        emit_file(out, &write_matrix(chosen))?;
        rep.kv("emitted", out.display());
    }
    rep.finish();
    Ok(Outcome::Success)
}

#[allow(clippy::too_many_arguments)]
pub fn eigen(
    source: &Source,
    common: &Common,
    u: Option<std::path::PathBuf>,
    lambda: Option<f64>,
    super_mode: bool,
    skip: &[usize],
    assert: bool,
) -> Result<Outcome, CliError> {
    let src = load(source)?;
    let tol = Tolerance::new(common.eps);
    match u {
        None => {
            if assert {
                return Err(CliError::Usage(
                    "--assert needs a vector check; give --u FILE --lambda L".to_string(),
                ));
            }
            let basis = principal_eigenbasis(&src.matrix, tol)?;
            let mut rep = Report::new(common.format);
            header(&mut rep, "eigen", common.eps, &src);
            rep.kv("mode", "basis");
            rep.kv("lambda", basis.lambda);
            rep.kv("columns", basis.columns.len());
            rep.kv("representatives", csv(&basis.representatives));
            rep.kv("classes", classes(&basis.classes));
            for (k, col) in basis.columns.iter().enumerate() {
                vector_block(&mut rep, &format!("column {k}"), col);
            }
            if let Some(out) = &common.emit {
                let dir = out.parent().unwrap_or_else(|| Path::new("."));
                let stem = out
                    .file_stem()
                    .and_then(|s| s.to_str())
                    .unwrap_or("basis")
                    .to_string();
                let mut manifest = String::new();
                manifest.push_str(&format!("lambda={}\n", basis.lambda));
                manifest.push_str(&format!("columns={}\n", basis.columns.len()));
                for (k, col) in basis.columns.iter().enumerate() {
                    let file = dir.join(format!("{stem}.col{k}.trop"));
                    emit_file(&file, &write_vector(col))?;
                    manifest.push_str(&format!("col{k}.file={}\n", file.display()));
                    manifest.push_str(&format!(
                        "col{k}.representative={}\n",
                        basis.representatives[k]
                    ));
                    manifest.push_str(&format!("col{k}.class={}\n", csv(&basis.classes[k])));
                }
                emit_file(out, &manifest)?;
                rep.kv("emitted", out.display());
            }
            rep.finish();
            Ok(Outcome::Success)
        }
        Some(u_path) => {
            if common.emit.is_some() {
                return Err(CliError::Usage(
                    "--emit has no artifact in check mode".to_string(),
                ));
            }
            if super_mode && !skip.is_empty() {
                return Err(CliError::Usage(
                    "--skip only applies to the equality check".to_string(),
                ));
            }
            let lambda = Trop::new(lambda.ok_or_else(|| {
                CliError::Usage("--u needs --lambda to check against".to_string())
            })?);
            let text = std::fs::read_to_string(&u_path)
                .map_err(|e| CliError::Io(format!("{}: {e}", u_path.display())))?;
            let vec = parse_vector(&text)?;
            let report = if super_mode {
                check_super_eigen(&src.matrix, lambda, &vec, tol)?
            } else {
                check_eigen_rows(&src.matrix, lambda, &vec, skip, tol)?
            };
            let mut rep = Report::new(common.format);
            header(&mut rep, "eigen", common.eps, &src);
            rep.kv("mode", if super_mode { "check-super" } else { "check" });
            rep.kv("u", u_path.display());
            rep.kv("lambda", report.lambda);
            rep.kv("pass", report.pass);
            rep.kv("residual", report.residual);
            rep.kv("mismatch_rows", csv(&report.exact_zero_mismatch));
            rep.kv("checked_rows", report.checked_rows);
            rep.kv("skipped_rows", csv(&report.skipped_rows));
            rep.kv("marginal", report.marginal);
            if report.marginal {
                rep.note("residual within 10x of eps; consider re-running at another tolerance");
            }
            rep.finish();
            if assert && !report.pass {
                Ok(Outcome::CheckFailed)
            } else {
                Ok(Outcome::Success)
            }
        }
    }
}

pub fn decompose(
    source: &Source,
    common: &Common,
    u_path: &Path,
    assert: bool,
) -> Result<Outcome, CliError> {
    let src = load(source)?;
    let tol = Tolerance::new(common.eps);
    let text = std::fs::read_to_string(u_path)
        .map_err(|e| CliError::Io(format!("{}: {e}", u_path.display())))?;
    let vec = parse_vector(&text)?;
    let mut rep = Report::new(common.format);
    header(&mut rep, "decompose", common.eps, &src);
    rep.kv("u", u_path.display());
    match maxplus::eigen::decompose(&src.matrix, &vec, tol) {
        Ok(d) => {
            let basis = principal_eigenbasis(&src.matrix, tol)?;
            rep.kv("pass", d.residual <= common.eps);
            rep.kv("residual", d.residual);
            rep.kv("coefficients", csv(&d.coefficients));
            for (k, c) in d.coefficients.iter().enumerate() {
                rep.row(&[
                    ("column", k.to_string()),
                    ("representative", basis.representatives[k].to_string()),
                    ("coefficient", c.to_string()),
                ]);
            }
            if let Some(out) = &common.emit {
                emit_file(out, &write_vector(&d.reconstruction))?;
                rep.kv("emitted", out.display());
            }
            rep.finish();
            if assert && d.residual > common.eps {
                Ok(Outcome::CheckFailed)
            } else {
                Ok(Outcome::Success)
            }
        }
        Err(Error::NotEigenvector {
            lambda,
            residual,
            mismatches,
        }) => {
            rep.kv("pass", false);
            rep.kv("lambda", lambda);
            rep.kv("residual", residual);
            rep.kv("mismatch_rows_count", mismatches);
            rep.note("the vector is not an eigenvector for rho, so no decomposition exists");
            rep.finish();
            if assert {
                Ok(Outcome::CheckFailed)
            } else {
                Ok(Outcome::Success)
            }
        }
        Err(e) => Err(e.into()),
    }
}

pub fn powers(
    source: &Source,
    common: &Common,
    i: usize,
    j: usize,
    nmax: usize,
    normalized: bool,
) -> Result<Outcome, CliError> {
    let src = load(source)?;
    let trace = power_trace(&src.matrix, i, j, nmax, normalized)?;
    let mut rep = Report::new(common.format);
    header(&mut rep, "powers", common.eps, &src);
    rep.kv("i", i);
    rep.kv("j", j);
    rep.kv("normalized", normalized);
    rep.kv("shift", trace.rho);
    rep.kv("nmax", trace.n_max());
    rep.blank();
    for (k, v) in trace.values.iter().enumerate() {
        rep.row(&[("n", (k + 1).to_string()), ("value", v.to_string())]);
    }
    if let Some(out) = &common.emit {
        let mut body = String::new();
        for (k, v) in trace.values.iter().enumerate() {
            body.push_str(&format!("{}\t{}\n", k + 1, v));
        }
        emit_file(out, &body)?;
    }
    rep.finish();
    Ok(Outcome::Success)
}

#[allow(clippy::too_many_arguments)]
pub fn coupling(
    source: &Source,
    common: &Common,
    i: usize,
    j: usize,
    nmax: usize,
    hint: Option<usize>,
    assert: bool,
) -> Result<Outcome, CliError> {
    let src = load(source)?;
    let tol = Tolerance::new(common.eps);
    let sigma_hint = match hint {
        Some(h) if h >= 1 => h,
        Some(_) => return Err(CliError::Usage("--hint must be at least 1".to_string())),
        None => spectral_summary(&src.matrix, tol).sigma.max(1),
    };
    let trace = power_trace(&src.matrix, i, j, nmax, true)?;
    let report = detect_coupling(&trace, sigma_hint, tol);
    let verdict = match report.verdict {
        CouplingVerdict::Coupled => "coupled",
        CouplingVerdict::TransientToZero => "transient-to-zero",
        CouplingVerdict::Inconclusive => "inconclusive",
    };
    let mut rep = Report::new(common.format);
    header(&mut rep, "coupling", common.eps, &src);
    rep.kv("i", i);
    rep.kv("j", j);
    rep.kv("nmax", nmax);
    rep.kv("sigma_hint", sigma_hint);
    rep.kv("shift", trace.rho);
    rep.kv("verdict", verdict);
    rep.kv("sigma", opt(&report.sigma));
    rep.kv("n0", opt(&report.n0));
    rep.kv("checked", report.checked);
    rep.kv("periodic_values", csv(&report.periodic_values));
    if report.verdict == CouplingVerdict::Inconclusive {
        rep.note("no periodic tail certified within the horizon; try a larger --nmax");
    }
    if let Some(out) = &common.emit {
        let mut body = String::new();
        for (k, v) in trace.values.iter().enumerate() {
            body.push_str(&format!("{}\t{}\n", k + 1, v));
        }
        emit_file(out, &body)?;
        rep.kv("emitted", out.display());
    }
    rep.finish();
    if assert && report.verdict != CouplingVerdict::Coupled {
        Ok(Outcome::CheckFailed)
    } else {
        Ok(Outcome::Success)
    }
}

pub fn turnpike(
    source: &Source,
    common: &Common,
    i: usize,
    j: usize,
    from: usize,
    nmax: usize,
) -> Result<Outcome, CliError> {
    if from < 1 || from > nmax {
        return Err(CliError::Usage(format!(
            "need 1 <= --from <= --nmax, got from={from} nmax={nmax}"
        )));
    }
    let src = load(source)?;
    let tol = Tolerance::new(common.eps);
    let n_list: Vec<usize> = (from..=nmax).collect();
    let profile = turnpike_profile(&src.matrix, i, j, &n_list, tol)?;
    let mut rep = Report::new(common.format);
    header(&mut rep, "turnpike", common.eps, &src);
    rep.kv("i", i);
    rep.kv("j", j);
    rep.kv("from", from);
    rep.kv("nmax", nmax);
    rep.kv("max_noncritical", profile.max_noncritical);
    rep.kv("infeasible", csv(&profile.infeasible));
    rep.blank();
    for row in &profile.rows {
        rep.row(&[
            ("n", row.n.to_string()),
            ("weight", row.weight.to_string()),
            ("noncritical", row.noncritical_visits.to_string()),
            ("walk", path(&row.nodes)),
        ]);
    }
    if let Some(out) = &common.emit {
        let mut body = String::new();
        for row in &profile.rows {
            body.push_str(&format!(
                "{}\t{}\t{}\t{}\n",
                row.n,
                row.weight,
                row.noncritical_visits,
                path(&row.nodes)
            ));
        }
        emit_file(out, &body)?;
        rep.kv("emitted", out.display());
    }
    rep.finish();
    Ok(Outcome::Success)
}

#[allow(clippy::too_many_arguments)]
pub fn martin(
    source: &Source,
    common: &Common,
    lambda: f64,
    basepoint: usize,
    boundary: bool,
    rows: &[usize],
    cols: &[usize],
    assert: bool,
) -> Result<Outcome, CliError> {
    let src = load(source)?;
    let tol = Tolerance::new(common.eps);
    let kernel = src.as_kernel();
    let n_max = src.n_max();
    let mw = martin_kernel(&kernel, lambda, basepoint, n_max, tol)?;
    let bound_ok = mw.max_bound_excess <= common.eps;
    let mut rep = Report::new(common.format);
    header(&mut rep, "martin", common.eps, &src);
    rep.kv("lambda", lambda);
    rep.kv("basepoint", basepoint);
    rep.kv("rho_window", max_cycle_mean(&src.matrix));
    rep.kv("max_bound_excess", mw.max_bound_excess);
    rep.kv("bound_ok", bound_ok);
    vector_block(&mut rep, "pi (basepoint row of the shifted closure)", &mw.pi);
    matrix_block(&mut rep, "martin kernel", &mw.kernel);
    if boundary {
        let probe_rows: Vec<usize> = if rows.is_empty() {
            (0..=n_max.min(3)).collect()
        } else {
            rows.to_vec()
        };
        let probe_cols: Vec<usize> = if cols.is_empty() {
            let start = n_max / 2;
            let step = ((n_max - start) / 5).max(1);
            let mut c: Vec<usize> = (start..=n_max).step_by(step).collect();
            if c.last() != Some(&n_max) {
                c.push(n_max);
            }
            c
        } else {
            cols.to_vec()
        };
        rep.blank();
        for &r in &probe_rows {
            let probe =
                boundary_column_probe(&kernel, lambda, basepoint, r, &probe_cols, n_max, tol)?;
            let samples: Vec<String> = probe
                .samples
                .iter()
                .map(|(jj, v)| format!("{jj}:{v}"))
                .collect();
            rep.row(&[
                ("row", r.to_string()),
                ("samples", samples.join(",")),
                ("limit", opt(&probe.limit)),
            ]);
        }
        rep.note("limit is reported when the last three samples agree within eps");
    }
    if let Some(out) = &common.emit {
        emit_file(out, &write_matrix(&mw.kernel))?;
        rep.kv("emitted", out.display());
    }
    rep.finish();
    if assert && !bound_ok {
        Ok(Outcome::CheckFailed)
    } else {
        Ok(Outcome::Success)
    }
}

pub fn probe_tight(
    source: &Source,
    common: &Common,
    i: usize,
    j: usize,
    level: f64,
    assert: bool,
) -> Result<Outcome, CliError> {
    let src = load(source)?;
    let tol = Tolerance::new(common.eps);
    let kernel = src.as_kernel();
    let r = property_t_probe(&kernel, i, j, level, src.n_max(), tol)?;
    let mut rep = Report::new(common.format);
    header(&mut rep, "probe-tight", common.eps, &src);
    rep.kv("i", i);
    rep.kv("j", j);
    rep.kv("level", r.beta);
    rep.kv("level_set_size", r.level_set.len());
    rep.kv("level_set", csv(&r.level_set));
    rep.kv("saturated", r.saturated);
    if r.saturated {
        rep.note("the level set touches the window edge: nothing is certified; widen --window");
    } else {
        rep.note("the level set is interior to the window, so it is the level set of the kernel");
    }
    if let Some(out) = &common.emit {
        let body: String = r.level_set.iter().map(|v| format!("{v}\n")).collect();
        emit_file(out, &body)?;
        rep.kv("emitted", out.display());
    }
    rep.finish();
    if assert && r.saturated {
        Ok(Outcome::CheckFailed)
    } else {
        Ok(Outcome::Success)
    }
}

pub fn example(
    kernel: Option<&str>,
    window: Option<usize>,
    emit: Option<&Path>,
    eps: f64,
    format: Format,
) -> Result<Outcome, CliError> {
    let mut rep = Report::new(format);
    rep.kv("verb", "example");
    rep.kv("eps", eps);
    match kernel {
        None => {
            let all = catalog();
            rep.kv("window", "none");
            rep.kv("catalog", all.len());
            rep.blank();
            for k in &all {
                rep.kv("kernel", k.spec_string());
                rep.note(&k.description);
                rep.blank();
            }
            rep.note("show one kernel with `maxplus example --kernel \"<spec>\"`");
        }
        Some(spec) => {
            let k = kernel_by_spec(spec)?;
            match window {
                Some(w) => rep.kv("window", w),
                None => rep.kv("window", "none"),
            }
            rep.kv("name", &k.name);
            rep.kv("spec", k.spec_string());
            rep.kv("description", &k.description);
            rep.kv("rho_form", opt(&k.forms.rho));
            rep.kv("has_plus_form", k.forms.plus.is_some());
            rep.kv("has_star_form", k.forms.star.is_some());
            rep.kv("has_eigenvector_form", k.forms.eigenvector.is_some());
            rep.kv("has_martin_form", k.forms.martin.is_some());
            rep.kv("has_power_form", k.forms.power.is_some());
            rep.kv("spectrum", &k.forms.spectrum_note);
            rep.kv("convergence", &k.forms.convergence_note);
            rep.blank();
            rep.note("first rows, arcs as target:weight, horizon 12:");
            for node in 0..=5usize {
                let row = k.row(node, 12);
                let arcs_enc: Vec<String> = row
                    .arcs
                    .iter()
                    .map(|(j, w)| format!("{j}:{w}"))
                    .collect();
                rep.row(&[
                    ("row", node.to_string()),
                    ("arcs", arcs_enc.join(",")),
                    ("beyond_horizon", arc_count(row.dropped)),
                ]);
            }
            if let Some(w) = window {
                let win = truncate(&k, w)?;
                rep.blank();
                rep.kv("window_dropped_arcs", arc_count(win.dropped_arcs));
                rep.kv("window_rows_truncated", csv(&win.rows_truncated));
                if let Some(out) = emit {
                    emit_file(out, &write_matrix(&win.matrix))?;
                    rep.kv("emitted", out.display());
                }
            }
        }
    }
    rep.finish();
    Ok(Outcome::Success)
}

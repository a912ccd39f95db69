use crate::grid::parse_grid;
use crate::table::{cplx, emit, num, Table};
use crate::{check, Cli, Command, Failure};
use rayon::prelude::*;
use selberg_det::group_model::{load_orbifold, validate, ExpandedSpectrum, OrbifoldData, ValidationConfig};
use selberg_det::spectral_functions::{
    det_report, relative_zeta, selberg_zeta_log, selberg_zeta_log_derivative, selberg_zeta_product,
};
use selberg_det::trace::GeometricTheta;
use selberg_det::Complex64;

pub fn run(cli: &Cli) -> Result<(), Failure> {
    if !(cli.tol > 0.0 && cli.tol < 1.0) {
        return Err(Failure::Usage(format!("--tol must lie in (0, 1), got {}", cli.tol)));
    }
    let output = cli.output.as_deref();
    match cli.command {
        Command::Check => return check::run(cli),
        Command::Spectrum => {
            let orb = load(cli, None)?;
            return emit(&spectrum_table(&orb).render(), output);
        }
        _ => {}
    }
    let (flag, text) = match cli.command {
        Command::Trace => ("--t", cli.t.as_deref()),
        _ => ("--s", cli.s.as_deref()),
    };
    let text = text.ok_or_else(|| Failure::Usage(format!("{flag} is required for this command")))?;
    let grid = parse_grid(text).map_err(|m| Failure::Usage(format!("{flag}: {m}")))?;
    let table = match cli.command {
        Command::Trace => {
            if let Some(t) = grid.iter().find(|t| !(**t > 0.0)) {
                return Err(Failure::Usage(format!("--t values must be positive, got {t}")));
            }
            let orb = load(cli, None)?;
            trace_table(&orb, &grid, cli.tol)?
        }
        Command::Zeta => {
            let orb = load(cli, Some(&grid))?;
            zeta_table(&orb, &grid, cli.tol)?
        }
        Command::Det => {
            let orb = load(cli, Some(&grid))?;
            det_table(&orb, &grid, cli.tol, cli.closed_only)?
        }
        Command::Relzeta => {
            let orb = load(cli, None)?;
            relzeta_table(&orb, &grid, cli.tol)?
        }
        Command::Check | Command::Spectrum => unreachable!(),
    };
    emit(&table.render(), output)
}

/// Loads the input file and prints validation warnings for the intended use.
pub fn load(cli: &Cli, zeta_grid: Option<&[f64]>) -> Result<OrbifoldData, Failure> {
    let path = cli
        .input
        .as_deref()
        .ok_or_else(|| Failure::Usage("--input is required for this command".into()))?;
    let orb = load_orbifold(path)?;
    let cfg = ValidationConfig {
        zeta_requested: zeta_grid.is_some(),
        s_min: zeta_grid.map_or(2.0, |g| g.iter().cloned().fold(f64::INFINITY, f64::min)),
        ..Default::default()
    };
    for w in validate(&orb, &cfg).warnings {
        eprintln!("warning: {}: {}", w.field, w.message);
    }
    Ok(orb)
}

fn collect<T: Send>(rows: Vec<Result<T, Failure>>) -> Result<Vec<T>, Failure> {
    rows.into_iter().collect()
}

pub fn trace_table(orb: &OrbifoldData, grid: &[f64], tol: f64) -> Result<Table, Failure> {
    let theta = GeometricTheta::new(orb, tol)?;
    let rows = collect(
        grid.par_iter()
            .map(|&t| {
                let (value, br) = theta.evaluate(t)?;
                Ok(vec![
                    num(t),
                    num(value),
                    num(br.identity_term.re),
                    num(br.elliptic_term.re),
                    num(br.loxodromic_term.re),
                    num(br.scattering_term.re),
                    num(br.cuspidal_elliptic_term.re),
                    num(br.parabolic_term.re),
                    num(value - br.total.re),
                    num(br.loxodromic_tail),
                ])
            })
            .collect(),
    )?;
    let mut table = Table::new(vec![
        "t[1/eigenvalue]",
        "theta[1]",
        "identity_term[1]",
        "elliptic_term[1]",
        "loxodromic_term[1]",
        "scattering_term[1]",
        "cuspidal_elliptic_term[1]",
        "parabolic_term[1]",
        "cusp_correction[1]",
        "loxodromic_tail[1]",
    ]);
    table.rows = rows;
    Ok(table)
}

pub fn zeta_table(orb: &OrbifoldData, grid: &[f64], tol: f64) -> Result<Table, Failure> {
    let with_product = orb.loxodromic.iter().all(|c| c.spectral.is_some());
    let rows = collect(
        grid.par_iter()
            .map(|&s| {
                let z = Complex64::new(s, 0.0);
                let log_z = selberg_zeta_log(z, orb, tol)?;
                let dlog = selberg_zeta_log_derivative(z, orb, tol)?;
                let product = if with_product {
                    cplx(selberg_zeta_product(z, orb, tol)?)
                } else {
                    [String::new(), String::new()]
                };
                let mut row = vec![num(s)];
                row.extend(cplx(log_z.value));
                row.push(num(log_z.tail_bound));
                row.push(log_z.tail_rigorous.to_string());
                row.extend(cplx(dlog.value));
                row.extend(product);
                Ok(row)
            })
            .collect(),
    )?;
    let mut table = Table::new(vec![
        "s[1]",
        "re_log_z[1]",
        "im_log_z[1]",
        "tail_bound[1]",
        "tail_rigorous[bool]",
        "re_log_derivative[1]",
        "im_log_derivative[1]",
        "re_product[1]",
        "im_product[1]",
    ]);
    table.rows = rows;
    Ok(table)
}

pub fn det_table(orb: &OrbifoldData, grid: &[f64], tol: f64, closed_only: bool) -> Result<Table, Failure> {
    let reports = collect(
        grid.par_iter()
            .map(|&s| Ok(det_report(Complex64::new(s, 0.0), orb, tol, closed_only)?))
            .collect(),
    )?;
    let opt = |x: Option<f64>| x.map_or(String::new(), num);
    let mut table = Table::new(vec![
        "s[1]",
        "re_log_z[1]",
        "im_log_z[1]",
        "re_omega[1]",
        "im_omega[1]",
        "c1[1]",
        "c2[1]",
        "c3[1]",
        "d1[1]",
        "re_theorem_form[1]",
        "im_theorem_form[1]",
        "re_corollary_form[1]",
        "im_corollary_form[1]",
        "re_family_form[1]",
        "im_family_form[1]",
        "re_numeric[1]",
        "im_numeric[1]",
        "gap_theorem[1]",
        "gap_corollary[1]",
        "gap_family[1]",
        "adjudicated[label]",
        "route_gap[1]",
        "log_z_tail_bound[1]",
    ]);
    for r in &reports {
        for w in &r.closed.warnings {
            eprintln!("warning: s = {}: {w}", r.s.re);
        }
        let k = &r.closed.constants;
        let mut row = vec![num(r.s.re)];
        row.extend(cplx(r.closed.log_z.value));
        row.extend(cplx(r.closed.omega));
        row.extend([num(k.c1), num(k.c2), num(k.c3), num(k.d1)]);
        row.extend(cplx(r.closed.theorem_form));
        row.extend(cplx(r.closed.corollary_form));
        row.extend(cplx(r.closed.family_form));
        match &r.numeric {
            Some(n) => row.extend(cplx(n.value)),
            None => row.extend([String::new(), String::new()]),
        }
        row.extend([opt(r.gap_theorem), opt(r.gap_corollary), opt(r.gap_family)]);
        row.push(r.adjudicated.map_or(String::new(), |a| a.label().to_string()));
        row.push(opt(r.route_gap()));
        row.push(num(r.closed.log_z.tail_bound));
        table.rows.push(row);
    }
    Ok(table)
}

pub fn relzeta_table(orb: &OrbifoldData, grid: &[f64], tol: f64) -> Result<Table, Failure> {
    let rows = collect(
        grid.par_iter()
            .map(|&s| {
                let v = relative_zeta(Complex64::new(s, 0.0), orb, tol)?;
                let mut row = vec![num(s)];
                row.extend(cplx(v));
                Ok(row)
            })
            .collect(),
    )?;
    let mut table = Table::new(vec!["s[1]", "re_relative_zeta[1]", "im_relative_zeta[1]"]);
    table.rows = rows;
    Ok(table)
}

pub fn spectrum_table(orb: &OrbifoldData) -> Table {
    let spectrum = ExpandedSpectrum::new(orb);
    let mut table = Table::new(vec![
        "index[1]",
        "power[1]",
        "m[1]",
        "norm[1]",
        "log_norm[1]",
        "re_a[1]",
        "im_a[1]",
        "re_tr_chi[1]",
        "im_tr_chi[1]",
        "re_weight[1]",
        "im_weight[1]",
    ]);
    for (i, t) in spectrum.terms.iter().enumerate() {
        let mut row = vec![i.to_string(), t.power.to_string(), t.m.to_string(), num(t.norm), num(t.log_norm)];
        row.extend(cplx(t.a));
        row.extend(cplx(t.tr_chi));
        row.extend(cplx(t.weight));
        table.rows.push(row);
    }
    table
}

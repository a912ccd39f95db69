//! The invariant suite behind `selberg-det check`.

use crate::commands::load;
use crate::table::emit;
use crate::{Cli, Failure};
use selberg_det::geometry::Point;
use selberg_det::group_model::{synthetic, CuspidalElliptic, LoxodromicClass, OrbifoldData, SpectralData};
use selberg_det::kernels::{fourier_partner, shc_transform, HeatPair};
use selberg_det::lattice_siegel::{
    cusp_heat_sum, eta_infinity, kronecker_l, poisson_sum, siegel_g, CuspLattice, CuspRepresentation, EtaSource,
    LatticeCharacter, PlaneLattice,
};
use selberg_det::spectral_functions::{
    det_report, omega, selberg_zeta_log, selberg_zeta_log_derivative, selberg_zeta_product, D1_COCOMPACT,
};
use selberg_det::trace::{resolvent_difference, GeometricTheta};
use selberg_det::{Complex64, Error};
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::Write as _;

type Goldens = BTreeMap<String, f64>;

enum Verdict {
    Pass(String),
    Fail(String),
    Skip(String),
}

struct Check {
    name: &'static str,
    about: &'static str,
    run: fn(&OrbifoldData, &Goldens) -> Result<Verdict, Error>,
}

/// Built-in golden values and the relative tolerance each is held to.
const GOLDENS: [(&str, f64, f64); 8] = [
    ("poisson_gaussian", 1.180_340_599_016_096_2, 1e-13),
    ("siegel_square_half", -1.189_207_115_002_721, 1e-13),
    ("kronecker_square_half", -1.088_793_045_151_801, 1e-13),
    ("eta_square", 0.822_825_249_678_847, 1e-12),
    ("d1_cocompact", -0.036_489_973_978_576_52, 1e-14),
    ("log_zeta_single_class", -0.006_953_145_562_805_692, 1e-13),
    ("product_single_class", 0.993_070_971_624_658_2, 1e-14),
    ("omega_single_entry", -0.030_195_559_408_811_306, 1e-11),
];

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn against_golden(goldens: &Goldens, key: &str, value: f64) -> Verdict {
    let (_, _, tol) = GOLDENS.iter().find(|g| g.0 == key).expect("known golden");
    let golden = goldens[key];
    let rel = (value - golden).abs() / golden.abs();
    let text = format!("{value:.16e} vs golden {golden:.16e} (relative {rel:.1e}, limit {tol:.0e})");
    if rel <= *tol {
        Verdict::Pass(text)
    } else {
        Verdict::Fail(text)
    }
}

fn bounded(label: &str, value: f64, limit: f64) -> Verdict {
    let text = format!("{label} {value:.2e} (limit {limit:.0e})");
    if value <= limit {
        Verdict::Pass(text)
    } else {
        Verdict::Fail(text)
    }
}

fn single_class() -> OrbifoldData {
    let mut orb = synthetic::cocompact(1, 4.0, 4.0);
    orb.loxodromic[0] = LoxodromicClass {
        a: real(2.0),
        norm_primitive: 4.0,
        m: 1,
        tr_chi: real(1.0),
        spectral: Some(SpectralData {
            zeta: real(-1.0),
            t: vec![real(1.0)],
            t_prime: vec![real(1.0)],
        }),
    };
    orb
}

fn checks() -> Vec<Check> {
    vec![
        Check {
            name: "transform_pair",
            about: "Selberg/Harish-Chandra transform of the heat point-pair is e^{-tλ} on 12 points",
            run: |_, _| {
                let mut worst: f64 = 0.0;
                for &t in &[0.1, 0.5, 1.0, 2.0] {
                    let pair = HeatPair::new(t)?;
                    for &lambda in &[1.0, 2.0, 5.0] {
                        let s = Complex64::new(0.0, (lambda - 1.0f64).sqrt());
                        let h = shc_transform(|x| pair.k(x).unwrap_or(f64::NAN), s, 1e-11)?.value;
                        let exact = (-t * lambda).exp();
                        worst = worst.max((h.re - exact).abs() / exact);
                    }
                }
                Ok(bounded("max relative error", worst, 1e-8))
            },
        },
        Check {
            name: "fourier_partner",
            about: "numeric Fourier partner of e^{-tλ} against its closed form on 40 points",
            run: |_, _| {
                let mut worst: f64 = 0.0;
                for &t in &[0.5, 2.0] {
                    let pair = HeatPair::new(t)?;
                    for i in 0..20 {
                        let r = 10.0 * i as f64 / 19.0;
                        let g: f64 = fourier_partner(|l: f64| (-t * l).exp(), r, 1e-12)?.value;
                        worst = worst.max((g - pair.g(r)).abs());
                    }
                }
                Ok(bounded("max abs error", worst, 1e-10))
            },
        },
        Check {
            name: "poisson_gaussian",
            about: "Poisson summation residual for e^{-π|u|²} on the square lattice, plus its golden sum",
            run: |_, goldens| {
                let f = |u: Complex64| real((-PI * u.norm_sqr()).exp());
                let r = poisson_sum(f, f, &PlaneLattice::from_tau(Complex64::new(0.0, 1.0))?, 1e-14)?;
                if r.residual > 1e-12 {
                    return Ok(bounded("residual", r.residual, 1e-12));
                }
                Ok(against_golden(goldens, "poisson_gaussian", r.lhs.re))
            },
        },
        Check {
            name: "cusp_heat_identity",
            about: "cusp heat sum at t = 50 reduces to the identity term",
            run: |_, _| {
                let lat = CuspLattice::new(Complex64::new(0.0, 1.0), 1, None)?;
                let rep = CuspRepresentation {
                    singular_dim: 1,
                    ..Default::default()
                };
                let j = Point::on_axis(1.0)?;
                let s = cusp_heat_sum(&j, &j, 50.0, &lat, &rep, 1e-10)?;
                let id = selberg_det::kernels::heat_point_pair(1.0, 50.0)?;
                Ok(bounded("abs difference", (s.singular_scalar - id).abs(), 1e-10))
            },
        },
        Check {
            name: "siegel_square_half",
            about: "Siegel function g_(1/2, 0)(i)",
            run: |_, goldens| {
                let g = siegel_g(0.5, 0.0, Complex64::new(0.0, 1.0), 1e-15)?;
                Ok(against_golden(goldens, "siegel_square_half", g.re))
            },
        },
        Check {
            name: "kronecker_square_half",
            about: "L(Λ, ψ) for Λ = Z + Zi and ψ(1) = -1, ψ(i) = 1",
            run: |_, goldens| {
                let lat = CuspLattice::new(Complex64::new(0.0, 1.0), 1, None)?;
                let l = kronecker_l(&lat, &LatticeCharacter { u: 0.5, v: 0.0 })?;
                Ok(against_golden(goldens, "kronecker_square_half", l))
            },
        },
        Check {
            name: "eta_square",
            about: "computed η∞ for the square lattice",
            run: |_, goldens| {
                let lat = CuspLattice::new(Complex64::new(0.0, 1.0), 1, None)?;
                Ok(against_golden(goldens, "eta_square", eta_infinity(&lat, None)?.value))
            },
        },
        Check {
            name: "d1_cocompact",
            about: "the determinant constant γ + log 4 − 2",
            run: |_, goldens| Ok(against_golden(goldens, "d1_cocompact", D1_COCOMPACT)),
        },
        Check {
            name: "log_zeta_single_class",
            about: "log Z(3) for one primitive class with a = 2",
            run: |_, goldens| {
                let v = selberg_zeta_log(real(3.0), &single_class(), 1e-14)?.value;
                Ok(against_golden(goldens, "log_zeta_single_class", v.re))
            },
        },
        Check {
            name: "product_single_class",
            about: "Euler product Z(3) for one primitive class with a = 2",
            run: |_, goldens| {
                let v = selberg_zeta_product(real(3.0), &single_class(), 1e-14)?;
                Ok(against_golden(goldens, "product_single_class", v.re))
            },
        },
        Check {
            name: "omega_single_entry",
            about: "Ω(2) for one cuspidal elliptic entry ε = i, tr χ = 1, |C| = 2",
            run: |_, goldens| {
                let mut orb = synthetic::picard_like();
                if let Some(c) = orb.cusp.as_mut() {
                    c.cuspidal_elliptic = vec![CuspidalElliptic {
                        epsilon: Complex64::new(0.0, 1.0),
                        c_abs: 1.0,
                        order_centralizer: 2,
                        tr_chi: real(1.0),
                    }];
                }
                Ok(against_golden(goldens, "omega_single_entry", omega(real(2.0), &orb, 1e-12)?.re))
            },
        },
        Check {
            name: "input_breakdown_sum",
            about: "input: breakdown families add up to the total at t = 0.1, 1, 10",
            run: |orb, _| {
                let th = GeometricTheta::new(orb, 1e-11)?;
                let mut worst: f64 = 0.0;
                for &t in &[0.1, 1.0, 10.0] {
                    let (_, b) = th.evaluate(t)?;
                    let parts = [
                        b.identity_term,
                        b.elliptic_term,
                        b.loxodromic_term,
                        b.scattering_term,
                        b.cuspidal_elliptic_term,
                        b.parabolic_term,
                    ];
                    let sum: Complex64 = parts.iter().sum();
                    let scale: f64 = parts.iter().map(|p| p.norm()).sum();
                    worst = worst.max((b.total - sum).norm() / scale.max(1e-300));
                }
                Ok(bounded("max relative mismatch", worst, 1e-12))
            },
        },
        Check {
            name: "input_small_time",
            about: "input: θ(1e-3) within 2% of its four-term small-time expansion",
            run: |orb, _| {
                let th = GeometricTheta::new(orb, 1e-11)?;
                let v = th.theta(1e-3)?;
                let e = th.coeffs().eval(1e-3);
                Ok(bounded("relative deviation", (v - e).abs() / v.abs(), 0.02))
            },
        },
        Check {
            name: "input_zeta_dual_forms",
            about: "input: exp(Dirichlet series) equals the Euler product at s = 2, 3, 5",
            run: |orb, _| {
                if orb.loxodromic.iter().any(|c| c.spectral.is_none()) {
                    return Ok(Verdict::Skip("classes without spectral data".into()));
                }
                let mut worst: f64 = 0.0;
                for &s in &[2.0, 3.0, 5.0] {
                    let series = selberg_zeta_log(real(s), orb, 1e-12)?.value.exp();
                    worst = worst.max((series - selberg_zeta_product(real(s), orb, 1e-12)?).norm());
                }
                Ok(bounded("max difference", worst, 1e-10))
            },
        },
        Check {
            name: "input_resolvent_closure",
            about: "input: loxodromic family of the resolvent pair equals the series form at (2.5, 8)",
            run: |orb, _| {
                let (s, b) = (real(2.5), real(8.0));
                let v = resolvent_difference(s, b, orb, 1e-12)?;
                let expected = selberg_zeta_log_derivative(s, orb, 1e-13)?.value / (2.0 * s)
                    - selberg_zeta_log_derivative(b, orb, 1e-13)?.value / (2.0 * b);
                Ok(bounded("difference", (v - expected).norm(), 1e-6))
            },
        },
        Check {
            name: "input_two_route_determinant",
            about: "input: some closed form matches the numeric determinant at s = 2.5, 3 and 4",
            run: |orb, _| {
                let forms = ["theorem", "corollary", "family"];
                let mut matching = [true; 3];
                let mut best = [0.0f64; 3];
                for &s in &[2.5, 3.0, 4.0] {
                    let r = det_report(real(s), orb, 1e-10, false)?;
                    for (i, gap) in [r.gap_theorem, r.gap_corollary, r.gap_family].into_iter().enumerate() {
                        let gap = gap.unwrap_or(f64::NAN);
                        matching[i] &= gap <= 1e-4;
                        best[i] = best[i].max(gap);
                    }
                }
                let agreed: Vec<&str> = (0..3).filter(|&i| matching[i]).map(|i| forms[i]).collect();
                let worst = (0..3).filter(|&i| matching[i]).map(|i| best[i]).fold(f64::NAN, f64::min);
                let text = if agreed.is_empty() {
                    format!("no closed form within 1e-4 at every s; smallest gaps {:.2e}, {:.2e}, {:.2e}", best[0], best[1], best[2])
                } else {
                    format!("matching at every s: {}; worst gap {worst:.2e} (limit 1e-4)", agreed.join(", "))
                };
                Ok(if agreed.is_empty() { Verdict::Fail(text) } else { Verdict::Pass(text) })
            },
        },
    ]
}

fn read_goldens(cli: &Cli) -> Result<Goldens, Failure> {
    let mut goldens: Goldens = GOLDENS.iter().map(|(k, v, _)| (k.to_string(), *v)).collect();
    let Some(path) = &cli.golden else {
        return Ok(goldens);
    };
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let parse = |message: String| Failure::Lib(Error::Parse { line: i + 1, message });
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| parse(format!("expected `name = value`, found `{line}`")))?;
        let key = key.trim();
        if !goldens.contains_key(key) {
            return Err(parse(format!("unknown golden `{key}`")));
        }
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| parse(format!("`{}` is not a number", value.trim())))?;
        goldens.insert(key.to_string(), value);
    }
    Ok(goldens)
}

pub fn run(cli: &Cli) -> Result<(), Failure> {
    let suite = checks();
    let mut out = String::new();
    if cli.list {
        for c in &suite {
            let _ = writeln!(out, "{:<28} {}", c.name, c.about);
        }
        return emit(&out, cli.output.as_deref());
    }
    let goldens = read_goldens(cli)?;
    let (orb, source) = match &cli.input {
        Some(p) => (load(cli, None)?, p.display().to_string()),
        None => (synthetic::flagship(), "built-in flagship data".to_string()),
    };
    let _ = writeln!(
        out,
        "convention: log det(Δ − (1 − s²)) = −∂H/∂w(0, s), the derivative in w at w = 0"
    );
    let _ = writeln!(out, "data: {source}");
    match &orb.cusp {
        None => {
            let _ = writeln!(out, "eta_inf: not used (no cusp)");
        }
        Some(c) => {
            let e = eta_infinity(&c.lattice, c.eta_inf)?;
            let label = match e.source {
                EtaSource::Supplied => "supplied in the input file",
                EtaSource::Computed => "computed from the cusp lattice, derived-unverified",
            };
            let _ = writeln!(out, "eta_inf: {:.16e} ({label})", e.value);
        }
    }
    let mut failed = Vec::new();
    for c in &suite {
        let verdict = (c.run)(&orb, &goldens).unwrap_or_else(|e| Verdict::Fail(format!("error: {e}")));
        let (tag, text) = match verdict {
            Verdict::Pass(t) => ("PASS", t),
            Verdict::Fail(t) => {
                failed.push(c.name.to_string());
                ("FAIL", t)
            }
            Verdict::Skip(t) => ("SKIP", t),
        };
        let _ = writeln!(out, "{tag} {}: {text}", c.name);
    }
    let _ = writeln!(out, "{} checks, {} failed", suite.len(), failed.len());
    emit(&out, cli.output.as_deref())?;
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Checks(failed))
    }
}

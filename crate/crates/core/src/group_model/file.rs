//! Line-oriented orbifold file format.
//!
//! ```text
//! [meta]
//! volume = 1.0
//! dim_v = 1
//! chi_trivial = true
//!
//! [loxodromic]
//! class = re_a, im_a, norm_primitive, m, re_tr_chi, im_tr_chi
//! spectral = re_zeta, im_zeta; re_t1, im_t1, ...; re_tp1, im_tp1, ...
//!
//! [elliptic]
//! class = re_tr_chi, im_tr_chi, norm_primitive, order_e, m, k
//!
//! [cusp]
//! tau_re = 0.0
//! tau_im = 1.0
//! index = 2
//! k_inf = 1
//! l_inf = 1
//! tr_S0 = 1.0
//! Y = 1.0
//! character = u, v
//! cusp_elliptic = re_eps, im_eps, c_abs, order_centralizer, re_tr_chi, im_tr_chi
//! ```
//!
//! A `spectral` line attaches to the `class` line before it. `epsilon_re`,
//! `epsilon_im` and `eta_inf` are optional cusp keys.

use super::{
    validate, CuspData, CuspidalElliptic, EllipticClass, LoxodromicClass, OrbifoldData, SpectralData,
    ValidationConfig,
};
use crate::error::{Error, Result};
use crate::lattice_siegel::{CuspLattice, LatticeCharacter};
use num_complex::Complex64;
use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Section {
    Meta,
    Loxodromic,
    Elliptic,
    Cusp,
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: msg.into(),
    }
}

fn parse_f64(s: &str, line: usize) -> Result<f64> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| parse_err(line, format!("`{}` is not a number", s.trim())))?;
    if !v.is_finite() {
        return Err(parse_err(line, format!("`{}` is not finite", s.trim())));
    }
    Ok(v)
}

fn parse_u32(s: &str, line: usize) -> Result<u32> {
    s.trim()
        .parse()
        .map_err(|_| parse_err(line, format!("`{}` is not a non-negative integer", s.trim())))
}

fn parse_bool(s: &str, line: usize) -> Result<bool> {
    match s.trim() {
        "true" => Ok(true),
        "false" => Ok(false),
        other => Err(parse_err(line, format!("`{other}` is not true/false"))),
    }
}

fn fields(value: &str, n: usize, line: usize) -> Result<Vec<&str>> {
    let parts: Vec<&str> = value.split(',').map(str::trim).collect();
    if parts.len() != n {
        return Err(parse_err(line, format!("expected {n} comma-separated fields, found {}", parts.len())));
    }
    Ok(parts)
}

fn complex_list(group: &str, line: usize) -> Result<Vec<Complex64>> {
    let parts: Vec<&str> = group.split(',').map(str::trim).filter(|p| !p.is_empty()).collect();
    if parts.len() % 2 != 0 {
        return Err(parse_err(line, "complex lists need an even number of reals"));
    }
    parts
        .chunks(2)
        .map(|p| Ok(Complex64::new(parse_f64(p[0], line)?, parse_f64(p[1], line)?)))
        .collect()
}

struct Scalars {
    values: HashMap<&'static str, (String, usize)>,
    header_line: usize,
}

impl Scalars {
    fn new(header_line: usize) -> Self {
        Scalars {
            values: HashMap::new(),
            header_line,
        }
    }

    fn insert(&mut self, key: &'static str, value: &str, line: usize) -> Result<()> {
        if self.values.insert(key, (value.to_string(), line)).is_some() {
            return Err(parse_err(line, format!("duplicate key `{key}`")));
        }
        Ok(())
    }

    fn required(&self, key: &str, section: &str) -> Result<(&str, usize)> {
        self.values
            .get(key)
            .map(|(v, l)| (v.as_str(), *l))
            .ok_or_else(|| parse_err(self.header_line, format!("[{section}] is missing `{key}`")))
    }

    fn optional(&self, key: &str) -> Option<(&str, usize)> {
        self.values.get(key).map(|(v, l)| (v.as_str(), *l))
    }
}

const META_KEYS: [&str; 3] = ["volume", "dim_v", "chi_trivial"];
const CUSP_KEYS: [&str; 10] = [
    "tau_re", "tau_im", "index", "epsilon_re", "epsilon_im", "k_inf", "l_inf", "tr_S0", "Y", "eta_inf",
];

/// Parses and validates an orbifold description.
pub fn parse_orbifold(text: &str) -> Result<OrbifoldData> {
    let mut section: Option<Section> = None;
    let mut seen: HashMap<Section, usize> = HashMap::new();
    let mut meta = Scalars::new(0);
    let mut cusp = Scalars::new(0);
    let mut loxodromic: Vec<LoxodromicClass> = Vec::new();
    let mut elliptic: Vec<EllipticClass> = Vec::new();
    let mut characters = Vec::new();
    let mut cusp_elliptic = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if content.starts_with('[') {
            let name = content
                .strip_prefix('[')
                .and_then(|s| s.strip_suffix(']'))
                .ok_or_else(|| parse_err(line, "malformed section header"))?
                .trim();
            let sec = match name {
                "meta" => Section::Meta,
                "loxodromic" => Section::Loxodromic,
                "elliptic" => Section::Elliptic,
                "cusp" => Section::Cusp,
                other => return Err(parse_err(line, format!("unknown section [{other}]"))),
            };
            if seen.insert(sec, line).is_some() {
                return Err(parse_err(line, format!("section [{name}] appears twice")));
            }
            match sec {
                Section::Meta => meta.header_line = line,
                Section::Cusp => cusp.header_line = line,
                _ => {}
            }
            section = Some(sec);
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .map(|(k, v)| (k.trim(), v.trim()))
            .ok_or_else(|| parse_err(line, "expected `key = value`"))?;
        let sec = section.ok_or_else(|| parse_err(line, "key outside of any section"))?;
        match sec {
            Section::Meta => {
                let k = META_KEYS
                    .iter()
                    .find(|k| **k == key)
                    .ok_or_else(|| parse_err(line, format!("unknown key `{key}` in [meta]")))?;
                meta.insert(k, value, line)?;
            }
            Section::Loxodromic => match key {
                "class" => {
                    let f = fields(value, 6, line)?;
                    loxodromic.push(LoxodromicClass {
                        a: Complex64::new(parse_f64(f[0], line)?, parse_f64(f[1], line)?),
                        norm_primitive: parse_f64(f[2], line)?,
                        m: parse_u32(f[3], line)?,
                        tr_chi: Complex64::new(parse_f64(f[4], line)?, parse_f64(f[5], line)?),
                        spectral: None,
                    });
                }
                "spectral" => {
                    let last = loxodromic
                        .last_mut()
                        .ok_or_else(|| parse_err(line, "`spectral` must follow a `class` line"))?;
                    if last.spectral.is_some() {
                        return Err(parse_err(line, "class already has spectral data"));
                    }
                    let groups: Vec<&str> = value.split(';').collect();
                    if groups.len() != 3 {
                        return Err(parse_err(line, "spectral needs three `;`-separated groups"));
                    }
                    let zeta = complex_list(groups[0], line)?;
                    if zeta.len() != 1 {
                        return Err(parse_err(line, "first spectral group is the single complex zeta"));
                    }
                    last.spectral = Some(SpectralData {
                        zeta: zeta[0],
                        t: complex_list(groups[1], line)?,
                        t_prime: complex_list(groups[2], line)?,
                    });
                }
                other => return Err(parse_err(line, format!("unknown key `{other}` in [loxodromic]"))),
            },
            Section::Elliptic => match key {
                "class" => {
                    let f = fields(value, 6, line)?;
                    elliptic.push(EllipticClass {
                        tr_chi: Complex64::new(parse_f64(f[0], line)?, parse_f64(f[1], line)?),
                        norm_primitive: parse_f64(f[2], line)?,
                        order_e: parse_u32(f[3], line)?,
                        m: parse_u32(f[4], line)?,
                        k: parse_u32(f[5], line)?,
                    });
                }
                other => return Err(parse_err(line, format!("unknown key `{other}` in [elliptic]"))),
            },
            Section::Cusp => match key {
                "character" => {
                    let f = fields(value, 2, line)?;
                    characters.push(LatticeCharacter {
                        u: parse_f64(f[0], line)?,
                        v: parse_f64(f[1], line)?,
                    });
                }
                "cusp_elliptic" => {
                    let f = fields(value, 6, line)?;
                    cusp_elliptic.push(CuspidalElliptic {
                        epsilon: Complex64::new(parse_f64(f[0], line)?, parse_f64(f[1], line)?),
                        c_abs: parse_f64(f[2], line)?,
                        order_centralizer: parse_u32(f[3], line)?,
                        tr_chi: Complex64::new(parse_f64(f[4], line)?, parse_f64(f[5], line)?),
                    });
                }
                _ => {
                    let k = CUSP_KEYS
                        .iter()
                        .find(|k| **k == key)
                        .ok_or_else(|| parse_err(line, format!("unknown key `{key}` in [cusp]")))?;
                    cusp.insert(k, value, line)?;
                }
            },
        }
    }

    if !seen.contains_key(&Section::Meta) {
        return Err(parse_err(0, "missing [meta] section"));
    }
    let (v, l) = meta.required("volume", "meta")?;
    let volume = parse_f64(v, l)?;
    let (v, l) = meta.required("dim_v", "meta")?;
    let dim_v = parse_u32(v, l)?;
    let (v, l) = meta.required("chi_trivial", "meta")?;
    let chi_trivial = parse_bool(v, l)?;

    let cusp_data = if seen.contains_key(&Section::Cusp) {
        let get = |k: &str| -> Result<f64> {
            let (v, l) = cusp.required(k, "cusp")?;
            parse_f64(v, l)
        };
        let tau = Complex64::new(get("tau_re")?, get("tau_im")?);
        let (v, l) = cusp.required("index", "cusp")?;
        let index = parse_u32(v, l)?;
        let epsilon = match (cusp.optional("epsilon_re"), cusp.optional("epsilon_im")) {
            (Some((re, l1)), Some((im, l2))) => Some(Complex64::new(parse_f64(re, l1)?, parse_f64(im, l2)?)),
            (None, None) => None,
            (Some((_, l)), None) | (None, Some((_, l))) => {
                return Err(parse_err(l, "epsilon_re and epsilon_im must be given together"))
            }
        };
        let lattice = CuspLattice::new(tau, index, epsilon)?;
        let (v, l) = cusp.required("k_inf", "cusp")?;
        let k_inf = parse_u32(v, l)?;
        let (v, l) = cusp.required("l_inf", "cusp")?;
        let l_inf = parse_u32(v, l)?;
        let eta_inf = match cusp.optional("eta_inf") {
            Some((v, l)) => Some(parse_f64(v, l)?),
            None => None,
        };
        Some(CuspData {
            lattice,
            epsilon_explicit: epsilon.is_some(),
            k_inf,
            l_inf,
            characters,
            cuspidal_elliptic: cusp_elliptic,
            eta_inf,
            tr_s0: get("tr_S0")?,
            y: get("Y")?,
        })
    } else {
        None
    };

    let mut orb = OrbifoldData {
        volume,
        dim_v,
        chi_trivial,
        loxodromic,
        elliptic,
        cusp: cusp_data,
    };
    orb.sort_loxodromic();
    validate(&orb, &ValidationConfig::default()).into_result()?;
    Ok(orb)
}

/// Reads, parses and validates an orbifold file.
pub fn load_orbifold(path: impl AsRef<Path>) -> Result<OrbifoldData> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_orbifold(&text)
}

fn fmt_f(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_c(z: Complex64) -> String {
    format!("{}, {}", fmt_f(z.re), fmt_f(z.im))
}

fn fmt_c_list(zs: &[Complex64]) -> String {
    zs.iter().map(|z| fmt_c(*z)).collect::<Vec<_>>().join(", ")
}

/// The canonical text form; parsing it gives back the same data.
pub fn to_canonical_string(orb: &OrbifoldData) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "[meta]");
    let _ = writeln!(out, "volume = {}", fmt_f(orb.volume));
    let _ = writeln!(out, "dim_v = {}", orb.dim_v);
    let _ = writeln!(out, "chi_trivial = {}", orb.chi_trivial);
    let _ = writeln!(out);
    let _ = writeln!(out, "[loxodromic]");
    for c in &orb.loxodromic {
        let _ = writeln!(
            out,
            "class = {}, {}, {}, {}",
            fmt_c(c.a),
            fmt_f(c.norm_primitive),
            c.m,
            fmt_c(c.tr_chi)
        );
        if let Some(sd) = &c.spectral {
            let _ = writeln!(
                out,
                "spectral = {}; {}; {}",
                fmt_c(sd.zeta),
                fmt_c_list(&sd.t),
                fmt_c_list(&sd.t_prime)
            );
        }
    }
    let _ = writeln!(out);
    let _ = writeln!(out, "[elliptic]");
    for e in &orb.elliptic {
        let _ = writeln!(
            out,
            "class = {}, {}, {}, {}, {}",
            fmt_c(e.tr_chi),
            fmt_f(e.norm_primitive),
            e.order_e,
            e.m,
            e.k
        );
    }
    if let Some(c) = &orb.cusp {
        let _ = writeln!(out);
        let _ = writeln!(out, "[cusp]");
        let _ = writeln!(out, "tau_re = {}", fmt_f(c.lattice.tau.re));
        let _ = writeln!(out, "tau_im = {}", fmt_f(c.lattice.tau.im));
        let _ = writeln!(out, "index = {}", c.lattice.index);
        if c.epsilon_explicit {
            let _ = writeln!(out, "epsilon_re = {}", fmt_f(c.lattice.epsilon.re));
            let _ = writeln!(out, "epsilon_im = {}", fmt_f(c.lattice.epsilon.im));
        }
        let _ = writeln!(out, "k_inf = {}", c.k_inf);
        let _ = writeln!(out, "l_inf = {}", c.l_inf);
        let _ = writeln!(out, "tr_S0 = {}", fmt_f(c.tr_s0));
        let _ = writeln!(out, "Y = {}", fmt_f(c.y));
        if let Some(eta) = c.eta_inf {
            let _ = writeln!(out, "eta_inf = {}", fmt_f(eta));
        }
        for ch in &c.characters {
            let _ = writeln!(out, "character = {}, {}", fmt_f(ch.u), fmt_f(ch.v));
        }
        for g in &c.cuspidal_elliptic {
            let _ = writeln!(
                out,
                "cusp_elliptic = {}, {}, {}, {}",
                fmt_c(g.epsilon),
                fmt_f(g.c_abs),
                g.order_centralizer,
                fmt_c(g.tr_chi)
            );
        }
    }
    out
}

/// Writes the canonical text form to `path`.
pub fn save_orbifold(orb: &OrbifoldData, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, to_canonical_string(orb)).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

use super::OrbifoldData;
use num_complex::Complex64;

/// Powers are generated until N(T₀)^{-p} drops below this.
const POWER_CUTOFF: f64 = 1e-32;

/// One loxodromic class T = T₀^p E^q ready for summation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoxodromicTerm {
    pub a: Complex64,
    pub norm: f64,
    pub log_norm: f64,
    pub log_norm_primitive: f64,
    pub power: u32,
    pub m: u32,
    pub tr_chi: Complex64,
    /// tr χ(T) log N(T₀) / (m |a − a⁻¹|²).
    pub weight: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct GeneratedFamily {
    norm_primitive: f64,
    first_missing_power: u32,
    dim: f64,
}

/// The loxodromic length spectrum with powers of primitive classes expanded
/// wherever eigenvalue data allows it.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpandedSpectrum {
    pub terms: Vec<LoxodromicTerm>,
    families: Vec<GeneratedFamily>,
}

impl ExpandedSpectrum {
    pub fn new(orb: &OrbifoldData) -> Self {
        let mut terms = Vec::new();
        let mut families = Vec::new();
        for class in &orb.loxodromic {
            let ln0 = class.norm_primitive.ln();
            match &class.spectral {
                None => {
                    let norm = class.norm();
                    terms.push(LoxodromicTerm {
                        a: class.a,
                        norm,
                        log_norm: norm.ln(),
                        log_norm_primitive: ln0,
                        power: class.power(),
                        m: class.m,
                        tr_chi: class.tr_chi,
                        weight: class.weight(),
                    });
                }
                Some(sd) => {
                    let max_power = ((-POWER_CUTOFF.ln()) / ln0).ceil().max(1.0) as u32;
                    let m = class.m.max(1);
                    for p in 1..=max_power {
                        let ap = class.a.powu(p);
                        for q in 0..m {
                            let a = ap * sd.zeta.powu(q);
                            let tr: Complex64 = sd
                                .t
                                .iter()
                                .zip(sd.t_prime.iter())
                                .map(|(t, tp)| t.powu(p) * tp.powu(q))
                                .sum();
                            let norm = a.norm_sqr();
                            terms.push(LoxodromicTerm {
                                a,
                                norm,
                                log_norm: p as f64 * ln0,
                                log_norm_primitive: ln0,
                                power: p,
                                m,
                                tr_chi: tr,
                                weight: tr * ln0 / (m as f64 * (a - a.inv()).norm_sqr()),
                            });
                        }
                    }
                    families.push(GeneratedFamily {
                        norm_primitive: class.norm_primitive,
                        first_missing_power: max_power + 1,
                        dim: orb.dim_v as f64,
                    });
                }
            }
        }
        terms.sort_by(|x, y| x.log_norm.total_cmp(&y.log_norm));
        ExpandedSpectrum { terms, families }
    }

    /// Bound on Σ |weight · G| over the powers that were not generated, for a
    /// non-increasing majorant G(log N) of the summed function.
    pub fn tail_bound<G: Fn(f64) -> f64>(&self, majorant: G) -> f64 {
        self.families
            .iter()
            .map(|f| {
                let p = f.first_missing_power as f64;
                let ln0 = f.norm_primitive.ln();
                let r = 1.0 / f.norm_primitive;
                f.dim * ln0 * (-p * ln0).exp() / (1.0 - r).powi(3) * majorant(p * ln0)
            })
            .sum()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

use super::LoxodromicClass;
use crate::error::{Error, Result};
use crate::geometry::{classify, Classification, GroupElement};
use num_complex::Complex64;
use rayon::prelude::*;

const BUCKET_TOL: f64 = 1e-9;
const EIGENVALUE_TOL: f64 = 1e-8;

/// A dense square complex matrix, used for the representation χ.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    /// Builds an n×n matrix from row-major entries.
    pub fn new(n: usize, data: Vec<Complex64>) -> Result<Self> {
        if n == 0 || data.len() != n * n {
            return Err(Error::domain(format!(
                "expected {} entries for a {n}x{n} matrix, got {}",
                n * n,
                data.len()
            )));
        }
        Ok(CMatrix { n, data })
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            data[i * n + i] = Complex64::new(1.0, 0.0);
        }
        CMatrix { n, data }
    }

    /// The 1×1 matrix (z).
    pub fn scalar(z: Complex64) -> Self {
        CMatrix { n: 1, data: vec![z] }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn adjoint(&self) -> Self {
        let n = self.n;
        let mut data = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..n {
                data[j * n + i] = self.get(i, j).conj();
            }
        }
        CMatrix { n, data }
    }

    pub fn mul(&self, o: &CMatrix) -> CMatrix {
        let n = self.n;
        let mut data = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for k in 0..n {
                let x = self.get(i, k);
                for j in 0..n {
                    data[i * n + j] += x * o.get(k, j);
                }
            }
        }
        CMatrix { n, data }
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        let p = self.mul(&self.adjoint());
        let id = CMatrix::identity(self.n);
        p.data.iter().zip(id.data.iter()).all(|(x, y)| (x - y).norm() <= tol)
    }
}

/// An elliptic element found by the word search. Centralizer data cannot be
/// inferred from words, so these are reported rather than turned into
/// elliptic classes.
#[derive(Debug, Clone, PartialEq)]
pub struct EllipticCandidate {
    pub word: Vec<usize>,
    pub trace: f64,
    /// Rotation angle in (0, π].
    pub angle: f64,
    /// Smallest n ≤ 24 with n·angle ≡ 0 mod 2π, if any.
    pub order: Option<u32>,
    pub tr_chi: Complex64,
    pub hits: usize,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct EnumerationReport {
    pub words: usize,
    pub identity_elements: usize,
    pub parabolic_elements: usize,
    pub elliptic_elements: usize,
    pub loxodromic_elements: usize,
    pub buckets: usize,
    /// Words landing in an already occupied bucket.
    pub collisions: usize,
    pub max_bucket_size: usize,
    /// Buckets dropped because their norm exceeds the cap.
    pub above_norm_cap: usize,
    pub primitive_classes: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Enumeration {
    pub loxodromic: Vec<LoxodromicClass>,
    /// Representative word of each loxodromic class, letters 2i and 2i+1
    /// standing for generator i and its inverse.
    pub words: Vec<Vec<usize>>,
    /// Number of words that fell into each loxodromic bucket.
    pub bucket_sizes: Vec<usize>,
    pub elliptic: Vec<EllipticCandidate>,
    pub report: EnumerationReport,
}

#[derive(Debug, Clone)]
struct Found {
    word: Vec<usize>,
    element: GroupElement,
    chi: CMatrix,
}

struct Bucket {
    key: Complex64,
    a: Complex64,
    norm: f64,
    word: Vec<usize>,
    tr_chi: Complex64,
    hits: usize,
}

fn inverse_letter(l: usize) -> usize {
    l ^ 1
}

fn word_order(x: &[usize], y: &[usize]) -> std::cmp::Ordering {
    x.len().cmp(&y.len()).then_with(|| x.cmp(y))
}

/// a with the sign fixed so that the first nonzero coordinate is positive.
fn canonical_sign(a: Complex64) -> Complex64 {
    if a.re > 0.0 || (a.re == 0.0 && a.im > 0.0) {
        a
    } else {
        -a
    }
}

fn close(x: Complex64, y: Complex64, tol: f64) -> bool {
    (x - y).norm() <= tol * x.norm().max(y.norm()).max(1.0)
}

fn shard(
    first: usize,
    letters: &[(GroupElement, CMatrix)],
    max_len: usize,
) -> Vec<Found> {
    let mut out = Vec::new();
    let mut frontier = vec![Found {
        word: vec![first],
        element: letters[first].0,
        chi: letters[first].1.clone(),
    }];
    for _ in 1..=max_len {
        let mut next = Vec::new();
        for f in &frontier {
            if f.word.len() < max_len {
                let last = *f.word.last().expect("nonempty word");
                for (l, (g, x)) in letters.iter().enumerate() {
                    if l == inverse_letter(last) {
                        continue;
                    }
                    let mut word = f.word.clone();
                    word.push(l);
                    next.push(Found {
                        word,
                        element: f.element * *g,
                        chi: f.chi.mul(x),
                    });
                }
            }
        }
        out.append(&mut frontier);
        frontier = next;
        if frontier.is_empty() {
            break;
        }
    }
    out
}

fn rotation_order(angle: f64) -> Option<u32> {
    (1..=24u32).find(|&n| {
        let turns = n as f64 * angle / std::f64::consts::TAU;
        (turns - turns.round()).abs() < 1e-9
    })
}

/// Breadth-first search over reduced words of length ≤ `max_word_len` in
/// the generators and their inverses, bucketing loxodromic elements by
/// trace up to sign.
pub fn enumerate_classes(
    generators: &[GroupElement],
    chi: &[CMatrix],
    max_word_len: usize,
    norm_cap: f64,
) -> Result<Enumeration> {
    if generators.len() != chi.len() {
        return Err(Error::domain(format!(
            "{} generators but {} representation matrices",
            generators.len(),
            chi.len()
        )));
    }
    let dim = chi.first().map_or(1, |m| m.dim());
    for (i, (g, x)) in generators.iter().zip(chi).enumerate() {
        if (g.det() - 1.0).norm() > 1e-9 {
            return Err(Error::validation(format!("generators[{i}]"), "not unimodular"));
        }
        if x.dim() != dim || !x.is_unitary(1e-9) {
            return Err(Error::validation(format!("chi[{i}]"), "not unitary of the common dimension"));
        }
    }
    let letters: Vec<(GroupElement, CMatrix)> = generators
        .iter()
        .zip(chi)
        .flat_map(|(g, x)| [(*g, x.clone()), (g.inverse(), x.adjoint())])
        .collect();

    let shards: Vec<Vec<Found>> = if max_word_len == 0 {
        Vec::new()
    } else {
        (0..letters.len())
            .into_par_iter()
            .map(|l| shard(l, &letters, max_word_len))
            .collect()
    };

    let mut report = EnumerationReport::default();
    let mut lox: Vec<(Complex64, Complex64, f64, Found)> = Vec::new();
    let mut ell: Vec<(f64, Found)> = Vec::new();
    for f in shards.into_iter().flatten() {
        report.words += 1;
        match classify(&f.element)? {
            Classification::Identity => report.identity_elements += 1,
            Classification::Parabolic => report.parabolic_elements += 1,
            Classification::Elliptic { trace } => {
                report.elliptic_elements += 1;
                ell.push((trace.abs(), f));
            }
            Classification::Loxodromic { a, norm } => {
                report.loxodromic_elements += 1;
                let tr = f.element.trace();
                lox.push((tr * tr, canonical_sign(a), norm, f));
            }
        }
    }

    // Sorting by the sign-free key before merging makes the buckets
    // independent of generator order.
    lox.sort_by(|x, y| {
        x.2.total_cmp(&y.2)
            .then(x.0.re.total_cmp(&y.0.re))
            .then(x.0.im.total_cmp(&y.0.im))
            .then_with(|| word_order(&x.3.word, &y.3.word))
    });
    let mut buckets: Vec<Bucket> = Vec::new();
    for (key, a, norm, f) in lox {
        let mut found = None;
        for (i, b) in buckets.iter().enumerate().rev() {
            if norm - b.norm > BUCKET_TOL * norm.max(1.0) * 10.0 {
                break;
            }
            if close(key, b.key, BUCKET_TOL) {
                found = Some(i);
                break;
            }
        }
        match found {
            Some(i) => {
                let b = &mut buckets[i];
                if !close(a * a, b.a * b.a, EIGENVALUE_TOL) {
                    return Err(Error::Ambiguity(format!(
                        "trace key {key} shared by eigenvalues {a} and {}",
                        b.a
                    )));
                }
                b.hits += 1;
                report.collisions += 1;
                if word_order(&f.word, &b.word).is_lt() {
                    b.word = f.word.clone();
                    b.tr_chi = f.chi.trace();
                }
            }
            None => buckets.push(Bucket {
                key,
                a,
                norm,
                word: f.word.clone(),
                tr_chi: f.chi.trace(),
                hits: 1,
            }),
        }
    }
    report.buckets = buckets.len();
    report.max_bucket_size = buckets.iter().map(|b| b.hits).max().unwrap_or(0);

    // Primitive detection against earlier primitive buckets, ascending in norm.
    let mut primitive_of: Vec<(f64, u32)> = Vec::with_capacity(buckets.len());
    let mut primitives: Vec<usize> = Vec::new();
    for (i, b) in buckets.iter().enumerate() {
        let mut assigned = None;
        for &j in &primitives {
            let base = &buckets[j];
            let p = (b.norm.ln() / base.norm.ln()).round();
            if p < 2.0 {
                continue;
            }
            let ap = base.a.powu(p as u32);
            if close(ap, b.a, EIGENVALUE_TOL) || close(-ap, b.a, EIGENVALUE_TOL) {
                assigned = Some((base.norm, p as u32));
                break;
            }
        }
        match assigned {
            Some(x) => primitive_of.push(x),
            None => {
                primitives.push(i);
                primitive_of.push((b.norm, 1));
            }
        }
    }
    report.primitive_classes = primitives.len();

    let mut loxodromic = Vec::new();
    let mut words = Vec::new();
    let mut bucket_sizes = Vec::new();
    for (b, (n0, _)) in buckets.into_iter().zip(primitive_of) {
        if b.norm > norm_cap {
            report.above_norm_cap += 1;
            continue;
        }
        loxodromic.push(LoxodromicClass {
            a: b.a,
            norm_primitive: n0,
            m: 1,
            tr_chi: b.tr_chi,
            spectral: None,
        });
        words.push(b.word);
        bucket_sizes.push(b.hits);
    }

    ell.sort_by(|x, y| x.0.total_cmp(&y.0).then_with(|| word_order(&x.1.word, &y.1.word)));
    let mut elliptic: Vec<EllipticCandidate> = Vec::new();
    for (tr, f) in ell {
        if let Some(e) = elliptic.iter_mut().rev().find(|e| (e.trace - tr).abs() <= BUCKET_TOL) {
            e.hits += 1;
            continue;
        }
        let angle = 2.0 * (0.5 * tr).clamp(-1.0, 1.0).acos();
        elliptic.push(EllipticCandidate {
            tr_chi: f.chi.trace(),
            word: f.word,
            trace: tr,
            angle,
            order: rotation_order(angle),
            hits: 1,
        });
    }

    Ok(Enumeration {
        loxodromic,
        words,
        bucket_sizes,
        elliptic,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn cyclic_toy_gives_powers_of_one_primitive() {
        let g = GroupElement::from_real(2.0, 0.0, 0.0, 0.5).unwrap();
        let e = enumerate_classes(&[g], &[CMatrix::scalar(c(1.0, 0.0))], 5, 1e12).unwrap();
        assert_eq!(e.loxodromic.len(), 5);
        for (k, cl) in e.loxodromic.iter().enumerate() {
            assert!((cl.norm_primitive - 4.0).abs() < 1e-12);
            assert_eq!(cl.power(), k as u32 + 1);
            assert!((cl.norm() - 4f64.powi(k as i32 + 1)).abs() < 1e-9);
        }
        assert_eq!(e.report.words, 10);
        assert_eq!(e.report.collisions, 5);
        assert_eq!(e.report.primitive_classes, 1);
    }

    #[test]
    fn identity_only_is_empty() {
        let e = enumerate_classes(&[GroupElement::identity()], &[CMatrix::scalar(c(1.0, 0.0))], 4, 1e6).unwrap();
        assert!(e.loxodromic.is_empty());
        assert!(e.elliptic.is_empty());
    }

    #[test]
    fn norm_cap_drops_classes() {
        let g = GroupElement::from_real(2.0, 0.0, 0.0, 0.5).unwrap();
        let e = enumerate_classes(&[g], &[CMatrix::scalar(c(1.0, 0.0))], 5, 100.0).unwrap();
        assert_eq!(e.loxodromic.len(), 3);
        assert_eq!(e.report.above_norm_cap, 2);
    }

    #[test]
    fn character_trace_follows_word() {
        let g = GroupElement::from_real(2.0, 0.0, 0.0, 0.5).unwrap();
        let e = enumerate_classes(&[g], &[CMatrix::scalar(c(-1.0, 0.0))], 3, 1e12).unwrap();
        let signs: Vec<f64> = e.loxodromic.iter().map(|l| l.tr_chi.re).collect();
        assert_eq!(signs, vec![-1.0, 1.0, -1.0]);
    }

    #[test]
    fn mismatched_inputs_rejected() {
        let g = GroupElement::identity();
        assert!(enumerate_classes(&[g], &[], 2, 10.0).is_err());
        let bad = CMatrix::scalar(c(2.0, 0.0));
        assert!(enumerate_classes(&[g], &[bad], 2, 10.0).is_err());
    }

    #[test]
    fn cmatrix_products() {
        let m = CMatrix::new(2, vec![c(0.0, 1.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, -1.0)]).unwrap();
        assert!(m.is_unitary(1e-14));
        assert_eq!(m.mul(&m).trace(), c(-2.0, 0.0));
        assert!(CMatrix::new(2, vec![c(1.0, 0.0)]).is_err());
    }
}

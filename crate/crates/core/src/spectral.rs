//! Strongly regular multigraphs, their three-value spectra, and exact
//! spectrum certificates.
//!
//! A multigraph is strongly regular when `M² = aM + bJ + (c-b)I` off the
//! diagonal pattern and `MJ = dJ`. Every non-Perron eigenvalue then solves
//! `η² = aη + (c - b)`. Spectra are certified without any eigensolver: the
//! product `∏(M - λI)` over the claimed values must vanish, and the traces of
//! `M^k` for `k ≤ 3` must match the claimed multiplicities.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;
use crate::graph::Multigraph;
use crate::lattice::{Family, MinusculeParams};
use crate::matrix::Matrix;
use crate::rational::{binomial_i, common_denominator, rational_sqrt, to_f64, Rational};

/// Exact regularity data: `(M²)_ij = a·M_ij + b` for `i ≠ j`, `(M²)_ii = c`, row sums `d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SrmgCertificate {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
    pub d: Rational,
    pub n: usize,
}

/// `rational + coeff·√radicand`; `coeff` is zero for rational eigenvalues.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Eigenvalue {
    pub rational: Rational,
    pub coeff: Rational,
    pub radicand: Rational,
}

impl Eigenvalue {
    pub fn rational(q: Rational) -> Self {
        Eigenvalue { rational: q, coeff: Rational::zero(), radicand: Rational::zero() }
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.coeff.is_zero().then_some(&self.rational)
    }

    pub fn to_f64(&self) -> f64 {
        to_f64(&self.rational) + to_f64(&self.coeff) * libm::sqrt(to_f64(&self.radicand))
    }
}

impl fmt::Display for Eigenvalue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeff.is_zero() {
            write!(f, "{}", self.rational)
        } else {
            write!(f, "{}+{}*sqrt({})", self.rational, self.coeff, self.radicand)
        }
    }
}

/// Distinct eigenvalues with multiplicities, ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spectrum {
    pub eigenvalues: Vec<(Eigenvalue, u64)>,
}

impl Spectrum {
    /// Builds a spectrum from rational values, dropping zero multiplicities and merging repeats.
    pub fn from_rational(values: impl IntoIterator<Item = (Rational, u64)>) -> Self {
        let mut v: Vec<(Rational, u64)> = values.into_iter().filter(|(_, m)| *m > 0).collect();
        v.sort_by(|x, y| x.0.cmp(&y.0));
        let mut merged: Vec<(Rational, u64)> = Vec::with_capacity(v.len());
        for (q, m) in v {
            match merged.last_mut() {
                Some((last, lm)) if *last == q => *lm += m,
                _ => merged.push((q, m)),
            }
        }
        Spectrum { eigenvalues: merged.into_iter().map(|(q, m)| (Eigenvalue::rational(q), m)).collect() }
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn total_multiplicity(&self) -> u64 {
        self.eigenvalues.iter().map(|(_, m)| m).sum()
    }

    pub fn smallest(&self) -> Option<&Eigenvalue> {
        self.eigenvalues.first().map(|(v, _)| v)
    }

    pub fn largest(&self) -> Option<&Eigenvalue> {
        self.eigenvalues.last().map(|(v, _)| v)
    }

    /// `(value, multiplicity)` pairs, if every value is rational.
    pub fn rational_values(&self) -> Option<Vec<(Rational, u64)>> {
        self.eigenvalues.iter().map(|(v, m)| v.as_rational().map(|q| (q.clone(), *m))).collect()
    }

    pub fn multiplicity_of(&self, q: &Rational) -> u64 {
        self.eigenvalues
            .iter()
            .find(|(v, _)| v.as_rational() == Some(q))
            .map_or(0, |(_, m)| *m)
    }
}

/// Exact `M²` of a multigraph, row-major.
pub fn square_exact(g: &Multigraph) -> Vec<Rational> {
    let n = g.n();
    if let Some(iw) = g.integer_weights() {
        let m = Matrix::from_vec(n, iw.weights.clone());
        let scale2 = &iw.scale * &iw.scale;
        let to_q = |v: BigInt| Rational::new(v, scale2.clone());
        if let Some(sq) = m.mul(&m) {
            return sq.data().iter().map(|&v| to_q(BigInt::from(v))).collect();
        }
        let big = m.to_big();
        return big.mul(&big).data().iter().map(|v| to_q(v.clone())).collect();
    }
    let l = common_denominator((0..n).flat_map(|i| g.row(i).iter()));
    let scaled: Vec<BigInt> = (0..n)
        .flat_map(|i| g.row(i).iter())
        .map(|q| q.numer() * (&l / q.denom()))
        .collect();
    let big = Matrix::from_vec(n, scaled);
    let l2 = &l * &l;
    big.mul(&big).data().iter().map(|v| Rational::new(v.clone(), l2.clone())).collect()
}

pub fn verify_srmg(g: &Multigraph) -> Result<SrmgCertificate, Error> {
    let n = g.n();
    if n < 3 {
        return Err(Error::Domain("strong regularity needs at least 3 vertices"));
    }
    let d = g.weighted_degree(0)?;
    for i in 1..n {
        let di = g.weighted_degree(i)?;
        if di != d {
            return Err(Error::NotStronglyRegular {
                i,
                j: i,
                expected: format!("row sum {d}"),
                actual: format!("row sum {di}"),
            });
        }
    }
    let sq = square_exact(g);
    let at = |i: usize, j: usize| &sq[i * n + j];

    let c = at(0, 0).clone();
    // fit (a, b) from two pairs with distinct weights; a = 0 when only one value occurs
    let first = g.weight(0, 1).clone();
    let second = (0..n)
        .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
        .find(|&(i, j)| *g.weight(i, j) != first);
    let (a, b) = match second {
        Some((i, j)) => {
            let w2 = g.weight(i, j);
            let a = (at(0, 1) - at(i, j)) / (&first - w2);
            let b = at(0, 1) - &a * &first;
            (a, b)
        }
        None => (Rational::zero(), at(0, 1).clone()),
    };
    for i in 0..n {
        if *at(i, i) != c {
            return Err(Error::NotStronglyRegular {
                i,
                j: i,
                expected: format!("{c}"),
                actual: format!("{}", at(i, i)),
            });
        }
        for j in (i + 1)..n {
            let expected = &a * g.weight(i, j) + &b;
            if *at(i, j) != expected {
                return Err(Error::NotStronglyRegular {
                    i,
                    j,
                    expected: format!("{expected}"),
                    actual: format!("{}", at(i, j)),
                });
            }
        }
    }
    Ok(SrmgCertificate { a, b, c, d, n })
}

fn as_multiplicity(q: &Rational, what: &str) -> Result<u64, Error> {
    if !q.is_integer() || q.is_negative() {
        return Err(Error::InconsistentSpectrum(format!("{what} multiplicity {q} is not a nonnegative integer")));
    }
    q.to_integer().to_u64().ok_or_else(|| Error::InconsistentSpectrum(format!("{what} multiplicity overflow")))
}

/// Spectrum implied by an SRMG certificate.
///
/// Non-Perron eigenvalues are the roots `(a ∓ √(a² + 4(c-b)))/2` of
/// `η² = aη + (c - b)`, with `f_∓ = ±(d + (n-1)η_±)/(η_+ - η_-)`.
pub fn spectrum_from_srmg(cert: &SrmgCertificate) -> Result<Spectrum, Error> {
    let SrmgCertificate { a, b, c, d, n } = cert;
    let n1 = Rational::from_integer(BigInt::from(*n as u64 - 1));
    let two = Rational::from_integer(2.into());
    let four = Rational::from_integer(4.into());
    let disc = a * a + &four * (c - b);
    if disc.is_negative() {
        return Err(Error::InconsistentSpectrum(format!("negative discriminant {disc}")));
    }
    if disc.is_zero() {
        // two-value case: trace forces the common value to -d/(n-1)
        let eta = a / &two;
        if &n1 * &eta + d != Rational::zero() {
            return Err(Error::InconsistentSpectrum(format!("double root {eta} violates trace zero")));
        }
        return Ok(Spectrum::from_rational([(eta, *n as u64 - 1), (d.clone(), 1)]));
    }
    match rational_sqrt(&disc) {
        Some(root) => {
            let minus = (a - &root) / &two;
            let plus = (a + &root) / &two;
            let gap = &plus - &minus;
            let f_minus = (d + &n1 * &plus) / &gap;
            let f_plus = -(d + &n1 * &minus) / &gap;
            let fm = as_multiplicity(&f_minus, "lower")?;
            let fp = as_multiplicity(&f_plus, "upper")?;
            Ok(Spectrum::from_rational([(minus, fm), (plus, fp), (d.clone(), 1)]))
        }
        None => {
            // irrational roots: integrality forces d + (n-1)a/2 = 0 and f_± = (n-1)/2
            if d + &n1 * a / &two != Rational::zero() {
                return Err(Error::InconsistentSpectrum(format!(
                    "irrational eigenvalues with non-integral multiplicities (disc {disc})"
                )));
            }
            let half = as_multiplicity(&(&n1 / &two), "conference")?;
            let base = a / &two;
            let coeff = Rational::new(BigInt::one(), BigInt::from(2));
            let lower = Eigenvalue { rational: base.clone(), coeff: -coeff.clone(), radicand: disc.clone() };
            let upper = Eigenvalue { rational: base, coeff, radicand: disc };
            let mut eigenvalues = alloc::vec![(lower, half), (upper, half), (Eigenvalue::rational(d.clone()), 1)];
            eigenvalues.sort_by(|x, y| x.0.to_f64().partial_cmp(&y.0.to_f64()).unwrap_or(Ordering::Equal));
            Ok(Spectrum { eigenvalues })
        }
    }
}

/// Smallest eigenvalue of the family's divisor graph.
pub fn closed_form_lambda1(p: &MinusculeParams) -> Rational {
    let q = |v: i128| Rational::from_integer(BigInt::from(v));
    match p.family() {
        Family::TypeA { r, s } => {
            let (r, s) = (i64::from(r), i64::from(s));
            q(1 - binomial_i(r + s - 2, r - 2) as i128)
        }
        Family::TypeD { r } => q(1 - (1i128 << (r - 3))),
        Family::E6 => q(-5),
        Family::E7 => q(-11),
    }
}

/// Perron eigenvalue, the common weighted degree.
pub fn closed_form_degree(p: &MinusculeParams) -> Rational {
    let q = |v: i128| Rational::from_integer(BigInt::from(v));
    match p.family() {
        Family::TypeA { r, s } => {
            let (r, s) = (i64::from(r), i64::from(s));
            let up = (s as i128 + 1) * binomial_i(r + s - 1, r - 2) as i128;
            q(up - binomial_i(r + s, r - 1) as i128 + 1)
        }
        Family::TypeD { r } => q(1 + (i128::from(r) - 4) * (1i128 << (r - 3))),
        Family::E6 => q(10),
        Family::E7 => q(29),
    }
}

/// Closed-form spectrum `{λ₁, 1, d}` of `G_{a,b,c}`.
pub fn closed_form_spectrum(p: &MinusculeParams) -> Spectrum {
    let n = p.vertex_count() as u64;
    let lambda1 = closed_form_lambda1(p);
    let d = closed_form_degree(p);
    let low = match p.family() {
        Family::TypeA { r, s } => u64::from(r + s - 1),
        Family::TypeD { r } => u64::from(r),
        // multiplicities from trace 0 and the count n: f(1 - λ₁) = n - 1 + d
        Family::E6 | Family::E7 => {
            let f = (Rational::from_integer(BigInt::from(n - 1)) + &d) / (Rational::one() - &lambda1);
            f.to_integer().to_u64().expect("exceptional multiplicity")
        }
    };
    Spectrum::from_rational([(lambda1, low), (Rational::one(), n - 1 - low), (d, 1)])
}

/// Proof that a spectrum was verified exactly against a specific graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectrumProof {
    pub spectrum: Spectrum,
    pub n: usize,
    /// `Σ_{i<j} M_ij`, recorded so a proof cannot be reused on another graph silently.
    pub total_weight: Rational,
    /// `trace(M²)`.
    pub trace_square: Rational,
}

impl SpectrumProof {
    pub fn matches(&self, g: &Multigraph) -> bool {
        self.n == g.n() && self.total_weight == g.total_weight()
    }

    pub fn lambda1(&self) -> Rational {
        self.spectrum.smallest().and_then(Eigenvalue::as_rational).cloned().expect("verified spectra are rational")
    }
}

enum Scaled {
    Small(Matrix<i64>),
    Big(Matrix<BigInt>),
}

/// Checks `∏(M - λI) = 0` and `trace(M^k) = Σ f_λ λ^k` for `k = 0..=3`.
pub fn verify_spectrum_exact(g: &Multigraph, spec: &Spectrum) -> Result<SpectrumProof, Error> {
    let values = spec
        .rational_values()
        .ok_or(Error::Domain("exact verification needs rational eigenvalues"))?;
    let n = g.n();
    if spec.total_multiplicity() != n as u64 {
        return Err(Error::SpectrumRefuted(format!(
            "multiplicities sum to {} but the graph has {n} vertices",
            spec.total_multiplicity()
        )));
    }
    // integer image M' = L·M; eigenvalues scale by L as well
    let (scaled, l) = match g.integer_weights() {
        Some(iw) => (Scaled::Small(Matrix::from_vec(n, iw.weights)), iw.scale),
        None => {
            let l = common_denominator((0..n).flat_map(|i| g.row(i).iter()));
            let data = (0..n).flat_map(|i| g.row(i).iter()).map(|q| q.numer() * (&l / q.denom())).collect();
            (Scaled::Big(Matrix::from_vec(n, data)), l)
        }
    };
    let lq = Rational::from_integer(l.clone());
    let scaled_values: Vec<(Rational, u64)> = values.iter().map(|(v, m)| (v * &lq, *m)).collect();

    // annihilator
    let product = annihilator(&scaled, &scaled_values);
    if let Some((i, j)) = product.first_nonzero() {
        return Err(Error::SpectrumRefuted(format!(
            "annihilator product is nonzero at ({i},{j}): {}",
            product.get(i, j)
        )));
    }

    // traces of M'^0..M'^3
    let traces: [BigInt; 4] = match &scaled {
        Scaled::Small(m) => {
            let sq = m.mul(m);
            match sq {
                Some(sq) => [
                    BigInt::from(n),
                    BigInt::zero(),
                    BigInt::from(m.trace_of_product(m)),
                    BigInt::from(sq.trace_of_product(m)),
                ],
                None => {
                    let b = m.to_big();
                    big_traces(&b)
                }
            }
        }
        Scaled::Big(b) => big_traces(b),
    };
    for (k, t) in traces.iter().enumerate() {
        let claimed = scaled_values.iter().fold(Rational::zero(), |acc, (v, m)| {
            acc + num_traits::pow(v.clone(), k) * Rational::from_integer(BigInt::from(*m))
        });
        if claimed != Rational::from_integer(t.clone()) {
            let lk = num_traits::pow(lq.clone(), k);
            return Err(Error::SpectrumRefuted(format!(
                "trace of M^{k} is {} but the spectrum gives {}",
                Rational::from_integer(t.clone()) / &lk,
                claimed / &lk
            )));
        }
    }
    let l2 = &lq * &lq;
    Ok(SpectrumProof {
        spectrum: spec.clone(),
        n,
        total_weight: g.total_weight(),
        trace_square: Rational::from_integer(traces[2].clone()) / l2,
    })
}

fn big_traces(b: &Matrix<BigInt>) -> [BigInt; 4] {
    let sq = b.mul(b);
    [BigInt::from(b.n()), BigInt::zero(), b.trace_of_product(b), sq.trace_of_product(b)]
}

fn small_product(m: &Matrix<i64>, values: &[(Rational, u64)]) -> Option<Matrix<i64>> {
    let mut acc: Option<Matrix<i64>> = None;
    for (v, _) in values {
        let f = m.scaled_shift(v.denom().to_i64()?, v.numer().to_i64()?)?;
        acc = Some(match acc {
            None => f,
            Some(a) => a.mul(&f)?,
        });
    }
    Some(acc.unwrap_or_else(|| Matrix::zeros(m.n())))
}

fn annihilator(scaled: &Scaled, values: &[(Rational, u64)]) -> Matrix<BigInt> {
    if let Scaled::Small(m) = scaled {
        if let Some(acc) = small_product(m, values) {
            return acc.to_big();
        }
    }
    let big = match scaled {
        Scaled::Small(m) => m.to_big(),
        Scaled::Big(b) => b.clone(),
    };
    let mut acc: Option<Matrix<BigInt>> = None;
    for (v, _) in values {
        let f = big.scaled_shift(v.denom(), v.numer());
        acc = Some(match acc {
            None => f,
            Some(a) => a.mul(&f),
        });
    }
    acc.unwrap_or_else(|| Matrix::zeros(big.n()))
}

/// Checks `(M - I)² = lin·(M - I) + ones·J` exactly; returns the first violating entry.
pub fn check_shifted_quadratic(g: &Multigraph, lin: &Rational, ones: &Rational) -> Result<(), (usize, usize)> {
    let n = g.n();
    let sq = square_exact(g);
    let two = Rational::from_integer(2.into());
    for i in 0..n {
        for j in 0..n {
            let delta = if i == j { Rational::one() } else { Rational::zero() };
            let m = g.weight(i, j);
            let b2 = &sq[i * n + j] - &two * m + &delta;
            let rhs = lin * (m - &delta) + ones;
            if b2 != rhs {
                return Err((i, j));
            }
        }
    }
    Ok(())
}

/// `SrmgCertificate` rendered for reports.
impl fmt::Display for SrmgCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(a,b,c,d) = ({}, {}, {}, {}), n = {}", self.a, self.b, self.c, self.d, self.n)
    }
}

pub fn format_spectrum(spec: &Spectrum) -> String {
    let parts: Vec<String> = spec.eigenvalues.iter().map(|(v, m)| format!("{v} (x{m})")).collect();
    parts.join(", ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use alloc::string::ToString;

    fn complete(n: usize) -> Multigraph {
        Multigraph::from_fn((0..n).map(|i| i.to_string()).collect(), |_, _| 1).unwrap()
    }

    fn cert(a: i64, b: i64, c: i64, d: i64, n: usize) -> SrmgCertificate {
        SrmgCertificate { a: int(a), b: int(b), c: int(c), d: int(d), n }
    }

    #[test]
    fn complete_graph_certificate() {
        let c = verify_srmg(&complete(4)).unwrap();
        assert_eq!(c, cert(0, 2, 3, 3, 4));
        let s = spectrum_from_srmg(&c).unwrap();
        assert_eq!(s, Spectrum::from_rational([(int(-1), 3), (int(3), 1)]));
    }

    #[test]
    fn petersen_multiplicities() {
        let s = spectrum_from_srmg(&cert(-1, 1, 3, 3, 10)).unwrap();
        assert_eq!(s, Spectrum::from_rational([(int(-2), 4), (int(1), 5), (int(3), 1)]));
    }

    #[test]
    fn conference_graph_surds() {
        // pentagon C5: a = -1, b = 1 (nonadjacent pairs share one neighbour), c = d = 2
        let s = spectrum_from_srmg(&cert(-1, 1, 2, 2, 5)).unwrap();
        assert_eq!(s.len(), 3);
        assert!(s.rational_values().is_none());
        assert_eq!(s.eigenvalues[0].1, 2);
        assert!((s.eigenvalues[0].0.to_f64() - (-1.618_033_988_749_895)).abs() < 1e-12);
        assert!(verify_spectrum_exact(&complete(3), &s).is_err());
    }

    #[test]
    fn non_integral_multiplicity_rejected() {
        assert!(matches!(spectrum_from_srmg(&cert(-1, 1, 3, 4, 10)), Err(Error::InconsistentSpectrum(_))));
    }

    #[test]
    fn irregular_graph_rejected() {
        let labels = (0..3).map(|i| i.to_string()).collect();
        let path = Multigraph::from_edges(labels, [(0, 1, int(1)), (1, 2, int(1))]).unwrap();
        assert!(matches!(verify_srmg(&path), Err(Error::NotStronglyRegular { .. })));
    }

    #[test]
    fn exact_spectrum_checks() {
        let k4 = complete(4);
        let good = Spectrum::from_rational([(int(-1), 3), (int(3), 1)]);
        let proof = verify_spectrum_exact(&k4, &good).unwrap();
        assert_eq!(proof.lambda1(), int(-1));
        assert_eq!(proof.trace_square, int(12));
        let wrong = Spectrum::from_rational([(int(-1), 2), (int(1), 1), (int(3), 1)]);
        assert!(matches!(verify_spectrum_exact(&k4, &wrong), Err(Error::SpectrumRefuted(_))));
        let trace_only = Spectrum::from_rational([(int(-1), 2), (int(3), 2)]);
        let err = verify_spectrum_exact(&k4, &trace_only).unwrap_err();
        assert!(matches!(err, Error::SpectrumRefuted(ref m) if m.contains("M^1")));
        let single = Multigraph::from_edges(alloc::vec!["v".into()], []).unwrap();
        assert!(verify_spectrum_exact(&single, &Spectrum::from_rational([(int(0), 1)])).is_ok());
    }

    #[test]
    fn rational_weights_scale() {
        let labels: Vec<String> = (0..4).map(|i| i.to_string()).collect();
        let g = Multigraph::from_fn(labels, |_, _| 1).unwrap();
        let half = Multigraph::new(
            g.labels().to_vec(),
            (0..16).map(|k| if k % 5 == 0 { int(0) } else { ratio(1, 2) }).collect(),
        )
        .unwrap();
        let s = Spectrum::from_rational([(ratio(-1, 2), 3), (ratio(3, 2), 1)]);
        verify_spectrum_exact(&half, &s).unwrap();
        assert_eq!(verify_srmg(&half).unwrap().d, ratio(3, 2));
    }
}

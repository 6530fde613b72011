//! Random-hyperplane rounding of the optimal embedding.
//!
//! The embedding is realized as explicit vectors in the `(a+r-2)`-dimensional
//! span of the simple roots, then cut by the sign of `⟨g, f(i)⟩` for Gaussian
//! `g`. Samples are grouped in chunks; chunk `c` draws from ChaCha8 stream `c`
//! of the run seed, and chunk sums are exact integers, so any execution order
//! of the chunks merges to the same statistics.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::certificate::Embedding;
use crate::error::Error;
use crate::graph::{Cut, IntWeights, Multigraph};
use crate::matrix::rational_inverse;
use crate::rational::{to_f64, Rational};

pub const DEFAULT_CHUNK: u64 = 4096;
pub const FACTOR_TOLERANCE: f64 = 1e-12;

/// Rows `f(i)` with `F·Fᵀ` equal to the Gram matrix up to `residual`.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingFactor {
    dim: usize,
    data: Vec<f64>,
    pub residual: f64,
}

impl EmbeddingFactor {
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, Error> {
        let dim = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch { expected: dim, found: bad.len() });
        }
        Ok(EmbeddingFactor { dim, data: rows.concat(), residual: 0.0 })
    }

    pub fn n(&self) -> usize {
        if self.dim == 0 {
            0
        } else {
            self.data.len() / self.dim
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    fn residual_against(&self, gram: impl Fn(usize, usize) -> f64) -> f64 {
        let n = self.n();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let dot: f64 = self.row(i).iter().zip(self.row(j)).map(|(a, b)| a * b).sum();
                worst = worst.max((dot - gram(i, j)).abs());
            }
        }
        worst
    }
}

/// Lower-triangular Cholesky factor of a positive definite matrix.
fn cholesky(m: usize, a: &[f64]) -> Option<Vec<f64>> {
    let mut l = vec![0.0; m * m];
    for i in 0..m {
        for j in 0..=i {
            let s: f64 = (0..j).map(|k| l[i * m + k] * l[j * m + k]).sum();
            if i == j {
                let d = a[i * m + i] - s;
                if d <= 0.0 {
                    return None;
                }
                l[i * m + i] = libm::sqrt(d);
            } else {
                l[i * m + j] = (a[i * m + j] - s) / l[j * m + j];
            }
        }
    }
    Some(l)
}

/// Factors the embedding through the simple-root frame.
///
/// With `C` the Cartan matrix and `b_j = V·α_j`, the projection of `V` to
/// `K^⊥` has root coordinates `c = -C⁻¹b`, so `f(U)·f(V) = c_Uᵀ C c_V / N`
/// with `N = (δ+κ)/δ`. Factoring `C = LLᵀ` gives rows `Lᵀc/√N`.
pub fn factorize_embedding(e: &Embedding) -> Result<EmbeddingFactor, Error> {
    let p = &e.params;
    let lat = p.lattice();
    let roots = lat.simple_roots();
    let m = roots.len();
    let cartan = roots.cartan(lat);
    let cq: Vec<Rational> = cartan.iter().map(|&v| Rational::from_integer(v.into())).collect();
    let inv = rational_inverse(m, &cq).ok_or(Error::Inconsistency {
        what: "Cartan matrix",
        left: "singular".into(),
        right: "invertible".into(),
    })?;
    let cf: Vec<f64> = cartan.iter().map(|&v| v as f64).collect();
    let l = cholesky(m, &cf).ok_or(Error::NumericFailure { residual: f64::NAN, bound: FACTOR_TOLERANCE })?;
    let norm = (p.delta() + p.kappa()) as f64 / p.delta() as f64;
    let scale = 1.0 / libm::sqrt(norm);
    let mut rows = Vec::with_capacity(e.n());
    for v in &e.classes {
        let b: Vec<Rational> = roots
            .roots
            .iter()
            .map(|a| lat.intersect(v, a).map(|x| Rational::from_integer(x.into())))
            .collect::<Result<_, _>>()?;
        let c: Vec<f64> = (0..m)
            .map(|i| -to_f64(&(0..m).fold(Rational::zero(), |acc, j| acc + &inv[i * m + j] * &b[j])))
            .collect();
        // row = Lᵀ c
        let row: Vec<f64> = (0..m).map(|k| (k..m).map(|i| l[i * m + k] * c[i]).sum::<f64>() * scale).collect();
        rows.push(row);
    }
    let mut f = EmbeddingFactor::from_rows(&rows)?;
    f.residual = f.residual_against(|i, j| to_f64(e.gram(i, j)));
    if f.residual > FACTOR_TOLERANCE {
        return Err(Error::NumericFailure { residual: f.residual, bound: FACTOR_TOLERANCE });
    }
    Ok(f)
}

/// Pivoted Cholesky factorization of a PSD Gram matrix, dropping pivots below `1e-12`.
pub fn factorize_gram(n: usize, gram: &[f64]) -> Result<EmbeddingFactor, Error> {
    if gram.len() != n * n {
        return Err(Error::DimensionMismatch { expected: n * n, found: gram.len() });
    }
    let mut cols: Vec<Vec<f64>> = Vec::new();
    let mut diag: Vec<f64> = (0..n).map(|i| gram[i * n + i]).collect();
    loop {
        let (piv, &best) = match diag.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)) {
            Some(x) => x,
            None => break,
        };
        if best <= 1e-12 {
            break;
        }
        let root = libm::sqrt(best);
        let col: Vec<f64> = (0..n)
            .map(|i| {
                let s: f64 = cols.iter().map(|c| c[i] * c[piv]).sum();
                (gram[i * n + piv] - s) / root
            })
            .collect();
        for i in 0..n {
            diag[i] -= col[i] * col[i];
        }
        diag[piv] = 0.0;
        cols.push(col);
    }
    let rows: Vec<Vec<f64>> = (0..n).map(|i| cols.iter().map(|c| c[i]).collect()).collect();
    let mut f = EmbeddingFactor::from_rows(&rows)?;
    if rows.first().is_some_and(Vec::is_empty) {
        f.dim = 0;
    }
    f.residual = f.residual_against(|i, j| gram[i * n + j]);
    if f.residual > FACTOR_TOLERANCE {
        return Err(Error::NumericFailure { residual: f.residual, bound: FACTOR_TOLERANCE });
    }
    Ok(f)
}

/// Standard normal deviates by the polar Box–Muller method.
#[derive(Debug, Clone)]
pub struct NormalSource<R> {
    rng: R,
    spare: Option<f64>,
}

impl<R: RngCore> NormalSource<R> {
    pub fn new(rng: R) -> Self {
        NormalSource { rng, spare: None }
    }

    fn uniform_signed(&mut self) -> f64 {
        // 53 random bits mapped to [-1, 1)
        (self.rng.next_u64() >> 11) as f64 * (2.0 / (1u64 << 53) as f64) - 1.0
    }

    pub fn next(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        loop {
            let u = self.uniform_signed();
            let v = self.uniform_signed();
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                let k = libm::sqrt(-2.0 * libm::log(s) / s);
                self.spare = Some(v * k);
                return u * k;
            }
        }
    }
}

/// The substream of `seed` used by chunk `chunk`.
pub fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    rng
}

/// `S = {i : ⟨g, f(i)⟩ ≥ 0}`.
pub fn cut_for_direction(f: &EmbeddingFactor, g: &[f64]) -> Cut {
    let bits: Vec<bool> = (0..f.n())
        .map(|i| f.row(i).iter().zip(g).map(|(a, b)| a * b).sum::<f64>() >= 0.0)
        .collect();
    Cut::from_bools(&bits)
}

pub fn sample_cut<R: RngCore>(f: &EmbeddingFactor, normals: &mut NormalSource<R>) -> Cut {
    let g: Vec<f64> = (0..f.dim()).map(|_| normals.next()).collect();
    cut_for_direction(f, &g)
}

/// Exact integer summary of one chunk, in units of `1/scale`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChunkSummary {
    pub index: u64,
    pub count: u64,
    pub sum: i128,
    pub sum_sq: i128,
    pub min: i64,
    pub max: i64,
    pub witness: Cut,
}

pub fn simulate_chunk(w: &IntWeights, f: &EmbeddingFactor, seed: u64, index: u64, count: u64) -> ChunkSummary {
    let mut normals = NormalSource::new(chunk_rng(seed, index));
    let mut summary = ChunkSummary {
        index,
        count,
        sum: 0,
        sum_sq: 0,
        min: i64::MAX,
        max: i64::MIN,
        witness: Cut::empty(f.n()),
    };
    for _ in 0..count {
        let cut = sample_cut(f, &mut normals);
        let value = w.cut_weight(|i| cut.contains(i));
        summary.sum += i128::from(value);
        summary.sum_sq += i128::from(value) * i128::from(value);
        summary.min = summary.min.min(value);
        if value > summary.max {
            summary.max = value;
            summary.witness = cut;
        }
    }
    summary
}

/// Chunk layout `(index, count)` for a run.
pub fn chunk_plan(samples: u64, chunk: u64) -> Vec<(u64, u64)> {
    let chunk = chunk.max(1);
    (0..samples.div_ceil(chunk)).map(|c| (c, chunk.min(samples - c * chunk))).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct CutStats {
    pub samples: u64,
    pub seed: u64,
    pub chunk: u64,
    pub mean: f64,
    /// Sample standard deviation over the mean.
    pub coefficient_of_variation: f64,
    pub std_dev: f64,
    pub max_weight: Rational,
    pub min_weight: Rational,
    pub max_cut_witness: Cut,
    /// Every sample had the same weight.
    pub degenerate: bool,
}

impl CutStats {
    /// Hard check that no sampled cut exceeds the integer upper bound.
    pub fn verify_upper(&self, u_floor: i64) -> Result<(), Error> {
        if self.max_weight > Rational::from_integer(u_floor.into()) {
            return Err(Error::Inconsistency {
                what: "sampled cut above the upper bound",
                left: format!("{}", self.max_weight),
                right: format!("{u_floor}"),
            });
        }
        Ok(())
    }
}

/// Merges chunk summaries in index order; the earliest chunk wins ties for the witness.
pub fn merge_chunks(
    g: &Multigraph,
    w: &IntWeights,
    mut chunks: Vec<ChunkSummary>,
    seed: u64,
    chunk: u64,
) -> Result<CutStats, Error> {
    chunks.sort_by_key(|c| c.index);
    let samples: u64 = chunks.iter().map(|c| c.count).sum();
    if samples == 0 {
        return Err(Error::Domain("simulation needs at least one sample"));
    }
    let sum: BigInt = chunks.iter().map(|c| BigInt::from(c.sum)).sum();
    let sum_sq: BigInt = chunks.iter().map(|c| BigInt::from(c.sum_sq)).sum();
    let best = chunks.iter().filter(|c| c.count > 0).fold(None::<&ChunkSummary>, |acc, c| match acc {
        Some(a) if a.max >= c.max => Some(a),
        _ => Some(c),
    });
    let best = best.expect("at least one nonempty chunk");
    let min = chunks.iter().filter(|c| c.count > 0).map(|c| c.min).min().unwrap_or(0);
    let n_big = BigInt::from(samples);
    let scale = to_f64(&Rational::from_integer(w.scale.clone()));
    let mean = to_f64(&Rational::new(sum.clone(), &n_big * &w.scale));
    // (N Σx² - (Σx)²) / (N (N-1)), exact before the final division
    let spread = &n_big * &sum_sq - &sum * &sum;
    let var = if samples > 1 {
        to_f64(&Rational::new(spread.clone(), &n_big * (&n_big - 1))) / (scale * scale)
    } else {
        0.0
    };
    let std_dev = libm::sqrt(var.max(0.0));
    let max_weight = w.to_rational(best.max);
    let exact = g.cut_weight(&best.witness)?;
    if exact != max_weight {
        return Err(Error::Inconsistency {
            what: "sampled maximum witness",
            left: format!("{exact}"),
            right: format!("{max_weight}"),
        });
    }
    Ok(CutStats {
        samples,
        seed,
        chunk,
        mean,
        coefficient_of_variation: if mean == 0.0 { 0.0 } else { std_dev / mean },
        std_dev,
        max_weight,
        min_weight: w.to_rational(min),
        max_cut_witness: best.witness.clone(),
        degenerate: spread.is_zero(),
    })
}

pub fn integer_weights(g: &Multigraph) -> Result<IntWeights, Error> {
    g.integer_weights().ok_or(Error::SizeLimit {
        what: "graph weights for integer sampling",
        size: g.n(),
        limit: g.n(),
    })
}

/// Serial reference driver; parallel drivers run [`simulate_chunk`] over [`chunk_plan`].
pub fn simulate_chunked(g: &Multigraph, f: &EmbeddingFactor, samples: u64, seed: u64, chunk: u64) -> Result<CutStats, Error> {
    if f.n() != g.n() {
        return Err(Error::DimensionMismatch { expected: g.n(), found: f.n() });
    }
    let w = integer_weights(g)?;
    let chunks = chunk_plan(samples, chunk)
        .into_iter()
        .map(|(i, c)| simulate_chunk(&w, f, seed, i, c))
        .collect();
    merge_chunks(g, &w, chunks, seed, chunk)
}

pub fn simulate(g: &Multigraph, f: &EmbeddingFactor, samples: u64, seed: u64) -> Result<CutStats, Error> {
    simulate_chunked(g, f, samples, seed, DEFAULT_CHUNK)
}

pub fn max_to_i64(stats: &CutStats) -> Option<i64> {
    stats.max_weight.is_integer().then(|| stats.max_weight.to_integer().to_i64()).flatten()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificate::build_embedding;
    use crate::lattice::{graph_from_divisors, minus_one_divisors, MinusculeParams};
    use crate::rational::int;
    use alloc::string::ToString;

    fn edge() -> Multigraph {
        Multigraph::from_fn(vec!["1".to_string(), "2".to_string()], |_, _| 1).unwrap()
    }

    #[test]
    fn directions() {
        let anti = EmbeddingFactor::from_rows(&[vec![1.0], vec![-1.0]]).unwrap();
        assert_eq!(cut_for_direction(&anti, &[0.5]).members().collect::<Vec<_>>(), vec![0]);
        let ortho = EmbeddingFactor::from_rows(&[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert_eq!(cut_for_direction(&ortho, &[1.0, 1.0]).size(), 2);
        // ties go to S
        assert_eq!(cut_for_direction(&ortho, &[0.0, 0.0]).size(), 2);
    }

    #[test]
    fn antipodal_edge_always_cut() {
        let anti = EmbeddingFactor::from_rows(&[vec![1.0], vec![-1.0]]).unwrap();
        let stats = simulate_chunked(&edge(), &anti, 1000, 7, 128).unwrap();
        assert_eq!(stats.mean, 1.0);
        assert_eq!(stats.coefficient_of_variation, 0.0);
        assert!(stats.degenerate);
    }

    #[test]
    fn identity_gram() {
        let f = factorize_gram(3, &[1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0]).unwrap();
        for i in 0..3 {
            let row = f.row(i);
            assert_eq!(row.iter().filter(|v| **v == 1.0).count(), 1);
            assert_eq!(row.iter().filter(|v| **v == 0.0).count(), 2);
        }
    }

    fn factor(p: &MinusculeParams) -> (Multigraph, EmbeddingFactor) {
        let divs = minus_one_divisors(p).unwrap();
        let g = graph_from_divisors(&divs, p).unwrap();
        let e = build_embedding(p, &divs, &g).unwrap();
        (g, factorize_embedding(&e).unwrap())
    }

    #[test]
    fn lattice_factors() {
        let (_, f) = factor(&MinusculeParams::e6());
        assert_eq!((f.n(), f.dim()), (27, 6));
        assert!(f.residual < 1e-12);
        let (_, d5) = factor(&MinusculeParams::type_d(5).unwrap());
        assert_eq!((d5.n(), d5.dim()), (16, 5));
        for i in 0..16 {
            let norm: f64 = d5.row(i).iter().map(|v| v * v).sum();
            assert!((norm - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn chunking_is_order_free() {
        let (g, f) = factor(&MinusculeParams::type_a(4, 1).unwrap());
        let w = g.integer_weights().unwrap();
        let forward: Vec<_> = chunk_plan(3000, 500).into_iter().map(|(i, c)| simulate_chunk(&w, &f, 3, i, c)).collect();
        let mut backward = forward.clone();
        backward.reverse();
        let a = merge_chunks(&g, &w, forward, 3, 500).unwrap();
        let b = merge_chunks(&g, &w, backward, 3, 500).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, simulate_chunked(&g, &f, 3000, 3, 500).unwrap());
        assert!(a.max_weight <= int(12));
    }

    #[test]
    fn normals_look_standard() {
        let mut src = NormalSource::new(chunk_rng(1, 0));
        let xs: Vec<f64> = (0..20000).map(|_| src.next()).collect();
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / xs.len() as f64;
        assert!(mean.abs() < 0.03 && (var - 1.0).abs() < 0.05);
    }
}

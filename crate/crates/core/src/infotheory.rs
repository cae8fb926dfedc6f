//! Entropies and mutual information.
//!
//! Everything is in bits. Monte Carlo estimators draw from a `ChaCha8Rng`
//! seeded with `seed_from_u64(seed)`, one stream per chunk of
//! [`MC_CHUNK`] samples, so results do not depend on how many threads ran
//! the chunks.

use std::f64::consts::{LN_2, PI, SQRT_2};
use std::sync::OnceLock;

use nalgebra::{Complex, DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use crate::error::{Error, Result};

pub const MC_CHUNK: usize = 4096;
pub const RNG_NAME: &str = "ChaCha8Rng/seed_from_u64/stream-per-4096-chunk";

/// Probability mass function over integer labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pmf {
    support: Vec<(i64, f64)>,
}

impl Pmf {
    pub fn new(support: Vec<(i64, f64)>) -> Result<Self> {
        if let Some(&(label, p)) = support.iter().find(|(_, p)| !(p.is_finite() && *p >= 0.0)) {
            return Err(Error::Argument(format!("probability {p} of label {label} is invalid")));
        }
        let total: f64 = support.iter().map(|(_, p)| p).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::Argument(format!("probabilities sum to {total}, not 1")));
        }
        Ok(Self { support })
    }

    pub fn uniform(labels: impl IntoIterator<Item = i64>) -> Result<Self> {
        let labels = labels.into_iter().collect::<Vec<_>>();
        let p = 1.0 / labels.len() as f64;
        Self::new(labels.into_iter().map(|l| (l, p)).collect())
    }

    /// Plug-in estimate from observed labels.
    pub fn empirical(samples: impl IntoIterator<Item = i64>) -> Result<Self> {
        let mut counts = std::collections::BTreeMap::new();
        let mut total = 0usize;
        for s in samples {
            *counts.entry(s).or_insert(0usize) += 1;
            total += 1;
        }
        if total == 0 {
            return Err(Error::Argument("no samples".into()));
        }
        Self::new(
            counts
                .into_iter()
                .map(|(l, c)| (l, c as f64 / total as f64))
                .collect(),
        )
    }

    pub fn support(&self) -> &[(i64, f64)] {
        &self.support
    }

    pub fn prob(&self, label: i64) -> f64 {
        self.support
            .iter()
            .filter(|(l, _)| *l == label)
            .map(|(_, p)| p)
            .sum()
    }
}

pub fn discrete_entropy(p: &Pmf) -> f64 {
    -p.support
        .iter()
        .filter(|(_, p)| *p > 0.0)
        .map(|(_, p)| p * p.log2())
        .sum::<f64>()
}

/// Standard normal cdf.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * erfc(-x / SQRT_2)
}

/// `Φ(b) - Φ(a)` for `a <= b` without cancellation in either tail.
pub fn normal_interval(a: f64, b: f64) -> f64 {
    if a >= b {
        return 0.0;
    }
    if a > 0.0 {
        0.5 * (erfc(a / SQRT_2) - erfc(b / SQRT_2))
    } else if b < 0.0 {
        0.5 * (erfc(-b / SQRT_2) - erfc(-a / SQRT_2))
    } else {
        1.0 - 0.5 * erfc(-a / SQRT_2) - 0.5 * erfc(b / SQRT_2)
    }
}

/// Law of `sign(X) floor(|X|)` for standard normal `X`, with the mass of
/// `|X| >= max_k` folded into the labels `±max_k`.
pub fn normal_integer_part_pmf(max_k: i64) -> Result<Pmf> {
    if max_k < 10 {
        return Err(Error::Argument(format!("max_k = {max_k} must be at least 10")));
    }
    let mut support = Vec::with_capacity(2 * max_k as usize + 1);
    for k in -max_k..=max_k {
        let a = k.unsigned_abs() as f64;
        let p = if k == 0 {
            normal_interval(-1.0, 1.0)
        } else if k.abs() == max_k {
            0.5 * erfc(a / SQRT_2)
        } else {
            normal_interval(a, a + 1.0)
        };
        support.push((k, p));
    }
    // Renormalize the ~1e-16 rounding residue.
    let total: f64 = support.iter().map(|(_, p)| p).sum();
    support.iter_mut().for_each(|(_, p)| *p /= total);
    Pmf::new(support)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MiMethod {
    Exact,
    Quadrature,
    MonteCarlo,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MiEstimate {
    pub value_bits: f64,
    pub std_error_bits: f64,
    pub method: MiMethod,
    pub samples: usize,
    pub rng: Option<String>,
}

impl MiEstimate {
    pub fn exact(value_bits: f64) -> Self {
        Self {
            value_bits,
            std_error_bits: 0.0,
            method: MiMethod::Exact,
            samples: 0,
            rng: None,
        }
    }
}

/// A cut matrix in either signal convention.
#[derive(Debug, Clone, PartialEq)]
pub enum CutMatrix {
    Real(DMatrix<f64>),
    Complex(DMatrix<Complex<f64>>),
}

/// Mutual information of `Y = H X + Z` for i.i.d. unit-variance Gaussian
/// inputs and noise: `½ log2 det(I + H Hᵗ)` for real signals and
/// `log2 det(I + H H^†)` for circularly-symmetric complex ones.
pub fn gaussian_mi_closed_form(h: &CutMatrix) -> f64 {
    let (svals, factor) = match h {
        CutMatrix::Real(m) if m.is_empty() => return 0.0,
        CutMatrix::Complex(m) if m.is_empty() => return 0.0,
        CutMatrix::Real(m) => (m.singular_values(), 0.5),
        CutMatrix::Complex(m) => (m.singular_values(), 1.0),
    };
    factor * svals.iter().map(|s| (s * s).ln_1p()).sum::<f64>() / LN_2
}

/// Joint law of a discrete real input vector.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteInput {
    points: Vec<(Vec<f64>, f64)>,
}

impl DiscreteInput {
    pub fn joint(points: Vec<(Vec<f64>, f64)>) -> Result<Self> {
        let dim = points.first().map(|(x, _)| x.len()).unwrap_or(0);
        if points.is_empty() || points.iter().any(|(x, _)| x.len() != dim) {
            return Err(Error::Argument("input points must be non-empty and share a dimension".into()));
        }
        if points.iter().any(|(_, p)| !(*p >= 0.0)) {
            return Err(Error::Argument("negative input probability".into()));
        }
        let total: f64 = points.iter().map(|(_, p)| p).sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::Argument(format!("input probabilities sum to {total}")));
        }
        Ok(Self { points })
    }

    /// Independent senders, each with its own `(value, probability)` list.
    pub fn product(alphabets: &[Vec<(f64, f64)>]) -> Result<Self> {
        let size = alphabets.iter().map(|a| a.len() as f64).product::<f64>();
        if size > (1u64 << 20) as f64 {
            return Err(Error::Argument(format!("product alphabet of {size} points exceeds 2^20")));
        }
        let mut points = vec![(Vec::new(), 1.0)];
        for alphabet in alphabets {
            points = points
                .into_iter()
                .flat_map(|(x, p)| {
                    alphabet.iter().map(move |&(v, q)| {
                        let mut x = x.clone();
                        x.push(v);
                        (x, p * q)
                    })
                })
                .collect();
        }
        Self::joint(points)
    }

    pub fn points(&self) -> &[(Vec<f64>, f64)] {
        &self.points
    }

    pub fn dim(&self) -> usize {
        self.points[0].0.len()
    }

    /// Mean power per coordinate.
    pub fn power(&self) -> f64 {
        self.points
            .iter()
            .map(|(x, p)| p * x.iter().map(|v| v * v).sum::<f64>())
            .sum::<f64>()
            / self.dim().max(1) as f64
    }
}

/// Sample mean and standard error of `f` over `samples` seeded draws.
pub(crate) fn mc_mean<F>(samples: usize, seed: u64, f: F) -> (f64, f64)
where
    F: Fn(&mut ChaCha8Rng) -> f64 + Sync,
{
    let chunks = samples.div_ceil(MC_CHUNK);
    let partial = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let len = MC_CHUNK.min(samples - c * MC_CHUNK);
            let (mut s, mut s2) = (0.0, 0.0);
            for _ in 0..len {
                let v = f(&mut rng);
                s += v;
                s2 += v * v;
            }
            (s, s2)
        })
        .collect::<Vec<_>>();
    let (s, s2) = partial
        .iter()
        .fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let n = samples as f64;
    let mean = s / n;
    let var = ((s2 / n - mean * mean) * n / (n - 1.0)).max(0.0);
    (mean, (var / n).sqrt())
}

fn log_sum_exp(values: impl Iterator<Item = f64>) -> f64 {
    let v = values.collect::<Vec<_>>();
    let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + v.iter().map(|x| (x - max).exp()).sum::<f64>().ln()
}

/// `I(X; HX + Z)` for discrete `X` and `Z ~ N(0, noise_var I)`.
///
/// Monte Carlo mean of `log2 p(Y|X) - log2 p(Y)`, with `p(Y)` the exact
/// Gaussian mixture density.
pub fn mimo_mi_discrete_input(
    h: &DMatrix<f64>,
    input: &DiscreteInput,
    noise_var: f64,
    samples: usize,
    seed: u64,
) -> Result<MiEstimate> {
    if !(noise_var > 0.0) {
        return Err(Error::Argument(format!("noise variance {noise_var} must be positive")));
    }
    if input.points.len() > 1 << 20 {
        return Err(Error::Argument("input alphabet exceeds 2^20 points".into()));
    }
    if samples < 10_000 {
        return Err(Error::Argument(format!("{samples} samples is below the 10^4 minimum")));
    }
    if h.ncols() != input.dim() {
        return Err(Error::Argument(format!(
            "matrix has {} columns but inputs have dimension {}",
            h.ncols(),
            input.dim()
        )));
    }
    let m = h.nrows();
    let centers = input
        .points
        .iter()
        .filter(|(_, p)| *p > 0.0)
        .map(|(x, p)| (h * DVector::from_column_slice(x), p.ln()))
        .collect::<Vec<_>>();
    let cum = centers
        .iter()
        .scan(0.0, |acc, (_, lp)| {
            *acc += lp.exp();
            Some(*acc)
        })
        .collect::<Vec<_>>();
    let sd = noise_var.sqrt();
    let log_norm = -0.5 * m as f64 * (2.0 * PI * noise_var).ln();
    let (value, se) = mc_mean(samples, seed, |rng| {
        let u: f64 = rng.random::<f64>() * cum[cum.len() - 1];
        let idx = cum.partition_point(|&c| c <= u).min(centers.len() - 1);
        let z = DVector::from_fn(m, |_, _| sd * rng.sample::<f64, _>(StandardNormal));
        let y = &centers[idx].0 + &z;
        let log_p = log_sum_exp(centers.iter().map(|(c, lw)| {
            lw + log_norm - 0.5 * (&y - c).norm_squared() / noise_var
        }));
        (log_norm - 0.5 * z.norm_squared() / noise_var - log_p) / LN_2
    });
    Ok(MiEstimate {
        value_bits: value,
        std_error_bits: se,
        method: MiMethod::MonteCarlo,
        samples,
        rng: Some(RNG_NAME.into()),
    })
}

// ---------------------------------------------------------------------------
// Continuous inputs built from the fractional part of a standard normal.

/// Law of `(fract(X) + offset) * scale` for `X ~ N(0, 1)`, where
/// `fract(x) = x - trunc(x)` lies in `(-1, 1)`.
///
/// Its density is a finite sum of Gaussian pieces: on the image of `[0, 1)`
/// it is `Σ_{K≥0} N(u; (offset - K) scale, scale²)`, on the image of
/// `(-1, 0)` it is `Σ_{K≥0} N(u; (offset + K) scale, scale²)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FractionalNormalLaw {
    pub offset: f64,
    pub scale: f64,
}

/// Terms beyond this integer shift carry less than `φ(9)` of density.
const FRACTIONAL_TERMS: usize = 10;

#[derive(Debug, Clone)]
pub(crate) struct DensityPiece {
    pub lo: f64,
    pub hi: f64,
    /// `(mean, sd)` of unit-weight normal terms.
    pub terms: Vec<(f64, f64)>,
}

impl FractionalNormalLaw {
    /// `fract(X)` itself.
    pub const FRACTIONAL: Self = Self { offset: 0.0, scale: 1.0 };
    /// `(fract(X) + 1) / 2`, which lies in `[0, 1)`.
    pub const SHIFTED: Self = Self { offset: 1.0, scale: 0.5 };

    pub fn sample<R: Rng>(&self, rng: &mut R) -> f64 {
        let x: f64 = rng.sample(StandardNormal);
        (x.fract() + self.offset) * self.scale
    }

    /// All terms of one piece share the standard deviation `scale`.
    pub(crate) fn pieces(&self) -> [DensityPiece; 2] {
        let s = self.scale;
        [
            DensityPiece {
                lo: (self.offset - 1.0) * s,
                hi: self.offset * s,
                terms: (0..FRACTIONAL_TERMS).map(|k| ((self.offset + k as f64) * s, s)).collect(),
            },
            DensityPiece {
                lo: self.offset * s,
                hi: (self.offset + 1.0) * s,
                terms: (0..FRACTIONAL_TERMS).map(|k| ((self.offset - k as f64) * s, s)).collect(),
            },
        ]
    }

    pub fn density(&self, u: f64) -> f64 {
        self.pieces()
            .iter()
            .filter(|p| p.lo <= u && u < p.hi)
            .flat_map(|p| p.terms.iter())
            .map(|&(mu, sd)| (-0.5 * ((u - mu) / sd).powi(2)).exp() / (sd * (2.0 * PI).sqrt()))
            .sum()
    }

    /// Probability of `[a, b)`.
    pub fn interval_probability(&self, a: f64, b: f64) -> f64 {
        self.pieces()
            .iter()
            .map(|p| {
                let (lo, hi) = (a.max(p.lo), b.min(p.hi));
                if lo >= hi {
                    return 0.0;
                }
                p.terms
                    .iter()
                    .map(|&(mu, sd)| normal_interval((lo - mu) / sd, (hi - mu) / sd))
                    .sum::<f64>()
            })
            .sum()
    }

    /// Masses of the `2^n` dyadic cells `[j 2^-n, (j+1) 2^-n)`; only
    /// meaningful for laws supported in `[0, 1)`.
    pub fn dyadic_cell_pmf(&self, n: u32) -> Vec<f64> {
        let step = (-(n as f64)).exp2();
        let mut pmf = (0..1u64 << n)
            .map(|j| self.interval_probability(j as f64 * step, (j + 1) as f64 * step))
            .collect::<Vec<_>>();
        let total: f64 = pmf.iter().sum();
        pmf.iter_mut().for_each(|p| *p /= total);
        pmf
    }
}

const GL_NODES: usize = 10;

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
fn gauss_legendre() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = GL_NODES;
        (0..n)
            .map(|i| {
                let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
                let mut dp = 0.0;
                for _ in 0..100 {
                    let (mut p0, mut p1) = (1.0, x);
                    for k in 2..=n {
                        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                        p0 = p1;
                        p1 = p2;
                    }
                    dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                    let dx = p1 / dp;
                    x -= dx;
                    if dx.abs() < 1e-15 {
                        break;
                    }
                }
                (x, 2.0 / ((1.0 - x * x) * dp * dp))
            })
            .collect()
    })
}

/// Density of `Y = H U + Z` for `U` with i.i.d. coordinates drawn from
/// `law` and `Z ~ N(0, I)`.
///
/// The last coordinate of `U` is integrated in closed form (a product of
/// Gaussians integrated over an interval), the others by Gauss–Legendre on
/// segments split at density discontinuities, restricted to where
/// `|y - H u|` is at most [`QUADRATURE_RADIUS`].
pub(crate) struct MixtureDensity {
    h: DMatrix<f64>,
    pieces: [DensityPiece; 2],
    /// Per-coordinate `(center offset matrix, half-width)` for clipping, when
    /// `H` has full column rank.
    clip: Option<(DMatrix<f64>, Vec<f64>)>,
    log_norm: f64,
    /// Per piece of the last coordinate: `(sd, 1/sd², sqrt(a), ln(sd sqrt(a)))`
    /// with `a = |b|² + 1/sd²` for the last column `b`.
    last: [(f64, f64, f64, f64); 2],
}

pub(crate) const QUADRATURE_RADIUS: f64 = 9.0;
/// Terms below `e^-80` of the noise density are dropped.
const NEGLIGIBLE_EXPONENT: f64 = -80.0;
const RELATIVE_CUTOFF: f64 = 23.0;
/// `Φ(-9)` is below 1e-18.
const DEEP_INSIDE: f64 = 9.0;

impl MixtureDensity {
    pub fn new(h: &DMatrix<f64>, law: FractionalNormalLaw) -> Self {
        let gram = h.transpose() * h;
        let clip = gram
            .clone()
            .cholesky()
            .filter(|c| c.l().diagonal().iter().all(|d| *d > 1e-9 * gram.max().max(1.0).sqrt()))
            .map(|c| {
                let inv = c.inverse();
                let pinv = &inv * h.transpose();
                let half = (0..h.ncols())
                    .map(|i| QUADRATURE_RADIUS * inv[(i, i)].sqrt())
                    .collect();
                (pinv, half)
            });
        let pieces = law.pieces();
        let bb = h.ncols().checked_sub(1).map_or(0.0, |j| h.column(j).norm_squared());
        let last = [0, 1].map(|i| {
            let sd = pieces[i].terms[0].1;
            let prec = 1.0 / (sd * sd);
            let sa = (bb + prec).sqrt();
            (sd, prec, sa, (sd * sa).ln())
        });
        Self {
            h: h.clone(),
            pieces,
            clip,
            log_norm: -0.5 * h.nrows() as f64 * (2.0 * PI).ln(),
            last,
        }
    }

    pub fn density(&self, y: &DVector<f64>) -> f64 {
        let k = self.h.ncols();
        if k == 0 {
            return (self.log_norm - 0.5 * y.norm_squared()).exp();
        }
        let bounds = self.clip.as_ref().map(|(pinv, half)| {
            let center = pinv * y;
            (0..k).map(|i| (center[i] - half[i], center[i] + half[i])).collect::<Vec<_>>()
        });
        let mut residual = y.clone();
        self.integrate(0, &mut residual, bounds.as_deref())
    }

    fn integrate(&self, j: usize, r: &mut DVector<f64>, bounds: Option<&[(f64, f64)]>) -> f64 {
        let k = self.h.ncols();
        let col = self.h.column(j).clone_owned();
        if j + 1 == k {
            return self.analytic_last(&col, r);
        }
        let mut cuts = vec![];
        for p in &self.pieces {
            cuts.push(p.lo);
            cuts.push(p.hi);
        }
        // Where the last coordinate's conditional center crosses one of its
        // density breakpoints the integrand steps; split there too.
        if j + 2 == k {
            let last = self.h.column(k - 1);
            let cross = last.dot(&col);
            let scale = col.norm().max(1e-300);
            if cross.abs() > 1e-12 {
                let mut edges = self.pieces.iter().flat_map(|p| [p.lo, p.hi]).collect::<Vec<_>>();
                edges.dedup();
                {
                    for b in edges {
                        let at = (last.dot(r) - b * last.norm_squared()) / cross;
                        for d in [0.0, -16.0, -4.0, -1.0, 1.0, 4.0, 16.0] {
                            cuts.push(at + d / scale);
                        }
                    }
                }
            }
        }
        let (lo_all, hi_all) = (self.pieces[0].lo, self.pieces[1].hi);
        let (clip_lo, clip_hi) = bounds.map_or((lo_all, hi_all), |b| (b[j].0.max(lo_all), b[j].1.min(hi_all)));
        if clip_lo >= clip_hi {
            return 0.0;
        }
        if let Some(b) = bounds {
            // Keep segments within three conditional widths so the bump
            // around the center is resolved.
            let width = 3.0 * (b[j].1 - b[j].0) / (2.0 * QUADRATURE_RADIUS);
            let steps = ((clip_hi - clip_lo) / width).ceil().min(64.0) as usize;
            cuts.extend((1..steps).map(|i| clip_lo + i as f64 * (clip_hi - clip_lo) / steps as f64));
        }
        cuts.retain(|c| *c > clip_lo && *c < clip_hi);
        cuts.push(clip_lo);
        cuts.push(clip_hi);
        cuts.sort_by(f64::total_cmp);
        cuts.dedup();
        let rule = gauss_legendre();
        let mut total = 0.0;
        for seg in cuts.windows(2) {
            let (a, b) = (seg[0], seg[1]);
            let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
            let piece = self
                .pieces
                .iter()
                .find(|p| p.lo <= mid && mid < p.hi)
                .expect("segment inside support");
            for &(x, w) in rule {
                let u = mid + half * x;
                let pu = piece
                    .terms
                    .iter()
                    .filter_map(|&(mu, sd)| {
                        let d = (u - mu) / sd;
                        // Relative weight below e^-40 next to the nearest term.
                        (d * d <= 80.0).then(|| (-0.5 * d * d).exp() / (sd * (2.0 * PI).sqrt()))
                    })
                    .sum::<f64>();
                r.axpy(-u, &col, 1.0);
                total += w * half * pu * self.integrate(j + 1, r, bounds);
                r.axpy(u, &col, 1.0);
            }
        }
        total
    }

    /// `∫ p(u) φ_m(r - b u) du` over the last coordinate, term by term.
    ///
    /// Each term is a Gaussian in `u` restricted to its piece. Terms whose
    /// bounded contribution is below `e^-RELATIVE_CUTOFF` of the largest one
    /// are dropped before any erfc is evaluated.
    fn analytic_last(&self, b: &DVector<f64>, r: &DVector<f64>) -> f64 {
        let bb = b.norm_squared();
        let br = b.dot(r);
        let rr = r.norm_squared();
        let mut terms = [(f64::NEG_INFINITY, 0.0, 0.0, 0.0, 0.0); 2 * FRACTIONAL_TERMS];
        let mut best = f64::NEG_INFINITY;
        let mut count = 0;
        for (p, &(sd, prec, sa, log_scale)) in self.pieces.iter().zip(&self.last) {
            let a = bb + prec;
            for &(mu, _) in &p.terms {
                let beta = br + mu * prec;
                let expo = -0.5 * (rr + mu * mu * prec - beta * beta / a);
                let center = beta / a;
                let outside = (p.lo - center).max(center - p.hi).max(0.0) * sa;
                let bound = expo - log_scale - 0.5 * outside * outside;
                best = best.max(bound);
                terms[count] = (bound, expo, sa * (p.lo - center), sa * (p.hi - center), sd * sa);
                count += 1;
            }
        }
        if best < NEGLIGIBLE_EXPONENT {
            return 0.0;
        }
        let mut total = 0.0;
        for &(bound, expo, lo, hi, norm) in &terms[..count] {
            if bound < best - RELATIVE_CUTOFF {
                continue;
            }
            let mass = if lo < -DEEP_INSIDE && hi > DEEP_INSIDE {
                1.0
            } else {
                normal_interval(lo, hi)
            };
            total += (self.log_norm + expo).exp() * mass / norm;
        }
        total
    }
}

/// `I(U; HU + Z)` for i.i.d. `U_j` from `law` and unit Gaussian noise,
/// estimated as the Monte Carlo mean of `log2 p(Y|U) - log2 p(Y)` with `p(Y)`
/// evaluated by [`MixtureDensity`].
pub fn mi_fractional_input(
    h: &DMatrix<f64>,
    law: FractionalNormalLaw,
    samples: usize,
    seed: u64,
) -> Result<MiEstimate> {
    if h.ncols() > 4 || h.nrows() > 4 {
        return Err(Error::BudgetExceeded(format!(
            "{}x{} matrix exceeds the 4x4 quadrature limit",
            h.nrows(),
            h.ncols()
        )));
    }
    let density = MixtureDensity::new(h, law);
    let (k, m) = (h.ncols(), h.nrows());
    let log_norm = -0.5 * m as f64 * (2.0 * PI).ln();
    let (value, se) = mc_mean(samples, seed, |rng| {
        let u = DVector::from_fn(k, |_, _| law.sample(rng));
        let z = DVector::from_fn(m, |_, _| rng.sample::<f64, _>(StandardNormal));
        let y = h * u + &z;
        (log_norm - 0.5 * z.norm_squared()) / LN_2 - density.density(&y).log2()
    });
    Ok(MiEstimate {
        value_bits: value,
        std_error_bits: se,
        method: MiMethod::MonteCarlo,
        samples,
        rng: Some(RNG_NAME.into()),
    })
}

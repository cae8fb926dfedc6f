//! Numerical replay of the Gaussian-to-discrete-superposition reduction on a
//! single real cut `y = H x + z`.
//!
//! Forward direction, per sample:
//!
//! * `x ~ N(0, I)`, split as `x = x_int + x_frac` with `x_int = trunc(x)`;
//! * `x_shift = (x_frac + 1) / 2 ∈ [0, 1)`, `x_det` its `n`-bit truncation;
//! * `y_scaled = (H/2) x + z`, `y_discard = (H/2) x_int`,
//!   `y_frac = (H/2) x_frac + z`, `y_shift = H x_shift + z`;
//! * `y_det_i = Σ_j floor(ĥ_ij x_det_j)` with `ĥ = trunc(H)`;
//! * `w_ij = h_ij (x_shift_j - x_det_j) + (h_ij - ĥ_ij) x_det_j
//!   + frac(ĥ_ij x_det_j)` and `eps_i = Σ_j w_ij + z_i`, so that
//!   `y_shift = y_det + eps` holds exactly.
//!
//! Converse direction, with the same `x_det` fed to the true gains:
//! `y = H x_det + z = y_det + Σ_j v_ij + z` where
//! `v_ij = (h_ij - ĥ_ij) x_det_j + frac(ĥ_ij x_det_j)`. Integer parts are
//! taken with `floor`, so `v_int ∈ {-1, 0, 1}` and the carry
//! `floor(Σ_j frac(v_ij) + frac(z_i))` lies in `{0, …, k}`; then
//! `y_det_i = floor(y_i - Σ_j v_int_ij - z_int_i) - carry_i`.
//!
//! `frac(v) = v - floor(v)` throughout, matching the DS link truncation.

use std::collections::{BTreeMap, BTreeSet};

use nalgebra::{Complex, DMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cutbounds::{real_joint_entropy, real_product_entropy};
use crate::error::{Error, Result};
use crate::infotheory::{
    discrete_entropy, gaussian_mi_closed_form, mi_fractional_input, mimo_mi_discrete_input, normal_interval,
    CutMatrix, DiscreteInput, FractionalNormalLaw, MiEstimate, Pmf, MC_CHUNK,
};
use crate::netmodel::ComplexGain;
use crate::reduction::{ds_depth, ds_real_link_output, MAX_DS_DEPTH};

pub const MIN_CHAIN_SAMPLES: usize = 100_000;
pub const MAX_CHAIN_DIM: usize = 4;
pub const MAX_CONVERSE_ALPHABET: usize = 1 << 16;

/// Largest admissible `|w_ij|`.
pub const W_BOUND: f64 = 4.0;
/// Admissible range of `v_int` and of the carry.
pub const INTEGER_PART_RANGE: std::ops::RangeInclusive<i64> = -2..=2;

const IDENTITY_TOLERANCE: f64 = 1e-9;
const MISO_ALPHABET: usize = 2048;
const MISO_SAMPLES: usize = 10_000;

/// `floor(log2 |h|)` over the non-zero entries, at least 1.
pub fn real_depth(h: &DMatrix<f64>) -> u32 {
    ds_depth(h.iter().map(|&g| ComplexGain::real(g)))
}

fn truncated_gains(h: &DMatrix<f64>) -> DMatrix<i64> {
    h.map(|g| g.trunc() as i64)
}

fn floor_frac(v: f64) -> f64 {
    v - v.floor()
}

/// Every intermediate quantity of one channel use; `w`, `v`, `v_int` are
/// indexed `[receiver][sender]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub sample: usize,
    pub x: Vec<f64>,
    pub x_int: Vec<f64>,
    pub x_frac: Vec<f64>,
    pub x_shift: Vec<f64>,
    pub x_det_bits: Vec<u64>,
    pub x_det: Vec<f64>,
    pub z: Vec<f64>,
    pub y_scaled: Vec<f64>,
    pub y_discard: Vec<f64>,
    pub y_frac: Vec<f64>,
    pub y_shift: Vec<f64>,
    pub y_det: Vec<i64>,
    pub eps: Vec<f64>,
    pub w: Vec<Vec<f64>>,
    pub y_embedded: Vec<f64>,
    pub v: Vec<Vec<f64>>,
    pub v_int: Vec<Vec<i64>>,
    pub z_int: Vec<i64>,
    pub carry: Vec<i64>,
}

impl TraceRecord {
    pub fn compute(h: &DMatrix<f64>, n: u32, sample: usize, x: Vec<f64>, z: Vec<f64>) -> Self {
        let (m, k) = h.shape();
        let scale = (n as f64).exp2();
        let hq = truncated_gains(h);
        let x_int = x.iter().map(|v| v.trunc()).collect::<Vec<_>>();
        let x_frac = x.iter().zip(&x_int).map(|(v, i)| v - i).collect::<Vec<_>>();
        let x_shift = x_frac
            .iter()
            .map(|f| ((f + 1.0) / 2.0).min(1.0 - f64::EPSILON / 2.0))
            .collect::<Vec<_>>();
        let x_det_bits = x_shift.iter().map(|s| (s * scale).floor() as u64).collect::<Vec<_>>();
        let x_det = x_det_bits.iter().map(|&b| b as f64 / scale).collect::<Vec<_>>();
        let dot = |row: usize, u: &[f64], factor: f64| (0..k).map(|j| factor * h[(row, j)] * u[j]).sum::<f64>();
        let mut rec = TraceRecord {
            sample,
            y_scaled: (0..m).map(|i| dot(i, &x, 0.5) + z[i]).collect(),
            y_discard: (0..m).map(|i| dot(i, &x_int, 0.5)).collect(),
            y_frac: (0..m).map(|i| dot(i, &x_frac, 0.5) + z[i]).collect(),
            y_shift: (0..m).map(|i| dot(i, &x_shift, 1.0) + z[i]).collect(),
            y_embedded: (0..m).map(|i| dot(i, &x_det, 1.0) + z[i]).collect(),
            y_det: (0..m)
                .map(|i| (0..k).map(|j| ds_real_link_output(hq[(i, j)], x_det_bits[j], n)).sum())
                .collect(),
            z_int: z.iter().map(|v| v.floor() as i64).collect(),
            x,
            x_int,
            x_frac,
            x_shift,
            x_det_bits,
            x_det,
            z,
            eps: vec![],
            w: vec![],
            v: vec![],
            v_int: vec![],
            carry: vec![],
        };
        for i in 0..m {
            let (mut w_row, mut v_row) = (Vec::with_capacity(k), Vec::with_capacity(k));
            for j in 0..k {
                let (g, gq, xd) = (h[(i, j)], hq[(i, j)] as f64, rec.x_det[j]);
                let v = (g - gq) * xd + floor_frac(gq * xd);
                v_row.push(v);
                w_row.push(g * (rec.x_shift[j] - xd) + v);
            }
            rec.eps.push(w_row.iter().sum::<f64>() + rec.z[i]);
            rec.carry.push(
                (v_row.iter().map(|&v| floor_frac(v)).sum::<f64>() + floor_frac(rec.z[i])).floor() as i64,
            );
            rec.v_int.push(v_row.iter().map(|v| v.floor() as i64).collect());
            rec.w.push(w_row);
            rec.v.push(v_row);
        }
        rec
    }
}

/// Seeded, lazily generated forward trace: records are produced in chunks
/// of [`MC_CHUNK`] samples, chunk `c` drawing from stream `c`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReductionTrace {
    pub gains: DMatrix<f64>,
    pub n: u32,
    pub samples: usize,
    pub seed: u64,
}

impl ReductionTrace {
    pub fn new(gains: DMatrix<f64>, n: u32, samples: usize, seed: u64) -> Result<Self> {
        if n == 0 || n > MAX_DS_DEPTH {
            return Err(Error::Argument(format!("bit depth {n} outside 1..={MAX_DS_DEPTH}")));
        }
        if gains.iter().any(|g| !g.is_finite()) {
            return Err(Error::Argument("gains must be finite".into()));
        }
        Ok(Self { gains, n, samples, seed })
    }

    pub fn num_chunks(&self) -> usize {
        self.samples.div_ceil(MC_CHUNK)
    }

    pub fn chunk(&self, c: usize) -> Vec<TraceRecord> {
        let (m, k) = self.gains.shape();
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(c as u64);
        let start = c * MC_CHUNK;
        let end = (start + MC_CHUNK).min(self.samples);
        (start..end)
            .map(|s| {
                let x = (0..k).map(|_| rng.sample(StandardNormal)).collect();
                let z = (0..m).map(|_| rng.sample(StandardNormal)).collect();
                TraceRecord::compute(&self.gains, self.n, s, x, z)
            })
            .collect()
    }

    pub fn records(&self) -> impl Iterator<Item = TraceRecord> + '_ {
        (0..self.num_chunks()).flat_map(|c| self.chunk(c))
    }
}

/// Observed extremes of a certified trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsSummary {
    pub samples: usize,
    pub max_abs_w: f64,
    /// Maxima of `|h (x_shift - x_det)|`, `|(h - ĥ) x_det|` and
    /// `frac(ĥ x_det)` over all terms.
    pub max_abs_w_terms: [f64; 3],
    pub v_int_support: BTreeSet<i64>,
    pub carry_support: BTreeSet<i64>,
    pub max_identity_residual: f64,
}

impl BoundsSummary {
    fn empty() -> Self {
        Self {
            samples: 0,
            max_abs_w: 0.0,
            max_abs_w_terms: [0.0; 3],
            v_int_support: BTreeSet::new(),
            carry_support: BTreeSet::new(),
            max_identity_residual: 0.0,
        }
    }

    fn merge(mut self, other: Self) -> Self {
        self.samples += other.samples;
        self.max_abs_w = self.max_abs_w.max(other.max_abs_w);
        for t in 0..3 {
            self.max_abs_w_terms[t] = self.max_abs_w_terms[t].max(other.max_abs_w_terms[t]);
        }
        self.v_int_support.extend(other.v_int_support);
        self.carry_support.extend(other.carry_support);
        self.max_identity_residual = self.max_identity_residual.max(other.max_identity_residual);
        self
    }
}

fn violation(sample: usize, variable: String, value: f64) -> Error {
    Error::Certification { sample, variable, value }
}

/// Checks every record against the sample-wise bounds and reconstruction
/// identities; the first failure names its sample and variable.
pub fn verify_records(h: &DMatrix<f64>, n: u32, records: &[TraceRecord]) -> Result<BoundsSummary> {
    let (m, k) = h.shape();
    let hq = truncated_gains(h);
    let scale = (n as f64).exp2();
    let mut summary = BoundsSummary::empty();
    for r in records {
        let s = r.sample;
        for i in 0..m {
            for j in 0..k {
                let w = r.w[i][j];
                if !(w.abs() <= W_BOUND) {
                    return Err(violation(s, format!("w[{i}][{j}]"), w));
                }
                summary.max_abs_w = summary.max_abs_w.max(w.abs());
                let v_int = r.v_int[i][j];
                if !INTEGER_PART_RANGE.contains(&v_int) {
                    return Err(violation(s, format!("v_int[{i}][{j}]"), v_int as f64));
                }
                summary.v_int_support.insert(v_int);
                let (g, gq) = (h[(i, j)], hq[(i, j)] as f64);
                let terms = [
                    (g * (r.x_shift[j] - r.x_det[j])).abs(),
                    ((g - gq) * r.x_det[j]).abs(),
                    floor_frac(gq * r.x_det[j]),
                ];
                for (t, v) in terms.into_iter().enumerate() {
                    summary.max_abs_w_terms[t] = summary.max_abs_w_terms[t].max(v);
                }
            }
            let c = r.carry[i];
            if !INTEGER_PART_RANGE.contains(&c) {
                return Err(violation(s, format!("carry[{i}]"), c as f64));
            }
            summary.carry_support.insert(c);
        }
        for j in 0..k {
            if !(0.0..1.0).contains(&r.x_shift[j]) {
                return Err(violation(s, format!("x_shift[{j}]"), r.x_shift[j]));
            }
            if r.x_int[j] + r.x_frac[j] != r.x[j] || r.x_frac[j].abs() >= 1.0 || r.x_int[j].fract() != 0.0 {
                return Err(violation(s, format!("x_frac[{j}]"), r.x_frac[j]));
            }
            if r.x_det_bits[j] != (r.x_shift[j] * scale).floor() as u64 || r.x_det[j] * scale != r.x_det_bits[j] as f64 {
                return Err(violation(s, format!("x_det[{j}]"), r.x_det[j]));
            }
        }
        let mut residual = 0.0f64;
        let mut check = |name: &str, i: usize, lhs: f64, rhs: f64| -> Result<()> {
            let d = (lhs - rhs).abs() / lhs.abs().max(rhs.abs()).max(1.0);
            residual = residual.max(d);
            if d > IDENTITY_TOLERANCE {
                return Err(violation(s, format!("{name}[{i}]"), lhs - rhs));
            }
            Ok(())
        };
        for i in 0..m {
            let row = |u: &[f64], f: f64| (0..k).map(|j| f * h[(i, j)] * u[j]).sum::<f64>();
            let half_sum = (0..k).map(|j| 0.5 * h[(i, j)]).sum::<f64>();
            let y_det = (0..k)
                .map(|j| ds_real_link_output(hq[(i, j)], r.x_det_bits[j], n))
                .sum::<i64>();
            if y_det != r.y_det[i] {
                return Err(violation(s, format!("y_det[{i}]"), r.y_det[i] as f64));
            }
            check("y_scaled", i, r.y_scaled[i], r.y_discard[i] + r.y_frac[i])?;
            check("y_discard", i, r.y_discard[i], row(&r.x_int, 0.5))?;
            check("y_frac", i, r.y_frac[i], row(&r.x_frac, 0.5) + r.z[i])?;
            check("y_shift", i, r.y_shift[i], r.y_frac[i] + half_sum)?;
            check("eps", i, r.eps[i], r.w[i].iter().sum::<f64>() + r.z[i])?;
            check("y_det_plus_eps", i, r.y_shift[i], r.y_det[i] as f64 + r.eps[i])?;
            check("y_embedded", i, r.y_embedded[i], r.y_det[i] as f64 + r.v[i].iter().sum::<f64>() + r.z[i])?;
            let recovered = (r.y_embedded[i] - r.v_int[i].iter().sum::<i64>() as f64 - r.z_int[i] as f64).floor() as i64
                - r.carry[i];
            if recovered != r.y_det[i] {
                return Err(violation(s, format!("recovered_y_det[{i}]"), recovered as f64));
            }
        }
        summary.max_identity_residual = summary.max_identity_residual.max(residual);
        summary.samples += 1;
    }
    Ok(summary)
}

/// [`verify_records`] over a whole trace, chunks checked in parallel and
/// merged in sample order.
pub fn verify_sample_bounds(trace: &ReductionTrace) -> Result<BoundsSummary> {
    let parts = (0..trace.num_chunks())
        .into_par_iter()
        .map(|c| verify_records(&trace.gains, trace.n, &trace.chunk(c)))
        .collect::<Vec<_>>();
    parts
        .into_iter()
        .try_fold(BoundsSummary::empty(), |acc, p| Ok(acc.merge(p?)))
}

/// `4 (I + (H/2)(H/2)ᵗ) - (I + H Hᵗ)`, grouped as
/// `(4I - I) + (4 (H/2)(H/2)ᵗ - H Hᵗ)` so that power-of-two scaling keeps
/// the second bracket exactly zero.
pub fn psd_scaling_difference(h: &DMatrix<f64>) -> DMatrix<f64> {
    let m = h.nrows();
    let id = DMatrix::<f64>::identity(m, m);
    let half = h / 2.0;
    (&id * 4.0 - &id) + ((&half * half.transpose()) * 4.0 - h * h.transpose())
}

/// Whether the scaling difference equals `3I` to 1e-9 and is positive
/// definite.
pub fn psd_scaling_check(h: &DMatrix<f64>) -> bool {
    let d = psd_scaling_difference(h);
    let m = d.nrows();
    let three = DMatrix::<f64>::identity(m, m) * 3.0;
    (&d - three).iter().all(|e| e.abs() <= 1e-9) && (m == 0 || d.cholesky().is_some())
}

/// Replaces each complex entry `a + bi` by the real block `[[a, -b], [b, a]]`.
pub fn complex_to_real_expand(h: &DMatrix<Complex<f64>>) -> DMatrix<f64> {
    let (m, k) = h.shape();
    DMatrix::from_fn(2 * m, 2 * k, |r, c| {
        let g = h[(r / 2, c / 2)];
        match (r % 2, c % 2) {
            (0, 0) | (1, 1) => g.re,
            (0, 1) => -g.im,
            _ => g.im,
        }
    })
}

fn require_real(h: &CutMatrix) -> Result<DMatrix<f64>> {
    match h {
        CutMatrix::Real(m) => Ok(m.clone()),
        CutMatrix::Complex(m) if m.iter().all(|g| g.im == 0.0) => Ok(m.map(|g| g.re)),
        CutMatrix::Complex(_) => Err(Error::NonRealMatrix),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundSource {
    /// Literal constant for two senders and two receivers.
    Stated,
    /// Recomputed by the same argument for other sizes.
    Derived,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepLossReport {
    pub step: String,
    pub mi_before_bits: f64,
    pub mi_after_bits: f64,
    pub loss_bits: f64,
    pub stated_bound_bits: f64,
    /// Bound the `holds` flag is evaluated against.
    pub checked_bound_bits: f64,
    pub bound_source: BoundSource,
    pub std_error_bits: f64,
    pub holds: bool,
    pub note: String,
}

impl StepLossReport {
    #[allow(clippy::too_many_arguments)]
    fn new(
        step: &str,
        before: f64,
        after: f64,
        stated: f64,
        checked: f64,
        source: BoundSource,
        se: f64,
        note: &str,
    ) -> Self {
        let loss = before - after;
        Self {
            step: step.into(),
            mi_before_bits: before,
            mi_after_bits: after,
            loss_bits: loss,
            stated_bound_bits: stated,
            checked_bound_bits: checked,
            bound_source: source,
            std_error_bits: se,
            holds: loss <= checked + 3.0 * se,
            note: note.into(),
        }
    }
}

/// Per-step bounds for `k` senders and `m` receivers:
/// `(scale, integer-discard, final)`.
pub fn forward_step_bounds(k: usize, m: usize) -> ([f64; 3], BoundSource) {
    if k == 2 && m == 2 {
        return ([1.0, 8.0, 6.0], BoundSource::Stated);
    }
    let miso = (0.5 * (1.0 + 16.0 * k as f64).log2()).ceil();
    ([1.0, 4.0 * k as f64, m as f64 * miso], BoundSource::Derived)
}

/// Mutual information between one receiver's summed error terms and its
/// error `eps_i`, estimated over an empirical alphabet of trace samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MisoCheck {
    pub receiver: usize,
    pub estimate: MiEstimate,
    /// `½ log2(1 + E[S²])` for the empirical power of `S = Σ_j w_ij`.
    pub gaussian_bound_bits: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForwardChain {
    pub gains: DMatrix<f64>,
    pub n: u32,
    pub steps: Vec<StepLossReport>,
    /// `½ log2 det(I + H Hᵗ)`.
    pub gaussian_bits: f64,
    /// `H(Y_det)` under the input law induced by the chain.
    pub ds_bits: f64,
    /// `H(Y_det)` under uniform independent `n`-bit inputs.
    pub ds_uniform_bits: f64,
    pub total_loss_bits: f64,
    pub total_bound_bits: f64,
    pub total_slack_bits: f64,
    pub total_holds: bool,
    pub miso: Vec<MisoCheck>,
    pub trace: ReductionTrace,
}

impl ForwardChain {
    pub fn all_hold(&self) -> bool {
        self.total_holds && self.steps.iter().all(|s| s.holds) && self.miso.iter().all(|m| m.holds)
    }
}

/// Slack on top of the summed step bounds when checking the total loss.
pub const TOTAL_SLACK_BITS: f64 = 2.0;

/// Absolute allowance for quadrature rounding when two estimates of the
/// same quantity have a vanishing standard error, as for a zero matrix.
pub const QUADRATURE_FLOOR_BITS: f64 = 1e-9;

/// Runs the forward reduction chain on a real cut matrix with i.i.d.
/// standard normal inputs.
///
/// Seeds: the trace uses `seed`, the two Monte Carlo estimates use
/// `seed + 1` and `seed + 2`, the per-receiver checks `seed + 3 + i`.
pub fn ds_forward_chain(h: &CutMatrix, n: u32, samples: usize, seed: u64) -> Result<ForwardChain> {
    let h = require_real(h)?;
    let (m, k) = h.shape();
    if m == 0 || k == 0 || m > MAX_CHAIN_DIM || k > MAX_CHAIN_DIM {
        return Err(Error::BudgetExceeded(format!(
            "{m}x{k} cut outside the 1..={MAX_CHAIN_DIM} chain limit"
        )));
    }
    if samples < MIN_CHAIN_SAMPLES {
        return Err(Error::Argument(format!(
            "{samples} samples is below the {MIN_CHAIN_SAMPLES} minimum"
        )));
    }
    let trace = ReductionTrace::new(h.clone(), n, samples, seed)?;
    let half = &h / 2.0;
    let ([scale_bound, discard_bound, final_bound], source) = forward_step_bounds(k, m);

    let i_full = gaussian_mi_closed_form(&CutMatrix::Real(h.clone()));
    let i_scaled = gaussian_mi_closed_form(&CutMatrix::Real(half.clone()));
    let i_frac = mi_fractional_input(&half, FractionalNormalLaw::FRACTIONAL, samples, seed.wrapping_add(1))?;
    let i_shift = mi_fractional_input(&h, FractionalNormalLaw::SHIFTED, samples, seed.wrapping_add(2))?;

    let hq = truncated_gains(&h);
    let rows = (0..m).map(|i| (0..k).map(|j| hq[(i, j)]).collect::<Vec<_>>()).collect::<Vec<_>>();
    let cell_pmf = FractionalNormalLaw::SHIFTED.dyadic_cell_pmf(n);
    let ds_bits = real_product_entropy(&rows, n, &vec![cell_pmf; k])?;
    let uniform = vec![(-(n as f64)).exp2(); 1 << n];
    let ds_uniform_bits = real_product_entropy(&rows, n, &vec![uniform; k])?;

    let scale_checked = k.min(m) as f64;
    let mut steps = vec![
        StepLossReport::new(
            "scale",
            i_full,
            i_scaled,
            scale_bound,
            scale_checked,
            BoundSource::Derived,
            0.0,
            "closed form; stated bound is 1 bit, the matrix inequality gives min(k, m) bits, observed value reported",
        ),
        StepLossReport::new(
            "integer-discard",
            i_scaled,
            i_frac.value_bits,
            discard_bound,
            discard_bound,
            source,
            i_frac.std_error_bits,
            "closed form minus Monte Carlo estimate",
        ),
        StepLossReport::new(
            "positivity-shift",
            i_frac.value_bits,
            i_shift.value_bits,
            0.0,
            0.0,
            source,
            i_frac.std_error_bits.hypot(i_shift.std_error_bits),
            "two independent Monte Carlo estimates of the same quantity",
        ),
        StepLossReport::new(
            "final-discretization",
            i_shift.value_bits,
            ds_bits,
            final_bound,
            final_bound,
            source,
            i_shift.std_error_bits,
            "Monte Carlo estimate minus exact output entropy",
        ),
    ];
    // The shift step is an equality; it holds when the estimates agree.
    steps[2].holds = steps[2].loss_bits.abs() <= 3.0 * steps[2].std_error_bits + QUADRATURE_FLOOR_BITS;

    let miso = miso_checks(&trace, seed)?;
    let total_bound_bits = scale_bound + discard_bound + final_bound;
    let total_loss_bits = i_full - ds_bits;
    let total_se = i_frac.std_error_bits.max(i_shift.std_error_bits);
    Ok(ForwardChain {
        n,
        steps,
        gaussian_bits: i_full,
        ds_bits,
        ds_uniform_bits,
        total_loss_bits,
        total_bound_bits,
        total_slack_bits: TOTAL_SLACK_BITS,
        total_holds: total_loss_bits <= total_bound_bits + TOTAL_SLACK_BITS + 3.0 * total_se,
        miso,
        gains: h,
        trace,
    })
}

/// Complex cut matrices go through [`complex_to_real_expand`]; with unit
/// variance per real component this is the same channel as the complex one
/// with inputs and noise of variance 2.
pub fn ds_forward_chain_complex(
    h: &DMatrix<Complex<f64>>,
    n: u32,
    samples: usize,
    seed: u64,
) -> Result<ForwardChain> {
    ds_forward_chain(&CutMatrix::Real(complex_to_real_expand(h)), n, samples, seed)
}

fn miso_checks(trace: &ReductionTrace, seed: u64) -> Result<Vec<MisoCheck>> {
    let m = trace.gains.nrows();
    let sums = trace
        .records()
        .take(MISO_ALPHABET)
        .map(|r| r.w.iter().map(|row| row.iter().sum::<f64>()).collect::<Vec<_>>())
        .collect::<Vec<_>>();
    (0..m)
        .map(|i| {
            let p = 1.0 / sums.len() as f64;
            let input = DiscreteInput::joint(sums.iter().map(|s| (vec![s[i]], p)).collect())?;
            let power = input.power();
            let estimate = mimo_mi_discrete_input(
                &DMatrix::from_element(1, 1, 1.0),
                &input,
                1.0,
                MISO_SAMPLES,
                seed.wrapping_add(3 + i as u64),
            )?;
            Ok(MisoCheck {
                receiver: i,
                holds: estimate.value_bits + 3.0 * estimate.std_error_bits < 3.0,
                gaussian_bound_bits: 0.5 * (1.0 + power).log2(),
                estimate,
            })
        })
        .collect()
}

/// Converse embedding of a DS input law into the Gaussian cut.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConverseReport {
    pub step: StepLossReport,
    /// `H(Y_det)`, exact.
    pub ds_bits: f64,
    pub gaussian: MiEstimate,
    /// `H(v_int[i][j])`, exact from the input marginals.
    pub v_int_entropy_bits: Vec<Vec<f64>>,
    /// Plug-in `H(carry[i])` over the sampled channel uses.
    pub carry_entropy_bits: Vec<f64>,
    /// `H(floor(Z))` for standard normal `Z`, exact.
    pub z_int_entropy_bits: f64,
    /// Sum of the component entropies above.
    pub component_bound_bits: f64,
    /// Each component within its budget (3, 3, 4 bits) and the loss within
    /// their sum.
    pub components_hold: bool,
}

/// Compares `I(X_det; Y_det)` with `I(X_det; H X_det + Z)` for a joint law
/// over `n`-bit inputs given as `(per-sender bits, probability)` pairs.
///
/// The Gaussian side uses `seed`; carries are sampled from `seed + 1`.
pub fn ds_converse_chain(
    h: &DMatrix<f64>,
    n: u32,
    joint: &[(Vec<u64>, f64)],
    samples: usize,
    seed: u64,
) -> Result<ConverseReport> {
    let (m, k) = h.shape();
    if joint.len() > MAX_CONVERSE_ALPHABET {
        return Err(Error::BudgetExceeded(format!(
            "input alphabet of {} points exceeds {MAX_CONVERSE_ALPHABET}",
            joint.len()
        )));
    }
    if n == 0 || n > MAX_DS_DEPTH {
        return Err(Error::Argument(format!("bit depth {n} outside 1..={MAX_DS_DEPTH}")));
    }
    if let Some((bits, _)) = joint.iter().find(|(b, _)| b.len() != k || b.iter().any(|&x| x >> n != 0)) {
        return Err(Error::Argument(format!("input {bits:?} is not {k} values of {n} bits")));
    }
    let scale = (n as f64).exp2();
    let to_value = |bits: &[u64]| bits.iter().map(|&b| b as f64 / scale).collect::<Vec<_>>();
    let input = DiscreteInput::joint(joint.iter().map(|(b, p)| (to_value(b), *p)).collect())?;
    let hq = truncated_gains(h);
    let rows = (0..m).map(|i| (0..k).map(|j| hq[(i, j)]).collect::<Vec<_>>()).collect::<Vec<_>>();
    let ds_bits = real_joint_entropy(&rows, n, joint);
    let gaussian = mimo_mi_discrete_input(h, &input, 1.0, samples, seed)?;

    let mut marginals = vec![BTreeMap::<u64, f64>::new(); k];
    for (bits, p) in joint {
        for (j, &b) in bits.iter().enumerate() {
            *marginals[j].entry(b).or_default() += p;
        }
    }
    let v_int_entropy_bits = (0..m)
        .map(|i| {
            (0..k)
                .map(|j| {
                    let mut pmf = BTreeMap::<i64, f64>::new();
                    for (&b, &p) in &marginals[j] {
                        let xd = b as f64 / scale;
                        let gq = hq[(i, j)] as f64;
                        let v = (h[(i, j)] - gq) * xd + floor_frac(gq * xd);
                        *pmf.entry(v.floor() as i64).or_default() += p;
                    }
                    entropy_of(pmf)
                })
                .collect::<Vec<_>>()
        })
        .collect::<Vec<_>>();

    let carry_entropy_bits = sample_carry_entropy(h, n, joint, samples, seed.wrapping_add(1));
    let z_int_entropy_bits = entropy_of(
        (-40i64..40)
            .map(|j| (j, normal_interval(j as f64, (j + 1) as f64)))
            .collect(),
    );
    let component_bound_bits = v_int_entropy_bits.iter().flatten().sum::<f64>()
        + carry_entropy_bits.iter().sum::<f64>()
        + m as f64 * z_int_entropy_bits;

    let (stated, source) = if k == 2 && m == 2 {
        (28.0, BoundSource::Stated)
    } else {
        ((3 * k * m + 3 * m + 4 * m) as f64, BoundSource::Derived)
    };
    let step = StepLossReport::new(
        "converse-embedding",
        ds_bits,
        gaussian.value_bits,
        stated,
        stated,
        source,
        gaussian.std_error_bits,
        "exact output entropy minus Monte Carlo estimate on the true gains",
    );
    let components_hold = v_int_entropy_bits.iter().flatten().all(|&b| b <= 3.0)
        && carry_entropy_bits.iter().all(|&b| b <= 3.0)
        && z_int_entropy_bits <= 4.0
        && step.loss_bits <= component_bound_bits + 3.0 * gaussian.std_error_bits;
    Ok(ConverseReport {
        step,
        ds_bits,
        gaussian,
        v_int_entropy_bits,
        carry_entropy_bits,
        z_int_entropy_bits,
        component_bound_bits,
        components_hold,
    })
}

fn entropy_of<K: Ord>(pmf: BTreeMap<K, f64>) -> f64 {
    let total: f64 = pmf.values().sum();
    let labels = pmf.values().enumerate().map(|(i, p)| (i as i64, p / total)).collect();
    Pmf::new(labels).map(|p| discrete_entropy(&p)).unwrap_or(f64::NAN)
}

fn sample_carry_entropy(h: &DMatrix<f64>, n: u32, joint: &[(Vec<u64>, f64)], samples: usize, seed: u64) -> Vec<f64> {
    let (m, k) = h.shape();
    let scale = (n as f64).exp2();
    let hq = truncated_gains(h);
    let cum = joint
        .iter()
        .scan(0.0, |acc, (_, p)| {
            *acc += p;
            Some(*acc)
        })
        .collect::<Vec<_>>();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = vec![BTreeMap::<i64, f64>::new(); m];
    for _ in 0..samples {
        let u: f64 = rng.random::<f64>() * cum[cum.len() - 1];
        let bits = &joint[cum.partition_point(|&c| c <= u).min(joint.len() - 1)].0;
        for (i, count) in counts.iter_mut().enumerate() {
            let z: f64 = rng.sample(StandardNormal);
            let frac_sum = (0..k)
                .map(|j| {
                    let xd = bits[j] as f64 / scale;
                    let gq = hq[(i, j)] as f64;
                    floor_frac((h[(i, j)] - gq) * xd + floor_frac(gq * xd))
                })
                .sum::<f64>();
            *count.entry((frac_sum + floor_frac(z)).floor() as i64).or_default() += 1.0;
        }
    }
    counts.into_iter().map(entropy_of).collect()
}

/// Uniform independent `n`-bit inputs for `k` senders.
pub fn uniform_product_law(k: usize, n: u32) -> Vec<(Vec<u64>, f64)> {
    let per = 1u64 << n;
    let size = per.pow(k as u32);
    let p = 1.0 / size as f64;
    (0..size)
        .map(|mut idx| {
            let bits = (0..k)
                .map(|_| {
                    let b = idx % per;
                    idx /= per;
                    b
                })
                .collect();
            (bits, p)
        })
        .collect()
}

/// All senders send the same uniform `n`-bit value.
pub fn identical_inputs_law(k: usize, n: u32) -> Vec<(Vec<u64>, f64)> {
    let p = (-(n as f64)).exp2();
    (0..1u64 << n).map(|b| (vec![b; k], p)).collect()
}

pub fn matrix_from_rows(rows: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    let k = rows.first().map_or(0, |r| r.len());
    if rows.iter().any(|r| r.len() != k) {
        return Err(Error::Argument("matrix rows differ in length".into()));
    }
    Ok(DMatrix::from_fn(rows.len(), k, |i, j| rows[i][j]))
}

/// Output of the forward chain with the trace replaced by its summary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub steps: Vec<StepLossReport>,
    pub gaussian_bits: f64,
    pub ds_bits: f64,
    pub ds_uniform_bits: f64,
    pub total_loss_bits: f64,
    pub total_bound_bits: f64,
    pub total_slack_bits: f64,
    pub total_holds: bool,
    pub miso: Vec<MisoCheck>,
    pub sample_bounds: BoundsSummary,
    pub all_hold: bool,
}

pub fn theorem_report(chain: &ForwardChain) -> Result<TheoremReport> {
    let sample_bounds = verify_sample_bounds(&chain.trace)?;
    Ok(TheoremReport {
        steps: chain.steps.clone(),
        gaussian_bits: chain.gaussian_bits,
        ds_bits: chain.ds_bits,
        ds_uniform_bits: chain.ds_uniform_bits,
        total_loss_bits: chain.total_loss_bits,
        total_bound_bits: chain.total_bound_bits,
        total_slack_bits: chain.total_slack_bits,
        total_holds: chain.total_holds,
        miso: chain.miso.clone(),
        all_hold: chain.all_hold(),
        sample_bounds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn counter(h: f64) -> DMatrix<f64> {
        DMatrix::from_row_slice(2, 2, &[h, -h, h, h])
    }

    #[test]
    fn record_identities_hold() {
        let trace = ReductionTrace::new(counter(4.0), 2, 20_000, 1).unwrap();
        let s = verify_sample_bounds(&trace).unwrap();
        assert_eq!(s.samples, 20_000);
        assert!(s.max_abs_w <= 4.0);
        assert!(s.v_int_support.iter().all(|v| (-1..=1).contains(v)));
        assert!(s.carry_support.iter().all(|c| (0..=2).contains(c)));
        assert!(s.max_identity_residual < 1e-12);
    }

    #[test]
    fn injected_violation_is_named() {
        let h = counter(4.0);
        let mut rec = ReductionTrace::new(h.clone(), 2, 10, 3).unwrap().chunk(0).remove(4);
        rec.w[1][0] = 4.5;
        match verify_records(&h, 2, &[rec]) {
            Err(Error::Certification { sample, variable, value }) => {
                assert_eq!((sample, variable.as_str(), value), (4, "w[1][0]", 4.5));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn deeper_quantization_shrinks_first_error_term() {
        let h = counter(32.0);
        let coarse = verify_sample_bounds(&ReductionTrace::new(h.clone(), 5, 20_000, 2).unwrap()).unwrap();
        let fine = verify_sample_bounds(&ReductionTrace::new(h, 12, 20_000, 2).unwrap()).unwrap();
        assert!(coarse.max_abs_w_terms[0] <= 32.0 / 32.0);
        assert!(fine.max_abs_w_terms[0] <= 32.0 / 4096.0);
        assert!(fine.max_abs_w_terms[0] < coarse.max_abs_w_terms[0]);
    }

    #[test]
    fn trace_is_reproducible_and_chunked() {
        let t = ReductionTrace::new(counter(8.0), 3, 5000, 11).unwrap();
        let a = t.records().collect::<Vec<_>>();
        let b = t.records().collect::<Vec<_>>();
        assert_eq!(a, b);
        assert_eq!(a.len(), 5000);
        assert_eq!(a[4097].sample, 4097);
        assert!(ReductionTrace::new(counter(8.0), 0, 10, 0).is_err());
    }

    #[test]
    fn psd_scaling_examples() {
        assert!(psd_scaling_check(&DMatrix::zeros(3, 3)));
        assert_eq!(psd_scaling_difference(&DMatrix::zeros(2, 2)), DMatrix::identity(2, 2) * 3.0);
        let big = DMatrix::from_row_slice(2, 3, &[1048576.0, -1048575.5, 3.25, -7.0, 1048576.0, 0.1]);
        assert!(psd_scaling_check(&big));
    }

    #[test]
    fn complex_expansion_examples() {
        let i = DMatrix::from_element(1, 1, Complex::new(0.0, 1.0));
        assert_eq!(complex_to_real_expand(&i), DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]));
        let g = DMatrix::from_element(1, 1, Complex::new(3.0, -4.0));
        let sv = complex_to_real_expand(&g).singular_values();
        assert_relative_eq!(sv[0], 5.0, epsilon = 1e-12);
        assert_relative_eq!(sv[1], 5.0, epsilon = 1e-12);
    }

    #[test]
    fn complex_expansion_doubles_the_real_log_det() {
        let h = DMatrix::from_row_slice(
            2,
            2,
            &[Complex::new(1.2, -0.3), Complex::new(0.4, 2.0), Complex::new(-1.0, 0.5), Complex::new(0.7, 0.7)],
        );
        let complex = gaussian_mi_closed_form(&CutMatrix::Complex(h.clone()));
        let real = gaussian_mi_closed_form(&CutMatrix::Real(complex_to_real_expand(&h)));
        assert_relative_eq!(complex, real, epsilon = 1e-12);
        // Direct determinant: det(I + R Rᵗ) = |det(I + H H†)|².
        let id = DMatrix::<Complex<f64>>::identity(2, 2);
        let dc = (&id + &h * h.adjoint()).determinant().norm();
        let r = complex_to_real_expand(&h);
        let dr = (DMatrix::<f64>::identity(4, 4) + &r * r.transpose()).determinant();
        assert_relative_eq!(dr, dc * dc, max_relative = 1e-12);
    }

    #[test]
    fn non_real_matrix_is_rejected() {
        let h = DMatrix::from_element(2, 2, Complex::new(1.0, 1.0));
        assert!(matches!(
            ds_forward_chain(&CutMatrix::Complex(h), 2, MIN_CHAIN_SAMPLES, 0),
            Err(Error::NonRealMatrix)
        ));
        assert!(ds_forward_chain(&CutMatrix::Real(counter(4.0)), 2, 10, 0).is_err());
    }

    #[test]
    fn zero_matrix_chain_is_lossless() {
        let chain = ds_forward_chain(&CutMatrix::Real(DMatrix::zeros(2, 2)), 1, MIN_CHAIN_SAMPLES, 5).unwrap();
        for s in &chain.steps {
            assert!(s.mi_before_bits.abs() < 1e-9 && s.mi_after_bits.abs() < 1e-9, "{s:?}");
            assert!(s.holds, "{s:?}");
        }
        assert!(chain.all_hold());
    }

    #[test]
    fn counterexample_chain_holds() {
        let h = counter(4.0);
        let chain = ds_forward_chain(&CutMatrix::Real(h.clone()), real_depth(&h), MIN_CHAIN_SAMPLES, 7).unwrap();
        assert_eq!(chain.n, 2);
        assert!(chain.all_hold(), "{:#?}", chain.steps);
        assert!(chain.total_loss_bits <= 15.0 + 2.0);
        assert_relative_eq!(chain.gaussian_bits, 0.5 * (33f64 * 33.0).log2(), epsilon = 1e-12);
    }

    #[test]
    fn converse_trivial_and_correlated_inputs() {
        let h = DMatrix::from_row_slice(2, 2, &[8.0, -8.0, 8.0, 8.0]);
        let point = vec![(vec![3u64, 5], 1.0)];
        let r = ds_converse_chain(&h, 3, &point, 20_000, 1).unwrap();
        assert_eq!(r.ds_bits, 0.0);
        assert!(r.gaussian.value_bits.abs() < 1e-9);
        assert!(r.step.holds);
        let same = ds_converse_chain(&h, 3, &identical_inputs_law(2, 3), 20_000, 1).unwrap();
        assert_relative_eq!(same.ds_bits, 3.0, epsilon = 1e-12);
        assert!(same.step.holds && same.components_hold, "{same:?}");
        let too_big = uniform_product_law(1, 17);
        assert!(ds_converse_chain(&DMatrix::from_element(1, 1, 2.0), 17, &too_big, 20_000, 1).is_err());
    }

    #[test]
    fn floor_integer_part_of_noise() {
        let h = entropy_of(
            (-40i64..40)
                .map(|j| (j, normal_interval(j as f64, (j + 1) as f64)))
                .collect(),
        );
        assert!(h > 1.9 && h < 2.2, "{h}");
    }

    #[test]
    fn step_bounds_table() {
        assert_eq!(forward_step_bounds(2, 2), ([1.0, 8.0, 6.0], BoundSource::Stated));
        let (b, s) = forward_step_bounds(3, 2);
        assert_eq!(s, BoundSource::Derived);
        assert_eq!(b[1], 12.0);
    }
}

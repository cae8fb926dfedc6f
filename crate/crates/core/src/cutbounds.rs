//! Cut values and min-cut bounds in the three models.
//!
//! * Gaussian: `log2 det(I + H H^†)` of the cut matrix with i.i.d. CN(0, 1)
//!   inputs (the "C̄ (iid-Gaussian cut bound)").
//! * LD: GF(2) rank of the block shift-matrix cut transfer matrix.
//! * DS: exact `H(Y_{Ω^c} | X_{Ω^c})` under independent uniform inputs.

use std::collections::HashMap;
use std::hash::Hash;

use nalgebra::{Complex, DMatrix};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2linalg::{cut_transfer_matrix_ld, rank_gf2, shift_matrix, BitMatrix};
use crate::netmodel::{enumerate_cuts, Cut, GaussianNetwork};
use crate::reduction::{
    ds_link_output, ds_real_link_output, DiscreteSuperpositionNetwork, DsInput, GaussianInteger,
    LinearDeterministicNetwork,
};

/// Largest number of input tuples a DS entropy computation may enumerate.
pub const DS_ENUMERATION_LIMIT_LOG2: u32 = 26;

pub const GAUSSIAN_LABEL: &str = "C̄ (iid-Gaussian cut bound)";
pub const LD_LABEL: &str = "LD capacity (min-cut rank)";
pub const DS_LABEL: &str = "DS capacity (per cited achievability, uniform product inputs)";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Gaussian,
    Ld,
    Ds,
}

impl std::fmt::Display for Model {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Model::Gaussian => "gaussian",
            Model::Ld => "ld",
            Model::Ds => "ds",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutValue {
    pub cut: Cut,
    pub value_bits: f64,
    pub model: Model,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub model: Model,
    pub label: String,
    pub per_cut: Vec<CutValue>,
    pub min_cut: Cut,
    pub bound_bits: f64,
}

impl BoundReport {
    /// Ties go to the earliest cut in enumeration order.
    fn from_values(model: Model, per_cut: Vec<CutValue>) -> Self {
        let best = per_cut
            .iter()
            .fold(None::<&CutValue>, |best, cv| match best {
                Some(b) if b.value_bits <= cv.value_bits => Some(b),
                _ => Some(cv),
            })
            .expect("every network has at least one cut")
            .clone();
        let label = match model {
            Model::Gaussian => GAUSSIAN_LABEL,
            Model::Ld => LD_LABEL,
            Model::Ds => DS_LABEL,
        };
        Self {
            model,
            label: label.to_owned(),
            min_cut: best.cut,
            bound_bits: best.value_bits,
            per_cut,
        }
    }

    /// CSV with columns `cut_bitmask, model, value_bits`.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["cut_bitmask", "model", "value_bits"])?;
        for cv in &self.per_cut {
            w.write_record([
                cv.cut.bitmask.to_string(),
                cv.model.to_string(),
                cv.value_bits.to_string(),
            ])?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

// ---------------------------------------------------------------------------
// Gaussian

/// Complex cut matrix: rows are nodes of `omega_c`, columns nodes of
/// `omega`, both ascending; zero where there is no edge.
pub fn gaussian_cut_matrix(net: &GaussianNetwork, cut: &Cut) -> DMatrix<Complex<f64>> {
    DMatrix::from_fn(cut.omega_c.len(), cut.omega.len(), |r, c| {
        net.gain(cut.omega[c], cut.omega_c[r])
            .map_or(Complex::new(0.0, 0.0), |g| g.to_complex())
    })
}

/// `log2 det(I + H H^†)` from the singular values of `H`.
///
/// Working from the singular values keeps the `+1` of weak eigen-directions
/// even when other entries are around 2^30.
pub fn gaussian_logdet_bits(h: &DMatrix<Complex<f64>>) -> f64 {
    if h.is_empty() {
        return 0.0;
    }
    h.singular_values()
        .iter()
        .map(|s| (s * s).ln_1p() / std::f64::consts::LN_2)
        .sum()
}

pub fn gaussian_cut_value(net: &GaussianNetwork, cut: &Cut) -> Result<CutValue> {
    let value = gaussian_logdet_bits(&gaussian_cut_matrix(net, cut));
    if !value.is_finite() {
        return Err(Error::Numeric { cut: cut.to_string() });
    }
    Ok(CutValue {
        cut: cut.clone(),
        value_bits: value.max(0.0),
        model: Model::Gaussian,
    })
}

pub fn gaussian_cutset_bound(net: &GaussianNetwork) -> Result<BoundReport> {
    let values = enumerate_cuts(net)?
        .iter()
        .map(|cut| gaussian_cut_value(net, cut))
        .collect::<Result<Vec<_>>>()?;
    Ok(BoundReport::from_values(Model::Gaussian, values))
}

// ---------------------------------------------------------------------------
// Linear deterministic

/// Rank of a block matrix built directly from per-entry levels
/// (`levels[r][c]`, `None` for a missing link).
pub fn ld_matrix_rank(levels: &[Vec<Option<usize>>], q: usize) -> usize {
    let rows = levels.len();
    let cols = levels.first().map_or(0, |r| r.len());
    let mut g = BitMatrix::zeros(rows * q, cols * q);
    for (r, row) in levels.iter().enumerate() {
        for (c, l) in row.iter().enumerate() {
            if let Some(l) = l {
                g.set_block(r * q, c * q, &shift_matrix(*l, q).expect("levels within q"));
            }
        }
    }
    rank_gf2(&g)
}

pub fn ld_cut_value(ldnet: &LinearDeterministicNetwork, cut: &Cut) -> CutValue {
    CutValue {
        cut: cut.clone(),
        value_bits: rank_gf2(&cut_transfer_matrix_ld(ldnet, cut)) as f64,
        model: Model::Ld,
    }
}

pub fn ld_capacity(ldnet: &LinearDeterministicNetwork) -> Result<BoundReport> {
    let intermediate = ldnet.num_nodes - 2;
    if intermediate > crate::netmodel::MAX_INTERMEDIATE {
        return Err(Error::TooManyCuts { intermediate });
    }
    let values = (0..1u32 << intermediate)
        .map(|mask| Ok(ld_cut_value(ldnet, &Cut::from_bitmask(ldnet.num_nodes, mask)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(BoundReport::from_values(Model::Ld, values))
}

// ---------------------------------------------------------------------------
// Discrete superposition

/// Gaussian-integer gains of the cut: rows `omega_c`, columns `omega`.
pub fn ds_cut_gains(dsnet: &DiscreteSuperpositionNetwork, cut: &Cut) -> Vec<Vec<GaussianInteger>> {
    cut.omega_c
        .iter()
        .map(|&rx| {
            cut.omega
                .iter()
                .map(|&tx| dsnet.qgain(tx, rx).unwrap_or(GaussianInteger::ZERO))
                .collect()
        })
        .collect()
}

/// `H(Y_{Ω^c} | X_{Ω^c})` for independent uniform inputs.
///
/// Given the destination-side inputs, their contribution to every
/// destination-side output is a fixed offset, and shifting by a constant
/// preserves entropy, so the value equals the entropy of the source-side
/// contribution alone.
pub fn ds_cut_value(dsnet: &DiscreteSuperpositionNetwork, cut: &Cut) -> Result<CutValue> {
    let value = ds_matrix_entropy(&ds_cut_gains(dsnet, cut), dsnet.n)?;
    Ok(CutValue {
        cut: cut.clone(),
        value_bits: value,
        model: Model::Ds,
    })
}

pub fn ds_cutset_bound(dsnet: &DiscreteSuperpositionNetwork) -> Result<BoundReport> {
    let intermediate = dsnet.num_nodes - 2;
    if intermediate > crate::netmodel::MAX_INTERMEDIATE {
        return Err(Error::TooManyCuts { intermediate });
    }
    let values = (0..1u32 << intermediate)
        .map(|mask| ds_cut_value(dsnet, &Cut::from_bitmask(dsnet.num_nodes, mask)?))
        .collect::<Result<Vec<_>>>()?;
    Ok(BoundReport::from_values(Model::Ds, values))
}

/// Entropy in bits of `Y = G x` (per-link truncation, exact superposition)
/// for independent uniform `n`-bit complex inputs. `gains[r][c]` maps
/// sender `c` to receiver `r`.
///
/// Senders and receivers split into connected components of the non-zero
/// gain pattern, whose entropies add. A component with purely real gains
/// acts separately on real and imaginary parts, which are i.i.d., so its
/// entropy is twice that of the real-part map.
pub fn ds_matrix_entropy(gains: &[Vec<GaussianInteger>], n: u32) -> Result<f64> {
    let rows = gains.len();
    let cols = gains.first().map_or(0, |r| r.len());
    let mut total = 0.0;
    for (senders, receivers) in components(rows, cols, |r, c| gains[r][c] != GaussianInteger::ZERO) {
        let real = senders
            .iter()
            .all(|&c| receivers.iter().all(|&r| gains[r][c].is_real()));
        let bits_per_sender = if real { n } else { 2 * n };
        let log2_size = bits_per_sender as u64 * senders.len() as u64;
        check_budget(log2_size)?;
        if real {
            let g = receivers
                .iter()
                .map(|&r| senders.iter().map(|&c| gains[r][c].re).collect::<Vec<_>>())
                .collect::<Vec<_>>();
            let uniform = vec![vec![(-(n as f64)).exp2(); 1 << n]; senders.len()];
            total += 2.0 * real_product_entropy(&g, n, &uniform)?;
        } else {
            let contrib = senders
                .iter()
                .map(|&c| {
                    (0..1u64 << (2 * n))
                        .map(|sym| {
                            let x = DsInput {
                                re_bits: sym & ((1 << n) - 1),
                                im_bits: sym >> n,
                                n,
                            };
                            receivers
                                .iter()
                                .flat_map(|&r| {
                                    let y = ds_link_output(gains[r][c], x);
                                    [y.re, y.im]
                                })
                                .collect::<Vec<_>>()
                        })
                        .collect::<Vec<_>>()
                })
                .collect::<Vec<_>>();
            let weight = (-(2.0 * n as f64)).exp2();
            let weights = contrib.iter().map(|s| vec![weight; s.len()]).collect::<Vec<_>>();
            total += entropy_of_sum(&contrib, &weights, 2 * receivers.len());
        }
    }
    Ok(total)
}

/// Entropy of `y_r = Σ_c floor(g[r][c] x_c)` for real `n`-bit inputs with
/// independent per-sender pmfs over `0..2^n`.
pub fn real_product_entropy(gains: &[Vec<i64>], n: u32, pmfs: &[Vec<f64>]) -> Result<f64> {
    let senders = pmfs.len();
    check_budget(n as u64 * senders as u64)?;
    let contrib = (0..senders)
        .map(|c| {
            (0..1u64 << n)
                .map(|bits| {
                    gains
                        .iter()
                        .map(|row| ds_real_link_output(row[c], bits, n))
                        .collect::<Vec<_>>()
                })
                .collect::<Vec<_>>()
        })
        .collect::<Vec<_>>();
    Ok(entropy_of_sum(&contrib, pmfs, gains.len()))
}

/// Entropy of the same real map under an arbitrary joint input pmf given as
/// `(per-sender bits, probability)` pairs.
pub fn real_joint_entropy(gains: &[Vec<i64>], n: u32, joint: &[(Vec<u64>, f64)]) -> f64 {
    let width = gains.len();
    let outputs = joint.iter().map(|(bits, p)| {
        let y = gains
            .iter()
            .map(|row| {
                row.iter()
                    .zip(bits)
                    .map(|(&g, &b)| ds_real_link_output(g, b, n))
                    .sum::<i64>()
            })
            .collect::<Vec<_>>();
        (y, *p)
    });
    if width <= KEY_WIDTH {
        entropy_from_histogram(histogram(outputs.map(|(y, p)| (pack(&y), p))))
    } else {
        entropy_from_histogram(histogram(outputs))
    }
}

fn check_budget(log2_size: u64) -> Result<()> {
    if log2_size > DS_ENUMERATION_LIMIT_LOG2 as u64 {
        return Err(Error::EnumerationTooLarge {
            log2_size: log2_size.min(u32::MAX as u64) as u32,
            limit_log2: DS_ENUMERATION_LIMIT_LOG2,
        });
    }
    Ok(())
}

/// Connected components (senders, receivers) of a bipartite pattern;
/// isolated vertices are dropped.
fn components(rows: usize, cols: usize, linked: impl Fn(usize, usize) -> bool) -> Vec<(Vec<usize>, Vec<usize>)> {
    let mut sender_seen = vec![false; cols];
    let mut receiver_seen = vec![false; rows];
    let mut out = Vec::new();
    for start in 0..cols {
        if sender_seen[start] || !(0..rows).any(|r| linked(r, start)) {
            continue;
        }
        let (mut senders, mut receivers) = (vec![start], Vec::new());
        sender_seen[start] = true;
        let mut stack = vec![start];
        while let Some(c) = stack.pop() {
            for r in 0..rows {
                if linked(r, c) && !receiver_seen[r] {
                    receiver_seen[r] = true;
                    receivers.push(r);
                    for c2 in 0..cols {
                        if linked(r, c2) && !sender_seen[c2] {
                            sender_seen[c2] = true;
                            senders.push(c2);
                            stack.push(c2);
                        }
                    }
                }
            }
        }
        senders.sort_unstable();
        receivers.sort_unstable();
        out.push((senders, receivers));
    }
    out
}

const KEY_WIDTH: usize = 8;

fn pack(y: &[i64]) -> [i64; KEY_WIDTH] {
    let mut key = [0; KEY_WIDTH];
    key[..y.len()].copy_from_slice(y);
    key
}

fn histogram<K: Hash + Eq>(items: impl Iterator<Item = (K, f64)>) -> HashMap<K, f64> {
    let mut hist = HashMap::new();
    for (k, p) in items {
        *hist.entry(k).or_insert(0.0) += p;
    }
    hist
}

/// Sums in sorted order so the result does not depend on hash order.
fn entropy_from_histogram<K>(hist: HashMap<K, f64>) -> f64 {
    let mut probs = hist.into_values().filter(|&p| p > 0.0).collect::<Vec<_>>();
    probs.sort_by(f64::total_cmp);
    -probs.iter().map(|&p| p * p.log2()).sum::<f64>()
}

/// Entropy of `Σ_c contrib[c][x_c]` with independent `x_c ~ weights[c]`.
fn entropy_of_sum(contrib: &[Vec<Vec<i64>>], weights: &[Vec<f64>], width: usize) -> f64 {
    if width <= KEY_WIDTH {
        let mut hist = HashMap::new();
        let mut acc = [0i64; KEY_WIDTH];
        enumerate(contrib, weights, 0, &mut acc[..width], 1.0, &mut |y, p| {
            *hist.entry(pack(y)).or_insert(0.0) += p;
        });
        entropy_from_histogram(hist)
    } else {
        let mut hist = HashMap::new();
        let mut acc = vec![0i64; width];
        enumerate(contrib, weights, 0, &mut acc, 1.0, &mut |y, p| {
            *hist.entry(y.to_vec()).or_insert(0.0) += p;
        });
        entropy_from_histogram(hist)
    }
}

fn enumerate(
    contrib: &[Vec<Vec<i64>>],
    weights: &[Vec<f64>],
    depth: usize,
    acc: &mut [i64],
    p: f64,
    visit: &mut impl FnMut(&[i64], f64),
) {
    if depth == contrib.len() {
        visit(acc, p);
        return;
    }
    for (sym, vec) in contrib[depth].iter().enumerate() {
        let w = weights[depth][sym];
        if w == 0.0 {
            continue;
        }
        for (a, v) in acc.iter_mut().zip(vec) {
            *a += v;
        }
        enumerate(contrib, weights, depth + 1, acc, p * w, visit);
        for (a, v) in acc.iter_mut().zip(vec) {
            *a -= v;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netmodel::{ComplexGain, INF_GAIN};
    use crate::reduction::{ds_reduce, ds_reduce_with_depth, ld_reduce};
    use crate::topologies;
    use approx::assert_relative_eq;

    fn c(re: f64) -> Complex<f64> {
        Complex::new(re, 0.0)
    }

    #[test]
    fn logdet_examples() {
        assert_eq!(gaussian_logdet_bits(&DMatrix::zeros(0, 3)), 0.0);
        assert_relative_eq!(gaussian_logdet_bits(&DMatrix::from_element(1, 1, c(1.0))), 1.0, epsilon = 1e-12);
        let h = 5.0;
        let m = DMatrix::from_row_slice(2, 2, &[c(h), c(-h), c(h), c(h)]);
        assert_relative_eq!(gaussian_logdet_bits(&m), 2.0 * (1.0 + 2.0 * h * h).log2(), epsilon = 1e-10);
    }

    #[test]
    fn logdet_keeps_weak_directions_next_to_huge_gains() {
        let g = INF_GAIN;
        let m = DMatrix::from_row_slice(2, 2, &[c(g), c(g), c(g), c(g)]);
        assert_relative_eq!(gaussian_logdet_bits(&m), (1.0 + 4.0 * g * g).log2(), epsilon = 1e-9);
    }

    #[test]
    fn point_to_point_and_line_bounds() {
        let h = 3.7;
        let net = GaussianNetwork::new(2, [(0, 1, ComplexGain::new(h, 0.0))]).unwrap();
        let b = gaussian_cutset_bound(&net).unwrap();
        assert_relative_eq!(b.bound_bits, (1.0 + h * h).log2(), max_relative = 1e-9);

        let (a, bb) = (2.0, 0.75);
        let line = GaussianNetwork::new(3, [(0, 1, ComplexGain::real(a)), (1, 2, ComplexGain::real(bb))]).unwrap();
        let rep = gaussian_cutset_bound(&line).unwrap();
        assert_relative_eq!(rep.bound_bits, (1.0 + a * a).log2().min((1.0 + bb * bb).log2()), epsilon = 1e-12);
        assert_eq!(rep.per_cut.len(), 2);
    }

    #[test]
    fn counterexample_min_cut_is_middle() {
        let h = 16.0;
        let net = topologies::counterexample(h, INF_GAIN).unwrap();
        let rep = gaussian_cutset_bound(&net).unwrap();
        assert_eq!(rep.min_cut, topologies::diamond_middle_cut());
        assert_relative_eq!(rep.bound_bits, 2.0 * (1.0 + 2.0 * h * h).log2(), epsilon = 1e-9);

        let ld = ld_capacity(&ld_reduce(&net)).unwrap();
        assert_eq!(ld.bound_bits, 8.0);
        assert_eq!(ld.min_cut, topologies::diamond_middle_cut());
    }

    #[test]
    fn ties_resolve_to_first_cut() {
        // Both cuts of this line have value 1 bit.
        let line = GaussianNetwork::new(3, [(0, 1, ComplexGain::real(1.0)), (1, 2, ComplexGain::real(1.0))]).unwrap();
        assert_eq!(gaussian_cutset_bound(&line).unwrap().min_cut.bitmask, 0);
    }

    #[test]
    fn ld_cut_matrix_of_two_transmitter_example() {
        let ld = ld_reduce(&topologies::two_transmitter());
        let cut = Cut::from_omega(4, &[0, 1]).unwrap();
        let g = cut_transfer_matrix_ld(&ld, &cut);
        assert_eq!(g.to_string(), "1000\n0110\n1000\n0110\n");
        assert_eq!(rank_gf2(&g), 2);
        assert_eq!(ld_capacity(&ld).unwrap().bound_bits, 2.0);
    }

    #[test]
    fn source_only_cut_has_nonzero_blocks_for_neighbors_only() {
        let net = GaussianNetwork::new(
            4,
            [(0, 1, ComplexGain::real(4.0)), (1, 3, ComplexGain::real(4.0)), (2, 3, ComplexGain::real(2.0)), (1, 2, ComplexGain::real(3.0))],
        )
        .unwrap();
        let ld = ld_reduce(&net);
        let cut = Cut::from_bitmask(4, 0).unwrap();
        let g = cut_transfer_matrix_ld(&ld, &cut);
        let q = ld.q;
        for (r, node) in cut.omega_c.iter().enumerate() {
            let ones = (0..q).flat_map(|i| (0..q).map(move |j| (i, j))).filter(|&(i, j)| g.get(r * q + i, j)).count();
            assert_eq!(ones > 0, node.0 == 1);
        }
    }

    #[test]
    fn zero_levels_give_zero_capacity() {
        let net = GaussianNetwork::new(3, [(0, 1, ComplexGain::real(0.5)), (1, 2, ComplexGain::real(0.9))]).unwrap();
        let ld = ld_reduce(&net);
        assert_eq!(ld.q, 0);
        assert_eq!(ld_capacity(&ld).unwrap().bound_bits, 0.0);
    }

    #[test]
    fn ds_single_link_values() {
        for n in 1..=6u32 {
            let g = GaussianInteger::new(1 << n, 0);
            // Real and imaginary parts each carry n bits.
            assert_relative_eq!(ds_matrix_entropy(&[vec![g]], n).unwrap(), 2.0 * n as f64, epsilon = 1e-12);
        }
        assert_eq!(ds_matrix_entropy(&[vec![GaussianInteger::ZERO]], 3).unwrap(), 0.0);
        let net = GaussianNetwork::new(2, [(0, 1, ComplexGain::real(8.0))]).unwrap();
        let ds = ds_reduce(&net);
        let rep = ds_cutset_bound(&ds).unwrap();
        assert_eq!(rep.bound_bits, ds_cut_value(&ds, &rep.min_cut).unwrap().value_bits);
        assert_eq!(rep.bound_bits, 6.0);
    }

    /// Entropy of the summed outputs by enumerating every joint input.
    fn brute_force_entropy(row: &[GaussianInteger], n: u32) -> f64 {
        let mut counts = std::collections::HashMap::new();
        let per = 1u64 << (2 * n);
        let total = per.pow(row.len() as u32);
        for idx in 0..total {
            let mut rest = idx;
            let mut y = GaussianInteger::ZERO;
            for &g in row {
                let sym = rest % per;
                rest /= per;
                let x = DsInput { re_bits: sym & ((1 << n) - 1), im_bits: sym >> n, n };
                y = y + ds_link_output(g, x);
            }
            *counts.entry((y.re, y.im)).or_insert(0u64) += 1;
        }
        let mut probs = counts.values().map(|&c| c as f64 / total as f64).collect::<Vec<_>>();
        probs.sort_by(f64::total_cmp);
        -probs.iter().map(|p| p * p.log2()).sum::<f64>()
    }

    #[test]
    fn ds_complex_and_decoupled_paths_match_enumeration() {
        let n = 3;
        let real = [GaussianInteger::new(5, 0), GaussianInteger::new(3, 0)];
        let rotated = [GaussianInteger::new(0, 5), GaussianInteger::new(0, 3)];
        let mixed = [GaussianInteger::new(2, -3), GaussianInteger::new(-1, 4)];
        for row in [real, rotated, mixed] {
            let fast = ds_matrix_entropy(&[row.to_vec()], n).unwrap();
            assert_relative_eq!(fast, brute_force_entropy(&row, n), epsilon = 1e-12);
        }
    }

    #[test]
    fn ds_budget_error_reports_size() {
        let err = ds_matrix_entropy(&[vec![GaussianInteger::new(3, 1); 3]], 5).unwrap_err();
        assert!(matches!(err, Error::EnumerationTooLarge { log2_size: 30, .. }));
    }

    #[test]
    fn ds_counterexample_cut_with_moderate_inf_gain() {
        let net = topologies::counterexample(8.0, 256.0).unwrap();
        let ds = ds_reduce(&net);
        assert_eq!(ds.n, 8);
        let rep = ds_cutset_bound(&ds).unwrap();
        assert_eq!(rep.min_cut, topologies::diamond_middle_cut());
        let portion = ds_reduce_with_depth(&net, 3).unwrap();
        let middle = ds_cut_value(&portion, &topologies::diamond_middle_cut()).unwrap();
        // (a - b, a + b) determines (a, b) for 3-bit a, b: 6 bits per part.
        assert_eq!(middle.value_bits, 12.0);
    }

    #[test]
    fn csv_has_fixed_columns() {
        let rep = gaussian_cutset_bound(&topologies::two_transmitter()).unwrap();
        let csv = rep.to_csv().unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("cut_bitmask,model,value_bits"));
        assert_eq!(lines.count(), 4);
    }
}

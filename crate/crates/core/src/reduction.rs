//! Gaussian network → linear deterministic (LD) and discrete superposition
//! (DS) networks, and the exact DS channel arithmetic.

use std::collections::BTreeMap;
use std::ops::{Add, Mul};

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::netmodel::{ComplexGain, GaussianNetwork, NodeId};

/// Largest DS input bit depth the integer arithmetic supports.
pub const MAX_DS_DEPTH: u32 = 62;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LdEdge {
    pub from: NodeId,
    pub to: NodeId,
    pub levels: usize,
}

/// Binary-vector network: every link passes its `levels` most significant
/// bits of a length-`q` vector. Gains are not retained, so two Gaussian
/// networks with the same magnitudes reduce to equal values.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearDeterministicNetwork {
    pub num_nodes: usize,
    pub q: usize,
    pub edges: Vec<LdEdge>,
}

impl LinearDeterministicNetwork {
    pub fn levels(&self, from: NodeId, to: NodeId) -> Option<usize> {
        self.edges
            .iter()
            .find(|e| e.from == from && e.to == to)
            .map(|e| e.levels)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct GaussianInteger {
    pub re: i64,
    pub im: i64,
}

impl GaussianInteger {
    pub const ZERO: Self = Self { re: 0, im: 0 };

    pub const fn new(re: i64, im: i64) -> Self {
        Self { re, im }
    }

    pub fn is_real(&self) -> bool {
        self.im == 0
    }
}

impl Add for GaussianInteger {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl Mul for GaussianInteger {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self::new(
            self.re * rhs.re - self.im * rhs.im,
            self.re * rhs.im + self.im * rhs.re,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DsEdge {
    pub from: NodeId,
    pub to: NodeId,
    pub qgain: GaussianInteger,
}

/// Network with `n`-bit dyadic complex inputs and Gaussian-integer gains.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscreteSuperpositionNetwork {
    pub num_nodes: usize,
    pub n: u32,
    pub edges: Vec<DsEdge>,
}

impl DiscreteSuperpositionNetwork {
    pub fn qgain(&self, from: NodeId, to: NodeId) -> Option<GaussianInteger> {
        self.edges
            .iter()
            .find(|e| e.from == from && e.to == to)
            .map(|e| e.qgain)
    }
}

/// A DS transmit symbol `(re_bits + i im_bits) / 2^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DsInput {
    pub re_bits: u64,
    pub im_bits: u64,
    pub n: u32,
}

impl DsInput {
    pub fn new(re_bits: u64, im_bits: u64, n: u32) -> Result<Self> {
        if n == 0 || n > MAX_DS_DEPTH {
            return Err(Error::Argument(format!("bit depth {n} outside 1..={MAX_DS_DEPTH}")));
        }
        if re_bits >> n != 0 || im_bits >> n != 0 {
            return Err(Error::Argument(format!(
                "input bits ({re_bits}, {im_bits}) do not fit in {n} bits"
            )));
        }
        Ok(Self { re_bits, im_bits, n })
    }

    pub fn real(re_bits: u64, n: u32) -> Result<Self> {
        Self::new(re_bits, 0, n)
    }

    pub fn value(&self) -> (f64, f64) {
        let scale = (-(self.n as f64)).exp2();
        (self.re_bits as f64 * scale, self.im_bits as f64 * scale)
    }
}

/// Mantissa/exponent pair with `|x| = mantissa * 2^exponent`.
fn decompose(x: f64) -> (u64, i64) {
    let bits = x.abs().to_bits();
    let exp_bits = (bits >> 52) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    if exp_bits == 0 {
        (frac, -1074)
    } else {
        (frac | 1 << 52, exp_bits - 1075)
    }
}

/// `floor(log2 |x|)` read off the binary exponent; `None` for zero.
fn floor_log2_abs(x: f64) -> Option<i64> {
    if x == 0.0 {
        return None;
    }
    let (m, e) = decompose(x);
    Some(63 - m.leading_zeros() as i64 + e)
}

/// `floor(log2(re^2 + im^2))` in exact integer arithmetic.
fn exact_floor_log2_norm_sqr(re: f64, im: f64) -> Option<i64> {
    let terms = [re, im]
        .into_iter()
        .filter(|x| *x != 0.0)
        .map(decompose)
        .collect::<Vec<_>>();
    let e_min = terms.iter().map(|&(_, e)| 2 * e).min()?;
    let sum = terms.iter().fold(BigUint::from(0u32), |acc, &(m, e)| {
        acc + ((BigUint::from(m) * BigUint::from(m)) << ((2 * e - e_min) as u64))
    });
    Some(sum.bits() as i64 - 1 + e_min)
}

/// `floor(log2(re^2 + im^2))` via floating point, no exactness guarantee.
pub fn float_floor_log2_norm_sqr(gain: ComplexGain) -> Option<i64> {
    let s = gain.norm_sqr();
    (s > 0.0).then(|| s.log2().floor() as i64)
}

/// Bit levels a link passes: `max(0, floor(log2 |h|^2))`.
///
/// The float estimate is used unless `|h|^2` sits within a few ulps of a
/// power of two (or overflows), in which case the exact path decides.
pub fn ld_levels(gain: ComplexGain) -> usize {
    let s = gain.norm_sqr();
    if gain.is_zero() {
        return 0;
    }
    let lg = s.log2();
    let near_power = s == 0.0 || !s.is_finite() || {
        let p = lg.round();
        (s / p.exp2() - 1.0).abs() < 8.0 * f64::EPSILON
    };
    let floor = if near_power {
        exact_floor_log2_norm_sqr(gain.re, gain.im).unwrap_or(0)
    } else {
        lg.floor() as i64
    };
    floor.max(0) as usize
}

pub fn ld_reduce(net: &GaussianNetwork) -> LinearDeterministicNetwork {
    let edges = net
        .edges()
        .iter()
        .map(|e| LdEdge {
            from: e.from,
            to: e.to,
            levels: ld_levels(e.gain),
        })
        .collect::<Vec<_>>();
    let q = edges.iter().map(|e| e.levels).max().unwrap_or(0);
    LinearDeterministicNetwork {
        num_nodes: net.num_nodes(),
        q,
        edges,
    }
}

/// Truncation of each component toward zero.
pub fn quantize_gain(gain: ComplexGain) -> GaussianInteger {
    GaussianInteger::new(gain.re.trunc() as i64, gain.im.trunc() as i64)
}

/// `max(floor(log2|re|), floor(log2|im|))` over the edges, clamped to ≥ 1.
pub fn ds_depth(gains: impl IntoIterator<Item = ComplexGain>) -> u32 {
    gains
        .into_iter()
        .flat_map(|g| [floor_log2_abs(g.re), floor_log2_abs(g.im)])
        .flatten()
        .max()
        .unwrap_or(1)
        .clamp(1, MAX_DS_DEPTH as i64) as u32
}

pub fn ds_reduce(net: &GaussianNetwork) -> DiscreteSuperpositionNetwork {
    let n = ds_depth(net.edges().iter().map(|e| e.gain));
    ds_reduce_with_depth(net, n).expect("computed depth is in range")
}

/// DS reduction with an explicit input bit depth.
pub fn ds_reduce_with_depth(net: &GaussianNetwork, n: u32) -> Result<DiscreteSuperpositionNetwork> {
    if n == 0 || n > MAX_DS_DEPTH {
        return Err(Error::Argument(format!("bit depth {n} outside 1..={MAX_DS_DEPTH}")));
    }
    Ok(DiscreteSuperpositionNetwork {
        num_nodes: net.num_nodes(),
        n,
        edges: net
            .edges()
            .iter()
            .map(|e| DsEdge {
                from: e.from,
                to: e.to,
                qgain: quantize_gain(e.gain),
            })
            .collect(),
    })
}

/// `floor(qgain * x)` componentwise for one link, computed exactly.
pub fn ds_link_output(qgain: GaussianInteger, input: DsInput) -> GaussianInteger {
    let (a, b) = (qgain.re as i128, qgain.im as i128);
    let (xr, xi) = (input.re_bits as i128, input.im_bits as i128);
    // Arithmetic right shift floors toward -inf for both signs.
    let re = (a * xr - b * xi) >> input.n;
    let im = (a * xi + b * xr) >> input.n;
    GaussianInteger::new(re as i64, im as i64)
}

/// Real-signal version of [`ds_link_output`]: `floor(gain * bits / 2^n)`.
pub fn ds_real_link_output(gain: i64, bits: u64, n: u32) -> i64 {
    ((gain as i128 * bits as i128) >> n) as i64
}

/// Received symbol at `receiver`: the exact sum of truncated link outputs.
pub fn ds_transmit(
    dsnet: &DiscreteSuperpositionNetwork,
    receiver: NodeId,
    inputs: &BTreeMap<NodeId, DsInput>,
) -> Result<GaussianInteger> {
    let mut total = GaussianInteger::ZERO;
    for e in dsnet.edges.iter().filter(|e| e.to == receiver) {
        let input = inputs.get(&e.from).ok_or_else(|| {
            Error::Argument(format!("no input supplied for node {} feeding {receiver}", e.from))
        })?;
        if input.n != dsnet.n {
            return Err(Error::Argument(format!(
                "input of node {} has depth {}, network uses {}",
                e.from, input.n, dsnet.n
            )));
        }
        total = total + ds_link_output(e.qgain, *input);
    }
    Ok(total)
}

/// Keeps the `n` most significant binary fraction bits of `x ∈ [0, 1)`.
pub fn ds_quantize_input(x: f64, n: u32) -> Result<DsInput> {
    DsInput::real(quantize_component(x, n)?, n)
}

pub fn ds_quantize_complex(re: f64, im: f64, n: u32) -> Result<DsInput> {
    DsInput::new(quantize_component(re, n)?, quantize_component(im, n)?, n)
}

fn quantize_component(x: f64, n: u32) -> Result<u64> {
    if !(0.0..1.0).contains(&x) {
        return Err(Error::Argument(format!("{x} is outside [0, 1)")));
    }
    if n == 0 || n > MAX_DS_DEPTH {
        return Err(Error::Argument(format!("bit depth {n} outside 1..={MAX_DS_DEPTH}")));
    }
    Ok((x * (n as f64).exp2()).floor() as u64)
}

//! Independent oracles and generators shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use relaygap::gf2linalg::BitMatrix;
use relaygap::netmodel::{ComplexGain, Cut, GaussianNetwork, NodeId};
use relaygap::reduction::{ds_transmit, DiscreteSuperpositionNetwork, DsInput, GaussianInteger};

pub fn entropy_of_counts<K>(counts: &HashMap<K, u64>) -> f64 {
    let total = counts.values().sum::<u64>() as f64;
    counts
        .values()
        .map(|&c| {
            let p = c as f64 / total;
            -p * p.log2()
        })
        .sum()
}

/// Decodes a base-`4^n` index into one complex DS input per listed node.
fn decode_inputs(nodes: &[NodeId], mut index: u64, n: u32, into: &mut BTreeMap<NodeId, DsInput>) {
    let mask = (1u64 << n) - 1;
    for &node in nodes {
        let re = index & mask;
        index >>= n;
        let im = index & mask;
        index >>= n;
        into.insert(node, DsInput::new(re, im, n).expect("bits fit the depth"));
    }
}

/// `H(Y_{Ω^c} | X_{Ω^c})` under independent uniform inputs, computed by
/// running the whole network on every joint input: for each assignment of
/// the destination-side transmitters, the conditional law of every
/// destination-side output is tabulated over all source-side inputs.
pub fn ds_conditional_entropy_by_enumeration(ds: &DiscreteSuperpositionNetwork, cut: &Cut) -> f64 {
    let dest = NodeId(ds.num_nodes - 1);
    let transmitters = |side: &[NodeId]| -> Vec<NodeId> {
        side.iter()
            .copied()
            .filter(|&v| v != dest && ds.edges.iter().any(|e| e.from == v))
            .collect()
    };
    let senders = transmitters(&cut.omega);
    let given = transmitters(&cut.omega_c);
    let bits_per_node = 2 * ds.n;
    let total_bits = bits_per_node as usize * (senders.len() + given.len());
    assert!(total_bits <= 22, "oracle enumeration too large: 2^{total_bits}");

    let mut inputs = BTreeMap::new();
    let mut conditional = 0.0;
    let given_count = 1u64 << (bits_per_node as usize * given.len());
    let sender_count = 1u64 << (bits_per_node as usize * senders.len());
    for g in 0..given_count {
        decode_inputs(&given, g, ds.n, &mut inputs);
        let mut counts: HashMap<Vec<GaussianInteger>, u64> = HashMap::new();
        for s in 0..sender_count {
            decode_inputs(&senders, s, ds.n, &mut inputs);
            let y = cut
                .omega_c
                .iter()
                .map(|&rx| ds_transmit(ds, rx, &inputs).expect("every transmitter has an input"))
                .collect::<Vec<_>>();
            *counts.entry(y).or_default() += 1;
        }
        conditional += entropy_of_counts(&counts);
    }
    conditional / given_count as f64
}

/// GF(2) rank as `log2` of the number of distinct vectors in the row span.
pub fn rank_by_span(m: &BitMatrix) -> usize {
    let rows = (0..m.rows())
        .map(|r| (0..m.cols()).fold(0u64, |acc, c| acc | (m.get(r, c) as u64) << c))
        .collect::<Vec<_>>();
    let mut span = std::collections::HashSet::new();
    for subset in 0..1u64 << rows.len() {
        let v = rows
            .iter()
            .enumerate()
            .filter(|(i, _)| subset >> i & 1 == 1)
            .fold(0u64, |acc, (_, r)| acc ^ r);
        span.insert(v);
    }
    span.len().trailing_zeros() as usize
}

pub fn bit_matrix_from_word(rows: usize, cols: usize, word: u64) -> BitMatrix {
    let mut m = BitMatrix::zeros(rows, cols);
    for r in 0..rows {
        for c in 0..cols {
            m.set(r, c, word >> (r * cols + c) & 1 == 1);
        }
    }
    m
}

/// Random valid network on `num_nodes` nodes. Edge gains have integer-valued
/// components in `[-max_component, max_component]`, so the DS depth stays small.
pub fn random_small_network(rng: &mut ChaCha8Rng, num_nodes: usize, max_component: i64) -> GaussianNetwork {
    let dest = num_nodes - 1;
    loop {
        let mut edges = Vec::new();
        for from in 0..dest {
            for to in 1..num_nodes {
                if from != to && rng.random_bool(0.6) {
                    let mut g = ComplexGain::new(0.0, 0.0);
                    while g.is_zero() {
                        g = ComplexGain::new(
                            rng.random_range(-max_component..=max_component) as f64,
                            rng.random_range(-max_component..=max_component) as f64,
                        );
                    }
                    edges.push((from, to, g));
                }
            }
        }
        if let Ok(net) = GaussianNetwork::new(num_nodes, edges) {
            return net;
        }
    }
}

/// Uniformly random permutation of the intermediate nodes.
pub fn random_relabeling(rng: &mut ChaCha8Rng, num_nodes: usize) -> Vec<usize> {
    let mut middle = (1..num_nodes - 1).collect::<Vec<_>>();
    for i in (1..middle.len()).rev() {
        middle.swap(i, rng.random_range(0..=i));
    }
    std::iter::once(0)
        .chain(middle)
        .chain(std::iter::once(num_nodes - 1))
        .collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

//! Builds the discrete superposition model of a small complex network,
//! pushes a few inputs through it, and computes its cut-set bound exactly.

use std::collections::BTreeMap;
use std::error::Error;

use relaygap::cutbounds::{ds_cutset_bound, gaussian_cutset_bound};
use relaygap::netmodel::{ComplexGain, GaussianNetwork, NodeId};
use relaygap::reduction::{ds_quantize_complex, ds_reduce, ds_transmit};

pub fn main() -> Result<(), Box<dyn Error>> {
    let net = GaussianNetwork::new(
        4,
        [
            (0, 1, ComplexGain::new(5.3, -2.0)),
            (0, 2, ComplexGain::new(-1.5, 6.2)),
            (1, 3, ComplexGain::new(3.7, 3.1)),
            (2, 3, ComplexGain::new(-4.4, 0.6)),
        ],
    )?;
    let ds = ds_reduce(&net);
    println!("input depth n = {}", ds.n);
    for e in &ds.edges {
        println!("  {} -> {}: {:?}", e.from, e.to, e.qgain);
    }

    let mut inputs = BTreeMap::new();
    for (x, u) in [(0.3, 0.9), (0.75, 0.1), (0.5, 0.5)] {
        inputs.insert(NodeId(1), ds_quantize_complex(x, u, ds.n)?);
        inputs.insert(NodeId(2), ds_quantize_complex(u, x, ds.n)?);
        let y = ds_transmit(&ds, NodeId(3), &inputs)?;
        println!("  relay inputs ({x}, {u}) / ({u}, {x}) -> destination {y:?}");
    }

    let bound = ds_cutset_bound(&ds)?;
    for cv in &bound.per_cut {
        println!("  {} {:.4} bits", cv.cut, cv.value_bits);
    }
    println!("DS bound {:.4} bits, Gaussian {:.4} bits", bound.bound_bits, gaussian_cutset_bound(&net)?.bound_bits);
    Ok(())
}

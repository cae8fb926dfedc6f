//! Reference networks used by the experiments and examples.
//!
//! The relay diamond has six nodes: the source feeds relays 1 and 2 over
//! very strong links, the relays reach nodes 3 and 4 through a 2x2 gain
//! matrix, and nodes 3 and 4 feed the destination 5 over very strong links.
//! Row `i` of the matrix is receiver `3 + i`, column `j` is sender `1 + j`.

use crate::error::Result;
use crate::netmodel::{ComplexGain, Cut, GaussianNetwork};

/// Two transmitters (0, 1) and two receivers (2, 3) with real gains
/// 2.2, 2.5, 1.8 and 1.5; node 3 is the destination.
pub fn two_transmitter() -> GaussianNetwork {
    GaussianNetwork::new(
        4,
        [
            (0, 2, ComplexGain::real(2.2)),
            (0, 3, ComplexGain::real(2.5)),
            (1, 2, ComplexGain::real(1.8)),
            (1, 3, ComplexGain::real(1.5)),
        ],
    )
    .expect("two_transmitter topology is valid")
}

pub fn relay_diamond(matrix: [[ComplexGain; 2]; 2], inf_gain: f64) -> Result<GaussianNetwork> {
    let inf = ComplexGain::real(inf_gain);
    GaussianNetwork::new(
        6,
        [
            (0, 1, inf),
            (0, 2, inf),
            (1, 3, matrix[0][0]),
            (2, 3, matrix[0][1]),
            (1, 4, matrix[1][0]),
            (2, 4, matrix[1][1]),
            (3, 5, inf),
            (4, 5, inf),
        ],
    )
}

/// Relay diamond with middle matrix `[[h, -h], [h, h]]`.
pub fn counterexample(h: f64, inf_gain: f64) -> Result<GaussianNetwork> {
    let (p, m) = (ComplexGain::real(h), ComplexGain::real(-h));
    relay_diamond([[p, m], [p, p]], inf_gain)
}

/// Positive-gain pair sharing one LD reduction when `h = 2^k`.
///
/// Network A uses `[[1.4h, h], [h, 1.4h]]` (determinant `0.96 h^2`), network B
/// uses the rank-one `[[h, h], [h, h]]`. Since `2 log2 1.4 < 1`, every link
/// of both networks has `floor(log2 |g|^2) = 2k`.
pub fn positive_pair(h: f64, inf_gain: f64) -> Result<(GaussianNetwork, GaussianNetwork)> {
    let (g, big) = (ComplexGain::real(h), ComplexGain::real(1.4 * h));
    Ok((
        relay_diamond([[big, g], [g, big]], inf_gain)?,
        relay_diamond([[g, g], [g, g]], inf_gain)?,
    ))
}

/// The cut separating the relays {1, 2} from nodes {3, 4}.
pub fn diamond_middle_cut() -> Cut {
    Cut::from_omega(6, &[0, 1, 2]).expect("valid cut of the diamond")
}

/// Whether any edge of `cut` has a gain at least `inf_gain` in magnitude.
pub fn crosses_inf_link(net: &GaussianNetwork, cut: &Cut, inf_gain: f64) -> bool {
    cut.crossing_edges(net).any(|e| e.gain.abs() >= inf_gain)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netmodel::{enumerate_cuts, INF_GAIN};

    #[test]
    fn diamond_shape() {
        let net = counterexample(8.0, INF_GAIN).unwrap();
        assert_eq!(net.num_nodes(), 6);
        assert_eq!(net.edges().len(), 8);
        let cuts = enumerate_cuts(&net).unwrap();
        assert!(cuts.contains(&diamond_middle_cut()));
        assert!(!crosses_inf_link(&net, &diamond_middle_cut(), INF_GAIN));
        assert!(crosses_inf_link(&net, &cuts[0], INF_GAIN));
    }
}

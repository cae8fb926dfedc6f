//! Relay network graph: nodes, complex channel gains, cuts and the JSON
//! network file format.
//!
//! Node `0` is always the source and node `M = num_nodes - 1` the
//! destination. Transmit power and noise variance are both fixed at one and
//! are not stored anywhere.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use nalgebra::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Gain used in place of an "inf" entry in a network file.
pub const INF_GAIN: f64 = 1_073_741_824.0; // 2^30

/// Largest number of intermediate nodes whose cuts we agree to enumerate.
pub const MAX_INTERMEDIATE: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub usize);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Complex amplitude gain of a link.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ComplexGain {
    pub re: f64,
    pub im: f64,
}

impl ComplexGain {
    pub const fn new(re: f64, im: f64) -> Self {
        Self { re, im }
    }

    pub const fn real(re: f64) -> Self {
        Self { re, im: 0.0 }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.re * self.re + self.im * self.im
    }

    pub fn abs(&self) -> f64 {
        self.re.hypot(self.im)
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }

    pub fn to_complex(self) -> Complex<f64> {
        Complex::new(self.re, self.im)
    }

    /// Multiplies by `exp(i * theta)`.
    pub fn rotate(self, theta: f64) -> Self {
        let c = self.to_complex() * Complex::from_polar(1.0, theta);
        Self::new(c.re, c.im)
    }
}

impl From<Complex<f64>> for ComplexGain {
    fn from(c: Complex<f64>) -> Self {
        Self::new(c.re, c.im)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub from: NodeId,
    pub to: NodeId,
    pub gain: ComplexGain,
}

/// Directed relay network with complex gains, source `0`, destination `M`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianNetwork {
    num_nodes: usize,
    edges: Vec<Edge>,
}

impl GaussianNetwork {
    /// Builds and validates a network from `(from, to, gain)` triples.
    pub fn new(num_nodes: usize, edges: impl IntoIterator<Item = (usize, usize, ComplexGain)>) -> Result<Self> {
        let edges = edges
            .into_iter()
            .map(|(from, to, gain)| Edge {
                from: NodeId(from),
                to: NodeId(to),
                gain,
            })
            .collect();
        let net = Self { num_nodes, edges };
        net.validate()?;
        Ok(net)
    }

    fn validate(&self) -> Result<()> {
        if self.num_nodes < 2 {
            return Err(Error::Validation(format!(
                "network needs at least 2 nodes, got {}",
                self.num_nodes
            )));
        }
        let mut seen = BTreeSet::new();
        for (idx, e) in self.edges.iter().enumerate() {
            if e.from.0 >= self.num_nodes || e.to.0 >= self.num_nodes {
                return Err(Error::Validation(format!(
                    "edge #{idx} ({}, {}) references a node outside 0..{}",
                    e.from, e.to, self.num_nodes
                )));
            }
            if e.from == e.to {
                return Err(Error::Validation(format!("edge #{idx} is a self-loop on node {}", e.from)));
            }
            if !e.gain.is_finite() {
                return Err(Error::Validation(format!(
                    "edge #{idx} ({}, {}) has a non-finite gain",
                    e.from, e.to
                )));
            }
            if e.gain.is_zero() {
                return Err(Error::Validation(format!(
                    "edge #{idx} ({}, {}) has a zero gain",
                    e.from, e.to
                )));
            }
            if !seen.insert((e.from, e.to)) {
                return Err(Error::Validation(format!(
                    "edge #{idx} duplicates directed edge ({}, {})",
                    e.from, e.to
                )));
            }
        }
        if !self.edges.iter().any(|e| e.from == self.source()) {
            return Err(Error::Validation("source node 0 has no outgoing edge".into()));
        }
        if !self.edges.iter().any(|e| e.to == self.destination()) {
            return Err(Error::Validation(format!(
                "destination node {} has no incoming edge",
                self.destination()
            )));
        }
        Ok(())
    }

    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    pub fn source(&self) -> NodeId {
        NodeId(0)
    }

    pub fn destination(&self) -> NodeId {
        NodeId(self.num_nodes - 1)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn gain(&self, from: NodeId, to: NodeId) -> Option<ComplexGain> {
        self.edges
            .iter()
            .find(|e| e.from == from && e.to == to)
            .map(|e| e.gain)
    }

    pub fn in_neighbors(&self, node: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        self.edges.iter().filter(move |e| e.to == node).map(|e| e.from)
    }

    /// Same topology with every gain passed through `f`.
    pub fn map_gains(&self, mut f: impl FnMut(&Edge) -> ComplexGain) -> Result<Self> {
        let edges = self
            .edges
            .iter()
            .map(|e| (e.from.0, e.to.0, f(e)))
            .collect::<Vec<_>>();
        Self::new(self.num_nodes, edges)
    }

    /// Returns a copy with one more edge.
    pub fn with_edge(&self, from: usize, to: usize, gain: ComplexGain) -> Result<Self> {
        let edges = self
            .edges
            .iter()
            .map(|e| (e.from.0, e.to.0, e.gain))
            .chain(std::iter::once((from, to, gain)))
            .collect::<Vec<_>>();
        Self::new(self.num_nodes, edges)
    }

    /// Renames intermediate nodes: node `i` becomes `perm[i]`. Source and
    /// destination must map to themselves.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        check_permutation(perm, self.num_nodes)?;
        let edges = self
            .edges
            .iter()
            .map(|e| (perm[e.from.0], perm[e.to.0], e.gain))
            .collect::<Vec<_>>();
        Self::new(self.num_nodes, edges)
    }

    pub fn from_json_str(text: &str, inf_gain: f64) -> Result<Self> {
        let file: NetworkFile = serde_json::from_str(text)?;
        file.into_network(inf_gain)
    }

    pub fn to_json_string(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&NetworkFile::from(self))?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json_string()?)?;
        Ok(())
    }
}

fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    let ok = perm.len() == n
        && perm.iter().collect::<BTreeSet<_>>().len() == n
        && perm.iter().all(|&p| p < n)
        && perm[0] == 0
        && perm[n - 1] == n - 1;
    if ok {
        Ok(())
    } else {
        Err(Error::Argument(format!(
            "{perm:?} is not a permutation fixing source and destination"
        )))
    }
}

/// Loads a network file, replacing "inf" gain components with `INF_GAIN`.
pub fn load_network(path: impl AsRef<Path>) -> Result<GaussianNetwork> {
    load_network_with(path, INF_GAIN)
}

pub fn load_network_with(path: impl AsRef<Path>, inf_gain: f64) -> Result<GaussianNetwork> {
    let text = std::fs::read_to_string(path)?;
    GaussianNetwork::from_json_str(&text, inf_gain)
}

#[derive(Debug, Serialize, Deserialize)]
struct NetworkFile {
    nodes: usize,
    edges: Vec<EdgeRecord>,
}

#[derive(Debug, Serialize, Deserialize)]
struct EdgeRecord {
    from: usize,
    to: usize,
    re: GainComponent,
    #[serde(default)]
    im: GainComponent,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum GainComponent {
    Number(f64),
    Text(String),
}

impl Default for GainComponent {
    fn default() -> Self {
        GainComponent::Number(0.0)
    }
}

impl GainComponent {
    fn resolve(&self, inf_gain: f64) -> Result<f64> {
        match self {
            GainComponent::Number(x) => Ok(*x),
            GainComponent::Text(s) => match s.trim() {
                "inf" | "+inf" => Ok(inf_gain),
                "-inf" => Ok(-inf_gain),
                other => Err(Error::Validation(format!(
                    "gain component {other:?} is neither a number nor \"inf\""
                ))),
            },
        }
    }
}

impl NetworkFile {
    fn into_network(self, inf_gain: f64) -> Result<GaussianNetwork> {
        let edges = self
            .edges
            .iter()
            .map(|e| {
                Ok((
                    e.from,
                    e.to,
                    ComplexGain::new(e.re.resolve(inf_gain)?, e.im.resolve(inf_gain)?),
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        GaussianNetwork::new(self.nodes, edges)
    }
}

impl From<&GaussianNetwork> for NetworkFile {
    fn from(net: &GaussianNetwork) -> Self {
        NetworkFile {
            nodes: net.num_nodes,
            edges: net
                .edges
                .iter()
                .map(|e| EdgeRecord {
                    from: e.from.0,
                    to: e.to.0,
                    re: GainComponent::Number(e.gain.re),
                    im: GainComponent::Number(e.gain.im),
                })
                .collect(),
        }
    }
}

/// A source/destination bipartition `(omega, omega_c)`.
///
/// `bitmask` has bit `i - 1` set when intermediate node `i` is on the
/// source side; it is also the cut's position in [`enumerate_cuts`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cut {
    pub bitmask: u32,
    pub omega: Vec<NodeId>,
    pub omega_c: Vec<NodeId>,
}

impl Cut {
    pub fn from_bitmask(num_nodes: usize, bitmask: u32) -> Result<Self> {
        let intermediate = num_nodes.saturating_sub(2);
        if num_nodes < 2 || intermediate > MAX_INTERMEDIATE {
            return Err(Error::TooManyCuts { intermediate });
        }
        if intermediate < 32 && (bitmask >> intermediate) != 0 {
            return Err(Error::Argument(format!(
                "bitmask {bitmask:#b} names nodes beyond {intermediate} intermediates"
            )));
        }
        let (mut omega, mut omega_c) = (vec![NodeId(0)], Vec::new());
        for i in 1..num_nodes - 1 {
            if bitmask >> (i - 1) & 1 == 1 {
                omega.push(NodeId(i));
            } else {
                omega_c.push(NodeId(i));
            }
        }
        omega_c.push(NodeId(num_nodes - 1));
        Ok(Self {
            bitmask,
            omega,
            omega_c,
        })
    }

    /// Cut whose source side is `{0} ∪ omega`.
    pub fn from_omega(num_nodes: usize, omega: &[usize]) -> Result<Self> {
        let mut mask = 0u32;
        for &i in omega {
            if i == 0 {
                continue;
            }
            if i + 1 >= num_nodes {
                return Err(Error::Argument(format!(
                    "node {i} cannot be on the source side of a {num_nodes}-node cut"
                )));
            }
            mask |= 1 << (i - 1);
        }
        Self::from_bitmask(num_nodes, mask)
    }

    pub fn contains(&self, node: NodeId) -> bool {
        self.omega.binary_search(&node).is_ok()
    }

    /// Image of the cut under a node relabeling.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        let n = self.omega.len() + self.omega_c.len();
        check_permutation(perm, n)?;
        let omega = self.omega.iter().map(|v| perm[v.0]).collect::<Vec<_>>();
        Self::from_omega(n, &omega)
    }

    /// Edges from the source side to the destination side.
    pub fn crossing_edges<'a>(&'a self, net: &'a GaussianNetwork) -> impl Iterator<Item = &'a Edge> + 'a {
        net.edges()
            .iter()
            .filter(move |e| self.contains(e.from) && !self.contains(e.to))
    }
}

impl fmt::Display for Cut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ids = self.omega.iter().map(|n| n.to_string()).collect::<Vec<_>>();
        write!(f, "Ω={{{}}}", ids.join(","))
    }
}

/// All `2^(M-1)` cuts in ascending bitmask order.
pub fn enumerate_cuts(net: &GaussianNetwork) -> Result<Vec<Cut>> {
    let intermediate = net.num_nodes() - 2;
    if intermediate > MAX_INTERMEDIATE {
        return Err(Error::TooManyCuts { intermediate });
    }
    (0..1u32 << intermediate)
        .map(|mask| Cut::from_bitmask(net.num_nodes(), mask))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(gains: &[f64]) -> GaussianNetwork {
        GaussianNetwork::new(
            gains.len() + 1,
            gains.iter().enumerate().map(|(i, &g)| (i, i + 1, ComplexGain::real(g))),
        )
        .unwrap()
    }

    #[test]
    fn rejects_self_loop() {
        let text = r#"{"nodes": 4, "edges": [
            {"from": 0, "to": 1, "re": 1.0, "im": 0.0},
            {"from": 1, "to": 3, "re": 1.0, "im": 0.0},
            {"from": 3, "to": 3, "re": 1.0, "im": 0.0}]}"#;
        let err = GaussianNetwork::from_json_str(text, INF_GAIN).unwrap_err();
        assert!(err.to_string().contains("self-loop on node 3"), "{err}");
    }

    #[test]
    fn rejects_duplicates_and_degree_problems() {
        let dup = GaussianNetwork::new(
            2,
            [(0, 1, ComplexGain::real(1.0)), (0, 1, ComplexGain::real(2.0))],
        );
        assert!(dup.unwrap_err().to_string().contains("duplicates"));

        let no_out = GaussianNetwork::new(3, [(1, 2, ComplexGain::real(1.0))]);
        assert!(no_out.unwrap_err().to_string().contains("source"));

        let no_in = GaussianNetwork::new(3, [(0, 1, ComplexGain::real(1.0))]);
        assert!(no_in.unwrap_err().to_string().contains("destination"));

        let zero = GaussianNetwork::new(2, [(0, 1, ComplexGain::real(0.0))]);
        assert!(zero.unwrap_err().to_string().contains("zero gain"));
    }

    #[test]
    fn malformed_json_is_a_parse_error() {
        let err = GaussianNetwork::from_json_str("{\"nodes\": 3,", INF_GAIN).unwrap_err();
        assert!(matches!(err, Error::Parse(_)));
    }

    #[test]
    fn inf_components_resolve_to_configured_gain() {
        let text = r#"{"nodes": 2, "edges": [{"from": 0, "to": 1, "re": "inf", "im": "-inf"}]}"#;
        let net = GaussianNetwork::from_json_str(text, 1024.0).unwrap();
        assert_eq!(net.edges()[0].gain, ComplexGain::new(1024.0, -1024.0));
        let bad = r#"{"nodes": 2, "edges": [{"from": 0, "to": 1, "re": "big"}]}"#;
        assert!(GaussianNetwork::from_json_str(bad, 1024.0).is_err());
    }

    #[test]
    fn two_node_network_has_one_cut() {
        let cuts = enumerate_cuts(&line(&[3.0])).unwrap();
        assert_eq!(cuts.len(), 1);
        assert_eq!(cuts[0].omega, vec![NodeId(0)]);
        assert_eq!(cuts[0].omega_c, vec![NodeId(1)]);
    }

    #[test]
    fn four_node_network_has_four_cuts_in_mask_order() {
        let cuts = enumerate_cuts(&line(&[1.0, 2.0, 3.0])).unwrap();
        assert_eq!(cuts.len(), 4);
        for (i, cut) in cuts.iter().enumerate() {
            assert_eq!(cut.bitmask, i as u32);
            assert_eq!(cut.omega.len() + cut.omega_c.len(), 4);
        }
        assert_eq!(cuts[3].omega, vec![NodeId(0), NodeId(1), NodeId(2)]);
    }

    #[test]
    fn cut_guard_refuses_huge_networks() {
        let gains = vec![2.0; 26];
        let err = enumerate_cuts(&line(&gains)).unwrap_err();
        assert!(matches!(err, Error::TooManyCuts { intermediate: 25 }));
    }

    #[test]
    fn cut_relabel_and_from_omega_agree() {
        let cut = Cut::from_omega(5, &[0, 1, 3]).unwrap();
        assert_eq!(cut.bitmask, 0b101);
        let moved = cut.relabel(&[0, 3, 2, 1, 4]).unwrap();
        assert_eq!(moved.omega, vec![NodeId(0), NodeId(1), NodeId(3)]);
        assert!(Cut::from_omega(5, &[4]).is_err());
    }
}

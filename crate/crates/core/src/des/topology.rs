use serde::Serialize;

use crate::{Error, Result};

/// Who hears whom.
///
/// `adjacency` is the 1-hop neighbor relation between nodes. Each node
/// uploads to its own receiver (a shared base station in the fully connected
/// case); `receiver_audible[i]` lists the nodes whose transmissions reach the
/// receiver of node `i`, always including `i` itself.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Topology {
    node_count: usize,
    adjacency: Vec<Vec<bool>>,
    neighbors: Vec<Vec<usize>>,
    receiver_audible: Vec<Vec<usize>>,
    fully_connected: bool,
}

impl Topology {
    /// Every pair of nodes is adjacent and every receiver hears every node.
    pub fn full(node_count: usize) -> Result<Self> {
        if node_count == 0 {
            return Err(Error::Topology("a topology needs at least one node".into()));
        }
        let adjacency = (0..node_count)
            .map(|i| (0..node_count).map(|j| i != j).collect())
            .collect();
        Ok(Self::from_adjacency(node_count, adjacency, true))
    }

    /// Arbitrary mesh from an undirected edge list (0-based node ids).
    /// Receiver `i` hears node `i` and its 1-hop neighbors.
    pub fn partial(node_count: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if node_count == 0 {
            return Err(Error::Topology("a topology needs at least one node".into()));
        }
        let mut adjacency = vec![vec![false; node_count]; node_count];
        for &(a, b) in edges {
            if a >= node_count || b >= node_count {
                return Err(Error::Topology(format!(
                    "edge ({a}, {b}) references a node outside 0..{node_count}"
                )));
            }
            if a == b {
                return Err(Error::Topology(format!("self-loop on node {a}")));
            }
            adjacency[a][b] = true;
            adjacency[b][a] = true;
        }
        Ok(Self::from_adjacency(node_count, adjacency, false))
    }

    /// Linear chain 0 - 1 - ... - (n-1).
    pub fn chain(node_count: usize) -> Result<Self> {
        let edges: Vec<_> = (1..node_count).map(|i| (i - 1, i)).collect();
        Self::partial(node_count, &edges)
    }

    fn from_adjacency(node_count: usize, adjacency: Vec<Vec<bool>>, fully_connected: bool) -> Self {
        let neighbors: Vec<Vec<usize>> = adjacency
            .iter()
            .map(|row| row.iter().enumerate().filter(|(_, &a)| a).map(|(j, _)| j).collect())
            .collect();
        let receiver_audible = neighbors
            .iter()
            .enumerate()
            .map(|(i, n)| {
                let mut v = n.clone();
                v.push(i);
                v.sort_unstable();
                v
            })
            .collect();
        Self {
            node_count,
            adjacency,
            neighbors,
            receiver_audible,
            fully_connected,
        }
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn is_fully_connected(&self) -> bool {
        self.fully_connected
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adjacency[a][b]
    }

    pub fn neighbors(&self, node: usize) -> &[usize] {
        &self.neighbors[node]
    }

    pub fn degree(&self, node: usize) -> usize {
        self.neighbors[node].len()
    }

    pub fn receiver_audible(&self, node: usize) -> &[usize] {
        &self.receiver_audible[node]
    }

    /// Whether transmissions of `sender` reach the receiver of `node`.
    pub fn receiver_hears(&self, node: usize, sender: usize) -> bool {
        node == sender || self.adjacency[node][sender]
    }

    /// Undirected edges with `a < b`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.node_count {
            for &b in &self.neighbors[a] {
                if a < b {
                    out.push((a, b));
                }
            }
        }
        out
    }
}

//! Directed acyclic multigraphs on vertices 1..n+1 with edges oriented
//! small-to-large, plus the caracol-type families.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Net flow / Kostant argument, one entry per vertex 1..n+1 (index 0 is vertex 1).
pub type NetFlow = Vec<i64>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("invalid graph: {0}")]
    InvalidGraph(Violation),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// (a): a vertex among 1..n has no outgoing edge.
    NoOutEdge(usize),
    /// (b): a vertex among 2..n+1 has no incoming edge.
    NoInEdge(usize),
    /// (c): an edge (i,j) with i >= j.
    Orientation(usize, usize),
    VertexOutOfRange(usize),
    Disconnected,
    TooFewVertices,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoOutEdge(v) => write!(f, "condition (a): vertex {v} has out-degree 0"),
            Violation::NoInEdge(v) => write!(f, "condition (b): vertex {v} has in-degree 0"),
            Violation::Orientation(i, j) => {
                write!(f, "condition (c): edge ({i},{j}) not oriented i<j")
            }
            Violation::VertexOutOfRange(v) => write!(f, "vertex {v} out of range"),
            Violation::Disconnected => write!(f, "graph is not connected"),
            Violation::TooFewVertices => write!(f, "need at least two vertices"),
        }
    }
}

/// Which constructor produced the graph; used for closed forms and display.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum Family {
    Caracol { n: u64, k: u64 },
    Mcar { a: u64, k: u64 },
    Ps { n: u64 },
    Complete { n: u64 },
    Custom,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedMultigraph {
    num_vertices: usize,
    /// Sorted distinct (i, j) with multiplicity.
    edges: Vec<(usize, usize, u32)>,
    family: Family,
}

impl DirectedMultigraph {
    fn build(
        num_vertices: usize,
        pairs: impl IntoIterator<Item = (usize, usize)>,
        family: Family,
    ) -> Result<Self, GraphError> {
        let mut map: BTreeMap<(usize, usize), u32> = BTreeMap::new();
        for (i, j) in pairs {
            if i == 0 || i > num_vertices {
                return Err(GraphError::InvalidGraph(Violation::VertexOutOfRange(i)));
            }
            if j == 0 || j > num_vertices {
                return Err(GraphError::InvalidGraph(Violation::VertexOutOfRange(j)));
            }
            if i >= j {
                return Err(GraphError::InvalidGraph(Violation::Orientation(i, j)));
            }
            *map.entry((i, j)).or_default() += 1;
        }
        let g = DirectedMultigraph {
            num_vertices,
            edges: map.into_iter().map(|((i, j), c)| (i, j, c)).collect(),
            family,
        };
        g.validate()?;
        Ok(g)
    }

    fn validate(&self) -> Result<(), GraphError> {
        let nv = self.num_vertices;
        if nv < 2 {
            return Err(GraphError::InvalidGraph(Violation::TooFewVertices));
        }
        for v in 1..nv {
            if self.outdeg(v) == 0 {
                return Err(GraphError::InvalidGraph(Violation::NoOutEdge(v)));
            }
        }
        for v in 2..=nv {
            if self.indeg(v) == 0 {
                return Err(GraphError::InvalidGraph(Violation::NoInEdge(v)));
            }
        }
        // union-find over vertices
        let mut parent: Vec<usize> = (0..=nv).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for &(i, j, _) in &self.edges {
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            parent[a] = b;
        }
        let root = find(&mut parent, 1);
        if (2..=nv).any(|v| find(&mut parent, v) != root) {
            return Err(GraphError::InvalidGraph(Violation::Disconnected));
        }
        Ok(())
    }

    /// Graph on vertices 1..=n+1 from an explicit edge list.
    pub fn from_edge_list(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        Self::build(n + 1, edges.iter().copied(), Family::Custom)
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    /// Vertices are 1..n+1.
    pub fn n(&self) -> usize {
        self.num_vertices - 1
    }

    /// Number of edges counted with multiplicity.
    pub fn m(&self) -> usize {
        self.edges.iter().map(|e| e.2 as usize).sum()
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// Distinct edges (i, j, multiplicity), sorted.
    pub fn edges(&self) -> &[(usize, usize, u32)] {
        &self.edges
    }

    /// Every edge listed once per copy, sorted.
    pub fn edge_instances(&self) -> Vec<(usize, usize)> {
        self.edges
            .iter()
            .flat_map(|&(i, j, c)| std::iter::repeat_n((i, j), c as usize))
            .collect()
    }

    pub fn outdeg(&self, v: usize) -> usize {
        self.edges
            .iter()
            .filter(|e| e.0 == v)
            .map(|e| e.2 as usize)
            .sum()
    }

    pub fn indeg(&self, v: usize) -> usize {
        self.edges
            .iter()
            .filter(|e| e.1 == v)
            .map(|e| e.2 as usize)
            .sum()
    }

    /// t_i = outdeg(i) - 1 for i = 1..n.
    pub fn shifted_outdegree(&self) -> Vec<u64> {
        (1..=self.n()).map(|v| self.outdeg(v) as u64 - 1).collect()
    }

    /// u_i = indeg(i) - 1 for i = 2..n+1.
    pub fn shifted_indegree(&self) -> Vec<u64> {
        (2..=self.num_vertices)
            .map(|v| self.indeg(v) as u64 - 1)
            .collect()
    }

    /// (m-n-t_1, -t_2, ..., -t_n, 0).
    pub fn v_out(&self) -> NetFlow {
        let t = self.shifted_outdegree();
        let d = (self.m() - self.n()) as i64;
        let mut v: NetFlow = t.iter().map(|&x| -(x as i64)).collect();
        v[0] += d;
        v.push(0);
        v
    }

    /// (0, u_2, ..., u_n, u_{n+1} - (m-n)).
    pub fn v_in(&self) -> NetFlow {
        let u = self.shifted_indegree();
        let d = (self.m() - self.n()) as i64;
        let mut v: NetFlow = vec![0];
        v.extend(u.iter().map(|&x| x as i64));
        *v.last_mut().unwrap() -= d;
        v
    }

    /// Induced subgraph on the contiguous vertex range lo..=hi, relabeled 1.., with
    /// the validity conditions checked.
    pub fn restrict(&self, lo: usize, hi: usize) -> Result<Self, GraphError> {
        if lo < 1 || hi > self.num_vertices || lo >= hi {
            return Err(GraphError::BadParameters(format!("range {lo}..={hi}")));
        }
        if lo == 1 && hi == self.num_vertices {
            return Ok(self.clone());
        }
        let pairs = self
            .edge_instances()
            .into_iter()
            .filter(|&(i, j)| i >= lo && j <= hi)
            .map(|(i, j)| (i + 1 - lo, j + 1 - lo));
        Self::build(hi - lo + 1, pairs, Family::Custom)
    }

    /// Vertex label as shown to users (the multicaracol source is 0).
    pub fn display_label(&self, v: usize) -> usize {
        match self.family {
            Family::Mcar { .. } => v - 1,
            _ => v,
        }
    }
}

/// Coefficients of v in the simple roots alpha_j = e_j - e_{j+1}, j = 1..n.
pub fn to_simple_roots(v: &[i64]) -> Vec<i64> {
    let mut acc = 0;
    v[..v.len().saturating_sub(1)]
        .iter()
        .map(|&x| {
            acc += x;
            acc
        })
        .collect()
}

pub fn from_simple_roots(c: &[i64]) -> NetFlow {
    let mut v = Vec::with_capacity(c.len() + 1);
    let mut prev = 0;
    for &x in c {
        v.push(x - prev);
        prev = x;
    }
    v.push(-prev);
    v
}

/// Car^{(k)}_{n+1}.
pub fn caracol_k(n: usize, k: usize) -> Result<DirectedMultigraph, GraphError> {
    if k < 1 || n <= k {
        return Err(GraphError::BadParameters(format!(
            "caracol needs n > k >= 1, got n={n}, k={k}"
        )));
    }
    let mut set = std::collections::BTreeSet::new();
    for i in 1..=k {
        set.insert((i, i + 1));
        for j in k + 1..=n {
            set.insert((i, j));
        }
    }
    for i in k + 1..=n {
        set.insert((i, i + 1));
        set.insert((i, n + 1));
    }
    DirectedMultigraph::build(
        n + 1,
        set,
        Family::Caracol {
            n: n as u64,
            k: k as u64,
        },
    )
}

/// The classical caracol graph Car_{n+1} = Car^{(1)}_{n+1}.
pub fn caracol(n: usize) -> Result<DirectedMultigraph, GraphError> {
    caracol_k(n, 1)
}

fn ps_pairs(nv: usize, offset: usize) -> Vec<(usize, usize)> {
    let mut pairs: Vec<(usize, usize)> = (1..nv).map(|i| (i + offset, i + 1 + offset)).collect();
    pairs.extend((1..nv.saturating_sub(1)).map(|i| (i + offset, nv + offset)));
    pairs
}

/// Pitman-Stanley graph PS_n on vertices 1..n.
pub fn pitman_stanley(n: usize) -> Result<DirectedMultigraph, GraphError> {
    if n < 2 {
        return Err(GraphError::BadParameters("PS_n needs n >= 2".into()));
    }
    DirectedMultigraph::build(n, ps_pairs(n, 0), Family::Ps { n: n as u64 })
}

/// Complete graph K_{n+1}.
pub fn complete_graph(n: usize) -> Result<DirectedMultigraph, GraphError> {
    if n < 1 {
        return Err(GraphError::BadParameters("K_{n+1} needs n >= 1".into()));
    }
    let pairs = (1..=n + 1).flat_map(|i| (i + 1..=n + 1).map(move |j| (i, j)));
    DirectedMultigraph::build(n + 1, pairs, Family::Complete { n: n as u64 })
}

/// k-multicaracol: PS_{a+1} on 1..a+1 plus a source 0 with k parallel edges to
/// each of 1..a. Stored shifted by one (source is vertex 1).
pub fn multicaracol(a: usize, k: usize) -> Result<DirectedMultigraph, GraphError> {
    if a < 1 || k < 1 {
        return Err(GraphError::BadParameters(
            "multicaracol needs a, k >= 1".into(),
        ));
    }
    let mut pairs = ps_pairs(a + 1, 1);
    for i in 1..=a {
        for _ in 0..k {
            pairs.push((1, i + 1));
        }
    }
    DirectedMultigraph::build(
        a + 2,
        pairs,
        Family::Mcar {
            a: a as u64,
            k: k as u64,
        },
    )
}

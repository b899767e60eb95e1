//! Kostant partition functions and integral flow enumeration.
//!
//! Roots are grouped by source vertex. Before the roots of a source are used,
//! every coordinate below it is final and must be zero, and the partial sums
//! of the residual from that source on (its simple-root coordinates) must be
//! nonnegative, since every remaining root moves mass forward.

use std::collections::HashMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::combinat::{multichoose, BigCount};
use crate::graph::DirectedMultigraph;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KostantError {
    #[error("vector entries sum to {0}, not 0")]
    SumNonzero(i64),
    #[error("vector has length {got}, graph has {want} vertices")]
    LengthMismatch { got: usize, want: usize },
}

const MEMO_CAP: usize = 4_000_000;

fn check_vector(g: &DirectedMultigraph, v: &[i64]) -> Result<(), KostantError> {
    if v.len() != g.num_vertices() {
        return Err(KostantError::LengthMismatch {
            got: v.len(),
            want: g.num_vertices(),
        });
    }
    let s: i64 = v.iter().sum();
    if s != 0 {
        return Err(KostantError::SumNonzero(s));
    }
    Ok(())
}

/// Reusable evaluator for one graph. The memo depends only on the residual,
/// so it stays valid across calls with different arguments.
pub struct Kostant {
    /// (source, target, parallel copies), 0-based vertices
    roots: Vec<(usize, usize, u32)>,
    weighted: bool,
    nv: usize,
    memo: HashMap<(usize, Vec<i64>), BigCount>,
}

impl Kostant {
    /// Counts integral flows: parallel edges are distinct.
    pub fn new(g: &DirectedMultigraph) -> Self {
        Self::with_weighting(g, true)
    }

    /// Counts multisets of distinct roots, ignoring edge multiplicity.
    pub fn unweighted(g: &DirectedMultigraph) -> Self {
        Self::with_weighting(g, false)
    }

    fn with_weighting(g: &DirectedMultigraph, weighted: bool) -> Self {
        Kostant {
            roots: g
                .edges()
                .iter()
                .map(|&(i, j, c)| (i - 1, j - 1, c))
                .collect(),
            weighted,
            nv: g.num_vertices(),
            memo: HashMap::new(),
        }
    }

    pub fn eval(&mut self, v: &[i64]) -> Result<BigCount, KostantError> {
        if v.len() != self.nv {
            return Err(KostantError::LengthMismatch {
                got: v.len(),
                want: self.nv,
            });
        }
        let s: i64 = v.iter().sum();
        if s != 0 {
            return Err(KostantError::SumNonzero(s));
        }
        let mut res = v.to_vec();
        Ok(self.rec(0, 0, &mut res))
    }

    /// `cleared`: every coordinate below this index is known to be zero.
    fn rec(&mut self, r: usize, cleared: usize, res: &mut Vec<i64>) -> BigCount {
        if r == self.roots.len() {
            return if res[cleared..].iter().all(|&x| x == 0) {
                BigCount::one()
            } else {
                BigCount::zero()
            };
        }
        let (src, tgt, copies) = self.roots[r];
        let first_of_src = r == 0 || self.roots[r - 1].0 != src;
        if first_of_src {
            if res[cleared..src].iter().any(|&x| x != 0) {
                return BigCount::zero();
            }
            let mut acc = 0i64;
            for &x in &res[src..] {
                acc += x;
                if acc < 0 {
                    return BigCount::zero();
                }
            }
        }
        let key = (r, res[src..].to_vec());
        if let Some(c) = self.memo.get(&key) {
            return c.clone();
        }
        let last_of_src = r + 1 == self.roots.len() || self.roots[r + 1].0 != src;
        let avail = res[src];
        let range = if last_of_src {
            avail..=avail
        } else {
            0..=avail
        };
        let mut total = BigCount::zero();
        for c in range {
            res[src] -= c;
            res[tgt] += c;
            let sub = self.rec(r + 1, src, res);
            res[src] += c;
            res[tgt] -= c;
            if sub.is_zero() {
                continue;
            }
            if self.weighted && copies > 1 {
                total += sub * multichoose(copies as u64, c as u64);
            } else {
                total += sub;
            }
        }
        if self.memo.len() < MEMO_CAP {
            self.memo.insert(key, total.clone());
        }
        total
    }
}

/// Number of integral flows with net flow `v` (parallel edges distinct).
pub fn kostant(g: &DirectedMultigraph, v: &[i64]) -> Result<BigCount, KostantError> {
    Kostant::new(g).eval(v)
}

/// Number of ways to write `v` as a nonnegative combination of the distinct
/// positive roots of `g`; equals [`kostant`] on simple graphs.
pub fn kostant_unweighted(g: &DirectedMultigraph, v: &[i64]) -> Result<BigCount, KostantError> {
    Kostant::unweighted(g).eval(v)
}

/// Backtracking over per-item amounts, items sorted by source, smallest
/// amounts first.
#[derive(Debug, Clone)]
struct ChoiceIter {
    items: Vec<(usize, usize)>,
    res: Vec<i64>,
    vals: Vec<i64>,
    depth: usize,
    state: u8, // 0 fresh, 1 running, 2 done
}

impl ChoiceIter {
    fn new(items: Vec<(usize, usize)>, v: &[i64]) -> Self {
        let n = items.len();
        ChoiceIter {
            items,
            res: v.to_vec(),
            vals: vec![0; n],
            depth: 0,
            state: 0,
        }
    }

    fn is_last_of_src(&self, idx: usize) -> bool {
        idx + 1 == self.items.len() || self.items[idx + 1].0 != self.items[idx].0
    }

    fn cleared_before(&self, idx: usize) -> usize {
        if idx == 0 {
            0
        } else {
            self.items[idx - 1].0 + 1
        }
    }

    fn set(&mut self, idx: usize, val: i64) {
        let (s, t) = self.items[idx];
        let d = val - self.vals[idx];
        self.res[s] -= d;
        self.res[t] += d;
        self.vals[idx] = val;
    }

    /// Extend the assignment to full depth with minimal choices.
    fn fill(&mut self) -> bool {
        while self.depth < self.items.len() {
            let idx = self.depth;
            let src = self.items[idx].0;
            if idx == 0 || self.items[idx - 1].0 != src {
                let lo = self.cleared_before(idx);
                if self.res[lo..src].iter().any(|&x| x != 0) {
                    return false;
                }
                let mut acc = 0;
                for &x in &self.res[src..] {
                    acc += x;
                    if acc < 0 {
                        return false;
                    }
                }
            }
            let val = if self.is_last_of_src(idx) {
                self.res[src]
            } else {
                0
            };
            self.set(idx, val);
            self.depth += 1;
        }
        let lo = self.items.last().map_or(0, |it| it.0 + 1);
        self.res[lo..].iter().all(|&x| x == 0)
    }

    /// Undo back to the deepest item that can still grow and grow it.
    fn bump(&mut self) -> bool {
        while self.depth > 0 {
            let idx = self.depth - 1;
            let cur = self.vals[idx];
            self.set(idx, 0);
            self.depth -= 1;
            let src = self.items[idx].0;
            if !self.is_last_of_src(idx) && cur < self.res[src] {
                self.set(idx, cur + 1);
                self.depth += 1;
                return true;
            }
        }
        false
    }
}

impl Iterator for ChoiceIter {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        match self.state {
            2 => return None,
            0 => {
                self.state = 1;
                if self.fill() {
                    return Some(self.vals.iter().map(|&x| x as u64).collect());
                }
            }
            _ => {}
        }
        loop {
            if !self.bump() {
                self.state = 2;
                return None;
            }
            if self.fill() {
                return Some(self.vals.iter().map(|&x| x as u64).collect());
            }
        }
    }
}

/// An integral flow: one amount per edge copy, aligned with
/// [`DirectedMultigraph::edge_instances`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntegralFlow {
    pub flow: Vec<u64>,
}

impl IntegralFlow {
    /// Net outflow minus inflow at each vertex.
    pub fn net(&self, g: &DirectedMultigraph) -> Vec<i64> {
        let mut v = vec![0i64; g.num_vertices()];
        for (&(i, j), &f) in g.edge_instances().iter().zip(&self.flow) {
            v[i - 1] += f as i64;
            v[j - 1] -= f as i64;
        }
        v
    }
}

pub struct IntegralFlows(ChoiceIter);

impl Iterator for IntegralFlows {
    type Item = IntegralFlow;
    fn next(&mut self) -> Option<IntegralFlow> {
        self.0.next().map(|flow| IntegralFlow { flow })
    }
}

/// Every integral flow on `g` with net flow `a`.
pub fn integral_flows(g: &DirectedMultigraph, a: &[i64]) -> Result<IntegralFlows, KostantError> {
    check_vector(g, a)?;
    let items = g
        .edge_instances()
        .into_iter()
        .map(|(i, j)| (i - 1, j - 1))
        .collect();
    Ok(IntegralFlows(ChoiceIter::new(items, a)))
}

/// A vector partition: distinct roots (i, j) with their multiplicity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VectorPartition {
    pub parts: Vec<((usize, usize), u64)>,
}

pub struct VectorPartitions {
    inner: ChoiceIter,
    roots: Vec<(usize, usize)>,
}

impl Iterator for VectorPartitions {
    type Item = VectorPartition;
    fn next(&mut self) -> Option<VectorPartition> {
        let vals = self.inner.next()?;
        Some(VectorPartition {
            parts: self
                .roots
                .iter()
                .zip(vals)
                .filter(|(_, c)| *c > 0)
                .map(|(&r, c)| (r, c))
                .collect(),
        })
    }
}

/// Every multiset of distinct positive roots of `g` summing to `v`.
pub fn vector_partitions(
    g: &DirectedMultigraph,
    v: &[i64],
) -> Result<VectorPartitions, KostantError> {
    check_vector(g, v)?;
    let roots: Vec<(usize, usize)> = g.edges().iter().map(|&(i, j, _)| (i, j)).collect();
    let items = roots.iter().map(|&(i, j)| (i - 1, j - 1)).collect();
    Ok(VectorPartitions {
        inner: ChoiceIter::new(items, v),
        roots,
    })
}

/// Kostant values as machine integers for quick checks.
pub fn kostant_u64(g: &DirectedMultigraph, v: &[i64]) -> Option<u64> {
    let k = kostant(g, v).ok()?;
    let digits = k.to_u64_digits();
    match digits.len() {
        0 => Some(0),
        1 => Some(digits[0]),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::*;

    #[test]
    fn zero_vector() {
        for g in [
            caracol_k(5, 2).unwrap(),
            complete_graph(3).unwrap(),
            multicaracol(2, 3).unwrap(),
        ] {
            let z = vec![0; g.num_vertices()];
            assert_eq!(kostant(&g, &z).unwrap(), BigCount::one());
            let flows: Vec<_> = integral_flows(&g, &z).unwrap().collect();
            assert_eq!(flows.len(), 1);
            assert!(flows[0].flow.iter().all(|&x| x == 0));
            assert_eq!(vector_partitions(&g, &z).unwrap().count(), 1);
        }
    }

    #[test]
    fn figure_counts() {
        let g1 = caracol_k(5, 1).unwrap();
        let g2 = caracol_k(5, 2).unwrap();
        assert_eq!(kostant_u64(&g1, &g1.v_out()), Some(5));
        assert_eq!(kostant_u64(&g2, &g2.v_out()), Some(7));
        assert_eq!(vector_partitions(&g2, &g2.v_out()).unwrap().count(), 7);
        assert_eq!(vector_partitions(&g1, &g1.v_in()).unwrap().count(), 5);
    }

    #[test]
    fn errors() {
        let g = caracol_k(4, 1).unwrap();
        assert_eq!(
            kostant(&g, &[1, 0, 0, 0, 0]),
            Err(KostantError::SumNonzero(1))
        );
        assert!(kostant(&g, &[1, -1]).is_err());
    }

    #[test]
    fn out_equals_in() {
        for n in 2..=8usize {
            for k in 1..n {
                let g = caracol_k(n, k).unwrap();
                assert_eq!(
                    kostant(&g, &g.v_out()).unwrap(),
                    kostant(&g, &g.v_in()).unwrap()
                );
            }
        }
    }

    #[test]
    fn flows_conserve_and_match_count() {
        let graphs = [
            caracol_k(5, 1).unwrap(),
            pitman_stanley(4).unwrap(),
            multicaracol(2, 2).unwrap(),
            complete_graph(3).unwrap(),
        ];
        for g in &graphs {
            let nv = g.num_vertices();
            let mut a = vec![0i64; nv];
            a[0] = 2;
            a[1] = 1;
            a[nv - 1] = -3;
            let flows: Vec<_> = integral_flows(g, &a).unwrap().collect();
            for f in &flows {
                assert_eq!(f.net(g), a);
            }
            let set: std::collections::HashSet<_> = flows.iter().cloned().collect();
            assert_eq!(set.len(), flows.len());
            assert_eq!(BigCount::from(flows.len()), kostant(g, &a).unwrap());
        }
    }

    #[test]
    fn parallel_edges_weighted() {
        // two copies of (1,2): flows of value 3 split 4 ways, one root multiset
        let g = DirectedMultigraph::from_edge_list(1, &[(1, 2), (1, 2)]).unwrap();
        assert_eq!(kostant_u64(&g, &[3, -3]), Some(4));
        assert_eq!(kostant_unweighted(&g, &[3, -3]).unwrap(), BigCount::one());
        assert_eq!(vector_partitions(&g, &[3, -3]).unwrap().count(), 1);
        assert_eq!(integral_flows(&g, &[3, -3]).unwrap().count(), 4);
    }

    #[test]
    fn brute_force_small() {
        // exhaustive search over bounded flows
        let g = caracol_k(4, 2).unwrap();
        let inst = g.edge_instances();
        let m = inst.len();
        let bound = 3u64;
        let mut counts: HashMap<Vec<i64>, u64> = HashMap::new();
        let mut f = vec![0u64; m];
        loop {
            let fl = IntegralFlow { flow: f.clone() };
            *counts.entry(fl.net(&g)).or_default() += 1;
            let mut p = 0;
            while p < m {
                f[p] += 1;
                if f[p] <= bound {
                    break;
                }
                f[p] = 0;
                p += 1;
            }
            if p == m {
                break;
            }
        }
        // vectors whose flows never need an edge above `bound`
        for (v, c) in counts {
            if v[0] + v[1] + v[2].max(0) + v[3].max(0) <= bound as i64
                && v.iter().take(4).all(|&x| x >= 0)
            {
                assert_eq!(kostant_u64(&g, &v), Some(c), "v={v:?}");
            }
        }
    }
}

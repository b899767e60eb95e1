//! Unified diagrams: enumeration at general net flow, truncated diagrams at a
//! column level, k-hulls and completion counts, the map to multi-labeled Dyck
//! paths, the cyclic action and the multinomial simplex partition.

use std::collections::{BTreeSet, HashMap};

use num_traits::{One, Pow, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::combinat::{
    column_labelings, dominates_unchecked, dominating_compositions, k_parking_number, multinomial,
    prefix_sums, rational_catalan, weak_compositions, BigCount, Composition,
};
use crate::graph::DirectedMultigraph;
use crate::gravity::Segment;
use crate::kostant::{integral_flows, IntegralFlow, Kostant};
use crate::lidskii::{self, shifted_argument, LidskiiError};
use crate::paths::{MultiLabeledDyckPath, TDyckPath};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UnifiedError {
    #[error(transparent)]
    Lidskii(#[from] LidskiiError),
    #[error("malformed diagram: {0}")]
    MalformedDiagram(String),
    #[error("invalid parameters: {0}")]
    BadParameters(String),
    #[error("the simplex subsets do not partition the compositions: {0:?} lies in {1} subsets")]
    NotAPartition(Composition, usize),
}

fn bad(msg: impl Into<String>) -> UnifiedError {
    UnifiedError::BadParameters(msg.into())
}

fn malformed(msg: impl Into<String>) -> UnifiedError {
    UnifiedError::MalformedDiagram(msg.into())
}

/// A unified diagram (s, sigma, alpha, Gamma) for a graph G and net flow a.
/// `sigma` lists the labels of the north steps bottom to top, `alpha` the
/// net-flow label of each north step, `gamma` an integral (s-t, 0)-flow.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct UnifiedDiagram {
    pub path: TDyckPath,
    pub sigma: Vec<u32>,
    pub alpha: Vec<u64>,
    pub gamma: IntegralFlow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnifiedMode {
    Count,
    Iterate,
}

fn alpha_tuples(s: &[u64], a: &[i64]) -> Vec<Vec<u64>> {
    let bounds: Vec<u64> = s
        .iter()
        .zip(a)
        .flat_map(|(&si, &ai)| std::iter::repeat_n(ai as u64, si as usize))
        .collect();
    let mut out = Vec::new();
    let mut cur = vec![1u64; bounds.len()];
    loop {
        out.push(cur.clone());
        let mut p = 0;
        while p < cur.len() {
            cur[p] += 1;
            if cur[p] <= bounds[p] {
                break;
            }
            cur[p] = 1;
            p += 1;
        }
        if p == cur.len() {
            return out;
        }
    }
}

/// Every unified diagram of G at net flow a. Only sensible for small inputs.
pub fn unified_diagrams<'g>(
    g: &'g DirectedMultigraph,
    a: &[i64],
) -> Result<impl Iterator<Item = UnifiedDiagram> + 'g, UnifiedError> {
    if a.len() != g.num_vertices()
        || a.iter().sum::<i64>() != 0
        || a[..g.n()].iter().any(|&x| x < 0)
    {
        return Err(bad(
            "net flow must have nonnegative entries on 1..n and sum to zero",
        ));
    }
    let t = g.shifted_outdegree();
    let a = a.to_vec();
    let support = a.clone();
    Ok(dominating_compositions(&t)
        .filter(move |s| s.iter().zip(&support).all(|(&si, &ai)| ai > 0 || si == 0))
        .flat_map(move |s| {
            let flows: Vec<IntegralFlow> = integral_flows(g, &shifted_argument(&s, &t))
                .expect("argument sums to zero")
                .collect();
            let alphas = alpha_tuples(&s, &a);
            let path = TDyckPath {
                shape: s.clone(),
                reference: t.clone(),
            };
            column_labelings(&s).flat_map(move |sigma| {
                let flows = flows.clone();
                let path = path.clone();
                alphas.clone().into_iter().flat_map(move |alpha| {
                    let (path, sigma) = (path.clone(), sigma.clone());
                    flows.clone().into_iter().map(move |gamma| UnifiedDiagram {
                        path: path.clone(),
                        sigma: sigma.clone(),
                        alpha: alpha.clone(),
                        gamma,
                    })
                })
            })
        }))
}

/// |U_G(a)|, by the Lidskii sum or by generating every diagram.
pub fn enumerate_unified(
    g: &DirectedMultigraph,
    a: &[i64],
    mode: UnifiedMode,
) -> Result<BigCount, UnifiedError> {
    match mode {
        UnifiedMode::Count => Ok(lidskii::volume(g, a)?),
        UnifiedMode::Iterate => Ok(BigCount::from(unified_diagrams(g, a)?.count())),
    }
}

/// q - (s_1 + ... + s_col) where q is the total height of the path.
pub fn column_level(s: &TDyckPath, col: usize) -> u64 {
    assert!(col >= 1 && col <= s.shape.len(), "column out of range");
    let total: u64 = s.shape.iter().sum();
    total - s.shape[..col].iter().sum::<u64>()
}

/// A truncated level-(k, i) unified diagram for Car^{(k)}_{n+1}.
///
/// `tail` is the shape q of the path after column k (length n-k), `kappa`
/// labels its north steps with 1..i (increasing inside a column), and
/// `segments` are the n-k-1-i segments of the gravity diagram that cross
/// column k, bottom to top, sorted by (right end, length). Trivial segments
/// [k, k] are included.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TruncatedDiagram {
    pub n: u64,
    pub k: u64,
    pub i: u64,
    pub tail: Vec<u64>,
    pub kappa: Vec<u32>,
    pub segments: Vec<Segment>,
}

fn level_params(n: u64, k: u64, i: u64) -> Result<u64, UnifiedError> {
    if k == 0 || n <= k {
        return Err(bad(format!("need n > k >= 1, got n={n} k={k}")));
    }
    let a = n - k;
    if i > a - 1 {
        return Err(bad(format!("level i={i} exceeds n-k-1={}", a - 1)));
    }
    Ok(a)
}

/// Reference shape for the tail path: (0^{a-1-i}, 1^i, 0).
fn tail_reference(a: u64, i: u64) -> Vec<u64> {
    let mut w = vec![0u64; (a - 1 - i) as usize];
    w.extend(std::iter::repeat_n(1, i as usize));
    w.push(0);
    w
}

/// Right ends k+h, h >= 1, are limited by the dots left in column k+h.
fn segments_fit(k: u64, a: u64, i: u64, tail: &[u64], segs: &[Segment]) -> bool {
    let q = prefix_sums(tail);
    let total = a - 1 - i;
    (1..a.saturating_sub(1)).all(|h| {
        let reach = segs.iter().filter(|s| s.right >= k + h).count() as u64;
        reach + h <= total + q[h as usize - 1]
    })
}

impl TruncatedDiagram {
    pub fn m_minus_n(&self) -> u64 {
        (self.k + 1) * (self.n - self.k) - 2
    }

    pub fn validate(&self) -> Result<(), UnifiedError> {
        let a = level_params(self.n, self.k, self.i)?;
        let k = self.k;
        let w = tail_reference(a, self.i);
        if self.tail.len() != w.len()
            || self.tail.iter().sum::<u64>() != self.i
            || !dominates_unchecked(&self.tail, &w)
        {
            return Err(malformed("tail path does not fit the level"));
        }
        if self.kappa.len() as u64 != self.i {
            return Err(malformed("kappa must label every tail north step"));
        }
        let mut seen = vec![false; self.i as usize];
        let mut at = 0;
        for &c in &self.tail {
            let col = &self.kappa[at..at + c as usize];
            if col.windows(2).any(|w| w[0] >= w[1]) {
                return Err(malformed("kappa must increase inside a column"));
            }
            for &l in col {
                if l == 0 || l as u64 > self.i || std::mem::replace(&mut seen[l as usize - 1], true)
                {
                    return Err(malformed("kappa must be a permutation of 1..i"));
                }
            }
            at += c as usize;
        }
        if self.segments.len() as u64 != a - 1 - self.i {
            return Err(malformed(format!("expected {} segments", a - 1 - self.i)));
        }
        let mut prev = (0, 0);
        for (p, s) in self.segments.iter().enumerate() {
            if s.row != p as u64 + 1
                || s.left < 1
                || s.left > k
                || s.right < k
                || s.right > self.n - 2
            {
                return Err(malformed(format!(
                    "segment [{}, {}] out of place",
                    s.left, s.right
                )));
            }
            if (s.right, s.len()) < prev {
                return Err(malformed("segments out of order"));
            }
            prev = (s.right, s.len());
        }
        if !segments_fit(k, a, self.i, &self.tail, &self.segments) {
            return Err(malformed(
                "segments exceed the dots available past column k",
            ));
        }
        Ok(())
    }

    /// The left columns of the segments, bottom to top.
    pub fn lefts(&self) -> Vec<u64> {
        self.segments.iter().map(|s| s.left).collect()
    }
}

fn sorted_segments(mut v: Vec<(u64, u64)>) -> Vec<Segment> {
    v.sort_by_key(|&(l, r)| (r, r - l));
    v.into_iter()
        .enumerate()
        .map(|(p, (left, right))| Segment {
            row: p as u64 + 1,
            left,
            right,
        })
        .collect()
}

/// Every truncated level-(k, i) diagram of Car^{(k)}_{n+1}.
pub fn enumerate_truncated(
    n: u64,
    k: u64,
    i: u64,
) -> Result<std::vec::IntoIter<TruncatedDiagram>, UnifiedError> {
    let a = level_params(n, k, i)?;
    let count = (a - 1 - i) as usize;
    // all sorted segment lists; filtered per tail below
    let mut seg_lists = Vec::new();
    fn rec(
        need: usize,
        k: u64,
        rmax: u64,
        prev: (u64, u64),
        cur: &mut Vec<(u64, u64)>,
        out: &mut Vec<Vec<Segment>>,
    ) {
        if cur.len() == need {
            out.push(sorted_segments(cur.clone()));
            return;
        }
        for r in prev.0.max(k)..=rmax {
            for l in (1..=k).rev() {
                if (r, r - l) < prev {
                    continue;
                }
                cur.push((l, r));
                rec(need, k, rmax, (r, r - l), cur, out);
                cur.pop();
            }
        }
    }
    rec(
        count,
        k,
        n.saturating_sub(2).max(k),
        (0, 0),
        &mut Vec::new(),
        &mut seg_lists,
    );
    let mut out = Vec::new();
    for tail in dominating_compositions(&tail_reference(a, i)) {
        let fitting: Vec<&Vec<Segment>> = seg_lists
            .iter()
            .filter(|s| segments_fit(k, a, i, &tail, s))
            .collect();
        for kappa in column_labelings(&tail) {
            for segs in &fitting {
                out.push(TruncatedDiagram {
                    n,
                    k,
                    i,
                    tail: tail.clone(),
                    kappa: kappa.clone(),
                    segments: (*segs).clone(),
                });
            }
        }
    }
    Ok(out.into_iter())
}

/// Sends segment [l, k+h] to a north step at x = h labelled bar(k-l), and the
/// tail's car labels in column k+1+x to north steps at x.
pub fn theta(u: &TruncatedDiagram) -> Result<MultiLabeledDyckPath, UnifiedError> {
    u.validate()?;
    let a = u.n - u.k;
    let mut cols: Vec<Vec<i64>> = vec![Vec::new(); (a - 1) as usize];
    for s in &u.segments {
        cols[(s.right - u.k) as usize].push(-((u.k - s.left) as i64));
    }
    let mut at = 0;
    for (x, &c) in u.tail.iter().enumerate() {
        for &l in &u.kappa[at..at + c as usize] {
            cols.get_mut(x)
                .ok_or_else(|| malformed("car past the last column"))?
                .push(l as i64);
        }
        at += c as usize;
    }
    for c in cols.iter_mut() {
        c.sort_unstable();
    }
    let m = MultiLabeledDyckPath {
        k: u.k,
        shape: cols.iter().map(|c| c.len() as u64).collect(),
        labels: cols.concat(),
    };
    debug_assert!(m.is_valid());
    Ok(m)
}

pub fn theta_inverse(n: u64, m: &MultiLabeledDyckPath) -> Result<TruncatedDiagram, UnifiedError> {
    let k = m.k;
    if !m.is_valid() {
        return Err(malformed("not a multi-labeled Dyck path"));
    }
    if k == 0 || n <= k || m.r() != n - k - 1 {
        return Err(bad("path size must be n-k-1"));
    }
    let i = m.i();
    let mut tail = vec![0u64; (n - k) as usize];
    let mut kappa = Vec::new();
    let mut segs = Vec::new();
    for (x, col) in m.columns().iter().enumerate() {
        for &l in col.iter() {
            if l > 0 {
                tail[x] += 1;
                kappa.push(l as u32);
            } else {
                segs.push((k - (-l) as u64, k + x as u64));
            }
        }
    }
    let u = TruncatedDiagram {
        n,
        k,
        i,
        tail,
        kappa,
        segments: sorted_segments(segs),
    };
    u.validate()?;
    Ok(u)
}

/// The k-hull: the lowest path through the first k columns that leaves room
/// for the segments of a truncated diagram.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KHull {
    pub hull: Composition,
}

pub fn k_hull(u: &TruncatedDiagram) -> KHull {
    let (a, k) = (u.n - u.k, u.k as usize);
    let mut c = vec![a; k];
    c[k - 1] = 2 * (a - 1) - u.i;
    for s in &u.segments {
        c[s.left as usize - 1] += 1;
        c[k - 1] -= 1;
    }
    KHull { hull: c }
}

/// Number of labelled first-k-column paths completing a truncated diagram:
/// the multinomial mass of the compositions dominating its k-hull.
pub fn completions(u: &TruncatedDiagram) -> BigCount {
    let c = k_hull(u).hull;
    let total: u64 = c.iter().sum();
    let mut sum = BigCount::zero();
    for d in dominating_compositions(&c) {
        sum += multinomial(total, &d).expect("composition of total");
    }
    sum
}

/// Direct count of completions: first-k-column shapes d such that (d, tail)
/// dominates t and column j < k has a free dot for every segment starting at
/// or before j.
pub fn completions_by_enumeration(u: &TruncatedDiagram) -> BigCount {
    let (a, k) = (u.n - u.k, u.k as usize);
    let t = crate::graph::caracol_k(u.n as usize, k)
        .expect("valid parameters")
        .shifted_outdegree();
    let tt = prefix_sums(&t);
    let height = u.m_minus_n() - u.i;
    let mut sum = BigCount::zero();
    for d in weak_compositions(height, k) {
        let mut s = d.clone();
        s.extend_from_slice(&u.tail);
        if !dominates_unchecked(&s, &t) {
            continue;
        }
        let ss = prefix_sums(&s);
        let room = (1..k).all(|j| {
            let starting = u
                .segments
                .iter()
                .filter(|seg| seg.left as usize <= j)
                .count() as u64;
            ss[j - 1] - tt[j - 1] >= starting
        });
        if room && ss[k - 1] - tt[k - 1] == a - 1 - u.i {
            sum += multinomial(height, &d).expect("composition");
        }
    }
    sum
}

/// A line-dot diagram in the rectangle past column k-1: segments listed bottom
/// to top in their drawn rows, which the cyclic action does not reorder.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LineDotDiagram {
    pub k: u64,
    pub segments: Vec<(u64, u64)>,
}

impl LineDotDiagram {
    pub fn from_truncated(u: &TruncatedDiagram) -> Self {
        LineDotDiagram {
            k: u.k,
            segments: u.segments.iter().map(|s| (s.left, s.right)).collect(),
        }
    }

    /// (l - 1) for each segment, bottom to top.
    pub fn rho(&self) -> Vec<u64> {
        self.segments.iter().map(|&(l, _)| l - 1).collect()
    }
}

/// z acting on the left ends: l -> ((l - 1 - z) mod k) + 1.
pub fn cyclic_action(z: u64, d: &LineDotDiagram) -> LineDotDiagram {
    let k = d.k;
    let segments = d
        .segments
        .iter()
        .map(|&(l, r)| (((l - 1) + k - z % k) % k + 1, r))
        .collect();
    LineDotDiagram { k, segments }
}

/// Action on truncated diagrams, returning the canonical representative.
pub fn act_on_truncated(z: u64, u: &TruncatedDiagram) -> TruncatedDiagram {
    let moved = cyclic_action(z, &LineDotDiagram::from_truncated(u));
    TruncatedDiagram {
        segments: sorted_segments(moved.segments),
        ..u.clone()
    }
}

/// Orbits of the cyclic group of order k on the truncated level-(k, i) diagrams.
pub fn orbits(n: u64, k: u64, i: u64) -> Result<Vec<Vec<TruncatedDiagram>>, UnifiedError> {
    let all: Vec<TruncatedDiagram> = enumerate_truncated(n, k, i)?.collect();
    let index: HashMap<&TruncatedDiagram, usize> =
        all.iter().enumerate().map(|(p, u)| (u, p)).collect();
    let mut done = vec![false; all.len()];
    let mut out = Vec::new();
    for p in 0..all.len() {
        if done[p] {
            continue;
        }
        let mut members = BTreeSet::new();
        for z in 0..k {
            let v = act_on_truncated(z, &all[p]);
            let q = *index
                .get(&v)
                .expect("the action preserves truncated diagrams");
            members.insert(q);
        }
        for &q in &members {
            done[q] = true;
        }
        out.push(members.into_iter().map(|q| all[q].clone()).collect());
    }
    Ok(out)
}

/// The subsets C(c_0), ..., C(c_{k-1}) of weak compositions of N = |c0| into
/// k parts, with c_j = c0 + e_{k-1} - e_{j-1}; a subset whose c_j has a
/// negative entry is empty. Fails if the subsets do not partition.
pub fn simplex_partition(c0: &[u64]) -> Result<Vec<Vec<Composition>>, UnifiedError> {
    let k = c0.len();
    if k < 2 {
        return Err(bad("need k >= 2"));
    }
    let total: u64 = c0.iter().sum();
    let hulls: Vec<Option<Vec<i64>>> = (0..k)
        .map(|j| {
            let mut c: Vec<i64> = c0.iter().map(|&x| x as i64).collect();
            if j > 0 {
                c[k - 1] += 1;
                c[j - 1] -= 1;
            }
            c.iter().all(|&x| x >= 0).then_some(c)
        })
        .collect();
    let member = |d: &[u64], j: usize, c: &[i64]| {
        let (mut ds, mut cs) = (0i64, 0i64);
        (0..k - 1).all(|p| {
            ds += d[(j + p) % k] as i64;
            cs += c[(j + p) % k];
            ds >= cs
        })
    };
    let mut parts = vec![Vec::new(); k];
    for d in weak_compositions(total, k) {
        let homes: Vec<usize> = (0..k)
            .filter(|&j| hulls[j].as_ref().is_some_and(|c| member(&d, j, c)))
            .collect();
        if homes.len() != 1 {
            return Err(UnifiedError::NotAPartition(d, homes.len()));
        }
        parts[homes[0]].push(d);
    }
    Ok(parts)
}

/// Number of standardized level-(k, i) unified diagrams of Car^{(k)}_{n+1},
/// summing completions over the truncated diagrams.
pub fn standardized_count(n: u64, k: u64, i: u64) -> Result<BigCount, UnifiedError> {
    Ok(enumerate_truncated(n, k, i)?.map(|u| completions(&u)).sum())
}

/// The same count through Kostant values: paths at level i in column k,
/// labelled by 1..m-n-i before column k and by 1..i after it.
pub fn standardized_count_by_kostant(n: u64, k: u64, i: u64) -> Result<BigCount, UnifiedError> {
    let a = level_params(n, k, i)?;
    let g = crate::graph::caracol_k(n as usize, k as usize).map_err(|e| bad(e.to_string()))?;
    let t = g.shifted_outdegree();
    let height = (k + 1) * a - 2 - i;
    let mut kost = Kostant::new(&g);
    let mut sum = BigCount::zero();
    for s in dominating_compositions(&t) {
        let (head, tail) = s.split_at(k as usize);
        if head.iter().sum::<u64>() != height {
            continue;
        }
        let kv = kost
            .eval(&shifted_argument(&s, &t))
            .map_err(LidskiiError::from)?;
        if kv.is_zero() {
            continue;
        }
        sum += multinomial(height, head).expect("sum") * multinomial(i, tail).expect("sum") * kv;
    }
    Ok(sum)
}

/// k^{m-n-1-i} T_k(n-k-1, i).
pub fn standardized_closed_form(n: u64, k: u64, i: u64) -> Result<BigCount, UnifiedError> {
    let a = level_params(n, k, i)?;
    let exp = ((k + 1) * a).saturating_sub(3 + i); // only saturates when k = 1
    Ok(Pow::pow(BigCount::from(k), exp) * k_parking_number(k, a - 1, i))
}

/// Volume of the k-caracol flow polytope at net flow (x^k, y^{n-k}, .).
pub fn volume_closed_form(n: u64, k: u64, x: u64, y: u64) -> Result<BigCount, UnifiedError> {
    if k == 0 || n <= k {
        return Err(bad("need n > k >= 1"));
    }
    let a = n - k;
    let b = k * a - 1;
    let cat = rational_catalan(a, b).map_err(|e| bad(e.to_string()))?;
    let kpow = if b == 0 {
        BigCount::one()
    } else {
        Pow::pow(BigCount::from(k), b - 1)
    };
    Ok(
        cat * kpow
            * Pow::pow(BigCount::from(x), b)
            * Pow::pow(BigCount::from(k * x + a * y), a - 1),
    )
}

/// Volume of the k-multicaracol flow polytope at net flow (kx, y^a, .).
pub fn volume_closed_form_mcar(a: u64, k: u64, x: u64, y: u64) -> Result<BigCount, UnifiedError> {
    if a == 0 || k == 0 {
        return Err(bad("need a, k >= 1"));
    }
    let b = k * a - 1;
    let cat = rational_catalan(a, b).map_err(|e| bad(e.to_string()))?;
    Ok(cat * Pow::pow(BigCount::from(k * x), b) * Pow::pow(BigCount::from(k * x + a * y), a - 1))
}

/// Net flow (x^k, y^{n-k}, -(kx + (n-k)y)) on Car^{(k)}_{n+1}.
pub fn caracol_netflow(n: u64, k: u64, x: u64, y: u64) -> Vec<i64> {
    let mut v: Vec<i64> = (0..n)
        .map(|j| if j < k { x as i64 } else { y as i64 })
        .collect();
    v.push(-((k * x + (n - k) * y) as i64));
    v
}

/// Net flow (kx, y^a, -(kx + ay)) on the k-multicaracol.
pub fn mcar_netflow(a: u64, k: u64, x: u64, y: u64) -> Vec<i64> {
    let mut v = vec![(k * x) as i64];
    v.extend(std::iter::repeat_n(y as i64, a as usize));
    v.push(-((k * x + a * y) as i64));
    v
}

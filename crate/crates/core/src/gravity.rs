//! Canonical gravity diagrams for k-caracol and k-multicaracol graphs, with
//! the bijections to rational Dyck paths.
//!
//! In-degree diagrams for Car^{(k)}_{n+1} live on columns k+1..n, column j
//! holding (j-k)k-1 dots stacked from the top row. Each row carries at most
//! one nontrivial segment, which always ends in column n; segments are kept
//! longest on top. Rows are numbered 1.. from the top.
//!
//! Out-degree diagrams live on the trapezoid with k-1+i dots in row i
//! (numbered from the bottom). Row i carries exactly one segment [l, r] with
//! l <= k <= r; [k, k] is the trivial segment and is stored as well.
//! Segments are sorted by (right end, length) going up.
//!
//! Multicaracol out-degree diagrams store a segment [0, len] with a colour
//! 1..k per row, sorted by (length, reverse colour) going up.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::paths::{rational_shape, TDyckPath};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GravityError {
    #[error("malformed diagram: {0}")]
    MalformedDiagram(String),
    #[error("invalid parameters: {0}")]
    BadParameters(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DiagramKind {
    In,
    Out,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum GravityFamily {
    Caracol { n: u64, k: u64 },
    Mcar { a: u64, k: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[u64; 3]", into = "[u64; 3]")]
pub struct Segment {
    pub row: u64,
    pub left: u64,
    pub right: u64,
}

impl From<[u64; 3]> for Segment {
    fn from([row, left, right]: [u64; 3]) -> Self {
        Segment { row, left, right }
    }
}

impl From<Segment> for [u64; 3] {
    fn from(s: Segment) -> Self {
        [s.row, s.left, s.right]
    }
}

impl Segment {
    pub fn len(&self) -> u64 {
        self.right - self.left
    }

    pub fn is_empty(&self) -> bool {
        self.right == self.left
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GravityDiagram {
    pub kind: DiagramKind,
    #[serde(flatten)]
    pub family: GravityFamily,
    pub segments: Vec<Segment>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub colors: Option<Vec<u64>>,
}

fn check_nk(n: u64, k: u64) -> Result<u64, GravityError> {
    if k == 0 || n <= k {
        return Err(GravityError::BadParameters(format!(
            "need n > k >= 1, got n={n} k={k}"
        )));
    }
    Ok(n - k)
}

fn malformed(msg: impl Into<String>) -> GravityError {
    GravityError::MalformedDiagram(msg.into())
}

impl GravityDiagram {
    /// Build an in-degree diagram from the starting columns k+h_x of rows
    /// x = 1..b (h = a meaning the row is empty).
    fn from_in_heights(n: u64, k: u64, h: &[u64]) -> Self {
        let segments = h
            .iter()
            .enumerate()
            .filter(|&(_, &hx)| k + hx < n)
            .map(|(x, &hx)| Segment {
                row: x as u64 + 1,
                left: k + hx,
                right: n,
            })
            .collect();
        GravityDiagram {
            kind: DiagramKind::In,
            family: GravityFamily::Caracol { n, k },
            segments,
            colors: None,
        }
    }

    /// h_x per row for an in-degree diagram.
    fn in_heights(&self) -> Result<Vec<u64>, GravityError> {
        let (n, k) = match (self.kind, self.family) {
            (DiagramKind::In, GravityFamily::Caracol { n, k }) => (n, k),
            _ => return Err(malformed("expected a caracol in-degree diagram")),
        };
        let a = check_nk(n, k)?;
        let b = k * a - 1;
        let mut h = vec![a; b as usize];
        let mut last_row = 0;
        for s in &self.segments {
            if s.row <= last_row || s.row > b {
                return Err(malformed(format!("bad row {}", s.row)));
            }
            last_row = s.row;
            if s.right != n || s.left <= k || s.left >= n {
                return Err(malformed(format!(
                    "segment [{}, {}] must end in column {n}",
                    s.left, s.right
                )));
            }
            h[s.row as usize - 1] = s.left - k;
        }
        for (x, &hx) in h.iter().enumerate() {
            // column k+h holds rows 1..hk-1
            if (x as u64 + 1) > hx * k - 1 && hx < a {
                return Err(malformed(format!(
                    "row {} has no dot in column {}",
                    x + 1,
                    k + hx
                )));
            }
        }
        if h.windows(2).any(|w| w[0] > w[1]) {
            return Err(malformed("a longer segment lies below a shorter one"));
        }
        Ok(h)
    }

    /// Checks the storage conventions for the diagram's kind and family.
    pub fn validate(&self) -> Result<(), GravityError> {
        match (self.kind, self.family) {
            (DiagramKind::In, GravityFamily::Caracol { .. }) => self.in_heights().map(|_| ()),
            (DiagramKind::Out, GravityFamily::Caracol { n, k }) => {
                let a = check_nk(n, k)?;
                if self.colors.is_some() {
                    return Err(malformed("caracol diagrams are uncoloured"));
                }
                check_rows(&self.segments, a)?;
                let mut prev = (0, 0);
                for s in &self.segments {
                    if !(1 <= s.left && s.left <= k && k <= s.right && s.right < k + s.row) {
                        return Err(malformed(format!(
                            "segment [{}, {}] out of place in row {}",
                            s.left, s.right, s.row
                        )));
                    }
                    let key = (s.right, s.len());
                    if key < prev {
                        return Err(malformed("segments out of order"));
                    }
                    prev = key;
                }
                Ok(())
            }
            (DiagramKind::Out, GravityFamily::Mcar { a, k }) => {
                if a == 0 || k == 0 {
                    return Err(GravityError::BadParameters("need a, k >= 1".into()));
                }
                check_rows(&self.segments, a)?;
                let colors = self
                    .colors
                    .as_ref()
                    .ok_or_else(|| malformed("missing colours"))?;
                if colors.len() != self.segments.len() {
                    return Err(malformed("one colour per segment"));
                }
                let mut prev: Option<(u64, u64)> = None;
                for (s, &c) in self.segments.iter().zip(colors) {
                    if s.left != 0 || s.right + 1 > s.row || c == 0 || c > k {
                        return Err(malformed(format!(
                            "segment [{}, {}] colour {c} in row {}",
                            s.left, s.right, s.row
                        )));
                    }
                    if let Some((pl, pc)) = prev {
                        if (s.right, pc) < (pl, c) {
                            return Err(malformed("segments out of order"));
                        }
                    }
                    prev = Some((s.right, c));
                }
                Ok(())
            }
            (DiagramKind::In, GravityFamily::Mcar { .. }) => Err(malformed(
                "multicaracol in-degree diagrams are not modelled",
            )),
        }
    }

    /// Text rendering: `o` dots, `-` segment interiors, colours as digits.
    pub fn render(&self) -> String {
        let mut out = String::new();
        match (self.kind, self.family) {
            (DiagramKind::In, GravityFamily::Caracol { n, k }) => {
                let a = n - k;
                let b = k * a - 1;
                for x in 1..=b {
                    let seg = self.segments.iter().find(|s| s.row == x);
                    let mut line = String::new();
                    for h in 1..=a {
                        let col = k + h;
                        line.push(if seg.is_some_and(|s| s.left < col) {
                            '-'
                        } else {
                            ' '
                        });
                        line.push(if x < h * k { 'o' } else { ' ' });
                    }
                    out.push_str(line.trim_end());
                    out.push('\n');
                }
            }
            (DiagramKind::Out, GravityFamily::Caracol { k, .. }) => {
                for s in self.segments.iter().rev() {
                    let mut line = String::new();
                    for col in 1..=k + s.row - 1 {
                        line.push(if col > s.left && col <= s.right {
                            '-'
                        } else {
                            ' '
                        });
                        line.push('o');
                    }
                    out.push_str(&line);
                    out.push('\n');
                }
            }
            (DiagramKind::Out, GravityFamily::Mcar { .. }) => {
                let colors = self.colors.clone().unwrap_or_default();
                for (s, c) in self.segments.iter().zip(colors).rev() {
                    let mut line = String::new();
                    for col in 0..s.row {
                        line.push(if col > 0 && col <= s.right { '-' } else { ' ' });
                        line.push(if col <= s.right {
                            char::from_digit(c as u32 % 10, 10).unwrap()
                        } else {
                            'o'
                        });
                    }
                    out.push_str(&line);
                    out.push('\n');
                }
            }
            (DiagramKind::In, GravityFamily::Mcar { .. }) => {}
        }
        out
    }
}

fn check_rows(segments: &[Segment], a: u64) -> Result<(), GravityError> {
    if segments.len() as u64 != a - 1
        || segments
            .iter()
            .enumerate()
            .any(|(i, s)| s.row != i as u64 + 1)
    {
        return Err(malformed(format!(
            "expected one segment in each of rows 1..{}",
            a - 1
        )));
    }
    Ok(())
}

impl fmt::Display for GravityDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let segs: Vec<String> = self
            .segments
            .iter()
            .enumerate()
            .map(|(p, s)| match &self.colors {
                Some(c) => format!("{}:[{},{}]c{}", s.row, s.left, s.right, c[p]),
                None => format!("{}:[{},{}]", s.row, s.left, s.right),
            })
            .collect();
        write!(f, "{}", segs.join(" "))
    }
}

/// Canonical in-degree diagrams of Car^{(k)}_{n+1}.
pub fn enumerate_in_gravity(
    n: u64,
    k: u64,
) -> Result<std::vec::IntoIter<GravityDiagram>, GravityError> {
    let a = check_nk(n, k)?;
    let b = (k * a - 1) as usize;
    let mut out = Vec::new();
    let mut h = vec![0u64; b];
    fn rec(x: usize, lo: u64, a: u64, k: u64, h: &mut Vec<u64>, f: &mut dyn FnMut(&[u64])) {
        if x == h.len() {
            f(h);
            return;
        }
        let need = (x as u64 + 2).div_ceil(k);
        for hx in lo.max(need)..=a {
            h[x] = hx;
            rec(x + 1, hx, a, k, h, f);
        }
    }
    rec(0, 1, a, k, &mut h, &mut |h| {
        out.push(GravityDiagram::from_in_heights(n, k, h))
    });
    Ok(out.into_iter())
}

/// Canonical out-degree diagrams of Car^{(k)}_{n+1}.
pub fn enumerate_out_gravity(
    n: u64,
    k: u64,
) -> Result<std::vec::IntoIter<GravityDiagram>, GravityError> {
    let a = check_nk(n, k)?;
    let mut out = Vec::new();
    let mut segs: Vec<Segment> = Vec::new();
    fn rec(
        i: u64,
        a: u64,
        k: u64,
        prev: (u64, u64),
        segs: &mut Vec<Segment>,
        out: &mut Vec<GravityDiagram>,
        n: u64,
    ) {
        if i == a {
            out.push(GravityDiagram {
                kind: DiagramKind::Out,
                family: GravityFamily::Caracol { n, k },
                segments: segs.clone(),
                colors: None,
            });
            return;
        }
        for r in prev.0.max(k)..=k + i - 1 {
            for len in 0..=(r - 1) {
                let left = r - len;
                if left > k || (r, len) < prev {
                    continue;
                }
                segs.push(Segment {
                    row: i,
                    left,
                    right: r,
                });
                rec(i + 1, a, k, (r, len), segs, out, n);
                segs.pop();
            }
        }
    }
    rec(1, a, k, (0, 0), &mut segs, &mut out, n);
    Ok(out.into_iter())
}

/// Canonical coloured out-degree diagrams of the k-multicaracol with
/// parameter a (a + 2 vertices).
pub fn enumerate_out_gravity_mcar(
    a: u64,
    k: u64,
) -> Result<std::vec::IntoIter<GravityDiagram>, GravityError> {
    if a == 0 || k == 0 {
        return Err(GravityError::BadParameters("need a, k >= 1".into()));
    }
    let mut out = Vec::new();
    let mut segs = Vec::new();
    let mut cols = Vec::new();
    #[allow(clippy::too_many_arguments)]
    fn rec(
        i: u64,
        a: u64,
        k: u64,
        prev: (u64, u64),
        segs: &mut Vec<Segment>,
        cols: &mut Vec<u64>,
        out: &mut Vec<GravityDiagram>,
    ) {
        if i == a {
            out.push(GravityDiagram {
                kind: DiagramKind::Out,
                family: GravityFamily::Mcar { a, k },
                segments: segs.clone(),
                colors: Some(cols.clone()),
            });
            return;
        }
        for len in prev.0..i {
            for c in (1..=k).rev() {
                if len == prev.0 && c > prev.1 {
                    continue;
                }
                segs.push(Segment {
                    row: i,
                    left: 0,
                    right: len,
                });
                cols.push(c);
                rec(i + 1, a, k, (len, c), segs, cols, out);
                segs.pop();
                cols.pop();
            }
        }
    }
    rec(1, a, k, (0, k), &mut segs, &mut cols, &mut out);
    Ok(out.into_iter())
}

fn rational_params(n: u64, k: u64) -> Result<(u64, u64, Vec<u64>), GravityError> {
    let a = check_nk(n, k)?;
    let b = k * a - 1;
    if b == 0 {
        return Err(GravityError::BadParameters(
            "no Dyck path model for n=2, k=1".into(),
        ));
    }
    let t = rational_shape(a, b).map_err(|e| GravityError::BadParameters(e.to_string()))?;
    Ok((a, b, t))
}

fn path_from_heights(h: &[u64], t: Vec<u64>) -> TDyckPath {
    let mut shape = Vec::with_capacity(h.len());
    let mut prev = 0;
    for &x in h {
        shape.push(x - prev);
        prev = x;
    }
    TDyckPath {
        shape,
        reference: t,
    }
}

fn check_path(path: &TDyckPath, t: &[u64]) -> Result<Vec<u64>, GravityError> {
    if path.reference != t {
        return Err(malformed("path has the wrong reference shape"));
    }
    TDyckPath::new(path.shape.clone(), path.reference.clone())
        .map_err(|e| malformed(e.to_string()))?;
    Ok(path.heights())
}

/// In-degree diagram to its rational (a, ka-1)-Dyck path: the path climbs to
/// height h_x before its x-th east step.
pub fn psi_in(d: &GravityDiagram) -> Result<TDyckPath, GravityError> {
    let GravityFamily::Caracol { n, k } = d.family else {
        return Err(malformed("expected a caracol diagram"));
    };
    let (_, _, t) = rational_params(n, k)?;
    let h = d.in_heights()?;
    Ok(path_from_heights(&h, t))
}

pub fn psi_in_inverse(n: u64, k: u64, path: &TDyckPath) -> Result<GravityDiagram, GravityError> {
    let (_, _, t) = rational_params(n, k)?;
    let h = check_path(path, &t)?;
    Ok(GravityDiagram::from_in_heights(n, k, &h))
}

/// Column of the right endpoint of L_i once row i+1 of the trapezoid is laid
/// out along the Dyck path grid.
pub fn embedded_right_end(k: u64, s: &Segment) -> u64 {
    (s.right - k) * (k - 1) + s.len()
}

/// Column of the left endpoint after embedding; always a multiple of k-1.
pub fn embedded_left_end(k: u64, s: &Segment) -> u64 {
    (s.right - k) * (k - 1)
}

/// Out-degree diagram to the rectilinear hull path of its embedded segments.
pub fn psi_out(d: &GravityDiagram) -> Result<TDyckPath, GravityError> {
    let GravityFamily::Caracol { n, k } = d.family else {
        return Err(malformed("expected a caracol diagram"));
    };
    if d.kind != DiagramKind::Out {
        return Err(malformed("expected an out-degree diagram"));
    }
    d.validate()?;
    let (a, b, t) = rational_params(n, k)?;
    let rp: Vec<u64> = d
        .segments
        .iter()
        .map(|s| embedded_right_end(k, s))
        .collect();
    let h: Vec<u64> = (1..=b)
        .map(|c| rp.iter().position(|&x| x >= c).map_or(a, |i| i as u64 + 1))
        .collect();
    Ok(path_from_heights(&h, t))
}

pub fn psi_out_inverse(n: u64, k: u64, path: &TDyckPath) -> Result<GravityDiagram, GravityError> {
    let (a, _, t) = rational_params(n, k)?;
    let h = check_path(path, &t)?;
    let segments = (1..a)
        .map(|i| {
            let rp = h.iter().filter(|&&x| x <= i).count() as u64;
            let j = rp / k;
            Segment {
                row: i,
                left: k + j * k - rp,
                right: k + j,
            }
        })
        .collect();
    let d = GravityDiagram {
        kind: DiagramKind::Out,
        family: GravityFamily::Caracol { n, k },
        segments,
        colors: None,
    };
    d.validate()?;
    Ok(d)
}

/// The subpartition of ((a-1)k-1, ..., k-1) cut out by an out-degree diagram.
pub fn out_subpartition(d: &GravityDiagram) -> Result<Vec<u64>, GravityError> {
    let GravityFamily::Caracol { k, .. } = d.family else {
        return Err(malformed("expected a caracol diagram"));
    };
    d.validate()?;
    Ok(d.segments
        .iter()
        .rev()
        .map(|s| embedded_right_end(k, s))
        .filter(|&x| x > 0)
        .collect())
}

/// Pairs (out-degree, in-degree) sharing a rational Dyck path.
pub fn in_out_correspondence(
    n: u64,
    k: u64,
) -> Result<Vec<(GravityDiagram, GravityDiagram)>, GravityError> {
    enumerate_out_gravity(n, k)?
        .map(|d| Ok((d.clone(), psi_in_inverse(n, k, &psi_out(&d)?)?)))
        .collect()
}

/// Car^{(k)}_{n+1} out-degree diagram to the multicaracol diagram obtained by
/// collapsing the first k columns; the starting column becomes the colour.
pub fn xi(d: &GravityDiagram) -> Result<GravityDiagram, GravityError> {
    let GravityFamily::Caracol { n, k } = d.family else {
        return Err(malformed("expected a caracol diagram"));
    };
    if d.kind != DiagramKind::Out {
        return Err(malformed("expected an out-degree diagram"));
    }
    d.validate()?;
    let segments = d
        .segments
        .iter()
        .map(|s| Segment {
            row: s.row,
            left: 0,
            right: s.right - k,
        })
        .collect();
    let colors = d.segments.iter().map(|s| s.left).collect();
    Ok(GravityDiagram {
        kind: DiagramKind::Out,
        family: GravityFamily::Mcar { a: n - k, k },
        segments,
        colors: Some(colors),
    })
}

pub fn xi_inverse(d: &GravityDiagram) -> Result<GravityDiagram, GravityError> {
    let GravityFamily::Mcar { a, k } = d.family else {
        return Err(malformed("expected a multicaracol diagram"));
    };
    d.validate()?;
    let colors = d.colors.as_ref().expect("validated");
    let segments = d
        .segments
        .iter()
        .zip(colors)
        .map(|(s, &c)| Segment {
            row: s.row,
            left: c,
            right: s.right + k,
        })
        .collect();
    let out = GravityDiagram {
        kind: DiagramKind::Out,
        family: GravityFamily::Caracol { n: a + k, k },
        segments,
        colors: None,
    };
    out.validate()?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinat::{rational_catalan, BigCount};
    use crate::graph::{caracol_k, multicaracol};
    use crate::kostant::kostant;
    use crate::paths::enumerate_t_dyck;
    use std::collections::HashSet;

    fn seg(row: u64, left: u64, right: u64) -> Segment {
        Segment { row, left, right }
    }

    #[test]
    fn counts_match_kostant() {
        for n in 2..=8u64 {
            for k in 1..n {
                let g = caracol_k(n as usize, k as usize).unwrap();
                let want = kostant(&g, &g.v_out()).unwrap();
                assert_eq!(want, kostant(&g, &g.v_in()).unwrap());
                assert_eq!(want, rational_catalan(n - k, k * (n - k) - 1).unwrap());
                let ins: Vec<_> = enumerate_in_gravity(n, k).unwrap().collect();
                let outs: Vec<_> = enumerate_out_gravity(n, k).unwrap().collect();
                assert_eq!(BigCount::from(ins.len()), want, "in n={n} k={k}");
                assert_eq!(BigCount::from(outs.len()), want, "out n={n} k={k}");
                assert!(ins.iter().chain(&outs).all(|d| d.validate().is_ok()));
                assert_eq!(ins.iter().collect::<HashSet<_>>().len(), ins.len());
                assert_eq!(outs.iter().collect::<HashSet<_>>().len(), outs.len());
            }
        }
        assert_eq!(enumerate_in_gravity(5, 1).unwrap().count(), 5);
        assert_eq!(enumerate_out_gravity(5, 2).unwrap().count(), 7);
    }

    #[test]
    fn mcar_counts() {
        for a in 1..=5u64 {
            for k in 1..=3u64 {
                let g = multicaracol(a as usize, k as usize).unwrap();
                let ds: Vec<_> = enumerate_out_gravity_mcar(a, k).unwrap().collect();
                assert_eq!(
                    BigCount::from(ds.len()),
                    kostant(&g, &g.v_out()).unwrap(),
                    "a={a} k={k}"
                );
                assert!(ds.iter().all(|d| d.validate().is_ok()));
            }
        }
        assert_eq!(enumerate_out_gravity_mcar(3, 2).unwrap().count(), 7);
    }

    #[test]
    fn bijections_round_trip() {
        for n in 3..=8u64 {
            for k in 1..n {
                let t = rational_shape(n - k, k * (n - k) - 1).unwrap();
                let paths: HashSet<TDyckPath> = enumerate_t_dyck(&t).collect();
                let mut img_in = HashSet::new();
                for d in enumerate_in_gravity(n, k).unwrap() {
                    let p = psi_in(&d).unwrap();
                    assert_eq!(psi_in_inverse(n, k, &p).unwrap(), d);
                    img_in.insert(p);
                }
                let mut img_out = HashSet::new();
                for d in enumerate_out_gravity(n, k).unwrap() {
                    let p = psi_out(&d).unwrap();
                    assert_eq!(psi_out_inverse(n, k, &p).unwrap(), d);
                    img_out.insert(p);
                    let x = xi(&d).unwrap();
                    assert!(x.validate().is_ok());
                    assert_eq!(xi_inverse(&x).unwrap(), d);
                }
                assert_eq!(img_in, paths);
                assert_eq!(img_out, paths);
            }
        }
    }

    #[test]
    fn embedding_bounds() {
        for (n, k) in [(5u64, 2u64), (6, 2), (7, 3), (8, 3)] {
            for d in enumerate_out_gravity(n, k).unwrap() {
                let mut prev = 0;
                for s in &d.segments {
                    let lp = embedded_left_end(k, s);
                    let rp = embedded_right_end(k, s);
                    if k > 1 {
                        assert_eq!(lp % (k - 1), 0);
                    }
                    assert!(rp < s.row * k);
                    assert!(rp >= prev);
                    prev = rp;
                }
            }
        }
    }

    #[test]
    fn pair_of_dycks_example() {
        let rows = [(3, 3), (2, 3), (2, 4), (1, 4), (3, 7), (3, 7), (1, 7)];
        let segments = rows
            .iter()
            .enumerate()
            .map(|(i, &(l, r))| seg(i as u64 + 1, l, r))
            .collect();
        let d = GravityDiagram {
            kind: DiagramKind::Out,
            family: GravityFamily::Caracol { n: 11, k: 3 },
            segments,
            colors: None,
        };
        d.validate().unwrap();
        assert_eq!(out_subpartition(&d).unwrap(), vec![14, 12, 12, 5, 4, 1]);
        let p = psi_out(&d).unwrap();
        assert_eq!(p.reference.len(), 23);
        assert_eq!(psi_out_inverse(11, 3, &p).unwrap(), d);

        let x = xi(&d).unwrap();
        assert_eq!(x.family, GravityFamily::Mcar { a: 8, k: 3 });
        let got: Vec<(u64, u64)> = x
            .segments
            .iter()
            .map(|s| s.right)
            .zip(x.colors.clone().unwrap())
            .collect();
        assert_eq!(
            got,
            vec![(0, 3), (0, 2), (1, 2), (1, 1), (4, 3), (4, 3), (4, 1)]
        );
    }

    #[test]
    fn k1_is_conjugation() {
        for n in 3..=8u64 {
            for (o, i) in in_out_correspondence(n, 1).unwrap() {
                let lam = out_subpartition(&o).unwrap();
                let mut conj: Vec<u64> = (1..=lam.first().copied().unwrap_or(0))
                    .map(|c| lam.iter().filter(|&&x| x >= c).count() as u64)
                    .collect();
                conj.sort_unstable_by(|x, y| y.cmp(x));
                let ins: Vec<u64> = i.segments.iter().map(Segment::len).collect();
                assert_eq!(ins, conj);
            }
        }
        let segments = [1u64, 2, 3, 3, 4]
            .iter()
            .enumerate()
            .map(|(i, &r)| seg(i as u64 + 1, 1, r))
            .collect();
        let d = GravityDiagram {
            kind: DiagramKind::Out,
            family: GravityFamily::Caracol { n: 7, k: 1 },
            segments,
            colors: None,
        };
        assert_eq!(out_subpartition(&d).unwrap(), vec![3, 2, 2, 1]);
        let i = psi_in_inverse(7, 1, &psi_out(&d).unwrap()).unwrap();
        assert_eq!(i.segments, vec![seg(1, 3, 7), seg(2, 4, 7), seg(3, 6, 7)]);
    }

    #[test]
    fn in_out_is_perfect_matching() {
        let pairs = in_out_correspondence(5, 2).unwrap();
        assert_eq!(pairs.len(), 7);
        let ins: HashSet<_> = pairs.iter().map(|p| p.1.clone()).collect();
        assert_eq!(ins.len(), 7);
    }

    #[test]
    fn empty_diagrams() {
        let empty = GravityDiagram {
            kind: DiagramKind::In,
            family: GravityFamily::Caracol { n: 5, k: 2 },
            segments: vec![],
            colors: None,
        };
        let p = psi_in(&empty).unwrap();
        assert_eq!(p.shape, vec![3, 0, 0, 0, 0]);
        let trivial = enumerate_out_gravity(5, 2).unwrap().next().unwrap();
        assert!(trivial.segments.iter().all(Segment::is_empty));
        assert_eq!(psi_out(&trivial).unwrap(), p);
    }

    #[test]
    fn json_and_render() {
        let d = enumerate_out_gravity_mcar(3, 2).unwrap().last().unwrap();
        let js = serde_json::to_value(&d).unwrap();
        assert_eq!(js["family"], "mcar");
        assert_eq!(js["kind"], "out");
        assert!(js["segments"][0].is_array());
        let back: GravityDiagram = serde_json::from_value(js).unwrap();
        assert_eq!(back, d);
        for d in enumerate_in_gravity(5, 2)
            .unwrap()
            .chain(enumerate_out_gravity(5, 2).unwrap())
        {
            let s = serde_json::to_string(&d).unwrap();
            assert_eq!(serde_json::from_str::<GravityDiagram>(&s).unwrap(), d);
            assert!(!d.render().is_empty());
        }
    }

    #[test]
    fn malformed_rejected() {
        let bad = GravityDiagram {
            kind: DiagramKind::Out,
            family: GravityFamily::Caracol { n: 5, k: 2 },
            segments: vec![seg(1, 2, 3), seg(2, 2, 2)],
            colors: None,
        };
        assert!(matches!(
            psi_out(&bad),
            Err(GravityError::MalformedDiagram(_))
        ));
        let bad_in = GravityDiagram {
            kind: DiagramKind::In,
            family: GravityFamily::Caracol { n: 5, k: 2 },
            segments: vec![seg(2, 3, 5)],
            colors: None,
        };
        assert!(psi_in(&bad_in).is_err());
    }
}

//! Exact integer combinatorics: binomials, multinomials, dominance order,
//! rational Catalan numbers and k-parking numbers.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use thiserror::Error;

/// Arbitrary-precision nonnegative count.
pub type BigCount = BigUint;

/// Weak composition: a finite sequence of nonnegative parts.
pub type Composition = Vec<u64>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CombinatError {
    #[error("parts sum to {got}, expected {expected}")]
    SumMismatch { expected: u64, got: u64 },
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("Cat({a},{b}) is not an integer")]
    NonIntegral { a: u64, b: u64 },
    #[error("bad parameters: {0}")]
    BadParameters(String),
}

pub fn binomial(n: u64, k: u64) -> BigCount {
    if k > n {
        return BigCount::zero();
    }
    num_integer::binomial(BigUint::from(n), BigUint::from(k))
}

/// Number of k-element multisets from n symbols.
pub fn multichoose(n: u64, k: u64) -> BigCount {
    if n == 0 {
        return if k == 0 {
            BigCount::one()
        } else {
            BigCount::zero()
        };
    }
    binomial(n + k - 1, k)
}

/// Multiset coefficient extended to integer `n` as the polynomial
/// n(n+1)...(n+k-1)/k!, so it can be negative.
pub fn multichoose_signed(n: i64, k: u64) -> BigInt {
    if n > 0 {
        return BigInt::from(multichoose(n as u64, k));
    }
    if k == 0 {
        return BigInt::one();
    }
    // all factors n..n+k-1 are <= 0; one of them is zero unless n+k-1 < 0
    if n + (k as i64) > 0 {
        return BigInt::zero();
    }
    let mag = BigInt::from(binomial(n.unsigned_abs(), k));
    if k % 2 == 1 {
        -mag
    } else {
        mag
    }
}

pub fn multinomial(n: u64, parts: &[u64]) -> Result<BigCount, CombinatError> {
    let got: u64 = parts.iter().sum();
    if got != n {
        return Err(CombinatError::SumMismatch { expected: n, got });
    }
    let mut acc = BigCount::one();
    let mut rest = n;
    for &p in parts {
        acc *= binomial(rest, p);
        rest -= p;
    }
    Ok(acc)
}

/// (1/(a+b)) C(a+b, a), checked for exactness.
///
/// `b = 0` is accepted so the degenerate caracol Car_3 (a = 1, b = 0) has a value.
pub fn rational_catalan(a: u64, b: u64) -> Result<BigCount, CombinatError> {
    if a == 0 {
        return Err(CombinatError::BadParameters("a must be positive".into()));
    }
    let num = binomial(a + b, a);
    let (q, r) = num.div_rem(&BigUint::from(a + b));
    if !r.is_zero() {
        return Err(CombinatError::NonIntegral { a, b });
    }
    Ok(q)
}

/// The other two expressions C(a+b-1, a)/b and C(a+b-1, b)/a, when exact.
pub fn rational_catalan_alternatives(a: u64, b: u64) -> (Option<BigCount>, Option<BigCount>) {
    let exact = |num: BigCount, den: u64| {
        if den == 0 {
            return None;
        }
        let (q, r) = num.div_rem(&BigUint::from(den));
        r.is_zero().then_some(q)
    };
    if a + b == 0 {
        return (None, None);
    }
    (
        exact(binomial(a + b - 1, a), b),
        exact(binomial(a + b - 1, b), a),
    )
}

/// T_k(r, i) = (r+1)^(i-1) * multichoose(k(r+1), r-i).
///
/// # Panics
/// If `i > r`.
pub fn k_parking_number(k: u64, r: u64, i: u64) -> BigCount {
    assert!(i <= r, "k_parking_number needs i <= r");
    let mc = multichoose(k * (r + 1), r - i);
    if i == 0 {
        let (q, rem) = mc.div_rem(&BigUint::from(r + 1));
        assert!(rem.is_zero(), "T_{k}({r},0) division not exact");
        q
    } else {
        num_traits::pow(BigUint::from(r + 1), (i - 1) as usize) * mc
    }
}

pub fn is_log_concave(seq: &[BigCount]) -> bool {
    seq.windows(3).all(|w| &w[1] * &w[1] >= &w[0] * &w[2])
}

pub fn dominates(s: &[u64], t: &[u64]) -> Result<bool, CombinatError> {
    if s.len() != t.len() {
        return Err(CombinatError::LengthMismatch(s.len(), t.len()));
    }
    let (ss, ts): (u64, u64) = (s.iter().sum(), t.iter().sum());
    if ss != ts {
        return Err(CombinatError::SumMismatch {
            expected: ts,
            got: ss,
        });
    }
    Ok(dominates_unchecked(s, t))
}

pub(crate) fn dominates_unchecked(s: &[u64], t: &[u64]) -> bool {
    let (mut ps, mut pt) = (0u64, 0u64);
    for (a, b) in s.iter().zip(t) {
        ps += a;
        pt += b;
        if ps < pt {
            return false;
        }
    }
    true
}

pub fn prefix_sums(s: &[u64]) -> Vec<u64> {
    s.iter()
        .scan(0u64, |acc, &x| {
            *acc += x;
            Some(*acc)
        })
        .collect()
}

/// All s dominating t, in lexicographically decreasing order.
pub fn dominating_compositions(t: &[u64]) -> DominatingCompositions {
    DominatingCompositions::new(t.to_vec())
}

/// All weak compositions of `total` into `parts` parts, lexicographically decreasing.
pub fn weak_compositions(total: u64, parts: usize) -> DominatingCompositions {
    if parts == 0 {
        let mut it = DominatingCompositions::new(Vec::new());
        if total != 0 {
            it.current = None;
        }
        return it;
    }
    let mut t = vec![0; parts];
    t[parts - 1] = total;
    DominatingCompositions::new(t)
}

#[derive(Debug, Clone)]
pub struct DominatingCompositions {
    t_prefix: Vec<u64>,
    total: u64,
    current: Option<Vec<u64>>,
}

impl DominatingCompositions {
    fn new(t: Vec<u64>) -> Self {
        let t_prefix = prefix_sums(&t);
        let total = t_prefix.last().copied().unwrap_or(0);
        let mut first = vec![0; t.len()];
        if let Some(x) = first.first_mut() {
            *x = total;
        }
        DominatingCompositions {
            t_prefix,
            total,
            current: Some(first),
        }
    }

    fn advance(&mut self) {
        let Some(s) = self.current.as_mut() else {
            return;
        };
        let len = s.len();
        if len < 2 {
            self.current = None;
            return;
        }
        let mut prefix = prefix_sums(s);
        for j in (0..len - 1).rev() {
            if s[j] > 0 && prefix[j] > self.t_prefix[j] {
                s[j] -= 1;
                prefix[j] -= 1;
                s[j + 1] = self.total - prefix[j];
                for x in s.iter_mut().skip(j + 2) {
                    *x = 0;
                }
                return;
            }
        }
        self.current = None;
    }
}

impl Iterator for DominatingCompositions {
    type Item = Vec<u64>;

    fn next(&mut self) -> Option<Vec<u64>> {
        let out = self.current.clone()?;
        self.advance();
        Some(out)
    }
}

/// Rearranges `v` into the next lexicographic permutation; false when `v` was the last.
pub(crate) fn next_permutation<T: Ord>(v: &mut [T]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Words on north steps (bottom to top, left to right) of a path with column
/// sizes `s`, using labels 1..=sum(s), increasing inside each column.
pub fn column_labelings(s: &[u64]) -> ColumnLabelings {
    let mut cols: Vec<usize> = Vec::new();
    for (j, &c) in s.iter().enumerate() {
        cols.extend(std::iter::repeat_n(j, c as usize));
    }
    ColumnLabelings {
        sizes: s.to_vec(),
        cols: Some(cols),
    }
}

/// Iterator behind [`column_labelings`]: walks the multiset permutations
/// assigning each label its column.
#[derive(Debug, Clone)]
pub struct ColumnLabelings {
    sizes: Vec<u64>,
    cols: Option<Vec<usize>>,
}

impl Iterator for ColumnLabelings {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        let cols = self.cols.as_mut()?;
        let mut blocks: Vec<Vec<u32>> = self
            .sizes
            .iter()
            .map(|&c| Vec::with_capacity(c as usize))
            .collect();
        for (label, &c) in cols.iter().enumerate() {
            blocks[c].push(label as u32 + 1);
        }
        if !next_permutation(cols) {
            self.cols = None;
        }
        Some(blocks.concat())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(x: u64) -> BigCount {
        BigCount::from(x)
    }

    fn pascal(n: usize, k: usize) -> BigCount {
        let mut row = vec![b(1)];
        for _ in 0..n {
            let mut next = vec![b(1); row.len() + 1];
            for j in 1..row.len() {
                next[j] = &row[j - 1] + &row[j];
            }
            row = next;
        }
        row.get(k).cloned().unwrap_or_default()
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), b(10));
        assert_eq!(binomial(9, 0), b(1));
        assert_eq!(binomial(3, 5), b(0));
        for n in 0..20 {
            for k in 0..=n + 1 {
                assert_eq!(binomial(n as u64, k as u64), pascal(n, k));
            }
        }
        assert_eq!(binomial(7, 4), b(35));
    }

    #[test]
    fn multisets() {
        assert_eq!(multichoose(3, 2), b(6));
        assert_eq!(multichoose(0, 0), b(1));
        assert_eq!(multichoose(0, 3), b(0));
        assert_eq!(multichoose(10, 2), b(55));
        assert_eq!(b(5) * multichoose(10, 2), b(275));
        assert_eq!(multichoose_signed(-2, 1), BigInt::from(-2));
        assert_eq!(multichoose_signed(-2, 2), BigInt::from(1));
        assert_eq!(multichoose_signed(-1, 2), BigInt::from(0));
        assert_eq!(multichoose_signed(-3, 2), BigInt::from(3));
        assert_eq!(multichoose_signed(0, 2), BigInt::from(0));
        assert_eq!(multichoose_signed(-2, 3), BigInt::from(0));
        assert_eq!(multichoose_signed(4, 2), BigInt::from(10));
    }

    #[test]
    fn signed_multichoose_is_rising_factorial() {
        for n in -6i64..6 {
            for k in 0u64..6 {
                let mut num = BigInt::one();
                let mut den = BigInt::one();
                for j in 0..k {
                    num *= n + j as i64;
                    den *= j as i64 + 1;
                }
                assert_eq!(multichoose_signed(n, k), num / den, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn multinomials() {
        assert_eq!(multinomial(6, &[2, 2, 2]).unwrap(), b(90));
        assert_eq!(multinomial(6, &[6, 0, 0]).unwrap(), b(1));
        assert_eq!(multinomial(6, &[2, 1, 3]).unwrap(), b(60));
        assert!(matches!(
            multinomial(5, &[2, 2]),
            Err(CombinatError::SumMismatch { .. })
        ));
    }

    #[test]
    fn catalan_values() {
        assert_eq!(rational_catalan(3, 5).unwrap(), b(7));
        assert_eq!(rational_catalan(4, 3).unwrap(), b(5));
        for bb in 1..20 {
            assert_eq!(rational_catalan(1, bb).unwrap(), b(1));
        }
        assert_eq!(rational_catalan(1, 0).unwrap(), b(1));
        assert!(matches!(
            rational_catalan(2, 2),
            Err(CombinatError::NonIntegral { .. })
        ));
    }

    #[test]
    fn catalan_three_formulas_agree() {
        for a in 1..=8u64 {
            for bb in 1..=8u64 {
                if a.gcd(&bb) != 1 {
                    continue;
                }
                let c = rational_catalan(a, bb).unwrap();
                let (x, y) = rational_catalan_alternatives(a, bb);
                assert_eq!(x.as_ref(), Some(&c));
                assert_eq!(y.as_ref(), Some(&c));
            }
        }
    }

    #[test]
    fn parking_numbers() {
        assert_eq!(k_parking_number(2, 3, 1), b(36));
        assert_eq!(k_parking_number(3, 4, 2), b(600));
        assert_eq!(k_parking_number(1, 3, 3), b(16));
        assert_eq!(k_parking_number(4, 5, 0), b(16380));
        for k in 1..=4u64 {
            for r in 0..=5u64 {
                assert_eq!(
                    k_parking_number(k, r, 0),
                    rational_catalan(r + 1, k * (r + 1) - 1).unwrap()
                );
                if r >= 1 {
                    assert_eq!(
                        k_parking_number(k, r, r - 1),
                        b(k) * k_parking_number(k, r, r)
                    );
                }
            }
        }
    }

    #[test]
    fn log_concavity() {
        assert!(is_log_concave(&[b(1), b(1), b(1)]));
        assert!(is_log_concave(&[b(30), b(36), b(32), b(16)]));
        assert!(!is_log_concave(&[b(1), b(1), b(3)]));
        for k in 1..=4 {
            for r in 0..=5 {
                let row: Vec<_> = (0..=r).map(|i| k_parking_number(k, r, i)).collect();
                assert!(is_log_concave(&row));
            }
        }
    }

    #[test]
    fn dominance() {
        assert!(dominates(&[1, 1], &[1, 1]).unwrap());
        assert!(dominates(&[2, 0], &[1, 1]).unwrap());
        assert!(!dominates(&[0, 2], &[1, 1]).unwrap());
        assert!(dominates(&[1], &[1, 0]).is_err());
        assert!(dominates(&[1, 1], &[1, 0]).is_err());
    }

    #[test]
    fn dominating_small() {
        let v: Vec<_> = dominating_compositions(&[1, 0]).collect();
        assert_eq!(v, vec![vec![1, 0]]);
        let v: Vec<_> = dominating_compositions(&[0, 1]).collect();
        assert_eq!(v, vec![vec![1, 0], vec![0, 1]]);
        // brute force: only (2,0,0) and (1,1,0) dominate (1,1,0)
        assert_eq!(dominating_compositions(&[1, 1, 0]).count(), 2);
        assert_eq!(dominating_compositions(&[1, 1, 1]).count(), 5);
        assert_eq!(dominating_compositions(&[0, 1, 1]).count(), 5);
        assert_eq!(dominating_compositions(&[]).count(), 1);
        assert_eq!(weak_compositions(2, 0).count(), 0);
        assert_eq!(weak_compositions(0, 0).count(), 1);
        assert_eq!(weak_compositions(4, 3).count(), 15);
    }

    #[test]
    fn multinomial_theorem() {
        for n in 0..=10u64 {
            for k in 1..=4usize {
                let total: BigCount = weak_compositions(n, k)
                    .map(|d| multinomial(n, &d).unwrap())
                    .sum();
                assert_eq!(total, num_traits::pow(b(k as u64), n as usize));
            }
        }
    }

    #[test]
    fn labelings() {
        let v: Vec<_> = column_labelings(&[1, 1, 0]).collect();
        assert_eq!(v, vec![vec![1, 2], vec![2, 1]]);
        assert_eq!(column_labelings(&[2, 1, 3]).count(), 60);
        assert_eq!(column_labelings(&[]).count(), 1);
        for w in column_labelings(&[2, 0, 3]) {
            assert!(w[0] < w[1] && w[2] < w[3] && w[3] < w[4]);
        }
    }
}

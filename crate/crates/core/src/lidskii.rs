//! Generalized Lidskii formulas for volumes and lattice points of flow polytopes.

use num_bigint::{BigInt, Sign};
use num_traits::{One, Pow, Zero};
use thiserror::Error;

use crate::combinat::{
    binomial, dominating_compositions, multichoose_signed, multinomial, BigCount,
};
use crate::graph::DirectedMultigraph;
use crate::kostant::{Kostant, KostantError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LidskiiError {
    #[error(transparent)]
    Kostant(#[from] KostantError),
    #[error("net flow entry a_{0} is negative")]
    NegativeNetFlow(usize),
    #[error("out- and in-degree Kostant values disagree: {0} vs {1}")]
    InternalMismatch(BigCount, BigCount),
}

fn check_netflow(g: &DirectedMultigraph, a: &[i64]) -> Result<(), LidskiiError> {
    if a.len() != g.num_vertices() {
        return Err(KostantError::LengthMismatch {
            got: a.len(),
            want: g.num_vertices(),
        }
        .into());
    }
    let s: i64 = a.iter().sum();
    if s != 0 {
        return Err(KostantError::SumNonzero(s).into());
    }
    if let Some(i) = a[..g.n()].iter().position(|&x| x < 0) {
        return Err(LidskiiError::NegativeNetFlow(i + 1));
    }
    Ok(())
}

/// The Kostant argument (s_1 - t_1, ..., s_n - t_n, 0).
pub(crate) fn shifted_argument(s: &[u64], t: &[u64]) -> Vec<i64> {
    let mut v: Vec<i64> = s
        .iter()
        .zip(t)
        .map(|(&x, &y)| x as i64 - y as i64)
        .collect();
    v.push(0);
    v
}

/// Normalized volume of F_G(a).
pub fn volume(g: &DirectedMultigraph, a: &[i64]) -> Result<BigCount, LidskiiError> {
    check_netflow(g, a)?;
    let t = g.shifted_outdegree();
    let d = (g.m() - g.n()) as u64;
    let mut kost = Kostant::new(g);
    let mut total = BigCount::zero();
    for s in dominating_compositions(&t) {
        if s.iter().zip(a).any(|(&si, &ai)| ai == 0 && si > 0) {
            continue;
        }
        let kv = kost.eval(&shifted_argument(&s, &t))?;
        if kv.is_zero() {
            continue;
        }
        let mut term = multinomial(d, &s).expect("dominating composition has the right sum") * kv;
        for (&si, &ai) in s.iter().zip(a) {
            if si > 0 {
                term *= Pow::pow(BigCount::from(ai as u64), si);
            }
        }
        total += term;
    }
    Ok(total)
}

/// Lattice points of F_G(a), binomial form with the shifted out-degrees.
pub fn lattice_points_binomial(
    g: &DirectedMultigraph,
    a: &[i64],
) -> Result<BigCount, LidskiiError> {
    check_netflow(g, a)?;
    let t = g.shifted_outdegree();
    let mut kost = Kostant::new(g);
    let mut total = BigCount::zero();
    for s in dominating_compositions(&t) {
        let mut coeff = BigCount::one();
        for ((&si, &ti), &ai) in s.iter().zip(&t).zip(a) {
            coeff *= binomial(ai as u64 + ti, si);
            if coeff.is_zero() {
                break;
            }
        }
        if coeff.is_zero() {
            continue;
        }
        total += coeff * kost.eval(&shifted_argument(&s, &t))?;
    }
    Ok(total)
}

/// Lattice points of F_G(a), multiset form with the shifted in-degrees.
///
/// Here u_i = indeg(i) - 1 for i = 1..n, so u_1 = -1; the multiset
/// coefficients are taken as polynomials and may be negative term by term.
pub fn lattice_points_multiset(
    g: &DirectedMultigraph,
    a: &[i64],
) -> Result<BigCount, LidskiiError> {
    check_netflow(g, a)?;
    let t = g.shifted_outdegree();
    let u: Vec<i64> = (1..=g.n()).map(|v| g.indeg(v) as i64 - 1).collect();
    let mut kost = Kostant::new(g);
    let mut total = BigInt::zero();
    for s in dominating_compositions(&t) {
        let mut coeff = BigInt::one();
        for ((&si, &ui), &ai) in s.iter().zip(&u).zip(a) {
            coeff *= multichoose_signed(ai - ui, si);
            if coeff.is_zero() {
                break;
            }
        }
        if coeff.is_zero() {
            continue;
        }
        total += coeff * BigInt::from(kost.eval(&shifted_argument(&s, &t))?);
    }
    assert!(
        total.sign() != Sign::Minus,
        "lattice point count came out negative"
    );
    Ok(total.magnitude().clone())
}

/// Volume at the unit flow (1, 0, ..., 0, -1), as the common value of
/// K_G(v_out) and K_G(v_in).
pub fn volume_unit_flow(g: &DirectedMultigraph) -> Result<BigCount, LidskiiError> {
    let mut kost = Kostant::new(g);
    let vo = kost.eval(&g.v_out())?;
    let vi = kost.eval(&g.v_in())?;
    if vo != vi {
        return Err(LidskiiError::InternalMismatch(vo, vi));
    }
    Ok(vo)
}

/// (1, 0, ..., 0, -1) on the vertices of `g`.
pub fn unit_flow(g: &DirectedMultigraph) -> Vec<i64> {
    let mut a = vec![0; g.num_vertices()];
    a[0] = 1;
    a[g.n()] = -1;
    a
}

/// (1, ..., 1, -n) on the vertices of `g`.
pub fn ones_flow(g: &DirectedMultigraph) -> Vec<i64> {
    let mut a = vec![1; g.num_vertices()];
    a[g.n()] = -(g.n() as i64);
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinat::rational_catalan;
    use crate::graph::*;
    use crate::kostant::kostant;

    fn b(x: u64) -> BigCount {
        BigCount::from(x)
    }

    #[test]
    fn unit_flow_volumes() {
        let g = caracol_k(5, 1).unwrap();
        assert_eq!(volume(&g, &unit_flow(&g)).unwrap(), b(5));
        for n in 2..=7usize {
            for k in 1..n {
                let g = caracol_k(n, k).unwrap();
                let want = rational_catalan((n - k) as u64, (k * (n - k)) as u64 - 1).unwrap();
                assert_eq!(volume_unit_flow(&g).unwrap(), want);
                assert_eq!(volume(&g, &unit_flow(&g)).unwrap(), want);
            }
        }
        assert_eq!(volume_unit_flow(&caracol_k(7, 2).unwrap()).unwrap(), b(143));
        assert_eq!(
            volume_unit_flow(&multicaracol(3, 2).unwrap()).unwrap(),
            b(7)
        );
    }

    #[test]
    fn ones_volumes() {
        let g = caracol_k(5, 2).unwrap();
        assert_eq!(volume(&g, &ones_flow(&g)).unwrap(), b(2800));
        let g = caracol_k(5, 1).unwrap();
        assert_eq!(volume(&g, &ones_flow(&g)).unwrap(), b(625));
        let g = pitman_stanley(4).unwrap();
        assert_eq!(volume(&g, &ones_flow(&g)).unwrap(), b(3));
    }

    #[test]
    fn cry() {
        for (n, want) in [(3usize, 1u64), (4, 2), (5, 10)] {
            let g = complete_graph(n).unwrap();
            assert_eq!(volume_unit_flow(&g).unwrap(), b(want));
            assert_eq!(volume(&g, &unit_flow(&g)).unwrap(), b(want));
        }
    }

    #[test]
    fn lattice_forms() {
        let cases: Vec<(DirectedMultigraph, Vec<i64>)> = vec![
            (pitman_stanley(4).unwrap(), vec![1, 1, 1, -3]),
            (caracol_k(6, 2).unwrap(), vec![1, 0, 0, 0, 0, 0, -1]),
            (caracol_k(5, 1).unwrap(), vec![1, 0, 0, 0, 0, -1]),
            (multicaracol(2, 2).unwrap(), vec![2, 1, 0, -3]),
            (complete_graph(3).unwrap(), vec![2, 0, 1, -3]),
        ];
        for (g, a) in cases {
            let k = kostant(&g, &a).unwrap();
            assert_eq!(lattice_points_binomial(&g, &a).unwrap(), k);
            assert_eq!(lattice_points_multiset(&g, &a).unwrap(), k);
            let z = vec![0; g.num_vertices()];
            assert_eq!(lattice_points_binomial(&g, &z).unwrap(), b(1));
            assert_eq!(lattice_points_multiset(&g, &z).unwrap(), b(1));
        }
    }

    #[test]
    fn homogeneity() {
        let g = caracol_k(4, 2).unwrap();
        let d = (g.m() - g.n()) as u32;
        let a = vec![1, 2, 0, 1, -4];
        let v1 = volume(&g, &a).unwrap();
        for c in 1..=3i64 {
            let ca: Vec<i64> = a.iter().map(|x| x * c).collect();
            assert_eq!(
                volume(&g, &ca).unwrap(),
                v1.clone() * Pow::pow(b(c as u64), d)
            );
        }
    }

    #[test]
    fn rejects_bad_netflow() {
        let g = caracol_k(3, 1).unwrap();
        assert_eq!(
            volume(&g, &[1, -1, 1, -1]),
            Err(LidskiiError::NegativeNetFlow(2))
        );
        assert!(volume(&g, &[1, 0, 0, 0]).is_err());
    }
}

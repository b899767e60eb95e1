//! Lattice path combinatorics: t-Dyck paths, rational Dyck paths, labeled
//! paths, k-multi-labeled Dyck paths and circular parking.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::combinat::{
    column_labelings, dominates_unchecked, dominating_compositions, prefix_sums,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("({0},{1}) are not coprime")]
    NotCoprime(u64, u64),
    #[error("shape does not dominate the reference composition")]
    NotDominating,
    #[error("invalid parameters: {0}")]
    BadParameters(String),
}

/// A weak composition s dominating the reference t: N^{s_1} E N^{s_2} E ...
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TDyckPath {
    pub shape: Vec<u64>,
    pub reference: Vec<u64>,
}

impl TDyckPath {
    pub fn new(shape: Vec<u64>, reference: Vec<u64>) -> Result<Self, PathError> {
        if shape.len() != reference.len()
            || shape.iter().sum::<u64>() != reference.iter().sum::<u64>()
            || !dominates_unchecked(&shape, &reference)
        {
            return Err(PathError::NotDominating);
        }
        Ok(TDyckPath { shape, reference })
    }

    /// Height of the path at each east step.
    pub fn heights(&self) -> Vec<u64> {
        prefix_sums(&self.shape)
    }

    /// Squares between the path and the shaded region.
    pub fn area(&self) -> u64 {
        self.heights()
            .iter()
            .zip(prefix_sums(&self.reference))
            .map(|(s, t)| s - t)
            .sum()
    }
}

pub fn enumerate_t_dyck(t: &[u64]) -> impl Iterator<Item = TDyckPath> {
    let reference = t.to_vec();
    dominating_compositions(t).map(move |s| TDyckPath {
        shape: s,
        reference: reference.clone(),
    })
}

/// Reference shape whose t-Dyck paths are the rational (a,b)-Dyck paths
/// (lattice paths from (0,0) to (b,a) weakly above y = a x / b).
pub fn rational_shape(a: u64, b: u64) -> Result<Vec<u64>, PathError> {
    if a == 0 || b == 0 {
        return Err(PathError::BadParameters("a and b must be positive".into()));
    }
    if a.gcd(&b) != 1 {
        return Err(PathError::NotCoprime(a, b));
    }
    let ceil = |j: u64| (a * j).div_ceil(b);
    Ok((1..=b).map(|j| ceil(j) - ceil(j - 1)).collect())
}

/// A t-Dyck path with labels on its north steps, read bottom to top and left
/// to right; labels increase inside each column.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LabeledTDyckPath {
    pub path: TDyckPath,
    pub labels: Vec<u32>,
}

impl LabeledTDyckPath {
    /// Labels grouped by column.
    pub fn columns(&self) -> Vec<&[u32]> {
        let mut out = Vec::new();
        let mut at = 0;
        for &c in &self.path.shape {
            out.push(&self.labels[at..at + c as usize]);
            at += c as usize;
        }
        out
    }
}

pub fn enumerate_labeled(t: &[u64]) -> impl Iterator<Item = LabeledTDyckPath> {
    enumerate_t_dyck(t).flat_map(|p| {
        column_labelings(&p.shape).map(move |labels| LabeledTDyckPath {
            path: p.clone(),
            labels,
        })
    })
}

/// A classical r x r Dyck path whose north steps carry labels from
/// bar(k-1) < ... < bar(0) < 1 < ... < i, with bar(j) stored as -j.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MultiLabeledDyckPath {
    pub k: u64,
    pub shape: Vec<u64>,
    pub labels: Vec<i64>,
}

impl MultiLabeledDyckPath {
    pub fn r(&self) -> u64 {
        self.shape.len() as u64
    }

    /// Number of car (unbarred) labels.
    pub fn i(&self) -> u64 {
        self.labels.iter().filter(|&&x| x > 0).count() as u64
    }

    pub fn columns(&self) -> Vec<&[i64]> {
        let mut out = Vec::new();
        let mut at = 0;
        for &c in &self.shape {
            out.push(&self.labels[at..at + c as usize]);
            at += c as usize;
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        let r = self.shape.len();
        if self.shape.iter().sum::<u64>() != r as u64 || self.labels.len() != r {
            return false;
        }
        if !dominates_unchecked(&self.shape, &vec![1; r]) {
            return false;
        }
        let kk = self.k as i64;
        if self.labels.iter().any(|&x| x <= -kk) {
            return false;
        }
        let mut cars: Vec<i64> = self.labels.iter().copied().filter(|&x| x > 0).collect();
        cars.sort_unstable();
        if cars.iter().enumerate().any(|(p, &x)| x != p as i64 + 1) {
            return false;
        }
        self.columns().iter().all(|c| {
            c.windows(2).all(|w| w[0] <= w[1]) && c.windows(2).all(|w| w[0] <= 0 || w[0] < w[1])
        })
    }

    /// Parking preferences: a north step at x = h labeled l prefers space h+1.
    pub fn to_preference(&self) -> ParkingPreference {
        let mut moto = vec![Vec::new(); self.k as usize];
        let mut cars = vec![0u64; self.i() as usize];
        for (x, col) in self.columns().iter().enumerate() {
            for &l in col.iter() {
                if l > 0 {
                    cars[l as usize - 1] = x as u64 + 1;
                } else {
                    moto[(-l) as usize].push(x as u64 + 1);
                }
            }
        }
        ParkingPreference {
            motorcycle_prefs: moto,
            car_prefs: cars,
        }
    }

    /// Inverse of [`to_preference`](Self::to_preference); `None` unless the
    /// preference describes a Dyck path with r columns.
    pub fn from_preference(k: u64, r: u64, pp: &ParkingPreference) -> Option<Self> {
        let mut cols: Vec<Vec<i64>> = vec![Vec::new(); r as usize];
        for (j, prefs) in pp.motorcycle_prefs.iter().enumerate() {
            for &p in prefs {
                cols.get_mut(p as usize - 1)?.push(-(j as i64));
            }
        }
        for (c, &p) in pp.car_prefs.iter().enumerate() {
            cols.get_mut(p as usize - 1)?.push(c as i64 + 1);
        }
        for c in cols.iter_mut() {
            c.sort_unstable();
        }
        let m = MultiLabeledDyckPath {
            k,
            shape: cols.iter().map(|c| c.len() as u64).collect(),
            labels: cols.concat(),
        };
        m.is_valid().then_some(m)
    }
}

impl fmt::Display for MultiLabeledDyckPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cols: Vec<String> = self
            .columns()
            .iter()
            .map(|c| {
                let parts: Vec<String> = c
                    .iter()
                    .map(|&l| {
                        if l > 0 {
                            l.to_string()
                        } else {
                            format!("~{}", -l)
                        }
                    })
                    .collect();
                format!("[{}]", parts.join(" "))
            })
            .collect();
        write!(f, "{}", cols.join(""))
    }
}

/// Nondecreasing sequences of length `size` over bar(k-1) < ... < bar(0).
fn bar_multisets(k: u64, size: u64) -> Vec<Vec<i64>> {
    fn rec(lo: i64, left: u64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for v in lo..=0 {
            cur.push(v);
            rec(v, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(-(k as i64 - 1), size, &mut Vec::new(), &mut out);
    out
}

/// Every k-multi-labeled Dyck path of size r with i car labels.
pub fn enumerate_multilabeled(k: u64, r: u64, i: u64) -> std::vec::IntoIter<MultiLabeledDyckPath> {
    assert!(
        i <= r && k >= 1,
        "enumerate_multilabeled needs k >= 1 and i <= r"
    );
    let mut out = Vec::new();
    let staircase = vec![1u64; r as usize];
    for shape in dominating_compositions(&staircase) {
        // car counts per column
        let mut cars = vec![0u64; shape.len()];
        car_splits(&shape, i, 0, &mut cars, &mut |cars| {
            let bars: Vec<Vec<Vec<i64>>> = shape
                .iter()
                .zip(cars)
                .map(|(&m, &c)| bar_multisets(k, m - c))
                .collect();
            for word in column_labelings(cars) {
                let mut car_cols: Vec<&[u32]> = Vec::new();
                let mut at = 0;
                for &c in cars {
                    car_cols.push(&word[at..at + c as usize]);
                    at += c as usize;
                }
                let mut pick = vec![0usize; shape.len()];
                loop {
                    let mut labels = Vec::with_capacity(r as usize);
                    for x in 0..shape.len() {
                        labels.extend_from_slice(&bars[x][pick[x]]);
                        labels.extend(car_cols[x].iter().map(|&l| l as i64));
                    }
                    out.push(MultiLabeledDyckPath {
                        k,
                        shape: shape.clone(),
                        labels,
                    });
                    let mut x = 0;
                    while x < pick.len() {
                        pick[x] += 1;
                        if pick[x] < bars[x].len() {
                            break;
                        }
                        pick[x] = 0;
                        x += 1;
                    }
                    if x == pick.len() {
                        break;
                    }
                }
            }
        });
    }
    out.into_iter()
}

fn car_splits(shape: &[u64], left: u64, x: usize, cur: &mut Vec<u64>, f: &mut dyn FnMut(&[u64])) {
    if x == shape.len() {
        if left == 0 {
            f(cur);
        }
        return;
    }
    let rest: u64 = shape[x + 1..].iter().sum();
    for c in 0..=shape[x].min(left) {
        if left - c > rest {
            continue;
        }
        cur[x] = c;
        car_splits(shape, left - c, x + 1, cur, f);
    }
    cur[x] = 0;
}

/// Parking preferences for k motorcycle models and some cars on a one-way
/// circular street. `motorcycle_prefs[j]` holds the preferred spaces of the
/// model bar(j) motorcycles.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ParkingPreference {
    pub motorcycle_prefs: Vec<Vec<u64>>,
    pub car_prefs: Vec<u64>,
}

impl ParkingPreference {
    pub fn vehicle_count(&self) -> usize {
        self.motorcycle_prefs.iter().map(Vec::len).sum::<usize>() + self.car_prefs.len()
    }

    /// Every preference is moved z spaces forward around r+1 spaces.
    pub fn shift(&self, z: u64, spaces: u64) -> ParkingPreference {
        let mv = |p: u64| (p - 1 + z) % spaces + 1;
        let mut moto: Vec<Vec<u64>> = self
            .motorcycle_prefs
            .iter()
            .map(|g| g.iter().map(|&p| mv(p)).collect())
            .collect();
        for g in moto.iter_mut() {
            g.sort_unstable();
        }
        ParkingPreference {
            motorcycle_prefs: moto,
            car_prefs: self.car_prefs.iter().map(|&p| mv(p)).collect(),
        }
    }
}

impl fmt::Display for ParkingPreference {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let groups: Vec<String> = self
            .motorcycle_prefs
            .iter()
            .rev()
            .map(|g| {
                if g.is_empty() {
                    "{}".to_string()
                } else {
                    format!(
                        "{{{}}}",
                        g.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
                    )
                }
            })
            .collect();
        let cars: Vec<String> = self.car_prefs.iter().map(u64::to_string).collect();
        write!(f, "{} x ({})", groups.join(" x "), cars.join(","))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Vehicle {
    /// Motorcycle of model bar(j).
    Motorcycle(u64),
    /// Car number c (1-based).
    Car(u64),
}

/// Park motorcycle groups bar(k-1), ..., bar(0), then the cars in order; each
/// vehicle takes the first free space at or after its preference, wrapping.
pub fn circular_park(
    k: u64,
    r: u64,
    pp: &ParkingPreference,
) -> Result<Vec<Option<Vehicle>>, PathError> {
    let spaces = r as usize + 1;
    if pp.motorcycle_prefs.len() != k as usize || pp.vehicle_count() != r as usize {
        return Err(PathError::BadParameters(format!(
            "need {k} motorcycle groups and {r} vehicles"
        )));
    }
    let all = pp.motorcycle_prefs.iter().flatten().chain(&pp.car_prefs);
    if all.clone().any(|&p| p < 1 || p as usize > spaces) {
        return Err(PathError::BadParameters(
            "preference outside 1..=r+1".into(),
        ));
    }
    let mut street: Vec<Option<Vehicle>> = vec![None; spaces];
    let mut park = |pref: u64, v: Vehicle| {
        let mut s = pref as usize - 1;
        while street[s].is_some() {
            s = (s + 1) % spaces;
        }
        street[s] = Some(v);
    };
    for j in (0..k as usize).rev() {
        let mut g = pp.motorcycle_prefs[j].clone();
        g.sort_unstable();
        for p in g {
            park(p, Vehicle::Motorcycle(j as u64));
        }
    }
    for (c, &p) in pp.car_prefs.iter().enumerate() {
        park(p, Vehicle::Car(c as u64 + 1));
    }
    Ok(street)
}

/// Every preference for k models, r vehicles of which i are cars, on r+1 spaces.
pub fn all_preferences(k: u64, r: u64, i: u64) -> Vec<ParkingPreference> {
    let spaces = r + 1;
    // motorcycles: multisets of r-i (model, space) pairs
    let slots = k * spaces;
    let mut moto_choices: Vec<Vec<Vec<u64>>> = Vec::new();
    fn rec(lo: u64, slots: u64, left: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for v in lo..slots {
            cur.push(v);
            rec(v, slots, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut raw = Vec::new();
    rec(0, slots, r - i, &mut Vec::new(), &mut raw);
    for m in raw {
        let mut groups = vec![Vec::new(); k as usize];
        for v in m {
            groups[(v / spaces) as usize].push(v % spaces + 1);
        }
        moto_choices.push(groups);
    }
    let mut out = Vec::new();
    let total_cars = spaces.pow(i as u32);
    for groups in &moto_choices {
        for code in 0..total_cars {
            let mut c = code;
            let cars: Vec<u64> = (0..i)
                .map(|_| {
                    let p = c % spaces + 1;
                    c /= spaces;
                    p
                })
                .collect();
            out.push(ParkingPreference {
                motorcycle_prefs: groups.clone(),
                car_prefs: cars,
            });
        }
    }
    out
}

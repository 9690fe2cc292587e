//! Brute-force geometry: which approximate squares the attractor meets, how
//! many finer squares cover its piece inside a coarser one, and the local
//! scaling exponents read off those counts.
//!
//! Everything here works directly on vertex sets and digit strings and does
//! not go through the determinized automata, so it can serve as an
//! independent check on them.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::error::{CarpetError, Result};
use crate::model::CarpetSystem;

/// Cap on the number of live (square, vertex set) pairs at any depth.
pub const OCCUPANCY_BUDGET: usize = 10_000_000;

/// Largest `l` with `n^l <= m^k`, by exact integer comparison.
pub fn level_width(n: u32, m: u32, k: usize) -> Result<u32> {
    let mk = checked_pow(m, k)?;
    let mut l = 0u32;
    let mut nl = 1u128;
    while let Some(next) = nl.checked_mul(u128::from(n)) {
        if next > mk {
            break;
        }
        nl = next;
        l += 1;
    }
    Ok(l)
}

fn checked_pow(base: u32, exp: usize) -> Result<u128> {
    let exp = u32::try_from(exp).map_err(|_| CarpetError::InvalidArgument(format!("level {exp} too large")))?;
    u128::from(base)
        .checked_pow(exp)
        .ok_or_else(|| CarpetError::InvalidArgument(format!("{base}^{exp} overflows the grid coordinates")))
}

/// `[p/n^l, (p+1)/n^l] × [q/m^k, (q+1)/m^k]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ApproxSquare {
    pub k: usize,
    pub l: u32,
    pub p: u64,
    pub q: u64,
}

impl ApproxSquare {
    /// Lower-left and upper-right corners as floats.
    pub fn extent(&self, n: u32, m: u32) -> ((f64, f64), (f64, f64)) {
        let w = f64::from(n).powi(self.l as i32);
        let h = f64::from(m).powi(self.k as i32);
        ((self.p as f64 / w, self.q as f64 / h), ((self.p + 1) as f64 / w, (self.q + 1) as f64 / h))
    }
}

/// The level-k approximate squares met by the attractor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OccupancySet {
    pub k: usize,
    pub l: u32,
    /// `(p, q)`, sorted.
    pub squares: Vec<(u64, u64)>,
}

impl OccupancySet {
    pub fn len(&self) -> usize {
        self.squares.len()
    }

    pub fn is_empty(&self) -> bool {
        self.squares.is_empty()
    }

    pub fn square(&self, index: usize) -> ApproxSquare {
        let (p, q) = self.squares[index];
        ApproxSquare { k: self.k, l: self.l, p, q }
    }

    pub fn contains(&self, p: u64, q: u64) -> bool {
        self.squares.binary_search(&(p, q)).is_ok()
    }

    /// One `p q` pair per line.
    pub fn to_text(&self) -> String {
        self.squares.iter().map(|(p, q)| format!("{p} {q}\n")).collect()
    }
}

/// Vertex sets met during a traversal, numbered on first sight, with their
/// successor sets cached per digit cell.
struct SetTable<'a> {
    system: &'a CarpetSystem,
    sets: Vec<Vec<usize>>,
    ids: HashMap<Vec<usize>, u32>,
    /// `(set, x, y)` with `x = u32::MAX` for "any first digit".
    succ: HashMap<(u32, u32, u32), Option<u32>>,
}

impl<'a> SetTable<'a> {
    fn new(system: &'a CarpetSystem) -> Self {
        SetTable { system, sets: Vec::new(), ids: HashMap::new(), succ: HashMap::new() }
    }

    fn intern(&mut self, set: Vec<usize>) -> u32 {
        if let Some(&id) = self.ids.get(&set) {
            return id;
        }
        let id = self.sets.len() as u32;
        self.sets.push(set.clone());
        self.ids.insert(set, id);
        id
    }

    fn step(&mut self, id: u32, x: Option<u32>, y: u32) -> Option<u32> {
        let key = (id, x.unwrap_or(u32::MAX), y);
        if let Some(&hit) = self.succ.get(&key) {
            return hit;
        }
        let mut to: Vec<usize> = self.sets[id as usize]
            .iter()
            .flat_map(|&v| self.system.out_edges(v))
            .filter(|e| e.y == y && x.is_none_or(|x| e.x == x))
            .map(|e| e.to)
            .collect();
        to.sort_unstable();
        to.dedup();
        let next = (!to.is_empty()).then(|| self.intern(to));
        self.succ.insert(key, next);
        next
    }
}

/// Level-k squares met by `∪_{v ∈ starts} X_v`.
///
/// A square `(p, q)` is occupied iff some admissible word of length k from a
/// start has second digits spelling `q` and first digits whose length-`l`
/// prefix spells `p` (most significant digit first).
pub fn occupied_squares(system: &CarpetSystem, starts: &[usize], k: usize) -> Result<OccupancySet> {
    let (n, m) = (system.n(), system.m());
    let l = level_width(n, m, k)?;
    checked_pow(m, k)?;
    let mut start: Vec<usize> = starts.to_vec();
    start.sort_unstable();
    start.dedup();
    if start.is_empty() {
        return Err(CarpetError::InvalidArgument("no start vertices".into()));
    }

    let mut table = SetTable::new(system);
    let mut live: Vec<(u64, u64, u32)> = vec![(0, 0, table.intern(start))];
    for depth in 0..k {
        let track_x = (depth as u32) < l;
        let mut next = Vec::new();
        for &(p, q, set) in &live {
            for y in 0..m {
                let q2 = q * u64::from(m) + u64::from(y);
                if track_x {
                    for x in 0..n {
                        if let Some(to) = table.step(set, Some(x), y) {
                            next.push((p * u64::from(n) + u64::from(x), q2, to));
                        }
                    }
                } else if let Some(to) = table.step(set, None, y) {
                    next.push((p, q2, to));
                }
            }
            if next.len() > 2 * OCCUPANCY_BUDGET {
                return Err(CarpetError::EnumerationBudget { requested: k, feasible: depth });
            }
        }
        next.sort_unstable();
        next.dedup();
        if next.len() > OCCUPANCY_BUDGET {
            return Err(CarpetError::EnumerationBudget { requested: k, feasible: depth });
        }
        live = next;
    }
    let mut squares: Vec<(u64, u64)> = live.into_iter().map(|(p, q, _)| (p, q)).collect();
    squares.dedup();
    Ok(OccupancySet { k, l, squares })
}

/// Occupancy of the whole attractor `X = ∪_v X_v`.
pub fn occupied_squares_all(system: &CarpetSystem, k: usize) -> Result<OccupancySet> {
    let all: Vec<usize> = (0..system.vertex_count()).collect();
    occupied_squares(system, &all, k)
}

/// Level-k' squares of `fine` meeting `square` (level k <= k'), as
/// `(interior, closed)`: the first counts squares whose interiors overlap,
/// the second also counts squares touching the boundary.
pub fn covering_count(fine: &OccupancySet, square: &ApproxSquare, n: u32, m: u32) -> (usize, usize) {
    assert!(fine.k >= square.k && fine.l >= square.l, "covering level must be at least as fine");
    let sx = u64::from(n).pow(fine.l - square.l);
    let sy = u64::from(m).pow((fine.k - square.k) as u32);
    let (x0, x1) = (square.p * sx, (square.p + 1) * sx);
    let (y0, y1) = (square.q * sy, (square.q + 1) * sy);
    let mut interior = 0;
    let mut closed = 0;
    for &(p, q) in &fine.squares {
        // fine square spans [p, p+1] x [q, q+1] in fine units
        if p >= x0 && p < x1 && q >= y0 && q < y1 {
            interior += 1;
        }
        if p + 1 >= x0 && p <= x1 && q + 1 >= y0 && q <= y1 {
            closed += 1;
        }
    }
    (interior, closed)
}

/// Interior covering count of every square of `coarse`, in one pass over `fine`.
pub fn interior_counts(coarse: &OccupancySet, fine: &OccupancySet, n: u32, m: u32) -> Vec<usize> {
    let sx = u64::from(n).pow(fine.l - coarse.l);
    let sy = u64::from(m).pow((fine.k - coarse.k) as u32);
    let mut counts = vec![0usize; coarse.len()];
    for &(p, q) in &fine.squares {
        if let Ok(i) = coarse.squares.binary_search(&(p / sx, q / sy)) {
            counts[i] += 1;
        }
    }
    counts
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingReport {
    pub k: usize,
    pub k_prime: usize,
    pub occupied_k: usize,
    pub occupied_k_prime: usize,
    pub max_exponent: f64,
    pub min_exponent: f64,
    pub box_exponent: f64,
}

/// Local covering exponents between levels `k < k'`.
///
/// Both levels are measured by the geometric mean of an approximate
/// square's sides, so that a square of level `k` split into level-`k'`
/// squares is measured in units of `sqrt(n^{l'-l} m^{k'-k})`:
///
/// * `max/min_exponent`: over occupied level-k squares `Q`,
///   `2 log N_{k'}(X ∩ Q°) / log(n^{l'-l} m^{k'-k})`;
/// * `box_exponent`: `2 log #occupied_{k'} / log(n^{l'} m^{k'})`.
pub fn empirical_scaling(system: &CarpetSystem, k: usize, k_prime: usize) -> Result<ScalingReport> {
    if k >= k_prime {
        return Err(CarpetError::InvalidArgument(format!("need k < k' (got {k}, {k_prime})")));
    }
    let (n, m) = (system.n(), system.m());
    let coarse = occupied_squares_all(system, k)?;
    let fine = occupied_squares_all(system, k_prime)?;
    let ratio = (checked_pow(n, (fine.l - coarse.l) as usize)? * checked_pow(m, k_prime - k)?) as f64;
    let counts = interior_counts(&coarse, &fine, n, m);
    let mut max_exponent = f64::NEG_INFINITY;
    let mut min_exponent = f64::INFINITY;
    for count in counts {
        let e = 2.0 * (count as f64).ln() / ratio.ln();
        max_exponent = max_exponent.max(e);
        min_exponent = min_exponent.min(e);
    }
    let whole = (checked_pow(n, fine.l as usize)? * checked_pow(m, k_prime)?) as f64;
    Ok(ScalingReport {
        k,
        k_prime,
        occupied_k: coarse.len(),
        occupied_k_prime: fine.len(),
        max_exponent,
        min_exponent,
        box_exponent: 2.0 * (fine.len() as f64).ln() / whole.ln(),
    })
}

/// Number of distinct length-k second-digit strings readable from some
/// vertex of `starts`, by breadth-first search over (prefix, vertex) pairs.
pub fn projection_cover_count(system: &CarpetSystem, starts: &[usize], k: usize) -> Result<usize> {
    let m = u64::from(system.m());
    checked_pow(system.m(), k)?;
    let mut live: BTreeSet<(u64, usize)> = starts.iter().map(|&v| (0, v)).collect();
    for depth in 0..k {
        let mut next = BTreeSet::new();
        for &(q, v) in &live {
            for e in system.out_edges(v) {
                next.insert((q * m + u64::from(e.y), e.to));
            }
        }
        if next.len() > OCCUPANCY_BUDGET {
            return Err(CarpetError::EnumerationBudget { requested: k, feasible: depth });
        }
        live = next;
    }
    let strings: BTreeSet<u64> = live.into_iter().map(|(q, _)| q).collect();
    Ok(strings.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn level_widths() {
        assert_eq!(level_width(3, 2, 1).unwrap(), 0);
        assert_eq!(level_width(3, 2, 2).unwrap(), 1);
        assert_eq!(level_width(3, 2, 6).unwrap(), 3);
        // 4^l <= 3^k
        assert_eq!(level_width(4, 3, 3).unwrap(), 2);
        assert_eq!(level_width(4, 3, 9).unwrap(), 7);
        // exact powers: 9^1 <= 3^2
        assert_eq!(level_width(9, 3, 2).unwrap(), 1);
    }

    #[test]
    fn mc_occupancy() {
        let mc = fixtures::ex_mc();
        assert_eq!(occupied_squares(&mc, &[0], 1).unwrap().squares, vec![(0, 0), (0, 1)]);
        let occ = occupied_squares(&mc, &[0], 2).unwrap();
        assert_eq!(occ.l, 1);
        assert_eq!(occ.squares, vec![(0, 0), (0, 1), (1, 2), (1, 3), (2, 0), (2, 1)]);
    }

    #[test]
    fn point_occupancy() {
        let pt = fixtures::ex_pt();
        for k in 1..6 {
            assert_eq!(occupied_squares_all(&pt, k).unwrap().squares, vec![(0, 0)]);
        }
    }

    #[test]
    fn covering_examples() {
        let mc = fixtures::ex_mc();
        let fine = occupied_squares(&mc, &[0], 2).unwrap();
        let q = ApproxSquare { k: 1, l: 0, p: 0, q: 0 };
        assert_eq!(covering_count(&fine, &q, 3, 2).0, 4);

        let full = fixtures::ex_full();
        let occ = occupied_squares_all(&full, 2).unwrap();
        let sq = ApproxSquare { k: 2, l: 1, p: 1, q: 1 };
        // itself plus the 8 touching neighbours
        assert_eq!(covering_count(&occ, &sq, 3, 2), (1, 9));

        let pt = fixtures::ex_pt();
        let fine = occupied_squares_all(&pt, 5).unwrap();
        assert_eq!(covering_count(&fine, &ApproxSquare { k: 1, l: 0, p: 0, q: 0 }, 3, 2).0, 1);
    }

    #[test]
    fn full_grid_scales_uniformly() {
        let r = empirical_scaling(&fixtures::ex_full(), 2, 6).unwrap();
        assert_eq!((r.max_exponent, r.min_exponent, r.box_exponent), (2.0, 2.0, 2.0));
    }

    #[test]
    fn point_scaling_is_zero() {
        let r = empirical_scaling(&fixtures::ex_pt(), 1, 4).unwrap();
        assert_eq!((r.max_exponent, r.min_exponent, r.box_exponent), (0.0, 0.0, 0.0));
    }

    #[test]
    fn text_export() {
        let occ = occupied_squares(&fixtures::ex_mc(), &[0], 1).unwrap();
        assert_eq!(occ.to_text(), "0 0\n0 1\n");
    }

    #[test]
    fn projection_counts() {
        let mc = fixtures::ex_mc();
        assert_eq!(projection_cover_count(&mc, &[0], 5).unwrap(), 32);
        let ab = fixtures::ex_ab();
        assert_eq!(projection_cover_count(&ab, &[1], 3).unwrap(), 27);
        assert_eq!(projection_cover_count(&fixtures::ex_pt(), &[0], 7).unwrap(), 1);
    }

    #[test]
    fn rejects_bad_levels() {
        assert!(empirical_scaling(&fixtures::ex_mc(), 3, 3).is_err());
        assert!(occupied_squares(&fixtures::ex_mc(), &[], 2).is_err());
    }
}

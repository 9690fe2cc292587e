#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use carpetdim::model::{CarpetSystem, Edge};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A random valid system: up to 3 vertices, n in {3,4,5}, m in {2,3} below n, each
/// vertex with 1..=5 distinct out-edges.
pub fn random_system(seed: u64) -> CarpetSystem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vcount = rng.gen_range(1..=3usize);
    let n = *[3u32, 4, 5].choose(&mut rng).unwrap();
    // n > m is required, so (3, 3) is never drawn
    let m = if n == 3 { 2 } else { *[2u32, 3].choose(&mut rng).unwrap() };
    let mut edges = Vec::new();
    for from in 0..vcount {
        let mut all: Vec<(usize, u32, u32)> =
            (0..vcount).flat_map(|to| (0..n).flat_map(move |x| (0..m).map(move |y| (to, x, y)))).collect();
        all.shuffle(&mut rng);
        let degree = rng.gen_range(1..=5usize).min(all.len());
        for &(to, x, y) in &all[..degree] {
            edges.push(Edge { from, to, x, y });
        }
    }
    let names = (0..vcount).map(|i| format!("v{i}")).collect();
    CarpetSystem::from_indexed(n, m, names, edges).expect("generator only builds valid systems")
}

/// All length-k admissible words from `v`, as (first digits, second digits, terminal vertex).
pub fn words(system: &CarpetSystem, v: usize, k: usize) -> Vec<(Vec<u32>, Vec<u32>, usize)> {
    let mut out = Vec::new();
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    fn go(
        system: &CarpetSystem,
        v: usize,
        k: usize,
        xs: &mut Vec<u32>,
        ys: &mut Vec<u32>,
        out: &mut Vec<(Vec<u32>, Vec<u32>, usize)>,
    ) {
        if xs.len() == k {
            out.push((xs.clone(), ys.clone(), v));
            return;
        }
        for e in system.out_edges(v) {
            xs.push(e.x);
            ys.push(e.y);
            go(system, e.to, k, xs, ys, out);
            xs.pop();
            ys.pop();
        }
    }
    go(system, v, k, &mut xs, &mut ys, &mut out);
    out
}

fn to_int(digits: &[u32], base: u32) -> u64 {
    digits.iter().fold(0u64, |acc, &d| acc * u64::from(base) + u64::from(d))
}

/// Distinct (x truncated to l digits, y) pairs over all length-k words from
/// every vertex, encoded as grid coordinates.
pub fn naive_occupancy(system: &CarpetSystem, k: usize, l: u32) -> Vec<(u64, u64)> {
    let mut set = BTreeSet::new();
    for v in 0..system.vertex_count() {
        for (xs, ys, _) in words(system, v, k) {
            set.insert((to_int(&xs[..l as usize], system.n()), to_int(&ys, system.m())));
        }
    }
    set.into_iter().collect()
}

/// Classes `[w]` of length-k words from `v` with their terminal sets.
pub fn classes(system: &CarpetSystem, v: usize, k: usize) -> BTreeMap<(Vec<u32>, Vec<u32>), BTreeSet<usize>> {
    let mut map: BTreeMap<(Vec<u32>, Vec<u32>), BTreeSet<usize>> = BTreeMap::new();
    for (xs, ys, t) in words(system, v, k) {
        map.entry((xs, ys)).or_default().insert(t);
    }
    map
}

/// `log α_k` by direct word enumeration.
pub fn naive_log_alpha(system: &CarpetSystem, tilde_v: &[usize], lambda: &[f64], k: usize) -> f64 {
    let ln_n = f64::from(system.n()).ln();
    let mut best = f64::NEG_INFINITY;
    for &v in tilde_v {
        let mut by_y: BTreeMap<Vec<u32>, f64> = BTreeMap::new();
        for ((_, ys), terminal) in classes(system, v, k) {
            let eta = terminal.iter().map(|&t| lambda[t]).fold(0.0, f64::max);
            *by_y.entry(ys).or_default() += (k as f64 * eta * ln_n).exp();
        }
        for s in by_y.values() {
            best = best.max(s.ln());
        }
    }
    best
}

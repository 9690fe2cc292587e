//! Fiber matrices and two-sided joint-spectral-radius brackets.

use serde::Serialize;

use super::{determinize, spectral_radius, Alphabet, VertexSet};
use crate::error::Result;
use crate::matrix::{IntMatrix, RealMatrix};
use crate::model::CarpetSystem;

/// Cap on the total number of matrix products enumerated by [`jsr_bounds`].
pub const PRODUCT_BUDGET: u64 = 10_000_000;
const CONE_ITERATIONS: usize = 5_000;

/// `M_y[S][S'] = #{x : S --(x,y)--> S'}` over the XY automaton of a system.
///
/// The number of first-digit strings compatible with `y_1..y_k` from state
/// `S` is the `S` row sum of `M_{y_1} ⋯ M_{y_k}`.
#[derive(Debug, Clone, PartialEq)]
pub struct FiberMatrices {
    pub states: Vec<VertexSet>,
    pub mats: Vec<IntMatrix>,
}

/// Fiber matrices of `system`, with every singleton as a start. Callers pass
/// a component subsystem to get the matrices of that component.
pub fn fiber_matrices(system: &CarpetSystem) -> Result<FiberMatrices> {
    let aut = determinize(system, Alphabet::XY, &super::singletons(system))?;
    let d = aut.state_count();
    let mut mats = vec![IntMatrix::zeros(d); system.m() as usize];
    for s in 0..d {
        for &(letter, t) in aut.transitions(s) {
            mats[letter.y as usize].add_at(s, t, 1);
        }
    }
    Ok(FiberMatrices { states: aut.states().to_vec(), mats })
}

/// Bracket `[lo, hi]` on the joint spectral radius of a matrix family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JsrBracket {
    pub lo: f64,
    pub hi: f64,
    /// Longest product length actually enumerated.
    pub depth: usize,
}

/// Rigorous two-sided bounds on the joint spectral radius.
///
/// * `lo` is the largest `ρ(P)^{1/k}` over products of length `k <= depth`;
/// * `hi` is the smaller of `min_k max_P ‖P‖_∞^{1/k}` and the common
///   sub-eigenvalue bound `max_{y,S} (M_y w)_S / w_S` for a positive `w`
///   found by monotone iteration.
///
/// `depth` is reduced until the product count fits [`PRODUCT_BUDGET`].
pub fn jsr_bounds(mats: &[IntMatrix], depth: usize) -> Result<JsrBracket> {
    let depth = depth.max(1);
    let dim = mats.first().map_or(0, IntMatrix::dim);
    if dim == 0 || mats.iter().all(IntMatrix::is_zero) {
        return Ok(JsrBracket { lo: 0.0, hi: 0.0, depth });
    }
    let depth = affordable_depth(mats.len() as u64, depth);
    let real: Vec<RealMatrix> = mats.iter().map(IntMatrix::to_real).collect();

    let mut search = ProductSearch { mats: &real, depth, norm_max: vec![0.0; depth + 1], lo: 0.0, word: Vec::new() };
    search.visit(None)?;

    let mut hi = f64::INFINITY;
    for (k, &norm) in search.norm_max.iter().enumerate().skip(1) {
        hi = hi.min(norm.powf(1.0 / k as f64));
    }
    hi = hi.min(cone_bound(&real));
    let lo = search.lo.min(hi);
    Ok(JsrBracket { lo, hi, depth })
}

fn affordable_depth(letters: u64, wanted: usize) -> usize {
    let mut total = 0u64;
    let mut level = 1u64;
    for k in 1..=wanted {
        level = level.saturating_mul(letters);
        total = total.saturating_add(level);
        if total > PRODUCT_BUDGET {
            return (k - 1).max(1);
        }
    }
    wanted
}

struct ProductSearch<'a> {
    mats: &'a [RealMatrix],
    depth: usize,
    norm_max: Vec<f64>,
    lo: f64,
    word: Vec<usize>,
}

impl ProductSearch<'_> {
    fn visit(&mut self, prefix: Option<&RealMatrix>) -> Result<()> {
        let k = self.word.len() + 1;
        for (letter, m) in self.mats.iter().enumerate() {
            let product = match prefix {
                Some(p) => p.mul(m),
                None => m.clone(),
            };
            // every extension of a zero product is zero
            if product.is_zero() {
                continue;
            }
            self.word.push(letter);
            let norm = product.max_row_sum();
            self.norm_max[k] = self.norm_max[k].max(norm);
            let root_k = 1.0 / k as f64;
            // rotations share a spectral radius, so only necklace
            // representatives are evaluated
            if norm.powf(root_k) > self.lo && is_lyndon(&self.word) {
                let rho = spectral_radius(&product, 1e-12 * norm.max(1.0))?;
                self.lo = self.lo.max(rho.powf(root_k));
            }
            if k < self.depth {
                self.visit(Some(&product))?;
            }
            self.word.pop();
        }
        Ok(())
    }
}

fn is_lyndon(word: &[usize]) -> bool {
    (1..word.len()).all(|r| word[r..].iter().chain(&word[..r]).cmp(word.iter()) == std::cmp::Ordering::Greater)
}

/// Smallest `r` seen with `M_y w <= r w` for all `y`, iterating
/// `w <- max_y M_y w + w` from the all-ones vector.
fn cone_bound(mats: &[RealMatrix]) -> f64 {
    let d = mats[0].dim();
    let mut w = vec![1.0; d];
    let mut img = vec![0.0; d];
    let mut next = vec![0.0f64; d];
    let mut best = f64::INFINITY;
    for _ in 0..CONE_ITERATIONS {
        next.iter_mut().for_each(|v| *v = 0.0);
        for m in mats {
            m.mul_vec(&w, &mut img);
            for (n, &v) in next.iter_mut().zip(&img) {
                *n = n.max(v);
            }
        }
        let mut ratio_hi: f64 = 0.0;
        let mut ratio_lo = f64::INFINITY;
        let mut top: f64 = 0.0;
        for i in 0..d {
            next[i] += w[i];
            let r = next[i] / w[i];
            ratio_hi = ratio_hi.max(r);
            ratio_lo = ratio_lo.min(r);
            top = top.max(next[i]);
        }
        best = best.min(ratio_hi - 1.0);
        if ratio_hi - ratio_lo <= 1e-14 * ratio_hi {
            break;
        }
        for i in 0..d {
            w[i] = next[i] / top;
            if w[i] < f64::MIN_POSITIVE {
                // degenerate direction; the bound found so far stands
                return best;
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::model::{component_system, decompose};

    fn component_mats(sys: &CarpetSystem, i: usize) -> FiberMatrices {
        let dec = decompose(sys);
        fiber_matrices(&component_system(sys, &dec.components[i])).unwrap()
    }

    #[test]
    fn fiber_matrix_examples() {
        let ab = fixtures::ex_ab();
        let b = component_mats(&ab, 1);
        let rows: Vec<_> = b.mats.iter().map(IntMatrix::rows).collect();
        assert_eq!(rows, vec![vec![vec![1]], vec![vec![1]], vec![vec![4]]]);

        let mc = component_mats(&fixtures::ex_mc(), 0);
        assert_eq!(mc.mats.iter().map(IntMatrix::rows).collect::<Vec<_>>(), vec![vec![vec![2]], vec![vec![1]]]);

        let col = component_mats(&fixtures::ex_col(), 0);
        assert_eq!(col.mats.iter().map(IntMatrix::rows).collect::<Vec<_>>(), vec![vec![vec![1]], vec![vec![1]]]);
    }

    #[test]
    fn scalar_brackets_are_exact() {
        let b = component_mats(&fixtures::ex_ab(), 1);
        let br = jsr_bounds(&b.mats, 1).unwrap();
        assert_eq!((br.lo, br.hi), (4.0, 4.0));
        let mc = component_mats(&fixtures::ex_mc(), 0);
        let br = jsr_bounds(&mc.mats, 1).unwrap();
        assert_eq!((br.lo, br.hi), (2.0, 2.0));
    }

    #[test]
    fn zero_family() {
        let br = jsr_bounds(&[IntMatrix::zeros(2), IntMatrix::zeros(2)], 3).unwrap();
        assert_eq!((br.lo, br.hi), (0.0, 0.0));
    }

    #[test]
    fn swap_pair_needs_products() {
        // JSR of {[[0,2],[0,0]], [[0,0],[2,0]]} is 2 (the product has rho 4)
        let a = IntMatrix::from_rows(&[vec![0, 2], vec![0, 0]]);
        let b = IntMatrix::from_rows(&[vec![0, 0], vec![2, 0]]);
        let br = jsr_bounds(&[a, b], 4).unwrap();
        assert!((br.lo - 2.0).abs() < 1e-9, "{br:?}");
        assert!(br.hi >= br.lo && br.hi <= 2.0 + 1e-9, "{br:?}");
    }

    #[test]
    fn lyndon_words() {
        assert!(is_lyndon(&[0]));
        assert!(is_lyndon(&[0, 1]));
        assert!(!is_lyndon(&[1, 0]));
        assert!(!is_lyndon(&[0, 0]));
        assert!(is_lyndon(&[0, 0, 1]));
        assert!(!is_lyndon(&[0, 1, 0, 1]));
    }

    #[test]
    fn depth_is_capped() {
        assert_eq!(affordable_depth(3, 30), 14);
        assert_eq!(affordable_depth(2, 5), 5);
    }
}

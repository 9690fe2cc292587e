//! Topological entropies of the digit shifts and the projection dimensions
//! built from them. Entropies are in nats throughout.

use serde::Serialize;

use crate::automata::{determinize, fiber_matrices, growth_rate, jsr_bounds, singletons, Alphabet, VertexSet};
use crate::error::Result;
use crate::model::{component_system, CarpetSystem, Component, ComponentDecomposition};

pub const DEFAULT_TOL: f64 = 1e-10;

/// `dim_B π(X_v)` (which is also its Hausdorff dimension): the growth rate
/// of distinct second-digit strings readable from `v`, in base `m`.
pub fn projection_dim(system: &CarpetSystem, v: usize, tol: f64) -> Result<f64> {
    let aut = determinize(system, Alphabet::Y, &[VertexSet::singleton(v)])?;
    let rho = growth_rate(&aut, aut.starts()[0], tol)?;
    Ok((rho.max(1.0).ln() / f64::from(system.m()).ln()).clamp(0.0, 1.0))
}

/// Projection dimension of every vertex, indexed like `system.vertices()`.
pub fn lambda_table(system: &CarpetSystem, tol: f64) -> Result<Vec<f64>> {
    (0..system.vertex_count()).map(|v| projection_dim(system, v, tol)).collect()
}

fn log_growth(system: &CarpetSystem, alphabet: Alphabet, tol: f64) -> Result<f64> {
    let aut = determinize(system, alphabet, &singletons(system))?;
    let rho = crate::automata::spectral_radius(&aut.adjacency_matrix(), tol)?;
    Ok(rho.max(1.0).ln())
}

/// Entropy of the digit-pair shift of one component.
pub fn pair_entropy(system: &CarpetSystem, component: &Component, tol: f64) -> Result<f64> {
    log_growth(&component_system(system, component), Alphabet::XY, tol)
}

/// Entropy of the projected (second-digit) shift of one component.
pub fn proj_entropy(system: &CarpetSystem, component: &Component, tol: f64) -> Result<f64> {
    log_growth(&component_system(system, component), Alphabet::Y, tol)
}

/// Bracket on the largest fiber entropy over second-digit sequences of one
/// component, from products of its fiber matrices up to length `depth`.
pub fn fiber_entropy_bracket(system: &CarpetSystem, component: &Component, depth: usize) -> Result<(f64, f64)> {
    let fibers = fiber_matrices(&component_system(system, component))?;
    let br = jsr_bounds(&fibers.mats, depth)?;
    // every sequence in the projected shift has at least one fiber point
    Ok((br.lo.max(1.0).ln(), br.hi.max(1.0).ln()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComponentEntropy {
    pub vertices: Vec<String>,
    pub h_pair: f64,
    pub h_proj: f64,
    pub fiber_lo: f64,
    pub fiber_hi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropyReport {
    /// Projection dimension per vertex.
    pub lambda: Vec<f64>,
    pub components: Vec<ComponentEntropy>,
    pub tol: f64,
    pub fiber_depth: usize,
}

impl EntropyReport {
    /// Largest projected entropy over the components in `set`.
    pub fn max_proj(&self, set: &[usize]) -> f64 {
        set.iter().map(|&j| self.components[j].h_proj).fold(0.0, f64::max)
    }
}

pub fn analyze(
    system: &CarpetSystem,
    dec: &ComponentDecomposition,
    fiber_depth: usize,
    tol: f64,
) -> Result<EntropyReport> {
    let lambda = lambda_table(system, tol)?;
    let mut components = Vec::with_capacity(dec.component_count());
    for c in &dec.components {
        let (fiber_lo, fiber_hi) = fiber_entropy_bracket(system, c, fiber_depth)?;
        components.push(ComponentEntropy {
            vertices: c.vertices.iter().map(|&v| system.vertex_name(v).to_string()).collect(),
            h_pair: pair_entropy(system, c, tol)?,
            h_proj: proj_entropy(system, c, tol)?,
            fiber_lo,
            fiber_hi,
        });
    }
    Ok(EntropyReport { lambda, components, tol, fiber_depth })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::model::decompose;

    const EPS: f64 = 1e-12;

    #[test]
    fn projection_dims() {
        let ab = fixtures::ex_ab();
        assert!((projection_dim(&ab, 0, DEFAULT_TOL).unwrap() - 1.0).abs() < EPS);
        assert!((projection_dim(&ab, 1, DEFAULT_TOL).unwrap() - 1.0).abs() < EPS);
        assert!((projection_dim(&fixtures::ex_mc(), 0, DEFAULT_TOL).unwrap() - 1.0).abs() < EPS);
        assert_eq!(projection_dim(&fixtures::ex_pt(), 0, DEFAULT_TOL).unwrap(), 0.0);
    }

    #[test]
    fn pair_and_projected_entropies() {
        let ab = fixtures::ex_ab();
        let dec = decompose(&ab);
        assert!((pair_entropy(&ab, &dec.components[0], DEFAULT_TOL).unwrap() - 6f64.ln()).abs() < EPS);
        assert!((proj_entropy(&ab, &dec.components[1], DEFAULT_TOL).unwrap() - 3f64.ln()).abs() < EPS);

        for (sys, pair, proj) in [
            (fixtures::ex_full(), 6f64.ln(), 2f64.ln()),
            (fixtures::ex_pt(), 0.0, 0.0),
            (fixtures::ex_mc(), 3f64.ln(), 2f64.ln()),
            (fixtures::ex_col(), 2f64.ln(), 2f64.ln()),
        ] {
            let dec = decompose(&sys);
            assert!((pair_entropy(&sys, &dec.components[0], DEFAULT_TOL).unwrap() - pair).abs() < EPS);
            assert!((proj_entropy(&sys, &dec.components[0], DEFAULT_TOL).unwrap() - proj).abs() < EPS);
        }
    }

    #[test]
    fn fiber_brackets() {
        let ab = fixtures::ex_ab();
        let dec = decompose(&ab);
        let (lo, hi) = fiber_entropy_bracket(&ab, &dec.components[1], 1).unwrap();
        assert!((lo - 4f64.ln()).abs() < EPS && (hi - 4f64.ln()).abs() < EPS);

        let mc = fixtures::ex_mc();
        let (lo, hi) = fiber_entropy_bracket(&mc, &decompose(&mc).components[0], 1).unwrap();
        assert!((lo - 2f64.ln()).abs() < EPS && (hi - 2f64.ln()).abs() < EPS);

        let pt = fixtures::ex_pt();
        assert_eq!(fiber_entropy_bracket(&pt, &decompose(&pt).components[0], 1).unwrap(), (0.0, 0.0));
    }
}

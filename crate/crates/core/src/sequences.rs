//! Exact depth-k enumeration of the weighted class counts behind the
//! Assouad (`alpha`) and lower (`beta`) dimensions, and of the maximal class
//! count (`tau`).
//!
//! Every traversal walks second-digit strings depth first. At each node it
//! keeps, for the current string `y`, the number of first-digit strings that
//! lead from the start vertex to each subset state of the XY automaton; a
//! state is the terminal set `t(v,[w])` of the corresponding class.

use std::collections::HashMap;

use num_bigint::BigUint;
use serde::Serialize;

use crate::automata::{
    count_words, determinize, singletons, transition_monoid, Alphabet, DetAutomaton, Letter, TransitionMonoid,
    VertexSet,
};
use crate::error::{CarpetError, Result};
use crate::model::{CarpetSystem, ComponentDecomposition};

/// Cap on the number of (start, second-digit prefix) nodes one traversal visits.
pub const NODE_BUDGET: u128 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SequenceKind {
    Alpha,
    Beta,
    Tau,
}

/// Terminal set of a group of classes and how many classes share it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LeafCount {
    pub subset: Vec<usize>,
    pub classes: u128,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Witness {
    Alpha {
        vertex: usize,
        y: Vec<u32>,
        leaves: Vec<LeafCount>,
    },
    Beta {
        subset: Vec<usize>,
        vertex: usize,
        y: Vec<u32>,
        y_suffix: Vec<u32>,
        leaves: Vec<LeafCount>,
    },
    Tau {
        vertex: usize,
        count: String,
    },
    /// No (y, suffix) pair has a positive weighted sum; the term is 1 by convention.
    Degenerate,
}

/// One exactly enumerated sequence term; `value` is its natural log.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SequenceValue {
    pub k: usize,
    pub kind: SequenceKind,
    pub value: f64,
    pub witness: Witness,
}

/// `max λ` over a terminal set, 0 for the empty set.
pub fn eta(lambda: &[f64], subset: Option<&VertexSet>) -> f64 {
    subset.map_or(0.0, |s| s.iter().map(|v| lambda[v]).fold(0.0, f64::max))
}

/// `max λ` over the image of the Y-automaton state `state` under monoid
/// element `element`; 0 when the image is dead.
pub fn theta(lambda: &[f64], y_aut: &DetAutomaton, monoid: &TransitionMonoid, state: usize, element: usize) -> f64 {
    eta(lambda, monoid.apply(element, state).map(|s| y_aut.state(s)))
}

/// Natural log of `Σ exp(t)` over `terms`, shifted by the maximum and summed
/// with Kahan compensation. Returns `-inf` for no terms.
pub(crate) fn log_sum_exp(terms: &[f64]) -> f64 {
    let top = terms.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if top == f64::NEG_INFINITY {
        return top;
    }
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for &t in terms {
        let y = (t - top).exp() - comp;
        let s = sum + y;
        comp = (s - sum) - y;
        sum = s;
    }
    top + sum.ln()
}

/// Per-y-prefix class counts: sparse `(xy state, classes)` sorted by state.
type Frontier = Vec<(usize, u128)>;

/// Shared automata and tables for all sequence computations on one system.
pub struct SequenceEngine<'a> {
    system: &'a CarpetSystem,
    lambda: Vec<f64>,
    tilde_v: Vec<usize>,
    xy: DetAutomaton,
    /// `y_succ[state][y]`: successors under `(x, y)`, one per `x`.
    y_succ: Vec<Vec<Vec<usize>>>,
    /// Natural log of `n`.
    ln_n: f64,
    /// `η` of each XY state.
    eta_of: Vec<f64>,
}

/// Smallest qualifying β value at one depth: (value, y, monoid element, leaves).
type BetaBest = Option<(f64, Vec<u32>, usize, Vec<LeafCount>)>;

/// Lower-dimension data: the monoid of the Y automaton over all XY states
/// and the distinct `θ` profiles it induces on XY states.
struct BetaTables {
    monoid: TransitionMonoid,
    /// (θ per XY state, index of one monoid element inducing it)
    profiles: Vec<(Vec<f64>, usize)>,
    candidates: Vec<VertexSet>,
}

impl<'a> SequenceEngine<'a> {
    pub fn new(system: &'a CarpetSystem, dec: &ComponentDecomposition, lambda: &[f64]) -> Result<Self> {
        let mut starts = singletons(system);
        starts.push(VertexSet::all(system.vertex_count()));
        let xy = determinize(system, Alphabet::XY, &starts)?;
        let m = system.m() as usize;
        let y_succ =
            (0..xy.state_count()).map(|s| (0..m).map(|y| xy.y_successors(s, y as u32).collect()).collect()).collect();
        let eta_of = xy.states().iter().map(|s| eta(lambda, Some(s))).collect();
        Ok(SequenceEngine {
            system,
            lambda: lambda.to_vec(),
            tilde_v: dec.tilde_v.clone(),
            xy,
            y_succ,
            ln_n: f64::from(system.n()).ln(),
            eta_of,
        })
    }

    pub fn xy_automaton(&self) -> &DetAutomaton {
        &self.xy
    }

    fn start_of(&self, v: usize) -> usize {
        self.xy.starts()[v]
    }

    /// Number of traversal nodes needed for depths `1..=k` from `starts`.
    fn node_count(&self, starts: &[usize], k: usize) -> Result<u128> {
        let y_aut = determinize(self.system, Alphabet::Y, &singletons(self.system))?;
        let mut total = 0u128;
        for &v in starts {
            for d in 1..=k {
                let c = count_words(&y_aut, y_aut.starts()[v], d);
                total = total.saturating_add(u128::try_from(c).unwrap_or(u128::MAX));
            }
        }
        Ok(total)
    }

    /// Largest `k <= wanted` whose traversal from `starts` fits the budget.
    fn feasible(&self, starts: &[usize], wanted: usize) -> Result<usize> {
        let mut k = 0;
        while k < wanted && self.node_count(starts, k + 1)? <= NODE_BUDGET {
            k += 1;
        }
        Ok(k)
    }

    /// Largest depth `<= wanted` the given sequence can be enumerated to.
    pub fn feasible_depth(&self, kind: SequenceKind, wanted: usize) -> Result<usize> {
        match kind {
            SequenceKind::Alpha => self.feasible(&self.tilde_v, wanted),
            SequenceKind::Beta => {
                let starts = self.beta_vertices(&self.candidates());
                self.feasible(&starts, wanted)
            }
            SequenceKind::Tau => Ok(wanted),
        }
    }

    fn check_budget(&self, starts: &[usize], kmax: usize) -> Result<()> {
        if kmax == 0 {
            return Err(CarpetError::InvalidArgument("depth must be at least 1".into()));
        }
        let feasible = self.feasible(starts, kmax)?;
        if feasible < kmax {
            return Err(CarpetError::EnumerationBudget { requested: kmax, feasible });
        }
        Ok(())
    }

    fn step(&self, frontier: &[(usize, u128)], y: usize, depth: usize, scratch: &mut [u128]) -> Result<Frontier> {
        let mut touched = Vec::new();
        for &(s, c) in frontier {
            for &t in &self.y_succ[s][y] {
                if scratch[t] == 0 {
                    touched.push(t);
                }
                scratch[t] = scratch[t].checked_add(c).ok_or(CarpetError::CountOverflow(depth))?;
            }
        }
        touched.sort_unstable();
        Ok(touched
            .into_iter()
            .map(|t| {
                let c = scratch[t];
                scratch[t] = 0;
                (t, c)
            })
            .collect())
    }

    /// Depth-first walk over second-digit strings of length `1..=kmax` from
    /// `{v}`; `visit(depth, y, frontier)` runs at every nonempty node.
    fn walk<F>(&self, v: usize, kmax: usize, visit: &mut F) -> Result<()>
    where
        F: FnMut(usize, &[u32], &[(usize, u128)]),
    {
        let mut scratch = vec![0u128; self.xy.state_count()];
        let mut y = Vec::with_capacity(kmax);
        let root = vec![(self.start_of(v), 1u128)];
        self.walk_from(&root, kmax, &mut y, &mut scratch, visit)
    }

    fn walk_from<F>(
        &self,
        frontier: &[(usize, u128)],
        kmax: usize,
        y: &mut Vec<u32>,
        scratch: &mut [u128],
        visit: &mut F,
    ) -> Result<()>
    where
        F: FnMut(usize, &[u32], &[(usize, u128)]),
    {
        let depth = y.len() + 1;
        for digit in 0..self.system.m() as usize {
            let next = self.step(frontier, digit, depth, scratch)?;
            if next.is_empty() {
                continue;
            }
            y.push(digit as u32);
            visit(depth, y, &next);
            if depth < kmax {
                self.walk_from(&next, kmax, y, scratch, visit)?;
            }
            y.pop();
        }
        Ok(())
    }

    fn weighted_log_sum(
        &self,
        depth: usize,
        frontier: &[(usize, u128)],
        exponent: impl Fn(usize) -> Option<f64>,
    ) -> f64 {
        let scale = depth as f64 * self.ln_n;
        let terms: Vec<f64> =
            frontier.iter().filter_map(|&(s, c)| exponent(s).map(|e| (c as f64).ln() + scale * e)).collect();
        log_sum_exp(&terms)
    }

    fn leaves(&self, frontier: &[(usize, u128)]) -> Vec<LeafCount> {
        frontier.iter().map(|&(s, c)| LeafCount { subset: self.xy.state(s).as_slice().to_vec(), classes: c }).collect()
    }

    /// `log α_k` for `k = 1..=kmax`.
    pub fn alpha(&self, kmax: usize) -> Result<Vec<SequenceValue>> {
        self.check_budget(&self.tilde_v, kmax)?;
        let mut best: Vec<Option<SequenceValue>> = vec![None; kmax + 1];
        for &v in &self.tilde_v {
            self.walk(v, kmax, &mut |d, y, frontier| {
                let value = self.weighted_log_sum(d, frontier, |s| Some(self.eta_of[s]));
                if best[d].as_ref().is_none_or(|b| value > b.value) {
                    best[d] = Some(SequenceValue {
                        k: d,
                        kind: SequenceKind::Alpha,
                        value,
                        witness: Witness::Alpha { vertex: v, y: y.to_vec(), leaves: self.leaves(frontier) },
                    });
                }
            })?;
        }
        Ok(best.into_iter().skip(1).map(|b| b.expect("every vertex reads some string")).collect())
    }

    /// Maximum over `v ∈ Ṽ`, `y`, and every second-digit suffix of the
    /// θ-weighted class sum (no positivity filter), as natural logs.
    pub fn theta_weighted_max(&self, kmax: usize) -> Result<Vec<f64>> {
        self.check_budget(&self.tilde_v, kmax)?;
        let tables = self.beta_tables()?;
        let mut best = vec![f64::NEG_INFINITY; kmax + 1];
        for &v in &self.tilde_v {
            self.walk(v, kmax, &mut |d, _, frontier| {
                for (profile, _) in &tables.profiles {
                    let value = self.weighted_log_sum(d, frontier, |s| Some(profile[s]));
                    best[d] = best[d].max(value);
                }
            })?;
        }
        Ok(best.into_iter().skip(1).collect())
    }

    /// Terminal sets `t([w])` of words of length at least `#V`: the states
    /// reachable from the full-set start at depth exactly `#V`, closed
    /// under transitions.
    pub fn candidates(&self) -> Vec<VertexSet> {
        let full = *self.xy.starts().last().expect("full-set start present");
        let mut layer = vec![full];
        for _ in 0..self.system.vertex_count() {
            let mut next: Vec<usize> =
                layer.iter().flat_map(|&s| self.xy.transitions(s).iter().map(|&(_, t)| t)).collect();
            next.sort_unstable();
            next.dedup();
            layer = next;
        }
        let mut seen = vec![false; self.xy.state_count()];
        let mut work = layer;
        for &s in &work {
            seen[s] = true;
        }
        while let Some(s) = work.pop() {
            for &(_, t) in self.xy.transitions(s) {
                if !seen[t] {
                    seen[t] = true;
                    work.push(t);
                }
            }
        }
        let mut out: Vec<VertexSet> =
            (0..self.xy.state_count()).filter(|&s| seen[s]).map(|s| self.xy.state(s).clone()).collect();
        out.sort();
        out
    }

    fn beta_vertices(&self, candidates: &[VertexSet]) -> Vec<usize> {
        let mut vs: Vec<usize> = candidates.iter().flat_map(|s| s.iter()).collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    }

    fn beta_tables(&self) -> Result<BetaTables> {
        let y_aut = determinize(self.system, Alphabet::Y, self.xy.states())?;
        let monoid = transition_monoid(&y_aut)?;
        let mut profiles: Vec<(Vec<f64>, usize)> = Vec::new();
        let mut seen: HashMap<Vec<u64>, usize> = HashMap::new();
        for g in 0..monoid.len() {
            let profile: Vec<f64> =
                y_aut.starts().iter().map(|&ys| theta(&self.lambda, &y_aut, &monoid, ys, g)).collect();
            let key: Vec<u64> = profile.iter().map(|t| t.to_bits()).collect();
            if let std::collections::hash_map::Entry::Vacant(e) = seen.entry(key) {
                e.insert(profiles.len());
                profiles.push((profile, g));
            }
        }
        Ok(BetaTables { monoid, profiles, candidates: self.candidates() })
    }

    /// `log β_k` for `k = 1..=kmax`.
    ///
    /// For each start vertex the inner minimum runs over second-digit strings
    /// `y` of length `k` and every suffix class (monoid element), keeping only
    /// pairs with a positive θ on some class; classes with θ = 0 contribute
    /// nothing to the sum. Vertices with no such pair are skipped in the
    /// maximum over a candidate set, and a depth with no qualifying pair at
    /// all gets `β_k = 1`.
    pub fn beta(&self, kmax: usize) -> Result<Vec<SequenceValue>> {
        let tables = self.beta_tables()?;
        let vertices = self.beta_vertices(&tables.candidates);
        self.check_budget(&vertices, kmax)?;

        // per vertex and depth: minimal qualifying value and its witness
        let mut inner: HashMap<usize, Vec<BetaBest>> = HashMap::new();
        for &v in &vertices {
            let mut best: Vec<BetaBest> = vec![None; kmax + 1];
            self.walk(v, kmax, &mut |d, y, frontier| {
                for (profile, g) in &tables.profiles {
                    let value = self.weighted_log_sum(d, frontier, |s| (profile[s] > 0.0).then_some(profile[s]));
                    if value == f64::NEG_INFINITY {
                        continue;
                    }
                    if best[d].as_ref().is_none_or(|b| value < b.0) {
                        best[d] = Some((value, y.to_vec(), *g, self.leaves(frontier)));
                    }
                }
            })?;
            inner.insert(v, best);
        }

        let mut out = Vec::with_capacity(kmax);
        // `inner` is keyed by vertex first, so the depth loop stays explicit
        #[allow(clippy::needless_range_loop)]
        for d in 1..=kmax {
            let mut best: Option<SequenceValue> = None;
            for s in &tables.candidates {
                let top = s
                    .iter()
                    .filter_map(|v| inner[&v][d].as_ref().map(|b| (v, b)))
                    .max_by(|a, b| a.1 .0.total_cmp(&b.1 .0));
                let Some((v, (value, y, g, leaves))) = top else { continue };
                if best.as_ref().is_none_or(|b| *value < b.value) {
                    best = Some(SequenceValue {
                        k: d,
                        kind: SequenceKind::Beta,
                        value: *value,
                        witness: Witness::Beta {
                            subset: s.as_slice().to_vec(),
                            vertex: v,
                            y: y.clone(),
                            y_suffix: tables.monoid.words[*g].clone(),
                            leaves: leaves.clone(),
                        },
                    });
                }
            }
            out.push(best.unwrap_or(SequenceValue {
                k: d,
                kind: SequenceKind::Beta,
                value: 0.0,
                witness: Witness::Degenerate,
            }));
        }
        Ok(out)
    }

    /// `log τ_k` for `k = 1..=kmax`: the largest number of classes of
    /// length-k words from a single vertex.
    pub fn tau(&self, kmax: usize) -> Vec<SequenceValue> {
        (1..=kmax)
            .map(|k| {
                let (vertex, count) = (0..self.system.vertex_count())
                    .map(|v| (v, count_words(&self.xy, self.start_of(v), k)))
                    .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
                    .expect("system has vertices");
                SequenceValue {
                    k,
                    kind: SequenceKind::Tau,
                    value: biguint_ln(&count),
                    witness: Witness::Tau { vertex, count: count.to_string() },
                }
            })
            .collect()
    }

    /// Recomputes a term from its witness alone.
    pub fn evaluate_witness(&self, value: &SequenceValue) -> Result<f64> {
        let k = value.k;
        match &value.witness {
            Witness::Alpha { vertex, y, .. } => {
                let frontier = self.frontier_along(*vertex, y)?;
                Ok(self.weighted_log_sum(k, &frontier, |s| Some(self.eta_of[s])))
            }
            Witness::Beta { vertex, y, y_suffix, .. } => {
                let frontier = self.frontier_along(*vertex, y)?;
                let y_aut = determinize(self.system, Alphabet::Y, self.xy.states())?;
                let suffix: Vec<Letter> = y_suffix.iter().map(|&y| Letter { x: 0, y }).collect();
                Ok(self.weighted_log_sum(k, &frontier, |s| {
                    let start = y_aut.find(self.xy.state(s)).expect("every XY state is a Y start");
                    let th = eta(&self.lambda, y_aut.run(start, &suffix).map(|t| y_aut.state(t)));
                    (th > 0.0).then_some(th)
                }))
            }
            Witness::Tau { vertex, .. } => Ok(biguint_ln(&count_words(&self.xy, self.start_of(*vertex), k))),
            Witness::Degenerate => Ok(0.0),
        }
    }

    fn frontier_along(&self, v: usize, y: &[u32]) -> Result<Frontier> {
        let mut scratch = vec![0u128; self.xy.state_count()];
        let mut frontier = vec![(self.start_of(v), 1u128)];
        for (i, &digit) in y.iter().enumerate() {
            frontier = self.step(&frontier, digit as usize, i + 1, &mut scratch)?;
        }
        Ok(frontier)
    }
}

pub(crate) fn biguint_ln(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        let f: f64 = x.to_string().parse().expect("decimal digits parse");
        return f.ln();
    }
    // shift down to keep the mantissa in range
    let shift = bits - 64;
    let top: BigUint = x >> shift;
    let f: f64 = top.to_string().parse().expect("decimal digits parse");
    f.ln() + shift as f64 * std::f64::consts::LN_2
}

/// `log α_k` for a single `k`.
pub fn alpha_k(system: &CarpetSystem, dec: &ComponentDecomposition, lambda: &[f64], k: usize) -> Result<SequenceValue> {
    let mut seq = SequenceEngine::new(system, dec, lambda)?.alpha(k)?;
    Ok(seq.pop().expect("k >= 1"))
}

/// `log β_k` for a single `k`.
pub fn beta_k(system: &CarpetSystem, dec: &ComponentDecomposition, lambda: &[f64], k: usize) -> Result<SequenceValue> {
    let mut seq = SequenceEngine::new(system, dec, lambda)?.beta(k)?;
    Ok(seq.pop().expect("k >= 1"))
}

/// `log τ_k` for a single `k`.
pub fn tau_k(system: &CarpetSystem, k: usize) -> Result<SequenceValue> {
    let dec = crate::model::decompose(system);
    let lambda = vec![0.0; system.vertex_count()];
    let mut seq = SequenceEngine::new(system, &dec, &lambda)?.tau(k);
    Ok(seq.pop().expect("k >= 1"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropy::{lambda_table, DEFAULT_TOL};
    use crate::fixtures;
    use crate::model::decompose;

    const EPS: f64 = 1e-12;

    fn engine_parts(sys: &CarpetSystem) -> (ComponentDecomposition, Vec<f64>) {
        (decompose(sys), lambda_table(sys, DEFAULT_TOL).unwrap())
    }

    #[test]
    fn log_sum_exp_matches_direct_sum() {
        let terms = [1f64.ln(), 2f64.ln(), 3f64.ln()];
        assert!((log_sum_exp(&terms) - 6f64.ln()).abs() < EPS);
        assert_eq!(log_sum_exp(&[]), f64::NEG_INFINITY);
        // far-apart magnitudes stay finite
        assert!((log_sum_exp(&[1000.0, 0.0]) - 1000.0).abs() < 1e-12);
    }

    #[test]
    fn eta_examples() {
        let lambda = [1.0, 1.0];
        assert_eq!(eta(&lambda, Some(&VertexSet::singleton(1))), 1.0);
        assert_eq!(eta(&lambda, None), 0.0);
        assert_eq!(eta(&[0.0], Some(&VertexSet::singleton(0))), 0.0);
    }

    #[test]
    fn alpha_examples() {
        let mc = fixtures::ex_mc();
        let (dec, lam) = engine_parts(&mc);
        assert!((alpha_k(&mc, &dec, &lam, 1).unwrap().value - 6f64.ln()).abs() < EPS);

        let ab = fixtures::ex_ab();
        let (dec, lam) = engine_parts(&ab);
        let a1 = alpha_k(&ab, &dec, &lam, 1).unwrap();
        assert!((a1.value - 16f64.ln()).abs() < EPS);
        match a1.witness {
            Witness::Alpha { vertex, y, leaves } => {
                assert_eq!((vertex, y), (1, vec![2]));
                assert_eq!(leaves, vec![LeafCount { subset: vec![1], classes: 4 }]);
            }
            other => panic!("unexpected witness {other:?}"),
        }

        let pt = fixtures::ex_pt();
        let (dec, lam) = engine_parts(&pt);
        let seq = SequenceEngine::new(&pt, &dec, &lam).unwrap().alpha(6).unwrap();
        assert!(seq.iter().all(|s| s.value == 0.0));
    }

    #[test]
    fn tau_examples() {
        assert_eq!(tau_k(&fixtures::ex_ab(), 1).unwrap().witness, Witness::Tau { vertex: 0, count: "7".into() });
        assert_eq!(tau_k(&fixtures::ex_mc(), 3).unwrap().witness, Witness::Tau { vertex: 0, count: "27".into() });
        assert_eq!(tau_k(&fixtures::ex_pt(), 5).unwrap().value, 0.0);
    }

    #[test]
    fn theta_examples() {
        let ab = fixtures::ex_ab();
        let lam = lambda_table(&ab, DEFAULT_TOL).unwrap();
        let y_aut = determinize(&ab, Alphabet::Y, &singletons(&ab)).unwrap();
        let mon = transition_monoid(&y_aut).unwrap();
        assert_eq!(theta(&lam, &y_aut, &mon, y_aut.starts()[1], 0), 1.0);

        let mc = fixtures::ex_mc();
        let lam = lambda_table(&mc, DEFAULT_TOL).unwrap();
        let y_aut = determinize(&mc, Alphabet::Y, &singletons(&mc)).unwrap();
        let mon = transition_monoid(&y_aut).unwrap();
        assert_eq!(theta(&lam, &y_aut, &mon, 0, 0), 1.0);

        let sys =
            CarpetSystem::new(3, 2, &["u", "v"], &[("u", "v", 0, 1), ("v", "v", 0, 0), ("v", "v", 1, 1)]).unwrap();
        let lam = lambda_table(&sys, DEFAULT_TOL).unwrap();
        let y_aut = determinize(&sys, Alphabet::Y, &singletons(&sys)).unwrap();
        let mon = transition_monoid(&y_aut).unwrap();
        let dead = (0..mon.len()).find(|&g| mon.apply(g, y_aut.starts()[0]).is_none()).unwrap();
        assert_eq!(theta(&lam, &y_aut, &mon, y_aut.starts()[0], dead), 0.0);
    }

    #[test]
    fn beta_examples() {
        let mc = fixtures::ex_mc();
        let (dec, lam) = engine_parts(&mc);
        assert!((beta_k(&mc, &dec, &lam, 1).unwrap().value - 3f64.ln()).abs() < EPS);

        let ab = fixtures::ex_ab();
        let (dec, lam) = engine_parts(&ab);
        let b1 = beta_k(&ab, &dec, &lam, 1).unwrap();
        assert!((b1.value - 4f64.ln()).abs() < EPS);
        assert!(matches!(b1.witness, Witness::Beta { ref subset, vertex: 1, .. } if subset == &vec![1]));

        let pt = fixtures::ex_pt();
        let (dec, lam) = engine_parts(&pt);
        let b = beta_k(&pt, &dec, &lam, 1).unwrap();
        assert_eq!((b.value, b.witness), (0.0, Witness::Degenerate));
    }

    #[test]
    fn ab_candidates() {
        let ab = fixtures::ex_ab();
        let (dec, lam) = engine_parts(&ab);
        let eng = SequenceEngine::new(&ab, &dec, &lam).unwrap();
        assert_eq!(eng.candidates(), vec![VertexSet::singleton(0), VertexSet::all(2), VertexSet::singleton(1)]);
    }

    #[test]
    fn witnesses_round_trip() {
        for (_, sys) in fixtures::all() {
            let (dec, lam) = engine_parts(&sys);
            let eng = SequenceEngine::new(&sys, &dec, &lam).unwrap();
            let all = [eng.alpha(5).unwrap(), eng.beta(5).unwrap(), eng.tau(5)].concat();
            for s in all {
                assert!((eng.evaluate_witness(&s).unwrap() - s.value).abs() < 1e-12, "{s:?}");
            }
        }
    }

    #[test]
    fn budget_reports_feasible_depth() {
        let full = fixtures::ex_full();
        let (dec, lam) = engine_parts(&full);
        let eng = SequenceEngine::new(&full, &dec, &lam).unwrap();
        // 2 + 4 + ... + 2^k <= 10^7 up to k = 22
        assert_eq!(eng.feasible_depth(SequenceKind::Alpha, 40).unwrap(), 22);
        assert_eq!(eng.alpha(23).unwrap_err(), CarpetError::EnumerationBudget { requested: 23, feasible: 22 });
    }

    #[test]
    fn biguint_log_is_accurate() {
        let big = BigUint::from(6u32).pow(2000);
        assert!((biguint_ln(&big) - 2000.0 * 6f64.ln()).abs() < 1e-9);
        assert_eq!(biguint_ln(&BigUint::from(1u32)), 0.0);
    }
}

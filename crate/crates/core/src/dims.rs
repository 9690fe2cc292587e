//! Box, Assouad, lower and (when it is forced) Hausdorff dimension of a
//! carpet system, assembled from entropies and the α/β sequences.

use serde::Serialize;

use crate::automata::jsr_bounds;
use crate::entropy::{analyze, EntropyReport, DEFAULT_TOL};
use crate::error::{CarpetError, Result};
use crate::model::{decompose, digit_matrices, CarpetSystem, ComponentDecomposition};
use crate::sequences::SequenceEngine;

pub const DEFAULT_K_MAX: usize = 10;
pub const DEFAULT_DIM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BoxAttained {
    pub component: usize,
    pub successor: usize,
}

/// `dim_B X` and the (component, successor) pair attaining the maximum.
pub fn box_dimension(system: &CarpetSystem, dec: &ComponentDecomposition, ent: &EntropyReport) -> (f64, BoxAttained) {
    let (ln_n, ln_m) = logs(system);
    let mut best = (f64::NEG_INFINITY, BoxAttained { component: 0, successor: 0 });
    for (i, c) in ent.components.iter().enumerate() {
        for &j in &dec.successors[i] {
            let value = c.h_pair / ln_n + ent.components[j].h_proj * (1.0 / ln_m - 1.0 / ln_n);
            if value > best.0 {
                best = (value, BoxAttained { component: i, successor: j });
            }
        }
    }
    best
}

fn logs(system: &CarpetSystem) -> (f64, f64) {
    (f64::from(system.n()).ln(), f64::from(system.m()).ln())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AssouadBracket {
    pub lo: f64,
    pub hi: f64,
    pub point: f64,
    /// Component attaining the lower end (smallest index on ties).
    pub dominant_component: usize,
    /// Per-component `[lo, hi]` of the term inside the maximum.
    pub per_component: Vec<(f64, f64)>,
}

/// Bracket on `dim_A X` from the per-component fiber-entropy brackets.
pub fn assouad_dimension(system: &CarpetSystem, dec: &ComponentDecomposition, ent: &EntropyReport) -> AssouadBracket {
    let (ln_n, ln_m) = logs(system);
    let per_component: Vec<(f64, f64)> = ent
        .components
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let proj = ent.max_proj(&dec.successors[i]) / ln_m;
            (c.fiber_lo / ln_n + proj, c.fiber_hi / ln_n + proj)
        })
        .collect();
    let mut dominant = 0;
    for (i, t) in per_component.iter().enumerate() {
        if t.0 > per_component[dominant].0 {
            dominant = i;
        }
    }
    let lo = per_component[dominant].0;
    let hi = per_component.iter().map(|t| t.1).fold(f64::NEG_INFINITY, f64::max);
    AssouadBracket { lo, hi, point: 0.5 * (lo + hi), dominant_component: dominant, per_component }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlphaRoute {
    /// `log α_k / (k log n)` for `k = 1..=K`.
    pub estimates: Vec<f64>,
    /// `log(#V α_k) / (k log n)` for `k = 1..=K`.
    pub upper: Vec<f64>,
    /// Minimum of `upper` over `k >= #V`: an upper bound for `dim_A X`.
    pub upper_envelope: Option<f64>,
}

/// The α-sequence route to `dim_A X`.
pub fn assouad_via_alpha(engine: &SequenceEngine, system: &CarpetSystem, k_max: usize) -> Result<AlphaRoute> {
    let ln_n = logs(system).0;
    let vcount = system.vertex_count();
    let alpha = engine.alpha(k_max)?;
    let estimates: Vec<f64> = alpha.iter().map(|a| a.value / (a.k as f64 * ln_n)).collect();
    let upper: Vec<f64> = alpha.iter().map(|a| ((vcount as f64).ln() + a.value) / (a.k as f64 * ln_n)).collect();
    // submultiplicativity only holds once k >= #V
    let upper_envelope = upper.iter().skip(vcount - 1).copied().reduce(f64::min);
    Ok(AlphaRoute { estimates, upper, upper_envelope })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LowerEstimate {
    /// Running minimum of `sequence`; a finite-depth estimate, not a bound.
    pub estimate: f64,
    /// `log β_k / (k log n)` for `k = 1..=K`.
    pub sequence: Vec<f64>,
}

pub fn lower_dimension(engine: &SequenceEngine, system: &CarpetSystem, k_max: usize) -> Result<LowerEstimate> {
    let ln_n = logs(system).0;
    let sequence: Vec<f64> = engine.beta(k_max)?.iter().map(|b| b.value / (b.k as f64 * ln_n)).collect();
    let estimate = sequence.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(LowerEstimate { estimate, sequence })
}

/// `dim_B π(X) + log JSR{A_j} / log n` for irreducible systems whose
/// vertices each use distinct digit cells, as a bracket.
pub fn corollary_c1(
    system: &CarpetSystem,
    dec: &ComponentDecomposition,
    ent: &EntropyReport,
    depth: usize,
) -> Result<(f64, f64)> {
    if !dec.is_irreducible(system) {
        return Err(CarpetError::NotApplicable("not irreducible".into()));
    }
    for v in 0..system.vertex_count() {
        let mut cells: Vec<(u32, u32)> = system.out_edges(v).map(|e| (e.x, e.y)).collect();
        cells.sort_unstable();
        if cells.windows(2).any(|w| w[0] == w[1]) {
            return Err(CarpetError::NotApplicable(format!("vertex {} reuses a digit cell", system.vertex_name(v))));
        }
    }
    let proj = ent.lambda.iter().copied().fold(0.0, f64::max);
    let br = jsr_bounds(&digit_matrices(system).a_j, depth)?;
    let ln_n = logs(system).0;
    Ok((proj + br.lo.max(1.0).ln() / ln_n, proj + br.hi.max(1.0).ln() / ln_n))
}

/// Outcome of an equality test between bracketed quantities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Fails,
    Inconclusive,
}

impl Verdict {
    /// `a == b` for `a ∈ [a_lo, a_hi]` known to satisfy `a <= b`, `b ∈ [b_lo, b_hi]`.
    fn equal_from_below(a: (f64, f64), b: (f64, f64), tol: f64) -> Verdict {
        if a.0 >= b.1 - tol {
            Verdict::Holds
        } else if a.1 < b.0 - tol {
            Verdict::Fails
        } else {
            Verdict::Inconclusive
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComponentCoincidence {
    pub component: usize,
    /// Box dimension is attained at this component with itself as successor.
    pub box_attained: Verdict,
    /// Assouad dimension is attained at this component with itself as successor.
    pub assouad_attained: Verdict,
    /// `h_pair = h_proj + sup fiber entropy` on this component.
    pub bowen_equality: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Coincidence {
    pub components: Vec<ComponentCoincidence>,
    /// `dim_B X = dim_A X`.
    pub box_equals_assouad: Verdict,
    /// First component satisfying all three conditions.
    pub witness: Option<usize>,
    /// For irreducible systems where the Bowen equality fails: whether
    /// `box < assouad` was confirmed. `None` when not applicable.
    pub irreducible_strict_gap: Option<bool>,
    pub tol: f64,
}

pub fn coincidence(
    system: &CarpetSystem,
    dec: &ComponentDecomposition,
    ent: &EntropyReport,
    box_dim: f64,
    assouad: &AssouadBracket,
    tol: f64,
) -> Coincidence {
    let (ln_n, ln_m) = logs(system);
    let a = (assouad.lo, assouad.hi);
    let components: Vec<ComponentCoincidence> = ent
        .components
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let own_box = c.h_pair / ln_n + c.h_proj * (1.0 / ln_m - 1.0 / ln_n);
            let own_assouad = (c.fiber_lo / ln_n + c.h_proj / ln_m, c.fiber_hi / ln_n + c.h_proj / ln_m);
            let bowen = (c.h_proj + c.fiber_lo, c.h_proj + c.fiber_hi);
            ComponentCoincidence {
                component: i,
                box_attained: Verdict::equal_from_below((own_box, own_box), (box_dim, box_dim), tol),
                assouad_attained: Verdict::equal_from_below(own_assouad, a, tol),
                // h_pair <= h_proj + sup fiber always
                bowen_equality: Verdict::equal_from_below((c.h_pair, c.h_pair), bowen, tol),
            }
        })
        .collect();
    let witness = components
        .iter()
        .find(|c| [c.box_attained, c.assouad_attained, c.bowen_equality].iter().all(|&v| v == Verdict::Holds))
        .map(|c| c.component);
    let irreducible_strict_gap =
        (dec.is_irreducible(system) && components[0].bowen_equality == Verdict::Fails).then_some(box_dim < a.1 - tol);
    Coincidence {
        box_equals_assouad: Verdict::equal_from_below((box_dim, box_dim), a, tol),
        components,
        witness,
        irreducible_strict_gap,
        tol,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReportOptions {
    pub k_max: usize,
    pub tol: f64,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions { k_max: DEFAULT_K_MAX, tol: DEFAULT_DIM_TOL }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AssouadReport {
    pub lo: f64,
    pub hi: f64,
    pub point: f64,
    pub per_component: Vec<(f64, f64)>,
    pub alpha_route: AlphaRoute,
    /// The α-route envelope does not fall below the bracket.
    pub routes_consistent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DimensionReport {
    pub box_dim: f64,
    pub box_attained: BoxAttained,
    pub assouad: AssouadReport,
    pub lower: LowerEstimate,
    /// Equal to the box dimension when the coincidence condition holds.
    pub hausdorff: Option<f64>,
    pub coincidence: Coincidence,
    pub dominant_component: usize,
    pub projection_dims: Vec<f64>,
    pub entropies: EntropyReport,
    pub tol: f64,
    pub k_max: usize,
}

impl DimensionReport {
    pub fn to_json(&self) -> String {
        let mut value = serde_json::to_value(self).expect("report serializes");
        // `box` is a Rust keyword; rename on the way out
        if let Some(obj) = value.as_object_mut() {
            if let Some(b) = obj.remove("box_dim") {
                obj.insert("box".into(), b);
            }
        }
        serde_json::to_string_pretty(&value).expect("report serializes")
    }
}

pub fn dimension_report(system: &CarpetSystem, opts: ReportOptions) -> Result<DimensionReport> {
    if opts.k_max == 0 {
        return Err(CarpetError::InvalidArgument("k_max must be at least 1".into()));
    }
    if opts.tol <= 0.0 || !opts.tol.is_finite() {
        return Err(CarpetError::InvalidArgument(format!("tolerance must be positive, got {}", opts.tol)));
    }
    let dec = decompose(system);
    let ent = analyze(system, &dec, opts.k_max, opts.tol.min(DEFAULT_TOL))?;
    let (box_dim, box_attained) = box_dimension(system, &dec, &ent);
    let bracket = assouad_dimension(system, &dec, &ent);
    let engine = SequenceEngine::new(system, &dec, &ent.lambda)?;
    let alpha_route = assouad_via_alpha(&engine, system, opts.k_max)?;
    let lower = lower_dimension(&engine, system, opts.k_max)?;
    let coincidence = coincidence(system, &dec, &ent, box_dim, &bracket, opts.tol);
    let routes_consistent = alpha_route.upper_envelope.is_none_or(|u| u >= bracket.lo - opts.tol);
    Ok(DimensionReport {
        box_dim,
        box_attained,
        assouad: AssouadReport {
            lo: bracket.lo,
            hi: bracket.hi,
            point: bracket.point,
            per_component: bracket.per_component,
            alpha_route,
            routes_consistent,
        },
        lower,
        hausdorff: coincidence.witness.map(|_| box_dim),
        coincidence,
        dominant_component: bracket.dominant_component,
        projection_dims: ent.lambda.clone(),
        entropies: ent,
        tol: opts.tol,
        k_max: opts.k_max,
    })
}

//! Subset-construction automata over the digit alphabets.
//!
//! Reading the digit string of an admissible word from a vertex set `S`
//! leads to the set of terminal vertices of all words with that digit
//! string. Two words induce the same affine map exactly when their digit
//! strings agree, so the paths of the determinized XY automaton from `{v}`
//! are in bijection with the equivalence classes of words starting at `v`,
//! and the state reached is the terminal set of the class.

mod jsr;
mod monoid;
mod spectral;

pub use jsr::{fiber_matrices, jsr_bounds, FiberMatrices, JsrBracket};
pub use monoid::{transition_monoid, StateMap, TransitionMonoid};
pub use spectral::spectral_radius;

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{CarpetError, Result};
use crate::matrix::RealMatrix;
use crate::model::CarpetSystem;

/// Upper bound on the number of subset states a single construction may create.
pub const STATE_BUDGET: usize = 1 << 20;

/// A nonempty set of vertex indices in canonical (ascending) order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    pub fn singleton(v: usize) -> Self {
        VertexSet(vec![v])
    }

    pub fn all(count: usize) -> Self {
        VertexSet((0..count).collect())
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn label(&self, system: &CarpetSystem) -> String {
        let names: Vec<&str> = self.0.iter().map(|&v| system.vertex_name(v)).collect();
        format!("{{{}}}", names.join(","))
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut v: Vec<usize> = iter.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        VertexSet(v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Alphabet {
    /// Second-axis digits `0..m`.
    Y,
    /// Digit cells `(x, y)`.
    XY,
}

/// A letter of either alphabet; `x` is always 0 for the Y alphabet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub x: u32,
    pub y: u32,
}

impl Letter {
    fn label(self, alphabet: Alphabet) -> String {
        match alphabet {
            Alphabet::Y => self.y.to_string(),
            Alphabet::XY => format!("({},{})", self.x, self.y),
        }
    }
}

/// Reachable part of a subset construction.
#[derive(Debug, Clone)]
pub struct DetAutomaton {
    alphabet: Alphabet,
    states: Vec<VertexSet>,
    /// Outgoing transitions of each state, sorted by letter.
    transitions: Vec<Vec<(Letter, usize)>>,
    starts: Vec<usize>,
    index: HashMap<VertexSet, usize>,
}

/// Determinizes the digit automaton of `system` from the given start sets.
pub fn determinize(system: &CarpetSystem, alphabet: Alphabet, starts: &[VertexSet]) -> Result<DetAutomaton> {
    if starts.is_empty() || starts.iter().any(|s| s.is_empty()) {
        return Err(CarpetError::InvalidArgument("start sets must be nonempty".into()));
    }
    if starts.iter().flat_map(|s| s.iter()).any(|v| v >= system.vertex_count()) {
        return Err(CarpetError::InvalidArgument("start set mentions an unknown vertex".into()));
    }
    let letter_of = |x: u32, y: u32| match alphabet {
        Alphabet::Y => Letter { x: 0, y },
        Alphabet::XY => Letter { x, y },
    };
    // per-vertex out-edges grouped by letter
    let mut by_vertex: Vec<BTreeMap<Letter, Vec<usize>>> = vec![BTreeMap::new(); system.vertex_count()];
    for e in system.edges() {
        by_vertex[e.from].entry(letter_of(e.x, e.y)).or_default().push(e.to);
    }

    let mut aut = DetAutomaton {
        alphabet,
        states: Vec::new(),
        transitions: Vec::new(),
        starts: Vec::with_capacity(starts.len()),
        index: HashMap::new(),
    };
    let mut queue = std::collections::VecDeque::new();
    for s in starts {
        let (id, fresh) = aut.intern(s.clone())?;
        if fresh {
            queue.push_back(id);
        }
        aut.starts.push(id);
    }
    while let Some(id) = queue.pop_front() {
        let mut succ: BTreeMap<Letter, Vec<usize>> = BTreeMap::new();
        for v in aut.states[id].iter() {
            for (letter, targets) in &by_vertex[v] {
                succ.entry(*letter).or_default().extend_from_slice(targets);
            }
        }
        let mut row = Vec::with_capacity(succ.len());
        for (letter, targets) in succ {
            let (target, fresh) = aut.intern(targets.into_iter().collect())?;
            if fresh {
                queue.push_back(target);
            }
            row.push((letter, target));
        }
        aut.transitions[id] = row;
    }
    Ok(aut)
}

impl DetAutomaton {
    fn intern(&mut self, set: VertexSet) -> Result<(usize, bool)> {
        if let Some(&id) = self.index.get(&set) {
            return Ok((id, false));
        }
        if self.states.len() >= STATE_BUDGET {
            return Err(CarpetError::StateBudget(self.states.len()));
        }
        let id = self.states.len();
        self.index.insert(set.clone(), id);
        self.states.push(set);
        self.transitions.push(Vec::new());
        Ok((id, true))
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn state(&self, id: usize) -> &VertexSet {
        &self.states[id]
    }

    pub fn states(&self) -> &[VertexSet] {
        &self.states
    }

    /// State ids of the requested starts, in request order.
    pub fn starts(&self) -> &[usize] {
        &self.starts
    }

    pub fn find(&self, set: &VertexSet) -> Option<usize> {
        self.index.get(set).copied()
    }

    pub fn transitions(&self, id: usize) -> &[(Letter, usize)] {
        &self.transitions[id]
    }

    pub fn step(&self, id: usize, letter: Letter) -> Option<usize> {
        let row = &self.transitions[id];
        row.binary_search_by(|(l, _)| l.cmp(&letter)).ok().map(|i| row[i].1)
    }

    /// Follows a whole string; `None` once a transition is undefined.
    pub fn run(&self, id: usize, word: &[Letter]) -> Option<usize> {
        word.iter().try_fold(id, |s, &l| self.step(s, l))
    }

    /// `adj[s][t]` = number of letters leading from `s` to `t`.
    pub fn adjacency_matrix(&self) -> RealMatrix {
        let d = self.states.len();
        let mut rows = vec![vec![0.0; d]; d];
        for (s, row) in self.transitions.iter().enumerate() {
            for &(_, t) in row {
                rows[s][t] += 1.0;
            }
        }
        RealMatrix::from_rows(&rows)
    }

    /// For an XY automaton: successors of `id` under second digit `y`, one
    /// entry per first digit `x` with a defined transition.
    pub fn y_successors(&self, id: usize, y: u32) -> impl Iterator<Item = usize> + '_ {
        self.transitions[id].iter().filter(move |(l, _)| l.y == y).map(|&(_, t)| t)
    }

    /// Graphviz rendering: states labelled by vertex subsets, edges by letters.
    pub fn to_dot(&self, system: &CarpetSystem) -> String {
        let mut out = String::from("digraph automaton {\n  rankdir=LR;\n");
        for (id, s) in self.states.iter().enumerate() {
            let shape = if self.starts.contains(&id) { "doublecircle" } else { "circle" };
            let _ = writeln!(out, "  s{id} [label=\"{}\", shape={shape}];", s.label(system));
        }
        for (id, row) in self.transitions.iter().enumerate() {
            // merge parallel letters onto one edge
            let mut grouped: BTreeMap<usize, Vec<String>> = BTreeMap::new();
            for &(l, t) in row {
                grouped.entry(t).or_default().push(l.label(self.alphabet));
            }
            for (t, labels) in grouped {
                let _ = writeln!(out, "  s{id} -> s{t} [label=\"{}\"];", labels.join(" "));
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Singleton start sets `{v}` for every vertex.
pub fn singletons(system: &CarpetSystem) -> Vec<VertexSet> {
    (0..system.vertex_count()).map(VertexSet::singleton).collect()
}

/// Number of label strings of length `k` readable from `start`.
pub fn count_words(aut: &DetAutomaton, start: usize, k: usize) -> BigUint {
    let mut cur: Vec<BigUint> = vec![BigUint::zero(); aut.state_count()];
    cur[start] = BigUint::one();
    for _ in 0..k {
        let mut next = vec![BigUint::zero(); aut.state_count()];
        for (s, c) in cur.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for &(_, t) in aut.transitions(s) {
                next[t] += c;
            }
        }
        cur = next;
    }
    cur.into_iter().sum()
}

/// Growth rate of the number of strings readable from `start`: the spectral
/// radius of the part of the automaton reachable from it.
pub fn growth_rate(aut: &DetAutomaton, start: usize, tol: f64) -> Result<f64> {
    let adj = aut.adjacency_matrix();
    let seen = crate::graph::reachable_from(&adj.support(), [start]);
    let keep: Vec<usize> = (0..aut.state_count()).filter(|&s| seen[s]).collect();
    spectral_radius(&adj.submatrix(&keep), tol)
}

use std::collections::{HashMap, VecDeque};

use super::{Alphabet, DetAutomaton, Letter};
use crate::error::{CarpetError, Result};

pub const MONOID_BUDGET: usize = 1_000_000;

/// Total map on `states ∪ {dead}`; `None` is the dead state.
pub type StateMap = Vec<Option<usize>>;

/// All state maps induced by second-digit strings, identity first.
#[derive(Debug, Clone)]
pub struct TransitionMonoid {
    pub elements: Vec<StateMap>,
    /// A shortest string inducing each element.
    pub words: Vec<Vec<u32>>,
}

impl TransitionMonoid {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn apply(&self, element: usize, state: usize) -> Option<usize> {
        self.elements[element][state]
    }

    /// `a` followed by `b`.
    pub fn compose(a: &StateMap, b: &StateMap) -> StateMap {
        a.iter().map(|s| s.and_then(|s| b[s])).collect()
    }
}

/// Closure of the letter maps of a Y-alphabet automaton under composition.
pub fn transition_monoid(aut: &DetAutomaton) -> Result<TransitionMonoid> {
    if aut.alphabet() != Alphabet::Y {
        return Err(CarpetError::InvalidArgument("transition monoid needs a Y-alphabet automaton".into()));
    }
    let mut letters: Vec<u32> =
        (0..aut.state_count()).flat_map(|s| aut.transitions(s).iter().map(|(l, _)| l.y)).collect();
    letters.sort_unstable();
    letters.dedup();
    let generators: Vec<StateMap> =
        letters.iter().map(|&y| (0..aut.state_count()).map(|s| aut.step(s, Letter { x: 0, y })).collect()).collect();

    let identity: StateMap = (0..aut.state_count()).map(Some).collect();
    let mut seen: HashMap<StateMap, usize> = HashMap::new();
    let mut monoid = TransitionMonoid { elements: Vec::new(), words: Vec::new() };
    seen.insert(identity.clone(), 0);
    monoid.elements.push(identity);
    monoid.words.push(Vec::new());

    // breadth-first, so the first witness found is a shortest one
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for (g, &y) in generators.iter().zip(&letters) {
            let next = TransitionMonoid::compose(&monoid.elements[i], g);
            if seen.contains_key(&next) {
                continue;
            }
            if monoid.elements.len() >= MONOID_BUDGET {
                return Err(CarpetError::MonoidBudget(monoid.elements.len()));
            }
            let mut word = monoid.words[i].clone();
            word.push(y);
            seen.insert(next.clone(), monoid.elements.len());
            queue.push_back(monoid.elements.len());
            monoid.elements.push(next);
            monoid.words.push(word);
        }
    }
    Ok(monoid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{determinize, VertexSet};
    use crate::fixtures;
    use crate::model::CarpetSystem;

    #[test]
    fn mc_monoid_is_trivial() {
        let sys = fixtures::ex_mc();
        let aut = determinize(&sys, Alphabet::Y, &[VertexSet::singleton(0)]).unwrap();
        let mon = transition_monoid(&aut).unwrap();
        assert_eq!(mon.len(), 1);
        assert_eq!(mon.elements[0], vec![Some(0)]);
    }

    #[test]
    fn ab_monoid_has_the_bridge_map() {
        let sys = fixtures::ex_ab();
        let starts = [VertexSet::singleton(0), VertexSet::singleton(1), VertexSet::all(2)];
        let aut = determinize(&sys, Alphabet::Y, &starts).unwrap();
        assert_eq!(aut.state_count(), 3);
        let mon = transition_monoid(&aut).unwrap();
        // digits 0 and 2 act as the identity; digit 1 sends {a} to {a,b}
        assert_eq!(mon.len(), 2);
        let ab = aut.find(&VertexSet::all(2));
        assert_eq!(mon.apply(1, aut.starts()[0]), ab);
        assert_eq!(mon.words[1], vec![1]);
        assert!(mon.elements.iter().all(|g| g.iter().all(Option::is_some)));
    }

    #[test]
    fn undefined_letter_maps_to_dead() {
        let sys = CarpetSystem::new(3, 2, &["v"], &[("v", "v", 0, 0)]).unwrap();
        let aut = determinize(&sys, Alphabet::Y, &[VertexSet::singleton(0)]).unwrap();
        let mon = transition_monoid(&aut).unwrap();
        assert_eq!(mon.len(), 1);
        // add a second vertex reachable only through digit 1
        let sys = CarpetSystem::new(3, 2, &["u", "v"], &[("u", "v", 0, 1), ("v", "v", 0, 0)]).unwrap();
        let aut = determinize(&sys, Alphabet::Y, &[VertexSet::singleton(0)]).unwrap();
        let mon = transition_monoid(&aut).unwrap();
        assert!(mon.elements.iter().any(|g| g.contains(&None)));
    }

    #[test]
    fn closed_under_composition() {
        let sys = fixtures::ex_ab();
        let aut = determinize(&sys, Alphabet::Y, &crate::automata::singletons(&sys)).unwrap();
        let mon = transition_monoid(&aut).unwrap();
        for a in &mon.elements {
            for b in &mon.elements {
                assert!(mon.elements.contains(&TransitionMonoid::compose(a, b)));
            }
        }
    }
}

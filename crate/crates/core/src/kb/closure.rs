//! Transitive closure of `LE` with contrapositive propagation of `NLE`.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use super::{Fact, KbError, KbResult, Pair, Relation};

/// How `LE(a, b)` was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Via {
    Refl,
    Fact(usize),
    Through(usize),
}

/// A derivation: the base facts used, in reading order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Proof {
    pub conclusion: Fact,
    pub steps: Vec<Fact>,
}

impl fmt::Display for Proof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.conclusion.relation {
            Relation::Le => "<=",
            Relation::Nle => "</=",
        };
        writeln!(f, "{} {op} {}", self.conclusion.lhs, self.conclusion.rhs)?;
        for step in &self.steps {
            writeln!(f, "  {step}")?;
        }
        Ok(())
    }
}

/// Both derivations of a contradictory ordered pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Inconsistency {
    pub le: Proof,
    pub nle: Proof,
}

impl fmt::Display for Inconsistency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "inconsistent facts:\n{}{}", self.le, self.nle)
    }
}

/// The closed fact set over a fixed universe of pairs.
#[derive(Debug, Clone)]
pub struct Closure {
    pairs: Vec<Pair>,
    index: HashMap<Pair, usize>,
    facts: Vec<Fact>,
    le: Vec<Option<Via>>,
    /// For `NLE(x, y)`: the base fact `NLE(a, c)` with `LE(a, x)`, `LE(y, c)`.
    nle: Vec<Option<usize>>,
}

impl Closure {
    /// Closes `facts` over `pairs`; facts mentioning other pairs are ignored.
    ///
    /// Rules: `LE` is reflexive and transitive; `NLE(a, c)`, `LE(a, x)` and
    /// `LE(y, c)` give `NLE(x, y)`. Fails if some ordered pair gets both.
    pub fn build(pairs: &[Pair], facts: &[Fact]) -> KbResult<Closure> {
        let index: HashMap<Pair, usize> = pairs.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let n = pairs.len();
        let mut closure = Closure {
            pairs: pairs.to_vec(),
            index,
            facts: facts.to_vec(),
            le: vec![None; n * n],
            nle: vec![None; n * n],
        };
        for a in 0..n {
            closure.le[a * n + a] = Some(Via::Refl);
        }
        let mut base_nle = Vec::new();
        for (at, fact) in facts.iter().enumerate() {
            let (Some(&a), Some(&b)) = (closure.index.get(&fact.lhs), closure.index.get(&fact.rhs))
            else {
                continue;
            };
            match fact.relation {
                Relation::Le => {
                    if closure.le[a * n + b].is_none() {
                        closure.le[a * n + b] = Some(Via::Fact(at));
                    }
                }
                Relation::Nle => base_nle.push((at, a, b)),
            }
        }
        for k in 0..n {
            for a in 0..n {
                if closure.le[a * n + k].is_none() {
                    continue;
                }
                for b in 0..n {
                    if closure.le[a * n + b].is_none() && closure.le[k * n + b].is_some() {
                        closure.le[a * n + b] = Some(Via::Through(k));
                    }
                }
            }
        }
        for &(at, a, c) in &base_nle {
            let ups: Vec<usize> = (0..n)
                .filter(|&x| closure.le[a * n + x].is_some())
                .collect();
            let downs: Vec<usize> = (0..n)
                .filter(|&y| closure.le[y * n + c].is_some())
                .collect();
            for &x in &ups {
                for &y in &downs {
                    if closure.nle[x * n + y].is_none() {
                        closure.nle[x * n + y] = Some(at);
                    }
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                if closure.le[x * n + y].is_some() && closure.nle[x * n + y].is_some() {
                    let (lhs, rhs) = (closure.pairs[x], closure.pairs[y]);
                    return Err(KbError::Inconsistent(Box::new(Inconsistency {
                        le: closure.le_proof(lhs, rhs).expect("derived"),
                        nle: closure.nle_proof(lhs, rhs).expect("derived"),
                    })));
                }
            }
        }
        Ok(closure)
    }

    pub fn pairs(&self) -> &[Pair] {
        &self.pairs
    }

    pub fn contains(&self, p: Pair) -> bool {
        self.index.contains_key(&p)
    }

    fn slot(&self, a: Pair, b: Pair) -> Option<usize> {
        Some(self.index.get(&a)? * self.pairs.len() + self.index.get(&b)?)
    }

    pub fn le(&self, a: Pair, b: Pair) -> bool {
        self.slot(a, b).is_some_and(|s| self.le[s].is_some())
    }

    pub fn nle(&self, a: Pair, b: Pair) -> bool {
        self.slot(a, b).is_some_and(|s| self.nle[s].is_some())
    }

    pub fn equivalent(&self, a: Pair, b: Pair) -> bool {
        self.le(a, b) && self.le(b, a)
    }

    fn le_steps(&self, a: usize, b: usize, out: &mut Vec<Fact>) {
        match self.le[a * self.pairs.len() + b] {
            Some(Via::Fact(at)) => out.push(self.facts[at].clone()),
            Some(Via::Through(k)) => {
                self.le_steps(a, k, out);
                self.le_steps(k, b, out);
            }
            Some(Via::Refl) | None => {}
        }
    }

    pub fn le_proof(&self, a: Pair, b: Pair) -> Option<Proof> {
        if !self.le(a, b) {
            return None;
        }
        let mut steps = Vec::new();
        self.le_steps(self.index[&a], self.index[&b], &mut steps);
        let conclusion = derived(Relation::Le, a, b, &steps);
        Some(Proof { conclusion, steps })
    }

    /// `NLE(a, b)`: the chain up to `a`, the base `NLE`, the chain from `b`.
    pub fn nle_proof(&self, a: Pair, b: Pair) -> Option<Proof> {
        let at = self.nle[self.slot(a, b)?]?;
        let base = &self.facts[at];
        let mut steps = Vec::new();
        self.le_steps(self.index[&base.lhs], self.index[&a], &mut steps);
        steps.push(base.clone());
        self.le_steps(self.index[&b], self.index[&base.rhs], &mut steps);
        let conclusion = derived(Relation::Nle, a, b, &steps);
        Some(Proof { conclusion, steps })
    }

    /// Classes of mutually `LE` pairs, each sorted, ordered by first member.
    pub fn classes(&self) -> Vec<Vec<Pair>> {
        let mut seen = vec![false; self.pairs.len()];
        let mut out = Vec::new();
        for (a, &p) in self.pairs.iter().enumerate() {
            if seen[a] {
                continue;
            }
            let mut class: Vec<Pair> = Vec::new();
            for (b, &q) in self.pairs.iter().enumerate() {
                if self.equivalent(p, q) {
                    seen[b] = true;
                    class.push(q);
                }
            }
            class.sort();
            out.push(class);
        }
        out.sort();
        out
    }

    pub fn class_of(&self, p: Pair) -> Vec<Pair> {
        let mut class: Vec<Pair> = self
            .pairs
            .iter()
            .copied()
            .filter(|&q| self.equivalent(p, q))
            .collect();
        class.sort();
        class
    }
}

fn derived(relation: Relation, lhs: Pair, rhs: Pair, steps: &[Fact]) -> Fact {
    if let [only] = steps {
        if only.lhs == lhs && only.rhs == rhs && only.relation == relation {
            return only.clone();
        }
    }
    let citation = if steps.is_empty() {
        "reflexivity".to_string()
    } else {
        format!("closure over {} facts", steps.len())
    };
    Fact {
        relation,
        lhs,
        rhs,
        provenance: super::Provenance::Derived,
        citation,
        certificate: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kb::Provenance;

    fn p(n: usize, m: usize) -> Pair {
        Pair::new(n, m)
    }

    fn all() -> Vec<Pair> {
        crate::kb::rules::universe_pairs(9)
    }

    #[test]
    fn transitivity_and_classes() {
        let facts = vec![
            Fact::le(p(3, 2), p(5, 3), Provenance::SearchCert, "a"),
            Fact::le(p(5, 3), p(6, 3), Provenance::Lemma, "b"),
            Fact::le(p(6, 3), p(3, 2), Provenance::Arithmetic, "c"),
        ];
        let c = Closure::build(&all(), &facts).unwrap();
        assert!(c.le(p(3, 2), p(6, 3)));
        let proof = c.le_proof(p(3, 2), p(6, 3)).unwrap();
        assert_eq!(proof.steps.len(), 2);
        assert_eq!(proof.conclusion.provenance, Provenance::Derived);
        assert_eq!(c.class_of(p(3, 2)), vec![p(3, 2), p(5, 3), p(6, 3)]);
    }

    #[test]
    fn empty_closes_to_reflexive_only() {
        let c = Closure::build(&all(), &[]).unwrap();
        assert!(c.le(p(4, 3), p(4, 3)));
        assert!(!c.le(p(4, 3), p(4, 2)));
        assert_eq!(c.classes().len(), all().len());
    }

    #[test]
    fn nle_propagates_both_ways() {
        let facts = vec![
            Fact::nle(p(3, 2), p(2, 2), Provenance::Arithmetic, "base"),
            Fact::le(p(3, 2), p(5, 3), Provenance::SearchCert, "up"),
            Fact::le(p(4, 3), p(2, 2), Provenance::Lemma, "down"),
        ];
        let c = Closure::build(&all(), &facts).unwrap();
        assert!(c.nle(p(5, 3), p(4, 3)));
        let proof = c.nle_proof(p(5, 3), p(4, 3)).unwrap();
        assert_eq!(proof.steps.len(), 3);
        assert_eq!(proof.steps[1].citation, "base");
    }

    #[test]
    fn contradiction_is_reported_with_both_proofs() {
        let facts = vec![
            Fact::nle(p(3, 2), p(2, 2), Provenance::Arithmetic, "base"),
            Fact::le(p(3, 2), p(4, 2), Provenance::Lemma, "x"),
            Fact::le(p(4, 2), p(2, 2), Provenance::Lemma, "y"),
        ];
        match Closure::build(&all(), &facts) {
            Err(KbError::Inconsistent(inc)) => {
                assert_eq!(inc.le.conclusion.lhs, inc.nle.conclusion.lhs);
                assert_eq!(inc.le.conclusion.rhs, inc.nle.conclusion.rhs);
            }
            other => panic!("expected inconsistency, got {other:?}"),
        }
    }

    #[test]
    fn outside_facts_ignored() {
        let facts = vec![Fact::le(p(20, 2), p(3, 2), Provenance::Lemma, "far")];
        let c = Closure::build(&all(), &facts).unwrap();
        assert!(!c.contains(p(20, 2)));
        assert!(!c.le(p(20, 2), p(3, 2)));
    }
}

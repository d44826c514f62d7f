//! Queries over the closed knowledge base: single comparisons, the table of
//! `r_{i,j}` against `r_n = r_{n,2}`, the open targets and a Hasse diagram.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::closure::{Closure, Proof};
use super::rules::{seed_facts, universe_pairs, SeedOptions};
use super::{bridge, bridge_query, KbResult, KnowledgeBase, Pair};
use crate::engine::{decide_with, DecideOptions, Decision, PropertyQuery, Verdict};

/// Table cells the published table leaves open.
pub const PUBLISHED_OPEN_CELLS: &[(usize, usize)] = &[(9, 4)];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct OrderConfig {
    pub seed: SeedOptions,
    pub decide: DecideOptions,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Answer {
    Le,
    Nle,
    Open,
}

impl Answer {
    pub fn label(self) -> &'static str {
        match self {
            Answer::Le => "LE",
            Answer::Nle => "NLE",
            Answer::Open => "Open",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct QueryResult {
    pub lhs: Pair,
    pub rhs: Pair,
    pub answer: Answer,
    pub proof: Option<Proof>,
    /// Set when the closed knowledge base was silent and the bridge
    /// instance was handed to the decision pipeline.
    pub decision: Option<Decision>,
}

/// Seeded rules plus verified stored facts, closed over a universe large
/// enough for `extra`.
pub fn close_kb(kb: &KnowledgeBase, seed: SeedOptions, extra: &[Pair]) -> KbResult<Closure> {
    let universe = extra.iter().map(|p| p.n).fold(seed.universe, usize::max);
    let seed = SeedOptions { universe, ..seed };
    let mut facts = seed_facts(seed);
    facts.extend(kb.verified_facts());
    Closure::build(&universe_pairs(universe), &facts)
}

fn answer_in(closure: &Closure, lhs: Pair, rhs: Pair) -> (Answer, Option<Proof>) {
    if let Some(p) = closure.le_proof(lhs, rhs) {
        (Answer::Le, Some(p))
    } else if let Some(p) = closure.nle_proof(lhs, rhs) {
        (Answer::Nle, Some(p))
    } else {
        (Answer::Open, None)
    }
}

/// Decides `P` for the bridge instance and stores what it yields.
fn decide_bridge(
    kb: &mut KnowledgeBase,
    lhs: Pair,
    rhs: Pair,
    options: &DecideOptions,
) -> KbResult<Decision> {
    let q = bridge_query(lhs, rhs);
    let decision = decide_with(&q, options, &kb.colorings(), &kb.searches)?;
    kb.record_searches(&decision.searches);
    if let Some((fact, cert)) = bridge(lhs, rhs, &decision)? {
        if let Some(cert) = cert {
            kb.add_certificate(cert);
        }
        kb.add_fact(fact);
    }
    Ok(decision)
}

/// Is `r_lhs <= r_rhs` in every Boolean algebra?
pub fn query(
    kb: &mut KnowledgeBase,
    lhs: Pair,
    rhs: Pair,
    config: &OrderConfig,
) -> KbResult<QueryResult> {
    lhs.validate()?;
    rhs.validate()?;
    let closure = close_kb(kb, config.seed, &[lhs, rhs])?;
    let (answer, proof) = answer_in(&closure, lhs, rhs);
    if answer != Answer::Open {
        return Ok(QueryResult {
            lhs,
            rhs,
            answer,
            proof,
            decision: None,
        });
    }
    let decision = decide_bridge(kb, lhs, rhs, &config.decide)?;
    let closure = close_kb(kb, config.seed, &[lhs, rhs])?;
    let (answer, proof) = answer_in(&closure, lhs, rhs);
    Ok(QueryResult {
        lhs,
        rhs,
        answer,
        proof,
        decision: Some(decision),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CellStatus {
    Proved,
    Open,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableCell {
    pub row: usize,
    pub col: usize,
    pub status: CellStatus,
    /// `n` with `r_{row,col} = r_n`, when proved.
    pub value: Option<usize>,
    /// `ceil(row / (col - 1))`, given on every cell that is not proved.
    pub conjectured: Option<usize>,
    /// For cells open in the published table: the value the knowledge base
    /// derives anyway, if any.
    pub derived: Option<usize>,
    /// Proved only with the Laflamme axiom switched on.
    pub laflamme_dependent: bool,
}

impl TableCell {
    pub fn display_value(&self) -> String {
        match (self.status, self.value) {
            (CellStatus::Proved, Some(n)) => n.to_string(),
            _ => "?".to_string(),
        }
    }
}

fn proved_value(closure: &Closure, p: Pair, max_n: usize) -> Option<usize> {
    (2..=max_n.max(p.n)).find(|&n| closure.equivalent(p, Pair::new(n, 2)))
}

/// The grid of cells `2 <= col <= row <= max_n`, row-major.
///
/// With `search`, each cell the knowledge base cannot settle (and that is
/// not open in the published table) gets one bounded decision of its
/// conjectured lower bound `LE((c,2),(row,col))`.
pub fn table(
    kb: &mut KnowledgeBase,
    max_n: usize,
    config: &OrderConfig,
    search: bool,
) -> KbResult<Vec<TableCell>> {
    if max_n < 2 {
        return Err(super::KbError::InvalidPair(Pair::new(max_n, 2)));
    }
    let seed = SeedOptions {
        universe: config.seed.universe.max(max_n),
        ..config.seed
    };
    let cells: Vec<Pair> = (2..=max_n)
        .flat_map(|i| (2..=i).map(move |j| Pair::new(i, j)))
        .collect();
    let published_open = |p: Pair| PUBLISHED_OPEN_CELLS.contains(&(p.n, p.m));

    if search {
        let closure = close_kb(kb, seed, &[])?;
        for &p in &cells {
            if published_open(p) || proved_value(&closure, p, max_n).is_some() {
                continue;
            }
            let lower = Pair::new(conjecture(p), 2);
            if lower.is_valid() && !closure.le(lower, p) && !closure.nle(lower, p) {
                decide_bridge(kb, lower, p, &config.decide)?;
            }
        }
    }

    let closure = close_kb(kb, seed, &[])?;
    let without = close_kb(
        kb,
        SeedOptions {
            laflamme: false,
            ..seed
        },
        &[],
    )?;
    Ok(cells
        .into_iter()
        .map(|p| {
            let value = proved_value(&closure, p, max_n);
            let open = published_open(p) || value.is_none();
            TableCell {
                row: p.n,
                col: p.m,
                status: if open {
                    CellStatus::Open
                } else {
                    CellStatus::Proved
                },
                value: if open { None } else { value },
                conjectured: open.then(|| conjecture(p)),
                derived: if published_open(p) { value } else { None },
                laflamme_dependent: value.is_some() && proved_value(&without, p, max_n).is_none(),
            }
        })
        .collect())
}

fn conjecture(p: Pair) -> usize {
    p.n.div_ceil(p.m - 1)
}

#[derive(Debug, Clone, Serialize)]
pub struct OpenTarget {
    pub question: String,
    pub reading: String,
    pub lhs: Pair,
    pub rhs: Pair,
    pub query: Option<PropertyQuery>,
    pub verdict: Option<Verdict>,
    /// What the closed knowledge base says about `LE(lhs, rhs)` afterwards.
    pub kb_answer: Answer,
    pub nodes: u64,
    pub budget: u64,
    pub note: Option<String>,
}

/// Runs a bounded decision for every open target and stores the results,
/// including exhausted-budget search records.
pub fn open_problems(kb: &mut KnowledgeBase, config: &OrderConfig) -> KbResult<Vec<OpenTarget>> {
    let r94 = "is r(9,4) = r(3) in every Boolean algebra?";
    let r116 = "does (11,6) precede (3,2)?";
    let axiom = "can (3,2) <= (9,5) be backed by a coloring?";
    let targets: [(&str, &str, Pair, Pair, usize); 5] = [
        (
            r94,
            "(9,4) <= (3,2)",
            Pair::new(9, 4),
            Pair::new(3, 2),
            config.decide.max_depth,
        ),
        (
            r94,
            "(3,2) <= (9,4)",
            Pair::new(3, 2),
            Pair::new(9, 4),
            config.decide.max_depth,
        ),
        (
            r116,
            "A: (11,6) <= (3,2)",
            Pair::new(11, 6),
            Pair::new(3, 2),
            config.decide.max_depth,
        ),
        (
            r116,
            "B: (3,2) <= (11,6)",
            Pair::new(3, 2),
            Pair::new(11, 6),
            config.decide.max_depth,
        ),
        (
            axiom,
            "(3,2) <= (9,5)",
            Pair::new(3, 2),
            Pair::new(9, 5),
            config.decide.max_depth.max(4),
        ),
    ];
    let mut out = Vec::new();
    for (question, reading, lhs, rhs, max_depth) in targets {
        let options = DecideOptions {
            max_depth,
            ..config.decide
        };
        let decision = decide_bridge(kb, lhs, rhs, &options)?;
        let nodes = decision.searches.iter().map(|s| s.nodes).sum();
        out.push(OpenTarget {
            question: question.into(),
            reading: reading.into(),
            lhs,
            rhs,
            query: Some(decision.query),
            verdict: Some(decision.verdict),
            kb_answer: Answer::Open,
            nodes,
            budget: options.budget,
            note: None,
        });
    }

    let closure = close_kb(kb, config.seed, &[Pair::new(11, 6)])?;
    for t in &mut out {
        t.kb_answer = answer_in(&closure, t.lhs, t.rhs).0;
    }

    let (bottom, top) = (Pair::new(2, 2), Pair::new(3, 2));
    let mut between = Vec::new();
    let mut unsettled = Vec::new();
    for &p in closure.pairs() {
        if !closure.le(p, top) || closure.equivalent(p, top) || closure.equivalent(p, bottom) {
            continue;
        }
        if closure.nle(p, bottom) && closure.nle(top, p) {
            between.push(p.to_string());
        } else {
            unsettled.push(p.to_string());
        }
    }
    out.push(OpenTarget {
        question: "is the interval between (2,2) and (3,2) empty?".into(),
        reading: "pairs strictly between (2,2) and (3,2)".into(),
        lhs: bottom,
        rhs: top,
        query: None,
        verdict: None,
        kb_answer: if closure.le(bottom, top) {
            Answer::Le
        } else {
            Answer::Open
        },
        nodes: 0,
        budget: 0,
        note: Some(format!(
            "strictly between: [{}]; below (3,2) but not separated from either end: [{}]",
            between.join(" "),
            unsettled.join(" ")
        )),
    });
    Ok(out)
}

/// DOT digraph of the equivalence classes, one edge from each class to the
/// classes immediately below it. `(2,2)`'s class is the sink.
pub fn hasse_dot(closure: &Closure) -> String {
    let classes = closure.classes();
    let below = |a: usize, b: usize| {
        a != b
            && closure.le(classes[b][0], classes[a][0])
            && !closure.le(classes[a][0], classes[b][0])
    };
    let mut dot = String::from("digraph order {\n  rankdir=TB;\n  node [shape=box];\n");
    for (at, class) in classes.iter().enumerate() {
        let label: Vec<String> = class.iter().map(Pair::to_string).collect();
        let _ = writeln!(dot, "  c{at} [label=\"{}\"];", label.join(" "));
    }
    for a in 0..classes.len() {
        for b in 0..classes.len() {
            if below(a, b) && !(0..classes.len()).any(|c| below(a, c) && below(c, b)) {
                let _ = writeln!(dot, "  c{a} -> c{b};");
            }
        }
    }
    dot.push_str("}\n");
    dot
}

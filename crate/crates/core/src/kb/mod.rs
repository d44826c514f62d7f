//! Facts about the order on pairs `(n, m)` and their derivation.
//!
//! `LE(a, b)` says `r_a <= r_b` in every Boolean algebra. The bridge to the
//! tree property is: `LE((i,k),(j,m))` iff `P(i, j, k, m-1)` fails.

mod closure;
mod fixtures;
mod order;
mod rules;
mod store;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::{Decision, FailureBasis, HoldsReason, PropertyQuery, Verdict};
use crate::error::EngineError;
use crate::Coloring;

pub use closure::{Closure, Inconsistency, Proof};
pub use fixtures::{fixture_colorings, load_fixtures, Fixture, FixtureReport, FIXTURES};
pub use order::{
    close_kb, hasse_dot, open_problems, query, table, Answer, CellStatus, OpenTarget, OrderConfig,
    QueryResult, TableCell, PUBLISHED_OPEN_CELLS,
};
pub use rules::{seed_facts, SeedOptions};
pub use store::{certificate_id, AuditFailure, Certificate, KnowledgeBase};

#[derive(Debug, Error)]
pub enum KbError {
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("{0}")]
    Inconsistent(Box<Inconsistency>),
    #[error("invalid pair {0}: need n >= m >= 2")]
    InvalidPair(Pair),
    #[error("bridge mismatch: {0}")]
    BridgeMismatch(String),
    #[error("knowledge base file {path}: {message}")]
    Store { path: String, message: String },
}

pub type KbResult<T> = std::result::Result<T, KbError>;

/// Index pair of `r_{n,m}`: partitions into `n` pieces, `m` of them met.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Pair {
    pub n: usize,
    pub m: usize,
}

impl Pair {
    pub const fn new(n: usize, m: usize) -> Self {
        Pair { n, m }
    }

    pub fn is_valid(&self) -> bool {
        self.m >= 2 && self.n >= self.m
    }

    pub fn validate(&self) -> KbResult<()> {
        if self.is_valid() {
            Ok(())
        } else {
            Err(KbError::InvalidPair(*self))
        }
    }
}

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.n, self.m)
    }
}

/// The `P` instance whose failure is equivalent to `LE(lhs, rhs)`.
pub fn bridge_query(lhs: Pair, rhs: Pair) -> PropertyQuery {
    PropertyQuery {
        i: lhs.n,
        j: rhs.n,
        k: lhs.m,
        m: rhs.m - 1,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Le,
    Nle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// One of the monotonicity rules.
    Lemma,
    /// The `m = 1` pigeonhole criterion.
    Arithmetic,
    /// A stored defeating coloring, re-verified on use.
    SearchCert,
    /// A published result taken without a witness.
    Axiom,
    Derived,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Fact {
    pub relation: Relation,
    pub lhs: Pair,
    pub rhs: Pair,
    pub provenance: Provenance,
    pub citation: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<String>,
}

impl Fact {
    pub fn le(lhs: Pair, rhs: Pair, provenance: Provenance, citation: impl Into<String>) -> Self {
        Fact {
            relation: Relation::Le,
            lhs,
            rhs,
            provenance,
            citation: citation.into(),
            certificate: None,
        }
    }

    pub fn nle(lhs: Pair, rhs: Pair, provenance: Provenance, citation: impl Into<String>) -> Self {
        Fact {
            relation: Relation::Nle,
            lhs,
            rhs,
            provenance,
            citation: citation.into(),
            certificate: None,
        }
    }
}

impl fmt::Display for Fact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.relation {
            Relation::Le => "<=",
            Relation::Nle => "</=",
        };
        let tag = serde_json::to_value(self.provenance)
            .ok()
            .and_then(|v| v.as_str().map(str::to_owned))
            .unwrap_or_default();
        write!(
            f,
            "{} {op} {}  [{tag}: {}",
            self.lhs, self.rhs, self.citation
        )?;
        if let Some(id) = &self.certificate {
            write!(f, "; cert {}", &id[..id.len().min(12)])?;
        }
        write!(f, "]")
    }
}

/// Turns a decided bridge instance into a fact about `(lhs, rhs)`.
///
/// Returns the new fact plus the certificate backing it, or `None` when the
/// verdict says nothing (unknown, or a bounded general-tree check, which
/// cannot establish a property for all trees).
pub fn bridge(
    lhs: Pair,
    rhs: Pair,
    decision: &Decision,
) -> KbResult<Option<(Fact, Option<Certificate>)>> {
    lhs.validate()?;
    rhs.validate()?;
    let expected = bridge_query(lhs, rhs);
    if decision.query != expected {
        return Err(KbError::BridgeMismatch(format!(
            "{} bridges to {expected}, decision is for {}",
            fmt_pairs(lhs, rhs),
            decision.query
        )));
    }
    Ok(match &decision.verdict {
        Verdict::Fails { witness, basis, .. } => {
            if !decision.verdict.reverify(&expected)? {
                return Err(KbError::BridgeMismatch(format!(
                    "witness does not defeat {expected}"
                )));
            }
            match basis {
                FailureBasis::Arithmetic | FailureBasis::VacuousBranching => Some((
                    Fact::le(
                        lhs,
                        rhs,
                        Provenance::Arithmetic,
                        format!("{expected} fails by counting"),
                    ),
                    None,
                )),
                FailureBasis::Certificate | FailureBasis::Search => {
                    let cert = Certificate::Coloring(witness.clone());
                    let mut fact = Fact::le(
                        lhs,
                        rhs,
                        Provenance::SearchCert,
                        format!(
                            "{expected} fails: defeating coloring of depth {}",
                            witness.shape().depth()
                        ),
                    );
                    fact.certificate = Some(certificate_id(&cert));
                    Some((fact, Some(cert)))
                }
            }
        }
        Verdict::Holds { reason } => match reason {
            HoldsReason::TrivialColors | HoldsReason::PigeonholeArithmetic => Some((
                Fact::nle(
                    lhs,
                    rhs,
                    Provenance::Arithmetic,
                    format!("{expected} holds by counting"),
                ),
                None,
            )),
            HoldsReason::Axiom { citation } => Some((
                Fact::nle(lhs, rhs, Provenance::Axiom, citation.clone()),
                None,
            )),
            HoldsReason::BoundedGeneralSearch { .. } => None,
        },
        Verdict::Unknown { .. } => None,
    })
}

fn fmt_pairs(lhs: Pair, rhs: Pair) -> String {
    format!("{lhs} vs {rhs}")
}

/// Colorings among `certs`, for handing to the decision pipeline.
pub(crate) fn colorings<'a>(certs: impl IntoIterator<Item = &'a Certificate>) -> Vec<Coloring> {
    certs
        .into_iter()
        .filter_map(|c| match c {
            Certificate::Coloring(col) => Some(col.clone()),
            Certificate::Matrix(_) => None,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{decide_with, DecideOptions};

    fn decided(i: usize, j: usize, k: usize, m: usize) -> Decision {
        let q = PropertyQuery::new(i, j, k, m).unwrap();
        decide_with(&q, &DecideOptions::default(), &[], &[]).unwrap()
    }

    #[test]
    fn bridge_examples() {
        let (fact, cert) = bridge(Pair::new(3, 2), Pair::new(5, 3), &decided(3, 5, 2, 2))
            .unwrap()
            .unwrap();
        assert_eq!(fact.relation, Relation::Le);
        assert_eq!(fact.provenance, Provenance::SearchCert);
        assert_eq!(
            fact.certificate,
            Some(certificate_id(cert.as_ref().unwrap()))
        );

        let (fact, _) = bridge(Pair::new(3, 2), Pair::new(2, 2), &decided(3, 2, 2, 1))
            .unwrap()
            .unwrap();
        assert_eq!(
            (fact.relation, fact.provenance),
            (Relation::Nle, Provenance::Arithmetic)
        );

        // 9 > 3 * 2, so the pigeonhole side applies
        let (fact, _) = bridge(Pair::new(9, 3), Pair::new(3, 2), &decided(9, 3, 3, 1))
            .unwrap()
            .unwrap();
        assert_eq!(fact.relation, Relation::Nle);
    }

    #[test]
    fn bridge_rejects_mismatch() {
        let err = bridge(Pair::new(3, 2), Pair::new(6, 3), &decided(3, 5, 2, 2));
        assert!(matches!(err, Err(KbError::BridgeMismatch(_))));
        assert!(matches!(
            bridge(Pair::new(2, 3), Pair::new(6, 3), &decided(3, 5, 2, 2)),
            Err(KbError::InvalidPair(_))
        ));
    }

    #[test]
    fn unknown_is_a_no_op() {
        let q = PropertyQuery::new(3, 11, 2, 5).unwrap();
        let opts = DecideOptions {
            max_depth: 2,
            budget: 1_000,
            parallelism: 1,
        };
        let d = decide_with(&q, &opts, &[], &[]).unwrap();
        assert!(!d.verdict.is_fails());
        assert!(bridge(Pair::new(3, 2), Pair::new(11, 6), &d)
            .unwrap()
            .is_none());
    }
}

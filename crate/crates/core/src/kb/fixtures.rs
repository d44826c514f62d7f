//! Colorings shipped with the crate, each with the `P` instance it claims to
//! refute. Claims are re-verified on load; the digit-sum colorings do not
//! hold up and are reported as rejected.

use serde::Serialize;

use super::{certificate_id, Certificate, Fact, KnowledgeBase, Pair, Provenance};
use crate::engine::PropertyQuery;
use crate::family::{defeats, min_colors};
use crate::{Coloring, EngineError};

#[derive(Debug, Clone, Copy)]
pub struct Fixture {
    pub name: &'static str,
    pub json: &'static str,
    /// `(k, m)`: the coloring claims every `k`-branching subtree uses more
    /// than `m` colors.
    pub claim: (usize, usize),
}

pub const FIXTURES: &[Fixture] = &[
    Fixture {
        name: "pairs6",
        json: include_str!("../../fixtures/pairs6.json"),
        claim: (3, 1),
    },
    Fixture {
        name: "triples9",
        json: include_str!("../../fixtures/triples9.json"),
        claim: (4, 1),
    },
    Fixture {
        name: "digit_sum_mod5",
        json: include_str!("../../fixtures/digit_sum_mod5.json"),
        claim: (2, 2),
    },
    Fixture {
        name: "digit_sum_mod7",
        json: include_str!("../../fixtures/digit_sum_mod7.json"),
        claim: (2, 3),
    },
    Fixture {
        name: "search_3_5_2_2",
        json: include_str!("../../fixtures/search_3_5_2_2.json"),
        claim: (2, 2),
    },
    Fixture {
        name: "search_3_7_2_3",
        json: include_str!("../../fixtures/search_3_7_2_3.json"),
        claim: (2, 3),
    },
    Fixture {
        name: "search_3_8_2_3",
        json: include_str!("../../fixtures/search_3_8_2_3.json"),
        claim: (2, 3),
    },
    Fixture {
        name: "rainbow_3_9",
        json: include_str!("../../fixtures/rainbow_3_9.json"),
        claim: (2, 3),
    },
];

impl Fixture {
    pub fn coloring(&self) -> Result<Coloring, EngineError> {
        serde_json::from_str(self.json)
            .map_err(|e| EngineError::InvalidColoring(format!("{}: {e}", self.name)))
    }

    pub fn query(&self) -> Result<PropertyQuery, EngineError> {
        let c = self.coloring()?;
        PropertyQuery::new(
            c.shape().branching(),
            c.colors(),
            self.claim.0,
            self.claim.1,
        )
    }

    /// `LE(lhs, rhs)` for the claimed instance.
    pub fn pairs(&self) -> Result<(Pair, Pair), EngineError> {
        let q = self.query()?;
        Ok((Pair::new(q.i, q.k), Pair::new(q.j, q.m + 1)))
    }
}

pub fn fixture_colorings() -> Vec<(&'static str, Coloring)> {
    FIXTURES
        .iter()
        .filter_map(|f| Some((f.name, f.coloring().ok()?)))
        .collect()
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct FixtureReport {
    pub accepted: Vec<(String, Fact)>,
    /// Fixture name and why it was not admitted.
    pub rejected: Vec<(String, String)>,
}

/// Re-verifies every fixture and adds the valid ones to `kb` as
/// certificate-backed facts.
pub fn load_fixtures(kb: &mut KnowledgeBase) -> FixtureReport {
    let mut report = FixtureReport::default();
    for fixture in FIXTURES {
        match admit(fixture) {
            Ok((fact, cert)) => {
                kb.add_certificate(cert);
                kb.add_fact(fact.clone());
                report.accepted.push((fixture.name.to_string(), fact));
            }
            Err(reason) => report.rejected.push((fixture.name.to_string(), reason)),
        }
    }
    report
}

fn admit(fixture: &Fixture) -> Result<(Fact, Certificate), String> {
    let coloring = fixture.coloring().map_err(|e| e.to_string())?;
    let q = fixture.query().map_err(|e| e.to_string())?;
    let (lhs, rhs) = fixture.pairs().map_err(|e| e.to_string())?;
    if !lhs.is_valid() || !rhs.is_valid() {
        return Err(format!("{q} does not bridge to valid pairs"));
    }
    if !defeats(&coloring, q.k, q.m).map_err(|e| e.to_string())? {
        let least = min_colors(&coloring, q.k, q.m).map_err(|e| e.to_string())?;
        return Err(format!(
            "does not refute {q}: some {}-branching subtree uses only {} colors",
            q.k,
            least.value().map_or("?".to_string(), |v| v.to_string())
        ));
    }
    let cert = Certificate::Coloring(coloring.clone());
    let mut fact = Fact::le(
        lhs,
        rhs,
        Provenance::SearchCert,
        format!(
            "{q} fails: fixture {} (depth {})",
            fixture.name,
            coloring.shape().depth()
        ),
    );
    fact.certificate = Some(certificate_id(&cert));
    Ok((fact, cert))
}

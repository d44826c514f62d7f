//! The persisted knowledge base: append-only facts, content-addressed
//! certificates and the record of bounded searches.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{bridge_query, Fact, KbError, KbResult, Provenance, Relation};
use crate::engine::SearchRecord;
use crate::family::defeats;
use crate::polarized::PolMatrix;
use crate::Coloring;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Certificate {
    Coloring(Coloring),
    Matrix(PolMatrix),
}

/// Hex SHA-256 of the certificate's JSON encoding.
pub fn certificate_id(cert: &Certificate) -> String {
    let json = serde_json::to_string(cert).expect("certificates serialize");
    hex::encode(Sha256::digest(json.as_bytes()))
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnowledgeBase {
    #[serde(default)]
    pub facts: Vec<Fact>,
    #[serde(default)]
    pub certificates: BTreeMap<String, Certificate>,
    #[serde(default)]
    pub searches: Vec<SearchRecord>,
}

/// A stored fact or certificate that does not check out.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditFailure {
    pub fact: Option<Fact>,
    pub certificate: Option<String>,
    pub reason: String,
}

impl KnowledgeBase {
    pub fn new() -> Self {
        Self::default()
    }

    /// Reads a knowledge base; a missing file is an empty one.
    pub fn load(path: &Path) -> KbResult<Self> {
        let text = match fs::read_to_string(path) {
            Ok(text) => text,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Self::new()),
            Err(e) => return Err(store_err(path, e)),
        };
        serde_json::from_str(&text).map_err(|e| store_err(path, e))
    }

    /// Writes via a sibling temporary file and a rename.
    pub fn save(&self, path: &Path) -> KbResult<()> {
        let json = serde_json::to_string_pretty(self).map_err(|e| store_err(path, e))?;
        let tmp = path.with_extension("json.tmp");
        fs::write(&tmp, json + "\n").map_err(|e| store_err(path, e))?;
        fs::rename(&tmp, path).map_err(|e| store_err(path, e))
    }

    pub fn add_certificate(&mut self, cert: Certificate) -> String {
        let id = certificate_id(&cert);
        self.certificates.entry(id.clone()).or_insert(cert);
        id
    }

    /// Appends `fact` unless an identical one is already stored.
    pub fn add_fact(&mut self, fact: Fact) -> bool {
        if self.facts.contains(&fact) {
            return false;
        }
        self.facts.push(fact);
        true
    }

    pub fn record_searches(&mut self, records: &[SearchRecord]) {
        for r in records {
            if !self.searches.contains(r) {
                self.searches.push(r.clone());
            }
        }
    }

    pub fn colorings(&self) -> Vec<Coloring> {
        super::colorings(self.certificates.values())
    }

    /// Stored facts that survive [`audit`](Self::audit).
    pub fn verified_facts(&self) -> Vec<Fact> {
        self.facts
            .iter()
            .filter(|f| self.check_fact(f).is_ok())
            .cloned()
            .collect()
    }

    /// Re-checks every certificate id and every certificate-backed fact.
    pub fn audit(&self) -> Vec<AuditFailure> {
        let mut failures = Vec::new();
        for (id, cert) in &self.certificates {
            if certificate_id(cert) != *id {
                failures.push(AuditFailure {
                    fact: None,
                    certificate: Some(id.clone()),
                    reason: "id does not match content".into(),
                });
            }
        }
        for fact in &self.facts {
            if let Err(reason) = self.check_fact(fact) {
                failures.push(AuditFailure {
                    fact: Some(fact.clone()),
                    certificate: fact.certificate.clone(),
                    reason,
                });
            }
        }
        failures
    }

    fn check_fact(&self, fact: &Fact) -> Result<(), String> {
        if !fact.lhs.is_valid() || !fact.rhs.is_valid() {
            return Err(format!("invalid pair in {fact}"));
        }
        if fact.provenance != Provenance::SearchCert {
            return Ok(());
        }
        if fact.relation != Relation::Le {
            return Err("a certificate can only back an LE fact".into());
        }
        let id = fact.certificate.as_ref().ok_or("missing certificate id")?;
        let cert = self
            .certificates
            .get(id)
            .ok_or_else(|| format!("unknown certificate {id}"))?;
        let Certificate::Coloring(coloring) = cert else {
            return Err("certificate is not a coloring".into());
        };
        if certificate_id(cert) != *id {
            return Err("certificate id does not match content".into());
        }
        let q = bridge_query(fact.lhs, fact.rhs);
        if coloring.shape().branching() != q.i || coloring.used_colors() > q.j {
            return Err(format!("coloring has the wrong shape or palette for {q}"));
        }
        match defeats(coloring, q.k, q.m) {
            Ok(true) => Ok(()),
            Ok(false) => Err(format!("coloring does not defeat {q}")),
            Err(e) => Err(e.to_string()),
        }
    }
}

fn store_err(path: &Path, e: impl std::fmt::Display) -> KbError {
    KbError::Store {
        path: path.display().to_string(),
        message: e.to_string(),
    }
}

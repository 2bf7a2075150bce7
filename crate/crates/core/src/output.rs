//! Serialized certificates: a JSON document with a fixed field order, a
//! `k,N,count` CSV table, and a plain-text summary.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::hyperbolicity::{PHypCertificate, SummandRow, WedgeCensus};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DocumentKind {
    Wedge,
    KDetection,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DocumentRow {
    pub k: u64,
    pub witt: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<[u64; 2]>,
    /// homotopy degree -> lower bound on the number of summands there
    pub degrees: BTreeMap<u64, u64>,
}

impl From<&SummandRow> for DocumentRow {
    fn from(row: &SummandRow) -> Self {
        Self {
            k: row.k,
            witt: row.witt,
            window: row.window.map(|(lo, hi)| [lo, hi]),
            degrees: row.degrees.clone(),
        }
    }
}

/// Everything a downstream checker needs to re-verify a census or a
/// certificate. Field order is part of the format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateDocument {
    pub schema_version: u32,
    pub kind: DocumentKind,
    pub space: String,
    pub p: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<u32>,
    pub q1: u64,
    pub q2: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub i_lambda: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<u64>,
    pub k0: u64,
    pub a: u64,
    pub b: u64,
    pub liminf_ln2_coeff: String,
    /// Counts are lower bounds on summands, never exact group orders.
    pub count_kind: String,
    /// How the per-degree split of each row was obtained.
    pub degree_split: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input_mode: Option<String>,
    /// The certificate covers `Σ^n X` for every `n >= 1`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub valid_for_all_suspensions: Option<bool>,
    pub rows: Vec<DocumentRow>,
    pub oracles_checked: Vec<String>,
}

impl CertificateDocument {
    pub fn from_wedge(census: &WedgeCensus, space: &str) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            kind: DocumentKind::Wedge,
            space: space.to_string(),
            p: census.p,
            r: Some(census.r),
            q1: census.q1,
            q2: census.q2,
            j: Some(census.witness.j),
            i_lambda: None,
            c: None,
            k0: census.k0,
            a: census.q2,
            b: 1 + census.witness.j,
            liminf_ln2_coeff: format!("1/{}", census.q2),
            count_kind: "at_least".to_string(),
            degree_split: "hilton-milnor".to_string(),
            input_mode: None,
            valid_for_all_suspensions: None,
            rows: census.rows.iter().map(DocumentRow::from).collect(),
            oracles_checked: census.oracles_checked.clone(),
        }
    }

    pub fn from_certificate(cert: &PHypCertificate) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            kind: DocumentKind::KDetection,
            space: cert.space.clone(),
            p: cert.p,
            r: None,
            q1: cert.q_min,
            q2: cert.q_max,
            j: None,
            i_lambda: Some(cert.i_lambda),
            c: Some(cert.c),
            k0: cert.k0,
            a: cert.a,
            b: cert.b,
            liminf_ln2_coeff: format!("1/{}", cert.a),
            count_kind: "at_least".to_string(),
            degree_split: "construction-derived".to_string(),
            input_mode: Some(cert.input_mode.to_string()),
            valid_for_all_suspensions: Some(true),
            rows: cert.rows.iter().map(DocumentRow::from).collect(),
            oracles_checked: cert.oracles_checked.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["k", "N", "count"]).unwrap();
        for row in &self.rows {
            for (n, count) in &row.degrees {
                w.write_record([row.k.to_string(), n.to_string(), count.to_string()])
                    .unwrap();
            }
        }
        String::from_utf8(w.into_inner().unwrap()).unwrap()
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let kind = match self.kind {
            DocumentKind::Wedge => "wedge census",
            DocumentKind::KDetection => "K-detection certificate",
        };
        writeln!(s, "{kind} for {} at p = {}", self.space, self.p).unwrap();
        writeln!(s, "q = ({}, {})", self.q1, self.q2).unwrap();
        if let (Some(r), Some(j)) = (self.r, self.j) {
            writeln!(s, "Z/{}^{r} summand in stable stem {j}", self.p).unwrap();
        }
        if let (Some(i), Some(c)) = (self.i_lambda, self.c) {
            writeln!(s, "lambda = l^{i}, c = {c}").unwrap();
        }
        writeln!(s, "k0 = {}, a = {}, b = {}", self.k0, self.a, self.b).unwrap();
        writeln!(s, "liminf ln(t_m)/m >= ln 2 * {}", self.liminf_ln2_coeff).unwrap();
        for row in &self.rows {
            let degrees: Vec<String> = row.degrees.iter().map(|(n, c)| format!("{n}:{c}")).collect();
            writeln!(s, "k={} W={} {}", row.k, row.witt, degrees.join(" ")).unwrap();
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperbolicity::{certify_catalog_space, wedge_summand_census};

    #[test]
    fn json_field_order() {
        let c = wedge_summand_census(1, 1, 3, 1, 9).unwrap();
        let doc = CertificateDocument::from_wedge(&c, "Wedge(2,2)");
        let json = doc.to_json();
        let keys = [
            "schema_version", "kind", "space", "\"p\"", "\"r\"", "q1", "q2", "\"j\"", "k0", "\"a\"",
            "\"b\"", "liminf_ln2_coeff", "rows", "oracles_checked",
        ];
        let positions: Vec<usize> = keys.iter().map(|k| json.find(k).unwrap()).collect();
        assert!(positions.windows(2).all(|w| w[0] < w[1]), "{json}");
        assert!(json.contains("\"kind\": \"wedge\""));
        assert!(json.contains("\"16\": 30"));
        assert_eq!(CertificateDocument::from_json(&json).unwrap(), doc);
    }

    #[test]
    fn certificate_round_trip_and_csv() {
        let outcome = certify_catalog_space(&"CP(2)".parse().unwrap(), 3, 4).unwrap();
        let doc = CertificateDocument::from_certificate(outcome.certificate().unwrap());
        assert_eq!(CertificateDocument::from_json(&doc.to_json()).unwrap(), doc);
        assert_eq!(doc.kind, DocumentKind::KDetection);
        assert_eq!(doc.liminf_ln2_coeff, "1/20");
        let csv = doc.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("k,N,count"));
        let body: Vec<&str> = lines.collect();
        let total: u64 = doc.rows.iter().map(|r| r.degrees.len() as u64).sum();
        assert_eq!(body.len() as u64, total);
        assert!(doc.to_text().contains("c = 4"));
    }
}

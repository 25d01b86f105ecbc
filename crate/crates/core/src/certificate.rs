//! Machine-readable records of verification runs.
//!
//! Field order is part of the format: serializers emit fields in declaration
//! order, so a given `tool_version` always produces the same key layout.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::cube::VertexSet;
use crate::search::DegreeMode;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClaimId {
    Simon,
    Main,
    Gap,
    LemmaMinsize,
    LemmaExtended,
    LemmaFancy,
    Search,
}

impl ClaimId {
    pub fn as_str(self) -> &'static str {
        match self {
            ClaimId::Simon => "simon",
            ClaimId::Main => "main",
            ClaimId::Gap => "gap",
            ClaimId::LemmaMinsize => "lemma_minsize",
            ClaimId::LemmaExtended => "lemma_extended",
            ClaimId::LemmaFancy => "lemma_fancy",
            ClaimId::Search => "search",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Verified,
    Refuted,
    Infeasible,
    /// Budget ran out; the rows that finished are still listed.
    Partial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Exhaustive,
    Sampled,
    CanonicalBnb,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params {
    pub n: u32,
    pub d: Option<u32>,
    pub degree_mode: DegreeMode,
    pub irreducible: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowStatus {
    Confirmed,
    Infeasible,
    Mismatch,
    BudgetExceeded,
}

/// One degree's result inside a multi-degree certificate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeRow {
    pub d: u32,
    pub expected: Option<u64>,
    pub found: Option<u64>,
    pub status: RowStatus,
    pub witness: Option<Vec<String>>,
    pub examined: u64,
    /// Proven lower bound when the search stopped early.
    pub lower_bound: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SizeCount {
    pub size: u64,
    pub count: u64,
}

/// Sizes observed among sets with minimum degree exactly `degree`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HistogramRow {
    pub degree: u32,
    pub sizes: Vec<SizeCount>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub claim_id: ClaimId,
    pub params: Params,
    pub verdict: Verdict,
    pub extremal_size: Option<u64>,
    /// Vertex sets in the per-line text format, header line included.
    pub witnesses: Vec<Vec<String>>,
    pub counterexample: Option<Vec<String>>,
    pub subsets_examined: u64,
    pub seed: Option<u64>,
    pub elapsed_ms: u64,
    pub tool_version: String,
    pub mode: Mode,
    pub samples: Option<u64>,
    pub counts: BTreeMap<String, u64>,
    pub per_d: Vec<DegreeRow>,
    pub histogram: Vec<HistogramRow>,
    /// Extra data needed to re-check the counterexample, such as a subcube
    /// pattern.
    pub counterexample_detail: Option<String>,
    pub notes: Vec<String>,
}

impl Certificate {
    pub(crate) fn new(claim_id: ClaimId, params: Params, mode: Mode) -> Self {
        Certificate {
            claim_id,
            params,
            verdict: Verdict::Verified,
            extremal_size: None,
            witnesses: Vec::new(),
            counterexample: None,
            subsets_examined: 0,
            seed: None,
            elapsed_ms: 0,
            tool_version: TOOL_VERSION.to_string(),
            mode,
            samples: None,
            counts: BTreeMap::new(),
            per_d: Vec::new(),
            histogram: Vec::new(),
            counterexample_detail: None,
            notes: Vec::new(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificates serialize")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    /// Parses the embedded counterexample back into a vertex set.
    pub fn counterexample_set(&self) -> Option<crate::Result<VertexSet>> {
        self.counterexample
            .as_ref()
            .map(|lines| Ok(VertexSet::parse_text(&lines.join("\n"))?))
    }

    /// Parses each witness back into a vertex set.
    pub fn witness_sets(&self) -> crate::Result<Vec<VertexSet>> {
        self.witnesses
            .iter()
            .map(|lines| Ok(VertexSet::parse_text(&lines.join("\n"))?))
            .collect()
    }

    /// Aligned plain-text rendering carrying the same values as the JSON.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let mut row = |k: &str, v: String| out.push_str(&format!("{k:<20}{v}\n"));
        row("claim", self.claim_id.as_str().to_string());
        row("n", self.params.n.to_string());
        if let Some(d) = self.params.d {
            row("d", d.to_string());
        }
        row("degree_mode", snake(&self.params.degree_mode));
        row("irreducible", self.params.irreducible.to_string());
        row("verdict", snake(&self.verdict));
        row("mode", snake(&self.mode));
        if let Some(size) = self.extremal_size {
            row("extremal_size", size.to_string());
        }
        row("subsets_examined", self.subsets_examined.to_string());
        if let Some(samples) = self.samples {
            row("samples", samples.to_string());
        }
        if let Some(seed) = self.seed {
            row("seed", seed.to_string());
        }
        for (k, v) in &self.counts {
            row(k, v.to_string());
        }
        for r in &self.per_d {
            let show = |v: Option<u64>| v.map_or("-".to_string(), |x| x.to_string());
            row(
                &format!("d={}", r.d),
                format!(
                    "expected {} found {} {}",
                    show(r.expected),
                    show(r.found),
                    snake(&r.status)
                ),
            );
        }
        for h in &self.histogram {
            let sizes: Vec<String> = h
                .sizes
                .iter()
                .map(|s| format!("{}x{}", s.size, s.count))
                .collect();
            row(&format!("sizes[δ={}]", h.degree), sizes.join(" "));
        }
        for (i, w) in self.witnesses.iter().enumerate() {
            row(&format!("witness[{i}]"), w[1..].join(" "));
        }
        if let Some(c) = &self.counterexample {
            row("counterexample", c[1..].join(" "));
        }
        if let Some(detail) = &self.counterexample_detail {
            row("detail", detail.clone());
        }
        for note in &self.notes {
            row("note", note.clone());
        }
        row("elapsed_ms", self.elapsed_ms.to_string());
        row("tool_version", self.tool_version.clone());
        out
    }
}

/// The serialized name of a unit enum variant.
fn snake<T: Serialize>(value: &T) -> String {
    match serde_json::to_value(value) {
        Ok(serde_json::Value::String(s)) => s,
        _ => unreachable!("unit variants serialize as strings"),
    }
}

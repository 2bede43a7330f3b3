//! JSON documents for triangulations, parcels and partial cocycles.
//!
//! Objects are numbered `1, 2, 3` in documents and `0, 1, 2` in memory.
//! Unknown fields are rejected everywhere.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cocycle::{CocycleError, PartialCocycle};
use crate::complex::{StratifiedTriangulation, VertexId, VertexTable};
use crate::group::FiniteGroup;
use crate::parcel::{from_group_spec, GroupParcelSpec, HomSizes, Parcel, ParcelError, CHAINS};
use crate::stratum::Stratum;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("not a triangulation, parcel or cocycle document (top-level keys {0:?})")]
    UnknownDocument(Vec<String>),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Parcel(#[from] ParcelError),
    #[error(transparent)]
    Cocycle(#[from] CocycleError),
}

impl From<serde_json::Error> for IoError {
    fn from(e: serde_json::Error) -> Self {
        let message = e.to_string();
        // serde appends " at line L column C"; keep only the description
        let message = match message.rfind(" at line ") {
            Some(i) => message[..i].to_string(),
            None => message,
        };
        IoError::Parse { line: e.line(), column: e.column(), message }
    }
}

fn invalid<T>(msg: impl Into<String>) -> Result<T, IoError> {
    Err(IoError::Invalid(msg.into()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexEntry {
    pub id: VertexId,
    pub dim: Stratum,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TriangulationDocument {
    pub vertices: Vec<VertexEntry>,
    pub tetrahedra: Vec<[VertexId; 4]>,
    #[serde(default)]
    pub surface: Vec<[VertexId; 3]>,
    #[serde(default)]
    pub knot: Vec<[VertexId; 2]>,
    #[serde(default)]
    pub sigma_order: Vec<VertexId>,
    #[serde(default)]
    pub bulk_order: Vec<VertexId>,
}

impl TriangulationDocument {
    pub fn from_triangulation(t: &StratifiedTriangulation) -> Self {
        TriangulationDocument {
            vertices: t.vertices().dims().iter().enumerate().map(|(id, &dim)| VertexEntry { id, dim }).collect(),
            tetrahedra: t.tetrahedra().to_vec(),
            surface: t.surface_triangles().to_vec(),
            knot: t.knot_edges().iter().map(|&(a, b)| [a, b]).collect(),
            sigma_order: t.sigma_order().to_vec(),
            bulk_order: t.bulk_order().to_vec(),
        }
    }

    /// Assembles the triangulation without validating it; vertex ids must
    /// be `0..n`, each listed once.
    pub fn to_triangulation(&self) -> Result<StratifiedTriangulation, IoError> {
        let n = self.vertices.len();
        let mut dims = vec![None; n];
        for v in &self.vertices {
            if v.id >= n {
                return invalid(format!("vertex id {} out of range for {n} vertices", v.id));
            }
            if dims[v.id].replace(v.dim).is_some() {
                return invalid(format!("vertex id {} listed twice", v.id));
            }
        }
        let dims = dims.into_iter().map(|d| d.expect("ids are a permutation")).collect();
        Ok(StratifiedTriangulation::from_parts(
            VertexTable::new(dims),
            self.tetrahedra.clone(),
            self.surface.clone(),
            self.knot.iter().map(|&[a, b]| (a, b)).collect(),
            self.sigma_order.clone(),
            self.bulk_order.clone(),
        ))
    }
}

/// Hom-set sizes keyed by object pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomBlock {
    #[serde(rename = "11")]
    pub g1: usize,
    #[serde(rename = "22")]
    pub g2: usize,
    #[serde(rename = "33")]
    pub g3: usize,
    #[serde(rename = "12")]
    pub x12: usize,
    #[serde(rename = "23")]
    pub x23: usize,
    #[serde(rename = "13")]
    pub x13: usize,
}

/// Composition on one chain `i ≤ j ≤ k` as triples `[a, b, a∘b]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComposeBlock {
    pub chain: [usize; 3],
    pub table: Vec<[usize; 3]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpecDocument {
    /// Multiplication table of the ambient group; element 0 need not be
    /// the identity.
    pub table: Vec<Vec<usize>>,
    pub g1: Vec<usize>,
    pub g2: Vec<usize>,
    pub g3: Vec<usize>,
    pub x12: Vec<usize>,
    pub x23: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x13: Option<Vec<usize>>,
}

/// Either raw `hom`/`compose`/`identity` blocks or a `group_spec`.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParcelDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hom: Option<HomBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub compose: Option<Vec<ComposeBlock>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub identity: Option<[usize; 3]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group_spec: Option<GroupSpecDocument>,
}

impl ParcelDocument {
    pub fn from_parcel(p: &Parcel) -> Self {
        let s = p.hom_sizes();
        let hom = HomBlock {
            g1: s.get(0, 0),
            g2: s.get(1, 1),
            g3: s.get(2, 2),
            x12: s.get(0, 1),
            x23: s.get(1, 2),
            x13: s.get(0, 2),
        };
        let compose = CHAINS
            .iter()
            .map(|&(i, j, k)| {
                let n2 = s.get(j, k);
                let table = p.table(i, j, k).iter().enumerate().map(|(at, &c)| [at / n2, at % n2, c]).collect();
                ComposeBlock { chain: [i + 1, j + 1, k + 1], table }
            })
            .collect();
        ParcelDocument { hom: Some(hom), compose: Some(compose), identity: Some(p.identities()), group_spec: None }
    }

    pub fn from_spec(spec: &GroupParcelSpec) -> Self {
        let [g1, g2, g3] = spec.g.clone();
        ParcelDocument {
            group_spec: Some(GroupSpecDocument {
                table: spec.group.table().to_vec(),
                g1,
                g2,
                g3,
                x12: spec.x12.clone(),
                x23: spec.x23.clone(),
                x13: spec.x13.clone(),
            }),
            ..Default::default()
        }
    }

    pub fn to_spec(&self) -> Result<Option<GroupParcelSpec>, IoError> {
        let Some(g) = &self.group_spec else { return Ok(None) };
        let group = FiniteGroup::from_table(g.table.clone()).map_err(|e| IoError::Invalid(e.to_string()))?;
        Ok(Some(GroupParcelSpec {
            group,
            g: [g.g1.clone(), g.g2.clone(), g.g3.clone()],
            x12: g.x12.clone(),
            x23: g.x23.clone(),
            x13: g.x13.clone(),
        }))
    }

    /// Raw blocks are assembled without validation; a group spec is
    /// checked while it is built.
    pub fn to_parcel(&self) -> Result<Parcel, IoError> {
        let raw = self.hom.is_some() || self.compose.is_some() || self.identity.is_some();
        match (raw, self.to_spec()?) {
            (true, Some(_)) => invalid("give either raw blocks or group_spec, not both"),
            (false, Some(spec)) => Ok(from_group_spec(&spec)?),
            (false, None) => invalid("parcel document is empty"),
            (true, None) => self.raw_parcel(),
        }
    }

    fn raw_parcel(&self) -> Result<Parcel, IoError> {
        let (Some(h), Some(blocks), Some(identity)) = (&self.hom, &self.compose, self.identity) else {
            return invalid("raw parcel needs hom, compose and identity");
        };
        let sizes = HomSizes::new(h.g1, h.g2, h.g3, h.x12, h.x23, h.x13);
        let mut compose: BTreeMap<(usize, usize, usize), Vec<usize>> = BTreeMap::new();
        for block in blocks {
            let [i, j, k] = block.chain;
            if !(1..=3).contains(&i) || !(i <= j && j <= k && k <= 3) {
                return invalid(format!("chain {:?} is not i ≤ j ≤ k in 1..3", block.chain));
            }
            let (i, j, k) = (i - 1, j - 1, k - 1);
            let (n1, n2, n3) = (sizes.get(i, j), sizes.get(j, k), sizes.get(i, k));
            let mut table = vec![None; n1 * n2];
            for &[a, b, c] in &block.table {
                if a >= n1 || b >= n2 || c >= n3 {
                    return invalid(format!("entry {:?} out of range in chain {:?}", [a, b, c], block.chain));
                }
                if table[a * n2 + b].replace(c).is_some() {
                    return invalid(format!("pair ({a}, {b}) listed twice in chain {:?}", block.chain));
                }
            }
            if let Some(at) = table.iter().position(Option::is_none) {
                return invalid(format!("pair ({}, {}) missing in chain {:?}", at / n2, at % n2, block.chain));
            }
            if compose.insert((i, j, k), table.into_iter().flatten().collect()).is_some() {
                return invalid(format!("chain {:?} listed twice", block.chain));
            }
        }
        if let Some(&(i, j, k)) = CHAINS.iter().find(|c| !compose.contains_key(c)) {
            return invalid(format!("no compose block for chain [{}, {}, {}]", i + 1, j + 1, k + 1));
        }
        Ok(Parcel::from_raw(sizes, compose.into_iter().collect(), identity))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CocycleEntry {
    /// Sources of the three arrows; the last one ends at object 3.
    pub chain: [usize; 3],
    pub args: [usize; 3],
    pub exponent: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CocycleDocument {
    pub order: u32,
    pub entries: Vec<CocycleEntry>,
}

/// An admissible triple with no entry, defaulted to exponent 0.
pub type MissingEntry = ((usize, usize, usize), [usize; 3]);

impl CocycleDocument {
    pub fn from_cocycle(alpha: &PartialCocycle) -> Self {
        let entries = alpha
            .entries()
            .map(|(f, g, h, e)| CocycleEntry {
                chain: [f.src.dim() as usize, g.src.dim() as usize, h.src.dim() as usize],
                args: [f.idx, g.idx, h.idx],
                exponent: e as i64,
            })
            .collect();
        CocycleDocument { order: alpha.order(), entries }
    }

    /// Interprets the entries against the hom sizes of a parcel.
    pub fn to_cocycle(&self, sizes: HomSizes) -> Result<(PartialCocycle, Vec<MissingEntry>), IoError> {
        let mut entries = Vec::with_capacity(self.entries.len());
        for e in &self.entries {
            if e.chain.iter().any(|&c| !(1..=3).contains(&c)) {
                return invalid(format!("chain {:?} has objects outside 1..3", e.chain));
            }
            let [i, j, k] = e.chain.map(|c| c - 1);
            entries.push(((i, j, k), e.args, e.exponent));
        }
        Ok(PartialCocycle::from_entries(sizes, self.order, &entries)?)
    }
}

/// A parsed document of any of the three kinds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Document {
    Triangulation(TriangulationDocument),
    Parcel(ParcelDocument),
    Cocycle(CocycleDocument),
}

pub fn parse_document(text: &str) -> Result<Document, IoError> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    let keys: Vec<String> = match &value {
        serde_json::Value::Object(map) => map.keys().cloned().collect(),
        _ => return invalid("top level must be an object"),
    };
    let has = |k: &str| keys.iter().any(|x| x == k);
    if has("vertices") || has("tetrahedra") {
        Ok(Document::Triangulation(serde_json::from_str(text)?))
    } else if has("hom") || has("compose") || has("identity") || has("group_spec") {
        Ok(Document::Parcel(serde_json::from_str(text)?))
    } else if has("order") || has("entries") {
        Ok(Document::Cocycle(serde_json::from_str(text)?))
    } else {
        Err(IoError::UnknownDocument(keys))
    }
}

pub fn parse_triangulation(text: &str) -> Result<StratifiedTriangulation, IoError> {
    serde_json::from_str::<TriangulationDocument>(text)?.to_triangulation()
}

pub fn parse_parcel(text: &str) -> Result<Parcel, IoError> {
    serde_json::from_str::<ParcelDocument>(text)?.to_parcel()
}

pub fn parse_cocycle(text: &str, sizes: HomSizes) -> Result<(PartialCocycle, Vec<MissingEntry>), IoError> {
    serde_json::from_str::<CocycleDocument>(text)?.to_cocycle(sizes)
}

pub fn to_json<T: Serialize>(doc: &T) -> String {
    serde_json::to_string_pretty(doc).expect("documents serialize")
}

pub fn triangulation_to_json(t: &StratifiedTriangulation) -> String {
    to_json(&TriangulationDocument::from_triangulation(t))
}

pub fn parcel_to_json(p: &Parcel) -> String {
    to_json(&ParcelDocument::from_parcel(p))
}

pub fn cocycle_to_json(alpha: &PartialCocycle) -> String {
    to_json(&CocycleDocument::from_cocycle(alpha))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocycle::{pullback_group_cocycle, restrict, standard_cyclic_cocycle};
    use crate::fixtures::s3_join_fixture;

    fn z(n: usize) -> GroupParcelSpec {
        GroupParcelSpec::full(FiniteGroup::cyclic(n))
    }

    #[test]
    fn triangulation_round_trip() {
        let t = s3_join_fixture();
        assert_eq!(parse_triangulation(&triangulation_to_json(&t)).unwrap(), t);
    }

    #[test]
    fn raw_parcel_round_trip() {
        let p = from_group_spec(&z(3)).unwrap();
        let q = parse_parcel(&parcel_to_json(&p)).unwrap();
        assert_eq!(q.hom_sizes(), p.hom_sizes());
        assert_eq!(q.identities(), p.identities());
        for (i, j, k) in CHAINS {
            assert_eq!(q.table(i, j, k), p.table(i, j, k));
        }
    }

    #[test]
    fn spec_parcel_round_trip() {
        let spec = z(2);
        let doc = ParcelDocument::from_spec(&spec);
        let text = to_json(&doc);
        assert_eq!(parse_document(&text).unwrap(), Document::Parcel(doc));
        assert_eq!(parse_parcel(&text).unwrap(), from_group_spec(&spec).unwrap());
    }

    #[test]
    fn cocycle_round_trip() {
        let p = from_group_spec(&z(3)).unwrap();
        let beta = pullback_group_cocycle(&p, &standard_cyclic_cocycle(3, 1)).unwrap();
        let alpha = restrict(&beta, &p).unwrap();
        let (back, missing) = parse_cocycle(&cocycle_to_json(&alpha), p.hom_sizes()).unwrap();
        assert_eq!(back, alpha);
        assert!(missing.is_empty());
    }

    #[test]
    fn missing_cocycle_entries_default_to_zero() {
        let p = from_group_spec(&z(2)).unwrap();
        let text = r#"{"order": 2, "entries": [{"chain": [3, 3, 3], "args": [1, 1, 1], "exponent": 1}]}"#;
        let (alpha, missing) = parse_cocycle(text, p.hom_sizes()).unwrap();
        assert_eq!(missing.len(), alpha.domain_size() - 1);
        assert_eq!(alpha.exponent_idx(2, 2, 2, 1, 1, 1), 1);
        assert_eq!(alpha.exponent_idx(2, 2, 2, 0, 1, 1), 0);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let text = r#"{"vertices": [], "tetrahedra": [], "colour": 3}"#;
        assert!(matches!(parse_document(text), Err(IoError::Parse { .. })));
    }

    #[test]
    fn parse_errors_carry_positions() {
        let text = "{\n  \"order\": 2,\n  \"entries\": [\n    {\"chain\": [3, 3], \"args\": [0, 0, 0], \"exponent\": 0}\n  ]\n}";
        match parse_document(text) {
            Err(IoError::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_document(""), Err(IoError::Parse { line: 1, .. })));
    }

    #[test]
    fn document_kinds_are_detected() {
        let t = triangulation_to_json(&s3_join_fixture());
        assert!(matches!(parse_document(&t), Ok(Document::Triangulation(_))));
        assert!(matches!(parse_document(r#"{"foo": 1}"#), Err(IoError::UnknownDocument(_))));
    }
}

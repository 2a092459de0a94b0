//! The cover document format: canonical JSON with decimal birth strings.
//!
//! Documents are canonicalized on load (closure completion, sorted
//! simplices, normalized decimals) so that emit(parse(doc)) is a fixpoint
//! and byte-stable across runs.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::fmt;

use nervecheck_core::cell::{Simplex, MAX_SIMPLEX_VERTICES};
use nervecheck_core::cover::{CoverFiltration, MAX_COVER_ELEMENTS};
use nervecheck_core::filtration::{Filtration, FiltrationError};
use nervecheck_core::scale::Scale;

/// A scale rendered as a decimal string without exponent and with trailing
/// zeros trimmed ("0", "1.5", "inf"); numbers are accepted on input.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Decimal(pub f64);

impl Decimal {
    pub fn render(value: f64) -> String {
        if value.is_infinite() {
            "inf".to_string()
        } else {
            format!("{}", value)
        }
    }
}

impl fmt::Display for Decimal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", Decimal::render(self.0))
    }
}

impl Serialize for Decimal {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&Decimal::render(self.0))
    }
}

impl<'de> Deserialize<'de> for Decimal {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Decimal, D::Error> {
        use serde::de::Error;
        let v = serde_json::Value::deserialize(deserializer)?;
        let parsed = match &v {
            serde_json::Value::String(s) => {
                if s == "inf" {
                    Some(f64::INFINITY)
                } else {
                    s.parse::<f64>().ok()
                }
            }
            serde_json::Value::Number(n) => n.as_f64(),
            _ => None,
        };
        match parsed {
            Some(x) if !x.is_nan() => Ok(Decimal(x)),
            _ => Err(D::Error::custom(format!("invalid decimal value: {}", v))),
        }
    }
}

/// Optional provenance of generated documents, echoed into reports so that
/// nominal and computed values can be compared side by side.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FamilyInfo {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(rename = "nominalEpsilon", skip_serializing_if = "Option::is_none")]
    pub nominal_epsilon: Option<Decimal>,
    #[serde(rename = "nominalDim", skip_serializing_if = "Option::is_none")]
    pub nominal_dim: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimplexDoc {
    pub verts: Vec<u32>,
    pub birth: Decimal,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementDoc {
    pub name: String,
    pub simplices: Vec<SimplexDoc>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverDocument {
    #[serde(rename = "formatVersion")]
    pub format_version: u32,
    #[serde(rename = "vertexCount")]
    pub vertex_count: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<FamilyInfo>,
    pub cover: Vec<ElementDoc>,
}

#[derive(Debug, thiserror::Error)]
pub enum ParseError {
    #[error("malformed document: {0}")]
    Json(String),
    #[error("unsupported formatVersion {0} (expected 1)")]
    Version(u32),
    #[error("at least one cover element is required")]
    EmptyCover,
    #[error("too many cover elements ({0}); at most {max} are supported", max = MAX_COVER_ELEMENTS)]
    TooManyElements(usize),
    #[error("element {element}: simplex on {verts} vertices exceeds the supported {max}", max = MAX_SIMPLEX_VERTICES)]
    SimplexTooLarge { element: String, verts: usize },
    #[error("element {element}: vertex id {vertex} exceeds vertexCount {count}")]
    VertexOutOfRange {
        element: String,
        vertex: u32,
        count: u32,
    },
    #[error("element {element}: simplex {verts:?} has repeated vertices")]
    RepeatedVertex { element: String, verts: Vec<u32> },
    #[error("element {element}: empty vertex list")]
    EmptySimplex { element: String },
    #[error("element {element}: birth {birth} is not a finite nonnegative scale")]
    BadBirth { element: String, birth: String },
    #[error("element {element}: {source}")]
    Births {
        element: String,
        source: FiltrationError,
    },
}

/// Parses and validates a document, returning the cover together with its
/// canonicalized form.
pub fn parse_cover(bytes: &[u8]) -> Result<(CoverFiltration, CoverDocument), ParseError> {
    let doc: CoverDocument =
        serde_json::from_slice(bytes).map_err(|e| ParseError::Json(e.to_string()))?;
    if doc.format_version != 1 {
        return Err(ParseError::Version(doc.format_version));
    }
    if doc.cover.is_empty() {
        return Err(ParseError::EmptyCover);
    }
    if doc.cover.len() > MAX_COVER_ELEMENTS {
        return Err(ParseError::TooManyElements(doc.cover.len()));
    }
    let mut names = Vec::with_capacity(doc.cover.len());
    let mut elements = Vec::with_capacity(doc.cover.len());
    for el in &doc.cover {
        let mut items: Vec<(Simplex, Scale)> = Vec::with_capacity(el.simplices.len());
        for sd in &el.simplices {
            if sd.verts.is_empty() {
                return Err(ParseError::EmptySimplex {
                    element: el.name.clone(),
                });
            }
            if sd.verts.len() > MAX_SIMPLEX_VERTICES {
                return Err(ParseError::SimplexTooLarge {
                    element: el.name.clone(),
                    verts: sd.verts.len(),
                });
            }
            let mut verts = sd.verts.clone();
            verts.sort_unstable();
            if verts.windows(2).any(|w| w[0] == w[1]) {
                return Err(ParseError::RepeatedVertex {
                    element: el.name.clone(),
                    verts: sd.verts.clone(),
                });
            }
            if let Some(&v) = verts.iter().find(|&&v| v >= doc.vertex_count) {
                return Err(ParseError::VertexOutOfRange {
                    element: el.name.clone(),
                    vertex: v,
                    count: doc.vertex_count,
                });
            }
            if !(sd.birth.0.is_finite() && sd.birth.0 >= 0.0) {
                return Err(ParseError::BadBirth {
                    element: el.name.clone(),
                    birth: sd.birth.to_string(),
                });
            }
            items.push((Simplex::new(verts), Scale::new(sd.birth.0)));
        }
        let filtration =
            Filtration::close_and_validate(items).map_err(|source| ParseError::Births {
                element: el.name.clone(),
                source,
            })?;
        names.push(el.name.clone());
        elements.push(filtration);
    }
    let cover = CoverFiltration::new(names, elements, doc.vertex_count);
    let canonical = document_of(&cover, doc.family.clone());
    Ok((cover, canonical))
}

/// The canonical document of a cover: closure-complete simplex lists sorted
/// by (birth, dim, verts).
pub fn document_of(cover: &CoverFiltration, family: Option<FamilyInfo>) -> CoverDocument {
    let cover_docs = cover
        .names()
        .iter()
        .zip(cover.elements())
        .map(|(name, f)| {
            let mut simplices: Vec<SimplexDoc> = f
                .births()
                .iter()
                .map(|(s, &b)| SimplexDoc {
                    verts: s.vertices().to_vec(),
                    birth: Decimal(b.value()),
                })
                .collect();
            simplices.sort_by(|a, b| {
                Scale::new(a.birth.0)
                    .cmp(&Scale::new(b.birth.0))
                    .then(a.verts.len().cmp(&b.verts.len()))
                    .then(a.verts.cmp(&b.verts))
            });
            ElementDoc {
                name: name.clone(),
                simplices,
            }
        })
        .collect();
    CoverDocument {
        format_version: 1,
        vertex_count: cover.vertex_count(),
        family,
        cover: cover_docs,
    }
}

/// Serializes a document to its canonical bytes (pretty JSON, newline
/// terminated).
pub fn emit_document(doc: &CoverDocument) -> String {
    let mut out = serde_json::to_string_pretty(doc).expect("document serialization is infallible");
    out.push('\n');
    out
}

/// Canonical bytes of a cover.
pub fn emit_cover(cover: &CoverFiltration, family: Option<FamilyInfo>) -> String {
    emit_document(&document_of(cover, family))
}

/// Hex SHA-256 of the canonical document bytes.
pub fn digest(canonical: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(canonical.as_bytes());
    format!("{:x}", hasher.finalize())
}

/// Counts simplex records across all elements (canonical record count).
pub fn record_count(doc: &CoverDocument) -> usize {
    doc.cover.iter().map(|e| e.simplices.len()).sum()
}

/// Builds the family stamp for generated tight documents, carrying the
/// construction's nominal goodness and feature dimension for comparison
/// against computed values.
pub fn tight_family(n: u32) -> FamilyInfo {
    FamilyInfo {
        name: "tight".to_string(),
        n: Some(n),
        nominal_epsilon: Some(Decimal(1.0)),
        nominal_dim: Some(n),
        seed: None,
    }
}

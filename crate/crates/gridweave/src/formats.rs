//! On-disk formats: the embedding JSON document and the graph content hash
//! that binds a drawing to the graph it was drawn for.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::engine::Embedding;
use crate::geometry::GridPoint;
use crate::graph::Graph;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed embedding JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("embedding file declares n = {declared} but carries {found} points")]
    PointCountMismatch { declared: usize, found: usize },
    #[error("embedding was drawn for a different graph (hash {file_hash}, graph {graph_hash})")]
    GraphMismatch { file_hash: String, graph_hash: String },
}

/// SHA-256 of the canonical edge-list serialization, in lowercase hex.
pub fn graph_hash(g: &Graph) -> String {
    let digest = Sha256::digest(g.to_edge_list().as_bytes());
    let mut out = String::with_capacity(64);
    for byte in digest {
        use std::fmt::Write as _;
        let _ = write!(out, "{byte:02x}");
    }
    out
}

/// The embedding JSON document: `{"m", "n", "points", "graph_hash"}` with
/// `points[v] = [x, y, z]` indexed by vertex id.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingFile {
    pub m: u32,
    pub n: usize,
    pub points: Vec<[i64; 3]>,
    pub graph_hash: String,
}

impl EmbeddingFile {
    pub fn new(embedding: &Embedding, g: &Graph) -> Self {
        EmbeddingFile {
            m: embedding.m,
            n: embedding.n(),
            points: embedding.points.iter().map(|&p| p.into()).collect(),
            graph_hash: graph_hash(g),
        }
    }

    /// Serializes with a fixed layout; identical inputs give identical bytes.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string(self).expect("embedding file always serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, FormatError> {
        let file: EmbeddingFile = serde_json::from_str(text)?;
        if file.points.len() != file.n {
            return Err(FormatError::PointCountMismatch {
                declared: file.n,
                found: file.points.len(),
            });
        }
        Ok(file)
    }

    /// Checks that this drawing was produced for `g`.
    pub fn check_graph(&self, g: &Graph) -> Result<(), FormatError> {
        let expected = graph_hash(g);
        if self.graph_hash != expected {
            return Err(FormatError::GraphMismatch {
                file_hash: self.graph_hash.clone(),
                graph_hash: expected,
            });
        }
        Ok(())
    }

    /// The embedding carried by the file. Geometric well-formedness (range,
    /// distinctness) is the verifier's job, not the parser's.
    pub fn to_embedding(&self) -> Embedding {
        Embedding {
            m: self.m,
            points: self.points.iter().map(|&c| GridPoint::from(c)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{draw_first_moment, DrawingParams};

    fn sample() -> (Graph, Embedding) {
        let g = Graph::parse("4 3\n0 1\n1 2\n2 3").unwrap();
        let out = draw_first_moment(&g, &DrawingParams { seed: 4, ..Default::default() }).unwrap();
        (g, out.embedding)
    }

    #[test]
    fn json_roundtrip_is_identity() {
        let (g, emb) = sample();
        let file = EmbeddingFile::new(&emb, &g);
        let parsed = EmbeddingFile::from_json(&file.to_json()).unwrap();
        assert_eq!(file, parsed);
        assert_eq!(parsed.to_embedding(), emb);
    }

    #[test]
    fn serialization_is_byte_deterministic() {
        let (g, emb) = sample();
        let a = EmbeddingFile::new(&emb, &g).to_json();
        let b = EmbeddingFile::new(&emb, &g).to_json();
        assert_eq!(a, b);
    }

    #[test]
    fn hash_binds_drawing_to_graph() {
        let (g, emb) = sample();
        let file = EmbeddingFile::new(&emb, &g);
        assert!(file.check_graph(&g).is_ok());
        let other = Graph::parse("4 2\n0 1\n2 3").unwrap();
        assert!(matches!(
            file.check_graph(&other),
            Err(FormatError::GraphMismatch { .. })
        ));
    }

    #[test]
    fn point_count_mismatch_detected() {
        let text = r#"{"m": 3, "n": 2, "points": [[0,0,0]], "graph_hash": ""}"#;
        assert!(matches!(
            EmbeddingFile::from_json(text),
            Err(FormatError::PointCountMismatch { declared: 2, found: 1 })
        ));
    }

    #[test]
    fn hash_is_stable_under_edge_order() {
        let a = Graph::parse("3 2\n0 1\n1 2").unwrap();
        let b = Graph::parse("3 2\n1 2\n0 1").unwrap();
        assert_eq!(graph_hash(&a), graph_hash(&b));
    }
}

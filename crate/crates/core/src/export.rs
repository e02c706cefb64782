//! Serialized forms of rook posets: JSON (round-trips), DOT and CSV.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poset::{Edge, GradedPoset, MobiusTable, PosetParts};
use crate::rook::{CoverType, EdgeLabel, RookElement};
use crate::instances::RookPoset;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instance: Option<String>,
    pub graded: bool,
    pub elements: Vec<ElementRecord>,
    pub edges: Vec<EdgeRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ElementRecord {
    pub index: usize,
    pub entries: RookElement,
    pub rank: u32,
    pub length: usize,
    pub matrix_rank: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub source: usize,
    pub target: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<EdgeLabel>,
    #[serde(default, rename = "type", skip_serializing_if = "Option::is_none")]
    pub kind: Option<CoverType>,
}

pub fn to_document(poset: &RookPoset, instance: Option<&str>) -> PosetDocument {
    let elements = (0..poset.len())
        .map(|i| {
            let x = poset.element(i);
            ElementRecord {
                index: i,
                entries: x.clone(),
                rank: poset.rank(i),
                length: x.length(),
                matrix_rank: x.matrix_rank(),
            }
        })
        .collect();
    let mut edges = Vec::with_capacity(poset.edge_count());
    for source in 0..poset.len() {
        for edge in poset.up_covers(source) {
            let kind = poset
                .element(source)
                .is_cover(poset.element(edge.target))
                .ok()
                .flatten();
            edges.push(EdgeRecord {
                source,
                target: edge.target,
                label: edge.label,
                kind,
            });
        }
    }
    PosetDocument {
        instance: instance.map(str::to_owned),
        graded: poset.is_graded(),
        elements,
        edges,
    }
}

/// Rebuilds a poset from its JSON document, validating it like any other.
pub fn from_document(doc: &PosetDocument) -> Result<RookPoset> {
    let len = doc.elements.len();
    for (pos, record) in doc.elements.iter().enumerate() {
        if record.index != pos {
            return Err(Error::Parse(format!(
                "element record {pos} carries index {}",
                record.index
            )));
        }
    }
    let mut up: Vec<Vec<Edge>> = vec![Vec::new(); len];
    for e in &doc.edges {
        if e.source >= len {
            return Err(Error::UnknownIndex(e.source));
        }
        up[e.source].push(Edge {
            target: e.target,
            label: e.label,
        });
    }
    GradedPoset::from_parts(PosetParts {
        elements: doc.elements.iter().map(|r| r.entries.clone()).collect(),
        ranks: doc.elements.iter().map(|r| r.rank).collect(),
        up,
        graded: doc.graded,
    })
}

pub fn to_json(poset: &RookPoset, instance: Option<&str>) -> Result<String> {
    Ok(serde_json::to_string_pretty(&to_document(poset, instance))?)
}

pub fn from_json(text: &str) -> Result<RookPoset> {
    let doc: PosetDocument = serde_json::from_str(text)?;
    from_document(&doc)
}

/// Hasse diagram as a bottom-to-top DOT digraph; labeled edges carry
/// `label="(a,b)"`.
pub fn to_dot(poset: &RookPoset, name: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph \"{}\" {{", name.replace('"', "'"));
    let _ = writeln!(out, "  rankdir=BT;");
    let _ = writeln!(out, "  node [shape=plaintext];");
    for i in 0..poset.len() {
        let _ = writeln!(out, "  n{i} [label=\"{}\"];", poset.element(i));
    }
    for source in 0..poset.len() {
        for edge in poset.up_covers(source) {
            match edge.label {
                Some(l) => {
                    let _ = writeln!(out, "  n{source} -> n{} [label=\"{l}\"];", edge.target);
                }
                None => {
                    let _ = writeln!(out, "  n{source} -> n{};", edge.target);
                }
            }
        }
    }
    out.push_str("}\n");
    out
}

fn csv_text(writer: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = writer
        .into_inner()
        .map_err(|e| Error::Parse(format!("csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::Parse(format!("csv: {e}")))
}

fn csv_err(e: csv::Error) -> Error {
    Error::Parse(format!("csv: {e}"))
}

/// `index,element,rank,length,matrix_rank`.
pub fn elements_csv(poset: &RookPoset) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["index", "element", "rank", "length", "matrix_rank"])
        .map_err(csv_err)?;
    for i in 0..poset.len() {
        let x = poset.element(i);
        w.write_record([
            i.to_string(),
            x.to_string(),
            poset.rank(i).to_string(),
            x.length().to_string(),
            x.matrix_rank().to_string(),
        ])
        .map_err(csv_err)?;
    }
    csv_text(w)
}

/// `source,target,label,type`.
pub fn edges_csv(poset: &RookPoset) -> Result<String> {
    let doc = to_document(poset, None);
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["source", "target", "label", "type"])
        .map_err(csv_err)?;
    for e in &doc.edges {
        w.write_record([
            poset.element(e.source).to_string(),
            poset.element(e.target).to_string(),
            e.label.map(|l| l.to_string()).unwrap_or_default(),
            e.kind.map(|k| k.to_string()).unwrap_or_default(),
        ])
        .map_err(csv_err)?;
    }
    csv_text(w)
}

/// `bottom,top,length,mu` for every comparable pair.
pub fn mobius_csv(poset: &RookPoset, table: &MobiusTable) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["bottom", "top", "length", "mu"])
        .map_err(csv_err)?;
    for (x, y, mu) in table.iter() {
        w.write_record([
            poset.element(x).to_string(),
            poset.element(y).to_string(),
            (poset.rank(y) - poset.rank(x)).to_string(),
            mu.to_string(),
        ])
        .map_err(csv_err)?;
    }
    csv_text(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{build_rook, build_rook_rank_level, build_symmetric};

    #[test]
    fn json_round_trip_is_identical() {
        for p in [
            build_rook(3, 6).unwrap(),
            build_symmetric(3, 6).unwrap(),
            build_rook_rank_level(3, 2, 6).unwrap(),
        ] {
            let text = to_json(&p, Some("x")).unwrap();
            let back = from_json(&text).unwrap();
            let (a, b) = (p.to_parts(), back.to_parts());
            assert_eq!(a.elements, b.elements);
            assert_eq!(a.ranks, b.ranks);
            assert_eq!(a.up, b.up);
            assert_eq!(a.graded, b.graded);
        }
    }

    #[test]
    fn json_rejects_bad_documents() {
        let p = build_rook(2, 6).unwrap();
        let mut doc = to_document(&p, None);
        doc.elements[1].rank += 5;
        assert!(from_document(&doc).is_err());
        let mut doc = to_document(&p, None);
        doc.elements.swap(0, 1);
        assert!(from_document(&doc).is_err());
    }

    #[test]
    fn dot_edges_carry_labels() {
        let p = build_rook(1, 6).unwrap();
        let dot = to_dot(&p, "rook:1");
        assert!(dot.contains("n0 [label=\"(0)\"];"));
        assert!(dot.contains("n0 -> n1 [label=\"(0,1)\"];"));
        assert!(dot.starts_with("digraph \"rook:1\" {"));
    }

    #[test]
    fn csv_quotes_elements() {
        let p = build_rook(2, 6).unwrap();
        let csv = elements_csv(&p).unwrap();
        assert!(csv.lines().nth(1).unwrap().starts_with("0,\"(0,0)\",0,0,0"));
        let table = p.mobius_table();
        let mcsv = mobius_csv(&p, &table).unwrap();
        assert_eq!(mcsv.lines().count(), 1 + table.len());
        let ecsv = edges_csv(&p).unwrap();
        assert_eq!(ecsv.lines().count(), 1 + p.edge_count());
    }
}

//! k-uniform hypergraphs with optional domain labels.
//!
//! Vertices are indices `0..vertex_count`. Edges are k-sets kept in a
//! canonical form: sorted within each edge, edges sorted lexicographically,
//! duplicates removed. A hypergraph may carry a bidirectional label map back
//! to the domain it was generated from (integers, lattice points, or sets).

use std::collections::HashMap;
use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::subset::VertexSubset;
use crate::{Error, Result};

/// Domain label of a vertex: an integer, a lattice point, or a set.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum Label {
    Integer(i64),
    Point(Vec<i64>),
    Subset(Vec<i64>),
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Integer(v) => write!(f, "{v}"),
            Label::Point(cs) => {
                write!(f, "(")?;
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
            Label::Subset(cs) => {
                write!(f, "{{")?;
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, "}}")
            }
        }
    }
}

impl FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Label> {
        let parse_list = |inner: &str| -> Result<Vec<i64>> {
            inner
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse::<i64>()
                        .map_err(|_| Error::format(format!("bad label component {t:?}")))
                })
                .collect()
        };
        let s = s.trim();
        if let Some(inner) = s.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
            Ok(Label::Point(parse_list(inner)?))
        } else if let Some(inner) = s.strip_prefix('{').and_then(|r| r.strip_suffix('}')) {
            Ok(Label::Subset(parse_list(inner)?))
        } else {
            s.parse::<i64>()
                .map(Label::Integer)
                .map_err(|_| Error::format(format!("bad label {s:?}")))
        }
    }
}

/// An induced subhypergraph together with the original index of each of its
/// (contiguously relabeled) vertices.
#[derive(Clone, Debug)]
pub struct InducedSubhypergraph {
    pub hypergraph: UniformHypergraph,
    /// `original_vertices[new_index] = old_index`, ascending.
    pub original_vertices: Vec<usize>,
}

/// A k-uniform hypergraph in canonical form.
#[derive(Clone, Debug)]
pub struct UniformHypergraph {
    k: usize,
    vertex_count: usize,
    /// Flat edge storage, stride `k`, canonical order.
    verts: Vec<u32>,
    /// Edge indices through each vertex, ascending.
    incidence: Vec<Vec<u32>>,
    labels: Option<LabelMap>,
}

#[derive(Clone, Debug)]
struct LabelMap {
    by_index: Vec<Label>,
    by_label: HashMap<Label, usize>,
}

impl PartialEq for UniformHypergraph {
    fn eq(&self, other: &Self) -> bool {
        self.k == other.k
            && self.vertex_count == other.vertex_count
            && self.verts == other.verts
            && self.labels.as_ref().map(|l| &l.by_index)
                == other.labels.as_ref().map(|l| &l.by_index)
    }
}

impl Eq for UniformHypergraph {}

impl UniformHypergraph {
    /// Builds a hypergraph from raw edges, canonicalizing and deduplicating.
    /// Requires k >= 2; every edge must be a k-set of in-range vertices.
    pub fn new(k: usize, vertex_count: usize, edges: Vec<Vec<u32>>) -> Result<Self> {
        if k < 2 {
            return Err(Error::invalid(format!("uniformity k = {k}, need k >= 2")));
        }
        let mut canon: Vec<Vec<u32>> = Vec::with_capacity(edges.len());
        for mut e in edges {
            if e.len() != k {
                return Err(Error::invalid(format!(
                    "edge {e:?} has {} vertices, expected {k}",
                    e.len()
                )));
            }
            e.sort_unstable();
            if e.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::invalid(format!("edge {e:?} repeats a vertex")));
            }
            if let Some(&v) = e.last() {
                if v as usize >= vertex_count {
                    return Err(Error::invalid(format!(
                        "edge {e:?} exceeds vertex count {vertex_count}"
                    )));
                }
            }
            canon.push(e);
        }
        canon.sort_unstable();
        canon.dedup();

        let mut verts = Vec::with_capacity(canon.len() * k);
        for e in &canon {
            verts.extend_from_slice(e);
        }
        let mut incidence = vec![Vec::new(); vertex_count];
        for (ei, e) in canon.iter().enumerate() {
            for &v in e {
                incidence[v as usize].push(ei as u32);
            }
        }
        Ok(UniformHypergraph {
            k,
            vertex_count,
            verts,
            incidence,
            labels: None,
        })
    }

    /// Attaches a bijective label map (`labels[i]` names vertex `i`).
    pub fn with_labels(mut self, labels: Vec<Label>) -> Result<Self> {
        if labels.len() != self.vertex_count {
            return Err(Error::invalid(format!(
                "{} labels for {} vertices",
                labels.len(),
                self.vertex_count
            )));
        }
        let mut by_label = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            if by_label.insert(l.clone(), i).is_some() {
                return Err(Error::invalid(format!("duplicate label {l}")));
            }
        }
        self.labels = Some(LabelMap {
            by_index: labels,
            by_label,
        });
        Ok(self)
    }

    pub fn uniformity(&self) -> usize {
        self.k
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.verts.len() / self.k
    }

    pub fn edge(&self, index: usize) -> &[u32] {
        &self.verts[index * self.k..(index + 1) * self.k]
    }

    /// Flat edge storage, k vertex ids per edge. Every id is validated
    /// against the vertex count on construction.
    pub(crate) fn flat_edges(&self) -> &[u32] {
        &self.verts
    }

    pub fn edges(&self) -> impl Iterator<Item = &[u32]> {
        self.verts.chunks_exact(self.k)
    }

    /// Indices of the edges through `v`, ascending.
    pub fn incident_edges(&self, v: usize) -> &[u32] {
        &self.incidence[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.incidence[v].len()
    }

    pub fn label(&self, v: usize) -> Option<&Label> {
        self.labels.as_ref().map(|m| &m.by_index[v])
    }

    pub fn labels(&self) -> Option<&[Label]> {
        self.labels.as_ref().map(|m| m.by_index.as_slice())
    }

    pub fn index_of_label(&self, label: &Label) -> Option<usize> {
        self.labels.as_ref().and_then(|m| m.by_label.get(label)).copied()
    }

    fn check_domain(&self, set: &VertexSubset, what: &str) -> Result<()> {
        if set.domain_size() != self.vertex_count {
            return Err(Error::invalid(format!(
                "{what} has domain {} but hypergraph has {} vertices",
                set.domain_size(),
                self.vertex_count
            )));
        }
        Ok(())
    }

    /// The subhypergraph induced on `set`, with vertices relabeled to
    /// `0..set.len()` and the original indices reported alongside.
    pub fn induced(&self, set: &VertexSubset) -> Result<InducedSubhypergraph> {
        self.check_domain(set, "induced vertex set")?;
        let original_vertices = set.to_indices();
        let mut forward = vec![u32::MAX; self.vertex_count];
        for (new, &old) in original_vertices.iter().enumerate() {
            forward[old] = new as u32;
        }
        let mut edges = Vec::new();
        for e in self.edges() {
            if e.iter().all(|&v| set.contains(v as usize)) {
                edges.push(e.iter().map(|&v| forward[v as usize]).collect());
            }
        }
        let mut sub = UniformHypergraph::new(self.k, original_vertices.len(), edges)?;
        if let Some(map) = &self.labels {
            let labels = original_vertices
                .iter()
                .map(|&old| map.by_index[old].clone())
                .collect();
            sub = sub.with_labels(labels)?;
        }
        Ok(InducedSubhypergraph {
            hypergraph: sub,
            original_vertices,
        })
    }

    /// Number of edges through `v` that keep at least `min_overlap` of their
    /// other vertices inside `sample`. Requires `1 <= min_overlap < k`; `v`
    /// itself is ignored when intersecting (`sample` may or may not hold it).
    pub fn overlap_degree(
        &self,
        v: usize,
        sample: &VertexSubset,
        min_overlap: usize,
    ) -> Result<usize> {
        self.check_domain(sample, "sample")?;
        if v >= self.vertex_count {
            return Err(Error::invalid(format!("vertex {v} out of range")));
        }
        if min_overlap == 0 || min_overlap >= self.k {
            return Err(Error::invalid(format!(
                "overlap threshold {min_overlap} outside 1..{}",
                self.k
            )));
        }
        let mut count = 0;
        for &ei in &self.incidence[v] {
            let hits = self
                .edge(ei as usize)
                .iter()
                .filter(|&&u| u as usize != v && sample.contains(u as usize))
                .count();
            if hits >= min_overlap {
                count += 1;
            }
        }
        Ok(count)
    }

    /// Number of edges of the subhypergraph induced on `within` that meet
    /// `overlap` in at least `min_overlap` vertices. Requires
    /// `overlap` to be a subset of `within` and `min_overlap <= k`.
    /// `min_overlap = 0` counts all edges inside `within`; `min_overlap = k`
    /// counts the edges inside `overlap`.
    pub fn overlap_edge_count(
        &self,
        within: &VertexSubset,
        overlap: &VertexSubset,
        min_overlap: usize,
    ) -> Result<usize> {
        self.check_domain(within, "within")?;
        self.check_domain(overlap, "overlap")?;
        if !overlap.is_subset_of(within) {
            return Err(Error::invalid(
                "overlap set is not contained in the induced set".to_string(),
            ));
        }
        if min_overlap > self.k {
            return Err(Error::invalid(format!(
                "overlap threshold {min_overlap} exceeds uniformity {}",
                self.k
            )));
        }
        let mut count = 0;
        for e in self.edges() {
            if !e.iter().all(|&v| within.contains(v as usize)) {
                continue;
            }
            let hits = e.iter().filter(|&&v| overlap.contains(v as usize)).count();
            if hits >= min_overlap {
                count += 1;
            }
        }
        Ok(count)
    }

    /// Writes the canonical text form:
    /// a `k <k> n <vertices> m <edges>` header, one sorted edge per line,
    /// then `# label <index> <label>` lines if labels are attached.
    pub fn write_text<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(
            out,
            "k {} n {} m {}",
            self.k,
            self.vertex_count,
            self.edge_count()
        )?;
        for e in self.edges() {
            let line: Vec<String> = e.iter().map(|v| v.to_string()).collect();
            writeln!(out, "{}", line.join(" "))?;
        }
        if let Some(map) = &self.labels {
            for (i, l) in map.by_index.iter().enumerate() {
                writeln!(out, "# label {i} {l}")?;
            }
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut buf = Vec::new();
        self.write_text(&mut buf).expect("write to Vec cannot fail");
        String::from_utf8(buf).expect("text form is ASCII")
    }

    /// Parses the text form. `#` lines are comments except `# label i <l>`,
    /// which attach labels; unknown comments are skipped, so files may carry
    /// extra header lines.
    pub fn read_text<R: BufRead>(input: R) -> Result<Self> {
        let mut header: Option<(usize, usize, usize)> = None;
        let mut edges: Vec<Vec<u32>> = Vec::new();
        let mut labels: Vec<(usize, Label)> = Vec::new();
        for line in input.lines() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                let rest = rest.trim();
                if let Some(spec) = rest.strip_prefix("label ") {
                    let mut parts = spec.trim().splitn(2, ' ');
                    let idx: usize = parts
                        .next()
                        .and_then(|t| t.parse().ok())
                        .ok_or_else(|| Error::format(format!("bad label line {line:?}")))?;
                    let label: Label = parts
                        .next()
                        .ok_or_else(|| Error::format(format!("bad label line {line:?}")))?
                        .parse()?;
                    labels.push((idx, label));
                }
                continue;
            }
            if header.is_none() {
                let toks: Vec<&str> = line.split_whitespace().collect();
                if toks.len() != 6 || toks[0] != "k" || toks[2] != "n" || toks[4] != "m" {
                    return Err(Error::format(format!(
                        "expected 'k <k> n <vertices> m <edges>' header, got {line:?}"
                    )));
                }
                let parse = |t: &str| {
                    t.parse::<usize>()
                        .map_err(|_| Error::format(format!("bad header number {t:?}")))
                };
                header = Some((parse(toks[1])?, parse(toks[3])?, parse(toks[5])?));
                continue;
            }
            let edge: Vec<u32> = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<u32>()
                        .map_err(|_| Error::format(format!("bad vertex {t:?}")))
                })
                .collect::<Result<_>>()?;
            edges.push(edge);
        }
        let (k, n, m) = header.ok_or_else(|| Error::format("missing header line".to_string()))?;
        if edges.len() != m {
            return Err(Error::format(format!(
                "header claims {m} edges, found {}",
                edges.len()
            )));
        }
        let mut h = UniformHypergraph::new(k, n, edges)?;
        if h.edge_count() != m {
            return Err(Error::format(
                "edge list contains duplicates; file is not canonical".to_string(),
            ));
        }
        if !labels.is_empty() {
            if labels.len() != n {
                return Err(Error::format(format!(
                    "{} label lines for {n} vertices",
                    labels.len()
                )));
            }
            let mut by_index: Vec<Option<Label>> = vec![None; n];
            for (i, l) in labels {
                if i >= n || by_index[i].is_some() {
                    return Err(Error::format(format!("bad or repeated label index {i}")));
                }
                by_index[i] = Some(l);
            }
            h = h.with_labels(by_index.into_iter().map(|l| l.unwrap()).collect())?;
        }
        Ok(h)
    }
}

/// Serialized mirror used for embedding hypergraphs in JSON manifests.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawHypergraph {
    k: usize,
    vertex_count: usize,
    edges: Vec<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<Label>>,
}

impl Serialize for UniformHypergraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RawHypergraph {
            k: self.k,
            vertex_count: self.vertex_count,
            edges: self.edges().map(|e| e.to_vec()).collect(),
            labels: self.labels().map(|l| l.to_vec()),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for UniformHypergraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawHypergraph::deserialize(d)?;
        let mut h = UniformHypergraph::new(raw.k, raw.vertex_count, raw.edges)
            .map_err(serde::de::Error::custom)?;
        if let Some(labels) = raw.labels {
            h = h.with_labels(labels).map_err(serde::de::Error::custom)?;
        }
        Ok(h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Length-3 progressions in {1..5}, hand-listed: 123, 234, 345, 135.
    fn ap3_on_five() -> UniformHypergraph {
        UniformHypergraph::new(
            3,
            5,
            vec![vec![0, 1, 2], vec![1, 2, 3], vec![2, 3, 4], vec![0, 2, 4]],
        )
        .unwrap()
        .with_labels((1..=5).map(Label::Integer).collect())
        .unwrap()
    }

    #[test]
    fn canonicalizes_and_dedups() {
        let h = UniformHypergraph::new(
            3,
            6,
            vec![vec![5, 1, 3], vec![2, 0, 1], vec![1, 3, 5], vec![1, 2, 0]],
        )
        .unwrap();
        assert_eq!(h.edge_count(), 2);
        assert_eq!(h.edge(0), &[0, 1, 2]);
        assert_eq!(h.edge(1), &[1, 3, 5]);
        assert_eq!(h.degree(1), 2);
        assert_eq!(h.incident_edges(4), &[] as &[u32]);
    }

    #[test]
    fn rejects_degenerate_input() {
        assert!(UniformHypergraph::new(1, 3, vec![]).is_err());
        assert!(UniformHypergraph::new(2, 3, vec![vec![0, 0]]).is_err());
        assert!(UniformHypergraph::new(2, 3, vec![vec![0, 3]]).is_err());
        assert!(UniformHypergraph::new(2, 3, vec![vec![0]]).is_err());
    }

    #[test]
    fn overlap_degree_matches_hand_count() {
        let h = ap3_on_five();
        let full = VertexSubset::full(5);
        // Vertex with label 3 (index 2) lies in all four progressions, and
        // with the full sample every edge keeps both other vertices.
        let v = h.index_of_label(&Label::Integer(3)).unwrap();
        assert_eq!(h.overlap_degree(v, &full, 2).unwrap(), 4);
        assert_eq!(h.overlap_degree(v, &full, 1).unwrap(), 4);
        // Empty sample: no edge keeps a vertex.
        let empty = VertexSubset::empty(5);
        assert_eq!(h.overlap_degree(v, &empty, 1).unwrap(), 0);
        // Threshold bounds enforced.
        assert!(h.overlap_degree(v, &full, 0).is_err());
        assert!(h.overlap_degree(v, &full, 3).is_err());
    }

    #[test]
    fn overlap_degree_equals_degree_under_full_sample() {
        let h = ap3_on_five();
        let full = VertexSubset::full(5);
        for v in 0..5 {
            for t in 1..3 {
                assert_eq!(h.overlap_degree(v, &full, t).unwrap(), h.degree(v));
            }
        }
    }

    #[test]
    fn overlap_edge_count_matches_hand_count() {
        let h = ap3_on_five();
        let full = VertexSubset::full(5);
        // Labels {1,3} are indices {0,2}: only 123 and 135 meet them twice.
        let w = VertexSubset::from_indices(5, [0, 2]).unwrap();
        assert_eq!(h.overlap_edge_count(&full, &w, 2).unwrap(), 2);
        assert_eq!(h.overlap_edge_count(&full, &w, 1).unwrap(), 4);
        // Threshold 0 counts everything inside `within`.
        let empty = VertexSubset::empty(5);
        assert_eq!(h.overlap_edge_count(&full, &empty, 0).unwrap(), 4);
        // Threshold k counts edges inside the overlap set.
        assert_eq!(h.overlap_edge_count(&full, &w, 3).unwrap(), 0);
        let u = VertexSubset::from_indices(5, [0, 1, 2]).unwrap();
        assert_eq!(h.overlap_edge_count(&full, &u, 3).unwrap(), 1);
        // overlap must sit inside within.
        let outside = VertexSubset::from_indices(5, [2, 3]).unwrap();
        assert!(h.overlap_edge_count(&u, &outside, 1).is_err());
    }

    #[test]
    fn induced_drops_all_edges_without_middle_vertices() {
        let h = ap3_on_five();
        // Labels {1,2,4,5} = indices {0,1,3,4}: no progression survives.
        let u = VertexSubset::from_indices(5, [0, 1, 3, 4]).unwrap();
        let sub = h.induced(&u).unwrap();
        assert_eq!(sub.hypergraph.edge_count(), 0);
        assert_eq!(sub.hypergraph.vertex_count(), 4);
        assert_eq!(sub.original_vertices, vec![0, 1, 3, 4]);
        assert_eq!(sub.hypergraph.label(2), Some(&Label::Integer(4)));
    }

    #[test]
    fn induced_on_full_set_is_identity() {
        let h = ap3_on_five();
        let sub = h.induced(&VertexSubset::full(5)).unwrap();
        assert_eq!(sub.hypergraph, h);
    }

    #[test]
    fn induced_is_idempotent() {
        let h = ap3_on_five();
        let u = VertexSubset::from_indices(5, [0, 1, 2, 4]).unwrap();
        let first = h.induced(&u).unwrap();
        let again = first
            .hypergraph
            .induced(&VertexSubset::full(first.hypergraph.vertex_count()))
            .unwrap();
        assert_eq!(first.hypergraph, again.hypergraph);
    }

    #[test]
    fn text_round_trip_is_bit_exact() {
        let h = ap3_on_five();
        let text = h.to_text();
        let back = UniformHypergraph::read_text(text.as_bytes()).unwrap();
        assert_eq!(back, h);
        assert_eq!(back.to_text(), text);
    }

    #[test]
    fn text_reader_skips_foreign_comments() {
        let text = "# tool something v9\nk 2 n 3 m 1\n# a remark\n0 2\n";
        let h = UniformHypergraph::read_text(text.as_bytes()).unwrap();
        assert_eq!(h.edge_count(), 1);
        assert_eq!(h.edge(0), &[0, 2]);
    }

    #[test]
    fn text_reader_rejects_inconsistencies() {
        assert!(UniformHypergraph::read_text("k 2 n 3 m 2\n0 1\n".as_bytes()).is_err());
        assert!(UniformHypergraph::read_text("0 1\n".as_bytes()).is_err());
        assert!(UniformHypergraph::read_text("k 2 n 3 m 1\n0 1 2\n".as_bytes()).is_err());
    }

    #[test]
    fn labels_parse_all_shapes() {
        for (s, l) in [
            ("17", Label::Integer(17)),
            ("(1,0)", Label::Point(vec![1, 0])),
            ("{2,5}", Label::Subset(vec![2, 5])),
        ] {
            assert_eq!(s.parse::<Label>().unwrap(), l);
            assert_eq!(l.to_string(), s);
        }
        assert!("(1,x)".parse::<Label>().is_err());
    }

    #[test]
    fn json_round_trip() {
        let h = ap3_on_five();
        let js = serde_json::to_string(&h).unwrap();
        let back: UniformHypergraph = serde_json::from_str(&js).unwrap();
        assert_eq!(back, h);
    }
}

//! Density parameters of a fixed pattern hypergraph: the subgraph density
//! that sets the random-subset threshold exponent, the extremal (Turan)
//! density used as the baseline in sparse extremal statements, and a probe
//! for how thin induced subhypergraphs of a configuration hypergraph can be.

use num_rational::Rational64;
use serde::{Serialize, Serializer};

use crate::hypergraph::UniformHypergraph;
use crate::seeds::{derive, SplitMix};
use crate::subset::VertexSubset;
use crate::{Error, Result};

/// Largest pattern the exact subset enumerations accept.
const MAX_PATTERN_VERTICES: usize = 20;

/// Largest hypergraph the exact induced-edge minimization accepts; beyond
/// this a seeded local search provides an upper bound.
const MAX_EXACT_INDUCED: usize = 24;

/// Extremal edge-density limit of pattern-free subgraphs of complete hosts.
#[derive(Clone, Copy, PartialEq, Debug)]
pub enum TuranDensity {
    Known(Rational64),
    /// No exact value is available (non-partite patterns of uniformity
    /// >= 3); callers must supply a reference density explicitly.
    Unknown,
}

impl Serialize for TuranDensity {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            TuranDensity::Known(r) => s.serialize_str(&format!("{}/{}", r.numer(), r.denom())),
            TuranDensity::Unknown => s.serialize_str("unknown"),
        }
    }
}

/// Density data of a pattern hypergraph.
#[derive(Clone, Debug, Serialize)]
pub struct DensityReport {
    /// The maximum over vertex subsets S spanning at least one edge of
    /// (e(F[S]) - 1) / (|S| - l), taking 1/l for single edges. Its
    /// reciprocal is the threshold exponent for copy statements.
    #[serde(with = "crate::harness::ratio_text")]
    pub value: Rational64,
    /// Vertices of a maximizing subset (first maximizer in ascending
    /// bitmask order).
    pub witness_vertices: Vec<usize>,
    /// Extremal density reference for the pattern.
    pub turan_reference: TuranDensity,
}

/// Computes the threshold-governing subgraph density of a pattern.
/// Enumerates all vertex subsets via a sum-over-subsets edge-count table;
/// requires at least one edge and at most 20 vertices.
pub fn subgraph_density(pattern: &UniformHypergraph) -> Result<DensityReport> {
    let v = pattern.vertex_count();
    let ell = pattern.uniformity() as i64;
    if pattern.edge_count() == 0 {
        return Err(Error::invalid("pattern has no edges".to_string()));
    }
    if v > MAX_PATTERN_VERTICES {
        return Err(Error::invalid(format!(
            "subset enumeration needs <= {MAX_PATTERN_VERTICES} vertices, got {v}"
        )));
    }

    // inside[mask] = number of edges contained in the subset `mask`.
    let mut inside = vec![0u32; 1 << v];
    for e in pattern.edges() {
        let mask: usize = e.iter().map(|&x| 1usize << x).sum();
        inside[mask] += 1;
    }
    for b in 0..v {
        for mask in 0..1usize << v {
            if mask >> b & 1 == 1 {
                inside[mask] += inside[mask ^ (1 << b)];
            }
        }
    }

    let mut best: Option<(Rational64, usize)> = None;
    for mask in 1..1usize << v {
        let e = inside[mask] as i64;
        if e == 0 {
            continue;
        }
        let size = mask.count_ones() as i64;
        let d = if size > ell {
            Rational64::new(e - 1, size - ell)
        } else {
            Rational64::new(1, ell)
        };
        if best.map_or(true, |(b, _)| d > b) {
            best = Some((d, mask));
        }
    }
    let (value, mask) = best.expect("some edge exists");
    Ok(DensityReport {
        value,
        witness_vertices: (0..v).filter(|&x| mask >> x & 1 == 1).collect(),
        turan_reference: turan_density_reference(pattern)?,
    })
}

/// Extremal density of the pattern: for graphs, 1 - 1/(chi - 1) when the
/// chromatic number is at least 3 and 0 otherwise; for higher uniformity, 0
/// when the pattern is partite and unknown otherwise.
pub fn turan_density_reference(pattern: &UniformHypergraph) -> Result<TuranDensity> {
    if pattern.edge_count() == 0 {
        return Ok(TuranDensity::Known(Rational64::new(0, 1)));
    }
    if pattern.uniformity() == 2 {
        let chi = chromatic_number(pattern)? as i64;
        if chi >= 3 {
            Ok(TuranDensity::Known(Rational64::new(chi - 2, chi - 1)))
        } else {
            Ok(TuranDensity::Known(Rational64::new(0, 1)))
        }
    } else if is_partite(pattern)? {
        Ok(TuranDensity::Known(Rational64::new(0, 1)))
    } else {
        Ok(TuranDensity::Unknown)
    }
}

/// Exact chromatic number of a graph (2-uniform hypergraph) by branching.
pub fn chromatic_number(graph: &UniformHypergraph) -> Result<usize> {
    if graph.uniformity() != 2 {
        return Err(Error::invalid("chromatic number needs a 2-uniform pattern".to_string()));
    }
    let v = graph.vertex_count();
    if v > MAX_PATTERN_VERTICES {
        return Err(Error::invalid(format!(
            "coloring search needs <= {MAX_PATTERN_VERTICES} vertices, got {v}"
        )));
    }
    if v == 0 {
        return Ok(0);
    }
    let mut neighbors: Vec<Vec<usize>> = vec![Vec::new(); v];
    for e in graph.edges() {
        neighbors[e[0] as usize].push(e[1] as usize);
        neighbors[e[1] as usize].push(e[0] as usize);
    }
    // High-degree vertices first makes the branching collapse quickly.
    let mut order: Vec<usize> = (0..v).collect();
    order.sort_by_key(|&x| std::cmp::Reverse(neighbors[x].len()));

    fn colorable(
        pos: usize,
        order: &[usize],
        neighbors: &[Vec<usize>],
        colors: &mut [usize],
        r: usize,
    ) -> bool {
        if pos == order.len() {
            return true;
        }
        let x = order[pos];
        let mut used = 0usize;
        for &y in &neighbors[x] {
            if colors[y] != usize::MAX {
                used |= 1 << colors[y];
            }
        }
        // Symmetry break: only colors up to one past the highest used so far.
        let cap = r.min(pos + 1);
        for c in 0..cap {
            if used >> c & 1 == 0 {
                colors[x] = c;
                if colorable(pos + 1, order, neighbors, colors, r) {
                    return true;
                }
                colors[x] = usize::MAX;
            }
        }
        false
    }

    for r in 1..=v {
        let mut colors = vec![usize::MAX; v];
        if colorable(0, &order, &neighbors, &mut colors, r) {
            return Ok(r);
        }
    }
    unreachable!("v colors always suffice")
}

/// Whether the vertices split into `uniformity` classes such that every edge
/// meets each class exactly once.
pub fn is_partite(pattern: &UniformHypergraph) -> Result<bool> {
    let v = pattern.vertex_count();
    if v > MAX_EXACT_INDUCED {
        return Err(Error::invalid(format!(
            "partiteness search needs <= {MAX_EXACT_INDUCED} vertices, got {v}"
        )));
    }
    let ell = pattern.uniformity();

    // classes[x] = assigned class or MAX. An edge is consistent if its
    // assigned vertices occupy distinct classes.
    fn assign(x: usize, pattern: &UniformHypergraph, classes: &mut [usize], ell: usize) -> bool {
        if x == pattern.vertex_count() {
            return true;
        }
        // Class c is blocked for x when some incident edge already holds a
        // vertex of class c.
        'classes: for c in 0..ell {
            for &ei in pattern.incident_edges(x) {
                for &y in pattern.edge(ei as usize) {
                    if y as usize != x && classes[y as usize] == c {
                        continue 'classes;
                    }
                }
            }
            classes[x] = c;
            if assign(x + 1, pattern, classes, ell) {
                return true;
            }
            classes[x] = usize::MAX;
        }
        false
    }

    let mut classes = vec![usize::MAX; v];
    Ok(assign(0, pattern, &mut classes, ell))
}

/// Result of minimizing induced edge counts over fixed-size vertex subsets.
#[derive(Clone, Debug, Serialize)]
pub struct InducedEdgeMinimum {
    pub count: usize,
    pub witness: Vec<usize>,
    /// False when the value is a local-search upper bound rather than the
    /// exact minimum (hypergraphs with more than 24 vertices).
    pub exact: bool,
}

/// Minimum number of edges induced by an m-vertex subset. Exhaustive with
/// pruning up to 24 vertices; a seeded multi-restart local search above
/// that, flagged non-exact. The witness is the first optimal subset in
/// lexicographic order when exact.
pub fn min_induced_edges(
    h: &UniformHypergraph,
    m: usize,
    seed: u64,
) -> Result<InducedEdgeMinimum> {
    let v = h.vertex_count();
    if m > v {
        return Err(Error::invalid(format!(
            "subset size {m} exceeds vertex count {v}"
        )));
    }
    if m == 0 {
        return Ok(InducedEdgeMinimum {
            count: 0,
            witness: Vec::new(),
            exact: true,
        });
    }
    if v <= MAX_EXACT_INDUCED {
        Ok(min_induced_exact(h, m))
    } else {
        Ok(min_induced_local_search(h, m, seed))
    }
}

fn min_induced_exact(h: &UniformHypergraph, m: usize) -> InducedEdgeMinimum {
    let v = h.vertex_count();
    let k = h.uniformity();
    let mut chosen_in_edge = vec![0usize; h.edge_count()];
    let mut chosen: Vec<usize> = Vec::with_capacity(m);
    let mut best_count = usize::MAX;
    let mut best: Vec<usize> = Vec::new();

    fn dfs(
        next: usize,
        current: usize,
        h: &UniformHypergraph,
        k: usize,
        m: usize,
        v: usize,
        chosen: &mut Vec<usize>,
        chosen_in_edge: &mut [usize],
        best_count: &mut usize,
        best: &mut Vec<usize>,
    ) {
        if current >= *best_count {
            return;
        }
        if chosen.len() == m {
            *best_count = current;
            *best = chosen.clone();
            return;
        }
        if v - next < m - chosen.len() {
            return;
        }
        // Take `next`.
        let mut added = 0;
        for &ei in h.incident_edges(next) {
            chosen_in_edge[ei as usize] += 1;
            if chosen_in_edge[ei as usize] == k {
                added += 1;
            }
        }
        chosen.push(next);
        dfs(
            next + 1,
            current + added,
            h,
            k,
            m,
            v,
            chosen,
            chosen_in_edge,
            best_count,
            best,
        );
        chosen.pop();
        for &ei in h.incident_edges(next) {
            chosen_in_edge[ei as usize] -= 1;
        }
        // Skip `next`.
        dfs(
            next + 1,
            current,
            h,
            k,
            m,
            v,
            chosen,
            chosen_in_edge,
            best_count,
            best,
        );
    }

    dfs(
        0,
        0,
        h,
        k,
        m,
        v,
        &mut chosen,
        &mut chosen_in_edge,
        &mut best_count,
        &mut best,
    );
    InducedEdgeMinimum {
        count: best_count,
        witness: best,
        exact: true,
    }
}

fn min_induced_local_search(h: &UniformHypergraph, m: usize, seed: u64) -> InducedEdgeMinimum {
    let v = h.vertex_count();
    let k = h.uniformity();
    const RESTARTS: u64 = 8;

    let count_for = |set: &VertexSubset| -> usize {
        h.edges()
            .filter(|e| e.iter().all(|&x| set.contains(x as usize)))
            .count()
    };

    let mut best_count = usize::MAX;
    let mut best: Vec<usize> = Vec::new();
    for restart in 0..RESTARTS {
        let mut rng = SplitMix::new(derive(seed, 0x1D5, restart));
        let mut perm: Vec<usize> = (0..v).collect();
        rng.shuffle(&mut perm);
        let mut set = VertexSubset::empty(v);
        for &x in perm.iter().take(m) {
            set.insert(x);
        }
        let mut inside: Vec<usize> = vec![0; h.edge_count()];
        for (ei, e) in h.edges().enumerate() {
            inside[ei] = e.iter().filter(|&&x| set.contains(x as usize)).count();
        }
        let mut current = inside.iter().filter(|&&c| c == k).count();

        // First-improvement swap sweeps until a local optimum.
        let mut improved = true;
        while improved && current > 0 {
            improved = false;
            let members: Vec<usize> = set.to_indices();
            'sweep: for &out in &members {
                // Removing `out` saves the edges it completes.
                let saving = h
                    .incident_edges(out)
                    .iter()
                    .filter(|&&ei| inside[ei as usize] == k)
                    .count();
                if saving == 0 {
                    continue;
                }
                for inn in 0..v {
                    if set.contains(inn) {
                        continue;
                    }
                    // Adding `inn` after removing `out` completes edges that
                    // held the other k-1 vertices and avoided `out`.
                    let mut cost = 0;
                    for &ei in h.incident_edges(inn) {
                        let e = h.edge(ei as usize);
                        let cnt = inside[ei as usize];
                        let has_out = e.contains(&(out as u32));
                        if cnt - usize::from(has_out) == k - 1 {
                            cost += 1;
                        }
                    }
                    if cost < saving {
                        set.remove(out);
                        for &ei in h.incident_edges(out) {
                            inside[ei as usize] -= 1;
                        }
                        set.insert(inn);
                        for &ei in h.incident_edges(inn) {
                            inside[ei as usize] += 1;
                        }
                        current = current - saving + cost;
                        improved = true;
                        break 'sweep;
                    }
                }
            }
        }
        debug_assert_eq!(current, count_for(&set));
        if current < best_count {
            best_count = current;
            best = set.to_indices();
        }
    }
    InducedEdgeMinimum {
        count: best_count,
        witness: best,
        exact: false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::progressions;

    fn complete_graph(n: usize) -> UniformHypergraph {
        let mut edges = Vec::new();
        for a in 0..n as u32 {
            for b in a + 1..n as u32 {
                edges.push(vec![a, b]);
            }
        }
        UniformHypergraph::new(2, n, edges).unwrap()
    }

    fn cycle(n: usize) -> UniformHypergraph {
        let edges = (0..n as u32).map(|i| vec![i, (i + 1) % n as u32]).collect();
        UniformHypergraph::new(2, n, edges).unwrap()
    }

    #[test]
    fn triangle_density() {
        let r = subgraph_density(&complete_graph(3)).unwrap();
        assert_eq!(r.value, Rational64::new(2, 1));
        assert_eq!(r.witness_vertices, vec![0, 1, 2]);
        assert_eq!(r.turan_reference, TuranDensity::Known(Rational64::new(1, 2)));
    }

    #[test]
    fn k4_density() {
        let r = subgraph_density(&complete_graph(4)).unwrap();
        assert_eq!(r.value, Rational64::new(5, 2));
        assert_eq!(r.turan_reference, TuranDensity::Known(Rational64::new(2, 3)));
    }

    #[test]
    fn single_edge_density_is_reciprocal_uniformity() {
        let e3 = UniformHypergraph::new(3, 3, vec![vec![0, 1, 2]]).unwrap();
        let r = subgraph_density(&e3).unwrap();
        assert_eq!(r.value, Rational64::new(1, 3));
        // A single edge is partite.
        assert_eq!(r.turan_reference, TuranDensity::Known(Rational64::new(0, 1)));
    }

    #[test]
    fn path_density() {
        let p = UniformHypergraph::new(2, 3, vec![vec![0, 1], vec![1, 2]]).unwrap();
        let r = subgraph_density(&p).unwrap();
        assert_eq!(r.value, Rational64::new(1, 1));
        assert_eq!(r.turan_reference, TuranDensity::Known(Rational64::new(0, 1)));
    }

    #[test]
    fn chromatic_numbers() {
        assert_eq!(chromatic_number(&complete_graph(4)).unwrap(), 4);
        assert_eq!(chromatic_number(&cycle(4)).unwrap(), 2);
        assert_eq!(chromatic_number(&cycle(5)).unwrap(), 3);
        assert_eq!(chromatic_number(&complete_graph(2)).unwrap(), 2);
    }

    #[test]
    fn four_cycle_has_zero_turan_density() {
        assert_eq!(
            turan_density_reference(&cycle(4)).unwrap(),
            TuranDensity::Known(Rational64::new(0, 1))
        );
        assert_eq!(
            turan_density_reference(&cycle(5)).unwrap(),
            TuranDensity::Known(Rational64::new(1, 2))
        );
    }

    #[test]
    fn complete_triple_system_is_unknown() {
        // All 3-subsets of a 4-set: not 3-partite, uniformity 3.
        let edges = vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]];
        let h = UniformHypergraph::new(3, 4, edges).unwrap();
        assert_eq!(turan_density_reference(&h).unwrap(), TuranDensity::Unknown);
        assert!(!is_partite(&h).unwrap());
    }

    #[test]
    fn partite_triple_system() {
        let h = UniformHypergraph::new(3, 6, vec![vec![0, 1, 2], vec![3, 4, 5], vec![0, 1, 5]])
            .unwrap();
        assert!(is_partite(&h).unwrap());
    }

    #[test]
    fn min_induced_on_progressions_of_five() {
        let h = progressions(5, 3).unwrap();
        let r = min_induced_edges(&h, 4, 0).unwrap();
        assert_eq!(r.count, 0);
        assert_eq!(r.witness, vec![0, 1, 3, 4]);
        assert!(r.exact);
        let full = min_induced_edges(&h, 5, 0).unwrap();
        assert_eq!(full.count, 4);
        assert_eq!(full.witness, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn min_induced_monotone_in_subset_size() {
        let h = progressions(12, 3).unwrap();
        let mut prev = 0;
        for m in 1..=12 {
            let r = min_induced_edges(&h, m, 0).unwrap();
            assert!(r.count >= prev, "m={m}");
            assert_eq!(r.witness.len(), m);
            prev = r.count;
        }
    }

    #[test]
    fn min_induced_local_search_is_consistent() {
        let h = progressions(40, 3).unwrap();
        let r = min_induced_edges(&h, 10, 7).unwrap();
        assert!(!r.exact);
        assert_eq!(r.witness.len(), 10);
        // Recount edges at the witness independently.
        let set: std::collections::BTreeSet<usize> = r.witness.iter().copied().collect();
        let recount = h
            .edges()
            .filter(|e| e.iter().all(|&x| set.contains(&(x as usize))))
            .count();
        assert_eq!(recount, r.count);
        // 10 points of 40 can dodge every progression.
        assert_eq!(r.count, 0);
    }

    #[test]
    fn min_induced_rejects_oversized_subset() {
        let h = progressions(5, 3).unwrap();
        assert!(min_induced_edges(&h, 6, 0).is_err());
        assert_eq!(min_induced_edges(&h, 0, 0).unwrap().count, 0);
    }
}

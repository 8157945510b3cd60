//! Exact maximum edge-free subset computation (hypergraph independent set)
//! by branch and bound, plus the two reductions the experiments need: the
//! density arrow decision and extremal numbers of host graphs.

use num_rational::Rational64;
use serde::Serialize;

use crate::generators::pattern_copies;
use crate::hypergraph::UniformHypergraph;
use crate::seeds::{derive, SplitMix};
use crate::subset::VertexSubset;
use crate::{Error, Result};

/// Default search-node allowance.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Vertices the brute-force oracle accepts.
const MAX_BRUTEFORCE: usize = 24;

/// Fixed seed for the greedy incumbent permutations, so results never
/// depend on caller state.
const GREEDY_SEED: u64 = 0xA5EED;
const GREEDY_RESTARTS: u64 = 12;

/// Search threads get their own stack; exclusion chains can recurse to a
/// depth near the vertex count.
const SEARCH_STACK: usize = 256 << 20;

#[derive(Clone, Debug, Serialize)]
pub struct SolveResult {
    /// Size of the best edge-free subset found; the exact maximum when
    /// `exact` is set, otherwise a lower bound.
    pub alpha: usize,
    /// Certified upper bound; equals `alpha` when `exact`.
    pub upper: usize,
    pub witness: VertexSubset,
    pub node_count: u64,
    pub exact: bool,
}

/// Outcome of asking whether an edge-free subset of a given size exists.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Decision {
    AtLeast,
    LessThan,
    Undecided,
}

/// Outcome of the density arrow property on a concrete sample.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ArrowOutcome {
    Holds,
    Fails,
    Undecided,
}

const UNDECIDED: u8 = 0;
const INCLUDED: u8 = 1;
const EXCLUDED: u8 = 2;

struct Engine<'a> {
    h: &'a UniformHypergraph,
    /// Flat edge storage borrowed from `h`, k ids per edge.
    flat: &'a [u32],
    k: usize,
    state: Vec<u8>,
    inc_in_edge: Vec<u16>,
    exc_in_edge: Vec<u16>,
    included: usize,
    undecided: usize,
    /// Residual fractional-matching capacity in sixths, refilled at the
    /// start of every matching pass. Slots of decided vertices hold
    /// garbage between passes and are never read.
    cap6: Vec<u8>,
    /// Edges that reached k-1 included vertices during the last include.
    unit_candidates: Vec<u32>,
    /// Trail of exclusions forced by unit edges, unwound on backtrack.
    forced: Vec<usize>,
    /// Unhit edges, maintained by swap-remove so scans skip dead edges.
    /// Order drifts with the search path but stays deterministic.
    active_edges: Vec<u32>,
    /// Edge -> position in active_edges, u32::MAX when hit.
    active_pos: Vec<u32>,
    /// Vertex -> number of unhit edges through it.
    active_deg: Vec<u32>,
    /// Size of the best edge-free set found so far.
    best: usize,
    best_set: Vec<usize>,
    /// In decision mode, subtrees that cannot reach the target are cut
    /// even when they could still improve on the incumbent.
    target: Option<usize>,
    budget: u64,
    nodes: u64,
    truncated: bool,
    stop: bool,
    /// Largest upper bound over subtrees abandoned by truncation.
    abandoned: usize,
}

impl<'a> Engine<'a> {
    fn new(h: &'a UniformHypergraph, budget: u64, target: Option<usize>) -> Self {
        let n = h.vertex_count();
        let m = h.edge_count();
        Engine {
            h,
            flat: h.flat_edges(),
            k: h.uniformity(),
            state: vec![UNDECIDED; n],
            inc_in_edge: vec![0; m],
            exc_in_edge: vec![0; m],
            included: 0,
            undecided: n,
            cap6: vec![0; n],
            unit_candidates: Vec::new(),
            forced: Vec::new(),
            active_edges: (0..m as u32).collect(),
            active_pos: (0..m as u32).collect(),
            active_deg: (0..n).map(|v| h.degree(v) as u32).collect(),
            best: 0,
            best_set: Vec::new(),
            target,
            budget,
            nodes: 0,
            truncated: false,
            stop: false,
            abandoned: 0,
        }
    }

    fn cutoff(&self) -> usize {
        match self.target {
            Some(t) => self.best.max(t.saturating_sub(1)),
            None => self.best,
        }
    }

    /// Seeds the incumbent with maximal edge-free sets from greedy passes
    /// over fixed orders: natural, by ascending degree, then seeded
    /// shuffles.
    fn greedy_incumbent(&mut self) {
        let n = self.h.vertex_count();
        let mut orders: Vec<Vec<usize>> = Vec::new();
        orders.push((0..n).collect());
        let mut by_degree: Vec<usize> = (0..n).collect();
        by_degree.sort_by_key(|&v| (self.h.degree(v), v));
        orders.push(by_degree);
        for r in 0..GREEDY_RESTARTS {
            let mut perm: Vec<usize> = (0..n).collect();
            SplitMix::new(derive(GREEDY_SEED, 0x50, r)).shuffle(&mut perm);
            orders.push(perm);
        }
        let mut inc = vec![0u16; self.h.edge_count()];
        for order in orders {
            inc.iter_mut().for_each(|c| *c = 0);
            let mut taken: Vec<usize> = Vec::new();
            'vertices: for &v in &order {
                for &ei in self.h.incident_edges(v) {
                    if inc[ei as usize] as usize == self.k - 1 {
                        continue 'vertices;
                    }
                }
                for &ei in self.h.incident_edges(v) {
                    inc[ei as usize] += 1;
                }
                taken.push(v);
            }
            if taken.len() > self.best {
                self.best = taken.len();
                self.best_set = taken;
                if self.target.is_some_and(|t| self.best >= t) {
                    return;
                }
            }
        }
    }

    fn include(&mut self, v: usize) -> bool {
        debug_assert_eq!(self.state[v], UNDECIDED);
        self.unit_candidates.clear();
        self.state[v] = INCLUDED;
        self.included += 1;
        self.undecided -= 1;
        let mut ok = true;
        for &ei in self.h.incident_edges(v) {
            let e = ei as usize;
            self.inc_in_edge[e] += 1;
            let inc = self.inc_in_edge[e] as usize;
            if inc == self.k {
                ok = false;
            } else if inc == self.k - 1 && self.exc_in_edge[e] == 0 {
                self.unit_candidates.push(ei);
            }
        }
        ok
    }

    /// Excludes the last undecided vertex of every edge left one short of
    /// completion by the include just applied. Exclusions never create new
    /// unit edges, so a single wave restores the invariant. Returns how
    /// many exclusions were pushed onto the trail.
    fn propagate(&mut self) -> usize {
        let mut count = 0;
        let mut idx = 0;
        while idx < self.unit_candidates.len() {
            let ei = self.unit_candidates[idx] as usize;
            idx += 1;
            if self.exc_in_edge[ei] != 0 || (self.inc_in_edge[ei] as usize) != self.k - 1 {
                continue;
            }
            let w = self
                .h
                .edge(ei)
                .iter()
                .map(|&x| x as usize)
                .find(|&x| self.state[x] == UNDECIDED)
                .expect("unit edge keeps one undecided vertex");
            self.exclude(w);
            self.forced.push(w);
            count += 1;
        }
        count
    }

    fn undo_include(&mut self, v: usize) {
        self.state[v] = UNDECIDED;
        self.included -= 1;
        self.undecided += 1;
        for &ei in self.h.incident_edges(v) {
            self.inc_in_edge[ei as usize] -= 1;
        }
    }

    fn exclude(&mut self, v: usize) {
        debug_assert_eq!(self.state[v], UNDECIDED);
        self.state[v] = EXCLUDED;
        self.undecided -= 1;
        for &ei in self.h.incident_edges(v) {
            let e = ei as usize;
            self.exc_in_edge[e] += 1;
            if self.exc_in_edge[e] == 1 {
                let pos = self.active_pos[e] as usize;
                let last = self.active_edges.pop().expect("active list nonempty");
                if last != ei {
                    self.active_edges[pos] = last;
                    self.active_pos[last as usize] = pos as u32;
                }
                self.active_pos[e] = u32::MAX;
                for &x in self.h.edge(e) {
                    self.active_deg[x as usize] -= 1;
                }
            }
        }
    }

    fn undo_exclude(&mut self, v: usize) {
        self.state[v] = UNDECIDED;
        self.undecided += 1;
        for &ei in self.h.incident_edges(v) {
            let e = ei as usize;
            self.exc_in_edge[e] -= 1;
            if self.exc_in_edge[e] == 0 {
                self.active_pos[e] = self.active_edges.len() as u32;
                self.active_edges.push(ei);
                for &x in self.h.edge(e) {
                    self.active_deg[x as usize] += 1;
                }
            }
        }
    }

    /// Draws capacity for one edge from the fractional matching. Returns
    /// the amount drained. Callers refill cap6 before each matching pass.
    /// The minimum runs over undecided vertices only, so the subtraction
    /// can wrap on decided slots; those hold garbage until the next refill
    /// and are never read.
    #[inline]
    fn drain_capacity(&mut self, ei: usize) -> u8 {
        let k = self.k;
        let flat = self.flat;
        // SAFETY: edge slots and the vertex ids inside them are validated
        // against the vertex count when the hypergraph is built, and ei
        // comes from active_edges, so every index is in range.
        unsafe {
            let e = flat.get_unchecked(ei * k..ei * k + k);
            let mut w = 6u8;
            for &x in e {
                let x = x as usize;
                if *self.state.get_unchecked(x) == UNDECIDED {
                    w = w.min(*self.cap6.get_unchecked(x));
                }
            }
            if w > 0 {
                for &x in e {
                    let x = x as usize;
                    let c = self.cap6.get_unchecked_mut(x);
                    *c = c.wrapping_sub(w);
                }
            }
            w
        }
    }

    /// Two passes over the edges: finds the unhit edge with fewest
    /// undecided vertices and greedily builds a fractional matching on the
    /// unhit edges, vertex capacities tracked in sixths. By LP duality the
    /// matching value lower-bounds the exclusions any edge-free superset
    /// must make, so reaching `needed` proves the node hopeless. Edges
    /// with at most two undecided vertices drain capacity at the best
    /// rate and go first; the matching stops as soon as the edges left
    /// cannot lift it to the goal.
    fn scan(&mut self) -> Scan {
        let avail = self.included + self.undecided;
        let cut = self.cutoff();
        let needed = if avail > cut { avail - cut } else { 0 };
        if needed == 0 {
            return Scan::Prune;
        }
        let goal = 6 * needed as u64;
        self.cap6.fill(6);
        let mut total: u64 = 0;
        let mut left = self.active_edges.len() as u64;
        let mut live = 6 * left >= goal;
        // Branch candidate: fewest undecided vertices, ties broken toward
        // the largest total unhit degree so include-children propagate hard.
        let mut branch: Option<(usize, usize, u32)> = None;
        for idx in 0..self.active_edges.len() {
            let ei = self.active_edges[idx] as usize;
            debug_assert_eq!(self.exc_in_edge[ei], 0);
            let und = self.k - self.inc_in_edge[ei] as usize;
            if und == 0 {
                return Scan::Prune;
            }
            let cur = branch.map_or(usize::MAX, |(_, b, _)| b);
            if und <= cur {
                let mut score = 0u32;
                for &x in self.h.edge(ei) {
                    let x = x as usize;
                    if self.state[x] == UNDECIDED {
                        score += self.active_deg[x];
                    }
                }
                if und < cur || branch.is_none_or(|(_, _, s)| score > s) {
                    branch = Some((ei, und, score));
                }
            }
            if !live || und > 2 {
                continue;
            }
            total += self.drain_capacity(ei) as u64;
            if total >= goal {
                return Scan::Prune;
            }
            left -= 1;
            live = total + 6 * left >= goal;
        }
        if live {
            for idx in 0..self.active_edges.len() {
                let ei = self.active_edges[idx] as usize;
                let und = self.k - self.inc_in_edge[ei] as usize;
                if und <= 2 {
                    continue;
                }
                total += self.drain_capacity(ei) as u64;
                if total >= goal {
                    return Scan::Prune;
                }
                left -= 1;
                if total + 6 * left < goal {
                    break;
                }
            }
        }
        match branch {
            Some((ei, _, _)) => Scan::Branch(ei),
            None => Scan::Complete,
        }
    }

    /// Matching-only feasibility check for probes: true when the bound
    /// already refutes the node. Skips branch bookkeeping entirely and
    /// abandons the matching the moment the goal is out of reach. A state
    /// with no unhit edges is a legal set and gets recorded.
    fn scan_bound(&mut self) -> bool {
        let avail = self.included + self.undecided;
        let cut = self.cutoff();
        let needed = if avail > cut { avail - cut } else { 0 };
        if needed == 0 {
            return true;
        }
        if self.active_edges.is_empty() {
            self.record_complete();
            return false;
        }
        let goal = 6 * needed as u64;
        let mut left = self.active_edges.len() as u64;
        if 6 * left < goal {
            return false;
        }
        self.cap6.fill(6);
        let mut total: u64 = 0;
        for pass in 0..2 {
            for idx in 0..self.active_edges.len() {
                let ei = self.active_edges[idx] as usize;
                let und = self.k - self.inc_in_edge[ei] as usize;
                if und == 0 {
                    return true;
                }
                if (pass == 0) != (und <= 2) {
                    continue;
                }
                total += self.drain_capacity(ei) as u64;
                if total >= goal {
                    return true;
                }
                left -= 1;
                if total + 6 * left < goal {
                    return false;
                }
            }
        }
        false
    }

    fn record_complete(&mut self) {
        self.best = self.included + self.undecided;
        self.best_set = (0..self.h.vertex_count())
            .filter(|&v| self.state[v] != EXCLUDED)
            .collect();
        if self.target.is_some_and(|t| self.best >= t) {
            self.stop = true;
        }
    }

    /// Probes v: includes it, propagates, and checks the bound. True means
    /// the include branch refutes immediately, so v can be excluded
    /// outright. A probe that completes records the incumbent it found.
    fn probe_include(&mut self, v: usize) -> bool {
        if !self.include(v) {
            self.undo_include(v);
            return true;
        }
        let forced = self.propagate();
        let doomed = self.scan_bound();
        for _ in 0..forced {
            let w = self.forced.pop().expect("propagation trail");
            self.undo_exclude(w);
        }
        self.undo_include(v);
        doomed
    }

    fn dfs(&mut self) {
        self.nodes += 1;
        if self.nodes > self.budget {
            self.truncated = true;
            self.stop = true;
            self.abandoned = self.abandoned.max(self.included + self.undecided);
            return;
        }
        let ub_here = self.included + self.undecided;
        let mut lookahead_excluded: Vec<usize> = Vec::new();
        'node: {
            let mut decision = self.scan();
            // Failed-literal loop: probe the branch edge's vertices and
            // turn refuted includes into real exclusions, rescanning until
            // nothing fires. Each firing shrinks the problem, so the loop
            // terminates.
            let branch_edge = loop {
                match decision {
                    Scan::Prune => break 'node,
                    Scan::Complete => {
                        self.record_complete();
                        break 'node;
                    }
                    Scan::Branch(ei) => {
                        let mut fired = false;
                        for idx in 0..self.k {
                            let v = self.h.edge(ei)[idx] as usize;
                            if self.state[v] != UNDECIDED {
                                continue;
                            }
                            let doomed = self.probe_include(v);
                            if self.stop {
                                break 'node;
                            }
                            if doomed {
                                self.exclude(v);
                                lookahead_excluded.push(v);
                                fired = true;
                            }
                        }
                        if !fired {
                            break ei;
                        }
                        decision = self.scan();
                    }
                }
            };
            let mut branch_vertices: Vec<usize> = self
                .h
                .edge(branch_edge)
                .iter()
                .map(|&x| x as usize)
                .filter(|&x| self.state[x] == UNDECIDED)
                .collect();
            // Heaviest vertex first: its exclusion subtree loses the most
            // edges, and it enters include prefixes early, where it
            // propagates hardest.
            branch_vertices.sort_by_key(|&v| (std::cmp::Reverse(self.active_deg[v]), v));
            let mut included_here: Vec<(usize, usize)> = Vec::new();
            for (j, &v) in branch_vertices.iter().enumerate() {
                if self.state[v] == EXCLUDED {
                    // An earlier sibling's propagation forced v out, so
                    // this child is the current state itself and no later
                    // sibling can include v.
                    self.dfs();
                    break;
                }
                self.exclude(v);
                self.dfs();
                self.undo_exclude(v);
                if self.stop {
                    break;
                }
                if j + 1 < branch_vertices.len() {
                    if !self.include(v) {
                        // Including v completes an edge, so every
                        // remaining child is infeasible.
                        self.undo_include(v);
                        break;
                    }
                    let forced = self.propagate();
                    included_here.push((v, forced));
                }
            }
            for &(v, forced) in included_here.iter().rev() {
                for _ in 0..forced {
                    let w = self.forced.pop().expect("propagation trail");
                    self.undo_exclude(w);
                }
                self.undo_include(v);
            }
            if self.stop && self.truncated {
                self.abandoned = self.abandoned.max(ub_here);
            }
        }
        for &v in lookahead_excluded.iter().rev() {
            self.undo_exclude(v);
        }
    }

    fn run(mut self) -> Outcome {
        self.greedy_incumbent();
        let skip_search = self.target.is_some_and(|t| self.best >= t)
            || self.h.vertex_count() == 0;
        if !skip_search {
            self.dfs();
        }
        Outcome {
            best: self.best,
            best_set: self.best_set,
            nodes: self.nodes,
            truncated: self.truncated,
            abandoned: self.abandoned,
        }
    }
}

enum Scan {
    Prune,
    Complete,
    Branch(usize),
}

struct Outcome {
    best: usize,
    best_set: Vec<usize>,
    nodes: u64,
    truncated: bool,
    abandoned: usize,
}

fn run_engine(h: &UniformHypergraph, budget: u64, target: Option<usize>) -> Outcome {
    std::thread::scope(|scope| {
        std::thread::Builder::new()
            .stack_size(SEARCH_STACK)
            .spawn_scoped(scope, || Engine::new(h, budget, target).run())
            .expect("spawn search thread")
            .join()
            .expect("search thread panicked")
    })
}

/// Maximum size of a vertex subset containing no edge entirely.
pub fn alpha_exact(h: &UniformHypergraph, budget: u64) -> SolveResult {
    let out = run_engine(h, budget, None);
    let mut witness = VertexSubset::empty(h.vertex_count());
    for &v in &out.best_set {
        witness.insert(v);
    }
    SolveResult {
        alpha: out.best,
        upper: if out.truncated {
            out.abandoned.max(out.best)
        } else {
            out.best
        },
        witness,
        node_count: out.nodes,
        exact: !out.truncated,
    }
}

/// Whether an edge-free subset of at least `target` vertices exists.
/// Subtrees that cannot reach the target are cut regardless of the
/// incumbent, so this is much cheaper than the full maximum.
pub fn alpha_decision(h: &UniformHypergraph, target: usize, budget: u64) -> Decision {
    if target == 0 {
        return Decision::AtLeast;
    }
    if target > h.vertex_count() {
        return Decision::LessThan;
    }
    let out = run_engine(h, budget, Some(target));
    if out.best >= target {
        Decision::AtLeast
    } else if !out.truncated {
        Decision::LessThan
    } else {
        Decision::Undecided
    }
}

/// Reference oracle: exact maximum by subset enumeration, up to 24
/// vertices. Masks are scanned in increasing order; a mask is edge-free
/// when the mask without its top vertex is edge-free and no edge topped by
/// that vertex fits inside.
pub fn alpha_bruteforce(h: &UniformHypergraph) -> Result<usize> {
    let n = h.vertex_count();
    if n > MAX_BRUTEFORCE {
        return Err(Error::invalid(format!(
            "brute force accepts at most {MAX_BRUTEFORCE} vertices, got {n}"
        )));
    }
    let mut topped: Vec<Vec<u32>> = vec![Vec::new(); n];
    for e in h.edges() {
        let mask: u32 = e.iter().map(|&x| 1u32 << x).sum();
        let top = *e.last().expect("edges are nonempty") as usize;
        topped[top].push(mask);
    }
    let mut free = vec![false; 1usize << n];
    free[0] = true;
    let mut best = 0;
    for mask in 1..1usize << n {
        let top = usize::BITS as usize - 1 - mask.leading_zeros() as usize;
        if !free[mask ^ (1 << top)] {
            continue;
        }
        if topped[top].iter().any(|&em| em as usize & mask == em as usize) {
            continue;
        }
        free[mask] = true;
        best = best.max(mask.count_ones() as usize);
    }
    Ok(best)
}

/// Maximum number of host edges whose sub-(hyper)graph avoids every copy of
/// the pattern. The host is a set of colex ranks of l-subsets of [n]; the
/// witness comes back in the same rank space.
pub fn turan_ex(
    n: usize,
    ell: usize,
    pattern: &UniformHypergraph,
    host: &VertexSubset,
    budget: u64,
) -> Result<SolveResult> {
    let copies = pattern_copies(n, ell, pattern)?;
    if host.domain_size() != copies.vertex_count() {
        return Err(Error::invalid(format!(
            "host lives on {} ranks but the copy hypergraph has {} vertices",
            host.domain_size(),
            copies.vertex_count()
        )));
    }
    let induced = copies.induced(host)?;
    let inner = alpha_exact(&induced.hypergraph, budget);
    let mut witness = VertexSubset::empty(copies.vertex_count());
    for v in inner.witness.iter() {
        witness.insert(induced.original_vertices[v]);
    }
    Ok(SolveResult {
        alpha: inner.alpha,
        upper: inner.upper,
        witness,
        node_count: inner.node_count,
        exact: inner.exact,
    })
}

/// Smallest subset size the arrow property quantifies over: ceil of
/// epsilon * s in exact arithmetic.
pub fn arrow_target(subset_size: usize, epsilon: Rational64) -> usize {
    let a = *epsilon.numer() as i128;
    let b = *epsilon.denom() as i128;
    let s = subset_size as i128;
    ((a * s + b - 1).div_euclid(b)) as usize
}

/// Decides whether every subset Y of X with |Y| >= epsilon*|X| spans an
/// edge of H[X]. The empty sample fails: its only subset qualifies at
/// threshold zero and spans nothing.
pub fn arrow_decide(
    h: &UniformHypergraph,
    x: &VertexSubset,
    epsilon: Rational64,
    budget: u64,
) -> Result<ArrowOutcome> {
    if epsilon <= Rational64::new(0, 1) || epsilon > Rational64::new(1, 1) {
        return Err(Error::invalid(format!(
            "epsilon must be in (0,1], got {epsilon}"
        )));
    }
    if x.is_empty() {
        return Ok(ArrowOutcome::Fails);
    }
    let target = arrow_target(x.len(), epsilon);
    let induced = h.induced(x)?;
    Ok(match alpha_decision(&induced.hypergraph, target, budget) {
        Decision::AtLeast => ArrowOutcome::Fails,
        Decision::LessThan => ArrowOutcome::Holds,
        Decision::Undecided => ArrowOutcome::Undecided,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{pattern_copies, progressions, schur_triples};

    fn triangle() -> UniformHypergraph {
        UniformHypergraph::new(2, 3, vec![vec![0, 1], vec![0, 2], vec![1, 2]]).unwrap()
    }

    fn complete_host(n: usize) -> VertexSubset {
        VertexSubset::full(n * (n - 1) / 2)
    }

    #[test]
    fn edgeless_alpha_is_everything() {
        let h = UniformHypergraph::new(3, 7, vec![]).unwrap();
        let r = alpha_exact(&h, DEFAULT_BUDGET);
        assert_eq!(r.alpha, 7);
        assert_eq!(r.upper, 7);
        assert!(r.exact);
        assert_eq!(r.witness.len(), 7);
    }

    #[test]
    fn progression_alpha_nine() {
        let h = progressions(9, 3).unwrap();
        let r = alpha_exact(&h, DEFAULT_BUDGET);
        assert_eq!(r.alpha, 5);
        assert!(r.exact);
        assert_eq!(alpha_bruteforce(&h).unwrap(), 5);
        assert!(witness_is_edge_free(&h, &r.witness));
    }

    #[test]
    fn schur_alpha_five() {
        let h = schur_triples(5).unwrap();
        let r = alpha_exact(&h, DEFAULT_BUDGET);
        assert_eq!(r.alpha, 3);
        assert_eq!(alpha_bruteforce(&h).unwrap(), 3);
    }

    #[test]
    fn single_edge_alpha() {
        let h = UniformHypergraph::new(3, 3, vec![vec![0, 1, 2]]).unwrap();
        assert_eq!(alpha_bruteforce(&h).unwrap(), 2);
        assert_eq!(alpha_exact(&h, DEFAULT_BUDGET).alpha, 2);
    }

    #[test]
    fn triangle_free_subgraphs_of_k4() {
        let copies = pattern_copies(4, 2, &triangle()).unwrap();
        assert_eq!(alpha_bruteforce(&copies).unwrap(), 4);
        assert_eq!(alpha_exact(&copies, DEFAULT_BUDGET).alpha, 4);
    }

    fn witness_is_edge_free(h: &UniformHypergraph, w: &VertexSubset) -> bool {
        h.edges()
            .all(|e| !e.iter().all(|&x| w.contains(x as usize)))
    }

    #[test]
    fn turan_triangle_anchor() {
        for n in 3..=6usize {
            let r = turan_ex(n, 2, &triangle(), &complete_host(n), DEFAULT_BUDGET).unwrap();
            assert_eq!(r.alpha, n * n / 4, "n={n}");
            assert!(r.exact);
        }
    }

    #[test]
    fn turan_empty_host() {
        let host = VertexSubset::empty(10);
        let r = turan_ex(5, 2, &triangle(), &host, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.alpha, 0);
    }

    #[test]
    fn turan_triangle_on_its_own_edges() {
        let r = turan_ex(3, 2, &triangle(), &complete_host(3), DEFAULT_BUDGET).unwrap();
        assert_eq!(r.alpha, 2);
    }

    #[test]
    fn turan_rejects_mismatched_host() {
        let host = VertexSubset::empty(9);
        assert!(turan_ex(5, 2, &triangle(), &host, DEFAULT_BUDGET).is_err());
    }

    #[test]
    fn decision_matches_exact_value() {
        let h = progressions(9, 3).unwrap();
        assert_eq!(alpha_decision(&h, 5, DEFAULT_BUDGET), Decision::AtLeast);
        assert_eq!(alpha_decision(&h, 6, DEFAULT_BUDGET), Decision::LessThan);
        assert_eq!(alpha_decision(&h, 0, DEFAULT_BUDGET), Decision::AtLeast);
        assert_eq!(alpha_decision(&h, 10, DEFAULT_BUDGET), Decision::LessThan);
    }

    #[test]
    fn arrow_on_nine_points() {
        let h = progressions(9, 3).unwrap();
        let x = VertexSubset::full(9);
        assert_eq!(
            arrow_decide(&h, &x, Rational64::new(1, 2), DEFAULT_BUDGET).unwrap(),
            ArrowOutcome::Fails
        );
        assert_eq!(
            arrow_decide(&h, &x, Rational64::new(3, 5), DEFAULT_BUDGET).unwrap(),
            ArrowOutcome::Holds
        );
    }

    #[test]
    fn arrow_on_single_progression() {
        let h = progressions(3, 3).unwrap();
        let x = VertexSubset::full(3);
        assert_eq!(
            arrow_decide(&h, &x, Rational64::new(1, 1), DEFAULT_BUDGET).unwrap(),
            ArrowOutcome::Holds
        );
    }

    #[test]
    fn arrow_fails_on_empty_sample() {
        let h = progressions(9, 3).unwrap();
        let x = VertexSubset::empty(9);
        assert_eq!(
            arrow_decide(&h, &x, Rational64::new(1, 2), DEFAULT_BUDGET).unwrap(),
            ArrowOutcome::Fails
        );
    }

    #[test]
    fn arrow_rejects_bad_epsilon() {
        let h = progressions(5, 3).unwrap();
        let x = VertexSubset::full(5);
        assert!(arrow_decide(&h, &x, Rational64::new(0, 1), DEFAULT_BUDGET).is_err());
        assert!(arrow_decide(&h, &x, Rational64::new(3, 2), DEFAULT_BUDGET).is_err());
    }

    #[test]
    fn arrow_targets_round_up_exactly() {
        assert_eq!(arrow_target(9, Rational64::new(1, 2)), 5);
        assert_eq!(arrow_target(8, Rational64::new(1, 2)), 4);
        assert_eq!(arrow_target(9, Rational64::new(3, 5)), 6);
        assert_eq!(arrow_target(0, Rational64::new(1, 2)), 0);
        assert_eq!(arrow_target(7, Rational64::new(1, 1)), 7);
    }

    #[test]
    fn truncation_reports_bounds() {
        let h = progressions(60, 3).unwrap();
        let r = alpha_exact(&h, 3);
        assert!(!r.exact);
        assert!(r.alpha <= r.upper);
        assert!(witness_is_edge_free(&h, &r.witness));
        let full = alpha_exact(&h, DEFAULT_BUDGET);
        assert!(full.exact);
        assert!(r.alpha <= full.alpha && full.alpha <= r.upper);
    }

    #[test]
    fn bruteforce_rejects_large_instances() {
        let h = progressions(25, 3).unwrap();
        assert!(alpha_bruteforce(&h).is_err());
    }

    #[test]
    fn exact_agrees_with_bruteforce_on_progressions() {
        for n in [6, 10, 13, 16] {
            let h = progressions(n, 3).unwrap();
            let b = alpha_bruteforce(&h).unwrap();
            let r = alpha_exact(&h, DEFAULT_BUDGET);
            assert_eq!(r.alpha, b, "n={n}");
            assert!(r.exact);
        }
    }

    #[test]
    fn alpha_monotone_under_induced_subsets() {
        let h = progressions(15, 3).unwrap();
        let small = VertexSubset::from_indices(15, [0, 2, 3, 5, 8, 9, 12]).unwrap();
        let large = VertexSubset::from_indices(15, [0, 1, 2, 3, 5, 6, 8, 9, 11, 12]).unwrap();
        let a_small = alpha_exact(&h.induced(&small).unwrap().hypergraph, DEFAULT_BUDGET).alpha;
        let a_large = alpha_exact(&h.induced(&large).unwrap().hypergraph, DEFAULT_BUDGET).alpha;
        assert!(a_small <= a_large);
    }
}

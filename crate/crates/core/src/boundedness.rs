//! Second-moment diagnostics for random vertex subsets: the expected sum of
//! squared overlap degrees, its Monte-Carlo counterpart, certification of
//! the boundedness constant across scales, and a greedy pruning check that
//! a few deletions tame the empirical sum.

use rayon::prelude::*;
use serde::Serialize;

use crate::generators::{ConfigSpec, Family};
use crate::hypergraph::UniformHypergraph;
use crate::matrix::threshold_exponent;
use crate::seeds::{bernoulli, derive};
use crate::subset::VertexSubset;
use crate::{Error, Result};

const MC_STREAM: u64 = 0xB1;

/// Counts of co-incident edge pairs grouped by shared-vertex overlap.
///
/// `counts[t]` is the number of triples (v, e, e') with v in both edges and
/// exactly t further shared vertices, over ordered pairs including e = e'.
/// The expected squared-degree sum depends on the hypergraph only through
/// these k numbers.
#[derive(Clone, Debug)]
pub struct OverlapProfile {
    k: usize,
    counts: Vec<u64>,
}

impl OverlapProfile {
    pub fn new(h: &UniformHypergraph) -> Self {
        let k = h.uniformity();
        let counts = (0..h.vertex_count())
            .into_par_iter()
            .fold(
                || vec![0u64; k],
                |mut acc, v| {
                    let inc = h.incident_edges(v);
                    acc[k - 1] += inc.len() as u64;
                    for (a, &ei) in inc.iter().enumerate() {
                        let e = h.edge(ei as usize);
                        for &ej in &inc[a + 1..] {
                            let t = sorted_intersection(e, h.edge(ej as usize)) - 1;
                            acc[t] += 2;
                        }
                    }
                    acc
                },
            )
            .reduce(
                || vec![0u64; k],
                |mut a, b| {
                    for (x, y) in a.iter_mut().zip(b) {
                        *x += y;
                    }
                    a
                },
            );
        OverlapProfile { k, counts }
    }

    pub fn uniformity(&self) -> usize {
        self.k
    }

    /// Pair counts by overlap size t in 0..k.
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Expected value of the squared-degree sum at sampling density q.
    pub fn evaluate(&self, i: usize, q: f64) -> Result<f64> {
        check_overlap_threshold(self.k, i)?;
        check_probability(q)?;
        let mut total = 0.0;
        for (t, &n_t) in self.counts.iter().enumerate() {
            if n_t == 0 {
                continue;
            }
            let excl = self.k - 1 - t;
            total += n_t as f64 * joint_tail_prob(excl, excl, t, i as i64, q)?;
        }
        Ok(total)
    }
}

fn check_overlap_threshold(k: usize, i: usize) -> Result<()> {
    if i < 1 || i > k - 1 {
        return Err(Error::invalid(format!(
            "overlap threshold {i} outside 1..={}",
            k - 1
        )));
    }
    Ok(())
}

fn check_probability(q: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::invalid(format!("probability {q} outside [0,1]")));
    }
    Ok(())
}

fn sorted_intersection(a: &[u32], b: &[u32]) -> usize {
    let (mut x, mut y, mut n) = (0, 0, 0);
    while x < a.len() && y < b.len() {
        match a[x].cmp(&b[y]) {
            std::cmp::Ordering::Less => x += 1,
            std::cmp::Ordering::Greater => y += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                x += 1;
                y += 1;
            }
        }
    }
    n
}

fn choose_u128(n: usize, r: usize) -> u128 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for s in 0..r {
        acc = acc * (n - s) as u128 / (s + 1) as u128;
    }
    acc
}

/// P[Bin(n,q) >= j], summed from the shorter tail.
fn binomial_tail(n: usize, j: i64, q: f64) -> f64 {
    if j <= 0 {
        return 1.0;
    }
    let j = j as usize;
    if j > n {
        return 0.0;
    }
    if q <= 0.0 {
        return 0.0;
    }
    if q >= 1.0 {
        return 1.0;
    }
    let pmf = |s: usize| choose_u128(n, s) as f64 * q.powi(s as i32) * (1.0 - q).powi((n - s) as i32);
    if n - j + 1 <= j {
        (j..=n).map(pmf).sum()
    } else {
        1.0 - (0..j).map(pmf).sum::<f64>()
    }
}

/// Probability that two sets sharing t elements, with a and b private
/// elements respectively, each catch at least i elements of an independent
/// q-sample.
pub fn joint_tail_prob(a: usize, b: usize, t: usize, i: i64, q: f64) -> Result<f64> {
    check_probability(q)?;
    let mut total = 0.0;
    for s in 0..=t {
        let w = choose_u128(t, s) as f64 * q.powi(s as i32) * (1.0 - q).powi((t - s) as i32);
        if w == 0.0 {
            continue;
        }
        let need = i - s as i64;
        total += w * binomial_tail(a, need, q) * binomial_tail(b, need, q);
    }
    Ok(total)
}

/// Expected squared-degree sum at density q, from the closed form.
pub fn mu_exact(h: &UniformHypergraph, i: usize, q: f64) -> Result<f64> {
    OverlapProfile::new(h).evaluate(i, q)
}

/// Squared-degree sum of a concrete sampled subset.
pub fn degree_square_sum(h: &UniformHypergraph, sample: &VertexSubset, i: usize) -> u128 {
    let mut deg = vec![0u64; h.vertex_count()];
    for e in h.edges() {
        let inside = e.iter().filter(|&&x| sample.contains(x as usize)).count();
        for &x in e {
            let x = x as usize;
            let others = inside - usize::from(sample.contains(x));
            if others >= i {
                deg[x] += 1;
            }
        }
    }
    deg.iter().map(|&d| (d as u128) * (d as u128)).sum()
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct MuEstimate {
    pub mean: f64,
    /// Standard error of the mean; 0 when a single trial was run.
    pub std_error: f64,
    pub trials: usize,
}

/// Monte-Carlo estimate of the squared-degree sum expectation. Trials get
/// independently derived seeds, so the estimate does not depend on the
/// number of worker threads.
pub fn mu_montecarlo(
    h: &UniformHypergraph,
    i: usize,
    q: f64,
    trials: usize,
    seed: u64,
) -> Result<MuEstimate> {
    check_overlap_threshold(h.uniformity(), i)?;
    check_probability(q)?;
    if trials == 0 {
        return Err(Error::invalid("at least one trial required".to_string()));
    }
    let n = h.vertex_count();
    let values: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let ts = derive(seed, MC_STREAM, t as u64);
            let mut sample = VertexSubset::empty(n);
            for v in 0..n {
                if bernoulli(ts, v as u64, q) {
                    sample.insert(v);
                }
            }
            degree_square_sum(h, &sample, i) as f64
        })
        .collect();
    let mean = values.iter().sum::<f64>() / trials as f64;
    let std_error = if trials > 1 {
        let var = values.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>()
            / ((trials - 1) as f64 * trials as f64);
        var.sqrt()
    } else {
        0.0
    };
    Ok(MuEstimate {
        mean,
        std_error,
        trials,
    })
}

/// How to place evaluation densities between the threshold scale and 1.
#[derive(Clone, Debug, Serialize, serde::Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum QGrid {
    /// Geometrically spaced points from n^(-theta) to 1 inclusive.
    Geometric { points: usize },
    /// Caller-chosen densities; each must be in (0,1] and at least the
    /// threshold scale of the instance it is applied to.
    Explicit { values: Vec<f64> },
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct BoundednessRow {
    pub n: usize,
    pub i: usize,
    pub q: f64,
    pub mu: f64,
    /// The constant that q needs: mu * |V| / (q^(2i) * |E|^2).
    pub bound_ratio: f64,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct KminRow {
    pub n: usize,
    pub k_min: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundednessReport {
    pub i: usize,
    pub rows: Vec<BoundednessRow>,
    pub per_n: Vec<KminRow>,
    /// Smallest constant covering every (n, q) on the grid.
    pub overall_k_min: f64,
}

/// Evaluates the squared-degree expectation across instance sizes and a
/// density grid anchored at the family's threshold scale, reporting the
/// constant each point requires.
pub fn certify_boundedness(
    family: &Family,
    n_list: &[usize],
    i: usize,
    grid: &QGrid,
) -> Result<BoundednessReport> {
    if n_list.is_empty() {
        return Err(Error::invalid("no instance sizes given".to_string()));
    }
    if let QGrid::Geometric { points } = grid {
        if *points < 2 {
            return Err(Error::invalid("geometric grid needs at least 2 points".to_string()));
        }
    }
    let mut rows = Vec::new();
    let mut per_n = Vec::new();
    let mut overall: f64 = 0.0;
    for &n in n_list {
        let spec = ConfigSpec::new(family.clone(), n)?;
        let h = spec.build()?;
        if h.edge_count() == 0 {
            return Err(Error::invalid(format!(
                "empty configuration family at n = {n}"
            )));
        }
        check_overlap_threshold(h.uniformity(), i)?;
        let theta = threshold_exponent(&spec)?;
        let theta_f = *theta.numer() as f64 / *theta.denom() as f64;
        let p_n = (n as f64).powf(-theta_f);
        let qs: Vec<f64> = match grid {
            QGrid::Geometric { points } => (0..*points)
                .map(|j| {
                    if j + 1 == *points {
                        1.0
                    } else {
                        p_n.powf(1.0 - j as f64 / (*points - 1) as f64)
                    }
                })
                .collect(),
            QGrid::Explicit { values } => {
                for &q in values {
                    check_probability(q)?;
                    if q <= 0.0 {
                        return Err(Error::invalid("density 0 is below every threshold scale".to_string()));
                    }
                    if q < p_n * (1.0 - 1e-9) {
                        return Err(Error::invalid(format!(
                            "density {q} is below the threshold scale {p_n:.6e} at n = {n}"
                        )));
                    }
                }
                values.clone()
            }
        };
        let profile = OverlapProfile::new(&h);
        let v = h.vertex_count() as f64;
        let m = h.edge_count() as f64;
        let mut k_min: f64 = 0.0;
        for q in qs {
            let mu = profile.evaluate(i, q)?;
            let bound_ratio = mu * v / (q.powi(2 * i as i32) * m * m);
            k_min = k_min.max(bound_ratio);
            rows.push(BoundednessRow {
                n,
                i,
                q,
                mu,
                bound_ratio,
            });
        }
        overall = overall.max(k_min);
        per_n.push(KminRow { n, k_min });
    }
    Ok(BoundednessReport {
        i,
        rows,
        per_n,
        overall_k_min: overall,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct PruneOutcome {
    /// Whether the greedy deletion brought the sum under the bound. A false
    /// here does not refute anything: some other deletion set might work.
    pub certified: bool,
    /// Sampled vertices removed, in deletion order.
    pub deleted: Vec<usize>,
    pub sample_size: usize,
    pub budget: usize,
    /// Squared-degree sum before any deletion.
    pub initial: f64,
    /// Squared-degree sum after the deletions.
    pub achieved: f64,
    pub bound: f64,
}

/// Samples a q-subset, then greedily removes sampled vertices (largest
/// immediate drop in the squared-degree sum first) until the sum falls
/// under 4^k k^2 K q^(2i) |E|^2 / |V| or the deletion budget eta*q*|V| is
/// spent.
pub fn prune_check(
    h: &UniformHypergraph,
    q: f64,
    i: usize,
    eta: f64,
    cap: f64,
    seed: u64,
) -> Result<PruneOutcome> {
    check_overlap_threshold(h.uniformity(), i)?;
    check_probability(q)?;
    if eta <= 0.0 {
        return Err(Error::invalid("deletion fraction must be positive".to_string()));
    }
    let n = h.vertex_count();
    let k = h.uniformity();
    let bound = 4f64.powi(k as i32)
        * (k * k) as f64
        * cap
        * q.powi(2 * i as i32)
        * (h.edge_count() as f64).powi(2)
        / n as f64;
    let budget = (eta * q * n as f64).floor() as usize;

    let mut sampled: Vec<bool> = (0..n).map(|v| bernoulli(seed, v as u64, q)).collect();
    let sample_size = sampled.iter().filter(|&&s| s).count();

    // inside[e] = sampled vertices in e; deg[v] = edges through v with at
    // least i sampled vertices besides v.
    let mut inside: Vec<usize> = h
        .edges()
        .map(|e| e.iter().filter(|&&x| sampled[x as usize]).count())
        .collect();
    let mut deg = vec![0u64; n];
    for (ei, e) in h.edges().enumerate() {
        for &x in e {
            let x = x as usize;
            if inside[ei] - usize::from(sampled[x]) >= i {
                deg[x] += 1;
            }
        }
    }
    let mut total: u128 = deg.iter().map(|&d| d as u128 * d as u128).sum();
    let initial = total as f64;

    let mut deleted = Vec::new();
    let mut live: Vec<usize> = (0..n).filter(|&v| sampled[v]).collect();
    while total as f64 > bound && deleted.len() < budget && !live.is_empty() {
        // Deleting x lowers deg[u] by the number of shared edges sitting
        // exactly at the threshold; the drop in the squared sum follows.
        let mut best: Option<(u128, usize)> = None;
        for &x in &live {
            let mut delta: u128 = 0;
            let mut touched: Vec<(usize, u64)> = Vec::new();
            for &ei in h.incident_edges(x) {
                let e = h.edge(ei as usize);
                for &u in e {
                    let u = u as usize;
                    if u == x {
                        continue;
                    }
                    if inside[ei as usize] - usize::from(sampled[u]) == i {
                        match touched.iter_mut().find(|(w, _)| *w == u) {
                            Some((_, c)) => *c += 1,
                            None => touched.push((u, 1)),
                        }
                    }
                }
            }
            for (u, c) in touched {
                let d = deg[u];
                delta += (d as u128) * (d as u128) - ((d - c) as u128) * ((d - c) as u128);
            }
            if best.map_or(true, |(bd, bx)| delta > bd || (delta == bd && x < bx)) {
                best = Some((delta, x));
            }
        }
        let (delta, x) = best.expect("live nonempty");
        for &ei in h.incident_edges(x) {
            let e = h.edge(ei as usize);
            for &u in e {
                let u = u as usize;
                if u != x && inside[ei as usize] - usize::from(sampled[u]) == i {
                    deg[u] -= 1;
                }
            }
            inside[ei as usize] -= 1;
        }
        sampled[x] = false;
        live.retain(|&v| v != x);
        total -= delta;
        deleted.push(x);
    }

    Ok(PruneOutcome {
        certified: total as f64 <= bound,
        deleted,
        sample_size,
        budget,
        initial,
        achieved: total as f64,
        bound,
    })
}

/// Runs independently seeded pruning trials; trial t uses a seed derived
/// from (seed, t), so outcomes are reproducible and thread-count free.
pub fn prune_check_many(
    h: &UniformHypergraph,
    q: f64,
    i: usize,
    eta: f64,
    cap: f64,
    seed: u64,
    trials: usize,
) -> Result<Vec<PruneOutcome>> {
    (0..trials)
        .into_par_iter()
        .map(|t| prune_check(h, q, i, eta, cap, derive(seed, 0xB2, t as u64)))
        .collect()
}

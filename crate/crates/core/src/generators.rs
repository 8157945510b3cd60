//! Configuration hypergraph generators.
//!
//! Each generator maps a ground domain of size controlled by `n` to a
//! k-uniform hypergraph whose edges are the configurations of interest:
//! arithmetic progressions in {1..n}, homothetic images of a finite point
//! set in {1..n}^l, distinct-valued solutions of a linear system in {1..n},
//! and edge sets of copies of a fixed l-uniform pattern inside the complete
//! l-uniform hypergraph on n vertices.

use std::collections::BTreeSet;

use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::hypergraph::{Label, UniformHypergraph};
use crate::matrix::IntegerMatrix;
use crate::{Error, Result};

/// Hard cap on generated vertex counts; grid and subset domains beyond this
/// exhaust desk-scale memory long before any downstream computation is
/// feasible.
const MAX_VERTICES: usize = 1 << 22;

/// Cap on generator enumeration work (candidate tuples visited).
const MAX_ENUMERATION: u128 = 200_000_000;

/// A configuration family. Together with a ground-set size `n` this
/// determines a configuration hypergraph; see [`ConfigSpec`].
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Family {
    /// k-term arithmetic progressions in {1..n}.
    #[serde(rename = "ap")]
    Progressions { k: usize },
    /// Homothetic images y + t*P of a finite point set P inside {1..n}^ell
    /// (t a positive integer, y a nonnegative integer vector).
    Homothetic { ell: usize, points: Vec<Vec<i64>> },
    /// Distinct-valued solutions of `matrix * x = 0` with x in {1..n}^k.
    Linear { matrix: IntegerMatrix },
    /// Distinct-valued solutions of x + y = z in {1..n}.
    Schur,
    /// Edge sets of copies of `pattern` in the complete ell-uniform
    /// hypergraph on {1..n}.
    #[serde(rename = "fcopies")]
    PatternCopies {
        ell: usize,
        pattern: UniformHypergraph,
    },
}

/// A fully specified generation request: family plus ground-set size.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct ConfigSpec {
    #[serde(flatten)]
    pub family: Family,
    pub n: usize,
}

impl ConfigSpec {
    pub fn new(family: Family, n: usize) -> Result<Self> {
        let spec = ConfigSpec { family, n };
        spec.validate()?;
        Ok(spec)
    }

    /// Checks the family parameters, including the hypotheses the threshold
    /// statements need (pattern families must have a vertex of degree >= 2).
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::invalid("ground-set size n must be >= 1".to_string()));
        }
        match &self.family {
            Family::Progressions { k } => {
                if *k < 3 {
                    return Err(Error::invalid(format!(
                        "progressions need k >= 3, got {k}"
                    )));
                }
            }
            Family::Homothetic { ell, points } => {
                validate_point_set(*ell, points)?;
            }
            Family::Linear { matrix } => {
                if let Some((i, j)) = matrix.distinctness_violation() {
                    return Err(Error::invalid(format!(
                        "system forces x_{i} = x_{j}; no distinct-valued solutions"
                    )));
                }
                if matrix.rank_deficient() {
                    return Err(Error::invalid(
                        "linear system has dependent rows".to_string(),
                    ));
                }
            }
            Family::Schur => {}
            Family::PatternCopies { ell, pattern } => {
                validate_pattern(*ell, pattern)?;
                if (0..pattern.vertex_count()).all(|v| pattern.degree(v) < 2) {
                    return Err(Error::invalid(
                        "pattern needs a vertex of degree >= 2".to_string(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Uniformity of the generated configuration hypergraph.
    pub fn uniformity(&self) -> usize {
        match &self.family {
            Family::Progressions { k } => *k,
            Family::Homothetic { points, .. } => points.len(),
            Family::Linear { matrix } => matrix.cols(),
            Family::Schur => 3,
            Family::PatternCopies { pattern, .. } => pattern.edge_count(),
        }
    }

    /// Builds the configuration hypergraph.
    pub fn build(&self) -> Result<UniformHypergraph> {
        self.validate()?;
        match &self.family {
            Family::Progressions { k } => progressions(self.n, *k),
            Family::Homothetic { ell, points } => homothetic(self.n, *ell, points),
            Family::Linear { matrix } => linear_system(matrix, self.n),
            Family::Schur => schur_triples(self.n),
            Family::PatternCopies { ell, pattern } => pattern_copies(self.n, *ell, pattern),
        }
    }
}

fn validate_point_set(ell: usize, points: &[Vec<i64>]) -> Result<()> {
    if ell == 0 {
        return Err(Error::invalid("point dimension must be >= 1".to_string()));
    }
    if points.len() < 3 {
        return Err(Error::invalid(format!(
            "homothetic family needs >= 3 points, got {}",
            points.len()
        )));
    }
    let mut seen = BTreeSet::new();
    for p in points {
        if p.len() != ell {
            return Err(Error::invalid(format!(
                "point {p:?} has dimension {}, expected {ell}",
                p.len()
            )));
        }
        if p.iter().any(|&c| c < 0) {
            return Err(Error::invalid(format!(
                "point {p:?} has a negative coordinate"
            )));
        }
        if !seen.insert(p.clone()) {
            return Err(Error::invalid(format!("point {p:?} repeats")));
        }
    }
    Ok(())
}

fn validate_pattern(ell: usize, pattern: &UniformHypergraph) -> Result<()> {
    if ell < 2 {
        return Err(Error::invalid(format!("pattern uniformity must be >= 2, got {ell}")));
    }
    if pattern.uniformity() != ell {
        return Err(Error::invalid(format!(
            "pattern is {}-uniform, expected {ell}",
            pattern.uniformity()
        )));
    }
    if pattern.edge_count() == 0 {
        return Err(Error::invalid("pattern has no edges".to_string()));
    }
    if (0..pattern.vertex_count()).any(|v| pattern.degree(v) == 0) {
        return Err(Error::invalid("pattern has an isolated vertex".to_string()));
    }
    Ok(())
}

/// All k-term arithmetic progressions in {1..n}, as a k-uniform hypergraph
/// on n vertices labeled 1..n. The edge count is
/// sum over d >= 1 with (k-1)d <= n-1 of (n - (k-1)d).
pub fn progressions(n: usize, k: usize) -> Result<UniformHypergraph> {
    if k < 3 {
        return Err(Error::invalid(format!("progressions need k >= 3, got {k}")));
    }
    if n == 0 {
        return Err(Error::invalid("need n >= 1".to_string()));
    }
    let mut edges = Vec::new();
    let span = k - 1;
    let mut d = 1usize;
    while span * d <= n - 1 {
        for a in 1..=(n - span * d) {
            edges.push((0..k).map(|i| (a + i * d - 1) as u32).collect());
        }
        d += 1;
    }
    UniformHypergraph::new(k, n, edges)?
        .with_labels((1..=n as i64).map(Label::Integer).collect())
}

/// All homothetic images y + t*P of the point set P that land inside
/// {1..n}^ell, with t a positive integer and y a nonnegative integer vector.
/// Vertices are the n^ell grid points in row-major order, labeled by their
/// coordinates.
pub fn homothetic(n: usize, ell: usize, points: &[Vec<i64>]) -> Result<UniformHypergraph> {
    validate_point_set(ell, points)?;
    if n == 0 {
        return Err(Error::invalid("need n >= 1".to_string()));
    }
    let vertex_count = (n as u128).checked_pow(ell as u32).ok_or_else(|| {
        Error::invalid(format!("grid {n}^{ell} overflows"))
    })?;
    if vertex_count > MAX_VERTICES as u128 {
        return Err(Error::invalid(format!(
            "grid {n}^{ell} = {vertex_count} vertices exceeds the {MAX_VERTICES} cap"
        )));
    }
    let vertex_count = vertex_count as usize;
    let ni = n as i64;

    let mins: Vec<i64> = (0..ell)
        .map(|j| points.iter().map(|p| p[j]).min().unwrap())
        .collect();
    let maxs: Vec<i64> = (0..ell)
        .map(|j| points.iter().map(|p| p[j]).max().unwrap())
        .collect();
    // Distinct points guarantee some coordinate has positive span, which
    // bounds the scale factor.
    let scale_max = (0..ell)
        .filter(|&j| maxs[j] > mins[j])
        .map(|j| (ni - 1) / (maxs[j] - mins[j]))
        .min()
        .expect("distinct points have a spanning coordinate");

    let point_index = |coords: &[i64]| -> u32 {
        let mut idx: i64 = 0;
        for &c in coords {
            idx = idx * ni + (c - 1);
        }
        idx as u32
    };

    let mut edges: Vec<Vec<u32>> = Vec::new();
    let mut coords = vec![0i64; ell];
    for t in 1..=scale_max.max(0) {
        let lows: Vec<i64> = (0..ell).map(|j| 1 - t * mins[j]).collect();
        let highs: Vec<i64> = (0..ell).map(|j| ni - t * maxs[j]).collect();
        if (0..ell).any(|j| lows[j] > highs[j]) {
            continue;
        }
        // Odometer over the anchor box.
        let mut y = lows.clone();
        loop {
            let mut edge = Vec::with_capacity(points.len());
            for p in points {
                for j in 0..ell {
                    coords[j] = y[j] + t * p[j];
                }
                edge.push(point_index(&coords));
            }
            edges.push(edge);

            let mut advanced = false;
            for j in (0..ell).rev() {
                if y[j] < highs[j] {
                    y[j] += 1;
                    for jj in j + 1..ell {
                        y[jj] = lows[jj];
                    }
                    advanced = true;
                    break;
                }
            }
            if !advanced {
                break;
            }
        }
    }

    let mut labels = Vec::with_capacity(vertex_count);
    let mut cur = vec![1i64; ell];
    loop {
        labels.push(Label::Point(cur.clone()));
        let mut j = ell;
        let mut done = true;
        while j > 0 {
            j -= 1;
            if cur[j] < ni {
                cur[j] += 1;
                for jj in j + 1..ell {
                    cur[jj] = 1;
                }
                done = false;
                break;
            }
        }
        if done {
            break;
        }
    }
    UniformHypergraph::new(points.len(), vertex_count, edges)?.with_labels(labels)
}

/// All distinct-valued solutions of `matrix * x = 0` with x in {1..n}^k,
/// collected as k-sets of values. Vertices are 1..n labeled by value.
/// Requires an irredundant system with independent rows; enumeration walks
/// the n^(k - rank) assignments of the free coordinates of a reduced
/// echelon parametrization.
pub fn linear_system(matrix: &IntegerMatrix, n: usize) -> Result<UniformHypergraph> {
    if n == 0 {
        return Err(Error::invalid("need n >= 1".to_string()));
    }
    if let Some((i, j)) = matrix.distinctness_violation() {
        return Err(Error::invalid(format!(
            "system forces x_{i} = x_{j}; no distinct-valued solutions"
        )));
    }
    if matrix.rank_deficient() {
        return Err(Error::invalid("linear system has dependent rows".to_string()));
    }
    let rows = matrix.rows();
    let k = matrix.cols();
    if k <= rows {
        return Err(Error::invalid(format!(
            "system with {k} unknowns and {rows} independent equations has no free coordinates"
        )));
    }
    let free_count = k - rows;
    let work = (n as u128)
        .checked_pow(free_count as u32)
        .filter(|&w| w <= MAX_ENUMERATION)
        .ok_or_else(|| {
            Error::invalid(format!(
                "enumerating {n}^{free_count} free assignments exceeds the work cap"
            ))
        })?;
    let _ = work;

    // Reduced row echelon form over exact rationals.
    type Q = Ratio<i128>;
    let mut m: Vec<Vec<Q>> = (0..rows)
        .map(|r| (0..k).map(|c| Q::from_integer(matrix.entry(r, c) as i128)).collect())
        .collect();
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..k {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for j in c..k {
            m[r][j] *= inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c];
                for j in c..k {
                    let sub = f * m[r][j];
                    m[i][j] -= sub;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
    }
    debug_assert_eq!(pivot_cols.len(), rows);
    let free_cols: Vec<usize> = (0..k).filter(|c| !pivot_cols.contains(c)).collect();

    let ni = n as i128;
    let mut edges: Vec<Vec<u32>> = Vec::new();
    let mut assign = vec![1i128; free_count];
    let mut values = vec![0i128; k];
    'outer: loop {
        for (slot, &c) in free_cols.iter().enumerate() {
            values[c] = assign[slot];
        }
        let mut ok = true;
        for (row, &p) in pivot_cols.iter().enumerate() {
            // x_p = -sum over free columns of coeff * value.
            let mut acc = Q::zero();
            for &f in &free_cols {
                if !m[row][f].is_zero() {
                    acc += m[row][f] * Q::from_integer(values[f]);
                }
            }
            let x = -acc;
            if !x.denom().is_one() {
                ok = false;
                break;
            }
            let xi = x.to_integer();
            if xi < 1 || xi > ni {
                ok = false;
                break;
            }
            values[p] = xi;
        }
        if ok {
            let mut edge: Vec<u32> = values.iter().map(|&v| (v - 1) as u32).collect();
            edge.sort_unstable();
            if edge.windows(2).all(|w| w[0] != w[1]) {
                edges.push(edge);
            }
        }
        // Advance the odometer over free assignments.
        for slot in (0..free_count).rev() {
            if assign[slot] < ni {
                assign[slot] += 1;
                for later in slot + 1..free_count {
                    assign[later] = 1;
                }
                continue 'outer;
            }
        }
        break;
    }

    UniformHypergraph::new(k, n, edges)?
        .with_labels((1..=n as i64).map(Label::Integer).collect())
}

/// All distinct-valued Schur triples {x, y, z} with x + y = z in {1..n}.
pub fn schur_triples(n: usize) -> Result<UniformHypergraph> {
    linear_system(&IntegerMatrix::schur(), n)
}

/// The copy hypergraph of `pattern`: vertices are the l-subsets of {1..n}
/// (colex order, labeled by the subset), and each edge is the edge set of a
/// distinct copy of `pattern` in the complete l-uniform hypergraph on
/// {1..n}. The uniformity is the pattern's edge count.
pub fn pattern_copies(
    n: usize,
    ell: usize,
    pattern: &UniformHypergraph,
) -> Result<UniformHypergraph> {
    validate_pattern(ell, pattern)?;
    if n == 0 {
        return Err(Error::invalid("need n >= 1".to_string()));
    }
    let vertex_count = binomial(n, ell).ok_or_else(|| {
        Error::invalid(format!("C({n},{ell}) overflows"))
    })?;
    if vertex_count > MAX_VERTICES as u128 {
        return Err(Error::invalid(format!(
            "C({n},{ell}) = {vertex_count} vertices exceeds the {MAX_VERTICES} cap"
        )));
    }
    let vertex_count = vertex_count as usize;
    let pv = pattern.vertex_count();
    let work = binomial(n, pv)
        .and_then(|c| c.checked_mul(factorial(pv)?))
        .filter(|&w| w <= MAX_ENUMERATION)
        .ok_or_else(|| {
            Error::invalid(format!(
                "enumerating copies of a {pv}-vertex pattern in {n} points exceeds the work cap"
            ))
        })?;
    let _ = work;

    let mut edges: Vec<Vec<u32>> = Vec::new();
    if pv <= n {
        let mut chosen: Vec<usize> = (1..=pv).collect();
        let mut image = vec![0usize; pv];
        loop {
            permute_into(&chosen, &mut image, &mut |map| {
                let edge: Vec<u32> = pattern
                    .edges()
                    .map(|e| {
                        let mut s: Vec<usize> = e.iter().map(|&v| map[v as usize]).collect();
                        s.sort_unstable();
                        colex_rank(&s) as u32
                    })
                    .collect();
                edges.push(edge);
            });
            // Next pv-combination of {1..n}.
            let mut i = pv;
            loop {
                if i == 0 {
                    chosen.clear();
                    break;
                }
                i -= 1;
                if chosen[i] < n - (pv - 1 - i) {
                    chosen[i] += 1;
                    for j in i + 1..pv {
                        chosen[j] = chosen[j - 1] + 1;
                    }
                    break;
                }
            }
            if chosen.is_empty() {
                break;
            }
        }
    }

    let mut labels = Vec::with_capacity(vertex_count);
    if ell <= n {
        let mut subset: Vec<usize> = (1..=ell).collect();
        loop {
            labels.push(Label::Subset(subset.iter().map(|&v| v as i64).collect()));
            let mut i = ell;
            loop {
                if i == 0 {
                    subset.clear();
                    break;
                }
                i -= 1;
                if subset[i] < n - (ell - 1 - i) {
                    subset[i] += 1;
                    for j in i + 1..ell {
                        subset[j] = subset[j - 1] + 1;
                    }
                    break;
                }
            }
            if subset.is_empty() {
                break;
            }
        }
        // Emitted in lex order of the subsets; reorder to colex rank.
        let mut ranked: Vec<(usize, Label)> = labels
            .into_iter()
            .map(|l| {
                let Label::Subset(ref s) = l else { unreachable!() };
                let s: Vec<usize> = s.iter().map(|&v| v as usize).collect();
                (colex_rank(&s), l)
            })
            .collect();
        ranked.sort_by_key(|(r, _)| *r);
        labels = ranked.into_iter().map(|(_, l)| l).collect();
    }

    UniformHypergraph::new(pattern.edge_count(), vertex_count, edges)?.with_labels(labels)
}

/// Colex rank of a sorted subset of {1..n}: sum of C(s_i - 1, i) over
/// 1-based positions i. Independent of n.
fn colex_rank(sorted_one_based: &[usize]) -> usize {
    sorted_one_based
        .iter()
        .enumerate()
        .map(|(i0, &s)| binomial(s - 1, i0 + 1).expect("small binomial") as usize)
        .sum()
}

fn binomial(n: usize, k: usize) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128)?;
        acc /= (i + 1) as u128;
    }
    Some(acc)
}

fn factorial(n: usize) -> Option<u128> {
    let mut acc: u128 = 1;
    for i in 2..=n {
        acc = acc.checked_mul(i as u128)?;
    }
    Some(acc)
}

/// Calls `f` with every bijection from pattern-vertex index to a value of
/// `chosen`, writing it into `image`.
fn permute_into(
    chosen: &[usize],
    image: &mut [usize],
    f: &mut impl FnMut(&[usize]),
) {
    fn rec(
        chosen: &[usize],
        used: &mut Vec<bool>,
        image: &mut [usize],
        depth: usize,
        f: &mut impl FnMut(&[usize]),
    ) {
        if depth == image.len() {
            f(image);
            return;
        }
        for (i, &c) in chosen.iter().enumerate() {
            if !used[i] {
                used[i] = true;
                image[depth] = c;
                rec(chosen, used, image, depth + 1, f);
                used[i] = false;
            }
        }
    }
    let mut used = vec![false; chosen.len()];
    rec(chosen, &mut used, image, 0, f);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> UniformHypergraph {
        UniformHypergraph::new(2, 3, vec![vec![0, 1], vec![0, 2], vec![1, 2]]).unwrap()
    }

    fn two_edge_path() -> UniformHypergraph {
        UniformHypergraph::new(2, 3, vec![vec![0, 1], vec![1, 2]]).unwrap()
    }

    #[test]
    fn progressions_on_five() {
        let h = progressions(5, 3).unwrap();
        assert_eq!(h.vertex_count(), 5);
        let edges: Vec<&[u32]> = h.edges().collect();
        assert_eq!(
            edges,
            vec![&[0, 1, 2][..], &[0, 2, 4], &[1, 2, 3], &[2, 3, 4]]
        );
        assert_eq!(h.label(0), Some(&Label::Integer(1)));
    }

    #[test]
    fn progression_counts() {
        assert_eq!(progressions(10, 3).unwrap().edge_count(), 20);
        // Closed form: sum over d of (n - (k-1)d).
        for n in 1usize..=60 {
            for k in 3usize..=5 {
                let expect: usize = (1..)
                    .take_while(|&d| (k - 1) * d <= n.saturating_sub(1))
                    .map(|d| n - (k - 1) * d)
                    .sum();
                assert_eq!(progressions(n, k).unwrap().edge_count(), expect, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn progressions_reject_bad_params() {
        assert!(progressions(5, 2).is_err());
        assert!(progressions(0, 3).is_err());
        assert_eq!(progressions(3, 4).unwrap().edge_count(), 0);
    }

    #[test]
    fn homothetic_corner_in_three_grid() {
        let corner = vec![vec![0, 0], vec![1, 0], vec![0, 1]];
        let h = homothetic(3, 2, &corner).unwrap();
        assert_eq!(h.vertex_count(), 9);
        // Four unit placements plus one doubled copy.
        assert_eq!(h.edge_count(), 5);
        assert_eq!(h.label(0), Some(&Label::Point(vec![1, 1])));
        assert_eq!(h.label(8), Some(&Label::Point(vec![3, 3])));
    }

    #[test]
    fn homothetic_line_matches_progressions() {
        for n in [1, 2, 3, 7, 20] {
            for k in [3, 4] {
                let pts: Vec<Vec<i64>> = (1..=k as i64).map(|v| vec![v]).collect();
                let hom = homothetic(n, 1, &pts).unwrap();
                let ap = progressions(n, k).unwrap();
                let he: Vec<&[u32]> = hom.edges().collect();
                let ae: Vec<&[u32]> = ap.edges().collect();
                assert_eq!(he, ae, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn homothetic_rejects_bad_points() {
        assert!(homothetic(3, 2, &[vec![0, 0], vec![1, 1]]).is_err());
        assert!(homothetic(3, 2, &[vec![0, 0], vec![1, 1], vec![0]]).is_err());
        assert!(homothetic(3, 2, &[vec![0, 0], vec![1, 1], vec![-1, 0]]).is_err());
        assert!(homothetic(3, 2, &[vec![0, 0], vec![1, 1], vec![1, 1]]).is_err());
    }

    #[test]
    fn schur_triples_small() {
        let h = schur_triples(5).unwrap();
        let edges: Vec<&[u32]> = h.edges().collect();
        assert_eq!(
            edges,
            vec![&[0, 1, 2][..], &[0, 2, 3], &[0, 3, 4], &[1, 2, 4]]
        );
        assert_eq!(schur_triples(3).unwrap().edge_count(), 1);
        assert_eq!(schur_triples(2).unwrap().edge_count(), 0);
    }

    #[test]
    fn linear_system_matches_progressions() {
        for n in [1, 5, 12, 30] {
            for k in [3, 4] {
                let sys = IntegerMatrix::progression(k).unwrap();
                let lin = linear_system(&sys, n).unwrap();
                let ap = progressions(n, k).unwrap();
                let le: Vec<&[u32]> = lin.edges().collect();
                let ae: Vec<&[u32]> = ap.edges().collect();
                assert_eq!(le, ae, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn linear_system_rejects_bad_systems() {
        let diff = IntegerMatrix::new(1, 2, vec![1, -1]).unwrap();
        assert!(linear_system(&diff, 5).is_err());
        let dependent = IntegerMatrix::new(2, 3, vec![1, 1, -1, 2, 2, -2]).unwrap();
        assert!(linear_system(&dependent, 5).is_err());
        let square = IntegerMatrix::new(2, 2, vec![1, 2, 3, 4]).unwrap();
        assert!(linear_system(&square, 5).is_err());
    }

    #[test]
    fn triangle_copies_in_k4() {
        let h = pattern_copies(4, 2, &triangle()).unwrap();
        assert_eq!(h.vertex_count(), 6);
        assert_eq!(h.uniformity(), 3);
        assert_eq!(h.edge_count(), 4);
        // Vertex labels are the pairs in colex order.
        assert_eq!(h.label(0), Some(&Label::Subset(vec![1, 2])));
        assert_eq!(h.label(1), Some(&Label::Subset(vec![1, 3])));
        assert_eq!(h.label(5), Some(&Label::Subset(vec![3, 4])));
    }

    #[test]
    fn triangle_copy_counts() {
        for n in [3, 5, 6] {
            let h = pattern_copies(n, 2, &triangle()).unwrap();
            let expect = n * (n - 1) * (n - 2) / 6;
            assert_eq!(h.edge_count(), expect, "n={n}");
        }
    }

    #[test]
    fn path_copies_in_k4() {
        let h = pattern_copies(4, 2, &two_edge_path()).unwrap();
        // A copy is an unordered pair of adjacent pairs: 4 centers x C(3,2).
        assert_eq!(h.edge_count(), 12);
        assert_eq!(h.uniformity(), 2);
    }

    #[test]
    fn pattern_rejections() {
        // Isolated vertex.
        let lonely = UniformHypergraph::new(2, 3, vec![vec![0, 1]]).unwrap();
        assert!(pattern_copies(4, 2, &lonely).is_err());
        // Uniformity mismatch.
        assert!(pattern_copies(4, 3, &triangle()).is_err());
        // Pattern larger than the ground set still generates, just empty.
        let h = pattern_copies(2, 2, &triangle()).unwrap();
        assert_eq!(h.edge_count(), 0);
        assert_eq!(h.vertex_count(), 1);
    }

    #[test]
    fn config_spec_validation() {
        assert!(ConfigSpec::new(Family::Progressions { k: 3 }, 10).is_ok());
        assert!(ConfigSpec::new(Family::Progressions { k: 2 }, 10).is_err());
        assert!(ConfigSpec::new(Family::Schur, 0).is_err());
        // Single-edge pattern has no degree-2 vertex.
        let single = UniformHypergraph::new(2, 2, vec![vec![0, 1]]).unwrap();
        assert!(ConfigSpec::new(
            Family::PatternCopies { ell: 2, pattern: single },
            5
        )
        .is_err());
        assert!(ConfigSpec::new(
            Family::PatternCopies { ell: 2, pattern: two_edge_path() },
            5
        )
        .is_ok());
    }

    #[test]
    fn config_spec_json_round_trip() {
        let specs = vec![
            ConfigSpec::new(Family::Progressions { k: 3 }, 40).unwrap(),
            ConfigSpec::new(Family::Schur, 25).unwrap(),
            ConfigSpec::new(
                Family::Homothetic {
                    ell: 2,
                    points: vec![vec![0, 0], vec![1, 0], vec![0, 1]],
                },
                6,
            )
            .unwrap(),
            ConfigSpec::new(
                Family::Linear {
                    matrix: IntegerMatrix::schur(),
                },
                12,
            )
            .unwrap(),
            ConfigSpec::new(
                Family::PatternCopies {
                    ell: 2,
                    pattern: triangle(),
                },
                6,
            )
            .unwrap(),
        ];
        for spec in specs {
            let js = serde_json::to_string(&spec).unwrap();
            let back: ConfigSpec = serde_json::from_str(&js).unwrap();
            assert_eq!(back, spec);
        }
    }

    #[test]
    fn colex_rank_matches_pair_order() {
        // Pairs of {1..4} in colex order: 12 13 23 14 24 34.
        let pairs = [
            vec![1, 2],
            vec![1, 3],
            vec![2, 3],
            vec![1, 4],
            vec![2, 4],
            vec![3, 4],
        ];
        for (i, p) in pairs.iter().enumerate() {
            assert_eq!(colex_rank(p), i);
        }
    }
}

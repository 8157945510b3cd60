//! Exact integer matrices and the combinatorics that turn a linear system
//! into a threshold exponent.
//!
//! Rank is computed by fraction-free (Bareiss) elimination, first over i128
//! and transparently redone over arbitrary-precision integers if any product
//! would overflow, so results are exact for all inputs.

use std::io::{BufRead, Write};

use num_bigint::BigInt;
use num_rational::Rational64;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::density;
use crate::generators::{ConfigSpec, Family};
use crate::{Error, Result};

/// Dense row-major integer matrix with a cached rank over the rationals.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<i64>,
    rank: usize,
}

/// Largest column count accepted by the subset searches below; they
/// enumerate up to 3^cols states.
const MAX_SEARCH_COLS: usize = 16;

impl IntegerMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<i64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::invalid("matrix must have at least one row and column".to_string()));
        }
        if entries.len() != rows * cols {
            return Err(Error::invalid(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        let rank = rank_exact(rows, cols, |r, c| entries[r * cols + c]);
        Ok(IntegerMatrix {
            rows,
            cols,
            entries,
            rank,
        })
    }

    /// The (k-2) x k system whose distinct-valued solutions in {1..n} are the
    /// k-term arithmetic progressions: rows x_i - 2 x_{i+1} + x_{i+2} = 0.
    pub fn progression(k: usize) -> Result<Self> {
        if k < 3 {
            return Err(Error::invalid(format!("progression system needs k >= 3, got {k}")));
        }
        let mut entries = vec![0i64; (k - 2) * k];
        for i in 0..k - 2 {
            entries[i * k + i] = 1;
            entries[i * k + i + 1] = -2;
            entries[i * k + i + 2] = 1;
        }
        IntegerMatrix::new(k - 2, k, entries)
    }

    /// The 1 x 3 system x + y - z = 0 (Schur triples).
    pub fn schur() -> Self {
        IntegerMatrix::new(1, 3, vec![1, 1, -1]).expect("static system is valid")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, r: usize, c: usize) -> i64 {
        self.entries[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[i64] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// True when the rows are linearly dependent.
    pub fn rank_deficient(&self) -> bool {
        self.rank < self.rows
    }

    /// Rank of the submatrix formed by the given columns (0-based, distinct).
    /// The empty selection has rank 0.
    pub fn rank_of_columns(&self, columns: &[usize]) -> Result<usize> {
        let mut seen = vec![false; self.cols];
        for &c in columns {
            if c >= self.cols {
                return Err(Error::invalid(format!("column {c} out of range")));
            }
            if seen[c] {
                return Err(Error::invalid(format!("column {c} selected twice")));
            }
            seen[c] = true;
        }
        if columns.is_empty() {
            return Ok(0);
        }
        Ok(rank_exact(self.rows, columns.len(), |r, j| {
            self.entry(r, columns[j])
        }))
    }

    fn rank_of_column_mask(&self, mask: u32) -> usize {
        let columns: Vec<usize> = (0..self.cols).filter(|&c| mask >> c & 1 == 1).collect();
        if columns.is_empty() {
            0
        } else {
            rank_exact(self.rows, columns.len(), |r, j| self.entry(r, columns[j]))
        }
    }

    /// Whether the row space contains the functional x_i - x_j, i.e. whether
    /// every rational solution of Ax = 0 has x_i = x_j.
    fn forces_equal(&self, i: usize, j: usize) -> bool {
        let rank_aug = rank_exact(self.rows + 1, self.cols, |r, c| {
            if r < self.rows {
                self.entry(r, c)
            } else if c == i {
                1
            } else if c == j {
                -1
            } else {
                0
            }
        });
        rank_aug == self.rank
    }

    /// Whether the vector `target` lies in the span of the columns in `mask`.
    fn mask_spans(&self, mask: u32, mask_rank: usize, target: &[i64]) -> bool {
        let columns: Vec<usize> = (0..self.cols).filter(|&c| mask >> c & 1 == 1).collect();
        let rank_aug = rank_exact(self.rows, columns.len() + 1, |r, j| {
            if j < columns.len() {
                self.entry(r, columns[j])
            } else {
                target[r]
            }
        });
        rank_aug == mask_rank
    }

    /// Classifies the system: does it admit distinct-valued solutions at all,
    /// does every finite coloring of the integers yield a monochromatic
    /// solution (columns condition), and does every dense set yield one
    /// (columns condition plus the all-ones vector solving the system).
    ///
    /// The columns-condition search enumerates ordered block partitions of
    /// the columns and is limited to `cols <= 16`.
    /// First column pair (i, j) whose values are forced equal in every
    /// rational solution, if any. `Some` means the system has no
    /// distinct-valued solutions.
    pub fn distinctness_violation(&self) -> Option<(usize, usize)> {
        for i in 0..self.cols {
            for j in i + 1..self.cols {
                if self.forces_equal(i, j) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn classify(&self) -> Result<MatrixClassification> {
        if self.cols > MAX_SEARCH_COLS {
            return Err(Error::invalid(format!(
                "classification enumerates column partitions; needs cols <= {MAX_SEARCH_COLS}, got {}",
                self.cols
            )));
        }
        let equal_pair = self.distinctness_violation();
        let irredundant = equal_pair.is_none();

        let column_blocks = self.columns_condition_witness();
        let partition_regular = column_blocks.is_some();

        let all_ones_solves = (0..self.rows).all(|r| self.row(r).iter().sum::<i64>() == 0);
        let density_regular = irredundant && partition_regular && all_ones_solves;

        Ok(MatrixClassification {
            irredundant,
            partition_regular,
            density_regular,
            column_blocks,
            equal_pair,
        })
    }

    /// Searches for an ordered partition of the columns into blocks where the
    /// first block sums to zero and every later block sums into the span of
    /// all earlier columns. Returns the blocks if one exists.
    fn columns_condition_witness(&self) -> Option<Vec<Vec<usize>>> {
        let k = self.cols;
        let full: u32 = if k == 32 { u32::MAX } else { (1u32 << k) - 1 };

        // Column sums for every subset, built by peeling the lowest bit.
        let mut sums: Vec<Vec<i64>> = vec![vec![0; self.rows]; 1 << k];
        for mask in 1u32..=full {
            let low = mask.trailing_zeros() as usize;
            let rest = (mask & (mask - 1)) as usize;
            for r in 0..self.rows {
                sums[mask as usize][r] = sums[rest][r] + self.entry(r, low);
            }
        }

        // parent[mask] = (previous mask, block added); masks in increasing
        // popcount order so predecessors are settled first.
        let mut parent: Vec<Option<(u32, u32)>> = vec![None; 1 << k];
        let mut reachable = vec![false; 1 << k];
        let mut order: Vec<u32> = (1..=full).collect();
        order.sort_by_key(|m| m.count_ones());

        for &mask in &order {
            if sums[mask as usize].iter().all(|&s| s == 0) {
                reachable[mask as usize] = true;
                parent[mask as usize] = Some((0, mask));
            }
        }
        for &mask in &order {
            if !reachable[mask as usize] || mask == full {
                continue;
            }
            let mask_rank = self.rank_of_column_mask(mask);
            let comp = full & !mask;
            // All nonempty subsets of the complement.
            let mut block = comp;
            while block > 0 {
                let next = (mask | block) as usize;
                if !reachable[next]
                    && self.mask_spans(mask, mask_rank, &sums[block as usize])
                {
                    reachable[next] = true;
                    parent[next] = Some((mask, block));
                }
                block = (block - 1) & comp;
            }
        }

        if !reachable[full as usize] {
            return None;
        }
        let mut blocks_rev = Vec::new();
        let mut cur = full;
        while cur != 0 {
            let (prev, block) = parent[cur as usize].expect("reachable state has a parent");
            blocks_rev.push((0..k).filter(|&c| block >> c & 1 == 1).collect::<Vec<_>>());
            cur = prev;
        }
        blocks_rev.reverse();
        Some(blocks_rev)
    }

    /// The threshold density of the system: the maximum over column
    /// partitions W (|W| >= 2) of (|W|-1) / (|W|-1 + rank(A without W) -
    /// rank(A)). Requires an irredundant system satisfying the columns
    /// condition, under which every denominator is at least 1; its
    /// reciprocal is the exponent of the random-subset threshold.
    pub fn partition_density(&self) -> Result<PartitionDensity> {
        let classification = self.classify()?;
        if !classification.irredundant {
            let (i, j) = classification.equal_pair.unwrap();
            return Err(Error::invalid(format!(
                "system forces x_{i} = x_{j}; no distinct-valued solutions"
            )));
        }
        if !classification.partition_regular {
            return Err(Error::invalid(
                "system fails the columns condition".to_string(),
            ));
        }

        let k = self.cols;
        let full: u32 = (1u32 << k) - 1;
        let rank_full = self.rank as i64;
        let mut best: Option<(Rational64, Vec<usize>)> = None;
        for w in 1..=full {
            let size = w.count_ones() as i64;
            if size < 2 {
                continue;
            }
            let complement_rank = self.rank_of_column_mask(full & !w) as i64;
            let denom = size - 1 + complement_rank - rank_full;
            let witness: Vec<usize> = (0..k).filter(|&c| w >> c & 1 == 1).collect();
            if denom <= 0 {
                return Err(Error::contract(format!(
                    "partition {witness:?} yields non-positive denominator {denom}"
                )));
            }
            let value = Rational64::new(size - 1, denom);
            if best.as_ref().map_or(true, |(b, _)| value > *b) {
                best = Some((value, witness));
            }
        }
        let (value, witness_columns) = best.ok_or_else(|| {
            Error::invalid("system needs at least 2 columns".to_string())
        })?;
        Ok(PartitionDensity {
            value,
            witness_columns,
        })
    }

    /// Canonical text form: header `rows <r> cols <c>`, one row per line.
    pub fn write_text<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "rows {} cols {}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let line: Vec<String> = self.row(r).iter().map(|v| v.to_string()).collect();
            writeln!(out, "{}", line.join(" "))?;
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut buf = Vec::new();
        self.write_text(&mut buf).expect("write to Vec cannot fail");
        String::from_utf8(buf).expect("text form is ASCII")
    }

    /// Parses the text form; `#` lines are skipped.
    pub fn read_text<R: BufRead>(input: R) -> Result<Self> {
        let mut header: Option<(usize, usize)> = None;
        let mut entries: Vec<i64> = Vec::new();
        let mut row_count = 0;
        for line in input.lines() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if header.is_none() {
                let toks: Vec<&str> = line.split_whitespace().collect();
                if toks.len() != 4 || toks[0] != "rows" || toks[2] != "cols" {
                    return Err(Error::format(format!(
                        "expected 'rows <r> cols <c>' header, got {line:?}"
                    )));
                }
                let parse = |t: &str| {
                    t.parse::<usize>()
                        .map_err(|_| Error::format(format!("bad header number {t:?}")))
                };
                header = Some((parse(toks[1])?, parse(toks[3])?));
                continue;
            }
            let (_, cols) = header.unwrap();
            let row: Vec<i64> = line
                .split_whitespace()
                .map(|t| {
                    t.parse::<i64>()
                        .map_err(|_| Error::format(format!("bad entry {t:?}")))
                })
                .collect::<Result<_>>()?;
            if row.len() != cols {
                return Err(Error::format(format!(
                    "row has {} entries, expected {cols}",
                    row.len()
                )));
            }
            entries.extend_from_slice(&row);
            row_count += 1;
        }
        let (rows, cols) = header.ok_or_else(|| Error::format("missing header line".to_string()))?;
        if row_count != rows {
            return Err(Error::format(format!(
                "header claims {rows} rows, found {row_count}"
            )));
        }
        IntegerMatrix::new(rows, cols, entries)
    }
}

/// Result of the partition-density maximization.
#[derive(Clone, Debug, Serialize)]
pub struct PartitionDensity {
    /// The density m(A); the threshold exponent is its reciprocal.
    #[serde(with = "crate::harness::ratio_text")]
    pub value: Rational64,
    /// Columns of a maximizing partition class W (0-based).
    pub witness_columns: Vec<usize>,
}

/// Structural classification of a linear system.
#[derive(Clone, Debug, Serialize)]
pub struct MatrixClassification {
    /// Admits solutions with pairwise distinct values.
    pub irredundant: bool,
    /// Satisfies the columns condition (monochromatic solutions under any
    /// finite coloring).
    pub partition_regular: bool,
    /// Irredundant, partition regular, and solved by the all-ones vector
    /// (solutions inside every positive-density set).
    pub density_regular: bool,
    /// Ordered column blocks witnessing the columns condition, when it holds.
    pub column_blocks: Option<Vec<Vec<usize>>>,
    /// A pair (i, j) with x_i = x_j forced, when irredundancy fails.
    pub equal_pair: Option<(usize, usize)>,
}

/// Exponent of the random-subset threshold for a configuration family:
/// n^(-exponent) marks where the density statement starts to survive
/// inside random subsets.
pub fn threshold_exponent(spec: &ConfigSpec) -> Result<Rational64> {
    match &spec.family {
        Family::Progressions { k } => Ok(Rational64::new(1, (*k as i64) - 1)),
        Family::Homothetic { points, .. } => {
            Ok(Rational64::new(1, points.len() as i64 - 1))
        }
        Family::Linear { matrix } => Ok(matrix.partition_density()?.value.recip()),
        Family::Schur => Ok(IntegerMatrix::schur().partition_density()?.value.recip()),
        Family::PatternCopies { pattern, .. } => {
            Ok(density::subgraph_density(pattern)?.value.recip())
        }
    }
}

/// Exact rank of the matrix given entrywise by `at`, via Bareiss elimination
/// over i128 with an arbitrary-precision fallback on overflow.
fn rank_exact(rows: usize, cols: usize, at: impl Fn(usize, usize) -> i64) -> usize {
    let mut small: Vec<Vec<i128>> = (0..rows)
        .map(|r| (0..cols).map(|c| at(r, c) as i128).collect())
        .collect();
    match bareiss_i128(&mut small) {
        Some(rank) => rank,
        None => {
            let mut big: Vec<Vec<BigInt>> = (0..rows)
                .map(|r| (0..cols).map(|c| BigInt::from(at(r, c))).collect())
                .collect();
            bareiss_big(&mut big)
        }
    }
}

fn bareiss_i128(m: &mut [Vec<i128>]) -> Option<usize> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut rank = 0;
    let mut prev: i128 = 1;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pivot) = (rank..rows).find(|&r| m[r][c] != 0) else {
            continue;
        };
        m.swap(rank, pivot);
        for r in rank + 1..rows {
            for j in c + 1..cols {
                let a = m[rank][c].checked_mul(m[r][j])?;
                let b = m[r][c].checked_mul(m[rank][j])?;
                m[r][j] = a.checked_sub(b)? / prev;
            }
            m[r][c] = 0;
        }
        prev = m[rank][c];
        rank += 1;
    }
    Some(rank)
}

fn bareiss_big(m: &mut [Vec<BigInt>]) -> usize {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut rank = 0;
    let mut prev = BigInt::from(1);
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pivot) = (rank..rows).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        for r in rank + 1..rows {
            for j in c + 1..cols {
                let num = &m[rank][c] * &m[r][j] - &m[r][c] * &m[rank][j];
                m[r][j] = num / &prev;
            }
            m[r][c] = BigInt::zero();
        }
        prev = m[rank][c].clone();
        rank += 1;
    }
    debug_assert!(prev.abs() > BigInt::zero() || rank == 0);
    rank
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<i64>,
}

impl Serialize for IntegerMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RawMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntegerMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawMatrix::deserialize(d)?;
        IntegerMatrix::new(raw.rows, raw.cols, raw.entries).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_basics() {
        let m = IntegerMatrix::new(2, 2, vec![1, 2, 2, 4]).unwrap();
        assert_eq!(m.rank(), 1);
        assert!(m.rank_deficient());
        let id = IntegerMatrix::new(2, 2, vec![1, 0, 0, 1]).unwrap();
        assert_eq!(id.rank(), 2);
        let z = IntegerMatrix::new(2, 3, vec![0; 6]).unwrap();
        assert_eq!(z.rank(), 0);
    }

    #[test]
    fn rank_survives_i128_overflow() {
        // Huge diagonal forces the Bareiss products past i128.
        let big = i64::MAX;
        let m = IntegerMatrix::new(
            3,
            3,
            vec![big, 1, 1, 1, big, 1, 1, 1, big],
        )
        .unwrap();
        assert_eq!(m.rank(), 3);
    }

    #[test]
    fn restricted_rank_on_progression_system() {
        let a = IntegerMatrix::progression(4).unwrap();
        assert_eq!(a.rank(), 2);
        // Last column alone: the vector (0, 1).
        assert_eq!(a.rank_of_columns(&[3]).unwrap(), 1);
        assert_eq!(a.rank_of_columns(&[0, 1, 2, 3]).unwrap(), 2);
        assert_eq!(a.rank_of_columns(&[]).unwrap(), 0);
        assert!(a.rank_of_columns(&[4]).is_err());
        assert!(a.rank_of_columns(&[1, 1]).is_err());
    }

    #[test]
    fn schur_density_is_two() {
        let d = IntegerMatrix::schur().partition_density().unwrap();
        assert_eq!(d.value, Rational64::new(2, 1));
        // Maximizer is the full column set: (3-1)/(3-1+0-1).
        assert_eq!(d.witness_columns, vec![0, 1, 2]);
    }

    #[test]
    fn progression_density_is_k_minus_one() {
        for k in 3..=6 {
            let d = IntegerMatrix::progression(k)
                .unwrap()
                .partition_density()
                .unwrap();
            assert_eq!(d.value, Rational64::new(k as i64 - 1, 1), "k = {k}");
        }
    }

    #[test]
    fn difference_system_is_rejected() {
        let m = IntegerMatrix::new(1, 2, vec![1, -1]).unwrap();
        let c = m.classify().unwrap();
        assert!(!c.irredundant);
        assert_eq!(c.equal_pair, Some((0, 1)));
        assert!(m.partition_density().is_err());
    }

    #[test]
    fn schur_classification() {
        let c = IntegerMatrix::schur().classify().unwrap();
        assert!(c.irredundant);
        assert!(c.partition_regular);
        assert!(!c.density_regular);
        let blocks = c.column_blocks.unwrap();
        // First block must sum to zero: {x, z} columns.
        assert_eq!(blocks[0], vec![0, 2]);
    }

    #[test]
    fn progression_classification() {
        for k in 3..=5 {
            let c = IntegerMatrix::progression(k).unwrap().classify().unwrap();
            assert!(c.irredundant, "k = {k}");
            assert!(c.partition_regular, "k = {k}");
            assert!(c.density_regular, "k = {k}");
            // Single block: all columns sum to zero per row.
            assert_eq!(c.column_blocks.unwrap()[0].len(), k);
        }
    }

    #[test]
    fn all_positive_system_is_not_partition_regular() {
        let m = IntegerMatrix::new(1, 3, vec![1, 1, 1]).unwrap();
        let c = m.classify().unwrap();
        assert!(c.irredundant);
        assert!(!c.partition_regular);
        assert!(!c.density_regular);
        assert!(m.partition_density().is_err());
    }

    #[test]
    fn text_round_trip() {
        let m = IntegerMatrix::progression(5).unwrap();
        let text = m.to_text();
        let back = IntegerMatrix::read_text(text.as_bytes()).unwrap();
        assert_eq!(back, m);
        assert_eq!(back.to_text(), text);
    }

    #[test]
    fn text_rejects_ragged_rows() {
        assert!(IntegerMatrix::read_text("rows 2 cols 2\n1 2 3\n4 5 6\n".as_bytes()).is_err());
        assert!(IntegerMatrix::read_text("rows 2 cols 3\n1 2 3\n".as_bytes()).is_err());
    }
}

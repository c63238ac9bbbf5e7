use serde::{Deserialize, Serialize};

use crate::report::CheckReport;
use crate::{Error, Result};

/// `N x N` grid of symbols `0..N`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<usize>>", into = "Vec<Vec<usize>>")]
pub struct LatinSquare {
    order: usize,
    cells: Vec<Vec<usize>>,
}

impl LatinSquare {
    /// Checks shape and symbol range only; the Latin property is left to
    /// [`verify_latin`].
    pub fn new(cells: Vec<Vec<usize>>) -> Result<Self> {
        let n = cells.len();
        if n == 0 {
            return Err(Error::InvalidArgument("empty square".into()));
        }
        for (i, row) in cells.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch(format!("row {i} has {} cells, expected {n}", row.len())));
            }
            if let Some(&s) = row.iter().find(|&&s| s >= n) {
                return Err(Error::InvalidArgument(format!("symbol {s} out of range for order {n}")));
            }
        }
        Ok(Self { order: n, cells })
    }

    /// `cells[i][j] = (i + j) mod N`.
    pub fn cyclic(n: usize) -> Result<Self> {
        Self::new((0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect())
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    pub fn get(&self, i: usize, j: usize) -> usize {
        self.cells[i][j]
    }
}

impl TryFrom<Vec<Vec<usize>>> for LatinSquare {
    type Error = Error;

    fn try_from(cells: Vec<Vec<usize>>) -> Result<Self> {
        Self::new(cells)
    }
}

impl From<LatinSquare> for Vec<Vec<usize>> {
    fn from(sq: LatinSquare) -> Self {
        sq.cells
    }
}

/// First repeated symbol in a row (`[0, row, symbol]`) or column
/// (`[1, col, symbol]`). The residual counts repeated occurrences.
pub fn verify_latin(sq: &LatinSquare) -> CheckReport {
    let n = sq.order;
    let mut repeats = 0usize;
    let mut witness = Vec::new();
    for axis in 0..2 {
        for line in 0..n {
            let mut seen = vec![false; n];
            for k in 0..n {
                let s = if axis == 0 { sq.cells[line][k] } else { sq.cells[k][line] };
                if seen[s] {
                    repeats += 1;
                    if witness.is_empty() {
                        witness.push(vec![axis, line, s]);
                    }
                }
                seen[s] = true;
            }
        }
    }
    CheckReport::new(repeats as f64, witness, 0.0)
}

/// Both squares Latin and every ordered pair `(A_ij, B_ij)` distinct.
/// The pair part's witness is the first cell `[i, j]` repeating a pair.
pub fn verify_graeco_latin(a: &LatinSquare, b: &LatinSquare) -> Result<CheckReport> {
    let n = a.order;
    if b.order != n {
        return Err(Error::DimensionMismatch(format!("orders {n} and {}", b.order)));
    }
    let ra = verify_latin(a);
    let rb = verify_latin(b);
    let mut seen = vec![false; n * n];
    let mut repeats = 0usize;
    let mut witness = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let p = a.cells[i][j] * n + b.cells[i][j];
            if seen[p] {
                repeats += 1;
                if witness.is_empty() {
                    witness.push(vec![i, j]);
                }
            }
            seen[p] = true;
        }
    }
    Ok(CheckReport::combine(
        vec![
            ("latin-a".into(), ra.max_residual, ra.witness),
            ("latin-b".into(), rb.max_residual, rb.witness),
            ("pairs".into(), repeats as f64, witness),
        ],
        0.0,
    ))
}

/// Orthogonal pair `A_ij = i + j`, `B_ij = i + 2j` (mod N) for odd `N`.
pub fn graeco_latin(n: usize) -> Result<(LatinSquare, LatinSquare)> {
    if n == 6 {
        return Err(Error::NoGraecoLatinSix);
    }
    if n % 2 == 0 || !(3..=99).contains(&n) {
        return Err(Error::InvalidArgument(format!("orthogonal pairs are only constructed for odd 3 ≤ N ≤ 99, got {n}")));
    }
    let a = LatinSquare::new((0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect())?;
    let b = LatinSquare::new((0..n).map(|i| (0..n).map(|j| (i + 2 * j) % n).collect()).collect())?;
    Ok((a, b))
}

/// The sixteen court cards: ranks (A, K, Q, J) and suits (♠, ♣, ♦, ♥),
/// each numbered 0..4.
pub fn card_square() -> (LatinSquare, LatinSquare) {
    let ranks = vec![vec![0, 1, 2, 3], vec![1, 0, 3, 2], vec![2, 3, 0, 1], vec![3, 2, 1, 0]];
    let suits = vec![vec![0, 1, 2, 3], vec![3, 2, 1, 0], vec![1, 0, 3, 2], vec![2, 3, 0, 1]];
    (LatinSquare::new(ranks).unwrap(), LatinSquare::new(suits).unwrap())
}

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::latin::LatinSquare;
use crate::linalg::{c64, kron_vec, norm, reduced_state, ComplexMatrix};
use crate::report::{CheckReport, Worst};
use crate::state::StateVector;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TableMode {
    /// Cells live in `C^N`.
    SingleSpace,
    /// Cells live in `C^N ⊗ C^N`.
    Bipartite,
}

/// `N x N` table of states.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "TableRepr", into = "TableRepr")]
pub struct QuantumLatinTable {
    pub order: usize,
    pub mode: TableMode,
    pub cells: Vec<Vec<StateVector>>,
}

#[derive(Serialize, Deserialize)]
struct TableRepr {
    mode: TableMode,
    cells: Vec<Vec<StateVector>>,
}

impl TryFrom<TableRepr> for QuantumLatinTable {
    type Error = Error;

    fn try_from(r: TableRepr) -> Result<Self> {
        QuantumLatinTable::new(r.mode, r.cells)
    }
}

impl From<QuantumLatinTable> for TableRepr {
    fn from(t: QuantumLatinTable) -> Self {
        TableRepr { mode: t.mode, cells: t.cells }
    }
}

impl QuantumLatinTable {
    pub fn new(mode: TableMode, cells: Vec<Vec<StateVector>>) -> Result<Self> {
        let n = cells.len();
        if n == 0 || cells.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch("table must be square and non-empty".into()));
        }
        let want: Vec<usize> = match mode {
            TableMode::SingleSpace => vec![n],
            TableMode::Bipartite => vec![n, n],
        };
        for row in &cells {
            for v in row {
                if v.dims() != want.as_slice() {
                    return Err(Error::DimensionMismatch(format!(
                        "cell with dims {:?}, expected {want:?}",
                        v.dims()
                    )));
                }
            }
        }
        Ok(Self { order: n, mode, cells })
    }

    /// Computational basis vectors `|sq_ij>`.
    pub fn from_latin(sq: &LatinSquare) -> Result<Self> {
        let n = sq.order();
        let cells = (0..n)
            .map(|i| (0..n).map(|j| StateVector::basis(vec![n], sq.get(i, j))).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::new(TableMode::SingleSpace, cells)
    }

    /// Product states `|A_ij> ⊗ |B_ij>`.
    pub fn from_pair(a: &LatinSquare, b: &LatinSquare) -> Result<Self> {
        let n = a.order();
        if b.order() != n {
            return Err(Error::DimensionMismatch(format!("orders {n} and {}", b.order())));
        }
        let cells = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| StateVector::basis(vec![n, n], a.get(i, j) * n + b.get(i, j)))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(TableMode::Bipartite, cells)
    }

    /// Row `line` (axis 0) or column `line` (axis 1).
    fn line(&self, axis: usize, line: usize) -> Vec<&StateVector> {
        (0..self.order).map(|k| if axis == 0 { &self.cells[line][k] } else { &self.cells[k][line] }).collect()
    }
}

fn gram_defect(vs: &[&StateVector]) -> (f64, usize, usize) {
    let mut worst = (f64::NEG_INFINITY, 0, 0);
    for i in 0..vs.len() {
        for j in i..vs.len() {
            let target = if i == j { 1.0 } else { 0.0 };
            let d = (vs[i].inner(vs[j]) - c64(target, 0.0)).norm();
            if d > worst.0 || d.is_nan() {
                worst = (d, i, j);
            }
        }
    }
    worst
}

/// Largest Gram defect over all rows and columns; witness
/// `[axis, line, i, j]` with axis 0 for rows.
pub fn verify_quantum_latin(table: &QuantumLatinTable, tol: f64) -> Result<CheckReport> {
    if table.mode != TableMode::SingleSpace {
        return Err(Error::InvalidArgument("quantum Latin squares live in a single space".into()));
    }
    let mut worst = Worst::default();
    for axis in 0..2 {
        for line in 0..table.order {
            let (d, i, j) = gram_defect(&table.line(axis, line));
            worst.update(d, || vec![vec![axis, line, i, j]]);
        }
    }
    Ok(worst.into_report(tol))
}

/// `max(‖Tr_B |s><s| − I/N‖_max, |‖s‖ − 1|)` for the uniform superposition
/// `s = N^{-1/2} Σ_k v_k`.
fn superposition_defect(vs: &[&StateVector]) -> Result<f64> {
    let n = vs.len();
    let s = 1.0 / (n as f64).sqrt();
    let mut sum = vec![c64(0.0, 0.0); n * n];
    for v in vs {
        for (a, b) in sum.iter_mut().zip(v.amplitudes()) {
            *a += b * s;
        }
    }
    let red = reduced_state(&sum, &[n, n], &[0])?;
    let flat = ComplexMatrix::identity(n).scale_real(1.0 / n as f64);
    Ok(red.max_abs_diff(&flat).max((norm(&sum) - 1.0).abs()))
}

/// Orthogonal quantum Latin square check: global orthonormality of the
/// `N²` cells, and maximal entanglement of each row and column
/// superposition (uniform +1 phases). Parts are named `orthonormality`,
/// `rows` and `columns`.
pub fn verify_oqls(table: &QuantumLatinTable, tol: f64) -> Result<CheckReport> {
    if table.mode != TableMode::Bipartite {
        return Err(Error::InvalidArgument("orthogonal quantum Latin squares live in C^N ⊗ C^N".into()));
    }
    let n = table.order;
    let all: Vec<&StateVector> = table.cells.iter().flatten().collect();
    let (d, i, j) = gram_defect(&all);
    let ortho = (d, vec![vec![i / n, i % n, j / n, j % n]]);
    let mut lines = [Worst::default(), Worst::default()];
    for (axis, worst) in lines.iter_mut().enumerate() {
        for line in 0..n {
            let r = superposition_defect(&table.line(axis, line))?;
            worst.update(r, || vec![vec![axis, line]]);
        }
    }
    let [rows, cols] = lines;
    Ok(CheckReport::combine(
        vec![
            ("orthonormality".into(), ortho.0, ortho.1),
            ("rows".into(), rows.value, rows.witness),
            ("columns".into(), cols.value, cols.witness),
        ],
        tol,
    ))
}

/// The four Bell states in the order Φ+, Φ−, Ψ+, Ψ−.
pub fn bell_states() -> [StateVector; 4] {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let z = c64(0.0, 0.0);
    let p = c64(h, 0.0);
    let m = c64(-h, 0.0);
    let mk = |a: Vec<Complex64>| StateVector::new(vec![2, 2], a).unwrap();
    [mk(vec![p, z, z, p]), mk(vec![p, z, z, m]), mk(vec![z, p, p, z]), mk(vec![z, p, m, z])]
}

/// `|a> ⊗ |b>` as a bipartite state.
pub fn product_state(a: &StateVector, b: &StateVector) -> Result<StateVector> {
    StateVector::new(vec![a.dim(), b.dim()], kron_vec(a.amplitudes(), b.amplitudes()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::latin::graeco_latin;

    #[test]
    fn classical_embedding_is_quantum_latin() {
        let t = QuantumLatinTable::from_latin(&LatinSquare::cyclic(4).unwrap()).unwrap();
        assert!(verify_quantum_latin(&t, 1e-12).unwrap().passed);
    }

    #[test]
    fn all_zero_table_fails() {
        let z = StateVector::basis(vec![3], 0).unwrap();
        let t = QuantumLatinTable::new(TableMode::SingleSpace, vec![vec![z; 3]; 3]).unwrap();
        let rep = verify_quantum_latin(&t, 1e-12).unwrap();
        assert!(!rep.passed);
        assert!((rep.max_residual - 1.0).abs() < 1e-15);
    }

    #[test]
    fn non_orthogonal_row_is_located() {
        let mut t = QuantumLatinTable::from_latin(&LatinSquare::cyclic(3).unwrap()).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        // row 2 becomes |2>, (|0>+|2>)/√2, |1>: not orthogonal
        t.cells[2][1] = StateVector::new(vec![3], vec![c64(h, 0.), c64(0., 0.), c64(h, 0.)]).unwrap();
        let rep = verify_quantum_latin(&t, 1e-12).unwrap();
        assert!(!rep.passed);
        assert!((rep.max_residual - h).abs() < 1e-15);
        let w = &rep.witness[0];
        assert!((w[0] == 0 && w[1] == 2) || (w[0] == 1 && w[1] == 1), "{w:?}");
    }

    #[test]
    fn wrong_modes_are_errors() {
        let single = QuantumLatinTable::from_latin(&LatinSquare::cyclic(3).unwrap()).unwrap();
        assert!(verify_oqls(&single, 1e-12).is_err());
        let (a, b) = graeco_latin(3).unwrap();
        let pair = QuantumLatinTable::from_pair(&a, &b).unwrap();
        assert!(verify_quantum_latin(&pair, 1e-12).is_err());
    }

    #[test]
    fn graeco_latin_product_table_is_oqls() {
        for n in [3, 5] {
            let (a, b) = graeco_latin(n).unwrap();
            let t = QuantumLatinTable::from_pair(&a, &b).unwrap();
            let rep = verify_oqls(&t, 1e-12).unwrap();
            assert!(rep.passed, "n={n} {rep:?}");
        }
    }

    #[test]
    fn no_arrangement_of_bell_states_is_oqls() {
        let bell = bell_states();
        let mut perms = Vec::new();
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    for d in 0..4 {
                        let mut s = [a, b, c, d];
                        s.sort_unstable();
                        if s == [0, 1, 2, 3] {
                            perms.push([a, b, c, d]);
                        }
                    }
                }
            }
        }
        assert_eq!(perms.len(), 24);
        for p in perms {
            let cells = vec![
                vec![bell[p[0]].clone(), bell[p[1]].clone()],
                vec![bell[p[2]].clone(), bell[p[3]].clone()],
            ];
            let t = QuantumLatinTable::new(TableMode::Bipartite, cells).unwrap();
            let rep = verify_oqls(&t, 1e-8).unwrap();
            assert!(!rep.passed, "{p:?}");
            assert!(rep.part("orthonormality").unwrap() < 1e-15);
        }
    }

    #[test]
    fn perturbation_shows_up_in_residual() {
        let (a, b) = graeco_latin(3).unwrap();
        let mut t = QuantumLatinTable::from_pair(&a, &b).unwrap();
        let eps = 1e-6;
        let mut amps = t.cells[0][0].amplitudes().to_vec();
        amps[1] += c64(eps, 0.0);
        t.cells[0][0] = StateVector::normalized(vec![3, 3], amps).unwrap();
        let rep = verify_oqls(&t, 1e-12).unwrap();
        assert!(!rep.passed);
        assert!(rep.max_residual > 0.3 * eps && rep.max_residual < 3.0 * eps, "{}", rep.max_residual);
    }

    #[test]
    fn product_state_dims() {
        let a = StateVector::basis(vec![2], 1).unwrap();
        let b = StateVector::basis(vec![3], 2).unwrap();
        let p = product_state(&a, &b).unwrap();
        assert_eq!(p.dims(), &[2, 3]);
        assert_eq!(p.amplitudes()[5], c64(1.0, 0.0));
        assert_eq!(p.inner(&p), c64(1.0, 0.0));
    }
}

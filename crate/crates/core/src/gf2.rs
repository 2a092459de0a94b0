//! Exact sparse linear algebra over the two-element field.
//!
//! Columns are sorted lists of row indices; addition is symmetric difference.
//! This is the substrate for boundary reduction, rank counts, and the
//! homotopy solver, so every operation here is deterministic and exact.

use std::collections::BTreeMap;

/// A sparse GF(2) column: strictly increasing row indices.
pub type Gf2Col = Vec<usize>;

/// Symmetric difference of two sorted index lists (GF(2) addition).
pub fn xor_cols(a: &[usize], b: &[usize]) -> Gf2Col {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// A sparse GF(2) matrix stored column-wise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gf2Matrix {
    rows: usize,
    cols: Vec<Gf2Col>,
}

impl Gf2Matrix {
    /// A zero matrix of the given shape.
    pub fn zero(rows: usize, ncols: usize) -> Gf2Matrix {
        Gf2Matrix {
            rows,
            cols: vec![Vec::new(); ncols],
        }
    }

    pub fn identity(n: usize) -> Gf2Matrix {
        Gf2Matrix {
            rows: n,
            cols: (0..n).map(|i| vec![i]).collect(),
        }
    }

    /// Builds from explicit columns, validating sortedness and bounds.
    pub fn from_columns(rows: usize, cols: Vec<Gf2Col>) -> Gf2Matrix {
        for col in &cols {
            debug_assert!(
                col.windows(2).all(|w| w[0] < w[1]),
                "column not strictly sorted"
            );
            if let Some(&last) = col.last() {
                assert!(
                    last < rows,
                    "row index {} out of bounds (rows = {})",
                    last,
                    rows
                );
            }
        }
        Gf2Matrix { rows, cols }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn column(&self, j: usize) -> &Gf2Col {
        &self.cols[j]
    }

    pub fn columns(&self) -> &[Gf2Col] {
        &self.cols
    }

    pub fn set_entry(&mut self, row: usize, col: usize) {
        assert!(row < self.rows);
        self.cols[col] = xor_cols(&self.cols[col], &[row]);
    }

    pub fn get_entry(&self, row: usize, col: usize) -> bool {
        self.cols[col].binary_search(&row).is_ok()
    }

    /// Flips one entry; used by negative-control tests.
    pub fn flip_entry(&mut self, row: usize, col: usize) {
        self.set_entry(row, col);
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_empty())
    }

    /// Matrix-vector product: XOR of the columns selected by `x`.
    pub fn apply(&self, x: &[usize]) -> Gf2Col {
        let mut acc: Gf2Col = Vec::new();
        for &j in x {
            acc = xor_cols(&acc, &self.cols[j]);
        }
        acc
    }

    /// Matrix product `self · rhs`; requires `self.ncols() == rhs.rows()`.
    pub fn mul(&self, rhs: &Gf2Matrix) -> Gf2Matrix {
        assert_eq!(
            self.ncols(),
            rhs.rows,
            "dimension mismatch in GF(2) matrix product"
        );
        Gf2Matrix {
            rows: self.rows,
            cols: rhs.cols.iter().map(|c| self.apply(c)).collect(),
        }
    }

    /// Entrywise sum; requires equal shapes.
    pub fn add(&self, rhs: &Gf2Matrix) -> Gf2Matrix {
        assert_eq!(self.rows, rhs.rows);
        assert_eq!(self.ncols(), rhs.ncols());
        Gf2Matrix {
            rows: self.rows,
            cols: self
                .cols
                .iter()
                .zip(&rhs.cols)
                .map(|(a, b)| xor_cols(a, b))
                .collect(),
        }
    }

    /// Index of the first column where two matrices differ.
    pub fn first_differing_column(&self, rhs: &Gf2Matrix) -> Option<usize> {
        debug_assert_eq!(self.ncols(), rhs.ncols());
        (0..self.ncols()).find(|&j| self.cols[j] != rhs.cols[j])
    }

    /// Lowest nonzero row of a column (largest index), if any.
    pub fn low(&self, j: usize) -> Option<usize> {
        self.cols[j].last().copied()
    }
}

/// Result of left-to-right column reduction.
///
/// `reduced = input · basis_change` exactly; `basis_change` is unit
/// upper-triangular; no two nonzero columns of `reduced` share a lowest row.
#[derive(Clone, Debug)]
pub struct ReductionResult {
    pub reduced: Gf2Matrix,
    pub basis_change: Gf2Matrix,
    /// lowest nonzero row -> column index holding that pivot
    pub pivots: BTreeMap<usize, usize>,
}

impl ReductionResult {
    /// Rank of the reduced (hence the original) matrix.
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Solves `m · x = z` against this reduction of `m`, returning the
    /// canonical solution with free columns zero. `None` when `z` is outside
    /// the column space.
    pub fn solve(&self, z: &[usize]) -> Option<Gf2Col> {
        debug_assert!(z.windows(2).all(|w| w[0] < w[1]));
        let mut residual: Gf2Col = z.to_vec();
        let mut used: Vec<usize> = Vec::new();
        while let Some(&low) = residual.last() {
            let &j = self.pivots.get(&low)?;
            residual = xor_cols(&residual, self.reduced.column(j));
            used.push(j);
        }
        let mut x: Gf2Col = Vec::new();
        for j in used {
            x = xor_cols(&x, self.basis_change.column(j));
        }
        Some(x)
    }
}

/// Left-to-right column reduction with a recorded basis change.
///
/// Deterministic: columns are processed in order and eliminated only via the
/// stored pivot map, so identical inputs yield identical outputs.
pub fn col_reduce(m: &Gf2Matrix) -> ReductionResult {
    let mut reduced = m.clone();
    let mut basis_change = Gf2Matrix::identity(m.ncols());
    let mut pivots: BTreeMap<usize, usize> = BTreeMap::new();
    for j in 0..reduced.ncols() {
        while let Some(low) = reduced.low(j) {
            match pivots.get(&low) {
                Some(&j2) => {
                    let col = xor_cols(reduced.column(j), reduced.column(j2));
                    reduced.cols[j] = col;
                    let bc = xor_cols(basis_change.column(j), basis_change.column(j2));
                    basis_change.cols[j] = bc;
                }
                None => {
                    pivots.insert(low, j);
                    break;
                }
            }
        }
    }
    ReductionResult {
        reduced,
        basis_change,
        pivots,
    }
}

/// Solves `m · x = z` from scratch (canonical solution, free columns zero).
pub fn solve_in_image(m: &Gf2Matrix, z: &[usize]) -> Option<Gf2Col> {
    col_reduce(m).solve(z)
}

/// Rank over GF(2).
pub fn rank(m: &Gf2Matrix) -> usize {
    col_reduce(m).rank()
}

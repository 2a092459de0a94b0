//! Dimension-graded based GF(2) chain complexes with per-cell birth scales,
//! chain maps, and chain homotopies — the common substrate for the covered
//! space, the nerve subdivision, the intersection complexes, and the cellular
//! blow-up complex.

use std::collections::HashMap;
use std::sync::Arc;

use crate::cell::CellLabel;
use crate::gf2::{xor_cols, Gf2Col, Gf2Matrix};
use crate::scale::Scale;

/// Basis of one chain group: cells sorted by (birth, lexicographic label).
#[derive(Clone, Debug)]
struct DimBasis<C: CellLabel> {
    cells: Vec<C>,
    births: Vec<Scale>,
    index: HashMap<C, usize>,
}

impl<C: CellLabel> DimBasis<C> {
    fn empty() -> DimBasis<C> {
        DimBasis {
            cells: Vec::new(),
            births: Vec::new(),
            index: HashMap::new(),
        }
    }
}

/// A filtered based chain complex over GF(2).
///
/// Cells above `cap` are not materialized. The basis in each dimension is
/// sorted by (birth, label), so the complex at any scale is a per-dimension
/// prefix of the full basis and inclusion maps are prefix injections.
#[derive(Clone, Debug)]
pub struct FilteredComplex<C: CellLabel> {
    dims: Vec<DimBasis<C>>,
    /// boundaries[k]: C_k -> C_{k-1}; boundaries[0] has zero rows.
    boundaries: Vec<Gf2Matrix>,
    cap: usize,
}

impl<C: CellLabel> FilteredComplex<C> {
    /// Builds a complex from labeled cells with births. Faces referenced by a
    /// cell's boundary must be present among the cells (closure completeness
    /// is the caller's contract; builders in this crate guarantee it).
    pub fn build(cells: Vec<(C, Scale)>, cap: usize) -> FilteredComplex<C> {
        let mut dims: Vec<DimBasis<C>> = Vec::new();
        for (cell, birth) in cells {
            let d = cell.dim();
            if d > cap {
                continue;
            }
            while dims.len() <= d {
                dims.push(DimBasis::empty());
            }
            dims[d].cells.push(cell);
            dims[d].births.push(birth);
        }
        for basis in dims.iter_mut() {
            let mut order: Vec<usize> = (0..basis.cells.len()).collect();
            order.sort_by(|&a, &b| {
                basis.births[a]
                    .cmp(&basis.births[b])
                    .then_with(|| basis.cells[a].cmp(&basis.cells[b]))
            });
            basis.cells = order.iter().map(|&i| basis.cells[i].clone()).collect();
            basis.births = order.iter().map(|&i| basis.births[i]).collect();
            for (i, c) in basis.cells.iter().enumerate() {
                let prev = basis.index.insert(c.clone(), i);
                assert!(prev.is_none(), "duplicate cell in complex: {}", c);
            }
        }
        let mut boundaries = Vec::with_capacity(dims.len());
        for k in 0..dims.len() {
            let rows = if k == 0 { 0 } else { dims[k - 1].cells.len() };
            let mut cols = Vec::with_capacity(dims[k].cells.len());
            for cell in &dims[k].cells {
                let mut col: Gf2Col = Vec::new();
                for face in cell.boundary() {
                    let i = dims[k - 1]
                        .index
                        .get(&face)
                        .unwrap_or_else(|| panic!("missing face {} of {}", face, cell));
                    col = xor_cols(&col, &[*i]);
                }
                cols.push(col);
            }
            boundaries.push(Gf2Matrix::from_columns(rows, cols));
        }
        FilteredComplex {
            dims,
            boundaries,
            cap,
        }
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// Highest dimension with at least one cell.
    pub fn max_dim(&self) -> Option<usize> {
        (0..self.dims.len())
            .rev()
            .find(|&k| !self.dims[k].cells.is_empty())
    }

    /// Number of cells in dimension k (0 beyond the materialized range).
    pub fn n(&self, k: usize) -> usize {
        self.dims.get(k).map_or(0, |b| b.cells.len())
    }

    pub fn cells(&self, k: usize) -> &[C] {
        self.dims.get(k).map_or(&[], |b| &b.cells)
    }

    pub fn births(&self, k: usize) -> &[Scale] {
        self.dims.get(k).map_or(&[], |b| &b.births)
    }

    pub fn index_of(&self, k: usize, cell: &C) -> Option<usize> {
        self.dims.get(k).and_then(|b| b.index.get(cell)).copied()
    }

    /// Boundary matrix C_k -> C_{k-1}; a zero-shaped matrix outside the
    /// materialized range.
    pub fn boundary(&self, k: usize) -> Gf2Matrix {
        if k < self.boundaries.len() {
            self.boundaries[k].clone()
        } else {
            let rows = self.n(k.saturating_sub(1));
            Gf2Matrix::zero(if k == 0 { 0 } else { rows }, 0)
        }
    }

    /// Augmentation row (1 x n_0, all ones): the boundary onto the empty cell.
    pub fn augmentation_row(&self) -> Gf2Matrix {
        Gf2Matrix::from_columns(1, (0..self.n(0)).map(|_| vec![0]).collect())
    }

    /// Birth of the empty cell for reduced homology: the minimum birth.
    pub fn min_birth(&self) -> Option<Scale> {
        self.dims
            .iter()
            .flat_map(|b| b.births.iter().copied())
            .min()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.iter().all(|b| b.cells.is_empty())
    }

    /// Total cell count across dimensions.
    pub fn total_cells(&self) -> usize {
        self.dims.iter().map(|b| b.cells.len()).sum()
    }

    /// Euler characteristic of the materialized skeleton.
    pub fn euler_characteristic(&self) -> i64 {
        self.dims
            .iter()
            .enumerate()
            .map(|(k, b)| {
                let n = b.cells.len() as i64;
                if k % 2 == 0 {
                    n
                } else {
                    -n
                }
            })
            .sum()
    }

    /// Number of dim-k cells born at or before `alpha` (a basis prefix).
    pub fn prefix_len(&self, k: usize, alpha: Scale) -> usize {
        let births = self.births(k);
        births.partition_point(|&b| b <= alpha)
    }

    /// The subcomplex at scale `alpha`: per-dimension basis prefixes with
    /// truncated boundary matrices.
    pub fn restrict(&self, alpha: Scale) -> FilteredComplex<C> {
        let mut dims = Vec::with_capacity(self.dims.len());
        let mut boundaries = Vec::with_capacity(self.dims.len());
        for k in 0..self.dims.len() {
            let n = self.prefix_len(k, alpha);
            let cells = self.dims[k].cells[..n].to_vec();
            let births = self.dims[k].births[..n].to_vec();
            let index = cells
                .iter()
                .enumerate()
                .map(|(i, c)| (c.clone(), i))
                .collect();
            dims.push(DimBasis {
                cells,
                births,
                index,
            });
            let rows = if k == 0 { 0 } else { dims[k - 1].cells.len() };
            let cols: Vec<Gf2Col> = (0..n)
                .map(|j| self.boundaries[k].column(j).clone())
                .collect();
            debug_assert!(cols
                .iter()
                .all(|c| c.last().is_none_or(|&r| r < rows || k == 0)));
            boundaries.push(Gf2Matrix::from_columns(rows, cols));
        }
        while dims.last().is_some_and(|b| b.cells.is_empty()) {
            dims.pop();
            boundaries.pop();
        }
        FilteredComplex {
            dims,
            boundaries,
            cap: self.cap,
        }
    }

    /// Checks the chain-complex axioms: strictly ordered bases, d^2 = 0, and
    /// birth monotonicity along every incidence.
    pub fn validate(&self) -> Result<(), ComplexError> {
        for k in 1..self.dims.len() {
            let dk = &self.boundaries[k];
            for (j, col) in dk.columns().iter().enumerate() {
                let birth = self.dims[k].births[j];
                for &i in col {
                    if self.dims[k - 1].births[i] > birth {
                        return Err(ComplexError::BirthNotMonotone {
                            cell: self.dims[k].cells[j].to_string(),
                            face: self.dims[k - 1].cells[i].to_string(),
                        });
                    }
                }
            }
            if k >= 2 {
                let dd = self.boundaries[k - 1].mul(dk);
                if !dd.is_zero() {
                    return Err(ComplexError::BoundarySquareNonzero { dim: k });
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ComplexError {
    #[error("d^2 != 0 at dimension {dim}")]
    BoundarySquareNonzero { dim: usize },
    #[error("face {face} born after cell {cell}")]
    BirthNotMonotone { cell: String, face: String },
}

/// A dimension and basis position where a verification first failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub dim: usize,
    pub basis_index: usize,
    pub cell: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "dim {} basis element {}", self.dim, self.cell)
    }
}

/// A chain map between two complexes: one GF(2) matrix per dimension, rows
/// indexed by the target basis and columns by the source basis.
#[derive(Clone, Debug)]
pub struct ChainMap<S: CellLabel, T: CellLabel> {
    pub source: Arc<FilteredComplex<S>>,
    pub target: Arc<FilteredComplex<T>>,
    pub mats: Vec<Gf2Matrix>,
}

impl<S: CellLabel, T: CellLabel> ChainMap<S, T> {
    /// Builds a map from a per-cell image function, up to `top_dim`.
    pub fn from_fn(
        source: Arc<FilteredComplex<S>>,
        target: Arc<FilteredComplex<T>>,
        top_dim: usize,
        mut image: impl FnMut(usize, &S) -> Gf2Col,
    ) -> ChainMap<S, T> {
        let mut mats = Vec::new();
        for k in 0..=top_dim {
            let cols: Vec<Gf2Col> = source.cells(k).iter().map(|c| image(k, c)).collect();
            mats.push(Gf2Matrix::from_columns(target.n(k), cols));
        }
        ChainMap {
            source,
            target,
            mats,
        }
    }

    /// The zero matrix in any dimension not explicitly stored.
    pub fn mat(&self, k: usize) -> Gf2Matrix {
        self.mats
            .get(k)
            .cloned()
            .unwrap_or_else(|| Gf2Matrix::zero(self.target.n(k), self.source.n(k)))
    }

    pub fn top_dim(&self) -> usize {
        self.mats.len().saturating_sub(1)
    }

    /// Composition `g . f` (apply `f` first). Panics on basis-size mismatch.
    pub fn compose<U: CellLabel>(g: &ChainMap<T, U>, f: &ChainMap<S, T>) -> ChainMap<S, U> {
        let top = f.top_dim().min(g.top_dim());
        let mats = (0..=top).map(|k| g.mat(k).mul(&f.mat(k))).collect();
        ChainMap {
            source: f.source.clone(),
            target: g.target.clone(),
            mats,
        }
    }

    /// Checks the commuting squares f_k d_{k+1} = d_{k+1} f_{k+1} for every
    /// dimension held by the map, reporting the first violating source cell.
    pub fn verify(&self) -> Result<(), Violation> {
        for k1 in 1..=self.top_dim() {
            let lhs = self.mat(k1 - 1).mul(&self.source.boundary(k1));
            let rhs = self.target.boundary(k1).mul(&self.mat(k1));
            if let Some(j) = lhs.first_differing_column(&rhs) {
                return Err(Violation {
                    dim: k1,
                    basis_index: j,
                    cell: self.source.cells(k1)[j].to_string(),
                });
            }
        }
        Ok(())
    }

    /// Per-dimension matrix equality against another map (same endpoints).
    pub fn equals(&self, other: &ChainMap<S, T>) -> Result<(), Violation> {
        let top = self.top_dim().max(other.top_dim());
        for k in 0..=top {
            let a = self.mat(k);
            let b = other.mat(k);
            if let Some(j) = a.first_differing_column(&b) {
                return Err(Violation {
                    dim: k,
                    basis_index: j,
                    cell: self.source.cells(k)[j].to_string(),
                });
            }
        }
        Ok(())
    }
}

/// The prefix-injection chain map of an inclusion X^a into X^b (a <= b).
pub fn inclusion_map<C: CellLabel>(
    source: Arc<FilteredComplex<C>>,
    target: Arc<FilteredComplex<C>>,
    top_dim: usize,
) -> ChainMap<C, C> {
    for k in 0..=top_dim {
        debug_assert!(
            source.cells(k) == &target.cells(k)[..source.n(k).min(target.n(k))],
            "inclusion source is not a basis prefix of the target in dim {}",
            k
        );
    }
    let mut mats = Vec::new();
    for k in 0..=top_dim {
        let cols = (0..source.n(k)).map(|j| vec![j]).collect();
        mats.push(Gf2Matrix::from_columns(target.n(k), cols));
    }
    ChainMap {
        source,
        target,
        mats,
    }
}

/// A degree +1 map between two complexes: mats[k] sends the dim-k source
/// basis to (k+1)-chains of the target.
#[derive(Clone, Debug)]
pub struct ChainHomotopy<S: CellLabel, T: CellLabel> {
    pub source: Arc<FilteredComplex<S>>,
    pub target: Arc<FilteredComplex<T>>,
    pub mats: Vec<Gf2Matrix>,
}

impl<S: CellLabel, T: CellLabel> ChainHomotopy<S, T> {
    pub fn mat(&self, k: usize) -> Gf2Matrix {
        self.mats
            .get(k)
            .cloned()
            .unwrap_or_else(|| Gf2Matrix::zero(self.target.n(k + 1), self.source.n(k)))
    }

    pub fn top_dim(&self) -> usize {
        self.mats.len().saturating_sub(1)
    }

    /// Checks c d + d c = f + g for every dimension up to `top_dim`,
    /// reporting the first violating source cell.
    pub fn verify(&self, f: &ChainMap<S, T>, g: &ChainMap<S, T>) -> Result<(), Violation> {
        for k in 0..=self.top_dim() {
            // d_{k+1} c_k + c_{k-1} d_k  vs  f_k + g_k
            let mut lhs = self.target.boundary(k + 1).mul(&self.mat(k));
            if k >= 1 {
                lhs = lhs.add(&self.mat(k - 1).mul(&self.source.boundary(k)));
            }
            let rhs = f.mat(k).add(&g.mat(k));
            if let Some(j) = lhs.first_differing_column(&rhs) {
                return Err(Violation {
                    dim: k,
                    basis_index: j,
                    cell: self.source.cells(k)[j].to_string(),
                });
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cell::Simplex;

    fn s(v: &[u32]) -> Simplex {
        Simplex::new(v.to_vec())
    }

    fn triangle_complex() -> FilteredComplex<Simplex> {
        let z = Scale::ZERO;
        let cells = vec![
            (s(&[0]), z),
            (s(&[1]), z),
            (s(&[2]), z),
            (s(&[0, 1]), z),
            (s(&[0, 2]), z),
            (s(&[1, 2]), z),
            (s(&[0, 1, 2]), z),
        ];
        FilteredComplex::build(cells, 2)
    }

    #[test]
    fn boundary_of_triangle() {
        let c = triangle_complex();
        let d2 = c.boundary(2);
        assert_eq!(d2.ncols(), 1);
        // exactly the three edges
        assert_eq!(d2.column(0).len(), 3);
        assert!(c.boundary(1).mul(&d2).is_zero());
        c.validate().unwrap();
    }

    #[test]
    fn complexes_and_maps_are_shareable_across_threads() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<FilteredComplex<Simplex>>();
        assert_send_sync::<ChainMap<Simplex, Simplex>>();
        assert_send_sync::<ChainHomotopy<Simplex, Simplex>>();
        assert_send_sync::<crate::gf2::Gf2Matrix>();
    }

    #[test]
    fn four_cycle_boundary_has_rank_three() {
        let z = Scale::ZERO;
        let cells = vec![
            (s(&[0]), z),
            (s(&[1]), z),
            (s(&[2]), z),
            (s(&[3]), z),
            (s(&[0, 1]), z),
            (s(&[1, 2]), z),
            (s(&[2, 3]), z),
            (s(&[0, 3]), z),
        ];
        let c = FilteredComplex::build(cells, 1);
        let d1 = c.boundary(1);
        assert_eq!(d1.ncols(), 4);
        assert!(d1.columns().iter().all(|col| col.len() == 2));
        assert_eq!(crate::gf2::rank(&d1), 3);
    }

    #[test]
    fn restrict_takes_prefixes() {
        let cells = vec![
            (s(&[0]), Scale::new(0.0)),
            (s(&[1]), Scale::new(0.0)),
            (s(&[2]), Scale::new(1.0)),
            (s(&[0, 1]), Scale::new(0.0)),
            (s(&[1, 2]), Scale::new(2.0)),
        ];
        let c = FilteredComplex::build(cells, 2);
        let at0 = c.restrict(Scale::new(0.0));
        assert_eq!(at0.n(0), 2);
        assert_eq!(at0.n(1), 1);
        let at1 = c.restrict(Scale::new(1.0));
        assert_eq!(at1.n(0), 3);
        assert_eq!(at1.n(1), 1);
        assert_eq!(&c.cells(0)[..3], at1.cells(0));
        let full = c.restrict(Scale::INFINITY);
        assert_eq!(full.total_cells(), c.total_cells());
        let empty = c.restrict(Scale::new(-1.0));
        assert!(empty.is_empty());
    }

    #[test]
    fn identity_map_verifies() {
        let c = Arc::new(triangle_complex());
        let id = inclusion_map(c.clone(), c.clone(), 2);
        assert!(id.verify().is_ok());
    }

    #[test]
    fn corrupted_map_reports_first_bad_cell() {
        let c = Arc::new(triangle_complex());
        let mut f = inclusion_map(c.clone(), c.clone(), 2);
        // send edge [0 1] to zero without fixing anything else
        let j = c.index_of(1, &s(&[0, 1])).unwrap();
        let col = f.mats[1].column(j).clone();
        for &r in &col {
            f.mats[1].flip_entry(r, j);
        }
        let err = f.verify().unwrap_err();
        assert_eq!(err.dim, 1);
        assert_eq!(err.cell, "[0 1]");
    }

    #[test]
    fn zero_homotopy_between_equal_maps() {
        let c = Arc::new(triangle_complex());
        let id = inclusion_map(c.clone(), c.clone(), 2);
        let zero = ChainHomotopy {
            source: c.clone(),
            target: c.clone(),
            mats: (0..=2)
                .map(|k| Gf2Matrix::zero(c.n(k + 1), c.n(k)))
                .collect(),
        };
        assert!(zero.verify(&id, &id).is_ok());
    }

    #[test]
    fn zero_homotopy_fails_between_distinct_maps() {
        // two isolated vertices; f = identity, g = constant at vertex 0
        let z = Scale::ZERO;
        let c = Arc::new(FilteredComplex::build(vec![(s(&[0]), z), (s(&[1]), z)], 1));
        let f = inclusion_map(c.clone(), c.clone(), 0);
        let g = ChainMap::from_fn(c.clone(), c.clone(), 0, |_, _| vec![0]);
        let zero = ChainHomotopy {
            source: c.clone(),
            target: c.clone(),
            mats: vec![Gf2Matrix::zero(c.n(1), c.n(0))],
        };
        let err = zero.verify(&f, &g).unwrap_err();
        assert_eq!(err.dim, 0);
        assert_eq!(err.cell, "[1]");
    }
}

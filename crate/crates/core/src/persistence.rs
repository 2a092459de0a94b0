//! Persistence diagrams of filtered chain complexes, inclusion-induced
//! ranks, exact cover goodness, and matrices of maps induced on homology.
//!
//! Bars follow the half-open convention [birth, death): a class is alive at
//! alpha when birth <= alpha < death, so a cover is eps-good exactly when
//! eps is at least the longest reduced bar over all intersections.

use std::collections::BTreeMap;

use crate::cell::{CellLabel, IndexSet};
use crate::complex::{ChainMap, FilteredComplex};
use crate::cover::CoverFiltration;
use crate::gf2::{col_reduce, Gf2Col, Gf2Matrix, ReductionResult};
use crate::scale::Scale;

/// One bar of a persistence diagram; `death` is `Scale::INFINITY` for
/// essential classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Bar {
    pub dim: usize,
    pub birth: Scale,
    pub death: Scale,
}

impl Bar {
    pub fn length(&self) -> Scale {
        if self.death.is_infinite() {
            Scale::INFINITY
        } else {
            self.death - self.birth
        }
    }

    pub fn alive_at(&self, alpha: Scale) -> bool {
        self.birth <= alpha && alpha < self.death
    }
}

/// A multiset of bars, sorted by (dim, birth, death); zero-length bars are
/// omitted, which makes the multiset independent of basis tie-breaking.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PersistenceDiagram {
    pub bars: Vec<Bar>,
}

impl PersistenceDiagram {
    pub fn new(mut bars: Vec<Bar>) -> PersistenceDiagram {
        bars.retain(|b| b.death > b.birth);
        bars.sort();
        PersistenceDiagram { bars }
    }

    pub fn bars_in_dim(&self, k: usize) -> impl Iterator<Item = &Bar> {
        self.bars.iter().filter(move |b| b.dim == k)
    }

    pub fn alive_count(&self, k: usize, alpha: Scale) -> usize {
        self.bars_in_dim(k).filter(|b| b.alive_at(alpha)).count()
    }

    /// Translates every endpoint by delta (infinite deaths stay infinite).
    pub fn translate(&self, delta: Scale) -> PersistenceDiagram {
        PersistenceDiagram {
            bars: self
                .bars
                .iter()
                .map(|b| Bar {
                    dim: b.dim,
                    birth: b.birth + delta,
                    death: if b.death.is_infinite() {
                        Scale::INFINITY
                    } else {
                        b.death + delta
                    },
                })
                .collect(),
        }
    }

    /// The sub-diagram in one dimension.
    pub fn in_dim(&self, k: usize) -> PersistenceDiagram {
        PersistenceDiagram {
            bars: self.bars_in_dim(k).copied().collect(),
        }
    }

    pub fn max_bar_length(&self, up_to_dim: usize) -> Scale {
        self.bars
            .iter()
            .filter(|b| b.dim <= up_to_dim)
            .map(|b| b.length())
            .max()
            .unwrap_or(Scale::ZERO)
    }
}

/// A bar together with its positive cell and canonical cycle representative
/// (support over the dim-k basis of the analyzed complex).
#[derive(Clone, Debug)]
pub struct BarData {
    pub bar: Bar,
    pub positive_index: usize,
    pub representative: Gf2Col,
}

/// Reduction artifacts of one complex: per-dimension column reductions, the
/// diagram, and cycle representatives.
pub struct Analysis {
    pub reduced_homology: bool,
    reductions: Vec<ReductionResult>,
    pub bar_data: Vec<BarData>,
    pub diagram: PersistenceDiagram,
}

impl Analysis {
    pub fn reduction(&self, k: usize) -> Option<&ReductionResult> {
        self.reductions.get(k)
    }
}

/// Runs the birth-ordered column reduction of every boundary matrix and
/// extracts the pairing. With `reduced_homology` the boundary onto the empty
/// cell (born at the minimum scale) is included, which removes one essential
/// dim-0 class.
pub fn analyze<C: CellLabel>(c: &FilteredComplex<C>, reduced_homology: bool) -> Analysis {
    let dims = c.max_dim().map_or(0, |d| d + 1);
    let mut reductions: Vec<ReductionResult> = Vec::with_capacity(dims);
    for k in 0..dims {
        let mat = if k == 0 && reduced_homology {
            c.augmentation_row()
        } else {
            c.boundary(k)
        };
        reductions.push(col_reduce(&mat));
    }
    let mut bar_data: Vec<BarData> = Vec::new();
    for k in 0..dims {
        let red = &reductions[k];
        // kill pairs: pivot row r (a (k-1)-cell) dies at the k-cell j's birth
        if k >= 1 {
            for (&row, &col) in &red.pivots {
                let bar = Bar {
                    dim: k - 1,
                    birth: c.births(k - 1)[row],
                    death: c.births(k)[col],
                };
                if bar.death > bar.birth {
                    bar_data.push(BarData {
                        bar,
                        positive_index: row,
                        representative: reductions[k - 1].basis_change.column(row).clone(),
                    });
                }
            }
        }
        // essential classes: positive k-cells never used as a pivot row above
        let killed = reductions.get(k + 1);
        for j in 0..red.reduced.ncols() {
            if red.reduced.column(j).is_empty() && killed.is_none_or(|r| !r.pivots.contains_key(&j))
            {
                bar_data.push(BarData {
                    bar: Bar {
                        dim: k,
                        birth: c.births(k)[j],
                        death: Scale::INFINITY,
                    },
                    positive_index: j,
                    representative: red.basis_change.column(j).clone(),
                });
            }
        }
    }
    let diagram = PersistenceDiagram::new(bar_data.iter().map(|b| b.bar).collect());
    Analysis {
        reduced_homology,
        reductions,
        bar_data,
        diagram,
    }
}

/// The persistence diagram of a filtered complex.
pub fn persistence<C: CellLabel>(c: &FilteredComplex<C>, reduced: bool) -> PersistenceDiagram {
    analyze(c, reduced).diagram
}

/// Rank of the homology map induced by the inclusion X^alpha into X^beta,
/// read off the diagram: bars with birth <= alpha and death > beta.
pub fn induced_rank(d: &PersistenceDiagram, k: usize, alpha: Scale, beta: Scale) -> usize {
    assert!(alpha <= beta, "induced_rank needs alpha <= beta");
    d.bars_in_dim(k)
        .filter(|b| b.birth <= alpha && b.death > beta)
        .count()
}

/// Betti number by the rank formula, an independent route used to
/// cross-check diagram bookkeeping: dim C_k - rank d_k - rank d_{k+1}.
pub fn betti_via_ranks<C: CellLabel>(
    c: &FilteredComplex<C>,
    k: usize,
    reduced_homology: bool,
) -> usize {
    let dk = if k == 0 && reduced_homology {
        if c.n(0) == 0 {
            Gf2Matrix::zero(0, 0)
        } else {
            c.augmentation_row()
        }
    } else {
        c.boundary(k)
    };
    let dk1 = c.boundary(k + 1);
    c.n(k) - crate::gf2::rank(&dk) - crate::gf2::rank(&dk1)
}

/// One witness of the goodness value: a longest reduced bar.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub v: IndexSet,
    pub dim: usize,
    pub birth: Scale,
    pub death: Scale,
}

/// Exact goodness of a cover: the longest reduced bar over all
/// eventually-nonempty intersections in dimensions 0..=k_max.
#[derive(Clone, Debug)]
pub struct GoodnessReport {
    pub epsilon_star: Scale,
    pub witnesses: Vec<Witness>,
    pub per_v: BTreeMap<IndexSet, Scale>,
}

/// Computes the minimal eps for which the cover is eps-good in dimensions
/// 0..=k_max: infinite when some intersection carries an essential reduced
/// class; otherwise the maximum reduced bar length.
pub fn goodness(cover: &CoverFiltration, k_max: usize) -> GoodnessReport {
    let mut per_v = BTreeMap::new();
    let mut all_bars: Vec<(IndexSet, Bar)> = Vec::new();
    for (v, _) in cover.nerve_births(cover.len()) {
        let uv = cover.intersection_filtration(&v);
        let dgm = persistence(&uv.complex(k_max + 1), true);
        let mut v_max = Scale::ZERO;
        for bar in dgm.bars.iter().filter(|b| b.dim <= k_max) {
            v_max = v_max.max(bar.length());
            all_bars.push((v.clone(), *bar));
        }
        per_v.insert(v, v_max);
    }
    let epsilon_star = per_v.values().copied().max().unwrap_or(Scale::ZERO);
    let witnesses = if epsilon_star > Scale::ZERO {
        all_bars
            .into_iter()
            .filter(|(_, b)| b.length() == epsilon_star)
            .map(|(v, b)| Witness {
                v,
                dim: b.dim,
                birth: b.birth,
                death: b.death,
            })
            .collect()
    } else {
        Vec::new()
    };
    GoodnessReport {
        epsilon_star,
        witnesses,
        per_v,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EngineError {
    #[error("homology representative in dim {dim} is not a cycle (internal inconsistency)")]
    RepresentativeNotCycle { dim: usize },
    #[error(
        "image class in dim {dim} not expressible in the homology basis (internal inconsistency)"
    )]
    ClassNotExpressible { dim: usize },
}

/// Cycle representatives of the classes alive at the top of the analyzed
/// complex (its essential bars), in bar order.
pub fn homology_basis(analysis: &Analysis, k: usize) -> Vec<&BarData> {
    let mut reps: Vec<&BarData> = analysis
        .bar_data
        .iter()
        .filter(|b| b.bar.dim == k && b.bar.death.is_infinite())
        .collect();
    reps.sort_by_key(|b| (b.bar.birth, b.positive_index));
    reps
}

/// Matrix of H_k(f) between the canonical homology bases of f's endpoints
/// (each complex at its own defining scale). Columns express the image of
/// each source class in the target basis; boundaries are quotiented out by
/// solving against [cycle reps | d_{k+1}].
pub fn induced_on_homology<S: CellLabel, T: CellLabel>(
    f: &ChainMap<S, T>,
    k: usize,
    src: &Analysis,
    tgt: &Analysis,
) -> Result<Gf2Matrix, EngineError> {
    assert_eq!(
        src.reduced_homology, tgt.reduced_homology,
        "homology flavors of the two analyses must agree"
    );
    let src_basis = homology_basis(src, k);
    let tgt_basis = homology_basis(tgt, k);
    let n_k = f.target.n(k);

    let is_cycle = |complex_boundary: &Gf2Matrix, aug: Option<&Gf2Matrix>, rep: &Gf2Col| -> bool {
        if !complex_boundary.apply(rep).is_empty() {
            return false;
        }
        match aug {
            Some(a) => a.apply(rep).is_empty(),
            None => true,
        }
    };
    let src_aug = (k == 0 && src.reduced_homology).then(|| f.source.augmentation_row());
    let tgt_aug = (k == 0 && tgt.reduced_homology).then(|| f.target.augmentation_row());
    for b in &src_basis {
        if !is_cycle(&f.source.boundary(k), src_aug.as_ref(), &b.representative) {
            return Err(EngineError::RepresentativeNotCycle { dim: k });
        }
    }
    for b in &tgt_basis {
        if !is_cycle(&f.target.boundary(k), tgt_aug.as_ref(), &b.representative) {
            return Err(EngineError::RepresentativeNotCycle { dim: k });
        }
    }

    // columns of [Z | B]: target cycle reps, then the (k+1)-boundary columns
    let h = tgt_basis.len();
    let dk1 = f.target.boundary(k + 1);
    let mut cols: Vec<Gf2Col> = tgt_basis.iter().map(|b| b.representative.clone()).collect();
    cols.extend(dk1.columns().iter().cloned());
    let quotient = col_reduce(&Gf2Matrix::from_columns(n_k, cols));

    let mut out_cols = Vec::with_capacity(src_basis.len());
    for b in &src_basis {
        let image = f.mat(k).apply(&b.representative);
        let x = quotient
            .solve(&image)
            .ok_or(EngineError::ClassNotExpressible { dim: k })?;
        out_cols.push(x.into_iter().take_while(|&i| i < h).collect::<Vec<_>>());
    }
    Ok(Gf2Matrix::from_columns(h, out_cols))
}

//! Cover filtrations and the complexes derived from them: intersection
//! filtrations, the nerve filtration, the flag complex (barycentric
//! subdivision of the nerve), and the cellular blow-up complex with its two
//! projections.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::cell::{BlowupCell, CellLabel, FlagSimplex, IndexSet, Simplex};
use crate::complex::{ChainMap, FilteredComplex};
use crate::filtration::Filtration;
use crate::gf2::Gf2Col;
use crate::scale::Scale;

/// A finite collection of simplicial filtrations over a shared vertex
/// universe, viewed as a cover of their union.
#[derive(Clone, Debug)]
pub struct CoverFiltration {
    names: Vec<String>,
    elements: Vec<Filtration>,
    vertex_count: u32,
}

/// Nerve and flag enumeration walk the 2^(n+1)-1 index sets, so covers are
/// capped at a size where that stays instant.
pub const MAX_COVER_ELEMENTS: usize = 16;

impl CoverFiltration {
    pub fn new(
        names: Vec<String>,
        elements: Vec<Filtration>,
        vertex_count: u32,
    ) -> CoverFiltration {
        assert!(!elements.is_empty(), "a cover needs at least one element");
        assert!(
            elements.len() <= MAX_COVER_ELEMENTS,
            "a cover may have at most {} elements",
            MAX_COVER_ELEMENTS
        );
        assert_eq!(names.len(), elements.len());
        for f in &elements {
            for s in f.births().keys() {
                assert!(
                    s.vertices().iter().all(|&v| v < vertex_count),
                    "vertex id out of universe in {}",
                    s
                );
            }
        }
        CoverFiltration {
            names,
            elements,
            vertex_count,
        }
    }

    /// Number of elements minus one (elements are indexed 0..=n).
    pub fn n(&self) -> u32 {
        (self.elements.len() - 1) as u32
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn vertex_count(&self) -> u32 {
        self.vertex_count
    }

    pub fn element(&self, i: u32) -> &Filtration {
        &self.elements[i as usize]
    }

    pub fn elements(&self) -> &[Filtration] {
        &self.elements
    }

    /// The union filtration W.
    pub fn space_filtration(&self) -> Filtration {
        Filtration::union_of(self.elements.iter())
    }

    /// The intersection filtration U_v: simplices present in every element of
    /// v, born at the maximum of their element births.
    pub fn intersection_filtration(&self, v: &IndexSet) -> Filtration {
        Filtration::intersection_of(v.indices().iter().map(|&i| self.element(i)))
    }

    /// Sorted distinct scales at which some element changes. All derived
    /// complexes (space, nerve, flag, blow-up, intersections) are constant
    /// between consecutive values.
    pub fn critical_scales(&self) -> Vec<Scale> {
        let mut v: Vec<Scale> = self
            .elements
            .iter()
            .flat_map(|f| f.births().values().copied())
            .collect();
        v.sort();
        v.dedup();
        v
    }

    /// All nonempty index sets whose intersection is eventually nonempty,
    /// in ascending bitmask order, with their nerve births.
    pub fn nerve_births(&self, max_card: usize) -> BTreeMap<IndexSet, Scale> {
        let mut out = BTreeMap::new();
        let count = self.elements.len();
        for mask in 1u64..(1u64 << count) {
            if (mask.count_ones() as usize) > max_card {
                continue;
            }
            let v = IndexSet::new((0..count as u32).filter(|i| mask & (1 << i) != 0).collect());
            let inter = self.intersection_filtration(&v);
            if let Some(b) = inter.min_birth() {
                out.insert(v, b);
            }
        }
        out
    }

    /// The nerve filtration: one abstract vertex per cover element, a simplex
    /// per eventually-nonempty intersection, born when the intersection first
    /// becomes nonempty.
    pub fn nerve_filtration(&self, max_card: usize) -> Filtration {
        let births: BTreeMap<Simplex, Scale> = self
            .nerve_births(max_card)
            .into_iter()
            .map(|(v, b)| (v.as_simplex(), b))
            .collect();
        // births are monotone under inclusion of index sets, so this map is
        // closure-monotone as long as all faces are present, which holds:
        // a subset of an eventually-nonempty set is eventually nonempty.
        Filtration::from_closed(births)
    }

    /// The flag complex of the nerve poset (its barycentric subdivision) as a
    /// full filtered complex; flags ordered largest set first.
    pub fn flag_complex(&self, cap: usize) -> FilteredComplex<FlagSimplex> {
        let births = self.nerve_births(self.elements.len());
        let sets: Vec<(&IndexSet, Scale)> = births.iter().map(|(v, &b)| (v, b)).collect();
        let mut cells: Vec<(FlagSimplex, Scale)> = Vec::new();
        // depth-first enumeration of strictly decreasing containment chains
        fn extend(
            sets: &[(&IndexSet, Scale)],
            chain: &mut Vec<IndexSet>,
            birth: Scale,
            cap: usize,
            cells: &mut Vec<(FlagSimplex, Scale)>,
        ) {
            cells.push((FlagSimplex::new(chain.clone()), birth));
            if chain.len() == cap + 1 {
                return;
            }
            let tail = chain.last().unwrap().clone();
            for (v, b) in sets {
                if tail.strictly_contains(v) {
                    chain.push((*v).clone());
                    extend(sets, chain, birth.max(*b), cap, cells);
                    chain.pop();
                }
            }
        }
        for (v, b) in &sets {
            let mut chain = vec![(*v).clone()];
            extend(&sets, &mut chain, *b, cap, &mut cells);
        }
        FilteredComplex::build(cells, cap)
    }

    /// The flag complex at one scale.
    pub fn flag_complex_at(&self, alpha: Scale, cap: usize) -> FilteredComplex<FlagSimplex> {
        self.flag_complex(cap).restrict(alpha)
    }

    /// The blow-up complex as a full filtered complex: cells tau (x) sigma
    /// over flags sigma, with tau a simplex of the flag's deepest
    /// intersection; birth is the max of the tau birth in U_{v_0} and the
    /// nerve births along the chain.
    pub fn blowup_complex(&self, cap: usize) -> FilteredComplex<BlowupCell> {
        let births = self.nerve_births(self.elements.len());
        let flags = self.flag_complex(cap);
        let mut inter_cache: BTreeMap<IndexSet, Filtration> = BTreeMap::new();
        let mut cells: Vec<(BlowupCell, Scale)> = Vec::new();
        for k in 0..=cap.min(flags.max_dim().unwrap_or(0)) {
            for (flag, &flag_birth) in flags.cells(k).iter().zip(flags.births(k)) {
                debug_assert_eq!(
                    flag_birth,
                    flag.sets().iter().map(|v| births[v]).max().unwrap()
                );
                let head = flag.head().clone();
                let inter = inter_cache
                    .entry(head.clone())
                    .or_insert_with(|| self.intersection_filtration(&head));
                for (tau, &tau_birth) in inter.births() {
                    if tau.dim() + k > cap {
                        continue;
                    }
                    cells.push((
                        BlowupCell::new(tau.clone(), flag.clone()),
                        tau_birth.max(flag_birth),
                    ));
                }
            }
        }
        FilteredComplex::build(cells, cap)
    }

    pub fn blowup_complex_at(&self, alpha: Scale, cap: usize) -> FilteredComplex<BlowupCell> {
        self.blowup_complex(cap).restrict(alpha)
    }
}

/// The projection-induced chain map b: C(B^a) -> C(W^a), sending tau (x)
/// sigma to tau when sigma is a flag vertex and to zero otherwise.
pub fn projection_b(
    blowup: Arc<FilteredComplex<BlowupCell>>,
    space: Arc<FilteredComplex<Simplex>>,
    top_dim: usize,
) -> ChainMap<BlowupCell, Simplex> {
    let sp = space.clone();
    ChainMap::from_fn(blowup, space, top_dim, move |k, cell| -> Gf2Col {
        if cell.flag.dim() == 0 {
            let i = sp
                .index_of(k, &cell.tau)
                .unwrap_or_else(|| panic!("blow-up factor {} missing from space", cell.tau));
            vec![i]
        } else {
            Vec::new()
        }
    })
}

/// The projection-induced chain map p: C(B^a) -> C(N^a), sending tau (x)
/// sigma to sigma when tau is a vertex and to zero otherwise.
pub fn projection_p(
    blowup: Arc<FilteredComplex<BlowupCell>>,
    flag: Arc<FilteredComplex<FlagSimplex>>,
    top_dim: usize,
) -> ChainMap<BlowupCell, FlagSimplex> {
    let fl = flag.clone();
    ChainMap::from_fn(blowup, flag, top_dim, move |k, cell| -> Gf2Col {
        if cell.tau.dim() == 0 {
            let i = fl
                .index_of(k, &cell.flag)
                .unwrap_or_else(|| panic!("blow-up flag {} missing from subdivision", cell.flag));
            vec![i]
        } else {
            Vec::new()
        }
    })
}

/// Matrix of an arbitrary simplicial vertex-id-preserving inclusion
/// (cells of `source` looked up in `target` by label).
pub fn simplicial_inclusion(
    source: Arc<FilteredComplex<Simplex>>,
    target: Arc<FilteredComplex<Simplex>>,
    top_dim: usize,
) -> ChainMap<Simplex, Simplex> {
    let tgt = target.clone();
    ChainMap::from_fn(source, target, top_dim, move |k, cell| {
        vec![tgt
            .index_of(k, cell)
            .unwrap_or_else(|| panic!("cell {} missing from inclusion target", cell))]
    })
}

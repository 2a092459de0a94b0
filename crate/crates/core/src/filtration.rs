//! Simplicial filtrations: closure-monotone birth maps over a finite simplex
//! set, with sublevel snapshots as chain complexes.

use std::collections::BTreeMap;

use crate::cell::{CellLabel, Simplex};
use crate::complex::FilteredComplex;
use crate::scale::Scale;

/// A finite simplicial filtration: simplex -> birth scale, closure-monotone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Filtration {
    births: BTreeMap<Simplex, Scale>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FiltrationError {
    #[error("face {face} declared at {face_birth} but coface {coface} enters at {coface_birth}")]
    InconsistentBirths {
        face: String,
        face_birth: Scale,
        coface: String,
        coface_birth: Scale,
    },
    #[error("negative birth scale {birth} for {simplex}")]
    NegativeBirth { simplex: String, birth: Scale },
}

impl Filtration {
    /// The empty filtration.
    pub fn empty() -> Filtration {
        Filtration {
            births: BTreeMap::new(),
        }
    }

    /// Takes the downward closure of the given simplices, with absent faces
    /// born at the minimum over their cofaces. An explicitly listed simplex
    /// whose declared birth exceeds one of its cofaces' is an error.
    pub fn close_and_validate(
        items: impl IntoIterator<Item = (Simplex, Scale)>,
    ) -> Result<Filtration, FiltrationError> {
        let mut explicit: BTreeMap<Simplex, Scale> = BTreeMap::new();
        for (s, b) in items {
            if b < Scale::ZERO || !b.is_finite() {
                return Err(FiltrationError::NegativeBirth {
                    simplex: s.to_string(),
                    birth: b,
                });
            }
            explicit
                .entry(s)
                .and_modify(|cur| *cur = (*cur).min(b))
                .or_insert(b);
        }
        let mut births = explicit.clone();
        for (s, &b) in &explicit {
            for face in s.proper_faces() {
                births
                    .entry(face)
                    .and_modify(|cur| *cur = (*cur).min(b))
                    .or_insert(b);
            }
        }
        for (s, &b) in &explicit {
            let closed = births[s];
            if closed < b {
                // find a coface that forced the earlier birth
                let coface = births
                    .iter()
                    .find(|(c, &cb)| {
                        cb < b && c.proper_faces().contains(s) && explicit.contains_key(*c)
                    })
                    .map(|(c, &cb)| (c.to_string(), cb))
                    .unwrap_or_else(|| ("<unknown>".to_string(), closed));
                return Err(FiltrationError::InconsistentBirths {
                    face: s.to_string(),
                    face_birth: b,
                    coface: coface.0,
                    coface_birth: coface.1,
                });
            }
        }
        Ok(Filtration { births })
    }

    /// Builds directly from a complete closure-monotone map (panics if not).
    pub fn from_closed(births: BTreeMap<Simplex, Scale>) -> Filtration {
        let f = Filtration { births };
        debug_assert!(f.is_closure_monotone());
        f
    }

    pub fn is_closure_monotone(&self) -> bool {
        self.births.iter().all(|(s, &b)| {
            s.boundary()
                .iter()
                .all(|face| self.births.get(face).is_some_and(|&fb| fb <= b))
        })
    }

    pub fn births(&self) -> &BTreeMap<Simplex, Scale> {
        &self.births
    }

    pub fn birth(&self, s: &Simplex) -> Option<Scale> {
        self.births.get(s).copied()
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.births.contains_key(s)
    }

    pub fn is_empty(&self) -> bool {
        self.births.is_empty()
    }

    pub fn len(&self) -> usize {
        self.births.len()
    }

    pub fn max_dim(&self) -> Option<usize> {
        self.births.keys().map(|s| s.dim()).max()
    }

    /// First scale at which the filtration is nonempty.
    pub fn min_birth(&self) -> Option<Scale> {
        self.births.values().copied().min()
    }

    /// Sorted distinct birth scales.
    pub fn critical_scales(&self) -> Vec<Scale> {
        let mut v: Vec<Scale> = self.births.values().copied().collect();
        v.sort();
        v.dedup();
        v
    }

    /// The full chain complex (all scales), cells of dimension <= cap.
    pub fn complex(&self, cap: usize) -> FilteredComplex<Simplex> {
        FilteredComplex::build(
            self.births.iter().map(|(s, &b)| (s.clone(), b)).collect(),
            cap,
        )
    }

    /// The sublevel complex at scale alpha.
    pub fn complex_at(&self, alpha: Scale, cap: usize) -> FilteredComplex<Simplex> {
        self.complex(cap).restrict(alpha)
    }

    /// Union of filtrations: birth is the minimum over the inputs.
    pub fn union_of<'a>(parts: impl IntoIterator<Item = &'a Filtration>) -> Filtration {
        let mut births: BTreeMap<Simplex, Scale> = BTreeMap::new();
        for part in parts {
            for (s, &b) in &part.births {
                births
                    .entry(s.clone())
                    .and_modify(|cur| *cur = (*cur).min(b))
                    .or_insert(b);
            }
        }
        Filtration { births }
    }

    /// Intersection of filtrations: simplices present in every input, born at
    /// the maximum of their births.
    pub fn intersection_of<'a>(parts: impl IntoIterator<Item = &'a Filtration>) -> Filtration {
        let parts: Vec<&Filtration> = parts.into_iter().collect();
        let Some(first) = parts.first() else {
            return Filtration::empty();
        };
        let mut births = BTreeMap::new();
        'outer: for (s, &b0) in &first.births {
            let mut b = b0;
            for other in &parts[1..] {
                match other.births.get(s) {
                    Some(&ob) => b = b.max(ob),
                    None => continue 'outer,
                }
            }
            births.insert(s.clone(), b);
        }
        Filtration { births }
    }

    /// Shifts every birth by delta (used by the shifted-nerve construction).
    pub fn translate(&self, delta: Scale) -> Filtration {
        Filtration {
            births: self
                .births
                .iter()
                .map(|(s, &b)| (s.clone(), b + delta))
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[u32]) -> Simplex {
        Simplex::new(v.to_vec())
    }

    #[test]
    fn closure_of_a_triangle_fills_all_faces() {
        let f = Filtration::close_and_validate(vec![(s(&[0, 1, 2]), Scale::ZERO)]).unwrap();
        assert_eq!(f.len(), 7);
        assert!(f.births().values().all(|&b| b == Scale::ZERO));
    }

    #[test]
    fn closure_adds_missing_vertex_at_edge_birth() {
        let f = Filtration::close_and_validate(vec![
            (s(&[0, 1]), Scale::new(1.0)),
            (s(&[0]), Scale::ZERO),
        ])
        .unwrap();
        assert_eq!(f.birth(&s(&[1])), Some(Scale::new(1.0)));
        assert_eq!(f.birth(&s(&[0])), Some(Scale::ZERO));
    }

    #[test]
    fn explicit_late_face_is_rejected() {
        let err = Filtration::close_and_validate(vec![
            (s(&[0]), Scale::new(2.0)),
            (s(&[0, 1]), Scale::new(1.0)),
        ])
        .unwrap_err();
        assert!(matches!(err, FiltrationError::InconsistentBirths { .. }));
    }

    #[test]
    fn complex_at_respects_sublevel_semantics() {
        let f = Filtration::close_and_validate(vec![
            (s(&[0, 1]), Scale::ZERO),
            (s(&[1, 2]), Scale::new(1.0)),
        ])
        .unwrap();
        let c0 = f.complex_at(Scale::ZERO, 2);
        assert_eq!((c0.n(0), c0.n(1)), (2, 1));
        let c1 = f.complex_at(Scale::new(1.0), 2);
        assert_eq!((c1.n(0), c1.n(1)), (3, 2));
        let full = f.complex_at(Scale::INFINITY, 2);
        assert_eq!(full.total_cells(), 5);
        assert!(Filtration::empty()
            .complex_at(Scale::INFINITY, 2)
            .is_empty());
    }

    #[test]
    fn union_and_intersection_births() {
        let a = Filtration::close_and_validate(vec![(s(&[0, 1]), Scale::new(1.0))]).unwrap();
        let b = Filtration::close_and_validate(vec![
            (s(&[0]), Scale::ZERO),
            (s(&[1]), Scale::new(3.0)),
        ])
        .unwrap();
        let u = Filtration::union_of([&a, &b]);
        assert_eq!(u.birth(&s(&[0])), Some(Scale::ZERO));
        assert_eq!(u.birth(&s(&[1])), Some(Scale::new(1.0)));
        assert_eq!(u.birth(&s(&[0, 1])), Some(Scale::new(1.0)));
        let i = Filtration::intersection_of([&a, &b]);
        assert_eq!(i.birth(&s(&[0])), Some(Scale::new(1.0)));
        assert_eq!(i.birth(&s(&[1])), Some(Scale::new(3.0)));
        assert_eq!(i.birth(&s(&[0, 1])), None);
        assert!(i.is_closure_monotone());
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_filtration() -> impl Strategy<Value = Filtration> {
            proptest::collection::vec(
                (proptest::collection::btree_set(0u32..6, 1..4), 0u32..5),
                1..10,
            )
            .prop_filter_map("explicit births must be closure-consistent", |items| {
                Filtration::close_and_validate(
                    items.into_iter().map(|(vs, b)| {
                        (Simplex::new(vs.into_iter().collect()), Scale::new(b as f64))
                    }),
                )
                .ok()
            })
        }

        proptest! {
            #[test]
            fn closure_is_monotone(f in arb_filtration()) {
                prop_assert!(f.is_closure_monotone());
            }

            #[test]
            fn sublevel_bases_are_nested(f in arb_filtration(), a in 0u32..5, b in 0u32..5) {
                let (lo, hi) = (a.min(b), a.max(b));
                let ca = f.complex_at(Scale::new(lo as f64), 3);
                let cb = f.complex_at(Scale::new(hi as f64), 3);
                for k in 0..=3 {
                    prop_assert!(ca.n(k) <= cb.n(k));
                    prop_assert_eq!(ca.cells(k), &cb.cells(k)[..ca.n(k)]);
                }
            }
        }
    }
}

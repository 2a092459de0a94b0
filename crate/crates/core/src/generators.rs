//! Deterministic fixture generators: the E1 worked example, the tight-bound
//! family over simplex facets, and seeded random path covers (guaranteed-good
//! and perturbed flavors).

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

use crate::cell::Simplex;
use crate::cover::CoverFiltration;
use crate::filtration::Filtration;
use crate::scale::Scale;

/// The worked desk fixture used across the test suite: a filled square
/// covered by two elements whose intersection is briefly disconnected.
///
/// Vertices {0,1,2,3}; U0 grows over scales 0,1,2; U1 is constant.
pub fn gen_e1() -> CoverFiltration {
    let s = |v: &[u32]| Simplex::new(v.to_vec());
    let u0 = Filtration::close_and_validate(vec![
        (s(&[0]), Scale::ZERO),
        (s(&[1]), Scale::ZERO),
        (s(&[2]), Scale::ZERO),
        (s(&[0, 1]), Scale::ZERO),
        (s(&[1, 2]), Scale::ZERO),
        (s(&[3]), Scale::new(1.0)),
        (s(&[2, 3]), Scale::new(1.0)),
        (s(&[0, 3]), Scale::new(1.0)),
        (s(&[0, 2]), Scale::new(2.0)),
        (s(&[0, 1, 2]), Scale::new(2.0)),
        (s(&[0, 2, 3]), Scale::new(2.0)),
    ])
    .expect("E1 element 0 is closure-consistent");
    let u1 = Filtration::close_and_validate(vec![
        (s(&[0]), Scale::ZERO),
        (s(&[2]), Scale::ZERO),
        (s(&[3]), Scale::ZERO),
        (s(&[2, 3]), Scale::ZERO),
        (s(&[0, 3]), Scale::ZERO),
    ])
    .expect("E1 element 1 is closure-consistent");
    CoverFiltration::new(vec!["U0".into(), "U1".into()], vec![u0, u1], 4)
}

/// The tight-bound family: the n+1 facets of the standard n-simplex, each
/// growing by one further facet per integer scale from n+1 on, and the full
/// simplex arriving at 2n+2.
///
/// Element i contains a face f of the n-simplex at scale 0 when i is not a
/// vertex of f, at scale n+1+min{k : k not in f} when i is in f, and the top
/// face arrives at 2n+2.
pub fn gen_tight(n: u32) -> CoverFiltration {
    assert!(
        (1..=4).contains(&n),
        "tight family supported for 1 <= n <= 4"
    );
    let verts = n + 1;
    let full_mask: u32 = (1 << verts) - 1;
    let mut elements = Vec::new();
    for i in 0..verts {
        let mut births: BTreeMap<Simplex, Scale> = BTreeMap::new();
        for mask in 1u32..=full_mask {
            let face = Simplex::new((0..verts).filter(|v| mask & (1 << v) != 0).collect());
            let birth = if mask & (1 << i) == 0 {
                Scale::ZERO
            } else if mask == full_mask {
                Scale::new((2 * n + 2) as f64)
            } else {
                let first_missing = (0..verts).find(|v| mask & (1 << v) == 0).unwrap();
                Scale::new((n + 1 + first_missing) as f64)
            };
            births.insert(face, birth);
        }
        elements.push(Filtration::from_closed(births));
    }
    CoverFiltration::new(
        (0..verts).map(|i| format!("U{}", i)).collect(),
        elements,
        verts,
    )
}

/// Which random-cover flavor to generate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flavor {
    /// Subpath covers of a path graph: every nonempty intersection at every
    /// scale is a contiguous subpath, hence contractible, so the cover is
    /// 0-good by construction.
    Good,
    /// The good flavor with seeded birth delays injected, producing a finite
    /// positive goodness bounded by the delay budget.
    Perturbed,
}

#[derive(Clone, Debug)]
pub struct RandomCoverParams {
    pub vertices: u32,
    pub elements: u32,
    pub scales: u32,
    /// Probability that growth pauses at a vertex step (higher = slower).
    pub fill: f64,
    pub flavor: Flavor,
    pub delay_budget: u32,
    pub delay_count: u32,
}

impl RandomCoverParams {
    pub fn good() -> RandomCoverParams {
        RandomCoverParams {
            vertices: 10,
            elements: 3,
            scales: 4,
            fill: 0.5,
            flavor: Flavor::Good,
            delay_budget: 0,
            delay_count: 0,
        }
    }

    pub fn perturbed() -> RandomCoverParams {
        RandomCoverParams {
            vertices: 10,
            elements: 3,
            scales: 4,
            fill: 0.5,
            flavor: Flavor::Perturbed,
            delay_budget: 2,
            delay_count: 3,
        }
    }

    fn validate(&self) {
        assert!(
            self.vertices >= 2 && self.vertices <= 64,
            "vertices in 2..=64"
        );
        assert!(
            self.elements >= 1 && self.elements <= 6,
            "elements in 1..=6"
        );
        assert!(self.scales >= 1 && self.scales <= 32, "scales in 1..=32");
        assert!((0.0..=1.0).contains(&self.fill), "fill in [0,1]");
        if self.flavor == Flavor::Perturbed {
            assert!(
                self.delay_budget >= 1,
                "perturbed flavor needs a delay budget"
            );
        }
    }
}

/// Deterministic seeded cover over a path graph. Element i covers a window
/// of the path; cells enter at nondecreasing scales moving outward from a
/// window center, so every element (and intersection) is a contiguous
/// subpath at every scale.
pub fn gen_random(seed: u64, params: &RandomCoverParams) -> CoverFiltration {
    params.validate();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = params.vertices as usize;
    let e = params.elements as usize;
    let last = m - 1;

    let mut vertex_births: Vec<Vec<Option<u32>>> = Vec::with_capacity(e);
    for i in 0..e {
        // overlapping windows along the path
        let lo = i * last / e;
        let hi = (((i + 1) * last) / e + 1).min(last);
        let center = rng.gen_range(lo..=hi);
        let mut births = vec![None; m];
        let b = rng.gen_range(0..=params.scales.saturating_sub(1));
        births[center] = Some(b);
        let mut cur = b;
        for v in (lo..center).rev() {
            if !rng.gen_bool(params.fill) {
                cur = (cur + 1).min(params.scales);
            }
            births[v] = Some(cur);
        }
        cur = b;
        for slot in births.iter_mut().take(hi + 1).skip(center + 1) {
            if !rng.gen_bool(params.fill) {
                cur = (cur + 1).min(params.scales);
            }
            *slot = Some(cur);
        }
        vertex_births.push(births);
    }

    // edge births: max of the endpoints, per element
    let mut edge_births: Vec<Vec<Option<u32>>> = vertex_births
        .iter()
        .map(|vb| {
            (0..last)
                .map(|v| match (vb[v], vb[v + 1]) {
                    (Some(a), Some(b)) => Some(a.max(b)),
                    _ => None,
                })
                .collect()
        })
        .collect();

    if params.flavor == Flavor::Perturbed {
        // the budget caps the total effective delay of any single cell, so
        // the perturbed filtration stays within delay_budget of the good one
        // and every reduced bar is at most that long
        let orig_vertices = vertex_births.clone();
        let orig_edges = edge_births.clone();
        for _ in 0..params.delay_count {
            let i = rng.gen_range(0..e);
            if rng.gen_bool(0.5) {
                // delay a vertex and push its incident edges after it
                let present: Vec<usize> =
                    (0..m).filter(|&v| vertex_births[i][v].is_some()).collect();
                let v = present[rng.gen_range(0..present.len())];
                let room = params.delay_budget
                    - (vertex_births[i][v].unwrap() - orig_vertices[i][v].unwrap());
                if room == 0 {
                    continue;
                }
                let nb = vertex_births[i][v].unwrap() + rng.gen_range(1..=room);
                vertex_births[i][v] = Some(nb);
                if v > 0 {
                    if let Some(eb) = edge_births[i][v - 1] {
                        edge_births[i][v - 1] = Some(eb.max(nb));
                    }
                }
                if v < last {
                    if let Some(eb) = edge_births[i][v] {
                        edge_births[i][v] = Some(eb.max(nb));
                    }
                }
            } else {
                let present: Vec<usize> =
                    (0..last).filter(|&v| edge_births[i][v].is_some()).collect();
                if present.is_empty() {
                    continue;
                }
                let v = present[rng.gen_range(0..present.len())];
                let room =
                    params.delay_budget - (edge_births[i][v].unwrap() - orig_edges[i][v].unwrap());
                if room == 0 {
                    continue;
                }
                edge_births[i][v] = Some(edge_births[i][v].unwrap() + rng.gen_range(1..=room));
            }
        }
    }

    let mut elements = Vec::with_capacity(e);
    for i in 0..e {
        let mut births: BTreeMap<Simplex, Scale> = BTreeMap::new();
        for (v, birth) in vertex_births[i].iter().enumerate() {
            if let Some(b) = birth {
                births.insert(Simplex::vertex(v as u32), Scale::new(*b as f64));
            }
        }
        for (v, birth) in edge_births[i].iter().enumerate() {
            if let Some(b) = birth {
                births.insert(
                    Simplex::new(vec![v as u32, v as u32 + 1]),
                    Scale::new(*b as f64),
                );
            }
        }
        elements.push(Filtration::from_closed(births));
    }
    CoverFiltration::new(
        (0..e).map(|i| format!("U{}", i)).collect(),
        elements,
        m as u32,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[u32]) -> Simplex {
        Simplex::new(v.to_vec())
    }

    #[test]
    fn tight_n1_matches_the_piecewise_formula() {
        let c = gen_tight(1);
        let u0 = c.element(0);
        assert_eq!(u0.birth(&s(&[1])), Some(Scale::ZERO));
        assert_eq!(u0.birth(&s(&[0])), Some(Scale::new(3.0)));
        assert_eq!(u0.birth(&s(&[0, 1])), Some(Scale::new(4.0)));
        let u1 = c.element(1);
        assert_eq!(u1.birth(&s(&[0])), Some(Scale::ZERO));
        assert_eq!(u1.birth(&s(&[1])), Some(Scale::new(2.0)));
        assert_eq!(u1.birth(&s(&[0, 1])), Some(Scale::new(4.0)));
    }

    #[test]
    fn tight_space_is_full_simplex_at_final_scale() {
        for n in 1..=3 {
            let c = gen_tight(n);
            let w = c.space_filtration();
            let full = w.complex_at(Scale::new((2 * n + 2) as f64), n as usize + 1);
            assert_eq!(full.total_cells(), (1 << (n + 1)) - 1);
            // and the top nerve simplex appears at n+1
            let nerve = c.nerve_filtration(n as usize + 2);
            let top = Simplex::new((0..=n).collect());
            assert_eq!(nerve.birth(&top), Some(Scale::new((n + 1) as f64)));
        }
    }

    #[test]
    fn tight_filtrations_are_closure_monotone() {
        for n in 1..=4 {
            let c = gen_tight(n);
            for el in c.elements() {
                assert!(el.is_closure_monotone());
            }
        }
    }

    #[test]
    fn random_covers_are_deterministic_per_seed() {
        for flavor in [RandomCoverParams::good(), RandomCoverParams::perturbed()] {
            let a = gen_random(7, &flavor);
            let b = gen_random(7, &flavor);
            for (x, y) in a.elements().iter().zip(b.elements()) {
                assert_eq!(x, y);
            }
            let c = gen_random(8, &flavor);
            assert!(
                a.elements().iter().zip(c.elements()).any(|(x, y)| x != y),
                "different seeds should differ"
            );
        }
    }

    #[test]
    fn perturbed_goodness_is_bounded_by_the_delay_budget() {
        let params = RandomCoverParams::perturbed();
        for seed in 0..25 {
            let c = gen_random(seed, &params);
            let eps = crate::persistence::goodness(&c, 2).epsilon_star;
            assert!(
                eps <= Scale::new(params.delay_budget as f64),
                "seed {}: goodness {} exceeds the delay budget {}",
                seed,
                eps,
                params.delay_budget
            );
        }
    }

    #[test]
    fn good_flavor_elements_are_contiguous_at_every_scale() {
        for seed in 0..20 {
            let c = gen_random(seed, &RandomCoverParams::good());
            for el in c.elements() {
                assert!(el.is_closure_monotone());
                for alpha in el.critical_scales() {
                    let snap = el.complex_at(alpha, 2);
                    let verts: Vec<u32> = snap.cells(0).iter().map(|s| s.vertices()[0]).collect();
                    if verts.is_empty() {
                        continue;
                    }
                    let lo = *verts.iter().min().unwrap();
                    let hi = *verts.iter().max().unwrap();
                    assert_eq!(verts.len() as u32, hi - lo + 1, "vertex gap in window");
                    // every interior edge present: contiguous subpath
                    assert_eq!(snap.n(1) as u32, hi - lo, "missing edge in subpath");
                }
            }
        }
    }
}

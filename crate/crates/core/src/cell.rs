//! Cell labels: simplices, cover index sets, flag simplices (containment
//! chains), and blow-up product cells.

use std::fmt;

/// A basis cell of a chain complex. `Ord` supplies the lexicographic
/// tie-break inside the canonical (birth, dim, lex) basis order.
pub trait CellLabel: Clone + Ord + std::hash::Hash + fmt::Debug + fmt::Display {
    fn dim(&self) -> usize;
    /// GF(2) boundary as a list of distinct cells one dimension down.
    fn boundary(&self) -> Vec<Self>;
}

/// An abstract simplex: strictly increasing vertex ids.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Simplex {
    vertices: Vec<u32>,
}

/// Closure enumeration is exponential in the vertex count, so simplices are
/// capped well below the bitmask width.
pub const MAX_SIMPLEX_VERTICES: usize = 24;

impl Simplex {
    /// Builds from vertex ids; sorts and rejects duplicates.
    pub fn new(mut vertices: Vec<u32>) -> Simplex {
        assert!(
            !vertices.is_empty(),
            "simplex must have at least one vertex"
        );
        assert!(
            vertices.len() <= MAX_SIMPLEX_VERTICES,
            "simplex exceeds {} vertices",
            MAX_SIMPLEX_VERTICES
        );
        vertices.sort_unstable();
        assert!(
            vertices.windows(2).all(|w| w[0] < w[1]),
            "simplex has duplicate vertices: {:?}",
            vertices
        );
        Simplex { vertices }
    }

    pub fn vertex(v: u32) -> Simplex {
        Simplex { vertices: vec![v] }
    }

    pub fn vertices(&self) -> &[u32] {
        &self.vertices
    }

    /// All proper faces of every dimension (excludes the simplex itself).
    pub fn proper_faces(&self) -> Vec<Simplex> {
        let n = self.vertices.len();
        let mut out = Vec::new();
        for mask in 1..(1u32 << n) - 1 {
            let verts: Vec<u32> = (0..n)
                .filter(|&i| mask & (1 << i) != 0)
                .map(|i| self.vertices[i])
                .collect();
            out.push(Simplex { vertices: verts });
        }
        out
    }

    /// Alexander-Whitney splitting: term i pairs the prefix through vertex i
    /// with the suffix from vertex i.
    pub fn aw_terms(&self) -> Vec<(Simplex, Simplex)> {
        (0..self.vertices.len())
            .map(|i| {
                (
                    Simplex {
                        vertices: self.vertices[..=i].to_vec(),
                    },
                    Simplex {
                        vertices: self.vertices[i..].to_vec(),
                    },
                )
            })
            .collect()
    }
}

impl CellLabel for Simplex {
    fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    fn boundary(&self) -> Vec<Simplex> {
        if self.vertices.len() == 1 {
            return Vec::new();
        }
        (0..self.vertices.len())
            .map(|i| {
                let mut v = self.vertices.clone();
                v.remove(i);
                Simplex { vertices: v }
            })
            .collect()
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", v)?;
        }
        write!(f, "]")
    }
}

/// A nonempty sorted set of cover element indices (a nerve vertex).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct IndexSet {
    indices: Vec<u32>,
}

impl IndexSet {
    pub fn new(mut indices: Vec<u32>) -> IndexSet {
        assert!(!indices.is_empty(), "index set must be nonempty");
        indices.sort_unstable();
        indices.dedup();
        IndexSet { indices }
    }

    pub fn singleton(i: u32) -> IndexSet {
        IndexSet { indices: vec![i] }
    }

    pub fn indices(&self) -> &[u32] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, i: u32) -> bool {
        self.indices.binary_search(&i).is_ok()
    }

    /// True when `self` strictly contains `other`.
    pub fn strictly_contains(&self, other: &IndexSet) -> bool {
        self.indices.len() > other.indices.len() && other.indices.iter().all(|i| self.contains(*i))
    }

    /// The nerve simplex with one vertex per cover index.
    pub fn as_simplex(&self) -> Simplex {
        Simplex::new(self.indices.clone())
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.indices.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", v)?;
        }
        write!(f, "}}")
    }
}

/// A simplex of the nerve's barycentric subdivision: a strictly decreasing
/// containment chain of index sets, largest first.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct FlagSimplex {
    chain: Vec<IndexSet>,
}

impl FlagSimplex {
    pub fn new(chain: Vec<IndexSet>) -> FlagSimplex {
        assert!(!chain.is_empty(), "flag simplex must be nonempty");
        assert!(
            chain.windows(2).all(|w| w[0].strictly_contains(&w[1])),
            "flag chain must strictly decrease by inclusion: {:?}",
            chain
        );
        FlagSimplex { chain }
    }

    pub fn vertex(v: IndexSet) -> FlagSimplex {
        FlagSimplex { chain: vec![v] }
    }

    pub fn sets(&self) -> &[IndexSet] {
        &self.chain
    }

    /// The deepest intersection the product cell factor lives in.
    pub fn head(&self) -> &IndexSet {
        &self.chain[0]
    }

    pub fn last(&self) -> &IndexSet {
        self.chain.last().unwrap()
    }

    /// Drops the leading (largest) set; `None` for a flag vertex.
    pub fn drop_head(&self) -> Option<FlagSimplex> {
        if self.chain.len() == 1 {
            None
        } else {
            Some(FlagSimplex {
                chain: self.chain[1..].to_vec(),
            })
        }
    }

    /// Alexander-Whitney splitting over the chain entries.
    pub fn aw_terms(&self) -> Vec<(FlagSimplex, FlagSimplex)> {
        (0..self.chain.len())
            .map(|i| {
                (
                    FlagSimplex {
                        chain: self.chain[..=i].to_vec(),
                    },
                    FlagSimplex {
                        chain: self.chain[i..].to_vec(),
                    },
                )
            })
            .collect()
    }
}

impl CellLabel for FlagSimplex {
    fn dim(&self) -> usize {
        self.chain.len() - 1
    }

    fn boundary(&self) -> Vec<FlagSimplex> {
        if self.chain.len() == 1 {
            return Vec::new();
        }
        (0..self.chain.len())
            .map(|i| {
                let mut c = self.chain.clone();
                c.remove(i);
                FlagSimplex { chain: c }
            })
            .collect()
    }
}

impl fmt::Display for FlagSimplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.chain.iter().enumerate() {
            if i > 0 {
                write!(f, ">")?;
            }
            write!(f, "{}", v)?;
        }
        write!(f, ")")
    }
}

/// A product cell tau (x) sigma of the blow-up complex: a simplex of the
/// deepest intersection times a flag simplex.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct BlowupCell {
    pub tau: Simplex,
    pub flag: FlagSimplex,
}

impl BlowupCell {
    pub fn new(tau: Simplex, flag: FlagSimplex) -> BlowupCell {
        BlowupCell { tau, flag }
    }
}

impl CellLabel for BlowupCell {
    fn dim(&self) -> usize {
        self.tau.dim() + self.flag.dim()
    }

    /// Product boundary: d(tau (x) sigma) = d(tau) (x) sigma + tau (x) d(sigma).
    fn boundary(&self) -> Vec<BlowupCell> {
        let mut out = Vec::new();
        for face in self.tau.boundary() {
            out.push(BlowupCell {
                tau: face,
                flag: self.flag.clone(),
            });
        }
        for face in self.flag.boundary() {
            out.push(BlowupCell {
                tau: self.tau.clone(),
                flag: face,
            });
        }
        out
    }
}

impl fmt::Display for BlowupCell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(x){}", self.tau, self.flag)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[u32]) -> Simplex {
        Simplex::new(v.to_vec())
    }

    #[test]
    fn simplex_boundary_is_facet_list() {
        assert!(s(&[0]).boundary().is_empty());
        assert_eq!(s(&[0, 1]).boundary(), vec![s(&[1]), s(&[0])]);
        assert_eq!(
            s(&[0, 1, 2]).boundary(),
            vec![s(&[1, 2]), s(&[0, 2]), s(&[0, 1])]
        );
    }

    #[test]
    fn aw_terms_pair_prefixes_with_suffixes() {
        assert_eq!(s(&[5]).aw_terms(), vec![(s(&[5]), s(&[5]))]);
        assert_eq!(
            s(&[0, 1]).aw_terms(),
            vec![(s(&[0]), s(&[0, 1])), (s(&[0, 1]), s(&[1]))]
        );
        assert_eq!(
            s(&[0, 1, 2]).aw_terms(),
            vec![
                (s(&[0]), s(&[0, 1, 2])),
                (s(&[0, 1]), s(&[1, 2])),
                (s(&[0, 1, 2]), s(&[2])),
            ]
        );
    }

    #[test]
    fn flag_chain_must_strictly_decrease() {
        let big = IndexSet::new(vec![0, 1]);
        let small = IndexSet::new(vec![0]);
        let f = FlagSimplex::new(vec![big.clone(), small.clone()]);
        assert_eq!(f.dim(), 1);
        assert_eq!(
            f.boundary(),
            vec![FlagSimplex::vertex(small), FlagSimplex::vertex(big)]
        );
    }

    #[test]
    #[should_panic]
    fn flag_chain_rejects_non_nested() {
        FlagSimplex::new(vec![IndexSet::new(vec![0]), IndexSet::new(vec![1])]);
    }

    /// Formal GF(2) chain in a tensor-square basis, for checking that the
    /// Alexander-Whitney splitting commutes with boundaries.
    fn tensor_boundary(
        chain: &[(Simplex, Simplex)],
    ) -> std::collections::BTreeMap<(Simplex, Simplex), bool> {
        let mut acc: std::collections::BTreeMap<(Simplex, Simplex), bool> =
            std::collections::BTreeMap::new();
        let mut toggle = |t: (Simplex, Simplex)| {
            let e = acc.entry(t).or_insert(false);
            *e = !*e;
        };
        for (a, b) in chain {
            for fa in a.boundary() {
                toggle((fa, b.clone()));
            }
            for fb in b.boundary() {
                toggle((a.clone(), fb));
            }
        }
        acc.retain(|_, v| *v);
        acc
    }

    #[test]
    fn alexander_whitney_is_a_chain_map_up_to_dim_3() {
        // d(AW(s)) = AW(d(s)) on every face of the 3-simplex
        let top = s(&[0, 1, 2, 3]);
        let mut all = top.proper_faces();
        all.push(top);
        for sigma in all {
            let lhs = tensor_boundary(&sigma.aw_terms());
            let mut rhs: std::collections::BTreeMap<(Simplex, Simplex), bool> =
                std::collections::BTreeMap::new();
            for face in sigma.boundary() {
                for t in face.aw_terms() {
                    let e = rhs.entry(t).or_insert(false);
                    *e = !*e;
                }
            }
            rhs.retain(|_, v| *v);
            assert_eq!(lhs, rhs, "AW fails to commute with boundary on {}", sigma);
        }
    }

    #[test]
    fn product_boundary_cases() {
        let v = BlowupCell::new(s(&[3]), FlagSimplex::vertex(IndexSet::singleton(0)));
        assert!(v.boundary().is_empty());

        let flag_v = FlagSimplex::vertex(IndexSet::singleton(0));
        let e = BlowupCell::new(s(&[1, 2]), flag_v.clone());
        let b = e.boundary();
        assert_eq!(b.len(), 2);
        assert!(b.iter().all(|c| c.flag == flag_v && c.tau.dim() == 0));

        let flag_e = FlagSimplex::new(vec![IndexSet::new(vec![0, 1]), IndexSet::singleton(0)]);
        let ee = BlowupCell::new(s(&[1, 2]), flag_e);
        let b = ee.boundary();
        assert_eq!(b.len(), 4);
        assert!(b.iter().all(|c| c.dim() == 1));
    }
}

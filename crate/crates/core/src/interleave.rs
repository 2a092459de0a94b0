//! Constructive chain-level interleaving between the blow-up complex and the
//! nerve subdivision: basepoints, local chain homotopies built by inductive
//! boundary solving, their staircase compositions, the nerve-to-space chain
//! map, Alexander-Whitney lifts into the blow-up, and the machine
//! verification of the five identities that make the interleaving correct.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use crate::cell::{BlowupCell, CellLabel, FlagSimplex, IndexSet, Simplex};
use crate::complex::{inclusion_map, ChainHomotopy, ChainMap, FilteredComplex, Violation};
use crate::cover::{projection_b, projection_p, CoverFiltration};
use crate::gf2::{col_reduce, Gf2Col, Gf2Matrix};
use crate::persistence::{analyze, induced_on_homology, Analysis};
use crate::scale::Scale;

/// Parameters of the interleaving: homology dimension cap K, goodness
/// parameter eps, and the verification grid.
#[derive(Clone, Debug)]
pub struct InterleavingConfig {
    pub k_max: usize,
    pub epsilon: Scale,
    /// Scales to verify at; when empty the grid defaults to all critical
    /// scales together with their t- and 2t-translates.
    pub scales: Vec<Scale>,
}

impl InterleavingConfig {
    pub fn new(k_max: usize, epsilon: Scale) -> InterleavingConfig {
        assert!(epsilon >= Scale::ZERO && epsilon.is_finite());
        InterleavingConfig {
            k_max,
            epsilon,
            scales: Vec::new(),
        }
    }

    /// The interleaving shift t = (K+1) eps.
    pub fn shift(&self) -> Scale {
        self.epsilon.times(self.k_max + 1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InterleaveError {
    #[error("cover is not eps-good at v={v} alpha={alpha} dim={dim}: no boundary solves the homotopy step")]
    NotEpsGood {
        v: IndexSet,
        alpha: Scale,
        dim: usize,
    },
    #[error("intersection U_{v} is empty at every scale")]
    EmptyForever { v: IndexSet },
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

/// Chosen basepoints x_v with their earliest scales.
#[derive(Clone, Debug, Default)]
pub struct BasepointTable {
    map: BTreeMap<IndexSet, (u32, Scale)>,
}

impl BasepointTable {
    pub fn get(&self, v: &IndexSet) -> Option<(u32, Scale)> {
        self.map.get(v).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&IndexSet, &(u32, Scale))> {
        self.map.iter()
    }
}

/// The lexicographically smallest vertex of U_v at the first scale where the
/// intersection is nonempty.
pub fn choose_basepoint(
    cover: &CoverFiltration,
    v: &IndexSet,
) -> Result<(u32, Scale), InterleaveError> {
    let uv = cover.intersection_filtration(v);
    let alpha_first = uv
        .min_birth()
        .ok_or(InterleaveError::EmptyForever { v: v.clone() })?;
    let x = uv
        .births()
        .iter()
        .filter(|(s, &b)| s.dim() == 0 && b <= alpha_first)
        .map(|(s, _)| s.vertices()[0])
        .min()
        .expect("a nonempty complex contains a vertex at its minimum scale");
    Ok((x, alpha_first))
}

/// A chain homotopy from the inclusion U_v^a -> U_v^{a+eps} to the constant
/// chain map at the basepoint, one matrix per dimension 0..=K.
pub struct LocalHomotopy {
    pub v: IndexSet,
    pub basepoint: u32,
    pub source: Arc<FilteredComplex<Simplex>>,
    pub target: Arc<FilteredComplex<Simplex>>,
    pub mats: Vec<Gf2Matrix>,
}

impl LocalHomotopy {
    /// Applies the degree +1 map to a chain given by simplex labels (which
    /// must all lie in the source complex).
    pub fn apply_labels(&self, k: usize, chain: &BTreeSet<Simplex>) -> BTreeSet<Simplex> {
        let mut acc: Gf2Col = Vec::new();
        for s in chain {
            let j = self
                .source
                .index_of(k, s)
                .unwrap_or_else(|| panic!("chain label {} missing from U_{}", s, self.v));
            acc = crate::gf2::xor_cols(&acc, self.mats[k].column(j));
        }
        acc.into_iter()
            .map(|i| self.target.cells(k + 1)[i].clone())
            .collect()
    }

    pub fn as_chain_homotopy(&self) -> ChainHomotopy<Simplex, Simplex> {
        ChainHomotopy {
            source: self.source.clone(),
            target: self.target.clone(),
            mats: self.mats.clone(),
        }
    }

    /// The inclusion and constant chain maps this homotopy connects.
    pub fn endpoints(&self) -> (ChainMap<Simplex, Simplex>, ChainMap<Simplex, Simplex>) {
        let top = self.mats.len().saturating_sub(1);
        let inclusion = inclusion_map(self.source.clone(), self.target.clone(), top);
        let tgt = self.target.clone();
        let x = self.basepoint;
        let constant = ChainMap::from_fn(
            self.source.clone(),
            self.target.clone(),
            top,
            move |k, _cell| {
                if k == 0 {
                    vec![tgt
                        .index_of(0, &Simplex::vertex(x))
                        .expect("basepoint missing from target complex")]
                } else {
                    Vec::new()
                }
            },
        );
        (inclusion, constant)
    }
}

/// Outcome of one identity check at one scale.
#[derive(Clone, Debug)]
pub struct CheckResult {
    pub name: &'static str,
    pub pass: bool,
    pub detail: Option<String>,
}

impl CheckResult {
    fn ok(name: &'static str) -> CheckResult {
        CheckResult {
            name,
            pass: true,
            detail: None,
        }
    }

    fn fail(name: &'static str, violation: &Violation) -> CheckResult {
        CheckResult {
            name,
            pass: false,
            detail: Some(violation.to_string()),
        }
    }
}

/// All identity checks at one grid scale.
#[derive(Clone, Debug)]
pub struct ScaleReport {
    pub alpha: Scale,
    pub checks: Vec<CheckResult>,
}

impl ScaleReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// The full verification report over the grid.
#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub k_max: usize,
    pub epsilon: Scale,
    pub shift: Scale,
    pub scales: Vec<ScaleReport>,
}

impl VerificationReport {
    pub fn all_pass(&self) -> bool {
        self.scales.iter().all(|s| s.all_pass())
    }

    pub fn failures(&self) -> Vec<(Scale, &CheckResult)> {
        self.scales
            .iter()
            .flat_map(|s| {
                s.checks
                    .iter()
                    .filter(|c| !c.pass)
                    .map(move |c| (s.alpha, c))
            })
            .collect()
    }
}

/// Builder and verifier for the interleaving of one cover at one (K, eps).
///
/// Complexes are built once in full and thresholded per critical interval;
/// local homotopies are cached per (v, source interval, target interval).
pub struct Interleaver {
    cover: CoverFiltration,
    pub cfg: InterleavingConfig,
    cap: usize,
    criticals: Vec<Scale>,
    basepoints: BasepointTable,
    space_total: Arc<FilteredComplex<Simplex>>,
    flag_total: Arc<FilteredComplex<FlagSimplex>>,
    blowup_total: Arc<FilteredComplex<BlowupCell>>,
    inter_totals: BTreeMap<IndexSet, Arc<FilteredComplex<Simplex>>>,
    space_snaps: HashMap<usize, Arc<FilteredComplex<Simplex>>>,
    flag_snaps: HashMap<usize, Arc<FilteredComplex<FlagSimplex>>>,
    blowup_snaps: HashMap<usize, Arc<FilteredComplex<BlowupCell>>>,
    inter_snaps: HashMap<(IndexSet, usize), Arc<FilteredComplex<Simplex>>>,
    homotopies: HashMap<(IndexSet, usize, usize), Arc<LocalHomotopy>>,
    flag_analyses: HashMap<usize, Arc<Analysis>>,
    blowup_analyses: HashMap<usize, Arc<Analysis>>,
}

impl Interleaver {
    pub fn new(cover: CoverFiltration, cfg: InterleavingConfig) -> Interleaver {
        let cap = cfg.k_max + 1;
        let criticals = cover.critical_scales();
        let mut basepoints = BasepointTable::default();
        for (v, _) in cover.nerve_births(cover.len()) {
            let bp = choose_basepoint(&cover, &v)
                .expect("nerve_births only lists eventually-nonempty sets");
            basepoints.map.insert(v, bp);
        }
        let space_total = Arc::new(cover.space_filtration().complex(cap));
        let flag_total = Arc::new(cover.flag_complex(cap));
        let blowup_total = Arc::new(cover.blowup_complex(cap));
        let inter_totals = cover
            .nerve_births(cover.len())
            .into_keys()
            .map(|v| {
                let c = Arc::new(cover.intersection_filtration(&v).complex(cap));
                (v, c)
            })
            .collect();
        Interleaver {
            cover,
            cfg,
            cap,
            criticals,
            basepoints,
            space_total,
            flag_total,
            blowup_total,
            inter_totals,
            space_snaps: HashMap::new(),
            flag_snaps: HashMap::new(),
            blowup_snaps: HashMap::new(),
            inter_snaps: HashMap::new(),
            homotopies: HashMap::new(),
            flag_analyses: HashMap::new(),
            blowup_analyses: HashMap::new(),
        }
    }

    pub fn cover(&self) -> &CoverFiltration {
        &self.cover
    }

    pub fn basepoints(&self) -> &BasepointTable {
        &self.basepoints
    }

    /// Complexes are constant on the half-open intervals between critical
    /// scales, so snapshots are cached per interval index.
    fn interval(&self, alpha: Scale) -> usize {
        self.criticals.partition_point(|&s| s <= alpha)
    }

    pub fn space_at(&mut self, alpha: Scale) -> Arc<FilteredComplex<Simplex>> {
        let key = self.interval(alpha);
        if let Some(c) = self.space_snaps.get(&key) {
            return c.clone();
        }
        let c = Arc::new(self.space_total.restrict(alpha));
        self.space_snaps.insert(key, c.clone());
        c
    }

    pub fn flag_at(&mut self, alpha: Scale) -> Arc<FilteredComplex<FlagSimplex>> {
        let key = self.interval(alpha);
        if let Some(c) = self.flag_snaps.get(&key) {
            return c.clone();
        }
        let c = Arc::new(self.flag_total.restrict(alpha));
        self.flag_snaps.insert(key, c.clone());
        c
    }

    pub fn blowup_at(&mut self, alpha: Scale) -> Arc<FilteredComplex<BlowupCell>> {
        let key = self.interval(alpha);
        if let Some(c) = self.blowup_snaps.get(&key) {
            return c.clone();
        }
        let c = Arc::new(self.blowup_total.restrict(alpha));
        self.blowup_snaps.insert(key, c.clone());
        c
    }

    pub fn intersection_at(&mut self, v: &IndexSet, alpha: Scale) -> Arc<FilteredComplex<Simplex>> {
        let key = (v.clone(), self.interval(alpha));
        if let Some(c) = self.inter_snaps.get(&key) {
            return c.clone();
        }
        let total = self
            .inter_totals
            .get(v)
            .unwrap_or_else(|| panic!("no intersection filtration for {}", v));
        let c = Arc::new(total.restrict(alpha));
        self.inter_snaps.insert(key, c.clone());
        c
    }

    fn flag_analysis_at(&mut self, alpha: Scale) -> Arc<Analysis> {
        let key = self.interval(alpha);
        if let Some(a) = self.flag_analyses.get(&key) {
            return a.clone();
        }
        let a = Arc::new(analyze(&*self.flag_at(alpha), false));
        self.flag_analyses.insert(key, a.clone());
        a
    }

    fn blowup_analysis_at(&mut self, alpha: Scale) -> Arc<Analysis> {
        let key = self.interval(alpha);
        if let Some(a) = self.blowup_analyses.get(&key) {
            return a.clone();
        }
        let a = Arc::new(analyze(&*self.blowup_at(alpha), false));
        self.blowup_analyses.insert(key, a.clone());
        a
    }

    /// The constant chain map at x_v from U_v^a to U_v^{a+eps}.
    pub fn constant_map(&mut self, v: &IndexSet, alpha: Scale) -> ChainMap<Simplex, Simplex> {
        let (x, _) = self
            .basepoints
            .get(v)
            .unwrap_or_else(|| panic!("no basepoint for {}", v));
        let source = self.intersection_at(v, alpha);
        let target = self.intersection_at(v, alpha + self.cfg.epsilon);
        let tgt = target.clone();
        ChainMap::from_fn(source, target, self.cfg.k_max + 1, move |k, _cell| {
            if k == 0 {
                vec![tgt
                    .index_of(0, &Simplex::vertex(x))
                    .expect("basepoint must be present by alpha + eps")]
            } else {
                Vec::new()
            }
        })
    }

    /// The local chain homotopy c_v^a from the inclusion to the constant
    /// map, built by induction on dimension: each value is the canonical
    /// solution of d(b) = c(d sigma) + sigma + x_v(sigma) in U_v^{a+eps}.
    pub fn local_homotopy(
        &mut self,
        v: &IndexSet,
        alpha: Scale,
    ) -> Result<Arc<LocalHomotopy>, InterleaveError> {
        let key = (
            v.clone(),
            self.interval(alpha),
            self.interval(alpha + self.cfg.epsilon),
        );
        if let Some(h) = self.homotopies.get(&key) {
            return Ok(h.clone());
        }
        let source = self.intersection_at(v, alpha);
        let target = self.intersection_at(v, alpha + self.cfg.epsilon);
        let (x, _) = self
            .basepoints
            .get(v)
            .unwrap_or_else(|| panic!("no basepoint for {}", v));
        let x_index = if source.n(0) > 0 {
            Some(
                target
                    .index_of(0, &Simplex::vertex(x))
                    .expect("basepoint must be present by alpha + eps"),
            )
        } else {
            None
        };
        let mut mats: Vec<Gf2Matrix> = Vec::with_capacity(self.cap);
        for k in 0..=self.cfg.k_max {
            let solver = col_reduce(&target.boundary(k + 1));
            let src_boundary = source.boundary(k);
            let mut cols: Vec<Gf2Col> = Vec::with_capacity(source.n(k));
            for j in 0..source.n(k) {
                // source bases are prefixes of target bases, so index j names
                // the same cell in both complexes
                let mut z: Gf2Col = vec![j];
                if k == 0 {
                    z = crate::gf2::xor_cols(&z, &[x_index.unwrap()]);
                } else {
                    z = crate::gf2::xor_cols(&z, &mats[k - 1].apply(src_boundary.column(j)));
                }
                match solver.solve(&z) {
                    Some(b) => cols.push(b),
                    None => {
                        return Err(InterleaveError::NotEpsGood {
                            v: v.clone(),
                            alpha,
                            dim: k,
                        })
                    }
                }
            }
            mats.push(Gf2Matrix::from_columns(target.n(k + 1), cols));
        }
        let h = Arc::new(LocalHomotopy {
            v: v.clone(),
            basepoint: x,
            source,
            target,
            mats,
        });
        self.homotopies.insert(key, h.clone());
        Ok(h)
    }

    /// The staircase composition: applies c_{v_j}^{a + j eps} for each set of
    /// the flag in order, starting from the labeled chain {tau}.
    fn staircase(
        &mut self,
        alpha: Scale,
        tau: &Simplex,
        flag: &FlagSimplex,
    ) -> Result<BTreeSet<Simplex>, InterleaveError> {
        let mut chain: BTreeSet<Simplex> = std::iter::once(tau.clone()).collect();
        for (j, v) in flag.sets().iter().enumerate() {
            let h = self.local_homotopy(v, alpha + self.cfg.epsilon.times(j))?;
            chain = h.apply_labels(tau.dim() + j, &chain);
        }
        Ok(chain)
    }

    /// Converts a labeled simplicial chain to indices in the space at a+t.
    fn space_indices(
        &mut self,
        alpha_t: Scale,
        k: usize,
        chain: &BTreeSet<Simplex>,
    ) -> Result<Gf2Col, InterleaveError> {
        let space = self.space_at(alpha_t);
        let mut col: Gf2Col = Vec::new();
        for s in chain {
            let i = space.index_of(k, s).ok_or_else(|| {
                InterleaveError::Internal(format!(
                    "chain cell {} escapes the space at {}",
                    s, alpha_t
                ))
            })?;
            col = crate::gf2::xor_cols(&col, &[i]);
        }
        Ok(col)
    }

    /// The global homotopy c^a as a degree +1 map from the blow-up at a to
    /// the space at a+t, defined on dimensions 0..=K.
    pub fn global_homotopy(
        &mut self,
        alpha: Scale,
    ) -> Result<ChainHomotopy<BlowupCell, Simplex>, InterleaveError> {
        let t = self.cfg.shift();
        let blowup = self.blowup_at(alpha);
        let space = self.space_at(alpha + t);
        let mut mats = Vec::with_capacity(self.cfg.k_max + 1);
        for k in 0..=self.cfg.k_max {
            let mut cols = Vec::with_capacity(blowup.n(k));
            for cell in blowup.cells(k) {
                let chain = self.staircase(alpha, &cell.tau, &cell.flag)?;
                cols.push(self.space_indices(alpha + t, k + 1, &chain)?);
            }
            mats.push(Gf2Matrix::from_columns(space.n(k + 1), cols));
        }
        Ok(ChainHomotopy {
            source: blowup,
            target: space,
            mats,
        })
    }

    /// The labeled q-image of one flag simplex: the basepoint of the head for
    /// a flag vertex, and the staircase from the head's basepoint otherwise.
    fn q_chain(
        &mut self,
        alpha: Scale,
        flag: &FlagSimplex,
    ) -> Result<BTreeSet<Simplex>, InterleaveError> {
        let (x, _) = self
            .basepoints
            .get(flag.head())
            .unwrap_or_else(|| panic!("no basepoint for {}", flag.head()));
        match flag.drop_head() {
            None => Ok(std::iter::once(Simplex::vertex(x)).collect()),
            Some(tail) => self.staircase(alpha, &Simplex::vertex(x), &tail),
        }
    }

    /// The chain map q^a from the nerve subdivision at a to the space at a+t.
    pub fn q_map(
        &mut self,
        alpha: Scale,
    ) -> Result<ChainMap<FlagSimplex, Simplex>, InterleaveError> {
        let t = self.cfg.shift();
        let flag = self.flag_at(alpha);
        let space = self.space_at(alpha + t);
        let mut mats = Vec::with_capacity(self.cfg.k_max + 1);
        for k in 0..=self.cfg.k_max {
            let mut cols = Vec::with_capacity(flag.n(k));
            for cell in flag.cells(k).to_vec() {
                let chain = self.q_chain(alpha, &cell)?;
                cols.push(self.space_indices(alpha + t, k, &chain)?);
            }
            mats.push(Gf2Matrix::from_columns(space.n(k), cols));
        }
        Ok(ChainMap {
            source: flag,
            target: space,
            mats,
        })
    }

    /// The projection b at scale a.
    pub fn proj_b(&mut self, alpha: Scale) -> ChainMap<BlowupCell, Simplex> {
        let blowup = self.blowup_at(alpha);
        let space = self.space_at(alpha);
        projection_b(blowup, space, self.cfg.k_max + 1)
    }

    /// The projection p at scale a.
    pub fn proj_p(&mut self, alpha: Scale) -> ChainMap<BlowupCell, FlagSimplex> {
        let blowup = self.blowup_at(alpha);
        let flag = self.flag_at(alpha);
        projection_p(blowup, flag, self.cfg.k_max + 1)
    }

    /// The composite a^a = q^a p^a from the blow-up at a to the space at a+t.
    pub fn a_map(
        &mut self,
        alpha: Scale,
    ) -> Result<ChainMap<BlowupCell, Simplex>, InterleaveError> {
        let q = self.q_map(alpha)?;
        let p = self.proj_p(alpha);
        Ok(ChainMap::compose(&q, &p))
    }

    /// The inclusion-after-projection i_W^{a,a+t} b^a.
    pub fn ib_map(&mut self, alpha: Scale) -> ChainMap<BlowupCell, Simplex> {
        let t = self.cfg.shift();
        let b = self.proj_b(alpha);
        let incl = inclusion_map(
            self.space_at(alpha),
            self.space_at(alpha + t),
            self.cfg.k_max + 1,
        );
        ChainMap::compose(&incl, &b)
    }

    /// The Alexander-Whitney lift of a map out of the blow-up into the
    /// blow-up at the target scale: tau (x) sigma maps to the sum over AW
    /// splittings of f(tau (x) prefix) (x) suffix.
    pub fn lift_blowup_map(
        &mut self,
        f: &ChainMap<BlowupCell, Simplex>,
        target_alpha: Scale,
    ) -> Result<ChainMap<BlowupCell, BlowupCell>, InterleaveError> {
        let source = f.source.clone();
        let target = self.blowup_at(target_alpha);
        let mut mats = Vec::with_capacity(self.cfg.k_max + 1);
        for k in 0..=self.cfg.k_max {
            let mut cols = Vec::with_capacity(source.n(k));
            for cell in source.cells(k) {
                cols.push(lift_cell_image(
                    &source,
                    &target,
                    |dim, idx| f.mats[dim].column(idx).clone(),
                    |dim, idx| f.target.cells(dim)[idx].clone(),
                    cell,
                )?);
            }
            mats.push(Gf2Matrix::from_columns(target.n(k), cols));
        }
        Ok(ChainMap {
            source,
            target,
            mats,
        })
    }

    /// The lift of a degree +1 map out of the blow-up (used to transport
    /// chain homotopies along lifts).
    pub fn lift_blowup_homotopy(
        &mut self,
        c: &ChainHomotopy<BlowupCell, Simplex>,
        target_alpha: Scale,
    ) -> Result<ChainHomotopy<BlowupCell, BlowupCell>, InterleaveError> {
        let source = c.source.clone();
        let target = self.blowup_at(target_alpha);
        let mut mats = Vec::with_capacity(self.cfg.k_max + 1);
        for k in 0..=self.cfg.k_max {
            let mut cols = Vec::with_capacity(source.n(k));
            for cell in source.cells(k) {
                cols.push(lift_cell_image(
                    &source,
                    &target,
                    |dim, idx| c.mats[dim].column(idx).clone(),
                    |dim, idx| c.target.cells(dim + 1)[idx].clone(),
                    cell,
                )?);
            }
            mats.push(Gf2Matrix::from_columns(target.n(k + 1), cols));
        }
        Ok(ChainHomotopy {
            source,
            target,
            mats,
        })
    }

    /// The lift of q^a: a chain map from the nerve subdivision at a into the
    /// blow-up at a+t, sending sigma to the sum of q(prefix) (x) suffix.
    pub fn q_hat(
        &mut self,
        alpha: Scale,
    ) -> Result<ChainMap<FlagSimplex, BlowupCell>, InterleaveError> {
        let t = self.cfg.shift();
        let flag = self.flag_at(alpha);
        let target = self.blowup_at(alpha + t);
        let mut mats = Vec::with_capacity(self.cfg.k_max + 1);
        for k in 0..=self.cfg.k_max {
            let mut cols: Vec<Gf2Col> = Vec::with_capacity(flag.n(k));
            for cell in flag.cells(k).to_vec() {
                let mut acc: Gf2Col = Vec::new();
                for (prefix, suffix) in cell.aw_terms() {
                    let chain = self.q_chain(alpha, &prefix)?;
                    for z in chain {
                        let product = BlowupCell::new(z, suffix.clone());
                        let dim = product.dim();
                        let idx = target.index_of(dim, &product).ok_or_else(|| {
                            InterleaveError::Internal(format!(
                                "lifted cell {} escapes the blow-up at {}",
                                product,
                                alpha + t
                            ))
                        })?;
                        acc = crate::gf2::xor_cols(&acc, &[idx]);
                    }
                }
                cols.push(acc);
            }
            mats.push(Gf2Matrix::from_columns(target.n(k), cols));
        }
        Ok(ChainMap {
            source: flag,
            target,
            mats,
        })
    }

    /// Verifies identity (2) for a supplied global homotopy, so tests can
    /// corrupt entries and confirm detection.
    pub fn check_c_homotopy(
        &mut self,
        alpha: Scale,
        c: &ChainHomotopy<BlowupCell, Simplex>,
    ) -> Result<Result<(), Violation>, InterleaveError> {
        let ib = self.ib_map(alpha);
        let a = self.a_map(alpha)?;
        Ok(c.verify(&ib, &a))
    }

    /// The verification grid: explicit scales when configured, otherwise all
    /// critical scales plus their t- and 2t-translates.
    pub fn grid(&self) -> Vec<Scale> {
        if !self.cfg.scales.is_empty() {
            let mut g = self.cfg.scales.clone();
            g.sort();
            g.dedup();
            return g;
        }
        let t = self.cfg.shift();
        let mut g: Vec<Scale> = Vec::new();
        for &s in &self.criticals {
            g.push(s);
            g.push(s + t);
            g.push(s + t + t);
        }
        g.sort();
        g.dedup();
        g
    }

    /// Runs the five identity checks at one scale.
    pub fn verify_at(&mut self, alpha: Scale) -> Result<ScaleReport, InterleaveError> {
        let t = self.cfg.shift();
        let two_t = t + t;
        let k_max = self.cfg.k_max;
        let mut checks = Vec::with_capacity(5);

        // (1) q^a is a chain map
        let q = self.q_map(alpha)?;
        checks.push(match q.verify() {
            Ok(()) => CheckResult::ok("q-chain-map"),
            Err(v) => CheckResult::fail("q-chain-map", &v),
        });

        // (2) c^a is a chain homotopy between i b and a
        let c = self.global_homotopy(alpha)?;
        checks.push(match self.check_c_homotopy(alpha, &c)? {
            Ok(()) => CheckResult::ok("c-homotopy"),
            Err(v) => CheckResult::fail("c-homotopy", &v),
        });

        // (3) the lift of i_W b^a is the blow-up inclusion
        let ib = self.ib_map(alpha);
        let lifted = self.lift_blowup_map(&ib, alpha + t)?;
        let i_b = inclusion_map(self.blowup_at(alpha), self.blowup_at(alpha + t), k_max);
        checks.push(match lifted.equals(&i_b) {
            Ok(()) => CheckResult::ok("lift-ib-is-inclusion"),
            Err(v) => CheckResult::fail("lift-ib-is-inclusion", &v),
        });

        // (4) p^{a+t} qhat^a = i_N^{a,a+t}
        let qh = self.q_hat(alpha)?;
        let p_t = self.proj_p(alpha + t);
        let pq = ChainMap::compose(&p_t, &qh);
        let i_n = inclusion_map(self.flag_at(alpha), self.flag_at(alpha + t), k_max);
        checks.push(match pq.equals(&i_n) {
            Ok(()) => CheckResult::ok("p-qhat-is-inclusion"),
            Err(v) => CheckResult::fail("p-qhat-is-inclusion", &v),
        });

        // (5) the interleaving identities on homology
        let qh_t = self.q_hat(alpha + t)?;
        let p_after = ChainMap::compose(
            &self.proj_p(alpha + t),
            &inclusion_map(self.blowup_at(alpha), self.blowup_at(alpha + t), k_max),
        );
        let i_b2 = inclusion_map(self.blowup_at(alpha), self.blowup_at(alpha + two_t), k_max);
        let p_2t = ChainMap::compose(
            &self.proj_p(alpha + two_t),
            &inclusion_map(
                self.blowup_at(alpha + t),
                self.blowup_at(alpha + two_t),
                k_max,
            ),
        );
        let i_n2 = inclusion_map(self.flag_at(alpha), self.flag_at(alpha + two_t), k_max);

        let an_b0 = self.blowup_analysis_at(alpha);
        let an_bt = self.blowup_analysis_at(alpha + t);
        let an_b2t = self.blowup_analysis_at(alpha + two_t);
        let an_n0 = self.flag_analysis_at(alpha);
        let an_nt = self.flag_analysis_at(alpha + t);
        let an_n2t = self.flag_analysis_at(alpha + two_t);

        let mut pass = true;
        let mut detail = None;
        for k in 0..=k_max {
            let lhs_b = induced_on_homology(&qh_t, k, &an_nt, &an_b2t)
                .and_then(|m1| {
                    induced_on_homology(&p_after, k, &an_b0, &an_nt).map(|m2| m1.mul(&m2))
                })
                .map_err(|e| InterleaveError::Internal(e.to_string()))?;
            let rhs_b = induced_on_homology(&i_b2, k, &an_b0, &an_b2t)
                .map_err(|e| InterleaveError::Internal(e.to_string()))?;
            if lhs_b != rhs_b {
                pass = false;
                detail = Some(format!("blow-up interleaving identity fails in H_{}", k));
                break;
            }
            let lhs_n = induced_on_homology(&p_2t, k, &an_bt, &an_n2t)
                .and_then(|m1| induced_on_homology(&qh, k, &an_n0, &an_bt).map(|m2| m1.mul(&m2)))
                .map_err(|e| InterleaveError::Internal(e.to_string()))?;
            let rhs_n = induced_on_homology(&i_n2, k, &an_n0, &an_n2t)
                .map_err(|e| InterleaveError::Internal(e.to_string()))?;
            if lhs_n != rhs_n {
                pass = false;
                detail = Some(format!("nerve interleaving identity fails in H_{}", k));
                break;
            }
        }
        checks.push(CheckResult {
            name: "homology-interleaving",
            pass,
            detail,
        });

        Ok(ScaleReport { alpha, checks })
    }

    /// Runs the identity suite at every grid scale.
    pub fn verify_identities(&mut self) -> Result<VerificationReport, InterleaveError> {
        let grid = self.grid();
        let mut scales = Vec::with_capacity(grid.len());
        for alpha in grid {
            scales.push(self.verify_at(alpha)?);
        }
        Ok(VerificationReport {
            k_max: self.cfg.k_max,
            epsilon: self.cfg.epsilon,
            shift: self.cfg.shift(),
            scales,
        })
    }

    /// Count of cached local homotopies (cache effectiveness, test hook).
    pub fn cached_homotopies(&self) -> usize {
        self.homotopies.len()
    }
}

/// Shared lift kernel: image of one blow-up cell under the AW lift of a map
/// (degree 0) or homotopy (degree 1) out of the blow-up.
fn lift_cell_image(
    source: &FilteredComplex<BlowupCell>,
    target: &FilteredComplex<BlowupCell>,
    image_col: impl Fn(usize, usize) -> Gf2Col,
    image_cell: impl Fn(usize, usize) -> Simplex,
    cell: &BlowupCell,
) -> Result<Gf2Col, InterleaveError> {
    let mut acc: Gf2Col = Vec::new();
    for (prefix, suffix) in cell.flag.aw_terms() {
        let pre_cell = BlowupCell::new(cell.tau.clone(), prefix);
        let pre_dim = pre_cell.dim();
        let pre_idx = source.index_of(pre_dim, &pre_cell).ok_or_else(|| {
            InterleaveError::Internal(format!(
                "AW prefix cell {} missing from the blow-up",
                pre_cell
            ))
        })?;
        for &zi in &image_col(pre_dim, pre_idx) {
            let z = image_cell(pre_dim, zi);
            let product = BlowupCell::new(z, suffix.clone());
            let idx = target.index_of(product.dim(), &product).ok_or_else(|| {
                InterleaveError::Internal(format!(
                    "lifted cell {} escapes the blow-up target",
                    product
                ))
            })?;
            acc = crate::gf2::xor_cols(&acc, &[idx]);
        }
    }
    Ok(acc)
}

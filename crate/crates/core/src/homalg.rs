//! Minimal free resolutions, syzygies and transposes, complete resolutions,
//! and the Tate (co)homology tables read off them.

use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::exactla::{Echelon, Mat, Scalar};
use crate::modrep::{
    self, cover_matrix, hom_space, minimal_generators, minimal_generators_of_free_submodule, FreeMap, IsoOutcome,
    IsoSearch, Module, ModuleHom,
};

/// Largest absolute degree a window may reach.
pub const MAX_DEGREE: i64 = 512;

/// Extra degrees computed on each side of a requested window.
pub const WINDOW_PADDING: i64 = 2;

/// A minimal surjection `A^r -> M` and its kernel.
#[derive(Clone, Debug)]
pub struct FreeCover {
    pub rank: usize,
    pub generators: Vec<Vec<Scalar>>,
    /// `kdim(M) x r*n` matrix of the surjection.
    pub map: Mat,
    pub kernel: Module,
    /// Inclusion of the kernel into `A^r`.
    pub kernel_inclusion: Mat,
}

pub fn minimal_cover(m: &Module) -> FreeCover {
    let (rank, generators) = minimal_generators(m);
    let map = cover_matrix(m, &generators);
    let free = Module::free(m.algebra(), rank);
    let (kernel, kernel_inclusion) = free.submodule(&map.kernel_basis()).expect("kernel is a submodule");
    FreeCover { rank, generators, map, kernel, kernel_inclusion }
}

/// The first `L + 1` steps of a minimal free resolution
/// `.. -> F_1 -> F_0 -> M -> 0`.
#[derive(Clone, Debug)]
pub struct MinimalResolution {
    pub module: Module,
    pub generators: Vec<Vec<Scalar>>,
    pub cover: Mat,
    /// `ranks[i]` is the rank of `F_i`.
    pub ranks: Vec<usize>,
    /// `differentials[i]` is `d_{i+1} : F_{i+1} -> F_i`.
    pub differentials: Vec<FreeMap>,
    /// `kernels[i]` spans `ker(F_i -> F_{i-1})` (the syzygy `Ω^{i+1}M`) inside `F_i`.
    pub kernels: Vec<Mat>,
}

impl MinimalResolution {
    pub fn betti(&self) -> &[usize] {
        &self.ranks
    }

    /// `Ω^n M` for `1 <= n <= len + 1`, with its inclusion into `F_{n-1}`.
    pub fn syzygy(&self, n: usize) -> (Module, Mat) {
        assert!(n >= 1 && n <= self.kernels.len());
        let free = Module::free(self.module.algebra(), self.ranks[n - 1]);
        free.submodule(&self.kernels[n - 1]).expect("kernel is a submodule")
    }
}

struct Continuation {
    ranks: Vec<usize>,
    maps: Vec<FreeMap>,
    kernels: Vec<Mat>,
}

/// Resolves the submodule spanned by `kernel` inside `A^rank` for `steps` steps.
fn continue_resolution(algebra: &Arc<Algebra>, mut rank: usize, mut kernel: Mat, steps: usize) -> Continuation {
    let n = algebra.dim();
    let mut out = Continuation { ranks: Vec::new(), maps: Vec::new(), kernels: Vec::new() };
    for _ in 0..steps {
        let gens = minimal_generators_of_free_submodule(algebra, rank, &kernel);
        let d = FreeMap::from_images(algebra, rank, &gens);
        let next = gens.len();
        kernel = if next == 0 { Mat::zeros(algebra.field(), 0, 0) } else { d.k_matrix().kernel_basis() };
        debug_assert_eq!(kernel.rows(), next * n);
        rank = next;
        out.ranks.push(next);
        out.maps.push(d);
        out.kernels.push(kernel.clone());
    }
    out
}

pub fn minimal_free_resolution(m: &Module, length: usize) -> MinimalResolution {
    let (r0, generators) = minimal_generators(m);
    let cover = cover_matrix(m, &generators);
    let k0 = cover.kernel_basis();
    let rest = continue_resolution(m.algebra(), r0, k0.clone(), length);
    let mut ranks = vec![r0];
    ranks.extend(rest.ranks);
    let mut kernels = vec![k0];
    kernels.extend(rest.kernels);
    MinimalResolution { module: m.clone(), generators, cover, ranks, differentials: rest.maps, kernels }
}

pub fn betti_numbers(m: &Module, length: usize) -> Vec<usize> {
    minimal_free_resolution(m, length).ranks
}

/// `Ω^n M`; `Ω^0 M = M`.
pub fn syzygy(m: &Module, n: usize) -> Module {
    if n == 0 {
        return m.clone();
    }
    minimal_free_resolution(m, n - 1).syzygy(n).0
}

/// `Ω^n M` together with its inclusion into the free module `F_{n-1}`, `n >= 1`.
pub fn syzygy_with_inclusion(m: &Module, n: usize) -> Result<(Module, Mat, usize)> {
    if n == 0 {
        return Err(Error::InvalidDegree("the syzygy inclusion needs n >= 1".into()));
    }
    let res = minimal_free_resolution(m, n - 1);
    let (omega, inclusion) = res.syzygy(n);
    Ok((omega, inclusion, res.ranks[n - 1]))
}

/// `Ω^{-n} M = (Ω^n(M*))*`.
pub fn cosyzygy(m: &Module, n: usize) -> Result<Module> {
    m.algebra().require_gorenstein()?;
    if n == 0 {
        return Ok(m.clone());
    }
    Ok(modrep::a_dual(&syzygy(&modrep::a_dual(m), n)))
}

/// The transpose: the cokernel of the dual of a minimal presentation.
pub fn transpose(m: &Module) -> Module {
    let pres = modrep::presentation(m);
    let dual = pres.relations.transpose();
    let free = Module::free(m.algebra(), dual.rows());
    free.quotient(&dual.k_matrix()).expect("images are submodules").0
}

/// Splits off free summands until none is left; returns the remaining
/// module and the total rank removed.
///
/// A free summand exists iff some `φ : M -> A` has an image outside `m`,
/// which is detected by composing with the residue map.
pub fn strip_free(m: &Module) -> (Module, usize) {
    let alg = m.algebra().clone();
    let regular = Module::free(&alg, 1);
    let mut current = m.clone();
    let mut removed = 0;
    while current.kdim() > 0 {
        let homs = hom_space(&current, &regular).expect("same algebra");
        let eps = alg.residue_row();
        let found = homs.iter().find(|h| eps.mul(h.mat()).row(0).iter().any(|&x| x != 0));
        let Some(phi) = found else { break };
        let kernel = phi.mat().kernel_basis();
        current = current.submodule(&kernel).expect("kernel is a submodule").0;
        removed += 1;
    }
    (current, removed)
}

/// Whether `M` has no free direct summand.
pub fn is_stable(m: &Module) -> bool {
    strip_free(m).1 == 0
}

/// Rank bookkeeping check results for a complete resolution window.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowChecks {
    pub squares_vanish: bool,
    pub exact: bool,
    pub dual_exact: bool,
    pub minimal: bool,
}

impl WindowChecks {
    pub fn all(&self) -> bool {
        self.squares_vanish && self.exact && self.dual_exact && self.minimal
    }
}

/// A window `T_lo .. T_hi` of the minimal complete resolution of `M`.
///
/// In degrees `>= 0` it agrees with the minimal free resolution of the
/// free-summand-free part of `M`; in negative degrees it is the dual of the
/// minimal resolution of `M*`, welded on by the biduality map.
#[derive(Clone, Debug)]
pub struct CompleteResolution {
    pub module: Module,
    /// `M` with its free summands removed; `T` resolves this module.
    pub stable: Module,
    /// Total rank of the free summands split off `M`.
    pub stripped_rank: usize,
    pub lo: i64,
    pub hi: i64,
    ranks: Vec<usize>,
    /// `diffs[k]` is `d_{lo+1+k} : T_{lo+1+k} -> T_{lo+k}`.
    diffs: Vec<FreeMap>,
}

impl CompleteResolution {
    pub fn rank(&self, i: i64) -> usize {
        assert!(self.lo <= i && i <= self.hi, "degree {i} outside window");
        self.ranks[(i - self.lo) as usize]
    }

    /// `d_i : T_i -> T_{i-1}`, for `lo < i <= hi`.
    pub fn differential(&self, i: i64) -> &FreeMap {
        assert!(self.lo < i && i <= self.hi, "differential {i} outside window");
        &self.diffs[(i - self.lo - 1) as usize]
    }

    pub fn covers(&self, lo: i64, hi: i64) -> bool {
        self.lo <= lo && hi <= self.hi
    }

    pub fn checks(&self) -> WindowChecks {
        let n = self.module.algebra().dim();
        let mut out = WindowChecks { squares_vanish: true, exact: true, dual_exact: true, minimal: true };
        let ranks: Vec<usize> = self.diffs.iter().map(|d| d.k_matrix().rank()).collect();
        let dual_ranks: Vec<usize> = self.diffs.iter().map(|d| d.transpose().k_matrix().rank()).collect();
        for (k, d) in self.diffs.iter().enumerate() {
            if !d.is_minimal() {
                out.minimal = false;
            }
            if k + 1 < self.diffs.len() && !d.compose(&self.diffs[k + 1]).is_zero() {
                out.squares_vanish = false;
            }
        }
        for i in (self.lo + 1)..self.hi {
            let below = (i - self.lo - 1) as usize;
            let above = below + 1;
            let free_dim = self.rank(i) * n;
            if free_dim - ranks[below] != ranks[above] {
                out.exact = false;
            }
            if free_dim - dual_ranks[above] != dual_ranks[below] {
                out.dual_exact = false;
            }
        }
        out
    }
}

fn check_window(lo: i64, hi: i64) -> Result<()> {
    if lo > hi {
        return Err(Error::InvalidDegree(format!("empty window {lo}:{hi}")));
    }
    if lo.abs() > MAX_DEGREE || hi.abs() > MAX_DEGREE {
        return Err(Error::InvalidDegree(format!("window {lo}:{hi} exceeds |degree| <= {MAX_DEGREE}")));
    }
    Ok(())
}

/// Builds `T_i` for `lo <= i <= hi` exactly (no padding).
pub fn complete_resolution(m: &Module, lo: i64, hi: i64) -> Result<CompleteResolution> {
    check_window(lo, hi)?;
    let alg = m.algebra().clone();
    alg.require_gorenstein()?;
    let (stable, stripped_rank) = strip_free(m);

    let top = hi.max(1);
    let bottom = lo.min(-2);
    let positive = minimal_free_resolution(&stable, top as usize);

    let (dual, inclusion, pres) = modrep::a_dual_embedded(&stable);
    debug_assert_eq!(pres.rank(), positive.ranks[0]);
    let r0 = positive.ranks[0];
    let embedded_dual_gens = {
        let (_, gens) = minimal_generators(&dual);
        gens.iter().map(|g| inclusion.mul_vec(g)).collect::<Vec<_>>()
    };
    // The weld needs both sides to use the same generators of F_0.
    debug_assert_eq!(pres.generators, positive.generators);
    let phi = FreeMap::from_images(&alg, r0, &embedded_dual_gens);
    let t = embedded_dual_gens.len();
    let first_kernel = if t == 0 { Mat::zeros(alg.field(), 0, 0) } else { phi.k_matrix().kernel_basis() };
    let negative_steps = (-bottom - 1) as usize;
    let dual_res = continue_resolution(&alg, t, first_kernel, negative_steps);

    // T_{-1-j} = E_j^*; d_0 = Φ^T; d_{-1-j} = (E_{j+1} -> E_j)^T.
    let mut ranks_by_degree: Vec<(i64, usize)> = Vec::new();
    let mut diffs_by_degree: Vec<(i64, FreeMap)> = Vec::new();
    let mut e_ranks = vec![t];
    e_ranks.extend(dual_res.ranks.iter().copied());
    for j in 0..=negative_steps {
        ranks_by_degree.push((-1 - j as i64, e_ranks[j]));
    }
    for i in 0..=top {
        ranks_by_degree.push((i, positive.ranks[i as usize]));
    }
    diffs_by_degree.push((0, phi.transpose()));
    for (j, d) in dual_res.maps.iter().enumerate() {
        diffs_by_degree.push((-1 - j as i64, d.transpose()));
    }
    for (i, d) in positive.differentials.iter().enumerate() {
        diffs_by_degree.push((i as i64 + 1, d.clone()));
    }
    ranks_by_degree.sort_by_key(|(i, _)| *i);
    diffs_by_degree.sort_by_key(|(i, _)| *i);

    let ranks = ranks_by_degree.into_iter().filter(|(i, _)| lo <= *i && *i <= hi).map(|(_, r)| r).collect();
    let diffs = diffs_by_degree.into_iter().filter(|(i, _)| lo < *i && *i <= hi).map(|(_, d)| d).collect();
    Ok(CompleteResolution { module: m.clone(), stable, stripped_rank, lo, hi, ranks, diffs })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TableKind {
    Ext,
    Tor,
}

/// Period `p` of a table, detected at syzygy shift `from`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Period {
    pub p: usize,
    pub from: i64,
}

/// Dimensions of Tate Ext or Tor in each degree of a window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TateTable {
    pub kind: TableKind,
    pub lo: i64,
    pub hi: i64,
    pub dims: Vec<usize>,
    pub period: Option<Period>,
}

impl TateTable {
    pub fn get(&self, i: i64) -> Option<usize> {
        if i < self.lo || i > self.hi {
            None
        } else {
            self.dims.get((i - self.lo) as usize).copied()
        }
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> {
        self.lo..=self.hi
    }

    pub fn is_zero(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }

    /// True when the table is periodic and some full period inside the
    /// window vanishes, so every degree vanishes.
    pub fn certified_zero(&self) -> bool {
        match self.period {
            Some(Period { p, .. }) => {
                let mut run = 0;
                for &d in &self.dims {
                    run = if d == 0 { run + 1 } else { 0 };
                    if run >= p {
                        return true;
                    }
                }
                false
            }
            None => false,
        }
    }

    /// The value at any integer degree, extrapolated through the period.
    pub fn extrapolate(&self, i: i64) -> Option<usize> {
        if let Some(v) = self.get(i) {
            return Some(v);
        }
        let p = self.period?.p as i64;
        if p == 0 || self.hi - self.lo + 1 < p {
            return None;
        }
        let j = self.lo + (i - self.lo).rem_euclid(p);
        self.get(j)
    }
}

fn ext_dims(res: &CompleteResolution, n: &Module, lo: i64, hi: i64) -> Vec<usize> {
    let m = n.kdim();
    let rank_of = |i: i64| res.differential(i).hom_matrix(n).rank();
    let ranks: Vec<usize> = ((lo)..=(hi + 1)).map(rank_of).collect();
    (lo..=hi)
        .map(|i| {
            let k = (i - lo) as usize;
            res.rank(i) * m - ranks[k + 1] - ranks[k]
        })
        .collect()
}

fn tor_dims(res: &CompleteResolution, n: &Module, lo: i64, hi: i64) -> Vec<usize> {
    let m = n.kdim();
    let rank_of = |i: i64| res.differential(i).tensor_matrix(n).rank();
    let ranks: Vec<usize> = ((lo)..=(hi + 1)).map(rank_of).collect();
    (lo..=hi)
        .map(|i| {
            let k = (i - lo) as usize;
            res.rank(i) * m - ranks[k] - ranks[k + 1]
        })
        .collect()
}

/// `dim Ext^i(M, N)` for `lo <= i <= hi` in Tate cohomology, with the
/// period detected from `M` or `N`.
pub fn tate_ext(m: &Module, n: &Module, lo: i64, hi: i64) -> Result<TateTable> {
    Session::default().tate_ext(m, n, lo, hi)
}

/// `dim Tor_i(M, N)` for `lo <= i <= hi` in Tate homology.
pub fn tate_tor(m: &Module, n: &Module, lo: i64, hi: i64) -> Result<TateTable> {
    Session::default().tate_tor(m, n, lo, hi)
}

/// `dim Ext^i(M, N)` for `0 <= i <= upto` from the minimal free resolution.
pub fn ordinary_ext_dims(m: &Module, n: &Module, upto: usize) -> Vec<usize> {
    let res = minimal_free_resolution(m, upto + 1);
    let kd = n.kdim();
    let ranks: Vec<usize> = res.differentials.iter().map(|d| d.hom_matrix(n).rank()).collect();
    (0..=upto)
        .map(|i| {
            let before = if i == 0 { 0 } else { ranks[i - 1] };
            res.ranks[i] * kd - ranks[i] - before
        })
        .collect()
}

/// `dim Tor_i(M, N)` for `0 <= i <= upto` from the minimal free resolution.
pub fn ordinary_tor_dims(m: &Module, n: &Module, upto: usize) -> Vec<usize> {
    let res = minimal_free_resolution(m, upto + 1);
    let kd = n.kdim();
    let ranks: Vec<usize> = res.differentials.iter().map(|d| d.tensor_matrix(n).rank()).collect();
    (0..=upto)
        .map(|i| {
            let before = if i == 0 { 0 } else { ranks[i - 1] };
            res.ranks[i] * kd - ranks[i] - before
        })
        .collect()
}

pub fn ordinary_ext(m: &Module, n: &Module, i: usize) -> usize {
    ordinary_ext_dims(m, n, i)[i]
}

pub fn ordinary_tor(m: &Module, n: &Module, i: usize) -> usize {
    ordinary_tor_dims(m, n, i)[i]
}

/// Representatives of a basis of `Ext^q(M, N)` as maps `Ω^q M -> N`.
#[derive(Clone, Debug)]
pub struct ExtClasses {
    pub degree: usize,
    pub syzygy: Module,
    /// Inclusion of `Ω^q M` into `F_{q-1} = A^{free_rank}`.
    pub inclusion: Mat,
    pub free_rank: usize,
    pub basis: Vec<ModuleHom>,
}

impl ExtClasses {
    /// The class `Σ c_i basis_i` as a map.
    pub fn combination(&self, coeffs: &[Scalar]) -> Mat {
        let f = self.syzygy.field();
        let target = self.basis.first().map(|h| h.target().kdim()).unwrap_or(0);
        let mut acc = Mat::zeros(f, target, self.syzygy.kdim());
        for (c, h) in coeffs.iter().zip(&self.basis) {
            acc.add_scaled(*c, h.mat());
        }
        acc
    }
}

/// `Ext^q(M, N) = Hom(Ω^q M, N) / {maps factoring through Ω^q M -> F_{q-1}}`.
pub fn ext_classes(m: &Module, n: &Module, q: usize) -> Result<ExtClasses> {
    let (omega, inclusion, free_rank) = syzygy_with_inclusion(m, q)?;
    let alg = m.algebra();
    let f = alg.field();
    let homs = hom_space(&omega, n)?;
    let size = n.kdim() * omega.kdim();
    let mut span = Echelon::new(f, size);
    // Every map A^r -> N is determined by the images of the basis vectors.
    for j in 0..free_rank {
        for s in 0..n.kdim() {
            let mut phi = Mat::zeros(f, n.kdim(), free_rank * alg.dim());
            for t in 0..alg.dim() {
                let col = n.action()[t].col(s);
                for (r, &v) in col.iter().enumerate() {
                    phi.set(r, j * alg.dim() + t, v);
                }
            }
            span.insert(phi.mul(&inclusion).data());
        }
    }
    let basis = homs.into_iter().filter(|h| span.insert(h.mat().data())).collect();
    Ok(ExtClasses { degree: q, syzygy: omega, inclusion, free_rank, basis })
}

/// The pushout `K = (F_{q-1} ⊕ M) / {(ι u, -f u)}` of `f : Ω^q M -> M` along
/// `ι : Ω^q M -> F_{q-1}`; it sits in `0 -> M -> K -> Ω^{q-1} M -> 0`.
pub fn pushout_extension(m: &Module, q: usize, f: &Mat) -> Result<Module> {
    if q < 1 {
        return Err(Error::InvalidDegree("pushout needs q >= 1".into()));
    }
    let (omega, inclusion, free_rank) = syzygy_with_inclusion(m, q)?;
    if f.rows() != m.kdim() || f.cols() != omega.kdim() {
        return Err(Error::Shape("the class must be a map from the q-th syzygy to M".into()));
    }
    if !modrep::is_equivariant(&omega, m, f) {
        return Err(Error::NotEquivariant);
    }
    let ambient = Module::free(m.algebra(), free_rank).direct_sum(m)?;
    let relations = inclusion.vstack(&f.scale(m.field().neg(1)));
    Ok(ambient.quotient(&relations)?.0)
}

/// A detected periodicity `Ω^shift M ≅ Ω^{shift+period} M` up to free summands.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Periodicity {
    pub period: usize,
    pub shift: usize,
    /// The stable part is zero, so every Tate group vanishes.
    pub zero_complex: bool,
}

pub fn detect_periodicity(m: &Module, max_period: usize, max_shift: usize) -> Option<Periodicity> {
    detect_periodicity_with(m, max_period, max_shift, &IsoSearch::default())
}

pub fn detect_periodicity_with(
    m: &Module,
    max_period: usize,
    max_shift: usize,
    search: &IsoSearch,
) -> Option<Periodicity> {
    let (stable, _) = strip_free(m);
    if stable.kdim() == 0 {
        return Some(Periodicity { period: 1, shift: 0, zero_complex: true });
    }
    let depth = max_shift + max_period;
    let res = minimal_free_resolution(&stable, depth.saturating_sub(1));
    let syzygies: Vec<Module> = (0..=depth).map(|s| if s == 0 { stable.clone() } else { res.syzygy(s).0 }).collect();
    for p in 1..=max_period {
        for s in 0..=max_shift {
            let (a, b) = (&syzygies[s], &syzygies[s + p]);
            if a.kdim() != b.kdim() {
                continue;
            }
            if let Ok(IsoOutcome::Iso(_)) = modrep::is_iso_with(a, b, search) {
                return Some(Periodicity { period: p, shift: s, zero_complex: false });
            }
        }
    }
    None
}

/// Caches complete resolutions and periodicity data across many table
/// computations over the same modules.
pub struct Session {
    pub search: IsoSearch,
    pub max_period: usize,
    pub max_shift: usize,
    resolutions: Mutex<Vec<Arc<CompleteResolution>>>,
    periods: Mutex<Vec<(Module, Option<Periodicity>)>>,
    tables: Mutex<Vec<(TableKind, Module, Module, TateTable)>>,
}

impl Default for Session {
    fn default() -> Self {
        Session::new(IsoSearch::default())
    }
}

impl Session {
    pub fn new(search: IsoSearch) -> Session {
        Session {
            search,
            max_period: 4,
            max_shift: 3,
            resolutions: Mutex::new(Vec::new()),
            periods: Mutex::new(Vec::new()),
            tables: Mutex::new(Vec::new()),
        }
    }

    pub fn complete_resolution(&self, m: &Module, lo: i64, hi: i64) -> Result<Arc<CompleteResolution>> {
        check_window(lo, hi)?;
        {
            let cache = self.resolutions.lock().expect("cache lock");
            if let Some(r) = cache.iter().find(|r| r.covers(lo, hi) && r.module == *m) {
                return Ok(r.clone());
            }
        }
        let res = Arc::new(complete_resolution(m, lo, hi)?);
        let mut cache = self.resolutions.lock().expect("cache lock");
        cache.retain(|r| !(r.module == *m && lo <= r.lo && r.hi <= hi));
        cache.push(res.clone());
        Ok(res)
    }

    pub fn periodicity(&self, m: &Module) -> Option<Periodicity> {
        {
            let cache = self.periods.lock().expect("cache lock");
            if let Some((_, p)) = cache.iter().find(|(k, _)| k == m) {
                return *p;
            }
        }
        let p = detect_periodicity_with(m, self.max_period, self.max_shift, &self.search);
        self.periods.lock().expect("cache lock").push((m.clone(), p));
        p
    }

    /// Period shared by every table with `M` or `N` as an argument.
    pub fn table_period(&self, m: &Module, n: &Module) -> Option<Period> {
        self.periodicity(m)
            .or_else(|| self.periodicity(n))
            .map(|p| Period { p: p.period, from: p.shift as i64 })
    }

    fn table(&self, kind: TableKind, m: &Module, n: &Module, lo: i64, hi: i64) -> Result<TateTable> {
        check_window(lo, hi)?;
        if *m.algebra() != *n.algebra() {
            return Err(Error::AlgebraMismatch);
        }
        {
            let cache = self.tables.lock().expect("cache lock");
            let hit = cache.iter().find(|(k, a, b, t)| *k == kind && t.lo <= lo && hi <= t.hi && a == m && b == n);
            if let Some((_, _, _, t)) = hit {
                let dims = (lo..=hi).map(|i| t.get(i).expect("inside cached window")).collect();
                return Ok(TateTable { kind, lo, hi, dims, period: t.period });
            }
        }
        // Resolve symmetrically so mirrored windows reuse the same complex.
        let res_lo = (lo - WINDOW_PADDING).min(-hi - 1 - WINDOW_PADDING);
        let res_hi = (hi + WINDOW_PADDING).max(-lo - 1 + WINDOW_PADDING);
        let res = self.complete_resolution(m, res_lo, res_hi)?;
        let dims = match kind {
            TableKind::Ext => ext_dims(&res, n, lo, hi),
            TableKind::Tor => tor_dims(&res, n, lo, hi),
        };
        let table = TateTable { kind, lo, hi, dims, period: self.table_period(m, n) };
        self.tables.lock().expect("cache lock").push((kind, m.clone(), n.clone(), table.clone()));
        Ok(table)
    }

    pub fn tate_ext(&self, m: &Module, n: &Module, lo: i64, hi: i64) -> Result<TateTable> {
        self.table(TableKind::Ext, m, n, lo, hi)
    }

    pub fn tate_tor(&self, m: &Module, n: &Module, lo: i64, hi: i64) -> Result<TateTable> {
        self.table(TableKind::Tor, m, n, lo, hi)
    }
}

//! Finitely generated modules as vector spaces with an algebra action,
//! equivariant maps between them, and the constructions built from a
//! minimal presentation (Hom, tensor, duals).

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{Algebra, Ideal};
use crate::error::{Error, Result};
use crate::exactla::{Echelon, Mat, PrimeField, Scalar};

/// Largest module dimension accepted from untrusted input.
pub const MAX_MODULE_DIM: usize = 512;

/// Default seed for every pseudo-random search.
pub const DEFAULT_SEED: u64 = 0xC0FFEE;

/// A module given by the action matrices `rho(b_i)` of the algebra basis.
#[derive(Clone)]
pub struct Module {
    algebra: Arc<Algebra>,
    action: Vec<Mat>,
    free_rank: Option<usize>,
}

impl PartialEq for Module {
    fn eq(&self, other: &Self) -> bool {
        *self.algebra == *other.algebra && self.action == other.action
    }
}

impl fmt::Debug for Module {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Module").field("kdim", &self.kdim()).field("free_rank", &self.free_rank).finish()
    }
}

impl Module {
    /// Validates the module axioms and builds the module.
    pub fn new(algebra: &Arc<Algebra>, action: Vec<Mat>) -> Result<Module> {
        let n = algebra.dim();
        if action.len() != n {
            return Err(Error::Shape(format!("expected {n} action matrices, got {}", action.len())));
        }
        let m = action.first().map_or(0, |a| a.rows());
        if action.iter().any(|a| a.rows() != m || a.cols() != m) {
            return Err(Error::Shape("action matrices must be square of equal size".into()));
        }
        if action.iter().any(|a| a.field() != algebra.field()) {
            return Err(Error::AlgebraMismatch);
        }
        let module = Module { algebra: algebra.clone(), action, free_rank: None };
        if module.act(algebra.unit()) != Mat::identity(algebra.field(), m) {
            return Err(Error::ModuleAxiom("the unit does not act as the identity".into()));
        }
        // The unit and the radical generators generate the algebra, so
        // multiplicativity against them forces it everywhere.
        for g in algebra.radical_generators() {
            let rg = module.act(g);
            for j in 0..n {
                let lhs = rg.mul(&module.action[j]);
                let rhs = module.act(&algebra.mul_elems(g, &algebra.basis_element(j)));
                if lhs != rhs {
                    return Err(Error::ModuleAxiom(format!("rho(g)rho(b{j}) != rho(g b{j})")));
                }
            }
        }
        Ok(module)
    }

    fn trusted(algebra: &Arc<Algebra>, action: Vec<Mat>) -> Module {
        Module { algebra: algebra.clone(), action, free_rank: None }
    }

    /// `A^r` with coordinates `j*n + t` for the coefficient of `b_t` in copy `j`.
    pub fn free(algebra: &Arc<Algebra>, rank: usize) -> Module {
        let f = algebra.field();
        let action = (0..algebra.dim())
            .map(|i| {
                let l = algebra.left_mul_basis(i);
                Mat::block_diag(f, &vec![l; rank])
            })
            .collect();
        Module { algebra: algebra.clone(), action, free_rank: Some(rank) }
    }

    pub fn zero(algebra: &Arc<Algebra>) -> Module {
        Module::free(algebra, 0)
    }

    /// The residue field `k = A/m`.
    pub fn residue_field(algebra: &Arc<Algebra>) -> Module {
        let f = algebra.field();
        let action = (0..algebra.dim())
            .map(|i| Mat::from_fn(f, 1, 1, |_, _| algebra.residue(&algebra.basis_element(i))))
            .collect();
        Module::trusted(algebra, action)
    }

    /// The cyclic module `A/I`.
    pub fn cyclic(algebra: &Arc<Algebra>, ideal: &Ideal) -> Result<Module> {
        if **ideal.algebra() != **algebra {
            return Err(Error::AlgebraMismatch);
        }
        let free = Module::free(algebra, 1);
        let basis = Mat::from_columns(algebra.field(), algebra.dim(), ideal.basis());
        Ok(free.quotient(&basis)?.0)
    }

    /// `A/(f_1, .., f_s)`.
    pub fn cyclic_by_elements(algebra: &Arc<Algebra>, elements: &[Vec<Scalar>]) -> Result<Module> {
        Module::cyclic(algebra, &Ideal::generated_by(algebra, elements)?)
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn field(&self) -> PrimeField {
        self.algebra.field()
    }

    pub fn kdim(&self) -> usize {
        self.action.first().map_or(0, |a| a.rows())
    }

    pub fn is_zero(&self) -> bool {
        self.kdim() == 0
    }

    /// Rank when the module was built as a free module.
    pub fn free_rank(&self) -> Option<usize> {
        self.free_rank
    }

    pub fn action(&self) -> &[Mat] {
        &self.action
    }

    /// `rho(a)` for an arbitrary algebra element.
    pub fn act(&self, a: &[Scalar]) -> Mat {
        let m = self.kdim();
        let mut out = Mat::zeros(self.field(), m, m);
        for (i, &c) in a.iter().enumerate() {
            out.add_scaled(c, &self.action[i]);
        }
        out
    }

    fn same_algebra(&self, other: &Module) -> Result<()> {
        if Arc::ptr_eq(&self.algebra, &other.algebra) || *self.algebra == *other.algebra {
            Ok(())
        } else {
            Err(Error::AlgebraMismatch)
        }
    }

    pub fn direct_sum(&self, other: &Module) -> Result<Module> {
        self.same_algebra(other)?;
        let f = self.field();
        let action = self.action.iter().zip(&other.action).map(|(a, b)| Mat::block_diag(f, &[a, b])).collect();
        let free_rank = match (self.free_rank, other.free_rank) {
            (Some(a), Some(b)) => Some(a + b),
            _ => None,
        };
        Ok(Module { algebra: self.algebra.clone(), action, free_rank })
    }

    /// `M^r`, copies laid out consecutively.
    pub fn power(&self, r: usize) -> Module {
        let f = self.field();
        let action = self.action.iter().map(|a| Mat::block_diag(f, &vec![a; r])).collect();
        Module::trusted(&self.algebra, action)
    }

    /// The same module in new coordinates: `p` maps new coordinates to old ones.
    pub fn change_basis(&self, p: &Mat) -> Result<Module> {
        let inv = p.inverse().ok_or_else(|| Error::Shape("change of basis must be invertible".into()))?;
        let action = self.action.iter().map(|a| inv.mul(&a.mul(p))).collect();
        Ok(Module::trusted(&self.algebra, action))
    }

    fn check_invariant(&self, basis: &Mat) -> Result<()> {
        let mut span = Echelon::new(self.field(), self.kdim());
        for v in basis.columns() {
            span.insert(&v);
        }
        for g in self.algebra.radical_generators() {
            let image = self.act(g).mul(basis);
            if image.columns().iter().any(|v| !span.contains(v)) {
                return Err(Error::NotInvariant);
            }
        }
        Ok(())
    }

    /// The submodule spanned by the columns of `spanning` (an echelon basis
    /// of the span is used as coordinates) together with its inclusion.
    pub fn submodule(&self, spanning: &Mat) -> Result<(Module, Mat)> {
        if spanning.rows() != self.kdim() {
            return Err(Error::Shape("subspace vectors have the wrong length".into()));
        }
        let basis = column_basis(spanning);
        self.check_invariant(&basis)?;
        let coords = Coordinates::new(&basis);
        let action = self.action.iter().map(|a| coords.express(&a.mul(&basis))).collect();
        Ok((Module::trusted(&self.algebra, action), basis))
    }

    /// `M / W` on the complement of the pivot coordinates of `W`, with the
    /// projection matrix.
    pub fn quotient(&self, spanning: &Mat) -> Result<(Module, Mat)> {
        if spanning.rows() != self.kdim() {
            return Err(Error::Shape("subspace vectors have the wrong length".into()));
        }
        self.check_invariant(spanning)?;
        let m = self.kdim();
        let f = self.field();
        let rref = spanning.transpose().rref();
        let kept: Vec<usize> = (0..m).filter(|c| !rref.pivots.contains(c)).collect();
        let reduce = |v: &[Scalar]| -> Vec<Scalar> {
            let mut v = v.to_vec();
            for (r, &pc) in rref.pivots.iter().enumerate() {
                let c = v[pc];
                if c != 0 {
                    let neg = f.neg(c);
                    for (slot, &x) in v.iter_mut().zip(rref.mat.row(r)) {
                        if x != 0 {
                            *slot = f.mul_add(*slot, neg, x);
                        }
                    }
                }
            }
            kept.iter().map(|&k| v[k]).collect()
        };
        let q = kept.len();
        let proj_cols: Vec<Vec<Scalar>> =
            (0..m).map(|j| reduce(&crate::algebra::basis_vector(m, j))).collect();
        let proj = Mat::from_columns(f, q, &proj_cols);
        let lift = Mat::from_fn(f, m, q, |r, c| (kept[c] == r) as Scalar);
        let action = self.action.iter().map(|a| proj.mul(&a.mul(&lift))).collect();
        Ok((Module::trusted(&self.algebra, action), proj))
    }

    /// The submodule `mM`, as a spanning set of vectors.
    pub fn radical_span(&self) -> Vec<Vec<Scalar>> {
        let mut out = Vec::new();
        for g in self.algebra.radical_generators() {
            out.extend(self.act(g).columns());
        }
        out
    }
}

/// An echelon column basis of the column span.
pub(crate) fn column_basis(spanning: &Mat) -> Mat {
    let rows = spanning.transpose().rref().basis_rows();
    Mat::from_columns(spanning.field(), spanning.rows(), &rows)
}

/// Coordinates of vectors lying in the span of independent columns.
pub(crate) struct Coordinates {
    rows: Vec<usize>,
    inv: Mat,
}

impl Coordinates {
    pub(crate) fn new(basis: &Mat) -> Coordinates {
        let rows = basis.transpose().rref().pivots;
        let square = Mat::from_fn(basis.field(), rows.len(), basis.cols(), |r, c| basis.get(rows[r], c));
        let inv = square.inverse().expect("basis columns are independent");
        Coordinates { rows, inv }
    }

    /// Coordinates of each column of `vectors`; assumes they lie in the span.
    pub(crate) fn express(&self, vectors: &Mat) -> Mat {
        let picked = Mat::from_fn(vectors.field(), self.rows.len(), vectors.cols(), |r, c| vectors.get(self.rows[r], c));
        self.inv.mul(&picked)
    }
}

/// An equivariant linear map between modules.
#[derive(Clone, Debug, PartialEq)]
pub struct ModuleHom {
    source: Module,
    target: Module,
    mat: Mat,
}

impl ModuleHom {
    pub fn new(source: &Module, target: &Module, mat: Mat) -> Result<ModuleHom> {
        source.same_algebra(target)?;
        if mat.rows() != target.kdim() || mat.cols() != source.kdim() {
            return Err(Error::Shape("map matrix must be kdim(target) x kdim(source)".into()));
        }
        if !is_equivariant(source, target, &mat) {
            return Err(Error::NotEquivariant);
        }
        Ok(ModuleHom { source: source.clone(), target: target.clone(), mat })
    }

    pub(crate) fn trusted(source: &Module, target: &Module, mat: Mat) -> ModuleHom {
        ModuleHom { source: source.clone(), target: target.clone(), mat }
    }

    pub fn source(&self) -> &Module {
        &self.source
    }

    pub fn target(&self) -> &Module {
        &self.target
    }

    pub fn mat(&self) -> &Mat {
        &self.mat
    }

    pub fn is_iso(&self) -> bool {
        self.mat.is_invertible()
    }
}

pub fn is_equivariant(source: &Module, target: &Module, mat: &Mat) -> bool {
    source.algebra.radical_generators().iter().all(|g| mat.mul(&source.act(g)) == target.act(g).mul(mat))
}

/// A homomorphism `A^cols -> A^rows` written as a matrix of algebra elements;
/// column `j` is the image of the `j`-th basis vector.
#[derive(Clone, PartialEq)]
pub struct FreeMap {
    algebra: Arc<Algebra>,
    rows: usize,
    cols: usize,
    entries: Vec<Vec<Scalar>>,
}

impl fmt::Debug for FreeMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FreeMap {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.element_string(i, j)).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl FreeMap {
    pub fn zero(algebra: &Arc<Algebra>, rows: usize, cols: usize) -> FreeMap {
        FreeMap { algebra: algebra.clone(), rows, cols, entries: vec![vec![0; algebra.dim()]; rows * cols] }
    }

    /// Builds the map sending basis vector `j` to `images[j] ∈ A^rows`.
    pub fn from_images(algebra: &Arc<Algebra>, rows: usize, images: &[Vec<Scalar>]) -> FreeMap {
        let n = algebra.dim();
        let cols = images.len();
        let mut entries = vec![Vec::new(); rows * cols];
        for (j, v) in images.iter().enumerate() {
            debug_assert_eq!(v.len(), rows * n);
            for i in 0..rows {
                entries[i * cols + j] = v[i * n..(i + 1) * n].to_vec();
            }
        }
        FreeMap { algebra: algebra.clone(), rows, cols, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn entry(&self, i: usize, j: usize) -> &[Scalar] {
        &self.entries[i * self.cols + j]
    }

    fn element_string(&self, i: usize, j: usize) -> String {
        let f = self.algebra.field();
        let terms: Vec<String> = self
            .entry(i, j)
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(t, &c)| {
                let label = &self.algebra.labels()[t];
                if c == 1 {
                    label.clone()
                } else {
                    format!("{}*{label}", c % f.characteristic())
                }
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }

    /// The `k`-linear matrix on coordinates of the free modules.
    pub fn k_matrix(&self) -> Mat {
        let n = self.algebra.dim();
        let mut out = Mat::zeros(self.algebra.field(), self.rows * n, self.cols * n);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let e = self.entry(i, j);
                if e.iter().any(|&c| c != 0) {
                    out.set_block(i * n, j * n, &self.algebra.left_mul(e));
                }
            }
        }
        out
    }

    /// The dual map `Hom(A^rows, A) -> Hom(A^cols, A)` in dual bases.
    pub fn transpose(&self) -> FreeMap {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.entry(i, j).to_vec());
            }
        }
        FreeMap { algebra: self.algebra.clone(), rows: self.cols, cols: self.rows, entries }
    }

    /// `self ⊗ N : N^cols -> N^rows`.
    pub fn tensor_matrix(&self, n: &Module) -> Mat {
        let m = n.kdim();
        let mut out = Mat::zeros(self.algebra.field(), self.rows * m, self.cols * m);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let e = self.entry(i, j);
                if e.iter().any(|&c| c != 0) {
                    out.set_block(i * m, j * m, &n.act(e));
                }
            }
        }
        out
    }

    /// `Hom(self, N) : N^rows -> N^cols`.
    pub fn hom_matrix(&self, n: &Module) -> Mat {
        self.transpose().tensor_matrix(n)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &FreeMap) -> FreeMap {
        assert_eq!(self.cols, other.rows);
        let alg = &self.algebra;
        let n = alg.dim();
        let mut out = FreeMap::zero(alg, self.rows, other.cols);
        let f = alg.field();
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = vec![0; n];
                for k in 0..self.cols {
                    let p = alg.mul_elems(self.entry(i, k), other.entry(k, j));
                    for (a, b) in acc.iter_mut().zip(p) {
                        *a = f.add(*a, b);
                    }
                }
                out.entries[i * other.cols + j] = acc;
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.iter().all(|&c| c == 0))
    }

    /// Every entry lies in the maximal ideal.
    pub fn is_minimal(&self) -> bool {
        self.entries.iter().all(|e| self.algebra.residue(e) == 0)
    }
}

/// A minimal presentation `A^{r1} --D--> A^{r0} --π--> M -> 0`.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub module: Module,
    /// Coordinates in `M` of the chosen minimal generators.
    pub generators: Vec<Vec<Scalar>>,
    /// `π` as a `kdim(M) x r0*n` matrix.
    pub cover: Mat,
    /// A `k`-linear section `s` with `π s = 1`.
    pub section: Mat,
    /// Basis of `ker π` inside `A^{r0}`.
    pub kernel: Mat,
    pub relations: FreeMap,
}

impl Presentation {
    pub fn rank(&self) -> usize {
        self.generators.len()
    }
}

/// Greedy choice of candidates completing `base` to a spanning set.
fn greedy_extend(field: PrimeField, dim: usize, base: &[Vec<Scalar>], candidates: &[Vec<Scalar>]) -> Vec<usize> {
    let mut span = Echelon::new(field, dim);
    for v in base {
        span.insert(v);
    }
    let mut chosen = Vec::new();
    for (i, v) in candidates.iter().enumerate() {
        if span.rank() == dim {
            break;
        }
        if span.insert(v) {
            chosen.push(i);
        }
    }
    chosen
}

/// Lifts of a basis of `M/mM`: their count is the minimal number of generators.
pub fn minimal_generators(m: &Module) -> (usize, Vec<Vec<Scalar>>) {
    let dim = m.kdim();
    let unit_vectors: Vec<Vec<Scalar>> = (0..dim).map(|j| crate::algebra::basis_vector(dim, j)).collect();
    let chosen = greedy_extend(m.field(), dim, &m.radical_span(), &unit_vectors);
    (chosen.len(), chosen.into_iter().map(|j| unit_vectors[j].clone()).collect())
}

/// Minimal generators of the submodule of `A^r` spanned by the columns of `basis`.
pub fn minimal_generators_of_free_submodule(algebra: &Algebra, r: usize, basis: &Mat) -> Vec<Vec<Scalar>> {
    let n = algebra.dim();
    let f = algebra.field();
    let vectors = basis.columns();
    let mut radical_part = Vec::new();
    for g in algebra.radical_generators() {
        let block = Mat::block_diag(f, &vec![&algebra.left_mul(g); r]);
        radical_part.extend(block.mul(basis).columns());
    }
    let chosen = greedy_extend(f, r * n, &radical_part, &vectors);
    chosen.into_iter().map(|j| vectors[j].clone()).collect()
}

/// The map `A^r -> M` sending `e_j` to `generators[j]`.
pub fn cover_matrix(m: &Module, generators: &[Vec<Scalar>]) -> Mat {
    let n = m.algebra.dim();
    let mut cols = Vec::with_capacity(generators.len() * n);
    for g in generators {
        for t in 0..n {
            cols.push(m.action[t].mul_vec(g));
        }
    }
    Mat::from_columns(m.field(), m.kdim(), &cols)
}

pub fn presentation(m: &Module) -> Presentation {
    let alg = &m.algebra;
    let (r0, generators) = minimal_generators(m);
    let cover = cover_matrix(m, &generators);
    let section = cover
        .solve(&Mat::identity(m.field(), m.kdim()))
        .expect("minimal generators generate the module");
    let kernel = cover.kernel_basis();
    let relation_images = minimal_generators_of_free_submodule(alg, r0, &kernel);
    let relations = FreeMap::from_images(alg, r0, &relation_images);
    Presentation { module: m.clone(), generators, cover, section, kernel, relations }
}

/// A basis of `Hom_A(M, N)` computed from a minimal presentation of `M`.
pub fn hom_space(m: &Module, n: &Module) -> Result<Vec<ModuleHom>> {
    m.same_algebra(n)?;
    let pres = presentation(m);
    Ok(hom_space_with(&pres, n))
}

pub(crate) fn hom_space_with(pres: &Presentation, n: &Module) -> Vec<ModuleHom> {
    let m = &pres.module;
    let alg = &m.algebra;
    let r0 = pres.rank();
    let mn = n.kdim();
    let constraints = pres.relations.hom_matrix(n);
    let solutions = if constraints.rows() == 0 {
        Mat::identity(n.field(), r0 * mn)
    } else {
        constraints.kernel_basis()
    };
    solutions
        .columns()
        .into_iter()
        .map(|nu| {
            let mut phi = Mat::zeros(n.field(), mn, r0 * alg.dim());
            for j in 0..r0 {
                let image = &nu[j * mn..(j + 1) * mn];
                for t in 0..alg.dim() {
                    let col = n.action[t].mul_vec(image);
                    for (r, &v) in col.iter().enumerate() {
                        phi.set(r, j * alg.dim() + t, v);
                    }
                }
            }
            ModuleHom::trusted(m, n, phi.mul(&pres.section))
        })
        .collect()
}

pub fn hom_dim(m: &Module, n: &Module) -> Result<usize> {
    m.same_algebra(n)?;
    let pres = presentation(m);
    let constraints = pres.relations.hom_matrix(n);
    let unknowns = pres.rank() * n.kdim();
    Ok(unknowns - constraints.rank())
}

/// Reference computation of `Hom_A(M, N)`: the kernel of the linear system
/// `X rho_M(g) = rho_N(g) X` over the radical generators. Quadratic in the
/// module sizes; meant for small inputs and cross-checks.
pub fn hom_space_by_commutation(m: &Module, n: &Module) -> Result<Vec<Mat>> {
    m.same_algebra(n)?;
    let f = m.field();
    let (a, b) = (n.kdim(), m.kdim());
    let gens = m.algebra.radical_generators();
    let mut system = Mat::zeros(f, gens.len() * a * b, a * b);
    for (gi, g) in gens.iter().enumerate() {
        let rm = m.act(g);
        let rn = n.act(g);
        for r in 0..a {
            for c in 0..b {
                let row = gi * a * b + r * b + c;
                for k in 0..a {
                    let v = rn.get(r, k);
                    if v != 0 {
                        let idx = k * b + c;
                        system.set(row, idx, f.add(system.get(row, idx), v));
                    }
                }
                for k in 0..b {
                    let v = rm.get(k, c);
                    if v != 0 {
                        let idx = r * b + k;
                        system.set(row, idx, f.sub(system.get(row, idx), v));
                    }
                }
            }
        }
    }
    let kernel = if gens.is_empty() { Mat::identity(f, a * b) } else { system.kernel_basis() };
    Ok(kernel.columns().into_iter().map(|v| Mat::from_fn(f, a, b, |r, c| v[r * b + c])).collect())
}

/// `M ⊗_A N` as the cokernel of `D ⊗ N` for a minimal presentation `D` of `M`.
pub fn tensor(m: &Module, n: &Module) -> Result<Module> {
    m.same_algebra(n)?;
    let pres = presentation(m);
    let ambient = n.power(pres.rank());
    let relations = pres.relations.tensor_matrix(n);
    Ok(ambient.quotient(&relations)?.0)
}

/// `M* = Hom_A(M, A)`, realized inside `A^{r0}` as the solutions of the
/// dual relations. Returns the module and its embedding in `A^{r0}`.
pub fn a_dual_embedded(m: &Module) -> (Module, Mat, Presentation) {
    let pres = presentation(m);
    let alg = &m.algebra;
    let free = Module::free(alg, pres.rank());
    let constraints = pres.relations.transpose().k_matrix();
    let kernel = if constraints.rows() == 0 {
        Mat::identity(alg.field(), free.kdim())
    } else {
        constraints.kernel_basis()
    };
    let (dual, inclusion) = free.submodule(&kernel).expect("kernels of equivariant maps are submodules");
    (dual, inclusion, pres)
}

pub fn a_dual(m: &Module) -> Module {
    a_dual_embedded(m).0
}

/// `M^∨ = Hom_k(M, k)` with the contragredient action.
pub fn matlis_dual(m: &Module) -> Module {
    Module::trusted(&m.algebra, m.action.iter().map(Mat::transpose).collect())
}

/// `{ r : rho(r) = 0 }`.
pub fn annihilator(m: &Module) -> Ideal {
    let alg = &m.algebra;
    let n = alg.dim();
    let cols: Vec<Vec<Scalar>> = m.action.iter().map(|a| a.data().to_vec()).collect();
    let eval = Mat::from_columns(alg.field(), m.kdim() * m.kdim(), &cols);
    let kernel = if eval.rows() == 0 { Mat::identity(alg.field(), n) } else { eval.kernel_basis() };
    Ideal::from_closed_span(alg, &kernel.columns())
}

/// Settings for the isomorphism search.
#[derive(Clone, Copy, Debug)]
pub struct IsoSearch {
    pub seed: u64,
    /// Number of pseudo-random Hom elements tried before enumerating.
    pub samples: usize,
    /// Largest number of Hom elements enumerated exhaustively.
    pub budget: u64,
}

impl Default for IsoSearch {
    fn default() -> Self {
        IsoSearch { seed: DEFAULT_SEED, samples: 512, budget: 1 << 16 }
    }
}

#[derive(Clone, Debug)]
pub enum IsoOutcome {
    Iso(ModuleHom),
    NotIso,
    /// Invariants agree but the search budget ran out without a witness.
    Undetermined,
}

impl IsoOutcome {
    pub fn is_iso(&self) -> bool {
        matches!(self, IsoOutcome::Iso(_))
    }

    pub fn witness(&self) -> Option<&ModuleHom> {
        match self {
            IsoOutcome::Iso(h) => Some(h),
            _ => None,
        }
    }
}

fn action_ranks(m: &Module) -> Vec<usize> {
    m.action.iter().map(Mat::rank).collect()
}

pub fn is_iso(m: &Module, n: &Module) -> Result<IsoOutcome> {
    is_iso_with(m, n, &IsoSearch::default())
}

pub fn is_iso_with(m: &Module, n: &Module, search: &IsoSearch) -> Result<IsoOutcome> {
    m.same_algebra(n)?;
    if m.kdim() != n.kdim() {
        return Ok(IsoOutcome::NotIso);
    }
    if m.kdim() == 0 {
        return Ok(IsoOutcome::Iso(ModuleHom::trusted(m, n, Mat::zeros(m.field(), 0, 0))));
    }
    if m == n {
        return Ok(IsoOutcome::Iso(ModuleHom::trusted(m, n, Mat::identity(m.field(), m.kdim()))));
    }
    if minimal_generators(m).0 != minimal_generators(n).0 || action_ranks(m) != action_ranks(n) {
        return Ok(IsoOutcome::NotIso);
    }
    let basis = hom_space(m, n)?;
    let d = basis.len();
    let dmm = hom_dim(m, m)?;
    if d != dmm || hom_dim(n, n)? != dmm || hom_dim(n, m)? != dmm {
        return Ok(IsoOutcome::NotIso);
    }
    let f = m.field();
    let p = f.characteristic() as u64;
    let combine = |coeffs: &[Scalar]| -> Mat {
        let mut acc = Mat::zeros(f, n.kdim(), m.kdim());
        for (c, h) in coeffs.iter().zip(&basis) {
            acc.add_scaled(*c, h.mat());
        }
        acc
    };
    let total = (p as f64).powi(d as i32);
    let enumerate_first = d <= 8 && total <= search.budget as f64;
    if !enumerate_first {
        let mut rng = ChaCha8Rng::seed_from_u64(search.seed);
        for _ in 0..search.samples {
            let coeffs: Vec<Scalar> = (0..d).map(|_| rng.gen_range(0..p) as Scalar).collect();
            let candidate = combine(&coeffs);
            if candidate.is_invertible() {
                return Ok(IsoOutcome::Iso(ModuleHom::trusted(m, n, candidate)));
            }
        }
    }
    if total > search.budget as f64 {
        return Ok(IsoOutcome::Undetermined);
    }
    let mut coeffs = vec![0 as Scalar; d];
    loop {
        let mut k = 0;
        while k < d {
            coeffs[k] += 1;
            if (coeffs[k] as u64) < p {
                break;
            }
            coeffs[k] = 0;
            k += 1;
        }
        if k == d {
            break;
        }
        let candidate = combine(&coeffs);
        if candidate.is_invertible() {
            return Ok(IsoOutcome::Iso(ModuleHom::trusted(m, n, candidate)));
        }
    }
    Ok(IsoOutcome::NotIso)
}

/// A random invertible matrix from a seeded generator.
pub fn random_invertible(field: PrimeField, n: usize, rng: &mut impl Rng) -> Mat {
    let p = field.characteristic();
    loop {
        let m = Mat::from_fn(field, n, n, |_, _| rng.gen_range(0..p));
        if m.is_invertible() {
            return m;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{canonical_module, default_vars, socle};

    fn ci(p: u64, powers: &[u32]) -> Arc<Algebra> {
        let f = PrimeField::new(p).unwrap();
        Arc::new(Algebra::monomial_complete_intersection(f, &default_vars(powers.len()), powers).unwrap())
    }

    fn square_zero_xy() -> Arc<Algebra> {
        let f = PrimeField::new(2).unwrap();
        Arc::new(Algebra::monomial_quotient(f, &default_vars(2), &[vec![2, 0], vec![1, 1], vec![0, 2]]).unwrap())
    }

    fn cyc(a: &Arc<Algebra>, label: &str) -> Module {
        let i = a.label_index(label).unwrap();
        Module::cyclic_by_elements(a, &[a.basis_element(i)]).unwrap()
    }

    #[test]
    fn free_modules() {
        let a = ci(2, &[2, 2]);
        assert_eq!(Module::free(&a, 0).kdim(), 0);
        assert_eq!(Module::free(&a, 3).kdim(), 12);
        assert_eq!(Module::free(&ci(2, &[2]), 1).kdim(), 2);
        assert!(Module::new(&a, Module::free(&a, 2).action().to_vec()).is_ok());
    }

    #[test]
    fn module_axioms_enforced() {
        let a = ci(3, &[3]);
        let mut action = Module::free(&a, 1).action().to_vec();
        action[2] = Mat::zeros(a.field(), 3, 3);
        assert!(matches!(Module::new(&a, action), Err(Error::ModuleAxiom(_))));
    }

    #[test]
    fn hom_examples() {
        let a = ci(2, &[2]);
        let k = Module::residue_field(&a);
        let free = Module::free(&a, 1);
        assert_eq!(hom_dim(&free, &k).unwrap(), 1);
        assert_eq!(hom_dim(&k, &k).unwrap(), 1);
        assert_eq!(hom_dim(&k, &free).unwrap(), 1);
        let b = ci(3, &[2, 3]);
        let m = cyc(&b, "x");
        assert_eq!(hom_dim(&Module::free(&b, 1), &m).unwrap(), m.kdim());
    }

    #[test]
    fn hom_routes_agree() {
        for a in [ci(2, &[2, 2]), ci(3, &[4]), square_zero_xy()] {
            let mut mods = vec![Module::residue_field(&a), Module::free(&a, 1)];
            for i in 1..a.dim() {
                mods.push(Module::cyclic_by_elements(&a, &[a.basis_element(i)]).unwrap());
            }
            for m in &mods {
                for n in &mods {
                    let fast = hom_space(m, n).unwrap();
                    let slow = hom_space_by_commutation(m, n).unwrap();
                    assert_eq!(fast.len(), slow.len());
                    for h in &fast {
                        assert!(is_equivariant(m, n, h.mat()));
                    }
                    let stacked: Vec<Vec<Scalar>> = fast.iter().map(|h| h.mat().data().to_vec()).collect();
                    if !stacked.is_empty() {
                        let cols = Mat::from_columns(a.field(), m.kdim() * n.kdim(), &stacked);
                        assert_eq!(cols.rank(), fast.len());
                    }
                }
            }
        }
    }

    #[test]
    fn tensor_examples() {
        let a = ci(3, &[4]);
        let k = Module::residue_field(&a);
        assert_eq!(tensor(&k, &k).unwrap().kdim(), 1);
        let ax = cyc(&a, "x");
        assert_eq!(tensor(&ax, &ax).unwrap().kdim(), 1);
        let ax2 = cyc(&a, "x^2");
        let free = Module::free(&a, 1);
        let t = tensor(&free, &ax2).unwrap();
        assert!(is_iso(&t, &ax2).unwrap().is_iso());
        assert_eq!(tensor(&ax2, &ax).unwrap().kdim(), tensor(&ax, &ax2).unwrap().kdim());
    }

    #[test]
    fn duals() {
        let a = ci(2, &[2]);
        let k = Module::residue_field(&a);
        let ks = a_dual(&k);
        assert_eq!(ks.kdim(), 1);
        assert!(is_iso(&ks, &k).unwrap().is_iso());
        assert_eq!(a_dual(&Module::zero(&a)).kdim(), 0);
        let free = Module::free(&a, 1);
        assert!(is_iso(&a_dual(&free), &free).unwrap().is_iso());
        let m = cyc(&ci(3, &[4]), "x");
        assert_eq!(matlis_dual(&matlis_dual(&m)), m);
    }

    #[test]
    fn canonical_module_detects_gorenstein() {
        let a = ci(2, &[2]);
        assert!(is_iso(&canonical_module(&a), &Module::free(&a, 1)).unwrap().is_iso());
        let b = ci(5, &[3, 3]);
        assert!(is_iso(&canonical_module(&b), &Module::free(&b, 1)).unwrap().is_iso());
        let c = square_zero_xy();
        let w = canonical_module(&c);
        assert_eq!(w.kdim(), 3);
        assert_eq!(minimal_generators(&w).0, 2);
    }

    #[test]
    fn minimal_generator_counts() {
        let a = ci(2, &[2, 2]);
        assert_eq!(minimal_generators(&Module::free(&a, 3)).0, 3);
        assert_eq!(minimal_generators(&Module::residue_field(&a)).0, 1);
        let free = Module::free(&a, 1);
        let radical = Mat::from_columns(a.field(), 4, a.radical_basis());
        let (max, _) = free.submodule(&radical).unwrap();
        assert_eq!(minimal_generators(&max).0, 2);
        let k = Module::residue_field(&a);
        assert_eq!(minimal_generators(&k.direct_sum(&Module::free(&a, 2)).unwrap()).0, 3);
    }

    #[test]
    fn annihilators() {
        let a = ci(2, &[2, 2]);
        assert_eq!(annihilator(&Module::free(&a, 1)).dim(), 0);
        assert_eq!(annihilator(&Module::residue_field(&a)).dim(), 3);
        let ax = cyc(&a, "x");
        let x = Ideal::generated_by(&a, &[a.basis_element(1)]).unwrap();
        assert_eq!(annihilator(&ax), x);
    }

    #[test]
    fn sub_and_quotient() {
        let a = ci(2, &[2]);
        let free = Module::free(&a, 1);
        let soc = Mat::from_columns(a.field(), 2, socle(&a).basis());
        let (q, _) = free.quotient(&soc).unwrap();
        assert_eq!(q, Module::residue_field(&a));
        let not_invariant = Mat::from_columns(a.field(), 2, &[vec![1, 0]]);
        assert_eq!(free.quotient(&not_invariant).unwrap_err(), Error::NotInvariant);

        let b = ci(3, &[4]);
        let fb = Module::free(&b, 1);
        let kernel_x = b.left_mul_basis(1).kernel_basis();
        let (sub, _) = fb.submodule(&kernel_x).unwrap();
        assert!(is_iso(&sub, &Module::residue_field(&b)).unwrap().is_iso());
        let m = cyc(&b, "x");
        assert_eq!(m.direct_sum(&Module::zero(&b)).unwrap(), m);
    }

    #[test]
    fn iso_examples() {
        let a = ci(3, &[4]);
        let m = cyc(&a, "x^2");
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let p = random_invertible(a.field(), m.kdim(), &mut rng);
        let conj = m.change_basis(&p).unwrap();
        let out = is_iso(&m, &conj).unwrap();
        assert!(out.is_iso());
        let w = out.witness().unwrap();
        assert!(is_equivariant(&m, &conj, w.mat()));

        let b = ci(2, &[2]);
        assert!(!is_iso(&Module::residue_field(&b), &Module::free(&b, 1)).unwrap().is_iso());

        // (x) ⊂ k[x]/(x^4) is isomorphic to A/(x^3).
        let free = Module::free(&a, 1);
        let ideal_x = Ideal::generated_by(&a, &[a.basis_element(1)]).unwrap();
        let (sub, _) = free.submodule(&Mat::from_columns(a.field(), 4, ideal_x.basis())).unwrap();
        assert!(is_iso(&sub, &cyc(&a, "x^3")).unwrap().is_iso());
        assert!(!is_iso(&cyc(&a, "x"), &cyc(&a, "x^3")).unwrap().is_iso());
    }

    #[test]
    fn free_map_composition_matches_matrices() {
        let a = ci(3, &[2, 2]);
        let x = a.basis_element(1);
        let y = a.basis_element(2);
        let d1 = FreeMap::from_images(&a, 2, &[[x.clone(), y.clone()].concat(), [y.clone(), x.clone()].concat()]);
        let d2 = d1.transpose();
        assert_eq!(d1.compose(&d2).k_matrix(), d1.k_matrix().mul(&d2.k_matrix()));
        assert!(d1.is_minimal());
        let k = Module::residue_field(&a);
        assert!(d1.tensor_matrix(&k).is_zero());
    }
}

//! Finite-dimensional commutative local algebras over a prime field,
//! presented by structure constants, and their ideals.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exactla::{Echelon, Mat, PrimeField, Scalar};
use crate::modrep::{self, Module};

/// Largest algebra dimension accepted by the constructors.
pub const MAX_ALGEBRA_DIM: usize = 64;

/// A validated commutative local algebra `A` with residue field `F_p`.
///
/// Basis elements are `b_0..b_{n-1}`; `mul[i][j]` holds the coordinates of
/// `b_i * b_j`. The radical, its minimal generators and the socle are
/// computed once at construction.
#[derive(Clone)]
pub struct Algebra {
    field: PrimeField,
    labels: Vec<String>,
    mul: Vec<Vec<Vec<Scalar>>>,
    unit: Vec<Scalar>,
    left: Vec<Mat>,
    radical: Vec<Vec<Scalar>>,
    radical_generators: Vec<Vec<Scalar>>,
    socle: Vec<Vec<Scalar>>,
    augmentation: Vec<Scalar>,
}

impl PartialEq for Algebra {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.labels == other.labels && self.mul == other.mul && self.unit == other.unit
    }
}

impl Eq for Algebra {}

impl fmt::Debug for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Algebra")
            .field("field", &self.field)
            .field("labels", &self.labels)
            .field("socle_dim", &self.socle.len())
            .finish()
    }
}

impl Algebra {
    /// Validates structure constants exhaustively and builds the algebra.
    pub fn from_structure_constants(
        field: PrimeField,
        labels: Vec<String>,
        mul: Vec<Vec<Vec<Scalar>>>,
        unit: Vec<Scalar>,
    ) -> Result<Algebra> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::InvalidPresentation("algebra needs at least one basis element".into()));
        }
        if n > MAX_ALGEBRA_DIM {
            return Err(Error::TooLarge(format!("algebra dimension {n} > {MAX_ALGEBRA_DIM}")));
        }
        if let Some(dup) = labels.iter().enumerate().find_map(|(i, l)| labels[..i].contains(l).then_some(l)) {
            return Err(Error::InvalidPresentation(format!("duplicate basis label {dup:?}")));
        }
        if unit.len() != n || mul.len() != n || mul.iter().any(|r| r.len() != n || r.iter().any(|v| v.len() != n)) {
            return Err(Error::Shape(format!("structure constants must be {n}x{n}x{n} with a length-{n} unit")));
        }
        let p = field.characteristic();
        let mul: Vec<Vec<Vec<Scalar>>> =
            mul.into_iter().map(|r| r.into_iter().map(|v| v.into_iter().map(|x| x % p).collect()).collect()).collect();
        let unit: Vec<Scalar> = unit.into_iter().map(|x| x % p).collect();

        for i in 0..n {
            for j in (i + 1)..n {
                if mul[i][j] != mul[j][i] {
                    return Err(Error::NonCommutative { i, j });
                }
            }
        }

        let left: Vec<Mat> = (0..n).map(|i| Mat::from_fn(field, n, n, |r, c| mul[i][c][r])).collect();
        let mut alg = Algebra {
            field,
            labels,
            mul,
            unit,
            left,
            radical: Vec::new(),
            radical_generators: Vec::new(),
            socle: Vec::new(),
            augmentation: Vec::new(),
        };

        for j in 0..n {
            if alg.mul_elems(&alg.unit, &basis_vector(n, j)) != basis_vector(n, j) {
                return Err(Error::BadUnit(j));
            }
        }

        for i in 0..n {
            for j in 0..n {
                let bij = &alg.mul[i][j];
                for k in 0..n {
                    let lhs = alg.mul_elems(bij, &basis_vector(n, k));
                    let rhs = alg.left[i].mul_vec(&alg.mul[j][k]);
                    if lhs != rhs {
                        return Err(Error::NonAssociative { i, j, k });
                    }
                }
            }
        }

        alg.radical = alg.nilradical();
        if alg.radical.len() + 1 != n {
            return Err(Error::NonLocal { codim: n - alg.radical.len() });
        }
        alg.augmentation = alg.compute_augmentation();
        alg.radical_generators = alg.compute_radical_generators();
        alg.socle = alg.compute_socle();
        Ok(alg)
    }

    /// `k[x_1..x_r] / I` for a monomial ideal `I` containing a pure power of
    /// every variable. `generators` are exponent vectors of the monomial
    /// generators of `I`.
    pub fn monomial_quotient(field: PrimeField, vars: &[String], generators: &[Vec<u32>]) -> Result<Algebra> {
        let r = vars.len();
        if generators.iter().any(|g| g.len() != r) {
            return Err(Error::Shape(format!("monomial exponent vectors must have length {r}")));
        }
        if generators.iter().any(|g| g.iter().all(|&e| e == 0)) {
            return Err(Error::ImproperIdeal);
        }
        let mut bound = Vec::with_capacity(r);
        for v in 0..r {
            let pure = generators
                .iter()
                .filter(|g| g.iter().enumerate().all(|(w, &e)| (w == v) == (e > 0)))
                .map(|g| g[v])
                .min();
            match pure {
                Some(a) => bound.push(a),
                None => {
                    return Err(Error::InvalidPresentation(format!(
                        "ideal is not primary to the maximal ideal: no pure power of {}",
                        vars[v]
                    )))
                }
            }
        }
        let total: u128 = bound.iter().map(|&a| a as u128).product();
        if total > 4096 {
            return Err(Error::TooLarge(format!("monomial box of size {total}")));
        }

        let divisible = |m: &[u32]| generators.iter().any(|g| g.iter().zip(m).all(|(a, b)| a <= b));
        let mut monomials: Vec<Vec<u32>> = Vec::new();
        let mut cur = vec![0u32; r];
        loop {
            if !divisible(&cur) {
                monomials.push(cur.clone());
            }
            let mut v = 0;
            while v < r {
                cur[v] += 1;
                if cur[v] < bound[v] {
                    break;
                }
                cur[v] = 0;
                v += 1;
            }
            if v == r {
                break;
            }
        }
        monomials.sort_by(|a, b| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            da.cmp(&db).then_with(|| b.cmp(a))
        });
        let n = monomials.len();
        if n > MAX_ALGEBRA_DIM {
            return Err(Error::TooLarge(format!("algebra dimension {n} > {MAX_ALGEBRA_DIM}")));
        }

        let labels: Vec<String> = monomials.iter().map(|m| monomial_label(vars, m)).collect();
        let mut mul = vec![vec![vec![0; n]; n]; n];
        for i in 0..n {
            for j in 0..n {
                let prod: Vec<u32> = monomials[i].iter().zip(&monomials[j]).map(|(a, b)| a + b).collect();
                if let Some(k) = monomials.iter().position(|m| *m == prod) {
                    mul[i][j][k] = 1;
                }
            }
        }
        let unit = basis_vector(n, 0);
        Algebra::from_structure_constants(field, labels, mul, unit)
    }

    /// `k[x_1..x_r]/(x_1^{a_1}, .., x_r^{a_r})`.
    pub fn monomial_complete_intersection(field: PrimeField, vars: &[String], powers: &[u32]) -> Result<Algebra> {
        if vars.len() != powers.len() {
            return Err(Error::Shape("one power per variable".into()));
        }
        if let Some(&a) = powers.iter().find(|&&a| a < 2) {
            return Err(Error::InvalidPresentation(format!("exponent {a} < 2")));
        }
        let gens: Vec<Vec<u32>> = (0..powers.len())
            .map(|v| (0..powers.len()).map(|w| if v == w { powers[v] } else { 0 }).collect())
            .collect();
        Algebra::monomial_quotient(field, vars, &gens)
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn structure_constants(&self) -> &[Vec<Vec<Scalar>>] {
        &self.mul
    }

    pub fn unit(&self) -> &[Scalar] {
        &self.unit
    }

    pub fn basis_element(&self, i: usize) -> Vec<Scalar> {
        basis_vector(self.dim(), i)
    }

    /// Matrix of multiplication by `b_i`.
    pub fn left_mul_basis(&self, i: usize) -> &Mat {
        &self.left[i]
    }

    /// Matrix of multiplication by an arbitrary element.
    pub fn left_mul(&self, a: &[Scalar]) -> Mat {
        let n = self.dim();
        let mut out = Mat::zeros(self.field, n, n);
        for (i, &c) in a.iter().enumerate() {
            out.add_scaled(c, &self.left[i]);
        }
        out
    }

    pub fn mul_elems(&self, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        let f = self.field;
        let n = self.dim();
        let mut out = vec![0; n];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                if bj == 0 {
                    continue;
                }
                let s = f.mul(ai, bj);
                for (slot, &c) in out.iter_mut().zip(&self.mul[i][j]) {
                    if c != 0 {
                        *slot = f.mul_add(*slot, s, c);
                    }
                }
            }
        }
        out
    }

    pub fn pow_elem(&self, a: &[Scalar], mut e: u64) -> Vec<Scalar> {
        let mut acc = self.unit.clone();
        let mut base = a.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_elems(&acc, &base);
            }
            base = self.mul_elems(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Image of `a` in the residue field.
    pub fn residue(&self, a: &[Scalar]) -> Scalar {
        let f = self.field;
        a.iter().zip(&self.augmentation).fold(0, |acc, (&x, &y)| f.mul_add(acc, x, y))
    }

    /// The residue map `A -> k` as a `1 x n` matrix.
    pub fn residue_row(&self) -> Mat {
        Mat::from_columns(self.field, self.dim(), std::slice::from_ref(&self.augmentation)).transpose()
    }

    pub fn is_unit(&self, a: &[Scalar]) -> bool {
        self.residue(a) != 0
    }

    pub fn inverse(&self, a: &[Scalar]) -> Option<Vec<Scalar>> {
        if !self.is_unit(a) {
            return None;
        }
        let l = self.left_mul(a);
        let rhs = Mat::from_columns(self.field, self.dim(), std::slice::from_ref(&self.unit));
        l.solve(&rhs).map(|x| x.col(0))
    }

    /// Echelon basis of the maximal ideal.
    pub fn radical_basis(&self) -> &[Vec<Scalar>] {
        &self.radical
    }

    /// Lifts of a basis of `m/m^2`; they generate `m` as an ideal.
    pub fn radical_generators(&self) -> &[Vec<Scalar>] {
        &self.radical_generators
    }

    pub fn socle_basis(&self) -> &[Vec<Scalar>] {
        &self.socle
    }

    pub fn socle_dim(&self) -> usize {
        self.socle.len()
    }

    /// An Artinian local algebra is Gorenstein iff its socle is one-dimensional.
    pub fn is_gorenstein(&self) -> bool {
        self.socle.len() == 1
    }

    pub fn require_gorenstein(&self) -> Result<()> {
        if self.is_gorenstein() {
            Ok(())
        } else {
            Err(Error::NotGorenstein { socle_dim: self.socle.len() })
        }
    }

    fn nilradical(&self) -> Vec<Vec<Scalar>> {
        let n = self.dim();
        let f = self.field;
        let p = f.characteristic() as u64;
        let kernel = if p > n as u64 {
            // Trace-form radical: a is nilpotent iff Tr(L_{a b}) = 0 for all b,
            // valid once p exceeds the dimension.
            let traces: Vec<Scalar> =
                (0..n).map(|k| (0..n).fold(0, |acc, d| f.add(acc, self.left[k].get(d, d)))).collect();
            let form = Mat::from_fn(f, n, n, |i, j| {
                self.mul[i][j].iter().zip(&traces).fold(0, |acc, (&c, &t)| f.mul_add(acc, c, t))
            });
            form.kernel_basis()
        } else {
            // Frobenius is F_p-linear on a commutative algebra of characteristic p,
            // and every nilpotent element dies under its k-th power once p^k >= n.
            let frob = Mat::from_columns(f, n, &(0..n).map(|i| self.pow_elem(&basis_vector(n, i), p)).collect::<Vec<_>>());
            let mut power = frob.clone();
            let mut reach = p;
            while reach < n as u64 {
                power = frob.mul(&power);
                reach *= p;
            }
            power.kernel_basis()
        };
        kernel.transpose().rref().basis_rows()
    }

    fn compute_augmentation(&self) -> Vec<Scalar> {
        let n = self.dim();
        let f = self.field;
        let eps = if self.radical.is_empty() {
            vec![1; n]
        } else {
            let rows: Vec<Vec<i64>> = self.radical.iter().map(|r| r.iter().map(|&x| x as i64).collect()).collect();
            let r = Mat::from_rows(f, &rows).expect("rectangular radical basis");
            r.kernel_basis().col(0)
        };
        let at_unit = eps.iter().zip(&self.unit).fold(0, |acc, (&x, &y)| f.mul_add(acc, x, y));
        let inv = f.inv(at_unit);
        eps.into_iter().map(|x| f.mul(x, inv)).collect()
    }

    fn compute_radical_generators(&self) -> Vec<Vec<Scalar>> {
        let n = self.dim();
        let mut span = Echelon::new(self.field, n);
        for a in &self.radical {
            for b in &self.radical {
                span.insert(&self.mul_elems(a, b));
            }
        }
        let mut gens = Vec::new();
        for a in &self.radical {
            if span.insert(a) {
                gens.push(a.clone());
            }
        }
        gens
    }

    fn compute_socle(&self) -> Vec<Vec<Scalar>> {
        let n = self.dim();
        if self.radical_generators.is_empty() {
            return Mat::identity(self.field, n).rref().basis_rows();
        }
        let mut stacked = self.left_mul(&self.radical_generators[0]);
        for g in &self.radical_generators[1..] {
            stacked = stacked.vstack(&self.left_mul(g));
        }
        stacked.kernel_basis().transpose().rref().basis_rows()
    }
}

pub(crate) fn basis_vector(n: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

fn monomial_label(vars: &[String], exps: &[u32]) -> String {
    let mut s = String::new();
    for (v, &e) in vars.iter().zip(exps) {
        match e {
            0 => {}
            1 => s.push_str(v),
            _ => s.push_str(&format!("{v}^{e}")),
        }
    }
    if s.is_empty() {
        "1".into()
    } else {
        s
    }
}

/// Default variable names `x, y, z, w`, then `x1, x2, ..`.
pub fn default_vars(count: usize) -> Vec<String> {
    const NAMES: [&str; 4] = ["x", "y", "z", "w"];
    if count <= NAMES.len() {
        NAMES[..count].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=count).map(|i| format!("x{i}")).collect()
    }
}

/// An ideal of an algebra, stored as a reduced echelon basis of its subspace.
#[derive(Clone)]
pub struct Ideal {
    algebra: Arc<Algebra>,
    basis: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl fmt::Debug for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Ideal").field("basis", &self.basis).finish()
    }
}

impl PartialEq for Ideal {
    fn eq(&self, other: &Self) -> bool {
        *self.algebra == *other.algebra && self.basis == other.basis
    }
}

impl Ideal {
    /// The ideal generated by the given elements.
    pub fn generated_by(algebra: &Arc<Algebra>, generators: &[Vec<Scalar>]) -> Result<Ideal> {
        let n = algebra.dim();
        if generators.iter().any(|g| g.len() != n) {
            return Err(Error::Shape(format!("ideal generators must have length {n}")));
        }
        let mut span = Vec::new();
        for g in generators {
            for i in 0..n {
                span.push(algebra.left_mul_basis(i).mul_vec(g));
            }
        }
        Ok(Ideal::from_closed_span(algebra, &span))
    }

    /// Span of vectors already known to be closed under multiplication.
    pub(crate) fn from_closed_span(algebra: &Arc<Algebra>, vectors: &[Vec<Scalar>]) -> Ideal {
        let n = algebra.dim();
        let rref = if vectors.is_empty() {
            Mat::zeros(algebra.field(), 0, n).rref()
        } else {
            Mat::from_columns(algebra.field(), n, vectors).transpose().rref()
        };
        Ideal { algebra: algebra.clone(), basis: rref.basis_rows(), pivots: rref.pivots }
    }

    pub fn zero(algebra: &Arc<Algebra>) -> Ideal {
        Ideal::from_closed_span(algebra, &[])
    }

    pub fn maximal(algebra: &Arc<Algebra>) -> Ideal {
        Ideal::from_closed_span(algebra, algebra.radical_basis())
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Residue of `v` modulo the ideal, in ambient coordinates.
    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        let f = self.algebra.field();
        let mut v = v.to_vec();
        for (row, &pc) in self.basis.iter().zip(&self.pivots) {
            let c = v[pc];
            if c != 0 {
                let neg = f.neg(c);
                for (slot, &r) in v.iter_mut().zip(row) {
                    if r != 0 {
                        *slot = f.mul_add(*slot, neg, r);
                    }
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    pub fn is_subset_of(&self, other: &Ideal) -> bool {
        self.basis.iter().all(|b| other.contains(b))
    }

    pub fn is_proper(&self) -> bool {
        !self.contains(self.algebra.unit())
    }

    /// `(0 : I) = { r : r I = 0 }`.
    pub fn annihilator(&self) -> Ideal {
        let alg = &self.algebra;
        let n = alg.dim();
        if self.basis.is_empty() {
            return Ideal::from_closed_span(alg, &(0..n).map(|i| basis_vector(n, i)).collect::<Vec<_>>());
        }
        let mut stacked = alg.left_mul(&self.basis[0]);
        for b in &self.basis[1..] {
            stacked = stacked.vstack(&alg.left_mul(b));
        }
        Ideal::from_closed_span(alg, &stacked.kernel_basis().columns())
    }
}

/// `(0 : I)`.
pub fn annihilator_ideal(ideal: &Ideal) -> Ideal {
    ideal.annihilator()
}

/// Socle `(0 : m)` as an ideal.
pub fn socle(algebra: &Arc<Algebra>) -> Ideal {
    Ideal::from_closed_span(algebra, algebra.socle_basis())
}

pub fn is_gorenstein(algebra: &Algebra) -> bool {
    algebra.is_gorenstein()
}

/// The canonical module, which at Krull dimension zero is the Matlis dual
/// `Hom_k(A, k)` of the regular module and also an injective hull of `k`.
pub fn canonical_module(algebra: &Arc<Algebra>) -> Module {
    modrep::matlis_dual(&Module::free(algebra, 1))
}

/// `A/I` with the projection on coordinates.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub algebra: Arc<Algebra>,
    pub ideal: Ideal,
    kept: Vec<usize>,
}

impl Quotient {
    /// Basis indices of the parent algebra that survive in the quotient.
    pub fn kept_indices(&self) -> &[usize] {
        &self.kept
    }

    pub fn project(&self, v: &[Scalar]) -> Vec<Scalar> {
        let r = self.ideal.reduce(v);
        self.kept.iter().map(|&k| r[k]).collect()
    }

    /// Lift of a quotient element along the kept basis indices.
    pub fn lift(&self, v: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![0; self.ideal.algebra().dim()];
        for (&k, &x) in self.kept.iter().zip(v) {
            out[k] = x;
        }
        out
    }
}

pub fn quotient_algebra(algebra: &Arc<Algebra>, ideal: &Ideal) -> Result<Quotient> {
    if !Arc::ptr_eq(algebra, ideal.algebra()) && **algebra != **ideal.algebra() {
        return Err(Error::AlgebraMismatch);
    }
    if !ideal.is_proper() {
        return Err(Error::ImproperIdeal);
    }
    let n = algebra.dim();
    let kept: Vec<usize> = (0..n).filter(|c| !ideal.pivots().contains(c)).collect();
    let m = kept.len();
    let mut mul = vec![vec![vec![0; m]; m]; m];
    for (a, &i) in kept.iter().enumerate() {
        for (b, &j) in kept.iter().enumerate() {
            let prod = ideal.reduce(&algebra.structure_constants()[i][j]);
            mul[a][b] = kept.iter().map(|&k| prod[k]).collect();
        }
    }
    let unit_r = ideal.reduce(algebra.unit());
    let unit: Vec<Scalar> = kept.iter().map(|&k| unit_r[k]).collect();
    let labels = kept.iter().map(|&k| algebra.labels()[k].clone()).collect();
    let quotient = Algebra::from_structure_constants(algebra.field(), labels, mul, unit)?;
    Ok(Quotient { algebra: Arc::new(quotient), ideal: ideal.clone(), kept })
}

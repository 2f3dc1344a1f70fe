//! The built-in test algebras and the modules and ideals checked over them.

use std::sync::Arc;

use crate::algebra::{default_vars, quotient_algebra, Algebra, Ideal};
use crate::exactla::PrimeField;
use crate::modrep::Module;

#[derive(Clone, Debug)]
pub struct NamedModule {
    pub name: String,
    pub module: Module,
}

impl NamedModule {
    pub fn new(name: impl Into<String>, module: Module) -> NamedModule {
        NamedModule { name: name.into(), module }
    }
}

#[derive(Clone, Debug)]
pub struct NamedAlgebra {
    pub name: String,
    pub algebra: Arc<Algebra>,
}

fn field(p: u64) -> PrimeField {
    PrimeField::new(p).expect("corpus characteristics are prime")
}

/// `F_p[x_1..]/(x_1^{a_1}, ..)`.
pub fn complete_intersection(p: u64, powers: &[u32]) -> Arc<Algebra> {
    let vars = default_vars(powers.len());
    Arc::new(Algebra::monomial_complete_intersection(field(p), &vars, powers).expect("valid corpus algebra"))
}

/// `F_2[x,y]/(x^2, xy, y^2)`, which is not Gorenstein.
pub fn square_zero_plane() -> Arc<Algebra> {
    let gens = vec![vec![2, 0], vec![1, 1], vec![0, 2]];
    Arc::new(Algebra::monomial_quotient(field(2), &default_vars(2), &gens).expect("valid corpus algebra"))
}

pub fn builtin_algebras() -> Vec<NamedAlgebra> {
    vec![
        NamedAlgebra { name: "F2[x]/(x^2)".into(), algebra: complete_intersection(2, &[2]) },
        NamedAlgebra { name: "F3[x]/(x^4)".into(), algebra: complete_intersection(3, &[4]) },
        NamedAlgebra { name: "F2[x,y]/(x^2,y^2)".into(), algebra: complete_intersection(2, &[2, 2]) },
        NamedAlgebra { name: "F5[x,y]/(x^3,y^3)".into(), algebra: complete_intersection(5, &[3, 3]) },
        NamedAlgebra { name: "F2[x,y]/(x^2,xy,y^2)".into(), algebra: square_zero_plane() },
    ]
}

/// Basis elements lying in the maximal ideal, with their labels.
fn radical_basis_elements(algebra: &Algebra) -> Vec<(String, Vec<u32>)> {
    (0..algebra.dim())
        .map(|i| (algebra.labels()[i].clone(), algebra.basis_element(i)))
        .filter(|(_, v)| algebra.residue(v) == 0)
        .collect()
}

/// `k`, `A`, and `A/(b)` for every basis element `b` of the maximal ideal.
pub fn corpus_modules(algebra: &Arc<Algebra>) -> Vec<NamedModule> {
    let mut out = vec![NamedModule::new("k", Module::residue_field(algebra)), NamedModule::new("A", Module::free(algebra, 1))];
    for (label, v) in radical_basis_elements(algebra) {
        let m = Module::cyclic_by_elements(algebra, &[v]).expect("principal ideals are proper");
        out.push(NamedModule::new(format!("A/({label})"), m));
    }
    out
}

/// The zero ideal and the principal ideals `(b)` with `A/(b)` Gorenstein.
pub fn gorenstein_ideals(algebra: &Arc<Algebra>) -> Vec<(String, Ideal)> {
    let mut out = vec![("(0)".to_string(), Ideal::zero(algebra))];
    for (label, v) in radical_basis_elements(algebra) {
        let ideal = Ideal::generated_by(algebra, &[v]).expect("valid generator");
        if quotient_algebra(algebra, &ideal).map(|q| q.algebra.is_gorenstein()).unwrap_or(false) {
            out.push((format!("({label})"), ideal));
        }
    }
    out
}

//! The linkage operator `λ = Ω Tr` over quotient algebras `B = A/c`, the
//! dagger dual, and chains of links.

use std::sync::Arc;

use crate::algebra::{quotient_algebra, Algebra, Ideal, Quotient};
use crate::error::{Error, Result};
use crate::homalg::is_stable;
use crate::modrep::{self, IsoOutcome, IsoSearch, Module, ModuleHom};

/// A linking ideal `c` of the ambient algebra with its quotient `B = A/c`.
#[derive(Clone, Debug)]
pub struct LinkageDatum {
    pub ambient: Arc<Algebra>,
    pub quotient: Quotient,
    pub gorenstein: bool,
}

impl LinkageDatum {
    pub fn new(ambient: &Arc<Algebra>, ideal: &Ideal) -> Result<LinkageDatum> {
        let quotient = quotient_algebra(ambient, ideal)?;
        let gorenstein = quotient.algebra.is_gorenstein();
        Ok(LinkageDatum { ambient: ambient.clone(), quotient, gorenstein })
    }

    /// Linkage by the zero ideal.
    pub fn zero(ambient: &Arc<Algebra>) -> LinkageDatum {
        LinkageDatum::new(ambient, &Ideal::zero(ambient)).expect("the zero ideal is proper")
    }

    pub fn ideal(&self) -> &Ideal {
        &self.quotient.ideal
    }

    pub fn base(&self) -> &Arc<Algebra> {
        &self.quotient.algebra
    }

    pub fn annihilates(&self, m: &Module) -> bool {
        self.ideal().basis().iter().all(|c| m.act(c).is_zero())
    }

    /// The `A`-module `M` viewed as a `B`-module.
    pub fn restrict(&self, m: &Module) -> Result<Module> {
        if **m.algebra() != *self.ambient {
            return Err(Error::AlgebraMismatch);
        }
        if !self.annihilates(m) {
            return Err(Error::AnnihilatorViolation);
        }
        let action = self.quotient.kept_indices().iter().map(|&k| m.action()[k].clone()).collect();
        Module::new(self.base(), action)
    }

    /// The `B`-module `M` viewed as an `A`-module through `A -> B`.
    pub fn inflate(&self, m: &Module) -> Result<Module> {
        if **m.algebra() != **self.base() {
            return Err(Error::AlgebraMismatch);
        }
        let action = (0..self.ambient.dim())
            .map(|i| m.act(&self.quotient.project(&self.ambient.basis_element(i))))
            .collect();
        Module::new(&self.ambient, action)
    }
}

/// `λM = Ω Tr M`, realized as the image of the dual of a minimal
/// presentation `P_0* -> P_1*`.
pub fn link_operator(m: &Module) -> Result<Module> {
    if !is_stable(m) {
        return Err(Error::NotStable);
    }
    let pres = modrep::presentation(m);
    let dual = pres.relations.transpose();
    let free = Module::free(m.algebra(), dual.rows());
    Ok(free.submodule(&dual.k_matrix())?.0)
}

/// `M† = Hom_B(M, B)` over a Gorenstein algebra.
pub fn dagger(m: &Module) -> Result<Module> {
    m.algebra().require_gorenstein()?;
    Ok(modrep::a_dual(m))
}

/// Outcome of a linkage test with the isomorphisms found.
#[derive(Clone, Debug)]
pub struct LinkCheck {
    pub linked: bool,
    /// `M -> λN` over `B`.
    pub forward: Option<ModuleHom>,
    /// `N -> λM` over `B`.
    pub backward: Option<ModuleHom>,
    /// Some isomorphism search ran out of budget.
    pub undetermined: bool,
    /// Why the test failed before any search, if it did.
    pub reason: Option<String>,
}

pub fn is_linked(m: &Module, n: &Module, datum: &LinkageDatum) -> Result<LinkCheck> {
    is_linked_with(m, n, datum, &IsoSearch::default())
}

pub fn is_linked_with(m: &Module, n: &Module, datum: &LinkageDatum, search: &IsoSearch) -> Result<LinkCheck> {
    let mb = datum.restrict(m)?;
    let nb = datum.restrict(n)?;
    let rejected = |reason: &str| LinkCheck {
        linked: false,
        forward: None,
        backward: None,
        undetermined: false,
        reason: Some(reason.into()),
    };
    if !is_stable(&mb) || !is_stable(&nb) {
        return Ok(rejected("a module has a free summand over the quotient"));
    }
    let lambda_n = link_operator(&nb)?;
    let lambda_m = link_operator(&mb)?;
    let fwd = modrep::is_iso_with(&mb, &lambda_n, search)?;
    let bwd = modrep::is_iso_with(&nb, &lambda_m, search)?;
    let undetermined = matches!(fwd, IsoOutcome::Undetermined) || matches!(bwd, IsoOutcome::Undetermined);
    let forward = fwd.witness().cloned();
    let backward = bwd.witness().cloned();
    Ok(LinkCheck { linked: forward.is_some() && backward.is_some(), forward, backward, undetermined, reason: None })
}

/// `M, λ_1 M, λ_2 λ_1 M, ..` where `λ_j` links over the `j`-th quotient.
/// Every entry is returned as a module over the ambient algebra.
pub fn even_link_chain(m: &Module, data: &[LinkageDatum]) -> Result<Vec<Module>> {
    let mut chain = vec![m.clone()];
    let mut current = m.clone();
    for datum in data {
        let over_base = datum.restrict(&current)?;
        current = datum.inflate(&link_operator(&over_base)?)?;
        chain.push(current.clone());
    }
    Ok(chain)
}

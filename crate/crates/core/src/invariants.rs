//! Stable Betti and Bass numbers, complexity estimates, and the
//! G-dimension and grade tests.

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::exactla::{Mat, Scalar};
use crate::homalg::{self, minimal_free_resolution, ordinary_ext_dims, Period, Session, TateTable};
use crate::modrep::{self, Module};

/// Stable Betti numbers `dim Ext^i(M, k)` and stable Bass numbers
/// `dim Ext^i(k, M)` over a window, plus ordinary Betti numbers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiBassProfile {
    pub kind: String,
    pub lo: i64,
    pub hi: i64,
    pub stable_betti: Vec<usize>,
    pub stable_bass: Vec<usize>,
    /// `beta_0 .. beta_max(hi, 0)`.
    pub ordinary_betti: Vec<usize>,
    pub period: Option<Period>,
}

impl BettiBassProfile {
    pub fn betti(&self, i: i64) -> Option<usize> {
        (self.lo..=self.hi).contains(&i).then(|| self.stable_betti[(i - self.lo) as usize])
    }

    pub fn bass(&self, i: i64) -> Option<usize> {
        (self.lo..=self.hi).contains(&i).then(|| self.stable_bass[(i - self.lo) as usize])
    }
}

pub fn profile(m: &Module, lo: i64, hi: i64) -> Result<BettiBassProfile> {
    profile_in(&Session::default(), m, lo, hi)
}

pub fn profile_in(session: &Session, m: &Module, lo: i64, hi: i64) -> Result<BettiBassProfile> {
    let k = Module::residue_field(m.algebra());
    let betti: TateTable = session.tate_ext(m, &k, lo, hi)?;
    let bass: TateTable = session.tate_ext(&k, m, lo, hi)?;
    let ordinary_betti = homalg::betti_numbers(m, hi.max(0) as usize);
    Ok(BettiBassProfile {
        kind: "profile".into(),
        lo,
        hi,
        stable_betti: betti.dims,
        stable_bass: bass.dims,
        ordinary_betti,
        period: session.periodicity(m).map(|p| Period { p: p.period, from: p.shift as i64 }),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComplexityBound {
    Exactly(usize),
    AtLeast(usize),
}

/// Complexity read off `beta_0 .. beta_horizon`; only `certified` values
/// are known to hold asymptotically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexityEstimate {
    pub bound: ComplexityBound,
    pub horizon: usize,
    pub certified: bool,
}

impl ComplexityEstimate {
    pub fn value(&self) -> Option<usize> {
        match self.bound {
            ComplexityBound::Exactly(c) => Some(c),
            ComplexityBound::AtLeast(_) => None,
        }
    }
}

pub const DEFAULT_HORIZON: usize = 12;

/// Number of equal trailing entries a difference row needs before its
/// degree is accepted.
const STABLE_RUN: usize = 3;

fn tail_is_periodic(seq: &[usize]) -> bool {
    (1..=4).any(|p| {
        let span = 2 * p + 1;
        seq.len() >= span && {
            let tail = &seq[seq.len() - span..];
            (p..tail.len()).all(|i| tail[i] == tail[i - p])
        }
    })
}

/// Classifies a Betti sequence: eventually zero, bounded, or polynomial of
/// some degree detected by finite differences.
pub fn complexity_from_betti(betti: &[usize]) -> ComplexityBound {
    if betti.last() == Some(&0) {
        return ComplexityBound::Exactly(0);
    }
    if tail_is_periodic(betti) {
        return ComplexityBound::Exactly(1);
    }
    let mut row: Vec<i64> = betti.iter().map(|&b| b as i64).collect();
    let mut degree = 0;
    while row.len() >= STABLE_RUN {
        let tail = &row[row.len() - STABLE_RUN..];
        if tail.iter().all(|&v| v == tail[0]) {
            return ComplexityBound::Exactly(degree + 1);
        }
        row = row.windows(2).map(|w| w[1] - w[0]).collect();
        degree += 1;
    }
    ComplexityBound::AtLeast(degree + 1)
}

pub fn complexity_estimate(m: &Module, horizon: usize) -> ComplexityEstimate {
    let horizon = horizon.max(4);
    let betti = homalg::betti_numbers(m, horizon);
    let bound = complexity_from_betti(&betti);
    let certified = match bound {
        ComplexityBound::Exactly(0) => true,
        ComplexityBound::Exactly(1) => homalg::detect_periodicity(m, 4, 3).is_some(),
        _ => false,
    };
    ComplexityEstimate { bound, horizon, certified }
}

/// Whether the biduality map `M -> M**` is an isomorphism, computed from
/// the evaluation pairing.
pub fn biduality_is_iso(m: &Module) -> bool {
    let alg = m.algebra();
    let n = alg.dim();
    let f = alg.field();
    let (dual, inclusion, pres) = modrep::a_dual_embedded(m);
    let r0 = pres.rank();
    let double_dim = modrep::hom_dim(&dual, &Module::free(alg, 1)).expect("same algebra");
    if double_dim != m.kdim() {
        return false;
    }
    if m.kdim() == 0 {
        return true;
    }
    // ev_u(φ) = Σ_j c_j φ_j where s(u) = (c_j) writes u in the generators.
    let mut evaluations: Vec<Vec<Scalar>> = Vec::with_capacity(m.kdim());
    for s in 0..m.kdim() {
        let lift = pres.section.col(s);
        let mut ev = Mat::zeros(f, n, dual.kdim());
        for j in 0..r0 {
            let c = &lift[j * n..(j + 1) * n];
            if c.iter().all(|&x| x == 0) {
                continue;
            }
            let block = inclusion.block(j * n, 0, n, dual.kdim());
            ev = ev.add(&alg.left_mul(c).mul(&block));
        }
        evaluations.push(ev.data().to_vec());
    }
    Mat::from_columns(f, n * dual.kdim(), &evaluations).rank() == m.kdim()
}

/// `Ext^i(M, A) = 0` for `1 <= i <= dim A + 2` and `M -> M**` is bijective.
pub fn gdim_is_zero(m: &Module) -> bool {
    let alg = m.algebra();
    let regular = Module::free(alg, 1);
    let upto = alg.dim() + 2;
    let ext = ordinary_ext_dims(m, &regular, upto);
    ext[1..].iter().all(|&d| d == 0) && biduality_is_iso(m)
}

/// Least `i <= horizon` with `Ext^i(M, N) != 0`, if any.
pub fn grade(m: &Module, n: &Module, horizon: usize) -> Option<usize> {
    ordinary_ext_dims(m, n, horizon).iter().position(|&d| d != 0)
}

/// Ordinary Betti numbers with their resolution, for reporting.
pub fn ordinary_betti(m: &Module, length: usize) -> Vec<usize> {
    minimal_free_resolution(m, length).ranks
}

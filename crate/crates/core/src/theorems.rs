//! Executable checks of the symmetry, duality, vanishing and linkage
//! statements for Tate (co)homology over Gorenstein algebras of dimension
//! zero. Each check evaluates both sides on a degree window and upgrades
//! to an all-degrees verdict when the tables are certified periodic.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{quotient_algebra, Algebra, Ideal};
use crate::corpus::NamedModule;
use crate::error::{Error, Result};
use crate::exactla::Scalar;
use crate::homalg::{ext_classes, ordinary_ext_dims, ordinary_tor_dims, pushout_extension, Session, TateTable};
use crate::invariants::{complexity_estimate, ComplexityBound, ComplexityEstimate};
use crate::linkage::{dagger, link_operator};
use crate::modrep::{self, IsoSearch, Module, DEFAULT_SEED};
use crate::{algebra, homalg};


pub const SYMMETRY: &str = "symmetry";
pub const FULL_SYMMETRY: &str = "full-symmetry";
pub const MATLIS_DUALITY: &str = "matlis-duality";
pub const BALANCED_TOR: &str = "balanced-tor";
pub const AR_DUALITY: &str = "ar-duality";
pub const BETTI_BASS: &str = "betti-bass";
pub const GORENSTEIN_IDEAL: &str = "gorenstein-ideal";
pub const REDUCIBLE_COMPLEXITY: &str = "reducible-complexity";
pub const SUP_INF: &str = "sup-inf";
pub const DAGGER_DUALITY: &str = "dagger-duality";
pub const GORENSTEIN_PAIR: &str = "gorenstein-pair";
pub const LINKED_EXT: &str = "linked-ext";
pub const EVEN_LINKAGE: &str = "even-linkage";

pub const ALL_CHECKS: [&str; 13] = [
    AR_DUALITY,
    BALANCED_TOR,
    BETTI_BASS,
    DAGGER_DUALITY,
    EVEN_LINKAGE,
    FULL_SYMMETRY,
    GORENSTEIN_IDEAL,
    GORENSTEIN_PAIR,
    LINKED_EXT,
    MATLIS_DUALITY,
    REDUCIBLE_COMPLEXITY,
    SUP_INF,
    SYMMETRY,
];

/// Ordered from weakest to strongest so that combining parts takes the minimum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    #[serde(rename = "REFUTED")]
    Refuted,
    ConsistentOnWindow,
    SatisfiedDegenerately,
    Verified,
    CertifiedAllDegrees,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::Refuted => "REFUTED",
            Verdict::ConsistentOnWindow => "consistent-on-window",
            Verdict::SatisfiedDegenerately => "satisfied-degenerately",
            Verdict::Verified => "verified",
            Verdict::CertifiedAllDegrees => "certified-all-degrees",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Evidence {
    pub label: String,
    pub table: TateTable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub inputs: Vec<String>,
    pub lo: i64,
    pub hi: i64,
    pub verdict: Verdict,
    pub witness_degree: Option<i64>,
    pub evidence: Vec<Evidence>,
    pub notes: Vec<String>,
}

impl CheckReport {
    pub fn refuted(&self) -> bool {
        self.verdict == Verdict::Refuted
    }

    /// One line: check, inputs, verdict and witness.
    pub fn summary(&self) -> String {
        let mut s = format!("{:<22} {:<28} {}", self.check, self.inputs.join(", "), self.verdict);
        if let Some(d) = self.witness_degree {
            s.push_str(&format!(" at degree {d}"));
        }
        s
    }
}

#[derive(Clone, Copy, Debug)]
struct Part {
    verdict: Verdict,
    witness: Option<i64>,
}

fn combine(parts: &[Part]) -> Part {
    parts
        .iter()
        .copied()
        .min_by_key(|p| p.verdict)
        .unwrap_or(Part { verdict: Verdict::ConsistentOnWindow, witness: None })
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Whether `table` vanishes in every degree of `degrees` that lies in the
/// window; `None` when no such degree is in the window.
fn vanishes_on(table: &TateTable, degrees: impl Fn(i64) -> bool) -> Option<std::result::Result<(), i64>> {
    let mut seen = false;
    for i in table.degrees().filter(|&i| degrees(i)) {
        seen = true;
        if table.get(i) != Some(0) {
            return Some(Err(i));
        }
    }
    seen.then_some(Ok(()))
}

/// A periodic table with a full period of zeros among `degrees` vanishes
/// everywhere.
fn certified_on(table: &TateTable, degrees: impl Fn(i64) -> bool) -> bool {
    let Some(period) = table.period else { return false };
    let mut run = 0;
    for i in table.degrees() {
        if degrees(i) && table.get(i) == Some(0) {
            run += 1;
            if run >= period.p {
                return true;
            }
        } else {
            run = 0;
        }
    }
    false
}

/// `hypothesis vanishes on H  ==>  conclusion vanishes on C`.
fn implication(
    hyp: &TateTable,
    hyp_degrees: impl Fn(i64) -> bool + Copy,
    concl: &TateTable,
    concl_degrees: impl Fn(i64) -> bool + Copy,
    notes: &mut Vec<String>,
    name: &str,
) -> Part {
    let consistent = Part { verdict: Verdict::ConsistentOnWindow, witness: None };
    match vanishes_on(hyp, hyp_degrees) {
        None => {
            notes.push(format!("{name}: hypothesis degrees fall outside the window"));
            return consistent;
        }
        Some(Err(i)) => {
            notes.push(format!("{name}: hypothesis fails at degree {i} (vacuous)"));
            return consistent;
        }
        Some(Ok(())) => {}
    }
    let hyp_certified = certified_on(hyp, hyp_degrees);
    match vanishes_on(concl, concl_degrees) {
        None => {
            notes.push(format!("{name}: conclusion degrees fall outside the window"));
            consistent
        }
        Some(Err(i)) if hyp_certified => {
            notes.push(format!("{name}: certified hypothesis but conclusion fails at degree {i}"));
            Part { verdict: Verdict::Refuted, witness: Some(i) }
        }
        Some(Err(i)) => {
            notes.push(format!("{name}: hypothesis holds only on the window; conclusion fails at degree {i}"));
            consistent
        }
        Some(Ok(())) if certified_on(concl, concl_degrees) || concl.certified_zero() => {
            Part { verdict: Verdict::CertifiedAllDegrees, witness: None }
        }
        Some(Ok(())) => Part { verdict: Verdict::Verified, witness: None },
    }
}

/// Degreewise `a_i = b_{map(i)}` over the window of `a`.
fn equality(a: &TateTable, b: &TateTable, map: impl Fn(i64) -> i64) -> Part {
    for i in a.degrees() {
        if a.get(i) != b.get(map(i)) {
            return Part { verdict: Verdict::Refuted, witness: Some(i) };
        }
    }
    let width = (a.hi - a.lo + 1) as usize;
    let certified = match (a.period, b.period) {
        (Some(pa), Some(pb)) => pa.p * pb.p / gcd(pa.p, pb.p) <= width,
        _ => false,
    };
    Part { verdict: if certified { Verdict::CertifiedAllDegrees } else { Verdict::Verified }, witness: None }
}

/// Result of searching `Ext^q(N, N)` for a class whose pushout lowers the
/// complexity of `N`.
#[derive(Clone, Debug)]
pub struct ReductionSearch {
    pub complexity: ComplexityEstimate,
    pub candidates_tried: usize,
    pub found: Option<Reduction>,
}

#[derive(Clone, Debug)]
pub struct Reduction {
    pub degree: usize,
    pub coefficients: Vec<Scalar>,
    pub module: Module,
    pub betti: Vec<usize>,
    pub complexity: ComplexityEstimate,
}

/// Coefficient vectors to try: every nonzero vector when there are at most
/// `max` of them, otherwise the basis vectors followed by seeded random ones.
pub fn class_candidates(p: u32, d: usize, max: usize, seed: u64) -> Vec<Vec<Scalar>> {
    let total = (p as f64).powi(d as i32) - 1.0;
    if total <= max as f64 {
        let mut out = Vec::new();
        let mut v = vec![0 as Scalar; d];
        loop {
            let mut k = 0;
            while k < d {
                v[k] += 1;
                if v[k] < p {
                    break;
                }
                v[k] = 0;
                k += 1;
            }
            if k == d {
                break;
            }
            out.push(v.clone());
        }
        return out;
    }
    let mut out: Vec<Vec<Scalar>> = (0..d).map(|i| crate::algebra::basis_vector(d, i)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while out.len() < max {
        let v: Vec<Scalar> = (0..d).map(|_| rng.gen_range(0..p)).collect();
        if v.iter().any(|&x| x != 0) && !out.contains(&v) {
            out.push(v);
        }
    }
    out
}

pub fn search_complexity_reduction(
    n: &Module,
    degrees: &[usize],
    horizon: usize,
    max_candidates: usize,
    seed: u64,
) -> Result<ReductionSearch> {
    let complexity = complexity_estimate(n, horizon);
    let mut tried = 0;
    let target = match complexity.bound {
        ComplexityBound::Exactly(0) => {
            return Ok(ReductionSearch { complexity, candidates_tried: 0, found: None });
        }
        ComplexityBound::Exactly(c) | ComplexityBound::AtLeast(c) => c,
    };
    for &q in degrees {
        let classes = ext_classes(n, n, q)?;
        let p = n.field().characteristic();
        for coeffs in class_candidates(p, classes.basis.len(), max_candidates, seed) {
            tried += 1;
            let k = pushout_extension(n, q, &classes.combination(&coeffs))?;
            let betti = homalg::betti_numbers(&k, horizon);
            let bound = crate::invariants::complexity_from_betti(&betti);
            if let ComplexityBound::Exactly(c) = bound {
                if c < target {
                    let complexity = ComplexityEstimate { bound, horizon, certified: false };
                    let found = Reduction { degree: q, coefficients: coeffs, module: k, betti, complexity };
                    return Ok(ReductionSearch { complexity, candidates_tried: tried, found: Some(found) });
                }
            }
        }
    }
    Ok(ReductionSearch { complexity, candidates_tried: tried, found: None })
}

/// Settings and caches shared by a run of checks.
pub struct Checker {
    pub session: Session,
    pub lo: i64,
    pub hi: i64,
    pub horizon: usize,
    pub seed: u64,
    /// Pushout classes tried per degree in the complexity-reduction search.
    pub max_candidates: usize,
    reductions: std::sync::Mutex<Vec<(Module, Arc<ReductionSearch>)>>,
}

impl Checker {
    pub fn new(lo: i64, hi: i64) -> Checker {
        Checker::with_seed(lo, hi, DEFAULT_SEED)
    }

    pub fn with_seed(lo: i64, hi: i64, seed: u64) -> Checker {
        let search = IsoSearch { seed, ..IsoSearch::default() };
        Checker {
            session: Session::new(search),
            lo,
            hi,
            horizon: crate::invariants::DEFAULT_HORIZON,
            seed,
            max_candidates: 16,
            reductions: std::sync::Mutex::new(Vec::new()),
        }
    }

    fn ext(&self, m: &Module, n: &Module) -> Result<TateTable> {
        self.session.tate_ext(m, n, self.lo, self.hi)
    }

    fn tor(&self, m: &Module, n: &Module) -> Result<TateTable> {
        self.session.tate_tor(m, n, self.lo, self.hi)
    }

    fn ext_mirrored(&self, m: &Module, n: &Module) -> Result<TateTable> {
        self.session.tate_ext(m, n, -self.hi - 1, -self.lo - 1)
    }

    fn tor_mirrored(&self, m: &Module, n: &Module) -> Result<TateTable> {
        self.session.tate_tor(m, n, -self.hi - 1, -self.lo - 1)
    }

    fn report(&self, check: &str, inputs: &[&str], part: Part, evidence: Vec<Evidence>, notes: Vec<String>) -> CheckReport {
        CheckReport {
            check: check.into(),
            inputs: inputs.iter().map(|s| s.to_string()).collect(),
            lo: self.lo,
            hi: self.hi,
            verdict: part.verdict,
            witness_degree: part.witness,
            evidence,
            notes,
        }
    }

    fn gorenstein(m: &Module) -> Result<()> {
        m.algebra().require_gorenstein()
    }

    /// Vanishing of `Ext(M,N)` for `i >= t` forces vanishing of `Ext(N,M)`
    /// for `i < -t`, and vanishing for `i < t` forces it for `i >= -t`.
    pub fn symmetry(&self, m: &NamedModule, n: &NamedModule, t: i64) -> Result<CheckReport> {
        Self::gorenstein(&m.module)?;
        let mn = self.ext(&m.module, &n.module)?;
        let nm = self.ext(&n.module, &m.module)?;
        let mut notes = vec![format!("threshold t = {t}")];
        let upper = implication(&mn, |i| i >= t, &nm, |i| i < -t, &mut notes, "upper");
        let lower = implication(&mn, |i| i < t, &nm, |i| i >= -t, &mut notes, "lower");
        let evidence = vec![ev("Ext(M,N)", mn), ev("Ext(N,M)", nm)];
        Ok(self.report(SYMMETRY, &[&m.name, &n.name], combine(&[upper, lower]), evidence, notes))
    }

    /// `Ext(M,N)` vanishes in all degrees iff `Ext(N,M)` does.
    pub fn full_symmetry(&self, m: &NamedModule, n: &NamedModule) -> Result<CheckReport> {
        Self::gorenstein(&m.module)?;
        let mn = self.ext(&m.module, &n.module)?;
        let nm = self.ext(&n.module, &m.module)?;
        let mut notes = Vec::new();
        let first_nonzero = |t: &TateTable| t.degrees().find(|&i| t.get(i) != Some(0));
        let part = match (first_nonzero(&mn), first_nonzero(&nm)) {
            (None, None) => {
                let certified = mn.certified_zero() && nm.certified_zero();
                Part { verdict: if certified { Verdict::CertifiedAllDegrees } else { Verdict::Verified }, witness: None }
            }
            (Some(_), Some(_)) => {
                notes.push("neither table vanishes".into());
                Part { verdict: Verdict::SatisfiedDegenerately, witness: None }
            }
            (None, Some(i)) | (Some(i), None) => {
                let zero_side_certified = if first_nonzero(&mn).is_none() { mn.certified_zero() } else { nm.certified_zero() };
                if zero_side_certified {
                    notes.push(format!("one side vanishes in all degrees, the other not at {i}"));
                    Part { verdict: Verdict::Refuted, witness: Some(i) }
                } else {
                    notes.push(format!("one side vanishes only on the window; the other is nonzero at {i}"));
                    Part { verdict: Verdict::ConsistentOnWindow, witness: None }
                }
            }
        };
        let evidence = vec![ev("Ext(M,N)", mn), ev("Ext(N,M)", nm)];
        Ok(self.report(FULL_SYMMETRY, &[&m.name, &n.name], part, evidence, notes))
    }

    /// `dim Ext^i(M, N^∨) = dim Tor_i(M, N)`.
    pub fn matlis_duality(&self, m: &NamedModule, n: &NamedModule) -> Result<CheckReport> {
        Self::gorenstein(&m.module)?;
        let lhs = self.ext(&m.module, &modrep::matlis_dual(&n.module))?;
        let rhs = self.tor(&m.module, &n.module)?;
        let part = equality(&lhs, &rhs, |i| i);
        Ok(self.report(MATLIS_DUALITY, &[&m.name, &n.name], part, vec![ev("Ext(M,N^v)", lhs), ev("Tor(M,N)", rhs)], vec![]))
    }

    /// `dim Tor_i(M, N) = dim Tor_i(N, M)`.
    pub fn balanced_tor(&self, m: &NamedModule, n: &NamedModule) -> Result<CheckReport> {
        Self::gorenstein(&m.module)?;
        let lhs = self.tor(&m.module, &n.module)?;
        let rhs = self.tor(&n.module, &m.module)?;
        let part = equality(&lhs, &rhs, |i| i);
        Ok(self.report(BALANCED_TOR, &[&m.name, &n.name], part, vec![ev("Tor(M,N)", lhs), ev("Tor(N,M)", rhs)], vec![]))
    }

    /// `dim Ext^i(M, N) = dim Ext^{-i-1}(N, M ⊗ ω)`.
    pub fn ar_duality(&self, m: &NamedModule, n: &NamedModule) -> Result<CheckReport> {
        Self::gorenstein(&m.module)?;
        let omega = algebra::canonical_module(m.module.algebra());
        let twisted = modrep::tensor(&m.module, &omega)?;
        let lhs = self.ext(&m.module, &n.module)?;
        let rhs = self.ext_mirrored(&n.module, &twisted)?;
        let part = equality(&lhs, &rhs, |i| -i - 1);
        let evidence = vec![ev("Ext(M,N)", lhs), ev("Ext(N,M(x)w) mirrored", rhs)];
        Ok(self.report(AR_DUALITY, &[&m.name, &n.name], part, evidence, vec![]))
    }

    /// Stable Betti numbers against mirrored stable Bass numbers.
    pub fn betti_bass(&self, m: &NamedModule) -> Result<CheckReport> {
        Self::gorenstein(&m.module)?;
        let k = Module::residue_field(m.module.algebra());
        let betti = self.ext(&m.module, &k)?;
        let bass = self.ext_mirrored(&k, &m.module)?;
        let part = equality(&betti, &bass, |i| -i - 1);
        Ok(self.report(BETTI_BASS, &[&m.name], part, vec![ev("Ext(M,k)", betti), ev("Ext(k,M) mirrored", bass)], vec![]))
    }

    /// For `A/a` Gorenstein: stable Betti and Bass numbers of `A/a` agree.
    pub fn gorenstein_ideal(&self, name: &str, ideal: &Ideal) -> Result<CheckReport> {
        let alg = ideal.algebra();
        alg.require_gorenstein()?;
        let quotient = quotient_algebra(alg, ideal)?;
        quotient.algebra.require_gorenstein()?;
        let m = Module::cyclic(alg, ideal)?;
        let k = Module::residue_field(alg);
        let betti = self.ext(&m, &k)?;
        let bass = self.ext(&k, &m)?;
        let part = equality(&betti, &bass, |i| i);
        let label = format!("A/{name}");
        Ok(self.report(GORENSTEIN_IDEAL, &[&label], part, vec![ev("Ext(A/a,k)", betti), ev("Ext(k,A/a)", bass)], vec![]))
    }

    /// Cached search for a class lowering the complexity of `N`.
    pub fn reduction_for(&self, n: &Module) -> Result<Arc<ReductionSearch>> {
        {
            let cache = self.reductions.lock().expect("cache lock");
            if let Some((_, r)) = cache.iter().find(|(k, _)| k == n) {
                return Ok(r.clone());
            }
        }
        let search = Arc::new(search_complexity_reduction(n, &[1, 2], self.horizon, self.max_candidates, self.seed)?);
        self.reductions.lock().expect("cache lock").push((n.clone(), search.clone()));
        Ok(search)
    }

    /// With a complexity-reducing class for `N`, vanishing of `Ext(M,N)` in
    /// high degrees, in low degrees, and in all degrees are equivalent.
    pub fn reducible_complexity(&self, m: &NamedModule, n: &NamedModule) -> Result<CheckReport> {
        Self::gorenstein(&m.module)?;
        let search = self.reduction_for(&n.module)?;
        let mut notes = vec![format!("complexity of N: {:?} (horizon {})", search.complexity.bound, search.complexity.horizon)];
        let reducible = match (&search.found, search.complexity.bound) {
            (Some(r), _) => {
                notes.push(format!(
                    "reducing class in degree {} with coefficients {:?}; pushout complexity {:?}",
                    r.degree, r.coefficients, r.complexity.bound
                ));
                true
            }
            (None, ComplexityBound::Exactly(0)) => {
                notes.push("N has complexity 0; nothing to reduce".into());
                true
            }
            (None, _) => {
                return Err(Error::BudgetExhausted(format!(
                    "no complexity-reducing class for {} among {} candidates",
                    n.name, search.candidates_tried
                )))
            }
        };
        let table = self.ext(&m.module, &n.module)?;
        let third = (self.hi - self.lo) / 3;
        let (upper_from, lower_to) = (self.hi - third, self.lo + third);
        let high = vanishes_on(&table, |i| i >= upper_from) == Some(Ok(()));
        let low = vanishes_on(&table, |i| i <= lower_to) == Some(Ok(()));
        let all = table.is_zero();
        notes.push(format!("vanishing for i >= {upper_from}: {high}; for i <= {lower_to}: {low}; everywhere: {all}"));
        let part = if high == low && low == all {
            if all {
                let v = if table.certified_zero() { Verdict::CertifiedAllDegrees } else { Verdict::Verified };
                Part { verdict: v, witness: None }
            } else {
                Part { verdict: Verdict::SatisfiedDegenerately, witness: None }
            }
        } else {
            let witness = table.degrees().find(|&i| table.get(i) != Some(0));
            if reducible && table.period.is_some() {
                Part { verdict: Verdict::Refuted, witness }
            } else {
                Part { verdict: Verdict::ConsistentOnWindow, witness: None }
            }
        };
        Ok(self.report(REDUCIBLE_COMPLEXITY, &[&m.name, &n.name], part, vec![ev("Ext(M,N)", table)], notes))
    }

    /// If `Tor_i(M,N) = 0` for all `i >= 0` in Tate homology, then
    /// `sup{i : Tor_i != 0} + inf{i : Ext^i != 0} = 0`.
    pub fn sup_inf(&self, m: &NamedModule, n: &NamedModule) -> Result<CheckReport> {
        Self::gorenstein(&m.module)?;
        let hi = self.horizon as i64;
        let tate = self.session.tate_tor(&m.module, &n.module, 0, hi)?;
        let mut notes = Vec::new();
        let inputs = [m.name.as_str(), n.name.as_str()];
        if let Some(i) = tate.degrees().find(|&i| tate.get(i) != Some(0)) {
            notes.push(format!("hypothesis fails: Tate Tor nonzero at degree {i} (vacuous)"));
            let part = Part { verdict: Verdict::ConsistentOnWindow, witness: None };
            return Ok(self.report(SUP_INF, &inputs, part, vec![ev("Tor(M,N) for i >= 0", tate)], notes));
        }
        if !tate.certified_zero() {
            return Err(Error::HypothesisNotCertified(format!(
                "Tate Tor({}, {}) vanishes on [0, {hi}] but is not certified periodic",
                m.name, n.name
            )));
        }
        let tor = ordinary_tor_dims(&m.module, &n.module, self.horizon);
        let ext = ordinary_ext_dims(&m.module, &n.module, self.horizon);
        let sup = tor.iter().rposition(|&d| d != 0);
        let inf = ext.iter().position(|&d| d != 0);
        notes.push(format!("Tor dims {tor:?}; Ext dims {ext:?}"));
        let part = match (sup, inf) {
            (Some(s), Some(i)) if s + i == 0 => Part { verdict: Verdict::CertifiedAllDegrees, witness: None },
            (Some(s), Some(i)) => Part { verdict: Verdict::Refuted, witness: Some(s.max(i) as i64) },
            _ => {
                notes.push("a module is zero; both sides are empty".into());
                Part { verdict: Verdict::SatisfiedDegenerately, witness: None }
            }
        };
        Ok(self.report(SUP_INF, &inputs, part, vec![ev("Tor(M,N) for i >= 0", tate)], notes))
    }

    /// `dim Ext^i(M†, N) = dim Tor_{-i-1}(M, N)` and
    /// `dim Ext^i(M, N) = dim Tor_{-i-1}(M†, N)`.
    pub fn dagger_duality(&self, m: &NamedModule, n: &NamedModule) -> Result<CheckReport> {
        Self::gorenstein(&m.module)?;
        let md = dagger(&m.module)?;
        let e1 = self.ext(&md, &n.module)?;
        let t1 = self.tor_mirrored(&m.module, &n.module)?;
        let e2 = self.ext(&m.module, &n.module)?;
        let t2 = self.tor_mirrored(&md, &n.module)?;
        let part = combine(&[equality(&e1, &t1, |i| -i - 1), equality(&e2, &t2, |i| -i - 1)]);
        let evidence = vec![
            ev("Ext(M+,N)", e1),
            ev("Tor(M,N) mirrored", t1),
            ev("Ext(M,N)", e2),
            ev("Tor(M+,N) mirrored", t2),
        ];
        Ok(self.report(DAGGER_DUALITY, &[&m.name, &n.name], part, evidence, vec![]))
    }

    /// For Gorenstein quotients `A/a`, `A/b`: eventual vanishing of
    /// `Ext(A/a, A/b)`, of `Ext(A/b, A/a)` and of `Tor(A/a, A/b)` agree.
    pub fn gorenstein_pair(&self, a: (&str, &Ideal), b: (&str, &Ideal)) -> Result<CheckReport> {
        let alg = a.1.algebra();
        alg.require_gorenstein()?;
        for ideal in [a.1, b.1] {
            quotient_algebra(alg, ideal)?.algebra.require_gorenstein()?;
        }
        let ma = Module::cyclic(alg, a.1)?;
        let mb = Module::cyclic(alg, b.1)?;
        let top = self.hi.max(4);
        let from = (top + 1) / 2;
        let tables = [
            self.session.tate_ext(&ma, &mb, 1, top)?,
            self.session.tate_ext(&mb, &ma, 1, top)?,
            self.session.tate_tor(&ma, &mb, 1, top)?,
        ];
        let vanish: Vec<bool> = tables.iter().map(|t| vanishes_on(t, |i| i >= from) == Some(Ok(()))).collect();
        let certified: Vec<bool> = tables.iter().map(|t| certified_on(t, |i| i >= from)).collect();
        let mut notes = vec![format!("eventual vanishing read on [{from}, {top}]: {vanish:?}")];
        let part = if vanish.iter().all(|&v| v) {
            let v = if certified.iter().all(|&c| c) { Verdict::CertifiedAllDegrees } else { Verdict::Verified };
            Part { verdict: v, witness: None }
        } else if vanish.iter().all(|&v| !v) {
            Part { verdict: Verdict::SatisfiedDegenerately, witness: None }
        } else {
            let witness = tables
                .iter()
                .zip(&vanish)
                .filter(|(_, &v)| !v)
                .find_map(|(t, _)| (from..=top).find(|&i| t.get(i) != Some(0)));
            if vanish.iter().zip(&certified).any(|(&v, &c)| v && c) {
                notes.push("a certified vanishing side disagrees with a nonvanishing side".into());
                Part { verdict: Verdict::Refuted, witness }
            } else {
                Part { verdict: Verdict::ConsistentOnWindow, witness: None }
            }
        };
        let la = format!("A/{}", a.0);
        let lb = format!("A/{}", b.0);
        let [e_ab, e_ba, t_ab] = tables;
        let evidence = vec![ev("Ext(A/a,A/b)", e_ab), ev("Ext(A/b,A/a)", e_ba), ev("Tor(A/a,A/b)", t_ab)];
        let mut report = self.report(GORENSTEIN_PAIR, &[&la, &lb], part, evidence, notes);
        report.lo = 1;
        report.hi = top;
        Ok(report)
    }

    /// With `N = λM` and `Y = λX` (linkage by the zero ideal):
    /// `Ext(M,X) = Ext(Y,N)`, `Ext(M,M) = Ext(N,N)`, and for self-linked
    /// `M`, `X` also `Ext(M,X) = Ext(X,M)`.
    pub fn linked_ext(&self, m: &NamedModule, x: &NamedModule) -> Result<CheckReport> {
        Self::gorenstein(&m.module)?;
        let n = link_operator(&m.module)?;
        let y = link_operator(&x.module)?;
        let mx = self.ext(&m.module, &x.module)?;
        let yn = self.ext(&y, &n)?;
        let mm = self.ext(&m.module, &m.module)?;
        let nn = self.ext(&n, &n)?;
        let mut parts = vec![equality(&mx, &yn, |i| i), equality(&mm, &nn, |i| i)];
        let mut notes = Vec::new();
        let mut evidence = vec![ev("Ext(M,X)", mx.clone()), ev("Ext(lX,lM)", yn), ev("Ext(M,M)", mm), ev("Ext(lM,lM)", nn)];
        let search = &self.session.search;
        let m_self = modrep::is_iso_with(&m.module, &n, search)?.is_iso();
        let x_self = modrep::is_iso_with(&x.module, &y, search)?.is_iso();
        if m_self && x_self {
            let xm = self.ext(&x.module, &m.module)?;
            parts.push(equality(&mx, &xm, |i| i));
            evidence.push(ev("Ext(X,M)", xm));
            notes.push("both inputs are self-linked".into());
        }
        Ok(self.report(LINKED_EXT, &[&m.name, &x.name], combine(&parts), evidence, notes))
    }

    /// `M` and `λλM` have the same stable Betti and Bass numbers.
    pub fn even_linkage(&self, m: &NamedModule) -> Result<CheckReport> {
        Self::gorenstein(&m.module)?;
        let l = link_operator(&link_operator(&m.module)?)?;
        let k = Module::residue_field(m.module.algebra());
        let (bm, bl) = (self.ext(&m.module, &k)?, self.ext(&l, &k)?);
        let (um, ul) = (self.ext(&k, &m.module)?, self.ext(&k, &l)?);
        let part = combine(&[equality(&bm, &bl, |i| i), equality(&um, &ul, |i| i)]);
        let iso = modrep::is_iso_with(&m.module, &l, &self.session.search)?.is_iso();
        let notes = vec![format!("double link isomorphic to M: {iso}")];
        let evidence = vec![ev("Ext(M,k)", bm), ev("Ext(L,k)", bl), ev("Ext(k,M)", um), ev("Ext(k,L)", ul)];
        Ok(self.report(EVEN_LINKAGE, &[&m.name], part, evidence, notes))
    }
}

fn ev(label: &str, table: TateTable) -> Evidence {
    Evidence { label: label.into(), table }
}

/// A check that stopped with an error instead of a verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckFailure {
    pub check: String,
    pub inputs: Vec<String>,
    pub error: String,
    pub budget: bool,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct BatteryResult {
    pub reports: Vec<CheckReport>,
    pub failures: Vec<CheckFailure>,
}

impl BatteryResult {
    pub fn refuted(&self) -> usize {
        self.reports.iter().filter(|r| r.refuted()).count()
    }

    fn push(&mut self, check: &str, inputs: &[&str], outcome: Result<CheckReport>) {
        match outcome {
            Ok(r) => self.reports.push(r),
            Err(e) => self.failures.push(CheckFailure {
                check: check.into(),
                inputs: inputs.iter().map(|s| s.to_string()).collect(),
                budget: matches!(e, Error::BudgetExhausted(_) | Error::HypothesisNotCertified(_)),
                error: e.to_string(),
            }),
        }
    }
}

/// Which checks a battery runs; `None` selects all of them.
pub fn selected(filter: Option<&str>, check: &str) -> bool {
    filter.is_none_or(|f| f == check)
}

/// Runs the selected checks over every module pair and ideal given.
/// Over a non-Gorenstein algebra every check is expected to fail with
/// [`Error::NotGorenstein`]; those rejections are recorded as failures.
pub fn run_battery(
    checker: &Checker,
    modules: &[NamedModule],
    ideals: &[(String, Ideal)],
    filter: Option<&str>,
) -> BatteryResult {
    let mut out = BatteryResult::default();
    let run = |check: &str| selected(filter, check);
    let stable: Vec<&NamedModule> = modules.iter().filter(|m| homalg::is_stable(&m.module)).collect();
    for m in modules {
        for n in modules {
            let inputs = [m.name.as_str(), n.name.as_str()];
            if run(SYMMETRY) {
                for t in [-1, 0, 1] {
                    out.push(SYMMETRY, &inputs, checker.symmetry(m, n, t));
                }
            }
            if run(FULL_SYMMETRY) {
                out.push(FULL_SYMMETRY, &inputs, checker.full_symmetry(m, n));
            }
            if run(MATLIS_DUALITY) {
                out.push(MATLIS_DUALITY, &inputs, checker.matlis_duality(m, n));
            }
            if run(BALANCED_TOR) {
                out.push(BALANCED_TOR, &inputs, checker.balanced_tor(m, n));
            }
            if run(AR_DUALITY) {
                out.push(AR_DUALITY, &inputs, checker.ar_duality(m, n));
            }
            if run(DAGGER_DUALITY) {
                out.push(DAGGER_DUALITY, &inputs, checker.dagger_duality(m, n));
            }
            if run(SUP_INF) {
                out.push(SUP_INF, &inputs, checker.sup_inf(m, n));
            }
            if run(REDUCIBLE_COMPLEXITY) {
                out.push(REDUCIBLE_COMPLEXITY, &inputs, checker.reducible_complexity(m, n));
            }
        }
        if run(BETTI_BASS) {
            out.push(BETTI_BASS, &[&m.name], checker.betti_bass(m));
        }
    }
    if run(LINKED_EXT) {
        for m in &stable {
            for x in &stable {
                out.push(LINKED_EXT, &[&m.name, &x.name], checker.linked_ext(m, x));
            }
        }
    }
    if run(EVEN_LINKAGE) {
        for m in &stable {
            out.push(EVEN_LINKAGE, &[&m.name], checker.even_linkage(m));
        }
    }
    if run(GORENSTEIN_IDEAL) {
        for (name, ideal) in ideals {
            out.push(GORENSTEIN_IDEAL, &[name], checker.gorenstein_ideal(name, ideal));
        }
    }
    if run(GORENSTEIN_PAIR) {
        for (na, a) in ideals {
            for (nb, b) in ideals {
                out.push(GORENSTEIN_PAIR, &[na, nb], checker.gorenstein_pair((na, a), (nb, b)));
            }
        }
    }
    out.reports.sort_by(|a, b| a.check.cmp(&b.check));
    out.failures.sort_by(|a, b| a.check.cmp(&b.check));
    out
}

/// The modules over a non-Gorenstein algebra used as negative controls:
/// one call per Gorenstein-requiring operation, each expected to be rejected.
pub fn negative_controls(algebra: &Arc<Algebra>) -> Vec<(String, Result<()>)> {
    let k = Module::residue_field(algebra);
    let named = NamedModule::new("k", k.clone());
    let checker = Checker::new(-2, 2);
    let ideal = Ideal::zero(algebra);
    let drop = |r: Result<CheckReport>| r.map(|_| ());
    vec![
        ("complete-resolution".into(), homalg::complete_resolution(&k, -2, 2).map(|_| ())),
        ("cosyzygy".into(), homalg::cosyzygy(&k, 1).map(|_| ())),
        ("dagger".into(), dagger(&k).map(|_| ())),
        ("tate-ext".into(), homalg::tate_ext(&k, &k, -2, 2).map(|_| ())),
        ("tate-tor".into(), homalg::tate_tor(&k, &k, -2, 2).map(|_| ())),
        (SYMMETRY.into(), drop(checker.symmetry(&named, &named, 0))),
        (FULL_SYMMETRY.into(), drop(checker.full_symmetry(&named, &named))),
        (MATLIS_DUALITY.into(), drop(checker.matlis_duality(&named, &named))),
        (BALANCED_TOR.into(), drop(checker.balanced_tor(&named, &named))),
        (AR_DUALITY.into(), drop(checker.ar_duality(&named, &named))),
        (BETTI_BASS.into(), drop(checker.betti_bass(&named))),
        (GORENSTEIN_IDEAL.into(), drop(checker.gorenstein_ideal("(0)", &ideal))),
        (REDUCIBLE_COMPLEXITY.into(), drop(checker.reducible_complexity(&named, &named))),
        (SUP_INF.into(), drop(checker.sup_inf(&named, &named))),
        (DAGGER_DUALITY.into(), drop(checker.dagger_duality(&named, &named))),
        (GORENSTEIN_PAIR.into(), drop(checker.gorenstein_pair(("(0)", &ideal), ("(0)", &ideal)))),
        (LINKED_EXT.into(), drop(checker.linked_ext(&named, &named))),
        (EVEN_LINKAGE.into(), drop(checker.even_linkage(&named))),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::complete_intersection;

    fn named(a: &Arc<Algebra>, label: &str) -> NamedModule {
        let module = match label {
            "k" => Module::residue_field(a),
            "A" => Module::free(a, 1),
            _ => {
                let i = a.label_index(label).unwrap();
                Module::cyclic_by_elements(a, &[a.basis_element(i)]).unwrap()
            }
        };
        NamedModule::new(label, module)
    }

    #[test]
    fn symmetry_examples() {
        let b = complete_intersection(2, &[2, 2]);
        let c = Checker::new(-8, 8);
        let r = c.symmetry(&named(&b, "x"), &named(&b, "y"), 0).unwrap();
        assert!(r.verdict >= Verdict::Verified, "{r:?}");
        let a = complete_intersection(2, &[2]);
        let c = Checker::new(-6, 6);
        let r = c.symmetry(&named(&a, "k"), &named(&a, "k"), 0).unwrap();
        assert_eq!(r.verdict, Verdict::ConsistentOnWindow);
        let r = c.symmetry(&named(&a, "A"), &named(&a, "k"), 0).unwrap();
        assert!(r.verdict >= Verdict::Verified);
    }

    #[test]
    fn full_symmetry_examples() {
        let a = complete_intersection(2, &[2]);
        let c = Checker::new(-6, 6);
        let r = c.full_symmetry(&named(&a, "k"), &named(&a, "k")).unwrap();
        assert_eq!(r.verdict, Verdict::SatisfiedDegenerately);
        let b = complete_intersection(2, &[2, 2]);
        let r = c.full_symmetry(&named(&b, "x"), &named(&b, "y")).unwrap();
        assert!(r.verdict >= Verdict::Verified);
    }

    #[test]
    fn duality_examples() {
        let a = complete_intersection(2, &[2]);
        let c = Checker::new(-6, 6);
        let (k, free) = (named(&a, "k"), named(&a, "A"));
        for r in [
            c.matlis_duality(&k, &k).unwrap(),
            c.balanced_tor(&k, &free).unwrap(),
            c.ar_duality(&k, &k).unwrap(),
            c.betti_bass(&k).unwrap(),
            c.dagger_duality(&k, &k).unwrap(),
        ] {
            assert!(r.verdict >= Verdict::Verified, "{r:?}");
        }
    }

    #[test]
    fn ideal_checks() {
        let c3 = complete_intersection(3, &[4]);
        let c = Checker::new(-6, 6);
        let x2 = Ideal::generated_by(&c3, &[c3.basis_element(2)]).unwrap();
        assert!(c.gorenstein_ideal("(x^2)", &x2).unwrap().verdict >= Verdict::Verified);
        let x = Ideal::generated_by(&c3, &[c3.basis_element(1)]).unwrap();
        let x3 = Ideal::generated_by(&c3, &[c3.basis_element(3)]).unwrap();
        let r = c.gorenstein_pair(("(x)", &x), ("(x^3)", &x3)).unwrap();
        assert_eq!(r.verdict, Verdict::SatisfiedDegenerately);
        let zero = Ideal::zero(&c3);
        assert!(c.gorenstein_pair(("(0)", &zero), ("(x)", &x)).unwrap().verdict >= Verdict::Verified);
    }

    #[test]
    fn linkage_checks() {
        let c3 = complete_intersection(3, &[4]);
        let c = Checker::new(-6, 6);
        let r = c.linked_ext(&named(&c3, "x"), &named(&c3, "x^3")).unwrap();
        assert!(r.verdict >= Verdict::Verified);
        assert!(c.even_linkage(&named(&c3, "x")).unwrap().verdict >= Verdict::Verified);
        assert_eq!(c.linked_ext(&named(&c3, "A"), &named(&c3, "x")).unwrap_err(), Error::NotStable);
    }

    #[test]
    fn sup_inf_and_reduction() {
        let b = complete_intersection(2, &[2, 2]);
        let c = Checker::new(-6, 6);
        let r = c.sup_inf(&named(&b, "A"), &named(&b, "k")).unwrap();
        assert_eq!(r.verdict, Verdict::CertifiedAllDegrees);
        let r = c.reducible_complexity(&named(&b, "x"), &named(&b, "y")).unwrap();
        assert!(r.verdict >= Verdict::Verified, "{r:?}");
        let r = c.reducible_complexity(&named(&b, "k"), &named(&b, "k")).unwrap();
        assert_eq!(r.verdict, Verdict::SatisfiedDegenerately);
    }

    #[test]
    fn candidates() {
        assert_eq!(class_candidates(2, 3, 8, 1).len(), 7);
        let c = class_candidates(5, 3, 16, 1);
        assert_eq!(c.len(), 16);
        assert_eq!(&c[..3], &[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
    }

    #[test]
    fn negative_controls_reject() {
        let a = crate::corpus::square_zero_plane();
        for (name, outcome) in negative_controls(&a) {
            assert!(matches!(outcome, Err(Error::NotGorenstein { .. })), "{name}: {outcome:?}");
        }
    }
}

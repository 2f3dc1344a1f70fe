//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tatekit::algebra::{quotient_algebra, Algebra, Ideal};
use tatekit::corpus::{builtin_algebras, complete_intersection, corpus_modules, square_zero_plane, NamedModule};
use tatekit::homalg::{betti_numbers, complete_resolution, ext_classes, is_stable, ordinary_ext_dims, pushout_extension, tate_ext, tate_tor, Session};
use tatekit::linkage::{is_linked, link_operator, LinkageDatum};
use tatekit::modrep::{is_iso, matlis_dual, random_invertible, Module, DEFAULT_SEED};
use tatekit::theorems::{self, search_complexity_reduction, Checker, Verdict};
use tatekit::Error;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: Error) -> String {
    e.to_string()
}

fn cyclic(a: &Arc<Algebra>, label: &str) -> Module {
    let i = a.label_index(label).unwrap();
    Module::cyclic_by_elements(a, &[a.basis_element(i)]).unwrap()
}

fn gorenstein_corpus() -> Vec<(String, Arc<Algebra>, Vec<NamedModule>)> {
    builtin_algebras()
        .into_iter()
        .filter(|a| a.algebra.is_gorenstein())
        .map(|a| {
            let modules = corpus_modules(&a.algebra);
            (a.name, a.algebra, modules)
        })
        .collect()
}

/// Tate Ext of k against itself over the dual numbers, against the
/// complete resolution `.. -> A --x--> A --x--> A -> ..`: applying
/// `Hom(-, k)` turns every differential into the action of `x` on `k`.
fn periodic_table() -> Outcome {
    let a = complete_intersection(2, &[2]);
    let k = Module::residue_field(&a);
    let x = k.act(&a.basis_element(1));
    let oracle = 1 - x.rank() - x.rank();
    let t = tate_ext(&k, &k, -10, 10).map_err(err)?;
    ensure(t.dims == vec![oracle; 21], || format!("dims {:?}, expected all {oracle}", t.dims))?;
    let p = t.period.ok_or("no periodicity detected")?;
    ensure(p.p == 1, || format!("period {}", p.p))?;
    Ok(format!("21 degrees equal {oracle}, period {}", p.p))
}

/// Over `k[x]/(x^n)`, homology of `A/(x^b)` tensored with the periodic
/// resolution `A --x^a--> A --x^(n-a)--> A` of `A/(x^a)`.
fn tor_min_formula() -> Outcome {
    let mut checked = 0;
    for p in [2u64, 3, 5, 7] {
        for (n, a, b) in [(4u32, 1u32, 1u32), (4, 1, 3), (4, 2, 2), (5, 2, 3)] {
            let alg = complete_intersection(p, &[n]);
            let label = |e: u32| if e == 1 { "x".to_string() } else { format!("x^{e}") };
            let (ma, mb) = (cyclic(&alg, &label(a)), cyclic(&alg, &label(b)));
            let rank = |c: u32| b.saturating_sub(c) as usize;
            let oracle = b as usize - rank(a) - rank(n - a);
            let formula = a.min(b).min(n - a).min(n - b) as usize;
            ensure(oracle == formula, || format!("oracle {oracle} vs formula {formula} at {n},{a},{b}"))?;
            let t = tate_tor(&ma, &mb, -8, 8).map_err(err)?;
            ensure(t.dims == vec![formula; 17], || format!("p={p} (n,a,b)=({n},{a},{b}): {:?}", t.dims))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} (p, n, a, b) cases exact on [-8, 8]"))
}

fn symmetry_suite() -> Outcome {
    let mut reports = 0;
    for (name, _, modules) in gorenstein_corpus() {
        let checker = Checker::new(-8, 8);
        for m in &modules {
            for n in &modules {
                for t in [-1, 0, 1] {
                    let r = checker.symmetry(m, n, t).map_err(err)?;
                    ensure(!r.refuted(), || format!("{name}: {}", r.summary()))?;
                    reports += 1;
                }
                let r = checker.full_symmetry(m, n).map_err(err)?;
                ensure(!r.refuted(), || format!("{name}: {}", r.summary()))?;
                reports += 1;
            }
        }
    }
    let b = complete_intersection(2, &[2, 2]);
    let (x, y) = (NamedModule::new("A/(x)", cyclic(&b, "x")), NamedModule::new("A/(y)", cyclic(&b, "y")));
    let checker = Checker::new(-8, 8);
    for r in [checker.symmetry(&x, &y, 0).map_err(err)?, checker.full_symmetry(&x, &y).map_err(err)?] {
        ensure(r.verdict >= Verdict::Verified, || format!("A/(x), A/(y): {}", r.summary()))?;
        ensure(r.evidence.iter().all(|e| e.table.is_zero()), || "tables for A/(x), A/(y) not identically zero".into())?;
    }
    Ok(format!("{reports} reports, none refuted; A/(x), A/(y) verified with zero tables"))
}

fn duality_suite() -> Outcome {
    let mut pairs = 0;
    for (name, _, modules) in gorenstein_corpus() {
        let checker = Checker::new(-8, 8);
        for m in &modules {
            for n in &modules {
                for r in [
                    checker.matlis_duality(m, n),
                    checker.balanced_tor(m, n),
                    checker.ar_duality(m, n),
                    checker.dagger_duality(m, n),
                ] {
                    let r = r.map_err(err)?;
                    ensure(r.verdict >= Verdict::Verified, || format!("{name}: {}", r.summary()))?;
                }
                pairs += 1;
            }
            let r = checker.betti_bass(m).map_err(err)?;
            ensure(r.verdict >= Verdict::Verified, || format!("{name}: {}", r.summary()))?;
        }
    }
    ensure(pairs >= 25, || format!("only {pairs} pairs"))?;
    Ok(format!("{pairs} module pairs, every equality exact on [-8, 8]"))
}

fn residue_field_profile() -> Outcome {
    let b = complete_intersection(2, &[2, 2]);
    let k = Module::residue_field(&b);
    let oracle = betti_numbers(&k, 8);
    ensure(oracle == (1..=9).collect::<Vec<_>>(), || format!("minimal resolution ranks {oracle:?}"))?;
    let direct = tate_ext(&k, &k, -8, 8).map_err(err)?;
    let dual_route = tate_ext(&k, &matlis_dual(&k), -8, 8).map_err(err)?;
    let tor = tate_tor(&k, &k, -8, 8).map_err(err)?;
    let bass = tate_ext(&k, &k, -8, 8).map_err(err)?;
    let beta = |i: i64| direct.get(i).unwrap();
    for i in 0..=8 {
        ensure(beta(i) == i as usize + 1, || format!("stable betti {i} = {}", beta(i)))?;
        ensure(beta(i) == oracle[i as usize], || format!("degree {i} differs from the minimal resolution"))?;
    }
    for i in 0..=7 {
        ensure(beta(-i - 1) == beta(i), || format!("betti {} != betti {i}", -i - 1))?;
        ensure(bass.get(-i - 1) == Some(beta(i)), || format!("bass {} != betti {i}", -i - 1))?;
    }
    ensure(dual_route.dims == direct.dims && tor.dims == direct.dims, || "Matlis-dual route disagrees".into())?;
    Ok(format!("stable betti {:?}", direct.dims))
}

fn linkage_criterion() -> Outcome {
    let c = complete_intersection(3, &[4]);
    let zero = LinkageDatum::zero(&c);
    let check = is_linked(&cyclic(&c, "x"), &cyclic(&c, "x^3"), &zero).map_err(err)?;
    ensure(check.linked, || "A/(x) and A/(x^3) not linked".into())?;
    let fwd = check.forward.ok_or("no forward witness")?;
    let bwd = check.backward.ok_or("no backward witness")?;
    ensure(fwd.is_iso() && bwd.is_iso(), || "witness is not invertible".into())?;
    let r = Checker::new(-8, 8).even_linkage(&NamedModule::new("A/(x)", cyclic(&c, "x"))).map_err(err)?;
    ensure(r.verdict >= Verdict::Verified, || r.summary())?;
    let mut fixed = 0;
    for (name, _, modules) in gorenstein_corpus() {
        for m in modules.iter().filter(|m| is_stable(&m.module)) {
            let back = link_operator(&link_operator(&m.module).map_err(err)?).map_err(err)?;
            ensure(is_iso(&back, &m.module).map_err(err)?.is_iso(), || format!("{name}: λλ{} not isomorphic", m.name))?;
            fixed += 1;
        }
    }
    Ok(format!("linked with witnesses; even linkage {}; λλ fixes {fixed} stable modules", r.verdict))
}

fn complexity_reduction() -> Outcome {
    let b = complete_intersection(2, &[2, 2]);
    let k = Module::residue_field(&b);
    let search = search_complexity_reduction(&k, &[2], 8, 16, DEFAULT_SEED).map_err(err)?;
    let found = search.found.ok_or("no reducing class found")?;
    let constant = |betti: &[usize]| betti[2..=8].iter().all(|&v| v == betti[2]);
    ensure(constant(&found.betti), || format!("betti of K_eta {:?}", found.betti))?;
    ensure(found.complexity.value() == Some(1), || format!("complexity {:?}", found.complexity.bound))?;
    // Exhaustive oracle over every nonzero combination of the Ext^2 basis.
    let classes = ext_classes(&k, &k, 2).map_err(err)?;
    let d = classes.basis.len();
    ensure(d == 3 && (1u32 << d) - 1 <= 8, || format!("Ext^2(k,k) has dimension {d}"))?;
    let mut witnesses = Vec::new();
    for code in 1u32..(1 << d) {
        let coeffs: Vec<u32> = (0..d).map(|i| (code >> i) & 1).collect();
        let kk = pushout_extension(&k, 2, &classes.combination(&coeffs)).map_err(err)?;
        if constant(&betti_numbers(&kk, 8)) {
            witnesses.push(coeffs);
        }
    }
    ensure(witnesses.contains(&found.coefficients), || format!("search chose {:?}, oracle found {witnesses:?}", found.coefficients))?;
    Ok(format!("eta = {:?}, betti {:?}; exhaustive search finds {} witnesses", found.coefficients, found.betti, witnesses.len()))
}

fn invariant_battery() -> Outcome {
    let corpus = gorenstein_corpus();
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    for trial in 0..100 {
        let (_, _, modules) = &corpus[rng.gen_range(0..corpus.len())];
        let m = &modules[rng.gen_range(0..modules.len())];
        let n = &modules[rng.gen_range(0..modules.len())];
        let g = random_invertible(m.module.field(), m.module.kdim(), &mut rng);
        let moved = m.module.change_basis(&g).map_err(err)?;
        for (a, b) in [(&moved, &n.module), (&n.module, &moved)] {
            let (a0, b0) = if std::ptr::eq(a, &moved) { (&m.module, b) } else { (a, &m.module) };
            ensure(tate_ext(a, b, -8, 8).map_err(err)?.dims == tate_ext(a0, b0, -8, 8).map_err(err)?.dims, || {
                format!("trial {trial}: Ext changed under a basis change of {}", m.name)
            })?;
            ensure(tate_tor(a, b, -8, 8).map_err(err)?.dims == tate_tor(a0, b0, -8, 8).map_err(err)?.dims, || {
                format!("trial {trial}: Tor changed under a basis change of {}", m.name)
            })?;
        }
    }
    let mut windows = 0;
    let mut pairs = 0;
    for (name, _, modules) in &corpus {
        let session = Session::default();
        for m in modules {
            let t = complete_resolution(&m.module, -8, 8).map_err(err)?;
            let c = t.checks();
            ensure(c.squares_vanish && c.exact && c.dual_exact, || format!("{name}: window checks for {}: {c:?}", m.name))?;
            windows += 1;
            for n in modules {
                let tate = session.tate_ext(&m.module, &n.module, 1, 8).map_err(err)?;
                let ordinary = ordinary_ext_dims(&m.module, &n.module, 8);
                ensure(tate.dims[..] == ordinary[1..], || format!("{name}: Ext({}, {}) differs from Tate Ext", m.name, n.name))?;
                pairs += 1;
            }
        }
    }
    Ok(format!("100 basis changes invariant; {windows} windows exact; {pairs} pairs agree with ordinary Ext"))
}

fn negative_controls() -> Outcome {
    let a = square_zero_plane();
    ensure(!a.is_gorenstein(), || "square-zero plane reported Gorenstein".into())?;
    let controls = theorems::negative_controls(&a);
    for (op, outcome) in &controls {
        ensure(matches!(outcome, Err(Error::NotGorenstein { socle_dim: 2 })), || format!("{op}: {outcome:?}"))?;
    }
    let ideal = Ideal::zero(&a);
    ensure(!quotient_algebra(&a, &ideal).map_err(err)?.algebra.is_gorenstein(), || "quotient check".into())?;
    Ok(format!("{} operations rejected with NotGorenstein", controls.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("periodic Tate table over the dual numbers", periodic_table),
        ("Tor min-formula over truncated polynomial rings", tor_min_formula),
        ("symmetry suite over the corpus", symmetry_suite),
        ("duality suite over the corpus", duality_suite),
        ("stable Betti profile of the residue field", residue_field_profile),
        ("linkage over F3[x]/(x^4)", linkage_criterion),
        ("complexity-reducing class for the residue field", complexity_reduction),
        ("invariant battery", invariant_battery),
        ("negative controls on a non-Gorenstein algebra", negative_controls),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {}: {name} ({secs:.2}s): {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {}: {name} ({secs:.2}s): {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

//! The acceptance gate: one check per criterion, each timed against its
//! limit. Prints a PASS/FAIL line for every criterion and fails if any does.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use stablehf::complex::{differential, enumerate_generators, homology, pi2_classes, stable_equal, verify_d_squared};
use stablehf::diagram::{connected_sum, corpus, make_lens, make_s1s2, make_s3_sphere, make_s3_torus, HeegaardDiagram};
use stablehf::domains::pi2prime_and_h2;
use stablehf::moves::{fuzz_invariance, random_move, FuzzLimits};
use stablehf::oracle::{brute_force_polygons, check_polygon_geometry, compare_polygons, maslov_additivity_sample};
use stablehf::poly::Poly;
use stablehf::twisted::{augmentation, twisted_complexes, univariate_homology, verify_twisted_d_squared};

type Check = fn() -> Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn timed(limit: Duration, what: &str, f: impl FnOnce() -> Result<(), String>) -> Result<(), String> {
    let t = Instant::now();
    f()?;
    let e = t.elapsed();
    ensure(e < limit, || format!("{what} took {e:?}, limit {limit:?}"))
}

fn sum(a: &HeegaardDiagram, b: &HeegaardDiagram) -> HeegaardDiagram {
    connected_sum(a, b, a.basepoints()[0], b.basepoints()[0]).unwrap()
}

/// The fixtures named by the chain-complex criterion.
fn base_fixtures() -> Vec<HeegaardDiagram> {
    corpus().into_iter().filter(|d| !d.name().starts_with("grid")).collect()
}

fn after_moves(d: &HeegaardDiagram, seed: u64, n: usize) -> (HeegaardDiagram, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cur = d.clone();
    let mut done = 0;
    for _ in 0..n {
        if let Some((_, next)) = random_move(&cur, &mut rng, FuzzLimits::default()) {
            cur = next;
            done += 1;
        }
    }
    (cur, done)
}

fn c1() -> Result<String, String> {
    let t = Instant::now();
    let mut checked = 0;
    for (i, d) in base_fixtures().iter().enumerate() {
        let (moved, done) = after_moves(d, 1000 + i as u64, 5);
        ensure(done == 5, || format!("{}: only {done} of 5 moves applied", d.name()))?;
        for e in [d, &moved] {
            let diff = differential(e).map_err(|x| x.to_string())?;
            ensure(verify_d_squared(&diff.matrix).ok, || format!("∂² ≠ 0 on {}", e.name()))?;
            checked += 1;
        }
    }
    let e = t.elapsed();
    ensure(e < Duration::from_secs(30), || format!("took {e:?}"))?;
    Ok(format!("{checked} complexes in {e:?}"))
}

fn c2() -> Result<String, String> {
    for (d, want) in [(make_s3_sphere(), 2), (make_s3_torus(), 1)] {
        timed(Duration::from_secs(1), d.name(), || {
            let h = homology(&d).map_err(|e| e.to_string())?;
            ensure(h.total == want, || format!("{}: dim {} ≠ {want}", d.name(), h.total))
        })?;
    }
    Ok("s3_sphere 2, s3_torus 1".into())
}

fn c3() -> Result<String, String> {
    let mut cases: Vec<(u32, u32)> = (2..=7).map(|p| (p, 1)).collect();
    cases.push((5, 2));
    for &(p, q) in &cases {
        let d = make_lens(p, q).map_err(|e| e.to_string())?;
        timed(Duration::from_secs(1), d.name(), || {
            let diff = differential(&d).map_err(|e| e.to_string())?;
            ensure(diff.matrix.is_zero(), || format!("{}: nonzero differential", d.name()))?;
            let classes = pi2_classes(&d, &diff.generators).map_err(|e| e.to_string())?;
            ensure(classes.len() == p as usize && classes.iter().all(|c| c.len() == 1), || {
                format!("{}: classes {classes:?}", d.name())
            })?;
            let h = homology(&d).map_err(|e| e.to_string())?;
            ensure(h.total == p as usize, || format!("{}: dim {}", d.name(), h.total))?;
            let gens = enumerate_generators(&d);
            for x in &gens {
                for y in &gens {
                    let found = brute_force_polygons(&d, x, y).map_err(|e| e.to_string())?;
                    ensure(found.is_empty(), || format!("{}: oracle found a polygon", d.name()))?;
                }
            }
            Ok(())
        })?;
    }
    Ok(format!("{} lens spaces", cases.len()))
}

fn c4() -> Result<String, String> {
    let s = make_s1s2();
    for d in [s.clone(), sum(&make_s3_torus(), &s)] {
        timed(Duration::from_secs(1), d.name(), || {
            let h = homology(&d).map_err(|e| e.to_string())?;
            ensure(h.total == 2, || format!("{}: dim {}", d.name(), h.total))
        })?;
    }
    Ok("s1s2 2, s3_torus#s1s2 2".into())
}

fn c5() -> Result<String, String> {
    let t = Instant::now();
    let mut kinds: BTreeMap<&'static str, usize> = BTreeMap::new();
    let mut total = 0;
    for (i, d) in corpus().iter().enumerate() {
        for seed in 0..2u64 {
            let r = fuzz_invariance(d, 6, 7919 * i as u64 + seed).map_err(|e| e.to_string())?;
            ensure(stable_equal(r.final_class, r.initial), || format!("{}: stable class moved", d.name()))?;
            for s in &r.steps {
                *kinds.entry(s.spec.name()).or_default() += 1;
            }
            total += r.steps.len();
        }
    }
    let e = t.elapsed();
    ensure(total >= 100, || format!("only {total} moves applied"))?;
    for k in ["isotopy", "handle_slide", "stab_b", "stab_g"] {
        ensure(kinds.get(k).copied().unwrap_or(0) > 0, || format!("no {k} move was exercised: {kinds:?}"))?;
    }
    ensure(e < Duration::from_secs(300), || format!("took {e:?}"))?;
    Ok(format!("{total} moves {kinds:?} in {e:?}"))
}

fn c6() -> Result<String, String> {
    let mut diagrams = corpus();
    for (i, d) in corpus().iter().enumerate() {
        diagrams.push(after_moves(d, 500 + i as u64, 2).0);
    }
    let mut polygons = 0;
    let mut checked = 0;
    for d in &diagrams {
        if d.region_count() > 22 {
            continue;
        }
        let r = compare_polygons(d).map_err(|e| e.to_string())?;
        ensure(r.ok(), || format!("{}: {:?}", d.name(), r.discrepancies))?;
        polygons += r.polygons;
        checked += 1;
    }
    Ok(format!("{checked} diagrams, {polygons} polygons, 0 discrepancies"))
}

fn c7() -> Result<String, String> {
    let mut diagrams = corpus();
    for (i, d) in corpus().iter().enumerate() {
        diagrams.push(after_moves(d, 700 + i as u64, 3).0);
    }
    let mut witnesses = 0;
    for d in &diagrams {
        let (n, fails) = check_polygon_geometry(d).map_err(|e| e.to_string())?;
        ensure(fails.is_empty(), || format!("{}: {:?}", d.name(), fails))?;
        witnesses += n;
    }
    ensure(witnesses > 0, || "no witnesses to check".into())?;
    Ok(format!("{witnesses} witnesses are disks with matching corners"))
}

fn c8() -> Result<String, String> {
    let t = Instant::now();
    let fixtures = corpus();
    for (i, d) in fixtures.iter().enumerate() {
        maslov_additivity_sample(d, 1000, i as u64).map_err(|e| e.to_string())?;
    }
    let e = t.elapsed();
    ensure(e < Duration::from_secs(10), || format!("took {e:?}"))?;
    Ok(format!("1000 pairs on each of {} fixtures in {e:?}", fixtures.len()))
}

fn c9() -> Result<String, String> {
    timed(Duration::from_secs(1), "s3_sphere", || {
        let (_, cs) = twisted_complexes(&make_s3_sphere()).map_err(|e| e.to_string())?;
        ensure(cs.len() == 1, || "expected one class".into())?;
        let c = &cs[0];
        ensure(c.matrix[0][1].to_string() == "1 + t" && c.matrix[1][0].is_zero(), || {
            format!("∂_T = {:?}", c.matrix)
        })?;
        ensure(verify_twisted_d_squared(c).ok, || "∂_T² ≠ 0".into())?;
        let h = univariate_homology(c).map_err(|e| e.to_string())?;
        ensure(h.divisors == vec![Poly::from_exponents([0, 1])] && h.gf2_dim == Some(1) && h.free_rank == 0, || {
            format!("{h:?}")
        })
    })?;
    timed(Duration::from_secs(1), "s3_torus", || {
        let (_, cs) = twisted_complexes(&make_s3_torus()).map_err(|e| e.to_string())?;
        let dim: Option<usize> = cs
            .iter()
            .map(|c| univariate_homology(c).ok().and_then(|h| h.gf2_dim))
            .sum();
        ensure(dim == Some(1), || format!("dimension {dim:?}"))
    })?;
    Ok("∂_T x = (1 + t) y, torsion 1 + t, dimension 1; torus dimension 1".into())
}

fn c10() -> Result<String, String> {
    let mut report = Vec::new();
    for d in base_fixtures() {
        let qhs = !d.name().contains("s1s2");
        let rank = pi2prime_and_h2(&d).map_err(|e| e.to_string())?.rank;
        let want = if qhs { d.b() - 1 } else { d.b() };
        ensure(rank == want, || format!("{}: rank {rank}, b = {}", d.name(), d.b()))?;
        report.push(format!("{}:{rank}", d.name()));
    }
    Ok(report.join(" "))
}

fn c11() -> Result<String, String> {
    let mut blocks = 0;
    for d in corpus() {
        let (diff, cs) = twisted_complexes(&d).map_err(|e| e.to_string())?;
        for c in &cs {
            ensure(augmentation(c) == diff.matrix.submatrix(&c.class), || format!("{}: mismatch", d.name()))?;
            blocks += 1;
        }
    }
    Ok(format!("{blocks} class blocks identical"))
}

#[test]
fn acceptance() {
    let checks: [(&str, Check); 11] = [
        ("∂² = 0 on fixtures and after moves", c1),
        ("dim of s3_sphere and s3_torus", c2),
        ("lens spaces", c3),
        ("s1s2 and s3_torus#s1s2", c4),
        ("move invariance", c5),
        ("polygon search equals exhaustion", c6),
        ("polygon geometry", c7),
        ("Maslov additivity", c8),
        ("twisted examples", c9),
        ("H₂ ranks", c10),
        ("augmentation consistency", c11),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in checks.iter().enumerate() {
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().unwrap_or_else(|| "panicked".into()))
        });
        let took = t.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS [{took:.2?}] {name}: {detail}", i + 1),
            Err(why) => {
                println!("criterion {:>2} FAIL [{took:.2?}] {name}: {why}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

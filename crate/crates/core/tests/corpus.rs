use std::path::PathBuf;

use stablehf::complex::{differential, enumerate_generators, homology, pi2_classes, stable_class, verify_d_squared};
use stablehf::diagram::{corpus, parse, serialize};
use stablehf::domains::pi2prime_and_h2;
use stablehf::oracle::compare_polygons;

fn diagrams_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../diagrams")
}

#[test]
fn shipped_files_match_the_builders() {
    for d in corpus() {
        let name = d.name().replace("L(", "lens_").replace(',', "_").replace(')', "").replace('#', "_sum_");
        let text = std::fs::read_to_string(diagrams_dir().join(format!("{name}.json"))).unwrap();
        let parsed = parse(&text).unwrap();
        assert_eq!(parsed, d, "{name}");
        assert_eq!(serialize(&parsed) + "\n", text);
    }
}

#[test]
fn every_fixture_is_a_nice_chain_complex() {
    for d in corpus() {
        assert!(d.validate().valid, "{}", d.name());
        assert!(d.is_nice().is_nice, "{}", d.name());
        let diff = differential(&d).unwrap();
        assert!(verify_d_squared(&diff.matrix).ok, "{}", d.name());
    }
}

#[test]
fn lens_spaces() {
    for d in corpus().into_iter().filter(|d| d.name().starts_with('L')) {
        let p = enumerate_generators(&d).len();
        let diff = differential(&d).unwrap();
        assert!(diff.matrix.is_zero());
        let classes = pi2_classes(&d, &diff.generators).unwrap();
        assert_eq!(classes.len(), p, "{}", d.name());
        assert_eq!(homology(&d).unwrap().total, p);
        assert_eq!(pi2prime_and_h2(&d).unwrap().rank, 0);
    }
}

#[test]
fn homology_of_the_other_fixtures() {
    let expect = [
        ("s3_sphere", 2, 2),
        ("s3_torus", 1, 1),
        ("s1s2", 2, 1),
        ("s3_torus#s1s2", 2, 1),
        ("s3_sphere#s3_torus", 2, 2),
        ("grid2", 2, 2),
        ("grid3", 4, 3),
    ];
    let all = corpus();
    for (name, dim, b) in expect {
        let d = all.iter().find(|d| d.name() == name).unwrap();
        let h = homology(d).unwrap();
        assert_eq!((h.total, d.b()), (dim, b), "{name}");
        let c = stable_class(d, &h);
        // every S³ fixture reduces to one copy of the field
        if name != "s1s2" && name != "s3_torus#s1s2" {
            assert_eq!(c.reduced(), (1, true), "{name}");
        }
    }
}

#[test]
fn exhaustion_agrees_on_the_corpus() {
    for d in corpus() {
        let r = compare_polygons(&d).unwrap();
        assert!(r.ok(), "{}: {:?}", d.name(), r.discrepancies);
    }
}

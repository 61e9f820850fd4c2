use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use stablehf::complex::{differential, homology, verify_d_squared};
use stablehf::diagram::{corpus, parse, serialize, HeegaardDiagram};
use stablehf::moves::{destabilize, random_move, swap_families, FuzzLimits, StabKind};
use stablehf::moves::{apply_stab_b, apply_stab_g};
use stablehf::oracle::{compare_polygons, maslov_additivity_sample};

fn fixture(i: usize) -> HeegaardDiagram {
    let all = corpus();
    all[i % all.len()].clone()
}

/// A fixture after a few seeded random moves, kept small.
fn walked(i: usize, seed: u64, steps: usize) -> HeegaardDiagram {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let limits = FuzzLimits { max_crossings: 16, max_generators: 120 };
    let mut d = fixture(i);
    for _ in 0..steps {
        match random_move(&d, &mut rng, limits) {
            Some((_, next)) => d = next,
            None => break,
        }
    }
    d
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn canonical_text_round_trips(i in 0usize..32, seed in any::<u64>()) {
        let d = walked(i, seed, 3);
        let text = serialize(&d);
        let back = parse(&text).unwrap();
        prop_assert_eq!(&back, &d);
        prop_assert_eq!(serialize(&back), text);
    }

    #[test]
    fn moves_keep_nice_chain_complexes(i in 0usize..32, seed in any::<u64>()) {
        let d = walked(i, seed, 3);
        prop_assert!(d.validate().valid);
        prop_assert!(d.is_nice().is_nice);
        prop_assert!(verify_d_squared(&differential(&d).unwrap().matrix).ok);
    }

    #[test]
    fn search_matches_exhaustion_after_moves(i in 0usize..32, seed in any::<u64>()) {
        let d = walked(i, seed, 2);
        let r = compare_polygons(&d).unwrap();
        prop_assert!(r.ok(), "{:?}", r.discrepancies);
    }

    #[test]
    fn maslov_is_additive(i in 0usize..32, seed in any::<u64>()) {
        let d = walked(i, seed, 2);
        maslov_additivity_sample(&d, 50, seed).unwrap();
    }

    #[test]
    fn swapping_families_is_an_involution(i in 0usize..32, seed in any::<u64>()) {
        let d = walked(i, seed, 2);
        let s = swap_families(&d).unwrap();
        prop_assert_eq!(homology(&s).unwrap().total, homology(&d).unwrap().total);
        prop_assert_eq!(swap_families(&s).unwrap(), d);
    }

    #[test]
    fn stabilizing_then_destabilizing_is_identity(i in 0usize..32, seed in any::<u64>(), w in 0usize..8) {
        let d = walked(i, seed, 1);
        let face = d.basepoints()[w % d.basepoints().len()];
        let b = apply_stab_b(&d, face).unwrap();
        prop_assert_eq!(destabilize(&b, StabKind::B).unwrap(), d.clone());
        let g = apply_stab_g(&d, face).unwrap();
        prop_assert_eq!(destabilize(&g, StabKind::G).unwrap(), d);
    }
}

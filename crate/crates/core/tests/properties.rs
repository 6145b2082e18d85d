use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cubekit::covers::{compute_cover, CoverSpec};
use cubekit::cubes::enumerate_cubes;
use cubekit::fixtures::builtin;
use cubekit::homology::{
    build_chain_complex, determinant, homology_groups, smith_normal_form, smith_normal_form_with_transforms,
    verify_snf, AbelianGroup, IntMatrix,
};
use cubekit::presentation::{extract_subpresentation, make_free_product, verify_vh_axioms};
use cubekit::rank_graph::adjacency_matrices;

fn subsets(n: usize, r: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == r)
        .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect())
        .collect()
}

/// Invariant factors from gcds of i x i minors.
fn determinantal_divisors(a: &[Vec<i64>]) -> Vec<BigInt> {
    let (rows, cols) = (a.len(), a[0].len());
    let mut prev = BigInt::from(1);
    let mut out = Vec::new();
    for i in 1..=rows.min(cols) {
        let mut g = BigInt::zero();
        for rs in subsets(rows, i) {
            for cs in subsets(cols, i) {
                let minor: Vec<Vec<i64>> = rs.iter().map(|&r| cs.iter().map(|&c| a[r][c]).collect()).collect();
                g = g.gcd(&determinant(&IntMatrix::from_dense(&minor)));
            }
        }
        if g.is_zero() {
            break;
        }
        out.push(&g / &prev);
        prev = g;
    }
    out
}

fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..5, 1usize..5).prop_flat_map(|(r, c)| proptest::collection::vec(proptest::collection::vec(-6i64..7, c), r))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn snf_matches_minor_gcds(a in small_matrix()) {
        let m = IntMatrix::from_dense(&a);
        let r = smith_normal_form_with_transforms(&m);
        prop_assert!(verify_snf(&m, &r).is_ok());
        prop_assert_eq!(&r.divisors, &determinantal_divisors(&a));
        prop_assert_eq!(smith_normal_form(&m).divisors, r.divisors);
    }

    #[test]
    fn square_determinant_is_divisor_product(a in (1usize..5).prop_flat_map(|n| proptest::collection::vec(proptest::collection::vec(-6i64..7, n), n))) {
        let m = IntMatrix::from_dense(&a);
        let r = smith_normal_form(&m);
        let prod: BigInt = if r.rank == a.len() { r.divisors.iter().product() } else { BigInt::zero() };
        prop_assert_eq!(determinant(&m).abs(), prod);
    }

    #[test]
    fn free_product_subpresentations(ranks in proptest::collection::vec(2usize..4, 2..5), pick in 0usize..4) {
        let i = pick % ranks.len();
        let p = make_free_product(&ranks).unwrap();
        let sub = extract_subpresentation(&p, &BTreeSet::from([i])).unwrap();
        let mut rest = ranks.clone();
        rest.remove(i);
        let direct = make_free_product(&rest).unwrap();
        prop_assert_eq!(sub.sizes(), direct.sizes());
        prop_assert_eq!(sub.relators, direct.relators);
    }

    #[test]
    fn dropping_relators_keeps_the_axiom_equivalence(name in prop::sample::select(vec!["gamma357", "gamma234", "f3-3"]), drop in proptest::collection::vec(0usize..100, 0..3)) {
        let mut p = builtin(name).unwrap();
        for d in drop {
            let n = p.relators.len();
            p.relators.remove(d % n);
        }
        let r = verify_vh_axioms(&p);
        prop_assert_eq!(r.c1prime_pass, r.c1_pass && r.c2_pass);
        for c in &r.component_sizes {
            if r.c2_pass {
                prop_assert_eq!(c.size, c.expected);
            }
        }
    }

    #[test]
    fn four_dimensional_covers(tags in proptest::collection::vec((any::<bool>(), 1u64..9), 4)) {
        prop_assume!(tags.iter().any(|t| !t.0));
        let text: Vec<String> = tags.iter().map(|(d, n)| format!("{}:{n}", if *d { "D" } else { "T" })).collect();
        let s: CoverSpec = text.join(",").parse().unwrap();
        let g = s.g_corrected();
        let h = compute_cover(&s).unwrap().homology;
        let cyclic = |e: usize| AbelianGroup::new(0, std::iter::repeat_n(num_bigint::BigUint::from(g), e));
        prop_assert_eq!(&h[1], &cyclic(3));
        prop_assert_eq!(&h[2], &cyclic(3));
        prop_assert_eq!(&h[3], &cyclic(1));
    }
}

#[test]
fn homology_ignores_vertex_order() {
    for name in ["f2-3", "gamma357", "f3-3"] {
        let p = builtin(name).unwrap();
        let m = adjacency_matrices(&enumerate_cubes(&p, p.k()).unwrap(), &p.sizes()).unwrap();
        let h = homology_groups(&build_chain_complex(p.k(), &m).unwrap());
        for seed in 0..3 {
            let mut perm: Vec<usize> = (0..m.n()).collect();
            perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
            let hp = homology_groups(&build_chain_complex(p.k(), &m.permuted(&perm)).unwrap());
            assert_eq!(hp, h, "{name} seed {seed}");
        }
    }
}

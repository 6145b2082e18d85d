use cubekit::cellular::cellular_report;
use cubekit::cubes::{check_c3, direction_sets_pub, enumerate_cubes, enumerate_cubes_in};
use cubekit::fixtures::builtin;
use cubekit::homology::{build_chain_complex, homology_groups, smith_normal_form, AbelianGroup};
use cubekit::ktheory::{ktheory_report, KTheoryInput};
use cubekit::presentation::verify_vh_axioms;
use cubekit::rank_graph::{adjacency_matrices, validate_k_graph, AdjacencyMatrices, UceMode};

const FIXTURES: [&str; 5] = ["gamma357", "gamma234", "f2-3", "f3-3", "f2-4"];

fn matrices(name: &str) -> AdjacencyMatrices {
    let p = builtin(name).unwrap();
    adjacency_matrices(&enumerate_cubes(&p, p.k()).unwrap(), &p.sizes()).unwrap()
}

fn strings(h: &[AbelianGroup]) -> Vec<String> {
    h.iter().map(|g| g.to_string()).collect()
}

#[test]
fn counts_are_products_of_sizes() {
    for name in FIXTURES.iter().chain(&["gamma1234"]) {
        let p = builtin(name).unwrap();
        assert!(verify_vh_axioms(&p).passed(), "{name}");
        assert!(check_c3(&p).pass, "{name}");
        let sizes = p.sizes();
        for n in 1..=p.k() {
            for dirs in direction_sets_pub(p.k(), n) {
                let want: usize = dirs.iter().map(|&d| sizes[d]).product();
                assert_eq!(enumerate_cubes_in(&p, &dirs).unwrap().len(), want, "{name} {dirs:?}");
            }
        }
    }
    assert_eq!(enumerate_cubes(&builtin("gamma1234").unwrap(), 4).unwrap().len(), 1296);
}

#[test]
fn reflections_stay_inside() {
    for name in ["gamma357", "f2-4"] {
        let p = builtin(name).unwrap();
        let s = enumerate_cubes(&p, p.k()).unwrap();
        for c in &s.cubes {
            for mask in 0..1usize << p.k() {
                assert!(s.contains(&c.reflect(mask)), "{name}");
            }
        }
    }
}

#[test]
fn graphs_are_valid_with_balanced_sums() {
    for name in FIXTURES {
        let r = validate_k_graph(&matrices(name), UceMode::default());
        assert!(r.is_k_graph, "{name}: {:?}", r.witnesses);
        assert_eq!(r.column_sum_pass, Some(true), "{name}");
        assert_eq!(r.row_sums_match_columns, Some(true), "{name}");
    }
    let r = validate_k_graph(&matrices("f2-3"), UceMode::Exhaustive);
    assert!(r.uce.pass && r.uce.failures == 0);
}

#[test]
fn homology_of_fixtures() {
    let want: [(&str, &[&str]); 5] = [
        (
            "gamma357",
            &["Z^7 + (Z/4)^2 + Z/12", "Z^21 + (Z/2)^6 + (Z/4)^2 + (Z/12)^2", "Z^21 + (Z/4)^2 + Z/12", "Z^7"],
        ),
        (
            "gamma234",
            &["Z^9 + Z/2 + Z/20 + Z/80", "Z^27 + (Z/2)^4 + (Z/4)^2 + (Z/8)^2", "Z^27 + Z/2 + Z/20 + Z/80", "Z^9"],
        ),
        ("f2-3", &["Z^8", "Z^24", "Z^24", "Z^8"]),
        ("f3-3", &["Z^27 + (Z/2)^37", "Z^81 + (Z/2)^74", "Z^81 + (Z/2)^37", "Z^27"]),
        ("f2-4", &["Z^16", "Z^64", "Z^96", "Z^64", "Z^16"]),
    ];
    for (name, h) in want {
        let m = matrices(name);
        let c = build_chain_complex(m.k(), &m).unwrap();
        c.verify_chain().unwrap();
        let got = homology_groups(&c);
        assert_eq!(strings(&got), h, "{name}");
        // top homology is free, and the Euler characteristic of the complex vanishes
        let chi: i64 = got.iter().enumerate().map(|(i, g)| (1 - 2 * (i as i64 % 2)) * g.free_rank as i64).sum();
        assert_eq!(chi, 0, "{name}");
        ktheory_report(&got, &KTheoryInput::default()).check_sequences().unwrap();
    }
}

#[test]
fn first_boundary_divisors_of_gamma357() {
    let m = matrices("gamma357");
    let c = build_chain_complex(3, &m).unwrap();
    let d = smith_normal_form(&c.boundaries[0]).divisors;
    assert_eq!(d.len(), 185);
    assert!(d[..182].iter().all(|x| *x == 1.into()));
    assert_eq!(d[182..], [4.into(), 4.into(), 12.into()]);
}

/// Reading M_i the other way round gives the opposite graph. On these fixtures
/// it has the same homology, so the homology alone cannot pin the orientation.
#[test]
fn opposite_graph_has_the_same_homology() {
    for name in FIXTURES {
        let m = matrices(name);
        let t = AdjacencyMatrices {
            matrices: m.matrices.iter().map(|x| x.transpose()).collect(),
            ..m.clone()
        };
        let a = homology_groups(&build_chain_complex(m.k(), &m).unwrap());
        let b = homology_groups(&build_chain_complex(m.k(), &t).unwrap());
        assert_eq!(a, b, "{name}");
    }
}

#[test]
fn cellular_fixtures() {
    let want: [(&str, &[&str]); 3] = [
        ("f2-3", &["Z", "Z^6", "Z^12", "Z^8"]),
        ("gamma234", &["Z", "Z/2 + (Z/10)^2", "Z/20 + Z/40", "Z^9"]),
        ("f3-3", &["Z", "Z^9", "Z^27", "Z^27"]),
    ];
    for (name, h) in want {
        let r = cellular_report(&builtin(name).unwrap()).unwrap();
        assert_eq!(strings(&r.homology), h, "{name}");
        assert_eq!(r.euler_characteristic, r.homology_euler_characteristic, "{name}");
        assert!(r.loop_free);
    }
    // the Euler characteristic pins H_3 for gamma357: 1 - 9 + 26 - 24 = -6
    let r = cellular_report(&builtin("gamma357").unwrap()).unwrap();
    assert_eq!(r.euler_characteristic, -6);
    assert_eq!(strings(&r.homology), ["Z", "(Z/2)^2 + (Z/4)^2", "(Z/2)^2 + Z/12", "Z^7"]);
}

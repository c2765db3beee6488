use std::collections::BTreeSet;

use num_bigint::BigUint;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use nfold::coherence::{closure_matrix, hom_exists, rewrite_closure};
use nfold::cubes::{self, in_g, realize, Configuration};
use nfold::enumeration::{build_poset, degeneracy, enumerate, operad_compose, permutations, shape_sequence};
use nfold::graph_operads::{forget_and_map, gamma_member};
use nfold::milgram::{ascending, downset, q_map, OrderedPartition};
use nfold::{Expr, Label, Op};

fn factorial(k: usize) -> BigUint {
    (1..=k as u32).product()
}

#[test]
fn enumeration_matches_recurrence() {
    for n in 1..=4u8 {
        let a = shape_sequence(n, 5);
        for k in 1..=5 {
            let objs = enumerate(n, k, false);
            assert_eq!(BigUint::from(objs.len()), factorial(k) * &a[k], "n={n} k={k}");
            let distinct: BTreeSet<&Expr> = objs.iter().collect();
            assert_eq!(distinct.len(), objs.len());
        }
    }
}

#[test]
fn relabeling_orbits_are_free() {
    for (n, k) in [(3, 4), (4, 3)] {
        let objs: BTreeSet<Expr> = enumerate(n, k, false).into_iter().collect();
        let mut seen = BTreeSet::new();
        for x in &objs {
            if seen.contains(x) {
                continue;
            }
            let orbit: BTreeSet<Expr> = permutations(k).iter().map(|s| x.permute(s).unwrap()).collect();
            assert_eq!(orbit.len(), permutations(k).len(), "{x}");
            assert!(orbit.is_subset(&objs));
            seen.extend(orbit);
        }
    }
}

#[test]
fn morphisms_form_a_partial_order() {
    for (n, k) in [(3, 3), (4, 2)] {
        let p = build_poset(n, k, false);
        assert!(p.is_partial_order());
        assert!(p.covers_generate_order());
    }
}

#[test]
fn degeneracies_preserve_morphisms() {
    let objs = enumerate(3, 3, false);
    let m = closure_matrix(&objs, 3);
    for (i, a) in objs.iter().enumerate() {
        for (j, b) in objs.iter().enumerate() {
            if !m[i][j] {
                continue;
            }
            for l in 1..=3 {
                assert!(hom_exists(&degeneracy(a, l).unwrap(), &degeneracy(b, l).unwrap()).unwrap(), "{a} -> {b}, drop {l}");
            }
        }
    }
}

#[test]
fn degeneracy_commutes_with_partitions() {
    for k in 1..=4 {
        for x in downset(2, &ascending(2, k), true).unwrap().elements() {
            let p = OrderedPartition::from_expr(x).unwrap();
            for i in 1..=k as Label {
                assert_eq!(p.degeneracy(i).to_expr(), degeneracy(x, i).unwrap(), "{x} drop {i}");
            }
        }
    }
}

#[test]
fn composition_is_monotone() {
    let two = enumerate(3, 2, false);
    let m = closure_matrix(&two, 3);
    let inner = [Expr::parse("1 #2 2", 3).unwrap(), Expr::gen(1)];
    for (i, a) in two.iter().enumerate() {
        for (j, b) in two.iter().enumerate() {
            if m[i][j] {
                let (ca, cb) = (operad_compose(a, &inner).unwrap(), operad_compose(b, &inner).unwrap());
                assert!(rewrite_closure(&ca, 3).contains(&cb), "{ca} -> {cb}");
            }
        }
    }
}

#[test]
fn chains_map_into_the_smith_filtration() {
    for (n, k) in [(2, 3), (3, 3)] {
        let p = build_poset(n, k, false);
        for chain in p.maximal_chains() {
            let objs: Vec<Expr> = chain.iter().map(|&i| p.get(i).clone()).collect();
            let s = forget_and_map(&objs).unwrap();
            assert!(gamma_member(&s, n), "chain {objs:?}");
        }
    }
}

#[test]
fn q_lands_below_the_ascending_word() {
    let n: Op = 4;
    let cells: Vec<Expr> = downset(2, &ascending(2, 3), true).unwrap().elements().to_vec();
    let top = ascending(n, 3);
    for a in &cells {
        for b in &cells {
            for c in &cells {
                let r = q_map(n, &[a.clone(), b.clone(), c.clone()]).unwrap();
                assert!(r.is_level_ordered(), "{r}");
                assert!(hom_exists(&r, &top).unwrap(), "{r}");
            }
        }
    }
}

#[test]
fn realizations_in_four_dimensions() {
    for k in 1..=3 {
        for a in enumerate(4, k, false) {
            assert!(in_g(&realize(&a, 4).unwrap(), &a).unwrap(), "{a}");
        }
    }
}

#[test]
fn composed_realizations_in_three_dimensions() {
    let outers = enumerate(3, 2, false);
    let inners: Vec<Expr> = (1..=2).flat_map(|k| enumerate(3, k, false)).collect();
    for o in &outers {
        for x in &inners {
            for y in &inners {
                let comp = operad_compose(o, &[x.clone(), y.clone()]).unwrap();
                let c = cubes::cubes_compose(
                    &realize(o, 3).unwrap(),
                    &[realize(x, 3).unwrap(), realize(y, 3).unwrap()],
                )
                .unwrap();
                assert!(in_g(&c, &comp).unwrap(), "{o} with {x}, {y}");
            }
        }
    }
}

#[test]
fn random_configurations_round_trip_json() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        if let Some(c) = cubes::random_configuration(3, 4, 10, &mut rng) {
            assert_eq!(Configuration::from_json(&c.to_json()).unwrap(), c);
        }
    }
}

fn arb_expr(max_op: Op) -> impl Strategy<Value = Expr> {
    let leaf = (1u32..=40).prop_map(Expr::gen);
    leaf.prop_recursive(4, 24, 4, move |inner| {
        (1..=max_op, prop::collection::vec(inner, 2..4)).prop_map(|(op, ch)| Expr::product(op, ch))
    })
}

proptest! {
    #[test]
    fn render_parse_round_trip(e in arb_expr(4)) {
        prop_assert_eq!(Expr::parse(&e.render(), 4).unwrap(), e);
    }

    #[test]
    fn pair_tables_realize_back(e in arb_expr(3)) {
        prop_assume!(e.check_distinct().is_ok());
        let t = e.pair_table(3).unwrap();
        prop_assert_eq!(t.realize(), Some(e));
    }
}

//! The worked examples and figures of the source text, as named checks.

use std::collections::BTreeSet;

use nfold::coherence::{covers, hom_exists, one_step_rewrites, reachability_witness};
use nfold::cubes::{self, decomposable, in_g, q, realize, Configuration, LittleCube, Mode};
use nfold::enumeration::{build_poset, enumerate, operad_compose, permutations, shape_sequence};
use nfold::graph_operads::{forget_and_map, gamma_member, gamma_simplices, GammaSimplex};
use nfold::milgram::{perm_action, permutohedron, pi_retract, q_from_chain, q_map, OrderedPartition};
use nfold::topology::{gamma_chain_complex, homology, order_complex};
use nfold::{Expr, Label, Op};

type Check = Result<(), String>;

pub struct Recipe {
    pub name: &'static str,
    pub check: fn() -> Check,
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn expect_eq<T: PartialEq + std::fmt::Debug>(got: T, want: T) -> Check {
    ensure(got == want, || format!("got {got:?}, expected {want:?}"))
}

fn e(s: &str) -> Expr {
    Expr::parse(s, Op::MAX).expect("recipe expressions parse")
}

fn str_err<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|x| x.to_string())
}

fn config(n: Op, boxes: &[(Label, &[(i64, i64, i64, i64)])]) -> Configuration {
    Configuration::new(
        n,
        boxes
            .iter()
            .map(|(l, ivs)| LittleCube::new(*l, ivs.iter().map(|&(a, b, c, d)| (q(a, b), q(c, d))).collect()))
            .collect(),
    )
    .expect("figure coordinates form a configuration")
}

/// Four planar boxes turning around the center.
pub fn pinwheel() -> Configuration {
    config(
        2,
        &[
            (1, &[(0, 1, 3, 4), (0, 1, 1, 4)]),
            (2, &[(3, 4, 1, 1), (0, 1, 3, 4)]),
            (3, &[(0, 1, 1, 4), (1, 4, 1, 1)]),
            (4, &[(1, 4, 1, 1), (3, 4, 1, 1)]),
        ],
    )
}

/// Three interlocking boxes in the unit 3-cube.
pub fn three_cube_knot() -> Configuration {
    config(
        3,
        &[
            (1, &[(0, 1, 1, 2), (0, 1, 1, 1), (0, 1, 1, 2)]),
            (2, &[(0, 1, 1, 1), (0, 1, 1, 2), (1, 2, 1, 1)]),
            (3, &[(1, 2, 1, 1), (1, 2, 1, 1), (0, 1, 1, 1)]),
        ],
    )
}

/// A configuration in `G((1 #2 2) #1 (3 #2 4))`.
pub fn g_figure() -> Configuration {
    config(
        2,
        &[
            (1, &[(0, 1, 1, 2), (0, 1, 1, 2)]),
            (2, &[(0, 1, 1, 2), (1, 2, 1, 1)]),
            (3, &[(1, 2, 1, 1), (0, 1, 1, 4)]),
            (4, &[(1, 2, 1, 1), (1, 4, 1, 1)]),
        ],
    )
}

/// Six boxes cut first by vertical lines, then horizontally in each strip.
pub fn milgram_left() -> Configuration {
    config(
        2,
        &[
            (1, &[(0, 1, 1, 4), (3, 4, 1, 1)]),
            (2, &[(1, 4, 3, 4), (0, 1, 1, 2)]),
            (3, &[(0, 1, 1, 4), (0, 1, 1, 4)]),
            (4, &[(3, 4, 1, 1), (0, 1, 3, 4)]),
            (5, &[(3, 4, 1, 1), (3, 4, 1, 1)]),
            (6, &[(0, 1, 1, 4), (1, 4, 3, 4)]),
        ],
    )
}

/// Decomposable, but the first cut must be horizontal.
pub fn milgram_right() -> Configuration {
    config(
        2,
        &[
            (1, &[(0, 1, 1, 2), (1, 2, 1, 1)]),
            (2, &[(0, 1, 1, 1), (0, 1, 1, 2)]),
            (3, &[(1, 2, 1, 1), (1, 2, 1, 1)]),
        ],
    )
}

pub const Q_CELLS: [&str; 3] = ["(1 #2 3) #1 (2 #2 4 #2 5)", "(1 #2 3 #2 4) #1 (2 #2 5)", "(1 #2 2 #2 4 #2 5) #1 3"];
pub const Q_PRINTED_CHAIN: [&str; 3] = ["(1 #2 3) #1 (2 #2 4 #2 5)", "(1 #2 3) #1 4 #1 (2 #2 5)", "3 #1 1 #1 4 #1 (2 #2 5)"];
pub const Q_RESULT: &str = "(3 #3 1) #1 (4 #2 (2 #4 5))";

/// Recipes whose printed expectation cannot be reproduced from the printed
/// input; see the README.
pub const KNOWN_RED: [&str; 2] = ["qmap-worked-example", "cli-export-qmap"];

fn run_cli(args: &[&str]) -> Result<String, String> {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = crate::run(std::iter::once("nfold").chain(args.iter().copied()).map(String::from), &mut out, &mut err);
    let out = String::from_utf8(out).map_err(|x| x.to_string())?;
    if code != 0 {
        return Err(format!("exit {code}: {}", String::from_utf8_lossy(&err).trim()));
    }
    Ok(out)
}

pub fn recipes() -> Vec<Recipe> {
    vec![
        Recipe {
            name: "parse-and-render",
            check: || {
                let a = str_err(Expr::parse("(2 #2 3) #1 1", 2))?;
                expect_eq(a.clone(), Expr::Node(1, vec![Expr::Node(2, vec![Expr::Gen(2), Expr::Gen(3)]), Expr::Gen(1)]))?;
                expect_eq(a.render().as_str(), "(2 #2 3) #1 1")
            },
        },
        Recipe {
            name: "restriction",
            check: || {
                let a = e("(2 #2 3) #1 1");
                expect_eq(a.restrict(&[1, 2].into()).render(), "2 #1 1".to_string())?;
                expect_eq(a.restrict(&[2, 3].into()).render(), "2 #2 3".to_string())
            },
        },
        Recipe {
            name: "pair-relations",
            check: || {
                let t = str_err(e("(2 #2 3) #1 1").pair_table(2))?;
                expect_eq(t.relation(2, 3), Some((2, 2)))?;
                expect_eq(t.relation(2, 1), Some((1, 2)))?;
                expect_eq(t.relation(3, 1), Some((1, 3)))
            },
        },
        Recipe { name: "level-ordered-shape", check: || ensure(e("(1 #2 2) #1 3").is_level_ordered(), || "not level ordered".into()) },
        Recipe {
            name: "morphism-example",
            check: || ensure(str_err(hom_exists(&e("(2 #2 3) #1 1"), &e("2 #2 1 #2 3")))?, || "no morphism found".into()),
        },
        Recipe {
            name: "non-morphism-example",
            check: || ensure(!str_err(hom_exists(&e("(2 #2 3) #1 1"), &e("1 #2 3 #2 2")))?, || "unexpected morphism".into()),
        },
        Recipe {
            name: "octahedron-arrows-from-bottom",
            check: || {
                let got: BTreeSet<String> = one_step_rewrites(&e("2 #1 1"), 3).into_iter().map(|(_, t)| t.render()).collect();
                let want: BTreeSet<String> = ["2 #2 1", "1 #2 2", "2 #3 1", "1 #3 2"].map(String::from).into();
                expect_eq(got, want)
            },
        },
        Recipe {
            name: "full-interchange",
            check: || {
                let got: BTreeSet<String> =
                    one_step_rewrites(&e("(1 #2 2) #1 (3 #2 4)"), 2).into_iter().map(|(_, t)| t.render()).collect();
                ensure(got.contains("(1 #1 3) #2 (2 #1 4)"), || format!("targets {got:?}"))
            },
        },
        Recipe {
            name: "octahedron-edge-witness",
            check: || {
                let w = str_err(reachability_witness(&e("2 #1 1"), &e("1 #2 2"), 2, None))?.ok_or("no witness")?;
                expect_eq(w.iter().map(|(s, _)| s.name()).collect::<Vec<_>>(), vec!["η^{12}_{0,2,1,0}".to_string()])
            },
        },
        Recipe {
            name: "square-covers",
            check: || {
                let mut c: Vec<String> = str_err(covers(2, &e("1 #1 2")))?.iter().map(Expr::render).collect();
                c.sort();
                expect_eq(c, vec!["1 #2 2".to_string(), "2 #2 1".to_string()])
            },
        },
        Recipe { name: "octahedron-object-count", check: || expect_eq(enumerate(3, 2, false).len(), 6) },
        Recipe {
            name: "closed-form-counts",
            check: || {
                for n in 1..=6u64 {
                    let a = shape_sequence(n as Op, 4);
                    let want = [n, 2 * n * n - n, 5 * n * n * n - 5 * n * n + n];
                    for (k, w) in (2..=4).zip(want) {
                        expect_eq(a[k].clone(), w.into()).map_err(|m| format!("a^{n}_{k}: {m}"))?;
                    }
                }
                expect_eq(shape_sequence(3, 4)[4].clone(), 93u32.into())
            },
        },
        Recipe {
            name: "ratio-limit",
            check: || {
                use num_rational::BigRational;
                use num_traits::ToPrimitive;
                for n in 2..=4u8 {
                    let a = shape_sequence(n, 40);
                    let r: Vec<BigRational> =
                        (2..40).map(|k| BigRational::new(a[k + 1].clone().into(), a[k].clone().into())).collect();
                    let nf = n as f64;
                    let limit = 2.0 * nf - 1.0 + 2.0 * (nf * nf - nf).sqrt();
                    ensure(r.windows(2).all(|w| w[0] < w[1]), || format!("n={n}: ratios not increasing"))?;
                    let last = r.last().and_then(|x| x.to_f64()).unwrap_or(f64::NAN);
                    ensure(last < limit, || format!("n={n}: ratio {last} above {limit}"))?;
                }
                Ok(())
            },
        },
        Recipe {
            name: "octahedron-poset",
            check: || {
                let p = build_poset(3, 2, false);
                expect_eq(p.len(), 6)?;
                expect_eq(p.comparable_pairs().len(), 12)?;
                let generators: usize = p.elements().iter().map(|x| one_step_rewrites(x, 3).len()).sum();
                expect_eq(generators, 12)?;
                expect_eq(p.maximal_chains().len(), 8)?;
                ensure(p.maximal_chains().iter().all(|c| c.len() == 3), || "chains of wrong length".into())
            },
        },
        Recipe {
            name: "square-poset",
            check: || {
                let p = build_poset(2, 2, false);
                expect_eq((p.len(), p.cover_edges().len(), p.maximal_chains().len()), (4, 4, 4))
            },
        },
        Recipe {
            name: "complete-graph-order-on-example",
            check: || {
                let a = str_err(e("(2 #2 3) #1 1").pair_table(2))?;
                let b = str_err(e("2 #2 1 #2 3").pair_table(2))?;
                ensure(str_err(nfold::graph_operads::k_leq(&a, &b))?, || "tables not ordered".into())
            },
        },
        Recipe {
            name: "smith-filtration-membership",
            check: || {
                let s = str_err(GammaSimplex::new(vec![vec![1, 2, 3], vec![2, 1, 3], vec![2, 3, 1], vec![2, 1, 3]]))?;
                expect_eq((gamma_member(&s, 3), gamma_member(&s, 2)), (true, false))
            },
        },
        Recipe {
            name: "gamma-two-letters",
            check: || {
                for n in 2..=4u8 {
                    let g = gamma_simplices(n, 2);
                    expect_eq(g.iter().map(Vec::len).collect::<Vec<_>>(), vec![2; n as usize])?;
                }
                Ok(())
            },
        },
        Recipe {
            name: "forget-octahedron-edge",
            check: || {
                let s = str_err(forget_and_map(&[e("1 #1 2"), e("2 #2 1")]))?;
                expect_eq(s.chain.clone(), vec![vec![1, 2], vec![2, 1]])?;
                ensure(!s.is_degenerate() && gamma_member(&s, 2), || "not a nondegenerate edge".into())
            },
        },
        Recipe {
            name: "octahedron-f-vector",
            check: || expect_eq(order_complex(&build_poset(3, 2, false)).f, vec![6, 12, 8]),
        },
        Recipe {
            name: "gamma-circle",
            check: || {
                let h = str_err(homology(&gamma_chain_complex(2, 2)))?;
                expect_eq((h.f, h.betti), (vec![2, 2], vec![1, 1]))
            },
        },
        Recipe {
            name: "octahedron-spheres",
            check: || {
                for n in 2..=5u8 {
                    let h = str_err(homology(&order_complex(&build_poset(n, 2, false))))?;
                    let mut want = vec![0; n as usize];
                    want[0] = 1;
                    want[n as usize - 1] = 1;
                    expect_eq(&h.betti, &want).map_err(|m| format!("n={n}: {m}"))?;
                    ensure(!h.has_torsion(), || format!("torsion at n={n}"))?;
                }
                Ok(())
            },
        },
        Recipe {
            name: "permutohedron-contractible",
            check: || {
                let h = str_err(homology(&order_complex(&str_err(permutohedron(3))?)))?;
                expect_eq(h.betti_trimmed(), vec![1])
            },
        },
        Recipe { name: "hexagon-size", check: || expect_eq(str_err(permutohedron(3))?.len(), 13) },
        Recipe {
            name: "hexagon-vertex-partition",
            check: || expect_eq(str_err(OrderedPartition::from_expr(&e("(1 #2 2) #1 3")))?.blocks, vec![vec![1, 2], vec![3]]),
        },
        Recipe {
            name: "reversal-action",
            check: || {
                let got = str_err(perm_action(&[6, 5, 4, 3, 2, 1], &e("(2 #2 4) #1 (3 #2 5 #2 6) #1 1")))?;
                expect_eq(got.render().as_str(), "(3 #2 5) #1 (1 #2 2 #2 4) #1 6")
            },
        },
        Recipe {
            name: "retraction-example",
            check: || {
                let got = str_err(pi_retract(&e(Q_CELLS[0]), &e(Q_CELLS[1])))?;
                expect_eq(got.render().as_str(), Q_PRINTED_CHAIN[1])
            },
        },
        Recipe {
            name: "retraction-composition-on-hexagon",
            check: || {
                let pk = str_err(permutohedron(3))?;
                for a in pk.elements() {
                    for b in pk.elements() {
                        let ab = str_err(pi_retract(a, b))?;
                        for c in pk.elements() {
                            let lhs = str_err(pi_retract(a, &str_err(pi_retract(b, c))?))?;
                            let rhs = str_err(pi_retract(&ab, c))?;
                            expect_eq(&lhs, &rhs).map_err(|m| format!("A={a}, B={b}, C={c}: {m}"))?;
                        }
                    }
                }
                Ok(())
            },
        },
        Recipe {
            name: "qmap-worked-example",
            check: || {
                let cells: Vec<Expr> = Q_CELLS.iter().map(|s| e(s)).collect();
                expect_eq(str_err(q_map(4, &cells))?.render().as_str(), Q_RESULT)
            },
        },
        Recipe {
            name: "qmap-from-printed-chain",
            check: || {
                let chain: Vec<Expr> = Q_PRINTED_CHAIN.iter().map(|s| e(s)).collect();
                expect_eq(str_err(q_from_chain(4, &chain))?.render().as_str(), Q_RESULT)
            },
        },
        Recipe {
            name: "g-figure",
            check: || ensure(str_err(in_g(&g_figure(), &e("(1 #2 2) #1 (3 #2 4)")))?, || "figure not in G".into()),
        },
        Recipe {
            name: "three-cube-nondecomposable",
            check: || ensure(!decomposable(&three_cube_knot(), Mode::Plain), || "judged decomposable".into()),
        },
        Recipe { name: "pinwheel-nondecomposable", check: || ensure(!decomposable(&pinwheel(), Mode::Plain), || "judged decomposable".into()) },
        Recipe {
            name: "milgram-figures",
            check: || {
                let l = milgram_left();
                let r = milgram_right();
                expect_eq(
                    [decomposable(&l, Mode::Plain), decomposable(&l, Mode::Milgram), decomposable(&r, Mode::Plain), decomposable(&r, Mode::Milgram)],
                    [true, true, true, false],
                )
            },
        },
        Recipe {
            name: "contradictory-specifications",
            check: || ensure(str_err(cubes::g_compatible(&e("1 #1 2"), &e("2 #1 1"), 2))?.is_none(), || "found a witness".into()),
        },
        Recipe {
            name: "cubes-composition-lands-in-g",
            check: || {
                let n = 2;
                let small: Vec<Expr> = (1..=2).flat_map(|k| enumerate(n, k, false)).collect();
                for outer in enumerate(n, 2, false) {
                    for b1 in &small {
                        for b2 in &small {
                            let inners = [b1.clone(), b2.clone()];
                            let comp = str_err(operad_compose(&outer, &inners))?;
                            let rc: Vec<Configuration> = str_err(inners.iter().map(|b| realize(b, n)).collect())?;
                            let c = str_err(cubes::cubes_compose(&str_err(realize(&outer, n))?, &rc))?;
                            ensure(str_err(in_g(&c, &comp))?, || format!("{outer} with {b1}, {b2}"))?;
                        }
                    }
                }
                Ok(())
            },
        },
        Recipe {
            name: "cubes-equivariance",
            check: || {
                for a in enumerate(2, 3, false) {
                    for sigma in permutations(3) {
                        let c = str_err(cubes::permute(&str_err(realize(&a, 2))?, &sigma))?;
                        ensure(str_err(in_g(&c, &str_err(a.permute(&sigma))?))?, || format!("{a} by {sigma:?}"))?;
                    }
                }
                Ok(())
            },
        },
        Recipe {
            name: "cli-hom-yes",
            check: || expect_eq(run_cli(&["hom", "--n", "2", "(2 #2 3) #1 1", "2 #2 1 #2 3"])?.as_str(), "yes\n"),
        },
        Recipe {
            name: "cli-hom-no",
            check: || expect_eq(run_cli(&["hom", "--n", "2", "(2 #2 3) #1 1", "1 #2 3 #2 2"])?.as_str(), "no\n"),
        },
        Recipe {
            name: "cli-counts",
            check: || {
                let out = run_cli(&["counts", "--n", "2", "--kmax", "4"])?;
                let last = out.lines().last().unwrap_or_default().to_string();
                ensure(last.starts_with("4,22,528,"), || format!("last row {last:?}"))
            },
        },
        Recipe {
            name: "cli-export-hasse",
            check: || {
                let dot = run_cli(&["export", "hasse", "--n", "3", "--k", "2"])?;
                let nodes = dot.lines().filter(|l| l.contains("[label=") && !l.contains("->")).count();
                let edges = dot.lines().filter(|l| l.contains("->")).count();
                expect_eq((nodes, edges), (6, 12))
            },
        },
        Recipe {
            name: "cli-export-qmap",
            check: || {
                let mut args = vec!["export", "qmap", "--n", "4", "--k", "5", "--cells"];
                args.extend(Q_CELLS);
                expect_eq(run_cli(&args)?.trim(), Q_RESULT)
            },
        },
    ]
}

#[derive(Debug)]
pub struct Outcome {
    pub name: &'static str,
    pub result: Check,
}

pub fn verify_all() -> Vec<Outcome> {
    recipes().into_iter().map(|r| Outcome { name: r.name, result: (r.check)() }).collect()
}

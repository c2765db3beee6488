//! The complete graph operad and the Smith filtration of the Barratt–Eccles
//! operad, with the forgetful maps `M_n -> K^(n) -> Gamma^(n)`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::enumeration::permutations;
use crate::error::{Error, Result};
use crate::expr::{Expr, Label, Op};
use crate::pair_table::PairTable;
use crate::poset::Poset;

pub fn k_leq(x: &PairTable, y: &PairTable) -> Result<bool> {
    if x.n() != y.n() {
        return Err(Error::Invalid(format!("tables over different n: {} vs {}", x.n(), y.n())));
    }
    x.leq(y)
}

/// Every colored acyclic orientation of the complete graph on `1..=k`,
/// ordered by orientation then colors.
pub fn k_enumerate(n: Op, k: usize) -> Vec<PairTable> {
    let pairs: Vec<(Label, Label)> =
        (1..=k as Label).flat_map(|a| (a + 1..=k as Label).map(move |b| (a, b))).collect();
    let mut colorings: Vec<Vec<Op>> = vec![vec![]];
    for _ in &pairs {
        colorings = colorings
            .into_iter()
            .flat_map(|c| {
                (1..=n).map(move |op| {
                    let mut c = c.clone();
                    c.push(op);
                    c
                })
            })
            .collect();
    }
    let mut out = Vec::new();
    for order in permutations(k) {
        for c in &colorings {
            let colors: BTreeMap<_, _> = pairs.iter().copied().zip(c.iter().copied()).collect();
            out.push(PairTable::new(n, order.clone(), &colors).expect("valid by construction"));
        }
    }
    out
}

fn standard_arity(t: &PairTable) -> Result<usize> {
    let k = t.labels().len();
    if t.labels().iter().enumerate().any(|(i, &l)| l != i as Label + 1) {
        return Err(Error::Invalid(format!("table labels {:?} are not 1..{k}", t.labels())));
    }
    Ok(k)
}

/// Substitution in the complete graph operad: edges between blocks take the
/// outer table's relation, edges inside a block the inner one's.
pub fn k_compose(outer: &PairTable, inners: &[PairTable]) -> Result<PairTable> {
    let k = standard_arity(outer)?;
    if inners.len() != k {
        return Err(Error::Arity { expected: k, got: inners.len() });
    }
    let mut offsets = Vec::with_capacity(k);
    let mut total: Label = 0;
    for t in inners {
        if t.n() != outer.n() {
            return Err(Error::Invalid("tables over different n".into()));
        }
        offsets.push(total);
        total += standard_arity(t)? as Label;
    }
    let block_of = |l: Label| offsets.iter().rposition(|&o| o < l).unwrap();
    let mut order = Vec::with_capacity(total as usize);
    for &b in outer.order() {
        let j = b as usize - 1;
        order.extend(inners[j].order().iter().map(|&l| l + offsets[j]));
    }
    let mut colors = BTreeMap::new();
    for a in 1..=total {
        for b in a + 1..=total {
            let (ja, jb) = (block_of(a), block_of(b));
            let op = if ja == jb {
                inners[ja].relation(a - offsets[ja], b - offsets[ja]).unwrap().0
            } else {
                outer.relation(ja as Label + 1, jb as Label + 1).unwrap().0
            };
            colors.insert((a, b), op);
        }
    }
    PairTable::new(outer.n(), order, &colors)
}

pub fn k_poset(n: Op, k: usize) -> Poset<PairTable> {
    Poset::from_relation(k_enumerate(n, k), |x, y| x.leq(y).expect("same labels"))
}

/// A simplex of the Barratt–Eccles model: a chain of permutations of
/// `1..=k`, each written as the sequence of labels in order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GammaSimplex {
    pub k: usize,
    pub chain: Vec<Vec<Label>>,
}

impl GammaSimplex {
    pub fn new(chain: Vec<Vec<Label>>) -> Result<GammaSimplex> {
        let k = chain.first().map_or(0, Vec::len);
        if chain.is_empty() {
            return Err(Error::Invalid("a simplex needs at least one vertex".into()));
        }
        for p in &chain {
            let mut s = p.clone();
            s.sort_unstable();
            if s.len() != k || s.iter().enumerate().any(|(i, &l)| l != i as Label + 1) {
                return Err(Error::Invalid(format!("{p:?} is not a permutation of 1..{k}")));
            }
        }
        Ok(GammaSimplex { k, chain })
    }

    pub fn dim(&self) -> usize {
        self.chain.len() - 1
    }

    pub fn is_degenerate(&self) -> bool {
        self.chain.windows(2).any(|w| w[0] == w[1])
    }

    /// Delete vertex `i`.
    pub fn face(&self, i: usize) -> GammaSimplex {
        let mut chain = self.chain.clone();
        chain.remove(i);
        GammaSimplex { k: self.k, chain }
    }

    /// Number of times each pair `{a, b}`, `a < b`, changes relative order.
    pub fn flips(&self) -> BTreeMap<(Label, Label), usize> {
        let mut out = BTreeMap::new();
        let positions: Vec<Vec<usize>> = self.chain.iter().map(|p| inverse_positions(p)).collect();
        for a in 1..=self.k as Label {
            for b in a + 1..=self.k as Label {
                let before = |pos: &Vec<usize>| pos[a as usize] < pos[b as usize];
                let f = positions.windows(2).filter(|w| before(&w[0]) != before(&w[1])).count();
                out.insert((a, b), f);
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<GammaSimplex> {
        let s: GammaSimplex = serde_json::from_str(text).map_err(|e| Error::Invalid(e.to_string()))?;
        let checked = GammaSimplex::new(s.chain)?;
        if checked.k != s.k {
            return Err(Error::Invalid(format!("k = {} but permutations have length {}", s.k, checked.k)));
        }
        Ok(checked)
    }
}

fn inverse_positions(p: &[Label]) -> Vec<usize> {
    let mut pos = vec![0; p.len() + 1];
    for (i, &l) in p.iter().enumerate() {
        pos[l as usize] = i;
    }
    pos
}

/// Every pair changes relative order at most `n - 1` times along the chain.
pub fn gamma_member(s: &GammaSimplex, n: Op) -> bool {
    s.flips().values().all(|&f| f < n as usize)
}

/// Nondegenerate simplices of `Gamma^(n)(k)`; `result[d]` holds dimension `d`,
/// sorted.
pub fn gamma_simplices(n: Op, k: usize) -> Vec<Vec<GammaSimplex>> {
    let perms = permutations(k);
    let pos: Vec<Vec<usize>> = perms.iter().map(|p| inverse_positions(p)).collect();
    let npairs = k * k.saturating_sub(1) / 2;
    // pair flip indicator between any two permutations
    let pair_list: Vec<(usize, usize)> = (1..=k).flat_map(|a| (a + 1..=k).map(move |b| (a, b))).collect();
    let differs = |x: usize, y: usize| -> Vec<bool> {
        pair_list.iter().map(|&(a, b)| (pos[x][a] < pos[x][b]) != (pos[y][a] < pos[y][b])).collect()
    };
    let mut graded: Vec<Vec<GammaSimplex>> = Vec::new();
    fn dfs(
        chain: &mut Vec<usize>,
        counts: &mut Vec<usize>,
        limit: usize,
        m: usize,
        differs: &dyn Fn(usize, usize) -> Vec<bool>,
        perms: &[Vec<Label>],
        graded: &mut Vec<Vec<GammaSimplex>>,
    ) {
        let d = chain.len() - 1;
        if graded.len() <= d {
            graded.push(Vec::new());
        }
        graded[d].push(GammaSimplex { k: perms[0].len(), chain: chain.iter().map(|&i| perms[i].clone()).collect() });
        let last = *chain.last().unwrap();
        for next in 0..m {
            if next == last {
                continue;
            }
            let diff = differs(last, next);
            if diff.iter().zip(counts.iter()).any(|(&f, &c)| f && c + 1 > limit) {
                continue;
            }
            for (c, &f) in counts.iter_mut().zip(&diff) {
                *c += f as usize;
            }
            chain.push(next);
            dfs(chain, counts, limit, m, differs, perms, graded);
            chain.pop();
            for (c, &f) in counts.iter_mut().zip(&diff) {
                *c -= f as usize;
            }
        }
    }
    for start in 0..perms.len() {
        dfs(&mut vec![start], &mut vec![0; npairs], n as usize - 1, perms.len(), &differs, &perms, &mut graded);
    }
    for g in &mut graded {
        g.sort();
    }
    graded
}

/// Underlying orientations of a chain of objects.
pub fn forget_and_map(chain: &[Expr]) -> Result<GammaSimplex> {
    let labels: Vec<Label> = chain.first().map(|e| e.leaf_set().into_iter().collect()).unwrap_or_default();
    let k = labels.len();
    if labels.iter().enumerate().any(|(i, &l)| l != i as Label + 1) {
        return Err(Error::Invalid(format!("labels {labels:?} are not 1..{k}")));
    }
    GammaSimplex::new(chain.iter().map(Expr::leaves).collect())
}

/// The same map on a chain of complete-graph elements.
pub fn forget_tables(chain: &[PairTable]) -> Result<GammaSimplex> {
    GammaSimplex::new(chain.iter().map(|t| t.order().to_vec()).collect())
}

/// Barratt–Eccles substitution: at every vertex, concatenate the inner
/// orders (shifted into their blocks) in the order given by the outer one.
pub fn gamma_compose(outer: &GammaSimplex, inners: &[GammaSimplex]) -> Result<GammaSimplex> {
    if inners.len() != outer.k {
        return Err(Error::Arity { expected: outer.k, got: inners.len() });
    }
    if let Some(bad) = inners.iter().find(|s| s.chain.len() != outer.chain.len()) {
        return Err(Error::Invalid(format!(
            "dimension mismatch: outer has {} vertices, an inner has {}",
            outer.chain.len(),
            bad.chain.len()
        )));
    }
    let offsets: Vec<Label> = inners
        .iter()
        .scan(0, |acc, s| {
            let o = *acc;
            *acc += s.k as Label;
            Some(o)
        })
        .collect();
    let chain = (0..outer.chain.len())
        .map(|t| {
            outer.chain[t]
                .iter()
                .flat_map(|&b| {
                    let j = b as usize - 1;
                    let off = offsets[j];
                    inners[j].chain[t].iter().map(move |&l| l + off)
                })
                .collect()
        })
        .collect();
    GammaSimplex::new(chain)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumeration::{build_poset, enumerate, operad_compose};

    fn p(s: &str) -> Expr {
        Expr::parse(s, 9).unwrap()
    }

    fn gs(chain: &[&[Label]]) -> GammaSimplex {
        GammaSimplex::new(chain.iter().map(|c| c.to_vec()).collect()).unwrap()
    }

    #[test]
    fn complete_graph_counts() {
        assert_eq!(k_enumerate(2, 3).len(), 48);
        assert_eq!(k_enumerate(3, 2).len(), 6);
        assert_eq!(k_enumerate(1, 3).len(), 6);
        let realizable = k_enumerate(2, 3).iter().filter(|t| t.realize().is_some()).count();
        assert_eq!(realizable, 36);
    }

    #[test]
    fn k_order_is_partial_order() {
        for (n, k) in [(1, 3), (2, 2), (2, 3)] {
            assert!(k_poset(n, k).is_partial_order());
        }
    }

    #[test]
    fn k_order_restricts_to_coherence() {
        for (n, k) in [(2, 3), (3, 2), (3, 3)] {
            let objs = enumerate(n, k, false);
            let tables: Vec<PairTable> = objs.iter().map(|e| e.pair_table(n).unwrap()).collect();
            for (a, ta) in objs.iter().zip(&tables) {
                for (b, tb) in objs.iter().zip(&tables) {
                    let via_k = k_leq(ta, tb).unwrap();
                    let ra = ta.realize().unwrap();
                    let rb = tb.realize().unwrap();
                    assert_eq!((&ra, &rb), (a, b));
                    assert_eq!(via_k, crate::coherence::hom_exists(&ra, &rb).unwrap());
                }
            }
        }
    }

    #[test]
    fn k_compose_matches_embedding() {
        let n = 2;
        let outer = p("1 #1 2");
        let inners = [p("1 #2 2"), p("2 #1 1")];
        let e = operad_compose(&outer, &inners).unwrap();
        let t = k_compose(
            &outer.pair_table(n).unwrap(),
            &inners.iter().map(|i| i.pair_table(n).unwrap()).collect::<Vec<_>>(),
        )
        .unwrap();
        assert_eq!(t, e.pair_table(n).unwrap());
        let singles = vec![p("1").pair_table(n).unwrap(); 2];
        assert_eq!(k_compose(&outer.pair_table(n).unwrap(), &singles).unwrap(), outer.pair_table(n).unwrap());
    }

    #[test]
    fn smith_filtration_membership() {
        let s = gs(&[&[1, 2, 3], &[2, 1, 3], &[2, 3, 1], &[2, 1, 3]]);
        assert!(gamma_member(&s, 3));
        assert!(!gamma_member(&s, 2));
        assert_eq!(s.flips()[&(1, 2)], 1);
        assert_eq!(s.flips()[&(1, 3)], 2);
        assert!(gamma_member(&gs(&[&[3, 1, 2]]), 1));
    }

    #[test]
    fn gamma_of_two_letters_is_a_sphere_model() {
        for n in 1..=4u8 {
            let g = gamma_simplices(n, 2);
            assert_eq!(g.len(), n as usize);
            assert!(g.iter().all(|d| d.len() == 2));
        }
        assert_eq!(gamma_simplices(2, 3).len(), 4);
        assert!(gamma_simplices(1, 4).len() == 1);
    }

    #[test]
    fn forgetful_map() {
        let deg = forget_and_map(&[p("1 #1 2"), p("1 #2 2")]).unwrap();
        assert!(deg.is_degenerate());
        let edge = forget_and_map(&[p("1 #1 2"), p("2 #2 1")]).unwrap();
        assert_eq!(edge.chain, vec![vec![1, 2], vec![2, 1]]);
        assert!(gamma_member(&edge, 2));
        let poset = build_poset(2, 3, false);
        for c in poset.maximal_chains() {
            let objs: Vec<Expr> = c.iter().map(|&i| poset.get(i).clone()).collect();
            assert!(gamma_member(&forget_and_map(&objs).unwrap(), 2));
        }
    }

    #[test]
    fn barratt_eccles_composition() {
        let outer = gs(&[&[1, 2], &[2, 1]]);
        let a = gs(&[&[1, 2], &[1, 2]]);
        let b = gs(&[&[1], &[1]]);
        let c = gamma_compose(&outer, &[a, b]).unwrap();
        assert_eq!(c.chain, vec![vec![1, 2, 3], vec![3, 1, 2]]);
        assert!(gamma_compose(&outer, &[gs(&[&[1]])]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let s = gs(&[&[1, 2, 3], &[2, 1, 3]]);
        assert_eq!(s.to_json(), r#"{"k":3,"chain":[[1,2,3],[2,1,3]]}"#);
        assert_eq!(GammaSimplex::from_json(&s.to_json()).unwrap(), s);
        assert!(GammaSimplex::from_json(r#"{"k":2,"chain":[[1,1]]}"#).is_err());
    }
}

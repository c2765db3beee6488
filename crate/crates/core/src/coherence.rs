//! The word problem for free n-fold monoidal categories.
//!
//! Two independent routes decide whether a morphism `A -> B` exists:
//! [`hom_exists`] applies the pairwise coherence criterion, while
//! [`reachability_witness`] and [`rewrite_closure`] search for an explicit
//! composite of interchange maps `η^{ij}` applied inside a product context.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use rayon::prelude::*;
use serde::Serialize;

use crate::enumeration::enumerate_over;
use crate::error::{Error, Result};
use crate::expr::{Expr, Label, Op};

/// One interchange `(X #j Y) #i (Z #j W) -> (X #i Z) #j (Y #i W)` applied to
/// the children `start..end` of the `#i` node at `path`, with `mid`
/// separating the left factor from the right one.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RewriteStep {
    pub path: Vec<usize>,
    pub i: Op,
    pub j: Op,
    pub start: usize,
    pub mid: usize,
    pub end: usize,
    pub x: Expr,
    pub y: Expr,
    pub z: Expr,
    pub w: Expr,
}

impl RewriteStep {
    /// The matched source subterm, rebuilt from the four pieces.
    pub fn source(&self) -> Expr {
        Expr::product(
            self.i,
            [
                Expr::product(self.j, [self.x.clone(), self.y.clone()]),
                Expr::product(self.j, [self.z.clone(), self.w.clone()]),
            ],
        )
    }

    pub fn target(&self) -> Expr {
        Expr::product(
            self.j,
            [
                Expr::product(self.i, [self.x.clone(), self.z.clone()]),
                Expr::product(self.i, [self.y.clone(), self.w.clone()]),
            ],
        )
    }

    /// Conventional name, e.g. `η^{12}_{2,0,0,1}`.
    pub fn name(&self) -> String {
        format!("η^{{{}{}}}_{{{},{},{},{}}}", self.i, self.j, self.x, self.y, self.z, self.w)
    }

    /// Units in positions that make the interchange an identity.
    pub fn is_trivial(&self) -> bool {
        let (x, y, z, w) = (self.x.is_zero(), self.y.is_zero(), self.z.is_zero(), self.w.is_zero());
        (x && y) || (z && w) || (y && w) || (x && z)
    }
}

/// Decide `A -> B` by the pairwise criterion: every `a #i b` in `A` must
/// become `a #j b` with `j >= i` or `b #j a` with `j > i` in `B`.
pub fn hom_exists(a: &Expr, b: &Expr) -> Result<bool> {
    let n = a.max_op().max(b.max_op()).max(1);
    a.pair_table(n)?.leq(&b.pair_table(n)?)
}

/// Ways to read `e` as a `#j` product `X #j Y`.
fn splittings(factors: &[Expr], op_outer: Op, j: Op) -> Vec<(Expr, Expr)> {
    if let [Expr::Node(o, d)] = factors {
        if *o == j {
            return (0..=d.len())
                .map(|q| (Expr::product(j, d[..q].iter().cloned()), Expr::product(j, d[q..].iter().cloned())))
                .collect();
        }
    }
    let whole = Expr::product(op_outer, factors.iter().cloned());
    vec![(whole.clone(), Expr::Zero), (Expr::Zero, whole)]
}

fn collect_rewrites(root: &Expr, node: &Expr, path: &mut Vec<usize>, n: Op, out: &mut Vec<(RewriteStep, Expr)>) {
    let Expr::Node(i, ch) = node else { return };
    let i = *i;
    let m = ch.len();
    for start in 0..m {
        for end in start + 2..=m {
            for mid in start + 1..end {
                for j in i + 1..=n {
                    let left = splittings(&ch[start..mid], i, j);
                    let right = splittings(&ch[mid..end], i, j);
                    for (x, y) in &left {
                        for (z, w) in &right {
                            let step = RewriteStep {
                                path: path.clone(),
                                i,
                                j,
                                start,
                                mid,
                                end,
                                x: x.clone(),
                                y: y.clone(),
                                z: z.clone(),
                                w: w.clone(),
                            };
                            if step.is_trivial() {
                                continue;
                            }
                            let mut parts: Vec<Expr> = ch[..start].to_vec();
                            parts.push(step.target());
                            parts.extend_from_slice(&ch[end..]);
                            let result = root.replace_at(path, Expr::product(i, parts));
                            out.push((step, result));
                        }
                    }
                }
            }
        }
    }
    for (c, child) in ch.iter().enumerate() {
        path.push(c);
        collect_rewrites(root, child, path, n, out);
        path.pop();
    }
}

/// Every result of a single nontrivial interchange applied anywhere in `a`,
/// one step per distinct target, ordered by rendered target.
pub fn one_step_rewrites(a: &Expr, n: Op) -> Vec<(RewriteStep, Expr)> {
    let mut all = Vec::new();
    collect_rewrites(a, a, &mut Vec::new(), n, &mut all);
    let mut by_target: BTreeMap<String, (RewriteStep, Expr)> = BTreeMap::new();
    for (step, e) in all {
        by_target.entry(e.render()).or_insert((step, e));
    }
    by_target.into_values().collect()
}

fn same_leaves(a: &Expr, b: &Expr) -> Result<()> {
    let (la, lb) = (a.leaf_set(), b.leaf_set());
    if la != lb {
        return Err(Error::LabelMismatch(la.into_iter().collect(), lb.into_iter().collect()));
    }
    a.check_distinct()?;
    b.check_distinct()
}

/// Shortest chain of one-step rewrites from `a` to `b`, found breadth first
/// with successors visited in rendered order. `max_depth` bounds the number
/// of steps; `None` searches the whole (finite) closure.
pub fn reachability_witness(
    a: &Expr,
    b: &Expr,
    n: Op,
    max_depth: Option<usize>,
) -> Result<Option<Vec<(RewriteStep, Expr)>>> {
    same_leaves(a, b)?;
    if a == b {
        return Ok(Some(Vec::new()));
    }
    let mut parent: HashMap<Expr, (Expr, RewriteStep)> = HashMap::new();
    let mut depth: HashMap<Expr, usize> = HashMap::from([(a.clone(), 0)]);
    let mut queue = VecDeque::from([a.clone()]);
    while let Some(cur) = queue.pop_front() {
        let d = depth[&cur];
        if max_depth.is_some_and(|m| d >= m) {
            continue;
        }
        for (step, next) in one_step_rewrites(&cur, n) {
            if depth.contains_key(&next) {
                continue;
            }
            depth.insert(next.clone(), d + 1);
            parent.insert(next.clone(), (cur.clone(), step));
            if &next == b {
                let mut chain = Vec::new();
                let mut at = next;
                while let Some((prev, step)) = parent.remove(&at) {
                    chain.push((step, at));
                    at = prev;
                }
                chain.reverse();
                return Ok(Some(chain));
            }
            queue.push_back(next);
        }
    }
    Ok(None)
}

/// Everything reachable from `a` by zero or more one-step rewrites.
pub fn rewrite_closure(a: &Expr, n: Op) -> BTreeSet<Expr> {
    let mut seen = BTreeSet::from([a.clone()]);
    let mut stack = vec![a.clone()];
    while let Some(cur) = stack.pop() {
        for (_, next) in one_step_rewrites(&cur, n) {
            if seen.insert(next.clone()) {
                stack.push(next);
            }
        }
    }
    seen
}

/// Reachability matrix of the one-step rewrite graph on a list of objects
/// closed under rewriting (e.g. a full enumeration of `M_n(k)`).
pub fn closure_matrix(objects: &[Expr], n: Op) -> Vec<Vec<bool>> {
    let index: HashMap<&Expr, usize> = objects.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let edges: Vec<Vec<usize>> = objects
        .par_iter()
        .map(|e| {
            one_step_rewrites(e, n)
                .into_iter()
                .map(|(_, t)| *index.get(&t).expect("rewrite left the object list"))
                .collect()
        })
        .collect();
    (0..objects.len())
        .into_par_iter()
        .map(|s| {
            let mut seen = vec![false; objects.len()];
            seen[s] = true;
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for &v in &edges[u] {
                    if !seen[v] {
                        seen[v] = true;
                        stack.push(v);
                    }
                }
            }
            seen
        })
        .collect()
}

/// Upper covers of `a` in `M_n(leaves(a))`.
pub fn covers(n: Op, a: &Expr) -> Result<Vec<Expr>> {
    a.check_distinct()?;
    let labels: Vec<Label> = a.leaf_set().into_iter().collect();
    let ta = a.pair_table(n)?;
    let tables: Vec<_> = enumerate_over(n, &labels, false)
        .into_iter()
        .map(|e| {
            let t = e.pair_table(n).unwrap();
            (e, t)
        })
        .collect();
    let ups: Vec<_> = tables.iter().filter(|(e, t)| e != a && ta.leq(t).unwrap()).collect();
    Ok(ups
        .iter()
        .filter(|(b, tb)| !ups.iter().any(|(c, tc)| c != b && tc.leq(tb).unwrap()))
        .map(|(b, _)| b.clone())
        .collect())
}

/// Wire form of a witness step.
#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct StepJson {
    pub path: Vec<usize>,
    pub i: Op,
    pub j: Op,
    pub range: [usize; 3],
    pub splits: SplitsJson,
    pub result: String,
}

#[derive(Serialize, Debug, Clone, PartialEq)]
pub struct SplitsJson {
    pub x: String,
    pub y: String,
    pub z: String,
    pub w: String,
}

pub fn witness_json(chain: &[(RewriteStep, Expr)]) -> String {
    let steps: Vec<StepJson> = chain
        .iter()
        .map(|(s, e)| StepJson {
            path: s.path.clone(),
            i: s.i,
            j: s.j,
            range: [s.start, s.mid, s.end],
            splits: SplitsJson { x: s.x.render(), y: s.y.render(), z: s.z.render(), w: s.w.render() },
            result: e.render(),
        })
        .collect();
    serde_json::to_string(&steps).expect("serializable")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Expr {
        Expr::parse(s, 9).unwrap()
    }

    fn targets(a: &str, n: Op) -> BTreeSet<String> {
        one_step_rewrites(&p(a), n).into_iter().map(|(_, e)| e.render()).collect()
    }

    #[test]
    fn morphism_example() {
        let a = p("(2 #2 3) #1 1");
        assert!(hom_exists(&a, &p("2 #2 1 #2 3")).unwrap());
        assert!(!hom_exists(&a, &p("1 #2 3 #2 2")).unwrap());
        assert!(hom_exists(&a, &a).unwrap());
        assert!(matches!(hom_exists(&a, &p("1 #1 2")), Err(Error::LabelMismatch(..))));
    }

    #[test]
    fn octahedron_arrows_out_of_the_bottom() {
        let want: BTreeSet<String> =
            ["2 #2 1", "1 #2 2", "2 #3 1", "1 #3 2"].into_iter().map(String::from).collect();
        assert_eq!(targets("2 #1 1", 3), want);
        assert!(targets("1 #3 2", 3).is_empty());
        let names: BTreeSet<String> = one_step_rewrites(&p("2 #1 1"), 3).iter().map(|(s, _)| s.name()).collect();
        assert!(names.contains("η^{12}_{2,0,0,1}"));
        assert!(names.contains("η^{13}_{0,2,1,0}"));
    }

    #[test]
    fn full_interchange_is_a_one_step_rewrite() {
        assert!(targets("(1 #2 2) #1 (3 #2 4)", 2).contains("(1 #1 3) #2 (2 #1 4)"));
    }

    #[test]
    fn rewrites_inside_a_flattened_block() {
        // the middle pair of a three-factor product
        assert!(targets("1 #1 2 #1 3", 2).contains("1 #1 (2 #2 3)"));
        assert!(targets("1 #1 2 #1 3", 2).contains("(1 #2 2) #1 3"));
    }

    #[test]
    fn witness_examples() {
        let w = reachability_witness(&p("2 #1 1"), &p("1 #2 2"), 2, None).unwrap().unwrap();
        assert_eq!(w.len(), 1);
        assert_eq!(w[0].0.name(), "η^{12}_{0,2,1,0}");
        let a = p("(2 #2 3) #1 1");
        assert_eq!(reachability_witness(&a, &a, 2, None).unwrap(), Some(vec![]));
        assert_eq!(reachability_witness(&a, &p("1 #2 3 #2 2"), 2, None).unwrap(), None);
        let json = witness_json(&w);
        assert!(json.contains(r#""splits":{"x":"0","y":"2","z":"1","w":"0"}"#), "{json}");
    }

    #[test]
    fn depth_bound_is_respected() {
        let a = p("1 #1 2 #1 3");
        let b = p("3 #2 2 #2 1");
        assert!(reachability_witness(&a, &b, 2, Some(1)).unwrap().is_none());
        let w = reachability_witness(&a, &b, 2, None).unwrap().unwrap();
        assert!(w.len() > 1);
        assert_eq!(w.last().unwrap().1, b);
    }

    #[test]
    fn covers_in_m22() {
        let mut c: Vec<String> = covers(2, &p("1 #1 2")).unwrap().iter().map(Expr::render).collect();
        c.sort();
        assert_eq!(c, ["1 #2 2", "2 #2 1"]);
        assert!(covers(2, &p("1 #2 2")).unwrap().is_empty());
    }

    #[test]
    fn steps_reconstruct_their_source() {
        let a = p("(1 #2 2) #1 (3 #2 4) #1 5");
        for (s, _) in one_step_rewrites(&a, 3) {
            let ch = a.at_path(&s.path).unwrap().children();
            let block = Expr::product(s.i, ch[s.start..s.end].iter().cloned());
            assert_eq!(s.source(), block, "{}", s.name());
            assert!(s.i < s.j && !s.is_trivial());
        }
    }
}

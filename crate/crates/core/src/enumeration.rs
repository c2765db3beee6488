//! Exhaustive generation of `M_n(k)` and its Milgram subposet, shape counts,
//! symmetric and degeneracy actions, and operad composition.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::expr::{Expr, Label, Op};
use crate::pair_table::PairTable;
use crate::poset::Poset;

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Constraint {
    /// Any object whose top operation is not the given one (0: unrestricted).
    NotTop(Op),
    /// Level-ordered objects whose operations are all at least the given one.
    MinOp(Op),
}

struct Generator<'a> {
    n: Op,
    labels: &'a [Label],
    memo: HashMap<(u32, Constraint), Vec<Expr>>,
}

impl Generator<'_> {
    fn objects(&mut self, mask: u32, c: Constraint) -> Vec<Expr> {
        if let Some(v) = self.memo.get(&(mask, c)) {
            return v.clone();
        }
        let out = if mask.count_ones() == 1 {
            vec![Expr::Gen(self.labels[mask.trailing_zeros() as usize])]
        } else {
            let ops: Vec<(Op, Constraint)> = match c {
                Constraint::NotTop(f) => (1..=self.n).filter(|&i| i != f).map(|i| (i, Constraint::NotTop(i))).collect(),
                Constraint::MinOp(m) => (m..=self.n).map(|i| (i, Constraint::MinOp(i + 1))).collect(),
            };
            let mut out = Vec::new();
            for (op, child) in ops {
                // the first block is a proper subset, so there are at least two
                let mut seqs = Vec::new();
                let mut first = (mask - 1) & mask;
                while first != 0 {
                    for obj in self.objects(first, child) {
                        self.sequences(mask & !first, child, &mut vec![obj], &mut seqs);
                    }
                    first = (first - 1) & mask;
                }
                out.extend(seqs.into_iter().map(|s| Expr::Node(op, s)));
            }
            out
        };
        self.memo.insert((mask, c), out.clone());
        out
    }

    /// All ordered sequences of child objects whose label sets partition `mask`.
    fn sequences(&mut self, mask: u32, c: Constraint, prefix: &mut Vec<Expr>, out: &mut Vec<Vec<Expr>>) {
        if mask == 0 {
            out.push(prefix.clone());
            return;
        }
        // iterate nonempty submasks of `mask` for the next block
        let mut first = mask;
        while first != 0 {
            for obj in self.objects(first, c) {
                prefix.push(obj);
                self.sequences(mask & !first, c, prefix, out);
                prefix.pop();
            }
            first = (first - 1) & mask;
        }
    }
}

/// Every object of `M_n(S)` for the label set `labels` (resp. its Milgram
/// subcategory), sorted by rendering.
pub fn enumerate_over(n: Op, labels: &[Label], milgram_only: bool) -> Vec<Expr> {
    assert!(labels.len() <= 31, "label set too large to enumerate");
    if labels.is_empty() {
        return vec![Expr::Zero];
    }
    let mut g = Generator { n, labels, memo: HashMap::new() };
    let c = if milgram_only { Constraint::MinOp(1) } else { Constraint::NotTop(0) };
    let all = g.objects((1u32 << labels.len()) - 1, c);
    let mut keyed: Vec<(String, Expr)> = all.into_iter().map(|e| (e.render(), e)).collect();
    keyed.sort_unstable_by(|a, b| a.0.cmp(&b.0));
    keyed.into_iter().map(|(_, e)| e).collect()
}

/// Objects of `M_n(k)` on labels `1..=k`.
pub fn enumerate(n: Op, k: usize, milgram_only: bool) -> Vec<Expr> {
    let labels: Vec<Label> = (1..=k as Label).collect();
    enumerate_over(n, &labels, milgram_only)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CountRow {
    pub k: usize,
    /// `a^n_k`, objects up to relabeling.
    pub shapes: BigUint,
    /// `k! a^n_k`.
    pub objects: BigUint,
    /// `a^n_{k+1} / a^n_k`.
    pub ratio: BigRational,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CountTable {
    pub n: Op,
    pub rows: Vec<CountRow>,
}

/// `a^n_0..=a^n_{k_max}` from the recurrence
/// `a_k = n a_1 a_{k-1} + sum_{i=2}^{k-1} (n-1) a_i a_{k-i}`.
pub fn shape_sequence(n: Op, k_max: usize) -> Vec<BigUint> {
    let n_big = BigUint::from(n);
    let n_minus = BigUint::from(n.saturating_sub(1));
    let mut a: Vec<BigUint> = vec![BigUint::one(), BigUint::one()];
    for k in 2..=k_max {
        let mut v = &n_big * &a[1] * &a[k - 1];
        for i in 2..k {
            v += &n_minus * &a[i] * &a[k - i];
        }
        a.push(v);
    }
    a.truncate(k_max + 1);
    a
}

pub fn shape_counts(n: Op, k_max: usize) -> CountTable {
    let a = shape_sequence(n, k_max + 1);
    let mut fact = BigUint::one();
    let rows = (0..=k_max)
        .map(|k| {
            if k > 0 {
                fact *= BigUint::from(k);
            }
            CountRow {
                k,
                shapes: a[k].clone(),
                objects: &fact * &a[k],
                ratio: BigRational::new(a[k + 1].clone().into(), a[k].clone().into()),
            }
        })
        .collect();
    CountTable { n, rows }
}

impl CountTable {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("k,shapes,objects,ratio,ratio_decimal\n");
        for r in &self.rows {
            writeln!(s, "{},{},{},{},{}", r.k, r.shapes, r.objects, r.ratio, decimal(&r.ratio, 10)).unwrap();
        }
        s
    }
}

/// Exact truncated decimal expansion of a nonnegative rational.
pub fn decimal(r: &BigRational, places: usize) -> String {
    let scale = num_bigint::BigInt::from(10u32).pow(places as u32);
    let scaled = (r * BigRational::from_integer(scale.clone())).floor().to_integer();
    let int = &scaled / &scale;
    let frac = (&scaled % &scale).to_u64().unwrap_or(0);
    format!("{int}.{frac:0places$}")
}

/// Drop label `j` and close the gap: `i -> i - 1` for `i > j`.
pub fn degeneracy(e: &Expr, j: Label) -> Result<Expr> {
    if !e.leaf_set().contains(&j) {
        return Err(Error::MissingLabel(j));
    }
    Ok(e.restrict_by(&|l| l != j).map_labels(&|l| if l > j { l - 1 } else { l }))
}

fn check_standard(e: &Expr) -> Result<usize> {
    e.check_distinct()?;
    let mut leaves = e.leaves();
    leaves.sort_unstable();
    let k = leaves.len();
    if leaves.iter().enumerate().any(|(i, &l)| l != i as Label + 1) {
        return Err(Error::Invalid(format!("{e} is not labeled by 1..{k}")));
    }
    Ok(k)
}

/// Operad substitution: label `j` of `outer` becomes `inners[j-1]` shifted
/// into the `j`-th block of consecutive labels.
pub fn operad_compose(outer: &Expr, inners: &[Expr]) -> Result<Expr> {
    let k = check_standard(outer)?;
    if k != inners.len() {
        return Err(Error::Arity { expected: k, got: inners.len() });
    }
    let mut offsets = Vec::with_capacity(k);
    let mut total: Label = 0;
    for inner in inners {
        offsets.push(total);
        total += check_standard(inner)? as Label;
    }
    fn subst(e: &Expr, inners: &[Expr], offsets: &[Label]) -> Expr {
        match e {
            Expr::Zero => Expr::Zero,
            Expr::Gen(j) => {
                let idx = *j as usize - 1;
                let off = offsets[idx];
                inners[idx].map_labels(&|l| l + off)
            }
            Expr::Node(op, ch) => Expr::product(*op, ch.iter().map(|c| subst(c, inners, offsets))),
        }
    }
    Ok(subst(outer, inners, &offsets))
}

/// All permutations of `1..=k` in one-line notation, lexicographically.
pub fn permutations(k: usize) -> Vec<Vec<Label>> {
    let mut cur: Vec<Label> = (1..=k as Label).collect();
    let mut out = vec![cur.clone()];
    // next lexicographic permutation until the sequence is descending
    loop {
        let Some(i) = (1..k).rev().find(|&i| cur[i - 1] < cur[i]) else { return out };
        let j = (i..k).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
        out.push(cur.clone());
    }
}

/// The block permutation `sigma<sizes>`: block `j` of `sizes` (labels in
/// their natural order) moves to the slot that `sigma` assigns to `j`.
pub fn block_permutation(sigma: &[Label], sizes: &[usize]) -> Vec<Label> {
    let k = sigma.len();
    // sizes of the blocks in their new positions
    let mut new_sizes = vec![0; k];
    for j in 0..k {
        new_sizes[sigma[j] as usize - 1] = sizes[j];
    }
    let new_offsets: Vec<usize> = new_sizes.iter().scan(0, |acc, &s| { let o = *acc; *acc += s; Some(o) }).collect();
    let mut out = Vec::new();
    for j in 0..k {
        let base = new_offsets[sigma[j] as usize - 1];
        out.extend((1..=sizes[j]).map(|t| (base + t) as Label));
    }
    out
}

/// Direct sum of permutations acting on consecutive blocks.
pub fn perm_sum(parts: &[Vec<Label>]) -> Vec<Label> {
    let mut out = Vec::new();
    let mut off = 0;
    for p in parts {
        out.extend(p.iter().map(|&l| l + off));
        off += p.len() as Label;
    }
    out
}

/// `M_n(k)` (or its Milgram subposet) ordered by morphism existence.
pub fn build_poset(n: Op, k: usize, milgram_only: bool) -> Poset<Expr> {
    poset_of(n, enumerate(n, k, milgram_only))
}

/// Order a list of objects on a common label set by morphism existence.
pub fn poset_of(n: Op, objects: Vec<Expr>) -> Poset<Expr> {
    let tables: Vec<PairTable> = objects.iter().map(|e| e.pair_table(n).expect("object of M_n")).collect();
    let index: HashMap<&Expr, usize> = objects.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let p = Poset::from_relation(objects.clone(), |a, b| {
        tables[index[a]].leq(&tables[index[b]]).expect("same labels")
    });
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Expr {
        Expr::parse(s, 9).unwrap()
    }

    #[test]
    fn small_enumerations() {
        assert_eq!(enumerate(2, 3, false).len(), 36);
        assert_eq!(enumerate(3, 2, false).len(), 6);
        assert_eq!(enumerate(2, 3, true).len(), 24);
        assert_eq!(enumerate(2, 1, false), vec![Expr::Gen(1)]);
        assert_eq!(enumerate(2, 0, false), vec![Expr::Zero]);
        let m22: Vec<String> = enumerate(2, 2, false).iter().map(Expr::render).collect();
        assert_eq!(m22, ["1 #1 2", "1 #2 2", "2 #1 1", "2 #2 1"]);
    }

    #[test]
    fn enumeration_is_canonical_and_distinct() {
        let all = enumerate(3, 3, false);
        let mut set = std::collections::BTreeSet::new();
        for e in &all {
            assert_eq!(Expr::parse(&e.render(), 3).unwrap(), *e);
            assert!(set.insert(e.clone()));
        }
    }

    #[test]
    fn recurrence_matches_closed_forms() {
        for n in 1..=6u8 {
            let a = shape_sequence(n, 4);
            let m = n as u64;
            assert_eq!(a[2], BigUint::from(m));
            assert_eq!(a[3], BigUint::from(2 * m * m - m));
            assert_eq!(a[4], BigUint::from(5 * m * m * m - 5 * m * m + m));
        }
        let a: Vec<u64> = shape_sequence(2, 5).iter().map(|x| x.to_u64().unwrap()).collect();
        assert_eq!(a, [1, 1, 2, 6, 22, 90]);
    }

    #[test]
    fn counts_csv() {
        let csv = shape_counts(2, 4).to_csv();
        assert!(csv.lines().last().unwrap().starts_with("4,22,528,45/11,4.0909090909"), "{csv}");
    }

    #[test]
    fn degeneracies() {
        assert_eq!(degeneracy(&p("1 #1 (2 #2 3)"), 2).unwrap().render(), "1 #1 2");
        assert_eq!(degeneracy(&p("1 #2 2"), 1).unwrap().render(), "1");
        assert_eq!(degeneracy(&p("1 #2 2"), 3), Err(Error::MissingLabel(3)));
    }

    #[test]
    fn composition() {
        let c = operad_compose(&p("1 #1 2"), &[p("1"), p("1 #2 2")]).unwrap();
        assert_eq!(c.render(), "1 #1 (2 #2 3)");
        let e = p("(2 #2 3) #1 1");
        assert_eq!(operad_compose(&e, &[p("1"), p("1"), p("1")]).unwrap(), e);
        assert_eq!(operad_compose(&p("1"), &[e.clone()]).unwrap(), e);
        assert!(matches!(operad_compose(&e, &[p("1")]), Err(Error::Arity { expected: 3, got: 1 })));
        // same-op substitution flattens
        assert_eq!(operad_compose(&p("1 #1 2"), &[p("1 #1 2"), p("1")]).unwrap(), p("1 #1 2 #1 3"));
    }

    #[test]
    fn permutation_helpers() {
        assert_eq!(permutations(3), vec![vec![1, 2, 3], vec![1, 3, 2], vec![2, 1, 3], vec![2, 3, 1], vec![3, 1, 2], vec![3, 2, 1]]);
        assert_eq!(permutations(0), vec![Vec::<Label>::new()]);
        assert_eq!(block_permutation(&[2, 1], &[1, 2]), vec![3, 1, 2]);
        assert_eq!(block_permutation(&[1, 2, 3], &[2, 1, 2]), vec![1, 2, 3, 4, 5]);
        assert_eq!(perm_sum(&[vec![2, 1], vec![1]]), vec![2, 1, 3]);
    }

    #[test]
    fn small_posets() {
        let sq = build_poset(2, 2, false);
        assert_eq!(sq.len(), 4);
        assert_eq!(sq.cover_edges().len(), 4);
        assert_eq!(sq.maximal_chains().len(), 4);
        let oct = build_poset(3, 2, false);
        assert_eq!(oct.comparable_pairs().len(), 12);
        assert_eq!(oct.cover_edges().len(), 8);
        assert_eq!(oct.maximal_chains().len(), 8);
    }
}

//! The permutohedron `P_k` as the downset of `1 #2 2 #2 ... #2 k`, its
//! ordered-set-partition model, the symmetric group action, the
//! retractions `π_A` and the q-map onto the Milgram poset.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::enumeration::enumerate_over;
use crate::error::{Error, Result};
use crate::expr::{Expr, Label, Op};
use crate::poset::Poset;

/// A sequence of disjoint nonempty blocks covering `1..=k`, each sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OrderedPartition {
    pub blocks: Vec<Vec<Label>>,
}

impl OrderedPartition {
    pub fn new(mut blocks: Vec<Vec<Label>>) -> Result<OrderedPartition> {
        let mut seen = BTreeSet::new();
        for b in &mut blocks {
            if b.is_empty() {
                return Err(Error::Invalid("empty block".into()));
            }
            b.sort_unstable();
            for &l in b.iter() {
                if !seen.insert(l) {
                    return Err(Error::DuplicateLabel(l));
                }
            }
        }
        Ok(OrderedPartition { blocks })
    }

    pub fn k(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    pub fn labels(&self) -> BTreeSet<Label> {
        self.blocks.iter().flatten().copied().collect()
    }

    /// `A_1 #1 ... #1 A_s` with every `A_r` an ascending `#2` word.
    pub fn to_expr(&self) -> Expr {
        Expr::product(1, self.blocks.iter().map(|b| Expr::word(2, b.iter().copied())))
    }

    /// Read an element of `P_k` back as a partition.
    pub fn from_expr(e: &Expr) -> Result<OrderedPartition> {
        let not_in_p = || Error::Invalid(format!("{e} is not of the form A_1 #1 ... #1 A_s with ascending #2 blocks"));
        let parts: Vec<&Expr> = match e {
            Expr::Zero => vec![],
            Expr::Node(1, ch) => ch.iter().collect(),
            other => vec![other],
        };
        let mut blocks = Vec::with_capacity(parts.len());
        for p in parts {
            let b: Vec<Label> = match p {
                Expr::Gen(l) => vec![*l],
                Expr::Node(2, ch) if ch.iter().all(|c| matches!(c, Expr::Gen(_))) => p.leaves(),
                _ => return Err(not_in_p()),
            };
            if b.windows(2).any(|w| w[0] >= w[1]) {
                return Err(not_in_p());
            }
            blocks.push(b);
        }
        OrderedPartition::new(blocks)
    }

    /// `self <= other` when every block of `other` is a union of consecutive
    /// blocks of `self`.
    pub fn leq(&self, other: &OrderedPartition) -> bool {
        let mut i = 0;
        for target in &other.blocks {
            let mut acc: Vec<Label> = Vec::new();
            while acc.len() < target.len() && i < self.blocks.len() {
                acc.extend(&self.blocks[i]);
                i += 1;
            }
            acc.sort_unstable();
            if acc != *target {
                return false;
            }
        }
        i == self.blocks.len()
    }

    pub fn restrict(&self, keep: &BTreeSet<Label>) -> OrderedPartition {
        let blocks = self
            .blocks
            .iter()
            .map(|b| b.iter().copied().filter(|l| keep.contains(l)).collect::<Vec<_>>())
            .filter(|b| !b.is_empty())
            .collect();
        OrderedPartition { blocks }
    }

    /// Remove label `i` and close the gap.
    pub fn degeneracy(&self, i: Label) -> OrderedPartition {
        let blocks = self
            .blocks
            .iter()
            .map(|b| b.iter().filter(|&&l| l != i).map(|&l| if l > i { l - 1 } else { l }).collect::<Vec<_>>())
            .filter(|b| !b.is_empty())
            .collect();
        OrderedPartition { blocks }
    }

    /// Relabel by `sigma` (label `a` becomes `sigma[a-1]`) and re-sort blocks.
    pub fn act(&self, sigma: &[Label]) -> OrderedPartition {
        let blocks = self
            .blocks
            .iter()
            .map(|b| {
                let mut v: Vec<Label> = b.iter().map(|&l| sigma[l as usize - 1]).collect();
                v.sort_unstable();
                v
            })
            .collect();
        OrderedPartition { blocks }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<OrderedPartition> {
        let p: OrderedPartition = serde_json::from_str(text).map_err(|e| Error::Invalid(e.to_string()))?;
        OrderedPartition::new(p.blocks)
    }
}

/// All ordered set partitions of `1..=k`, sorted.
pub fn ordered_partitions(k: usize) -> Vec<OrderedPartition> {
    fn go(rest: u32, labels: &[Label], prefix: &mut Vec<Vec<Label>>, out: &mut Vec<OrderedPartition>) {
        if rest == 0 {
            out.push(OrderedPartition { blocks: prefix.clone() });
            return;
        }
        let mut sub = rest;
        while sub != 0 {
            let block = (0..labels.len()).filter(|&i| sub >> i & 1 == 1).map(|i| labels[i]).collect();
            prefix.push(block);
            go(rest & !sub, labels, prefix, out);
            prefix.pop();
            sub = (sub - 1) & rest;
        }
    }
    let labels: Vec<Label> = (1..=k as Label).collect();
    let mut out = Vec::new();
    go(if k == 0 { 0 } else { (1u32 << k) - 1 }, &labels, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// The ascending word `1 #op 2 #op ... #op k`.
pub fn ascending(op: Op, k: usize) -> Expr {
    Expr::word(op, 1..=k as Label)
}

/// Full subposet of the objects of `M_n(leaves(x))` (or its Milgram part)
/// that map into `x`.
pub fn downset(n: Op, x: &Expr, milgram_only: bool) -> Result<Poset<Expr>> {
    x.check_distinct()?;
    let tx = x.pair_table(n)?;
    let labels: Vec<Label> = x.leaf_set().into_iter().collect();
    let below: Vec<Expr> = enumerate_over(n, &labels, milgram_only)
        .into_iter()
        .filter(|y| y.pair_table(n).expect("enumerated").leq(&tx).expect("same labels"))
        .collect();
    Ok(crate::enumeration::poset_of(n, below))
}

/// `P_k = S(1 #2 ... #2 k)`, taken inside the Milgram poset.
pub fn permutohedron(k: usize) -> Result<Poset<Expr>> {
    downset(2, &ascending(2, k), true)
}

/// `P_k` together with its ordered-partition model and the bijection
/// between them.
pub struct PartitionIso {
    pub downset: Poset<Expr>,
    pub partitions: Poset<OrderedPartition>,
    /// `map[i]` is the partition index of downset element `i`.
    pub map: Vec<usize>,
}

impl PartitionIso {
    pub fn is_isomorphism(&self) -> bool {
        self.downset.is_isomorphism(&self.partitions, &self.map)
    }

    /// Number of faces of each dimension `0..k-1` (vertices first).
    pub fn face_counts(&self) -> Vec<usize> {
        let k = self.partitions.get(0).k();
        let mut counts = vec![0; k.max(1)];
        for p in self.partitions.elements() {
            counts[k - p.blocks.len()] += 1;
        }
        counts
    }
}

pub fn partition_iso(k: usize) -> Result<PartitionIso> {
    let downset = permutohedron(k)?;
    let partitions = Poset::from_relation(ordered_partitions(k), |a, b| a.leq(b));
    let map = downset
        .elements()
        .iter()
        .map(|e| {
            let p = OrderedPartition::from_expr(e)?;
            partitions.position(&p).ok_or_else(|| Error::Invalid(format!("{e} has no partition")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PartitionIso { downset, partitions, map })
}

/// The symmetric group action on `P_k`: relabel, then sort each inner block.
pub fn perm_action(sigma: &[Label], a: &Expr) -> Result<Expr> {
    let p = OrderedPartition::from_expr(a)?;
    if p.k() != sigma.len() || p.labels() != (1..=sigma.len() as Label).collect() {
        return Err(Error::Arity { expected: p.k(), got: sigma.len() });
    }
    crate::expr::perm_map(sigma)?;
    Ok(p.act(sigma).to_expr())
}

/// `π_A(B) = (B ∩ |A_1|) #1 ... #1 (B ∩ |A_p|)`.
pub fn pi_retract(a: &Expr, b: &Expr) -> Result<Expr> {
    let pa = OrderedPartition::from_expr(a)?;
    let pb = OrderedPartition::from_expr(b)?;
    if pa.labels() != pb.labels() {
        return Err(Error::LabelMismatch(pa.labels().into_iter().collect(), pb.labels().into_iter().collect()));
    }
    Ok(pi_partition(&pa, &pb).to_expr())
}

fn pi_partition(a: &OrderedPartition, b: &OrderedPartition) -> OrderedPartition {
    let blocks = a
        .blocks
        .iter()
        .flat_map(|ab| b.restrict(&ab.iter().copied().collect()).blocks)
        .collect();
    OrderedPartition { blocks }
}

/// The sequence `B_1 = A_1`, `B_i = π_{A_1} ... π_{A_{i-1}}(A_i)`.
pub fn q_chain(cells: &[Expr]) -> Result<Vec<Expr>> {
    let parts = cells.iter().map(OrderedPartition::from_expr).collect::<Result<Vec<_>>>()?;
    if let Some(first) = parts.first() {
        if let Some(bad) = parts.iter().find(|p| p.labels() != first.labels()) {
            return Err(Error::LabelMismatch(first.labels().into_iter().collect(), bad.labels().into_iter().collect()));
        }
    }
    Ok((0..parts.len())
        .map(|i| parts[..i].iter().rev().fold(parts[i].clone(), |acc, a| pi_partition(a, &acc)).to_expr())
        .collect())
}

/// Nest a chain `B_{n-1} <= ... <= B_1` into a level-ordered object: the
/// `#1` splits of `B_l` become `#l` and the innermost `#2` blocks become `#n`.
/// Levels that do not split are skipped.
pub fn q_from_chain(n: Op, chain: &[Expr]) -> Result<Expr> {
    if n < 2 || chain.len() != n as usize - 1 {
        return Err(Error::Arity { expected: n.saturating_sub(1) as usize, got: chain.len() });
    }
    let parts = chain.iter().map(OrderedPartition::from_expr).collect::<Result<Vec<_>>>()?;
    for w in parts.windows(2) {
        if !w[1].leq(&w[0]) {
            return Err(Error::Invalid(format!("{} is not below {}", w[1].to_expr(), w[0].to_expr())));
        }
    }
    fn build(parts: &[OrderedPartition], n: Op, group: &BTreeSet<Label>, level: usize) -> Expr {
        if level > parts.len() {
            return Expr::word(n, group.iter().copied());
        }
        let split = parts[level - 1].restrict(group);
        if split.blocks.len() == 1 {
            return build(parts, n, group, level + 1);
        }
        Expr::product(
            level as Op,
            split.blocks.iter().map(|b| build(parts, n, &b.iter().copied().collect(), level + 1)),
        )
    }
    Ok(build(&parts, n, &parts[0].labels(), 1))
}

/// `q(A_1, ..., A_{n-1})`.
pub fn q_map(n: Op, cells: &[Expr]) -> Result<Expr> {
    if n < 2 || cells.len() != n as usize - 1 {
        return Err(Error::Arity { expected: n.saturating_sub(1) as usize, got: cells.len() });
    }
    q_from_chain(n, &q_chain(cells)?)
}

//! Pairwise relation tables: for every pair of labels, the operation at
//! which they meet and which of the two comes first.
//!
//! A table is both the coherence fingerprint of an [`Expr`] and an element of
//! the complete graph operad (an acyclic orientation of the complete graph
//! with colored edges). Orientations are stored as the underlying total order.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::{Expr, Label, Op};

/// Relation of one unordered pair `{lo, hi}` (`lo < hi` numerically).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    pub op: Op,
    pub lo_first: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PairTable {
    n: Op,
    /// Sorted labels.
    labels: Vec<Label>,
    /// The orientation as a total order of the labels.
    order: Vec<Label>,
    /// Row-major upper triangle over `labels` positions.
    cells: Vec<Cell>,
}

fn tri_index(k: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < k);
    i * (2 * k - i - 1) / 2 + (j - i - 1)
}

/// The coherence criterion on a single pair: a relation `from` may weaken to
/// `to` when the order is kept and the color does not drop, or the order
/// flips and the color strictly rises.
pub fn weakens(from: Cell, to: Cell) -> bool {
    if from.lo_first == to.lo_first {
        to.op >= from.op
    } else {
        to.op > from.op
    }
}

impl PairTable {
    /// Build from a total order and a color for every unordered pair.
    pub fn new(n: Op, order: Vec<Label>, colors: &BTreeMap<(Label, Label), Op>) -> Result<PairTable> {
        let mut labels = order.clone();
        labels.sort_unstable();
        if labels.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidPairTable("repeated label in order".into()));
        }
        let k = labels.len();
        let pos: BTreeMap<Label, usize> = order.iter().enumerate().map(|(i, &l)| (l, i)).collect();
        let mut cells = Vec::with_capacity(k * k.saturating_sub(1) / 2);
        for i in 0..k {
            for j in i + 1..k {
                let (a, b) = (labels[i], labels[j]);
                let op = *colors
                    .get(&(a, b))
                    .or_else(|| colors.get(&(b, a)))
                    .ok_or_else(|| Error::InvalidPairTable(format!("no color for {{{a},{b}}}")))?;
                if op == 0 || op > n {
                    return Err(Error::InvalidPairTable(format!("color {op} outside 1..{n}")));
                }
                cells.push(Cell { op, lo_first: pos[&a] < pos[&b] });
            }
        }
        Ok(PairTable { n, labels, order, cells })
    }

    /// Build from explicit `(a, b, op, first)` records, checking that the
    /// orientation is a transitive tournament.
    pub fn from_relations(n: Op, labels: &[Label], rels: &[(Label, Label, Op, Label)]) -> Result<PairTable> {
        let set: BTreeSet<Label> = labels.iter().copied().collect();
        if set.len() != labels.len() {
            return Err(Error::InvalidPairTable("repeated label".into()));
        }
        let mut colors = BTreeMap::new();
        let mut wins: BTreeMap<Label, usize> = set.iter().map(|&l| (l, 0)).collect();
        let mut first_of = BTreeMap::new();
        for &(a, b, op, first) in rels {
            if a == b || !set.contains(&a) || !set.contains(&b) {
                return Err(Error::InvalidPairTable(format!("bad pair {{{a},{b}}}")));
            }
            if first != a && first != b {
                return Err(Error::InvalidPairTable(format!("first={first} not in {{{a},{b}}}")));
            }
            let key = (a.min(b), a.max(b));
            if colors.insert(key, op).is_some() {
                return Err(Error::InvalidPairTable(format!("pair {{{a},{b}}} listed twice")));
            }
            first_of.insert(key, first);
            *wins.get_mut(&first).unwrap() += 1;
        }
        let k = set.len();
        if colors.len() != k * k.saturating_sub(1) / 2 {
            return Err(Error::InvalidPairTable("some pair has no relation".into()));
        }
        let mut order: Vec<Label> = set.iter().copied().collect();
        order.sort_by_key(|l| std::cmp::Reverse(wins[l]));
        let t = PairTable::new(n, order, &colors)?;
        for (&(a, b), &first) in &first_of {
            if t.relation(a, b).map(|(_, f)| f) != Some(first) {
                return Err(Error::InvalidPairTable("orientation has a directed cycle".into()));
            }
        }
        Ok(t)
    }

    pub fn n(&self) -> Op {
        self.n
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    /// The orientation as a sequence of labels.
    pub fn order(&self) -> &[Label] {
        &self.order
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    fn pos(&self, l: Label) -> Option<usize> {
        self.labels.binary_search(&l).ok()
    }

    fn cell(&self, a: Label, b: Label) -> Option<Cell> {
        let (i, j) = (self.pos(a)?, self.pos(b)?);
        if i == j {
            return None;
        }
        let k = self.labels.len();
        Some(self.cells[tri_index(k, i.min(j), i.max(j))])
    }

    /// `(op, first)` for the pair `{a, b}`.
    pub fn relation(&self, a: Label, b: Label) -> Option<(Op, Label)> {
        let c = self.cell(a, b)?;
        let (lo, hi) = (a.min(b), a.max(b));
        Some((c.op, if c.lo_first { lo } else { hi }))
    }

    /// All relations as `(a, b, op, first)` with `a < b`.
    pub fn relations(&self) -> Vec<(Label, Label, Op, Label)> {
        let k = self.labels.len();
        let mut out = Vec::with_capacity(self.cells.len());
        for i in 0..k {
            for j in i + 1..k {
                let c = self.cells[tri_index(k, i, j)];
                let (a, b) = (self.labels[i], self.labels[j]);
                out.push((a, b, c.op, if c.lo_first { a } else { b }));
            }
        }
        out
    }

    pub fn restrict(&self, keep: &BTreeSet<Label>) -> PairTable {
        let order: Vec<Label> = self.order.iter().copied().filter(|l| keep.contains(l)).collect();
        let colors = self
            .relations()
            .into_iter()
            .filter(|(a, b, _, _)| keep.contains(a) && keep.contains(b))
            .map(|(a, b, op, _)| ((a, b), op))
            .collect();
        PairTable::new(self.n, order, &colors).expect("restriction of a valid table")
    }

    pub fn map_labels(&self, f: &impl Fn(Label) -> Label) -> PairTable {
        let order = self.order.iter().map(|&l| f(l)).collect();
        let colors = self.relations().into_iter().map(|(a, b, op, _)| ((f(a), f(b)), op)).collect();
        PairTable::new(self.n, order, &colors).expect("relabeling by an injective map")
    }

    /// The order of the complete graph operad; on realizable tables this is
    /// the coherence criterion for morphism existence.
    pub fn leq(&self, other: &PairTable) -> Result<bool> {
        if self.labels != other.labels {
            return Err(Error::LabelMismatch(self.labels.clone(), other.labels.clone()));
        }
        Ok(self.cells.iter().zip(&other.cells).all(|(&a, &b)| weakens(a, b)))
    }

    /// The unique expression with this fingerprint, if any.
    ///
    /// Splits the orientation order at every position where all crossing
    /// pairs share one color; that color is the top operation and the
    /// resulting blocks are the (finest) factors.
    pub fn realize(&self) -> Option<Expr> {
        self.realize_seq(&self.order)
    }

    fn realize_seq(&self, seq: &[Label]) -> Option<Expr> {
        match seq.len() {
            0 => return Some(Expr::Zero),
            1 => return Some(Expr::Gen(seq[0])),
            _ => {}
        }
        let mut top: Option<Op> = None;
        let mut cuts = Vec::new();
        for t in 1..seq.len() {
            let mut color = None;
            let mut uniform = true;
            'scan: for &a in &seq[..t] {
                for &b in &seq[t..] {
                    let c = self.cell(a, b).unwrap().op;
                    match color {
                        None => color = Some(c),
                        Some(prev) if prev != c => {
                            uniform = false;
                            break 'scan;
                        }
                        _ => {}
                    }
                }
            }
            if uniform {
                let c = color.unwrap();
                // Two global splits with different colors would force the
                // pair (first, last) to carry both colors.
                assert!(top.is_none_or(|p| p == c), "two top operations admit a split");
                top = Some(c);
                cuts.push(t);
            }
        }
        let op = top?;
        let mut parts = Vec::with_capacity(cuts.len() + 1);
        let mut start = 0;
        for end in cuts.into_iter().chain(std::iter::once(seq.len())) {
            parts.push(self.realize_seq(&seq[start..end])?);
            start = end;
        }
        Some(Expr::product(op, parts))
    }
}

impl Expr {
    /// The pairwise relation table of an expression with distinct generators.
    pub fn pair_table(&self, n: Op) -> Result<PairTable> {
        self.check_distinct()?;
        if self.max_op() > n {
            return Err(Error::Invalid(format!("{self} uses operations beyond n = {n}")));
        }
        let mut colors = BTreeMap::new();
        fn walk(e: &Expr, colors: &mut BTreeMap<(Label, Label), Op>) {
            if let Expr::Node(op, ch) = e {
                let leaves: Vec<Vec<Label>> = ch.iter().map(Expr::leaves).collect();
                for x in 0..leaves.len() {
                    for y in x + 1..leaves.len() {
                        for &a in &leaves[x] {
                            for &b in &leaves[y] {
                                colors.insert((a.min(b), a.max(b)), *op);
                            }
                        }
                    }
                }
                ch.iter().for_each(|c| walk(c, colors));
            }
        }
        walk(self, &mut colors);
        PairTable::new(n, self.leaves(), &colors)
    }
}

/// Wire form: `{"n":N,"labels":[...],"rels":[{"a":A,"b":B,"op":I,"first":F},...]}`.
#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct PairTableJson {
    pub n: Op,
    pub labels: Vec<Label>,
    pub rels: Vec<RelJson>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
pub struct RelJson {
    pub a: Label,
    pub b: Label,
    pub op: Op,
    pub first: Label,
}

impl From<&PairTable> for PairTableJson {
    fn from(t: &PairTable) -> Self {
        PairTableJson {
            n: t.n,
            labels: t.labels.clone(),
            rels: t.relations().into_iter().map(|(a, b, op, first)| RelJson { a, b, op, first }).collect(),
        }
    }
}

impl TryFrom<PairTableJson> for PairTable {
    type Error = Error;

    fn try_from(j: PairTableJson) -> Result<PairTable> {
        let rels: Vec<_> = j.rels.iter().map(|r| (r.a, r.b, r.op, r.first)).collect();
        PairTable::from_relations(j.n, &j.labels, &rels)
    }
}

impl PairTable {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&PairTableJson::from(self)).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<PairTable> {
        let j: PairTableJson =
            serde_json::from_str(text).map_err(|e| Error::InvalidPairTable(e.to_string()))?;
        j.try_into()
    }
}

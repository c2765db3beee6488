//! Finite posets with a dense order matrix and Hasse covers.

use std::fmt::Write as _;

use rayon::prelude::*;

#[derive(Clone, Debug)]
struct BitRow(Vec<u64>);

impl BitRow {
    fn new(len: usize) -> Self {
        BitRow(vec![0; len.div_ceil(64)])
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }
    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(w, &bits)| {
            (0..64).filter(move |b| bits >> b & 1 == 1).map(move |b| w * 64 + b)
        })
    }
}

#[derive(Clone, Debug)]
pub struct Poset<T> {
    elements: Vec<T>,
    /// Strict upper sets: `up[i]` holds every `j != i` with `i <= j`.
    up: Vec<BitRow>,
    covers: Vec<Vec<usize>>,
}

impl<T: Sync> Poset<T> {
    /// Build from elements and an order predicate. The predicate is trusted;
    /// call [`Poset::is_partial_order`] to check it.
    pub fn from_relation(elements: Vec<T>, leq: impl Fn(&T, &T) -> bool + Sync) -> Self {
        let len = elements.len();
        let up: Vec<BitRow> = (0..len)
            .into_par_iter()
            .map(|i| {
                let mut row = BitRow::new(len);
                for j in 0..len {
                    if i != j && leq(&elements[i], &elements[j]) {
                        row.set(j);
                    }
                }
                row
            })
            .collect();
        let covers = (0..len)
            .into_par_iter()
            .map(|i| {
                let mut reach = BitRow::new(len);
                for m in up[i].iter() {
                    for (r, w) in reach.0.iter_mut().zip(&up[m].0) {
                        *r |= w;
                    }
                }
                up[i].iter().filter(|&j| !reach.get(j)).collect()
            })
            .collect();
        Poset { elements, up, covers }
    }
}

impl<T> Poset<T> {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[T] {
        &self.elements
    }

    pub fn get(&self, i: usize) -> &T {
        &self.elements[i]
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        i == j || self.up[i].get(j)
    }

    pub fn lt(&self, i: usize, j: usize) -> bool {
        self.up[i].get(j)
    }

    /// Strict upper set of `i`.
    pub fn above(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.up[i].iter()
    }

    /// Upper covers of `i`.
    pub fn covers(&self, i: usize) -> &[usize] {
        &self.covers[i]
    }

    pub fn cover_edges(&self) -> Vec<(usize, usize)> {
        (0..self.len()).flat_map(|i| self.covers[i].iter().map(move |&j| (i, j))).collect()
    }

    /// All strictly comparable pairs `(i, j)` with `i < j`.
    pub fn comparable_pairs(&self) -> Vec<(usize, usize)> {
        (0..self.len()).flat_map(|i| self.up[i].iter().map(move |j| (i, j))).collect()
    }

    /// Reflexive by construction; checks antisymmetry and transitivity.
    pub fn is_partial_order(&self) -> bool {
        let len = self.len();
        (0..len).all(|i| {
            self.up[i].iter().all(|j| {
                !self.up[j].get(i) && self.up[j].iter().all(|m| m == i || self.up[i].get(m))
            })
        })
    }

    /// True when the transitive closure of the covers is the strict order.
    pub fn covers_generate_order(&self) -> bool {
        (0..self.len()).all(|s| {
            let mut seen = vec![false; self.len()];
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for &v in &self.covers[u] {
                    if !seen[v] {
                        seen[v] = true;
                        stack.push(v);
                    }
                }
            }
            (0..self.len()).all(|j| seen[j] == self.up[s].get(j))
        })
    }

    pub fn minimal(&self) -> Vec<usize> {
        (0..self.len()).filter(|&j| !(0..self.len()).any(|i| self.up[i].get(j))).collect()
    }

    pub fn maximal(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.covers[i].is_empty()).collect()
    }

    /// Inclusion-maximal chains, bottom to top.
    pub fn maximal_chains(&self) -> Vec<Vec<usize>> {
        fn extend<T>(p: &Poset<T>, chain: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            let last = *chain.last().unwrap();
            if p.covers[last].is_empty() {
                out.push(chain.clone());
                return;
            }
            for &c in &p.covers[last] {
                chain.push(c);
                extend(p, chain, out);
                chain.pop();
            }
        }
        let mut out = Vec::new();
        for m in self.minimal() {
            extend(self, &mut vec![m], &mut out);
        }
        out
    }

    /// Every strict chain, grouped by length: `result[d]` holds the chains
    /// with `d + 1` elements, each listed bottom to top, sorted.
    pub fn chains(&self) -> Vec<Vec<Vec<usize>>> {
        let mut graded: Vec<Vec<Vec<usize>>> = vec![(0..self.len()).map(|i| vec![i]).collect()];
        loop {
            let next: Vec<Vec<usize>> = graded
                .last()
                .unwrap()
                .iter()
                .flat_map(|c| {
                    let last = *c.last().unwrap();
                    self.up[last].iter().map(move |j| {
                        let mut e = c.clone();
                        e.push(j);
                        e
                    })
                })
                .collect();
            if next.is_empty() {
                break;
            }
            graded.push(next);
        }
        if self.is_empty() {
            graded.clear();
        }
        graded
    }

    /// Element indices whose value satisfies `keep`, as a full subposet.
    pub fn subposet(&self, keep: impl Fn(&T) -> bool) -> Poset<T>
    where
        T: Clone,
    {
        let idx: Vec<usize> = (0..self.len()).filter(|&i| keep(&self.elements[i])).collect();
        let len = idx.len();
        let mut up = vec![BitRow::new(len); len];
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                if self.up[i].get(j) {
                    up[a].set(b);
                }
            }
        }
        let elements = idx.iter().map(|&i| self.elements[i].clone()).collect();
        let covers = (0..len)
            .map(|a| {
                up[a]
                    .iter()
                    .filter(|&b| !up[a].iter().any(|m| m != b && up[m].get(b)))
                    .collect()
            })
            .collect();
        Poset { elements, up, covers }
    }

    pub fn position(&self, x: &T) -> Option<usize>
    where
        T: PartialEq,
    {
        self.elements.iter().position(|e| e == x)
    }

    /// Whether `map` (indices into `other`) is a bijection that preserves
    /// and reflects the order.
    pub fn is_isomorphism<U>(&self, other: &Poset<U>, map: &[usize]) -> bool {
        if map.len() != self.len() || other.len() != self.len() {
            return false;
        }
        let mut hit = vec![false; other.len()];
        for &m in map {
            if m >= other.len() || std::mem::replace(&mut hit[m], true) {
                return false;
            }
        }
        (0..self.len()).all(|i| (0..self.len()).all(|j| self.leq(i, j) == other.leq(map[i], map[j])))
    }

    /// Graphviz rendering over the given edge list.
    pub fn to_dot(&self, name: &str, label: impl Fn(&T) -> String, edges: &[(usize, usize, Option<String>)]) -> String {
        let mut s = format!("digraph \"{name}\" {{\n  rankdir=BT;\n");
        for (i, e) in self.elements.iter().enumerate() {
            writeln!(s, "  n{i} [label=\"{}\"];", label(e).replace('"', "\\\"")).unwrap();
        }
        for (a, b, l) in edges {
            match l {
                Some(l) => writeln!(s, "  n{a} -> n{b} [label=\"{}\"];", l.replace('"', "\\\"")).unwrap(),
                None => writeln!(s, "  n{a} -> n{b};").unwrap(),
            }
        }
        s.push_str("}\n");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn divisors(n: u32) -> Poset<u32> {
        Poset::from_relation((1..=n).filter(|d| n % d == 0).collect(), |a, b| b % a == 0)
    }

    #[test]
    fn divisor_lattice() {
        let p = divisors(12);
        assert_eq!(p.len(), 6);
        assert!(p.is_partial_order());
        assert!(p.covers_generate_order());
        // 1-2-4-12, 1-2-6-12, 1-3-6-12
        assert_eq!(p.maximal_chains().len(), 3);
        assert_eq!(p.cover_edges().len(), 7);
        assert_eq!(p.minimal(), vec![0]);
        let c = p.chains();
        assert_eq!(c[0].len(), 6);
        assert_eq!(c.len(), 4);
    }

    #[test]
    fn detects_non_orders() {
        let p = Poset::from_relation(vec![1, 2, 3], |a, b| a != b || a == b);
        assert!(!p.is_partial_order());
        let q = Poset::from_relation(vec![1, 2, 3], |a, b| (*a, *b) == (1, 2) || (*a, *b) == (2, 3) || a == b);
        assert!(!q.is_partial_order());
    }

    #[test]
    fn subposet_recomputes_covers() {
        let p = divisors(12);
        let odd_or_top = p.subposet(|&d| d == 1 || d == 12);
        assert_eq!(odd_or_top.cover_edges(), vec![(0, 1)]);
    }

    #[test]
    fn isomorphism_check() {
        let a = divisors(6);
        let b = divisors(10);
        assert!(a.is_isomorphism(&b, &[0, 1, 2, 3]));
        let chain = Poset::from_relation(vec![1, 2, 3, 4], |x, y| x <= y);
        assert!(!a.is_isomorphism(&chain, &[0, 1, 2, 3]));
    }
}

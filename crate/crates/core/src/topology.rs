//! Chain complexes of nerves and integer homology via Smith normal form.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::expr::Op;
use crate::graph_operads::{gamma_simplices, GammaSimplex};
use crate::poset::Poset;

/// Column-major sparse integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: usize,
    /// Per column, `(row, value)` sorted by row, no zeros.
    pub columns: Vec<Vec<(usize, i64)>>,
}

impl SparseMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, columns: vec![Vec::new(); cols] }
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        let mut m = vec![vec![BigInt::zero(); self.cols]; self.rows];
        for (c, col) in self.columns.iter().enumerate() {
            for &(r, v) in col {
                m[r][c] = BigInt::from(v);
            }
        }
        m
    }

    /// `self * other`, or `None` on overflow.
    pub fn mul(&self, other: &SparseMatrix) -> Option<SparseMatrix> {
        assert_eq!(self.cols, other.rows);
        let columns = other
            .columns
            .iter()
            .map(|col| {
                let mut acc: HashMap<usize, i64> = HashMap::new();
                for &(k, b) in col {
                    for &(r, a) in &self.columns[k] {
                        let e = acc.entry(r).or_insert(0);
                        *e = e.checked_add(a.checked_mul(b)?)?;
                    }
                }
                let mut v: Vec<(usize, i64)> = acc.into_iter().filter(|&(_, x)| x != 0).collect();
                v.sort_unstable();
                Some(v)
            })
            .collect::<Option<Vec<_>>>()?;
        Some(SparseMatrix { rows: self.rows, cols: other.cols, columns })
    }
}

/// A finite chain complex: `boundaries[d]` maps degree `d` to `d - 1`
/// (`boundaries[0]` is the zero map to the zero module).
#[derive(Clone, Debug)]
pub struct ChainComplex {
    pub f: Vec<usize>,
    pub boundaries: Vec<SparseMatrix>,
}

impl ChainComplex {
    /// Assemble from graded bases and a face map returning signed faces.
    fn build<K: Clone + Eq + std::hash::Hash>(
        bases: Vec<Vec<K>>,
        faces: impl Fn(&K) -> Vec<(K, i64)>,
    ) -> ChainComplex {
        let f: Vec<usize> = bases.iter().map(Vec::len).collect();
        let mut boundaries = vec![SparseMatrix::zero(0, f.first().copied().unwrap_or(0))];
        for d in 1..bases.len() {
            let index: HashMap<&K, usize> = bases[d - 1].iter().enumerate().map(|(i, k)| (k, i)).collect();
            let columns = bases[d]
                .iter()
                .map(|s| {
                    let mut acc: HashMap<usize, i64> = HashMap::new();
                    for (face, sign) in faces(s) {
                        *acc.entry(index[&face]).or_insert(0) += sign;
                    }
                    let mut v: Vec<(usize, i64)> = acc.into_iter().filter(|&(_, x)| x != 0).collect();
                    v.sort_unstable();
                    v
                })
                .collect();
            boundaries.push(SparseMatrix { rows: f[d - 1], cols: f[d], columns });
        }
        ChainComplex { f, boundaries }
    }

    /// Verify `∂_{d} ∘ ∂_{d+1} = 0` in every degree.
    pub fn check_boundary(&self) -> Result<()> {
        for d in 1..self.boundaries.len().saturating_sub(1) {
            let prod = self.boundaries[d].mul(&self.boundaries[d + 1]);
            if prod.is_none_or(|p| p.nnz() != 0) {
                return Err(Error::BoundaryNotNilpotent(d + 1));
            }
        }
        Ok(())
    }
}

/// Strict chains of `p` as simplices.
pub fn order_complex<T>(p: &Poset<T>) -> ChainComplex {
    ChainComplex::build(p.chains(), |c: &Vec<usize>| {
        (0..c.len())
            .map(|i| {
                let mut face = c.clone();
                face.remove(i);
                (face, if i % 2 == 0 { 1 } else { -1 })
            })
            .collect()
    })
}

/// Normalized chains of `Gamma^(n)(k)`: degenerate faces are dropped.
pub fn gamma_chain_complex(n: Op, k: usize) -> ChainComplex {
    ChainComplex::build(gamma_simplices(n, k), |s: &GammaSimplex| {
        if s.chain.len() < 2 {
            return Vec::new();
        }
        (0..s.chain.len())
            .map(|i| (s.face(i), if i % 2 == 0 { 1 } else { -1 }))
            .filter(|(f, _)| !f.is_degenerate())
            .collect()
    })
}

/// Result of a Smith normal form computation: `u * m * v` is diagonal with
/// entries `factors` followed by zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct Snf {
    pub factors: Vec<BigInt>,
    pub u: Vec<Vec<BigInt>>,
    pub v: Vec<Vec<BigInt>>,
}

impl Snf {
    pub fn rank(&self) -> usize {
        self.factors.len()
    }
}

fn identity(k: usize) -> Vec<Vec<BigInt>> {
    (0..k).map(|i| (0..k).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

struct Dense<'a> {
    a: Vec<Vec<BigInt>>,
    u: Option<&'a mut Vec<Vec<BigInt>>>,
    v: Option<&'a mut Vec<Vec<BigInt>>>,
}

impl Dense<'_> {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        if let Some(u) = self.u.as_deref_mut() {
            u.swap(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for row in &mut self.a {
            row.swap(i, j);
        }
        if let Some(v) = self.v.as_deref_mut() {
            for row in v.iter_mut() {
                row.swap(i, j);
            }
        }
    }

    /// row_i += q * row_j
    fn add_row(&mut self, i: usize, j: usize, q: &BigInt) {
        fn go(m: &mut [Vec<BigInt>], i: usize, j: usize, q: &BigInt) {
            let src = m[j].clone();
            for (x, y) in m[i].iter_mut().zip(&src) {
                if !y.is_zero() {
                    *x += q * y;
                }
            }
        }
        go(&mut self.a, i, j, q);
        if let Some(u) = self.u.as_deref_mut() {
            go(u, i, j, q);
        }
    }

    /// col_i += q * col_j
    fn add_col(&mut self, i: usize, j: usize, q: &BigInt) {
        fn go(m: &mut [Vec<BigInt>], i: usize, j: usize, q: &BigInt) {
            for row in m.iter_mut() {
                if !row[j].is_zero() {
                    let d = q * &row[j];
                    row[i] += d;
                }
            }
        }
        go(&mut self.a, i, j, q);
        if let Some(v) = self.v.as_deref_mut() {
            go(v, i, j, q);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in &mut self.a[i] {
            *x = -&*x;
        }
        if let Some(u) = self.u.as_deref_mut() {
            for x in &mut u[i] {
                *x = -&*x;
            }
        }
    }

    fn run(&mut self) -> Vec<BigInt> {
        let rows = self.a.len();
        let cols = self.a.first().map_or(0, Vec::len);
        let mut factors = Vec::new();
        for t in 0..rows.min(cols) {
            let Some((pi, pj)) = self.smallest(t..rows, t..cols) else { break };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                let mut dirty = false;
                for i in t + 1..rows {
                    if !self.a[i][t].is_zero() {
                        let q = self.a[i][t].div_floor(&self.a[t][t]);
                        self.add_row(i, t, &-q);
                        dirty |= !self.a[i][t].is_zero();
                    }
                }
                for j in t + 1..cols {
                    if !self.a[t][j].is_zero() {
                        let q = self.a[t][j].div_floor(&self.a[t][t]);
                        self.add_col(j, t, &-q);
                        dirty |= !self.a[t][j].is_zero();
                    }
                }
                if dirty {
                    // bring a smaller remainder in row or column t to the pivot
                    let (pi, pj) = self.smallest_cross(t, rows, cols);
                    self.swap_rows(t, pi);
                    self.swap_cols(t, pj);
                    continue;
                }
                let p = self.a[t][t].clone();
                let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !self.a[i][j].is_multiple_of(&p)));
                match bad {
                    Some(i) => self.add_row(t, i, &BigInt::one()),
                    None => break,
                }
            }
            if self.a[t][t].is_negative() {
                self.negate_row(t);
            }
            factors.push(self.a[t][t].clone());
        }
        factors
    }

    fn smallest(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in rows {
            for j in cols.clone() {
                let x = &self.a[i][j];
                if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < self.a[bi][bj].abs()) {
                    best = Some((i, j));
                    if x.abs().is_one() {
                        return best;
                    }
                }
            }
        }
        best
    }

    fn smallest_cross(&self, t: usize, rows: usize, cols: usize) -> (usize, usize) {
        let mut best = (t, t);
        let consider = |i: usize, j: usize, best: &mut (usize, usize)| {
            let x = &self.a[i][j];
            if !x.is_zero() && x.abs() < self.a[best.0][best.1].abs() {
                *best = (i, j);
            }
        };
        for i in t + 1..rows {
            consider(i, t, &mut best);
        }
        for j in t + 1..cols {
            consider(t, j, &mut best);
        }
        best
    }
}

/// Smith normal form with the unimodular transforms.
pub fn smith_normal_form(m: &[Vec<BigInt>]) -> Snf {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut u = identity(rows);
    let mut v = identity(cols);
    let factors = Dense { a: m.to_vec(), u: Some(&mut u), v: Some(&mut v) }.run();
    Snf { factors, u, v }
}

/// Nonzero invariant factors of a sparse integer matrix. Unit pivots are
/// eliminated sparsely first; the remainder goes through the dense form.
pub fn invariant_factors(m: &SparseMatrix) -> Vec<BigInt> {
    let mut cols: Vec<HashMap<usize, i64>> = m.columns.iter().map(|c| c.iter().copied().collect()).collect();
    let mut row_index: Vec<Vec<usize>> = vec![Vec::new(); m.rows];
    for (c, col) in m.columns.iter().enumerate() {
        for &(r, _) in col {
            row_index[r].push(c);
        }
    }
    let mut alive_col = vec![true; m.cols];
    let mut alive_row = vec![true; m.rows];
    let mut units = 0usize;
    // process columns by increasing fill
    let mut order: Vec<usize> = (0..m.cols).collect();
    order.sort_by_key(|&c| cols[c].len());
    'outer: for &c in &order {
        if !alive_col[c] {
            continue;
        }
        let Some((&r, &p)) = cols[c].iter().filter(|(_, v)| v.abs() == 1).min_by_key(|(&r, _)| row_index[r].len())
        else {
            continue;
        };
        // eliminate row r from every other column using column c
        let mut others: Vec<usize> = row_index[r].iter().copied().filter(|&o| o != c && alive_col[o]).collect();
        others.sort_unstable();
        others.dedup();
        let mut updates = Vec::with_capacity(others.len());
        for &o in &others {
            let Some(&a) = cols[o].get(&r) else { continue };
            let q = a * p; // a / p, p = ±1
            let mut new = cols[o].clone();
            for (&ri, &vi) in &cols[c] {
                let Some(delta) = q.checked_mul(vi) else { break 'outer };
                let e = new.entry(ri).or_insert(0);
                let Some(x) = e.checked_sub(delta) else { break 'outer };
                *e = x;
            }
            new.retain(|_, x| *x != 0);
            updates.push((o, new));
        }
        for (o, new) in updates {
            for &ri in new.keys() {
                if !cols[o].contains_key(&ri) {
                    row_index[ri].push(o);
                }
            }
            cols[o] = new;
        }
        alive_col[c] = false;
        alive_row[r] = false;
        units += 1;
        // drop the pivot column from the row index lazily: mark dead
        for &ri in cols[c].keys() {
            row_index[ri].retain(|&x| x != c);
        }
    }
    let live_rows: Vec<usize> = (0..m.rows).filter(|&r| alive_row[r]).collect();
    let live_cols: Vec<usize> = (0..m.cols).filter(|&c| alive_col[c] && cols[c].iter().any(|(r, _)| alive_row[*r])).collect();
    let mut factors = vec![BigInt::one(); units];
    if !live_rows.is_empty() && !live_cols.is_empty() {
        let pos: HashMap<usize, usize> = live_rows.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        let mut dense = vec![vec![BigInt::zero(); live_cols.len()]; live_rows.len()];
        for (j, &c) in live_cols.iter().enumerate() {
            for (r, &v) in &cols[c] {
                if let Some(&i) = pos.get(r) {
                    dense[i][j] = BigInt::from(v);
                }
            }
        }
        factors.extend(Dense { a: dense, u: None, v: None }.run());
    }
    factors
}

#[derive(Clone, Debug, PartialEq)]
pub struct HomologyReport {
    pub f: Vec<usize>,
    pub betti: Vec<usize>,
    /// `(degree, invariant factors > 1)` for degrees with torsion.
    pub torsion: Vec<(usize, Vec<BigInt>)>,
    pub euler: i64,
}

impl HomologyReport {
    pub fn has_torsion(&self) -> bool {
        !self.torsion.is_empty()
    }

    /// Betti numbers with trailing zeros removed.
    pub fn betti_trimmed(&self) -> Vec<usize> {
        let mut b = self.betti.clone();
        while b.len() > 1 && b.last() == Some(&0) {
            b.pop();
        }
        b
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Wire<'a> {
            f: &'a [usize],
            betti: &'a [usize],
            torsion: Vec<(usize, Vec<Value>)>,
            euler: i64,
        }
        let num = |x: &BigInt| x.to_u64().map_or_else(|| Value::String(x.to_string()), Value::from);
        let torsion = self.torsion.iter().map(|(d, fs)| (*d, fs.iter().map(num).collect())).collect();
        serde_json::to_string(&Wire { f: &self.f, betti: &self.betti, torsion, euler: self.euler }).expect("serializable")
    }
}

pub fn homology(c: &ChainComplex) -> Result<HomologyReport> {
    c.check_boundary()?;
    let top = c.f.len();
    let factors: Vec<Vec<BigInt>> = c.boundaries.iter().map(invariant_factors).collect();
    let rank = |d: usize| factors.get(d).map_or(0, Vec::len);
    let mut betti = Vec::with_capacity(top);
    let mut torsion = Vec::new();
    for d in 0..top {
        betti.push(c.f[d] - rank(d) - rank(d + 1));
        if let Some(fs) = factors.get(d + 1) {
            let t: Vec<BigInt> = fs.iter().filter(|x| !x.is_one()).cloned().collect();
            if !t.is_empty() {
                torsion.push((d, t));
            }
        }
    }
    let alt = |v: &[usize]| v.iter().enumerate().map(|(d, &x)| if d % 2 == 0 { x as i64 } else { -(x as i64) }).sum::<i64>();
    let euler = alt(&c.f);
    debug_assert_eq!(euler, alt(&betti));
    Ok(HomologyReport { f: c.f.clone(), betti, torsion, euler })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumeration::build_poset;
    use proptest::prelude::*;

    fn big(m: &[&[i64]]) -> Vec<Vec<BigInt>> {
        m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
        let inner = b.len();
        let cols = b.first().map_or(0, Vec::len);
        a.iter()
            .map(|row| (0..cols).map(|j| (0..inner).map(|k| &row[k] * &b[k][j]).sum()).collect())
            .collect()
    }

    fn det(m: &[Vec<BigInt>]) -> BigInt {
        // Laplace expansion, small matrices only
        if m.is_empty() {
            return BigInt::one();
        }
        (0..m.len())
            .map(|j| {
                let minor: Vec<Vec<BigInt>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, x)| x.clone()).collect())
                    .collect();
                let s = if j % 2 == 0 { BigInt::one() } else { -BigInt::one() };
                s * &m[0][j] * det(&minor)
            })
            .sum()
    }

    fn subsets(n: usize, r: usize) -> Vec<Vec<usize>> {
        if r == 0 {
            return vec![vec![]];
        }
        (r - 1..n)
            .flat_map(|last| {
                subsets(last, r - 1).into_iter().map(move |mut s| {
                    s.push(last);
                    s
                })
            })
            .collect()
    }

    /// Determinantal divisors: d_1 ... d_j = gcd of all j x j minors.
    fn factors_by_minors(m: &[Vec<BigInt>]) -> Vec<BigInt> {
        let rows = m.len();
        let cols = m.first().map_or(0, Vec::len);
        let mut out = Vec::new();
        let mut prev = BigInt::one();
        for j in 1..=rows.min(cols) {
            let mut g = BigInt::zero();
            for rs in subsets(rows, j) {
                for cs in subsets(cols, j) {
                    let sub: Vec<Vec<BigInt>> = rs.iter().map(|&r| cs.iter().map(|&c| m[r][c].clone()).collect()).collect();
                    g = g.gcd(&det(&sub));
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

    fn check_snf(m: &[Vec<BigInt>]) {
        let s = smith_normal_form(m);
        let d = mat_mul(&mat_mul(&s.u, m), &s.v);
        for (i, row) in d.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                let want = if i == j && i < s.factors.len() { s.factors[i].clone() } else { BigInt::zero() };
                assert_eq!(*x, want);
            }
        }
        assert!(det(&s.u).abs().is_one() && det(&s.v).abs().is_one());
        assert!(s.factors.windows(2).all(|w| w[1].is_multiple_of(&w[0])));
        assert_eq!(s.factors, factors_by_minors(m));
    }

    #[test]
    fn snf_examples() {
        let s = smith_normal_form(&big(&[&[2, 0], &[0, 3]]));
        assert_eq!(s.factors, vec![BigInt::from(1), BigInt::from(6)]);
        assert_eq!(smith_normal_form(&big(&[&[0, 0], &[0, 0], &[0, 0]])).rank(), 0);
        assert_eq!(smith_normal_form(&identity(4)).factors, vec![BigInt::one(); 4]);
        check_snf(&big(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]));
        check_snf(&big(&[&[2, 0], &[0, 3]]));
    }

    proptest! {
        #[test]
        fn snf_matches_determinantal_divisors(entries in proptest::collection::vec(-6i64..7, 12), rows in 1usize..4) {
            let cols = 12 / rows.max(1) / 1;
            let cols = cols.min(4);
            let m: Vec<Vec<BigInt>> = (0..rows).map(|r| (0..cols).map(|c| BigInt::from(entries[(r * cols + c) % 12])).collect()).collect();
            check_snf(&m);
            let sparse = SparseMatrix {
                rows,
                cols,
                columns: (0..cols).map(|c| (0..rows).filter_map(|r| {
                    let v = entries[(r * cols + c) % 12];
                    (v != 0).then_some((r, v))
                }).collect()).collect(),
            };
            prop_assert_eq!(invariant_factors(&sparse), factors_by_minors(&m));
        }

        #[test]
        fn snf_invariant_under_shuffles(entries in proptest::collection::vec(-5i64..6, 9), swap in 0usize..3) {
            let m: Vec<Vec<BigInt>> = (0..3).map(|r| (0..3).map(|c| BigInt::from(entries[r * 3 + c])).collect()).collect();
            let mut shuffled = m.clone();
            shuffled.swap(0, swap);
            for row in &mut shuffled {
                row.swap(1, 2);
            }
            prop_assert_eq!(smith_normal_form(&m).factors, smith_normal_form(&shuffled).factors);
        }
    }

    #[test]
    fn octahedron_and_square() {
        let h = homology(&order_complex(&build_poset(3, 2, false))).unwrap();
        assert_eq!(h.f, vec![6, 12, 8]);
        assert_eq!(h.betti, vec![1, 0, 1]);
        let sq = homology(&order_complex(&build_poset(2, 2, false))).unwrap();
        assert_eq!(sq.betti, vec![1, 1]);
        let point = Poset::from_relation(vec![()], |_, _| true);
        assert_eq!(homology(&order_complex(&point)).unwrap().f, vec![1]);
    }

    #[test]
    fn configuration_space_homology() {
        let c = order_complex(&build_poset(2, 3, false));
        c.check_boundary().unwrap();
        let h = homology(&c).unwrap();
        assert_eq!(h.betti_trimmed(), vec![1, 3, 2]);
        assert!(!h.has_torsion());
    }

    #[test]
    fn gamma_spheres() {
        let h = homology(&gamma_chain_complex(2, 2)).unwrap();
        assert_eq!((h.f.clone(), h.betti.clone()), (vec![2, 2], vec![1, 1]));
        assert_eq!(homology(&gamma_chain_complex(1, 2)).unwrap().betti, vec![2]);
        assert_eq!(homology(&gamma_chain_complex(3, 2)).unwrap().betti, vec![1, 0, 1]);
        assert_eq!(homology(&gamma_chain_complex(2, 3)).unwrap().betti_trimmed(), vec![1, 3, 2]);
    }

    #[test]
    fn torsion_is_detected() {
        // a 2-cell attached by degree 2 to a circle: RP^2
        let c = ChainComplex {
            f: vec![1, 1, 1],
            boundaries: vec![
                SparseMatrix::zero(0, 1),
                SparseMatrix::zero(1, 1),
                SparseMatrix { rows: 1, cols: 1, columns: vec![vec![(0, 2)]] },
            ],
        };
        let h = homology(&c).unwrap();
        assert_eq!(h.betti, vec![1, 0, 0]);
        assert_eq!(h.torsion, vec![(1, vec![BigInt::from(2)])]);
        assert_eq!(h.to_json(), r#"{"f":[1,1,1],"betti":[1,0,0],"torsion":[[1,[2]]],"euler":1}"#);
    }

    #[test]
    fn nonzero_square_is_rejected() {
        let c = ChainComplex {
            f: vec![1, 1, 1],
            boundaries: vec![
                SparseMatrix::zero(0, 1),
                SparseMatrix { rows: 1, cols: 1, columns: vec![vec![(0, 1)]] },
                SparseMatrix { rows: 1, cols: 1, columns: vec![vec![(0, 1)]] },
            ],
        };
        assert_eq!(homology(&c), Err(Error::BoundaryNotNilpotent(2)));
    }
}

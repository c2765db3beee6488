//! Exact-rational little n-cubes: the subspaces G(A) and F(A), realization,
//! decomposability, shrinking and operad composition.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::{Expr, Label, Op};
use crate::milgram::downset;
use crate::pair_table::PairTable;

pub type Q = BigRational;

pub fn q(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

/// A closed interval `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: Q,
    pub hi: Q,
}

impl Interval {
    pub fn new(lo: Q, hi: Q) -> Interval {
        Interval { lo, hi }
    }

    pub fn len(&self) -> Q {
        &self.hi - &self.lo
    }

    pub fn mid(&self) -> Q {
        (&self.lo + &self.hi) / Q::from_integer(2.into())
    }
}

/// A labeled little cube `Π [u_i, v_i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LittleCube {
    pub label: Label,
    pub intervals: Vec<Interval>,
}

impl LittleCube {
    pub fn new(label: Label, intervals: Vec<(Q, Q)>) -> LittleCube {
        LittleCube { label, intervals: intervals.into_iter().map(|(a, b)| Interval::new(a, b)).collect() }
    }

    /// `self <_i other`: the `i`-th side of `self` ends where `other` may begin.
    pub fn precedes(&self, other: &LittleCube, axis: Op) -> bool {
        self.intervals[axis as usize - 1].hi <= other.intervals[axis as usize - 1].lo
    }

    pub fn barycenter(&self) -> Vec<Q> {
        self.intervals.iter().map(Interval::mid).collect()
    }

    fn separated(&self, other: &LittleCube) -> bool {
        self.intervals
            .iter()
            .zip(&other.intervals)
            .any(|(a, b)| a.hi <= b.lo || b.hi <= a.lo)
    }
}

/// `k` little cubes in the unit `n`-cube with disjoint interiors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Configuration {
    n: Op,
    boxes: Vec<LittleCube>,
}

impl Configuration {
    pub fn new(n: Op, mut boxes: Vec<LittleCube>) -> Result<Configuration> {
        let bad = |m: String| Err(Error::InvalidConfiguration(m));
        if n == 0 {
            return bad("n must be positive".into());
        }
        let mut seen = BTreeSet::new();
        for b in &boxes {
            if b.label == 0 || !seen.insert(b.label) {
                return bad(format!("label {} is zero or repeated", b.label));
            }
            if b.intervals.len() != n as usize {
                return bad(format!("box {} has {} sides, expected {n}", b.label, b.intervals.len()));
            }
            for (i, iv) in b.intervals.iter().enumerate() {
                if iv.lo < Q::zero() || iv.hi > Q::one() || iv.lo >= iv.hi {
                    return bad(format!("box {} axis {}: [{}, {}] is not inside [0,1] with u < v", b.label, i + 1, iv.lo, iv.hi));
                }
            }
        }
        for (x, a) in boxes.iter().enumerate() {
            for b in &boxes[x + 1..] {
                if !a.separated(b) {
                    return bad(format!("boxes {} and {} overlap", a.label, b.label));
                }
            }
        }
        boxes.sort_by_key(|b| b.label);
        Ok(Configuration { n, boxes })
    }

    pub fn n(&self) -> Op {
        self.n
    }

    pub fn boxes(&self) -> &[LittleCube] {
        &self.boxes
    }

    pub fn labels(&self) -> Vec<Label> {
        self.boxes.iter().map(|b| b.label).collect()
    }

    pub fn get(&self, label: Label) -> Option<&LittleCube> {
        self.boxes.binary_search_by_key(&label, |b| b.label).ok().map(|i| &self.boxes[i])
    }

    pub fn to_json(&self) -> String {
        let wire = ConfigJson {
            n: self.n,
            boxes: self
                .boxes
                .iter()
                .map(|b| BoxJson {
                    label: b.label,
                    intervals: b.intervals.iter().map(|iv| [iv.lo.to_string(), iv.hi.to_string()]).collect(),
                })
                .collect(),
        };
        serde_json::to_string(&wire).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Configuration> {
        let wire: ConfigJson = serde_json::from_str(text).map_err(|e| Error::InvalidConfiguration(e.to_string()))?;
        let boxes = wire
            .boxes
            .into_iter()
            .map(|b| {
                let ivs = b
                    .intervals
                    .iter()
                    .map(|[u, v]| Ok((parse_q(u)?, parse_q(v)?)))
                    .collect::<Result<Vec<_>>>()?;
                Ok(LittleCube::new(b.label, ivs))
            })
            .collect::<Result<Vec<_>>>()?;
        Configuration::new(wire.n, boxes)
    }

    /// Picture of a planar configuration in the unit square.
    pub fn to_svg(&self) -> Result<String> {
        if self.n != 2 {
            return Err(Error::Invalid(format!("SVG needs n = 2, got {}", self.n)));
        }
        let size = 400.0;
        let f = |x: &Q| num_traits::ToPrimitive::to_f64(x).unwrap_or(0.0) * size;
        let mut s = format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {size} {size}\" width=\"{size}\" height=\"{size}\">\n\
             <rect x=\"0\" y=\"0\" width=\"{size}\" height=\"{size}\" fill=\"none\" stroke=\"black\"/>\n"
        );
        for b in &self.boxes {
            let (x, y) = (&b.intervals[0], &b.intervals[1]);
            // y grows downward in SVG
            let (x0, x1, y0, y1) = (f(&x.lo), f(&x.hi), size - f(&y.hi), size - f(&y.lo));
            writeln!(
                s,
                "<rect x=\"{x0}\" y=\"{y0}\" width=\"{}\" height=\"{}\" fill=\"#dde\" stroke=\"black\"/>\n\
                 <text x=\"{}\" y=\"{}\" text-anchor=\"middle\" dominant-baseline=\"middle\">{}</text>",
                x1 - x0,
                y1 - y0,
                (x0 + x1) / 2.0,
                (y0 + y1) / 2.0,
                b.label
            )
            .unwrap();
        }
        s.push_str("</svg>\n");
        Ok(s)
    }
}

#[derive(Serialize, Deserialize)]
struct BoxJson {
    label: Label,
    intervals: Vec<[String; 2]>,
}

#[derive(Serialize, Deserialize)]
struct ConfigJson {
    n: Op,
    boxes: Vec<BoxJson>,
}

/// Parse `p/q` or an integer.
pub fn parse_q(s: &str) -> Result<Q> {
    let bad = || Error::InvalidConfiguration(format!("not a rational: {s:?}"));
    let (num, den) = match s.trim().split_once('/') {
        Some((a, b)) => (a.trim().parse::<BigInt>().map_err(|_| bad())?, b.trim().parse::<BigInt>().map_err(|_| bad())?),
        None => (s.trim().parse::<BigInt>().map_err(|_| bad())?, BigInt::one()),
    };
    if den.is_zero() {
        return Err(bad());
    }
    Ok(Q::new(num, den))
}

fn check_labels(c: &Configuration, a: &Expr) -> Result<()> {
    a.check_distinct()?;
    let want: Vec<Label> = a.leaf_set().into_iter().collect();
    if want != c.labels() {
        return Err(Error::LabelMismatch(c.labels(), want));
    }
    Ok(())
}

fn satisfies(c: &Configuration, t: &PairTable) -> bool {
    t.relations().into_iter().all(|(a, b, op, first)| {
        let (x, y) = if first == a { (a, b) } else { (b, a) };
        op <= c.n && c.get(x).unwrap().precedes(c.get(y).unwrap(), op)
    })
}

/// `c ∈ G(A)`: every `a #i b` in `A` is realized as `c_a <_i c_b`.
pub fn in_g(c: &Configuration, a: &Expr) -> Result<bool> {
    check_labels(c, a)?;
    if a.max_op() > c.n {
        return Ok(false);
    }
    Ok(satisfies(c, &a.pair_table(c.n)?))
}

/// `c ∈ F(A)`: `c ∈ G(X)` for some `X -> A`.
pub fn in_f(c: &Configuration, a: &Expr) -> Result<bool> {
    check_labels(c, a)?;
    if a.max_op() > c.n {
        return Err(Error::OpOutOfRange { op: a.max_op() as u32, n: c.n, pos: 0 });
    }
    let below = downset(c.n, a, false)?;
    Ok(below.elements().iter().any(|x| satisfies(c, &x.pair_table(c.n).unwrap())))
}

/// The canonical point of `G(A)`: a `#i` node cuts its box into equal slabs
/// along axis `i`, one per child.
pub fn realize(a: &Expr, n: Op) -> Result<Configuration> {
    a.check_distinct()?;
    if a.max_op() > n {
        return Err(Error::OpOutOfRange { op: a.max_op() as u32, n, pos: 0 });
    }
    fn go(e: &Expr, cell: Vec<Interval>, out: &mut Vec<LittleCube>) {
        match e {
            Expr::Zero => {}
            Expr::Gen(l) => out.push(LittleCube { label: *l, intervals: cell }),
            Expr::Node(op, ch) => {
                let axis = *op as usize - 1;
                let iv = &cell[axis];
                let step = iv.len() / Q::from_integer(BigInt::from(ch.len()));
                for (t, child) in ch.iter().enumerate() {
                    let mut sub = cell.clone();
                    let lo = &iv.lo + &step * Q::from_integer(BigInt::from(t));
                    sub[axis] = Interval::new(lo.clone(), lo + &step);
                    go(child, sub, out);
                }
            }
        }
    }
    let mut boxes = Vec::new();
    go(a, vec![Interval::new(Q::zero(), Q::one()); n as usize], &mut boxes);
    Configuration::new(n, boxes)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Hyperplane cuts along any axis, in any order.
    Plain,
    /// Cuts along axis 1, then axis 2 inside each strip, and so on.
    Milgram,
}

/// Maximal split of `boxes` into groups separated by hyperplanes
/// perpendicular to `axis`, in increasing position.
fn clumps<'a>(boxes: &[&'a LittleCube], axis: usize) -> Vec<Vec<&'a LittleCube>> {
    let mut sorted = boxes.to_vec();
    sorted.sort_by(|a, b| a.intervals[axis].lo.cmp(&b.intervals[axis].lo));
    let mut out: Vec<Vec<&LittleCube>> = Vec::new();
    let mut reach: Option<Q> = None;
    for b in sorted {
        let iv = &b.intervals[axis];
        match &reach {
            Some(r) if iv.lo < *r => {
                out.last_mut().unwrap().push(b);
                if iv.hi > *r {
                    reach = Some(iv.hi.clone());
                }
            }
            _ => {
                out.push(vec![b]);
                reach = Some(iv.hi.clone());
            }
        }
    }
    out
}

pub fn decomposable(c: &Configuration, mode: Mode) -> bool {
    // a subset of a decomposable family is decomposable, so any available
    // cut may be taken
    fn plain(boxes: &[&LittleCube], n: usize) -> bool {
        if boxes.len() <= 1 {
            return true;
        }
        for axis in 0..n {
            let groups = clumps(boxes, axis);
            if groups.len() > 1 {
                return groups.iter().all(|g| plain(g, n));
            }
        }
        false
    }
    fn milgram(boxes: &[&LittleCube], axis: usize, n: usize) -> bool {
        if axis == n {
            return boxes.len() <= 1;
        }
        clumps(boxes, axis).iter().all(|g| milgram(g, axis + 1, n))
    }
    let refs: Vec<&LittleCube> = c.boxes.iter().collect();
    match mode {
        Mode::Plain => plain(&refs, c.n as usize),
        Mode::Milgram => milgram(&refs, 0, c.n as usize),
    }
}

/// Minimum ℓ∞ distance between barycenters.
pub fn barycenter_gap(c: &Configuration) -> Option<Q> {
    let centers: Vec<Vec<Q>> = c.boxes.iter().map(LittleCube::barycenter).collect();
    let mut best: Option<Q> = None;
    for (i, a) in centers.iter().enumerate() {
        for b in &centers[i + 1..] {
            let d = a.iter().zip(b).map(|(x, y)| (x - y).abs()).max().unwrap();
            if best.as_ref().is_none_or(|m| d < *m) {
                best = Some(d);
            }
        }
    }
    best
}

/// Shrink every side to at most `m / 2k` about the barycenter, where `m` is
/// the least ℓ∞ distance between barycenters.
pub fn shrink(c: &Configuration) -> Configuration {
    let k = c.boxes.len();
    let Some(m) = barycenter_gap(c) else { return c.clone() };
    let side = m / Q::from_integer(BigInt::from(2 * k));
    let half = Q::new(1.into(), 2.into());
    let boxes = c
        .boxes
        .iter()
        .map(|b| LittleCube {
            label: b.label,
            intervals: b
                .intervals
                .iter()
                .map(|iv| {
                    if iv.len() <= side {
                        iv.clone()
                    } else {
                        let mid = iv.mid();
                        Interval::new(&mid - &side * &half, &mid + &side * &half)
                    }
                })
                .collect(),
        })
        .collect();
    Configuration::new(c.n, boxes).expect("shrinking keeps boxes disjoint")
}

/// Whether `G(A) ∩ G(B)` is nonempty, with a witness when it is.
///
/// On each axis the demanded `x <_i y` relations of both objects form a
/// digraph; the constraints are satisfiable exactly when every such digraph
/// is acyclic, and longest-path layers then give equal slabs.
pub fn g_compatible(a: &Expr, b: &Expr, n: Op) -> Result<Option<Configuration>> {
    let ta = a.pair_table(n)?;
    let tb = b.pair_table(n)?;
    if ta.labels() != tb.labels() {
        return Err(Error::LabelMismatch(ta.labels().to_vec(), tb.labels().to_vec()));
    }
    let labels = ta.labels().to_vec();
    let idx: BTreeMap<Label, usize> = labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
    let k = labels.len();
    let mut layers = vec![vec![0usize; k]; n as usize];
    let mut heights = vec![1usize; n as usize];
    for axis in 1..=n {
        let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
        for t in [&ta, &tb] {
            for (x, y, op, first) in t.relations() {
                if op == axis {
                    let (s, d) = if first == x { (x, y) } else { (y, x) };
                    edges.insert((idx[&s], idx[&d]));
                }
            }
        }
        // Kahn's algorithm with longest-path layers
        let mut indeg = vec![0; k];
        for &(_, d) in &edges {
            indeg[d] += 1;
        }
        let mut queue: Vec<usize> = (0..k).filter(|&v| indeg[v] == 0).collect();
        let mut layer = vec![0usize; k];
        let mut done = 0;
        while let Some(v) = queue.pop() {
            done += 1;
            for &(s, d) in edges.range((v, 0)..(v + 1, 0)) {
                debug_assert_eq!(s, v);
                layer[d] = layer[d].max(layer[v] + 1);
                indeg[d] -= 1;
                if indeg[d] == 0 {
                    queue.push(d);
                }
            }
        }
        if done < k {
            return Ok(None);
        }
        heights[axis as usize - 1] = layer.iter().max().map_or(1, |m| m + 1);
        layers[axis as usize - 1] = layer;
    }
    let boxes = labels
        .iter()
        .enumerate()
        .map(|(v, &l)| {
            let ivs = (0..n as usize)
                .map(|ax| {
                    let h = heights[ax] as i64;
                    let t = layers[ax][v] as i64;
                    (q(t, h), q(t + 1, h))
                })
                .collect();
            LittleCube::new(l, ivs)
        })
        .collect();
    Configuration::new(n, boxes).map(Some)
}

/// Substitute `inners[j-1]` into box `j` of `outer` by the affine map of
/// the box; labels are renumbered blockwise.
pub fn cubes_compose(outer: &Configuration, inners: &[Configuration]) -> Result<Configuration> {
    let k = outer.boxes.len();
    if outer.labels() != (1..=k as Label).collect::<Vec<_>>() {
        return Err(Error::InvalidConfiguration(format!("outer labels {:?} are not 1..{k}", outer.labels())));
    }
    if inners.len() != k {
        return Err(Error::Arity { expected: k, got: inners.len() });
    }
    let mut boxes = Vec::new();
    let mut offset: Label = 0;
    for (ob, inner) in outer.boxes.iter().zip(inners) {
        if inner.n != outer.n {
            return Err(Error::InvalidConfiguration("inner configuration has a different n".into()));
        }
        let m = inner.boxes.len();
        if inner.labels() != (1..=m as Label).collect::<Vec<_>>() {
            return Err(Error::InvalidConfiguration(format!("inner labels {:?} are not 1..{m}", inner.labels())));
        }
        for ib in &inner.boxes {
            let intervals = ob
                .intervals
                .iter()
                .zip(&ib.intervals)
                .map(|(o, i)| {
                    let len = o.len();
                    Interval::new(&o.lo + &len * &i.lo, &o.lo + &len * &i.hi)
                })
                .collect();
            boxes.push(LittleCube { label: ib.label + offset, intervals });
        }
        offset += m as Label;
    }
    Configuration::new(outer.n, boxes)
}

/// Relabel: box `a` becomes box `sigma[a-1]`.
pub fn permute(c: &Configuration, sigma: &[Label]) -> Result<Configuration> {
    let map = crate::expr::perm_map(sigma)?;
    let boxes = c
        .boxes
        .iter()
        .map(|b| {
            let label = *map.get(&b.label).ok_or(Error::MissingLabel(b.label))?;
            Ok(LittleCube { label, intervals: b.intervals.clone() })
        })
        .collect::<Result<Vec<_>>>()?;
    Configuration::new(c.n, boxes)
}

/// A random configuration of `k` boxes with endpoints on the grid of
/// `1/den`, found by rejection; `None` if no box fits after many tries.
pub fn random_configuration(n: Op, k: usize, den: i64, rng: &mut impl Rng) -> Option<Configuration> {
    let mut boxes: Vec<LittleCube> = Vec::with_capacity(k);
    for label in 1..=k as Label {
        let mut placed = false;
        for _ in 0..10_000 {
            let ivs: Vec<(Q, Q)> = (0..n)
                .map(|_| {
                    let len = rng.gen_range(1..=den / 2);
                    let lo = rng.gen_range(0..=den - len);
                    (q(lo, den), q(lo + len, den))
                })
                .collect();
            let cand = LittleCube::new(label, ivs);
            if boxes.iter().all(|b| b.separated(&cand)) {
                boxes.push(cand);
                placed = true;
                break;
            }
        }
        if !placed {
            return None;
        }
    }
    Configuration::new(n, boxes).ok()
}

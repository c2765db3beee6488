//! Objects of the free n-fold monoidal category on labeled generators.
//!
//! An [`Expr`] is kept in canonical form at all times: products are
//! flattened (no `#i` node has a `#i` child) and the unit `0` never appears
//! inside a product. Constructing through [`Expr::product`] maintains both.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};

/// Generator label. Labels are positive; `0` is reserved for the unit.
pub type Label = u32;

/// Index of a monoidal product, `1..=n`.
pub type Op = u8;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Expr {
    /// The strict unit object.
    Zero,
    Gen(Label),
    /// A `#op` product of at least two non-unit factors, none of which is a
    /// `#op` product itself.
    Node(Op, Vec<Expr>),
}

impl Expr {
    pub fn gen(label: Label) -> Expr {
        Expr::Gen(label)
    }

    /// The `#op` product of `parts`, flattened and with units absorbed.
    pub fn product<I>(op: Op, parts: I) -> Expr
    where
        I: IntoIterator<Item = Expr>,
    {
        let mut children = Vec::new();
        for part in parts {
            match part {
                Expr::Zero => {}
                Expr::Node(o, inner) if o == op => children.extend(inner),
                other => children.push(other),
            }
        }
        match children.len() {
            0 => Expr::Zero,
            1 => children.pop().unwrap(),
            _ => Expr::Node(op, children),
        }
    }

    /// `1 #op 2 #op ... #op k`.
    pub fn word(op: Op, labels: impl IntoIterator<Item = Label>) -> Expr {
        Expr::product(op, labels.into_iter().map(Expr::Gen))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Expr::Zero)
    }

    pub fn top_op(&self) -> Option<Op> {
        match self {
            Expr::Node(op, _) => Some(*op),
            _ => None,
        }
    }

    pub fn children(&self) -> &[Expr] {
        match self {
            Expr::Node(_, ch) => ch,
            _ => &[],
        }
    }

    /// Largest operation index used, or 0 for leaves.
    pub fn max_op(&self) -> Op {
        match self {
            Expr::Node(op, ch) => ch.iter().map(Expr::max_op).fold(*op, Op::max),
            _ => 0,
        }
    }

    /// Generator labels in left-to-right order.
    pub fn leaves(&self) -> Vec<Label> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<Label>) {
        match self {
            Expr::Zero => {}
            Expr::Gen(l) => out.push(*l),
            Expr::Node(_, ch) => ch.iter().for_each(|c| c.collect_leaves(out)),
        }
    }

    pub fn leaf_set(&self) -> BTreeSet<Label> {
        self.leaves().into_iter().collect()
    }

    pub fn size(&self) -> usize {
        match self {
            Expr::Zero => 0,
            Expr::Gen(_) => 1,
            Expr::Node(_, ch) => ch.iter().map(Expr::size).sum(),
        }
    }

    /// Fails with [`Error::DuplicateLabel`] unless every generator occurs once.
    pub fn check_distinct(&self) -> Result<()> {
        let mut seen = BTreeSet::new();
        for l in self.leaves() {
            if !seen.insert(l) {
                return Err(Error::DuplicateLabel(l));
            }
        }
        Ok(())
    }

    /// Replace every generator for which `keep` is false by the unit and
    /// re-canonicalize. Labels are not renumbered.
    pub fn restrict_by(&self, keep: &impl Fn(Label) -> bool) -> Expr {
        match self {
            Expr::Zero => Expr::Zero,
            Expr::Gen(l) => {
                if keep(*l) {
                    Expr::Gen(*l)
                } else {
                    Expr::Zero
                }
            }
            Expr::Node(op, ch) => Expr::product(*op, ch.iter().map(|c| c.restrict_by(keep))),
        }
    }

    pub fn restrict(&self, keep: &BTreeSet<Label>) -> Expr {
        self.restrict_by(&|l| keep.contains(&l))
    }

    /// `A - |B|` on label sets.
    pub fn difference(&self, drop: &BTreeSet<Label>) -> Expr {
        self.restrict_by(&|l| !drop.contains(&l))
    }

    /// Rename labels without any injectivity check. Structure is unchanged,
    /// so canonical form is preserved.
    pub fn map_labels(&self, f: &impl Fn(Label) -> Label) -> Expr {
        match self {
            Expr::Zero => Expr::Zero,
            Expr::Gen(l) => Expr::Gen(f(*l)),
            Expr::Node(op, ch) => Expr::Node(*op, ch.iter().map(|c| c.map_labels(f)).collect()),
        }
    }

    /// Rename leaves through `map`; labels absent from the map are kept.
    pub fn relabel(&self, map: &BTreeMap<Label, Label>) -> Result<Expr> {
        let mut image = BTreeSet::new();
        for l in self.leaves() {
            let t = map.get(&l).copied().unwrap_or(l);
            if t == 0 {
                return Err(Error::Invalid("labels must be positive".into()));
            }
            if !image.insert(t) {
                return Err(Error::NotInjective(t));
            }
        }
        Ok(self.map_labels(&|l| map.get(&l).copied().unwrap_or(l)))
    }

    /// Act by a permutation in one-line notation: label `a` becomes `sigma[a-1]`.
    pub fn permute(&self, sigma: &[Label]) -> Result<Expr> {
        let map = perm_map(sigma)?;
        self.relabel(&map)
    }

    /// Operations strictly increase along every root-to-leaf path
    /// (`#1` outermost, `#n` innermost).
    pub fn is_level_ordered(&self) -> bool {
        fn go(e: &Expr, above: Op) -> bool {
            match e {
                Expr::Node(op, ch) => *op > above && ch.iter().all(|c| go(c, *op)),
                _ => true,
            }
        }
        go(self, 0)
    }

    /// Subterm reached by following child indices.
    pub fn at_path(&self, path: &[usize]) -> Option<&Expr> {
        let mut cur = self;
        for &i in path {
            cur = cur.children().get(i)?;
        }
        Some(cur)
    }

    /// Replace the subterm at `path` and re-canonicalize on the way up.
    pub fn replace_at(&self, path: &[usize], with: Expr) -> Expr {
        match path.split_first() {
            None => with,
            Some((&i, rest)) => match self {
                Expr::Node(op, ch) => {
                    let mut parts = ch.clone();
                    parts[i] = parts[i].replace_at(rest, with);
                    Expr::product(*op, parts)
                }
                _ => panic!("path leads through a leaf"),
            },
        }
    }

    pub fn render(&self) -> String {
        self.to_string()
    }

    pub fn parse(text: &str, n: Op) -> Result<Expr> {
        Parser::new(text, n).parse_all()
    }

    /// Parse and require every generator to occur exactly once.
    pub fn parse_object(text: &str, n: Op) -> Result<Expr> {
        let e = Expr::parse(text, n)?;
        e.check_distinct()?;
        Ok(e)
    }
}

/// One-line permutation to a label map, validating that it is a permutation
/// of `1..=k`.
pub fn perm_map(sigma: &[Label]) -> Result<BTreeMap<Label, Label>> {
    let k = sigma.len() as Label;
    let mut seen = vec![false; sigma.len() + 1];
    for &s in sigma {
        if s == 0 || s > k || seen[s as usize] {
            return Err(Error::Invalid(format!("{sigma:?} is not a permutation of 1..{k}")));
        }
        seen[s as usize] = true;
    }
    Ok(sigma.iter().enumerate().map(|(i, &s)| (i as Label + 1, s)).collect())
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Zero => write!(f, "0"),
            Expr::Gen(l) => write!(f, "{l}"),
            Expr::Node(op, ch) => {
                for (i, c) in ch.iter().enumerate() {
                    if i > 0 {
                        write!(f, " #{op} ")?;
                    }
                    match c {
                        Expr::Node(..) => write!(f, "({c})")?,
                        _ => write!(f, "{c}")?,
                    }
                }
                Ok(())
            }
        }
    }
}

impl std::str::FromStr for Expr {
    type Err = Error;

    /// Parses with the largest admissible bound; use [`Expr::parse`] to
    /// enforce a specific `n`.
    fn from_str(s: &str) -> Result<Expr> {
        Expr::parse(s, Op::MAX)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    n: Op,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, n: Op) -> Self {
        Parser { src: text.as_bytes(), pos: 0, n }
    }

    fn err<T>(&self, pos: usize, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn parse_all(mut self) -> Result<Expr> {
        let e = self.expr()?;
        match self.peek() {
            None => Ok(e),
            Some(c) => self.err(self.pos, format!("unexpected '{}'", c as char)),
        }
    }

    fn int(&mut self) -> Result<(u64, usize)> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err(start, "expected an integer");
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        match digits.parse::<u64>() {
            Ok(v) if v <= Label::MAX as u64 => Ok((v, start)),
            _ => self.err(start, "integer too large"),
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut parts = vec![self.atom()?];
        let mut op: Option<Op> = None;
        while self.peek() == Some(b'#') {
            self.pos += 1;
            let (v, at) = self.int()?;
            if v == 0 || v > self.n as u64 {
                return Err(Error::OpOutOfRange { op: v.min(u32::MAX as u64) as u32, n: self.n, pos: at });
            }
            let v = v as Op;
            match op {
                Some(prev) if prev != v => {
                    return self.err(at, format!("#{v} next to #{prev} at one level; add parentheses"));
                }
                _ => op = Some(v),
            }
            parts.push(self.atom()?);
        }
        Ok(match op {
            None => parts.pop().unwrap(),
            Some(op) => Expr::product(op, parts),
        })
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.err(self.pos, "expected ')'");
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let (v, _) = self.int()?;
                Ok(if v == 0 { Expr::Zero } else { Expr::Gen(v as Label) })
            }
            Some(c) => self.err(self.pos, format!("unexpected '{}'", c as char)),
            None => self.err(self.pos, "unexpected end of input"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Expr {
        Expr::parse(s, 9).unwrap()
    }

    #[test]
    fn parses_the_morphism_example() {
        let e = Expr::parse("(2 #2 3) #1 1", 2).unwrap();
        assert_eq!(
            e,
            Expr::Node(1, vec![Expr::Node(2, vec![Expr::Gen(2), Expr::Gen(3)]), Expr::Gen(1)])
        );
        assert_eq!(e.render(), "(2 #2 3) #1 1");
    }

    #[test]
    fn unit_and_associativity() {
        assert_eq!(Expr::parse("0 #1 5", 3).unwrap(), Expr::Gen(5));
        assert_eq!(p("1 #1 2 #1 3"), Expr::Node(1, vec![Expr::Gen(1), Expr::Gen(2), Expr::Gen(3)]));
        assert_eq!(p("(1 #1 2) #1 3"), p("1 #1 (2 #1 3)"));
        assert_eq!(p("0"), Expr::Zero);
        assert_eq!(p("(0 #2 0) #1 0"), Expr::Zero);
        assert_eq!(p("((7))"), Expr::Gen(7));
    }

    #[test]
    fn product_canonicalizes() {
        let a = Expr::product(1, [Expr::gen(1), Expr::gen(2)]);
        assert_eq!(a.render(), "1 #1 2");
        assert_eq!(Expr::product(1, [a.clone(), Expr::gen(3)]), p("1 #1 2 #1 3"));
        assert_eq!(Expr::product(2, [Expr::Zero, Expr::gen(4)]), Expr::gen(4));
        assert_eq!(Expr::gen(7).render(), "7");
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(Expr::parse("1 #3 2", 2), Err(Error::OpOutOfRange { op: 3, n: 2, pos: 3 })));
        assert!(matches!(Expr::parse("1 #0 2", 2), Err(Error::OpOutOfRange { .. })));
        assert!(matches!(Expr::parse("1 #1 2 #2 3", 2), Err(Error::Syntax { .. })));
        assert!(matches!(Expr::parse("(1 #1 2", 2), Err(Error::Syntax { .. })));
        assert!(matches!(Expr::parse("1 2", 2), Err(Error::Syntax { pos: 2, .. })));
        assert!(matches!(Expr::parse("", 2), Err(Error::Syntax { .. })));
        assert!(matches!(Expr::parse_object("1 #1 1", 2), Err(Error::DuplicateLabel(1))));
    }

    #[test]
    fn restriction_examples() {
        let a = p("(2 #2 3) #1 1");
        assert_eq!(a.restrict(&[1, 2].into()).render(), "2 #1 1");
        assert_eq!(a.restrict(&[2, 3].into()).render(), "2 #2 3");
        assert_eq!(a.restrict(&a.leaf_set()), a);
        // collapsing a middle layer merges same-op grandchildren
        let b = p("1 #1 (2 #2 3) #1 4");
        assert_eq!(b.restrict(&[1, 2, 4].into()), p("1 #1 2 #1 4"));
    }

    #[test]
    fn level_ordering() {
        assert!(p("(1 #2 2) #1 3").is_level_ordered());
        assert!(!p("(1 #1 2) #2 3").is_level_ordered());
        assert!(p("1 #3 2").is_level_ordered());
    }

    #[test]
    fn relabeling() {
        let e = p("1 #1 2");
        assert_eq!(e.permute(&[2, 1]).unwrap().render(), "2 #1 1");
        assert_eq!(e.permute(&[1, 2]).unwrap(), e);
        let m = BTreeMap::from([(1, 5), (2, 5)]);
        assert_eq!(e.relabel(&m), Err(Error::NotInjective(5)));
    }

    #[test]
    fn replace_recanonicalizes() {
        let e = p("1 #1 (2 #2 3) #1 4");
        let r = e.replace_at(&[1], p("2 #1 3"));
        assert_eq!(r, p("1 #1 2 #1 3 #1 4"));
    }
}

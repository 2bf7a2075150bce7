use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use super::GeneratorSpec;
use crate::numtheory::{divisors, mobius, witt};

const NO_CHILD: u32 = u32::MAX;

#[derive(Debug, Clone, Copy)]
struct Node {
    // leaves: left == NO_CHILD and right is the generator index
    left: u32,
    right: u32,
}

/// Basic products of weight `1..=max_weight`, stored in Hall order.
///
/// Weight-1 elements are the generators `x_1 < ... < x_n`. A bracket
/// `[u, v]` is basic when `u` and `v` are basic, `u < v`, and either `v`
/// is a generator or `v = [v', v'']` with `v' <= u`. Elements are ordered
/// by weight, then lexicographically by `(left, right)`.
#[derive(Debug, Clone)]
pub struct HallBasis {
    spec: GeneratorSpec,
    nodes: Vec<Node>,
    weights: Vec<u32>,
    multidegrees: Vec<u32>,
    // offsets[k]..offsets[k + 1] are the weight-k elements; offsets[0] = 0
    offsets: Vec<usize>,
}

/// Enumerate basic products up to `max_weight`.
pub fn hall_basis(spec: &GeneratorSpec, max_weight: usize) -> HallBasis {
    assert!(max_weight >= 1, "max_weight must be positive");
    let n = spec.len();
    let mut basis = HallBasis {
        spec: spec.clone(),
        nodes: Vec::new(),
        weights: Vec::new(),
        multidegrees: Vec::new(),
        offsets: vec![0, 0],
    };
    for g in 0..n {
        let mut md = vec![0u32; n];
        md[g] = 1;
        basis.push(Node { left: NO_CHILD, right: g as u32 }, 1, &md);
    }
    basis.offsets.push(basis.nodes.len());

    let mut md = vec![0u32; n];
    for k in 2..=max_weight {
        for wu in 1..=k / 2 {
            let wv = k - wu;
            let us = basis.range(wu);
            let vs = basis.range(wv);
            for u in us {
                let v_start = if wu == wv { u + 1 } else { vs.start };
                for v in v_start..vs.end {
                    let vn = basis.nodes[v];
                    if vn.left != NO_CHILD && vn.left as usize > u {
                        continue;
                    }
                    for (g, slot) in md.iter_mut().enumerate() {
                        *slot = basis.multidegrees[u * n + g] + basis.multidegrees[v * n + g];
                    }
                    basis.push(
                        Node {
                            left: u as u32,
                            right: v as u32,
                        },
                        k as u32,
                        &md,
                    );
                }
            }
        }
        basis.offsets.push(basis.nodes.len());
        let count = basis.range(k).len() as u64;
        debug_assert_eq!(Some(count), witt(n as u64, k as u64).to_u64());
    }
    basis
}

impl HallBasis {
    fn push(&mut self, node: Node, weight: u32, multidegree: &[u32]) {
        self.nodes.push(node);
        self.weights.push(weight);
        self.multidegrees.extend_from_slice(multidegree);
    }

    fn range(&self, k: usize) -> std::ops::Range<usize> {
        self.offsets[k]..self.offsets[k + 1]
    }

    pub fn spec(&self) -> &GeneratorSpec {
        &self.spec
    }

    pub fn max_weight(&self) -> usize {
        self.offsets.len() - 2
    }

    /// Total number of basic products of all weights.
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `|𝓛_k|`.
    pub fn count(&self, k: usize) -> usize {
        if k == 0 || k > self.max_weight() {
            0
        } else {
            self.range(k).len()
        }
    }

    /// The weight-k basic products `𝓛_k`, in Hall order.
    pub fn weight(&self, k: usize) -> impl ExactSizeIterator<Item = BasicProduct<'_>> + '_ {
        let range = if k == 0 || k > self.max_weight() {
            0..0
        } else {
            self.range(k)
        };
        range.map(move |index| BasicProduct { basis: self, index })
    }

    pub fn iter(&self) -> impl Iterator<Item = BasicProduct<'_>> + '_ {
        (0..self.nodes.len()).map(move |index| BasicProduct { basis: self, index })
    }

    pub fn get(&self, index: usize) -> Option<BasicProduct<'_>> {
        (index < self.nodes.len()).then_some(BasicProduct { basis: self, index })
    }

    /// Position of `tree` in the basis, if it is a basic product of
    /// weight at most `max_weight`.
    pub fn index_of(&self, tree: &BracketTree) -> Option<usize> {
        match tree {
            BracketTree::Leaf(g) => (*g < self.spec.len()).then_some(*g),
            BracketTree::Bracket(l, r) => {
                let w = tree.weight();
                if w > self.max_weight() {
                    return None;
                }
                let key = (self.index_of(l)? as u32, self.index_of(r)? as u32);
                let range = self.range(w);
                let slice = &self.nodes[range.clone()];
                slice
                    .binary_search_by(|n| (n.left, n.right).cmp(&key))
                    .ok()
                    .map(|i| range.start + i)
            }
        }
    }

    pub fn contains(&self, tree: &BracketTree) -> bool {
        self.index_of(tree).is_some()
    }
}

/// A basic product, borrowed from its [`HallBasis`].
#[derive(Clone, Copy)]
pub struct BasicProduct<'a> {
    basis: &'a HallBasis,
    index: usize,
}

impl<'a> BasicProduct<'a> {
    pub fn index(&self) -> usize {
        self.index
    }

    pub fn weight(&self) -> usize {
        self.basis.weights[self.index] as usize
    }

    /// Occurrence counts `(k_1, ..., k_n)`.
    pub fn multidegree(&self) -> &'a [u32] {
        let n = self.basis.spec.len();
        &self.basis.multidegrees[self.index * n..(self.index + 1) * n]
    }

    /// `Σ k_i q_i`.
    pub fn degree(&self) -> u64 {
        self.basis.spec.degree_of(self.multidegree())
    }

    /// Generator index (0-based) when this is a weight-1 element.
    pub fn generator(&self) -> Option<usize> {
        let node = self.basis.nodes[self.index];
        (node.left == NO_CHILD).then_some(node.right as usize)
    }

    pub fn children(&self) -> Option<(BasicProduct<'a>, BasicProduct<'a>)> {
        let node = self.basis.nodes[self.index];
        (node.left != NO_CHILD).then_some((
            BasicProduct {
                basis: self.basis,
                index: node.left as usize,
            },
            BasicProduct {
                basis: self.basis,
                index: node.right as usize,
            },
        ))
    }

    pub fn tree(&self) -> BracketTree {
        match self.children() {
            None => BracketTree::Leaf(self.generator().unwrap()),
            Some((l, r)) => BracketTree::Bracket(Box::new(l.tree()), Box::new(r.tree())),
        }
    }
}

impl fmt::Display for BasicProduct<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.children() {
            None => write!(f, "x{}", self.generator().unwrap() + 1),
            Some((l, r)) => write!(f, "[{l},{r}]"),
        }
    }
}

impl fmt::Debug for BasicProduct<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BasicProduct({self})")
    }
}

/// An owned bracket expression over generators `x_1, x_2, ...`
/// (stored 0-based).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BracketTree {
    Leaf(usize),
    Bracket(Box<BracketTree>, Box<BracketTree>),
}

impl BracketTree {
    pub fn bracket(left: BracketTree, right: BracketTree) -> Self {
        BracketTree::Bracket(Box::new(left), Box::new(right))
    }

    pub fn weight(&self) -> usize {
        match self {
            BracketTree::Leaf(_) => 1,
            BracketTree::Bracket(l, r) => l.weight() + r.weight(),
        }
    }

    pub fn multidegree(&self, n: usize) -> Vec<u32> {
        let mut md = vec![0; n];
        self.accumulate(&mut md);
        md
    }

    fn accumulate(&self, md: &mut [u32]) {
        match self {
            BracketTree::Leaf(g) => md[*g] += 1,
            BracketTree::Bracket(l, r) => {
                l.accumulate(md);
                r.accumulate(md);
            }
        }
    }

    /// Hall order: weight first, then generator index for leaves and
    /// `(left, right)` lexicographically for brackets.
    pub fn hall_cmp(&self, other: &Self) -> Ordering {
        self.weight()
            .cmp(&other.weight())
            .then_with(|| match (self, other) {
                (BracketTree::Leaf(a), BracketTree::Leaf(b)) => a.cmp(b),
                (BracketTree::Bracket(a1, a2), BracketTree::Bracket(b1, b2)) => {
                    a1.hall_cmp(b1).then_with(|| a2.hall_cmp(b2))
                }
                // equal weight forces equal shape at the root
                _ => unreachable!(),
            })
    }

    /// Membership in the Hall set on `n` generators.
    pub fn is_basic(&self, n: usize) -> bool {
        match self {
            BracketTree::Leaf(g) => *g < n,
            BracketTree::Bracket(u, v) => {
                if !(u.is_basic(n) && v.is_basic(n)) {
                    return false;
                }
                if u.hall_cmp(v) != Ordering::Less {
                    return false;
                }
                match v.as_ref() {
                    BracketTree::Leaf(_) => true,
                    BracketTree::Bracket(v1, _) => v1.hall_cmp(u) != Ordering::Greater,
                }
            }
        }
    }
}

impl fmt::Display for BracketTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BracketTree::Leaf(g) => write!(f, "x{}", g + 1),
            BracketTree::Bracket(l, r) => write!(f, "[{l},{r}]"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed bracket at byte {position}: {reason}")]
pub struct ParseBracketError {
    pub position: usize,
    pub reason: &'static str,
}

impl FromStr for BracketTree {
    type Err = ParseBracketError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bytes = s.as_bytes();
        let mut pos = 0;
        let tree = parse_bracket(bytes, &mut pos)?;
        if pos != bytes.len() {
            return Err(ParseBracketError {
                position: pos,
                reason: "trailing input",
            });
        }
        Ok(tree)
    }
}

fn parse_bracket(b: &[u8], pos: &mut usize) -> Result<BracketTree, ParseBracketError> {
    let fail = |position, reason| Err(ParseBracketError { position, reason });
    match b.get(*pos) {
        Some(b'x') => {
            *pos += 1;
            let start = *pos;
            while b.get(*pos).is_some_and(u8::is_ascii_digit) {
                *pos += 1;
            }
            let digits = std::str::from_utf8(&b[start..*pos]).unwrap();
            match digits.parse::<usize>() {
                Ok(i) if i >= 1 => Ok(BracketTree::Leaf(i - 1)),
                _ => fail(start, "expected a generator index >= 1"),
            }
        }
        Some(b'[') => {
            *pos += 1;
            let left = parse_bracket(b, pos)?;
            if b.get(*pos) != Some(&b',') {
                return fail(*pos, "expected ','");
            }
            *pos += 1;
            let right = parse_bracket(b, pos)?;
            if b.get(*pos) != Some(&b']') {
                return fail(*pos, "expected ']'");
            }
            *pos += 1;
            Ok(BracketTree::bracket(left, right))
        }
        _ => fail(*pos, "expected 'x' or '['"),
    }
}

/// Count of basic products of `elements` by total degree `Σ k_i q_i`.
pub fn multidegree_census<'a>(
    elements: impl IntoIterator<Item = BasicProduct<'a>>,
    spec: &GeneratorSpec,
) -> BTreeMap<u64, u64> {
    let mut census = BTreeMap::new();
    for b in elements {
        let k = b.weight() as u64;
        let degree = spec.degree_of(b.multidegree());
        assert!(
            k * spec.min_degree() <= degree && degree <= k * spec.max_degree(),
            "degree {degree} of {b} outside [k q_min, k q_max]"
        );
        *census.entry(degree).or_insert(0) += 1;
    }
    census
}

/// Dimension of the multidegree-`(k_1, ..., k_n)` part of the free Lie
/// algebra: `(1/k) Σ_{d | gcd k_i} μ(d) (k/d)! / Π (k_i/d)!`.
pub fn multidegree_dimension(multidegree: &[u32]) -> BigUint {
    let k: u64 = multidegree.iter().map(|&x| x as u64).sum();
    if k == 0 {
        return BigUint::zero();
    }
    let g = multidegree
        .iter()
        .fold(0u64, |acc, &x| acc.gcd(&(x as u64)));
    let mut plus = BigUint::zero();
    let mut minus = BigUint::zero();
    for d in divisors(g) {
        let mu = mobius(d).unwrap();
        if mu == 0 {
            continue;
        }
        let parts: Vec<u64> = multidegree.iter().map(|&x| x as u64 / d).collect();
        let term = multinomial(&parts);
        if mu > 0 {
            plus += term;
        } else {
            minus += term;
        }
    }
    let total = plus - minus;
    let (q, r) = total.div_rem(&BigUint::from(k));
    assert!(r.is_zero(), "multidegree necklace sum not divisible by k");
    q
}

fn multinomial(parts: &[u64]) -> BigUint {
    // product of binomials C(k_1 + ... + k_i, k_i)
    let mut acc = BigUint::from(1u32);
    let mut total = 0u64;
    for &part in parts {
        for i in 1..=part {
            total += 1;
            acc *= total;
            acc /= i;
        }
    }
    acc
}

/// Degree census of `𝓛_k` computed from multidegree dimensions, without
/// enumerating brackets.
pub fn multidegree_census_by_formula(spec: &GeneratorSpec, k: usize) -> BTreeMap<u64, BigUint> {
    let n = spec.len();
    let mut census: BTreeMap<u64, BigUint> = BTreeMap::new();
    let mut md = vec![0u32; n];
    compositions(k as u32, 0, &mut md, &mut |md| {
        let dim = multidegree_dimension(md);
        if !dim.is_zero() {
            *census.entry(spec.degree_of(md)).or_default() += dim;
        }
    });
    census
}

fn compositions(remaining: u32, slot: usize, md: &mut [u32], f: &mut impl FnMut(&[u32])) {
    if slot + 1 == md.len() {
        md[slot] = remaining;
        f(md);
        return;
    }
    for x in 0..=remaining {
        md[slot] = x;
        compositions(remaining - x, slot + 1, md, f);
    }
}

/// Total dimension of the weight-k part: `W_n(k)`, cross-checked against
/// the summed multidegree dimensions.
pub fn graded_witt_total(spec: &GeneratorSpec, k: usize) -> BigUint {
    let total = witt(spec.len() as u64, k as u64);
    let summed: BigUint = multidegree_census_by_formula(spec, k).into_values().sum();
    assert_eq!(total, summed, "multidegree dimensions do not sum to W_n(k)");
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(basis: &HallBasis, k: usize) -> Vec<String> {
        basis.weight(k).map(|b| b.to_string()).collect()
    }

    #[test]
    fn small_bases() {
        let b = hall_basis(&GeneratorSpec::ungraded(2), 3);
        assert_eq!(names(&b, 1), ["x1", "x2"]);
        assert_eq!(names(&b, 2), ["[x1,x2]"]);
        assert_eq!(names(&b, 3), ["[x1,[x1,x2]]", "[x2,[x1,x2]]"]);
        let b3 = hall_basis(&GeneratorSpec::ungraded(3), 2);
        assert_eq!(names(&b3, 2), ["[x1,x2]", "[x1,x3]", "[x2,x3]"]);
    }

    #[test]
    fn counts_match_witt() {
        let b = hall_basis(&GeneratorSpec::ungraded(2), 10);
        let expected = [2, 1, 2, 3, 6, 9, 18, 30, 56, 99];
        for (k, &w) in expected.iter().enumerate() {
            assert_eq!(b.count(k + 1), w);
        }
        assert_eq!(b.count(11), 0);
    }

    #[test]
    fn membership_is_consistent_with_enumeration() {
        let spec = GeneratorSpec::ungraded(3);
        let b = hall_basis(&spec, 6);
        for elem in b.iter() {
            let t = elem.tree();
            assert!(t.is_basic(3), "{t}");
            assert_eq!(b.index_of(&t), Some(elem.index()));
            assert_eq!(t.to_string().parse::<BracketTree>().unwrap(), t);
            assert_eq!(t.multidegree(3), elem.multidegree());
        }
        // [x2,x1] violates u < v; [[x1,x2],x3] has the bracket on the wrong side
        for s in ["[x2,x1]", "[x1,x1]", "[[x1,x2],x3]", "[x1,[x2,x3]]"] {
            let t: BracketTree = s.parse().unwrap();
            assert!(!t.is_basic(3), "{s}");
            assert!(!b.contains(&t));
        }
        // [x2,[x1,x3]]: v' = x1 <= x2, so basic
        assert!("[x2,[x1,x3]]".parse::<BracketTree>().unwrap().is_basic(3));
    }

    #[test]
    fn hall_order_is_sorted() {
        let b = hall_basis(&GeneratorSpec::ungraded(2), 8);
        let trees: Vec<BracketTree> = b.iter().map(|e| e.tree()).collect();
        for w in trees.windows(2) {
            assert_eq!(w[0].hall_cmp(&w[1]), Ordering::Less);
        }
    }

    #[test]
    fn parse_errors() {
        for s in ["", "x0", "[x1 x2]", "[x1,x2", "x1]", "y1"] {
            assert!(s.parse::<BracketTree>().is_err(), "{s:?}");
        }
    }

    #[test]
    fn census_examples() {
        let spec = GeneratorSpec::new(vec![1, 1]).unwrap();
        let b = hall_basis(&spec, 8);
        assert_eq!(multidegree_census(b.weight(2), &spec), BTreeMap::from([(2, 1)]));
        assert_eq!(multidegree_census(b.weight(8), &spec), BTreeMap::from([(8, 30)]));

        let spec = GeneratorSpec::new(vec![1, 2]).unwrap();
        let b = hall_basis(&spec, 3);
        assert_eq!(
            multidegree_census(b.weight(3), &spec),
            BTreeMap::from([(4, 1), (5, 1)])
        );
    }

    #[test]
    fn census_formula_agrees_with_enumeration() {
        for degrees in [vec![1, 2], vec![2, 4], vec![1, 1, 3], vec![3, 5], vec![2, 2, 2, 1]] {
            let spec = GeneratorSpec::new(degrees).unwrap();
            let b = hall_basis(&spec, 7);
            for k in 1..=7 {
                let enumerated = multidegree_census(b.weight(k), &spec);
                let formula: BTreeMap<u64, u64> = multidegree_census_by_formula(&spec, k)
                    .into_iter()
                    .map(|(d, c)| (d, c.to_u64().unwrap()))
                    .collect();
                assert_eq!(enumerated, formula, "{:?} k={k}", spec.degrees());
            }
        }
    }

    #[test]
    fn graded_witt_examples() {
        let two = GeneratorSpec::new(vec![2, 4]).unwrap();
        assert_eq!(graded_witt_total(&two, 4), BigUint::from(3u32));
        assert_eq!(graded_witt_total(&two, 5), BigUint::from(6u32));
        let one = GeneratorSpec::new(vec![3]).unwrap();
        assert_eq!(graded_witt_total(&one, 2), BigUint::zero());
        assert_eq!(multidegree_dimension(&[1, 1]), BigUint::from(1u32));
        assert_eq!(multidegree_dimension(&[2, 2]), BigUint::from(1u32));
        assert_eq!(multidegree_dimension(&[3, 3]), BigUint::from(3u32));
    }
}

//! Exact finite combinatorics over individual identifiers.
//!
//! Equivalence relations are stored as canonical [`Partition`]s: every block
//! is sorted and blocks are ordered by their least element, so structural
//! equality is relation equality. Enumerations are bounded by [`Bounds`];
//! exceeding a bound is an error, never a silent truncation.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Opaque identifier of an individual.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Ident(String);

impl Ident {
    pub fn new(name: impl Into<String>) -> Self {
        Ident(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Ident {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Ident {
    fn from(s: &str) -> Self {
        Ident(s.to_owned())
    }
}

impl From<String> for Ident {
    fn from(s: String) -> Self {
        Ident(s)
    }
}

/// Collects identifiers into a sorted, deduplicated vector.
pub fn ident_set<I, T>(items: I) -> Vec<Ident>
where
    I: IntoIterator<Item = T>,
    T: Into<Ident>,
{
    let mut v: Vec<Ident> = items.into_iter().map(Into::into).collect();
    v.sort();
    v.dedup();
    v
}

/// Enumeration limits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct Bounds {
    /// Largest ground set whose partitions may be enumerated.
    pub max_ground_set: usize,
    /// Largest permutation group or bijection set that may be enumerated.
    pub max_group_order: u64,
    /// Largest function space `|X|^|pop|` that may be enumerated.
    pub max_function_space: u64,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds {
            max_ground_set: 6,
            max_group_order: 100_000,
            max_function_space: 1_000_000,
        }
    }
}

impl Bounds {
    pub(crate) fn check_group(&self, what: &'static str, order: u128) -> Result<()> {
        if order > u128::from(self.max_group_order) {
            return Err(Error::SizeLimit {
                what,
                size: order,
                limit: u128::from(self.max_group_order),
            });
        }
        Ok(())
    }
}

pub(crate) fn factorial(n: usize) -> u128 {
    (1..=n as u128).fold(1u128, |acc, k| acc.saturating_mul(k))
}

/// A set partition in canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Partition {
    blocks: Vec<Vec<Ident>>,
    #[serde(skip)]
    ground: Vec<Ident>,
}

impl Partition {
    /// Builds a partition from explicit blocks, validating disjointness.
    pub fn new<B, T>(blocks: B) -> Result<Self>
    where
        B: IntoIterator,
        B::Item: IntoIterator<Item = T>,
        T: Into<Ident>,
    {
        let mut out: Vec<Vec<Ident>> = Vec::new();
        for block in blocks {
            let mut b: Vec<Ident> = block.into_iter().map(Into::into).collect();
            if b.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            b.sort();
            let len = b.len();
            b.dedup();
            if b.len() != len {
                return Err(Error::InvalidPartition("repeated identifier in a block".into()));
            }
            out.push(b);
        }
        let mut ground: Vec<Ident> = out.iter().flatten().cloned().collect();
        ground.sort();
        if ground.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidPartition("blocks are not disjoint".into()));
        }
        out.sort();
        Ok(Partition { blocks: out, ground })
    }

    /// The finest partition `O`: every individual alone.
    pub fn discrete(ground: &[Ident]) -> Self {
        let ground = ident_set(ground.iter().cloned());
        Partition {
            blocks: ground.iter().map(|x| vec![x.clone()]).collect(),
            ground,
        }
    }

    /// The coarsest partition `I`: a single block (or none for an empty set).
    pub fn indiscrete(ground: &[Ident]) -> Self {
        let ground = ident_set(ground.iter().cloned());
        let blocks = if ground.is_empty() {
            Vec::new()
        } else {
            vec![ground.clone()]
        };
        Partition { blocks, ground }
    }

    /// Builds a partition of `ground` from block labels, one label per element.
    pub(crate) fn from_labels(ground: &[Ident], labels: &[usize]) -> Self {
        let mut by_label: BTreeMap<usize, Vec<Ident>> = BTreeMap::new();
        for (x, &l) in ground.iter().zip(labels) {
            by_label.entry(l).or_default().push(x.clone());
        }
        let mut blocks: Vec<Vec<Ident>> = by_label
            .into_values()
            .map(|mut b| {
                b.sort();
                b
            })
            .collect();
        blocks.sort();
        let mut ground = ground.to_vec();
        ground.sort();
        Partition { blocks, ground }
    }

    pub fn blocks(&self) -> &[Vec<Ident>] {
        &self.blocks
    }

    /// Sorted union of the blocks.
    pub fn ground_set(&self) -> &[Ident] {
        &self.ground
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// Block sizes in decreasing order.
    pub fn block_sizes(&self) -> Vec<usize> {
        let mut sizes: Vec<usize> = self.blocks.iter().map(Vec::len).collect();
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        sizes
    }

    pub fn block_of(&self, x: &Ident) -> Option<usize> {
        self.blocks.iter().position(|b| b.binary_search(x).is_ok())
    }

    pub fn same_block(&self, x: &Ident, y: &Ident) -> bool {
        match (self.block_of(x), self.block_of(y)) {
            (Some(a), Some(b)) => a == b,
            _ => false,
        }
    }

    pub fn is_discrete(&self) -> bool {
        self.blocks.iter().all(|b| b.len() == 1)
    }

    pub fn is_indiscrete(&self) -> bool {
        self.blocks.len() <= 1
    }

    /// True iff `subset` is a union of blocks.
    pub fn is_union_of_blocks(&self, subset: &[Ident]) -> bool {
        self.blocks.iter().all(|b| {
            let inside = b.iter().filter(|x| subset.contains(x)).count();
            inside == 0 || inside == b.len()
        })
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str("{")?;
            for (j, x) in b.iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{x}")?;
            }
            f.write_str("}")?;
        }
        f.write_str("}")
    }
}

/// A bijection between two finite identifier sets.
///
/// Both sets are stored sorted; `images[i]` is the index in `codomain` of the
/// image of `domain[i]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bijection {
    domain: Vec<Ident>,
    codomain: Vec<Ident>,
    images: Vec<usize>,
}

impl Bijection {
    pub fn new<I, A, B>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (A, B)>,
        A: Into<Ident>,
        B: Into<Ident>,
    {
        let mut pairs: Vec<(Ident, Ident)> = pairs
            .into_iter()
            .map(|(a, b)| (a.into(), b.into()))
            .collect();
        pairs.sort();
        let domain: Vec<Ident> = pairs.iter().map(|(a, _)| a.clone()).collect();
        if domain.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidBijection("repeated domain element".into()));
        }
        let codomain = ident_set(pairs.iter().map(|(_, b)| b.clone()));
        if codomain.len() != domain.len() {
            return Err(Error::InvalidBijection("not injective".into()));
        }
        let images = pairs
            .iter()
            .map(|(_, b)| codomain.binary_search(b).expect("present"))
            .collect();
        Ok(Bijection {
            domain,
            codomain,
            images,
        })
    }

    pub(crate) fn from_parts(domain: Vec<Ident>, codomain: Vec<Ident>, images: Vec<usize>) -> Self {
        debug_assert_eq!(domain.len(), images.len());
        Bijection {
            domain,
            codomain,
            images,
        }
    }

    pub fn domain(&self) -> &[Ident] {
        &self.domain
    }

    pub fn codomain(&self) -> &[Ident] {
        &self.codomain
    }

    /// Codomain index of the image of `domain()[i]`.
    pub fn image_index(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn apply(&self, x: &Ident) -> Option<&Ident> {
        let i = self.domain.binary_search(x).ok()?;
        Some(&self.codomain[self.images[i]])
    }

    pub fn inverse(&self) -> Bijection {
        let mut inv = vec![0; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j] = i;
        }
        Bijection {
            domain: self.codomain.clone(),
            codomain: self.domain.clone(),
            images: inv,
        }
    }

    /// True iff every block of `from` is mapped onto a block of `to`.
    pub fn is_relation_preserving(&self, from: &Partition, to: &Partition) -> bool {
        if from.ground_set() != self.domain.as_slice() || to.ground_set() != self.codomain.as_slice() {
            return false;
        }
        from.blocks().iter().all(|b| {
            let mut img: Vec<&Ident> = b.iter().filter_map(|x| self.apply(x)).collect();
            img.sort();
            match to.block_of(img[0]) {
                Some(k) => {
                    let target = &to.blocks()[k];
                    target.len() == img.len() && target.iter().zip(&img).all(|(a, b)| a == *b)
                }
                None => false,
            }
        })
    }
}

/// A permutation of a finite identifier set.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Bijection);

impl Permutation {
    pub fn identity(ground: &[Ident]) -> Self {
        let ground = ident_set(ground.iter().cloned());
        let images = (0..ground.len()).collect();
        Permutation(Bijection::from_parts(ground.clone(), ground, images))
    }

    pub fn from_bijection(b: Bijection) -> Result<Self> {
        if b.domain != b.codomain {
            return Err(Error::InvalidBijection("domain and codomain differ".into()));
        }
        Ok(Permutation(b))
    }

    pub(crate) fn from_images(ground: Vec<Ident>, images: Vec<usize>) -> Self {
        Permutation(Bijection::from_parts(ground.clone(), ground, images))
    }

    pub fn ground_set(&self) -> &[Ident] {
        &self.0.domain
    }

    /// Index of `sigma(ground[i])` in the ground set.
    pub fn image_index(&self, i: usize) -> usize {
        self.0.images[i]
    }

    pub fn apply(&self, x: &Ident) -> Option<&Ident> {
        self.0.apply(x)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.ground_set() != other.ground_set() {
            return Err(Error::MismatchedGroundSets);
        }
        let images = other.0.images.iter().map(|&j| self.0.images[j]).collect();
        Ok(Permutation::from_images(self.0.domain.clone(), images))
    }

    pub fn inverse(&self) -> Permutation {
        Permutation(self.0.inverse())
    }

    pub fn is_identity(&self) -> bool {
        self.0.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn as_bijection(&self) -> &Bijection {
        &self.0
    }
}

/// All permutations of `0..n` in lexicographic order.
pub(crate) fn index_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..n).collect();
    loop {
        out.push(current.clone());
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| current[i - 1] < current[i]) else {
            break;
        };
        let j = (i..n).rev().find(|&j| current[j] > current[i - 1]).expect("pivot");
        current.swap(i - 1, j);
        current[i..].reverse();
    }
    out
}

/// Every set partition of `ground`, each in canonical form.
pub fn all_partitions(ground: &[Ident], bounds: &Bounds) -> Result<Vec<Partition>> {
    let ground = ident_set(ground.iter().cloned());
    if ground.len() > bounds.max_ground_set {
        return Err(Error::SizeLimit {
            what: "partition ground set",
            size: ground.len() as u128,
            limit: bounds.max_ground_set as u128,
        });
    }
    let mut out = Vec::new();
    let mut labels = Vec::with_capacity(ground.len());
    restricted_growth(&ground, &mut labels, 0, &mut out);
    Ok(out)
}

fn restricted_growth(ground: &[Ident], labels: &mut Vec<usize>, max_label: usize, out: &mut Vec<Partition>) {
    if labels.len() == ground.len() {
        out.push(Partition::from_labels(ground, labels));
        return;
    }
    let limit = if labels.is_empty() { 0 } else { max_label + 1 };
    for l in 0..=limit {
        labels.push(l);
        restricted_growth(ground, labels, max_label.max(l), out);
        labels.pop();
    }
}

/// `Sym(X, tau)`: permutations that move individuals only within their block.
pub fn sym_group(tau: &Partition, bounds: &Bounds) -> Result<Vec<Permutation>> {
    let order = tau
        .blocks()
        .iter()
        .fold(1u128, |acc, b| acc.saturating_mul(factorial(b.len())));
    bounds.check_group("permutation group", order)?;

    let ground = tau.ground_set().to_vec();
    let block_indices: Vec<Vec<usize>> = tau
        .blocks()
        .iter()
        .map(|b| b.iter().map(|x| ground.binary_search(x).expect("in ground")).collect())
        .collect();

    let mut images: Vec<Vec<usize>> = vec![(0..ground.len()).collect()];
    for idx in &block_indices {
        let perms = index_permutations(idx.len());
        let mut next = Vec::with_capacity(images.len() * perms.len());
        for base in &images {
            for p in &perms {
                let mut img = base.clone();
                for (k, &src) in idx.iter().enumerate() {
                    img[src] = idx[p[k]];
                }
                next.push(img);
            }
        }
        images = next;
    }
    Ok(images
        .into_iter()
        .map(|img| Permutation::from_images(ground.clone(), img))
        .collect())
}

/// All bijections mapping each block of `from` onto a block of `to`.
pub fn relation_preserving_bijections(
    from: &Partition,
    to: &Partition,
    bounds: &Bounds,
) -> Result<Vec<Bijection>> {
    if from.block_sizes() != to.block_sizes() {
        return Ok(Vec::new());
    }
    let mut by_size: BTreeMap<usize, usize> = BTreeMap::new();
    for s in from.block_sizes() {
        *by_size.entry(s).or_default() += 1;
    }
    let count = by_size.iter().fold(1u128, |acc, (&s, &k)| {
        let per_block = (0..k).fold(1u128, |a, _| a.saturating_mul(factorial(s)));
        acc.saturating_mul(factorial(k)).saturating_mul(per_block)
    });
    bounds.check_group("relation-preserving bijection set", count)?;

    let dom = from.ground_set().to_vec();
    let cod = to.ground_set().to_vec();
    let src: Vec<Vec<usize>> = from
        .blocks()
        .iter()
        .map(|b| b.iter().map(|x| dom.binary_search(x).expect("in ground")).collect())
        .collect();
    let dst: Vec<Vec<usize>> = to
        .blocks()
        .iter()
        .map(|b| b.iter().map(|x| cod.binary_search(x).expect("in ground")).collect())
        .collect();

    let mut out = Vec::new();
    let mut used = vec![false; dst.len()];
    let mut images = vec![usize::MAX; dom.len()];
    match_blocks(&src, &dst, 0, &mut used, &mut images, &mut |img| {
        out.push(Bijection::from_parts(dom.clone(), cod.clone(), img.to_vec()));
    });
    Ok(out)
}

fn match_blocks(
    src: &[Vec<usize>],
    dst: &[Vec<usize>],
    k: usize,
    used: &mut [bool],
    images: &mut [usize],
    emit: &mut dyn FnMut(&[usize]),
) {
    if k == src.len() {
        emit(images);
        return;
    }
    let block = &src[k];
    for t in 0..dst.len() {
        if used[t] || dst[t].len() != block.len() {
            continue;
        }
        used[t] = true;
        for p in index_permutations(block.len()) {
            for (i, &x) in block.iter().enumerate() {
                images[x] = dst[t][p[i]];
            }
            match_blocks(src, dst, k + 1, used, images, emit);
        }
        used[t] = false;
    }
}

/// True iff every block of `p` lies inside some block of `q`.
pub fn partition_refines(p: &Partition, q: &Partition) -> Result<bool> {
    if p.ground_set() != q.ground_set() {
        return Err(Error::MismatchedGroundSets);
    }
    Ok(p.blocks().iter().all(|b| {
        let k = q.block_of(&b[0]);
        b.iter().all(|x| q.block_of(x) == k)
    }))
}

/// Least partition coarser than every input.
pub fn partition_join(ps: &[Partition]) -> Result<Partition> {
    let first = ps.first().ok_or(Error::EmptyInput("partition_join needs at least one partition"))?;
    let ground = first.ground_set().to_vec();
    if ps.iter().any(|p| p.ground_set() != ground.as_slice()) {
        return Err(Error::MismatchedGroundSets);
    }
    let mut parent: Vec<usize> = (0..ground.len()).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for p in ps {
        for b in p.blocks() {
            let a = ground.binary_search(&b[0]).expect("in ground");
            for x in &b[1..] {
                let j = ground.binary_search(x).expect("in ground");
                let (ra, rj) = (find(&mut parent, a), find(&mut parent, j));
                if ra != rj {
                    parent[rj] = ra;
                }
            }
        }
    }
    let labels: Vec<usize> = (0..ground.len()).map(|i| find(&mut parent, i)).collect();
    Ok(Partition::from_labels(&ground, &labels))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(s: &[&str]) -> Vec<Ident> {
        ident_set(s.iter().copied())
    }

    fn part(blocks: &[&[&str]]) -> Partition {
        Partition::new(blocks.iter().map(|b| b.iter().copied())).unwrap()
    }

    fn bell(n: usize) -> usize {
        // Bell triangle
        let mut row = vec![1usize];
        for _ in 0..n {
            let mut next = vec![*row.last().unwrap()];
            for v in &row {
                let last = *next.last().unwrap();
                next.push(last + v);
            }
            row = next;
        }
        row[0]
    }

    #[test]
    fn partitions_of_small_sets() {
        let b = Bounds::default();
        let empty = all_partitions(&[], &b).unwrap();
        assert_eq!(empty.len(), 1);
        assert_eq!(empty[0].num_blocks(), 0);

        let two = all_partitions(&ids(&["a", "b"]), &b).unwrap();
        assert_eq!(two, vec![part(&[&["a", "b"]]), part(&[&["a"], &["b"]])]);

        let four = all_partitions(&ids(&["a", "b", "c", "d"]), &b).unwrap();
        assert_eq!(four.len(), 15);
        let mut dedup = four.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), 15);
    }

    #[test]
    fn partition_counts_match_bell_numbers() {
        let b = Bounds::default();
        for n in 0..=6 {
            let ground: Vec<Ident> = (0..n).map(|i| Ident::new(format!("i{i}"))).collect();
            assert_eq!(all_partitions(&ground, &b).unwrap().len(), bell(n), "n = {n}");
        }
    }

    #[test]
    fn partition_bound_is_enforced() {
        let ground: Vec<Ident> = (0..7).map(|i| Ident::new(format!("i{i}"))).collect();
        assert!(matches!(
            all_partitions(&ground, &Bounds::default()),
            Err(Error::SizeLimit { .. })
        ));
    }

    #[test]
    fn invalid_partitions_rejected() {
        assert!(Partition::new(vec![vec!["a"], vec!["a", "b"]]).is_err());
        assert!(Partition::new(vec![Vec::<&str>::new()]).is_err());
    }

    #[test]
    fn canonical_form_is_order_independent() {
        assert_eq!(part(&[&["c"], &["b", "a"]]), part(&[&["a", "b"], &["c"]]));
    }

    #[test]
    fn sym_group_sizes() {
        let b = Bounds::default();
        assert_eq!(sym_group(&part(&[&["a", "b"], &["c"]]), &b).unwrap().len(), 2);
        let o = sym_group(&part(&[&["a"], &["b"], &["c"]]), &b).unwrap();
        assert_eq!(o.len(), 1);
        assert!(o[0].is_identity());

        // all 3! permutations filtered by block membership
        let i = part(&[&["a", "b", "c"]]);
        let brute: Vec<Vec<usize>> = index_permutations(3)
            .into_iter()
            .filter(|p| p.iter().enumerate().all(|(k, &j)| i.same_block(&i.ground_set()[k], &i.ground_set()[j])))
            .collect();
        assert_eq!(brute.len(), 6);
        assert_eq!(sym_group(&i, &b).unwrap().len(), brute.len());
    }

    #[test]
    fn sym_group_bound() {
        let big: Vec<String> = (0..9).map(|i| format!("i{i}")).collect();
        let p = Partition::new(vec![big]).unwrap();
        assert!(matches!(sym_group(&p, &Bounds::default()), Err(Error::SizeLimit { .. })));
    }

    #[test]
    fn group_axioms_hold_exhaustively() {
        let b = Bounds::default();
        for n in 0..=5 {
            let ground: Vec<Ident> = (0..n).map(|i| Ident::new(format!("i{i}"))).collect();
            for tau in all_partitions(&ground, &b).unwrap() {
                let g = sym_group(&tau, &b).unwrap();
                let expected: u128 = tau.blocks().iter().map(|bl| factorial(bl.len())).product();
                assert_eq!(g.len() as u128, expected);
                assert!(g.iter().any(Permutation::is_identity));
                for s in &g {
                    assert!(g.contains(&s.inverse()));
                }
                if g.len() <= 24 {
                    for s in &g {
                        for t in &g {
                            assert!(g.contains(&s.compose(t).unwrap()));
                        }
                    }
                }
            }
        }
    }

    fn brute_bijections(from: &Partition, to: &Partition) -> Vec<Bijection> {
        let dom = from.ground_set();
        let cod = to.ground_set();
        if dom.len() != cod.len() {
            return Vec::new();
        }
        index_permutations(dom.len())
            .into_iter()
            .map(|p| Bijection::from_parts(dom.to_vec(), cod.to_vec(), p))
            .filter(|b| b.is_relation_preserving(from, to))
            .collect()
    }

    #[test]
    fn relation_preserving_bijections_match_brute_force() {
        let b = Bounds::default();
        let y = part(&[&["a", "b"], &["c"]]);
        let y2 = part(&[&["u"], &["v", "w"]]);
        let fast = relation_preserving_bijections(&y, &y2, &b).unwrap();
        assert_eq!(fast.len(), 2);
        let mut slow = brute_bijections(&y, &y2);
        let mut fast_sorted = fast.clone();
        slow.sort();
        fast_sorted.sort();
        assert_eq!(slow, fast_sorted);

        let flat = part(&[&["u"], &["v"], &["w"]]);
        assert!(relation_preserving_bijections(&y, &flat, &b).unwrap().is_empty());

        let i2 = part(&[&["a", "b"]]);
        assert_eq!(relation_preserving_bijections(&i2, &i2, &b).unwrap().len(), 2);
    }

    #[test]
    fn bijections_exhaustive_against_brute_force() {
        let b = Bounds::default();
        let ground = ids(&["a", "b", "c", "d"]);
        let other = ids(&["p", "q", "r", "s"]);
        let left = all_partitions(&ground, &b).unwrap();
        let right = all_partitions(&other, &b).unwrap();
        for p in &left {
            for q in &right {
                let mut fast = relation_preserving_bijections(p, q, &b).unwrap();
                let mut slow = brute_bijections(p, q);
                fast.sort();
                slow.sort();
                assert_eq!(fast, slow, "{p} vs {q}");
            }
        }
    }

    #[test]
    fn self_bijections_contain_sym_group() {
        let b = Bounds::default();
        for n in 1..=5 {
            let ground: Vec<Ident> = (0..n).map(|i| Ident::new(format!("i{i}"))).collect();
            for tau in all_partitions(&ground, &b).unwrap() {
                let sym = sym_group(&tau, &b).unwrap();
                let rp: Vec<Permutation> = relation_preserving_bijections(&tau, &tau, &b)
                    .unwrap()
                    .into_iter()
                    .map(|x| Permutation::from_bijection(x).unwrap())
                    .collect();
                assert!(sym.iter().all(|s| rp.contains(s)));
                let sizes = tau.block_sizes();
                let shared = sizes.windows(2).any(|w| w[0] == w[1]);
                if !tau.is_indiscrete() && shared {
                    assert!(rp.len() > sym.len(), "{tau}");
                } else if !shared {
                    assert_eq!(rp.len(), sym.len(), "{tau}");
                }
            }
        }
    }

    #[test]
    fn refinement_and_join() {
        let o = part(&[&["a"], &["b"]]);
        let i = part(&[&["a", "b"]]);
        assert!(partition_refines(&o, &i).unwrap());
        assert!(!partition_refines(&i, &o).unwrap());
        assert!(partition_refines(&o, &o).unwrap());
        assert!(partition_refines(&o, &part(&[&["a"], &["c"]])).is_err());

        assert_eq!(partition_join(&[o.clone(), i.clone()]).unwrap(), i);
        let p = part(&[&["a", "b"], &["c"]]);
        let q = part(&[&["a"], &["b", "c"]]);
        assert_eq!(partition_join(&[p.clone(), q]).unwrap(), part(&[&["a", "b", "c"]]));
        assert_eq!(partition_join(&[p.clone(), p.clone()]).unwrap(), p);
        assert!(matches!(partition_join(&[]), Err(Error::EmptyInput(_))));
    }

    #[test]
    fn refinement_is_a_partial_order_and_join_is_lub() {
        let b = Bounds::default();
        for n in 0..=4 {
            let ground: Vec<Ident> = (0..n).map(|i| Ident::new(format!("i{i}"))).collect();
            let all = all_partitions(&ground, &b).unwrap();
            for p in &all {
                assert!(partition_refines(p, p).unwrap());
                for q in &all {
                    let pq = partition_refines(p, q).unwrap();
                    let qp = partition_refines(q, p).unwrap();
                    if pq && qp {
                        assert_eq!(p, q);
                    }
                    let j = partition_join(&[p.clone(), q.clone()]).unwrap();
                    assert!(partition_refines(p, &j).unwrap());
                    assert!(partition_refines(q, &j).unwrap());
                    for r in &all {
                        if pq && partition_refines(q, r).unwrap() {
                            assert!(partition_refines(p, r).unwrap());
                        }
                        if partition_refines(p, r).unwrap() && partition_refines(q, r).unwrap() {
                            assert!(partition_refines(&j, r).unwrap());
                        }
                    }
                }
            }
        }
    }
}

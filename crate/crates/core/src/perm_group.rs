//! Finite permutation groups with an exhaustively enumerated element list.
//!
//! Elements are sorted lexicographically by image vector, so the identity is
//! always element 0. Permutations act on the right: `i^(gh) = (i^g)^h`.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const DEFAULT_MAX_GROUP_ORDER: usize = 200;
static MAX_GROUP_ORDER: AtomicUsize = AtomicUsize::new(DEFAULT_MAX_GROUP_ORDER);

pub fn set_max_group_order(cap: usize) {
    MAX_GROUP_ORDER.store(cap, Ordering::Relaxed);
}

pub fn max_group_order() -> usize {
    MAX_GROUP_ORDER.load(Ordering::Relaxed)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("generator {index} is not a permutation of 1..{degree}")]
    NotBijection { index: usize, degree: usize },
    #[error("group order exceeds the cap of {0}")]
    TooLarge(usize),
    #[error("element set is not a subgroup")]
    NotSubgroup,
    #[error("unknown catalog group {0:?}")]
    UnknownGroup(String),
}

/// A permutation of `0..n` stored as its image vector.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<u32>);

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.cycle_string())
    }
}

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n as u32).collect())
    }

    pub fn from_images(images: Vec<u32>) -> Option<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i as usize >= n || seen[i as usize] {
                return None;
            }
            seen[i as usize] = true;
        }
        Some(Perm(images))
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Perm) -> Perm {
        Perm(self.0.iter().map(|&i| other.0[i as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j as usize] = i as u32;
        }
        Perm(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }

    pub fn to_one_based(&self) -> Vec<u32> {
        self.0.iter().map(|&i| i + 1).collect()
    }

    pub fn cycle_string(&self) -> String {
        let mut seen = vec![false; self.0.len()];
        let mut out = String::new();
        for start in 0..self.0.len() {
            if seen[start] || self.0[start] as usize == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                cycle.push((i + 1).to_string());
                i = self.0[i] as usize;
            }
            out.push('(');
            out.push_str(&cycle.join(" "));
            out.push(')');
        }
        if out.is_empty() {
            "()".to_string()
        } else {
            out
        }
    }
}

pub struct PermGroup {
    degree: usize,
    gens: Vec<Perm>,
    elements: Vec<Perm>,
    index: HashMap<Perm, usize>,
    mul: Vec<u32>,
    inv: Vec<usize>,
    // element = parent * gens[g]; None for the identity
    tree: Vec<Option<(usize, usize)>>,
    bfs: Vec<usize>,
    orders: Vec<u32>,
}

impl fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PermGroup(order {}, gens {:?})", self.order(), self.gens)
    }
}

impl PartialEq for PermGroup {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree && self.gens == other.gens
    }
}

impl Eq for PermGroup {}

/// Breadth-first closure of the generators, capped at `max_group_order()`.
pub fn group_from_generators(degree: usize, gens: Vec<Perm>) -> Result<Arc<PermGroup>, GroupError> {
    PermGroup::new(degree, gens).map(Arc::new)
}

impl PermGroup {
    pub fn new(degree: usize, gens: Vec<Perm>) -> Result<Self, GroupError> {
        for (i, g) in gens.iter().enumerate() {
            if g.degree() != degree {
                return Err(GroupError::NotBijection { index: i, degree });
            }
        }
        let cap = max_group_order();
        let id = Perm::identity(degree);
        let mut found: HashMap<Perm, usize> = HashMap::new();
        let mut list = vec![id.clone()];
        let mut parent: Vec<Option<(usize, usize)>> = vec![None];
        found.insert(id, 0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(x) = queue.pop_front() {
            for (gi, g) in gens.iter().enumerate() {
                let y = list[x].then(g);
                if !found.contains_key(&y) {
                    if list.len() == cap {
                        return Err(GroupError::TooLarge(cap));
                    }
                    found.insert(y.clone(), list.len());
                    list.push(y);
                    parent.push(Some((x, gi)));
                    queue.push_back(list.len() - 1);
                }
            }
        }
        // BFS discovery order is kept for word evaluation; the public order is lexicographic.
        let mut sorted: Vec<usize> = (0..list.len()).collect();
        sorted.sort_by(|&a, &b| list[a].cmp(&list[b]));
        let mut rank = vec![0; list.len()];
        for (new, &old) in sorted.iter().enumerate() {
            rank[old] = new;
        }
        let elements: Vec<Perm> = sorted.iter().map(|&old| list[old].clone()).collect();
        let tree = sorted
            .iter()
            .map(|&old| parent[old].map(|(p, g)| (rank[p], g)))
            .collect();
        let bfs = (0..list.len()).map(|old| rank[old]).collect();
        let index: HashMap<Perm, usize> = elements.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        let n = elements.len();
        let mut mul = vec![0u32; n * n];
        for i in 0..n {
            for j in 0..n {
                mul[i * n + j] = index[&elements[i].then(&elements[j])] as u32;
            }
        }
        let inv = (0..n).map(|i| index[&elements[i].inverse()]).collect();
        let mut orders = vec![0u32; n];
        for i in 0..n {
            let mut k = 1;
            let mut x = i;
            while x != 0 {
                x = mul[x * n + i] as usize;
                k += 1;
            }
            orders[i] = k;
        }
        Ok(PermGroup {
            degree,
            gens,
            elements,
            index,
            mul,
            inv,
            tree,
            bfs,
            orders,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn generators(&self) -> &[Perm] {
        &self.gens
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Perm {
        &self.elements[i]
    }

    pub fn index_of(&self, p: &Perm) -> Option<usize> {
        self.index.get(p).copied()
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order() + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    /// `g^-1 x g`.
    #[inline]
    pub fn conj(&self, x: usize, g: usize) -> usize {
        self.mul(self.mul(self.inv(g), x), g)
    }

    pub fn element_order(&self, a: usize) -> u32 {
        self.orders[a]
    }

    /// Index of generator `g` as an element.
    pub fn generator_index(&self, g: usize) -> usize {
        self.index[&self.gens[g]]
    }

    /// `(parent, generator)` with `element = parent * generator`, `None` for the identity.
    pub fn word_step(&self, a: usize) -> Option<(usize, usize)> {
        self.tree[a]
    }

    /// Element indices in an order where each element follows its `word_step` parent.
    pub fn bfs_order(&self) -> &[usize] {
        &self.bfs
    }

    /// Generator indices whose product is the element.
    pub fn word(&self, mut a: usize) -> Vec<usize> {
        let mut w = Vec::new();
        while let Some((p, g)) = self.tree[a] {
            w.push(g);
            a = p;
        }
        w.reverse();
        w
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn to_doc(&self) -> GroupDoc {
        GroupDoc {
            degree: self.degree,
            generators: self.gens.iter().map(Perm::to_one_based).collect(),
        }
    }
}

/// Serialized group: degree and 1-based image vectors of the generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupDoc {
    pub degree: usize,
    pub generators: Vec<Vec<u32>>,
}

impl GroupDoc {
    pub fn build(&self) -> Result<Arc<PermGroup>, GroupError> {
        let mut gens = Vec::new();
        for (i, g) in self.generators.iter().enumerate() {
            let bad = GroupError::NotBijection {
                index: i,
                degree: self.degree,
            };
            if g.len() != self.degree || g.contains(&0) {
                return Err(bad);
            }
            let p = Perm::from_images(g.iter().map(|&x| x - 1).collect()).ok_or(bad)?;
            gens.push(p);
        }
        group_from_generators(self.degree, gens)
    }
}

/// Small named groups for the command line.
pub fn catalog(name: &str) -> Result<GroupDoc, GroupError> {
    let (degree, generators): (usize, Vec<Vec<u32>>) = match name.to_ascii_uppercase().as_str() {
        "C2" => (2, vec![vec![2, 1]]),
        "C3" => (3, vec![vec![2, 3, 1]]),
        "C5" => (5, vec![vec![2, 3, 4, 5, 1]]),
        "C7" => (7, vec![vec![2, 3, 4, 5, 6, 7, 1]]),
        "S3" => (3, vec![vec![2, 1, 3], vec![2, 3, 1]]),
        "A4" => (4, vec![vec![2, 3, 1, 4], vec![1, 3, 4, 2]]),
        "D8" => (4, vec![vec![2, 3, 4, 1], vec![3, 2, 1, 4]]),
        // regular representation: i = (1 2 3 4)(5 6 7 8), j = (1 5 3 7)(2 8 4 6)
        "Q8" => (8, vec![vec![2, 3, 4, 1, 6, 7, 8, 5], vec![5, 8, 7, 6, 3, 2, 1, 4]]),
        "S4" => (4, vec![vec![2, 1, 3, 4], vec![2, 3, 4, 1]]),
        _ => return Err(GroupError::UnknownGroup(name.to_string())),
    };
    Ok(GroupDoc { degree, generators })
}

pub fn catalog_group(name: &str) -> Result<Arc<PermGroup>, GroupError> {
    catalog(name)?.build()
}

/// Conjugacy classes as sorted element-index lists; the identity class comes first.
pub fn conjugacy_classes(g: &PermGroup) -> Vec<Vec<usize>> {
    let n = g.order();
    let mut seen = vec![false; n];
    let mut classes = Vec::new();
    for x in 0..n {
        if seen[x] {
            continue;
        }
        let mut class: Vec<usize> = (0..n).map(|h| g.conj(x, h)).collect();
        class.sort_unstable();
        class.dedup();
        for &y in &class {
            seen[y] = true;
        }
        classes.push(class);
    }
    classes
}

/// Number of conjugacy classes of elements of order prime to `p`.
pub fn p_regular_class_count(g: &PermGroup, p: u32) -> usize {
    conjugacy_classes(g)
        .iter()
        .filter(|c| !g.element_order(c[0]).is_multiple_of(p))
        .count()
}

/// A subgroup of a parent group, held as a sorted set of parent element indices.
#[derive(Clone)]
pub struct Subgroup {
    parent: Arc<PermGroup>,
    elements: Vec<usize>,
    gens: Vec<usize>,
    group: OnceLock<(Arc<PermGroup>, Vec<usize>)>,
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<&Perm> = self.gens.iter().map(|&i| self.parent.element(i)).collect();
        write!(f, "Subgroup(order {}, gens {:?})", self.order(), gens)
    }
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        *self.parent == *other.parent && self.elements == other.elements
    }
}

impl Eq for Subgroup {}

fn closure(g: &PermGroup, gens: &[usize]) -> Vec<usize> {
    let mut seen: HashSet<usize> = HashSet::from([0]);
    let mut queue = vec![0];
    while let Some(x) = queue.pop() {
        for &s in gens {
            let y = g.mul(x, s);
            if seen.insert(y) {
                queue.push(y);
            }
        }
    }
    let mut v: Vec<usize> = seen.into_iter().collect();
    v.sort_unstable();
    v
}

impl Subgroup {
    pub fn whole(parent: &Arc<PermGroup>) -> Self {
        Self::from_elements(parent, (0..parent.order()).collect()).unwrap()
    }

    pub fn trivial(parent: &Arc<PermGroup>) -> Self {
        Self::from_elements(parent, vec![0]).unwrap()
    }

    pub fn generated_by(parent: &Arc<PermGroup>, gens: &[usize]) -> Self {
        Self::from_elements(parent, closure(parent, gens)).unwrap()
    }

    /// Validates closure and picks generators greedily in element order.
    pub fn from_elements(parent: &Arc<PermGroup>, mut elements: Vec<usize>) -> Result<Self, GroupError> {
        elements.sort_unstable();
        elements.dedup();
        if elements.first() != Some(&0) {
            return Err(GroupError::NotSubgroup);
        }
        let set: HashSet<usize> = elements.iter().copied().collect();
        for &a in &elements {
            for &b in &elements {
                if !set.contains(&parent.mul(a, b)) {
                    return Err(GroupError::NotSubgroup);
                }
            }
        }
        if elements.len() == parent.order() {
            // the whole group keeps the parent's presentation
            let gens = (0..parent.generators().len())
                .map(|s| parent.generator_index(s))
                .collect();
            let group = OnceLock::new();
            let _ = group.set((parent.clone(), elements.clone()));
            return Ok(Subgroup {
                parent: parent.clone(),
                elements,
                gens,
                group,
            });
        }
        let mut gens = Vec::new();
        let mut span: HashSet<usize> = HashSet::from([0]);
        for &x in &elements {
            if !span.contains(&x) {
                gens.push(x);
                span = closure(parent, &gens).into_iter().collect();
            }
        }
        Ok(Subgroup {
            parent: parent.clone(),
            elements,
            gens,
            group: OnceLock::new(),
        })
    }

    pub fn parent(&self) -> &Arc<PermGroup> {
        &self.parent
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    /// Generators as parent element indices.
    pub fn generators(&self) -> &[usize] {
        &self.gens
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|&x| other.contains(x))
    }

    /// The subgroup as a permutation group in its own right (generators in the same order).
    pub fn as_group(&self) -> &Arc<PermGroup> {
        &self.group_and_map().0
    }

    /// For each element of `as_group()`, its index in the parent.
    pub fn to_parent(&self) -> &[usize] {
        &self.group_and_map().1
    }

    fn group_and_map(&self) -> &(Arc<PermGroup>, Vec<usize>) {
        self.group.get_or_init(|| {
            let gens = self.gens.iter().map(|&i| self.parent.element(i).clone()).collect();
            let h = PermGroup::new(self.parent.degree(), gens).expect("a subgroup is no larger than its parent");
            let map = h.elements().iter().map(|p| self.parent.index_of(p).unwrap()).collect();
            (Arc::new(h), map)
        })
    }

    /// `Q^g = g^-1 Q g`.
    pub fn conjugate(&self, g: usize) -> Subgroup {
        let els = self.elements.iter().map(|&x| self.parent.conj(x, g)).collect();
        Subgroup::from_elements(&self.parent, els).unwrap()
    }

    /// An element `g` of `within` with `self^g == other`, if any.
    pub fn conjugating_element(&self, other: &Subgroup, within: &Subgroup) -> Option<usize> {
        if self.order() != other.order() {
            return None;
        }
        within
            .elements
            .iter()
            .copied()
            .find(|&g| self.elements.iter().all(|&x| other.contains(self.parent.conj(x, g))))
    }

    pub fn is_conjugate_in_parent(&self, other: &Subgroup) -> bool {
        self.conjugating_element(other, &Subgroup::whole(&self.parent))
            .is_some()
    }

    /// Whether some parent-conjugate of `self` lies inside `other`.
    pub fn is_subconjugate_to(&self, other: &Subgroup) -> bool {
        (0..self.parent.order()).any(|g| self.elements.iter().all(|&x| other.contains(self.parent.conj(x, g))))
    }

    /// Re-expresses this subgroup inside a larger subgroup `ambient` of the same parent.
    pub fn within(&self, ambient: &Subgroup) -> Result<Subgroup, GroupError> {
        let h = ambient.as_group();
        let els = self
            .elements
            .iter()
            .map(|&x| h.index_of(self.parent.element(x)).ok_or(GroupError::NotSubgroup))
            .collect::<Result<Vec<_>, _>>()?;
        Subgroup::from_elements(h, els)
    }

    /// Maps a subgroup of `self.as_group()` back to the parent.
    pub fn lift(&self, inner: &Subgroup) -> Subgroup {
        let map = self.to_parent();
        Subgroup::from_elements(&self.parent, inner.elements.iter().map(|&x| map[x]).collect()).unwrap()
    }
}

/// `{g : Q^g = Q}`.
pub fn normalizer(g: &Arc<PermGroup>, q: &Subgroup) -> Subgroup {
    let els = (0..g.order())
        .filter(|&x| q.elements.iter().all(|&y| q.contains(g.conj(y, x))))
        .collect();
    Subgroup::from_elements(g, els).unwrap()
}

/// Right coset representatives of `Q` (cosets `Qt`), identity first, in element order.
pub fn right_transversal(g: &PermGroup, q: &Subgroup) -> Vec<usize> {
    coset_table(g, q).0
}

/// Transversal plus, for every element, the index of its right coset in the transversal.
pub fn coset_table(g: &PermGroup, q: &Subgroup) -> (Vec<usize>, Vec<usize>) {
    let n = g.order();
    let mut coset = vec![usize::MAX; n];
    let mut reps = Vec::new();
    for t in 0..n {
        if coset[t] != usize::MAX {
            continue;
        }
        for &x in q.elements() {
            coset[g.mul(x, t)] = reps.len();
        }
        reps.push(t);
    }
    (reps, coset)
}

fn is_p_power(mut n: usize, p: usize) -> bool {
    while n.is_multiple_of(p) {
        n /= p;
    }
    n == 1
}

/// One representative per conjugacy class of p-subgroups, sorted by order
/// (ties broken by element set); the trivial subgroup comes first.
pub fn p_subgroups_up_to_conjugacy(g: &Arc<PermGroup>, p: u32) -> Vec<Subgroup> {
    let p = p as usize;
    let p_elements: Vec<usize> = (1..g.order())
        .filter(|&x| is_p_power(g.element_order(x) as usize, p))
        .collect();
    let mut all: Vec<Vec<usize>> = vec![vec![0]];
    let mut level: Vec<Vec<usize>> = vec![vec![0]];
    let mut seen: HashSet<Vec<usize>> = HashSet::from([vec![0]]);
    while !level.is_empty() {
        let mut next = Vec::new();
        for sub in &level {
            let set: HashSet<usize> = sub.iter().copied().collect();
            for &x in &p_elements {
                if set.contains(&x) {
                    continue;
                }
                // x must normalize the subgroup and have x^p inside it
                if !sub.iter().all(|&y| set.contains(&g.conj(y, x))) {
                    continue;
                }
                let mut xp = 0;
                for _ in 0..p {
                    xp = g.mul(xp, x);
                }
                if !set.contains(&xp) {
                    continue;
                }
                let mut gens: Vec<usize> = sub.clone();
                gens.push(x);
                let bigger = closure(g, &gens);
                if seen.insert(bigger.clone()) {
                    next.push(bigger);
                }
            }
        }
        all.extend(next.iter().cloned());
        level = next;
    }
    // conjugacy classes: canonical key is the least conjugate element set
    let mut reps: Vec<Vec<usize>> = Vec::new();
    let mut keys: HashSet<Vec<usize>> = HashSet::new();
    for sub in all {
        let key = (0..g.order())
            .map(|h| {
                let mut c: Vec<usize> = sub.iter().map(|&y| g.conj(y, h)).collect();
                c.sort_unstable();
                c
            })
            .min()
            .unwrap();
        if keys.insert(key.clone()) {
            reps.push(key);
        }
    }
    reps.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    reps.into_iter()
        .map(|els| Subgroup::from_elements(g, els).unwrap())
        .collect()
}

/// Largest power of `p` dividing `n`.
pub fn p_part(mut n: usize, p: u32) -> usize {
    let mut out = 1;
    while n.is_multiple_of(p as usize) {
        n /= p as usize;
        out *= p as usize;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_orders() {
        for (name, order) in [
            ("S3", 6),
            ("C7", 7),
            ("A4", 12),
            ("D8", 8),
            ("Q8", 8),
            ("C3", 3),
            ("S4", 24),
        ] {
            assert_eq!(catalog_group(name).unwrap().order(), order, "{name}");
        }
    }

    #[test]
    fn q8_has_a_unique_involution() {
        let g = catalog_group("Q8").unwrap();
        let invol = (0..8).filter(|&x| g.element_order(x) == 2).count();
        assert_eq!(invol, 1);
        assert!(!g.is_abelian());
    }

    #[test]
    fn identity_is_first_and_words_evaluate() {
        let g = catalog_group("A4").unwrap();
        assert!(g.element(0).is_identity());
        for a in 0..g.order() {
            let mut x = 0;
            for s in g.word(a) {
                x = g.mul(x, g.generator_index(s));
            }
            assert_eq!(x, a);
        }
    }

    #[test]
    fn rejects_non_bijection_and_cap() {
        let doc = GroupDoc {
            degree: 3,
            generators: vec![vec![1, 1, 2]],
        };
        assert!(matches!(doc.build(), Err(GroupError::NotBijection { .. })));
        let big = GroupDoc {
            degree: 6,
            generators: vec![vec![2, 1, 3, 4, 5, 6], vec![2, 3, 4, 5, 6, 1]],
        };
        assert_eq!(big.build().unwrap_err(), GroupError::TooLarge(200));
    }

    #[test]
    fn class_sizes() {
        let sizes = |name: &str| -> Vec<usize> {
            conjugacy_classes(&catalog_group(name).unwrap())
                .iter()
                .map(Vec::len)
                .collect()
        };
        let mut s3 = sizes("S3");
        assert_eq!(s3[0], 1);
        s3.sort();
        assert_eq!(s3, vec![1, 2, 3]);
        assert_eq!(sizes("C7"), vec![1; 7]);
        let mut a4 = sizes("A4");
        a4.sort();
        assert_eq!(a4, vec![1, 3, 4, 4]);
    }

    #[test]
    fn regular_class_counts() {
        let s3 = catalog_group("S3").unwrap();
        assert_eq!(p_regular_class_count(&s3, 2), 2);
        assert_eq!(p_regular_class_count(&s3, 3), 2);
        assert_eq!(p_regular_class_count(&catalog_group("C7").unwrap(), 2), 7);
    }

    #[test]
    fn p_subgroup_representatives() {
        let orders = |name: &str, p: u32| -> Vec<usize> {
            p_subgroups_up_to_conjugacy(&catalog_group(name).unwrap(), p)
                .iter()
                .map(Subgroup::order)
                .collect()
        };
        assert_eq!(orders("S3", 2), vec![1, 2]);
        assert_eq!(orders("S3", 3), vec![1, 3]);
        assert_eq!(orders("A4", 2), vec![1, 2, 4]);
        assert_eq!(orders("C7", 2), vec![1]);
    }

    #[test]
    fn normalizers() {
        let s3 = catalog_group("S3").unwrap();
        let c2 = p_subgroups_up_to_conjugacy(&s3, 2).pop().unwrap();
        assert_eq!(normalizer(&s3, &c2), c2);
        let whole = Subgroup::whole(&s3);
        assert_eq!(normalizer(&s3, &whole), whole);
        let a4 = catalog_group("A4").unwrap();
        let v4 = p_subgroups_up_to_conjugacy(&a4, 2).pop().unwrap();
        assert_eq!(normalizer(&a4, &v4).order(), 12);
    }

    #[test]
    fn transversals_partition() {
        let s3 = catalog_group("S3").unwrap();
        let c2 = p_subgroups_up_to_conjugacy(&s3, 2).pop().unwrap();
        let t = right_transversal(&s3, &c2);
        assert_eq!(t.len(), 3);
        assert_eq!(t[0], 0);
        let mut covered: Vec<usize> = t
            .iter()
            .flat_map(|&r| c2.elements().iter().map(|&x| s3.mul(x, r)).collect::<Vec<_>>())
            .collect();
        covered.sort();
        assert_eq!(covered, (0..6).collect::<Vec<_>>());
        assert_eq!(right_transversal(&s3, &Subgroup::whole(&s3)), vec![0]);
        let c7 = catalog_group("C7").unwrap();
        assert_eq!(right_transversal(&c7, &Subgroup::trivial(&c7)).len(), 7);
    }
}

//! Finite abelian groups `Z/n_1 ⊕ … ⊕ Z/n_k`, subgroups, quotients and A-sets.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::IntSystem;

/// An element as its vector of reduced coordinates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct GroupElement(pub Vec<i64>);

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Elements are indexed in lexicographic order of their coordinates; every table in
/// the crate is keyed by these indices.
#[derive(Clone)]
pub struct FiniteAbelianGroup {
    orders: Vec<i64>,
    order: usize,
    add: Vec<usize>,
    neg: Vec<usize>,
}

impl PartialEq for FiniteAbelianGroup {
    fn eq(&self, other: &Self) -> bool {
        self.orders == other.orders
    }
}

impl Eq for FiniteAbelianGroup {}

impl fmt::Debug for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.orders.iter().map(|n| format!("Z/{n}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl FiniteAbelianGroup {
    pub fn new(orders: &[i64]) -> Result<FiniteAbelianGroup> {
        if orders.is_empty() {
            return FiniteAbelianGroup::new(&[1]);
        }
        if let Some(n) = orders.iter().find(|n| **n < 1) {
            return Err(Error::Parse(format!("cyclic order {n} must be at least 1")));
        }
        let order = orders.iter().try_fold(1usize, |acc, n| acc.checked_mul(*n as usize));
        let order = match order {
            Some(o) if o <= 1 << 20 => o,
            _ => return Err(Error::Parse(format!("group {orders:?} is too large"))),
        };
        let mut g = FiniteAbelianGroup { orders: orders.to_vec(), order, add: Vec::new(), neg: Vec::new() };
        let coords: Vec<Vec<i64>> = (0..order).map(|i| g.coords_of(i)).collect();
        g.add = Vec::with_capacity(order * order);
        for a in &coords {
            for b in &coords {
                let sum: Vec<i64> = a.iter().zip(b).zip(&g.orders).map(|((x, y), n)| (x + y) % n).collect();
                g.add.push(g.index_of_coords(&sum));
            }
        }
        g.neg = coords
            .iter()
            .map(|a| {
                let n: Vec<i64> = a.iter().zip(&g.orders).map(|(x, n)| (n - x) % n).collect();
                g.index_of_coords(&n)
            })
            .collect();
        Ok(g)
    }

    pub fn cyclic(n: i64) -> FiniteAbelianGroup {
        FiniteAbelianGroup::new(&[n]).expect("valid cyclic order")
    }

    pub fn trivial() -> FiniteAbelianGroup {
        FiniteAbelianGroup::cyclic(1)
    }

    pub fn cyclic_orders(&self) -> &[i64] {
        &self.orders
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    /// Exponent of the group (lcm of the cyclic orders).
    pub fn exponent(&self) -> i64 {
        self.orders.iter().fold(1, |acc, n| num_integer::lcm(acc, *n))
    }

    pub fn zero(&self) -> usize {
        0
    }

    #[inline]
    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.order + b]
    }

    #[inline]
    pub fn neg(&self, a: usize) -> usize {
        self.neg[a]
    }

    #[inline]
    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg(b))
    }

    pub fn mul_int(&self, k: i64, a: usize) -> usize {
        let c: Vec<i64> = self.coords_of(a).iter().zip(&self.orders).map(|(x, n)| (k * x).rem_euclid(*n)).collect();
        self.index_of_coords(&c)
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    pub fn coords_of(&self, mut index: usize) -> Vec<i64> {
        let mut c = vec![0i64; self.orders.len()];
        for t in (0..self.orders.len()).rev() {
            let n = self.orders[t] as usize;
            c[t] = (index % n) as i64;
            index /= n;
        }
        c
    }

    pub fn index_of_coords(&self, coords: &[i64]) -> usize {
        coords.iter().zip(&self.orders).fold(0usize, |acc, (x, n)| acc * (*n as usize) + x.rem_euclid(*n) as usize)
    }

    pub fn element(&self, index: usize) -> GroupElement {
        GroupElement(self.coords_of(index))
    }

    pub fn index_of(&self, e: &GroupElement) -> Result<usize> {
        if e.0.len() != self.orders.len() {
            return Err(Error::Parse(format!("element {e} has the wrong number of coordinates for {self}")));
        }
        Ok(self.index_of_coords(&e.0))
    }

    /// Lexicographic list of all elements.
    pub fn enumerate_elements(&self) -> Vec<GroupElement> {
        self.elements().map(|i| self.element(i)).collect()
    }

    /// Element text used in file keys: `1` for cyclic groups, `(1,0)` otherwise.
    pub fn format_element(&self, index: usize) -> String {
        let c = self.coords_of(index);
        if c.len() == 1 {
            c[0].to_string()
        } else {
            self.element(index).to_string()
        }
    }

    /// Parses `3`, `(3)` or `(1,0)`; coordinates are reduced.
    pub fn parse_element(&self, text: &str) -> Result<usize> {
        let t = text.trim();
        let inner = t.strip_prefix('(').and_then(|s| s.strip_suffix(')')).unwrap_or(t);
        let coords: Vec<i64> = inner
            .split(',')
            .map(|p| p.trim().parse::<i64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::Parse(format!("invalid group element {text:?}")))?;
        self.index_of(&GroupElement(coords))
    }

    /// Order of the cyclic subgroup generated by `a`.
    pub fn element_order(&self, a: usize) -> usize {
        let mut k = 1;
        let mut x = a;
        while x != 0 {
            x = self.add(x, a);
            k += 1;
        }
        k
    }

    /// Closure of a generating set under addition.
    pub fn generated_subgroup(&self, generators: &[usize]) -> Vec<usize> {
        let mut member = vec![false; self.order];
        member[0] = true;
        let mut list = vec![0];
        let mut head = 0;
        while head < list.len() {
            let x = list[head];
            head += 1;
            for g in generators {
                let y = self.add(x, *g);
                if !member[y] {
                    member[y] = true;
                    list.push(y);
                }
            }
        }
        list.sort_unstable();
        list
    }

    pub fn is_subgroup(&self, subset: &[usize]) -> bool {
        let mut member = vec![false; self.order];
        for &s in subset {
            if s >= self.order {
                return false;
            }
            member[s] = true;
        }
        member[0] && subset.iter().all(|&a| member[self.neg(a)] && subset.iter().all(|&b| member[self.add(a, b)]))
    }
}

impl FromStr for FiniteAbelianGroup {
    type Err = Error;

    /// `4,2` means `Z/4 ⊕ Z/2`.
    fn from_str(s: &str) -> Result<FiniteAbelianGroup> {
        let t = s.trim().trim_start_matches('[').trim_end_matches(']');
        let orders: Vec<i64> = t
            .split(',')
            .map(|p| p.trim().parse::<i64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::Parse(format!("invalid group spec {s:?}, expected e.g. 4,2")))?;
        FiniteAbelianGroup::new(&orders)
    }
}

/// The subgroup `2A` and a transversal of `A/2A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoubleSubgroup {
    pub elements: Vec<usize>,
    /// Smallest element of each coset, in increasing order.
    pub transversal: Vec<usize>,
    /// `coset_of[a]` indexes into `transversal`.
    pub coset_of: Vec<usize>,
}

pub fn double_subgroup(a: &FiniteAbelianGroup) -> DoubleSubgroup {
    let mut elements: Vec<usize> = a.elements().map(|i| a.add(i, i)).collect();
    elements.sort_unstable();
    elements.dedup();
    let (transversal, coset_of) = cosets(a, &elements);
    DoubleSubgroup { elements, transversal, coset_of }
}

/// Coset representatives (minimal index) and the coset index of each element.
pub fn cosets(a: &FiniteAbelianGroup, subgroup: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let mut coset_of = vec![usize::MAX; a.order()];
    let mut transversal = Vec::new();
    for x in a.elements() {
        if coset_of[x] != usize::MAX {
            continue;
        }
        let c = transversal.len();
        transversal.push(x);
        for &b in subgroup {
            coset_of[a.add(x, b)] = c;
        }
    }
    (transversal, coset_of)
}

/// A presentation of `A/B` together with the projection `A → A/B`.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub group: FiniteAbelianGroup,
    /// `projection[a]` is the image of `a`.
    pub projection: Vec<usize>,
}

pub fn quotient_group(a: &FiniteAbelianGroup, b: &[usize]) -> Result<Quotient> {
    if !a.is_subgroup(b) {
        return Err(Error::NotASubgroup(format!(
            "{{{}}} in {a}",
            b.iter().map(|x| a.format_element(*x)).collect::<Vec<_>>().join(", ")
        )));
    }
    let k = a.rank();
    // relations: n_t e_t and every element of B
    let mut rows: Vec<Vec<(usize, i128)>> = (0..k).map(|t| vec![(t, a.cyclic_orders()[t] as i128)]).collect();
    for &x in b {
        let c = a.coords_of(x);
        rows.push(c.iter().enumerate().filter(|(_, v)| **v != 0).map(|(t, v)| (t, *v as i128)).collect());
    }
    let sys = IntSystem::new(&rows, k)?;
    let diag = sys.diagonal();
    let v = sys.column_transform();
    let kept: Vec<usize> = (0..diag.len()).filter(|&i| diag[i] > 1).collect();
    let orders: Vec<i64> = kept.iter().map(|&i| diag[i] as i64).collect();
    let group = FiniteAbelianGroup::new(&orders)?;
    let projection = a
        .elements()
        .map(|x| {
            let c = a.coords_of(x);
            let y: Vec<i64> = kept
                .iter()
                .map(|&i| {
                    let s: i128 = (0..k).map(|t| c[t] as i128 * v[t][i]).sum();
                    s.rem_euclid(diag[i]) as i64
                })
                .collect();
            group.index_of_coords(&y)
        })
        .collect();
    Ok(Quotient { group, projection })
}

/// `B` presented as a product of cyclic groups, with the embedding into `A`
/// indexed by the elements of the presentation.
pub fn subgroup_as_group(a: &FiniteAbelianGroup, b: &[usize]) -> Result<(FiniteAbelianGroup, Vec<usize>)> {
    if !a.is_subgroup(b) {
        return Err(Error::NotASubgroup(format!("{} elements in {a}", b.len())));
    }
    let mut members = b.to_vec();
    members.sort_unstable();
    members.dedup();
    if members.len() == 1 {
        return Ok((FiniteAbelianGroup::trivial(), vec![0]));
    }
    let nonzero: Vec<usize> = members.iter().copied().filter(|&x| x != 0).collect();
    let max_rank = (usize::BITS - members.len().leading_zeros()) as usize;
    for rank in 1..=max_rank {
        let mut gens = vec![0usize; rank];
        if let Some(found) = search_basis(a, &nonzero, members.len(), &mut gens, 0) {
            return Ok(found);
        }
    }
    Err(Error::NotASubgroup("no cyclic decomposition found".into()))
}

fn search_basis(
    a: &FiniteAbelianGroup,
    pool: &[usize],
    size: usize,
    gens: &mut Vec<usize>,
    depth: usize,
) -> Option<(FiniteAbelianGroup, Vec<usize>)> {
    if depth == gens.len() {
        let orders: Vec<i64> = gens.iter().map(|&g| a.element_order(g) as i64).collect();
        if orders.iter().product::<i64>() as usize != size {
            return None;
        }
        let group = FiniteAbelianGroup::new(&orders).ok()?;
        let embedding: Vec<usize> = group
            .elements()
            .map(|x| {
                let c = group.coords_of(x);
                c.iter().zip(gens.iter()).fold(0, |acc, (k, g)| a.add(acc, a.mul_int(*k, *g)))
            })
            .collect();
        let mut seen = embedding.clone();
        seen.sort_unstable();
        seen.dedup();
        return (seen.len() == size).then_some((group, embedding));
    }
    let start = if depth == 0 { 0 } else { pool.iter().position(|&x| x == gens[depth - 1]).map_or(0, |p| p + 1) };
    for k in start..pool.len() {
        gens[depth] = pool[k];
        if let Some(found) = search_basis(a, pool, size, gens, depth + 1) {
            return Some(found);
        }
    }
    None
}

/// A finite set with an action of the group, given as a table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ASet {
    pub carrier: Vec<String>,
    /// `action[g][s]` is `g + s`.
    pub action: Vec<Vec<usize>>,
}

impl ASet {
    /// The group acting on itself by translation.
    pub fn regular(a: &FiniteAbelianGroup) -> ASet {
        ASet {
            carrier: a.elements().map(|i| a.format_element(i)).collect(),
            action: a.elements().map(|g| a.elements().map(|s| a.add(g, s)).collect()).collect(),
        }
    }

    /// `A` acting on `A/B` through the projection.
    pub fn cosets_of(a: &FiniteAbelianGroup, q: &Quotient) -> ASet {
        let reps: Vec<usize> = (0..q.group.order())
            .map(|c| a.elements().find(|x| q.projection[*x] == c).expect("projection is onto"))
            .collect();
        ASet {
            carrier: reps.iter().map(|r| format!("{}+B", a.format_element(*r))).collect(),
            action: a
                .elements()
                .map(|g| (0..q.group.order()).map(|c| q.projection[a.add(g, reps[c])]).collect())
                .collect(),
        }
    }

    /// The trivial action on `n` points.
    pub fn trivial(a: &FiniteAbelianGroup, n: usize) -> ASet {
        ASet {
            carrier: (0..n).map(|s| format!("s{s}")).collect(),
            action: a.elements().map(|_| (0..n).collect()).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.carrier.len()
    }

    pub fn is_empty(&self) -> bool {
        self.carrier.is_empty()
    }

    #[inline]
    pub fn act(&self, g: usize, s: usize) -> usize {
        self.action[g][s]
    }

    /// Checks `0 + s = s` and `(i+j) + s = i + (j + s)`.
    pub fn validate(&self, a: &FiniteAbelianGroup) -> Result<()> {
        let n = self.len();
        if self.action.len() != a.order() || self.action.iter().any(|r| r.len() != n || r.iter().any(|s| *s >= n)) {
            return Err(Error::InvalidData("action table has the wrong shape".into()));
        }
        for s in 0..n {
            if self.act(0, s) != s {
                return Err(Error::InvalidData(format!("0 does not fix {}", self.carrier[s])));
            }
            for i in a.elements() {
                for j in a.elements() {
                    if self.act(a.add(i, j), s) != self.act(i, self.act(j, s)) {
                        return Err(Error::InvalidData(format!(
                            "action is not additive at ({}, {}, {})",
                            a.format_element(i),
                            a.format_element(j),
                            self.carrier[s]
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

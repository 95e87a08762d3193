//! Finite groups as explicit multiplication tables.
//!
//! Elements are dense indices `0..n`, identity always index 0. Higher
//! modules address elements exclusively by index; cochain indexing relies
//! on this mixed-radix convention. Groups built from permutation generators
//! sort elements lexicographically by image vector, which pins a canonical
//! order for every construction.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

pub const MAX_ORDER: usize = 512;

pub type Elt = u16;

pub struct FiniteGroup {
    order: usize,
    mul: Vec<Elt>,
    inv: Vec<Elt>,
    names: Vec<String>,
    description: String,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup({}, order {})", self.description, self.order)
    }
}

impl FiniteGroup {
    pub fn from_table(
        mul: Vec<Elt>,
        names: Vec<String>,
        description: String,
    ) -> Result<Arc<FiniteGroup>> {
        let n = names.len();
        if n == 0 || mul.len() != n * n {
            return Err(Error::BadGroup("malformed multiplication table".into()));
        }
        if n > MAX_ORDER {
            return Err(Error::BadGroup(format!(
                "group of order {n} exceeds the supported maximum {MAX_ORDER}"
            )));
        }
        // identity must be element 0
        for a in 0..n {
            if mul[a * n] as usize != a || mul[a] as usize != a {
                return Err(Error::BadGroup("element 0 is not an identity".into()));
            }
        }
        let mut inv = vec![Elt::MAX; n];
        for a in 0..n {
            for b in 0..n {
                if mul[a * n + b] == 0 {
                    inv[a] = b as Elt;
                }
            }
            if inv[a] == Elt::MAX {
                return Err(Error::BadGroup(format!("element {a} has no inverse")));
            }
        }
        let g = FiniteGroup {
            order: n,
            mul,
            inv,
            names,
            description,
        };
        g.check_associativity()?;
        Ok(Arc::new(g))
    }

    /// Exhaustive associativity for n <= 64, randomized 10^5 triples above.
    fn check_associativity(&self) -> Result<()> {
        let n = self.order;
        let check = |a: usize, b: usize, c: usize| -> bool {
            let ab = self.mul[a * n + b] as usize;
            let bc = self.mul[b * n + c] as usize;
            self.mul[ab * n + c] == self.mul[a * n + bc]
        };
        if n <= 64 {
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        if !check(a, b, c) {
                            return Err(Error::BadGroup(format!(
                                "associativity fails at ({a},{b},{c})"
                            )));
                        }
                    }
                }
            }
        } else {
            let mut rng = crate::rng::DetRng::new(n as u64);
            for _ in 0..100_000 {
                let a = rng.below(n as u64) as usize;
                let b = rng.below(n as u64) as usize;
                let c = rng.below(n as u64) as usize;
                if !check(a, b, c) {
                    return Err(Error::BadGroup(format!(
                        "associativity fails at ({a},{b},{c})"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    #[inline]
    pub fn mul(&self, a: Elt, b: Elt) -> Elt {
        self.mul[a as usize * self.order + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: Elt) -> Elt {
        self.inv[a as usize]
    }

    pub fn identity(&self) -> Elt {
        0
    }

    pub fn conj(&self, g: Elt, x: Elt) -> Elt {
        // g x g^{-1}
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn name(&self, a: Elt) -> &str {
        &self.names[a as usize]
    }

    pub fn element_order(&self, a: Elt) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn exponent(&self) -> usize {
        (0..self.order as Elt).fold(1usize, |acc, a| lcm(acc, self.element_order(a)))
    }

    /// Conjugacy classes; each class is sorted, classes ordered by least element.
    pub fn conjugacy_classes(&self) -> Vec<Vec<Elt>> {
        let n = self.order;
        let mut seen = vec![false; n];
        let mut classes = Vec::new();
        for a in 0..n as Elt {
            if seen[a as usize] {
                continue;
            }
            let mut class = Vec::new();
            for g in 0..n as Elt {
                let c = self.conj(g, a);
                if !seen[c as usize] {
                    seen[c as usize] = true;
                    class.push(c);
                }
            }
            class.sort_unstable();
            classes.push(class);
        }
        classes
    }

    pub fn is_abelian(&self) -> bool {
        for a in 0..self.order as Elt {
            for b in 0..a {
                if self.mul(a, b) != self.mul(b, a) {
                    return false;
                }
            }
        }
        true
    }

    /// The full group as a subgroup of itself.
    pub fn full_subgroup(self: &Arc<Self>) -> Subgroup {
        Subgroup::from_elements(self, (0..self.order as Elt).collect())
    }

    pub fn trivial_subgroup(self: &Arc<Self>) -> Subgroup {
        Subgroup::from_elements(self, vec![0])
    }

    /// Subgroup generated by the given elements (always contains identity).
    pub fn closure(self: &Arc<Self>, gens: &[Elt]) -> Subgroup {
        let mut mask = vec![false; self.order];
        mask[0] = true;
        let mut queue: Vec<Elt> = vec![0];
        let mut head = 0;
        while head < queue.len() {
            let a = queue[head];
            head += 1;
            for &g in gens {
                for prod in [self.mul(a, g), self.mul(g, a)] {
                    if !mask[prod as usize] {
                        mask[prod as usize] = true;
                        queue.push(prod);
                    }
                }
            }
        }
        let mut elements: Vec<Elt> = queue;
        elements.sort_unstable();
        Subgroup::from_elements(self, elements)
    }
}

/// A subgroup held as a sorted element list plus a membership bitmask.
#[derive(Clone)]
pub struct Subgroup {
    parent: Arc<FiniteGroup>,
    elements: Vec<Elt>,
    mask: Vec<u64>,
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subgroup(order {} of {:?})", self.order(), self.parent)
    }
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.parent, &other.parent) && self.elements == other.elements
    }
}
impl Eq for Subgroup {}

impl Subgroup {
    pub fn from_elements(parent: &Arc<FiniteGroup>, elements: Vec<Elt>) -> Subgroup {
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        let mut mask = vec![0u64; parent.order().div_ceil(64)];
        for &e in &elements {
            mask[e as usize / 64] |= 1 << (e as usize % 64);
        }
        let s = Subgroup {
            parent: parent.clone(),
            elements,
            mask,
        };
        debug_assert!(s.verify_closed(), "subgroup not closed");
        s
    }

    fn verify_closed(&self) -> bool {
        self.contains(0)
            && self.elements.iter().all(|&a| {
                self.contains(self.parent.inv(a))
                    && self
                        .elements
                        .iter()
                        .all(|&b| self.contains(self.parent.mul(a, b)))
            })
    }

    pub fn parent(&self) -> &Arc<FiniteGroup> {
        &self.parent
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Elt] {
        &self.elements
    }

    #[inline]
    pub fn contains(&self, e: Elt) -> bool {
        (self.mask[e as usize / 64] >> (e as usize % 64)) & 1 == 1
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|&e| other.contains(e))
    }

    pub fn conjugate(&self, g: Elt) -> Subgroup {
        let mut elements: Vec<Elt> = self
            .elements
            .iter()
            .map(|&x| self.parent.conj(g, x))
            .collect();
        elements.sort_unstable();
        Subgroup::from_elements(&self.parent, elements)
    }

    pub fn intersection(&self, other: &Subgroup) -> Subgroup {
        let elements: Vec<Elt> = self
            .elements
            .iter()
            .copied()
            .filter(|&e| other.contains(e))
            .collect();
        Subgroup::from_elements(&self.parent, elements)
    }

    pub fn is_normal_in_parent(&self) -> bool {
        let g = &self.parent;
        (0..g.order() as Elt).all(|x| self.elements.iter().all(|&s| self.contains(g.conj(x, s))))
    }

    /// Left coset representatives, each the least element of its coset,
    /// in ascending order.
    pub fn left_coset_reps(&self) -> Vec<Elt> {
        let g = &self.parent;
        let mut seen = vec![false; g.order()];
        let mut reps = Vec::new();
        for x in 0..g.order() as Elt {
            if seen[x as usize] {
                continue;
            }
            reps.push(x);
            for &h in &self.elements {
                seen[g.mul(x, h) as usize] = true;
            }
        }
        reps
    }

    /// The abstract group on this subgroup's elements: a fresh table group
    /// whose element i is `elements()[i]`, together with the embedding.
    pub fn as_group(&self) -> SubgroupView {
        let g = &self.parent;
        let n = self.elements.len();
        let index_of: HashMap<Elt, Elt> = self
            .elements
            .iter()
            .enumerate()
            .map(|(i, &e)| (e, i as Elt))
            .collect();
        let mut mul = vec![0 as Elt; n * n];
        for (i, &a) in self.elements.iter().enumerate() {
            for (j, &b) in self.elements.iter().enumerate() {
                mul[i * n + j] = index_of[&g.mul(a, b)];
            }
        }
        let names: Vec<String> = self
            .elements
            .iter()
            .map(|&e| g.name(e).to_string())
            .collect();
        let desc = format!("subgroup of order {} in {}", n, g.description());
        let group = FiniteGroup::from_table(mul, names, desc).expect("valid subgroup table");
        SubgroupView {
            group,
            to_parent: self.elements.clone(),
        }
    }
}

/// A subgroup materialized as a standalone group plus the element embedding
/// back into the parent.
#[derive(Clone, Debug)]
pub struct SubgroupView {
    pub group: Arc<FiniteGroup>,
    /// view element index -> parent element index
    pub to_parent: Vec<Elt>,
}

impl SubgroupView {
    pub fn from_parent(&self, parent_elt: Elt) -> Option<Elt> {
        self.to_parent
            .binary_search(&parent_elt)
            .ok()
            .map(|i| i as Elt)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd_usize(a, b) * b
}

fn gcd_usize(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd_usize(b, a % b)
    }
}

// ---------------------------------------------------------------------------
// Construction from specs and permutations
// ---------------------------------------------------------------------------

/// Permutation on 0-based points, stored as the image vector.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
struct Perm(Vec<u8>);

impl Perm {
    fn identity(n: usize) -> Perm {
        Perm((0..n as u8).collect())
    }

    fn compose(&self, other: &Perm) -> Perm {
        // (self * other)(x) = self(other(x))
        Perm(other.0.iter().map(|&x| self.0[x as usize]).collect())
    }

    fn cycle_name(&self) -> String {
        let n = self.0.len();
        let mut seen = vec![false; n];
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        for start in 0..n {
            if seen[start] || self.0[start] as usize == start {
                seen[start] = true;
                continue;
            }
            let mut cyc = vec![start];
            seen[start] = true;
            let mut x = self.0[start] as usize;
            while x != start {
                seen[x] = true;
                cyc.push(x);
                x = self.0[x] as usize;
            }
            cycles.push(cyc);
        }
        if cycles.is_empty() {
            return "e".to_string();
        }
        let compact = n <= 9;
        let mut out = String::new();
        for cyc in cycles {
            out.push('(');
            for (i, p) in cyc.iter().enumerate() {
                if i > 0 && !compact {
                    out.push(' ');
                }
                out.push_str(&(p + 1).to_string());
            }
            out.push(')');
        }
        out
    }
}

/// Group generated by permutations; elements sorted by image vector so the
/// identity is element 0.
fn permutation_group(
    n_points: usize,
    gens: Vec<Perm>,
    description: String,
) -> Result<Arc<FiniteGroup>> {
    let id = Perm::identity(n_points);
    let mut elements: Vec<Perm> = vec![id.clone()];
    let mut seen: HashMap<Perm, ()> = HashMap::new();
    seen.insert(id, ());
    let mut head = 0;
    while head < elements.len() {
        let cur = elements[head].clone();
        head += 1;
        for g in &gens {
            for prod in [cur.compose(g), g.compose(&cur)] {
                if !seen.contains_key(&prod) {
                    if elements.len() >= MAX_ORDER {
                        return Err(Error::BadGroup(format!(
                            "generated group exceeds the maximum order {MAX_ORDER}"
                        )));
                    }
                    seen.insert(prod.clone(), ());
                    elements.push(prod);
                }
            }
        }
    }
    elements.sort();
    let index_of: HashMap<&Perm, usize> =
        elements.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let n = elements.len();
    let mut mul = vec![0 as Elt; n * n];
    for (i, a) in elements.iter().enumerate() {
        for (j, b) in elements.iter().enumerate() {
            mul[i * n + j] = index_of[&a.compose(b)] as Elt;
        }
    }
    let names: Vec<String> = elements.iter().map(|p| p.cycle_name()).collect();
    FiniteGroup::from_table(mul, names, description)
}

fn cyclic(n: usize) -> Result<Arc<FiniteGroup>> {
    if n == 0 {
        return Err(Error::BadGroup("C 0 is not a group".into()));
    }
    if n == 1 {
        return trivial_group();
    }
    let mut img: Vec<u8> = (0..n as u8).map(|i| ((i as usize + 1) % n) as u8).collect();
    img.rotate_left(0);
    permutation_group(n, vec![Perm(img)], format!("C {n}"))
}

fn trivial_group() -> Result<Arc<FiniteGroup>> {
    FiniteGroup::from_table(vec![0], vec!["e".into()], "C 1".into())
}

fn dihedral(order: usize) -> Result<Arc<FiniteGroup>> {
    // D n = dihedral group of order n (n even, n >= 4)
    if order < 4 || !order.is_multiple_of(2) {
        return Err(Error::BadGroup(format!(
            "D {order}: dihedral spec takes the group order, an even number >= 4"
        )));
    }
    let m = order / 2;
    let rot = Perm((0..m as u8).map(|i| ((i as usize + 1) % m) as u8).collect());
    let refl = Perm((0..m as u8).map(|i| ((m - i as usize) % m) as u8).collect());
    permutation_group(m, vec![rot, refl], format!("D {order}"))
}

fn symmetric(n: usize) -> Result<Arc<FiniteGroup>> {
    if n == 0 {
        return Err(Error::BadGroup("S 0 is not supported".into()));
    }
    if n == 1 {
        return trivial_group();
    }
    let cycle = Perm((0..n as u8).map(|i| ((i as usize + 1) % n) as u8).collect());
    let mut sw: Vec<u8> = (0..n as u8).collect();
    sw.swap(0, 1);
    permutation_group(n, vec![cycle, Perm(sw)], format!("S {n}"))
}

fn alternating(n: usize) -> Result<Arc<FiniteGroup>> {
    if n < 3 {
        return trivial_group();
    }
    let mut gens = Vec::new();
    for i in 0..n - 2 {
        let mut img: Vec<u8> = (0..n as u8).collect();
        img[i] = i as u8 + 1;
        img[i + 1] = i as u8 + 2;
        img[i + 2] = i as u8;
        gens.push(Perm(img));
    }
    permutation_group(n, gens, format!("A {n}"))
}

fn quaternion8() -> Result<Arc<FiniteGroup>> {
    // 1, -1, i, -i, j, -j, k, -k with the usual relations.
    let names = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"];
    // encode: index/2 = axis (0=1, 1=i, 2=j, 3=k), index%2 = sign
    let table_axis = |a: usize, b: usize| -> (usize, usize) {
        // returns (axis, sign) of product of positive units
        match (a, b) {
            (0, x) => (x, 0),
            (x, 0) => (x, 0),
            (1, 1) => (0, 1),
            (2, 2) => (0, 1),
            (3, 3) => (0, 1),
            (1, 2) => (3, 0),
            (2, 1) => (3, 1),
            (2, 3) => (1, 0),
            (3, 2) => (1, 1),
            (3, 1) => (2, 0),
            (1, 3) => (2, 1),
            _ => unreachable!(),
        }
    };
    let n = 8;
    let mut mul = vec![0 as Elt; n * n];
    for a in 0..n {
        for b in 0..n {
            let (axa, sa) = (a / 2, a % 2);
            let (axb, sb) = (b / 2, b % 2);
            let (axis, sign) = table_axis(axa, axb);
            let s = (sa + sb + sign) % 2;
            mul[a * n + b] = (axis * 2 + s) as Elt;
        }
    }
    FiniteGroup::from_table(
        mul,
        names.iter().map(|s| s.to_string()).collect(),
        "Q8".into(),
    )
}

fn direct_product(a: &Arc<FiniteGroup>, b: &Arc<FiniteGroup>) -> Result<Arc<FiniteGroup>> {
    let (na, nb) = (a.order(), b.order());
    let n = na * nb;
    if n > MAX_ORDER {
        return Err(Error::BadGroup(format!(
            "product of orders {na} x {nb} exceeds the maximum {MAX_ORDER}"
        )));
    }
    let mut mul = vec![0 as Elt; n * n];
    let idx = |x: usize, y: usize| x * nb + y;
    for xa in 0..na {
        for ya in 0..nb {
            for xb in 0..na {
                for yb in 0..nb {
                    let px = a.mul(xa as Elt, xb as Elt) as usize;
                    let py = b.mul(ya as Elt, yb as Elt) as usize;
                    mul[idx(xa, ya) * n + idx(xb, yb)] = idx(px, py) as Elt;
                }
            }
        }
    }
    let mut names = Vec::with_capacity(n);
    for xa in 0..na {
        for ya in 0..nb {
            names.push(format!("({},{})", a.name(xa as Elt), b.name(ya as Elt)));
        }
    }
    let desc = format!("prod({},{})", a.description(), b.description());
    FiniteGroup::from_table(mul, names, desc)
}

/// Parse a group description:
/// `C n | D n | S n | A n | Q8 | prod(<spec>,<spec>) | perm: (a b c)(d e), ...`
pub fn make_group(spec: &str) -> Result<Arc<FiniteGroup>> {
    let s = spec.trim();
    if let Some(rest) = s.strip_prefix("perm:") {
        return parse_perm_group(rest);
    }
    if let Some(inner) = s.strip_prefix("prod(").and_then(|r| r.strip_suffix(')')) {
        let idx = split_top_level_comma(inner).ok_or_else(|| {
            Error::BadGroup(format!("prod spec needs two comma-separated parts: {s}"))
        })?;
        let left = make_group(&inner[..idx])?;
        let right = make_group(&inner[idx + 1..])?;
        return direct_product(&left, &right);
    }
    if s == "Q8" {
        return quaternion8();
    }
    let mut parts = s.split_whitespace();
    let kind = parts
        .next()
        .ok_or_else(|| Error::BadGroup("empty group spec".into()))?;
    let n: usize = parts
        .next()
        .ok_or_else(|| Error::BadGroup(format!("missing order in group spec `{s}`")))?
        .parse()
        .map_err(|_| Error::BadGroup(format!("bad number in group spec `{s}`")))?;
    if parts.next().is_some() {
        return Err(Error::BadGroup(format!(
            "trailing tokens in group spec `{s}`"
        )));
    }
    match kind {
        "C" => cyclic(n),
        "D" => dihedral(n),
        "S" => symmetric(n),
        "A" => alternating(n),
        _ => Err(Error::BadGroup(format!("unknown group kind `{kind}`"))),
    }
}

fn split_top_level_comma(s: &str) -> Option<usize> {
    let mut depth = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => return Some(i),
            _ => {}
        }
    }
    None
}

fn parse_perm_group(s: &str) -> Result<Arc<FiniteGroup>> {
    let mut gens_cycles: Vec<Vec<Vec<usize>>> = Vec::new();
    for gen_str in s.split(',') {
        let gen_str = gen_str.trim();
        if gen_str.is_empty() {
            continue;
        }
        let mut cycles = Vec::new();
        let mut rest = gen_str;
        while let Some(open) = rest.find('(') {
            let close = rest[open..]
                .find(')')
                .ok_or_else(|| Error::BadGroup(format!("unbalanced cycle in `{gen_str}`")))?
                + open;
            let body = &rest[open + 1..close];
            let pts: Vec<usize> = body
                .split_whitespace()
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| Error::BadGroup(format!("bad point `{t}` in `{gen_str}`")))
                })
                .collect::<Result<_>>()?;
            if pts.contains(&0) {
                return Err(Error::BadGroup("permutation points are 1-based".into()));
            }
            if pts.len() > 1 {
                cycles.push(pts);
            }
            rest = &rest[close + 1..];
        }
        if !rest.trim().is_empty() {
            return Err(Error::BadGroup(format!(
                "unparsed text `{}` in permutation spec",
                rest.trim()
            )));
        }
        gens_cycles.push(cycles);
    }
    if gens_cycles.is_empty() {
        return trivial_group();
    }
    let n_points = gens_cycles
        .iter()
        .flatten()
        .flatten()
        .copied()
        .max()
        .unwrap_or(1);
    if n_points > 255 {
        return Err(Error::BadGroup("permutation degree exceeds 255".into()));
    }
    let mut gens = Vec::new();
    for cycles in &gens_cycles {
        let mut img: Vec<u8> = (0..n_points as u8).collect();
        for cyc in cycles {
            // verify cycle is disjoint within the permutation text as given
            for w in 0..cyc.len() {
                let from = cyc[w] - 1;
                let to = cyc[(w + 1) % cyc.len()] - 1;
                img[from] = to as u8;
            }
        }
        // check bijectivity
        let mut seen = vec![false; n_points];
        for &x in &img {
            if seen[x as usize] {
                return Err(Error::BadGroup(
                    "permutation cycles are not disjoint".into(),
                ));
            }
            seen[x as usize] = true;
        }
        gens.push(Perm(img));
    }
    permutation_group(n_points, gens, format!("perm:{}", s.trim()))
}

// ---------------------------------------------------------------------------
// Subgroup services
// ---------------------------------------------------------------------------

fn p_part(mut n: usize, p: usize) -> usize {
    let mut out = 1;
    while n.is_multiple_of(p) {
        out *= p;
        n /= p;
    }
    out
}

/// A Sylow p-subgroup, deterministic: among all Sylow p-subgroups the one
/// with the lexicographically least element list.
pub fn sylow(group: &Arc<FiniteGroup>, p: usize) -> Subgroup {
    let target = p_part(group.order(), p);
    if target == 1 {
        return group.trivial_subgroup();
    }
    // normalizer climb: grow a p-subgroup one index-p step at a time
    let mut current = group.trivial_subgroup();
    while current.order() < target {
        let norm = normalizer(group, &current);
        let mut extended = None;
        for &x in norm.elements() {
            if current.contains(x) {
                continue;
            }
            // x of p-power order with x^p in current gives an extension
            let ord = group.element_order(x);
            if !is_p_power(ord, p) {
                continue;
            }
            let mut xp = x;
            for _ in 1..p {
                xp = group.mul(xp, x);
            }
            if !current.contains(xp) {
                continue;
            }
            let mut gens: Vec<Elt> = current.elements().to_vec();
            gens.push(x);
            let bigger = group.closure(&gens);
            if bigger.order() == current.order() * p {
                extended = Some(bigger);
                break;
            }
        }
        current = extended.expect("Sylow climb always extends below full order");
    }
    // canonicalize across conjugates
    canonical_conjugate(group, &current)
}

fn is_p_power(mut n: usize, p: usize) -> bool {
    while n.is_multiple_of(p) {
        n /= p;
    }
    n == 1
}

/// Least conjugate of a subgroup under the global element order.
pub fn canonical_conjugate(group: &Arc<FiniteGroup>, s: &Subgroup) -> Subgroup {
    let mut best = s.clone();
    for g in 0..group.order() as Elt {
        let c = s.conjugate(g);
        if c.elements() < best.elements() {
            best = c;
        }
    }
    best
}

/// Double coset representatives for K\G/H... in the (K, H) order `KgH`,
/// with the size of each double coset. Representatives are the least
/// element of their coset, listed in ascending order.
pub fn double_cosets(group: &Arc<FiniteGroup>, k: &Subgroup, h: &Subgroup) -> Vec<(Elt, usize)> {
    let n = group.order();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for g in 0..n as Elt {
        if seen[g as usize] {
            continue;
        }
        let mut size = 0;
        for &a in k.elements() {
            let ag = group.mul(a, g);
            for &b in h.elements() {
                let agb = group.mul(ag, b);
                if !seen[agb as usize] {
                    seen[agb as usize] = true;
                    size += 1;
                }
            }
        }
        out.push((g, size));
    }
    out
}

pub fn normalizer(group: &Arc<FiniteGroup>, s: &Subgroup) -> Subgroup {
    let elements: Vec<Elt> = (0..group.order() as Elt)
        .filter(|&g| s.elements().iter().all(|&x| s.contains(group.conj(g, x))))
        .collect();
    Subgroup::from_elements(group, elements)
}

pub fn centralizer(group: &Arc<FiniteGroup>, s: &Subgroup) -> Subgroup {
    let elements: Vec<Elt> = (0..group.order() as Elt)
        .filter(|&g| {
            s.elements()
                .iter()
                .all(|&x| group.mul(g, x) == group.mul(x, g))
        })
        .collect();
    Subgroup::from_elements(group, elements)
}

pub fn centralizer_of_element(group: &Arc<FiniteGroup>, a: Elt) -> Subgroup {
    let elements: Vec<Elt> = (0..group.order() as Elt)
        .filter(|&g| group.mul(g, a) == group.mul(a, g))
        .collect();
    Subgroup::from_elements(group, elements)
}

/// Product set PC of a subgroup P and the centralizer C = C_G(P); this is a
/// subgroup because C normalizes P.
pub fn product_subgroup(group: &Arc<FiniteGroup>, a: &Subgroup, b: &Subgroup) -> Subgroup {
    let mut mask = vec![false; group.order()];
    for &x in a.elements() {
        for &y in b.elements() {
            mask[group.mul(x, y) as usize] = true;
        }
    }
    let elements: Vec<Elt> = (0..group.order() as Elt)
        .filter(|&e| mask[e as usize])
        .collect();
    Subgroup::from_elements(group, elements)
}

/// All subgroups of `p_sub` (a small subgroup, |P| <= 64), by closure of
/// generator sets. Sorted by (order, element list).
pub fn subgroups_of(group: &Arc<FiniteGroup>, p_sub: &Subgroup) -> Vec<Subgroup> {
    assert!(
        p_sub.order() <= 64,
        "subgroup enumeration capped at order 64"
    );
    let mut found: Vec<Subgroup> = vec![group.trivial_subgroup()];
    let mut seen: Vec<Vec<Elt>> = vec![found[0].elements().to_vec()];
    let mut head = 0;
    while head < found.len() {
        let cur = found[head].clone();
        head += 1;
        for &x in p_sub.elements() {
            if cur.contains(x) {
                continue;
            }
            let mut gens: Vec<Elt> = cur.elements().to_vec();
            gens.push(x);
            let bigger = group.closure(&gens);
            if !bigger.is_subgroup_of(p_sub) {
                continue;
            }
            let elems = bigger.elements().to_vec();
            if !seen.contains(&elems) {
                seen.push(elems);
                found.push(bigger);
            }
        }
    }
    found.sort_by(|a, b| (a.order(), a.elements()).cmp(&(b.order(), b.elements())));
    found
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c2_basics() {
        let g = make_group("C 2").unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(g.mul(1, 1), 0);
        assert_eq!(g.name(0), "e");
    }

    #[test]
    fn s3_classes_and_order() {
        let g = make_group("S 3").unwrap();
        assert_eq!(g.order(), 6);
        // derived oracle: enumerate classes by exhaustive conjugation
        let classes = g.conjugacy_classes();
        assert_eq!(classes.len(), 3);
        let mut sizes: Vec<usize> = classes.iter().map(|c| c.len()).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 2, 3]);
    }

    #[test]
    fn a4_derived_subgroup() {
        let g = make_group("A 4").unwrap();
        assert_eq!(g.order(), 12);
        // exhaustive commutator enumeration
        let mut comms = Vec::new();
        for a in 0..12 as Elt {
            for b in 0..12 as Elt {
                let c = g.mul(g.mul(a, b), g.mul(g.inv(a), g.inv(b)));
                if !comms.contains(&c) {
                    comms.push(c);
                }
            }
        }
        let derived = g.closure(&comms);
        assert_eq!(derived.order(), 4);
    }

    #[test]
    fn sylow_orders() {
        let s3 = make_group("S 3").unwrap();
        assert_eq!(sylow(&s3, 3).order(), 3);
        assert_eq!(sylow(&s3, 2).order(), 2);
        let s4 = make_group("S 4").unwrap();
        assert_eq!(sylow(&s4, 2).order(), 8);
        assert_eq!(sylow(&s4, 3).order(), 3);
        let c2 = make_group("C 2").unwrap();
        assert_eq!(sylow(&c2, 3).order(), 1);
    }

    #[test]
    fn sylow_p_part_property() {
        for spec in ["C 4", "S 3", "S 4", "A 4", "D 8", "D 12", "Q8"] {
            let g = make_group(spec).unwrap();
            for p in [2usize, 3, 5] {
                let s = sylow(&g, p);
                assert_eq!(
                    s.order(),
                    p_part(g.order(), p),
                    "sylow order for {spec} at {p}"
                );
            }
        }
    }

    #[test]
    fn double_coset_partition() {
        let g = make_group("S 3").unwrap();
        // K = H = <(12)>
        let t = (0..6 as Elt).find(|&e| g.name(e) == "(12)").unwrap();
        let k = g.closure(&[t]);
        let dc = double_cosets(&g, &k, &k);
        assert_eq!(dc.len(), 2);
        let mut sizes: Vec<usize> = dc.iter().map(|&(_, s)| s).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![2, 4]);
        // trivial cases
        let full = g.full_subgroup();
        assert_eq!(double_cosets(&g, &full, &full).len(), 1);
        let triv = g.trivial_subgroup();
        assert_eq!(double_cosets(&g, &triv, &triv).len(), 6);
        // union covers G exactly once
        let total: usize = dc.iter().map(|&(_, s)| s).sum();
        assert_eq!(total, 6);
    }

    #[test]
    fn normalizer_centralizer() {
        let s3 = make_group("S 3").unwrap();
        let p3 = sylow(&s3, 3);
        let c = centralizer(&s3, &p3);
        assert_eq!(c.elements(), p3.elements());
        let a4 = make_group("A 4").unwrap();
        let v4 = sylow(&a4, 2);
        let n = normalizer(&a4, &v4);
        assert_eq!(n.order(), 12); // V4 normal in A4
        let triv = s3.trivial_subgroup();
        assert_eq!(centralizer(&s3, &triv).order(), 6);
        // C_G(S) normal in N_G(S), |N| divides |G|
        for spec in ["S 3", "S 4", "D 8", "Q8"] {
            let g = make_group(spec).unwrap();
            for p in [2usize, 3] {
                let s = sylow(&g, p);
                let n = normalizer(&g, &s);
                let c = centralizer(&g, &s);
                assert!(c.is_subgroup_of(&n));
                assert_eq!(g.order() % n.order(), 0);
                // normality of C in N
                for &x in n.elements() {
                    for &y in c.elements() {
                        assert!(c.contains(g.conj(x, y)));
                    }
                }
            }
        }
    }

    #[test]
    fn double_coset_sizes_sum() {
        for spec in ["S 3", "S 4", "A 4", "D 8", "D 12", "Q8", "C 4"] {
            let g = make_group(spec).unwrap();
            for p in [2usize, 3] {
                let s = sylow(&g, p);
                let dc = double_cosets(&g, &s, &s);
                let total: usize = dc.iter().map(|&(_, sz)| sz).sum();
                assert_eq!(total, g.order(), "double cosets partition {spec}");
            }
        }
    }

    #[test]
    fn builtin_orders() {
        for (spec, order) in [
            ("C 2", 2usize),
            ("C 3", 3),
            ("C 4", 4),
            ("prod(C 2,C 2)", 4),
            ("S 3", 6),
            ("D 8", 8),
            ("Q8", 8),
            ("A 4", 12),
            ("D 12", 12),
            ("S 4", 24),
        ] {
            let g = make_group(spec).unwrap();
            assert_eq!(g.order(), order, "{spec}");
        }
    }

    #[test]
    fn perm_spec_parsing() {
        let g = make_group("perm: (1 2 3)(4 5), (1 2)").unwrap();
        assert_eq!(g.order() % 6, 0);
        assert!(make_group("perm: (1 2 3").is_err());
        assert!(make_group("X 5").is_err());
        assert!(make_group("C x").is_err());
    }

    #[test]
    fn oversize_rejected() {
        assert!(make_group("S 6").is_err()); // 720 > 512
    }

    #[test]
    fn q8_structure() {
        let g = make_group("Q8").unwrap();
        assert_eq!(g.order(), 8);
        // i * j = k
        let i = (0..8 as Elt).find(|&e| g.name(e) == "i").unwrap();
        let j = (0..8 as Elt).find(|&e| g.name(e) == "j").unwrap();
        let k = (0..8 as Elt).find(|&e| g.name(e) == "k").unwrap();
        assert_eq!(g.mul(i, j), k);
        assert_eq!(g.element_order(i), 4);
        // unique element of order 2
        let order2: Vec<Elt> = (0..8 as Elt).filter(|&e| g.element_order(e) == 2).collect();
        assert_eq!(order2.len(), 1);
    }

    #[test]
    fn subgroup_enumeration_d8() {
        let g = make_group("D 8").unwrap();
        let full = g.full_subgroup();
        let subs = subgroups_of(&g, &full);
        assert_eq!(subs.len(), 10); // D8 has 10 subgroups
    }

    #[test]
    fn subgroup_as_group_roundtrip() {
        let g = make_group("S 4").unwrap();
        let p = sylow(&g, 2);
        let view = p.as_group();
        assert_eq!(view.group.order(), 8);
        for i in 0..8 as Elt {
            for j in 0..8 as Elt {
                let prod_view = view.group.mul(i, j);
                let prod_parent = g.mul(view.to_parent[i as usize], view.to_parent[j as usize]);
                assert_eq!(view.to_parent[prod_view as usize], prod_parent);
            }
        }
    }

    #[test]
    fn exponent_values() {
        assert_eq!(make_group("S 3").unwrap().exponent(), 6);
        assert_eq!(make_group("Q8").unwrap().exponent(), 4);
        assert_eq!(make_group("S 4").unwrap().exponent(), 12);
    }
}

//! Block theory of kG: block idempotents, the Brauer homomorphism, defect
//! groups, source idempotents, the double-coset multiset describing the
//! source algebra as a bimodule, Brauer pairs, fusion systems and Brauer
//! correspondents.
//!
//! All choices are deterministic: block lists follow the primitive
//! decomposition order, defect groups are the least conjugate, the source
//! idempotent is the lexicographically least primitive with nonzero Brauer
//! image, and double-coset data is keyed to least representatives.

use std::collections::HashMap;
use std::sync::Arc;

use crate::algebra::{self, algebra_from_spanning, TrackedSpan};
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::group::{
    self, centralizer, double_cosets, normalizer, subgroups_of, sylow, Elt, FiniteGroup, Subgroup,
};
use crate::matrix::Subspace;

/// The group algebra kG; elements are coefficient vectors indexed by group
/// elements. Carries the symmetrizing form (coefficient of the identity).
#[derive(Clone, Debug)]
pub struct GroupAlgebra {
    pub group: Arc<FiniteGroup>,
    pub field: Arc<Field>,
}

impl GroupAlgebra {
    pub fn new(group: &Arc<FiniteGroup>, field: &Arc<Field>) -> GroupAlgebra {
        GroupAlgebra {
            group: group.clone(),
            field: field.clone(),
        }
    }

    pub fn dim(&self) -> usize {
        self.group.order()
    }

    pub fn zero(&self) -> Vec<Scalar> {
        vec![0; self.dim()]
    }

    pub fn one(&self) -> Vec<Scalar> {
        let mut v = self.zero();
        v[0] = 1;
        v
    }

    pub fn basis_elt(&self, g: Elt) -> Vec<Scalar> {
        let mut v = self.zero();
        v[g as usize] = 1;
        v
    }

    pub fn mul(&self, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        let f = &self.field;
        let g = &self.group;
        let mut out = self.zero();
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                if y == 0 {
                    continue;
                }
                let k = g.mul(i as Elt, j as Elt) as usize;
                out[k] = f.add(out[k], f.mul(x, y));
            }
        }
        out
    }

    pub fn add(&self, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        let f = &self.field;
        a.iter().zip(b).map(|(&x, &y)| f.add(x, y)).collect()
    }

    pub fn sub(&self, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        let f = &self.field;
        a.iter().zip(b).map(|(&x, &y)| f.sub(x, y)).collect()
    }

    /// Symmetrizing form: the coefficient of the identity.
    pub fn sym_form(&self, a: &[Scalar]) -> Scalar {
        a[0]
    }

    /// Augmentation: the sum of all coefficients.
    pub fn augmentation(&self, a: &[Scalar]) -> Scalar {
        let f = &self.field;
        a.iter().fold(0, |acc, &x| f.add(acc, x))
    }

    /// g a g^{-1}, coefficientwise.
    pub fn conj_element(&self, g: Elt, a: &[Scalar]) -> Vec<Scalar> {
        let grp = &self.group;
        let mut out = self.zero();
        for (i, &x) in a.iter().enumerate() {
            if x != 0 {
                out[grp.conj(g, i as Elt) as usize] = x;
            }
        }
        out
    }

    pub fn is_fixed_by(&self, a: &[Scalar], s: &Subgroup) -> bool {
        s.elements().iter().all(|&u| self.conj_element(u, a) == a)
    }

    pub fn is_central(&self, a: &[Scalar]) -> bool {
        (0..self.group.order() as Elt).all(|g| self.conj_element(g, a) == a)
    }

    /// Class sums, one per conjugacy class, in class order.
    pub fn class_sums(&self) -> Vec<Vec<Scalar>> {
        self.group
            .conjugacy_classes()
            .iter()
            .map(|class| {
                let mut v = self.zero();
                for &e in class {
                    v[e as usize] = 1;
                }
                v
            })
            .collect()
    }
}

/// Splitting field GF(p^m) for G and all its subgroups: m is the
/// multiplicative order of p modulo the p'-part of the exponent of G.
pub fn splitting_field(group: &Arc<FiniteGroup>, p: u32) -> Result<Arc<Field>> {
    let mut e = group.exponent();
    while e.is_multiple_of(p as usize) {
        e /= p as usize;
    }
    let mut m = 1u32;
    if e > 1 {
        let mut pow = p as usize % e;
        while pow != 1 {
            pow = pow * (p as usize % e) % e;
            m += 1;
        }
    }
    Field::new(p, m)
}

/// A block of kG: central primitive idempotent with its defect group
/// (canonical representative) and principal flag.
#[derive(Clone, Debug)]
pub struct Block {
    pub index: usize,
    pub idempotent: Vec<Scalar>,
    pub defect: Subgroup,
    pub principal: bool,
}

impl Block {
    pub fn defect_order(&self) -> usize {
        self.defect.order()
    }
}

/// Block idempotents of kG over the given splitting field, with defect
/// groups attached and the principal block identified.
pub fn block_idempotents(group: &Arc<FiniteGroup>, field: &Arc<Field>) -> Result<Vec<Block>> {
    let ga = GroupAlgebra::new(group, field);
    let sums = ga.class_sums();
    let (center, basis) =
        algebra_from_spanning(field, ga.dim(), &sums, &ga.one(), |x, y| ga.mul(x, y))?;
    let prims = algebra::primitive_decomposition(&center, center.unit())?;
    let p = field.characteristic();
    let classes = p_subgroup_classes(group, p as usize);
    let mut blocks = Vec::new();
    let mut principal_count = 0;
    for (index, pr) in prims.iter().enumerate() {
        // expand center coordinates to kG coordinates
        let mut idem = ga.zero();
        for (j, &c) in pr.iter().enumerate() {
            if c != 0 {
                for (k, &bv) in basis[j].iter().enumerate() {
                    if bv != 0 {
                        idem[k] = field.add(idem[k], field.mul(c, bv));
                    }
                }
            }
        }
        let principal = ga.augmentation(&idem) != 0;
        if principal {
            principal_count += 1;
            if ga.augmentation(&idem) != 1 {
                return Err(Error::Inconsistent(
                    "principal block has augmentation other than 1".into(),
                ));
            }
        }
        let defect = defect_group_scan(&ga, &idem, &classes)?;
        blocks.push(Block {
            index,
            idempotent: idem,
            defect,
            principal,
        });
    }
    if principal_count != 1 {
        return Err(Error::Inconsistent(format!(
            "expected exactly one principal block, found {principal_count}"
        )));
    }
    Ok(blocks)
}

/// Brauer homomorphism: truncate a Q-fixed element to the coefficients
/// supported on the centralizer of Q. Errors on non-Q-fixed input.
pub fn brauer_hom(ga: &GroupAlgebra, a: &[Scalar], q: &Subgroup) -> Result<Vec<Scalar>> {
    if !ga.is_fixed_by(a, q) {
        return Err(Error::Precondition(
            "element is not fixed under conjugation by the subgroup".into(),
        ));
    }
    let c = centralizer(&ga.group, q);
    let mut out = ga.zero();
    for &e in c.elements() {
        out[e as usize] = a[e as usize];
    }
    Ok(out)
}

/// Conjugacy-class representatives of the p-subgroups of one fixed Sylow
/// p-subgroup, canonical (least conjugate), sorted by descending order then
/// ascending element list.
pub fn p_subgroup_classes(group: &Arc<FiniteGroup>, p: usize) -> Vec<Subgroup> {
    let syl = sylow(group, p);
    let subs = subgroups_of(group, &syl);
    let mut reps: Vec<Subgroup> = Vec::new();
    let mut seen: Vec<Vec<Elt>> = Vec::new();
    for s in subs {
        let canon = group::canonical_conjugate(group, &s);
        if !seen.contains(&canon.elements().to_vec()) {
            seen.push(canon.elements().to_vec());
            reps.push(canon);
        }
    }
    reps.sort_by(|a, b| {
        (std::cmp::Reverse(a.order()), a.elements())
            .cmp(&(std::cmp::Reverse(b.order()), b.elements()))
    });
    reps
}

fn defect_group_scan(ga: &GroupAlgebra, idem: &[Scalar], classes: &[Subgroup]) -> Result<Subgroup> {
    for q in classes {
        let br = brauer_hom(ga, idem, q)?;
        if br.iter().any(|&c| c != 0) {
            return Ok(q.clone());
        }
    }
    Err(Error::Inconsistent(
        "no p-subgroup with nonzero Brauer image; even the trivial subgroup failed".into(),
    ))
}

/// Defect group of a block (attached at construction).
pub fn defect_group(block: &Block) -> &Subgroup {
    &block.defect
}

// ---------------------------------------------------------------------------
// Source idempotents and the double-coset multiset
// ---------------------------------------------------------------------------

/// One merged entry of the double-coset multiset: all double cosets whose
/// twisted-diagonal vertices are conjugate share one entry.
#[derive(Clone, Debug)]
pub struct YEntry {
    /// least double-coset representative in the merged class
    pub rep: Elt,
    pub multiplicity: usize,
    /// |P g P| (equal across the merged class)
    pub coset_size: usize,
    /// |P meet gPg^{-1}|
    pub intersection_order: usize,
    /// all double-coset representatives merged into this entry
    pub members: Vec<Elt>,
}

/// Source idempotent data for a block: the idempotent i, a basis of the
/// source algebra ikGi, the multiset Y with multiplicities, Brauer pairs
/// for every subgroup of the defect group, and the fusion system.
#[derive(Clone, Debug)]
pub struct SourceData {
    pub algebra: GroupAlgebra,
    pub block: Block,
    /// source idempotent i in (kGb)^{Delta P}
    pub i: Vec<Scalar>,
    /// basis of i kG i, vectors in kG
    pub ikgi_basis: Vec<Vec<Scalar>>,
    pub y: Vec<YEntry>,
    /// subgroups of P (all of them, sorted) with their Brauer-pair blocks e_R
    pub pairs: Vec<(Subgroup, Vec<Scalar>)>,
    /// N_G(P, e_P)
    pub stabilizer: Subgroup,
    /// P * C_G(P)
    pub pc: Subgroup,
    pub fusion: FusionSystem,
}

impl SourceData {
    pub fn defect(&self) -> &Subgroup {
        &self.block.defect
    }

    pub fn dim_source_algebra(&self) -> usize {
        self.ikgi_basis.len()
    }

    pub fn pair_for(&self, r: &Subgroup) -> Option<&Vec<Scalar>> {
        self.pairs
            .iter()
            .find(|(s, _)| s.elements() == r.elements())
            .map(|(_, e)| e)
    }
}

/// Compute the source idempotent and everything downstream of it.
pub fn source_data(ga: &GroupAlgebra, block: &Block) -> Result<SourceData> {
    let group = &ga.group;
    let field = &ga.field;
    let p_sub = &block.defect;

    // fixed-point algebra (kGb)^{Delta P}: spanned by b * (P-orbit sums)
    let orbits = conjugation_orbits(group, p_sub);
    let mut spanning = Vec::with_capacity(orbits.len());
    for orbit in &orbits {
        let mut v = ga.zero();
        for &e in orbit {
            v[e as usize] = 1;
        }
        spanning.push(ga.mul(&block.idempotent, &v));
    }
    let (fixed_alg, fixed_basis) =
        algebra_from_spanning(field, ga.dim(), &spanning, &block.idempotent, |x, y| {
            ga.mul(x, y)
        })?;
    let prims = algebra::primitive_decomposition(&fixed_alg, fixed_alg.unit())?;
    // expand to kG coordinates and keep those with nonzero Brauer image at P
    let mut candidates: Vec<Vec<Scalar>> = Vec::new();
    for pr in &prims {
        let mut v = ga.zero();
        for (j, &c) in pr.iter().enumerate() {
            if c != 0 {
                for (k, &bv) in fixed_basis[j].iter().enumerate() {
                    if bv != 0 {
                        v[k] = field.add(v[k], field.mul(c, bv));
                    }
                }
            }
        }
        let br = brauer_hom(ga, &v, p_sub)?;
        if br.iter().any(|&c| c != 0) {
            candidates.push(v);
        }
    }
    candidates.sort();
    let i = candidates.into_iter().next().ok_or_else(|| {
        Error::Inconsistent(
            "no primitive fixed-point idempotent has nonzero Brauer image; defect group is wrong"
                .into(),
        )
    })?;

    // basis of i kG i
    let mut span = TrackedSpan::new(field, ga.dim());
    let mut ikgi_basis = Vec::new();
    for g in 0..group.order() as Elt {
        let v = ga.mul(&ga.mul(&i, &ga.basis_elt(g)), &i);
        if span.insert(&v) {
            ikgi_basis.push(v);
        }
    }

    // Brauer pairs for all subgroups of P
    let subs = subgroups_of(group, p_sub);
    let mut pairs = Vec::with_capacity(subs.len());
    for r in &subs {
        let e_r = brauer_pair_block(ga, &i, r)?;
        pairs.push((r.clone(), e_r));
    }

    // N_G(P, e_P) and P C_G(P)
    let e_p = pairs
        .iter()
        .find(|(s, _)| s.elements() == p_sub.elements())
        .map(|(_, e)| e.clone())
        .expect("P itself is among its subgroups");
    let n_p = normalizer(group, p_sub);
    let stab_elements: Vec<Elt> = n_p
        .elements()
        .iter()
        .copied()
        .filter(|&x| ga.conj_element(x, &e_p) == e_p)
        .collect();
    let stabilizer = Subgroup::from_elements(group, stab_elements);
    let c_p = centralizer(group, p_sub);
    let pc = group::product_subgroup(group, p_sub, &c_p);

    let fusion = fusion_system(ga, &subs, &pairs, p_sub)?;

    let y = y_multiset(ga, p_sub, &ikgi_basis)?;

    let sd = SourceData {
        algebra: ga.clone(),
        block: block.clone(),
        i,
        ikgi_basis,
        y,
        pairs,
        stabilizer,
        pc,
        fusion,
    };
    verify_y_invariants(&sd)?;
    Ok(sd)
}

/// Orbits of P acting on G by conjugation, listed by least member.
fn conjugation_orbits(group: &Arc<FiniteGroup>, p_sub: &Subgroup) -> Vec<Vec<Elt>> {
    let n = group.order();
    let mut seen = vec![false; n];
    let mut orbits = Vec::new();
    for x in 0..n as Elt {
        if seen[x as usize] {
            continue;
        }
        let mut orbit = Vec::new();
        let mut stack = vec![x];
        seen[x as usize] = true;
        while let Some(e) = stack.pop() {
            orbit.push(e);
            for &u in p_sub.elements() {
                let c = group.conj(u, e);
                if !seen[c as usize] {
                    seen[c as usize] = true;
                    stack.push(c);
                }
            }
        }
        orbit.sort_unstable();
        orbits.push(orbit);
    }
    orbits
}

/// The unique block e_R of k C_G(R) with Br_R(i) e_R != 0.
pub fn brauer_pair_block(ga: &GroupAlgebra, i: &[Scalar], r: &Subgroup) -> Result<Vec<Scalar>> {
    let group = &ga.group;
    let field = &ga.field;
    let br_i = brauer_hom(ga, i, r)?;
    let c = centralizer(group, r);
    let view = c.as_group();
    let c_blocks = block_idempotents(&view.group, field)?;
    let mut hits = Vec::new();
    for b in &c_blocks {
        // block idempotent of kC mapped into kG coordinates
        let mut e_vec = ga.zero();
        for (vi, &coeff) in b.idempotent.iter().enumerate() {
            if coeff != 0 {
                e_vec[view.to_parent[vi] as usize] = coeff;
            }
        }
        let prod = ga.mul(&br_i, &e_vec);
        if prod.iter().any(|&x| x != 0) {
            hits.push(e_vec);
        }
    }
    match hits.len() {
        1 => Ok(hits.pop().unwrap()),
        n => Err(Error::Inconsistent(format!(
            "expected exactly one block of the centralizer to survive, found {n}"
        ))),
    }
}

// ---------------------------------------------------------------------------
// Fusion systems
// ---------------------------------------------------------------------------

/// The fusion category on the subgroups of P: morphisms Q -> R are the
/// conjugation maps c_x with x in G carrying the Brauer pair of Q into the
/// pair of its image. Morphisms are stored as image lists over the sorted
/// source elements.
#[derive(Clone, Debug)]
pub struct FusionSystem {
    pub base: Subgroup,
    pub subgroups: Vec<Subgroup>,
    /// morphisms[source][target] = set of maps, each an image list
    pub morphisms: Vec<Vec<Vec<Vec<Elt>>>>,
}

impl FusionSystem {
    pub fn subgroup_index(&self, s: &Subgroup) -> Option<usize> {
        self.subgroups
            .iter()
            .position(|t| t.elements() == s.elements())
    }

    pub fn hom(&self, source: usize, target: usize) -> &[Vec<Elt>] {
        &self.morphisms[source][target]
    }

    /// Is every morphism of `other` (a fusion system whose base is a
    /// subgroup of this base) also a morphism here?
    pub fn contains_system(&self, other: &FusionSystem) -> bool {
        for (si, s) in other.subgroups.iter().enumerate() {
            for (ti, t) in other.subgroups.iter().enumerate() {
                let Some(my_s) = self.subgroup_index(s) else {
                    return false;
                };
                let Some(my_t) = self.subgroup_index(t) else {
                    return false;
                };
                let mine = &self.morphisms[my_s][my_t];
                for m in &other.morphisms[si][ti] {
                    if !mine.contains(m) {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn morphism_count(&self) -> usize {
        self.morphisms
            .iter()
            .flat_map(|row| row.iter())
            .map(|m| m.len())
            .sum()
    }
}

fn fusion_system(
    ga: &GroupAlgebra,
    subs: &[Subgroup],
    pairs: &[(Subgroup, Vec<Scalar>)],
    base: &Subgroup,
) -> Result<FusionSystem> {
    let group = &ga.group;
    let pair_by_elements: HashMap<&[Elt], &Vec<Scalar>> =
        pairs.iter().map(|(s, e)| (s.elements(), e)).collect();
    let k = subs.len();
    let mut morphisms = vec![vec![Vec::new(); k]; k];
    for (si, q) in subs.iter().enumerate() {
        for x in 0..group.order() as Elt {
            let mut img: Vec<Elt> = q.elements().iter().map(|&u| group.conj(x, u)).collect();
            img.sort_unstable();
            if !img.iter().all(|&e| base.contains(e)) {
                continue;
            }
            let Some(&e_img) = pair_by_elements.get(img.as_slice()) else {
                return Err(Error::Inconsistent(
                    "conjugate of a subgroup of P inside P is missing from the subgroup list"
                        .into(),
                ));
            };
            let e_q = pair_by_elements[q.elements()];
            // pair compatibility: ^x e_Q = e_{^x Q}
            if &ga.conj_element(x, e_q) != e_img {
                continue;
            }
            let graph: Vec<Elt> = q.elements().iter().map(|&u| group.conj(x, u)).collect();
            for (ti, r) in subs.iter().enumerate() {
                if img.iter().all(|&e| r.contains(e)) && !morphisms[si][ti].contains(&graph) {
                    morphisms[si][ti].push(graph.clone());
                }
            }
        }
        for row in morphisms[si].iter_mut() {
            row.sort();
        }
    }
    Ok(FusionSystem {
        base: base.clone(),
        subgroups: subs.to_vec(),
        morphisms,
    })
}

/// Conjugation maps available inside a chosen subgroup N (with P <= N): the
/// fusion system on P given by N-conjugation. Used for the
/// normalizer-control classification.
pub fn fusion_in_subgroup(
    group: &Arc<FiniteGroup>,
    subs: &[Subgroup],
    base: &Subgroup,
    n: &Subgroup,
) -> FusionSystem {
    let k = subs.len();
    let mut morphisms = vec![vec![Vec::new(); k]; k];
    for (si, q) in subs.iter().enumerate() {
        for &x in n.elements() {
            let mut img: Vec<Elt> = q.elements().iter().map(|&u| group.conj(x, u)).collect();
            img.sort_unstable();
            if !img.iter().all(|&e| base.contains(e)) {
                continue;
            }
            let graph: Vec<Elt> = q.elements().iter().map(|&u| group.conj(x, u)).collect();
            for (ti, r) in subs.iter().enumerate() {
                if img.iter().all(|&e| r.contains(e)) && !morphisms[si][ti].contains(&graph) {
                    morphisms[si][ti].push(graph.clone());
                }
            }
        }
        for row in morphisms[si].iter_mut() {
            row.sort();
        }
    }
    FusionSystem {
        base: base.clone(),
        subgroups: subs.to_vec(),
        morphisms,
    }
}

// ---------------------------------------------------------------------------
// The Y multiset via the Brauer construction
// ---------------------------------------------------------------------------

/// Pairs (u, v) acting on kG by x -> u x v^{-1}; a twisted diagonal
/// subgroup of P x P is represented by its pair list.
type PairSub = Vec<(Elt, Elt)>;

/// Twisted-diagonal vertex of the double coset P g P: all (g s g^{-1}, s)
/// with s in P meet g^{-1} P g (the stabilizer of the point g).
fn coset_vertex(group: &Arc<FiniteGroup>, p_sub: &Subgroup, g: Elt) -> (PairSub, Subgroup) {
    let gi = group.inv(g);
    let s_elems: Vec<Elt> = p_sub
        .elements()
        .iter()
        .copied()
        .filter(|&s| p_sub.contains(group.conj(gi, s)))
        .collect();
    let s_sub = Subgroup::from_elements(group, s_elems);
    let pairs: PairSub = s_sub
        .elements()
        .iter()
        .map(|&s| (group.conj(g, s), s))
        .collect();
    (pairs, s_sub)
}

fn pair_conjugate(group: &Arc<FiniteGroup>, pairs: &PairSub, a: Elt, b: Elt) -> PairSub {
    let mut out: PairSub = pairs
        .iter()
        .map(|&(u, v)| (group.conj(a, u), group.conj(b, v)))
        .collect();
    out.sort_unstable();
    out
}

fn pairs_conjugate_in_pxp(
    group: &Arc<FiniteGroup>,
    p_sub: &Subgroup,
    x: &PairSub,
    y: &PairSub,
) -> bool {
    if x.len() != y.len() {
        return false;
    }
    let mut ys = y.clone();
    ys.sort_unstable();
    for &a in p_sub.elements() {
        for &b in p_sub.elements() {
            if pair_conjugate(group, x, a, b) == ys {
                return true;
            }
        }
    }
    false
}

/// Dimension of the Brauer construction M(R) = M^R / sum of relative traces
/// from the maximal proper subgroups of R, for M a P x P stable subspace of
/// kG given by a basis. The twisted diagonal R is parameterized by its
/// untwisted side (a subgroup of P) and the twisting element g.
fn brauer_quotient_dim(
    ga: &GroupAlgebra,
    basis: &[Vec<Scalar>],
    vertex_sub: &Subgroup,
    g: Elt,
) -> Result<usize> {
    let group = &ga.group;
    let field = &ga.field;
    let m = basis.len();
    let mut span = TrackedSpan::new(field, ga.dim());
    for v in basis {
        span.insert(v);
    }
    let act = |u: Elt, v: Elt, vec: &[Scalar]| -> Vec<Scalar> {
        let vinv = group.inv(v);
        let mut out = ga.zero();
        for (i, &c) in vec.iter().enumerate() {
            if c != 0 {
                let target = group.mul(group.mul(u, i as Elt), vinv) as usize;
                out[target] = c;
            }
        }
        out
    };
    // fixed points of the twisted action of a subgroup S' (pairs (gsg^-1, s))
    let fixed_space = |s_prime: &Subgroup| -> Result<Vec<Vec<Scalar>>> {
        let pairs: PairSub = s_prime
            .elements()
            .iter()
            .map(|&s| (group.conj(g, s), s))
            .collect();
        let n_conditions = pairs.len();
        let mut mat = crate::matrix::DenseMatrix::zeros(field, n_conditions * m, m);
        for (pi, &(u, v)) in pairs.iter().enumerate() {
            for (j, b) in basis.iter().enumerate() {
                let img = act(u, v, b);
                let mut coords = span.express(&img).ok_or_else(|| {
                    Error::Inconsistent("source algebra is not stable under P x P".into())
                })?;
                coords[j] = field.sub(coords[j], 1);
                for (coord, &val) in coords.iter().enumerate() {
                    if val != 0 {
                        mat.set(pi * m + coord, j, val);
                    }
                }
            }
        }
        Ok(mat.nullspace())
    };
    let top_fixed = fixed_space(vertex_sub)?;
    let top = Subspace::from_vectors(field, m, &top_fixed);
    let p = field.characteristic() as usize;
    let all_subs = subgroups_of(group, vertex_sub);
    let maximals: Vec<&Subgroup> = all_subs
        .iter()
        .filter(|s| s.order() * p == vertex_sub.order())
        .collect();
    let mut trace_span = Subspace::empty(field, m);
    for ms in maximals {
        let sub_fixed = fixed_space(ms)?;
        let reps: Vec<Elt> = coset_reps_in(group, vertex_sub, ms);
        for x in &sub_fixed {
            let mut amb = ga.zero();
            for (j, &c) in x.iter().enumerate() {
                if c != 0 {
                    for (k, &bv) in basis[j].iter().enumerate() {
                        if bv != 0 {
                            amb[k] = field.add(amb[k], field.mul(c, bv));
                        }
                    }
                }
            }
            let mut total = ga.zero();
            for &w in &reps {
                let img = act(group.conj(g, w), w, &amb);
                total = ga.add(&total, &img);
            }
            let coords = span
                .express(&total)
                .ok_or_else(|| Error::Inconsistent("trace image escapes the module".into()))?;
            trace_span.insert(&coords);
        }
    }
    for row in trace_span.basis() {
        if !top.contains(row) {
            return Err(Error::Inconsistent(
                "relative trace image is not fixed".into(),
            ));
        }
    }
    Ok(top.dim() - trace_span.dim())
}

/// Left coset representatives of `small` inside `big`.
fn coset_reps_in(group: &Arc<FiniteGroup>, big: &Subgroup, small: &Subgroup) -> Vec<Elt> {
    let mut seen: HashMap<Elt, ()> = HashMap::new();
    let mut reps = Vec::new();
    for &x in big.elements() {
        if seen.contains_key(&x) {
            continue;
        }
        reps.push(x);
        for &h in small.elements() {
            seen.insert(group.mul(x, h), ());
        }
    }
    reps
}

/// Multiplicities of the double-coset bimodule summands of i kG i, solved
/// from the Brauer-quotient mark system. Double cosets with P x P conjugate
/// vertices are merged onto the least stored representative.
pub fn y_multiset(
    ga: &GroupAlgebra,
    p_sub: &Subgroup,
    ikgi_basis: &[Vec<Scalar>],
) -> Result<Vec<YEntry>> {
    let group = &ga.group;
    let dc = double_cosets(group, p_sub, p_sub);
    struct CosetData {
        rep: Elt,
        size: usize,
        pairs: PairSub,
        s_sub: Subgroup,
    }
    let cosets: Vec<CosetData> = dc
        .iter()
        .map(|&(g, size)| {
            let (pairs, s_sub) = coset_vertex(group, p_sub, g);
            CosetData {
                rep: g,
                size,
                pairs,
                s_sub,
            }
        })
        .collect();
    // merge into vertex-conjugacy classes
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (ci, c) in cosets.iter().enumerate() {
        let mut placed = false;
        for class in classes.iter_mut() {
            let rep = &cosets[class[0]];
            if rep.pairs.len() == c.pairs.len()
                && pairs_conjugate_in_pxp(group, p_sub, &c.pairs, &rep.pairs)
            {
                class.push(ci);
                placed = true;
                break;
            }
        }
        if !placed {
            classes.push(vec![ci]);
        }
    }
    classes.sort_by_key(|class| {
        (
            std::cmp::Reverse(cosets[class[0]].pairs.len()),
            cosets[class[0]].rep,
        )
    });
    let coset_elements = |rep: Elt| -> Vec<Elt> {
        let mut mask = vec![false; group.order()];
        for &u in p_sub.elements() {
            let urep = group.mul(u, rep);
            for &v in p_sub.elements() {
                mask[group.mul(urep, v) as usize] = true;
            }
        }
        (0..group.order() as Elt)
            .filter(|&e| mask[e as usize])
            .collect()
    };
    let mark = |vertex: &PairSub, h: Elt| -> i64 {
        coset_elements(h)
            .iter()
            .filter(|&&x| {
                vertex
                    .iter()
                    .all(|&(u, v)| group.mul(group.mul(u, x), group.inv(v)) == x)
            })
            .count() as i64
    };
    let mut mults: Vec<i64> = Vec::with_capacity(classes.len());
    for (ci, class) in classes.iter().enumerate() {
        let leader = &cosets[class[0]];
        let dim_m = brauer_quotient_dim(ga, ikgi_basis, &leader.s_sub, leader.rep)? as i64;
        let mut rhs = dim_m;
        for (cj, prev) in classes.iter().enumerate().take(ci) {
            let prev_leader = &cosets[prev[0]];
            rhs -= mults[cj] * mark(&leader.pairs, prev_leader.rep);
        }
        let diag = mark(&leader.pairs, leader.rep);
        if diag <= 0 {
            return Err(Error::Inconsistent(
                "mark system has vanishing diagonal".into(),
            ));
        }
        if rhs % diag != 0 || rhs / diag < 0 {
            return Err(Error::Inconsistent(format!(
                "mark system solution is not a non-negative integer: {rhs}/{diag}"
            )));
        }
        mults.push(rhs / diag);
    }
    let mut out = Vec::new();
    for (ci, class) in classes.iter().enumerate() {
        if mults[ci] == 0 {
            continue;
        }
        let mut members: Vec<Elt> = class.iter().map(|&k| cosets[k].rep).collect();
        members.sort_unstable();
        let leader = &cosets[class[0]];
        out.push(YEntry {
            rep: members[0],
            multiplicity: mults[ci] as usize,
            coset_size: leader.size,
            intersection_order: leader.s_sub.order(),
            members,
        });
    }
    out.sort_by_key(|e| e.rep);
    Ok(out)
}

fn verify_y_invariants(sd: &SourceData) -> Result<()> {
    let total: usize = sd.y.iter().map(|e| e.multiplicity * e.coset_size).sum();
    if total != sd.ikgi_basis.len() {
        return Err(Error::Inconsistent(format!(
            "double-coset dimensions sum to {total}, source algebra has dimension {}",
            sd.ikgi_basis.len()
        )));
    }
    // containment: every class of N_G(P, e_P) mod P C_G(P) appears
    let group = &sd.algebra.group;
    let mut covered: Vec<Elt> = Vec::new();
    for &x in sd.stabilizer.elements() {
        if covered.iter().any(|&y| {
            let yx = group.mul(group.inv(y), x);
            sd.pc.contains(yx)
        }) {
            continue;
        }
        covered.push(x);
        let found = sd.y.iter().any(|e| {
            e.members
                .iter()
                .any(|&m| double_coset_contains(group, sd.defect(), m, x))
        });
        if !found {
            return Err(Error::Inconsistent(format!(
                "stabilizer coset representative {} is missing from the multiset",
                group.name(x)
            )));
        }
    }
    Ok(())
}

fn double_coset_contains(group: &Arc<FiniteGroup>, p_sub: &Subgroup, rep: Elt, x: Elt) -> bool {
    for &u in p_sub.elements() {
        let urep = group.mul(u, rep);
        for &v in p_sub.elements() {
            if group.mul(urep, v) == x {
                return true;
            }
        }
    }
    false
}

// ---------------------------------------------------------------------------
// Brauer correspondent
// ---------------------------------------------------------------------------

/// The block Br_P(b) of k N_G(P): verified to be a block idempotent of the
/// normalizer algebra with a defect group conjugate to P. Returns the
/// normalizer view, the blocks of the normalizer algebra, and the index of
/// the correspondent among them.
pub fn brauer_correspondent(
    ga: &GroupAlgebra,
    block: &Block,
) -> Result<(crate::group::SubgroupView, Vec<Block>, usize)> {
    let group = &ga.group;
    let field = &ga.field;
    let p_sub = &block.defect;
    let n = normalizer(group, p_sub);
    let br = brauer_hom(ga, &block.idempotent, p_sub)?;
    let view = n.as_group();
    let mut c_vec = vec![0 as Scalar; view.group.order()];
    for (e, &coeff) in br.iter().enumerate() {
        if coeff != 0 {
            let idx = view
                .from_parent(e as Elt)
                .ok_or_else(|| Error::Inconsistent("Brauer image escapes the normalizer".into()))?;
            c_vec[idx as usize] = coeff;
        }
    }
    let n_blocks = block_idempotents(&view.group, field)?;
    let pos = n_blocks
        .iter()
        .position(|b| b.idempotent == c_vec)
        .ok_or_else(|| {
            Error::Inconsistent(
                "Brauer image of the block is not primitive in the normalizer center".into(),
            )
        })?;
    // first-main-theorem check: the correspondent has defect group P
    let corr = &n_blocks[pos];
    let p_in_view: Vec<Elt> = p_sub
        .elements()
        .iter()
        .map(|&e| view.from_parent(e).expect("P lies in its normalizer"))
        .collect();
    let p_view_sub = Subgroup::from_elements(&view.group, p_in_view);
    if corr.defect.order() != p_view_sub.order() {
        return Err(Error::Inconsistent(
            "correspondent defect group has the wrong order".into(),
        ));
    }
    let conjugate_ok = (0..view.group.order() as Elt)
        .any(|g| p_view_sub.conjugate(g).elements() == corr.defect.elements());
    if !conjugate_ok {
        return Err(Error::Inconsistent(
            "correspondent defect group is not conjugate to P".into(),
        ));
    }
    Ok((view, n_blocks, pos))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::make_group;

    fn blocks_for(spec: &str, p: u32) -> (GroupAlgebra, Vec<Block>) {
        let g = make_group(spec).unwrap();
        let f = splitting_field(&g, p).unwrap();
        let ga = GroupAlgebra::new(&g, &f);
        let blocks = block_idempotents(&g, &f).unwrap();
        (ga, blocks)
    }

    #[test]
    fn splitting_fields() {
        let c2 = make_group("C 2").unwrap();
        assert_eq!(splitting_field(&c2, 2).unwrap().order(), 2);
        let c3 = make_group("C 3").unwrap();
        assert_eq!(splitting_field(&c3, 2).unwrap().order(), 4);
        let s3 = make_group("S 3").unwrap();
        assert_eq!(splitting_field(&s3, 3).unwrap().order(), 3);
        let a4 = make_group("A 4").unwrap();
        assert_eq!(splitting_field(&a4, 2).unwrap().order(), 4);
    }

    #[test]
    fn symmetrizing_form_properties() {
        let g = make_group("S 3").unwrap();
        let f = Field::new(3, 1).unwrap();
        let ga = GroupAlgebra::new(&g, &f);
        let mut rng = crate::rng::DetRng::new(5);
        for _ in 0..1000 {
            let a: Vec<Scalar> = (0..6).map(|_| rng.below(3) as Scalar).collect();
            let b: Vec<Scalar> = (0..6).map(|_| rng.below(3) as Scalar).collect();
            assert_eq!(ga.sym_form(&ga.mul(&a, &b)), ga.sym_form(&ga.mul(&b, &a)));
        }
        for x in 0..6 as Elt {
            for y in 0..6 as Elt {
                let prod = ga.mul(&ga.basis_elt(g.inv(x)), &ga.basis_elt(y));
                assert_eq!(ga.sym_form(&prod), u16::from(x == y));
            }
        }
    }

    #[test]
    fn s3_p3_single_block() {
        let (_ga, blocks) = blocks_for("S 3", 3);
        assert_eq!(blocks.len(), 1);
        assert!(blocks[0].principal);
        assert_eq!(blocks[0].defect_order(), 3);
    }

    #[test]
    fn s3_p2_two_blocks() {
        let (_ga, blocks) = blocks_for("S 3", 2);
        assert_eq!(blocks.len(), 2);
        let principal = blocks.iter().find(|b| b.principal).unwrap();
        assert_eq!(principal.defect_order(), 2);
        let other = blocks.iter().find(|b| !b.principal).unwrap();
        assert_eq!(other.defect_order(), 1, "defect zero block");
    }

    #[test]
    fn a4_p2_single_block_defect_v4() {
        let (_ga, blocks) = blocks_for("A 4", 2);
        assert_eq!(blocks.len(), 1);
        assert!(blocks[0].principal);
        assert_eq!(blocks[0].defect_order(), 4);
        assert!(blocks[0].defect.as_group().group.is_abelian());
    }

    #[test]
    fn block_partition_of_unity() {
        for (spec, p) in [
            ("S 3", 2u32),
            ("S 3", 3),
            ("S 4", 2),
            ("S 4", 3),
            ("A 4", 2),
            ("A 4", 3),
        ] {
            let (ga, blocks) = blocks_for(spec, p);
            let mut total = ga.zero();
            for b in &blocks {
                assert!(ga.is_central(&b.idempotent));
                let sq = ga.mul(&b.idempotent, &b.idempotent);
                assert_eq!(sq, b.idempotent);
                total = ga.add(&total, &b.idempotent);
            }
            assert_eq!(total, ga.one(), "blocks sum to 1 for {spec} at p={p}");
            for (i, a) in blocks.iter().enumerate() {
                for (j, b) in blocks.iter().enumerate() {
                    if i != j {
                        let prod = ga.mul(&a.idempotent, &b.idempotent);
                        assert!(prod.iter().all(|&c| c == 0), "orthogonality");
                    }
                }
            }
        }
    }

    #[test]
    fn brauer_hom_examples() {
        let g = make_group("S 3").unwrap();
        let f = Field::new(2, 2).unwrap();
        let ga = GroupAlgebra::new(&g, &f);
        let t = (0..6 as Elt).find(|&e| g.name(e) == "(12)").unwrap();
        let q = g.closure(&[t]);
        assert_eq!(brauer_hom(&ga, &ga.one(), &q).unwrap(), ga.one());
        let mut a = ga.zero();
        for e in 0..6 as Elt {
            if g.element_order(e) == 2 {
                a[e as usize] = 1;
            }
        }
        let br = brauer_hom(&ga, &a, &q).unwrap();
        let mut expected = ga.zero();
        expected[t as usize] = 1;
        assert_eq!(br, expected, "C_G(Q) = Q keeps only (12)");
        let mut c3 = ga.zero();
        for e in 0..6 as Elt {
            if g.element_order(e) == 3 {
                c3[e as usize] = 1;
            }
        }
        let br0 = brauer_hom(&ga, &c3, &q).unwrap();
        assert!(
            br0.iter().all(|&c| c == 0),
            "support off the centralizer dies"
        );
        let mut bad = ga.zero();
        bad[(0..6 as Elt).find(|&e| g.element_order(e) == 3).unwrap() as usize] = 1;
        assert!(brauer_hom(&ga, &bad, &q).is_err());
    }

    #[test]
    fn brauer_multiplicativity_sample() {
        let g = make_group("S 4").unwrap();
        let f = Field::new(2, 2).unwrap();
        let ga = GroupAlgebra::new(&g, &f);
        let q = {
            let t = (0..24 as Elt).find(|&e| g.name(e) == "(12)(34)").unwrap();
            g.closure(&[t])
        };
        let orbits = conjugation_orbits(&g, &q);
        let mut rng = crate::rng::DetRng::new(11);
        for _ in 0..1000 {
            let mut a = ga.zero();
            let mut b = ga.zero();
            for orbit in &orbits {
                let ca = rng.below(4) as Scalar;
                let cb = rng.below(4) as Scalar;
                for &e in orbit {
                    a[e as usize] = ca;
                    b[e as usize] = cb;
                }
            }
            let lhs = brauer_hom(&ga, &ga.mul(&a, &b), &q).unwrap();
            let rhs = ga.mul(
                &brauer_hom(&ga, &a, &q).unwrap(),
                &brauer_hom(&ga, &b, &q).unwrap(),
            );
            assert_eq!(lhs, rhs, "multiplicative on fixed points");
        }
    }

    #[test]
    fn s3_p3_source_data() {
        let (ga, blocks) = blocks_for("S 3", 3);
        let sd = source_data(&ga, &blocks[0]).unwrap();
        assert_eq!(sd.i, ga.one(), "fixed-point algebra is local, i = 1");
        assert_eq!(sd.dim_source_algebra(), 6);
        assert_eq!(sd.y.len(), 2);
        assert_eq!(sd.y[0].rep, 0);
        assert_eq!(sd.y[0].multiplicity, 1);
        assert_eq!(sd.y[0].coset_size, 3);
        assert_eq!(sd.y[1].multiplicity, 1);
        assert_eq!(sd.y[1].coset_size, 3);
        let rep_name = ga.group.name(sd.y[1].rep);
        assert_eq!(
            rep_name.len(),
            4,
            "second representative is a transposition"
        );
        assert_eq!(sd.stabilizer.order(), 6, "N_G(P, e_P) = S3");
        assert_eq!(sd.pc.order(), 3, "P C_G(P) = C3");
    }

    #[test]
    fn s3_p2_principal_source_data() {
        let (ga, blocks) = blocks_for("S 3", 2);
        let principal = blocks.iter().find(|b| b.principal).unwrap();
        let sd = source_data(&ga, principal).unwrap();
        assert_eq!(sd.i, principal.idempotent, "i = b for this block");
        assert_eq!(sd.dim_source_algebra(), 2);
        assert_eq!(sd.y.len(), 1);
        assert_eq!(sd.y[0].rep, 0);
        assert_eq!(sd.y[0].multiplicity, 1);
    }

    #[test]
    fn p_group_source_data() {
        let (ga, blocks) = blocks_for("D 8", 2);
        assert_eq!(blocks.len(), 1);
        let sd = source_data(&ga, &blocks[0]).unwrap();
        assert_eq!(sd.i, ga.one());
        assert_eq!(sd.dim_source_algebra(), 8);
        assert_eq!(sd.y.len(), 1);
        assert_eq!(sd.y[0].multiplicity, 1);
        assert_eq!(sd.y[0].coset_size, 8);
    }

    #[test]
    fn brauer_pairs_s3_p3() {
        let (ga, blocks) = blocks_for("S 3", 3);
        let sd = source_data(&ga, &blocks[0]).unwrap();
        let triv = ga.group.trivial_subgroup();
        assert_eq!(sd.pair_for(&triv).unwrap(), &blocks[0].idempotent);
        let e_p = sd.pair_for(sd.defect()).unwrap();
        let mut expected = ga.zero();
        expected[0] = 1;
        assert_eq!(e_p, &expected, "kC3 at p=3 has the single block 1");
    }

    #[test]
    fn fusion_a4_p2() {
        let (ga, blocks) = blocks_for("A 4", 2);
        let sd = source_data(&ga, &blocks[0]).unwrap();
        let c2 = sd
            .fusion
            .subgroups
            .iter()
            .position(|s| s.order() == 2)
            .unwrap();
        let v4 = sd
            .fusion
            .subgroups
            .iter()
            .position(|s| s.order() == 4)
            .unwrap();
        assert_eq!(
            sd.fusion.hom(c2, v4).len(),
            3,
            "generator maps to each involution"
        );
        assert_eq!(sd.fusion.hom(v4, v4).len(), 3, "Aut_F(V4) = C3 in A4");
    }

    #[test]
    fn fusion_s3_p2_principal_trivial() {
        let (ga, blocks) = blocks_for("S 3", 2);
        let principal = blocks.iter().find(|b| b.principal).unwrap();
        let sd = source_data(&ga, principal).unwrap();
        let pi = sd.fusion.subgroup_index(sd.defect()).unwrap();
        assert_eq!(sd.fusion.hom(pi, pi).len(), 1, "N_G(P) = P, identity only");
    }

    #[test]
    fn fusion_contains_inner_and_composes() {
        for (spec, p) in [("S 3", 2u32), ("S 4", 2), ("A 4", 2), ("S 4", 3)] {
            let (ga, blocks) = blocks_for(spec, p);
            let principal = blocks.iter().find(|b| b.principal).unwrap();
            let sd = source_data(&ga, principal).unwrap();
            let fus = &sd.fusion;
            let g = &ga.group;
            for (si, q) in fus.subgroups.iter().enumerate() {
                for &u in sd.defect().elements() {
                    let graph: Vec<Elt> = q.elements().iter().map(|&x| g.conj(u, x)).collect();
                    let mut img = graph.clone();
                    img.sort_unstable();
                    let ti = fus
                        .subgroups
                        .iter()
                        .position(|r| r.elements() == img)
                        .expect("conjugate subgroup is listed");
                    assert!(
                        fus.hom(si, ti).contains(&graph),
                        "inner conjugation missing in {spec} p={p}"
                    );
                }
            }
            for si in 0..fus.subgroups.len() {
                for mi in 0..fus.subgroups.len() {
                    for ti in 0..fus.subgroups.len() {
                        for f1 in fus.hom(si, mi) {
                            for f2 in fus.hom(mi, ti) {
                                let m_elems = fus.subgroups[mi].elements();
                                let composed: Vec<Elt> = f1
                                    .iter()
                                    .map(|&y| {
                                        let pos = m_elems.binary_search(&y).expect("image in M");
                                        f2[pos]
                                    })
                                    .collect();
                                assert!(
                                    fus.hom(si, ti).contains(&composed),
                                    "composition closure fails in {spec} p={p}"
                                );
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn principal_fusion_is_group_conjugation() {
        // for principal blocks the pair condition never cuts morphisms:
        // the fusion system equals the one induced by all of G
        for (spec, p) in [
            ("S 3", 2u32),
            ("S 3", 3),
            ("A 4", 2),
            ("S 4", 2),
            ("S 4", 3),
        ] {
            let (ga, blocks) = blocks_for(spec, p);
            let principal = blocks.iter().find(|b| b.principal).unwrap();
            let sd = source_data(&ga, principal).unwrap();
            let full = ga.group.full_subgroup();
            let by_conjugation =
                fusion_in_subgroup(&ga.group, &sd.fusion.subgroups, sd.defect(), &full);
            assert!(
                by_conjugation.contains_system(&sd.fusion)
                    && sd.fusion.contains_system(&by_conjugation),
                "principal fusion differs from G-conjugation for {spec} p={p}"
            );
        }
    }

    #[test]
    fn brauer_correspondent_s4_p3() {
        let (ga, blocks) = blocks_for("S 4", 3);
        let principal = blocks.iter().find(|b| b.principal).unwrap();
        let (view, n_blocks, pos) = brauer_correspondent(&ga, principal).unwrap();
        assert_eq!(view.group.order(), 6, "N_S4(C3) has order 6");
        assert_eq!(n_blocks.len(), 1, "kS3 at p=3 has a single block");
        assert_eq!(pos, 0);
        assert_eq!(n_blocks[0].idempotent, {
            let mut v = vec![0; 6];
            v[0] = 1;
            v
        });
    }

    #[test]
    fn brauer_correspondent_p_normal() {
        let (ga, blocks) = blocks_for("A 4", 2);
        let (view, n_blocks, pos) = brauer_correspondent(&ga, &blocks[0]).unwrap();
        assert_eq!(view.group.order(), 12, "V4 normal: N = G, c = b");
        assert_eq!(n_blocks[pos].defect_order(), 4);
    }

    #[test]
    fn brauer_correspondent_s4_p2() {
        let (ga, blocks) = blocks_for("S 4", 2);
        let principal = blocks.iter().find(|b| b.principal).unwrap();
        let (view, n_blocks, pos) = brauer_correspondent(&ga, principal).unwrap();
        assert_eq!(view.group.order(), 8, "D8 is self-normalizing in S4");
        assert_eq!(n_blocks.len(), 1, "group algebra of a p-group is local");
        assert_eq!(pos, 0);
    }

    #[test]
    fn defect_conjugation_stability() {
        let (ga, blocks) = blocks_for("S 4", 2);
        let b = &blocks[0];
        let q = sylow(&ga.group, 2);
        for g in 0..ga.group.order() as Elt {
            let qc = q.conjugate(g);
            let br = brauer_hom(&ga, &b.idempotent, &qc).unwrap();
            assert!(br.iter().any(|&c| c != 0));
        }
    }

    #[test]
    fn defect_zero_block_details() {
        let (ga, blocks) = blocks_for("S 3", 2);
        let dz = blocks.iter().find(|b| !b.principal).unwrap();
        let sd = source_data(&ga, dz).unwrap();
        assert_eq!(
            sd.dim_source_algebra(),
            1,
            "defect zero source algebra is k"
        );
        assert_eq!(sd.y.len(), 1);
        assert_eq!(sd.y[0].multiplicity, 1);
        assert_eq!(sd.y[0].coset_size, 1);
    }
}

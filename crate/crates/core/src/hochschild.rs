//! The Hochschild cochain complex of kG and its restriction, conjugation,
//! transfer and diagonal-induction maps, with verifiers for the Mackey
//! axioms and the conjugation square.
//!
//! A degree-n cochain is a linear map (kG)^(tensor n) -> kG stored on the
//! group-tuple basis: the value index is tuple * |G| + output element. The
//! transfer reuses the left-coset shuttle of the group-cohomology module
//! and conjugates the value by the boundary shuttle states,
//!
//!   (t f)(g_1,...,g_n) = sum_x  z_0 f(h_1,...,h_n) z_n^{-1},
//!
//! which collapses the double-sum form over coset-indexed projections to
//! its nonvanishing terms.

use std::collections::HashMap;
use std::sync::Arc;

use crate::algebra::TrackedSpan;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::group::{Elt, FiniteGroup, Subgroup};
use crate::groupcoh::{decode_tuple, encode_tuple, Cochain, CohSpace, TransferPlan};
use crate::matrix::{SparseMatrix, Subspace};

/// A Hochschild cochain of degree n on kG: values on (tuple, output) pairs.
#[derive(Clone, Debug)]
pub struct HhCochain {
    pub group: Arc<FiniteGroup>,
    pub field: Arc<Field>,
    pub degree: usize,
    /// length |G|^n * |G|, index = tuple * |G| + output element
    pub values: Vec<Scalar>,
}

impl HhCochain {
    pub fn zero(group: &Arc<FiniteGroup>, field: &Arc<Field>, degree: usize) -> HhCochain {
        HhCochain {
            group: group.clone(),
            field: field.clone(),
            degree,
            values: vec![0; group.order().pow(degree as u32) * group.order()],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    pub fn add(&self, other: &HhCochain) -> HhCochain {
        debug_assert_eq!(self.degree, other.degree);
        let f = &self.field;
        HhCochain {
            group: self.group.clone(),
            field: self.field.clone(),
            degree: self.degree,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f.add(a, b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &HhCochain) -> HhCochain {
        let f = &self.field;
        HhCochain {
            group: self.group.clone(),
            field: self.field.clone(),
            degree: self.degree,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f.sub(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, c: Scalar) -> HhCochain {
        let f = &self.field;
        HhCochain {
            group: self.group.clone(),
            field: self.field.clone(),
            degree: self.degree,
            values: self.values.iter().map(|&a| f.mul(a, c)).collect(),
        }
    }
}

/// The Hochschild differential with outer actions by left and right
/// multiplication.
pub fn hh_coboundary(f: &HhCochain) -> HhCochain {
    let group = &f.group;
    let field = &f.field;
    let n = f.degree;
    let order = group.order();
    let mut out = HhCochain::zero(group, field, n + 1);
    let mut tuple = vec![0 as Elt; n + 1];
    let mut inner = vec![0 as Elt; n];
    let tuples_out = order.pow(n as u32 + 1);
    for t_idx in 0..tuples_out {
        decode_tuple(order, n + 1, t_idx, &mut tuple);
        // g_1 * f(g_2,...,g_{n+1}): coefficient at g_1*a from (inner, a)
        inner.copy_from_slice(&tuple[1..]);
        let base = encode_tuple(order, &inner) * order;
        for a in 0..order as Elt {
            let v = f.values[base + a as usize];
            if v != 0 {
                let target = t_idx * order + group.mul(tuple[0], a) as usize;
                out.values[target] = field.add(out.values[target], v);
            }
        }
        // inner face maps
        for i in 0..n {
            inner[..i].copy_from_slice(&tuple[..i]);
            inner[i] = group.mul(tuple[i], tuple[i + 1]);
            inner[i + 1..].copy_from_slice(&tuple[i + 2..]);
            let base = encode_tuple(order, &inner) * order;
            let negate = (i + 1) % 2 == 1;
            for a in 0..order {
                let v = f.values[base + a];
                if v != 0 {
                    let target = t_idx * order + a;
                    out.values[target] = if negate {
                        field.sub(out.values[target], v)
                    } else {
                        field.add(out.values[target], v)
                    };
                }
            }
        }
        // f(g_1,...,g_n) * g_{n+1}
        inner.copy_from_slice(&tuple[..n]);
        let base = encode_tuple(order, &inner) * order;
        let negate = (n + 1) % 2 == 1;
        for a in 0..order as Elt {
            let v = f.values[base + a as usize];
            if v != 0 {
                let target = t_idx * order + group.mul(a, tuple[n]) as usize;
                out.values[target] = if negate {
                    field.sub(out.values[target], v)
                } else {
                    field.add(out.values[target], v)
                };
            }
        }
    }
    out
}

/// Sparse matrix of the degree-n Hochschild differential.
pub fn hh_bar_matrix(
    group: &Arc<FiniteGroup>,
    field: &Arc<Field>,
    n: usize,
    budget: &Budget,
) -> Result<SparseMatrix> {
    let order = group.order() as u64;
    let rows = order.pow(n as u32 + 1) * order;
    let cols = order.pow(n as u32) * order;
    budget.check(field.order(), rows, cols)?;
    let order = group.order();
    let mut m = SparseMatrix::new(field, rows as usize, cols as usize);
    let one = field.one();
    let neg = field.neg(one);
    let mut tuple = vec![0 as Elt; n + 1];
    let mut inner = vec![0 as Elt; n];
    let tuples_out = order.pow(n as u32 + 1);
    for t_idx in 0..tuples_out {
        decode_tuple(order, n + 1, t_idx, &mut tuple);
        inner.copy_from_slice(&tuple[1..]);
        let base = encode_tuple(order, &inner) * order;
        for a in 0..order as Elt {
            let row = t_idx * order + group.mul(tuple[0], a) as usize;
            m.add_entry(row, base + a as usize, one);
        }
        for i in 0..n {
            inner[..i].copy_from_slice(&tuple[..i]);
            inner[i] = group.mul(tuple[i], tuple[i + 1]);
            inner[i + 1..].copy_from_slice(&tuple[i + 2..]);
            let base = encode_tuple(order, &inner) * order;
            let sign = if (i + 1) % 2 == 1 { neg } else { one };
            for a in 0..order {
                m.add_entry(t_idx * order + a, base + a, sign);
            }
        }
        inner.copy_from_slice(&tuple[..n]);
        let base = encode_tuple(order, &inner) * order;
        let sign = if (n + 1) % 2 == 1 { neg } else { one };
        for a in 0..order as Elt {
            let row = t_idx * order + group.mul(a, tuple[n]) as usize;
            m.add_entry(row, base + a as usize, sign);
        }
    }
    Ok(m)
}

/// Exact dimension of HH^n(kG).
pub fn hh_dim(
    group: &Arc<FiniteGroup>,
    field: &Arc<Field>,
    n: usize,
    budget: &Budget,
) -> Result<usize> {
    let order = group.order();
    let cn = order.pow(n as u32) * order;
    let rank_n = hh_bar_matrix(group, field, n, budget)?.rank();
    let rank_prev = if n == 0 {
        0
    } else {
        hh_bar_matrix(group, field, n - 1, budget)?.rank()
    };
    Ok(cn - rank_n - rank_prev)
}

/// Independent oracle: HH^n(kG) decomposes over conjugacy classes as the
/// direct sum of H^n of the centralizers.
pub fn centralizer_oracle_hh_dim(
    group: &Arc<FiniteGroup>,
    field: &Arc<Field>,
    n: usize,
    budget: &Budget,
) -> Result<usize> {
    let mut total = 0;
    for class in group.conjugacy_classes() {
        let c = crate::group::centralizer_of_element(group, class[0]);
        let view = c.as_group();
        total += crate::groupcoh::cohomology_dim(&view.group, field, n, budget)?;
    }
    Ok(total)
}

/// Degree-n Hochschild class space.
pub struct HhSpace {
    pub group: Arc<FiniteGroup>,
    pub field: Arc<Field>,
    pub degree: usize,
    pub image: Subspace,
    pub reps: Vec<HhCochain>,
    coords: TrackedSpan,
    image_rank: usize,
}

impl HhSpace {
    pub fn new(
        group: &Arc<FiniteGroup>,
        field: &Arc<Field>,
        degree: usize,
        budget: &Budget,
    ) -> Result<HhSpace> {
        let ambient = group.order().pow(degree as u32) * group.order();
        let kernel = hh_bar_matrix(group, field, degree, budget)?.nullspace();
        let image_vecs: Vec<Vec<Scalar>> = if degree == 0 {
            Vec::new()
        } else {
            let m = hh_bar_matrix(group, field, degree - 1, budget)?;
            let mut sub = Subspace::empty(field, ambient);
            for j in 0..m.cols() {
                let mut col = vec![0 as Scalar; ambient];
                for &(r, v) in m.column(j) {
                    col[r as usize] = v;
                }
                sub.insert(&col);
            }
            sub.basis().to_vec()
        };
        let image = Subspace::from_vectors(field, ambient, &image_vecs);
        let mut coords = TrackedSpan::new(field, ambient);
        for row in image.basis() {
            coords.insert(row);
        }
        let image_rank = image.dim();
        let mut reps = Vec::new();
        for v in &kernel {
            if coords.insert(v) {
                reps.push(HhCochain {
                    group: group.clone(),
                    field: field.clone(),
                    degree,
                    values: v.clone(),
                });
            }
        }
        Ok(HhSpace {
            group: group.clone(),
            field: field.clone(),
            degree,
            image,
            reps,
            coords,
            image_rank,
        })
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    pub fn class_coords(&self, f: &HhCochain) -> Result<Vec<Scalar>> {
        debug_assert_eq!(f.degree, self.degree);
        let all = self.coords.express(&f.values).ok_or_else(|| {
            Error::Inconsistent("cochain is not a Hochschild cocycle of this space".into())
        })?;
        Ok(all[self.image_rank..].to_vec())
    }

    pub fn classes_equal(&self, a: &HhCochain, b: &HhCochain) -> Result<bool> {
        if a.degree != b.degree {
            return Err(Error::DimensionMismatch("cochain degrees differ".into()));
        }
        let diff = a.sub(b);
        Ok(self.image.contains(&diff.values))
    }
}

// ---------------------------------------------------------------------------
// The four maps
// ---------------------------------------------------------------------------

/// Restriction to a subalgebra kH: pull back the tuple along the embedding
/// and truncate the output to the kH support.
pub fn hh_restrict(f: &HhCochain, target: &Arc<FiniteGroup>, embed: &[Elt]) -> HhCochain {
    pullback(f, target, embed)
}

/// Conjugation isomorphism to k[^gH]: relabel every coordinate along the
/// inverse conjugation map (`to_source[t]` = source element mapping to t).
pub fn hh_conjugate(f: &HhCochain, target: &Arc<FiniteGroup>, to_source: &[Elt]) -> HhCochain {
    pullback(f, target, to_source)
}

fn pullback(f: &HhCochain, target: &Arc<FiniteGroup>, map: &[Elt]) -> HhCochain {
    assert_eq!(map.len(), target.order());
    let n = f.degree;
    let t_order = target.order();
    let s_order = f.group.order();
    let mut out = HhCochain::zero(target, &f.field, n);
    let mut tuple = vec![0 as Elt; n];
    let mut mapped = vec![0 as Elt; n];
    let t_tuples = t_order.pow(n as u32);
    for idx in 0..t_tuples {
        decode_tuple(t_order, n, idx, &mut tuple);
        for (m, &t) in mapped.iter_mut().zip(&tuple) {
            *m = map[t as usize];
        }
        let src_base = encode_tuple(s_order, &mapped) * s_order;
        let dst_base = idx * t_order;
        for a in 0..t_order {
            out.values[dst_base + a] = f.values[src_base + map[a] as usize];
        }
    }
    out
}

/// Transfer along the coset shuttle with boundary conjugation. `k_in_t`
/// embeds the source group into the plan's target.
pub fn hh_transfer(f: &HhCochain, plan: &TransferPlan, k_in_t: &[Elt]) -> HhCochain {
    let target = &plan.target;
    let field = &f.field;
    let n = f.degree;
    let t_order = target.order();
    let k_order = f.group.order();
    let mut out = HhCochain::zero(target, field, n);
    let mut tuple = vec![0 as Elt; n];
    let mut h_tuple = vec![0 as Elt; n];
    let t_tuples = t_order.pow(n as u32);
    for idx in 0..t_tuples {
        decode_tuple(t_order, n, idx, &mut tuple);
        let dst_base = idx * t_order;
        for &x in &plan.reps {
            let mut z = x;
            for j in 0..n {
                let w = target.mul(target.inv(tuple[j]), z);
                let z_next = plan.rep_of(w);
                h_tuple[j] = plan.hpart_of(target.mul(target.inv(w), z_next));
                z = z_next;
            }
            // value z_0 f(h) z_n^{-1}
            let src_base = encode_tuple(k_order, &h_tuple) * k_order;
            let zn_inv = target.inv(z);
            for a in 0..k_order {
                let v = f.values[src_base + a];
                if v != 0 {
                    let elt = target.mul(target.mul(x, k_in_t[a]), zn_inv) as usize;
                    out.values[dst_base + elt] = field.add(out.values[dst_base + elt], v);
                }
            }
        }
    }
    out
}

/// Diagonal induction: a group cochain f becomes the Hochschild cochain
/// sending a tuple to f(tuple) * g_1 ... g_n.
pub fn diagonal_induction(f: &Cochain) -> HhCochain {
    let group = &f.group;
    let n = f.degree;
    let order = group.order();
    let mut out = HhCochain::zero(group, &f.field, n);
    let mut tuple = vec![0 as Elt; n];
    for (idx, &v) in f.values.iter().enumerate() {
        if v == 0 {
            continue;
        }
        decode_tuple(order, n, idx, &mut tuple);
        let prod = tuple.iter().fold(0 as Elt, |acc, &g| group.mul(acc, g));
        out.values[idx * order + prod as usize] = v;
    }
    out
}

// ---------------------------------------------------------------------------
// Verifiers
// ---------------------------------------------------------------------------

/// Outcome of the Mackey-axiom suite; item names follow the usual listing
/// (composition of restrictions/transfers, identities, conjugation
/// composition, inner triviality, conjugation-naturality, double-coset
/// formula).
#[derive(Clone, Debug)]
pub struct MackeyReport {
    pub items: Vec<(String, bool)>,
}

impl MackeyReport {
    pub fn all_pass(&self) -> bool {
        self.items.iter().all(|(_, ok)| *ok)
    }
}

/// Context for verifier computations: a parent group with a field, a
/// budget, and caches for subgroup class spaces.
pub struct HhCtx {
    pub parent: Arc<FiniteGroup>,
    pub field: Arc<Field>,
    pub budget: Budget,
    spaces: HashMap<(Vec<Elt>, usize), Arc<HhSpace>>,
    views: HashMap<Vec<Elt>, Arc<crate::group::SubgroupView>>,
}

impl HhCtx {
    pub fn new(parent: &Arc<FiniteGroup>, field: &Arc<Field>, budget: Budget) -> HhCtx {
        HhCtx {
            parent: parent.clone(),
            field: field.clone(),
            budget,
            spaces: HashMap::new(),
            views: HashMap::new(),
        }
    }

    pub fn view(&mut self, sub: &Subgroup) -> Arc<crate::group::SubgroupView> {
        let key = sub.elements().to_vec();
        if let Some(v) = self.views.get(&key) {
            return v.clone();
        }
        let v = Arc::new(sub.as_group());
        self.views.insert(key, v.clone());
        v
    }

    pub fn space(&mut self, sub: &Subgroup, n: usize) -> Result<Arc<HhSpace>> {
        let key = (sub.elements().to_vec(), n);
        if let Some(s) = self.spaces.get(&key) {
            return Ok(s.clone());
        }
        let view = self.view(sub);
        let s = Arc::new(HhSpace::new(&view.group, &self.field, n, &self.budget)?);
        self.spaces.insert(key, s.clone());
        Ok(s)
    }

    /// Restriction of a cochain living on `source` to `target` (target
    /// elements form a subset of source elements, both as parent subsets).
    pub fn restrict(&mut self, f: &HhCochain, source: &Subgroup, target: &Subgroup) -> HhCochain {
        let sv = self.view(source);
        let tv = self.view(target);
        let embed: Vec<Elt> = tv
            .to_parent
            .iter()
            .map(|&e| sv.from_parent(e).expect("target inside source"))
            .collect();
        hh_restrict(f, &tv.group, &embed)
    }

    /// Conjugation c_{g}: cochain on H becomes a cochain on ^gH.
    pub fn conjugate(&mut self, f: &HhCochain, source: &Subgroup, g: Elt) -> (HhCochain, Subgroup) {
        let parent = self.parent.clone();
        let sv = self.view(source);
        let target_sub = source.conjugate(g);
        let tv = self.view(&target_sub);
        let ginv = parent.inv(g);
        let to_source: Vec<Elt> = tv
            .to_parent
            .iter()
            .map(|&e| {
                sv.from_parent(parent.conj(ginv, e))
                    .expect("conjugate element")
            })
            .collect();
        (hh_conjugate(f, &tv.group, &to_source), target_sub)
    }

    /// Transfer of a cochain on `source` up to `target`.
    pub fn transfer(&mut self, f: &HhCochain, source: &Subgroup, target: &Subgroup) -> HhCochain {
        let sv = self.view(source);
        let tv = self.view(target);
        let k_in_t: Vec<Elt> = sv
            .to_parent
            .iter()
            .map(|&e| tv.from_parent(e).expect("source inside target"))
            .collect();
        let plan = TransferPlan::new(&tv.group, &k_in_t);
        hh_transfer(f, &plan, &k_in_t)
    }
}

/// Run the six Mackey-functor axioms at the class level in degree n. The
/// double-coset item uses the subgroups K and H as given; the items that
/// need a chain of subgroups use K meet H as the small member, so any pair
/// of subgroups of G is an admissible input.
pub fn verify_mackey_axioms(
    parent: &Arc<FiniteGroup>,
    field: &Arc<Field>,
    k_sub: &Subgroup,
    h_sub: &Subgroup,
    g: Elt,
    n: usize,
    budget: &Budget,
) -> Result<MackeyReport> {
    let mut ctx = HhCtx::new(parent, field, *budget);
    let full = parent.full_subgroup();
    let chain_small = k_sub.intersection(h_sub);
    let k_chain = &chain_small;
    let mut items = Vec::new();

    // (i) first part: r^H_K r^G_H = r^G_K on a basis of HH^n(kG)
    {
        let g_space = ctx.space(&full, n)?;
        let k_space = ctx.space(k_chain, n)?;
        let mut ok = true;
        for rep in &g_space.reps {
            let via_h = {
                let to_h = ctx.restrict(rep, &full, h_sub);
                ctx.restrict(&to_h, h_sub, k_chain)
            };
            let direct = ctx.restrict(rep, &full, k_chain);
            ok &= k_space.classes_equal(&via_h, &direct)?;
        }
        items.push(("i-restriction".to_string(), ok));
    }
    // (i) second part: t^G_H t^H_K = t^G_K on HH^n(kK)
    {
        let g_space = ctx.space(&full, n)?;
        let k_space = ctx.space(k_chain, n)?;
        let mut ok = true;
        for rep in &k_space.reps {
            let via_h = {
                let up = ctx.transfer(rep, k_chain, h_sub);
                ctx.transfer(&up, h_sub, &full)
            };
            let direct = ctx.transfer(rep, k_chain, &full);
            ok &= g_space.classes_equal(&via_h, &direct)?;
        }
        items.push(("i-transfer".to_string(), ok));
    }
    // (ii) r^H_H = t^H_H = id
    {
        let h_space = ctx.space(h_sub, n)?;
        let mut ok = true;
        for rep in &h_space.reps {
            let r = ctx.restrict(rep, h_sub, h_sub);
            let t = ctx.transfer(rep, h_sub, h_sub);
            ok &= h_space.classes_equal(&r, rep)?;
            ok &= h_space.classes_equal(&t, rep)?;
        }
        items.push(("ii-identity".to_string(), ok));
    }
    // (iii) c_{gh,H} = c_{g,^hH} c_{h,H}, for h drawn from a fixed probe set
    {
        let h_space = ctx.space(h_sub, n)?;
        let mut probes: Vec<Elt> = vec![g, parent.inv(g)];
        if let Some(x) = (0..parent.order() as Elt).find(|&x| !h_sub.contains(x)) {
            probes.push(x);
        }
        probes.dedup();
        let mut ok = true;
        for &h in &probes {
            let gh = parent.mul(g, h);
            for rep in &h_space.reps {
                let (direct, d_sub) = ctx.conjugate(rep, h_sub, gh);
                let (step1, mid_sub) = ctx.conjugate(rep, h_sub, h);
                let (step2, d_sub2) = ctx.conjugate(&step1, &mid_sub, g);
                debug_assert_eq!(d_sub.elements(), d_sub2.elements());
                let t_space = ctx.space(&d_sub, n)?;
                ok &= t_space.classes_equal(&direct, &step2)?;
            }
        }
        items.push(("iii-composition".to_string(), ok));
    }
    // (iv) c_{h,H} = id for h in H
    {
        let h_space = ctx.space(h_sub, n)?;
        let mut ok = true;
        for &h in h_sub.elements() {
            for rep in &h_space.reps {
                let (c, _) = ctx.conjugate(rep, h_sub, h);
                ok &= h_space.classes_equal(&c, rep)?;
            }
        }
        items.push(("iv-inner".to_string(), ok));
    }
    // (v) c_{g,K} r^H_K = r^{^gH}_{^gK} c_{g,H}  and  c_{g,H} t^H_K = t^{^gH}_{^gK} c_{g,K}
    {
        let h_space = ctx.space(h_sub, n)?;
        let k_space = ctx.space(k_chain, n)?;
        let gk = k_chain.conjugate(g);
        let gh = h_sub.conjugate(g);
        let gk_space = ctx.space(&gk, n)?;
        let gh_space = ctx.space(&gh, n)?;
        let mut ok = true;
        for rep in &h_space.reps {
            let lhs = {
                let r = ctx.restrict(rep, h_sub, k_chain);
                ctx.conjugate(&r, k_chain, g).0
            };
            let rhs = {
                let (c, _) = ctx.conjugate(rep, h_sub, g);
                ctx.restrict(&c, &gh, &gk)
            };
            ok &= gk_space.classes_equal(&lhs, &rhs)?;
        }
        for rep in &k_space.reps {
            let lhs = {
                let t = ctx.transfer(rep, k_chain, h_sub);
                ctx.conjugate(&t, h_sub, g).0
            };
            let rhs = {
                let (c, _) = ctx.conjugate(rep, k_chain, g);
                ctx.transfer(&c, &gk, &gh)
            };
            ok &= gh_space.classes_equal(&lhs, &rhs)?;
        }
        items.push(("v-naturality".to_string(), ok));
    }
    // (vi) r^G_K t^G_H = sum over K\G/H of t r c
    {
        let k_space = ctx.space(k_sub, n)?;
        let h_space = ctx.space(h_sub, n)?;
        let _ = h_space;
        let mut ok = true;
        let h_reps: Vec<HhCochain> = ctx.space(h_sub, n)?.reps.clone();
        for rep in &h_reps {
            let lhs = {
                let up = ctx.transfer(rep, h_sub, &full);
                ctx.restrict(&up, &full, k_sub)
            };
            let mut rhs = HhCochain::zero(&ctx.view(k_sub).group, field, n);
            for (x, _) in crate::group::double_cosets(parent, k_sub, h_sub) {
                let (cx, gh) = ctx.conjugate(rep, h_sub, x);
                let inter = k_sub.intersection(&gh);
                let down = ctx.restrict(&cx, &gh, &inter);
                let up = ctx.transfer(&down, &inter, k_sub);
                rhs = rhs.add(&up);
            }
            ok &= k_space.classes_equal(&lhs, &rhs)?;
        }
        items.push(("vi-double-coset".to_string(), ok));
    }
    Ok(MackeyReport { items })
}

/// Does conjugation commute with diagonal induction at class level:
/// c_{g,H}(delta_H(f)) = delta_{^gH}(^g f) for a basis of H^n(H, k)?
pub fn verify_delta_conj_square(
    parent: &Arc<FiniteGroup>,
    field: &Arc<Field>,
    h_sub: &Subgroup,
    g: Elt,
    n: usize,
    budget: &Budget,
) -> Result<bool> {
    let hv = h_sub.as_group();
    let coh = CohSpace::new(&hv.group, field, n, budget)?;
    let target_sub = h_sub.conjugate(g);
    let tv = target_sub.as_group();
    let ginv = parent.inv(g);
    let to_source: Vec<Elt> = tv
        .to_parent
        .iter()
        .map(|&e| hv.from_parent(parent.conj(ginv, e)).expect("conjugate"))
        .collect();
    let hh_target = HhSpace::new(&tv.group, field, n, budget)?;
    for rep in &coh.reps {
        let lhs = hh_conjugate(&diagonal_induction(rep), &tv.group, &to_source);
        let conj_f = crate::groupcoh::conjugate_cochain(rep, &tv.group, &to_source);
        let rhs = diagonal_induction(&conj_f);
        if !hh_target.classes_equal(&lhs, &rhs)? {
            return Ok(false);
        }
    }
    Ok(true)
}

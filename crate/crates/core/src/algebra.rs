//! Finite-dimensional associative algebras over GF(p^m) given by structure
//! constants: Jacobson radicals, idempotent lifting, primitive idempotent
//! decompositions and module decompositions.
//!
//! The radical uses the characteristic-polynomial coefficient chain for
//! positive characteristic (coefficients at indices p^i give semilinear
//! conditions); the result is certified post hoc: the computed ideal is
//! nilpotent and the quotient has zero radical. Primitive decompositions
//! split idempotents with exact CRT idempotents in k[x] for deterministic
//! candidate elements x, and certify primitivity by the local-quotient test.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};
use crate::matrix::{DenseMatrix, Subspace};
use crate::poly::{self, Poly};
use crate::rng::DetRng;

/// Sparse structure-constant algebra. Elements are coefficient vectors over
/// the basis `e_0 .. e_{d-1}`.
#[derive(Clone, Debug)]
pub struct StructureAlgebra {
    field: Arc<Field>,
    dim: usize,
    /// prod[i][j] = coordinates of e_i * e_j, sparse
    prod: Vec<Vec<Vec<(u32, Scalar)>>>,
    unit: Vec<Scalar>,
}

impl StructureAlgebra {
    pub fn new(
        field: &Arc<Field>,
        prod: Vec<Vec<Vec<(u32, Scalar)>>>,
        unit: Vec<Scalar>,
    ) -> Result<StructureAlgebra> {
        let dim = unit.len();
        if prod.len() != dim || prod.iter().any(|row| row.len() != dim) {
            return Err(Error::DimensionMismatch(
                "structure constant table shape".into(),
            ));
        }
        let a = StructureAlgebra {
            field: field.clone(),
            dim,
            prod,
            unit,
        };
        a.check_laws()?;
        Ok(a)
    }

    fn check_laws(&self) -> Result<()> {
        let d = self.dim;
        for i in 0..d {
            let e = basis_vec(d, i);
            if self.mul(&self.unit, &e) != e || self.mul(&e, &self.unit) != e {
                return Err(Error::Inconsistent(format!("unit law fails at basis {i}")));
            }
        }
        let check = |i: usize, j: usize, k: usize| -> bool {
            let ei = basis_vec(d, i);
            let ej = basis_vec(d, j);
            let ek = basis_vec(d, k);
            self.mul(&self.mul(&ei, &ej), &ek) == self.mul(&ei, &self.mul(&ej, &ek))
        };
        if d <= 64 {
            for i in 0..d {
                for j in 0..d {
                    for k in 0..d {
                        if !check(i, j, k) {
                            return Err(Error::Inconsistent(format!(
                                "associativity fails at ({i},{j},{k})"
                            )));
                        }
                    }
                }
            }
        } else {
            let mut rng = DetRng::new(d as u64 ^ 0xa55a);
            for _ in 0..20_000 {
                let i = rng.below(d as u64) as usize;
                let j = rng.below(d as u64) as usize;
                let k = rng.below(d as u64) as usize;
                if !check(i, j, k) {
                    return Err(Error::Inconsistent(format!(
                        "associativity fails at ({i},{j},{k})"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn unit(&self) -> &[Scalar] {
        &self.unit
    }

    pub fn zero(&self) -> Vec<Scalar> {
        vec![0; self.dim]
    }

    pub fn mul(&self, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        let f = &self.field;
        let mut out = vec![0 as Scalar; self.dim];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                if y == 0 {
                    continue;
                }
                let c = f.mul(x, y);
                for &(k, v) in &self.prod[i][j] {
                    out[k as usize] = f.add(out[k as usize], f.mul(c, v));
                }
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

    pub fn scale(&self, a: &[Scalar], c: Scalar) -> Vec<Scalar> {
        let f = &self.field;
        a.iter().map(|&x| f.mul(x, c)).collect()
    }

    pub fn is_idempotent(&self, a: &[Scalar]) -> bool {
        self.mul(a, a) == a
    }

    /// Matrix of left multiplication by `a` on the algebra.
    pub fn left_mul_matrix(&self, a: &[Scalar]) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(&self.field, self.dim, self.dim);
        for j in 0..self.dim {
            let col = self.mul(a, &basis_vec(self.dim, j));
            for (i, &v) in col.iter().enumerate() {
                if v != 0 {
                    m.set(i, j, v);
                }
            }
        }
        m
    }

    /// Evaluate a polynomial at an algebra element.
    pub fn eval_poly(&self, pol: &Poly, a: &[Scalar]) -> Vec<Scalar> {
        let mut acc = self.zero();
        for &c in pol.iter().rev() {
            acc = self.mul(&acc, a);
            if c != 0 {
                let unit_c = self.scale(&self.unit, c);
                acc = self.add(&acc, &unit_c);
            }
        }
        acc
    }

    /// Monic minimal polynomial of `a` (in the unital algebra).
    pub fn min_poly(&self, a: &[Scalar]) -> Poly {
        let f = &self.field;
        let mut span = TrackedSpan::new(f, self.dim);
        let mut power = self.unit.clone();
        let mut k = 0usize;
        loop {
            if let Some(coords) = span.express(&power) {
                // power = sum coords_i * a^i  =>  minpoly = t^k - sum coords_i t^i
                let mut mp = vec![0 as Scalar; k + 1];
                for (i, &c) in coords.iter().enumerate() {
                    mp[i] = f.neg(c);
                }
                mp[k] = 1;
                return mp;
            }
            span.insert(&power);
            power = self.mul(&power, a);
            k += 1;
        }
    }

    /// Basis of the center.
    pub fn center(&self) -> Vec<Vec<Scalar>> {
        let f = &self.field;
        let d = self.dim;
        let mut rows = DenseMatrix::zeros(f, d * d, d);
        for i in 0..d {
            let ei = basis_vec(d, i);
            for j in 0..d {
                let ej = basis_vec(d, j);
                let left = self.mul(&ei, &ej);
                let right = self.mul(&ej, &ei);
                for r in 0..d {
                    let v = f.sub(left[r], right[r]);
                    if v != 0 {
                        rows.set(i * d + r, j, v);
                    }
                }
            }
        }
        rows.nullspace()
    }
}

pub fn basis_vec(dim: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![0 as Scalar; dim];
    v[i] = 1;
    v
}

/// Echelonized span with coordinate tracking in the insertion basis.
pub struct TrackedSpan {
    field: Arc<Field>,
    ambient: usize,
    rows: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
    tracks: Vec<Vec<Scalar>>,
    inserted: usize,
}

impl TrackedSpan {
    pub fn new(field: &Arc<Field>, ambient: usize) -> TrackedSpan {
        TrackedSpan {
            field: field.clone(),
            ambient,
            rows: Vec::new(),
            pivots: Vec::new(),
            tracks: Vec::new(),
            inserted: 0,
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Insert a vector; true if independent (recorded as the next basis
    /// vector). Dependent vectors are not recorded.
    pub fn insert(&mut self, v: &[Scalar]) -> bool {
        let f = self.field.clone();
        let mut w = v.to_vec();
        let mut track = vec![0 as Scalar; self.inserted + 1];
        track[self.inserted] = 1;
        self.reduce_mut(&mut w, &mut track);
        let Some(p) = w.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = f.inv(w[p]);
        if inv != 1 {
            for x in w.iter_mut() {
                *x = f.mul(*x, inv);
            }
            for x in track.iter_mut() {
                *x = f.mul(*x, inv);
            }
        }
        let pos = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(pos, p);
        self.rows.insert(pos, w);
        self.tracks.insert(pos, track);
        self.inserted += 1;
        true
    }

    fn reduce_mut(&self, w: &mut [Scalar], track: &mut Vec<Scalar>) {
        let f = &self.field;
        for ((row, &p), t) in self.rows.iter().zip(&self.pivots).zip(&self.tracks) {
            let c = w[p];
            if c != 0 {
                let nc = f.neg(c);
                for (x, &r) in w.iter_mut().zip(row.iter()) {
                    if r != 0 {
                        *x = f.add(*x, f.mul(nc, r));
                    }
                }
                if track.len() < t.len() {
                    track.resize(t.len(), 0);
                }
                for (i, &tv) in t.iter().enumerate() {
                    if tv != 0 {
                        track[i] = f.add(track[i], f.mul(nc, tv));
                    }
                }
            }
        }
    }

    /// Coordinates of v over the inserted basis vectors, or None when v is
    /// outside the span.
    pub fn express(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(v.len(), self.ambient);
        let f = &self.field;
        let mut w = v.to_vec();
        let mut coords = vec![0 as Scalar; self.inserted];
        for ((row, &p), t) in self.rows.iter().zip(&self.pivots).zip(&self.tracks) {
            let c = w[p];
            if c != 0 {
                for (x, &r) in w.iter_mut().zip(row.iter()) {
                    if r != 0 {
                        *x = f.sub(*x, f.mul(c, r));
                    }
                }
                for (i, &tv) in t.iter().enumerate() {
                    if tv != 0 {
                        coords[i] = f.add(coords[i], f.mul(c, tv));
                    }
                }
            }
        }
        if w.iter().all(|&x| x == 0) {
            Some(coords)
        } else {
            None
        }
    }
}

/// Build a structure algebra from vectors spanning a multiplicatively closed
/// subspace of an ambient product. Returns the algebra and the pruned basis
/// (rows in the ambient space, in pruning order).
pub fn algebra_from_spanning<Mul>(
    field: &Arc<Field>,
    ambient_dim: usize,
    spanning: &[Vec<Scalar>],
    unit_ambient: &[Scalar],
    mul: Mul,
) -> Result<(StructureAlgebra, Vec<Vec<Scalar>>)>
where
    Mul: Fn(&[Scalar], &[Scalar]) -> Vec<Scalar>,
{
    let mut span = TrackedSpan::new(field, ambient_dim);
    let mut basis: Vec<Vec<Scalar>> = Vec::new();
    for v in spanning {
        if span.insert(v) {
            basis.push(v.clone());
        }
    }
    let d = basis.len();
    let mut prod = vec![vec![Vec::new(); d]; d];
    for i in 0..d {
        for j in 0..d {
            let p = mul(&basis[i], &basis[j]);
            let coords = span.express(&p).ok_or_else(|| {
                Error::Inconsistent("spanning set is not multiplicatively closed".into())
            })?;
            prod[i][j] = coords
                .iter()
                .enumerate()
                .filter(|&(_, &c)| c != 0)
                .map(|(k, &c)| (k as u32, c))
                .collect();
        }
    }
    let unit = span
        .express(unit_ambient)
        .ok_or_else(|| Error::Inconsistent("unit lies outside the spanned algebra".into()))?;
    let alg = StructureAlgebra::new(field, prod, unit)?;
    Ok((alg, basis))
}

/// Group algebra kG as a structure algebra (basis = group elements).
pub fn group_structure_algebra(
    group: &Arc<crate::group::FiniteGroup>,
    field: &Arc<Field>,
) -> StructureAlgebra {
    let n = group.order();
    let mut prod = vec![vec![Vec::new(); n]; n];
    for (i, row) in prod.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = vec![(group.mul(i as u16, j as u16) as u32, 1)];
        }
    }
    let mut unit = vec![0 as Scalar; n];
    unit[0] = 1;
    StructureAlgebra::new(field, prod, unit).expect("group algebra laws hold")
}

// ---------------------------------------------------------------------------
// Radical
// ---------------------------------------------------------------------------

/// Basis of the Jacobson radical, certified: the returned ideal is nilpotent
/// and the quotient algebra has zero radical.
pub fn radical(a: &StructureAlgebra) -> Result<Vec<Vec<Scalar>>> {
    let rad = radical_chain(a)?;
    if !ideal_is_nilpotent(a, &rad) {
        return Err(Error::Inconsistent(
            "computed radical is not nilpotent".into(),
        ));
    }
    let (quot, _reps) = quotient_algebra(a, &rad)?;
    if quot.dim() > 0 {
        let qrad = radical_chain(&quot)?;
        if !qrad.is_empty() {
            return Err(Error::Inconsistent(
                "quotient by computed radical is not semisimple".into(),
            ));
        }
    }
    Ok(rad)
}

/// Characteristic-polynomial coefficient chain: at stage i the coefficient
/// at index p^i of the regular characteristic polynomial, applied to
/// products x*y with y in the previous stage, is p^i-semilinear in x there;
/// the joint kernel after all stages with p^i <= dim is the radical.
fn radical_chain(a: &StructureAlgebra) -> Result<Vec<Vec<Scalar>>> {
    let f = a.field();
    let d = a.dim();
    let p = f.characteristic() as u64;
    let mut current: Vec<Vec<Scalar>> = (0..d).map(|i| basis_vec(d, i)).collect();
    let mut pi: u64 = 1; // p^i
    let mut stage: u32 = 0;
    while pi <= d as u64 && !current.is_empty() {
        let r = current.len();
        let mut m = DenseMatrix::zeros(f, r, r);
        for (yi, y) in current.iter().enumerate() {
            for (j, v) in current.iter().enumerate() {
                let prod = a.mul(v, y);
                let lm = a.left_mul_matrix(&prod);
                let cp = lm.char_poly();
                let coeff = cp[d - pi as usize];
                if coeff != 0 {
                    m.set(yi, j, coeff);
                }
            }
        }
        let null = m.nullspace();
        let mut next: Vec<Vec<Scalar>> = Vec::with_capacity(null.len());
        for sol in &null {
            // solutions are in Frobenius-twisted coordinates d_j = c_j^(p^i)
            let mut vec = vec![0 as Scalar; d];
            for (j, &dj) in sol.iter().enumerate() {
                if dj == 0 {
                    continue;
                }
                let cj = f.frob_inv(dj, stage);
                for (kk, &bv) in current[j].iter().enumerate() {
                    if bv != 0 {
                        vec[kk] = f.add(vec[kk], f.mul(cj, bv));
                    }
                }
            }
            next.push(vec);
        }
        let sub = Subspace::from_vectors(f, d, &next);
        current = sub.basis().to_vec();
        pi *= p;
        stage += 1;
    }
    Ok(current)
}

fn ideal_is_nilpotent(a: &StructureAlgebra, gens: &[Vec<Scalar>]) -> bool {
    if gens.is_empty() {
        return true;
    }
    let f = a.field();
    let mut power: Vec<Vec<Scalar>> = gens.to_vec();
    for _ in 0..=a.dim() {
        let mut products = Vec::new();
        for x in &power {
            for y in gens {
                products.push(a.mul(x, y));
            }
        }
        let sub = Subspace::from_vectors(f, a.dim(), &products);
        if sub.dim() == 0 {
            return true;
        }
        power = sub.basis().to_vec();
    }
    false
}

/// Quotient algebra A / span(ideal); returns the quotient and the indices of
/// the basis elements chosen as coset representatives.
pub fn quotient_algebra(
    a: &StructureAlgebra,
    ideal: &[Vec<Scalar>],
) -> Result<(StructureAlgebra, Vec<usize>)> {
    let f = a.field();
    let d = a.dim();
    let isub = Subspace::from_vectors(f, d, ideal);
    let mut reps: Vec<usize> = Vec::new();
    let mut span = Subspace::from_vectors(f, d, ideal);
    for i in 0..d {
        if span.insert(&basis_vec(d, i)) {
            reps.push(i);
        }
    }
    let q = reps.len();
    debug_assert_eq!(q + isub.dim(), d);
    let mut rep_span = TrackedSpan::new(f, d);
    for &i in &reps {
        rep_span.insert(&isub.reduce(&basis_vec(d, i)));
    }
    let coords = |v: &[Scalar]| -> Vec<Scalar> {
        rep_span
            .express(&isub.reduce(v))
            .expect("reduction lies in representative span")
    };
    let mut prod = vec![vec![Vec::new(); q]; q];
    for (i, &bi) in reps.iter().enumerate() {
        for (j, &bj) in reps.iter().enumerate() {
            let p = a.mul(&basis_vec(d, bi), &basis_vec(d, bj));
            let c = coords(&p);
            prod[i][j] = c
                .iter()
                .enumerate()
                .filter(|&(_, &x)| x != 0)
                .map(|(k, &x)| (k as u32, x))
                .collect();
        }
    }
    let unit = coords(a.unit());
    let alg = StructureAlgebra::new(f, prod, unit)?;
    Ok((alg, reps))
}

// ---------------------------------------------------------------------------
// Idempotents
// ---------------------------------------------------------------------------

/// Lift an approximate idempotent (x^2 - x in the radical) to an exact one
/// congruent to x modulo the radical, by Frobenius-power iteration.
pub fn lift_idempotent(a: &StructureAlgebra, x: &[Scalar]) -> Result<Vec<Scalar>> {
    let f = a.field();
    let rad = radical(a)?;
    let rsub = Subspace::from_vectors(f, a.dim(), &rad);
    let defect = a.sub(&a.mul(x, x), x);
    if !rsub.contains(&defect) {
        return Err(Error::Precondition(
            "x^2 - x does not lie in the radical".into(),
        ));
    }
    let p = f.characteristic() as u64;
    let mut y = x.to_vec();
    for _ in 0..=a.dim() {
        if a.is_idempotent(&y) {
            let diff = a.sub(&y, x);
            if !rsub.contains(&diff) {
                return Err(Error::Inconsistent(
                    "lifted idempotent is not congruent to the input".into(),
                ));
            }
            return Ok(y);
        }
        // y <- y^p
        let mut acc = a.unit().to_vec();
        for _ in 0..p {
            acc = a.mul(&acc, &y);
        }
        y = acc;
    }
    Err(Error::Precondition(
        "idempotent iteration did not converge within the dimension cap".into(),
    ))
}

/// Decompose the idempotent `e` into pairwise-orthogonal primitive
/// idempotents summing to e. Primitivity is certified by the local test on
/// each output (dim of fAf modulo its radical equals 1). Output order:
/// ascending image dimension, ties by coefficient vector.
pub fn primitive_decomposition(a: &StructureAlgebra, e: &[Scalar]) -> Result<Vec<Vec<Scalar>>> {
    if !a.is_idempotent(e) {
        return Err(Error::Precondition("input is not idempotent".into()));
    }
    if e.iter().all(|&c| c == 0) {
        return Ok(Vec::new());
    }
    let mut work: Vec<Vec<Scalar>> = vec![e.to_vec()];
    let mut out: Vec<Vec<Scalar>> = Vec::new();
    while let Some(f_idem) = work.pop() {
        match split_idempotent(a, &f_idem)? {
            None => out.push(f_idem),
            Some((u, v)) => {
                let mut pair = vec![u, v];
                pair.sort_by_key(|x| idem_key(a, x));
                // process the least-dimension piece first
                work.extend(pair.into_iter().rev());
            }
        }
    }
    out.sort_by_key(|x| idem_key(a, x));
    let mut total = a.zero();
    for x in &out {
        total = a.add(&total, x);
    }
    if total != e {
        return Err(Error::Inconsistent(
            "primitive summands do not sum to the input idempotent".into(),
        ));
    }
    for i in 0..out.len() {
        if !a.is_idempotent(&out[i]) {
            return Err(Error::Inconsistent("summand is not idempotent".into()));
        }
        for j in 0..out.len() {
            if i != j {
                let z = a.mul(&out[i], &out[j]);
                if z.iter().any(|&c| c != 0) {
                    return Err(Error::Inconsistent("summands are not orthogonal".into()));
                }
            }
        }
    }
    Ok(out)
}

/// Ordering key for idempotents: image dimension, then coefficients.
fn idem_key(a: &StructureAlgebra, e: &[Scalar]) -> (usize, Vec<Scalar>) {
    (a.left_mul_matrix(e).rank(), e.to_vec())
}

/// Try to split e = u + (e - u) with u a nontrivial idempotent of eAe.
/// Ok(None) means eAe is local, so e is primitive. Errors when eAe is
/// neither local nor splittable over this field.
fn split_idempotent(
    a: &StructureAlgebra,
    e: &[Scalar],
) -> Result<Option<(Vec<Scalar>, Vec<Scalar>)>> {
    let f = a.field();
    let mut corner: Vec<Vec<Scalar>> = Vec::new();
    for i in 0..a.dim() {
        let v = a.mul(&a.mul(e, &basis_vec(a.dim(), i)), e);
        corner.push(v);
    }
    let (sub, basis) = algebra_from_spanning(f, a.dim(), &corner, e, |x, y| a.mul(x, y))?;
    let rad = radical(&sub)?;
    if sub.dim() - rad.len() == 1 {
        return Ok(None);
    }
    let dim = sub.dim();
    let mut candidates: Vec<Vec<Scalar>> = (0..dim).map(|i| basis_vec(dim, i)).collect();
    let mut rng = DetRng::new(0x1dea ^ ((dim as u64) << 16) ^ a.dim() as u64);
    let q = f.order() as u64;
    for _ in 0..64 * dim {
        let v: Vec<Scalar> = (0..dim).map(|_| rng.below(q) as Scalar).collect();
        candidates.push(v);
    }
    for cand in &candidates {
        let mp = sub.min_poly(cand);
        let factors = poly::factor(f, &mp);
        if factors.len() < 2 {
            continue;
        }
        let u_poly = crt_idempotent(f, &mp, &factors, 0);
        let u_sub = sub.eval_poly(&u_poly, cand);
        if u_sub.iter().all(|&c| c == 0) || u_sub == *sub.unit() {
            continue;
        }
        debug_assert!(sub.is_idempotent(&u_sub));
        let mut u = vec![0 as Scalar; a.dim()];
        for (j, &c) in u_sub.iter().enumerate() {
            if c != 0 {
                for (kk, &bv) in basis[j].iter().enumerate() {
                    if bv != 0 {
                        u[kk] = f.add(u[kk], f.mul(c, bv));
                    }
                }
            }
        }
        let v = a.sub(e, &u);
        debug_assert!(a.is_idempotent(&u));
        debug_assert!(a.is_idempotent(&v));
        return Ok(Some((u, v)));
    }
    Err(Error::NotSplitting(format!(
        "corner algebra of dimension {} has semisimple quotient of dimension {} but no splitting element over GF({}^{})",
        sub.dim(),
        sub.dim() - rad.len(),
        f.characteristic(),
        f.degree(),
    )))
}

/// The exact idempotent of k[t]/(minpoly) congruent to 1 modulo the chosen
/// factor power and 0 modulo the others.
fn crt_idempotent(f: &Arc<Field>, mp: &Poly, factors: &[(Poly, usize)], which: usize) -> Poly {
    let mut q_i = vec![1 as Scalar];
    for _ in 0..factors[which].1 {
        q_i = poly::mul(f, &q_i, &factors[which].0);
    }
    let (m_i, r) = poly::divmod(f, mp, &q_i);
    debug_assert!(r.is_empty());
    let (g, s, _t) = poly_xgcd(f, &m_i, &q_i);
    debug_assert_eq!(g, vec![1 as Scalar], "factor groups are coprime");
    let u = poly::mul(f, &s, &m_i);
    poly::rem(f, &u, mp)
}

/// Extended gcd for polynomials: returns (g, s, t) with monic g = s*a + t*b.
fn poly_xgcd(f: &Arc<Field>, a: &Poly, b: &Poly) -> (Poly, Poly, Poly) {
    let mut r0 = a.clone();
    let mut r1 = b.clone();
    let mut s0: Poly = vec![1];
    let mut s1: Poly = Vec::new();
    let mut t0: Poly = Vec::new();
    let mut t1: Poly = vec![1];
    while !r1.is_empty() {
        let (q, r) = poly::divmod(f, &r0, &r1);
        let ns = poly::sub(f, &s0, &poly::mul(f, &q, &s1));
        let nt = poly::sub(f, &t0, &poly::mul(f, &q, &t1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = ns;
        t0 = t1;
        t1 = nt;
    }
    if let Some(&lead) = r0.last() {
        if lead != 1 {
            let inv = f.inv(lead);
            r0 = poly::scale(f, &r0, inv);
            s0 = poly::scale(f, &s0, inv);
            t0 = poly::scale(f, &t0, inv);
        }
    }
    (r0, s0, t0)
}

// ---------------------------------------------------------------------------
// Module decomposition
// ---------------------------------------------------------------------------

/// Decompose a module (given by the action matrices of the algebra basis
/// elements) into indecomposable summands: returns orthogonal idempotent
/// endomorphisms summing to the identity, one per summand, found by a
/// primitive decomposition of the endomorphism algebra.
pub fn decompose_module(a: &StructureAlgebra, actions: &[DenseMatrix]) -> Result<Vec<DenseMatrix>> {
    let f = a.field();
    if actions.len() != a.dim() {
        return Err(Error::DimensionMismatch(
            "one action matrix per algebra basis element".into(),
        ));
    }
    let s = if actions.is_empty() {
        0
    } else {
        actions[0].rows()
    };
    for m in actions {
        if m.rows() != s || m.cols() != s {
            return Err(Error::DimensionMismatch(
                "action matrices must be square".into(),
            ));
        }
    }
    // endomorphism algebra: T with T rho_i = rho_i T for all i
    let mut sys = DenseMatrix::zeros(f, a.dim() * s * s, s * s);
    for (gi, rho) in actions.iter().enumerate() {
        for r in 0..s {
            for c in 0..s {
                let row = gi * s * s + r * s + c;
                for k in 0..s {
                    let v1 = rho.get(k, c);
                    if v1 != 0 {
                        let col = r * s + k;
                        let cur = sys.get(row, col);
                        sys.set(row, col, f.add(cur, v1));
                    }
                    let v2 = rho.get(r, k);
                    if v2 != 0 {
                        let col = k * s + c;
                        let cur = sys.get(row, col);
                        sys.set(row, col, f.sub(cur, v2));
                    }
                }
            }
        }
    }
    let endo_basis_flat = sys.nullspace();
    let unit_flat = DenseMatrix::identity(f, s).row_concat();
    let (endo, basis) = algebra_from_spanning(f, s * s, &endo_basis_flat, &unit_flat, |x, y| {
        mat_flat_mul(f, s, x, y)
    })?;
    let prims = primitive_decomposition(&endo, endo.unit())?;
    let mut out = Vec::new();
    for pr in &prims {
        let mut flat = vec![0 as Scalar; s * s];
        for (j, &c) in pr.iter().enumerate() {
            if c != 0 {
                for (kk, &bv) in basis[j].iter().enumerate() {
                    if bv != 0 {
                        flat[kk] = f.add(flat[kk], f.mul(c, bv));
                    }
                }
            }
        }
        let mut m = DenseMatrix::zeros(f, s, s);
        for r in 0..s {
            for c in 0..s {
                let v = flat[r * s + c];
                if v != 0 {
                    m.set(r, c, v);
                }
            }
        }
        out.push(m);
    }
    Ok(out)
}

fn mat_flat_mul(f: &Arc<Field>, s: usize, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
    let mut out = vec![0 as Scalar; s * s];
    for r in 0..s {
        for k in 0..s {
            let a = x[r * s + k];
            if a == 0 {
                continue;
            }
            for c in 0..s {
                let b = y[k * s + c];
                if b != 0 {
                    out[r * s + c] = f.add(out[r * s + c], f.mul(a, b));
                }
            }
        }
    }
    out
}

impl DenseMatrix {
    /// Rows concatenated into a flat vector (row-major).
    pub fn row_concat(&self) -> Vec<Scalar> {
        let mut out = Vec::with_capacity(self.rows() * self.cols());
        for i in 0..self.rows() {
            out.extend(self.row(i));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::make_group;

    #[test]
    fn radical_of_kc2_gf2() {
        let g = make_group("C 2").unwrap();
        let f = Field::new(2, 1).unwrap();
        let a = group_structure_algebra(&g, &f);
        let rad = radical(&a).unwrap();
        assert_eq!(rad.len(), 1);
        assert_eq!(rad[0], vec![1, 1], "J(kC2) = span{{1 + s}}");
    }

    #[test]
    fn radical_of_kc3_gf4_semisimple() {
        let g = make_group("C 3").unwrap();
        let f = Field::new(2, 2).unwrap();
        let a = group_structure_algebra(&g, &f);
        let rad = radical(&a).unwrap();
        assert!(rad.is_empty(), "kC3 over GF(4) is semisimple");
    }

    #[test]
    fn radical_of_kv4_gf2() {
        let g = make_group("prod(C 2,C 2)").unwrap();
        let f = Field::new(2, 1).unwrap();
        let a = group_structure_algebra(&g, &f);
        let rad = radical(&a).unwrap();
        assert_eq!(rad.len(), 3, "augmentation ideal of kV4 has dimension 3");
    }

    #[test]
    fn radical_certification_runs() {
        for (spec, p, m) in [
            ("S 3", 3u32, 1u32),
            ("S 3", 2, 2),
            ("A 4", 2, 2),
            ("D 8", 2, 1),
        ] {
            let g = make_group(spec).unwrap();
            let f = Field::new(p, m).unwrap();
            let a = group_structure_algebra(&g, &f);
            radical(&a).unwrap();
        }
    }

    #[test]
    fn lift_idempotent_cases() {
        let g = make_group("C 3").unwrap();
        let f = Field::new(2, 2).unwrap();
        let a = group_structure_algebra(&g, &f);
        let one = a.unit().to_vec();
        assert_eq!(lift_idempotent(&a, &one).unwrap(), one);
        let zero = a.zero();
        assert_eq!(lift_idempotent(&a, &zero).unwrap(), zero);

        // k[eps]/(eps^2) over GF(3): 1 + eps lifts to 1
        let f3 = Field::new(3, 1).unwrap();
        let prod = vec![vec![vec![(0, 1)], vec![(1, 1)]], vec![vec![(1, 1)], vec![]]];
        let alg = StructureAlgebra::new(&f3, prod, vec![1, 0]).unwrap();
        let lifted = lift_idempotent(&alg, &[1, 1]).unwrap();
        assert_eq!(lifted, vec![1, 0]);

        // 2*1 is not an approximate idempotent: (2)^2 - 2 = 2 not in J
        assert!(lift_idempotent(&alg, &[2, 0]).is_err());
    }

    #[test]
    fn primitive_decomposition_kc3_gf4() {
        let g = make_group("C 3").unwrap();
        let f = Field::new(2, 2).unwrap();
        let a = group_structure_algebra(&g, &f);
        let prims = primitive_decomposition(&a, a.unit()).unwrap();
        assert_eq!(prims.len(), 3, "kC3 over GF(4) splits into 3 primitives");
    }

    #[test]
    fn primitive_decomposition_local_algebra() {
        let g = make_group("C 2").unwrap();
        let f = Field::new(2, 1).unwrap();
        let a = group_structure_algebra(&g, &f);
        let prims = primitive_decomposition(&a, a.unit()).unwrap();
        assert_eq!(prims.len(), 1);
        assert_eq!(prims[0], a.unit());
    }

    #[test]
    fn center_of_s3_gf3_single_block() {
        let g = make_group("S 3").unwrap();
        let f = Field::new(3, 1).unwrap();
        let a = group_structure_algebra(&g, &f);
        let center = a.center();
        assert_eq!(center.len(), 3, "3 conjugacy classes");
        let (z, _basis) =
            algebra_from_spanning(&f, 6, &center, a.unit(), |x, y| a.mul(x, y)).unwrap();
        let prims = primitive_decomposition(&z, z.unit()).unwrap();
        assert_eq!(prims.len(), 1, "kS3 at p=3 has a single block");
    }

    #[test]
    fn non_splitting_detected() {
        // kC3 over GF(2) needs GF(4) to split
        let g = make_group("C 3").unwrap();
        let f = Field::new(2, 1).unwrap();
        let a = group_structure_algebra(&g, &f);
        match primitive_decomposition(&a, a.unit()) {
            Err(Error::NotSplitting(_)) => {}
            other => panic!("expected NotSplitting, got {other:?}"),
        }
    }

    #[test]
    fn decompose_regular_module_v4_gf2() {
        let g = make_group("prod(C 2,C 2)").unwrap();
        let f = Field::new(2, 1).unwrap();
        let a = group_structure_algebra(&g, &f);
        let actions: Vec<DenseMatrix> = (0..a.dim())
            .map(|i| a.left_mul_matrix(&basis_vec(a.dim(), i)))
            .collect();
        let parts = decompose_module(&a, &actions).unwrap();
        assert_eq!(parts.len(), 1, "regular module of a local algebra");
    }

    #[test]
    fn decompose_regular_module_c3_gf4() {
        let g = make_group("C 3").unwrap();
        let f = Field::new(2, 2).unwrap();
        let a = group_structure_algebra(&g, &f);
        let actions: Vec<DenseMatrix> = (0..a.dim())
            .map(|i| a.left_mul_matrix(&basis_vec(a.dim(), i)))
            .collect();
        let parts = decompose_module(&a, &actions).unwrap();
        assert_eq!(
            parts.len(),
            3,
            "semisimple regular module splits completely"
        );
        let mut sum = DenseMatrix::zeros(&f, 3, 3);
        for p in &parts {
            for i in 0..3 {
                for j in 0..3 {
                    let v = f.add(sum.get(i, j), p.get(i, j));
                    sum.set(i, j, v);
                }
            }
        }
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(sum.get(i, j), u16::from(i == j));
            }
        }
    }

    #[test]
    fn simple_module_single_projection() {
        let g = make_group("C 2").unwrap();
        let f = Field::new(2, 1).unwrap();
        let a = group_structure_algebra(&g, &f);
        let actions = vec![DenseMatrix::identity(&f, 1), DenseMatrix::identity(&f, 1)];
        let parts = decompose_module(&a, &actions).unwrap();
        assert_eq!(parts.len(), 1);
        assert_eq!(parts[0].get(0, 0), 1);
    }

    #[test]
    fn min_poly_examples() {
        let g = make_group("C 2").unwrap();
        let f = Field::new(2, 1).unwrap();
        let a = group_structure_algebra(&g, &f);
        let mp = a.min_poly(&[0, 1]);
        assert_eq!(mp, vec![1, 0, 1], "s has minimal polynomial (t+1)^2");
        assert_eq!(a.min_poly(a.unit()), vec![1, 1]);
    }

    #[test]
    fn decompositions_are_deterministic() {
        let g = make_group("S 3").unwrap();
        let f = Field::new(2, 2).unwrap();
        let a = group_structure_algebra(&g, &f);
        let center = a.center();
        let (z, _) = algebra_from_spanning(&f, 6, &center, a.unit(), |x, y| a.mul(x, y)).unwrap();
        let p1 = primitive_decomposition(&z, z.unit()).unwrap();
        let p2 = primitive_decomposition(&z, z.unit()).unwrap();
        assert_eq!(p1, p2);
    }
}

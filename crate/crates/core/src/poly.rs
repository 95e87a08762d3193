//! Univariate polynomial arithmetic and factorization over GF(p^m).
//!
//! Polynomials are little-endian coefficient vectors with no trailing zeros.
//! Factorization is squarefree decomposition + distinct-degree + Cantor-
//! Zassenhaus equal-degree splitting with a fixed-seed generator, so results
//! are identical across runs.

use std::sync::Arc;

use crate::field::{Field, Scalar};
use crate::rng::DetRng;

pub type Poly = Vec<Scalar>;

pub fn trim(p: &mut Poly) {
    while let Some(&0) = p.last() {
        p.pop();
    }
}

pub fn degree(p: &Poly) -> Option<usize> {
    if p.is_empty() {
        None
    } else {
        Some(p.len() - 1)
    }
}

pub fn add(f: &Field, a: &Poly, b: &Poly) -> Poly {
    let mut out = vec![0; a.len().max(b.len())];
    for (i, o) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *o = f.add(x, y);
    }
    trim(&mut out);
    out
}

pub fn sub(f: &Field, a: &Poly, b: &Poly) -> Poly {
    let neg: Poly = b.iter().map(|&c| f.neg(c)).collect();
    add(f, a, &neg)
}

pub fn mul(f: &Field, a: &Poly, b: &Poly) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0 as Scalar; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    trim(&mut out);
    out
}

pub fn scale(f: &Field, a: &Poly, c: Scalar) -> Poly {
    let mut out: Poly = a.iter().map(|&x| f.mul(x, c)).collect();
    trim(&mut out);
    out
}

/// Remainder of a modulo b (b nonzero).
pub fn rem(f: &Field, a: &Poly, b: &Poly) -> Poly {
    let (_, r) = divmod(f, a, b);
    r
}

pub fn divmod(f: &Field, a: &Poly, b: &Poly) -> (Poly, Poly) {
    assert!(!b.is_empty(), "division by zero polynomial");
    let db = b.len() - 1;
    let lead_inv = f.inv(b[db]);
    let mut r = a.clone();
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![0 as Scalar; r.len() - db];
    while r.len() > db {
        let k = r.len() - 1;
        let c = f.mul(r[k], lead_inv);
        if c != 0 {
            q[k - db] = c;
            for (j, &m) in b.iter().enumerate() {
                let idx = k - db + j;
                r[idx] = f.sub(r[idx], f.mul(c, m));
            }
        }
        r.pop();
        trim(&mut r);
        if r.len() <= db {
            break;
        }
    }
    trim(&mut q);
    (q, r)
}

pub fn monic(f: &Field, a: &Poly) -> Poly {
    match a.last() {
        None => Vec::new(),
        Some(&1) => a.clone(),
        Some(&l) => scale(f, a, f.inv(l)),
    }
}

pub fn gcd(f: &Field, a: &Poly, b: &Poly) -> Poly {
    let mut x = a.clone();
    let mut y = b.clone();
    while !y.is_empty() {
        let r = rem(f, &x, &y);
        x = y;
        y = r;
    }
    monic(f, &x)
}

pub fn eval(f: &Field, a: &Poly, x: Scalar) -> Scalar {
    let mut acc = 0;
    for &c in a.iter().rev() {
        acc = f.add(f.mul(acc, x), c);
    }
    acc
}

/// a^e mod m by square-and-multiply.
pub fn powmod(f: &Field, a: &Poly, mut e: u64, m: &Poly) -> Poly {
    let mut base = rem(f, a, m);
    let mut acc = vec![1 as Scalar];
    while e > 0 {
        if e & 1 == 1 {
            acc = rem(f, &mul(f, &acc, &base), m);
        }
        base = rem(f, &mul(f, &base, &base), m);
        e >>= 1;
    }
    acc
}

pub fn derivative(f: &Field, a: &Poly) -> Poly {
    let mut out = Vec::new();
    for (i, &c) in a.iter().enumerate().skip(1) {
        let k = f.from_int(i as i64);
        out.push(f.mul(c, k));
    }
    trim(&mut out);
    out
}

/// Monic irreducible factors of `a` with multiplicities, sorted by
/// (degree, coefficient vector) for determinism.
pub fn factor(f: &Arc<Field>, a: &Poly) -> Vec<(Poly, usize)> {
    let mut out: Vec<(Poly, usize)> = Vec::new();
    let monic_a = monic(f, a);
    if monic_a.len() <= 1 {
        return out;
    }
    for (sqfree, mult) in squarefree_parts(f, &monic_a) {
        for irred in factor_squarefree(f, &sqfree) {
            if let Some(e) = out.iter_mut().find(|(p, _)| *p == irred) {
                e.1 += mult;
            } else {
                out.push((irred, mult));
            }
        }
    }
    out.sort_by(|a, b| (a.0.len(), &a.0).cmp(&(b.0.len(), &b.0)));
    out
}

/// Yoneda-free squarefree decomposition: returns (g_i, i) with
/// a = prod g_i^i and every g_i squarefree; handles the char-p collapse
/// f' = 0 by extracting p-th roots of coefficients.
fn squarefree_parts(f: &Arc<Field>, a: &Poly) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    squarefree_rec(f, a, 1, &mut out);
    out
}

fn squarefree_rec(f: &Arc<Field>, a: &Poly, outer: usize, out: &mut Vec<(Poly, usize)>) {
    if a.len() <= 1 {
        return;
    }
    let da = derivative(f, a);
    if da.is_empty() {
        // a = b(t^p); take p-th roots of coefficients.
        let p = f.characteristic() as usize;
        let mut b = Vec::new();
        for (i, &c) in a.iter().enumerate() {
            if i % p == 0 {
                b.push(f.frob_inv(c, 1));
            } else {
                debug_assert_eq!(c, 0);
            }
        }
        trim(&mut b);
        squarefree_rec(f, &b, outer * p, out);
        return;
    }
    let mut c = gcd(f, a, &da);
    let mut w = divmod(f, a, &c).0;
    let mut i = 1usize;
    while w.len() > 1 {
        let y = gcd(f, &w, &c);
        let fac = divmod(f, &w, &y).0;
        if fac.len() > 1 {
            out.push((monic(f, &fac), i * outer));
        }
        w = y.clone();
        c = divmod(f, &c, &y).0;
        i += 1;
    }
    if c.len() > 1 {
        squarefree_rec(f, &c, outer, out);
    }
}

/// Factor a squarefree monic polynomial into monic irreducibles.
fn factor_squarefree(f: &Arc<Field>, a: &Poly) -> Vec<Poly> {
    let mut out = Vec::new();
    let q = f.order() as u64;
    let mut rest = a.clone();
    // Distinct-degree: gcd with t^(q^d) - t peels the degree-d part.
    let mut d = 1usize;
    let mut tq = vec![0 as Scalar, 1]; // running t^(q^d) mod rest, starting at t
    while rest.len() > 1 && 2 * d < rest.len() {
        tq = poly_frobenius_power(f, &tq, q, &rest);
        let t_poly: Poly = vec![0, 1];
        let probe = sub(f, &tq, &t_poly);
        let g = gcd(f, &probe, &rest);
        if g.len() > 1 {
            equal_degree_split(f, &g, d, &mut out);
            rest = divmod(f, &rest, &g).0;
            tq = rem(f, &tq, &rest);
        }
        d += 1;
    }
    if rest.len() > 1 {
        out.push(monic(f, &rest));
    }
    out.sort();
    out
}

/// t^(q) applied to `base` modulo m, i.e. base^q mod m.
fn poly_frobenius_power(f: &Arc<Field>, base: &Poly, q: u64, m: &Poly) -> Poly {
    powmod(f, base, q, m)
}

/// Cantor-Zassenhaus on a product of distinct irreducibles of equal degree d.
fn equal_degree_split(f: &Arc<Field>, a: &Poly, d: usize, out: &mut Vec<Poly>) {
    let n = a.len() - 1;
    if n == d {
        out.push(monic(f, a));
        return;
    }
    let q = f.order() as u64;
    let mut rng = DetRng::new(0x5eed_0001 ^ (n as u64) << 8 ^ d as u64);
    loop {
        // Random polynomial of degree < n.
        let mut r: Poly = (0..n).map(|_| (rng.next_u64() % q) as Scalar).collect();
        trim(&mut r);
        if r.len() <= 1 {
            continue;
        }
        let g0 = gcd(f, &r, a);
        let g = if g0.len() > 1 && g0.len() - 1 < n {
            g0
        } else if q % 2 == 1 {
            // r^((q^d-1)/2) - 1 splits odd-characteristic products.
            let e = (pow_u64(q, d as u32) - 1) / 2;
            let s = powmod(f, &r, e, a);
            let one: Poly = vec![1];
            let probe = sub(f, &s, &one);
            gcd(f, &probe, a)
        } else {
            // Characteristic 2: trace map T(r) = r + r^2 + r^4 + ... .
            let mut acc = r.clone();
            let mut term = r.clone();
            let steps = d as u32 * f.degree() - 1;
            for _ in 0..steps {
                term = rem(f, &mul(f, &term, &term), a);
                acc = add(f, &acc, &term);
            }
            gcd(f, &acc, a)
        };
        if g.len() > 1 && g.len() - 1 < n {
            equal_degree_split(f, &g, d, out);
            let rest = divmod(f, a, &g).0;
            equal_degree_split(f, &rest, d, out);
            return;
        }
    }
}

fn pow_u64(b: u64, e: u32) -> u64 {
    b.pow(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly_eq_product(f: &Arc<Field>, factors: &[(Poly, usize)], target: &Poly) {
        let mut acc = vec![1 as Scalar];
        for (p, m) in factors {
            for _ in 0..*m {
                acc = mul(f, &acc, p);
            }
        }
        assert_eq!(&monic(f, &acc), &monic(f, target));
    }

    #[test]
    fn gcd_and_divmod() {
        let f = Field::new(3, 1).unwrap();
        // (t+1)(t+2) = t^2 + 3t + 2 = t^2 + 2 over GF(3)
        let a = vec![2, 0, 1];
        let b = vec![1, 1]; // t + 1
        let g = gcd(&f, &a, &b);
        assert_eq!(g, vec![1, 1]);
        let (q, r) = divmod(&f, &a, &b);
        assert!(r.is_empty());
        assert_eq!(q, vec![2, 1]); // t + 2
    }

    #[test]
    fn factor_with_repeats_gf2() {
        let f = Field::new(2, 1).unwrap();
        // t^2(t+1)(t^2+t+1)
        let t2 = vec![0, 0, 1];
        let t1 = vec![1, 1];
        let irr = vec![1, 1, 1];
        let target = mul(&f, &mul(&f, &t2, &t1), &irr);
        let factors = factor(&f, &target);
        poly_eq_product(&f, &factors, &target);
        assert_eq!(factors.len(), 3);
        assert!(factors.contains(&(vec![0, 1], 2)));
        assert!(factors.contains(&(vec![1, 1], 1)));
        assert!(factors.contains(&(vec![1, 1, 1], 1)));
    }

    #[test]
    fn factor_char_p_power_collapse() {
        let f = Field::new(3, 1).unwrap();
        // (t+1)^3 = t^3 + 1 over GF(3): derivative vanishes.
        let target = vec![1, 0, 0, 1];
        let factors = factor(&f, &target);
        assert_eq!(factors, vec![(vec![1, 1], 3)]);
    }

    #[test]
    fn factor_over_gf4() {
        let f = Field::new(2, 2).unwrap();
        // t^2 + t + 1 splits over GF(4) into (t + w)(t + w^2), w = code 2.
        let target = vec![1, 1, 1];
        let factors = factor(&f, &target);
        assert_eq!(factors.len(), 2);
        poly_eq_product(&f, &factors, &target);
        for (p, m) in &factors {
            assert_eq!(*m, 1);
            assert_eq!(p.len(), 2);
        }
    }

    #[test]
    fn factor_large_irreducible() {
        let f = Field::new(2, 1).unwrap();
        // t^4 + t + 1 is irreducible over GF(2).
        let target = vec![1, 1, 0, 0, 1];
        let factors = factor(&f, &target);
        assert_eq!(factors, vec![(target.clone(), 1)]);
    }
}

//! Exact arithmetic in small finite fields GF(p^m).
//!
//! Elements are encoded as integers in `0..p^m`: the base-p digits of the
//! code are the coefficients of the representative polynomial in the
//! quotient GF(p)[t]/(modulus). The modulus is always the lexicographically
//! least monic irreducible polynomial of its degree, so a field is
//! determined by (p, m) alone and identical across runs.
//!
//! Fields of order at most 256 carry full multiplication and inversion
//! tables; larger fields (up to 2^16) fall back to on-the-fly polynomial
//! arithmetic.

use std::fmt;
use std::sync::Arc;

use crate::error::Error;

/// A field element code. Valid codes lie in `0..field.order`.
pub type Scalar = u16;

const TABLE_LIMIT: u32 = 256;

/// A concrete finite field GF(p^m).
pub struct Field {
    p: u32,
    m: u32,
    order: u32,
    /// Modulus coefficients, little-endian, degree m (leading coefficient 1).
    modulus: Vec<u32>,
    mul_table: Vec<Scalar>,
    inv_table: Vec<Scalar>,
    add_table: Vec<Scalar>,
    neg_table: Vec<Scalar>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.p, self.m)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.m == other.m
    }
}
impl Eq for Field {}

impl Field {
    /// The prime field GF(p).
    pub fn prime(p: u32) -> Result<Arc<Field>, Error> {
        Field::new(p, 1)
    }

    /// GF(p^m) with the canonical modulus.
    pub fn new(p: u32, m: u32) -> Result<Arc<Field>, Error> {
        if !is_prime(p) {
            return Err(Error::BadField(format!("{p} is not prime")));
        }
        if m == 0 {
            return Err(Error::BadField("extension degree must be >= 1".into()));
        }
        let order = (p as u64)
            .checked_pow(m)
            .filter(|&o| o <= 1 << 16)
            .ok_or_else(|| Error::BadField(format!("field order {p}^{m} exceeds 2^16")))?
            as u32;
        let modulus = least_irreducible(p, m);
        let mut field = Field {
            p,
            m,
            order,
            modulus,
            mul_table: Vec::new(),
            inv_table: Vec::new(),
            add_table: Vec::new(),
            neg_table: Vec::new(),
        };
        if order <= TABLE_LIMIT {
            field.build_tables();
            field.check_axioms()?;
        }
        Ok(Arc::new(field))
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> Scalar {
        0
    }

    pub fn one(&self) -> Scalar {
        1
    }

    /// Reduce an integer into the prime subfield.
    pub fn from_int(&self, n: i64) -> Scalar {
        let r = n.rem_euclid(self.p as i64) as u32;
        r as Scalar
    }

    pub fn add(&self, a: Scalar, b: Scalar) -> Scalar {
        if !self.add_table.is_empty() {
            return self.add_table[a as usize * self.order as usize + b as usize];
        }
        self.add_slow(a, b)
    }

    pub fn sub(&self, a: Scalar, b: Scalar) -> Scalar {
        self.add(a, self.neg(b))
    }

    pub fn neg(&self, a: Scalar) -> Scalar {
        if !self.neg_table.is_empty() {
            return self.neg_table[a as usize];
        }
        self.neg_slow(a)
    }

    pub fn mul(&self, a: Scalar, b: Scalar) -> Scalar {
        if !self.mul_table.is_empty() {
            return self.mul_table[a as usize * self.order as usize + b as usize];
        }
        self.mul_slow(a, b)
    }

    /// Multiplicative inverse. Panics on zero: callers guard pivots.
    pub fn inv(&self, a: Scalar) -> Scalar {
        assert!(a != 0, "inverse of zero");
        if !self.inv_table.is_empty() {
            return self.inv_table[a as usize];
        }
        self.pow(a, self.order as u64 - 2)
    }

    pub fn div(&self, a: Scalar, b: Scalar) -> Scalar {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: Scalar, mut e: u64) -> Scalar {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Frobenius p-th power.
    pub fn frob(&self, a: Scalar) -> Scalar {
        self.pow(a, self.p as u64)
    }

    /// Inverse of the i-fold Frobenius x -> x^(p^i).
    pub fn frob_inv(&self, a: Scalar, i: u32) -> Scalar {
        // Frobenius has order m on GF(p^m).
        let k = i % self.m;
        let steps = (self.m - k) % self.m;
        let mut out = a;
        for _ in 0..steps {
            out = self.frob(out);
        }
        out
    }

    pub fn is_gf2(&self) -> bool {
        self.order == 2
    }

    fn digits(&self, a: Scalar) -> Vec<u32> {
        let mut v = vec![0u32; self.m as usize];
        let mut a = a as u32;
        for d in v.iter_mut() {
            *d = a % self.p;
            a /= self.p;
        }
        v
    }

    fn encode(&self, digits: &[u32]) -> Scalar {
        let mut acc = 0u32;
        for &d in digits.iter().rev() {
            acc = acc * self.p + d % self.p;
        }
        acc as Scalar
    }

    fn add_slow(&self, a: Scalar, b: Scalar) -> Scalar {
        let da = self.digits(a);
        let db = self.digits(b);
        let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
        self.encode(&sum)
    }

    fn neg_slow(&self, a: Scalar) -> Scalar {
        let da = self.digits(a);
        let neg: Vec<u32> = da.iter().map(|x| (self.p - x) % self.p).collect();
        self.encode(&neg)
    }

    fn mul_slow(&self, a: Scalar, b: Scalar) -> Scalar {
        let da = self.digits(a);
        let db = self.digits(b);
        let m = self.m as usize;
        let mut prod = vec![0u64; 2 * m];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] += (x as u64) * (y as u64);
            }
        }
        // Reduce modulo the monic modulus.
        for k in (m..2 * m).rev() {
            let c = (prod[k] % self.p as u64) as u32;
            if c == 0 {
                prod[k] = 0;
                continue;
            }
            for (j, &md) in self.modulus.iter().enumerate().take(m) {
                // prod[k - m + j] -= c * modulus[j]
                let sub = (c as u64 * md as u64) % self.p as u64;
                let cur = prod[k - m + j] % self.p as u64;
                prod[k - m + j] = (cur + self.p as u64 - sub) % self.p as u64;
            }
            prod[k] = 0;
        }
        let digits: Vec<u32> = prod[..m]
            .iter()
            .map(|&x| (x % self.p as u64) as u32)
            .collect();
        self.encode(&digits)
    }

    fn build_tables(&mut self) {
        let n = self.order as usize;
        self.add_table = vec![0; n * n];
        self.mul_table = vec![0; n * n];
        self.neg_table = vec![0; n];
        self.inv_table = vec![0; n];
        for a in 0..n {
            self.neg_table[a] = self.neg_slow(a as Scalar);
            for b in 0..n {
                self.add_table[a * n + b] = self.add_slow(a as Scalar, b as Scalar);
                self.mul_table[a * n + b] = self.mul_slow(a as Scalar, b as Scalar);
            }
        }
        for a in 1..n {
            let mut found = None;
            for b in 1..n {
                if self.mul_table[a * n + b] == 1 {
                    found = Some(b as Scalar);
                    break;
                }
            }
            self.inv_table[a] = found.expect("nonzero element without inverse");
        }
    }

    fn check_axioms(&self) -> Result<(), Error> {
        let n = self.order as usize;
        for a in 1..n {
            if self.mul(a as Scalar, self.inv_table[a]) != 1 {
                return Err(Error::BadField(format!(
                    "inverse law fails for element {a} in {self:?}"
                )));
            }
        }
        Ok(())
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Lexicographically least monic irreducible polynomial of degree m over GF(p),
/// encoded little-endian with leading 1. Irreducibility is certified by trial
/// division against every monic polynomial of degree between 1 and m/2.
fn least_irreducible(p: u32, m: u32) -> Vec<u32> {
    if m == 1 {
        return vec![0, 1]; // t itself; never used for reduction in the prime field
    }
    let pm = (p as u64).pow(m);
    'cand: for code in 0..pm {
        let mut poly: Vec<u32> = Vec::with_capacity(m as usize + 1);
        let mut c = code;
        for _ in 0..m {
            poly.push((c % p as u64) as u32);
            c /= p as u64;
        }
        poly.push(1);
        // Trial division by all monic polynomials of degree 1..=m/2.
        for d in 1..=(m / 2) {
            let pd = (p as u64).pow(d);
            for dc in 0..pd {
                let mut div: Vec<u32> = Vec::with_capacity(d as usize + 1);
                let mut c = dc;
                for _ in 0..d {
                    div.push((c % p as u64) as u32);
                    c /= p as u64;
                }
                div.push(1);
                if poly_divides(p, &div, &poly) {
                    continue 'cand;
                }
            }
        }
        return poly;
    }
    unreachable!("irreducible polynomial of degree {m} over GF({p}) exists");
}

/// Does `div` divide `poly` over GF(p)? Both monic, little-endian.
fn poly_divides(p: u32, div: &[u32], poly: &[u32]) -> bool {
    let mut rem: Vec<u32> = poly.to_vec();
    let dd = div.len() - 1;
    while rem.len() > dd {
        let k = rem.len() - 1;
        let c = rem[k];
        if c != 0 {
            for (j, &m) in div.iter().enumerate() {
                let idx = k - dd + j;
                let sub = ((c as u64 * m as u64) % p as u64) as u32;
                rem[idx] = (rem[idx] + p - sub) % p;
            }
        }
        rem.pop();
    }
    rem.iter().all(|&c| c == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exhaustive_axioms(f: &Field) {
        let n = f.order() as usize;
        for a in 0..n as u32 {
            let a = a as Scalar;
            assert_eq!(f.add(a, 0), a);
            assert_eq!(f.mul(a, 1), a);
            assert_eq!(f.add(a, f.neg(a)), 0);
            if a != 0 {
                assert_eq!(f.mul(a, f.inv(a)), 1, "a*a^-1 = 1 for {a}");
            }
            for b in 0..n as u32 {
                let b = b as Scalar;
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                for c in 0..n as u32 {
                    let c = c as Scalar;
                    assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                    assert_eq!(
                        f.mul(a, f.add(b, c)),
                        f.add(f.mul(a, b), f.mul(a, c)),
                        "distributivity in {f:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn field_axioms_exhaustive_up_to_256() {
        // every prime power p^m <= 256
        let mut orders = 0;
        for p in 2u32..=251 {
            if !super::is_prime(p) {
                continue;
            }
            let mut m = 1u32;
            while (p as u64).pow(m) <= 256 {
                let f = Field::new(p, m).unwrap();
                exhaustive_axioms(&f);
                orders += 1;
                m += 1;
            }
        }
        assert_eq!(orders, 70, "number of prime powers up to 256");
    }

    #[test]
    fn canonical_moduli() {
        let f4 = Field::new(2, 2).unwrap();
        assert_eq!(f4.modulus(), &[1, 1, 1]); // t^2 + t + 1
        let f9 = Field::new(3, 2).unwrap();
        assert_eq!(f9.modulus(), &[1, 0, 1]); // t^2 + 1
        let f8 = Field::new(2, 3).unwrap();
        assert_eq!(f8.modulus(), &[1, 1, 0, 1]); // t^3 + t + 1
    }

    #[test]
    fn large_field_roundtrip() {
        // GF(2^9) = 512 > table limit: slow path.
        let f = Field::new(2, 9).unwrap();
        assert_eq!(f.order(), 512);
        let a: Scalar = 0b101010101;
        assert_eq!(f.mul(a, f.inv(a)), 1);
        assert_eq!(f.add(a, a), 0);
        let b: Scalar = 37;
        assert_eq!(f.mul(a, b), f.mul(b, a));
    }

    #[test]
    fn frobenius_inverse() {
        let f = Field::new(3, 2).unwrap();
        for a in 0..f.order() as Scalar {
            let up = f.pow(a, 3);
            assert_eq!(f.frob_inv(up, 1), a);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(Field::new(4, 1).is_err());
        assert!(Field::new(2, 0).is_err());
        assert!(Field::new(2, 17).is_err());
    }
}

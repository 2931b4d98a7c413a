//! Table-based finite fields `F_{p^e}` with `p^e ≤ 2^16`.
//!
//! Elements are `u16` values in `0..q`. The base-`p` digits of the value are
//! the coefficients of the element written in the power basis of the modulus:
//! value `Σ d_i p^i` ↔ polynomial `Σ d_i t^i`. For `p = 2` this is plain bit
//! packing and addition is XOR.
//!
//! The defining modulus is the monic irreducible polynomial of degree `e`
//! whose little-endian digit encoding is numerically least, so every run (and
//! every serialized artifact) agrees on the representation.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("field size {p}^{e} exceeds 2^16")]
    TooLarge { p: u32, e: u32 },
    #[error("degree must be at least 1")]
    ZeroDegree,
}

/// A concrete finite field `F_q`, `q = p^e ≤ 2^16`, with multiplication,
/// inversion, squaring, trace and half-trace tables precomputed.
pub struct Field {
    p: u32,
    e: u32,
    q: u32,
    /// Monic modulus of degree `e`, little-endian digits in `0..p`
    /// (length `e + 1`, leading digit 1).
    modulus: Vec<u16>,
    /// Fixed primitive element (least value of full multiplicative order).
    generator: u16,
    /// `exp[i] = generator^i` for `i` in `0..2(q-1)` (doubled to skip a mod).
    exp: Vec<u16>,
    /// `log[x]` for `x` in `1..q`; `log[0]` is a sentinel and never read.
    log: Vec<u32>,
    inv: Vec<u16>,
    sq: Vec<u16>,
    /// Absolute trace to `F_p`, as a value in `0..p`.
    trace: Vec<u8>,
    /// For `p = 2`: `half_trace[y]` solves `w² + w = y` when `trace[y] = 0`,
    /// `u16::MAX` otherwise. Empty for odd `p`.
    half_trace: Vec<u16>,
}

impl std::fmt::Debug for Field {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Field(p={}, e={}, q={})", self.p, self.e, self.q)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.e == other.e
    }
}
impl Eq for Field {}

fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

// ---------------------------------------------------------------------------
// Raw polynomial arithmetic over F_p (little-endian digit vectors), used only
// during construction before the tables exist.
// ---------------------------------------------------------------------------

fn poly_trim(a: &mut Vec<u16>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_rem(a: &[u16], b: &[u16], p: u32) -> Vec<u16> {
    debug_assert!(!b.is_empty());
    let mut r: Vec<u16> = a.to_vec();
    poly_trim(&mut r);
    let db = b.len() - 1;
    let lead_inv = mod_inv(b[db] as u32, p);
    while r.len() > db {
        let dr = r.len() - 1;
        let c = (r[dr] as u32 * lead_inv) % p;
        if c != 0 {
            for i in 0..=db {
                let idx = dr - db + i;
                let v = (r[idx] as u32 + p - (c * b[i] as u32) % p) % p;
                r[idx] = v as u16;
            }
        }
        r.pop();
        poly_trim(&mut r);
        if r.is_empty() {
            break;
        }
    }
    r
}

fn mod_inv(a: u32, p: u32) -> u32 {
    // p is prime and a ≠ 0 mod p.
    let mut result = 1u64;
    let mut base = a as u64 % p as u64;
    let mut exp = p as u64 - 2;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * base % p as u64;
        }
        base = base * base % p as u64;
        exp >>= 1;
    }
    result as u32
}

/// Decode the value `n` as the little-endian digit vector of a monic degree-e
/// polynomial: digits of `n` base p, then a leading 1.
fn decode_monic(n: u32, p: u32, e: u32) -> Vec<u16> {
    let mut digits = Vec::with_capacity(e as usize + 1);
    let mut n = n;
    for _ in 0..e {
        digits.push((n % p) as u16);
        n /= p;
    }
    digits.push(1);
    digits
}

fn poly_is_irreducible(f: &[u16], p: u32) -> bool {
    let e = f.len() - 1;
    if e == 1 {
        return true;
    }
    // Trial division by every monic polynomial of degree 1..=e/2. The search
    // space is at most p^(e/2 + 1) candidates, tiny for table-range fields.
    for d in 1..=e / 2 {
        let count = (p as u64).pow(d as u32);
        for n in 0..count {
            let g = decode_monic(n as u32, p, d as u32);
            if poly_rem(f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

fn value_to_digits(x: u32, p: u32, e: u32) -> Vec<u16> {
    let mut v = Vec::with_capacity(e as usize);
    let mut x = x;
    for _ in 0..e {
        v.push((x % p) as u16);
        x /= p;
    }
    v
}

fn digits_to_value(d: &[u16], p: u32) -> u32 {
    let mut v = 0u32;
    for &c in d.iter().rev() {
        v = v * p + c as u32;
    }
    v
}

impl Field {
    /// Construct `F_{p^e}` with the deterministic least irreducible modulus.
    pub fn new(p: u32, e: u32) -> Result<Arc<Field>, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if e == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let q = (p as u64).checked_pow(e).filter(|&q| q <= 1 << 16).ok_or(FieldError::TooLarge { p, e })? as u32;

        // Least monic irreducible of degree e.
        let modulus = (0..)
            .map(|n| decode_monic(n, p, e))
            .find(|f| poly_is_irreducible(f, p))
            .expect("irreducible polynomial of every degree exists");

        let mut field = Field {
            p,
            e,
            q,
            modulus,
            generator: 0,
            exp: Vec::new(),
            log: Vec::new(),
            inv: Vec::new(),
            sq: Vec::new(),
            trace: Vec::new(),
            half_trace: Vec::new(),
        };
        field.build_tables();
        Ok(Arc::new(field))
    }

    /// Cached constructor: fields are immutable, so every caller for the same
    /// `(p, e)` shares one instance.
    pub fn get(p: u32, e: u32) -> Result<Arc<Field>, FieldError> {
        static CACHE: OnceLock<Mutex<HashMap<(u32, u32), Arc<Field>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(f) = cache.lock().unwrap().get(&(p, e)) {
            return Ok(Arc::clone(f));
        }
        let f = Field::new(p, e)?;
        cache.lock().unwrap().insert((p, e), Arc::clone(&f));
        Ok(f)
    }

    /// Multiplication straight from the digit representation, used only while
    /// bootstrapping the tables.
    fn raw_mul(&self, a: u16, b: u16) -> u16 {
        let pa = value_to_digits(a as u32, self.p, self.e);
        let pb = value_to_digits(b as u32, self.p, self.e);
        let mut prod = vec![0u16; pa.len() + pb.len()];
        for (i, &x) in pa.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in pb.iter().enumerate() {
                prod[i + j] = ((prod[i + j] as u32 + x as u32 * y as u32) % self.p) as u16;
            }
        }
        let mut r = poly_rem(&prod, &self.modulus, self.p);
        r.resize(self.e as usize, 0);
        digits_to_value(&r, self.p) as u16
    }

    fn raw_pow(&self, a: u16, mut n: u64) -> u16 {
        let mut result = 1u16;
        let mut base = a;
        while n > 0 {
            if n & 1 == 1 {
                result = self.raw_mul(result, base);
            }
            base = self.raw_mul(base, base);
            n >>= 1;
        }
        result
    }

    fn build_tables(&mut self) {
        let q = self.q;
        let order = q - 1;
        let prime_factors: Vec<u32> = {
            let mut n = order;
            let mut fs = Vec::new();
            let mut d = 2;
            while d as u64 * d as u64 <= n as u64 {
                if n % d == 0 {
                    fs.push(d);
                    while n % d == 0 {
                        n /= d;
                    }
                }
                d += 1;
            }
            if n > 1 {
                fs.push(n);
            }
            fs
        };
        self.generator = (1..q)
            .map(|g| g as u16)
            .find(|&g| {
                prime_factors.iter().all(|&r| self.raw_pow(g, (order / r) as u64) != 1)
            })
            .expect("finite field has a primitive element");

        self.exp = vec![1u16; (2 * order.max(1)) as usize];
        self.log = vec![0u32; q as usize];
        let mut x = 1u16;
        for i in 0..order {
            self.exp[i as usize] = x;
            self.log[x as usize] = i;
            x = self.raw_mul(x, self.generator);
        }
        debug_assert_eq!(x, 1, "generator order must be q-1");
        for i in 0..order {
            self.exp[(order + i) as usize] = self.exp[i as usize];
        }

        self.inv = vec![0u16; q as usize];
        self.sq = vec![0u16; q as usize];
        for a in 1..q {
            self.inv[a as usize] = self.exp[(order - self.log[a as usize]) as usize % order.max(1) as usize];
        }
        for a in 0..q {
            self.sq[a as usize] = self.raw_mul(a as u16, a as u16);
        }

        self.trace = vec![0u8; q as usize];
        for a in 0..q {
            // Tr(a) = a + a^p + ... + a^{p^{e-1}}, an element of the prime field.
            let mut t = 0u16;
            let mut x = a as u16;
            for _ in 0..self.e {
                t = self.add(t, x);
                x = self.raw_pow(x, self.p as u64);
            }
            debug_assert!((t as u32) < self.p, "trace lands in the prime field");
            self.trace[a as usize] = t as u8;
        }

        if self.p == 2 {
            self.half_trace = vec![u16::MAX; q as usize];
            for w in 0..q as u16 {
                let y = self.add(self.sq[w as usize], w);
                if self.half_trace[y as usize] == u16::MAX {
                    self.half_trace[y as usize] = w;
                }
            }
        }
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }
    #[inline]
    pub fn e(&self) -> u32 {
        self.e
    }
    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }
    /// Little-endian digits of the modulus (length `e + 1`).
    pub fn modulus(&self) -> &[u16] {
        &self.modulus
    }
    #[inline]
    pub fn generator(&self) -> u16 {
        self.generator
    }

    #[inline]
    pub fn add(&self, a: u16, b: u16) -> u16 {
        if self.p == 2 {
            return a ^ b;
        }
        let (mut out, mut mult) = (0u32, 1u32);
        let (mut a, mut b) = (a as u32, b as u32);
        while a != 0 || b != 0 {
            out += mult * ((a % self.p + b % self.p) % self.p);
            mult *= self.p;
            a /= self.p;
            b /= self.p;
        }
        out as u16
    }

    #[inline]
    pub fn neg(&self, a: u16) -> u16 {
        if self.p == 2 {
            return a;
        }
        let (mut out, mut mult) = (0u32, 1u32);
        let mut a = a as u32;
        while a != 0 {
            out += mult * ((self.p - a % self.p) % self.p);
            mult *= self.p;
            a /= self.p;
        }
        out as u16
    }

    #[inline]
    pub fn sub(&self, a: u16, b: u16) -> u16 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u16, b: u16) -> u16 {
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
    }

    /// Panics on zero input in debug builds; returns 0 for 0 in release.
    #[inline]
    pub fn inv(&self, a: u16) -> u16 {
        debug_assert_ne!(a, 0, "inverse of zero");
        self.inv[a as usize]
    }

    #[inline]
    pub fn div(&self, a: u16, b: u16) -> u16 {
        self.mul(a, self.inv(b))
    }

    #[inline]
    pub fn sqr(&self, a: u16) -> u16 {
        self.sq[a as usize]
    }

    pub fn pow(&self, a: u16, mut n: u64) -> u16 {
        if a == 0 {
            return if n == 0 { 1 } else { 0 };
        }
        let order = (self.q - 1) as u64;
        if order > 0 {
            n %= order;
        }
        self.exp[((self.log[a as usize] as u64 * n) % order.max(1)) as usize]
    }

    /// Frobenius `x ↦ x^p`.
    #[inline]
    pub fn frob(&self, a: u16) -> u16 {
        if self.p == 2 {
            self.sq[a as usize]
        } else {
            self.pow(a, self.p as u64)
        }
    }

    /// Absolute trace to the prime field, returned as a value in `0..p`.
    #[inline]
    pub fn trace(&self, a: u16) -> u8 {
        self.trace[a as usize]
    }

    /// For `p = 2` only: a solution `w` of `w² + w = y`, if one exists.
    #[inline]
    pub fn half_trace(&self, y: u16) -> Option<u16> {
        debug_assert_eq!(self.p, 2);
        match self.half_trace[y as usize] {
            u16::MAX => None,
            w => Some(w),
        }
    }

    /// Embed an element of a subfield `F_{p^d}` (same `p`, `d | e`) into this
    /// field, sending generator to generator^((q-1)/(q_sub-1)).
    pub fn embed_from(&self, sub: &Field, x: u16) -> u16 {
        assert_eq!(self.p, sub.p, "embedding requires equal characteristic");
        assert_eq!(self.e % sub.e, 0, "subfield degree must divide");
        if x == 0 {
            return 0;
        }
        if sub.e == self.e {
            return x;
        }
        let ratio = ((self.q - 1) / (sub.q - 1)) as u64;
        self.exp[((sub.log[x as usize] as u64 * ratio) % (self.q - 1) as u64) as usize]
    }

    /// Iterate all field elements, `0..q`.
    pub fn elements(&self) -> impl Iterator<Item = u16> {
        0..self.q as u16
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f2_basics() {
        let f = Field::get(2, 1).unwrap();
        assert_eq!(f.q(), 2);
        assert_eq!(f.add(1, 1), 0);
        assert_eq!(f.mul(1, 1), 1);
        assert_eq!(f.inv(1), 1);
    }

    #[test]
    fn f4_modulus_and_generator_relation() {
        let f = Field::get(2, 2).unwrap();
        // The only irreducible quadratic over F_2: x² + x + 1.
        assert_eq!(f.modulus(), &[1, 1, 1]);
        let g = f.generator();
        assert_eq!(f.sqr(g), f.add(g, 1), "g² = g + 1 in F_4");
    }

    #[test]
    fn f4096_generator_order() {
        let f = Field::get(2, 12).unwrap();
        assert_eq!(f.q(), 4096);
        let g = f.generator();
        // Multiplicative order is exactly 4095: g^4095 = 1 and g^(4095/r) ≠ 1
        // for each prime r | 4095 = 3²·5·7·13.
        assert_eq!(f.pow(g, 4095), 1);
        for r in [3u64, 5, 7, 13] {
            assert_ne!(f.pow(g, 4095 / r), 1);
        }
    }

    #[test]
    fn inverses_and_frobenius_every_element() {
        for (p, e) in [(2, 1), (2, 4), (3, 2), (5, 1), (7, 2), (3, 3)] {
            let f = Field::get(p, e).unwrap();
            let mut frob_image = vec![false; f.q() as usize];
            for a in f.elements() {
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a)), 1, "x·x⁻¹ = 1 in F_{}^{}", p, e);
                }
                let fa = f.frob(a);
                frob_image[fa as usize] = true;
                for b in f.elements() {
                    if (a as u32 + b as u32) % 17 == 0 {
                        // Sampled additivity of Frobenius.
                        assert_eq!(f.frob(f.add(a, b)), f.add(f.frob(a), f.frob(b)));
                    }
                }
            }
            assert!(frob_image.iter().all(|&x| x), "Frobenius is bijective");
        }
    }

    #[test]
    fn half_trace_solves_artin_schreier() {
        for e in [1u32, 2, 3, 4, 8, 11, 12] {
            let f = Field::get(2, e).unwrap();
            for y in f.elements() {
                match f.half_trace(y) {
                    Some(w) => assert_eq!(f.add(f.sqr(w), w), y),
                    None => assert_eq!(f.trace(y), 1, "unsolvable iff trace 1"),
                }
            }
        }
    }

    #[test]
    fn subfield_embedding_is_a_ring_map() {
        let f4 = Field::get(2, 2).unwrap();
        let f16 = Field::get(2, 4).unwrap();
        for a in f4.elements() {
            for b in f4.elements() {
                let (ea, eb) = (f16.embed_from(&f4, a), f16.embed_from(&f4, b));
                assert_eq!(f16.embed_from(&f4, f4.add(a, b)), f16.add(ea, eb));
                assert_eq!(f16.embed_from(&f4, f4.mul(a, b)), f16.mul(ea, eb));
            }
        }
        assert_eq!(f16.embed_from(&f4, 1), 1);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(Field::new(4, 1), Err(FieldError::NotPrime(4))));
        assert!(matches!(Field::new(2, 17), Err(FieldError::TooLarge { .. })));
        assert!(matches!(Field::new(2, 0), Err(FieldError::ZeroDegree)));
    }
}

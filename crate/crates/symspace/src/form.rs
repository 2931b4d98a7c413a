//! Forms: coefficient vectors in the fixed monomial order.
//!
//! Coefficients are bit-packed (one bit per monomial, LSB-first per 64-bit
//! word) when q = 2 and stored as one u16 field element per monomial
//! otherwise. The two text formats, a coefficient digit string in basis order
//! and a human-readable polynomial, both round-trip through `parse`.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use ffla::Field;

use crate::basis::MonomialBasis;
use crate::SymError;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Coeffs {
    /// q = 2: bit i of word i/64 is the coefficient of monomial i.
    Bits(Vec<u64>),
    /// q > 2: one field element per monomial.
    Gen(Vec<u16>),
}

/// A homogeneous degree-d form in m variables over F_q.
#[derive(Clone, Debug)]
pub struct Form {
    basis: Arc<MonomialBasis>,
    field: Arc<Field>,
    coeffs: Coeffs,
}

impl PartialEq for Form {
    fn eq(&self, other: &Self) -> bool {
        self.basis == other.basis && self.field.q() == other.field.q() && self.coeffs == other.coeffs
    }
}
impl Eq for Form {}

impl Hash for Form {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.basis.m().hash(state);
        self.basis.d().hash(state);
        self.field.q().hash(state);
        match &self.coeffs {
            Coeffs::Bits(w) => w.hash(state),
            Coeffs::Gen(v) => v.hash(state),
        }
    }
}

fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

impl Form {
    pub fn zero(basis: Arc<MonomialBasis>, field: Arc<Field>) -> Self {
        let coeffs = if field.q() == 2 {
            Coeffs::Bits(vec![0; words_for(basis.size())])
        } else {
            Coeffs::Gen(vec![0; basis.size()])
        };
        Self { basis, field, coeffs }
    }

    /// Build from one coefficient per monomial, in basis order.
    pub fn from_coeffs(basis: Arc<MonomialBasis>, field: Arc<Field>, coeffs: &[u16]) -> Self {
        assert_eq!(coeffs.len(), basis.size(), "coefficient count must match basis size");
        let mut f = Self::zero(basis, field);
        for (i, &c) in coeffs.iter().enumerate() {
            f.set_coeff(i, c);
        }
        f
    }

    /// Build from packed bit words (q = 2 only).
    pub fn from_bits(basis: Arc<MonomialBasis>, field: Arc<Field>, words: Vec<u64>) -> Self {
        assert_eq!(field.q(), 2, "bit-packed forms require q = 2");
        assert_eq!(words.len(), words_for(basis.size()));
        if basis.size() % 64 != 0 {
            let top = words.last().unwrap();
            assert_eq!(top >> (basis.size() % 64), 0, "padding bits must be zero");
        }
        Self { basis, field, coeffs: Coeffs::Bits(words) }
    }

    pub fn from_support(
        basis: Arc<MonomialBasis>,
        field: Arc<Field>,
        support: &[(usize, u16)],
    ) -> Self {
        let mut f = Self::zero(basis, field);
        for &(i, c) in support {
            let cur = f.coeff(i);
            f.set_coeff(i, f.field.add(cur, c));
        }
        f
    }

    pub fn basis(&self) -> &Arc<MonomialBasis> {
        &self.basis
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    pub fn coeff(&self, i: usize) -> u16 {
        match &self.coeffs {
            Coeffs::Bits(w) => ((w[i / 64] >> (i % 64)) & 1) as u16,
            Coeffs::Gen(v) => v[i],
        }
    }

    pub fn set_coeff(&mut self, i: usize, c: u16) {
        debug_assert!((c as u32) < self.field.q());
        match &mut self.coeffs {
            Coeffs::Bits(w) => {
                let (wi, bi) = (i / 64, i % 64);
                w[wi] = (w[wi] & !(1 << bi)) | ((c as u64) << bi);
            }
            Coeffs::Gen(v) => v[i] = c,
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.coeffs {
            Coeffs::Bits(w) => w.iter().all(|&x| x == 0),
            Coeffs::Gen(v) => v.iter().all(|&x| x == 0),
        }
    }

    /// Packed bit words when q = 2.
    pub fn bits(&self) -> Option<&[u64]> {
        match &self.coeffs {
            Coeffs::Bits(w) => Some(w),
            Coeffs::Gen(_) => None,
        }
    }

    /// The whole coefficient vector in a single word (q = 2, basis ≤ 64).
    pub fn as_u64(&self) -> Option<u64> {
        match &self.coeffs {
            Coeffs::Bits(w) if self.basis.size() <= 64 => Some(w[0]),
            _ => None,
        }
    }

    pub fn from_u64(basis: Arc<MonomialBasis>, field: Arc<Field>, word: u64) -> Self {
        assert!(basis.size() <= 64);
        Self::from_bits(basis, field, vec![word])
    }

    pub fn to_vec(&self) -> Vec<u16> {
        (0..self.basis.size()).map(|i| self.coeff(i)).collect()
    }

    /// Nonzero (monomial index, coefficient) pairs in basis order.
    pub fn support(&self) -> Vec<(usize, u16)> {
        match &self.coeffs {
            Coeffs::Bits(words) => {
                let mut out = Vec::new();
                for (wi, &w) in words.iter().enumerate() {
                    let mut bits = w;
                    while bits != 0 {
                        let b = bits.trailing_zeros() as usize;
                        out.push((wi * 64 + b, 1));
                        bits &= bits - 1;
                    }
                }
                out
            }
            Coeffs::Gen(v) => v
                .iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .map(|(i, &c)| (i, c))
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert!(self.basis == other.basis && self.field.q() == other.field.q());
        let coeffs = match (&self.coeffs, &other.coeffs) {
            (Coeffs::Bits(a), Coeffs::Bits(b)) => {
                Coeffs::Bits(a.iter().zip(b).map(|(x, y)| x ^ y).collect())
            }
            (Coeffs::Gen(a), Coeffs::Gen(b)) => {
                Coeffs::Gen(a.iter().zip(b).map(|(&x, &y)| self.field.add(x, y)).collect())
            }
            _ => unreachable!("representation is determined by q"),
        };
        Self { basis: Arc::clone(&self.basis), field: Arc::clone(&self.field), coeffs }
    }

    pub fn scale(&self, c: u16) -> Self {
        let mut out = self.clone();
        for (i, x) in self.support() {
            out.set_coeff(i, self.field.mul(x, c));
        }
        out
    }

    /// Evaluate at a point (coordinates as field elements).
    pub fn eval(&self, point: &[u16]) -> u16 {
        assert_eq!(point.len(), self.basis.m());
        let mut total = 0u16;
        for (i, c) in self.support() {
            let mut term = c;
            for (j, &e) in self.basis.exponent(i).iter().enumerate() {
                if e > 0 {
                    term = self.field.mul(term, self.field.pow(point[j], e as u64));
                }
            }
            total = self.field.add(total, term);
        }
        total
    }

    /// Coefficient digit string in basis order; defined for q ≤ 10.
    pub fn to_coeff_string(&self) -> String {
        assert!(self.field.q() <= 10, "digit strings are defined for q ≤ 10");
        (0..self.basis.size())
            .map(|i| char::from_digit(self.coeff(i) as u32, 10).unwrap())
            .collect()
    }

    /// Parse either a coefficient digit string (length = basis size) or a
    /// polynomial like "x0^2*x3 + 2*x1*x4^2".
    pub fn parse(basis: &Arc<MonomialBasis>, field: &Arc<Field>, s: &str) -> Result<Self, SymError> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(SymError::Parse("empty input".into()));
        }
        if compact == "0" {
            return Ok(Self::zero(Arc::clone(basis), Arc::clone(field)));
        }
        if compact.chars().all(|c| c.is_ascii_digit()) {
            if compact.len() != basis.size() {
                return Err(SymError::Parse(format!(
                    "coefficient string has length {}, basis has size {}",
                    compact.len(),
                    basis.size()
                )));
            }
            let mut f = Self::zero(Arc::clone(basis), Arc::clone(field));
            for (i, ch) in compact.chars().enumerate() {
                let v = ch.to_digit(10).unwrap();
                if v >= field.q() {
                    return Err(SymError::Parse(format!("coefficient {v} out of range for q = {}", field.q())));
                }
                f.set_coeff(i, v as u16);
            }
            return Ok(f);
        }
        Self::parse_poly(basis, field, &compact)
    }

    fn parse_poly(basis: &Arc<MonomialBasis>, field: &Arc<Field>, s: &str) -> Result<Self, SymError> {
        let mut f = Self::zero(Arc::clone(basis), Arc::clone(field));
        // Split into signed terms.
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut neg = false;
        for (i, ch) in s.chars().enumerate() {
            match ch {
                '+' | '-' if i > 0 => {
                    terms.push((neg, std::mem::take(&mut cur)));
                    neg = ch == '-';
                }
                '-' => neg = true,
                _ => cur.push(ch),
            }
        }
        terms.push((neg, cur));
        for (negated, term) in terms {
            if term.is_empty() {
                return Err(SymError::Parse("empty term".into()));
            }
            let mut coeff: u16 = 1;
            let mut exp = vec![0u8; basis.m()];
            for factor in term.split('*') {
                if factor.is_empty() {
                    return Err(SymError::Parse(format!("empty factor in '{term}'")));
                }
                if let Some(rest) = factor.strip_prefix('x') {
                    let (var, e) = match rest.split_once('^') {
                        Some((v, e)) => (v, e),
                        None => (rest, "1"),
                    };
                    let var: usize = var
                        .parse()
                        .map_err(|_| SymError::Parse(format!("bad variable '{factor}'")))?;
                    let e: u8 = e
                        .parse()
                        .map_err(|_| SymError::Parse(format!("bad exponent '{factor}'")))?;
                    if var >= basis.m() {
                        return Err(SymError::Parse(format!("variable x{var} out of range")));
                    }
                    exp[var] += e;
                } else {
                    let n: u64 = factor
                        .parse()
                        .map_err(|_| SymError::Parse(format!("bad coefficient '{factor}'")))?;
                    // Prime fields: integer literals reduce mod p. Extension
                    // fields: a literal < q is an element encoding, matching
                    // what Display prints.
                    let enc = if field.e() == 1 {
                        (n % field.p() as u64) as u16
                    } else if n < field.q() as u64 {
                        n as u16
                    } else {
                        return Err(SymError::Parse(format!(
                            "coefficient {n} out of range for q = {}",
                            field.q()
                        )));
                    };
                    coeff = field.mul(coeff, enc);
                }
            }
            let total: u32 = exp.iter().map(|&e| e as u32).sum();
            if total != basis.d() {
                return Err(SymError::Parse(format!(
                    "term '{term}' has degree {total}, expected {}",
                    basis.d()
                )));
            }
            let idx = basis
                .index_of(&exp)
                .expect("degree checked, so the monomial exists");
            let c = if negated { field.neg(coeff) } else { coeff };
            let cur = f.coeff(idx);
            f.set_coeff(idx, field.add(cur, c));
        }
        Ok(f)
    }
}

impl fmt::Display for Form {
    /// Human-readable polynomial, terms in basis order.
    fn fmt(&self, w: &mut fmt::Formatter<'_>) -> fmt::Result {
        let support = self.support();
        if support.is_empty() {
            return write!(w, "0");
        }
        let mut first = true;
        for (i, c) in support {
            if !first {
                write!(w, " + ")?;
            }
            first = false;
            let mut factors: Vec<String> = Vec::new();
            if c != 1 {
                factors.push(c.to_string());
            }
            for (j, &e) in self.basis.exponent(i).iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(format!("x{j}")),
                    _ => factors.push(format!("x{j}^{e}")),
                }
            }
            write!(w, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

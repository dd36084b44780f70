//! Arithmetic in GF(p^m) with Frobenius powers and single-variable
//! linearized polynomials (SLPs).
//!
//! Elements are stored as their polynomial-basis coefficients packed into a
//! `u64`: for p = 2 the word is the bit vector (coefficient of x^i in bit i),
//! for odd p it is the base-p integer sum c_i p^i. Either way the packed
//! value is the element's canonical index in `0..q`.
//!
//! Characteristic 2 is the fast path. Odd characteristics go through a
//! digit-vector schoolbook multiply and exist for exhaustive small-field
//! checks.

mod poly;

use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("characteristic {0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field GF({p}^{m}) does not fit in a 64-bit element")]
    TooLarge { p: u64, m: u32 },
    #[error("modulus must be monic of degree {expected}")]
    BadModulus { expected: u32 },
    #[error("modulus is reducible over GF({0})")]
    Reducible(u64),
    #[error("value {value} is not an element of a field of order {order}")]
    OutOfRange { value: u64, order: u128 },
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("empty coefficient vector")]
    EmptyInput,
    #[error("expected {expected} bytes, got {got}")]
    ByteLength { expected: usize, got: usize },
}

/// An element of GF(p^m) in canonical packed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FieldElement(u64);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    /// The constant polynomial 1, the identity in every GF(p^m).
    pub const ONE: FieldElement = FieldElement(1);

    /// Packed coefficient word (the element's index in `0..q`).
    pub fn value(self) -> u64 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Lower coefficients of the default binary moduli: the lexicographically
/// smallest irreducible of each listed degree.
const BINARY_MODULI: [(u32, u64); 6] = [
    (3, 0b011),
    (4, 0b0011),
    (8, 0x1b),
    (16, 0x2b),
    (32, 0x8d),
    (64, 0x1b),
];

/// Parameters and arithmetic context for GF(p^m).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Field {
    p: u64,
    m: u32,
    /// Modulus coefficients over GF(p), low degree first, monic, length m + 1.
    modulus: Vec<u64>,
    order: u128,
    /// For p = 2: modulus with the x^m term dropped.
    reduction: u64,
}

impl Field {
    /// GF(2^m) with the built-in (or smallest irreducible) modulus.
    pub fn binary(m: u32) -> Result<Self, FieldError> {
        Self::new(2, m)
    }

    /// GF(p^m) with the lexicographically smallest irreducible modulus.
    pub fn new(p: u64, m: u32) -> Result<Self, FieldError> {
        Self::check_shape(p, m)?;
        let modulus = match BINARY_MODULI.iter().find(|(deg, _)| p == 2 && *deg == m) {
            Some(&(_, low)) => poly::monic_from_index(low, m, 2),
            None => poly::smallest_irreducible(p, m),
        };
        Ok(Self::assemble(p, m, modulus))
    }

    /// GF(p^m) with a caller-supplied modulus (coefficients low degree first).
    pub fn with_modulus(p: u64, m: u32, modulus: Vec<u64>) -> Result<Self, FieldError> {
        Self::check_shape(p, m)?;
        if modulus.len() != m as usize + 1
            || modulus[m as usize] != 1
            || modulus.iter().any(|&c| c >= p)
        {
            return Err(FieldError::BadModulus { expected: m });
        }
        if !poly::is_irreducible(&modulus, p) {
            return Err(FieldError::Reducible(p));
        }
        Ok(Self::assemble(p, m, modulus))
    }

    fn check_shape(p: u64, m: u32) -> Result<(), FieldError> {
        if !poly::is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if m == 0 {
            return Err(FieldError::ZeroDegree);
        }
        let order = (p as u128).checked_pow(m);
        match order {
            Some(q) if q <= 1u128 << 64 => Ok(()),
            _ => Err(FieldError::TooLarge { p, m }),
        }
    }

    fn assemble(p: u64, m: u32, modulus: Vec<u64>) -> Self {
        let order = (p as u128).pow(m);
        let reduction = if p == 2 {
            modulus[..m as usize]
                .iter()
                .enumerate()
                .fold(0u64, |acc, (i, &c)| acc | (c << i))
        } else {
            0
        };
        Field {
            p,
            m,
            modulus,
            order,
            reduction,
        }
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    /// Number of elements q = p^m.
    pub fn order(&self) -> u128 {
        self.order
    }

    /// Modulus coefficients, low degree first (monic, length m + 1).
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// log2(q).
    pub fn bits(&self) -> f64 {
        self.m as f64 * (self.p as f64).log2()
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement(0)
    }

    pub fn one(&self) -> FieldElement {
        FieldElement(1)
    }

    /// Checked construction from a packed coefficient word.
    pub fn element(&self, value: u64) -> Result<FieldElement, FieldError> {
        if (value as u128) < self.order {
            Ok(FieldElement(value))
        } else {
            Err(FieldError::OutOfRange {
                value,
                order: self.order,
            })
        }
    }

    /// Image of the integer `k` in the prime subfield.
    pub fn from_int(&self, k: u64) -> FieldElement {
        FieldElement(k % self.p)
    }

    /// All q elements in index order. Only sensible for small fields.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.order as u64).map(FieldElement)
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        if self.order == 1u128 << 64 {
            FieldElement(rng.gen())
        } else {
            FieldElement(rng.gen_range(0..self.order as u64))
        }
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        loop {
            let x = self.random(rng);
            if !x.is_zero() {
                return x;
            }
        }
    }

    fn digits(&self, a: FieldElement) -> Vec<u64> {
        let mut rest = a.0;
        (0..self.m)
            .map(|_| {
                let d = rest % self.p;
                rest /= self.p;
                d
            })
            .collect()
    }

    fn pack(&self, digits: &[u64]) -> FieldElement {
        FieldElement(digits.iter().rev().fold(0u64, |acc, &d| acc * self.p + d))
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.p == 2 {
            return FieldElement(a.0 ^ b.0);
        }
        let (x, y) = (self.digits(a), self.digits(b));
        let sum: Vec<u64> = x.iter().zip(&y).map(|(u, v)| (u + v) % self.p).collect();
        self.pack(&sum)
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        if self.p == 2 {
            return a;
        }
        let d: Vec<u64> = self
            .digits(a)
            .iter()
            .map(|&u| (self.p - u) % self.p)
            .collect();
        self.pack(&d)
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.p == 2 {
            FieldElement(self.mul_binary(a.0, b.0))
        } else {
            self.mul_odd(a, b)
        }
    }

    fn mul_binary(&self, a: u64, b: u64) -> u64 {
        let m = self.m;
        let mut acc: u128 = 0;
        let mut bits = b;
        let mut shift = 0;
        while bits != 0 {
            if bits & 1 == 1 {
                acc ^= (a as u128) << shift;
            }
            bits >>= 1;
            shift += 1;
        }
        let full = (1u128 << m) | self.reduction as u128;
        for i in (m..2 * m).rev() {
            if acc >> i & 1 == 1 {
                acc ^= full << (i - m);
            }
        }
        acc as u64
    }

    fn mul_odd(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let (x, y) = (self.digits(a), self.digits(b));
        let prod = poly::mul_mod(&x, &y, &self.modulus, self.p);
        let mut digits = prod;
        digits.resize(self.m as usize, 0);
        self.pack(&digits)
    }

    pub fn square(&self, a: FieldElement) -> FieldElement {
        self.mul(a, a)
    }

    pub fn pow(&self, a: FieldElement, mut exp: u128) -> FieldElement {
        let mut acc = self.one();
        let mut base = a;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.square(base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via a^(q-2).
    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        if a.is_zero() {
            return Err(FieldError::ZeroInverse);
        }
        Ok(self.pow(a, self.order - 2))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// One Frobenius step a -> a^p.
    pub fn frobenius(&self, a: FieldElement) -> FieldElement {
        if self.p == 2 {
            self.square(a)
        } else {
            self.pow(a, self.p as u128)
        }
    }

    /// a^{p^l} by l successive p-th powers.
    pub fn frobenius_pow(&self, a: FieldElement, l: u64) -> FieldElement {
        // x^{p^m} = x, so only l mod m steps matter.
        let steps = l % self.m as u64;
        (0..steps).fold(a, |acc, _| self.frobenius(acc))
    }

    /// [s^p, s^{p^2}, ..., s^{p^k}].
    pub fn frobenius_chain(&self, s: FieldElement, k: usize) -> Vec<FieldElement> {
        let mut out = Vec::with_capacity(k);
        let mut cur = s;
        for _ in 0..k {
            cur = self.frobenius(cur);
            out.push(cur);
        }
        out
    }

    /// Evaluates L(x) = sum_{i=1}^{k} a_i x^{p^i}, one Frobenius step per term.
    pub fn slp_eval(
        &self,
        coeffs: &[FieldElement],
        x: FieldElement,
    ) -> Result<FieldElement, FieldError> {
        if coeffs.is_empty() {
            return Err(FieldError::EmptyInput);
        }
        let mut power = x;
        let mut acc = self.zero();
        for &a in coeffs {
            power = self.frobenius(power);
            acc = self.add(acc, self.mul(a, power));
        }
        Ok(acc)
    }

    /// SLP hash s2 - sum_{l=1}^{k} x_l s1^{p^l}.
    pub fn slp_hash(
        &self,
        xs: &[FieldElement],
        s1: FieldElement,
        s2: FieldElement,
    ) -> Result<FieldElement, FieldError> {
        let sum = self.slp_eval(xs, s1)?;
        Ok(self.sub(s2, sum))
    }

    /// sum_i a_i * b_i.
    pub fn dot(&self, a: &[FieldElement], b: &[FieldElement]) -> FieldElement {
        a.iter()
            .zip(b)
            .fold(self.zero(), |acc, (&x, &y)| self.add(acc, self.mul(x, y)))
    }

    /// Serialized width of one element in bytes.
    pub fn byte_len(&self) -> usize {
        let bits = 128 - (self.order - 1).leading_zeros();
        (bits as usize).div_ceil(8).max(1)
    }

    /// Little-endian encoding: coefficient of x^0 lands in bit 0 of byte 0
    /// for binary fields.
    pub fn to_bytes(&self, a: FieldElement) -> Vec<u8> {
        a.0.to_le_bytes()[..self.byte_len()].to_vec()
    }

    pub fn from_bytes(&self, bytes: &[u8]) -> Result<FieldElement, FieldError> {
        let expected = self.byte_len();
        if bytes.len() != expected {
            return Err(FieldError::ByteLength {
                expected,
                got: bytes.len(),
            });
        }
        let mut word = [0u8; 8];
        word[..expected].copy_from_slice(bytes);
        self.element(u64::from_le_bytes(word))
    }

    pub fn write_elements(&self, elems: &[FieldElement], out: &mut Vec<u8>) {
        for &e in elems {
            out.extend_from_slice(&self.to_bytes(e));
        }
    }

    pub fn read_elements(&self, bytes: &[u8]) -> Result<Vec<FieldElement>, FieldError> {
        let width = self.byte_len();
        if !bytes.len().is_multiple_of(width) {
            return Err(FieldError::ByteLength {
                expected: bytes.len().div_ceil(width) * width,
                got: bytes.len(),
            });
        }
        bytes.chunks(width).map(|c| self.from_bytes(c)).collect()
    }
}

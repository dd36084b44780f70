//! Dense polynomials over the prime field GF(p), used only to validate and
//! search for field moduli.
//!
//! Coefficients are stored low degree first and kept trimmed (no trailing
//! zeros), so the zero polynomial is the empty vector.

pub(crate) type Poly = Vec<u64>;

fn trim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn degree(a: &[u64]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

pub(crate) fn inv_mod_p(a: u64, p: u64) -> u64 {
    // p is prime, so a^(p-2) is the inverse.
    pow_mod_p(a % p, p - 2, p)
}

pub(crate) fn pow_mod_p(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = ((acc as u128 * base as u128) % p as u128) as u64;
        }
        base = ((base as u128 * base as u128) % p as u128) as u64;
        exp >>= 1;
    }
    acc
}

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Remainder of `a` modulo the monic-or-not nonzero polynomial `f`.
pub(crate) fn rem(a: &[u64], f: &[u64], p: u64) -> Poly {
    let df = degree(f).expect("division by zero polynomial");
    let lead_inv = inv_mod_p(f[df], p);
    let mut r: Poly = a.to_vec();
    while let Some(dr) = degree(&r) {
        if dr < df {
            break;
        }
        let factor = (r[dr] * lead_inv) % p;
        let shift = dr - df;
        for (i, &c) in f.iter().enumerate() {
            let sub = (factor * c) % p;
            r[i + shift] = (r[i + shift] + p - sub) % p;
        }
    }
    trim(r)
}

pub(crate) fn mul_mod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    rem(&prod, f, p)
}

fn pow_mod(base: &[u64], mut exp: u64, f: &[u64], p: u64) -> Poly {
    let mut acc: Poly = rem(&[1], f, p);
    let mut b = rem(base, f, p);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(&acc, &b, f, p);
        }
        b = mul_mod(&b, &b, f, p);
        exp >>= 1;
    }
    acc
}

fn sub(a: &[u64], b: &[u64], p: u64) -> Poly {
    let len = a.len().max(b.len());
    let out = (0..len)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(out)
}

fn gcd(a: &[u64], b: &[u64], p: u64) -> Poly {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

/// Ben-Or irreducibility test: a monic `f` of degree m is irreducible over
/// GF(p) iff gcd(x^{p^k} - x, f) = 1 for every 1 <= k <= m/2.
pub(crate) fn is_irreducible(f: &[u64], p: u64) -> bool {
    let Some(m) = degree(f) else {
        return false;
    };
    if m == 0 {
        return false;
    }
    if m == 1 {
        return true;
    }
    let x: Poly = vec![0, 1];
    let mut power = rem(&x, f, p);
    for _ in 1..=m / 2 {
        power = pow_mod(&power, p, f, p);
        let g = gcd(&sub(&power, &x, p), f, p);
        if degree(&g) != Some(0) {
            return false;
        }
    }
    true
}

/// Monic degree-m polynomial whose lower coefficients are the base-p digits
/// of `index`.
pub(crate) fn monic_from_index(index: u64, m: u32, p: u64) -> Poly {
    let mut coeffs = Vec::with_capacity(m as usize + 1);
    let mut rest = index;
    for _ in 0..m {
        coeffs.push(rest % p);
        rest /= p;
    }
    coeffs.push(1);
    coeffs
}

/// Lexicographically smallest monic irreducible of degree m, ordering
/// candidates by the integer encoding of their lower coefficients.
pub(crate) fn smallest_irreducible(p: u64, m: u32) -> Poly {
    let mut index = 0u64;
    loop {
        // A zero constant term means x divides the candidate.
        if m == 1 || !index.is_multiple_of(p) {
            let f = monic_from_index(index, m, p);
            if is_irreducible(&f, p) {
                return f;
            }
        }
        index += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        let found: Vec<u64> = (0..30).filter(|&p| is_prime(p)).collect();
        assert_eq!(found, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }

    #[test]
    fn known_binary_irreducibles() {
        // x^4 + x + 1 is irreducible, x^4 + x^2 + 1 = (x^2 + x + 1)^2 is not.
        assert!(is_irreducible(&[1, 1, 0, 0, 1], 2));
        assert!(!is_irreducible(&[1, 0, 1, 0, 1], 2));
        // x^2 + 1 = (x + 1)^2 over GF(2), irreducible over GF(3).
        assert!(!is_irreducible(&[1, 0, 1], 2));
        assert!(is_irreducible(&[1, 0, 1], 3));
    }

    #[test]
    fn irreducible_count_matches_necklace_formula() {
        // Number of monic irreducibles of degree 4 over GF(2) is 3, of
        // degree 3 over GF(3) is 8.
        let count = |p: u64, m: u32| {
            (0..p.pow(m))
                .filter(|&i| is_irreducible(&monic_from_index(i, m, p), p))
                .count()
        };
        assert_eq!(count(2, 4), 3);
        assert_eq!(count(3, 3), 8);
        assert_eq!(count(2, 8), 30);
    }
}

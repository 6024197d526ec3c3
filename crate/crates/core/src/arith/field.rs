//! Coefficient fields: exact rationals and word-sized prime fields.

use std::fmt;
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

/// Default modulus for modular computations, the Mersenne prime 2^31 - 1.
pub const DEFAULT_PRIME: u64 = 2_147_483_647;

/// A field given as a context object; elements are plain values.
pub trait Field: Clone + fmt::Debug + PartialEq {
    type Elem: Clone + fmt::Debug + PartialEq + Eq + Hash;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    /// `None` when the denominator is not invertible in this field.
    fn from_rational(&self, r: &BigRational) -> Option<Self::Elem>;
    /// A rational representative. For prime fields this is the symmetric lift.
    fn to_rational(&self, a: &Self::Elem) -> BigRational;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    /// A random element, used for generic specializations. Over the
    /// rationals this draws a small integer.
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }

    fn pow(&self, a: &Self::Elem, mut e: u64) -> Self::Elem {
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }
}

/// The field of rational numbers with arbitrary precision.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }
    fn from_rational(&self, r: &BigRational) -> Option<BigRational> {
        Some(r.clone())
    }
    fn to_rational(&self, a: &BigRational) -> BigRational {
        a.clone()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        if a.is_zero() {
            None
        } else {
            Some(a.recip())
        }
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> BigRational {
        let mut v = 0;
        while v == 0 {
            v = rng.gen_range(-1000i64..=1000);
        }
        self.from_i64(v)
    }
}

/// The prime field Z/pZ for a prime p < 2^63.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl Default for PrimeField {
    fn default() -> Self {
        PrimeField { p: DEFAULT_PRIME }
    }
}

impl PrimeField {
    /// Returns `None` unless `p` is a prime in `[3, 2^63)`.
    pub fn new(p: u64) -> Option<Self> {
        if p < 3 || p >= 1 << 63 || !is_prime_u64(p) {
            return None;
        }
        Some(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn reduce_bigint(&self, v: &BigInt) -> u64 {
        let m = BigInt::from(self.p);
        v.mod_floor(&m).to_u64().expect("residue fits in u64")
    }

    /// Symmetric representative in (-p/2, p/2].
    pub fn symmetric(&self, a: u64) -> i64 {
        if a > self.p / 2 {
            -((self.p - a) as i64)
        } else {
            a as i64
        }
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn from_i64(&self, v: i64) -> u64 {
        (v as i128).rem_euclid(self.p as i128) as u64
    }
    fn from_rational(&self, r: &BigRational) -> Option<u64> {
        let num = self.reduce_bigint(r.numer());
        let den = self.reduce_bigint(r.denom());
        self.inv(&den).map(|d| self.mul(&num, &d))
    }
    fn to_rational(&self, a: &u64) -> BigRational {
        BigRational::from_integer(BigInt::from(self.symmetric(*a)))
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + *b as u128) % self.p as u128) as u64
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 + self.p as u128 - *b as u128) % self.p as u128) as u64
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a % self.p == 0 {
            return None;
        }
        Some(self.pow(a, self.p - 2))
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.gen_range(1..self.p)
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, m);
        }
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &w in &WITNESSES {
        if n % w == 0 {
            return n == w;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'outer: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Recovers `num/den` from its residue modulo `p`, with both parts bounded
/// by `sqrt(p/2)`. Returns `None` when no such fraction exists.
pub fn rational_reconstruct(a: u64, p: u64) -> Option<BigRational> {
    rational_reconstruct_big(&BigInt::from(a), &BigInt::from(p))
}

/// [`rational_reconstruct`] for an arbitrary modulus `m`.
pub fn rational_reconstruct_big(a: &BigInt, m: &BigInt) -> Option<BigRational> {
    let bound = (m / 2u32).sqrt();
    let (mut r0, mut r1) = (m.clone(), a.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        (r0, r1) = (r1, r2);
        (t0, t1) = (t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound || !t1.gcd(m).is_one() {
        return None;
    }
    Some(BigRational::new(r1, t1))
}

/// Chinese remaindering of `a mod m` and `b mod p` into a residue modulo `m p`.
pub fn crt(a: &BigInt, m: &BigInt, b: u64, p: u64) -> BigInt {
    let pb = BigInt::from(p);
    let m_mod_p = m.mod_floor(&pb).to_u64().expect("residue below p");
    let field = PrimeField { p };
    let inv = field.inv(&m_mod_p).expect("coprime moduli");
    let a_mod_p = a.mod_floor(&pb).to_u64().expect("residue below p");
    let k = field.mul(&field.sub(&b, &a_mod_p), &inv);
    a + m * BigInt::from(k)
}

/// Parses `"p/q"`, `"p"` or a decimal-free integer into a rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(BigRational::new(n, d))
}

/// Canonical text form of a rational: `"p"` for integers, `"p/q"` otherwise.
pub fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multi_modular_reconstruction() {
        let (p1, p2) = (DEFAULT_PRIME, 2_147_483_629u64);
        let target = BigRational::new(BigInt::from(-123_456_789_012_345i64), BigInt::from(987_654_321u64));
        let f1 = PrimeField::new(p1).unwrap();
        let f2 = PrimeField::new(p2).unwrap();
        let (a, b) = (f1.from_rational(&target).unwrap(), f2.from_rational(&target).unwrap());
        assert_eq!(rational_reconstruct(a, p1), None);
        let mut m = BigInt::from(p1);
        let mut combined = crt(&BigInt::from(a), &m, b, p2);
        m *= p2;
        assert_eq!(rational_reconstruct_big(&combined, &m), None);
        for p in [2_147_483_587u64, 2_147_483_579] {
            let f = PrimeField::new(p).unwrap();
            combined = crt(&combined, &m, f.from_rational(&target).unwrap(), p);
            m *= p;
        }
        assert_eq!(rational_reconstruct_big(&combined, &m), Some(target));
        let small = BigRational::new(BigInt::from(-7), BigInt::from(12));
        let r = f1.from_rational(&small).unwrap();
        assert_eq!(rational_reconstruct(r, p1), Some(small));
    }
    use rand::SeedableRng;

    #[test]
    fn prime_detection_matches_trial_division() {
        fn slow(n: u64) -> bool {
            n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
        }
        for n in 0..2000 {
            assert_eq!(is_prime_u64(n), slow(n), "{n}");
        }
        assert!(is_prime_u64(DEFAULT_PRIME));
        assert!(!is_prime_u64(DEFAULT_PRIME - 2));
    }

    #[test]
    fn prime_field_inverse() {
        let f = PrimeField::default();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let a = f.random(&mut rng);
            assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), 1);
        }
        assert_eq!(f.inv(&0), None);
    }

    #[test]
    fn rational_roundtrip_through_prime_field() {
        let f = PrimeField::default();
        for (n, d) in [(3i64, 7i64), (-5, 11), (120, 1), (-1, 2), (0, 5)] {
            let r = BigRational::new(n.into(), d.into());
            let a = f.from_rational(&r).unwrap();
            assert_eq!(rational_reconstruct(a, f.modulus()), Some(r));
        }
    }

    #[test]
    fn rational_text_forms() {
        let r = parse_rational("-6/4").unwrap();
        assert_eq!(format_rational(&r), "-3/2");
        assert_eq!(format_rational(&parse_rational("12").unwrap()), "12");
        assert!(parse_rational("1/0").is_none());
        assert!(parse_rational("x").is_none());
    }
}

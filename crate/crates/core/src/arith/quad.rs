//! Exact arithmetic in real quadratic fields `Q(sqrt(D))`.
//!
//! A [`QuadNumber`] is `a + b*sqrt(D)` with rational `a`, `b` and a
//! squarefree non-negative integer `D`. All ring operations and — crucially —
//! sign determination are exact. The only approximate object is [`Approx`],
//! a float rendering carrying a certified absolute error bound.
//!
//! Reduction mod `2Z` is the workhorse of the phase layer: the input there is
//! `theta * sigma(g, T^n h)`, an integer multiple of an irrational `theta`,
//! whose magnitude grows like `lambda^n` while its residue shrinks like
//! `lambda^-n`. Fixed-precision evaluation of `sqrt(D)` is therefore unsound;
//! the reduction evaluates `sqrt(D)` by big-integer square root at adaptive
//! precision, doubling until the enclosing interval pins down the integer
//! part exactly.

use std::collections::HashMap;
use std::sync::Mutex;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A float value together with a certified absolute error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Approx {
    pub value: f64,
    pub err: f64,
}

impl Approx {
    pub fn exact(value: f64) -> Self {
        Approx { value, err: 0.0 }
    }
}

/// Global cache of integer square roots `isqrt(D * 4^p)`, keyed by `D`.
///
/// Precision only ever increases, so concurrent callers share the best
/// approximation computed so far.
static SQRT_CACHE: Mutex<Option<HashMap<u64, (u32, BigUint)>>> = Mutex::new(None);

/// Returns `(s, p)` with `s = isqrt(D * 4^p)`, so `s/2^p <= sqrt(D) < (s+1)/2^p`,
/// at precision at least `min_bits`.
fn sqrt_approximant(d: u64, min_bits: u32) -> (BigUint, u32) {
    let mut guard = SQRT_CACHE.lock().unwrap();
    let cache = guard.get_or_insert_with(HashMap::new);
    if let Some((p, s)) = cache.get(&d) {
        if *p >= min_bits {
            return (s.clone(), *p);
        }
    }
    let p = min_bits.next_power_of_two().max(64);
    let scaled = BigUint::from(d) << (2 * p as u64);
    let s = scaled.sqrt();
    cache.insert(d, (p, s.clone()));
    (cache[&d].1.clone(), p)
}

fn pow2_ratio(p: u32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << p as u64)
}

/// Converts a rational to `f64` with a certified error bound.
///
/// The quotient is scaled so the integer division keeps ~60 significant bits;
/// the result is exact scaling of that truncated quotient, so the relative
/// error is below `2^-50` with a tiny absolute floor for values near zero.
pub fn ratio_to_f64(r: &BigRational) -> Approx {
    if r.is_zero() {
        return Approx::exact(0.0);
    }
    let num = r.numer();
    let den = r.denom();
    let nb = num.bits() as i64;
    let db = den.bits() as i64;
    let shift = 62 + db - nb;
    let q = if shift >= 0 {
        (num << shift as u64).div_floor(den)
    } else {
        num.div_floor(&(den << (-shift) as u64))
    };
    let qf = q.to_f64().unwrap_or(0.0);
    let value = qf * 2f64.powi(-shift as i32);
    let err = value.abs() * 2f64.powi(-50) + 2f64.powi(-1000);
    Approx { value, err }
}

/// Largest square divisor extraction: returns `(f, s)` with `n = f^2 * s`,
/// `s` squarefree (trial division up to 10^6 plus a perfect-square check on
/// the cofactor; discriminants at desk scale are far smaller).
fn squarefree_decompose(n: u64) -> (u64, u64) {
    if n == 0 {
        return (1, 0);
    }
    let mut f = 1u64;
    let mut s = 1u64;
    let mut m = n;
    let mut p = 2u64;
    while p * p <= m && p <= 1_000_000 {
        if m % p == 0 {
            let mut e = 0u32;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            f *= p.pow(e / 2);
            if e % 2 == 1 {
                s *= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        let r = (m as f64).sqrt() as u64;
        let root = (r.saturating_sub(2)..=r + 2).find(|&x| x * x == m);
        match root {
            Some(x) => f *= x,
            None => s *= m,
        }
    }
    (f, s)
}

/// An exact element `a + b*sqrt(d)` of a real quadratic field.
///
/// Invariants kept by construction: `d` squarefree; `d == 0` iff the value is
/// rational (then `b == 0`); `d >= 2` otherwise.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadNumber {
    a: BigRational,
    b: BigRational,
    d: u64,
}

impl QuadNumber {
    pub fn new(a: BigRational, b: BigRational, d: u64) -> Result<Self> {
        if b.is_zero() || d == 0 {
            if !b.is_zero() && d == 0 {
                return Err(Error::Domain("sqrt(0) coefficient must be zero".into()));
            }
            return Ok(QuadNumber {
                a,
                b: BigRational::zero(),
                d: 0,
            });
        }
        let (f, s) = squarefree_decompose(d);
        if s <= 1 {
            // perfect square: fold into the rational part
            let root = BigRational::from_integer(BigInt::from(f));
            return Ok(QuadNumber {
                a: a + b * root * BigInt::from(s),
                b: BigRational::zero(),
                d: 0,
            });
        }
        Ok(QuadNumber {
            a,
            b: b * BigInt::from(f),
            d: s,
        })
    }

    pub fn from_ratio(a: BigRational) -> Self {
        QuadNumber {
            a,
            b: BigRational::zero(),
            d: 0,
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_ratio(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Self::from_ratio(BigRational::from_integer(n))
    }

    /// Exact `sqrt(n)` for `n >= 0`, extracting the square part.
    pub fn sqrt_of(n: &BigInt) -> Result<Self> {
        if n.is_negative() {
            return Err(Error::Domain("square root of a negative integer".into()));
        }
        let d = n
            .to_u64()
            .ok_or_else(|| Error::Domain(format!("radicand {n} too large")))?;
        QuadNumber::new(BigRational::zero(), BigRational::one(), d)
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn radical_coeff(&self) -> &BigRational {
        &self.b
    }

    pub fn radicand(&self) -> u64 {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    fn join_field(&self, other: &Self) -> Result<u64> {
        match (self.d, other.d) {
            (0, d) | (d, 0) => Ok(d),
            (d1, d2) if d1 == d2 => Ok(d1),
            (d1, d2) => Err(Error::FieldMismatch(d1.to_string(), d2.to_string())),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let d = self.join_field(other)?;
        let b = &self.b + &other.b;
        Ok(QuadNumber {
            a: &self.a + &other.a,
            d: if b.is_zero() { 0 } else { d },
            b,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        QuadNumber {
            a: -&self.a,
            b: -&self.b,
            d: self.d,
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let d = self.join_field(other)?;
        let a = &self.a * &other.a + &self.b * &other.b * BigInt::from(d);
        let b = &self.a * &other.b + &self.b * &other.a;
        Ok(QuadNumber {
            a,
            d: if b.is_zero() { 0 } else { d },
            b,
        })
    }

    pub fn mul_ratio(&self, r: &BigRational) -> Self {
        let b = &self.b * r;
        QuadNumber {
            a: &self.a * r,
            d: if b.is_zero() { 0 } else { self.d },
            b,
        }
    }

    pub fn mul_bigint(&self, n: &BigInt) -> Self {
        self.mul_ratio(&BigRational::from_integer(n.clone()))
    }

    /// Galois conjugate `a - b*sqrt(d)`.
    pub fn conj(&self) -> Self {
        QuadNumber {
            a: self.a.clone(),
            b: -&self.b,
            d: self.d,
        }
    }

    /// Field norm `a^2 - b^2 d` (rational).
    pub fn field_norm(&self) -> BigRational {
        &self.a * &self.a - &self.b * &self.b * BigInt::from(self.d)
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Domain("inverse of zero".into()));
        }
        let n = self.field_norm();
        debug_assert!(!n.is_zero(), "nonzero quadratic number has nonzero norm");
        Ok(self.conj().mul_ratio(&n.recip()))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = QuadNumber::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).expect("same field");
            }
            base = base.mul(&base).expect("same field");
            e >>= 1;
        }
        acc
    }

    pub fn powi(&self, e: i64) -> Result<Self> {
        if e >= 0 {
            Ok(self.pow(e as u32))
        } else {
            Ok(self.inverse()?.pow((-e) as u32))
        }
    }

    /// Exact sign: -1, 0 or +1, never decided by floating point.
    pub fn sign(&self) -> i32 {
        let sa = num_sign(&self.a);
        let sb = num_sign(&self.b);
        if sb == 0 {
            return sa;
        }
        if sa == 0 {
            return sb;
        }
        if sa == sb {
            return sa;
        }
        // opposite signs: compare a^2 against b^2 d; equality would force
        // sqrt(d) rational, impossible for squarefree d >= 2
        let lhs = &self.a * &self.a;
        let rhs = &self.b * &self.b * BigInt::from(self.d);
        match lhs.cmp(&rhs) {
            std::cmp::Ordering::Greater => sa,
            std::cmp::Ordering::Less => sb,
            std::cmp::Ordering::Equal => unreachable!("sqrt of squarefree d >= 2 is irrational"),
        }
    }

    pub fn abs(&self) -> Self {
        if self.sign() < 0 {
            self.neg()
        } else {
            self.clone()
        }
    }

    pub fn cmp_exact(&self, other: &Self) -> Result<std::cmp::Ordering> {
        let diff = self.sub(other)?;
        Ok(match diff.sign() {
            x if x < 0 => std::cmp::Ordering::Less,
            0 => std::cmp::Ordering::Equal,
            _ => std::cmp::Ordering::Greater,
        })
    }

    /// Enclosing rational interval `[lo, hi]` of width `|b| / 2^p`.
    pub fn rational_bounds(&self, precision_bits: u32) -> (BigRational, BigRational) {
        if self.b.is_zero() {
            return (self.a.clone(), self.a.clone());
        }
        let (s, p) = sqrt_approximant(self.d, precision_bits);
        let unit = pow2_ratio(p);
        let lo_s = BigRational::from_integer(BigInt::from(s.clone())) * &unit;
        let hi_s = BigRational::from_integer(BigInt::from(s + BigUint::one())) * &unit;
        if num_sign(&self.b) > 0 {
            (&self.a + &self.b * lo_s, &self.a + &self.b * hi_s)
        } else {
            (&self.a + &self.b * hi_s, &self.a + &self.b * lo_s)
        }
    }

    /// Certified float rendering with error below `2^-precision_bits` plus
    /// float conversion error.
    pub fn approx(&self, precision_bits: u32) -> Approx {
        if self.b.is_zero() {
            return ratio_to_f64(&self.a);
        }
        let extra = self.b.numer().bits().max(self.b.denom().bits()) as u32 + 8;
        let (lo, hi) = self.rational_bounds(precision_bits + extra);
        let mid = (&lo + &hi) / BigInt::from(2);
        let half_width = (&hi - &lo) / BigInt::from(2);
        let m = ratio_to_f64(&mid);
        let w = ratio_to_f64(&half_width);
        Approx {
            value: m.value,
            err: m.err + w.value + w.err,
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.approx(96).value
    }

    /// Reduction into `[0, 2)`: returns the exact residue `x - 2k`, the
    /// integer shift `k`, and a certified float rendering of the residue
    /// with error `< 2^-(precision_bits/2)`.
    ///
    /// The integer part is pinned by interval evaluation of `sqrt(d)` at
    /// doubling precision; for irrational inputs this always terminates, and
    /// a hard cap converts pathological alignment into a recoverable error.
    pub fn mod2(&self, precision_bits: u32) -> Result<Mod2> {
        let k = if self.b.is_zero() {
            (&self.a / BigInt::from(2)).floor().to_integer()
        } else {
            let mut p = precision_bits.max(64);
            // magnitude of b inflates the interval width; account for it up front
            let cap: u64 = (precision_bits as u64).max(64) * 1024 + self.b.numer().bits();
            loop {
                let (lo, hi) = self.rational_bounds(p);
                let k_lo = (lo / BigInt::from(2)).floor().to_integer();
                let k_hi = (hi / BigInt::from(2)).floor().to_integer();
                if k_lo == k_hi {
                    break k_lo;
                }
                let next = (p as u64) * 2;
                if next > cap {
                    return Err(Error::PrecisionExhausted {
                        bits: next,
                        context: "mod-2 reduction straddles an even integer".into(),
                    });
                }
                p = next as u32;
            }
        };
        let shift2 = BigRational::from_integer(&k * BigInt::from(2));
        let residue = QuadNumber {
            a: &self.a - shift2,
            b: self.b.clone(),
            d: self.d,
        };
        let approx = residue.approx(precision_bits);
        debug_assert!(approx.value > -0.5 && approx.value < 2.5);
        Ok(Mod2 {
            residue,
            shift: k,
            approx,
        })
    }

    /// Signed residue in `(-1, 1]`: the representative of `x mod 2Z` nearest
    /// to zero (ties resolved to `+1`).
    pub fn signed_mod2(&self, precision_bits: u32) -> Result<QuadNumber> {
        let m = self.mod2(precision_bits)?;
        let one = QuadNumber::one();
        if m.residue.cmp_exact(&one)? == std::cmp::Ordering::Greater {
            m.residue.sub(&QuadNumber::from_int(2))
        } else {
            Ok(m.residue)
        }
    }
}

fn num_sign(r: &BigRational) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

/// Result of reduction into `[0, 2)`.
#[derive(Debug, Clone)]
pub struct Mod2 {
    pub residue: QuadNumber,
    pub shift: BigInt,
    pub approx: Approx,
}

impl std::fmt::Display for QuadNumber {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{} + {}*sqrt({})", self.a, self.b, self.d)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64, d: u64) -> QuadNumber {
        QuadNumber::new(
            BigRational::from_integer(a.into()),
            BigRational::from_integer(b.into()),
            d,
        )
        .unwrap()
    }

    /// Independent oracle: 200 decimal digits of sqrt(5) by integer square
    /// root of 5 * 10^400, far beyond the adaptive layer's precision here.
    fn sqrt5_digits_oracle() -> BigRational {
        let scaled = BigUint::from(5u32) * BigUint::from(10u32).pow(400);
        let root = scaled.sqrt();
        BigRational::new(root.into(), BigInt::from(10u32).pow(200))
    }

    #[test]
    fn mod2_even_integer_is_zero() {
        let m = QuadNumber::from_int(4).mod2(128).unwrap();
        assert!(m.residue.is_zero());
        assert_eq!(m.shift, BigInt::from(2));
        assert_eq!(m.approx.value, 0.0);
    }

    #[test]
    fn mod2_seven_plus_three_sqrt5() {
        // 7 + 3 sqrt(5) = 13.708...; residue 7 + 3 sqrt(5) - 12 ~ 1.7082
        let x = q(7, 3, 5);
        let m = x.mod2(128).unwrap();
        assert_eq!(m.shift, BigInt::from(6));
        assert_eq!(m.residue, q(-5, 3, 5));
        let oracle = BigRational::from_integer(7.into())
            + BigRational::from_integer(3.into()) * sqrt5_digits_oracle()
            - BigRational::from_integer(12.into());
        let want = ratio_to_f64(&oracle).value;
        assert!((m.approx.value - want).abs() <= m.approx.err + 1e-15);
        assert!((m.approx.value - 1.7082039324993694).abs() < 1e-12);
    }

    #[test]
    fn mod2_admissible_theta_residue() {
        // -5 - 3 sqrt(5) = -11.708...; residue 7 - 3 sqrt(5) ~ 0.2918
        let x = q(-5, -3, 5);
        let m = x.mod2(128).unwrap();
        assert_eq!(m.residue, q(7, -3, 5));
        let oracle = BigRational::from_integer(7.into())
            - BigRational::from_integer(3.into()) * sqrt5_digits_oracle();
        let want = ratio_to_f64(&oracle).value;
        assert!((m.approx.value - want).abs() <= m.approx.err + 1e-15);
        assert!((m.approx.value - 0.2917960675006306).abs() < 1e-12);
    }

    #[test]
    fn mod2_shift_invariance_exact() {
        let x = q(7, 3, 5);
        let shifted = x.add(&QuadNumber::from_int(2 * 9241)).unwrap();
        assert_eq!(
            x.mod2(96).unwrap().residue,
            shifted.mod2(96).unwrap().residue
        );
    }

    #[test]
    fn sign_is_exact_near_cancellation() {
        // 161/72 is a convergent of sqrt(5); 161 - 72 sqrt(5) is tiny but positive
        let x = q(161, -72, 5);
        assert_eq!(x.sign(), 1);
        let y = q(-161, 72, 5);
        assert_eq!(y.sign(), -1);
        // and the conjugate-style flip: 160.9... - 72 sqrt(5) < 0
        let z = q(160, -72, 5);
        assert_eq!(z.sign(), -1);
    }

    #[test]
    fn square_part_folds() {
        // sqrt(20) = 2 sqrt(5)
        let x = QuadNumber::sqrt_of(&BigInt::from(20)).unwrap();
        assert_eq!(x, q(0, 2, 5));
        // sqrt(9) = 3 exactly
        let y = QuadNumber::sqrt_of(&BigInt::from(9)).unwrap();
        assert!(y.is_rational());
        assert_eq!(y, QuadNumber::from_int(3));
    }

    #[test]
    fn inverse_and_norm() {
        let lam = QuadNumber::new(
            BigRational::new(3.into(), 2.into()),
            BigRational::new(1.into(), 2.into()),
            5,
        )
        .unwrap(); // (3 + sqrt(5))/2, the cat-map eigenvalue
        let inv = lam.inverse().unwrap();
        assert_eq!(lam.mul(&inv).unwrap(), QuadNumber::one());
        // norm lambda * lambda' = det = 1
        assert_eq!(lam.field_norm(), BigRational::one());
    }

    #[test]
    fn signed_residue_window() {
        // theta * 5 = 35 - 15 sqrt(5) ~ 1.459; signed residue 33 - 15 sqrt(5) ~ -0.541
        let x = q(35, -15, 5);
        let r = x.signed_mod2(128).unwrap();
        assert_eq!(r, q(33, -15, 5));
        assert!(r.sign() < 0);
    }

    #[test]
    fn approx_error_bound_holds_under_refinement() {
        let x = q(-5, 3, 5);
        let coarse = x.approx(64);
        let fine = x.approx(256);
        assert!((coarse.value - fine.value).abs() <= coarse.err + fine.err);
        assert!(fine.err < coarse.err || coarse.err == 0.0);
    }
}

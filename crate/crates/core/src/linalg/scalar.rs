//! Exact scalars over the three supported ground rings.
//!
//! Every arithmetic operation goes through a [`GroundRing`] so that the ring
//! semantics (rational field, prime field, integers) are explicit at each
//! call site. There is no floating point anywhere in the crate.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

use crate::error::Error;

/// The supported ground rings: ℚ, 𝔽_p (p prime), ℤ.
///
/// All three are principal ideal domains with trivial Picard group, which is
/// the design restriction the rest of the crate relies on.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroundRing {
    Rationals,
    PrimeField(u64),
    Integers,
}

fn is_prime(p: u64) -> bool {
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

impl GroundRing {
    /// 𝔽_p, validating primality. Characteristics are capped at 2³² so
    /// that products stay inside u128 with room to spare and the trial
    /// division stays instant.
    pub fn prime_field(p: u64) -> Result<Self, Error> {
        if p >= 1 << 32 {
            return Err(Error::InvalidInput(format!("prime {p} exceeds the 2^32 bound")));
        }
        if is_prime(p) {
            Ok(GroundRing::PrimeField(p))
        } else {
            Err(Error::InvalidInput(format!("{p} is not prime")))
        }
    }

    pub fn is_field(&self) -> bool {
        !matches!(self, GroundRing::Integers)
    }

    pub fn zero(&self) -> Scalar {
        match self {
            GroundRing::Rationals => Scalar::Rat(BigRational::zero()),
            GroundRing::PrimeField(_) => Scalar::Fp(0),
            GroundRing::Integers => Scalar::Int(BigInt::zero()),
        }
    }

    pub fn one(&self) -> Scalar {
        match self {
            GroundRing::Rationals => Scalar::Rat(BigRational::one()),
            GroundRing::PrimeField(_) => Scalar::Fp(1),
            GroundRing::Integers => Scalar::Int(BigInt::one()),
        }
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        match self {
            GroundRing::Rationals => Scalar::Rat(BigRational::from(BigInt::from(n))),
            GroundRing::PrimeField(p) => Scalar::Fp((n.rem_euclid(*p as i64)) as u64),
            GroundRing::Integers => Scalar::Int(BigInt::from(n)),
        }
    }

    fn mismatch(&self, s: &Scalar) -> ! {
        panic!("scalar {s:?} does not belong to ring {self:?}")
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (GroundRing::Rationals, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x + y),
            (GroundRing::PrimeField(p), Scalar::Fp(x), Scalar::Fp(y)) => {
                Scalar::Fp(((*x as u128 + *y as u128) % *p as u128) as u64)
            }
            (GroundRing::Integers, Scalar::Int(x), Scalar::Int(y)) => Scalar::Int(x + y),
            _ => self.mismatch(a),
        }
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.add(a, &self.neg(b))
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        match (self, a) {
            (GroundRing::Rationals, Scalar::Rat(x)) => Scalar::Rat(-x),
            (GroundRing::PrimeField(p), Scalar::Fp(x)) => Scalar::Fp(if *x == 0 { 0 } else { p - x }),
            (GroundRing::Integers, Scalar::Int(x)) => Scalar::Int(-x),
            _ => self.mismatch(a),
        }
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        match (self, a, b) {
            (GroundRing::Rationals, Scalar::Rat(x), Scalar::Rat(y)) => Scalar::Rat(x * y),
            (GroundRing::PrimeField(p), Scalar::Fp(x), Scalar::Fp(y)) => {
                Scalar::Fp(((*x as u128 * *y as u128) % *p as u128) as u64)
            }
            (GroundRing::Integers, Scalar::Int(x), Scalar::Int(y)) => Scalar::Int(x * y),
            _ => self.mismatch(a),
        }
    }

    /// Multiplicative inverse, when `a` is a unit of the ring.
    pub fn inv(&self, a: &Scalar) -> Option<Scalar> {
        match (self, a) {
            (GroundRing::Rationals, Scalar::Rat(x)) => {
                if x.is_zero() {
                    None
                } else {
                    Some(Scalar::Rat(x.recip()))
                }
            }
            (GroundRing::PrimeField(p), Scalar::Fp(x)) => {
                if *x == 0 {
                    None
                } else {
                    // extended Euclid in i128
                    let (mut r0, mut r1) = (*p as i128, *x as i128);
                    let (mut s0, mut s1) = (0i128, 1i128);
                    while r1 != 0 {
                        let q = r0 / r1;
                        (r0, r1) = (r1, r0 - q * r1);
                        (s0, s1) = (s1, s0 - q * s1);
                    }
                    debug_assert_eq!(r0, 1);
                    Some(Scalar::Fp(s0.rem_euclid(*p as i128) as u64))
                }
            }
            (GroundRing::Integers, Scalar::Int(x)) => {
                if x.abs().is_one() {
                    Some(Scalar::Int(x.clone()))
                } else {
                    None
                }
            }
            _ => self.mismatch(a),
        }
    }

    pub fn is_unit(&self, a: &Scalar) -> bool {
        match (self, a) {
            (GroundRing::Integers, Scalar::Int(x)) => x.abs().is_one(),
            _ => !a.is_zero(),
        }
    }

    /// Exact division `a / b` when the quotient lies in the ring.
    pub fn div_exact(&self, a: &Scalar, b: &Scalar) -> Option<Scalar> {
        match (self, a, b) {
            (GroundRing::Integers, Scalar::Int(x), Scalar::Int(y)) => {
                if y.is_zero() {
                    None
                } else {
                    let (q, r) = x.div_rem(y);
                    if r.is_zero() {
                        Some(Scalar::Int(q))
                    } else {
                        None
                    }
                }
            }
            _ => self.inv(b).map(|binv| self.mul(a, &binv)),
        }
    }

    /// Parse a coefficient string: an integer, or `a/b` over ℚ.
    pub fn parse(&self, text: &str) -> Result<Scalar, Error> {
        let bad = |reason: &str| Error::InvalidInput(format!("bad coefficient {text:?}: {reason}"));
        let text = text.trim();
        match self {
            GroundRing::Rationals => {
                if let Some((num, den)) = text.split_once('/') {
                    let n: BigInt = num.trim().parse().map_err(|_| bad("numerator"))?;
                    let d: BigInt = den.trim().parse().map_err(|_| bad("denominator"))?;
                    if d.is_zero() {
                        return Err(bad("zero denominator"));
                    }
                    Ok(Scalar::Rat(BigRational::new(n, d)))
                } else {
                    let n: BigInt = text.parse().map_err(|_| bad("not an integer"))?;
                    Ok(Scalar::Rat(BigRational::from(n)))
                }
            }
            GroundRing::PrimeField(p) => {
                let n: i64 = text.parse().map_err(|_| bad("not an integer"))?;
                if n < 0 || n as u64 >= *p {
                    return Err(bad(&format!("outside 0..{p}")));
                }
                Ok(Scalar::Fp(n as u64))
            }
            GroundRing::Integers => {
                let n: BigInt = text.parse().map_err(|_| bad("not an integer"))?;
                Ok(Scalar::Int(n))
            }
        }
    }
}

/// An exact scalar value. Rationals are kept as reduced fractions, integers
/// as arbitrary-precision values, prime-field elements as canonical residues.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rat(BigRational),
    Fp(u64),
    Int(BigInt),
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(x) => x.is_zero(),
            Scalar::Fp(x) => *x == 0,
            Scalar::Int(x) => x.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rat(x) => x.is_one(),
            Scalar::Fp(x) => *x == 1,
            Scalar::Int(x) => x.is_one(),
        }
    }

    /// The underlying integer, for scalars of ℤ.
    pub fn as_int(&self) -> &BigInt {
        match self {
            Scalar::Int(x) => x,
            _ => panic!("not an integer scalar"),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(x) => {
                if x.denom().is_one() {
                    write!(f, "{}", x.numer())
                } else {
                    write!(f, "{}/{}", x.numer(), x.denom())
                }
            }
            Scalar::Fp(x) => write!(f, "{x}"),
            Scalar::Int(x) => write!(f, "{x}"),
        }
    }
}

//! Exact scalars: rationals or residues modulo a prime.
//!
//! A computation is carried out over one [`Field`]; every [`Scalar`] knows the
//! field it belongs to, and mixing fields in one arithmetic operation is a
//! programming error that panics.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{OperadError, Result};

/// The coefficient field of a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Rational,
    Prime(u64),
}

impl Field {
    pub fn prime(p: u64) -> Result<Self> {
        if p < 2 || p > u32::MAX as u64 || !is_prime(p) {
            return Err(OperadError::InvalidField(format!("{p} is not a supported prime")));
        }
        Ok(Field::Prime(p))
    }

    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, k: i64) -> Scalar {
        match *self {
            Field::Rational => Scalar::Q(BigRational::from_integer(BigInt::from(k))),
            Field::Prime(p) => Scalar::Fp { value: k.rem_euclid(p as i64) as u64, modulus: p },
        }
    }

    /// `(-1)^e` in this field.
    pub fn sign(&self, exponent: usize) -> Scalar {
        if exponent.is_multiple_of(2) {
            self.one()
        } else {
            self.from_i64(-1)
        }
    }

    /// Short tag used on the command line and in JSON: `q` or `fp:<p>`.
    pub fn tag(&self) -> String {
        match self {
            Field::Rational => "q".to_string(),
            Field::Prime(p) => format!("fp:{p}"),
        }
    }

    /// Parses a coefficient string in this field. Accepts `p/q`, plain
    /// integers, and `k mod p` (the modulus must match for prime fields).
    pub fn parse_scalar(&self, s: &str) -> Result<Scalar> {
        let parsed: Scalar = s.parse()?;
        self.coerce(parsed)
    }

    /// Moves a parsed scalar into this field. Integers coerce freely; a
    /// `k mod p` value only belongs to `GF(p)`.
    pub fn coerce(&self, s: Scalar) -> Result<Scalar> {
        match (self, s) {
            (Field::Rational, Scalar::Q(q)) => Ok(Scalar::Q(q)),
            (Field::Prime(p), Scalar::Fp { value, modulus }) if modulus == *p => {
                Ok(Scalar::Fp { value, modulus })
            }
            (Field::Prime(p), Scalar::Q(q)) => {
                let num = mod_big(q.numer(), *p);
                let den = mod_big(q.denom(), *p);
                if den == 0 {
                    return Err(OperadError::InvalidField(format!(
                        "denominator of {q} vanishes modulo {p}"
                    )));
                }
                Ok(Scalar::Fp { value: num * inv_mod(den, *p) % p, modulus: *p })
            }
            (f, s) => Err(OperadError::FieldMismatch(format!(
                "scalar {s} does not belong to field {}",
                f.tag()
            ))),
        }
    }
}

impl FromStr for Field {
    type Err = OperadError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("q") {
            return Ok(Field::Rational);
        }
        let digits = s
            .strip_prefix("fp:")
            .or_else(|| s.strip_prefix("gf:"))
            .ok_or_else(|| OperadError::InvalidField(format!("unknown field `{s}`")))?;
        let p = digits
            .parse::<u64>()
            .map_err(|_| OperadError::InvalidField(format!("bad prime in `{s}`")))?;
        Field::prime(p)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tag())
    }
}

/// An exact field element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Q(BigRational),
    Fp { value: u64, modulus: u64 },
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Q(_) => Field::Rational,
            Scalar::Fp { modulus, .. } => Field::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_zero(),
            Scalar::Fp { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(q) => q.is_one(),
            Scalar::Fp { value, .. } => *value == 1,
        }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Q(q) => Scalar::Q(q.recip()),
            Scalar::Fp { value, modulus } => {
                Scalar::Fp { value: inv_mod(*value, *modulus), modulus: *modulus }
            }
        })
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Q(q) => write!(f, "{q}"),
            Scalar::Fp { value, modulus } => write!(f, "{value} mod {modulus}"),
        }
    }
}

impl FromStr for Scalar {
    type Err = OperadError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || OperadError::Parse(format!("bad scalar `{s}`"));
        let s = s.trim();
        if let Some((k, p)) = s.split_once("mod") {
            let p: u64 = p.trim().parse().map_err(|_| bad())?;
            let Field::Prime(p) = Field::prime(p)? else { unreachable!() };
            let k: i64 = k.trim().parse().map_err(|_| bad())?;
            return Ok(Field::Prime(p).from_i64(k));
        }
        let q = match s.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(bad());
                }
                BigRational::new(n, d)
            }
            None => BigRational::from_integer(s.parse().map_err(|_| bad())?),
        };
        Ok(Scalar::Q(q))
    }
}

fn mismatch(a: &Scalar, b: &Scalar) -> ! {
    panic!("field mismatch: {} vs {}", a.field(), b.field())
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            (Scalar::Fp { value: a, modulus: p }, Scalar::Fp { value: b, modulus: q }) if p == q => {
                Scalar::Fp { value: (a + b) % p, modulus: *p }
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a - b),
            (Scalar::Fp { value: a, modulus: p }, Scalar::Fp { value: b, modulus: q }) if p == q => {
                Scalar::Fp { value: (a + p - b) % p, modulus: *p }
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            (Scalar::Fp { value: a, modulus: p }, Scalar::Fp { value: b, modulus: q }) if p == q => {
                Scalar::Fp { value: a * b % p, modulus: *p }
            }
            _ => mismatch(self, rhs),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(-a),
            Scalar::Fp { value, modulus } => Scalar::Fp { value: (modulus - value) % modulus, modulus: *modulus },
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = &*self - rhs;
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn mod_big(k: &BigInt, p: u64) -> u64 {
    let r = k.abs() % BigInt::from(p);
    let r: u64 = r.try_into().expect("residue fits in u64");
    if k.is_negative() {
        (p - r) % p
    } else {
        r
    }
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // Fermat; p is prime and below 2^32 so the products fit.
    let mut result = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    result
}

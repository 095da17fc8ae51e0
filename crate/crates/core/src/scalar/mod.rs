//! Exact scalars over `Q`, cyclotomic fields `Q(zeta_n)` and prime fields `GF(p)`.
//!
//! Every [`FieldElement`] carries its field, and all values have a unique
//! representation: reduced fractions, power-basis coordinates modulo the
//! cyclotomic polynomial, or residues in `[0, p)`. Zero testing and equality
//! are therefore coordinate-wise.
//!
//! Arithmetic operators (`&a + &b`, ...) panic when the operands live in
//! different fields or on division by zero; the `checked_*` methods report
//! those cases as [`FieldError`] instead.

mod cyclotomic;
mod fraction;

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

pub use cyclotomic::{cyclotomic_polynomial, Cyclotomic, MAX_CYCLOTOMIC_ORDER};
pub use fraction::{format_fraction, parse_fraction, MAX_FRACTION_LEN};

/// Exclusive upper bound on supported prime moduli.
pub const PRIME_LIMIT: u64 = 1 << 31;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("field mismatch: {0} vs {1}")]
    Mismatch(FieldDescriptor, FieldDescriptor),
    #[error("division by zero")]
    DivisionByZero,
    #[error("cyclotomic order must lie in 3..={max}, got {0}", max = MAX_CYCLOTOMIC_ORDER)]
    BadOrder(u64),
    #[error("{0} is not a prime below 2^31")]
    NotPrime(u64),
    #[error("conjugation is undefined in characteristic {0}")]
    PositiveCharacteristic(u32),
    #[error("malformed fraction {0:?}")]
    MalformedFraction(String),
    #[error("malformed field element: {0}")]
    MalformedElement(String),
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum RawDescriptor {
    Rational,
    Cyclotomic { order: u64 },
    Prime { p: u64 },
}

/// Which field a value lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", try_from = "RawDescriptor")]
pub enum FieldDescriptor {
    Rational,
    Cyclotomic { order: u32 },
    Prime { p: u32 },
}

impl TryFrom<RawDescriptor> for FieldDescriptor {
    type Error = FieldError;

    fn try_from(raw: RawDescriptor) -> Result<Self, FieldError> {
        match raw {
            RawDescriptor::Rational => Ok(FieldDescriptor::Rational),
            RawDescriptor::Cyclotomic { order } => FieldDescriptor::cyclotomic(order),
            RawDescriptor::Prime { p } => FieldDescriptor::prime(p),
        }
    }
}

impl fmt::Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldDescriptor::Rational => write!(f, "Q"),
            FieldDescriptor::Cyclotomic { order } => write!(f, "Q(zeta_{order})"),
            FieldDescriptor::Prime { p } => write!(f, "GF({p})"),
        }
    }
}

impl FieldDescriptor {
    pub fn cyclotomic(order: u64) -> Result<Self, FieldError> {
        if !(3..=MAX_CYCLOTOMIC_ORDER as u64).contains(&order) {
            return Err(FieldError::BadOrder(order));
        }
        Ok(FieldDescriptor::Cyclotomic { order: order as u32 })
    }

    pub fn prime(p: u64) -> Result<Self, FieldError> {
        if p >= PRIME_LIMIT || !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(FieldDescriptor::Prime { p: p as u32 })
    }

    pub fn characteristic(&self) -> u32 {
        match self {
            FieldDescriptor::Prime { p } => *p,
            _ => 0,
        }
    }

    pub fn zero(&self) -> FieldElement {
        self.from_i64(0)
    }

    pub fn one(&self) -> FieldElement {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> FieldElement {
        self.from_rational(&BigRational::from_integer(v.into()))
            .expect("integers embed in every supported field")
    }

    /// Embed a rational; fails in `GF(p)` when `p` divides the denominator.
    pub fn from_rational(&self, q: &BigRational) -> Result<FieldElement, FieldError> {
        let repr = match self {
            FieldDescriptor::Rational => Repr::Rational(q.clone()),
            FieldDescriptor::Cyclotomic { order } => {
                let ctx = cyclotomic::context(*order);
                let mut coeffs = vec![BigRational::zero(); ctx.degree()];
                coeffs[0] = q.clone();
                Repr::Cyclotomic { ctx, coeffs }
            }
            FieldDescriptor::Prime { p } => {
                let p = *p;
                let num = residue(q.numer(), p);
                let den = residue(q.denom(), p);
                if den == 0 {
                    return Err(FieldError::DivisionByZero);
                }
                Repr::Prime { p, value: mul_mod(num, inv_mod(den, p), p) as u32 }
            }
        };
        Ok(FieldElement { repr })
    }

    /// The residue `v mod p`; only meaningful for prime fields.
    pub fn from_residue(&self, v: u64) -> Result<FieldElement, FieldError> {
        match self {
            FieldDescriptor::Prime { p } if v < *p as u64 => {
                Ok(FieldElement { repr: Repr::Prime { p: *p, value: v as u32 } })
            }
            _ => Err(FieldError::MalformedElement(format!("residue {v} is not valid in {self}"))),
        }
    }

    /// Decode an element from its JSON form: `"p/q"`, an array of `phi(n)`
    /// such strings, or an integer in `[0, p)`.
    pub fn element_from_json(&self, value: &Value) -> Result<FieldElement, FieldError> {
        let bad = |what: &str| FieldError::MalformedElement(format!("{what} for {self}"));
        match self {
            FieldDescriptor::Rational => match value {
                Value::String(s) => Ok(FieldElement { repr: Repr::Rational(parse_fraction(s)?) }),
                _ => Err(bad("expected a fraction string")),
            },
            FieldDescriptor::Cyclotomic { order } => {
                let ctx = cyclotomic::context(*order);
                let items = value.as_array().ok_or_else(|| bad("expected an array of fraction strings"))?;
                if items.len() != ctx.degree() {
                    return Err(bad(&format!(
                        "expected {} coordinates, found {}",
                        ctx.degree(),
                        items.len()
                    )));
                }
                let coeffs = items
                    .iter()
                    .map(|v| match v {
                        Value::String(s) => parse_fraction(s),
                        _ => Err(bad("expected a fraction string")),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(FieldElement { repr: Repr::Cyclotomic { ctx, coeffs } })
            }
            FieldDescriptor::Prime { .. } => {
                let v = value.as_u64().ok_or_else(|| bad("expected a non-negative integer"))?;
                self.from_residue(v)
            }
        }
    }

    /// `zeta_n` in `Q(zeta_n)`.
    pub fn primitive_root(&self) -> Result<FieldElement, FieldError> {
        match self {
            FieldDescriptor::Cyclotomic { order } => primitive_root(*order as u64),
            _ => Err(FieldError::BadOrder(0)),
        }
    }
}

fn residue(v: &num_bigint::BigInt, p: u32) -> u64 {
    use num_integer::Integer;
    let r = v.mod_floor(&num_bigint::BigInt::from(p));
    r.try_into().expect("residue fits in u64")
}

fn mul_mod(a: u64, b: u64, p: u32) -> u64 {
    a * b % p as u64
}

fn pow_mod(mut base: u64, mut exp: u64, p: u32) -> u64 {
    let mut acc = 1u64 % p as u64;
    base %= p as u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u32) -> u64 {
    pow_mod(a, p as u64 - 2, p)
}

/// `zeta_n` as the power-basis vector `(0, 1, 0, ...)`.
pub fn primitive_root(n: u64) -> Result<FieldElement, FieldError> {
    let FieldDescriptor::Cyclotomic { order } = FieldDescriptor::cyclotomic(n)? else { unreachable!() };
    let ctx = cyclotomic::context(order);
    let coeffs = ctx.power(1).to_vec();
    Ok(FieldElement { repr: Repr::Cyclotomic { ctx, coeffs } })
}

#[derive(Clone)]
enum Repr {
    Rational(BigRational),
    Cyclotomic { ctx: Arc<Cyclotomic>, coeffs: Vec<BigRational> },
    Prime { p: u32, value: u32 },
}

/// An exact scalar together with the field it belongs to.
#[derive(Clone)]
pub struct FieldElement {
    repr: Repr,
}

impl FieldElement {
    pub fn descriptor(&self) -> FieldDescriptor {
        match &self.repr {
            Repr::Rational(_) => FieldDescriptor::Rational,
            Repr::Cyclotomic { ctx, .. } => FieldDescriptor::Cyclotomic { order: ctx.order() },
            Repr::Prime { p, .. } => FieldDescriptor::Prime { p: *p },
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Rational(q) => q.is_zero(),
            Repr::Cyclotomic { coeffs, .. } => coeffs.iter().all(Zero::is_zero),
            Repr::Prime { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.repr {
            Repr::Rational(q) => q.is_one(),
            Repr::Cyclotomic { coeffs, .. } => coeffs[0].is_one() && coeffs[1..].iter().all(Zero::is_zero),
            Repr::Prime { value, .. } => *value == 1,
        }
    }

    /// The rational value, when the element lies in the prime subfield `Q`.
    pub fn to_rational(&self) -> Option<BigRational> {
        match &self.repr {
            Repr::Rational(q) => Some(q.clone()),
            Repr::Cyclotomic { coeffs, .. } if coeffs[1..].iter().all(Zero::is_zero) => {
                Some(coeffs[0].clone())
            }
            _ => None,
        }
    }

    /// Power-basis coordinates for cyclotomic elements.
    pub fn coordinates(&self) -> Option<&[BigRational]> {
        match &self.repr {
            Repr::Cyclotomic { coeffs, .. } => Some(coeffs),
            _ => None,
        }
    }

    fn same_field(&self, other: &Self) -> Result<(), FieldError> {
        let (a, b) = (self.descriptor(), other.descriptor());
        if a == b {
            Ok(())
        } else {
            Err(FieldError::Mismatch(a, b))
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, FieldError> {
        self.same_field(other)?;
        let repr = match (&self.repr, &other.repr) {
            (Repr::Rational(a), Repr::Rational(b)) => Repr::Rational(a + b),
            (Repr::Cyclotomic { ctx, coeffs: a }, Repr::Cyclotomic { coeffs: b, .. }) => {
                Repr::Cyclotomic { ctx: ctx.clone(), coeffs: a.iter().zip(b).map(|(x, y)| x + y).collect() }
            }
            (Repr::Prime { p, value: a }, Repr::Prime { value: b, .. }) => {
                Repr::Prime { p: *p, value: ((*a as u64 + *b as u64) % *p as u64) as u32 }
            }
            _ => unreachable!("descriptors already compared"),
        };
        Ok(FieldElement { repr })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, FieldError> {
        self.checked_add(&other.neg_ref())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, FieldError> {
        self.same_field(other)?;
        let repr = match (&self.repr, &other.repr) {
            (Repr::Rational(a), Repr::Rational(b)) => Repr::Rational(a * b),
            (Repr::Cyclotomic { ctx, coeffs: a }, Repr::Cyclotomic { coeffs: b, .. }) => {
                Repr::Cyclotomic { ctx: ctx.clone(), coeffs: ctx.mul(a, b) }
            }
            (Repr::Prime { p, value: a }, Repr::Prime { value: b, .. }) => {
                Repr::Prime { p: *p, value: mul_mod(*a as u64, *b as u64, *p) as u32 }
            }
            _ => unreachable!("descriptors already compared"),
        };
        Ok(FieldElement { repr })
    }

    pub fn checked_inverse(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let repr = match &self.repr {
            Repr::Rational(a) => Repr::Rational(a.recip()),
            Repr::Cyclotomic { ctx, coeffs } => Repr::Cyclotomic {
                ctx: ctx.clone(),
                coeffs: ctx.inverse(coeffs).ok_or(FieldError::DivisionByZero)?,
            },
            Repr::Prime { p, value } => Repr::Prime { p: *p, value: inv_mod(*value as u64, *p) as u32 },
        };
        Ok(FieldElement { repr })
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, FieldError> {
        self.same_field(other)?;
        self.checked_mul(&other.checked_inverse()?)
    }

    fn neg_ref(&self) -> Self {
        let repr = match &self.repr {
            Repr::Rational(a) => Repr::Rational(-a),
            Repr::Cyclotomic { ctx, coeffs } => {
                Repr::Cyclotomic { ctx: ctx.clone(), coeffs: coeffs.iter().map(|c| -c).collect() }
            }
            Repr::Prime { p, value } => Repr::Prime { p: *p, value: ((*p - *value) % *p) },
        };
        FieldElement { repr }
    }

    pub fn inverse(&self) -> Self {
        self.checked_inverse().expect("inverse of zero")
    }

    pub fn pow(&self, mut exp: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.descriptor().one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            exp >>= 1;
        }
        acc
    }

    /// Complex conjugate; rationals are fixed and `zeta -> zeta^-1`.
    pub fn conjugate(&self) -> Result<Self, FieldError> {
        match &self.repr {
            Repr::Rational(_) => Ok(self.clone()),
            Repr::Cyclotomic { ctx, coeffs } => Ok(FieldElement {
                repr: Repr::Cyclotomic { ctx: ctx.clone(), coeffs: ctx.conjugate(coeffs) },
            }),
            Repr::Prime { p, .. } => Err(FieldError::PositiveCharacteristic(*p)),
        }
    }

    pub fn to_json(&self) -> Value {
        match &self.repr {
            Repr::Rational(q) => Value::String(format_fraction(q)),
            Repr::Cyclotomic { coeffs, .. } => {
                Value::Array(coeffs.iter().map(|c| Value::String(format_fraction(c))).collect())
            }
            Repr::Prime { value, .. } => Value::from(*value),
        }
    }

    fn rank(&self) -> u8 {
        match self.repr {
            Repr::Rational(_) => 0,
            Repr::Cyclotomic { .. } => 1,
            Repr::Prime { .. } => 2,
        }
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for FieldElement {}

/// A total order on representations (not a field ordering); used for
/// deterministic sorting and grouping.
impl Ord for FieldElement {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.repr, &other.repr) {
            (Repr::Rational(a), Repr::Rational(b)) => a.cmp(b),
            (Repr::Cyclotomic { ctx: c1, coeffs: a }, Repr::Cyclotomic { ctx: c2, coeffs: b }) => {
                c1.order().cmp(&c2.order()).then_with(|| a.cmp(b))
            }
            (Repr::Prime { p: p1, value: a }, Repr::Prime { p: p2, value: b }) => p1.cmp(p2).then(a.cmp(b)),
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Hash for FieldElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.rank().hash(state);
        match &self.repr {
            Repr::Rational(q) => q.hash(state),
            Repr::Cyclotomic { ctx, coeffs } => {
                ctx.order().hash(state);
                coeffs.hash(state);
            }
            Repr::Prime { p, value } => {
                p.hash(state);
                value.hash(state);
            }
        }
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Rational(q) => write!(f, "{}", format_fraction(q)),
            Repr::Prime { value, .. } => write!(f, "{value}"),
            Repr::Cyclotomic { coeffs, .. } => {
                let terms: Vec<String> = coeffs
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(j, c)| match j {
                        0 => format_fraction(c),
                        1 => format!("{}*z", format_fraction(c)),
                        _ => format!("{}*z^{j}", format_fraction(c)),
                    })
                    .collect();
                if terms.is_empty() {
                    write!(f, "0")
                } else {
                    write!(f, "{}", terms.join(" + "))
                }
            }
        }
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&FieldElement> for &FieldElement {
            type Output = FieldElement;

            fn $method(self, rhs: &FieldElement) -> FieldElement {
                match self.$checked(rhs) {
                    Ok(v) => v,
                    Err(e) => panic!("{}", e),
                }
            }
        }

        impl $trait<FieldElement> for FieldElement {
            type Output = FieldElement;

            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);
binop!(Div, div, checked_div);

impl Neg for &FieldElement {
    type Output = FieldElement;

    fn neg(self) -> FieldElement {
        self.neg_ref()
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;

    fn neg(self) -> FieldElement {
        self.neg_ref()
    }
}

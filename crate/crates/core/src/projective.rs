//! Points and lines of the projective plane with exact incidence.
//!
//! Points and lines are both homogeneous triples scaled so that the first
//! nonzero coordinate is `1`. Meet and join are the same cross product.

use std::fmt;

use thiserror::Error;

use crate::scalar::{FieldDescriptor, FieldElement, FieldError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("homogeneous coordinates must not all be zero")]
    ZeroTriple,
    #[error("meet of a line with itself is not a point")]
    IdenticalLines,
    #[error("join of a point with itself is not a line")]
    IdenticalPoints,
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// A canonical homogeneous triple: first nonzero entry is `1`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple([FieldElement; 3]);

impl Triple {
    pub fn new(coords: [FieldElement; 3]) -> Result<Self, GeometryError> {
        let field = coords[0].descriptor();
        for c in &coords[1..] {
            let other = c.descriptor();
            if other != field {
                return Err(FieldError::Mismatch(field, other).into());
            }
        }
        canonicalize(coords).map(Triple)
    }

    pub fn coords(&self) -> &[FieldElement; 3] {
        &self.0
    }

    pub fn field(&self) -> FieldDescriptor {
        self.0[0].descriptor()
    }

    fn dot(&self, other: &Triple) -> Result<FieldElement, GeometryError> {
        let [a0, a1, a2] = &self.0;
        let [b0, b1, b2] = &other.0;
        let s = a0.checked_mul(b0)?;
        let s = s.checked_add(&a1.checked_mul(b1)?)?;
        Ok(s.checked_add(&a2.checked_mul(b2)?)?)
    }
}

/// Scale so that the first nonzero coordinate is one.
pub fn canonicalize(coords: [FieldElement; 3]) -> Result<[FieldElement; 3], GeometryError> {
    let lead = coords.iter().find(|c| !c.is_zero()).ok_or(GeometryError::ZeroTriple)?;
    if lead.is_one() {
        return Ok(coords);
    }
    let inv = lead.checked_inverse()?;
    let [a, b, c] = coords;
    Ok([&a * &inv, &b * &inv, &c * &inv])
}

/// Exact cross product; zero iff the inputs are proportional.
pub fn cross(a: &[FieldElement; 3], b: &[FieldElement; 3]) -> Result<[FieldElement; 3], FieldError> {
    let c0 = a[1].checked_mul(&b[2])?.checked_sub(&a[2].checked_mul(&b[1])?)?;
    let c1 = a[2].checked_mul(&b[0])?.checked_sub(&a[0].checked_mul(&b[2])?)?;
    let c2 = a[0].checked_mul(&b[1])?.checked_sub(&a[1].checked_mul(&b[0])?)?;
    Ok([c0, c1, c2])
}

impl fmt::Debug for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.0[0], self.0[1], self.0[2])
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

macro_rules! homogeneous {
    ($name:ident) => {
        #[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub struct $name(Triple);

        impl $name {
            pub fn new(coords: [FieldElement; 3]) -> Result<Self, GeometryError> {
                Triple::new(coords).map($name)
            }

            /// Build from small integer coordinates in `field`.
            pub fn from_ints(field: FieldDescriptor, c: [i64; 3]) -> Result<Self, GeometryError> {
                Self::new(c.map(|v| field.from_i64(v)))
            }

            pub fn coords(&self) -> &[FieldElement; 3] {
                self.0.coords()
            }

            pub fn field(&self) -> FieldDescriptor {
                self.0.field()
            }

            pub fn triple(&self) -> &Triple {
                &self.0
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}{:?}", stringify!($name), self.0)
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                fmt::Display::fmt(&self.0, f)
            }
        }
    };
}

homogeneous!(ProjPoint);
homogeneous!(ProjLine);

/// The common point of two distinct lines.
pub fn meet(a: &ProjLine, b: &ProjLine) -> Result<ProjPoint, GeometryError> {
    let c = cross(a.coords(), b.coords())?;
    ProjPoint::new(c).map_err(|e| match e {
        GeometryError::ZeroTriple => GeometryError::IdenticalLines,
        other => other,
    })
}

/// The line through two distinct points.
pub fn join(p: &ProjPoint, q: &ProjPoint) -> Result<ProjLine, GeometryError> {
    let c = cross(p.coords(), q.coords())?;
    ProjLine::new(c).map_err(|e| match e {
        GeometryError::ZeroTriple => GeometryError::IdenticalPoints,
        other => other,
    })
}

pub fn incident(p: &ProjPoint, line: &ProjLine) -> Result<bool, GeometryError> {
    Ok(p.triple().dot(line.triple())?.is_zero())
}

/// Whether the line is defined over the reals, i.e. proportional to its
/// complex conjugate.
pub fn is_real_line(line: &ProjLine) -> Result<bool, GeometryError> {
    let conj = [line.coords()[0].conjugate()?, line.coords()[1].conjugate()?, line.coords()[2].conjugate()?];
    let c = cross(line.coords(), &conj)?;
    Ok(c.iter().all(FieldElement::is_zero))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::primitive_root;

    const Q: FieldDescriptor = FieldDescriptor::Rational;

    fn line(c: [i64; 3]) -> ProjLine {
        ProjLine::from_ints(Q, c).unwrap()
    }

    fn point(c: [i64; 3]) -> ProjPoint {
        ProjPoint::from_ints(Q, c).unwrap()
    }

    #[test]
    fn meet_examples() {
        assert_eq!(meet(&line([1, 0, 0]), &line([0, 1, 0])).unwrap(), point([0, 0, 1]));
        assert_eq!(meet(&line([1, -1, 0]), &line([0, 1, -1])).unwrap(), point([1, 1, 1]));
        assert_eq!(meet(&line([2, 0, 0]), &line([1, 0, 0])).unwrap_err(), GeometryError::IdenticalLines);
    }

    #[test]
    fn meet_over_zeta3() {
        let z = primitive_root(3).unwrap();
        let f = z.descriptor();
        let (zero, one) = (f.zero(), f.one());
        // y - z*w = 0 and x - z*y = 0 meet at (z^2, z, 1)
        let a = ProjLine::new([zero.clone(), one.clone(), -&z]).unwrap();
        let b = ProjLine::new([one.clone(), -&z, zero.clone()]).unwrap();
        let p = meet(&a, &b).unwrap();
        let expected = ProjPoint::new([z.pow(2), z.clone(), one]).unwrap();
        assert_eq!(p, expected);
    }

    #[test]
    fn join_examples() {
        assert_eq!(join(&point([0, 0, 1]), &point([0, 1, 0])).unwrap(), line([1, 0, 0]));
        assert_eq!(join(&point([1, 0, 0]), &point([0, 1, 0])).unwrap(), line([0, 0, 1]));
        assert_eq!(join(&point([1, 2, 3]), &point([2, 4, 6])).unwrap_err(), GeometryError::IdenticalPoints);
    }

    #[test]
    fn join_through_unit_point_and_root() {
        // (1,1,1) and (1,e,1) span x - z = 0 for every root e != 1
        for n in [3u64, 4, 5, 7] {
            let e = primitive_root(n).unwrap();
            let f = e.descriptor();
            let p = ProjPoint::new([f.one(), f.one(), f.one()]).unwrap();
            let q = ProjPoint::new([f.one(), e, f.one()]).unwrap();
            assert_eq!(join(&p, &q).unwrap(), ProjLine::from_ints(f, [1, 0, -1]).unwrap());
        }
    }

    #[test]
    fn incidence_examples() {
        assert!(!incident(&point([0, 0, 1]), &line([0, 0, 1])).unwrap());
        assert!(incident(&point([1, 1, 1]), &line([1, -1, 0])).unwrap());
        assert!(incident(&point([2, 1, 1]), &line([1, -1, -1])).unwrap());
        let z = primitive_root(3).unwrap();
        let p = ProjPoint::new([z.clone(), z.clone(), z]).unwrap();
        assert!(incident(&p, &line([1, -1, 0])).is_err());
    }

    #[test]
    fn realness() {
        let half = num_rational::BigRational::new(3.into(), 2.into());
        let l = ProjLine::new([Q.one(), -Q.from_rational(&half).unwrap(), Q.zero()]).unwrap();
        assert!(is_real_line(&l).unwrap());

        let z = primitive_root(3).unwrap();
        let f = z.descriptor();
        let l = ProjLine::new([f.one(), -&z, f.zero()]).unwrap();
        assert!(!is_real_line(&l).unwrap());

        let i = primitive_root(4).unwrap();
        let f = i.descriptor();
        let l = ProjLine::new([i.clone(), -&i, f.zero()]).unwrap();
        assert!(is_real_line(&l).unwrap());

        let g = FieldDescriptor::prime(3).unwrap();
        assert!(is_real_line(&ProjLine::from_ints(g, [1, 0, 0]).unwrap()).is_err());
    }

    #[test]
    fn canonical_form() {
        let a = point([0, 2, 4]);
        assert_eq!(a, point([0, 1, 2]));
        assert_eq!(a, point([0, -3, -6]));
        assert_eq!(ProjPoint::from_ints(Q, [0, 0, 0]).unwrap_err(), GeometryError::ZeroTriple);
    }
}

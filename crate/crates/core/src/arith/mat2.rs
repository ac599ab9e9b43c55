use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::rat::{common_denominator, Rat};
use crate::error::{Error, Result};

/// A column vector in ℚ².
pub type Vec2 = [Rat; 2];

pub fn vec2(x: impl Into<Rat>, y: impl Into<Rat>) -> Vec2 {
    [x.into(), y.into()]
}

pub fn vec_add(u: &Vec2, v: &Vec2) -> Vec2 {
    [&u[0] + &v[0], &u[1] + &v[1]]
}

pub fn vec_sub(u: &Vec2, v: &Vec2) -> Vec2 {
    [&u[0] - &v[0], &u[1] - &v[1]]
}

pub fn vec_neg(u: &Vec2) -> Vec2 {
    [-&u[0], -&u[1]]
}

pub fn vec_is_integral(u: &Vec2) -> bool {
    u[0].is_integer() && u[1].is_integer()
}

pub fn fmt_vec(u: &Vec2) -> String {
    format!("({},{})", u[0], u[1])
}

/// A 2×2 rational matrix, stored row-major as `[[a, b], [c, d]]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat2 {
    pub a: Rat,
    pub b: Rat,
    pub c: Rat,
    pub d: Rat,
}

impl Mat2 {
    pub fn new(a: impl Into<Rat>, b: impl Into<Rat>, c: impl Into<Rat>, d: impl Into<Rat>) -> Self {
        Mat2 {
            a: a.into(),
            b: b.into(),
            c: c.into(),
            d: d.into(),
        }
    }

    pub fn identity() -> Self {
        Mat2::new(1, 0, 0, 1)
    }

    pub fn diag(x: impl Into<Rat>, y: impl Into<Rat>) -> Self {
        Mat2::new(x.into(), Rat::zero(), Rat::zero(), y.into())
    }

    pub fn scalar(x: impl Into<Rat>) -> Self {
        let x = x.into();
        Mat2::diag(x.clone(), x)
    }

    /// The matrix whose columns are `u` and `v`.
    pub fn from_columns(u: &Vec2, v: &Vec2) -> Self {
        Mat2::new(u[0].clone(), v[0].clone(), u[1].clone(), v[1].clone())
    }

    pub fn columns(&self) -> [Vec2; 2] {
        [
            [self.a.clone(), self.c.clone()],
            [self.b.clone(), self.d.clone()],
        ]
    }

    pub fn entries(&self) -> [&Rat; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn det(&self) -> Rat {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_one() && self.d.is_one() && self.b.is_zero() && self.c.is_zero()
    }

    pub fn is_integral(&self) -> bool {
        self.entries().iter().all(|e| e.is_integer())
    }

    pub fn is_lower_triangular(&self) -> bool {
        self.b.is_zero()
    }

    pub fn adjugate(&self) -> Mat2 {
        Mat2::new(self.d.clone(), -&self.b, -&self.c, self.a.clone())
    }

    pub fn inverse(&self) -> Result<Mat2> {
        let det = self.det();
        if det.is_zero() {
            return Err(Error::SingularBasis);
        }
        Ok(self.adjugate().scale(&det.recip()))
    }

    pub fn transpose(&self) -> Mat2 {
        Mat2::new(self.a.clone(), self.c.clone(), self.b.clone(), self.d.clone())
    }

    pub fn scale(&self, k: &Rat) -> Mat2 {
        Mat2::new(&self.a * k, &self.b * k, &self.c * k, &self.d * k)
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Mat2::new(
            &self.a * &o.a + &self.b * &o.c,
            &self.a * &o.b + &self.b * &o.d,
            &self.c * &o.a + &self.d * &o.c,
            &self.c * &o.b + &self.d * &o.d,
        )
    }

    pub fn sub(&self, o: &Mat2) -> Mat2 {
        Mat2::new(&self.a - &o.a, &self.b - &o.b, &self.c - &o.c, &self.d - &o.d)
    }

    pub fn apply(&self, v: &Vec2) -> Vec2 {
        [
            &self.a * &v[0] + &self.b * &v[1],
            &self.c * &v[0] + &self.d * &v[1],
        ]
    }

    /// `self^k` for `k ≥ 0`.
    pub fn pow(&self, k: u32) -> Mat2 {
        (0..k).fold(Mat2::identity(), |acc, _| acc.mul(self))
    }

    /// Writes `self = scalar · P` with `P` an integer matrix whose entries have gcd 1.
    pub fn primitive_part(&self) -> (Rat, [BigInt; 4]) {
        let den = common_denominator(self.entries());
        let ints: Vec<BigInt> = self
            .entries()
            .iter()
            .map(|e| (*e * &Rat::int(den.clone())).to_integer().unwrap())
            .collect();
        let content = ints.iter().fold(BigInt::zero(), |g, v| g.gcd(v));
        if content.is_zero() {
            return (Rat::zero(), [BigInt::zero(), BigInt::zero(), BigInt::zero(), BigInt::zero()]);
        }
        let p = [
            &ints[0] / &content,
            &ints[1] / &content,
            &ints[2] / &content,
            &ints[3] / &content,
        ];
        (Rat::new(content, den), p)
    }

    /// Smallest positive integer `k` with `k · self` integral.
    pub fn denominator(&self) -> BigInt {
        common_denominator(self.entries())
    }

    pub fn from_ints(e: [i64; 4]) -> Mat2 {
        Mat2::new(e[0], e[1], e[2], e[3])
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

impl fmt::Debug for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parses a flat list of rationals written with arbitrary brackets and commas,
/// e.g. `[[1,1/2],[0,1]]` or `(1/2, 0)`.
pub fn parse_rat_list(s: &str) -> Result<Vec<Rat>> {
    let cleaned: String = s
        .chars()
        .map(|c| if matches!(c, '[' | ']' | '(' | ')' | '"') { ' ' } else { c })
        .collect();
    cleaned
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(str::parse)
        .collect()
}

impl FromStr for Mat2 {
    type Err = Error;

    fn from_str(s: &str) -> Result<Mat2> {
        let v = parse_rat_list(s)?;
        if v.len() != 4 {
            return Err(Error::Parse(format!("expected 4 matrix entries in {s:?}")));
        }
        let mut it = v.into_iter();
        Ok(Mat2 {
            a: it.next().unwrap(),
            b: it.next().unwrap(),
            c: it.next().unwrap(),
            d: it.next().unwrap(),
        })
    }
}

pub fn parse_vec2(s: &str) -> Result<Vec2> {
    let v = parse_rat_list(s)?;
    if v.len() != 2 {
        return Err(Error::Parse(format!("expected 2 vector entries in {s:?}")));
    }
    let mut it = v.into_iter();
    Ok([it.next().unwrap(), it.next().unwrap()])
}

impl Serialize for Mat2 {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        [[&self.a, &self.b], [&self.c, &self.d]].serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Mat2 {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let [[a, b], [c, d]] = <[[Rat; 2]; 2]>::deserialize(deserializer)?;
        Ok(Mat2 { a, b, c, d })
    }
}

/// Integer 2×2 matrix helpers used by the residue-level code.
pub fn int_mat_det(m: &[BigInt; 4]) -> BigInt {
    &m[0] * &m[3] - &m[1] * &m[2]
}

pub fn int_is_unit(v: &BigInt) -> bool {
    v.abs().is_one()
}

//! Divisor classes on the blown-up surface in the basis
//! `{E*_0, E*_1, ..., E*_s}` of total transforms, where `E*_0` is the pullback
//! of a general line. The intersection form is diagonal with signature
//! `(+1, -1, ..., -1)` in this basis.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::configuration::Configuration;
use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rational(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DivisorClass {
    /// Coefficient of `E*_0`.
    pub line: Rational,
    /// Coefficients of `E*_1, ..., E*_s` in the admissible order.
    pub exc: Vec<Rational>,
}

impl DivisorClass {
    pub fn zero(s: usize) -> Self {
        DivisorClass { line: Rational::zero(), exc: vec![Rational::zero(); s] }
    }

    /// `E*_0`, the class of a general line.
    pub fn hyperplane(s: usize) -> Self {
        let mut d = Self::zero(s);
        d.line = Rational::one();
        d
    }

    /// `E*_u` for a 1-based ordinal `u`.
    pub fn total(s: usize, u: usize) -> Result<Self> {
        if u == 0 || u > s {
            return Err(Error::Structural(format!("ordinal {u} out of range 1..={s}")));
        }
        let mut d = Self::zero(s);
        d.exc[u - 1] = Rational::one();
        Ok(d)
    }

    pub fn from_ints(line: i64, exc: &[i64]) -> Self {
        DivisorClass { line: rational(line), exc: exc.iter().map(|&x| rational(x)).collect() }
    }

    /// Builds a class from `[line, exc_1, ..., exc_s]`.
    pub fn from_coordinates(coords: &[Rational]) -> Result<Self> {
        match coords.split_first() {
            Some((line, exc)) => Ok(DivisorClass { line: line.clone(), exc: exc.to_vec() }),
            None => Err(Error::Structural("empty coordinate vector".into())),
        }
    }

    pub fn from_integer_coordinates(coords: &[BigInt]) -> Result<Self> {
        let q: Vec<Rational> = coords.iter().map(|x| Rational::from_integer(x.clone())).collect();
        Self::from_coordinates(&q)
    }

    /// Number of exceptional coordinates `s`.
    pub fn len(&self) -> usize {
        self.exc.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exc.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.exc.len() + 1
    }

    pub fn is_zero(&self) -> bool {
        self.line.is_zero() && self.exc.iter().all(Zero::is_zero)
    }

    pub fn coordinates(&self) -> Vec<Rational> {
        std::iter::once(self.line.clone()).chain(self.exc.iter().cloned()).collect()
    }

    pub fn is_integral(&self) -> bool {
        self.line.is_integer() && self.exc.iter().all(|x| x.is_integer())
    }

    /// Integer coordinates if the class is integral.
    pub fn integer_coordinates(&self) -> Option<Vec<BigInt>> {
        self.coordinates().into_iter().map(|x| x.is_integer().then(|| x.to_integer())).collect()
    }

    /// The primitive integer vector on the ray spanned by the class (cleared
    /// of denominators and divided by the content). `None` for the zero class.
    pub fn primitive_ray(&self) -> Option<Vec<BigInt>> {
        if self.is_zero() {
            return None;
        }
        let coords = self.coordinates();
        let lcm = coords.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let ints: Vec<BigInt> = coords.iter().map(|x| (x * Rational::from_integer(lcm.clone())).to_integer()).collect();
        let content = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        Some(ints.into_iter().map(|x| x / &content).collect())
    }

    /// The intersection product `a·b = a_0 b_0 - Σ a_u b_u`.
    pub fn intersect(&self, other: &DivisorClass) -> Result<Rational> {
        if self.exc.len() != other.exc.len() {
            return Err(Error::Structural(format!(
                "cannot intersect classes over {} and {} points",
                self.exc.len(),
                other.exc.len()
            )));
        }
        let mut acc = &self.line * &other.line;
        for (x, y) in self.exc.iter().zip(&other.exc) {
            acc -= x * y;
        }
        Ok(acc)
    }

    pub fn self_intersection(&self) -> Rational {
        self.intersect(self).expect("same dimension")
    }

    pub fn scale(&self, c: &Rational) -> DivisorClass {
        DivisorClass { line: &self.line * c, exc: self.exc.iter().map(|x| x * c).collect() }
    }

    fn zip_with(&self, other: &DivisorClass, f: impl Fn(&Rational, &Rational) -> Rational) -> DivisorClass {
        assert_eq!(self.exc.len(), other.exc.len(), "divisor classes over different configurations");
        DivisorClass {
            line: f(&self.line, &other.line),
            exc: self.exc.iter().zip(&other.exc).map(|(a, b)| f(a, b)).collect(),
        }
    }
}

impl Add for &DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: &DivisorClass) -> DivisorClass {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: &DivisorClass) -> DivisorClass {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Add for DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: DivisorClass) -> DivisorClass {
        &self + &rhs
    }
}

impl Sub for DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: DivisorClass) -> DivisorClass {
        &self - &rhs
    }
}

impl Neg for DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        self.scale(&-Rational::one())
    }
}

impl Mul<&DivisorClass> for &Rational {
    type Output = DivisorClass;
    fn mul(self, rhs: &DivisorClass) -> DivisorClass {
        rhs.scale(self)
    }
}

impl Mul<&DivisorClass> for i64 {
    type Output = DivisorClass;
    fn mul(self, rhs: &DivisorClass) -> DivisorClass {
        rhs.scale(&rational(self))
    }
}

impl fmt::Display for DivisorClass {
    /// Writes `3E0 - 2E1 - E2 ...`, skipping zero terms.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coordinates().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            let sign = match (first, neg) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            };
            let coeff = if abs.is_one() { String::new() } else { abs.to_string() };
            write!(f, "{sign}{coeff}E{i}")?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// `K = -3E*_0 + Σ_u E*_u`.
pub fn canonical_class(config: &Configuration) -> DivisorClass {
    DivisorClass { line: rational(-3), exc: vec![Rational::one(); config.len()] }
}

/// Strict transform `Ẽ_u = E*_u - Σ_{q → q_u} E*_q`.
pub fn strict_transform_of_exceptional(config: &Configuration, u: usize) -> Result<DivisorClass> {
    let s = config.len();
    let mut d = DivisorClass::total(s, u)?;
    for q in config.proximate_points(u) {
        d.exc[q - 1] -= Rational::one();
    }
    Ok(d)
}

/// The exceptional part `Σ_v mult_{q_v}(φ_u) E*_v` of the germ `φ_u`.
pub fn germ_exceptional_part(config: &Configuration, u: usize) -> Result<DivisorClass> {
    let row = config.multiplicity_row(u)?;
    Ok(DivisorClass::from_ints(0, row))
}

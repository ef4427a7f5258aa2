use std::fmt::Debug;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Coefficient ring of the Grassmann engine.
pub trait Coeff: Clone + PartialEq + Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn ratio(num: i64, den: i64) -> Self;
    fn imag_unit() -> Self;
    fn to_complex(&self) -> Complex64;

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    fn from_int(n: i64) -> Self {
        Self::ratio(n, 1)
    }

    fn sign(s: i32) -> Self {
        if s < 0 {
            Self::one().neg()
        } else {
            Self::one()
        }
    }

    fn pow(&self, k: usize) -> Self {
        (0..k).fold(Self::one(), |acc, _| acc.mul(self))
    }
}

/// Exact element of ℚ(i).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GaussQ {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussQ {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussQ { re, im }
    }

    fn rat(num: i64, den: i64) -> BigRational {
        BigRational::new(num.into(), den.into())
    }

    pub fn from_parts(re: (i64, i64), im: (i64, i64)) -> Self {
        GaussQ { re: Self::rat(re.0, re.1), im: Self::rat(im.0, im.1) }
    }
}

impl Coeff for GaussQ {
    fn zero() -> Self {
        GaussQ { re: BigRational::zero(), im: BigRational::zero() }
    }

    fn one() -> Self {
        GaussQ { re: BigRational::one(), im: BigRational::zero() }
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn add(&self, o: &Self) -> Self {
        GaussQ { re: &self.re + &o.re, im: &self.im + &o.im }
    }

    fn mul(&self, o: &Self) -> Self {
        GaussQ {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    fn neg(&self) -> Self {
        GaussQ { re: -&self.re, im: -&self.im }
    }

    fn ratio(num: i64, den: i64) -> Self {
        GaussQ { re: Self::rat(num, den), im: BigRational::zero() }
    }

    fn imag_unit() -> Self {
        GaussQ { re: BigRational::zero(), im: BigRational::one() }
    }

    fn to_complex(&self) -> Complex64 {
        Complex64::new(self.re.to_f64().unwrap_or(f64::NAN), self.im.to_f64().unwrap_or(f64::NAN))
    }
}

impl Coeff for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }

    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }

    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }

    fn add(&self, o: &Self) -> Self {
        self + o
    }

    fn mul(&self, o: &Self) -> Self {
        self * o
    }

    fn neg(&self) -> Self {
        -self
    }

    fn ratio(num: i64, den: i64) -> Self {
        Complex64::new(num as f64 / den as f64, 0.0)
    }

    fn imag_unit() -> Self {
        Complex64::new(0.0, 1.0)
    }

    fn to_complex(&self) -> Complex64 {
        *self
    }
}

//! Rational functions as quotients of multivariate polynomials.

use alloc::string::String;
use alloc::vec::Vec;

use num_traits::One;

use super::poly::MultiPoly;
use super::LoopError;
use crate::rat::Rat;

/// Quotient of two polynomials with a nonzero denominator, kept in a cheap
/// canonical form: the common monomial content of numerator and denominator
/// is cancelled and the denominator is scaled so its lex-leading coefficient
/// is 1. Full gcd reduction is not attempted; equality is decided by cross
/// multiplication, so unreduced representatives still compare equal.
#[derive(Debug, Clone)]
pub struct RatFunc {
    num: MultiPoly,
    den: MultiPoly,
}

impl PartialEq for RatFunc {
    fn eq(&self, other: &Self) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}

impl Eq for RatFunc {}

impl RatFunc {
    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<Self, LoopError> {
        if den.is_zero() {
            return Err(LoopError::ZeroDenominator);
        }
        Ok(Self { num, den }.normalized())
    }

    fn raw(num: MultiPoly, den: MultiPoly) -> Self {
        debug_assert!(!den.is_zero());
        Self { num, den }.normalized()
    }

    fn normalized(mut self) -> Self {
        if self.num.is_zero() {
            self.den = MultiPoly::one(self.den.nvars());
            return self;
        }
        let min_num = self.num.min_exponents().expect("nonzero numerator");
        let min_den = self.den.min_exponents().expect("nonzero denominator");
        let common: Vec<u32> = min_num
            .iter()
            .zip(&min_den)
            .map(|(a, b)| (*a).min(*b))
            .collect();
        if common.iter().any(|&e| e > 0) {
            self.num = self.num.shift_down(&common);
            self.den = self.den.shift_down(&common);
        }
        let lead = self.den.leading().expect("nonzero denominator").1.clone();
        if !lead.is_one() {
            let inv = lead.recip();
            self.num = self.num.scale(&inv);
            self.den = self.den.scale(&inv);
        }
        self
    }

    pub fn zero(nvars: usize) -> Self {
        Self {
            num: MultiPoly::zero(nvars),
            den: MultiPoly::one(nvars),
        }
    }

    pub fn one(nvars: usize) -> Self {
        Self {
            num: MultiPoly::one(nvars),
            den: MultiPoly::one(nvars),
        }
    }

    pub fn constant(nvars: usize, c: Rat) -> Self {
        Self {
            num: MultiPoly::constant(nvars, c),
            den: MultiPoly::one(nvars),
        }
    }

    pub fn var(nvars: usize, index: usize) -> Self {
        Self {
            num: MultiPoly::var(nvars, index),
            den: MultiPoly::one(nvars),
        }
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        let nvars = p.nvars();
        Self {
            num: p,
            den: MultiPoly::one(nvars),
        }
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn num(&self) -> &MultiPoly {
        &self.num
    }

    pub fn den(&self) -> &MultiPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::raw(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::raw(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn scale(&self, r: &Rat) -> Self {
        Self::raw(self.num.scale(r), self.den.clone())
    }

    pub fn recip(&self) -> Result<Self, LoopError> {
        if self.num.is_zero() {
            return Err(LoopError::ZeroDenominator);
        }
        Ok(Self::raw(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &Self) -> Result<Self, LoopError> {
        Ok(self.mul(&other.recip()?))
    }

    /// The denominator when it is not a constant; used to report the locus a
    /// verdict was decided over.
    pub fn nonconstant_den(&self) -> Option<&MultiPoly> {
        if self.den.as_constant().is_some() {
            None
        } else {
            Some(&self.den)
        }
    }

    pub fn render<S: AsRef<str>>(&self, names: &[S]) -> String {
        if let Some(c) = self.den.as_constant() {
            debug_assert!(c.is_one());
            return self.num.render(names);
        }
        let num = self.num.render(names);
        let den = self.den.render(names);
        let mut out = String::new();
        if self.num.terms().count() > 1 {
            out.push('(');
            out.push_str(&num);
            out.push(')');
        } else {
            out.push_str(&num);
        }
        out.push('/');
        if self.den.terms().count() > 1 {
            out.push('(');
            out.push_str(&den);
            out.push(')');
        } else {
            out.push_str(&den);
        }
        out
    }
}

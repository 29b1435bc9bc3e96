//! Truncated Laurent series in `t` over the rational-function field.

use alloc::vec;
use alloc::vec::Vec;

use super::ratfunc::RatFunc;
use super::LoopError;

/// Laurent series known up to (excluding) `precision`: coefficients are
/// stored for every power in `valuation..precision`, anything at or above
/// `precision` is unknown. The first stored coefficient is nonzero; a series
/// that is zero to its precision is stored with an empty coefficient list
/// and `valuation == precision`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentSeries {
    nvars: usize,
    valuation: i64,
    coeffs: Vec<RatFunc>,
    precision: i64,
}

impl LaurentSeries {
    pub fn zero(nvars: usize, precision: i64) -> Self {
        Self {
            nvars,
            valuation: precision,
            coeffs: Vec::new(),
            precision,
        }
    }

    pub fn one(nvars: usize, precision: i64) -> Self {
        Self::from_terms(nvars, &[(0, RatFunc::one(nvars))], precision)
    }

    /// Build from exact `(power, coefficient)` terms; anything at or above
    /// `precision` is dropped into the unknown region.
    pub fn from_terms(nvars: usize, terms: &[(i64, RatFunc)], precision: i64) -> Self {
        let mut kept: Vec<(i64, RatFunc)> = terms
            .iter()
            .filter(|(k, c)| *k < precision && !c.is_zero())
            .cloned()
            .collect();
        kept.sort_by_key(|(k, _)| *k);
        match kept.first() {
            None => Self::zero(nvars, precision),
            Some((v, _)) => {
                let valuation = *v;
                let mut coeffs = vec![RatFunc::zero(nvars); (precision - valuation) as usize];
                for (k, c) in kept {
                    let slot = &mut coeffs[(k - valuation) as usize];
                    *slot = slot.add(&c);
                }
                Self {
                    nvars,
                    valuation,
                    coeffs,
                    precision,
                }
                .normalized()
            }
        }
    }

    fn normalized(mut self) -> Self {
        let lead = self.coeffs.iter().position(|c| !c.is_zero());
        match lead {
            None => Self::zero(self.nvars, self.precision),
            Some(0) => self,
            Some(k) => {
                self.coeffs.drain(..k);
                self.valuation += k as i64;
                self
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn precision(&self) -> i64 {
        self.precision
    }

    pub fn valuation(&self) -> i64 {
        self.valuation
    }

    pub fn is_zero_to_precision(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `t^k` when it is known; `None` when `k >= precision`.
    pub fn known_coeff(&self, k: i64) -> Option<RatFunc> {
        if k >= self.precision {
            return None;
        }
        if k < self.valuation {
            return Some(RatFunc::zero(self.nvars));
        }
        Some(self.coeffs[(k - self.valuation) as usize].clone())
    }

    /// Stored `(power, coefficient)` pairs with nonzero coefficients.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &RatFunc)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (self.valuation + i as i64, c))
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.nvars, other.nvars);
        let precision = self.precision.min(other.precision);
        let lo = self.valuation.min(other.valuation);
        let mut terms = Vec::new();
        for k in lo..precision {
            let a = self
                .known_coeff(k)
                .unwrap_or_else(|| RatFunc::zero(self.nvars));
            let b = other
                .known_coeff(k)
                .unwrap_or_else(|| RatFunc::zero(self.nvars));
            terms.push((k, a.add(&b)));
        }
        Self::from_terms(self.nvars, &terms, precision)
    }

    pub fn neg(&self) -> Self {
        Self {
            nvars: self.nvars,
            valuation: self.valuation,
            coeffs: self.coeffs.iter().map(RatFunc::neg).collect(),
            precision: self.precision,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        debug_assert_eq!(self.nvars, other.nvars);
        // a product coefficient at power k is known only when every
        // decomposition k = i + j has both factors known
        let precision = (self.precision + other.valuation).min(other.precision + self.valuation);
        if self.is_zero_to_precision() || other.is_zero_to_precision() {
            return Self::zero(self.nvars, precision);
        }
        let valuation = self.valuation + other.valuation;
        let mut terms = Vec::new();
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                let k = valuation + (i + j) as i64;
                if k >= precision {
                    continue;
                }
                terms.push((k, a.mul(b)));
            }
        }
        Self::from_terms(self.nvars, &terms, precision)
    }

    pub fn scale(&self, r: &RatFunc) -> Self {
        if r.is_zero() {
            return Self::zero(self.nvars, self.precision);
        }
        Self {
            nvars: self.nvars,
            valuation: self.valuation,
            coeffs: self.coeffs.iter().map(|c| c.mul(r)).collect(),
            precision: self.precision,
        }
        .normalized()
    }

    /// Multiplicative inverse of a series whose leading coefficient is
    /// nonzero, by the usual coefficient recurrence. The result is known up
    /// to `precision - 2*valuation`.
    pub fn inverse(&self) -> Result<Self, LoopError> {
        if self.is_zero_to_precision() {
            return Err(LoopError::ZeroSeries);
        }
        let unit_len = self.coeffs.len();
        let lead_inv = self.coeffs[0].recip()?;
        let mut inv_coeffs: Vec<RatFunc> = Vec::with_capacity(unit_len);
        inv_coeffs.push(lead_inv.clone());
        for k in 1..unit_len {
            let mut acc = RatFunc::zero(self.nvars);
            for i in 1..=k {
                acc = acc.add(&self.coeffs[i].mul(&inv_coeffs[k - i]));
            }
            inv_coeffs.push(acc.neg().mul(&lead_inv));
        }
        let terms: Vec<(i64, RatFunc)> = inv_coeffs
            .into_iter()
            .enumerate()
            .map(|(i, c)| (-self.valuation + i as i64, c))
            .collect();
        Ok(Self::from_terms(
            self.nvars,
            &terms,
            self.precision - 2 * self.valuation,
        ))
    }

    /// Equality of all coefficients on the common known range.
    pub fn eq_to_precision(&self, other: &Self) -> bool {
        self.sub(other).is_zero_to_precision()
    }
}

use alloc::collections::BTreeMap;
use alloc::string::String;
use core::fmt::Write as _;
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::params::ParamSpace;
use crate::rat::{mod_one, Rat};

/// Affine-linear form in the model parameters with exact rational
/// coefficients. Zero coefficients are never stored, so equality is
/// structural on the canonical representation.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LinearForm {
    coeffs: BTreeMap<usize, Rat>,
    constant: Rat,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EvalError {
    #[error("assignment does not cover parameter #{index}")]
    MissingParameter { index: usize },
    #[error("unknown parameter `{name}`")]
    UnknownParameter { name: String },
}

impl LinearForm {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rat) -> Self {
        Self {
            coeffs: BTreeMap::new(),
            constant: c,
        }
    }

    /// The form consisting of the single parameter `index`.
    pub fn param(index: usize) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(index, Rat::one());
        Self {
            coeffs,
            constant: Rat::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty() && self.constant.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, index: usize) -> Rat {
        self.coeffs.get(&index).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (usize, &Rat)> {
        self.coeffs.iter().map(|(i, c)| (*i, c))
    }

    pub fn constant_term(&self) -> &Rat {
        &self.constant
    }

    /// Largest parameter index with a nonzero coefficient.
    pub fn max_param(&self) -> Option<usize> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn set_coeff(&mut self, index: usize, value: Rat) {
        if value.is_zero() {
            self.coeffs.remove(&index);
        } else {
            self.coeffs.insert(index, value);
        }
    }

    pub fn set_constant(&mut self, value: Rat) {
        self.constant = value;
    }

    fn add_scaled(&mut self, other: &LinearForm, factor: &Rat) {
        if factor.is_zero() {
            return;
        }
        for (i, c) in &other.coeffs {
            let v = self.coeff(*i) + c * factor;
            self.set_coeff(*i, v);
        }
        self.constant += &other.constant * factor;
    }

    pub fn scale(&self, factor: &Rat) -> LinearForm {
        let mut out = LinearForm::zero();
        out.add_scaled(self, factor);
        out
    }

    /// Replace every parameter covered by `partial` with its value; the
    /// remaining parameters stay symbolic.
    pub fn substitute(&self, partial: &Assignment) -> LinearForm {
        let mut out = LinearForm::constant(self.constant.clone());
        for (i, c) in &self.coeffs {
            match partial.get(*i) {
                Some(v) => out.constant += c * v,
                None => out.set_coeff(*i, c.clone()),
            }
        }
        out
    }

    /// Canonical representative of the orbit of the form under negation and
    /// integer shifts: flip the sign so the first nonzero coefficient in
    /// parameter order is positive, then reduce the constant into `[0, 1)`.
    /// Idempotent, and non-integrality of evaluations is preserved.
    pub fn normalized(&self) -> LinearForm {
        let mut out = self.clone();
        if let Some((_, first)) = out.coeffs.iter().next() {
            if first.is_negative() {
                out = -&out;
            }
        }
        out.constant = mod_one(&out.constant);
        out
    }

    pub fn evaluate(&self, assignment: &Assignment) -> Result<Rat, EvalError> {
        let mut acc = self.constant.clone();
        for (i, c) in &self.coeffs {
            let v = assignment
                .get(*i)
                .ok_or(EvalError::MissingParameter { index: *i })?;
            acc += c * v;
        }
        Ok(acc)
    }

    pub fn is_integral_at(&self, assignment: &Assignment) -> Result<bool, EvalError> {
        Ok(self.evaluate(assignment)?.is_integer())
    }

    /// Human-readable rendering in declaration order, e.g.
    /// `mu_-1 + 2*mu_0 + Lambda + 3*kappa` or `mu_0 - 1/2`.
    pub fn render(&self, params: &ParamSpace) -> String {
        let mut out = String::new();
        for (i, c) in &self.coeffs {
            let mag = c.abs();
            if out.is_empty() {
                if c.is_negative() {
                    out.push('-');
                }
            } else if c.is_negative() {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            if !mag.is_one() {
                if mag.is_integer() {
                    let _ = write!(out, "{mag}*");
                } else {
                    let _ = write!(out, "({mag})*");
                }
            }
            out.push_str(params.name(*i));
        }
        if out.is_empty() {
            let _ = write!(out, "{}", self.constant);
        } else if !self.constant.is_zero() {
            let mag = self.constant.abs();
            if self.constant.is_negative() {
                let _ = write!(out, " - {mag}");
            } else {
                let _ = write!(out, " + {mag}");
            }
        }
        out
    }
}

impl Add<&LinearForm> for &LinearForm {
    type Output = LinearForm;
    fn add(self, rhs: &LinearForm) -> LinearForm {
        let mut out = self.clone();
        out.add_scaled(rhs, &Rat::one());
        out
    }
}

impl Sub<&LinearForm> for &LinearForm {
    type Output = LinearForm;
    fn sub(self, rhs: &LinearForm) -> LinearForm {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Rat::one());
        out
    }
}

impl Neg for &LinearForm {
    type Output = LinearForm;
    fn neg(self) -> LinearForm {
        self.scale(&-Rat::one())
    }
}

impl Mul<&Rat> for &LinearForm {
    type Output = LinearForm;
    fn mul(self, rhs: &Rat) -> LinearForm {
        self.scale(rhs)
    }
}

/// Exact rational values for a subset of the parameters.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Assignment {
    values: BTreeMap<usize, Rat>,
}

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, index: usize, value: Rat) {
        self.values.insert(index, value);
    }

    pub fn with(mut self, index: usize, value: Rat) -> Self {
        self.set(index, value);
        self
    }

    pub fn get(&self, index: usize) -> Option<&Rat> {
        self.values.get(&index)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Rat)> {
        self.values.iter().map(|(i, v)| (*i, v))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Build an assignment from `(name, value)` pairs resolved against a
    /// parameter space.
    pub fn from_names<'a, I>(params: &ParamSpace, pairs: I) -> Result<Self, EvalError>
    where
        I: IntoIterator<Item = (&'a str, Rat)>,
    {
        let mut out = Self::new();
        for (name, value) in pairs {
            let index = params
                .index(name)
                .ok_or_else(|| EvalError::UnknownParameter {
                    name: String::from(name),
                })?;
            out.set(index, value);
        }
        Ok(out)
    }

    /// Assign every parameter in order from a slice of values.
    pub fn from_values(values: &[Rat]) -> Self {
        let mut out = Self::new();
        for (i, v) in values.iter().enumerate() {
            out.set(i, v.clone());
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};

    fn space() -> ParamSpace {
        ParamSpace::new(["mu_-1", "mu_0", "Lambda", "kappa"]).unwrap()
    }

    fn twist_sum_form() -> LinearForm {
        // mu_-1 + 2*mu_0 + Lambda + 3*kappa
        let mut f = LinearForm::param(0);
        f.set_coeff(1, rat_int(2));
        f.set_coeff(2, rat_int(1));
        f.set_coeff(3, rat_int(3));
        f
    }

    #[test]
    fn normalization_flips_sign_and_reduces_constant() {
        let f = -&twist_sum_form();
        assert_eq!(f.normalized(), twist_sum_form());

        let mut g = LinearForm::param(1);
        g.set_constant(rat_int(5));
        assert_eq!(g.normalized(), LinearForm::param(1));
    }

    #[test]
    fn normalization_is_idempotent() {
        let mut f = twist_sum_form();
        f.set_constant(rat(-7, 3));
        let n = f.normalized();
        assert_eq!(n.normalized(), n);
    }

    #[test]
    fn evaluation_matches_hand_substitution() {
        let params = space();
        // mu_0 + Lambda + kappa at (Lambda=1/2, kappa=0, mu_0=1/2) = 1
        let mut f = LinearForm::param(1);
        f.set_coeff(2, rat_int(1));
        f.set_coeff(3, rat_int(1));
        let a = Assignment::from_names(
            &params,
            [
                ("Lambda", rat(1, 2)),
                ("kappa", rat_int(0)),
                ("mu_0", rat(1, 2)),
            ],
        )
        .unwrap();
        assert_eq!(f.evaluate(&a).unwrap(), rat_int(1));
        assert!(f.is_integral_at(&a).unwrap());

        let half = Assignment::new().with(0, rat(1, 2));
        assert_eq!(LinearForm::param(0).evaluate(&half).unwrap(), rat(1, 2));
        assert!(!LinearForm::param(0).is_integral_at(&half).unwrap());

        let a = Assignment::from_values(&[rat(1, 2), rat(1, 3), rat_int(0), rat_int(0)]);
        assert_eq!(twist_sum_form().evaluate(&a).unwrap(), rat(7, 6));
    }

    #[test]
    fn missing_parameter_is_reported() {
        let f = twist_sum_form();
        let a = Assignment::new().with(0, rat(1, 2));
        assert_eq!(
            f.evaluate(&a),
            Err(EvalError::MissingParameter { index: 1 })
        );
    }

    #[test]
    fn renders_in_declaration_order() {
        let params = space();
        assert_eq!(
            twist_sum_form().render(&params),
            "mu_-1 + 2*mu_0 + Lambda + 3*kappa"
        );
        let mut f = -&LinearForm::param(1);
        f.set_constant(rat(-1, 2));
        assert_eq!(f.render(&params), "-mu_0 - 1/2");
        assert_eq!(LinearForm::zero().render(&params), "0");
        let mut g = LinearForm::param(0).scale(&rat(3, 2));
        g.set_constant(rat_int(2));
        assert_eq!(g.render(&params), "(3/2)*mu_-1 + 2");
    }

    #[test]
    fn substitute_moves_values_into_the_constant() {
        let f = twist_sum_form();
        let partial = Assignment::new().with(2, rat_int(1)).with(3, rat_int(-2));
        let g = f.substitute(&partial);
        // mu_-1 + 2*mu_0 + 1 - 6
        assert_eq!(g.coeff(0), rat_int(1));
        assert_eq!(g.coeff(1), rat_int(2));
        assert_eq!(g.coeff(2), rat_int(0));
        assert_eq!(*g.constant_term(), rat_int(-5));
    }
}

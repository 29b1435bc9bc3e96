use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write as _;

use num_traits::{One, Signed, Zero};

use super::linear::LinearForm;
use super::matrix::{mat_mul, matrix_det, unimodular_inverse};
use crate::rat::{int, rat_pow, Int, Rat};

/// A monomial morphism between split tori. Coordinate `j` of the image is
/// `c_j * prod_i z_i^(E[j][i])` with every `c_j` a nonzero rational and `E`
/// an integer matrix with `target_dim` rows and `source_dim` columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialMap {
    source_dim: usize,
    coeffs: Vec<Rat>,
    exponents: Vec<Vec<Int>>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MapError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("coefficient {index} is zero")]
    ZeroCoefficient { index: usize },
    #[error("exponent matrix is not unimodular (det = {det})")]
    NonInvertible { det: Int },
    #[error("inverse coefficients have no solution in the nonzero rationals")]
    CoefficientObstruction,
}

impl MonomialMap {
    pub fn new(
        source_dim: usize,
        coeffs: Vec<Rat>,
        exponents: Vec<Vec<Int>>,
    ) -> Result<Self, MapError> {
        if coeffs.len() != exponents.len() {
            return Err(MapError::DimensionMismatch {
                expected: coeffs.len(),
                got: exponents.len(),
            });
        }
        for (index, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                return Err(MapError::ZeroCoefficient { index });
            }
        }
        for row in &exponents {
            if row.len() != source_dim {
                return Err(MapError::DimensionMismatch {
                    expected: source_dim,
                    got: row.len(),
                });
            }
        }
        Ok(Self {
            source_dim,
            coeffs,
            exponents,
        })
    }

    /// Map with all coefficients 1 and the given exponent matrix; the source
    /// dimension is the row length.
    pub fn unit(exponents: Vec<Vec<Int>>) -> Result<Self, MapError> {
        let source_dim = exponents.first().map_or(0, Vec::len);
        let coeffs = alloc::vec![Rat::one(); exponents.len()];
        Self::new(source_dim, coeffs, exponents)
    }

    pub fn unit_from_i64(rows: &[&[i64]]) -> Self {
        let exponents = rows
            .iter()
            .map(|r| r.iter().map(|&e| int(e)).collect())
            .collect();
        Self::unit(exponents).expect("rectangular exponent rows")
    }

    pub fn identity(n: usize) -> Self {
        Self::unit(super::matrix::identity_matrix(n)).expect("identity is well formed")
    }

    pub fn source_dim(&self) -> usize {
        self.source_dim
    }

    pub fn target_dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn exponents(&self) -> &[Vec<Int>] {
        &self.exponents
    }

    pub fn is_identity(&self) -> bool {
        self == &Self::identity(self.source_dim)
    }

    /// Determinant of the exponent matrix (square maps only).
    pub fn det(&self) -> Result<Int, MapError> {
        if self.target_dim() != self.source_dim {
            return Err(MapError::DimensionMismatch {
                expected: self.source_dim,
                got: self.target_dim(),
            });
        }
        Ok(matrix_det(&self.exponents))
    }

    pub fn is_unimodular(&self) -> bool {
        self.det().map(|d| d.abs().is_one()).unwrap_or(false)
    }

    /// `self . inner` (apply `inner` first). Exponent matrices multiply and
    /// the inner coefficients are pushed through the outer exponents.
    pub fn compose(&self, inner: &MonomialMap) -> Result<MonomialMap, MapError> {
        if inner.target_dim() != self.source_dim {
            return Err(MapError::DimensionMismatch {
                expected: self.source_dim,
                got: inner.target_dim(),
            });
        }
        let exponents = mat_mul(&self.exponents, &inner.exponents);
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| {
                let mut acc = c.clone();
                for (i, ci) in inner.coeffs.iter().enumerate() {
                    acc *= rat_pow(ci, &self.exponents[j][i]);
                }
                acc
            })
            .collect();
        MonomialMap::new(inner.source_dim, coeffs, exponents)
    }

    /// Two-sided inverse; requires a square unimodular exponent matrix.
    pub fn inverse(&self) -> Result<MonomialMap, MapError> {
        if self.target_dim() != self.source_dim {
            return Err(MapError::DimensionMismatch {
                expected: self.source_dim,
                got: self.target_dim(),
            });
        }
        let inv = unimodular_inverse(&self.exponents).ok_or_else(|| MapError::NonInvertible {
            det: matrix_det(&self.exponents),
        })?;
        let coeffs = (0..self.source_dim)
            .map(|j| {
                let mut acc = Rat::one();
                for (i, c) in self.coeffs.iter().enumerate() {
                    acc *= rat_pow(c, &-&inv[j][i]);
                }
                acc
            })
            .collect();
        MonomialMap::new(self.source_dim, coeffs, inv)
    }

    /// Pull back rank-one exponent forms along this map: the result is the
    /// transpose exponent matrix applied to `forms`. Coefficients are unit
    /// constants for monodromy purposes and are ignored.
    pub fn pullback(&self, forms: &[LinearForm]) -> Result<Vec<LinearForm>, MapError> {
        if forms.len() != self.target_dim() {
            return Err(MapError::DimensionMismatch {
                expected: self.target_dim(),
                got: forms.len(),
            });
        }
        Ok((0..self.source_dim)
            .map(|i| {
                let mut acc = LinearForm::zero();
                for (j, f) in forms.iter().enumerate() {
                    let factor = Rat::from_integer(self.exponents[j][i].clone());
                    acc = &acc + &f.scale(&factor);
                }
                acc
            })
            .collect())
    }

    /// Render output coordinate `j` as a Laurent monomial in the given
    /// source-coordinate names, e.g. `y/x^2` or `1/(x^2*y)`.
    pub fn image_string<S: AsRef<str>>(&self, j: usize, names: &[S]) -> String {
        monomial_string(&self.coeffs[j], &self.exponents[j], names)
    }

    /// Full display, e.g. `(x,y,a,v) -> (1/x, y/x^2, a/x, v/x^3)`.
    pub fn render<S: AsRef<str>>(&self, names: &[S]) -> String {
        let mut out = String::from("(");
        for (i, n) in names.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(n.as_ref());
        }
        out.push_str(") -> (");
        for j in 0..self.target_dim() {
            if j > 0 {
                out.push_str(", ");
            }
            out.push_str(&self.image_string(j, names));
        }
        out.push(')');
        out
    }
}

/// `coeff * prod names[i]^exps[i]` as a human-readable fraction.
pub(crate) fn monomial_string<S: AsRef<str>>(coeff: &Rat, exps: &[Int], names: &[S]) -> String {
    let mut num = String::new();
    let mut den_parts: Vec<String> = Vec::new();
    let mag = coeff.abs();
    if !mag.is_one() {
        if mag.is_integer() {
            let _ = write!(num, "{mag}");
        } else {
            let _ = write!(num, "({mag})");
        }
    }
    for (i, e) in exps.iter().enumerate() {
        if e.is_zero() {
            continue;
        }
        let name = names[i].as_ref();
        let mut part = String::from(name);
        let a = e.abs();
        if !a.is_one() {
            let _ = write!(part, "^{a}");
        }
        if e.is_positive() {
            if !num.is_empty() {
                num.push('*');
            }
            num.push_str(&part);
        } else {
            den_parts.push(part);
        }
    }
    if num.is_empty() {
        num.push('1');
    }
    let mut out = String::new();
    if coeff.is_negative() {
        out.push('-');
    }
    out.push_str(&num);
    match den_parts.len() {
        0 => {}
        1 => {
            out.push('/');
            out.push_str(&den_parts[0]);
        }
        _ => {
            out.push_str("/(");
            out.push_str(&den_parts.join("*"));
            out.push(')');
        }
    }
    out
}

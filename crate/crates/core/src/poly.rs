//! Dense integer-coefficient polynomials in one variable `q`.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Polynomial with integer coefficients, `coeffs[d]` = coefficient of `q^d`.
/// Trailing zeros are trimmed; the zero polynomial has an empty vector.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn zero() -> IntPoly {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> IntPoly {
        IntPoly::monomial(0)
    }

    /// `q^d`.
    pub fn monomial(d: usize) -> IntPoly {
        let mut coeffs = alloc::vec![BigInt::zero(); d + 1];
        coeffs[d] = BigInt::one();
        IntPoly { coeffs }
    }

    pub fn from_coeffs(coeffs: Vec<BigInt>) -> IntPoly {
        let mut p = IntPoly { coeffs };
        p.trim();
        p
    }

    pub fn from_i64(coeffs: &[i64]) -> IntPoly {
        IntPoly::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, d: usize) -> BigInt {
        self.coeffs.get(d).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn add_assign(&mut self, other: &IntPoly) {
        if self.coeffs.len() < other.coeffs.len() {
            self.coeffs.resize(other.coeffs.len(), BigInt::zero());
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            self.coeffs[i] += c;
        }
        self.trim();
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        let mut p = self.clone();
        p.add_assign(other);
        p
    }

    /// Add `q^d`.
    pub fn add_monomial(&mut self, d: usize) {
        if self.coeffs.len() <= d {
            self.coeffs.resize(d + 1, BigInt::zero());
        }
        self.coeffs[d] += BigInt::one();
    }

    pub fn eval_int(&self, q: i64) -> BigInt {
        let q = BigInt::from(q);
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * &q + c;
        }
        acc
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (d, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut term = String::new();
            if d == 0 {
                term = alloc::format!("{c}");
            } else {
                if !c.is_one() {
                    term.push_str(&alloc::format!("{c}*"));
                }
                if d == 1 {
                    term.push('q');
                } else {
                    term.push_str(&alloc::format!("q^{d}"));
                }
            }
            if first {
                write!(f, "{term}")?;
                first = false;
            } else {
                write!(f, " + {term}")?;
            }
        }
        Ok(())
    }
}

//! Homogeneous polynomials stored by exponent vector.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::tensor::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct HomogeneousPolynomial<T = f64> {
    degree: usize,
    nvars: usize,
    terms: BTreeMap<Vec<u32>, T>,
}

impl<T: Scalar> HomogeneousPolynomial<T> {
    pub fn zero(degree: usize, nvars: usize) -> Self {
        HomogeneousPolynomial {
            degree,
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    fn check(&self, alpha: &[u32]) -> Result<()> {
        if alpha.len() != self.nvars {
            return Err(Error::DimensionMismatch(format!(
                "exponent vector of length {} for {} variables",
                alpha.len(),
                self.nvars
            )));
        }
        let d: u32 = alpha.iter().sum();
        if d as usize != self.degree {
            return Err(Error::InvalidParameter(format!(
                "monomial of degree {d} in a form of degree {}",
                self.degree
            )));
        }
        Ok(())
    }

    /// Adds `c * x^alpha` to the polynomial.
    pub fn add_term(&mut self, alpha: &[u32], c: T) -> Result<()> {
        self.check(alpha)?;
        if c.is_zero() {
            return Ok(());
        }
        let entry = self.terms.entry(alpha.to_vec()).or_insert_with(T::zero);
        *entry = entry.clone() + c;
        if entry.is_zero() {
            self.terms.remove(alpha);
        }
        Ok(())
    }

    pub fn with_term(mut self, alpha: &[u32], c: T) -> Result<Self> {
        self.add_term(alpha, c)?;
        Ok(self)
    }

    pub fn coeff(&self, alpha: &[u32]) -> T {
        self.terms.get(alpha).cloned().unwrap_or_else(T::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &T)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn evaluate(&self, x: &[T]) -> T {
        let mut acc = T::zero();
        for (alpha, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &a) in x.iter().zip(alpha) {
                for _ in 0..a {
                    t = t * xi.clone();
                }
            }
            acc = acc + t;
        }
        acc
    }

    pub fn scale(&self, s: &T) -> Self {
        let mut out = Self::zero(self.degree, self.nvars);
        for (a, c) in &self.terms {
            let v = c.clone() * s.clone();
            if !v.is_zero() {
                out.terms.insert(a.clone(), v);
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if other.degree != self.degree || other.nvars != self.nvars {
            return Err(Error::DimensionMismatch("adding forms of different shape".into()));
        }
        let mut out = self.clone();
        for (a, c) in &other.terms {
            out.add_term(a, c.clone())?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&(-T::one())))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if other.nvars != self.nvars {
            return Err(Error::DimensionMismatch("multiplying forms in different variables".into()));
        }
        let mut out = Self::zero(self.degree + other.degree, self.nvars);
        for (a, c) in &self.terms {
            for (b, d) in &other.terms {
                let ab: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                out.add_term(&ab, c.clone() * d.clone())?;
            }
        }
        Ok(out)
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> HomogeneousPolynomial<U> {
        let mut out = HomogeneousPolynomial::zero(self.degree, self.nvars);
        for (a, c) in &self.terms {
            let v = f(c);
            if !v.is_zero() {
                out.terms.insert(a.clone(), v);
            }
        }
        out
    }

    pub fn to_f64(&self) -> HomogeneousPolynomial<f64> {
        self.map(|c| c.to_f64())
    }

    /// Largest absolute coefficient.
    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.to_f64().abs()).fold(0.0, f64::max)
    }

    /// Coefficient of `x_i^degree`.
    pub fn diagonal_coeff(&self, i: usize) -> T {
        let mut a = vec![0u32; self.nvars];
        a[i] = self.degree as u32;
        self.coeff(&a)
    }

    /// Restriction to the variables in `vars` (in that order), keeping only
    /// monomials supported inside `vars`.
    pub fn restrict(&self, vars: &[usize]) -> Self {
        let mut out = Self::zero(self.degree, vars.len());
        for (a, c) in &self.terms {
            let inside: u32 = vars.iter().map(|&v| a[v]).sum();
            if inside as usize == self.degree {
                let b: Vec<u32> = vars.iter().map(|&v| a[v]).collect();
                out.terms.insert(b, c.clone());
            }
        }
        out
    }

    /// Sum of `c * x_i^degree` over all variables.
    pub fn power_sum(degree: usize, nvars: usize, c: T) -> Self {
        let mut out = Self::zero(degree, nvars);
        for i in 0..nvars {
            let mut a = vec![0u32; nvars];
            a[i] = degree as u32;
            out.add_term(&a, c.clone()).expect("valid monomial");
        }
        out
    }
}

impl HomogeneousPolynomial<f64> {
    /// Human-readable form, e.g. `x1^4 + 2*x1^2*x2^2`.
    pub fn pretty(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, (a, c)) in self.terms.iter().rev().enumerate() {
            let mono: Vec<String> = a
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { format!("x{}", i + 1) } else { format!("x{}^{}", i + 1, e) })
                .collect();
            let (sign, mag) = if *c < 0.0 { ("-", -c) } else { ("+", *c) };
            if k == 0 {
                if sign == "-" {
                    s.push('-');
                }
            } else {
                s.push_str(&format!(" {sign} "));
            }
            if (mag - 1.0).abs() > 0.0 || mono.is_empty() {
                s.push_str(&format!("{mag}"));
                if !mono.is_empty() {
                    s.push('*');
                }
            }
            s.push_str(&mono.join("*"));
        }
        s
    }
}

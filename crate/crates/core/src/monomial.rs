//! Dense bivariate polynomials in the power basis.
//!
//! Coefficients of `x^j y^k`, `j + k <= d`, are stored in the order
//! `1, x, ..., x^d, y, xy, ..., x^{d-1} y, ..., y^d`, i.e. blocks of
//! increasing `k`, each with increasing `j`.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

/// `dim P_d = (d+1)(d+2)/2`.
pub fn dim(d: usize) -> usize {
    (d + 1) * (d + 2) / 2
}

/// Position of `x^j y^k` in the coefficient vector of degree `d`.
pub fn index(d: usize, j: usize, k: usize) -> usize {
    debug_assert!(j + k <= d);
    k * (d + 1) - k * k.saturating_sub(1) / 2 + j
}

/// Iterates `(j, k)` pairs in storage order.
pub fn exponents(d: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..=d).flat_map(move |k| (0..=d - k).map(move |j| (j, k)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonomialPoly {
    degree: usize,
    coeffs: Vec<f64>,
}

impl MonomialPoly {
    pub fn zeros(degree: usize) -> Self {
        MonomialPoly {
            degree,
            coeffs: vec![0.0; dim(degree)],
        }
    }

    /// Wraps a coefficient vector in storage order. Panics on a length mismatch.
    pub fn from_coeffs(degree: usize, coeffs: Vec<f64>) -> Self {
        assert_eq!(coeffs.len(), dim(degree), "coefficient count for degree {degree}");
        MonomialPoly { degree, coeffs }
    }

    /// Reads a dense `(i, k) -> coeff of x^i y^k` table. Returns the polynomial
    /// truncated to degree `d` and the largest magnitude among dropped
    /// entries with `i + k > d`.
    pub fn from_dense(dense: &DMatrix<f64>, degree: usize) -> (Self, f64) {
        let mut p = MonomialPoly::zeros(degree);
        let mut dropped = 0.0_f64;
        for i in 0..dense.nrows() {
            for k in 0..dense.ncols() {
                let c = dense[(i, k)];
                if i + k <= degree {
                    p.coeffs[index(degree, i, k)] += c;
                } else {
                    dropped = dropped.max(c.abs());
                }
            }
        }
        (p, dropped)
    }

    /// `xpoly(x) * ypoly(y)` from ascending univariate coefficients. Panics
    /// if the product exceeds `degree`.
    pub fn from_product(degree: usize, xpoly: &[f64], ypoly: &[f64]) -> Self {
        let mut p = MonomialPoly::zeros(degree);
        for (j, xc) in xpoly.iter().enumerate() {
            for (k, yc) in ypoly.iter().enumerate() {
                if *xc == 0.0 || *yc == 0.0 {
                    continue;
                }
                assert!(j + k <= degree, "product term x^{j} y^{k} exceeds degree {degree}");
                p.coeffs[index(degree, j, k)] += xc * yc;
            }
        }
        p
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn get(&self, j: usize, k: usize) -> f64 {
        self.coeffs[index(self.degree, j, k)]
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.eval_terms(x, y, |c, xp, yp| c * xp * yp)
    }

    /// `sum |c_jk| |x|^j |y|^k`, the natural rounding scale of [`eval`](Self::eval).
    pub fn abs_eval(&self, x: f64, y: f64) -> f64 {
        self.eval_terms(x.abs(), y.abs(), |c, xp, yp| c.abs() * xp * yp)
    }

    fn eval_terms(&self, x: f64, y: f64, term: impl Fn(f64, f64, f64) -> f64) -> f64 {
        let d = self.degree;
        let mut total = 0.0;
        let mut ypow = 1.0;
        for k in 0..=d {
            let mut xpow = 1.0;
            for j in 0..=d - k {
                total += term(self.coeffs[index(d, j, k)], xpow, ypow);
                xpow *= x;
            }
            ypow *= y;
        }
        total
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0_f64, |m, c| m.max(c.abs()))
    }

    /// Scaled copy with unit largest coefficient (unchanged if identically zero).
    pub fn normalized(&self) -> Self {
        let m = self.max_abs();
        if m == 0.0 {
            return self.clone();
        }
        self.scaled(1.0 / m)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        MonomialPoly {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    pub fn sub(&self, other: &MonomialPoly) -> Self {
        assert_eq!(self.degree, other.degree);
        MonomialPoly {
            degree: self.degree,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn add_scaled(&mut self, other: &MonomialPoly, factor: f64) {
        assert_eq!(self.degree, other.degree);
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += factor * b;
        }
    }

    /// Nonzero coefficients keyed by `"j,k"`.
    pub fn to_map(&self) -> BTreeMap<String, f64> {
        exponents(self.degree)
            .zip(&self.coeffs)
            .filter(|(_, c)| **c != 0.0)
            .map(|((j, k), c)| (format!("{j},{k}"), *c))
            .collect()
    }
}

impl Serialize for MonomialPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let map = self.to_map();
        let mut m = s.serialize_map(Some(map.len()))?;
        for (k, v) in &map {
            m.serialize_entry(k, v)?;
        }
        m.end()
    }
}

/// Ascending coefficients of `prod_r (x - roots[r])`.
pub fn poly_from_roots(roots: &[f64]) -> Vec<f64> {
    let mut p = vec![1.0];
    for &r in roots {
        let mut next = vec![0.0; p.len() + 1];
        for (i, c) in p.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= r * c;
        }
        p = next;
    }
    p
}

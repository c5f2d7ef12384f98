//! Tensor-product Lagrange shape functions on the reference cube `[0,1]^d`.
//!
//! Nodes are equispaced, `k + 1` per axis, and enumerated lexicographically
//! with the last coordinate varying fastest.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Values, gradients and Hessians of every shape function at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapeEval<T: Real> {
    pub values: Vec<T>,
    /// `gradients[i][j] = ∂φ_i/∂x_j`.
    pub gradients: Vec<Vec<T>>,
    /// `hessians[i][(j, k)] = ∂²φ_i/∂x_j∂x_k`.
    pub hessians: Vec<DMatrix<T>>,
}

impl<T: Real> ShapeEval<T> {
    /// Weights `∂φ_i/∂x_j` for a fixed direction `j`.
    pub fn gradient_weights(&self, j: usize) -> Vec<T> {
        self.gradients.iter().map(|g| g[j]).collect()
    }

    /// Weights `∂²φ_i/∂x_j∂x_k`.
    pub fn hessian_weights(&self, j: usize, k: usize) -> Vec<T> {
        self.hessians.iter().map(|h| h[(j, k)]).collect()
    }

    pub fn dim(&self) -> usize {
        self.gradients.first().map_or(0, Vec::len)
    }
}

/// Anything that can provide nodal shape functions to an interpolant.
pub trait ShapeFunctions<T: Real> {
    /// Number of basis functions (and data values).
    fn count(&self) -> usize;
    /// Dimension of the reference domain.
    fn dim(&self) -> usize;
    /// Node `x^(i)` of basis function `i`.
    fn node(&self, i: usize) -> &[T];
    fn eval(&self, x: &[T]) -> ShapeEval<T>;
}

/// Tensor products of 1-D Lagrange polynomials of degree `k` on `[0,1]^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShapeSet<T: Real> {
    dim: usize,
    degree: usize,
    nodes_1d: Vec<T>,
    nodes: Vec<Vec<T>>,
    /// Per basis function, its 1-D index along each axis.
    multi: Vec<Vec<usize>>,
}

impl<T: Real> ShapeSet<T> {
    /// Builds the `(k+1)^d` tensor Lagrange basis; `d ∈ 1..=4`, `k ∈ 1..=3`.
    pub fn tensor_lagrange(dim: usize, degree: usize) -> Result<Self> {
        if !(1..=4).contains(&dim) || !(1..=3).contains(&degree) {
            return Err(Error::UnsupportedBasis { dim, degree });
        }
        let per_axis = degree + 1;
        let nodes_1d: Vec<T> = (0..per_axis).map(|a| T::from_count(a) / T::from_count(degree)).collect();
        let total = per_axis.pow(dim as u32);
        let mut multi = Vec::with_capacity(total);
        let mut nodes = Vec::with_capacity(total);
        for flat in 0..total {
            let mut idx = vec![0usize; dim];
            let mut rem = flat;
            for axis in (0..dim).rev() {
                idx[axis] = rem % per_axis;
                rem /= per_axis;
            }
            nodes.push(idx.iter().map(|&a| nodes_1d[a]).collect());
            multi.push(idx);
        }
        Ok(ShapeSet { dim, degree, nodes_1d, nodes, multi })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn nodes(&self) -> &[Vec<T>] {
        &self.nodes
    }

    /// Per-axis 1-D multi-index of basis function `i`.
    pub fn multi_index(&self, i: usize) -> &[usize] {
        &self.multi[i]
    }

    /// Value, first and second derivative of the 1-D Lagrange polynomial
    /// attached to node `a`, at `t`.
    fn lagrange_1d(&self, a: usize, t: T) -> [T; 3] {
        let nodes = &self.nodes_1d;
        let ta = nodes[a];
        let others: Vec<usize> = (0..nodes.len()).filter(|&b| b != a).collect();
        let denom = others.iter().fold(T::one(), |acc, &b| acc * (ta - nodes[b]));
        let factors: Vec<T> = others.iter().map(|&b| t - nodes[b]).collect();
        let prod_except = |skip: &[usize]| {
            factors.iter().enumerate().filter(|(i, _)| !skip.contains(i)).fold(T::one(), |acc, (_, f)| acc * *f)
        };
        let value = prod_except(&[]);
        let mut d1 = T::zero();
        let mut d2 = T::zero();
        for i in 0..factors.len() {
            d1 += prod_except(&[i]);
            for j in 0..factors.len() {
                if i != j {
                    d2 += prod_except(&[i, j]);
                }
            }
        }
        [value / denom, d1 / denom, d2 / denom]
    }
}

impl<T: Real> ShapeFunctions<T> for ShapeSet<T> {
    fn count(&self) -> usize {
        self.nodes.len()
    }

    fn dim(&self) -> usize {
        self.dim
    }

    fn node(&self, i: usize) -> &[T] {
        &self.nodes[i]
    }

    fn eval(&self, x: &[T]) -> ShapeEval<T> {
        assert_eq!(x.len(), self.dim, "query point has wrong dimension");
        let per_axis = self.degree + 1;
        // table[axis][a] = [l, l', l''] of the a-th 1-D polynomial at x[axis]
        let table: Vec<Vec<[T; 3]>> =
            x.iter().map(|&t| (0..per_axis).map(|a| self.lagrange_1d(a, t)).collect()).collect();
        let d = self.dim;
        let m = self.count();
        let mut values = Vec::with_capacity(m);
        let mut gradients = Vec::with_capacity(m);
        let mut hessians = Vec::with_capacity(m);
        for idx in &self.multi {
            let factor = |axis: usize, order: usize| table[axis][idx[axis]][order];
            let product =
                |orders: &dyn Fn(usize) -> usize| (0..d).fold(T::one(), |acc, axis| acc * factor(axis, orders(axis)));
            values.push(product(&|_| 0));
            let grad: Vec<T> = (0..d).map(|j| product(&|axis| usize::from(axis == j))).collect();
            let hess = DMatrix::from_fn(d, d, |j, k| product(&|axis| usize::from(axis == j) + usize::from(axis == k)));
            gradients.push(grad);
            hessians.push(hess);
        }
        ShapeEval { values, gradients, hessians }
    }
}

/// Shape "functions" with fixed weights and no spatial dependence; useful for
/// plain weighted means.
#[derive(Debug, Clone, PartialEq)]
pub struct FixedWeights<T: Real> {
    weights: Vec<T>,
    origin: Vec<T>,
}

impl<T: Real> FixedWeights<T> {
    pub fn new(weights: Vec<T>) -> Self {
        FixedWeights { weights, origin: vec![T::zero()] }
    }
}

impl<T: Real> ShapeFunctions<T> for FixedWeights<T> {
    fn count(&self) -> usize {
        self.weights.len()
    }

    fn dim(&self) -> usize {
        1
    }

    fn node(&self, _i: usize) -> &[T] {
        &self.origin
    }

    fn eval(&self, _x: &[T]) -> ShapeEval<T> {
        let m = self.weights.len();
        ShapeEval {
            values: self.weights.clone(),
            gradients: vec![vec![T::zero()]; m],
            hessians: vec![DMatrix::zeros(1, 1); m],
        }
    }
}

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::linalg::{add, basis_vec, dot, is_zero, scale, zero_vec, Matrix, Vector};
use crate::Q;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisElement {
    pub name: String,
    pub degree: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
pub enum ModelError {
    #[error("empty basis")]
    EmptyBasis,
    #[error("basis element {name} has degree {degree} outside 0..={dim}")]
    DegreeOutOfRange { name: String, degree: u32, dim: u32 },
    #[error("duplicate basis element {0}")]
    DuplicateBasis(String),
    #[error("unknown basis element {0}")]
    UnknownBasis(String),
    #[error("product {left}*{right} is not homogeneous of degree {expected}")]
    DegreeViolation {
        left: String,
        right: String,
        expected: u32,
    },
    #[error("multiplication is not graded commutative on {left}, {right}")]
    NotGradedCommutative { left: String, right: String },
    #[error("multiplication is not associative on {0}, {1}, {2}")]
    NotAssociative(String, String, String),
    #[error("unit is not a two-sided unit for {0}")]
    NotUnital(String),
    #[error("orientation classes must be exactly the top-degree basis elements")]
    BadOrientation,
    #[error("duality pairing is singular")]
    SingularPairing,
}

/// A Poincaré duality algebra: the rational cohomology ring of a closed
/// oriented manifold, possibly disconnected.
///
/// Homology is the graded dual: a homology vector holds coefficients on the
/// dual basis, and the dual of `b_i` has degree `|b_i|`. The fundamental
/// class is the counit, which is 1 on each component orientation class and
/// 0 on every other basis element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrobeniusModel {
    name: String,
    dim: u32,
    basis: Vec<BasisElement>,
    /// `mult[i][j]` is `b_i * b_j`
    mult: Vec<Vec<Vector>>,
    unit: Vector,
    components: Vec<usize>,
    pd: Matrix,
    pd_inv: Matrix,
}

fn sign(exp: u32) -> Q {
    if exp.is_multiple_of(2) {
        Q::one()
    } else {
        -Q::one()
    }
}

/// `(-1)^exp` as a rational.
pub fn koszul(exp: u32) -> Q {
    sign(exp)
}

impl FrobeniusModel {
    /// Build and validate a model. `products` lists the nonzero products of
    /// basis pairs; omitted pairs multiply to zero. `components` are the
    /// indices of the top-degree orientation classes, one per component.
    pub fn new(
        name: impl Into<String>,
        dim: u32,
        basis: Vec<BasisElement>,
        products: Vec<(usize, usize, Vector)>,
        unit: Vector,
        components: Vec<usize>,
    ) -> Result<Self, ModelError> {
        let n = basis.len();
        if n == 0 {
            return Err(ModelError::EmptyBasis);
        }
        for (k, b) in basis.iter().enumerate() {
            if b.degree > dim {
                return Err(ModelError::DegreeOutOfRange {
                    name: b.name.clone(),
                    degree: b.degree,
                    dim,
                });
            }
            if basis[..k].iter().any(|o| o.name == b.name) {
                return Err(ModelError::DuplicateBasis(b.name.clone()));
            }
        }
        let mut mult = vec![vec![zero_vec(n); n]; n];
        for (i, j, v) in products {
            mult[i][j] = v;
        }
        let top: Vec<usize> = (0..n).filter(|&i| basis[i].degree == dim).collect();
        let mut sorted = components.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted != top || sorted.len() != components.len() {
            return Err(ModelError::BadOrientation);
        }
        let mut model = Self {
            name: name.into(),
            dim,
            basis,
            mult,
            unit,
            components,
            pd: Matrix::zeros(n, n),
            pd_inv: Matrix::zeros(n, n),
        };
        model.check_ring()?;
        let mut pd = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                pd[(i, j)] = model.integrate(&model.mult[i][j]);
            }
        }
        model.pd_inv = pd.inverse().ok_or(ModelError::SingularPairing)?;
        model.pd = pd;
        Ok(model)
    }

    fn check_ring(&self) -> Result<(), ModelError> {
        let n = self.rank();
        let name = |i: usize| self.basis[i].name.clone();
        for i in 0..n {
            for j in 0..n {
                let p = &self.mult[i][j];
                let expected = self.basis[i].degree + self.basis[j].degree;
                if !self.is_homogeneous(p, expected) {
                    return Err(ModelError::DegreeViolation {
                        left: name(i),
                        right: name(j),
                        expected,
                    });
                }
                let swapped = scale(
                    sign(self.basis[i].degree * self.basis[j].degree),
                    &self.mult[j][i],
                );
                if *p != swapped {
                    return Err(ModelError::NotGradedCommutative {
                        left: name(i),
                        right: name(j),
                    });
                }
            }
        }
        for i in 0..n {
            let e = basis_vec(n, i);
            if self.cup(&self.unit, &e) != e || self.cup(&e, &self.unit) != e {
                return Err(ModelError::NotUnital(name(i)));
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let left = self.cup(&self.mult[i][j], &basis_vec(n, k));
                    let right = self.cup(&basis_vec(n, i), &self.mult[j][k]);
                    if left != right {
                        return Err(ModelError::NotAssociative(name(i), name(j), name(k)));
                    }
                }
            }
        }
        Ok(())
    }

    fn is_homogeneous(&self, v: &[Q], degree: u32) -> bool {
        v.iter()
            .zip(&self.basis)
            .all(|(x, b)| x.is_zero() || b.degree == degree)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn degree(&self, i: usize) -> u32 {
        self.basis[i].degree
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.basis.iter().position(|b| b.name == name)
    }

    pub fn element(&self, i: usize) -> Vector {
        basis_vec(self.rank(), i)
    }

    /// Degree of a nonzero homogeneous vector.
    pub fn degree_of(&self, v: &[Q]) -> Option<u32> {
        let mut degrees = v
            .iter()
            .zip(&self.basis)
            .filter(|(x, _)| !x.is_zero())
            .map(|(_, b)| b.degree);
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    pub fn product(&self, i: usize, j: usize) -> &Vector {
        &self.mult[i][j]
    }

    pub fn unit(&self) -> &Vector {
        &self.unit
    }

    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    /// The orientation class `{L_i}` of component `i`.
    pub fn component_class(&self, i: usize) -> Vector {
        self.element(self.components[i])
    }

    /// `{M}`: the sum of the component orientation classes.
    pub fn orientation(&self) -> Vector {
        let mut v = zero_vec(self.rank());
        for &c in &self.components {
            v[c] = Q::one();
        }
        v
    }

    /// `[M]` as a homology vector.
    pub fn fundamental_class(&self) -> Vector {
        self.orientation()
    }

    /// The point class `[x_0]`: the degree-0 homology class dual to the unit
    /// on the first component.
    pub fn point_class(&self) -> Vector {
        self.pd(&self.component_class(0))
    }

    /// `<alpha, [M]>`.
    pub fn integrate(&self, alpha: &[Q]) -> Q {
        self.components.iter().map(|&c| alpha[c]).sum()
    }

    pub fn cup(&self, a: &[Q], b: &[Q]) -> Vector {
        let n = self.rank();
        let mut out = zero_vec(n);
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let c = x * y;
                for (k, z) in self.mult[i][j].iter().enumerate() {
                    if !z.is_zero() {
                        out[k] += c * z;
                    }
                }
            }
        }
        out
    }

    /// Cap product fixed by `<beta, alpha ∩ x> = <beta ∪ alpha, x>`.
    pub fn cap(&self, alpha: &[Q], x: &[Q]) -> Vector {
        (0..self.rank())
            .map(|i| dot(&self.cup(&self.element(i), alpha), x))
            .collect()
    }

    /// Poincaré duality `alpha ↦ alpha ∩ [M]`.
    pub fn pd(&self, alpha: &[Q]) -> Vector {
        self.pd.apply(alpha)
    }

    pub fn pd_inv(&self, x: &[Q]) -> Vector {
        self.pd_inv.apply(x)
    }

    pub fn pd_matrix(&self) -> &Matrix {
        &self.pd
    }

    pub fn betti(&self) -> Vec<usize> {
        let mut b = vec![0; self.dim as usize + 1];
        for e in &self.basis {
            b[e.degree as usize] += 1;
        }
        b
    }

    pub fn euler_char(&self) -> i64 {
        self.betti()
            .iter()
            .enumerate()
            .map(|(i, &n)| if i % 2 == 0 { n as i64 } else { -(n as i64) })
            .sum()
    }

    /// Graded tensor product model of `self × other`. Basis element
    /// `(i, j)` sits at index `i * other.rank() + j`.
    pub fn product_with(&self, other: &FrobeniusModel) -> FrobeniusModel {
        let (n, m) = (self.rank(), other.rank());
        let idx = |i: usize, j: usize| i * m + j;
        let mut basis = Vec::with_capacity(n * m);
        for a in &self.basis {
            for b in &other.basis {
                basis.push(BasisElement {
                    name: format!("{}.{}", a.name, b.name),
                    degree: a.degree + b.degree,
                });
            }
        }
        let mut products = Vec::new();
        for i in 0..n {
            for j in 0..m {
                for k in 0..n {
                    for l in 0..m {
                        let left = &self.mult[i][k];
                        let right = &other.mult[j][l];
                        if is_zero(left) || is_zero(right) {
                            continue;
                        }
                        let s = sign(other.basis[j].degree * self.basis[k].degree);
                        let mut v = zero_vec(n * m);
                        for (x, cx) in left.iter().enumerate() {
                            for (y, cy) in right.iter().enumerate() {
                                v[idx(x, y)] = s * cx * cy;
                            }
                        }
                        products.push((idx(i, j), idx(k, l), v));
                    }
                }
            }
        }
        let mut unit = zero_vec(n * m);
        for (x, cx) in self.unit.iter().enumerate() {
            for (y, cy) in other.unit.iter().enumerate() {
                unit[idx(x, y)] = cx * cy;
            }
        }
        let mut components = Vec::new();
        for &a in &self.components {
            for &b in &other.components {
                components.push(idx(a, b));
            }
        }
        FrobeniusModel::new(
            format!("{}x{}", self.name, other.name),
            self.dim + other.dim,
            basis,
            products,
            unit,
            components,
        )
        .expect("product of valid models is valid")
    }

    /// `sum_i coeffs[i] * b_i`, convenience for tests and parsers.
    pub fn combination(&self, terms: &[(usize, Q)]) -> Vector {
        terms
            .iter()
            .fold(zero_vec(self.rank()), |acc, &(i, c)| add(&acc, &scale(c, &self.element(i))))
    }
}

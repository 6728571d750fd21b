use std::fmt;

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use super::linalg::{basis_vec, is_zero, scale, Matrix, Vector};
use super::model::{koszul, FrobeniusModel};
use crate::Q;

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
pub enum EmbeddingError {
    #[error("source dimension {source_dim} exceeds target dimension {target_dim}")]
    DimensionTooLarge { source_dim: u32, target_dim: u32 },
    #[error("restriction matrix is {rows}x{cols}, expected {expected_rows}x{expected_cols}")]
    Shape {
        rows: usize,
        cols: usize,
        expected_rows: usize,
        expected_cols: usize,
    },
    #[error("restriction of {0} is not homogeneous of the same degree")]
    NotDegreePreserving(String),
    #[error("restriction does not preserve the unit")]
    NotUnital,
    #[error("restriction is not multiplicative on {0}, {1}")]
    NotMultiplicative(String, String),
}

/// An embedding `ι: L → M` given by its restriction `ι*` on cohomology.
/// `ι_*` on homology is the transpose.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmbeddingData {
    name: String,
    source: FrobeniusModel,
    target: FrobeniusModel,
    /// `rank(L) x rank(M)`
    restriction: Matrix,
}

impl EmbeddingData {
    pub fn new(
        name: impl Into<String>,
        source: FrobeniusModel,
        target: FrobeniusModel,
        restriction: Matrix,
    ) -> Result<Self, EmbeddingError> {
        if source.dim() > target.dim() {
            return Err(EmbeddingError::DimensionTooLarge {
                source_dim: source.dim(),
                target_dim: target.dim(),
            });
        }
        if restriction.rows() != source.rank() || restriction.cols() != target.rank() {
            return Err(EmbeddingError::Shape {
                rows: restriction.rows(),
                cols: restriction.cols(),
                expected_rows: source.rank(),
                expected_cols: target.rank(),
            });
        }
        let e = Self {
            name: name.into(),
            source,
            target,
            restriction,
        };
        let (l, m) = (&e.source, &e.target);
        for i in 0..m.rank() {
            let r = e.restrict(&m.element(i));
            if !is_zero(&r) && l.degree_of(&r) != Some(m.degree(i)) {
                return Err(EmbeddingError::NotDegreePreserving(m.basis()[i].name.clone()));
            }
        }
        if e.restrict(m.unit()) != *l.unit() {
            return Err(EmbeddingError::NotUnital);
        }
        for i in 0..m.rank() {
            for j in 0..m.rank() {
                let lhs = e.restrict(m.product(i, j));
                let rhs = l.cup(&e.restrict(&m.element(i)), &e.restrict(&m.element(j)));
                if lhs != rhs {
                    return Err(EmbeddingError::NotMultiplicative(
                        m.basis()[i].name.clone(),
                        m.basis()[j].name.clone(),
                    ));
                }
            }
        }
        Ok(e)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn source(&self) -> &FrobeniusModel {
        &self.source
    }

    pub fn target(&self) -> &FrobeniusModel {
        &self.target
    }

    pub fn restriction(&self) -> &Matrix {
        &self.restriction
    }

    pub fn codim(&self) -> u32 {
        self.target.dim() - self.source.dim()
    }

    /// `ι*`
    pub fn restrict(&self, alpha: &[Q]) -> Vector {
        self.restriction.apply(alpha)
    }

    /// `ι_*`
    pub fn push(&self, y: &[Q]) -> Vector {
        (0..self.target.rank())
            .map(|j| (0..self.source.rank()).map(|i| self.restriction[(i, j)] * y[i]).sum())
            .collect()
    }

    /// `ι_!` on the dual basis element of `H_*(M)` with index `j`.
    fn hom_transfer_basis(&self, j: usize) -> Vector {
        let (l, m) = (&self.source, &self.target);
        let d = m.dim();
        let s = koszul((d - m.degree(j)) * self.codim());
        scale(s, &l.pd(&self.restrict(&m.pd_inv(&basis_vec(m.rank(), j)))))
    }

    /// `ι^!` on the basis element of `H^*(L)` with index `j`.
    fn coh_transfer_basis(&self, j: usize) -> Vector {
        let (l, m) = (&self.source, &self.target);
        let s = koszul(l.degree(j) * self.codim());
        scale(s, &m.pd_inv(&self.push(&l.pd(&basis_vec(l.rank(), j)))))
    }

    /// `ι_!: H_*(M) → H_{*-d+ℓ}(L)`
    pub fn hom_transfer(&self, b: &[Q]) -> Vector {
        self.transfers().hom_transfer.apply(b)
    }

    /// `ι^!: H^*(L) → H^{*+d-ℓ}(M)`
    pub fn coh_transfer(&self, beta: &[Q]) -> Vector {
        self.transfers().coh_transfer.apply(beta)
    }

    pub fn transfers(&self) -> TransferPair {
        let (l, m) = (&self.source, &self.target);
        let hom: Vec<Vector> = (0..m.rank()).map(|j| self.hom_transfer_basis(j)).collect();
        let coh: Vec<Vector> = (0..l.rank()).map(|j| self.coh_transfer_basis(j)).collect();
        let thom = m.pd_inv(&self.push(&l.fundamental_class()));
        let euler = self.restrict(&thom);
        TransferPair {
            hom_transfer: Matrix::from_columns(l.rank(), &hom),
            coh_transfer: Matrix::from_columns(m.rank(), &coh),
            thom_class: thom,
            euler_class: euler,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransferPair {
    pub hom_transfer: Matrix,
    pub coh_transfer: Matrix,
    /// `v` with `v ∩ [M] = ι_*[L]`
    pub thom_class: Vector,
    /// `e_ν = ι*(v)`
    pub euler_class: Vector,
}

/// A failing instance of a transfer identity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub input: String,
    pub lhs: Vec<String>,
    pub rhs: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub identity: u8,
    pub embedding: String,
    pub cases: usize,
    pub passed: bool,
    /// holds for formal reasons in the trivial-fibration setting
    pub tautological: bool,
    pub witness: Option<Witness>,
}

impl fmt::Display for IdentityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(
            f,
            "identity ({}) on {}: {} over {} case(s)",
            self.identity, self.embedding, status, self.cases
        )?;
        if self.tautological {
            f.write_str(" [trivially satisfied]")?;
        }
        if let Some(w) = &self.witness {
            write!(f, "; at {}: lhs=[{}] rhs=[{}]", w.input, w.lhs.join(","), w.rhs.join(","))?;
        }
        Ok(())
    }
}

fn render(v: &[Q]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

struct Checker {
    cases: usize,
    witness: Option<Witness>,
}

impl Checker {
    fn new() -> Self {
        Self {
            cases: 0,
            witness: None,
        }
    }

    fn check(&mut self, input: impl FnOnce() -> String, lhs: Vector, rhs: Vector) {
        self.cases += 1;
        if self.witness.is_none() && lhs != rhs {
            self.witness = Some(Witness {
                input: input(),
                lhs: render(&lhs),
                rhs: render(&rhs),
            });
        }
    }

    fn finish(self, identity: u8, e: &EmbeddingData, tautological: bool) -> IdentityReport {
        IdentityReport {
            identity,
            embedding: e.name.clone(),
            cases: self.cases,
            passed: self.witness.is_none(),
            tautological,
            witness: self.witness,
        }
    }
}

/// Check transfer identity `k` (1 to 9) exhaustively over basis elements,
/// specialised to the trivial fibration over the embedding.
pub fn verify_identity(k: u8, e: &EmbeddingData) -> IdentityReport {
    let (l, m) = (&e.source, &e.target);
    let t = e.transfers();
    let shriek = |b: &[Q]| t.hom_transfer.apply(b);
    let upper = |beta: &[Q]| t.coh_transfer.apply(beta);
    let c = e.codim();
    let hname = |model: &FrobeniusModel, i: usize| format!("{}*", model.basis()[i].name);
    let cname = |model: &FrobeniusModel, i: usize| model.basis()[i].name.clone();
    let mut ck = Checker::new();
    let mut tautological = false;
    match k {
        1 => {
            for j in 0..m.rank() {
                let b = m.element(j);
                ck.check(|| hname(m, j), e.push(&shriek(&b)), m.cap(&t.thom_class, &b));
            }
        }
        2 => {
            for j in 0..l.rank() {
                let a = l.element(j);
                ck.check(|| hname(l, j), shriek(&e.push(&a)), l.cap(&t.euler_class, &a));
            }
        }
        3 => {
            for i in 0..m.rank() {
                for j in 0..m.rank() {
                    let (alpha, b) = (m.element(i), m.element(j));
                    let lhs = shriek(&m.cap(&alpha, &b));
                    let rhs = scale(
                        koszul(m.degree(i) * c),
                        &l.cap(&e.restrict(&alpha), &shriek(&b)),
                    );
                    ck.check(|| format!("{}, {}", cname(m, i), hname(m, j)), lhs, rhs);
                }
            }
        }
        4 => {
            for i in 0..m.rank() {
                let alpha = m.element(i);
                ck.check(
                    || cname(m, i),
                    upper(&e.restrict(&alpha)),
                    m.cup(&t.thom_class, &alpha),
                );
            }
        }
        5 => {
            for j in 0..l.rank() {
                let beta = l.element(j);
                ck.check(|| cname(l, j), e.restrict(&upper(&beta)), l.cup(&t.euler_class, &beta));
            }
        }
        6 => {
            for i in 0..l.rank() {
                for j in 0..m.rank() {
                    let (beta, b) = (l.element(i), m.element(j));
                    let lhs = m.cap(&upper(&beta), &b);
                    let rhs = scale(koszul(l.degree(i) * c), &e.push(&l.cap(&beta, &shriek(&b))));
                    ck.check(|| format!("{}, {}", cname(l, i), hname(m, j)), lhs, rhs);
                }
            }
        }
        7 => {
            // p = q = id over L: both sides are ι^!(α')
            tautological = true;
            for j in 0..l.rank() {
                let beta = l.element(j);
                ck.check(|| cname(l, j), upper(&beta), upper(&beta));
            }
        }
        8 => {
            ck.check(
                || "[M]".into(),
                shriek(&m.fundamental_class()),
                l.fundamental_class(),
            );
        }
        9 => {
            let expected = scale(koszul(l.dim() * c), &m.orientation());
            for i in 0..l.component_count() {
                ck.check(|| format!("{{L_{i}}}"), upper(&l.component_class(i)), expected.clone());
            }
        }
        _ => panic!("no transfer identity numbered {k}"),
    }
    ck.finish(k, e, tautological)
}

pub fn verify_all_identities(e: &EmbeddingData) -> Vec<IdentityReport> {
    (1..=9).map(|k| verify_identity(k, e)).collect()
}

/// `e_L = sum_i χ(L_i) {L_i}`. Component Euler characteristics come from
/// the graded ranks of the component summands `{L_i}·H^*(L)`.
pub fn component_euler_class(l: &FrobeniusModel) -> Vector {
    let mut out = vec![Q::zero(); l.rank()];
    for i in 0..l.component_count() {
        let chi = component_euler_char(l, i);
        let class = l.component_class(i);
        for (o, x) in out.iter_mut().zip(&class) {
            *o += Q::from_integer(chi) * x;
        }
    }
    out
}

/// Euler characteristic of component `i`: the alternating count of basis
/// elements that pair nontrivially into `{L_i}`. Assumes a basis adapted to
/// the component decomposition.
pub fn component_euler_char(l: &FrobeniusModel, i: usize) -> i64 {
    let top = l.component_class(i);
    let idx = top.iter().position(|x| !x.is_zero()).expect("nonzero class");
    (0..l.rank())
        .filter(|&j| (0..l.rank()).any(|k| !l.product(j, k)[idx].is_zero()))
        .map(|j| if l.degree(j).is_multiple_of(2) { 1 } else { -1 })
        .sum()
}

/// The composite `ι_*(e_L ∩ ι_!(a))` next to its closed form
/// `χ(L) ({M} ∩ a)`.
pub fn euler_composite(e: &EmbeddingData, a: &[Q]) -> (Vector, Vector) {
    let (l, m) = (&e.source, &e.target);
    let e_l = component_euler_class(l);
    let composite = e.push(&l.cap(&e_l, &e.hom_transfer(a)));
    let expected = scale(Q::from_integer(l.euler_char()), &m.cap(&m.orientation(), a));
    (composite, expected)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompositeReport {
    pub embedding: String,
    pub cases: usize,
    pub passed: bool,
    pub witness: Option<Witness>,
}

pub fn verify_euler_composite(e: &EmbeddingData) -> CompositeReport {
    let m = &e.target;
    let mut ck = Checker::new();
    for j in 0..m.rank() {
        let (lhs, rhs) = euler_composite(e, &m.element(j));
        ck.check(|| format!("{}*", m.basis()[j].name), lhs, rhs);
    }
    CompositeReport {
        embedding: e.name.clone(),
        cases: ck.cases,
        passed: ck.witness.is_none(),
        witness: ck.witness,
    }
}

/// `{M} ∪ {M} = 0`, expected whenever `d ≥ 1`.
pub fn orientation_squares_to_zero(m: &FrobeniusModel) -> bool {
    let o = m.orientation();
    is_zero(&m.cup(&o, &o))
}

/// `ι*({M}) = 0`, expected whenever `ℓ < d`.
pub fn restriction_kills_orientation(e: &EmbeddingData) -> bool {
    is_zero(&e.restrict(&e.target.orientation()))
}

/// `<e_ν, [L]>` for an embedding.
pub fn euler_number(e: &EmbeddingData) -> Q {
    e.source.integrate(&e.transfers().euler_class)
}

//! Built-in manifold models and embeddings.

use num_traits::One;

use super::embedding::EmbeddingData;
use super::linalg::{basis_vec, Matrix};
use super::model::{BasisElement, FrobeniusModel};
use crate::Q;

fn el(name: &str, degree: u32) -> BasisElement {
    BasisElement {
        name: name.into(),
        degree,
    }
}

/// Products with the unit (index 0) on either side.
fn unit_products(n: usize) -> Vec<(usize, usize, Vec<Q>)> {
    let mut p = vec![(0, 0, basis_vec(n, 0))];
    for i in 1..n {
        p.push((0, i, basis_vec(n, i)));
        p.push((i, 0, basis_vec(n, i)));
    }
    p
}

pub fn point() -> FrobeniusModel {
    FrobeniusModel::new("pt", 0, vec![el("1", 0)], unit_products(1), basis_vec(1, 0), vec![0])
        .expect("valid")
}

/// `S^d` for `d ≥ 1`.
pub fn sphere(d: u32) -> FrobeniusModel {
    assert!(d >= 1, "sphere dimension");
    FrobeniusModel::new(
        format!("S{d}"),
        d,
        vec![el("1", 0), el("x", d)],
        unit_products(2),
        basis_vec(2, 0),
        vec![1],
    )
    .expect("valid")
}

/// Exterior algebra on `a`, `b` of degree 1 with `{T²} = ab`.
pub fn torus() -> FrobeniusModel {
    let mut p = unit_products(4);
    p.push((1, 2, basis_vec(4, 3)));
    p.push((2, 1, basis_vec(4, 3).into_iter().map(|x| -x).collect()));
    FrobeniusModel::new(
        "T2",
        2,
        vec![el("1", 0), el("a", 1), el("b", 1), el("ab", 2)],
        p,
        basis_vec(4, 0),
        vec![3],
    )
    .expect("valid")
}

/// Truncated polynomial algebra `Q[x]/x³`, `|x| = 2`.
pub fn cp2() -> FrobeniusModel {
    let mut p = unit_products(3);
    p.push((1, 1, basis_vec(3, 2)));
    FrobeniusModel::new(
        "CP2",
        4,
        vec![el("1", 0), el("x", 2), el("x2", 4)],
        p,
        basis_vec(3, 0),
        vec![2],
    )
    .expect("valid")
}

/// Two points: `Q × Q` with idempotents `e1`, `e2`.
pub fn two_points() -> FrobeniusModel {
    FrobeniusModel::new(
        "2pt",
        0,
        vec![el("e1", 0), el("e2", 0)],
        vec![(0, 0, basis_vec(2, 0)), (1, 1, basis_vec(2, 1))],
        vec![Q::one(), Q::one()],
        vec![0, 1],
    )
    .expect("valid")
}

pub const MODEL_NAMES: [&str; 8] = ["pt", "S1", "S2", "S3", "S4", "T2", "CP2", "2pt"];

/// Look up a built-in model; `AxB` builds the product model.
pub fn model(name: &str) -> Option<FrobeniusModel> {
    if let Some((a, b)) = name.split_once('x') {
        return Some(model(a)?.product_with(&model(b)?));
    }
    Some(match name {
        "pt" => point(),
        "S1" => sphere(1),
        "S2" => sphere(2),
        "S3" => sphere(3),
        "S4" => sphere(4),
        "T2" => torus(),
        "CP2" => cp2(),
        "2pt" => two_points(),
        _ => return None,
    })
}

pub fn builtin_models() -> Vec<FrobeniusModel> {
    MODEL_NAMES.iter().map(|n| model(n).expect("listed")).collect()
}

/// A point of a connected model.
pub fn point_in(m: &FrobeniusModel) -> EmbeddingData {
    let mut r = Matrix::zeros(1, m.rank());
    for j in 0..m.rank() {
        r[(0, j)] = m.unit()[j];
    }
    EmbeddingData::new(format!("pt-in-{}", m.name()), point(), m.clone(), r).expect("valid")
}

pub fn identity(m: &FrobeniusModel) -> EmbeddingData {
    EmbeddingData::new(format!("id-{}", m.name()), m.clone(), m.clone(), Matrix::identity(m.rank()))
        .expect("valid")
}

/// `Δ: M → M × M`, with `Δ*(a ⊗ b) = a ∪ b`.
pub fn diagonal(m: &FrobeniusModel) -> EmbeddingData {
    let n = m.rank();
    let square = m.product_with(m);
    let mut columns = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            columns.push(m.product(i, j).clone());
        }
    }
    EmbeddingData::new(format!("diag-{}", m.name()), m.clone(), square, Matrix::from_columns(n, &columns))
        .expect("valid")
}

/// `S¹ × pt ⊂ T²`: `a ↦ θ`, `b ↦ 0`.
pub fn circle_in_torus() -> EmbeddingData {
    let s1 = sphere(1);
    let r = Matrix::from_columns(
        2,
        &[basis_vec(2, 0), basis_vec(2, 1), vec![Q::default(); 2], vec![Q::default(); 2]],
    );
    EmbeddingData::new("S1-in-T2", s1, torus(), r).expect("valid")
}

pub fn two_points_in_sphere() -> EmbeddingData {
    let r = Matrix::from_columns(2, &[vec![Q::one(), Q::one()], vec![Q::default(); 2]]);
    EmbeddingData::new("2pt-in-S2", two_points(), sphere(2), r).expect("valid")
}

/// Every built-in embedding: points, identities, diagonals of all connected
/// built-in models, and the two special cases.
pub fn builtin_embeddings() -> Vec<EmbeddingData> {
    let connected: Vec<FrobeniusModel> = builtin_models()
        .into_iter()
        .filter(|m| m.component_count() == 1)
        .collect();
    let mut out = vec![point_in(&sphere(2)), point_in(&sphere(3))];
    out.extend(connected.iter().map(identity));
    out.extend(connected.iter().map(diagonal));
    out.push(circle_in_torus());
    out.push(two_points_in_sphere());
    out
}

pub fn embedding(name: &str) -> Option<EmbeddingData> {
    builtin_embeddings().into_iter().find(|e| e.name() == name)
}

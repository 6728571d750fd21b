//! Poincaré duality models of closed oriented manifolds, embeddings between
//! them, and the transfer maps defined through duality.

pub mod builtins;
mod embedding;
pub mod linalg;
mod model;

pub use embedding::{
    component_euler_char, component_euler_class, euler_composite, euler_number,
    orientation_squares_to_zero, restriction_kills_orientation, verify_all_identities,
    verify_euler_composite, verify_identity, CompositeReport, EmbeddingData, EmbeddingError,
    IdentityReport, TransferPair, Witness,
};
pub use model::{koszul, BasisElement, FrobeniusModel, ModelError};

#[cfg(test)]
mod tests {
    use super::builtins::*;
    use super::linalg::{basis_vec, is_zero, scale, zero_vec};
    use super::*;
    use crate::Q;
    use num_traits::{One, Zero};

    fn q(n: i64) -> Q {
        Q::from_integer(n)
    }

    #[test]
    fn duality_basics() {
        for m in builtin_models() {
            assert_eq!(m.pd(m.unit()), m.fundamental_class(), "{}", m.name());
            for i in 0..m.rank() {
                let e = m.element(i);
                assert_eq!(m.pd_inv(&m.pd(&e)), e);
                assert_eq!(m.cap(m.unit(), &e), e);
            }
        }
        let s2 = sphere(2);
        assert_eq!(s2.pd(&s2.element(1)), basis_vec(2, 0));
        assert_eq!(s2.cap(&s2.orientation(), &s2.fundamental_class()), s2.point_class());
        assert_eq!(s2.point_class(), basis_vec(2, 0));
    }

    #[test]
    fn torus_is_graded_commutative() {
        let t = torus();
        let (a, b) = (t.element(1), t.element(2));
        assert_eq!(t.cup(&a, &b), scale(-Q::one(), &t.cup(&b, &a)));
        assert!(is_zero(&t.cup(&a, &a)));
    }

    #[test]
    fn cap_is_a_module_action() {
        for m in [torus(), cp2(), sphere(2).product_with(&sphere(2))] {
            let n = m.rank();
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        let (a, b, x) = (m.element(i), m.element(j), m.element(k));
                        assert_eq!(m.cap(&m.cup(&a, &b), &x), m.cap(&a, &m.cap(&b, &x)));
                    }
                }
            }
        }
    }

    #[test]
    fn euler_characteristics() {
        let chis: Vec<i64> = builtin_models().iter().map(|m| m.euler_char()).collect();
        assert_eq!(chis, vec![1, 0, 2, 0, 2, 0, 3, 2]);
        assert_eq!(sphere(2).product_with(&cp2()).euler_char(), 6);
        assert_eq!(component_euler_char(&two_points(), 1), 1);
    }

    #[test]
    fn rejects_bad_models() {
        let el = |n: &str, d| BasisElement {
            name: n.into(),
            degree: d,
        };
        // x * x = 0 on S^2 but with a degenerate extra class
        let bad = FrobeniusModel::new(
            "bad",
            2,
            vec![el("1", 0), el("y", 1), el("x", 2)],
            vec![
                (0, 0, basis_vec(3, 0)),
                (0, 1, basis_vec(3, 1)),
                (1, 0, basis_vec(3, 1)),
                (0, 2, basis_vec(3, 2)),
                (2, 0, basis_vec(3, 2)),
            ],
            basis_vec(3, 0),
            vec![2],
        );
        assert_eq!(bad, Err(ModelError::SingularPairing));
        let noncomm = FrobeniusModel::new(
            "nc",
            2,
            vec![el("1", 0), el("a", 1), el("b", 1), el("ab", 2)],
            vec![
                (0, 0, basis_vec(4, 0)),
                (0, 1, basis_vec(4, 1)),
                (1, 0, basis_vec(4, 1)),
                (0, 2, basis_vec(4, 2)),
                (2, 0, basis_vec(4, 2)),
                (0, 3, basis_vec(4, 3)),
                (3, 0, basis_vec(4, 3)),
                (1, 2, basis_vec(4, 3)),
                (2, 1, basis_vec(4, 3)),
            ],
            basis_vec(4, 0),
            vec![3],
        );
        assert!(matches!(noncomm, Err(ModelError::NotGradedCommutative { .. })));
        let mut r = linalg::Matrix::zeros(1, 2);
        r[(0, 1)] = Q::one();
        assert!(EmbeddingData::new("bad", point(), sphere(2), r).is_err());
    }

    #[test]
    fn all_identities_on_all_builtin_embeddings() {
        for e in builtin_embeddings() {
            for report in verify_all_identities(&e) {
                assert!(report.passed, "{report}");
                assert!(report.cases > 0);
            }
        }
    }

    #[test]
    fn documented_transfer_values() {
        let e = point_in(&sphere(2));
        let t = e.transfers();
        assert_eq!(t.thom_class, basis_vec(2, 1));
        assert!(is_zero(&t.euler_class));
        assert_eq!(e.hom_transfer(&sphere(2).fundamental_class()), vec![q(1)]);

        let d = diagonal(&sphere(2));
        assert_eq!(euler_number(&d), q(2));
        // v = x⊗1 + 1⊗x, e = 2x
        let t = d.transfers();
        let mut v = zero_vec(4);
        v[1] = q(1);
        v[2] = q(1);
        assert_eq!(t.thom_class, v);
        assert_eq!(t.euler_class, vec![q(0), q(2)]);

        let id = identity(&torus());
        let t = id.transfers();
        assert_eq!(t.hom_transfer, linalg::Matrix::identity(4));
        assert_eq!(t.thom_class, basis_vec(4, 0));
        assert_eq!(t.euler_class, basis_vec(4, 0));

        let c = circle_in_torus();
        let t = c.transfers();
        assert_eq!(t.thom_class, basis_vec(4, 2));
        assert!(is_zero(&t.euler_class));
        for j in 0..2 {
            assert!(is_zero(&c.hom_transfer(&c.push(&basis_vec(2, j)))));
        }

        let two = two_points_in_sphere();
        let total = two.coh_transfer(&two.source().orientation());
        assert_eq!(total, scale(q(2), &sphere(2).orientation()));
        assert_eq!(verify_identity(9, &two).cases, 2);
    }

    #[test]
    fn euler_composite_on_all_builtins() {
        for e in builtin_embeddings() {
            let r = verify_euler_composite(&e);
            assert!(r.passed, "{r:?}");
        }
        let c = circle_in_torus();
        for j in 0..4 {
            let (lhs, rhs) = euler_composite(&c, &basis_vec(4, j));
            assert!(is_zero(&lhs) && is_zero(&rhs));
        }
        let p = point_in(&sphere(2));
        let (lhs, rhs) = euler_composite(&p, &sphere(2).fundamental_class());
        assert_eq!(lhs, sphere(2).point_class());
        assert_eq!(lhs, rhs);
        let d = diagonal(&sphere(2));
        let m = d.target();
        let (lhs, _) = euler_composite(&d, &m.fundamental_class());
        assert_eq!(lhs, scale(q(2), &m.cap(&m.orientation(), &m.fundamental_class())));
    }

    #[test]
    fn vanishing_facts() {
        for m in builtin_models() {
            if m.dim() >= 1 {
                assert!(orientation_squares_to_zero(&m), "{}", m.name());
            }
        }
        for e in builtin_embeddings() {
            if e.source().dim() < e.target().dim() {
                assert!(restriction_kills_orientation(&e), "{}", e.name());
            }
            if e.name().starts_with("diag-") {
                assert_eq!(euler_number(&e), q(e.source().euler_char()), "{}", e.name());
            }
        }
        assert!(!euler_number(&diagonal(&cp2())).is_zero());
    }
}

//! Decomposition and evaluation checks against independent oracles.

use num_traits::One;
use occ_core::sewing::{ArcRef, SewPlan};
use occ_core::surface::{Arc, BoundaryCircle, BraneLabel, BraneTable, Cobordism, Component};
use occ_core::tqft::family::{self, FamilyBounds};
use occ_core::tqft::{
    check_sewing, decompose, decompose_with, evaluate, evaluate_decomposition, DecomposeOptions, Generator,
    Sector, ShadowAssignment, TableAssignment,
};
use occ_core::Q;
use proptest::prelude::*;

fn branes() -> BraneTable {
    BraneTable::from_labels([BraneLabel::new("K", 0, 2), BraneLabel::new("L", 1, 0)])
}

fn connected(genus: u32, circles: Vec<BoundaryCircle>) -> Cobordism {
    Cobordism::new(branes(), vec![Component::new(genus, circles)])
}

fn names() -> Vec<String> {
    vec!["K".into(), "L".into()]
}

/// Every generator over the two branes.
fn all_generators() -> Vec<Generator> {
    use Generator::*;
    let mut out = vec![ClosedUnit, ClosedMult, ClosedComult];
    for i in 0..2 {
        out.extend([OpenUnit(i), Zipper(i), Cozipper(i), WindowCup(i)]);
        for j in 0..2 {
            out.push(Comodule(i, j));
            for k in 0..2 {
                out.extend([OpenMult(i, j, k), OpenComult(i, j, k)]);
                for l in 0..2 {
                    out.push(Saddle(i, j, k, l));
                }
            }
        }
    }
    out
}

/// Euler characteristic of the elementary surface of a generator.
fn generator_chi(g: Generator) -> i64 {
    use Generator::*;
    match g {
        ClosedUnit | OpenUnit(_) | OpenMult(..) | OpenComult(..) | Saddle(..) => 1,
        ClosedMult | ClosedComult => -1,
        Zipper(_) | Cozipper(_) | WindowCup(_) | Comodule(..) => 0,
    }
}

/// One-dimensional sectors with every generator a scalar, chosen so that a
/// connected surface evaluates to `t^(open inputs - χ) · w_K^(K windows) ·
/// w_L^(L windows)`. The value depends only on the surface, so every
/// decomposition must produce it.
fn scalar_tft(t: i64, w: [i64; 2]) -> TableAssignment {
    let mut table = TableAssignment {
        closed: vec![("1".into(), 0)],
        ..Default::default()
    };
    for i in names() {
        for j in names() {
            table.open.insert((i.clone(), j.clone()), vec![("e".into(), 0)]);
        }
    }
    let t = Q::from_integer(t);
    for g in all_generators() {
        let open_in = g.inputs().iter().filter(|s| matches!(s, Sector::Open(..))).count() as i32;
        let mut v = t.pow(open_in - generator_chi(g) as i32);
        if let Generator::WindowCup(k) = g {
            v *= Q::from_integer(w[k as usize]);
        }
        table.maps.insert(g.name(&names()), vec![(0, 0, v)]);
    }
    table.validate(&names()).unwrap();
    table
}

fn scalar_expected(c: &Cobordism, t: i64, w: [i64; 2]) -> Q {
    let mut v = Q::one();
    for comp in &c.components {
        let open_in: usize = comp
            .circles
            .iter()
            .map(|k| match k {
                BoundaryCircle::Mixed(arcs) => arcs.iter().filter(|a| **a == Arc::OpenIn).count(),
                _ => 0,
            })
            .sum();
        let chi = occ_core::surface::euler_char(comp);
        v *= Q::from_integer(t).pow(open_in as i32 - chi as i32);
        for circle in &comp.circles {
            if let BoundaryCircle::Window(Some(l)) = circle {
                v *= Q::from_integer(w[if l == "K" { 0 } else { 1 }]);
            }
        }
    }
    v
}

fn scalar_value(c: &Cobordism, table: &TableAssignment, opts: DecomposeOptions) -> Q {
    let dec = decompose_with(c, &names(), opts).unwrap();
    let m = evaluate_decomposition(&dec, table).unwrap();
    assert_eq!((m.rows(), m.cols()), (1, 1));
    m.get(0, 0)
}

#[test]
fn canonical_words() {
    use BoundaryCircle::{ClosedIn as In, ClosedOut as Out};
    assert!(decompose(&connected(0, vec![In, Out])).unwrap().word().is_empty());
    assert_eq!(decompose(&connected(1, vec![In, Out])).unwrap().word(), ["phi", "mu"]);
    let fig11 = decompose(&connected(0, vec![In, BoundaryCircle::window("K"), Out])).unwrap();
    assert_eq!(fig11.word(), ["window_cup[K]", "mu"]);
    assert_eq!(fig11.render(), ["window_cup[K] ⊗ id", "mu"]);
    let strip = connected(0, vec![BoundaryCircle::mixed([Arc::free("K"), Arc::OpenIn, Arc::free("L"), Arc::OpenOut])]);
    assert!(decompose(&strip).unwrap().word().is_empty());
}

#[test]
fn unlabeled_windows_and_sinkless_components_are_rejected() {
    let bad = connected(0, vec![BoundaryCircle::Window(None), BoundaryCircle::ClosedOut]);
    assert!(matches!(decompose(&bad), Err(occ_core::tqft::DecomposeError::UnlabeledWindow(0))));
    let sinkless = connected(0, vec![BoundaryCircle::ClosedIn]);
    assert!(matches!(decompose(&sinkless), Err(occ_core::tqft::DecomposeError::NoOutgoing(0))));
}

#[test]
fn scalar_oracle_on_small_members() {
    let table = scalar_tft(3, [5, 7]);
    let bounds = FamilyBounds {
        circles: 3,
        ..FamilyBounds::default()
    };
    let kinds = family::circle_kinds(bounds.arcs);
    let mut checked = 0;
    for genus in 0..=2 {
        for a in 0..kinds.len() {
            for b in a..=kinds.len() {
                for c in b..=kinds.len() {
                    let circles: Vec<BoundaryCircle> =
                        [a, b, c].iter().filter(|&&k| k < kinds.len()).map(|&k| kinds[k].clone()).collect();
                    if b == kinds.len() && c != kinds.len() {
                        continue;
                    }
                    let cob = connected(genus, circles);
                    if !family::contains(&cob, bounds) {
                        continue;
                    }
                    let want = scalar_expected(&cob, 3, [5, 7]);
                    for opts in [DecomposeOptions::default(), DecomposeOptions::all()[15]] {
                        assert_eq!(scalar_value(&cob, &table, opts), want, "{}", family::describe(&cob.components[0]));
                    }
                    checked += 1;
                }
            }
        }
    }
    assert!(checked > 30_000, "{checked}");
}

fn member_strategy() -> impl Strategy<Value = Cobordism> {
    let kinds = family::circle_kinds(6);
    let n = kinds.len();
    (0u32..=2, prop::collection::vec(0..n, 1..=5)).prop_filter_map("outside the family", move |(g, ks)| {
        let c = connected(g, ks.iter().map(|&k| kinds[k].clone()).collect());
        family::contains(&c, FamilyBounds::default()).then_some(c)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn decompositions_agree_up_to_sign(c in member_strategy()) {
        let table = scalar_tft(2, [3, 5]);
        let want = scalar_expected(&c, 2, [3, 5]);
        for d in [2, 3] {
            let shadow = ShadowAssignment::new(d, 2, &branes());
            let base = evaluate(&c, &shadow).unwrap();
            for opts in DecomposeOptions::all() {
                let dec = decompose_with(&c, &names(), opts).unwrap();
                let m = evaluate_decomposition(&dec, &shadow).unwrap();
                prop_assert!(m.equal_up_to_sign(&base).is_some(), "{opts:?}: {m} vs {base}");
                prop_assert_eq!(scalar_value(&c, &table, opts), want);
            }
        }
    }

    #[test]
    fn shadow_maps_are_homogeneous(c in member_strategy()) {
        for d in [1, 2, 3] {
            let m = evaluate(&c, &ShadowAssignment::new(d, 2, &branes())).unwrap();
            prop_assert!(m.degree_shifts().len() <= 1);
        }
    }
}

fn fixture_pairs() -> Vec<(&'static str, Cobordism, Cobordism, SewPlan)> {
    use BoundaryCircle::{ClosedIn as In, ClosedOut as Out};
    let strip = connected(0, vec![BoundaryCircle::mixed([Arc::free("K"), Arc::OpenIn, Arc::free("L"), Arc::OpenOut])]);
    vec![
        (
            "coproduct then product",
            connected(0, vec![In, Out, Out]),
            connected(0, vec![In, In, Out]),
            SewPlan {
                closed_pairs: vec![(1, 0), (2, 1)],
                open_pairs: vec![],
            },
        ),
        (
            "window cup into pants",
            connected(0, vec![BoundaryCircle::window("K"), Out]),
            connected(0, vec![In, In, Out]),
            SewPlan {
                closed_pairs: vec![(1, 1)],
                open_pairs: vec![],
            },
        ),
        (
            "strip then strip",
            strip.clone(),
            strip,
            SewPlan {
                closed_pairs: vec![],
                open_pairs: vec![(ArcRef { circle: 0, arc: 3 }, ArcRef { circle: 0, arc: 1 })],
            },
        ),
    ]
}

#[test]
fn sewing_fixtures() {
    for d in [2, 3] {
        let shadow = ShadowAssignment::new(d, 2, &branes());
        for (name, a, b, plan) in fixture_pairs() {
            let check = check_sewing(&a, &b, &plan, &shadow).unwrap();
            assert!(check.passed(), "{name}:\n{check}");
        }
    }
    let (_, a, b, plan) = &fixture_pairs()[0];
    let check = check_sewing(a, b, plan, &ShadowAssignment::new(2, 2, &branes())).unwrap();
    assert!(check.direct.is_zero());
    assert_eq!(check.sewn.components[0].genus, 1);
    let (_, a, b, plan) = &fixture_pairs()[1];
    let check = check_sewing(a, b, plan, &ShadowAssignment::new(2, 2, &branes())).unwrap();
    assert_eq!(check.direct.to_string(), "u ↦ 2·c");
}

#[test]
fn random_sewings_are_functorial() {
    let pairs = family::random_composable_pairs(150, 7, FamilyBounds::default());
    // sewing can close free arcs into new windows; a consistent scalar
    // theory gives windows weight one (a window cup is a cozipper after an
    // open unit)
    let table = scalar_tft(3, [1, 1]);
    for (k, (a, b, plan)) in pairs.iter().enumerate() {
        for d in [2, 3] {
            let check = check_sewing(a, b, plan, &ShadowAssignment::new(d, 2, &branes())).unwrap();
            assert!(check.passed(), "pair {k} d={d} {plan:?}:\n{check}");
        }
        let check = check_sewing(a, b, plan, &table).unwrap();
        assert!(check.passed(), "pair {k} scalar {plan:?}:\n{check}");
    }
}

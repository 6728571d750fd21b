//! Composition of cobordisms by sewing outgoing strings of one surface to
//! incoming strings of another.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::surface::{
    euler_char, open_endpoints, Arc, BoundaryCircle, Cobordism, Component, OpenStringEndpoints,
    StringRef,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ArcRef {
    pub circle: usize,
    pub arc: usize,
}

impl fmt::Display for ArcRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.circle, self.arc)
    }
}

/// Which circles and arcs to identify. Circle indices are global file-order
/// indices of the respective cobordism.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SewPlan {
    pub closed_pairs: Vec<(usize, usize)>,
    pub open_pairs: Vec<(ArcRef, ArcRef)>,
}

impl SewPlan {
    pub fn is_empty(&self) -> bool {
        self.closed_pairs.is_empty() && self.open_pairs.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    A,
    B,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::A => "first",
            Side::B => "second",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SewError {
    #[error("plan mismatch: {0}")]
    PlanMismatch(String),
    #[error("brane {0} is declared with different data in the two cobordisms")]
    BraneConflict(String),
    #[error("boundary tracing produced non-integral genus in result component {component} (chi={chi}, circles={circles})")]
    NonIntegerGenus {
        component: usize,
        chi: i64,
        circles: usize,
    },
    #[error("incompatible profiles: {0}")]
    IncompatibleProfiles(String),
}

/// Where a string of the sewn cobordism came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Origin {
    pub side: Side,
    pub circle: usize,
    pub arc: Option<usize>,
}

/// A sewn cobordism together with the origin of every surviving string.
#[derive(Debug, Clone)]
pub struct Sewn {
    pub cobordism: Cobordism,
    /// per result circle: for closed circles the origin of the circle, for
    /// mixed circles the origin of each open arc (free arcs map to `None`)
    pub circle_origins: Vec<CircleOrigin>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CircleOrigin {
    Closed(Origin),
    Window,
    Arcs(Vec<Option<Origin>>),
}

impl Sewn {
    /// Origin of a string of the result.
    pub fn origin(&self, s: &StringRef) -> Origin {
        match (s, &self.circle_origins[s.circle()]) {
            (StringRef::Closed { .. }, CircleOrigin::Closed(o)) => *o,
            (StringRef::Open { arc, .. }, CircleOrigin::Arcs(arcs)) => {
                arcs[*arc].expect("open arc has an origin")
            }
            _ => unreachable!("string kind disagrees with provenance"),
        }
    }
}

struct Checked {
    branes: crate::surface::BraneTable,
    closed_a: BTreeSet<usize>,
    closed_b: BTreeSet<usize>,
    partner: BTreeMap<(Side, usize, usize), (Side, usize, usize)>,
}

fn mismatch(msg: String) -> SewError {
    SewError::PlanMismatch(msg)
}

fn check_plan(a: &Cobordism, b: &Cobordism, plan: &SewPlan) -> Result<Checked, SewError> {
    let branes = a
        .branes
        .merge(&b.branes)
        .map_err(|l| SewError::BraneConflict(l.name))?;
    let circles_a: Vec<_> = a.circles().collect();
    let circles_b: Vec<_> = b.circles().collect();
    let mut closed_a = BTreeSet::new();
    let mut closed_b = BTreeSet::new();
    for &(ca, cb) in &plan.closed_pairs {
        let ka = circles_a
            .get(ca)
            .ok_or_else(|| mismatch(format!("first cobordism has no circle {ca}")))?;
        let kb = circles_b
            .get(cb)
            .ok_or_else(|| mismatch(format!("second cobordism has no circle {cb}")))?;
        if *ka.circle != BoundaryCircle::ClosedOut {
            return Err(mismatch(format!("circle {ca} of the first cobordism is not an outgoing closed string")));
        }
        if *kb.circle != BoundaryCircle::ClosedIn {
            return Err(mismatch(format!("circle {cb} of the second cobordism is not an incoming closed string")));
        }
        if !closed_a.insert(ca) {
            return Err(mismatch(format!("circle {ca} of the first cobordism used twice")));
        }
        if !closed_b.insert(cb) {
            return Err(mismatch(format!("circle {cb} of the second cobordism used twice")));
        }
    }
    let mut partner = BTreeMap::new();
    let arc_of = |c: &Cobordism, side: Side, r: ArcRef, want: Arc| -> Result<OpenStringEndpoints, SewError> {
        let circle = c
            .circle(r.circle)
            .ok_or_else(|| mismatch(format!("{side} cobordism has no circle {}", r.circle)))?;
        let BoundaryCircle::Mixed(arcs) = circle.circle else {
            return Err(mismatch(format!("{side} cobordism circle {} carries no open strings", r.circle)));
        };
        match arcs.get(r.arc) {
            Some(arc) if *arc == want => {}
            Some(_) => {
                let dir = if want == Arc::OpenOut { "outgoing" } else { "incoming" };
                return Err(mismatch(format!("{side} cobordism arc {r} is not an {dir} open string")));
            }
            None => return Err(mismatch(format!("{side} cobordism has no arc {r}"))),
        }
        open_endpoints(arcs, r.arc)
            .ok_or_else(|| mismatch(format!("{side} cobordism arc {r} is not flanked by free arcs")))
    };
    for &(ra, rb) in &plan.open_pairs {
        let ea = arc_of(a, Side::A, ra, Arc::OpenOut)?;
        let eb = arc_of(b, Side::B, rb, Arc::OpenIn)?;
        if ea != eb {
            return Err(mismatch(format!(
                "open string {ra} has endpoints {ea} but {rb} has endpoints {eb}"
            )));
        }
        let ka = (Side::A, ra.circle, ra.arc);
        let kb = (Side::B, rb.circle, rb.arc);
        if partner.contains_key(&ka) {
            return Err(mismatch(format!("arc {ra} of the first cobordism used twice")));
        }
        if partner.contains_key(&kb) {
            return Err(mismatch(format!("arc {rb} of the second cobordism used twice")));
        }
        partner.insert(ka, kb);
        partner.insert(kb, ka);
    }
    Ok(Checked {
        branes,
        closed_a,
        closed_b,
        partner,
    })
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        Self((0..n).collect())
    }
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }
    fn union(&mut self, x: usize, y: usize) {
        let (rx, ry) = (self.find(x), self.find(y));
        if rx != ry {
            self.0[rx.max(ry)] = rx.min(ry);
        }
    }
}

/// Collapse adjacent free arcs (which must carry equal labels) in a cyclic
/// word. A word that keeps no open arc becomes a window.
fn collapse(word: Vec<(Arc, Option<Origin>)>) -> (BoundaryCircle, CircleOrigin) {
    let mut out: Vec<(Arc, Option<Origin>)> = Vec::with_capacity(word.len());
    for item in word {
        match (out.last(), &item.0) {
            (Some((Arc::Free(prev), _)), Arc::Free(next)) => {
                debug_assert_eq!(prev, next, "sewn free arcs must carry equal labels");
            }
            _ => out.push(item),
        }
    }
    while out.len() > 1 {
        match (&out[0].0, &out[out.len() - 1].0) {
            (Arc::Free(x), Arc::Free(y)) => {
                debug_assert_eq!(x, y);
                out.pop();
            }
            _ => break,
        }
    }
    if out.iter().any(|(a, _)| a.is_open()) {
        let (arcs, origins) = out.into_iter().unzip();
        (BoundaryCircle::Mixed(arcs), CircleOrigin::Arcs(origins))
    } else {
        let label = out.first().and_then(|(a, _)| a.label().map(String::from));
        (BoundaryCircle::Window(label), CircleOrigin::Window)
    }
}

/// Sew `b` onto `a` along `plan`, keeping track of string provenance.
pub fn sew_traced(a: &Cobordism, b: &Cobordism, plan: &SewPlan) -> Result<Sewn, SewError> {
    let checked = check_plan(a, b, plan)?;
    let na = a.circle_count();
    let comps_a = a.components.len();
    let side_cobordism = |side: Side| if side == Side::A { a } else { b };
    // Combined circle and component numbering: a first, then b.
    let mut circle_comp = Vec::new();
    let mut circle_data: Vec<(Side, usize, &BoundaryCircle)> = Vec::new();
    for (side, c, offset) in [(Side::A, a, 0), (Side::B, b, comps_a)] {
        for cref in c.circles() {
            circle_comp.push(cref.component + offset);
            circle_data.push((side, cref.index, cref.circle));
        }
    }
    let combined = |side: Side, circle: usize| if side == Side::A { circle } else { na + circle };
    let mut uf = UnionFind::new(comps_a + b.components.len());
    for &(ca, cb) in &plan.closed_pairs {
        uf.union(circle_comp[ca], circle_comp[na + cb]);
    }
    for (&(sa, ca, _), &(sb, cb, _)) in &checked.partner {
        uf.union(circle_comp[combined(sa, ca)], circle_comp[combined(sb, cb)]);
    }
    let touched: BTreeSet<usize> = checked
        .partner
        .keys()
        .map(|&(s, c, _)| combined(s, c))
        .collect();

    // (root, circle, origin) in discovery order
    let mut found: Vec<(usize, BoundaryCircle, CircleOrigin)> = Vec::new();
    let mut visited: BTreeSet<(Side, usize, usize)> = BTreeSet::new();
    let arcs_of = |side: Side, circle: usize| -> &[Arc] {
        match side_cobordism(side).circle(circle).map(|c| c.circle) {
            Some(BoundaryCircle::Mixed(arcs)) => arcs,
            _ => unreachable!("traced circle is mixed"),
        }
    };
    for (k, &(side, circle, data)) in circle_data.iter().enumerate() {
        let glued_closed = match side {
            Side::A => checked.closed_a.contains(&circle),
            Side::B => checked.closed_b.contains(&circle),
        };
        if glued_closed {
            continue;
        }
        let root = uf.find(circle_comp[k]);
        if !touched.contains(&k) {
            let origin = match data {
                BoundaryCircle::ClosedIn | BoundaryCircle::ClosedOut => CircleOrigin::Closed(Origin {
                    side,
                    circle,
                    arc: None,
                }),
                BoundaryCircle::Window(_) => CircleOrigin::Window,
                BoundaryCircle::Mixed(arcs) => CircleOrigin::Arcs(
                    arcs.iter()
                        .enumerate()
                        .map(|(ai, arc)| {
                            arc.is_open().then_some(Origin {
                                side,
                                circle,
                                arc: Some(ai),
                            })
                        })
                        .collect(),
                ),
            };
            found.push((root, data.clone(), origin));
            continue;
        }
        let arcs = arcs_of(side, circle);
        for start in 0..arcs.len() {
            let key = (side, circle, start);
            if visited.contains(&key) || checked.partner.contains_key(&key) {
                continue;
            }
            let mut word = Vec::new();
            let mut pos = key;
            loop {
                visited.insert(pos);
                let arc = arcs_of(pos.0, pos.1)[pos.2].clone();
                let origin = arc.is_open().then_some(Origin {
                    side: pos.0,
                    circle: pos.1,
                    arc: Some(pos.2),
                });
                word.push((arc, origin));
                let step = |p: (Side, usize, usize)| {
                    let len = arcs_of(p.0, p.1).len();
                    (p.0, p.1, (p.2 + 1) % len)
                };
                let mut next = step(pos);
                while let Some(&other) = checked.partner.get(&next) {
                    next = step(other);
                }
                if next == key {
                    break;
                }
                debug_assert!(!visited.contains(&next), "boundary trace revisited an arc");
                pos = next;
            }
            let (bc, origin) = collapse(word);
            found.push((root, bc, origin));
        }
    }

    // Group by component; order components by their smallest input circle.
    let mut first_circle: BTreeMap<usize, usize> = BTreeMap::new();
    for (k, &comp) in circle_comp.iter().enumerate() {
        let root = uf.find(comp);
        first_circle.entry(root).or_insert(k);
    }
    let mut roots: Vec<usize> = first_circle.keys().copied().collect();
    roots.sort_by_key(|r| first_circle[r]);

    let mut chi: BTreeMap<usize, i64> = BTreeMap::new();
    for (ci, comp) in a.components.iter().enumerate() {
        *chi.entry(uf.find(ci)).or_default() += euler_char(comp);
    }
    for (ci, comp) in b.components.iter().enumerate() {
        *chi.entry(uf.find(comps_a + ci)).or_default() += euler_char(comp);
    }
    for &(ra, _) in &plan.open_pairs {
        let k = combined(Side::A, ra.circle);
        *chi.entry(uf.find(circle_comp[k])).or_default() -= 1;
    }

    let mut components = Vec::with_capacity(roots.len());
    let mut circle_origins = Vec::new();
    for (index, root) in roots.iter().enumerate() {
        let mut circles = Vec::new();
        for (r, bc, origin) in &found {
            if r == root {
                circles.push(bc.clone());
                circle_origins.push(origin.clone());
            }
        }
        let x = chi[root];
        let twice_genus = 2 - x - circles.len() as i64;
        if twice_genus < 0 || twice_genus % 2 != 0 {
            debug_assert!(false, "non-integral genus after sewing");
            return Err(SewError::NonIntegerGenus {
                component: index,
                chi: x,
                circles: circles.len(),
            });
        }
        components.push(Component::new((twice_genus / 2) as u32, circles));
    }
    Ok(Sewn {
        cobordism: Cobordism::new(checked.branes, components),
        circle_origins,
    })
}

/// Glue `b` onto `a` along `plan`.
pub fn sew(a: &Cobordism, b: &Cobordism, plan: &SewPlan) -> Result<Cobordism, SewError> {
    sew_traced(a, b, plan).map(|s| s.cobordism)
}

/// The boundary circles of the sewn surface, in result order.
pub fn trace_boundaries(
    a: &Cobordism,
    b: &Cobordism,
    plan: &SewPlan,
) -> Result<Vec<BoundaryCircle>, SewError> {
    let sewn = sew_traced(a, b, plan)?;
    Ok(sewn
        .cobordism
        .components
        .into_iter()
        .flat_map(|c| c.circles)
        .collect())
}

/// The plan that glues every outgoing string of `a` to an incoming string of
/// `b`: closed strings pair up by index order, open strings pair each
/// outgoing arc with the first unused incoming arc carrying the same
/// endpoints.
pub fn full_plan(a: &Cobordism, b: &Cobordism) -> Result<SewPlan, SewError> {
    let outs = a.outgoing_strings();
    let ins = b.incoming_strings();
    let closed_out: Vec<usize> = outs
        .iter()
        .filter(|&s| matches!(s, StringRef::Closed { .. })).map(|s| s.circle())
        .collect();
    let closed_in: Vec<usize> = ins
        .iter()
        .filter(|&s| matches!(s, StringRef::Closed { .. })).map(|s| s.circle())
        .collect();
    if closed_out.len() != closed_in.len() {
        return Err(SewError::IncompatibleProfiles(format!(
            "{} outgoing closed strings against {} incoming",
            closed_out.len(),
            closed_in.len()
        )));
    }
    let open_in: Vec<(ArcRef, &OpenStringEndpoints)> = ins
        .iter()
        .filter_map(|s| match s {
            StringRef::Open { circle, arc, ends } => Some((
                ArcRef {
                    circle: *circle,
                    arc: *arc,
                },
                ends,
            )),
            _ => None,
        })
        .collect();
    let mut used = vec![false; open_in.len()];
    let mut open_pairs = Vec::new();
    for s in &outs {
        if let StringRef::Open { circle, arc, ends } = s {
            let slot = open_in
                .iter()
                .enumerate()
                .position(|(k, (_, e))| !used[k] && *e == ends)
                .ok_or_else(|| {
                    SewError::IncompatibleProfiles(format!(
                        "no incoming open string {ends} for outgoing arc {circle}.{arc}"
                    ))
                })?;
            used[slot] = true;
            open_pairs.push((
                ArcRef {
                    circle: *circle,
                    arc: *arc,
                },
                open_in[slot].0,
            ));
        }
    }
    if let Some(k) = used.iter().position(|u| !u) {
        return Err(SewError::IncompatibleProfiles(format!(
            "incoming open string {} {} left unmatched",
            open_in[k].0, open_in[k].1
        )));
    }
    Ok(SewPlan {
        closed_pairs: closed_out.into_iter().zip(closed_in).collect(),
        open_pairs,
    })
}

/// Categorical composition: `b ∘ a`, every output of `a` feeding `b`.
pub fn compose(a: &Cobordism, b: &Cobordism) -> Result<Cobordism, SewError> {
    let plan = full_plan(a, b)?;
    sew(a, b, &plan)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{canonical_key, invariants, BraneLabel, BraneTable, CobordismInvariants};

    fn branes() -> BraneTable {
        BraneTable::from_labels([
            BraneLabel::new("I", 0, 1),
            BraneLabel::new("J", 1, 0),
            BraneLabel::new("K", 0, 2),
        ])
    }

    fn single(genus: u32, circles: Vec<BoundaryCircle>) -> Cobordism {
        Cobordism::new(branes(), vec![Component::new(genus, circles)])
    }

    fn strip() -> Cobordism {
        single(
            0,
            vec![BoundaryCircle::mixed([Arc::free("I"), Arc::OpenIn, Arc::free("J"), Arc::OpenOut])],
        )
    }

    fn open_window() -> Cobordism {
        single(
            0,
            vec![
                BoundaryCircle::mixed([Arc::free("I"), Arc::OpenIn, Arc::free("K"), Arc::OpenOut]),
                BoundaryCircle::window("J"),
            ],
        )
    }

    fn coproduct() -> Cobordism {
        single(
            0,
            vec![BoundaryCircle::ClosedIn, BoundaryCircle::ClosedOut, BoundaryCircle::ClosedOut],
        )
    }

    fn pants() -> Cobordism {
        single(
            0,
            vec![BoundaryCircle::ClosedIn, BoundaryCircle::ClosedIn, BoundaryCircle::ClosedOut],
        )
    }

    fn cylinder() -> Cobordism {
        single(0, vec![BoundaryCircle::ClosedIn, BoundaryCircle::ClosedOut])
    }

    fn open_pair(ca: usize, aa: usize, cb: usize, ab: usize) -> (ArcRef, ArcRef) {
        (ArcRef { circle: ca, arc: aa }, ArcRef { circle: cb, arc: ab })
    }

    #[test]
    fn coproduct_then_product_is_a_torus() {
        let plan = SewPlan {
            closed_pairs: vec![(1, 0), (2, 1)],
            open_pairs: vec![],
        };
        let t = sew(&coproduct(), &pants(), &plan).unwrap();
        assert_eq!(invariants(&t), vec![CobordismInvariants::new(1, 0, 1, 1, 0, 0, 0)]);
        assert_eq!(t.euler_char(), -2);
    }

    #[test]
    fn single_closed_gluing_keeps_genus_zero() {
        let plan = SewPlan {
            closed_pairs: vec![(1, 0)],
            open_pairs: vec![],
        };
        let t = sew(&coproduct(), &pants(), &plan).unwrap();
        assert_eq!(invariants(&t), vec![CobordismInvariants::new(0, 0, 2, 2, 0, 0, 0)]);
        assert_eq!(
            trace_boundaries(&coproduct(), &pants(), &plan).unwrap(),
            vec![
                BoundaryCircle::ClosedIn,
                BoundaryCircle::ClosedOut,
                BoundaryCircle::ClosedIn,
                BoundaryCircle::ClosedOut
            ]
        );
    }

    #[test]
    fn strip_composed_with_strip_is_a_strip() {
        let plan = SewPlan {
            closed_pairs: vec![],
            open_pairs: vec![open_pair(0, 3, 0, 1)],
        };
        let circles = trace_boundaries(&strip(), &strip(), &plan).unwrap();
        assert_eq!(
            circles,
            vec![BoundaryCircle::mixed([Arc::free("I"), Arc::OpenIn, Arc::free("J"), Arc::OpenOut])]
        );
        let s = sew(&strip(), &strip(), &plan).unwrap();
        assert_eq!(canonical_key(&s), canonical_key(&strip()));
    }

    #[test]
    fn open_windows_sewn_along_open_string() {
        let plan = SewPlan {
            closed_pairs: vec![],
            open_pairs: vec![open_pair(0, 3, 0, 1)],
        };
        let s = sew(&open_window(), &open_window(), &plan).unwrap();
        assert_eq!(invariants(&s), vec![CobordismInvariants::new(0, 2, 0, 0, 0, 0, 1)]);
        assert_eq!(s.components[0].circles.len(), 3);
        assert_eq!(s.euler_char(), -1);
    }

    #[test]
    fn exhausting_open_arcs_leaves_a_window() {
        // disc emitting one open string, sewn into a disc absorbing it
        let unit = single(0, vec![BoundaryCircle::mixed([Arc::free("K"), Arc::OpenOut])]);
        let cap = single(
            0,
            vec![BoundaryCircle::mixed([Arc::free("K"), Arc::OpenIn]), BoundaryCircle::ClosedOut],
        );
        let plan = SewPlan {
            closed_pairs: vec![],
            open_pairs: vec![open_pair(0, 1, 0, 1)],
        };
        let circles = trace_boundaries(&unit, &cap, &plan).unwrap();
        assert_eq!(circles, vec![BoundaryCircle::window("K"), BoundaryCircle::ClosedOut]);
    }

    #[test]
    fn two_strands_between_the_same_circles() {
        // saddle followed by its reverse saddle: the double saddle annulus
        let s1 = single(
            0,
            vec![BoundaryCircle::mixed([
                Arc::free("I"),
                Arc::OpenIn,
                Arc::free("J"),
                Arc::OpenOut,
                Arc::free("K"),
                Arc::OpenIn,
                Arc::free("L"),
                Arc::OpenOut,
            ])],
        );
        let s2 = single(
            0,
            vec![BoundaryCircle::mixed([
                Arc::free("I"),
                Arc::OpenIn,
                Arc::free("L"),
                Arc::OpenOut,
                Arc::free("K"),
                Arc::OpenIn,
                Arc::free("J"),
                Arc::OpenOut,
            ])],
        );
        let mut s1 = s1;
        s1.branes.push(BraneLabel::new("L", 0, 0));
        let mut s2 = s2;
        s2.branes.push(BraneLabel::new("L", 0, 0));
        let plan = full_plan(&s1, &s2).unwrap();
        assert_eq!(plan.open_pairs.len(), 2);
        let d = sew(&s1, &s2, &plan).unwrap();
        assert_eq!(invariants(&d), vec![CobordismInvariants::new(0, 0, 0, 0, 0, 0, 2)]);
    }

    #[test]
    fn identity_is_neutral() {
        let x = pants();
        let y = compose(&x, &cylinder()).unwrap();
        assert_eq!(canonical_key(&y), canonical_key(&x));
        let x = coproduct();
        let c = compose(&cylinder(), &x).unwrap();
        assert_eq!(canonical_key(&c), canonical_key(&x));
        let y = compose(&x, &pants()).unwrap();
        assert_eq!(y.components[0].genus, 1);
        let x = pants();
        let y = compose(&x, &cylinder()).unwrap();
        assert_eq!(canonical_key(&y), canonical_key(&x));
        let z = compose(&strip(), &strip()).unwrap();
        assert_eq!(canonical_key(&z), canonical_key(&strip()));
    }

    #[test]
    fn mismatched_labels_are_incompatible() {
        let other = single(
            0,
            vec![BoundaryCircle::mixed([Arc::free("I"), Arc::OpenIn, Arc::free("K"), Arc::OpenOut])],
        );
        assert!(matches!(compose(&strip(), &other), Err(SewError::IncompatibleProfiles(_))));
        assert!(matches!(compose(&pants(), &pants()), Err(SewError::IncompatibleProfiles(_))));
    }

    #[test]
    fn plan_errors() {
        let bad_kind = SewPlan {
            closed_pairs: vec![(0, 0)],
            open_pairs: vec![],
        };
        assert!(matches!(sew(&coproduct(), &pants(), &bad_kind), Err(SewError::PlanMismatch(_))));
        let dup = SewPlan {
            closed_pairs: vec![(1, 0), (1, 1)],
            open_pairs: vec![],
        };
        assert!(matches!(sew(&coproduct(), &pants(), &dup), Err(SewError::PlanMismatch(_))));
        let out_of_range = SewPlan {
            closed_pairs: vec![(7, 0)],
            open_pairs: vec![],
        };
        assert!(matches!(sew(&coproduct(), &pants(), &out_of_range), Err(SewError::PlanMismatch(_))));
        let in_to_in = SewPlan {
            closed_pairs: vec![],
            open_pairs: vec![open_pair(0, 1, 0, 1)],
        };
        assert!(matches!(sew(&strip(), &strip(), &in_to_in), Err(SewError::PlanMismatch(_))));
        let dup_arc = SewPlan {
            closed_pairs: vec![],
            open_pairs: vec![open_pair(0, 3, 0, 1), open_pair(0, 3, 0, 1)],
        };
        assert!(matches!(sew(&strip(), &strip(), &dup_arc), Err(SewError::PlanMismatch(_))));
        let mut conflicting = strip();
        conflicting.branes = BraneTable::from_labels([BraneLabel::new("I", 2, 2), BraneLabel::new("J", 1, 0)]);
        let plan = SewPlan {
            closed_pairs: vec![],
            open_pairs: vec![open_pair(0, 3, 0, 1)],
        };
        assert!(matches!(sew(&strip(), &conflicting, &plan), Err(SewError::BraneConflict(_))));
    }

    #[test]
    fn disconnected_inputs_keep_untouched_components() {
        let mut a = coproduct();
        a.components.push(Component::new(2, vec![BoundaryCircle::ClosedOut]));
        let plan = SewPlan {
            closed_pairs: vec![(1, 0)],
            open_pairs: vec![],
        };
        let r = sew(&a, &pants(), &plan).unwrap();
        assert_eq!(r.components.len(), 2);
        assert_eq!(r.components[1].genus, 2);
        // χ additivity with no open pairs
        assert_eq!(r.euler_char(), a.euler_char() + pants().euler_char());
    }

    #[test]
    fn sewing_is_associative_on_fixtures() {
        // φ, then μ on one leg, then the identity: both bracketings agree.
        let a = coproduct();
        let b = pants();
        let c = cylinder();
        let ab = sew(&a, &b, &SewPlan { closed_pairs: vec![(1, 0), (2, 1)], open_pairs: vec![] }).unwrap();
        let left = sew(&ab, &c, &SewPlan { closed_pairs: vec![(1, 0)], open_pairs: vec![] }).unwrap();
        let bc = sew(&b, &c, &SewPlan { closed_pairs: vec![(2, 0)], open_pairs: vec![] }).unwrap();
        let right = sew(&a, &bc, &SewPlan { closed_pairs: vec![(1, 0), (2, 1)], open_pairs: vec![] }).unwrap();
        assert_eq!(canonical_key(&left), canonical_key(&right));

        let w = open_window();
        let plan = SewPlan { closed_pairs: vec![], open_pairs: vec![open_pair(0, 3, 0, 1)] };
        let ww = sew(&w, &w, &plan).unwrap();
        let left = sew(&ww, &strip_ik(), &SewPlan { closed_pairs: vec![], open_pairs: vec![out_arc(&ww)] }).unwrap();
        let wstrip = sew(&w, &strip_ik(), &plan).unwrap();
        let right = sew(&w, &wstrip, &plan).unwrap();
        assert_eq!(canonical_key(&left), canonical_key(&right));
    }

    fn strip_ik() -> Cobordism {
        single(
            0,
            vec![BoundaryCircle::mixed([Arc::free("I"), Arc::OpenIn, Arc::free("K"), Arc::OpenOut])],
        )
    }

    fn out_arc(c: &Cobordism) -> (ArcRef, ArcRef) {
        let s = c
            .outgoing_strings()
            .into_iter()
            .find_map(|s| match s {
                StringRef::Open { circle, arc, .. } => Some(ArcRef { circle, arc }),
                _ => None,
            })
            .unwrap();
        (s, ArcRef { circle: 0, arc: 1 })
    }
}

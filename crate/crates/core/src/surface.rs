//! Combinatorial model of open-closed cobordisms.
//!
//! A cobordism is a list of connected components. Each component is an
//! orientable surface of some genus whose boundary circles are either closed
//! strings (incoming or outgoing), windows (free circles, optionally labeled
//! by a brane), or mixed circles that alternate free arcs and open strings.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

/// A D-brane: a closed oriented submanifold where open strings may end.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct BraneLabel {
    pub name: String,
    pub dim: u32,
    pub chi: i64,
}

impl BraneLabel {
    pub fn new(name: impl Into<String>, dim: u32, chi: i64) -> Self {
        Self {
            name: name.into(),
            dim,
            chi,
        }
    }
}

/// Brane declarations in file order. Duplicates are representable so that
/// [`validate`] can report them.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BraneTable {
    labels: Vec<BraneLabel>,
}

impl BraneTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_labels(labels: impl IntoIterator<Item = BraneLabel>) -> Self {
        Self {
            labels: labels.into_iter().collect(),
        }
    }

    pub fn push(&mut self, label: BraneLabel) {
        self.labels.push(label);
    }

    pub fn get(&self, name: &str) -> Option<&BraneLabel> {
        self.labels.iter().find(|l| l.name == name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.get(name).is_some()
    }

    pub fn iter(&self) -> impl Iterator<Item = &BraneLabel> {
        self.labels.iter()
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Union of two tables. A name declared in both must carry the same data.
    pub fn merge(&self, other: &BraneTable) -> Result<BraneTable, BraneLabel> {
        let mut out = self.clone();
        for label in other.iter() {
            match out.get(&label.name) {
                Some(existing) if existing != label => return Err(label.clone()),
                Some(_) => {}
                None => out.push(label.clone()),
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Arc {
    Free(String),
    OpenIn,
    OpenOut,
}

impl Arc {
    pub fn free(name: impl Into<String>) -> Self {
        Arc::Free(name.into())
    }

    pub fn is_open(&self) -> bool {
        matches!(self, Arc::OpenIn | Arc::OpenOut)
    }

    pub fn label(&self) -> Option<&str> {
        match self {
            Arc::Free(name) => Some(name),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BoundaryCircle {
    ClosedIn,
    ClosedOut,
    Window(Option<String>),
    Mixed(Vec<Arc>),
}

/// Classification of a mixed circle by the direction of its open strings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MixedKind {
    /// only incoming open strings (counted by `r`)
    Incoming,
    /// only outgoing open strings (counted by `s`)
    Outgoing,
    /// both (counted by `t`)
    Both,
}

impl BoundaryCircle {
    pub fn window(label: &str) -> Self {
        BoundaryCircle::Window(Some(label.to_string()))
    }

    pub fn mixed(arcs: impl IntoIterator<Item = Arc>) -> Self {
        BoundaryCircle::Mixed(arcs.into_iter().collect())
    }

    pub fn mixed_kind(&self) -> Option<MixedKind> {
        let BoundaryCircle::Mixed(arcs) = self else {
            return None;
        };
        let has_in = arcs.contains(&Arc::OpenIn);
        let has_out = arcs.contains(&Arc::OpenOut);
        match (has_in, has_out) {
            (true, true) => Some(MixedKind::Both),
            (true, false) => Some(MixedKind::Incoming),
            (false, true) => Some(MixedKind::Outgoing),
            (false, false) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub genus: u32,
    pub circles: Vec<BoundaryCircle>,
}

impl Component {
    pub fn new(genus: u32, circles: impl IntoIterator<Item = BoundaryCircle>) -> Self {
        Self {
            genus,
            circles: circles.into_iter().collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Cobordism {
    pub branes: BraneTable,
    pub components: Vec<Component>,
}

impl Cobordism {
    pub fn new(branes: BraneTable, components: Vec<Component>) -> Self {
        Self { branes, components }
    }

    /// Every circle with its component index and global (file-order) index.
    pub fn circles(&self) -> impl Iterator<Item = CircleRef<'_>> {
        self.components
            .iter()
            .enumerate()
            .flat_map(|(ci, comp)| comp.circles.iter().map(move |c| (ci, c)))
            .enumerate()
            .map(|(index, (component, circle))| CircleRef {
                index,
                component,
                circle,
            })
    }

    pub fn circle(&self, index: usize) -> Option<CircleRef<'_>> {
        self.circles().nth(index)
    }

    pub fn circle_count(&self) -> usize {
        self.components.iter().map(|c| c.circles.len()).sum()
    }

    /// Global index of the first circle of each component.
    pub fn circle_offsets(&self) -> Vec<usize> {
        let mut offsets = Vec::with_capacity(self.components.len());
        let mut acc = 0;
        for comp in &self.components {
            offsets.push(acc);
            acc += comp.circles.len();
        }
        offsets
    }

    pub fn euler_char(&self) -> i64 {
        self.components.iter().map(euler_char).sum()
    }

    /// Incoming strings in profile order: closed circles and open-in arcs,
    /// sorted by (circle, arc).
    pub fn incoming_strings(&self) -> Vec<StringRef> {
        self.strings(true)
    }

    /// Outgoing strings in profile order.
    pub fn outgoing_strings(&self) -> Vec<StringRef> {
        self.strings(false)
    }

    fn strings(&self, incoming: bool) -> Vec<StringRef> {
        let mut out = Vec::new();
        for c in self.circles() {
            match c.circle {
                BoundaryCircle::ClosedIn if incoming => out.push(StringRef::Closed {
                    circle: c.index,
                }),
                BoundaryCircle::ClosedOut if !incoming => out.push(StringRef::Closed {
                    circle: c.index,
                }),
                BoundaryCircle::Mixed(arcs) => {
                    let want = if incoming { Arc::OpenIn } else { Arc::OpenOut };
                    for (ai, arc) in arcs.iter().enumerate() {
                        if *arc == want {
                            let ends = open_endpoints(arcs, ai).expect("open arc");
                            out.push(StringRef::Open {
                                circle: c.index,
                                arc: ai,
                                ends,
                            });
                        }
                    }
                }
                _ => {}
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy)]
pub struct CircleRef<'a> {
    pub index: usize,
    pub component: usize,
    pub circle: &'a BoundaryCircle,
}

/// A closed or open string on the boundary, addressed in file coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StringRef {
    Closed {
        circle: usize,
    },
    Open {
        circle: usize,
        arc: usize,
        ends: OpenStringEndpoints,
    },
}

impl StringRef {
    pub fn circle(&self) -> usize {
        match self {
            StringRef::Closed { circle } | StringRef::Open { circle, .. } => *circle,
        }
    }
}

/// The brane pair `(source, target)` of an open string, i.e. the `(I, J)`
/// of the path space it lives in.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct OpenStringEndpoints {
    pub source: String,
    pub target: String,
}

impl fmt::Display for OpenStringEndpoints {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.source, self.target)
    }
}

/// Endpoints of the open arc at `index` of a well-formed mixed circle.
///
/// Walking the circle in stored order, an incoming string runs from the
/// preceding free arc to the following one. Boundary orientation reverses
/// along outgoing strings, so an outgoing string runs from the following free
/// arc to the preceding one. With this rule an outgoing string of one surface
/// and the incoming string it is sewn to carry the same pair.
pub fn open_endpoints(arcs: &[Arc], index: usize) -> Option<OpenStringEndpoints> {
    let n = arcs.len();
    if n < 2 || index >= n {
        return None;
    }
    let prev = arcs[(index + n - 1) % n].label()?.to_string();
    let next = arcs[(index + 1) % n].label()?.to_string();
    match arcs[index] {
        Arc::OpenIn => Some(OpenStringEndpoints {
            source: prev,
            target: next,
        }),
        Arc::OpenOut => Some(OpenStringEndpoints {
            source: next,
            target: prev,
        }),
        Arc::Free(_) => None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Location {
    pub component: usize,
    pub circle: usize,
    pub arc: Option<usize>,
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "component {} circle {}", self.component, self.circle)?;
        if let Some(arc) = self.arc {
            write!(f, " arc {arc}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Violation {
    DuplicateBrane { name: String },
    UnknownBrane { location: Location, name: String },
    EmptyComponent { component: usize },
    EmptyMixed { location: Location },
    OddMixedLength { location: Location, len: usize },
    AlternationViolation { location: Location },
    MixedWithoutOpenArc { location: Location },
    PositiveBoundaryViolation { component: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateBrane { name } => write!(f, "brane {name} declared twice"),
            Violation::UnknownBrane { location, name } => {
                write!(f, "{location}: unknown brane {name}")
            }
            Violation::EmptyComponent { component } => {
                write!(f, "component {component} has no boundary circles")
            }
            Violation::EmptyMixed { location } => write!(f, "{location}: empty arc list"),
            Violation::OddMixedLength { location, len } => {
                write!(f, "{location}: arc list has odd length {len}")
            }
            Violation::AlternationViolation { location } => {
                write!(f, "{location}: free and open arcs do not alternate")
            }
            Violation::MixedWithoutOpenArc { location } => {
                write!(f, "{location}: arc list has no open string")
            }
            Violation::PositiveBoundaryViolation { component } => write!(
                f,
                "component {component} has no outgoing string (q+s+t must be at least 1)"
            ),
        }
    }
}

/// Every violated invariant of `c`; an empty list means `c` is valid.
pub fn validate(c: &Cobordism) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for label in c.branes.iter() {
        if !seen.insert(label.name.as_str()) {
            out.push(Violation::DuplicateBrane {
                name: label.name.clone(),
            });
        }
    }
    let mut structural_ok = vec![true; c.components.len()];
    for (ci, comp) in c.components.iter().enumerate() {
        if comp.circles.is_empty() {
            out.push(Violation::EmptyComponent { component: ci });
            structural_ok[ci] = false;
        }
    }
    for cref in c.circles() {
        let loc = |arc| Location {
            component: cref.component,
            circle: cref.index,
            arc,
        };
        match cref.circle {
            BoundaryCircle::Window(Some(name)) if !c.branes.contains(name) => {
                out.push(Violation::UnknownBrane {
                    location: loc(None),
                    name: name.clone(),
                });
            }
            BoundaryCircle::Mixed(arcs) => {
                for (ai, arc) in arcs.iter().enumerate() {
                    if let Arc::Free(name) = arc {
                        if !c.branes.contains(name) {
                            out.push(Violation::UnknownBrane {
                                location: loc(Some(ai)),
                                name: name.clone(),
                            });
                        }
                    }
                }
                let before = out.len();
                check_mixed(arcs, &loc, &mut out);
                if out.len() > before {
                    structural_ok[cref.component] = false;
                }
            }
            _ => {}
        }
    }
    // The positive-boundary count is only meaningful on well-formed circles.
    for (ci, comp) in c.components.iter().enumerate() {
        if structural_ok[ci] {
            let inv = component_invariants(comp);
            if inv.q + inv.s + inv.t == 0 {
                out.push(Violation::PositiveBoundaryViolation { component: ci });
            }
        }
    }
    out
}

fn check_mixed(arcs: &[Arc], loc: &dyn Fn(Option<usize>) -> Location, out: &mut Vec<Violation>) {
    let n = arcs.len();
    if n == 0 {
        out.push(Violation::EmptyMixed {
            location: loc(None),
        });
        return;
    }
    if n % 2 == 1 {
        out.push(Violation::OddMixedLength {
            location: loc(None),
            len: n,
        });
        return;
    }
    if let Some(i) = (0..n).find(|&i| arcs[i].is_open() == arcs[(i + 1) % n].is_open()) {
        out.push(Violation::AlternationViolation {
            location: loc(Some(i)),
        });
        return;
    }
    if !arcs.iter().any(Arc::is_open) {
        out.push(Violation::MixedWithoutOpenArc {
            location: loc(None),
        });
    }
}

/// The homeomorphism invariants `(g, ω, p, q, r, s, t)` of a connected
/// component.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct CobordismInvariants {
    pub g: u32,
    pub omega: u32,
    pub p: u32,
    pub q: u32,
    pub r: u32,
    pub s: u32,
    pub t: u32,
}

impl CobordismInvariants {
    pub fn new(g: u32, omega: u32, p: u32, q: u32, r: u32, s: u32, t: u32) -> Self {
        Self {
            g,
            omega,
            p,
            q,
            r,
            s,
            t,
        }
    }

    pub fn as_array(&self) -> [u32; 7] {
        [self.g, self.omega, self.p, self.q, self.r, self.s, self.t]
    }

    pub fn circle_count(&self) -> u32 {
        self.omega + self.p + self.q + self.r + self.s + self.t
    }
}

impl fmt::Display for CobordismInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(g={},w={},p={},q={},r={},s={},t={})",
            self.g, self.omega, self.p, self.q, self.r, self.s, self.t
        )
    }
}

pub fn component_invariants(comp: &Component) -> CobordismInvariants {
    let mut inv = CobordismInvariants {
        g: comp.genus,
        ..Default::default()
    };
    for circle in &comp.circles {
        match circle {
            BoundaryCircle::ClosedIn => inv.p += 1,
            BoundaryCircle::ClosedOut => inv.q += 1,
            BoundaryCircle::Window(_) => inv.omega += 1,
            BoundaryCircle::Mixed(_) => match circle.mixed_kind() {
                Some(MixedKind::Incoming) => inv.r += 1,
                Some(MixedKind::Outgoing) => inv.s += 1,
                Some(MixedKind::Both) => inv.t += 1,
                None => {}
            },
        }
    }
    inv
}

/// One invariant tuple per component, in component order.
pub fn invariants(c: &Cobordism) -> Vec<CobordismInvariants> {
    c.components.iter().map(component_invariants).collect()
}

/// `χ = 2 − 2g − b` for a component with `b` boundary circles.
pub fn euler_char(comp: &Component) -> i64 {
    2 - 2 * i64::from(comp.genus) - comp.circles.len() as i64
}

/// Totals of the seven invariants over all components.
pub fn total_invariants(c: &Cobordism) -> CobordismInvariants {
    invariants(c)
        .into_iter()
        .fold(CobordismInvariants::default(), |acc, x| CobordismInvariants {
            g: acc.g + x.g,
            omega: acc.omega + x.omega,
            p: acc.p + x.p,
            q: acc.q + x.q,
            r: acc.r + x.r,
            s: acc.s + x.s,
            t: acc.t + x.t,
        })
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum CircleKey {
    ClosedIn,
    ClosedOut,
    Window(Option<String>),
    Mixed(Vec<Arc>),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct ComponentKey {
    genus: u32,
    circles: Vec<CircleKey>,
}

/// A normal form that identifies presentations differing only by rotating arc
/// words, reordering circles within a component, or reordering components.
/// Only brane labels that are actually referenced take part.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalKey {
    branes: Vec<BraneLabel>,
    components: Vec<ComponentKey>,
}

/// Lexicographically least rotation of a cyclic word.
pub fn min_rotation<T: Ord + Clone>(word: &[T]) -> Vec<T> {
    let n = word.len();
    (0..n.max(1))
        .map(|k| {
            word.iter()
                .cycle()
                .skip(k)
                .take(n)
                .cloned()
                .collect::<Vec<_>>()
        })
        .min()
        .unwrap_or_default()
}

pub fn canonical_key(c: &Cobordism) -> CanonicalKey {
    let mut used = BTreeSet::new();
    let mut components: Vec<ComponentKey> = c
        .components
        .iter()
        .map(|comp| {
            let mut circles: Vec<CircleKey> = comp
                .circles
                .iter()
                .map(|circle| match circle {
                    BoundaryCircle::ClosedIn => CircleKey::ClosedIn,
                    BoundaryCircle::ClosedOut => CircleKey::ClosedOut,
                    BoundaryCircle::Window(label) => {
                        if let Some(l) = label {
                            used.insert(l.clone());
                        }
                        CircleKey::Window(label.clone())
                    }
                    BoundaryCircle::Mixed(arcs) => {
                        used.extend(arcs.iter().filter_map(|a| a.label().map(String::from)));
                        CircleKey::Mixed(min_rotation(arcs))
                    }
                })
                .collect();
            circles.sort();
            ComponentKey {
                genus: comp.genus,
                circles,
            }
        })
        .collect();
    components.sort();
    let mut branes: Vec<BraneLabel> = used
        .iter()
        .map(|name| {
            c.branes
                .get(name)
                .cloned()
                .unwrap_or_else(|| BraneLabel::new(name.clone(), 0, 0))
        })
        .collect();
    branes.sort();
    CanonicalKey { branes, components }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let branes: Vec<String> = self
            .branes
            .iter()
            .map(|b| format!("{}:{}:{}", b.name, b.dim, b.chi))
            .collect();
        write!(f, "branes[{}]", branes.join(","))?;
        for comp in &self.components {
            write!(f, " | g{}", comp.genus)?;
            for circle in &comp.circles {
                match circle {
                    CircleKey::ClosedIn => write!(f, " ci")?,
                    CircleKey::ClosedOut => write!(f, " co")?,
                    CircleKey::Window(None) => write!(f, " w")?,
                    CircleKey::Window(Some(l)) => write!(f, " w{l}")?,
                    CircleKey::Mixed(arcs) => {
                        write!(f, " [")?;
                        for arc in arcs {
                            match arc {
                                Arc::Free(l) => write!(f, "{l}")?,
                                Arc::OpenIn => write!(f, ">")?,
                                Arc::OpenOut => write!(f, "<")?,
                            }
                        }
                        write!(f, "]")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Counts of each brane label over free arcs and windows; used by reports.
pub fn label_usage(c: &Cobordism) -> BTreeMap<String, usize> {
    let mut out = BTreeMap::new();
    for cref in c.circles() {
        match cref.circle {
            BoundaryCircle::Window(Some(l)) => *out.entry(l.clone()).or_default() += 1,
            BoundaryCircle::Mixed(arcs) => {
                for l in arcs.iter().filter_map(Arc::label) {
                    *out.entry(l.to_string()).or_default() += 1;
                }
            }
            _ => {}
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn branes() -> BraneTable {
        BraneTable::from_labels([
            BraneLabel::new("I", 0, 1),
            BraneLabel::new("J", 1, 0),
            BraneLabel::new("K", 0, 2),
        ])
    }

    fn one(genus: u32, circles: Vec<BoundaryCircle>) -> Cobordism {
        Cobordism::new(branes(), vec![Component::new(genus, circles)])
    }

    fn fig6() -> Cobordism {
        one(
            0,
            vec![
                BoundaryCircle::mixed([Arc::free("I"), Arc::OpenIn, Arc::free("K"), Arc::OpenOut]),
                BoundaryCircle::window("J"),
            ],
        )
    }

    #[test]
    fn identity_cylinder_is_valid() {
        let c = one(0, vec![BoundaryCircle::ClosedIn, BoundaryCircle::ClosedOut]);
        assert!(validate(&c).is_empty());
    }

    #[test]
    fn cap_without_outgoing_string_violates_positive_boundary() {
        let c = one(0, vec![BoundaryCircle::ClosedIn]);
        assert_eq!(
            validate(&c),
            vec![Violation::PositiveBoundaryViolation { component: 0 }]
        );
    }

    #[test]
    fn adjacent_free_arcs_violate_alternation() {
        let c = one(
            0,
            vec![BoundaryCircle::mixed([
                Arc::free("I"),
                Arc::free("J"),
                Arc::OpenIn,
                Arc::OpenOut,
            ])],
        );
        let v = validate(&c);
        assert_eq!(v.len(), 1);
        assert!(matches!(v[0], Violation::AlternationViolation { .. }));
    }

    #[test]
    fn structural_violations_are_reported() {
        let mut c = one(0, vec![BoundaryCircle::mixed([Arc::free("Z"), Arc::OpenOut, Arc::free("I")])]);
        c.branes.push(BraneLabel::new("I", 3, 0));
        c.components.push(Component::new(0, vec![]));
        c.components.push(Component::new(
            0,
            vec![BoundaryCircle::Mixed(vec![]), BoundaryCircle::mixed([Arc::free("I"), Arc::free("I")])],
        ));
        let v = validate(&c);
        assert!(v.contains(&Violation::DuplicateBrane { name: "I".into() }));
        assert!(v.iter().any(|x| matches!(x, Violation::UnknownBrane { name, .. } if name == "Z")));
        assert!(v.iter().any(|x| matches!(x, Violation::OddMixedLength { len: 3, .. })));
        assert!(v.contains(&Violation::EmptyComponent { component: 1 }));
        assert!(v.iter().any(|x| matches!(x, Violation::EmptyMixed { .. })));
        assert!(v.iter().any(|x| matches!(x, Violation::AlternationViolation { .. })));
    }

    #[test]
    fn invariants_of_reference_surfaces() {
        let torus = one(1, vec![BoundaryCircle::ClosedIn, BoundaryCircle::ClosedOut]);
        assert_eq!(invariants(&torus), vec![CobordismInvariants::new(1, 0, 1, 1, 0, 0, 0)]);
        assert_eq!(invariants(&fig6()), vec![CobordismInvariants::new(0, 1, 0, 0, 0, 0, 1)]);
        let disc = one(0, vec![BoundaryCircle::mixed([Arc::free("I"), Arc::OpenOut])]);
        assert_eq!(invariants(&disc), vec![CobordismInvariants::new(0, 0, 0, 0, 0, 1, 0)]);
    }

    #[test]
    fn euler_characteristics() {
        let pants = Component::new(
            0,
            vec![BoundaryCircle::ClosedIn, BoundaryCircle::ClosedIn, BoundaryCircle::ClosedOut],
        );
        assert_eq!(euler_char(&pants), -1);
        let torus = Component::new(1, vec![BoundaryCircle::ClosedIn, BoundaryCircle::ClosedOut]);
        assert_eq!(euler_char(&torus), -2);
        let strip = Component::new(
            0,
            vec![BoundaryCircle::mixed([Arc::free("I"), Arc::OpenIn, Arc::free("J"), Arc::OpenOut])],
        );
        assert_eq!(euler_char(&strip), 1);
    }

    #[test]
    fn endpoints_follow_boundary_orientation() {
        let saddle = [
            Arc::free("I"),
            Arc::OpenIn,
            Arc::free("J"),
            Arc::OpenOut,
            Arc::free("K"),
            Arc::OpenIn,
            Arc::free("L"),
            Arc::OpenOut,
        ];
        let ends = |i| {
            let e = open_endpoints(&saddle, i).unwrap();
            (e.source, e.target)
        };
        assert_eq!(ends(1), ("I".into(), "J".into()));
        assert_eq!(ends(5), ("K".into(), "L".into()));
        assert_eq!(ends(7), ("I".into(), "L".into()));
        assert_eq!(ends(3), ("K".into(), "J".into()));
        assert_eq!(open_endpoints(&saddle, 0), None);
    }

    #[test]
    fn rotation_and_permutation_preserve_key() {
        let a = one(
            0,
            vec![BoundaryCircle::mixed([Arc::free("I"), Arc::OpenIn, Arc::free("J"), Arc::OpenOut])],
        );
        let b = one(
            0,
            vec![BoundaryCircle::mixed([Arc::free("J"), Arc::OpenOut, Arc::free("I"), Arc::OpenIn])],
        );
        assert_eq!(canonical_key(&a), canonical_key(&b));

        let x = Component::new(1, vec![BoundaryCircle::ClosedIn, BoundaryCircle::ClosedOut]);
        let y = Component::new(0, vec![BoundaryCircle::ClosedOut]);
        let c1 = Cobordism::new(branes(), vec![x.clone(), y.clone()]);
        let c2 = Cobordism::new(branes(), vec![y, x]);
        assert_eq!(canonical_key(&c1), canonical_key(&c2));
    }

    #[test]
    fn type_one_and_type_two_keys_differ() {
        let type1 = one(0, vec![BoundaryCircle::window("K"), BoundaryCircle::ClosedOut]);
        let type2 = one(0, vec![BoundaryCircle::ClosedIn, BoundaryCircle::ClosedOut]);
        assert_ne!(invariants(&type1), invariants(&type2));
        assert_ne!(canonical_key(&type1), canonical_key(&type2));
    }

    #[test]
    fn window_label_is_part_of_key() {
        let a = one(0, vec![BoundaryCircle::window("K"), BoundaryCircle::ClosedOut]);
        let b = one(0, vec![BoundaryCircle::window("I"), BoundaryCircle::ClosedOut]);
        assert_ne!(canonical_key(&a), canonical_key(&b));
    }

    #[test]
    fn brane_merge_rejects_conflicts() {
        let a = branes();
        let ok = BraneTable::from_labels([BraneLabel::new("K", 0, 2), BraneLabel::new("L", 1, 0)]);
        assert_eq!(a.merge(&ok).unwrap().len(), 4);
        let bad = BraneTable::from_labels([BraneLabel::new("K", 1, 2)]);
        assert_eq!(a.merge(&bad).unwrap_err().name, "K");
    }

    #[test]
    fn polygon_oracle_matches_formula_on_fixtures() {
        let strip = BoundaryCircle::mixed([Arc::free("I"), Arc::OpenIn, Arc::free("J"), Arc::OpenOut]);
        let fixtures = vec![
            Component::new(0, vec![BoundaryCircle::ClosedOut]),
            Component::new(0, vec![BoundaryCircle::ClosedIn, BoundaryCircle::ClosedOut]),
            Component::new(1, vec![BoundaryCircle::ClosedIn, BoundaryCircle::ClosedOut]),
            Component::new(2, vec![BoundaryCircle::window("K")]),
            Component::new(0, vec![strip.clone()]),
            Component::new(1, vec![strip.clone(), BoundaryCircle::window("J"), BoundaryCircle::ClosedOut]),
            Component::new(0, vec![strip.clone(), strip]),
            Component::new(
                3,
                vec![BoundaryCircle::ClosedIn, BoundaryCircle::ClosedIn, BoundaryCircle::ClosedOut],
            ),
        ];
        for comp in &fixtures {
            assert_eq!(crate::cells::component_euler_char(comp), euler_char(comp), "{comp:?}");
        }
    }

    fn arb_circle() -> impl Strategy<Value = BoundaryCircle> {
        let label = prop::sample::select(vec!["I", "J", "K"]);
        let open = prop::bool::ANY.prop_map(|b| if b { Arc::OpenIn } else { Arc::OpenOut });
        let mixed = prop::collection::vec((label.clone(), open), 1..4).prop_map(|pairs| {
            BoundaryCircle::Mixed(
                pairs
                    .into_iter()
                    .flat_map(|(l, o)| [Arc::free(l), o])
                    .collect(),
            )
        });
        prop_oneof![
            Just(BoundaryCircle::ClosedIn),
            Just(BoundaryCircle::ClosedOut),
            label.prop_map(BoundaryCircle::window),
            mixed,
        ]
    }

    fn arb_component() -> impl Strategy<Value = Component> {
        (0u32..3, prop::collection::vec(arb_circle(), 1..6)).prop_map(|(g, c)| Component::new(g, c))
    }

    fn rotate_and_shuffle(c: &Cobordism, seed: usize) -> Cobordism {
        let mut out = c.clone();
        for (ci, comp) in out.components.iter_mut().enumerate() {
            for (k, circle) in comp.circles.iter_mut().enumerate() {
                if let BoundaryCircle::Mixed(arcs) = circle {
                    let by = (seed + k + ci) % arcs.len();
                    arcs.rotate_left(by);
                }
            }
            let by = (seed + ci) % comp.circles.len();
            comp.circles.rotate_left(by);
            if seed % 2 == 1 {
                comp.circles.reverse();
            }
        }
        let by = seed % out.components.len();
        out.components.rotate_left(by);
        out
    }

    proptest! {
        #[test]
        fn counts_partition_circles(comp in arb_component()) {
            let inv = component_invariants(&comp);
            prop_assert_eq!(inv.circle_count() as usize, comp.circles.len());
            let mixed = comp.circles.iter().filter(|c| matches!(c, BoundaryCircle::Mixed(_))).count();
            prop_assert_eq!((inv.r + inv.s + inv.t) as usize, mixed);
            prop_assert_eq!(crate::cells::component_euler_char(&comp), euler_char(&comp));
        }

        #[test]
        fn symmetries_preserve_key_and_invariants(
            comps in prop::collection::vec(arb_component(), 1..4),
            seed in 0usize..64,
        ) {
            let c = Cobordism::new(branes(), comps);
            let d = rotate_and_shuffle(&c, seed);
            prop_assert_eq!(canonical_key(&c), canonical_key(&d));
            let mut a = invariants(&c);
            let mut b = invariants(&d);
            a.sort();
            b.sort();
            prop_assert_eq!(a, b);
            prop_assert_eq!(c.euler_char(), d.euler_char());
        }
    }
}

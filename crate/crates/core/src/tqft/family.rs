//! The bounded family of connected cobordisms over the brane table
//! `{K: dim 0, χ 2; L: dim 1, χ 0}` and the classifier soundness sweep.
//!
//! A member is a genus together with a multiset of circle kinds. Kinds are
//! the closed in/out circles, a window per brane, and alternating
//! free/open arc words (up to rotation) of length 2, 4 or 6.

use std::cmp::Ordering;
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use smallvec::SmallVec;

use super::assignment::{Assignment, BoundAssignment, ShadowAssignment};
use super::decompose::{decompose_views, ComponentView, Decomposition};
use super::eval::{run, vanishes, OperationMatrix};
use crate::classifier::{classify_component, BType, DimensionFlags, VanishingVerdict};
use crate::par::{self, Exec};
use crate::sewing::{ArcRef, SewPlan};
use crate::surface::{
    component_invariants, open_endpoints, Arc, BoundaryCircle, BraneLabel, BraneTable, Cobordism,
    CobordismInvariants, Component,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FamilyBounds {
    pub genus: u32,
    pub windows: u32,
    pub circles: usize,
    /// arcs per mixed circle, free and open together
    pub arcs: usize,
    pub d: u32,
    pub chi_m: i64,
}

impl Default for FamilyBounds {
    fn default() -> Self {
        Self {
            genus: 2,
            windows: 2,
            circles: 5,
            arcs: 6,
            d: 2,
            chi_m: 2,
        }
    }
}

pub fn brane_table() -> BraneTable {
    BraneTable::from_labels([BraneLabel::new("K", 0, 2), BraneLabel::new("L", 1, 0)])
}

const LABELS: [&str; 2] = ["K", "L"];

/// Every circle kind with at most `arcs` arcs, in a fixed order.
pub fn circle_kinds(arcs: usize) -> Vec<BoundaryCircle> {
    let mut kinds = vec![BoundaryCircle::ClosedIn, BoundaryCircle::ClosedOut];
    kinds.extend(LABELS.iter().map(|l| BoundaryCircle::window(l)));
    // symbol = label * 2 + (0 in, 1 out)
    for n in 1..=arcs / 2 {
        let total = 4usize.pow(n as u32);
        for code in 0..total {
            let word: Vec<usize> = (0..n).map(|k| (code / 4usize.pow((n - 1 - k) as u32)) % 4).collect();
            let least_rotation = (1..n).all(|r| {
                let rotated: Vec<usize> = word[r..].iter().chain(&word[..r]).copied().collect();
                rotated >= word
            });
            if !least_rotation {
                continue;
            }
            kinds.push(BoundaryCircle::mixed(word.iter().flat_map(|&sym| {
                let dir = if sym % 2 == 0 { Arc::OpenIn } else { Arc::OpenOut };
                [Arc::free(LABELS[sym / 2]), dir]
            })));
        }
    }
    kinds
}

fn describe_circle(c: &BoundaryCircle) -> String {
    match c {
        BoundaryCircle::ClosedIn => "in".into(),
        BoundaryCircle::ClosedOut => "out".into(),
        BoundaryCircle::Window(l) => format!("window {}", l.as_deref().unwrap_or("?")),
        BoundaryCircle::Mixed(arcs) => {
            let parts: Vec<&str> = arcs
                .iter()
                .map(|a| match a {
                    Arc::Free(l) => l.as_str(),
                    Arc::OpenIn => "in",
                    Arc::OpenOut => "out",
                })
                .collect();
            format!("[{}]", parts.join(" "))
        }
    }
}

/// One-line description of a connected cobordism, e.g. `g=1: in, window K`.
pub fn describe(comp: &Component) -> String {
    let parts: Vec<String> = comp.circles.iter().map(describe_circle).collect();
    format!("g={}: {}", comp.genus, parts.join(", "))
}

/// A family member: genus and nondecreasing kind indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Member {
    pub genus: u32,
    pub kinds: Vec<u8>,
}

impl Member {
    /// Enumeration order used to pick witnesses: fewer circles first.
    fn order_key(&self) -> (usize, u32, &[u8]) {
        (self.kinds.len(), self.genus, &self.kinds)
    }

    pub fn component(&self, kinds: &[BoundaryCircle]) -> Component {
        Component::new(self.genus, self.kinds.iter().map(|&k| kinds[k as usize].clone()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub member: Member,
    pub description: String,
    pub tuple: CobordismInvariants,
    pub map: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SoundnessCounterexample {
    pub description: String,
    pub tuple: CobordismInvariants,
    pub verdict: String,
    pub map: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyReport {
    pub bounds: FamilyBounds,
    pub kinds: usize,
    pub cobordisms: u64,
    pub vanishing: u64,
    /// classifier survivors per type, I to V
    pub survivors: [u64; 5],
    /// survivors with a nonzero evaluation per type
    pub nonzero: [u64; 5],
    /// first nonzero survivor per type in enumeration order
    pub witnesses: [Option<Witness>; 5],
    pub counterexample_count: u64,
    /// at most [`COUNTEREXAMPLE_CAP`] examples
    pub counterexamples: Vec<SoundnessCounterexample>,
    /// verdicts other than vanishing or a type; none are expected
    pub unexpected: Vec<String>,
    pub decompose_failures: Vec<String>,
}

pub const COUNTEREXAMPLE_CAP: usize = 20;

impl FamilyReport {
    fn empty(bounds: FamilyBounds, kinds: usize) -> Self {
        Self {
            bounds,
            kinds,
            cobordisms: 0,
            vanishing: 0,
            survivors: [0; 5],
            nonzero: [0; 5],
            witnesses: Default::default(),
            counterexample_count: 0,
            counterexamples: Vec::new(),
            unexpected: Vec::new(),
            decompose_failures: Vec::new(),
        }
    }

    fn merge(mut self, other: Self) -> Self {
        self.cobordisms += other.cobordisms;
        self.vanishing += other.vanishing;
        for t in 0..5 {
            self.survivors[t] += other.survivors[t];
            self.nonzero[t] += other.nonzero[t];
        }
        for (mine, theirs) in self.witnesses.iter_mut().zip(other.witnesses) {
            *mine = match (mine.take(), theirs) {
                (Some(a), Some(b)) => Some(match a.member.order_key().cmp(&b.member.order_key()) {
                    Ordering::Greater => b,
                    _ => a,
                }),
                (a, b) => a.or(b),
            };
        }
        self.counterexample_count += other.counterexample_count;
        self.counterexamples.extend(other.counterexamples);
        self.counterexamples.truncate(COUNTEREXAMPLE_CAP);
        self.unexpected.extend(other.unexpected);
        self.decompose_failures.extend(other.decompose_failures);
        self
    }

    /// Soundness holds and every type has a nonzero instance.
    pub fn passed(&self) -> bool {
        self.counterexample_count == 0
            && self.unexpected.is_empty()
            && self.decompose_failures.is_empty()
            && self.nonzero.iter().all(|&n| n > 0)
    }
}

impl fmt::Display for FamilyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = &self.bounds;
        writeln!(
            f,
            "family: g<={}, windows<={}, circles<={}, arcs<={} ({} circle kinds); shadow d={}, chiM={}",
            b.genus, b.windows, b.circles, b.arcs, self.kinds, b.d, b.chi_m
        )?;
        writeln!(f, "cobordisms: {}", self.cobordisms)?;
        writeln!(f, "vanishing: {} (all evaluate to zero unless listed below)", self.vanishing)?;
        for (k, t) in BType::ALL.iter().enumerate() {
            write!(f, "type {t}: {} survivors, {} nonzero", self.survivors[k], self.nonzero[k])?;
            match &self.witnesses[k] {
                Some(w) => writeln!(f, "; witness {} : {}", w.description, w.map)?,
                None => writeln!(f, "; no witness")?,
            }
        }
        writeln!(f, "soundness counterexamples: {}", self.counterexample_count)?;
        for c in &self.counterexamples {
            writeln!(f, "  {} {} {}: {}", c.description, c.tuple, c.verdict, c.map)?;
        }
        for u in &self.unexpected {
            writeln!(f, "unexpected verdict: {u}")?;
        }
        for d in &self.decompose_failures {
            writeln!(f, "decomposition failed: {d}")?;
        }
        Ok(())
    }
}

/// Per-kind contributions; invariants add and dimension flags combine by
/// disjunction across circles.
struct KindData {
    tuple: CobordismInvariants,
    flags: DimensionFlags,
    window: bool,
    outgoing: bool,
}

struct Sweep<'a> {
    bounds: FamilyBounds,
    kinds: &'a [BoundaryCircle],
    data: Vec<KindData>,
    names: &'a [String],
    shadow: &'a ShadowAssignment,
}

impl<'a> Sweep<'a> {
    fn new(
        bounds: FamilyBounds,
        kinds: &'a [BoundaryCircle],
        branes: &BraneTable,
        names: &'a [String],
        shadow: &'a ShadowAssignment,
    ) -> Self {
        let data = kinds
            .iter()
            .map(|k| {
                let single = Component::new(0, [k.clone()]);
                KindData {
                    tuple: component_invariants(&single),
                    flags: DimensionFlags::compute(&single, branes, bounds.d),
                    window: matches!(k, BoundaryCircle::Window(_)),
                    outgoing: match k {
                        BoundaryCircle::ClosedOut => true,
                        BoundaryCircle::Mixed(arcs) => arcs.contains(&Arc::OpenOut),
                        _ => false,
                    },
                }
            })
            .collect();
        Self {
            bounds,
            kinds,
            data,
            names,
            shadow,
        }
    }

    fn summary(&self, member: &Member) -> (CobordismInvariants, DimensionFlags) {
        let mut x = CobordismInvariants {
            g: member.genus,
            ..Default::default()
        };
        let mut flags = DimensionFlags {
            open_label_below_d: false,
            mixed_label_below_d: false,
            outgoing_open_label_below_d: false,
        };
        for &k in &member.kinds {
            let d = &self.data[k as usize];
            x.omega += d.tuple.omega;
            x.p += d.tuple.p;
            x.q += d.tuple.q;
            x.r += d.tuple.r;
            x.s += d.tuple.s;
            x.t += d.tuple.t;
            flags.open_label_below_d |= d.flags.open_label_below_d;
            flags.mixed_label_below_d |= d.flags.mixed_label_below_d;
            flags.outgoing_open_label_below_d |= d.flags.outgoing_open_label_below_d;
        }
        (x, flags)
    }

    fn check(&self, member: &Member, report: &mut FamilyReport, bound: &dyn BoundAssignment) {
        let (tuple, flags) = self.summary(member);
        let verdict = classify_component(&tuple, &flags);
        report.cobordisms += 1;
        let circles: SmallVec<[&BoundaryCircle; 8]> = member.kinds.iter().map(|&k| &self.kinds[k as usize]).collect();
        let view = ComponentView {
            genus: member.genus,
            circles: &circles,
        };
        let describe_member = || describe(&member.component(self.kinds));
        let dec = match decompose_views(std::slice::from_ref(&view), self.names, Default::default()) {
            Ok(dec) => dec,
            Err(e) => {
                report.decompose_failures.push(format!("{}: {e}", describe_member()));
                return;
            }
        };
        match verdict {
            VanishingVerdict::Vanishes(rule) => {
                report.vanishing += 1;
                let zero = vanishes(&dec, bound).expect("shadow sectors are small");
                if !zero {
                    report.counterexample_count += 1;
                    if report.counterexamples.len() < COUNTEREXAMPLE_CAP {
                        let map = run(&dec, bound, false).expect("shadow sectors are small");
                        report.counterexamples.push(SoundnessCounterexample {
                            description: describe_member(),
                            tuple,
                            verdict: format!("vanishes by {rule:?}"),
                            map: map.to_string(),
                        });
                    }
                }
            }
            VanishingVerdict::PossiblyNontrivial(t) => {
                let k = t as usize;
                report.survivors[k] += 1;
                if !vanishes(&dec, bound).expect("shadow sectors are small") {
                    report.nonzero[k] += 1;
                    let better = report.witnesses[k]
                        .as_ref()
                        .is_none_or(|w| member.order_key() < w.member.order_key());
                    if better {
                        let map = run(&dec, bound, false).expect("shadow sectors are small");
                        report.witnesses[k] = Some(Witness {
                            member: member.clone(),
                            description: describe_member(),
                            tuple,
                            map: map.to_string(),
                        });
                    }
                }
            }
            other => report.unexpected.push(format!("{} {tuple}: {other:?}", describe_member())),
        }
    }

    /// All members of a genus whose smallest kind is `first`.
    fn task(&self, genus: u32, first: usize) -> FamilyReport {
        let mut report = FamilyReport::empty(self.bounds, self.kinds.len());
        let bound = self.shadow.bind(self.names);
        let mut member = Member {
            genus,
            kinds: vec![first as u8],
        };
        // depth-first over nondecreasing index sequences
        loop {
            let (windows, outgoing) = member.kinds.iter().fold((0, false), |(w, o), &k| {
                let d = &self.data[k as usize];
                (w + u32::from(d.window), o || d.outgoing)
            });
            if windows <= self.bounds.windows && outgoing {
                self.check(&member, &mut report, bound.as_ref());
            }
            if member.kinds.len() < self.bounds.circles {
                let last = *member.kinds.last().expect("nonempty");
                member.kinds.push(last);
                continue;
            }
            // advance to the next sequence
            loop {
                let top = member.kinds.pop().expect("nonempty") as usize;
                if member.kinds.is_empty() {
                    return report;
                }
                if top + 1 < self.kinds.len() {
                    member.kinds.push((top + 1) as u8);
                    break;
                }
            }
        }
    }
}

/// Enumerate the family, classify every member, evaluate it under the
/// shadow and compare.
pub fn check_classifier_consistency(bounds: FamilyBounds, exec: Exec) -> FamilyReport {
    let kinds = circle_kinds(bounds.arcs);
    let branes = brane_table();
    let names: Vec<String> = branes.iter().map(|b| b.name.clone()).collect();
    let shadow = ShadowAssignment::new(bounds.d, bounds.chi_m, &branes);
    let sweep = Sweep::new(bounds, &kinds, &branes, &names, &shadow);
    let per_genus = kinds.len();
    let tasks = (bounds.genus as usize + 1) * per_genus;
    par::map_reduce(
        exec,
        tasks,
        FamilyReport::empty(bounds, kinds.len()),
        |k| sweep.task((k / per_genus) as u32, k % per_genus),
        FamilyReport::merge,
    )
}

/// The five stated witnesses, one per type, as family members:
/// a window cup into one outgoing circle, a cap, a closed coproduct
/// cylinder, a disc with one outgoing open string and the open strip.
pub fn stated_witnesses() -> [(BType, Cobordism); 5] {
    let branes = brane_table();
    let one = |circles: Vec<BoundaryCircle>| Cobordism::new(branes.clone(), vec![Component::new(0, circles)]);
    [
        (BType::I, one(vec![BoundaryCircle::window("K"), BoundaryCircle::ClosedOut])),
        (BType::II, one(vec![BoundaryCircle::ClosedOut])),
        (
            BType::III,
            one(vec![BoundaryCircle::ClosedIn, BoundaryCircle::ClosedOut, BoundaryCircle::ClosedOut]),
        ),
        (BType::IV, one(vec![BoundaryCircle::mixed([Arc::free("K"), Arc::OpenOut])])),
        (
            BType::V,
            one(vec![BoundaryCircle::mixed([
                Arc::free("K"),
                Arc::OpenIn,
                Arc::free("L"),
                Arc::OpenOut,
            ])]),
        ),
    ]
}

/// Whether a connected cobordism over the family's branes lies in the
/// family: every circle is one of the kinds and the bounds hold.
pub fn contains(c: &Cobordism, bounds: FamilyBounds) -> bool {
    let kinds = circle_kinds(bounds.arcs);
    let [comp] = c.components.as_slice() else { return false };
    let x = component_invariants(comp);
    comp.genus <= bounds.genus
        && x.omega <= bounds.windows
        && comp.circles.len() <= bounds.circles
        && x.q + x.s + x.t >= 1
        && comp.circles.iter().all(|circle| {
            kinds.iter().any(|k| match (k, circle) {
                (BoundaryCircle::Mixed(a), BoundaryCircle::Mixed(b)) => {
                    a.len() == b.len() && (0..b.len()).any(|r| b[r..].iter().chain(&b[..r]).eq(a.iter()))
                }
                _ => k == circle,
            })
        })
}

/// Evaluate a decomposition under the family's shadow.
pub fn shadow_matrix(dec: &Decomposition, bounds: FamilyBounds) -> OperationMatrix {
    let shadow = ShadowAssignment::new(bounds.d, bounds.chi_m, &brane_table());
    super::eval::evaluate_decomposition(dec, &shadow).expect("shadow sectors are small")
}

fn random_member(rng: &mut ChaCha8Rng, kinds: &[BoundaryCircle], bounds: FamilyBounds) -> Cobordism {
    let branes = brane_table();
    loop {
        let n = rng.gen_range(1..=bounds.circles);
        let circles: Vec<BoundaryCircle> = (0..n).map(|_| kinds.choose(rng).expect("kinds").clone()).collect();
        let comp = Component::new(rng.gen_range(0..=bounds.genus), circles);
        let x = component_invariants(&comp);
        if x.omega <= bounds.windows && x.q + x.s + x.t >= 1 {
            return Cobordism::new(branes, vec![comp]);
        }
    }
}

/// Every pair (outgoing of `a`, incoming of `b`) that may be sewn, as one
/// plan. Pairs may overlap, so the plan is a candidate list only.
fn sewable(a: &Cobordism, b: &Cobordism) -> SewPlan {
    let mut closed = Vec::new();
    let mut open = Vec::new();
    for ca in a.circles() {
        for cb in b.circles() {
            match (ca.circle, cb.circle) {
                (BoundaryCircle::ClosedOut, BoundaryCircle::ClosedIn) => closed.push((ca.index, cb.index)),
                (BoundaryCircle::Mixed(x), BoundaryCircle::Mixed(y)) => {
                    for (i, arc) in x.iter().enumerate() {
                        if *arc != Arc::OpenOut {
                            continue;
                        }
                        for (j, brc) in y.iter().enumerate() {
                            if *brc == Arc::OpenIn && open_endpoints(x, i) == open_endpoints(y, j) {
                                open.push((
                                    ArcRef { circle: ca.index, arc: i },
                                    ArcRef { circle: cb.index, arc: j },
                                ));
                            }
                        }
                    }
                }
                _ => {}
            }
        }
    }
    SewPlan {
        closed_pairs: closed,
        open_pairs: open,
    }
}

/// `n` composable pairs of family members with nonempty random plans,
/// reproducible from `seed`.
pub fn random_composable_pairs(n: usize, seed: u64, bounds: FamilyBounds) -> Vec<(Cobordism, Cobordism, SewPlan)> {
    let kinds = circle_kinds(bounds.arcs);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let a = random_member(&mut rng, &kinds, bounds);
        let b = random_member(&mut rng, &kinds, bounds);
        let SewPlan {
            closed_pairs: mut closed,
            open_pairs: mut open,
        } = sewable(&a, &b);
        if closed.is_empty() && open.is_empty() {
            continue;
        }
        closed.shuffle(&mut rng);
        open.shuffle(&mut rng);
        let mut plan = SewPlan::default();
        for (x, y) in closed {
            let free = plan.closed_pairs.iter().all(|&(p, q)| p != x && q != y);
            if free && (plan.is_empty() || rng.gen_bool(0.5)) {
                plan.closed_pairs.push((x, y));
            }
        }
        for (x, y) in open {
            let free = plan.open_pairs.iter().all(|&(p, q)| p != x && q != y);
            if free && (plan.is_empty() || rng.gen_bool(0.5)) {
                plan.open_pairs.push((x, y));
            }
        }
        plan.closed_pairs.sort_unstable();
        plan.open_pairs.sort_unstable();
        out.push((a, b, plan));
    }
    out
}

//! Vanishing decision and five-type classification of connected
//! open-closed cobordisms, lifted to disconnected ones.

use std::fmt;

use serde::Serialize;

use crate::par::{self, Exec};
use crate::surface::{
    component_invariants, open_endpoints, Arc, BoundaryCircle, BraneTable, Cobordism,
    CobordismInvariants, Component, MixedKind,
};

/// The vanishing conditions, in evaluation order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum RuleId {
    GenusPositive,
    MultiWindow,
    MultiMixed,
    ThreeOutClosed,
    OutOpenOverflow,
    WindowWithOpen,
    WindowMultiOutClosed,
    MixedWithExtraOut,
}

impl RuleId {
    pub const ALL: [RuleId; 8] = [
        RuleId::GenusPositive,
        RuleId::MultiWindow,
        RuleId::MultiMixed,
        RuleId::ThreeOutClosed,
        RuleId::OutOpenOverflow,
        RuleId::WindowWithOpen,
        RuleId::WindowMultiOutClosed,
        RuleId::MixedWithExtraOut,
    ];

    pub fn citation(self) -> &'static str {
        match self {
            RuleId::GenusPositive => "rule I.i",
            RuleId::MultiWindow => "rule I.ii",
            RuleId::MultiMixed => "rule I.iii",
            RuleId::ThreeOutClosed => "rule I.iv",
            RuleId::OutOpenOverflow => "rule I.v",
            RuleId::WindowWithOpen => "rule II.i",
            RuleId::WindowMultiOutClosed => "rule II.ii",
            RuleId::MixedWithExtraOut => "rule III",
        }
    }

    pub fn condition(self) -> &'static str {
        match self {
            RuleId::GenusPositive => "g >= 1",
            RuleId::MultiWindow => "w >= 2",
            RuleId::MultiMixed => "t >= 2",
            RuleId::ThreeOutClosed => "q >= 3",
            RuleId::OutOpenOverflow => "s >= 1 and s + q >= 2",
            RuleId::WindowWithOpen => "g = 0, w = 1, r + s + t >= 1",
            RuleId::WindowMultiOutClosed => "g = 0, w = 1, r = s = t = 0, q >= 2",
            RuleId::MixedWithExtraOut => "g = 0, w = 0, t = 1, q + s >= 1",
        }
    }

    /// Whether the tuple meets the rule's topological condition.
    pub fn fires(self, x: &CobordismInvariants) -> bool {
        match self {
            RuleId::GenusPositive => x.g >= 1,
            RuleId::MultiWindow => x.omega >= 2,
            RuleId::MultiMixed => x.t >= 2,
            RuleId::ThreeOutClosed => x.q >= 3,
            RuleId::OutOpenOverflow => x.s >= 1 && x.s + x.q >= 2,
            RuleId::WindowWithOpen => x.g == 0 && x.omega == 1 && x.r + x.s + x.t >= 1,
            RuleId::WindowMultiOutClosed => {
                x.g == 0 && x.omega == 1 && x.r + x.s + x.t == 0 && x.q >= 2
            }
            RuleId::MixedWithExtraOut => x.g == 0 && x.omega == 0 && x.t == 1 && x.q + x.s >= 1,
        }
    }

    /// The dimension hypothesis the vanishing argument needs for this tuple.
    pub fn hypothesis(self, x: &CobordismInvariants) -> Option<Hypothesis> {
        match self {
            RuleId::MultiWindow if x.r + x.s + x.t >= 1 => Some(Hypothesis::OpenLabelBelowD),
            RuleId::WindowWithOpen => Some(Hypothesis::OpenLabelBelowD),
            RuleId::MultiMixed | RuleId::MixedWithExtraOut => Some(Hypothesis::MixedLabelBelowD),
            RuleId::OutOpenOverflow => Some(Hypothesis::OutgoingOpenLabelBelowD),
            _ => None,
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Hypothesis {
    /// some endpoint label of an open string has dimension below d
    OpenLabelBelowD,
    /// some label on a boundary circle with both incoming and outgoing open
    /// strings has dimension below d
    MixedLabelBelowD,
    /// some endpoint label of an outgoing open string has dimension below d
    OutgoingOpenLabelBelowD,
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Hypothesis::OpenLabelBelowD => "an open-string endpoint label of dimension < d",
            Hypothesis::MixedLabelBelowD => {
                "a label of dimension < d on a circle with incoming and outgoing open strings"
            }
            Hypothesis::OutgoingOpenLabelBelowD => {
                "an outgoing open-string endpoint label of dimension < d"
            }
        })
    }
}

/// Which dimension hypotheses hold for a component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DimensionFlags {
    pub open_label_below_d: bool,
    pub mixed_label_below_d: bool,
    pub outgoing_open_label_below_d: bool,
}

impl DimensionFlags {
    /// The standing regime: every brane has dimension below d.
    pub const ALL_BELOW: DimensionFlags = DimensionFlags {
        open_label_below_d: true,
        mixed_label_below_d: true,
        outgoing_open_label_below_d: true,
    };

    pub fn holds(&self, h: Hypothesis) -> bool {
        match h {
            Hypothesis::OpenLabelBelowD => self.open_label_below_d,
            Hypothesis::MixedLabelBelowD => self.mixed_label_below_d,
            Hypothesis::OutgoingOpenLabelBelowD => self.outgoing_open_label_below_d,
        }
    }

    /// Flags computed from the declared brane dimensions. Unknown labels
    /// never satisfy a hypothesis.
    pub fn compute(comp: &Component, branes: &BraneTable, d: u32) -> Self {
        let below = |name: &str| branes.get(name).is_some_and(|b| b.dim < d);
        let mut flags = DimensionFlags {
            open_label_below_d: false,
            mixed_label_below_d: false,
            outgoing_open_label_below_d: false,
        };
        for circle in &comp.circles {
            let BoundaryCircle::Mixed(arcs) = circle else { continue };
            for (k, arc) in arcs.iter().enumerate() {
                let Some(ends) = arc.is_open().then(|| open_endpoints(arcs, k)).flatten() else {
                    continue;
                };
                let hit = below(&ends.source) || below(&ends.target);
                flags.open_label_below_d |= hit;
                if *arc == Arc::OpenOut {
                    flags.outgoing_open_label_below_d |= hit;
                }
            }
            if circle.mixed_kind() == Some(MixedKind::Both) {
                flags.mixed_label_below_d |= arcs.iter().filter_map(Arc::label).any(below);
            }
        }
        flags
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum BType {
    I,
    II,
    III,
    IV,
    V,
}

impl BType {
    pub const ALL: [BType; 5] = [BType::I, BType::II, BType::III, BType::IV, BType::V];

    pub fn matches(self, x: &CobordismInvariants) -> bool {
        let closed_like = x.g == 0 && x.omega == 0 && x.s == 0 && x.t == 0;
        match self {
            BType::I => x.g == 0 && x.omega == 1 && x.q == 1 && x.r + x.s + x.t == 0,
            BType::II => closed_like && x.q == 1,
            BType::III => closed_like && x.q == 2,
            BType::IV => x.g == 0 && x.omega == 0 && x.q == 0 && x.s == 1 && x.t == 0,
            BType::V => x.g == 0 && x.omega == 0 && x.q == 0 && x.s == 0 && x.t == 1,
        }
    }

    pub fn citation(self) -> &'static str {
        match self {
            BType::I => "type I",
            BType::II => "type II",
            BType::III => "type III",
            BType::IV => "type IV",
            BType::V => "type V",
        }
    }
}

impl fmt::Display for BType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// A rule that fired but could not be applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Missing {
    pub rule: RuleId,
    pub hypothesis: Hypothesis,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum VanishingVerdict {
    Vanishes(RuleId),
    PossiblyNontrivial(BType),
    Inconclusive(Vec<Missing>),
    Invalid(String),
}

impl VanishingVerdict {
    pub fn kind(&self) -> &'static str {
        match self {
            VanishingVerdict::Vanishes(_) => "vanishes",
            VanishingVerdict::PossiblyNontrivial(_) => "possibly-nontrivial",
            VanishingVerdict::Inconclusive(_) => "inconclusive",
            VanishingVerdict::Invalid(_) => "invalid",
        }
    }

    pub fn rule(&self) -> Option<RuleId> {
        match self {
            VanishingVerdict::Vanishes(r) => Some(*r),
            _ => None,
        }
    }

    pub fn btype(&self) -> Option<BType> {
        match self {
            VanishingVerdict::PossiblyNontrivial(t) => Some(*t),
            _ => None,
        }
    }

    pub fn citation(&self) -> Option<&'static str> {
        match self {
            VanishingVerdict::Vanishes(r) => Some(r.citation()),
            VanishingVerdict::PossiblyNontrivial(t) => Some(t.citation()),
            _ => None,
        }
    }

    pub fn is_vanishing(&self) -> bool {
        matches!(self, VanishingVerdict::Vanishes(_))
    }
}

impl fmt::Display for VanishingVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VanishingVerdict::Vanishes(r) => {
                write!(f, "vanishes by {} [{}: {}]", r, r.citation(), r.condition())
            }
            VanishingVerdict::PossiblyNontrivial(t) => {
                write!(f, "possibly nontrivial, type {} [{}]", t, t.citation())
            }
            VanishingVerdict::Inconclusive(missing) => {
                f.write_str("inconclusive, missing")?;
                for (k, m) in missing.iter().enumerate() {
                    let sep = if k == 0 { " " } else { "; " };
                    write!(f, "{sep}{} for {} [{}]", m.hypothesis, m.rule, m.rule.citation())?;
                }
                Ok(())
            }
            VanishingVerdict::Invalid(reason) => write!(f, "invalid: {reason}"),
        }
    }
}

/// Classify a connected component from its invariants, trying rules in
/// `order`. A rule whose hypothesis fails does not stop the search: a later
/// rule may still prove vanishing outright.
pub fn classify_with_order(
    x: &CobordismInvariants,
    flags: &DimensionFlags,
    order: &[RuleId],
) -> VanishingVerdict {
    if x.q + x.s + x.t == 0 {
        return VanishingVerdict::Invalid("no outgoing string: q + s + t >= 1 violated".into());
    }
    let mut missing = Vec::new();
    for &rule in order {
        if !rule.fires(x) {
            continue;
        }
        match rule.hypothesis(x) {
            Some(h) if !flags.holds(h) => missing.push(Missing { rule, hypothesis: h }),
            _ => return VanishingVerdict::Vanishes(rule),
        }
    }
    if !missing.is_empty() {
        return VanishingVerdict::Inconclusive(missing);
    }
    let mut types = BType::ALL.into_iter().filter(|t| t.matches(x));
    match (types.next(), types.next()) {
        (Some(t), None) => VanishingVerdict::PossiblyNontrivial(t),
        (None, _) => VanishingVerdict::Invalid(format!("{x} escapes every rule and type")),
        (Some(a), Some(b)) => VanishingVerdict::Invalid(format!("{x} matches types {a} and {b}")),
    }
}

pub fn classify_component(x: &CobordismInvariants, flags: &DimensionFlags) -> VanishingVerdict {
    classify_with_order(x, flags, &RuleId::ALL)
}

/// How dimension hypotheses are decided.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum DimRegime {
    /// every brane is taken to have dimension below d
    #[default]
    AllBelow,
    /// hypotheses are checked against the declared brane dimensions
    Strict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentVerdict {
    pub component: usize,
    pub tuple: CobordismInvariants,
    pub verdict: VanishingVerdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum OverallVerdict {
    Invalid,
    Vanishes { component: usize, rule: RuleId },
    Inconclusive,
    PossiblyNontrivial(Vec<BType>),
}

impl fmt::Display for OverallVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OverallVerdict::Invalid => f.write_str("invalid"),
            OverallVerdict::Vanishes { component, rule } => {
                write!(f, "vanishes (component {component}, {rule})")
            }
            OverallVerdict::Inconclusive => f.write_str("inconclusive"),
            OverallVerdict::PossiblyNontrivial(types) => {
                f.write_str("possibly nontrivial, types ")?;
                for (k, t) in types.iter().enumerate() {
                    if k > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{t}")?;
                }
                Ok(())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub overall: OverallVerdict,
    pub components: Vec<ComponentVerdict>,
}

/// Overall verdict of a tensor product of component operations. An invalid
/// component makes the whole cobordism invalid.
pub fn combine(components: &[ComponentVerdict]) -> OverallVerdict {
    if components
        .iter()
        .any(|c| matches!(c.verdict, VanishingVerdict::Invalid(_)))
    {
        return OverallVerdict::Invalid;
    }
    if let Some(c) = components.iter().find(|c| c.verdict.is_vanishing()) {
        return OverallVerdict::Vanishes {
            component: c.component,
            rule: c.verdict.rule().expect("vanishing verdict has a rule"),
        };
    }
    if components
        .iter()
        .any(|c| matches!(c.verdict, VanishingVerdict::Inconclusive(_)))
    {
        return OverallVerdict::Inconclusive;
    }
    OverallVerdict::PossiblyNontrivial(components.iter().filter_map(|c| c.verdict.btype()).collect())
}

pub fn classify(c: &Cobordism, d: u32, regime: DimRegime) -> Classification {
    let components: Vec<ComponentVerdict> = c
        .components
        .iter()
        .enumerate()
        .map(|(k, comp)| {
            let flags = match regime {
                DimRegime::AllBelow => DimensionFlags::ALL_BELOW,
                DimRegime::Strict => DimensionFlags::compute(comp, &c.branes, d),
            };
            let tuple = component_invariants(comp);
            ComponentVerdict {
                component: k,
                tuple,
                verdict: classify_component(&tuple, &flags),
            }
        })
        .collect();
    Classification {
        overall: combine(&components),
        components,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub tuple: CobordismInvariants,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExhaustivenessReport {
    pub bound: u32,
    pub tuples_checked: u64,
    pub vanishing: u64,
    /// survivors per type, in order I to V
    pub survivors: [u64; 5],
    pub counterexamples: Vec<Counterexample>,
}

impl ExhaustivenessReport {
    fn empty(bound: u32) -> Self {
        Self {
            bound,
            tuples_checked: 0,
            vanishing: 0,
            survivors: [0; 5],
            counterexamples: Vec::new(),
        }
    }

    fn merge(mut self, other: Self) -> Self {
        self.tuples_checked += other.tuples_checked;
        self.vanishing += other.vanishing;
        for (a, b) in self.survivors.iter_mut().zip(other.survivors) {
            *a += b;
        }
        self.counterexamples.extend(other.counterexamples);
        self
    }

    pub fn passed(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

impl fmt::Display for ExhaustivenessReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "bound: {}", self.bound)?;
        writeln!(f, "tuples checked: {}", self.tuples_checked)?;
        writeln!(f, "vanishing: {}", self.vanishing)?;
        for (t, n) in BType::ALL.iter().zip(self.survivors) {
            writeln!(f, "type {t} survivors: {n}")?;
        }
        writeln!(f, "counterexamples: {}", self.counterexamples.len())?;
        for c in &self.counterexamples {
            writeln!(f, "  {}: {}", c.tuple, c.reason)?;
        }
        Ok(())
    }
}

fn check_tuple(x: CobordismInvariants, report: &mut ExhaustivenessReport) {
    report.tuples_checked += 1;
    let mut fail = |reason: String| {
        report.counterexamples.push(Counterexample { tuple: x, reason });
    };
    let verdict = classify_component(&x, &DimensionFlags::ALL_BELOW);
    let matching: Vec<BType> = BType::ALL.into_iter().filter(|t| t.matches(&x)).collect();
    match verdict {
        VanishingVerdict::Vanishes(_) => {
            if !matching.is_empty() {
                fail(format!("vanishes but matches type {}", matching[0]));
            }
            report.vanishing += 1;
        }
        VanishingVerdict::PossiblyNontrivial(t) => {
            if matching != [t] {
                fail(format!("survives as {t} but matches {matching:?}"));
            }
            report.survivors[t as usize] += 1;
            if x.g == 0 && x.omega == 0 && x.t == 0 && !matches!((x.q, x.s), (1, 0) | (2, 0) | (0, 1)) {
                fail(format!("closed-like survivor with (q,s)=({},{})", x.q, x.s));
            }
            if x.omega == 1 && !(x.r == 0 && x.s == 0 && x.t == 0 && x.q == 1) {
                fail("window survivor carries open strings or extra outputs".into());
            }
            if x.t == 1 && (x.q != 0 || x.s != 0) {
                fail("mixed-circle survivor has further outputs".into());
            }
        }
        other => fail(format!("unexpected verdict under all-dims-below-d: {other}")),
    }
}

/// Check every tuple with entries in `0..=bound` and at least one outgoing
/// string against the rules and the five types.
pub fn check_exhaustiveness(bound: u32, exec: Exec) -> ExhaustivenessReport {
    let side = bound as usize + 1;
    // one task per (g, omega, p) prefix
    let prefixes = side * side * side;
    par::map_reduce(
        exec,
        prefixes,
        ExhaustivenessReport::empty(bound),
        |k| {
            let g = (k / (side * side)) as u32;
            let omega = ((k / side) % side) as u32;
            let p = (k % side) as u32;
            let mut report = ExhaustivenessReport::empty(bound);
            for q in 0..=bound {
                for r in 0..=bound {
                    for s in 0..=bound {
                        for t in 0..=bound {
                            if q + s + t >= 1 {
                                check_tuple(CobordismInvariants::new(g, omega, p, q, r, s, t), &mut report);
                            }
                        }
                    }
                }
            }
            report
        },
        ExhaustivenessReport::merge,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{BraneLabel, Component};
    use proptest::prelude::*;

    fn inv(t: [u32; 7]) -> CobordismInvariants {
        CobordismInvariants::new(t[0], t[1], t[2], t[3], t[4], t[5], t[6])
    }

    fn verdict(t: [u32; 7]) -> VanishingVerdict {
        classify_component(&inv(t), &DimensionFlags::ALL_BELOW)
    }

    #[test]
    fn documented_examples() {
        assert_eq!(verdict([1, 0, 1, 1, 0, 0, 0]), VanishingVerdict::Vanishes(RuleId::GenusPositive));
        assert_eq!(verdict([0, 1, 2, 1, 0, 0, 0]), VanishingVerdict::PossiblyNontrivial(BType::I));
        assert_eq!(verdict([0, 0, 0, 3, 0, 0, 0]), VanishingVerdict::Vanishes(RuleId::ThreeOutClosed));
        assert_eq!(verdict([0, 0, 0, 0, 2, 0, 1]), VanishingVerdict::PossiblyNontrivial(BType::V));
        let flags = DimensionFlags {
            outgoing_open_label_below_d: false,
            ..DimensionFlags::ALL_BELOW
        };
        assert_eq!(
            classify_component(&inv([0, 0, 1, 1, 0, 1, 0]), &flags),
            VanishingVerdict::Inconclusive(vec![Missing {
                rule: RuleId::OutOpenOverflow,
                hypothesis: Hypothesis::OutgoingOpenLabelBelowD
            }])
        );
    }

    #[test]
    fn one_rule_per_condition() {
        let cases = [
            ([1, 0, 0, 1, 0, 0, 0], RuleId::GenusPositive),
            ([0, 2, 0, 1, 0, 0, 0], RuleId::MultiWindow),
            ([0, 0, 0, 0, 0, 0, 2], RuleId::MultiMixed),
            ([0, 0, 0, 3, 0, 0, 0], RuleId::ThreeOutClosed),
            ([0, 0, 0, 1, 0, 1, 0], RuleId::OutOpenOverflow),
            ([0, 1, 0, 1, 1, 0, 0], RuleId::WindowWithOpen),
            ([0, 1, 0, 2, 0, 0, 0], RuleId::WindowMultiOutClosed),
            ([0, 0, 0, 1, 0, 0, 1], RuleId::MixedWithExtraOut),
        ];
        for (t, rule) in cases {
            assert_eq!(verdict(t), VanishingVerdict::Vanishes(rule), "{t:?}");
        }
    }

    #[test]
    fn each_type_has_a_survivor() {
        assert_eq!(verdict([0, 0, 3, 1, 2, 0, 0]), VanishingVerdict::PossiblyNontrivial(BType::II));
        assert_eq!(verdict([0, 0, 1, 2, 0, 0, 0]), VanishingVerdict::PossiblyNontrivial(BType::III));
        assert_eq!(verdict([0, 0, 0, 0, 1, 1, 0]), VanishingVerdict::PossiblyNontrivial(BType::IV));
    }

    #[test]
    fn no_output_is_invalid() {
        assert!(matches!(verdict([0, 0, 1, 0, 2, 0, 0]), VanishingVerdict::Invalid(_)));
    }

    #[test]
    fn unconditional_rule_beats_missing_hypothesis() {
        let none = DimensionFlags {
            open_label_below_d: false,
            mixed_label_below_d: false,
            outgoing_open_label_below_d: false,
        };
        // t >= 2 lacks its hypothesis but q >= 3 needs none
        assert_eq!(
            classify_component(&inv([0, 0, 0, 3, 0, 0, 2]), &none),
            VanishingVerdict::Vanishes(RuleId::ThreeOutClosed)
        );
        assert!(matches!(
            classify_component(&inv([0, 0, 0, 0, 0, 0, 2]), &none),
            VanishingVerdict::Inconclusive(_)
        ));
    }

    #[test]
    fn exhaustive_sweep_bound_four() {
        for exec in [Exec::Sequential, Exec::Parallel] {
            let report = check_exhaustiveness(4, exec);
            assert!(report.passed(), "{report}");
            assert_eq!(report.tuples_checked, 5u64.pow(7) - 5u64.pow(4));
        }
    }

    #[test]
    fn disconnected_combination() {
        let branes = crate::surface::BraneTable::from_labels([BraneLabel::new("K", 0, 2)]);
        let type2 = Component::new(0, [BoundaryCircle::ClosedIn, BoundaryCircle::ClosedOut]);
        let torus = Component::new(1, [BoundaryCircle::ClosedIn, BoundaryCircle::ClosedOut]);
        let type1 = Component::new(0, [BoundaryCircle::window("K"), BoundaryCircle::ClosedOut]);
        let c = Cobordism::new(branes.clone(), vec![type2.clone(), torus]);
        assert_eq!(
            classify(&c, 2, DimRegime::AllBelow).overall,
            OverallVerdict::Vanishes {
                component: 1,
                rule: RuleId::GenusPositive
            }
        );
        let c = Cobordism::new(branes.clone(), vec![type2.clone(), type2.clone()]);
        assert_eq!(
            classify(&c, 2, DimRegime::AllBelow).overall,
            OverallVerdict::PossiblyNontrivial(vec![BType::II, BType::II])
        );
        // a saddle on branes of full dimension cannot be decided
        let mut branes2 = branes.clone();
        branes2.push(BraneLabel::new("M", 2, 2));
        let double = Component::new(
            0,
            [
                BoundaryCircle::mixed([Arc::free("M"), Arc::OpenIn, Arc::free("M"), Arc::OpenOut]),
                BoundaryCircle::mixed([Arc::free("M"), Arc::OpenIn, Arc::free("M"), Arc::OpenOut]),
            ],
        );
        let c = Cobordism::new(branes2, vec![type1, double]);
        let cl = classify(&c, 2, DimRegime::Strict);
        assert_eq!(cl.components[0].verdict, VanishingVerdict::PossiblyNontrivial(BType::I));
        assert_eq!(cl.overall, OverallVerdict::Inconclusive);
        assert!(classify(&c, 2, DimRegime::AllBelow).overall != OverallVerdict::Inconclusive);
    }

    #[test]
    fn strict_flags_follow_labels() {
        let branes = crate::surface::BraneTable::from_labels([
            BraneLabel::new("K", 0, 2),
            BraneLabel::new("M", 3, 0),
        ]);
        let comp = Component::new(
            0,
            [
                BoundaryCircle::ClosedIn,
                BoundaryCircle::ClosedOut,
                BoundaryCircle::mixed([Arc::free("M"), Arc::OpenOut]),
                BoundaryCircle::mixed([Arc::free("K"), Arc::OpenIn]),
            ],
        );
        let flags = DimensionFlags::compute(&comp, &branes, 3);
        assert!(flags.open_label_below_d);
        assert!(!flags.outgoing_open_label_below_d);
        assert!(!flags.mixed_label_below_d);
        let c = Cobordism::new(branes, vec![comp]);
        assert!(matches!(
            classify(&c, 3, DimRegime::Strict).components[0].verdict,
            VanishingVerdict::Inconclusive(_)
        ));
        assert_eq!(
            classify(&c, 3, DimRegime::AllBelow).components[0].verdict,
            VanishingVerdict::Vanishes(RuleId::OutOpenOverflow)
        );
    }

    fn arb_tuple() -> impl Strategy<Value = CobordismInvariants> {
        proptest::array::uniform7(0u32..6).prop_map(inv)
    }

    fn arb_flags() -> impl Strategy<Value = DimensionFlags> {
        (any::<bool>(), any::<bool>(), any::<bool>()).prop_map(|(a, b, c)| DimensionFlags {
            open_label_below_d: a,
            mixed_label_below_d: b,
            outgoing_open_label_below_d: c,
        })
    }

    proptest! {
        #[test]
        fn vanishing_is_independent_of_rule_order(
            x in arb_tuple(),
            flags in arb_flags(),
            order in Just(RuleId::ALL.to_vec()).prop_shuffle(),
        ) {
            let a = classify_with_order(&x, &flags, &RuleId::ALL);
            let b = classify_with_order(&x, &flags, &order);
            prop_assert_eq!(a.is_vanishing(), b.is_vanishing());
            prop_assert_eq!(a.kind(), b.kind());
        }

        #[test]
        fn standing_regime_is_never_inconclusive(x in arb_tuple()) {
            let v = classify_component(&x, &DimensionFlags::ALL_BELOW);
            prop_assert!(!matches!(v, VanishingVerdict::Inconclusive(_)));
        }

        #[test]
        fn relaxing_hypotheses_never_creates_survivors(x in arb_tuple(), flags in arb_flags()) {
            let strict = classify_component(&x, &flags);
            let loose = classify_component(&x, &DimensionFlags::ALL_BELOW);
            if let VanishingVerdict::PossiblyNontrivial(t) = strict {
                prop_assert_eq!(loose, VanishingVerdict::PossiblyNontrivial(t));
            }
        }
    }
}

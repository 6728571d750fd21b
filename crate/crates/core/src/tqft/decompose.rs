//! Normal-form generator words for cobordisms.
//!
//! Per component, every incoming piece feeds a closed "hub" strand:
//! window cups, incoming closed strings, circles of incoming open strings
//! (merged and cozipped) and circles with both kinds of open string (via the
//! comodule map). The hub picks up one handle per genus and is then split by
//! closed coproducts among the outgoing pieces: outgoing closed strings,
//! circles of outgoing open strings (zipped and split) and at most one
//! circle with both kinds (via the module action). A circle with both kinds
//! of open string is realized as a disc: its incoming runs are merged,
//! neighbouring runs are joined by saddles, and outgoing runs are split.

use std::fmt;
use std::ops::Index;

use serde::Serialize;
use smallvec::SmallVec;
use thiserror::Error;

use super::{BraneId, Generator, Sector, StrandId};
use crate::surface::{Arc, BoundaryCircle, Cobordism, MixedKind};

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
pub enum DecomposeError {
    #[error("circle {0} is an unlabeled window")]
    UnlabeledWindow(usize),
    #[error("brane {0} is not declared")]
    UnknownBrane(String),
    #[error("component {0} has no outgoing string")]
    NoOutgoing(usize),
    #[error("circle {0} cannot be realized: {1}")]
    UnsupportedShape(usize, String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Layer {
    pub generator: Generator,
    pub consumes: SmallVec<[StrandId; 2]>,
    pub produces: SmallVec<[StrandId; 2]>,
}

/// A generator word in strand form. Strands are created once and consumed
/// at most once; the live strands between layers are implicit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub branes: Vec<String>,
    /// sector of every strand
    pub sectors: Vec<Sector>,
    /// one strand per incoming string, in string order
    pub inputs: Vec<StrandId>,
    /// one strand per outgoing string, in string order
    pub outputs: Vec<StrandId>,
    pub layers: Vec<Layer>,
}

impl Decomposition {
    /// Generator names in application order.
    pub fn word(&self) -> Vec<String> {
        self.layers.iter().map(|l| l.generator.name(&self.branes)).collect()
    }

    /// Each layer as `generator ⊗ id^n`, counting untouched live strands.
    pub fn render(&self) -> Vec<String> {
        let mut live = self.inputs.len();
        self.layers
            .iter()
            .map(|l| {
                let idle = live - l.consumes.len();
                live = idle + l.produces.len();
                let name = l.generator.name(&self.branes);
                match idle {
                    0 => name,
                    1 => format!("{name} ⊗ id"),
                    n => format!("{name} ⊗ id^{n}"),
                }
            })
            .collect()
    }

    pub fn strand_count(&self) -> usize {
        self.sectors.len()
    }
}

impl fmt::Display for Decomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.render().join(", "))
    }
}

/// Perturbations of the canonical choices. Every setting yields a word for
/// a homeomorphic surface.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct DecomposeOptions {
    /// fold hub sources from the last one
    pub reverse_sources: bool,
    /// split sinks off the hub from the end
    pub split_from_back: bool,
    /// start open-string chains at a later arc where possible
    pub rotate_mixed: bool,
    /// attach handles to the first source before merging the rest
    pub handles_first: bool,
}

impl DecomposeOptions {
    /// All sixteen combinations.
    pub fn all() -> Vec<DecomposeOptions> {
        (0..16u8)
            .map(|m| DecomposeOptions {
                reverse_sources: m & 1 != 0,
                split_from_back: m & 2 != 0,
                rotate_mixed: m & 4 != 0,
                handles_first: m & 8 != 0,
            })
            .collect()
    }
}

struct Builder<'a> {
    branes: &'a [String],
    sectors: Vec<Sector>,
    layers: Vec<Layer>,
    opts: DecomposeOptions,
}

impl Builder<'_> {
    fn strand(&mut self, s: Sector) -> StrandId {
        self.sectors.push(s);
        (self.sectors.len() - 1) as StrandId
    }

    fn apply(&mut self, g: Generator, consumes: &[StrandId]) -> SmallVec<[StrandId; 2]> {
        debug_assert_eq!(
            consumes.iter().map(|&s| self.sectors[s as usize]).collect::<super::Sectors>(),
            g.inputs(),
            "generator {} applied to mismatched strands",
            g.name(self.branes)
        );
        let produces: SmallVec<[StrandId; 2]> = g.outputs().into_iter().map(|s| self.strand(s)).collect();
        self.layers.push(Layer {
            generator: g,
            consumes: consumes.iter().copied().collect(),
            produces: produces.clone(),
        });
        produces
    }

    fn one(&mut self, g: Generator, consumes: &[StrandId]) -> StrandId {
        self.apply(g, consumes)[0]
    }

    fn two(&mut self, g: Generator, consumes: &[StrandId]) -> (StrandId, StrandId) {
        let p = self.apply(g, consumes);
        (p[0], p[1])
    }

    fn open(&self, s: StrandId) -> (BraneId, BraneId) {
        match self.sectors[s as usize] {
            Sector::Open(i, j) => (i, j),
            Sector::Closed => unreachable!("closed strand where an open one was expected"),
        }
    }

    /// `μ` chain over open strands in order.
    fn merge_open(&mut self, strands: &[StrandId]) -> StrandId {
        let mut h = strands[0];
        for &s in &strands[1..] {
            let (i, j) = self.open(h);
            let (_, k) = self.open(s);
            h = self.one(Generator::OpenMult(i, j, k), &[h, s]);
        }
        h
    }

    /// Split `cur`, which stands for the product `o_m ⋯ o_1` of the given
    /// outgoing strings, into those strings. Returns strands in the order of
    /// `ends`.
    fn split_open(&mut self, mut cur: StrandId, ends: &[(BraneId, BraneId)]) -> Vec<StrandId> {
        let mut out = vec![0; ends.len()];
        let last = ends[0].1;
        for k in (1..ends.len()).rev() {
            let (i, j) = ends[k];
            let (head, rest) = self.two(Generator::OpenComult(i, j, last), &[cur]);
            out[k] = head;
            cur = rest;
        }
        out[0] = cur;
        out
    }
}

/// Strands keyed by (circle, arc); closed circles use arc `usize::MAX`.
/// Linear lookups: a component has few strings.
#[derive(Default)]
struct StrandMap(Vec<((usize, usize), StrandId)>);

impl StrandMap {
    fn insert(&mut self, key: (usize, usize), strand: StrandId) {
        self.0.push((key, strand));
    }

    /// Strands in key order, which is the profile order of strings.
    fn into_sorted(mut self) -> Vec<StrandId> {
        self.0.sort_unstable();
        self.0.into_iter().map(|(_, s)| s).collect()
    }
}

impl Index<&(usize, usize)> for StrandMap {
    type Output = StrandId;

    fn index(&self, key: &(usize, usize)) -> &StrandId {
        &self.0.iter().find(|(k, _)| k == key).expect("string has a strand").1
    }
}

struct MixedArc {
    arc: usize,
    incoming: bool,
    ends: (BraneId, BraneId),
}

type OpenArcs = SmallVec<[MixedArc; 3]>;

struct TDisc {
    circle: usize,
    /// merged incoming runs
    merged: Vec<StrandId>,
    /// outgoing runs, each in arc order
    out_runs: Vec<Vec<MixedArc>>,
}

/// Canonical decomposition.
pub fn decompose(c: &Cobordism) -> Result<Decomposition, DecomposeError> {
    let branes: Vec<String> = c.branes.iter().map(|b| b.name.clone()).collect();
    decompose_with(c, &branes, DecomposeOptions::default())
}

/// Decomposition against an explicit brane list (ids index into it) with
/// perturbed choices.
pub fn decompose_with(
    c: &Cobordism,
    branes: &[String],
    opts: DecomposeOptions,
) -> Result<Decomposition, DecomposeError> {
    let circles: Vec<Vec<&BoundaryCircle>> = c.components.iter().map(|k| k.circles.iter().collect()).collect();
    let views: Vec<ComponentView<'_>> = c
        .components
        .iter()
        .zip(&circles)
        .map(|(k, cs)| ComponentView {
            genus: k.genus,
            circles: cs,
        })
        .collect();
    decompose_views(&views, branes, opts)
}

/// A component given by reference to its circles.
pub(crate) struct ComponentView<'c> {
    pub genus: u32,
    pub circles: &'c [&'c BoundaryCircle],
}

/// Brane ids of the endpoints of open arc `k`, without allocating.
fn arc_ends(
    arcs: &[Arc],
    k: usize,
    id: &dyn Fn(&str) -> Result<BraneId, DecomposeError>,
) -> Result<(BraneId, BraneId), DecomposeError> {
    let n = arcs.len();
    let label = |j: usize| arcs[j % n].label().expect("open arcs are flanked by free arcs");
    let (prev, next) = (id(label(k + n - 1))?, id(label(k + 1))?);
    Ok(if arcs[k] == Arc::OpenIn { (prev, next) } else { (next, prev) })
}

pub(crate) fn decompose_views(
    components: &[ComponentView<'_>],
    branes: &[String],
    opts: DecomposeOptions,
) -> Result<Decomposition, DecomposeError> {
    let mut b = Builder {
        branes,
        // typical words stay below these sizes; avoids regrowth
        sectors: Vec::with_capacity(64),
        layers: Vec::with_capacity(48),
        opts,
    };
    let id = |name: &str| -> Result<BraneId, DecomposeError> {
        branes
            .iter()
            .position(|x| x == name)
            .map(|k| k as BraneId)
            .ok_or_else(|| DecomposeError::UnknownBrane(name.into()))
    };

    // strands for the incoming strings, in profile order
    let mut inputs = Vec::with_capacity(16);
    let mut input_of: StrandMap = StrandMap::default();
    let mut gi = 0;
    for comp in components {
        for circle in comp.circles {
            match circle {
                BoundaryCircle::ClosedIn => {
                    let strand = b.strand(Sector::Closed);
                    inputs.push(strand);
                    input_of.insert((gi, usize::MAX), strand);
                }
                BoundaryCircle::Mixed(arcs) => {
                    for (a, arc) in arcs.iter().enumerate() {
                        if *arc == Arc::OpenIn {
                            let (i, j) = arc_ends(arcs, a, &id)?;
                            let strand = b.strand(Sector::Open(i, j));
                            inputs.push(strand);
                            input_of.insert((gi, a), strand);
                        }
                    }
                }
                _ => {}
            }
            gi += 1;
        }
    }
    let mut output_of: StrandMap = StrandMap::default();
    let mut offset = 0;
    for (ci, comp) in components.iter().enumerate() {
        decompose_component(&mut b, comp, ci, offset, &id, &input_of, &mut output_of)?;
        offset += comp.circles.len();
    }
    // keys sort by circle, then arc: the profile order of outgoing strings
    let outputs = output_of.into_sorted();
    Ok(Decomposition {
        branes: branes.to_vec(),
        sectors: b.sectors,
        inputs,
        outputs,
        layers: b.layers,
    })
}

fn decompose_component(
    b: &mut Builder<'_>,
    comp: &ComponentView<'_>,
    index: usize,
    offset: usize,
    id: &dyn Fn(&str) -> Result<BraneId, DecomposeError>,
    input_of: &StrandMap,
    output_of: &mut StrandMap,
) -> Result<(), DecomposeError> {
    let rotate = b.opts.rotate_mixed;
    let mut windows: SmallVec<[BraneId; 2]> = SmallVec::new();
    let mut closed_in: SmallVec<[StrandId; 4]> = SmallVec::new();
    let mut closed_out: SmallVec<[usize; 4]> = SmallVec::new();
    let mut r_circles: SmallVec<[(usize, OpenArcs); 4]> = SmallVec::new();
    let mut s_circles: SmallVec<[(usize, OpenArcs); 4]> = SmallVec::new();
    let mut t_circles: SmallVec<[(usize, OpenArcs); 4]> = SmallVec::new();
    for (k, &circle) in comp.circles.iter().enumerate() {
        let gi = offset + k;
        match circle {
            BoundaryCircle::ClosedIn => closed_in.push(input_of[&(gi, usize::MAX)]),
            BoundaryCircle::ClosedOut => closed_out.push(gi),
            BoundaryCircle::Window(None) => return Err(DecomposeError::UnlabeledWindow(gi)),
            BoundaryCircle::Window(Some(name)) => windows.push(id(name)?),
            BoundaryCircle::Mixed(arcs) => {
                let mut open = OpenArcs::new();
                for (a, arc) in arcs.iter().enumerate() {
                    if arc.is_open() {
                        open.push(MixedArc {
                            arc: a,
                            incoming: *arc == Arc::OpenIn,
                            ends: arc_ends(arcs, a, id)?,
                        });
                    }
                }
                match circle.mixed_kind() {
                    Some(MixedKind::Incoming) => r_circles.push((gi, open)),
                    Some(MixedKind::Outgoing) => s_circles.push((gi, open)),
                    Some(MixedKind::Both) => t_circles.push((gi, open)),
                    None => {
                        return Err(DecomposeError::UnsupportedShape(gi, "no open string".into()));
                    }
                }
            }
        }
    }
    let (q, s, t) = (closed_out.len(), s_circles.len(), t_circles.len());
    if q + s + t == 0 {
        return Err(DecomposeError::NoOutgoing(index));
    }

    // Hub sources.
    let mut sources: SmallVec<[StrandId; 8]> = SmallVec::new();
    for k in windows {
        sources.push(b.one(Generator::WindowCup(k), &[]));
    }
    sources.extend(closed_in);
    for (gi, open) in &r_circles {
        let start = if rotate && open.len() > 1 { 1 } else { 0 };
        let strands: Vec<StrandId> = (0..open.len())
            .map(|k| input_of[&(*gi, open[(start + k) % open.len()].arc)])
            .collect();
        let merged = b.merge_open(&strands);
        let (a, _) = b.open(merged);
        sources.push(b.one(Generator::Cozipper(a), &[merged]));
    }
    let mut discs: SmallVec<[TDisc; 2]> = SmallVec::new();
    for (gi, open) in &t_circles {
        discs.push(t_disc(b, *gi, open, input_of, rotate)?);
    }
    let t_sink = q + s == 0;
    for disc in discs.iter_mut().skip(usize::from(t_sink)) {
        let m = disc.merged[0];
        let (i, j) = b.open(m);
        let (closed, through) = b.two(Generator::Comodule(i, j), &[m]);
        disc.merged[0] = through;
        sources.push(closed);
    }

    // The hub.
    let genus = comp.genus;
    let hub = if sources.is_empty() && t_sink && genus == 0 {
        None
    } else {
        if sources.is_empty() {
            sources.push(b.one(Generator::ClosedUnit, &[]));
        }
        let mut genus_left = genus;
        if b.opts.handles_first {
            sources[0] = add_handles(b, sources[0], genus_left);
            genus_left = 0;
        }
        let mut h;
        if b.opts.reverse_sources {
            h = *sources.last().expect("nonempty");
            for &x in sources.iter().rev().skip(1) {
                h = b.one(Generator::ClosedMult, &[x, h]);
            }
        } else {
            h = sources[0];
            for &x in &sources[1..] {
                h = b.one(Generator::ClosedMult, &[h, x]);
            }
        }
        Some(add_handles(b, h, genus_left))
    };

    // Sinks, in order: closed outgoing strings, outgoing-only circles, the
    // sink disc.
    let sink_count = q + s + usize::from(t_sink);
    let mut sink_strands: SmallVec<[StrandId; 8]> = smallvec::smallvec![0; sink_count];
    if let Some(mut h) = hub {
        if b.opts.split_from_back {
            for k in (1..sink_count).rev() {
                let (rest, x) = b.two(Generator::ClosedComult, &[h]);
                sink_strands[k] = x;
                h = rest;
            }
            sink_strands[0] = h;
        } else {
            for slot in sink_strands.iter_mut().take(sink_count - 1) {
                let (x, rest) = b.two(Generator::ClosedComult, &[h]);
                *slot = x;
                h = rest;
            }
            sink_strands[sink_count - 1] = h;
        }
    }
    for (k, &gi) in closed_out.iter().enumerate() {
        output_of.insert((gi, usize::MAX), sink_strands[k]);
    }
    for (k, (gi, open)) in s_circles.iter().enumerate() {
        let x = sink_strands[q + k];
        let start = if rotate && open.len() > 1 { 1 } else { 0 };
        let order: Vec<&MixedArc> = (0..open.len()).map(|k| &open[(start + k) % open.len()]).collect();
        let top = order[0].ends.1;
        let zipped = b.one(Generator::Zipper(top), &[x]);
        let ends: Vec<(BraneId, BraneId)> = order.iter().map(|a| a.ends).collect();
        let strands = b.split_open(zipped, &ends);
        for (a, s) in order.iter().zip(strands) {
            output_of.insert((*gi, a.arc), s);
        }
    }
    if t_sink {
        if let Some(h) = hub {
            let disc = &mut discs[0];
            let m = disc.merged[0];
            let (a, bb) = b.open(m);
            let z = b.one(Generator::Zipper(a), &[h]);
            disc.merged[0] = b.one(Generator::OpenMult(a, a, bb), &[z, m]);
        }
    }
    for disc in discs {
        finish_disc(b, disc, output_of);
    }
    Ok(())
}

fn add_handles(b: &mut Builder<'_>, mut h: StrandId, genus: u32) -> StrandId {
    for _ in 0..genus {
        let (x, y) = b.two(Generator::ClosedComult, &[h]);
        h = b.one(Generator::ClosedMult, &[x, y]);
    }
    h
}

/// Merge the incoming runs of a circle carrying both kinds of open string,
/// starting at an incoming run that follows an outgoing one.
fn t_disc(
    b: &mut Builder<'_>,
    gi: usize,
    open: &[MixedArc],
    input_of: &StrandMap,
    rotate: bool,
) -> Result<TDisc, DecomposeError> {
    let n = open.len();
    let starts: Vec<usize> = (0..n)
        .filter(|&k| open[k].incoming && !open[(k + n - 1) % n].incoming)
        .collect();
    let Some(&first) = starts.first() else {
        return Err(DecomposeError::UnsupportedShape(gi, "no incoming run".into()));
    };
    let start = if rotate { *starts.last().expect("nonempty") } else { first };
    let mut merged = Vec::new();
    let mut out_runs: Vec<Vec<MixedArc>> = Vec::new();
    let mut k = 0;
    while k < n {
        let mut run = Vec::new();
        while k < n && open[(start + k) % n].incoming {
            run.push(input_of[&(gi, open[(start + k) % n].arc)]);
            k += 1;
        }
        merged.push(b.merge_open(&run));
        let mut outs = Vec::new();
        while k < n && !open[(start + k) % n].incoming {
            let a = &open[(start + k) % n];
            outs.push(MixedArc {
                arc: a.arc,
                incoming: false,
                ends: a.ends,
            });
            k += 1;
        }
        out_runs.push(outs);
    }
    Ok(TDisc {
        circle: gi,
        merged,
        out_runs,
    })
}

/// Join the merged runs by saddles and split the outgoing runs.
fn finish_disc(b: &mut Builder<'_>, disc: TDisc, output_of: &mut StrandMap) {
    let k = disc.merged.len();
    let mut joined = Vec::with_capacity(k);
    let mut x = disc.merged[0];
    for &m in &disc.merged[1..] {
        let (i, j) = b.open(x);
        let (kk, l) = b.open(m);
        let (nx, y) = b.two(Generator::Saddle(i, j, kk, l), &[x, m]);
        joined.push(y);
        x = nx;
    }
    joined.push(x);
    for (r, run) in joined.into_iter().zip(&disc.out_runs) {
        let ends: Vec<(BraneId, BraneId)> = run.iter().map(|a| a.ends).collect();
        let strands = b.split_open(r, &ends);
        for (a, s) in run.iter().zip(strands) {
            output_of.insert((disc.circle, a.arc), s);
        }
    }
}

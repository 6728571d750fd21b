use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use smallvec::SmallVec;
use thiserror::Error;

use super::assignment::Assignment;
use super::decompose::{decompose_with, DecomposeError, DecomposeOptions, Decomposition, Layer};
use super::eval::{evaluate_decomposition, EvalError, OperationMatrix};
use super::StrandId;
use crate::cells::sewn_euler_char;
use crate::sewing::{sew_traced, SewError, SewPlan, Side};
use crate::surface::{Cobordism, StringRef};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SewingCheckError {
    #[error(transparent)]
    Sew(#[from] SewError),
    #[error(transparent)]
    Decompose(#[from] DecomposeError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Outcome of comparing the evaluation of a sewn surface with the
/// composite of the evaluations of its pieces.
#[derive(Debug, Clone)]
pub struct SewingCheck {
    pub sewn: Cobordism,
    /// evaluation of the sewn surface's own decomposition
    pub direct: OperationMatrix,
    /// the pieces' words run one after the other
    pub composite: OperationMatrix,
    /// `Some(±1)` if `direct = ±composite`
    pub sign: Option<i8>,
    pub euler: EulerBookkeeping,
}

/// χ(sewn) must equal χ(a) + χ(b) − (glued open strings), both from the
/// genus formula and from the glued cell complexes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EulerBookkeeping {
    pub chi_a: i64,
    pub chi_b: i64,
    pub glued_open: usize,
    pub chi_sewn: i64,
    pub chi_cells: i64,
}

impl EulerBookkeeping {
    pub fn expected(&self) -> i64 {
        self.chi_a + self.chi_b - self.glued_open as i64
    }

    pub fn consistent(&self) -> bool {
        self.chi_sewn == self.expected() && self.chi_cells == self.expected()
    }
}

impl SewingCheck {
    pub fn passed(&self) -> bool {
        self.sign.is_some() && self.euler.consistent()
    }
}

impl fmt::Display for SewingCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e = &self.euler;
        writeln!(
            f,
            "chi: {} + {} - {} = {} (genus formula {}, cells {})",
            e.chi_a,
            e.chi_b,
            e.glued_open,
            e.expected(),
            e.chi_sewn,
            e.chi_cells
        )?;
        writeln!(f, "direct:    {}", self.direct)?;
        writeln!(f, "composite: {}", self.composite)?;
        match self.sign {
            Some(1) => write!(f, "agree"),
            Some(_) => write!(f, "agree up to sign"),
            None => write!(f, "DISAGREE"),
        }
    }
}

fn string_key(s: &StringRef) -> (usize, usize) {
    match s {
        StringRef::Closed { circle } => (*circle, usize::MAX),
        StringRef::Open { circle, arc, .. } => (*circle, *arc),
    }
}

fn strand_map(strings: &[StringRef], strands: &[StrandId]) -> BTreeMap<(usize, usize), StrandId> {
    strings.iter().map(string_key).zip(strands.iter().copied()).collect()
}

/// Sew `b` onto `a`, then evaluate both the result and the composite of the
/// two pieces' words under `assignment`.
pub fn check_sewing(
    a: &Cobordism,
    b: &Cobordism,
    plan: &SewPlan,
    assignment: &dyn Assignment,
) -> Result<SewingCheck, SewingCheckError> {
    let sewn = sew_traced(a, b, plan)?;
    let branes: Vec<String> = sewn.cobordism.branes.iter().map(|x| x.name.clone()).collect();
    let opts = DecomposeOptions::default();
    let da = decompose_with(a, &branes, opts)?;
    let db = decompose_with(b, &branes, opts)?;
    let direct_dec = decompose_with(&sewn.cobordism, &branes, opts)?;

    let a_in = strand_map(&a.incoming_strings(), &da.inputs);
    let a_out = strand_map(&a.outgoing_strings(), &da.outputs);
    let b_in = strand_map(&b.incoming_strings(), &db.inputs);
    let b_out = strand_map(&b.outgoing_strings(), &db.outputs);

    // b's glued inputs become a's matching outputs; other b strands shift
    let offset = da.sectors.len() as StrandId;
    let mut rename: BTreeMap<StrandId, StrandId> = BTreeMap::new();
    for &(ca, cb) in &plan.closed_pairs {
        rename.insert(b_in[&(cb, usize::MAX)], a_out[&(ca, usize::MAX)]);
    }
    for (ra, rb) in &plan.open_pairs {
        rename.insert(b_in[&(rb.circle, rb.arc)], a_out[&(ra.circle, ra.arc)]);
    }
    let map_b = |s: StrandId| rename.get(&s).copied().unwrap_or(s + offset);
    let mut layers = da.layers.clone();
    layers.extend(db.layers.iter().map(|l| Layer {
        generator: l.generator,
        consumes: l.consumes.iter().map(|&s| map_b(s)).collect::<SmallVec<_>>(),
        produces: l.produces.iter().map(|&s| map_b(s)).collect::<SmallVec<_>>(),
    }));
    let locate = |s: &StringRef, ends_a: &BTreeMap<(usize, usize), StrandId>, ends_b: &BTreeMap<(usize, usize), StrandId>| {
        let o = sewn.origin(s);
        let key = (o.circle, o.arc.unwrap_or(usize::MAX));
        match o.side {
            Side::A => ends_a[&key],
            Side::B => map_b(ends_b[&key]),
        }
    };
    let composite_dec = Decomposition {
        branes: branes.clone(),
        sectors: [da.sectors.clone(), db.sectors.clone()].concat(),
        inputs: sewn
            .cobordism
            .incoming_strings()
            .iter()
            .map(|s| locate(s, &a_in, &b_in))
            .collect(),
        outputs: sewn
            .cobordism
            .outgoing_strings()
            .iter()
            .map(|s| locate(s, &a_out, &b_out))
            .collect(),
        layers,
    };

    let direct = evaluate_decomposition(&direct_dec, assignment)?;
    let composite = evaluate_decomposition(&composite_dec, assignment)?;
    let sign = direct.equal_up_to_sign(&composite);
    let euler = EulerBookkeeping {
        chi_a: a.euler_char(),
        chi_b: b.euler_char(),
        glued_open: plan.open_pairs.len(),
        chi_sewn: sewn.cobordism.euler_char(),
        chi_cells: sewn_euler_char(a, b, plan),
    };
    Ok(SewingCheck {
        sewn: sewn.cobordism,
        direct,
        composite,
        sign,
        euler,
    })
}

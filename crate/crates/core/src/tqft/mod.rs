//! Evaluation of open-closed cobordisms as linear maps: generator words,
//! sector assignments, the evaluator, sewing checks and the enumerated
//! family used to cross-check the classifier.

mod assignment;
mod decompose;
mod eval;
pub mod family;
mod sewing_check;

use serde::Serialize;
use smallvec::{smallvec, SmallVec};

pub use assignment::{Assignment, BoundAssignment, ShadowAssignment, TableAssignment, TableError};
pub use decompose::{decompose, decompose_with, DecomposeError, DecomposeOptions, Decomposition, Layer};
pub use eval::{evaluate, evaluate_decomposition, EvalError, OperationMatrix};
pub use sewing_check::{check_sewing, SewingCheck, SewingCheckError};

pub type BraneId = u16;
/// Sectors of a generator's inputs or outputs; never more than two.
pub type Sectors = SmallVec<[Sector; 2]>;
pub type StrandId = u16;

/// The state space a strand carries: the closed sector `C` or an open sector
/// `O_IJ` of strings from brane `I` to brane `J`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Sector {
    Closed,
    Open(BraneId, BraneId),
}

impl Sector {
    pub fn render(&self, branes: &[String]) -> String {
        match self {
            Sector::Closed => "C".into(),
            Sector::Open(i, j) => format!("O[{},{}]", branes[*i as usize], branes[*j as usize]),
        }
    }
}

/// Elementary cobordisms. Brane arguments follow the sector conventions in
/// [`Generator::inputs`] and [`Generator::outputs`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Generator {
    ClosedUnit,
    ClosedMult,
    ClosedComult,
    OpenUnit(BraneId),
    /// `O_IJ ⊗ O_JK → O_IK`
    OpenMult(BraneId, BraneId, BraneId),
    /// `O_IK → O_IJ ⊗ O_JK`
    OpenComult(BraneId, BraneId, BraneId),
    Zipper(BraneId),
    Cozipper(BraneId),
    WindowCup(BraneId),
    /// `O_IJ ⊗ O_KL → O_IL ⊗ O_KJ`
    Saddle(BraneId, BraneId, BraneId, BraneId),
    /// `O_IJ → C ⊗ O_IJ`
    Comodule(BraneId, BraneId),
}

impl Generator {
    pub fn inputs(&self) -> Sectors {
        use Generator::*;
        use Sector::*;
        match *self {
            ClosedUnit | OpenUnit(_) | WindowCup(_) => smallvec![],
            ClosedMult => smallvec![Closed, Closed],
            ClosedComult | Zipper(_) => smallvec![Closed],
            OpenMult(i, j, k) => smallvec![Open(i, j), Open(j, k)],
            OpenComult(i, _, k) => smallvec![Open(i, k)],
            Cozipper(k) => smallvec![Open(k, k)],
            Saddle(i, j, k, l) => smallvec![Open(i, j), Open(k, l)],
            Comodule(i, j) => smallvec![Open(i, j)],
        }
    }

    pub fn outputs(&self) -> Sectors {
        use Generator::*;
        use Sector::*;
        match *self {
            ClosedUnit | ClosedMult | Cozipper(_) | WindowCup(_) => smallvec![Closed],
            ClosedComult => smallvec![Closed, Closed],
            OpenUnit(k) | Zipper(k) => smallvec![Open(k, k)],
            OpenMult(i, _, k) => smallvec![Open(i, k)],
            OpenComult(i, j, k) => smallvec![Open(i, j), Open(j, k)],
            Saddle(i, j, k, l) => smallvec![Open(i, l), Open(k, j)],
            Comodule(i, j) => smallvec![Closed, Open(i, j)],
        }
    }

    /// Stable name, also the key of table assignments. Closed generators
    /// carry no brackets; the others list their branes in argument order.
    pub fn name(&self, branes: &[String]) -> String {
        use Generator::*;
        let b = |ks: &[BraneId]| {
            let names: Vec<&str> = ks.iter().map(|&k| branes[k as usize].as_str()).collect();
            names.join(",")
        };
        match *self {
            ClosedUnit => "unit".into(),
            ClosedMult => "mu".into(),
            ClosedComult => "phi".into(),
            OpenUnit(k) => format!("open_unit[{}]", b(&[k])),
            OpenMult(i, j, k) => format!("mu[{}]", b(&[i, j, k])),
            OpenComult(i, j, k) => format!("phi[{}]", b(&[i, j, k])),
            Zipper(k) => format!("theta[{}]", b(&[k])),
            Cozipper(k) => format!("vartheta[{}]", b(&[k])),
            WindowCup(k) => format!("window_cup[{}]", b(&[k])),
            Saddle(i, j, k, l) => format!("saddle[{}]", b(&[i, j, k, l])),
            Comodule(i, j) => format!("comodule[{}]", b(&[i, j])),
        }
    }

    /// Inverse of [`Generator::name`]; `None` for malformed names or
    /// branes missing from `branes`.
    pub fn parse(name: &str, branes: &[String]) -> Option<Generator> {
        use Generator::*;
        let (head, args) = match name.split_once('[') {
            Some((h, rest)) => (h, rest.strip_suffix(']')?.split(',').collect::<Vec<_>>()),
            None => (name, Vec::new()),
        };
        let mut ids = Vec::with_capacity(args.len());
        for a in &args {
            ids.push(branes.iter().position(|b| b == a.trim())? as BraneId);
        }
        Some(match (head, ids.as_slice()) {
            ("unit", []) => ClosedUnit,
            ("mu", []) => ClosedMult,
            ("phi", []) => ClosedComult,
            ("open_unit", &[k]) => OpenUnit(k),
            ("mu", &[i, j, k]) => OpenMult(i, j, k),
            ("phi", &[i, j, k]) => OpenComult(i, j, k),
            ("theta", &[k]) => Zipper(k),
            ("vartheta", &[k]) => Cozipper(k),
            ("window_cup", &[k]) => WindowCup(k),
            ("saddle", &[i, j, k, l]) => Saddle(i, j, k, l),
            ("comodule", &[i, j]) => Comodule(i, j),
            _ => return None,
        })
    }
}

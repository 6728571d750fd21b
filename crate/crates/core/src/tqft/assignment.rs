use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use smallvec::{smallvec, SmallVec};
use thiserror::Error;

use super::{BraneId, Generator, Sector};
use crate::surface::BraneTable;
use crate::Q;

/// Basis indices of the strands a generator emits.
pub type Outputs = SmallVec<[u8; 2]>;

/// Linear data for every generator, resolved against a brane list.
pub trait Assignment: Sync {
    fn bind<'a>(&'a self, branes: &[String]) -> Box<dyn BoundAssignment + 'a>;
}

pub trait BoundAssignment {
    fn dim(&self, s: Sector) -> usize;
    fn degree(&self, s: Sector, i: usize) -> i64;
    fn basis_name(&self, s: Sector, i: usize) -> String;
    /// Whether some basis element has odd degree; if not, every Koszul sign
    /// is +1.
    fn has_odd(&self) -> bool;
    /// Push the image of the basis tensor `input` under `g`.
    fn apply(&self, g: Generator, input: &[u8], out: &mut Vec<(Q, Outputs)>);
}

/// The string-topology shadow: `C = span{u, c}` with `|u| = 0`, `|c| = -d`,
/// `c·c = 0`, `φ(x) = χ(M)·c ⊗ c·x`, rank-one open sectors spanned by
/// `o` in degree 0, and `θ_K(u) = o`, `ϑ_K(o) = χ(K)·c`. Open coproducts,
/// saddles and comodule maps vanish.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ShadowAssignment {
    pub d: u32,
    pub chi_m: i64,
    /// Euler characteristic per brane name; unknown branes count as 0
    pub chi: BTreeMap<String, i64>,
}

impl ShadowAssignment {
    pub fn new(d: u32, chi_m: i64, branes: &BraneTable) -> Self {
        Self {
            d,
            chi_m,
            chi: branes.iter().map(|b| (b.name.clone(), b.chi)).collect(),
        }
    }

    /// Branes whose dimension is not below `d`; the shadow is only
    /// meaningful when this is empty.
    pub fn oversized(d: u32, branes: &BraneTable) -> Vec<String> {
        branes.iter().filter(|b| b.dim >= d).map(|b| b.name.clone()).collect()
    }
}

struct ShadowBound {
    d: i64,
    chi_m: Q,
    chi: Vec<Q>,
}

const U: u8 = 0;
const C: u8 = 1;

impl Assignment for ShadowAssignment {
    fn bind<'a>(&'a self, branes: &[String]) -> Box<dyn BoundAssignment + 'a> {
        Box::new(ShadowBound {
            d: self.d as i64,
            chi_m: Q::from_integer(self.chi_m),
            chi: branes
                .iter()
                .map(|b| Q::from_integer(self.chi.get(b).copied().unwrap_or(0)))
                .collect(),
        })
    }
}

impl BoundAssignment for ShadowBound {
    fn dim(&self, s: Sector) -> usize {
        match s {
            Sector::Closed => 2,
            Sector::Open(..) => 1,
        }
    }

    fn degree(&self, s: Sector, i: usize) -> i64 {
        match (s, i as u8) {
            (Sector::Closed, C) => -self.d,
            _ => 0,
        }
    }

    fn basis_name(&self, s: Sector, i: usize) -> String {
        match (s, i as u8) {
            (Sector::Closed, U) => "u".into(),
            (Sector::Closed, _) => "c".into(),
            (Sector::Open(..), _) => "o".into(),
        }
    }

    fn has_odd(&self) -> bool {
        self.d % 2 != 0
    }

    fn apply(&self, g: Generator, input: &[u8], out: &mut Vec<(Q, Outputs)>) {
        use Generator::*;
        let chi = |k: BraneId| self.chi[k as usize];
        match g {
            ClosedUnit | OpenUnit(_) => out.push((Q::one(), smallvec![U])),
            ClosedMult => {
                if input[0] + input[1] <= C {
                    out.push((Q::one(), smallvec![input[0] + input[1]]));
                }
            }
            ClosedComult => {
                if input[0] == U && !self.chi_m.is_zero() {
                    out.push((self.chi_m, smallvec![C, C]));
                }
            }
            OpenMult(..) => out.push((Q::one(), smallvec![U])),
            Zipper(_) => {
                if input[0] == U {
                    out.push((Q::one(), smallvec![U]));
                }
            }
            Cozipper(k) | WindowCup(k) => {
                if !chi(k).is_zero() {
                    out.push((chi(k), smallvec![C]));
                }
            }
            OpenComult(..) | Saddle(..) | Comodule(..) => {}
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
pub enum TableError {
    #[error("unknown generator {0}")]
    UnknownGenerator(String),
    #[error("entry ({row},{col}) of {generator} lies outside its {rows}x{cols} matrix")]
    OutOfRange {
        generator: String,
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },
    #[error("sector {0} declared twice")]
    DuplicateSector(String),
}

/// A graded sector: basis element names with degrees.
pub type SectorBasis = Vec<(String, i64)>;

/// An assignment read from a file: explicit sectors and sparse generator
/// matrices. Undeclared open sectors are zero; undeclared generators are
/// zero maps. Matrix rows and columns index tensor bases in mixed radix,
/// first strand most significant.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TableAssignment {
    pub closed: SectorBasis,
    pub open: BTreeMap<(String, String), SectorBasis>,
    /// generator name → (row, col, value)
    pub maps: BTreeMap<String, Vec<(usize, usize, Q)>>,
}

struct TableBound<'a> {
    table: &'a TableAssignment,
    open: HashMap<(BraneId, BraneId), &'a SectorBasis>,
    /// generator → column → [(value, outputs)]
    maps: HashMap<Generator, HashMap<usize, Vec<(Q, Outputs)>>>,
    odd: bool,
}

impl TableAssignment {
    fn sector<'a>(
        &'a self,
        open: &HashMap<(BraneId, BraneId), &'a SectorBasis>,
        s: Sector,
    ) -> Option<&'a SectorBasis> {
        match s {
            Sector::Closed => Some(&self.closed),
            Sector::Open(i, j) => open.get(&(i, j)).copied(),
        }
    }

    /// Check every matrix against the sectors of the branes it names.
    pub fn validate(&self, branes: &[String]) -> Result<(), TableError> {
        let all = self.all_branes();
        for name in self.maps.keys() {
            if Generator::parse(name, &all).is_none() {
                return Err(TableError::UnknownGenerator(name.clone()));
            }
        }
        self.resolve(branes).map(|_| ())
    }

    fn all_branes(&self) -> Vec<String> {
        let mut names: Vec<String> = self
            .open
            .keys()
            .flat_map(|(i, j)| [i.clone(), j.clone()])
            .collect();
        for key in self.maps.keys() {
            if let Some((_, rest)) = key.split_once('[') {
                names.extend(rest.trim_end_matches(']').split(',').map(|s| s.trim().to_string()));
            }
        }
        names.sort();
        names.dedup();
        names
    }

    #[allow(clippy::type_complexity)]
    fn resolve<'a>(
        &'a self,
        branes: &[String],
    ) -> Result<
        (
            HashMap<(BraneId, BraneId), &'a SectorBasis>,
            HashMap<Generator, HashMap<usize, Vec<(Q, Outputs)>>>,
        ),
        TableError,
    > {
        let id = |n: &str| branes.iter().position(|b| b == n).map(|k| k as BraneId);
        let mut open = HashMap::new();
        for ((i, j), basis) in &self.open {
            if let (Some(a), Some(b)) = (id(i), id(j)) {
                open.insert((a, b), basis);
            }
        }
        let dims = |sectors: &[Sector]| -> Vec<usize> {
            sectors
                .iter()
                .map(|&s| self.sector(&open, s).map_or(0, Vec::len))
                .collect()
        };
        let mut maps = HashMap::new();
        for (name, entries) in &self.maps {
            // entries naming branes outside this table are never used
            let Some(g) = Generator::parse(name, branes) else { continue };
            let (in_dims, out_dims) = (dims(&g.inputs()), dims(&g.outputs()));
            let cols: usize = in_dims.iter().product();
            let rows: usize = out_dims.iter().product();
            let mut by_col: HashMap<usize, Vec<(Q, Outputs)>> = HashMap::new();
            for &(row, col, value) in entries {
                if row >= rows || col >= cols {
                    return Err(TableError::OutOfRange {
                        generator: name.clone(),
                        row,
                        col,
                        rows,
                        cols,
                    });
                }
                if value.is_zero() {
                    continue;
                }
                let mut idx: Outputs = SmallVec::new();
                let mut r = row;
                for &d in out_dims.iter().rev() {
                    idx.push((r % d) as u8);
                    r /= d;
                }
                idx.reverse();
                by_col.entry(col).or_default().push((value, idx));
            }
            maps.insert(g, by_col);
        }
        Ok((open, maps))
    }
}

impl Assignment for TableAssignment {
    /// Panics if a matrix entry is out of range; call
    /// [`TableAssignment::validate`] first on untrusted input.
    fn bind<'a>(&'a self, branes: &[String]) -> Box<dyn BoundAssignment + 'a> {
        let (open, maps) = self.resolve(branes).expect("validated assignment");
        let odd = self
            .closed
            .iter()
            .chain(open.values().flat_map(|b| b.iter()))
            .any(|(_, d)| d % 2 != 0);
        Box::new(TableBound {
            table: self,
            open,
            maps,
            odd,
        })
    }
}

impl BoundAssignment for TableBound<'_> {
    fn dim(&self, s: Sector) -> usize {
        self.table.sector(&self.open, s).map_or(0, Vec::len)
    }

    fn degree(&self, s: Sector, i: usize) -> i64 {
        self.table.sector(&self.open, s).map_or(0, |b| b[i].1)
    }

    fn basis_name(&self, s: Sector, i: usize) -> String {
        self.table
            .sector(&self.open, s)
            .map_or_else(String::new, |b| b[i].0.clone())
    }

    fn has_odd(&self) -> bool {
        self.odd
    }

    fn apply(&self, g: Generator, input: &[u8], out: &mut Vec<(Q, Outputs)>) {
        let Some(by_col) = self.maps.get(&g) else { return };
        let mut col = 0;
        for (s, &x) in g.inputs().iter().zip(input) {
            col = col * self.dim(*s) + x as usize;
        }
        if let Some(entries) = by_col.get(&col) {
            out.extend(entries.iter().cloned());
        }
    }
}

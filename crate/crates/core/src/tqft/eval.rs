use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;
use smallvec::SmallVec;
use thiserror::Error;

use super::assignment::{Assignment, BoundAssignment, Outputs};
use super::decompose::{decompose, DecomposeError, Decomposition};
use super::{Sector, StrandId};
use crate::surface::Cobordism;
use crate::Q;

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
pub enum EvalError {
    #[error(transparent)]
    Decompose(#[from] DecomposeError),
    #[error("sector {sector} has {dim} basis elements; at most 256 are supported")]
    SectorTooLarge { sector: String, dim: usize },
    #[error("a tensor space of the profile exceeds the index range")]
    TooLarge,
}

type Tuple = SmallVec<[u8; 24]>;

/// Matrix of the linear map a cobordism induces. Rows and columns index
/// tensor bases in mixed radix, first strand most significant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperationMatrix {
    pub branes: Vec<String>,
    pub inputs: Vec<Sector>,
    pub outputs: Vec<Sector>,
    pub in_dims: Vec<usize>,
    pub out_dims: Vec<usize>,
    pub in_basis: Vec<Vec<String>>,
    pub out_basis: Vec<Vec<String>>,
    pub in_degrees: Vec<Vec<i64>>,
    pub out_degrees: Vec<Vec<i64>>,
    /// nonzero entries only
    pub entries: BTreeMap<(usize, usize), Q>,
}

fn decode(mut index: usize, dims: &[usize]) -> Tuple {
    let mut t: Tuple = SmallVec::with_capacity(dims.len());
    for &d in dims.iter().rev() {
        t.push((index % d) as u8);
        index /= d;
    }
    t.reverse();
    t
}

fn encode(t: &[u8], dims: &[usize]) -> usize {
    t.iter().zip(dims).fold(0, |acc, (&x, &d)| acc * d + x as usize)
}

impl OperationMatrix {
    pub fn rows(&self) -> usize {
        self.out_dims.iter().product()
    }

    pub fn cols(&self) -> usize {
        self.in_dims.iter().product()
    }

    pub fn get(&self, row: usize, col: usize) -> Q {
        self.entries.get(&(row, col)).copied().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// `Some(±1)` if `other = ±self` with matching profiles.
    pub fn equal_up_to_sign(&self, other: &OperationMatrix) -> Option<i8> {
        if self.in_dims != other.in_dims || self.out_dims != other.out_dims {
            return None;
        }
        if self.entries == other.entries {
            return Some(1);
        }
        let negated = self.entries.len() == other.entries.len()
            && self
                .entries
                .iter()
                .all(|(k, v)| other.entries.get(k).is_some_and(|w| *w == -*v));
        negated.then_some(-1)
    }

    /// Graded Kronecker product, the map of the disjoint union with `self`
    /// first: `(f ⊗ g)(x ⊗ y) = (-1)^{|g||x|} f(x) ⊗ g(y)`. Without odd
    /// degrees this is the plain Kronecker product.
    pub fn tensor(&self, other: &OperationMatrix) -> OperationMatrix {
        let (orows, ocols) = (other.rows(), other.cols());
        let in_degree = |c: usize| -> i64 {
            decode(c, &self.in_dims)
                .iter()
                .zip(&self.in_degrees)
                .map(|(&x, d)| d[x as usize])
                .sum()
        };
        let mut entries = BTreeMap::new();
        for (&(r, c), a) in &self.entries {
            for (&(s, d), b) in &other.entries {
                let odd = (other.entry_shift(s, d) * in_degree(c)) % 2 != 0;
                let v = if odd { -(*a * *b) } else { *a * *b };
                entries.insert((r * orows + s, c * ocols + d), v);
            }
        }
        let cat = |x: &[Sector], y: &[Sector]| [x, y].concat();
        OperationMatrix {
            branes: self.branes.clone(),
            inputs: cat(&self.inputs, &other.inputs),
            outputs: cat(&self.outputs, &other.outputs),
            in_dims: [self.in_dims.clone(), other.in_dims.clone()].concat(),
            out_dims: [self.out_dims.clone(), other.out_dims.clone()].concat(),
            in_basis: [self.in_basis.clone(), other.in_basis.clone()].concat(),
            out_basis: [self.out_basis.clone(), other.out_basis.clone()].concat(),
            in_degrees: [self.in_degrees.clone(), other.in_degrees.clone()].concat(),
            out_degrees: [self.out_degrees.clone(), other.out_degrees.clone()].concat(),
            entries,
        }
    }

    fn entry_shift(&self, row: usize, col: usize) -> i64 {
        let total = |degs: &[Vec<i64>], t: &[u8]| -> i64 { t.iter().zip(degs).map(|(&x, d)| d[x as usize]).sum() };
        total(&self.out_degrees, &decode(row, &self.out_dims)) - total(&self.in_degrees, &decode(col, &self.in_dims))
    }

    /// Degree changes `|row| - |col|` over the nonzero entries; a
    /// homogeneous map has at most one.
    pub fn degree_shifts(&self) -> BTreeSet<i64> {
        self.entries.keys().map(|&(r, c)| self.entry_shift(r, c)).collect()
    }

    fn tuple_name(basis: &[Vec<String>], t: &[u8]) -> String {
        if t.is_empty() {
            return "1".into();
        }
        let names: Vec<&str> = t.iter().zip(basis).map(|(&x, b)| b[x as usize].as_str()).collect();
        names.join("⊗")
    }

    /// The image of every basis tensor with nonzero image, as
    /// `(input, image)` strings in column order.
    pub fn terms(&self) -> Vec<(String, String)> {
        let mut by_col: BTreeMap<usize, Vec<(usize, Q)>> = BTreeMap::new();
        for (&(r, c), v) in &self.entries {
            by_col.entry(c).or_default().push((r, *v));
        }
        by_col
            .into_iter()
            .map(|(c, image)| {
                let input = Self::tuple_name(&self.in_basis, &decode(c, &self.in_dims));
                let mut out = String::new();
                for (k, (r, v)) in image.into_iter().enumerate() {
                    let name = Self::tuple_name(&self.out_basis, &decode(r, &self.out_dims));
                    let (neg, mag) = if v < Q::zero() { (true, -v) } else { (false, v) };
                    match (k, neg) {
                        (0, true) => out.push('-'),
                        (0, false) => {}
                        (_, true) => out.push_str(" - "),
                        (_, false) => out.push_str(" + "),
                    }
                    if !mag.is_one() {
                        out.push_str(&format!("{mag}·"));
                    }
                    out.push_str(&name);
                }
                (input, out)
            })
            .collect()
    }

    pub fn profile(&self) -> String {
        let side = |s: &[Sector]| {
            if s.is_empty() {
                "1".to_string()
            } else {
                s.iter().map(|x| x.render(&self.branes)).collect::<Vec<_>>().join("⊗")
            }
        };
        format!("{} → {}", side(&self.inputs), side(&self.outputs))
    }
}

impl fmt::Display for OperationMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        let lines: Vec<String> = terms.into_iter().map(|(i, o)| format!("{i} ↦ {o}")).collect();
        write!(f, "{}", lines.join("; "))
    }
}

/// Decompose and evaluate.
pub fn evaluate(c: &Cobordism, assignment: &dyn Assignment) -> Result<OperationMatrix, EvalError> {
    let dec = decompose(c)?;
    evaluate_decomposition(&dec, assignment)
}

pub fn evaluate_decomposition(
    dec: &Decomposition,
    assignment: &dyn Assignment,
) -> Result<OperationMatrix, EvalError> {
    let bound = assignment.bind(&dec.branes);
    run(dec, bound.as_ref(), false)
}

/// Whether the decomposition evaluates to zero, stopping at the first
/// nonzero column.
pub(crate) fn vanishes(dec: &Decomposition, bound: &dyn BoundAssignment) -> Result<bool, EvalError> {
    Ok(run_entries(dec, bound, true)?.0.is_empty())
}

pub(crate) fn run(
    dec: &Decomposition,
    bound: &dyn BoundAssignment,
    stop_early: bool,
) -> Result<OperationMatrix, EvalError> {
    let (entries, in_dims, out_dims) = run_entries(dec, bound, stop_early)?;
    let sector = |s: StrandId| dec.sectors[s as usize];
    let basis = |strands: &[StrandId]| -> Vec<Vec<String>> {
        strands
            .iter()
            .map(|&s| (0..bound.dim(sector(s))).map(|i| bound.basis_name(sector(s), i)).collect())
            .collect()
    };
    let degrees = |strands: &[StrandId]| -> Vec<Vec<i64>> {
        strands
            .iter()
            .map(|&s| (0..bound.dim(sector(s))).map(|i| bound.degree(sector(s), i)).collect())
            .collect()
    };
    Ok(OperationMatrix {
        branes: dec.branes.clone(),
        inputs: dec.inputs.iter().map(|&s| sector(s)).collect(),
        outputs: dec.outputs.iter().map(|&s| sector(s)).collect(),
        in_basis: basis(&dec.inputs),
        out_basis: basis(&dec.outputs),
        in_degrees: degrees(&dec.inputs),
        out_degrees: degrees(&dec.outputs),
        in_dims,
        out_dims,
        entries,
    })
}

type Entries = BTreeMap<(usize, usize), Q>;

fn run_entries(
    dec: &Decomposition,
    bound: &dyn BoundAssignment,
    stop_early: bool,
) -> Result<(Entries, Vec<usize>, Vec<usize>), EvalError> {
    let sector = |s: StrandId| dec.sectors[s as usize];
    let strand_dims: Vec<usize> = dec.sectors.iter().map(|&s| bound.dim(s)).collect();
    for (&s, &d) in dec.sectors.iter().zip(&strand_dims) {
        if d > 256 {
            return Err(EvalError::SectorTooLarge {
                sector: s.render(&dec.branes),
                dim: d,
            });
        }
    }
    let dims = |strands: &[StrandId]| -> Vec<usize> { strands.iter().map(|&s| strand_dims[s as usize]).collect() };
    let in_dims = dims(&dec.inputs);
    let out_dims = dims(&dec.outputs);
    let checked = |d: &[usize]| d.iter().try_fold(1usize, |acc, &x| acc.checked_mul(x)).ok_or(EvalError::TooLarge);
    let cols = checked(&in_dims)?;
    checked(&out_dims)?;
    let odd = bound.has_odd();
    // degree parity per (strand, basis index)
    let parity = |s: StrandId, x: u8| odd && bound.degree(sector(s), x as usize) % 2 != 0;

    let mut entries = BTreeMap::new();
    let mut terms: Vec<(Q, Tuple)> = Vec::new();
    let mut next: Vec<(Q, Tuple)> = Vec::new();
    let mut images: Vec<(Q, Outputs)> = Vec::new();
    let mut live: Vec<StrandId> = Vec::new();
    let mut order: Vec<usize> = Vec::new();
    for col in 0..cols {
        terms.clear();
        terms.push((Q::one(), decode(col, &in_dims)));
        live.clear();
        live.extend_from_slice(&dec.inputs);
        for layer in &dec.layers {
            // positions of the consumed strands, then the others
            order.clear();
            for c in &layer.consumes {
                order.push(live.iter().position(|x| x == c).expect("consumed strand is live"));
            }
            let n_in = order.len();
            for (p, s) in live.iter().enumerate() {
                if !layer.consumes.contains(s) {
                    order.push(p);
                }
            }
            next.clear();
            for (q, t) in &terms {
                let mut sign = false;
                if odd {
                    for a in 0..order.len() {
                        for b in a + 1..order.len() {
                            let (x, y) = (order[a], order[b]);
                            if x > y && parity(live[x], t[x]) && parity(live[y], t[y]) {
                                sign = !sign;
                            }
                        }
                    }
                }
                let operands: SmallVec<[u8; 2]> = order[..n_in].iter().map(|&p| t[p]).collect();
                images.clear();
                bound.apply(layer.generator, &operands, &mut images);
                for (v, outs) in images.drain(..) {
                    let mut nt: Tuple = SmallVec::with_capacity(outs.len() + order.len() - n_in);
                    nt.extend_from_slice(&outs);
                    nt.extend(order[n_in..].iter().map(|&p| t[p]));
                    let prod = if v.is_one() { *q } else { *q * v };
                    let coeff = if sign { -prod } else { prod };
                    next.push((coeff, nt));
                }
            }
            merge(&mut next);
            std::mem::swap(&mut terms, &mut next);
            let rest: SmallVec<[StrandId; 24]> = order[n_in..].iter().map(|&p| live[p]).collect();
            live.clear();
            live.extend_from_slice(&layer.produces);
            live.extend_from_slice(&rest);
            if terms.is_empty() {
                break;
            }
        }
        if terms.is_empty() {
            continue;
        }
        // reorder to the output strands
        order.clear();
        for o in &dec.outputs {
            order.push(live.iter().position(|x| x == o).expect("output strand is live"));
        }
        for (q, t) in &terms {
            let mut sign = false;
            if odd {
                for a in 0..order.len() {
                    for b in a + 1..order.len() {
                        let (x, y) = (order[a], order[b]);
                        if x > y && parity(live[x], t[x]) && parity(live[y], t[y]) {
                            sign = !sign;
                        }
                    }
                }
            }
            let out: Tuple = order.iter().map(|&p| t[p]).collect();
            let row = encode(&out, &out_dims);
            let v = if sign { -*q } else { *q };
            let e = entries.entry((row, col)).or_insert_with(Q::zero);
            *e += v;
            if e.is_zero() {
                entries.remove(&(row, col));
            }
        }
        if stop_early && !entries.is_empty() {
            break;
        }
    }
    Ok((entries, in_dims, out_dims))
}

/// Combine equal tuples and drop zero coefficients.
fn merge(terms: &mut Vec<(Q, Tuple)>) {
    if terms.len() > 1 {
        terms.sort_by(|a, b| a.1.cmp(&b.1));
        let mut out: Vec<(Q, Tuple)> = Vec::with_capacity(terms.len());
        for (q, t) in terms.drain(..) {
            match out.last_mut() {
                Some(last) if last.1 == t => last.0 += q,
                _ => out.push((q, t)),
            }
        }
        *terms = out;
    }
    terms.retain(|(q, _)| !q.is_zero());
}

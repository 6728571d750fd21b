//! Cell-complex Euler characteristics, computed without the `2 - 2g - b`
//! formula or boundary tracing.
//!
//! Each component is one polygon: a commutator pair of sides per handle,
//! then for each boundary circle a connector side, the circle's boundary
//! pieces (one per arc, or one for a closed circle or window) and the
//! connector again reversed. Sewing identifies boundary pieces of two such
//! complexes. χ = V − E + F is counted from the identifications.

use std::collections::BTreeSet;

use crate::sewing::SewPlan;
use crate::surface::{BoundaryCircle, Cobordism, Component};

#[derive(Clone, Copy)]
struct Side {
    edge: usize,
    forward: bool,
}

/// A union of polygons with paired sides; vertices are polygon corners.
#[derive(Default)]
struct Complex {
    sides: Vec<Side>,
    /// (first side, side count) per polygon
    faces: Vec<(usize, usize)>,
    edges: usize,
    /// per circle: the edge ids of its boundary pieces, in order
    pieces: Vec<Vec<usize>>,
    glue: Vec<(usize, usize)>,
}

impl Complex {
    fn add_component(&mut self, comp: &Component) {
        let start = self.sides.len();
        for _ in 0..comp.genus {
            let (a, b) = (self.edges, self.edges + 1);
            self.edges += 2;
            self.sides.extend([
                Side { edge: a, forward: true },
                Side { edge: b, forward: true },
                Side { edge: a, forward: false },
                Side { edge: b, forward: false },
            ]);
        }
        for circle in &comp.circles {
            let count = match circle {
                BoundaryCircle::Mixed(arcs) => arcs.len(),
                _ => 1,
            };
            let connector = self.edges;
            self.edges += 1;
            self.sides.push(Side { edge: connector, forward: true });
            let mut ids = Vec::with_capacity(count);
            for _ in 0..count {
                ids.push(self.edges);
                self.sides.push(Side { edge: self.edges, forward: true });
                self.edges += 1;
            }
            self.sides.push(Side { edge: connector, forward: false });
            self.pieces.push(ids);
        }
        let len = self.sides.len() - start;
        if len == 0 {
            // a sphere: a bigon with its two sides identified
            self.sides.push(Side { edge: self.edges, forward: true });
            self.sides.push(Side { edge: self.edges, forward: false });
            self.edges += 1;
            self.faces.push((start, 2));
            return;
        }
        self.faces.push((start, len));
    }

    /// Identify boundary piece `x` with piece `y`, reversing orientation.
    fn identify(&mut self, x: usize, y: usize) {
        self.glue.push((x, y));
    }

    fn euler_char(&self) -> i64 {
        let n = self.sides.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let next = p[y];
                p[y] = r;
                y = next;
            }
            r
        }
        fn union(p: &mut [usize], a: usize, b: usize) {
            let (ra, rb) = (find(p, a), find(p, b));
            if ra != rb {
                p[ra] = rb;
            }
        }
        // corner j of a face starts side j; side j runs corner j → next
        let mut next = vec![0; n];
        for &(start, len) in &self.faces {
            for k in 0..len {
                next[start + k] = start + (k + 1) % len;
            }
        }
        let ends = |j: usize| {
            if self.sides[j].forward {
                (j, next[j])
            } else {
                (next[j], j)
            }
        };
        let mut uses: Vec<Vec<usize>> = vec![Vec::new(); self.edges];
        for (j, s) in self.sides.iter().enumerate() {
            uses[s.edge].push(j);
        }
        for u in &uses {
            if let [a, b] = u[..] {
                let ((s0, t0), (s1, t1)) = (ends(a), ends(b));
                union(&mut parent, s0, s1);
                union(&mut parent, t0, t1);
            }
        }
        let mut merged_edges = 0;
        for &(x, y) in &self.glue {
            let (s0, t0) = ends(uses[x][0]);
            let (s1, t1) = ends(uses[y][0]);
            union(&mut parent, s0, t1);
            union(&mut parent, t0, s1);
            merged_edges += 1;
        }
        let vertices = (0..n).map(|x| find(&mut parent, x)).collect::<BTreeSet<_>>().len();
        vertices as i64 - (self.edges - merged_edges) as i64 + self.faces.len() as i64
    }
}

/// χ of a cobordism counted on its polygon complex.
pub fn euler_char(c: &Cobordism) -> i64 {
    let mut k = Complex::default();
    for comp in &c.components {
        k.add_component(comp);
    }
    k.euler_char()
}

/// χ of a single component counted on its polygon.
pub fn component_euler_char(comp: &Component) -> i64 {
    let mut k = Complex::default();
    k.add_component(comp);
    k.euler_char()
}

/// χ of the surface obtained by sewing `b` onto `a` along `plan`, counted on
/// the glued polygon complexes. The plan is assumed to be valid.
pub fn sewn_euler_char(a: &Cobordism, b: &Cobordism, plan: &SewPlan) -> i64 {
    let mut k = Complex::default();
    for comp in a.components.iter().chain(&b.components) {
        k.add_component(comp);
    }
    let offset = a.circle_count();
    for &(x, y) in &plan.closed_pairs {
        let (px, py) = (k.pieces[x][0], k.pieces[offset + y][0]);
        k.identify(px, py);
    }
    for (x, y) in &plan.open_pairs {
        let (px, py) = (k.pieces[x.circle][x.arc], k.pieces[offset + y.circle][y.arc]);
        k.identify(px, py);
    }
    k.euler_char()
}

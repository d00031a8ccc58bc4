use alloc::vec::Vec;
use core::fmt;

use super::RhoVector;
use crate::set::{PositionSet, MAX_ELEMENTS};
use crate::{Error, Result};

/// Edge-colored multigraph on `[n]` with one color per vertex. Edges of color
/// `i` never touch vertex `i`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ColoredMultigraph {
    n: usize,
    // adj[i * n + j] = N_i(j)
    adj: Vec<PositionSet>,
}

impl ColoredMultigraph {
    pub fn empty(n: usize) -> Result<Self> {
        if n > MAX_ELEMENTS {
            return Err(Error::Capacity { n, max: MAX_ELEMENTS });
        }
        Ok(ColoredMultigraph { n, adj: alloc::vec![PositionSet::EMPTY; n * n] })
    }

    /// Builds a graph from per-color edge lists.
    pub fn from_edges<E: AsRef<[(usize, usize)]>>(n: usize, edges: &[E]) -> Result<Self> {
        if edges.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: edges.len() });
        }
        let mut g = ColoredMultigraph::empty(n)?;
        for (color, list) in edges.iter().enumerate() {
            for &(a, b) in list.as_ref() {
                g.add_edge(color, a, b)?;
            }
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn add_edge(&mut self, color: usize, a: usize, b: usize) -> Result<()> {
        let n = self.n;
        if color >= n || a >= n || b >= n {
            return Err(Error::IndexOutOfRange { index: color.max(a).max(b) as u64, bound: n as u64 });
        }
        if a == b || a == color || b == color {
            return Err(Error::InvalidParameter(alloc::format!("edge {{{a},{b}}} is not allowed in color {color}")));
        }
        self.adj[color * n + a].insert(b);
        self.adj[color * n + b].insert(a);
        Ok(())
    }

    pub fn remove_edge(&mut self, color: usize, a: usize, b: usize) {
        let n = self.n;
        self.adj[color * n + a].remove(b);
        self.adj[color * n + b].remove(a);
    }

    pub fn has_edge(&self, color: usize, a: usize, b: usize) -> bool {
        self.adj[color * self.n + a].contains(b)
    }

    /// `N_color(v)`.
    pub fn neighbors(&self, color: usize, v: usize) -> PositionSet {
        self.adj[color * self.n + v]
    }

    /// Edges of one color as sorted pairs `(a, b)` with `a < b`.
    pub fn edges(&self, color: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.n {
            for b in self.neighbors(color, a).iter().filter(|&b| b > a) {
                out.push((a, b));
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|s| s.len()).sum::<usize>() / 2
    }
}

/// Why a multigraph fails the conditions that make it usable for blocking sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MultigraphViolation {
    /// `N_i(rho_i)` is not `{j != i : j < rho_i}`.
    RhoNeighborhood { color: usize, expected: PositionSet, found: PositionSet },
    /// No color outside `{j, k, l}` separates the path `j - k - l`.
    UnseparatedPath { j: usize, k: usize, l: usize },
    /// `rho` and the graph disagree on `n`.
    Dimension { rho: usize, graph: usize },
}

impl fmt::Display for MultigraphViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MultigraphViolation::RhoNeighborhood { color, expected, found } => {
                write!(f, "color {color}: neighbors of rho are {found:?}, expected {expected:?}")
            }
            MultigraphViolation::UnseparatedPath { j, k, l } => {
                write!(f, "no color separates the path {j}-{k}-{l}")
            }
            MultigraphViolation::Dimension { rho, graph } => {
                write!(f, "rho has length {rho} but the graph has {graph} vertices")
            }
        }
    }
}

/// Checks the neighborhood condition at every `rho_i` and the path-separation
/// condition for every vertex `k` and pair `j < l` of other vertices.
pub fn verify_multigraph(rho: &RhoVector, g: &ColoredMultigraph) -> core::result::Result<(), MultigraphViolation> {
    let n = g.n();
    if rho.n() != n {
        return Err(MultigraphViolation::Dimension { rho: rho.n(), graph: n });
    }
    for i in 0..n {
        let r = rho.get(i);
        let expected = PositionSet::full(r).without(i);
        let found = g.neighbors(i, r);
        if found != expected {
            return Err(MultigraphViolation::RhoNeighborhood { color: i, expected, found });
        }
    }
    for k in 0..n {
        for j in 0..n {
            if j == k {
                continue;
            }
            for l in j + 1..n {
                if l == k {
                    continue;
                }
                let separated = (0..n).any(|i| {
                    i != j && i != k && i != l && {
                        let nb = g.neighbors(i, k);
                        nb.contains(j) != nb.contains(l)
                    }
                });
                if !separated {
                    return Err(MultigraphViolation::UnseparatedPath { j, k, l });
                }
            }
        }
    }
    Ok(())
}

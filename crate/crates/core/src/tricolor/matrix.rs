use alloc::vec::Vec;
use core::fmt;

use super::cutting::{verify_cutting_family, CuttingFamily};
use crate::perms::{factorial, unranked_position, MAX_RANK_N};
use crate::{Error, Result};

/// Three `m x m` matrices over `[n]`, one per color, read entry by entry.
pub trait MatrixTriple {
    fn n(&self) -> usize;
    fn m(&self) -> u64;
    /// `A^color_{pq}`.
    fn entry(&self, color: usize, p: u64, q: u64) -> usize;
}

/// Position of agent `i` in the permutation with lexicographic index `p`.
pub fn diagonal(n: usize, i: usize, p: u64) -> Result<usize> {
    let m = factorial(n)?;
    if i >= n || p >= m {
        return Err(Error::IndexOutOfRange {
            index: if i >= n { i as u64 } else { p },
            bound: if i >= n { n as u64 } else { m },
        });
    }
    Ok(unranked_position(n, p, i))
}

/// Everything the constructed triple needs about one index `p`: the
/// diagonal values `d^i_p` and the chosen set indices `l(i, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IndexData {
    pub d: [usize; 3],
    pub ell: [usize; 3],
}

/// The triple with `m = n!` and diagonals given by the positions of agents
/// 0, 1, 2, derived from a cutting family. Entries are computed on demand.
#[derive(Clone, Debug)]
pub struct ConstructedTriple {
    family: CuttingFamily,
    m: u64,
}

impl ConstructedTriple {
    /// Checks the family before use.
    pub fn new(family: CuttingFamily) -> Result<Self> {
        let n = family.n();
        if n < 5 {
            return Err(Error::InvalidParameter(alloc::format!("need n >= 5, got {n}")));
        }
        if n > MAX_RANK_N {
            return Err(Error::Capacity { n, max: MAX_RANK_N });
        }
        verify_cutting_family(&family).map_err(|v| Error::Inconsistent(alloc::format!("{v}")))?;
        let m = factorial(n)?;
        Ok(ConstructedTriple { family, m })
    }

    pub fn family(&self) -> &CuttingFamily {
        &self.family
    }

    /// Smallest `l` whose color-`i` set contains `d^i_p` but not `d^{i+1}_p`.
    pub fn ell_index(&self, i: usize, p: u64) -> usize {
        self.index_data(p).ell[i]
    }

    pub fn index_data(&self, p: u64) -> IndexData {
        let n = self.family.n();
        let d = [0, 1, 2].map(|i| unranked_position(n, p, i));
        let ell = [0, 1, 2].map(|i| {
            let (own, next) = (d[i], d[(i + 1) % 3]);
            self.family
                .sets(i)
                .iter()
                .position(|s| s.contains(own) && !s.contains(next))
                .expect("verified family separates every pair")
        });
        IndexData { d, ell }
    }

    /// `A^i_{pq}` from precomputed index data for `p` (row) and `q` (column).
    #[inline]
    pub fn entry_from(&self, i: usize, same: bool, row: &IndexData, col: &IndexData) -> usize {
        if same {
            return row.d[i];
        }
        let prev = (i + 2) % 3;
        self.family
            .get(i, col.ell[i])
            .difference(self.family.get(prev, row.ell[prev]))
            .min()
            .expect("verified family has no cross-color containment")
    }

    /// Index data for every `p`, for sweeps over small `n`.
    pub fn index_table(&self) -> Vec<IndexData> {
        (0..self.m).map(|p| self.index_data(p)).collect()
    }
}

impl MatrixTriple for ConstructedTriple {
    fn n(&self) -> usize {
        self.family.n()
    }

    fn m(&self) -> u64 {
        self.m
    }

    fn entry(&self, color: usize, p: u64, q: u64) -> usize {
        if p == q {
            return unranked_position(self.family.n(), p, color);
        }
        self.entry_from(color, false, &self.index_data(p), &self.index_data(q))
    }
}

/// A fully stored triple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExplicitTriple {
    n: usize,
    m: usize,
    // cells[color][p * m + q]
    cells: [Vec<usize>; 3],
}

impl ExplicitTriple {
    pub fn new(n: usize, m: usize, cells: [Vec<usize>; 3]) -> Result<Self> {
        for c in &cells {
            if c.len() != m * m {
                return Err(Error::DimensionMismatch { expected: m * m, found: c.len() });
            }
            if let Some(&x) = c.iter().find(|&&x| x >= n) {
                return Err(Error::IndexOutOfRange { index: x as u64, bound: n as u64 });
            }
        }
        Ok(ExplicitTriple { n, m, cells })
    }

    /// Materializes any triple. Only sensible for small `m`.
    pub fn from_triple<T: MatrixTriple + ?Sized>(t: &T) -> Self {
        let m = t.m() as usize;
        let cells = [0, 1, 2].map(|c| (0..m * m).map(|x| t.entry(c, (x / m) as u64, (x % m) as u64)).collect());
        ExplicitTriple { n: t.n(), m, cells }
    }

    pub fn row(&self, color: usize, p: usize) -> &[usize] {
        &self.cells[color][p * self.m..(p + 1) * self.m]
    }
}

impl MatrixTriple for ExplicitTriple {
    fn n(&self) -> usize {
        self.n
    }

    fn m(&self) -> u64 {
        self.m as u64
    }

    fn entry(&self, color: usize, p: u64, q: u64) -> usize {
        self.cells[color][p as usize * self.m + q as usize]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TripleViolation {
    Diagonal {
        color: usize,
        p: u64,
        expected: usize,
        found: usize,
    },
    /// `A^color_{pq} == A^{color+1}_{qr}`.
    Clash {
        color: usize,
        p: u64,
        q: u64,
        r: u64,
    },
}

impl fmt::Display for TripleViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TripleViolation::Diagonal { color, p, expected, found } => {
                write!(f, "A^{color}[{p}][{p}] = {found}, expected {expected}")
            }
            TripleViolation::Clash { color, p, q, r } => {
                write!(f, "A^{color}[{p}][{q}] equals A^{}[{q}][{r}]", (color + 1) % 3)
            }
        }
    }
}

/// Checks the diagonal against `d` and every quadruple `(i, p, q, r)` with
/// `p` in `rows`. Returns the number of quadruples checked.
pub fn verify_triple<T: MatrixTriple + ?Sized>(
    t: &T,
    d: impl Fn(usize, u64) -> usize,
    rows: core::ops::Range<u64>,
) -> core::result::Result<u64, TripleViolation> {
    let m = t.m();
    for color in 0..3 {
        for p in rows.clone() {
            let (expected, found) = (d(color, p), t.entry(color, p, p));
            if expected != found {
                return Err(TripleViolation::Diagonal { color, p, expected, found });
            }
        }
    }
    let mut checked = 0;
    let mut next_row = alloc::vec![0usize; m as usize];
    for color in 0..3 {
        let next = (color + 1) % 3;
        for q in 0..m {
            // Row q of the next matrix, as a set of values.
            let mut values = 0u64;
            for (r, slot) in next_row.iter_mut().enumerate() {
                *slot = t.entry(next, q, r as u64);
                values |= 1 << *slot;
            }
            for p in rows.clone() {
                let a = t.entry(color, p, q);
                checked += m;
                if values >> a & 1 == 1 {
                    let r = next_row.iter().position(|&x| x == a).unwrap() as u64;
                    return Err(TripleViolation::Clash { color, p, q, r });
                }
            }
        }
    }
    Ok(checked)
}

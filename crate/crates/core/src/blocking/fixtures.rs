//! Hand-transcribed mechanism data for small `n`.

use alloc::vec::Vec;

use super::multigraph::ColoredMultigraph;
use super::sets::BlockingSets;
use super::RhoVector;
use crate::perms::Permutation;
use crate::set::PositionSet;
use crate::{Error, Result};

/// `rho` used with the four-agent table.
pub const G4_RHO: [usize; 4] = [1, 0, 1, 0];

// Laid out as printed: row r has b0 = r / 2, b2 = r % 2; column c has
// b1 = c / 2, b3 = c % 2.
const G4_GRID: [[[usize; 4]; 4]; 4] = [
    [[2, 3, 1, 0], [2, 3, 0, 1], [0, 3, 1, 2], [0, 3, 2, 1]],
    [[2, 1, 3, 0], [2, 0, 3, 1], [3, 1, 0, 2], [3, 0, 2, 1]],
    [[3, 2, 1, 0], [3, 1, 0, 2], [0, 2, 1, 3], [0, 1, 2, 3]],
    [[1, 2, 3, 0], [1, 0, 3, 2], [1, 2, 0, 3], [1, 0, 2, 3]],
];

/// The four-agent rule as 16 rankings indexed by message mask (bit `i` is
/// agent `i`'s message).
pub fn g4_table() -> Vec<Permutation> {
    (0..16u32)
        .map(|mask| {
            let bit = |i: u32| ((mask >> i) & 1) as usize;
            let row = 2 * bit(0) + bit(2);
            let col = 2 * bit(1) + bit(3);
            Permutation::new(G4_GRID[row][col].to_vec()).expect("table entry is a permutation")
        })
        .collect()
}

// Blocking sets for n = 6 and rho_i = i + 1, one row per (i, b) and one
// column per j, elements written as digit strings. Diagonal cells are empty.
const BLOCKING_N6: [[&str; 6]; 12] = [
    ["", "", "35", "24", "3", "2"],
    ["", "2345", "14", "15", "125", "134"],
    ["24", "", "0", "5", "0", "3"],
    ["35", "", "345", "024", "235", "024"],
    ["3", "35", "", "01", "", "1"],
    ["145", "04", "", "45", "0135", "034"],
    ["45", "4", "4", "", "012", "0"],
    ["12", "025", "015", "", "5", "124"],
    ["135", "05", "5", "05", "", "0123"],
    ["2", "23", "013", "12", "", ""],
    ["", "24", "13", "2", "1", ""],
    ["1234", "03", "04", "014", "023", ""],
];

/// The six-agent blocking-set table together with its `rho`.
pub fn blocking_sets_n6() -> (RhoVector, BlockingSets) {
    let mut s = BlockingSets::empty(6).expect("n = 6 fits");
    for (row, cells) in BLOCKING_N6.iter().enumerate() {
        let (i, b) = (row / 2, row % 2 == 1);
        for (j, cell) in cells.iter().enumerate() {
            if j == i {
                continue;
            }
            let set: PositionSet = cell.bytes().map(|c| (c - b'0') as usize).collect();
            s.set(b, i, j, set).expect("table cell is a valid blocking set");
        }
    }
    (RhoVector::successor(6), s)
}

const EDGES_N5: [&[(usize, usize)]; 5] = [
    &[(1, 3), (1, 4), (2, 3)],
    &[(0, 2), (0, 3), (3, 4)],
    &[(0, 3), (0, 4), (1, 3)],
    &[(0, 1), (0, 2), (2, 4)],
    &[(0, 1), (0, 3), (2, 3)],
];

const EDGES_N6: [&[(usize, usize)]; 6] = [
    &[(2, 3), (2, 5), (3, 4)],
    &[(0, 2), (0, 4), (3, 5)],
    &[(0, 3), (1, 3), (1, 5)],
    &[(0, 4), (0, 5), (1, 4), (2, 4)],
    &[(0, 1), (0, 3), (0, 5), (1, 5), (2, 5), (3, 5)],
    &[(1, 2), (1, 4), (2, 3)],
];

const EDGES_N7: [&[(usize, usize)]; 7] = [
    &[(2, 3), (2, 6), (3, 6), (4, 5)],
    &[(0, 2), (0, 6), (3, 4), (3, 5), (3, 6), (4, 5)],
    &[(0, 3), (0, 5), (1, 3), (1, 4), (1, 5), (4, 6)],
    &[(0, 2), (0, 4), (1, 4), (1, 6), (2, 4), (2, 5), (2, 6)],
    &[(0, 1), (0, 2), (0, 5), (1, 3), (1, 5), (1, 6), (2, 5), (3, 5), (3, 6)],
    &[(0, 1), (0, 2), (0, 3), (0, 4), (0, 6), (1, 4), (1, 6), (2, 6), (3, 4), (3, 6), (4, 6)],
    &[(1, 4), (1, 5), (2, 3), (2, 5), (3, 4)],
];

const EDGES_N8: [&[(usize, usize)]; 8] = [
    &[(2, 3), (2, 4), (3, 5), (3, 7), (4, 7), (5, 6)],
    &[(0, 2), (0, 4), (3, 5), (3, 6), (3, 7), (4, 6), (5, 7)],
    &[(0, 3), (0, 6), (1, 3), (1, 5), (1, 6), (4, 5), (4, 6), (6, 7)],
    &[(0, 4), (1, 2), (1, 4), (1, 5), (1, 6), (2, 4), (2, 6), (2, 7), (5, 7)],
    &[(0, 2), (0, 5), (1, 3), (1, 5), (1, 7), (2, 5), (2, 7), (3, 5)],
    &[(0, 2), (0, 6), (1, 6), (2, 3), (2, 6), (3, 6), (4, 6), (4, 7)],
    &[(0, 2), (0, 4), (0, 7), (1, 4), (1, 5), (1, 7), (2, 3), (2, 5), (2, 7), (3, 7), (4, 7), (5, 7)],
    &[(1, 2), (1, 3), (1, 4), (1, 5), (1, 6), (2, 4), (3, 4), (3, 5), (4, 5)],
];

const EDGES_N9: [&[(usize, usize)]; 9] = [
    &[(2, 4), (2, 5), (2, 7), (3, 5), (3, 7), (4, 5), (4, 8), (6, 8), (7, 8)],
    &[(0, 2), (0, 3), (0, 6), (0, 8), (3, 4), (3, 6), (3, 8)],
    &[(0, 3), (0, 4), (1, 3), (1, 4), (4, 5), (4, 8), (5, 6), (5, 8), (6, 8)],
    &[(0, 1), (0, 4), (0, 5), (0, 8), (1, 4), (1, 7), (2, 4), (2, 8), (5, 7), (6, 8), (7, 8)],
    &[(0, 1), (0, 3), (0, 5), (0, 6), (1, 2), (1, 5), (2, 5), (2, 6), (2, 7), (3, 5), (3, 7), (3, 8), (6, 7), (6, 8)],
    &[(0, 1), (0, 4), (0, 6), (1, 4), (1, 6), (1, 8), (2, 6), (2, 8), (3, 6), (3, 7), (4, 6), (4, 8)],
    &[(0, 1), (0, 4), (0, 7), (0, 8), (1, 4), (1, 7), (2, 3), (2, 7), (3, 4), (3, 5), (3, 7), (4, 7), (5, 7)],
    &[(0, 2), (0, 5), (0, 8), (1, 3), (1, 4), (1, 8), (2, 5), (2, 8), (3, 5), (3, 6), (3, 8), (4, 8), (5, 8), (6, 8)],
    &[(1, 5), (1, 6), (2, 3), (2, 6), (3, 6), (3, 7), (4, 7), (5, 6), (5, 7)],
];

const EDGES_N10: [&[(usize, usize)]; 10] = [
    &[(2, 3), (2, 7), (3, 4), (3, 9), (4, 8), (4, 9), (5, 8), (5, 9), (7, 8)],
    &[(0, 2), (0, 4), (3, 9), (4, 7), (8, 9)],
    &[(0, 3), (0, 5), (0, 7), (0, 9), (1, 3), (1, 7), (1, 8), (5, 7), (5, 8), (5, 9), (6, 9), (7, 8), (7, 9), (8, 9)],
    &[(0, 2), (0, 4), (0, 7), (1, 4), (1, 6), (1, 9), (2, 4), (2, 5), (2, 6), (2, 8), (5, 7), (6, 8), (7, 8), (8, 9)],
    &[(0, 2), (0, 5), (0, 6), (0, 9), (1, 3), (1, 5), (1, 8), (2, 3), (2, 5), (2, 9), (3, 5), (6, 7)],
    &[(0, 6), (1, 6), (2, 6), (2, 8), (3, 4), (3, 6), (4, 6), (7, 9)],
    &[(0, 5), (0, 7), (1, 5), (1, 7), (2, 7), (3, 5), (3, 7), (3, 8), (4, 5), (4, 7), (4, 8), (4, 9), (5, 7), (5, 9)],
    &[(0, 2), (0, 8), (0, 9), (1, 6), (1, 8), (2, 8), (3, 6), (3, 8), (4, 6), (4, 8), (5, 8), (6, 8)],
    &[
        (0, 1),
        (0, 9),
        (1, 3),
        (1, 5),
        (1, 9),
        (2, 4),
        (2, 6),
        (2, 9),
        (3, 4),
        (3, 6),
        (3, 9),
        (4, 5),
        (4, 9),
        (5, 9),
        (6, 9),
        (7, 9),
    ],
    &[(1, 4), (1, 5), (1, 7), (2, 7), (3, 5), (3, 8), (4, 6), (4, 8), (5, 7)],
];
/// Transcribed multigraph and `rho` for `5 <= n <= 10`.
pub fn fixture_multigraph(n: usize) -> Result<(RhoVector, ColoredMultigraph)> {
    let edges: &[&[(usize, usize)]] = match n {
        5 => &EDGES_N5,
        6 => &EDGES_N6,
        7 => &EDGES_N7,
        8 => &EDGES_N8,
        9 => &EDGES_N9,
        10 => &EDGES_N10,
        _ => {
            return Err(Error::InvalidParameter(alloc::format!(
                "no transcribed multigraph for n = {n} (available: 5..=10)"
            )))
        }
    };
    let rho = if n == 5 { RhoVector::new(alloc::vec![3, 2, 3, 1, 1])? } else { RhoVector::successor(n) };
    Ok((rho, ColoredMultigraph::from_edges(n, edges)?))
}

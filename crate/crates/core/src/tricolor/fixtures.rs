//! A hand-made `5 x 5` triple over `[5]` with diagonals `d^i_p = p + i mod 5`.

use super::matrix::ExplicitTriple;

const A0: [[usize; 5]; 5] = [[0, 3, 4, 3, 4], [4, 1, 4, 1, 4], [3, 3, 2, 3, 2], [3, 3, 2, 3, 2], [0, 3, 4, 3, 4]];

const A1: [[usize; 5]; 5] = [[1, 2, 1, 1, 2], [0, 2, 0, 4, 0], [0, 0, 3, 1, 0], [0, 0, 0, 4, 0], [0, 0, 0, 1, 0]];

const A2: [[usize; 5]; 5] = [[2, 2, 4, 4, 2], [1, 3, 1, 1, 1], [2, 2, 4, 4, 2], [2, 0, 0, 0, 2], [1, 3, 1, 1, 1]];

pub fn shifted_diagonal_triple() -> ExplicitTriple {
    let flat = |a: &[[usize; 5]; 5]| a.iter().flatten().copied().collect();
    ExplicitTriple::new(5, 5, [flat(&A0), flat(&A1), flat(&A2)]).expect("fixture is well formed")
}

/// `d^i_p` for [`shifted_diagonal_triple`].
pub fn shifted_diagonal(i: usize, p: u64) -> usize {
    (p as usize + i) % 5
}

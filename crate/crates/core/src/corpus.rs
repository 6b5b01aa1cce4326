//! Small named matrices used throughout the examples, tests and CLI.

use crate::gf2::Gf2Matrix;

/// The 3x4 path matrix `[[1,1,0,0],[0,1,1,0],[0,0,1,1]]`.
///
/// Its real nullspace is spanned by `(1,-1,1,-1)`, which makes every
/// nullspace-based quantity computable by hand.
pub fn chain_3x4() -> Gf2Matrix {
    Gf2Matrix::from_rows(&[[1u8, 1, 0, 0], [0, 1, 1, 0], [0, 0, 1, 1]]).expect("valid matrix")
}

/// The parity-check matrix of the [7,4] Hamming code whose column `i`
/// (1-based) is the binary expansion of `i`, least significant bit in row 1.
pub fn hamming_7_4() -> Gf2Matrix {
    let mut h = Gf2Matrix::zeros(3, 7).expect("valid dimensions");
    for col in 1..=7usize {
        for row in 0..3 {
            if (col >> row) & 1 == 1 {
                h.set(row, col - 1, true);
            }
        }
    }
    h
}

/// A single parity check over `n` variables.
pub fn single_check(n: usize) -> Gf2Matrix {
    Gf2Matrix::from_rows(&[vec![1u8; n]]).expect("valid matrix")
}

/// Length-`n` cycle: row `j` checks variables `j` and `j+1 mod n`.
pub fn cycle(n: usize) -> Gf2Matrix {
    let mut h = Gf2Matrix::zeros(n, n).expect("valid dimensions");
    for j in 0..n {
        h.set(j, j, true);
        h.set(j, (j + 1) % n, true);
    }
    h
}

/// A 4x8 matrix whose columns are all distinct weight-2 patterns over 4 rows
/// (plus two repeated ones); column weight 2, row weight 4.
pub fn weight_two_4x8() -> Gf2Matrix {
    Gf2Matrix::from_rows(&[
        [1u8, 1, 1, 0, 0, 0, 1, 0],
        [1, 0, 0, 1, 1, 0, 0, 1],
        [0, 1, 0, 1, 0, 1, 1, 0],
        [0, 0, 1, 0, 1, 1, 0, 1],
    ])
    .expect("valid matrix")
}

/// A 6x9 matrix with column weight 2 and row weight 3: the incidence matrix
/// of the complete bipartite graph K(3,3) read edges-as-columns.
pub fn k33_incidence() -> Gf2Matrix {
    let mut h = Gf2Matrix::zeros(6, 9).expect("valid dimensions");
    for a in 0..3 {
        for b in 0..3 {
            let col = 3 * a + b;
            h.set(a, col, true);
            h.set(3 + b, col, true);
        }
    }
    h
}

/// A 6x10 matrix with column weight 3 and pairwise distinct columns.
pub fn column_weight_three_6x10() -> Gf2Matrix {
    Gf2Matrix::from_rows(&[
        [1u8, 1, 1, 0, 0, 0, 1, 0, 0, 1],
        [1, 0, 0, 1, 1, 0, 0, 1, 0, 1],
        [0, 1, 0, 1, 0, 1, 0, 0, 1, 1],
        [0, 0, 1, 0, 1, 1, 0, 0, 1, 0],
        [1, 1, 0, 0, 1, 1, 1, 1, 0, 0],
        [0, 0, 1, 1, 0, 0, 1, 1, 1, 0],
    ])
    .expect("valid matrix")
}

/// Vertex-edge incidence matrix of the Petersen graph (10x15, column
/// weight 2, row weight 3). The graph has girth 5 and is not bipartite, so
/// the real nullspace has dimension 5.
pub fn petersen_incidence() -> Gf2Matrix {
    let mut edges = Vec::with_capacity(15);
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
    }
    let mut h = Gf2Matrix::zeros(10, 15).expect("valid dimensions");
    for (col, &(a, b)) in edges.iter().enumerate() {
        h.set(a, col, true);
        h.set(b, col, true);
    }
    h
}

/// The fixed small corpus (every matrix has at most 12 columns).
pub fn small_corpus() -> Vec<(&'static str, Gf2Matrix)> {
    vec![
        ("pair", single_check(2)),
        ("chain_3x4", chain_3x4()),
        ("single_check_3", single_check(3)),
        ("cycle_5", cycle(5)),
        ("hamming_7_4", hamming_7_4()),
        ("weight_two_4x8", weight_two_4x8()),
        ("k33_incidence", k33_incidence()),
        ("column_weight_three_6x10", column_weight_three_6x10()),
    ]
}

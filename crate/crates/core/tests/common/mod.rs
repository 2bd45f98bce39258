//! Shared golden data: the rank-3 prism example with its reference weight
//! matrix, the eight simplicial subdivisions, and the eight bunches.

use toricflip_core::{Fan, IMatrix, Int, Rat, WeightMatrix};

pub fn prism_matrix() -> IMatrix {
    IMatrix::from_i64(&[
        &[1, 0, 0, 0, -1, 1],
        &[0, 1, 0, -1, -1, 2],
        &[0, 0, 1, -1, 0, 1],
    ])
}

pub fn prism_q_rows() -> IMatrix {
    IMatrix::from_i64(&[
        &[1, 1, 0, 0, 1, 0],
        &[0, 1, 1, 1, 0, 0],
        &[0, 0, 0, 1, 1, 1],
    ])
}

pub fn prism_q() -> WeightMatrix {
    WeightMatrix::from_supplied(&prism_matrix(), prism_q_rows())
        .expect("reference weights validate")
}

pub fn prism_fan() -> Fan {
    Fan::new(
        prism_matrix(),
        vec![
            vec![0, 1, 3, 5],
            vec![0, 2, 3, 4],
            vec![1, 2, 4, 5],
            vec![1, 3, 4],
            vec![0, 2, 5],
        ],
    )
    .expect("prism fan")
}

/// The eight simplicial subdivisions, 1-based ray triples.
pub const SIGMA: [[[usize; 3]; 8]; 8] = [
    [
        [1, 2, 4],
        [1, 2, 6],
        [1, 3, 4],
        [3, 4, 5],
        [2, 3, 5],
        [2, 3, 6],
        [2, 4, 5],
        [1, 3, 6],
    ],
    [
        [1, 2, 4],
        [1, 2, 6],
        [1, 4, 5],
        [1, 3, 5],
        [2, 5, 6],
        [3, 5, 6],
        [2, 4, 5],
        [1, 3, 6],
    ],
    [
        [1, 4, 6],
        [2, 4, 6],
        [1, 4, 5],
        [1, 3, 5],
        [2, 5, 6],
        [3, 5, 6],
        [2, 4, 5],
        [1, 3, 6],
    ],
    [
        [1, 2, 4],
        [1, 2, 6],
        [1, 4, 5],
        [1, 3, 5],
        [2, 3, 5],
        [2, 3, 6],
        [2, 4, 5],
        [1, 3, 6],
    ],
    [
        [1, 4, 6],
        [2, 4, 6],
        [1, 3, 4],
        [3, 4, 5],
        [2, 5, 6],
        [3, 5, 6],
        [2, 4, 5],
        [1, 3, 6],
    ],
    [
        [1, 4, 6],
        [2, 4, 6],
        [1, 3, 4],
        [3, 4, 5],
        [2, 3, 5],
        [2, 3, 6],
        [2, 4, 5],
        [1, 3, 6],
    ],
    [
        [1, 2, 4],
        [1, 2, 6],
        [1, 3, 4],
        [3, 4, 5],
        [2, 5, 6],
        [3, 5, 6],
        [2, 4, 5],
        [1, 3, 6],
    ],
    [
        [1, 4, 6],
        [2, 4, 6],
        [1, 4, 5],
        [1, 3, 5],
        [2, 3, 5],
        [2, 3, 6],
        [2, 4, 5],
        [1, 3, 6],
    ],
];

/// The eight bunches, 1-based Q-column triples.
pub const BUNCH: [[[usize; 3]; 8]; 8] = [
    [
        [3, 5, 6],
        [3, 4, 5],
        [2, 5, 6],
        [1, 2, 6],
        [1, 4, 6],
        [1, 4, 5],
        [1, 3, 6],
        [2, 4, 5],
    ],
    [
        [3, 5, 6],
        [3, 4, 5],
        [2, 3, 6],
        [2, 4, 6],
        [1, 3, 4],
        [1, 2, 4],
        [1, 3, 6],
        [2, 4, 5],
    ],
    [
        [2, 3, 5],
        [1, 3, 5],
        [2, 3, 6],
        [2, 4, 6],
        [1, 3, 4],
        [1, 2, 4],
        [1, 3, 6],
        [2, 4, 5],
    ],
    [
        [3, 5, 6],
        [3, 4, 5],
        [2, 3, 6],
        [2, 4, 6],
        [1, 4, 6],
        [1, 4, 5],
        [1, 3, 6],
        [2, 4, 5],
    ],
    [
        [2, 3, 5],
        [1, 3, 5],
        [2, 5, 6],
        [1, 2, 6],
        [1, 3, 4],
        [1, 2, 4],
        [1, 3, 6],
        [2, 4, 5],
    ],
    [
        [2, 3, 5],
        [1, 3, 5],
        [2, 5, 6],
        [1, 2, 6],
        [1, 4, 6],
        [1, 4, 5],
        [1, 3, 6],
        [2, 4, 5],
    ],
    [
        [3, 5, 6],
        [3, 4, 5],
        [2, 5, 6],
        [1, 2, 6],
        [1, 3, 4],
        [1, 2, 4],
        [1, 3, 6],
        [2, 4, 5],
    ],
    [
        [2, 3, 5],
        [1, 3, 5],
        [2, 3, 6],
        [2, 4, 6],
        [1, 4, 6],
        [1, 4, 5],
        [1, 3, 6],
        [2, 4, 5],
    ],
];

/// 0-based sorted cone list of the i-th subdivision (1-based i).
pub fn sigma_cones(i: usize) -> Vec<Vec<usize>> {
    let mut cones: Vec<Vec<usize>> = SIGMA[i - 1]
        .iter()
        .map(|c| {
            let mut s: Vec<usize> = c.iter().map(|&x| x - 1).collect();
            s.sort_unstable();
            s
        })
        .collect();
    cones.sort();
    cones
}

pub fn sigma_fan(i: usize) -> Fan {
    Fan::new(prism_matrix(), sigma_cones(i)).expect("known subdivision")
}

pub fn int_vec(v: &[i64]) -> Vec<Int> {
    v.iter().map(|&x| Int::from(x)).collect()
}

pub fn rat_vec(v: &[i64]) -> Vec<Rat> {
    v.iter().map(|&x| Rat::from(Int::from(x))).collect()
}

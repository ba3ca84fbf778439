//! Shared instances for the benchmark targets.

use mrp_core::{Element, Family};

/// The 7-point, 7-line incidence family: the classic small instance with
/// a nontrivial game value.
pub fn fano_lines() -> Family {
    let lines: [[usize; 3]; 7] = [
        [0, 1, 2],
        [0, 3, 4],
        [0, 5, 6],
        [1, 3, 5],
        [1, 4, 6],
        [2, 3, 6],
        [2, 4, 5],
    ];
    Family::new(
        7,
        lines
            .iter()
            .map(|l| Element::from_atoms(7, l).unwrap())
            .collect(),
    )
    .unwrap()
}

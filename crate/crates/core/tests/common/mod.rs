//! Shared fixtures and independent oracles for the integration suites.
//!
//! Everything here recomputes results from definitions (multiset
//! enumeration, partition refinement, exhaustive set partitions) so the
//! library paths under test are never trusted to check themselves.

#![allow(dead_code)]

use std::collections::HashMap;

use mrp_core::{rat_int, Element, Family, Measure, Rational};
use num_traits::Zero;
use rand::rngs::StdRng;
use rand::Rng;

/// Runs one acceptance criterion and prints its pass/fail line.
pub fn criterion<F: FnOnce() + std::panic::UnwindSafe>(name: &str, body: F) {
    let started = std::time::Instant::now();
    match std::panic::catch_unwind(body) {
        Ok(()) => println!("[PASS] {name} ({:.2}s)", started.elapsed().as_secs_f64()),
        Err(cause) => {
            println!("[FAIL] {name}");
            std::panic::resume_unwind(cause);
        }
    }
}

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

pub fn triangle_family() -> Family {
    Family::new(
        3,
        ["110", "011", "101"]
            .iter()
            .map(|b| Element::from_bitstring(b).unwrap())
            .collect(),
    )
    .unwrap()
}

pub fn two_disjoint() -> Family {
    Family::new(
        4,
        vec![
            Element::from_bitstring("1100").unwrap(),
            Element::from_bitstring("0011").unwrap(),
        ],
    )
    .unwrap()
}

pub fn centered_family() -> Family {
    Family::new(
        4,
        vec![
            Element::from_bitstring("1100").unwrap(),
            Element::from_bitstring("1010").unwrap(),
            Element::from_bitstring("1001").unwrap(),
        ],
    )
    .unwrap()
}

pub fn element_from_mask(width: usize, mask: u64) -> Element {
    let atoms: Vec<usize> = (0..width).filter(|i| mask >> i & 1 == 1).collect();
    Element::from_atoms(width, &atoms).unwrap()
}

pub fn random_nonzero_element(rng: &mut StdRng, width: usize) -> Element {
    let mask = rng.random_range(1..(1u64 << width));
    element_from_mask(width, mask)
}

pub fn random_family(rng: &mut StdRng, width: usize, members: usize) -> Family {
    Family::new(
        width,
        (0..members)
            .map(|_| random_nonzero_element(rng, width))
            .collect(),
    )
    .unwrap()
}

pub fn random_measure(rng: &mut StdRng, width: usize) -> Measure {
    loop {
        let raw: Vec<i64> = (0..width).map(|_| rng.random_range(0..100)).collect();
        let total: i64 = raw.iter().sum();
        if total == 0 {
            continue;
        }
        let weights = raw
            .into_iter()
            .map(|r| Rational::new(r.into(), total.into()))
            .collect();
        return Measure::new(weights).unwrap();
    }
}

/// Definition-side oracle on a raw nonnegative payoff matrix: the
/// minimum over column multisets of size `1..=max_size` of
/// best-row-payoff divided by multiset size. For 0/1 matrices this is
/// the intersection-number enumeration; it never touches the LP.
pub fn matrix_multiset_oracle(payoff: &[Vec<Rational>], max_size: usize) -> Rational {
    fn visit(
        payoff: &[Vec<Rational>],
        from: usize,
        stack: &mut Vec<usize>,
        max_size: usize,
        best: &mut Option<Rational>,
    ) {
        if !stack.is_empty() {
            let size = rat_int(stack.len() as i64);
            let top = payoff
                .iter()
                .map(|row| stack.iter().map(|&j| row[j].clone()).sum::<Rational>())
                .max()
                .unwrap();
            let ratio = top / size;
            if best.as_ref().map(|b| ratio < *b).unwrap_or(true) {
                *best = Some(ratio);
            }
        }
        if stack.len() == max_size {
            return;
        }
        for j in from..payoff[0].len() {
            stack.push(j);
            visit(payoff, j, stack, max_size, best);
            stack.pop();
        }
    }
    let mut best = None;
    let mut stack = Vec::with_capacity(max_size);
    visit(payoff, 0, &mut stack, max_size, &mut best);
    best.unwrap()
}

/// Exhaustive minimum piece count over all set partitions of the member
/// indices (restricted growth strings), with a memo shared across
/// partitions. Independent of the branch-and-bound path.
pub fn partition_min_oracle<F>(members: usize, mut piece_ok: F) -> usize
where
    F: FnMut(&[usize]) -> bool,
{
    let mut memo: HashMap<Vec<usize>, bool> = HashMap::new();
    let mut check = |piece: &[usize]| -> bool {
        match memo.get(piece) {
            Some(&v) => v,
            None => {
                let v = piece_ok(piece);
                memo.insert(piece.to_vec(), v);
                v
            }
        }
    };

    let mut best = members; // singletons always work for valid criteria
    let mut labels = vec![0usize; members];
    // Restricted growth: labels[0] = 0; labels[i] <= 1 + max(labels[..i]).
    fn enumerate(
        labels: &mut Vec<usize>,
        position: usize,
        max_label: usize,
        out: &mut Vec<Vec<usize>>,
    ) {
        if position == labels.len() {
            out.push(labels.clone());
            return;
        }
        for label in 0..=max_label + 1 {
            labels[position] = label;
            enumerate(labels, position + 1, max_label.max(label), out);
        }
    }
    let mut all = Vec::new();
    if members > 0 {
        labels[0] = 0;
        enumerate(&mut labels, 1, 0, &mut all);
    }
    'partitions: for labels in &all {
        let count = labels.iter().max().unwrap() + 1;
        if count >= best {
            continue;
        }
        let mut pieces: Vec<Vec<usize>> = vec![Vec::new(); count];
        for (member, &label) in labels.iter().enumerate() {
            pieces[label].push(member);
        }
        for piece in &pieces {
            if !check(piece) {
                continue 'partitions;
            }
        }
        best = count;
    }
    best
}

/// Number of nonempty cells of the partition of the universe refined by
/// the generators: atoms sharing a membership signature share a cell.
pub fn refined_partition_cells(width: usize, generators: &[Element]) -> usize {
    let mut signatures: Vec<Vec<bool>> = Vec::new();
    for atom in 0..width {
        let signature: Vec<bool> = generators.iter().map(|g| g.contains_atom(atom)).collect();
        if !signatures.contains(&signature) {
            signatures.push(signature);
        }
    }
    signatures.len()
}

/// Sum of weights of atoms inside the element, recomputed directly.
pub fn direct_mass(measure: &Measure, element: &Element) -> Rational {
    (0..element.width())
        .filter(|&i| element.contains_atom(i))
        .fold(Rational::zero(), |acc, i| acc + measure.weight(i))
}

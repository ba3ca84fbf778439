//! Linkedness predicates and exact minimum-piece decompositions.
//!
//! The σ-style notions quantify over countable unions; at finite scale
//! the meaningful shadow is the minimum number of pieces partitioning a
//! family so that every piece is centered, n-linked, or has intersection
//! number at least a threshold. [`min_pieces`] finds that minimum by
//! branch and bound over piece assignments. All three criteria are
//! closed under taking subfamilies, which is what makes incremental
//! feasibility pruning sound.

use std::collections::HashMap;

use num_traits::{One, Signed};
use thiserror::Error;

use crate::algebra::{Element, Family};
use crate::intersection::int_exact;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("linkedness parameter must be at least 1")]
    ZeroLinkParameter,
    #[error("intersection threshold must lie in (0, 1], got {beta}")]
    BetaOutOfRange { beta: Rational },
}

/// n-linkedness check outcome.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LinkednessCheck {
    Linked,
    /// Member indices (at most n of them) with empty common intersection.
    Violation { subset: Vec<usize> },
}

impl LinkednessCheck {
    pub fn holds(&self) -> bool {
        matches!(self, LinkednessCheck::Linked)
    }
}

/// True iff every subset of at most `n` members has a common atom.
/// Subsets of size exactly `min(n, |family|)` decide the answer; the
/// search walks them with an incremental meet and reports the shortest
/// empty prefix it finds as the witness.
pub fn is_n_linked(family: &Family, n: usize) -> Result<LinkednessCheck, SearchError> {
    if n < 1 {
        return Err(SearchError::ZeroLinkParameter);
    }
    let size = n.min(family.len());

    fn walk(
        members: &[Element],
        start: usize,
        chosen: &mut Vec<usize>,
        meet: &Element,
        size: usize,
    ) -> Option<Vec<usize>> {
        if meet.is_empty() {
            return Some(chosen.clone());
        }
        if chosen.len() == size {
            return None;
        }
        for i in start..members.len() {
            chosen.push(i);
            let next = meet.meet(&members[i]);
            if let Some(witness) = walk(members, i + 1, chosen, &next, size) {
                return Some(witness);
            }
            chosen.pop();
        }
        None
    }

    let full = Element::full(family.width());
    let mut chosen = Vec::new();
    match walk(family.members(), 0, &mut chosen, &full, size) {
        Some(subset) => Ok(LinkednessCheck::Violation { subset }),
        None => Ok(LinkednessCheck::Linked),
    }
}

/// Centeredness check outcome.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CenteredCheck {
    /// All members share this atom.
    Centered { atom: usize },
    NotCentered,
}

impl CenteredCheck {
    pub fn holds(&self) -> bool {
        matches!(self, CenteredCheck::Centered { .. })
    }
}

/// True iff the meet of all members is nonzero. For a finite family the
/// binding case of "all finite subsets intersect" is the whole family.
pub fn is_centered(family: &Family) -> CenteredCheck {
    let meet = family
        .members()
        .iter()
        .fold(Element::full(family.width()), |acc, m| acc.meet(m));
    match meet.atoms().first() {
        Some(&atom) => CenteredCheck::Centered { atom },
        None => CenteredCheck::NotCentered,
    }
}

/// Piece acceptance criterion for [`min_pieces`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PieceCriterion {
    Centered,
    NLinked(usize),
    IntAtLeast(Rational),
}

impl PieceCriterion {
    fn validate(&self) -> Result<(), SearchError> {
        match self {
            PieceCriterion::Centered => Ok(()),
            PieceCriterion::NLinked(n) if *n >= 1 => Ok(()),
            PieceCriterion::NLinked(_) => Err(SearchError::ZeroLinkParameter),
            PieceCriterion::IntAtLeast(beta) => {
                if beta.is_positive() && *beta <= Rational::one() {
                    Ok(())
                } else {
                    Err(SearchError::BetaOutOfRange { beta: beta.clone() })
                }
            }
        }
    }
}

/// A minimum partition with its witness pieces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinPieces {
    pub count: usize,
    /// Original member indices per piece, each sorted; pieces ordered by
    /// their smallest index.
    pub piece_indices: Vec<Vec<usize>>,
    pub pieces: Vec<Family>,
}

/// Memoizing criterion evaluator keyed by sorted member-index sets.
struct PieceJudge<'a> {
    family: &'a Family,
    criterion: &'a PieceCriterion,
    cache: HashMap<Vec<usize>, bool>,
}

impl<'a> PieceJudge<'a> {
    fn new(family: &'a Family, criterion: &'a PieceCriterion) -> Self {
        PieceJudge {
            family,
            criterion,
            cache: HashMap::new(),
        }
    }

    fn accepts(&mut self, piece: &[usize]) -> bool {
        let mut key: Vec<usize> = piece.to_vec();
        key.sort_unstable();
        if let Some(&known) = self.cache.get(&key) {
            return known;
        }
        let sub = self.family.subfamily(&key).expect("piece indices valid");
        let verdict = match self.criterion {
            PieceCriterion::Centered => is_centered(&sub).holds(),
            PieceCriterion::NLinked(n) => {
                is_n_linked(&sub, *n).expect("n validated").holds()
            }
            PieceCriterion::IntAtLeast(beta) => int_exact(&sub).value >= *beta,
        };
        self.cache.insert(key, verdict);
        verdict
    }
}

/// Exact minimum number of pieces partitioning the members so that
/// every piece satisfies the criterion, with a witness partition.
///
/// Branch and bound: members are assigned hardest-first (fewest atoms),
/// a greedy first-fit gives the initial incumbent, and a greedily grown
/// pairwise-incompatible core gives the lower bound. Singleton pieces
/// always satisfy a validated criterion, so the search is total.
pub fn min_pieces(family: &Family, criterion: &PieceCriterion) -> Result<MinPieces, SearchError> {
    criterion.validate()?;

    let mut order: Vec<usize> = (0..family.len()).collect();
    order.sort_by_key(|&i| (family.member(i).count_atoms(), i));

    let mut judge = PieceJudge::new(family, criterion);

    // Greedy first-fit incumbent.
    let mut incumbent: Vec<Vec<usize>> = Vec::new();
    for &m in &order {
        let mut placed = false;
        for piece in incumbent.iter_mut() {
            piece.push(m);
            if judge.accepts(piece) {
                placed = true;
                break;
            }
            piece.pop();
        }
        if !placed {
            incumbent.push(vec![m]);
        }
    }

    // Greedy pairwise-incompatible core: a clique in the conflict graph
    // lower-bounds the piece count.
    let mut core: Vec<usize> = Vec::new();
    for &m in &order {
        let conflicts_all = core
            .iter()
            .all(|&c| !judge.accepts(&[c, m]));
        if conflicts_all {
            core.push(m);
        }
    }
    let lower_bound = core.len().max(1);

    if incumbent.len() > lower_bound {
        let mut best = incumbent.clone();
        let mut current: Vec<Vec<usize>> = Vec::new();
        branch(&order, 0, &mut current, &mut best, lower_bound, &mut judge);
        incumbent = best;
    }

    let mut piece_indices: Vec<Vec<usize>> = incumbent
        .into_iter()
        .map(|mut piece| {
            piece.sort_unstable();
            piece
        })
        .collect();
    piece_indices.sort_by_key(|piece| piece[0]);

    // Re-verify the witness before handing it back.
    for piece in &piece_indices {
        assert!(judge.accepts(piece), "returned partition must satisfy the criterion");
    }
    let pieces = piece_indices
        .iter()
        .map(|idx| family.subfamily(idx).expect("indices valid"))
        .collect();
    Ok(MinPieces {
        count: piece_indices.len(),
        piece_indices,
        pieces,
    })
}

fn branch(
    order: &[usize],
    position: usize,
    current: &mut Vec<Vec<usize>>,
    best: &mut Vec<Vec<usize>>,
    lower_bound: usize,
    judge: &mut PieceJudge<'_>,
) {
    if current.len() >= best.len() {
        return; // cannot strictly improve
    }
    if best.len() == lower_bound {
        return; // incumbent is provably optimal
    }
    if position == order.len() {
        *best = current.clone();
        return;
    }
    let member = order[position];
    for i in 0..current.len() {
        current[i].push(member);
        if judge.accepts(&current[i]) {
            branch(order, position + 1, current, best, lower_bound, judge);
        }
        current[i].pop();
    }
    // Opening one new piece covers all symmetric placements.
    if current.len() + 1 < best.len() {
        current.push(vec![member]);
        branch(order, position + 1, current, best, lower_bound, judge);
        current.pop();
    }
}

/// One row of the linkedness-versus-intersection report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinkedIntRow {
    pub n: usize,
    pub linked: bool,
    pub int_value: Rational,
}

/// Tabulates n-linkedness for `n = 1..=n_max` next to the family's one
/// exact intersection number. No relationship between the columns is
/// asserted: 2-linked families can sit well below intersection number
/// 1/2.
pub fn linked_vs_int_report(
    family: &Family,
    n_max: usize,
) -> Result<Vec<LinkedIntRow>, SearchError> {
    if n_max < 1 {
        return Err(SearchError::ZeroLinkParameter);
    }
    let int_value = int_exact(family).value;
    (1..=n_max)
        .map(|n| {
            Ok(LinkedIntRow {
                n,
                linked: is_n_linked(family, n)?.holds(),
                int_value: int_value.clone(),
            })
        })
        .collect()
}

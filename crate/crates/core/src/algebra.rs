//! Finite Boolean set algebras.
//!
//! The ambient universe is a fixed finite set of atoms `0..m`. An
//! [`Element`] is a subset of that universe stored as a bit-vector; a
//! [`SetAlgebra`] is either the full power set (kept implicit) or an
//! explicitly materialized collection closed under meet, join, and
//! complement; a [`Family`] is a nonempty indexed list of nonzero
//! elements, the raw material for intersection-number analysis.
//!
//! Elements carry their width and cross-width operations are rejected
//! rather than zero-extended: silent coercion masks modeling errors.

use std::fmt;

use thiserror::Error;

/// Largest materialized algebra the closure routine will produce.
pub const MATERIALIZATION_CAP: usize = 1 << 16;

/// Largest implicit power set whose nonzero elements may be enumerated.
pub const ENUMERATION_LIMIT: usize = 24;

const BLOCK_BITS: usize = 64;

/// Errors from algebra construction and element validation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("width mismatch: expected {expected} atoms, found {found}")]
    WidthMismatch { expected: usize, found: usize },
    #[error("atom index {index} out of range for width {width}")]
    AtomOutOfRange { index: usize, width: usize },
    #[error("algebras need at least one atom")]
    ZeroWidth,
    #[error("family member {index} is the zero element")]
    ZeroMember { index: usize },
    #[error("families must be nonempty")]
    EmptyFamily,
    #[error("subalgebra closure exceeds the materialization cap of {cap} elements")]
    ClosureCapExceeded { cap: usize },
    #[error("cannot enumerate the {atom_count}-atom power set (limit {limit} atoms)")]
    EnumerationTooLarge { atom_count: usize, limit: usize },
    #[error("invalid bitstring {text:?}: expected {width} characters of 0/1")]
    BadBitstring { text: String, width: usize },
}

/// A subset of the ambient atom universe, as a fixed-width bit-vector.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Element {
    width: usize,
    blocks: Vec<u64>,
}

impl Element {
    fn blocks_for(width: usize) -> usize {
        width.div_ceil(BLOCK_BITS)
    }

    /// The empty set over `width` atoms.
    pub fn empty(width: usize) -> Self {
        Element {
            width,
            blocks: vec![0; Self::blocks_for(width)],
        }
    }

    /// The full universe over `width` atoms.
    pub fn full(width: usize) -> Self {
        let mut e = Self::empty(width);
        for b in &mut e.blocks {
            *b = u64::MAX;
        }
        e.mask_tail();
        e
    }

    /// The singleton `{atom}`.
    pub fn singleton(width: usize, atom: usize) -> Result<Self, AlgebraError> {
        let mut e = Self::empty(width);
        e.set_atom(atom)?;
        Ok(e)
    }

    /// Builds an element from a list of atom indices.
    pub fn from_atoms(width: usize, atoms: &[usize]) -> Result<Self, AlgebraError> {
        let mut e = Self::empty(width);
        for &a in atoms {
            e.set_atom(a)?;
        }
        Ok(e)
    }

    /// Parses a `0/1` string, index 0 leftmost. Length must equal the width.
    pub fn from_bitstring(text: &str) -> Result<Self, AlgebraError> {
        let width = text.len();
        let mut e = Self::empty(width);
        for (i, c) in text.chars().enumerate() {
            match c {
                '0' => {}
                '1' => e.set_atom(i)?,
                _ => {
                    return Err(AlgebraError::BadBitstring {
                        text: text.to_string(),
                        width,
                    })
                }
            }
        }
        Ok(e)
    }

    fn set_atom(&mut self, atom: usize) -> Result<(), AlgebraError> {
        if atom >= self.width {
            return Err(AlgebraError::AtomOutOfRange {
                index: atom,
                width: self.width,
            });
        }
        self.blocks[atom / BLOCK_BITS] |= 1u64 << (atom % BLOCK_BITS);
        Ok(())
    }

    fn mask_tail(&mut self) {
        let rem = self.width % BLOCK_BITS;
        if rem != 0 {
            if let Some(last) = self.blocks.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.iter().all(|&b| b == 0)
    }

    pub fn is_full(&self) -> bool {
        *self == Self::full(self.width)
    }

    pub fn contains_atom(&self, atom: usize) -> bool {
        atom < self.width && self.blocks[atom / BLOCK_BITS] >> (atom % BLOCK_BITS) & 1 == 1
    }

    pub fn count_atoms(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    /// Atom indices in ascending order.
    pub fn atoms(&self) -> Vec<usize> {
        (0..self.width).filter(|&i| self.contains_atom(i)).collect()
    }

    fn check_width(&self, other: &Self) {
        assert_eq!(
            self.width, other.width,
            "elements of widths {} and {} cannot be combined",
            self.width, other.width
        );
    }

    /// Intersection.
    pub fn meet(&self, other: &Self) -> Self {
        self.check_width(other);
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| a & b)
            .collect();
        Element {
            width: self.width,
            blocks,
        }
    }

    /// Union.
    pub fn join(&self, other: &Self) -> Self {
        self.check_width(other);
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| a | b)
            .collect();
        Element {
            width: self.width,
            blocks,
        }
    }

    /// Complement within the universe.
    pub fn complement(&self) -> Self {
        let mut e = Element {
            width: self.width,
            blocks: self.blocks.iter().map(|b| !b).collect(),
        };
        e.mask_tail();
        e
    }

    /// Symmetric difference.
    pub fn symdiff(&self, other: &Self) -> Self {
        self.check_width(other);
        let blocks = self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| a ^ b)
            .collect();
        Element {
            width: self.width,
            blocks,
        }
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.check_width(other);
        self.blocks.iter().zip(&other.blocks).all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint_from(&self, other: &Self) -> bool {
        self.check_width(other);
        self.blocks.iter().zip(&other.blocks).all(|(a, b)| a & b == 0)
    }

    /// Renders as a `0/1` string, index 0 leftmost.
    pub fn to_bitstring(&self) -> String {
        (0..self.width)
            .map(|i| if self.contains_atom(i) { '1' } else { '0' })
            .collect()
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Element({})", self.to_bitstring())
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, a) in self.atoms().iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "}}")
    }
}

impl PartialOrd for Element {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Element {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.width
            .cmp(&other.width)
            .then_with(|| self.blocks.iter().rev().cmp(other.blocks.iter().rev()))
    }
}

/// Outcome of an antichain check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AntichainCheck {
    IsAntichain,
    /// Two distinct members that share an atom, by index.
    Violation { first: usize, second: usize },
}

impl AntichainCheck {
    pub fn holds(&self) -> bool {
        matches!(self, AntichainCheck::IsAntichain)
    }
}

/// Atomlessness report. Finite algebras are atomic, so `atomless` is
/// always false here and a witness atom is always produced; the check
/// exists so decomposition tooling can report the truncation honestly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomlessCheck {
    pub atomless: bool,
    pub witness: Option<Element>,
}

/// A finite field of sets over `atom_count` atoms: either the implicit
/// power set or a materialized collection containing 0 and 1 and closed
/// under meet, join, and complement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetAlgebra {
    atom_count: usize,
    /// Sorted, deduplicated when materialized; `None` means power set.
    elements: Option<Vec<Element>>,
}

impl SetAlgebra {
    /// The implicit power set over `atom_count` atoms.
    pub fn power_set(atom_count: usize) -> Self {
        SetAlgebra {
            atom_count,
            elements: None,
        }
    }

    pub fn atom_count(&self) -> usize {
        self.atom_count
    }

    pub fn is_materialized(&self) -> bool {
        self.elements.is_some()
    }

    pub fn zero(&self) -> Element {
        Element::empty(self.atom_count)
    }

    pub fn one(&self) -> Element {
        Element::full(self.atom_count)
    }

    /// Number of elements; `None` for an implicit power set too large to count in usize.
    pub fn len(&self) -> Option<usize> {
        match &self.elements {
            Some(els) => Some(els.len()),
            None => 1usize.checked_shl(self.atom_count as u32),
        }
    }

    pub fn is_empty(&self) -> bool {
        false // always contains 0 and 1
    }

    /// Membership test: width check for the power set, binary search otherwise.
    pub fn contains(&self, e: &Element) -> bool {
        if e.width() != self.atom_count {
            return false;
        }
        match &self.elements {
            None => true,
            Some(els) => els.binary_search(e).is_ok(),
        }
    }

    /// The materialized element list, sorted; `None` for implicit power sets.
    pub fn materialized_elements(&self) -> Option<&[Element]> {
        self.elements.as_deref()
    }

    /// All nonzero elements, for coverage checks. Guarded for implicit
    /// power sets, whose size is exponential in the atom count.
    pub fn nonzero_elements(&self) -> Result<Vec<Element>, AlgebraError> {
        match &self.elements {
            Some(els) => Ok(els.iter().filter(|e| !e.is_empty()).cloned().collect()),
            None => {
                if self.atom_count > ENUMERATION_LIMIT {
                    return Err(AlgebraError::EnumerationTooLarge {
                        atom_count: self.atom_count,
                        limit: ENUMERATION_LIMIT,
                    });
                }
                let m = self.atom_count;
                let mut out = Vec::with_capacity((1usize << m) - 1);
                for mask in 1u64..(1u64 << m) {
                    let mut e = Element::empty(m);
                    e.blocks[0] = mask;
                    out.push(e);
                }
                Ok(out)
            }
        }
    }

    /// Minimal nonzero elements. They form a partition of 1.
    ///
    /// For a materialized algebra the atom containing universe atom `i`
    /// is the meet of every element containing `i`; closure under meet
    /// makes that element the minimal one through `i`.
    pub fn atoms(&self) -> Vec<Element> {
        match &self.elements {
            None => (0..self.atom_count)
                .map(|i| Element::singleton(self.atom_count, i).expect("index in range"))
                .collect(),
            Some(els) => {
                let mut cells: Vec<Element> = Vec::new();
                for i in 0..self.atom_count {
                    let mut cell = Element::full(self.atom_count);
                    for e in els {
                        if e.contains_atom(i) {
                            cell = cell.meet(e);
                        }
                    }
                    if !cells.contains(&cell) {
                        cells.push(cell);
                    }
                }
                cells.sort();
                cells
            }
        }
    }
}

/// Closes `generators` (plus 0 and 1) under meet, join, and complement.
///
/// Worklist fixpoint; errors out as soon as the collection would pass
/// [`MATERIALIZATION_CAP`].
pub fn generate_subalgebra(
    width: usize,
    generators: &[Element],
) -> Result<SetAlgebra, AlgebraError> {
    if width == 0 {
        return Err(AlgebraError::ZeroWidth);
    }
    for g in generators {
        if g.width() != width {
            return Err(AlgebraError::WidthMismatch {
                expected: width,
                found: g.width(),
            });
        }
    }

    let mut known: std::collections::BTreeSet<Element> = std::collections::BTreeSet::new();
    let mut queue: Vec<Element> = Vec::new();
    let push = |known: &mut std::collections::BTreeSet<Element>,
                    queue: &mut Vec<Element>,
                    e: Element|
     -> Result<(), AlgebraError> {
        if known.insert(e.clone()) {
            if known.len() > MATERIALIZATION_CAP {
                return Err(AlgebraError::ClosureCapExceeded {
                    cap: MATERIALIZATION_CAP,
                });
            }
            queue.push(e);
        }
        Ok(())
    };

    push(&mut known, &mut queue, Element::empty(width))?;
    push(&mut known, &mut queue, Element::full(width))?;
    for g in generators {
        push(&mut known, &mut queue, g.clone())?;
    }

    while let Some(x) = queue.pop() {
        push(&mut known, &mut queue, x.complement())?;
        let snapshot: Vec<Element> = known.iter().cloned().collect();
        for y in &snapshot {
            push(&mut known, &mut queue, x.meet(y))?;
            push(&mut known, &mut queue, x.join(y))?;
        }
    }

    Ok(SetAlgebra {
        atom_count: width,
        elements: Some(known.into_iter().collect()),
    })
}

/// True (with all distinct members pairwise disjoint) or a violating pair.
/// Duplicate members compare equal and do not violate the property.
pub fn is_antichain(family: &Family) -> AntichainCheck {
    let members = family.members();
    for i in 0..members.len() {
        for j in i + 1..members.len() {
            if members[i] != members[j] && !members[i].is_disjoint_from(&members[j]) {
                return AntichainCheck::Violation { first: i, second: j };
            }
        }
    }
    AntichainCheck::IsAntichain
}

/// Reports whether the algebra is atomless. Every finite algebra is
/// atomic, so the answer is always no, with a witness atom attached.
pub fn is_atomless(algebra: &SetAlgebra) -> AtomlessCheck {
    let witness = algebra.atoms().into_iter().next();
    AtomlessCheck {
        atomless: false,
        witness,
    }
}

/// A nonempty indexed list of nonzero elements over a common universe.
/// Duplicates are allowed; the intersection-number definition ranges
/// over sequences with repetition, so deduplication is a separate,
/// explicit operation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Family {
    width: usize,
    members: Vec<Element>,
}

impl Family {
    pub fn new(width: usize, members: Vec<Element>) -> Result<Self, AlgebraError> {
        if members.is_empty() {
            return Err(AlgebraError::EmptyFamily);
        }
        for (index, m) in members.iter().enumerate() {
            if m.width() != width {
                return Err(AlgebraError::WidthMismatch {
                    expected: width,
                    found: m.width(),
                });
            }
            if m.is_empty() {
                return Err(AlgebraError::ZeroMember { index });
            }
        }
        Ok(Family { width, members })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        false // enforced nonempty at construction
    }

    pub fn members(&self) -> &[Element] {
        &self.members
    }

    pub fn member(&self, index: usize) -> &Element {
        &self.members[index]
    }

    /// Value-level deduplication, preserving first occurrences.
    pub fn dedup(&self) -> Family {
        let mut seen = Vec::new();
        for m in &self.members {
            if !seen.contains(m) {
                seen.push(m.clone());
            }
        }
        Family {
            width: self.width,
            members: seen,
        }
    }

    /// Subfamily by member indices. Panics on out-of-range indices;
    /// errors if `indices` is empty.
    pub fn subfamily(&self, indices: &[usize]) -> Result<Family, AlgebraError> {
        Family::new(
            self.width,
            indices.iter().map(|&i| self.members[i].clone()).collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn elem(bits: &str) -> Element {
        Element::from_bitstring(bits).unwrap()
    }

    #[test]
    fn element_basic_ops() {
        let a = elem("1100");
        let b = elem("0110");
        assert_eq!(a.meet(&b), elem("0100"));
        assert_eq!(a.join(&b), elem("1110"));
        assert_eq!(a.complement(), elem("0011"));
        assert_eq!(a.symdiff(&b), elem("1010"));
        assert!(elem("0100").is_subset_of(&a));
        assert!(a.is_disjoint_from(&elem("0011")));
        assert_eq!(a.atoms(), vec![0, 1]);
    }

    #[test]
    fn element_wide_universe() {
        let w = 130;
        let a = Element::singleton(w, 0).unwrap();
        let b = Element::singleton(w, 129).unwrap();
        assert!(a.is_disjoint_from(&b));
        let u = a.join(&b);
        assert_eq!(u.count_atoms(), 2);
        assert_eq!(u.complement().count_atoms(), 128);
        assert!(Element::full(w).is_full());
    }

    #[test]
    #[should_panic(expected = "cannot be combined")]
    fn cross_width_rejected() {
        let _ = elem("110").meet(&elem("1100"));
    }

    #[test]
    fn empty_generators_give_trivial_algebra() {
        let alg = generate_subalgebra(3, &[]).unwrap();
        assert_eq!(alg.len(), Some(2));
        assert!(alg.contains(&Element::empty(3)));
        assert!(alg.contains(&Element::full(3)));
        assert_eq!(alg.atoms(), vec![Element::full(3)]);
    }

    #[test]
    fn singleton_generators_give_power_set() {
        let gens: Vec<Element> = (0..3).map(|i| Element::singleton(3, i).unwrap()).collect();
        let alg = generate_subalgebra(3, &gens).unwrap();
        assert_eq!(alg.len(), Some(8));
        let atoms = alg.atoms();
        assert_eq!(atoms.len(), 3);
        for a in &atoms {
            assert_eq!(a.count_atoms(), 1);
        }
    }

    #[test]
    fn two_generators_close_to_eight_elements() {
        // {110, 011} refine {0},{1},{2}, so the closure is the full power set.
        let alg = generate_subalgebra(3, &[elem("110"), elem("011")]).unwrap();
        assert_eq!(alg.len(), Some(8));
        let atoms = alg.atoms();
        assert_eq!(atoms, vec![elem("100"), elem("010"), elem("001")]);
    }

    #[test]
    fn one_generator_makes_four_elements() {
        let alg = generate_subalgebra(3, &[elem("110")]).unwrap();
        assert_eq!(alg.len(), Some(4));
        assert!(alg.contains(&elem("110")));
        assert!(alg.contains(&elem("001")));
        assert!(!alg.contains(&elem("100")));
        assert_eq!(alg.atoms(), vec![elem("110"), elem("001")]);
    }

    #[test]
    fn closure_is_idempotent() {
        let alg = generate_subalgebra(4, &[elem("1100"), elem("0110")]).unwrap();
        let regenerated =
            generate_subalgebra(4, alg.materialized_elements().unwrap()).unwrap();
        assert_eq!(alg, regenerated);
    }

    #[test]
    fn mixed_width_generators_rejected() {
        let err = generate_subalgebra(3, &[elem("110"), elem("1100")]).unwrap_err();
        assert!(matches!(err, AlgebraError::WidthMismatch { .. }));
    }

    #[test]
    fn antichain_checks() {
        let singles = Family::new(
            4,
            (0..4).map(|i| Element::singleton(4, i).unwrap()).collect(),
        )
        .unwrap();
        assert!(is_antichain(&singles).holds());

        let overlapping = Family::new(4, vec![elem("1100"), elem("0110")]).unwrap();
        assert_eq!(
            is_antichain(&overlapping),
            AntichainCheck::Violation { first: 0, second: 1 }
        );

        let dup = Family::new(4, vec![elem("1100"), elem("1100")]).unwrap();
        assert!(is_antichain(&dup).holds());
    }

    #[test]
    fn finite_algebras_are_atomic() {
        let power = SetAlgebra::power_set(3);
        let check = is_atomless(&power);
        assert!(!check.atomless);
        assert_eq!(check.witness.unwrap().count_atoms(), 1);

        let trivial = generate_subalgebra(3, &[]).unwrap();
        assert_eq!(is_atomless(&trivial).witness.unwrap(), Element::full(3));
    }

    #[test]
    fn family_rejects_zero_and_empty() {
        assert!(matches!(
            Family::new(3, vec![]),
            Err(AlgebraError::EmptyFamily)
        ));
        assert!(matches!(
            Family::new(3, vec![elem("000")]),
            Err(AlgebraError::ZeroMember { index: 0 })
        ));
    }

    #[test]
    fn power_set_atoms_are_singletons() {
        let alg = SetAlgebra::power_set(5);
        let atoms = alg.atoms();
        assert_eq!(atoms.len(), 5);
        assert!(is_antichain(&Family::new(5, atoms.clone()).unwrap()).holds());
        let join = atoms.iter().fold(Element::empty(5), |a, b| a.join(b));
        assert!(join.is_full());
    }
}

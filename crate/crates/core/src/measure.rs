//! Finitely additive probability measures on finite set algebras.
//!
//! A [`Measure`] stores one nonnegative rational weight per atom of the
//! ambient universe, summing to exactly 1. Every element's measure is
//! the sum of its atom weights, so finite additivity is automatic and
//! becomes a checked theorem rather than a stored constraint.

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::algebra::{Element, SetAlgebra};
use crate::rational::{rational_sum, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MeasureError {
    #[error("measure weights must be nonnegative (weight {index} is negative)")]
    NegativeWeight { index: usize },
    #[error("measure weights must sum to 1, got {sum}")]
    WeightSumNotOne { sum: Rational },
    #[error("measure has no atoms")]
    EmptyWeights,
    #[error("width mismatch: measure over {measure_width} atoms, element over {element_width}")]
    WidthMismatch {
        measure_width: usize,
        element_width: usize,
    },
    #[error("expected {expected} items, got {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("epsilon must be positive, got {eps}")]
    EpsilonNotPositive { eps: Rational },
}

/// A probability weight vector over the ambient atoms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Measure {
    weights: Vec<Rational>,
}

impl Measure {
    /// Validates nonnegativity and total mass exactly 1.
    pub fn new(weights: Vec<Rational>) -> Result<Self, MeasureError> {
        if weights.is_empty() {
            return Err(MeasureError::EmptyWeights);
        }
        for (index, w) in weights.iter().enumerate() {
            if w.is_negative() {
                return Err(MeasureError::NegativeWeight { index });
            }
        }
        let sum = rational_sum(&weights);
        if !sum.is_one() {
            return Err(MeasureError::WeightSumNotOne { sum });
        }
        Ok(Measure { weights })
    }

    /// The uniform measure over `width` atoms.
    pub fn uniform(width: usize) -> Self {
        let w = Rational::new(1.into(), (width as u64).into());
        Measure {
            weights: vec![w; width],
        }
    }

    /// All mass on a single atom.
    pub fn point_mass(width: usize, atom: usize) -> Self {
        let mut weights = vec![Rational::zero(); width];
        weights[atom] = Rational::one();
        Measure { weights }
    }

    pub fn width(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn weight(&self, atom: usize) -> &Rational {
        &self.weights[atom]
    }

    /// Measure of an element: the sum of its atom weights.
    pub fn evaluate(&self, a: &Element) -> Result<Rational, MeasureError> {
        if a.width() != self.width() {
            return Err(MeasureError::WidthMismatch {
                measure_width: self.width(),
                element_width: a.width(),
            });
        }
        let mut total = Rational::zero();
        for atom in a.atoms() {
            total += &self.weights[atom];
        }
        Ok(total)
    }
}

/// Strict-positivity report over an algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StrictPositivity {
    Positive,
    /// A nonzero element of the algebra with measure zero.
    Zero { witness: Element },
}

impl StrictPositivity {
    pub fn holds(&self) -> bool {
        matches!(self, StrictPositivity::Positive)
    }
}

/// Checks strict positivity on every nonzero element of the algebra.
///
/// It suffices to check the algebra's atoms: every nonzero element
/// contains an atom, and measures are monotone.
pub fn is_strictly_positive(
    measure: &Measure,
    algebra: &SetAlgebra,
) -> Result<StrictPositivity, MeasureError> {
    for atom in algebra.atoms() {
        if measure.evaluate(&atom)?.is_zero() {
            return Ok(StrictPositivity::Zero { witness: atom });
        }
    }
    Ok(StrictPositivity::Positive)
}

/// Atomwise convex combination `Σ wᵢ·μᵢ`. Weights must be nonnegative
/// and sum to exactly 1.
pub fn weighted_sum(
    measures: &[Measure],
    weights: &[Rational],
) -> Result<Measure, MeasureError> {
    if measures.is_empty() {
        return Err(MeasureError::EmptyWeights);
    }
    if measures.len() != weights.len() {
        return Err(MeasureError::LengthMismatch {
            expected: measures.len(),
            found: weights.len(),
        });
    }
    let width = measures[0].width();
    for m in measures {
        if m.width() != width {
            return Err(MeasureError::WidthMismatch {
                measure_width: width,
                element_width: m.width(),
            });
        }
    }
    for (index, w) in weights.iter().enumerate() {
        if w.is_negative() {
            return Err(MeasureError::NegativeWeight { index });
        }
    }
    let sum = rational_sum(weights);
    if !sum.is_one() {
        return Err(MeasureError::WeightSumNotOne { sum });
    }
    let mut combined = vec![Rational::zero(); width];
    for (m, w) in measures.iter().zip(weights) {
        if w.is_zero() {
            continue;
        }
        for (c, mw) in combined.iter_mut().zip(m.weights()) {
            *c += w * mw;
        }
    }
    Measure::new(combined)
}

/// The pseudometric `d(a, b) = μ(a Δ b)`.
pub fn symdiff_metric(
    measure: &Measure,
    a: &Element,
    b: &Element,
) -> Result<Rational, MeasureError> {
    if a.width() != b.width() {
        return Err(MeasureError::WidthMismatch {
            measure_width: a.width(),
            element_width: b.width(),
        });
    }
    measure.evaluate(&a.symdiff(b))
}

/// ε-nonatomicity report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EpsilonNonatomicity {
    /// A partition of 1 into algebra elements each of measure < ε.
    Nonatomic { partition: Vec<Element> },
    /// An algebra atom of measure >= ε; no partition can avoid it,
    /// because the atom partition is the finest available.
    Blocked { atom: Element, mass: Rational },
}

impl EpsilonNonatomicity {
    pub fn holds(&self) -> bool {
        matches!(self, EpsilonNonatomicity::Nonatomic { .. })
    }
}

/// True iff the algebra admits a partition of 1 into elements of measure
/// strictly below `eps`. Equivalent to: every atom of the algebra has
/// measure < eps. Boundary cases (atom mass exactly ε) are false.
pub fn is_epsilon_nonatomic(
    measure: &Measure,
    algebra: &SetAlgebra,
    eps: &Rational,
) -> Result<EpsilonNonatomicity, MeasureError> {
    if !eps.is_positive() {
        return Err(MeasureError::EpsilonNotPositive { eps: eps.clone() });
    }
    let atoms = algebra.atoms();
    for atom in &atoms {
        let mass = measure.evaluate(atom)?;
        if mass >= *eps {
            return Ok(EpsilonNonatomicity::Blocked {
                atom: atom.clone(),
                mass,
            });
        }
    }
    Ok(EpsilonNonatomicity::Nonatomic { partition: atoms })
}

//! Command dispatch and deterministic report rendering.
//!
//! Reports print every rational as `p/q`, never as a decimal; the
//! `--decimal` flag appends an approximation in parentheses for
//! readability. Output ordering follows definition order in the
//! instance, so a given instance and flag set always produces
//! byte-identical text.
//!
//! Exit contract: 0 when the computation succeeds and any checked
//! property holds, 1 when a property fails (with a witness in the
//! report), 2 for input errors.

use std::fmt::Write as _;

use num_traits::One;
use thiserror::Error;

use mrp_core::{
    approximability_check, check_intersection_bounds, check_nesting, check_splitting,
    cluster_measure, dyadic_decomposition, int_bruteforce, int_exact, is_n_linked,
    is_strictly_positive, kelley_build_measure, kelley_check, linked_vs_int_report, min_pieces,
    multiset_scan, small_positive_subset, value_denominator, approx_f64, Element, Family,
    LinkednessCheck, Measure, NestingCheck, NonatomicError, PieceCriterion, Rational,
    SetAlgebra, SplittingCheck, StrictPositivity,
};

use crate::instance::{InstanceError, InstanceFile, NamedDecomposition, NamedFamily};

/// Input-class failures: exit status 2.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliError {
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error("the instance defines no families")]
    NoFamilies,
    #[error("the instance defines no decompositions; this command needs one")]
    NoDecompositions,
    #[error("{0}")]
    BadFlag(String),
    #[error("{0}")]
    Input(String),
}

/// A rendered report plus the verdict of whatever property was checked.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Report {
    pub text: String,
    /// False when a checked property failed; maps to exit status 1.
    pub ok: bool,
}

/// The dispatchable commands; flag values are already parsed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Command {
    IntNum { oracle: Option<usize> },
    KelleyCheck,
    KelleyBuild,
    ApproxCheck { eps: Rational },
    NonatomicCheck,
    NonatomicBuild,
    SmallSubset { eps: Rational },
    Linked { n: usize },
    MinPieces { criterion: PieceCriterion },
}

/// Item selection shared by every command.
#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Restrict family commands to one named family.
    pub family: Option<String>,
    /// Restrict decomposition commands to one named decomposition.
    pub decomposition: Option<String>,
    /// Append decimal approximations to rationals.
    pub decimal: bool,
}

pub fn run_command(
    instance: &InstanceFile,
    command: &Command,
    options: &RunOptions,
) -> Result<Report, CliError> {
    match command {
        Command::IntNum { oracle } => {
            family_command(instance, options, |name, family, out, fmt| {
                intnum_report(name, family, *oracle, out, fmt)
            })
        }
        Command::Linked { n } => {
            if *n < 1 {
                return Err(CliError::BadFlag("--n must be at least 1".into()));
            }
            family_command(instance, options, |name, family, out, fmt| {
                linked_report(name, family, *n, out, fmt)
            })
        }
        Command::MinPieces { criterion } => {
            family_command(instance, options, |name, family, out, fmt| {
                min_pieces_report(name, family, criterion, out, fmt)
            })
        }
        Command::KelleyCheck => pieces_command(instance, options, kelley_check_report),
        Command::KelleyBuild => pieces_command(instance, options, kelley_build_report),
        Command::ApproxCheck { eps } => {
            pieces_command(instance, options, |selection, out, fmt| {
                approx_check_report(selection, eps, out, fmt)
            })
        }
        Command::NonatomicCheck => {
            leveled_command(instance, options, nonatomic_check_report)
        }
        Command::NonatomicBuild => {
            leveled_command(instance, options, nonatomic_build_report)
        }
        Command::SmallSubset { eps } => {
            leveled_command(instance, options, |name, dec, out, fmt| {
                small_subset_report(name, dec, eps, out, fmt)
            })
        }
    }
}

/// The dyadic generator: an instance whose decomposition lists the
/// binary-tree levels of a `2^depth`-atom universe.
pub fn dyadic_instance(depth: usize) -> Result<InstanceFile, CliError> {
    let dec = dyadic_decomposition(depth).map_err(|e| CliError::Input(e.to_string()))?;
    let families: Vec<NamedFamily> = dec
        .levels()
        .iter()
        .enumerate()
        .map(|(n, family)| NamedFamily {
            name: format!("lvl{n}"),
            sets: family.members().iter().map(|m| m.atoms()).collect(),
        })
        .collect();
    let decomposition = NamedDecomposition {
        name: "dyadic".into(),
        families: families.iter().map(|f| f.name.clone()).collect(),
    };
    let instance = InstanceFile {
        atom_count: dec.ambient().atom_count(),
        names: None,
        families,
        decompositions: vec![decomposition],
    };
    instance.validate().expect("generated instances are valid");
    Ok(instance)
}

// ---------------------------------------------------------------------
// Selection plumbing

struct RationalFormatter {
    decimal: bool,
}

impl RationalFormatter {
    fn rat(&self, r: &Rational) -> String {
        if self.decimal && !r.denom().is_one() {
            format!("{r} (~{:.6})", approx_f64(r))
        } else {
            r.to_string()
        }
    }

    fn rats(&self, values: &[Rational]) -> String {
        values
            .iter()
            .map(|v| self.rat(v))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn family_command<F>(
    instance: &InstanceFile,
    options: &RunOptions,
    mut body: F,
) -> Result<Report, CliError>
where
    F: FnMut(&str, &Family, &mut String, &RationalFormatter) -> Result<bool, CliError>,
{
    let selected: Vec<&NamedFamily> = match &options.family {
        Some(name) => vec![instance.family(name)?],
        None => instance.families.iter().collect(),
    };
    if selected.is_empty() {
        return Err(CliError::NoFamilies);
    }
    let fmt = RationalFormatter {
        decimal: options.decimal,
    };
    let mut text = String::new();
    let mut ok = true;
    for named in selected {
        let family = instance.to_family(named);
        ok &= body(&named.name, &family, &mut text, &fmt)?;
    }
    Ok(Report { text, ok })
}

/// Pieces resolved for one report: where they came from, their names,
/// the families themselves, and the universe width.
struct PieceSelection {
    label: String,
    names: Vec<String>,
    pieces: Vec<Family>,
    width: usize,
}

impl PieceSelection {
    fn name(&self, index: usize) -> &str {
        &self.names[index]
    }
}

fn pieces_command<F>(
    instance: &InstanceFile,
    options: &RunOptions,
    mut body: F,
) -> Result<Report, CliError>
where
    F: FnMut(&PieceSelection, &mut String, &RationalFormatter) -> Result<bool, CliError>,
{
    let from_dec = |dec: &NamedDecomposition| PieceSelection {
        label: dec.name.clone(),
        names: dec.families.clone(),
        pieces: instance.to_pieces(dec),
        width: instance.atom_count,
    };
    let selections: Vec<PieceSelection> = match &options.decomposition {
        Some(name) => vec![from_dec(instance.decomposition(name)?)],
        None if !instance.decompositions.is_empty() => {
            instance.decompositions.iter().map(from_dec).collect()
        }
        None => {
            // No decompositions: treat the family list itself as the pieces.
            if instance.families.is_empty() {
                return Err(CliError::NoFamilies);
            }
            vec![PieceSelection {
                label: "(all families)".into(),
                names: instance.families.iter().map(|f| f.name.clone()).collect(),
                pieces: instance
                    .families
                    .iter()
                    .map(|f| instance.to_family(f))
                    .collect(),
                width: instance.atom_count,
            }]
        }
    };
    let fmt = RationalFormatter {
        decimal: options.decimal,
    };
    let mut text = String::new();
    let mut ok = true;
    for selection in &selections {
        ok &= body(selection, &mut text, &fmt)?;
    }
    Ok(Report { text, ok })
}

fn leveled_command<F>(
    instance: &InstanceFile,
    options: &RunOptions,
    mut body: F,
) -> Result<Report, CliError>
where
    F: FnMut(&str, &mrp_core::LeveledDecomposition, &mut String, &RationalFormatter) -> Result<bool, CliError>,
{
    let selected: Vec<&NamedDecomposition> = match &options.decomposition {
        Some(name) => vec![instance.decomposition(name)?],
        None => instance.decompositions.iter().collect(),
    };
    if selected.is_empty() {
        return Err(CliError::NoDecompositions);
    }
    let fmt = RationalFormatter {
        decimal: options.decimal,
    };
    let mut text = String::new();
    let mut ok = true;
    for named in selected {
        let dec = instance.to_leveled(named);
        ok &= body(&named.name, &dec, &mut text, &fmt)?;
    }
    Ok(Report { text, ok })
}

// ---------------------------------------------------------------------
// Per-command renderers

fn intnum_report(
    name: &str,
    family: &Family,
    oracle: Option<usize>,
    out: &mut String,
    fmt: &RationalFormatter,
) -> Result<bool, CliError> {
    let certificate = int_exact(family);
    writeln!(out, "family {name}: int = {}", fmt.rat(&certificate.value)).unwrap();
    writeln!(out, "  measure: {}", fmt.rats(certificate.measure.weights())).unwrap();
    writeln!(out, "  adversary: {}", fmt.rats(&certificate.adversary)).unwrap();
    if let Some(bound) = oracle {
        if bound < 1 {
            return Err(CliError::BadFlag("--oracle must be at least 1".into()));
        }
        let scan = multiset_scan(family, bound).map_err(|e| CliError::Input(e.to_string()))?;
        let exact = int_bruteforce(family, bound)
            .map_err(|e| CliError::Input(e.to_string()))?
            .exact;
        let needed = value_denominator(&certificate.value);
        writeln!(
            out,
            "  oracle (size <= {bound}): {} [{}], exact from size {needed}",
            fmt.rat(&scan.value),
            if exact { "exact" } else { "upper bound" },
        )
        .unwrap();
    }
    Ok(true)
}

fn linked_report(
    name: &str,
    family: &Family,
    n: usize,
    out: &mut String,
    fmt: &RationalFormatter,
) -> Result<bool, CliError> {
    let rows = linked_vs_int_report(family, n).map_err(|e| CliError::BadFlag(e.to_string()))?;
    writeln!(out, "family {name}: int = {}", fmt.rat(&rows[0].int_value)).unwrap();
    for row in &rows {
        writeln!(
            out,
            "  {}-linked: {}",
            row.n,
            if row.linked { "yes" } else { "no" }
        )
        .unwrap();
    }
    let verdict = is_n_linked(family, n).map_err(|e| CliError::BadFlag(e.to_string()))?;
    match verdict {
        LinkednessCheck::Linked => {
            writeln!(out, "  verdict: {n}-linked").unwrap();
            Ok(true)
        }
        LinkednessCheck::Violation { subset } => {
            let indices: Vec<String> = subset.iter().map(|i| i.to_string()).collect();
            writeln!(
                out,
                "  verdict: not {n}-linked, witness members {}",
                indices.join(" ")
            )
            .unwrap();
            Ok(false)
        }
    }
}

fn min_pieces_report(
    name: &str,
    family: &Family,
    criterion: &PieceCriterion,
    out: &mut String,
    fmt: &RationalFormatter,
) -> Result<bool, CliError> {
    let label = match criterion {
        PieceCriterion::Centered => "centered".to_string(),
        PieceCriterion::NLinked(n) => format!("{n}-linked"),
        PieceCriterion::IntAtLeast(beta) => format!("int >= {}", fmt.rat(beta)),
    };
    let result = min_pieces(family, criterion).map_err(|e| CliError::BadFlag(e.to_string()))?;
    writeln!(out, "family {name}: criterion = {label}").unwrap();
    writeln!(out, "  minimum pieces: {}", result.count).unwrap();
    for (index, piece) in result.piece_indices.iter().enumerate() {
        let members: Vec<String> = piece.iter().map(|i| i.to_string()).collect();
        writeln!(out, "  piece {}: members {}", index + 1, members.join(" ")).unwrap();
    }
    Ok(true)
}

fn kelley_check_report(
    selection: &PieceSelection,
    out: &mut String,
    fmt: &RationalFormatter,
) -> Result<bool, CliError> {
    let report = kelley_check(&selection.pieces).map_err(|e| CliError::Input(e.to_string()))?;
    writeln!(
        out,
        "decomposition {}: {} pieces",
        selection.label,
        selection.pieces.len()
    )
    .unwrap();
    for (index, value) in report.values.iter().enumerate() {
        writeln!(
            out,
            "  piece {}: int = {}",
            selection.name(index),
            fmt.rat(value)
        )
        .unwrap();
    }
    writeln!(
        out,
        "  all pieces positive: {}",
        if report.all_positive { "yes" } else { "no" }
    )
    .unwrap();
    Ok(report.all_positive)
}

fn kelley_build_report(
    selection: &PieceSelection,
    out: &mut String,
    fmt: &RationalFormatter,
) -> Result<bool, CliError> {
    let built =
        kelley_build_measure(&selection.pieces).map_err(|e| CliError::Input(e.to_string()))?;
    writeln!(
        out,
        "decomposition {}: {} pieces",
        selection.label,
        selection.pieces.len()
    )
    .unwrap();
    for (index, (value, bound)) in built
        .piece_values
        .iter()
        .zip(&built.per_piece_lower_bounds)
        .enumerate()
    {
        writeln!(
            out,
            "  piece {}: int = {}, lower bound = {}",
            selection.name(index),
            fmt.rat(value),
            fmt.rat(bound)
        )
        .unwrap();
    }
    writeln!(out, "  measure: {}", fmt.rats(built.measure.weights())).unwrap();
    let width = selection.width;
    let ambient = SetAlgebra::power_set(width);
    match is_strictly_positive(&built.measure, &ambient)
        .map_err(|e| CliError::Input(e.to_string()))?
    {
        StrictPositivity::Positive => {
            writeln!(out, "  strictly positive on the {width}-atom power set: yes").unwrap();
            Ok(true)
        }
        StrictPositivity::Zero { witness } => {
            writeln!(
                out,
                "  strictly positive on the {width}-atom power set: no, witness {witness}"
            )
            .unwrap();
            Ok(false)
        }
    }
}

fn approx_check_report(
    selection: &PieceSelection,
    eps: &Rational,
    out: &mut String,
    fmt: &RationalFormatter,
) -> Result<bool, CliError> {
    let report = approximability_check(&selection.pieces, eps)
        .map_err(|e| CliError::BadFlag(e.to_string()))?;
    writeln!(
        out,
        "decomposition {}: eps = {}, required int >= {}",
        selection.label,
        fmt.rat(eps),
        fmt.rat(&report.threshold)
    )
    .unwrap();
    for (index, value) in report.values.iter().enumerate() {
        let verdict = if *value >= report.threshold { "ok" } else { "below" };
        writeln!(
            out,
            "  piece {}: int = {} [{verdict}]",
            selection.name(index),
            fmt.rat(value)
        )
        .unwrap();
    }
    writeln!(
        out,
        "  approximable at eps: {}",
        if report.ok { "yes" } else { "no" }
    )
    .unwrap();
    Ok(report.ok)
}

fn nonatomic_check_report(
    name: &str,
    dec: &mrp_core::LeveledDecomposition,
    out: &mut String,
    fmt: &RationalFormatter,
) -> Result<bool, CliError> {
    writeln!(out, "decomposition {name}: depth {}", dec.depth()).unwrap();
    let mut ok = true;

    match check_nesting(dec) {
        NestingCheck::Nested => writeln!(out, "  nesting: ok").unwrap(),
        NestingCheck::Violation { level, element } => {
            ok = false;
            writeln!(
                out,
                "  nesting: violated at level {level} by {element}"
            )
            .unwrap();
        }
    }

    for bound in check_intersection_bounds(dec) {
        let verdict = if bound.ok { "ok" } else { "below" };
        writeln!(
            out,
            "  level {}: int = {} vs 2^-{} = {} [{verdict}]",
            bound.level,
            fmt.rat(&bound.value),
            bound.level,
            fmt.rat(&bound.required)
        )
        .unwrap();
        ok &= bound.ok;
    }

    match check_splitting(dec) {
        SplittingCheck::Splittable { .. } => writeln!(out, "  splitting: ok").unwrap(),
        SplittingCheck::Violation { level, element } => {
            ok = false;
            writeln!(
                out,
                "  splitting: no disjoint pair below {element} of level {level}"
            )
            .unwrap();
        }
    }

    writeln!(
        out,
        "  conditions: {}",
        if ok { "all hold" } else { "failed" }
    )
    .unwrap();
    Ok(ok)
}

fn nonatomic_build_report(
    name: &str,
    dec: &mrp_core::LeveledDecomposition,
    out: &mut String,
    fmt: &RationalFormatter,
) -> Result<bool, CliError> {
    writeln!(out, "decomposition {name}: depth {}", dec.depth()).unwrap();
    match cluster_measure(dec) {
        Ok(certificate) => {
            writeln!(out, "  cluster measure: {}", fmt.rats(certificate.measure.weights()))
                .unwrap();
            for level in &certificate.level_certificates {
                writeln!(
                    out,
                    "  level {}: min mass {} >= {}",
                    level.level,
                    fmt.rat(&level.min_mass),
                    fmt.rat(&level.required)
                )
                .unwrap();
            }
            Ok(true)
        }
        Err(failure) => {
            writeln!(out, "  construction failed: {failure}").unwrap();
            Ok(false)
        }
    }
}

fn small_subset_report(
    name: &str,
    dec: &mrp_core::LeveledDecomposition,
    eps: &Rational,
    out: &mut String,
    fmt: &RationalFormatter,
) -> Result<bool, CliError> {
    writeln!(
        out,
        "decomposition {name}: depth {}, eps = {}",
        dec.depth(),
        fmt.rat(eps)
    )
    .unwrap();
    let measure: Measure = match cluster_measure(dec) {
        Ok(certificate) => certificate.measure,
        Err(failure) => {
            writeln!(out, "  cluster measure unavailable: {failure}").unwrap();
            return Ok(false);
        }
    };

    // The refinement guarantee 2^{n-k} < eps is relative to the source
    // level, so the meaningful report starts from the coarsest one.
    let mut seen: Vec<&Element> = Vec::new();
    let mut ok = true;
    for a in dec.levels()[0].members() {
        if seen.contains(&a) {
            continue;
        }
        seen.push(a);
        match small_positive_subset(dec, &measure, a, 0, eps) {
            Ok(subset) => {
                writeln!(
                    out,
                    "  {a}: subset {} at level {}, mass {}",
                    subset.element,
                    subset.refined_to_level,
                    fmt.rat(&subset.mass)
                )
                .unwrap();
            }
            Err(NonatomicError::DepthInsufficient { needed, available }) => {
                ok = false;
                writeln!(
                    out,
                    "  {a}: needs depth {needed}, decomposition stops at {available}"
                )
                .unwrap();
            }
            Err(NonatomicError::EpsilonNotPositive { eps }) => {
                return Err(CliError::BadFlag(format!(
                    "--eps must be positive, got {eps}"
                )));
            }
            Err(other) => {
                ok = false;
                writeln!(out, "  {a}: failed: {other}").unwrap();
            }
        }
    }
    writeln!(
        out,
        "  level-0 members: {}",
        if ok { "ok" } else { "failed" }
    )
    .unwrap();
    Ok(ok)
}

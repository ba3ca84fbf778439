//! Instance files: a line-oriented text format for hand-written
//! instances, with a JSON rendering of the same model accepted
//! interchangeably when the file extension says so.
//!
//! ```text
//! # comments run to end of line
//! atoms 7
//! names p0 p1 p2 p3 p4 p5 p6
//! family lines:
//!   0 1 2
//!   0 3 4
//! decomposition dec:
//!   lines
//! ```
//!
//! A set line is either a list of atom indices or a single 0/1 bitstring
//! whose length equals the atom count; bitstrings win the tie when both
//! readings are possible. The canonical serialization always writes
//! ascending atom indices, so parse-serialize-parse is the identity on
//! the validated structure.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use mrp_core::{Element, Family, LeveledDecomposition, SetAlgebra};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InstanceError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: atom index {index} out of range for {atom_count} atoms")]
    AtomOutOfRange {
        line: usize,
        index: usize,
        atom_count: usize,
    },
    #[error("line {line}: empty set")]
    EmptySet { line: usize },
    #[error("line {line}: family {name:?} is not defined")]
    DanglingReference { line: usize, name: String },
    #[error("line {line}: duplicate definition of {name:?}")]
    DuplicateName { line: usize, name: String },
    #[error("family {name:?} has no sets")]
    EmptyFamily { name: String },
    #[error("decomposition {name:?} lists no families")]
    EmptyDecomposition { name: String },
    #[error("expected {atom_count} atom names, found {found}")]
    BadNameCount { atom_count: usize, found: usize },
    #[error("invalid JSON instance: {0}")]
    Json(String),
    #[error("unknown family {name:?}")]
    UnknownFamily { name: String },
    #[error("unknown decomposition {name:?}")]
    UnknownDecomposition { name: String },
}

/// One named family: sets as ascending atom-index lists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedFamily {
    pub name: String,
    pub sets: Vec<Vec<usize>>,
}

/// One named decomposition: an ordered list of family names.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedDecomposition {
    pub name: String,
    pub families: Vec<String>,
}

/// A validated instance: universe size, optional atom labels, named
/// families, and named decompositions over those families.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub atom_count: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub names: Option<Vec<String>>,
    pub families: Vec<NamedFamily>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub decompositions: Vec<NamedDecomposition>,
}

impl InstanceFile {
    /// Checks every structural invariant; parse paths call this last.
    pub fn validate(&self) -> Result<(), InstanceError> {
        if let Some(names) = &self.names {
            if names.len() != self.atom_count {
                return Err(InstanceError::BadNameCount {
                    atom_count: self.atom_count,
                    found: names.len(),
                });
            }
        }
        let mut seen = Vec::new();
        for family in &self.families {
            if seen.contains(&&family.name) {
                return Err(InstanceError::DuplicateName {
                    line: 0,
                    name: family.name.clone(),
                });
            }
            seen.push(&family.name);
            if family.sets.is_empty() {
                return Err(InstanceError::EmptyFamily {
                    name: family.name.clone(),
                });
            }
            for set in &family.sets {
                if set.is_empty() {
                    return Err(InstanceError::EmptySet { line: 0 });
                }
                for &index in set {
                    if index >= self.atom_count {
                        return Err(InstanceError::AtomOutOfRange {
                            line: 0,
                            index,
                            atom_count: self.atom_count,
                        });
                    }
                }
            }
        }
        let mut seen = Vec::new();
        for dec in &self.decompositions {
            if seen.contains(&&dec.name) {
                return Err(InstanceError::DuplicateName {
                    line: 0,
                    name: dec.name.clone(),
                });
            }
            seen.push(&dec.name);
            if dec.families.is_empty() {
                return Err(InstanceError::EmptyDecomposition {
                    name: dec.name.clone(),
                });
            }
            for reference in &dec.families {
                if !self.families.iter().any(|f| &f.name == reference) {
                    return Err(InstanceError::DanglingReference {
                        line: 0,
                        name: reference.clone(),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn family(&self, name: &str) -> Result<&NamedFamily, InstanceError> {
        self.families
            .iter()
            .find(|f| f.name == name)
            .ok_or_else(|| InstanceError::UnknownFamily {
                name: name.to_string(),
            })
    }

    pub fn decomposition(&self, name: &str) -> Result<&NamedDecomposition, InstanceError> {
        self.decompositions
            .iter()
            .find(|d| d.name == name)
            .ok_or_else(|| InstanceError::UnknownDecomposition {
                name: name.to_string(),
            })
    }

    /// Builds the core family for a named one.
    pub fn to_family(&self, named: &NamedFamily) -> Family {
        let members = named
            .sets
            .iter()
            .map(|set| Element::from_atoms(self.atom_count, set).expect("validated"))
            .collect();
        Family::new(self.atom_count, members).expect("validated")
    }

    /// Resolves a decomposition to its pieces, in order.
    pub fn to_pieces(&self, dec: &NamedDecomposition) -> Vec<Family> {
        dec.families
            .iter()
            .map(|name| self.to_family(self.family(name).expect("validated")))
            .collect()
    }

    /// Resolves a decomposition to levels over the implicit power set.
    pub fn to_leveled(&self, dec: &NamedDecomposition) -> LeveledDecomposition {
        let ambient = SetAlgebra::power_set(self.atom_count);
        LeveledDecomposition::new(ambient, self.to_pieces(dec)).expect("validated")
    }
}

/// Parses the text format with line-numbered diagnostics.
pub fn parse_instance(text: &str) -> Result<InstanceFile, InstanceError> {
    enum Section {
        None,
        Family(usize),
        Decomposition(usize),
    }

    let mut atom_count: Option<usize> = None;
    let mut names: Option<Vec<String>> = None;
    let mut families: Vec<NamedFamily> = Vec::new();
    let mut decompositions: Vec<NamedDecomposition> = Vec::new();
    let mut section = Section::None;
    // (line, index set) per set, and (line, name) per reference, for diagnostics.
    let mut set_lines: Vec<usize> = Vec::new();
    let mut reference_lines: Vec<(usize, String)> = Vec::new();

    for (offset, raw) in text.lines().enumerate() {
        let line = offset + 1;
        let content = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let content = content.trim();
        if content.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();

        match tokens[0] {
            "atoms" => {
                if atom_count.is_some() {
                    return Err(InstanceError::Syntax {
                        line,
                        message: "duplicate atoms declaration".into(),
                    });
                }
                if tokens.len() != 2 {
                    return Err(InstanceError::Syntax {
                        line,
                        message: "expected: atoms <count>".into(),
                    });
                }
                let count: usize = tokens[1].parse().map_err(|_| InstanceError::Syntax {
                    line,
                    message: format!("bad atom count {:?}", tokens[1]),
                })?;
                if count == 0 {
                    return Err(InstanceError::Syntax {
                        line,
                        message: "atom count must be positive".into(),
                    });
                }
                atom_count = Some(count);
            }
            "names" => {
                let count = require_atoms(atom_count, line)?;
                let labels: Vec<String> = tokens[1..].iter().map(|s| s.to_string()).collect();
                if labels.len() != count {
                    return Err(InstanceError::BadNameCount {
                        atom_count: count,
                        found: labels.len(),
                    });
                }
                names = Some(labels);
            }
            "family" => {
                require_atoms(atom_count, line)?;
                let name = parse_section_name(&tokens, line, "family <name>:")?;
                if families.iter().any(|f| f.name == name) {
                    return Err(InstanceError::DuplicateName { line, name });
                }
                families.push(NamedFamily {
                    name,
                    sets: Vec::new(),
                });
                section = Section::Family(families.len() - 1);
            }
            "decomposition" => {
                require_atoms(atom_count, line)?;
                let mut rest = tokens.clone();
                let name = parse_section_name(&rest, line, "decomposition <name>: [families]")?;
                if decompositions.iter().any(|d| d.name == name) {
                    return Err(InstanceError::DuplicateName { line, name });
                }
                // Family names may follow inline after the colon.
                rest.drain(0..2);
                let inline: Vec<String> = rest.iter().map(|s| s.to_string()).collect();
                for reference in &inline {
                    reference_lines.push((line, reference.clone()));
                }
                decompositions.push(NamedDecomposition {
                    name,
                    families: inline,
                });
                section = Section::Decomposition(decompositions.len() - 1);
            }
            _ => match section {
                Section::Family(index) => {
                    let count = atom_count.expect("family section requires atoms");
                    let set = parse_set(&tokens, count, line)?;
                    families[index].sets.push(set);
                    set_lines.push(line);
                }
                Section::Decomposition(index) => {
                    for token in &tokens {
                        decompositions[index].families.push(token.to_string());
                        reference_lines.push((line, token.to_string()));
                    }
                }
                Section::None => {
                    return Err(InstanceError::Syntax {
                        line,
                        message: format!("unexpected content {content:?} outside any section"),
                    });
                }
            },
        }
    }

    let atom_count = atom_count.ok_or(InstanceError::Syntax {
        line: text.lines().count().max(1),
        message: "missing atoms declaration".into(),
    })?;

    let instance = InstanceFile {
        atom_count,
        names,
        families,
        decompositions,
    };

    // Re-attach line numbers to reference errors where we can.
    if let Err(err) = instance.validate() {
        return Err(match err {
            InstanceError::DanglingReference { name, .. } => {
                let line = reference_lines
                    .iter()
                    .find(|(_, n)| *n == name)
                    .map(|(l, _)| *l)
                    .unwrap_or(0);
                InstanceError::DanglingReference { line, name }
            }
            other => other,
        });
    }
    Ok(instance)
}

fn require_atoms(atom_count: Option<usize>, line: usize) -> Result<usize, InstanceError> {
    atom_count.ok_or(InstanceError::Syntax {
        line,
        message: "atoms declaration must come first".into(),
    })
}

fn parse_section_name(
    tokens: &[&str],
    line: usize,
    usage: &str,
) -> Result<String, InstanceError> {
    let Some(token) = tokens.get(1) else {
        return Err(InstanceError::Syntax {
            line,
            message: format!("expected: {usage}"),
        });
    };
    let Some(name) = token.strip_suffix(':') else {
        return Err(InstanceError::Syntax {
            line,
            message: format!("section name must end with a colon; expected: {usage}"),
        });
    };
    if name.is_empty() {
        return Err(InstanceError::Syntax {
            line,
            message: format!("empty section name; expected: {usage}"),
        });
    }
    Ok(name.to_string())
}

fn parse_set(
    tokens: &[&str],
    atom_count: usize,
    line: usize,
) -> Result<Vec<usize>, InstanceError> {
    // Single 0/1 token of exactly the universe width reads as a bitstring.
    if tokens.len() == 1
        && tokens[0].len() == atom_count
        && tokens[0].chars().all(|c| c == '0' || c == '1')
    {
        let atoms: Vec<usize> = tokens[0]
            .chars()
            .enumerate()
            .filter(|(_, c)| *c == '1')
            .map(|(i, _)| i)
            .collect();
        if atoms.is_empty() {
            return Err(InstanceError::EmptySet { line });
        }
        return Ok(atoms);
    }
    let mut atoms = Vec::with_capacity(tokens.len());
    for token in tokens {
        let index: usize = token.parse().map_err(|_| InstanceError::Syntax {
            line,
            message: format!("bad atom index {token:?}"),
        })?;
        if index >= atom_count {
            return Err(InstanceError::AtomOutOfRange {
                line,
                index,
                atom_count,
            });
        }
        atoms.push(index);
    }
    atoms.sort_unstable();
    atoms.dedup();
    if atoms.is_empty() {
        return Err(InstanceError::EmptySet { line });
    }
    Ok(atoms)
}

/// Canonical text rendering: sets as ascending indices, one per line.
pub fn serialize_instance(instance: &InstanceFile) -> String {
    let mut out = String::new();
    out.push_str(&format!("atoms {}\n", instance.atom_count));
    if let Some(names) = &instance.names {
        out.push_str(&format!("names {}\n", names.join(" ")));
    }
    for family in &instance.families {
        out.push_str(&format!("family {}:\n", family.name));
        for set in &family.sets {
            let indices: Vec<String> = set.iter().map(|i| i.to_string()).collect();
            out.push_str(&format!("  {}\n", indices.join(" ")));
        }
    }
    for dec in &instance.decompositions {
        out.push_str(&format!("decomposition {}:\n", dec.name));
        for family in &dec.families {
            out.push_str(&format!("  {family}\n"));
        }
    }
    out
}

/// Parses text or JSON depending on whether the name ends in `.json`.
pub fn parse_named(file_name: &str, text: &str) -> Result<InstanceFile, InstanceError> {
    if file_name.ends_with(".json") {
        let instance: InstanceFile =
            serde_json::from_str(text).map_err(|e| InstanceError::Json(e.to_string()))?;
        instance.validate()?;
        Ok(instance)
    } else {
        parse_instance(text)
    }
}

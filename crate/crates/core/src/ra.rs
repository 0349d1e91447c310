//! Integral symmetric relation algebras described by their diversity cycles.
//!
//! An algebra is a list of atoms (index 0 is always the identity `1'`) and the
//! set of allowed diversity cycles. Every atom is its own converse, so a cycle
//! is a multiset of three diversity atoms. Identity cycles `1'xx` are implied
//! and never stored.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

/// Name of the identity atom.
pub const IDENTITY_NAME: &str = "1'";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RaError {
    #[error("unknown atom id {0}")]
    UnknownAtomId(usize),
    #[error("unknown atom name {0:?}")]
    UnknownAtom(String),
    #[error("duplicate atom name {0:?}")]
    DuplicateAtom(String),
    #[error("the identity atom is implicit and may not appear in {0}")]
    IdentityNotAllowed(&'static str),
    #[error("malformed cycle {0:?}: expected three atoms")]
    MalformedCycle(String),
    #[error("expected a diversity atom, got the identity")]
    NotDiversity,
    #[error("only symmetric atoms are supported")]
    NonSymmetric,
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("too many atoms ({0}); at most 63 diversity atoms are supported")]
    TooManyAtoms(usize),
}

/// Index of an atom inside a [`RaSpec`]. Index 0 is the identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct AtomId(pub u8);

impl AtomId {
    pub const IDENTITY: AtomId = AtomId(0);

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn is_identity(self) -> bool {
        self.0 == 0
    }
}

/// Three diversity atoms in sorted order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CycleTriple([AtomId; 3]);

impl CycleTriple {
    /// Canonicalizes `{i, j, k}`. Fails if any atom is the identity.
    pub fn new(i: AtomId, j: AtomId, k: AtomId) -> Result<Self, RaError> {
        if i.is_identity() || j.is_identity() || k.is_identity() {
            return Err(RaError::IdentityNotAllowed("a diversity cycle"));
        }
        let mut t = [i, j, k];
        t.sort_unstable();
        Ok(CycleTriple(t))
    }

    pub fn atoms(&self) -> [AtomId; 3] {
        self.0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RaSpec {
    name: String,
    atoms: Vec<String>,
    cycles: BTreeSet<CycleTriple>,
}

/// Atoms `i` for which `S_j + S_k` must cover `S_i`, and whether it must hold 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SumsetProfile {
    pub atoms: Vec<AtomId>,
    pub include_zero: bool,
}

impl RaSpec {
    /// Builds an algebra from diversity atom names and allowed cycles given as
    /// name triples.
    pub fn new<S: AsRef<str>>(
        name: &str,
        diversity: &[S],
        cycles: &[[&str; 3]],
    ) -> Result<Self, RaError> {
        let mut atoms = vec![IDENTITY_NAME.to_string()];
        for d in diversity {
            let d = d.as_ref();
            if d == IDENTITY_NAME {
                return Err(RaError::IdentityNotAllowed("the atom list"));
            }
            if atoms.iter().any(|a| a == d) {
                return Err(RaError::DuplicateAtom(d.to_string()));
            }
            atoms.push(d.to_string());
        }
        if atoms.len() > 64 {
            return Err(RaError::TooManyAtoms(atoms.len() - 1));
        }
        let mut spec = RaSpec {
            name: name.to_string(),
            atoms,
            cycles: BTreeSet::new(),
        };
        for [i, j, k] in cycles {
            let t = CycleTriple::new(spec.atom(i)?, spec.atom(j)?, spec.atom(k)?)?;
            spec.cycles.insert(t);
        }
        Ok(spec)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Number of atoms including the identity.
    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    pub fn diversity_atoms(&self) -> impl Iterator<Item = AtomId> + '_ {
        (1..self.atoms.len()).map(|i| AtomId(i as u8))
    }

    pub fn atom(&self, name: &str) -> Result<AtomId, RaError> {
        self.atoms
            .iter()
            .position(|a| a == name)
            .map(|i| AtomId(i as u8))
            .ok_or_else(|| RaError::UnknownAtom(name.to_string()))
    }

    pub fn atom_name(&self, id: AtomId) -> &str {
        &self.atoms[id.index()]
    }

    fn check(&self, id: AtomId) -> Result<(), RaError> {
        if id.index() < self.atoms.len() {
            Ok(())
        } else {
            Err(RaError::UnknownAtomId(id.index()))
        }
    }

    pub fn allowed_cycles(&self) -> impl Iterator<Item = &CycleTriple> {
        self.cycles.iter()
    }

    /// Every multiset of three diversity atoms that is not an allowed cycle.
    pub fn forbidden_cycles(&self) -> Vec<CycleTriple> {
        self.all_triples()
            .into_iter()
            .filter(|t| !self.cycles.contains(t))
            .collect()
    }

    /// All multisets of three diversity atoms, in canonical order.
    pub fn all_triples(&self) -> Vec<CycleTriple> {
        let d = self.atoms.len();
        let mut out = Vec::new();
        for i in 1..d {
            for j in i..d {
                for k in j..d {
                    out.push(CycleTriple([
                        AtomId(i as u8),
                        AtomId(j as u8),
                        AtomId(k as u8),
                    ]));
                }
            }
        }
        out
    }

    /// Whether `ijk` is a cycle. Triples with an identity atom follow the
    /// identity rule: `1'xy` is a cycle iff `x = y`.
    pub fn is_cycle(&self, i: AtomId, j: AtomId, k: AtomId) -> Result<bool, RaError> {
        self.check(i)?;
        self.check(j)?;
        self.check(k)?;
        Ok(self.is_cycle_unchecked(i, j, k))
    }

    pub(crate) fn is_cycle_unchecked(&self, i: AtomId, j: AtomId, k: AtomId) -> bool {
        if i.is_identity() {
            j == k
        } else if j.is_identity() {
            i == k
        } else if k.is_identity() {
            i == j
        } else {
            let mut t = [i, j, k];
            t.sort_unstable();
            self.cycles.contains(&CycleTriple(t))
        }
    }

    /// The atoms a Cayley representation must find in `S_j + S_k`.
    pub fn required_sumset_profile(&self, j: AtomId, k: AtomId) -> Result<SumsetProfile, RaError> {
        self.check(j)?;
        self.check(k)?;
        if j.is_identity() || k.is_identity() {
            return Err(RaError::NotDiversity);
        }
        let atoms = self
            .diversity_atoms()
            .filter(|&i| self.is_cycle_unchecked(i, j, k))
            .collect();
        Ok(SumsetProfile {
            atoms,
            include_zero: j == k,
        })
    }

    /// Renders a triple as concatenated names (`acc`) or comma separated when
    /// some atom name is longer than one character.
    pub fn triple_name(&self, t: &[AtomId; 3]) -> String {
        let single = self.atoms[1..].iter().all(|a| a.chars().count() == 1);
        let names: Vec<&str> = t.iter().map(|&a| self.atom_name(a)).collect();
        if single {
            names.concat()
        } else {
            names.join(",")
        }
    }

    /// Serializes to the fixture grammar read by [`parse_spec`].
    pub fn to_fixture_text(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("name: {}\n", self.name));
        s.push_str(&format!("atoms: {}\n", self.atoms[1..].join(" ")));
        let cycles: Vec<String> = self.cycles.iter().map(|t| self.triple_name(&t.0)).collect();
        s.push_str(&format!("cycles: {}\n", cycles.join(" ")));
        s
    }
}

impl fmt::Display for RaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name)
    }
}

/// Relation algebra 52_65: atoms 1', a, b, c; forbidden diversity cycles ccc, abb, bbc.
pub fn builtin_52_65() -> RaSpec {
    RaSpec::new(
        "52_65",
        &["a", "b", "c"],
        &[
            ["a", "a", "a"],
            ["b", "b", "b"],
            ["a", "c", "c"],
            ["a", "a", "b"],
            ["a", "a", "c"],
            ["b", "c", "c"],
            ["a", "b", "c"],
        ],
    )
    .expect("builtin algebra is well formed")
}

/// Relation algebra 59_65: forbidden diversity cycles bbb, bbc only.
pub fn builtin_59_65() -> RaSpec {
    RaSpec::new(
        "59_65",
        &["a", "b", "c"],
        &[
            ["a", "a", "a"],
            ["a", "c", "c"],
            ["a", "a", "b"],
            ["a", "a", "c"],
            ["b", "c", "c"],
            ["a", "b", "c"],
            ["c", "c", "c"],
            ["a", "b", "b"],
        ],
    )
    .expect("builtin algebra is well formed")
}

/// Looks up a builtin algebra by name (`52_65`, `59_65`).
pub fn builtin(name: &str) -> Option<RaSpec> {
    match name {
        "52_65" | "52" => Some(builtin_52_65()),
        "59_65" | "59" => Some(builtin_59_65()),
        _ => None,
    }
}

/// Parses the line-oriented fixture grammar:
///
/// ```text
/// # comment
/// name: 52_65          (optional)
/// symmetric: yes       (optional; anything else is rejected)
/// atoms: a b c
/// cycles: aaa bbb acc aab aac bcc abc
/// ```
///
/// Cycle tokens are either three single-character names run together or
/// three names separated by commas (`x1,x1,x2`). Both `atoms:` and `cycles:`
/// may be repeated; their tokens accumulate. An empty `cycles:` line is an
/// algebra with every diversity cycle forbidden.
pub fn parse_spec(text: &str) -> Result<RaSpec, RaError> {
    let mut name = String::from("custom");
    let mut atoms: Vec<String> = Vec::new();
    let mut cycle_tokens: Vec<(usize, String)> = Vec::new();

    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, rest) = line.split_once(':').ok_or_else(|| RaError::Syntax {
            line: n + 1,
            msg: format!("expected `key: value`, got {line:?}"),
        })?;
        match key.trim() {
            "name" => name = rest.trim().to_string(),
            "atoms" => atoms.extend(rest.split_whitespace().map(str::to_string)),
            "cycles" => {
                cycle_tokens.extend(rest.split_whitespace().map(|t| (n + 1, t.to_string())))
            }
            "symmetric" => match rest.trim() {
                "yes" | "true" => {}
                _ => return Err(RaError::NonSymmetric),
            },
            "converse" => return Err(RaError::NonSymmetric),
            other => {
                return Err(RaError::Syntax {
                    line: n + 1,
                    msg: format!("unknown key {other:?}"),
                })
            }
        }
    }

    let mut spec = RaSpec::new(&name, &atoms, &[])?;
    for (_, tok) in cycle_tokens {
        if tok.contains(IDENTITY_NAME) {
            return Err(RaError::IdentityNotAllowed("a diversity cycle"));
        }
        let parts: Vec<String> = if tok.contains(',') {
            tok.split(',').map(str::to_string).collect()
        } else {
            tok.chars().map(|c| c.to_string()).collect()
        };
        if parts.len() != 3 || parts.iter().any(String::is_empty) {
            return Err(RaError::MalformedCycle(tok));
        }
        let t = CycleTriple::new(
            spec.atom(&parts[0])?,
            spec.atom(&parts[1])?,
            spec.atom(&parts[2])?,
        )?;
        spec.cycles.insert(t);
    }
    Ok(spec)
}

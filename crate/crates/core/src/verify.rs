//! Checking candidate representations.
//!
//! Two independent routes decide whether a coloring represents an algebra:
//!
//! * [`verify_sumsets`] works on a [`ColoredPartition`] of an abelian group
//!   (a Cayley coloring) and compares each `S_j + S_k` with the sumset profile
//!   the algebra requires.
//! * [`verify_bruteforce`] works on any symmetric [`EdgeColoring`] and looks
//!   for a witness `z` of every needed cycle on every edge, scanning all
//!   triangles for forbidden cycles.
//!
//! Both produce a [`VerificationReport`] with the same shape so the two can be
//! compared directly.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::group::{sumset, Element, ElementSet, GroupError, GroupSpec};
use crate::ra::{AtomId, RaError, RaSpec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Ra(#[from] RaError),
    #[error("partition sets belong to different groups")]
    GroupMismatch,
    #[error("element {element} is assigned to both atom #{first} and atom #{second}")]
    Overlap {
        element: String,
        first: usize,
        second: usize,
    },
    #[error("element {0} is not assigned to any atom")]
    Gap(String),
    #[error("the group zero is assigned to atom #{0}")]
    ZeroAssigned(usize),
    #[error("set of atom #{atom} is not symmetric: contains {element} but not its negative")]
    Asymmetric { atom: usize, element: String },
    #[error("algebra has {expected} diversity atoms but the candidate has {got}")]
    AtomCount { expected: usize, got: usize },
    #[error("edge ({x},{y}) has color {color}, outside the algebra's atoms")]
    ColorOutOfRange { x: usize, y: usize, color: u8 },
    #[error("coloring is not symmetric at ({x},{y})")]
    AsymmetricColoring { x: usize, y: usize },
    #[error("diagonal edge ({0},{0}) is not colored by the identity")]
    Diagonal(usize),
    #[error("edge ({x},{y}) is colored by the identity")]
    IdentityOffDiagonal { x: usize, y: usize },
    #[error("coloring size mismatch: {0} colors for {1} points")]
    ColoringSize(usize, usize),
    #[error("brute-force verification supports at most 8 atoms, got {0}")]
    TooManyAtoms(usize),
}

/// Assignment of every nonzero group element to one diversity atom.
///
/// `sets[i]` holds the elements of atom `i + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredPartition {
    group: Arc<GroupSpec>,
    sets: Vec<ElementSet>,
}

impl ColoredPartition {
    /// Validates disjointness, coverage of `G \ {0}` and symmetry `-S = S`.
    /// Empty atoms are allowed here and rejected at verification time.
    pub fn new(group: &Arc<GroupSpec>, sets: Vec<ElementSet>) -> Result<Self, VerifyError> {
        let mut seen = ElementSet::empty(group);
        let mut owner = vec![0usize; group.order()];
        for (i, s) in sets.iter().enumerate() {
            if **s.group() != **group {
                return Err(VerifyError::GroupMismatch);
            }
            if s.contains(group.zero()) {
                return Err(VerifyError::ZeroAssigned(i + 1));
            }
            if let Some(x) = s.intersection(&seen).first() {
                return Err(VerifyError::Overlap {
                    element: group.format_element(x),
                    first: owner[x.0],
                    second: i + 1,
                });
            }
            if let Some(x) = s.difference(&s.negate()).first() {
                return Err(VerifyError::Asymmetric {
                    atom: i + 1,
                    element: group.format_element(x),
                });
            }
            for x in s.iter() {
                owner[x.0] = i + 1;
            }
            seen = seen.union(s);
        }
        if let Some(x) = seen.complement().iter().find(|&x| x != group.zero()) {
            return Err(VerifyError::Gap(group.format_element(x)));
        }
        Ok(ColoredPartition {
            group: Arc::clone(group),
            sets,
        })
    }

    pub fn group(&self) -> &Arc<GroupSpec> {
        &self.group
    }

    /// Number of diversity atoms.
    pub fn atom_count(&self) -> usize {
        self.sets.len()
    }

    /// Set of a diversity atom. Panics on the identity or an unknown atom.
    pub fn set(&self, atom: AtomId) -> &ElementSet {
        assert!(!atom.is_identity(), "the identity has no partition set");
        &self.sets[atom.index() - 1]
    }

    pub fn sets(&self) -> &[ElementSet] {
        &self.sets
    }

    /// Atom of every element, 0 for the group zero.
    pub fn atom_table(&self) -> Vec<u8> {
        let mut table = vec![0u8; self.group.order()];
        for (i, s) in self.sets.iter().enumerate() {
            for x in s.iter() {
                table[x.0] = (i + 1) as u8;
            }
        }
        table
    }

    /// `atom element` lines, one pair per line, readable by [`parse_partition`].
    pub fn to_text(&self, spec: &RaSpec) -> String {
        let mut out = format!("# group: {}\n", self.group);
        for (i, s) in self.sets.iter().enumerate() {
            let name = spec.atom_name(AtomId((i + 1) as u8));
            for x in s.iter() {
                out.push_str(&format!("{name} {}\n", self.group.format_element(x)));
            }
        }
        out
    }
}

/// Reads `atom element [element ...]` lines; `#` starts a comment.
pub fn parse_partition(
    text: &str,
    group: &Arc<GroupSpec>,
    spec: &RaSpec,
) -> Result<ColoredPartition, VerifyError> {
    let d = spec.atom_count() - 1;
    let mut sets: Vec<ElementSet> = (0..d).map(|_| ElementSet::empty(group)).collect();
    for raw in text.lines() {
        let line = raw.split('#').next().unwrap_or("").trim();
        let mut tokens = line.split_whitespace();
        let Some(name) = tokens.next() else { continue };
        let atom = spec.atom(name)?;
        if atom.is_identity() {
            return Err(VerifyError::ZeroAssigned(0));
        }
        for tok in tokens {
            let x = group.parse_element(tok)?;
            if x == group.zero() {
                return Err(VerifyError::ZeroAssigned(atom.index()));
            }
            if let Some(other) = sets.iter().position(|s| s.contains(x)) {
                return Err(VerifyError::Overlap {
                    element: group.format_element(x),
                    first: other + 1,
                    second: atom.index(),
                });
            }
            sets[atom.index() - 1].insert(x);
        }
    }
    ColoredPartition::new(group, sets)
}

/// A uniformly random symmetric partition: each orbit `{x, -x}` of a nonzero
/// element gets an atom in `1..=atoms` independently.
pub fn random_symmetric_partition<R: Rng>(
    group: &Arc<GroupSpec>,
    atoms: usize,
    rng: &mut R,
) -> ColoredPartition {
    let mut sets: Vec<ElementSet> = (0..atoms).map(|_| ElementSet::empty(group)).collect();
    let mut done = ElementSet::empty(group);
    for i in 1..group.order() {
        let x = Element(i);
        if done.contains(x) {
            continue;
        }
        let nx = group.neg(x).expect("in range");
        let a = rng.random_range(0..atoms);
        sets[a].insert(x);
        sets[a].insert(nx);
        done.insert(x);
        done.insert(nx);
    }
    ColoredPartition::new(group, sets).expect("orbit assignment is a partition")
}

/// Symmetric coloring of the complete graph on `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeColoring {
    n: usize,
    colors: Vec<u8>,
}

impl EdgeColoring {
    /// Row-major `n x n` color matrix.
    pub fn new(n: usize, colors: Vec<u8>) -> Result<Self, VerifyError> {
        if colors.len() != n * n {
            return Err(VerifyError::ColoringSize(colors.len(), n));
        }
        for x in 0..n {
            if colors[x * n + x] != 0 {
                return Err(VerifyError::Diagonal(x));
            }
            for y in x + 1..n {
                let c = colors[x * n + y];
                if c != colors[y * n + x] {
                    return Err(VerifyError::AsymmetricColoring { x, y });
                }
                if c == 0 {
                    return Err(VerifyError::IdentityOffDiagonal { x, y });
                }
            }
        }
        Ok(EdgeColoring { n, colors })
    }

    /// Builds the coloring from `color(x, y)` evaluated on `x < y`.
    pub fn from_fn(
        n: usize,
        mut color: impl FnMut(usize, usize) -> AtomId,
    ) -> Result<Self, VerifyError> {
        let mut colors = vec![0u8; n * n];
        for x in 0..n {
            for y in x + 1..n {
                let c = color(x, y).0;
                colors[x * n + y] = c;
                colors[y * n + x] = c;
            }
        }
        Self::new(n, colors)
    }

    pub fn points(&self) -> usize {
        self.n
    }

    pub fn color(&self, x: usize, y: usize) -> AtomId {
        AtomId(self.colors[x * self.n + y])
    }

    fn row(&self, x: usize) -> &[u8] {
        &self.colors[x * self.n..(x + 1) * self.n]
    }
}

/// Edge `(x, y)` gets the atom whose set contains `y - x`.
pub fn cayley_coloring(part: &ColoredPartition) -> EdgeColoring {
    let g = part.group();
    let table = part.atom_table();
    let n = g.order();
    let neg: Vec<Element> = (0..n).map(|x| g.neg_unchecked(Element(x))).collect();
    let mut colors = vec![0u8; n * n];
    for x in 0..n {
        for y in 0..n {
            colors[x * n + y] = table[g.add_unchecked(Element(y), neg[x]).0];
        }
    }
    EdgeColoring { n, colors }
}

/// Result of [`equivalence_classes`] when `atom ∪ 1'` is not transitive:
/// `(x, y)` and `(y, z)` are related but `(x, z)` is not.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TransitivityFailure {
    pub x: usize,
    pub y: usize,
    pub z: usize,
}

/// Classes of `atom ∪ 1'` sorted by least point, or a witness that the
/// relation is not an equivalence.
pub fn equivalence_classes(
    col: &EdgeColoring,
    atom: AtomId,
) -> Result<Vec<Vec<usize>>, TransitivityFailure> {
    let n = col.n;
    let nw = n.div_ceil(64);
    let rows: Vec<Vec<u64>> = (0..n)
        .map(|x| {
            let mut r = vec![0u64; nw];
            for (y, &c) in col.row(x).iter().enumerate() {
                if c == atom.0 || y == x {
                    r[y / 64] |= 1 << (y % 64);
                }
            }
            r
        })
        .collect();
    let members =
        |r: &[u64]| -> Vec<usize> { (0..n).filter(|&y| r[y / 64] >> (y % 64) & 1 == 1).collect() };
    let mut assigned = vec![false; n];
    let mut classes = Vec::new();
    for x in 0..n {
        if assigned[x] {
            continue;
        }
        let class = members(&rows[x]);
        for &y in &class {
            if rows[y] != rows[x] {
                let diff = |a: &[u64], b: &[u64]| {
                    members(&a.iter().zip(b).map(|(p, q)| p & !q).collect::<Vec<_>>())
                };
                if let Some(&z) = diff(&rows[y], &rows[x]).first() {
                    return Err(TransitivityFailure { x, y, z });
                }
                let z = diff(&rows[x], &rows[y])[0];
                return Err(TransitivityFailure { x: y, y: x, z });
            }
            assigned[y] = true;
        }
        classes.push(class);
    }
    Ok(classes)
}

#[derive(Clone, Copy, Debug, Default)]
pub struct VerifyOptions {
    /// Stop at the first violation.
    pub early_exit: bool,
    /// Maximum number of violations stored in the report (all are counted).
    pub max_violations: usize,
}

impl VerifyOptions {
    pub fn exhaustive() -> Self {
        VerifyOptions {
            early_exit: false,
            max_violations: 100,
        }
    }

    pub fn early_exit() -> Self {
        VerifyOptions {
            early_exit: true,
            max_violations: 100,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Accept,
    Reject,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Sumset,
    Bruteforce,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    /// An `i`-edge (or element of `S_i`) lacks a `(j, k)` witness.
    MissingWitness,
    /// A forbidden cycle `ijk` occurs.
    ForbiddenRealized,
    /// A diversity atom is used by no edge.
    Unfaithful,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Location {
    Element {
        element: String,
    },
    Edge {
        x: usize,
        y: usize,
        z: Option<usize>,
    },
    Atom,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub i: String,
    pub j: String,
    pub k: String,
    pub at: Location,
}

/// Expected against observed composition for one unordered pair `(j, k)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairRecord {
    pub j: String,
    pub k: String,
    pub expected: Vec<String>,
    pub include_zero: bool,
    /// Atoms `i` with at least one element (edge) witnessed by `(j, k)`.
    pub realized: Vec<String>,
    pub contains_zero: bool,
    /// `|S_j + S_k|`, sumset route only.
    pub sumset_size: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub algebra: String,
    pub method: Method,
    pub verdict: Verdict,
    pub points: usize,
    pub pairs: Vec<PairRecord>,
    pub violations: Vec<Violation>,
    pub violation_count: usize,
    /// Counts keyed by `kind:cycle`, e.g. `missing_witness:acc`.
    pub violations_by_cycle: BTreeMap<String, usize>,
    /// True when the scan stopped early.
    pub truncated: bool,
}

impl VerificationReport {
    pub fn accepted(&self) -> bool {
        self.verdict == Verdict::Accept
    }

    pub fn count(&self, kind: ViolationKind) -> usize {
        let prefix = kind_key(kind);
        self.violations_by_cycle
            .iter()
            .filter(|(k, _)| k.split(':').next() == Some(prefix))
            .map(|(_, v)| v)
            .sum()
    }
}

fn kind_key(kind: ViolationKind) -> &'static str {
    match kind {
        ViolationKind::MissingWitness => "missing_witness",
        ViolationKind::ForbiddenRealized => "forbidden_realized",
        ViolationKind::Unfaithful => "unfaithful",
    }
}

struct Collector<'a> {
    spec: &'a RaSpec,
    max: usize,
    stored: Vec<Violation>,
    count: usize,
    by_cycle: BTreeMap<String, usize>,
}

impl<'a> Collector<'a> {
    fn new(spec: &'a RaSpec, max: usize) -> Self {
        Collector {
            spec,
            max,
            stored: Vec::new(),
            count: 0,
            by_cycle: BTreeMap::new(),
        }
    }

    fn key(&self, kind: ViolationKind, i: AtomId, j: AtomId, k: AtomId) -> String {
        let label = if kind == ViolationKind::Unfaithful {
            self.spec.atom_name(i).to_string()
        } else {
            let mut t = [i, j, k];
            t.sort_unstable();
            t.iter()
                .map(|&a| self.spec.atom_name(a))
                .collect::<Vec<_>>()
                .join("")
        };
        format!("{}:{label}", kind_key(kind))
    }

    fn push(&mut self, kind: ViolationKind, i: AtomId, j: AtomId, k: AtomId, at: Location) {
        self.count += 1;
        *self.by_cycle.entry(self.key(kind, i, j, k)).or_default() += 1;
        if self.stored.len() < self.max {
            let name = |a: AtomId| self.spec.atom_name(a).to_string();
            self.stored.push(Violation {
                kind,
                i: name(i),
                j: name(j),
                k: name(k),
                at,
            });
        }
    }

    fn merge(&mut self, other: Collector<'_>) {
        self.count += other.count;
        for (k, v) in other.by_cycle {
            *self.by_cycle.entry(k).or_default() += v;
        }
        for v in other.stored {
            if self.stored.len() < self.max {
                self.stored.push(v);
            }
        }
    }

    fn finish(
        self,
        method: Method,
        points: usize,
        pairs: Vec<PairRecord>,
        truncated: bool,
    ) -> VerificationReport {
        VerificationReport {
            algebra: self.spec.name().to_string(),
            method,
            verdict: if self.count == 0 {
                Verdict::Accept
            } else {
                Verdict::Reject
            },
            points,
            pairs,
            violations: self.stored,
            violation_count: self.count,
            violations_by_cycle: self.by_cycle,
            truncated,
        }
    }
}

/// Decides a Cayley candidate by comparing every `S_j + S_k` with the
/// union of the `S_i` for which `ijk` is a cycle (plus `{0}` iff `j = k`).
pub fn verify_sumsets(
    spec: &RaSpec,
    part: &ColoredPartition,
    opts: VerifyOptions,
) -> Result<VerificationReport, VerifyError> {
    let d = spec.atom_count() - 1;
    if part.atom_count() != d {
        return Err(VerifyError::AtomCount {
            expected: d,
            got: part.atom_count(),
        });
    }
    let g = part.group();
    let zero = g.zero();
    let mut out = Collector::new(spec, opts.max_violations);
    let mut pairs = Vec::new();
    let mut truncated = false;

    for a in spec.diversity_atoms() {
        if part.set(a).is_empty() {
            out.push(ViolationKind::Unfaithful, a, a, a, Location::Atom);
        }
    }

    'pairs: for j in spec.diversity_atoms() {
        for k in spec.diversity_atoms().filter(|&k| k >= j) {
            if opts.early_exit && out.count > 0 {
                truncated = true;
                break 'pairs;
            }
            let sum = sumset(part.set(j), part.set(k))?;
            let profile = spec.required_sumset_profile(j, k)?;
            let mut realized = Vec::new();
            for i in spec.diversity_atoms() {
                let si = part.set(i);
                if si.intersection_len(&sum) > 0 {
                    realized.push(spec.atom_name(i).to_string());
                }
                if profile.atoms.contains(&i) {
                    for x in si.difference(&sum).iter() {
                        let at = Location::Element {
                            element: g.format_element(x),
                        };
                        out.push(ViolationKind::MissingWitness, i, j, k, at);
                    }
                } else {
                    for x in si.intersection(&sum).iter() {
                        let at = Location::Element {
                            element: g.format_element(x),
                        };
                        out.push(ViolationKind::ForbiddenRealized, i, j, k, at);
                    }
                }
            }
            let contains_zero = sum.contains(zero);
            // -S = S and disjointness make these automatic for nonempty sets
            if profile.include_zero && !contains_zero {
                let at = Location::Element {
                    element: g.format_element(zero),
                };
                out.push(ViolationKind::MissingWitness, AtomId::IDENTITY, j, k, at);
            }
            if !profile.include_zero && contains_zero {
                let at = Location::Element {
                    element: g.format_element(zero),
                };
                out.push(ViolationKind::ForbiddenRealized, AtomId::IDENTITY, j, k, at);
            }
            pairs.push(PairRecord {
                j: spec.atom_name(j).to_string(),
                k: spec.atom_name(k).to_string(),
                expected: profile
                    .atoms
                    .iter()
                    .map(|&i| spec.atom_name(i).to_string())
                    .collect(),
                include_zero: profile.include_zero,
                realized,
                contains_zero,
                sumset_size: Some(sum.len()),
            });
        }
    }
    Ok(out.finish(Method::Sumset, g.order(), pairs, truncated))
}

/// Ordered diversity pairs `(j, k)` needed (allowed) and forbidden for each
/// edge color `i`, as bit positions `j * atoms + k`.
struct CycleTables {
    atoms: usize,
    needed: Vec<u64>,
    forbidden: Vec<u64>,
}

impl CycleTables {
    fn new(spec: &RaSpec) -> Self {
        let atoms = spec.atom_count();
        let mut needed = vec![0u64; atoms];
        let mut forbidden = vec![0u64; atoms];
        for i in spec.diversity_atoms() {
            for j in spec.diversity_atoms() {
                for k in spec.diversity_atoms() {
                    let bit = 1u64 << (j.index() * atoms + k.index());
                    if spec.is_cycle_unchecked(i, j, k) {
                        needed[i.index()] |= bit;
                    } else {
                        forbidden[i.index()] |= bit;
                    }
                }
            }
        }
        CycleTables {
            atoms,
            needed,
            forbidden,
        }
    }

    fn split(&self, bit: usize) -> (AtomId, AtomId) {
        (
            AtomId((bit / self.atoms) as u8),
            AtomId((bit % self.atoms) as u8),
        )
    }
}

/// Scans the edges `(x, y)`, `x < y`, of one row. Returns the per-color union
/// of observed `(j, k)` patterns.
fn scan_row(
    col: &EdgeColoring,
    tables: &CycleTables,
    x: usize,
    out: &mut Collector<'_>,
    early_exit: bool,
) -> Vec<u64> {
    let n = col.n;
    let mut seen = vec![0u64; tables.atoms];
    let rx = col.row(x);
    let a = tables.atoms;
    for y in x + 1..n {
        let i = rx[y] as usize;
        let ry = col.row(y);
        let mut obs = 0u64;
        for z in 0..n {
            obs |= 1u64 << (rx[z] as usize * a + ry[z] as usize);
        }
        seen[i] |= obs;
        let missing = tables.needed[i] & !obs;
        let bad = tables.forbidden[i] & obs;
        if missing == 0 && bad == 0 {
            continue;
        }
        let ia = AtomId(i as u8);
        for bit in bits(missing) {
            let (j, k) = tables.split(bit);
            out.push(
                ViolationKind::MissingWitness,
                ia,
                j,
                k,
                Location::Edge { x, y, z: None },
            );
        }
        for bit in bits(bad) {
            let (j, k) = tables.split(bit);
            let z = (0..n).find(|&z| rx[z] == j.0 && ry[z] == k.0);
            out.push(
                ViolationKind::ForbiddenRealized,
                ia,
                j,
                k,
                Location::Edge { x, y, z },
            );
        }
        if early_exit {
            break;
        }
    }
    seen
}

fn bits(mut w: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if w == 0 {
            None
        } else {
            let b = w.trailing_zeros() as usize;
            w &= w - 1;
            Some(b)
        }
    })
}

/// Decides an arbitrary symmetric coloring directly: every needed cycle on
/// every edge has a witness, no triangle carries a forbidden cycle, and every
/// diversity atom colors some edge. Violations are counted per
/// `(edge, cycle)` pair, so a forbidden triangle is counted once per edge.
pub fn verify_bruteforce(
    spec: &RaSpec,
    col: &EdgeColoring,
    opts: VerifyOptions,
) -> Result<VerificationReport, VerifyError> {
    let atoms = spec.atom_count();
    if atoms > 8 {
        return Err(VerifyError::TooManyAtoms(atoms));
    }
    let n = col.n;
    for x in 0..n {
        for (y, &c) in col.row(x).iter().enumerate() {
            if c as usize >= atoms {
                return Err(VerifyError::ColorOutOfRange { x, y, color: c });
            }
        }
    }
    let tables = CycleTables::new(spec);
    let mut out = Collector::new(spec, opts.max_violations);

    let mut used = vec![false; atoms];
    for &c in &col.colors {
        used[c as usize] = true;
    }
    for a in spec.diversity_atoms() {
        if !used[a.index()] {
            out.push(ViolationKind::Unfaithful, a, a, a, Location::Atom);
        }
    }

    let mut seen = vec![0u64; atoms];
    let mut truncated = false;
    if opts.early_exit {
        for x in 0..n {
            if out.count > 0 {
                truncated = true;
                break;
            }
            let row = scan_row(col, &tables, x, &mut out, true);
            seen.iter_mut().zip(row).for_each(|(s, r)| *s |= r);
        }
    } else {
        let rows: Vec<(Vec<u64>, Collector<'_>)> = (0..n)
            .into_par_iter()
            .map(|x| {
                let mut c = Collector::new(spec, opts.max_violations);
                let row = scan_row(col, &tables, x, &mut c, false);
                (row, c)
            })
            .collect();
        for (row, c) in rows {
            seen.iter_mut().zip(row).for_each(|(s, r)| *s |= r);
            out.merge(c);
        }
    }

    let mut pairs = Vec::new();
    for j in spec.diversity_atoms() {
        for k in spec.diversity_atoms().filter(|&k| k >= j) {
            let profile = spec.required_sumset_profile(j, k)?;
            let jk = 1u64 << (j.index() * atoms + k.index());
            let kj = 1u64 << (k.index() * atoms + j.index());
            let realized = spec
                .diversity_atoms()
                .filter(|i| seen[i.index()] & (jk | kj) != 0)
                .map(|i| spec.atom_name(i).to_string())
                .collect();
            pairs.push(PairRecord {
                j: spec.atom_name(j).to_string(),
                k: spec.atom_name(k).to_string(),
                expected: profile
                    .atoms
                    .iter()
                    .map(|&i| spec.atom_name(i).to_string())
                    .collect(),
                include_zero: profile.include_zero,
                realized,
                contains_zero: j == k && used[j.index()],
                sumset_size: None,
            });
        }
    }
    Ok(out.finish(Method::Bruteforce, n, pairs, truncated))
}

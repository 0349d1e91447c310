//! Subgroup constructions for 52_65 over `(Z/2Z)^k`.
//!
//! With `X` the vectors of weight `1..=t` and `C` those of weight `t+1..=k`,
//! a subgroup `H ⊆ X ∪ {0}` induces the partition `b = H \ {0}`,
//! `a = X \ b`, `c = C`. This module checks the weight-class identities,
//! validates a listed `H` and runs a seeded restart search for large `H`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::group::{sumset, weight_class, Element, ElementSet, GroupError, GroupSpec};
use crate::ra::{builtin_52_65, AtomId};
use crate::verify::{
    cayley_coloring, equivalence_classes, verify_sumsets, ColoredPartition, TransitivityFailure,
    VerificationReport, VerifyError, VerifyOptions,
};

/// Largest supported dimension.
pub const MAX_K: usize = 20;

/// Restarts evaluated together in parallel mode.
const PARALLEL_CHUNK: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Gf2Error {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
    #[error("dimension k = {0} is out of range (need 2 <= k <= {MAX_K})")]
    Dimension(usize),
    #[error("threshold t = {t} is out of range for k = {k} (need 1 <= t < k)")]
    Threshold { k: usize, t: usize },
    #[error("target order {target} is not a power of two at most 2^{k}")]
    TargetOrder { target: u64, k: usize },
    #[error("search budget must be positive")]
    ZeroBudget,
    #[error("weight-class precheck fails for k = {k}, t = {t}")]
    PrecheckFailed { k: usize, t: usize },
    #[error("{0} is not in X (weight outside 1..=t)")]
    NotInX(String),
    #[error("{0} is not a vector of this dimension")]
    WrongGroup(String),
    #[error("initial vector {v} would put {sum} (weight > t) into the span")]
    InitialBasis { v: String, sum: String },
    #[error("line {line}: malformed bitstring {text:?}")]
    Malformed { line: usize, text: String },
    #[error("line {line}: duplicate element {text}")]
    Duplicate { line: usize, text: String },
    #[error("fixture lists no elements")]
    EmptyFixture,
}

/// `floor(2(k-1)/3)`, at least 1.
pub fn default_threshold(k: usize) -> usize {
    (2 * k.saturating_sub(1) / 3).max(1)
}

/// `2^(k-4)`, at least 2.
pub fn default_target_order(k: usize) -> u64 {
    1u64 << k.saturating_sub(4).max(1)
}

fn check_kt(k: usize, t: usize) -> Result<(), Gf2Error> {
    if !(2..=MAX_K).contains(&k) {
        return Err(Gf2Error::Dimension(k));
    }
    if t == 0 || t >= k {
        return Err(Gf2Error::Threshold { k, t });
    }
    Ok(())
}

fn cube(k: usize) -> Result<Arc<GroupSpec>, Gf2Error> {
    if !(2..=MAX_K).contains(&k) {
        return Err(Gf2Error::Dimension(k));
    }
    Ok(Arc::new(GroupSpec::elementary_abelian(k)?))
}

fn weight(x: Element) -> usize {
    x.0.count_ones() as usize
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrecheckReport {
    pub k: usize,
    pub t: usize,
    pub x_size: usize,
    pub c_size: usize,
    /// `X + X = G`
    pub x_plus_x: bool,
    /// `X + C = G \ {0}`
    pub x_plus_c: bool,
    /// `C + C = G \ C`
    pub c_plus_c: bool,
    pub pass: bool,
}

/// Evaluates the three weight-class sumset identities exactly.
pub fn precheck(k: usize, t: usize) -> Result<PrecheckReport, Gf2Error> {
    check_kt(k, t)?;
    let g = cube(k)?;
    let x = weight_class(&g, 1, t)?;
    let c = weight_class(&g, t + 1, k)?;
    let full = ElementSet::full(&g);
    let mut nonzero = full.clone();
    nonzero.remove(g.zero());
    let x_plus_x = sumset(&x, &x)? == full;
    let x_plus_c = sumset(&x, &c)? == nonzero;
    let c_plus_c = sumset(&c, &c)? == c.complement();
    Ok(PrecheckReport {
        k,
        t,
        x_size: x.len(),
        c_size: c.len(),
        x_plus_x,
        x_plus_c,
        c_plus_c,
        pass: x_plus_x && x_plus_c && c_plus_c,
    })
}

/// Independent vectors whose span lies in `X ∪ {0}`.
#[derive(Clone, Debug)]
pub struct BasisState {
    k: usize,
    t: usize,
    x: ElementSet,
    basis: Vec<Element>,
    span: ElementSet,
}

#[derive(Clone, Debug)]
pub enum ExtendOutcome {
    Accepted(BasisState),
    /// `v` already lies in the span.
    Dependent,
    /// `h` is in the span and `h + v` has weight above `t`.
    WouldLeaveX {
        h: Element,
        sum: Element,
    },
}

impl BasisState {
    pub fn new(k: usize, t: usize) -> Result<Self, Gf2Error> {
        check_kt(k, t)?;
        let g = cube(k)?;
        let x = weight_class(&g, 1, t)?;
        let span = ElementSet::singleton(&g, g.zero())?;
        Ok(BasisState {
            k,
            t,
            x,
            basis: Vec::new(),
            span,
        })
    }

    /// Extends by each generator in turn; dependent ones are skipped.
    pub fn from_generators(k: usize, t: usize, gens: &[Element]) -> Result<Self, Gf2Error> {
        let mut st = BasisState::new(k, t)?;
        for &v in gens {
            match st.extend_basis(v)? {
                ExtendOutcome::Accepted(next) => st = next,
                ExtendOutcome::Dependent => {}
                ExtendOutcome::WouldLeaveX { sum, .. } => {
                    let g = st.group();
                    return Err(Gf2Error::InitialBasis {
                        v: g.format_element(v),
                        sum: g.format_element(sum),
                    });
                }
            }
        }
        Ok(st)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn group(&self) -> &Arc<GroupSpec> {
        self.span.group()
    }

    pub fn basis(&self) -> &[Element] {
        &self.basis
    }

    /// The subgroup spanned, including 0.
    pub fn span(&self) -> &ElementSet {
        &self.span
    }

    pub fn order(&self) -> usize {
        self.span.len()
    }

    pub fn x(&self) -> &ElementSet {
        &self.x
    }

    pub fn extend_basis(&self, v: Element) -> Result<ExtendOutcome, Gf2Error> {
        if v.0 >= self.group().order() {
            return Err(Gf2Error::WrongGroup(v.0.to_string()));
        }
        if !self.x.contains(v) {
            return Err(Gf2Error::NotInX(self.group().format_element(v)));
        }
        if self.span.contains(v) {
            return Ok(ExtendOutcome::Dependent);
        }
        let shifted = self.span.translate(v);
        if let Some(sum) = shifted.difference(&self.x).first() {
            let h = Element(sum.0 ^ v.0);
            return Ok(ExtendOutcome::WouldLeaveX { h, sum });
        }
        Ok(ExtendOutcome::Accepted(self.grown(v, shifted)))
    }

    fn try_extend(&self, v: Element) -> Option<BasisState> {
        if self.span.contains(v) {
            return None;
        }
        let shifted = self.span.translate(v);
        shifted.is_subset(&self.x).then(|| self.grown(v, shifted))
    }

    fn grown(&self, v: Element, shifted: ElementSet) -> BasisState {
        let mut basis = self.basis.clone();
        basis.push(v);
        let span = self.span.union(&shifted);
        debug_assert_eq!(span.len(), 2 * self.span.len());
        debug_assert!(span
            .iter()
            .all(|h| h.0 == 0 || (1..=self.t).contains(&weight(h))));
        BasisState {
            k: self.k,
            t: self.t,
            x: self.x.clone(),
            basis,
            span,
        }
    }

    /// Reduced echelon basis of the span, ascending. Equal spans give equal
    /// canonical bases.
    pub fn canonical_basis(&self) -> Vec<Element> {
        reduced_basis(&self.basis)
    }
}

fn reduced_basis(gens: &[Element]) -> Vec<Element> {
    let mut rows: Vec<usize> = Vec::new();
    for &v in gens {
        let mut x = v.0;
        for &r in &rows {
            x = x.min(x ^ r);
        }
        if x != 0 {
            rows.push(x);
            rows.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    // clear each pivot (top bit) from every other row
    for i in 0..rows.len() {
        let top = 1usize << (usize::BITS - 1 - rows[i].leading_zeros());
        for j in 0..rows.len() {
            if j != i && rows[j] & top != 0 {
                rows[j] ^= rows[i];
            }
        }
    }
    let mut out: Vec<Element> = rows.into_iter().map(Element).collect();
    out.sort_unstable();
    out
}

/// `b = H \ {0}`, `a = X \ b`, `c` = weights `t+1..=k`.
pub fn induced_partition(state: &BasisState) -> Result<ColoredPartition, Gf2Error> {
    let g = state.group();
    let mut b = state.span.clone();
    b.remove(g.zero());
    let a = state.x.difference(&b);
    let c = weight_class(g, state.t + 1, state.k)?;
    Ok(ColoredPartition::new(g, vec![a, b, c])?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassCheck {
    pub count: usize,
    pub sizes: Vec<usize>,
    pub failure: Option<TransitivityFailure>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixtureReport {
    pub k: usize,
    pub t: usize,
    pub listed: usize,
    pub weights_ok: bool,
    /// Listed elements with weight outside `1..=t`.
    pub bad_weights: Vec<String>,
    pub closure_ok: bool,
    /// Order of the subgroup generated by the list.
    pub span_order: usize,
    pub sumsets_ok: bool,
    pub report: Option<VerificationReport>,
    pub classes_ok: bool,
    pub classes: Option<ClassCheck>,
    pub pass: bool,
}

/// Parses one bitstring per line (`#` comments, blank lines ignored). All
/// lines must have the length of the first.
pub fn parse_bitstrings(text: &str) -> Result<(Arc<GroupSpec>, Vec<Element>), Gf2Error> {
    let mut group: Option<Arc<GroupSpec>> = None;
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let malformed = || Gf2Error::Malformed {
            line: n + 1,
            text: line.to_string(),
        };
        if !line.chars().all(|c| c == '0' || c == '1') {
            return Err(malformed());
        }
        let g = match &group {
            Some(g) => Arc::clone(g),
            None => {
                let g = cube(line.len()).map_err(|_| malformed())?;
                group = Some(Arc::clone(&g));
                g
            }
        };
        let x = g.parse_element(line).map_err(|_| malformed())?;
        if !seen.insert(x) {
            return Err(Gf2Error::Duplicate {
                line: n + 1,
                text: line.to_string(),
            });
        }
        out.push(x);
    }
    match group {
        Some(g) => Ok((g, out)),
        None => Err(Gf2Error::EmptyFixture),
    }
}

/// Runs the four fixture checks: weights, closure, sumsets and the classes
/// of `b ∪ 1'`. `t` defaults to [`default_threshold`].
pub fn validate_fixture(text: &str, t: Option<usize>) -> Result<FixtureReport, Gf2Error> {
    let (g, elems) = parse_bitstrings(text)?;
    let k = g.dimension().expect("elementary abelian");
    let t = t.unwrap_or_else(|| default_threshold(k));
    check_kt(k, t)?;
    validate_elements(&g, t, &elems)
}

pub fn validate_elements(
    g: &Arc<GroupSpec>,
    t: usize,
    elems: &[Element],
) -> Result<FixtureReport, Gf2Error> {
    let k = g
        .dimension()
        .ok_or_else(|| GroupError::NotElementary(g.to_string()))?;
    check_kt(k, t)?;
    let listed = ElementSet::from_elements(g, elems.iter().copied())?;
    let bad_weights: Vec<String> = elems
        .iter()
        .filter(|&&x| !(1..=t).contains(&weight(x)))
        .map(|&x| g.format_element(x))
        .collect();
    let weights_ok = bad_weights.is_empty();
    let span_order = crate::group::span(g, elems)?.order();
    let closure_ok = !listed.contains(g.zero()) && span_order == listed.len() + 1;

    let mut report = None;
    let mut classes = None;
    if weights_ok {
        let x = weight_class(g, 1, t)?;
        let part = ColoredPartition::new(
            g,
            vec![
                x.difference(&listed),
                listed.clone(),
                weight_class(g, t + 1, k)?,
            ],
        )?;
        report = Some(verify_sumsets(
            &builtin_52_65(),
            &part,
            VerifyOptions::exhaustive(),
        )?);
        let col = cayley_coloring(&part);
        classes = Some(match equivalence_classes(&col, AtomId(2)) {
            Ok(cl) => ClassCheck {
                count: cl.len(),
                sizes: cl.iter().map(Vec::len).collect(),
                failure: None,
            },
            Err(f) => ClassCheck {
                count: 0,
                sizes: Vec::new(),
                failure: Some(f),
            },
        });
    }
    let sumsets_ok = report.as_ref().is_some_and(VerificationReport::accepted);
    let h = listed.len() + 1;
    let classes_ok = classes.as_ref().is_some_and(|c| {
        c.failure.is_none() && c.count * h == g.order() && c.sizes.iter().all(|&s| s == h)
    });
    Ok(FixtureReport {
        k,
        t,
        listed: elems.len(),
        weights_ok,
        bad_weights,
        closure_ok,
        span_order,
        sumsets_ok,
        report,
        classes_ok,
        classes,
        pass: weights_ok && closure_ok && sumsets_ok && classes_ok,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub k: usize,
    pub t: usize,
    pub target_order: u64,
    pub seed: u64,
    pub restart_budget: u64,
    /// Checked between restarts (between chunks in parallel mode).
    pub time_budget: Option<Duration>,
    /// Feasible candidates that may be skipped per restart.
    pub backtrack_depth: usize,
    pub initial_basis: Vec<Element>,
    pub parallel: bool,
    /// Only a span that also verifies counts as reaching the target.
    pub require_accept: bool,
    pub order: CandidateOrder,
}

/// Order in which a restart offers candidate vectors.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CandidateOrder {
    /// Lighter vectors first, ties in seeded random order.
    #[default]
    WeightAscending,
    /// Seeded uniform shuffle.
    Random,
}

impl SearchConfig {
    pub fn new(k: usize, seed: u64) -> Self {
        SearchConfig {
            k,
            t: default_threshold(k),
            target_order: default_target_order(k),
            seed,
            restart_budget: 100,
            time_budget: None,
            backtrack_depth: 0,
            initial_basis: Vec::new(),
            parallel: false,
            require_accept: false,
            order: CandidateOrder::WeightAscending,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    Target,
    RestartBudget,
    TimeBudget,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RestartRecord {
    pub index: u64,
    pub order: usize,
    pub accepted: bool,
    /// Greedy completions explored.
    pub paths: u64,
    pub basis: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RestartStats {
    pub restarts_run: u64,
    /// `|H|` reached -> number of restarts.
    pub order_histogram: BTreeMap<usize, u64>,
    pub accepted_restarts: u64,
    pub paths: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchOutcome {
    pub k: usize,
    pub t: usize,
    pub target_order: u64,
    pub seed: u64,
    pub backtrack_depth: usize,
    pub precheck: PrecheckReport,
    /// Reduced echelon basis of `H` as bitstrings.
    pub basis: Vec<String>,
    #[serde(skip)]
    pub basis_elements: Vec<Element>,
    pub order: usize,
    pub reached_target: bool,
    pub best_restart: u64,
    pub stop: StopReason,
    pub report: VerificationReport,
    pub stats: RestartStats,
}

impl SearchOutcome {
    /// Rebuilds `H` from the reported basis.
    pub fn subgroup(&self) -> Result<ElementSet, Gf2Error> {
        let g = cube(self.k)?;
        Ok(crate::group::span(&g, &self.basis_elements)?.elements)
    }
}

struct RestartResult {
    record: RestartRecord,
    state: BasisState,
}

fn run_restart(
    cfg: &SearchConfig,
    init: &BasisState,
    candidates: &[Element],
    index: u64,
) -> Result<RestartResult, Gf2Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(index);
    let mut cands = candidates.to_vec();
    cands.shuffle(&mut rng);
    if cfg.order == CandidateOrder::WeightAscending {
        // stable: keeps the shuffled order among equal weights
        cands.sort_by_key(|&x| weight(x));
    }

    let mut walk = Walk {
        cands: &cands,
        target: cfg.target_order as usize,
        require_accept: cfg.require_accept,
        best: None,
        paths: 0,
    };
    walk.dfs(init, 0, cfg.backtrack_depth)?;
    let best = walk.best.expect("at least one path");
    let g = best.state.group();
    Ok(RestartResult {
        record: RestartRecord {
            index,
            order: best.state.order(),
            accepted: best.accepted,
            paths: walk.paths,
            basis: best.canon.iter().map(|&x| g.format_element(x)).collect(),
        },
        state: best.state,
    })
}

struct Terminal {
    state: BasisState,
    canon: Vec<Element>,
    accepted: bool,
}

struct Walk<'a> {
    cands: &'a [Element],
    target: usize,
    require_accept: bool,
    best: Option<Terminal>,
    paths: u64,
}

impl Walk<'_> {
    /// Greedy completion from `start`, spending up to `d` skips of feasible
    /// candidates. Returns true once a successful span is found.
    fn dfs(&mut self, st: &BasisState, start: usize, mut d: usize) -> Result<bool, Gf2Error> {
        let mut i = start;
        while i < self.cands.len() && st.order() < self.target {
            if let Some(next) = st.try_extend(self.cands[i]) {
                if self.dfs(&next, i + 1, d)? {
                    return Ok(true);
                }
                if d == 0 {
                    return Ok(false);
                }
                d -= 1;
            }
            i += 1;
        }
        self.paths += 1;
        if self
            .best
            .as_ref()
            .is_some_and(|b| st.order() < b.state.order())
        {
            return Ok(false);
        }
        let part = induced_partition(st)?;
        let accepted =
            verify_sumsets(&builtin_52_65(), &part, VerifyOptions::early_exit())?.accepted();
        let canon = st.canonical_basis();
        let better = match &self.best {
            None => true,
            Some(b) => st
                .order()
                .cmp(&b.state.order())
                .then(accepted.cmp(&b.accepted))
                .then_with(|| b.canon.cmp(&canon))
                .is_gt(),
        };
        if better {
            self.best = Some(Terminal {
                state: st.clone(),
                canon,
                accepted,
            });
        }
        Ok(st.order() >= self.target && (accepted || !self.require_accept))
    }
}

/// Larger `|H|`, then accepted, then lexicographically least basis.
fn better_record(a: &RestartRecord, b: &RestartRecord, ca: &[Element], cb: &[Element]) -> bool {
    a.order
        .cmp(&b.order)
        .then(a.accepted.cmp(&b.accepted))
        .then_with(|| cb.cmp(ca))
        == Ordering::Greater
}

/// Seeded restart search for a large `H ⊆ X ∪ {0}`. Restart `i` draws its
/// candidate order from ChaCha8 with stream `i`, so the outcome does not
/// depend on scheduling.
pub fn search(cfg: &SearchConfig) -> Result<SearchOutcome, Gf2Error> {
    check_kt(cfg.k, cfg.t)?;
    if cfg.restart_budget == 0 || cfg.time_budget == Some(Duration::ZERO) {
        return Err(Gf2Error::ZeroBudget);
    }
    let max = 1u64 << cfg.k;
    if !cfg.target_order.is_power_of_two() || cfg.target_order > max {
        return Err(Gf2Error::TargetOrder {
            target: cfg.target_order,
            k: cfg.k,
        });
    }
    let pre = precheck(cfg.k, cfg.t)?;
    if !pre.pass {
        return Err(Gf2Error::PrecheckFailed { k: cfg.k, t: cfg.t });
    }
    let init = BasisState::from_generators(cfg.k, cfg.t, &cfg.initial_basis)?;
    let candidates: Vec<Element> = init.x.iter().collect();

    let started = Instant::now();
    let chunk = if cfg.parallel {
        PARALLEL_CHUNK as u64
    } else {
        1
    };
    let mut stats = RestartStats {
        restarts_run: 0,
        order_histogram: BTreeMap::new(),
        accepted_restarts: 0,
        paths: 0,
    };
    let mut best: Option<(RestartResult, Vec<Element>)> = None;
    let mut stop = StopReason::RestartBudget;
    let mut next = 0u64;
    'outer: while next < cfg.restart_budget {
        if let Some(limit) = cfg.time_budget {
            if next > 0 && started.elapsed() >= limit {
                stop = StopReason::TimeBudget;
                break;
            }
        }
        let end = (next + chunk).min(cfg.restart_budget);
        let results: Vec<Result<RestartResult, Gf2Error>> = if cfg.parallel {
            (next..end)
                .into_par_iter()
                .map(|i| run_restart(cfg, &init, &candidates, i))
                .collect()
        } else {
            (next..end)
                .map(|i| run_restart(cfg, &init, &candidates, i))
                .collect()
        };
        next = end;
        for r in results {
            let r = r?;
            stats.restarts_run += 1;
            *stats.order_histogram.entry(r.record.order).or_default() += 1;
            stats.accepted_restarts += r.record.accepted as u64;
            stats.paths += r.record.paths;
            let canon = r.state.canonical_basis();
            let reached = r.record.order as u64 >= cfg.target_order
                && (r.record.accepted || !cfg.require_accept);
            let replace = match &best {
                None => true,
                Some((b, bc)) => better_record(&r.record, &b.record, &canon, bc),
            };
            if replace {
                best = Some((r, canon));
            }
            if reached {
                stop = StopReason::Target;
                break 'outer;
            }
        }
    }

    let (best, canon) = best.expect("budget is positive");
    let part = induced_partition(&best.state)?;
    let report = verify_sumsets(&builtin_52_65(), &part, VerifyOptions::exhaustive())?;
    Ok(SearchOutcome {
        k: cfg.k,
        t: cfg.t,
        target_order: cfg.target_order,
        seed: cfg.seed,
        backtrack_depth: cfg.backtrack_depth,
        precheck: pre,
        basis: best.record.basis.clone(),
        basis_elements: canon,
        order: best.state.order(),
        reached_target: best.state.order() as u64 >= cfg.target_order,
        best_restart: best.record.index,
        stop,
        report,
        stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::ViolationKind;

    const FIXTURE: &str = include_str!("../../../fixtures/h52_k10.txt");

    fn bits(g: &GroupSpec, s: &str) -> Element {
        g.parse_element(s).unwrap()
    }

    #[test]
    fn default_rules() {
        assert_eq!(default_threshold(10), 6);
        assert_eq!(default_threshold(7), 4);
        assert_eq!(default_threshold(13), 8);
        assert_eq!(default_threshold(2), 1);
        assert_eq!(default_target_order(10), 64);
    }

    #[test]
    fn precheck_k10() {
        let r = precheck(10, 6).unwrap();
        assert!(r.pass);
        assert_eq!((r.x_size, r.c_size), (847, 176));
        assert_eq!(r.x_size + r.c_size + 1, 1024);
    }

    #[test]
    fn precheck_all_ones() {
        let r = precheck(10, 9).unwrap();
        assert_eq!(r.c_size, 1);
        assert!(!r.c_plus_c);
        assert!(!r.pass);
        assert!(matches!(precheck(10, 10), Err(Gf2Error::Threshold { .. })));
        assert!(matches!(precheck(10, 0), Err(Gf2Error::Threshold { .. })));
        assert!(matches!(
            precheck(1, 1),
            Err(Gf2Error::Threshold { .. }) | Err(Gf2Error::Dimension(1))
        ));
    }

    #[test]
    fn precheck_k7_recorded() {
        // recorded by running the three sumset checks: all hold
        let r = precheck(7, 4).unwrap();
        assert_eq!((r.x_size, r.c_size), (98, 29));
        assert_eq!((r.x_plus_x, r.x_plus_c, r.c_plus_c), PRECHECK_7_4);
        assert_eq!(r.pass, PRECHECK_7_4 == (true, true, true));
    }

    const PRECHECK_7_4: (bool, bool, bool) = (true, true, true);

    #[test]
    fn extend_cases() {
        let st = BasisState::new(10, 6).unwrap();
        let g = Arc::clone(st.group());
        let v = bits(&g, "1100000000");
        let ExtendOutcome::Accepted(s1) = st.extend_basis(v).unwrap() else {
            panic!("expected accept");
        };
        assert_eq!(s1.span().iter().collect::<Vec<_>>(), vec![g.zero(), v]);
        assert!(matches!(
            s1.extend_basis(v).unwrap(),
            ExtendOutcome::Dependent
        ));

        let h = bits(&g, "1110000000");
        let w = bits(&g, "0001111000");
        let s2 = BasisState::from_generators(10, 6, &[h]).unwrap();
        match s2.extend_basis(w).unwrap() {
            ExtendOutcome::WouldLeaveX { h: hh, sum } => {
                assert_eq!(hh, h);
                assert_eq!(weight(sum), 7);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            st.extend_basis(bits(&g, "1111111000")),
            Err(Gf2Error::NotInX(_))
        ));
    }

    #[test]
    fn reduced_basis_is_canonical() {
        let a = reduced_basis(&[Element(0b1011), Element(0b0110)]);
        let b = reduced_basis(&[Element(0b1101), Element(0b0110), Element(0b1011)]);
        assert_eq!(a, b);
        assert_eq!(a.len(), 2);
    }

    #[test]
    fn listed_fixture_passes() {
        let r = validate_fixture(FIXTURE, None).unwrap();
        assert_eq!((r.k, r.t, r.listed), (10, 6, 63));
        assert!(
            r.weights_ok && r.closure_ok && r.sumsets_ok && r.classes_ok,
            "{r:?}"
        );
        let c = r.classes.unwrap();
        assert_eq!(c.count, 16);
        assert!(c.sizes.iter().all(|&s| s == 64));
        assert!(r.pass);
    }

    fn fixture_lines() -> Vec<String> {
        FIXTURE
            .lines()
            .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
            .map(str::to_string)
            .collect()
    }

    #[test]
    fn fixture_with_removal_fails_closure() {
        let lines = fixture_lines();
        let text = lines[1..].join("\n");
        let r = validate_fixture(&text, None).unwrap();
        assert!(!r.closure_ok);
        assert!(!r.pass);
    }

    #[test]
    fn fixture_with_flipped_bit() {
        let mut lines = fixture_lines();
        let first = lines[0].clone();
        let flipped: String = first
            .chars()
            .enumerate()
            .map(|(i, c)| {
                if i == 0 {
                    if c == '0' {
                        '1'
                    } else {
                        '0'
                    }
                } else {
                    c
                }
            })
            .collect();
        lines[0] = flipped;
        let r = validate_fixture(&lines.join("\n"), None).unwrap();
        assert!(!r.pass);
        assert!(!r.closure_ok);
        assert_eq!(r.span_order, FLIPPED_SPAN_ORDER);
    }

    const FLIPPED_SPAN_ORDER: usize = 128;

    #[test]
    fn fixture_parse_errors() {
        assert!(matches!(
            validate_fixture("0101\n01x1\n", None),
            Err(Gf2Error::Malformed { line: 2, .. })
        ));
        assert!(matches!(
            validate_fixture("0101\n011\n", None),
            Err(Gf2Error::Malformed { line: 2, .. })
        ));
        assert!(matches!(
            validate_fixture("# c\n0101\n0101\n", None),
            Err(Gf2Error::Duplicate { line: 3, .. })
        ));
        assert!(matches!(
            validate_fixture("# nothing\n", None),
            Err(Gf2Error::EmptyFixture)
        ));
    }

    #[test]
    fn seeded_with_fixture_basis() {
        let (_, elems) = parse_bitstrings(FIXTURE).unwrap();
        let mut cfg = SearchConfig::new(10, 7);
        cfg.initial_basis = elems;
        let out = search(&cfg).unwrap();
        assert_eq!(out.order, 64);
        assert!(out.reached_target);
        assert!(out.report.accepted());
        assert_eq!(out.stats.restarts_run, 1);
        assert_eq!(out.basis.len(), 6);
    }

    #[test]
    fn target_two_is_one_step() {
        let mut cfg = SearchConfig::new(10, 3);
        cfg.target_order = 2;
        let out = search(&cfg).unwrap();
        assert_eq!(out.order, 2);
        assert_eq!(out.stats.restarts_run, 1);
        assert_eq!(out.stop, StopReason::Target);
        // one b element cannot realize bbb
        assert!(!out.report.accepted());
        assert!(out.report.count(ViolationKind::MissingWitness) > 0);
    }

    #[test]
    fn search_is_sound_and_deterministic() {
        for (k, backtrack, parallel) in [(7, 0, false), (7, 1, true), (10, 2, false), (13, 0, true)]
        {
            let mut cfg = SearchConfig::new(k, 11);
            cfg.restart_budget = 12;
            cfg.backtrack_depth = backtrack;
            cfg.parallel = parallel;
            let t = cfg.t;
            let a = search(&cfg).unwrap();
            let b = search(&cfg).unwrap();
            assert_eq!(a, b);
            let h = a.subgroup().unwrap();
            assert_eq!(h.len(), a.order);
            assert!(h.iter().all(|x| x.0 == 0 || (1..=t).contains(&weight(x))));
        }
    }

    #[test]
    fn parallel_matches_sequential() {
        let mut cfg = SearchConfig::new(10, 5);
        cfg.restart_budget = 20;
        cfg.target_order = 1024;
        let seq = search(&cfg).unwrap();
        cfg.parallel = true;
        let par = search(&cfg).unwrap();
        assert_eq!(seq, par);
        assert_eq!(seq.stop, StopReason::RestartBudget);
        assert_eq!(seq.stats.restarts_run, 20);
    }

    #[test]
    fn search_errors() {
        let mut cfg = SearchConfig::new(10, 1);
        cfg.restart_budget = 0;
        assert_eq!(search(&cfg), Err(Gf2Error::ZeroBudget));
        let mut cfg = SearchConfig::new(10, 1);
        cfg.target_order = 48;
        assert!(matches!(search(&cfg), Err(Gf2Error::TargetOrder { .. })));
        let mut cfg = SearchConfig::new(10, 1);
        cfg.t = 9;
        assert_eq!(search(&cfg), Err(Gf2Error::PrecheckFailed { k: 10, t: 9 }));
    }
}

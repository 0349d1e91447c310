//! Finite abelian groups `Z/n1 x ... x Z/nr` with dense element sets.
//!
//! Elements are identified by their mixed-radix index (coordinate 0 is the
//! least significant digit). All subsets are bit masks over those indices, and
//! sumsets are evaluated on the masks: XOR-translation for elementary abelian
//! 2-groups, word rotation for cyclic groups, and the definitional double loop
//! otherwise.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Largest group order accepted by default for dense masks.
pub const DEFAULT_MAX_ORDER: usize = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("modulus {0} is invalid (must be >= 2)")]
    InvalidModulus(u64),
    #[error("group has order {0}; order must be at least 2")]
    Trivial(usize),
    #[error("group order {order} exceeds the dense limit {cap}")]
    TooLarge { order: u128, cap: usize },
    #[error("element index {index} out of range for group of order {order}")]
    OutOfRange { index: usize, order: usize },
    #[error("operands belong to different groups ({0} vs {1})")]
    GroupMismatch(String, String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{m} does not divide {p} - 1")]
    NotDivisor { m: u64, p: u64 },
    #[error("{g} is not a primitive root modulo {p}")]
    NotPrimitive { g: u64, p: u64 },
    #[error("group {0} is not an elementary abelian 2-group")]
    NotElementary(String),
    #[error("weight bounds [{lo}, {hi}] invalid for dimension {k}")]
    WeightBounds { k: usize, lo: usize, hi: usize },
    #[error("cannot parse element {text:?} in group {group}: {reason}")]
    ParseElement {
        text: String,
        group: String,
        reason: &'static str,
    },
    #[error("cannot parse group description {0:?}")]
    ParseGroup(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Cyclic,
    Elementary2,
    Mixed,
}

/// `Z/n1 x ... x Z/nr`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupSpec {
    moduli: Vec<u32>,
    order: usize,
    kind: Kind,
}

impl GroupSpec {
    pub fn new(moduli: &[u32]) -> Result<Self, GroupError> {
        Self::with_cap(moduli, DEFAULT_MAX_ORDER)
    }

    pub fn with_cap(moduli: &[u32], cap: usize) -> Result<Self, GroupError> {
        let mut order: u128 = 1;
        for &m in moduli {
            if m < 2 {
                return Err(GroupError::InvalidModulus(m as u64));
            }
            order = order.saturating_mul(m as u128);
        }
        if order > cap as u128 {
            return Err(GroupError::TooLarge { order, cap });
        }
        let order = order as usize;
        if order < 2 {
            return Err(GroupError::Trivial(order));
        }
        let kind = if moduli.iter().all(|&m| m == 2) {
            Kind::Elementary2
        } else if moduli.len() == 1 {
            Kind::Cyclic
        } else {
            Kind::Mixed
        };
        Ok(GroupSpec {
            moduli: moduli.to_vec(),
            order,
            kind,
        })
    }

    pub fn cyclic(n: u32) -> Result<Self, GroupError> {
        Self::new(&[n])
    }

    /// `(Z/2Z)^k`.
    pub fn elementary_abelian(k: usize) -> Result<Self, GroupError> {
        Self::new(&vec![2; k])
    }

    /// Parses `z:N`, `2^K` or `N1xN2x...`.
    pub fn parse(text: &str) -> Result<Self, GroupError> {
        let t = text.trim();
        let bad = || GroupError::ParseGroup(text.to_string());
        if let Some(n) = t.strip_prefix("z:").or_else(|| t.strip_prefix("Z:")) {
            let n: u32 = n.parse().map_err(|_| bad())?;
            return Self::cyclic(n);
        }
        if let Some(k) = t.strip_prefix("2^") {
            let k: usize = k.parse().map_err(|_| bad())?;
            if k > 62 {
                return Err(GroupError::TooLarge {
                    order: 1u128 << k.min(127),
                    cap: DEFAULT_MAX_ORDER,
                });
            }
            return Self::elementary_abelian(k);
        }
        let moduli: Vec<u32> = t
            .split('x')
            .map(|s| s.trim().parse::<u32>())
            .collect::<Result<_, _>>()
            .map_err(|_| bad())?;
        Self::new(&moduli)
    }

    pub fn moduli(&self) -> &[u32] {
        &self.moduli
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_elementary_2(&self) -> bool {
        self.kind == Kind::Elementary2
    }

    /// Dimension `k` if this is `(Z/2Z)^k`.
    pub fn dimension(&self) -> Option<usize> {
        self.is_elementary_2().then_some(self.moduli.len())
    }

    pub fn zero(&self) -> Element {
        Element(0)
    }

    pub fn element(&self, index: usize) -> Result<Element, GroupError> {
        self.check(Element(index))?;
        Ok(Element(index))
    }

    fn check(&self, x: Element) -> Result<(), GroupError> {
        if x.0 < self.order {
            Ok(())
        } else {
            Err(GroupError::OutOfRange {
                index: x.0,
                order: self.order,
            })
        }
    }

    pub fn encode(&self, coords: &[u32]) -> Result<Element, GroupError> {
        if coords.len() != self.moduli.len() {
            return Err(GroupError::OutOfRange {
                index: usize::MAX,
                order: self.order,
            });
        }
        let mut idx = 0usize;
        for (&c, &m) in coords.iter().zip(&self.moduli).rev() {
            if c >= m {
                return Err(GroupError::OutOfRange {
                    index: c as usize,
                    order: m as usize,
                });
            }
            idx = idx * m as usize + c as usize;
        }
        Ok(Element(idx))
    }

    pub fn decode(&self, x: Element) -> Vec<u32> {
        let mut rest = x.0;
        self.moduli
            .iter()
            .map(|&m| {
                let c = rest % m as usize;
                rest /= m as usize;
                c as u32
            })
            .collect()
    }

    pub fn add(&self, x: Element, y: Element) -> Result<Element, GroupError> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.add_unchecked(x, y))
    }

    pub fn neg(&self, x: Element) -> Result<Element, GroupError> {
        self.check(x)?;
        Ok(self.neg_unchecked(x))
    }

    pub(crate) fn add_unchecked(&self, x: Element, y: Element) -> Element {
        match self.kind {
            Kind::Elementary2 => Element(x.0 ^ y.0),
            Kind::Cyclic => {
                let s = x.0 + y.0;
                Element(if s >= self.order { s - self.order } else { s })
            }
            Kind::Mixed => {
                let (mut a, mut b, mut place, mut out) = (x.0, y.0, 1usize, 0usize);
                for &m in &self.moduli {
                    let m = m as usize;
                    out += ((a % m + b % m) % m) * place;
                    a /= m;
                    b /= m;
                    place *= m;
                }
                Element(out)
            }
        }
    }

    pub(crate) fn neg_unchecked(&self, x: Element) -> Element {
        match self.kind {
            Kind::Elementary2 => x,
            Kind::Cyclic => Element(if x.0 == 0 { 0 } else { self.order - x.0 }),
            Kind::Mixed => {
                let (mut a, mut place, mut out) = (x.0, 1usize, 0usize);
                for &m in &self.moduli {
                    let m = m as usize;
                    out += ((m - a % m) % m) * place;
                    a /= m;
                    place *= m;
                }
                Element(out)
            }
        }
    }

    /// Text form of an element: a bitstring (leftmost = coordinate 0) in
    /// `(Z/2Z)^k`, an integer in `Z/n`, comma separated coordinates otherwise.
    pub fn format_element(&self, x: Element) -> String {
        match self.kind {
            Kind::Elementary2 => (0..self.moduli.len())
                .map(|i| if x.0 >> i & 1 == 1 { '1' } else { '0' })
                .collect(),
            Kind::Cyclic => x.0.to_string(),
            Kind::Mixed => self
                .decode(x)
                .iter()
                .map(u32::to_string)
                .collect::<Vec<_>>()
                .join(","),
        }
    }

    pub fn parse_element(&self, text: &str) -> Result<Element, GroupError> {
        let t = text.trim();
        let err = |reason| GroupError::ParseElement {
            text: text.to_string(),
            group: self.to_string(),
            reason,
        };
        if t.contains(',') {
            let coords: Vec<u32> = t
                .split(',')
                .map(|c| c.trim().parse())
                .collect::<Result<_, _>>()
                .map_err(|_| err("bad coordinate"))?;
            return self
                .encode(&coords)
                .map_err(|_| err("coordinates out of range"));
        }
        match self.kind {
            Kind::Elementary2 => {
                let k = self.moduli.len();
                if t.len() != k {
                    return Err(err("wrong bitstring length"));
                }
                let mut idx = 0usize;
                for (i, ch) in t.chars().enumerate() {
                    match ch {
                        '0' => {}
                        '1' => idx |= 1 << i,
                        _ => return Err(err("bitstring must contain only 0 and 1")),
                    }
                }
                Ok(Element(idx))
            }
            Kind::Cyclic => {
                let v: usize = t.parse().map_err(|_| err("not an integer"))?;
                self.element(v).map_err(|_| err("integer out of range"))
            }
            Kind::Mixed => Err(err("expected comma separated coordinates")),
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            Kind::Elementary2 if self.moduli.len() > 1 => write!(f, "2^{}", self.moduli.len()),
            Kind::Cyclic | Kind::Elementary2 => write!(f, "z:{}", self.order),
            Kind::Mixed => {
                let parts: Vec<String> = self.moduli.iter().map(u32::to_string).collect();
                write!(f, "{}", parts.join("x"))
            }
        }
    }
}

/// A group element, by mixed-radix index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Element(pub usize);

/// Subset of a group as a dense bit mask.
#[derive(Clone)]
pub struct ElementSet {
    group: Arc<GroupSpec>,
    words: Vec<u64>,
    len: usize,
}

impl PartialEq for ElementSet {
    fn eq(&self, other: &Self) -> bool {
        same_group(&self.group, &other.group) && self.words == other.words
    }
}

impl Eq for ElementSet {}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.iter().map(|e| self.group.format_element(e)).collect();
        write!(f, "{{{}}}", items.join(", "))
    }
}

fn same_group(a: &Arc<GroupSpec>, b: &Arc<GroupSpec>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

fn word_count(order: usize) -> usize {
    order.div_ceil(64)
}

// Masks of bit positions whose j-th index bit is 0.
const BLOCK_MASKS: [u64; 6] = [
    0x5555_5555_5555_5555,
    0x3333_3333_3333_3333,
    0x0F0F_0F0F_0F0F_0F0F,
    0x00FF_00FF_00FF_00FF,
    0x0000_FFFF_0000_FFFF,
    0x0000_0000_FFFF_FFFF,
];

/// Moves bit `b` of `w` to bit `b ^ lo`.
#[inline]
fn xor_permute_word(mut w: u64, lo: usize) -> u64 {
    for (j, &m) in BLOCK_MASKS.iter().enumerate() {
        if lo >> j & 1 == 1 {
            let s = 1 << j;
            w = ((w & m) << s) | ((w >> s) & m);
        }
    }
    w
}

/// `dst |= {t ^ x : t in src}`.
fn xor_translate_or(src: &[u64], x: usize, dst: &mut [u64]) {
    let (hi, lo) = (x >> 6, x & 63);
    for (w, &word) in src.iter().enumerate() {
        if word != 0 {
            dst[w ^ hi] |= xor_permute_word(word, lo);
        }
    }
}

/// `dst |= {t + x mod n : t in src}` for `0 <= x < n`.
fn rotate_or(src: &[u64], x: usize, n: usize, dst: &mut [u64]) {
    let nw = dst.len();
    // t -> t + x for t + x < n
    let (ws, bs) = (x / 64, x % 64);
    for i in 0..nw {
        let w = src[i];
        if w == 0 {
            continue;
        }
        if i + ws < nw {
            dst[i + ws] |= w << bs;
        }
        if bs > 0 && i + ws + 1 < nw {
            dst[i + ws + 1] |= w >> (64 - bs);
        }
    }
    // t -> t - (n - x) for t >= n - x
    if x > 0 {
        let r = n - x;
        let (ws, bs) = (r / 64, r % 64);
        for i in ws..nw {
            let w = src[i];
            if w == 0 {
                continue;
            }
            dst[i - ws] |= w >> bs;
            if bs > 0 && i > ws {
                dst[i - ws - 1] |= w << (64 - bs);
            }
        }
    }
    let tail = n % 64;
    if tail != 0 {
        dst[nw - 1] &= (1u64 << tail) - 1;
    }
}

impl ElementSet {
    pub fn empty(group: &Arc<GroupSpec>) -> Self {
        ElementSet {
            group: Arc::clone(group),
            words: vec![0; word_count(group.order)],
            len: 0,
        }
    }

    pub fn full(group: &Arc<GroupSpec>) -> Self {
        let mut s = Self::empty(group);
        for w in s.words.iter_mut() {
            *w = u64::MAX;
        }
        s.trim_and_recount();
        s
    }

    pub fn singleton(group: &Arc<GroupSpec>, x: Element) -> Result<Self, GroupError> {
        Self::from_elements(group, [x])
    }

    pub fn from_elements<I>(group: &Arc<GroupSpec>, items: I) -> Result<Self, GroupError>
    where
        I: IntoIterator<Item = Element>,
    {
        let mut s = Self::empty(group);
        for x in items {
            group.check(x)?;
            s.insert(x);
        }
        Ok(s)
    }

    /// Set of all elements satisfying `pred`.
    pub fn from_fn(group: &Arc<GroupSpec>, mut pred: impl FnMut(Element) -> bool) -> Self {
        let mut s = Self::empty(group);
        for i in 0..group.order {
            if pred(Element(i)) {
                s.words[i / 64] |= 1 << (i % 64);
                s.len += 1;
            }
        }
        s
    }

    fn from_words(group: &Arc<GroupSpec>, words: Vec<u64>) -> Self {
        let mut s = ElementSet {
            group: Arc::clone(group),
            words,
            len: 0,
        };
        s.trim_and_recount();
        s
    }

    fn trim_and_recount(&mut self) {
        let tail = self.group.order % 64;
        if tail != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << tail) - 1;
            }
        }
        self.len = self.words.iter().map(|w| w.count_ones() as usize).sum();
    }

    pub fn group(&self) -> &Arc<GroupSpec> {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn is_full(&self) -> bool {
        self.len == self.group.order
    }

    pub fn contains(&self, x: Element) -> bool {
        x.0 < self.group.order && self.words[x.0 / 64] >> (x.0 % 64) & 1 == 1
    }

    /// Inserts `x`; returns whether it was new. Panics if `x` is out of range.
    pub fn insert(&mut self, x: Element) -> bool {
        assert!(x.0 < self.group.order, "element {} out of range", x.0);
        let (w, b) = (x.0 / 64, x.0 % 64);
        let fresh = self.words[w] >> b & 1 == 0;
        if fresh {
            self.words[w] |= 1 << b;
            self.len += 1;
        }
        fresh
    }

    pub fn remove(&mut self, x: Element) -> bool {
        if !self.contains(x) {
            return false;
        }
        self.words[x.0 / 64] &= !(1 << (x.0 % 64));
        self.len -= 1;
        true
    }

    pub fn iter(&self) -> impl Iterator<Item = Element> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(Element(i * 64 + b))
                }
            })
        })
    }

    /// First element in index order.
    pub fn first(&self) -> Option<Element> {
        self.iter().next()
    }

    fn assert_same(&self, other: &Self) {
        assert!(
            same_group(&self.group, &other.group),
            "set operands belong to different groups ({} vs {})",
            self.group,
            other.group
        );
    }

    fn zip_with(&self, other: &Self, f: impl Fn(u64, u64) -> u64) -> Self {
        self.assert_same(other);
        let words = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(&a, &b)| f(a, b))
            .collect();
        Self::from_words(&self.group, words)
    }

    /// Panics if the groups differ; likewise for the other set operations.
    pub fn union(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a & !b)
    }

    pub fn complement(&self) -> Self {
        Self::from_words(&self.group, self.words.iter().map(|w| !w).collect())
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.assert_same(other);
        self.words
            .iter()
            .zip(&other.words)
            .all(|(&a, &b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.assert_same(other);
        self.words
            .iter()
            .zip(&other.words)
            .all(|(&a, &b)| a & b == 0)
    }

    /// Number of common elements.
    pub fn intersection_len(&self, other: &Self) -> usize {
        self.assert_same(other);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(&a, &b)| (a & b).count_ones() as usize)
            .sum()
    }

    /// `-S`.
    pub fn negate(&self) -> Self {
        if self.group.is_elementary_2() {
            return self.clone();
        }
        let mut out = Self::empty(&self.group);
        for x in self.iter() {
            out.insert(self.group.neg_unchecked(x));
        }
        out
    }

    pub fn is_symmetric(&self) -> bool {
        self.negate() == *self
    }

    /// `S + x`.
    pub fn translate(&self, x: Element) -> Self {
        let g = &self.group;
        let mut words = vec![0u64; self.words.len()];
        match g.kind {
            Kind::Elementary2 => xor_translate_or(&self.words, x.0, &mut words),
            Kind::Cyclic => rotate_or(&self.words, x.0, g.order, &mut words),
            Kind::Mixed => {
                for t in self.iter() {
                    let z = g.add_unchecked(t, x).0;
                    words[z / 64] |= 1 << (z % 64);
                }
            }
        }
        Self::from_words(g, words)
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }
}

/// `S + T = {s + t}`.
pub fn sumset(s: &ElementSet, t: &ElementSet) -> Result<ElementSet, GroupError> {
    if !same_group(&s.group, &t.group) {
        return Err(GroupError::GroupMismatch(
            s.group.to_string(),
            t.group.to_string(),
        ));
    }
    let g = &s.group;
    // iterate over the smaller operand
    let (small, big) = if s.len <= t.len { (s, t) } else { (t, s) };
    let mut words = vec![0u64; s.words.len()];
    match g.kind {
        Kind::Elementary2 => {
            for x in small.iter() {
                xor_translate_or(&big.words, x.0, &mut words);
            }
        }
        Kind::Cyclic => {
            for x in small.iter() {
                rotate_or(&big.words, x.0, g.order, &mut words);
            }
        }
        Kind::Mixed => {
            for x in small.iter() {
                for y in big.iter() {
                    let z = g.add_unchecked(x, y).0;
                    words[z / 64] |= 1 << (z % 64);
                }
            }
        }
    }
    Ok(ElementSet::from_words(g, words))
}

/// Definitional double loop, kept as a reference for the mask kernels.
pub fn sumset_naive(s: &ElementSet, t: &ElementSet) -> Result<ElementSet, GroupError> {
    if !same_group(&s.group, &t.group) {
        return Err(GroupError::GroupMismatch(
            s.group.to_string(),
            t.group.to_string(),
        ));
    }
    let g = &s.group;
    let mut out = ElementSet::empty(g);
    for x in s.iter() {
        for y in t.iter() {
            out.insert(g.add(x, y)?);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct Subgroup {
    pub generators: Vec<Element>,
    pub elements: ElementSet,
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Exhaustive closure check under addition and negation.
    pub fn is_closed(&self) -> bool {
        let e = &self.elements;
        let g = e.group();
        e.contains(g.zero())
            && e.iter().all(|x| {
                e.contains(g.neg_unchecked(x))
                    && e.iter().all(|y| e.contains(g.add_unchecked(x, y)))
            })
    }
}

/// Smallest subgroup containing `gens`.
pub fn span(group: &Arc<GroupSpec>, gens: &[Element]) -> Result<Subgroup, GroupError> {
    for &x in gens {
        group.check(x)?;
    }
    let mut h = ElementSet::singleton(group, group.zero())?;
    for &x in gens {
        if h.contains(x) {
            continue;
        }
        // h <- h + <x>, one coset at a time
        let mut coset = h.translate(x);
        while !coset.is_subset(&h) {
            h = h.union(&coset);
            coset = coset.translate(x);
        }
    }
    Ok(Subgroup {
        generators: gens.to_vec(),
        elements: h,
    })
}

pub fn mod_pow(base: u64, mut exp: u64, modulus: u64) -> u64 {
    if modulus == 1 {
        return 0;
    }
    let m = modulus as u128;
    let mut b = base as u128 % m;
    let mut acc: u128 = 1;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors by trial division.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Whether `g` generates the multiplicative group mod prime `p`.
pub fn is_primitive_root(g: u64, p: u64) -> Result<bool, GroupError> {
    if !is_prime(p) {
        return Err(GroupError::NotPrime(p));
    }
    let g = g % p;
    if g == 0 {
        return Ok(false);
    }
    if p == 2 {
        return Ok(g == 1);
    }
    Ok(prime_factors(p - 1)
        .into_iter()
        .all(|q| mod_pow(g, (p - 1) / q, p) != 1))
}

/// Smallest primitive root modulo the prime `p` (1 for `p = 2`).
pub fn primitive_root(p: u64) -> Result<u64, GroupError> {
    if !is_prime(p) {
        return Err(GroupError::NotPrime(p));
    }
    if p == 2 {
        return Ok(1);
    }
    let factors = prime_factors(p - 1);
    (2..p)
        .find(|&g| factors.iter().all(|&q| mod_pow(g, (p - 1) / q, p) != 1))
        .ok_or(GroupError::NotPrime(p))
}

/// The cosets `X_i = {g^(a*m + i)}` of the index-`m` subgroup of `(Z/p)^*`,
/// as subsets of the additive group `Z/p`.
pub fn cyclotomic_cosets(
    group: &Arc<GroupSpec>,
    m: u64,
    g: u64,
) -> Result<Vec<ElementSet>, GroupError> {
    if group.kind == Kind::Mixed || group.moduli.len() != 1 {
        return Err(GroupError::ParseGroup(group.to_string()));
    }
    let p = group.order as u64;
    if !is_prime(p) {
        return Err(GroupError::NotPrime(p));
    }
    if m == 0 || !(p - 1).is_multiple_of(m) {
        return Err(GroupError::NotDivisor { m, p });
    }
    if !is_primitive_root(g, p)? {
        return Err(GroupError::NotPrimitive { g, p });
    }
    let mut cosets: Vec<ElementSet> = (0..m).map(|_| ElementSet::empty(group)).collect();
    let mut power = 1u64;
    for e in 0..p - 1 {
        cosets[(e % m) as usize].insert(Element(power as usize));
        power = power * (g % p) % p;
    }
    Ok(cosets)
}

/// Elements of `(Z/2Z)^k` whose Hamming weight lies in `[lo, hi]`.
pub fn weight_class(
    group: &Arc<GroupSpec>,
    lo: usize,
    hi: usize,
) -> Result<ElementSet, GroupError> {
    let k = group
        .dimension()
        .ok_or_else(|| GroupError::NotElementary(group.to_string()))?;
    if lo > hi || hi > k {
        return Err(GroupError::WeightBounds { k, lo, hi });
    }
    Ok(ElementSet::from_fn(group, |x| {
        let w = x.0.count_ones() as usize;
        (lo..=hi).contains(&w)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u32) -> Arc<GroupSpec> {
        Arc::new(GroupSpec::cyclic(n).unwrap())
    }

    fn set(g: &Arc<GroupSpec>, xs: &[usize]) -> ElementSet {
        ElementSet::from_elements(g, xs.iter().map(|&i| Element(i))).unwrap()
    }

    #[test]
    fn arithmetic() {
        let g = z(113);
        assert_eq!(g.add(Element(50), Element(63)).unwrap(), Element(0));
        assert_eq!(g.neg(Element(1)).unwrap(), Element(112));
        assert!(matches!(
            g.add(Element(113), Element(0)),
            Err(GroupError::OutOfRange { .. })
        ));
        let h = GroupSpec::elementary_abelian(10).unwrap();
        for i in 0..1024 {
            assert_eq!(h.add(Element(i), Element(i)).unwrap(), Element(0));
        }
        let m = GroupSpec::new(&[3, 4, 5]).unwrap();
        let x = m.encode(&[2, 3, 4]).unwrap();
        assert_eq!(m.decode(m.neg(x).unwrap()), vec![1, 1, 1]);
        assert_eq!(m.decode(m.add(x, x).unwrap()), vec![1, 2, 3]);
    }

    #[test]
    fn group_limits() {
        assert!(matches!(
            GroupSpec::new(&[1]),
            Err(GroupError::InvalidModulus(1))
        ));
        assert!(matches!(GroupSpec::new(&[]), Err(GroupError::Trivial(1))));
        assert!(matches!(
            GroupSpec::elementary_abelian(21),
            Err(GroupError::TooLarge { .. })
        ));
        assert!(GroupSpec::with_cap(&[2; 21], 1 << 21).is_ok());
    }

    #[test]
    fn parse_groups_and_elements() {
        assert_eq!(
            GroupSpec::parse("z:113").unwrap(),
            GroupSpec::cyclic(113).unwrap()
        );
        assert_eq!(GroupSpec::parse("2^10").unwrap().order(), 1024);
        assert_eq!(GroupSpec::parse("3x4").unwrap().moduli(), &[3, 4]);
        assert!(GroupSpec::parse("bogus").is_err());
        let g = GroupSpec::elementary_abelian(10).unwrap();
        let x = g.parse_element("0110000000").unwrap();
        assert_eq!(x, Element(0b110));
        assert_eq!(g.format_element(x), "0110000000");
        assert!(g.parse_element("011").is_err());
        assert!(g.parse_element("01100000a0").is_err());
        let m = GroupSpec::parse("3x4").unwrap();
        let y = m.parse_element("2,3").unwrap();
        assert_eq!(m.format_element(y), "2,3");
    }

    #[test]
    fn encode_decode_round_trip() {
        let g = GroupSpec::new(&[3, 2, 5]).unwrap();
        for i in 0..g.order() {
            assert_eq!(g.encode(&g.decode(Element(i))).unwrap(), Element(i));
        }
        assert_eq!(g.decode(Element(0)), vec![0, 0, 0]);
    }

    #[test]
    fn sumset_basics() {
        let g = z(113);
        let s = set(&g, &[3, 7, 100]);
        let empty = ElementSet::empty(&g);
        assert!(sumset(&empty, &s).unwrap().is_empty());
        assert_eq!(sumset(&set(&g, &[0]), &s).unwrap(), s);
        let other = z(7);
        assert!(matches!(
            sumset(&s, &ElementSet::full(&other)),
            Err(GroupError::GroupMismatch(..))
        ));
    }

    #[test]
    fn rotate_kernel_matches_naive() {
        for n in [2u32, 5, 63, 64, 65, 127, 128, 130, 200] {
            let g = z(n);
            let s = ElementSet::from_fn(&g, |x| x.0 % 3 == 1 || x.0 + 1 == n as usize);
            let t = ElementSet::from_fn(&g, |x| x.0 % 5 == 2 || x.0 == 0);
            assert_eq!(
                sumset(&s, &t).unwrap(),
                sumset_naive(&s, &t).unwrap(),
                "n={n}"
            );
        }
    }

    #[test]
    fn xor_kernel_matches_naive() {
        for k in 1..=9 {
            let g = Arc::new(GroupSpec::elementary_abelian(k).unwrap());
            let s = ElementSet::from_fn(&g, |x| x.0.count_ones() % 3 == 1);
            let t = ElementSet::from_fn(&g, |x| x.0 % 7 == 3);
            assert_eq!(
                sumset(&s, &t).unwrap(),
                sumset_naive(&s, &t).unwrap(),
                "k={k}"
            );
        }
    }

    #[test]
    fn weight_classes_k10() {
        let g = Arc::new(GroupSpec::elementary_abelian(10).unwrap());
        let x = weight_class(&g, 1, 6).unwrap();
        let c = weight_class(&g, 7, 10).unwrap();
        // oracle: binomial sums
        let binom = |n: u64, k: u64| (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1));
        assert_eq!(x.len() as u64, (1..=6).map(|w| binom(10, w)).sum::<u64>());
        assert_eq!(x.len(), 847);
        assert_eq!(c.len(), 176);
        assert!(weight_class(&g, 0, 10).unwrap().is_full());
        assert!(matches!(
            weight_class(&g, 3, 11),
            Err(GroupError::WeightBounds { .. })
        ));
        assert!(matches!(
            weight_class(&z(5), 0, 1),
            Err(GroupError::NotElementary(_))
        ));
        let cc = sumset(&c, &c).unwrap();
        assert_eq!(cc, c.complement());
    }

    #[test]
    fn spans() {
        let g = z(113);
        assert_eq!(span(&g, &[]).unwrap().order(), 1);
        assert_eq!(span(&g, &[Element(1)]).unwrap().order(), 113);
        let m = Arc::new(GroupSpec::new(&[4, 6]).unwrap());
        let x = m.encode(&[2, 3]).unwrap();
        let h = span(&m, &[x]).unwrap();
        assert_eq!(h.order(), 2);
        assert!(h.is_closed());
        let y = m.encode(&[1, 2]).unwrap();
        let h = span(&m, &[x, y]).unwrap();
        assert!(h.is_closed());
        let brute: std::collections::BTreeSet<usize> = (0..12u32)
            .flat_map(|a| (0..12u32).map(move |b| (a, b)))
            .map(|(a, b)| m.encode(&[(2 * a + b) % 4, (3 * a + 2 * b) % 6]).unwrap().0)
            .collect();
        assert_eq!(
            h.elements
                .iter()
                .map(|e| e.0)
                .collect::<std::collections::BTreeSet<_>>(),
            brute
        );
    }

    #[test]
    fn primitive_roots() {
        assert_eq!(primitive_root(113).unwrap(), 3);
        assert_eq!(primitive_root(2).unwrap(), 1);
        // oracle: 2 has order 3 mod 7 (2^3 = 8 = 1), 3 has order 6
        let order = |g: u64, p: u64| (1..p).find(|&e| mod_pow(g, e, p) == 1).unwrap();
        assert_eq!(order(2, 7), 3);
        assert_eq!(order(3, 7), 6);
        assert_eq!(primitive_root(7).unwrap(), 3);
        assert_eq!(primitive_root(9), Err(GroupError::NotPrime(9)));
        for p in [3u64, 5, 11, 13, 41, 113, 1009] {
            let g = primitive_root(p).unwrap();
            assert_eq!(order(g, p), p - 1);
            assert!((2..g).all(|h| order(h, p) != p - 1));
        }
    }

    #[test]
    fn cosets_113() {
        let g = z(113);
        let xs = cyclotomic_cosets(&g, 8, 3).unwrap();
        assert_eq!(xs.len(), 8);
        assert!(xs.iter().all(|x| x.len() == 14));
        // 3^56 = -1 and 56 = 0 mod 8
        assert_eq!(mod_pow(3, 56, 113), 112);
        assert!(xs[0].contains(Element(112)));
        assert!(xs[1].contains(Element(3)));
        let mut all = ElementSet::empty(&g);
        for (i, x) in xs.iter().enumerate() {
            assert!(all.is_disjoint(x), "X_{i} overlaps");
            all = all.union(x);
        }
        assert_eq!(all.len(), 112);
        assert!(!all.contains(Element(0)));
        assert!(matches!(
            cyclotomic_cosets(&g, 5, 3),
            Err(GroupError::NotDivisor { .. })
        ));
        assert!(matches!(
            cyclotomic_cosets(&g, 8, 2),
            Err(GroupError::NotPrimitive { .. })
        ));
        let g7 = z(7);
        let xs = cyclotomic_cosets(&g7, 1, 3).unwrap();
        assert_eq!(xs[0], set(&g7, &[1, 2, 3, 4, 5, 6]));
        assert!(matches!(
            cyclotomic_cosets(&z(9), 2, 2),
            Err(GroupError::NotPrime(9))
        ));
    }

    #[test]
    fn cosets_saturate_sumsets() {
        let g = z(113);
        let xs = cyclotomic_cosets(&g, 8, 3).unwrap();
        // multiplying by an element of X_0 maps each X_i onto itself
        for u in xs[0].iter() {
            for x in &xs {
                let image =
                    ElementSet::from_elements(&g, x.iter().map(|e| Element(e.0 * u.0 % 113)))
                        .unwrap();
                assert_eq!(&image, x);
            }
        }
        for j in 0..8 {
            for k in 0..8 {
                let s = sumset(&xs[j], &xs[k]).unwrap();
                for x in &xs {
                    let hit = s.intersection_len(x);
                    assert!(hit == 0 || hit == x.len());
                }
            }
        }
    }

    #[test]
    fn set_ops() {
        let g = z(10);
        let a = set(&g, &[1, 2, 3]);
        let b = set(&g, &[3, 4]);
        assert_eq!(a.union(&b).len(), 4);
        assert_eq!(a.intersection(&b), set(&g, &[3]));
        assert_eq!(a.difference(&b), set(&g, &[1, 2]));
        assert_eq!(a.complement().len(), 7);
        assert_eq!(a.negate(), set(&g, &[7, 8, 9]));
        assert!(set(&g, &[1, 9, 5]).is_symmetric());
        assert_eq!(a.translate(Element(8)), set(&g, &[9, 0, 1]));
        let mut c = a.clone();
        assert!(!c.insert(Element(1)));
        assert!(c.remove(Element(1)));
        assert_eq!(c.len(), 2);
    }
}

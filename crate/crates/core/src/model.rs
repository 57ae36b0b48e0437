//! Domain types for colored bin packing with reordering: colors, instances,
//! packings, the instance text grammar and the packing validator.
//!
//! Instance text grammar:
//!
//! ```text
//! instance  := [ "L=" INT ";" ] body
//! body      := LETTERS | COUNTLIST | ""
//! COUNTLIST := COLOR ":" INT ( "," COLOR ":" INT )*
//! ```
//!
//! A missing `L=` prefix means the capacity is unbounded (zero-weight items).
//! Whitespace is allowed between tokens.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Display letters for the first 26 colors. The leading four follow the
/// W/B/Y/G convention used in the worked examples; the rest are the remaining
/// capitals in alphabetical order.
const ALPHABET: &[u8; 26] = b"WBYGACDEFHIJKLMNOPQRSTUVXZ";

/// A color. Ids are dense and map one-to-one onto display names: ids 0..26
/// render as single letters, id `k >= 26` renders as `C{k+1}` (`C27`, `C28`, ...).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ColorId(pub u32);

impl ColorId {
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn from_letter(c: char) -> Option<ColorId> {
        if !c.is_ascii_uppercase() {
            return None;
        }
        ALPHABET
            .iter()
            .position(|&b| b == c as u8)
            .map(|p| ColorId(p as u32))
    }

    pub fn name(self) -> String {
        self.to_string()
    }
}

impl fmt::Display for ColorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match ALPHABET.get(self.index()) {
            Some(&b) => write!(f, "{}", b as char),
            None => write!(f, "C{}", self.0 as u64 + 1),
        }
    }
}

impl FromStr for ColorId {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut chars = s.chars();
        match (chars.next(), chars.as_str()) {
            (Some(c), "") => {
                ColorId::from_letter(c).ok_or_else(|| ParseError::UnknownColor(s.to_string()))
            }
            (Some('C'), digits) if digits.bytes().all(|b| b.is_ascii_digit()) => {
                match digits.parse::<u64>() {
                    Ok(k) if (27..=u32::MAX as u64).contains(&k) && !digits.starts_with('0') => {
                        Ok(ColorId((k - 1) as u32))
                    }
                    _ => Err(ParseError::UnknownColor(s.to_string())),
                }
            }
            _ => Err(ParseError::UnknownColor(s.to_string())),
        }
    }
}

impl Serialize for ColorId {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ColorId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Multiset of items keyed by color. Zero counts are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct ColorCounts {
    counts: BTreeMap<ColorId, usize>,
    total: usize,
}

impl ColorCounts {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs<I: IntoIterator<Item = (ColorId, usize)>>(pairs: I) -> Self {
        let mut counts = Self::new();
        for (color, k) in pairs {
            counts.add(color, k);
        }
        counts
    }

    pub fn from_colors<I: IntoIterator<Item = ColorId>>(colors: I) -> Self {
        let mut counts = Self::new();
        for color in colors {
            counts.add(color, 1);
        }
        counts
    }

    /// Builds counts from a plain vector, assigning color `i` to entry `i`.
    pub fn from_count_vector(vector: &[usize]) -> Self {
        Self::from_pairs(
            vector
                .iter()
                .enumerate()
                .map(|(i, &k)| (ColorId(i as u32), k)),
        )
    }

    pub fn add(&mut self, color: ColorId, k: usize) {
        if k == 0 {
            return;
        }
        *self.counts.entry(color).or_insert(0) += k;
        self.total += k;
    }

    /// Removes `k` items of `color`. Returns false (and changes nothing) if
    /// fewer than `k` are present.
    pub fn remove(&mut self, color: ColorId, k: usize) -> bool {
        let Some(have) = self.counts.get_mut(&color) else {
            return k == 0;
        };
        if *have < k {
            return false;
        }
        *have -= k;
        if *have == 0 {
            self.counts.remove(&color);
        }
        self.total -= k;
        true
    }

    pub fn get(&self, color: ColorId) -> usize {
        self.counts.get(&color).copied().unwrap_or(0)
    }

    /// Total number of items.
    pub fn total(&self) -> usize {
        self.total
    }

    /// Number of distinct colors present.
    pub fn distinct(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    /// Colors in ascending id order with their counts.
    pub fn iter(&self) -> impl Iterator<Item = (ColorId, usize)> + '_ {
        self.counts.iter().map(|(&c, &k)| (c, k))
    }

    /// Copy of these counts with `color` removed entirely.
    pub fn without(&self, color: ColorId) -> ColorCounts {
        let mut rest = self.clone();
        let k = rest.get(color);
        rest.remove(color, k);
        rest
    }

    /// Counts sorted in non-increasing order, colors forgotten.
    pub fn count_vector_desc(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.counts.values().copied().collect();
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    }

    pub fn max_count(&self) -> usize {
        self.counts.values().copied().max().unwrap_or(0)
    }
}

impl fmt::Display for ColorCounts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (color, k)) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{color}:{k}")?;
        }
        Ok(())
    }
}

/// Most frequent color and the discrepancy it induces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ColorStats {
    /// `None` only for the empty multiset.
    pub max_color: Option<ColorId>,
    pub max_count: usize,
    pub other_count: usize,
    pub discrepancy: i64,
}

/// Computes MaxColor, MaxCount, OtherCount and the discrepancy
/// `MaxCount - OtherCount`. Ties on the maximum go to the smallest id.
pub fn color_stats(counts: &ColorCounts) -> ColorStats {
    let mut best: Option<(ColorId, usize)> = None;
    for (color, k) in counts.iter() {
        // iter() is ascending by id, so strict > keeps the smallest id on ties
        if best.is_none_or(|(_, b)| k > b) {
            best = Some((color, k));
        }
    }
    let (max_color, max_count) = match best {
        Some((c, k)) => (Some(c), k),
        None => (None, 0),
    };
    let other_count = counts.total() - max_count;
    ColorStats {
        max_color,
        max_count,
        other_count,
        discrepancy: max_count as i64 - other_count as i64,
    }
}

/// Bin capacity in items. `Unbounded` is the zero-weight problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Capacity {
    Bounded(usize),
    Unbounded,
}

impl Capacity {
    /// `None` for a zero limit.
    pub fn bounded(limit: usize) -> Option<Capacity> {
        (limit >= 1).then_some(Capacity::Bounded(limit))
    }

    pub fn limit(self) -> Option<usize> {
        match self {
            Capacity::Bounded(l) => Some(l),
            Capacity::Unbounded => None,
        }
    }

    pub fn admits(self, len: usize) -> bool {
        self.limit().is_none_or(|l| len <= l)
    }
}

impl fmt::Display for Capacity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Capacity::Bounded(l) => write!(f, "{l}"),
            Capacity::Unbounded => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Instance {
    pub counts: ColorCounts,
    pub capacity: Capacity,
}

impl Instance {
    pub fn new(counts: ColorCounts, capacity: Capacity) -> Self {
        if let Capacity::Bounded(l) = capacity {
            assert!(l >= 1, "bounded capacity must be positive");
        }
        Self { counts, capacity }
    }

    pub fn n(&self) -> usize {
        self.counts.total()
    }
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Capacity::Bounded(l) = self.capacity {
            write!(f, "L={l};")?;
        }
        write!(f, "{}", self.counts)
    }
}

impl FromStr for Instance {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_instance(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("malformed token `{0}`")]
    Malformed(String),
    #[error("unknown color `{0}`")]
    UnknownColor(String),
    #[error("count must be positive in `{0}`")]
    NonPositiveCount(String),
    #[error("capacity must be positive in `{0}`")]
    NonPositiveCapacity(String),
    #[error("color listed twice in `{0}`")]
    DuplicateColor(String),
}

/// Parses an instance such as `"L=4;W:12,B:3,Y:2,G:2"` or `"WWWWBBY"`.
pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let text = text.trim();
    let (capacity, body) = match text.strip_prefix("L") {
        Some(rest) if rest.trim_start().starts_with('=') => {
            let rest = rest.trim_start()[1..].trim_start();
            let (limit, body) = rest
                .split_once(';')
                .ok_or_else(|| ParseError::Malformed(text.to_string()))?;
            let token = limit.trim();
            let value: i64 = token
                .parse()
                .map_err(|_| ParseError::Malformed(format!("L={token}")))?;
            if value <= 0 {
                return Err(ParseError::NonPositiveCapacity(format!("L={token}")));
            }
            (Capacity::Bounded(value as usize), body.trim())
        }
        _ => (Capacity::Unbounded, text),
    };
    let counts = if body.contains(':') {
        parse_count_list(body)?
    } else {
        let mut counts = ColorCounts::new();
        for c in body.chars().filter(|c| !c.is_whitespace()) {
            let color =
                ColorId::from_letter(c).ok_or_else(|| ParseError::UnknownColor(c.to_string()))?;
            counts.add(color, 1);
        }
        counts
    };
    Ok(Instance::new(counts, capacity))
}

fn parse_count_list(body: &str) -> Result<ColorCounts, ParseError> {
    let mut counts = ColorCounts::new();
    for token in body.split(',') {
        let token = token.trim();
        let (color, count) = token
            .split_once(':')
            .ok_or_else(|| ParseError::Malformed(token.to_string()))?;
        let color: ColorId = color.trim().parse()?;
        let count: i64 = count
            .trim()
            .parse()
            .map_err(|_| ParseError::Malformed(token.to_string()))?;
        if count <= 0 {
            return Err(ParseError::NonPositiveCount(token.to_string()));
        }
        if counts.get(color) > 0 {
            return Err(ParseError::DuplicateColor(token.to_string()));
        }
        counts.add(color, count as usize);
    }
    Ok(counts)
}

/// Ordered contents of one bin, bottom first. The last item is the top.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BinContent(pub Vec<ColorId>);

impl BinContent {
    pub fn new(items: Vec<ColorId>) -> Self {
        Self(items)
    }

    pub fn items(&self) -> &[ColorId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn top(&self) -> Option<ColorId> {
        self.0.last().copied()
    }

    pub fn push(&mut self, color: ColorId) {
        self.0.push(color);
    }

    pub fn pop(&mut self) -> Option<ColorId> {
        self.0.pop()
    }

    pub fn counts(&self) -> ColorCounts {
        ColorCounts::from_colors(self.0.iter().copied())
    }

    /// Parses a bin written as concatenated color names, e.g. `WBW` or `WC27W`.
    pub fn parse(text: &str) -> Result<BinContent, ParseError> {
        let mut items = Vec::new();
        let mut chars = text.char_indices().peekable();
        while let Some((start, c)) = chars.next() {
            let mut end = start + c.len_utf8();
            if c == 'C' {
                while let Some(&(i, d)) = chars.peek() {
                    if !d.is_ascii_digit() {
                        break;
                    }
                    end = i + 1;
                    chars.next();
                }
            }
            items.push(text[start..end].parse()?);
        }
        Ok(BinContent(items))
    }
}

impl fmt::Display for BinContent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.0 {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// A solution: a sequence of non-empty bins.
///
/// JSON form: `{"bins": [["W","B","W"], ...], "bin_count": 3}`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "PackingJson", try_from = "PackingJson")]
pub struct Packing {
    bins: Vec<BinContent>,
}

impl Packing {
    /// Empty bins are dropped.
    pub fn new(bins: Vec<BinContent>) -> Self {
        Self {
            bins: bins.into_iter().filter(|b| !b.is_empty()).collect(),
        }
    }

    pub fn bins(&self) -> &[BinContent] {
        &self.bins
    }

    pub fn into_bins(self) -> Vec<BinContent> {
        self.bins
    }

    pub fn bin_count(&self) -> usize {
        self.bins.len()
    }

    pub fn item_counts(&self) -> ColorCounts {
        ColorCounts::from_colors(self.bins.iter().flat_map(|b| b.0.iter().copied()))
    }

    /// Parses the text rendering: bins separated by whitespace or `/`.
    pub fn parse_text(text: &str) -> Result<Packing, ParseError> {
        let bins = text
            .split(|c: char| c.is_whitespace() || c == '/')
            .filter(|t| !t.is_empty())
            .map(BinContent::parse)
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Packing { bins })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("packing serializes")
    }

    pub fn from_json(text: &str) -> Result<Packing, serde_json::Error> {
        serde_json::from_str(text)
    }
}

/// Renders bins separated by single spaces.
impl fmt::Display for Packing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, bin) in self.bins.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{bin}")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct PackingJson {
    bins: Vec<BinContent>,
    bin_count: usize,
}

impl From<Packing> for PackingJson {
    fn from(p: Packing) -> Self {
        PackingJson {
            bin_count: p.bins.len(),
            bins: p.bins,
        }
    }
}

impl TryFrom<PackingJson> for Packing {
    type Error = String;

    fn try_from(json: PackingJson) -> Result<Self, Self::Error> {
        if json.bin_count != json.bins.len() {
            return Err(format!(
                "bin_count is {} but {} bins are listed",
                json.bin_count,
                json.bins.len()
            ));
        }
        if let Some(i) = json.bins.iter().position(BinContent::is_empty) {
            return Err(format!("bin {i} is empty"));
        }
        Ok(Packing { bins: json.bins })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ViolationKind {
    Adjacency,
    Capacity,
    Conservation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    /// `None` for conservation violations, which concern the whole packing.
    pub bin_index: Option<usize>,
    pub kind: ViolationKind,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.bin_index {
            Some(i) => write!(f, "{:?} at bin {i}: {}", self.kind, self.detail),
            None => write!(f, "{:?}: {}", self.kind, self.detail),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn has(&self, kind: ViolationKind) -> bool {
        self.violations.iter().any(|v| v.kind == kind)
    }
}

/// Checks a packing against an instance and reports every violation found.
pub fn validate_packing(instance: &Instance, packing: &Packing) -> ValidationReport {
    let mut violations = Vec::new();
    for (i, bin) in packing.bins().iter().enumerate() {
        for (pos, pair) in bin.items().windows(2).enumerate() {
            if pair[0] == pair[1] {
                violations.push(Violation {
                    bin_index: Some(i),
                    kind: ViolationKind::Adjacency,
                    detail: format!(
                        "{bin}: positions {} and {} are both {}",
                        pos,
                        pos + 1,
                        pair[0]
                    ),
                });
            }
        }
        if !instance.capacity.admits(bin.len()) {
            violations.push(Violation {
                bin_index: Some(i),
                kind: ViolationKind::Capacity,
                detail: format!("{bin}: {} items exceed L={}", bin.len(), instance.capacity),
            });
        }
    }
    let packed = packing.item_counts();
    if packed != instance.counts {
        violations.push(Violation {
            bin_index: None,
            kind: ViolationKind::Conservation,
            detail: format!(
                "packed {{{packed}}} but instance has {{{}}}",
                instance.counts
            ),
        });
    }
    ValidationReport {
        valid: violations.is_empty(),
        violations,
    }
}

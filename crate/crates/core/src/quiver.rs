//! Quivers of type Ã_n given by a cyclic orientation word, their universal
//! cover, and the left/right hook sequences that drive every later
//! computation.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::measure::{cmp_entries, least_rotation, primitive_root_len, Measure};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuiverError {
    #[error("malformed orientation word: {0}")]
    MalformedWord(String),
    #[error("all arrows point the same way (oriented cycle)")]
    OrientedCycle,
    #[error("duplicate vertex label `{0}`")]
    DuplicateLabel(String),
    #[error("expected {expected} labels, got {got}")]
    LabelCountMismatch { expected: usize, got: usize },
    #[error("cannot rotate an empty sequence")]
    EmptySequence,
    #[error("dimension bound {bound} is below 3h = {min}")]
    BoundTooSmall { bound: usize, min: usize },
}

/// Direction of the arrow between cover positions `i` and `i + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    /// `i -> i + 1`
    Forward,
    /// `i + 1 -> i`
    Backward,
}

impl Direction {
    pub fn flip(self) -> Self {
        match self {
            Direction::Forward => Direction::Backward,
            Direction::Backward => Direction::Forward,
        }
    }

    fn symbol(self) -> char {
        match self {
            Direction::Forward => '>',
            Direction::Backward => '<',
        }
    }
}

/// An Ã_n quiver as typed by the user: a cyclic orientation word plus labels.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuiverSpec {
    edges: Vec<Direction>,
    labels: Vec<String>,
}

impl QuiverSpec {
    pub fn new(edges: Vec<Direction>, labels: Vec<String>) -> Result<Self, QuiverError> {
        if edges.len() < 2 {
            return Err(QuiverError::MalformedWord("need at least two edges".into()));
        }
        if labels.len() != edges.len() {
            return Err(QuiverError::LabelCountMismatch { expected: edges.len(), got: labels.len() });
        }
        if !edges.contains(&Direction::Forward) || !edges.contains(&Direction::Backward) {
            return Err(QuiverError::OrientedCycle);
        }
        let mut seen = HashSet::new();
        for l in &labels {
            if l.is_empty() || l.contains(|c: char| c.is_whitespace() || c == ',' || c == ':') {
                return Err(QuiverError::MalformedWord(format!("bad label `{l}`")));
            }
            if !seen.insert(l.as_str()) {
                return Err(QuiverError::DuplicateLabel(l.clone()));
            }
        }
        Ok(QuiverSpec { edges, labels })
    }

    /// Number of vertices `h = n + 1`.
    pub fn h(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Direction] {
        &self.edges
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Direction of edge `i` of the input word (unnormalized cover).
    pub fn raw_arrow(&self, i: i64) -> Direction {
        self.edges[i.rem_euclid(self.h() as i64) as usize]
    }

    /// The quiver with every arrow reversed.
    pub fn opposite(&self) -> QuiverSpec {
        QuiverSpec { edges: self.edges.iter().map(|d| d.flip()).collect(), labels: self.labels.clone() }
    }

    /// Vertices with no outgoing arrow.
    pub fn sinks(&self) -> Vec<&str> {
        let h = self.h() as i64;
        (0..h)
            .filter(|&i| self.raw_arrow(i - 1) == Direction::Forward && self.raw_arrow(i) == Direction::Backward)
            .map(|i| self.labels[i as usize].as_str())
            .collect()
    }

    /// Vertices with no incoming arrow.
    pub fn sources(&self) -> Vec<&str> {
        self.opposite_sinks()
    }

    fn opposite_sinks(&self) -> Vec<&str> {
        let h = self.h() as i64;
        (0..h)
            .filter(|&i| self.raw_arrow(i - 1) == Direction::Backward && self.raw_arrow(i) == Direction::Forward)
            .map(|i| self.labels[i as usize].as_str())
            .collect()
    }

    /// Arrows as `(source, target)` label pairs, in edge order.
    pub fn arrows(&self) -> Vec<(String, String)> {
        let h = self.h();
        (0..h)
            .map(|i| {
                let (a, b) = (self.labels[i].clone(), self.labels[(i + 1) % h].clone());
                match self.edges[i] {
                    Direction::Forward => (a, b),
                    Direction::Backward => (b, a),
                }
            })
            .collect()
    }

    pub fn word(&self) -> String {
        self.edges.iter().map(|d| d.symbol()).collect()
    }
}

impl fmt::Display for QuiverSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.word(), self.labels.join(","))
    }
}

/// Parses `"><<><"` optionally followed by `,a,b,c,d,e`.
pub fn parse_quiver(text: &str) -> Result<QuiverSpec, QuiverError> {
    let mut parts = text.trim().split(',');
    let word = parts.next().unwrap_or("").trim();
    let mut edges = Vec::with_capacity(word.len());
    for c in word.chars() {
        match c {
            '>' => edges.push(Direction::Forward),
            '<' => edges.push(Direction::Backward),
            _ => return Err(QuiverError::MalformedWord(format!("unexpected character `{c}`"))),
        }
    }
    if edges.len() < 2 {
        return Err(QuiverError::MalformedWord(format!("`{word}` is shorter than two edges")));
    }
    let rest: Vec<String> = parts.map(|s| s.trim().to_string()).collect();
    let labels = if rest.is_empty() { (0..edges.len()).map(|i| format!("v{i}")).collect() } else { rest };
    QuiverSpec::new(edges, labels)
}

/// Result of [`minimal_rotation`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rotation {
    pub rotated: Vec<u32>,
    pub shift: usize,
    pub primitive: bool,
}

/// The rotation of `seq` that is minimal in the GR order.
pub fn minimal_rotation(seq: &[u32]) -> Result<Rotation, QuiverError> {
    if seq.is_empty() {
        return Err(QuiverError::EmptySequence);
    }
    let shift = least_rotation(seq);
    let mut rotated = seq[shift..].to_vec();
    rotated.extend_from_slice(&seq[..shift]);
    Ok(Rotation { rotated, shift, primitive: primitive_root_len(seq) == seq.len() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Takeoff {
    Right,
    Symmetric,
}

/// Minimally rotated left and right hook sequences of a normalized cover.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HookSystem {
    #[serde(rename = "L")]
    pub left: Vec<u32>,
    #[serde(rename = "R")]
    pub right: Vec<u32>,
    pub s: usize,
    pub t: usize,
    pub takeoff: Takeoff,
    pub reflected: bool,
}

impl HookSystem {
    pub fn left_measure(&self) -> Measure {
        Measure::from_slice(&self.left)
    }

    pub fn right_measure(&self) -> Measure {
        Measure::from_slice(&self.right)
    }
}

/// Right hooks: a backward edge followed by the maximal run of forward edges,
/// read left to right around the cycle.
fn raw_right_hooks(edges: &[Direction]) -> Vec<u32> {
    let h = edges.len();
    let start = edges.iter().position(|&d| d == Direction::Backward).expect("mixed orientation");
    let mut out = Vec::new();
    let mut len = 0u32;
    for k in 0..h {
        let d = edges[(start + k) % h];
        if d == Direction::Backward && len > 0 {
            out.push(len);
            len = 0;
        }
        len += 1;
    }
    out.push(len);
    out
}

/// Left hooks: the mirror image, read right to left.
fn raw_left_hooks(edges: &[Direction]) -> Vec<u32> {
    let mirrored: Vec<Direction> = edges.iter().rev().map(|d| d.flip()).collect();
    raw_right_hooks(&mirrored)
}

fn reflect_edges(edges: &[Direction]) -> Vec<Direction> {
    let h = edges.len() as i64;
    (0..h).map(|j| edges[(-j - 1).rem_euclid(h) as usize].flip()).collect()
}

fn reflect_labels(labels: &[String]) -> Vec<String> {
    let h = labels.len() as i64;
    (0..h).map(|j| labels[(-j).rem_euclid(h) as usize].clone()).collect()
}

/// Computes the hook system, mirroring the cover when the right hooks come
/// out smaller than the left hooks.
pub fn hook_system(q: &QuiverSpec) -> HookSystem {
    Cover::new(q.clone()).hooks
}

/// The universal cover in normalized orientation (take-off to the right).
///
/// Position `i` of the cover maps to vertex `i mod h`; when `reflected` is set,
/// normalized position `j` corresponds to raw position `-j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cover {
    spec: QuiverSpec,
    edges: Vec<Direction>,
    labels: Vec<String>,
    hooks: HookSystem,
}

impl Cover {
    pub fn new(spec: QuiverSpec) -> Self {
        let raw_l = minimal_rotation(&raw_left_hooks(&spec.edges)).expect("nonempty").rotated;
        let raw_r = minimal_rotation(&raw_right_hooks(&spec.edges)).expect("nonempty").rotated;
        let reflected = cmp_entries(&raw_r, &raw_l).is_lt();
        let (edges, labels) = if reflected {
            (reflect_edges(&spec.edges), reflect_labels(&spec.labels))
        } else {
            (spec.edges.clone(), spec.labels.clone())
        };
        let left = minimal_rotation(&raw_left_hooks(&edges)).expect("nonempty").rotated;
        let right = minimal_rotation(&raw_right_hooks(&edges)).expect("nonempty").rotated;
        let takeoff = if left == right { Takeoff::Symmetric } else { Takeoff::Right };
        let hooks = HookSystem { s: left.len(), t: right.len(), left, right, takeoff, reflected };
        Cover { spec, edges, labels, hooks }
    }

    pub fn spec(&self) -> &QuiverSpec {
        &self.spec
    }

    pub fn h(&self) -> usize {
        self.edges.len()
    }

    pub fn hooks(&self) -> &HookSystem {
        &self.hooks
    }

    pub fn reflected(&self) -> bool {
        self.hooks.reflected
    }

    /// Normalized edge word.
    pub fn edges(&self) -> &[Direction] {
        &self.edges
    }

    /// Labels in normalized cover order.
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Direction of the cover arrow between `i` and `i + 1`.
    pub fn arrow(&self, i: i64) -> Direction {
        self.edges[i.rem_euclid(self.h() as i64) as usize]
    }

    pub fn label(&self, i: i64) -> &str {
        &self.labels[i.rem_euclid(self.h() as i64) as usize]
    }

    /// Normalized residue of the vertex named `label`.
    pub fn position_of(&self, label: &str) -> Option<i64> {
        self.labels.iter().position(|l| l == label).map(|p| p as i64)
    }

    /// Raw (input-word) position of normalized position `i`.
    pub fn to_raw(&self, i: i64) -> i64 {
        if self.reflected() {
            -i
        } else {
            i
        }
    }

    /// Normalized position of raw position `i`.
    pub fn from_raw(&self, i: i64) -> i64 {
        self.to_raw(i)
    }

    /// Cover of the opposite quiver, normalized on its own.
    pub fn opposite(&self) -> Cover {
        Cover::new(self.spec.opposite())
    }

    /// Whether position `i` receives both neighbouring arrows.
    pub fn is_sink(&self, i: i64) -> bool {
        self.arrow(i - 1) == Direction::Forward && self.arrow(i) == Direction::Backward
    }

    pub fn is_source(&self, i: i64) -> bool {
        self.arrow(i - 1) == Direction::Backward && self.arrow(i) == Direction::Forward
    }

    /// Sink residues in `[0, h)`.
    pub fn sink_positions(&self) -> Vec<i64> {
        (0..self.h() as i64).filter(|&i| self.is_sink(i)).collect()
    }

    pub fn to_json_value(&self) -> CoverReport {
        CoverReport {
            h: self.h(),
            edges: self.spec.word(),
            labels: self.spec.labels.clone(),
            normalized_edges: self.edges.iter().map(|d| d.symbol()).collect(),
            normalized_labels: self.labels.clone(),
            hooks: self.hooks.clone(),
        }
    }
}

/// Serializable summary `{h, edges, labels, L, R, s, t, takeoff, reflected}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverReport {
    pub h: usize,
    pub edges: String,
    pub labels: Vec<String>,
    pub normalized_edges: String,
    pub normalized_labels: Vec<String>,
    #[serde(flatten)]
    pub hooks: HookSystem,
}

/// Direction of the normalized cover arrow between `i` and `i + 1`.
pub fn cover_arrow(q: &QuiverSpec, i: i64) -> Direction {
    Cover::new(q.clone()).arrow(i)
}

pub fn opposite_quiver(q: &QuiverSpec) -> QuiverSpec {
    q.opposite()
}

/// Sink width: lengths of the maximal directed paths ending at the sink
/// from the left and from the right.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SinkWidth {
    pub sink: String,
    pub left: usize,
    pub right: usize,
    pub width: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TubeWinners {
    pub tube: String,
    /// Sinks winning the greedy algorithm for every module checked.
    pub sinks: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WidestExtremaReport {
    pub unique_valley: bool,
    pub unique_hill: bool,
    pub winning_sinks: Vec<TubeWinners>,
    pub winning_hill_sinks: Vec<TubeWinners>,
    pub width_table: Vec<SinkWidth>,
    pub hill_width_table: Vec<SinkWidth>,
    /// Whether the widest valley beats every other by at least 2.
    pub syntactic_valley: bool,
    pub syntactic_hill: bool,
}

fn width_table(cover: &Cover) -> Vec<SinkWidth> {
    cover
        .sink_positions()
        .into_iter()
        .map(|p| {
            let mut left = 0;
            while cover.arrow(p - 1 - left as i64) == Direction::Forward {
                left += 1;
            }
            let mut right = 0;
            while cover.arrow(p + right as i64) == Direction::Backward {
                right += 1;
            }
            SinkWidth { sink: cover.label(p).to_string(), left, right, width: left + right }
        })
        .collect()
}

fn clear_winner(table: &[SinkWidth]) -> bool {
    let mut w: Vec<usize> = table.iter().map(|s| s.width).collect();
    w.sort_unstable_by(|a, b| b.cmp(a));
    w.len() < 2 || w[0] >= w[1] + 2
}

fn stable_winners(cover: &Arc<Cover>, bound: usize) -> Vec<TubeWinners> {
    use crate::artubes::TubeKind;
    use crate::grcompute::winning_sinks;
    use crate::strings::StringModule;
    let h = cover.h() as i64;
    let mut out = Vec::new();
    for kind in [TubeKind::Left, TubeKind::Right] {
        let mut common: Option<Vec<i64>> = None;
        for lo in 0..h {
            for dim in 2 * h..=bound as i64 {
                let sm = StringModule::from_interval(cover.clone(), lo, lo + dim - 1);
                if sm.classify() != kind.class() {
                    continue;
                }
                let w = winning_sinks(&sm);
                common = Some(match common {
                    None => w,
                    Some(c) => c.into_iter().filter(|x| w.contains(x)).collect(),
                });
            }
        }
        let sinks = common.unwrap_or_default().into_iter().map(|p| cover.label(p).to_string()).collect();
        out.push(TubeWinners { tube: kind.to_string(), sinks });
    }
    out
}

/// Checks whether one sink (of `q`, resp. of its opposite) wins the greedy
/// algorithm for all modules of dimension `2h..=dim_bound` in each
/// exceptional tube.
pub fn widest_extrema_report(q: &QuiverSpec, dim_bound: usize) -> Result<WidestExtremaReport, QuiverError> {
    let min = 3 * q.h();
    if dim_bound < min {
        return Err(QuiverError::BoundTooSmall { bound: dim_bound, min });
    }
    let cover = Arc::new(Cover::new(q.clone()));
    let op = Arc::new(cover.opposite());
    let winning_sinks = stable_winners(&cover, dim_bound);
    let winning_hill_sinks = stable_winners(&op, dim_bound);
    let width_table = width_table(&cover);
    let hill_width_table = width_table_of(&op);
    Ok(WidestExtremaReport {
        unique_valley: winning_sinks.iter().all(|t| !t.sinks.is_empty()),
        unique_hill: winning_hill_sinks.iter().all(|t| !t.sinks.is_empty()),
        syntactic_valley: clear_winner(&width_table),
        syntactic_hill: clear_winner(&hill_width_table),
        winning_sinks,
        winning_hill_sinks,
        width_table,
        hill_width_table,
    })
}

fn width_table_of(cover: &Cover) -> Vec<SinkWidth> {
    width_table(cover)
}

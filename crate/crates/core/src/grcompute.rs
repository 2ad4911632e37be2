//! Gabriel-Roiter measures: the greedy algorithm, the homogeneous formula,
//! the brute-force oracle and the IPF decomposition.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::measure::{cmp_entries, concat_power, Measure};
use crate::quiver::{Cover, Direction, HookSystem};
use crate::strings::{ComponentClass, StringModule};

/// Largest dimension the oracle accepts unless told otherwise.
pub const DEFAULT_ORACLE_BOUND: usize = 60;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GrError {
    #[error("position {0} is not a sink of the interval")]
    NotASink(i64),
    #[error("measure {0} contains no full periodic block")]
    NoPeriodicPart(String),
    #[error("dimension {dim} exceeds the oracle bound {bound}")]
    BoundExceeded { dim: usize, bound: usize },
    #[error("quasi-length must be at least 1")]
    ZeroQuasiLength,
}

/// An indecomposable module: a string, or the homogeneous module `H[q]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Module {
    String(StringModule),
    Homogeneous { cover: Arc<Cover>, q: usize },
}

impl Module {
    pub fn homogeneous(cover: Arc<Cover>, q: usize) -> Result<Self, GrError> {
        if q == 0 {
            return Err(GrError::ZeroQuasiLength);
        }
        Ok(Module::Homogeneous { cover, q })
    }

    pub fn cover(&self) -> &Arc<Cover> {
        match self {
            Module::String(s) => s.cover(),
            Module::Homogeneous { cover, .. } => cover,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Module::String(s) => s.dim(),
            Module::Homogeneous { cover, q } => cover.h() * q,
        }
    }

    pub fn classify(&self) -> ComponentClass {
        match self {
            Module::String(s) => s.classify(),
            Module::Homogeneous { .. } => ComponentClass::HomogeneousRegular,
        }
    }

    pub fn name(&self) -> String {
        match self {
            Module::String(s) => s.name(),
            Module::Homogeneous { q, .. } => format!("H[{q}]"),
        }
    }

    /// The dual module over the opposite quiver.
    pub fn dual(&self) -> Module {
        match self {
            Module::String(s) => Module::String(s.dual()),
            Module::Homogeneous { cover, q } => Module::Homogeneous { cover: Arc::new(cover.opposite()), q: *q },
        }
    }
}

impl From<StringModule> for Module {
    fn from(s: StringModule) -> Self {
        Module::String(s)
    }
}

impl fmt::Display for Module {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HookStreams {
    pub sink: i64,
    pub lambda: Vec<u32>,
    pub rho: Vec<u32>,
}

/// Walks left and right from `sink`, recording hook lengths up to the
/// interval boundary.
pub fn hook_streams(sm: &StringModule, sink: i64) -> Result<HookStreams, GrError> {
    if sink < sm.lo() || sink > sm.hi() || !sm.is_closed(sink, sink) {
        return Err(GrError::NotASink(sink));
    }
    let c = sm.cover();
    let mut rho = Vec::new();
    let mut p = sink;
    while p < sm.hi() {
        let mut x = p + 1;
        while x < sm.hi() && c.arrow(x) == Direction::Forward {
            x += 1;
        }
        rho.push((x - p) as u32);
        p = x;
    }
    let mut lambda = Vec::new();
    let mut p = sink;
    while p > sm.lo() {
        let mut x = p - 1;
        while x > sm.lo() && c.arrow(x - 1) == Direction::Backward {
            x -= 1;
        }
        lambda.push((p - x) as u32);
        p = x;
    }
    Ok(HookStreams { sink, lambda, rho })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Choice {
    Left,
    Right,
    /// Both remaining streams were equal; the right one was taken.
    TieRight,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GreedyRun {
    pub streams: HookStreams,
    pub measure: Measure,
    pub trace: Vec<Choice>,
}

fn run_streams(streams: HookStreams) -> GreedyRun {
    let (mut i, mut j) = (0, 0);
    let mut out = vec![1u32];
    let mut trace = Vec::new();
    let (lam, rho) = (&streams.lambda, &streams.rho);
    while i < lam.len() || j < rho.len() {
        match cmp_entries(&lam[i..], &rho[j..]) {
            Ordering::Greater => {
                out.push(lam[i]);
                i += 1;
                trace.push(Choice::Left);
            }
            ord => {
                out.push(rho[j]);
                j += 1;
                trace.push(if ord == Ordering::Equal { Choice::TieRight } else { Choice::Right });
            }
        }
    }
    GreedyRun { streams, measure: Measure::from_slice(&out), trace }
}

/// One run of the greedy algorithm started at `sink`.
pub fn greedy_run(sm: &StringModule, sink: i64) -> Result<GreedyRun, GrError> {
    Ok(run_streams(hook_streams(sm, sink)?))
}

pub fn greedy_candidate(sm: &StringModule, sink: i64) -> Result<Measure, GrError> {
    Ok(greedy_run(sm, sink)?.measure)
}

/// Runs from every sink of the interval.
pub fn greedy_runs(sm: &StringModule) -> Vec<GreedyRun> {
    sm.sinks().into_iter().map(|s| greedy_run(sm, s).expect("sink")).collect()
}

/// The best run; ties keep the leftmost sink.
pub fn greedy_best(sm: &StringModule) -> GreedyRun {
    greedy_runs(sm)
        .into_iter()
        .reduce(|best, r| if r.measure > best.measure { r } else { best })
        .expect("every interval has a sink")
}

pub fn greedy_measure(sm: &StringModule) -> Measure {
    greedy_best(sm).measure
}

/// Sink residues (mod h) whose runs achieve the maximum.
pub fn winning_sinks(sm: &StringModule) -> Vec<i64> {
    let runs = greedy_runs(sm);
    let best = runs.iter().map(|r| &r.measure).max().expect("sink").clone();
    let h = sm.h() as i64;
    let mut out: Vec<i64> = runs.iter().filter(|r| r.measure == best).map(|r| r.streams.sink.rem_euclid(h)).collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Proper subarcs of the cycle that carry submodules of the quasi-simple
/// homogeneous module, as cover intervals `[x, x + len - 1]`.
fn closed_arcs(cover: &Cover) -> Vec<(i64, i64)> {
    let h = cover.h() as i64;
    let mut out = Vec::new();
    for x in 0..h {
        if cover.arrow(x - 1) != Direction::Forward {
            continue;
        }
        for len in 1..h {
            let y = x + len - 1;
            if cover.arrow(y) == Direction::Backward {
                out.push((x, y));
            }
        }
    }
    out
}

/// Measure of the quasi-simple homogeneous module.
pub fn mu_quasi_simple_homogeneous(cover: &Arc<Cover>) -> Measure {
    Oracle::new(cover.clone(), cover.h()).mu_h().clone()
}

/// `mu(H[q]) = mu_H . (h)^(q-1)`.
pub fn homogeneous_measure(cover: &Arc<Cover>, q: usize) -> Measure {
    let mu_h = mu_quasi_simple_homogeneous(cover);
    concat_power(&mu_h, &Measure::from_slice(&[cover.h() as u32]), q.saturating_sub(1))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Branch {
    Greedy,
    Band,
    Homogeneous,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasureReport {
    pub measure: Measure,
    pub branch: Branch,
    pub run: Option<GreedyRun>,
}

/// Band candidate `mu_H . (h)^(q-1) . (r)` for a preinjective of dimension `qh + r`.
fn band_candidate(mu_h: &Measure, h: usize, dim: usize) -> Option<Measure> {
    let (q, r) = (dim / h, dim % h);
    if q == 0 || r == 0 {
        return None;
    }
    let mut m = concat_power(mu_h, &Measure::from_slice(&[h as u32]), q - 1);
    m.push(r as u32);
    Some(m)
}

/// GR-measure with the branch that produced it.
pub fn gr_measure_report(m: &Module) -> MeasureReport {
    match m {
        Module::Homogeneous { cover, q } => {
            MeasureReport { measure: homogeneous_measure(cover, *q), branch: Branch::Homogeneous, run: None }
        }
        Module::String(sm) => {
            let run = greedy_best(sm);
            if sm.classify() == ComponentClass::Preinjective {
                let mu_h = mu_quasi_simple_homogeneous(sm.cover());
                if let Some(band) = band_candidate(&mu_h, sm.h(), sm.dim()) {
                    if band > run.measure {
                        return MeasureReport { measure: band, branch: Branch::Band, run: Some(run) };
                    }
                }
            }
            MeasureReport { measure: run.measure.clone(), branch: Branch::Greedy, run: Some(run) }
        }
    }
}

pub fn gr_measure(m: &Module) -> Measure {
    gr_measure_report(m).measure
}

/// GR-comeasure: the measure of the dual module.
pub fn gr_comeasure(m: &Module) -> Measure {
    gr_measure(&m.dual())
}

/// Direct evaluation of the defining supremum over chains of submodules.
#[derive(Debug)]
pub struct Oracle {
    cover: Arc<Cover>,
    bound: usize,
    mu_h: Measure,
    memo: HashMap<(i64, usize), Measure>,
}

impl Oracle {
    pub fn new(cover: Arc<Cover>, bound: usize) -> Self {
        let mut o = Oracle { cover, bound: bound.max(1), mu_h: Measure::empty(), memo: HashMap::new() };
        let h = o.cover.h();
        let mut best = Measure::empty();
        for (x, y) in closed_arcs(&o.cover) {
            let len = (y - x + 1) as usize;
            let mut cand = o.interval(x, len);
            cand.push((h - len) as u32);
            if cand > best {
                best = cand;
            }
        }
        o.mu_h = best;
        o
    }

    pub fn mu_h(&self) -> &Measure {
        &self.mu_h
    }

    fn interval(&mut self, lo: i64, len: usize) -> Measure {
        let h = self.cover.h() as i64;
        let key = (lo.rem_euclid(h), len);
        if let Some(m) = self.memo.get(&key) {
            return m.clone();
        }
        let sm = StringModule::from_interval(self.cover.clone(), key.0, key.0 + len as i64 - 1);
        let mut best = Measure::from_slice(&[1]);
        if len > 1 {
            best = Measure::empty();
            for (x, y) in sm.submodule_subintervals() {
                let sub_len = (y - x + 1) as usize;
                if sub_len == len {
                    continue;
                }
                let mut cand = self.interval(x, sub_len);
                cand.push((len - sub_len) as u32);
                if cand > best {
                    best = cand;
                }
            }
            if sm.classify() == ComponentClass::Preinjective && !self.mu_h.is_empty() {
                let hu = h as usize;
                for q in 1..=len / hu {
                    let r = len - q * hu;
                    if r == 0 {
                        continue;
                    }
                    let mut cand = concat_power(&self.mu_h, &Measure::from_slice(&[hu as u32]), q - 1);
                    cand.push(r as u32);
                    if cand > best {
                        best = cand;
                    }
                }
            }
        }
        self.memo.insert(key, best.clone());
        best
    }

    /// Oracle value for a string module of this cover.
    pub fn string_measure(&mut self, sm: &StringModule) -> Result<Measure, GrError> {
        if sm.dim() > self.bound {
            return Err(GrError::BoundExceeded { dim: sm.dim(), bound: self.bound });
        }
        Ok(self.interval(sm.lo(), sm.dim()))
    }

    /// Best measure over chains whose last proper step is a string submodule,
    /// ignoring the direct band candidates of the module itself.
    pub fn string_chain_measure(&mut self, sm: &StringModule) -> Measure {
        let len = sm.dim();
        if len == 1 {
            return Measure::from_slice(&[1]);
        }
        let mut best = Measure::empty();
        for (x, y) in sm.submodule_subintervals() {
            let sub_len = (y - x + 1) as usize;
            if sub_len == len {
                continue;
            }
            let mut cand = self.interval(x, sub_len);
            cand.push((len - sub_len) as u32);
            if cand > best {
                best = cand;
            }
        }
        best
    }

    pub fn measure(&mut self, m: &Module) -> Result<Measure, GrError> {
        match m {
            Module::String(sm) => self.string_measure(sm),
            Module::Homogeneous { q, .. } => {
                let h = self.cover.h();
                if h * q > self.bound.max(h) {
                    return Err(GrError::BoundExceeded { dim: h * q, bound: self.bound });
                }
                let mut m = self.mu_h.clone();
                for _ in 1..*q {
                    m.push(h as u32);
                }
                Ok(m)
            }
        }
    }
}

/// One-shot oracle evaluation with the default bound.
pub fn oracle_measure(m: &Module) -> Result<Measure, GrError> {
    Oracle::new(m.cover().clone(), DEFAULT_ORACLE_BOUND).measure(m)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PeriodKind {
    #[serde(rename = "R")]
    Right,
    #[serde(rename = "L")]
    Left,
    #[serde(rename = "h")]
    Homogeneous,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IpfDecomposition {
    pub init: Measure,
    #[serde(rename = "period")]
    pub per: Measure,
    pub mult: usize,
    pub fin: Measure,
    #[serde(skip)]
    pub kind: Option<PeriodKind>,
}

impl IpfDecomposition {
    /// Waist-free part `init . fin`.
    pub fn wf(&self) -> Measure {
        self.init.concat(&self.fin)
    }

    pub fn reconstruct(&self) -> Measure {
        concat_power(&self.init, &self.per, self.mult).concat(&self.fin)
    }

    pub fn within_bounds(&self, s: usize, t: usize) -> bool {
        self.init.len() < s + t && self.fin.len() + 2 <= s + t
    }
}

fn run_length(m: &[u32], at: usize, block: &[u32]) -> usize {
    let mut k = 0;
    while m.len() >= at + (k + 1) * block.len() && &m[at + k * block.len()..at + (k + 1) * block.len()] == block {
        k += 1;
    }
    k
}

/// Splits `m` at the earliest full occurrence of `R`, `L` or `(h)`.
pub fn ipf_decompose(m: &Measure, hooks: &HookSystem) -> Result<IpfDecomposition, GrError> {
    let h = hooks.left.iter().sum::<u32>();
    let blocks = [
        (PeriodKind::Right, hooks.right.clone()),
        (PeriodKind::Left, hooks.left.clone()),
        (PeriodKind::Homogeneous, vec![h]),
    ];
    let e = m.entries();
    for at in 0..e.len() {
        let mut best: Option<(usize, PeriodKind, &Vec<u32>)> = None;
        for (kind, block) in &blocks {
            let k = run_length(e, at, block);
            if k > 0 && best.is_none_or(|(cov, _, _)| k * block.len() > cov) {
                best = Some((k * block.len(), *kind, block));
            }
        }
        if let Some((cov, kind, block)) = best {
            return Ok(IpfDecomposition {
                init: Measure::from_slice(&e[..at]),
                per: Measure::from_slice(block),
                mult: cov / block.len(),
                fin: Measure::from_slice(&e[at + cov..]),
                kind: Some(kind),
            });
        }
    }
    Err(GrError::NoPeriodicPart(m.to_string()))
}

/// Smallest member of the family of `sm` with dimension at least `3h`, and
/// how many steps of `h` separate it from `sm`.
pub fn family_representative(sm: &StringModule) -> (StringModule, usize) {
    let h = sm.h();
    let steps = if sm.dim() >= 3 * h { 0 } else { (3 * h - sm.dim()).div_ceil(h) };
    (sm.sub(sm.lo(), sm.hi() + (steps * h) as i64), steps)
}

/// IPF parts of a module; small modules take `init`, `per` and `fin` from a
/// large member of their family.
pub fn module_ipf(m: &Module) -> Result<IpfDecomposition, GrError> {
    let hooks = m.cover().hooks().clone();
    match m {
        Module::Homogeneous { cover, q } => {
            let steps = 3usize.saturating_sub(*q);
            let rep = Module::Homogeneous { cover: cover.clone(), q: q + steps };
            let mut d = ipf_decompose(&gr_measure(&rep), &hooks)?;
            d.mult = d.mult.saturating_sub(steps);
            Ok(d)
        }
        Module::String(sm) => {
            let (rep, steps) = family_representative(sm);
            let mut d = ipf_decompose(&gr_measure(&Module::String(rep)), &hooks)?;
            d.mult = d.mult.saturating_sub(steps);
            Ok(d)
        }
    }
}

/// IPF parts of the comeasure, taken over the opposite quiver.
pub fn module_coipf(m: &Module) -> Result<IpfDecomposition, GrError> {
    module_ipf(&m.dual())
}

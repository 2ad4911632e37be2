//! Families, rays and corays, exceptional and homogeneous tubes, and the
//! Auslander-Reiten meshes inside them.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grcompute::Module;
use crate::quiver::Cover;
use crate::strings::{ComponentClass, Side, StringError, StringModule};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TubeError {
    #[error("{0} is preinjective: no irreducible monomorphism starts there")]
    NoMonoStep(String),
    #[error("{0} is preprojective: no irreducible epimorphism ends there")]
    NoEpiStep(String),
    #[error("{0} admits steps on both sides; a side must be given")]
    SideRequired(String),
    #[error("{0} lies on the mouth of its tube")]
    AtMouth(String),
    #[error("depth must be at least 1")]
    ZeroDepth,
    #[error("mouth of the {kind} tube has total dimension {got}, expected {want}")]
    MouthDimension { kind: TubeKind, got: usize, want: usize },
    #[error(transparent)]
    String(#[from] StringError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TubeKind {
    Left,
    Right,
    Homogeneous,
}

impl TubeKind {
    pub fn class(self) -> ComponentClass {
        match self {
            TubeKind::Left => ComponentClass::RegularLeftTube,
            TubeKind::Right => ComponentClass::RegularRightTube,
            TubeKind::Homogeneous => ComponentClass::HomogeneousRegular,
        }
    }
}

impl fmt::Display for TubeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TubeKind::Left => "left",
            TubeKind::Right => "right",
            TubeKind::Homogeneous => "homogeneous",
        })
    }
}

/// All modules with the same string type and component class, or the
/// homogeneous modules `H[1], H[2], ...`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Family {
    String { cover: Arc<Cover>, lo: i64, first_dim: usize },
    Homogeneous { cover: Arc<Cover> },
}

impl Family {
    pub fn cover(&self) -> &Arc<Cover> {
        match self {
            Family::String { cover, .. } | Family::Homogeneous { cover } => cover,
        }
    }

    /// The `k`-th member (0-based), ordered by dimension.
    pub fn member(&self, k: usize) -> Module {
        match self {
            Family::String { cover, lo, first_dim } => {
                let dim = first_dim + k * cover.h();
                Module::String(StringModule::from_interval(cover.clone(), *lo, lo + dim as i64 - 1))
            }
            Family::Homogeneous { cover } => Module::Homogeneous { cover: cover.clone(), q: k + 1 },
        }
    }

    pub fn members(&self, n: usize) -> Vec<Module> {
        (0..n).map(|k| self.member(k)).collect()
    }

    /// First member of dimension at least `dim`.
    pub fn member_at_least(&self, dim: usize) -> Module {
        let h = self.cover().h();
        let first = match self {
            Family::String { first_dim, .. } => *first_dim,
            Family::Homogeneous { .. } => h,
        };
        self.member(dim.saturating_sub(first).div_ceil(h))
    }

    /// `n` consecutive members, starting with the first of dimension at least `dim`.
    pub fn members_from(&self, dim: usize, n: usize) -> Vec<Module> {
        let h = self.cover().h();
        let start = self.member_at_least(dim).dim();
        (0..n).map(|k| self.member_at_least(start + k * h)).collect()
    }

    pub fn class(&self) -> ComponentClass {
        self.member(0).classify()
    }

    pub fn name(&self) -> String {
        match self {
            Family::String { cover, lo, first_dim } => {
                format!("{}{}_*", cover.label(*lo), cover.label(lo + *first_dim as i64 - 1))
            }
            Family::Homogeneous { .. } => "H".to_string(),
        }
    }

    /// The family of the dual modules over the opposite quiver.
    pub fn dual(&self) -> Family {
        family_of(&self.member(0).dual())
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

pub fn family_of(m: &Module) -> Family {
    match m {
        Module::String(sm) => {
            let h = sm.h();
            Family::String { cover: sm.cover().clone(), lo: sm.lo(), first_dim: (sm.dim() - 1) % h + 1 }
        }
        Module::Homogeneous { cover, .. } => Family::Homogeneous { cover: cover.clone() },
    }
}

/// Every string family of the quiver (there are `h^2`).
pub fn string_families(cover: &Arc<Cover>) -> Vec<Family> {
    let h = cover.h();
    let mut out = Vec::with_capacity(h * h);
    for lo in 0..h as i64 {
        for first_dim in 1..=h {
            out.push(Family::String { cover: cover.clone(), lo, first_dim });
        }
    }
    out
}

pub fn families_of_class(cover: &Arc<Cover>, class: ComponentClass) -> Vec<Family> {
    string_families(cover).into_iter().filter(|f| f.class() == class).collect()
}

/// The irreducible monomorphism leaving `sm` inside its component.
pub fn ray_successor(sm: &StringModule, side: Option<Side>) -> Result<StringModule, TubeError> {
    match sm.classify() {
        ComponentClass::Preinjective => Err(TubeError::NoMonoStep(sm.name())),
        ComponentClass::RegularRightTube => Ok(sm.add_hook(Side::Right)?),
        ComponentClass::RegularLeftTube => Ok(sm.add_hook(Side::Left)?),
        _ => match side {
            Some(s) => Ok(sm.add_hook(s)?),
            None => Err(TubeError::SideRequired(sm.name())),
        },
    }
}

/// The target of the irreducible epimorphism starting at `sm`.
pub fn coray_predecessor(sm: &StringModule, side: Option<Side>) -> Result<StringModule, TubeError> {
    let step = |s: Side| match sm.delete_cohook(s) {
        Err(StringError::Vanishes(_)) => Err(TubeError::AtMouth(sm.name())),
        other => Ok(other?),
    };
    match sm.classify() {
        ComponentClass::Preprojective => Err(TubeError::NoEpiStep(sm.name())),
        ComponentClass::RegularRightTube => step(Side::Left),
        ComponentClass::RegularLeftTube => step(Side::Right),
        _ => match side {
            Some(s) => step(s),
            None => Err(TubeError::SideRequired(sm.name())),
        },
    }
}

/// A tube of the Auslander-Reiten quiver. Cell `(i, j)` is the module of
/// quasi-length `j` whose ray starts at mouth module `i`; `i` may be any
/// integer and is read modulo the rank with the matching period shift.
#[derive(Debug, Clone)]
pub struct Tube {
    cover: Arc<Cover>,
    kind: TubeKind,
    /// `(lo, hi)` of the mouth modules, sorted by `lo` in `[0, h)`.
    blocks: Vec<(i64, i64)>,
    depth: usize,
}

impl Tube {
    pub fn kind(&self) -> TubeKind {
        self.kind
    }

    pub fn cover(&self) -> &Arc<Cover> {
        &self.cover
    }

    pub fn rank(&self) -> usize {
        self.blocks.len().max(1)
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    fn block(&self, i: i64) -> (i64, i64) {
        let r = self.blocks.len() as i64;
        let h = self.cover.h() as i64;
        let (lo, hi) = self.blocks[i.rem_euclid(r) as usize];
        let off = i.div_euclid(r) * h;
        (lo + off, hi + off)
    }

    pub fn cell(&self, i: i64, j: usize) -> Module {
        assert!(j >= 1, "quasi-length starts at 1");
        let j = j as i64;
        let (lo, hi) = match self.kind {
            TubeKind::Homogeneous => return Module::Homogeneous { cover: self.cover.clone(), q: j as usize },
            TubeKind::Right => (self.block(i).0, self.block(i + j - 1).1),
            TubeKind::Left => (self.block(i - j + 1).0, self.block(i).1),
        };
        Module::String(StringModule::from_interval(self.cover.clone(), lo, hi))
    }

    pub fn mouth(&self) -> Vec<Module> {
        (0..self.rank() as i64).map(|i| self.cell(i, 1)).collect()
    }

    /// Rows by quasi-length, mouth first.
    pub fn grid(&self) -> Vec<Vec<Module>> {
        (1..=self.depth).map(|j| (0..self.rank() as i64).map(|i| self.cell(i, j)).collect()).collect()
    }

    /// Offset of the mouth index between a cell and its coray predecessor.
    fn tau_step(&self) -> i64 {
        match self.kind {
            TubeKind::Left => -1,
            _ => 1,
        }
    }

    /// Cells of the ray starting at mouth module `i`.
    pub fn ray(&self, i: i64, len: usize) -> Vec<Module> {
        (1..=len).map(|j| self.cell(i, j)).collect()
    }

    /// Cells of the coray ending at mouth module `e`, listed from the mouth upward.
    pub fn coray(&self, e: i64, len: usize) -> Vec<Module> {
        let d = self.tau_step();
        (0..len).map(|k| self.cell(e - d * k as i64, k + 1)).collect()
    }

    /// The `rank^2` families of the tube (one for homogeneous tubes).
    pub fn families(&self) -> Vec<Family> {
        let r = self.rank() as i64;
        if self.kind == TubeKind::Homogeneous {
            return vec![Family::Homogeneous { cover: self.cover.clone() }];
        }
        let mut out = Vec::new();
        for i in 0..r {
            for j in 1..=r as usize {
                out.push(family_of(&self.cell(i, j)));
            }
        }
        out
    }
}

/// Mouth modules of an exceptional tube: regular strings of dimension at
/// most `h` in the tube with no irreducible epimorphism to a smaller one.
fn mouth_blocks(cover: &Arc<Cover>, kind: TubeKind) -> Vec<(i64, i64)> {
    let h = cover.h() as i64;
    let mut out = Vec::new();
    for lo in 0..h {
        for dim in 1..=h {
            let sm = StringModule::from_interval(cover.clone(), lo, lo + dim - 1);
            if sm.classify() == kind.class() && matches!(coray_predecessor(&sm, None), Err(TubeError::AtMouth(_))) {
                out.push((sm.lo(), sm.hi()));
            }
        }
    }
    out
}

pub fn build_tube(cover: &Arc<Cover>, kind: TubeKind, depth: usize) -> Result<Tube, TubeError> {
    if depth == 0 {
        return Err(TubeError::ZeroDepth);
    }
    let blocks = if kind == TubeKind::Homogeneous { Vec::new() } else { mouth_blocks(cover, kind) };
    if kind != TubeKind::Homogeneous {
        let got: i64 = blocks.iter().map(|(lo, hi)| hi - lo + 1).sum();
        if got as usize != cover.h() {
            return Err(TubeError::MouthDimension { kind, got: got as usize, want: cover.h() });
        }
    }
    Ok(Tube { cover: cover.clone(), kind, blocks, depth })
}

/// `0 -> A -> B1 (+) B2 -> C -> 0`; `b2` is absent on the mouth.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArSequence {
    pub a: Module,
    pub b1: Module,
    pub b2: Option<Module>,
    pub c: Module,
}

impl ArSequence {
    pub fn dims_balance(&self) -> bool {
        self.a.dim() + self.c.dim() == self.b1.dim() + self.b2.as_ref().map_or(0, |m| m.dim())
    }
}

/// Meshes starting at quasi-lengths `1..=depth`.
pub fn ar_sequences(tube: &Tube, depth: usize) -> Vec<ArSequence> {
    let d = tube.tau_step();
    let mut out = Vec::new();
    for j in 1..=depth {
        for i in 0..tube.rank() as i64 {
            out.push(ArSequence {
                a: tube.cell(i, j),
                b1: tube.cell(i, j + 1),
                b2: (j > 1).then(|| tube.cell(i + d, j - 1)),
                c: tube.cell(i + d, j),
            });
        }
    }
    out
}

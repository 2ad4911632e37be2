//! String modules as intervals of the universal cover.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quiver::{Cover, Direction, QuiverSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StringError {
    #[error("unknown vertex label `{0}`")]
    UnknownLabel(String),
    #[error("dimension must be positive")]
    NonpositiveDim,
    #[error("no arrow enters the interval on the {0} side")]
    NoIncomingArrow(Side),
    #[error("no arrow leaves the interval on the {0} side")]
    NoOutgoingArrow(Side),
    #[error("deleting the cohook on the {0} side leaves nothing")]
    Vanishes(Side),
    #[error("malformed module address `{0}` (expected <label>:<dim>)")]
    BadAddress(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ComponentClass {
    Preprojective,
    Preinjective,
    RegularLeftTube,
    RegularRightTube,
    HomogeneousRegular,
}

impl ComponentClass {
    pub fn is_regular(self) -> bool {
        matches!(
            self,
            ComponentClass::RegularLeftTube | ComponentClass::RegularRightTube | ComponentClass::HomogeneousRegular
        )
    }

    pub fn swap_ends(self) -> Self {
        match self {
            ComponentClass::Preprojective => ComponentClass::Preinjective,
            ComponentClass::Preinjective => ComponentClass::Preprojective,
            other => other,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ComponentClass::Preprojective => "preprojective",
            ComponentClass::Preinjective => "preinjective",
            ComponentClass::RegularLeftTube => "left-tube",
            ComponentClass::RegularRightTube => "right-tube",
            ComponentClass::HomogeneousRegular => "homogeneous",
        }
    }
}

impl fmt::Display for ComponentClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The string module on the cover interval `[lo, hi]`, kept with
/// `lo` in `[0, h)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct StringModule {
    cover: Arc<Cover>,
    lo: i64,
    hi: i64,
}

impl fmt::Debug for StringModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}..{}]", self.name(), self.lo, self.hi)
    }
}

impl fmt::Display for StringModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl StringModule {
    /// Interval `[lo, hi]` of the normalized cover, shifted so that `lo` lies in `[0, h)`.
    pub fn from_interval(cover: Arc<Cover>, lo: i64, hi: i64) -> Self {
        assert!(lo <= hi, "empty interval");
        let h = cover.h() as i64;
        let shift = lo.div_euclid(h) * h;
        StringModule { cover, lo: lo - shift, hi: hi - shift }
    }

    pub fn cover(&self) -> &Arc<Cover> {
        &self.cover
    }

    pub fn quiver(&self) -> &QuiverSpec {
        self.cover.spec()
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }

    pub fn dim(&self) -> usize {
        (self.hi - self.lo + 1) as usize
    }

    pub fn h(&self) -> usize {
        self.cover.h()
    }

    pub fn name(&self) -> String {
        format!("{}{}_{}", self.cover.label(self.lo), self.cover.label(self.hi), self.dim())
    }

    /// Family key: labels of the two endpoints.
    pub fn string_type(&self) -> (String, String) {
        (self.cover.label(self.lo).to_string(), self.cover.label(self.hi).to_string())
    }

    pub fn classify(&self) -> ComponentClass {
        let left = self.cover.arrow(self.lo - 1);
        let right = self.cover.arrow(self.hi);
        match (left, right) {
            (Direction::Forward, Direction::Backward) => ComponentClass::Preprojective,
            (Direction::Backward, Direction::Forward) => ComponentClass::Preinjective,
            (Direction::Backward, Direction::Backward) => ComponentClass::RegularRightTube,
            (Direction::Forward, Direction::Forward) => ComponentClass::RegularLeftTube,
        }
    }

    /// Whether `[x, y]` (inside the interval) is closed under arrows of the interval.
    pub fn is_closed(&self, x: i64, y: i64) -> bool {
        debug_assert!(self.lo <= x && x <= y && y <= self.hi);
        (x == self.lo || self.cover.arrow(x - 1) == Direction::Forward)
            && (y == self.hi || self.cover.arrow(y) == Direction::Backward)
    }

    /// Positions that are sinks of the quiver restricted to the interval.
    pub fn sinks(&self) -> Vec<i64> {
        (self.lo..=self.hi).filter(|&x| self.is_closed(x, x)).collect()
    }

    /// All subintervals whose string modules are submodules.
    pub fn submodule_subintervals(&self) -> Vec<(i64, i64)> {
        let mut out = Vec::new();
        for x in self.lo..=self.hi {
            if x != self.lo && self.cover.arrow(x - 1) != Direction::Forward {
                continue;
            }
            for y in x..=self.hi {
                if y == self.hi || self.cover.arrow(y) == Direction::Backward {
                    out.push((x, y));
                }
            }
        }
        out
    }

    pub fn sub(&self, x: i64, y: i64) -> StringModule {
        StringModule::from_interval(self.cover.clone(), x, y)
    }

    /// Extends the string past the incoming arrow on `side`.
    pub fn add_hook(&self, side: Side) -> Result<StringModule, StringError> {
        let c = &self.cover;
        match side {
            Side::Right => {
                if c.arrow(self.hi) != Direction::Backward {
                    return Err(StringError::NoIncomingArrow(side));
                }
                let mut x = self.hi + 1;
                while c.arrow(x) == Direction::Forward {
                    x += 1;
                }
                Ok(self.sub(self.lo, x))
            }
            Side::Left => {
                if c.arrow(self.lo - 1) != Direction::Forward {
                    return Err(StringError::NoIncomingArrow(side));
                }
                let mut x = self.lo - 1;
                while c.arrow(x - 1) == Direction::Backward {
                    x -= 1;
                }
                Ok(self.sub(x, self.hi))
            }
        }
    }

    /// Removes the end segment on `side` that forms a submodule.
    pub fn delete_cohook(&self, side: Side) -> Result<StringModule, StringError> {
        let c = &self.cover;
        match side {
            Side::Left => {
                if c.arrow(self.lo - 1) != Direction::Backward {
                    return Err(StringError::NoOutgoingArrow(side));
                }
                let mut y = self.lo;
                while y < self.hi && c.arrow(y) == Direction::Forward {
                    y += 1;
                }
                if y >= self.hi {
                    return Err(StringError::Vanishes(side));
                }
                Ok(self.sub(y + 1, self.hi))
            }
            Side::Right => {
                if c.arrow(self.hi) != Direction::Forward {
                    return Err(StringError::NoOutgoingArrow(side));
                }
                let mut y = self.hi;
                while y > self.lo && c.arrow(y - 1) == Direction::Backward {
                    y -= 1;
                }
                if y <= self.lo {
                    return Err(StringError::Vanishes(side));
                }
                Ok(self.sub(self.lo, y - 1))
            }
        }
    }

    /// The dual module, as a string over the opposite quiver.
    pub fn dual(&self) -> StringModule {
        self.dual_in(Arc::new(self.cover.opposite()))
    }

    /// Like [`StringModule::dual`], reusing an already built opposite cover.
    pub fn dual_in(&self, op: Arc<Cover>) -> StringModule {
        debug_assert_eq!(op.spec(), &self.cover.spec().opposite());
        let (a, b) = (self.cover.to_raw(self.lo), self.cover.to_raw(self.hi));
        let (a, b) = (op.from_raw(a), op.from_raw(b));
        StringModule::from_interval(op, a.min(b), a.max(b))
    }

    /// Shift of the interval by whole periods.
    pub fn shifted(&self, periods: i64) -> (i64, i64) {
        let h = self.h() as i64;
        (self.lo + periods * h, self.hi + periods * h)
    }
}

/// The string of dimension `dim` whose left end is the vertex `left_label`.
pub fn make_string(cover: &Arc<Cover>, left_label: &str, dim: usize) -> Result<StringModule, StringError> {
    if dim == 0 {
        return Err(StringError::NonpositiveDim);
    }
    let lo = cover.position_of(left_label).ok_or_else(|| StringError::UnknownLabel(left_label.to_string()))?;
    Ok(StringModule::from_interval(cover.clone(), lo, lo + dim as i64 - 1))
}

/// Parses a `<label>:<dim>` address.
pub fn parse_address(cover: &Arc<Cover>, text: &str) -> Result<StringModule, StringError> {
    let (label, dim) = text.split_once(':').ok_or_else(|| StringError::BadAddress(text.to_string()))?;
    let dim: i64 = dim.trim().parse().map_err(|_| StringError::BadAddress(text.to_string()))?;
    if dim <= 0 {
        return Err(StringError::NonpositiveDim);
    }
    make_string(cover, label.trim(), dim as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::parse_quiver;

    fn cover(text: &str) -> Arc<Cover> {
        Arc::new(Cover::new(parse_quiver(text).unwrap()))
    }

    fn ex1() -> Arc<Cover> {
        cover("><<><,a,b,c,d,e")
    }

    fn ex2() -> Arc<Cover> {
        cover(">>><,a,d,c,b")
    }

    fn m(c: &Arc<Cover>, label: &str, dim: usize) -> StringModule {
        make_string(c, label, dim).unwrap()
    }

    #[test]
    fn naming() {
        let c = ex1();
        assert_eq!(m(&c, "c", 18).name(), "ce_18");
        assert_eq!(m(&c, "c", 1).name(), "cc_1");
        assert_eq!(m(&ex2(), "b", 1).name(), "bb_1");
        assert_eq!(make_string(&c, "z", 1), Err(StringError::UnknownLabel("z".into())));
        assert_eq!(make_string(&c, "a", 0), Err(StringError::NonpositiveDim));
        assert_eq!(parse_address(&c, "c:18").unwrap().name(), "ce_18");
        assert!(parse_address(&c, "c18").is_err());
    }

    #[test]
    fn classification() {
        let c = ex1();
        assert_eq!(m(&c, "c", 18).classify(), ComponentClass::RegularRightTube);
        assert_eq!(m(&c, "e", 3).classify(), ComponentClass::Preprojective);
        assert_eq!(m(&c, "a", 4).classify(), ComponentClass::Preinjective);
        assert_eq!(m(&ex2(), "b", 1).classify(), ComponentClass::Preprojective);
        for d in 1..30 {
            for l in ["a", "b", "c", "d", "e"] {
                let s = m(&c, l, d);
                let (lo, hi) = s.shifted(3);
                assert_eq!(s.sub(lo, hi).classify(), s.classify());
            }
        }
    }

    #[test]
    fn duality() {
        for c in [ex1(), ex2()] {
            for l in c.labels().to_vec() {
                for d in 1..=40 {
                    let s = m(&c, &l, d);
                    let ds = s.dual();
                    assert_eq!(ds.dim(), s.dim());
                    assert_eq!(ds.dual(), s);
                    let k = s.classify();
                    if k.is_regular() {
                        assert!(ds.classify().is_regular());
                    } else {
                        assert_eq!(ds.classify(), k.swap_ends());
                    }
                }
            }
        }
        let c = ex1();
        assert_eq!(m(&c, "e", 3).dual().classify(), ComponentClass::Preinjective);
        assert!(m(&c, "c", 18).dual().classify().is_regular());
    }

    #[test]
    fn hooks_and_cohooks() {
        let c = ex1();
        let ce13 = m(&c, "c", 13);
        let cb15 = ce13.add_hook(Side::Right).unwrap();
        assert_eq!(cb15.name(), "cb_15");
        let cc16 = cb15.add_hook(Side::Right).unwrap();
        assert_eq!(cc16.name(), "cc_16");
        assert_eq!(cc16.add_hook(Side::Right).unwrap().name(), "ce_18");
        assert_eq!(m(&c, "c", 18).add_hook(Side::Left), Err(StringError::NoIncomingArrow(Side::Left)));

        assert_eq!(m(&c, "c", 8).delete_cohook(Side::Left).unwrap().name(), "de_7");
        assert_eq!(m(&c, "c", 6).delete_cohook(Side::Left).unwrap().name(), "dc_5");
        let be3 = m(&c, "e", 3);
        assert_eq!(be3.name(), "eb_3");
        let b = m(&c, "b", 3);
        for s in [be3, b] {
            if s.classify() == ComponentClass::Preprojective {
                assert_eq!(s.delete_cohook(Side::Left), Err(StringError::NoOutgoingArrow(Side::Left)));
                assert_eq!(s.delete_cohook(Side::Right), Err(StringError::NoOutgoingArrow(Side::Right)));
            }
        }
        let ad4 = m(&c, "a", 4);
        assert_eq!(ad4.delete_cohook(Side::Left).unwrap().name(), "cd_2");
        assert_eq!(ad4.delete_cohook(Side::Right).unwrap().name(), "aa_1");
        assert_eq!(m(&c, "c", 1).delete_cohook(Side::Left), Err(StringError::Vanishes(Side::Left)));
    }

    #[test]
    fn subintervals() {
        let c = ex1();
        let eb3 = m(&c, "e", 3);
        let subs: Vec<String> = eb3.submodule_subintervals().into_iter().map(|(x, y)| eb3.sub(x, y).name()).collect();
        let mut subs = subs;
        subs.sort();
        assert_eq!(subs, vec!["bb_1", "eb_3", "ee_1"]);
        let simple = m(&c, "a", 1);
        assert_eq!(simple.submodule_subintervals(), vec![(0, 0)]);
    }

    /// Exhaustive closure check: no arrow leaves a returned subinterval
    /// towards the rest of the interval, and every closed subinterval is returned.
    #[test]
    fn subintervals_match_brute_force() {
        for c in [ex1(), ex2(), cover("><<>><<<")] {
            for l in c.labels().to_vec() {
                for d in 1..=25 {
                    let s = m(&c, &l, d);
                    let got = s.submodule_subintervals();
                    let mut want = Vec::new();
                    for x in s.lo()..=s.hi() {
                        for y in x..=s.hi() {
                            let leaves = (s.lo()..s.hi()).any(|i| {
                                let (src, tgt) = match c.arrow(i) {
                                    Direction::Forward => (i, i + 1),
                                    Direction::Backward => (i + 1, i),
                                };
                                (x..=y).contains(&src) && !(x..=y).contains(&tgt)
                            });
                            if !leaves {
                                want.push((x, y));
                            }
                        }
                    }
                    assert_eq!(got, want, "{s:?}");
                    if d == 18 && l == "c" && c.h() == 5 {
                        assert!(got.len() < 171);
                    }
                }
            }
        }
    }
}

//! The rhombic picture: coordinates, limits and colimits of families, the
//! staircase and waist-free orderings, and checks of the parallelogram and
//! tiling statements.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::artubes::{ar_sequences, families_of_class, string_families, ArSequence, Family, Tube, TubeKind};
use crate::grcompute::{gr_comeasure, gr_measure, ipf_decompose, GrError, IpfDecomposition, Module};
use crate::measure::{canonical_periodic, cmp_measure, cmp_periodic, e_value, Measure, PeriodicMeasure, Sequence};
use crate::quiver::{widest_extrema_report, Cover};
use crate::strings::ComponentClass;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RhombicError {
    #[error("families {0} and {1} have different limits and are not staircase-comparable")]
    LimitMismatch(String, String),
    #[error("family {0} is not regular")]
    NotRegular(String),
    #[error("preprojective families do not share one limit: {0} vs {1}")]
    TakeoffMismatch(String, String),
    #[error("chain along {0} is not strictly monotone")]
    NotMonotone(String),
    #[error("chain length must be at least 2")]
    ChainTooShort,
    #[error("staircase depth must be at least 5")]
    DepthTooSmall,
    #[error("no {0} family exists for this quiver")]
    NoFamily(String),
    #[error(transparent)]
    Gr(#[from] GrError),
}

/// Coordinates `(mu, mu*)` of a module, with their exact e-values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RhombicPoint {
    pub module: String,
    pub mu: Measure,
    pub mustar: Measure,
    pub x: BigRational,
    pub y: BigRational,
}

pub fn rhombic_point(m: &Module) -> RhombicPoint {
    let mu = gr_measure(m);
    let mustar = gr_comeasure(m);
    let x = e_value(&Sequence::Finite(mu.clone()));
    let y = e_value(&Sequence::Finite(mustar.clone()));
    RhombicPoint { module: m.name(), mu, mustar, x, y }
}

/// IPF parts of a family, read off its smallest member of dimension `>= 3h`.
pub fn family_ipf(f: &Family) -> Result<IpfDecomposition, GrError> {
    let m = f.member_at_least(3 * f.cover().h());
    ipf_decompose(&gr_measure(&m), f.cover().hooks())
}

/// IPF parts of the comeasures of a family.
pub fn family_coipf(f: &Family) -> Result<IpfDecomposition, GrError> {
    family_ipf(&f.dual())
}

/// Limit of the measures of the family members: `init . per^inf`.
pub fn gr_limit(f: &Family) -> Result<PeriodicMeasure, GrError> {
    let d = family_ipf(f)?;
    Ok(canonical_periodic(&d.init, &d.per).expect("hook blocks are nonempty"))
}

pub fn gr_colimit(f: &Family) -> Result<PeriodicMeasure, GrError> {
    gr_limit(&f.dual())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Approach {
    FromLeft,
    FromRight,
    FromBelow,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RhombicLimit {
    pub family: String,
    pub mu_limit: PeriodicMeasure,
    pub mustar_limit: PeriodicMeasure,
    pub approach: Option<Approach>,
}

/// Approach direction from the sign pattern of `fin` against `per`.
pub fn approach_of(ipf: &IpfDecomposition, coipf: &IpfDecomposition) -> Option<Approach> {
    match (ipf.fin < ipf.per, coipf.fin < coipf.per) {
        (true, false) => Some(Approach::FromLeft),
        (false, true) => Some(Approach::FromRight),
        (true, true) => Some(Approach::FromBelow),
        (false, false) => None,
    }
}

pub fn rhombic_limit(f: &Family) -> Result<RhombicLimit, GrError> {
    let d = family_ipf(f)?;
    let dd = family_coipf(f)?;
    Ok(RhombicLimit {
        family: f.name(),
        mu_limit: canonical_periodic(&d.init, &d.per).expect("nonempty"),
        mustar_limit: canonical_periodic(&dd.init, &dd.per).expect("nonempty"),
        approach: approach_of(&d, &dd),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistinguishedLimits {
    pub takeoff: PeriodicMeasure,
    pub homogeneous: PeriodicMeasure,
    pub landing: PeriodicMeasure,
    pub takeoff_star: PeriodicMeasure,
    pub homogeneous_star: PeriodicMeasure,
    pub landing_star: PeriodicMeasure,
    /// Limits of all preinjective families, by family name.
    pub preinjective_limits: Vec<(String, PeriodicMeasure)>,
}

fn cmp_pm(a: &PeriodicMeasure, b: &PeriodicMeasure) -> Ordering {
    cmp_periodic(&Sequence::Periodic(a.clone()), &Sequence::Periodic(b.clone()))
}

/// Take-off, homogeneous and landing limits, then every preinjective limit.
type AxisLimits = (PeriodicMeasure, PeriodicMeasure, PeriodicMeasure, Vec<(String, PeriodicMeasure)>);

fn axis_limits(cover: &Arc<Cover>) -> Result<AxisLimits, RhombicError> {
    let mut takeoff: Option<(String, PeriodicMeasure)> = None;
    for f in families_of_class(cover, ComponentClass::Preprojective) {
        let lim = gr_limit(&f)?;
        match &takeoff {
            None => takeoff = Some((f.name(), lim)),
            Some((name, t)) if *t != lim => {
                return Err(RhombicError::TakeoffMismatch(format!("{name}: {t}"), format!("{}: {lim}", f.name())))
            }
            _ => {}
        }
    }
    let (_, takeoff) = takeoff.ok_or_else(|| RhombicError::NoFamily("preprojective".into()))?;
    let homogeneous = gr_limit(&Family::Homogeneous { cover: cover.clone() })?;
    let mut pre = Vec::new();
    for f in families_of_class(cover, ComponentClass::Preinjective) {
        pre.push((f.name(), gr_limit(&f)?));
    }
    let landing = pre
        .iter()
        .map(|(_, l)| l)
        .max_by(|a, b| cmp_pm(a, b))
        .cloned()
        .ok_or_else(|| RhombicError::NoFamily("preinjective".into()))?;
    Ok((takeoff, homogeneous, landing, pre))
}

pub fn distinguished_limits(cover: &Arc<Cover>) -> Result<DistinguishedLimits, RhombicError> {
    let (takeoff, homogeneous, landing, preinjective_limits) = axis_limits(cover)?;
    let op = Arc::new(cover.opposite());
    let (takeoff_star, homogeneous_star, landing_star, _) = axis_limits(&op)?;
    Ok(DistinguishedLimits {
        takeoff,
        homogeneous,
        landing,
        takeoff_star,
        homogeneous_star,
        landing_star,
        preinjective_limits,
    })
}

/// Distinct limits of all families (strings and homogeneous), in increasing order.
pub fn all_limits(cover: &Arc<Cover>) -> Result<Vec<PeriodicMeasure>, GrError> {
    let mut out: Vec<PeriodicMeasure> = Vec::new();
    let mut fams = string_families(cover);
    fams.push(Family::Homogeneous { cover: cover.clone() });
    for f in fams {
        let l = gr_limit(&f)?;
        if !out.contains(&l) {
            out.push(l);
        }
    }
    out.sort_by(cmp_pm);
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StairOrder {
    Less,
    Greater,
    Equal,
    Incomparable,
}

impl fmt::Display for StairOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

struct Track {
    mu: Vec<Measure>,
    mustar: Vec<Measure>,
}

fn track(f: &Family, n: usize) -> Track {
    let members = f.members(n);
    Track { mu: members.iter().map(gr_measure).collect(), mustar: members.iter().map(gr_comeasure).collect() }
}

/// `b <=_stair a`: for the tail members `n` of `a` there is `l` with
/// `mu_b[l] <= mu_a[n] < mu_b[l+1]` and `mu*_b[l] <= mu*_a[n]`.
fn stair_le(b: &Track, a: &Track, depth: usize) -> bool {
    (depth / 2..depth).all(|n| {
        let x = &a.mu[n];
        (0..b.mu.len() - 1).any(|l| b.mu[l] <= *x && *x < b.mu[l + 1] && b.mustar[l] <= a.mustar[n])
    })
}

/// Staircase comparison of two families on their first `depth` members.
pub fn staircase_cmp(fa: &Family, fb: &Family, depth: usize) -> Result<StairOrder, RhombicError> {
    if depth < 5 {
        return Err(RhombicError::DepthTooSmall);
    }
    let ta = track(fa, depth + 2);
    let tb = track(fb, depth + 2);
    let (ab, ba) = (stair_le(&tb, &ta, depth), stair_le(&ta, &tb, depth));
    let ord = match (ab, ba) {
        (true, true) => StairOrder::Equal,
        (false, true) => StairOrder::Less,
        (true, false) => StairOrder::Greater,
        (false, false) => StairOrder::Incomparable,
    };
    if ord == StairOrder::Incomparable && gr_limit(fa)? != gr_limit(fb)? {
        return Err(RhombicError::LimitMismatch(fa.name(), fb.name()));
    }
    Ok(ord)
}

/// Compares the waist-free parts `init* . fin*` of the comeasures.
pub fn wf_cmp(fa: &Family, fb: &Family) -> Result<Ordering, RhombicError> {
    for f in [fa, fb] {
        if !f.class().is_regular() {
            return Err(RhombicError::NotRegular(f.name()));
        }
    }
    Ok(cmp_measure(&family_coipf(fa)?.wf(), &family_coipf(fb)?.wf()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParallelogramReport {
    pub vertices: [RhombicLimit; 4],
    pub parallel_sides: bool,
    pub degenerate: bool,
    pub nondegenerate_wf: bool,
    pub wf_vertices: [(Measure, Measure); 4],
}

/// Checks the limits of an AR sequence `A, B1, B2, C` (B2 present).
pub fn parallelogram_check(seq: &ArSequence) -> Result<ParallelogramReport, GrError> {
    use crate::artubes::family_of;
    let b2 = seq.b2.clone().unwrap_or_else(|| seq.a.clone());
    let fams = [family_of(&seq.a), family_of(&seq.b1), family_of(&b2), family_of(&seq.c)];
    let lim: Vec<RhombicLimit> = fams.iter().map(rhombic_limit).collect::<Result<_, _>>()?;
    let [a, b1, b2l, c] = [&lim[0], &lim[1], &lim[2], &lim[3]];
    let parallel_sides = a.mu_limit == b1.mu_limit
        && b2l.mu_limit == c.mu_limit
        && a.mustar_limit == b2l.mustar_limit
        && b1.mustar_limit == c.mustar_limit;
    let degenerate = a.mu_limit == b2l.mu_limit || a.mustar_limit == b1.mustar_limit;
    let mut wf = Vec::new();
    for f in &fams {
        wf.push((family_ipf(f)?.wf(), family_coipf(f)?.wf()));
    }
    let nondegenerate_wf =
        wf[0].0 != wf[2].0 && wf[0].1 != wf[1].1 && (0..4).all(|i| (i + 1..4).all(|j| wf[i] != wf[j]));
    Ok(ParallelogramReport {
        vertices: [lim[0].clone(), lim[1].clone(), lim[2].clone(), lim[3].clone()],
        parallel_sides,
        degenerate,
        nondegenerate_wf,
        wf_vertices: [wf[0].clone(), wf[1].clone(), wf[2].clone(), wf[3].clone()],
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TilingStatus {
    Tiled,
    NotTiled,
    NotApplicable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WalkDirection {
    Ascending,
    Descending,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TilingReport {
    /// Tube families ordered by `(wf, wf*)`.
    pub wf_order: Vec<String>,
    pub ray_orders: Vec<Vec<String>>,
    pub coray_orders: Vec<Vec<String>>,
    pub ray_direction: Option<WalkDirection>,
    pub coray_direction: Option<WalkDirection>,
    pub tiled: TilingStatus,
}

/// Direction in which `keys`, read cyclically, is sorted without ties.
fn cyclic_direction(keys: &[Measure]) -> Option<WalkDirection> {
    let n = keys.len();
    if n < 2 {
        return Some(WalkDirection::Ascending);
    }
    let descents = (0..n).filter(|&i| keys[i] > keys[(i + 1) % n]).count();
    let ascents = (0..n).filter(|&i| keys[i] < keys[(i + 1) % n]).count();
    if ascents + descents != n {
        None
    } else if descents == 1 {
        Some(WalkDirection::Ascending)
    } else if ascents == 1 {
        Some(WalkDirection::Descending)
    } else {
        None
    }
}

/// Whether the limit values along a walk never contradict the waist-free order.
fn limits_consistent(limits: &[PeriodicMeasure], keys: &[Measure]) -> bool {
    let n = keys.len();
    (0..n).all(|i| (0..n).all(|j| !(keys[i] < keys[j] && cmp_pm(&limits[i], &limits[j]) == Ordering::Greater)))
}

/// Reads the family sequence along every ray and coray of an exceptional
/// tube and compares it with the waist-free order of the families.
pub fn tiling_report(tube: &Tube, depth: usize) -> Result<TilingReport, GrError> {
    use crate::artubes::family_of;
    let r = tube.rank();
    let fams = tube.families();
    let mut keyed = Vec::new();
    for f in &fams {
        keyed.push((family_ipf(f)?.wf(), family_coipf(f)?.wf(), f.name()));
    }
    keyed.sort();
    let wf_order: Vec<String> = keyed.into_iter().map(|(_, _, n)| n).collect();

    let applicable = tube.kind() != TubeKind::Homogeneous
        && widest_extrema_report(tube.cover().spec(), (3 * tube.cover().h()).max(depth))
            .map(|rep| rep.unique_valley && rep.unique_hill)
            .unwrap_or(false);

    let len = depth.max(2 * r);
    let mut ok = true;
    let mut ray_dir = None;
    let mut coray_dir = None;
    let mut ray_orders = Vec::new();
    let mut coray_orders = Vec::new();
    for i in 0..r as i64 {
        for (walk, coray) in [(tube.ray(i, len), false), (tube.coray(i, len), true)] {
            let fams: Vec<Family> = walk.iter().map(family_of).collect();
            // the walk repeats with period equal to the rank
            ok &= (r..fams.len()).all(|k| fams[k] == fams[k - r]);
            let period = &fams[..r];
            let mut keys = Vec::new();
            let mut limits = Vec::new();
            for f in period {
                if coray {
                    keys.push(family_ipf(f)?.wf());
                    limits.push(gr_limit(f)?);
                } else {
                    keys.push(family_coipf(f)?.wf());
                    limits.push(gr_colimit(f)?);
                }
            }
            let dir = cyclic_direction(&keys);
            ok &= dir.is_some() && limits_consistent(&limits, &keys);
            let slot = if coray { &mut coray_dir } else { &mut ray_dir };
            match (*slot, dir) {
                (None, d) => *slot = d,
                (Some(a), Some(b)) if a != b => ok = false,
                _ => {}
            }
            let names = period.iter().map(|f| f.name()).collect();
            if coray {
                coray_orders.push(names);
            } else {
                ray_orders.push(names);
            }
        }
    }
    let tiled = if !applicable {
        TilingStatus::NotApplicable
    } else if ok {
        TilingStatus::Tiled
    } else {
        TilingStatus::NotTiled
    };
    Ok(TilingReport { wf_order, ray_orders, coray_orders, ray_direction: ray_dir, coray_direction: coray_dir, tiled })
}

/// Parallelogram reports for every mesh with two middle terms.
pub fn parallelogram_sweep(tube: &Tube, depth: usize) -> Result<Vec<(ArSequence, ParallelogramReport)>, GrError> {
    ar_sequences(tube, depth)
        .into_iter()
        .filter(|s| s.b2.is_some())
        .map(|s| parallelogram_check(&s).map(|r| (s, r)))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ChainClass {
    Preprojective,
    Regular,
    Preinjective,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainWitness {
    pub modules: Vec<String>,
    pub measures: Vec<Measure>,
    pub direction: WalkDirection,
}

/// A strictly monotone chain of `k` measures (comeasures when `starred`):
/// along a family (from dimension `2h` on) for preprojective and preinjective
/// modules, along a ray (measures) or a coray (comeasures) of the right tube
/// for regular ones. The direction of a comeasure chain refers to F*.
pub fn chain_witness(
    cover: &Arc<Cover>,
    class: ChainClass,
    starred: bool,
    k: usize,
) -> Result<ChainWitness, RhombicError> {
    if k < 2 {
        return Err(RhombicError::ChainTooShort);
    }
    let modules: Vec<Module> = match class {
        ChainClass::Preprojective | ChainClass::Preinjective => {
            let cc = if class == ChainClass::Preprojective {
                ComponentClass::Preprojective
            } else {
                ComponentClass::Preinjective
            };
            let f = families_of_class(cover, cc)
                .into_iter()
                .next()
                .ok_or_else(|| RhombicError::NoFamily(format!("{cc}")))?;
            f.members_from(2 * cover.h(), k)
        }
        ChainClass::Regular => {
            let tube = crate::artubes::build_tube(cover, TubeKind::Right, k + 1)
                .map_err(|e| RhombicError::NoFamily(e.to_string()))?;
            if starred {
                tube.coray(0, k)
            } else {
                tube.ray(0, k)
            }
        }
    };
    let measures: Vec<Measure> =
        modules.iter().map(|m| if starred { gr_comeasure(m) } else { gr_measure(m) }).collect();
    // comeasures are ordered in F*, the opposite of F
    let (mut up, mut down) = (measures.windows(2).all(|w| w[0] < w[1]), measures.windows(2).all(|w| w[0] > w[1]));
    if starred {
        std::mem::swap(&mut up, &mut down);
    }
    let names: Vec<String> = modules.iter().map(|m| m.name()).collect();
    let direction = match (up, down) {
        (true, _) => WalkDirection::Ascending,
        (_, true) => WalkDirection::Descending,
        _ => return Err(RhombicError::NotMonotone(names.join(","))),
    };
    Ok(ChainWitness { modules: names, measures, direction })
}

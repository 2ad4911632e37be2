//! Serializable reports. Field order is the JSON key order.

use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{de::DeserializeOwned, Deserialize, Serialize};

use rhombic_core::artubes::{build_tube, family_of, string_families, Family, Tube, TubeKind};
use rhombic_core::grcompute::{
    gr_measure_report, module_coipf, module_ipf, Branch, GreedyRun, IpfDecomposition, Module, Oracle,
};
use rhombic_core::measure::{e_value, Measure, PeriodicMeasure, Sequence};
use rhombic_core::quiver::{Cover, CoverReport};
use rhombic_core::rhombic::{
    all_limits, approach_of, distinguished_limits, rhombic_limit, tiling_report, Approach, TilingStatus, WalkDirection,
};
use rhombic_core::strings::ComponentClass;

use crate::CliError;

/// Exact rational as decimal strings.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rational {
    pub num: String,
    pub den: String,
}

impl From<&BigRational> for Rational {
    fn from(r: &BigRational) -> Self {
        Rational { num: r.numer().to_string(), den: r.denom().to_string() }
    }
}

impl Rational {
    pub fn to_big(&self) -> BigRational {
        let n = BigInt::from_str(&self.num).expect("numerator");
        let d = BigInt::from_str(&self.den).expect("denominator");
        BigRational::new(n, d)
    }
}

pub fn to_json<T: Serialize>(report: &T) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
    s.push('\n');
    s
}

pub fn from_json<T: DeserializeOwned>(text: &str) -> serde_json::Result<T> {
    serde_json::from_str(text)
}

fn e_finite(m: &Measure) -> Rational {
    (&e_value(&Sequence::Finite(m.clone()))).into()
}

fn e_periodic(p: &PeriodicMeasure) -> Rational {
    (&e_value(&Sequence::Periodic(p.clone()))).into()
}

/// IPF parts `{init, period, mult, fin}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ipf {
    pub init: Measure,
    pub period: Measure,
    pub mult: usize,
    pub fin: Measure,
}

impl From<&IpfDecomposition> for Ipf {
    fn from(d: &IpfDecomposition) -> Self {
        Ipf { init: d.init.clone(), period: d.per.clone(), mult: d.mult, fin: d.fin.clone() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasureOut {
    pub quiver: String,
    pub module: String,
    pub class: ComponentClass,
    pub dim: usize,
    /// Whether this is the comeasure, computed on the dual module.
    pub starred: bool,
    pub measure: Measure,
    pub e_value: Rational,
    pub branch: Branch,
    pub ipf: Ipf,
    pub trace: Option<GreedyRun>,
}

fn measure_out(m: &Module, starred: bool) -> Result<MeasureOut, CliError> {
    let target = if starred { m.dual() } else { m.clone() };
    let rep = gr_measure_report(&target);
    let ipf = if starred { module_coipf(m)? } else { module_ipf(m)? };
    Ok(MeasureOut {
        quiver: m.cover().spec().to_string(),
        module: m.name(),
        class: m.classify(),
        dim: m.dim(),
        starred,
        e_value: e_finite(&rep.measure),
        measure: rep.measure,
        branch: rep.branch,
        ipf: (&ipf).into(),
        trace: rep.run,
    })
}

pub fn measure_report(m: &Module) -> Result<MeasureOut, CliError> {
    measure_out(m, false)
}

pub fn comeasure_report(m: &Module) -> Result<MeasureOut, CliError> {
    measure_out(m, true)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IpfOut {
    pub module: String,
    pub class: ComponentClass,
    pub ipf: Ipf,
    pub coipf: Ipf,
    pub wf: Measure,
    pub wf_star: Measure,
    pub approach: Option<Approach>,
}

pub fn ipf_report(m: &Module) -> Result<IpfOut, CliError> {
    let (d, dd) = (module_ipf(m)?, module_coipf(m)?);
    Ok(IpfOut {
        module: m.name(),
        class: m.classify(),
        ipf: (&d).into(),
        coipf: (&dd).into(),
        wf: d.wf(),
        wf_star: dd.wf(),
        approach: approach_of(&d, &dd),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassifyOut {
    pub module: String,
    pub dim: usize,
    pub class: ComponentClass,
    pub string_type: Option<(String, String)>,
    pub family: String,
    pub tube: Option<TubeKind>,
}

pub fn classify_report(m: &Module) -> ClassifyOut {
    let class = m.classify();
    let tube = match class {
        ComponentClass::RegularLeftTube => Some(TubeKind::Left),
        ComponentClass::RegularRightTube => Some(TubeKind::Right),
        ComponentClass::HomogeneousRegular => Some(TubeKind::Homogeneous),
        _ => None,
    };
    ClassifyOut {
        module: m.name(),
        dim: m.dim(),
        class,
        string_type: match m {
            Module::String(sm) => Some(sm.string_type()),
            Module::Homogeneous { .. } => None,
        },
        family: family_of(m).name(),
        tube,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleOut {
    pub module: String,
    pub bound: usize,
    pub oracle: Measure,
    pub greedy: Measure,
    pub agree: bool,
}

pub fn oracle_report(m: &Module, bound: usize) -> Result<OracleOut, CliError> {
    let oracle = Oracle::new(m.cover().clone(), bound).measure(m)?;
    let greedy = gr_measure_report(m).measure;
    Ok(OracleOut { module: m.name(), bound, agree: oracle == greedy, oracle, greedy })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MemberOut {
    pub module: String,
    pub dim: usize,
    pub measure: Measure,
    pub comeasure: Measure,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyOut {
    pub family: String,
    pub class: ComponentClass,
    pub members: Vec<MemberOut>,
    pub ipf: Ipf,
    pub coipf: Ipf,
    pub mu_limit: PeriodicMeasure,
    pub mustar_limit: PeriodicMeasure,
    pub approach: Option<Approach>,
}

pub fn family_report(f: &Family, n: usize) -> Result<FamilyOut, CliError> {
    use rhombic_core::grcompute::{gr_comeasure, gr_measure};
    use rhombic_core::rhombic::{family_coipf, family_ipf};
    let members = f
        .members(n)
        .iter()
        .map(|m| MemberOut { module: m.name(), dim: m.dim(), measure: gr_measure(m), comeasure: gr_comeasure(m) })
        .collect();
    let lim = rhombic_limit(f)?;
    Ok(FamilyOut {
        family: f.name(),
        class: f.class(),
        members,
        ipf: (&family_ipf(f)?).into(),
        coipf: (&family_coipf(f)?).into(),
        mu_limit: lim.mu_limit,
        mustar_limit: lim.mustar_limit,
        approach: lim.approach,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellOut {
    pub module: String,
    pub dim: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TubeOut {
    pub quiver: String,
    pub kind: TubeKind,
    pub rank: usize,
    pub depth: usize,
    /// Row `j` holds the modules of quasi-length `j + 1`; the mouth comes first.
    pub rows: Vec<Vec<CellOut>>,
    pub families: Vec<String>,
}

pub fn tube_report(t: &Tube) -> TubeOut {
    TubeOut {
        quiver: t.cover().spec().to_string(),
        kind: t.kind(),
        rank: t.rank(),
        depth: t.depth(),
        rows: t
            .grid()
            .iter()
            .map(|row| row.iter().map(|m| CellOut { module: m.name(), dim: m.dim() }).collect())
            .collect(),
        families: t.families().iter().map(Family::name).collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TilingOut {
    pub kind: TubeKind,
    pub rank: usize,
    pub wf_order: Vec<String>,
    pub ray_orders: Vec<Vec<String>>,
    pub coray_orders: Vec<Vec<String>>,
    pub ray_direction: Option<WalkDirection>,
    pub coray_direction: Option<WalkDirection>,
    pub tiled: TilingStatus,
}

pub fn tiling_out(t: &Tube, depth: usize) -> Result<TilingOut, CliError> {
    let r = tiling_report(t, depth)?;
    Ok(TilingOut {
        kind: t.kind(),
        rank: t.rank(),
        wf_order: r.wf_order,
        ray_orders: r.ray_orders,
        coray_orders: r.coray_orders,
        ray_direction: r.ray_direction,
        coray_direction: r.coray_direction,
        tiled: r.tiled,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedLimit {
    pub family: String,
    pub limit: PeriodicMeasure,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AxisLimit {
    pub limit: PeriodicMeasure,
    pub e: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LimitsOut {
    pub quiver: CoverReport,
    pub takeoff: PeriodicMeasure,
    pub homogeneous: PeriodicMeasure,
    pub landing: PeriodicMeasure,
    pub takeoff_star: PeriodicMeasure,
    pub homogeneous_star: PeriodicMeasure,
    pub landing_star: PeriodicMeasure,
    pub preinjective_limits: Vec<NamedLimit>,
    /// Distinct limits of all families, increasing.
    pub all_limits: Vec<AxisLimit>,
}

pub fn limits_report(cover: &Arc<Cover>) -> Result<LimitsOut, CliError> {
    let d = distinguished_limits(cover)?;
    Ok(LimitsOut {
        quiver: cover.to_json_value(),
        takeoff: d.takeoff,
        homogeneous: d.homogeneous,
        landing: d.landing,
        takeoff_star: d.takeoff_star,
        homogeneous_star: d.homogeneous_star,
        landing_star: d.landing_star,
        preinjective_limits: d
            .preinjective_limits
            .into_iter()
            .map(|(family, limit)| NamedLimit { family, limit })
            .collect(),
        all_limits: all_limits(cover)?.into_iter().map(|l| AxisLimit { e: e_periodic(&l), limit: l }).collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointOut {
    pub module: String,
    pub family: String,
    pub class: ComponentClass,
    pub dim: usize,
    pub mu: Measure,
    pub mustar: Measure,
    pub x: Rational,
    pub y: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyPoint {
    pub family: String,
    pub class: ComponentClass,
    pub mu_limit: PeriodicMeasure,
    pub mustar_limit: PeriodicMeasure,
    pub x: Rational,
    pub y: Rational,
    pub approach: Option<Approach>,
}

/// A point `(mu-limit, mu*-limit)` shared by one or more families.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LimitPoint {
    pub mu_limit: PeriodicMeasure,
    pub mustar_limit: PeriodicMeasure,
    pub x: Rational,
    pub y: Rational,
    pub families: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PictureOut {
    pub quiver: String,
    pub scope: String,
    pub max_dim: usize,
    pub points: Vec<PointOut>,
    pub families: Vec<FamilyPoint>,
    pub mu_limits: Vec<AxisLimit>,
    pub mustar_limits: Vec<AxisLimit>,
    pub limit_points: Vec<LimitPoint>,
}

fn sorted_axis(mut v: Vec<PeriodicMeasure>) -> Vec<AxisLimit> {
    v.sort_by(|a, b| {
        rhombic_core::measure::cmp_periodic(&Sequence::Periodic(a.clone()), &Sequence::Periodic(b.clone()))
    });
    v.dedup();
    v.into_iter().map(|l| AxisLimit { e: e_periodic(&l), limit: l }).collect()
}

/// Families of one tube (or of the whole quiver) with their members up
/// to `max_dim` and their limits.
pub fn picture_report(cover: &Arc<Cover>, kind: Option<TubeKind>, max_dim: usize) -> Result<PictureOut, CliError> {
    use rhombic_core::rhombic::rhombic_point;
    let fams = match kind {
        Some(k) => build_tube(cover, k, 1)?.families(),
        None => {
            let mut v = string_families(cover);
            v.push(Family::Homogeneous { cover: cover.clone() });
            v
        }
    };
    let mut points = Vec::new();
    let mut families = Vec::new();
    let mut limit_points: Vec<LimitPoint> = Vec::new();
    for f in &fams {
        let mut k = 0;
        loop {
            let m = f.member(k);
            if m.dim() > max_dim {
                break;
            }
            let p = rhombic_point(&m);
            points.push(PointOut {
                module: p.module,
                family: f.name(),
                class: m.classify(),
                dim: m.dim(),
                x: (&p.x).into(),
                y: (&p.y).into(),
                mu: p.mu,
                mustar: p.mustar,
            });
            k += 1;
        }
        let lim = rhombic_limit(f)?;
        let (x, y) = (e_periodic(&lim.mu_limit), e_periodic(&lim.mustar_limit));
        match limit_points.iter_mut().find(|p| p.mu_limit == lim.mu_limit && p.mustar_limit == lim.mustar_limit) {
            Some(p) => p.families.push(f.name()),
            None => limit_points.push(LimitPoint {
                mu_limit: lim.mu_limit.clone(),
                mustar_limit: lim.mustar_limit.clone(),
                x: x.clone(),
                y: y.clone(),
                families: vec![f.name()],
            }),
        }
        families.push(FamilyPoint {
            family: f.name(),
            class: f.class(),
            mu_limit: lim.mu_limit,
            mustar_limit: lim.mustar_limit,
            x,
            y,
            approach: lim.approach,
        });
    }
    Ok(PictureOut {
        quiver: cover.spec().to_string(),
        scope: kind.map_or("all".to_string(), |k| k.to_string()),
        max_dim,
        mu_limits: sorted_axis(families.iter().map(|f| f.mu_limit.clone()).collect()),
        mustar_limits: sorted_axis(families.iter().map(|f| f.mustar_limit.clone()).collect()),
        points,
        families,
        limit_points,
    })
}

impl PictureOut {
    /// An empty picture over the given quiver text.
    pub fn empty(quiver: &str) -> Self {
        PictureOut {
            quiver: quiver.to_string(),
            scope: "none".into(),
            max_dim: 0,
            points: Vec::new(),
            families: Vec::new(),
            mu_limits: Vec::new(),
            mustar_limits: Vec::new(),
            limit_points: Vec::new(),
        }
    }
}

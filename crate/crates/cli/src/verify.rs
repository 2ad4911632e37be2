//! Property suites behind `verify`.

use std::cmp::Ordering;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use rhombic_core::artubes::{build_tube, family_of, Family, Tube, TubeKind};
use rhombic_core::grcompute::{greedy_measure, module_coipf, module_ipf, Module, Oracle};
use rhombic_core::quiver::{parse_quiver, Cover};
use rhombic_core::rhombic::{parallelogram_sweep, staircase_cmp, tiling_report, wf_cmp, StairOrder, TilingStatus};
use rhombic_core::strings::{ComponentClass, StringModule};

use crate::{CliError, Suite};

/// Failing witnesses kept in a report.
const MAX_WITNESSES: usize = 50;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyOut {
    pub suite: String,
    pub quivers: Vec<String>,
    pub checked: usize,
    pub failure_count: usize,
    pub failures: Vec<String>,
    /// Cases outside the hypotheses of the checked statement.
    pub skipped: Vec<String>,
}

struct Tally {
    checked: usize,
    failure_count: usize,
    failures: Vec<String>,
    skipped: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Tally { checked: 0, failure_count: 0, failures: Vec::new(), skipped: Vec::new() }
    }

    fn check(&mut self, cond: bool, witness: impl FnOnce() -> String) {
        self.checked += 1;
        if !cond {
            self.failure_count += 1;
            if self.failures.len() < MAX_WITNESSES {
                self.failures.push(witness());
            }
        }
    }
}

/// `n` random orientation words with both arrow directions and `h <= 7`.
pub fn random_words(n: usize, seed: u64) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < n {
        let h = rng.gen_range(2..=7);
        let w: String = (0..h).map(|_| if rng.gen_bool(0.5) { '>' } else { '<' }).collect();
        if w.contains('>') && w.contains('<') {
            out.push(w);
        }
    }
    out
}

fn strings_up_to(c: &Arc<Cover>, max_dim: usize) -> Vec<StringModule> {
    let h = c.h() as i64;
    let mut v = Vec::new();
    for lo in 0..h {
        for d in 1..=max_dim as i64 {
            v.push(StringModule::from_interval(c.clone(), lo, lo + d - 1));
        }
    }
    v
}

fn exceptional_tubes(c: &Arc<Cover>) -> Result<Vec<Tube>, CliError> {
    let mut out = Vec::new();
    for k in [TubeKind::Left, TubeKind::Right] {
        let rank = build_tube(c, k, 1)?.rank();
        if rank >= 2 {
            out.push(build_tube(c, k, 3 * rank)?);
        }
    }
    Ok(out)
}

fn oracle_suite(c: &Arc<Cover>, max_dim: usize, t: &mut Tally) -> Result<(), CliError> {
    let mut oracle = Oracle::new(c.clone(), max_dim);
    for sm in strings_up_to(c, max_dim) {
        if sm.classify() == ComponentClass::Preinjective {
            continue;
        }
        let (g, o) = (greedy_measure(&sm), oracle.string_measure(&sm)?);
        t.check(g == o, || format!("{} {}: greedy {g}, oracle {o}", c.spec(), sm.name()));
    }
    Ok(())
}

fn components_suite(c: &Arc<Cover>, max_dim: usize, t: &mut Tally) -> Result<(), CliError> {
    let h = c.h();
    let hooks = c.hooks();
    let mut modules: Vec<Module> = strings_up_to(c, max_dim).into_iter().map(Module::from).collect();
    modules.extend((1..=max_dim / h).map(|q| Module::Homogeneous { cover: c.clone(), q }));
    for m in &modules {
        let (a, b) = (module_ipf(m)?, module_coipf(m)?);
        let class = m.classify();
        let ok = match (a.fin < a.per, b.fin < b.per) {
            (true, false) => class == ComponentClass::Preprojective,
            (false, true) => class == ComponentClass::Preinjective,
            (true, true) => class.is_regular(),
            (false, false) => false,
        };
        t.check(ok, || format!("{m} is {class}: fin<per {}, fin*<per* {}", a.fin < a.per, b.fin < b.per));
        let want: Option<Vec<u32>> = match class {
            ComponentClass::RegularLeftTube => Some(hooks.left.clone()),
            ComponentClass::RegularRightTube => Some(hooks.right.clone()),
            ComponentClass::HomogeneousRegular => Some(vec![h as u32]),
            _ => None,
        };
        if let Some(p) = want {
            t.check(a.per.entries() == p, || format!("{m} is {class} but per = {}", a.per));
        }
    }
    Ok(())
}

fn parallelogram_suite(c: &Arc<Cover>, depth: usize, t: &mut Tally) -> Result<(), CliError> {
    for tube in exceptional_tubes(c)? {
        for (seq, rep) in parallelogram_sweep(&tube, depth)? {
            t.check(rep.parallel_sides && rep.nondegenerate_wf, || {
                format!(
                    "{} tube mesh at {}: parallel sides {}, nondegenerate wf {}",
                    tube.kind(),
                    seq.a,
                    rep.parallel_sides,
                    rep.nondegenerate_wf
                )
            });
        }
    }
    let hom = build_tube(c, TubeKind::Homogeneous, depth)?;
    for (seq, rep) in parallelogram_sweep(&hom, depth)? {
        t.check(rep.degenerate, || format!("homogeneous mesh at {} is not degenerate", seq.a));
    }
    Ok(())
}

fn tiling_suite(c: &Arc<Cover>, depth: usize, t: &mut Tally) -> Result<(), CliError> {
    for tube in exceptional_tubes(c)? {
        let r = tiling_report(&tube, depth)?;
        if r.tiled == TilingStatus::NotApplicable {
            t.skipped.push(format!("{} {} tube: no unique widest valley and hill", c.spec(), tube.kind()));
            continue;
        }
        t.check(r.tiled == TilingStatus::Tiled, || {
            format!("{} tube: {:?}, wf order {:?}, ray orders {:?}", tube.kind(), r.tiled, r.wf_order, r.ray_orders)
        });
    }
    Ok(())
}

fn ray_families(tube: &Tube, i: i64) -> Vec<Family> {
    let mut out: Vec<Family> = Vec::new();
    for m in tube.ray(i, 2 * tube.rank()) {
        let f = family_of(&m);
        if !out.contains(&f) {
            out.push(f);
        }
    }
    out
}

fn orderings_suite(c: &Arc<Cover>, depth: usize, t: &mut Tally) -> Result<(), CliError> {
    for tube in exceptional_tubes(c)? {
        for i in 0..tube.rank() as i64 {
            let fams = ray_families(&tube, i);
            for a in &fams {
                for b in &fams {
                    let st = staircase_cmp(a, b, depth)?;
                    let wf = wf_cmp(a, b)?;
                    let clash = matches!(
                        (st, wf),
                        (StairOrder::Less, Ordering::Greater) | (StairOrder::Greater, Ordering::Less)
                    );
                    t.check(!clash, || format!("{a} vs {b}: staircase {st}, wf {wf:?}"));
                }
            }
        }
    }
    Ok(())
}

/// Runs `suite` over `cover`; for the oracle suite a seed adds 20 random orientations.
pub fn run(
    suite: Suite,
    cover: &Arc<Cover>,
    max_dim: usize,
    depth: usize,
    seed: Option<u64>,
) -> Result<VerifyOut, CliError> {
    let mut covers = vec![cover.clone()];
    if let (Suite::Oracle, Some(s)) = (suite, seed) {
        for w in random_words(20, s) {
            covers.push(Arc::new(Cover::new(parse_quiver(&w)?)));
        }
    }
    let mut t = Tally::new();
    for c in &covers {
        match suite {
            Suite::Oracle => oracle_suite(c, max_dim, &mut t)?,
            Suite::Components => components_suite(c, max_dim, &mut t)?,
            Suite::Parallelogram => parallelogram_suite(c, depth, &mut t)?,
            Suite::Tiling => tiling_suite(c, depth, &mut t)?,
            Suite::Orderings => orderings_suite(c, depth, &mut t)?,
        }
    }
    Ok(VerifyOut {
        suite: format!("{suite:?}").to_lowercase(),
        quivers: covers.iter().map(|c| c.spec().to_string()).collect(),
        checked: t.checked,
        failure_count: t.failure_count,
        failures: t.failures,
        skipped: t.skipped,
    })
}

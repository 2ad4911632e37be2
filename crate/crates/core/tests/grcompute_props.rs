use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rhombic_core::grcompute::{gr_comeasure, gr_measure, greedy_measure, module_coipf, module_ipf, Module, Oracle};
use rhombic_core::quiver::{parse_quiver, Cover};
use rhombic_core::strings::{ComponentClass, StringModule};

fn cover(text: &str) -> Arc<Cover> {
    Arc::new(Cover::new(parse_quiver(text).unwrap()))
}

fn random_words(n: usize, seed: u64) -> Vec<String> {
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

fn all_strings(c: &Arc<Cover>, max_dim: usize) -> Vec<StringModule> {
    let h = c.h() as i64;
    let mut v = Vec::new();
    for lo in 0..h {
        for d in 1..=max_dim as i64 {
            v.push(StringModule::from_interval(c.clone(), lo, lo + d - 1));
        }
    }
    v
}

#[test]
fn greedy_matches_oracle() {
    let mut words: Vec<String> = vec!["><<><".into(), ">>><".into()];
    words.extend(random_words(20, 7));
    for w in words {
        let c = cover(&w);
        let mut oracle = Oracle::new(c.clone(), 40);
        for sm in all_strings(&c, 40) {
            let want = oracle.string_measure(&sm).unwrap();
            match sm.classify() {
                ComponentClass::Preinjective => {
                    assert_eq!(gr_measure(&sm.clone().into()), want, "{w} {sm:?} preinjective");
                }
                _ => assert_eq!(greedy_measure(&sm), want, "{w} {sm:?}"),
            }
        }
    }
}

#[test]
fn ipf_trichotomy() {
    for w in ["><<><,a,b,c,d,e", ">>><,a,d,c,b"] {
        let c = cover(w);
        for sm in all_strings(&c, 40) {
            let m: Module = sm.clone().into();
            let class = sm.classify();
            let d = module_ipf(&m).unwrap_or_else(|e| panic!("{sm:?} {e}"));
            let dd = module_coipf(&m).unwrap_or_else(|e| panic!("{sm:?} {e}"));
            let a = d.fin < d.per;
            let b = dd.fin < dd.per;
            let got = match (a, b) {
                (true, false) => "pp",
                (false, true) => "pi",
                (true, true) => "reg",
                _ => "none",
            };
            let want = match class {
                ComponentClass::Preprojective => "pp",
                ComponentClass::Preinjective => "pi",
                _ => "reg",
            };
            assert_eq!(got, want, "{w} {sm:?} ipf {d:?} coipf {dd:?}");
            if sm.dim() >= 3 * c.h() {
                assert_eq!(d.reconstruct(), gr_measure(&m));
                assert_eq!(dd.reconstruct(), gr_comeasure(&m));
            }
        }
    }
}

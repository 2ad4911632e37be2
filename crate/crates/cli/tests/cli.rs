use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{de::DeserializeOwned, Serialize};
use serde_json::{json, Value};

use rhombic_cli::render::svg;
use rhombic_cli::report::{
    from_json, to_json, ClassifyOut, FamilyOut, IpfOut, LimitsOut, MeasureOut, OracleOut, PictureOut, TilingOut,
    TubeOut,
};
use rhombic_cli::verify::VerifyOut;
use rhombic_cli::{run_command, Format, RenderSpec};

const EX1: &str = "><<><,a,b,c,d,e";
const EX2: &str = ">>><,a,d,c,b";

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("rhombic").chain(args.iter().copied());
    let code = run_command(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn run_ok(args: &[&str]) -> String {
    let (code, out, err) = run(args);
    assert_eq!(code, 0, "{args:?}: {err}");
    out
}

fn json_of(args: &[&str]) -> Value {
    serde_json::from_str(&run_ok(args)).unwrap()
}

fn count(svg: &str, class: &str) -> usize {
    svg.matches(&format!("class=\"{class}\"")).count()
}

fn well_formed(svg: &str) -> roxmltree::Document<'_> {
    let doc = roxmltree::Document::parse(svg).expect("SVG parses as XML");
    assert_eq!(doc.root_element().tag_name().name(), "svg");
    doc
}

#[test]
fn measure_of_the_worked_example() {
    let v = json_of(&["measure", "--quiver", EX1, "--module", "c:18"]);
    assert_eq!(v["module"], "ce_18");
    assert_eq!(v["measure"], json!([1, 1, 2, 2, 1, 2, 2, 1, 2, 2, 2]));
    assert_eq!(v["ipf"], json!({"init": [1, 1], "period": [2, 2, 1], "mult": 2, "fin": [2, 2, 2]}));
    assert_eq!(v["e_value"], json!({"num": "219861", "den": "262144"}));
    assert!(v["trace"].is_object());
    let typed: MeasureOut = from_json(&run_ok(&["measure", "--quiver", EX1, "--module", "c:18"])).unwrap();
    let compact = serde_json::to_string(&typed.ipf).unwrap();
    assert_eq!(compact, r#"{"init":[1,1],"period":[2,2,1],"mult":2,"fin":[2,2,2]}"#);
}

#[test]
fn homogeneous_measures() {
    let v = json_of(&["measure", "--quiver", "ex1", "--homogeneous", "3"]);
    assert_eq!(v["module"], "H[3]");
    assert_eq!(v["measure"], json!([1, 1, 2, 1, 5, 5]));
    assert_eq!(v["branch"], "Homogeneous");
}

#[test]
fn hooks_and_limits_of_example_one() {
    let v = json_of(&["limits", "--quiver", EX1]);
    assert_eq!(v["quiver"]["L"], json!([3, 2]));
    assert_eq!(v["quiver"]["R"], json!([2, 2, 1]));
    assert_eq!(v["takeoff"], json!({"prefix": [1, 1], "period": [2, 2, 1]}));
    assert_eq!(v["homogeneous"], json!({"prefix": [1, 1, 2, 1], "period": [5]}));
    assert_eq!(v["landing"], json!({"prefix": [1, 1, 1], "period": [2, 2, 1]}));
    assert_eq!(v["all_limits"].as_array().unwrap().len(), 6);
    // e(11(221)^) = 1/2 + 1/4 + (1/16 + 1/64 + 1/128) / (1 - 1/32)
    let e = &v["all_limits"][0]["e"];
    let got = BigRational::new(
        e["num"].as_str().unwrap().parse::<BigInt>().unwrap(),
        e["den"].as_str().unwrap().parse::<BigInt>().unwrap(),
    );
    let r = |n: i64, d: i64| BigRational::new(n.into(), d.into());
    assert_eq!(got, r(3, 4) + r(11, 128) * r(32, 31));
}

#[test]
fn tube_grid_mouth_first() {
    let v = json_of(&["tube", "--quiver", EX1, "--kind", "right"]);
    assert_eq!(v["rank"], 3);
    assert_eq!(v["depth"], 9);
    let mouth: Vec<&str> = v["rows"][0].as_array().unwrap().iter().map(|c| c["module"].as_str().unwrap()).collect();
    assert_eq!(mouth, ["ab_2", "cc_1", "de_2"]);
    assert_eq!(v["rows"][1][0]["dim"], 3);
    assert_eq!(v["families"].as_array().unwrap().len(), 9);
    let v = json_of(&["tube", "--quiver", EX1, "--kind", "left"]);
    assert_eq!(v["rank"], 2);
}

#[test]
fn family_by_key_or_member() {
    let a = json_of(&["family", "--quiver", EX1, "--family", "ce"]);
    let b = json_of(&["family", "--quiver", EX1, "--module", "c:18"]);
    assert_eq!(a, b);
    assert_eq!(a["mu_limit"], json!({"prefix": [1, 1], "period": [2, 2, 1]}));
    assert_eq!(a["approach"], "FromBelow");
    let h = json_of(&["family", "--quiver", EX1, "--family", "H", "--depth", "2"]);
    assert_eq!(h["members"][1]["module"], "H[2]");
}

#[test]
fn classify_and_oracle() {
    let v = json_of(&["classify", "--quiver", EX1, "--module", "b:4"]);
    assert_eq!(v["class"], "Preprojective");
    assert_eq!(v["tube"], Value::Null);
    let v = json_of(&["oracle", "--quiver", EX1, "--module", "c:18"]);
    assert_eq!(v["agree"], true);
    let (code, _, err) = run(&["oracle", "--quiver", EX1, "--module", "c:18", "--max-dim", "10"]);
    assert_eq!(code, 2);
    assert!(err.contains("grcompute::BoundExceeded"), "{err}");
}

#[test]
fn exit_codes_and_error_codes() {
    let (code, out, err) = run(&["measure", "--quiver", ">>>>"]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.contains("quiver::OrientedCycle"), "{err}");
    let (code, _, err) = run(&["measure", "--quiver", EX1, "--module", "c18"]);
    assert_eq!(code, 2);
    assert!(err.contains("strings::BadAddress"), "{err}");
    let (code, _, err) = run(&["measure", "--quiver", EX1, "--module", "z:3"]);
    assert_eq!(code, 2);
    assert!(err.contains("strings::UnknownLabel"), "{err}");
    let (code, _, err) = run(&["measure", "--quiver", EX1]);
    assert_eq!(code, 2);
    assert!(err.contains("cli::Usage"), "{err}");
    let (code, _, err) = run(&["measure", "--quiver", EX1, "--module", "c:3", "--format", "svg"]);
    assert_eq!(code, 2);
    assert!(err.contains("cli::Usage"), "{err}");
    assert_eq!(run(&["frobnicate"]).0, 2);
    assert_eq!(run(&["rhombic", "--quiver", EX1, "--scale", "-1/2"]).0, 2);
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("verify"));
}

#[test]
fn oracle_sweep_of_example_one_passes() {
    let v = json_of(&["verify", "oracle", "--quiver", EX1, "--max-dim", "40"]);
    assert_eq!(v["failure_count"], 0);
    assert!(v["checked"].as_u64().unwrap() > 100);
    let v = json_of(&["verify", "oracle", "--quiver", EX2, "--max-dim", "30", "--seed", "5"]);
    assert_eq!(v["quivers"].as_array().unwrap().len(), 21);
    assert_eq!(v["failure_count"], 0);
}

#[test]
fn every_suite_passes_on_both_examples() {
    for suite in ["parallelogram", "tiling", "components", "orderings"] {
        for q in [EX1, EX2] {
            let v = json_of(&["verify", suite, "--quiver", q]);
            assert_eq!(v["failure_count"], 0, "{suite} {q}: {v}");
            assert!(v["checked"].as_u64().unwrap() > 0, "{suite} {q}");
        }
    }
}

#[test]
fn failed_verification_exits_one_with_a_witness() {
    // alternating orientation: the middle terms of every mesh share their wf coordinates
    let (code, out, err) = run(&["verify", "parallelogram", "--quiver", "><><"]);
    assert_eq!(code, 1);
    assert!(err.contains("verification failed"));
    let v: Value = serde_json::from_str(&out).unwrap();
    assert!(v["failure_count"].as_u64().unwrap() > 0);
    assert!(v["failures"][0].as_str().unwrap().contains("nondegenerate wf false"));
}

#[test]
fn tiling_suite_skips_tubes_outside_its_hypotheses() {
    let v = json_of(&["verify", "tiling", "--quiver", "><><"]);
    assert_eq!(v["checked"], 0);
    assert_eq!(v["skipped"].as_array().unwrap().len(), 2);
    let v = json_of(&["tiling", "--quiver", "><><", "--kind", "right"]);
    assert_eq!(v["tiled"], "NotApplicable");
}

#[test]
fn tiling_verb_reports_tiled() {
    for (q, kind) in [(EX1, "right"), (EX1, "left"), (EX2, "right")] {
        let v = json_of(&["tiling", "--quiver", q, "--kind", kind]);
        assert_eq!(v["tiled"], "Tiled", "{q} {kind}");
    }
}

#[test]
fn example_one_picture_has_six_axis_limits() {
    let s = run_ok(&["rhombic", "--quiver", EX1, "--format", "svg"]);
    well_formed(&s);
    assert_eq!(count(&s, "limit-mu"), 6);
    assert_eq!(count(&s, "limit-mustar"), 6);
    for label in
        ["11<tspan text-decoration=\"overline\">221</tspan>", "1121<tspan text-decoration=\"overline\">5</tspan>"]
    {
        assert!(s.contains(label), "{label}");
    }
    assert!(s.contains("class=\"approach preprojective\""));
    assert!(s.contains("class=\"approach preinjective\""));
}

#[test]
fn example_two_right_tube_has_four_limit_points() {
    let s = run_ok(&["rhombic", "--quiver", EX2, "--kind", "right", "--format", "svg"]);
    well_formed(&s);
    assert_eq!(count(&s, "limit-point"), 4);
    let v = json_of(&["rhombic", "--quiver", EX2, "--kind", "right"]);
    assert_eq!(v["families"].as_array().unwrap().len(), 9);
    let mult: u64 =
        v["limit_points"].as_array().unwrap().iter().map(|p| p["families"].as_array().unwrap().len() as u64).sum();
    assert_eq!(mult, 9);
}

#[test]
fn pictures_are_deterministic() {
    for format in ["svg", "tikz", "csv", "json"] {
        let args = ["rhombic", "--quiver", EX1, "--format", format, "--scale", "3/2"];
        assert_eq!(run_ok(&args), run_ok(&args), "{format}");
    }
    let a = run_ok(&["rhombic", "--quiver", EX1, "--format", "svg", "--no-rotate"]);
    let b = run_ok(&["rhombic", "--quiver", EX1, "--format", "svg"]);
    assert_ne!(a, b);
    well_formed(&a);
}

#[test]
fn svg_coordinates_have_six_decimals() {
    let s = run_ok(&["rhombic", "--quiver", EX1, "--format", "svg", "--max-dim", "5"]);
    let doc = well_formed(&s);
    for n in doc.descendants().filter(|n| n.has_tag_name("circle")) {
        for attr in ["cx", "cy"] {
            let v = n.attribute(attr).unwrap();
            let (_, frac) = v.split_once('.').unwrap();
            assert_eq!(frac.len(), 6, "{v}");
        }
    }
}

#[test]
fn empty_picture_draws_axes_only() {
    let spec = RenderSpec::new(Format::Svg, BigRational::from_integer(1.into()), true, 0).unwrap();
    let s = svg(&PictureOut::empty(EX1), &spec);
    let doc = well_formed(&s);
    assert_eq!(doc.descendants().filter(|n| n.has_tag_name("circle")).count(), 0);
    assert_eq!(doc.descendants().filter(|n| n.has_tag_name("line")).count(), 2);
}

#[test]
fn tikz_and_csv_exports() {
    let t = run_ok(&["rhombic", "--quiver", EX1, "--format", "tikz"]);
    assert!(t.starts_with("% ><<><,a,b,c,d,e\n\\begin{tikzpicture}"));
    assert!(t.contains("{$11\\overline{221}$}"));
    assert!(t.trim_end().ends_with("\\end{tikzpicture}"));
    let c = run_ok(&["rhombic", "--quiver", EX1, "--format", "csv", "--max-dim", "5"]);
    let v = json_of(&["rhombic", "--quiver", EX1, "--max-dim", "5"]);
    let rows = v["points"].as_array().unwrap().len() + v["families"].as_array().unwrap().len();
    assert_eq!(c.lines().count(), rows + 1);
    let width = c.lines().next().unwrap().split(',').count();
    assert!(c.lines().all(|l| l.split(',').count() == width));
}

#[test]
fn out_flag_writes_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pic.svg");
    let p = path.to_str().unwrap();
    let (code, out, _) = run(&["rhombic", "--quiver", EX2, "--format", "svg", "--out", p]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    assert_eq!(written, run_ok(&["rhombic", "--quiver", EX2, "--format", "svg"]));
}

fn round_trip<T: Serialize + DeserializeOwned + PartialEq + Debug>(args: &[&str]) {
    let text = run_ok(args);
    let parsed: T = from_json(&text).unwrap_or_else(|e| panic!("{args:?}: {e}"));
    assert_eq!(to_json(&parsed), text, "{args:?}");
    let again: T = from_json(&to_json(&parsed)).unwrap();
    assert_eq!(again, parsed);
}

#[test]
fn every_report_round_trips() {
    round_trip::<MeasureOut>(&["measure", "--quiver", EX1, "--module", "c:18"]);
    round_trip::<MeasureOut>(&["comeasure", "--quiver", EX1, "--module", "a:9"]);
    round_trip::<MeasureOut>(&["measure", "--quiver", EX1, "--homogeneous", "2"]);
    round_trip::<IpfOut>(&["ipf", "--quiver", EX2, "--module", "c:14"]);
    round_trip::<OracleOut>(&["oracle", "--quiver", EX1, "--module", "b:12"]);
    round_trip::<ClassifyOut>(&["classify", "--quiver", EX1, "--module", "d:7"]);
    round_trip::<FamilyOut>(&["family", "--quiver", EX2, "--family", "cd"]);
    round_trip::<TubeOut>(&["tube", "--quiver", EX2, "--kind", "hom", "--depth", "3"]);
    round_trip::<TilingOut>(&["tiling", "--quiver", EX1, "--kind", "left"]);
    round_trip::<LimitsOut>(&["limits", "--quiver", EX2]);
    round_trip::<PictureOut>(&["rhombic", "--quiver", EX1]);
    round_trip::<VerifyOut>(&["verify", "orderings", "--quiver", EX1]);
}

use std::path::{Path, PathBuf};
use std::process::Command;

use serde::de::DeserializeOwned;
use serde::Deserialize;

use clt_cli::{AxisReport, ChainOutput, GogOutput, HomologyOutput, RewriteOutput, StaggerOutput, TorsionOutput};
use clt_core::asphericity::{
    cl_basis_from_transversal, coset_transversal, z_cover_rewrite, CLWindowReport, WhiteheadVerdict, WordProblemOracle,
    ZCover,
};
use clt_core::chain::{build_chain, verify_bottom};
use clt_core::gog::{fundamental_presentation, GraphOfGroups};
use clt_core::homology::{build_complexes, homology_trivial_coeffs, torsion_decomposition};
use clt_core::stagger::{check_staggered, find_staggering};
use clt_core::stallings::{basis_report, BasisReport};
use clt_core::trees::{translation_length, TreeModel};
use clt_core::Word;

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn w(s: &str) -> Word {
    s.parse().unwrap()
}

/// Runs in-process and returns (exit code, stdout, stderr).
fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = clt_cli::run(std::iter::once("clt").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json<T: DeserializeOwned>(args: &[&str]) -> T {
    let (code, out, err) = run(args);
    assert!(code <= 1, "{args:?} failed: {err}");
    serde_json::from_str(&out).unwrap_or_else(|e| panic!("{args:?}: {e}\n{out}"))
}

#[derive(Deserialize)]
struct Scenario {
    name: String,
    args: Vec<String>,
    exit: i32,
}

#[test]
fn golden_exit_codes() {
    let text = std::fs::read_to_string(golden("scenarios.json")).unwrap();
    let scenarios: Vec<Scenario> = serde_json::from_str(&text).unwrap();
    assert!(scenarios.len() >= 12);
    for s in scenarios {
        let status = Command::new(env!("CARGO_BIN_EXE_clt")).args(&s.args).output().unwrap();
        assert_eq!(status.status.code(), Some(s.exit), "{}: {}", s.name, String::from_utf8_lossy(&status.stderr));
        if s.exit == 2 {
            assert!(!status.stderr.is_empty(), "{} printed no diagnostic", s.name);
        }
    }
}

#[test]
fn dot_output_matches_goldens() {
    let loop_gog = golden("loop_gog.json");
    let cases: Vec<(&str, Vec<&str>)> = vec![
        ("axis_abab.dot", vec!["axis", "--relator", "abab", "--window", "2"]),
        ("loop_gog.dot", vec!["gog", "--input", loop_gog.to_str().unwrap()]),
        ("chain_commutator.dot", vec!["chain", "--rank", "2", "--S", "abAB"]),
        ("basis.dot", vec!["verify-basis", "--rank", "2", "--words", "a,bAB"]),
        ("freeproduct_quotient.dot", vec!["stagger", "--model", "freeproduct:1:1", "--relators", "abAB"]),
    ];
    for (file, mut args) in cases {
        args.extend(["--format", "dot"]);
        let (_, out, err) = run(&args);
        let expected = std::fs::read_to_string(golden(file)).unwrap();
        assert_eq!(out, expected, "{file}: {err}");
        assert_eq!(run(&args).1, out, "{file} is not deterministic");
    }
}

#[test]
fn out_flag_writes_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("chain.json");
    let (code, out, _) = run(&["chain", "--rank", "2", "--S", "a", "--out", path.to_str().unwrap()]);
    assert_eq!((code, out.as_str()), (0, ""));
    let parsed: ChainOutput = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(parsed.report.final_basis, vec![w("a")]);
}

#[test]
fn gog_input_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.json");
    let g = GraphOfGroups::free_product(2, 1);
    std::fs::write(&path, serde_json::to_string(&g).unwrap()).unwrap();
    let out: GogOutput = json(&["gog", "--input", path.to_str().unwrap(), "--relators", "acb"]);
    assert_eq!(out.presentation, fundamental_presentation(&g));
    assert_eq!(out.normal_forms[0].1.len(), 3);
    std::fs::write(&path, "{ not json").unwrap();
    assert_eq!(run(&["gog", "--input", path.to_str().unwrap()]).0, 2);
}

#[test]
fn axis_round_trip() {
    let rep: AxisReport = json(&["axis", "--model", "cayley:2", "--relator", "abAAB"]);
    let model = TreeModel::cayley(2);
    let r = w("abAAB");
    assert_eq!(rep.translation_length, Some(translation_length(&model, &r).unwrap()));
    assert_eq!(rep.axis, model.axis(&r).unwrap());
    let fixed: AxisReport = json(&["axis", "--model", "freeproduct:1:1", "--relator", "aa"]);
    assert!(fixed.fixes_vertex && fixed.axis.is_none());
}

#[test]
fn stagger_round_trip() {
    let out: StaggerOutput = json(&["stagger", "--model", "cayley:3", "--relators", "abAB,bcBC"]);
    let model = TreeModel::cayley(3);
    let rels = [w("abAB"), w("bcBC")];
    let ord = find_staggering(&model, &rels, 100_000).unwrap().unwrap();
    assert_eq!(out.report, Some(check_staggered(&model, &rels, &ord).unwrap()));
    let out: StaggerOutput = json(&["stagger", "--model", "cayley:2", "--relators", "ab,aB"]);
    assert_eq!(out, StaggerOutput { feasible: false, order: None, report: None });
}

#[test]
fn chain_round_trip() {
    let out: ChainOutput = json(&["chain", "--rank", "2", "--S", "ab", "--Phi", "abab"]);
    let report = build_chain(&TreeModel::cayley(2), &[w("ab")], &[w("abab")]).unwrap();
    let bottom = verify_bottom(&report).unwrap();
    assert_eq!(out, ChainOutput { report, bottom });
}

#[test]
fn clbasis_round_trip() {
    let out: CLWindowReport =
        json(&["clbasis", "--rank", "2", "--relator", "abAB", "--oracle", "abelianized", "--L", "2", "--window", "9"]);
    let r = w("abAB");
    let o = WordProblemOracle::abelianized(2, &r).unwrap();
    let expected = cl_basis_from_transversal(&coset_transversal(&r, &o, 2).unwrap(), 9).unwrap();
    assert_eq!(out, expected);
    assert!(out.independent);
}

#[test]
fn verify_basis_round_trip() {
    let out: BasisReport = json(&["verify-basis", "--rank", "2", "--words", "a,baB"]);
    assert_eq!(out, basis_report(&[w("a"), w("baB")]).unwrap());
    let v: WhiteheadVerdict = json(&["verify-basis", "--rank", "2", "--words", "a,baB", "--gens", "a,baB"]);
    assert!(v.whitehead);
}

#[test]
fn torsion_round_trip() {
    let out: TorsionOutput = json(&["torsion", "--rank", "2", "--relators", "ababab"]);
    assert_eq!(out.report, torsion_decomposition(2, &[w("ababab")], None).unwrap());
    let out: TorsionOutput = json(&["torsion", "--rank", "2", "--relators", "ababab", "--word", "ab", "--perms", "(1 2);(2 3)"]);
    assert_eq!(out.order.unwrap().exact, Some(3));
}

#[test]
fn homology_round_trip() {
    let out: HomologyOutput = json(&["homology", "--rank", "2", "--relators", "abAB", "--oracle", "abelianized"]);
    let (cells, subdivided) = build_complexes(&TreeModel::cayley(2), &[w("abAB")]).unwrap();
    assert_eq!(out.homology, homology_trivial_coeffs(&cells));
    assert_eq!((out.cells, out.subdivided), (cells, subdivided));
    let (code, text, _) = run(&["homology", "--rank", "2", "--relators", "ababab", "--format", "text"]);
    assert_eq!(code, 0);
    assert!(text.starts_with("H0, H1, H2 = Z, Z + Z/3, 0"), "{text}");
}

#[test]
fn rewrite_round_trip() {
    let out: RewriteOutput =
        json(&["rewrite", "--grading", "1,0,1,-1", "--left-rank", "2", "--a", "a", "--b", "c", "--word", "acdA", "--shift", "-1"]);
    let cover = ZCover::new(2, vec![1, 0, 1, -1], 0, 2).unwrap();
    assert_eq!(out, RewriteOutput::Rewrite(z_cover_rewrite(&w("acdA"), &cover, -1).unwrap()));
    let stable: RewriteOutput = json(&["rewrite", "--grading", "1,0", "--stable", "a", "--window", "2"]);
    assert!(matches!(stable, RewriteOutput::Stable(s) if s.free_factor));
}

#[test]
fn help_exits_zero() {
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("verify-basis"));
}

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use tuza_core::graph::Graph;
use tuza_core::graph6;
use tuza_core::planar::{self, PlanarTriangulation};
use tuza_core::solve::{PackingCertificate, TransversalCertificate};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tuza"))
        .args(args)
        .output()
        .expect("binary should spawn")
}

fn tmp(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

fn write_tmp(name: &str, contents: &str) -> PathBuf {
    let p = tmp(name);
    std::fs::write(&p, contents).unwrap();
    p
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("process should exit, not be killed")
}

fn g6_file(name: &str, g: &Graph) -> PathBuf {
    write_tmp(name, &(graph6::encode(g) + "\n"))
}

fn faces_file(name: &str, t: &PlanarTriangulation) -> PathBuf {
    write_tmp(name, &(serde_json::to_string(t).unwrap() + "\n"))
}

fn json_lines(out: &Output) -> Vec<Value> {
    stdout_of(out)
        .lines()
        .map(|l| serde_json::from_str(l).expect("each report line is JSON"))
        .collect()
}

#[test]
fn tau_reports_two_on_k4() {
    let path = g6_file("k4.g6", &Graph::complete(4));
    let out = run(&["tau", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let text = stdout_of(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("tau=2"));
    let cert: TransversalCertificate = serde_json::from_str(lines.next().unwrap()).unwrap();
    assert_eq!(cert.size, 2);
    cert.validate(&Graph::complete(4)).unwrap();
}

#[test]
fn nu_reports_two_on_k5_minus_edge() {
    let g = Graph::complete(5).without_edges([(3, 4)].iter());
    let path = g6_file("k5e.g6", &g);
    let out = run(&["nu", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let text = stdout_of(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("nu=2"));
    let cert: PackingCertificate = serde_json::from_str(lines.next().unwrap()).unwrap();
    assert_eq!(cert.size, 2);
    cert.validate(&g).unwrap();
}

#[test]
fn tau_accepts_face_list_input() {
    let path = faces_file("octa-tau.faces.json", &planar::octahedron());
    let out = run(&["tau", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_of(&out).lines().next(), Some("tau=4"));
}

#[test]
fn nu_accepts_stacking_sequence_input() {
    let seq = tuza_core::ninefifths::generate_3tree(8, 11).unwrap();
    let path = write_tmp("t3-8.json", &serde_json::to_string(&seq).unwrap());
    let out = run(&["nu", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let text = stdout_of(&out);
    assert!(text.starts_with("nu="), "got: {text}");
}

#[test]
fn malformed_input_is_a_parse_failure() {
    let path = write_tmp("garbage.g6", "{this is neither graph6 nor json");
    let out = run(&["tau", path.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
}

#[test]
fn unreadable_path_is_a_parse_failure() {
    let out = run(&["nu", "/no/such/file.g6"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn tiny_budget_aborts_with_budget_code() {
    let path = g6_file("icosa.g6", planar::icosahedron().graph());
    let out = run(&["tau", path.to_str().unwrap(), "--budget", "1"]);
    assert_eq!(code(&out), 3);
}

#[test]
fn verify_three_trees_all_hold() {
    let out = run(&["verify", "3tree", "--count", "6", "--n", "4..9", "--seed", "7"]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let reports = json_lines(&out);
    assert_eq!(reports.len(), 6);
    for r in &reports {
        assert_eq!(r["family"], "3tree");
        assert_eq!(r["bound"], "5*tau<=9*nu+1");
        assert_eq!(r["holds"], true);
        let n = r["n"].as_u64().unwrap();
        assert!((4..=9).contains(&n));
        let tau = r["tau"].as_i64().unwrap();
        let nu = r["nu"].as_i64().unwrap();
        assert!(5 * tau <= 9 * nu + 1);
        let ratio = &r["ratio"];
        assert_eq!(ratio["num"].as_i64().unwrap() * nu, tau * ratio["den"].as_i64().unwrap());
        for digest in [&r["tau_digest"], &r["nu_digest"]] {
            let d = digest.as_str().unwrap();
            assert!(d.starts_with("sha256:") && d.len() == 7 + 64, "bad digest {d}");
        }
        assert!(r["wall_ms"].is_u64());
        assert!(r["id"].as_str().unwrap().starts_with("3tree-"));
    }
}

#[test]
fn verify_triangulations_all_hold() {
    let out = run(&["verify", "triangulation", "--count", "4", "--n", "5..9", "--seed", "3"]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let reports = json_lines(&out);
    assert_eq!(reports.len(), 4);
    for r in &reports {
        assert_eq!(r["bound"], "2*tau<=3*nu");
        assert_eq!(r["holds"], true);
        assert!(2 * r["tau"].as_i64().unwrap() <= 3 * r["nu"].as_i64().unwrap());
    }
}

#[test]
fn verify_partial_six_trees_all_hold() {
    let out = run(&["verify", "tw6", "--count", "4", "--n", "7..9", "--seed", "5"]);
    assert_eq!(code(&out), 0, "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let reports = json_lines(&out);
    assert_eq!(reports.len(), 4);
    for r in &reports {
        assert_eq!(r["bound"], "tau<=2*nu");
        assert_eq!(r["holds"], true);
    }
}

#[test]
fn verify_rejects_range_below_family_floor() {
    let out = run(&["verify", "triangulation", "--count", "2", "--n", "4..6"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn verify_writes_reports_to_out_file() {
    let path = tmp("reports.jsonl");
    let out = run(&[
        "verify", "3tree", "--count", "3", "--n", "5..7", "--seed", "1", "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let body = std::fs::read_to_string(&path).unwrap();
    assert_eq!(body.lines().count(), 3);
}

fn scrub_timing(reports: &mut [Value]) {
    for r in reports {
        r.as_object_mut().unwrap().remove("wall_ms");
    }
}

#[test]
fn verify_is_deterministic_modulo_timing() {
    let args = ["verify", "tw6", "--count", "4", "--n", "7..9", "--seed", "42"];
    let mut first = json_lines(&run(&args));
    let mut second = json_lines(&run(&args));
    let mut threaded = json_lines(&run(&[
        "verify", "tw6", "--count", "4", "--n", "7..9", "--seed", "42", "--jobs", "2",
    ]));
    scrub_timing(&mut first);
    scrub_timing(&mut second);
    scrub_timing(&mut threaded);
    assert_eq!(first, second);
    assert_eq!(first, threaded);
}

#[test]
fn construct_matching_transversal_on_octahedron() {
    let path = faces_file("octa.faces.json", &planar::octahedron());
    let out = run(&["construct", "matching-transversal", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let cert: TransversalCertificate = serde_json::from_str(stdout_of(&out).trim()).unwrap();
    assert_eq!(cert.size, 4);
    cert.validate(planar::octahedron().graph()).unwrap();
}

#[test]
fn construct_coloring_packing_on_octahedron() {
    let path = faces_file("octa2.faces.json", &planar::octahedron());
    let out = run(&["construct", "coloring-packing", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let cert: PackingCertificate = serde_json::from_str(stdout_of(&out).trim()).unwrap();
    assert_eq!(cert.size, 4);
    cert.validate(planar::octahedron().graph()).unwrap();
}

#[test]
fn construct_external_packing_keeps_external_face() {
    let gen_path = tmp("ns.faces.json");
    let gen = run(&["gen", "nested-stack", "--out", gen_path.to_str().unwrap()]);
    assert_eq!(code(&gen), 0);
    let out = run(&["construct", "external-packing", gen_path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let cert: PackingCertificate = serde_json::from_str(stdout_of(&out).trim()).unwrap();
    assert_eq!(cert.size, 3);
    let fixture = planar::nested_stellation();
    assert!(cert.triangles.contains(&fixture.external_face()));
    cert.validate(fixture.graph()).unwrap();
}

#[test]
fn construct_ninetp_meets_integer_bound() {
    let seq_path = tmp("t3-20.json");
    let gen = run(&[
        "gen", "3tree", "--n", "20", "--seed", "3", "--out", seq_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&gen), 0);
    let out = run(&["construct", "ninetp", seq_path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let pair: Value = serde_json::from_str(stdout_of(&out).trim()).unwrap();
    let x = pair["transversal"]["size"].as_i64().unwrap();
    let y = pair["packing"]["size"].as_i64().unwrap();
    assert!(5 * x <= 9 * y + 1, "x={x} y={y}");
}

#[test]
fn construct_rejects_mismatched_input() {
    let path = g6_file("k4-pipe.g6", &Graph::complete(4));
    let out = run(&["construct", "matching-transversal", path.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
}

#[test]
fn gen_is_byte_identical_per_seed() {
    let a = tmp("tri-a.faces.json");
    let b = tmp("tri-b.faces.json");
    let c = tmp("tri-c.faces.json");
    run(&["gen", "tri", "--n", "10", "--seed", "5", "--out", a.to_str().unwrap()]);
    run(&["gen", "tri", "--n", "10", "--seed", "5", "--out", b.to_str().unwrap()]);
    run(&["gen", "tri", "--n", "10", "--seed", "6", "--out", c.to_str().unwrap()]);
    let bytes_a = std::fs::read(&a).unwrap();
    assert_eq!(bytes_a, std::fs::read(&b).unwrap());
    assert_ne!(bytes_a, std::fs::read(&c).unwrap());
    let tri: PlanarTriangulation = serde_json::from_slice(&bytes_a).unwrap();
    assert_eq!(tri.n(), 10);
}

#[test]
fn gen_apex_fixture_has_headline_counts() {
    let path = tmp("apex.g6");
    let out = run(&["gen", "k6-apex", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let body = std::fs::read_to_string(&path).unwrap();
    let g = graph6::decode(body.trim()).unwrap();
    assert_eq!(g.n(), 9);
    assert_eq!(g.edge_count(), 33);
}

#[test]
fn gen_strip_has_no_separating_triangle() {
    let path = tmp("strip7.faces.json");
    let out = run(&[
        "gen", "strip", "--len", "7", "--format", "faces-json", "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let body = std::fs::read_to_string(&path).unwrap();
    let tri: PlanarTriangulation = serde_json::from_str(body.trim()).unwrap();
    assert!(!planar::has_separating_triangle(&tri));
}

#[test]
fn gen_rejects_impossible_format() {
    let path = tmp("apex.faces.json");
    let out = run(&[
        "gen", "k6-apex", "--format", "faces-json", "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2);
}

#[test]
fn gen_count_writes_a_numbered_family() {
    let dir = tmp("batch");
    std::fs::create_dir_all(&dir).unwrap();
    let out = run(&[
        "gen", "3tree", "--n", "9", "--seed", "2", "--count", "3", "--out", dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let mut names: Vec<String> = std::fs::read_dir(&dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    assert_eq!(names, ["3tree-0001.json", "3tree-0002.json", "3tree-0003.json"]);
}

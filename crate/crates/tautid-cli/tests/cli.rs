use std::process::{Command, Output};

use serde_json::Value;

fn tautid(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tautid")).args(args).output().expect("run tautid")
}

fn stdout_json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn stderr_code(out: &Output) -> String {
    let v: Value = serde_json::from_slice(&out.stderr).expect("json on stderr");
    v["error"]["code"].as_str().expect("code").to_string()
}

fn write_temp(name: &str, body: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("tautid-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

#[test]
fn lens_complex() {
    let v = stdout_json(&tautid(&["complex", "lens", "--p", "5", "--q", "2"]));
    assert_eq!(v["d1"][0], "1 - x");
    assert_eq!(v["d2"][0][0], "1 + x + x^2 + x^3 + x^4");
    assert_eq!(v["d3"][0], "1 - x^-2");
    assert_eq!(v["verified"], true);
}

#[test]
fn torus_complex_with_tautness() {
    let v = stdout_json(&tautid(&["complex", "torus3", "--tautness"]));
    assert_eq!(v["generators"].as_array().unwrap().len(), 3);
    assert_eq!(v["relators"].as_array().unwrap().len(), 3);
    assert_eq!(v["verified"], true);
    assert_eq!(v["tautness"]["result"], "taut");
}

#[test]
fn knot_families() {
    let v = stdout_json(&tautid(&["complex", "surgery", "--knot", "trefoil", "--q", "-1", "--partner", "figure-eight"]));
    assert_eq!(v["verified"], true);
    let v = stdout_json(&tautid(&["complex", "zero-cover", "--knot", "figure-eight", "--d", "2"]));
    assert_eq!(v["verified"], true);
}

#[test]
fn usage_errors_exit_two() {
    let out = tautid(&["complex", "lens", "--p", "5"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_code(&out), "usage");
    let out = tautid(&["homs", "lens", "--p", "4", "--q", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(tautid(&["--help"]).status.success());
}

#[test]
fn domain_errors_exit_one() {
    let out = tautid(&["complex", "lens", "--p", "6", "--q", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr_code(&out), "invalid_parameter");
    let out = tautid(&["linking", "--knot", "trefoil", "--fold", "6"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr_code(&out), "positive_rank");
    let out = tautid(&["dw", "heisenberg", "--m", "3", "--n", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr_code(&out), "invalid_parameter");
}

#[test]
fn trefoil_double_cover() {
    let v = stdout_json(&tautid(&["linking", "--knot", "trefoil", "--fold", "2"]));
    assert_eq!(v["delta"], "3");
    assert_eq!(v["orders"], serde_json::json!(["3"]));
}

#[test]
fn pretzel_routes_agree() {
    let v = stdout_json(&tautid(&["linking", "--pretzel", "3,5,7", "--fold", "2", "--cross-check"]));
    assert_eq!(v["kernel"]["delta"], "71");
    assert_eq!(v["comparison"]["agree"], true);
    assert_eq!(v["comparison"]["transported_gram"], v["cokernel"]["gram"]);
}

#[test]
fn lens_dw_both_routes() {
    for route in ["cup", "homogeneous"] {
        let v = stdout_json(&tautid(&["dw", "lens", "--p", "3", "--q", "1", "--route", route]));
        assert_eq!(v["dw"], serde_json::json!({"0": 1, "1": 2}), "route {route}");
    }
}

#[test]
fn heisenberg_counts() {
    let v = stdout_json(&tautid(&["dw", "heisenberg", "--m", "5", "--n", "1"]));
    let total: u64 = v["dw"].as_object().unwrap().values().map(|x| x.as_u64().unwrap()).sum();
    assert_eq!(total, 125);
    assert_eq!(v["alternative_image_homs"], 45);
}

#[test]
fn generic_dw_from_files() {
    let pres = write_temp(
        "l3.json",
        r#"{"generators":["x"],"relators":["x^3"],"relator_names":["r"],"identity":"r*x^-1*r^-1*x"}"#,
    );
    let omega: Vec<i64> =
        (0..27).map(|i| { let (a, b, c) = (i / 9, (i / 3) % 3, i % 3); a * ((b + c) / 3) }).collect();
    let coc = write_temp("omega.json", &serde_json::to_string(&omega).unwrap());
    let v = stdout_json(&tautid(&[
        "dw", "generic", "--presentation", pres.to_str().unwrap(), "--group", "cyclic:3",
        "--cocycle", coc.to_str().unwrap(), "--modulus", "3",
    ]));
    assert_eq!(v["homs"], 3);
    assert_eq!(v["dw"].as_object().unwrap().values().map(|x| x.as_u64().unwrap()).sum::<u64>(), 3);
    assert_eq!(v["dw"]["0"], 1);

    let bump = write_temp("bump.json", &serde_json::to_string(&[vec![0i64; 26], vec![1]].concat()).unwrap());
    let out = tautid(&[
        "dw", "generic", "--presentation", pres.to_str().unwrap(), "--group", "cyclic:3",
        "--cocycle", bump.to_str().unwrap(), "--modulus", "3",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr_code(&out), "undefined_cochain");
}

#[test]
fn homs_into_groups() {
    let v = stdout_json(&tautid(&["homs", "torus3", "--group", "cyclic:2"]));
    assert_eq!(v["count"], 8);
    let v = stdout_json(&tautid(&["homs", "lens", "--p", "2", "--q", "1", "--group", "quaternion"]));
    assert_eq!(v["count"], 2);
}

#[test]
fn batch_output_is_ordered_and_stable() {
    let batch = write_temp("batch.jsonl", "[[-1,1],[0,-1]]\n{\"name\":\"fig8\",\"V\":[[1,1],[0,-1]]}\n[[1]]\n");
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_tautid"))
            .args(["linking", "--batch", batch.to_str().unwrap(), "--fold", "3"])
            .env("TAUTID_THREADS", threads)
            .output()
            .unwrap()
    };
    let one = run("1");
    let four = run("4");
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(one.status.code(), Some(1));
    let lines: Vec<Value> =
        String::from_utf8(one.stdout).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 3);
    assert_eq!(lines[1]["name"], "fig8");
    assert_eq!(lines[1]["result"]["orders"], serde_json::json!(["4", "4"]));
    assert_eq!(lines[2]["error"]["code"], "not_seifert");
}

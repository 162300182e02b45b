//! End-to-end checks of the binary: exit codes, flag/config resolution,
//! column schemas, and byte-identical reruns.

use std::path::Path;
use std::process::{Command, Output};

fn wuyang(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wuyang"))
        .args(args)
        .env("NO_COLOR", "1")
        .output()
        .expect("binary runs")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn chern_plaquette_defaults_give_plus_one() {
    let out = wuyang(&["chern", "--delta1-mhz", "30", "--omega-mhz", "10", "--delta2-mhz", "0"]);
    assert!(out.status.success());
    let text = stdout_str(&out);
    assert!(text.contains("route,band,value,rounded,residual"), "{text}");
    let data = text.lines().find(|l| l.starts_with("plaquette,")).unwrap();
    let fields: Vec<&str> = data.split(',').collect();
    assert_eq!(fields[3], "1");
    // resolved units echoed in metadata: 2π·30 rad/us
    assert!(text.contains("delta1_rad_per_us = 1.88495"), "{text}");
}

#[test]
fn two_patch_chern_from_charge_and_winding() {
    let out = wuyang(&["chern", "--route", "two_patch", "--g-charge", "0.5"]);
    assert!(out.status.success());
    assert!(stdout_str(&out).lines().any(|l| l.starts_with("two_patch,") && l.contains(",1,")));

    let out = wuyang(&["chern", "--route", "two_patch", "--winding", "3"]);
    assert!(out.status.success());
    assert!(stdout_str(&out).lines().any(|l| l.starts_with("two_patch,") && l.contains(",3,")));
}

#[test]
fn quench_requires_t_ramp() {
    let out = wuyang(&["quench"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("t-ramp-us"), "stderr: {err}");
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let out = wuyang(&["chern", "--no-such-flag", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn boundary_degeneracy_is_a_computation_failure() {
    let out = wuyang(&["chern", "--delta1-mhz", "30", "--delta2-mhz", "30"]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("boundary degeneracy"), "stderr: {err}");
}

#[test]
fn transition_sweep_excludes_exact_boundary() {
    let out = wuyang(&[
        "transition",
        "--delta2-over-delta1",
        "-2:2:41",
        "--grid",
        "24x24",
    ]);
    assert!(out.status.success());
    let text = stdout_str(&out);
    assert!(text.contains("delta2_over_delta1,chern_ground"), "{text}");
    assert!(text.contains("nudged"), "{text}");
    assert!(!text.contains("NaN"), "{text}");
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count() - 1, 41);
}

#[test]
fn schema_lines_are_stable() {
    // golden column headers per command
    let cases: Vec<(Vec<&str>, &str)> = vec![
        (
            vec!["curvature", "--grid", "8x8"],
            "theta,phi,f_spectral,f_qgt",
        ),
        (vec!["chern"], "route,band,value,rounded,residual"),
        (
            vec!["transition", "--delta2-over-delta1", "0:0.5:3", "--grid", "24x24"],
            "delta2_over_delta1,chern_ground",
        ),
        (
            vec!["quench", "--t-ramp-us", "0.5", "--samples", "11"],
            "t_us,theta,sigma_y,f_theta_phi",
        ),
        (
            vec![
                "fidelity",
               "--delta2-over-delta1",
                "0:1:2",
                "--theta-count",
                "2",
                "--t-ramp-us",
                "1",
            ],
            "theta_meas,delta2_over_delta1,fidelity,target",
        ),
        (
            vec!["geometry", "--grid", "64x64"],
            "theta_cap,bulk,boundary,euler_estimate",
        ),
        (
            vec!["monopole", "--radii", "1"],
            "g,r,flux,chern_two_patch",
        ),
    ];
    for (args, header) in cases {
        let out = wuyang(&args);
        assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        let text = stdout_str(&out);
        let first_data = text.lines().find(|l| !l.starts_with('#')).unwrap();
        assert_eq!(first_data, header, "schema drift for {args:?}");
    }
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let run_to = |path: &Path, args: &[&str]| {
        let mut full = args.to_vec();
        let out_str = path.to_str().unwrap();
        full.extend_from_slice(&["--out", out_str]);
        let out = wuyang(&full);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        std::fs::read(path).unwrap()
    };
    for (name, args) in [
        ("transition", vec!["transition", "--delta2-over-delta1", "-2:2:9", "--grid", "24x24"]),
        ("quench", vec!["quench", "--t-ramp-us", "0.5", "--samples", "51", "--shots", "800", "--seed", "5"]),
        ("geometry", vec!["geometry", "--grid", "64x64", "--format", "json"]),
    ] {
        let a = run_to(&dir.path().join(format!("{name}_a")), &args);
        let b = run_to(&dir.path().join(format!("{name}_b")), &args);
        assert_eq!(a, b, "{name} output differs between runs");
    }
}

#[test]
fn config_file_supplies_defaults_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("run.conf");
    std::fs::write(&conf, "delta1-mhz = 30\ndelta2-mhz = 60\nband = ground\n").unwrap();
    let conf_s = conf.to_str().unwrap();

    // config alone: Δ₂ = 2Δ₁ puts the charge outside, C = 0
    let out = wuyang(&["chern", "--config", conf_s]);
    assert!(out.status.success());
    assert!(stdout_str(&out).lines().any(|l| l.starts_with("plaquette,ground,") && l.contains(",0,")));

    // flag overrides the file: back inside, C = 1
    let out = wuyang(&["chern", "--config", conf_s, "--delta2-mhz", "0"]);
    assert!(out.status.success());
    assert!(stdout_str(&out).lines().any(|l| l.starts_with("plaquette,ground,") && l.contains(",1,")));
}

#[test]
fn json_format_carries_schema() {
    let out = wuyang(&["monopole", "--format", "json"]);
    assert!(out.status.success());
    let text = stdout_str(&out);
    assert!(text.contains("\"columns\""));
    assert!(text.contains("\"chern_two_patch\""));
}

#[test]
fn geometry_reports_euler_two() {
    let out = wuyang(&["geometry", "--grid", "128x128"]);
    assert!(out.status.success());
    let text = stdout_str(&out);
    let data = text.lines().filter(|l| !l.starts_with('#')).nth(1).unwrap();
    let euler: f64 = data.split(',').nth(3).unwrap().parse().unwrap();
    assert!((euler - 2.0).abs() < 1e-3, "euler {euler}");
}

use std::fs;
use std::process::{Command, Output};

fn movwell(args: &[&str], envs: &[(&str, &std::path::Path)], cwd: &std::path::Path) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_movwell"));
    cmd.args(args).current_dir(cwd).env_remove("MOVWELL_OUTPUT_DIR");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn list_presets_names_every_scenario() {
    let dir = tempfile::tempdir().unwrap();
    let out = movwell(&["list-presets"], &[], dir.path());
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for name in [
        "uniform-a16",
        "doescher-a16",
        "fojon-oscillating-w1",
        "fojon-oscillating-w10",
        "fojon-oscillating-w4pi2",
        "sudden-b10",
    ] {
        assert!(text.contains(name), "{name} missing from\n{text}");
    }
}

#[test]
fn run_writes_into_environment_directory() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("from-env");
    let out = movwell(
        &[
            "run",
            "--preset",
            "uniform-a16",
            "--method",
            "exact",
            "--output-path",
            "ignored",
        ],
        &[("MOVWELL_OUTPUT_DIR", &target)],
        dir.path(),
    );
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(target.join("manifest.json").exists());
    assert!(target.join("norm.csv").exists());
    assert!(target.join("density_000100.csv").exists());
    assert!(!dir.path().join("ignored").exists());
    let density = fs::read_to_string(target.join("density_000100.csv")).unwrap();
    assert_eq!(density.lines().next(), Some("x,density"));
    assert_eq!(density.lines().count(), 2002);
}

#[test]
fn config_file_takes_precedence_over_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("short.toml");
    fs::write(&cfg, "t_max = 0.01\nn_samples = 3\noutputs = [\"norm\"]\noutput_path = \"cfg-out\"\n").unwrap();
    let out = movwell(
        &[
            "run",
            "--preset",
            "fojon-oscillating-w1",
            "--t-max",
            "2.0",
            "--output-path",
            "flag-out",
            "--config",
            cfg.to_str().unwrap(),
        ],
        &[],
        dir.path(),
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let norm = fs::read_to_string(dir.path().join("cfg-out/norm.csv")).unwrap();
    assert_eq!(norm.lines().count(), 4);
    assert!(norm.lines().last().unwrap().starts_with("1.0000000000000000e-2,"));
}

#[test]
fn errors_exit_nonzero_with_message() {
    let dir = tempfile::tempdir().unwrap();
    let out = movwell(&["run", "--preset", "uniform-a16", "--resolution", "0"], &[], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("resolution"), "{}", stderr(&out));

    let out = movwell(&["run", "--preset", "uniform-a16", "--t-max", "0.1"], &[], dir.path());
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("not positive"), "{}", stderr(&out));

    let out = movwell(
        &["coefficients", "--preset", "fojon-oscillating-w1", "--modes", "1,21"],
        &[],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("modes"));

    let out = movwell(&["run", "--preset", "uniform-a16", "--dt", "-1"], &[], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("dt"));

    let out = movwell(&["bogus"], &[], dir.path());
    assert!(!out.status.success());
}

#[test]
fn compare_writes_ode_counts() {
    let dir = tempfile::tempdir().unwrap();
    let out = movwell(
        &[
            "compare",
            "--preset",
            "uniform-a16",
            "--t-max",
            "0.03",
            "--spectral",
            "10,20",
            "--fd",
            "30",
            "--table",
            "table.csv",
        ],
        &[],
        dir.path(),
    );
    assert!(out.status.success(), "{}", stderr(&out));
    let table = fs::read_to_string(dir.path().join("table.csv")).unwrap();
    let lines: Vec<&str> = table.lines().collect();
    assert_eq!(lines[0], "method,resolution,n_complex_odes,average_error,final_norm_drift");
    assert!(lines[1].starts_with("spectral,10,10,"));
    assert!(lines[2].starts_with("spectral,20,20,"));
    assert!(lines[3].starts_with("fd,30,29,"));
}

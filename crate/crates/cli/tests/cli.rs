use std::path::Path;
use std::process::{Command, Output};

fn gsinc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gsinc")).args(args).output().expect("run gsinc")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("spaces.cfg");
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn gevrey_dilated_system_satisfies_l_and_i() {
    let out = gsinc(&["conditions", "dilated(gevrey(s=1))", "--kind", "roumieu"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    for label in ["[L] roumieu", "[I] roumieu"] {
        let line = text.lines().find(|l| l.starts_with(label)).unwrap_or_else(|| panic!("{label} missing:\n{text}"));
        assert!(line.contains("witnessed"), "{line}");
    }
}

#[test]
fn power_weight_satisfies_alpha_gamma_delta() {
    let out = gsinc(&["conditions", "pow(rho=0.5)"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    for label in ["(alpha)", "(gamma)", "(delta)"] {
        let line = text.lines().find(|l| l.starts_with(label)).unwrap();
        assert!(line.contains("witnessed"), "{line}");
    }
}

#[test]
fn malformed_spec_exits_with_two_and_a_position() {
    let out = gsinc(&["conditions", "gevrey(s="]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("1:10"));
    assert_eq!(code(&gsinc(&["conditions"])), 2);
    assert_eq!(code(&gsinc(&["verify", "--suite", "nonsense"])), 2);
}

#[test]
fn decide_exit_codes_follow_the_conclusion() {
    let yes = gsinc(&["decide-inclusion", "gs(s=1/2)", "gs(s=1)", "--kind", "roumieu"]);
    assert_eq!(code(&yes), 0, "{}", stdout(&yes));
    let no = gsinc(&["decide-inclusion", "gs(s=1)", "gs(s=1/2)", "--kind", "roumieu"]);
    assert_eq!(code(&no), 1, "{}", stdout(&no));
    let open = gsinc(&["decide-inclusion", "bb(omega=pow(rho=1/2))", "gs(s=1)", "--kind", "roumieu"]);
    assert_eq!(code(&open), 3, "{}", stdout(&open));
}

#[test]
fn compare_commands() {
    assert_eq!(code(&gsinc(&["compare-sequences", "gevrey(s=1)", "gevrey(s=2)"])), 0);
    assert_eq!(code(&gsinc(&["compare-sequences", "gevrey(s=2)", "gevrey(s=1)"])), 1);
    assert_eq!(code(&gsinc(&["compare-functions", "pow(rho=1)", "pow(rho=0.5)"])), 0);
    assert_eq!(code(&gsinc(&["compare-functions", "pow(rho=0.5)", "pow(rho=1)"])), 1);
    assert_eq!(code(&gsinc(&["compare-sequences", "dilated(gevrey(s=1))", "dilated(gevrey(s=2))"])), 2);
    let sys = gsinc(&["compare-sequences", "dilated(gevrey(s=1))", "dilated(gevrey(s=2))", "--kind", "beurling"]);
    assert_eq!(code(&sys), 0, "{}", stdout(&sys));
}

#[test]
fn report_is_byte_identical_on_rerun() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "kind = roumieu\nhalf = gs(s=1/2)\none = gs(s=1)\n");
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for out in [&a, &b] {
        let r = gsinc(&["report", "--config", &cfg, "--out", out.to_str().unwrap()]);
        assert_eq!(code(&r), 0);
    }
    for file in ["certificate.csv", "summary.txt"] {
        let (x, y) = (std::fs::read(a.join(file)).unwrap(), std::fs::read(b.join(file)).unwrap());
        assert!(!x.is_empty());
        assert_eq!(x, y, "{file} differs");
    }
    let csv = std::fs::read_to_string(a.join("certificate.csv")).unwrap();
    assert_eq!(csv.lines().filter(|l| l.starts_with("conclusion,")).count(), 2);
}

#[test]
fn flags_override_config_settings() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "kind = beurling\nhalf = gs(s=1/2)\none = gs(s=1)\n");
    let out = gsinc(&["decide-inclusion", "half", "one", "--config", &cfg, "--kind", "roumieu"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("kind=roumieu"));
}

#[test]
fn empty_input_gives_an_empty_report() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "# nothing here\n");
    let out_dir = dir.path().join("out");
    let out = gsinc(&["report", "--config", &cfg, "--out", out_dir.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "empty report\n");
    let csv = std::fs::read_to_string(out_dir.join("certificate.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1);
}

#[test]
fn config_errors_carry_a_line() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "a = gs(s=1)\nb = gs(s=\n");
    let out = gsinc(&["report", "--config", &cfg]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("2:"), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn verify_suite_passes() {
    let out = gsinc(&["verify", "--suite", "parametrix"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(stdout(&out).contains("PASS"));
}

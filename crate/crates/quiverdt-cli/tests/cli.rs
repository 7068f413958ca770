//! End-to-end tests of the command-line interface: exact output bytes, exit
//! codes, JSON round-trips, and determinism.

use std::io::Write;

const K2: &str = r#"{"vertices":["a","b"],"arrows":[[0,2],[0,0]]}"#;
const TWO_CYCLE: &str = r#"{"vertices":["a","b"],"arrows":[[0,1],[1,0]]}"#;

fn run_cli(args: &[&str], stdin: &str) -> (u8, String, String) {
    let mut input = stdin.as_bytes();
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("quiverdt".to_string()).chain(args.iter().map(|s| s.to_string()));
    let code = quiverdt_cli::run(argv, &mut input, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

#[test]
fn dt_loop_quiver_rows() {
    let (code, out, err) = run_cli(&["dt", "--m", "2", "--theta", "0", "--box", "2"], "");
    assert_eq!(code, 0, "{err}");
    assert_eq!(
        out,
        "d=1: omega_tilde=1; Omega[k=-1]=1\nd=2: omega_tilde=1; Omega[k=-4]=1\n"
    );
}

#[test]
fn sst_dims_via_stdin() {
    let (code, out, err) = run_cli(
        &[
            "sst-dims", "--quiver", "-", "--theta", "1,0", "--d", "1,1", "--jmax", "3",
        ],
        K2,
    );
    assert_eq!(code, 0, "{err}");
    assert_eq!(out, "1 2 2 2\n");
}

#[test]
fn sst_dims_via_file() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    file.write_all(K2.as_bytes()).unwrap();
    let path = file.path().to_str().unwrap();
    let (code, out, _) = run_cli(
        &[
            "sst-dims", "--quiver", path, "--theta", "1,0", "--d", "1,1", "--jmax", "3",
        ],
        "",
    );
    assert_eq!(code, 0);
    assert_eq!(out, "1 2 2 2\n");
}

#[test]
fn product_unit_times_x() {
    let (code, out, err) = run_cli(
        &[
            "product", "--quiver", "-", "--left-d", "1,1", "--left", "1", "--right-d", "1,1",
            "--right", "[1|]",
        ],
        K2,
    );
    assert_eq!(code, 0, "{err}");
    assert_eq!(out, "[|1]\n");
}

#[test]
fn star_product_no_loops() {
    let (code, out, _) = run_cli(
        &[
            "product", "--m", "0", "--left-d", "1", "--left", "1", "--right-d", "1", "--right",
            "[1]", "--star",
        ],
        "",
    );
    assert_eq!(code, 0);
    assert_eq!(out, "1\n");
}

#[test]
fn oracle_counts_and_checks() {
    let (code, out, err) = run_cli(
        &[
            "oracle", "--quiver", "-", "--theta", "1,0", "--d", "1,1", "--primes", "2,3",
            "--budget", "1000000",
        ],
        K2,
    );
    assert_eq!(code, 0, "{err}");
    assert_eq!(out, "p=2: count=3 check=ok\np=3: count=8 check=ok\n");
}

#[test]
fn check_wallcross_ok() {
    let (code, out, _) = run_cli(
        &[
            "check",
            "wallcross",
            "--quiver",
            "-",
            "--theta",
            "1,0",
            "--box",
            "2,2",
        ],
        TWO_CYCLE,
    );
    assert_eq!(code, 0);
    assert_eq!(out, "check wallcross: ok\n");
}

#[test]
fn json_output_round_trips_and_is_deterministic() {
    let args = [
        "dt", "--m", "2", "--theta", "0", "--box", "2", "--format", "json",
    ];
    let first = run_cli(&args, "");
    let second = run_cli(&args, "");
    assert_eq!(first, second, "byte-identical reruns");
    assert_eq!(first.0, 0);
    let value: serde_json::Value = serde_json::from_str(&first.1).unwrap();
    let again = format!("{}\n", serde_json::to_string_pretty(&value).unwrap());
    assert_eq!(again, first.1, "parse and re-serialize is the identity");
}

#[test]
fn series_text_is_deterministic() {
    let args = ["series", "--quiver", "-", "--box", "2,2"];
    let first = run_cli(&args, K2);
    let second = run_cli(&args, K2);
    assert_eq!(first, second);
    assert_eq!(first.0, 0);
    assert!(first.1.starts_with("d=(0,0): 1\n"), "{}", first.1);
}

#[test]
fn usage_errors_exit_two() {
    // Missing required --theta.
    let (code, _, _) = run_cli(&["dt", "--m", "2", "--box", "2"], "");
    assert_eq!(code, 2);
    // Unreadable quiver file.
    let (code, _, err) = run_cli(
        &[
            "dt",
            "--quiver",
            "/nonexistent/q.json",
            "--theta",
            "0",
            "--box",
            "2",
        ],
        "",
    );
    assert_eq!(code, 2);
    assert!(err.starts_with("error: "), "{err}");
    // Malformed element expression.
    let (code, _, _) = run_cli(
        &[
            "product", "--quiver", "-", "--left-d", "1,1", "--left", "[1|", "--right-d", "1,1",
            "--right", "1",
        ],
        K2,
    );
    assert_eq!(code, 2);
    // --theta without --slope.
    let (code, _, _) = run_cli(
        &["series", "--quiver", "-", "--box", "1,1", "--theta", "1,0"],
        K2,
    );
    assert_eq!(code, 2);
}

#[test]
fn non_generic_stability_exits_three() {
    let (code, _, err) = run_cli(&["dt", "--quiver", "-", "--theta", "0,0", "--box", "1,1"], K2);
    assert_eq!(code, 3);
    assert!(err.contains("not generic"), "{err}");
}

#[test]
fn exhausted_budget_exits_three() {
    let (code, _, err) = run_cli(
        &[
            "oracle", "--quiver", "-", "--theta", "1,0", "--d", "2,2", "--budget", "10",
        ],
        K2,
    );
    assert_eq!(code, 3);
    assert!(err.contains("budget"), "{err}");
}

#[test]
fn budget_env_variable() {
    std::env::set_var("QUIVERDT_BUDGET", "10");
    let (code, _, err) = run_cli(
        &["oracle", "--quiver", "-", "--theta", "1,0", "--d", "2,2"],
        K2,
    );
    assert_eq!(code, 3, "{err}");
    std::env::set_var("QUIVERDT_BUDGET", "not-a-number");
    let (code, _, _) = run_cli(
        &["oracle", "--quiver", "-", "--theta", "1,0", "--d", "1,1"],
        K2,
    );
    assert_eq!(code, 2);
    std::env::remove_var("QUIVERDT_BUDGET");
}

#[test]
fn help_exits_zero() {
    let (code, out, _) = run_cli(&["--help"], "");
    assert_eq!(code, 0);
    assert!(out.contains("quiverdt"));
}

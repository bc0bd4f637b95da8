use std::process::{Command, Output};

fn absreg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_absreg")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn row<'a>(text: &'a str, class: &str) -> Vec<&'a str> {
    text.lines()
        .map(|l| l.split_whitespace().collect::<Vec<_>>())
        .find(|cols| cols.first() == Some(&class))
        .unwrap_or_else(|| panic!("no {class} row in\n{text}"))
}

#[test]
fn classify_depolarized_bell_pair() {
    let o = absreg(&["classify", "--state", "pure-schmidt:theta=0.7854", "--channel", "global-depolarizing:p=0.5"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let afef = row(&text, "AFEF");
    assert_eq!(afef[1], "false");
    assert!((afef[2].parse::<f64>().unwrap() - 0.625).abs() < 1e-6);
    assert_eq!(row(&text, "ACVENN")[1], "true");
}

#[test]
fn classify_maximally_mixed_is_in_every_class() {
    let o = absreg(&["classify", "--state", "iso:d=3,beta=0"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for class in ["AFEF", "ACVENN", "ACRENN(0.5)", "ACRENN(2)", "ACRE2NN"] {
        assert_eq!(row(&text, class)[1], "true", "{class}");
    }
}

#[test]
fn classify_ghz_w_marginal() {
    let o = absreg(&["classify", "--state", "ghzw:p=0.5", "--marginal", "23"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(row(&text, "ACRE2NN")[1], "true");
    assert_eq!(row(&text, "ACRE2NN-bloch")[1], "true");
}

#[test]
fn classify_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("verdicts.csv");
    let o = absreg(&["classify", "--state", "bell:index=0", "--alpha", "0.5,2,5", "--csv", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(&path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("class,alpha,member,witness,threshold"));
    assert_eq!(lines.count(), 6);
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["classify", "--state", "bogus:x=1"],
        vec!["classify", "--state", "pure-schmidt:theta="],
        vec!["classify", "--state", "iso:d=3,beta=0", "--channel", "global-depolarizing:p=2"],
        vec!["classify", "--state", "ghzw:p=0.5"],
        vec!["swap-scan", "--family", "phase-damping"],
        vec!["no-such-command"],
    ] {
        let o = absreg(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(o.stdout.is_empty() || args[0] != "classify");
    }
}

#[test]
fn syntax_errors_report_position() {
    let o = absreg(&["classify", "--state", "iso:d=3,,beta=0"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("position"), "{err}");
}

#[test]
fn phase_damping_swap_family_is_refused() {
    let o = absreg(&["swap-scan", "--family", "phase-damping", "--grid", "4"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8(o.stderr).unwrap().contains("refused"));
}

#[test]
fn unwritable_output_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing").join("t.csv");
    let o = absreg(&["table3", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let sample = ["sample", "--state", "iso:d=2,beta=0.2", "--unitaries", "50", "--seed", "7"];
    let a = absreg(&sample);
    let b = absreg(&sample);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let other = absreg(&["sample", "--state", "iso:d=2,beta=0.2", "--unitaries", "50", "--seed", "8"]);
    assert_ne!(a.stdout, other.stdout);

    let dir = tempfile::tempdir().unwrap();
    let (p1, p2) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    for p in [&p1, &p2] {
        let o = absreg(&["swap-scan", "--family", "global-depolarizing", "--grid", "6", "--out", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
    }
    assert_eq!(std::fs::read(&p1).unwrap(), std::fs::read(&p2).unwrap());
}

#[test]
fn swap_scan_csv_has_one_row_per_point() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scan.csv");
    let o = absreg(&["swap-scan", "--family", "amplitude-damping:0.714286", "--grid", "5", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(&path).unwrap();
    let header = csv.lines().next().unwrap();
    assert!(header.ends_with(",success"), "{header}");
    assert_eq!(csv.lines().count(), 1 + 125);
}

#[test]
fn table_commands_write_csv() {
    let dir = tempfile::tempdir().unwrap();
    for (cmd, rows) in [("table2", 8), ("table3", 4), ("table4", 4), ("thresholds", 6)] {
        let path = dir.path().join(format!("{cmd}.csv"));
        let o = absreg(&[cmd, "--out", path.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{cmd}");
        let csv = std::fs::read_to_string(&path).unwrap();
        assert_eq!(csv.lines().count(), 1 + rows, "{cmd}:\n{csv}");
    }
}

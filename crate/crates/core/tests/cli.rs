use std::process::{Command, Output};

fn gwtree(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gwtree")).args(args).output().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = gwtree(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn data_rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

/// Re-runs the configuration recorded in the first line.
fn rerun_from_header(csv: &str) -> String {
    let header = csv.lines().next().unwrap().strip_prefix("# gwtree ").unwrap();
    let args: Vec<&str> = header.split_whitespace().collect();
    stdout(&args)
}

#[test]
fn sweep_encloses_one_child_probability() {
    let out = stdout(&["sweep", "--property", "root1", "--lambda", "0.1:5:50", "--k", "1", "--cap", "60"]);
    let rows = data_rows(&out);
    assert_eq!(rows.len(), 50);
    assert_eq!(
        out.lines().find(|l| !l.starts_with('#')).unwrap(),
        "property,k,lambda,lower,upper,tail_mass"
    );
    for row in rows {
        let lambda: f64 = row[2].parse().unwrap();
        let (lower, upper): (f64, f64) = (row[3].parse().unwrap(), row[4].parse().unwrap());
        let exact = lambda * (-lambda).exp();
        assert!(lower <= exact && exact <= upper, "{row:?}");
    }
}

#[test]
fn survival_at_one_is_zero() {
    let out = stdout(&["survival", "--lambda", "1.0"]);
    let rows = data_rows(&out);
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][1].parse::<f64>().unwrap(), 0.0);
}

#[test]
fn decay_is_byte_identical_across_runs() {
    let args = [
        "decay", "--property", "even1", "--lambda", "2", "--k", "10:60:10", "--horizon", "300", "--samples", "100000",
        "--seed", "7",
    ];
    let a = gwtree(&args);
    let b = gwtree(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.contains("k,estimate,ci_low,ci_high,n_samples"));
    assert_eq!(data_rows(&text).len(), 6);
    // the seed is printed
    assert!(String::from_utf8_lossy(&a.stderr).contains("rng seed: 7"));
}

#[test]
fn headers_reproduce_outputs() {
    let commands: [&[&str]; 9] = [
        &["exact", "--property", "size-eq:3", "--k", "3", "--lambda", "0.5"],
        &["mc", "--property", "root1", "--k", "1", "--lambda", "1", "--samples", "20000"],
        &["decay", "--property", "even1+flevel2:prime", "--lambda", "2", "--k", "5:15:5", "--samples", "5000"],
        &["series", "--property", "even1", "--k", "3", "--nmax", "12"],
        &["series", "--property", "even1", "--k", "3", "--z", "1.5,-0.25"],
        &["disc", "--property", "root1", "--k", "1", "--lambda", "1", "--epsilon", "0.1"],
        &["cdecay", "--property", "even1", "--lambda", "2", "--k", "2:6:2"],
        &["lambertw", "--x", "-0.3:2:4"],
        &["evenlevel", "--lambda", "1", "--k", "10:30:10", "--samples", "5000", "--format", "text"],
    ];
    for args in commands {
        let out = stdout(args);
        assert!(out.starts_with("# gwtree "), "{out}");
        assert_eq!(rerun_from_header(&out), out, "{args:?}");
        assert!(!out.contains('\r'));
    }
}

#[test]
fn output_file_matches_stdout() {
    let dir = std::env::temp_dir().join(format!("gwtree-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("survival.csv");
    let args = ["survival", "--lambda", "0.5:3:6"];
    let mut with_file = args.to_vec();
    with_file.extend(["--output", path.to_str().unwrap()]);
    let out = gwtree(&with_file);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    assert_eq!(written, stdout(&args));
    assert_eq!(rerun_from_header(&written), written);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn floats_have_seventeen_significant_digits() {
    let out = stdout(&["lambertw", "--x", "1"]);
    let w = &data_rows(&out)[0][1];
    let mantissa = w.split('e').next().unwrap().replace(['.', '-'], "");
    assert_eq!(mantissa.len(), 17, "{w}");
}

#[test]
fn exit_codes() {
    assert_eq!(gwtree(&["exact", "--property", "bogus", "--k", "2", "--lambda", "1"]).status.code(), Some(2));
    assert_eq!(gwtree(&["exact", "--property", "root1", "--k", "2", "--lambda", "0"]).status.code(), Some(2));
    assert_eq!(gwtree(&["sweep", "--property", "root1", "--k", "1", "--lambda", "5:1:3"]).status.code(), Some(2));
    assert_eq!(gwtree(&["lambertw", "--x", "-1"]).status.code(), Some(2));
    assert_eq!(gwtree(&["nonsense"]).status.code(), Some(2));
    let out = gwtree(&["series", "--property", "root1", "--k", "1", "--z", "6,0", "--nmax", "4"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("remainder"));
}

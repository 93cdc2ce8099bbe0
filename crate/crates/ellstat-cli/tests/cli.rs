//! End-to-end tests of the `ellstat` binary: schemas, determinism across
//! thread counts, checkpoint resume, exit codes.

use std::process::{Command, Output};

fn ellstat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ellstat"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(args: &[&str]) -> String {
    let out = ellstat(args);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn split_golden_row() {
    let s = stdout_of(&["split", "--curve", "E", "--xmax", "100000", "--serre-m", "3"]);
    let mut lines = s.lines();
    assert!(lines.next().unwrap().starts_with("# ellstat "));
    assert!(lines.next().unwrap().starts_with("# subcommand=split curve=E xmax=100000"));
    assert_eq!(lines.next().unwrap(), "X,pi,S,ratio");
    assert_eq!(lines.next().unwrap(), "100000,9592,11945,1.24531");
    assert_eq!(lines.next(), None);
}

#[test]
fn split_per_d_comment() {
    let s = stdout_of(&[
        "split", "--curve", "E", "--xmax", "20000", "--serre-m", "3", "--d", "2",
    ]);
    assert!(s.contains("# pi_split(d=2) = "), "missing per-d line: {s}");
}

#[test]
fn twin_n_schema() {
    let s = stdout_of(&["twin-n", "--curve", "A", "--n", "100"]);
    assert!(s.contains("n,M,window_lo,window_hi,primes"));
    let row = s.lines().last().unwrap();
    assert!(row.starts_with("100,"), "row: {row}");
    let fields: Vec<&str> = row.split(',').collect();
    assert_eq!(fields.len(), 5);
    assert_eq!(fields[2], "81");
    assert_eq!(fields[3], "121");
}

#[test]
fn constants_schema() {
    let s = stdout_of(&["constants", "--serre-m", "37"]);
    assert!(s.contains("name,rational,value,tail_bound"));
    assert!(s.contains("c_prime,1732338101/1732332625,"));
    assert!(s.contains("\nc0,,1.2584483503,"));
    assert!(s.contains("\nlinnik,,1.9435964368,"));
}

#[test]
fn census_schema_and_partition() {
    let s = stdout_of(&["census", "--xmax", "2000"]);
    assert!(s.contains("X,sum_all,sum_small,sum_large,ratio_cX4"));
    let row = s.lines().last().unwrap();
    let f: Vec<u64> = row.split(',').take(4).map(|v| v.parse().unwrap()).collect();
    assert_eq!(f[0], 2000);
    assert_eq!(f[1], f[2] + f[3], "sum_all = sum_small + sum_large");
}

#[test]
fn invariants_rows() {
    let s = stdout_of(&["invariants", "--curve", "A", "--xmax", "20"]);
    assert!(s.contains("p,status,a,n,d1,d2,supersingular"));
    assert!(s.contains("17,good,2,16,4,1,false"));
    assert!(s.contains("7,good,0,8,2,2,true"));
}

#[test]
fn thread_count_independence_byte_exact() {
    let args = |t: &str| {
        vec![
            "split".to_string(),
            "--curve".into(),
            "F".into(),
            "--xmax".into(),
            "200000".into(),
            "--serre-m".into(),
            "37".into(),
            "--block-size".into(),
            "32768".into(),
            "--threads".into(),
            t.to_string(),
        ]
    };
    let one = stdout_of(&args("1").iter().map(String::as_str).collect::<Vec<_>>());
    for t in ["2", "8"] {
        let multi = stdout_of(&args(t).iter().map(String::as_str).collect::<Vec<_>>());
        assert_eq!(one, multi, "threads = {t}");
    }
    // and the other subcommands at a smaller scale
    for sub in ["outside", "twins", "census"] {
        let base = |t: &str| {
            let mut v = vec![
                sub.to_string(),
                "--curve".into(),
                "A".into(),
                "--xmax".into(),
                "5000".into(),
                "--block-size".into(),
                "2048".into(),
                "--threads".into(),
                t.to_string(),
            ];
            if sub == "outside" {
                v.extend(["--serre-m".into(), "3".into()]);
            }
            v
        };
        let one = stdout_of(&base("1").iter().map(String::as_str).collect::<Vec<_>>());
        let eight = stdout_of(&base("8").iter().map(String::as_str).collect::<Vec<_>>());
        assert_eq!(one, eight, "subcommand {sub}");
    }
}

#[test]
fn checkpoint_resume_reproduces_uninterrupted_run() {
    use ellstat_cli::checkpoint;
    use ellstat_cli::run::RunConfig;
    use ellstat_core::splitting::{self, ScanConfig};

    let dir = tempfile::tempdir().unwrap();
    let out_full = dir.path().join("full.csv");
    let out_resumed = dir.path().join("resumed.csv");
    let cp_path = dir.path().join("scan.ckpt");

    let common = [
        "split", "--curve", "E", "--xmax", "100000", "--serre-m", "3", "--block-size", "16384",
        "--seed", "9",
    ];
    // uninterrupted run
    let mut args: Vec<&str> = common.to_vec();
    let full_path = out_full.to_str().unwrap();
    args.extend(["--out", full_path]);
    assert!(ellstat(&args).status.success());

    // simulate a run killed halfway: persist the checkpoint as the binary
    // would after about half the blocks, using the same fingerprint
    let cfg = RunConfig {
        curve_spec: "E".into(),
        curve: ellstat_cli::curves::parse_curve("E").unwrap(),
        xmax: 100_000,
        seed: 9,
        threads: 1,
        block_size: 16384,
        serre_m: Some(3),
        d: None,
        n: None,
        k: 3,
        include_small: false,
        oracle: false,
        out: None,
        checkpoint: None,
    };
    let fp = cfg.fingerprint("split");
    let scan_cfg = ScanConfig {
        seed: 9,
        serre_m: Some(3),
        threads: 1,
        block_span: 16384,
        include_small_primes: false,
    };
    let n_blocks = (100_000 - 5) / 16384 + 1;
    let half = n_blocks / 2;
    let mut saved = false;
    splitting::scan_with_progress(&cfg.curve, 100_000, &scan_cfg, 0, None, |idx, acc| {
        if idx == half && !saved {
            checkpoint::save_state(&cp_path, &fp, idx, acc).unwrap();
            saved = true;
        }
    })
    .unwrap();
    assert!(saved, "checkpoint written at half");

    // resume through the binary
    let mut args: Vec<&str> = common.to_vec();
    let resumed_path = out_resumed.to_str().unwrap();
    let cp_str = cp_path.to_str().unwrap();
    args.extend(["--out", resumed_path, "--checkpoint", cp_str]);
    let out = ellstat(&args);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));

    let full = std::fs::read_to_string(&out_full).unwrap();
    let resumed = std::fs::read_to_string(&out_resumed).unwrap();
    assert_eq!(full, resumed, "resumed run must be byte-identical");
}

#[test]
fn checkpoint_mismatch_and_corruption_refused() {
    let dir = tempfile::tempdir().unwrap();
    let cp = dir.path().join("scan.ckpt");
    let cp_str = cp.to_str().unwrap();
    // write a checkpoint under one config
    let args = [
        "split", "--curve", "E", "--xmax", "50000", "--serre-m", "3", "--checkpoint", cp_str,
        "--out",
    ];
    let out1 = dir.path().join("a.csv");
    let mut full: Vec<&str> = args.to_vec();
    let out1s = out1.to_str().unwrap();
    full.push(out1s);
    assert!(ellstat(&full).status.success());
    assert!(cp.exists());

    // different xmax: fingerprint mismatch, exit 2, no output written
    let out2 = dir.path().join("b.csv");
    let out2s = out2.to_str().unwrap();
    let out = ellstat(&[
        "split", "--curve", "E", "--xmax", "60000", "--serre-m", "3", "--checkpoint", cp_str,
        "--out", out2s,
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out2.exists(), "no partial output on refusal");

    // corrupt the file: clean error
    std::fs::write(&cp, b"garbage{").unwrap();
    let out = ellstat(&full);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_and_singular_curve_exit_1() {
    let out = ellstat(&["split", "--curve", "0,0,0,0,0", "--xmax", "100"]);
    assert_eq!(out.status.code(), Some(1));
    let out = ellstat(&["no-such-subcommand"]);
    assert_eq!(out.status.code(), Some(1));
    let out = ellstat(&["split", "--xmax", "2"]);
    assert_eq!(out.status.code(), Some(1), "xmax below 5 is usage error");
}

#[test]
fn census_oracle_small_range() {
    let out = ellstat(&["census", "--xmax", "100", "--oracle"]);
    assert!(out.status.success());
}

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use ennbo_cli::plot::{curves, max_so_far_chart};
use ennbo_core::harness::{read_traces, TRACE_HEADER};

fn ennbo(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ennbo"))
        .args(args)
        .current_dir(cwd)
        .env_remove("ENNBO_OUTPUT_DIR")
        .output()
        .expect("binary runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

const SMALL: &[&str] = &[
    "--function", "sphere", "--dimension", "3", "--rounds", "5", "--arms-per-round", "2",
    "--record-timing", "false",
];

fn run(extra: &[&str], dir: &Path) -> Output {
    let mut args = vec!["run"];
    args.extend_from_slice(SMALL);
    args.extend_from_slice(extra);
    ennbo(&args, dir)
}

#[test]
fn minimal_run_writes_one_row_per_arm() {
    let tmp = tempfile::tempdir().unwrap();
    let o = run(&["--methods", "random", "--output-dir", "out"], tmp.path());
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stderr(&o).contains("warning"));
    let out = tmp.path().join("out");
    let text = fs::read_to_string(out.join("traces.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), TRACE_HEADER.join(","));
    assert_eq!(lines.count(), 5 * 2);
    let scores = fs::read_to_string(out.join("scores.csv")).unwrap();
    assert_eq!(scores, "function,dimension,aggregation,random\nsphere,3,mean-then-rank,\n");
    for f in ["timing.csv", "max_so_far.svg", "proposal_time.svg"] {
        assert!(out.join(f).is_file(), "{f}");
    }
}

#[test]
fn unknown_method_exits_2_and_lists_methods() {
    let tmp = tempfile::tempdir().unwrap();
    let o = run(&["--methods", "turbo-gp"], tmp.path());
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("`methods`"), "{err}");
    for m in ["random", "turbo-0", "turbo-enn-<K>", "turbo-enn-rand-<K>"] {
        assert!(err.contains(m), "{err}");
    }
}

#[test]
fn rerun_is_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let methods = ["--methods", "turbo-enn-3,turbo-0,random", "--replications", "2", "--seed", "17"];
    let a = run(&[&methods[..], &["--output-dir", "a"]].concat(), tmp.path());
    let b = run(&[&methods[..], &["--output-dir", "b"]].concat(), tmp.path());
    assert!(a.status.success() && b.status.success());
    for f in ["traces.csv", "scores.csv", "max_so_far.svg"] {
        assert_eq!(
            fs::read(tmp.path().join("a").join(f)).unwrap(),
            fs::read(tmp.path().join("b").join(f)).unwrap(),
            "{f}"
        );
    }
    let c = run(&[&methods[..4], &["--seed", "18", "--output-dir", "c"]].concat(), tmp.path());
    assert!(c.status.success());
    assert_ne!(
        fs::read(tmp.path().join("a/traces.csv")).unwrap(),
        fs::read(tmp.path().join("c/traces.csv")).unwrap()
    );
}

#[test]
fn config_file_env_and_flags_layer() {
    let tmp = tempfile::tempdir().unwrap();
    fs::write(
        tmp.path().join("cfg.toml"),
        "function = \"rastrigin\"\ndimension = 2\nmethods = [\"random\", \"turbo-0\"]\nrounds = 3\narms_per_round = 1\noutput_dir = \"from-file\"\nrecord_timing = false\n",
    )
    .unwrap();
    let o = ennbo(&["run", "--config", "cfg.toml", "--rounds", "4"], tmp.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let rows = read_traces(fs::File::open(tmp.path().join("from-file/traces.csv")).unwrap()).unwrap();
    assert_eq!(rows.len(), 2 * 4);
    assert!(rows.iter().all(|r| r.function == "rastrigin" && r.dimension == 2));

    let o = Command::new(env!("CARGO_BIN_EXE_ennbo"))
        .args(["run", "--config", "cfg.toml"])
        .current_dir(tmp.path())
        .env("ENNBO_OUTPUT_DIR", "from-env")
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(tmp.path().join("from-env/traces.csv").is_file());
}

#[test]
fn bad_config_file_names_the_field() {
    let tmp = tempfile::tempdir().unwrap();
    fs::write(tmp.path().join("cfg.toml"), "rounds = 3\nreplications = -1\n").unwrap();
    let o = ennbo(&["run", "--config", "cfg.toml"], tmp.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("`replications`"), "{}", stderr(&o));

    fs::write(tmp.path().join("cfg.toml"), "distortion_mode = \"sideways\"\n").unwrap();
    let o = ennbo(&["run", "--config", "cfg.toml"], tmp.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("`distortion_mode`"));

    let o = ennbo(&["run", "--config", "missing.toml"], tmp.path());
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn unwritable_output_exits_3() {
    let tmp = tempfile::tempdir().unwrap();
    fs::write(tmp.path().join("blocker"), "not a directory").unwrap();
    let o = run(&["--methods", "random", "--output-dir", "blocker/out"], tmp.path());
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn sweep_k_two_columns_and_dedupe() {
    let tmp = tempfile::tempdir().unwrap();
    let mut args = vec!["sweep-k", "--k", "1,10,1", "--output-dir", "sweep"];
    args.extend_from_slice(SMALL);
    let o = ennbo(&args, tmp.path());
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stderr(&o).contains("duplicate K"));
    let out = tmp.path().join("sweep");
    let scores = fs::read_to_string(out.join("scores.csv")).unwrap();
    assert_eq!(
        scores.lines().next().unwrap(),
        "function,dimension,aggregation,turbo-enn-1,turbo-enn-10"
    );
    let table = fs::read_to_string(out.join("score_vs_k.csv")).unwrap();
    let lines: Vec<&str> = table.lines().collect();
    assert_eq!(lines[0], "k,method,score");
    assert!(lines[1].starts_with("1,turbo-enn-1,") && lines[2].starts_with("10,turbo-enn-10,"));
    assert!(out.join("score_vs_k.svg").is_file());

    let o = ennbo(&["sweep-k", "--k", "5,5", "--rounds", "2"], tmp.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("`k`"));
}

#[test]
fn sweep_k_on_ackley_30_is_monotone() {
    let tmp = tempfile::tempdir().unwrap();
    let o = ennbo(
        &[
            "sweep-k", "--k", "1,10", "--function", "ackley", "--dimension", "30", "--rounds", "12",
            "--arms-per-round", "10", "--output-dir", "s",
        ],
        tmp.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let rows = read_traces(fs::File::open(tmp.path().join("s/traces.csv")).unwrap()).unwrap();
    for method in ["turbo-enn-1", "turbo-enn-10"] {
        let ys: Vec<f64> = rows.iter().filter(|r| r.method == method).map(|r| r.y_max).collect();
        assert_eq!(ys.len(), 120);
        assert!(ys.windows(2).all(|w| w[0] <= w[1]), "{method}");
    }
}

const HEADER: &str =
    "run_id,method,function,dimension,replication,round,arm_index,y,y_max,proposal_time_ns,distortion_seed";

#[test]
fn plot_single_method_has_one_line_and_band() {
    let tmp = tempfile::tempdir().unwrap();
    let csv = format!("{HEADER}\nr,a,f,1,0,1,0,1.0,1.0,100,0\nr,a,f,1,0,2,0,2.0,2.0,200,0\n");
    fs::write(tmp.path().join("t.csv"), csv).unwrap();
    let o = ennbo(&["plot", "t.csv"], tmp.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let svg = fs::read_to_string(tmp.path().join("max_so_far.svg")).unwrap();
    assert_eq!(svg.matches(r#"class="line""#).count(), 1);
    assert_eq!(svg.matches(r#"class="band""#).count(), 1);
    assert!(svg.contains("a (0.000 s)"));
    assert!(tmp.path().join("proposal_time.svg").is_file());
}

#[test]
fn plot_rejects_empty_and_malformed_files() {
    let tmp = tempfile::tempdir().unwrap();
    fs::write(tmp.path().join("empty.csv"), "").unwrap();
    let o = ennbo(&["plot", "empty.csv"], tmp.path());
    assert_eq!(o.status.code(), Some(2));

    fs::write(tmp.path().join("header.csv"), format!("{HEADER}\n")).unwrap();
    assert_eq!(ennbo(&["plot", "header.csv"], tmp.path()).status.code(), Some(2));

    let bad = format!("{HEADER}\nr,a,f,1,0,1,0,1.0,1.0,100,0\nr,a,f,1,0,2,0,x,2.0,200,0\n");
    fs::write(tmp.path().join("bad.csv"), bad).unwrap();
    let o = ennbo(&["plot", "bad.csv"], tmp.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("row 3"), "{}", stderr(&o));

    let o = ennbo(&["plot", "nowhere.csv"], tmp.path());
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn band_half_width_is_the_standard_error() {
    // Two methods, three replications, two rounds.
    let ys = [
        ("a", [[1.0, 4.0], [2.0, 4.0], [6.0, 7.0]]),
        ("b", [[0.0, 0.5], [0.0, 1.5], [3.0, 3.0]]),
    ];
    let mut csv = format!("{HEADER}\n");
    for (m, reps) in &ys {
        for (r, series) in reps.iter().enumerate() {
            for (n, y) in series.iter().enumerate() {
                csv.push_str(&format!("x,{m},f,1,{r},{},0,{y:?},{y:?},10,0\n", n + 1));
            }
        }
    }
    let rows = read_traces(csv.as_bytes()).unwrap();
    let c = curves(&rows).unwrap();
    let chart = max_so_far_chart("t", &c);
    for (i, (_, reps)) in ys.iter().enumerate() {
        for n in 0..2 {
            let v: Vec<f64> = reps.iter().map(|s| s[n]).collect();
            let mean = v.iter().sum::<f64>() / 3.0;
            let sd = (v.iter().map(|y| (y - mean).powi(2)).sum::<f64>() / 2.0).sqrt();
            let band = chart.series[i].band.as_ref().unwrap()[n];
            let half = (band.2 - band.1) / 2.0;
            assert!((half - sd / 3f64.sqrt()).abs() < 1e-12, "method {i} round {n}");
            assert!((chart.series[i].points[n].1 - mean).abs() < 1e-12);
        }
    }
    // Method a, round 1: values 1, 2, 6 -> mean 3, sd sqrt(7), se sqrt(7/3).
    assert!((c[0].std_err[0] - (7.0f64 / 3.0).sqrt()).abs() < 1e-12);
}

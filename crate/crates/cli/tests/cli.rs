use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_smoothmusic"));
    c.env_remove("SMOOTHMUSIC_SEED").env_remove("RUST_LOG");
    c
}

fn write_config(dir: &Path, text: &str) -> PathBuf {
    let p = dir.join("run.toml");
    std::fs::write(&p, text).unwrap();
    p
}

fn run(cfg: &Path, cmd: &str, extra: &[&str]) -> Output {
    bin().arg(cmd).arg("--config").arg(cfg).args(extra).output().unwrap()
}

fn stdout_ok(o: Output) -> String {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout).unwrap()
}

fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines().map(|l| l.split(',').map(str::to_string).collect()).collect()
}

const BASE: &str = r#"
[scenario]
m = 24
n = 6
l = 3
doas = [-0.4, 0.5]
snr_db = 15
[spectrum]
grid_points = 200
[montecarlo]
sweep = "snr-db"
values = [0, 10, 20]
trials = 8
[septable]
l_values = [4]
realizations = 10
[verify]
esd_trials = 3
quadratic_trials = 3
spike_trials = 4
"#;

#[test]
fn spectrum_without_sources_is_flat() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &BASE.replace("doas = [-0.4, 0.5]", "doas = []"));
    let out = stdout_ok(run(&cfg, "spectrum", &[]));
    let r = rows(&out);
    assert_eq!(r[0], ["theta_rad", "eta_traditional", "eta_gmusic", "is_minimum_trad", "is_minimum_gmusic"]);
    assert_eq!(r.len() - 1, 200);
    for row in &r[1..] {
        assert_eq!(row[1].parse::<f64>().unwrap(), 1.0);
        assert_eq!(row[2].parse::<f64>().unwrap(), 1.0);
        assert_eq!(row[3], "false");
    }
}

#[test]
fn spectrum_minima_near_sources() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &BASE.replace("snr_db = 15", "snr_db = 30"));
    let r = rows(&stdout_ok(run(&cfg, "spectrum", &[])));
    let mins: Vec<f64> = r[1..].iter().filter(|x| x[4] == "true").map(|x| x[0].parse().unwrap()).collect();
    for t in [-0.4, 0.5] {
        assert!(mins.iter().any(|m| (m - t).abs() < 0.05), "{t} not among {mins:?}");
    }
}

#[test]
fn montecarlo_db_columns_agree() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), BASE);
    let r = rows(&stdout_ok(run(&cfg, "montecarlo", &[])));
    assert_eq!(r[0], ["sweep_value", "estimator", "source_index", "trials", "failures", "mse", "mse_db", "crb", "crb_db"]);
    // 3 SNRs x 4 estimators x 2 sources
    assert_eq!(r.len() - 1, 24);
    for row in &r[1..] {
        let mse: f64 = row[5].parse().unwrap();
        let crb: f64 = row[7].parse().unwrap();
        if mse.is_finite() {
            assert!((10.0 * mse.log10() - row[6].parse::<f64>().unwrap()).abs() < 1e-12);
        }
        assert!((10.0 * crb.log10() - row[8].parse::<f64>().unwrap()).abs() < 1e-12);
    }
}

#[test]
fn single_l_septable() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), BASE);
    let r = rows(&stdout_ok(run(&cfg, "septable", &[])));
    assert_eq!(r.len(), 2);
    assert_eq!(r[0], ["L", "min_snr_db_median", "min_snr_db_iqr"]);
    assert_eq!(r[1][0], "4");
}

#[test]
fn undersized_verify_rows_are_well_formed() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &BASE.replace("m = 24", "m = 16").replace("l = 3", "l = 15"));
    let r = rows(&stdout_ok(run(&cfg, "verify", &[])));
    assert_eq!(r[0], ["check", "M", "N", "L", "statistic", "threshold", "pass"]);
    assert_eq!(r.len() - 1, 11);
    for row in &r[1..] {
        assert_eq!(row.len(), 7);
        assert_eq!(row[1], "16");
        row[4].parse::<f64>().unwrap();
        assert!(row[6] == "true" || row[6] == "false");
    }
}

#[test]
fn out_dir_and_seed_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), BASE);
    let out = dir.path().join("results");
    let o = run(&cfg, "spectrum", &["--out", out.to_str().unwrap(), "--seed", "5"]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let file = std::fs::read_to_string(out.join("spectrum.csv")).unwrap();

    let env = bin().args(["spectrum", "--config"]).arg(&cfg).env("SMOOTHMUSIC_SEED", "5").output().unwrap();
    assert_eq!(stdout_ok(env), file);
    let both = bin().args(["spectrum", "--seed", "5", "--config"]).arg(&cfg).env("SMOOTHMUSIC_SEED", "6").output().unwrap();
    assert_eq!(stdout_ok(both), file);
    let cfg_seed = dir.path().join("seeded.toml");
    std::fs::write(&cfg_seed, format!("seed = 5\n{BASE}")).unwrap();
    assert_eq!(stdout_ok(run(&cfg_seed, "spectrum", &[])), file);
    assert_ne!(stdout_ok(run(&cfg, "spectrum", &[])), file);
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), BASE);
    for cmd in ["spectrum", "montecarlo", "septable"] {
        let a = run(&cfg, cmd, &["--workers", "1"]).stdout;
        let b = run(&cfg, cmd, &["--workers", "4"]).stdout;
        assert!(!a.is_empty());
        assert_eq!(a, b, "{cmd}");
    }
}

#[test]
fn bad_input_fails_with_message() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &format!("{BASE}typo = 1\n"));
    let o = run(&cfg, "spectrum", &[]);
    assert!(!o.status.success());
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 21"), "{err}");

    let cfg = write_config(dir.path(), &BASE.replace("l = 3", "l = 24"));
    assert!(!run(&cfg, "spectrum", &[]).status.success());
    assert!(!run(&dir.path().join("missing.toml"), "spectrum", &[]).status.success());
}

#[test]
fn strict_separation_flag() {
    // at very low SNR the fifth eigenvalue is deep inside the bulk
    let dir = tempfile::tempdir().unwrap();
    let text = BASE.replace("snr_db = 15", "snr_db = -30").replace("[-0.4, 0.5]", "[-2.0, -1.0, 0.0, 1.0, 2.0]");
    let cfg = write_config(dir.path(), &text);
    stdout_ok(run(&cfg, "spectrum", &[]));
    let o = run(&cfg, "spectrum", &["--strict-separation", "true"]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("bulk edge"));
}

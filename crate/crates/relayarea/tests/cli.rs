use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_relayarea");
const SUBCOMMANDS: [&str; 8] = ["map-rea", "map-eea", "map-ici", "gamma", "psi", "optimize", "scheme-map", "validate"];

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn run(cmd: &str, config: &Path, out: &Path, extra: &[&str]) -> Output {
    Command::new(BIN)
        .arg(cmd)
        .arg("--config")
        .arg(config)
        .arg("--out")
        .arg(out)
        .args(extra)
        .env_remove("RELAYAREA_THREADS")
        .output()
        .expect("binary runs")
}

fn csv_files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut v: Vec<(String, Vec<u8>)> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "csv"))
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap()))
        .collect();
    v.sort();
    v
}

fn write_config(dir: &Path, text: &str) -> PathBuf {
    let p = dir.join("run.toml");
    std::fs::write(&p, text).unwrap();
    p
}

/// Compares every CSV of every subcommand against `tests/golden/`. Set
/// `RELAYAREA_BLESS=1` to rewrite the reference files.
#[test]
fn golden_outputs() {
    let bless = std::env::var_os("RELAYAREA_BLESS").is_some();
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    for cmd in SUBCOMMANDS {
        let tmp = tempfile::tempdir().unwrap();
        let o = run(cmd, &data("golden.toml"), tmp.path(), &["--threads", "2"]);
        assert!(o.status.success(), "{cmd}: {}", String::from_utf8_lossy(&o.stderr));
        let files = csv_files(tmp.path());
        assert!(!files.is_empty(), "{cmd} wrote no CSV");
        for (name, bytes) in files {
            let want = golden.join(cmd).join(&name);
            if bless {
                std::fs::create_dir_all(want.parent().unwrap()).unwrap();
                std::fs::write(&want, &bytes).unwrap();
                continue;
            }
            let expected = std::fs::read(&want).unwrap_or_else(|_| panic!("missing golden file {}", want.display()));
            assert!(bytes == expected, "{cmd}/{name} differs from its golden file");
        }
    }
}

#[test]
fn reruns_are_byte_identical_across_thread_counts() {
    for cmd in ["map-rea", "validate", "scheme-map"] {
        let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
        assert!(run(cmd, &data("golden.toml"), a.path(), &["--threads", "1"]).status.success());
        assert!(run(cmd, &data("golden.toml"), b.path(), &["--threads", "3"]).status.success());
        assert_eq!(csv_files(a.path()), csv_files(b.path()), "{cmd}");
    }
}

#[test]
fn every_csv_starts_with_hash_and_schema() {
    let tmp = tempfile::tempdir().unwrap();
    assert!(run("map-eea", &data("golden.toml"), tmp.path(), &[]).status.success());
    let text = std::fs::read_to_string(tmp.path().join("map_eea.csv")).unwrap();
    let mut lines = text.lines();
    let hash = lines.next().unwrap().strip_prefix("# config-hash: ").unwrap();
    assert_eq!(hash.len(), 64);
    assert_eq!(lines.next(), Some("# schema: map_eea/1"));
    assert!(lines.next().unwrap().starts_with("x,y,serving,"));
}

#[test]
fn overrides_change_the_hash_and_the_grid() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    assert!(run("map-rea", &data("golden.toml"), a.path(), &[]).status.success());
    assert!(run("map-rea", &data("golden.toml"), b.path(), &["--grid-step", "30 m"]).status.success());
    let ra = std::fs::read_to_string(a.path().join("map_rea.csv")).unwrap();
    let rb = std::fs::read_to_string(b.path().join("map_rea.csv")).unwrap();
    assert_ne!(ra.lines().next(), rb.lines().next());
    assert!(rb.lines().count() > 3 * ra.lines().count());
}

#[test]
fn zero_shadowing_validation_has_no_errors() {
    let tmp = tempfile::tempdir().unwrap();
    let o = run("validate", &data("sigma0.toml"), tmp.path(), &[]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let summary = std::fs::read_to_string(tmp.path().join("validate.txt")).unwrap();
    for k in ["zeta_r: 0\n", "zeta_e: 0\n", "zeta_i: 0\n"] {
        assert!(summary.contains(k), "{summary}");
    }
}

#[test]
fn unknown_key_is_a_config_error_with_its_line() {
    let tmp = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(data("golden.toml")).unwrap().replace("eta_r = 3.1", "eta_r = 3.1\netta_b = 2");
    let line = text.lines().position(|l| l.starts_with("etta_b")).unwrap() + 1;
    let cfg = write_config(tmp.path(), &text);
    let o = run("gamma", &cfg, &tmp.path().join("out"), &[]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("etta_b") && err.contains(&format!("line {line}")), "{err}");
}

#[test]
fn missing_unit_is_a_config_error() {
    let tmp = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(data("golden.toml")).unwrap().replace("e_r_max = \"0.5 J\"", "e_r_max = 0.5");
    let o = run("gamma", &write_config(tmp.path(), &text), &tmp.path().join("out"), &[]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("e_r_max"));
}

#[test]
fn wrong_dimension_is_a_config_error() {
    let tmp = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(data("golden.toml")).unwrap().replace("d_b = \"600 m\"", "d_b = \"600 mJ\"");
    let o = run("gamma", &write_config(tmp.path(), &text), &tmp.path().join("out"), &[]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not a length unit"));
}

#[test]
fn coverage_hole_exits_with_two() {
    let tmp = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(data("golden.toml")).unwrap().replace("d_b = [\"500 m\", \"600 m\"]", "d_b = [\"600 m\", \"3000 m\"]");
    let out = tmp.path().join("out");
    let o = run("psi", &write_config(tmp.path(), &text), &out, &[]);
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(out.join("psi.csv")).unwrap();
    assert!(csv.lines().any(|l| l.starts_with("3000,1,two-hop,0,")), "{csv}");
}

#[test]
fn unwritable_output_exits_with_three() {
    let tmp = tempfile::tempdir().unwrap();
    let blocker = tmp.path().join("file");
    std::fs::write(&blocker, "x").unwrap();
    let o = run("gamma", &data("golden.toml"), &blocker.join("out"), &[]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn thread_count_from_environment() {
    let tmp = tempfile::tempdir().unwrap();
    let o = Command::new(BIN)
        .args(["gamma", "--config"])
        .arg(data("golden.toml"))
        .arg("--out")
        .arg(tmp.path())
        .env("RELAYAREA_THREADS", "2")
        .output()
        .unwrap();
    assert!(o.status.success());
}

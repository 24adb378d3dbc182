//! The `kwlab` binary: artifacts, determinism and exit codes.

use std::path::{Path, PathBuf};
use std::process::Command;

const SUBCOMMANDS: [&str; 8] = ["info", "harmonics", "converge", "laplace", "bs", "norms", "plancherel", "gcst"];

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("kwlab-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn kwlab(args: &[&str]) -> i32 {
    Command::new(env!("CARGO_BIN_EXE_kwlab")).args(args).output().unwrap().status.code().unwrap()
}

fn read_all(dir: &Path) -> Vec<(String, String)> {
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read_to_string(&p).unwrap()))
        .collect();
    files.sort();
    files
}

#[test]
fn every_subcommand_succeeds_and_is_reproducible() {
    let dir = scratch("repro");
    let cfg = dir.join("run.toml");
    std::fs::write(&cfg, "points = 4\nplancherel_functions = 3\n[t_grid]\nstart = 10.0\nstop = 20.0\ncount = 6\n").unwrap();
    for cmd in SUBCOMMANDS {
        let (a, b) = (dir.join(format!("{cmd}-a")), dir.join(format!("{cmd}-b")));
        for out in [&a, &b] {
            let code = kwlab(&["--config", cfg.to_str().unwrap(), "--seed", "7", "--out", out.to_str().unwrap(), cmd]);
            assert_eq!(code, 0, "{cmd}");
        }
        let (fa, fb) = (read_all(&a), read_all(&b));
        assert!(!fa.is_empty(), "{cmd} wrote nothing");
        assert_eq!(fa, fb, "{cmd} output differs between identical runs");
        for (name, text) in &fa {
            if name.ends_with(".csv") {
                assert!(text.starts_with(&format!("# kwlab {cmd} config_sha256=")), "{name}");
            } else if name.ends_with(".json") {
                let v: serde_json::Value = serde_json::from_str(text).unwrap();
                assert!(v.get("config_sha256").is_some() && v.get("result").is_some(), "{name}");
            }
        }
    }
}

#[test]
fn seed_changes_the_hash() {
    let dir = scratch("seed");
    let header = |seed: &str| {
        let out = dir.join(seed);
        assert_eq!(kwlab(&["--seed", seed, "--out", out.to_str().unwrap(), "info"]), 0);
        read_all(&out)
    };
    assert_ne!(header("1"), header("2"));
}

#[test]
fn exit_codes() {
    let dir = scratch("codes");
    let out = dir.join("out");
    let out = out.to_str().unwrap();
    assert_eq!(kwlab(&["--config", dir.join("missing.toml").to_str().unwrap(), "--out", out, "info"]), 2);

    let bad = dir.join("bad.toml");
    std::fs::write(&bad, "no_such_key = 1\n").unwrap();
    assert_eq!(kwlab(&["--config", bad.to_str().unwrap(), "--out", out, "info"]), 2);

    let su3 = dir.join("su3.toml");
    std::fs::write(&su3, "group = \"SU(3)\"\n").unwrap();
    assert_eq!(kwlab(&["--config", su3.to_str().unwrap(), "--out", out, "harmonics"]), 3);

    let strict = dir.join("strict.toml");
    std::fs::write(&strict, "[tolerance]\nrate = 0.0\n").unwrap();
    assert_eq!(kwlab(&["--config", strict.to_str().unwrap(), "--out", out, "converge"]), 1);
}

//! Acceptance criterion 10: every CLI command produces byte-identical
//! output across two runs with the same config and seed. Prints one PASS
//! line when all six commands check out.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use tempfile::TempDir;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_chaoslab")
}

fn write(dir: &Path, name: &str, contents: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, contents).unwrap();
    path
}

/// Runs the command twice; asserts exit success and that both stdout and
/// every produced file agree byte for byte between runs.
fn assert_twice_identical(dir: &Path, args: &[&str], outputs: &[&str]) {
    let mut runs = Vec::new();
    for round in 0..2 {
        let out = Command::new(bin())
            .args(args)
            .current_dir(dir)
            .output()
            .expect("binary runs");
        assert!(
            out.status.success(),
            "round {round}: {:?} failed: {}",
            args,
            String::from_utf8_lossy(&out.stderr)
        );
        let files: Vec<Vec<u8>> = outputs
            .iter()
            .map(|name| fs::read(dir.join(name)).unwrap())
            .collect();
        runs.push((out.stdout, files));
    }
    assert_eq!(runs[0].0, runs[1].0, "stdout differs for {args:?}");
    for (i, name) in outputs.iter().enumerate() {
        assert_eq!(
            runs[0].1[i], runs[1].1[i],
            "output file {name} differs for {args:?}"
        );
    }
}

#[test]
fn c10_every_command_is_byte_deterministic() {
    let dir = TempDir::new().unwrap();
    let sierpinski = write(
        dir.path(),
        "sierpinski.json",
        r#"{
  "space": "plane",
  "maps": [
    { "kind": "affine2d", "matrix": [0.5, 0.0, 0.0, 0.5], "translation": [0.0, 0.0] },
    { "kind": "affine2d", "matrix": [0.5, 0.0, 0.0, 0.5], "translation": [0.5, 0.0] },
    { "kind": "affine2d", "matrix": [0.5, 0.0, 0.0, 0.5], "translation": [0.25, 0.4330127018922193] }
  ],
  "stream": { "kind": "bernoulli", "probs": [0.34, 0.33, 0.33], "seed": 42 },
  "x0": [0.0, 0.0],
  "kmax": 20000,
  "Ks": [500, 5000],
  "delta": 0.005,
  "epsilon": 0.02,
  "reference": { "iters": 10 },
  "render": { "width": 256, "height": 256 }
}"#,
    );
    let sierpinski = sierpinski.to_str().unwrap();
    let input = write(dir.path(), "input.txt", &"ATGCGTTACG".repeat(200));
    let cgr = write(
        dir.path(),
        "cgr.json",
        &format!(
            r#"{{
  "input": {:?},
  "mapping": {{ "A": 1, "T": 2, "G": 3, "C": 4 }},
  "alphabet_size": 4,
  "histogram_resolution": 32,
  "histogram_out": "hist.csv",
  "render": {{ "width": 128, "height": 128 }}
}}"#,
            input.to_str().unwrap()
        ),
    );
    let mobius = write(
        dir.path(),
        "mobius.json",
        r#"{
  "space": "sphere",
  "maps": [
    { "kind": "mobius", "matrix": [[1.0, 0.0], [0.0, 0.0], [0.0, 0.0], [2.0, 0.0]] },
    { "kind": "mobius", "matrix": [[3.0, 0.0], [1.0, 0.0], [1.0, 0.0], [3.0, 0.0]] }
  ],
  "stream": { "kind": "champernowne", "n": 2 },
  "x0": [-1.0, 0.0],
  "kmax": 20000,
  "Ks": [1000],
  "delta": 0.005,
  "epsilon": 0.08,
  "rapunzel": { "x0_dual": [0.0, 1.0], "escape_threshold": 0.1 }
}"#,
    );

    assert_twice_identical(
        dir.path(),
        &["render", "--config", sierpinski, "--out", "tail.ppm"],
        &["tail.ppm"],
    );
    assert_twice_identical(
        dir.path(),
        &["converge", "--config", sierpinski, "--out", "profile.csv"],
        &["profile.csv"],
    );
    assert_twice_identical(
        dir.path(),
        &[
            "seqgen",
            "--config",
            sierpinski,
            "--count",
            "500",
            "--out",
            "symbols.txt",
        ],
        &["symbols.txt"],
    );
    assert_twice_identical(
        dir.path(),
        &["cgr", "--config", cgr.to_str().unwrap(), "--out", "cgr.ppm"],
        &["cgr.ppm", "hist.csv"],
    );
    assert_twice_identical(
        dir.path(),
        &[
            "rapunzel",
            "--config",
            mobius.to_str().unwrap(),
            "--out",
            "report.txt",
        ],
        &["report.txt"],
    );
    assert_twice_identical(
        dir.path(),
        &[
            "fibre",
            "--config",
            sierpinski,
            "--rho",
            "1,3,2,1",
            "--out",
            "fibre.csv",
        ],
        &["fibre.csv"],
    );
    println!("PASS criterion 10: render, converge, seqgen, cgr, rapunzel and fibre are byte-identical across repeated runs");
}

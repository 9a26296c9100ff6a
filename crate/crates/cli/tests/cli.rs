use std::path::{Path, PathBuf};
use std::process::Command;

use rickart_cli::{module_to_spec_text, read_module, run};
use serde_json::Value;

fn cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(
        std::iter::once("rickart").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn check_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let z4 = write(dir.path(), "z4.mod", "ring: Z\norders: 4\n");
    let (code, out, _) = cli(&["check", "cs-rickart", "--module", s(&z4)]);
    assert_eq!((code, out.as_str()), (0, "true\n"));
    let (code, out, _) = cli(&["check", "rickart", "--module", s(&z4)]);
    assert_eq!(code, 1);
    assert!(
        out.starts_with("false\n") && out.contains("g1 -> (2)"),
        "{out}"
    );
    let (code, _, err) = cli(&["check", "nonsense", "--module", s(&z4)]);
    assert_eq!(code, 2);
    assert!(err.contains("unknown property"));
    let (code, ..) = cli(&["check", "cs-rickart"]);
    assert_eq!(code, 2);
}

#[test]
fn parse_errors_carry_line_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.mod", "# comment\nring: Z\norders: 0 3\n");
    let (code, _, err) = cli(&["report", s(&bad)]);
    assert_eq!(code, 2);
    assert!(err.contains("line 3"), "{err}");
    let (code, _, err) = cli(&["report", s(&dir.path().join("missing.mod"))]);
    assert_eq!(code, 2);
    assert!(err.contains("missing.mod"), "{err}");
}

#[test]
fn relative_check_uses_module_as_source() {
    let dir = tempfile::tempdir().unwrap();
    let z2 = write(dir.path(), "z2.mod", "ring: Z\norders: 2\n");
    let z4 = write(dir.path(), "z4.mod", "ring: Z\norders: 4\n");
    // Hom(Z_2, Z_4) has kernels 0 and Z_2, both summands of Z_2.
    let (code, ..) = cli(&["check", "rickart", "--module", s(&z2), "--relative", s(&z4)]);
    assert_eq!(code, 0);
    // Hom(Z_4, Z_2) has the kernel 2Z_4, not a summand of Z_4.
    let (code, out, _) = cli(&[
        "check",
        "rickart",
        "--module",
        s(&z4),
        "--relative",
        s(&z2),
        "--json",
    ]);
    assert_eq!(code, 1);
    let j: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(j["properties"]["rickart"], Value::Bool(false));
    assert_eq!(j["witnesses"]["rickart"]["hom"], serde_json::json!([[1]]));
    let (code, _, err) = cli(&[
        "check",
        "extending",
        "--module",
        s(&z4),
        "--relative",
        s(&z2),
    ]);
    assert_eq!(code, 2, "{err}");
}

#[test]
fn verbose_check_lists_certificates() {
    let dir = tempfile::tempdir().unwrap();
    let z4 = write(dir.path(), "z4.mod", "ring: Z\norders: 4\n");
    let (code, out, _) = cli(&["check", "extending", "--module", s(&z4), "--verbose"]);
    assert_eq!(code, 0);
    assert!(
        out.contains("certificates:") && out.contains("inside summand"),
        "{out}"
    );
}

#[test]
fn json_report_is_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "m.mod", "name: M\nring: Z\norders: 2 16\n");
    let (c1, a, _) = cli(&["report", s(&m), "--json"]);
    let (c2, b, _) = cli(&["report", s(&m), "--json"]);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a, b);
    let j: Value = serde_json::from_str(&a).unwrap();
    assert_eq!(j["module"]["name"], "M");
    assert_eq!(j["properties"]["sip-extending"], Value::Bool(true));
    assert_eq!(j["witnesses"]["sip"]["size"], 8);
    assert!(j["witnesses"].get("sip-extending").is_none());
}

#[test]
fn structure_listings() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "m.mod", "ring: Z\norders: 2 16\n");
    let z2 = write(dir.path(), "z2.mod", "ring: Z\norders: 2\n");
    let (_, out, _) = cli(&["summands", s(&m)]);
    assert!(out.starts_with("Z_2 ⊕ Z_16: 6 direct summands\n"), "{out}");
    assert_eq!(out.lines().count(), 7);
    let (_, out, _) = cli(&["submodules", s(&z2)]);
    assert!(
        out.contains("2 submodules") && out.contains("socle <(1)> (size 2)"),
        "{out}"
    );
    let (_, out, _) = cli(&["homs", s(&m), s(&z2)]);
    assert!(
        out.starts_with("Hom(Z_2 ⊕ Z_16, Z_2): 4 homomorphisms"),
        "{out}"
    );
    let (_, out, _) = cli(&["homs", s(&m), s(&m), "--limit", "3"]);
    assert!(
        out.contains("128 homomorphisms") && out.contains("... 125 more"),
        "{out}"
    );
}

#[test]
fn custom_ring_modules() {
    let dir = tempfile::tempdir().unwrap();
    // F_2 x F_2 with idempotents e1 = (1,0), e2 = (0,1).
    write(
        dir.path(),
        "r.ring",
        "orders: 2 2\nunit: 1 1\nmul e1 e1 = 1 0\nmul e2 e2 = 0 1\n",
    );
    let m = write(
        dir.path(),
        "m.mod",
        "ring: custom:r.ring\norders: 2\nact e1 g1 = 1\n",
    );
    let (code, out, err) = cli(&["check", "extending", "--module", s(&m)]);
    assert_eq!(code, 0, "{out}{err}");
    let parsed = read_module(&m).unwrap();
    let text = module_to_spec_text(&parsed.module, &parsed.ring, None);
    assert_eq!(text, "ring: custom:r.ring\norders: 2\nact e1 g1 = 1\n");
    // With no action lines the unit acts as zero.
    let bad = write(dir.path(), "bad.mod", "ring: custom:r.ring\norders: 2\n");
    let (code, _, err) = cli(&["report", s(&bad)]);
    assert_eq!(code, 2, "{err}");
}

#[test]
fn verify_and_search() {
    let (code, out, _) = cli(&["verify", "--theorem", "C-sip", "--max-order", "16"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.starts_with("C-sip: PASS"), "{out}");
    let (code, _, err) = cli(&["verify", "--theorem", "T-nope"]);
    assert_eq!(code, 2);
    assert!(err.contains("T-nope"));
    let (code, _, err) = cli(&["verify", "--theorem", "C-serial", "--ring", "q"]);
    assert_eq!(code, 2, "{err}");

    let (code, out, _) = cli(&[
        "search",
        "--hypothesis",
        "cs-rickart",
        "--conclusion",
        "sip",
        "--max-order",
        "16",
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("M = Z_2 ⊕ Z_4"), "{out}");
    let (code, out, _) = cli(&[
        "search",
        "--hypothesis",
        "extending",
        "--conclusion",
        "cs-rickart",
        "--max-order",
        "16",
    ]);
    assert_eq!(code, 0);
    assert!(out.starts_with("no counterexample"), "{out}");
    let (code, _, err) = cli(&[
        "search",
        "--hypothesis",
        "cs-rickart(",
        "--conclusion",
        "sip",
        "--max-order",
        "8",
    ]);
    assert_eq!(code, 2, "{err}");
}

#[test]
fn binary_reports_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let z4 = write(dir.path(), "z4.mod", "ring: zn:4\norders: 4\n");
    let bin = env!("CARGO_BIN_EXE_rickart");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap();
    let o = status(&["check", "cs-rickart", "--module", s(&z4)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&o.stdout), "true\n");
    assert_eq!(
        status(&["check", "rickart", "--module", s(&z4)])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(status(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(status(&["--help"]).status.code(), Some(0));
}

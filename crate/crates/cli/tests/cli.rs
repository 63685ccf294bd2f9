use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

fn pca(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pca"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn table(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("pca-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn succ() -> PathBuf {
    table(
        "succ.tbl",
        "# n => n+1\nnum:0 => num:1\nnum:1 => num:2\nnum:2 => num:3\nnum:3 => num:4\n",
    )
}

#[test]
fn eval_prints_normal_forms() {
    let o = pca(&["eval", r"(\x y. x) K S"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "K\n");
    let o = pca(&["--model", "numeric", "eval", "K"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with('#'));
}

#[test]
fn usage_and_parse_errors_exit_2() {
    assert_eq!(pca(&["eval", r"(\x. x"]).status.code(), Some(2));
    assert_eq!(pca(&["suite", "nonsense"]).status.code(), Some(2));
    assert_eq!(pca(&["trace", "K", "S"]).status.code(), Some(2));
    assert_eq!(
        pca(&["--model", "octal", "eval", "K"]).status.code(),
        Some(2)
    );
    let bad = table("dup.tbl", "K => S\nK => K\n");
    assert_eq!(
        pca(&["--oracle", bad.to_str().unwrap(), "eval", "K"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn divergence_is_reported() {
    let s = succ();
    let o = pca(&[
        "--oracle",
        s.to_str().unwrap(),
        "--fuel",
        "5000",
        "eval",
        "bot-witness K",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let o = pca(&["eval", r"(\x. x x) (\x. x x)"]);
    assert_eq!(stdout(&o), "fuel-exhausted\n");
}

#[test]
fn traces_show_queries() {
    let s = succ();
    let o = pca(&["--oracle", s.to_str().unwrap(), "trace", "r_f", "num:2"]);
    assert_eq!(o.status.code(), Some(0));
    let lines: Vec<String> = stdout(&o).lines().map(str::to_string).collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[0].starts_with("? ") && lines[1].starts_with("! ") && lines[2].starts_with("= "));
    let o = pca(&["--oracle", s.to_str().unwrap(), "trace", "K_f", "K"]);
    assert_eq!(stdout(&o).lines().count(), 1);
    assert!(stdout(&o).starts_with("= "));
}

#[test]
fn turing_reductions() {
    let s = succ();
    let twice = table(
        "succ2.tbl",
        "num:0 => num:2\nnum:1 => num:3\nnum:2 => num:4\n",
    );
    let o = pca(&["leq", s.to_str().unwrap(), s.to_str().unwrap(), "r_f"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).starts_with("PASS"));
    let o = pca(&[
        "leq",
        twice.to_str().unwrap(),
        s.to_str().unwrap(),
        r"\x. r_f (r_f x)",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = pca(&["leq", twice.to_str().unwrap(), s.to_str().unwrap(), "r_f"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("FAIL"));
}

#[test]
fn stacked_oracles() {
    let s = succ();
    let g = table("five.tbl", "num:5 => num:6\n");
    let (s, g) = (s.to_str().unwrap(), g.to_str().unwrap());
    let o = pca(&["--oracle", s, "--oracle", g, "trace", "r_f", "num:5"]);
    assert_eq!(o.status.code(), Some(0));
    let five = stdout(&pca(&["eval", "num:5"]));
    let six = stdout(&pca(&["eval", "num:6"]));
    assert_eq!(stdout(&o), format!("? {five}! {six}= {six}"));
    let o = pca(&["--oracle", s, "--oracle", g, "eval", "r_f num:5"]);
    assert_eq!(stdout(&o), six);
}

#[test]
fn suites_are_reproducible() {
    let args = ["suite", "oracle", "--samples", "20", "--seed", "42"];
    let a = pca(&args);
    let b = pca(&args);
    assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).ends_with("failed: PASS\n"));
}

#[test]
fn repl_runs_a_script() {
    let s = succ();
    let script = format!(
        "let two = succ (succ zero)\npush {}\nr_f two\npop\nS K K two\n",
        s.display()
    );
    let mut child = Command::new(env!("CARGO_BIN_EXE_pca"))
        .arg("repl")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(script.as_bytes())
        .unwrap();
    let o = child.wait_with_output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    let lines: Vec<String> = stdout(&o).lines().map(str::to_string).collect();
    assert_eq!(lines[1], "term[succ]");
    assert_eq!(lines[3], "term[succ]");
    assert_eq!(lines[0], lines[4]);
    let three = pca(&["eval", "num:3"]);
    assert_eq!(format!("{}\n", lines[2]), stdout(&three));
}

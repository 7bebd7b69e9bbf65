use std::process::{Command, Output};

use hyperdist::corpus::{parse_corpus, serialize, to_text, SHIPPED_CORPUS};

fn hyperdist(args: &[&str], corpus: Option<&std::path::Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_hyperdist"));
    cmd.args(args).env_remove("HYPERDIST_CORPUS");
    if let Some(p) = corpus {
        cmd.env("HYPERDIST_CORPUS", p);
    }
    cmd.output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn eval_prints_json() {
    let out = hyperdist(&["eval", "2F1(1, 1; 2; 1/2)", "--json", "--prec", "30"], None);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["value"].as_str().unwrap().starts_with("1.3862943611198906188344642429"));
    assert_eq!(v["rigor"], "rigorous");
}

#[test]
fn verify_sets_the_exit_code() {
    assert!(hyperdist(&["verify", "2F1(1, 1; 2; 1/2)", "2*log(2)"], None).status.success());
    assert_eq!(hyperdist(&["verify", "2F1(1, 1; 2; 1/2)", "2*log(3)"], None).status.code(), Some(1));
    assert_eq!(hyperdist(&["verify", "2F1(1, 1; 0; 1/2)", "1"], None).status.code(), Some(2));
}

#[test]
fn corpus_path_comes_from_the_environment() {
    let dir = std::env::temp_dir().join(format!("hyperdist-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let mut entries = parse_corpus(SHIPPED_CORPUS).unwrap();
    entries.retain(|e| ["K-singular-value", "central-binomial-6f5-b"].contains(&e.name()));
    let good = dir.join("good.json");
    std::fs::write(&good, to_text(&serialize(&entries))).unwrap();

    let out = hyperdist(&["corpus", "run"], Some(&good));
    assert!(out.status.success(), "{}", stdout(&out));
    assert!(stdout(&out).contains("2 entries: 2 passed, 0 failed, 0 disputed"), "{}", stdout(&out));

    let broken = to_text(&serialize(&entries)).replacen("\"11/4\"", "\"9/4\"", 1);
    let bad = dir.join("bad.json");
    std::fs::write(&bad, broken).unwrap();
    let out = hyperdist(&["corpus", "run", "--json"], Some(&bad));
    assert_eq!(out.status.code(), Some(1), "{}", stdout(&out));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["totals"]["failed"], 1);

    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn sum_lists_matches() {
    let out = hyperdist(&["sum", "2F1(1/2, 1/2; 2; 1)"], None);
    assert!(stdout(&out).starts_with("Gauss1"), "{}", stdout(&out));
}

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("fixtures")
}

struct Env {
    cache: TempDir,
    url: String,
}

impl Env {
    fn offline() -> Self {
        Env {
            cache: TempDir::new().unwrap(),
            url: format!("file://{}/b{{num}}.txt", fixtures().display()),
        }
    }

    fn run(&self, args: &[&str]) -> Output {
        Command::new(env!("CARGO_BIN_EXE_ansatzkit"))
            .args(args)
            .env("ANSATZKIT_OEIS_URL", &self.url)
            .env("ANSATZKIT_CACHE", self.cache.path())
            .output()
            .unwrap()
    }
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

const FLOOR: &str = "a=cfinite:N^4 - 2*N^3 + 2*N - 1;0,0,1,2";
const FLOOR_IDENTITY: &str = "a(n+1) - a(n)*a(n+1) + a(n)*a(n+2) + a(n+1)^2 - a(n+1)*a(n+2)";

#[test]
fn guess_finds_fibonacci_recurrence() {
    let env = Env::offline();
    let o = env.run(&[
        "guess",
        "--class",
        "cfinite",
        "--max-order",
        "5",
        "--oeis",
        "A000045",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.contains("operator: N^2 - N - 1\n"), "{out}");
    assert!(out.contains("initials: 0,1\n"), "{out}");
}

#[test]
fn guess_below_true_order_fails_with_exit_1() {
    let env = Env::offline();
    let o = env.run(&[
        "guess",
        "--class",
        "cfinite",
        "--max-order",
        "1",
        "--oeis",
        "A000045",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(
        stderr(&o).contains("no C-finite recurrence of order <= 1"),
        "{}",
        stderr(&o)
    );
}

#[test]
fn prove_reports_bound_68() {
    let env = Env::offline();
    let o = env.run(&[
        "prove",
        "--bound-report",
        "--coeff",
        FLOOR,
        "--claim",
        FLOOR_IDENTITY,
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(
        out.contains("order bound: 68 = 4 + 4*4 + 4*4 + 4*4 + 4*4"),
        "{out}"
    );
    assert!(out.contains("(68 terms)"), "{out}");
    assert!(out.trim_end().ends_with("PROVEN"), "{out}");
}

#[test]
fn refuted_identity_exits_1_with_witness() {
    let env = Env::offline();
    let o = env.run(&[
        "prove",
        "--coeff",
        "F=cfinite:N^2-N-1;0,1",
        "--claim",
        "F(n)^2 - F(n+1)*F(n-1)",
        "--from",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("REFUTED at n = 1"), "{}", stdout(&o));
}

#[test]
fn usage_errors_exit_2() {
    let env = Env::offline();
    let cases: &[&[&str]] = &[
        &["guess", "--oeis", "A000045", "--terms", "1,2,3"],
        &["guess", "--oeis", "X45"],
        &["guess", "--terms", "1,x,3"],
        &["genfun", "--op", "N^2 - - 1)", "--initials", "0,1"],
        &["genfun", "--op", "N - G(n)", "--initials", "1"],
        &["genfun", "--op", "N^2 - N - 1", "--initials", "0"],
        &[
            "closure",
            "--kind",
            "add",
            "--op",
            "N - 2",
            "--initials",
            "1",
        ],
        &["frobnicate"],
    ];
    for args in cases {
        let o = env.run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn io_errors_exit_3() {
    let env = Env::offline();
    let o = env.run(&["fetch", "--oeis", "A999999"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("not found"));

    let o = env.run(&["guess", "--file", "/nonexistent/terms.txt"]);
    assert_eq!(o.status.code(), Some(3));

    let o = env.run(&[
        "guess",
        "--oeis",
        "A000045",
        "--json",
        "/nonexistent/dir/out.json",
    ]);
    assert_eq!(o.status.code(), Some(3));

    let unreachable = Env {
        cache: TempDir::new().unwrap(),
        url: "http://127.0.0.1:9/{id}".into(),
    };
    let o = unreachable.run(&["fetch", "--oeis", "A000045"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("network"), "{}", stderr(&o));
}

#[test]
fn warm_cache_serves_offline_and_identically() {
    let env = Env::offline();
    let first = env.run(&["fetch", "--oeis", "A003266"]);
    assert_eq!(first.status.code(), Some(0));
    assert!(env.cache.path().join("b003266.txt").exists());
    let leftovers = std::fs::read_dir(env.cache.path()).unwrap().count();
    assert_eq!(leftovers, 1, "no temporary files remain");

    let cold = Env {
        cache: env.cache,
        url: "file:///nonexistent/b{num}.txt".into(),
    };
    let second = cold.run(&["fetch", "--oeis", "A003266"]);
    assert_eq!(second.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    assert!(stdout(&second).starts_with("1 1\n2 1\n3 2\n4 6\n5 30\n6 240\n"));
}

#[test]
fn json_output_is_byte_stable_and_reloadable() {
    let env = Env::offline();
    let dir = TempDir::new().unwrap();
    let p = |name: &str| dir.path().join(name).to_str().unwrap().to_string();

    let a = env.run(&["guess", "--oeis", "A000045", "--json", &p("a.json")]);
    let b = env.run(&["guess", "--oeis", "A000045", "--json", &p("b.json")]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(b.status.code(), Some(0));
    let ja = std::fs::read(p("a.json")).unwrap();
    assert_eq!(ja, std::fs::read(p("b.json")).unwrap());
    assert_eq!(a.stdout, b.stdout);

    // sequence JSON read back gives the same fitted system
    env.run(&["fetch", "--oeis", "A000045", "--json", &p("seq.json")]);
    let c = env.run(&["guess", "--file", &p("seq.json"), "--json", &p("c.json")]);
    assert_eq!(c.status.code(), Some(0), "{}", stderr(&c));
    assert_eq!(ja, std::fs::read(p("c.json")).unwrap());

    // a system JSON is accepted wherever a recurrence is
    let g1 = env.run(&["genfun", "--file", &p("a.json")]);
    let g2 = env.run(&["genfun", "--op", "N^2 - N - 1", "--initials", "0,1"]);
    assert_eq!(g1.status.code(), Some(0), "{}", stderr(&g1));
    assert_eq!(g1.stdout, g2.stdout);
}

#[test]
fn conversions_end_to_end() {
    let env = Env::offline();
    let o = env.run(&[
        "genfun",
        "--op",
        "N^4 - 2*N^3 + 2*N - 1",
        "--initials",
        "0,0,1,2",
    ]);
    assert_eq!(stdout(&o), "f(x) = (x^2)/(-x^4 + 2*x^3 - 2*x + 1)\n");

    let o = env.run(&[
        "closedform",
        "--op",
        "N^4 - 2*N^3 + 2*N - 1",
        "--initials",
        "0,0,1,2",
    ]);
    assert_eq!(stdout(&o), "a(n) = (-1)^n/8 + n^2/4 - 1/8\n");

    let o = env.run(&[
        "asymptotics",
        "--op",
        "(n+1) - N",
        "--initials",
        "1",
        "--refine",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(
        stdout(&o).contains("(n/e)^n * n^(1/2) * (1 + (1/12)/n"),
        "{}",
        stdout(&o)
    );

    let o = env.run(&[
        "closure",
        "--kind",
        "termwise",
        "--coeff",
        "F=cfinite:N^2-N-1;0,1",
        "--op",
        "N - F(n+2)",
        "--initials",
        "1",
        "--op2",
        "N^2 - N - 2^n",
        "--initials2",
        "1,1",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("operator: N^2 + "));

    let o = env.run(&["closure", "--kind", "partial-sum", "--oeis", "A000045"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("initials: 0,1,2\n"), "{}", stdout(&o));
}

//! Helpers shared by the CLI test targets: schema validation, golden
//! transcripts, the round-trip check and the byte-string fuzzer.
#![allow(dead_code)]

use std::ffi::OsString;
use std::os::unix::ffi::OsStringExt;
use std::path::{Path, PathBuf};
use std::process::Command;

use bassfin::dsl::{parse_characteristic, parse_group_expr};
use bassfin_cli::{run, Outcome, EXIT_INPUT, EXIT_OK};
use bassfin_suites::sample;
use rand::Rng;
use serde_json::Value;

pub fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub fn run_args(args: &[&str]) -> Outcome {
    run(std::iter::once("bassfin").chain(args.iter().copied()))
}

pub fn schema(name: &str) -> jsonschema::Validator {
    let path = crate_dir().join("schemas").join(format!("{name}.schema.json"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    let value: Value = serde_json::from_str(&text).expect("schema files are JSON");
    jsonschema::validator_for(&value).unwrap_or_else(|e| panic!("{name} schema: {e}"))
}

/// Schema errors for `value`, joined; empty when valid.
pub fn schema_errors(validator: &jsonschema::Validator, value: &Value) -> String {
    validator.iter_errors(value).map(|e| format!("{} at {}", e, e.instance_path)).collect::<Vec<_>>().join("; ")
}

/// Numbers must reach consumers as strings. An element's `level` is the
/// one integer field, mirroring the element input format.
pub fn first_number(value: &Value) -> Option<String> {
    match value {
        Value::Number(n) => Some(n.to_string()),
        Value::Array(items) => items.iter().find_map(first_number),
        Value::Object(map) => map.iter().filter(|(k, _)| *k != "level").find_map(|(_, v)| first_number(v)),
        _ => None,
    }
}

/// A diagnostic of the form `... at <position> ...`.
pub fn has_position(stderr: &str) -> bool {
    stderr
        .match_indices(" at ")
        .any(|(i, m)| stderr[i + m.len()..].starts_with(|c: char| c.is_ascii_digit() || c == 'l'))
}

pub struct Golden {
    pub name: String,
    pub args: Vec<String>,
    pub code: i32,
    pub stdout: String,
}

/// Transcripts: an `args` line (JSON array), an `exit` line, then stdout verbatim.
pub fn goldens() -> Vec<Golden> {
    let dir = crate_dir().join("tests").join("golden");
    let mut paths: Vec<_> = std::fs::read_dir(&dir)
        .expect("golden directory")
        .map(|e| e.expect("directory entry").path())
        .filter(|p| p.extension().is_some_and(|x| x == "txt"))
        .collect();
    paths.sort();
    paths.iter().map(|p| read_golden(p)).collect()
}

fn read_golden(path: &Path) -> Golden {
    let text = std::fs::read_to_string(path).expect("golden file");
    let mut parts = text.splitn(3, '\n');
    let args = parts.next().and_then(|l| l.strip_prefix("args ")).expect("args line");
    let code = parts.next().and_then(|l| l.strip_prefix("exit ")).expect("exit line");
    Golden {
        name: path.file_stem().unwrap().to_string_lossy().into_owned(),
        args: serde_json::from_str(args).expect("args are a JSON array"),
        code: code.parse().expect("exit code"),
        stdout: parts.next().unwrap_or("").to_string(),
    }
}

/// Runs the built binary and compares stdout byte for byte.
pub fn check_golden(bin: &str, g: &Golden) -> Result<(), String> {
    let out = Command::new(bin).args(&g.args).output().map_err(|e| format!("{}: {e}", g.name))?;
    let code = out.status.code().unwrap_or(-1);
    if code != g.code {
        return Err(format!("{}: exit {code}, expected {}", g.name, g.code));
    }
    if out.stdout != g.stdout.as_bytes() {
        return Err(format!("{}: stdout differs:\n{}", g.name, String::from_utf8_lossy(&out.stdout)));
    }
    Ok(())
}

/// Compact and indented transcripts of the same command carry the same JSON.
pub fn check_indent_pairs(goldens: &[Golden]) -> Result<usize, String> {
    let mut pairs = 0;
    for g in goldens.iter().filter(|g| !g.name.contains(".indent")) {
        for p in goldens.iter().filter(|p| p.name.starts_with(&format!("{}.indent", g.name))) {
            let a: Value = serde_json::from_str(&g.stdout).map_err(|e| format!("{}: {e}", g.name))?;
            let b: Value = serde_json::from_str(&p.stdout).map_err(|e| format!("{}: {e}", p.name))?;
            if a != b || g.code != p.code {
                return Err(format!("{} and {} disagree", g.name, p.name));
            }
            pairs += 1;
        }
    }
    Ok(pairs)
}

/// `parse ∘ serialize = id` on `n` sampled expressions.
pub fn round_trip(n: usize, seed: u64) -> Result<usize, String> {
    let mut rng = sample::rng(seed);
    for _ in 0..n {
        let e = sample::group_expr(&mut rng);
        let text = e.to_string();
        let back = parse_group_expr(&text).map_err(|err| format!("{text}: {err}"))?;
        if back != e {
            return Err(format!("{text} reparsed as {back}"));
        }
        if back.to_string() != text {
            return Err(format!("{text} reprinted as {back}"));
        }
    }
    Ok(n)
}

const DSL_ALPHABET: &[u8] = b"C()Prufer ZQR1AscChain\"01DescUlmTailARRing^w+,;=resthconst0Infexcp23579 \t-";

const SEEDS: [&str; 6] = [
    "C(2,3)^2 + Prufer(3) + R1(res(0,1))",
    "AscChain(\"01\")^w + DescChain(4)",
    "(Z + Q^3)^2 + UlmTail(5)",
    "R1(thr(3);exc(2=inf,7=1)) + ARRing",
    "const0",
    "2*e\"0\" + 1/3*e\"11\"",
];

fn fuzz_bytes(rng: &mut impl Rng) -> Vec<u8> {
    match rng.gen_range(0..3) {
        0 => (0..rng.gen_range(0..40)).map(|_| rng.gen()).collect(),
        1 => (0..rng.gen_range(0..40)).map(|_| DSL_ALPHABET[rng.gen_range(0..DSL_ALPHABET.len())]).collect(),
        _ => {
            let mut b = SEEDS[rng.gen_range(0..SEEDS.len())].as_bytes().to_vec();
            for _ in 0..rng.gen_range(1..=3) {
                let i = rng.gen_range(0..=b.len());
                match rng.gen_range(0..3) {
                    0 => b.insert(i, rng.gen()),
                    1 if i < b.len() => {
                        b.remove(i);
                    }
                    _ if i < b.len() => b[i] = DSL_ALPHABET[rng.gen_range(0..DSL_ALPHABET.len())],
                    _ => b.push(b')'),
                }
            }
            b
        }
    }
}

#[derive(Debug, Default)]
pub struct FuzzStats {
    pub inputs: usize,
    pub accepted: usize,
    pub rejected: usize,
    pub failures: Vec<String>,
}

/// Whether the command's own parser accepts the text; inputs it rejects
/// must produce a positioned diagnostic.
fn syntactically_valid(command: &str, text: &str) -> bool {
    match command {
        "check" => parse_group_expr(text).is_ok(),
        "type" => parse_characteristic(text).is_ok(),
        "eval" => bassfin_cli::ringexpr::eval(text).is_ok(),
        _ => serde_json::from_str::<bassfin::arring::RingElement>(text).is_ok(),
    }
}

/// Feeds `n` byte strings to `check`, `type compare`, `ring eval` and
/// `ring coker`. Every run must exit 0 or 1; a rejected malformed input
/// must say where it went wrong.
pub fn fuzz(n: usize, seed: u64) -> FuzzStats {
    let mut rng = sample::rng(seed);
    let mut stats = FuzzStats::default();
    for i in 0..n {
        let bytes = fuzz_bytes(&mut rng);
        let arg = OsString::from_vec(bytes.clone());
        let lossy = arg.to_string_lossy().into_owned();
        let (command, argv): (&str, Vec<OsString>) = match i % 4 {
            0 => ("check", vec!["check".into(), "--".into(), arg]),
            1 => ("type", vec!["type".into(), "compare".into(), "--".into(), arg, "const0".into()]),
            2 => ("eval", vec!["ring".into(), "eval".into(), "--".into(), arg]),
            _ => ("coker", vec!["ring".into(), "coker".into(), "--".into(), arg]),
        };
        stats.inputs += 1;
        let out = run(std::iter::once(OsString::from("bassfin")).chain(argv));
        match out.code {
            EXIT_OK => stats.accepted += 1,
            EXIT_INPUT => {
                stats.rejected += 1;
                if !syntactically_valid(command, &lossy) && !has_position(&out.stderr) {
                    stats.failures.push(format!("{command} {bytes:?}: no position in {:?}", out.stderr));
                }
            }
            code => stats.failures.push(format!("{command} {bytes:?}: exit {code}: {}", out.stderr)),
        }
        if stats.failures.len() >= 10 {
            break;
        }
    }
    stats
}

//! One test per acceptance criterion. Each prints a `PASS` or `FAIL` line
//! directly to the terminal, bypassing the test harness capture.

use std::io::Write;
use std::process::Command;
use std::time::{Duration, Instant};

use cubesense::certificate::{RowStatus, Verdict};
use cubesense::constructions::{extremal_irreducible, gap_threshold, is_feasible, simon_extremal};
use cubesense::search::{min_size_search, DegreeMode, SearchConfig, SearchOutcome, Strategy};
use cubesense::{Certificate, CubeDim, Dyadic, TruthTable, VertexSet};

type Check = Result<String, String>;

fn report(id: &str, title: &str, started: Instant, result: Check) {
    let secs = started.elapsed().as_secs_f64();
    let line = match &result {
        Ok(detail) => format!("PASS criterion {id}: {title} ({detail}; {secs:.2}s)"),
        Err(why) => format!("FAIL criterion {id}: {title} ({why}; {secs:.2}s)"),
    };
    let mut out = std::io::stdout().lock();
    writeln!(out, "{line}").unwrap();
    out.flush().unwrap();
    if let Err(why) = result {
        panic!("criterion {id} failed: {why}");
    }
}

fn ensure(ok: bool, why: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(why())
    }
}

fn within(started: Instant, limit: Duration) -> Result<(), String> {
    let took = started.elapsed();
    ensure(took <= limit, || format!("took {took:?}, limit {limit:?}"))
}

struct Run {
    code: i32,
    stdout: String,
}

fn cli(args: &[&str], threads: Option<usize>) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_cubesense"));
    cmd.env_remove("CUBESENSE_THREADS");
    if let Some(t) = threads {
        cmd.arg("--threads").arg(t.to_string());
    }
    let out = cmd.args(args).output().expect("binary runs");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).expect("utf-8 output"),
    }
}

fn certificate(args: &[&str]) -> Result<(i32, Certificate), String> {
    let run = cli(args, None);
    let cert = Certificate::from_json(&run.stdout).map_err(|e| format!("{args:?}: {e}"))?;
    Ok((run.code, cert))
}

fn verified(args: &[&str]) -> Result<Certificate, String> {
    let (code, cert) = certificate(args)?;
    ensure(code == 0 && cert.verdict == Verdict::Verified, || {
        format!(
            "{args:?}: exit {code}, verdict {:?}, counterexample {:?}",
            cert.verdict, cert.counterexample
        )
    })?;
    Ok(cert)
}

#[test]
fn criterion_1_simon() {
    let started = Instant::now();
    let result = (|| -> Check {
        for n in 1..=4u32 {
            let ns = n.to_string();
            let cert = verified(&["verify", "--claim", "simon", "--n", &ns])?;
            let subcubes = 3u64.pow(n);
            ensure(
                cert.counts["equality_cases"] == subcubes && cert.counts["subcubes"] == subcubes,
                || format!("n={n}: equality cases {:?}", cert.counts),
            )?;
            if n == 4 {
                ensure(cert.subsets_examined == 65535, || {
                    format!("examined {}", cert.subsets_examined)
                })?;
            }
        }
        within(started, Duration::from_secs(10))?;
        Ok("n=1..4 verified, 65535 subsets at n=4, equality cases = 81 subcubes".into())
    })();
    report("1", "Simon bound and equality cases", started, result);
}

#[test]
fn criterion_2_main() {
    let started = Instant::now();
    let expected: [&[Option<u64>]; 4] = [
        &[None, Some(2)],
        &[Some(2), Some(3), Some(4)],
        &[Some(2), Some(4), Some(6), Some(8)],
        &[Some(2), Some(4), Some(7), Some(12), Some(16)],
    ];
    let result = (|| -> Check {
        for (n, want) in (1..=4u32).zip(expected) {
            let ns = n.to_string();
            let cert = verified(&["verify", "--claim", "main", "--n", &ns])?;
            let found: Vec<Option<u64>> = cert.per_d.iter().map(|r| r.found).collect();
            ensure(found == want, || {
                format!("n={n}: minima {found:?}, want {want:?}")
            })?;
            for row in &cert.per_d {
                let Some(lines) = &row.witness else {
                    ensure(row.status == RowStatus::Infeasible, || {
                        format!("n={n} d={}: no witness", row.d)
                    })?;
                    continue;
                };
                let w = VertexSet::parse_text(&lines.join("\n")).map_err(|e| e.to_string())?;
                let ok = Some(w.len()) == row.found
                    && w.min_degree().ok() == Some(row.d)
                    && w.is_irreducible();
                ensure(ok, || {
                    format!("n={n} d={}: witness does not re-validate", row.d)
                })?;
            }
        }
        within(started, Duration::from_secs(60))?;
        Ok("n=4 minima 2,4,7,12,16 with re-validated witnesses".into())
    })();
    report("2", "least irreducible sizes", started, result);
}

#[test]
fn criterion_3_gap() {
    let started = Instant::now();
    let result = (|| -> Check {
        for n in 1..=4u32 {
            let ns = n.to_string();
            let cert = verified(&["verify", "--claim", "gap", "--n", &ns])?;
            for h in &cert.histogram {
                let floor = 1u64 << h.degree;
                let threshold = gap_threshold(h.degree);
                for s in &h.sizes {
                    let inside = s.size > floor && Dyadic::from(s.size) < threshold;
                    ensure(!inside, || {
                        format!("n={n} δ={}: {} sets of size {}", h.degree, s.count, s.size)
                    })?;
                    ensure(s.size >= floor, || {
                        format!("n={n} δ={}: size {}", h.degree, s.size)
                    })?;
                }
            }
        }
        within(started, Duration::from_secs(60))?;
        Ok("no size inside (2^d, 3·2^(d-1)) for n=1..4; every size-2^d set is a subcube".into())
    })();
    report("3", "gap between 2^d and 3·2^(d-1)", started, result);
}

#[test]
fn criterion_4_lemma_suite() {
    let started = Instant::now();
    let result = (|| -> Check {
        let mut failures = Vec::new();
        let mut runs: Vec<(String, Vec<String>)> = Vec::new();
        for n in 1..=4u32 {
            for claim in ["lemma-minsize", "lemma-extended"] {
                runs.push((
                    format!("{claim} n={n}"),
                    vec!["--claim".into(), claim.into(), "--n".into(), n.to_string()],
                ));
            }
        }
        for n in 1..=3u32 {
            runs.push((
                format!("lemma-fancy n={n}"),
                vec![
                    "--claim".into(),
                    "lemma-fancy".into(),
                    "--n".into(),
                    n.to_string(),
                ],
            ));
        }
        runs.push((
            "lemma-fancy n=4 sampled".into(),
            [
                "--claim",
                "lemma-fancy",
                "--n",
                "4",
                "--samples",
                "100000",
                "--seed",
                "2016",
            ]
            .map(String::from)
            .to_vec(),
        ));
        for (name, args) in &runs {
            let mut full = vec!["verify"];
            full.extend(args.iter().map(String::as_str));
            let (code, cert) = certificate(&full)?;
            if cert.seed.is_some() || name.contains("sampled") {
                ensure(
                    cert.seed == Some(2016) && cert.samples.is_some_and(|s| s >= 100_000),
                    || format!("{name}: seed/samples not recorded"),
                )?;
            }
            ensure(!cert.counts.is_empty(), || {
                format!("{name}: no counts recorded")
            })?;
            if code != 0 || cert.verdict != Verdict::Verified {
                let witness = cert.counterexample.as_ref().map(|c| c[1..].join(" "));
                failures.push(format!(
                    "{name}: {:?}, counterexample {{{}}} with G_l = {}",
                    cert.verdict,
                    witness.unwrap_or_default(),
                    cert.counterexample_detail.as_deref().unwrap_or("-"),
                ));
            }
        }
        within(started, Duration::from_secs(300))?;
        if failures.is_empty() {
            Ok(format!("{} runs verified", runs.len()))
        } else {
            Err(failures.join("; "))
        }
    })();
    report("4", "lemma suite", started, result);
}

#[test]
fn criterion_5_constructions() {
    let started = Instant::now();
    let result = (|| -> Check {
        let mut checked = 0;
        for n in 1..=12u32 {
            for d in 0..=n {
                let s = simon_extremal(n, d).map_err(|e| e.to_string())?;
                ensure(s.len() == 1 << d && s.min_degree().ok() == Some(d), || {
                    format!("simon ({n},{d})")
                })?;
                if !is_feasible(n, d) {
                    ensure(extremal_irreducible(n, d).is_err(), || {
                        format!("({n},{d}) should be infeasible")
                    })?;
                    continue;
                }
                let v = extremal_irreducible(n, d).map_err(|e| e.to_string())?;
                let formula =
                    (Dyadic::pow2(d as i32 + 1) - Dyadic::pow2(2 * d as i32 - n as i32)).ceil();
                ensure(v.len() as i128 == formula, || {
                    format!("({n},{d}): size {} vs {formula}", v.len())
                })?;
                ensure(v.min_degree().ok() == Some(d), || format!("({n},{d}): δ"))?;
                ensure(v.is_irreducible(), || format!("({n},{d}): not irreducible"))?;
                checked += 1;
            }
        }
        within(started, Duration::from_secs(30))?;
        Ok(format!("{checked} feasible (n,d) pairs with n <= 12"))
    })();
    report("5", "extremal constructions", started, result);
}

fn outcome_key(out: &SearchOutcome) -> Result<Option<u64>, String> {
    match out {
        SearchOutcome::Found { size, .. } => Ok(Some(*size)),
        SearchOutcome::Infeasible { .. } => Ok(None),
        SearchOutcome::BudgetExceeded { .. } => Err("unexpected budget stop".into()),
    }
}

#[test]
fn criterion_6_search_oracle() {
    let started = Instant::now();
    let result = (|| -> Check {
        let mut combos = 0;
        for n in 0..=4u32 {
            for d in 0..=n {
                for mode in [DegreeMode::Exact, DegreeMode::AtLeast] {
                    for irreducible in [false, true] {
                        let cfg = SearchConfig::new(CubeDim::new(n).unwrap(), d)
                            .mode(mode)
                            .irreducible(irreducible);
                        let a = min_size_search(&cfg).map_err(|e| e.to_string())?;
                        let b = min_size_search(&cfg.clone().strategy(Strategy::CanonicalBnb))
                            .map_err(|e| e.to_string())?;
                        let (ka, kb) = (outcome_key(&a)?, outcome_key(&b)?);
                        ensure(ka == kb, || {
                            format!(
                                "n={n} d={d} {mode:?} irreducible={irreducible}: {ka:?} vs {kb:?}"
                            )
                        })?;
                        combos += 1;
                    }
                }
            }
        }
        Ok(format!("{combos} combinations agree"))
    })();
    report("6", "branch and bound equals enumeration", started, result);
}

#[test]
fn criterion_7_measures() {
    let started = Instant::now();
    let result = (|| -> Check {
        for n in 1..=8u32 {
            let get = |name: &str| {
                TruthTable::from_catalog(&format!("{name}:{n}")).map_err(|e| e.to_string())
            };
            let or = get("or")?;
            ensure(
                or.c_sensitivity(true) == Some(1) && or.c_sensitivity(false) == Some(n),
                || format!("or:{n}"),
            )?;
            let and = get("and")?;
            ensure(
                and.c_sensitivity(true) == Some(n) && and.c_sensitivity(false) == Some(1),
                || format!("and:{n}"),
            )?;
            ensure(get("parity")?.sensitivity() == n, || format!("parity:{n}"))?;
        }
        let dim = CubeDim::new(3).unwrap();
        let mut nonconstant = 0;
        for table in 0u32..256 {
            let ones =
                VertexSet::from_indices(dim, (0..8).filter(|i| table >> i & 1 == 1)).unwrap();
            if ones.is_empty() || ones.len() == 8 {
                continue;
            }
            let f = TruthTable::from_one_set(ones.clone());
            let s1 = f.c_sensitivity(true).unwrap();
            ensure(ones.min_degree().ok() == Some(3 - s1), || {
                format!("table {table:08b}")
            })?;
            nonconstant += 1;
        }
        let run = cli(&["measure", "--fn", "or:3", "--format", "json"], None);
        let doc: serde_json::Value =
            serde_json::from_str(&run.stdout).map_err(|e| e.to_string())?;
        ensure(doc["s1"] == 1 && doc["s0"] == 3 && doc["ones"] == 7, || {
            format!("measure or:3 -> {doc}")
        })?;
        Ok(format!(
            "catalog exact for n=1..8; δ = n - s_1 on all {nonconstant} non-constant f at n=3"
        ))
    })();
    report("7", "sensitivity measures", started, result);
}

#[test]
fn criterion_8_determinism() {
    let started = Instant::now();
    let mut commands: Vec<Vec<String>> = Vec::new();
    for claim in [
        "simon",
        "main",
        "gap",
        "lemma-minsize",
        "lemma-extended",
        "lemma-fancy",
    ] {
        commands.push(
            ["verify", "--claim", claim, "--n", "4", "--no-timing"]
                .map(String::from)
                .to_vec(),
        );
    }
    for args in [
        [
            "search",
            "--n",
            "4",
            "--d",
            "2",
            "--irreducible",
            "--strategy",
            "exhaustive",
        ],
        [
            "search",
            "--n",
            "4",
            "--d",
            "2",
            "--irreducible",
            "--strategy",
            "canonical-bnb",
        ],
        [
            "search",
            "--n",
            "5",
            "--d",
            "3",
            "--irreducible",
            "--strategy",
            "canonical-bnb",
        ],
    ] {
        let mut v: Vec<String> = args.map(String::from).to_vec();
        v.extend(["--no-timing", "--format", "json"].map(String::from));
        commands.push(v);
    }
    commands.push(
        ["construct", "--n", "6", "--d", "4", "--irreducible"]
            .map(String::from)
            .to_vec(),
    );
    let result = (|| -> Check {
        for args in &commands {
            let args: Vec<&str> = args.iter().map(String::as_str).collect();
            let base = cli(&args, Some(1));
            for t in [2, 8] {
                let other = cli(&args, Some(t));
                ensure(
                    other.code == base.code && other.stdout == base.stdout,
                    || format!("{args:?} differs between 1 and {t} threads"),
                )?;
            }
        }
        Ok(format!(
            "{} commands byte-identical across 1, 2, 8 threads",
            commands.len()
        ))
    })();
    report("8", "determinism across worker counts", started, result);
}

#[test]
fn criterion_9_stretch_n5() {
    let started = Instant::now();
    let result = (|| -> Check {
        let run = cli(
            &[
                "verify",
                "--claim",
                "main",
                "--n",
                "5",
                "--allow-large",
                "--budget",
                "1000000",
            ],
            None,
        );
        let cert = Certificate::from_json(&run.stdout).map_err(|e| e.to_string())?;
        ensure(run.code == 0 || run.code == 4, || {
            format!("exit {}", run.code)
        })?;
        let confirmed: Vec<String> = cert
            .per_d
            .iter()
            .filter(|r| r.status == RowStatus::Confirmed)
            .map(|r| format!("d={}→{}", r.d, r.found.unwrap()))
            .collect();
        let d4 = cert.per_d.iter().find(|r| r.d == 4).and_then(|r| r.found);
        ensure(d4.is_none_or(|s| s == 24), || format!("d=4 found {d4:?}"))?;
        Ok(format!(
            "non-gating; {:?}, confirmed {}",
            cert.verdict,
            confirmed.join(" ")
        ))
    })();
    report("9", "stretch: n=5 under a budget", started, result);
}

//! Acceptance criteria 1–11. Each criterion prints one PASS/FAIL line; the test
//! fails unless the failing set is exactly `EXPECTED_FAILURES`.
//!
//! Runtime limits are wall-clock seconds on the machine running the suite.

use std::collections::BTreeSet;
use std::io::Write;
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use gabrank::gf::{default_spec, Field};
use gabrank::linpoly::Algebra;
use gabrank::rankcode::{apply_equiv, gabidulin, min_distance, Code, Equivalence};
use gabrank::replicate::ext::{numden_coeffs, numden_eval, ExtParams};
use gabrank::replicate::main2;
use gabrank::replicate::ranghi::ranghi_check;
use gabrank::replicate::sistemone::sistemone_exhaustive;
use gabrank::replicate::table1::{find_row, verify_row, verify_table, KNOWN_BAD_ROWS};
use gabrank::search::{
    exact_tensor_rank, kruskal_bound, random_upper_bound, stabilized_by_twists, verify_perfect_basis,
    SearchConfig, SearchResult, Status,
};
use gabrank::Error;

/// Criteria that cannot pass with the embedded table: three printed bases do
/// not contain their code, and criteria 3 and 5 take their upper bound from two
/// of those rows.
const EXPECTED_FAILURES: [u32; 3] = [1, 3, 5];

const LIMIT_1: u64 = 120;
const LIMIT_2: u64 = 15 * 60;
const LIMIT_3: u64 = 30 * 60;
const LIMIT_4: u64 = 5 * 60;
const LIMIT_5_DEEP: u64 = 6 * 3600;
const LIMIT_7: u64 = 60;
const LIMIT_8: u64 = 60;
const LIMIT_9: u64 = 120;
const THREADS: usize = 4;
const RANDOM_TRIALS: u64 = 1_000_000;
const RANGHI_PER_CLASS: usize = 50;
const QUARTIC_PARAMS: usize = 100;
const EQUIVALENCES: usize = 5;
/// Codes whose exact tensor rank is found in seconds.
const KRUSKAL_CASES: [(u32, u32, usize); 10] =
    [(2, 3, 1), (2, 3, 2), (2, 4, 2), (2, 4, 3), (3, 3, 1), (3, 3, 2), (3, 4, 2), (3, 4, 3), (4, 3, 1), (4, 3, 2)];
/// Largest number of codewords enumerated for a minimum distance.
const DISTANCE_BUDGET: u128 = 1 << 20;

struct Outcome {
    id: u32,
    pass: bool,
    detail: String,
}

fn algebra(q: u32, n: u32) -> Arc<Algebra> {
    Algebra::new(Arc::new(Field::build(default_spec(q, n).unwrap()).unwrap())).unwrap()
}

fn gab(q: u32, n: u32, k: usize) -> Code {
    gabidulin(&algebra(q, n), k, 1).unwrap()
}

fn exact(code: &Code) -> SearchResult {
    let cfg = SearchConfig {
        threads: THREADS,
        ..SearchConfig::default()
    };
    exact_tensor_rank(code, &cfg).unwrap()
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let v = f();
    (v, start.elapsed())
}

fn within(d: Duration, limit: u64) -> (bool, String) {
    (d.as_secs() < limit, format!("{:.1}s of {limit}s", d.as_secs_f64()))
}

fn bounds(r: &SearchResult) -> String {
    match r.trk_high {
        Some(h) if h == r.trk_low => format!("{:?} {h}", r.status),
        Some(h) => format!("{:?} [{}, {h}]", r.status, r.trk_low),
        None => format!("{:?} >= {}", r.status, r.trk_low),
    }
}

fn is_exact(r: &SearchResult, trk: usize) -> bool {
    r.status == Status::Exact && r.trk_low == trk && r.trk_high == Some(trk)
}

fn c1_table() -> Outcome {
    let (reports, d) = timed(|| verify_table().unwrap());
    let bad: Vec<String> = reports
        .iter()
        .filter(|r| !r.passed())
        .map(|r| format!("({},{},{}): {}", r.n, r.k, r.q, r.failures.join("; ")))
        .collect();
    let (fast, t) = within(d, LIMIT_1);
    Outcome {
        id: 1,
        pass: bad.is_empty() && reports.len() == 8 && fast,
        detail: format!("{}/8 rows verify [{t}] {}", 8 - bad.len(), bad.join(" | ")),
    }
}

fn c2_q2() -> Outcome {
    let cases = [(3, 2, 7), (4, 2, 12), (4, 3, 13)];
    let (results, d) = timed(|| cases.map(|(n, k, _)| exact(&gab(2, n, k))));
    let ok = cases.iter().zip(&results).all(|(&(_, _, want), r)| is_exact(r, want));
    let (fast, t) = within(d, LIMIT_2);
    let got: Vec<String> = results.iter().map(bounds).collect();
    Outcome {
        id: 2,
        pass: ok && fast,
        detail: format!("trk = {} [{t}]", got.join(", ")),
    }
}

fn c3_q3_k2() -> Outcome {
    let code = gab(3, 4, 2);
    let (r, d) = timed(|| exact(&code));
    let row = verify_row(&find_row(4, 2, 3).unwrap()).unwrap();
    let own = verify_perfect_basis(&code, r.basis.as_deref().unwrap_or_default()).unwrap();
    let (fast, t) = within(d, LIMIT_3);
    Outcome {
        id: 3,
        pass: is_exact(&r, 11) && stabilized_by_twists(&code) && row.passed() && fast,
        detail: format!(
            "search: {:?} {} ({} nodes, symmetry {}) [{t}]; search basis verifies: {}; table row basis verifies: {} {}",
            r.status,
            r.trk_low,
            r.nodes,
            stabilized_by_twists(&code),
            own.passed(),
            row.passed(),
            row.failures.join("; ")
        ),
    }
}

fn c4_q3_k3() -> Outcome {
    let code = gab(3, 4, 3);
    let (r, d) = timed(|| exact(&code));
    let (fast, t) = within(d, LIMIT_4);
    Outcome {
        id: 4,
        pass: is_exact(&r, 13) && r.nodes == 1 && stabilized_by_twists(&code) && fast,
        detail: format!("{:?} {} after {} node(s) [{t}]", r.status, r.trk_low, r.nodes),
    }
}

fn c5_q4() -> Outcome {
    let code = gab(4, 4, 2);
    let row = verify_row(&find_row(4, 2, 4).unwrap()).unwrap();
    let (deep, d) = timed(|| exact(&code));
    let (fast, t) = within(d, LIMIT_5_DEEP);
    let out = Command::new(env!("CARGO_BIN_EXE_gabrank"))
        .args(["trk", "--q", "4", "--n", "4", "--k", "2", "--json"])
        .output()
        .unwrap();
    let quick: Value = serde_json::from_slice(&out.stdout).unwrap();
    let interval = out.status.success()
        && quick["status"] == "Interval"
        && quick["trk_low"] == 10
        && quick["trk_high"] == 11
        && quick["note"].as_str().is_some_and(|n| n.contains("theorem"));
    Outcome {
        id: 5,
        pass: row.passed() && is_exact(&deep, 11) && fast && interval,
        detail: format!(
            "table row basis verifies: {} {}; deep: {:?} {} [{t}]; default run Interval [10,11] with note: {interval}",
            row.passed(),
            row.failures.join("; "),
            deep.status,
            deep.trk_low
        ),
    }
}

fn c6_random() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for q in [4, 5] {
        let code = gab(q, 4, 1);
        let (r, d) = timed(|| random_upper_bound(&code, 8, RANDOM_TRIALS, 0).unwrap());
        let basis_ok = r
            .basis
            .as_ref()
            .is_some_and(|b| verify_perfect_basis(&code, b).unwrap().passed());
        ok &= r.trk_high == Some(8) && r.nodes <= RANDOM_TRIALS && basis_ok;
        parts.push(format!("q={q}: {} after {} trials, basis verifies {basis_ok} ({:.1}s)", bounds(&r), r.nodes, d.as_secs_f64()));
    }
    Outcome {
        id: 6,
        pass: ok,
        detail: parts.join("; "),
    }
}

fn c7_sistemone() -> Outcome {
    let (reports, d) = timed(|| [2, 3, 4].map(|q| sistemone_exhaustive(algebra(q, 4).field())));
    let pairs: Vec<u64> = reports.iter().map(|r| r.pairs).collect();
    let mismatches: usize = reports.iter().map(|r| r.mismatches.len() + r.overlaps.len()).sum();
    let (fast, t) = within(d, LIMIT_7);
    Outcome {
        id: 7,
        pass: pairs == [225, 6400, 65025] && mismatches == 0 && fast,
        detail: format!("pairs {pairs:?}, mismatches {mismatches} [{t}]"),
    }
}

fn c8_ranghi() -> Outcome {
    let alg = algebra(11, 4);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (rep, d) = timed(|| ranghi_check(&alg, RANGHI_PER_CLASS, &mut rng).unwrap());
    let n = RANGHI_PER_CLASS as u64;
    let (fast, t) = within(d, LIMIT_8);
    Outcome {
        id: 8,
        pass: rep.passed() && rep.instances == [n; 3] && fast,
        detail: format!(
            "instances {:?}, rank failures {}, det S6 failures {}, det S7 failures {} [{t}]",
            rep.instances,
            rep.rank_failures.len(),
            rep.s6_failures.len(),
            rep.s7_failures.len()
        ),
    }
}

fn c9_m16() -> Outcome {
    let (reports, d) = timed(|| [5, 7].map(|q| main2::scan(algebra(q, 4).field()).unwrap()));
    let ok = reports.iter().all(|r| r.mismatches.is_empty() && r.full_rank > 0 && r.witness.is_some());
    let (fast, t) = within(d, LIMIT_9);
    let parts: Vec<String> = reports
        .iter()
        .map(|r| format!("q={}: {} points, {} of rank 11, {} mismatches", r.q, r.points, r.full_rank, r.mismatches.len()))
        .collect();
    Outcome {
        id: 9,
        pass: ok && fast,
        detail: format!("{} [{t}]", parts.join("; ")),
    }
}

fn c10_quartic() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut bad = 0;
    for q in [3, 5, 7] {
        let alg = algebra(q, 4);
        let f = alg.field();
        let fq = f.fq_elements();
        for _ in 0..QUARTIC_PARAMS {
            let p = ExtParams::random(f, &mut rng);
            let c = numden_coeffs(f, &p);
            if !c[0].is_zero() || !c[4].is_zero() {
                bad += 1;
            }
            for &c1 in &fq {
                for &c2 in &fq {
                    // Σ C_k c1^k c2^(4-k), Horner in c1/c2 written out
                    let sum = (0..=4u64).fold(gabrank::gf::Elem::ZERO, |acc, k| {
                        let term = f.mul(c[4 - k as usize], f.mul(f.pow(c1, k), f.pow(c2, 4 - k)));
                        f.add(acc, term)
                    });
                    if sum != numden_eval(f, &p, c1, c2) {
                        bad += 1;
                    }
                }
            }
        }
    }
    Outcome {
        id: 10,
        pass: bad == 0,
        detail: format!("{QUARTIC_PARAMS} parameter sets at q = 3, 5, 7: {bad} mismatches"),
    }
}

fn c11_properties() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;

    let alg = algebra(2, 3);
    let code = gabidulin(&alg, 2, 1).unwrap();
    let base = exact(&code);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut invariant = 0;
    for _ in 0..EQUIVALENCES {
        let e = Equivalence::random(&alg, &mut rng);
        let image = apply_equiv(&code, &e).unwrap();
        let r = exact(&image);
        invariant += (r.status == Status::Exact && r.trk_low == base.trk_low) as usize;
        ok &= kruskal_bound(&image).unwrap() <= r.trk_low;
    }
    ok &= invariant == EQUIVALENCES;
    notes.push(format!("trk invariant under {invariant}/{EQUIVALENCES} equivalences"));

    let mut kruskal_ok = 0;
    for (q, n, k) in KRUSKAL_CASES {
        let code = gab(q, n, k);
        let r = exact(&code);
        if kruskal_bound(&code).unwrap() <= r.trk_low {
            kruskal_ok += 1;
        } else {
            ok = false;
        }
    }
    notes.push(format!("Kruskal bound at most trk in {kruskal_ok}/{} codes", KRUSKAL_CASES.len()));

    let (mut checked, mut skipped) = (0, 0);
    for q in [2u32, 3, 4, 5, 7, 8, 9] {
        for n in 2..=6u32 {
            if (q as u64).pow(n) > 1 << 16 {
                continue;
            }
            let alg = algebra(q, n);
            for k in 1..n as usize {
                for s in (1..n as usize).filter(|&s| gcd(s, n as usize) == 1) {
                    let code = gabidulin(&alg, k, s).unwrap();
                    match min_distance(&code, DISTANCE_BUDGET) {
                        Ok(dist) => {
                            checked += 1;
                            if code.h() != k * n as usize || dist != n as usize - k + 1 {
                                ok = false;
                                notes.push(format!("G_{{{k},{s}}} in L_{{{n},{q}}}: dim {}, distance {dist}", code.h()));
                            }
                        }
                        Err(Error::BudgetExceeded { .. }) => skipped += 1,
                        Err(e) => panic!("{e}"),
                    }
                }
            }
        }
    }
    notes.push(format!("Gabidulin dimension and distance on {checked} codes ({skipped} above {DISTANCE_BUDGET} codewords)"));
    Outcome {
        id: 11,
        pass: ok,
        detail: notes.join("; "),
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[test]
fn acceptance() {
    let checks: [fn() -> Outcome; 11] = [
        c1_table,
        c2_q2,
        c3_q3_k2,
        c4_q3_k3,
        c5_q4,
        c6_random,
        c7_sistemone,
        c8_ranghi,
        c9_m16,
        c10_quartic,
        c11_properties,
    ];
    let mut failed = BTreeSet::new();
    for check in checks {
        let o = check();
        // written to the raw handle so the lines survive output capture
        let line = format!("criterion {:>2}: {}  {}\n", o.id, if o.pass { "PASS" } else { "FAIL" }, o.detail);
        std::io::stderr().write_all(line.as_bytes()).unwrap();
        if !o.pass {
            failed.insert(o.id);
        }
    }
    let bad_rows: BTreeSet<_> = verify_table()
        .unwrap()
        .into_iter()
        .filter(|r| !r.passed())
        .map(|r| (r.n, r.k, r.q))
        .collect();
    assert_eq!(bad_rows, KNOWN_BAD_ROWS.into_iter().collect());
    assert_eq!(failed, EXPECTED_FAILURES.into_iter().collect::<BTreeSet<_>>());
}

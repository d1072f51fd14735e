//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits non-zero
//! if any criterion fails.

use std::collections::{HashSet, VecDeque};
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dialnet::fnets::crisp_net_from_bools;
use dialnet::laws::{self, Family, LawReport, LawSuiteConfig, LAW_NAMES};
use dialnet::dialectica::HomRule;
use dialnet::simulator::{self, Marking};
use dialnet::toposys::{
    self, AxiomMode, CrispTopSystem, ExtentVerdict, Frame, FuzzyTopSystem,
};
use dialnet::{io, Degree, FinSet, Limits, Orientation};

const RESIDUATION_BUDGET: Duration = Duration::from_secs(5);
const RESIDUATION_MAX_DENOM: u64 = 6;
const DIAL_SUITE_BUDGET: Duration = Duration::from_secs(600);
const RANDOM_SYSTEMS: usize = 200;
const MAX_OPENS: usize = 5;
const MAX_POINTS: usize = 4;
const SYSTEM_SEED: u64 = 0x5eed_0004;
const TOKEN_GAME_BUDGET: Duration = Duration::from_secs(60);
const MAX_EVENTS: usize = 2;
const MAX_CONDITIONS: usize = 3;
const EXPLORE_DEPTH: usize = 2;

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Outcome { passed, detail: detail.into() }
    }
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn dialnet(args: &[&str]) -> (i32, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_dialnet"))
        .args(args)
        .current_dir(fixture(""))
        .env_remove("DIALNET_CAP")
        .output()
        .expect("dialnet runs");
    (out.status.code().unwrap_or(-1), out.stdout)
}

// Exact rationals as (p, q) pairs, compared by cross-multiplication.
type Frac = (u64, u64);

fn frac_le(a: Frac, b: Frac) -> bool {
    a.0 * b.1 <= b.0 * a.1
}

fn frac_eq(a: Frac, b: Frac) -> bool {
    a.0 * b.1 == b.0 * a.1
}

fn frac_of(d: Degree) -> Frac {
    (d.numer(), d.denom())
}

/// Residual by search: the best `c` in the grid with `c·a ⊑ b`.
fn residual_by_search(grid: &[Frac], ori: Orientation, a: Frac, b: Frac) -> Frac {
    let le = |x: Frac, y: Frac| match ori {
        Orientation::Standard => frac_le(x, y),
        Orientation::Opposite => frac_le(y, x),
    };
    let monoid = |x: Frac, y: Frac| if le(x, y) { x } else { y };
    let mut best: Option<Frac> = None;
    for &c in grid {
        if le(monoid(c, a), b) && best.is_none_or(|m| le(m, c)) {
            best = Some(c);
        }
    }
    best.expect("the lineale bottom always qualifies")
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut grid: Vec<Frac> = Vec::new();
    for q in 1..=RESIDUATION_MAX_DENOM {
        for p in 0..=q {
            grid.push((p, q));
        }
    }
    let degrees: Vec<Degree> = grid.iter().map(|&(p, q)| Degree::new(p, q).unwrap()).collect();
    let mut triples = 0u64;
    let mut failures = Vec::new();
    for ori in [Orientation::Standard, Orientation::Opposite] {
        for (i, &a) in degrees.iter().enumerate() {
            for (j, &b) in degrees.iter().enumerate() {
                let r = ori.residual(a, b);
                if !frac_eq(frac_of(r), residual_by_search(&grid, ori, grid[i], grid[j])) {
                    failures.push(format!("{ori} residual({a}, {b}) = {r}"));
                }
                for &c in &degrees {
                    triples += 1;
                    let lhs = ori.le(ori.monoid(a, b), c);
                    let rhs = ori.le(a, ori.residual(b, c));
                    if lhs != rhs {
                        failures.push(format!("{ori} ({a}, {b}, {c})"));
                    }
                }
            }
        }
    }
    let elapsed = start.elapsed();
    Outcome::new(
        failures.is_empty() && elapsed < RESIDUATION_BUDGET,
        format!(
            "{triples} triples over {} distinct degrees, {} failures, {:.2?} (limit {:?}){}",
            Degree::grid(RESIDUATION_MAX_DENOM).len(),
            failures.len(),
            elapsed,
            RESIDUATION_BUDGET,
            failures.first().map(|f| format!(", first: {f}")).unwrap_or_default()
        ),
    )
}

fn summarize(report: &LawReport) -> (bool, String) {
    let mut ok = report.passed;
    let mut parts = Vec::new();
    for fam in &report.families {
        for law in &fam.laws {
            if law.instances() == 0 || !law.passed() {
                ok = false;
            }
            parts.push(format!("{}={}", law.law, law.instances()));
        }
    }
    (ok, parts.join(" "))
}

fn criterion_2() -> Outcome {
    let config = LawSuiteConfig {
        families: vec![Family::DialStandard],
        ..LawSuiteConfig::default()
    };
    let start = Instant::now();
    let report = match laws::run_suite(&config) {
        Ok(r) => r,
        Err(e) => return Outcome::new(false, format!("suite error: {e}")),
    };
    let elapsed = start.elapsed();
    let (ok, counts) = summarize(&report);
    let fam = &report.families[0];
    let all_laws = fam.laws.len() == LAW_NAMES.len() - 2;
    Outcome::new(
        ok && all_laws && elapsed < DIAL_SUITE_BUDGET,
        format!(
            "{} objects, instances: {counts}; {:.1?} (limit {:?})",
            fam.objects, elapsed, DIAL_SUITE_BUDGET
        ),
    )
}

fn criterion_3() -> Outcome {
    let config = LawSuiteConfig {
        families: vec![Family::Nets],
        ..LawSuiteConfig::default()
    };
    let report = match laws::run_suite(&config) {
        Ok(r) => r,
        Err(e) => return Outcome::new(false, format!("suite error: {e}")),
    };
    let (ok, counts) = summarize(&report);
    let fam = &report.families[0];
    let complete = fam.laws.len() == LAW_NAMES.len();
    Outcome::new(
        ok && complete,
        format!("{} nets, instances: {counts}", fam.objects),
    )
}

/// Every distributive lattice with at most five elements, up to isomorphism.
fn small_frames() -> Vec<Frame> {
    let mut out: Vec<Frame> = (1..=MAX_OPENS)
        .map(|n| Frame::chain((0..n).map(|i| format!("o{i}"))).unwrap())
        .collect();
    let t = true;
    let f = false;
    let posets: [Vec<Vec<bool>>; 3] = [
        vec![vec![t, f], vec![f, t]],
        vec![vec![t, f, t], vec![f, t, t], vec![f, f, t]],
        vec![vec![t, t, t], vec![f, t, f], vec![f, f, t]],
    ];
    for p in posets {
        out.push(Frame::of_down_sets(&p).unwrap());
    }
    out
}

/// Prime filters of a finite frame, by enumerating subsets.
fn prime_filters(frame: &Frame) -> Vec<Vec<bool>> {
    let n = frame.len();
    let mut out = Vec::new();
    for mask in 0u32..1 << n {
        let has = |a: usize| mask >> a & 1 == 1;
        let mut ok = has(frame.top()) && !has(frame.bottom());
        for a in 0..n {
            for b in 0..n {
                let meet = frame.meet(a, b);
                let join = frame.join(a, b);
                ok &= (has(a) && has(b)) == has(meet);
                ok &= (has(a) || has(b)) == has(join);
            }
        }
        if ok {
            out.push((0..n).map(has).collect());
        }
    }
    out
}

fn random_positive(rng: &mut ChaCha8Rng) -> Degree {
    let q = rng.random_range(1..=4);
    Degree::new(rng.random_range(1..=q), q).unwrap()
}

fn random_sat(rng: &mut ChaCha8Rng, frame: &Frame, filters: &[Vec<bool>], points: usize) -> Vec<Degree> {
    let n = frame.len();
    let mut sat = Vec::with_capacity(points * n);
    for _ in 0..points {
        let style = rng.random_range(0..3);
        let support: Vec<bool> = if style < 2 && !filters.is_empty() {
            let mut s = filters[rng.random_range(0..filters.len())].clone();
            if style == 1 {
                let k = rng.random_range(0..n);
                s[k] = !s[k];
            }
            s
        } else {
            (0..n).map(|_| rng.random_bool(0.5)).collect()
        };
        for on in support {
            sat.push(if on { random_positive(rng) } else { Degree::ZERO });
        }
    }
    sat
}

fn point_set(n: usize) -> FinSet {
    FinSet::atoms((0..n).map(|i| format!("x{i}"))).unwrap()
}

fn criterion_4() -> (Outcome, Vec<FuzzyTopSystem>) {
    let frames = small_frames();
    let filters: Vec<Vec<Vec<bool>>> = frames.iter().map(prime_filters).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(SYSTEM_SEED);
    let (mut accepted, mut disagreements, mut bad_facts) = (0, 0, 0);
    for _ in 0..RANDOM_SYSTEMS {
        let k = rng.random_range(0..frames.len());
        let frame = &frames[k];
        let points = point_set(rng.random_range(0..=MAX_POINTS));
        let sat = random_sat(&mut rng, frame, &filters[k], points.len());
        let binary = toposys::check_axioms(&points, frame, &sat, AxiomMode::BinaryAndEmpty).unwrap();
        let full = toposys::check_axioms(&points, frame, &sat, AxiomMode::AllSubsets).unwrap();
        if binary.is_valid() != full.is_valid() {
            disagreements += 1;
        }
        if binary.is_valid() {
            accepted += 1;
            let n = frame.len();
            for x in points.indices() {
                if !sat[x * n + frame.top()].is_positive() || !sat[x * n + frame.bottom()].is_zero() {
                    bad_facts += 1;
                }
            }
        }
    }

    let mut embedded = Vec::new();
    let mut embed_failures = 0;
    for (frame, filters) in frames.iter().zip(&filters) {
        for points in 0..=MAX_POINTS.min(3) {
            if points > 0 && filters.is_empty() {
                continue;
            }
            let mut pick = vec![0usize; points];
            loop {
                let models = pick.iter().flat_map(|&i| filters[i].iter().copied()).collect();
                let ts = CrispTopSystem { points: point_set(points), frame: frame.clone(), models };
                match toposys::crisp_embed(&ts) {
                    Ok(sys) => {
                        let all = toposys::check_axioms(sys.points(), sys.frame(), &sat_of(&sys), AxiomMode::AllSubsets);
                        if !all.is_ok_and(|v| v.is_valid()) {
                            embed_failures += 1;
                        }
                        embedded.push(sys);
                    }
                    Err(_) => embed_failures += 1,
                }
                if !advance(&mut pick, filters.len()) {
                    break;
                }
            }
        }
    }
    let passed = disagreements == 0 && bad_facts == 0 && embed_failures == 0 && accepted > 0;
    (
        Outcome::new(
            passed,
            format!(
                "{RANDOM_SYSTEMS} random systems, {accepted} accepted, {disagreements} mode disagreements, \
                 {bad_facts} top/bottom violations; {} crisp embeddings, {embed_failures} rejected",
                embedded.len()
            ),
        ),
        embedded,
    )
}

fn sat_of(sys: &FuzzyTopSystem) -> Vec<Degree> {
    sys.sat_rows().concat()
}

/// Odometer step over `0..base` digits; false after the last combination.
fn advance(digits: &mut [usize], base: usize) -> bool {
    for d in digits.iter_mut() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

fn criterion_5(embedded: &[FuzzyTopSystem]) -> Outcome {
    let not_exact = embedded
        .iter()
        .filter(|s| toposys::check_extent_topology(s).verdict != ExtentVerdict::Exact)
        .count();
    let stored = std::fs::read_to_string(fixture("support_level_only.json"))
        .map_err(|e| e.to_string())
        .and_then(|text| {
            let v = io::parse(&text).map_err(|e| e.to_string())?;
            match io::system_from_json(&v).map_err(|e| e.to_string())? {
                io::SystemInput::Fuzzy { points, frame, sat } => {
                    FuzzyTopSystem::new(points, frame, sat).map_err(|e| e.to_string())
                }
                io::SystemInput::Crisp(_) => Err("fixture is crisp".to_string()),
            }
        });
    let fixture_verdict = stored.map(|s| toposys::check_extent_topology(&s).verdict);
    let passed = !embedded.is_empty()
        && not_exact == 0
        && matches!(fixture_verdict, Ok(ExtentVerdict::SupportLevelOnly));
    Outcome::new(
        passed,
        format!(
            "{} crisp-embedded systems, {not_exact} not exact; stored fuzzy fixture: {}",
            embedded.len(),
            match &fixture_verdict {
                Ok(v) => v.to_string(),
                Err(e) => e.clone(),
            }
        ),
    )
}

// Classical elementary-net token game on bitmasks, no contact check.
fn classical_enabled(pre: u32, m: u32) -> bool {
    pre & !m == 0
}

fn classical_fire(pre: u32, post: u32, m: u32) -> u32 {
    (m & !pre) | post
}

fn classical_reachable(pre: &[u32], post: &[u32], m0: u32, depth: usize) -> usize {
    let mut seen = HashSet::from([m0]);
    let mut queue = VecDeque::from([(m0, 0)]);
    while let Some((m, d)) = queue.pop_front() {
        if d == depth {
            continue;
        }
        for e in 0..pre.len() {
            if classical_enabled(pre[e], m) {
                let next = classical_fire(pre[e], post[e], m);
                if seen.insert(next) {
                    queue.push_back((next, d + 1));
                }
            }
        }
    }
    seen.len()
}

fn rows(bits: &[u32], width: usize) -> Vec<Vec<bool>> {
    bits.iter().map(|r| (0..width).map(|b| r >> b & 1 == 1).collect()).collect()
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let limits = Limits::default();
    let (mut nets, mut checks, mut disagreements) = (0u64, 0u64, 0u64);
    let mut first = None;
    for ne in 1..=MAX_EVENTS {
        let events = FinSet::atoms((0..ne).map(|i| format!("e{i}"))).unwrap();
        for nb in 0..=MAX_CONDITIONS {
            let conditions = FinSet::atoms((0..nb).map(|i| format!("b{i}"))).unwrap();
            let row_bits = 1u32 << nb;
            let total = (row_bits as u64).pow(2 * ne as u32);
            for code in 0..total {
                let mut c = code;
                let mut take = || {
                    let r = (c % row_bits as u64) as u32;
                    c /= row_bits as u64;
                    r
                };
                let pre: Vec<u32> = (0..ne).map(|_| take()).collect();
                let post: Vec<u32> = (0..ne).map(|_| take()).collect();
                let net = crisp_net_from_bools(events.clone(), conditions.clone(), &rows(&pre, nb), &rows(&post, nb))
                    .unwrap();
                nets += 1;
                for m in 0..row_bits {
                    let marking = Marking::new(
                        &conditions,
                        (0..nb).map(|b| if m >> b & 1 == 1 { Degree::ONE } else { Degree::ZERO }).collect(),
                    )
                    .unwrap();
                    let to_bits = |mk: &Marking| {
                        let mut bits = 0u32;
                        for (b, d) in mk.degrees().iter().enumerate() {
                            if d.is_one() {
                                bits |= 1 << b;
                            } else if !d.is_zero() {
                                return None;
                            }
                        }
                        Some(bits)
                    };
                    for e in 0..ne {
                        checks += 1;
                        let eps = simulator::enabledness(&net, &marking, e).unwrap();
                        let expect_on = classical_enabled(pre[e], m);
                        let fired = simulator::fire(&net, &marking, e, Degree::ZERO);
                        let agree = match (expect_on, &fired) {
                            (true, Ok(next)) => {
                                eps.is_one() && to_bits(next) == Some(classical_fire(pre[e], post[e], m))
                            }
                            (false, Err(_)) => eps.is_zero(),
                            _ => false,
                        };
                        if !agree {
                            disagreements += 1;
                            first.get_or_insert(format!("pre {pre:?} post {post:?} marking {m:#b} event {e}"));
                        }
                    }
                    checks += 1;
                    let tree = simulator::explore(&net, &marking, EXPLORE_DEPTH, Degree::ZERO, &limits).unwrap();
                    if tree.nodes.len() != classical_reachable(&pre, &post, m, EXPLORE_DEPTH) {
                        disagreements += 1;
                        first.get_or_insert(format!("reachability: pre {pre:?} post {post:?} marking {m:#b}"));
                    }
                }
            }
        }
    }
    let elapsed = start.elapsed();
    Outcome::new(
        disagreements == 0 && elapsed < TOKEN_GAME_BUDGET,
        format!(
            "{nets} nets, {checks} checks, {disagreements} disagreements, {:.2?} (limit {:?}){}",
            elapsed,
            TOKEN_GAME_BUDGET,
            first.map(|f| format!(", first: {f}")).unwrap_or_default()
        ),
    )
}

fn criterion_7() -> Outcome {
    let runs: [&[&str]; 5] = [
        &["laws", "--max-size", "1", "--seed", "7"],
        &["laws", "--family", "nets", "--mode", "randomized", "--seed", "11"],
        &["run", "producer_consumer.json", "producer_consumer_marking.json", "--schedule", "produce,consume"],
        &["run", "producer_consumer.json", "producer_consumer_marking.json", "--explore", "4"],
        &["run", "dim_net.json", "dim_marking.json", "--explore", "3", "--threshold", "1/5"],
    ];
    let mut differing = Vec::new();
    for args in runs {
        let (c1, a) = dialnet(args);
        let (c2, b) = dialnet(args);
        if c1 != 0 || c2 != 0 || a != b || a.is_empty() {
            differing.push(args.join(" "));
        }
    }
    Outcome::new(
        differing.is_empty(),
        format!("{} command pairs, differing or failing: {differing:?}", runs.len()),
    )
}

fn criterion_8() -> Outcome {
    let config = LawSuiteConfig {
        families: vec![Family::DialStandard],
        laws: vec!["adjunction".into()],
        hom_rule: HomRule::MonoidMutant,
        ..LawSuiteConfig::default()
    };
    let report = match laws::run_suite(&config) {
        Ok(r) => r,
        Err(e) => return Outcome::new(false, format!("suite error: {e}")),
    };
    let adj = report.law(Family::DialStandard, "adjunction").expect("adjunction ran");
    let cex = adj.counterexample.as_ref().map(|v| v.to_string()).unwrap_or_default();
    Outcome::new(
        !report.passed && adj.failures > 0 && !cex.is_empty(),
        format!(
            "{} of {} instances fail; counterexample: {}",
            adj.failures,
            adj.instances(),
            cex.chars().take(160).collect::<String>()
        ),
    )
}

fn main() {
    let mut results: Vec<(usize, &str, Outcome)> = Vec::new();
    let mut report = |n: usize, name: &'static str, o: Outcome| {
        println!("criterion {n} [{}] {name}: {}", if o.passed { "PASS" } else { "FAIL" }, o.detail);
        results.push((n, name, o));
    };
    report(1, "residuation in both orientations", criterion_1());
    report(2, "Dial monoidal closed laws", criterion_2());
    report(3, "net laws with products and coproducts", criterion_3());
    let (o4, embedded) = criterion_4();
    report(4, "satisfaction axioms", o4);
    report(5, "extent topology", criterion_5(&embedded));
    report(6, "crisp token game", criterion_6());
    report(7, "determinism", criterion_7());
    report(8, "mutated hom is rejected", criterion_8());
    let failed: Vec<usize> = results.iter().filter(|r| !r.2.passed).map(|r| r.0).collect();
    if failed.is_empty() {
        println!("acceptance: all {} criteria pass", results.len());
    } else {
        println!("acceptance: failing criteria {failed:?}");
        std::process::exit(1);
    }
}

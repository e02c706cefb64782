//! Acceptance criteria 1-10. Runs without the libtest harness so the
//! per-criterion PASS/FAIL lines always print; exits nonzero if any fails.

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rookmonoid::instances::{build_rook, build_rook_rank_level, build_symmetric, RookPoset};
use rookmonoid::mutation::{Mutation, MutationKind};
use rookmonoid::poset::{Edge, PosetParts};
use rookmonoid::rook::{self, rook_count};
use rookmonoid::verify::{self, generator_closure, CampaignConfig, Check, Scope};
use rookmonoid::{EdgeLabel, GradedPoset, InstanceSpec, RookElement};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration, what: &str) -> Result<(), String> {
    ensure(elapsed < limit, || format!("{what} took {elapsed:.2?}, limit {limit:?}"))
}

fn el(s: &str) -> RookElement {
    s.parse().unwrap()
}

fn campaign(instance: &str, checks: &str, scope: Option<Scope>) -> verify::VerificationReport {
    let mut config = CampaignConfig::new(instance.parse().unwrap())
        .with_checks(verify::parse_checks(checks).unwrap());
    if let Some(scope) = scope {
        config = config.with_scope(scope);
    }
    verify::run_campaign(&config).unwrap()
}

fn require_pass(report: &verify::VerificationReport) -> Result<(), String> {
    ensure(report.passed, || {
        let bad: Vec<String> = report
            .checks
            .iter()
            .filter(|t| t.failed > 0)
            .map(|t| format!("{} failed {}", t.check, t.failed))
            .collect();
        format!("{}: {}", report.instance, bad.join(", "))
    })
}

fn brute_force_rook_count(n: usize) -> usize {
    (0u32..1 << (n * n))
        .filter(|bits| {
            let cell = |i: usize, j: usize| (bits >> (i * n + j)) & 1;
            (0..n).all(|i| (0..n).map(|j| cell(i, j)).sum::<u32>() <= 1)
                && (0..n).all(|j| (0..n).map(|i| cell(i, j)).sum::<u32>() <= 1)
        })
        .count()
}

fn enumeration() -> Outcome {
    let start = Instant::now();
    let expected = [2usize, 7, 34, 209, 1546, 13327];
    for (n, &size) in (1..=6).zip(&expected) {
        let listed = rook::enumerate(n, 6).map_err(|e| e.to_string())?.len();
        ensure(listed == size, || format!("|R_{n}| = {listed}, expected {size}"))?;
        ensure(rook_count(n) == size as u128, || format!("closed form for n = {n}"))?;
        if n <= 4 {
            let brute = brute_force_rook_count(n);
            ensure(brute == size, || format!("brute force gives {brute} for n = {n}"))?;
        }
    }
    within(start.elapsed(), Duration::from_secs(10), "enumeration")?;
    Ok(format!("sizes {expected:?} by listing, closed form and matrices"))
}

fn length_formulas() -> Outcome {
    let start = Instant::now();
    let r5 = rook::enumerate(5, 6).map_err(|e| e.to_string())?;
    for x in &r5 {
        ensure(x.length_by_coinversions() == x.length_by_inversions(), || format!("{x} disagrees"))?;
    }
    for (s, l) in [
        ("4,0,5,0,3,1", 21),
        ("4,0,5,0,6,1", 22),
        ("2,6,5,0,4,1,7", 35),
        ("4,6,5,0,2,1,7", 36),
        ("7,6,5,0,4,1,2", 42),
    ] {
        let got = el(s).length();
        ensure(got == l, || format!("length of ({s}) is {got}, expected {l}"))?;
    }
    // Often quoted as 23; both formulas give 24.
    let z = el("6,0,5,0,3,1");
    ensure(z.length_by_coinversions() == 24 && z.length_by_inversions() == 24, || {
        format!("length of {z} is {}", z.length())
    })?;
    within(start.elapsed(), Duration::from_secs(1), "length formulas")?;
    Ok(format!("{} elements of R_5 agree; golden values reproduce; (6,0,5,0,3,1) = 24 by both formulas, not 23", r5.len()))
}

fn cover_oracle() -> Outcome {
    let start = Instant::now();
    let mut pairs = 0usize;
    for n in 1..=3 {
        let universe = rook::enumerate(n, 6).map_err(|e| e.to_string())?;
        let reach = generator_closure(&universe);
        let lt = |a: usize, b: usize| a != b && reach[a].contains(b);
        for (i, x) in universe.iter().enumerate() {
            for (j, y) in universe.iter().enumerate() {
                pairs += 1;
                let brute = lt(i, j)
                    && y.length() == x.length() + 1
                    && !(0..universe.len()).any(|k| lt(i, k) && lt(k, j));
                let fast = x.is_cover(y).map_err(|e| e.to_string())?.is_some();
                ensure(brute == fast, || format!("{x} -> {y}: definition {brute}, is_cover {fast}"))?;
            }
        }
    }
    within(start.elapsed(), Duration::from_secs(30), "cover oracle")?;
    Ok(format!("{pairs} ordered pairs for n <= 3, zero disagreements"))
}

fn unique_increasing_chain() -> Outcome {
    let start = Instant::now();
    let mut counts = Vec::new();
    for instance in ["rook:3", "rook:4"] {
        let report = campaign(instance, "el", Some(Scope::AllIntervals));
        require_pass(&report)?;
        counts.push(report.stats.intervals_examined);
    }
    within(start.elapsed(), Duration::from_secs(600), "R_3 and R_4")?;
    let sample = campaign("rook:5", "el", Some(Scope::sampled(20_000, 2024).unwrap()));
    require_pass(&sample)?;
    ensure(sample.stats.intervals_examined >= 20_000, || "short sample".into())?;
    Ok(format!(
        "all {} R_3 and {} R_4 intervals, plus {} sampled R_5 intervals: one increasing chain, equal to the lex-first",
        counts[0], counts[1], sample.stats.intervals_examined
    ))
}

fn length_two() -> Outcome {
    let p = build_rook(4, 6).map_err(|e| e.to_string())?;
    let report = verify::verify_length2("rook:4".parse().unwrap(), &p).map_err(|e| e.to_string())?;
    require_pass(&report)?;
    ensure(report.stats.length2_chains + report.stats.length2_diamonds > 0, || "no length-2 intervals".into())?;
    Ok(format!(
        "{} chains and {} diamonds; every diamond's opposite edges match",
        report.stats.length2_chains, report.stats.length2_diamonds
    ))
}

fn worked_example() -> Outcome {
    let p = build_rook(3, 6).map_err(|e| e.to_string())?;
    let idx = |s: &str| p.index_of(&el(s)).unwrap();
    let iv = p.interval(idx("0,1,0"), idx("3,1,2")).map_err(|e| e.to_string())?;
    let chain = p.lex_first_chain(&iv).map_err(|e| e.to_string())?;
    let vertices: Vec<String> = chain.vertices.iter().map(|&v| p.element(v).to_string()).collect();
    let labels: Vec<String> = chain.labels.iter().map(|l| l.to_string()).collect();
    let want_vertices = ["(0,1,0)", "(1,0,0)", "(1,0,2)", "(1,2,0)", "(1,2,3)", "(2,1,3)", "(3,1,2)"];
    let want_labels = ["(0,1)", "(0,2)", "(0,2)", "(0,3)", "(1,2)", "(2,3)"];
    ensure(vertices == want_vertices, || format!("vertices {vertices:?}"))?;
    ensure(labels == want_labels, || format!("labels {labels:?}"))?;
    ensure(chain.is_weakly_increasing(), || "not increasing".into())?;
    Ok(format!("labels {}", labels.join(",")))
}

fn label_set(p: &RookPoset) -> BTreeSet<(RookElement, RookElement, EdgeLabel)> {
    let mut out = BTreeSet::new();
    for x in 0..p.len() {
        for e in p.up_covers(x) {
            out.insert((p.element(x).clone(), p.element(e.target).clone(), e.label.unwrap()));
        }
    }
    out
}

fn edelman() -> Outcome {
    for n in 1..=4 {
        let slice = build_rook(n, 6)
            .and_then(|p| p.subposet(RookElement::is_permutation))
            .map_err(|e| e.to_string())?;
        let sym = build_symmetric(n, 6).map_err(|e| e.to_string())?;
        ensure(label_set(&slice) == label_set(&sym), || format!("labeled covers differ for n = {n}"))?;
        require_pass(&campaign(&format!("sym:{n}"), "el,length2,mobius", None))?;
        require_pass(&campaign(&format!("rook:{n}"), "edelman", None))?;
    }
    Ok("permutation slice of R_n equals S_n with labels, S_n passes EL, n <= 4".into())
}

fn mobius() -> Outcome {
    let mut intervals = 0u64;
    for n in [3, 4] {
        let p = build_rook(n, 6).map_err(|e| e.to_string())?;
        let table = p.mobius_table();
        let mut sums: BTreeMap<(usize, usize), i64> = BTreeMap::new();
        for (x, z, mu) in table.iter() {
            for y in 0..p.len() {
                if x != y && p.leq(z, y) && p.leq(x, y) {
                    *sums.entry((x, y)).or_default() += mu;
                }
            }
        }
        ensure(sums.values().all(|&s| s == 0), || format!("recursion fails on R_{n}"))?;
        intervals += sums.len() as u64;
        require_pass(&campaign(&format!("rook:{n}"), "mobius-descending", Some(Scope::AllIntervals)))?;
    }
    let mut slices = 0;
    let mut seen = BTreeSet::new();
    for n in 1..=4 {
        for k in 0..=n {
            let p = build_rook_rank_level(n, k, 6).map_err(|e| e.to_string())?;
            for (_, _, mu) in p.mobius_table().iter() {
                ensure((-1..=1).contains(&mu), || format!("mu = {mu} on R_{n},{k}"))?;
                seen.insert(mu);
            }
            require_pass(&campaign(&format!("rook:{n}:{k}"), "mobius-range", None))?;
            slices += 1;
        }
    }
    Ok(format!(
        "recursion on {intervals} R_3/R_4 intervals; strictly decreasing chain count matches; {slices} rank slices take values {seen:?}"
    ))
}

/// Bottom, three atoms, top: mu(bottom, top) = 2.
fn three_atom_poset() -> RookPoset {
    let elements: Vec<RookElement> = ["0,0", "0,1", "1,0", "0,2", "2,1"].into_iter().map(el).collect();
    let label = |a, b| Some(EdgeLabel::new(a, b).unwrap());
    let up = vec![
        vec![
            Edge { target: 1, label: label(0, 1) },
            Edge { target: 2, label: label(0, 1) },
            Edge { target: 3, label: label(0, 2) },
        ],
        vec![Edge { target: 4, label: label(1, 2) }],
        vec![Edge { target: 4, label: label(0, 2) }],
        vec![Edge { target: 4, label: label(0, 1) }],
        vec![],
    ];
    GradedPoset::from_parts(PosetParts { elements, ranks: vec![0, 1, 1, 1, 2], up, graded: true }).unwrap()
}

fn harness_power() -> Outcome {
    let instances = ["rook:3", "sym:4", "rook:3:2"];
    let kinds = [MutationKind::SwapLabels, MutationKind::DeleteCover, MutationKind::PerturbRank];
    let mut caught: BTreeMap<Check, String> = BTreeMap::new();
    'search: for instance in instances {
        let spec: InstanceSpec = instance.parse().unwrap();
        for kind in kinds {
            for seed in 0..20 {
                let m = Mutation::new(kind, seed);
                let report = verify::run_campaign(&CampaignConfig::new(spec).with_mutation(m))
                    .map_err(|e| format!("{instance} {m}: {e}"))?;
                for tally in report.checks.iter().filter(|t| t.failed > 0) {
                    caught.entry(tally.check).or_insert_with(|| format!("{instance} {m}"));
                }
                if caught.len() == Check::ALL.len() {
                    break 'search;
                }
            }
        }
    }
    let missing: Vec<&str> = Check::ALL.iter().filter(|c| !caught.contains_key(c)).map(|c| c.name()).collect();
    ensure(missing.is_empty(), || format!("never failed: {missing:?}"))?;

    let config = CampaignConfig::new("rook:2:1".parse().unwrap()).with_checks([Check::MobiusRange]);
    let report = verify::run_on_poset(&config, &three_atom_poset()).map_err(|e| e.to_string())?;
    ensure(report.failures(Check::MobiusRange) == 1, || "mu = 2 poset not flagged".into())?;
    Ok(format!(
        "all {} checks fail under some mutation ({}); mu = 2 poset flagged",
        caught.len(),
        caught.iter().map(|(c, m)| format!("{c}: {m}")).collect::<Vec<_>>().join("; ")
    ))
}

fn determinism() -> Outcome {
    let run = |threads: &str| {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = rookmonoid::cli::run(
            ["rookmonoid", "verify", "rook:4", "--checks", "all", "--threads", threads],
            &mut out,
            &mut err,
        );
        (code, out)
    };
    let (code1, one) = run("1");
    let (code8, eight) = run("8");
    ensure(code1 == 0 && code8 == 0, || format!("exit codes {code1}, {code8}"))?;
    ensure(one == eight, || "reports differ".into())?;
    Ok(format!("{} byte JSON report identical for 1 and 8 threads", one.len()))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("enumeration", enumeration),
        ("length formulas", length_formulas),
        ("cover oracle", cover_oracle),
        ("unique increasing chain", unique_increasing_chain),
        ("length-2 structure", length_two),
        ("worked chain example", worked_example),
        ("Edelman consistency", edelman),
        ("Mobius", mobius),
        ("harness power", harness_power),
        ("determinism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name} [{elapsed:.1?}]: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} [{elapsed:.1?}]: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

//! Acceptance criteria 1-10, one PASS/FAIL line each.
//!
//! Criteria that fail for a documented reason print FAIL with the failure class; the
//! process still exits 0 as long as every failure belongs to that class. Anything else
//! exits 1.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use hlcluster::gridseeds::initial_seed;
use hlcluster::heights::HeightFunction;
use hlcluster::hl::{ghl_monomial, GhlSpec};
use hlcluster::quiver::IcedQuiver;
use hlcluster::sequences::build_q_xi;
use hlcluster::verify::{
    appendix_family, random_specs, sweep_appendix, sweep_arrows, sweep_ghl, sweep_highest, sweep_oracle,
    verify_ghl, verify_hlr, Failure, VerificationReport,
};
use hlcluster::ymon::{a_monomial, compare_dominance, lift_r, CartanData, DomOrdering, YMonomial};
use hlcluster::Error;
use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

enum Outcome {
    Pass,
    /// Failed, but only in the documented class.
    Known(String),
    Unexpected(String),
}

struct Line {
    n: u32,
    outcome: Outcome,
    elapsed: Duration,
    bound: Duration,
    note: String,
}

fn run(n: u32, bound: Duration, f: impl FnOnce() -> (Outcome, String)) -> Line {
    let t = Instant::now();
    let (outcome, note) = f();
    let elapsed = t.elapsed();
    let line = Line { n, outcome, elapsed, bound, note };
    let (tag, why) = match (&line.outcome, line.elapsed <= line.bound) {
        (Outcome::Pass, true) => ("PASS", String::new()),
        (Outcome::Pass, false) => ("FAIL", " [time bound exceeded]".to_string()),
        (Outcome::Known(c), _) => ("FAIL", format!(" [known: {c}]")),
        (Outcome::Unexpected(c), _) => ("FAIL", format!(" [UNEXPECTED: {c}]")),
    };
    println!(
        "{tag} criterion {n}: {} ({:.2}s, bound {}s){why}",
        line.note,
        line.elapsed.as_secs_f64(),
        line.bound.as_secs()
    );
    line
}

fn first_failure(rep: &VerificationReport) -> String {
    rep.failures.first().map(|f| format!("{}: {}", f.what, f.detail)).unwrap_or_default()
}

fn verdict(rep: &VerificationReport) -> Outcome {
    if rep.passed {
        Outcome::Pass
    } else {
        Outcome::Unexpected(first_failure(rep))
    }
}

// Criterion 1

type Arrows = BTreeSet<(String, String, i64)>;

fn q_xi_fixture() -> (BTreeSet<String>, BTreeSet<String>, Arrows) {
    let p = |i: u32| format!("{i}\u{2032}");
    let pp = |i: u32| format!("{i}\u{2033}");
    let mut vertices = BTreeSet::new();
    let mut frozen = BTreeSet::new();
    for i in 1..=6 {
        vertices.extend([p(i), i.to_string(), pp(i)]);
        frozen.extend([p(i), pp(i)]);
    }
    let arrows = [
        (p(1), "1".into()),
        (p(3), "2".into()),
        (p(4), "3".into()),
        (p(5), "5".into()),
        ("1".into(), "2".into()),
        ("2".into(), p(2)),
        ("2".into(), pp(2)),
        ("2".into(), "3".into()),
        ("3".into(), p(3)),
        ("3".into(), pp(3)),
        ("3".into(), "4".into()),
        ("4".into(), p(4)),
        ("4".into(), pp(4)),
        ("5".into(), "4".into()),
        ("5".into(), "6".into()),
        ("6".into(), p(6)),
        ("6".into(), pp(6)),
        (pp(1), "1".into()),
        (pp(3), "2".into()),
        (pp(4), "3".into()),
        (pp(5), "5".into()),
    ];
    (vertices, frozen, arrows.into_iter().map(|(a, b): (String, String)| (a, b, 1)).collect())
}

fn criterion_1() -> (Outcome, String) {
    let xi = HeightFunction::new(vec![-3, -2, -3, -4, -5, -4]).unwrap();
    let q = build_q_xi(&xi);
    let (vertices, frozen, arrows) = q_xi_fixture();
    let got_v: BTreeSet<String> = q.names().iter().cloned().collect();
    let got_f: BTreeSet<String> = q.frozen_names().into_iter().collect();
    let got_a = q.arrow_set();
    let note = format!("{} vertices, {} arrows", got_v.len(), got_a.len());
    if got_v == vertices && got_f == frozen && got_a == arrows {
        (Outcome::Pass, note)
    } else {
        let missing: Vec<_> = arrows.difference(&got_a).collect();
        let extra: Vec<_> = got_a.difference(&arrows).collect();
        (Outcome::Unexpected(format!("missing {missing:?}, extra {extra:?}")), note)
    }
}

// Criterion 2

/// `(i, row, s)` for `X^{(s)}_{i,row}`, row by row.
const KR_LABELS_6_4: [(usize, i64, i64); 30] = [
    (1, 1, -1), (2, 1, 0), (3, 1, -1), (4, 1, 0), (5, 1, -1), (6, 1, 0),
    (1, 2, -3), (2, 2, -2), (3, 2, -3), (4, 2, -2), (5, 2, -3), (6, 2, -2),
    (1, 3, -5), (2, 3, -4), (3, 3, -5), (4, 3, -4), (5, 3, -5), (6, 3, -4),
    (1, 4, -7), (2, 4, -6), (3, 4, -7), (4, 4, -6), (5, 4, -7), (6, 4, -6),
    (1, 5, -9), (2, 5, -8), (3, 5, -9), (4, 5, -8), (5, 5, -9), (6, 5, -8),
];

fn criterion_2() -> (Outcome, String) {
    let seed = initial_seed(6, 4).unwrap();
    let mut bad = Vec::new();
    for &(i, k, s) in &KR_LABELS_6_4 {
        let want = YMonomial::from_pairs((0..k).map(|t| ((i, s + 2 * t), 1)));
        match seed.grid_label(i, k) {
            Ok(got) if *got == want => {}
            other => bad.push(format!("({i},{k}): {other:?}")),
        }
    }
    let note = format!("{} labels, {} vertices", KR_LABELS_6_4.len(), seed.quiver.len());
    if bad.is_empty() && seed.quiver.len() == 30 {
        (Outcome::Pass, note)
    } else {
        (Outcome::Unexpected(bad.join("; ")), note)
    }
}

// Criterion 3

fn random_quiver(rng: &mut ChaCha8Rng) -> IcedQuiver {
    let nv = rng.gen_range(1..=12usize);
    let nf = rng.gen_range(0..=nv / 3);
    let names: Vec<String> = (0..nv).map(|k| format!("v{k}")).collect();
    let frozen: Vec<String> = names[nv - nf..].to_vec();
    let mut q = IcedQuiver::new(&names, &frozen).unwrap();
    for u in 0..nv {
        for v in u + 1..nv {
            if q.is_frozen_at(u) && q.is_frozen_at(v) {
                continue;
            }
            let b = rng.gen_range(-3..=3);
            if b != 0 {
                q.add_arrows_at(u, v, b);
            }
        }
    }
    q
}

fn mutated(q: &IcedQuiver, ks: &[usize]) -> IcedQuiver {
    let mut q = q.clone();
    for &k in ks {
        q.mutate_at(k).unwrap();
    }
    q
}

fn criterion_3() -> (Outcome, String) {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut inv, mut comm) = (0, 0);
    let mut bad = Vec::new();
    for case in 0..1000 {
        let q = random_quiver(&mut rng);
        let mutable: Vec<usize> = (0..q.len()).filter(|&k| !q.is_frozen_at(k)).collect();
        for &k in &mutable {
            inv += 1;
            if mutated(&q, &[k, k]) != q {
                bad.push(format!("quiver {case}: involution at {k}"));
            }
        }
        for (&k, &l) in mutable.iter().tuple_combinations() {
            if q.b_at(k, l) == 0 {
                comm += 1;
                if mutated(&q, &[k, l]) != mutated(&q, &[l, k]) {
                    bad.push(format!("quiver {case}: commutation at {k},{l}"));
                }
            }
        }
    }
    let note = format!("1000 quivers, {inv} involutions, {comm} commuting pairs");
    if bad.is_empty() {
        (Outcome::Pass, note)
    } else {
        (Outcome::Unexpected(bad[0].clone()), note)
    }
}

// Criterion 4

const NODES: usize = 3;

/// `A[i,s]` for `i` in `1..=3` and two consecutive shifts of the right parity.
fn window() -> Vec<(usize, i64)> {
    (1..=NODES as i64).flat_map(|i| [(i as usize, i % 2), (i as usize, i % 2 + 2)]).collect()
}

/// Every product of window A's with exponents in `0..=4`.
fn a_table(cartan: &CartanData) -> HashMap<YMonomial, Vec<i64>> {
    let w = window();
    let a: Vec<YMonomial> = w.iter().map(|&(i, s)| a_monomial(i, s, cartan).unwrap()).collect();
    let mut table = HashMap::new();
    for c in (0..w.len()).map(|_| 0..=4i64).multi_cartesian_product() {
        let m = a.iter().zip(&c).fold(YMonomial::one(), |m, (x, &e)| m.mul_pow(x, e));
        table.insert(m, c);
    }
    table
}

fn random_monomial(rng: &mut ChaCha8Rng) -> YMonomial {
    YMonomial::from_pairs((0..rng.gen_range(0..5)).map(|_| {
        let i = rng.gen_range(1..=NODES);
        ((i, (i as i64 + 1) % 2 + 2 * rng.gen_range(-1..4)), 1)
    }))
}

fn random_exps(rng: &mut ChaCha8Rng, len: usize) -> Vec<i64> {
    loop {
        let c: Vec<i64> = (0..len).map(|_| rng.gen_range(0..=4)).collect();
        if c.iter().any(|&e| e != 0) {
            return c;
        }
    }
}

fn brute_force(m1: &YMonomial, m2: &YMonomial, table: &HashMap<YMonomial, Vec<i64>>) -> &'static str {
    if m1 == m2 {
        "equal"
    } else if table.contains_key(&m1.div(m2)) {
        "greater"
    } else if table.contains_key(&m2.div(m1)) {
        "less"
    } else {
        "incomparable"
    }
}

fn criterion_4() -> (Outcome, String) {
    let cartan = CartanData::new(NODES);
    let table = a_table(&cartan);
    let w = window();
    let a: Vec<YMonomial> = w.iter().map(|&(i, s)| a_monomial(i, s, &cartan).unwrap()).collect();
    let prod = |c: &[i64]| a.iter().zip(c).fold(YMonomial::one(), |m, (x, &e)| m.mul_pow(x, e));
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    let mut bad = Vec::new();
    for case in 0..1000 {
        let m1 = random_monomial(&mut rng);
        let m2 = match case % 4 {
            // m1 <= m2 or m2 <= m1 by construction
            0 => m1.mul(&prod(&random_exps(&mut rng, w.len()))),
            1 => m1.div(&prod(&random_exps(&mut rng, w.len()))),
            // mixed signs on disjoint supports
            2 => {
                let c = random_exps(&mut rng, w.len());
                let d: Vec<i64> = c
                    .iter()
                    .map(|&e| if e == 0 { -rng.gen_range(1..=4) } else { e })
                    .collect();
                m1.mul(&prod(&d))
            }
            // a single Y is never a finite product of A's
            _ => m1.mul(&YMonomial::var(rng.gen_range(1..=NODES), rng.gen_range(-2..5))),
        };
        let want = brute_force(&m1, &m2, &table);
        let got = compare_dominance(&m1, &m2, &cartan);
        let ok = match (&got, want) {
            (DomOrdering::Equal, "equal") | (DomOrdering::Incomparable, "incomparable") => true,
            (DomOrdering::Greater(cert), "greater") => cert.expand(&cartan) == m1.div(&m2),
            (DomOrdering::Less(cert), "less") => cert.expand(&cartan) == m2.div(&m1),
            _ => false,
        };
        *counts.entry(want).or_default() += 1;
        if !ok {
            bad.push(format!("{m1} vs {m2}: brute force {want}, got {got:?}"));
        }
    }
    let note = format!("1000 instances {counts:?}, table of {} products", table.len());
    if bad.is_empty() {
        (Outcome::Pass, note)
    } else {
        (Outcome::Unexpected(bad[0].clone()), note)
    }
}

// Criteria 5-8

fn criterion_5() -> (Outcome, String) {
    let rep = sweep_arrows(6);
    (verdict(&rep), format!("{} arrow checks over n <= 6", rep.checks))
}

fn criterion_6() -> (Outcome, String) {
    let rep = sweep_oracle(5);
    (verdict(&rep), format!("{} oracle checks over n <= 5", rep.checks))
}

fn kind_is(f: &Failure, prefixes: &[&str]) -> bool {
    prefixes.iter().any(|p| f.what.starts_with(p))
}

fn criterion_7(rep: &VerificationReport) -> (Outcome, String) {
    let ours: Vec<&Failure> = rep.failures.iter().filter(|f| !kind_is(f, &["x_alpha"])).collect();
    let note = format!("{} checks over n <= 6, r in 1..=3", rep.checks);
    match ours.first() {
        None => (Outcome::Pass, note),
        Some(f) => (Outcome::Unexpected(format!("{}: {}", f.what, f.detail)), note),
    }
}

fn criterion_8(rep: &VerificationReport) -> (Outcome, String) {
    let closed = rep.failures.iter().filter(|f| kind_is(f, &["x_alpha"])).count();
    let specs = random_specs(8, 50, 4, 3, 0);
    let hlr = VerificationReport::merge(
        "hlr",
        serde_json::json!({ "count": specs.len() }),
        specs.iter().map(|s| verify_hlr(&s.idx, &s.as_, s.r)).collect(),
    );
    let note = format!("closed forms from the sweep, {} HL_r specs", specs.len());
    if closed > 0 {
        let f = rep.failures.iter().find(|f| kind_is(f, &["x_alpha"])).unwrap();
        (Outcome::Unexpected(format!("{}: {}", f.what, f.detail)), note)
    } else {
        (verdict(&hlr), note)
    }
}

// Criterion 9

struct Example {
    spec: GhlSpec,
    expansion: Vec<(usize, i64)>,
}

fn example_lines() -> Vec<Example> {
    let e = |idx: &[usize], as_: &[i64], r: i64, rs: &[i64], exp: &[(usize, i64)]| Example {
        spec: GhlSpec::new(idx, as_, r, rs),
        expansion: exp.to_vec(),
    };
    vec![
        e(
            &[1, 2, 3],
            &[-7, -4, -7],
            3,
            &[2, 0, 1],
            &[
                (1, -11), (1, -9), (1, -7), (1, -5), (1, -3),
                (2, -4), (2, -2), (2, 0),
                (3, -9), (3, -7), (3, -5), (3, -3),
            ],
        ),
        e(
            &[1, 2, 3, 4],
            &[-3, -6, -3, -6],
            2,
            &[0, -1, 0, 0],
            &[(1, -3), (1, -1), (2, -6), (3, -3), (3, -1), (4, -6), (4, -4)],
        ),
        e(
            &[2, 4, 5, 6],
            &[-6, -2, -5, -2],
            2,
            &[-1, 0, 1, 0],
            &[(2, -6), (4, -2), (4, 0), (5, -7), (5, -5), (5, -3), (6, -2), (6, 0)],
        ),
        e(
            &[2, 4, 6, 5],
            &[-6, -2, -6, -3],
            2,
            &[1, 0, -1, 0],
            &[(2, -8), (2, -6), (2, -4), (4, -2), (4, 0), (6, -6), (5, -3), (5, -1)],
        ),
    ]
}

fn has_zero_factor(spec: &GhlSpec) -> bool {
    spec.rs.iter().any(|&x| x == -spec.r)
}

/// The tail column `i_k + 1` at row `r` comes out larger than its case formula by
/// exactly the lifted `Y[j, xi(j)+1]`.
fn is_tail_class(spec: &GhlSpec, f: &Failure) -> bool {
    if !kind_is(f, &["case 4a", "case 4b"]) {
        return false;
    }
    let r = &f.reproducer;
    let parse = || -> Option<bool> {
        let xi = HeightFunction::new(serde_json::from_value(r["xi"].clone()).ok()?).ok()?;
        let (j, row): (usize, i64) = serde_json::from_value(r["vertex"].clone()).ok()?;
        let want: YMonomial = serde_json::from_value(r["expected"].clone()).ok()?;
        let got: YMonomial = serde_json::from_value(r["record"]["new"].clone()).ok()?;
        let c0 = r["shift"].as_i64()?;
        let extra = lift_r(&YMonomial::var(j, xi.at(j) + 1), spec.r).ok()?.shifted(c0);
        Some(spec.has_tail(xi.n()) && j == spec.ik() + 1 && row == spec.r && got.div(&want) == extra)
    };
    parse().unwrap_or(false)
}

fn classify_ghl(rep: &VerificationReport, counts: &mut BTreeMap<&'static str, usize>) -> Option<String> {
    for f in &rep.failures {
        let spec: GhlSpec = match serde_json::from_value(f.reproducer["params"].clone()) {
            Ok(s) => s,
            Err(_) => return Some(format!("{}: unreadable reproducer", f.what)),
        };
        let class = if has_zero_factor(&spec) && kind_is(f, &["case ", "no case", "final"]) {
            "zero-length factor"
        } else if is_tail_class(&spec, f) {
            "tail column"
        } else {
            return Some(format!("{}: {} for {spec:?}", f.what, f.detail));
        };
        *counts.entry(class).or_default() += 1;
    }
    None
}

fn criterion_9() -> (Outcome, String) {
    let mut counts: BTreeMap<&'static str, usize> = BTreeMap::new();
    let mut unexpected = Vec::new();
    let mut expansions = 0;
    let lines = example_lines();
    for (n, ex) in lines.iter().enumerate() {
        let want = YMonomial::from_pairs(ex.expansion.iter().map(|&v| (v, 1)));
        match ghl_monomial(&ex.spec) {
            Ok(m) if m == want => expansions += 1,
            Ok(m) => unexpected.push(format!("example line {}: got {m}", n + 1)),
            Err(Error::InvalidSpec(msg)) if n == 3 && msg.starts_with("condition (1)-(3)") => {
                *counts.entry("example line 4 indices not increasing").or_default() += 1;
            }
            Err(e) => unexpected.push(format!("example line {}: {e}", n + 1)),
        }
    }
    let mut examples = Vec::new();
    for (n, ex) in lines.iter().enumerate() {
        let rep = verify_ghl(&ex.spec);
        if n == 3 {
            if rep.failure_kinds() != BTreeSet::from(["spec".to_string()]) {
                unexpected.push(format!("example line 4: {:?}", rep.failure_kinds()));
            }
        } else {
            examples.push(rep);
        }
    }
    let examples = VerificationReport::merge("ghl", serde_json::json!({}), examples);
    let random = sweep_ghl(&random_specs(9, 100, 3, 3, 2));
    for rep in [&examples, &random] {
        if let Some(u) = classify_ghl(rep, &mut counts) {
            unexpected.push(u);
        }
    }
    let note = format!(
        "{expansions}/4 expansions, {} checks on 3 example specs and 100 random specs",
        examples.checks + random.checks
    );
    if let Some(u) = unexpected.first() {
        (Outcome::Unexpected(u.clone()), note)
    } else if counts.is_empty() {
        (Outcome::Pass, note)
    } else {
        (Outcome::Known(format!("{counts:?}")), note)
    }
}

// Criterion 10

fn criterion_10() -> (Outcome, String) {
    let configs = appendix_family(3, 3, -2, 3);
    let rep = sweep_appendix(None, &configs);
    let covered: BTreeSet<u8> = rep
        .stats
        .keys()
        .filter_map(|k| k.strip_prefix("case ")?.split(' ').next()?.parse().ok())
        .collect();
    let mirrored = rep.stats.keys().filter(|k| k.contains("mirrored")).count();
    let uncovered = rep.stats.get("uncovered").copied().unwrap_or(0);
    let note = format!(
        "{} configs, {} checks, cases {covered:?}, {mirrored} mirrored keys, {uncovered} vertices without a case",
        configs.len(),
        rep.checks
    );
    if covered != (1..=10).collect() || mirrored == 0 {
        return (Outcome::Unexpected("family does not cover every case".into()), note);
    }
    let mut zero = 0;
    for f in &rep.failures {
        let spec: Option<GhlSpec> = serde_json::from_value(f.reproducer["params"]["config"]["spec"].clone()).ok();
        match spec {
            Some(s) if has_zero_factor(&s) => zero += 1,
            _ => return (Outcome::Unexpected(format!("{}: {}", f.what, f.detail)), note),
        }
    }
    if zero == 0 {
        (Outcome::Pass, note)
    } else {
        (Outcome::Known(format!("{zero} failures, all on specs with a zero-length factor")), note)
    }
}

fn main() -> ExitCode {
    let secs = Duration::from_secs;
    let mut lines = vec![
        run(1, secs(1), criterion_1),
        run(2, secs(1), criterion_2),
        run(3, secs(5), criterion_3),
        run(4, secs(10), criterion_4),
        run(5, secs(30), criterion_5),
        run(6, secs(180), criterion_6),
    ];
    let mut highest = None;
    lines.push(run(7, secs(180), || {
        let rep = sweep_highest(6, &[1, 2, 3]);
        let out = criterion_7(&rep);
        highest = Some(rep);
        out
    }));
    let highest = highest.unwrap();
    lines.push(run(8, secs(180), || criterion_8(&highest)));
    lines.push(run(9, secs(300), criterion_9));
    lines.push(run(10, secs(120), criterion_10));
    println!("(criterion 8 reuses the closed-form checks from the criterion 7 sweep)");

    let pass = lines.iter().filter(|l| matches!(l.outcome, Outcome::Pass) && l.elapsed <= l.bound).count();
    let known: Vec<u32> = lines.iter().filter(|l| matches!(l.outcome, Outcome::Known(_))).map(|l| l.n).collect();
    let broken: Vec<u32> = lines
        .iter()
        .filter(|l| matches!(l.outcome, Outcome::Unexpected(_)) || (matches!(l.outcome, Outcome::Pass) && l.elapsed > l.bound))
        .map(|l| l.n)
        .collect();
    println!("summary: {pass} passed, known failures {known:?}, unexpected {broken:?}");
    if broken.is_empty() && known == [9, 10] {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

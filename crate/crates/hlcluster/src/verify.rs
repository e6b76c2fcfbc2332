//! Batch verification drivers: tracked mutation against closed forms, quiver arrows
//! against their predicted configurations, and oracle identities.

use std::collections::{BTreeMap, BTreeSet};

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::appendix::{predicted_incidence, CaseKey};
use crate::error::{Error, Result};
use crate::gridseeds::{grid_name, t_system_conform, ExchangeRecord, TrackedSeed};
use crate::heights::{build_from_hlr, HeightFunction};
use crate::hl::{
    closed_x_alpha, closed_x_bracket, exchange_predictions, frozen_and_initial_labels, ghl_monomial,
    mutation_relations, recursion_relation, GhlSpec,
};
use crate::oracle::{closure, FactorEval, CLOSURE_CAP};
use crate::quiver::IcedQuiver;
use crate::sequences::{
    build_q_xi, ell_policy, expected_local_quiver, extract_local, lower_name, mutable_name, q_xi_interval,
    seq_s_prime, to_sm_prime, upper_name, GridRun, LocalSeed,
};
use crate::ymon::{compare_dominance, lift_r, spectral_shift, CartanData, DomOrdering, YMonomial};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub what: String,
    pub detail: String,
    /// Enough JSON to replay the failing step: parameters, the seed before it, and the record.
    pub reproducer: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub params: Value,
    pub passed: bool,
    pub checks: usize,
    pub failures: Vec<Failure>,
    /// Counters such as the logged shift or per-case coverage.
    #[serde(default)]
    pub stats: BTreeMap<String, i64>,
}

impl VerificationReport {
    pub fn new(suite: &str, params: Value) -> Self {
        VerificationReport {
            suite: suite.to_string(),
            params,
            passed: true,
            checks: 0,
            failures: Vec::new(),
            stats: BTreeMap::new(),
        }
    }

    pub fn check(&mut self, ok: bool, what: impl Into<String>, detail: impl FnOnce() -> String, repro: impl FnOnce() -> Value) {
        self.checks += 1;
        if !ok {
            self.fail(what, detail(), repro());
        }
    }

    pub fn fail(&mut self, what: impl Into<String>, detail: String, repro: Value) {
        self.passed = false;
        let mut reproducer = json!({ "suite": self.suite, "params": self.params });
        if let (Value::Object(m), Value::Object(extra)) = (&mut reproducer, repro) {
            m.extend(extra);
        }
        self.failures.push(Failure { what: what.into(), detail, reproducer });
    }

    pub fn bump(&mut self, key: impl Into<String>, by: i64) {
        *self.stats.entry(key.into()).or_insert(0) += by;
    }

    /// Folds per-point reports into one, keeping every failure.
    pub fn merge(suite: &str, params: Value, parts: Vec<VerificationReport>) -> Self {
        let mut out = VerificationReport::new(suite, params);
        for p in parts {
            out.checks += p.checks;
            out.passed &= p.passed;
            out.failures.extend(p.failures);
            for (k, v) in p.stats {
                out.bump(k, v);
            }
        }
        out
    }

    /// Distinct failure kinds, the part of `what` before the first colon.
    pub fn failure_kinds(&self) -> BTreeSet<String> {
        self.failures.iter().map(|f| f.what.split(':').next().unwrap_or("").to_string()).collect()
    }
}

fn err_detail(e: &Error) -> String {
    e.to_string()
}

fn seed_json(seed: &TrackedSeed) -> Value {
    serde_json::to_value(seed.to_json_value()).unwrap_or(Value::Null)
}

fn record_json(rec: &ExchangeRecord) -> Value {
    serde_json::to_value(rec).unwrap_or(Value::Null)
}

fn xi_json(xi: &HeightFunction) -> Value {
    json!(xi.values())
}

fn kronecker(a: usize, b: usize) -> i64 {
    (a == b) as i64
}

/// The arrows at `j` in Q_xi after mutating `i..=j-1`, as `neighbor -> b[j][neighbor]`.
pub fn lemma_arrows(xi: &HeightFunction, i: usize, j: usize) -> BTreeMap<String, i64> {
    let n = xi.n();
    let q = build_q_xi(xi);
    let forward = j >= 2 && q.b(&mutable_name(j - 1), &mutable_name(j)).unwrap_or(0) > 0;
    let d = |x: usize| (x >= 1 && x <= n && xi.d(x)) as i64;
    let jb = xi.bullet(j);
    let ib = xi.bullet(i);
    let a_j = 1 - kronecker(i, jb);
    let b_j = ((1 - kronecker(jb, ib)) * d(jb.wrapping_sub(1)) + kronecker(jb, i)).min(1);
    let dj = d(j);
    let dm = d(j - 1);
    let m = (i - 1).max(jb.saturating_sub(1));
    let raw: Vec<(String, usize, i64)> = vec![
        (mutable_name(m), m, -a_j),
        (lower_name(i.max(jb)), i.max(jb), -b_j),
        (upper_name(i.max(jb)), i.max(jb), -b_j),
        (lower_name(j + 1), j + 1, -(1 - dj)),
        (upper_name(j + 1), j + 1, -(1 - dj)),
        (mutable_name(j - 1), j - 1, 1),
        (lower_name(j), j, dm),
        (upper_name(j), j, dm),
        (mutable_name(j + 1), j + 1, 1 - dj),
        (mutable_name(j + 1), j + 1, -dj),
    ];
    let mut out = BTreeMap::new();
    for (name, node, m) in raw {
        if node < 1 || node > n || m == 0 {
            continue;
        }
        *out.entry(name).or_insert(0) += if forward { m } else { -m };
    }
    out.retain(|_, m| *m != 0);
    out
}

pub fn verify_lemma_arrows(xi: &HeightFunction) -> VerificationReport {
    let mut rep = VerificationReport::new("arrows", json!({ "xi": xi.values() }));
    let n = xi.n();
    for i in 1..=n {
        for j in i + 1..=n {
            let got = q_xi_interval(xi, i, j - 1).and_then(|q| q.signed_incidence(&mutable_name(j)).map(|s| (q, s)));
            let want = lemma_arrows(xi, i, j);
            match got {
                Ok((q, got)) => rep.check(
                    got == want,
                    format!("arrows: i={i} j={j}"),
                    || format!("expected {want:?}, got {got:?}"),
                    || json!({ "i": i, "j": j, "quiver": q.to_json_value() }),
                ),
                Err(e) => rep.fail(format!("arrows: i={i} j={j}"), err_detail(&e), json!({ "i": i, "j": j })),
            }
        }
    }
    rep
}

/// Grid run with the local seed at row `r` and the even shift relating it to the closed forms.
pub struct LocalFrame {
    pub run: GridRun,
    pub local: LocalSeed,
    pub shift: Option<i64>,
}

pub fn local_frame(xi: &HeightFunction, r: i64, ell: i64) -> Result<LocalFrame> {
    let run = to_sm_prime(xi, r, ell)?;
    let local = extract_local(&run.seed, xi.n(), r)?;
    let want = frozen_and_initial_labels(xi, 1, r)?.1;
    let shift = local.labels.get(&mutable_name(1)).and_then(|m| spectral_shift(&want, m));
    Ok(LocalFrame { run, local, shift })
}

/// Parity of the shift between the height-function frame and the grid frame. The grid
/// fixes one parity class of spectral parameters, so the shift is odd exactly when
/// `xi(1)` is odd.
pub fn expected_shift_parity(xi: &HeightFunction) -> i64 {
    xi.at(1).rem_euclid(2)
}

fn same_quiver(a: &IcedQuiver, b: &IcedQuiver) -> bool {
    let names = |q: &IcedQuiver| q.names().iter().cloned().collect::<BTreeSet<_>>();
    let frozen = |q: &IcedQuiver| q.frozen_names().into_iter().collect::<BTreeSet<_>>();
    names(a) == names(b) && frozen(a) == frozen(b) && a.arrow_set() == b.arrow_set()
}

fn local_tracked(local: &LocalSeed, n: usize) -> Result<TrackedSeed> {
    let labels = local.quiver.names().iter().map(|v| local.labels[v].clone()).collect();
    TrackedSeed::new(local.quiver.clone(), labels, CartanData::new(n))
}

/// The grid run reproduces Q_xi with its labels, and then every `x[alpha_{i,j}]` with its
/// exchange relations, all up to the logged shift.
pub fn verify_highest_weights(xi: &HeightFunction, r: i64) -> VerificationReport {
    let n = xi.n();
    let ell = ell_policy(n, r, 0);
    let mut rep = VerificationReport::new("highest", json!({ "xi": xi.values(), "r": r, "ell": ell }));
    let frame = match local_frame(xi, r, ell) {
        Ok(f) => f,
        Err(e) => {
            rep.fail("grid", err_detail(&e), json!({ "xi": xi_json(xi) }));
            return rep;
        }
    };
    let seed = &frame.run.seed;
    for rec in &seed.log[..frame.run.s_records] {
        rep.check(
            t_system_conform(rec, &seed.cartan),
            format!("t-system: {}", rec.vertex),
            || format!("{} -> {}", rec.old, rec.new),
            || json!({ "record": record_json(rec) }),
        );
    }
    let expected = match expected_local_quiver(xi, r) {
        Ok(q) => q,
        Err(e) => {
            rep.fail("local quiver", err_detail(&e), json!({}));
            return rep;
        }
    };
    rep.check(
        same_quiver(&frame.local.quiver, &expected),
        "local quiver",
        || format!("expected {:?}, got {:?}", expected.arrow_set(), frame.local.quiver.arrow_set()),
        || json!({ "seed": seed_json(seed) }),
    );
    let Some(c0) = frame.shift else {
        rep.fail("shift", "no even shift relates x_1 to its closed form".into(), json!({ "seed": seed_json(seed) }));
        return rep;
    };
    rep.bump("shift", c0);
    rep.check(
        c0.rem_euclid(2) == expected_shift_parity(xi),
        "shift parity",
        || format!("shift {c0} for xi(1)={}", xi.at(1)),
        || json!({ "seed": seed_json(seed) }),
    );
    for i in 1..=n {
        let Ok((lo, x, up)) = frozen_and_initial_labels(xi, i, r) else {
            continue;
        };
        let mut names = vec![(mutable_name(i), x), (upper_name(i), up)];
        if r > 1 {
            names.push((lower_name(i), lo));
        }
        for (v, m) in names {
            let got = frame.local.labels.get(&v);
            let want = m.shifted(c0);
            rep.check(
                got == Some(&want),
                format!("label: {v}"),
                || format!("expected {want}, got {got:?}"),
                || json!({ "seed": seed_json(seed) }),
            );
        }
    }
    let base = match local_tracked(&frame.local, n) {
        Ok(b) => b,
        Err(e) => {
            rep.fail("local seed", err_detail(&e), json!({}));
            return rep;
        }
    };
    for i in 1..=n {
        let mut s = base.clone();
        let preds = match exchange_predictions(xi, i, n, r) {
            Ok(p) => p,
            Err(e) => {
                rep.fail(format!("predict: i={i}"), err_detail(&e), json!({}));
                continue;
            }
        };
        for j in i..=n {
            let before = seed_json(&s);
            let rec = match s.mutate(&mutable_name(j)) {
                Ok(rec) => rec.clone(),
                Err(e) => {
                    rep.fail(format!("mutate: i={i} j={j}"), err_detail(&e), json!({ "seed": before }));
                    break;
                }
            };
            let want = closed_x_alpha(xi, i, j, r).map(|m| m.shifted(c0));
            rep.check(
                want.as_ref() == Ok(&rec.new),
                format!("x_alpha: i={i} j={j}"),
                || format!("expected {want:?}, got {}", rec.new),
                || json!({ "seed": before.clone(), "record": record_json(&rec) }),
            );
            let inst = &preds[j - i];
            let got = BTreeSet::from([rec.p_in.clone(), rec.p_out.clone()]);
            let pred = BTreeSet::from([inst.side_a.shifted(c0), inst.side_b.shifted(c0)]);
            rep.check(
                got == pred,
                format!("relation: {}", inst.relation.name),
                || format!("predicted {pred:?}, got {got:?}"),
                || json!({ "seed": before, "record": record_json(&rec) }),
            );
        }
        for inst in preds.iter().skip(n - i + 1) {
            let lower = compare_dominance(&inst.side_b, &inst.side_a, &s.cartan);
            rep.check(
                inst.lhs == inst.side_a && matches!(lower, DomOrdering::Less(_)),
                format!("recursion: {}", inst.relation.name),
                || format!("lhs {}, leading {}, correction {}", inst.lhs, inst.side_a, inst.side_b),
                || json!({ "relation": inst.relation }),
            );
        }
    }
    rep
}

/// Mutating `i_1..=i_k` in the local seed of `build_from_hlr` yields the lifted HL monomial.
pub fn verify_hlr(idx: &[usize], as_: &[i64], r: i64) -> VerificationReport {
    let mut rep = VerificationReport::new("hlr", json!({ "idx": idx, "as": as_, "r": r }));
    let xi = match build_from_hlr(idx, as_) {
        Ok(x) => x,
        Err(e) => {
            rep.fail("spec", err_detail(&e), json!({}));
            return rep;
        }
    };
    let n = xi.n();
    let ell = ell_policy(n, r, 0);
    let go = || -> Result<(YMonomial, YMonomial, Value)> {
        let frame = local_frame(&xi, r, ell)?;
        let c0 = frame.shift.ok_or_else(|| Error::NoCase("no shift at x_1".into()))?;
        let mut s = local_tracked(&frame.local, n)?;
        let before = seed_json(&s);
        for j in idx[0]..=idx[idx.len() - 1] {
            s.mutate(&mutable_name(j))?;
        }
        let y = YMonomial::from_pairs(idx.iter().zip(as_).map(|(&i, &a)| ((i, a), 1)));
        let target = lift_r(&y, r)?.shifted(c0);
        let got = s.label(&mutable_name(idx[idx.len() - 1]))?.clone();
        Ok((target, got, before))
    };
    match go() {
        Ok((want, got, seed)) => rep.check(
            want == got,
            "hlr",
            || format!("expected {want}, got {got}"),
            || json!({ "xi": xi_json(&xi), "seed": seed }),
        ),
        Err(e) => rep.fail("hlr", err_detail(&e), json!({ "xi": xi_json(&xi) })),
    }
    rep
}

/// Runs the primed sequence and checks every intermediate label against its case formula
/// and the final label against the generalized HL monomial.
pub fn verify_ghl(spec: &GhlSpec) -> VerificationReport {
    let mut rep = VerificationReport::new("ghl", serde_json::to_value(spec).unwrap_or(Value::Null));
    if let Err(e) = spec.validate() {
        rep.fail("spec", err_detail(&e), json!({}));
        return rep;
    }
    let xi = match build_from_hlr(&spec.idx, &spec.as_) {
        Ok(x) => x,
        Err(e) => {
            rep.fail("spec", err_detail(&e), json!({}));
            return rep;
        }
    };
    let n = xi.n();
    let ell = ell_policy(n, spec.r, spec.max_abs_offset());
    let frame = match local_frame(&xi, spec.r, ell) {
        Ok(f) => f,
        Err(e) => {
            rep.fail("grid", err_detail(&e), json!({ "xi": xi_json(&xi) }));
            return rep;
        }
    };
    let Some(c0) = frame.shift else {
        rep.fail("shift", "no even shift at x_1".into(), json!({ "xi": xi_json(&xi) }));
        return rep;
    };
    rep.bump("shift", c0);
    let seq = match seq_s_prime(&xi, spec) {
        Ok(s) => s,
        Err(e) => {
            rep.fail("sequence", err_detail(&e), json!({}));
            return rep;
        }
    };
    let mut seed = frame.run.seed;
    for (j, row) in seq {
        let s = row - spec.r;
        let before = seed_json(&seed);
        let rec = match seed.mutate_grid(j, row) {
            Ok(r) => r.clone(),
            Err(e) => {
                rep.fail(format!("mutate: {}", grid_name(j, row)), err_detail(&e), json!({ "seed": before }));
                return rep;
            }
        };
        match closed_x_bracket(spec, &xi, j, s) {
            Ok(cm) => {
                let want = cm.monomial.shifted(c0);
                rep.bump(format!("case {}", cm.id), 1);
                rep.check(
                    want == rec.new,
                    format!("case {}: {}", cm.id, grid_name(j, row)),
                    || format!("expected {want}, got {}", rec.new),
                    || {
                        json!({
                            "xi": xi_json(&xi), "vertex": [j, row], "shift": c0, "expected": want,
                            "seed": before, "record": record_json(&rec),
                        })
                    },
                );
            }
            Err(e) => rep.fail(
                format!("no case: {}", grid_name(j, row)),
                err_detail(&e),
                json!({ "xi": xi_json(&xi), "vertex": [j, row], "seed": before, "record": record_json(&rec) }),
            ),
        }
    }
    let (fj, fk) = spec.final_vertex(n);
    let got = seed.grid_label(fj, fk).ok().cloned();
    let want = ghl_monomial(spec).map(|m| m.shifted(c0));
    rep.check(
        got.is_some() && want.as_ref().ok() == got.as_ref(),
        "final",
        || format!("expected {want:?}, got {got:?}"),
        || json!({ "xi": xi_json(&xi), "seed": seed_json(&seed) }),
    );
    rep
}

/// A spec with the height function it runs on.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AppendixConfig {
    pub spec: GhlSpec,
    pub xi: Vec<i64>,
}

impl AppendixConfig {
    pub fn from_spec(spec: GhlSpec) -> Result<Self> {
        let xi = build_from_hlr(&spec.idx, &spec.as_)?;
        Ok(AppendixConfig { spec, xi: xi.values().to_vec() })
    }
}

fn case_stat(key: &CaseKey) -> String {
    let mut s = format!("case {}", key.case.number());
    if key.mirrored {
        s.push_str(" mirrored");
    }
    if key.reversed {
        s.push_str(" reversed");
    }
    s
}

type GridSeq = Vec<(usize, i64)>;

/// Before each step of the primed sequence, compares the arrows at the vertex about to be
/// mutated with its case configuration. With `case` set, only that case is checked.
pub fn verify_appendix(case: Option<u8>, config: &AppendixConfig) -> VerificationReport {
    let mut rep = VerificationReport::new("appendix", json!({ "case": case, "config": config }));
    let go = || -> Result<(HeightFunction, GridRun, GridSeq)> {
        let xi = HeightFunction::new(config.xi.clone())?;
        config.spec.validate()?;
        let ell = ell_policy(xi.n(), config.spec.r, config.spec.max_abs_offset());
        let run = to_sm_prime(&xi, config.spec.r, ell)?;
        let seq = seq_s_prime(&xi, &config.spec)?;
        Ok((xi, run, seq))
    };
    let (xi, mut run, seq) = match go() {
        Ok(v) => v,
        Err(e) => {
            rep.fail("setup", err_detail(&e), json!({}));
            return rep;
        }
    };
    for (j, row) in seq {
        let s = row - config.spec.r;
        let v = grid_name(j, row);
        match predicted_incidence(&xi, &config.spec, run.ell, j, s) {
            Ok((key, want)) => {
                if case.is_none_or(|c| c == key.case.number()) {
                    rep.bump(case_stat(&key), 1);
                    let got = run.seed.quiver.signed_incidence(&v).unwrap_or_default();
                    rep.check(
                        got == want,
                        format!("{}: {v}", case_stat(&key)),
                        || format!("expected {want:?}, got {got:?}"),
                        || json!({ "j": j, "s": s, "seed": seed_json(&run.seed) }),
                    );
                }
            }
            Err(_) => rep.bump("uncovered", 1),
        }
        if let Err(e) = run.seed.mutate_grid(j, row) {
            rep.fail(format!("mutate: {v}"), err_detail(&e), json!({ "seed": seed_json(&run.seed) }));
            return rep;
        }
    }
    rep
}

fn tuples<T: Clone, I: Iterator<Item = T> + Clone>(len: usize, range: I) -> Vec<Vec<T>> {
    if len == 0 {
        return vec![Vec::new()];
    }
    (0..len).map(|_| range.clone()).multi_cartesian_product().collect()
}

/// Valid specs with `k <= kmax`, `i_1 <= 2`, gaps at most 2, `r <= rmax`, and every offset
/// and t-value in `[lo, hi]`.
pub fn appendix_family(kmax: usize, rmax: i64, lo: i64, hi: i64) -> Vec<AppendixConfig> {
    let mut out = Vec::new();
    for k in 1..=kmax {
        let gaps = tuples(k - 1, 1..=2usize);
        for i1 in 1..=2usize {
            for g in &gaps {
                let mut idx = vec![i1];
                for d in g {
                    idx.push(idx[idx.len() - 1] + d);
                }
                for up in [true, false] {
                    let mut as_ = vec![-(i1 as i64) - 4];
                    let mut dir = up;
                    for m in 1..k {
                        let gap = (idx[m] - idx[m - 1] + 2) as i64;
                        as_.push(if dir { as_[m - 1] + gap } else { as_[m - 1] - gap });
                        dir = !dir;
                    }
                    for r in 1..=rmax {
                        let offs = tuples(k, lo.max(-r)..=hi);
                        for rs in offs {
                            let spec = GhlSpec { idx: idx.clone(), as_: as_.clone(), r, rs };
                            if spec.validate().is_err() {
                                continue;
                            }
                            let Ok(t) = spec.t_profile() else { continue };
                            if t.values.iter().any(|&v| v < lo || v > hi) {
                                continue;
                            }
                            if let Ok(c) = AppendixConfig::from_spec(spec) {
                                out.push(c);
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

/// Closure size, Laurent denominators, and every relation as a polynomial identity.
pub fn verify_oracle_suite(xi: &HeightFunction) -> VerificationReport {
    let n = xi.n();
    let mut rep = VerificationReport::new("oracle", json!({ "xi": xi.values() }));
    match closure(xi, CLOSURE_CAP) {
        Ok(cl) => {
            let want = n * (n + 3) / 2;
            rep.bump("seeds", cl.seeds as i64);
            rep.check(
                cl.variables.len() == want,
                "closure count",
                || format!("expected {want}, got {}", cl.variables.len()),
                || json!({}),
            );
            for v in &cl.variables {
                rep.check(
                    v.all_positive(),
                    "positivity",
                    || v.to_string(),
                    || json!({ "variable": v.to_string() }),
                );
            }
        }
        Err(e) => rep.fail("closure", err_detail(&e), json!({})),
    }
    let mut ev = FactorEval::new(xi);
    let mut rels = Vec::new();
    for i in 1..=n {
        if let Ok(rs) = mutation_relations(xi, i, n) {
            rels.extend(rs);
        }
        for j in i..n {
            if xi.d(j) && xi.d(j + 1) {
                if let Ok(rel) = recursion_relation(xi, i, j) {
                    rels.push(rel);
                }
            }
        }
    }
    for rel in rels {
        let res = ev.check(&rel);
        rep.check(
            res == Ok(true),
            format!("identity: {}", rel.name),
            || format!("{res:?}"),
            || json!({ "relation": rel }),
        );
    }
    rep
}

/// Seeded random valid spec with `k <= kmax`, `r <= rmax` and offsets in `[max(-r,-rjmax), rjmax]`.
pub fn random_spec(rng: &mut impl Rng, kmax: usize, rmax: i64, rjmax: i64) -> GhlSpec {
    let k = rng.gen_range(1..=kmax);
    let r = rng.gen_range(1..=rmax);
    let mut idx = vec![rng.gen_range(1..=3usize)];
    for _ in 1..k {
        idx.push(idx[idx.len() - 1] + rng.gen_range(1..=3));
    }
    let mut a0 = [-2i64, -4, -6, -3, -5][rng.gen_range(0..5)];
    if (a0 - idx[0] as i64).rem_euclid(2) == 1 {
        a0 -= 1;
    }
    let mut as_ = vec![a0];
    let mut up = rng.gen_bool(0.5);
    for m in 1..k {
        let g = (idx[m] - idx[m - 1] + 2) as i64;
        as_.push(if up { as_[m - 1] + g } else { as_[m - 1] - g });
        up = !up;
    }
    let mut rs = Vec::new();
    for m in 0..k {
        let pinned = k >= 2
            && ((m == 0 && as_[0] > as_[1])
                || (m > 0 && m < k - 1 && as_[m - 1] < as_[m] && as_[m] > as_[m + 1])
                || (m == k - 1 && as_[k - 2] < as_[k - 1]));
        rs.push(if pinned { 0 } else { rng.gen_range((-r).max(-rjmax)..=rjmax) });
    }
    GhlSpec { idx, as_, r, rs }
}

pub fn random_specs(seed: u64, count: usize, kmax: usize, rmax: i64, rjmax: i64) -> Vec<GhlSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_spec(&mut rng, kmax, rmax, rjmax)).collect()
}

/// All height functions on `1..=n_max` nodes.
pub fn all_heights(n_max: usize) -> Vec<HeightFunction> {
    (1..=n_max).flat_map(HeightFunction::enumerate).collect()
}

pub fn sweep_arrows(n_max: usize) -> VerificationReport {
    let parts = all_heights(n_max).par_iter().map(verify_lemma_arrows).collect();
    VerificationReport::merge("arrows", json!({ "n_max": n_max }), parts)
}

pub fn sweep_highest(n_max: usize, rs: &[i64]) -> VerificationReport {
    let points: Vec<(HeightFunction, i64)> =
        all_heights(n_max).into_iter().flat_map(|x| rs.iter().map(move |&r| (x.clone(), r))).collect();
    let parts = points.par_iter().map(|(x, r)| verify_highest_weights(x, *r)).collect();
    VerificationReport::merge("highest", json!({ "n_max": n_max, "r": rs }), parts)
}

pub fn sweep_oracle(n_max: usize) -> VerificationReport {
    let parts = all_heights(n_max).par_iter().map(verify_oracle_suite).collect();
    VerificationReport::merge("oracle", json!({ "n_max": n_max }), parts)
}

pub fn sweep_ghl(specs: &[GhlSpec]) -> VerificationReport {
    let parts = specs.par_iter().map(verify_ghl).collect();
    VerificationReport::merge("ghl", json!({ "count": specs.len() }), parts)
}

pub fn sweep_appendix(case: Option<u8>, configs: &[AppendixConfig]) -> VerificationReport {
    let parts = configs.par_iter().map(|c| verify_appendix(case, c)).collect();
    VerificationReport::merge("appendix", json!({ "case": case, "count": configs.len() }), parts)
}

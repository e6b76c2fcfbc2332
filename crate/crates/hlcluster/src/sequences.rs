//! The height-function quiver, the grid mutation sequences and local extraction.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::gridseeds::{grid_name, initial_seed, TrackedSeed};
use crate::heights::{t_profile, HeightFunction};
use crate::hl::GhlSpec;
use crate::quiver::IcedQuiver;
use crate::ymon::YMonomial;

pub const PRIME: char = '\u{2032}';
pub const DPRIME: char = '\u{2033}';

pub fn mutable_name(i: usize) -> String {
    i.to_string()
}

pub fn lower_name(i: usize) -> String {
    format!("{i}{PRIME}")
}

pub fn upper_name(i: usize) -> String {
    format!("{i}{DPRIME}")
}

/// Vertices `1'..n'`, `1..n`, `1''..n''`; the primed rows are frozen.
pub fn build_q_xi(xi: &HeightFunction) -> IcedQuiver {
    let n = xi.n();
    let mut names = Vec::new();
    let mut frozen = Vec::new();
    for i in 1..=n {
        names.push(lower_name(i));
        frozen.push(lower_name(i));
    }
    names.extend((1..=n).map(mutable_name));
    for i in 1..=n {
        names.push(upper_name(i));
        frozen.push(upper_name(i));
    }
    let mut q = IcedQuiver::new(&names, &frozen).expect("distinct names");
    let mut set = |u: String, v: String| {
        let (a, b) = (q.index_of(&u).unwrap(), q.index_of(&v).unwrap());
        if q.b_at(a, b) == 0 {
            q.add_arrows_at(a, b, 1);
        }
        debug_assert_eq!(q.b_at(a, b), 1, "conflicting arrows {u} {v}");
    };
    for j in 1..n {
        let mut arrs = vec![(lower_name(j), mutable_name(j)), (upper_name(j), mutable_name(j))];
        if j > 1 {
            arrs.push((mutable_name(j), mutable_name(j - 1)));
        }
        if xi.d(j) {
            arrs.push((mutable_name(j), mutable_name(j + 1)));
        } else {
            arrs.push((mutable_name(j), lower_name(j + 1)));
            arrs.push((mutable_name(j), upper_name(j + 1)));
            arrs.push((mutable_name(j + 1), mutable_name(j)));
        }
        let up = xi.rises(j);
        for (u, v) in arrs {
            if up {
                set(u, v)
            } else {
                set(v, u)
            }
        }
    }
    let mut arrs = vec![(lower_name(n), mutable_name(n)), (upper_name(n), mutable_name(n))];
    if n > 1 {
        arrs.push((mutable_name(n), mutable_name(n - 1)));
    }
    let falls = xi.at(n - 1) == xi.at(n) + 1;
    for (u, v) in arrs {
        if falls {
            set(u, v)
        } else {
            set(v, u)
        }
    }
    q
}

/// Q_xi with the mutable vertices `i..=j` mutated in order; empty when `j < i`.
pub fn q_xi_interval(xi: &HeightFunction, i: usize, j: usize) -> Result<IcedQuiver> {
    let mut q = build_q_xi(xi);
    for v in i..=j {
        q.mutate_in_place(&mutable_name(v))?;
    }
    Ok(q)
}

/// The default depth `r + n + max|r_j| + 2`, overridable through `HLCLUSTER_ELL_POLICY`:
/// a plain integer fixes the depth, `+K` replaces the final summand 2 by K.
pub fn ell_policy(n: usize, r: i64, max_abs_rj: i64) -> i64 {
    let base = r + n as i64 + max_abs_rj;
    match std::env::var("HLCLUSTER_ELL_POLICY") {
        Ok(v) => {
            let v = v.trim();
            if let Some(k) = v.strip_prefix('+').and_then(|k| k.parse::<i64>().ok()) {
                base + k
            } else if let Ok(fixed) = v.parse::<i64>() {
                fixed
            } else {
                base + 2
            }
        }
        Err(_) => base + 2,
    }
}

fn row(k: i64, family: usize, n: usize, ell: i64) -> Vec<(usize, i64)> {
    if k < 1 || k > ell {
        return Vec::new();
    }
    (family..=n).step_by(2).map(|i| (i, k)).collect()
}

/// Number of row groups: the least `p >= ell` with the parity fixed by the slope at `n` and `r`.
pub fn pick_p(xi: &HeightFunction, r: i64, ell: i64) -> i64 {
    let n = xi.n() as i64;
    let falls = xi.at(xi.n() - 1) > xi.at(xi.n());
    let want = if (falls && r % 2 == 1) || (!falls && r % 2 == 0) { n } else { n - 1 };
    let mut p = ell;
    while (p - want).rem_euclid(2) != 0 {
        p += 1;
    }
    p
}

/// Row groups `m = 1..=p`, each `s_{m,2}, s_{m-1,1}, s_{m-2,2}, ...`, clipped to rows `1..=ell`.
pub fn seq_s(n: usize, ell: i64, p: i64) -> Vec<(usize, i64)> {
    let mut out = Vec::new();
    for m in 1..=p {
        for t in 0..m {
            let family = if t % 2 == 0 { 2 } else { 1 };
            out.extend(row(m - t, family, n, ell));
        }
    }
    out
}

/// Nodes `j` with `d_j = 0`, in increasing order.
pub fn defect_nodes(xi: &HeightFunction) -> Vec<usize> {
    (1..=xi.n()).filter(|&j| !xi.d(j)).collect()
}

/// The sequence for the `t`-th (1-based) node with `d = 0`.
pub fn seq_s_t(xi: &HeightFunction, r: i64, t: usize, ell: i64) -> Result<Vec<(usize, i64)>> {
    let js = defect_nodes(xi);
    let jt = *js
        .get(t.wrapping_sub(1))
        .ok_or_else(|| Error::InvalidSpec(format!("t={t} outside 1..={}", js.len())))?;
    let (fa, fb) = if jt % 2 == 0 { (2, 1) } else { (1, 2) };
    let n = xi.n();
    let mut out = Vec::new();
    for k in (1..=ell).filter(|k| (k - (r - 1)).rem_euclid(2) == 0) {
        out.extend(row(k, fa, n, ell).into_iter().filter(|v| v.0 <= jt));
    }
    for k in (1..=ell).filter(|k| (k - r).rem_euclid(2) == 0) {
        out.extend(row(k, fb, n, ell).into_iter().filter(|v| v.0 <= jt));
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct GridRun {
    pub seed: TrackedSeed,
    pub xi: HeightFunction,
    pub r: i64,
    pub ell: i64,
    /// Number of records produced by the first sequence alone.
    pub s_records: usize,
    pub normalized: usize,
}

/// Fresh grid seed after the first sequence and the defect sequences.
pub fn to_sm(xi: &HeightFunction, r: i64, ell: i64) -> Result<GridRun> {
    if r < 1 || ell < r + 1 {
        return Err(Error::InvalidSpec(format!("need 1 <= r < ell, got r={r}, ell={ell}")));
    }
    let n = xi.n();
    let mut seed = initial_seed(n, ell)?;
    seed.run_grid(&seq_s(n, ell, pick_p(xi, r, ell)))?;
    let s_records = seed.log.len();
    let js = defect_nodes(xi);
    for t in (1..=js.len()).rev() {
        seed.run_grid(&seq_s_t(xi, r, t, ell)?)?;
    }
    Ok(GridRun { seed, xi: xi.clone(), r, ell, s_records, normalized: 0 })
}

fn matches_pattern(q: &IcedQuiver, u: usize, w: i64) -> bool {
    let v = grid_name(u, w);
    let Ok(inc) = q.signed_incidence(&v) else {
        return false;
    };
    let mut want = BTreeMap::new();
    let cands = [
        (u, w - 1, -1),
        (u, w + 1, -1),
        (u.wrapping_sub(1), w, 1),
        (u + 1, w, 1),
    ];
    for (a, c, b) in cands {
        let name = grid_name(a, c);
        if a >= 1 && q.contains(&name) {
            want.insert(name, b);
        }
    }
    inc == want
}

/// Repeatedly mutates the first row-major vertex in rows `[1,r-2]` and `[r+2,ell]`
/// whose neighborhood is the two-in, two-out cross pattern.
pub fn normalize(run: &mut GridRun, limit: usize) -> Result<usize> {
    let n = run.xi.n();
    let rows: Vec<i64> = (1..=run.r - 2).chain(run.r + 2..=run.ell).collect();
    let mut count = 0;
    loop {
        let hit = rows
            .iter()
            .flat_map(|&w| (1..=n).map(move |u| (u, w)))
            .find(|&(u, w)| matches_pattern(&run.seed.quiver, u, w));
        let Some((u, w)) = hit else {
            run.normalized += count;
            return Ok(count);
        };
        if count >= limit {
            return Err(Error::NoTermination(limit));
        }
        run.seed.mutate_grid(u, w)?;
        count += 1;
    }
}

pub const NORMALIZE_LIMIT: usize = 100_000;

pub fn to_sm_prime(xi: &HeightFunction, r: i64, ell: i64) -> Result<GridRun> {
    let mut run = to_sm(xi, r, ell)?;
    normalize(&mut run, NORMALIZE_LIMIT)?;
    Ok(run)
}

#[derive(Clone, Debug)]
pub struct LocalSeed {
    pub quiver: IcedQuiver,
    pub labels: BTreeMap<String, YMonomial>,
}

/// Rows `r-1, r, r+1` renamed to `i'`, `i`, `i''`; row `r-1` is absent when `r = 1`.
pub fn extract_local(seed: &TrackedSeed, n: usize, r: i64) -> Result<LocalSeed> {
    let mut keep = Vec::new();
    let mut freeze = Vec::new();
    let mut rename = BTreeMap::new();
    for (k, f) in [(r - 1, lower_name as fn(usize) -> String), (r, mutable_name), (r + 1, upper_name)] {
        if k < 1 {
            continue;
        }
        for i in 1..=n {
            let g = grid_name(i, k);
            if !seed.quiver.contains(&g) {
                return Err(Error::NoSuchVertex(g));
            }
            if k != r {
                freeze.push(g.clone());
            }
            rename.insert(g.clone(), f(i));
            keep.push(g);
        }
    }
    let sub = seed.quiver.freeze_restrict(&freeze, &keep)?;
    let names: Vec<String> = sub.names().iter().map(|g| rename[g].clone()).collect();
    let frozen: Vec<String> = sub.frozen_names().iter().map(|g| rename[g].clone()).collect();
    let mut q = IcedQuiver::new(&names, &frozen)?;
    for (u, v, m) in sub.arrows() {
        q.add_arrows(&rename[&u], &rename[&v], m)?;
    }
    let mut labels = BTreeMap::new();
    for g in &keep {
        labels.insert(rename[g].clone(), seed.label(g)?.clone());
    }
    Ok(LocalSeed { quiver: q, labels })
}

/// Q_xi with the lower frozen row removed when `r = 1`.
pub fn expected_local_quiver(xi: &HeightFunction, r: i64) -> Result<IcedQuiver> {
    let q = build_q_xi(xi);
    if r > 1 {
        return Ok(q);
    }
    let n = xi.n();
    let keep: Vec<String> = (1..=n).map(mutable_name).chain((1..=n).map(upper_name)).collect();
    let frozen: Vec<String> = (1..=n).map(upper_name).collect();
    let mut out = IcedQuiver::new(&keep, &frozen)?;
    for (u, v, m) in q.arrows() {
        if out.contains(&u) && out.contains(&v) {
            out.add_arrows(&u, &v, m)?;
        }
    }
    Ok(out)
}

/// Column runs for `i_1..=i_k` followed by the optional tail column; rows below 1 are dropped.
pub fn seq_s_prime(xi: &HeightFunction, spec: &GhlSpec) -> Result<Vec<(usize, i64)>> {
    let t = t_profile(&spec.idx, &spec.rs)?;
    let r = spec.r;
    if spec.ik() > xi.n() {
        return Err(Error::InvalidSpec(format!("i_k={} exceeds n={}", spec.ik(), xi.n())));
    }
    let mut out = Vec::new();
    for u in spec.idx[0]..=spec.ik() {
        let tu = t.at(u);
        let rows: Vec<i64> = if xi.rises(u) {
            if tu >= 0 {
                (r..=r + tu).rev().collect()
            } else {
                (r + tu..=r).collect()
            }
        } else if tu >= 0 {
            (r..=r + tu).collect()
        } else {
            (r + tu..=r).rev().collect()
        };
        out.extend(rows.into_iter().map(|w| (u, w)));
    }
    if spec.has_tail(xi.n()) {
        let rk = spec.rs[spec.k() - 1];
        let c = spec.ik() + 1;
        if rk > 0 {
            out.extend((r..=r + rk).map(|w| (c, w)));
        } else {
            out.extend((r + rk..=r).rev().map(|w| (c, w)));
        }
    }
    out.retain(|v| v.1 >= 1);
    Ok(out)
}

/// Grid run after normalization and the strict prefix of the primed sequence before `(j, r+s)`.
pub fn q_prefix(base: &GridRun, spec: &GhlSpec, j: usize, s: i64) -> Result<GridRun> {
    let seq = seq_s_prime(&base.xi, spec)?;
    let target = (j, spec.r + s);
    let pos = seq
        .iter()
        .position(|&v| v == target)
        .ok_or_else(|| Error::NoSuchVertex(grid_name(target.0, target.1)))?;
    let mut run = base.clone();
    run.seed.run_grid(&seq[..pos])?;
    Ok(run)
}

/// Every vertex in the sequence appears once.
pub fn all_distinct(seq: &[(usize, i64)]) -> bool {
    seq.iter().collect::<BTreeSet<_>>().len() == seq.len()
}

//! Grid seeds labeled by dominant monomials, mutated with the maximum rule.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quiver::{IcedQuiver, QuiverJson};
use crate::ymon::{compare_dominance, kr_monomial, kr_string, CartanData, DomOrdering, YMonomial};

pub fn grid_name(i: usize, k: i64) -> String {
    format!("({i},{k})")
}

pub fn parse_grid_name(s: &str) -> Option<(usize, i64)> {
    let inner = s.strip_prefix('(')?.strip_suffix(')')?;
    let (a, b) = inner.split_once(',')?;
    Some((a.trim().parse().ok()?, b.trim().parse().ok()?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    In,
    Out,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExchangeRecord {
    pub vertex: String,
    pub old: YMonomial,
    pub p_in: YMonomial,
    pub p_out: YMonomial,
    pub chosen: Side,
    pub new: YMonomial,
}

#[derive(Clone, Debug)]
pub struct TrackedSeed {
    pub quiver: IcedQuiver,
    labels: Vec<YMonomial>,
    pub cartan: CartanData,
    pub log: Vec<ExchangeRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedJson {
    pub quiver: QuiverJson,
    pub labels: BTreeMap<String, YMonomial>,
    pub log: Vec<ExchangeRecord>,
}

impl TrackedSeed {
    pub fn new(quiver: IcedQuiver, labels: Vec<YMonomial>, cartan: CartanData) -> Result<Self> {
        if labels.len() != quiver.len() {
            return Err(Error::Parse("label count differs from vertex count".into()));
        }
        if let Some(m) = labels.iter().find(|m| !m.is_dominant() && !m.is_one()) {
            return Err(Error::NotDominant(m.to_string()));
        }
        Ok(TrackedSeed { quiver, labels, cartan, log: Vec::new() })
    }

    pub fn label(&self, v: &str) -> Result<&YMonomial> {
        Ok(&self.labels[self.quiver.index_of(v)?])
    }

    pub fn label_at(&self, k: usize) -> &YMonomial {
        &self.labels[k]
    }

    pub fn grid_label(&self, i: usize, k: i64) -> Result<&YMonomial> {
        self.label(&grid_name(i, k))
    }

    pub fn labels(&self) -> BTreeMap<String, YMonomial> {
        self.quiver.names().iter().cloned().zip(self.labels.iter().cloned()).collect()
    }

    pub fn mutate_at(&mut self, k: usize) -> Result<&ExchangeRecord> {
        let name = self.quiver.name(k).to_string();
        if self.quiver.is_frozen_at(k) {
            return Err(Error::FrozenVertex(name));
        }
        let mut p_in = YMonomial::one();
        let mut p_out = YMonomial::one();
        for (u, b) in self.quiver.incident_at(k) {
            if b < 0 {
                p_in = p_in.mul_pow(&self.labels[u], -b);
            } else {
                p_out = p_out.mul_pow(&self.labels[u], b);
            }
        }
        let chosen = match compare_dominance(&p_in, &p_out, &self.cartan) {
            DomOrdering::Equal | DomOrdering::Greater(_) => Side::In,
            DomOrdering::Less(_) => Side::Out,
            DomOrdering::Incomparable => {
                return Err(Error::Incomparable {
                    vertex: name,
                    p_in: p_in.to_string(),
                    p_out: p_out.to_string(),
                })
            }
        };
        let old = self.labels[k].clone();
        let new = match chosen {
            Side::In => &p_in,
            Side::Out => &p_out,
        }
        .div(&old);
        if !new.is_dominant() {
            return Err(Error::NotDominant(format!("{new} at {name}")));
        }
        self.quiver.mutate_at(k)?;
        self.labels[k] = new.clone();
        self.log.push(ExchangeRecord { vertex: name, old, p_in, p_out, chosen, new });
        Ok(self.log.last().unwrap())
    }

    pub fn mutate(&mut self, v: &str) -> Result<&ExchangeRecord> {
        let k = self.quiver.index_of(v)?;
        self.mutate_at(k)
    }

    pub fn mutate_grid(&mut self, i: usize, k: i64) -> Result<&ExchangeRecord> {
        self.mutate(&grid_name(i, k))
    }

    pub fn run<S: AsRef<str>>(&mut self, seq: &[S]) -> Result<()> {
        for v in seq {
            self.mutate(v.as_ref())?;
        }
        Ok(())
    }

    pub fn run_grid(&mut self, seq: &[(usize, i64)]) -> Result<()> {
        for &(i, k) in seq {
            self.mutate_grid(i, k)?;
        }
        Ok(())
    }

    /// Reverts the last mutation and drops its record.
    pub fn undo(&mut self) -> Result<Option<ExchangeRecord>> {
        let Some(rec) = self.log.pop() else {
            return Ok(None);
        };
        let k = self.quiver.index_of(&rec.vertex)?;
        self.quiver.mutate_at(k)?;
        self.labels[k] = rec.old.clone();
        Ok(Some(rec))
    }

    pub fn to_json_value(&self) -> SeedJson {
        SeedJson { quiver: self.quiver.to_json_value(), labels: self.labels(), log: self.log.clone() }
    }

    pub fn from_json_value(j: &SeedJson, cartan: CartanData) -> Result<Self> {
        let quiver = IcedQuiver::from_json_value(&j.quiver)?;
        let labels = quiver
            .names()
            .iter()
            .map(|v| j.labels.get(v).cloned().ok_or_else(|| Error::NoSuchVertex(v.clone())))
            .collect::<Result<Vec<_>>>()?;
        let mut s = TrackedSeed::new(quiver, labels, cartan)?;
        s.log = j.log.clone();
        Ok(s)
    }
}

/// Grid quiver on `[1,n] x [1,ell+1]` with KR labels; the last row is frozen.
pub fn initial_seed(n: usize, ell: i64) -> Result<TrackedSeed> {
    if n < 1 || ell < 1 {
        return Err(Error::InvalidSpec(format!("need n, ell >= 1, got {n}, {ell}")));
    }
    let mut names = Vec::new();
    let mut frozen = Vec::new();
    for k in 1..=ell + 1 {
        for i in 1..=n {
            names.push(grid_name(i, k));
            if k == ell + 1 {
                frozen.push(grid_name(i, k));
            }
        }
    }
    let mut q = IcedQuiver::new(&names, &frozen)?;
    let idx = |i: usize, k: i64| (k as usize - 1) * n + i - 1;
    let inside = |i: usize, k: i64| i >= 1 && i <= n && k >= 1 && k <= ell + 1;
    let mut labels = Vec::new();
    for k in 1..=ell + 1 {
        for i in 1..=n {
            let mut targets = Vec::new();
            if i % 2 == 1 {
                targets.push((i.wrapping_sub(1), k + 1));
                targets.push((i + 1, k + 1));
            } else if k <= ell {
                targets.push((i - 1, k));
                targets.push((i + 1, k));
            }
            targets.push((i, k - 1));
            for (a, c) in targets {
                if inside(a, c) {
                    q.add_arrows_at(idx(i, k), idx(a, c), 1);
                }
            }
            let base = if i % 2 == 1 { -1 } else { 0 };
            labels.push(kr_monomial(i, base - 2 * k + 2, k)?);
        }
    }
    TrackedSeed::new(q, labels, CartanData::new(n))
}

fn kr_shape(m: &YMonomial) -> Option<(usize, i64, i64)> {
    let mut it = m.iter();
    let (v0, _) = it.next()?;
    let len = m.len() as i64;
    (kr_string(v0.node, v0.shift, len).ok()? == *m).then_some((v0.node, v0.shift, len))
}

fn gcd(a: &YMonomial, b: &YMonomial) -> YMonomial {
    YMonomial::from_pairs(a.iter().filter_map(|(v, e)| {
        let f = b.exponent(v.node, v.shift);
        (e > 0 && f > 0).then(|| ((v.node, v.shift), e.min(f)))
    }))
}

/// Whether a record is a T-system relation, up to a common cofactor of the two exchange products.
pub fn t_system_conform(rec: &ExchangeRecord, cartan: &CartanData) -> bool {
    let (Some(a), Some(b)) = (kr_shape(&rec.old), kr_shape(&rec.new)) else {
        return false;
    };
    if a.0 != b.0 || a.2 != b.2 || (a.1 - b.1).abs() != 2 {
        return false;
    }
    let (i, s, k) = (a.0, a.1.min(b.1), a.2);
    let kr_side = kr_string(i, s, k + 1).unwrap().mul(&kr_string(i, s + 2, k - 1).unwrap());
    let mut nbr = YMonomial::one();
    for j in cartan.neighbors(i) {
        nbr = nbr.mul(&kr_string(j, s + 1, k).unwrap());
    }
    let g = gcd(&rec.p_in, &rec.p_out);
    let (pi, po) = (rec.p_in.div(&g), rec.p_out.div(&g));
    let h = gcd(&kr_side, &nbr);
    let (ks, ns) = (kr_side.div(&h), nbr.div(&h));
    (pi == ks && po == ns) || (pi == ns && po == ks)
}

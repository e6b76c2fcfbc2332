//! Iced quivers stored as skew-symmetric exchange matrices.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct IcedQuiver {
    names: Vec<String>,
    index: HashMap<String, usize>,
    frozen: Vec<bool>,
    /// row-major `b[u * len + v]`
    b: Vec<i64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Direction {
    In,
    Out,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Incidence {
    pub neighbor: String,
    pub mult: i64,
    pub direction: Direction,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuiverJson {
    pub vertices: Vec<String>,
    pub frozen: Vec<String>,
    pub arrows: Vec<(String, String, i64)>,
}

impl IcedQuiver {
    pub fn new<S: AsRef<str>>(vertices: &[S], frozen: &[S]) -> Result<Self> {
        let names: Vec<String> = vertices.iter().map(|s| s.as_ref().to_string()).collect();
        let mut index = HashMap::new();
        for (k, v) in names.iter().enumerate() {
            if index.insert(v.clone(), k).is_some() {
                return Err(Error::Parse(format!("duplicate vertex {v}")));
            }
        }
        let mut fr = vec![false; names.len()];
        for f in frozen {
            let k = *index.get(f.as_ref()).ok_or_else(|| Error::NoSuchVertex(f.as_ref().into()))?;
            fr[k] = true;
        }
        let len = names.len();
        Ok(IcedQuiver { names, index, frozen: fr, b: vec![0; len * len] })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, k: usize) -> &str {
        &self.names[k]
    }

    pub fn index_of(&self, v: &str) -> Result<usize> {
        self.index.get(v).copied().ok_or_else(|| Error::NoSuchVertex(v.into()))
    }

    pub fn contains(&self, v: &str) -> bool {
        self.index.contains_key(v)
    }

    pub fn is_frozen_at(&self, k: usize) -> bool {
        self.frozen[k]
    }

    pub fn is_frozen(&self, v: &str) -> Result<bool> {
        Ok(self.frozen[self.index_of(v)?])
    }

    pub fn frozen_names(&self) -> Vec<String> {
        (0..self.len()).filter(|&k| self.frozen[k]).map(|k| self.names[k].clone()).collect()
    }

    pub fn b_at(&self, u: usize, v: usize) -> i64 {
        self.b[u * self.len() + v]
    }

    pub fn b(&self, u: &str, v: &str) -> Result<i64> {
        Ok(self.b_at(self.index_of(u)?, self.index_of(v)?))
    }

    fn set(&mut self, u: usize, v: usize, x: i64) {
        let n = self.len();
        self.b[u * n + v] = x;
        self.b[v * n + u] = -x;
    }

    /// Adds `m` arrows `u -> v`; arrows between frozen vertices are dropped.
    pub fn add_arrows_at(&mut self, u: usize, v: usize, m: i64) {
        if u == v || (self.frozen[u] && self.frozen[v]) {
            return;
        }
        let x = self.b_at(u, v) + m;
        self.set(u, v, x);
    }

    pub fn add_arrows(&mut self, u: &str, v: &str, m: i64) -> Result<()> {
        let (u, v) = (self.index_of(u)?, self.index_of(v)?);
        self.add_arrows_at(u, v, m);
        Ok(())
    }

    pub fn mutate_at(&mut self, k: usize) -> Result<()> {
        if self.frozen[k] {
            return Err(Error::FrozenVertex(self.names[k].clone()));
        }
        let n = self.len();
        let col: Vec<i64> = (0..n).map(|u| self.b_at(u, k)).collect();
        for (u, &buk) in col.iter().enumerate() {
            if u == k || buk == 0 {
                continue;
            }
            for v in 0..n {
                let bkv = self.b_at(k, v);
                if v == k || v == u || bkv == 0 || buk * bkv <= 0 {
                    continue;
                }
                self.b[u * n + v] += buk.signum() * buk * bkv;
            }
        }
        for u in 0..n {
            if u != k {
                let x = self.b_at(u, k);
                self.set(u, k, -x);
            }
        }
        for u in 0..n {
            for v in 0..n {
                if self.frozen[u] && self.frozen[v] {
                    self.b[u * n + v] = 0;
                }
            }
        }
        Ok(())
    }

    pub fn mutate_in_place(&mut self, v: &str) -> Result<()> {
        let k = self.index_of(v)?;
        self.mutate_at(k)
    }

    pub fn mutate(&self, v: &str) -> Result<IcedQuiver> {
        let mut q = self.clone();
        q.mutate_in_place(v)?;
        Ok(q)
    }

    pub fn incident_at(&self, k: usize) -> Vec<(usize, i64)> {
        (0..self.len()).map(|u| (u, self.b_at(k, u))).filter(|&(_, b)| b != 0).collect()
    }

    pub fn arrows_at(&self, v: &str) -> Result<Vec<Incidence>> {
        let k = self.index_of(v)?;
        Ok(self
            .incident_at(k)
            .into_iter()
            .map(|(u, x)| Incidence {
                neighbor: self.names[u].clone(),
                mult: x.abs(),
                direction: if x > 0 { Direction::Out } else { Direction::In },
            })
            .collect())
    }

    /// Signed incidence map `neighbor -> b[v][neighbor]`.
    pub fn signed_incidence(&self, v: &str) -> Result<BTreeMap<String, i64>> {
        let k = self.index_of(v)?;
        Ok(self.incident_at(k).into_iter().map(|(u, x)| (self.names[u].clone(), x)).collect())
    }

    /// Positive entries `(u, v, b_uv)` in vertex order.
    pub fn arrows(&self) -> Vec<(String, String, i64)> {
        let n = self.len();
        let mut out = Vec::new();
        for u in 0..n {
            for v in 0..n {
                let x = self.b_at(u, v);
                if x > 0 {
                    out.push((self.names[u].clone(), self.names[v].clone(), x));
                }
            }
        }
        out
    }

    pub fn arrow_set(&self) -> BTreeSet<(String, String, i64)> {
        self.arrows().into_iter().collect()
    }

    /// Full subquiver on `keep` with `freeze` frozen. No kept mutable vertex
    /// may have an arrow to a dropped vertex.
    pub fn freeze_restrict<S: AsRef<str>>(&self, freeze: &[S], keep: &[S]) -> Result<IcedQuiver> {
        let keep_idx = keep.iter().map(|v| self.index_of(v.as_ref())).collect::<Result<Vec<_>>>()?;
        let mut frozen: BTreeSet<usize> =
            freeze.iter().map(|v| self.index_of(v.as_ref())).collect::<Result<_>>()?;
        for &k in &keep_idx {
            if self.frozen[k] {
                frozen.insert(k);
            }
        }
        let kept: BTreeSet<usize> = keep_idx.iter().copied().collect();
        for &k in &keep_idx {
            if frozen.contains(&k) {
                continue;
            }
            for (u, _) in self.incident_at(k) {
                if !kept.contains(&u) {
                    return Err(Error::ClosureViolation {
                        from: self.names[k].clone(),
                        to: self.names[u].clone(),
                    });
                }
            }
        }
        let names: Vec<&str> = keep_idx.iter().map(|&k| self.names[k].as_str()).collect();
        let fr: Vec<&str> =
            keep_idx.iter().filter(|k| frozen.contains(k)).map(|&k| self.names[k].as_str()).collect();
        let mut q = IcedQuiver::new(&names, &fr)?;
        for (a, &u) in keep_idx.iter().enumerate() {
            for (c, &v) in keep_idx.iter().enumerate() {
                let x = self.b_at(u, v);
                if x > 0 {
                    q.add_arrows_at(a, c, x);
                }
            }
        }
        Ok(q)
    }

    pub fn to_json_value(&self) -> QuiverJson {
        QuiverJson { vertices: self.names.clone(), frozen: self.frozen_names(), arrows: self.arrows() }
    }

    pub fn from_json_value(j: &QuiverJson) -> Result<Self> {
        let mut q = IcedQuiver::new(&j.vertices, &j.frozen)?;
        for (u, v, m) in &j.arrows {
            let (a, c) = (q.index_of(u)?, q.index_of(v)?);
            if *m <= 0 || q.b_at(a, c) != 0 {
                return Err(Error::Parse(format!("bad arrow {u} -> {v} ({m})")));
            }
            if q.frozen[a] && q.frozen[c] {
                return Err(Error::Parse(format!("arrow between frozen {u} and {v}")));
            }
            q.add_arrows_at(a, c, *m);
        }
        Ok(q)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_value()).expect("quiver serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let j: QuiverJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json_value(&j)
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph Q {\n");
        for (k, v) in self.names.iter().enumerate() {
            let shape = if self.frozen[k] { "box" } else { "ellipse" };
            let _ = writeln!(s, "  \"{v}\" [shape={shape}];");
        }
        for (u, v, m) in self.arrows() {
            if m == 1 {
                let _ = writeln!(s, "  \"{u}\" -> \"{v}\";");
            } else {
                let _ = writeln!(s, "  \"{u}\" -> \"{v}\" [label=\"{m}\"];");
            }
        }
        s.push_str("}\n");
        s
    }
}

/// Equal vertex sets, frozen sets and arrows, regardless of vertex order.
impl PartialEq for IcedQuiver {
    fn eq(&self, other: &Self) -> bool {
        let vs = |q: &IcedQuiver| q.names.iter().cloned().collect::<BTreeSet<_>>();
        let fs = |q: &IcedQuiver| q.frozen_names().into_iter().collect::<BTreeSet<_>>();
        vs(self) == vs(other) && fs(self) == fs(other) && self.arrow_set() == other.arrow_set()
    }
}

impl Eq for IcedQuiver {}

//! Height functions and their derived combinatorics.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ymon::YMonomial;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct HeightFunction {
    values: Vec<i64>,
}

impl TryFrom<Vec<i64>> for HeightFunction {
    type Error = Error;
    fn try_from(v: Vec<i64>) -> Result<Self> {
        HeightFunction::new(v)
    }
}

impl From<HeightFunction> for Vec<i64> {
    fn from(h: HeightFunction) -> Self {
        h.values
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Derived {
    pub diamond: usize,
    pub bullet: usize,
    pub d: bool,
}

impl HeightFunction {
    pub fn new(values: Vec<i64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidHeight("empty".into()));
        }
        if let Some(w) = values.windows(2).find(|w| (w[0] - w[1]).abs() != 1) {
            return Err(Error::InvalidHeight(format!("step {} -> {}", w[0], w[1])));
        }
        Ok(HeightFunction { values })
    }

    pub fn parse(s: &str) -> Result<Self> {
        let v = s
            .split(',')
            .map(|t| t.trim().parse::<i64>().map_err(|_| Error::Parse(format!("bad height `{t}`"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(v)
    }

    /// All height functions on `n` nodes with `xi(1) = 0`.
    pub fn enumerate(n: usize) -> Vec<HeightFunction> {
        (0..1u32 << (n - 1))
            .map(|bits| {
                let mut v = vec![0i64];
                for b in 0..n - 1 {
                    let step = if bits >> b & 1 == 1 { 1 } else { -1 };
                    v.push(v[b] + step);
                }
                HeightFunction { values: v }
            })
            .collect()
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    /// `xi(i)` for `0 <= i <= n+1`, with `xi(0)=xi(2)` and `xi(n+1)=xi(n-1)`.
    /// For `n = 1` both boundary values are taken as `xi(1)+1`.
    pub fn at(&self, i: usize) -> i64 {
        let n = self.n();
        match i {
            _ if n == 1 && (i == 0 || i == 2) => self.values[0] + 1,
            0 => self.values[1],
            _ if i == n + 1 => self.values[n - 2],
            _ => self.values[i - 1],
        }
    }

    /// `xi(j) < xi(j+1)`
    pub fn rises(&self, j: usize) -> bool {
        self.at(j) + 1 == self.at(j + 1)
    }

    fn check(&self, j: usize) -> Result<()> {
        if j < 1 || j > self.n() {
            return Err(Error::NodeOutOfRange { node: j, n: self.n() });
        }
        Ok(())
    }

    pub fn diamond(&self, i: usize) -> usize {
        let n = self.n();
        if i + 1 >= n {
            return i;
        }
        (i..=n - 2).find(|&x| self.at(x) == self.at(x + 2)).unwrap_or(n - 1)
    }

    pub fn d(&self, j: usize) -> bool {
        self.diamond(j) == j
    }

    pub fn bullet(&self, j: usize) -> usize {
        let one = self.diamond(1);
        if j <= one {
            return 0;
        }
        (one..j).rev().find(|&x| self.d(x)).unwrap_or(0)
    }

    pub fn derived(&self, j: usize) -> Result<Derived> {
        self.check(j)?;
        Ok(Derived { diamond: self.diamond(j), bullet: self.bullet(j), d: self.d(j) })
    }

    /// `xi(x-1) = xi(x+1)`
    pub fn is_turn(&self, x: usize) -> bool {
        self.at(x - 1) == self.at(x + 1)
    }

    /// Falls back to `i1` when neither special case applies and no turn lies in `[i1, j-1]`.
    pub fn hat(&self, j: usize, i1: usize) -> Result<usize> {
        self.check(j)?;
        self.check(i1)?;
        if i1 > j {
            return Err(Error::InvalidIndices(format!("i1={i1} > j={j}")));
        }
        let jb = self.bullet(j);
        if (jb + 1 == j && jb == i1) || (j > i1 && jb == self.bullet(i1)) {
            return Ok(i1);
        }
        Ok((i1..j).rev().find(|&x| self.is_turn(x)).unwrap_or(i1))
    }

    /// Shift of the first factor of `omega(i, .)`, also the base of `x[alpha_{i,i_diamond}]`.
    pub fn first_shift(&self, i: usize) -> i64 {
        if self.at(i) == self.at(i + 1) + 1 {
            self.at(i) + 1
        } else {
            self.at(i) - 1
        }
    }

    pub fn omega(&self, i: usize, j: usize) -> Result<YMonomial> {
        self.check(i)?;
        self.check(j)?;
        if i >= j {
            return Err(Error::InvalidIndices(format!("omega needs i<j, got {i},{j}")));
        }
        let mut m = YMonomial::var(i, self.first_shift(i));
        for l in (i + 1..j).filter(|&l| self.is_turn(l)).chain([j]) {
            let a = if self.at(l) == self.at(l - 1) + 1 { self.at(l) + 1 } else { self.at(l) - 1 };
            m = m.mul(&YMonomial::var(l, a));
        }
        Ok(m)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TProfile {
    pub idx: Vec<usize>,
    pub rs: Vec<i64>,
    /// `values[p - idx[0]]` is `t_p`
    pub values: Vec<i64>,
}

impl TProfile {
    pub fn get(&self, p: usize) -> Option<i64> {
        let i1 = self.idx[0];
        (p >= i1).then(|| self.values.get(p - i1).copied()).flatten()
    }

    /// `t_p`, or 0 outside `[i1, ik]`.
    pub fn at(&self, p: usize) -> i64 {
        self.get(p).unwrap_or(0)
    }
}

pub fn check_indices(idx: &[usize]) -> Result<()> {
    if idx.is_empty() {
        return Err(Error::InvalidIndices("empty".into()));
    }
    if idx[0] == 0 {
        return Err(Error::InvalidIndices("node 0".into()));
    }
    if idx.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidIndices(format!("{idx:?} not strictly increasing")));
    }
    Ok(())
}

pub fn t_profile(idx: &[usize], rs: &[i64]) -> Result<TProfile> {
    check_indices(idx)?;
    if idx.len() != rs.len() {
        return Err(Error::InvalidIndices("length mismatch".into()));
    }
    let mut values = vec![rs[0]];
    for m in 1..idx.len() {
        for _ in idx[m - 1] + 1..=idx[m] {
            values.push(rs[m - 1] + rs[m]);
        }
    }
    Ok(TProfile { idx: idx.to_vec(), rs: rs.to_vec(), values })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum StepKind {
    P,
    Q,
}

pub fn step(kind: StepKind, x: i64, t: i64) -> i64 {
    match kind {
        StepKind::P => (t >= x) as i64,
        StepKind::Q => (t <= x) as i64,
    }
}

/// Checks the HL conditions: increasing nodes, alternating slopes and the gap rule.
pub fn check_hl_data(idx: &[usize], as_: &[i64]) -> Result<()> {
    check_indices(idx)?;
    if idx.len() != as_.len() {
        return Err(Error::InvalidIndices("length mismatch".into()));
    }
    for m in 1..idx.len() {
        let gap = (idx[m] - idx[m - 1]) as i64 + 2;
        if (as_[m] - as_[m - 1]).abs() != gap {
            return Err(Error::InvalidSpec(format!("gap rule fails at position {}", m + 1)));
        }
        if m >= 2 && (as_[m] - as_[m - 1]).signum() == (as_[m - 1] - as_[m - 2]).signum() {
            return Err(Error::InvalidSpec(format!("sign rule fails at position {}", m + 1)));
        }
    }
    Ok(())
}

/// A height function on `n = i_k + 2` nodes realizing the HL monomial with the given data.
pub fn build_from_hlr(idx: &[usize], as_: &[i64]) -> Result<HeightFunction> {
    check_hl_data(idx, as_)?;
    let k = idx.len();
    let (i1, ik) = (idx[0], idx[k - 1]);
    let up = k == 1 || as_[0] < as_[1];
    let n = ik + 2;
    let mut xi = vec![0i64; n + 1];
    xi[i1] = if up { as_[0] + 1 } else { as_[0] - 1 };
    let mut cur: i64 = if up { 1 } else { -1 };
    for x in (1..i1).rev() {
        xi[x] = xi[x + 1] - cur;
    }
    for x in i1 + 1..=ik {
        xi[x] = xi[x - 1] + cur;
        if idx[1..k - 1].contains(&x) {
            cur = -cur;
        }
    }
    if k > 1 {
        cur = -cur;
    }
    xi[ik + 1] = xi[ik] + cur;
    xi[ik + 2] = xi[ik + 1] - cur;
    HeightFunction::new(xi[1..].to_vec())
}

//! Monomials in the variables `Y[i,s]`, the A-lattice and the dominance order.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct YVar {
    pub node: usize,
    pub shift: i64,
}

impl YVar {
    pub fn new(node: usize, shift: i64) -> Self {
        YVar { node, shift }
    }
}

/// Sparse Laurent monomial; zero exponents are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct YMonomial {
    exps: BTreeMap<YVar, i64>,
}

impl YMonomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn var(node: usize, shift: i64) -> Self {
        Self::from_pairs([((node, shift), 1)])
    }

    pub fn from_pairs<I: IntoIterator<Item = ((usize, i64), i64)>>(it: I) -> Self {
        let mut m = Self::one();
        for ((i, s), e) in it {
            m.add_exp(YVar::new(i, s), e);
        }
        m
    }

    fn add_exp(&mut self, v: YVar, e: i64) {
        if e == 0 {
            return;
        }
        let slot = self.exps.entry(v).or_insert(0);
        *slot += e;
        if *slot == 0 {
            self.exps.remove(&v);
        }
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn exponent(&self, node: usize, shift: i64) -> i64 {
        self.exps.get(&YVar::new(node, shift)).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (YVar, i64)> + '_ {
        self.exps.iter().map(|(v, e)| (*v, *e))
    }

    pub fn len(&self) -> usize {
        self.exps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.exps.is_empty()
    }

    pub fn is_dominant(&self) -> bool {
        self.exps.values().all(|&e| e > 0)
    }

    pub fn degree(&self) -> i64 {
        self.exps.values().sum()
    }

    pub fn mul(&self, other: &YMonomial) -> YMonomial {
        self.mul_pow(other, 1)
    }

    /// `self * other^e`
    pub fn mul_pow(&self, other: &YMonomial, e: i64) -> YMonomial {
        let mut out = self.clone();
        for (v, x) in other.iter() {
            out.add_exp(v, x * e);
        }
        out
    }

    pub fn div(&self, other: &YMonomial) -> YMonomial {
        self.mul_pow(other, -1)
    }

    pub fn inv(&self) -> YMonomial {
        YMonomial::one().div(self)
    }

    pub fn pow(&self, e: i64) -> YMonomial {
        YMonomial::one().mul_pow(self, e)
    }

    pub fn shifted(&self, c: i64) -> YMonomial {
        YMonomial {
            exps: self.exps.iter().map(|(v, e)| (YVar::new(v.node, v.shift + c), *e)).collect(),
        }
    }

    pub fn max_node(&self) -> usize {
        self.exps.keys().map(|v| v.node).max().unwrap_or(0)
    }

    pub fn to_triples(&self) -> Vec<(usize, i64, i64)> {
        self.iter().map(|(v, e)| (v.node, v.shift, e)).collect()
    }

    pub fn from_triples(t: &[(usize, i64, i64)]) -> Result<Self> {
        let mut m = YMonomial::one();
        for &(i, s, e) in t {
            if i == 0 {
                return Err(Error::Parse("node 0".into()));
            }
            if e == 0 || m.exps.contains_key(&YVar::new(i, s)) {
                return Err(Error::Parse(format!("bad or repeated factor Y[{i},{s}]")));
            }
            m.add_exp(YVar::new(i, s), e);
        }
        Ok(m)
    }
}

impl fmt::Display for YMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (v, e) in self.iter() {
            if !first {
                write!(f, " * ")?;
            }
            first = false;
            write!(f, "Y[{},{}]", v.node, v.shift)?;
            if e != 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for YMonomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "1" || s.is_empty() {
            return Ok(YMonomial::one());
        }
        let mut triples = Vec::new();
        for part in s.split('*') {
            let part = part.trim();
            let bad = || Error::Parse(format!("bad factor `{part}`"));
            let rest = part.strip_prefix("Y[").ok_or_else(bad)?;
            let close = rest.find(']').ok_or_else(bad)?;
            let (inner, tail) = (&rest[..close], &rest[close + 1..]);
            let (i, sh) = inner.split_once(',').ok_or_else(bad)?;
            let i: usize = i.trim().parse().map_err(|_| bad())?;
            let sh: i64 = sh.trim().parse().map_err(|_| bad())?;
            let e: i64 = match tail.trim() {
                "" => 1,
                t => t.strip_prefix('^').ok_or_else(bad)?.trim().parse().map_err(|_| bad())?,
            };
            triples.push((i, sh, e));
        }
        Self::from_triples(&triples)
    }
}

impl Serialize for YMonomial {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_triples().serialize(ser)
    }
}

impl<'de> Deserialize<'de> for YMonomial {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let t = Vec::<(usize, i64, i64)>::deserialize(de)?;
        YMonomial::from_triples(&t).map_err(serde::de::Error::custom)
    }
}

/// Type A_n Cartan data.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CartanData {
    pub n: usize,
}

impl CartanData {
    pub fn new(n: usize) -> Self {
        CartanData { n }
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        if i == j {
            2
        } else if i.abs_diff(j) == 1 {
            -1
        } else {
            0
        }
    }

    pub fn neighbors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        [i.wrapping_sub(1), i + 1].into_iter().filter(move |&j| j >= 1 && j <= self.n)
    }

    fn check(&self, i: usize) -> Result<()> {
        if i < 1 || i > self.n {
            return Err(Error::NodeOutOfRange { node: i, n: self.n });
        }
        Ok(())
    }
}

/// `A[i,s] = Y[i,s-1] Y[i,s+1] / prod_{j~i} Y[j,s]`
pub fn a_monomial(i: usize, s: i64, cartan: &CartanData) -> Result<YMonomial> {
    cartan.check(i)?;
    let mut m = YMonomial::from_pairs([((i, s - 1), 1), ((i, s + 1), 1)]);
    for j in cartan.neighbors(i) {
        m.add_exp(YVar::new(j, s), -1);
    }
    Ok(m)
}

pub fn a_inverse(i: usize, s: i64, cartan: &CartanData) -> Result<YMonomial> {
    Ok(a_monomial(i, s, cartan)?.inv())
}

/// Exponents `c[(i,s)]` with `q = prod A[i,s]^c`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ACertificate {
    pub exps: BTreeMap<(usize, i64), i64>,
}

impl ACertificate {
    pub fn expand(&self, cartan: &CartanData) -> YMonomial {
        let mut m = YMonomial::one();
        for (&(i, s), &c) in &self.exps {
            m = m.mul_pow(&a_monomial(i, s, cartan).expect("certificate node in range"), c);
        }
        m
    }

    pub fn negated(&self) -> ACertificate {
        ACertificate { exps: self.exps.iter().map(|(k, v)| (*k, -v)).collect() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DomOrdering {
    Equal,
    Greater(ACertificate),
    Less(ACertificate),
    Incomparable,
}

impl DomOrdering {
    pub fn is_comparable(&self) -> bool {
        !matches!(self, DomOrdering::Incomparable)
    }
}

/// Writes `q` in the A-basis if it lies in the A-lattice.
///
/// The system is unitriangular when variables are ordered by shift: the lowest
/// variable `Y[i,s-1]` of `A[i,s]` is met by no `A[j,t]` with `t > s`. Peeling
/// from the bottom of the window therefore gives the unique solution.
pub fn a_decomposition(q: &YMonomial, cartan: &CartanData) -> Option<ACertificate> {
    let mut cert = ACertificate::default();
    if q.is_one() {
        return Some(cert);
    }
    if q.max_node() > cartan.n {
        return None;
    }
    let lo = q.iter().map(|(v, _)| v.shift).min().unwrap();
    let hi = q.iter().map(|(v, _)| v.shift).max().unwrap();
    let mut cur = q.clone();
    for s in lo..=hi + 1 {
        for i in 1..=cartan.n {
            let e = cur.exponent(i, s - 1);
            if e != 0 {
                cert.exps.insert((i, s), e);
                cur = cur.mul_pow(&a_monomial(i, s, cartan).unwrap(), -e);
            }
        }
    }
    cur.is_one().then_some(cert)
}

pub fn compare_dominance(m1: &YMonomial, m2: &YMonomial, cartan: &CartanData) -> DomOrdering {
    if m1 == m2 {
        return DomOrdering::Equal;
    }
    let Some(cert) = a_decomposition(&m1.div(m2), cartan) else {
        return DomOrdering::Incomparable;
    };
    if cert.exps.values().all(|&c| c >= 0) {
        DomOrdering::Greater(cert)
    } else if cert.exps.values().all(|&c| c <= 0) {
        DomOrdering::Less(cert.negated())
    } else {
        DomOrdering::Incomparable
    }
}

/// `Y[i,s] Y[i,s+2] ... Y[i,s+2len-2]`; length 0 is the empty monomial.
pub fn kr_string(i: usize, s: i64, len: i64) -> Result<YMonomial> {
    if len < 0 {
        return Err(Error::InvalidLength(len));
    }
    Ok(YMonomial::from_pairs((0..len).map(|t| ((i, s + 2 * t), 1))))
}

pub fn kr_monomial(i: usize, s: i64, k: i64) -> Result<YMonomial> {
    if k < 1 {
        return Err(Error::InvalidLength(k));
    }
    kr_string(i, s, k)
}

/// Replaces each `Y[i,a]^e` by the KR string of length `len` starting at `a`.
pub fn lift_len(m: &YMonomial, len: i64) -> Result<YMonomial> {
    if !m.is_dominant() {
        return Err(Error::NotDominant(m.to_string()));
    }
    let mut out = YMonomial::one();
    for (v, e) in m.iter() {
        out = out.mul_pow(&kr_string(v.node, v.shift, len)?, e);
    }
    Ok(out)
}

pub fn lift_r(m: &YMonomial, r: i64) -> Result<YMonomial> {
    if r < 1 {
        return Err(Error::InvalidLength(r));
    }
    lift_len(m, r)
}

pub fn shifted_kr(i: usize, a: i64, r: i64, rj: i64) -> Result<YMonomial> {
    if rj < -r {
        return Err(Error::OffsetTooSmall { r, rj });
    }
    if rj <= 0 {
        kr_string(i, a, r + rj)
    } else {
        kr_string(i, a - 2 * rj, r + rj)
    }
}

/// The even `c` with `m2 = m1` shifted by `c`, if any.
pub fn shift_equivalent(m1: &YMonomial, m2: &YMonomial) -> Option<i64> {
    if m1.len() != m2.len() {
        return None;
    }
    let (Some((v1, _)), Some((v2, _))) = (m1.iter().next(), m2.iter().next()) else {
        return Some(0);
    };
    if v1.node != v2.node {
        return None;
    }
    let c = v2.shift - v1.shift;
    (c % 2 == 0 && m1.shifted(c) == *m2).then_some(c)
}

/// The `c` with `m2 = m1` shifted by `c`, of either parity.
pub fn spectral_shift(m1: &YMonomial, m2: &YMonomial) -> Option<i64> {
    if m1.len() != m2.len() {
        return None;
    }
    let (Some((v1, _)), Some((v2, _))) = (m1.iter().next(), m2.iter().next()) else {
        return Some(0);
    };
    let c = v2.shift - v1.shift;
    (m1.shifted(c) == *m2).then_some(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn y(pairs: &[(usize, i64)]) -> YMonomial {
        YMonomial::from_pairs(pairs.iter().map(|&p| (p, 1)))
    }

    #[test]
    fn a_inverse_examples() {
        let got = a_inverse(2, 0, &CartanData::new(3)).unwrap();
        let want = YMonomial::from_pairs([((2, -1), -1), ((2, 1), -1), ((1, 0), 1), ((3, 0), 1)]);
        assert_eq!(got, want);
        let got = a_inverse(1, 0, &CartanData::new(1)).unwrap();
        assert_eq!(got, YMonomial::from_pairs([((1, -1), -1), ((1, 1), -1)]));
        let got = a_inverse(1, -2, &CartanData::new(2)).unwrap();
        assert_eq!(got, YMonomial::from_pairs([((1, -3), -1), ((1, -1), -1), ((2, -2), 1)]));
        assert!(a_inverse(4, 0, &CartanData::new(3)).is_err());
    }

    #[test]
    fn kr_and_lift() {
        assert_eq!(kr_monomial(1, -3, 2).unwrap(), y(&[(1, -3), (1, -1)]));
        assert_eq!(
            kr_monomial(2, -8, 5).unwrap(),
            y(&[(2, -8), (2, -6), (2, -4), (2, -2), (2, 0)])
        );
        assert!(kr_monomial(1, 0, 0).is_err());
        let m = y(&[(2, -6), (4, -2), (6, -6)]);
        assert_eq!(
            lift_r(&m, 2).unwrap(),
            y(&[(2, -6), (2, -4), (4, -2), (4, 0), (6, -6), (6, -4)])
        );
        assert_eq!(lift_r(&m, 1).unwrap(), m);
        assert!(lift_r(&YMonomial::var(1, 0).inv(), 1).is_err());
    }

    #[test]
    fn shifted_kr_examples() {
        assert_eq!(
            shifted_kr(1, -7, 3, 2).unwrap(),
            y(&[(1, -11), (1, -9), (1, -7), (1, -5), (1, -3)])
        );
        assert_eq!(shifted_kr(2, -6, 2, -1).unwrap(), y(&[(2, -6)]));
        assert!(shifted_kr(2, -6, 2, -2).unwrap().is_one());
        assert!(shifted_kr(2, -6, 2, -3).is_err());
    }

    #[test]
    fn dominance_examples() {
        let c = CartanData::new(3);
        let m1 = y(&[(2, 0), (1, -3), (1, -1)]);
        let m2 = y(&[(2, -2), (2, 0)]);
        match compare_dominance(&m1, &m2, &c) {
            DomOrdering::Greater(cert) => {
                assert_eq!(cert.exps, BTreeMap::from([((1, -2), 1)]));
            }
            o => panic!("{o:?}"),
        }
        assert_eq!(compare_dominance(&m1, &m1, &c), DomOrdering::Equal);
        let low = YMonomial::var(1, -1).mul(&a_inverse(1, 0, &c).unwrap());
        assert!(matches!(compare_dominance(&low, &YMonomial::var(1, -1), &c), DomOrdering::Less(_)));
        assert_eq!(
            compare_dominance(&YMonomial::var(1, 0), &YMonomial::var(2, 0), &c),
            DomOrdering::Incomparable
        );
    }

    #[test]
    fn shift_equivalence() {
        assert_eq!(shift_equivalent(&YMonomial::var(1, -1), &YMonomial::var(1, -3)), Some(-2));
        assert_eq!(shift_equivalent(&y(&[(1, -1), (2, 0)]), &y(&[(1, -1), (2, 2)])), None);
        assert_eq!(
            shift_equivalent(&kr_monomial(1, -3, 2).unwrap(), &kr_monomial(1, -7, 2).unwrap()),
            Some(-4)
        );
        assert_eq!(shift_equivalent(&YMonomial::var(1, 0), &YMonomial::var(1, 1)), None);
        assert_eq!(spectral_shift(&YMonomial::var(1, 0), &YMonomial::var(1, 1)), Some(1));
        assert_eq!(spectral_shift(&YMonomial::var(1, 0), &YMonomial::var(2, 0)), None);
    }

    #[test]
    fn text_and_json_round_trip() {
        let m = YMonomial::from_pairs([((1, -3), 2), ((2, 0), -1), ((1, 5), 1)]);
        let t = m.to_string();
        assert_eq!(t, "Y[1,-3]^2 * Y[1,5] * Y[2,0]^-1");
        assert_eq!(t.parse::<YMonomial>().unwrap(), m);
        let j = serde_json::to_string(&m).unwrap();
        assert_eq!(j, "[[1,-3,2],[1,5,1],[2,0,-1]]");
        assert_eq!(serde_json::from_str::<YMonomial>(&j).unwrap(), m);
        assert_eq!("1".parse::<YMonomial>().unwrap(), YMonomial::one());
    }
}

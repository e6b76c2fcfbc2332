//! Exact Laurent-polynomial cluster algebra on the height-function seed, used as an
//! independent check of the monomial-level claims.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::heights::HeightFunction;
use crate::hl::{Factor, Relation};
use crate::quiver::IcedQuiver;
use crate::sequences::{build_q_xi, lower_name, mutable_name, upper_name, DPRIME, PRIME};

/// Sparse Laurent polynomial over a fixed number of variables.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LaurentPoly {
    width: usize,
    terms: BTreeMap<Vec<i32>, i128>,
}

fn overflow() -> Error {
    Error::InexactDivision("coefficient overflow".into())
}

impl LaurentPoly {
    pub fn zero(width: usize) -> Self {
        LaurentPoly { width, terms: BTreeMap::new() }
    }

    pub fn one(width: usize) -> Self {
        Self::monomial(vec![0; width], 1)
    }

    pub fn var(width: usize, k: usize) -> Self {
        let mut e = vec![0; width];
        e[k] = 1;
        Self::monomial(e, 1)
    }

    pub fn monomial(exps: Vec<i32>, c: i128) -> Self {
        let width = exps.len();
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert(exps, c);
        }
        LaurentPoly { width, terms }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[i32], i128)> {
        self.terms.iter().map(|(e, &c)| (e.as_slice(), c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, e: Vec<i32>, c: i128) -> Result<()> {
        let slot = self.terms.entry(e).or_insert(0);
        *slot = slot.checked_add(c).ok_or_else(overflow)?;
        if *slot == 0 {
            self.terms.retain(|_, c| *c != 0);
        }
        Ok(())
    }

    pub fn add(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        let mut out = self.clone();
        for (e, &c) in &other.terms {
            out.add_term(e.clone(), c)?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        let mut out = self.clone();
        for (e, &c) in &other.terms {
            out.add_term(e.clone(), -c)?;
        }
        Ok(out)
    }

    pub fn mul(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        let mut out = LaurentPoly::zero(self.width);
        for (a, &ca) in &self.terms {
            for (b, &cb) in &other.terms {
                let e = a.iter().zip(b).map(|(x, y)| x + y).collect();
                out.add_term(e, ca.checked_mul(cb).ok_or_else(overflow)?)?;
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Result<LaurentPoly> {
        let mut out = LaurentPoly::one(self.width);
        for _ in 0..e {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    /// Exact division; any remainder is an error.
    pub fn div_exact(&self, d: &LaurentPoly) -> Result<LaurentPoly> {
        let Some((d_hi, &c_hi)) = d.terms.last_key_value() else {
            return Err(Error::InexactDivision("division by zero".into()));
        };
        if self.is_zero() {
            return Ok(LaurentPoly::zero(self.width));
        }
        // Newton polytopes add under multiplication, so each quotient exponent lies in this box.
        let (n_lo, n_hi) = (self.min_exponents(), self.max_exponents());
        let (d_lo, d_max) = (d.min_exponents(), d.max_exponents());
        let lo: Vec<i32> = n_lo.iter().zip(&d_lo).map(|(a, b)| a - b).collect();
        let hi: Vec<i32> = n_hi.iter().zip(&d_max).map(|(a, b)| a - b).collect();
        let mut rem = self.clone();
        let mut q = LaurentPoly::zero(self.width);
        while let Some((r_hi, &c)) = rem.terms.last_key_value() {
            let t: Vec<i32> = r_hi.iter().zip(d_hi).map(|(x, y)| x - y).collect();
            let in_box = t.iter().zip(lo.iter().zip(&hi)).all(|(x, (a, b))| a <= x && x <= b);
            if c % c_hi != 0 || !in_box {
                return Err(Error::InexactDivision(format!("{self} by {d}")));
            }
            let step = LaurentPoly::monomial(t, c / c_hi);
            rem = rem.sub(&step.mul(d)?)?;
            q = q.add(&step)?;
        }
        Ok(q)
    }

    /// Componentwise minimum exponent over the terms.
    pub fn min_exponents(&self) -> Vec<i32> {
        self.extreme_exponents(std::cmp::min)
    }

    /// Exponents of the monomial denominator.
    pub fn denominator(&self) -> Vec<i32> {
        self.min_exponents().into_iter().map(|e| (-e).max(0)).collect()
    }

    fn extreme_exponents(&self, f: fn(i32, i32) -> i32) -> Vec<i32> {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return vec![0; self.width];
        };
        let mut m = first.clone();
        for e in it {
            for (a, &b) in m.iter_mut().zip(e) {
                *a = f(*a, b);
            }
        }
        m
    }

    pub fn max_exponents(&self) -> Vec<i32> {
        self.extreme_exponents(std::cmp::max)
    }

    pub fn all_positive(&self) -> bool {
        self.terms.values().all(|&c| c > 0)
    }

    fn fmt_with(&self, f: &mut fmt::Formatter<'_>, names: &[String]) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (t, (e, &c)) in self.terms.iter().rev().enumerate() {
            let sign = if c < 0 { "-" } else if t > 0 { "+" } else { "" };
            if t > 0 {
                write!(f, " {sign} ")?;
            } else {
                write!(f, "{sign}")?;
            }
            let mut factors = Vec::new();
            for (k, &x) in e.iter().enumerate() {
                match x {
                    0 => {}
                    1 => factors.push(names[k].clone()),
                    _ => factors.push(format!("{}^{x}", names[k])),
                }
            }
            let c = c.unsigned_abs();
            match (c, factors.is_empty()) {
                (_, true) => write!(f, "{c}")?,
                (1, false) => write!(f, "{}", factors.join("*"))?,
                _ => write!(f, "{c}*{}", factors.join("*"))?,
            }
        }
        Ok(())
    }
}

/// Names `f'_1..f'_n, x_1..x_n, f''_1..f''_n` for a width `3n` polynomial.
pub fn variable_names(n: usize) -> Vec<String> {
    (1..=n)
        .map(|i| format!("f{PRIME}{i}"))
        .chain((1..=n).map(|i| format!("x{i}")))
        .chain((1..=n).map(|i| format!("f{DPRIME}{i}")))
        .collect()
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = if self.width.is_multiple_of(3) {
            variable_names(self.width / 3)
        } else {
            (0..self.width).map(|k| format!("v{k}")).collect()
        };
        self.fmt_with(f, &names)
    }
}

#[derive(Clone, Debug)]
pub struct LaurentSeed {
    pub quiver: IcedQuiver,
    labels: Vec<LaurentPoly>,
    n: usize,
}

impl LaurentSeed {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn label(&self, v: &str) -> Result<&LaurentPoly> {
        Ok(&self.labels[self.quiver.index_of(v)?])
    }

    pub fn labels(&self) -> BTreeMap<String, LaurentPoly> {
        self.quiver.names().iter().cloned().zip(self.labels.iter().cloned()).collect()
    }

    pub fn mutable_labels(&self) -> Vec<LaurentPoly> {
        (0..self.quiver.len())
            .filter(|&k| !self.quiver.is_frozen_at(k))
            .map(|k| self.labels[k].clone())
            .collect()
    }

    pub fn mutate_at(&mut self, k: usize) -> Result<()> {
        if self.quiver.is_frozen_at(k) {
            return Err(Error::FrozenVertex(self.quiver.name(k).to_string()));
        }
        let w = 3 * self.n;
        let mut p_in = LaurentPoly::one(w);
        let mut p_out = LaurentPoly::one(w);
        for (u, b) in self.quiver.incident_at(k) {
            let side = if b < 0 { &mut p_in } else { &mut p_out };
            *side = side.mul(&self.labels[u].pow(b.unsigned_abs() as u32)?)?;
        }
        let new = p_in.add(&p_out)?.div_exact(&self.labels[k])?;
        self.quiver.mutate_at(k)?;
        self.labels[k] = new;
        Ok(())
    }

    pub fn mutate(&mut self, v: &str) -> Result<()> {
        let k = self.quiver.index_of(v)?;
        self.mutate_at(k)
    }

    /// Sorted mutable labels; two seeds with the same key carry the same cluster.
    fn key(&self) -> Vec<LaurentPoly> {
        let mut v = self.mutable_labels();
        v.sort();
        v
    }
}

fn generator_of(name: &str, n: usize) -> Result<usize> {
    let (body, block) = if let Some(b) = name.strip_suffix(PRIME) {
        (b, 0)
    } else if let Some(b) = name.strip_suffix(DPRIME) {
        (b, 2)
    } else {
        (name, 1)
    };
    let i: usize = body.parse().map_err(|_| Error::NoSuchVertex(name.to_string()))?;
    if i < 1 || i > n {
        return Err(Error::NodeOutOfRange { node: i, n });
    }
    Ok(block * n + i - 1)
}

pub fn init_oracle(xi: &HeightFunction) -> LaurentSeed {
    let n = xi.n();
    let quiver = build_q_xi(xi);
    let labels = quiver
        .names()
        .iter()
        .map(|v| LaurentPoly::var(3 * n, generator_of(v, n).expect("Q_xi vertex names")))
        .collect();
    LaurentSeed { quiver, labels, n }
}

pub fn mutate_oracle(seed: &LaurentSeed, v: &str) -> Result<LaurentSeed> {
    let mut s = seed.clone();
    s.mutate(v)?;
    Ok(s)
}

/// The variable at `j` after mutating `i, i+1, ..., j` from the initial seed.
pub fn x_alpha(xi: &HeightFunction, i: usize, j: usize) -> Result<LaurentPoly> {
    let n = xi.n();
    if i < 1 || i > j || j > n {
        return Err(Error::InvalidIndices(format!("need 1 <= i <= j <= n, got {i},{j}")));
    }
    let mut s = init_oracle(xi);
    for k in i..=j {
        s.mutate(&mutable_name(k))?;
    }
    Ok(s.label(&mutable_name(j))?.clone())
}

/// The initial variable `x_i`, also written `x[-alpha_i]`.
pub fn x_neg_alpha(xi: &HeightFunction, i: usize) -> Result<LaurentPoly> {
    let n = xi.n();
    Ok(LaurentPoly::var(3 * n, generator_of(&mutable_name(i), n)?))
}

pub const CLOSURE_CAP: usize = 10_000;

#[derive(Clone, Debug)]
pub struct Closure {
    pub variables: BTreeSet<LaurentPoly>,
    pub seeds: usize,
}

/// Breadth-first search of the exchange graph; each layer fans out in parallel and
/// merges into one visited set.
pub fn closure(xi: &HeightFunction, cap: usize) -> Result<Closure> {
    let start = init_oracle(xi);
    let mutable: Vec<usize> = (0..start.quiver.len()).filter(|&k| !start.quiver.is_frozen_at(k)).collect();
    let mut seen: HashSet<Vec<LaurentPoly>> = HashSet::new();
    let mut variables = BTreeSet::new();
    seen.insert(start.key());
    variables.extend(start.mutable_labels());
    let mut frontier = vec![start];
    while !frontier.is_empty() {
        let next: Vec<LaurentSeed> = frontier
            .par_iter()
            .flat_map_iter(|s| {
                mutable.iter().map(move |&k| {
                    let mut t = s.clone();
                    t.mutate_at(k).map(|_| t)
                })
            })
            .collect::<Result<Vec<_>>>()?;
        frontier = Vec::new();
        for t in next {
            if seen.insert(t.key()) {
                if seen.len() > cap {
                    return Err(Error::CapExceeded(cap));
                }
                variables.extend(t.mutable_labels());
                frontier.push(t);
            }
        }
    }
    Ok(Closure { variables, seeds: seen.len() })
}

pub fn product(fs: &[LaurentPoly], width: usize) -> Result<LaurentPoly> {
    fs.iter().try_fold(LaurentPoly::one(width), |acc, f| acc.mul(f))
}

/// `prod(lhs) == sum_k prod(rhs[k])`, exactly.
pub fn verify_identity(lhs: &[LaurentPoly], rhs: &[Vec<LaurentPoly>]) -> Result<bool> {
    let width = lhs
        .iter()
        .chain(rhs.iter().flatten())
        .map(|p| p.width())
        .next()
        .unwrap_or(0);
    let l = product(lhs, width)?;
    let mut r = LaurentPoly::zero(width);
    for term in rhs {
        r = r.add(&product(term, width)?)?;
    }
    Ok(l == r)
}

/// Evaluates relation factors in the oracle, caching each `x[alpha_{i,j}]`.
pub struct FactorEval<'a> {
    xi: &'a HeightFunction,
    cache: BTreeMap<(usize, usize), LaurentPoly>,
}

impl<'a> FactorEval<'a> {
    pub fn new(xi: &'a HeightFunction) -> Self {
        FactorEval { xi, cache: BTreeMap::new() }
    }

    pub fn eval(&mut self, f: Factor) -> Result<LaurentPoly> {
        let n = self.xi.n();
        let w = 3 * n;
        let gen = |name: String| generator_of(&name, n).map(|k| LaurentPoly::var(w, k));
        match f {
            Factor::Lower(i) => gen(lower_name(i)),
            Factor::X(i) => gen(mutable_name(i)),
            Factor::Upper(i) => gen(upper_name(i)),
            Factor::Alpha(i, j) => {
                if let Some(p) = self.cache.get(&(i, j)) {
                    return Ok(p.clone());
                }
                let p = x_alpha(self.xi, i, j)?;
                self.cache.insert((i, j), p.clone());
                Ok(p)
            }
        }
    }

    pub fn eval_all(&mut self, fs: &[Factor]) -> Result<Vec<LaurentPoly>> {
        fs.iter().map(|&f| self.eval(f)).collect()
    }

    /// Checks `prod(lhs) = prod(side_a) + prod(side_b)`.
    pub fn check(&mut self, rel: &Relation) -> Result<bool> {
        let lhs = self.eval_all(&rel.lhs)?;
        let a = self.eval_all(&rel.side_a)?;
        let b = self.eval_all(&rel.side_b)?;
        verify_identity(&lhs, &[a, b])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xi(v: &[i64]) -> HeightFunction {
        HeightFunction::new(v.to_vec()).unwrap()
    }

    #[test]
    fn exact_division() {
        let x = LaurentPoly::var(2, 0);
        let y = LaurentPoly::var(2, 1);
        let p = x.add(&y).unwrap();
        let q = p.mul(&p).unwrap();
        assert_eq!(q.div_exact(&p).unwrap(), p);
        assert!(q.div_exact(&x.sub(&y).unwrap()).is_err());
        let inv = LaurentPoly::monomial(vec![-1, 0], 1);
        assert_eq!(p.mul(&inv).unwrap().div_exact(&inv).unwrap(), p);
    }

    #[test]
    fn first_mutation() {
        let h = xi(&[-3, -2, -3, -4, -5, -4]);
        let s = mutate_oracle(&init_oracle(&h), "1").unwrap();
        assert_eq!(s.label("1").unwrap().denominator()[6], 1);
        let back = mutate_oracle(&s, "1").unwrap();
        assert_eq!(back.labels(), init_oracle(&h).labels());
    }

    #[test]
    fn closure_counts() {
        for n in 1..=3 {
            for h in HeightFunction::enumerate(n) {
                assert_eq!(closure(&h, CLOSURE_CAP).unwrap().variables.len(), n * (n + 3) / 2);
            }
        }
    }

    #[test]
    fn cap_is_enforced() {
        let h = xi(&[0, 1, 0]);
        assert_eq!(closure(&h, 3).unwrap_err(), Error::CapExceeded(3));
    }
}

//! HL, HL_r and generalized HL monomials, closed forms for tracked labels and
//! predicted exchange relations.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::heights::{check_hl_data, step, t_profile, HeightFunction, StepKind, TProfile};
use crate::gridseeds::TrackedSeed;
use crate::sequences::{build_q_xi, DPRIME, PRIME};
use crate::ymon::{kr_string, lift_len, shifted_kr, CartanData, YMonomial};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GhlSpec {
    pub idx: Vec<usize>,
    pub as_: Vec<i64>,
    pub r: i64,
    pub rs: Vec<i64>,
}

impl GhlSpec {
    pub fn new(idx: &[usize], as_: &[i64], r: i64, rs: &[i64]) -> Self {
        GhlSpec { idx: idx.to_vec(), as_: as_.to_vec(), r, rs: rs.to_vec() }
    }

    pub fn k(&self) -> usize {
        self.idx.len()
    }

    pub fn ik(&self) -> usize {
        self.idx[self.k() - 1]
    }

    pub fn max_abs_offset(&self) -> i64 {
        self.rs.iter().map(|x| x.abs()).max().unwrap_or(0)
    }

    /// Names the first violated condition.
    pub fn validate(&self) -> Result<()> {
        let k = self.k();
        if k == 0 {
            return Err(Error::InvalidSpec("empty index list".into()));
        }
        if self.as_.len() != k || self.rs.len() != k {
            return Err(Error::InvalidSpec("idx, as and rs differ in length".into()));
        }
        if self.r < 1 {
            return Err(Error::InvalidSpec(format!("r={} below 1", self.r)));
        }
        if let Some(m) = self.rs.iter().position(|&x| x < -self.r) {
            return Err(Error::InvalidSpec(format!("r_{} below -r", m + 1)));
        }
        check_hl_data(&self.idx, &self.as_)
            .map_err(|e| Error::InvalidSpec(format!("condition (1)-(3): {e}")))?;
        if k >= 2 {
            let a = &self.as_;
            if a[0] > a[1] && self.rs[0] != 0 {
                return Err(Error::InvalidSpec("condition (4): r_1 must be 0 when a_1 > a_2".into()));
            }
            for m in 1..k - 1 {
                if a[m - 1] < a[m] && a[m] > a[m + 1] && self.rs[m] != 0 {
                    return Err(Error::InvalidSpec(format!(
                        "condition (4): r_{} must be 0 at a peak",
                        m + 1
                    )));
                }
            }
            if a[k - 2] < a[k - 1] && self.rs[k - 1] != 0 {
                return Err(Error::InvalidSpec("condition (4): r_k must be 0 when a_{k-1} < a_k".into()));
            }
        }
        Ok(())
    }

    pub fn t_profile(&self) -> Result<TProfile> {
        t_profile(&self.idx, &self.rs)
    }

    /// The extra column `i_k + 1` is mutated: `i_k < n`, `r_k != 0`, and either `k = 1`
    /// or `a_{k-1} > a_k`.
    pub fn has_tail(&self, n: usize) -> bool {
        let k = self.k();
        self.ik() < n && self.rs[k - 1] != 0 && (k == 1 || self.as_[k - 2] > self.as_[k - 1])
    }

    /// Grid vertex carrying the final label.
    pub fn final_vertex(&self, n: usize) -> (usize, i64) {
        if self.has_tail(n) {
            (self.ik() + 1, self.r + self.rs[self.k() - 1])
        } else {
            (self.ik(), self.r)
        }
    }
}

/// Whether `m` is `Y[i_1,a_1]...Y[i_k,a_k]` with increasing nodes, alternating slopes and the gap rule.
pub fn validate_hl(m: &YMonomial) -> bool {
    if m.is_one() || m.iter().any(|(_, e)| e != 1) {
        return false;
    }
    let idx: Vec<usize> = m.iter().map(|(v, _)| v.node).collect();
    let as_: Vec<i64> = m.iter().map(|(v, _)| v.shift).collect();
    check_hl_data(&idx, &as_).is_ok()
}

pub fn ghl_monomial(spec: &GhlSpec) -> Result<YMonomial> {
    spec.validate()?;
    omega_tilde(spec, spec.k())
}

/// Product of the first `t` shifted KR factors.
pub fn omega_tilde(spec: &GhlSpec, t: usize) -> Result<YMonomial> {
    if t > spec.k() {
        return Err(Error::InvalidSpec(format!("t={t} exceeds k={}", spec.k())));
    }
    let mut m = YMonomial::one();
    for p in 0..t {
        m = m.mul(&shifted_kr(spec.idx[p], spec.as_[p], spec.r, spec.rs[p])?);
    }
    Ok(m)
}

/// Product of the factors whose node is at most `x`; empty when `x < i_1`.
pub fn omega_tilde_upto(spec: &GhlSpec, x: usize) -> Result<YMonomial> {
    omega_tilde(spec, spec.idx.iter().filter(|&&i| i <= x).count())
}

/// Highest weight of `x[alpha_{i,j}]` at depth `r`.
pub fn closed_x_alpha(xi: &HeightFunction, i: usize, j: usize, r: i64) -> Result<YMonomial> {
    if i < 1 || i > j || j > xi.n() {
        return Err(Error::InvalidIndices(format!("need 1 <= i <= j <= n, got {i},{j}")));
    }
    if j == xi.diamond(i) {
        return lift_len(&YMonomial::var(i, xi.first_shift(i)), r);
    }
    let jbar = if xi.d(j) { xi.bullet(j) + 1 } else { j + 1 };
    lift_len(&xi.omega(i, jbar)?, r)
}

/// `(f'_i, x_i, f''_i)` at depth `r`.
pub fn frozen_and_initial_labels(
    xi: &HeightFunction,
    i: usize,
    r: i64,
) -> Result<(YMonomial, YMonomial, YMonomial)> {
    if r < 1 {
        return Err(Error::InvalidLength(r));
    }
    if i < 1 || i > xi.n() {
        return Err(Error::NodeOutOfRange { node: i, n: xi.n() });
    }
    Ok((
        kr_string(i, xi.at(i) + 1, r - 1)?,
        kr_string(i, xi.at(i + 1), r)?,
        kr_string(i, xi.at(i) - 1, r + 1)?,
    ))
}

/// Q_xi labeled with `(f'_i, x_i, f''_i)` at depth `r`; the primed row is trivial when `r = 1`.
pub fn q_xi_seed(xi: &HeightFunction, r: i64) -> Result<TrackedSeed> {
    let q = build_q_xi(xi);
    let labels = q
        .names()
        .iter()
        .map(|v| {
            let (body, pick) = if let Some(b) = v.strip_suffix(PRIME) {
                (b, 0)
            } else if let Some(b) = v.strip_suffix(DPRIME) {
                (b, 2)
            } else {
                (v.as_str(), 1)
            };
            let i: usize = body.parse().map_err(|_| Error::NoSuchVertex(v.clone()))?;
            let (lo, x, up) = frozen_and_initial_labels(xi, i, r)?;
            Ok([lo, x, up][pick].clone())
        })
        .collect::<Result<Vec<_>>>()?;
    TrackedSeed::new(q, labels, CartanData::new(xi.n()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseMatch {
    pub id: String,
    pub monomial: YMonomial,
}

struct Bracket<'a> {
    spec: &'a GhlSpec,
    xi: &'a HeightFunction,
    t: TProfile,
    n: usize,
    r: i64,
}

impl Bracket<'_> {
    /// `(Y[i,a])_{r,s}`, empty for nodes outside `[1,n]`.
    fn yrs(&self, i: usize, a: i64, s: i64) -> Result<YMonomial> {
        if i < 1 || i > self.n {
            return Ok(YMonomial::one());
        }
        shifted_kr(i, a, self.r, s)
    }

    /// `(Y[i,a])_len`, empty for nodes outside `[1,n]`.
    fn ylen(&self, i: usize, a: i64, len: i64) -> Result<YMonomial> {
        if i < 1 || i > self.n {
            return Ok(YMonomial::one());
        }
        kr_string(i, a, len)
    }

    fn wt(&self, x: usize) -> Result<YMonomial> {
        omega_tilde_upto(self.spec, x)
    }

    fn hat(&self, j: usize) -> Result<usize> {
        self.xi.hat(j, self.spec.idx[0])
    }
}

fn pick(table: Vec<(&str, bool)>, what: &str) -> Result<String> {
    let hits: Vec<&str> = table.iter().filter(|c| c.1).map(|c| c.0).collect();
    match hits.as_slice() {
        [one] => Ok(one.to_string()),
        [] => Err(Error::NoCase(format!("{what}: no guard holds among {:?}", table))),
        _ => Err(Error::NoCase(format!("{what}: guards {hits:?} overlap"))),
    }
}

/// Closed form for the label at `(j, r+s)` once the primed sequence reaches it.
pub fn closed_x_bracket(spec: &GhlSpec, xi: &HeightFunction, j: usize, s: i64) -> Result<CaseMatch> {
    spec.validate()?;
    let b = Bracket { spec, xi, t: spec.t_profile()?, n: xi.n(), r: spec.r };
    let i1 = spec.idx[0];
    let ik = spec.ik();
    let tj = b.t.at(j);
    let jb = xi.bullet(j);
    let i1b = xi.bullet(i1);
    let jb1 = if jb == i1b { i1 } else { jb + 1 };
    let up = xi.rises(j);
    let at = |x: usize| xi.at(x);
    let (c_i1b, c_i1) = (jb == i1b, jb == i1);
    let c_after = i1 < jb && jb != i1b;
    let where_ = format!("j={j}, s={s}");
    let dj1 = |x: usize| if x == 0 { true } else { xi.d(x - 1) };

    if up && j >= i1 && j <= ik {
        if s == 0 {
            let d = xi.d(j);
            let id = pick(
                vec![("1a", tj == 0 && d), ("1b", !d), ("1c", tj > 0 && d), ("1d", tj < 0 && d)],
                &where_,
            )?;
            let w = b.wt(jb1)?;
            let tail = match id.as_str() {
                "1a" => YMonomial::one(),
                "1b" => b.yrs(j + 1, at(j + 1) + 1, 0)?,
                "1c" => b.yrs(j + 1, at(j + 1) + 1, 1)?,
                _ => b.yrs(j + 1, at(j + 1) + 1, -1)?,
            };
            return Ok(CaseMatch { id, monomial: w.mul(&tail) });
        }
        let tjb1 = b.t.at(jb1);
        let dprev = c_after && dj1(jb);
        if s > 0 {
            if s > tj {
                return Err(Error::NoCase(format!("{where_}: s exceeds t_j={tj}")));
            }
            let id = pick(
                vec![("2a", c_i1b), ("2b", c_i1), ("2c", c_after && !dprev), ("2d", dprev)],
                &where_,
            )?;
            let mid = b.ylen(jb1, at(jb1 + 1) - 2 * (tjb1 + 1), tjb1 - s + 1)?;
            let tail = b.yrs(j + 1, at(j + 1) + 1, s)?;
            let lead = match id.as_str() {
                "2a" => b.yrs(i1.wrapping_sub(1), at(i1 - 1) + 1, s - 1)?,
                "2b" => b.yrs(i1, at(i1) + 1, s)?,
                "2c" => b.wt(b.hat(jb)?)?.mul(&b.yrs(jb, at(jb) - 1, s - 1)?),
                _ => b
                    .wt(b.hat(jb)?)?
                    .pow(step(StepKind::Q, b.t.at(jb), s))
                    .mul(&b.yrs(jb, at(jb) + 1, s)?),
            };
            return Ok(CaseMatch { id, monomial: lead.mul(&mid).mul(&tail) });
        }
        if s < tj {
            return Err(Error::NoCase(format!("{where_}: s below t_j={tj}")));
        }
        let id = pick(
            vec![("3a", c_i1b), ("3b", c_i1), ("3c", c_after && !dprev), ("3d", dprev)],
            &where_,
        )?;
        let mid = b.ylen(j, at(j + 1) + 2 * (b.r + tj), s - tj + 1)?;
        let tail = b.yrs(j + 1, at(j + 1) + 1, tj - 1)?;
        let lead = match id.as_str() {
            "3a" => b.yrs(i1.wrapping_sub(1), at(i1 - 1) + 1, tj)?,
            "3b" => b.yrs(jb, at(jb) + 1, tj - 1)?,
            "3c" => b.wt(b.hat(jb)?)?.mul(&b.yrs(jb, at(jb) - 1, tj)?),
            _ => b
                .wt(b.hat(jb)?)?
                .pow(step(StepKind::P, b.t.at(jb), s))
                .mul(&b.yrs(jb, at(jb) + 1, tj - 1)?),
        };
        return Ok(CaseMatch { id, monomial: lead.mul(&mid).mul(&tail) });
    }
    if !up && j >= i1 && j <= ik + 1 {
        let tj1 = b.t.at(j - 1);
        let d = xi.d(j);
        let dm = dj1(j);
        let id = pick(
            vec![
                ("4a", s == 0 && d),
                ("4b", s == 0 && !d),
                ("4c", s != 0 && !dm),
                ("4d", s != 0 && s == tj1 && dm),
                ("4e", 0 < s && s < tj1 && dm),
                ("4f", tj1 < s && s < 0 && dm),
            ],
            &where_,
        )?;
        let m = match id.as_str() {
            "4a" => b.wt(jb1)?,
            "4b" => b.wt(jb1)?.mul(&b.yrs(j + 1, at(j + 1) - 1, 0)?),
            "4c" => b.wt(b.hat(j)?)?.mul(&b.yrs(j, at(j) - 1, s)?),
            "4d" => b.wt(b.hat(j)?)?,
            "4e" => b.wt(b.hat(j)?)?.mul(&b.yrs(j, at(j) + 1, s + 1)?),
            _ => b.wt(b.hat(j)?)?.mul(&b.yrs(j, at(j) + 1, s - 1)?),
        };
        return Ok(CaseMatch { id, monomial: m });
    }
    Err(Error::NoCase(format!("{where_}: column outside the slope ranges")))
}

/// A factor of a predicted relation, named in the initial cluster of the height-function seed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Factor {
    Lower(usize),
    X(usize),
    Upper(usize),
    /// `x[alpha_{i,j}]`
    Alpha(usize, usize),
}

/// `lhs[0] * lhs[1] = prod(side_a) + prod(side_b)`
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relation {
    pub name: String,
    pub lhs: [Factor; 2],
    pub side_a: Vec<Factor>,
    pub side_b: Vec<Factor>,
}

fn push_if(v: &mut Vec<Factor>, f: Factor, n: usize, e: bool) {
    let node_ok = match f {
        Factor::Lower(i) | Factor::X(i) | Factor::Upper(i) => i >= 1 && i <= n,
        Factor::Alpha(i, j) => i >= 1 && i <= j && j <= n,
    };
    if e && node_ok {
        v.push(f);
    }
}

/// Exchange relations for mutating `i..=j` in the height-function seed, one per step.
pub fn mutation_relations(xi: &HeightFunction, i: usize, j: usize) -> Result<Vec<Relation>> {
    let n = xi.n();
    if i < 1 || i > j || j > n {
        return Err(Error::InvalidIndices(format!("need 1 <= i <= j <= n, got {i},{j}")));
    }
    let mut out = Vec::new();
    let di = xi.d(i);
    let mut a = Vec::new();
    let mut bb = Vec::new();
    push_if(&mut a, Factor::Lower(i), n, true);
    push_if(&mut a, Factor::Upper(i), n, true);
    push_if(&mut a, Factor::X(i + 1), n, !di);
    push_if(&mut bb, Factor::X(i.wrapping_sub(1)), n, true);
    push_if(&mut bb, Factor::Lower(i + 1), n, !di);
    push_if(&mut bb, Factor::Upper(i + 1), n, !di);
    push_if(&mut bb, Factor::X(i + 1), n, di);
    out.push(Relation {
        name: format!("x[{i},{i}]"),
        lhs: [Factor::X(i), Factor::Alpha(i, i)],
        side_a: a,
        side_b: bb,
    });
    let ib = xi.bullet(i);
    for jj in i + 1..=j {
        let dj = xi.d(jj);
        let dprev = xi.d(jj - 1);
        let jb = xi.bullet(jj);
        let mut a = Vec::new();
        push_if(&mut a, Factor::Alpha(i, jj - 1), n, true);
        push_if(&mut a, Factor::Lower(jj), n, dprev);
        push_if(&mut a, Factor::Upper(jj), n, dprev);
        push_if(&mut a, Factor::X(jj + 1), n, !dj);
        let mut bb = Vec::new();
        push_if(&mut bb, Factor::Lower(jj + 1), n, !dj);
        push_if(&mut bb, Factor::Upper(jj + 1), n, !dj);
        push_if(&mut bb, Factor::X(jj + 1), n, dj);
        if jb == i {
            push_if(&mut bb, Factor::Lower(i), n, true);
            push_if(&mut bb, Factor::Upper(i), n, true);
        } else if jb == ib {
            push_if(&mut bb, Factor::X(i.wrapping_sub(1)), n, true);
        } else {
            let e = jb >= 1 && xi.d(jb - 1);
            push_if(&mut bb, Factor::Lower(jb), n, e);
            push_if(&mut bb, Factor::Upper(jb), n, e);
            push_if(&mut bb, Factor::Alpha(i, jb - 1), n, true);
        }
        out.push(Relation {
            name: format!("x[{i},{jj}]"),
            lhs: [Factor::X(jj), Factor::Alpha(i, jj)],
            side_a: a,
            side_b: bb,
        });
    }
    Ok(out)
}

/// The recursion `x[i,j] x[j+1,j+1] = x[i,j+1] + correction`, defined when `j` and `j+1`
/// are their own diamonds.
pub fn recursion_relation(xi: &HeightFunction, i: usize, j: usize) -> Result<Relation> {
    let n = xi.n();
    if i < 1 || i > j || j + 1 > n {
        return Err(Error::InvalidIndices(format!("need 1 <= i <= j < n, got {i},{j}")));
    }
    if !xi.d(j) || !xi.d(j + 1) {
        return Err(Error::InvalidSpec(format!("guard fails: d_{j} and d_{} must be 1", j + 1)));
    }
    let jb = xi.bullet(j);
    let mut b = Vec::new();
    if jb == xi.bullet(i) {
        push_if(&mut b, Factor::X(i.wrapping_sub(1)), n, true);
    } else if jb == i {
        push_if(&mut b, Factor::Lower(i), n, true);
        push_if(&mut b, Factor::Upper(i), n, true);
    } else {
        push_if(&mut b, Factor::Alpha(i, jb - 1), n, true);
        let e = xi.d(jb - 1);
        push_if(&mut b, Factor::Lower(jb), n, e);
        push_if(&mut b, Factor::Upper(jb), n, e);
    }
    push_if(&mut b, Factor::X(j + 2), n, true);
    Ok(Relation {
        name: format!("rec[{i},{j}]"),
        lhs: [Factor::Alpha(i, j), Factor::Alpha(j + 1, j + 1)],
        side_a: vec![Factor::Alpha(i, j + 1)],
        side_b: b,
    })
}

/// Highest weight of a factor at depth `r`, in the unshifted frame.
pub fn factor_monomial(xi: &HeightFunction, f: Factor, r: i64) -> Result<YMonomial> {
    Ok(match f {
        Factor::Lower(i) => frozen_and_initial_labels(xi, i, r)?.0,
        Factor::X(i) => frozen_and_initial_labels(xi, i, r)?.1,
        Factor::Upper(i) => frozen_and_initial_labels(xi, i, r)?.2,
        Factor::Alpha(i, j) => closed_x_alpha(xi, i, j, r)?,
    })
}

pub fn product_monomial(xi: &HeightFunction, fs: &[Factor], r: i64) -> Result<YMonomial> {
    let mut m = YMonomial::one();
    for &f in fs {
        m = m.mul(&factor_monomial(xi, f, r)?);
    }
    Ok(m)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationInstance {
    pub relation: Relation,
    pub lhs: YMonomial,
    pub side_a: YMonomial,
    pub side_b: YMonomial,
}

/// The relations for `i..=j` with every factor resolved to a monomial, plus the recursion
/// wherever its guard holds.
pub fn exchange_predictions(xi: &HeightFunction, i: usize, j: usize, r: i64) -> Result<Vec<RelationInstance>> {
    let mut rels = mutation_relations(xi, i, j)?;
    if j < xi.n() && xi.d(j) && xi.d(j + 1) {
        rels.push(recursion_relation(xi, i, j)?);
    }
    rels.into_iter()
        .map(|rel| {
            Ok(RelationInstance {
                lhs: product_monomial(xi, &rel.lhs, r)?,
                side_a: product_monomial(xi, &rel.side_a, r)?,
                side_b: product_monomial(xi, &rel.side_b, r)?,
                relation: rel,
            })
        })
        .collect()
}

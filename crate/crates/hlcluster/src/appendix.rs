//! Arrow configurations at each vertex of the primed sequence, transcribed as data:
//! every case is a list of arrows at grid offsets with coefficient functions.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gridseeds::grid_name;
use crate::heights::{step, HeightFunction, StepKind, TProfile};
use crate::hl::GhlSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CaseId {
    C1,
    C2,
    /// `s = 0` with `t_{i_1} >= 1`
    C3Base,
    /// `1 <= s < t_{i_1}`
    C3,
    C4,
    C5,
    C6,
    C7,
    C8,
    C9,
    C10,
}

impl CaseId {
    pub fn number(self) -> u8 {
        match self {
            CaseId::C1 => 1,
            CaseId::C2 => 2,
            CaseId::C3Base | CaseId::C3 => 3,
            CaseId::C4 => 4,
            CaseId::C5 => 5,
            CaseId::C6 => 6,
            CaseId::C7 => 7,
            CaseId::C8 => 8,
            CaseId::C9 => 9,
            CaseId::C10 => 10,
        }
    }
}

/// Which case applies at a vertex, and whether it is read through the row reflection.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CaseKey {
    pub case: CaseId,
    pub mirrored: bool,
    /// The orientation-reversed form of case 1.
    pub reversed: bool,
}

/// One arrow at `(col, r + row)`; `out` means it leaves the vertex under study.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct CaseArrow {
    col: i64,
    row: i64,
    out: bool,
    mult: i64,
}

/// The data a case configuration reads: slopes, d-flags, bullets, t-values and `s`, all after
/// the optional reflection `t -> -t`, `s -> -s`.
struct Ctx<'a> {
    xi: &'a HeightFunction,
    t: &'a TProfile,
    tail: Option<(usize, i64)>,
    sign: i64,
    i1: i64,
    j: i64,
    s: i64,
}

fn delta(a: i64, b: i64) -> i64 {
    (a == b) as i64
}

impl Ctx<'_> {
    fn n(&self) -> i64 {
        self.xi.n() as i64
    }

    fn d(&self, x: i64) -> i64 {
        (x >= 1 && x <= self.n() && self.xi.d(x as usize)) as i64
    }

    fn bullet(&self, x: i64) -> i64 {
        if x < 1 || x > self.n() {
            return 0;
        }
        self.xi.bullet(x as usize) as i64
    }

    fn t(&self, x: i64) -> i64 {
        if x < 1 {
            return 0;
        }
        let raw = match self.tail {
            Some((c, rk)) if c as i64 == x => rk,
            _ => self.t.at(x as usize),
        };
        self.sign * raw
    }

    fn falls_at(&self, x: i64) -> bool {
        x >= 1 && x <= self.n() && !self.xi.rises(x as usize)
    }

    /// `max{x : i_1 <= x < j, xi(x) = xi(x+1) + 1}`
    fn big_x(&self) -> Option<i64> {
        (self.i1..self.j).rev().find(|&x| self.falls_at(x))
    }
}

fn p(x: i64, t: i64) -> i64 {
    step(StepKind::P, x, t)
}

fn q(x: i64, t: i64) -> i64 {
    step(StepKind::Q, x, t)
}

fn out(col: i64, row: i64, mult: i64) -> CaseArrow {
    CaseArrow { col, row, out: true, mult }
}

fn inn(col: i64, row: i64, mult: i64) -> CaseArrow {
    CaseArrow { col, row, out: false, mult }
}

fn case_arrows(c: &Ctx, id: CaseId) -> Result<Vec<CaseArrow>> {
    let (i1, j, s) = (c.i1, c.j, c.s);
    let jb = c.bullet(j);
    let i1b = c.bullet(i1);
    let tj = c.t(j);
    Ok(match id {
        CaseId::C1 => {
            let di = c.d(i1);
            vec![
                inn(i1, -1, 1),
                out(i1 - 1, 0, 1),
                out(i1 + 1, 0, di),
                out(i1 + 1, -1, 1 - di),
                out(i1 + 1, 1, 1 - di),
                inn(i1 + 1, 0, 1 - di),
                inn(i1, 1, 1),
            ]
        }
        CaseId::C2 => {
            let t = c.t(i1);
            vec![
                inn(i1 - 1, t - 1, 1),
                out(i1 - 1, t, 1),
                out(i1 + 1, t + 1, 1),
                out(i1, t - 1, 1),
                inn(i1 + 1, t, 1),
                inn(i1, t + 1, 1),
            ]
        }
        CaseId::C3Base => {
            let di = c.d(i1);
            let t = c.t(i1);
            vec![
                inn(i1, -1, 1),
                out(i1 + 1, -1, 1 - di),
                out(i1 + 1, 0, di),
                out(i1, 1, 1),
                inn(i1 + 1, 0, 1 - di),
                inn(i1 + 1, 1, di),
                inn(i1, t + 1, 1),
            ]
        }
        CaseId::C3 => {
            let t = c.t(i1);
            vec![
                inn(i1 - 1, s - 1, 1),
                out(i1, s - 1, 1),
                out(i1, s + 1, 1),
                inn(i1 + 1, s, 1),
                inn(i1, t + 1, 1),
            ]
        }
        CaseId::C4 => {
            let g = (1 - delta(i1b, jb) - delta(i1, jb)) * c.d(jb - 1);
            let a1 = g * p(0, c.t(jb)) + delta(i1, jb);
            let a2 = g * q(0, c.t(jb)) + delta(i1, jb);
            let (dj, dm) = (c.d(j), c.d(j - 1));
            vec![
                inn(j, -1, dm),
                inn(j - 1, 0, 1),
                out(jb, -1, a1),
                out(jb, 1, a2),
                out((i1 - 1).max(jb - 1), 0, 1 - delta(i1, jb)),
                out(j + 1, -1, 1 - dj),
                out(j + 1, 1, 1 - dj),
                out(j + 1, 0, dj),
                inn(j + 1, 0, 1 - dj),
                inn(j, 1, dm),
            ]
        }
        CaseId::C5 => {
            let g = 1 - delta(i1b, jb) - delta(i1, jb);
            let a = g * c.d(jb - 1) * p(0, c.t(jb)) + delta(i1, jb);
            let b = g * q(0, c.t(jb));
            let (dj, dm) = (c.d(j), c.d(j - 1));
            vec![
                inn(j, -1, dm),
                inn(j - 1, 0, 1),
                out(i1.max(jb), -1, a),
                out(jb - 1, 0, b),
                out(j + 1, -1, 1 - dj),
                out(j + 1, 0, dj),
                out(j, 1, 1),
                inn(j + 1, 0, 1 - dj),
                inn(j + 1, 1, dj),
                inn(j, tj + 1, dm),
            ]
        }
        CaseId::C6 | CaseId::C7 => {
            let dm = c.d(j - 1);
            let tm = c.t(j - 1);
            let a = dm * q(tm, s) * (1 - delta(1, s));
            let b = dm * q(tm, s) * delta(1, s);
            let cc = dm * p(tm, s - 1) + (1 - dm);
            let mut v = vec![inn(j - 2, s - 1, b), inn(j - 1, s - 1, a), inn(j - 1, s, cc), out(j, s - 1, 1), inn(j + 1, s, 1)];
            if id == CaseId::C6 {
                v.extend([out(j, s + 1, 1), out(jb, s, delta(s, c.t(jb))), inn(j, tj + 1, dm)]);
            } else {
                let tjb = c.t(jb);
                let d = (1 - delta(i1, jb) - delta(i1b, jb)) * p(tjb, s) * c.d(jb - 1) + delta(i1, jb);
                v.extend([
                    out(j + 1, s + 1, 1),
                    out(jb, s, (1 - delta(i1b, jb)) * q(tjb, s)),
                    out(i1 - 1, s, delta(i1b, jb)),
                    out(jb, s + 1, d),
                    inn(j, s + 1, dm),
                ]);
            }
            v
        }
        CaseId::C8 => {
            let dm = c.d(j - 1);
            let tm = c.t(j - 1);
            let tjb = c.t(jb);
            let k = delta(i1, jb) + (1 - delta(i1b, jb) - delta(i1, jb)) * c.d(jb - 1);
            let dj = c.d(j);
            vec![
                inn(jb, tjb - 1, k * q(-1, tjb)),
                inn(jb, -1, k * p(0, tjb)),
                inn(j + 1, -1, 1 - dj),
                inn((i1 - 1).max(jb - 1), 0, 1 - delta(i1, jb)),
                out(j, -1, dm * p(0, tm)),
                out(j - 1, 0, 1),
                out(j + 1, 0, 1 - dj),
                out(j, 1, dm * q(0, tm)),
                inn(j + 1, 0, dj),
                inn(jb, 1, k * q(0, tjb)),
                inn(j + 1, 1, 1 - dj),
                inn(jb, tjb + 1, k * p(1, tjb)),
            ]
        }
        CaseId::C9 | CaseId::C10 => {
            let x = c
                .big_x()
                .ok_or_else(|| Error::NoCase(format!("no falling column in [{i1}, {j})")))?;
            let y = x - 1;
            let (tx, ty) = (c.t(x), c.t(y));
            let dm = c.d(j - 1);
            let dm2 = c.d(j - 2);
            let dx = c.d(x - 1);
            let tm = c.t(j - 1);
            let di1 = c.d(i1);
            let xi1 = delta(i1, x);
            let to_xm1 = (1 - xi1) * dx * p(0, tx) + xi1;
            let to_y = (1 - xi1) * dx * q(0, ty);
            let g = dm * delta(i1b, c.bullet(j - 1)) * delta(tj, s);
            if id == CaseId::C9 {
                let b = dx * dm * (delta(1, tx) + p(2, tx) * delta(1, tj)) + dm * (1 - xi1) * (1 - dx) * delta(1, tj);
                let cc = (1 - dm) * p(1, tm);
                let d = dm * p(2, tm)
                    + (1 - dm) * ((1 - di1) * delta(j - 1, i1) + (1 - delta(j - 1, i1)) * dm2 * q(1, tm));
                let e = (1 - xi1) * dx * dm * delta(1, tj) * q(1, tx) + xi1 * dm * delta(1, tj);
                let f = (1 - dm) + dm * p(2, tm);
                vec![
                    inn(j - 1, 0, 1),
                    out(x, -1, to_xm1),
                    out(y, 0, to_y),
                    out(x, 1, b),
                    out(i1 - 1, 1, g),
                    out(j - 1, 1, cc),
                    out(j + 1, 1, 1),
                    out(j - 1, 2, d),
                    out(x, 2, e),
                    inn(j, 2, f),
                ]
            } else {
                let a = (1 - dm) * dm2 * p(1, tm) * p(tm, s - 1) + dm * dx * p(tx.min(tm), s) * p(1, tx);
                let b = (1 - dm) * q(tm, s);
                let cc = (1 - xi1) * dx * dm * delta(s, tj) * p(tx, tj) + xi1 * dm * delta(s, tj);
                let d = dm * (1 - delta(s, tj))
                    + (1 - dm) * ((1 - di1) * delta(j - 1, i1) + (1 - delta(j - 1, i1)) * dm2 * p(tm, s));
                let e = dm * (1 - xi1) * (1 - dx) * delta(s, tj);
                let f = (1 - dm) + dm * p(s + 1, tm);
                vec![
                    inn(j, s - 1, 1),
                    out(x, tj, e),
                    out(i1 - 1, tj, g),
                    out(x, tx.min(tm), a),
                    out(x, -1, to_xm1),
                    out(y, 0, to_y),
                    out(j - 1, s, b),
                    out(j + 1, s, 1),
                    out(j - 1, s + 1, d),
                    out(x, tj + 1, cc),
                    inn(j, s + 1, f),
                ]
            }
        }
    })
}

/// Chooses the case at `(j, r+s)`, reading configurations with `s < 0`, or `s = 0` and
/// `t_j < 0`, through the reflection.
fn classify(xi: &HeightFunction, t: &TProfile, tail: Option<(usize, i64)>, i1: usize, j: usize, s: i64) -> Result<CaseKey> {
    let base = Ctx { xi, t, tail, sign: 1, i1: i1 as i64, j: j as i64, s };
    let tj = base.t(j as i64);
    let mirrored = s < 0 || (s == 0 && tj < 0);
    let (tj, s) = if mirrored { (-tj, -s) } else { (tj, s) };
    let rises = xi.rises(j);
    let case = if j == i1 {
        match (rises, tj, s) {
            (_, 0, 0) => CaseId::C1,
            (true, t, 0) if t >= 1 => CaseId::C3Base,
            (true, t, s) if s == t => CaseId::C2,
            (true, t, s) if t > s && s >= 1 => CaseId::C3,
            _ => return Err(Error::NoCase(format!("j=i1={j}, t={tj}, s={s}, rises={rises}"))),
        }
    } else if rises {
        match (tj, s) {
            (0, 0) => CaseId::C4,
            (t, 0) if t >= 1 => CaseId::C5,
            (t, s) if s >= 1 && t > s => CaseId::C6,
            (t, s) if s >= 1 && t == s => CaseId::C7,
            _ => return Err(Error::NoCase(format!("j={j}, t={tj}, s={s}, rising"))),
        }
    } else {
        match (tj, s) {
            (t, 0) if t >= 0 => CaseId::C8,
            (t, 1) if t >= 1 => CaseId::C9,
            (t, s) if t >= 2 && s >= 2 && t >= s => CaseId::C10,
            _ => return Err(Error::NoCase(format!("j={j}, t={tj}, s={s}, falling"))),
        }
    };
    let reversed = case == CaseId::C1 && !rises;
    Ok(CaseKey { case, mirrored, reversed })
}

/// The arrows a case predicts at `(j, r+s)`, as `neighbor -> b[v][neighbor]`, restricted to
/// vertices of a grid with `n` columns and rows `1..=ell+1`.
pub fn predicted_incidence(
    xi: &HeightFunction,
    spec: &GhlSpec,
    ell: i64,
    j: usize,
    s: i64,
) -> Result<(CaseKey, BTreeMap<String, i64>)> {
    let t = spec.t_profile()?;
    let n = xi.n();
    let tail = spec.has_tail(n).then(|| (spec.ik() + 1, spec.rs[spec.k() - 1]));
    let i1 = spec.idx[0];
    let key = classify(xi, &t, tail, i1, j, s)?;
    let sign = if key.mirrored { -1 } else { 1 };
    let ctx = Ctx { xi, t: &t, tail, sign, i1: i1 as i64, j: j as i64, s: sign * s };
    let mut out = BTreeMap::new();
    for a in case_arrows(&ctx, key.case)? {
        if a.mult == 0 {
            continue;
        }
        let row = spec.r + sign * a.row;
        if a.col < 1 || a.col > n as i64 || row < 1 || row > ell + 1 {
            continue;
        }
        let flip = a.out != key.reversed;
        *out.entry(grid_name(a.col as usize, row)).or_insert(0) += if flip { a.mult } else { -a.mult };
    }
    out.retain(|_, m| *m != 0);
    Ok((key, out))
}

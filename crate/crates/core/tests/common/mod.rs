//! Brute-force oracles built only on field arithmetic and exhaustive search.
#![allow(dead_code)]

use std::collections::HashSet;

use quatram::localfield::{Elem, Field, Val};
use quatram::ResidueElem;

/// All `Σ_{j<m} ω̃_j π^j` with Teichmüller digits.
pub fn integral_elems(k: &Field, m: i64) -> Vec<Elem> {
    let pi = Elem::uniformizer(k);
    let digits: Vec<Option<ResidueElem>> = std::iter::once(None)
        .chain(k.residue().nonzero().map(Some))
        .collect();
    let mut out = vec![Elem::zero(k)];
    for j in 0..m {
        let p = pi.pow(j);
        let mut next = Vec::with_capacity(out.len() * digits.len());
        for x in &out {
            for d in &digits {
                next.push(match d {
                    None => x.clone(),
                    Some(a) => x.add(&Elem::teichmuller(k, *a).mul(&p)),
                });
            }
        }
        out = next;
    }
    out
}

/// First `n` Teichmüller digits of an integral element.
pub fn digits(x: &Elem, n: i64) -> Vec<u32> {
    let k = x.field().clone();
    let pi = Elem::uniformizer(&k);
    let mut cur = x.clone();
    let mut out = Vec::with_capacity(n as usize);
    for _ in 0..n {
        if cur.is_zero_to_precision() {
            out.push(0);
            continue;
        }
        let r = cur.residue_integral().expect("integral");
        out.push(r.0);
        if r.0 != 0 {
            cur = cur.sub(&Elem::teichmuller(&k, r));
        }
        cur = cur.div(&pi).expect("divide by π");
    }
    out
}

/// Squares of units modulo `π^{2e+1}`, which decide squareness of units.
pub struct SquareOracle {
    pub field: Field,
    n: i64,
    table: HashSet<Vec<u32>>,
}

impl SquareOracle {
    pub fn new(k: &Field) -> Self {
        let n = 2 * k.e_abs() as i64 + 1;
        let e = k.e_abs() as i64;
        // z mod π^{e+1} fixes z² mod π^{2e+1}
        let table = integral_elems(k, e + 1)
            .iter()
            .filter(|z| matches!(z.valuation(), Ok(Val::Fin(0))))
            .map(|z| digits(&z.square(), n))
            .collect();
        Self {
            field: k.clone(),
            n,
            table,
        }
    }

    /// `None` when `w` is zero to the working precision.
    pub fn is_square(&self, w: &Elem) -> Option<bool> {
        let t = match w.valuation() {
            Ok(Val::Fin(t)) => t,
            _ => return None,
        };
        if t.rem_euclid(2) != 0 {
            return Some(false);
        }
        let pi = Elem::uniformizer(&self.field);
        let unit = if t >= 0 {
            w.div(&pi.pow(t)).ok()?
        } else {
            w.mul(&pi.pow(-t))
        };
        Some(self.table.contains(&digits(&unit, self.n)))
    }
}

/// `(u, v) = 1` iff `v·(x² − u y²)` is a square for some primitive `(x, y)`;
/// scaling reduces to `x = 1` or `y = 1`.
pub fn brute_hilbert(sq: &SquareOracle, u: &Elem, v: &Elem) -> i8 {
    let k = &sq.field;
    let e = k.e_abs() as i64;
    let one = Elem::one(k);
    let m = 4 * e + 1;
    for t in integral_elems(k, m) {
        let t2 = t.square();
        for w in [one.sub(&u.mul(&t2)), t2.sub(u)] {
            if sq.is_square(&v.mul(&w)) == Some(true) {
                return 1;
            }
        }
    }
    -1
}

/// `max_x min(v(u x² − 1), 2e + 1)` over units `x mod π^{e+1}`, for a unit `u`;
/// `0` for odd valuation.
pub fn brute_defect(u: &Elem) -> i64 {
    let k = u.field();
    let e = k.e_abs() as i64;
    let cap = 2 * e + 1;
    let vu = u.val().expect("nonzero");
    if vu.rem_euclid(2) == 1 {
        return 0;
    }
    let pi = Elem::uniformizer(k);
    let u = if vu >= 0 {
        u.div(&pi.pow(vu)).unwrap()
    } else {
        u.mul(&pi.pow(-vu))
    };
    let one = Elem::one(k);
    let mut best = 0;
    for x in integral_elems(k, e + 1) {
        if !matches!(x.valuation(), Ok(Val::Fin(0))) {
            continue;
        }
        let v = match u.mul(&x.square()).sub(&one).valuation() {
            Ok(Val::Fin(v)) => v.min(cap),
            _ => cap,
        };
        best = best.max(v);
    }
    best
}

/// `def` capped the same way as [`brute_defect`].
pub fn capped_defect(x: &Elem) -> i64 {
    let cap = 2 * x.field().e_abs() as i64 + 1;
    match quatram::squares::defect(x).unwrap().value {
        Val::Fin(d) => d.min(cap),
        Val::Inf => cap,
    }
}

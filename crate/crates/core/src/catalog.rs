//! The sets `R_i^e` of admissible ramification triples and a witness
//! generator realizing each triple over a field containing `√−1`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::localfield::{adjoin_sqrt, Elem, Field};
use crate::quaternion::{embeddable, normalize_uv, QuaternionData, QuaternionSetup};
use crate::ramify::{ClassTag, RamTriple};
use crate::residue::ResidueElem;
use crate::squares::lambda0;
use crate::symbols::hilbert_symbol;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CatalogTriple {
    pub tag: ClassTag,
    pub e: i64,
    pub s1: i64,
    pub s2: i64,
    pub s3: i64,
    pub stable: bool,
}

impl CatalogTriple {
    pub fn triple(&self) -> RamTriple {
        RamTriple {
            tag: self.tag,
            s1: self.s1,
            s2: self.s2,
            s3: self.s3,
        }
    }
}

pub fn s1_values(e: i64) -> Vec<i64> {
    (1..2 * e).step_by(2).collect()
}

/// `m_i(s1)`.
pub fn m_bound(tag: ClassTag, e: i64, s1: i64) -> i64 {
    match tag {
        ClassTag::Two => 4 * e - s1,
        _ => (2 * s1).min(4 * e - s1),
    }
}

/// `S_2^i(s1)`.
pub fn s2_values(tag: ClassTag, e: i64, s1: i64) -> Vec<i64> {
    let m = m_bound(tag, e, s1);
    (s1 + 1..=m)
        .filter(|&n| n == m || (n - s1).rem_euclid(4) == 0)
        .collect()
}

/// `(L_i, U_i)`.
pub fn bounds(tag: ClassTag, e: i64, s1: i64, s2: i64) -> (i64, i64) {
    match tag {
        ClassTag::OneStar => (7 * s1 - 2 * s2, 8 * e - 3 * s1),
        ClassTag::One => (5 * s1, 8 * e - 3 * s1),
        ClassTag::Two => (2 * s1 + 3 * s2, 8 * e - 2 * s1 - s2),
    }
}

pub fn stable_value(tag: ClassTag, e: i64, s1: i64, s2: i64) -> i64 {
    match tag {
        ClassTag::One => 4 * e + s1,
        ClassTag::Two => 4 * e + s2,
        ClassTag::OneStar => 4 * e + 2 * s1 - s2,
    }
}

/// Admissible `s3` with the stability flag.
pub fn s3_values(tag: ClassTag, e: i64, s1: i64, s2: i64) -> Vec<(i64, bool)> {
    let (lo, hi) = bounds(tag, e, s1, s2);
    if lo < hi {
        let si = if tag == ClassTag::Two { s2 } else { s1 };
        (lo..=hi)
            .filter(|&n| n == lo || n == hi || (n - si).rem_euclid(8) == 0)
            .map(|n| (n, false))
            .collect()
    } else {
        vec![(stable_value(tag, e, s1, s2), true)]
    }
}

pub fn member(tag: ClassTag, e: i64, s1: i64, s2: i64, s3: i64) -> bool {
    if e < 1 || s1 <= 0 || s1 >= 2 * e || s1 % 2 == 0 {
        return false;
    }
    let m = m_bound(tag, e, s1);
    if !(s1 < s2 && s2 <= m) || (s2 < m && (s2 - s1).rem_euclid(4) != 0) {
        return false;
    }
    let (lo, hi) = bounds(tag, e, s1, s2);
    if lo < hi {
        let si = if tag == ClassTag::Two { s2 } else { s1 };
        s3 == lo || s3 == hi || (lo < s3 && s3 < hi && (s3 - si).rem_euclid(8) == 0)
    } else {
        s3 == stable_value(tag, e, s1, s2)
    }
}

pub fn enumerate(tag: ClassTag, e: i64) -> Vec<CatalogTriple> {
    let mut out = Vec::new();
    for s1 in s1_values(e) {
        for s2 in s2_values(tag, e, s1) {
            for (s3, stable) in s3_values(tag, e, s1, s2) {
                out.push(CatalogTriple {
                    tag,
                    e,
                    s1,
                    s2,
                    s3,
                    stable,
                });
            }
        }
    }
    out.sort_by_key(|t| (t.s1, t.s2, t.s3));
    out
}

/// One-break triples with `s3 = 3·s1`.
pub fn hasse_arf_exceptions(e: i64) -> Vec<CatalogTriple> {
    let mut out = Vec::new();
    for tag in [ClassTag::OneStar, ClassTag::One] {
        for t in enumerate(tag, e) {
            if t.s3 == 3 * t.s1 {
                assert_eq!(t.tag, ClassTag::OneStar, "exception outside 1*: {t:?}");
                assert_eq!(t.s2, m_bound(tag, e, t.s1), "second refined break not maximal: {t:?}");
                out.push(t);
            }
        }
    }
    out
}

/// Which construction a witness follows.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RecipeCase {
    /// Two breaks, `s2 + 3s1 < 4e`: any `u`, `v` of the right defects.
    TwoBreakFree,
    /// Two breaks otherwise: `v = N_{K(√u)/K}(ν)`.
    TwoBreakNorm,
    /// One break, `s1 < e`: `u = 1 + β`, `v = 1 + (ω+μ)²β`.
    OneBreakFree,
    /// One break, `e < s1 < 3e/2`: `v` corrected by a norm from `K(√u)`.
    OneBreakNormCorrected,
    /// One break, `s1 ≥ 3e/2`: `v_0 ∈ {1 + ω²β, 1 + ω²β − 4λ/β}`, then a norm correction.
    OneBreakHigh,
}

#[derive(Clone, Debug)]
pub struct WitnessRecipe {
    pub target: CatalogTriple,
    pub case: RecipeCase,
    /// `v_K(u − 1) = 2e − s1`.
    pub u_level: i64,
    /// Defect of `v` (two breaks) or of `v/(1+4λ)` (one break).
    pub v_defect: i64,
    /// Allowed roots of unity (one break).
    pub omegas: Vec<ResidueElem>,
    /// `v(μ)` when fixed, `None` when `s2` sits at its bound.
    pub mu_valuation: Option<i64>,
    /// Target `s3`, reached by searching `k`.
    pub k_target: i64,
    field: Field,
}

pub fn witness(field: &Field, t: &CatalogTriple) -> Result<WitnessRecipe> {
    let e = field.e_abs() as i64;
    if t.e != e || !member(t.tag, e, t.s1, t.s2, t.s3) {
        return Err(Error::NotInCatalog);
    }
    if !field.contains_i()? {
        return Err(Error::RequiresI);
    }
    let (s1, s2) = (t.s1, t.s2);
    let res = field.residue();
    let (case, v_defect, omegas, mu_valuation) = match t.tag {
        ClassTag::Two => {
            let case = if s2 + 3 * s1 < 4 * e {
                RecipeCase::TwoBreakFree
            } else {
                RecipeCase::TwoBreakNorm
            };
            (case, 2 * e - (s1 + s2) / 2, vec![], None)
        }
        tag => {
            let want_cube = tag == ClassTag::OneStar;
            let omegas: Vec<ResidueElem> = res
                .nonzero()
                .filter(|&a| a != ResidueElem::ONE)
                .filter(|&a| res.is_cube_root_of_unity(a).unwrap() == want_cube)
                .collect();
            if omegas.is_empty() {
                return Err(Error::HypothesisViolation(format!(
                    "no root of unity of class {tag} in a residue field of degree {}",
                    res.degree()
                )));
            }
            let case = if s1 < e {
                RecipeCase::OneBreakFree
            } else if 2 * s1 < 3 * e {
                RecipeCase::OneBreakNormCorrected
            } else {
                RecipeCase::OneBreakHigh
            };
            let mu_valuation = if s2 < m_bound(tag, e, s1) {
                Some((s2 - s1) / 4)
            } else {
                None
            };
            (case, 2 * e - s1, omegas, mu_valuation)
        }
    };
    Ok(WitnessRecipe {
        target: *t,
        case,
        u_level: 2 * e - s1,
        v_defect,
        omegas,
        mu_valuation,
        k_target: t.s3,
        field: field.clone(),
    })
}

/// A realized witness: the pair, `k`, and the re-measured triple.
#[derive(Clone, Debug)]
pub struct WitnessOutcome {
    pub recipe_case: RecipeCase,
    pub u: Elem,
    pub v: Elem,
    pub k: Elem,
    pub data: QuaternionData,
    pub measured: RamTriple,
    pub matched: bool,
    /// Candidate pairs tried before success.
    pub tried: usize,
}

impl WitnessRecipe {
    pub fn field(&self) -> &Field {
        &self.field
    }

    /// `u = 1 + π^{2e−s1}` first, then variants of the same level.
    pub fn u_candidates(&self) -> Vec<Elem> {
        let k = &self.field;
        let one = Elem::one(k);
        let pi = Elem::uniformizer(k);
        let lead = pi.pow(self.u_level);
        let unram = one.add(&Elem::residue_lift(k, lambda0(k)).mul_int(4));
        let mut out = vec![one.add(&lead)];
        for a in k.residue().nonzero() {
            for tail in perturbations(k, 2) {
                let t = Elem::teichmuller(k, a).mul(&lead).mul(&one.add(&tail.mul(&pi)));
                out.push(one.add(&t));
                if self.target.tag == ClassTag::Two {
                    out.push(one.add(&t).mul(&unram));
                }
            }
        }
        out
    }

    /// Norms `N_{K(√u)/K}(1 + ω̃π_L^j)` used as corrections.
    fn norm_corrections(&self, u: &Elem, levels: impl Iterator<Item = i64>) -> Result<Vec<Elem>> {
        let k = &self.field;
        let l = adjoin_sqrt(k, u)?;
        let pl = Elem::uniformizer(&l);
        let one = Elem::one(&l);
        let mut out = Vec::new();
        for j in levels {
            for a in k.residue().nonzero() {
                let nu = if j == 0 {
                    pl.mul(&Elem::teichmuller(&l, a))
                } else {
                    one.add(&Elem::teichmuller(&l, a).mul(&pl.pow(j)))
                };
                out.push(nu.norm_step());
            }
        }
        Ok(out)
    }

    /// Candidate `v` in the order the construction prefers them.
    pub fn v_candidates(&self, u: &Elem) -> Result<Vec<Elem>> {
        let k = &self.field;
        let e = k.e_abs() as i64;
        let one = Elem::one(k);
        let pi = Elem::uniformizer(k);
        let u = u.clone();
        let lam4 = Elem::residue_lift(k, lambda0(k)).mul_int(4);
        let unram = one.add(&lam4);
        let mut out = Vec::new();
        match self.case {
            RecipeCase::TwoBreakFree | RecipeCase::TwoBreakNorm => {
                let d = self.v_defect;
                let lead = if d == 0 { pi.clone() } else { pi.pow(d) };
                let mut base = Vec::new();
                for a in k.residue().nonzero() {
                    let head = Elem::teichmuller(k, a).mul(&lead);
                    for tail in perturbations(k, 2) {
                        let t = head.mul(&one.add(&tail.mul(&pi)));
                        base.push(if d == 0 { t } else { one.add(&t) });
                    }
                }
                let norms = self.norm_corrections(&u, std::iter::once(d))?;
                let wide = self.norm_corrections(&u, 1..=(4 * e))?;
                let (first, second) = if self.case == RecipeCase::TwoBreakFree {
                    (base.clone(), norms)
                } else {
                    (norms, base.clone())
                };
                let mixed: Vec<Elem> = base
                    .iter()
                    .flat_map(|b| wide.iter().map(move |n| b.mul(n)))
                    .collect();
                for v in first.into_iter().chain(second).chain(mixed) {
                    out.push(v.mul(&unram));
                    out.push(v);
                }
            }
            _ => {
                let beta = u.sub(&one);
                let b = 2 * e - self.u_level;
                let mut mus = Vec::new();
                match self.mu_valuation {
                    Some(m) => {
                        for a in k.residue().nonzero() {
                            mus.push(Elem::teichmuller(k, a).mul(&pi.pow(m)));
                        }
                    }
                    None => {
                        mus.push(Elem::zero(k));
                        let bound = m_bound(self.target.tag, e, b);
                        for m in 1..=b {
                            if 2 * m < b && b + 4 * m >= bound {
                                mus.push(pi.pow(m));
                            }
                        }
                    }
                }
                let mut corrections = vec![one.clone(), unram.clone()];
                if self.case != RecipeCase::OneBreakFree {
                    let levels = 1..=(4 * e);
                    for n in self.norm_corrections(&u, levels)? {
                        corrections.push(n.clone());
                        corrections.push(n.mul(&unram));
                    }
                }
                for &w in &self.omegas {
                    let wt = Elem::teichmuller(k, w);
                    for mu in &mus {
                        let c = wt.add(mu);
                        let v0 = one.add(&c.square().mul(&beta));
                        let v1 = v0.sub(&lam4.div(&beta)?);
                        for corr in &corrections {
                            out.push(v0.mul(corr));
                            out.push(v1.mul(corr));
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Try candidates until one realizes the target, then tune `k`.
    pub fn execute(&self) -> Result<WitnessOutcome> {
        let target = self.target.triple();
        let mut tried = 0;
        for u in self.u_candidates() {
        for v in self.v_candidates(&u)? {
            tried += 1;
            if hilbert_symbol(&u, &v)? != 1 || !embeddable(&u, &v)? {
                continue;
            }
            let (u2, v2) = match normalize_uv(&u, &v) {
                Ok(p) => p,
                Err(_) => continue,
            };
            let setup = match QuaternionSetup::new(&u2, &v2) {
                Ok(s) => s,
                Err(Error::NotFullyRamified) | Err(Error::HypothesisViolation(_)) => continue,
                Err(e) => return Err(e),
            };
            let probe = setup.triple_for(0);
            if (probe.tag, probe.s1, probe.s2) != (target.tag, target.s1, target.s2) {
                continue;
            }
            let Ok(k) = setup.tune_k(self.k_target) else {
                continue;
            };
            let data = setup.build(&k)?;
            let measured = data.triple;
            return Ok(WitnessOutcome {
                recipe_case: self.case,
                u: u2,
                v: v2,
                k,
                matched: measured == target,
                data,
                measured,
                tried,
            });
        }
        }
        Err(Error::TargetUnreachable(self.k_target))
    }
}

/// `Σ_{j<n} ω̃_j π^j` over all residue digits, starting with `0`.
fn perturbations(k: &Field, n: i64) -> Vec<Elem> {
    let pi = Elem::uniformizer(k);
    let mut out = vec![Elem::zero(k)];
    for j in 0..n {
        let p = pi.pow(j);
        let mut next = Vec::new();
        for x in &out {
            next.push(x.clone());
            for a in k.residue().nonzero() {
                next.push(x.add(&Elem::teichmuller(k, a).mul(&p)));
            }
        }
        out = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triples(tag: ClassTag, e: i64) -> Vec<(i64, i64, i64)> {
        enumerate(tag, e).iter().map(|t| (t.s1, t.s2, t.s3)).collect()
    }

    #[test]
    fn small_catalogs() {
        assert_eq!(triples(ClassTag::Two, 2), vec![(1, 5, 13), (1, 7, 15), (3, 5, 13)]);
        assert_eq!(
            triples(ClassTag::OneStar, 2),
            vec![(1, 2, 3), (1, 2, 9), (1, 2, 13), (3, 5, 9)]
        );
        assert_eq!(triples(ClassTag::One, 1), vec![(1, 2, 5)]);
        let w: Vec<i64> = s3_values(ClassTag::Two, 4, 1, 5).iter().map(|x| x.0).collect();
        assert_eq!(w, vec![17, 21, 25]);
    }

    #[test]
    fn member_matches_enumerate() {
        for e in 1..=6 {
            for tag in ClassTag::ALL {
                let set: std::collections::HashSet<_> = triples(tag, e).into_iter().collect();
                for s1 in -1..=2 * e + 1 {
                    for s2 in 0..=4 * e + 1 {
                        for s3 in 0..=8 * e + 2 {
                            assert_eq!(member(tag, e, s1, s2, s3), set.contains(&(s1, s2, s3)));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn nesting_and_bounds() {
        for e in 1..=16 {
            for s1 in s1_values(e) {
                let a = s2_values(ClassTag::One, e, s1);
                assert_eq!(a, s2_values(ClassTag::OneStar, e, s1));
                assert_eq!(*a.last().unwrap(), m_bound(ClassTag::One, e, s1));
                let s = s1;
                let l1s = bounds(ClassTag::OneStar, e, s, s);
                let l1 = bounds(ClassTag::One, e, s, s);
                let l2 = bounds(ClassTag::Two, e, s, s);
                assert!(l1s.0 == l1.0 && l1.0 == l2.0);
                assert!(l2.1 == l1.1 && l1.1 == l1s.1);
            }
        }
    }

    #[test]
    fn hasse_arf_locus() {
        let h: Vec<_> = hasse_arf_exceptions(2).iter().map(|t| (t.s1, t.s2, t.s3)).collect();
        assert_eq!(h, vec![(1, 2, 3), (3, 5, 9)]);
        for e in 1..=8 {
            assert!(enumerate(ClassTag::One, e).iter().all(|t| t.s3 != 3 * t.s1));
        }
    }
}

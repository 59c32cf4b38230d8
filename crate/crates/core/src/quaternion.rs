//! Witt embeddability, the element `α_k`, the top break `b₃` and triple
//! classification.

use crate::error::{Error, Result};
use crate::localfield::{adjoin_sqrt, galois_conjugate, Elem, Field, Val};
use crate::ramify::{
    biquadratic_breaks, refined_invariants, BiquadraticBreaks, ClassTag, RamTriple,
    RefinedInvariants,
};
use crate::residue::ResidueElem;
use crate::squares::defect;
use crate::symbols::{hilbert_symbol, solve_norm_equation};

/// `(−u, −v) = (−1, −1)`, cross-checked against `(−1,u)(−1,v)(u,v) = 1`.
pub fn embeddable(u: &Elem, v: &Elem) -> Result<bool> {
    let k = u.field();
    let m1 = Elem::from_int(k, -1);
    let witt = hilbert_symbol(&u.neg(), &v.neg())? == hilbert_symbol(&m1, &m1)?;
    let product = hilbert_symbol(&m1, u)? * hilbert_symbol(&m1, v)? * hilbert_symbol(u, v)? == 1;
    if witt != product {
        return Err(Error::HypothesisViolation(
            "Witt condition and product formula disagree".into(),
        ));
    }
    Ok(witt)
}

/// A rearrangement from `{u, v, uv}` with `(u′, v′) = 1` and `(u′v′, −1) = 1`.
pub fn normalize_uv(u: &Elem, v: &Elem) -> Result<(Elem, Elem)> {
    let k = u.field();
    let m1 = Elem::from_int(k, -1);
    let uv = u.mul(v);
    let pairs = [
        (u, v),
        (v, u),
        (u, &uv),
        (&uv, u),
        (v, &uv),
        (&uv, v),
    ];
    for (a, b) in pairs {
        if hilbert_symbol(a, b)? == 1 && hilbert_symbol(&a.mul(b), &m1)? == 1 {
            return Ok((a.clone(), b.clone()));
        }
    }
    Err(Error::NoValidArrangement)
}

/// Everything about `K(√u, √v)` that does not depend on `k`.
#[derive(Clone, Debug)]
pub struct QuaternionSetup {
    pub base: Field,
    pub u: Elem,
    pub v: Elem,
    pub l: Field,
    pub m: Field,
    pub eta: Elem,
    /// `τ` embedded in `M`; absent when `i ∈ K`.
    pub tau: Option<Elem>,
    /// `√(uv)·η·τ` in `M`.
    pub core: Elem,
    pub breaks: BiquadraticBreaks,
    pub refined: Option<RefinedInvariants>,
}

/// `N_{K(√uv)/K}(τ) = −1` with `τ` written in `M` through `√(uv) = x·y`.
fn tau_in_m(k: &Field, uv: &Elem, xy: &Elem) -> Result<Elem> {
    let luv = adjoin_sqrt(k, uv)?;
    let t = solve_norm_equation(&luv, &Elem::from_int(k, -1))?;
    let tc = galois_conjugate(&t, 1)?;
    let w = Elem::root(&luv);
    let a = t.add(&tc).div_pow2(1).project().ok_or(Error::PrecisionExhausted)?;
    let b = t
        .sub(&tc)
        .div(&w.mul_int(2))?
        .project()
        .ok_or(Error::PrecisionExhausted)?;
    let m = xy.field();
    Ok(a.lift_to(m).add(&b.lift_to(m).mul(xy)))
}

impl QuaternionSetup {
    pub fn new(u: &Elem, v: &Elem) -> Result<Self> {
        let k = u.field().clone();
        let v = v.lift_to(&k);
        let breaks = biquadratic_breaks(u, &v)?;
        let l = adjoin_sqrt(&k, u)?;
        let m = adjoin_sqrt(&l, &v).map_err(|e| match e {
            Error::IsSquare | Error::UnramifiedSubextension => Error::NotFullyRamified,
            e => e,
        })?;
        let eta = solve_norm_equation(&l, &v)?;
        let x = Elem::root(&l).lift_to(&m);
        let y = Elem::root(&m);
        let xy = x.mul(&y);
        let tau = if k.contains_i()? {
            None
        } else {
            Some(tau_in_m(&k, &u.mul(&v), &xy)?)
        };
        let mut core = xy.mul(&eta.lift_to(&m));
        if let Some(t) = &tau {
            core = core.mul(t);
        }
        let refined = if breaks.one_break() {
            Some(refined_invariants(u, &v)?)
        } else {
            None
        };
        Ok(Self {
            base: k,
            u: u.clone(),
            v,
            l,
            m,
            eta,
            tau,
            core,
            breaks,
            refined,
        })
    }

    pub fn e(&self) -> i64 {
        self.base.e_abs() as i64
    }

    pub fn alpha(&self, k: &Elem) -> Elem {
        k.lift_to(&self.m).mul(&self.core)
    }

    /// `def_M(α_k)`.
    pub fn alpha_defect(&self, k: &Elem) -> Result<Val> {
        Ok(defect(&self.alpha(k))?.value)
    }

    /// `b₃ = 8e_K − def_M(α_k)`.
    pub fn b3(&self, k: &Elem) -> Result<i64> {
        match self.alpha_defect(k)? {
            Val::Inf => Err(Error::IsSquare),
            Val::Fin(d) if d == 8 * self.e() => Err(Error::NotFullyRamified),
            Val::Fin(d) => Ok(8 * self.e() - d),
        }
    }

    pub fn triple_for(&self, b3: i64) -> RamTriple {
        match &self.refined {
            Some(r) => RamTriple {
                tag: if r.is_cube {
                    ClassTag::OneStar
                } else {
                    ClassTag::One
                },
                s1: r.b,
                s2: r.r,
                s3: b3,
            },
            None => RamTriple {
                tag: ClassTag::Two,
                s1: self.breaks.b1,
                s2: self.breaks.b2,
                s3: b3,
            },
        }
    }

    pub fn build(&self, k: &Elem) -> Result<QuaternionData> {
        let k = k.lift_to(&self.base);
        let alpha = self.alpha(&k);
        let def_alpha = defect(&alpha)?.value;
        let b3 = self.b3(&k)?;
        Ok(QuaternionData {
            setup: self.clone(),
            k,
            alpha,
            def_alpha,
            triple: self.triple_for(b3),
        })
    }

    /// Candidate values of `k`: `π^ε·(1 + ω̃π^j)`.
    pub fn k_candidates(&self) -> Vec<Elem> {
        let k = &self.base;
        let one = Elem::one(k);
        let pi = Elem::uniformizer(k);
        let mut out = vec![one.clone(), pi.clone()];
        for j in 0..=2 * self.e() {
            let p = pi.pow(j);
            for a in k.residue().nonzero() {
                let c = one.add(&Elem::teichmuller(k, a).mul(&p));
                out.push(c.clone());
                out.push(c.mul(&pi));
            }
        }
        out
    }

    /// First `k` from the candidate set with `b₃ = target`.
    pub fn tune_k(&self, target_s3: i64) -> Result<Elem> {
        for k in self.k_candidates() {
            if matches!(self.b3(&k), Ok(b) if b == target_s3) {
                return Ok(k);
            }
        }
        Err(Error::TargetUnreachable(target_s3))
    }
}

#[derive(Clone, Debug)]
pub struct QuaternionData {
    pub setup: QuaternionSetup,
    pub k: Elem,
    pub alpha: Elem,
    pub def_alpha: Val,
    pub triple: RamTriple,
}

impl QuaternionData {
    /// `N = M(√α_k)`.
    pub fn top_field(&self) -> Result<Field> {
        adjoin_sqrt(&self.setup.m, &self.alpha)
    }

    pub fn omega_class(&self) -> Option<ResidueElem> {
        self.setup.refined.as_ref().map(|r| r.omega_class)
    }
}

/// Build `N = M(√α_k)` over a normalized pair.
pub fn build_quaternion(u: &Elem, v: &Elem, k: &Elem) -> Result<QuaternionData> {
    QuaternionSetup::new(u, v)?.build(k)
}

pub fn classify(q: &QuaternionData) -> RamTriple {
    q.triple
}

pub fn tune_k(u: &Elem, v: &Elem, target_s3: i64) -> Result<Elem> {
    QuaternionSetup::new(u, v)?.tune_k(target_s3)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localfield::make_base_field;
    use crate::ramify::break_of_step;

    #[test]
    fn q2i_stable_two_break() {
        // e = 2, f = 1, i ∈ K
        let k = make_base_field(1, &[vec![2], vec![2]], 28).unwrap();
        let pi = Elem::uniformizer(&k);
        let one = Elem::one(&k);
        let u = one.add(&pi.pow(3));
        let lam = one.add(&Elem::from_int(&k, 4));
        let mut found = 0;
        for base_v in [one.add(&pi), one.add(&pi).mul(&lam), one.add(&pi).neg(), pi.clone(), pi.mul(&lam)] {
            if !embeddable(&u, &base_v).unwrap() {
                continue;
            }
            let (u2, v2) = normalize_uv(&u, &base_v).unwrap();
            let q = build_quaternion(&u2, &v2, &one).unwrap();
            assert_eq!(q.triple.tag, ClassTag::Two);
            let n = q.top_field().unwrap();
            assert_eq!(break_of_step(&n).unwrap(), q.triple.s3);
            found += 1;
        }
        assert!(found > 0);
    }

    #[test]
    fn one_break_over_t4i() {
        let k = make_base_field(2, &[vec![2], vec![2]], 28).unwrap();
        let pi = Elem::uniformizer(&k);
        let one = Elem::one(&k);
        let beta = pi.pow(3);
        let w = Elem::teichmuller(&k, k.residue().generator());
        let u = one.add(&beta);
        let v = one.add(&w.square().mul(&beta));
        assert!(embeddable(&u, &v).unwrap());
        let (u, v) = normalize_uv(&u, &v).unwrap();
        let setup = QuaternionSetup::new(&u, &v).unwrap();
        assert!(setup.breaks.one_break());
        let mut seen = std::collections::BTreeSet::new();
        for kk in setup.k_candidates() {
            if let Ok(q) = setup.build(&kk) {
                assert_eq!(q.triple.tag, ClassTag::OneStar);
                seen.insert((q.triple.s1, q.triple.s2, q.triple.s3));
            }
        }
        let expect: std::collections::BTreeSet<_> =
            [(1, 2, 3), (1, 2, 9), (1, 2, 13)].into_iter().collect();
        assert_eq!(seen, expect);
    }
}

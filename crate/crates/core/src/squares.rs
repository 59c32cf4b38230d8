//! Quadratic defect, square classes and the one-break normal form.

use crate::error::{Error, Result};
use crate::localfield::{Elem, Field, Val};
use crate::residue::ResidueElem;

/// `def_F(u) = max v_F(k²u − 1)`, with a maximizing `k`.
#[derive(Clone, Debug)]
pub struct DefectResult {
    pub value: Val,
    pub witness: Elem,
}

impl DefectResult {
    pub fn is_square(&self) -> bool {
        self.value == Val::Inf
    }
}

/// Coordinates in the basis `π; 1 + t^i π^{2n−1} (n = 1..e, i < f); 1 + 4λ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SquareClassVector {
    pub coords: Vec<bool>,
}

impl SquareClassVector {
    pub fn zero(dim: usize) -> Self {
        Self {
            coords: vec![false; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| !c)
    }

    pub fn xor(&self, other: &Self) -> Self {
        Self {
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a ^ b).collect(),
        }
    }

    pub fn bits(&self) -> String {
        self.coords.iter().map(|&c| if c { '1' } else { '0' }).collect()
    }
}

pub fn class_dim(field: &Field) -> usize {
    field.e_abs() * field.f_abs() + 2
}

fn coord_index(field: &Field, n: usize, i: usize) -> usize {
    1 + (n - 1) * field.f_abs() + i
}

/// The fixed trace-one residue used for the unramified class.
pub fn lambda0(field: &Field) -> ResidueElem {
    field.residue().trace_one()
}

/// The basis elements in coordinate order.
pub fn hasse_basis(field: &Field) -> Vec<Elem> {
    let pi = Elem::uniformizer(field);
    let mut out = vec![pi.clone()];
    let one = Elem::one(field);
    for n in 1..=field.e_abs() {
        let p = pi.pow(2 * n as i64 - 1);
        for i in 0..field.f_abs() {
            let t = Elem::residue_lift(field, ResidueElem(1 << i));
            out.push(one.add(&t.mul(&p)));
        }
    }
    let lam = Elem::residue_lift(field, lambda0(field));
    out.push(one.add(&lam.mul_int(4)));
    out
}

/// Scale `u` by an even power of the uniformizer and a Teichmüller square
/// into `1 + 𝔓`. Returns `(k, k²u)`, or `None` when `v(u)` is odd.
fn to_principal(u: &Elem) -> Result<Option<(Elem, Elem)>> {
    let field = u.field();
    let v = u.val()?;
    if v.rem_euclid(2) == 1 {
        return Ok(None);
    }
    let k0 = field.pi_inv_elem().pow(v / 2);
    let w = u.mul(&k0).mul(&k0);
    let res = field.residue();
    let r = w.residue()?;
    let c = res.sqrt(res.inv(r)?);
    let t = Elem::teichmuller(field, c);
    let k = k0.mul(&t);
    let cur = w.mul(&t).mul(&t);
    Ok(Some((k, cur)))
}

/// Leading residue of `x / π^d` where `v(x) = d`.
fn leading(x: &Elem, d: i64) -> Result<ResidueElem> {
    x.mul(&x.field().pi_inv_elem().pow(d)).residue()
}

enum Step {
    Odd(i64),
    Even(i64),
    Unramified(ResidueElem),
    Square,
}

/// Level reached by the reduction loop; each pass must raise it.
fn level_of(step: &Step, e2: i64) -> i64 {
    match step {
        Step::Odd(d) | Step::Even(d) => *d,
        Step::Unramified(_) => e2,
        Step::Square => i64::MAX,
    }
}

/// Like [`classify`], failing when the level did not rise past `last`.
fn classify_after(cur: &Elem, last: &mut i64) -> Result<Step> {
    let step = classify(cur)?;
    let e2 = 2 * cur.field().e_abs() as i64;
    let lv = level_of(&step, e2);
    if lv <= *last {
        return Err(Error::PrecisionExhausted);
    }
    *last = lv;
    Ok(step)
}

/// One pass of the reduction loop on `cur ∈ 1 + 𝔓`.
fn classify(cur: &Elem) -> Result<Step> {
    let field = cur.field();
    let e2 = 2 * field.e_abs() as i64;
    let diff = cur.sub(&Elem::one(field));
    let d = match diff.valuation() {
        Ok(Val::Inf) | Err(Error::PrecisionExhausted) => {
            if diff.abs_cap() <= e2 {
                return Err(Error::PrecisionExhausted);
            }
            return Ok(Step::Square);
        }
        Ok(Val::Fin(d)) => d,
        Err(e) => return Err(e),
    };
    debug_assert!(d > 0);
    if d > e2 {
        Ok(Step::Square)
    } else if d == e2 {
        Ok(Step::Unramified(diff.div_pow2(2).residue()?))
    } else if d % 2 == 1 {
        Ok(Step::Odd(d))
    } else {
        Ok(Step::Even(d))
    }
}

/// `g` with `g² ≡ cur` to one level beyond an even leading term `d < 2e`.
fn even_correction(cur: &Elem, d: i64) -> Result<Elem> {
    let field = cur.field();
    let one = Elem::one(field);
    let a = leading(&cur.sub(&one), d)?;
    let c = field.residue().sqrt(a);
    let pi = Elem::uniformizer(field);
    Ok(one.add(&Elem::teichmuller(field, c).mul(&pi.pow(d / 2))))
}

/// `g = 1 + 2z` with `z² + z = c`.
fn unramified_correction(field: &Field, c: ResidueElem) -> Result<Elem> {
    let z = field
        .residue()
        .artin_schreier_root(c)
        .ok_or_else(|| Error::Domain("trace-one class has no Artin-Schreier root".into()))?;
    Ok(Elem::one(field).add(&Elem::teichmuller(field, z).mul_int(2)))
}

pub fn defect(u: &Elem) -> Result<DefectResult> {
    if u.is_exact_zero() {
        return Err(Error::Domain("defect of zero".into()));
    }
    let field = u.field().clone();
    let Some((mut k, mut cur)) = to_principal(u)? else {
        let v = u.val()?;
        return Ok(DefectResult {
            value: Val::Fin(0),
            witness: field.pi_inv_elem().pow((v - 1) / 2),
        });
    };
    let res = field.residue().clone();
    let mut last = 0;
    loop {
        match classify_after(&cur, &mut last)? {
            Step::Square => {
                return Ok(DefectResult {
                    value: Val::Inf,
                    witness: k,
                })
            }
            Step::Odd(d) => {
                return Ok(DefectResult {
                    value: Val::Fin(d),
                    witness: k,
                })
            }
            Step::Even(d) => {
                let g = even_correction(&cur, d)?;
                let gi = g.inv()?;
                k = k.mul(&gi);
                cur = cur.mul(&gi).mul(&gi);
            }
            Step::Unramified(c) => {
                if res.trace(c) == 1 {
                    return Ok(DefectResult {
                        value: Val::Fin(2 * field.e_abs() as i64),
                        witness: k,
                    });
                }
                let g = unramified_correction(&field, c)?;
                let gi = g.inv()?;
                k = k.mul(&gi);
                cur = cur.mul(&gi).mul(&gi);
            }
        }
    }
}

pub fn is_square(u: &Elem) -> Result<bool> {
    Ok(defect(u)?.is_square())
}

/// `b = 2e_F − def_F(κ)` for the extension `F(√κ)/F`.
pub fn break_from_defect(field: &Field, kappa: &Elem) -> Result<i64> {
    let kappa = kappa.lift_to(field);
    let d = defect(&kappa)?;
    let e2 = 2 * field.e_abs() as i64;
    match d.value {
        Val::Inf => Err(Error::IsSquare),
        Val::Fin(v) if v == e2 => Err(Error::UnramifiedSubextension),
        Val::Fin(v) => Ok(e2 - v),
    }
}

pub fn square_class_vector(u: &Elem) -> Result<SquareClassVector> {
    if u.is_exact_zero() {
        return Err(Error::Domain("square class of zero".into()));
    }
    let field = u.field().clone();
    let mut out = SquareClassVector::zero(class_dim(&field));
    let mut u = u.clone();
    if u.val()?.rem_euclid(2) == 1 {
        out.coords[0] = true;
        u = u.mul(&field.pi_inv_elem());
    }
    let (_, mut cur) = to_principal(&u)?.expect("even valuation");
    let res = field.residue().clone();
    let one = Elem::one(&field);
    let pi = Elem::uniformizer(&field);
    let mut last = 0;
    loop {
        match classify_after(&cur, &mut last)? {
            Step::Square => return Ok(out),
            Step::Odd(d) => {
                let a = leading(&cur.sub(&one), d)?;
                let n = ((d + 1) / 2) as usize;
                let pd = pi.pow(d);
                for i in 0..field.f_abs() {
                    if (a.0 >> i) & 1 == 1 {
                        out.coords[coord_index(&field, n, i)] = true;
                        let t = Elem::residue_lift(&field, ResidueElem(1 << i));
                        cur = cur.mul(&one.add(&t.mul(&pd)).inv()?);
                    }
                }
            }
            Step::Even(d) => {
                let g = even_correction(&cur, d)?.inv()?;
                cur = cur.mul(&g).mul(&g);
            }
            Step::Unramified(mut c) => {
                if res.trace(c) == 1 {
                    let last = out.dim() - 1;
                    out.coords[last] = true;
                    let lam = Elem::residue_lift(&field, lambda0(&field));
                    cur = cur.mul(&one.add(&lam.mul_int(4)).inv()?);
                    match classify(&cur)? {
                        Step::Unramified(c2) => c = c2,
                        Step::Square => return Ok(out),
                        _ => return Err(Error::PrecisionExhausted),
                    }
                }
                let g = unramified_correction(&field, c)?.inv()?;
                cur = cur.mul(&g).mul(&g);
            }
        }
    }
}

/// Rebuild an element of a square class from the basis.
pub fn class_representative(field: &Field, vec: &SquareClassVector) -> Elem {
    let basis = hasse_basis(field);
    let mut acc = Elem::one(field);
    for (b, &c) in basis.iter().zip(&vec.coords) {
        if c {
            acc = acc.mul(b);
        }
    }
    acc
}

/// Write `κ ≡ (1 + μ²β)(1 + 4λ)` modulo squares. Returns `(μ, λ)`.
pub fn split_against_beta(kappa: &Elem, beta: &Elem) -> Result<(Elem, ResidueElem)> {
    let field = kappa.field().clone();
    let beta = beta.lift_to(&field);
    let e2 = 2 * field.e_abs() as i64;
    let vb = beta.val()?;
    if vb % 2 == 0 || vb <= 0 || vb >= e2 {
        return Err(Error::HypothesisViolation(format!(
            "v(β) = {vb} must be odd in (0, {e2})"
        )));
    }
    let res = field.residue().clone();
    let one = Elem::one(&field);
    let beta_res = leading(&beta, vb)?;
    let pi = Elem::uniformizer(&field);
    let mut mu = Elem::zero(&field);
    let mut first = true;
    let lambda = loop {
        let rho = kappa.div(&one.add(&mu.square().mul(&beta)))?;
        let d = defect(&rho)?;
        match d.value {
            Val::Inf => break ResidueElem::ZERO,
            Val::Fin(v) if v == e2 => break lambda0(&field),
            Val::Fin(v) => {
                if v % 2 == 0 || v < vb {
                    if first {
                        return Err(Error::HypothesisViolation(format!(
                            "defect {v} outside [{vb}, {e2}]"
                        )));
                    }
                    return Err(Error::PrecisionExhausted);
                }
                first = false;
                let k = &d.witness;
                let gamma = k.square().mul(&rho).sub(&one);
                let c = leading(&gamma, v)?;
                let delta = res.sqrt(res.mul(c, res.inv(beta_res)?));
                let step = Elem::teichmuller(&field, delta).mul(&pi.pow((v - vb) / 2));
                mu = mu.add(&step);
            }
        }
    };
    let lam = Elem::residue_lift(&field, lambda);
    let rebuilt = one.add(&mu.square().mul(&beta)).mul(&one.add(&lam.mul_int(4)));
    if !square_class_vector(&kappa.div(&rebuilt)?)?.is_zero() {
        return Err(Error::PrecisionExhausted);
    }
    Ok((mu, lambda))
}

/// `(β, ω, μ, λ)` presenting `v = (1 + (ω+μ)²β)(1 + 4λ)` against `u = 1 + β`.
#[derive(Clone, Debug)]
pub struct OneBreakNormalForm {
    pub beta: Elem,
    pub omega: ResidueElem,
    pub mu: Elem,
    pub lambda: ResidueElem,
}

impl OneBreakNormalForm {
    /// Split the output of [`split_against_beta`] into Teichmüller part and tail.
    pub fn from_decomposition(beta: &Elem, mu_full: &Elem, lambda: ResidueElem) -> Result<Self> {
        let field = mu_full.field().clone();
        let (omega, mu) = match mu_full.valuation()? {
            Val::Fin(0) => {
                let w = mu_full.residue()?;
                (w, mu_full.sub(&Elem::teichmuller(&field, w)))
            }
            Val::Fin(v) if v > 0 => (ResidueElem::ZERO, mu_full.clone()),
            Val::Inf => (ResidueElem::ZERO, mu_full.clone()),
            Val::Fin(_) => return Err(Error::HypothesisViolation("v(μ) < 0".into())),
        };
        Ok(Self {
            beta: beta.lift_to(&field),
            omega,
            mu,
            lambda,
        })
    }

    pub fn decompose(v: &Elem, beta: &Elem) -> Result<Self> {
        let (mu, lambda) = split_against_beta(v, beta)?;
        Self::from_decomposition(beta, &mu, lambda)
    }

    pub fn field(&self) -> &Field {
        self.beta.field()
    }

    /// `b = 2e − v(β)`.
    pub fn b(&self) -> i64 {
        2 * self.field().e_abs() as i64 - self.beta.val().expect("β ≠ 0")
    }

    /// `m = v(μ)`, or `None` for `μ = 0` (to precision).
    pub fn m(&self) -> Option<i64> {
        match self.mu.valuation() {
            Ok(Val::Fin(m)) if m < self.b() => Some(m),
            _ => None,
        }
    }

    pub fn u(&self) -> Elem {
        Elem::one(self.field()).add(&self.beta)
    }

    /// `(1 + (ω+μ)²β)(1 + 4λ)`.
    pub fn v(&self) -> Elem {
        let field = self.field();
        let one = Elem::one(field);
        let w = Elem::teichmuller(field, self.omega).add(&self.mu);
        let lam = Elem::residue_lift(field, self.lambda);
        one.add(&w.square().mul(&self.beta)).mul(&one.add(&lam.mul_int(4)))
    }
}

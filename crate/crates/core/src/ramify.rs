//! Ramification breaks from the Galois action, upper numbering, biquadratic
//! break extraction and the refined invariants of one-break extensions.

use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::localfield::{adjoin_sqrt, apply, Automorphism, Elem, Field, Val};
use crate::residue::ResidueElem;
use crate::squares::{break_from_defect, defect, OneBreakNormalForm};

/// Lower break of a quadratic step: `v_E((σ−1)π_E) − 1`.
pub fn break_of_step(e: &Field) -> Result<i64> {
    if e.step().is_none() {
        return Err(Error::Domain("break of a base field".into()));
    }
    let pi = Elem::uniformizer(e);
    let moved = apply(&pi, &Automorphism::step(e.depth(), e.depth()))?;
    Ok(moved.sub(&pi).val()? - 1)
}

/// `g_{F,b}(x) = min(2x + b, x + 2e_F)`.
pub fn g_function(e_f: i64, b: i64, x: i64) -> i64 {
    (2 * x + b).min(x + 2 * e_f)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ClassTag {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "1*")]
    OneStar,
    #[serde(rename = "2")]
    Two,
}

impl ClassTag {
    pub const ALL: [ClassTag; 3] = [ClassTag::One, ClassTag::OneStar, ClassTag::Two];
}

impl fmt::Display for ClassTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClassTag::One => "1",
            ClassTag::OneStar => "1*",
            ClassTag::Two => "2",
        })
    }
}

impl std::str::FromStr for ClassTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "1" => Ok(ClassTag::One),
            "1*" | "1s" | "1star" => Ok(ClassTag::OneStar),
            "2" => Ok(ClassTag::Two),
            _ => Err(Error::Config(format!("unknown tag {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RamTriple {
    pub tag: ClassTag,
    pub s1: i64,
    pub s2: i64,
    pub s3: i64,
}

impl fmt::Display for RamTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] ({},{},{})", self.tag, self.s1, self.s2, self.s3)
    }
}

/// Which quadratic subfield carries the smallest break.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SmallSubfield {
    U,
    V,
    UV,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GroupShape {
    C2,
    C2xC2,
    C4,
    Q8,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BreakData {
    pub lower_breaks: Vec<i64>,
    pub group_shape: GroupShape,
}

/// Breaks of `K(√u, √v)/K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiquadraticBreaks {
    /// Breaks of `K(√u)`, `K(√v)`, `K(√(uv))`.
    pub subfield: [i64; 3],
    pub b1: i64,
    pub b2: i64,
    /// `None` in the one-break case.
    pub small: Option<SmallSubfield>,
}

impl BiquadraticBreaks {
    pub fn one_break(&self) -> bool {
        self.b1 == self.b2
    }

    pub fn break_data(&self) -> BreakData {
        let mut lower_breaks = vec![self.b1];
        if self.b2 != self.b1 {
            lower_breaks.push(self.b2);
        }
        BreakData {
            lower_breaks,
            group_shape: GroupShape::C2xC2,
        }
    }
}

fn subfield_break(k: &Field, kappa: &Elem) -> Result<i64> {
    match break_from_defect(k, kappa) {
        Ok(b) => Ok(b),
        Err(Error::UnramifiedSubextension) | Err(Error::IsSquare) => Err(Error::NotFullyRamified),
        Err(e) => Err(e),
    }
}

pub fn biquadratic_breaks(u: &Elem, v: &Elem) -> Result<BiquadraticBreaks> {
    let k = u.field().clone();
    let uv = u.mul(v);
    let s = [
        subfield_break(&k, u)?,
        subfield_break(&k, v)?,
        subfield_break(&k, &uv)?,
    ];
    let lo = *s.iter().min().unwrap();
    let hi = *s.iter().max().unwrap();
    if lo == hi {
        return Ok(BiquadraticBreaks {
            subfield: s,
            b1: lo,
            b2: lo,
            small: None,
        });
    }
    let n_lo = s.iter().filter(|&&x| x == lo).count();
    if n_lo != 1 {
        return Err(Error::HypothesisViolation(format!(
            "subfield breaks {s:?} are not of the form (b1, c, c)"
        )));
    }
    let small = match s.iter().position(|&x| x == lo).unwrap() {
        0 => SmallSubfield::U,
        1 => SmallSubfield::V,
        _ => SmallSubfield::UV,
    };
    Ok(BiquadraticBreaks {
        subfield: s,
        b1: lo,
        b2: 2 * hi - lo,
        small: Some(small),
    })
}

/// Constraints on a two-break pair: `b1` odd in `(0, 2e)`, `b2 ≤ 4e − b1`,
/// `b2 ≡ b1 mod 4` below the bound.
pub fn two_break_constraints_hold(e: i64, b1: i64, b2: i64) -> bool {
    b1 % 2 == 1
        && 0 < b1
        && b1 < 2 * e
        && b1 < b2
        && b2 <= 4 * e - b1
        && (b2 == 4 * e - b1 || (b2 - b1) % 4 == 0)
}

/// An upper ramification number with its integrality.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct UpperBreak {
    pub value: Ratio<i64>,
}

impl UpperBreak {
    pub fn is_integral(&self) -> bool {
        self.value.is_integer()
    }
}

impl fmt::Display for UpperBreak {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Herbrand `φ` at the given lower breaks, for a filtration whose group
/// order halves at each listed break (`orders[i]` is `|G_j|` for
/// `j ≤ breaks[i]`, after the previous break).
pub fn herbrand_phi(breaks: &[i64], orders: &[i64]) -> Vec<Ratio<i64>> {
    let g0 = orders[0];
    let mut out = Vec::with_capacity(breaks.len());
    let mut acc = Ratio::from_integer(0);
    let mut prev = 0;
    for (&b, &ord) in breaks.iter().zip(orders) {
        acc += Ratio::new((b - prev) * ord, g0);
        out.push(acc);
        prev = b;
    }
    out
}

/// Upper numbers of a quaternion (or biquadratic) filtration.
pub fn upper_breaks(bd: &BreakData) -> Vec<UpperBreak> {
    let orders: Vec<i64> = match (bd.group_shape, bd.lower_breaks.len()) {
        (GroupShape::Q8, 2) => vec![8, 2],
        (GroupShape::Q8, 3) => vec![8, 4, 2],
        (GroupShape::C2xC2, 1) | (GroupShape::C4, 1) => vec![4],
        (GroupShape::C2xC2, 2) | (GroupShape::C4, 2) => vec![4, 2],
        (GroupShape::C2, 1) => vec![2],
        _ => panic!("unsupported filtration {bd:?}"),
    };
    herbrand_phi(&bd.lower_breaks, &orders)
        .into_iter()
        .map(|value| UpperBreak { value })
        .collect()
}

/// Break data of a quaternion extension with triple `t`.
pub fn quaternion_break_data(t: &RamTriple) -> BreakData {
    let lower_breaks = match t.tag {
        ClassTag::Two => vec![t.s1, t.s2, t.s3],
        _ => vec![t.s1, t.s3],
    };
    BreakData {
        lower_breaks,
        group_shape: GroupShape::Q8,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RefinedInvariants {
    pub b: i64,
    pub r: i64,
    pub omega_class: ResidueElem,
    pub m: Option<i64>,
    pub is_cube: bool,
}

/// `r = min(4e − b, b + 4m, 2b)`.
pub fn refined_r(e: i64, b: i64, m: Option<i64>) -> i64 {
    let mut r = (4 * e - b).min(2 * b);
    if let Some(m) = m {
        r = r.min(b + 4 * m);
    }
    r
}

pub fn refined_from_normal_form(nf: &OneBreakNormalForm) -> Result<RefinedInvariants> {
    let field = nf.field();
    let res = field.residue();
    let e = field.e_abs() as i64;
    let b = nf.b();
    if nf.omega.is_zero() || nf.omega == ResidueElem::ONE {
        return Err(Error::HypothesisViolation("ω must be a nontrivial root of unity".into()));
    }
    let m = nf.m();
    if let Some(m) = m {
        if !(0 < m && 2 * m < b) {
            return Err(Error::HypothesisViolation(format!("m = {m} outside (0, b/2)")));
        }
    }
    Ok(RefinedInvariants {
        b,
        r: refined_r(e, b, m),
        omega_class: res.omega_class_canonical(nf.omega)?,
        m,
        is_cube: res.is_cube_root_of_unity(nf.omega)?,
    })
}

/// `(β, k²v)` with `u·s² = 1 + β` and `k²v ∈ 1 + 𝔓`.
fn principal_pair(u: &Elem, v: &Elem) -> Result<(Elem, Elem)> {
    let one = Elem::one(u.field());
    let du = defect(u)?;
    let dv = defect(v)?;
    if du.value.finite().is_none_or(|d| d % 2 == 0 || d == 0) {
        return Err(Error::HypothesisViolation("u must be a unit of odd defect".into()));
    }
    let beta = du.witness.square().mul(u).sub(&one);
    let v1 = dv.witness.square().mul(v);
    if v1.val()? != 0 {
        return Err(Error::HypothesisViolation("v must be a unit".into()));
    }
    Ok((beta, v1))
}

/// Normal form of the one-break field `K(√u, √v)`.
pub fn normal_form(u: &Elem, v: &Elem) -> Result<OneBreakNormalForm> {
    let bb = biquadratic_breaks(u, v)?;
    if !bb.one_break() {
        return Err(Error::HypothesisViolation("two-break extension".into()));
    }
    let (beta, v1) = principal_pair(u, v)?;
    OneBreakNormalForm::decompose(&v1, &beta)
}

/// Refined invariants of a one-break `K(√u, √v)`.
pub fn refined_invariants(u: &Elem, v: &Elem) -> Result<RefinedInvariants> {
    refined_from_normal_form(&normal_form(u, v)?)
}

/// The tower `K(x)(y)` with `x² = 1 + β`, `y² = v(nf)`.
pub struct NormalFormTower {
    pub l: Field,
    pub m: Field,
    pub x: Elem,
    pub y: Elem,
    /// `Y = (1 + (ω+μ)(x − 1))/y`.
    pub big_y: Elem,
    /// `ρ = 2/(Y − 1)`.
    pub rho: Elem,
}

pub fn normal_form_tower(nf: &OneBreakNormalForm) -> Result<NormalFormTower> {
    let k = nf.field();
    let l = adjoin_sqrt(k, &nf.u())?;
    let m = adjoin_sqrt(&l, &nf.v())?;
    let x = Elem::root(&l).lift_to(&m);
    let y = Elem::root(&m);
    let one = Elem::one(&m);
    let w = Elem::teichmuller(k, nf.omega).add(&nf.mu).lift_to(&m);
    let big_y = one.add(&w.mul(&x.sub(&one))).div(&y)?;
    let rho = Elem::from_int(&m, 2).div(&big_y.sub(&one))?;
    Ok(NormalFormTower {
        l,
        m,
        x,
        y,
        big_y,
        rho,
    })
}

/// `max v_M((γ(1 + ω̃(σ−1)) − 1)ρ) − v_M(ρ)` over `ω̃ ∈ {0} ∪ μ_{q−1}`, plus
/// pure `σ`. Returns the maximum and the maximizing residue (`None` for `σ`).
pub fn refined_break_direct(m: &Field, rho: &Elem) -> Result<(i64, Option<ResidueElem>)> {
    if m.depth() != 2 {
        return Err(Error::Domain("expected a biquadratic tower".into()));
    }
    let rho = rho.lift_to(m);
    let vr = rho.val()?;
    let sigma = Automorphism::step(2, 2);
    let gamma = Automorphism::step(2, 1);
    let s_rho = apply(&rho, &sigma)?;
    let g_rho = apply(&rho, &gamma)?;
    let gs_rho = apply(&rho, &gamma.compose(&sigma))?;
    let mut best = (s_rho.sub(&rho).val()? - vr, None);
    let k = m.base();
    let mut cands = vec![ResidueElem::ZERO];
    cands.extend(k.residue().nonzero());
    for a in cands {
        let w = Elem::teichmuller(&k, a).lift_to(m);
        let img = g_rho.add(&w.mul(&gs_rho.sub(&g_rho)));
        let val = match img.sub(&rho).valuation()? {
            Val::Fin(x) => x - vr,
            Val::Inf => return Err(Error::PrecisionExhausted),
        };
        if val > best.0 {
            best = (val, Some(a));
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localfield::make_base_field;

    #[test]
    fn step_breaks() {
        let q2 = make_base_field(1, &[vec![-2]], 24).unwrap();
        let e = adjoin_sqrt(&q2, &Elem::from_int(&q2, 2)).unwrap();
        assert_eq!(break_of_step(&e).unwrap(), 2);
        let e = adjoin_sqrt(&q2, &Elem::from_int(&q2, -1)).unwrap();
        assert_eq!(break_of_step(&e).unwrap(), 1);
        let k = make_base_field(2, &[vec![2], vec![2]], 24).unwrap();
        let pi = Elem::uniformizer(&k);
        for j in [1, 3] {
            let kappa = Elem::one(&k).add(&pi.pow(j));
            let e = adjoin_sqrt(&k, &kappa).unwrap();
            assert_eq!(break_of_step(&e).unwrap(), 4 - j);
            assert_eq!(break_from_defect(&k, &kappa).unwrap(), 4 - j);
        }
    }

    #[test]
    fn g_examples() {
        assert_eq!(g_function(2, 1, 1), 3);
        assert_eq!(g_function(2, 1, 4), 8);
        for b in [1, 3] {
            assert_eq!(g_function(2, b, 4 - b), 8 - b);
            assert_eq!(2 * (4 - b) + b, (4 - b) + 4);
        }
    }

    #[test]
    fn two_break_example() {
        // e = 2, u of defect 3, v of defect 1: breaks {1, 3, 3} → (1, 5)
        let k = make_base_field(1, &[vec![2], vec![2]], 24).unwrap();
        let pi = Elem::uniformizer(&k);
        let u = Elem::one(&k).add(&pi.pow(3));
        let v = Elem::one(&k).add(&pi);
        let bb = biquadratic_breaks(&u, &v).unwrap();
        assert_eq!((bb.b1, bb.b2), (1, 5));
        assert_eq!(bb.small, Some(SmallSubfield::U));
        assert!(two_break_constraints_hold(2, bb.b1, bb.b2));
    }

    #[test]
    fn upper_numbers() {
        let t = RamTriple {
            tag: ClassTag::OneStar,
            s1: 1,
            s2: 2,
            s3: 3,
        };
        let ub = upper_breaks(&quaternion_break_data(&t));
        assert_eq!(ub[1].value, Ratio::new(3, 2));
        assert!(!ub[1].is_integral());
        let t = RamTriple {
            tag: ClassTag::Two,
            s1: 1,
            s2: 5,
            s3: 13,
        };
        let ub = upper_breaks(&quaternion_break_data(&t));
        assert_eq!(ub.iter().map(|u| u.value).collect::<Vec<_>>(), vec![
            Ratio::from_integer(1),
            Ratio::from_integer(3),
            Ratio::from_integer(5)
        ]);
    }

    #[test]
    fn refined_examples() {
        assert_eq!(refined_r(4, 5, Some(1)), 9);
        assert_eq!(refined_r(2, 1, None), 2);
        assert_eq!(refined_r(2, 3, None), 5);
        // e = f = 2, b = 1: direct search matches the formula
        let k = make_base_field(2, &[vec![2], vec![2]], 32).unwrap();
        let pi = Elem::uniformizer(&k);
        let t = k.residue().generator();
        let nf = OneBreakNormalForm {
            beta: pi.pow(3),
            omega: t,
            mu: Elem::zero(&k),
            lambda: ResidueElem::ZERO,
        };
        let inv = refined_from_normal_form(&nf).unwrap();
        assert_eq!((inv.b, inv.r, inv.is_cube), (1, 2, true));
        let tower = normal_form_tower(&nf).unwrap();
        assert_eq!(tower.rho.val().unwrap(), 1);
        let (r, w) = refined_break_direct(&tower.m, &tower.rho).unwrap();
        assert_eq!(r, inv.r);
        let w = w.unwrap();
        assert_eq!(k.residue().omega_class_canonical(w).unwrap(), inv.omega_class);
        // recovered from (u, v)
        let got = refined_invariants(&nf.u(), &nf.v()).unwrap();
        assert_eq!(got, inv);
    }
}

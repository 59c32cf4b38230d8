//! Truncated arithmetic in towers `T ⊂ K ⊂ L ⊂ M ⊂ ...` of 2-adic fields.
//!
//! The unramified ring `𝔒_T = ℤ₂[t]/(m(t))` is stored modulo `2^W` with
//! `W ≤ 128`. The base field `K` is an Eisenstein extension of `T`, and every
//! further step `E = F(√κ)` is ramified quadratic. Each step is presented by a
//! uniformizer `π_E` satisfying `π_E² = tr·π_E − nm` over `F`, so `𝔒_E` is the
//! free `𝔒_F`-module on `1, π_E` and an element of a field of absolute
//! ramification `e` is a flat vector of `e` coefficients in `𝔒_T`, scaled by
//! `2^{-den}`. The monomial in slot `i` has valuation `offset(i)`, and the
//! offsets form a permutation of `0..e`, so the valuation of any element is a
//! minimum over slots. No norm descent is needed.
//!
//! Every element carries the number of trustworthy low bits of its
//! coefficients (`prec`). Valuations that cannot be resolved below that cap
//! raise [`Error::PrecisionExhausted`].

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::residue::{ResidueElem, ResidueField};

/// Valuation of a field element: finite, or infinite for the exact zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Val {
    Fin(i64),
    Inf,
}

impl Val {
    pub fn finite(self) -> Option<i64> {
        match self {
            Val::Fin(v) => Some(v),
            Val::Inf => None,
        }
    }
}

impl fmt::Display for Val {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Val::Fin(v) => write!(f, "{v}"),
            Val::Inf => write!(f, "inf"),
        }
    }
}

fn mask_for(bits: u32) -> u128 {
    if bits >= 128 {
        u128::MAX
    } else {
        (1u128 << bits) - 1
    }
}

/// `𝔒_T / 2^W`.
#[derive(Debug)]
pub struct UnramifiedRing {
    residue: ResidueField,
    f: usize,
    bits: u32,
    mask: u128,
    /// Exponents `j < f` with a nonzero coefficient in the modulus.
    low_terms: Vec<usize>,
}

impl UnramifiedRing {
    pub fn new(residue: ResidueField, bits: u32) -> Result<Self> {
        if !(8..=128).contains(&bits) {
            return Err(Error::PrecisionTooSmall(bits));
        }
        let f = residue.degree();
        let m = residue.modulus();
        let low_terms = (0..f).filter(|j| (m >> j) & 1 == 1).collect();
        Ok(Self {
            residue,
            f,
            bits,
            mask: mask_for(bits),
            low_terms,
        })
    }

    pub fn residue(&self) -> &ResidueField {
        &self.residue
    }

    pub fn f(&self) -> usize {
        self.f
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    fn mul_into(&self, a: &[u128], b: &[u128], out: &mut [u128], sign: bool) {
        let f = self.f;
        let mut prod = vec![0u128; 2 * f - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = prod[i + j].wrapping_add(x.wrapping_mul(y));
            }
        }
        for d in (f..2 * f - 1).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            for &j in &self.low_terms {
                prod[d - f + j] = prod[d - f + j].wrapping_sub(c);
            }
        }
        for k in 0..f {
            out[k] = if sign {
                out[k].wrapping_sub(prod[k])
            } else {
                out[k].wrapping_add(prod[k])
            } & self.mask;
        }
    }

    fn mul(&self, a: &[u128], b: &[u128]) -> Vec<u128> {
        let mut out = vec![0u128; self.f];
        self.mul_into(a, b, &mut out, false);
        out
    }

    /// Teichmüller lift of a nonzero residue, `s ← s^q` iterated to a fixed point.
    pub fn teichmuller(&self, a: ResidueElem) -> Vec<u128> {
        let mut s: Vec<u128> = (0..self.f).map(|j| ((a.0 >> j) & 1) as u128).collect();
        if a.is_zero() {
            return s;
        }
        let q = self.residue.order();
        for _ in 0..=self.bits + 1 {
            let mut acc = vec![0u128; self.f];
            acc[0] = 1;
            let mut base = s.clone();
            let mut n = q;
            while n > 0 {
                if n & 1 == 1 {
                    acc = self.mul(&acc, &base);
                }
                base = self.mul(&base, &base);
                n >>= 1;
            }
            if acc == s {
                break;
            }
            s = acc;
        }
        s
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldKind {
    Eisenstein,
    QuadraticStep,
}

/// How the uniformizer of a quadratic step was obtained from its root `y`.
#[derive(Clone, Debug)]
pub enum UnifShape {
    /// `π_E = (s·y − 1)·π_F^{-j}` where `s²κ = 1 + β`, `v_F(β) = 2j + 1`.
    Unit { s: Elem, j: i64 },
    /// `π_E = y·π_F^{-j}` where `v_F(κ) = 2j + 1`.
    Prime { j: i64 },
}

#[derive(Debug)]
pub struct QuadraticStep {
    kappa: Elem,
    trace: Elem,
    norm: Elem,
    shape: UnifShape,
    /// `π_F^{-j}` in the parent.
    parent_pi_pow: Elem,
    /// Defect of `κ` in the parent (odd, or 0 for the prime type).
    defect: i64,
}

#[derive(Debug)]
enum StepData {
    Eisenstein { coeffs: Vec<Vec<u128>> },
    Quadratic(QuadraticStep),
}

#[derive(Clone, Debug)]
struct Raw {
    c: Vec<u128>,
    den: u32,
    prec: u32,
}

static FIELD_IDS: AtomicU64 = AtomicU64::new(1);

/// A node in a tower of local fields.
pub struct TowerField {
    id: u64,
    ring: Arc<UnramifiedRing>,
    parent: Option<Field>,
    step: StepData,
    e_abs: usize,
    depth: usize,
    offsets: Vec<usize>,
    const_prec: u32,
    pi_inv: OnceLock<Raw>,
    root: OnceLock<Raw>,
    pub(crate) pairing: OnceLock<Arc<crate::symbols::HilbertPairing>>,
}

impl fmt::Debug for TowerField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TowerField")
            .field("id", &self.id)
            .field("kind", &self.kind())
            .field("e_abs", &self.e_abs)
            .field("f_abs", &self.ring.f)
            .field("depth", &self.depth)
            .finish()
    }
}

pub type Field = Arc<TowerField>;

impl TowerField {
    pub fn kind(&self) -> FieldKind {
        match self.step {
            StepData::Eisenstein { .. } => FieldKind::Eisenstein,
            StepData::Quadratic(_) => FieldKind::QuadraticStep,
        }
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn e_abs(&self) -> usize {
        self.e_abs
    }

    pub fn f_abs(&self) -> usize {
        self.ring.f
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn parent(&self) -> Option<&Field> {
        self.parent.as_ref()
    }

    pub fn ring(&self) -> &Arc<UnramifiedRing> {
        &self.ring
    }

    pub fn residue(&self) -> &ResidueField {
        &self.ring.residue
    }

    pub fn bits(&self) -> u32 {
        self.ring.bits
    }

    /// Number of 𝔒_T words in a flat element.
    fn width(&self) -> usize {
        self.e_abs * self.ring.f
    }

    pub fn step(&self) -> Option<&QuadraticStep> {
        match &self.step {
            StepData::Quadratic(q) => Some(q),
            _ => None,
        }
    }

    /// The Eisenstein base at the bottom of the tower.
    pub fn base(self: &Field) -> Field {
        let mut f = self.clone();
        while let Some(p) = f.parent.clone() {
            f = p;
        }
        f
    }

    /// The ancestor at tower depth `d`.
    pub fn ancestor(self: &Field, d: usize) -> Field {
        assert!(d <= self.depth);
        let mut f = self.clone();
        while f.depth > d {
            f = f.parent.clone().unwrap();
        }
        f
    }

    pub fn is_ancestor_of(&self, other: &Field) -> bool {
        let mut f = Some(other.clone());
        while let Some(g) = f {
            if g.id == self.id {
                return true;
            }
            f = g.parent.clone();
        }
        false
    }
}

impl QuadraticStep {
    /// The defining element `κ` (the root `y` satisfies `y² = κ`).
    pub fn kappa(&self) -> &Elem {
        &self.kappa
    }

    /// Trace of the uniformizer over the parent.
    pub fn trace(&self) -> &Elem {
        &self.trace
    }

    /// Norm of the uniformizer over the parent.
    pub fn norm(&self) -> &Elem {
        &self.norm
    }

    pub fn shape(&self) -> &UnifShape {
        &self.shape
    }

    /// Quadratic defect of `κ` in the parent.
    pub fn kappa_defect(&self) -> i64 {
        self.defect
    }
}

/// An element `c / 2^den` of a tower field, `c` known modulo `2^prec`.
#[derive(Clone)]
pub struct Elem {
    field: Field,
    c: Vec<u128>,
    den: u32,
    prec: u32,
    exact_zero: bool,
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exact_zero {
            return write!(f, "0");
        }
        write!(f, "[")?;
        let w = self.field.ring.f;
        for (i, chunk) in self.c.chunks(w).enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            if w == 1 {
                write!(f, "{}", chunk[0])?;
            } else {
                write!(f, "{chunk:?}")?;
            }
        }
        write!(f, "]/2^{} +O(2^{})", self.den, self.prec)
    }
}

/// Construct the base field: `f` the inertia degree, `eis` the coefficients
/// `a_0, …, a_{e-1}` of a monic Eisenstein polynomial over `𝔒_T` (each an
/// integer vector in the basis `1, t, …`), `bits` the working precision.
pub fn make_base_field(f: usize, eis: &[Vec<i64>], bits: u32) -> Result<Field> {
    make_base_field_with(ResidueField::new(f), eis, bits)
}

pub fn make_base_field_with(residue: ResidueField, eis: &[Vec<i64>], bits: u32) -> Result<Field> {
    let e = eis.len();
    if e == 0 {
        return Err(Error::NotEisenstein("degree zero".into()));
    }
    let ring = Arc::new(UnramifiedRing::new(residue, bits)?);
    let f = ring.f;
    let mut coeffs = Vec::with_capacity(e);
    for (i, a) in eis.iter().enumerate() {
        if a.len() > f {
            return Err(Error::NotEisenstein(format!("coefficient {i} has too many terms")));
        }
        let mut w = vec![0u128; f];
        for (k, &x) in a.iter().enumerate() {
            w[k] = (x as i128 as u128) & ring.mask;
        }
        let tz = w.iter().map(|x| if *x == 0 { 128 } else { x.trailing_zeros() }).min().unwrap();
        if i == 0 && tz != 1 {
            return Err(Error::NotEisenstein("constant term must be 2 times a unit".into()));
        }
        if i > 0 && tz < 1 {
            return Err(Error::NotEisenstein(format!("coefficient {i} is a unit")));
        }
        coeffs.push(w);
    }
    if (bits as usize) < 8 {
        return Err(Error::PrecisionTooSmall(bits));
    }
    Ok(Arc::new(TowerField {
        id: FIELD_IDS.fetch_add(1, Ordering::Relaxed),
        ring,
        parent: None,
        step: StepData::Eisenstein { coeffs },
        e_abs: e,
        depth: 0,
        offsets: (0..e).collect(),
        const_prec: bits,
        pi_inv: OnceLock::new(),
        root: OnceLock::new(),
        pairing: OnceLock::new(),
    }))
}

/// Default working precision `8e + 16` bits, clamped to `[24, 128]`.
pub fn default_bits(e: usize) -> u32 {
    (8 * e + 16).clamp(24, 128) as u32
}

/// Adjoin `√κ` to `F`. `κ` must be a non-square generating a ramified
/// extension; the new field's root is exactly `√κ`.
pub fn adjoin_sqrt(parent: &Field, kappa: &Elem) -> Result<Field> {
    let kappa = kappa.lift_to(parent);
    let v = kappa.val()?;
    let pi_inv = parent.pi_inv_elem();
    let (shape, trace, norm, pow, defect) = if v.rem_euclid(2) == 1 {
        let j = (v - 1) / 2;
        let pow = pi_inv.pow(j);
        let norm = kappa.mul(&pow).mul(&pow).neg();
        (UnifShape::Prime { j }, Elem::zero(parent), norm, pow, 0)
    } else {
        let half = pi_inv.pow(v / 2);
        let unit = kappa.mul(&half).mul(&half);
        let d = crate::squares::defect(&unit)?;
        let (dv, k) = match d.value {
            Val::Inf => return Err(Error::IsSquare),
            Val::Fin(dv) => (dv, d.witness),
        };
        if dv == 2 * parent.e_abs as i64 {
            return Err(Error::UnramifiedSubextension);
        }
        debug_assert!(dv % 2 == 1);
        let s = k.mul(&half);
        let j = (dv - 1) / 2;
        let pow = pi_inv.pow(j);
        let one = Elem::one(parent);
        let trace = Elem::from_int(parent, -2).mul(&pow);
        let norm = one.sub(&s.mul(&s).mul(&kappa)).mul(&pow).mul(&pow);
        (UnifShape::Unit { s, j }, trace, norm, pow, dv)
    };
    if trace.den != 0 || norm.den != 0 {
        return Err(Error::Domain("uniformizer polynomial is not integral".into()));
    }
    if norm.val()? != 1 {
        return Err(Error::Domain("uniformizer polynomial is not Eisenstein".into()));
    }
    let e_abs = parent.e_abs * 2;
    let mut offsets = Vec::with_capacity(e_abs);
    offsets.extend(parent.offsets.iter().map(|o| 2 * o));
    offsets.extend(parent.offsets.iter().map(|o| 2 * o + 1));
    let const_prec = parent.const_prec.min(trace.prec_bits()).min(norm.prec_bits());
    Ok(Arc::new(TowerField {
        id: FIELD_IDS.fetch_add(1, Ordering::Relaxed),
        ring: parent.ring.clone(),
        parent: Some(parent.clone()),
        step: StepData::Quadratic(QuadraticStep {
            kappa,
            trace,
            norm,
            shape,
            parent_pi_pow: pow,
            defect,
        }),
        e_abs,
        depth: parent.depth + 1,
        offsets,
        const_prec,
        pi_inv: OnceLock::new(),
        root: OnceLock::new(),
        pairing: OnceLock::new(),
    }))
}

// ---------------------------------------------------------------------------
// flat arithmetic

fn mul_flat(field: &TowerField, a: &[u128], b: &[u128]) -> Vec<u128> {
    let ring = &field.ring;
    let f = ring.f;
    match &field.step {
        StepData::Eisenstein { coeffs } => {
            let e = field.e_abs;
            let mut prod = vec![0u128; (2 * e - 1) * f];
            for i in 0..e {
                let ai = &a[i * f..(i + 1) * f];
                if ai.iter().all(|&x| x == 0) {
                    continue;
                }
                for j in 0..e {
                    let bj = &b[j * f..(j + 1) * f];
                    ring.mul_into(ai, bj, &mut prod[(i + j) * f..(i + j + 1) * f], false);
                }
            }
            for k in (e..2 * e - 1).rev() {
                let top: Vec<u128> = prod[k * f..(k + 1) * f].to_vec();
                if top.iter().all(|&x| x == 0) {
                    continue;
                }
                for (i, ci) in coeffs.iter().enumerate() {
                    let slot = k - e + i;
                    ring.mul_into(&top, ci, &mut prod[slot * f..(slot + 1) * f], true);
                }
            }
            prod.truncate(e * f);
            prod
        }
        StepData::Quadratic(q) => {
            let parent = field.parent.as_ref().unwrap();
            let h = a.len() / 2;
            let (a0, a1) = a.split_at(h);
            let (b0, b1) = b.split_at(h);
            let p0 = mul_flat(parent, a0, b0);
            let p1 = mul_flat(parent, a1, b1);
            let sa: Vec<u128> = a0.iter().zip(a1).map(|(x, y)| x.wrapping_add(*y)).collect();
            let sb: Vec<u128> = b0.iter().zip(b1).map(|(x, y)| x.wrapping_add(*y)).collect();
            let p2 = mul_flat(parent, &sa, &sb);
            let p1n = mul_flat(parent, &p1, &q.norm.c);
            let p1t = mul_flat(parent, &p1, &q.trace.c);
            let mut out = Vec::with_capacity(2 * h);
            for k in 0..h {
                out.push(p0[k].wrapping_sub(p1n[k]) & ring.mask);
            }
            for k in 0..h {
                let cross = p2[k].wrapping_sub(p0[k]).wrapping_sub(p1[k]);
                out.push(cross.wrapping_add(p1t[k]) & ring.mask);
            }
            out
        }
    }
}

impl Elem {
    fn raw(field: &Field, c: Vec<u128>, den: u32, prec: u32) -> Elem {
        let mut e = Elem {
            field: field.clone(),
            c,
            den,
            prec: prec.min(field.ring.bits),
            exact_zero: false,
        };
        e.normalize();
        e
    }

    fn from_raw(field: &Field, r: &Raw) -> Elem {
        Elem::raw(field, r.c.clone(), r.den, r.prec)
    }

    fn to_raw(&self) -> Raw {
        Raw {
            c: self.c.clone(),
            den: self.den,
            prec: self.prec,
        }
    }

    pub fn zero(field: &Field) -> Elem {
        Elem {
            field: field.clone(),
            c: vec![0; field.width()],
            den: 0,
            prec: field.ring.bits,
            exact_zero: true,
        }
    }

    pub fn from_int(field: &Field, n: i64) -> Elem {
        if n == 0 {
            return Elem::zero(field);
        }
        let mut c = vec![0u128; field.width()];
        c[0] = (n as i128 as u128) & field.ring.mask;
        Elem::raw(field, c, 0, field.ring.bits)
    }

    pub fn one(field: &Field) -> Elem {
        Elem::from_int(field, 1)
    }

    /// An element of `𝔒_T` given by its coordinates in `1, t, …`.
    pub fn from_t(field: &Field, coords: &[u128]) -> Elem {
        let mut c = vec![0u128; field.width()];
        for (k, &x) in coords.iter().enumerate().take(field.ring.f) {
            c[k] = x & field.ring.mask;
        }
        Elem::raw(field, c, 0, field.ring.bits)
    }

    /// Lift of a residue with 0/1 coordinates (not multiplicative).
    pub fn residue_lift(field: &Field, a: ResidueElem) -> Elem {
        let coords: Vec<u128> = (0..field.ring.f).map(|j| ((a.0 >> j) & 1) as u128).collect();
        Elem::from_t(field, &coords)
    }

    /// The `(q−1)`-th root of unity reducing to `a` (zero for `a = 0`).
    pub fn teichmuller(field: &Field, a: ResidueElem) -> Elem {
        if a.is_zero() {
            return Elem::zero(field);
        }
        let t = field.ring.teichmuller(a);
        Elem::from_t(field, &t)
    }

    /// The uniformizer of `field` (the basis element in slot 1 of its step).
    pub fn uniformizer(field: &Field) -> Elem {
        let mut c = vec![0u128; field.width()];
        let f = field.ring.f;
        match field.kind() {
            FieldKind::Eisenstein => {
                if field.e_abs == 1 {
                    // π is the root of x + a_0, i.e. −a_0.
                    let StepData::Eisenstein { coeffs } = &field.step else { unreachable!() };
                    for k in 0..f {
                        c[k] = coeffs[0][k].wrapping_neg() & field.ring.mask;
                    }
                } else {
                    c[f] = 1;
                }
            }
            FieldKind::QuadraticStep => {
                c[field.width() / 2] = 1;
            }
        }
        Elem::raw(field, c, 0, field.const_prec)
    }

    /// The adjoined square root `y` (`y² = κ`) of a quadratic step.
    pub fn root(field: &Field) -> Elem {
        let step = field.step().expect("root of a quadratic step");
        let raw = field.root.get_or_init(|| {
            let parent = field.parent.as_ref().unwrap();
            let (a, b) = match &step.shape {
                UnifShape::Unit { s, j } => {
                    let s_inv = s.inv().expect("witness is invertible");
                    let pj = parent.pi_inv_elem().pow(-j);
                    (s_inv.clone(), s_inv.mul(&pj))
                }
                UnifShape::Prime { j } => {
                    (Elem::zero(parent), parent.pi_inv_elem().pow(-j))
                }
            };
            Elem::from_parts(field, &a, &b).to_raw()
        });
        Elem::from_raw(field, raw)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn is_exact_zero(&self) -> bool {
        self.exact_zero
    }

    pub fn den(&self) -> u32 {
        self.den
    }

    pub fn prec_bits(&self) -> u32 {
        self.prec
    }

    /// Valuation cap in home-field units: valuations at or above it are
    /// unresolvable.
    pub fn abs_cap(&self) -> i64 {
        self.field.e_abs as i64 * (self.prec as i64 - self.den as i64)
    }

    fn mask_to_prec(&mut self) {
        let m = mask_for(self.prec);
        for x in &mut self.c {
            *x &= m;
        }
    }

    fn normalize(&mut self) {
        self.mask_to_prec();
        while self.den > 0 && self.prec > 0 && self.c.iter().all(|x| x & 1 == 0) {
            for x in &mut self.c {
                *x >>= 1;
            }
            self.den -= 1;
            self.prec -= 1;
        }
    }

    fn same_field(&self, other: &Elem) -> (Elem, Elem) {
        if Arc::ptr_eq(&self.field, &other.field) {
            (self.clone(), other.clone())
        } else if self.field.is_ancestor_of(&other.field) {
            (self.lift_to(&other.field), other.clone())
        } else if other.field.is_ancestor_of(&self.field) {
            (self.clone(), other.lift_to(&self.field))
        } else {
            panic!("{}", Error::FieldMismatch)
        }
    }

    /// Embed into a field higher in the same tower.
    pub fn lift_to(&self, target: &Field) -> Elem {
        if Arc::ptr_eq(&self.field, target) {
            return self.clone();
        }
        assert!(self.field.is_ancestor_of(target), "{}", Error::FieldMismatch);
        let mut c = self.c.clone();
        c.resize(target.width(), 0);
        Elem {
            field: target.clone(),
            c,
            den: self.den,
            prec: self.prec,
            exact_zero: self.exact_zero,
        }
    }

    fn shifted(&self, by: u32) -> (Vec<u128>, u32) {
        let bits = self.field.ring.bits;
        let mask = self.field.ring.mask;
        let c = self
            .c
            .iter()
            .map(|x| if by >= 128 { 0 } else { (x << by) & mask })
            .collect();
        (c, (self.prec + by).min(bits))
    }

    pub fn add(&self, other: &Elem) -> Elem {
        let (a, b) = self.same_field(other);
        if a.exact_zero {
            return b;
        }
        if b.exact_zero {
            return a;
        }
        let den = a.den.max(b.den);
        let (ca, pa) = a.shifted(den - a.den);
        let (cb, pb) = b.shifted(den - b.den);
        let c = ca.iter().zip(&cb).map(|(x, y)| x.wrapping_add(*y)).collect();
        Elem::raw(&a.field, c, den, pa.min(pb))
    }

    pub fn neg(&self) -> Elem {
        if self.exact_zero {
            return self.clone();
        }
        let mask = self.field.ring.mask;
        let c = self.c.iter().map(|x| x.wrapping_neg() & mask).collect();
        Elem::raw(&self.field, c, self.den, self.prec)
    }

    pub fn sub(&self, other: &Elem) -> Elem {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Elem) -> Elem {
        let (a, b) = self.same_field(other);
        if a.exact_zero || b.exact_zero {
            return Elem::zero(&a.field);
        }
        let c = mul_flat(&a.field, &a.c, &b.c);
        let prec = a.prec.min(b.prec).min(a.field.const_prec);
        Elem::raw(&a.field, c, a.den + b.den, prec)
    }

    pub fn square(&self) -> Elem {
        self.mul(self)
    }

    pub fn mul_int(&self, n: i64) -> Elem {
        self.mul(&Elem::from_int(&self.field, n))
    }

    /// Divide by `2^k` exactly.
    pub fn div_pow2(&self, k: u32) -> Elem {
        if self.exact_zero {
            return self.clone();
        }
        Elem::raw(&self.field, self.c.clone(), self.den + k, self.prec)
    }

    /// Integer power; negative exponents invert.
    pub fn pow(&self, n: i64) -> Elem {
        if n < 0 {
            return self.inv().expect("power of invertible element").pow(-n);
        }
        let mut acc = Elem::one(&self.field);
        let mut base = self.clone();
        let mut n = n as u64;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.square();
            }
        }
        acc
    }

    pub fn valuation(&self) -> Result<Val> {
        if self.exact_zero {
            return Ok(Val::Inf);
        }
        let f = self.field.ring.f;
        let e = self.field.e_abs as i64;
        let mut best: Option<i64> = None;
        for (slot, chunk) in self.c.chunks(f).enumerate() {
            let tz = chunk
                .iter()
                .map(|&x| if x == 0 { 128 } else { x.trailing_zeros() })
                .min()
                .unwrap();
            if tz >= self.prec {
                continue;
            }
            let v = e * tz as i64 + self.field.offsets[slot] as i64;
            best = Some(best.map_or(v, |b: i64| b.min(v)));
        }
        match best {
            Some(v) => Ok(Val::Fin(v - e * self.den as i64)),
            None => Err(Error::PrecisionExhausted),
        }
    }

    /// Finite valuation; the exact zero is a domain error.
    pub fn val(&self) -> Result<i64> {
        match self.valuation()? {
            Val::Fin(v) => Ok(v),
            Val::Inf => Err(Error::Domain("valuation of zero".into())),
        }
    }

    /// True when every stored digit vanishes at the available precision.
    pub fn is_zero_to_precision(&self) -> bool {
        matches!(self.valuation(), Err(Error::PrecisionExhausted) | Ok(Val::Inf))
    }

    /// Residue class of an element of valuation zero.
    pub fn residue(&self) -> Result<ResidueElem> {
        if self.val()? != 0 {
            return Err(Error::Domain("residue of a non-unit".into()));
        }
        debug_assert_eq!(self.den, 0);
        let f = self.field.ring.f;
        let bits = (0..f).fold(0u32, |acc, k| acc | (((self.c[k] & 1) as u32) << k));
        Ok(ResidueElem(bits))
    }

    /// Residue of an integral element (zero on the maximal ideal).
    pub fn residue_integral(&self) -> Result<ResidueElem> {
        match self.valuation()? {
            Val::Inf => Ok(ResidueElem::ZERO),
            Val::Fin(v) if v > 0 => Ok(ResidueElem::ZERO),
            Val::Fin(0) => self.residue(),
            Val::Fin(_) => Err(Error::Domain("residue of a non-integral element".into())),
        }
    }

    fn unit_inverse(&self) -> Result<Elem> {
        let field = &self.field;
        let r = self.residue()?;
        let r_inv = field.residue().inv(r)?;
        let mut y = Elem::residue_lift(field, r_inv);
        let two = Elem::from_int(field, 2);
        for _ in 0..256 {
            let t = self.mul(&y);
            let d = t.sub(&Elem::one(field));
            if d.is_zero_to_precision() {
                return Ok(y);
            }
            y = y.mul(&two.sub(&t));
        }
        Err(Error::PrecisionExhausted)
    }

    pub fn inv(&self) -> Result<Elem> {
        let v = self.val()?;
        if v == 0 {
            return self.unit_inverse();
        }
        let field = &self.field;
        let shift = if v > 0 {
            field.pi_inv_elem().pow(v)
        } else {
            Elem::uniformizer(field).pow(-v)
        };
        let unit = self.mul(&shift);
        Ok(unit.unit_inverse()?.mul(&shift))
    }

    pub fn div(&self, other: &Elem) -> Result<Elem> {
        let (a, b) = self.same_field(other);
        Ok(a.mul(&b.inv()?))
    }

    /// Parts `(a, b)` in the parent with `self = a + b·π_E`.
    pub fn parts(&self) -> (Elem, Elem) {
        let parent = self.field.parent.as_ref().expect("parts of a quadratic step element");
        let h = self.c.len() / 2;
        if self.exact_zero {
            return (Elem::zero(parent), Elem::zero(parent));
        }
        (
            Elem::raw(parent, self.c[..h].to_vec(), self.den, self.prec),
            Elem::raw(parent, self.c[h..].to_vec(), self.den, self.prec),
        )
    }

    /// `a + b·π_E` for `a, b` in the parent.
    pub fn from_parts(field: &Field, a: &Elem, b: &Elem) -> Elem {
        let parent = field.parent.as_ref().expect("quadratic step");
        let a = a.lift_to(parent);
        let b = b.lift_to(parent);
        let pi = Elem::uniformizer(field);
        a.lift_to(field).add(&b.lift_to(field).mul(&pi))
    }

    /// The element as a member of the parent field, when its `π_E` part vanishes.
    pub fn project(&self) -> Option<Elem> {
        let (a, b) = self.parts();
        if b.is_zero_to_precision() {
            Some(a)
        } else {
            None
        }
    }

    /// Descend to an ancestor field, if the element lies there.
    pub fn project_to(&self, target: &Field) -> Option<Elem> {
        let mut x = self.clone();
        while !Arc::ptr_eq(&x.field, target) {
            if x.field.depth == 0 {
                return None;
            }
            x = x.project()?;
        }
        Some(x)
    }

    /// Relative norm down one quadratic step: `a² + ab·tr + b²·nm`.
    pub fn norm_step(&self) -> Elem {
        let step = self.field.step().expect("norm from a quadratic step");
        let (a, b) = self.parts();
        a.square()
            .add(&a.mul(&b).mul(&step.trace))
            .add(&b.square().mul(&step.norm))
    }

    /// Equality up to the available precision.
    pub fn approx_eq(&self, other: &Elem) -> bool {
        self.sub(other).is_zero_to_precision()
    }
}

impl TowerField {
    pub fn pi_inv_elem(self: &Field) -> Elem {
        let raw = self.pi_inv.get_or_init(|| {
            match &self.step {
                StepData::Eisenstein { coeffs } => {
                    let e = self.e_abs;
                    let f = self.ring.f;
                    // a_0 = 2w with w a unit of 𝔒_T
                    let w: Vec<u128> = coeffs[0].iter().map(|x| x >> 1).collect();
                    let w_inv = Elem::from_t(self, &w).unit_inverse().expect("unit");
                    let a0_inv = w_inv.div_pow2(1);
                    if e == 1 {
                        return a0_inv.neg().to_raw();
                    }
                    // π·(π^{e-1} + a_{e-1}π^{e-2} + ... + a_1) = −a_0
                    let mut c = vec![0u128; e * f];
                    c[(e - 1) * f] = 1;
                    for i in 1..e {
                        for k in 0..f {
                            c[(i - 1) * f + k] = coeffs[i][k];
                        }
                    }
                    let poly = Elem::raw(self, c, 0, self.ring.bits);
                    poly.mul(&a0_inv).neg().to_raw()
                }
                StepData::Quadratic(q) => {
                    // π(π − tr) = −nm, so π^{-1} = (tr − π)/nm.
                    let nm_inv = q.norm.inv().expect("norm is nonzero");
                    let pi = Elem::uniformizer(self);
                    let t = q.trace.lift_to(self);
                    t.sub(&pi).mul(&nm_inv.lift_to(self)).to_raw()
                }
            }
        });
        Elem::from_raw(self, raw)
    }

    /// Whether `√−1` lies in this field.
    pub fn contains_i(self: &Field) -> Result<bool> {
        let d = crate::squares::defect(&Elem::from_int(self, -1))?;
        Ok(d.value == Val::Inf)
    }
}

// ---------------------------------------------------------------------------
// Galois action

/// An automorphism of a tower field over its Eisenstein base, given by the
/// sign it puts on the root of each quadratic step (`true` = negate).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Automorphism {
    pub negate: Vec<bool>,
}

impl Automorphism {
    pub fn identity(depth: usize) -> Self {
        Self {
            negate: vec![false; depth],
        }
    }

    /// The involution of the step at tower depth `level` (1-based), identity below.
    pub fn step(depth: usize, level: usize) -> Self {
        let mut negate = vec![false; depth];
        negate[level - 1] = true;
        Self { negate }
    }

    pub fn compose(&self, other: &Automorphism) -> Automorphism {
        Automorphism {
            negate: self.negate.iter().zip(&other.negate).map(|(a, b)| a ^ b).collect(),
        }
    }

    fn restrict(&self, depth: usize) -> Automorphism {
        Automorphism {
            negate: self.negate[..depth].to_vec(),
        }
    }

    fn is_identity(&self) -> bool {
        self.negate.iter().all(|x| !x)
    }
}

/// Image of the uniformizer of `field` under `g`.
fn uniformizer_image(field: &Field, g: &Automorphism) -> Result<Elem> {
    let step = field.step().unwrap();
    let parent = field.parent.as_ref().unwrap();
    let below = g.restrict(parent.depth);
    if !below.is_identity() {
        let k = apply(&step.kappa, &below)?;
        if !k.approx_eq(&step.kappa) {
            return Err(Error::NotGaloisStable(field.depth));
        }
    }
    let mut y = Elem::root(field);
    if g.negate[field.depth - 1] {
        y = y.neg();
    }
    let pow = apply(&step.parent_pi_pow, &below)?.lift_to(field);
    Ok(match &step.shape {
        UnifShape::Unit { s, .. } => {
            let s = apply(s, &below)?.lift_to(field);
            s.mul(&y).sub(&Elem::one(field)).mul(&pow)
        }
        UnifShape::Prime { .. } => y.mul(&pow),
    })
}

/// Apply an automorphism of the tower to an element.
pub fn apply(x: &Elem, g: &Automorphism) -> Result<Elem> {
    let field = &x.field;
    let g = g.restrict(field.depth.min(g.negate.len()));
    if field.depth == 0 || g.is_identity() || x.exact_zero {
        return Ok(x.clone());
    }
    assert_eq!(g.negate.len(), field.depth, "automorphism depth");
    let (a, b) = x.parts();
    let below = g.restrict(field.depth - 1);
    let a = apply(&a, &below)?;
    let b = apply(&b, &below)?;
    let img = uniformizer_image(field, &g)?;
    Ok(a.lift_to(field).add(&b.lift_to(field).mul(&img)))
}

/// The involution `√κ ↦ −√κ` of the step at depth `level`, identity on the
/// other roots.
pub fn galois_conjugate(x: &Elem, level: usize) -> Result<Elem> {
    let depth = x.field.depth;
    if level == 0 || level > depth {
        return Err(Error::Domain(format!("no quadratic step at level {level}")));
    }
    apply(x, &Automorphism::step(depth, level))
}

/// Relative norm of `x` down one step (free function form).
pub fn norm_step(x: &Elem) -> Elem {
    x.norm_step()
}

/// Teichmüller representative of `a` in `field`.
pub fn teichmuller(a: ResidueElem, field: &Field) -> Result<Elem> {
    if a.is_zero() {
        return Err(Error::Domain("Teichmüller lift of zero".into()));
    }
    Ok(Elem::teichmuller(field, a))
}

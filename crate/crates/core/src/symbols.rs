//! Hilbert symbols, norm subgroups of quadratic steps and a norm-equation solver.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::localfield::{adjoin_sqrt, Elem, Field, Val};
use crate::squares::{class_dim, hasse_basis, square_class_vector, SquareClassVector};

type Mask = u128;

fn to_mask(v: &SquareClassVector) -> Mask {
    v.coords
        .iter()
        .enumerate()
        .fold(0, |acc, (i, &c)| acc | ((c as Mask) << i))
}

fn from_mask(m: Mask, dim: usize) -> SquareClassVector {
    SquareClassVector {
        coords: (0..dim).map(|i| (m >> i) & 1 == 1).collect(),
    }
}

/// Row-reduce; returns an echelon basis keyed by pivot bit.
fn echelon(vectors: impl IntoIterator<Item = Mask>) -> Vec<Mask> {
    let mut rows: Vec<Mask> = Vec::new();
    for mut v in vectors {
        for r in &rows {
            let p = 1 << (127 - r.leading_zeros());
            if v & p != 0 {
                v ^= r;
            }
        }
        if v != 0 {
            let p = 1 << (127 - v.leading_zeros());
            for r in rows.iter_mut() {
                if *r & p != 0 {
                    *r ^= v;
                }
            }
            rows.push(v);
        }
    }
    rows
}

fn reduce(rows: &[Mask], mut v: Mask) -> Mask {
    for r in rows {
        let p = 1 << (127 - r.leading_zeros());
        if v & p != 0 {
            v ^= r;
        }
    }
    v
}

fn parity(x: Mask) -> bool {
    x.count_ones() % 2 == 1
}

/// Image of `N_{E/F}` in `F*/F*²`.
#[derive(Clone, Debug)]
pub struct NormSubspace {
    pub dim: usize,
    pub basis: Vec<SquareClassVector>,
    rows: Vec<Mask>,
    /// Nonzero functional vanishing exactly on the subspace.
    functional: Mask,
}

impl NormSubspace {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn contains(&self, v: &SquareClassVector) -> bool {
        reduce(&self.rows, to_mask(v)) == 0
    }

    pub fn functional(&self) -> SquareClassVector {
        from_mask(self.functional, self.dim)
    }
}

/// Norm subgroup of the quadratic step `E` over its parent.
pub fn norm_subgroup(e: &Field) -> Result<NormSubspace> {
    let parent = e
        .parent()
        .ok_or_else(|| Error::Domain("norm subgroup of a base field".into()))?
        .clone();
    let dim = class_dim(&parent);
    let one = Elem::one(e);
    let pi = Elem::uniformizer(e);
    let res = e.residue().clone();
    let mut gens = vec![pi.clone()];
    for a in res.basis() {
        gens.push(Elem::teichmuller(e, a));
    }
    gens.push(Elem::teichmuller(e, res.generator()));
    for l in 1..=(2 * e.e_abs() + 2) as i64 {
        let p = pi.pow(l);
        for a in res.basis() {
            gens.push(one.add(&Elem::teichmuller(e, a).mul(&p)));
        }
    }
    let mut vecs = Vec::with_capacity(gens.len());
    for g in &gens {
        let n = g
            .norm_step()
            .project_to(&parent)
            .ok_or(Error::PrecisionExhausted)?;
        vecs.push(to_mask(&square_class_vector(&n)?));
    }
    let rows = echelon(vecs);
    if rows.len() + 1 != dim {
        return Err(Error::PrecisionExhausted);
    }
    let functional = (1..(1 as Mask) << dim)
        .find(|&h| rows.iter().all(|&r| !parity(r & h)))
        .expect("hyperplane has an annihilator");
    let basis = rows.iter().map(|&r| from_mask(r, dim)).collect();
    Ok(NormSubspace {
        dim,
        basis,
        rows,
        functional,
    })
}

/// Gram matrix of the Hilbert pairing in the square-class basis.
#[derive(Clone, Debug)]
pub struct HilbertPairing {
    pub dim: usize,
    pub gram: Vec<Vec<bool>>,
}

impl HilbertPairing {
    /// `true` means symbol `−1`.
    pub fn pair(&self, a: &SquareClassVector, b: &SquareClassVector) -> bool {
        let mut acc = false;
        for i in 0..self.dim {
            if !a.coords[i] {
                continue;
            }
            for j in 0..self.dim {
                if b.coords[j] && self.gram[i][j] {
                    acc = !acc;
                }
            }
        }
        acc
    }

    pub fn is_nondegenerate(&self) -> bool {
        let rows: Vec<Mask> = self
            .gram
            .iter()
            .map(|r| r.iter().enumerate().fold(0, |acc, (i, &c)| acc | ((c as Mask) << i)))
            .collect();
        echelon(rows).len() == self.dim
    }
}

pub fn build_pairing(field: &Field) -> Result<HilbertPairing> {
    let dim = class_dim(field);
    let basis = hasse_basis(field);
    let mut gram = vec![vec![false; dim]; dim];
    // rows from the ramified basis classes; the unramified class by symmetry
    for i in 0..dim - 1 {
        let e = adjoin_sqrt(field, &basis[i])?;
        let ns = norm_subgroup(&e)?;
        for (j, g) in gram[i].iter_mut().enumerate() {
            *g = (ns.functional >> j) & 1 == 1;
        }
    }
    for j in 0..dim - 1 {
        gram[dim - 1][j] = gram[j][dim - 1];
    }
    gram[dim - 1][dim - 1] = false;
    for i in 0..dim {
        for j in 0..i {
            if gram[i][j] != gram[j][i] {
                return Err(Error::PrecisionExhausted);
            }
        }
    }
    let p = HilbertPairing { dim, gram };
    if !p.is_nondegenerate() {
        return Err(Error::PrecisionExhausted);
    }
    Ok(p)
}

/// The cached pairing of `field`.
pub fn pairing(field: &Field) -> Result<Arc<HilbertPairing>> {
    if let Some(p) = field.pairing.get() {
        return Ok(p.clone());
    }
    let p = Arc::new(build_pairing(field)?);
    Ok(field.pairing.get_or_init(|| p).clone())
}

/// `(u, v)` as `±1`.
pub fn hilbert_symbol(u: &Elem, v: &Elem) -> Result<i8> {
    let (u, v) = if u.field().is_ancestor_of(v.field()) {
        (u.lift_to(v.field()), v.clone())
    } else {
        (u.clone(), v.lift_to(u.field()))
    };
    let p = pairing(u.field())?;
    let a = square_class_vector(&u)?;
    let b = square_class_vector(&v)?;
    Ok(if p.pair(&a, &b) { -1 } else { 1 })
}

/// `η ∈ E` with `N_{E/F}(η) = c` to the precision cap.
pub fn solve_norm_equation(e: &Field, c: &Elem) -> Result<Elem> {
    let step = e
        .step()
        .ok_or_else(|| Error::Domain("norm equation over a base field".into()))?;
    let parent = e.parent().unwrap().clone();
    let c = c.lift_to(&parent);
    let pi = Elem::uniformizer(e);
    let v = c.val()?;
    let mut eta = pi.pow(v);
    let mut r = c.div(&eta.norm_step().project_to(&parent).ok_or(Error::PrecisionExhausted)?)?;
    let res = parent.residue().clone();
    let a = r.residue()?;
    let g = Elem::teichmuller(&parent, res.sqrt(a));
    eta = eta.mul(&g.lift_to(e));
    r = r.div(&g.square())?;
    let b = 2 * parent.e_abs() as i64 - step.kappa_defect();
    let e2 = 2 * parent.e_abs() as i64;
    let one_f = Elem::one(&parent);
    let one_e = Elem::one(e);
    let level = |r: &Elem| -> Result<Option<i64>> {
        match r.sub(&one_f).valuation() {
            Ok(Val::Inf) | Err(Error::PrecisionExhausted) => Ok(None),
            Ok(Val::Fin(l)) => Ok(Some(l)),
            Err(err) => Err(err),
        }
    };
    let stalled = || -> Result<Elem> {
        let kappa = step.kappa();
        if hilbert_symbol(kappa, &c)? == -1 {
            Err(Error::NotANorm)
        } else {
            Err(Error::SolverStalled)
        }
    };
    while let Some(l) = level(&r)? {
        if l > e2 {
            // r is a square in F; N(g) = g² for g ∈ F
            let g = one_f.add(&r.sub(&one_f).div_pow2(1));
            let r2 = r.div(&g.square())?;
            match level(&r2)? {
                Some(l2) if l2 <= l => break,
                _ => {}
            }
            eta = eta.mul(&g.lift_to(e));
            r = r2;
            continue;
        }
        let mut js: Vec<i64> = vec![l, 2 * l - b];
        js.extend(1..=(2 * e2 + 2));
        let mut advanced = false;
        'search: for j in js {
            if j <= 0 {
                continue;
            }
            let p = pi.pow(j);
            for a in res.nonzero() {
                let g = one_e.add(&Elem::teichmuller(e, a).mul(&p));
                let Some(n) = g.norm_step().project_to(&parent) else {
                    continue;
                };
                let r2 = r.div(&n)?;
                let better = match level(&r2)? {
                    None => true,
                    Some(l2) => l2 > l,
                };
                if better {
                    eta = eta.mul(&g);
                    r = r2;
                    advanced = true;
                    break 'search;
                }
            }
        }
        if !advanced {
            return stalled();
        }
    }
    Ok(eta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localfield::make_base_field;

    fn q2() -> Field {
        make_base_field(1, &[vec![-2]], 24).unwrap()
    }

    #[test]
    fn q2_table() {
        let k = q2();
        let s = |a: i64, b: i64| hilbert_symbol(&Elem::from_int(&k, a), &Elem::from_int(&k, b)).unwrap();
        assert_eq!(s(-1, -1), -1);
        assert_eq!(s(2, 5), -1);
        assert_eq!(s(2, -1), 1);
        assert_eq!(s(-1, 5), 1);
        assert_eq!(s(-1, 3), -1);
        assert_eq!(s(2, 3), -1);
        assert_eq!(s(5, 5), 1);
        for a in [1i64, -1, 2, -2, 5, -5, 10, -10] {
            assert_eq!(s(a, -a), 1);
        }
    }

    #[test]
    fn norm_subgroup_sqrt2() {
        let k = q2();
        let e = adjoin_sqrt(&k, &Elem::from_int(&k, 2)).unwrap();
        let ns = norm_subgroup(&e).unwrap();
        assert_eq!(ns.rank(), 2);
        assert!(ns.contains(&square_class_vector(&Elem::from_int(&k, -2)).unwrap()));
        assert!(!ns.contains(&square_class_vector(&Elem::from_int(&k, 5)).unwrap()));
    }

    #[test]
    fn solve_small() {
        let k = q2();
        let e = adjoin_sqrt(&k, &Elem::from_int(&k, -1)).unwrap();
        let c = Elem::from_int(&k, 2);
        let eta = solve_norm_equation(&e, &c).unwrap();
        assert!(eta.norm_step().approx_eq(&c.lift_to(&e).project().unwrap()));
        let e2 = adjoin_sqrt(&k, &Elem::from_int(&k, 2)).unwrap();
        assert_eq!(solve_norm_equation(&e2, &Elem::from_int(&k, 5)).unwrap_err(), Error::NotANorm);
        let k2 = make_base_field(2, &[vec![2], vec![2]], 28).unwrap();
        let pi = Elem::uniformizer(&k2);
        let e3 = adjoin_sqrt(&k2, &Elem::one(&k2).add(&pi)).unwrap();
        let eta0 = Elem::one(&e3).add(&Elem::uniformizer(&e3).pow(3)).add(&Elem::root(&e3));
        let c = eta0.norm_step();
        let eta = solve_norm_equation(&e3, &c).unwrap();
        assert!(eta.norm_step().approx_eq(&c));
    }

    #[test]
    fn pairing_is_symmetric_nondegenerate() {
        for k in [
            q2(),
            make_base_field(1, &[vec![2], vec![2]], 24).unwrap(),
            make_base_field(2, &[vec![2], vec![2]], 24).unwrap(),
        ] {
            let p = pairing(&k).unwrap();
            assert!(p.is_nondegenerate());
        }
    }
}

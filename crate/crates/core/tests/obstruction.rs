//! Over a residue field `F₂` with `i ∈ K`, two-break pairs with `s2 = 4e − 3s1`
//! never embed.

mod common;

use quatram::cli::resolve_field;
use quatram::localfield::{adjoin_sqrt, Elem, Field};
use quatram::ramify::biquadratic_breaks;
use quatram::squares::{class_dim, class_representative, SquareClassVector};
use quatram::symbols::hilbert_symbol;

use common::{brute_hilbert, SquareOracle};

fn field(name: &str) -> Field {
    resolve_field(name).unwrap().build().unwrap()
}

fn all_classes(k: &Field) -> Vec<Elem> {
    let dim = class_dim(k);
    (1u32..(1 << dim))
        .map(|m| {
            let mut v = SquareClassVector::zero(dim);
            for (i, c) in v.coords.iter_mut().enumerate() {
                *c = m >> i & 1 == 1;
            }
            class_representative(k, &v)
        })
        .collect()
}

/// `(symbol, u, v)` for every pair whose breaks are `(s1, 4e − 3s1)`.
fn boundary_pairs(k: &Field) -> Vec<(i8, Elem, Elem)> {
    let e = k.e_abs() as i64;
    let reps = all_classes(k);
    let mut out = Vec::new();
    for i in 0..reps.len() {
        for j in i + 1..reps.len() {
            let Ok(bb) = biquadratic_breaks(&reps[i], &reps[j]) else {
                continue;
            };
            if bb.b1 != bb.b2 && bb.b2 == 4 * e - 3 * bb.b1 {
                let h = hilbert_symbol(&reps[i], &reps[j]).unwrap();
                out.push((h, reps[i].clone(), reps[j].clone()));
            }
        }
    }
    out
}

#[test]
fn boundary_pairs_never_embed_when_f_is_one() {
    for name in ["q2i", "q2z8"] {
        let pairs = boundary_pairs(&field(name));
        assert!(!pairs.is_empty(), "{name}");
        assert!(pairs.iter().all(|p| p.0 == -1), "{name}");
    }
}

#[test]
fn brute_force_confirms_over_gaussian_field() {
    let k = field("q2i");
    let sq = SquareOracle::new(&k);
    for (h, u, v) in boundary_pairs(&k) {
        assert_eq!(brute_hilbert(&sq, &u, &v), h);
    }
}

#[test]
fn boundary_symbol_can_be_trivial_when_f_is_two_or_i_is_missing() {
    for name in ["t4i", "q2r4"] {
        let pairs = boundary_pairs(&field(name));
        assert!(pairs.iter().any(|p| p.0 == 1), "{name}");
    }
}

#[test]
fn norm_at_the_break_cancels_over_f2() {
    let k = field("q2i");
    let one = Elem::one(&k);
    let u = one.add(&Elem::uniformizer(&k).pow(3));
    let l = adjoin_sqrt(&k, &u).unwrap();
    let nu = Elem::one(&l).add(&Elem::uniformizer(&l));
    let n = nu.norm_step();
    assert_eq!(n.sub(&one).val().unwrap(), 2);
}

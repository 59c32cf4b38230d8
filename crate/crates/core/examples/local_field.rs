//! Build a dyadic field, adjoin square roots and read off breaks.
use quatram::localfield::{adjoin_sqrt, make_base_field, Elem};
use quatram::ramify::break_of_step;

fn main() -> quatram::Result<()> {
    // Q_2(i) as Q_2[π]/(π² + 2π + 2)
    let k = make_base_field(1, &[vec![2], vec![2]], 40)?;
    let pi = Elem::uniformizer(&k);
    let x = Elem::from_int(&k, 12).add(&pi.pow(3));
    println!("e={} f={} contains i: {}", k.e_abs(), k.f_abs(), k.contains_i()?);
    println!("v(12 + π³) = {}", x.valuation()?);
    println!("(12 + π³)·(12 + π³)⁻¹ = 1: {}", x.mul(&x.inv()?).approx_eq(&Elem::one(&k)));
    for j in [1, 3] {
        let kappa = Elem::one(&k).add(&pi.pow(j));
        let l = adjoin_sqrt(&k, &kappa)?;
        println!("K(√(1 + π^{j})): break {}", break_of_step(&l)?);
    }
    let l = adjoin_sqrt(&k, &pi)?;
    let y = Elem::root(&l);
    println!("K(√π): y² = π: {}, N(y) = −π: {}", y.square().approx_eq(&pi.lift_to(&l)), y.norm_step().approx_eq(&pi.neg()));
    Ok(())
}

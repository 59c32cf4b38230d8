//! Solve `N_{E/F}(η) = c` in a quadratic step.
use quatram::localfield::{adjoin_sqrt, make_base_field, Elem};
use quatram::symbols::{norm_subgroup, solve_norm_equation};
use quatram::Error;

fn main() -> quatram::Result<()> {
    let k = make_base_field(1, &[vec![2], vec![2]], 40)?;
    let pi = Elem::uniformizer(&k);
    let e = adjoin_sqrt(&k, &Elem::one(&k).add(&pi.pow(3)))?;
    let sub = norm_subgroup(&e)?;
    println!("norm subgroup has rank {} in a space of dimension {}", sub.rank(), sub.dim);
    for c in [Elem::from_int(&k, 5), pi.clone(), Elem::one(&k).add(&pi)] {
        match solve_norm_equation(&e, &c) {
            Ok(eta) => println!("η found, N(η) = c: {}", eta.norm_step().approx_eq(&c)),
            Err(Error::NotANorm) => println!("c is not a norm"),
            Err(err) => return Err(err),
        }
    }
    Ok(())
}

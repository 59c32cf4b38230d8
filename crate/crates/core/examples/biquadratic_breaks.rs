//! Lower breaks of `K(√u, √v)/K`.
use quatram::localfield::{make_base_field, Elem};
use quatram::ramify::{biquadratic_breaks, upper_breaks};

fn main() -> quatram::Result<()> {
    let k = make_base_field(2, &[vec![2], vec![2]], 40)?;
    let pi = Elem::uniformizer(&k);
    let one = Elem::one(&k);
    let w = Elem::teichmuller(&k, k.residue().generator());
    let pairs = [
        ("1+π³, 1+π", one.add(&pi.pow(3)), one.add(&pi)),
        ("1+π³, π", one.add(&pi.pow(3)), pi.clone()),
        ("1+π³, 1+ω²π³", one.add(&pi.pow(3)), one.add(&w.square().mul(&pi.pow(3)))),
    ];
    for (name, u, v) in pairs {
        let bb = biquadratic_breaks(&u, &v)?;
        let ub: Vec<String> = upper_breaks(&bb.break_data()).iter().map(|x| x.to_string()).collect();
        println!("{name}: subfield breaks {:?}, lower ({}, {}), upper [{}]", bb.subfield, bb.b1, bb.b2, ub.join(", "));
    }
    Ok(())
}

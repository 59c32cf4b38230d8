//! Arithmetic in the residue field `F_{2^f}`.
use quatram::ResidueField;

fn main() -> quatram::Result<()> {
    let f8 = ResidueField::new(3);
    let g = f8.generator();
    println!("F_8 modulus bits {:#b}, generator {g}", f8.modulus());
    for a in f8.nonzero() {
        let root = f8.artin_schreier_root(a);
        println!(
            "a={a} a^-1={} sqrt={} Tr={} order={} x^2+x=a solvable={}",
            f8.inv(a)?,
            f8.sqrt(a),
            f8.trace(a),
            f8.order_of(a)?,
            root.is_some()
        );
    }
    let f4 = ResidueField::new(2);
    for a in f4.nonzero().filter(|&a| a != quatram::ResidueElem::ONE) {
        println!("F_4: {a} is a cube root of unity: {}", f4.is_cube_root_of_unity(a)?);
    }
    println!("trace-one element of F_8: {}", f8.trace_one());
    Ok(())
}

//! Defects, square-class vectors and the class basis.
use quatram::localfield::{make_base_field, Elem};
use quatram::squares::{defect, hasse_basis, square_class_vector};

fn main() -> quatram::Result<()> {
    let q2 = make_base_field(1, &[vec![2]], 32)?;
    for n in [1, 3, 5, 7, 2, 6, 10, 14, 17, -1] {
        let x = Elem::from_int(&q2, n);
        println!("{n:>3}: defect {} class {}", defect(&x)?.value, square_class_vector(&x)?.bits());
    }
    let k = make_base_field(2, &[vec![2], vec![2]], 40)?;
    println!("basis of K*/K*² for e = f = 2:");
    for b in hasse_basis(&k) {
        println!("  defect {:>2} class {}", defect(&b)?.value, square_class_vector(&b)?.bits());
    }
    Ok(())
}

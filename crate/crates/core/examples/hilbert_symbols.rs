//! The quadratic Hilbert symbol table of Q_2.
use quatram::localfield::{make_base_field, Elem};
use quatram::symbols::hilbert_symbol;

fn main() -> quatram::Result<()> {
    let q2 = make_base_field(1, &[vec![2]], 32)?;
    let reps = [1, 3, 5, 7, 2, 6, 10, 14];
    print!("    ");
    for b in reps {
        print!("{b:>4}");
    }
    println!();
    for a in reps {
        print!("{a:>4}");
        for b in reps {
            let s = hilbert_symbol(&Elem::from_int(&q2, a), &Elem::from_int(&q2, b))?;
            print!("{s:>4}");
        }
        println!();
    }
    Ok(())
}

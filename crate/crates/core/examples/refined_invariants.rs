//! Refined break `r` of a one-break biquadratic extension, by formula and
//! directly from the Galois action.
use quatram::localfield::{make_base_field, Elem};
use quatram::ramify::{normal_form_tower, refined_break_direct, refined_from_normal_form};
use quatram::squares::OneBreakNormalForm;
use quatram::ResidueElem;

fn main() -> quatram::Result<()> {
    let k = make_base_field(2, &[vec![2], vec![2]], 40)?;
    let pi = Elem::uniformizer(&k);
    for (b, mu) in [(1, Elem::zero(&k)), (3, Elem::zero(&k)), (3, pi.clone())] {
        let nf = OneBreakNormalForm {
            beta: pi.pow(4 - b),
            omega: ResidueElem(2),
            mu,
            lambda: ResidueElem::ZERO,
        };
        let inv = refined_from_normal_form(&nf)?;
        let tower = normal_form_tower(&nf)?;
        let (direct, _) = refined_break_direct(&tower.m, &tower.rho)?;
        println!("b={} m={:?}: r={} (direct {direct}), ω³=1: {}", inv.b, inv.m, inv.r, inv.is_cube);
    }
    Ok(())
}

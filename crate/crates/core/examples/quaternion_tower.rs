//! Build `N = K(√u, √v, √α_k)` and scan `k` for the possible top breaks.
use std::collections::BTreeSet;

use quatram::localfield::{make_base_field, Elem};
use quatram::quaternion::{embeddable, normalize_uv, QuaternionSetup};
use quatram::ramify::break_of_step;

fn main() -> quatram::Result<()> {
    let k = make_base_field(2, &[vec![2], vec![2]], 40)?;
    let pi = Elem::uniformizer(&k);
    let one = Elem::one(&k);
    let w = Elem::teichmuller(&k, k.residue().generator());
    let u = one.add(&pi.pow(3));
    let v = one.add(&w.square().mul(&pi.pow(3)));
    println!("embeddable: {}", embeddable(&u, &v)?);
    let (u, v) = normalize_uv(&u, &v)?;
    let setup = QuaternionSetup::new(&u, &v)?;
    let mut seen = BTreeSet::new();
    for kk in setup.k_candidates() {
        if let Ok(q) = setup.build(&kk) {
            let top = break_of_step(&q.top_field()?)?;
            seen.insert((q.triple.to_string(), top));
        }
    }
    for (t, top) in seen {
        println!("{t} (top break measured in N: {top})");
    }
    Ok(())
}

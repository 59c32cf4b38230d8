//! Triples whose upper numbers are not integers.
use quatram::catalog::hasse_arf_exceptions;
use quatram::ramify::{quaternion_break_data, upper_breaks};

fn main() {
    for e in 1..=5 {
        for t in hasse_arf_exceptions(e) {
            let ub: Vec<String> = upper_breaks(&quaternion_break_data(&t.triple())).iter().map(|u| u.to_string()).collect();
            println!("e={e} [{}] ({}, {}, {}): upper {}", t.tag, t.s1, t.s2, t.s3, ub.join(", "));
        }
    }
}

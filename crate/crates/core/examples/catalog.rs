//! Admissible triples for each tag, e.g. `cargo run --example catalog -- 3`.
use quatram::catalog::enumerate;
use quatram::ramify::ClassTag;

fn main() {
    let e: i64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(2);
    for tag in ClassTag::ALL {
        let rows = enumerate(tag, e);
        println!("[{tag}] e={e}: {} triples", rows.len());
        for t in rows {
            println!("  ({}, {}, {}){}", t.s1, t.s2, t.s3, if t.stable { " stable" } else { "" });
        }
    }
}

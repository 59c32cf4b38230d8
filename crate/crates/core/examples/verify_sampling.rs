//! Seeded random quaternion extensions with every structural check applied.
use quatram::cli::{resolve_field, run_verify};

fn main() -> quatram::Result<()> {
    let spec = resolve_field("q2sqrt2")?;
    let (rows, summary) = run_verify(&spec, 25, 7)?;
    for r in &rows {
        println!(
            "u={} v={} k={} [{}] ({},{},{}) in catalog {} violations '{}'",
            r.u, r.v, r.k, r.tag, r.s1, r.s2, r.s3, r.in_catalog, r.violations
        );
    }
    println!("{summary:?}");
    Ok(())
}

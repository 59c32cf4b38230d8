//! Realize every catalog triple over a field containing i and re-measure it.
use quatram::catalog::{enumerate, witness};
use quatram::cli::resolve_field;
use quatram::ramify::ClassTag;

fn main() -> quatram::Result<()> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "t4i".into());
    let k = resolve_field(&name)?.build()?;
    let e = k.e_abs() as i64;
    for tag in ClassTag::ALL {
        for t in enumerate(tag, e) {
            match witness(&k, &t).and_then(|w| w.execute()) {
                Ok(o) => println!("{} -> {} via {:?} after {} candidates", t.triple(), o.measured, o.recipe_case, o.tried),
                Err(err) => println!("{} -> {err}", t.triple()),
            }
        }
    }
    Ok(())
}

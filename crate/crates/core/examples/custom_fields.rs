//! Fields from inline specs and TOML presets.
use quatram::cli::{parse_config, parse_inline};

fn main() -> quatram::Result<()> {
    // f = 2, Eisenstein x³ − 2, 48 working bits
    let inline = parse_inline("2,3,-2;0;0,48")?;
    let k = inline.build()?;
    println!("inline: e={} f={} contains i: {}", k.e_abs(), k.f_abs(), k.contains_i()?);
    let toml = r#"
        [fields.gauss]
        f = 1
        eis = [[2], [2]]

        [fields.gauss4]
        f = 2
        eis = [[2], [2]]
        bits = 48
    "#;
    for spec in parse_config(toml)? {
        let k = spec.build()?;
        println!("{}: e={} f={} contains i: {}", spec.name, k.e_abs(), k.f_abs(), k.contains_i()?);
    }
    Ok(())
}

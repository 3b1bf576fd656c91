//! Even continued fraction, channel indices and the exceptional rewrite.
//!
//! `cargo run --example even_expansion -- 17/58`

use twobridge::contfrac::{ch3_rewrite, channel_indices, even_expansion, exceptional_form, ExtRational};

fn main() -> anyhow::Result<()> {
    let arg = std::env::args().nth(1).unwrap_or_else(|| "17/58".to_string());
    let x: ExtRational = arg.parse()?;
    let cf = even_expansion(&x)?;
    println!("{x} = {cf}");
    println!("channel indices: {:?}", channel_indices(&cf));
    match exceptional_form(&cf) {
        Some(form) => {
            let w = ch3_rewrite(&form);
            println!("exceptional: {form:?}");
            println!("rewrites to form {} = {} (m={}, n={}, l={})", w.form.id(), w.cf, w.m, w.n, w.l);
            println!("value check: {} == {}", w.cf.value(), cf.value());
        }
        None => println!("not an exceptional shape"),
    }
    Ok(())
}

//! Prints the slope table rows for one family member, with the formulas.
//!
//! `cargo run --example slopes_table -- b4 1 2 2`

use twobridge::classifier::{Family, FamilyMatch};
use twobridge::slopes::{candidate_slopes, surgery_description, tables, Policy};

fn main() -> anyhow::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let family: Family = args.first().map_or("a1", String::as_str).parse()?;
    let num = |i: usize, d: i64| -> anyhow::Result<i64> { Ok(args.get(i).map(|s| s.parse()).transpose()?.unwrap_or(d)) };
    let l = family.has_l().then(|| num(3, 2)).transpose()?;
    let fm = FamilyMatch::new(family, num(1, 1)?, num(2, 2)?, l)?;

    let desc = surgery_description(&fm)?;
    let coefs: Vec<String> = desc
        .coefficients
        .iter()
        .map(|c| match c.value.to_i64() {
            Some(n) => format!("{} = {n}", c.name),
            None => format!("{} = {}", c.name, c.value),
        })
        .collect();
    println!("{fm}: surgery coefficients {}", coefs.join(", "));

    for row in tables().rows.iter().filter(|r| r.applies(&fm)) {
        println!("row {} on {}", row.id, row.link);
        for [a, b] in &row.pairs {
            println!("  ({}, {})", a.typeset(), b.typeset());
        }
    }
    for rs in candidate_slopes(&fm, Policy::Union) {
        let list: Vec<String> = rs.pairs.iter().map(ToString::to_string).collect();
        println!("union: {}", list.join(" "));
    }
    Ok(())
}

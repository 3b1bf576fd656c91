//! Classifies a few two-bridge links and prints the verdicts.
//!
//! `cargo run --example classify -- 3/8 19/30 17/44`

use twobridge::classifier::{classify, Verdict};
use twobridge::contfrac::ExtRational;

fn main() -> anyhow::Result<()> {
    let mut args: Vec<String> = std::env::args().skip(1).collect();
    if args.is_empty() {
        args = ["3/8", "19/30", "17/44", "13/42"].map(String::from).to_vec();
    }
    for a in args {
        let x: ExtRational = a.parse()?;
        match classify(&x) {
            Ok(Verdict::NoCompleteExceptional { cf, mirrored, witness, .. }) => println!(
                "{x}: no complete exceptional surgery; cf {cf}, mirrored {mirrored}, witness with {} channels",
                witness.channel_count()
            ),
            Ok(Verdict::Candidate { cf, mirrored, family, slopes, .. }) => {
                let list: Vec<String> = slopes.iter().map(ToString::to_string).collect();
                println!("{x}: {family} via cf {cf}, mirrored {mirrored}; slopes {}", list.join(" "));
            }
            Err(e) => println!("{x}: {e}"),
        }
    }
    Ok(())
}

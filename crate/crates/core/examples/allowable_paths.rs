//! Compares the case construction with the exhaustive search.
//!
//! `cargo run --example allowable_paths -- 4,2,-2,-4,-2`

use twobridge::contfrac::EvenCF;
use twobridge::diagram::Diagram;
use twobridge::pathfinder::{construct_case_path, is_allowable, search_max_channels, SearchOutcome, DEFAULT_NODE_BUDGET};

fn main() -> anyhow::Result<()> {
    let mut inputs: Vec<String> = std::env::args().skip(1).collect();
    if inputs.is_empty() {
        inputs = ["4,2,-2,-4,-2", "2,-2,2,2,-2", "4,2,4,2,2", "4,-2,-4,-2,-2"].map(String::from).to_vec();
    }
    for s in inputs {
        let entries: Vec<i64> = s.split(',').map(|x| x.trim().parse()).collect::<Result<_, _>>()?;
        let cf = EvenCF::new(entries)?;
        let d = Diagram::build(&cf);
        println!("{cf}");
        match construct_case_path(&cf) {
            Ok(c) => {
                let arcs = serde_json::to_string(&c.path)?;
                println!("  construction: {:?} at indices {:?}: {arcs}", c.label.kinds, c.indices);
                println!("  allowable: {}", is_allowable(&d, c.path.arcs())?.is_none());
            }
            Err(e) => println!("  construction: {e}"),
        }
        match search_max_channels(&d, 3, DEFAULT_NODE_BUDGET)? {
            SearchOutcome::Found(p) => println!("  search: found {} channels", p.channel_count()),
            SearchOutcome::ProvenAbsent { best, .. } => println!("  search: proven absent, best {best}"),
        }
    }
    Ok(())
}

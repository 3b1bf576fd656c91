//! Draws the diagram of a fraction as SVG and DOT, highlighting a best path.
//!
//! `cargo run --example diagram_svg -- 2,-2,2,2,-2 out_dir`

use std::path::PathBuf;

use twobridge::diagram::{check_invariants, emit, Diagram, Format};
use twobridge::pathfinder::{max_channels, DEFAULT_NODE_BUDGET};

fn main() -> anyhow::Result<()> {
    let mut args = std::env::args().skip(1);
    let entries: Vec<i64> = args
        .next()
        .unwrap_or_else(|| "2,-2,2,2,-2".to_string())
        .split(',')
        .map(|s| s.trim().parse())
        .collect::<Result<_, _>>()?;
    let dir = args.next().map_or_else(std::env::temp_dir, PathBuf::from);

    let d = Diagram::from_entries(&entries, true)?;
    check_invariants(&d)?;
    let (best, path) = max_channels(&d, DEFAULT_NODE_BUDGET)?;
    let overlay = path.as_ref().map(|p| p.overlay());
    println!("{:?}, max channels {best}", d.stats());

    for (format, ext) in [(Format::Svg, "svg"), (Format::Dot, "dot")] {
        let out = dir.join(format!("diagram.{ext}"));
        std::fs::write(&out, emit(&d, format, overlay.as_ref())?)?;
        println!("wrote {}", out.display());
    }
    Ok(())
}

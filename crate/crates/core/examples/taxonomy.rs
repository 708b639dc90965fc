//! Induces a word taxonomy from the demo catalog: words are banded by
//! document frequency and each word is linked to its most correlated word
//! in the band above.
//!
//!     cargo run --example taxonomy -- 12 11

mod support;

use lexis::organize::{build_taxonomy, TaxonomyConfig};

fn main() -> lexis::Result<()> {
    let mut args = std::env::args().skip(1).map(|a| a.parse::<usize>().expect("a number"));
    let config = TaxonomyConfig {
        levels: args.next().unwrap_or(12),
        output_levels: args.next().unwrap_or(11),
    };
    config.validate()?;
    let engine = support::demo_engine("taxonomy");
    let forest = build_taxonomy(&engine.snapshot().catalog, &config)?;
    for level in &forest.levels {
        if forest.kept.contains(&level.level) {
            println!("level {} (df {:.1}..{:.1}): {} words", level.level, level.low, level.high, level.words.len());
        }
    }
    // top words and a few children of each
    let top = forest.kept.iter().max().copied().unwrap_or(1);
    for root in &forest.level(top).map(|l| l.words.clone()).unwrap_or_default() {
        let children: Vec<&String> = forest.parents.iter().filter(|(_, p)| *p == root).map(|(c, _)| c).collect();
        println!("{root}: {}", children.iter().take(12).map(|s| s.as_str()).collect::<Vec<_>>().join(" "));
    }
    Ok(())
}

//! Stems Greek and English words and shows the intermediate Greek forms.
//!
//!     cargo run --example stemming -- αναδιεταξα running πρακτικος

use lexis::stem::{stem_english, stem_greek, GreekRuleSet};
use lexis::text::{is_greek, Analyzer, AnalyzerSettings};

fn main() {
    let mut words: Vec<String> = std::env::args().skip(1).collect();
    if words.is_empty() {
        words = ["αναδιεταξα", "πραγματα", "παω", "κάθε", "connections", "relational", "generalization"]
            .map(String::from)
            .to_vec();
    }
    let rules = GreekRuleSet::default();
    for word in &words {
        if is_greek(word) {
            let (stem, trace) = stem_greek(word, &rules);
            println!("{word} -> {stem}  ({:?})", trace.outcome);
            println!("    split      {}", trace.word_split());
            println!("    first stem {}", trace.prefixes_first_stem());
            println!("    alternate  {}", trace.increment_alternate());
            if let Some((suffix, kind)) = &trace.suffix {
                println!("    suffix     -{suffix} ({kind:?})");
            }
        } else {
            println!("{word} -> {}", stem_english(word));
        }
    }

    // the analyzer folds case and accents, drops stopwords, then stems
    let analyzer = Analyzer::with_settings(AnalyzerSettings::default());
    let text = "Οι αστρονόμοι παρατηρούν τους πλανήτες and the astronomers observe the planets";
    println!("\n{text}\n  => {}", analyzer.terms(text).join(" "));
}

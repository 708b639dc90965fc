//! Term-frequency distribution of the lexicon and a log-log least-squares
//! power-law fit.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::index::Catalog;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DistributionMode {
    /// x = frequency rank (1 = most frequent), y = occurrences
    #[default]
    Rank,
    /// x = occurrence count, y = number of terms with that count
    CountOfCounts,
}

impl std::str::FromStr for DistributionMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "rank" => Ok(DistributionMode::Rank),
            "count-of-counts" | "count_of_counts" => Ok(DistributionMode::CountOfCounts),
            other => Err(format!("unknown distribution mode `{other}` (expected rank or count-of-counts)")),
        }
    }
}

/// Total body occurrences per term, most frequent first, ties by term.
pub fn term_totals(catalog: &Catalog) -> Vec<(String, u64)> {
    let mut totals: BTreeMap<u32, u64> = BTreeMap::new();
    for occ in catalog.occurrences() {
        *totals.entry(occ.word_id).or_insert(0) += u64::from(occ.freq);
    }
    let mut out: Vec<(String, u64)> = catalog
        .words()
        .map(|w| (w.name.clone(), totals.get(&w.id).copied().unwrap_or(0)))
        .filter(|(_, n)| *n > 0)
        .collect();
    out.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerLawFit {
    pub exponent: f64,
    /// |Pearson r| of the log-log points
    pub acc: f64,
    /// log10 intercept of the fitted line
    pub intercept: f64,
}

/// Least-squares line through (log10 x, log10 y). The exponent is the
/// negated slope and acc the absolute correlation; a flat y gives acc 1.
pub fn fit_power_law(points: &[(f64, f64)]) -> Result<PowerLawFit> {
    if points.len() < 3 {
        return Err(Error::Fit(format!("need at least 3 points, got {}", points.len())));
    }
    if let Some(p) = points.iter().find(|(x, y)| !(*x > 0.0 && *y > 0.0)) {
        return Err(Error::Fit(format!("non-positive point ({}, {})", p.0, p.1)));
    }
    let n = points.len() as f64;
    let logs: Vec<(f64, f64)> = points.iter().map(|(x, y)| (x.log10(), y.log10())).collect();
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for (x, y) in &logs {
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
        sxy += (x - mx) * (y - my);
    }
    if sxx == 0.0 {
        return Err(Error::Fit("all x values are equal".into()));
    }
    let slope = sxy / sxx;
    let acc = if syy == 0.0 { 1.0 } else { (sxy / (sxx * syy).sqrt()).abs().min(1.0) };
    Ok(PowerLawFit {
        exponent: -slope,
        acc,
        intercept: my - slope * mx,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DistributionReport {
    pub mode: DistributionMode,
    pub points: Vec<(f64, f64)>,
    /// `None` when there are too few points to fit
    pub fit: Option<PowerLawFit>,
    pub term_count: usize,
    pub occurrence_count: u64,
}

pub fn distribution(catalog: &Catalog, mode: DistributionMode) -> DistributionReport {
    let totals = term_totals(catalog);
    let points: Vec<(f64, f64)> = match mode {
        DistributionMode::Rank => totals.iter().enumerate().map(|(i, (_, n))| ((i + 1) as f64, *n as f64)).collect(),
        DistributionMode::CountOfCounts => {
            let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
            for (_, n) in &totals {
                *counts.entry(*n).or_insert(0) += 1;
            }
            counts.into_iter().map(|(c, k)| (c as f64, k as f64)).collect()
        }
    };
    let fit = match fit_power_law(&points) {
        Ok(f) => Some(f),
        Err(e) => {
            log::info!("no power-law fit: {e}");
            None
        }
    };
    DistributionReport {
        mode,
        fit,
        term_count: totals.len(),
        occurrence_count: totals.iter().map(|(_, n)| n).sum(),
        points,
    }
}

impl DistributionReport {
    /// Summary lines followed by `x<TAB>y` rows.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "#terms\t{}", self.term_count);
        let _ = writeln!(out, "#occurrences\t{}", self.occurrence_count);
        if let Some(f) = self.fit {
            let _ = writeln!(out, "#exponent\t{}", f.exponent);
            let _ = writeln!(out, "#acc\t{}", f.acc);
        }
        let _ = writeln!(out, "{}\t{}", self.x_label(), self.y_label());
        for (x, y) in &self.points {
            let _ = writeln!(out, "{x}\t{y}");
        }
        out
    }

    /// Whitespace-separated data for gnuplot, comments with `#`; plot with
    /// `set logscale xy; plot 'file' using 1:2, 10**a * x**(-b)`.
    pub fn to_gnuplot(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# {} {}", self.x_label(), self.y_label());
        if let Some(f) = self.fit {
            let _ = writeln!(out, "# a = {}", f.intercept);
            let _ = writeln!(out, "# b = {}", f.exponent);
            let _ = writeln!(out, "# acc = {}", f.acc);
        }
        for (x, y) in &self.points {
            let _ = writeln!(out, "{x} {y}");
        }
        out
    }

    fn x_label(&self) -> &'static str {
        match self.mode {
            DistributionMode::Rank => "rank",
            DistributionMode::CountOfCounts => "occurrences",
        }
    }

    fn y_label(&self) -> &'static str {
        match self.mode {
            DistributionMode::Rank => "occurrences",
            DistributionMode::CountOfCounts => "terms",
        }
    }
}

//! Corpus-level noise statistics and their text/JSON/CSV renderings.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cleaner::{clean_outcomes, CleanOutcome, Verdict};
use crate::config::RuleConfig;
use crate::corpus::Dataset;
use crate::error::{Error, Result};
use crate::taxonomy::{NoiseAction, NoiseCategory};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CategoryStat {
    pub category: NoiseCategory,
    pub side: String,
    pub count: usize,
    pub pct: f64,
    /// Action configured for the category when the report was made.
    pub action: NoiseAction,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Total {
    pub count: usize,
    pub pct: f64,
}

impl Total {
    fn new(count: usize, size: usize) -> Self {
        Total {
            count,
            pct: fraction(count, size),
        }
    }
}

fn fraction(count: usize, size: usize) -> f64 {
    if size == 0 {
        0.0
    } else {
        count as f64 / size as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QualityReport {
    pub dataset_name: String,
    pub size: usize,
    pub per_category: Vec<CategoryStat>,
    /// Pairs with at least one comment-side label.
    pub comment_side_total: Total,
    /// Pairs with at least one code-side label.
    pub code_side_total: Total,
    /// Pairs with any label, each counted once.
    pub noisy_total: Total,
    pub removed: Total,
    pub updated: Total,
    /// Labels produced without a raw comment to confirm them.
    pub fallback_counts: BTreeMap<NoiseCategory, usize>,
    /// Pairs a detector could not fully analyse.
    pub warnings: usize,
}

impl QualityReport {
    pub fn from_outcomes(name: &str, outcomes: &[CleanOutcome], cfg: &RuleConfig) -> Self {
        let size = outcomes.len();
        let mut counts = [0usize; 12];
        let mut fallback: BTreeMap<NoiseCategory, usize> = NoiseCategory::ALL.iter().map(|&c| (c, 0)).collect();
        let (mut comment_side, mut code_side, mut noisy, mut removed, mut updated, mut warnings) = (0, 0, 0, 0, 0, 0);
        for o in outcomes {
            for label in &o.labels {
                counts[label.category.index()] += 1;
                if label.fallback {
                    *fallback.get_mut(&label.category).unwrap() += 1;
                }
            }
            comment_side += usize::from(o.labels.iter().any(|l| l.category.is_comment_side()));
            code_side += usize::from(o.labels.iter().any(|l| !l.category.is_comment_side()));
            noisy += usize::from(!o.labels.is_empty());
            removed += usize::from(o.verdict == Verdict::Removed);
            updated += usize::from(o.verdict == Verdict::Updated);
            warnings += usize::from(!o.diagnostics.is_empty());
        }
        QualityReport {
            dataset_name: name.to_string(),
            size,
            per_category: NoiseCategory::ALL
                .iter()
                .map(|&category| CategoryStat {
                    category,
                    side: category.side().to_string(),
                    count: counts[category.index()],
                    pct: fraction(counts[category.index()], size),
                    action: cfg.action_for(category),
                })
                .collect(),
            comment_side_total: Total::new(comment_side, size),
            code_side_total: Total::new(code_side, size),
            noisy_total: Total::new(noisy, size),
            removed: Total::new(removed, size),
            updated: Total::new(updated, size),
            fallback_counts: fallback,
            warnings,
        }
    }

    pub fn stat(&self, category: NoiseCategory) -> &CategoryStat {
        &self.per_category[category.index()]
    }

    /// Sum of per-category counts minus noisy pairs: the labels beyond the
    /// first on multi-label pairs.
    pub fn extra_labels(&self) -> usize {
        self.per_category.iter().map(|s| s.count).sum::<usize>() - self.noisy_total.count
    }
}

/// Runs the full cleaning decision procedure without producing output data.
pub fn assess(dataset: &Dataset, cfg: &RuleConfig) -> Result<QualityReport> {
    if dataset.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let outcomes = clean_outcomes(dataset, cfg);
    Ok(QualityReport::from_outcomes(dataset.source_name(), &outcomes, cfg))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReportFormat {
    #[default]
    Text,
    Json,
    Csv,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "text" => Ok(ReportFormat::Text),
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            other => Err(Error::InvalidInput(format!("unknown format: {other}"))),
        }
    }
}

pub fn render_report(report: &QualityReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Text => render_text(report),
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            s
        }
        ReportFormat::Csv => render_csv(report),
    }
}

fn render_csv(r: &QualityReport) -> String {
    let mut out = String::from("category,side,count,pct,action\n");
    for s in &r.per_category {
        let _ = writeln!(out, "{},{},{},{:.6},{}", s.category, s.side, s.count, s.pct, s.action);
    }
    let rollups = [
        ("comment_total", "comment", r.comment_side_total, ""),
        ("code_total", "code", r.code_side_total, ""),
        ("removed", "all", r.removed, "remove"),
        ("updated", "all", r.updated, "update"),
    ];
    for (name, side, total, action) in rollups {
        let _ = writeln!(out, "{name},{side},{},{:.6},{action}", total.count, total.pct);
    }
    out
}

fn render_text(r: &QualityReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} ({} pairs)", if r.dataset_name.is_empty() { "dataset" } else { &r.dataset_name }, r.size);
    let _ = writeln!(out, "{:<24} {:>8} {:>8}  {:<7} {:>8}", "category", "count", "pct", "action", "fallback");
    for (side, title) in [(true, "comment-related"), (false, "code-related")] {
        let _ = writeln!(out, "{title}");
        for s in r.per_category.iter().filter(|s| s.category.is_comment_side() == side) {
            let _ = writeln!(
                out,
                "  {:<22} {:>8} {:>7.2}%  {:<7} {:>8}",
                s.category.title(),
                s.count,
                s.pct * 100.0,
                s.action,
                r.fallback_counts.get(&s.category).copied().unwrap_or(0)
            );
        }
        let total = if side { r.comment_side_total } else { r.code_side_total };
        let _ = writeln!(out, "  {:<22} {:>8} {:>7.2}%", "subtotal", total.count, total.pct * 100.0);
    }
    for (name, t) in [("noisy", r.noisy_total), ("removed", r.removed), ("updated", r.updated)] {
        let _ = writeln!(out, "{:<24} {:>8} {:>7.2}%", name, t.count, t.pct * 100.0);
    }
    if r.warnings > 0 {
        let _ = writeln!(out, "warnings: {} pair(s) not fully analysed", r.warnings);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeltaRow {
    pub category: NoiseCategory,
    pub before: usize,
    pub after: usize,
    /// before - after
    pub count_delta: i64,
    pub pct_delta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportDelta {
    pub rows: Vec<DeltaRow>,
    pub noisy_count_delta: i64,
    pub noisy_pct_delta: f64,
}

pub fn compare_reports(before: &QualityReport, after: &QualityReport) -> ReportDelta {
    let rows = before
        .per_category
        .iter()
        .zip(&after.per_category)
        .map(|(b, a)| DeltaRow {
            category: b.category,
            before: b.count,
            after: a.count,
            count_delta: b.count as i64 - a.count as i64,
            pct_delta: b.pct - a.pct,
        })
        .collect();
    ReportDelta {
        rows,
        noisy_count_delta: before.noisy_total.count as i64 - after.noisy_total.count as i64,
        noisy_pct_delta: before.noisy_total.pct - after.noisy_total.pct,
    }
}

impl fmt::Display for ReportDelta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<24} {:>8} {:>8} {:>8} {:>9}", "category", "before", "after", "delta", "pct")?;
        for r in &self.rows {
            writeln!(
                f,
                "{:<24} {:>8} {:>8} {:>8} {:>8.2}%",
                r.category.title(),
                r.before,
                r.after,
                r.count_delta,
                r.pct_delta * 100.0
            )?;
        }
        writeln!(f, "{:<24} {:>8} {:>8} {:>8} {:>8.2}%", "noisy", "", "", self.noisy_count_delta, self.noisy_pct_delta * 100.0)
    }
}

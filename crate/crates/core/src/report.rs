//! Text and CSV renderings of fit results, rankings and summaries, plus
//! readers for the tabular inputs (result files, totals tables, groups).

use std::fmt::Write as _;
use std::fs::File;
use std::io::Read;
use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::fitter::FitResult;
use crate::histogram::{CitationHistogram, SummaryStats};
use crate::ranking::{QuantityImpactRow, RankingTable};

pub const RESULTS_HEADER: &str = "entity,q,T,r2,anchor_c,anchor_value,n_points_q,n_points_T";
pub const RANKING_HEADER: &str = "rank,entity,q,r2,T";
pub const SUMMARY_HEADER: &str = "entity,total,n0,pct0,n1,pct1,n2,pct2";
pub const QUANTITY_IMPACT_HEADER: &str = "entity,total,quantity_rank,T,impact_rank,shift";

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// q to 3 decimals, T to 2, R² to 4.
pub fn results_csv(results: &[FitResult]) -> String {
    let mut out = format!("{RESULTS_HEADER}\n");
    for r in results {
        let _ = writeln!(
            out,
            "{},{:.3},{:.2},{:.4},{},{},{},{}",
            csv_field(&r.entity),
            r.q,
            r.t,
            r.r2,
            r.anchor_c,
            r.anchor_value,
            r.n_points_q,
            r.n_points_t
        );
    }
    out
}

/// Full-precision JSON array.
pub fn results_json(results: &[FitResult]) -> String {
    let mut s = serde_json::to_string_pretty(results).expect("FitResult serializes");
    s.push('\n');
    s
}

/// Reads fit results from JSON (array or single object) or CSV.
///
/// CSV needs at least `entity,q,T,r2` columns; the rest default to zero.
pub fn read_results(path: &Path) -> Result<Vec<FitResult>> {
    let mut text = String::new();
    File::open(path)
        .and_then(|mut f| f.read_to_string(&mut text))
        .map_err(|e| Error::file(path, e))?;
    let is_json =
        path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) || text.trim_start().starts_with(['[', '{']);
    let results = if is_json {
        match serde_json::from_str::<Vec<FitResult>>(&text) {
            Ok(v) => v,
            Err(_) => vec![serde_json::from_str::<FitResult>(&text)?],
        }
    } else {
        let mut rdr = csv::Reader::from_reader(text.as_bytes());
        let mut v = Vec::new();
        for row in rdr.deserialize() {
            let r: FitResult = row.map_err(|e| Error::Parse {
                line: e.position().map_or(0, |p| p.line()),
                msg: e.to_string(),
            })?;
            v.push(r);
        }
        v
    };
    if results.is_empty() {
        return Err(Error::EmptyData(path.display().to_string()));
    }
    for r in &results {
        if !(r.t > 0.0 && r.t.is_finite()) || !r.q.is_finite() {
            return Err(Error::Parse {
                line: 0,
                msg: format!("{}: invalid q = {} or T = {}", r.entity, r.q, r.t),
            });
        }
    }
    Ok(results)
}

pub fn ranking_csv(table: &RankingTable) -> String {
    let mut out = format!("{RANKING_HEADER}\n");
    for r in &table.rows {
        let _ = writeln!(
            out,
            "{},{},{:.3},{:.2},{:.2}",
            r.rank,
            csv_field(&r.entity),
            r.q,
            r.r2,
            r.t
        );
    }
    out
}

pub fn ranking_text(table: &RankingTable) -> String {
    let width = name_width(table.rows.iter().map(|r| r.entity.as_str()));
    let mut out = format!(
        "{:>4}  {:<width$}  {:>7}  {:>6}  {:>7}\n",
        "Rank", "Entity", "q", "R2", "T"
    );
    for r in &table.rows {
        let _ = writeln!(
            out,
            "{:>4}  {:<width$}  {:>7.3}  {:>6.2}  {:>7.2}",
            r.rank, r.entity, r.q, r.r2, r.t
        );
    }
    out
}

pub fn summary_csv(rows: &[SummaryStats]) -> String {
    let mut out = format!("{SUMMARY_HEADER}\n");
    for s in rows {
        let [p0, p1, p2] = s.display_pcts();
        let _ = writeln!(
            out,
            "{},{},{},{p0},{},{p1},{},{p2}",
            csv_field(&s.entity),
            s.total_papers,
            s.n0,
            s.n1,
            s.n2
        );
    }
    out
}

pub fn summary_text(rows: &[SummaryStats]) -> String {
    let width = name_width(rows.iter().map(|s| s.entity.as_str()));
    let mut out = format!(
        "{:<width$}  {:>12}  {:>18}  {:>18}  {:>18}\n",
        "Entity", "Total", "N(0) (%)", "N(1) (%)", "N(2) (%)"
    );
    for s in rows {
        let [p0, p1, p2] = s.display_pcts();
        let cell = |n: u64, p: &str| format!("{n} ({p}%)");
        let _ = writeln!(
            out,
            "{:<width$}  {:>12}  {:>18}  {:>18}  {:>18}",
            s.entity,
            s.total_papers,
            cell(s.n0, &p0),
            cell(s.n1, &p1),
            cell(s.n2, &p2)
        );
    }
    out
}

pub fn quantity_impact_csv(rows: &[QuantityImpactRow]) -> String {
    let mut out = format!("{QUANTITY_IMPACT_HEADER}\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{:.2},{},{}",
            csv_field(&r.entity),
            r.total_papers,
            r.quantity_rank,
            r.t,
            r.impact_rank,
            r.shift
        );
    }
    out
}

pub fn quantity_impact_text(rows: &[QuantityImpactRow]) -> String {
    let width = name_width(rows.iter().map(|r| r.entity.as_str()));
    let mut out = format!(
        "{:<width$}  {:>12}  {:>8}  {:>7}  {:>8}  {:>6}\n",
        "Entity", "Total", "Qty rank", "T", "T rank", "Shift"
    );
    for r in rows {
        let _ = writeln!(
            out,
            "{:<width$}  {:>12}  {:>8}  {:>7.2}  {:>8}  {:>+6}",
            r.entity, r.total_papers, r.quantity_rank, r.t, r.impact_rank, r.shift
        );
    }
    out
}

fn name_width<'a>(names: impl Iterator<Item = &'a str>) -> usize {
    names.map(|n| n.chars().count()).max().unwrap_or(0).max(6)
}

#[derive(Deserialize)]
struct TotalsRow {
    entity: String,
    total: u64,
    n0: u64,
    n1: u64,
    n2: u64,
}

/// Reads an `entity,total,n0,n1,n2` table into totals-only histograms.
pub fn read_totals(path: &Path) -> Result<Vec<CitationHistogram>> {
    let file = File::open(path).map_err(|e| Error::file(path, e))?;
    let mut rdr = csv::Reader::from_reader(file);
    let mut out = Vec::new();
    for row in rdr.deserialize() {
        let row: TotalsRow = row.map_err(|e| Error::Parse {
            line: e.position().map_or(0, |p| p.line()),
            msg: e.to_string(),
        })?;
        let h = CitationHistogram::from_totals(row.entity, row.total, row.n0, row.n1, row.n2)?;
        out.push(h.with_note(path.display().to_string()));
    }
    if out.is_empty() {
        return Err(Error::EmptyData(path.display().to_string()));
    }
    Ok(out)
}

#[derive(Deserialize)]
struct GroupRow {
    group: String,
    entity: String,
}

/// Reads a `group,entity` membership table; groups keep first-seen order.
pub fn read_groups(path: &Path) -> Result<Vec<(String, Vec<String>)>> {
    let file = File::open(path).map_err(|e| Error::file(path, e))?;
    let mut rdr = csv::Reader::from_reader(file);
    let mut groups: Vec<(String, Vec<String>)> = Vec::new();
    for row in rdr.deserialize() {
        let row: GroupRow = row?;
        match groups.iter_mut().find(|(g, _)| *g == row.group) {
            Some((_, members)) => members.push(row.entity),
            None => groups.push((row.group, vec![row.entity])),
        }
    }
    Ok(groups)
}

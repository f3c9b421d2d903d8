//! Impact ranking by effective temperature `T`, and its comparison with the
//! plain publication-count ranking.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fitter::FitResult;
use crate::histogram::SummaryStats;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankingRow {
    pub rank: usize,
    pub entity: String,
    pub q: f64,
    pub r2: f64,
    #[serde(rename = "T")]
    pub t: f64,
}

/// Rows ordered by `T` descending, ties by entity name ascending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankingTable {
    pub rows: Vec<RankingRow>,
}

impl RankingTable {
    pub fn rank_of(&self, entity: &str) -> Option<usize> {
        self.rows.iter().find(|r| r.entity == entity).map(|r| r.rank)
    }

    pub fn entities(&self) -> impl Iterator<Item = &str> {
        self.rows.iter().map(|r| r.entity.as_str())
    }
}

fn check_distinct<'a>(names: impl Iterator<Item = &'a str>) -> Result<BTreeSet<&'a str>> {
    let mut seen = BTreeSet::new();
    for name in names {
        if !seen.insert(name) {
            return Err(Error::DuplicateEntity(name.to_string()));
        }
    }
    Ok(seen)
}

fn by_t_desc(a: &FitResult, b: &FitResult) -> Ordering {
    b.t.total_cmp(&a.t).then_with(|| a.entity.cmp(&b.entity))
}

pub fn rank_by_temperature(results: &[FitResult]) -> Result<RankingTable> {
    if results.is_empty() {
        return Err(Error::EmptyData("no fit results to rank".into()));
    }
    check_distinct(results.iter().map(|r| r.entity.as_str()))?;
    let mut sorted: Vec<&FitResult> = results.iter().collect();
    sorted.sort_by(|a, b| by_t_desc(a, b));
    let rows = sorted
        .into_iter()
        .enumerate()
        .map(|(i, r)| RankingRow {
            rank: i + 1,
            entity: r.entity.clone(),
            q: r.q,
            r2: r.r2,
            t: r.t,
        })
        .collect();
    Ok(RankingTable { rows })
}

/// One entity's position in the quantity and impact rankings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantityImpactRow {
    pub entity: String,
    pub total_papers: u64,
    #[serde(rename = "T")]
    pub t: f64,
    pub quantity_rank: usize,
    pub impact_rank: usize,
    /// `quantity_rank - impact_rank`; positive means T places the entity higher.
    pub shift: i64,
}

/// Pairs quantity rank (total papers, descending) with impact rank (`T`,
/// descending). Rows come out in impact order.
pub fn quantity_vs_impact(summaries: &[SummaryStats], results: &[FitResult]) -> Result<Vec<QuantityImpactRow>> {
    let s_names = check_distinct(summaries.iter().map(|s| s.entity.as_str()))?;
    let r_names = check_distinct(results.iter().map(|r| r.entity.as_str()))?;
    if s_names != r_names {
        let only_s: Vec<_> = s_names.difference(&r_names).collect();
        let only_r: Vec<_> = r_names.difference(&s_names).collect();
        return Err(Error::EntityMismatch(format!(
            "summaries only: {only_s:?}; results only: {only_r:?}"
        )));
    }

    let mut by_total: Vec<&SummaryStats> = summaries.iter().collect();
    by_total.sort_by(|a, b| {
        b.total_papers
            .cmp(&a.total_papers)
            .then_with(|| a.entity.cmp(&b.entity))
    });
    let quantity: BTreeMap<&str, (usize, u64)> = by_total
        .iter()
        .enumerate()
        .map(|(i, s)| (s.entity.as_str(), (i + 1, s.total_papers)))
        .collect();

    let impact = rank_by_temperature(results)?;
    Ok(impact
        .rows
        .iter()
        .map(|row| {
            let (q_rank, total) = quantity[row.entity.as_str()];
            QuantityImpactRow {
                entity: row.entity.clone(),
                total_papers: total,
                t: row.t,
                quantity_rank: q_rank,
                impact_rank: row.rank,
                shift: q_rank as i64 - row.rank as i64,
            }
        })
        .collect())
}

//! Per-entity citation histograms `N(c)`: CSV ingestion, summary counts
//! for uncited/once/twice-cited papers, aggregation and the fit view.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fitter::FitConfig;

/// Header line of the histogram CSV format.
pub const CSV_HEADER: [&str; 2] = ["citations", "count"];

/// Number of papers `N(c)` with exactly `c` citations for one entity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CitationHistogram {
    pub entity: String,
    counts: BTreeMap<u64, u64>,
    /// Papers included in the total whose citation counts are not binned.
    /// Only totals-only tables (no per-c breakdown) set this.
    #[serde(default)]
    unbinned: u64,
    #[serde(default)]
    pub source_note: String,
}

impl CitationHistogram {
    pub fn new(entity: impl Into<String>, counts: BTreeMap<u64, u64>) -> Self {
        Self {
            entity: entity.into(),
            counts,
            unbinned: 0,
            source_note: String::new(),
        }
    }

    /// Builds a histogram from `(c, N(c))` pairs, rejecting repeated `c`.
    pub fn from_pairs(entity: impl Into<String>, pairs: impl IntoIterator<Item = (u64, u64)>) -> Result<Self> {
        let mut counts = BTreeMap::new();
        for (i, (c, n)) in pairs.into_iter().enumerate() {
            if counts.insert(c, n).is_some() {
                return Err(Error::DuplicateBin {
                    line: i as u64 + 1,
                    citations: c,
                });
            }
        }
        Ok(Self::new(entity, counts))
    }

    /// Histogram carrying only `N(0)`, `N(1)`, `N(2)` and the grand total.
    pub fn from_totals(entity: impl Into<String>, total: u64, n0: u64, n1: u64, n2: u64) -> Result<Self> {
        let entity = entity.into();
        let binned = n0 + n1 + n2;
        if binned > total {
            return Err(Error::Parse {
                line: 0,
                msg: format!("{entity}: N(0)+N(1)+N(2) = {binned} exceeds total {total}"),
            });
        }
        let counts = BTreeMap::from([(0, n0), (1, n1), (2, n2)]);
        Ok(Self {
            entity,
            counts,
            unbinned: total - binned,
            source_note: String::new(),
        })
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.source_note = note.into();
        self
    }

    /// `N(c)`; absent bins are zero.
    pub fn count(&self, c: u64) -> u64 {
        self.counts.get(&c).copied().unwrap_or(0)
    }

    pub fn counts(&self) -> &BTreeMap<u64, u64> {
        &self.counts
    }

    pub fn unbinned(&self) -> u64 {
        self.unbinned
    }

    /// `sum_c N(c)`, including any unbinned papers.
    pub fn total_papers(&self) -> u64 {
        self.counts.values().sum::<u64>() + self.unbinned
    }

    /// Non-zero bins in ascending `c`.
    pub fn support(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.counts.iter().filter(|(_, n)| **n > 0).map(|(c, n)| (*c, *n))
    }

    /// Same histogram with every count multiplied by `factor`.
    pub fn scaled(&self, factor: u64) -> Self {
        Self {
            entity: self.entity.clone(),
            counts: self.counts.iter().map(|(c, n)| (*c, n * factor)).collect(),
            unbinned: self.unbinned * factor,
            source_note: self.source_note.clone(),
        }
    }

    /// Writes the `citations,count` CSV form (non-zero bins only).
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        w.write_record(CSV_HEADER)?;
        for (c, n) in self.support() {
            w.write_record([c.to_string(), n.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("CSV output is ASCII")
    }
}

fn parse_field(field: &str, line: u64, what: &str) -> Result<i128> {
    field.parse::<i128>().map_err(|_| Error::Parse {
        line,
        msg: format!("{what} {field:?} is not an integer"),
    })
}

/// Reads a histogram in the `citations,count` CSV format.
pub fn load_histogram<R: Read>(input: R, entity: &str) -> Result<CitationHistogram> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(input);
    let header = rdr.headers().map_err(|e| Error::Parse {
        line: 1,
        msg: e.to_string(),
    })?;
    if header.iter().collect::<Vec<_>>() != CSV_HEADER {
        return Err(Error::Parse {
            line: 1,
            msg: format!(
                "expected header `citations,count`, found `{}`",
                header.iter().collect::<Vec<_>>().join(",")
            ),
        });
    }

    let mut counts = BTreeMap::new();
    for record in rdr.records() {
        let record = record.map_err(|e| Error::Parse {
            line: e.position().map_or(0, |p| p.line()),
            msg: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != 2 {
            return Err(Error::Parse {
                line,
                msg: format!("expected 2 fields, found {}", record.len()),
            });
        }
        let c = parse_field(&record[0], line, "citation count")?;
        let n = parse_field(&record[1], line, "paper count")?;
        if c < 0 {
            return Err(Error::Parse {
                line,
                msg: format!("citation count {c} is negative"),
            });
        }
        if n < 0 {
            return Err(Error::NegativeCount {
                line,
                value: n.max(i64::MIN as i128) as i64,
            });
        }
        let (c, n) = (
            u64::try_from(c).map_err(|_| Error::Parse {
                line,
                msg: "citation count overflows".into(),
            })?,
            u64::try_from(n).map_err(|_| Error::Parse {
                line,
                msg: "paper count overflows".into(),
            })?,
        );
        if counts.insert(c, n).is_some() {
            return Err(Error::DuplicateBin { line, citations: c });
        }
    }

    let h = CitationHistogram::new(entity, counts);
    if h.total_papers() == 0 {
        return Err(Error::EmptyData(entity.to_string()));
    }
    Ok(h)
}

/// Loads one histogram file; the entity defaults to the file stem.
pub fn load_histogram_file(path: &Path, entity: Option<&str>) -> Result<CitationHistogram> {
    let entity = match entity {
        Some(e) => e.to_string(),
        None => entity_from_path(path),
    };
    let file = File::open(path).map_err(|e| Error::file(path, e))?;
    load_histogram(file, &entity).map(|h| h.with_note(path.display().to_string()))
}

pub fn entity_from_path(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

/// Every `*.csv` file in `dir`, loaded independently, sorted by path.
pub fn load_dataset_dir(dir: &Path) -> Result<Vec<(PathBuf, Result<CitationHistogram>)>> {
    let entries = std::fs::read_dir(dir).map_err(|e| Error::file(dir, e))?;
    let mut paths = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| Error::file(dir, e))?.path();
        if path.is_file() && path.extension().is_some_and(|x| x.eq_ignore_ascii_case("csv")) {
            paths.push(path);
        }
    }
    paths.sort();
    Ok(paths
        .into_iter()
        .map(|p| {
            let h = load_histogram_file(&p, None);
            (p, h)
        })
        .collect())
}

/// Counts and shares of uncited, once-cited and twice-cited papers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryStats {
    pub entity: String,
    pub total_papers: u64,
    pub n0: u64,
    pub n1: u64,
    pub n2: u64,
    pub pct0: f64,
    pub pct1: f64,
    pub pct2: f64,
}

impl SummaryStats {
    /// Percentages rounded to one decimal for display.
    pub fn display_pcts(&self) -> [String; 3] {
        [self.pct0, self.pct1, self.pct2].map(|p| format!("{p:.1}"))
    }
}

pub fn summarize(h: &CitationHistogram) -> SummaryStats {
    let total = h.total_papers();
    let pct = |n: u64| {
        if total == 0 {
            0.0
        } else {
            100.0 * n as f64 / total as f64
        }
    };
    let (n0, n1, n2) = (h.count(0), h.count(1), h.count(2));
    SummaryStats {
        entity: h.entity.clone(),
        total_papers: total,
        n0,
        n1,
        n2,
        pct0: pct(n0),
        pct1: pct(n1),
        pct2: pct(n2),
    }
}

/// Pointwise sum of several histograms under a new entity name.
pub fn aggregate(hs: &[CitationHistogram], name: &str) -> Result<CitationHistogram> {
    if hs.is_empty() {
        return Err(Error::EmptyData(format!("aggregate {name:?} has no members")));
    }
    let mut counts = BTreeMap::new();
    let mut unbinned = 0;
    for h in hs {
        for (c, n) in &h.counts {
            *counts.entry(*c).or_insert(0) += n;
        }
        unbinned += h.unbinned;
    }
    let members: Vec<&str> = hs.iter().map(|h| h.entity.as_str()).collect();
    Ok(CitationHistogram {
        entity: name.to_string(),
        counts,
        unbinned,
        source_note: format!("aggregate of {}", members.join(", ")),
    })
}

/// The `(c, N(c))` points eligible for fitting: `c >= anchor_c` and
/// `N(c) >= max(1, min_count)`, ascending in `c`.
pub fn fit_view(h: &CitationHistogram, cfg: &FitConfig) -> Result<Vec<(u64, u64)>> {
    let floor = cfg.min_count.max(1);
    let view: Vec<(u64, u64)> = h
        .counts
        .range(cfg.anchor_c..)
        .filter(|(_, n)| **n >= floor)
        .map(|(c, n)| (*c, *n))
        .collect();
    if view.len() < cfg.min_fit_points {
        return Err(Error::InsufficientData {
            entity: h.entity.clone(),
            found: view.len(),
            needed: cfg.min_fit_points,
        });
    }
    Ok(view)
}

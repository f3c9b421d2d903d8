use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Cli, Command, Failure, FitArgs, PlotArgs, RankArgs, Status, SummaryArgs, SynthArgs};
use crate::error::{Error, Result};
use crate::fitter::{fit, FitConfig, FitResult};
use crate::histogram::{aggregate, load_dataset_dir, summarize, CitationHistogram, SummaryStats};
use crate::plot::{self, PlotOptions, PlotStyle};
use crate::ranking::{quantity_vs_impact, rank_by_temperature};
use crate::report;
use crate::synth::{generate, SyntheticSpec};

/// Provenance of one command run. The only output carrying a timestamp.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub dataset_dir: Option<PathBuf>,
    pub config: Option<FitConfig>,
    pub outputs: Vec<PathBuf>,
    pub diagnostics: Vec<String>,
    pub timestamp: String,
}

struct Outputs {
    dir: PathBuf,
    written: Vec<PathBuf>,
}

impl Outputs {
    fn new(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir).map_err(|e| Error::file(dir, e))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            written: Vec::new(),
        })
    }

    /// Writes via a temporary sibling and rename.
    fn write(&mut self, name: &str, contents: &str) -> Result<()> {
        let path = self.dir.join(name);
        let tmp = self.dir.join(format!(".{name}.tmp"));
        fs::write(&tmp, contents).map_err(|e| Error::file(&tmp, e))?;
        fs::rename(&tmp, &path).map_err(|e| Error::file(&path, e))?;
        self.written.push(path);
        Ok(())
    }

    fn finish(
        mut self,
        command: &str,
        dataset_dir: Option<&Path>,
        config: Option<&FitConfig>,
        diagnostics: Vec<String>,
    ) -> Result<()> {
        let name = format!("{command}.manifest.json");
        let manifest = RunManifest {
            command: command.to_string(),
            dataset_dir: dataset_dir.map(Path::to_path_buf),
            config: config.cloned(),
            outputs: self.written.clone(),
            diagnostics,
            timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        };
        let json = serde_json::to_string_pretty(&manifest)? + "\n";
        self.write(&name, &json)
    }
}

/// File-name-safe form of an entity name.
pub fn file_stem_for(entity: &str) -> String {
    entity
        .chars()
        .map(|c| {
            if c.is_alphanumeric() || matches!(c, ' ' | '-' | '_' | '.') {
                c
            } else {
                '_'
            }
        })
        .collect()
}

fn warn_all(diagnostics: &[String]) {
    for d in diagnostics {
        eprintln!("warning: {d}");
    }
}

/// Loads a dataset directory, turning per-file failures into diagnostics.
fn load_entities(dir: &Path, diagnostics: &mut Vec<String>) -> std::result::Result<Vec<CitationHistogram>, Failure> {
    if !dir.is_dir() {
        return Err(Failure::new(
            Status::Data,
            format!("{} is not a directory", dir.display()),
        ));
    }
    let loaded = load_dataset_dir(dir)?;
    if loaded.is_empty() {
        return Err(Failure::new(Status::Data, format!("no datasets in {}", dir.display())));
    }
    let mut hs: Vec<CitationHistogram> = Vec::new();
    for (path, h) in loaded {
        match h {
            Ok(h) if hs.iter().any(|o| o.entity == h.entity) => {
                diagnostics.push(format!("{}: duplicate entity {:?}, skipped", path.display(), h.entity));
            }
            Ok(h) => hs.push(h),
            Err(e) => diagnostics.push(format!("{}: {e}", path.display())),
        }
    }
    hs.sort_by(|a, b| a.entity.cmp(&b.entity));
    Ok(hs)
}

pub fn run(cli: &Cli) -> std::result::Result<(), Failure> {
    match &cli.command {
        Command::Fit(a) => cmd_fit(a),
        Command::Rank(a) => cmd_rank(a),
        Command::Summary(a) => cmd_summary(a),
        Command::Synth(a) => cmd_synth(a),
        Command::Plot(a) => cmd_plot(a),
    }
}

pub fn cmd_fit(args: &FitArgs) -> std::result::Result<(), Failure> {
    let cfg = args.config.resolve()?;
    let mut diagnostics = Vec::new();
    let hs = load_entities(&args.dataset_dir, &mut diagnostics)?;

    let fitted: Vec<Result<FitResult>> = hs.par_iter().map(|h| fit(h, &cfg)).collect();
    let mut results = Vec::new();
    for (h, r) in hs.iter().zip(fitted) {
        match r {
            Ok(r) => {
                println!(
                    "{}: q = {:.3}, T = {:.2}, R2 = {:.4} ({} points for q, {} for T)",
                    r.entity, r.q, r.t, r.r2, r.n_points_q, r.n_points_t
                );
                results.push(r);
            }
            Err(e) => diagnostics.push(format!("{}: {e}", h.entity)),
        }
    }
    warn_all(&diagnostics);
    if results.is_empty() {
        return Err(Failure::new(
            Status::FitFailure,
            format!("no entity could be fitted ({} diagnostics)", diagnostics.len()),
        ));
    }

    let mut out = Outputs::new(&args.out)?;
    out.write("results.csv", &report::results_csv(&results))?;
    out.write("results.json", &report::results_json(&results))?;
    out.write(
        "diagnostics.txt",
        &diagnostics.iter().map(|d| format!("{d}\n")).collect::<String>(),
    )?;
    out.finish("fit", Some(&args.dataset_dir), Some(&cfg), diagnostics)?;
    Ok(())
}

fn summaries_from(args: &RankArgs) -> std::result::Result<Option<Vec<SummaryStats>>, Failure> {
    let hs = if let Some(p) = &args.totals {
        report::read_totals(p)?
    } else if let Some(dir) = &args.summaries {
        let mut diagnostics = Vec::new();
        let hs = load_entities(dir, &mut diagnostics)?;
        warn_all(&diagnostics);
        hs
    } else {
        return Ok(None);
    };
    Ok(Some(hs.iter().map(summarize).collect()))
}

pub fn cmd_rank(args: &RankArgs) -> std::result::Result<(), Failure> {
    let results = report::read_results(&args.results)?;
    let table = rank_by_temperature(&results)?;
    let summaries = summaries_from(args)?;

    let mut out = Outputs::new(&args.out)?;
    let text = report::ranking_text(&table);
    print!("{text}");
    out.write("ranking.txt", &text)?;
    out.write("ranking.csv", &report::ranking_csv(&table))?;
    if let Some(s) = summaries {
        let rows = quantity_vs_impact(&s, &results)?;
        out.write("quantity_impact.txt", &report::quantity_impact_text(&rows))?;
        out.write("quantity_impact.csv", &report::quantity_impact_csv(&rows))?;
    }
    out.finish("rank", None, None, Vec::new())?;
    Ok(())
}

/// Entity rows by total descending, then group rows, then the all-entity row.
pub fn summary_rows(
    hs: &[CitationHistogram],
    groups: &[(String, Vec<String>)],
    all_label: &str,
    diagnostics: &mut Vec<String>,
) -> Result<Vec<SummaryStats>> {
    let mut entity_rows: Vec<SummaryStats> = hs.iter().map(summarize).collect();
    entity_rows.sort_by(|a, b| {
        b.total_papers
            .cmp(&a.total_papers)
            .then_with(|| a.entity.cmp(&b.entity))
    });

    let by_name: BTreeMap<&str, &CitationHistogram> = hs.iter().map(|h| (h.entity.as_str(), h)).collect();
    let mut rows = entity_rows;
    for (group, members) in groups {
        let mut present = Vec::new();
        for m in members {
            match by_name.get(m.as_str()) {
                Some(h) => present.push((*h).clone()),
                None => diagnostics.push(format!("group {group:?}: member {m:?} not in dataset")),
            }
        }
        if present.is_empty() {
            diagnostics.push(format!("group {group:?}: no members present, row skipped"));
            continue;
        }
        rows.push(summarize(&aggregate(&present, group)?));
    }
    rows.push(summarize(&aggregate(hs, all_label)?));
    Ok(rows)
}

pub fn cmd_summary(args: &SummaryArgs) -> std::result::Result<(), Failure> {
    let mut diagnostics = Vec::new();
    let hs = match (&args.totals, &args.dataset_dir) {
        (Some(p), _) => report::read_totals(p)?,
        (None, Some(dir)) => load_entities(dir, &mut diagnostics)?,
        (None, None) => return Err(Failure::new(Status::Usage, "give a dataset directory or --totals")),
    };
    if hs.is_empty() {
        warn_all(&diagnostics);
        return Err(Failure::new(Status::Data, "no valid histograms"));
    }
    let groups = match &args.groups {
        Some(p) => report::read_groups(p)?,
        None => Vec::new(),
    };
    let rows = summary_rows(&hs, &groups, &args.all_label, &mut diagnostics)?;
    warn_all(&diagnostics);

    let mut out = Outputs::new(&args.out)?;
    let text = report::summary_text(&rows);
    print!("{text}");
    out.write("summary.txt", &text)?;
    out.write("summary.csv", &report::summary_csv(&rows))?;
    out.finish("summary", args.dataset_dir.as_deref(), None, diagnostics)?;
    Ok(())
}

/// Reads one spec object or an array of them.
pub fn read_specs(path: &Path) -> Result<Vec<SyntheticSpec>> {
    let text = fs::read_to_string(path).map_err(|e| Error::file(path, e))?;
    let specs = match serde_json::from_str::<Vec<SyntheticSpec>>(&text) {
        Ok(v) => v,
        Err(_) => vec![serde_json::from_str::<SyntheticSpec>(&text)
            .map_err(|e| Error::InvalidSpec(format!("{}: {e}", path.display())))?],
    };
    if specs.is_empty() {
        return Err(Error::InvalidSpec(format!("{}: no specs", path.display())));
    }
    let mut seen = std::collections::BTreeSet::new();
    for s in &specs {
        s.validate()?;
        if !seen.insert(s.entity.as_str()) {
            return Err(Error::DuplicateEntity(s.entity.clone()));
        }
    }
    Ok(specs)
}

pub fn cmd_synth(args: &SynthArgs) -> std::result::Result<(), Failure> {
    let specs = read_specs(&args.spec)?;
    let hs: Vec<Result<CitationHistogram>> = specs.iter().map(generate).collect();
    let mut out = Outputs::new(&args.out_dir)?;
    for h in hs {
        let h = h?;
        out.write(&format!("{}.csv", file_stem_for(&h.entity)), &h.to_csv_string())?;
        println!(
            "{}: {} papers in {} bins",
            h.entity,
            h.total_papers(),
            h.support().count()
        );
    }
    out.write(
        "specs.json",
        &(serde_json::to_string_pretty(&specs).map_err(Error::from)? + "\n"),
    )?;
    out.finish("synth", None, None, Vec::new())?;
    Ok(())
}

pub fn cmd_plot(args: &PlotArgs) -> std::result::Result<(), Failure> {
    let style: PlotStyle = args
        .style
        .parse()
        .map_err(|e: Error| Failure::new(Status::Usage, e.to_string()))?;
    let mut results = report::read_results(&args.results)?;
    results.sort_by(|a, b| a.entity.cmp(&b.entity));
    let mut diagnostics = Vec::new();
    let hs = load_entities(&args.dataset_dir, &mut diagnostics)?;
    warn_all(&diagnostics);

    let by_name: BTreeMap<&str, &CitationHistogram> = hs.iter().map(|h| (h.entity.as_str(), h)).collect();
    let missing: Vec<&str> = results
        .iter()
        .map(|r| r.entity.as_str())
        .filter(|e| !by_name.contains_key(e))
        .collect();
    if !missing.is_empty() {
        return Err(Error::EntityMismatch(format!("no histogram for {missing:?}")).into());
    }

    let opts = PlotOptions {
        normalize: args.normalize,
        x_limit: args.x_limit,
        ref_c: args.ref_c,
    };
    let figures: Vec<Result<plot::Figure>> = results
        .par_iter()
        .map(|r| plot::render(style, by_name[r.entity.as_str()], r, &opts))
        .collect();
    let mut out = Outputs::new(&args.out)?;
    for (r, fig) in results.iter().zip(figures) {
        let fig = fig?;
        let stem = format!("{}.{}", file_stem_for(&r.entity), style.name());
        out.write(&format!("{stem}.svg"), &fig.svg)?;
        out.write(&format!("{stem}.csv"), &fig.data_csv)?;
    }
    out.finish("plot", Some(&args.dataset_dir), None, diagnostics)?;
    Ok(())
}

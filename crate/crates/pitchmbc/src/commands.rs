//! Subcommand implementations. Each one reads its inputs, computes, and
//! only then writes outputs, so a failing run leaves no partial files from
//! that run behind.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use pitchmbc_core::{
    classify_pitch, filter_pitches, label_clusters, select_k, stability_run, LabeledModel, PitchDataset, PitchRecord,
    StabilityReport,
};
use rayon::prelude::*;

use crate::archive::ModelArchive;
use crate::cli::*;
use crate::config::RunConfig;
use crate::error::CliError;
use crate::ingest::{read_pitch_table, PitchTable, Schema};
use crate::output::{self, Confusion, LabeledPitch};
use crate::plot::{self, PlotPoint};

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Fit(args) => fit(&args),
        Command::Classify(args) => classify(&args),
        Command::Stability(args) => stability(&args),
        Command::Plot(args) => plot_cmd(&args),
        Command::Batch(args) => batch(&args),
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.display().to_string(), source }
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path).map(BufWriter::new).map_err(io_err(path))
}

fn write_csv(path: &Path, f: impl FnOnce(&mut BufWriter<File>) -> Result<(), csv::Error>) -> Result<(), CliError> {
    let mut w = create(path)?;
    f(&mut w).map_err(|source| CliError::Csv { path: path.display().to_string(), source })?;
    w.flush().map_err(io_err(path))
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(io_err(path))
}

fn create_dir(path: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(path).map_err(io_err(path))
}

/// `model.json` → `model.scores.csv`.
fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!("{stem}{suffix}"))
}

fn read_table(path: &Path, schema: &Schema) -> Result<PitchTable, CliError> {
    let file = File::open(path).map_err(io_err(path))?;
    let table = read_pitch_table(BufReader::new(file), schema)?;
    for bad in &table.malformed {
        eprintln!("warning: {}: skipped {bad}", path.display());
    }
    Ok(table)
}

/// Config file, then schema flags, EM flags, selection flags and label flags.
fn build_config(
    input: &InputArgs,
    em: &EmArgs,
    select: Option<&SelectArgs>,
    labels: Option<&LabelArgs>,
) -> Result<RunConfig, CliError> {
    let mut cfg = match &input.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(d) = input.delimiter {
        cfg.schema.delimiter = d;
    }
    for mapping in &input.columns {
        let (field, column) = mapping
            .split_once('=')
            .ok_or_else(|| CliError::Invalid(format!("--column expects FIELD=HEADER, got `{mapping}`")))?;
        cfg.schema.remap(field.trim(), column.trim())?;
    }
    apply_em(&mut cfg, em);
    if let Some(s) = select {
        let sel = &mut cfg.selection;
        sel.k_min = s.kmin.unwrap_or(sel.k_min);
        sel.k_max = s.kmax.unwrap_or(sel.k_max);
        sel.criterion = s.criterion.unwrap_or(sel.criterion);
        sel.penalty_scale = s.penalty_scale.unwrap_or(sel.penalty_scale);
    }
    if let Some(l) = labels {
        let lc = &mut cfg.labels;
        lc.changeup_speed_gap = l.changeup_gap.unwrap_or(lc.changeup_speed_gap);
        lc.sidespin_band = l.sidespin_band.unwrap_or(lc.sidespin_band);
        lc.cutter_speed_gap = l.cutter_gap.unwrap_or(lc.cutter_speed_gap);
        lc.knuckleball_spin_var_ratio = l.knuckle_ratio.unwrap_or(lc.knuckleball_spin_var_ratio);
        lc.curveball_backspin_max = l.curveball_backspin_max.unwrap_or(lc.curveball_backspin_max);
        if l.swap_anchor.is_some() {
            lc.anchor_override = l.swap_anchor;
        }
    }
    cfg.em.validate()?;
    Ok(cfg)
}

fn apply_em(cfg: &mut RunConfig, em: &EmArgs) {
    if let Some(seed) = em.seed {
        cfg.em.seed = seed;
        cfg.stability.seed = seed;
    }
    cfg.em.restarts = em.restarts.unwrap_or(cfg.em.restarts);
    cfg.em.max_iterations = em.max_iter.unwrap_or(cfg.em.max_iterations);
    cfg.em.tolerance = em.tol.unwrap_or(cfg.em.tolerance);
    cfg.em.ridge = em.ridge.unwrap_or(cfg.em.ridge);
}

/// Drops intentional balls, reporting how many went.
fn filtered(dataset: PitchDataset) -> Result<PitchDataset, CliError> {
    let outcome = filter_pitches(dataset)?;
    if outcome.removed > 0 {
        eprintln!("note: removed {} intentional balls", outcome.removed);
    }
    Ok(outcome.dataset)
}

/// Selects k, fits and labels one pitcher.
pub fn fit_pitcher(dataset: &PitchDataset, cfg: &RunConfig) -> Result<ModelArchive, CliError> {
    let selection = select_k(&dataset.points(), &cfg.select_config())?;
    let k = selection.best.k();
    cfg.labels.validate(k).map_err(|e| CliError::Invalid(e.into()))?;
    let failed: Vec<(usize, String)> = selection.failed.iter().map(|(k, e)| (*k, e.to_string())).collect();
    let model = label_clusters(&selection.best, &cfg.labels);
    Ok(ModelArchive::new(dataset.pitcher_id().into(), dataset.len(), model, selection.scores, failed, cfg.clone()))
}

fn describe(archive: &ModelArchive) -> String {
    let criterion = match archive.config.selection.criterion {
        pitchmbc_core::Criterion::Bic => "bic",
        pitchmbc_core::Criterion::BicAdj => "bicadj",
    };
    let mut s = format!(
        "pitcher {}: n = {}, k = {} by {criterion}\n",
        archive.pitcher_id,
        archive.n,
        archive.fit.k()
    );
    for (j, (c, label)) in archive.fit.components.iter().zip(&archive.labels).enumerate() {
        s += &format!(
            "  cluster {j}: {:<12} weight {:.3}  mean ({:.1}, {:.1}, {:.1})\n",
            label.name(),
            c.weight,
            c.mean[0],
            c.mean[1],
            c.mean[2]
        );
    }
    s
}

fn fit(args: &FitArgs) -> Result<(), CliError> {
    let cfg = build_config(&args.input, &args.em, Some(&args.select), Some(&args.labels))?;
    let table = read_table(&args.input.input, &cfg.schema)?;
    let dataset = filtered(table.dataset(args.pitcher.as_deref())?)?;
    let archive = fit_pitcher(&dataset, &cfg)?;
    let scores = args.scores.clone().unwrap_or_else(|| sibling(&args.out, ".scores.csv"));
    write_csv(&scores, |w| output::write_scores(w, &archive.score_table, &archive.failed_k))?;
    write_text(&args.out, &archive.to_json())?;
    print!("{}", describe(&archive));
    Ok(())
}

fn load_archive(path: &Path) -> Result<ModelArchive, CliError> {
    ModelArchive::load(path).map_err(|source| CliError::Archive { path: path.display().to_string(), source })
}

/// Non-intentional records of the archived pitcher (or of `pitcher`).
fn records_for(table: &PitchTable, archive: &ModelArchive, pitcher: Option<&str>) -> Result<Vec<PitchRecord>, CliError> {
    let id = match pitcher {
        Some(id) => Some(id),
        None if table.pitcher_ids().len() > 1 => Some(archive.pitcher_id.as_str()),
        None => None,
    };
    let dataset = table.dataset(id)?;
    Ok(dataset.into_records().into_iter().filter(|r| !r.is_intentional_ball).collect())
}

/// Posterior classification of every record; `row_id` is the position in
/// `records`.
pub fn classify_records(model: &LabeledModel, records: &[PitchRecord]) -> Result<Vec<LabeledPitch>, CliError> {
    records
        .iter()
        .enumerate()
        .map(|(row_id, r)| {
            let (pitch_type, cluster_index, posterior) = classify_pitch(model, &r.point())?;
            Ok(LabeledPitch {
                row_id,
                cluster_index,
                pitch_type,
                posterior_max: posterior[cluster_index],
                reference_label: r.reference_label.clone(),
            })
        })
        .collect()
}

fn classify(args: &ClassifyArgs) -> Result<(), CliError> {
    let archive = load_archive(&args.model)?;
    let table = read_table(&args.input, &archive.config.schema)?;
    let records = records_for(&table, &archive, args.pitcher.as_deref())?;
    let pitches = classify_records(&archive.labeled_model(), &records)?;
    let confusion = Confusion::from_pitches(&pitches);
    write_csv(&args.out, |w| output::write_labeled(w, &pitches))?;
    if !confusion.is_empty() {
        let path = args.confusion.clone().unwrap_or_else(|| sibling(&args.out, ".confusion.csv"));
        write_csv(&path, |w| confusion.write(w))?;
    }
    let mut counts = std::collections::BTreeMap::new();
    for p in &pitches {
        *counts.entry(p.pitch_type).or_insert(0usize) += 1;
    }
    println!("classified {} pitches", pitches.len());
    for (t, c) in counts {
        println!("  {:<12} {c}", t.name());
    }
    Ok(())
}

fn stability(args: &StabilityArgs) -> Result<(), CliError> {
    let mut cfg = build_config(&args.input, &args.em, None, None)?;
    cfg.stability.replications = args.reps.unwrap_or(cfg.stability.replications);
    cfg.stability.split = args.split.unwrap_or(cfg.stability.split);
    let table = read_table(&args.input.input, &cfg.schema)?;
    let dataset = filtered(table.dataset(args.pitcher.as_deref())?)?;
    let report = stability_run(&dataset, args.k, &cfg.stability_config())?;
    write_csv(&args.out, |w| output::write_stability(w, &report))?;
    println!(
        "pitcher {}: k = {}, {}/{} replications, agreement_80 {:.4} (se {:.4}), agreement_20 {:.4} (se {:.4})",
        report.pitcher_id,
        report.k,
        report.completed,
        report.replications,
        report.mean_80,
        report.stderr_80,
        report.mean_20,
        report.stderr_20
    );
    Ok(())
}

/// Scatter points with per-cluster colors.
pub fn plot_points(archive: &ModelArchive, pitches: &[LabeledPitch], records: &[PitchRecord]) -> Vec<PlotPoint> {
    let colors = plot::cluster_colors(&archive.labels);
    pitches
        .iter()
        .zip(records)
        .map(|(p, r)| PlotPoint { point: r.point(), pitch_type: p.pitch_type, color: colors[p.cluster_index] })
        .collect()
}

fn plot_cmd(args: &PlotArgs) -> Result<(), CliError> {
    let archive = load_archive(&args.model)?;
    let table = read_table(&args.input, &archive.config.schema)?;
    let records = records_for(&table, &archive, args.pitcher.as_deref())?;
    let pitches = classify_records(&archive.labeled_model(), &records)?;
    let points = plot_points(&archive, &pitches, &records);
    create_dir(&args.out)?;
    write_csv(&args.out.join("scatter.csv"), |w| plot::write_scatter_csv(w, &points))?;
    write_text(&args.out.join("projections.svg"), &plot::render_svg(&points))?;
    println!("plotted {} pitches to {}", points.len(), args.out.display());
    Ok(())
}

/// File-name-safe form of a pitcher id.
fn file_stem(id: &str) -> String {
    id.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' }).collect()
}

struct PitcherOutcome {
    id: String,
    n: usize,
    result: Result<(ModelArchive, Option<StabilityReport>), CliError>,
}

fn batch(args: &BatchArgs) -> Result<(), CliError> {
    let mut cfg = build_config(&args.input, &args.em, Some(&args.select), Some(&args.labels))?;
    cfg.stability.replications = args.reps.unwrap_or(cfg.stability.replications);
    cfg.stability.split = args.split.unwrap_or(cfg.stability.split);
    let table = read_table(&args.input.input, &cfg.schema)?;
    create_dir(&args.out)?;

    let groups: Vec<(String, Vec<PitchRecord>)> = table.by_pitcher().into_iter().collect();
    let outcomes: Vec<PitcherOutcome> = groups
        .into_par_iter()
        .map(|(id, records)| {
            let n = records.iter().filter(|r| !r.is_intentional_ball).count();
            let result = (|| {
                let dataset = filter_pitches(PitchDataset::new(records)?)?.dataset;
                let archive = fit_pitcher(&dataset, &cfg)?;
                let report = if args.stability {
                    Some(stability_run(&dataset, archive.fit.k(), &cfg.stability_config())?)
                } else {
                    None
                };
                Ok((archive, report))
            })();
            PitcherOutcome { id, n, result }
        })
        .collect();

    let mut summary = csv::Writer::from_writer(Vec::new());
    let csv_err = |source| CliError::Csv { path: args.out.join("summary.csv").display().to_string(), source };
    summary.write_record(["pitcher_id", "n", "k", "labels", "status"]).map_err(csv_err)?;
    let mut reports = Vec::new();
    for o in &outcomes {
        let stem = file_stem(&o.id);
        match &o.result {
            Ok((archive, report)) => {
                write_text(&args.out.join(format!("{stem}.model.json")), &archive.to_json())?;
                write_csv(&args.out.join(format!("{stem}.scores.csv")), |w| {
                    output::write_scores(w, &archive.score_table, &archive.failed_k)
                })?;
                if let Some(report) = report {
                    write_csv(&args.out.join(format!("{stem}.stability.csv")), |w| output::write_stability(w, report))?;
                    reports.push(report.clone());
                }
                let labels: Vec<&str> = archive.labels.iter().map(|l| l.name()).collect();
                summary
                    .write_record([o.id.clone(), o.n.to_string(), archive.fit.k().to_string(), labels.join(";"), "ok".into()])
                    .map_err(csv_err)?;
            }
            Err(e) => {
                eprintln!("warning: pitcher {}: {e}", o.id);
                summary
                    .write_record([o.id.clone(), o.n.to_string(), String::new(), String::new(), format!("error: {e}")])
                    .map_err(csv_err)?;
            }
        }
    }
    let bytes = summary.into_inner().map_err(|e| CliError::Invalid(e.to_string()))?;
    std::fs::write(args.out.join("summary.csv"), bytes).map_err(io_err(&args.out))?;
    if args.stability {
        write_csv(&args.out.join("stability_summary.csv"), |w| output::write_stability_summaries(w, &reports))?;
    }
    let ok = outcomes.iter().filter(|o| o.result.is_ok()).count();
    println!("fitted {ok}/{} pitchers into {}", outcomes.len(), args.out.display());
    Ok(())
}

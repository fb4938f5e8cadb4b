use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::svg::{render_dendrogram, render_svg, Axis, Bubble, Mark, PlotSpec, Scale, Series};
use super::{fmt_f64, Emitter, ReportError};
use crate::authors::{author_milestone_counts, concentration_curve};
use crate::cluster::{
    dtw_kmeans_restarts, elbow, label_clusters, relative_series, ward_cluster, LabelOptions,
    DEFAULT_K, DEFAULT_LABEL_WINDOW, DEFAULT_MAX_ITER, DEFAULT_RESTARTS,
};
use crate::corpus::{corpus_stats, write_jsonl, Corpus, CorpusStats};
use crate::forgetting::{
    forgetting_curves, milestone_bars, ratio_to_f64, smoothness_trend_from, CurveMode,
};
use crate::milestone::{
    estimate_alpha, milestone_coefficient, super_flag, AlphaEstimate, AlphaSource, McFormula,
    MilestoneRecord, SuperMilestoneFlag, DEFAULT_SUPER_THRESHOLD,
};
use crate::refparse::{parse_corpus, parse_yield, PaperId, ParsedCorpus};
use crate::synth::{generate, SynthConfig};
use crate::timeseries::{
    build_citation_curves, build_citation_series, cumulative_citation_share,
    milestone_citation_panels, prior_milestones_by_year, rank_by_total, CitationCurve,
    CitationSeries,
};

/// Flags shared by the analysis commands.
#[derive(Debug, Clone, PartialEq)]
pub struct Options {
    /// Milestones in milestones.csv.
    pub top: usize,
    /// Papers in the MC bubble chart.
    pub mc_top: usize,
    /// Prior milestones per citing year in the panel and cumulative tables.
    pub panel_top: usize,
    /// Milestones clustered.
    pub cluster_top: usize,
    /// Milestones considered for author statistics.
    pub author_top: usize,
    pub min_count: usize,
    pub mode: CurveMode,
    pub log: bool,
    pub alpha: AlphaSource,
    pub mc_formula: McFormula,
    pub super_threshold: f64,
    pub k: usize,
    pub restarts: usize,
    pub max_iter: usize,
    pub seed: u64,
    pub label_window: usize,
    pub super_cluster: Option<usize>,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            top: 30,
            mc_top: 3000,
            panel_top: 300,
            cluster_top: 100,
            author_top: 300,
            min_count: 1,
            mode: CurveMode::default(),
            log: false,
            alpha: AlphaSource::default(),
            mc_formula: McFormula::default(),
            super_threshold: DEFAULT_SUPER_THRESHOLD,
            k: DEFAULT_K,
            restarts: DEFAULT_RESTARTS,
            max_iter: DEFAULT_MAX_ITER,
            seed: 0,
            label_window: DEFAULT_LABEL_WINDOW,
            super_cluster: None,
        }
    }
}

/// A corpus with its parsed references and derived tables.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub corpus: Corpus,
    pub parsed: ParsedCorpus,
    pub stats: CorpusStats,
    pub curves: BTreeMap<i32, CitationCurve>,
    pub series: BTreeMap<PaperId, CitationSeries>,
}

impl Analysis {
    pub fn new(corpus: Corpus) -> Self {
        let parsed = parse_corpus(&corpus);
        let stats = corpus_stats(&corpus);
        let curves = build_citation_curves(&parsed);
        let series = build_citation_series(&parsed);
        Analysis {
            corpus,
            parsed,
            stats,
            curves,
            series,
        }
    }

    fn top(&self, n: usize) -> Result<Vec<(PaperId, u64)>, ReportError> {
        rank_by_total(&self.series, n).map_err(|_| ReportError::Usage("--top must be at least 1".into()))
    }
}

fn s<T: ToString>(v: T) -> String {
    v.to_string()
}

pub fn emit_ingest(corpus: &Corpus, out: &mut Emitter) -> Result<(), ReportError> {
    out.write("corpus.json", &crate::corpus::to_store_bytes(corpus))?;
    let stats = corpus_stats(corpus);
    out.csv(
        "years.csv",
        &["year", "articles", "references", "mean_refs_per_paper"],
        corpus.counts().iter().map(|(&y, &n)| {
            vec![
                s(y),
                s(n),
                s(stats.total(y)),
                fmt_f64(stats.mean_refs_per_paper.get(&y).copied().unwrap_or(0.0)),
            ]
        }),
    )
}

pub fn emit_parse(a: &Analysis, out: &mut Emitter) -> Result<(), ReportError> {
    let mut rows = Vec::with_capacity(a.corpus.total_references() as usize);
    for (index, article) in a.parsed.articles.iter().enumerate() {
        for (r, cited) in article.refs.iter().enumerate() {
            rows.push(vec![
                s(article.venue_year),
                s(index),
                s(r),
                s(cited.style.as_str()),
                cited.year.map(s).unwrap_or_default(),
                cited.id.as_ref().map(|id| s(id.as_str())).unwrap_or_default(),
                cited.authors.iter().map(|k| k.as_str()).collect::<Vec<_>>().join("|"),
            ]);
        }
    }
    out.csv(
        "references.csv",
        &["citing_year", "article", "reference", "style", "year", "paper_id", "author_keys"],
        rows,
    )?;
    let y = parse_yield(&a.parsed);
    let mut rows: Vec<Vec<String>> = y
        .by_style
        .iter()
        .map(|(style, n)| vec![format!("style_{}", style.as_str()), s(n)])
        .collect();
    rows.push(vec![s("total"), s(y.total)]);
    rows.push(vec![s("with_year"), s(y.with_year)]);
    rows.push(vec![s("identified"), s(y.identified)]);
    rows.push(vec![s("parsed_fraction"), fmt_f64(y.parsed_fraction)]);
    out.csv("parse_yield.csv", &["metric", "value"], rows)
}

pub fn emit_curves(a: &Analysis, opts: &Options, out: &mut Emitter) -> Result<(), ReportError> {
    out.csv(
        "curves.csv",
        &["citing_year", "cited_year", "count"],
        a.curves.values().flat_map(|c| {
            c.counts
                .iter()
                .map(move |(&y, &n)| vec![s(c.citing_year), s(y), s(n)])
        }),
    )?;
    out.csv(
        "series.csv",
        &["paper_id", "citing_year", "count"],
        a.series.values().flat_map(|sr| {
            sr.by_year
                .iter()
                .map(move |(&y, &n)| vec![s(sr.paper.as_str()), s(y), s(n)])
        }),
    )?;

    let prior = prior_milestones_by_year(&a.parsed, opts.panel_top)
        .map_err(|_| ReportError::Usage("--panel-top must be at least 1".into()))?;
    let mut panel_rows = Vec::new();
    let mut stat_rows = Vec::new();
    let mut cumulative_rows = Vec::new();
    let mut last_panel = None;
    for (&year, milestones) in &prior {
        if milestones.is_empty() || a.stats.total(year) == 0 {
            continue;
        }
        let panel = milestone_citation_panels(&a.parsed, &a.stats, year, milestones)?;
        for (&cited, &abs) in &panel.absolute {
            panel_rows.push(vec![s(year), s(cited), s(abs), fmt_f64(panel.relative[&cited])]);
        }
        stat_rows.push(vec![
            s(year),
            s(panel.year_total),
            s(panel.absolute_total()),
            fmt_f64(panel.stats.sd),
            fmt_f64(panel.stats.kurtosis),
            fmt_f64(panel.stats.skewness),
        ]);
        if panel.absolute_total() > 0 {
            for (cited, pct) in cumulative_citation_share(&a.parsed, year, milestones)? {
                cumulative_rows.push(vec![s(year), s(cited), fmt_f64(pct)]);
            }
        }
        last_panel = Some(panel);
    }
    out.csv("panels.csv", &["citing_year", "cited_year", "absolute", "relative"], panel_rows)?;
    out.csv(
        "panel_stats.csv",
        &["citing_year", "year_total", "milestone_total", "sd", "kurtosis", "skewness"],
        stat_rows,
    )?;
    out.csv(
        "cumulative.csv",
        &["citing_year", "cited_year", "cumulative_percent"],
        cumulative_rows,
    )?;
    if let Some(panel) = last_panel.filter(|p| !p.absolute.is_empty()) {
        let spec = PlotSpec {
            title: format!("Citations to prior milestones from {}", panel.citing_year),
            x_label: "publication year of milestone".into(),
            y_label: "citations".into(),
            y2_label: Some("share of all citations".into()),
            series: vec![
                Series {
                    name: "absolute".into(),
                    points: panel.absolute.iter().map(|(&y, &c)| (y as f64, c as f64)).collect(),
                    axis: Axis::Primary,
                    mark: Mark::Bars,
                },
                Series {
                    name: "relative".into(),
                    points: panel.relative.iter().map(|(&y, &r)| (y as f64, r)).collect(),
                    axis: Axis::Secondary,
                    mark: Mark::Line,
                },
            ],
            ..PlotSpec::default()
        };
        out.write("panels.svg", render_svg(&spec)?.as_bytes())?;
    }
    Ok(())
}

/// Up to `n` evenly spaced items, always including the last.
fn spread<T: Copy>(items: &[T], n: usize) -> Vec<T> {
    if items.len() <= n {
        return items.to_vec();
    }
    let last = items.len() - 1;
    let mut idx: Vec<usize> = (0..n).map(|i| i * last / (n - 1)).collect();
    idx.dedup();
    idx.into_iter().map(|i| items[i]).collect()
}

pub fn emit_forgetting(a: &Analysis, opts: &Options, out: &mut Emitter) -> Result<(), ReportError> {
    let curves = forgetting_curves(&a.corpus, &a.parsed, opts.mode)?;
    out.csv(
        "forgetting.csv",
        &["citing_year", "cited_year", "value", "mode"],
        curves.values().flat_map(|c| {
            c.values.iter().map(move |(&y, v)| {
                vec![s(c.citing_year), s(y), fmt_f64(ratio_to_f64(v)), s(c.mode.as_str())]
            })
        }),
    )?;
    let trend = smoothness_trend_from(&a.corpus, &a.curves, opts.mode)?;
    out.csv(
        "smoothness.csv",
        &["citing_year", "variance_of_derivative", "total_variation"],
        trend.iter().map(|(&y, st)| {
            vec![s(y), fmt_f64(st.variance_of_derivative), fmt_f64(st.total_variation)]
        }),
    )?;

    let citing: Vec<i32> = curves
        .keys()
        .copied()
        .filter(|y| a.curves.get(y).is_some_and(|c| c.total() > 0))
        .collect();
    let mut series: Vec<Series> = spread(&citing, 8)
        .into_iter()
        .map(|y| Series {
            name: s(y),
            points: curves[&y]
                .values_f64()
                .into_iter()
                .take_while(|&(x, _)| x <= y)
                .map(|(x, v)| (x as f64, v))
                .collect(),
            ..Series::default()
        })
        .collect();
    if !a.series.is_empty() {
        let bars = milestone_bars(&a.series, opts.top)?;
        series.push(Series {
            name: format!("top-{} milestones", opts.top),
            points: bars.iter().map(|(&y, &c)| (y as f64, c as f64)).collect(),
            axis: Axis::Secondary,
            mark: Mark::Bars,
        });
    }
    let has_positive = series
        .iter()
        .filter(|s| s.axis == Axis::Primary)
        .any(|s| s.points.iter().any(|p| p.1 > 0.0));
    if series.iter().any(|s| s.axis == Axis::Primary) && (has_positive || !opts.log) {
        let spec = PlotSpec {
            title: format!("Forgetting curves ({})", opts.mode),
            x_label: "publication year of cited work".into(),
            y_label: if opts.log { "value (log scale)".into() } else { "value".into() },
            y2_label: Some("citations to milestones".into()),
            y_scale: if opts.log { Scale::Log } else { Scale::Linear },
            series,
            ..PlotSpec::default()
        };
        out.write("forgetting.svg", render_svg(&spec)?.as_bytes())?;
    }
    if !trend.is_empty() {
        let spec = PlotSpec {
            title: "Smoothness of forgetting curves".into(),
            x_label: "proceedings year".into(),
            y_label: "total variation".into(),
            y2_label: Some("variance of the derivative".into()),
            series: vec![
                Series {
                    name: "total variation".into(),
                    points: trend.iter().map(|(&y, t)| (y as f64, t.total_variation)).collect(),
                    ..Series::default()
                },
                Series {
                    name: "variance of the derivative".into(),
                    points: trend
                        .iter()
                        .map(|(&y, t)| (y as f64, t.variance_of_derivative))
                        .collect(),
                    axis: Axis::Secondary,
                    mark: Mark::Line,
                },
            ],
            ..PlotSpec::default()
        };
        out.write("smoothness.svg", render_svg(&spec)?.as_bytes())?;
    }
    Ok(())
}

fn milestone_records(
    a: &Analysis,
    opts: &Options,
    n: usize,
) -> Result<(AlphaEstimate, Vec<(MilestoneRecord, SuperMilestoneFlag)>), ReportError> {
    let alpha = estimate_alpha(&a.series, opts.alpha)?;
    let totals = &a.stats.per_year_reference_totals;
    let ranked = a.top(n)?;
    let records = ranked
        .par_iter()
        .map(|(id, _)| {
            let series = &a.series[id];
            let record = milestone_coefficient(series, totals, alpha.alpha, opts.mc_formula)?;
            Ok((record, super_flag(series, totals, opts.super_threshold)))
        })
        .collect::<Result<Vec<_>, crate::milestone::MilestoneError>>()?;
    Ok((alpha, records))
}

fn milestone_rows(records: &[(MilestoneRecord, SuperMilestoneFlag)]) -> Vec<Vec<String>> {
    records
        .iter()
        .enumerate()
        .map(|(i, (r, f))| {
            vec![
                s(i + 1),
                s(r.paper.as_str()),
                s(r.total),
                fmt_f64(r.slope),
                s(r.sign),
                fmt_f64(r.tcs),
                fmt_f64(r.tci),
                fmt_f64(r.nci),
                fmt_f64(r.mc),
                s(r.formula.as_str()),
                s(f.is_super),
                fmt_f64(f.peak_share),
                s(f.peak_year),
            ]
        })
        .collect()
}

const MILESTONE_HEADER: &[&str] = &[
    "rank", "paper_id", "total", "slope", "sign", "tcs", "tci", "nci", "mc", "formula_mode",
    "is_super", "peak_share", "peak_year",
];

pub fn emit_milestones(a: &Analysis, opts: &Options, out: &mut Emitter) -> Result<(), ReportError> {
    let (alpha, records) = milestone_records(a, opts, opts.top)?;
    out.csv("milestones.csv", MILESTONE_HEADER, milestone_rows(&records))?;
    out.json("alpha.json", &alpha)
}

pub fn emit_mc(a: &Analysis, opts: &Options, out: &mut Emitter) -> Result<(), ReportError> {
    let (_, records) = milestone_records(a, opts, opts.mc_top)?;
    out.csv("mc.csv", MILESTONE_HEADER, milestone_rows(&records))?;
    if !records.is_empty() {
        let spec = PlotSpec {
            title: format!("Milestone Coefficient of the top {} papers", records.len()),
            x_label: "publication year".into(),
            y_label: "MC".into(),
            zero_line: true,
            bubbles: records
                .iter()
                .map(|(r, _)| Bubble {
                    x: r.paper.year() as f64,
                    y: r.mc,
                    size: r.total as f64,
                })
                .collect(),
            ..PlotSpec::default()
        };
        out.write("mc.svg", render_svg(&spec)?.as_bytes())?;
    }
    Ok(())
}

#[derive(Serialize)]
struct DendrogramFile<'a> {
    leaves: Vec<&'a str>,
    merges: &'a [crate::cluster::Merge],
    leaf_order: &'a [usize],
}

pub fn emit_cluster(a: &Analysis, opts: &Options, out: &mut Emitter) -> Result<(), ReportError> {
    let ranked = a.top(opts.cluster_top)?;
    if ranked.len() < opts.k.max(2) {
        return Err(ReportError::Usage(format!(
            "clustering needs at least {} cited papers, found {}",
            opts.k.max(2),
            ranked.len()
        )));
    }
    let totals = &a.stats.per_year_reference_totals;
    let rel: Vec<_> = ranked
        .iter()
        .map(|(id, _)| relative_series(&a.series[id], totals))
        .collect();
    let data: Vec<Vec<f64>> = rel.iter().map(|r| r.shares.clone()).collect();

    let kmeans = dtw_kmeans_restarts(&data, opts.k, opts.seed, opts.max_iter, opts.restarts)?;
    let label_opts = LabelOptions {
        window: opts.label_window,
        threshold: opts.super_threshold,
        super_cluster: opts.super_cluster,
    };
    let (labels, profiles) = label_clusters(&kmeans.assignments, &rel, &label_opts)?;
    out.csv(
        "clusters.csv",
        &["paper_id", "cluster", "label"],
        labels
            .iter()
            .map(|l| vec![s(l.paper.as_str()), s(l.cluster), s(l.label.as_str())]),
    )?;
    out.csv(
        "cluster_profiles.csv",
        &["cluster", "size", "recent_mean", "recent_slope", "peak_share"],
        profiles.iter().map(|p| {
            vec![
                s(p.cluster),
                s(p.size),
                fmt_f64(p.recent_mean),
                fmt_f64(p.recent_slope),
                fmt_f64(p.peak_share),
            ]
        }),
    )?;

    let k_max = data.len().min(10);
    let curve = elbow(&data, 1..=k_max, opts.seed, opts.max_iter, opts.restarts)?;
    out.csv(
        "elbow.csv",
        &["k", "inertia"],
        curve.iter().map(|(&k, &v)| vec![s(k), fmt_f64(v)]),
    )?;
    let spec = PlotSpec {
        title: "Elbow criterion for DTW k-means".into(),
        x_label: "k".into(),
        y_label: "inertia".into(),
        series: vec![Series {
            name: String::new(),
            points: curve.iter().map(|(&k, &v)| (k as f64, v)).collect(),
            ..Series::default()
        }],
        ..PlotSpec::default()
    };
    out.write("elbow.svg", render_svg(&spec)?.as_bytes())?;

    let dendrogram = ward_cluster(&data)?;
    let leaves: Vec<&str> = rel.iter().map(|r| r.paper.as_str()).collect();
    out.json(
        "dendrogram.json",
        &DendrogramFile {
            leaves: leaves.clone(),
            merges: &dendrogram.merges,
            leaf_order: &dendrogram.leaf_order,
        },
    )?;
    let names: Vec<String> = leaves.iter().map(s).collect();
    out.write(
        "dendrogram.svg",
        render_dendrogram(&dendrogram, &names, "Ward dendrogram of milestone share series")?.as_bytes(),
    )?;
    Ok(())
}

pub fn emit_authors(a: &Analysis, opts: &Options, out: &mut Emitter) -> Result<(), ReportError> {
    let milestones: Vec<PaperId> = a.top(opts.author_top)?.into_iter().map(|(id, _)| id).collect();
    let counts = author_milestone_counts(&milestones, &a.parsed);
    out.csv(
        "authors.csv",
        &["author_key", "milestone_count", "milestone_ids"],
        counts.stats.iter().map(|st| {
            vec![
                s(st.author.as_str()),
                s(st.milestone_count),
                st.milestones.iter().map(|m| m.as_str()).collect::<Vec<_>>().join("|"),
            ]
        }),
    )?;
    out.csv(
        "authors_unattributed.csv",
        &["paper_id"],
        counts.unattributed.iter().map(|p| vec![s(p.as_str())]),
    )?;
    let curve = concentration_curve(&counts.stats, opts.min_count, milestones.len())?;
    out.csv(
        "concentration.csv",
        &["author_key", "count", "cumulative_share"],
        curve
            .iter()
            .map(|p| vec![s(p.author.as_str()), s(p.count), fmt_f64(p.cumulative_share)]),
    )?;
    if !curve.is_empty() {
        let spec = PlotSpec {
            title: format!("Coverage of the top {} milestones by author", milestones.len()),
            x_label: "authors, most prolific first".into(),
            y_label: "cumulative share of milestones".into(),
            series: vec![Series {
                name: String::new(),
                points: curve
                    .iter()
                    .enumerate()
                    .map(|(i, p)| ((i + 1) as f64, p.cumulative_share))
                    .collect(),
                ..Series::default()
            }],
            ..PlotSpec::default()
        };
        out.write("concentration.svg", render_svg(&spec)?.as_bytes())?;
    }
    Ok(())
}

pub fn emit_synth(config: &SynthConfig, out: &mut Emitter) -> Result<(), ReportError> {
    let (corpus, truth) = generate(config)?;
    let mut bytes = Vec::new();
    write_jsonl(&corpus, &mut bytes).map_err(|source| ReportError::Io {
        path: out.dir().join("corpus.jsonl"),
        source,
    })?;
    out.write("corpus.jsonl", &bytes)?;
    out.json("ground_truth.json", &truth)
}

/// Every analysis output for one corpus.
pub fn report_all(a: &Analysis, opts: &Options, out: &mut Emitter) -> Result<(), ReportError> {
    emit_parse(a, out)?;
    emit_curves(a, opts, out)?;
    emit_forgetting(a, opts, out)?;
    emit_milestones(a, opts, out)?;
    emit_mc(a, opts, out)?;
    emit_cluster(a, opts, out)?;
    emit_authors(a, opts, out)?;
    Ok(())
}

//! Synthetic corpus generator with controllable growth, preferential
//! attachment and recency bias.
//!
//! Generation runs in two stages. [`simulate`] draws the citation graph
//! year by year; [`Simulation::render`] turns it into a [`Corpus`] of
//! reference strings plus the [`GroundTruth`] they encode. Analyses that only
//! need counts can work from the simulation directly.

use std::collections::BTreeMap;
use std::path::Path;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::corpus::{Article, Corpus, CorpusError};
use crate::refparse::{AuthorKey, PaperId};
use crate::report::write_atomic;
use crate::timeseries::{rank_by_total, CitationCurve, CitationSeries};

#[derive(Debug, Error)]
pub enum SynthError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("planted share {share} in {year} needs {needed} citing articles but only {available} exist")]
    InfeasibleShare {
        share: f64,
        year: i32,
        needed: u64,
        available: u64,
    },
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error("cannot write ground truth: {0}")]
    Io(#[from] std::io::Error),
    #[error("cannot serialize ground truth: {0}")]
    Json(#[from] serde_json::Error),
}

/// Articles published per proceedings year.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Growth {
    Constant(u64),
    /// `round(initial * rate^i)` articles in the `i`-th year.
    Geometric { initial: u64, rate: f64 },
}

impl Growth {
    pub fn count(&self, index: u32) -> u64 {
        match *self {
            Growth::Constant(n) => n,
            Growth::Geometric { initial, rate } => (initial as f64 * rate.powi(index as i32)).round() as u64,
        }
    }
}

/// Recency half-life in years, possibly varying with the citing year.
#[derive(Debug, Clone, PartialEq)]
pub enum HalfLife {
    Constant(f64),
    /// Each entry applies from its year until the next entry.
    PerYear(BTreeMap<i32, f64>),
}

impl HalfLife {
    pub fn at(&self, citing_year: i32) -> f64 {
        match self {
            HalfLife::Constant(h) => *h,
            HalfLife::PerYear(map) => map
                .range(..=citing_year)
                .next_back()
                .or_else(|| map.iter().next())
                .map(|(_, &h)| h)
                .unwrap_or(f64::INFINITY),
        }
    }

    /// `start` until `decline_from`, then a geometric decline reaching `end`
    /// in `last_year`.
    pub fn declining(start: f64, end: f64, decline_from: i32, last_year: i32) -> Self {
        let span = (last_year - decline_from + 1) as f64;
        let mut map = BTreeMap::from([(i32::MIN, start)]);
        for year in decline_from..=last_year {
            let t = (year - decline_from + 1) as f64 / span;
            map.insert(year, start * (end / start).powf(t));
        }
        HalfLife::PerYear(map)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PlantedMilestone {
    pub year: i32,
    pub target_peak_share: f64,
}

/// An author added to `milestones` of the `top_n` most cited papers.
#[derive(Debug, Clone, PartialEq)]
pub struct PlantedAuthor {
    pub given: String,
    pub surname: String,
    pub milestones: usize,
    pub top_n: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub first_year: i32,
    pub last_year: i32,
    pub growth: Growth,
    pub refs_per_paper: u32,
    pub attachment_exponent: f64,
    pub half_life: HalfLife,
    /// Years of citable literature published before `first_year`.
    pub seed_years: u32,
    pub planted_milestones: Vec<PlantedMilestone>,
    /// Years after publication at which a planted milestone peaks.
    pub planted_peak_lag: u32,
    pub planted_author: Option<PlantedAuthor>,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            first_year: 1985,
            last_year: 2024,
            growth: Growth::Constant(983),
            refs_per_paper: 16,
            attachment_exponent: 1.0,
            half_life: HalfLife::Constant(8.0),
            seed_years: 5,
            planted_milestones: Vec::new(),
            planted_peak_lag: 3,
            planted_author: None,
            seed: 0,
        }
    }
}

impl SynthConfig {
    fn validate(&self) -> Result<(), SynthError> {
        let bad = |m: &str| Err(SynthError::InvalidConfig(m.into()));
        if self.last_year < self.first_year {
            return bad("last_year precedes first_year");
        }
        match self.growth {
            Growth::Constant(0) => return bad("papers per year must be positive"),
            Growth::Geometric { initial, rate } if initial == 0 || !(rate > 0.0 && rate.is_finite()) => {
                return bad("geometric growth needs a positive initial count and rate")
            }
            _ => {}
        }
        if self.refs_per_paper == 0 {
            return bad("refs_per_paper must be positive");
        }
        if !(self.attachment_exponent >= 0.0 && self.attachment_exponent.is_finite()) {
            return bad("attachment_exponent must be finite and non-negative");
        }
        let half_lives: Vec<f64> = match &self.half_life {
            HalfLife::Constant(h) => vec![*h],
            HalfLife::PerYear(m) => m.values().copied().collect(),
        };
        if half_lives.iter().any(|h| h.is_nan() || *h <= 0.0) {
            return bad("half-life must be positive");
        }
        let earliest = self.first_year - self.seed_years as i32;
        for p in &self.planted_milestones {
            if !(p.target_peak_share > 0.0 && p.target_peak_share <= 1.0) {
                return Err(SynthError::InvalidConfig(format!(
                    "planted share {} is outside (0, 1]",
                    p.target_peak_share
                )));
            }
            if p.year < earliest || p.year >= self.last_year {
                return Err(SynthError::InvalidConfig(format!(
                    "planted milestone year {} is outside {earliest}..{}",
                    p.year, self.last_year
                )));
            }
        }
        let mut years: Vec<i32> = self.planted_milestones.iter().map(|p| p.year).collect();
        years.sort_unstable();
        if years.windows(2).any(|w| w[0] == w[1]) {
            return bad("at most one planted milestone per year");
        }
        if let Some(a) = &self.planted_author {
            if a.milestones > a.top_n {
                return bad("planted author needs milestones <= top_n");
            }
            if AuthorKey::from_parts(&a.surname, &a.given).is_none() {
                return bad("planted author name has no usable surname or initial");
            }
        }
        Ok(())
    }

    /// Articles in each proceedings year.
    pub fn schedule(&self) -> BTreeMap<i32, u64> {
        (self.first_year..=self.last_year)
            .map(|y| (y, self.growth.count((y - self.first_year) as u32)))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimPaper {
    pub year: i32,
    pub in_corpus: bool,
    pub planted: bool,
}

/// The simulated citation graph before any text is rendered.
#[derive(Debug, Clone)]
pub struct Simulation {
    pub config: SynthConfig,
    /// Seed literature first, then each proceedings year in order.
    pub papers: Vec<SimPaper>,
    /// Cited paper indices for every paper; empty for seed literature.
    pub references: Vec<Vec<u32>>,
    /// Index of the planted paper for each entry of `config.planted_milestones`.
    pub planted: Vec<usize>,
    rng: ChaCha8Rng,
}

struct YearGroup {
    year: i32,
    start: usize,
    end: usize,
}

pub fn simulate(config: &SynthConfig) -> Result<Simulation, SynthError> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let schedule = config.schedule();
    let refs = config.refs_per_paper as u64;

    let mut papers: Vec<SimPaper> = Vec::new();
    let mut groups: Vec<YearGroup> = Vec::new();
    let seed_count = schedule[&config.first_year];
    let mut push_year = |papers: &mut Vec<SimPaper>, year: i32, n: u64, in_corpus: bool| {
        let start = papers.len();
        papers.extend((0..n).map(|_| SimPaper {
            year,
            in_corpus,
            planted: false,
        }));
        groups.push(YearGroup {
            year,
            start,
            end: papers.len(),
        });
    };
    for back in (1..=config.seed_years as i32).rev() {
        push_year(&mut papers, config.first_year - back, seed_count, false);
    }
    for (&year, &n) in &schedule {
        push_year(&mut papers, year, n, true);
    }
    let planted: Vec<usize> = config
        .planted_milestones
        .iter()
        .map(|p| groups.iter().find(|g| g.year == p.year).unwrap().start)
        .collect();
    for &i in &planted {
        papers[i].planted = true;
    }

    let mut references: Vec<Vec<u32>> = vec![Vec::new(); papers.len()];
    let mut cites = vec![0u64; papers.len()];
    let a = config.attachment_exponent;
    let mut prefix: Vec<f64> = vec![0.0; papers.len()];

    for (gi, group) in groups.iter().enumerate() {
        if !papers[group.start].in_corpus {
            continue;
        }
        let year = group.year;
        let n_articles = (group.end - group.start) as u64;
        let total_refs = n_articles * refs;

        // Planted citations: distinct citing articles per planted paper.
        let mut slots: Vec<Vec<u32>> = vec![Vec::new(); n_articles as usize];
        for (p, &paper) in config.planted_milestones.iter().zip(&planted) {
            if p.year >= year {
                continue;
            }
            let peak = (p.year + config.planted_peak_lag.max(1) as i32).min(config.last_year);
            let share = if year == peak {
                p.target_peak_share
            } else {
                p.target_peak_share / 2.0
            };
            let needed = (share * total_refs as f64).floor() as u64;
            if needed > n_articles {
                return Err(SynthError::InfeasibleShare {
                    share,
                    year,
                    needed,
                    available: n_articles,
                });
            }
            for article in sample(&mut rng, n_articles as usize, needed as usize) {
                slots[article].push(paper as u32);
            }
        }
        if let Some(full) = slots.iter().position(|s| s.len() as u64 > refs) {
            return Err(SynthError::InvalidConfig(format!(
                "article {full} of {year} would carry more planted citations than references"
            )));
        }

        // Attachment weights are frozen for the whole citing year.
        let h = config.half_life.at(year);
        let mut group_cum: Vec<f64> = Vec::with_capacity(gi);
        let mut acc = 0.0;
        for g in &groups[..gi] {
            let mut sum = 0.0;
            for i in g.start..g.end {
                if !papers[i].planted {
                    sum += if a == 0.0 { 1.0 } else { (1.0 + cites[i] as f64).powf(a) };
                }
                prefix[i] = sum;
            }
            let age = (year - g.year) as f64;
            acc += sum * (-age / h).exp2();
            group_cum.push(acc);
        }

        for (k, planted_slots) in slots.into_iter().enumerate() {
            let citing = group.start + k;
            let mut list = planted_slots;
            let organic = refs as usize - list.len();
            if acc > 0.0 {
                for _ in 0..organic {
                    let mut pick = draw(&mut rng, &groups[..gi], &group_cum, &prefix);
                    for _ in 0..32 {
                        if !list.contains(&pick) {
                            break;
                        }
                        pick = draw(&mut rng, &groups[..gi], &group_cum, &prefix);
                    }
                    list.push(pick);
                }
            }
            references[citing] = list;
        }
        for list in &references[group.start..group.end] {
            for &p in list {
                cites[p as usize] += 1;
            }
        }
    }

    Ok(Simulation {
        config: config.clone(),
        papers,
        references,
        planted,
        rng,
    })
}

fn draw(rng: &mut ChaCha8Rng, groups: &[YearGroup], group_cum: &[f64], prefix: &[f64]) -> u32 {
    let total = *group_cum.last().unwrap();
    let u = rng.gen::<f64>() * total;
    // The first cumulative value above a draw always belongs to a
    // positive-weight entry, so planted papers are never picked.
    let gi = group_cum.partition_point(|&c| c <= u).min(groups.len() - 1);
    let g = &groups[gi];
    let within = &prefix[g.start..g.end];
    let v = rng.gen::<f64>() * within[within.len() - 1];
    let i = within.partition_point(|&c| c <= v).min(within.len() - 1);
    (g.start + i) as u32
}

impl Simulation {
    /// Articles per proceedings year.
    pub fn article_counts(&self) -> BTreeMap<i32, u64> {
        self.config.schedule()
    }

    /// Citation curve of every proceedings year.
    pub fn curves(&self) -> BTreeMap<i32, CitationCurve> {
        let mut out: BTreeMap<i32, CitationCurve> = BTreeMap::new();
        for (i, list) in self.references.iter().enumerate() {
            if !self.papers[i].in_corpus {
                continue;
            }
            let year = self.papers[i].year;
            let curve = out.entry(year).or_insert_with(|| CitationCurve {
                citing_year: year,
                counts: BTreeMap::new(),
            });
            for &p in list {
                *curve.counts.entry(self.papers[p as usize].year).or_insert(0) += 1;
            }
        }
        out
    }

    /// Citations per citing year for every cited paper, by paper index.
    pub fn series_by_index(&self) -> BTreeMap<usize, BTreeMap<i32, u64>> {
        let mut out: BTreeMap<usize, BTreeMap<i32, u64>> = BTreeMap::new();
        for (i, list) in self.references.iter().enumerate() {
            let year = self.papers[i].year;
            for &p in list {
                *out.entry(p as usize).or_default().entry(year).or_insert(0) += 1;
            }
        }
        out
    }

    /// Renders reference strings and returns the corpus with its ground truth.
    pub fn render(mut self) -> Result<(Corpus, GroundTruth), SynthError> {
        let titles: Vec<String> = (0..self.papers.len()).map(title).collect();
        let ids: Vec<PaperId> = self
            .papers
            .iter()
            .zip(&titles)
            .map(|(p, t)| PaperId::from_title(p.year, t).expect("generated titles are non-empty"))
            .collect();

        let pool = author_pool(&mut self.rng, (self.papers.len() * 2 / 3).max(50));
        let mut authors: Vec<Vec<(String, String)>> = (0..self.papers.len())
            .map(|_| {
                let n = self.rng.gen_range(1..=4);
                let picks = sample(&mut self.rng, pool.len(), n);
                picks.into_iter().map(|i| pool[i].clone()).collect()
            })
            .collect();

        let by_index = self.series_by_index();
        let series: BTreeMap<PaperId, CitationSeries> = by_index
            .iter()
            .map(|(&i, by_year)| {
                (
                    ids[i].clone(),
                    CitationSeries {
                        paper: ids[i].clone(),
                        by_year: by_year.clone(),
                        first_cited: *by_year.keys().next().unwrap(),
                    },
                )
            })
            .collect();

        let planted_author = match &self.config.planted_author {
            None => None,
            Some(pa) => {
                let top = rank_by_total(&series, pa.top_n)
                    .map_err(|e| SynthError::InvalidConfig(e.to_string()))?;
                if top.len() < pa.milestones {
                    return Err(SynthError::InvalidConfig(format!(
                        "only {} cited papers for a planted author on {}",
                        top.len(),
                        pa.milestones
                    )));
                }
                let index_of: BTreeMap<&PaperId, usize> =
                    ids.iter().enumerate().map(|(i, id)| (id, i)).collect();
                let mut chosen: Vec<PaperId> = sample(&mut self.rng, top.len(), pa.milestones)
                    .into_iter()
                    .map(|r| top[r].0.clone())
                    .collect();
                chosen.sort();
                for id in &chosen {
                    let list = &mut authors[index_of[id]];
                    let at = self.rng.gen_range(0..=list.len());
                    list.insert(at, (pa.given.clone(), pa.surname.clone()));
                }
                Some(PlantedAuthorTruth {
                    author: AuthorKey::from_parts(&pa.surname, &pa.given).unwrap(),
                    milestones: chosen,
                })
            }
        };

        let mut articles = Vec::new();
        let mut per_year_references: BTreeMap<i32, u64> = BTreeMap::new();
        let mut citing_index = 0usize;
        for (i, paper) in self.papers.iter().enumerate() {
            if !paper.in_corpus {
                continue;
            }
            let apa = citing_index % 2 == 1;
            citing_index += 1;
            let references: Vec<String> = self.references[i]
                .iter()
                .map(|&p| {
                    let p = p as usize;
                    let year = self.papers[p].year;
                    if apa {
                        render_apa(&authors[p], year, &titles[p], p)
                    } else {
                        render_acm(&authors[p], year, &titles[p], p)
                    }
                })
                .collect();
            *per_year_references.entry(paper.year).or_insert(0) += references.len() as u64;
            articles.push(Article {
                venue_year: paper.year,
                title: titles[i].clone(),
                authors: authors[i].iter().map(|(g, s)| format!("{g} {s}")).collect(),
                references,
            });
        }

        let planted = self
            .config
            .planted_milestones
            .iter()
            .zip(&self.planted)
            .map(|(p, &i)| {
                let by_year = by_index.get(&i).cloned().unwrap_or_default();
                let (peak_year, peak_share) = by_year
                    .iter()
                    .map(|(&y, &c)| (y, c as f64 / per_year_references[&y] as f64))
                    .fold((p.year, 0.0), |best, cur| if cur.1 > best.1 { cur } else { best });
                PlantedTruth {
                    paper: ids[i].clone(),
                    year: p.year,
                    target_peak_share: p.target_peak_share,
                    peak_year,
                    peak_share,
                }
            })
            .collect();

        let truth = GroundTruth {
            seed: self.config.seed,
            per_year_articles: self.config.schedule(),
            per_year_references,
            series: series.into_iter().map(|(id, s)| (id, s.by_year)).collect(),
            planted,
            planted_author,
        };
        let range = crate::corpus::YearRange {
            first: self.config.first_year.min(crate::corpus::YearRange::default().first),
            last: self.config.last_year.max(crate::corpus::YearRange::default().last),
        };
        Ok((Corpus::with_range(articles, range)?, truth))
    }
}

pub fn generate(config: &SynthConfig) -> Result<(Corpus, GroundTruth), SynthError> {
    simulate(config)?.render()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlantedTruth {
    pub paper: PaperId,
    pub year: i32,
    pub target_peak_share: f64,
    pub peak_year: i32,
    pub peak_share: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlantedAuthorTruth {
    pub author: AuthorKey,
    pub milestones: Vec<PaperId>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroundTruth {
    pub seed: u64,
    pub per_year_articles: BTreeMap<i32, u64>,
    pub per_year_references: BTreeMap<i32, u64>,
    /// Citations per citing year for every cited paper.
    pub series: BTreeMap<PaperId, BTreeMap<i32, u64>>,
    pub planted: Vec<PlantedTruth>,
    pub planted_author: Option<PlantedAuthorTruth>,
}

impl GroundTruth {
    pub fn write(&self, path: &Path) -> Result<(), SynthError> {
        let mut bytes = serde_json::to_vec_pretty(self)?;
        bytes.push(b'\n');
        write_atomic(path, &bytes)?;
        Ok(())
    }
}

const GIVEN: &[&str] = &[
    "Ada", "Ben", "Chen", "Dana", "Eli", "Farah", "Gus", "Hana", "Ivo", "Jun", "Kai", "Lena", "Mia",
    "Nils", "Omar", "Pia", "Quinn", "Rosa", "Sami", "Tara", "Uma", "Vik", "Wen", "Xia", "Yara",
    "Zoe",
];
const CONSONANTS: &[char] = &['b', 'd', 'f', 'g', 'k', 'l', 'm', 'n', 'p', 'r', 's', 't', 'v', 'z'];
const VOWELS: &[char] = &['a', 'e', 'i', 'o', 'u'];
const ADJECTIVES: &[&str] = &[
    "adaptive", "ambient", "collaborative", "embodied", "situated", "tangible", "mobile", "social",
    "participatory", "playful", "accessible", "wearable", "immersive", "haptic", "gestural",
    "conversational",
];
const NOUNS: &[&str] = &[
    "interfaces", "displays", "sensing", "feedback", "visualization", "dialogue", "annotation",
    "navigation", "prototyping", "notifications", "agents", "workspaces",
];
const SETTINGS: &[&str] = &[
    "in the home", "for older adults", "at work", "on the move", "for learning",
    "in public spaces", "for clinicians", "in classrooms", "for makers",
];

fn author_pool(rng: &mut ChaCha8Rng, size: usize) -> Vec<(String, String)> {
    (0..size)
        .map(|_| {
            let given = GIVEN[rng.gen_range(0..GIVEN.len())].to_string();
            let syllables = rng.gen_range(2..=3);
            let mut surname = String::new();
            for s in 0..syllables {
                let c = CONSONANTS[rng.gen_range(0..CONSONANTS.len())];
                let c = if s == 0 { c.to_ascii_uppercase() } else { c };
                surname.push(c);
                surname.push(VOWELS[rng.gen_range(0..VOWELS.len())]);
            }
            (given, surname)
        })
        .collect()
}

/// Unique title for paper `i`.
fn title(i: usize) -> String {
    let adj = ADJECTIVES[i % ADJECTIVES.len()];
    let noun = NOUNS[(i / ADJECTIVES.len()) % NOUNS.len()];
    let setting = SETTINGS[(i / 7) % SETTINGS.len()];
    format!("Study {} of {adj} {noun} {setting}", i + 1)
}

fn render_acm(authors: &[(String, String)], year: i32, title: &str, i: usize) -> String {
    let names: Vec<String> = authors.iter().map(|(g, s)| format!("{g} {s}")).collect();
    let joined = match names.len() {
        1 => names[0].clone(),
        2 => format!("{} and {}", names[0], names[1]),
        n => format!("{}, and {}", names[..n - 1].join(", "), names[n - 1]),
    };
    let first = i % 90 + 1;
    format!(
        "{joined}. {year}. {title}. In Proceedings of the Conference on Synthetic Interaction. ACM, {first}\u{2013}{}.",
        first + 9
    )
}

fn render_apa(authors: &[(String, String)], year: i32, title: &str, i: usize) -> String {
    let names: Vec<String> = authors
        .iter()
        .map(|(g, s)| format!("{s}, {}.", g.chars().next().unwrap()))
        .collect();
    let joined = match names.len() {
        1 => names[0].clone(),
        n => format!("{}, & {}", names[..n - 1].join(", "), names[n - 1]),
    };
    let first = i % 90 + 1;
    format!(
        "{joined} ({year}). {title}. Journal of Synthetic Studies, {}({}), {first}\u{2013}{}.",
        i % 40 + 1,
        i % 4 + 1,
        first + 9
    )
}

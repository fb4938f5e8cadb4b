use std::collections::BTreeMap;

use proptest::prelude::*;

use citescope::cluster::{dtw_distance, ward_cluster};
use citescope::corpus::{from_store_bytes, to_store_bytes, Article, Corpus};
use citescope::forgetting::{forgetting_curve_counts, ratio_to_f64, CurveMode};
use citescope::milestone::{milestone_coefficient, McFormula};
use citescope::refparse::{normalize_title, parse_corpus, PaperId};
use citescope::report::fmt_f64;
use citescope::synth::{generate, simulate, Growth, HalfLife, SynthConfig};
use citescope::timeseries::{build_citation_series, CitationCurve, CitationSeries};

fn article() -> impl Strategy<Value = Article> {
    (
        1981i32..=2024,
        "[A-Za-z][A-Za-z ]{0,20}",
        prop::collection::vec("[A-Z][a-z]{1,8} [A-Z][a-z]{1,8}", 0..3),
        prop::collection::vec(".{0,40}", 0..4),
    )
        .prop_map(|(venue_year, title, authors, references)| Article {
            venue_year,
            title,
            authors,
            references,
        })
}

proptest! {
    #[test]
    fn counts_sum_to_total_and_store_round_trips(articles in prop::collection::vec(article(), 0..20)) {
        let corpus = Corpus::new(articles).unwrap();
        prop_assert_eq!(corpus.counts().values().sum::<u64>(), corpus.total_articles());
        let back = from_store_bytes(&to_store_bytes(&corpus)).unwrap();
        prop_assert_eq!(&back, &corpus);
        prop_assert_eq!(to_store_bytes(&back), to_store_bytes(&corpus));
    }

    #[test]
    fn normalized_titles_are_stable(title in "\\PC{0,60}") {
        let once = normalize_title(&title);
        prop_assert!(once.bytes().all(|b| b.is_ascii_lowercase() || b.is_ascii_digit()));
        prop_assert_eq!(normalize_title(&once), once.clone());
        if let Some(id) = PaperId::from_title(2001, &title) {
            prop_assert_eq!(id.as_str(), format!("2001_{once}"));
        }
    }

    #[test]
    fn dtw_is_a_symmetric_premetric(
        a in prop::collection::vec(-10.0f64..10.0, 1..12),
        b in prop::collection::vec(-10.0f64..10.0, 1..12),
    ) {
        let ab = dtw_distance(&a, &b).unwrap();
        prop_assert!(ab >= 0.0);
        prop_assert_eq!(ab, dtw_distance(&b, &a).unwrap());
        prop_assert_eq!(dtw_distance(&a, &a).unwrap(), 0.0);
    }

    #[test]
    fn ward_cut_yields_k_groups(
        data in prop::collection::vec(prop::collection::vec(0.0f64..1.0, 2..8), 2..12),
        k_seed in 0usize..100,
    ) {
        let d = ward_cluster(&data).unwrap();
        let k = 1 + k_seed % data.len();
        let labels = d.cut(k).unwrap();
        let mut distinct = labels.clone();
        distinct.sort_unstable();
        distinct.dedup();
        prop_assert_eq!(distinct, (0..k).collect::<Vec<_>>());
        let mut order = d.leaf_order.clone();
        order.sort_unstable();
        prop_assert_eq!(order, (0..data.len()).collect::<Vec<_>>());
    }

    #[test]
    fn literal_curve_redistributes_in_range_citations(
        counts in prop::collection::btree_map(1990i32..2010, 1u64..50, 1..12),
        cited in prop::collection::btree_map(1985i32..2012, 0u64..100, 0..15),
    ) {
        let year = *counts.keys().next_back().unwrap();
        let curve = CitationCurve { citing_year: year, counts: cited.clone() };
        let lit = forgetting_curve_counts(&counts, Some(&curve), year, CurveMode::Literal).unwrap();
        let in_range: u64 = cited.iter().filter(|(y, _)| counts.contains_key(y)).map(|(_, c)| c).sum();
        let total: f64 = lit.values.values().map(ratio_to_f64).sum();
        prop_assert!((total - in_range as f64).abs() <= 1e-9 * (1.0 + in_range as f64));
        let excluded: u64 = lit.excluded.values().sum();
        prop_assert_eq!(excluded + in_range, cited.values().sum::<u64>());
        let pc = forgetting_curve_counts(&counts, Some(&curve), year, CurveMode::PerCapita).unwrap();
        prop_assert_eq!(pc.values.keys().collect::<Vec<_>>(), counts.keys().collect::<Vec<_>>());
    }

    #[test]
    fn mc_sign_follows_slope_and_scales_with_alpha(
        points in prop::collection::btree_map(1990i32..2024, 1u64..500, 1..20),
        alpha in 0.0f64..6.0,
    ) {
        let first = *points.keys().next().unwrap();
        let s = CitationSeries {
            paper: PaperId::parse("2000_fixture").unwrap(),
            by_year: points.clone(),
            first_cited: first,
        };
        let totals: BTreeMap<i32, u64> = (1990..2024).map(|y| (y, 1000)).collect();
        let base = milestone_coefficient(&s, &totals, 0.0, McFormula::Product).unwrap();
        let r = milestone_coefficient(&s, &totals, alpha, McFormula::Product).unwrap();
        prop_assert_eq!(r.sign, if r.slope >= 0.0 { 1 } else { -1 });
        prop_assert!(r.mc == 0.0 || r.mc.signum() as i32 == r.sign);
        let expected = base.mc * (-alpha).exp();
        prop_assert!((r.mc - expected).abs() <= 1e-12 * (1.0 + expected.abs()));
    }

    #[test]
    fn csv_floats_round_trip(v in any::<f64>().prop_filter("finite", |v| v.is_finite())) {
        prop_assert_eq!(fmt_f64(v).parse::<f64>().unwrap(), v);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn ground_truth_matches_parsed_series(seed in any::<u64>(), rate in 1.0f64..1.2) {
        let config = SynthConfig {
            first_year: 2010,
            last_year: 2016,
            growth: Growth::Geometric { initial: 20, rate },
            refs_per_paper: 6,
            seed_years: 2,
            seed,
            ..SynthConfig::default()
        };
        let (corpus, truth) = generate(&config).unwrap();
        let parsed = build_citation_series(&parse_corpus(&corpus));
        let parsed: BTreeMap<PaperId, BTreeMap<i32, u64>> =
            parsed.into_iter().map(|(id, s)| (id, s.by_year)).collect();
        prop_assert_eq!(parsed, truth.series);
    }
}

/// Upper 1% point of the chi-square distribution (Wilson-Hilferty).
fn chi_square_critical_99(dof: f64) -> f64 {
    let z = 2.326_347_874;
    let h = 2.0 / (9.0 * dof);
    dof * (1.0 - h + z * h.sqrt()).powi(3)
}

#[test]
fn null_model_cites_uniformly() {
    let config = SynthConfig {
        first_year: 2000,
        last_year: 2000,
        growth: Growth::Constant(1000),
        refs_per_paper: 100,
        attachment_exponent: 0.0,
        half_life: HalfLife::Constant(f64::INFINITY),
        seed_years: 1,
        seed: 3,
        ..SynthConfig::default()
    };
    let sim = simulate(&config).unwrap();
    let by_index = sim.series_by_index();
    let cited: Vec<u64> = sim
        .papers
        .iter()
        .enumerate()
        .filter(|(_, p)| !p.in_corpus)
        .map(|(i, _)| by_index.get(&i).map(|s| s.values().sum()).unwrap_or(0))
        .collect();
    let n: u64 = cited.iter().sum();
    assert_eq!(n, 100_000);
    let expected = n as f64 / cited.len() as f64;
    let chi2: f64 = cited.iter().map(|&o| (o as f64 - expected).powi(2) / expected).sum();
    let critical = chi_square_critical_99((cited.len() - 1) as f64);
    assert!(chi2 < critical, "chi-square {chi2:.1} above the 1% point {critical:.1}");
}

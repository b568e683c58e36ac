#[path = "support/oracles.rs"]
mod oracles;

use proptest::prelude::*;
use qwm::metrics::{
    bleu_stats, corpus_score, meteor_stats, weighted_bleu, weighted_cider, weighted_meteor, weighted_rouge_l, Breakdown,
    Metric, MetricConfig, MetricScore, QualityReference, ReferenceSet,
};
use qwm::textcore::{build_df_tables, DocumentFrequencyTable};
use qwm::TokenSeq;


fn seq_strategy(min: usize, max: usize) -> impl Strategy<Value = Vec<String>> {
    prop::collection::vec(prop::sample::select(vec!["a", "b", "c", "d", "e"]), min..=max)
        .prop_map(|v| v.into_iter().map(str::to_owned).collect())
}

fn instance() -> impl Strategy<Value = (Vec<String>, Vec<(Vec<String>, f64)>)> {
    (
        seq_strategy(0, 7),
        prop::collection::vec((seq_strategy(1, 7), 0.0f64..=1.0), 1..=4),
    )
}

fn refset(refs: &[(Vec<String>, f64)]) -> ReferenceSet {
    ReferenceSet::new(
        refs.iter()
            .map(|(t, q)| QualityReference::new(TokenSeq::new(t.clone()).unwrap(), *q).unwrap())
            .collect(),
    )
    .unwrap()
}

fn background() -> Vec<Vec<Vec<String>>> {
    ["a b c", "d e a b", "c c d", "e", "b d"]
        .iter()
        .map(|s| vec![oracles::toks(s)])
        .collect()
}

fn tables(extra: &[Vec<String>], max_n: usize) -> (Vec<Vec<Vec<String>>>, Vec<DocumentFrequencyTable>) {
    let mut corpus = background();
    corpus.push(extra.to_vec());
    let seqs: Vec<Vec<TokenSeq>> = corpus
        .iter()
        .map(|d| d.iter().map(|t| TokenSeq::new(t.clone()).unwrap()).collect())
        .collect();
    let df = build_df_tables(seqs.iter().map(|d| d.iter()), max_n).unwrap();
    (corpus, df)
}

fn cfg() -> MetricConfig {
    MetricConfig {
        bleu_max_order: 2,
        cider_max_order: 2,
        ..MetricConfig::default()
    }
}

fn all_scores(c: &TokenSeq, r: &ReferenceSet, df: &[DocumentFrequencyTable], cfg: &MetricConfig) -> [MetricScore; 4] {
    [
        weighted_bleu(c, r, cfg).unwrap(),
        weighted_meteor(c, r, cfg).unwrap(),
        weighted_rouge_l(c, r, cfg).unwrap(),
        weighted_cider(c, r, df, cfg).unwrap(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn unit_quality_matches_unweighted_oracles((cand, refs) in instance()) {
        let unit: Vec<(Vec<String>, f64)> = refs.iter().map(|(t, _)| (t.clone(), 1.0)).collect();
        let plain: Vec<Vec<String>> = refs.iter().map(|(t, _)| t.clone()).collect();
        let (corpus, df) = tables(&plain, 2);
        let c = TokenSeq::new(cand.clone()).unwrap();
        let [bleu, meteor, rouge, cider] = all_scores(&c, &refset(&unit), &df, &cfg());
        prop_assert!((bleu.value - oracles::bleu(&cand, &plain, 2)).abs() < 1e-12);
        prop_assert!((meteor.value - oracles::meteor(&cand, &plain)).abs() < 1e-12);
        prop_assert!((rouge.value - oracles::rouge_l(&cand, &plain, 1.2)).abs() < 1e-12);
        prop_assert!((cider.value - oracles::cider(&cand, &plain, &corpus, 2)).abs() < 1e-12);
    }

    #[test]
    fn raising_quality_never_lowers((cand, refs) in instance(), pick in 0usize..4, bump in 0.0f64..1.0) {
        let j = pick % refs.len();
        let mut raised = refs.clone();
        raised[j].1 = (raised[j].1 + bump).min(1.0);
        let plain: Vec<Vec<String>> = refs.iter().map(|(t, _)| t.clone()).collect();
        let (_, df) = tables(&plain, 2);
        let c = TokenSeq::new(cand).unwrap();
        let before = all_scores(&c, &refset(&refs), &df, &cfg());
        let after = all_scores(&c, &refset(&raised), &df, &cfg());
        for (b, a) in before.iter().zip(&after) {
            prop_assert!(a.value >= b.value - 1e-12, "{} -> {}", b.value, a.value);
        }
        if let (Breakdown::Bleu { precisions: pb, .. }, Breakdown::Bleu { precisions: pa, .. }) =
            (&before[0].breakdown, &after[0].breakdown)
        {
            for (b, a) in pb.iter().zip(pa) {
                prop_assert!(*a >= b - 1e-12);
            }
        }
        if let (Breakdown::RougeL { union_weight: ub, .. }, Breakdown::RougeL { union_weight: ua, .. }) =
            (&before[2].breakdown, &after[2].breakdown)
        {
            prop_assert!(*ua >= ub - 1e-12);
        }
    }

    #[test]
    fn single_reference_linearity(cand in seq_strategy(0, 7), reference in seq_strategy(1, 7), s in 0.0f64..=1.0) {
        let (_, df) = tables(&[reference.clone()], 2);
        let c = TokenSeq::new(cand).unwrap();
        let full = refset(&[(reference.clone(), 1.0)]);
        let scaled = refset(&[(reference, s)]);
        let m1 = weighted_meteor(&c, &full, &cfg()).unwrap().value;
        let ms = weighted_meteor(&c, &scaled, &cfg()).unwrap().value;
        prop_assert!((ms - s * m1).abs() < 1e-12);
        let c1 = weighted_cider(&c, &full, &df, &cfg()).unwrap().value;
        let cs = weighted_cider(&c, &scaled, &df, &cfg()).unwrap().value;
        prop_assert!((cs - s * c1).abs() < 1e-12);
    }

    #[test]
    fn bounded_and_order_free((cand, refs) in instance(), rotate in 0usize..4) {
        let plain: Vec<Vec<String>> = refs.iter().map(|(t, _)| t.clone()).collect();
        let (_, df) = tables(&plain, 2);
        let c = TokenSeq::new(cand).unwrap();
        let scores = all_scores(&c, &refset(&refs), &df, &cfg());
        for s in &scores[..3] {
            prop_assert!((0.0..=1.0).contains(&s.value));
        }
        prop_assert!(scores[3].value >= 0.0);
        let mut rotated = refs.clone();
        let k = rotate % rotated.len();
        rotated.rotate_left(k);
        rotated.reverse();
        let again = all_scores(&c, &refset(&rotated), &df, &cfg());
        for (a, b) in scores.iter().zip(&again) {
            prop_assert!((a.value - b.value).abs() < 1e-12);
        }
    }

    #[test]
    fn disjoint_vocabulary_scores_zero(cand in seq_strategy(1, 6), refs in prop::collection::vec((seq_strategy(1, 6), 0.0f64..=1.0), 1..4)) {
        let shifted: Vec<(Vec<String>, f64)> = refs
            .iter()
            .map(|(t, q)| (t.iter().map(|x| format!("{x}{x}")).collect(), *q))
            .collect();
        let plain: Vec<Vec<String>> = shifted.iter().map(|(t, _)| t.clone()).collect();
        let (_, df) = tables(&plain, 2);
        let c = TokenSeq::new(cand).unwrap();
        for s in all_scores(&c, &refset(&shifted), &df, &cfg()) {
            prop_assert_eq!(s.value, 0.0);
        }
    }

    #[test]
    fn unmatched_tokens_dilute_bleu1(cand in seq_strategy(3, 6), reference in seq_strategy(1, 3), extra in 1usize..4) {
        let cfg = MetricConfig { bleu_max_order: 1, ..MetricConfig::default() };
        let refs = refset(&[(reference, 1.0)]);
        let c = TokenSeq::new(cand.clone()).unwrap();
        let mut longer = cand;
        longer.extend((0..extra).map(|i| format!("zz{i}")));
        let before = weighted_bleu(&c, &refs, &cfg).unwrap().value;
        let after = weighted_bleu(&TokenSeq::new(longer).unwrap(), &refs, &cfg).unwrap().value;
        prop_assert!(after <= before + 1e-12);
    }

    #[test]
    fn statistics_merge_is_order_free(items in prop::collection::vec(instance(), 1..5)) {
        let cfg = cfg();
        let parts: Vec<(TokenSeq, ReferenceSet)> = items
            .iter()
            .map(|(c, r)| (TokenSeq::new(c.clone()).unwrap(), refset(r)))
            .collect();
        let bleu: Vec<_> = parts.iter().map(|(c, r)| bleu_stats(c, r, 2).unwrap()).collect();
        let meteor: Vec<_> = parts.iter().map(|(c, r)| meteor_stats(c, r, &cfg).unwrap()).collect();
        let mut forward = bleu[0].clone();
        bleu[1..].iter().for_each(|s| forward.merge(s));
        let mut backward = bleu[bleu.len() - 1].clone();
        bleu[..bleu.len() - 1].iter().rev().for_each(|s| backward.merge(s));
        prop_assert_eq!(forward.totals, backward.totals);
        prop_assert_eq!(forward.candidate_len, backward.candidate_len);
        for (a, b) in forward.clipped.iter().zip(&backward.clipped) {
            prop_assert!((a - b).abs() < 1e-12);
        }
        let mut mf = meteor[0].clone();
        meteor[1..].iter().for_each(|s| mf.merge(s));
        let mut mb = meteor[meteor.len() - 1].clone();
        meteor[..meteor.len() - 1].iter().rev().for_each(|s| mb.merge(s));
        prop_assert_eq!(mf.matches, mb.matches);
        prop_assert!((mf.weighted_matches - mb.weighted_matches).abs() < 1e-12);
    }
}

#[test]
fn corpus_matches_sentence_for_one_instance() {
    let c = TokenSeq::from_text("a b c d");
    let r = refset(&[(oracles::toks("a b d"), 0.5), (oracles::toks("b c d e"), 0.75)]);
    let (_, df) = tables(&[oracles::toks("a b d"), oracles::toks("b c d e")], 2);
    let sent = all_scores(&c, &r, &df, &cfg());
    for (metric, s) in Metric::ALL.into_iter().zip(&sent) {
        let corpus = corpus_score(metric, &[c.clone()], &[r.clone()], &df, &cfg()).unwrap();
        assert!((corpus.value - s.value).abs() < 1e-12, "{metric}");
    }
}

use std::collections::HashMap;

use proptest::prelude::*;
use proptest::sample::subsequence;

use halfstat::compress::lz_complexity;
use halfstat::features::{common_words, rare_counts, spectrum, spectrum_entropy, yule_k};
use halfstat::spatial::{mu, occurrences, period_stats, MuConfig, WordOccurrences};
use halfstat::stats::{wilcoxon, PairedSample};
use halfstat::tokenize::{tokenize, TokenizerConfig};
use halfstat::transform::{invert_words, shuffle_words, split_halves};
use halfstat::ShuffleSpec;

fn word_list(max_len: usize) -> impl Strategy<Value = Vec<String>> {
    prop::collection::vec((0u8..40).prop_map(|i| format!("w{i}")), 1..max_len)
}

fn sorted_counts(words: &[String]) -> Vec<(String, usize)> {
    let mut m: HashMap<&str, usize> = HashMap::new();
    for w in words {
        *m.entry(w).or_default() += 1;
    }
    let mut v: Vec<(String, usize)> = m.into_iter().map(|(k, c)| (k.to_string(), c)).collect();
    v.sort();
    v
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::with_cases(10_000) })]

    #[test]
    fn spectrum_is_conserved(words in word_list(400)) {
        let s = spectrum(&words).unwrap();
        prop_assert_eq!(s.counts.values().sum::<usize>(), s.distinct);
        prop_assert_eq!(s.counts.iter().map(|(m, v)| m * v).sum::<usize>(), words.len());
        prop_assert_eq!(s.max_count, sorted_counts(&words).iter().map(|c| c.1).max().unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::with_cases(512) })]

    #[test]
    fn split_then_concat_is_identity(words in word_list(200).prop_filter("two words", |w| w.len() >= 2)) {
        let p = split_halves(&words).unwrap();
        prop_assert_eq!(p.first.len(), p.second.len());
        let mut joined = p.first.clone();
        if p.dropped_middle {
            joined.push(words[words.len() / 2].clone());
        }
        joined.extend(p.second.iter().cloned());
        prop_assert_eq!(joined, words);
    }

    #[test]
    fn inversion_is_an_involution(words in word_list(200)) {
        prop_assert_eq!(invert_words(&invert_words(&words)), words);
    }

    #[test]
    fn inverted_halves_swap(words in word_list(200).prop_filter("two words", |w| w.len() >= 2)) {
        let p = split_halves(&words).unwrap();
        let q = split_halves(&invert_words(&words)).unwrap();
        prop_assert_eq!(sorted_counts(&q.first), sorted_counts(&p.second));
        prop_assert_eq!(sorted_counts(&q.second), sorted_counts(&p.first));
    }

    #[test]
    fn shuffles_preserve_the_multiset(words in word_list(200), seed in any::<u64>(), rep in 0u32..10) {
        let spec = ShuffleSpec { seed, repetitions: 10 };
        let shuffled = shuffle_words(&words, &spec, "doc", rep).unwrap();
        prop_assert_eq!(sorted_counts(&shuffled), sorted_counts(&words));
        prop_assert_eq!(shuffle_words(&words, &spec, "doc", rep).unwrap(), shuffled);
    }

    #[test]
    fn lexical_features_ignore_order(words in word_list(300), seed in any::<u64>()) {
        let spec = ShuffleSpec { seed, repetitions: 1 };
        let shuffled = shuffle_words(&words, &spec, "doc", 0).unwrap();
        let (a, b) = (spectrum(&words).unwrap(), spectrum(&shuffled).unwrap());
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(rare_counts(&a, 5), rare_counts(&b, 5));
        prop_assert_eq!(yule_k(&a).ok(), yule_k(&b).ok());
        prop_assert_eq!(spectrum_entropy(&a), spectrum_entropy(&b));
    }

    #[test]
    fn rare_counts_are_monotone(words in word_list(300)) {
        let s = spectrum(&words).unwrap();
        let r = rare_counts(&s, 5);
        prop_assert!(r.h.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(r.h[4] <= s.distinct);
        prop_assert!(r.rare_mass.iter().all(|&m| m <= s.total));
        prop_assert!(r.h_norm.iter().all(|&x| (0.0..=1.0).contains(&x)));
    }

    #[test]
    fn common_words_bounded_and_order_free(a in word_list(100), b in word_list(100), seed in any::<u64>()) {
        let c = common_words(&a, &b).unwrap();
        let n1 = spectrum(&a).unwrap().distinct;
        let n2 = spectrum(&b).unwrap().distinct;
        prop_assert!(c.common <= n1.min(n2));
        prop_assert!((0.0..=1.0).contains(&c.c1) && (0.0..=1.0).contains(&c.c2));
        let spec = ShuffleSpec { seed, repetitions: 1 };
        let a2 = shuffle_words(&a, &spec, "a", 0).unwrap();
        let b2 = shuffle_words(&b, &spec, "b", 0).unwrap();
        prop_assert_eq!(common_words(&a2, &b2).unwrap(), c);
    }

    #[test]
    fn lz_ignores_bit_flips(bits in prop::collection::vec(0u8..2, 1..600)) {
        let flipped: Vec<u8> = bits.iter().map(|b| 1 - b).collect();
        let a = lz_complexity(&bits).unwrap();
        let b = lz_complexity(&flipped).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn lz_fragments_tile_the_input(bits in prop::collection::vec(0u8..2, 1..600)) {
        let p = lz_complexity(&bits).unwrap();
        let frags = p.fragments(&bits);
        prop_assert_eq!(frags.concat(), bits.clone());
        // every fragment but the possibly incomplete last one is new
        let mut seen = std::collections::HashSet::new();
        for f in &frags[..frags.len() - 1] {
            prop_assert!(seen.insert(f.to_vec()));
        }
    }

    #[test]
    fn period_identities(
        half_len in 2usize..300,
        picks in prop::collection::vec(any::<prop::sample::Index>(), 2..30),
        seed in any::<u64>(),
    ) {
        let mut positions: Vec<usize> = picks.iter().map(|i| i.index(half_len) + 1).collect();
        positions.sort_unstable();
        positions.dedup();
        prop_assume!(positions.len() >= 2);
        let l = positions.len();
        let occ = WordOccurrences { word: "w".into(), positions: positions.clone() };
        let p = period_stats(&occ, half_len).unwrap();
        // (ℓ−1)·t counts the gap from first to last occurrence
        let between = positions[l - 1] - positions[0] - 1;
        let span = (between + 1) as f64;
        prop_assert!((p.period * (l - 1) as f64 - span).abs() <= span * 1e-12);
        prop_assert!(p.period >= 1.0);
        prop_assert!(p.inverse_period > 0.0 && p.inverse_period <= 1.0);
        prop_assert!(p.mean_char_freq > 0.0 && p.mean_char_freq <= 1.0);
        prop_assert!(p.mean_char_freq >= p.inverse_period * (1.0 - 1e-12));

        // redistribute interior occurrences
        let spec = ShuffleSpec { seed, repetitions: 1 };
        let free: Vec<String> = (positions[0] + 1..positions[l - 1]).map(|x| x.to_string()).collect();
        let mut moved: Vec<usize> = shuffle_words(&free, &spec, "p", 0)
            .unwrap()
            .into_iter()
            .take(l - 2)
            .map(|s| s.parse().unwrap())
            .collect();
        moved.push(positions[0]);
        moved.push(positions[l - 1]);
        moved.sort_unstable();
        let q = period_stats(&WordOccurrences { word: "w".into(), positions: moved }, half_len).unwrap();
        prop_assert_eq!(q.period, p.period);
    }

    #[test]
    fn mu_is_nonnegative(words in word_list(300)) {
        match mu(&words, &MuConfig::new(2, false).unwrap(), None) {
            Ok(m) => prop_assert!(m >= 0.0),
            Err(_) => prop_assert!(occurrences(&words).iter().all(|o| o.count() < 2)),
        }
    }

    #[test]
    fn wilcoxon_antisymmetry_and_scale(
        pairs in prop::collection::vec((-50i32..50, -50i32..50), 1..60),
        lambda in 0.01f64..100.0,
    ) {
        let x1: Vec<f64> = pairs.iter().map(|p| f64::from(p.0)).collect();
        let x2: Vec<f64> = pairs.iter().map(|p| f64::from(p.1)).collect();
        let s = PairedSample::from_values("p", &x1, &x2);
        let Ok(w) = wilcoxon(&s) else {
            prop_assert!(pairs.iter().all(|p| p.0 == p.1));
            return Ok(());
        };
        let swapped = wilcoxon(&s.swapped()).unwrap();
        prop_assert_eq!(swapped.w, -w.w);
        prop_assert_eq!(swapped.sigma_w, w.sigma_w);
        // powers of two scale exactly; other factors may split ties at the last bit
        let exact = wilcoxon(&s.scaled(4.0)).unwrap();
        prop_assert_eq!(exact.w, w.w);
        let scaled = wilcoxon(&s.scaled(lambda)).unwrap();
        prop_assert!((scaled.w - w.w).abs() <= w.sigma_w * 1e-9 || lambda_splits_ties(&s, lambda));
    }

    #[test]
    fn tokenization_properties(paragraphs in prop::collection::vec(paragraph(), 1..6), seed in any::<u64>()) {
        let cfg = TokenizerConfig::default();
        let body = paragraphs.join("\n\n");
        let t = tokenize(&body, &cfg);
        prop_assert_eq!(t.total_words, t.words.len());
        prop_assert_eq!(t.sentence_lengths.iter().sum::<usize>(), t.total_words);
        prop_assert_eq!(&tokenize(&body, &cfg), &t);

        let spec = ShuffleSpec { seed, repetitions: 1 };
        let permuted = shuffle_words(&paragraphs, &spec, "para", 0).unwrap().join("\n\n");
        let u = tokenize(&permuted, &cfg);
        prop_assert_eq!(u.total_words, t.total_words);
        prop_assert_eq!(u.letter_count, t.letter_count);
        prop_assert_eq!(u.punctuation_count, t.punctuation_count);
        let mut a = t.sentence_lengths.clone();
        let mut b = u.sentence_lengths.clone();
        a.sort_unstable();
        b.sort_unstable();
        prop_assert_eq!(a, b);
    }
}

/// Whether multiplying by `lambda` changes the equality pattern of the
/// absolute differences in floating point.
fn lambda_splits_ties(s: &PairedSample, lambda: f64) -> bool {
    let d: Vec<f64> = s.pairs.iter().map(|p| (p.2 - p.1).abs()).collect();
    let e: Vec<f64> = s
        .pairs
        .iter()
        .map(|p| (lambda * p.2 - lambda * p.1).abs())
        .collect();
    (0..d.len()).any(|i| {
        (0..d.len()).any(|j| (d[i] == d[j]) != (e[i] == e[j]) || (d[i] < d[j]) != (e[i] < e[j]))
    })
}

fn paragraph() -> impl Strategy<Value = String> {
    let word = subsequence(
        vec![
            "The",
            "old",
            "sea",
            "was",
            "calm",
            "and",
            "grey",
            "it's",
            "well-known",
        ],
        1..6,
    )
    .prop_map(|w| w.join(" "));
    prop::collection::vec(
        (
            word,
            prop::sample::select(vec![".", ",", "!", "?", ";", ":", ""]),
        ),
        1..5,
    )
    .prop_map(|parts| {
        parts
            .into_iter()
            .map(|(w, p)| format!("{w}{p}"))
            .collect::<Vec<_>>()
            .join(" ")
    })
}

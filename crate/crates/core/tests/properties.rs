mod common;

use nsga_enhance::enhance::{apply_brightness, apply_contrast, apply_gamma, clip_params, enhance};
use nsga_enhance::features::{extract_fallback, feature_distance};
use nsga_enhance::fitness::{dominates, Evaluation};
use nsga_enhance::image_core::{histogram256, image_entropy, shannon_entropy, to_grayscale, GRAY_LEVELS};
use nsga_enhance::moea::{
    blend_crossover, evolve_objective, gaussian_mutate, local_search, select_survivors, sort_fitness,
};
use nsga_enhance::{EnhanceParams, EvolutionConfig, FitnessPair, GrayHistogram, ImageBuffer, Individual, ParamBounds};
use proptest::prelude::*;

fn image() -> impl Strategy<Value = ImageBuffer> {
    (1usize..12, 1usize..12).prop_flat_map(|(w, h)| {
        prop::collection::vec(0.0f64..=1.0, w * h * 3).prop_map(move |d| ImageBuffer::new(w, h, d).unwrap())
    })
}

fn params() -> impl Strategy<Value = EnhanceParams> {
    (-10.0f64..=60.0, 1.0f64..=2.0, 1.0f64..=2.0).prop_map(|(b, c, g)| EnhanceParams::new(b, c, g))
}

fn pair() -> impl Strategy<Value = FitnessPair> {
    // A coarse grid makes ties and duplicates common.
    (0u8..6, 0u8..6).prop_map(|(a, b)| FitnessPair::new(a as f64 / 2.0, b as f64 / 3.0))
}

fn in_unit(img: &ImageBuffer) -> bool {
    img.data().iter().all(|v| (0.0..=1.0).contains(v))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn entropy_is_bounded(img in image()) {
        let h = image_entropy(&img);
        prop_assert!((0.0..=8.0).contains(&h));
        prop_assert!(h <= (img.pixel_count() as f64).log2() + 1e-12);
    }

    #[test]
    fn entropy_ignores_bin_order(counts in prop::collection::vec(0u64..50, GRAY_LEVELS), shift in 0usize..256) {
        prop_assume!(counts.iter().any(|&c| c > 0));
        let a: [u64; 256] = counts.clone().try_into().unwrap();
        let mut b = a;
        b.rotate_left(shift);
        let mut c = a;
        c.reverse();
        let ha = shannon_entropy(&GrayHistogram::from_counts(a)).unwrap();
        prop_assert!((ha - shannon_entropy(&GrayHistogram::from_counts(b)).unwrap()).abs() < 1e-12);
        prop_assert!((ha - shannon_entropy(&GrayHistogram::from_counts(c)).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn histogram_conserves_pixels(img in image()) {
        let gray = to_grayscale(&img);
        prop_assert!(gray.data.iter().all(|v| (0.0..=1.0).contains(v)));
        let h = histogram256(&gray);
        prop_assert_eq!(h.bins.iter().sum::<u64>(), img.pixel_count() as u64);
        prop_assert_eq!(h.total, img.pixel_count() as u64);
    }

    #[test]
    fn operators_stay_in_range(img in image(), e in params()) {
        prop_assert!(in_unit(&apply_brightness(&img, e.b).unwrap()));
        prop_assert!(in_unit(&apply_contrast(&img, e.c).unwrap()));
        prop_assert!(in_unit(&apply_gamma(&img, e.gamma).unwrap()));
        prop_assert!(in_unit(&enhance(&img, &e).unwrap()));
    }

    #[test]
    fn identity_is_bit_exact(img in image()) {
        prop_assert_eq!(enhance(&img, &EnhanceParams::IDENTITY).unwrap(), img);
    }

    #[test]
    fn operators_are_monotone(v in 0.0f64..=1.0, dv in 0.0f64..=0.5, e in params()) {
        let u = (v + dv).min(1.0);
        let a = ImageBuffer::filled(1, 1, v).unwrap();
        let b = ImageBuffer::filled(1, 1, u).unwrap();
        let pa = enhance(&a, &e).unwrap().data()[0];
        let pb = enhance(&b, &e).unwrap().data()[0];
        prop_assert!(pa <= pb);
    }

    #[test]
    fn enhance_is_deterministic(img in image(), e in params()) {
        prop_assert_eq!(enhance(&img, &e).unwrap(), enhance(&img, &e).unwrap());
    }

    #[test]
    fn feature_distance_is_a_metric(a in image(), b in image(), c in image()) {
        let (fa, fb, fc) = (extract_fallback(&a), extract_fallback(&b), extract_fallback(&c));
        let d = |x, y| feature_distance(x, y).unwrap();
        prop_assert_eq!(d(&fa, &fa), 0.0);
        prop_assert!(d(&fa, &fb) >= 0.0);
        prop_assert_eq!(d(&fa, &fb), d(&fb, &fa));
        prop_assert!(d(&fa, &fc) <= d(&fa, &fb) + d(&fb, &fc) + 1e-12);
    }

    #[test]
    fn dominance_is_a_strict_partial_order(a in pair(), b in pair(), c in pair()) {
        prop_assert!(!dominates(&a, &a));
        prop_assert!(!(dominates(&a, &b) && dominates(&b, &a)));
        if dominates(&a, &b) && dominates(&b, &c) {
            prop_assert!(dominates(&a, &c));
        }
    }

    #[test]
    fn sorting_matches_peeling(points in prop::collection::vec(pair(), 0..40)) {
        let raw: Vec<(f64, f64)> = points.iter().map(|p| (p.f1, p.f2)).collect();
        prop_assert_eq!(sort_fitness(&points), common::peel_fronts(&raw));
    }

    #[test]
    fn survivors_keep_an_undominated_elite(points in prop::collection::vec(pair(), 2..40), keep_frac in 0.1f64..1.0) {
        let n = ((points.len() as f64 * keep_frac).ceil() as usize).max(1);
        let members: Vec<Individual> = points.iter().map(|&f| Individual::evaluated(EnhanceParams::IDENTITY, f)).collect();
        let old_front: Vec<FitnessPair> = sort_fitness(&points)[0].iter().map(|&i| points[i]).collect();
        let kept = select_survivors(members, n).unwrap();
        prop_assert_eq!(kept.len(), n);
        let new_fit: Vec<FitnessPair> = kept.iter().map(|m| m.fitness.unwrap()).collect();
        let new_front: Vec<FitnessPair> = sort_fitness(&new_fit)[0].iter().map(|&i| new_fit[i]).collect();
        for old in &old_front {
            prop_assert!(!new_front.iter().all(|new| dominates(old, new)));
        }
    }

    #[test]
    fn variation_respects_bounds(p in params(), q in params(), seed in any::<u64>(), rate in 0.0f64..=1.0) {
        let bounds = ParamBounds::default();
        let cfg = EvolutionConfig::default();
        let mut rng = common::rng(seed);
        let (c1, c2) = blend_crossover(&p, &q, 0.5, &bounds, &mut rng);
        prop_assert!(bounds.contains(&c1) && bounds.contains(&c2));
        let m = gaussian_mutate(&c1, &cfg, &bounds, rate, &mut rng);
        prop_assert!(bounds.contains(&m));
        let wild = EnhanceParams::new(p.b * 10.0, -p.c, p.gamma * 50.0);
        prop_assert!(bounds.contains(&clip_params(&wild, &bounds)));
    }

    #[test]
    fn local_search_never_worsens(p in params(), seed in any::<u64>(), steps in 0usize..12) {
        let bounds = ParamBounds::default();
        let start = Individual::evaluated(p, common::stub_objective(&p).unwrap().fitness);
        let out = local_search(&start, steps, 0.02, &bounds, &common::stub_objective, &mut common::rng(seed)).unwrap();
        prop_assert!(common::lex_not_worse(out.fitness.unwrap(), start.fitness.unwrap()));
        prop_assert!(bounds.contains(&out.params));
        if steps == 0 {
            prop_assert_eq!(out, start);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn evolution_stays_in_bounds_and_keeps_identity_floor(seed in any::<u64>()) {
        let bounds = ParamBounds::default();
        let cfg = EvolutionConfig { pop_size: 16, generations: 3, seed, ..Default::default() };
        let objective = |p: &EnhanceParams| -> nsga_enhance::Result<Evaluation> { common::stub_objective(p) };
        let res = evolve_objective(&objective, &bounds, &cfg).unwrap();
        prop_assert!(res.population.members.iter().all(|m| bounds.contains(&m.params)));
        let identity = common::stub_objective(&EnhanceParams::IDENTITY).unwrap().fitness;
        prop_assert!(common::lex_not_worse(res.best.fitness.unwrap(), identity));
    }
}

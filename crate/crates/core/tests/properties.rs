mod common;

use nlfilter::filters::{cmf, depth_ranking, distance_sum, mean, median, msmf, smf, spatial_depth, vmf};
use nlfilter::metrics::{mse, psnr, Psnr};
use nlfilter::noise::{add_gaussian, add_salt_pepper, add_speckle};
use nlfilter::{
    apply_filter, decode_pnm, encode_pnm, extract_window, BorderPolicy, FilterId, Image, PixelVec,
    RngStream, Window,
};
use proptest::prelude::*;

fn image_strategy(max_side: usize) -> impl Strategy<Value = Image> {
    (1..=max_side, 1..=max_side, prop_oneof![Just(1usize), Just(3usize)]).prop_flat_map(
        |(w, h, c)| {
            proptest::collection::vec(any::<u8>(), w * h * c)
                .prop_map(move |data| Image::new(w, h, c, data).unwrap())
        },
    )
}

fn window_strategy(max: u8) -> impl Strategy<Value = Window> {
    prop_oneof![Just(1usize), Just(3usize)].prop_flat_map(move |c| {
        proptest::collection::vec(proptest::collection::vec(0..=max, c), 9).prop_map(|px| {
            let pixels = px
                .iter()
                .map(|p| PixelVec::new(&p.iter().map(|&v| f64::from(v)).collect::<Vec<_>>()))
                .collect();
            Window::new(pixels, 3).unwrap()
        })
    })
}

fn policy_strategy() -> impl Strategy<Value = BorderPolicy> {
    prop_oneof![
        Just(BorderPolicy::Replicate),
        Just(BorderPolicy::Reflect),
        Just(BorderPolicy::Zero)
    ]
}

fn member(p: &PixelVec, w: &Window) -> bool {
    w.pixels().contains(p)
}

proptest! {
    #[test]
    fn codec_round_trip(img in image_strategy(16)) {
        prop_assert_eq!(decode_pnm(&encode_pnm(&img)).unwrap(), img);
    }

    #[test]
    fn window_centre_is_the_pixel(
        img in image_strategy(9),
        k in prop_oneof![Just(1usize), Just(3), Just(5), Just(7)],
        policy in policy_strategy(),
        fx in 0.0f64..1.0,
        fy in 0.0f64..1.0,
    ) {
        let x = ((img.width() as f64) * fx) as usize;
        let y = ((img.height() as f64) * fy) as usize;
        let w = extract_window(&img, x, y, k, policy).unwrap();
        prop_assert_eq!(w.len(), k * k);
        prop_assert_eq!(w.center_index(), (k * k - 1) / 2);
        prop_assert_eq!(w.center(), img.pixel_vec(x, y));
        if policy != BorderPolicy::Zero {
            for p in w.pixels() {
                let found = (0..img.height())
                    .any(|yy| (0..img.width()).any(|xx| img.pixel_vec(xx, yy) == *p));
                prop_assert!(found, "{:?} not in image", p);
            }
        }
    }

    #[test]
    fn selection_filters_return_members(w in window_strategy(255), t in 1usize..=9) {
        prop_assert!(member(&median(&w), &w));
        prop_assert!(member(&vmf(&w), &w));
        prop_assert!(member(&smf(&w).unwrap(), &w));
        prop_assert!(member(&msmf(t, &w).unwrap(), &w));
    }

    #[test]
    fn mean_matches_naive_sum(w in window_strategy(255)) {
        let got = mean(&w);
        for c in 0..w.channels() {
            let mut total = 0.0;
            for p in w.pixels() {
                total += p.as_slice()[c];
            }
            prop_assert!((got.as_slice()[c] - total / 9.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn gray_median_equals_cmf(values in proptest::collection::vec(0u8..=255, 9)) {
        let w = Window::gray(&values.iter().map(|&v| f64::from(v)).collect::<Vec<_>>()).unwrap();
        prop_assert_eq!(median(&w), cmf(&w));
    }

    #[test]
    fn depth_of_members_in_unit_interval(w in window_strategy(255)) {
        for p in w.pixels() {
            let d = spatial_depth(p, &w).unwrap();
            prop_assert!((0.0..=1.0).contains(&d), "{}", d);
        }
    }

    #[test]
    fn smf_is_deepest(w in window_strategy(7)) {
        let best = spatial_depth(&smf(&w).unwrap(), &w).unwrap();
        for p in w.pixels() {
            prop_assert!(best >= spatial_depth(p, &w).unwrap());
        }
    }

    #[test]
    fn vmf_minimises_distance_sum(w in window_strategy(255)) {
        let best = distance_sum(&vmf(&w), &w);
        for p in w.pixels() {
            prop_assert!(best <= distance_sum(p, &w));
        }
    }

    #[test]
    fn ranking_is_sorted_permutation(w in window_strategy(7)) {
        let r = depth_ranking(&w).unwrap();
        let mut sorted = r.order.clone();
        sorted.sort_unstable();
        prop_assert_eq!(sorted, (0..9).collect::<Vec<_>>());
        for pair in r.order.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            prop_assert!(r.depths[a] > r.depths[b] || (r.depths[a] == r.depths[b] && a < b));
        }
        prop_assert!((1..=9).contains(&r.center_rank));
        prop_assert_eq!(r.order[r.center_rank - 1], w.center_index());
    }

    #[test]
    fn msmf_full_threshold_keeps_centre(w in window_strategy(255)) {
        prop_assert_eq!(msmf(9, &w).unwrap(), w.center());
    }

    #[test]
    fn noise_preserves_shape_and_is_deterministic(
        img in image_strategy(12),
        param in 0.0f64..1.0,
        seed in any::<u64>(),
    ) {
        for run in [add_gaussian, add_speckle, add_salt_pepper] {
            let a = run(&img, param, &mut RngStream::from_seed(seed)).unwrap();
            let b = run(&img, param, &mut RngStream::from_seed(seed)).unwrap();
            prop_assert_eq!(a.shape(), img.shape());
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn salt_pepper_hits_whole_pixels(img in image_strategy(12), seed in any::<u64>()) {
        let out = add_salt_pepper(&img, 0.5, &mut RngStream::from_seed(seed)).unwrap();
        let c = img.channels();
        for (before, after) in img.data().chunks_exact(c).zip(out.data().chunks_exact(c)) {
            let all = |v: u8| after.iter().all(|&s| s == v);
            prop_assert!(before == after || all(0) || all(255));
        }
    }

    #[test]
    fn mse_symmetric_and_psnr_consistent(a in image_strategy(6), seed in any::<u64>()) {
        let b = add_gaussian(&a, 0.01, &mut RngStream::from_seed(seed)).unwrap();
        let m = mse(&a, &b).unwrap();
        prop_assert_eq!(m, mse(&b, &a).unwrap());
        prop_assert_eq!(m == 0.0, a == b);
        match psnr(m).unwrap() {
            Psnr::Infinite => prop_assert_eq!(m, 0.0),
            Psnr::Finite(p) => {
                let again = 20.0 * (256.0 / m.sqrt()).log10();
                prop_assert!(((p - again) / again.abs().max(1e-300)).abs() <= 1e-9);
            }
        }
    }
}

#[test]
fn vmf_and_smf_match_exhaustive_oracles_on_small_values() {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
    for i in 0..2000 {
        let (w, raw) = common::random_window(&mut rng, if i % 2 == 0 { 1 } else { 3 }, 7);
        assert_eq!(common::as_i64(&vmf(&w)), raw[common::oracle_vmf(&raw)]);
        assert_eq!(common::as_i64(&smf(&w).unwrap()), raw[common::oracle_smf(&raw)]);
    }
}

#[test]
fn outlier_window_depths_by_oracle() {
    let mut raw = vec![vec![100i64]; 9];
    raw[4] = vec![0];
    let depths: Vec<f64> = (0..9).map(|j| common::oracle_depth(&raw, j)).collect();
    assert_eq!(depths[4], 0.0);
    assert!(depths.iter().enumerate().all(|(j, &d)| j == 4 || d == 0.875));
    let w = Window::gray(&raw.iter().map(|p| p[0] as f64).collect::<Vec<_>>()).unwrap();
    assert_eq!(smf(&w).unwrap().as_slice(), &[100.0]);
    assert_eq!(depth_ranking(&w).unwrap().center_rank, 9);
    assert_eq!(msmf(4, &w).unwrap().as_slice(), &[100.0]);
}

#[test]
fn median_recovers_sparse_impulses() {
    let (clean, noisy) = common::sparse_impulse_image();
    for f in [FilterId::Median, FilterId::Vmf, FilterId::Smf, FilterId::Msmf { threshold: 4 }] {
        let out = apply_filter(&noisy, f, 3, BorderPolicy::Replicate).unwrap();
        assert_eq!(out, clean, "{f}");
    }
    // the mean smears impulses instead
    let smeared = apply_filter(&noisy, FilterId::Mean, 3, BorderPolicy::Replicate).unwrap();
    assert!(mse(&clean, &smeared).unwrap() > 0.0);
}

#[test]
fn one_pass_fixes_constant_regions() {
    let img = Image::filled(16, 16, 3, 200).unwrap();
    for f in FilterId::ALL {
        let once = apply_filter(&img, f, 5, BorderPolicy::Zero).unwrap();
        // zero padding darkens borders for the mean, the interior stays fixed
        for y in 2..14 {
            for x in 2..14 {
                assert_eq!(once.pixel(x, y), &[200, 200, 200], "{f} at ({x},{y})");
            }
        }
    }
}

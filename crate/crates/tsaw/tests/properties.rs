//! Property tests across module boundaries: estimator outputs stay in range,
//! inverses undo integrals, and fits recover exact synthetic inputs.

use proptest::prelude::*;
use tsaw::continuum::{absorbed_height_atom, absorbed_height_cdf};
use tsaw::stats::{fit_exp_tail, histogram_masses, ks_two_sample};
use tsaw::weights::WeightModel;

fn arbitrary_model() -> impl Strategy<Value = WeightModel> {
    prop_oneof![
        (0.1f64..4.0).prop_map(|beta| WeightModel::exponential(beta).unwrap()),
        (0.1f64..3.0, 0.1f64..3.0).prop_map(|(low, extra)| {
            WeightModel::step(low, low + extra).unwrap()
        }),
    ]
}

proptest! {
    #[test]
    fn hazard_inverse_undoes_the_integral(
        model in arbitrary_model(),
        x in -5.0f64..5.0,
        e in 0.01f64..10.0,
    ) {
        let y = model.invert_hazard(x, e);
        prop_assert!(y > x);
        let back = model.integrate_w(x, y).unwrap();
        prop_assert!((back - e).abs() <= 1e-8 * e.max(1.0));
    }

    #[test]
    fn two_sample_ks_is_symmetric_and_in_range(
        mut a in prop::collection::vec(-50.0f64..50.0, 60..120),
        mut b in prop::collection::vec(-50.0f64..50.0, 60..120),
    ) {
        let fwd = ks_two_sample(&a, &b).unwrap();
        let rev = ks_two_sample(&b, &a).unwrap();
        prop_assert!((0.0..=1.0).contains(&fwd.statistic));
        prop_assert!((0.0..=1.0).contains(&fwd.p_value));
        prop_assert_eq!(fwd.statistic.to_bits(), rev.statistic.to_bits());

        // Order of the observations must not matter.
        a.reverse();
        b.rotate_left(7);
        let shuffled = ks_two_sample(&a, &b).unwrap();
        prop_assert_eq!(fwd.statistic.to_bits(), shuffled.statistic.to_bits());
    }

    #[test]
    fn histogram_masses_form_a_subprobability(
        samples in prop::collection::vec(-20.0f64..20.0, 1..200),
        lo in -10.0f64..0.0,
        width in 0.1f64..5.0,
    ) {
        let edges: Vec<f64> = (0..=8).map(|k| lo + width * k as f64).collect();
        let (masses, outside) = histogram_masses(&samples, &edges);
        prop_assert_eq!(masses.len(), 8);
        let total: f64 = masses.iter().sum::<f64>() + outside;
        prop_assert!(masses.iter().all(|m| (0.0..=1.0).contains(m)));
        prop_assert!((0.0..=1.0).contains(&outside));
        prop_assert!((total - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn exp_tail_fit_recovers_synthetic_decay(
        gamma in 0.05f64..4.0,
        level in 0.1f64..5.0,
        step in 0.2f64..2.0,
        points in 3usize..12,
    ) {
        let series: Vec<(f64, f64)> = (0..points)
            .map(|k| {
                let x = step * k as f64;
                (x, level * (-gamma * x).exp())
            })
            .collect();
        let fit = fit_exp_tail(&series).unwrap();
        prop_assert!((fit.gamma - gamma).abs() <= 1e-7 * gamma);
        prop_assert!(fit.r_squared > 1.0 - 1e-9);
    }

    #[test]
    fn absorbed_height_law_is_a_cdf_with_its_atom(
        y in 0.05f64..3.0,
        h in 0.1f64..4.0,
        z in 0.0f64..6.0,
    ) {
        let atom = absorbed_height_atom(y, h);
        let at_zero = absorbed_height_cdf(y, h, 0.0);
        prop_assert!((atom - at_zero).abs() <= 1e-12);
        let lower = absorbed_height_cdf(y, h, z);
        let upper = absorbed_height_cdf(y, h, z + 0.5);
        prop_assert!((0.0..=1.0).contains(&lower));
        prop_assert!(lower <= upper + 1e-12);
    }
}

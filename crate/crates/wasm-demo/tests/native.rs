use ferri_core::closed_form::TwoSiteAnalytics;
use ferri_core::TwiceSpin;
use ferri_wasm::{negativity_curve, pair_spectrum, threshold_table};

#[test]
fn two_site_curve_matches_closed_form() {
    let curve = negativity_curve(2, 1, 0.1, 2.0, 11).unwrap();
    assert_eq!(curve.len(), 33);
    let a = TwoSiteAnalytics::unit(TwiceSpin::new(2).unwrap());
    for row in curve.chunks(3) {
        let beta = 1.0 / row[0];
        assert!((row[1] - a.thermal_negativity(beta)).abs() < 1e-12);
        assert!((row[2] - a.correlator(beta)).abs() < 1e-12);
    }
}

#[test]
fn ring_thresholds_match_reference() {
    let rows = threshold_table(3, 2).unwrap();
    let expected = [0.863_364_116_151_257_7, 1.032_664_512_302_089_7, 1.171_510_688_264_637];
    for (row, want) in rows.chunks(2).zip(expected) {
        assert!((row[1] - want).abs() < 1e-8, "{row:?}");
    }
    let pair = threshold_table(2, 1).unwrap();
    assert_eq!(pair[0], 1.0);
    assert!((pair[1] - 0.910_239_226_627).abs() < 1e-9);
}

#[test]
fn spectrum_is_a_unit_trace_partial_transpose() {
    let ev = pair_spectrum(3, 2, 0.3).unwrap();
    assert_eq!(ev.len(), 8);
    assert!(ev.windows(2).all(|w| w[0] <= w[1]));
    assert!((ev.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    assert!(ev[0] < 0.0);
}

#[test]
fn bad_inputs_are_reported() {
    assert!(negativity_curve(2, 1, 0.0, 1.0, 5).is_err());
    assert!(negativity_curve(2, 1, 0.5, 1.0, 1).is_err());
    assert!(pair_spectrum(0, 1, 1.0).is_err());
    assert!(pair_spectrum(2, 1, -1.0).is_err());
    assert!(pair_spectrum(9, 4, 1.0).unwrap_err().contains("exceeds"));
}

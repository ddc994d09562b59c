use proptest::test_runner::{Config, RngSeed};

/// Reproducible proptest configuration: fixed generator seed, no failure
/// persistence files.
pub fn config(cases: u32) -> Config {
    Config {
        cases,
        rng_seed: RngSeed::Fixed(0x5eed_cb1a),
        failure_persistence: None,
        ..Config::default()
    }
}

use toomcook::engine::{ChannelSum, ConvConfig, DotOrder, Precision};
use toomcook::exact::parse_points;
use toomcook::harness::{
    measure, measure_error, reproduce_table, trial_inputs, Algorithm, Experiment, TableId, TableOptions,
};
use toomcook::matrix::{build, Dims, MatrixFile};

#[test]
fn single_trial_report_is_repeatable() {
    let ts = build(3, 2, &parse_points("0,-1,1,inf").unwrap()).unwrap();
    let a = measure_error(&ts, Dims::One, ConvConfig::default(), 1, 42).unwrap();
    let b = measure_error(&ts, Dims::One, ConvConfig::default(), 1, 42).unwrap();
    assert_eq!(a, b);
}

#[test]
fn trials_do_not_depend_on_each_other() {
    // Trial t of a long run sees the same inputs as trial t of a short one.
    let (h, x) = trial_inputs(9, 3, Dims::Two, 4, 3, 6);
    let (h2, x2) = trial_inputs(9, 3, Dims::Two, 4, 3, 6);
    assert_eq!((h.data(), x.data()), (h2.data(), x2.data()));
    let ts = build(3, 4, &parse_points("0,-1,1,inf,1/2,-2").unwrap()).unwrap();
    let long = measure_error(&ts, Dims::Two, ConvConfig::default(), 40, 9).unwrap();
    let short = measure_error(&ts, Dims::Two, ConvConfig::default(), 10, 9).unwrap();
    assert_eq!(long.per_trial[..10], short.per_trial[..]);
}

#[test]
fn every_configuration_is_repeatable() {
    let ts = build(3, 4, &parse_points("0,-1,1,inf,1/2,-3").unwrap()).unwrap();
    for precision in [Precision::Fp32, Precision::Fp64, Precision::Mixed] {
        for order in [DotOrder::Linear, DotOrder::Huffman] {
            for sum in [ChannelSum::Linear, ChannelSum::Pairwise] {
                let exp = Experiment::new(Dims::Two, ConvConfig::new(precision, order, sum), 25, 3).with_channels(5);
                let a = measure(Algorithm::ToomCook(&ts), &exp).unwrap();
                let b = measure(Algorithm::ToomCook(&ts), &exp).unwrap();
                assert_eq!(a, b);
            }
        }
    }
}

#[test]
fn tables_are_byte_identical() {
    let opts = TableOptions { trials: 20, seed: 1 };
    for id in [TableId::T1, TableId::T2, TableId::T4] {
        let a = reproduce_table(id, &opts).unwrap().to_csv();
        let b = reproduce_table(id, &opts).unwrap().to_csv();
        assert_eq!(a, b, "table {id}");
    }
}

#[test]
fn matrix_file_round_trip_measures_the_same() {
    let ts = build(3, 6, &parse_points("0,-1,1,inf,1/2,-1/2,2,-2").unwrap()).unwrap();
    let dir = std::env::temp_dir().join(format!("toomcook-det-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("p8.json");
    MatrixFile::write(&ts, &path).unwrap();
    let back = MatrixFile::read(&path).unwrap();
    std::fs::remove_dir_all(&dir).unwrap();
    let a = measure_error(&ts, Dims::One, ConvConfig::default(), 50, 0).unwrap();
    let b = measure_error(&back, Dims::One, ConvConfig::default(), 50, 0).unwrap();
    assert_eq!(a, b);
}

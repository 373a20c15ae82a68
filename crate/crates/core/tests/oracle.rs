use kspectra::number::{int, ratio, to_f64};
use kspectra::oracle::exact::ExactDecomposition;
use kspectra::oracle::{run_verification, Decomposition, OperatorModel, OracleConfig};
use kspectra::signatures::enumerate_signatures;
use kspectra::spectral;
use kspectra::{DomainSpec, WeightSequence};

#[test]
fn closed_forms_on_rank_two_domains() {
    let config = OracleConfig { seeds: (31, 32), ..OracleConfig::default() };
    for spec in [DomainSpec::type_ii(2).unwrap(), DomainSpec::type_iii(4).unwrap()] {
        let dec = Decomposition::build(&spec, 5, &config).unwrap();
        let weights = [
            WeightSequence::hardy(&spec),
            WeightSequence::bergman(&spec, int(3)).unwrap(),
            WeightSequence::bergman(&spec, int(4)).unwrap(),
            WeightSequence::builtin_rule(&spec, "hardy-doubling").unwrap(),
        ];
        for w in &weights {
            let model = OperatorModel::build(&dec, w).unwrap();
            for s in enumerate_signatures(2, 4) {
                let tau = model.measured_tau(&s, 1e-8).unwrap();
                let delta = model.measured_delta(&s, 1e-8).unwrap();
                let tf = to_f64(&spectral::tau(&s, w).unwrap().value);
                let df = to_f64(&spectral::delta_conjecture(&s, w).unwrap().value);
                assert!((tau - tf).abs() <= 1e-8 * tf.abs().max(1e-300), "{spec} {w} {s}");
                assert!((delta - df).abs() <= 1e-8 * df.abs(), "{spec} {w} {s}");
            }
        }
    }
}

#[test]
fn rank_three_conjecture_probe() {
    let spec = DomainSpec::type_i(3, 3).unwrap();
    let w = WeightSequence::bergman(&spec, int(4)).unwrap();
    let report = run_verification(&spec, &w, 3, 1e-8, &OracleConfig::default()).unwrap();
    assert!(report.passed(), "{:?}", report.failures);
    let general = report.per_signature.iter().find(|r| r.s.to_string() == "[2,1,0]").unwrap();
    assert_eq!(general.delta_source, "delta-conjecture");
    assert!(general.delta_case.is_none());
}

#[test]
fn exact_path_agrees_with_float_path() {
    let spec = DomainSpec::type_i(2, 2).unwrap();
    let w = WeightSequence::bergman(&spec, ratio(5, 2)).unwrap();
    let exact = ExactDecomposition::build(&spec, 3, 3).unwrap().measure(&w).unwrap();
    let dec = Decomposition::build(&spec, 3, &OracleConfig::default()).unwrap();
    let model = OperatorModel::build(&dec, &w).unwrap();
    for m in exact {
        assert_eq!(m.dim, dec.block(&m.signature).unwrap().dim());
        assert!((to_f64(&m.tau) - model.measured_tau(&m.signature, 1e-8).unwrap()).abs() < 1e-12);
        if let Some(d) = m.delta {
            assert!((to_f64(&d) - model.measured_delta(&m.signature, 1e-8).unwrap()).abs() < 1e-12);
        }
    }
}

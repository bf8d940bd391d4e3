mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;
use spikesig::analysis::{
    distance_csv, prototype_classify, svm_train, vp_distance, ConfusionMatrix, SvmConfig,
};
use spikesig::izhikevich::SpikeTrain;
use spikesig::pipeline::{run_experiment, CorpusConfig, ExperimentConfig};
use spikesig::signatures::{PrototypeSet, Signature};
use spikesig::snn::NetworkConfig;

fn train_strategy() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::btree_set(0u32..1600, 0..=6).prop_map(|s| s.into_iter().map(|t| t as f64 / 8.0).collect())
}

proptest! {
    #[test]
    fn vp_matches_oracle(a in train_strategy(), b in train_strategy(), qi in 0usize..DYADIC_Q.len()) {
        let q = DYADIC_Q[qi];
        prop_assert_eq!(vp_distance(&a, &b, q), vp_oracle(&a, &b, q));
    }

    #[test]
    fn vp_triangle(a in train_strategy(), b in train_strategy(), c in train_strategy(), qi in 0usize..DYADIC_Q.len()) {
        let q = DYADIC_Q[qi];
        prop_assert!(vp_distance(&a, &c, q) <= vp_distance(&a, &b, q) + vp_distance(&b, &c, q));
        prop_assert_eq!(vp_distance(&a, &b, q), vp_distance(&b, &a, q));
    }

    #[test]
    fn vp_bounded_by_counts(a in train_strategy(), b in train_strategy(), q in 0.0f64..5.0) {
        let d = vp_distance(&a, &b, q);
        prop_assert!(d <= (a.len() + b.len()) as f64 + 1e-12);
        prop_assert!(d >= (a.len() as f64 - b.len() as f64).abs() - 1e-12);
    }
}

#[test]
fn singleton_distance() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        let a = dyadic_train(&mut rng, 1);
        let b = dyadic_train(&mut rng, 1);
        if a.len() == 1 && b.len() == 1 {
            for q in DYADIC_Q {
                assert_eq!(vp_distance(&a, &b, q), (q * (a[0] - b[0]).abs()).min(2.0));
            }
        }
    }
}

fn sig_of(label: u8, unit_times: Vec<Vec<f64>>) -> Signature<f64> {
    Signature {
        id: format!("s{label}"),
        label: Some(label),
        trains: unit_times.into_iter().map(|t| SpikeTrain::new(t, 200.0).unwrap()).collect(),
        net_input: Vec::new(),
        dt: 0.1,
    }
}

#[test]
fn nearest_prototype_uses_own_unit() {
    let protos = PrototypeSet {
        prototypes: (0..10u8).map(|c| sig_of(c, (0..10).map(|u| vec![5.0 + 17.0 * ((u + c as usize) % 10) as f64]).collect())).collect(),
    };
    for c in 0..10 {
        assert_eq!(prototype_classify(protos.get(c), &protos, 0.1), c);
    }
    // Matching only on unit 7 pulls the decision to class 7.
    let mut probe: Vec<Vec<f64>> = vec![Vec::new(); 10];
    probe[7] = protos.get(7).trains[7].times().to_vec();
    assert_eq!(prototype_classify(&sig_of(0, probe), &protos, 0.1), 7);
}

#[test]
fn confusion_examples() {
    let labels: Vec<usize> = (0..500).map(|i| i % 10).collect();
    let perfect = ConfusionMatrix::from_predictions(&labels, &labels, 10).unwrap();
    assert_eq!(perfect.overall_accuracy(), 1.0);
    for r in 0..10 {
        for c in 0..10 {
            assert_eq!(perfect.count(r, c) > 0, r == c);
        }
    }
    let constant = ConfusionMatrix::from_predictions(&labels, &[3; 500], 10).unwrap();
    assert_eq!(constant.overall_accuracy(), 0.1);
    assert!((0..10).all(|c| (constant.column_total(c) > 0) == (c == 3)));
    for c in 0..10 {
        assert_eq!(perfect.row_total(c), 50);
    }
}

#[test]
fn table4_csv_layout() {
    let m = ConfusionMatrix::from_counts(by_digit(&TABLE4)).unwrap();
    let csv = m.to_csv(&DISPLAY_ORDER, Some(42));
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "# seed=42");
    assert_eq!(lines[1], "desired,1,2,3,4,5,6,7,8,9,0,row_total,hit_rate_pct");
    assert_eq!(lines[2], "1,45,0,0,0,0,0,1,0,3,0,49,91.8");
    assert_eq!(lines[12], "column_total,50,54,50,51,49,49,45,57,46,49,500,");
    assert_eq!(lines[13], "miss_rate_pct,10.0,7.4,10.0,7.8,2.0,14.3,13.3,8.8,10.9,8.2,,454");
}

#[test]
fn distance_csv_is_labelled_square() {
    let table: Vec<Vec<f64>> = (0..10).map(|r| (0..10).map(|c| (r * 10 + c) as f64 / 4.0).collect()).collect();
    let cols: Vec<String> = (0..10).map(|c| format!("test_{c}")).collect();
    let csv = distance_csv(&table, &cols, Some(3));
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 12);
    assert!(lines[1].starts_with("prototype,test_0,"));
    for (r, line) in lines[2..].iter().enumerate() {
        let cells: Vec<&str> = line.split(',').collect();
        assert_eq!(cells.len(), 11);
        assert_eq!(cells[0], r.to_string());
    }
}

#[test]
fn svm_examples() {
    let x: Vec<Vec<f64>> = (0..40).map(|i| if i % 2 == 0 { vec![-1.0, -1.0 + 0.01 * i as f64] } else { vec![1.0, 1.0 - 0.01 * i as f64] }).collect();
    let y: Vec<usize> = (0..40).map(|i| i % 2).collect();
    let m = svm_train(&x, &y, 2, &SvmConfig::default()).unwrap();
    assert!(x.iter().zip(&y).all(|(xi, &yi)| m.predict(xi) == yi));

    let x2: Vec<Vec<f64>> = x.iter().chain(&x).cloned().collect();
    let y2: Vec<usize> = y.iter().chain(&y).copied().collect();
    let m2 = svm_train(&x2, &y2, 2, &SvmConfig::default()).unwrap();
    for p in [[0.3, -0.2], [-2.0, 1.0], [0.0, 0.0]] {
        let (a, b) = (m.decision(&p), m2.decision(&p));
        assert!(a.iter().zip(&b).all(|(u, v)| (u - v).abs() < 1e-6));
    }
    assert!(svm_train(&x, &vec![1; 40], 2, &SvmConfig::default()).is_err());
}

#[test]
fn short_experiment_properties() {
    let cfg = ExperimentConfig::<f64> { network: NetworkConfig { epochs: 10, ..NetworkConfig::default() }, ..ExperimentConfig::default() };
    let r = run_experiment(&cfg, &CorpusConfig::default()).unwrap();
    let svm = r.clean.overall_accuracy();
    let proto = r.prototype_clean.overall_accuracy();
    assert!(proto > 0.1 && proto < svm, "prototype {proto} vs svm {svm}");
    assert!(r.train.overall_accuracy() >= svm);
    assert!(r.within < r.between);
    assert_eq!(r.distances.len(), 10);
    assert!(r.distances.iter().all(|row| row.len() == 10 && row.iter().all(|v| v.is_finite())));
}

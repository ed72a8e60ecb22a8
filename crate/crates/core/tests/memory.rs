mod common;

use common::{example_matrix, memory_instances, memory_trial};
use girthforge::memory::spread_lower_bound;
use girthforge::{
    girth_conv, girth_oracle, minimize_memory, minimize_memory_exact, terminated_matrix, theta_n,
    theta_ratio, Compactness, Error, ExponentMatrix, LiftAssignment, MinimizeOptions,
};

#[test]
fn heuristic_matches_exhaustive_search_on_small_instances() {
    let instances = memory_instances(20, 5);
    let mut matched = 0;
    for (i, (p, max_half)) in instances.iter().enumerate() {
        let trial = memory_trial(p, *max_half, i as u64);
        assert!(trial.sound, "instance {i} unsound");
        matched += usize::from(trial.heuristic <= trial.exact);
    }
    assert!(
        matched * 10 >= instances.len() * 8,
        "{matched}/{}",
        instances.len()
    );
}

#[test]
fn example_lift_is_certified_and_bounded() {
    let p = example_matrix();
    let result = minimize_memory(&p, 5, &MinimizeOptions::default()).unwrap();
    assert!(result.memory_order <= 270);
    assert_eq!(result.memory_order, 203);
    assert_eq!(result.lower_bound, spread_lower_bound(&p).unwrap());
    assert_eq!(result.memory_order, result.lower_bound);
    let spec = result.best.to_conv_spec();
    assert_eq!(spec.constraint_length(), 1224);
    assert!(girth_conv(&spec, 5).unwrap().girth.at_least(12));
}

#[test]
fn example_convolutional_girth_confirmed_on_a_terminated_graph() {
    let spec = LiftAssignment::identity(example_matrix())
        .unwrap()
        .to_conv_spec();
    let h = terminated_matrix(&spec, 5 * spec.memory_order() as usize + 1);
    assert!(girth_oracle(&h).at_least(12));
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let (p, max_half) = memory_instances(1, 9).remove(0);
    let options = MinimizeOptions {
        seed: 3,
        ..Default::default()
    };
    let serial = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let parallel = rayon::ThreadPoolBuilder::new()
        .num_threads(3)
        .build()
        .unwrap();
    let a = serial.install(|| minimize_memory(&p, max_half, &options).unwrap());
    let b = parallel.install(|| minimize_memory(&p, max_half, &options).unwrap());
    assert_eq!(a, b);
}

#[test]
fn uncertified_input_is_rejected() {
    let p = ExponentMatrix::zeros(2, 3, Some(5)).unwrap();
    assert_eq!(
        minimize_memory(&p, 2, &MinimizeOptions::default()).unwrap_err(),
        Error::NotCertified { length: 4 }
    );
    assert!(minimize_memory_exact(&p, 2, 1).is_err());
    let big = ExponentMatrix::zeros(3, 5, Some(5)).unwrap();
    assert!(matches!(
        minimize_memory_exact(&big, 2, 1),
        Err(Error::InvalidConfig(_))
    ));
}

#[test]
fn lifted_entries_wrap_by_whole_degrees() {
    let p = ExponentMatrix::new(vec![vec![0, 4], vec![1, 3]], Some(5)).unwrap();
    let lift = LiftAssignment::new(p.clone(), vec![1, 0, 1, 0]).unwrap();
    assert_eq!(lift.lifted().to_rows(), vec![vec![5, 4], vec![6, 3]]);
    assert_eq!(lift.memory_order(), 3);
    assert_eq!(lift.offset_rows(), vec![vec![1, 0], vec![1, 0]]);
    assert!(LiftAssignment::new(p, vec![0; 3]).is_err());
}

#[test]
fn compactness_ratios() {
    assert!((theta_n(271, 300).unwrap() - 271.0 / 300.0).abs() < 1e-12);
    assert!(theta_n(5, 0).is_err());
    assert!(theta_ratio(Compactness::LiftingDegree(5), Compactness::MemoryOrder(5)).is_err());
    let r = theta_ratio(Compactness::MemoryOrder(44), Compactness::MemoryOrder(53)).unwrap();
    assert_eq!(format!("{r:.2}"), "0.83");
}

use std::collections::HashSet;

use kdmc::parallel::{par_accumulate, par_map, stream_id, with_threads};
use kdmc::{Experiment, ExperimentConfig};
use proptest::prelude::*;

fn increasing(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.01f64..10.0, 1..max_len).prop_map(|steps| {
        steps
            .iter()
            .scan(0.0, |acc, s| {
                *acc += s;
                Some(*acc)
            })
            .collect()
    })
}

proptest! {
    #[test]
    fn config_survives_json(
        seed in any::<u64>(),
        particles in prop::option::of(1usize..10_000_000),
        grid in prop::option::of(increasing(8)),
        dt in prop::option::of(1e-3f64..10.0),
        threads in prop::option::of(1usize..64),
        e in prop::sample::select(Experiment::ALL.to_vec()),
    ) {
        let mut c = ExperimentConfig::new(seed);
        c.experiment = Some(e);
        c.particles = particles;
        c.collisionality_grid = grid.clone();
        c.dt_grid = grid;
        c.dt = dt;
        c.threads = threads;
        let back = ExperimentConfig::parse(&c.to_json()).unwrap();
        prop_assert_eq!(back, c);
    }

    #[test]
    fn stream_ids_distinct(
        a in (0u64..1 << 20, 0u64..256, 0u64..1 << 32),
        b in (0u64..1 << 20, 0u64..256, 0u64..1 << 32),
    ) {
        prop_assume!(a != b);
        prop_assert_ne!(stream_id(a.0, a.1, a.2), stream_id(b.0, b.1, b.2));
    }

    #[test]
    fn experiment_names_parse_back(e in prop::sample::select(Experiment::ALL.to_vec())) {
        prop_assert_eq!(e.to_string().parse::<Experiment>().unwrap(), e);
    }
}

#[test]
fn reductions_ignore_thread_count() {
    let n = 3 * 4096 + 17;
    let f = |i: usize| ((i as f64) * 0.37).sin() * 1e3 + 1e-9 * i as f64;
    let runs: Vec<_> =
        [1, 2, 3, 7].iter().map(|&k| with_threads(Some(k), || (par_accumulate(n, f), par_map(n, f)))).collect();
    for (acc, v) in &runs[1..] {
        assert_eq!(acc.mean.to_bits(), runs[0].0.mean.to_bits());
        assert_eq!(acc.variance().to_bits(), runs[0].0.variance().to_bits());
        assert_eq!(v, &runs[0].1);
    }
    let ids: HashSet<u64> = (0..1000).map(|i| stream_id(3, 1, i)).collect();
    assert_eq!(ids.len(), 1000);
}

use num_rational::Rational64;
use transference_core::generators::{ConfigSpec, Family};
use transference_core::harness::{Experiment, ExperimentManifest, QSchedule};

fn probe(n: usize, factors: Vec<f64>, trials: usize, budget: u64) {
    let manifest = ExperimentManifest {
        config: ConfigSpec::new(Family::Progressions { k: 3 }, n).unwrap(),
        epsilon: Rational64::new(1, 2),
        schedule: QSchedule::CGrid {
            factors: factors.clone(),
        },
        trials,
        seed: 7,
        budget,
        pi_override: None,
        output: None,
    };
    let exp = Experiment::prepare(manifest).unwrap();
    for qi in 0..exp.densities().len() {
        let t0 = std::time::Instant::now();
        let row = exp.run_row(qi).unwrap();
        println!(
            "n={n} C={} q={:.4} trials={} succ={} undec={} est={:.2} elapsed={:?}",
            factors[qi],
            row.q,
            row.trials,
            row.successes,
            row.undecided,
            row.estimate,
            t0.elapsed()
        );
    }
}

#[test]
#[ignore]
fn workload_probe() {
    probe(400, vec![0.25, 1.0, 2.0, 4.0, 8.0], 10, 10_000_000);
    probe(225, vec![2.0, 4.0], 10, 10_000_000);
    probe(100, vec![2.0, 4.0], 10, 10_000_000);
}

#[test]
#[ignore]
fn hard_row_probe() {
    probe(400, vec![8.0], 5, 10_000_000);
}

#[test]
#[ignore]
fn budget_grid() {
    for budget in [150_000u64, 250_000, 400_000, 700_000] {
        println!("-- budget {budget}");
        probe(400, vec![8.0], 30, budget);
    }
}

#[test]
#[ignore]
fn per_trial_profile() {
    use transference_core::generators::progressions;
    use transference_core::harness::sample_subset;
    use transference_core::seeds::derive;
    use transference_core::solver::{alpha_decision, arrow_target};

    let h = progressions(400, 3).unwrap();
    let q = 8.0 / (400.0_f64).sqrt();
    for t in 0..20u64 {
        let ts = derive(7, 0, t);
        let x = sample_subset(400, q, ts);
        let induced = h.induced(&x).unwrap();
        let target = arrow_target(x.len(), Rational64::new(1, 2));
        let t0 = std::time::Instant::now();
        let d = alpha_decision(&induced.hypergraph, target, 4_000_000);
        println!(
            "t={t} |X|={} edges={} target={target} decision={d:?} elapsed={:?}",
            x.len(),
            induced.hypergraph.edge_count(),
            t0.elapsed()
        );
    }
}

#[test]
#[ignore]
fn single_trial() {
    use transference_core::generators::progressions;
    use transference_core::harness::sample_subset;
    use transference_core::seeds::derive;
    use transference_core::solver::{alpha_decision, arrow_target};

    let h = progressions(400, 3).unwrap();
    let q = 8.0 / (400.0_f64).sqrt();
    let ts = derive(7, 0, 13);
    let x = sample_subset(400, q, ts);
    let induced = h.induced(&x).unwrap();
    let target = arrow_target(x.len(), Rational64::new(1, 2));
    let d = alpha_decision(&induced.hypergraph, target, 4_000_000);
    println!("decision={d:?}");
}

#[test]
#[ignore]
fn crossing_region_probe() {
    probe(400, vec![2.0, 3.0, 4.0, 5.0, 6.0], 10, 10_000_000);
    probe(225, vec![2.0, 3.0, 4.0, 6.0, 8.0], 10, 10_000_000);
    probe(100, vec![2.0, 3.0, 4.0, 6.0, 8.0], 10, 10_000_000);
}

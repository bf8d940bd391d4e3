//! Full synthetic run: `cargo run --release --example end_to_end [epochs [seed]]`.

use std::time::Instant;

use spikesig::pipeline::{run_experiment, CorpusConfig, ExperimentConfig};

fn main() -> spikesig::Result<()> {
    let mut cfg = ExperimentConfig::<f64>::default();
    if let Some(e) = std::env::args().nth(1) {
        cfg.network.epochs = e.parse().expect("epochs must be an integer");
    }
    if let Some(s) = std::env::args().nth(2) {
        cfg.seed = s.parse().expect("seed must be an integer");
    }
    let start = Instant::now();
    let r = run_experiment(&cfg, &CorpusConfig::default())?;
    println!("epochs            {}", cfg.network.epochs);
    println!("svm train         {:.3}", r.train.overall_accuracy());
    println!("svm clean         {:.3}", r.clean.overall_accuracy());
    println!("svm noisy         {:.3}", r.noisy.overall_accuracy());
    println!("prototype clean   {:.3}", r.prototype_clean.overall_accuracy());
    println!("vp within/between {:.3} / {:.3}", r.within, r.between);
    println!("prototype spikes  {} untrained, {} trained", r.untrained_prototypes.total_spikes(), r.prototypes.total_spikes());
    if let (Some(first), Some(last)) = (r.log.epochs.first(), r.log.epochs.last()) {
        println!("mean |dK|         {:.3e} -> {:.3e}", first.mean_abs_dk, last.mean_abs_dk);
    }
    println!("elapsed           {:.1?}", start.elapsed());
    Ok(())
}

//! Prints ensemble means at ten evenly spaced checkpoints.
//!
//! cargo run --release -p morphodyn --example sweep -- LEXEMES CELLS EXPONENTS WEIGHT_NEGATIVE CYCLES RUNS

use morphodyn::experiment::{run_trajectories, summarize};
use morphodyn::{ModelConfig, RunSpec};

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.len() != 6 {
        eprintln!("usage: sweep LEXEMES CELLS EXPONENTS WEIGHT_NEGATIVE CYCLES RUNS");
        std::process::exit(2);
    }
    let int = |i: usize| args[i].parse::<usize>().expect("integer argument");
    let weight_negative: f64 = args[3].parse().expect("weight in [0, 1]");
    let cycles = int(4) as u64;
    let runs = int(5);

    let model = ModelConfig::attraction_repulsion(int(0), int(1), int(2), weight_negative);
    let spec = RunSpec { max_cycles: cycles, checkpoint_interval: (cycles / 10).max(1), ..RunSpec::new(model) };
    let started = std::time::Instant::now();
    let trajectories = run_trajectories(&spec, runs, 1, None).unwrap_or_else(|e| {
        eprintln!("error: {e}");
        std::process::exit(2);
    });
    let absorbed = trajectories.iter().filter(|t| t.absorbed_at.is_some()).count();
    let s = summarize(&trajectories).expect("at least one run");
    println!("absorbed {absorbed}/{runs} in {:.1?}", started.elapsed());
    println!("cycle\tentropy\tclasses\tp05\tp95\tshuf_entropy\tshuf_classes");
    for (i, cycle) in s.checkpoints.iter().enumerate() {
        println!(
            "{cycle}\t{:.3}\t{:.2}\t{:.1}\t{:.1}\t{:.3}\t{:.2}",
            s.mean_cond_entropy.mean[i],
            s.class_count.mean[i],
            s.class_count.p05[i],
            s.class_count.p95[i],
            s.shuffled_mean_cond_entropy.mean[i],
            s.shuffled_class_count.mean[i],
        );
    }
}

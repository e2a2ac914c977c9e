//! Wilson's algorithm at low disorder, with the step count it needed.

use rand::SeedableRng;
use rand_xoshiro::Xoshiro256PlusPlus;
use rstre::env::gen_environment;
use rstre::samplers::{default_step_budget, wilson_run};
use rstre::weights::log_weight_view;

fn main() -> rstre::Result<()> {
    let n = 500;
    let nf = n as f64;
    let env = gen_environment(n, 1)?;
    let g = log_weight_view(&env, nf / (8.0 * nf.ln()))?;
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(2);
    for _ in 0..5 {
        let run = wilson_run(&g, 0, default_step_budget(n), &mut rng)?;
        println!("diameter {:>3}  steps {:>6}  sqrt(n) = {:.1}", run.tree.diameter(), run.steps, nf.sqrt());
    }
    Ok(())
}

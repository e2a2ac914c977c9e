//! Spectrum, mixing time, bottleneck bracket and the balanced / mixing /
//! escaping report of the weighted walk, plus a walk to the giant cluster.

use rand::SeedableRng;
use rand_xoshiro::Xoshiro256PlusPlus;
use rstre::env::gen_environment;
use rstre::er::clusters_at;
use rstre::walk::{bottleneck_bounds, chain_spectrum, check_conditions, run_to_giant};
use rstre::weights::log_weight_view;

fn main() -> rstre::Result<()> {
    let n = 200;
    let nf = n as f64;
    let env = gen_environment(n, 3)?;
    for (label, beta) in [("low", nf / (72.0 * nf.ln())), ("boundary", nf), ("breakdown", nf.powf(1.2))] {
        let g = log_weight_view(&env, beta)?;
        let spec = chain_spectrum(&g)?;
        let b = bottleneck_bounds(&g, &[])?;
        let r = check_conditions(&g, 0.05)?;
        println!(
            "{label:>9}: gap {:.4}, Phi in [{:.4}, {:.4}], D {:.3e}, tmix {}, theta {:.2}, verdict {}",
            spec.gap, b.lower, b.upper, r.d, r.tmix, r.theta, r.verdict
        );
    }

    let g = log_weight_view(&env, nf)?;
    let dec = clusters_at(&env, 1.5 / nf)?;
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(1);
    let s = run_to_giant(&g, &dec, dec.component(dec.len() - 1)[0] as usize, 1_000_000, &mut rng)?;
    println!("walk to giant: {} steps, {} vertices, {} clusters", s.steps, s.ran, s.clusters_visited);
    Ok(())
}

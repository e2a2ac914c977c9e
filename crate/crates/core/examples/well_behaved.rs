//! The slightly supercritical schedule p_i and the events A, B, C along it.

use rstre::env::SparseEnvironment;
use rstre::er::{p_schedule, well_behaved_flags};

fn main() -> rstre::Result<()> {
    let n = 100_000;
    let eps = (n as f64).powf(-1.0 / 3.0);
    let sched = p_schedule(n, eps, 4.0)?;
    let env = SparseEnvironment::generate(n, 8, sched.p[sched.m + 2])?;
    println!("m = {}, p_0 = {:.4e}, p_m = {:.4e}", sched.m, sched.p[0], sched.p[sched.m]);
    for i in 0..=sched.m {
        let f = well_behaved_flags(&env, &sched, i)?;
        println!("i={i:>2} g={:>7.3}  A={} B={} C={}{}", sched.g[i], f.a, f.b, f.c, if f.approximate { " (bound)" } else { "" });
    }
    Ok(())
}

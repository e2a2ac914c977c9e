//! Generate a disorder on K_n, view it as log-weights at some beta, and
//! round-trip the text format.

use rstre::env::{canonical_edge_id, gen_environment, Environment};
use rstre::weights::log_weight_view;

fn main() -> rstre::Result<()> {
    let n = 6;
    let env = gen_environment(n, 42)?;
    println!("omega(0,1) = {:.6}, edge id {:?}", env.omega(0, 1), canonical_edge_id(0, 1, n)?);

    let g = log_weight_view(&env, 3.0)?;
    for (e, u, v) in g.edges().into_iter().take(4) {
        println!("edge {u}-{v}: log w = {:.4}", g.log_w(e));
    }

    let mut buf = Vec::new();
    env.write_text(&mut buf)?;
    let back = Environment::read_text(&buf[..])?;
    assert_eq!(back, env);
    println!("{} bytes of text, round trip ok", buf.len());
    Ok(())
}

//! Values far outside the f64 range, as used by the oracle.

use rstre::xfloat::XFloat;

fn main() {
    let a = XFloat::exp_of(-1e6);
    let b = XFloat::exp_of(-1e6 + 2.0);
    println!("a = {a}, a as f64 = {}", a.to_f64());
    println!("b / a = {:.12} (e^2 = {:.12})", (b / a).to_f64(), 2f64.exp());
    println!("ln(a + b) = {:.6}", (a + b).ln());
}

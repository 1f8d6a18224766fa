use radpress::singular_integrals::*;
use rand::{Rng, SeedableRng};

fn main() {
    let ctrl = QuadratureControl::default();
    let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    let mut kept = 0;
    let mut tried = 0;
    while kept < 150 {
        tried += 1;
        let b: f64 = rng.gen_range(0.75..1.25);
        let omega: f64 = rng.gen_range(0.9..1.8);
        let a: f64 = rng.gen_range(-1.0..1.0) * b * b;
        let s = SeparationParams::new(a, b).unwrap();
        // anti-cancellation guard: reject configs where the two closed-form
        // terms nearly cancel
        let (sn, cs) = (b * omega).sin_cos();
        let c_sin = b * b * (b * b + a) * omega * omega + b * b - 3.0 * a;
        let c_cos = omega * b * (3.0 * a - b * b);
        let bracket = c_sin * sn + c_cos * cs;
        if bracket.abs() < 0.3 * c_sin.hypot(c_cos) {
            continue;
        }
        kept += 1;
        let tau = 1.0e4 / omega;
        let numeric = j_numeric_oracle(s, omega, tau, &ctrl).unwrap();
        let closed = j_closed_form(s, omega, tau).unwrap();
        let gap = ((numeric - closed) / closed).abs();
        if gap > worst {
            worst = gap;
            println!("new worst a={a:+.3} b={b:.3} w={omega:.3}: gap {gap:.3e}");
        }
    }
    println!("kept {kept}/{tried}, worst gap: {worst:.3e}");
}

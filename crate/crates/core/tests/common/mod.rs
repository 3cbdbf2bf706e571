#![allow(dead_code)]

use cubkit::{Sigma, WeightSpec};

pub fn spec(a: f64, b: f64, s: Sigma) -> WeightSpec {
    WeightSpec::new(a, b, s).unwrap()
}

/// `∫_{-1}^{1} f(t) (1-t)^a (1+t)^b dt / ∫ (1-t)^a (1+t)^b dt` by tanh-sinh
/// quadrature, with `1 ∓ t` formed without cancellation.
pub fn jacobi_integral<F: Fn(f64) -> f64>(a: f64, b: f64, f: F) -> f64 {
    let h = 1.0 / 128.0;
    let half_pi = std::f64::consts::FRAC_PI_2;
    let (mut num, mut den) = (0.0, 0.0);
    let kmax = (6.5 / h) as i64;
    for k in -kmax..=kmax {
        let s = k as f64 * h;
        let z = half_pi * s.sinh();
        let one_minus = 2.0 / (1.0 + (2.0 * z).exp());
        let one_plus = 2.0 / (1.0 + (-2.0 * z).exp());
        if one_minus == 0.0 || one_plus == 0.0 {
            continue;
        }
        let t = z.tanh();
        let dt = half_pi * s.cosh() / z.cosh().powi(2);
        let w = one_minus.powf(a) * one_plus.powf(b) * dt;
        num += w * f(t);
        den += w;
    }
    num / den
}

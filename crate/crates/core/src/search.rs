//! Derivative-free search machinery shared by the variational estimators.
//!
//! Everything here is deterministic given the seed: each restart draws from
//! its own ChaCha stream, so adding restarts never changes earlier ones.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::circle::C64;

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Golden-section search for a maximum of `f` on `[a, b]`.
pub(crate) fn golden_max(mut f: impl FnMut(f64) -> f64, mut a: f64, mut b: f64, iters: usize) -> (f64, f64) {
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..iters {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

pub(crate) fn golden_min(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, iters: usize) -> (f64, f64) {
    let (x, v) = golden_max(|t| -f(t), a, b, iters);
    (x, -v)
}

/// Independent generator for restart `index` under `seed`.
pub(crate) fn restart_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index + 1);
    rng
}

pub(crate) fn random_coeffs(rng: &mut ChaCha8Rng, len: usize) -> Vec<C64> {
    (0..len).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect()
}

pub(crate) type GridNorm<'a> = dyn Fn(&[C64]) -> f64 + 'a;

/// Maximizes `num(Σ c_j U_j) / den(Σ c_j V_j)` over complex coefficients `c`.
///
/// Both numerator and denominator are linear images of `c`, given by their
/// columns, so a coordinate move costs one pass over the sample vectors.
pub(crate) struct LinearRatio<'a> {
    pub num_cols: Vec<Vec<C64>>,
    pub den_cols: Vec<Vec<C64>>,
    pub num: &'a GridNorm<'a>,
    pub den: &'a GridNorm<'a>,
}

/// Coordinate-ascent parameters.
#[derive(Debug, Clone, Copy)]
pub(crate) struct AscentParams {
    pub sweeps: usize,
    pub scan_points: usize,
    pub golden_iters: usize,
}

impl Default for AscentParams {
    fn default() -> Self {
        Self { sweeps: 3, scan_points: 8, golden_iters: 20 }
    }
}

fn combine(cols: &[Vec<C64>], c: &[C64]) -> Vec<C64> {
    let len = cols.first().map_or(0, |v| v.len());
    let mut out = vec![C64::default(); len];
    for (col, &cj) in cols.iter().zip(c) {
        if cj.norm() == 0.0 {
            continue;
        }
        for (o, &u) in out.iter_mut().zip(col) {
            *o += cj * u;
        }
    }
    out
}

impl LinearRatio<'_> {
    pub fn dim(&self) -> usize {
        self.den_cols.len()
    }

    fn ratio(&self, num_v: &[C64], den_v: &[C64]) -> f64 {
        let d = (self.den)(den_v);
        if !(d > 0.0) {
            return 0.0;
        }
        let v = (self.num)(num_v) / d;
        if v.is_finite() {
            v
        } else {
            0.0
        }
    }

    #[cfg(test)]
    pub fn value(&self, c: &[C64]) -> f64 {
        self.ratio(&combine(&self.num_cols, c), &combine(&self.den_cols, c))
    }

    /// Projected coordinate ascent over real and imaginary parts from `start`.
    ///
    /// The returned value is never below the value at `start`. The returned
    /// coefficients are rescaled so that the denominator equals one.
    pub fn ascend(&self, start: &[C64], params: AscentParams) -> (Vec<C64>, f64) {
        let mut c = start.to_vec();
        let mut num_v = combine(&self.num_cols, &c);
        let mut den_v = combine(&self.den_cols, &c);
        let mut best = self.ratio(&num_v, &den_v);
        let mut tmp_num = num_v.clone();
        let mut tmp_den = den_v.clone();
        let dirs = [C64::new(1.0, 0.0), C64::new(0.0, 1.0)];

        for _ in 0..params.sweeps {
            for j in 0..self.dim() {
                let (uj, vj) = (&self.num_cols[j], &self.den_cols[j]);
                if vj.iter().all(|z| z.norm() == 0.0) && uj.iter().all(|z| z.norm() == 0.0) {
                    continue;
                }
                for dir in dirs {
                    let radius = 2.0 * c.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1e-12);
                    let mut eval = |t: f64| {
                        let s = dir * t;
                        for ((o, &b), &u) in tmp_num.iter_mut().zip(&num_v).zip(uj) {
                            *o = b + s * u;
                        }
                        for ((o, &b), &v) in tmp_den.iter_mut().zip(&den_v).zip(vj) {
                            *o = b + s * v;
                        }
                        self.ratio(&tmp_num, &tmp_den)
                    };
                    let n = params.scan_points.max(2);
                    let (mut t_best, mut f_best) = (0.0, best);
                    for i in 0..=n {
                        let t = -radius + 2.0 * radius * i as f64 / n as f64;
                        if t == 0.0 {
                            continue;
                        }
                        let v = eval(t);
                        if v > f_best {
                            t_best = t;
                            f_best = v;
                        }
                    }
                    let h = radius / n as f64;
                    let (t_g, f_g) = golden_max(&mut eval, t_best - h, t_best + h, params.golden_iters);
                    let (t_new, f_new) = if f_g > f_best { (t_g, f_g) } else { (t_best, f_best) };
                    if f_new > best && t_new != 0.0 {
                        let s = dir * t_new;
                        c[j] += s;
                        for (o, &u) in num_v.iter_mut().zip(uj) {
                            *o += s * u;
                        }
                        for (o, &v) in den_v.iter_mut().zip(vj) {
                            *o += s * v;
                        }
                        best = f_new;
                    }
                }
            }
        }
        let d = (self.den)(&den_v);
        if d > 0.0 {
            c.iter_mut().for_each(|z| *z /= d);
        }
        (c, best)
    }
}
